use masep_algebra::*;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn xy() -> Vars {
    vars(&["x1", "x2", "q"])
}

fn poly_strategy() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(((-2i32..3, -2i32..3, -1i32..2), -5i64..6, 1i64..4), 0..6).prop_map(
        |ts| {
            LaurentPoly::from_terms(
                xy(),
                ts.into_iter()
                    .map(|((a, b, c), n, d)| (vec![a, b, c], rat(n, d))),
            )
        },
    )
}

#[test]
fn cancellation_and_inverse_monomial() {
    let v = xy();
    let x1 = LaurentPoly::var(v.clone(), 0);
    let x2 = LaurentPoly::var(v.clone(), 1);
    let s = &(&x1 + &x2) + &(&x1 - &x2);
    assert_eq!(s, x1.scale(&int(2)));
    let inv = LaurentPoly::monomial(v.clone(), vec![-1, 0, 0], int(1));
    assert_eq!(&inv * &x1, LaurentPoly::one(v));
}

#[test]
fn ratfun_times_denominator_is_numerator() {
    let v = vars(&["x", "q", "a"]);
    let x = LaurentPoly::var(v.clone(), 0);
    let q = LaurentPoly::var(v.clone(), 1);
    let a = LaurentPoly::var(v.clone(), 2);
    let num = &q - &(&x * &x);
    let den = &x + &a;
    let f = RatFun::new(num.clone(), den.clone()).unwrap();
    let g = f.try_mul(&RatFun::from_poly(den)).unwrap();
    assert!(g.equals(&RatFun::from_poly(num.clone())));
    // the product reduces to a polynomial with identical term map
    let expanded = g.num().try_mul(&LaurentPoly::one(v.clone())).unwrap();
    assert!(RatFun::new(expanded, g.den().clone())
        .unwrap()
        .equals(&RatFun::from_poly(num)));
}

#[test]
fn substitution_examples() {
    let v = vars(&["x1", "x2"]);
    let f = LaurentPoly::monomial(v.clone(), vec![1, -1], int(1));
    let r = f
        .substitute(&[(0, Subst::Value(int(2))), (1, Subst::Value(int(3)))])
        .unwrap();
    assert_eq!(r.as_constant().unwrap(), rat(2, 3));

    let v = vars(&["x1", "q"]);
    let x1 = LaurentPoly::var(v.clone(), 0);
    let q_over_x1 = LaurentPoly::monomial(v.clone(), vec![-1, 1], int(1));
    let r = x1
        .substitute(&[(0, Subst::Poly(q_over_x1.clone()))])
        .unwrap();
    assert_eq!(r, q_over_x1);

    let f = &x1 + &LaurentPoly::monomial(v.clone(), vec![-1, 0], int(1));
    assert_eq!(
        f.substitute(&[(0, Subst::Value(int(1)))])
            .unwrap()
            .as_constant()
            .unwrap(),
        int(2)
    );

    let err = f.substitute(&[(0, Subst::Value(int(0)))]);
    assert!(matches!(err, Err(AlgebraError::Pole(_))));
}

#[test]
fn mismatched_variables_are_rejected() {
    let a = LaurentPoly::var(vars(&["x"]), 0);
    let b = LaurentPoly::var(vars(&["y"]), 0);
    assert!(matches!(
        a.try_add(&b),
        Err(AlgebraError::VariableMismatch(..))
    ));
}

#[test]
fn derivative_examples() {
    let w = UniRatFun::var();
    let w2 = w.mul(&w);
    assert_eq!(w2.derivative().eval(&int(1)).unwrap(), int(2));
    let inv = w.inv().unwrap();
    let d = inv.derivative();
    assert_eq!(d, UniRatFun::monomial(-2, int(-1)));
}

/// d/dw ((1 - w^2) / ((b w + 1)(d w + 1))) at w = 1, checked against exact
/// difference quotients at h = 1/2^k with Richardson extrapolation.
#[test]
fn derivative_matches_difference_quotients() {
    let (b, d) = (rat(-1, 2), rat(-1, 4));
    let one = UniPoly::one();
    let w = UniPoly::var();
    let num = one.sub(&w.mul(&w));
    let hb = w.scale(&b).add(&one);
    let hd = w.scale(&d).add(&one);
    let f = UniRatFun::new(num, hb.mul(&hd)).unwrap();
    let exact = f.derivative().eval(&int(1)).unwrap();
    let central = |h: &Rational| -> Rational {
        (f.eval(&(int(1) + h)).unwrap() - f.eval(&(int(1) - h)).unwrap()) / (int(2) * h)
    };
    let mut prev_err = None;
    for k in 1..=20 {
        let h = rat(1, 1 << k);
        let d1 = central(&h);
        let d2 = central(&(h.clone() / int(2)));
        let rich = (int(4) * d2 - d1) / int(3);
        let err = (rich - &exact).abs();
        if let Some(p) = prev_err {
            assert!(err <= p, "Richardson error must shrink");
        }
        prev_err = Some(err);
    }
    assert!(prev_err.unwrap() < rat(1, 1_000_000_000));
}

#[test]
fn specialise_q1_examples() {
    let q = vars(&["q"]);
    let qq = LaurentPoly::var(q.clone(), 0);
    let one = LaurentPoly::one(q.clone());
    let f = RatFun::new(&(&qq * &qq) - &one, &qq - &one).unwrap();
    assert_eq!(f.specialise_q1(0).unwrap(), int(2));
    assert_eq!(
        RatFun::constant(q.clone(), int(5))
            .specialise_q1(0)
            .unwrap(),
        int(5)
    );
    let qm1 = &qq - &one;
    // build (q-1)^2/(q-1) without letting the constructor cancel, via the univariate path
    let u = UniRatFun::new(
        qm1.to_unipoly(0).unwrap().1.pow(2),
        qm1.to_unipoly(0).unwrap().1,
    )
    .unwrap();
    assert_eq!(u.value_at_one().unwrap(), int(0));
    let pole = UniRatFun::new(UniPoly::one(), qm1.to_unipoly(0).unwrap().1).unwrap();
    assert_eq!(pole.value_at_one(), Err(AlgebraError::LimitUndefined));
}

#[test]
fn exact_division_in_a_variable() {
    let v = vars(&["x1", "x2"]);
    let x1 = LaurentPoly::var(v.clone(), 0);
    let x2 = LaurentPoly::var(v.clone(), 1);
    let d = &x1 - &x2;
    let f = &(&x1 * &x1) - &(&x2 * &x2);
    let qt = f.div_exact_in(0, &d).unwrap();
    assert_eq!(qt, &x1 + &x2);
    let g = &f + &LaurentPoly::one(v.clone());
    assert_eq!(g.div_exact_in(0, &d), Err(AlgebraError::NotExact));
    // Laurent dividend
    let inv = LaurentPoly::monomial(v.clone(), vec![-3, 1], int(2));
    let h = &(&f * &inv) * &d;
    assert_eq!(h.div_exact_in(0, &d).unwrap(), &f * &inv);
}

#[test]
fn json_round_trip() {
    let v = vars(&["x1", "x2"]);
    let p = LaurentPoly::from_terms(v, vec![(vec![1, -2], rat(3, 4)), (vec![0, 0], int(-7))]);
    let j = serde_json::to_string(&p.to_json()).unwrap();
    assert!(
        j.contains("\"exp\":[1,-2]") && j.contains("\"num\":\"3\"") && j.contains("\"den\":\"4\"")
    );
    let back = LaurentPoly::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
    assert_eq!(back, p);
}

#[test]
fn rational_wire_format() {
    assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
    assert_eq!(fmt_rational(&rat(4, 2)), "2");
    assert_eq!(fmt_rational(&rat(-1, 3)), "-1/3");
    assert!(parse_rational("0.5").is_err());
    assert!(parse_rational("1/0").is_err());
}

#[test]
fn dual_numbers_differentiate() {
    let x = Dual::variable(int(3));
    let y = x.mul(&x).mul(&x).inv().unwrap(); // x^-3
    assert_eq!(y.re, rat(1, 27));
    assert_eq!(y.eps, rat(-3, 81));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a - &a, LaurentPoly::zero(xy()));
    }

    #[test]
    fn substitution_composes(a in poly_strategy(), n in 1i64..5, d in 1i64..5) {
        // x1 -> q/x1 twice is the identity (an involution, like s_0)
        let s = LaurentPoly::monomial(xy(), vec![-1, 0, 1], int(1));
        let once = a.substitute(&[(0, Subst::Poly(s.clone()))]).unwrap();
        let twice = once.substitute(&[(0, Subst::Poly(s))]).unwrap();
        prop_assert_eq!(&twice, &a);
        // substituting x2 -> x1^2 then x1 -> r equals substituting both at once
        let sq = LaurentPoly::monomial(xy(), vec![2, 0, 0], int(1));
        let r = rat(n, d);
        let step = a.substitute(&[(1, Subst::Poly(sq))]).unwrap().substitute(&[(0, Subst::Value(r.clone()))]).unwrap();
        let direct = a.substitute(&[(0, Subst::Value(r.clone())), (1, Subst::Value(&r * &r))]).unwrap();
        prop_assert_eq!(step, direct);
    }

    #[test]
    fn derivative_product_rule(a in poly_strategy(), b in poly_strategy()) {
        let lhs = (&a * &b).derivative(0);
        let rhs = &(&a.derivative(0) * &b) + &(&a * &b.derivative(0));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ratfun_equality_is_an_equivalence(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assume!(!b.is_zero() && !c.is_zero());
        let f = RatFun::new(a.clone(), b.clone()).unwrap();
        let g = RatFun::new(&a * &c, &b * &c).unwrap();
        let h = RatFun::new(&(&a * &c) * &c, &(&b * &c) * &c).unwrap();
        prop_assert!(f.equals(&f));
        prop_assert!(f.equals(&g) && g.equals(&f));
        prop_assert!(g.equals(&h) && f.equals(&h));
    }

    #[test]
    fn univariate_field_axioms(cs in prop::collection::vec(-4i64..5, 1..5), ds in prop::collection::vec(-4i64..5, 1..4)) {
        let p = UniPoly::from_coeffs(cs.iter().map(|&c| int(c)).collect());
        let d = UniPoly::from_coeffs(ds.iter().map(|&c| int(c)).collect());
        prop_assume!(!d.is_zero() && !p.is_zero());
        let f = UniRatFun::new(p.clone(), d.clone()).unwrap();
        let g = f.inv().unwrap();
        prop_assert_eq!(f.mul(&g), UniRatFun::constant(Rational::one()));
        prop_assert!(f.sub(&f).is_zero());
        let (qq, r) = p.div_rem(&d).unwrap();
        prop_assert_eq!(qq.mul(&d).add(&r), p);
        prop_assert!(r.degree().is_none_or(|k| k < d.degree().unwrap()));
        let z = Rational::zero();
        prop_assert_eq!(UniRatFun::constant(z.clone()).add(&f), f);
    }
}
