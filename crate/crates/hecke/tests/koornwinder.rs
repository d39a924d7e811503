use masep_algebra::par::Exec;
use masep_algebra::{int, rat, Field, Rational, UniRatFun};
use masep_hecke::linalg::rank;
use masep_hecke::*;
use masep_weyl::{length_and_minus, orbit, order_succeq, Composition};

fn params() -> HeckeParams {
    HeckeParams::new(rat(1, 3), int(2), int(3), rat(-1, 5), rat(-1, 7))
}

/// Three generic parameter points with numeric `q`.
fn points() -> Vec<(HeckeParams, Rational)> {
    vec![
        (params(), rat(7, 3)),
        (
            HeckeParams::new(rat(2, 5), rat(-3, 2), rat(5, 4), rat(1, 6), rat(-4, 3)),
            rat(-13, 5),
        ),
        (
            HeckeParams::new(rat(-3, 7), rat(1, 4), int(-2), rat(7, 5), rat(2, 9)),
            rat(11, 4),
        ),
    ]
}

fn boxed(n: usize, r: i32) -> Vec<Composition> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|c: Vec<i32>| (-r..=r).map(move |v| [c.clone(), vec![v]].concat()))
            .collect();
    }
    out
}

fn assert_eigen<S: Field>(ctx: &HeckeContext<S>, lambda: &[i32], e: &XPoly<S>) {
    assert!(e.coeff(lambda).equals(&S::fone()), "{lambda:?} not monic");
    let y = ctx.spectral_values(lambda);
    for (i, r) in eigen_residuals(ctx, e, &y).unwrap().into_iter().enumerate() {
        assert!(r.is_zero(), "Y_{} E_{lambda:?} residual", i + 1);
    }
}

#[test]
fn trivial_sector_is_constant() {
    for n in 1..=4 {
        let ctx = HeckeContext::new(n, params(), rat(7, 3)).unwrap();
        assert!(nonsymmetric_e(&ctx, &vec![0; n])
            .unwrap()
            .equals(&XPoly::one(n)));
        let fam = f_family(&ctx, &vec![0; n]).unwrap();
        assert_eq!(fam.members.len(), 1);
        assert!(symmetrise(&ctx, &fam).unwrap().equals(&XPoly::one(n)));
    }
}

#[test]
fn one_variable_negative_weight() {
    let ctx = HeckeContext::new(1, params(), rat(7, 3)).unwrap();
    let e = nonsymmetric_e(&ctx, &[-1]).unwrap();
    assert!(e.support().all(|m| (-1..=1).contains(&m[0])));
    assert_eigen(&ctx, &[-1], &e);
    // y_1(-1) = q^{-1} t^{ρ_1} with ρ(-1) = (0) reflected to (0)
    assert_eq!(ctx.spectral_values(&[-1])[0], int(1) / &ctx.q);
}

#[test]
fn eigenfunctions_in_small_sectors() {
    for (p, q) in points() {
        for n in 1..=3 {
            let ctx = HeckeContext::new(n, p.clone(), q.clone()).unwrap();
            let lams = boxed(n, 2);
            let es = Exec::default().map(&lams, |l| nonsymmetric_e(&ctx, l));
            for (l, e) in lams.iter().zip(es) {
                assert_eigen(&ctx, l, &e.unwrap_or_else(|err| panic!("{l:?}: {err}")));
            }
        }
    }
}

#[test]
fn symbolic_q_agrees_with_numeric_specialisation() {
    let sym = HeckeContext::symbolic(2, params()).unwrap();
    let num = HeckeContext::new(2, params(), rat(7, 3)).unwrap();
    for l in [vec![1, -1], vec![-2, 1], vec![0, 2]] {
        let es = nonsymmetric_e(&sym, &l).unwrap();
        assert_eigen(&sym, &l, &es);
        let spec = es.map_coeffs(|c: &UniRatFun| c.eval(&rat(7, 3))).unwrap();
        assert!(spec.equals(&nonsymmetric_e(&num, &l).unwrap()), "{l:?}");
    }
}

#[test]
fn span_stays_below_leading_weight() {
    let ctx = HeckeContext::new(2, params(), rat(7, 3)).unwrap();
    for l in boxed(2, 2) {
        let e = nonsymmetric_e(&ctx, &l).unwrap();
        for m in e.support() {
            assert!(order_succeq(&l, m).unwrap(), "{m:?} above {l:?}");
        }
    }
}

#[test]
fn degenerate_spectrum_is_reported() {
    // q t_0 t_n = q^{-1} makes y(1) = y(-1) for one variable
    let p = params();
    let q = -int(1) / (&p.a * &p.c * p.tn());
    let ctx = HeckeContext::new(1, p, q).unwrap();
    assert_eq!(ctx.spectral_values(&[1]), ctx.spectral_values(&[-1]));
    assert!(matches!(
        nonsymmetric_e(&ctx, &[1]),
        Err(HeckeError::Degenerate { .. })
    ));
}

#[test]
fn interior_recursion_holds_with_spectral_vector_reading() {
    for (p, q) in points() {
        for n in 2..=3 {
            let ctx = HeckeContext::new(n, p.clone(), q.clone()).unwrap();
            for l in boxed(n, 2) {
                for i in 1..n {
                    if l[i - 1] < l[i] {
                        let rec =
                            tione_sides(&ctx, &l, i, SpectralReading::SpectralVector).unwrap();
                        assert!(rec.holds(), "{l:?}, i = {i}");
                    }
                }
            }
        }
    }
}

#[test]
fn interior_recursion_fails_with_eigenvalue_ratio_reading() {
    // t^u = y_{i+1}/y_i is off by a factor t from the spectral-vector exponent
    let ctx = HeckeContext::new(2, params(), rat(7, 3)).unwrap();
    for l in [vec![-2, -1], vec![-1, 0], vec![0, 1], vec![-1, 2]] {
        let rec = tione_sides(&ctx, &l, 1, SpectralReading::EigenvalueRatio).unwrap();
        assert!(!rec.holds(), "{l:?}");
    }
}

#[test]
fn boundary_recursion_holds_with_negated_scalar() {
    for (p, q) in points() {
        for n in 1..=3 {
            let ctx = HeckeContext::new(n, p.clone(), q.clone()).unwrap();
            for l in boxed(n, 2) {
                if l[n - 1] < 0 {
                    let rec = tnone_sides(&ctx, &l).unwrap();
                    assert!(rec.holds_with_negated_scalar(), "{l:?}");
                    assert!(!rec.holds(), "{l:?}");
                }
            }
        }
    }
}

fn family_sectors() -> Vec<(usize, Composition)> {
    vec![
        (1, vec![2]),
        (2, vec![1, 0]),
        (2, vec![2, 1]),
        (2, vec![1, 1]),
        (3, vec![1, 0, 0]),
        (3, vec![2, 1, 0]),
        (3, vec![2, 2, 1]),
    ]
}

#[test]
fn family_is_path_independent_and_indexed_by_orbit() {
    for (n, l) in family_sectors() {
        let ctx = HeckeContext::new(n, params(), rat(7, 3)).unwrap();
        let fam = f_family(&ctx, &l).unwrap();
        let mut orb = orbit(&l, None);
        orb.sort();
        assert_eq!(fam.members.keys().cloned().collect::<Vec<_>>(), orb);
        assert!(fam.members[&fam.delta].coeff(&fam.delta).equals(&int(1)));
        check_path_independence(&ctx, &fam).unwrap();
    }
}

#[test]
fn family_exchange_relations() {
    for (n, l) in family_sectors() {
        let ctx = HeckeContext::new(n, params(), rat(7, 3)).unwrap();
        let fam = f_family(&ctx, &l).unwrap();
        for (mu, f) in &fam.members {
            let t0f = ctx.apply(0, f).unwrap();
            if mu[0] < 0 {
                let mut nu = mu.clone();
                nu[0] = -nu[0];
                assert!(
                    t0f.equals(&fam.members[&nu].scale(&ctx.q.powi(mu[0] as i64).unwrap())),
                    "T_0 f_{mu:?}"
                );
            } else if mu[0] == 0 {
                assert!(t0f.equals(&f.scale(ctx.t0())), "T_0 f_{mu:?}");
            }
            for i in 1..n {
                let tf = ctx.apply(i, f).unwrap();
                if mu[i - 1] == mu[i] {
                    assert!(tf.equals(&f.scale(ctx.t())), "T_{i} f_{mu:?}");
                } else if mu[i - 1] > mu[i] {
                    let mut nu = mu.clone();
                    nu.swap(i - 1, i);
                    assert!(tf.equals(&fam.members[&nu]), "T_{i} f_{mu:?}");
                }
            }
            let tnf = ctx.apply(n, f).unwrap();
            if mu[n - 1] == 0 {
                assert!(tnf.equals(&f.scale(ctx.tn())), "T_n f_{mu:?}");
            } else if mu[n - 1] > 0 {
                let mut nu = mu.clone();
                nu[n - 1] = -nu[n - 1];
                assert!(tnf.equals(&fam.members[&nu]), "T_n f_{mu:?}");
            }
        }
    }
}

#[test]
fn symmetric_polynomial_is_invariant() {
    for (n, l) in family_sectors() {
        let ctx = HeckeContext::new(n, params(), rat(7, 3)).unwrap();
        let k = symmetrise(&ctx, &f_family(&ctx, &l).unwrap()).unwrap();
        for i in 0..n - 1 {
            assert!(k.swap_vars(i, i + 1).equals(&k), "{l:?} swap {i}");
        }
        assert!(k.invert_var(n - 1).equals(&k), "{l:?} x_n -> 1/x_n");
    }
}

#[test]
fn symmetrise_rejects_a_broken_family() {
    let ctx = HeckeContext::new(2, params(), rat(7, 3)).unwrap();
    let mut fam = f_family(&ctx, &[1, 0]).unwrap();
    let some = fam.members.keys().next().unwrap().clone();
    fam.members
        .insert(some.clone(), fam.members[&some].scale(&int(2)));
    assert!(matches!(
        symmetrise(&ctx, &fam),
        Err(HeckeError::NotInvariant(_))
    ));
}

#[test]
fn change_of_basis_is_triangular_and_invertible() {
    for (n, l) in family_sectors() {
        let ctx = HeckeContext::new(n, params(), rat(7, 3)).unwrap();
        let fam = f_family(&ctx, &l).unwrap();
        let (orb, rows) = change_of_basis(&ctx, &fam, Exec::default()).unwrap();
        assert_eq!(rank(&rows), orb.len(), "{l:?}");
        for (a, row) in orb.iter().zip(&rows) {
            let la = length_and_minus(a, None).0;
            assert!(
                !row[orb.iter().position(|m| m == a).unwrap()].fis_zero(),
                "diagonal {a:?}"
            );
            for (b, c) in orb.iter().zip(row) {
                if !c.fis_zero() && a != b {
                    // E_a sees f_b only for shorter b, lying below a in the Bruhat-type order
                    assert!(length_and_minus(b, None).0 < la, "E_{a:?} has f_{b:?}");
                    assert!(order_succeq(a, b).unwrap(), "E_{a:?} has f_{b:?}");
                }
            }
        }
    }
}

#[test]
fn parallel_and_sequential_spans_agree() {
    let ctx = HeckeContext::new(3, params(), rat(7, 3)).unwrap();
    for l in [vec![2, -1, 0], vec![-2, -2, 1]] {
        let a = nonsymmetric_e_with(&ctx, &l, Exec::Sequential).unwrap();
        let b = nonsymmetric_e_with(&ctx, &l, Exec::default()).unwrap();
        assert!(a.equals(&b));
    }
}

#[test]
fn wrong_length_is_rejected() {
    let ctx = HeckeContext::new(2, params(), rat(7, 3)).unwrap();
    assert!(matches!(
        nonsymmetric_e(&ctx, &[1]),
        Err(HeckeError::InvalidInput(_))
    ));
    assert!(tione_sides(&ctx, &[1, 0], 1, SpectralReading::SpectralVector).is_err());
    assert!(tnone_sides(&ctx, &[1, 0]).is_err());
}
