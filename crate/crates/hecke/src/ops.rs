use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use masep_algebra::{Field, LaurentPoly, Rational, UniRatFun, Vars};
use num_traits::{One, Zero};

use crate::poly::XPoly;
use crate::HeckeError;

/// Parameters of the polynomial representation.
///
/// The lattice boundary parameters enter here with flipped signs; `t_0 = -ac/q` and
/// `t_n = -bd` are unaffected by the flip.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeParams {
    pub t: Rational,
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl HeckeParams {
    pub fn new(t: Rational, a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        HeckeParams { t, a, b, c, d }
    }

    /// From lattice boundary parameters.
    pub fn from_lattice(
        t: &Rational,
        a: &Rational,
        b: &Rational,
        c: &Rational,
        d: &Rational,
    ) -> Self {
        HeckeParams {
            t: t.clone(),
            a: -a,
            b: -b,
            c: -c,
            d: -d,
        }
    }

    pub fn tn(&self) -> Rational {
        -(&self.b * &self.d)
    }
}

type Image<S> = Arc<Vec<(Vec<i32>, S)>>;
type ImageCache<S> = HashMap<(usize, Vec<i32>), Image<S>>;

/// Affine Hecke operators `T_0..T_n` acting on Laurent polynomials in `x_1..x_n`.
///
/// `S` is the coefficient field and must contain `q`: rationals for a numeric `q`,
/// `UniRatFun` for `q` symbolic. Images of monomials are memoised.
#[derive(Debug)]
pub struct HeckeContext<S> {
    pub n: usize,
    pub params: HeckeParams,
    pub q: S,
    t: S,
    t0: S,
    tn: S,
    cache: RwLock<ImageCache<S>>,
}

impl HeckeContext<UniRatFun> {
    /// `q` kept as an indeterminate.
    pub fn symbolic(n: usize, params: HeckeParams) -> Result<Self, HeckeError> {
        HeckeContext::new(n, params, UniRatFun::var())
    }
}

impl<S: Field> HeckeContext<S> {
    pub fn new(n: usize, params: HeckeParams, q: S) -> Result<Self, HeckeError> {
        if n == 0 {
            return Err(HeckeError::InvalidInput(
                "need at least one variable".into(),
            ));
        }
        let f = |r: &Rational| S::from_rational(r);
        let qinv = q.inv().ok_or(HeckeError::ZeroParameter("q"))?;
        let t0 = f(&(-(&params.a * &params.c))).mul(&qinv);
        let tn = f(&params.tn());
        for (v, name) in [(&params.t, "t"), (&params.tn(), "t_n")] {
            if v.is_zero() {
                return Err(HeckeError::ZeroParameter(name));
            }
        }
        if t0.fis_zero() {
            return Err(HeckeError::ZeroParameter("t_0"));
        }
        Ok(HeckeContext {
            n,
            t: f(&params.t),
            params,
            q,
            t0,
            tn,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn t(&self) -> &S {
        &self.t
    }

    pub fn t0(&self) -> &S {
        &self.t0
    }

    pub fn tn(&self) -> &S {
        &self.tn
    }

    /// Eigenvalue `t_i` of the quadratic relation `(T_i - t_i)(T_i + 1) = 0`.
    pub fn ti(&self, i: usize) -> &S {
        if i == 0 {
            &self.t0
        } else if i == self.n {
            &self.tn
        } else {
            &self.t
        }
    }

    fn check_index(&self, i: usize) -> Result<(), HeckeError> {
        if i > self.n || (self.n == 1 && i > 1) {
            return Err(HeckeError::InvalidInput(format!(
                "no generator T_{i} for n = {}",
                self.n
            )));
        }
        Ok(())
    }

    fn check_poly(&self, f: &XPoly<S>) -> Result<(), HeckeError> {
        if f.nvars() != self.n {
            return Err(HeckeError::InvalidInput(format!(
                "polynomial in {} variables, context has {}",
                f.nvars(),
                self.n
            )));
        }
        Ok(())
    }

    /// `s_i` acting on polynomials: `s_0: x_1 -> q/x_1`, `s_n: x_n -> 1/x_n`, otherwise a swap.
    pub fn s_action(&self, i: usize, f: &XPoly<S>) -> Result<XPoly<S>, HeckeError> {
        self.check_index(i)?;
        self.check_poly(f)?;
        if i == 0 {
            let mut r = XPoly::zero(self.n);
            for (e, c) in f.terms() {
                let mut e2 = e.clone();
                e2[0] = -e[0];
                r.add_term(e2, c.mul(&self.qpow(e[0] as i64)));
            }
            Ok(r)
        } else if i == self.n {
            Ok(f.invert_var(self.n - 1))
        } else {
            Ok(f.swap_vars(i - 1, i))
        }
    }

    fn qpow(&self, e: i64) -> S {
        self.q.powi(e).expect("q is invertible")
    }

    /// `T_i f`, computed termwise from memoised monomial images.
    pub fn apply(&self, i: usize, f: &XPoly<S>) -> Result<XPoly<S>, HeckeError> {
        self.check_index(i)?;
        self.check_poly(f)?;
        let mut out = XPoly::zero(self.n);
        for (e, c) in f.terms() {
            let img = self.image(i, e)?;
            for (e2, c2) in img.iter() {
                out.add_term(e2.clone(), c2.mul(c));
            }
        }
        Ok(out)
    }

    fn image(&self, i: usize, e: &[i32]) -> Result<Image<S>, HeckeError> {
        let key = (i, e.to_vec());
        if let Some(v) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(v.clone());
        }
        let img = Arc::new(
            self.monomial_image(i, e)?
                .terms()
                .iter()
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect::<Vec<_>>(),
        );
        self.cache
            .write()
            .expect("cache lock")
            .insert(key, img.clone());
        Ok(img)
    }

    /// `T_i x^e = t_i x^e - g_i(x) (x^e - s_i x^e) / h_i(x)`, computed exactly as a Laurent
    /// polynomial in `(q, x_1..x_n)`. The quotient is written in closed form and multiplied
    /// back against the divisor before use, so a nonzero remainder cannot go unnoticed.
    fn monomial_image(&self, i: usize, e: &[i32]) -> Result<XPoly<S>, HeckeError> {
        let img = laurent_image(self.n, &self.params, i, e)?;
        let mut out = XPoly::zero(self.n);
        for (ex, c) in img.terms() {
            out.add_term(
                ex[1..].to_vec(),
                S::from_rational(c).mul(&self.qpow(ex[0] as i64)),
            );
        }
        Ok(out)
    }

    /// `T_i^{-1} = t_i^{-1} (T_i + 1 - t_i)`.
    pub fn apply_inverse(&self, i: usize, f: &XPoly<S>) -> Result<XPoly<S>, HeckeError> {
        let ti = self.ti(i).clone();
        let inv = ti.inv().ok_or(HeckeError::ZeroParameter("t_i"))?;
        let mut r = self.apply(i, f)?;
        r.add_scaled(f, &S::fone().sub(&ti));
        Ok(r.scale(&inv))
    }

    /// Baxterised operator `T_i + (1-t)/(1-t^u)`, with `t^u` supplied directly.
    pub fn baxterised(&self, i: usize, t_pow_u: &S, f: &XPoly<S>) -> Result<XPoly<S>, HeckeError> {
        let den = S::fone().sub(t_pow_u);
        let inv = den.inv().ok_or(HeckeError::Pole("t^u = 1".into()))?;
        let mut r = self.apply(i, f)?;
        r.add_scaled(f, &S::fone().sub(&self.t).mul(&inv));
        Ok(r)
    }

    /// `Y_i = (T_i..T_{n-1})(T_n..T_0)(T_1^{-1}..T_{i-1}^{-1})`, 1-based `i`, applied right to left.
    pub fn y_operator(&self, i: usize, f: &XPoly<S>) -> Result<XPoly<S>, HeckeError> {
        let n = self.n;
        if i == 0 || i > n {
            return Err(HeckeError::InvalidInput(format!(
                "Y_{i} undefined for n = {n}"
            )));
        }
        let mut g = f.clone();
        for j in (1..i).rev() {
            g = self.apply_inverse(j, &g)?;
        }
        for j in 0..=n {
            g = self.apply(j, &g)?;
        }
        for j in (i..n).rev() {
            g = self.apply(j, &g)?;
        }
        Ok(g)
    }

    /// Spectral values `y_i(λ) = q^{λ_i} t^{n-i+ρ_i} (t_0 t_n)^{ε_i}`.
    pub fn spectral_values(&self, lambda: &[i32]) -> Vec<S> {
        let sv = masep_weyl::rho_and_spectral(lambda);
        let t0tn = self.t0.mul(&self.tn);
        (0..lambda.len())
            .map(|i| {
                let (qe, te, ee) = sv.exponents(lambda, i);
                self.qpow(qe as i64)
                    .mul(&self.t.powi(te as i64).expect("t nonzero"))
                    .mul(&t0tn.powi(ee as i64).expect("t0 tn nonzero"))
            })
            .collect()
    }

    pub fn cache_len(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }
}

/// Image of `x^e` under `T_i` in `Q[q^±, x^±]` (variable 0 is `q`).
pub fn laurent_image(
    n: usize,
    p: &HeckeParams,
    i: usize,
    e: &[i32],
) -> Result<LaurentPoly, HeckeError> {
    let mut names = vec!["q".to_string()];
    names.extend((1..=n).map(|k| format!("x{k}")));
    let vars: Vars = names.into();
    let one = Rational::one();
    let mono = |q: i32, pos: &[(usize, i32)], c: Rational| {
        let mut ex = vec![0; n + 1];
        ex[0] = q;
        for &(k, v) in pos {
            ex[k + 1] += v;
        }
        (ex, c)
    };
    let lp = |terms: Vec<(Vec<i32>, Rational)>| LaurentPoly::from_terms(vars.clone(), terms);
    let mut xe = vec![0];
    xe.extend_from_slice(e);
    let xm = LaurentPoly::monomial(vars.clone(), xe.clone(), one.clone());
    let (ti, sx, g, h, quo) = if i == 0 {
        let m = e[0];
        let mut sxe = xe.clone();
        sxe[0] = m;
        sxe[1] = -m;
        let g = lp(vec![
            mono(0, &[(0, 2)], one.clone()),
            mono(0, &[(0, 1)], -(&p.a + &p.c)),
            mono(0, &[], &p.a * &p.c),
        ]);
        let h = lp(vec![
            mono(0, &[(0, 2)], one.clone()),
            mono(1, &[], -one.clone()),
        ]);
        let k = m.abs();
        let (qshift, sign) = if m > 0 {
            (0, one.clone())
        } else {
            (m, -one.clone())
        };
        let mut quo = Vec::new();
        for j in 0..k {
            let mut ex = xe.clone();
            ex[0] = qshift + j;
            ex[1] = k - 2 - 2 * j;
            quo.push((ex, sign.clone()));
        }
        let t0 = lp(vec![mono(-1, &[], -(&p.a * &p.c))]);
        (
            t0,
            LaurentPoly::monomial(vars.clone(), sxe, one.clone()),
            g,
            h,
            lp(quo),
        )
    } else if i == n {
        let last = n - 1;
        let m = e[last];
        let mut sxe = xe.clone();
        sxe[n] = -m;
        let g = lp(vec![
            mono(0, &[(last, 2)], &p.b * &p.d),
            mono(0, &[(last, 1)], -(&p.b + &p.d)),
            mono(0, &[], one.clone()),
        ]);
        let h = lp(vec![
            mono(0, &[(last, 2)], -one.clone()),
            mono(0, &[], one.clone()),
        ]);
        let k = m.abs();
        let sign = if m > 0 { -one.clone() } else { one.clone() };
        let mut quo = Vec::new();
        for j in 0..k {
            let mut ex = xe.clone();
            ex[n] = 2 * j - k;
            quo.push((ex, sign.clone()));
        }
        (
            lp(vec![mono(0, &[], p.tn())]),
            LaurentPoly::monomial(vars.clone(), sxe, one.clone()),
            g,
            h,
            lp(quo),
        )
    } else {
        let (a, b) = (i - 1, i);
        let mut sxe = xe.clone();
        sxe.swap(a + 1, b + 1);
        let g = lp(vec![
            mono(0, &[(a, 1)], p.t.clone()),
            mono(0, &[(b, 1)], -one.clone()),
        ]);
        let h = lp(vec![
            mono(0, &[(a, 1)], one.clone()),
            mono(0, &[(b, 1)], -one.clone()),
        ]);
        let (ea, eb) = (e[a], e[b]);
        let k = (ea - eb).abs();
        let low = ea.min(eb);
        let sign = if ea > eb { one.clone() } else { -one.clone() };
        let mut quo = Vec::new();
        for j in 0..k {
            let mut ex = xe.clone();
            ex[a + 1] = low + k - 1 - j;
            ex[b + 1] = low + j;
            quo.push((ex, sign.clone()));
        }
        (
            lp(vec![mono(0, &[], p.t.clone())]),
            LaurentPoly::monomial(vars.clone(), sxe, one.clone()),
            g,
            h,
            lp(quo),
        )
    };
    let err = |_| HeckeError::Remainder {
        generator: i,
        exponent: e.to_vec(),
    };
    let numer = xm.try_sub(&sx).map_err(err)?;
    if !quo
        .try_mul(&h)
        .map_err(err)?
        .try_sub(&numer)
        .map_err(err)?
        .is_zero()
    {
        return Err(HeckeError::Remainder {
            generator: i,
            exponent: e.to_vec(),
        });
    }
    let lhs = ti.try_mul(&xm).map_err(err)?;
    lhs.try_sub(&g.try_mul(&quo).map_err(err)?).map_err(err)
}
