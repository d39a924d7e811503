use std::fmt;
use std::str::FromStr;

use masep_algebra::{fmt_rational, int, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::LatticeError;

/// How boundary K-matrices pair a negative label `-i` with a positive one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `-i <-> +i`
    #[default]
    Magnitude,
    /// `-i <-> r+1-i`
    Mirror,
}

impl Convention {
    pub fn partner(self, i: usize, r: usize) -> usize {
        match self {
            Convention::Magnitude => i,
            Convention::Mirror => r + 1 - i,
        }
    }
}

impl FromStr for Convention {
    type Err = LatticeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "magnitude" => Ok(Convention::Magnitude),
            "mirror" => Ok(Convention::Mirror),
            _ => Err(LatticeError::InvalidSpec(format!("unknown convention {s}"))),
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Magnitude => "magnitude",
            Convention::Mirror => "mirror",
        })
    }
}

/// Model parameters. `q` only enters the deformed left boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamPoint {
    pub t: Rational,
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
    pub q: Rational,
}

impl ParamPoint {
    pub fn new(t: Rational, a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        ParamPoint {
            t,
            a,
            b,
            c,
            d,
            q: Rational::one(),
        }
    }

    /// `t_0 = -ac` (lattice side, q = 1).
    pub fn t0(&self) -> Rational {
        -(&self.a * &self.c)
    }

    /// `t_0 = -ac/q` as used with the deformed boundary.
    pub fn t0_q(&self) -> Rational {
        -(&self.a * &self.c) / &self.q
    }

    pub fn tn(&self) -> Rational {
        -(&self.b * &self.d)
    }

    pub fn h0(&self, x: &Rational) -> Rational {
        (x + &self.a) * (x + &self.c)
    }

    pub fn hn(&self, x: &Rational) -> Rational {
        (&self.b * x + int(1)) * (&self.d * x + int(1))
    }
}

impl fmt::Display for ParamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "t={} a={} b={} c={} d={}",
            fmt_rational(&self.t),
            fmt_rational(&self.a),
            fmt_rational(&self.b),
            fmt_rational(&self.c),
            fmt_rational(&self.d)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSpec {
    pub n: usize,
    pub r: usize,
    pub params: ParamPoint,
    pub rl: usize,
    pub rr: usize,
    pub convention: Convention,
}

impl ModelSpec {
    pub fn new(n: usize, r: usize, params: ParamPoint) -> Result<Self, LatticeError> {
        Self::generalised(n, r, params, 0, 0, Convention::Magnitude)
    }

    pub fn generalised(
        n: usize,
        r: usize,
        params: ParamPoint,
        rl: usize,
        rr: usize,
        convention: Convention,
    ) -> Result<Self, LatticeError> {
        if n == 0 || r == 0 {
            return Err(LatticeError::InvalidSpec("need n >= 1 and r >= 1".into()));
        }
        if rl > r || rr > r {
            return Err(LatticeError::InvalidSpec(format!(
                "cutoffs ({rl}, {rr}) exceed r = {r}"
            )));
        }
        if params.t.is_zero() {
            return Err(LatticeError::InvalidSpec("t must be nonzero".into()));
        }
        Ok(ModelSpec {
            n,
            r,
            params,
            rl,
            rr,
            convention,
        })
    }

    pub fn with_convention(mut self, c: Convention) -> Self {
        self.convention = c;
        self
    }

    pub fn local_dim(&self) -> usize {
        2 * self.r + 1
    }

    pub fn dim(&self) -> usize {
        self.local_dim().pow(self.n as u32)
    }

    pub fn site_factors(&self) -> Vec<usize> {
        vec![self.local_dim(); self.n]
    }

    pub fn config_index(&self, mu: &[i32]) -> usize {
        config_index(mu, self.r)
    }

    pub fn config(&self, idx: usize) -> Vec<i32> {
        config_of(idx, self.n, self.r)
    }
}

/// `index(mu) = sum_i (mu_i + r) (2r+1)^(n-i)`, site 1 most significant.
pub fn config_index(mu: &[i32], r: usize) -> usize {
    let d = 2 * r + 1;
    mu.iter().fold(0, |acc, &m| {
        let digit = m + r as i32;
        assert!(
            digit >= 0 && (digit as usize) < d,
            "label {m} out of range for r = {r}"
        );
        acc * d + digit as usize
    })
}

pub fn config_of(mut idx: usize, n: usize, r: usize) -> Vec<i32> {
    let d = 2 * r + 1;
    let mut mu = vec![0; n];
    for k in (0..n).rev() {
        mu[k] = (idx % d) as i32 - r as i32;
        idx /= d;
    }
    mu
}

/// Boundary and bulk rates of the particle model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rates {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub delta: Rational,
    pub t: Rational,
}

impl Rates {
    pub fn nonnegative(&self) -> bool {
        [&self.alpha, &self.beta, &self.gamma, &self.delta, &self.t]
            .iter()
            .all(|x| !x.is_negative())
    }
}

pub fn rates(p: &ParamPoint) -> Result<Rates, LatticeError> {
    let one = Rational::one();
    let l = (&one + &p.a) * (&one + &p.c);
    let r = (&one + &p.b) * (&one + &p.d);
    if l.is_zero() || r.is_zero() {
        return Err(LatticeError::Pole(
            "(1+a)(1+c) or (1+b)(1+d) vanishes".into(),
        ));
    }
    let s = &one - &p.t;
    Ok(Rates {
        alpha: -(&p.a * &p.c) * &s / &l,
        gamma: &s / &l,
        beta: -(&p.b * &p.d) * &s / &r,
        delta: &s / &r,
        t: p.t.clone(),
    })
}

fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let (n, d): (&BigInt, &BigInt) = (x.numer(), x.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(Rational::new(sn, sd))
    } else {
        None
    }
}

/// Both solutions `(a, c)` of `alpha = -ac(1-t)/((1+a)(1+c))`, `gamma = (1-t)/((1+a)(1+c))`.
///
/// The same map gives `(b, d)` from `(beta, delta)`. `a` and `c` are the roots of
/// `z^2 - s z + p` with `p = -alpha/gamma`, `s = (1 - t - gamma + alpha)/gamma`; the
/// two branches are the two orderings. Fails when the roots are irrational.
pub fn inverse_rate_map(
    alpha: &Rational,
    gamma: &Rational,
    t: &Rational,
) -> Result<[(Rational, Rational); 2], LatticeError> {
    if gamma.is_zero() {
        return Err(LatticeError::InvalidSpec(
            "gamma must be nonzero to invert the rate map".into(),
        ));
    }
    let p = -(alpha / gamma);
    let s = (Rational::one() - t - gamma + alpha) / gamma;
    let disc = &s * &s - int(4) * &p;
    let root = rational_sqrt(&disc).ok_or_else(|| {
        LatticeError::InvalidSpec(format!(
            "irrational inverse: discriminant {}",
            fmt_rational(&disc)
        ))
    })?;
    let z1 = (&s + &root) / int(2);
    let z2 = (&s - &root) / int(2);
    Ok([(z1.clone(), z2.clone()), (z2, z1)])
}

/// Floating-point version of [`inverse_rate_map`], for rates that need not give rational roots.
pub fn inverse_rate_map_f64(alpha: f64, gamma: f64, t: f64) -> Option<[(f64, f64); 2]> {
    if gamma == 0.0 {
        return None;
    }
    let p = -alpha / gamma;
    let s = (1.0 - t - gamma + alpha) / gamma;
    let disc = s * s - 4.0 * p;
    if disc < 0.0 {
        return None;
    }
    let z1 = (s + disc.sqrt()) / 2.0;
    let z2 = (s - disc.sqrt()) / 2.0;
    Some([(z1, z2), (z2, z1)])
}
