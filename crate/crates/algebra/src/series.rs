//! Truncated Laurent series in `ε` with rational coefficients and tracked absolute precision.
//!
//! A value is `ε^val (c_0 + c_1 ε + ...) + O(ε^prec)`; `prec = None` marks an exact value.
//! Used to evaluate rational functions of `q` at `q = 1 + ε` around points where the
//! intermediate linear algebra degenerates, without ever forming the rational functions.

use num_traits::{One, Zero};

use crate::field::Field;
use crate::rational::Rational;
use crate::AlgebraError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series<const N: usize> {
    val: i32,
    coeffs: Vec<Rational>,
    prec: Option<i32>,
}

impl<const N: usize> Series<N> {
    fn build(val: i32, coeffs: Vec<Rational>, prec: Option<i32>) -> Self {
        let mut s = Series { val, coeffs, prec };
        s.normalise();
        s
    }

    fn normalise(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                self.coeffs.clear();
                self.val = 0;
            }
            Some(k) => {
                self.coeffs.drain(..k);
                self.val += k as i32;
                while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                    self.coeffs.pop();
                }
            }
        }
        if let Some(p) = self.prec {
            let keep = (p - self.val).max(0) as usize;
            if self.coeffs.len() > keep {
                self.coeffs.truncate(keep);
                if self.coeffs.is_empty() {
                    self.val = 0;
                }
            }
        }
        if self.coeffs.len() > N {
            self.coeffs.truncate(N);
            let cut = self.val + N as i32;
            self.prec = Some(self.prec.map_or(cut, |p| p.min(cut)));
        }
    }

    /// `c + ε`.
    pub fn shifted_variable(c: Rational) -> Self {
        Self::build(0, vec![c, Rational::one()], None)
    }

    pub fn exact_monomial(e: i32, c: Rational) -> Self {
        Self::build(e, vec![c], None)
    }

    pub fn precision(&self) -> Option<i32> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// Lowest exponent that is known to carry a nonzero coefficient.
    pub fn valuation(&self) -> Option<i32> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.val)
        }
    }

    /// Lower bound for the exponent of every term (the precision for an unresolved zero).
    fn order(&self) -> Option<i32> {
        if self.coeffs.is_empty() {
            self.prec
        } else {
            Some(self.val)
        }
    }

    pub fn coeff(&self, e: i32) -> Rational {
        let k = e - self.val;
        if k < 0 || k as usize >= self.coeffs.len() {
            Rational::zero()
        } else {
            self.coeffs[k as usize].clone()
        }
    }

    /// The constant term, i.e. the value at `ε = 0`; errors on a pole or insufficient precision.
    pub fn value_at_zero(&self) -> Result<Rational, AlgebraError> {
        if let Some(v) = self.valuation() {
            if v < 0 {
                return Err(AlgebraError::Pole("ε = 0".into()));
            }
        }
        if let Some(p) = self.prec {
            if p <= 0 {
                return Err(AlgebraError::PrecisionExhausted(p));
            }
        }
        Ok(self.coeff(0))
    }
}

fn min_opt(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl<const N: usize> Field for Series<N> {
    fn fzero() -> Self {
        Series {
            val: 0,
            coeffs: Vec::new(),
            prec: None,
        }
    }

    fn fone() -> Self {
        Self::from_rational(&Rational::one())
    }

    fn from_rational(r: &Rational) -> Self {
        Self::build(0, vec![r.clone()], None)
    }

    fn fis_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec.is_none()
    }

    fn add(&self, o: &Self) -> Self {
        let prec = min_opt(self.prec, o.prec);
        let parts: Vec<&Self> = [self, o]
            .into_iter()
            .filter(|s| !s.coeffs.is_empty())
            .collect();
        if parts.is_empty() {
            return Series {
                val: 0,
                coeffs: Vec::new(),
                prec,
            };
        }
        let lo = parts.iter().map(|s| s.val).min().unwrap();
        let mut hi = parts
            .iter()
            .map(|s| s.val + s.coeffs.len() as i32)
            .max()
            .unwrap();
        if let Some(p) = prec {
            hi = hi.min(p);
        }
        if hi <= lo {
            return Series {
                val: 0,
                coeffs: Vec::new(),
                prec,
            };
        }
        let mut c = vec![Rational::zero(); (hi - lo) as usize];
        for s in parts {
            for (k, v) in s.coeffs.iter().enumerate() {
                let e = s.val + k as i32 - lo;
                if (e as usize) < c.len() {
                    c[e as usize] += v;
                }
            }
        }
        Self::build(lo, c, prec)
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn mul(&self, o: &Self) -> Self {
        if self.fis_zero() || o.fis_zero() {
            return Self::fzero();
        }
        let (oa, ob) = (self.order().expect("nonzero"), o.order().expect("nonzero"));
        let prec = min_opt(self.prec.map(|p| p + ob), o.prec.map(|p| p + oa));
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Series {
                val: 0,
                coeffs: Vec::new(),
                prec,
            };
        }
        let lo = self.val + o.val;
        let mut len = self.coeffs.len() + o.coeffs.len() - 1;
        if let Some(p) = prec {
            len = len.min((p - lo).max(0) as usize);
        }
        len = len.min(N);
        let mut c = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(len - i) {
                c[i + j] += a * b;
            }
        }
        let full = self.coeffs.len() + o.coeffs.len() - 1;
        let prec = if len < full && prec.is_none_or(|p| p > lo + len as i32) {
            Some(lo + len as i32)
        } else {
            prec
        };
        Self::build(lo, c, prec)
    }

    fn neg(&self) -> Self {
        Series {
            val: self.val,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            prec: self.prec,
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.coeffs.is_empty() {
            return None;
        }
        let v = self.val;
        if self.prec.is_none() && self.coeffs.len() == 1 {
            return Some(Self::build(-v, vec![self.coeffs[0].recip()], None));
        }
        let rel = match self.prec {
            Some(p) => ((p - v) as usize).min(N),
            None => N,
        };
        let c0inv = self.coeffs[0].recip();
        let mut b: Vec<Rational> = Vec::with_capacity(rel);
        for k in 0..rel {
            if k == 0 {
                b.push(c0inv.clone());
                continue;
            }
            let mut s = Rational::zero();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                s += &self.coeffs[j] * &b[k - j];
            }
            b.push(-s * &c0inv);
        }
        Some(Self::build(-v, b, Some(-v + rel as i32)))
    }

    /// Agreement to the available precision: no known coefficient of the difference is nonzero.
    fn equals(&self, o: &Self) -> bool {
        self.sub(o).coeffs.is_empty()
    }
}
