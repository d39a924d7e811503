use std::collections::BTreeMap;
use std::fmt;

use masep_algebra::Field;

/// Laurent polynomial in `x_1..x_n` with coefficients in `S`.
#[derive(Clone, Debug)]
pub struct XPoly<S> {
    n: usize,
    terms: BTreeMap<Vec<i32>, S>,
}

impl<S: Field> XPoly<S> {
    pub fn zero(n: usize) -> Self {
        XPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: S) -> Self {
        Self::monomial(vec![0; n], c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, S::fone())
    }

    pub fn monomial(exp: Vec<i32>, c: S) -> Self {
        let mut p = XPoly::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Vec<i32>, S)>) -> Self {
        let mut p = XPoly::zero(n);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i32>, S> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[i32]) -> S {
        self.terms.get(e).cloned().unwrap_or_else(S::fzero)
    }

    pub fn add_term(&mut self, e: Vec<i32>, c: S) {
        debug_assert_eq!(e.len(), self.n);
        if c.fis_zero() {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let s = old.add(&c);
                if !s.fis_zero() {
                    self.terms.insert(e, s);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &S) {
        for (e, v) in &other.terms {
            self.add_term(e.clone(), v.mul(c));
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(o, &S::fone());
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(o, &S::fone().neg());
        r
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.fis_zero() {
            return XPoly::zero(self.n);
        }
        XPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), v.mul(c)))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&S::fone().neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = XPoly::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1.mul(c2));
            }
        }
        r
    }

    pub fn equals(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }

    /// Maps coefficients through `f`, dropping zeros.
    pub fn map_coeffs<T: Field, E>(&self, f: impl Fn(&S) -> Result<T, E>) -> Result<XPoly<T>, E> {
        let mut r = XPoly::zero(self.n);
        for (e, v) in &self.terms {
            r.add_term(e.clone(), f(v)?);
        }
        Ok(r)
    }

    /// Substitutes `x_i -> point[i]` (entries must be invertible where exponents are negative).
    pub fn eval(&self, point: &[S]) -> Option<S> {
        let mut acc = S::fzero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (x, &k) in point.iter().zip(e) {
                m = m.mul(&x.powi(k as i64)?);
            }
            acc = acc.add(&m);
        }
        Some(acc)
    }

    /// Coefficient sum, i.e. the value at `x = (1, ..., 1)`.
    pub fn value_at_ones(&self) -> S {
        self.terms.values().fold(S::fzero(), |a, v| a.add(v))
    }

    pub fn swap_vars(&self, i: usize, j: usize) -> Self {
        self.map_exponents(|e| {
            let mut e = e.to_vec();
            e.swap(i, j);
            e
        })
    }

    pub fn invert_var(&self, i: usize) -> Self {
        self.map_exponents(|e| {
            let mut e = e.to_vec();
            e[i] = -e[i];
            e
        })
    }

    pub fn map_exponents(&self, f: impl Fn(&[i32]) -> Vec<i32>) -> Self {
        XPoly::from_terms(self.n, self.terms.iter().map(|(e, c)| (f(e), c.clone())))
    }

    pub fn support(&self) -> impl Iterator<Item = &Vec<i32>> {
        self.terms.keys()
    }
}

impl<S: Field + fmt::Display> fmt::Display for XPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{}", i + 1, k)?,
                }
            }
        }
        Ok(())
    }
}
