use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{fmt_rational, parse_rational, pow_i, Rational};
use crate::unipoly::UniPoly;
use crate::AlgebraError;

pub type Exp = Vec<i32>;

/// Shared, ordered list of variable names.
pub type Vars = Arc<[String]>;

pub fn vars(names: &[&str]) -> Vars {
    names
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .into()
}

/// Multivariate Laurent polynomial with exact rational coefficients.
///
/// Terms are kept in a map ordered lexicographically by exponent vector, zero
/// coefficients are never stored, so equal polynomials have identical maps.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    vars: Vars,
    terms: BTreeMap<Exp, Rational>,
}

/// Right-hand side of a substitution.
#[derive(Clone, Debug)]
pub enum Subst {
    Value(Rational),
    Poly(LaurentPoly),
}

impl LaurentPoly {
    pub fn zero(vars: Vars) -> Self {
        LaurentPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Vars, c: Rational) -> Self {
        let n = vars.len();
        Self::monomial(vars, vec![0; n], c)
    }

    pub fn one(vars: Vars) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn monomial(vars: Vars, exp: Exp, c: Rational) -> Self {
        assert_eq!(
            exp.len(),
            vars.len(),
            "exponent length must match variable count"
        );
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { vars, terms }
    }

    /// The variable with the given index.
    pub fn var(vars: Vars, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, e, Rational::one())
    }

    pub fn var_named(vars: Vars, name: &str) -> Result<Self, AlgebraError> {
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.into()))?;
        Ok(Self::var(vars, i))
    }

    pub fn from_terms(vars: Vars, terms: impl IntoIterator<Item = (Exp, Rational)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> &BTreeMap<Exp, Rational> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Exp, Rational> {
        self.terms
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

    pub fn coeff(&self, e: &[i32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Single term `c x^e`, if that is what this polynomial is.
    pub fn as_monomial(&self) -> Option<(&Exp, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn add_term(&mut self, e: Exp, c: Rational) {
        debug_assert_eq!(e.len(), self.vars.len());
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add_term_ref(&mut self, e: &[i32], c: &Rational) {
        if c.is_zero() {
            return;
        }
        if let Some(v) = self.terms.get_mut(e) {
            *v += c;
            if v.is_zero() {
                self.terms.remove(e);
            }
        } else {
            self.terms.insert(e.to_vec(), c.clone());
        }
    }

    fn check_vars(&self, o: &Self) -> Result<(), AlgebraError> {
        if Arc::ptr_eq(&self.vars, &o.vars) || self.vars == o.vars {
            Ok(())
        } else {
            Err(AlgebraError::VariableMismatch(
                self.vars.to_vec(),
                o.vars.to_vec(),
            ))
        }
    }

    /// Re-expresses a constant over an empty variable list in `vars`; other inputs unchanged.
    fn promoted(&self, vars: &Vars) -> Option<Self> {
        if self.vars.is_empty() && !vars.is_empty() {
            let c = self.as_constant().unwrap_or_else(Rational::zero);
            Some(Self::constant(vars.clone(), c))
        } else {
            None
        }
    }

    fn unify<'a>(
        &'a self,
        o: &'a Self,
    ) -> Result<(std::borrow::Cow<'a, Self>, std::borrow::Cow<'a, Self>), AlgebraError> {
        use std::borrow::Cow;
        if let Some(p) = self.promoted(&o.vars) {
            return Ok((Cow::Owned(p), Cow::Borrowed(o)));
        }
        if let Some(p) = o.promoted(&self.vars) {
            return Ok((Cow::Borrowed(self), Cow::Owned(p)));
        }
        self.check_vars(o)?;
        Ok((Cow::Borrowed(self), Cow::Borrowed(o)))
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, AlgebraError> {
        let (a, b) = self.unify(o)?;
        let mut r = a.into_owned();
        for (e, c) in &b.terms {
            r.add_term_ref(e, c);
        }
        Ok(r)
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.try_add(&o.neg())
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, AlgebraError> {
        let (a, b) = self.unify(o)?;
        let mut r = Self::zero(a.vars.clone());
        let n = a.vars.len();
        let mut e = vec![0i32; n];
        for (e1, c1) in &a.terms {
            for (e2, c2) in &b.terms {
                for k in 0..n {
                    e[k] = e1[k] + e2[k];
                }
                r.add_term_ref(&e, &(c1 * c2));
            }
        }
        Ok(r)
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.vars.clone());
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    /// Multiplies by `c x^shift`.
    pub fn mul_monomial(&self, shift: &[i32], c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, v)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), v * c))
            .collect();
        LaurentPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// `self += c * x^shift * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &Rational, shift: Option<&[i32]>) {
        if c.is_zero() {
            return;
        }
        let mut buf = vec![0i32; self.vars.len()];
        for (e, v) in &other.terms {
            let prod = v * c;
            match shift {
                Some(s) => {
                    for k in 0..buf.len() {
                        buf[k] = e[k] + s[k];
                    }
                    self.add_term_ref(&buf, &prod);
                }
                None => self.add_term_ref(e, &prod),
            }
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.vars.clone());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Applies an exponent map to every term, merging collisions.
    pub fn map_exponents(&self, f: impl Fn(&[i32]) -> Exp) -> Self {
        let mut r = Self::zero(self.vars.clone());
        for (e, c) in &self.terms {
            r.add_term(f(e), c.clone());
        }
        r
    }

    /// `x_i <-> x_j`.
    pub fn swap_vars(&self, i: usize, j: usize) -> Self {
        self.map_exponents(|e| {
            let mut e = e.to_vec();
            e.swap(i, j);
            e
        })
    }

    /// `x_i -> 1/x_i`.
    pub fn invert_var(&self, i: usize) -> Self {
        self.map_exponents(|e| {
            let mut e = e.to_vec();
            e[i] = -e[i];
            e
        })
    }

    pub fn min_degree(&self, i: usize) -> i32 {
        self.terms.keys().map(|e| e[i]).min().unwrap_or(0)
    }

    pub fn max_degree(&self, i: usize) -> i32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn depends_on(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e[i] != 0)
    }

    /// Substitutes variables simultaneously. Variables that receive a value drop out
    /// (their exponent becomes zero); the variable list itself is kept.
    pub fn substitute(&self, bindings: &[(usize, Subst)]) -> Result<Self, AlgebraError> {
        let mut r = Self::zero(self.vars.clone());
        for (e, c) in &self.terms {
            let mut e0 = e.clone();
            let mut coef = c.clone();
            for (i, _) in bindings {
                e0[*i] = 0;
            }
            let mut term = Self::monomial(self.vars.clone(), e0, Rational::one());
            for (i, s) in bindings {
                let k = e[*i];
                if k == 0 {
                    continue;
                }
                match s {
                    Subst::Value(v) => {
                        if v.is_zero() && k < 0 {
                            return Err(AlgebraError::Pole(self.vars[*i].clone()));
                        }
                        coef *= pow_i(v, k as i64)?;
                    }
                    Subst::Poly(p) => {
                        p.check_vars(self)?;
                        let pk = if k > 0 {
                            p.pow(k as u32)
                        } else {
                            let (me, mc) = p.as_monomial().ok_or_else(|| {
                                if p.is_zero() {
                                    AlgebraError::Pole(self.vars[*i].clone())
                                } else {
                                    AlgebraError::NotLaurent(self.vars[*i].clone())
                                }
                            })?;
                            let inv_e: Exp = me.iter().map(|x| -x).collect();
                            Self::monomial(self.vars.clone(), inv_e, mc.recip()).pow((-k) as u32)
                        };
                        term = &term * &pk;
                    }
                }
            }
            r.add_scaled(&term, &coef, None);
        }
        Ok(r)
    }

    pub fn substitute_named(&self, bindings: &[(&str, Subst)]) -> Result<Self, AlgebraError> {
        let b = bindings
            .iter()
            .map(|(n, s)| {
                self.var_index(n)
                    .map(|i| (i, s.clone()))
                    .ok_or_else(|| AlgebraError::UnknownVariable(n.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.substitute(&b)
    }

    /// Evaluates with every variable bound to a rational.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational, AlgebraError> {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (k, x) in e.iter().zip(point) {
                if *k != 0 {
                    if x.is_zero() && *k < 0 {
                        return Err(AlgebraError::Pole(format!("{x}")));
                    }
                    v *= pow_i(x, *k as i64)?;
                }
            }
            acc += v;
        }
        Ok(acc)
    }

    /// Partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut r = Self::zero(self.vars.clone());
        for (e, c) in &self.terms {
            if e[i] != 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                r.add_term(e2, c * Rational::from_integer(e[i].into()));
            }
        }
        r
    }

    /// Division by `d` as polynomials in variable `i` whose leading coefficient in
    /// `x_i` is a single term. Returns `(quotient, remainder)`.
    pub fn div_rem_in(&self, i: usize, d: &Self) -> Result<(Self, Self), AlgebraError> {
        self.check_vars(d)?;
        if d.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let n = self.vars.len();
        let dmin = d.min_degree(i);
        let dmax = d.max_degree(i);
        let lead: Vec<(&Exp, &Rational)> = d.terms.iter().filter(|(e, _)| e[i] == dmax).collect();
        if lead.len() != 1 {
            return Err(AlgebraError::NotMonicDivisor);
        }
        let (le, lc) = (lead[0].0.clone(), lead[0].1.recip());
        let fmin = self.min_degree(i);
        let mut rem = self.clone();
        let mut quo = Self::zero(self.vars.clone());
        // normalised degrees: rem shifted by -fmin, divisor by -dmin
        let span = dmax - dmin;
        loop {
            if rem.is_zero() {
                break;
            }
            let top = rem.max_degree(i);
            if top - fmin < span {
                break;
            }
            let lead_terms: Vec<(Exp, Rational)> = rem
                .terms
                .iter()
                .filter(|(e, _)| e[i] == top)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect();
            for (e, c) in lead_terms {
                let shift: Exp = (0..n).map(|k| e[k] - le[k]).collect();
                let qc = &c * &lc;
                rem.add_scaled(d, &(-&qc), Some(&shift));
                quo.add_term(shift, qc);
            }
        }
        Ok((quo, rem))
    }

    /// Exact division in variable `i`; a nonzero remainder is an error.
    pub fn div_exact_in(&self, i: usize, d: &Self) -> Result<Self, AlgebraError> {
        let (q, r) = self.div_rem_in(i, d)?;
        if !r.is_zero() {
            return Err(AlgebraError::NotExact);
        }
        Ok(q)
    }

    /// Views a polynomial in variable `i` alone as `v^shift * p(v)`.
    pub fn to_unipoly(&self, i: usize) -> Option<(i32, UniPoly)> {
        if self
            .terms
            .keys()
            .any(|e| e.iter().enumerate().any(|(k, x)| k != i && *x != 0))
        {
            return None;
        }
        let lo = self.min_degree(i);
        let hi = self.max_degree(i);
        let mut c = vec![Rational::zero(); (hi - lo + 1).max(0) as usize];
        for (e, v) in &self.terms {
            c[(e[i] - lo) as usize] = v.clone();
        }
        Some((lo, UniPoly::from_coeffs(c)))
    }

    pub fn from_unipoly(vars: Vars, i: usize, shift: i32, p: &UniPoly) -> Self {
        let n = vars.len();
        let mut r = Self::zero(vars);
        for (k, c) in p.coeffs().iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = shift + k as i32;
            r.add_term(e, c.clone());
        }
        r
    }

    /// Collects coefficients as polynomials in variable `i`, keyed by the remaining exponents.
    pub fn coefficients_in(&self, i: usize) -> BTreeMap<Exp, BTreeMap<i32, Rational>> {
        let mut out: BTreeMap<Exp, BTreeMap<i32, Rational>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            rest[i] = 0;
            out.entry(rest).or_default().insert(e[i], c.clone());
        }
        out
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            vars: self.vars.to_vec(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson {
                    exp: e.clone(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Self, AlgebraError> {
        let vars: Vars = j.vars.clone().into();
        let mut p = Self::zero(vars);
        for t in &j.terms {
            if t.exp.len() != p.nvars() {
                return Err(AlgebraError::Parse("exponent length mismatch".into()));
            }
            let c = parse_rational(&format!("{}/{}", t.num, t.den))?;
            p.add_term(t.exp.clone(), c);
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<i32>,
    pub num: String,
    pub den: String,
}

/// Wire form `{"vars": [...], "terms": [{"exp": [...], "num": "3", "den": "4"}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, o: &LaurentPoly) -> LaurentPoly {
                self.$f(o).expect("variable lists must agree")
            }
        }
        impl std::ops::$tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, o: LaurentPoly) -> LaurentPoly {
                self.$f(&o).expect("variable lists must agree")
            }
        }
    };
}
binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl std::ops::Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::neg(self)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", fmt_rational(c))?;
            for (v, x) in self.vars.iter().zip(e) {
                match x {
                    0 => {}
                    1 => write!(f, "*{v}")?,
                    _ => write!(f, "*{v}^{x}")?,
                }
            }
        }
        Ok(())
    }
}
