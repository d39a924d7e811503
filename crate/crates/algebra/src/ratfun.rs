use std::fmt;

use num_traits::{One, Zero};

use crate::field::Field;
use crate::laurent::{LaurentPoly, Subst, Vars};
use crate::rational::Rational;
use crate::AlgebraError;

/// Quotient of Laurent polynomials.
///
/// Reduction is best effort: monomial and rational content is always removed, and a
/// full gcd is taken when numerator and denominator involve a single common variable.
/// Equality is decided by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RatFun {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFun {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let (num, den) = if num.vars().is_empty() && !den.vars().is_empty() {
            (
                LaurentPoly::constant(
                    den.vars().clone(),
                    num.as_constant().unwrap_or_else(Rational::zero),
                ),
                den,
            )
        } else if den.vars().is_empty() && !num.vars().is_empty() {
            let d = LaurentPoly::constant(num.vars().clone(), den.as_constant().unwrap());
            (num, d)
        } else {
            (num, den)
        };
        if num.vars() != den.vars() {
            return Err(AlgebraError::VariableMismatch(
                num.vars().to_vec(),
                den.vars().to_vec(),
            ));
        }
        Ok(Self::reduce(num, den))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        let one = LaurentPoly::one(p.vars().clone());
        RatFun { num: p, den: one }
    }

    pub fn constant(vars: Vars, c: Rational) -> Self {
        Self::from_poly(LaurentPoly::constant(vars, c))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    fn reduce(num: LaurentPoly, den: LaurentPoly) -> Self {
        let vars = num.vars().clone();
        if num.is_zero() {
            return RatFun {
                num,
                den: LaurentPoly::one(vars),
            };
        }
        // monomials are units: divide both sides by the denominator's lowest monomial
        let n = vars.len();
        let shift: Vec<i32> = (0..n).map(|i| -den.min_degree(i)).collect();
        let (mut num, mut den) = (
            num.mul_monomial(&shift, &Rational::one()),
            den.mul_monomial(&shift, &Rational::one()),
        );
        if let Some((e, c)) = den.as_monomial() {
            let inv: Vec<i32> = e.iter().map(|x| -x).collect();
            let c = c.recip();
            return RatFun {
                num: num.mul_monomial(&inv, &c),
                den: LaurentPoly::one(vars),
            };
        }
        // univariate gcd when only one variable is involved on both sides
        let used: Vec<usize> = (0..n)
            .filter(|&i| num.depends_on(i) || den.depends_on(i))
            .collect();
        if used.len() == 1 {
            let v = used[0];
            if let (Some((sn, pn)), Some((sd, pd))) = (num.to_unipoly(v), den.to_unipoly(v)) {
                let g = pn.gcd(&pd);
                if !g.is_one() {
                    let pn = pn.div_exact(&g).unwrap();
                    let pd = pd.div_exact(&g).unwrap();
                    num = LaurentPoly::from_unipoly(vars.clone(), v, sn, &pn);
                    den = LaurentPoly::from_unipoly(vars.clone(), v, sd, &pd);
                }
            }
        }
        let lead = den
            .terms()
            .iter()
            .next_back()
            .map(|(_, c)| c.clone())
            .unwrap();
        let s = lead.recip();
        RatFun {
            num: num.scale(&s),
            den: den.scale(&s),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, AlgebraError> {
        if self.den == o.den {
            return RatFun::new(self.num.try_add(&o.num)?, self.den.clone());
        }
        let num = self
            .num
            .try_mul(&o.den)?
            .try_add(&o.num.try_mul(&self.den)?)?;
        RatFun::new(num, self.den.try_mul(&o.den)?)
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.try_add(&o.neg())
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, AlgebraError> {
        RatFun::new(self.num.try_mul(&o.num)?, self.den.try_mul(&o.den)?)
    }

    pub fn try_div(&self, o: &Self) -> Result<Self, AlgebraError> {
        if o.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        RatFun::new(self.num.try_mul(&o.den)?, self.den.try_mul(&o.num)?)
    }

    pub fn neg(&self) -> Self {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    /// Equality by cross-multiplication.
    pub fn equals(&self, o: &Self) -> bool {
        match (self.num.try_mul(&o.den), o.num.try_mul(&self.den)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }

    pub fn substitute(&self, bindings: &[(usize, Subst)]) -> Result<Self, AlgebraError> {
        let d = self.den.substitute(bindings)?;
        if d.is_zero() {
            return Err(AlgebraError::Pole("denominator vanishes".into()));
        }
        RatFun::new(self.num.substitute(bindings)?, d)
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational, AlgebraError> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Err(AlgebraError::Pole("denominator vanishes".into()));
        }
        Ok(self.num.eval(point)? / d)
    }

    /// Derivative in variable `i`; the function must not depend on any other variable.
    pub fn derivative(&self, i: usize) -> Result<Self, AlgebraError> {
        let n = self.vars().len();
        if (0..n).any(|k| k != i && (self.num.depends_on(k) || self.den.depends_on(k))) {
            return Err(AlgebraError::NotUnivariate);
        }
        let num = self
            .num
            .derivative(i)
            .try_mul(&self.den)?
            .try_sub(&self.num.try_mul(&self.den.derivative(i))?)?;
        RatFun::new(num, self.den.try_mul(&self.den)?)
    }

    /// Value at `q = 1` for a function of the single variable `q` (index `i`),
    /// cancelling common `(q-1)` factors first.
    pub fn specialise_q1(&self, i: usize) -> Result<Rational, AlgebraError> {
        let (sn, pn) = self.num.to_unipoly(i).ok_or(AlgebraError::NotUnivariate)?;
        let (sd, pd) = self.den.to_unipoly(i).ok_or(AlgebraError::NotUnivariate)?;
        let _ = (sn, sd); // monomial factors equal one at q = 1
        crate::uniratfun::UniRatFun::new(pn, pd)?.value_at_one()
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().is_some_and(|c| c.is_one()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl Field for RatFun {
    fn fzero() -> Self {
        Self::constant(Vars::from(Vec::new()), Rational::zero())
    }
    fn fone() -> Self {
        Self::constant(Vars::from(Vec::new()), Rational::one())
    }
    fn from_rational(r: &Rational) -> Self {
        Self::constant(Vars::from(Vec::new()), r.clone())
    }
    fn fis_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        self.try_add(o).expect("variable lists must agree")
    }
    fn sub(&self, o: &Self) -> Self {
        self.try_sub(o).expect("variable lists must agree")
    }
    fn mul(&self, o: &Self) -> Self {
        self.try_mul(o).expect("variable lists must agree")
    }
    fn neg(&self) -> Self {
        RatFun::neg(self)
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            RatFun::new(self.den.clone(), self.num.clone()).ok()
        }
    }
    fn equals(&self, o: &Self) -> bool {
        RatFun::equals(self, o)
    }
}
