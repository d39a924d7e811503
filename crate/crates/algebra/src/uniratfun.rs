use std::fmt;

use num_traits::{One, Zero};

use crate::field::Field;
use crate::rational::Rational;
use crate::unipoly::UniPoly;
use crate::AlgebraError;

/// Element of Q(v): fully reduced, denominator monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniRatFun {
    num: UniPoly,
    den: UniPoly,
}

impl UniRatFun {
    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: UniPoly, den: UniPoly) -> Self {
        if num.is_zero() {
            return Self::from_poly(UniPoly::zero());
        }
        if den.degree() == Some(0) {
            let s = den.lead().recip();
            return UniRatFun {
                num: num.scale(&s),
                den: UniPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        let s = den.lead().recip();
        UniRatFun {
            num: num.scale(&s),
            den: den.scale(&s),
        }
    }

    pub fn from_poly(p: UniPoly) -> Self {
        UniRatFun {
            num: p,
            den: UniPoly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(UniPoly::constant(c))
    }

    pub fn var() -> Self {
        Self::from_poly(UniPoly::var())
    }

    /// `c * v^e` for any integer `e`.
    pub fn monomial(e: i64, c: Rational) -> Self {
        if e >= 0 {
            Self::from_poly(UniPoly::monomial(e as usize, c))
        } else {
            UniRatFun {
                num: UniPoly::constant(c),
                den: UniPoly::monomial((-e) as usize, Rational::one()),
            }
        }
    }

    /// Laurent polynomial `sum_k coeffs[k] v^(low + k)`.
    pub fn from_laurent(low: i64, coeffs: Vec<Rational>) -> Self {
        let p = UniPoly::from_coeffs(coeffs);
        if low >= 0 {
            Self::from_poly(p.shift(low as usize))
        } else {
            Self::reduce(p, UniPoly::monomial((-low) as usize, Rational::one()))
        }
    }

    pub fn num(&self) -> &UniPoly {
        &self.num
    }

    pub fn den(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return Self::from_poly(self.num.add(&o.num));
            }
            return Self::reduce(self.num.add(&o.num), self.den.clone());
        }
        if o.den.is_one() {
            return UniRatFun {
                num: self.num.add(&o.num.mul(&self.den)),
                den: self.den.clone(),
            }
            .reduced_if_needed();
        }
        if self.den.is_one() {
            return UniRatFun {
                num: o.num.add(&self.num.mul(&o.den)),
                den: o.den.clone(),
            }
            .reduced_if_needed();
        }
        let g = self.den.gcd(&o.den);
        if g.is_one() {
            let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
            return UniRatFun {
                num,
                den: self.den.mul(&o.den),
            }
            .reduced_if_needed();
        }
        let a = self.den.div_exact(&g).unwrap();
        let b = o.den.div_exact(&g).unwrap();
        let num = self.num.mul(&b).add(&o.num.mul(&a));
        Self::reduce(num, a.mul(&o.den))
    }

    // used where the denominators were coprime to the numerator parts by construction;
    // a cheap gcd with the denominator still catches accidental cancellation
    fn reduced_if_needed(self) -> Self {
        if self.num.is_zero() {
            return Self::from_poly(UniPoly::zero());
        }
        Self::reduce(self.num, self.den)
    }

    pub fn neg(&self) -> Self {
        UniRatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::from_poly(UniPoly::zero());
        }
        if self.den.is_one() && o.den.is_one() {
            return Self::from_poly(self.num.mul(&o.num));
        }
        // cross-cancel before multiplying to keep degrees small
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = o.den.div_exact(&g1).unwrap();
        let n2 = o.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let s = den.lead().recip();
        UniRatFun {
            num: num.scale(&s),
            den: den.scale(&s),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::from_poly(UniPoly::zero());
        }
        UniRatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let s = self.num.lead().recip();
        Ok(UniRatFun {
            num: self.den.scale(&s),
            den: self.num.scale(&s),
        })
    }

    pub fn div(&self, o: &Self) -> Result<Self, AlgebraError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self, AlgebraError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        Ok(UniRatFun {
            num: base.num.pow(e.unsigned_abs() as usize),
            den: base.den.pow(e.unsigned_abs() as usize),
        })
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational, AlgebraError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(AlgebraError::Pole(format!("v = {x}")));
        }
        Ok(self.num.eval(x) / d)
    }

    /// Evaluates at an element of another field (dual numbers, other rational functions).
    pub fn eval_in<S: Field>(&self, x: &S) -> Result<S, AlgebraError> {
        let d = self.den.eval_in(x);
        let inv = d
            .inv()
            .ok_or_else(|| AlgebraError::Pole("denominator vanishes".into()))?;
        Ok(self.num.eval_in(x).mul(&inv))
    }

    pub fn derivative(&self) -> Self {
        let num = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        Self::reduce(num, self.den.mul(&self.den))
    }

    /// Substitutes `v -> v^k`.
    pub fn compose_power(&self, k: usize) -> Self {
        Self::reduce(self.num.compose_power(k), self.den.compose_power(k))
    }

    /// Value at `v = 1`, cancelling common `(v-1)` factors first.
    pub fn value_at_one(&self) -> Result<Rational, AlgebraError> {
        let (kn, pn) = self.num.split_factor_at_one();
        let (kd, pd) = self.den.split_factor_at_one();
        if self.num.is_zero() {
            return Ok(Rational::zero());
        }
        if kd > kn {
            return Err(AlgebraError::LimitUndefined);
        }
        if kn > kd {
            return Ok(Rational::zero());
        }
        Ok(pn.eval(&Rational::one()) / pd.eval(&Rational::one()))
    }
}

impl fmt::Display for UniRatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl Field for UniRatFun {
    fn fzero() -> Self {
        Self::from_poly(UniPoly::zero())
    }
    fn fone() -> Self {
        Self::from_poly(UniPoly::one())
    }
    fn from_rational(r: &Rational) -> Self {
        Self::constant(r.clone())
    }
    fn fis_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        UniRatFun::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        UniRatFun::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        UniRatFun::mul(self, o)
    }
    fn neg(&self) -> Self {
        UniRatFun::neg(self)
    }
    fn inv(&self) -> Option<Self> {
        UniRatFun::inv(self).ok()
    }
}

impl Default for UniRatFun {
    fn default() -> Self {
        <Self as Field>::fzero()
    }
}

impl From<Rational> for UniRatFun {
    fn from(r: Rational) -> Self {
        Self::constant(r)
    }
}
