use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Scalars the operator builders are generic over: exact rationals, dual numbers
/// for derivatives, and rational functions for symbolic entries.
pub trait Field: Clone + Debug + Send + Sync + Sized {
    fn fzero() -> Self;
    fn fone() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn fis_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }

    fn equals(&self, o: &Self) -> bool {
        self.sub(o).fis_zero()
    }

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(n.into()))
    }

    fn powi(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::fone();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Some(acc)
    }
}

impl Field for Rational {
    fn fzero() -> Self {
        Zero::zero()
    }
    fn fone() -> Self {
        One::one()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn fis_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn equals(&self, o: &Self) -> bool {
        self == o
    }
}

/// `re + eps * e` with `e^2 = 0`; carries a first derivative through exact arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dual {
    pub re: Rational,
    pub eps: Rational,
}

impl Dual {
    pub fn new(re: Rational, eps: Rational) -> Self {
        Dual { re, eps }
    }

    /// The point `x + e`, i.e. the seed for differentiating in `x`.
    pub fn variable(x: Rational) -> Self {
        Dual {
            re: x,
            eps: <Rational as One>::one(),
        }
    }
}

impl Field for Dual {
    fn fzero() -> Self {
        Dual {
            re: <Rational as Zero>::zero(),
            eps: <Rational as Zero>::zero(),
        }
    }
    fn fone() -> Self {
        Dual {
            re: <Rational as One>::one(),
            eps: <Rational as Zero>::zero(),
        }
    }
    fn from_rational(r: &Rational) -> Self {
        Dual {
            re: r.clone(),
            eps: <Rational as Zero>::zero(),
        }
    }
    fn fis_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.eps)
    }
    fn add(&self, o: &Self) -> Self {
        Dual {
            re: &self.re + &o.re,
            eps: &self.eps + &o.eps,
        }
    }
    fn sub(&self, o: &Self) -> Self {
        Dual {
            re: &self.re - &o.re,
            eps: &self.eps - &o.eps,
        }
    }
    fn mul(&self, o: &Self) -> Self {
        Dual {
            re: &self.re * &o.re,
            eps: &self.re * &o.eps + &self.eps * &o.re,
        }
    }
    fn neg(&self) -> Self {
        Dual {
            re: -&self.re,
            eps: -&self.eps,
        }
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(&self.re) {
            return None;
        }
        let r = self.re.recip();
        let eps = -(&self.eps * &r * &r);
        Some(Dual { re: r, eps })
    }
}
