use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numtheory::{gcd, square_part};

/// An exact real number `q·√n` with `q` rational and `n` squarefree.
///
/// Zero is always stored with `n = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SqrtRat {
    q: BigRational,
    n: u64,
}

impl SqrtRat {
    /// `q·√n` for any positive `n`; the square part of `n` is moved into `q`.
    pub fn new(q: BigRational, n: u64) -> Self {
        assert!(n > 0, "radicand must be positive");
        if q.is_zero() {
            return Self::zero();
        }
        let sp = square_part(n).expect("positive radicand");
        SqrtRat {
            q: q * BigInt::from(sp.s),
            n: sp.t,
        }
    }

    pub fn rational(q: BigRational) -> Self {
        Self::new(q, 1)
    }

    pub fn from_int(i: i64) -> Self {
        Self::rational(BigRational::from_integer(i.into()))
    }

    pub fn from_bigint(i: BigInt) -> Self {
        Self::rational(BigRational::from_integer(i))
    }

    pub fn zero() -> Self {
        SqrtRat {
            q: BigRational::zero(),
            n: 1,
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `√n`.
    pub fn sqrt(n: u64) -> Self {
        Self::new(BigRational::one(), n)
    }

    pub fn coefficient(&self) -> &BigRational {
        &self.q
    }

    pub fn radicand(&self) -> u64 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.n == 1
    }

    pub fn is_integer(&self) -> bool {
        self.n == 1 && self.q.is_integer()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.q.clone())
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.q.to_integer())
    }

    /// Sum, defined when both terms share a radicand or one of them is zero.
    pub fn checked_add(&self, other: &SqrtRat) -> Result<SqrtRat> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.n != other.n {
            return Err(Error::MixedRadicands(self.n, other.n));
        }
        Ok(Self::new(&self.q + &other.q, self.n))
    }

    pub fn checked_sub(&self, other: &SqrtRat) -> Result<SqrtRat> {
        self.checked_add(&-other)
    }

    /// Quotient; `None` on division by zero.
    pub fn checked_div(&self, other: &SqrtRat) -> Option<SqrtRat> {
        if other.is_zero() {
            return None;
        }
        // q1√n1 / (q2√n2) = q1/(q2·n2) · √(n1·n2)
        let g = gcd(self.n, other.n);
        let q = &self.q / (&other.q * BigInt::from(other.n)) * BigInt::from(g);
        Some(Self::new(q, (self.n / g) * (other.n / g)))
    }

    pub fn scale(&self, r: &BigRational) -> SqrtRat {
        Self::new(&self.q * r, self.n)
    }

    pub fn signum(&self) -> i32 {
        if self.q.is_positive() {
            1
        } else if self.q.is_negative() {
            -1
        } else {
            0
        }
    }
}

impl Mul for &SqrtRat {
    type Output = SqrtRat;

    fn mul(self, rhs: &SqrtRat) -> SqrtRat {
        if self.is_zero() || rhs.is_zero() {
            return SqrtRat::zero();
        }
        let g = gcd(self.n, rhs.n);
        SqrtRat::new(
            &self.q * &rhs.q * BigInt::from(g),
            (self.n / g) * (rhs.n / g),
        )
    }
}

impl Neg for &SqrtRat {
    type Output = SqrtRat;

    fn neg(self) -> SqrtRat {
        SqrtRat {
            q: -&self.q,
            n: self.n,
        }
    }
}

impl Neg for SqrtRat {
    type Output = SqrtRat;

    fn neg(self) -> SqrtRat {
        -&self
    }
}

impl From<i64> for SqrtRat {
    fn from(i: i64) -> Self {
        SqrtRat::from_int(i)
    }
}

impl From<BigRational> for SqrtRat {
    fn from(q: BigRational) -> Self {
        SqrtRat::rational(q)
    }
}

impl fmt::Display for SqrtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 1 {
            write!(f, "{}", self.q)
        } else if self.q.is_one() {
            write!(f, "sqrt({})", self.n)
        } else if self.q == -BigRational::one() {
            write!(f, "-sqrt({})", self.n)
        } else {
            write!(f, "{}*sqrt({})", self.q, self.n)
        }
    }
}
