use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::sqrtrat::SqrtRat;
use crate::error::{Error, Result};

/// A real 2×2 matrix `(e f; g h)` with exact `SqrtRat` entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix2 {
    pub e: SqrtRat,
    pub f: SqrtRat,
    pub g: SqrtRat,
    pub h: SqrtRat,
}

impl Matrix2 {
    pub fn new(e: SqrtRat, f: SqrtRat, g: SqrtRat, h: SqrtRat) -> Self {
        Matrix2 { e, f, g, h }
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1)
    }

    pub fn from_ints(e: i64, f: i64, g: i64, h: i64) -> Self {
        Matrix2::new(e.into(), f.into(), g.into(), h.into())
    }

    pub fn from_rationals(e: BigRational, f: BigRational, g: BigRational, h: BigRational) -> Self {
        Matrix2::new(e.into(), f.into(), g.into(), h.into())
    }

    pub fn entries(&self) -> [&SqrtRat; 4] {
        [&self.e, &self.f, &self.g, &self.h]
    }

    pub fn checked_mul(&self, o: &Matrix2) -> Result<Matrix2> {
        Ok(Matrix2 {
            e: (&self.e * &o.e).checked_add(&(&self.f * &o.g))?,
            f: (&self.e * &o.f).checked_add(&(&self.f * &o.h))?,
            g: (&self.g * &o.e).checked_add(&(&self.h * &o.g))?,
            h: (&self.g * &o.f).checked_add(&(&self.h * &o.h))?,
        })
    }

    pub fn det(&self) -> Result<SqrtRat> {
        (&self.e * &self.h).checked_sub(&(&self.f * &self.g))
    }

    /// The adjugate, which is the inverse when the determinant is 1.
    pub fn adjugate(&self) -> Matrix2 {
        Matrix2 {
            e: self.h.clone(),
            f: -&self.f,
            g: -&self.g,
            h: self.e.clone(),
        }
    }

    /// `self · m · self⁻¹` for `self` of determinant 1.
    pub fn conjugate(&self, m: &Matrix2) -> Result<Matrix2> {
        self.checked_mul(m)?.checked_mul(&self.adjugate())
    }

    pub fn is_integral(&self) -> bool {
        self.entries().iter().all(|x| x.is_integer())
    }

    pub fn to_int_matrix(&self) -> Option<IntMatrix> {
        Some(IntMatrix::new(
            self.e.to_integer()?,
            self.f.to_integer()?,
            self.g.to_integer()?,
            self.h.to_integer()?,
        ))
    }

    pub fn neg(&self) -> Matrix2 {
        Matrix2::new(-&self.e, -&self.f, -&self.g, -&self.h)
    }
}

impl fmt::Display for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.e, self.f, self.g, self.h)
    }
}

/// An integer 2×2 matrix `(a b; c d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl IntMatrix {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        IntMatrix { a, b, c, d }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        IntMatrix::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Self::from_i64(1, 0, 0, 1)
    }

    /// `S = (0 -1; 1 0)`.
    pub fn s() -> Self {
        Self::from_i64(0, -1, 1, 0)
    }

    /// `T = (1 1; 0 1)`.
    pub fn t() -> Self {
        Self::from_i64(1, 1, 0, 1)
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        IntMatrix {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(&self) -> IntMatrix {
        debug_assert!(self.det().is_one());
        IntMatrix {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    /// Entries reduced into `[0, n)`.
    pub fn reduce(&self, n: u64) -> [u64; 4] {
        let m = BigInt::from(n);
        let r = |x: &BigInt| -> u64 {
            let v = x.mod_floor(&m);
            u64::try_from(v).expect("residue fits")
        };
        [r(&self.a), r(&self.b), r(&self.c), r(&self.d)]
    }

    pub fn to_matrix2(&self) -> Matrix2 {
        Matrix2::new(
            SqrtRat::from_bigint(self.a.clone()),
            SqrtRat::from_bigint(self.b.clone()),
            SqrtRat::from_bigint(self.c.clone()),
            SqrtRat::from_bigint(self.d.clone()),
        )
    }

    pub fn check_det_one(&self) -> Result<()> {
        let det = self.det();
        if det.is_one() {
            Ok(())
        } else {
            Err(Error::DeterminantNotOne(det.to_string()))
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}
