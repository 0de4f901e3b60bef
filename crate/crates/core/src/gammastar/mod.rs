//! Elements of the Atkin-Lehner type extensions of `Γ₀(N)`.
//!
//! An element at level `N` is stored through a presentation `(μ, a, b, c, d)`
//! with `μ` an exact divisor of `N` and rational coefficients, standing for the
//! real matrix `(a√μ, b/√μ; c(N/μ)√μ, d√μ)`. Denominators are bounded by
//! `s_μ` on the diagonal and `s_{N/μ}` off it, and `adμ − bc(N/μ) = 1`.

mod matrix;
mod sqrtrat;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub use matrix::{IntMatrix, Matrix2};
pub use sqrtrat::SqrtRat;

use crate::error::{Error, Result};
use crate::numtheory::{
    exact_divisor_product, exact_divisors, factorize, gcd, lcm, prime_divisors,
    sqrt_of_square_part, valuation, ExactDivisor,
};

pub(crate) fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

pub(crate) fn int(n: u64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn den_u64(q: &BigRational) -> u64 {
    q.denom().to_u64().expect("denominator fits in u64")
}

/// An element of `Γ₀^{*,s_N}(N)` in a fixed presentation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GammaStarElem {
    mu: ExactDivisor,
    a: BigRational,
    b: BigRational,
    c: BigRational,
    d: BigRational,
}

impl GammaStarElem {
    /// Validates the denominator bounds and the determinant identity.
    pub fn new(
        n: u64,
        mu: u64,
        a: BigRational,
        b: BigRational,
        c: BigRational,
        d: BigRational,
    ) -> Result<Self> {
        let mu = ExactDivisor::new(n, mu)?;
        let s_mu = int(sqrt_of_square_part(mu.mu()));
        let s_co = int(sqrt_of_square_part(mu.complement()));
        for (name, x, s) in [
            ("a", &a, &s_mu),
            ("b", &b, &s_co),
            ("c", &c, &s_co),
            ("d", &d, &s_mu),
        ] {
            if !(x * s).is_integer() {
                return Err(Error::DenominatorTooLarge {
                    entry: name,
                    bound: s.to_integer().to_u64().unwrap_or(0),
                });
            }
        }
        let det = &a * &d * int(mu.mu()) - &b * &c * int(mu.complement());
        if !det.is_one() {
            return Err(Error::DeterminantNotOne(det.to_string()));
        }
        Ok(GammaStarElem { mu, a, b, c, d })
    }

    /// Constructor for integral coefficients.
    pub fn from_ints(n: u64, mu: u64, a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(n, mu, rat(a, 1), rat(b, 1), rat(c, 1), rat(d, 1))
    }

    pub fn identity(n: u64) -> Self {
        Self::from_ints(n, 1, 1, 0, 0, 1).expect("identity is valid")
    }

    /// The Fricke element `(0, −1/√N; √N, 0)`.
    pub fn fricke(n: u64) -> Self {
        Self::from_ints(n, n, 0, -1, 1, 0).expect("Fricke element is valid")
    }

    /// An Atkin-Lehner element for the exact divisor `μ`, with integral `a, b, c, d`.
    pub fn atkin_lehner(n: u64, mu: u64) -> Result<Self> {
        let ed = ExactDivisor::new(n, mu)?;
        // x·μ − y·(N/μ) = 1
        let (_, x, y) = crate::numtheory::ext_gcd(ed.mu() as i128, ed.complement() as i128);
        let x = BigRational::from_integer(BigInt::from(x));
        let y = BigRational::from_integer(BigInt::from(-y));
        Self::new(n, mu, x, y, BigRational::one(), BigRational::one())
    }

    /// `(1, 1/σ; 0, 1)`.
    pub fn upper_unipotent(n: u64, sigma: u64) -> Result<Self> {
        Self::new(n, 1, int(1), rat(1, sigma as i64), int(0), int(1))
    }

    /// `(1, 0; N/σ, 1)`.
    pub fn lower_unipotent(n: u64, sigma: u64) -> Result<Self> {
        Self::new(n, 1, int(1), int(0), rat(1, sigma as i64), int(1))
    }

    /// An integer matrix of determinant one with `N | c`.
    pub fn from_gamma0(n: u64, m: &IntMatrix) -> Result<Self> {
        m.check_det_one()?;
        let c = BigRational::new(m.c.clone(), BigInt::from(n));
        if !c.is_integer() {
            return Err(Error::NotMember(n));
        }
        Self::new(
            n,
            1,
            BigRational::from_integer(m.a.clone()),
            BigRational::from_integer(m.b.clone()),
            c,
            BigRational::from_integer(m.d.clone()),
        )
    }

    pub fn level(&self) -> u64 {
        self.mu.n()
    }

    pub fn mu(&self) -> u64 {
        self.mu.mu()
    }

    pub fn exact_divisor(&self) -> ExactDivisor {
        self.mu
    }

    pub fn coefficients(&self) -> [&BigRational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// The integer `adμ`.
    pub fn x_invariant(&self) -> BigInt {
        (&self.a * &self.d * int(self.mu())).to_integer()
    }

    /// The integer `bc(N/μ)`; equals `adμ − 1`.
    pub fn y_invariant(&self) -> BigInt {
        (&self.b * &self.c * int(self.mu.complement())).to_integer()
    }

    /// The products `ab, ac, bd, cd`, which do not depend on the presentation.
    pub fn products(&self) -> [BigRational; 4] {
        [
            &self.a * &self.b,
            &self.a * &self.c,
            &self.b * &self.d,
            &self.c * &self.d,
        ]
    }

    pub fn matrix(&self) -> Matrix2 {
        let n = self.level();
        let mu = self.mu();
        let root = SqrtRat::sqrt(mu);
        let inv_root = root.scale(&rat(1, mu as i64));
        Matrix2::new(
            root.scale(&self.a),
            inv_root.scale(&self.b),
            root.scale(&(&self.c * int(n / mu))),
            root.scale(&self.d),
        )
    }

    /// Group law, computed on presentations.
    pub fn multiply(&self, y: &GammaStarElem) -> Result<GammaStarElem> {
        let n = self.level();
        if y.level() != n {
            return Err(Error::LevelMismatch {
                left: n,
                right: y.level(),
            });
        }
        let (mu, nu) = (self.mu(), y.mu());
        let delta = gcd(mu, nu);
        let kappa = exact_divisor_product(self.mu, y.mu)?;
        let k = kappa.mu();
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let (e, f, g, h) = (&y.a, &y.b, &y.c, &y.d);
        let dl = int(delta);
        let nk = int(n) / int(delta * k);
        let mud = int(mu / delta);
        let nud = int(nu / delta);
        let a2 = a * e * &dl + b * g * &nk;
        let b2 = a * f * &mud + b * h * &nud;
        let c2 = c * e * &nud + d * g * &mud;
        let d2 = c * f * &nk + d * h * &dl;
        GammaStarElem::new(n, k, a2, b2, c2, d2)
    }

    pub fn inverse(&self) -> GammaStarElem {
        GammaStarElem {
            mu: self.mu,
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn neg(&self) -> GammaStarElem {
        GammaStarElem {
            mu: self.mu,
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    pub fn pow(&self, mut k: u32) -> GammaStarElem {
        let mut acc = GammaStarElem::identity(self.level());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.multiply(&base).expect("same level");
            }
            base = base.multiply(&base).expect("same level");
            k >>= 1;
        }
        acc
    }

    /// Every valid presentation of the same matrix.
    pub fn presentations(&self) -> Vec<GammaStarElem> {
        let even: Vec<u64> = factorize(self.level())
            .into_iter()
            .filter(|&(_, e)| e % 2 == 0)
            .map(|(p, _)| p)
            .collect();
        let mut out = Vec::new();
        for mask in 0u32..(1 << even.len()) {
            // intermediate steps may leave the valid set
            let mut cur = Some(self.clone());
            for (i, &p) in even.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    cur = cur.and_then(|x| x.transfer_raw(p));
                }
            }
            if let Some(x) = cur {
                if let Ok(valid) = GammaStarElem::new(x.level(), x.mu(), x.a, x.b, x.c, x.d) {
                    out.push(valid);
                }
            }
        }
        out.sort_by_key(|x| x.mu());
        out
    }

    fn transfer_raw(&self, p: u64) -> Option<GammaStarElem> {
        let n = self.level();
        let v = valuation(p, n);
        if v == 0 || v % 2 == 1 {
            return None;
        }
        let pk = int(p.pow(v / 2));
        let full = p.pow(v);
        let moved = if self.mu() % p == 0 {
            GammaStarElem {
                mu: ExactDivisor::new(n, self.mu() / full).ok()?,
                a: &self.a * &pk,
                b: &self.b / &pk,
                c: &self.c / &pk,
                d: &self.d * &pk,
            }
        } else {
            GammaStarElem {
                mu: ExactDivisor::new(n, self.mu() * full).ok()?,
                a: &self.a / &pk,
                b: &self.b * &pk,
                c: &self.c * &pk,
                d: &self.d / &pk,
            }
        };
        Some(moved)
    }

    /// True when no prime of `N` divides the summand of `adμ − bc(N/μ)` that
    /// belongs to the opposite side of the split `μ · N/μ`.
    pub fn is_cancellation_free(&self) -> bool {
        let x = self.x_invariant();
        let y = self.y_invariant();
        prime_divisors(self.level()).into_iter().all(|p| {
            let bp = BigInt::from(p);
            if self.mu() % p == 0 {
                !(&y % &bp).is_zero()
            } else {
                !(&x % &bp).is_zero()
            }
        })
    }

    /// The cancellation-free presentation with the smallest `μ`.
    pub fn normalize_presentation(&self) -> GammaStarElem {
        self.presentations()
            .into_iter()
            .find(|x| x.is_cancellation_free())
            .unwrap_or_else(|| self.clone())
    }

    /// The minimal `σ | s_N` with the element in `Γ₀^{*,σ}(N)`.
    pub fn sigma_level(&self) -> u64 {
        let [ab, _, _, cd] = self.products();
        lcm(den_u64(&ab), den_u64(&cd))
    }

    /// The same quantity computed from `ac` and `bd`.
    pub fn sigma_level_alt(&self) -> u64 {
        let [_, ac, bd, _] = self.products();
        lcm(den_u64(&ac), den_u64(&bd))
    }

    /// `x·γ·x⁻¹` for an integral `γ`, through the closed-form entry expressions.
    pub fn conjugate_int(&self, gamma: &IntMatrix) -> Matrix2 {
        let n = int(self.level());
        let mu = int(self.mu());
        let nmu = int(self.mu.complement());
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let q = |x: &BigInt| BigRational::from_integer(x.clone());
        let (e, f, g, h) = (q(&gamma.a), q(&gamma.b), q(&gamma.c), q(&gamma.d));
        let emh = &e - &h;
        let tl = b * d * &g - a * c * &f * &n + a * d * &e * &mu - b * c * &h * &nmu;
        let tr = a * a * &f * &mu - a * b * &emh - b * b * &g / &mu;
        let bl = d * d * &g * &mu + c * d * &n * &emh - c * c * &f * &n * &n / &mu;
        let br = a * c * &f * &n - b * d * &g + a * d * &h * &mu - b * c * &e * &nmu;
        Matrix2::from_rationals(tl, tr, bl, br)
    }

    /// `x·m·x⁻¹` by direct multiplication.
    pub fn conjugate_matrix(&self, m: &Matrix2) -> Result<Matrix2> {
        self.matrix().conjugate(m)
    }

    /// Recovers a presentation from a real matrix, trying every exact divisor.
    pub fn from_matrix(n: u64, m: &Matrix2) -> Result<GammaStarElem> {
        if !m.det()?.is_one_value() {
            return Err(Error::DeterminantNotOne(m.det()?.to_string()));
        }
        for ed in exact_divisors(n)? {
            let mu = ed.mu();
            let root = SqrtRat::sqrt(mu);
            let inv_root = root
                .checked_div(&SqrtRat::from_int(mu as i64))
                .expect("nonzero");
            let coeffs = [
                (&m.e * &inv_root).to_rational(),
                (&m.f * &root).to_rational(),
                (&m.g * &inv_root)
                    .to_rational()
                    .map(|x| x / int(ed.complement())),
                (&m.h * &inv_root).to_rational(),
            ];
            if let [Some(a), Some(b), Some(c), Some(d)] = coeffs {
                if let Ok(x) = GammaStarElem::new(n, mu, a, b, c, d) {
                    return Ok(x.normalize_presentation());
                }
            }
        }
        Err(Error::NotMember(n))
    }

    /// Same matrix, compared through the real entries.
    pub fn same_matrix(&self, other: &GammaStarElem) -> bool {
        self.level() == other.level() && self.matrix() == other.matrix()
    }

    pub fn is_identity(&self) -> bool {
        self.matrix() == Matrix2::identity()
    }

    /// Whether all of `a, b, c, d` are integers.
    pub fn has_integral_coefficients(&self) -> bool {
        self.coefficients().iter().all(|x| x.is_integer())
    }

    /// The integer matrix when the element lies in `Γ₀(N)`.
    pub fn to_int_matrix(&self) -> Option<IntMatrix> {
        self.matrix().to_int_matrix()
    }
}

impl SqrtRat {
    fn is_one_value(&self) -> bool {
        self.is_rational() && self.coefficient().is_one()
    }
}

impl fmt::Display for GammaStarElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[N={}; mu={}; a={}, b={}, c={}, d={}]",
            self.level(),
            self.mu(),
            self.a,
            self.b,
            self.c,
            self.d
        )
    }
}

/// The nine integrality flags `e², eg, g²/N, 2Nef, N(eh+fg), 2gh, Nf², Nfh, h²`.
pub fn intent_check(n: u64, m: &Matrix2) -> [bool; 9] {
    let nn = SqrtRat::from_int(n as i64);
    let two = SqrtRat::from_int(2);
    let inv_n = SqrtRat::rational(rat(1, n as i64));
    let ok = |x: SqrtRat| x.is_integer();
    let (e, f, g, h) = (&m.e, &m.f, &m.g, &m.h);
    let cross = (e * h)
        .checked_add(&(f * g))
        .map(|s| (&nn * &s).is_integer())
        .unwrap_or(false);
    [
        ok(e * e),
        ok(e * g),
        ok(&(g * g) * &inv_n),
        ok(&(&two * &nn) * &(e * f)),
        cross,
        ok(&two * &(g * h)),
        ok(&nn * &(f * f)),
        ok(&nn * &(f * h)),
        ok(h * h),
    ]
}

/// A generating list for sampling `Γ₀^{*,σ}(N)`: `T^{±1}`, `(1,0;±N,1)`, the two
/// `σ`-unipotents and one Atkin-Lehner element per exact divisor.
pub fn generators(n: u64, sigma: u64) -> Result<Vec<GammaStarElem>> {
    let s_n = sqrt_of_square_part(n);
    if sigma == 0 || s_n % sigma != 0 {
        return Err(Error::NotADivisor { d: sigma, n: s_n });
    }
    let mut out = vec![
        GammaStarElem::from_ints(n, 1, 1, 1, 0, 1)?,
        GammaStarElem::from_ints(n, 1, 1, -1, 0, 1)?,
        GammaStarElem::from_ints(n, 1, 1, 0, 1, 1)?,
        GammaStarElem::from_ints(n, 1, 1, 0, -1, 1)?,
        GammaStarElem::upper_unipotent(n, sigma)?,
        GammaStarElem::lower_unipotent(n, sigma)?,
    ];
    for ed in exact_divisors(n)?.into_iter().skip(1) {
        out.push(GammaStarElem::atkin_lehner(n, ed.mu())?);
    }
    Ok(out)
}

/// The product of generators indexed by `word` (indices taken cyclically).
pub fn word_element(gens: &[GammaStarElem], word: &[usize]) -> GammaStarElem {
    let n = gens[0].level();
    word.iter().fold(GammaStarElem::identity(n), |acc, &i| {
        acc.multiply(&gens[i % gens.len()]).expect("same level")
    })
}

/// `[Γ₀^{*,σ}(N) : Γ₀(N)]`.
pub fn index_over_gamma0(n: u64, sigma: u64) -> Result<u64> {
    if n == 0 || sigma == 0 {
        return Err(Error::Zero);
    }
    let s_n = sqrt_of_square_part(n);
    if s_n % sigma != 0 {
        return Err(Error::NotADivisor { d: sigma, n: s_n });
    }
    let mut num = sigma * sigma;
    let mut den = 1u64;
    for p in prime_divisors(sigma) {
        if valuation(p, n) == 2 * valuation(p, sigma) {
            num *= p + 1;
            den *= p;
        }
    }
    let al = 1u64 << prime_divisors(n / (sigma * sigma)).len();
    debug_assert_eq!(num % den, 0);
    Ok(num / den * al)
}

#[cfg(test)]
mod tests;
