//! Normalizers of the groups `Γ_H` in `SL₂(ℝ)`.
//!
//! The per-element criterion works on a presentation `(μ, a, b, c, d)`: the
//! denominators of `ab` and `cd` must divide `η_H`, the reduction kernel at
//! level `N/σ` must lie in `H`, and the map `e ↦ Xe − (X−1)e⁻¹` with
//! `X = adμ` must send `H` into itself. The closed forms below give `σ_H`
//! for kernel, torsion, `±`-kernel and prime-power level subgroups and for the
//! conjugated families with congruences on `b` and `c`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::gammastar::{index_over_gamma0, GammaStarElem, IntMatrix, Matrix2, SqrtRat};
use crate::numtheory::{
    carmichael_lambda, crt, euler_phi, exact_divisors, gcd, is_prime, prime_divisors,
    sqrt_of_square_part, valuation,
};
use crate::subgroups::{eta_h, k_h, sigma_h, subgroup_kernel, ResidueSubgroup};

fn residue(x: &BigInt, n: u64) -> u64 {
    x.mod_floor(&BigInt::from(n))
        .to_u64()
        .expect("residue fits")
}

fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    (a as u128 * b as u128 % n as u128) as u64
}

/// Whether `A` normalizes `Γ_H`.
pub fn normalizes_element(a: &GammaStarElem, h: &ResidueSubgroup) -> Result<bool> {
    let n = h.modulus();
    if a.level() != n {
        return Err(Error::LevelMismatch {
            left: a.level(),
            right: n,
        });
    }
    let eta = eta_h(h);
    let [ab, _, _, cd] = a.products();
    let den = |q: &num_rational::BigRational| q.denom().to_u64().expect("small denominator");
    if eta % den(&ab) != 0 || eta % den(&cd) != 0 {
        return Ok(false);
    }
    let k = n / a.sigma_level();
    let kernel_inside = (0..n / k)
        .map(|j| (1 + k * j) % n)
        .filter(|&x| gcd(x, n) == 1)
        .all(|x| h.contains(x));
    if !kernel_inside {
        return Ok(false);
    }
    Ok(residue_condition(residue(&a.x_invariant(), n), h))
}

/// With `Y = X − 1`: `Xe − Yh` and `Xh − Ye` lie in `H` and are inverse, for
/// every `e ∈ H` with inverse `h`.
fn residue_condition(x: u64, h: &ResidueSubgroup) -> bool {
    let n = h.modulus();
    let y = (x + n - 1 % n) % n;
    h.elements().iter().all(|&e| {
        let inv = h.inverse_of(e);
        let u = (mulmod(x, e, n) + n - mulmod(y, inv, n)) % n;
        let v = (mulmod(x, inv, n) + n - mulmod(y, e, n)) % n;
        h.contains(u) && h.contains(v) && mulmod(u, v, n) == 1 % n
    })
}

/// The normalizer of `Γ_H`: contained in `Γ₀^{*,σ}(N)` with `σ = σ_H`, and
/// equal to it when `is_full_group` holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizerSpec {
    pub n: u64,
    pub sigma: u64,
    pub is_full_group: bool,
    pub h: ResidueSubgroup,
}

impl NormalizerSpec {
    pub fn contains(&self, a: &GammaStarElem) -> Result<bool> {
        normalizes_element(a, &self.h)
    }

    /// `[Γ₀^{*,σ}(N) : Γ₀(N)]`, the index of `Γ₀(N)` in the normalizer when it is the full group.
    pub fn index_over_gamma0(&self) -> Option<u64> {
        self.is_full_group
            .then(|| index_over_gamma0(self.n, self.sigma).expect("σ divides s_N"))
    }
}

impl fmt::Display for NormalizerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_full_group {
            write!(f, "Gamma0^(*,{})({})", self.sigma, self.n)
        } else {
            write!(
                f,
                "proper subgroup of Gamma0^(*,{})({})",
                self.sigma, self.n
            )
        }
    }
}

/// Conjugation by the diagonal scaling with ratio `r`: `(e, r·f; g/r, h)`.
pub fn scale_conjugate(m: &Matrix2, r: u64) -> Matrix2 {
    let r = crate::gammastar::int(r);
    let inv = r.recip();
    Matrix2::new(m.e.clone(), m.f.scale(&r), m.g.scale(&inv), m.h.clone())
}

/// One element of `Γ₀^{*,σ}(N)` for each class of `adμ` modulo `N` that occurs
/// in that group.
///
/// The group is the conjugate of the Atkin-Lehner group at level `N/σ²`; there
/// `adμ` is `0` modulo `μ` and `1` modulo the complement, and every integer
/// with these residues occurs.
pub fn transversal(n: u64, sigma: u64) -> Result<Vec<GammaStarElem>> {
    let s_n = sqrt_of_square_part(n);
    if sigma == 0 || s_n % sigma != 0 {
        return Err(Error::NotADivisor { d: sigma, n: s_n });
    }
    let base = n / (sigma * sigma);
    let mut out = Vec::new();
    for ed in exact_divisors(base)? {
        let (mu, nu) = (ed.mu(), ed.complement());
        let x0 = crt(0, mu, 1 % nu, nu);
        for j in 0..sigma * sigma {
            let x = x0 + base * j;
            let a = x / mu;
            let b = (x as i64 - 1) / nu as i64;
            let low = GammaStarElem::from_ints(base, mu, a as i64, b, 1, 1)?;
            let m = low.matrix();
            let m = Matrix2::new(
                m.e,
                m.f.scale(&crate::gammastar::rat(1, sigma as i64)),
                m.g.scale(&crate::gammastar::int(sigma)),
                m.h,
            );
            let elem = GammaStarElem::from_matrix(n, &m)?;
            debug_assert_eq!(residue(&elem.x_invariant(), n), x % n);
            if sigma % elem.sigma_level() != 0 {
                return Err(Error::NotMember(n));
            }
            out.push(elem);
        }
    }
    Ok(out)
}

/// Computes `σ_H` and decides whether the normalizer is all of `Γ₀^{*,σ_H}(N)`.
pub fn normalizer_of(h: &ResidueSubgroup) -> Result<NormalizerSpec> {
    let n = h.modulus();
    let sigma = sigma_h(h);
    let mut full = true;
    for x in transversal(n, sigma)? {
        if !normalizes_element(&x, h)? {
            full = false;
            break;
        }
    }
    Ok(NormalizerSpec {
        n,
        sigma,
        is_full_group: full,
        h: h.clone(),
    })
}

fn check_divides(d: u64, n: u64) -> Result<()> {
    if d == 0 || n == 0 {
        return Err(Error::Zero);
    }
    if n % d != 0 {
        return Err(Error::NotADivisor { d, n });
    }
    Ok(())
}

fn v2(x: u64) -> u32 {
    valuation(2, x)
}

/// `σ` for the kernel of reduction to `D`:
/// `gcd(2D, N/D)·gcd(s_N,24) / (2^θ·gcd(s_N,24,2D))`, `θ = 1` iff `2v₂(D) = v₂(N) − 1`.
pub fn sigma_kernel_closed_form(n: u64, d: u64) -> Result<u64> {
    check_divides(d, n)?;
    let s_n = sqrt_of_square_part(n);
    let g24 = gcd(s_n, 24);
    let theta = u32::from(2 * v2(d) + 1 == v2(n));
    let num = gcd(2 * d, n / d) * g24;
    let den = (1u64 << theta) * gcd(g24, 2 * d);
    if num % den != 0 {
        return Err(Error::NotIntegral(format!("{num}/{den}")));
    }
    Ok(num / den)
}

/// `σ` for the `m`-torsion subgroup.
///
/// The product runs over primes `p | gcd(m, s_N)` with `gcd(p − 1, m) ≤ 2` and
/// has exponents `max{1, min{v_p(m), v_p(2N) − v_p(m)}}`; the dyadic correction
/// is `2^{ε − min{θ, v₂(s_N)}}` with `θ = 1` iff `2v₂(m) = v₂(N) + 1`.
pub fn sigma_torsion_closed_form(n: u64, m: u64) -> Result<u64> {
    let lambda = carmichael_lambda(n)?;
    if m == 0 || lambda % m != 0 {
        return Err(Error::NotTorsionExponent { m, lambda });
    }
    let s_n = sqrt_of_square_part(n);
    let mut two_exp: i64 = 0;
    let mut odd: u64 = 1;
    for p in prime_divisors(gcd(m, s_n)) {
        if gcd(p - 1, m) > 2 {
            continue;
        }
        let vm = valuation(p, m) as i64;
        let v2n = valuation(p, 2 * n) as i64;
        let e = vm.min(v2n - vm).max(1);
        if p == 2 {
            two_exp += e;
        } else {
            odd *= p.pow(e as u32);
        }
    }
    let (vm, vn) = (v2(m), v2(n));
    let theta = i64::from(2 * vm == vn + 1);
    let eps = if vm >= vn && vn >= 6 {
        2
    } else if (vm + 1 == vn && vm >= 5) || (vm == vn && (vn == 4 || vn == 5)) {
        1
    } else {
        0
    };
    two_exp += eps - theta.min(v2(s_n) as i64);
    if two_exp < 0 {
        return Err(Error::NotIntegral(format!("{odd}·2^{two_exp}")));
    }
    Ok(odd << two_exp)
}

/// `(v_p(K_H), v_p(η_H))` for the `m`-torsion subgroup, from the local description.
pub fn torsion_local_data(n: u64, m: u64, p: u64) -> Result<(u32, u32)> {
    let lambda = carmichael_lambda(n)?;
    if m == 0 || lambda % m != 0 {
        return Err(Error::NotTorsionExponent { m, lambda });
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    check_divides(p, n)?;
    let k = n / gcd(m, sqrt_of_square_part(n));
    let vn = valuation(p, n);
    let vm = valuation(p, m);
    let eta = if gcd(p - 1, m) > 2 {
        0
    } else if p != 2 {
        1.max(vn.saturating_sub(vm))
    } else if n % 8 == 0 && m % 2 == 0 {
        3.max(vn + 1 - vm.min(vn + 1))
    } else {
        vn
    };
    Ok((valuation(p, k), eta))
}

/// `σ_H` for `N = l^u` from the order of `H` and its residues modulo 4.
pub fn sigma_primepower(l: u64, u: u32, h: &ResidueSubgroup) -> Result<u64> {
    if !is_prime(l) {
        return Err(Error::NotPrime(l));
    }
    let n = l.checked_pow(u).ok_or(Error::NotPrimePower(h.modulus()))?;
    if h.modulus() != n {
        return Err(Error::LevelMismatch {
            left: n,
            right: h.modulus(),
        });
    }
    let order = h.order();
    if l != 2 {
        let w = valuation(l, order);
        let k = order / l.pow(w);
        return Ok(if k > 2 { 1 } else { l.pow(w.min(u - w)) });
    }
    match u {
        0 | 1 => Ok(1),
        2 => Ok(if h.is_trivial() { 1 } else { 2 }),
        _ => {
            let v = valuation(2, order);
            let all_one_mod_4 = h.elements().iter().all(|&x| x % 4 == 1);
            if all_one_mod_4 || h.contains(n - 1) {
                let w = if all_one_mod_4 { v } else { v - 1 };
                let theta = u32::from(2 * w == u + 1);
                Ok(1 << (w.min(u + 1 - w) - theta))
            } else {
                let w = v - 1;
                Ok(1 << w.min(u - w))
            }
        }
    }
}

/// `σ` for `±` times the kernel of reduction to `D`.
///
/// This agrees with the kernel value except when `D = 4` and `v₂(N) = 2`:
/// there `±1` already fill the units modulo 4, the group is `Γ₀(N)`, and the
/// value is `gcd(s_N, 24)`.
pub fn sigma_pm_kernel(n: u64, d: u64) -> Result<u64> {
    check_divides(d, n)?;
    if d == 4 && v2(n) == 2 {
        return Ok(gcd(sqrt_of_square_part(n), 24));
    }
    sigma_kernel_closed_form(n, d)
}

/// Lower bound `gcd(D, 2N/D) / 2^θ`, `θ = 1` iff `2v₂(D) = v₂(N) + 1`, for `σ_H`
/// of `H = {x : x² ≡ 1 mod D}`.
pub fn sigma_square_kernel_bound(n: u64, d: u64) -> Result<u64> {
    check_divides(d, n)?;
    let theta = u32::from(2 * v2(d) == v2(n) + 1);
    Ok(gcd(d, 2 * n / d) >> theta)
}

/// The group of integer matrices with `T | c`, `M | b` and diagonal `≡ 1 (mod D)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CongFamily {
    pub t: u64,
    pub m: u64,
    pub d: u64,
}

impl CongFamily {
    pub fn new(t: u64, m: u64, d: u64) -> Result<Self> {
        check_divides(d, m.checked_mul(t).ok_or(Error::Zero)?)?;
        Ok(CongFamily { t, m, d })
    }

    pub fn level(&self) -> u64 {
        self.m * self.t
    }

    pub fn contains(&self, g: &IntMatrix) -> bool {
        if g.det() != BigInt::from(1) {
            return false;
        }
        let (t, m, d) = (
            BigInt::from(self.t),
            BigInt::from(self.m),
            BigInt::from(self.d),
        );
        let one = BigInt::from(1);
        g.c.is_multiple_of(&t)
            && g.b.is_multiple_of(&m)
            && (&g.a - &one).is_multiple_of(&d)
            && (&g.d - &one).is_multiple_of(&d)
    }

    /// Takes a matrix at level `N = MT` to the family side: `(e, M·f; g/M, h)`.
    pub fn conjugate_in(&self, x: &Matrix2) -> Matrix2 {
        scale_conjugate(x, self.m)
    }

    /// The inverse of `conjugate_in`.
    pub fn conjugate_out(&self, x: &Matrix2) -> Matrix2 {
        let r = crate::gammastar::int(self.m);
        Matrix2::new(
            x.e.clone(),
            x.f.scale(&r.recip()),
            x.g.scale(&r),
            x.h.clone(),
        )
    }
}

/// The normalizer of a conjugated family: the conjugate of the normalizer of
/// the kernel group at level `MT`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyNormalizer {
    pub family: CongFamily,
    pub sigma: u64,
    pub conjugator_ratio: u64,
    /// Index of the family in its normalizer.
    pub index: u64,
}

impl FamilyNormalizer {
    /// Whether a real matrix lies in the normalizer.
    pub fn contains(&self, x: &Matrix2) -> Result<bool> {
        let n = self.family.level();
        let back = self.family.conjugate_out(x);
        match GammaStarElem::from_matrix(n, &back) {
            Ok(e) => Ok(self.sigma % e.sigma_level() == 0),
            Err(Error::NotMember(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Generators of the normalizer, on the family side.
    pub fn generators(&self) -> Result<Vec<Matrix2>> {
        let n = self.family.level();
        Ok(crate::gammastar::generators(n, self.sigma)?
            .iter()
            .map(|g| self.family.conjugate_in(&g.matrix()))
            .collect())
    }
}

pub fn normalizer_of_family(f: CongFamily) -> Result<FamilyNormalizer> {
    let n = f.level();
    let sigma = sigma_kernel_closed_form(n, f.d)?;
    let index = euler_phi(f.d)? * index_over_gamma0(n, sigma)?;
    Ok(FamilyNormalizer {
        family: f,
        sigma,
        conjugator_ratio: f.m,
        index,
    })
}

/// `σ` for the family with `a ≡ d ≡ 1 (mod T)` and for the one with `a ≡ d ≡ 1 (mod M)`,
/// both at level `N = MT`.
pub fn sigma_mixed_cases(n: u64, t: u64, m: u64) -> Result<(u64, u64)> {
    if t.checked_mul(m) != Some(n) {
        return Err(Error::NotADivisor { d: t, n });
    }
    let g24 = gcd(sqrt_of_square_part(n), 24);
    let value = |x: u64, y: u64| {
        let raw = gcd(2 * x, y) * g24 / gcd(g24, 2 * x);
        if v2(2 * x) == v2(y) {
            raw / 2
        } else {
            raw
        }
    };
    Ok((value(t, m), value(m, t)))
}

/// Definition-level `σ_H` for the kernel group; convenience for sweeps.
pub fn sigma_kernel_definition(n: u64, d: u64) -> Result<u64> {
    Ok(sigma_h(&subgroup_kernel(n, d)?))
}

/// Local invariants straight from the definitions, for comparison with
/// [`torsion_local_data`].
pub fn local_data_definition(h: &ResidueSubgroup, p: u64) -> (u32, u32) {
    let eta = eta_h(h);
    let n = h.modulus();
    let eta_p = if eta == 0 {
        valuation(p, n)
    } else {
        valuation(p, eta)
    };
    (valuation(p, k_h(h)), eta_p)
}

/// `(1, 1/σ; 0, 1)` and `(1, 0; N/σ, 1)` as real matrices.
pub fn unipotent_pair(n: u64, sigma: u64) -> (Matrix2, Matrix2) {
    let u = Matrix2::new(
        SqrtRat::one(),
        SqrtRat::rational(crate::gammastar::rat(1, sigma as i64)),
        SqrtRat::zero(),
        SqrtRat::one(),
    );
    let l = Matrix2::new(
        SqrtRat::one(),
        SqrtRat::zero(),
        SqrtRat::rational(crate::gammastar::rat(n as i64, sigma as i64)),
        SqrtRat::one(),
    );
    (u, l)
}

#[cfg(test)]
mod tests;
