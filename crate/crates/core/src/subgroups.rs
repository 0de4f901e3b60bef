//! Subgroups `H` of `(ℤ/Nℤ)^×`, the congruence groups `Γ_H` they define, and
//! the invariants `K_H`, `η_H`, `σ_H` together with the Atkin-Lehner action on
//! residues.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::gammastar::IntMatrix;
use crate::numtheory::{
    carmichael_lambda, crt, divisors, gcd, mod_inverse, mod_pow, sqrt_of_square_part, ExactDivisor,
};

/// A subgroup of `(ℤ/Nℤ)^×` stored as its sorted residues in `[0, N)`.
///
/// Modulo 1 the unit group is `{0}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueSubgroup {
    n: u64,
    elems: Vec<u64>,
}

fn one_mod(n: u64) -> u64 {
    1 % n
}

fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    (a as u128 * b as u128 % n as u128) as u64
}

/// The units of `ℤ/nℤ`, ascending.
pub fn units(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&x| gcd(x, n) == 1).collect()
}

impl ResidueSubgroup {
    /// Validates that `elems` is a subgroup of the units modulo `n`.
    pub fn new(n: u64, elems: impl IntoIterator<Item = u64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Zero);
        }
        let set: BTreeSet<u64> = elems.into_iter().map(|x| x % n).collect();
        if let Some(&x) = set.iter().find(|&&x| gcd(x, n) != 1) {
            return Err(Error::NotAUnit(x, n));
        }
        if !set.contains(&one_mod(n)) {
            return Err(Error::InvalidSubgroup("missing the identity".into()));
        }
        for &x in &set {
            for &y in &set {
                if !set.contains(&mulmod(x, y, n)) {
                    return Err(Error::InvalidSubgroup(format!(
                        "{x}·{y} leaves the set modulo {n}"
                    )));
                }
            }
        }
        Ok(ResidueSubgroup {
            n,
            elems: set.into_iter().collect(),
        })
    }

    fn from_sorted(n: u64, elems: Vec<u64>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        ResidueSubgroup { n, elems }
    }

    pub fn trivial(n: u64) -> Self {
        Self::from_sorted(n, vec![one_mod(n)])
    }

    pub fn full(n: u64) -> Self {
        Self::from_sorted(n, units(n))
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn elements(&self) -> &[u64] {
        &self.elems
    }

    pub fn order(&self) -> u64 {
        self.elems.len() as u64
    }

    /// Membership of an arbitrary integer, read modulo `N`.
    pub fn contains(&self, x: u64) -> bool {
        self.elems.binary_search(&(x % self.n)).is_ok()
    }

    pub fn contains_int(&self, x: &BigInt) -> bool {
        let r = x.mod_floor(&BigInt::from(self.n));
        self.contains(u64::try_from(r).expect("residue fits"))
    }

    pub fn is_subgroup_of(&self, other: &ResidueSubgroup) -> bool {
        self.n == other.n && self.elems.iter().all(|&x| other.contains(x))
    }

    pub fn is_trivial(&self) -> bool {
        self.elems.len() == 1
    }

    pub fn is_full(&self) -> bool {
        self.elems.len() == units(self.n).len()
    }

    /// Inverse of a member.
    pub fn inverse_of(&self, x: u64) -> u64 {
        mod_inverse(x, self.n).expect("members are units")
    }

    /// The subgroup generated by `self` and `other`.
    pub fn join(&self, other: &ResidueSubgroup) -> Result<ResidueSubgroup> {
        if self.n != other.n {
            return Err(Error::LevelMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut gens = self.elems.clone();
        gens.extend_from_slice(&other.elems);
        subgroup_generated(self.n, &gens)
    }

    /// `H` adjoined with `−1`.
    pub fn pm_extend(&self) -> ResidueSubgroup {
        let mut gens = self.elems.clone();
        gens.push(self.n - 1);
        subgroup_generated(self.n, &gens).expect("-1 is a unit")
    }
}

impl fmt::Display for ResidueSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elems.iter().map(u64::to_string).collect();
        write!(f, "{{{}}} mod {}", parts.join(", "), self.n)
    }
}

fn check_divides(d: u64, n: u64) -> Result<()> {
    if n == 0 || d == 0 {
        return Err(Error::Zero);
    }
    if n % d != 0 {
        return Err(Error::NotADivisor { d, n });
    }
    Ok(())
}

/// Units congruent to 1 modulo `D`.
pub fn subgroup_kernel(n: u64, d: u64) -> Result<ResidueSubgroup> {
    check_divides(d, n)?;
    let elems = units(n).into_iter().filter(|&x| x % d == 1 % d).collect();
    Ok(ResidueSubgroup::from_sorted(n, elems))
}

/// Units whose order divides `m`.
pub fn subgroup_torsion(n: u64, m: u64) -> Result<ResidueSubgroup> {
    let lambda = carmichael_lambda(n)?;
    if m == 0 || lambda % m != 0 {
        return Err(Error::NotTorsionExponent { m, lambda });
    }
    let elems = units(n)
        .into_iter()
        .filter(|&x| mod_pow(x, m, n) == one_mod(n))
        .collect();
    Ok(ResidueSubgroup::from_sorted(n, elems))
}

/// Units whose square is 1 modulo `D`.
pub fn subgroup_square_kernel(n: u64, d: u64) -> Result<ResidueSubgroup> {
    check_divides(d, n)?;
    let elems = units(n)
        .into_iter()
        .filter(|&x| mulmod(x, x, d) == 1 % d)
        .collect();
    Ok(ResidueSubgroup::from_sorted(n, elems))
}

/// The multiplicative closure of `gens`.
pub fn subgroup_generated(n: u64, gens: &[u64]) -> Result<ResidueSubgroup> {
    if n == 0 {
        return Err(Error::Zero);
    }
    let mut elems: HashSet<u64> = HashSet::from([one_mod(n)]);
    for &g in gens {
        let g = g % n;
        if gcd(g, n) != 1 {
            return Err(Error::NotAUnit(g, n));
        }
        // ⟨S, g⟩ is the union of the cosets S·g^k
        let base: Vec<u64> = elems.iter().copied().collect();
        let mut p = g;
        while !elems.contains(&p) {
            for &s in &base {
                elems.insert(mulmod(s, p, n));
            }
            p = mulmod(p, g, n);
        }
    }
    let mut v: Vec<u64> = elems.into_iter().collect();
    v.sort_unstable();
    Ok(ResidueSubgroup::from_sorted(n, v))
}

/// Every subgroup of `(ℤ/Nℤ)^×`, sorted by order and then by elements.
pub fn all_subgroups(n: u64) -> Result<Vec<ResidueSubgroup>> {
    if n == 0 {
        return Err(Error::Zero);
    }
    let us = units(n);
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut frontier = vec![ResidueSubgroup::trivial(n)];
    seen.insert(frontier[0].elems.clone());
    let mut out = frontier.clone();
    while let Some(s) = frontier.pop() {
        for &g in &us {
            if s.contains(g) {
                continue;
            }
            let mut gens = s.elems.clone();
            gens.push(g);
            let t = subgroup_generated(n, &gens)?;
            if seen.insert(t.elems.clone()) {
                frontier.push(t.clone());
                out.push(t);
            }
        }
    }
    out.sort_by(|a, b| (a.order(), &a.elems).cmp(&(b.order(), &b.elems)));
    Ok(out)
}

/// Units `x ≡ 1 (mod K)`, i.e. the kernel of reduction from `N` to `K`.
fn reduction_kernel(n: u64, k: u64) -> impl Iterator<Item = u64> {
    (0..n / k)
        .map(move |j| (1 + k * j) % n)
        .filter(move |&x| gcd(x, n) == 1)
}

/// The minimal `K` with `s_N t_N | K | N` whose reduction kernel lies in `H`.
pub fn k_h(h: &ResidueSubgroup) -> u64 {
    let n = h.n;
    let base = n / sqrt_of_square_part(n);
    divisors(n)
        .into_iter()
        .filter(|k| k % base == 0)
        .find(|&k| reduction_kernel(n, k).all(|x| h.contains(x)))
        .unwrap_or(n)
}

/// `gcd(N, e − e⁻¹ : e ∈ H)`.
pub fn eta_h(h: &ResidueSubgroup) -> u64 {
    let n = h.n;
    h.elems.iter().fold(n, |acc, &e| {
        let inv = h.inverse_of(e);
        gcd(acc, e.abs_diff(inv))
    })
}

/// `gcd(N / K_H, η_H)`.
pub fn sigma_h(h: &ResidueSubgroup) -> u64 {
    gcd(h.n / k_h(h), eta_h(h))
}

/// The residue that is `t⁻¹` modulo `μ` and `t` modulo `N/μ`.
pub fn al_action(n: u64, mu: u64, t: u64) -> Result<u64> {
    let ed = ExactDivisor::new(n, mu)?;
    let inv = mod_inverse(t % n, n).ok_or(Error::NotAUnit(t % n, n))?;
    Ok(crt(inv % mu, mu, t % ed.complement(), ed.complement()))
}

/// Whether every Atkin-Lehner action preserves `H`.
pub fn is_al_invariant(h: &ResidueSubgroup) -> bool {
    let n = h.n;
    crate::numtheory::exact_divisors(n)
        .expect("positive modulus")
        .into_iter()
        .all(|ed| {
            h.elems
                .iter()
                .all(|&t| h.contains(al_action(n, ed.mu(), t).expect("unit")))
        })
}

/// Membership test for `Γ_H`: integer matrices of determinant one with
/// `N | c` and upper-left entry in `H` modulo `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GammaHMembership {
    pub h: ResidueSubgroup,
}

impl GammaHMembership {
    pub fn new(h: ResidueSubgroup) -> Self {
        GammaHMembership { h }
    }

    pub fn level(&self) -> u64 {
        self.h.n
    }

    pub fn contains(&self, m: &IntMatrix) -> bool {
        m.det() == BigInt::from(1) && self.contains_mod(&m.reduce(self.level()))
    }

    /// Membership of the image modulo `N`, for a determinant-one matrix.
    pub fn contains_mod(&self, m: &[u64; 4]) -> bool {
        m[2] == 0 && self.h.contains(m[0])
    }

    /// The lift `(e, (eh − 1)/N; N, h)` of the diagonal class of `e ∈ H`.
    pub fn lift(&self, e: u64) -> Result<IntMatrix> {
        let n = self.level();
        let e = e % n;
        if !self.h.contains(e) {
            return Err(Error::NotMember(n));
        }
        let h = self.h.inverse_of(e);
        let b = (e as i128 * h as i128 - 1) / n as i128;
        Ok(IntMatrix::new(
            BigInt::from(e),
            BigInt::from(b),
            BigInt::from(n),
            BigInt::from(h),
        ))
    }
}
