//! Group-theoretic cross-checks through the permutation action of `SL₂(ℤ)`
//! on right cosets of a congruence subgroup.
//!
//! Cosets are found by breadth-first search over `S` and `T`; two words lie in
//! the same coset when `g₁g₂⁻¹` reduces modulo the level into the image of the
//! subgroup. Schreier generators of the subgroup are then read off the table,
//! and an element normalizes the subgroup when it conjugates every generator
//! back into it, in both directions.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::gammastar::{GammaStarElem, IntMatrix, Matrix2};
use crate::normalizer::{scale_conjugate, CongFamily};
use crate::numtheory::{divisors, exact_divisors, lcm, sqrt_of_square_part};
use crate::subgroups::{GammaHMembership, ResidueSubgroup};

/// Default level bound for coset enumeration.
pub const DEFAULT_BOUND: u64 = 30;

/// A subgroup of `SL₂(ℤ)` containing `Γ(modulus)`, given by its image modulo
/// `modulus`.
pub trait CongruenceGroup {
    fn modulus(&self) -> u64;

    /// Membership of a determinant-one class modulo `modulus`.
    fn contains_mod(&self, m: &[u64; 4]) -> bool;

    fn contains_int(&self, g: &IntMatrix) -> bool {
        g.det() == BigInt::from(1) && self.contains_mod(&g.reduce(self.modulus()))
    }
}

impl CongruenceGroup for GammaHMembership {
    fn modulus(&self) -> u64 {
        self.level()
    }

    fn contains_mod(&self, m: &[u64; 4]) -> bool {
        GammaHMembership::contains_mod(self, m)
    }
}

impl CongruenceGroup for CongFamily {
    fn modulus(&self) -> u64 {
        lcm(lcm(self.t, self.m), self.d)
    }

    fn contains_mod(&self, m: &[u64; 4]) -> bool {
        m[2] % self.t == 0
            && m[1] % self.m == 0
            && m[0] % self.d == 1 % self.d
            && m[3] % self.d == 1 % self.d
    }
}

/// `Γ₀⁰(A, B)`: `A | c` and `B | b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gamma00 {
    pub a: u64,
    pub b: u64,
}

impl CongruenceGroup for Gamma00 {
    fn modulus(&self) -> u64 {
        lcm(self.a, self.b)
    }

    fn contains_mod(&self, m: &[u64; 4]) -> bool {
        m[2] % self.a == 0 && m[1] % self.b == 0
    }
}

fn mul_mod(x: &[u64; 4], y: &[u64; 4], n: u64) -> [u64; 4] {
    let n = n as u128;
    let f = |p: u64, q: u64, r: u64, s: u64| {
        ((p as u128 * q as u128 + r as u128 * s as u128) % n) as u64
    };
    [
        f(x[0], y[0], x[1], y[2]),
        f(x[0], y[1], x[1], y[3]),
        f(x[2], y[0], x[3], y[2]),
        f(x[2], y[1], x[3], y[3]),
    ]
}

/// Inverse of a determinant-one class: `(d, −b; −c, a)`.
fn inv_mod(x: &[u64; 4], n: u64) -> [u64; 4] {
    let neg = |v: u64| (n - v % n) % n;
    [x[3], neg(x[1]), neg(x[2]), x[0]]
}

/// Right cosets `Γg` with transitions under `S` and `T`.
#[derive(Clone, Debug)]
pub struct CosetTable<G> {
    pub group: G,
    pub reps: Vec<IntMatrix>,
    reps_inv_mod: Vec<[u64; 4]>,
    /// `s_perm[i]` is the coset of `reps[i]·S`.
    pub s_perm: Vec<usize>,
    pub t_perm: Vec<usize>,
}

impl<G: CongruenceGroup> CosetTable<G> {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// The coset containing `g`.
    pub fn coset_of(&self, g: &IntMatrix) -> usize {
        let n = self.group.modulus();
        let gm = g.reduce(n);
        self.find(&gm).expect("table is closed")
    }

    fn find(&self, gm: &[u64; 4]) -> Option<usize> {
        let n = self.group.modulus();
        self.reps_inv_mod
            .iter()
            .position(|ri| self.group.contains_mod(&mul_mod(gm, ri, n)))
    }

    /// Whether every transition is a permutation.
    pub fn is_consistent(&self) -> bool {
        let perm = |p: &[usize]| {
            let mut seen = vec![false; p.len()];
            p.iter().all(|&i| !std::mem::replace(&mut seen[i], true))
        };
        perm(&self.s_perm) && perm(&self.t_perm)
    }
}

pub fn enumerate_cosets<G: CongruenceGroup>(group: G, bound: u64) -> Result<CosetTable<G>> {
    let n = group.modulus();
    if n > bound {
        return Err(Error::BoundExceeded { level: n, bound });
    }
    let gens = [IntMatrix::s(), IntMatrix::t()];
    let mut table = CosetTable {
        group,
        reps: vec![IntMatrix::identity()],
        reps_inv_mod: vec![IntMatrix::identity().reduce(n)],
        s_perm: Vec::new(),
        t_perm: Vec::new(),
    };
    let mut i = 0;
    while i < table.reps.len() {
        for (k, x) in gens.iter().enumerate() {
            let g = table.reps[i].mul(x);
            let gm = g.reduce(n);
            let j = match table.find(&gm) {
                Some(j) => j,
                None => {
                    table.reps_inv_mod.push(inv_mod(&gm, n));
                    table.reps.push(g);
                    table.reps.len() - 1
                }
            };
            if k == 0 {
                table.s_perm.push(j);
            } else {
                table.t_perm.push(j);
            }
        }
        i += 1;
    }
    Ok(table)
}

/// Generators `r·x·rep(rx)⁻¹` for every coset representative `r` and `x ∈ {S, T}`,
/// without duplicates or the identity.
pub fn schreier_generators<G: CongruenceGroup>(t: &CosetTable<G>) -> Vec<IntMatrix> {
    let gens = [(IntMatrix::s(), &t.s_perm), (IntMatrix::t(), &t.t_perm)];
    let mut out: Vec<IntMatrix> = Vec::new();
    for (i, r) in t.reps.iter().enumerate() {
        for (x, perm) in &gens {
            let g = r.mul(x).mul(&t.reps[perm[i]].inverse());
            if !g.is_identity() && !out.contains(&g) {
                out.push(g);
            }
        }
    }
    out
}

/// A coset table together with the Schreier generators it yields.
#[derive(Clone, Debug)]
pub struct GroupOracle<G> {
    pub table: CosetTable<G>,
    pub generators: Vec<IntMatrix>,
}

impl<G: CongruenceGroup> GroupOracle<G> {
    pub fn new(group: G, bound: u64) -> Result<Self> {
        let table = enumerate_cosets(group, bound)?;
        let generators = schreier_generators(&table);
        Ok(GroupOracle { table, generators })
    }

    pub fn index(&self) -> usize {
        self.table.len()
    }

    fn conjugates_in(&self, a: &Matrix2, g: &IntMatrix) -> Result<bool> {
        let x = a.conjugate(&g.to_matrix2())?;
        Ok(x.to_int_matrix()
            .is_some_and(|m| self.table.group.contains_int(&m)))
    }

    /// Whether conjugation by `a` (determinant 1) maps the group onto itself.
    pub fn normalizes(&self, a: &Matrix2) -> Result<bool> {
        let inv = a.adjugate();
        for g in &self.generators {
            if !self.conjugates_in(a, g)? || !self.conjugates_in(&inv, g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn oracle_normalizes(a: &GammaStarElem, h: &ResidueSubgroup) -> Result<bool> {
    oracle_normalizes_bounded(a, h, DEFAULT_BOUND)
}

pub fn oracle_normalizes_bounded(
    a: &GammaStarElem,
    h: &ResidueSubgroup,
    bound: u64,
) -> Result<bool> {
    if a.level() != h.modulus() {
        return Err(Error::LevelMismatch {
            left: a.level(),
            right: h.modulus(),
        });
    }
    GroupOracle::new(GammaHMembership::new(h.clone()), bound)?.normalizes(&a.matrix())
}

/// What the oracle finds about the normalizer of `Γ_H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleSigma {
    /// Largest `σ | s_N` with both unipotents of level `σ` in the normalizer.
    pub sigma: u64,
    /// Whether one Atkin-Lehner element per exact divisor normalizes.
    pub atkin_lehner_normalize: bool,
    /// For each prime `p` with `σp | s_N`: the upper unipotent of level `σp` fails.
    pub next_levels_fail: bool,
}

pub fn oracle_sigma(h: &ResidueSubgroup, bound: u64) -> Result<OracleSigma> {
    let n = h.modulus();
    let oracle = GroupOracle::new(GammaHMembership::new(h.clone()), bound)?;
    oracle_sigma_with(&oracle, n)
}

pub fn oracle_sigma_with(oracle: &GroupOracle<GammaHMembership>, n: u64) -> Result<OracleSigma> {
    let s = sqrt_of_square_part(n);
    let mut passing = Vec::new();
    for sigma in divisors(s) {
        let u = GammaStarElem::upper_unipotent(n, sigma)?;
        let l = GammaStarElem::lower_unipotent(n, sigma)?;
        passing.push((
            sigma,
            oracle.normalizes(&u.matrix())? && oracle.normalizes(&l.matrix())?,
        ));
    }
    let sigma = passing
        .iter()
        .filter(|(_, ok)| *ok)
        .map(|(s, _)| *s)
        .max()
        .unwrap_or(1);
    let next_levels_fail = passing
        .iter()
        .filter(|(t, _)| *t != sigma && t % sigma == 0 && crate::numtheory::is_prime(t / sigma))
        .all(|(_, ok)| !ok);
    let mut atkin_lehner_normalize = true;
    for ed in exact_divisors(n)? {
        let w = GammaStarElem::atkin_lehner(n, ed.mu())?;
        if !oracle.normalizes(&w.matrix())? {
            atkin_lehner_normalize = false;
            break;
        }
    }
    Ok(OracleSigma {
        sigma,
        atkin_lehner_normalize,
        next_levels_fail,
    })
}

/// `[Γ₀(N/σ²) : Γ₀⁰(N/σ, σ)]` by coset enumeration.
pub fn conjugated_kernel_index(n: u64, sigma: u64, bound: u64) -> Result<u64> {
    if n % (sigma * sigma) != 0 {
        return Err(Error::NotADivisor {
            d: sigma * sigma,
            n,
        });
    }
    let big = GroupOracle::new(
        Gamma00 {
            a: n / sigma,
            b: sigma,
        },
        bound,
    )?;
    let small = GroupOracle::new(
        Gamma00 {
            a: n / (sigma * sigma),
            b: 1,
        },
        bound,
    )?;
    let (i, j) = (big.index() as u64, small.index() as u64);
    if i % j != 0 {
        return Err(Error::NotIntegral(format!("{i}/{j}")));
    }
    Ok(i / j)
}

/// Whether scaling by `σ` maps the generators of `Γ₀(N)` into `Γ₀⁰(N/σ, σ)` and
/// the listed generators of `Γ₀^{*,σ}(N)` into `Γ₀^*(N/σ²)`.
pub fn conjugation_lands(n: u64, sigma: u64, bound: u64) -> Result<bool> {
    let target = n / (sigma * sigma);
    let inner = Gamma00 {
        a: n / sigma,
        b: sigma,
    };
    let gamma0 = GroupOracle::new(Gamma00 { a: n, b: 1 }, bound)?;
    for g in &gamma0.generators {
        let x = scale_conjugate(&g.to_matrix2(), sigma);
        if !x.to_int_matrix().is_some_and(|m| inner.contains_int(&m)) {
            return Ok(false);
        }
    }
    for g in crate::gammastar::generators(n, sigma)? {
        let x = scale_conjugate(&g.matrix(), sigma);
        match GammaStarElem::from_matrix(target, &x) {
            Ok(e) if e.sigma_level() == 1 => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// The lift `(e, (eh − 1)/N; N, h)` of a unit, an element of `Γ₀(N)`.
pub fn diagonal_lift(n: u64, e: u64) -> Result<IntMatrix> {
    GammaHMembership::new(ResidueSubgroup::full(n)).lift(e)
}

/// `N·∏(1 + 1/p)`.
pub fn gamma0_index(n: u64) -> u64 {
    crate::numtheory::prime_divisors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p + 1))
}

/// Smallest level `N ≤ max` with a cyclic `H` of maximal order `λ(N)` that some
/// Atkin-Lehner action moves, with a generator.
pub fn al_breaking_cyclic_level(max: u64) -> Option<(u64, u64)> {
    use crate::subgroups::{is_al_invariant, subgroup_generated, units};
    for n in 2..=max {
        let lambda = crate::numtheory::carmichael_lambda(n).ok()?;
        for g in units(n) {
            let h = subgroup_generated(n, &[g]).ok()?;
            if h.order() == lambda && !is_al_invariant(&h) {
                return Some((n, g));
            }
        }
    }
    None
}
