//! Verification sweeps comparing closed forms with definitions and with the
//! coset-enumeration oracle. Sweeps run in parallel over levels and report in
//! level order.

use rayon::prelude::*;

use crate::error::Result;
use crate::gammastar::{generators, index_over_gamma0, GammaStarElem, IntMatrix};
use crate::lattice::{acts_on_lattice, LatticeND};
use crate::normalizer::{
    normalizer_of, normalizer_of_family, normalizes_element, sigma_kernel_closed_form,
    sigma_pm_kernel, sigma_primepower, sigma_square_kernel_bound, sigma_torsion_closed_form,
    transversal, CongFamily,
};
use crate::numtheory::{
    carmichael_lambda, divisors, exact_divisors, factorize, gcd, prime_divisors,
    sqrt_of_square_part,
};
use crate::oracle::{conjugated_kernel_index, conjugation_lands, GroupOracle, DEFAULT_BOUND};
use crate::subgroups::{
    all_subgroups, sigma_h, subgroup_generated, subgroup_kernel, subgroup_square_kernel,
    subgroup_torsion, GammaHMembership, ResidueSubgroup,
};

/// One compared case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseRecord {
    pub case: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl CaseRecord {
    fn new(case: String, expected: impl ToString, actual: impl ToString) -> Self {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        let pass = expected == actual;
        CaseRecord {
            case,
            expected,
            actual,
            pass,
        }
    }
}

/// The outcome of one sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub records: Vec<CaseRecord>,
    /// Findings that are reported but not asserted.
    pub notes: Vec<String>,
}

impl CheckOutcome {
    fn new(name: &str, records: Vec<CaseRecord>) -> Self {
        CheckOutcome {
            name: name.to_string(),
            records,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn checked(&self) -> usize {
        self.records.len()
    }
}

fn par_levels<F>(levels: Vec<u64>, f: F) -> Result<Vec<CaseRecord>>
where
    F: Fn(u64) -> Result<Vec<CaseRecord>> + Sync + Send,
{
    let parts: Vec<Result<Vec<CaseRecord>>> = levels.into_par_iter().map(f).collect();
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// Kernel closed form against `σ_H` from the definition, all `D | N ≤ max`.
pub fn check_kernel_closed_form(max: u64) -> Result<CheckOutcome> {
    let records = par_levels((1..=max).collect(), |n| {
        divisors(n)
            .into_iter()
            .map(|d| {
                Ok(CaseRecord::new(
                    format!("N={n} kernel D={d}"),
                    sigma_h(&subgroup_kernel(n, d)?),
                    sigma_kernel_closed_form(n, d)?,
                ))
            })
            .collect()
    })?;
    Ok(CheckOutcome::new("kernel closed form", records))
}

/// `σ(Γ₁(N)) = 1` and `σ(Γ₀(N)) = gcd(s_N, 24)`: closed form up to
/// `max_closed`, definition up to `max_def`.
pub fn check_gamma1_gamma0(max_closed: u64, max_def: u64) -> Result<CheckOutcome> {
    let records = par_levels((1..=max_closed).collect(), |n| {
        let g0 = gcd(sqrt_of_square_part(n), 24);
        let mut out = vec![
            CaseRecord::new(
                format!("N={n} Gamma1 closed"),
                1,
                sigma_kernel_closed_form(n, n)?,
            ),
            CaseRecord::new(
                format!("N={n} Gamma0 closed"),
                g0,
                sigma_kernel_closed_form(n, 1)?,
            ),
        ];
        if n <= max_def {
            out.push(CaseRecord::new(
                format!("N={n} Gamma1 definition"),
                1,
                sigma_h(&ResidueSubgroup::trivial(n)),
            ));
            out.push(CaseRecord::new(
                format!("N={n} Gamma0 definition"),
                g0,
                sigma_h(&ResidueSubgroup::full(n)),
            ));
        }
        Ok(out)
    })?;
    Ok(CheckOutcome::new("Gamma1 and Gamma0", records))
}

/// Torsion closed form against the definition for all `m | λ(N)`.
pub fn check_torsion(max: u64, extra: &[u64]) -> Result<CheckOutcome> {
    let mut levels: Vec<u64> = (1..=max).collect();
    levels.extend(extra.iter().filter(|&&n| n > max));
    let records = par_levels(levels, |n| {
        divisors(carmichael_lambda(n)?)
            .into_iter()
            .map(|m| {
                Ok(CaseRecord::new(
                    format!("N={n} torsion m={m}"),
                    sigma_h(&subgroup_torsion(n, m)?),
                    sigma_torsion_closed_form(n, m)?,
                ))
            })
            .collect()
    })?;
    Ok(CheckOutcome::new("torsion closed form", records))
}

fn prime_powers(max: u64) -> Vec<(u64, u32)> {
    (2..=max)
        .filter_map(|n| match factorize(n).as_slice() {
            [(p, e)] => Some((*p, *e)),
            _ => None,
        })
        .collect()
}

/// Prime-power case dispatch against `σ_H`, and fullness of the normalizer.
pub fn check_prime_powers(max: u64) -> Result<CheckOutcome> {
    let levels: Vec<(u64, u32)> = prime_powers(max);
    let parts: Vec<Result<Vec<CaseRecord>>> = levels
        .into_par_iter()
        .map(|(l, u)| {
            let n = l.pow(u);
            let mut out = Vec::new();
            for h in all_subgroups(n)? {
                let spec = normalizer_of(&h)?;
                out.push(CaseRecord::new(
                    format!("N={n} H={h} sigma"),
                    sigma_h(&h),
                    sigma_primepower(l, u, &h)?,
                ));
                out.push(CaseRecord::new(
                    format!("N={n} H={h} full"),
                    true,
                    spec.is_full_group,
                ));
            }
            Ok(out)
        })
        .collect();
    let mut records = Vec::new();
    for p in parts {
        records.extend(p?);
    }
    Ok(CheckOutcome::new("prime powers", records))
}

/// The level-91 example: the Atkin-Lehner element for `μ = 7` fails for
/// `H = ⟨80⟩` while `Γ₀(91)` samples pass.
pub fn check_level_91() -> Result<CheckOutcome> {
    let n = 91;
    let h = subgroup_generated(n, &[80])?;
    let mut records = vec![CaseRecord::new("N=91 H=<80> order".into(), 12, h.order())];
    let w7 = GammaStarElem::from_ints(n, 7, 2, 1, 1, 1)?;
    records.push(CaseRecord::new(
        format!("N=91 {w7} normalizes"),
        false,
        normalizes_element(&w7, &h)?,
    ));
    let full = GammaHMembership::new(ResidueSubgroup::full(n));
    for e in crate::subgroups::units(n) {
        let g = GammaStarElem::from_gamma0(n, &full.lift(e)?)?;
        records.push(CaseRecord::new(
            format!("N=91 diagonal lift {e} normalizes"),
            true,
            normalizes_element(&g, &h)?,
        ));
    }
    for g in [IntMatrix::t(), IntMatrix::from_i64(1, 0, 91, 1)] {
        let g = GammaStarElem::from_gamma0(n, &g)?;
        records.push(CaseRecord::new(
            format!("N=91 {g} normalizes"),
            true,
            normalizes_element(&g, &h)?,
        ));
    }
    let spec = normalizer_of(&h)?;
    records.push(CaseRecord::new("N=91 sigma".into(), 1, spec.sigma));
    records.push(CaseRecord::new(
        "N=91 full group".into(),
        false,
        spec.is_full_group,
    ));
    Ok(CheckOutcome::new("level 91", records))
}

/// Elements with each exact divisor: members at level `σ_H` and, when `σ_H < s_N`,
/// elements of the next levels above it.
pub fn oracle_test_set(n: u64, sigma: u64) -> Result<Vec<GammaStarElem>> {
    let s = sqrt_of_square_part(n);
    let mut out = Vec::new();
    let larger: Vec<u64> = divisors(s)
        .into_iter()
        .filter(|t| t % sigma == 0 && *t != sigma)
        .collect();
    for ed in exact_divisors(n)? {
        let w = GammaStarElem::atkin_lehner(n, ed.mu())?;
        out.push(w.clone());
        out.push(w.multiply(&GammaStarElem::upper_unipotent(n, sigma)?)?);
        out.push(w.multiply(&GammaStarElem::lower_unipotent(n, sigma)?)?);
        for &t in &larger {
            out.push(w.multiply(&GammaStarElem::upper_unipotent(n, t)?)?);
            out.push(w.multiply(&GammaStarElem::lower_unipotent(n, t)?)?);
        }
    }
    out.extend(transversal(n, s)?);
    Ok(out)
}

/// The per-element criterion against conjugation of Schreier generators.
pub fn check_oracle_agreement(max: u64) -> Result<CheckOutcome> {
    let cases: Vec<(u64, ResidueSubgroup)> = (2..=max)
        .map(|n| Ok(all_subgroups(n)?.into_iter().map(move |h| (n, h))))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let parts: Vec<Result<Vec<CaseRecord>>> = cases
        .into_par_iter()
        .map(|(n, h)| {
            let oracle = GroupOracle::new(GammaHMembership::new(h.clone()), DEFAULT_BOUND)?;
            let sigma = sigma_h(&h);
            let set = oracle_test_set(n, sigma)?;
            let s = sqrt_of_square_part(n);
            let mut out = Vec::new();
            for ed in exact_divisors(n)? {
                let levels: Vec<u64> = set
                    .iter()
                    .filter(|a| a.mu() == ed.mu())
                    .map(|a| a.sigma_level())
                    .collect();
                let covered = levels.iter().any(|l| sigma % l == 0)
                    && (sigma == s || levels.iter().any(|l| sigma % l != 0));
                out.push(CaseRecord::new(
                    format!("N={n} H={h} mu={} test set coverage", ed.mu()),
                    true,
                    covered,
                ));
            }
            for a in set {
                out.push(CaseRecord::new(
                    format!("N={n} H={h} A={a} level={}", a.sigma_level()),
                    normalizes_element(&a, &h)?,
                    oracle.normalizes(&a.matrix())?,
                ));
            }
            Ok(out)
        })
        .collect();
    let mut records = Vec::new();
    for p in parts {
        records.extend(p?);
    }
    Ok(CheckOutcome::new("criterion vs oracle", records))
}

/// `±` kernel groups against the definition, with the index ratio at level 4.
pub fn check_pm_kernel(max: u64) -> Result<CheckOutcome> {
    let mut records = par_levels((1..=max).collect(), |n| {
        divisors(n)
            .into_iter()
            .map(|d| {
                Ok(CaseRecord::new(
                    format!("N={n} pm kernel D={d}"),
                    sigma_h(&subgroup_kernel(n, d)?.pm_extend()),
                    sigma_pm_kernel(n, d)?,
                ))
            })
            .collect()
    })?;
    let (i2, i1) = (index_over_gamma0(4, 2)?, index_over_gamma0(4, 1)?);
    records.push(CaseRecord::new("N=4 index sigma=2".into(), 6, i2));
    records.push(CaseRecord::new("N=4 index sigma=1".into(), 2, i1));
    records.push(CaseRecord::new("N=4 index ratio".into(), 3, i2 / i1));
    Ok(CheckOutcome::new("pm kernel", records))
}

/// Coset enumeration of `[Γ₀(N/σ²) : Γ₀⁰(N/σ, σ)]` against the index formula.
pub fn check_index_formula(max: u64) -> Result<CheckOutcome> {
    let records = par_levels((1..=max).collect(), |n| {
        let mut out = Vec::new();
        for sigma in divisors(sqrt_of_square_part(n)) {
            let w = 1u64 << prime_divisors(n / (sigma * sigma)).len();
            let enumerated = conjugated_kernel_index(n, sigma, DEFAULT_BOUND.max(n))?;
            out.push(CaseRecord::new(
                format!("N={n} sigma={sigma} index"),
                index_over_gamma0(n, sigma)?,
                enumerated * w,
            ));
            out.push(CaseRecord::new(
                format!("N={n} sigma={sigma} conjugation"),
                true,
                conjugation_lands(n, sigma, DEFAULT_BOUND.max(n))?,
            ));
        }
        Ok(out)
    })?;
    Ok(CheckOutcome::new("index formula", records))
}

fn lattice_samples(n: u64) -> Result<Vec<GammaStarElem>> {
    let s = sqrt_of_square_part(n);
    let mut out = generators(n, s)?;
    for sigma in divisors(s) {
        out.push(GammaStarElem::upper_unipotent(n, sigma)?);
        out.push(GammaStarElem::lower_unipotent(n, sigma)?);
    }
    out.extend(transversal(n, s)?);
    Ok(out)
}

/// `SAut⁺` boundary, discriminant kernel against the brute-force action, the
/// `D = 1` and `D = N` groups, and injectivity of the isomorphism invariants.
pub fn check_lattices(max: u64, iso_max: u64) -> Result<CheckOutcome> {
    let mut records = par_levels((1..=max).collect(), |n| {
        let samples = lattice_samples(n)?;
        let mut out = Vec::new();
        for d in divisors(n) {
            let l = LatticeND::new(n, d)?;
            let sigma = l.saut_plus_sigma();
            let mut boundary_ok = true;
            for a in &samples {
                let closed = acts_on_lattice(a, &l)?;
                let by_level = sigma % a.sigma_level() == 0;
                let by_action = l.preserves(&a.matrix())?;
                boundary_ok &= closed == by_level && closed == by_action;
            }
            out.push(CaseRecord::new(
                format!(
                    "N={n} D={d} SAut+ boundary sigma={sigma} ({} samples)",
                    samples.len()
                ),
                true,
                boundary_ok,
            ));
            out.push(CaseRecord::new(
                format!("N={n} D={d} discriminant kernel"),
                l.kernel_subgroup(),
                l.brute_force_kernel()?,
            ));
        }
        let l0 = LatticeND::new(n, 1)?;
        out.push(CaseRecord::new(
            format!("N={n} L(N,1) kernel"),
            ResidueSubgroup::full(n),
            l0.brute_force_kernel()?,
        ));
        out.push(CaseRecord::new(
            format!("N={n} L(N,1) sigma"),
            1,
            l0.saut_plus_sigma(),
        ));
        let l1 = LatticeND::new(n, n)?;
        out.push(CaseRecord::new(
            format!("N={n} L(N,N) kernel"),
            subgroup_square_kernel(n, n)?,
            l1.brute_force_kernel()?,
        ));
        out.push(CaseRecord::new(
            format!("N={n} L(N,N) sigma"),
            if n % 4 == 0 { 2 } else { 1 },
            l1.saut_plus_sigma(),
        ));
        Ok(out)
    })?;
    let mut seen = std::collections::HashMap::new();
    let mut collisions = Vec::new();
    for n in 1..=iso_max {
        for d in divisors(n) {
            if let Some(prev) = seen.insert(LatticeND::new(n, d)?.iso_invariants(), (n, d)) {
                collisions.push(format!("{prev:?}~({n},{d})"));
            }
        }
    }
    records.push(CaseRecord::new(
        format!("iso invariants injective up to {iso_max}"),
        "none",
        if collisions.is_empty() {
            "none".to_string()
        } else {
            collisions.join(",")
        },
    ));
    let mut out = CheckOutcome::new("lattices", records);
    let differ: Vec<String> = (1..=max)
        .flat_map(|n| divisors(n).into_iter().map(move |d| (n, d)))
        .filter(|&(n, d)| {
            crate::lattice::kernel_readings_differ(&LatticeND::new(n, d).expect("D | N"))
        })
        .map(|(n, d)| format!("({n},{d})"))
        .collect();
    out.notes.push(format!(
        "{} pairs (N, D) where squares trivial mod N differs from mod D",
        differ.len()
    ));
    let mut above = Vec::new();
    for n in 1..=max {
        for d in divisors(n) {
            let exact = sigma_h(&subgroup_square_kernel(n, d)?);
            if exact != sigma_square_kernel_bound(n, d)? {
                above.push(format!("({n},{d})"));
            }
        }
    }
    out.notes.push(format!(
        "{} pairs (N, D) where sigma_H of the squares-mod-D group exceeds gcd(D, 2N/D)/2^theta: {}",
        above.len(),
        above.iter().take(12).cloned().collect::<Vec<_>>().join(" ")
    ));
    Ok(out)
}

const FAMILY_MAX_LEVEL: u64 = 24;

/// Families with congruences on `b` and `c`: the normalizer from the kernel
/// closed form at level `MT`, conjugated, checked against the family group by
/// enumeration; the principal congruence case and its lattice.
pub fn check_families(max_m: u64) -> Result<CheckOutcome> {
    let mut cases = Vec::new();
    for t in 1..=12u64 {
        for m in 1..=6u64 {
            let n = t * m;
            if n > FAMILY_MAX_LEVEL {
                continue;
            }
            cases.extend(divisors(n).into_iter().map(|d| (t, m, d)));
        }
    }
    let mut records: Vec<CaseRecord> = Vec::new();
    let parts: Vec<Result<Vec<CaseRecord>>> = cases
        .into_par_iter()
        .map(|(t, m, d)| family_records(t, m, d))
        .collect();
    for p in parts {
        records.extend(p?);
    }
    let principal: Vec<Result<Vec<CaseRecord>>> =
        (1..=max_m).into_par_iter().map(principal_records).collect();
    for p in principal {
        records.extend(p?);
    }
    Ok(CheckOutcome::new("conjugated families", records))
}

fn family_records(t: u64, m: u64, d: u64) -> Result<Vec<CaseRecord>> {
    let f = CongFamily::new(t, m, d)?;
    let n = f.level();
    let fam = normalizer_of_family(f)?;
    let tag = format!("T={t} M={m} D={d}");
    let mut out = vec![CaseRecord::new(
        format!("{tag} sigma"),
        sigma_h(&subgroup_kernel(n, d)?),
        fam.sigma,
    )];
    let oracle = GroupOracle::new(f, DEFAULT_BOUND)?;
    let mut gens_ok = true;
    for g in fam.generators()? {
        gens_ok &= oracle.normalizes(&g)?;
    }
    out.push(CaseRecord::new(
        format!("{tag} generators normalize"),
        true,
        gens_ok,
    ));
    let s = sqrt_of_square_part(n);
    for p in prime_divisors(s) {
        let sigma = fam.sigma * p;
        if s % sigma != 0 {
            continue;
        }
        let u = f.conjugate_in(&GammaStarElem::upper_unipotent(n, sigma)?.matrix());
        out.push(CaseRecord::new(
            format!("{tag} level {sigma} unipotent"),
            false,
            oracle.normalizes(&u)? || fam.contains(&u)?,
        ));
    }
    let lattice = LatticeND::family(t, m, d)?;
    let mut kernel_ok = true;
    let full = GammaHMembership::new(ResidueSubgroup::full(n));
    for e in crate::subgroups::units(n) {
        let x = lattice.embed(&GammaStarElem::from_gamma0(n, &full.lift(e)?)?);
        let trivial = lattice.disc_action_matrix(&x)?.is_identity();
        let g = x.to_int_matrix().expect("integral");
        kernel_ok &= trivial == lattice.kernel_contains(&g);
    }
    out.push(CaseRecord::new(
        format!("{tag} lattice kernel"),
        true,
        kernel_ok,
    ));
    Ok(out)
}

fn principal_records(m: u64) -> Result<Vec<CaseRecord>> {
    let tag = format!("Gamma({m})");
    let f = CongFamily::new(m, m, m)?;
    let fam = normalizer_of_family(f)?;
    let gens = fam.generators()?;
    let mut out = vec![CaseRecord::new(
        format!("{tag} normalizer generators integral"),
        true,
        gens.iter().all(|g| g.is_integral()),
    )];
    for g in [IntMatrix::s(), IntMatrix::t()] {
        out.push(CaseRecord::new(
            format!("{tag} normalizer contains {g}"),
            true,
            fam.contains(&g.to_matrix2())?,
        ));
    }
    let l = LatticeND::family(m, m, m)?;
    out.push(CaseRecord::new(
        format!("{tag} lattice sigma"),
        m,
        l.saut_plus_sigma(),
    ));
    for g in [IntMatrix::s(), IntMatrix::t()] {
        out.push(CaseRecord::new(
            format!("{tag} lattice preserved by {g}"),
            true,
            l.preserves(&g.to_matrix2())?,
        ));
    }
    // kernel: diagonal modulo M with diagonal squares 1 modulo M, against the action
    let n = m * m;
    let full = GammaHMembership::new(ResidueSubgroup::full(n));
    let mut ok = true;
    for e in crate::subgroups::units(n) {
        let x = l.embed(&GammaStarElem::from_gamma0(n, &full.lift(e)?)?);
        let g = x.to_int_matrix().expect("integral");
        let m_big = num_bigint::BigInt::from(m);
        let diagonal = (&g.b % &m_big) == 0.into() && (&g.c % &m_big) == 0.into();
        let sq = e * e % m == 1 % m;
        ok &= l.disc_action_matrix(&x)?.is_identity() == (diagonal && sq);
    }
    for g in [IntMatrix::t(), IntMatrix::s()] {
        ok &= l.disc_action_matrix(&g.to_matrix2())?.is_identity() == (m == 1);
    }
    out.push(CaseRecord::new(format!("{tag} lattice kernel"), true, ok));
    Ok(out)
}

/// Suites exposed on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    ClosedForms,
    Oracle,
    Lattice,
    All,
}

pub fn run_suite(suite: Suite, max_level: u64) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    if matches!(suite, Suite::ClosedForms | Suite::All) {
        out.push(check_kernel_closed_form(max_level)?);
        out.push(check_gamma1_gamma0(max_level, max_level)?);
        out.push(check_torsion(max_level, &[])?);
        out.push(check_pm_kernel(max_level)?);
    }
    if matches!(suite, Suite::Oracle | Suite::All) {
        let m = max_level.min(DEFAULT_BOUND);
        out.push(check_oracle_agreement(m)?);
        out.push(check_index_formula(m.min(24))?);
    }
    if matches!(suite, Suite::Lattice | Suite::All) {
        out.push(check_lattices(max_level, max_level.min(40))?);
    }
    Ok(out)
}
