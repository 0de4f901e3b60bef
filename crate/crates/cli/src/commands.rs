//! The subcommands. Each returns a report; input errors surface as
//! `congnorm::Error` and map to the usage exit code.

use congnorm::gammastar::{index_over_gamma0, GammaStarElem};
use congnorm::lattice::{acts_on_lattice, disc_action, stabilizer_tests, LatticeND};
use congnorm::normalizer::normalizer_of;
use congnorm::numtheory::{divisors, exact_divisors, square_part};
use congnorm::oracle::gamma0_index;
use congnorm::subgroups::{eta_h, k_h, subgroup_square_kernel, ResidueSubgroup};
use congnorm::verify::{self, Suite};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::report::{num, nums, Report, Status};
use crate::subgroup_spec::SubgroupSpec;

pub fn normalizer(n: u64, spec: &SubgroupSpec) -> congnorm::Result<Report> {
    let mut r = Report::new("normalizer");
    r.input("level", num(n));
    r.input("subgroup", spec.to_string());
    let h = spec.build(n)?;
    let ns = normalizer_of(&h)?;
    r.result("subgroup_elements", nums(h.elements()));
    r.result("subgroup_order", num(h.order()));
    r.result("k_h", num(k_h(&h)));
    r.result("eta_h", num(eta_h(&h)));
    r.result("sigma", num(ns.sigma));
    r.result("is_full_group", ns.is_full_group);
    r.result("group", ns.to_string());
    r.result(
        "index_over_gamma0",
        ns.index_over_gamma0().map_or(Value::Null, num),
    );
    match spec.closed_form_sigma(n)? {
        Some(cf) => {
            r.result("closed_form_sigma", num(cf));
            r.result("closed_form_agrees", cf == ns.sigma);
            if cf != ns.sigma {
                r.status = Status::Disagreement;
            }
        }
        None => {
            r.result("closed_form_sigma", Value::Null);
            r.result("closed_form_agrees", Value::Null);
        }
    }
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum LatticeQuery {
    Gram,
    Saut,
    Kernel,
    Disc,
    Iso,
}

/// A name for `Γ_H` when `H` is one of the standard subgroups.
fn describe_gamma_h(h: &ResidueSubgroup) -> String {
    let n = h.modulus();
    if h.is_trivial() {
        format!("Gamma1({n})")
    } else if subgroup_square_kernel(n, n).is_ok_and(|s| &s == h) {
        format!("Gamma1^[2]({n})")
    } else if h.is_full() {
        format!("Gamma0({n})")
    } else {
        format!("Gamma_H({n}) with H = {h}")
    }
}

pub fn lattice(n: u64, d: u64, queries: &[LatticeQuery]) -> congnorm::Result<Report> {
    let mut r = Report::new("lattice");
    r.input("N", num(n));
    r.input("D", num(d));
    let l = LatticeND::new(n, d)?;
    let all = [
        LatticeQuery::Gram,
        LatticeQuery::Saut,
        LatticeQuery::Kernel,
        LatticeQuery::Disc,
        LatticeQuery::Iso,
    ];
    let queries = if queries.is_empty() {
        &all[..]
    } else {
        queries
    };
    let mut qs: Vec<LatticeQuery> = queries.to_vec();
    qs.sort_by_key(|q| *q as u8);
    qs.dedup();
    let names = qs.iter().map(|q| {
        let v = clap::ValueEnum::to_possible_value(q).expect("no skipped variants");
        json!(v.get_name())
    });
    r.input("queries", Value::Array(names.collect()));
    for q in qs {
        match q {
            LatticeQuery::Gram => {
                let g = l.gram()?;
                r.result(
                    "gram",
                    Value::Array(g.iter().map(|row| nums(row.iter())).collect()),
                );
            }
            LatticeQuery::Saut => {
                let sigma = l.saut_plus_sigma();
                let alt = congnorm::lattice::saut_sigma_via_square_part(n, d);
                r.result("saut_plus_sigma", num(sigma));
                r.result("saut_plus_group", format!("Gamma0^(*,{sigma})({n})"));
                if sigma != alt {
                    r.status = Status::Disagreement;
                }
            }
            LatticeQuery::Kernel => {
                let h = l.kernel_subgroup();
                let brute = l.brute_force_kernel()?;
                r.result("kernel_subgroup", nums(h.elements()));
                r.result("kernel_group", describe_gamma_h(&h));
                r.result("kernel_is_gamma0", h.is_full());
                r.result("kernel_matches_action", brute == h);
                if brute != h {
                    r.status = Status::Disagreement;
                }
            }
            LatticeQuery::Disc => {
                r.result("disc_orders", nums(l.disc_orders()));
                r.result("disc_order", num(l.disc_order()));
            }
            LatticeQuery::Iso => {
                let iso = l.iso_invariants();
                r.result("iso_rescale_min", num(iso.rescale_min));
                r.result("iso_disc_order", num(iso.disc_order));
                r.result(
                    "iso_subgroup_counts",
                    Value::Array(
                        iso.subgroup_counts
                            .iter()
                            .map(|(p, c)| json!({"count": num(c), "p": num(p)}))
                            .collect(),
                    ),
                );
            }
        }
    }
    Ok(r)
}

/// Parses `mu,a,b,c,d` with rationals written `p/q`.
pub fn parse_elem(n: u64, s: &str) -> Result<GammaStarElem, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [mu, a, b, c, d] = parts.as_slice() else {
        return Err(format!("expected mu,a,b,c,d, got `{s}`"));
    };
    let mu: u64 = mu
        .parse()
        .map_err(|_| format!("`{mu}` is not a positive integer"))?;
    let q = |x: &str| -> Result<BigRational, String> {
        x.parse::<BigRational>()
            .map_err(|_| format!("`{x}` is not a rational p/q"))
    };
    GammaStarElem::new(n, mu, q(a)?, q(b)?, q(c)?, q(d)?).map_err(|e| e.to_string())
}

pub fn element(
    n: u64,
    elem: &str,
    subgroup: Option<&SubgroupSpec>,
    lattice_d: Option<u64>,
) -> Result<congnorm::Result<Report>, String> {
    let x = parse_elem(n, elem)?;
    Ok(element_report(n, elem, &x, subgroup, lattice_d))
}

fn element_report(
    n: u64,
    elem: &str,
    x: &GammaStarElem,
    subgroup: Option<&SubgroupSpec>,
    lattice_d: Option<u64>,
) -> congnorm::Result<Report> {
    let mut r = Report::new("element");
    r.input("level", num(n));
    r.input("elem", elem);
    let [a, b, c, d] = x.coefficients();
    r.result("mu", num(x.mu()));
    r.result("coefficients", nums([a, b, c, d]));
    let m = x.matrix();
    r.result("matrix", nums(m.entries()));
    r.result("sigma_level", num(x.sigma_level()));
    r.result("cancellation_free", x.is_cancellation_free());
    let np = x.normalize_presentation();
    let [a, b, c, d] = np.coefficients();
    r.result(
        "normalized_presentation",
        json!({"coefficients": nums([a, b, c, d]), "mu": num(np.mu())}),
    );
    if let Some(spec) = subgroup {
        r.input("subgroup", spec.to_string());
        let h = spec.build(n)?;
        r.result(
            "normalizes",
            congnorm::normalizer::normalizes_element(x, &h)?,
        );
    }
    if let Some(d) = lattice_d {
        r.input("lattice_D", num(d));
        let l = LatticeND::new(n, d)?;
        let acts = acts_on_lattice(x, &l)?;
        r.result("acts_on_lattice", acts);
        if acts {
            let da = disc_action(x, &l)?;
            r.result(
                "disc_action",
                Value::Array(da.m.iter().map(|row| nums(row.iter())).collect()),
            );
            let f = stabilizer_tests(x, &l)?;
            r.result(
                "stabilizer",
                json!({
                    "fixes_h_part_pointwise": f.fixes_h_part_pointwise,
                    "separates_ef": f.separates_ef,
                    "stabilizes_h_part": f.stabilizes_h_part,
                }),
            );
        }
    }
    Ok(r)
}

pub fn index(n: u64, sigma: Option<u64>) -> congnorm::Result<Report> {
    let mut r = Report::new("index");
    r.input("level", num(n));
    let s = square_part(n)?.s;
    let sigmas = match sigma {
        Some(sg) => {
            r.input("sigma", num(sg));
            vec![sg]
        }
        None => divisors(s),
    };
    let mut rows = Vec::new();
    for sg in sigmas {
        rows.push(json!({
            "index_over_gamma0": num(index_over_gamma0(n, sg)?),
            "sigma": num(sg),
        }));
    }
    r.result("s_n", num(s));
    r.result("gamma0_index_in_sl2z", num(gamma0_index(n)));
    r.result(
        "exact_divisors",
        nums(exact_divisors(n)?.iter().map(|e| e.mu())),
    );
    r.result("indices", Value::Array(rows));
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum SuiteArg {
    ClosedForms,
    Oracle,
    Lattice,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::ClosedForms => Suite::ClosedForms,
            SuiteArg::Oracle => Suite::Oracle,
            SuiteArg::Lattice => Suite::Lattice,
            SuiteArg::All => Suite::All,
        }
    }
}

pub fn verify(suite: SuiteArg, max_level: u64, requested: u64) -> congnorm::Result<Report> {
    let mut r = Report::new("verify");
    let name = clap::ValueEnum::to_possible_value(&suite).expect("no skipped variants");
    r.input("suite", name.get_name());
    r.input("requested_max_level", num(requested));
    r.input("max_level", num(max_level));
    let outcomes = verify::run_suite(suite.into(), max_level)?;
    let mut passed = true;
    let checks: Vec<Value> = outcomes
        .iter()
        .map(|o| {
            passed &= o.passed();
            json!({
                "cases": o.records.iter().map(|c| json!({
                    "actual": c.actual,
                    "case": c.case,
                    "expected": c.expected,
                    "pass": c.pass,
                })).collect::<Vec<_>>(),
                "checked": num(o.checked()),
                "failures": num(o.failures().count()),
                "name": o.name,
                "notes": o.notes,
                "passed": o.passed(),
            })
        })
        .collect();
    r.result("checks", checks);
    r.result("passed", passed);
    if !passed {
        r.status = Status::VerificationFailed;
    }
    Ok(r)
}

/// Per-case records are long; the table view keeps only the summary and failures.
pub fn summarize_verify_table(r: &mut Report) {
    if let Some(Value::Array(checks)) = r.results.get_mut("checks") {
        for c in checks.iter_mut() {
            if let Value::Object(m) = c {
                if let Some(Value::Array(cases)) = m.remove("cases") {
                    let failed: Vec<Value> = cases
                        .into_iter()
                        .filter(|x| x["pass"] == Value::Bool(false))
                        .collect();
                    if !failed.is_empty() {
                        m.insert("failed_cases".to_string(), Value::Array(failed));
                    }
                }
            }
        }
    }
}
