//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails or overruns its time budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use congnorm::verify::{self, CheckOutcome};
use congnorm::Result;

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
    run: fn() -> Result<CheckOutcome>,
}

fn criteria() -> Vec<Criterion> {
    let secs = Duration::from_secs;
    vec![
        Criterion {
            id: 1,
            title: "kernel closed form vs definition, N <= 120",
            budget: secs(30),
            run: || verify::check_kernel_closed_form(120),
        },
        Criterion {
            id: 2,
            title: "Gamma1/Gamma0 sigma, closed form N <= 1000, definition N <= 120",
            budget: secs(30),
            run: || verify::check_gamma1_gamma0(1000, 120),
        },
        Criterion {
            id: 3,
            title: "torsion closed form, N <= 300 and N in {68, 1467}",
            budget: secs(120),
            run: || verify::check_torsion(300, &[68, 1467]),
        },
        Criterion {
            id: 4,
            title: "prime powers <= 256, all subgroups",
            budget: secs(60),
            run: || verify::check_prime_powers(256),
        },
        Criterion {
            id: 5,
            title: "level 91 Atkin-Lehner failure",
            budget: secs(1),
            run: verify::check_level_91,
        },
        Criterion {
            id: 6,
            title: "per-element criterion vs Schreier conjugation, N <= 12",
            budget: secs(120),
            run: || verify::check_oracle_agreement(12),
        },
        Criterion {
            id: 7,
            title: "pm kernel groups N <= 120, index ratio 6/2 at N = 4",
            budget: secs(30),
            run: || verify::check_pm_kernel(120),
        },
        Criterion {
            id: 8,
            title: "index formula vs coset enumeration, N <= 24",
            budget: secs(120),
            run: || verify::check_index_formula(24),
        },
        Criterion {
            id: 9,
            title: "lattices N <= 60, isomorphism invariants N <= 40",
            budget: secs(120),
            run: || verify::check_lattices(60, 40),
        },
        Criterion {
            id: 10,
            title: "conjugated families and Gamma(M), M <= 12",
            budget: secs(60),
            run: || verify::check_families(12),
        },
    ]
}

fn main() -> ExitCode {
    let only: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut all_pass = true;
    for c in criteria() {
        if only.is_some_and(|id| id != c.id) {
            continue;
        }
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        match outcome {
            Ok(o) => {
                let in_time = elapsed <= c.budget;
                let pass = o.passed() && in_time;
                all_pass &= pass;
                println!(
                    "{} criterion {:>2}: {} ({} cases, {} failures, {:.2}s of {}s)",
                    if pass { "PASS" } else { "FAIL" },
                    c.id,
                    c.title,
                    o.checked(),
                    o.failures().count(),
                    elapsed.as_secs_f64(),
                    c.budget.as_secs()
                );
                for f in o.failures().take(10) {
                    println!("    {}: expected {}, got {}", f.case, f.expected, f.actual);
                }
                for n in &o.notes {
                    println!("    note: {n}");
                }
            }
            Err(e) => {
                all_pass = false;
                println!("FAIL criterion {:>2}: {} (error: {e})", c.id, c.title);
            }
        }
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
