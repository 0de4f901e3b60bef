use super::*;
use crate::gammastar::{generators, rat, word_element};
use crate::numtheory::divisors;
use crate::subgroups::{
    all_subgroups, subgroup_generated, subgroup_square_kernel, subgroup_torsion, GammaHMembership,
};

fn al7_91() -> GammaStarElem {
    GammaStarElem::from_ints(91, 7, 2, 1, 1, 1).unwrap()
}

#[test]
fn element_examples() {
    let h91 = subgroup_generated(91, &[80]).unwrap();
    let a = al7_91();
    let r7 = SqrtRat::sqrt(7);
    assert_eq!(
        a.matrix(),
        Matrix2::new(
            r7.scale(&rat(2, 1)),
            r7.scale(&rat(1, 7)),
            r7.scale(&rat(13, 1)),
            r7.clone()
        )
    );
    assert!(!normalizes_element(&a, &h91).unwrap());
    let g = GammaHMembership::new(ResidueSubgroup::full(91));
    for e in [1u64, 2, 3, 80, 90] {
        let m = g.lift(e).unwrap();
        let x = GammaStarElem::from_gamma0(91, &m).unwrap();
        assert!(normalizes_element(&x, &h91).unwrap());
    }
    for n in [12u64, 20, 36] {
        let w = GammaStarElem::fricke(n);
        for d in divisors(n) {
            assert!(normalizes_element(&w, &subgroup_kernel(n, d).unwrap()).unwrap());
        }
        for m in divisors(carmichael_lambda(n).unwrap()) {
            assert!(normalizes_element(&w, &subgroup_torsion(n, m).unwrap()).unwrap());
        }
    }
    assert!(matches!(
        normalizes_element(&GammaStarElem::identity(4), &h91),
        Err(Error::LevelMismatch { .. })
    ));
}

#[test]
fn normalizer_examples() {
    for n in [1u64, 8, 12, 36, 72] {
        let s = normalizer_of(&ResidueSubgroup::trivial(n)).unwrap();
        assert_eq!((s.sigma, s.is_full_group), (1, true));
        let f = normalizer_of(&ResidueSubgroup::full(n)).unwrap();
        assert_eq!(f.sigma, gcd(sqrt_of_square_part(n), 24));
        assert!(f.is_full_group);
    }
    let s91 = normalizer_of(&subgroup_generated(91, &[80]).unwrap()).unwrap();
    assert_eq!(s91.sigma, 1);
    assert!(!s91.is_full_group);
    assert_eq!(s91.index_over_gamma0(), None);
    assert_eq!(s91.to_string(), "proper subgroup of Gamma0^(*,1)(91)");
}

#[test]
fn transversal_covers_all_classes() {
    for (n, sigma) in [(4u64, 2u64), (16, 4), (36, 6), (72, 6), (45, 3), (12, 2)] {
        let t = transversal(n, sigma).unwrap();
        let base = n / (sigma * sigma);
        assert_eq!(
            t.len() as u64,
            exact_divisors(base).unwrap().len() as u64 * sigma * sigma
        );
        let mut classes: Vec<u64> = t.iter().map(|x| residue(&x.x_invariant(), n)).collect();
        classes.sort_unstable();
        classes.dedup();
        assert_eq!(classes.len(), t.len());
        assert!(t.iter().all(|x| sigma % x.sigma_level() == 0));
    }
    assert!(transversal(12, 3).is_err());
}

#[test]
fn kernel_closed_form_examples() {
    for n in [1u64, 7, 24, 48, 72, 100] {
        assert_eq!(sigma_kernel_closed_form(n, n).unwrap(), 1);
        assert_eq!(
            sigma_kernel_closed_form(n, 1).unwrap(),
            gcd(sqrt_of_square_part(n), 24)
        );
    }
    assert_eq!(
        sigma_kernel_closed_form(48, 4).unwrap(),
        sigma_kernel_definition(48, 4).unwrap()
    );
    assert!(sigma_kernel_closed_form(48, 5).is_err());
}

#[test]
fn torsion_closed_form_examples() {
    for (n, l) in [(16u64, 2u64), (72, 3), (50, 5), (9, 3), (36, 2), (8, 2)] {
        assert_eq!(sigma_torsion_closed_form(n, l).unwrap(), l, "N={n}");
    }
    for (n, l) in [(21u64, 3u64), (14, 3), (98, 3), (18, 2)] {
        assert_eq!(sigma_torsion_closed_form(n, l).unwrap(), 1, "N={n} l={l}");
    }
    assert_eq!(
        sigma_torsion_closed_form(68, 16).unwrap(),
        sigma_h(&subgroup_torsion(68, 16).unwrap())
    );
    assert!(sigma_torsion_closed_form(8, 4).is_err());
}

/// The dyadic correction read with `max{θ, v₂(s_N)}` in place of the minimum.
fn torsion_with_max(n: u64, m: u64) -> (u64, i64) {
    let s_n = sqrt_of_square_part(n);
    let mut two = 0i64;
    let mut odd = 1u64;
    for p in prime_divisors(gcd(m, s_n)) {
        if gcd(p - 1, m) > 2 {
            continue;
        }
        let vm = valuation(p, m) as i64;
        let e = vm.min(valuation(p, 2 * n) as i64 - vm).max(1);
        if p == 2 {
            two += e;
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
    (odd, two + eps - theta.max(v2(s_n) as i64))
}

#[test]
fn torsion_max_reading_breaks_prime_case() {
    // m = 2 at N = 16 must give σ = 2; with the maximum the power of 2 is negative
    let (odd, two) = torsion_with_max(16, 2);
    assert_eq!((odd, two), (1, -1));
    assert_eq!(sigma_h(&subgroup_torsion(16, 2).unwrap()), 2);
    assert_eq!(sigma_torsion_closed_form(16, 2).unwrap(), 2);
}

#[test]
fn local_data_examples() {
    assert_eq!(torsion_local_data(25, 5, 5).unwrap().1, 1);
    assert_eq!(torsion_local_data(7, 3, 7).unwrap().1, 0);
    assert_eq!(torsion_local_data(16, 2, 2).unwrap().1, 4);
    let h = subgroup_torsion(16, 2).unwrap();
    assert_eq!(h.elements(), &[1, 7, 9, 15]);
    assert_eq!(local_data_definition(&h, 2).1, 4);
    assert!(torsion_local_data(16, 2, 3).is_err());
}

#[test]
fn local_data_matches_definition() {
    for n in 2..=200u64 {
        for m in divisors(carmichael_lambda(n).unwrap()) {
            let h = subgroup_torsion(n, m).unwrap();
            assert_eq!(k_h(&h), n / gcd(m, sqrt_of_square_part(n)));
            for p in prime_divisors(n) {
                assert_eq!(
                    torsion_local_data(n, m, p).unwrap(),
                    local_data_definition(&h, p),
                    "N={n} m={m} p={p}"
                );
            }
        }
    }
}

#[test]
fn primepower_examples() {
    // odd l, k > 2: order 4 inside (Z/25)^x
    let h = subgroup_torsion(25, 4).unwrap();
    assert_eq!(sigma_primepower(5, 2, &h).unwrap(), 1);
    // odd l, k ≤ 2: order 2·3 inside (Z/27)^x, w = 1
    let h = subgroup_torsion(27, 6).unwrap();
    assert_eq!(sigma_primepower(3, 3, &h).unwrap(), 3);
    // l = 2, case with −1 outside H and some element ≡ 3 mod 4: H = ⟨7⟩ mod 32
    let h = subgroup_generated(32, &[7]).unwrap();
    let w = valuation(2, h.order()) - 1;
    assert_eq!(sigma_primepower(2, 5, &h).unwrap(), 1 << w.min(5 - w));
    assert!(sigma_primepower(4, 1, &h).is_err());
    assert!(sigma_primepower(2, 4, &h).is_err());
}

#[test]
fn pm_examples() {
    assert_eq!(sigma_pm_kernel(4, 4).unwrap(), 2);
    for n in [2u64, 3, 8, 12, 16, 36] {
        assert_eq!(sigma_pm_kernel(n, n).unwrap(), 1);
    }
    assert_eq!(
        sigma_pm_kernel(12, 6).unwrap(),
        sigma_h(&subgroup_kernel(12, 6).unwrap().pm_extend())
    );
    let r = index_over_gamma0(4, 2).unwrap() / index_over_gamma0(4, 1).unwrap();
    assert_eq!(r, 3);
}

#[test]
fn pm_exception_extends_beyond_level_four() {
    // ±(1 + 4ℤ) fills all units when v₂(N) = 2, so the group is Γ₀(N)
    let h = subgroup_kernel(12, 4).unwrap().pm_extend();
    assert!(h.is_full());
    assert_eq!(sigma_h(&h), 2);
    assert_eq!(sigma_kernel_closed_form(12, 4).unwrap(), 1);
    assert_eq!(sigma_pm_kernel(12, 4).unwrap(), 2);
}

#[test]
fn family_examples() {
    for n in [6u64, 12, 16] {
        for d in divisors(n) {
            let f = normalizer_of_family(CongFamily::new(n, 1, d).unwrap()).unwrap();
            assert_eq!(f.sigma, sigma_kernel_closed_form(n, d).unwrap());
            assert_eq!(f.conjugator_ratio, 1);
        }
    }
    for m in 1..=12u64 {
        let f = normalizer_of_family(CongFamily::new(m, m, m).unwrap()).unwrap();
        assert_eq!(f.sigma, m);
        for g in f.generators().unwrap() {
            assert!(g.is_integral(), "M={m}: {g}");
        }
        assert!(f.contains(&IntMatrix::s().to_matrix2()).unwrap());
        assert!(f.contains(&IntMatrix::t().to_matrix2()).unwrap());
    }
    let f = normalizer_of_family(CongFamily::new(1, 6, 6).unwrap()).unwrap();
    assert_eq!(f.sigma, sigma_kernel_closed_form(6, 6).unwrap());
    assert!(CongFamily::new(2, 3, 5).is_err());
}

#[test]
fn mixed_case_examples() {
    for n in [5u64, 12, 18] {
        let (s1, _) = sigma_mixed_cases(n, n, 1).unwrap();
        let f = normalizer_of_family(CongFamily::new(n, 1, n).unwrap()).unwrap();
        assert_eq!(s1, f.sigma);
        assert_eq!(s1, 1);
    }
    for m in 1..=12u64 {
        assert_eq!(sigma_mixed_cases(m * m, m, m).unwrap(), (m, m));
    }
    let (s, _) = sigma_mixed_cases(8, 2, 4).unwrap();
    assert_eq!(s, sigma_kernel_closed_form(8, 2).unwrap());
    assert_eq!(s, sigma_kernel_definition(8, 2).unwrap());
    assert!(sigma_mixed_cases(8, 3, 3).is_err());
}

#[test]
fn mixed_cases_are_kernel_cases() {
    for n in 1..=200u64 {
        for t in divisors(n) {
            let m = n / t;
            let (a, b) = sigma_mixed_cases(n, t, m).unwrap();
            assert_eq!(a, sigma_kernel_closed_form(n, t).unwrap(), "N={n} T={t}");
            assert_eq!(b, sigma_kernel_closed_form(n, m).unwrap(), "N={n} M={m}");
        }
    }
}

#[test]
fn square_kernel_bound_divides() {
    let mut differ = 0;
    for n in 1..=120u64 {
        for d in divisors(n) {
            let h = subgroup_square_kernel(n, d).unwrap();
            let bound = sigma_square_kernel_bound(n, d).unwrap();
            let actual = sigma_h(&h);
            assert_eq!(actual % bound, 0, "N={n} D={d}");
            if actual != bound {
                differ += 1;
            }
        }
    }
    // the bound is frequently not attained
    assert!(differ > 0);
}

fn sample(n: u64, sigma: u64, count: usize) -> Vec<GammaStarElem> {
    let gens = generators(n, sigma).unwrap();
    (0..count)
        .map(|i| {
            let word: Vec<usize> = (0..(i % 5 + 1))
                .map(|j| (i * 31 + j * 17 + i / 7) % 97)
                .collect();
            word_element(&gens, &word)
        })
        .collect()
}

#[test]
fn boundary_sharpness() {
    for n in [8u64, 9, 16, 18, 24, 32, 36, 48, 72] {
        let s_n = sqrt_of_square_part(n);
        let mut groups: Vec<ResidueSubgroup> = divisors(n)
            .into_iter()
            .map(|d| subgroup_kernel(n, d).unwrap())
            .collect();
        groups.extend(
            divisors(carmichael_lambda(n).unwrap())
                .into_iter()
                .map(|m| subgroup_torsion(n, m).unwrap()),
        );
        for h in &groups {
            let sigma = sigma_h(h);
            for x in sample(n, sigma, 40) {
                assert!(normalizes_element(&x, h).unwrap(), "N={n} H={h} x={x}");
                assert!(normalizes_element(&x.inverse(), h).unwrap());
            }
            for bigger in divisors(s_n).into_iter().filter(|s| sigma % s != 0) {
                let u = GammaStarElem::upper_unipotent(n, bigger).unwrap();
                assert!(
                    !normalizes_element(&u, h).unwrap(),
                    "N={n} H={h} σ'={bigger}"
                );
                let w =
                    GammaStarElem::atkin_lehner(n, exact_divisors(n).unwrap().last().unwrap().mu())
                        .unwrap();
                let x = w.multiply(&u).unwrap();
                assert!(!normalizes_element(&x, h).unwrap());
                assert!(!normalizes_element(&x.inverse(), h).unwrap());
            }
        }
    }
}

#[test]
fn normalizer_is_a_group_on_samples() {
    for n in [12u64, 15, 20, 21, 28] {
        for h in all_subgroups(n).unwrap() {
            let sigma = sigma_h(&h);
            let xs = sample(n, sigma, 30);
            for x in &xs {
                let a = normalizes_element(x, &h).unwrap();
                assert_eq!(a, normalizes_element(&x.inverse(), &h).unwrap());
            }
        }
    }
}
