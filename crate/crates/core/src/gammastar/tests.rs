use super::*;
use proptest::prelude::*;

fn q(p: i64, d: i64) -> BigRational {
    rat(p, d)
}

fn elem(
    n: u64,
    mu: u64,
    a: BigRational,
    b: BigRational,
    c: BigRational,
    d: BigRational,
) -> GammaStarElem {
    GammaStarElem::new(n, mu, a, b, c, d).unwrap()
}

#[test]
fn construction_examples() {
    let id = GammaStarElem::from_ints(4, 1, 1, 0, 0, 1).unwrap();
    assert!(id.is_identity());
    let w = GammaStarElem::fricke(4);
    assert_eq!(
        w.matrix(),
        Matrix2::from_rationals(q(0, 1), q(-1, 2), q(2, 1), q(0, 1))
    );
    let x = elem(4, 1, q(1, 1), q(1, 2), q(1, 2), q(2, 1));
    assert_eq!(x.sigma_level(), 2);
    assert!(matches!(
        GammaStarElem::from_ints(12, 3, 1, 1, -1, 1),
        Err(Error::DeterminantNotOne(_))
    ));
    assert!(matches!(
        GammaStarElem::new(4, 1, q(1, 3), q(0, 1), q(0, 1), q(3, 1)),
        Err(Error::DenominatorTooLarge { entry: "a", .. })
    ));
    assert!(matches!(
        GammaStarElem::from_ints(12, 2, 1, 0, 0, 1),
        Err(Error::NotExactDivisor { .. })
    ));
}

#[test]
fn matrix_of_level_12() {
    let x = GammaStarElem::from_ints(12, 3, 1, 2, 1, 3).unwrap();
    let r3 = SqrtRat::sqrt(3);
    let expect = Matrix2::new(
        r3.clone(),
        r3.scale(&q(2, 3)),
        r3.scale(&q(4, 1)),
        r3.scale(&q(3, 1)),
    );
    assert_eq!(x.matrix(), expect);
    assert_eq!(x.matrix().det().unwrap(), SqrtRat::one());
}

#[test]
fn multiply_examples() {
    let w = GammaStarElem::fricke(4);
    let w2 = w.multiply(&w).unwrap();
    assert_eq!(w2, GammaStarElem::from_ints(4, 1, -1, 0, 0, -1).unwrap());
    let t = GammaStarElem::from_ints(4, 1, 1, 1, 0, 1).unwrap();
    let tw = t.multiply(&w).unwrap();
    assert_eq!(tw, GammaStarElem::from_ints(4, 4, 1, -1, 1, 0).unwrap());
    assert_eq!(
        tw.matrix(),
        Matrix2::from_rationals(q(2, 1), q(-1, 2), q(2, 1), q(0, 1))
    );
    assert_eq!(tw.matrix(), t.matrix().checked_mul(&w.matrix()).unwrap());
    assert!(matches!(
        t.multiply(&GammaStarElem::identity(8)),
        Err(Error::LevelMismatch { .. })
    ));
}

#[test]
fn inverse_examples() {
    let w = GammaStarElem::fricke(4);
    assert_eq!(
        w.inverse(),
        GammaStarElem::from_ints(4, 4, 0, 1, -1, 0).unwrap()
    );
    assert_eq!(w.inverse(), w.neg());
    let x = GammaStarElem::from_ints(12, 1, 7, 4, 1, 7).unwrap();
    assert_eq!(
        x.inverse(),
        GammaStarElem::from_ints(12, 1, 7, -4, -1, 7).unwrap()
    );
    assert!(x.multiply(&x.inverse()).unwrap().is_identity());
}

#[test]
fn normalization_examples() {
    // μ = 1 has a cancellation at 2 (adμ = 2); the transfer to μ = 4 removes it
    let x = elem(4, 1, q(1, 1), q(1, 2), q(1, 2), q(2, 1));
    assert!(!x.is_cancellation_free());
    let n = x.normalize_presentation();
    assert_eq!(n, elem(4, 4, q(1, 2), q(1, 1), q(1, 1), q(1, 1)));
    assert!(n.same_matrix(&x));
    // the Fricke element keeps μ = 4 although μ = 1 is a valid presentation
    let w = GammaStarElem::fricke(4);
    assert_eq!(w.presentations().len(), 2);
    assert_eq!(w.normalize_presentation(), w);
    let g0 = GammaStarElem::from_ints(36, 1, 1, 1, 0, 1).unwrap();
    assert_eq!(g0.normalize_presentation(), g0);
}

#[test]
fn sigma_level_examples() {
    assert_eq!(
        GammaStarElem::from_ints(8, 1, 3, 1, 1, 3)
            .unwrap()
            .sigma_level(),
        1
    );
    for n in [2, 4, 12, 36, 50] {
        assert_eq!(GammaStarElem::fricke(n).sigma_level(), 1);
    }
    assert_eq!(
        GammaStarElem::upper_unipotent(36, 6).unwrap().sigma_level(),
        6
    );
}

#[test]
fn conjugation_examples() {
    let t = IntMatrix::t();
    for n in [1, 4, 7, 12] {
        assert_eq!(GammaStarElem::identity(n).conjugate_int(&t), t.to_matrix2());
        let w = GammaStarElem::fricke(n);
        assert_eq!(
            w.conjugate_int(&t),
            Matrix2::from_ints(1, 0, -(n as i64), 1)
        );
    }
}

#[test]
fn from_matrix_examples() {
    assert!(GammaStarElem::from_matrix(6, &Matrix2::identity())
        .unwrap()
        .is_identity());
    let w = Matrix2::from_rationals(q(0, 1), q(-1, 2), q(2, 1), q(0, 1));
    assert_eq!(
        GammaStarElem::from_matrix(4, &w).unwrap(),
        GammaStarElem::fricke(4)
    );
    let r2 = SqrtRat::sqrt(2);
    let m = Matrix2::new(
        r2.clone(),
        SqrtRat::zero(),
        SqrtRat::zero(),
        r2.scale(&q(1, 2)),
    );
    assert_eq!(m.det().unwrap(), SqrtRat::one());
    assert_eq!(GammaStarElem::from_matrix(4, &m), Err(Error::NotMember(4)));
    let bad = Matrix2::from_ints(2, 0, 0, 1);
    assert!(matches!(
        GammaStarElem::from_matrix(4, &bad),
        Err(Error::DeterminantNotOne(_))
    ));
}

#[test]
fn intent_examples() {
    assert_eq!(intent_check(5, &Matrix2::identity()), [true; 9]);
    for n in [3, 4, 10] {
        assert_eq!(
            intent_check(n, &GammaStarElem::fricke(n).matrix()),
            [true; 9]
        );
    }
    let m = Matrix2::from_rationals(q(1, 1), q(1, 3), q(0, 1), q(1, 1));
    let flags = intent_check(4, &m);
    assert!(!flags[3]);
    assert!(!flags.iter().all(|&b| b));
}

#[test]
fn index_examples() {
    for n in [1u64, 6, 30, 49] {
        assert_eq!(
            index_over_gamma0(n, 1).unwrap(),
            1 << prime_divisors(n).len()
        );
    }
    assert_eq!(index_over_gamma0(4, 2).unwrap(), 6);
    assert_eq!(index_over_gamma0(16, 2).unwrap(), 8);
    assert_eq!(
        index_over_gamma0(4, 2).unwrap() / index_over_gamma0(4, 1).unwrap(),
        3
    );
    assert_eq!(index_over_gamma0(12, 2).unwrap(), 12);
    assert!(index_over_gamma0(12, 3).is_err());
}

#[test]
fn squarefree_levels_have_integral_coefficients() {
    for n in [1u64, 6, 10, 30] {
        let gens = generators(n, 1).unwrap();
        for w in 0..200usize {
            let word: Vec<usize> = (0..6).map(|i| (w * 7 + i * 13 + w / 3) % 17).collect();
            assert!(word_element(&gens, &word).has_integral_coefficients());
        }
    }
}

const LEVELS: [u64; 10] = [4, 8, 9, 12, 16, 18, 24, 36, 45, 48];

fn level_and_sigma() -> impl Strategy<Value = (u64, u64)> {
    prop::sample::select(LEVELS.to_vec()).prop_flat_map(|n| {
        let s = sqrt_of_square_part(n);
        let sigmas: Vec<u64> = (1..=s).filter(|d| s % d == 0).collect();
        (Just(n), prop::sample::select(sigmas))
    })
}

fn words() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..64, 0..7)
}

fn gamma1_matrix(n: u64, word: &[usize]) -> IntMatrix {
    // products of T^{±1} and (1 0; ±N 1) lie in Γ₁(N)
    let n = n as i64;
    let gens = [
        IntMatrix::from_i64(1, 1, 0, 1),
        IntMatrix::from_i64(1, -1, 0, 1),
        IntMatrix::from_i64(1, 0, n, 1),
        IntMatrix::from_i64(1, 0, -n, 1),
    ];
    word.iter()
        .fold(IntMatrix::identity(), |acc, &i| acc.mul(&gens[i % 4]))
}

proptest! {
    // about a thousand triples per level
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn group_law_matches_matrices((n, sigma) in level_and_sigma(), w1 in words(), w2 in words(), w3 in words()) {
        let gens = generators(n, sigma).unwrap();
        let (x, y, z) = (word_element(&gens, &w1), word_element(&gens, &w2), word_element(&gens, &w3));
        let xy = x.multiply(&y).unwrap();
        prop_assert_eq!(xy.matrix(), x.matrix().checked_mul(&y.matrix()).unwrap());
        let l = xy.multiply(&z).unwrap();
        let r = x.multiply(&y.multiply(&z).unwrap()).unwrap();
        prop_assert!(l.same_matrix(&r));
        prop_assert!(x.multiply(&x.inverse()).unwrap().is_identity());
        prop_assert!(x.inverse().multiply(&x).unwrap().is_identity());
        prop_assert!(x.multiply(&GammaStarElem::identity(n)).unwrap().same_matrix(&x));
        prop_assert!(sigma % x.sigma_level() == 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn presentations_share_invariants((n, sigma) in level_and_sigma(), w in words()) {
        let gens = generators(n, sigma).unwrap();
        let x = word_element(&gens, &w);
        let pres = x.presentations();
        prop_assert!(!pres.is_empty());
        for p in &pres {
            prop_assert!(p.same_matrix(&x));
            prop_assert_eq!(p.x_invariant(), x.x_invariant());
            prop_assert_eq!(p.y_invariant(), x.y_invariant());
            prop_assert_eq!(p.products(), x.products());
            prop_assert_eq!(p.sigma_level(), x.sigma_level());
        }
        let norm = x.normalize_presentation();
        prop_assert!(norm.is_cancellation_free());
        prop_assert!(norm.same_matrix(&x));
        prop_assert_eq!(norm.normalize_presentation(), norm.clone());
        prop_assert_eq!(x.sigma_level(), x.sigma_level_alt());
        let back = GammaStarElem::from_matrix(n, &x.matrix()).unwrap();
        prop_assert_eq!(back, norm);
    }

    #[test]
    fn conjugation_closed_form((n, sigma) in level_and_sigma(), w in words(), g in words()) {
        let gens = generators(n, sigma).unwrap();
        let x = word_element(&gens, &w);
        let gamma = gamma1_matrix(n, &g);
        let closed = x.conjugate_int(&gamma);
        prop_assert_eq!(&closed, &x.conjugate_matrix(&gamma.to_matrix2()).unwrap());
        let m = closed.to_int_matrix();
        prop_assert!(m.is_some());
        let m = m.unwrap();
        prop_assert!(m.reduce(n)[2] == 0);
        prop_assert_eq!(intent_check(n, &x.matrix()), [true; 9]);
    }
}
