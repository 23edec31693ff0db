use hirsch3::arith::{mult_rank, Mat2Q, Rational};
use hirsch3::classifier::{check_invariants, classify, fp_cone_point, ConstructibleType};
use hirsch3::families::{GroupDescriptor, GroupModel, KbEndo, LatticeByZ, Model};
use hirsch3::presentation::Word;
use hirsch3::simplifier::{expand, standardize, StandardForm};
use hirsch3::verifier::{endo_index, fp_cone_bruteforce, oracle_agreement, random_word, TrialConfig};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn fixtures() -> Vec<GroupDescriptor> {
    vec![
        GroupDescriptor::BSbar { m: 2, n: 3 },
        GroupDescriptor::MetabelianH31 { m: 1, n: 2, p: 1, q: 3, e: q("1") },
        GroupDescriptor::MetabelianH31 { m: 2, n: 3, p: 1, q: 5, e: q("7/5") },
        GroupDescriptor::LatticeByZ { m: Mat2Q::new(0, -2, 1, 0) },
        GroupDescriptor::LatticeByZ { m: Mat2Q::new(2, 1, 1, 1) },
        GroupDescriptor::AscHNNKb { e: 1, f: 0, d: 2 },
        GroupDescriptor::AscHNNKb { e: 3, f: 1, d: -2 },
        GroupDescriptor::RankOneQ { generators: vec![q("1/2"), q("3/4")], invert: None },
    ]
}

fn small_prime_int() -> impl Strategy<Value = i64> {
    prop::sample::select(vec![1i64, 2, 3, 4, 5, 6, 7, 9, 10, 12, 14, 15])
}

fn coprime_pair() -> impl Strategy<Value = (i64, i64)> {
    (small_prime_int(), small_prime_int(), prop::bool::ANY)
        .prop_filter("coprime", |(a, b, _)| a.gcd(b) == 1)
        .prop_map(|(a, b, neg)| (a, if neg { -b } else { b }))
}

fn meta_desc() -> impl Strategy<Value = GroupDescriptor> {
    (coprime_pair(), coprime_pair(), -3i64..=3).prop_map(|((m, n), (p, qq), e)| GroupDescriptor::MetabelianH31 {
        m,
        n,
        p,
        q: qq,
        e: Rational::from_int(e),
    })
}

fn matrix() -> impl Strategy<Value = Mat2Q> {
    let entry = prop::sample::select(vec!["0", "1", "-1", "2", "-2", "3", "1/2", "-1/2", "3/2", "1/3"]);
    [entry.clone(), entry.clone(), entry.clone(), entry]
        .prop_map(|[a, b, c, d]| Mat2Q::new(q(a), q(b), q(c), q(d)))
        .prop_filter("nonsingular", |m| !m.det().is_zero())
}

fn gl2z() -> impl Strategy<Value = Mat2Q> {
    prop::collection::vec(0usize..3, 1..6).prop_map(|steps| {
        let gens = [Mat2Q::new(1, 1, 0, 1), Mat2Q::new(1, 0, 1, 1), Mat2Q::new(0, 1, 1, 0)];
        steps.iter().fold(Mat2Q::identity(), |acc, &i| acc.mul(&gens[i]))
    })
}

fn any_desc() -> impl Strategy<Value = GroupDescriptor> {
    prop_oneof![
        meta_desc(),
        matrix().prop_map(|m| GroupDescriptor::LatticeByZ { m }),
        coprime_pair().prop_map(|(m, n)| GroupDescriptor::BSbar { m, n }),
        (prop::sample::select(vec![-5i64, -3, -1, 1, 3, 5]), -3i64..=3, prop::sample::select(vec![-4i64, -2, -1, 1, 2, 3, 5]))
            .prop_map(|(e, f, d)| GroupDescriptor::AscHNNKb { e, f, d }),
    ]
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn of_word_is_a_homomorphism(seed in any::<u64>()) {
        let mut r = rng(seed);
        for d in fixtures() {
            let g = Model::new(&d).unwrap();
            let gens = g.generators();
            let a = random_word(&mut r, &gens, 12);
            let b = random_word(&mut r, &gens, 12);
            let c = random_word(&mut r, &gens, 12);
            let (ea, eb, ec) = (g.of_word(&a).unwrap(), g.of_word(&b).unwrap(), g.of_word(&c).unwrap());
            prop_assert_eq!(g.of_word(&a.mul(&b)).unwrap(), g.mul(&ea, &eb));
            prop_assert_eq!(g.mul(&g.mul(&ea, &eb), &ec), g.mul(&ea, &g.mul(&eb, &ec)));
            prop_assert!(g.is_identity(&g.mul(&ea, &g.inv(&ea))));
            prop_assert_eq!(g.of_word(&a.inverse()).unwrap(), g.inv(&ea));
        }
    }

    #[test]
    fn relator_insertion_preserves_normal_forms(seed in any::<u64>()) {
        let mut r = rng(seed);
        for d in fixtures() {
            let g = Model::new(&d).unwrap();
            let gens = g.generators();
            let w = random_word(&mut r, &gens, 16);
            for rel in g.relations() {
                let c = random_word(&mut r, &gens, 4);
                let w2 = w.mul(&rel.relator().conjugate_by(&c));
                prop_assert_eq!(g.of_word(&w).unwrap(), g.of_word(&w2).unwrap());
            }
        }
    }

    #[test]
    fn lattice_cutoffs_are_monotone(m in matrix(), k in 0u64..12) {
        let g = LatticeByZ::new(m).unwrap();
        prop_assert!(g.lattice_at(k).is_sublattice_of(&g.lattice_at(k + 1)));
    }

    #[test]
    fn reports_satisfy_invariants(d in any_desc()) {
        if let Ok(report) = classify(&d) {
            prop_assert!(check_invariants(&report).is_empty());
            prop_assert_eq!(report.constructible, report.cohomological_dimension == report.hirsch_length);
        }
    }

    #[test]
    fn classification_is_basis_invariant(d in meta_desc(), k in -2i64..=2) {
        let GroupDescriptor::MetabelianH31 { m, n, p, q: qq, .. } = d.clone() else { unreachable!() };
        let r = Rational::new(n, m);
        let s = Rational::new(qq, p);
        let r2 = r.clone() * s.pow(k);
        let changed = GroupDescriptor::MetabelianH31 {
            m: r2.denom().try_into().unwrap(),
            n: r2.numer().try_into().unwrap(),
            p,
            q: qq,
            e: Rational::zero(),
        };
        let swapped = GroupDescriptor::MetabelianH31 { m: p, n: qq, p: m, q: n, e: Rational::zero() };
        let a = classify(&d).unwrap();
        for other in [changed, swapped] {
            let b = classify(&other).unwrap();
            prop_assert_eq!(a.finitely_presentable, b.finitely_presentable);
            prop_assert_eq!(a.polycyclic, b.polycyclic);
            prop_assert_eq!(a.cohomological_dimension, b.cohomological_dimension);
            prop_assert_eq!(&a.coherent.value, &b.coherent.value);
            match (&a.constructible_type, &b.constructible_type) {
                (ConstructibleType::Type1 { n: x, .. }, ConstructibleType::Type1 { n: y, .. }) => prop_assert_eq!(x, y),
                (x, y) => prop_assert_eq!(std::mem::discriminant(x), std::mem::discriminant(y)),
            }
        }
    }

    #[test]
    fn classification_is_conjugation_invariant(m in matrix(), p in gl2z()) {
        let conj = p.inverse().unwrap().mul(&m).mul(&p);
        let a = classify(&GroupDescriptor::LatticeByZ { m }).unwrap();
        let b = classify(&GroupDescriptor::LatticeByZ { m: conj }).unwrap();
        prop_assert_eq!(a.finitely_presentable, b.finitely_presentable);
        prop_assert_eq!(a.polycyclic, b.polycyclic);
        prop_assert_eq!(a.cohomological_dimension, b.cohomological_dimension);
        prop_assert_eq!(a.constructible_type, b.constructible_type);
        prop_assert_eq!(a.radical.hirsch, b.radical.hirsch);
    }

    #[test]
    fn cone_decision_matches_bruteforce((m, n) in coprime_pair(), (p, qq) in coprime_pair()) {
        let (r, s) = (Rational::new(n, m), Rational::new(qq, p));
        prop_assume!(mult_rank(&[r.clone(), s.clone()]).unwrap().rank == 2);
        let decided = fp_cone_point(&r, &s).unwrap();
        let brute = fp_cone_bruteforce(&r, &s, 12).unwrap();
        if brute.is_some() {
            prop_assert!(decided.is_some());
        }
        if let Some((i, j)) = decided {
            if i.abs() <= 12 && j.abs() <= 12 {
                prop_assert!(brute.is_some());
            }
        }
    }

    #[test]
    fn simplifier_round_trip(
        (m, n) in prop::sample::select(vec![(1i64, 2i64), (1, 3), (1, -5), (2, 1), (4, -1), (1, 6)]),
        (p, qq) in prop::sample::select(vec![(1i64, 3i64), (1, 4), (5, 1), (3, -1), (1, -2)]),
        c in -4i64..=4,
        window in 0u32..=2,
    ) {
        let sf = StandardForm { m, n, p, q: qq, c: BigInt::from(c) };
        let pres = expand(&sf, window).unwrap();
        prop_assert_eq!(standardize(&pres).unwrap(), sf);
    }
}

#[test]
fn endo_index_is_ed() {
    for e in [-5i64, -3, -1, 1, 3, 5] {
        for d in (-5i64..=5).filter(|&d| d != 0) {
            for f in [0, 1, -2] {
                let phi = KbEndo::new(e, f, d).unwrap();
                assert_eq!(endo_index(&phi, 12), Ok((e * d).unsigned_abs()), "({e},{f},{d})");
            }
        }
    }
}

#[test]
fn oracle_agrees_on_every_fixture() {
    let cfg = TrialConfig { trials: 300, ..TrialConfig::default() };
    for d in fixtures() {
        let r = oracle_agreement(&d, 1000, &cfg).unwrap();
        assert!(r.passed, "{d:?}: {r:?}");
        assert!(r.warnings.is_empty(), "{d:?}: {:?}", r.warnings);
    }
}

#[test]
fn words_display_and_reparse() {
    let w = Word::new([("t", 1), ("a", 2), ("t", -1)]);
    assert_eq!(w.to_string(), "t a^2 t^-1");
}
