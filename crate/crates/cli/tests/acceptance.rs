//! Acceptance criteria, one `[PASS]`/`[FAIL]` line each. Exits nonzero if any fail.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::Parser;
use hirsch3::arith::{conjugate_to_integral, integralize, Mat2Q, Rational};
use hirsch3::classifier::{classify, is_polycyclic, Base, ConstructibleType, QuotientType, TriValue};
use hirsch3::families::GroupDescriptor;
use hirsch3::presentation::{parse_presentation, Presentation};
use hirsch3::simplifier::{atoms_word, expand, exponent_law, express, standardize, ConjugateAtom, StandardForm};
use hirsch3::verifier::{
    check_relations, commutator_depth_test, oracle_agreement, radical_certificate, radical_certificate_with,
    TrialConfig,
};
use hirsch3_cli::descriptor::read_descriptor;
use hirsch3_cli::{run, Cli};
use num_bigint::BigInt;
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn fixture_path(name: &str) -> PathBuf {
    let shipped = dir().join("fixtures").join(format!("{name}.toml"));
    if shipped.exists() {
        shipped
    } else {
        dir().join("tests/data").join(format!("{name}.toml"))
    }
}

fn load(name: &str) -> GroupDescriptor {
    read_descriptor(fixture_path(name).to_str().unwrap()).unwrap().0.descriptor
}

const SHIPPED: [&str; 7] = [
    "d_infty_amalgam",
    "z_plus_z2",
    "f_mod_kprime",
    "bsbar_23",
    "bs12_rtimes",
    "lattice_sol",
    "lattice_asc",
];

fn cfg() -> TrialConfig {
    TrialConfig::default()
}

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn classify_json(name: &str) -> Value {
    let path = fixture_path(name);
    let cli = Cli::parse_from(["hirsch3", "classify", path.to_str().unwrap(), "--format", "json"]);
    let out = run(cli).unwrap();
    let mut v: Value = serde_json::from_str(&out.stdout).unwrap();
    v.as_object_mut().unwrap().remove("tool_version");
    v
}

fn golden_match(name: &str) -> Result<(), String> {
    let text = std::fs::read_to_string(dir().join("tests/golden").join(format!("{name}.json")))
        .map_err(|e| format!("golden for {name}: {e}"))?;
    let mut expected: Value = serde_json::from_str(&text).unwrap();
    expected.as_object_mut().unwrap().remove("tool_version");
    ensure(classify_json(name) == expected, || format!("{name} differs from its golden report"))
}

fn oracle_equivalence() -> Verdict {
    let groups = [
        GroupDescriptor::BSbar { m: 2, n: 3 },
        GroupDescriptor::MetabelianH31 { m: 1, n: 2, p: 1, q: 3, e: q("1") },
        GroupDescriptor::LatticeByZ { m: Mat2Q::new(0, -2, 1, 0) },
        GroupDescriptor::AscHNNKb { e: 1, f: 0, d: 2 },
    ];
    let c = TrialConfig {
        max_word_length: 24,
        ..cfg()
    };
    let start = Instant::now();
    for d in &groups {
        let r = oracle_agreement(d, 10_000, &c).map_err(|e| e.to_string())?;
        ensure(r.passed, || format!("{d:?}: {}", r.counterexample.clone().unwrap_or_default()))?;
        ensure(r.warnings.is_empty(), || format!("{d:?}: {:?}", r.warnings))?;
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(30), || format!("took {took:.1?}, limit 30s"))?;
    Ok(format!("4 x 10000 pairs, 0 mismatches, {took:.1?}"))
}

fn small_rational(rng: &mut impl Rng) -> Rational {
    Rational::new(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=6))
}

fn random_rational_matrix(rng: &mut impl Rng) -> Mat2Q {
    loop {
        let m = Mat2Q::new(small_rational(rng), small_rational(rng), small_rational(rng), small_rational(rng));
        if !m.det().is_zero() {
            return m;
        }
    }
}

fn random_integral_matrix(rng: &mut impl Rng) -> Mat2Q {
    loop {
        let mut e = || rng.gen_range(-9i64..=9);
        let m = Mat2Q::new(e(), e(), e(), e());
        if !m.det().is_zero() {
            return m;
        }
    }
}

fn conjugate(m: &Mat2Q, p: &Mat2Q) -> Mat2Q {
    p.inverse().unwrap().mul(m).mul(p)
}

fn zmatrix() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let start = Instant::now();
    for _ in 0..1000 {
        let m = conjugate(&random_integral_matrix(&mut rng), &random_rational_matrix(&mut rng));
        ensure(conjugate_to_integral(&m) == Ok(true), || format!("{m} should be integral-conjugate"))?;
        let (p, n) = integralize(&m)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("integralize({m}) found nothing"))?;
        ensure(conjugate(&m, &p) == n && n.is_integral(), || format!("integralize({m}) gave {n}"))?;
    }
    let mut negatives = 0;
    while negatives < 1000 {
        let m = random_rational_matrix(&mut rng);
        if m.det().is_integer() && m.trace().is_integer() {
            continue;
        }
        negatives += 1;
        ensure(conjugate_to_integral(&m) == Ok(false), || format!("{m} is not integral-conjugate"))?;
        ensure(matches!(integralize(&m), Ok(None)), || format!("integralize({m}) should fail"))?;
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(5), || format!("took {took:.1?}, limit 5s"))?;
    Ok(format!("1000 positive, 1000 negative, {took:.1?}"))
}

fn random_gl2z(rng: &mut impl Rng) -> Mat2Q {
    let gens = [Mat2Q::new(1, 1, 0, 1), Mat2Q::new(1, -1, 0, 1), Mat2Q::new(1, 0, 1, 1), Mat2Q::new(0, 1, 1, 0)];
    (0..rng.gen_range(1..8)).fold(Mat2Q::identity(), |acc, _| acc.mul(&gens[rng.gen_range(0..gens.len())]))
}

fn polycyclicity() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let lattice = |m: Mat2Q| GroupDescriptor::LatticeByZ { m };
    for _ in 0..200 {
        let m = conjugate(&random_gl2z(&mut rng), &random_rational_matrix(&mut rng));
        ensure(is_polycyclic(&lattice(m.clone())) == Ok(true), || format!("{m} should be polycyclic"))?;
    }
    let mut type2 = 0;
    for k in 0..200 {
        let sign = if rng.gen_bool(0.5) { 2 } else { -2 };
        let m = if k % 2 == 0 {
            let d = random_gl2z(&mut rng).mul(&Mat2Q::new(1, 0, 0, sign)).mul(&random_gl2z(&mut rng));
            conjugate(&d, &random_rational_matrix(&mut rng))
        } else {
            loop {
                let (a, b, c) = (small_rational(&mut rng), small_rational(&mut rng), small_rational(&mut rng));
                if a.is_zero() {
                    continue;
                }
                let d = (Rational::from_int(sign) + b.clone() * c.clone()) / a.clone();
                break Mat2Q::new(a, b, c, d);
            }
        };
        ensure(m.det().abs() == Rational::from_int(2), || format!("{m}: bad sample"))?;
        let desc = lattice(m.clone());
        ensure(is_polycyclic(&desc) == Ok(false), || format!("{m} should not be polycyclic"))?;
        if conjugate_to_integral(&m) == Ok(true) {
            type2 += 1;
            let r = classify(&desc).map_err(|e| e.to_string())?;
            ensure(matches!(r.constructible_type, ConstructibleType::Type2 { .. }), || {
                format!("{m} classified {:?}", r.constructible_type)
            })?;
        }
    }
    Ok(format!("200 unimodular polycyclic, 200 with |det| = 2 ({type2} integral-conjugate, all Type2)"))
}

fn derived_length() -> Verdict {
    let c = TrialConfig { trials: 500, ..cfg() };
    let depth = |d: &GroupDescriptor, k| commutator_depth_test(d, k, &c).map_err(|e| e.to_string());
    for name in ["bs12_rtimes", "meta_23_5"] {
        let d = load(name);
        ensure(depth(&d, 2)?.holds, || format!("{name}: depth 2 fails"))?;
        let one = depth(&d, 1)?;
        ensure(!one.holds && one.witness.is_some(), || format!("{name}: depth 1 has no witness"))?;
    }
    let d = load("d_infty_amalgam");
    ensure(depth(&d, 3)?.holds, || "d_infty_amalgam: depth 3 fails".into())?;
    let two = depth(&d, 2)?;
    ensure(!two.holds && two.witness.is_some(), || "d_infty_amalgam: depth 2 has no witness".into())?;
    for name in SHIPPED.iter().chain(&["meta_23_5"]) {
        let d = load(name);
        ensure(depth(&d, 3)?.holds, || format!("{name} needs depth 4"))?;
        let r = classify(&d).map_err(|e| e.to_string())?;
        ensure(r.derived_length <= 3, || format!("{name}: derived length {}", r.derived_length))?;
    }
    Ok(format!(
        "metabelian fixtures 2, D_infinity amalgam 3 (witness `{}`), none needs 4",
        two.witness.unwrap()
    ))
}

fn trichotomy() -> Verdict {
    let r = classify(&load("bs12_rtimes")).map_err(|e| e.to_string())?;
    ensure(
        matches!(&r.constructible_type, ConstructibleType::Type1 { n, .. } if *n == BigInt::from(6)),
        || format!("bs12_rtimes: {:?}", r.constructible_type),
    )?;
    let r = classify(&load("lattice_asc")).map_err(|e| e.to_string())?;
    ensure(r.constructible_type == ConstructibleType::Type2 { base: Base::Z2 }, || {
        format!("lattice_asc: {:?}", r.constructible_type)
    })?;
    let r = classify(&load("lattice_sol")).map_err(|e| e.to_string())?;
    ensure(r.constructible_type == ConstructibleType::Type3, || format!("lattice_sol: {:?}", r.constructible_type))?;
    let r = classify(&load("meta_23_5")).map_err(|e| e.to_string())?;
    ensure(
        !r.constructible && r.constructible_type == ConstructibleType::None && r.cohomological_dimension == 4,
        || format!("meta_23_5: {:?}, cd {}", r.constructible_type, r.cohomological_dimension),
    )?;
    for name in ["bs12_rtimes", "lattice_asc", "lattice_sol", "meta_23_5"] {
        golden_match(name)?;
    }
    Ok("Type1 n=6, Type2(Z^2), Type3, not constructible with cd 4; goldens match".into())
}

fn coherence() -> Verdict {
    let mut counts = (0, 0);
    for name in SHIPPED {
        let r = classify(&load(name)).map_err(|e| e.to_string())?;
        match r.constructible_type {
            ConstructibleType::Type1 { .. } => {
                counts.0 += 1;
                ensure(r.coherent.value == TriValue::False, || format!("{name}: Type1 but coherent"))?;
            }
            ConstructibleType::Type2 { .. } => {
                counts.1 += 1;
                ensure(r.coherent.value == TriValue::True, || format!("{name}: Type2 but not coherent"))?;
            }
            _ => {}
        }
    }
    ensure(counts.0 > 0 && counts.1 > 0, || format!("fixture coverage {counts:?}"))?;
    let r = classify(&load("bsbar_23")).map_err(|e| e.to_string())?;
    ensure(r.fp2.value == TriValue::False, || "bsbar_23 should not be FP2".into())?;
    Ok(format!("{} Type1 incoherent, {} Type2 coherent, BSbar(2,3) not FP2", counts.0, counts.1))
}

fn smooth_pair(rng: &mut impl Rng) -> (i64, i64) {
    let x = *[2i64, 3, 4, 5, 6, 8, 9, 10, 12, 15, 16, 18, 20, 25].choose(rng).unwrap();
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    if rng.gen_bool(0.5) {
        (1, sign * x)
    } else {
        (x, sign)
    }
}

/// Two atoms on the window with cancelling exponents, avoiding `(0, 0)`.
fn neutral_pair(rng: &mut impl Rng, m: i64, n: i64, p: i64, qq: i64, window: u32) -> Vec<ConjugateAtom> {
    let law = exponent_law(m, n, p, qq, window).unwrap();
    let w = window as i64;
    let points: Vec<(i64, i64)> = law.table.keys().copied().filter(|&k| k != (0, 0)).collect();
    let a = *points.choose(rng).unwrap();
    let b = loop {
        let b = (rng.gen_range(-w..=w), rng.gen_range(-w..=w));
        if b != a && b != (0, 0) {
            break b;
        }
    };
    let (ea, eb) = (law.e(a.0, a.1).unwrap(), law.e(b.0, b.1).unwrap());
    let g = ea.gcd(eb);
    let k = |x: &BigInt| i64::try_from(x / &g).unwrap();
    vec![
        ConjugateAtom { i: a.0, j: a.1, exponent: k(eb) },
        ConjugateAtom { i: b.0, j: b.1, exponent: -k(ea) },
    ]
}

fn obfuscate(rng: &mut impl Rng, sf: &StandardForm, pres: &Presentation, window: u32) -> Presentation {
    let mut relators = pres.relators.clone();
    if window > 0 {
        let z = atoms_word(&neutral_pair(rng, sf.m, sf.n, sf.p, sf.q, window));
        relators[2] = relators[2].mul(&z.inverse());
        for _ in 0..rng.gen_range(0..=2) {
            relators.push(atoms_word(&neutral_pair(rng, sf.m, sf.n, sf.p, sf.q, window)));
        }
    }
    for r in relators.iter_mut() {
        if rng.gen_bool(0.5) {
            *r = r.inverse();
        }
    }
    relators.shuffle(rng);
    let mut generators = pres.generators.clone();
    generators.shuffle(rng);
    let text = Presentation::new(generators, relators).unwrap().to_string();
    parse_presentation(&text).unwrap()
}

fn simplifier_round_trip() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut laws = 0;
    for _ in 0..100 {
        let ((m, n), (p, qq)) = (smooth_pair(&mut rng), smooth_pair(&mut rng));
        let sf = StandardForm { m, n, p, q: qq, c: BigInt::from(rng.gen_range(-4i64..=4)) };
        let window = rng.gen_range(0u32..=2);
        for l in 0..=2u32 {
            let law = exponent_law(m, n, p, qq, l).map_err(|e| e.to_string())?;
            let big_n = BigInt::from(m * n * p * qq).pow(l);
            ensure(law.n_scale == big_n && law.e(0, 0) == Some(&big_n), || format!("e(0,0) != N for {sf:?}"))?;
            let (r, s) = (Rational::new(n, m), Rational::new(qq, p));
            for (&(i, j), e) in &law.table {
                let exact = Rational::from(big_n.clone()) * r.pow(i) * s.pow(j);
                ensure(exact == Rational::from(e.clone()), || format!("e({i},{j}) not integral for {sf:?}"))?;
                if let Some(next) = law.e(i + 1, j) {
                    ensure(next * m == e * n, || format!("t-recurrence fails at ({i},{j})"))?;
                }
                if let Some(next) = law.e(i, j + 1) {
                    ensure(next * p == e * qq, || format!("u-recurrence fails at ({i},{j})"))?;
                }
            }
            laws += 1;
        }
        let pres = expand(&sf, window).map_err(|e| e.to_string())?;
        let law = exponent_law(m, n, p, qq, window).unwrap();
        let used = express(&sf.c, &law)
            .unwrap()
            .iter()
            .map(|a| a.i.unsigned_abs().max(a.j.unsigned_abs()) as u32)
            .max()
            .unwrap_or(0);
        let hidden = obfuscate(&mut rng, &sf, &pres, used);
        let back = standardize(&hidden).map_err(|e| format!("{hidden}: {e}"))?;
        ensure(back == sf, || format!("{hidden} recovered as {back:?}, expected {sf:?}"))?;
    }
    Ok(format!("100 forms recovered, {laws} exponent laws checked"))
}

fn certification() -> Verdict {
    let c = cfg();
    for name in SHIPPED {
        let d = load(name);
        let rel = check_relations(&d).map_err(|e| e.to_string())?;
        ensure(rel.passed, || format!("{name}: relations {:?}", rel.counterexample))?;
        let rad = radical_certificate(&d, &c).map_err(|e| e.to_string())?;
        ensure(rad.passed, || format!("{name}: radical {:?}", rad.counterexample))?;
    }
    let d = load("d_infty_amalgam");
    let w = radical_certificate(&d, &c).unwrap().witness.unwrap_or_default();
    ensure(w.contains("squares in the radical") && w.contains("k ≤ 50"), || format!("D_infinity witness `{w}`"))?;

    let f = load("f_mod_kprime");
    let r = classify(&f).map_err(|e| e.to_string())?;
    ensure(
        r.quotient == Some(QuotientType::Dinfty) && r.fp2.value == TriValue::False && r.cohomological_dimension == 4,
        || format!("f_mod_kprime: {:?}, fp2 {:?}, cd {}", r.quotient, r.fp2.value, r.cohomological_dimension),
    )?;
    ensure(radical_certificate(&f, &c).unwrap().witness.is_some(), || "f_mod_kprime: no D_infinity witness".into())?;

    let bad = load("corrupted_d_infty");
    ensure(!check_relations(&bad).map_err(|e| e.to_string())?.passed, || "corrupted fixture passes".into())?;
    let mut wrong = classify(&d).unwrap().radical;
    wrong.hirsch = 1;
    let control = radical_certificate_with(&d, &wrong, Some(&QuotientType::Dinfty), &c).map_err(|e| e.to_string())?;
    ensure(!control.passed, || "false radical claim certified".into())?;
    let right = classify(&d).unwrap().radical;
    let control = radical_certificate_with(&d, &right, Some(&QuotientType::Z), &c).map_err(|e| e.to_string())?;
    ensure(!control.passed, || "false quotient claim certified".into())?;
    Ok(format!("{} fixtures certified, 3 corrupted controls rejected", SHIPPED.len()))
}

fn manifold_dimension() -> Verdict {
    let mut seen = [0; 3];
    for name in SHIPPED {
        let r = classify(&load(name)).map_err(|e| e.to_string())?;
        let Some(md) = &r.manifold_dim else { continue };
        let got = (md.lower, md.upper, md.exact, md.open);
        match r.constructible_type {
            ConstructibleType::Type3 => {
                seen[2] += 1;
                ensure(got == (3, Some(3), Some(3), false), || format!("{name}: {got:?}"))?
            }
            ConstructibleType::Type1 { .. } => {
                seen[0] += 1;
                ensure(got == (5, Some(5), Some(5), false), || format!("{name}: {got:?}"))?
            }
            ConstructibleType::Type2 { .. } => {
                seen[1] += 1;
                ensure(got == (5, Some(6), None, true), || format!("{name}: {got:?}"))?
            }
            ConstructibleType::None => {}
        }
        golden_match(name)?;
    }
    ensure(seen.iter().all(|&k| k > 0), || format!("fixture coverage {seen:?}"))?;
    Ok(format!("Type1 x{} exact 5, Type2 x{} [5,6] open, Type3 x{} exact 3; goldens match", seen[0], seen[1], seen[2]))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("word-problem oracle equivalence", oracle_equivalence),
        ("integral conjugacy of rational matrices", zmatrix),
        ("polycyclicity criterion", polycyclicity),
        ("derived length at most 3", derived_length),
        ("constructible trichotomy fixtures", trichotomy),
        ("coherence", coherence),
        ("simplifier round trip", simplifier_round_trip),
        ("fixture certification", certification),
        ("manifold dimension metadata", manifold_dimension),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        match verdict {
            Ok(detail) => println!("[PASS] {} {name}: {detail} [{took:.1?}]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {} {name}: {detail} [{took:.1?}]", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
