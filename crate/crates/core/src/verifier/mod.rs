//! Independent brute-force oracles and a seeded randomized harness for the
//! family models and classifier claims.

mod oracle;
mod radical;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{mult_rank, prime_support, ArithError, Rational};
use crate::classifier::{classify, fp_cone_point, ClassifyError, QuotientType, RadicalInfo};
use crate::families::{FamilyError, GroupDescriptor, GroupModel, KbElem, KbEndo, Model};
use crate::presentation::Word;

pub use oracle::{Mat3, Oracle, OracleElem, OracleError};
pub use radical::{certify, claim_for, RadicalClaim};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("invalid trial configuration: {0}")]
    Config(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialConfig {
    pub seed: u64,
    pub trials: usize,
    pub max_word_length: usize,
    pub parameter_bound: u64,
}

impl Default for TrialConfig {
    fn default() -> TrialConfig {
        TrialConfig {
            seed: 20_240_917,
            trials: 500,
            max_word_length: 24,
            parameter_bound: 12,
        }
    }
}

impl TrialConfig {
    pub fn validate(&self) -> Result<(), VerifyError> {
        if self.trials == 0 {
            return Err(VerifyError::Config("trials must be at least 1".into()));
        }
        if self.max_word_length == 0 {
            return Err(VerifyError::Config("max_word_length must be at least 1".into()));
        }
        Ok(())
    }

    /// An independent generator for the check numbered `stream`.
    pub fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// A uniformly random word of length at most `max_len` in `generators^{±1}`.
pub fn random_word(rng: &mut impl Rng, generators: &[String], max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::new((0..len).map(|_| {
        let g = generators[rng.gen_range(0..generators.len())].as_str();
        (g, if rng.gen_bool(0.5) { 1 } else { -1 })
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub trials: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl CheckResult {
    fn new(name: &str, trials: usize) -> CheckResult {
        CheckResult {
            name: name.into(),
            passed: true,
            trials,
            counterexample: None,
            witness: None,
            warnings: Vec::new(),
        }
    }

    fn fail(&mut self, why: impl Into<String>) {
        self.passed = false;
        if self.counterexample.is_none() {
            self.counterexample = Some(why.into());
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub family: String,
    pub seed: u64,
    pub trials: usize,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

pub fn check_relations(desc: &GroupDescriptor) -> Result<CheckResult, VerifyError> {
    let model = Model::new(desc)?;
    let rels = model.relations();
    let mut out = CheckResult::new("relations", rels.len());
    for r in rels {
        if !model.is_identity(&model.of_word(&r.relator())?) {
            out.fail(format!("relator `{}` is not the identity", r.label));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DepthOutcome {
    pub depth: u32,
    pub holds: bool,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Nested commutators `[[w1, w2], [w3, w4]]…` of the given depth; depth 0 is
/// a single word.
fn nested(words: &[Word]) -> Word {
    if words.len() == 1 {
        return words[0].clone();
    }
    let (a, b) = words.split_at(words.len() / 2);
    Word::commutator(&nested(a), &nested(b))
}

fn nested_value(model: &Model, elems: &[crate::families::Element]) -> crate::families::Element {
    if elems.len() == 1 {
        return elems[0].clone();
    }
    let (a, b) = elems.split_at(elems.len() / 2);
    model.commutator(&nested_value(model, a), &nested_value(model, b))
}

/// True iff every sampled depth-`depth` commutator is trivial. Generator
/// tuples are tried first so witnesses are short.
pub fn commutator_depth_test(
    desc: &GroupDescriptor,
    depth: u32,
    cfg: &TrialConfig,
) -> Result<DepthOutcome, VerifyError> {
    cfg.validate()?;
    let model = Model::new(desc)?;
    commutator_depth_model(&model, depth, cfg)
}

fn commutator_depth_model(model: &Model, depth: u32, cfg: &TrialConfig) -> Result<DepthOutcome, VerifyError> {
    let gens = model.generators();
    let arity = 1usize << depth;
    let mut tuples: Vec<Vec<Word>> = Vec::new();
    if depth <= 2 {
        let letters: Vec<Word> = gens.iter().map(|g| Word::generator(g)).collect();
        let mut idx = vec![0usize; arity];
        loop {
            tuples.push(idx.iter().map(|&i| letters[i].clone()).collect());
            let mut k = 0;
            while k < arity {
                idx[k] += 1;
                if idx[k] < letters.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == arity {
                break;
            }
        }
    }
    let mut rng = cfg.rng(0x00de_0000 + depth as u64);
    let base_len = (cfg.max_word_length >> depth).max(2);
    for _ in 0..cfg.trials {
        tuples.push((0..arity).map(|_| random_word(&mut rng, &gens, base_len)).collect());
    }
    let samples = tuples.len();
    for t in tuples {
        let elems: Vec<_> = t.iter().map(|w| model.of_word(w)).collect::<Result<_, _>>()?;
        if !model.is_identity(&nested_value(model, &elems)) {
            return Ok(DepthOutcome {
                depth,
                holds: false,
                samples,
                witness: Some(nested(&t).to_string()),
            });
        }
    }
    Ok(DepthOutcome {
        depth,
        holds: true,
        samples,
        witness: None,
    })
}

/// Certifies the classifier's radical and quotient claims for `desc`.
pub fn radical_certificate(desc: &GroupDescriptor, cfg: &TrialConfig) -> Result<CheckResult, VerifyError> {
    let report = classify(desc)?;
    radical_certificate_with(desc, &report.radical, report.quotient.as_ref(), cfg)
}

/// Certifies an explicit claim; used for negative controls.
pub fn radical_certificate_with(
    desc: &GroupDescriptor,
    info: &RadicalInfo,
    quotient: Option<&QuotientType>,
    cfg: &TrialConfig,
) -> Result<CheckResult, VerifyError> {
    cfg.validate()?;
    let model = Model::new(desc)?;
    let claim = claim_for(&model, info);
    let mut rng = cfg.rng(0x0ad1_ca1);
    let (failures, witness) = certify(&model, &claim, quotient, cfg, &mut rng)?;
    let mut out = CheckResult::new("radical_certificate", cfg.trials.min(200));
    out.witness = witness;
    if let Some(f) = failures.into_iter().next() {
        out.fail(f);
    }
    Ok(out)
}

/// Equality of `w1` and `w2` in the faithful representation.
pub fn oracle_word_eq(
    desc: &GroupDescriptor,
    w1: &Word,
    w2: &Word,
    cfg: &TrialConfig,
) -> Result<bool, OracleError> {
    let model = Model::new(desc)?;
    let oracle = Oracle::new(&model, oracle_bound(cfg));
    oracle.equal(w1, w2)
}

fn oracle_bound(cfg: &TrialConfig) -> u64 {
    cfg.max_word_length as u64 * 16
}

fn insert_at(w: &Word, pos: usize, piece: &Word) -> Word {
    let letters: Vec<(&str, i64)> = w.letters().collect();
    let pos = pos.min(letters.len());
    Word::new(letters[..pos].iter().copied())
        .mul(piece)
        .mul(&Word::new(letters[pos..].iter().copied()))
}

/// Random pairs whose normal-form verdict must match the oracle's. Half the
/// pairs differ by an inserted conjugate of a relator.
pub fn oracle_agreement(desc: &GroupDescriptor, pairs: usize, cfg: &TrialConfig) -> Result<CheckResult, VerifyError> {
    cfg.validate()?;
    let model = Model::new(desc)?;
    let oracle = Oracle::new(&model, oracle_bound(cfg));
    let gens = model.generators();
    let relators: Vec<Word> = model
        .relations()
        .iter()
        .map(|r| r.relator())
        .filter(|r| r.len() as usize <= cfg.max_word_length * 4)
        .collect();
    let mut rng = cfg.rng(0x0e0a_c1e);
    let mut out = CheckResult::new("oracle_agreement", pairs);
    let (mut equal, mut skipped) = (0usize, 0usize);
    for k in 0..pairs {
        let w1 = random_word(&mut rng, &gens, cfg.max_word_length);
        let w2 = if k % 2 == 0 && !relators.is_empty() {
            let r = &relators[rng.gen_range(0..relators.len())];
            let c = random_word(&mut rng, &gens, 3);
            let r = if rng.gen_bool(0.5) { r.clone() } else { r.inverse() };
            insert_at(&w1, rng.gen_range(0..=w1.len() as usize), &r.conjugate_by(&c))
        } else if k % 4 == 1 {
            // a near miss: one letter changed
            let mut letters: Vec<(String, i64)> = w1.letters().map(|(g, e)| (g.to_string(), e)).collect();
            if let Some(i) = (!letters.is_empty()).then(|| rng.gen_range(0..letters.len())) {
                letters[i] = (gens[rng.gen_range(0..gens.len())].clone(), if rng.gen_bool(0.5) { 1 } else { -1 });
            }
            Word::new(letters)
        } else {
            random_word(&mut rng, &gens, cfg.max_word_length)
        };
        let nf = model.of_word(&w1)? == model.of_word(&w2)?;
        match oracle.equal(&w1, &w2) {
            Ok(o) if o == nf => equal += usize::from(nf),
            Ok(o) => {
                out.fail(format!("`{w1}` vs `{w2}`: normal form says {nf}, oracle says {o}"));
            }
            Err(OracleError::ResourceBound(_)) => skipped += 1,
            Err(OracleError::Family(e)) => return Err(e.into()),
        }
    }
    out.witness = Some(format!("{equal} equal pairs"));
    if skipped > 0 {
        out.warnings.push(format!("{skipped} pairs exceeded the oracle's resource bound"));
    }
    Ok(out)
}

/// Scans `|i|, |j| ≤ window` in order `(|i| + |j|, i, j)` for `r^i s^j`
/// integral with every prime of `r, s` dividing it.
pub fn fp_cone_bruteforce(r: &Rational, s: &Rational, window: i64) -> Result<Option<(i64, i64)>, ArithError> {
    let mut primes = Vec::new();
    for x in [r.numer(), r.denom(), s.numer(), s.denom()] {
        primes.extend(prime_support(x)?);
    }
    primes.sort_unstable();
    primes.dedup();
    let mut points: Vec<(i64, i64)> = (-window..=window)
        .flat_map(|i| (-window..=window).map(move |j| (i, j)))
        .filter(|&p| p != (0, 0))
        .collect();
    points.sort_by_key(|&(i, j)| (i.abs() + j.abs(), i, j));
    for (i, j) in points {
        let rho = r.pow(i) * s.pow(j);
        if rho.is_integer() && primes.iter().all(|&p| rho.valuation(p).unwrap_or(0) >= 1) {
            return Ok(Some((i, j)));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("index exceeds the enumeration bound {bound}²")]
pub struct IndexOverflow {
    pub bound: u64,
}

/// Membership in `φ(Kb)` by solving `(x^e y^f)^a y^{db} = g` directly.
fn in_image_naive(phi: &KbEndo, g: &KbElem) -> bool {
    if g.a % phi.e as i128 != 0 {
        return false;
    }
    let a = g.a / phi.e as i128;
    let step = KbElem::new(phi.e as i128, phi.f as i128);
    let step = if a < 0 { step.inv() } else { step };
    let mut h = KbElem::IDENTITY;
    for _ in 0..a.unsigned_abs() {
        h = h.mul(&step);
    }
    let rest = h.inv().mul(g);
    rest.a == 0 && rest.b % phi.d as i128 == 0
}

/// `[Kb : φ(Kb)]` by enumerating cosets of `x^a y^b`, `0 ≤ a, b < bound`,
/// and checking closure under left multiplication by `x^{±1}, y^{±1}`.
pub fn endo_index(phi: &KbEndo, bound: u64) -> Result<u64, IndexOverflow> {
    let same = |g: &KbElem, h: &KbElem| in_image_naive(phi, &g.inv().mul(h));
    let mut reps: Vec<KbElem> = Vec::new();
    for a in 0..bound as i128 {
        for b in 0..bound as i128 {
            let g = KbElem::new(a, b);
            if !reps.iter().any(|r| same(r, &g)) {
                reps.push(g);
            }
        }
    }
    let moves = [KbElem::new(1, 0), KbElem::new(-1, 0), KbElem::new(0, 1), KbElem::new(0, -1)];
    for r in &reps {
        for s in &moves {
            let g = s.mul(r);
            if !reps.iter().any(|x| same(x, &g)) {
                return Err(IndexOverflow { bound });
            }
        }
    }
    Ok(reps.len() as u64)
}

/// Runs every applicable check for `desc`.
pub fn verify(desc: &GroupDescriptor, cfg: &TrialConfig) -> Result<VerifyReport, VerifyError> {
    cfg.validate()?;
    let model = Model::new(desc)?;
    let report = classify(desc)?;
    let mut checks = vec![check_relations(desc)?];

    let dl = report.derived_length;
    let mut depth = CheckResult::new("derived_length", cfg.trials);
    let upper = commutator_depth_model(&model, dl, cfg)?;
    if !upper.holds {
        depth.fail(format!("depth {dl} commutator {} is nontrivial", upper.witness.unwrap_or_default()));
    }
    if dl > 0 {
        let lower = commutator_depth_model(&model, dl - 1, cfg)?;
        match lower.witness {
            Some(w) if !lower.holds => depth.witness = Some(w),
            _ => depth.fail(format!("no nontrivial depth {} commutator found", dl - 1)),
        }
    }
    checks.push(depth);

    checks.push(radical_certificate_with(desc, &report.radical, report.quotient.as_ref(), cfg)?);
    checks.push(oracle_agreement(desc, cfg.trials, cfg)?);

    match &model {
        Model::Meta(g) => {
            let (r, s) = (g.r(), g.s());
            if mult_rank(&[r.clone(), s.clone()])?.rank == 2 {
                let mut cone = CheckResult::new("fp_cone", 1);
                let window = cfg.parameter_bound as i64;
                let brute = fp_cone_bruteforce(r, s, window)?;
                let decided = fp_cone_point(r, s)?;
                match (brute, decided) {
                    (Some(_), None) => cone.fail(format!("brute force finds a point with window {window}")),
                    (None, Some(p)) => cone.warnings.push(format!("point {p:?} lies outside window {window}")),
                    _ => {}
                }
                cone.witness = brute.map(|p| format!("{p:?}"));
                checks.push(cone);
            }
        }
        Model::HnnKb(g) => {
            let phi = g.endo();
            let mut idx = CheckResult::new("endo_index", 1);
            let bound = (phi.index() + 1).max(cfg.parameter_bound);
            match endo_index(phi, bound) {
                Ok(k) if k == phi.index() => idx.witness = Some(format!("index {k}")),
                Ok(k) => idx.fail(format!("enumerated index {k}, expected {}", phi.index())),
                Err(e) => idx.warnings.push(e.to_string()),
            }
            checks.push(idx);
        }
        _ => {}
    }

    Ok(VerifyReport {
        family: desc.family_name().into(),
        seed: cfg.seed,
        trials: cfg.trials,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}
