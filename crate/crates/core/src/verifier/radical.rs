//! Certificates for the claimed radical and the quotient by it.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::arith::Rational;
use crate::classifier::{QuotientType, RadicalInfo};
use crate::families::{Element, FamilyError, GroupModel, Model};
use crate::presentation::Word;

use super::{random_word, TrialConfig};

/// A claimed radical: generating words and an independent membership test.
pub struct RadicalClaim {
    pub generators: Vec<Word>,
    pub abelian: bool,
    /// The claimed Hirsch length.
    pub hirsch: u32,
    member: Box<dyn Fn(&Element) -> bool>,
}

impl RadicalClaim {
    pub fn contains(&self, g: &Element) -> bool {
        (self.member)(g)
    }
}

fn ratio_character(ratios: Vec<Rational>, bound: i64) -> Vec<Vec<i64>> {
    let k = ratios.len();
    let mut out: Vec<Vec<i64>> = Vec::new();
    let mut vectors: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..k {
        vectors = vectors
            .into_iter()
            .flat_map(|v| {
                (-bound..=bound).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    vectors.sort_by_key(|v| (v.iter().map(|x| x.abs()).sum::<i64>(), v.clone()));
    for v in vectors {
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        let value = ratios
            .iter()
            .zip(&v)
            .fold(Rational::one(), |acc, (r, &x)| acc * r.pow(x));
        if !value.is_one() {
            continue;
        }
        let independent = match out.len() {
            0 => true,
            1 if k == 2 => out[0][0] * v[1] - out[0][1] * v[0] != 0,
            _ => false,
        };
        if independent {
            out.push(v);
        }
    }
    out
}

fn first_unipotent_power(model: &crate::families::LatticeByZ, bound: i64) -> Option<i64> {
    let m = model.matrix();
    (1..=bound).find(|&k| {
        m.pow(k)
            .map(|p| p.trace() == Rational::from_int(2) && p.det().is_one())
            .unwrap_or(false)
    })
}

/// The radical claimed by `info`, made concrete for `model`.
pub fn claim_for(model: &Model, info: &RadicalInfo) -> RadicalClaim {
    let w = Word::generator;
    let pw = Word::power_of;
    let abelian = info.is_abelian;
    let hirsch = info.hirsch;
    match model {
        Model::RankOne(g) => RadicalClaim {
            generators: g.generators().iter().map(|s| w(s)).collect(),
            abelian,
            hirsch,
            member: Box::new(|_| true),
        },
        Model::BSbar(g) => {
            let ratio = g.ratio().clone();
            let order = if info.hirsch < 2 {
                0
            } else if ratio.is_one() {
                1
            } else if (-&ratio).is_one() {
                2
            } else {
                0
            };
            let mut generators = vec![w("a")];
            if order > 0 {
                generators.push(pw("t", order));
            }
            RadicalClaim {
                generators,
                abelian,
                hirsch,
                member: Box::new(move |e| match e {
                    Element::BSbar(x) if order == 0 => x.k == 0,
                    Element::BSbar(x) => x.k % order == 0,
                    _ => false,
                }),
            }
        }
        Model::Meta(g) => {
            let (r, s) = (g.r().clone(), g.s().clone());
            let mut generators = vec![w("a")];
            if info.hirsch >= 2 {
                for v in ratio_character(vec![r.clone(), s.clone()], 12) {
                    generators.push(Word::new([("t", v[0]), ("u", v[1])]));
                }
            }
            let whole = info.hirsch >= 2;
            RadicalClaim {
                generators,
                abelian,
                hirsch,
                member: Box::new(move |e| match e {
                    Element::Meta(x) if whole => (r.pow(x.i) * s.pow(x.j)).is_one(),
                    Element::Meta(x) => x.i == 0 && x.j == 0,
                    _ => false,
                }),
            }
        }
        Model::Lattice(g) => {
            let period = if info.hirsch >= 3 { first_unipotent_power(g, 12) } else { None };
            let mut generators = vec![w("x"), w("y")];
            if let Some(k) = period {
                generators.push(pw("t", k));
            }
            RadicalClaim {
                generators,
                abelian,
                hirsch,
                member: Box::new(move |e| match e {
                    Element::Lattice(x) => match period {
                        Some(k) => x.k % k == 0,
                        None => x.k == 0,
                    },
                    _ => false,
                }),
            }
        }
        Model::HnnKb(g) => {
            let phi = *g.endo();
            let period = if info.hirsch >= 3 {
                (1..=2i64).find(|&k| phi.e.pow(k as u32) == 1 && phi.d.pow(k as u32) == 1)
            } else {
                None
            };
            let mut generators = vec![pw("x", 2), w("y")];
            if let Some(k) = period {
                generators.push(pw("t", k));
            }
            RadicalClaim {
                generators,
                abelian,
                hirsch,
                member: Box::new(move |e| match e {
                    Element::HnnKb(h) => {
                        let height = h.j as i64 - h.i as i64;
                        let even = h.g.a.rem_euclid(2) == 0;
                        match period {
                            Some(k) => even && height % k == 0,
                            None => even && height == 0,
                        }
                    }
                    _ => false,
                }),
            }
        }
        Model::Affine(g) => RadicalClaim {
            generators: g.radical_words().to_vec(),
            abelian,
            hirsch,
            member: Box::new(|e| matches!(e, Element::Affine(m) if m.is_translation())),
        },
    }
}

fn candidates(model: &Model) -> Vec<Word> {
    let gens = model.generators();
    let mut out = Vec::new();
    for g in &gens {
        for e in [1, -1] {
            out.push(Word::power_of(g, e));
        }
    }
    for (i, g) in gens.iter().enumerate() {
        for h in &gens[i + 1..] {
            for (a, b) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                out.push(Word::new([(g.as_str(), a), (h.as_str(), b)]));
            }
        }
    }
    out
}

struct Ctx<'a> {
    model: &'a Model,
    claim: &'a RadicalClaim,
}

impl Ctx<'_> {
    fn eval(&self, w: &Word) -> Result<Element, FamilyError> {
        self.model.of_word(w)
    }

    fn inside(&self, w: &Word) -> Result<bool, FamilyError> {
        Ok(self.claim.contains(&self.eval(w)?))
    }

    fn powers_outside(&self, w: &Word, extra: Option<&Word>, bound: i64) -> Result<bool, FamilyError> {
        for k in 1..=bound {
            let mut p = w.pow(k);
            if let Some(e) = extra {
                p = p.mul(e);
            }
            if self.inside(&p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

const QUOTIENT_BOUND: i64 = 50;

fn quotient_witness(ctx: &Ctx, quotient: &QuotientType) -> Result<Option<String>, FamilyError> {
    let cands = candidates(ctx.model);
    let gens: Vec<Word> = ctx.model.generators().iter().map(|g| Word::generator(g)).collect();
    match quotient {
        QuotientType::Dinfty => {
            for (i, g) in cands.iter().enumerate() {
                for h in &cands[i + 1..] {
                    let ok = !ctx.inside(g)?
                        && !ctx.inside(h)?
                        && ctx.inside(&g.pow(2))?
                        && ctx.inside(&h.pow(2))?
                        && ctx.powers_outside(&g.mul(h), None, QUOTIENT_BOUND)?;
                    if ok {
                        return Ok(Some(format!(
                            "{g}, {h}: squares in the radical, ({g} {h})^k outside for k ≤ {QUOTIENT_BOUND}"
                        )));
                    }
                }
            }
            Ok(None)
        }
        QuotientType::Z => {
            for g in &cands {
                if !ctx.powers_outside(g, None, QUOTIENT_BOUND)? {
                    continue;
                }
                let mut all = true;
                for s in &gens {
                    let mut found = false;
                    for k in -QUOTIENT_BOUND..=QUOTIENT_BOUND {
                        if ctx.inside(&s.mul(&g.pow(-k)))? {
                            found = true;
                            break;
                        }
                    }
                    all &= found;
                }
                if all {
                    return Ok(Some(format!("generated by the image of {g}")));
                }
            }
            Ok(None)
        }
        QuotientType::Z2 => {
            let bound = 10;
            for (i, g) in cands.iter().enumerate() {
                for h in &cands[i + 1..] {
                    if !ctx.inside(&Word::commutator(g, h))? {
                        continue;
                    }
                    let mut free = true;
                    'grid: for a in -bound..=bound {
                        for b in -bound..=bound {
                            if (a, b) != (0, 0) && ctx.inside(&g.pow(a).mul(&h.pow(b)))? {
                                free = false;
                                break 'grid;
                            }
                        }
                    }
                    if !free {
                        continue;
                    }
                    let mut spans = true;
                    for s in &gens {
                        let mut found = false;
                        'span: for a in -bound..=bound {
                            for b in -bound..=bound {
                                if ctx.inside(&s.mul(&g.pow(a).mul(&h.pow(b)).inverse()))? {
                                    found = true;
                                    break 'span;
                                }
                            }
                        }
                        spans &= found;
                    }
                    if spans {
                        return Ok(Some(format!("free abelian on the images of {g}, {h}")));
                    }
                }
            }
            Ok(None)
        }
        QuotientType::ZplusZ2 => {
            for g in &cands {
                for h in &cands {
                    let ok = !ctx.inside(h)?
                        && ctx.inside(&h.pow(2))?
                        && ctx.inside(&Word::commutator(g, h))?
                        && ctx.powers_outside(g, None, QUOTIENT_BOUND)?
                        && ctx.powers_outside(g, Some(h), QUOTIENT_BOUND)?;
                    if ok {
                        return Ok(Some(format!("{g} of infinite order, {h} of order 2, commuting")));
                    }
                }
            }
            Ok(None)
        }
        QuotientType::VirtuallyTrivial => {
            for s in &gens {
                let mut found = false;
                for k in 1..=12 {
                    if ctx.inside(&s.pow(k))? {
                        found = true;
                        break;
                    }
                }
                if !found {
                    return Ok(None);
                }
            }
            Ok(Some("every generator has a power in the radical".into()))
        }
    }
}

fn random_radical_element(ctx: &Ctx, rng: &mut ChaCha8Rng, cfg: &TrialConfig) -> Word {
    let gens = ctx.model.generators();
    let factors = rng.gen_range(1..=3);
    let mut w = Word::identity();
    for _ in 0..factors {
        let r = &ctx.claim.generators[rng.gen_range(0..ctx.claim.generators.len())];
        let r = if rng.gen_bool(0.5) { r.clone() } else { r.inverse() };
        let c = random_word(rng, &gens, cfg.max_word_length.min(4));
        w = w.mul(&r.conjugate_by(&c));
    }
    w
}

/// Checks the claim; returns the list of failures (empty on success) and
/// the quotient witness when one was requested and found.
/// Hirsch length of the claimed radical where it is directly computable: the
/// rank of the translation span for affine models.
fn observed_hirsch(ctx: &Ctx) -> Result<Option<u32>, FamilyError> {
    if !matches!(ctx.model, Model::Affine(_)) {
        return Ok(None);
    }
    let mut vs = Vec::new();
    for w in &ctx.claim.generators {
        if let Element::Affine(m) = ctx.eval(w)? {
            vs.push(m.translation);
        }
    }
    let nonzero = vs.iter().any(|v| !v[0].is_zero() || !v[1].is_zero());
    let independent = vs.iter().enumerate().any(|(i, u)| {
        vs[i + 1..]
            .iter()
            .any(|v| !(u[0].clone() * v[1].clone() - u[1].clone() * v[0].clone()).is_zero())
    });
    Ok(Some(if independent { 2 } else { u32::from(nonzero) }))
}

pub fn certify(
    model: &Model,
    claim: &RadicalClaim,
    quotient: Option<&QuotientType>,
    cfg: &TrialConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<String>, Option<String>), FamilyError> {
    let ctx = Ctx { model, claim };
    let mut failures = Vec::new();
    let gens = model.generators();
    if claim.generators.is_empty() {
        failures.push("no radical generators".into());
        return Ok((failures, None));
    }
    for r in &claim.generators {
        if !ctx.inside(r)? {
            failures.push(format!("claimed generator {r} fails the membership test"));
        }
        for s in &gens {
            for e in [1, -1] {
                let c = r.conjugate_by(&Word::power_of(s, e));
                if !ctx.inside(&c)? {
                    failures.push(format!("conjugate {c} leaves the radical"));
                }
            }
        }
    }
    if let Some(h) = observed_hirsch(&ctx)? {
        if h != claim.hirsch {
            failures.push(format!("claimed Hirsch length {} but the radical has Hirsch length {h}", claim.hirsch));
        }
    }
    let samples = cfg.trials.min(200);
    for _ in 0..samples {
        let a = random_radical_element(&ctx, rng, cfg);
        let b = random_radical_element(&ctx, rng, cfg);
        if !ctx.inside(&a)? {
            failures.push(format!("sampled radical element {a} fails the membership test"));
            break;
        }
        if claim.abelian && !model.is_identity(&model.commutator(&ctx.eval(&a)?, &ctx.eval(&b)?)) {
            failures.push(format!("radical elements {a} and {b} do not commute"));
            break;
        }
    }
    let mut outsiders: Vec<Word> = gens.iter().map(|g| Word::generator(g)).collect();
    for _ in 0..samples {
        outsiders.push(random_word(rng, &gens, cfg.max_word_length.min(8)));
    }
    let radical: Vec<Element> = claim
        .generators
        .iter()
        .map(|r| ctx.eval(r))
        .collect::<Result<_, _>>()?;
    for g in outsiders {
        let ge = ctx.eval(&g)?;
        if claim.contains(&ge) {
            continue;
        }
        let centralizes = radical.iter().all(|r| model.is_identity(&model.commutator(&ge, r)));
        if centralizes {
            failures.push(format!("{g} lies outside the claimed radical but centralizes it"));
            break;
        }
    }
    let mut witness = None;
    if let Some(q) = quotient {
        witness = quotient_witness(&ctx, q)?;
        if witness.is_none() {
            failures.push(format!("no witness found for the quotient {q:?}"));
        }
    }
    Ok((failures, witness))
}
