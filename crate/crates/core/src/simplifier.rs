//! Reduction of admissible `a, t, u` presentations to the standard form
//! `< t, u, α | t α^m t^-1 = α^n, u α^p u^-1 = α^q, u t u^-1 t^-1 = α^c >`,
//! and normalization of the `(t, u)` basis.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arith::{mult_rank, Rational};
use crate::families::GroupDescriptor;
use crate::presentation::{Presentation, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplifyError {
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("presentation must have generators a, t, u exactly")]
    Generators,
    #[error("missing relator of the form {0}")]
    MissingRelator(&'static str),
    #[error("relator `{0}` does not have exponent sum 0 in both t and u")]
    Weight(String),
    #[error("relator `{relator}` is outside the supported fragment: {reason}")]
    OutOfFragment { relator: String, reason: String },
    #[error("extra relator `{relator}` has nonzero alpha-exponent {exponent}")]
    InconsistentExtra { relator: String, exponent: BigInt },
    #[error("BS({0},{1}) is not solvable: one of the exponents must be ±1")]
    Unsolvable(i64, i64),
    #[error("the ratios have multiplicative rank below 2")]
    Rank,
    #[error("no basis found with |N| ≤ {0}")]
    NotFound(i64),
}

/// `b_{i,j}^exponent` with `b_{i,j} = t^i u^j a u^-j t^-i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ConjugateAtom {
    pub i: i64,
    pub j: i64,
    pub exponent: i64,
}

impl ConjugateAtom {
    pub fn word(&self) -> Word {
        let conj = Word::new([("t", self.i), ("u", self.j)]);
        Word::power_of("a", self.exponent).conjugate_by(&conj)
    }
}

pub fn atoms_word(atoms: &[ConjugateAtom]) -> Word {
    atoms.iter().fold(Word::identity(), |w, a| w.mul(&a.word()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StandardForm {
    pub m: i64,
    pub n: i64,
    pub p: i64,
    pub q: i64,
    #[serde(serialize_with = "as_text")]
    pub c: BigInt,
}

fn as_text<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(n)
}

impl StandardForm {
    /// DSL text over `t, u, alpha`.
    pub fn dsl(&self) -> String {
        format!(
            "<t, u, alpha | t alpha^{} t^-1 = alpha^{}, u alpha^{} u^-1 = alpha^{}, u t u^-1 t^-1 = alpha^{}>",
            self.m, self.n, self.p, self.q, self.c
        )
    }

    /// The same group in the `MetabelianH31` family, with `α` renamed `a`;
    /// `u t u^-1 = t a^e` with `e = c·m/n` gives `[u, t] = a^c`.
    pub fn descriptor(&self) -> GroupDescriptor {
        GroupDescriptor::MetabelianH31 {
            m: self.m,
            n: self.n,
            p: self.p,
            q: self.q,
            e: Rational::from(self.c.clone()) * Rational::new(self.m, self.n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentLaw {
    pub n_scale: BigInt,
    pub window: u32,
    /// `e(i, j)` for `|i|, |j| ≤ window`.
    pub table: BTreeMap<(i64, i64), BigInt>,
}

impl ExponentLaw {
    pub fn e(&self, i: i64, j: i64) -> Option<&BigInt> {
        self.table.get(&(i, j))
    }
}

fn check_pairs(m: i64, n: i64, p: i64, q: i64) -> Result<(), SimplifyError> {
    if m == 0 || n == 0 || p == 0 || q == 0 {
        return Err(SimplifyError::Parameters("exponents must be nonzero".into()));
    }
    if m.gcd(&n) != 1 || p.gcd(&q) != 1 {
        return Err(SimplifyError::Parameters(format!(
            "need gcd(m,n) = gcd(p,q) = 1, got ({m}, {n}, {p}, {q})"
        )));
    }
    Ok(())
}

/// `N = (mnpq)^L` and `e(i,j) = N (n/m)^i (q/p)^j` on the window.
pub fn exponent_law(m: i64, n: i64, p: i64, q: i64, window: u32) -> Result<ExponentLaw, SimplifyError> {
    check_pairs(m, n, p, q)?;
    let base = BigInt::from(m) * n * p * q;
    let scale = base.pow(window);
    let r = Rational::new(n, m);
    let s = Rational::new(q, p);
    let w = window as i64;
    let mut table = BTreeMap::new();
    for i in -w..=w {
        for j in -w..=w {
            let x = Rational::from(scale.clone()) * r.pow(i) * s.pow(j);
            let x = x.to_integer().expect("e(i,j) is integral on the window");
            table.insert((i, j), x);
        }
    }
    Ok(ExponentLaw {
        n_scale: scale,
        window,
        table,
    })
}

/// Matches `t a^m t^-1 a^-n` (or its inverse) for the given conjugator.
fn bs_shape(w: &Word, conj: &str) -> Option<(i64, i64)> {
    let matches = |w: &Word| -> Option<(i64, i64)> {
        let s = w.syllables();
        if s.len() == 4
            && s[0].generator == conj
            && s[0].exponent == 1
            && s[1].generator == "a"
            && s[2].generator == conj
            && s[2].exponent == -1
            && s[3].generator == "a"
        {
            Some((s[1].exponent, -s[3].exponent))
        } else {
            None
        }
    };
    let (m, n) = matches(w).or_else(|| matches(&w.inverse()))?;
    Some(if m < 0 { (-m, -n) } else { (m, n) })
}

/// The image of `w` in the free group on `t, u`.
fn tu_image(w: &Word) -> Word {
    Word::new(
        w.syllables()
            .iter()
            .filter(|s| s.generator != "a")
            .map(|s| (s.generator.clone(), s.exponent)),
    )
}

/// Writes `w`, whose `t,u`-image is trivial, as a product of conjugate atoms.
fn decompose(w: &Word) -> Result<Vec<ConjugateAtom>, String> {
    let mut prefix = Word::identity();
    let mut out = Vec::new();
    for s in w.syllables() {
        if s.generator != "a" {
            prefix = prefix.mul(&Word::power_of(&s.generator, s.exponent));
            continue;
        }
        let syl = prefix.syllables();
        let (i, j) = match syl {
            [] => (0, 0),
            [x] if x.generator == "t" => (x.exponent, 0),
            [x] => (0, x.exponent),
            [x, y] if x.generator == "t" => (x.exponent, y.exponent),
            _ => {
                return Err(format!(
                    "conjugator `{prefix}` of an a-syllable is not of the form t^i u^j"
                ))
            }
        };
        out.push(ConjugateAtom {
            i,
            j,
            exponent: s.exponent,
        });
    }
    if !prefix.is_identity() {
        return Err("t,u-image is not trivial".into());
    }
    Ok(out)
}

fn alpha_exponent(atoms: &[ConjugateAtom], law: &ExponentLaw) -> BigInt {
    atoms
        .iter()
        .map(|a| law.e(a.i, a.j).expect("atom inside the window") * a.exponent)
        .sum()
}

pub fn standardize(pres: &Presentation) -> Result<StandardForm, SimplifyError> {
    let mut gens = pres.generators.clone();
    gens.sort();
    if gens != ["a", "t", "u"] {
        return Err(SimplifyError::Generators);
    }
    let mut bs_t = None;
    let mut bs_u = None;
    let mut commutator: Option<Vec<ConjugateAtom>> = None;
    let mut extras: Vec<(Word, Vec<ConjugateAtom>)> = Vec::new();
    let ut = Word::commutator(&Word::generator("u"), &Word::generator("t"));
    for r in &pres.relators {
        if bs_t.is_none() {
            if let Some(mn) = bs_shape(r, "t") {
                bs_t = Some(mn);
                continue;
            }
        }
        if bs_u.is_none() {
            if let Some(pq) = bs_shape(r, "u") {
                bs_u = Some(pq);
                continue;
            }
        }
        if r.exponent_sum("t") != 0 || r.exponent_sum("u") != 0 {
            return Err(SimplifyError::Weight(r.to_string()));
        }
        let fail = |reason: String| SimplifyError::OutOfFragment {
            relator: r.to_string(),
            reason,
        };
        let image = tu_image(r);
        if image.is_identity() {
            extras.push((r.clone(), decompose(r).map_err(fail)?));
        } else if commutator.is_none() && (image == ut || image == ut.inverse()) {
            let r = if image == ut { r.clone() } else { r.inverse() };
            // r = [u,t] C^-1 in the free group.
            let c = r.inverse().mul(&ut);
            commutator = Some(decompose(&c).map_err(fail)?);
        } else {
            return Err(fail("t,u-image is neither trivial nor [u,t]".into()));
        }
    }
    let (m, n) = bs_t.ok_or(SimplifyError::MissingRelator("t a^m t^-1 a^-n"))?;
    let (p, q) = bs_u.ok_or(SimplifyError::MissingRelator("u a^p u^-1 a^-q"))?;
    let commutator = commutator.ok_or(SimplifyError::MissingRelator("u t u^-1 t^-1 C^-1"))?;
    check_pairs(m, n, p, q)?;
    let window = commutator
        .iter()
        .chain(extras.iter().flat_map(|(_, a)| a.iter()))
        .map(|a| a.i.unsigned_abs().max(a.j.unsigned_abs()))
        .max()
        .unwrap_or(0);
    let window = u32::try_from(window).map_err(|_| SimplifyError::Parameters("window too large".into()))?;
    let law = exponent_law(m, n, p, q, window)?;
    for (w, atoms) in &extras {
        let x = alpha_exponent(atoms, &law);
        if !x.is_zero() {
            return Err(SimplifyError::InconsistentExtra {
                relator: w.to_string(),
                exponent: x,
            });
        }
    }
    if !(m == 1 || n.abs() == 1) {
        return Err(SimplifyError::Unsolvable(m, n));
    }
    if !(p == 1 || q.abs() == 1) {
        return Err(SimplifyError::Unsolvable(p, q));
    }
    Ok(StandardForm {
        m,
        n,
        p,
        q,
        c: alpha_exponent(&commutator, &law),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisChange {
    pub m: i64,
    pub n: i64,
    pub p: i64,
    pub q: i64,
    /// Rows give the new `t` and `u` as exponent vectors in the old `(t, u)`.
    pub change: [[i64; 2]; 2],
}

fn ratio_parts(x: &Rational) -> Option<(i64, i64)> {
    Some((x.denom().to_i64()?, x.numer().to_i64()?))
}

fn has_new_prime(mn: i64, pq: i64) -> bool {
    let mut x = mn.unsigned_abs();
    let pq = pq.unsigned_abs();
    let mut f = 2u64;
    while f * f <= x {
        if x % f == 0 {
            if pq % f != 0 {
                return true;
            }
            while x % f == 0 {
                x /= f;
            }
        }
        f += 1;
    }
    x > 1 && pq % x != 0
}

const BASIS_SCAN: i64 = 64;

/// Finds `t' = t u^{±N}` (or with `t` and `u` swapped) such that `p' | m'`,
/// `q' | n'` and `m'n'` has a prime not dividing `p'q'`.
pub fn normalize_basis(m: i64, n: i64, p: i64, q: i64) -> Result<BasisChange, SimplifyError> {
    check_pairs(m, n, p, q)?;
    if m < 0 || p < 0 {
        return Err(SimplifyError::Parameters("m and p must be positive".into()));
    }
    let r = Rational::new(n, m);
    let s = Rational::new(q, p);
    let rank = mult_rank(&[r.clone(), s.clone()])
        .map_err(|e| SimplifyError::Parameters(e.to_string()))?;
    if rank.rank < 2 {
        return Err(SimplifyError::Rank);
    }
    let ok = |t_ratio: &Rational, u_ratio: &Rational| -> Option<(i64, i64, i64, i64)> {
        let (m2, n2) = ratio_parts(t_ratio)?;
        let (p2, q2) = ratio_parts(u_ratio)?;
        let good = m2 % p2 == 0 && n2 % q2 == 0 && has_new_prime(m2 * n2, p2 * q2);
        good.then_some((m2, n2, p2, q2))
    };
    for big_n in 0..=BASIS_SCAN {
        for sign in [1i64, -1] {
            let k = sign * big_n;
            if let Some((m2, n2, p2, q2)) = ok(&(&r * &s.pow(k)), &s) {
                return Ok(BasisChange { m: m2, n: n2, p: p2, q: q2, change: [[1, k], [0, 1]] });
            }
            if let Some((m2, n2, p2, q2)) = ok(&(&s * &r.pow(k)), &r) {
                return Ok(BasisChange { m: m2, n: n2, p: p2, q: q2, change: [[k, 1], [1, 0]] });
            }
            if big_n == 0 {
                break;
            }
        }
    }
    Err(SimplifyError::NotFound(BASIS_SCAN))
}

/// `gcd` of the window entries; `α^c` is an atom product on the window iff it divides `c`.
pub fn window_gcd(law: &ExponentLaw) -> BigInt {
    law.table
        .values()
        .fold(BigInt::zero(), |g, x| g.gcd(x))
        .abs()
        .max(BigInt::one())
}

/// Writes `α^c` as a product of atoms on the window, if `window_gcd | c`.
pub fn express(c: &BigInt, law: &ExponentLaw) -> Option<Vec<ConjugateAtom>> {
    let mut g = BigInt::zero();
    let mut combo: Vec<((i64, i64), BigInt)> = Vec::new();
    let mut entries: Vec<(&(i64, i64), &BigInt)> = law.table.iter().collect();
    entries.sort_by_key(|(ij, e)| (e.abs(), **ij));
    for (&(i, j), e) in entries {
        if !g.is_zero() && (c % &g).is_zero() {
            break;
        }
        if !g.is_zero() && (e % &g).is_zero() {
            continue;
        }
        let ext = g.extended_gcd(e);
        for (_, k) in combo.iter_mut() {
            *k *= &ext.x;
        }
        combo.push(((i, j), ext.y));
        g = ext.gcd;
    }
    if g.is_zero() || !(c % &g).is_zero() {
        return None;
    }
    let scale = c / &g;
    combo
        .into_iter()
        .filter(|(_, k)| !k.is_zero())
        .map(|((i, j), k)| (k * &scale).to_i64().map(|exponent| ConjugateAtom { i, j, exponent }))
        .collect()
}

/// The `a, t, u` presentation with `a = α^N` on the given window, whose
/// commutator relator is an atom product and `standardize` recovers `sf`.
pub fn expand(sf: &StandardForm, window: u32) -> Result<Presentation, SimplifyError> {
    let law = exponent_law(sf.m, sf.n, sf.p, sf.q, window)?;
    let atoms = express(&sf.c, &law).ok_or_else(|| {
        SimplifyError::Parameters(format!("c = {} is not a multiple of {} on window {window}", sf.c, window_gcd(&law)))
    })?;
    let t = Word::generator("t");
    let u = Word::generator("u");
    let relators = vec![
        Word::power_of("a", sf.m).conjugate_by(&t).mul(&Word::power_of("a", -sf.n)),
        Word::power_of("a", sf.p).conjugate_by(&u).mul(&Word::power_of("a", -sf.q)),
        Word::commutator(&u, &t).mul(&atoms_word(&atoms).inverse()),
    ];
    Presentation::new(vec!["a".into(), "t".into(), "u".into()], relators)
        .map_err(|e| SimplifyError::Parameters(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::classify;
    use crate::families::{GroupModel, MetaH31};
    use crate::presentation::{parse_presentation, substitute};
    use proptest::prelude::*;

    fn atom(i: i64, j: i64, exponent: i64) -> ConjugateAtom {
        ConjugateAtom { i, j, exponent }
    }

    fn expand_atoms(m: i64, n: i64, p: i64, q: i64, c: &[ConjugateAtom], extras: &[Vec<ConjugateAtom>]) -> Presentation {
        let t = Word::generator("t");
        let u = Word::generator("u");
        let mut rels = vec![
            Word::power_of("a", m).conjugate_by(&t).mul(&Word::power_of("a", -n)),
            Word::power_of("a", p).conjugate_by(&u).mul(&Word::power_of("a", -q)),
            Word::commutator(&u, &t).mul(&atoms_word(c).inverse()),
        ];
        rels.extend(extras.iter().map(|e| atoms_word(e)));
        Presentation::new(vec!["a".into(), "t".into(), "u".into()], rels).unwrap()
    }

    #[test]
    fn exponent_law_examples() {
        let law = exponent_law(1, 2, 1, 3, 1).unwrap();
        assert_eq!(law.n_scale, BigInt::from(6));
        assert_eq!(law.e(1, 0), Some(&BigInt::from(12)));
        assert_eq!(law.e(-1, -1), Some(&BigInt::from(1)));
        let law = exponent_law(1, 2, 1, 3, 0).unwrap();
        assert_eq!(law.n_scale, BigInt::from(1));
        assert_eq!(law.e(0, 0), Some(&BigInt::from(1)));
        assert!(exponent_law(2, 4, 1, 3, 1).is_err());
        assert!(exponent_law(0, 1, 1, 3, 1).is_err());
    }

    #[test]
    fn exponent_law_recurrence() {
        let law = exponent_law(2, 3, 5, -7, 2).unwrap();
        assert_eq!(law.e(0, 0), Some(&law.n_scale));
        for i in -2..2 {
            for j in -2..=2 {
                let a = Rational::from(law.e(i + 1, j).unwrap().clone());
                let b = Rational::from(law.e(i, j).unwrap().clone());
                assert_eq!(a / b, Rational::new(3, 2));
            }
        }
    }

    #[test]
    fn round_trip_of_standard_form() {
        let p = expand_atoms(1, 2, 1, 3, &[atom(0, 0, 1)], &[]);
        let sf = standardize(&p).unwrap();
        assert_eq!(sf, StandardForm { m: 1, n: 2, p: 1, q: 3, c: BigInt::from(1) });
    }

    #[test]
    fn cancelling_commutator() {
        let p = expand_atoms(1, 2, 1, 3, &[atom(1, 0, 1), atom(0, 0, -2)], &[]);
        assert_eq!(standardize(&p).unwrap().c, BigInt::from(0));
    }

    #[test]
    fn redundant_extra_relator_is_deleted() {
        let p = expand_atoms(1, 2, 1, 3, &[atom(0, 0, 1)], &[vec![atom(1, 1, 1), atom(0, 0, -6)]]);
        let sf = standardize(&p).unwrap();
        // window 1: N = 6 and c = e(0,0) = 6
        assert_eq!(sf.c, BigInt::from(6));
        let bad = expand_atoms(1, 2, 1, 3, &[atom(0, 0, 1)], &[vec![atom(1, 1, 1)]]);
        assert!(matches!(standardize(&bad), Err(SimplifyError::InconsistentExtra { .. })));
    }

    #[test]
    fn dsl_input_and_errors() {
        let p = parse_presentation("<a, t, u | t a t^-1 = a^2, u a u^-1 = a^3, u t u^-1 = t a>").unwrap();
        let sf = standardize(&p).unwrap();
        // C = t a t^-1 = b_{1,0}, window 1: e(1,0) = 12
        assert_eq!(sf.c, BigInt::from(12));
        assert!(parse_presentation(&sf.dsl()).is_ok());
        let p = parse_presentation("<a, t, u | t a t^-1 = a^2, u a u^-1 = a^3, u t = t a>").unwrap();
        assert!(matches!(standardize(&p), Err(SimplifyError::Weight(_))));
        let p = parse_presentation("<a, t, u | t a t^-1 = a^2, u a u^-1 = a^3, u t u^-1 t^-1 = u t a t^-1 u^-1 t a t^-1>").unwrap();
        assert!(matches!(standardize(&p), Err(SimplifyError::OutOfFragment { .. })));
        let p = parse_presentation("<a, t, u | t a^2 t^-1 = a^3, u a u^-1 = a^5, [u, t]>").unwrap();
        assert_eq!(standardize(&p), Err(SimplifyError::Unsolvable(2, 3)));
        let p = parse_presentation("<a, t, u | t a t^-1 = a^2, [u, t]>").unwrap();
        assert!(matches!(standardize(&p), Err(SimplifyError::MissingRelator(_))));
    }

    #[test]
    fn expand_round_trip() {
        for (c, window) in [(0, 0), (-4, 0), (3, 1), (1, 2)] {
            let sf = StandardForm { m: 1, n: 2, p: 5, q: 1, c: BigInt::from(c) };
            let p = expand(&sf, window).unwrap();
            assert_eq!(standardize(&p).unwrap(), sf);
        }
        // corners (mp)^2L, (mq)^2L, (np)^2L, (nq)^2L are coprime
        for (m, n, p, q) in [(1, 2, 1, 2), (2, 1, 1, 2), (1, 6, 5, 1)] {
            assert_eq!(window_gcd(&exponent_law(m, n, p, q, 2).unwrap()), BigInt::one());
        }
    }

    #[test]
    fn basis_normalization() {
        let b = normalize_basis(2, 3, 4, 5).unwrap();
        assert_eq!((b.m, b.n, b.p, b.q), (8, 15, 4, 5));
        assert_eq!(b.change, [[1, 1], [0, 1]]);
        let b = normalize_basis(1, 2, 1, 3).unwrap();
        assert_eq!((b.m, b.n, b.p, b.q), (1, 6, 1, 3));
        let b = normalize_basis(1, 6, 1, 3).unwrap();
        assert_eq!(b.change, [[1, 0], [0, 1]]);
        let b = normalize_basis(2, 1, 1, 3).unwrap();
        assert!(b.m % b.p == 0 && b.n % b.q == 0 && has_new_prime(b.m * b.n, b.p * b.q));
        assert_eq!(normalize_basis(1, 2, 1, -2), Err(SimplifyError::Rank));
    }

    fn solvable_pair() -> impl Strategy<Value = (i64, i64)> {
        prop_oneof![
            (1i64..=6, prop::bool::ANY).prop_map(|(n, neg)| (1, if neg { -n } else { n })),
            (1i64..=6, prop::bool::ANY).prop_map(|(m, neg)| (m, if neg { -1 } else { 1 })),
        ]
    }

    fn atoms(max: usize) -> impl Strategy<Value = Vec<ConjugateAtom>> {
        prop::collection::vec((-2i64..=2, -2i64..=2, prop_oneof![-3i64..=-1, 1i64..=3]), 1..=max)
            .prop_map(|v| v.into_iter().map(|(i, j, k)| atom(i, j, k)).collect())
    }

    proptest! {
        #[test]
        fn standardize_recovers_parameters(
            (m, n) in solvable_pair(),
            (p, q) in solvable_pair(),
            c in atoms(4),
            (ei, ej) in (-1i64..=1, -2i64..=2),
            shuffle in 0usize..6,
        ) {
            let extra = vec![atom(ei + 1, ej, m), atom(ei, ej, -n)];
            let mut pres = expand_atoms(m, n, p, q, &c, &[extra]);
            let k = shuffle % pres.relators.len();
            pres.relators.rotate_left(k);
            if shuffle % 2 == 1 {
                pres.relators[0] = pres.relators[0].inverse();
            }
            let sf = standardize(&pres).unwrap();
            let reduced = decompose(&atoms_word(&c)).unwrap();
            let window = reduced.iter().map(|a| a.i.abs().max(a.j.abs())).max().unwrap_or(0).max(ei.abs()).max((ei + 1).abs()).max(ej.abs());
            let law = exponent_law(m, n, p, q, window as u32).unwrap();
            prop_assert_eq!((sf.m, sf.n, sf.p, sf.q), (m, n, p, q));
            prop_assert_eq!(&sf.c, &alpha_exponent(&reduced, &law));

            let GroupDescriptor::MetabelianH31 { e, .. } = sf.descriptor() else { unreachable!() };
            let g = MetaH31::new(m, n, p, q, e).unwrap();
            let scale = law.n_scale.to_i64().unwrap();
            for r in &pres.relators {
                let w = substitute(r, "a", &Word::power_of("a", scale));
                prop_assert!(g.is_identity(&g.of_word(&w).unwrap()), "{}", r);
            }
            let report = classify(&sf.descriptor()).unwrap();
            prop_assert!(report.finitely_presentable);
        }
    }
}
