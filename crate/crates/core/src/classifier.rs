//! Invariants of the descriptor families: Hirsch length, radical, quotient,
//! finiteness properties, dimensions and minimax data.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arith::{
    conjugate_to_integral, has_finite_order, is_unimodular_integral_class,
    is_virtually_unipotent, mult_rank, prime_support, radical, ArithError, Mat2Q, Rational,
    Vec2Q,
};
use crate::families::lattice::Lattice2;
use crate::families::{
    AffineMap2, AffineQ2, AscHnnKb, BSbar, FamilyError, GroupDescriptor, GroupModel,
    LatticeByZ, MetaH31, Model, RankOneQ,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("unsupported descriptor: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("report invariant violated: {}", .0.join("; "))]
    Invariant(Vec<String>),
}

impl From<ArithError> for ClassifyError {
    fn from(e: ArithError) -> ClassifyError {
        ClassifyError::Family(FamilyError::Arith(e))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TriValue {
    True,
    False,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriState {
    pub value: TriValue,
    pub note: String,
}

impl TriState {
    pub fn yes(note: impl Into<String>) -> TriState {
        TriState {
            value: TriValue::True,
            note: note.into(),
        }
    }

    pub fn no(note: impl Into<String>) -> TriState {
        TriState {
            value: TriValue::False,
            note: note.into(),
        }
    }

    pub fn unknown(note: impl Into<String>) -> TriState {
        TriState {
            value: TriValue::Unknown,
            note: note.into(),
        }
    }

    pub fn of(b: bool, note: impl Into<String>) -> TriState {
        if b {
            TriState::yes(note)
        } else {
            TriState::no(note)
        }
    }

    pub fn is_true(&self) -> bool {
        self.value == TriValue::True
    }
}

/// What the radical looks like as an abstract group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum ModuleDescription {
    /// `Z[1/D]` (plain `Z` when `D = 1`).
    LocalizedIntegers { d: u64 },
    /// `Z[1/D] ⊕ Z`, the fiber extended by a centralizing element.
    LocalizedPlusCyclic { d: u64 },
    /// A rank-two subgroup of `Q^2`, saturated under the monodromy `matrix`.
    SublatticeOfQ2 {
        matrix: Option<Mat2Q>,
        inverted_primes: Vec<u64>,
        finitely_generated: bool,
    },
    /// The radical has finite index: the group is virtually nilpotent.
    WholeGroupVirtuallyNilpotent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RadicalInfo {
    pub hirsch: u32,
    pub module_description: ModuleDescription,
    pub is_abelian: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum QuotientType {
    Z2,
    Z,
    Dinfty,
    ZplusZ2,
    VirtuallyTrivial,
}

impl fmt::Display for QuotientType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuotientType::Z2 => "Z^2",
            QuotientType::Z => "Z",
            QuotientType::Dinfty => "D_infinity",
            QuotientType::ZplusZ2 => "Z + Z/2",
            QuotientType::VirtuallyTrivial => "finite",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Base {
    Z2,
    Kb,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type")]
pub enum ConstructibleType {
    /// `BS(1,n) ⋊ Z`; `witness` is the `(t,u)`-exponent of the element acting by `n`.
    Type1 {
        #[serde(serialize_with = "as_text")]
        n: BigInt,
        witness: (i64, i64),
    },
    /// Properly ascending HNN extension with base `Z^2` or the Klein bottle group.
    Type2 { base: Base },
    /// Virtually polycyclic.
    Type3,
    None,
}

fn as_text<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Section {
    pub label: String,
    pub hirsch: u32,
}

impl Section {
    pub fn localized(d: u64) -> Section {
        let d = radical(d.max(1));
        Section {
            label: if d == 1 { "Z".into() } else { format!("Z[1/{d}]") },
            hirsch: 1,
        }
    }

    pub fn finite(order: u64) -> Section {
        Section {
            label: format!("finite({order})"),
            hirsch: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Minimax {
    pub is_minimax: bool,
    pub sections: Vec<Section>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ManifoldDim {
    pub lower: u32,
    pub upper: Option<u32>,
    pub exact: Option<u32>,
    /// The exact value is not known.
    pub open: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub hirsch_length: u32,
    pub radical: RadicalInfo,
    pub quotient: Option<QuotientType>,
    pub derived_length: u32,
    pub polycyclic: bool,
    pub finitely_presentable: bool,
    pub constructible: bool,
    pub fp2: TriState,
    pub coherent: TriState,
    pub cohomological_dimension: u32,
    pub minimax: Minimax,
    pub constructible_type: ConstructibleType,
    pub manifold_dim: Option<ManifoldDim>,
    /// Assumptions and caveats; not part of the serialized report.
    pub notes: Vec<String>,
}

impl Serialize for ClassificationReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ClassificationReport", 13)?;
        st.serialize_field("hirsch_length", &self.hirsch_length)?;
        st.serialize_field("radical", &self.radical)?;
        st.serialize_field("quotient", &self.quotient)?;
        st.serialize_field("derived_length", &self.derived_length)?;
        st.serialize_field("polycyclic", &self.polycyclic)?;
        st.serialize_field("finitely_presentable", &self.finitely_presentable)?;
        st.serialize_field("constructible", &self.constructible)?;
        st.serialize_field("fp2", &self.fp2)?;
        st.serialize_field("coherent", &self.coherent)?;
        st.serialize_field("cohomological_dimension", &self.cohomological_dimension)?;
        st.serialize_field("minimax", &self.minimax)?;
        st.serialize_field("constructible_type", &self.constructible_type)?;
        st.serialize_field("manifold_dim", &self.manifold_dim)?;
        st.end()
    }
}

const NOTE_OPEN_FP2: &str =
    "open whether FP2 implies finite presentability when the radical has Hirsch length 1";
const NOTE_COHERENCE: &str =
    "for Hirsch length 3, coherent iff FP2 and the radical has Hirsch length at least 2";
const NOTE_NOT_FP2: &str =
    "neither the monodromy nor its inverse is conjugate to an integral matrix, so not FP2";
const NOTE_POLYCYCLIC: &str = "polycyclic groups are coherent and of type FP";
const NOTE_E_IGNORED: &str =
    "the twisting parameter e does not affect finite presentability in this family";

/// Everything a family rule decides; the remaining report fields follow.
struct Facts {
    hirsch: u32,
    radical: RadicalInfo,
    quotient: Option<QuotientType>,
    abelian: bool,
    derived_length: Option<u32>,
    polycyclic: bool,
    fp: bool,
    fp2: TriState,
    coherent: Option<TriState>,
    constructible_type: ConstructibleType,
    cd: Option<u32>,
    sections: Vec<Section>,
    notes: Vec<String>,
}

impl Facts {
    fn new(hirsch: u32, radical: RadicalInfo) -> Facts {
        Facts {
            hirsch,
            radical,
            quotient: None,
            abelian: false,
            derived_length: None,
            polycyclic: false,
            fp: false,
            fp2: TriState::unknown(""),
            coherent: None,
            constructible_type: ConstructibleType::None,
            cd: None,
            sections: Vec::new(),
            notes: Vec::new(),
        }
    }
}

fn primes_of(values: &[&Rational]) -> Result<Vec<u64>, ArithError> {
    let mut out = BTreeSet::new();
    for v in values {
        out.extend(prime_support(v.numer())?);
        out.extend(prime_support(v.denom())?);
    }
    Ok(out.into_iter().collect())
}

/// A feasible integer point `(i, j)` of `{ v_p(r^i s^j) ≥ 1 for every prime p of r, s }`,
/// found by Fourier–Motzkin elimination of `j` and back substitution.
pub fn fp_cone_point(r: &Rational, s: &Rational) -> Result<Option<(i64, i64)>, ArithError> {
    let primes = primes_of(&[r, s])?;
    let rows: Vec<(i64, i64)> = primes
        .iter()
        .map(|&p| (r.valuation(p).unwrap_or(0), s.valuation(p).unwrap_or(0)))
        .collect();
    if rows.is_empty() {
        return Ok(None);
    }
    // Constraints on i alone: alpha * i ≥ delta.
    let mut on_i: Vec<(i64, i64)> = Vec::new();
    for &(a, b) in &rows {
        if b == 0 {
            on_i.push((a, 1));
        }
    }
    for &(ap, bp) in rows.iter().filter(|r| r.1 > 0) {
        for &(aq, bq) in rows.iter().filter(|r| r.1 < 0) {
            on_i.push((bp * aq - bq * ap, bp - bq));
        }
    }
    let mut lower: Option<Rational> = None;
    let mut upper: Option<Rational> = None;
    for &(alpha, delta) in &on_i {
        match alpha.signum() {
            0 if delta > 0 => return Ok(None),
            0 => {}
            1 => {
                let b = Rational::new(delta, alpha);
                if lower.as_ref().is_none_or(|l| b > *l) {
                    lower = Some(b);
                }
            }
            _ => {
                let b = Rational::new(delta, alpha);
                if upper.as_ref().is_none_or(|u| b < *u) {
                    upper = Some(b);
                }
            }
        }
    }
    if let (Some(l), Some(u)) = (&lower, &upper) {
        if l > u {
            return Ok(None);
        }
    }
    let i = lower.or(upper).unwrap_or_else(Rational::zero);
    let mut jl: Option<Rational> = None;
    let mut ju: Option<Rational> = None;
    for &(a, b) in &rows {
        if b == 0 {
            continue;
        }
        let bound = (Rational::one() - &(Rational::from(a) * &i)) / Rational::from(b);
        if b > 0 {
            if jl.as_ref().is_none_or(|l| bound > *l) {
                jl = Some(bound);
            }
        } else if ju.as_ref().is_none_or(|u| bound < *u) {
            ju = Some(bound);
        }
    }
    let j = jl.or(ju).unwrap_or_else(Rational::zero);
    let den = i.denom().lcm(j.denom());
    let scale = Rational::from(den);
    let (i, j) = ((&i * &scale).to_i64(), (&j * &scale).to_i64());
    let (i, j) = match (i, j) {
        (Some(i), Some(j)) => (i, j),
        _ => return Err(ArithError::TooLarge(BigInt::from(0))),
    };
    debug_assert!(rows.iter().all(|&(a, b)| a * i + b * j >= 1));
    Ok(Some((i, j)))
}

/// The cone point with the smallest `|r^i s^j|`. This is independent of the
/// chosen `(t,u)` basis.
pub fn type1_witness(r: &Rational, s: &Rational) -> Result<Option<((i64, i64), BigInt)>, ArithError> {
    let Some(start) = fp_cone_point(r, s)? else {
        return Ok(None);
    };
    let primes = primes_of(&[r, s])?;
    let rows: Vec<(u64, i64, i64)> = primes
        .iter()
        .map(|&p| (p, r.valuation(p).unwrap_or(0), s.valuation(p).unwrap_or(0)))
        .collect();
    let rho = |i: i64, j: i64| r.pow(i) * s.pow(j);
    let bound = rho(start.0, start.1).abs();
    let (p, ap, bp, q, aq, bq, det) = rows
        .iter()
        .flat_map(|x| rows.iter().map(move |y| (x, y)))
        .map(|(&(p, ap, bp), &(q, aq, bq))| (p, ap, bp, q, aq, bq, ap * bq - aq * bp))
        .find(|t| t.6 != 0)
        .expect("rank two gives two independent valuation rows");
    let max_val = |p: u64| {
        let mut k = 0i64;
        let mut pk = BigInt::from(p);
        while Rational::from(pk.clone()) <= bound {
            k += 1;
            pk *= p;
        }
        k
    };
    let (vp_max, vq_max) = (max_val(p), max_val(q));
    let mut best: Option<((i64, i64), Rational)> = None;
    for vp in 1..=vp_max {
        for vq in 1..=vq_max {
            let ni = vp * bq - vq * bp;
            let nj = ap * vq - aq * vp;
            if ni % det != 0 || nj % det != 0 {
                continue;
            }
            let (i, j) = (ni / det, nj / det);
            if !rows.iter().all(|&(_, a, b)| a * i + b * j >= 1) {
                continue;
            }
            let x = rho(i, j);
            if best.as_ref().is_none_or(|(_, bx)| x.abs() < bx.abs()) {
                best = Some(((i, j), x));
            }
        }
    }
    let (w, x) = best.expect("the starting point lies in the search box");
    Ok(Some((w, x.to_integer().expect("cone points have integral ratio"))))
}

fn meta_facts(g: &MetaH31) -> Result<Facts, ClassifyError> {
    let (r, s) = (g.r().clone(), g.s().clone());
    let mr = mult_rank(&[r.clone(), s.clone()])?;
    let d = g.locus();
    let mut f = match mr.rank {
        2 => {
            let mut f = Facts::new(
                3,
                RadicalInfo {
                    hirsch: 1,
                    module_description: ModuleDescription::LocalizedIntegers { d },
                    is_abelian: true,
                },
            );
            f.quotient = Some(QuotientType::Z2);
            match type1_witness(&r, &s)? {
                Some((witness, n)) => {
                    f.fp = true;
                    f.fp2 = TriState::yes("finitely presentable");
                    f.constructible_type = ConstructibleType::Type1 { n, witness };
                }
                None => {
                    f.fp2 = TriState::unknown(NOTE_OPEN_FP2);
                }
            }
            f.coherent = Some(TriState::no(NOTE_COHERENCE));
            f.sections = vec![Section::localized(d), Section::localized(1), Section::localized(1)];
            f
        }
        1 => {
            let mut f = Facts::new(
                3,
                RadicalInfo {
                    hirsch: 2,
                    module_description: ModuleDescription::LocalizedPlusCyclic { d },
                    is_abelian: true,
                },
            );
            let torsion = mr.has_minus_one_torsion;
            f.quotient = Some(if torsion { QuotientType::ZplusZ2 } else { QuotientType::Z });
            let rho0 = rank_one_generator(&r, &s)?;
            f.fp = rho0.is_integer() || rho0.recip().is_integer();
            f.fp2 = TriState::of(f.fp, if f.fp { "finitely presentable" } else { NOTE_NOT_FP2 });
            if f.fp {
                f.constructible_type = ConstructibleType::Type2 {
                    base: if torsion { Base::Kb } else { Base::Z2 },
                };
            }
            f.coherent = Some(TriState::of(f.fp, NOTE_COHERENCE));
            f.sections = vec![Section::localized(d), Section::localized(1), Section::localized(1)];
            f
        }
        _ => {
            let abelian_radical = meta_radical_abelian(g);
            let mut f = Facts::new(
                3,
                RadicalInfo {
                    hirsch: 3,
                    module_description: ModuleDescription::WholeGroupVirtuallyNilpotent,
                    is_abelian: abelian_radical,
                },
            );
            f.quotient = Some(QuotientType::VirtuallyTrivial);
            f.polycyclic = true;
            f.sections = vec![Section::localized(1); 3];
            f
        }
    };
    f.abelian = r.is_one() && s.is_one() && g.e().is_zero();
    f.notes.push(NOTE_E_IGNORED.into());
    Ok(f)
}

/// `ρ0` with `{|r^i s^j|} = ρ0^Z`, for a rank-one pair.
fn rank_one_generator(r: &Rational, s: &Rational) -> Result<Rational, ArithError> {
    let primes = primes_of(&[r, s])?;
    let p = primes[0];
    let (vr, vs) = (r.valuation(p).unwrap_or(0), s.valuation(p).unwrap_or(0));
    let eg = BigInt::from(vr).extended_gcd(&BigInt::from(vs));
    let (x, y) = (eg.x.to_i64().unwrap_or(0), eg.y.to_i64().unwrap_or(0));
    Ok((r.pow(x) * s.pow(y)).abs())
}

fn meta_radical_abelian(g: &MetaH31) -> bool {
    let bump = |x: &Rational| if x.is_one() { 1 } else { 2 };
    let t = g.pow(&g.generator("t").expect("t"), bump(g.r()));
    let u = g.pow(&g.generator("u").expect("u"), bump(g.s()));
    let c = g.commutator(&t, &u);
    g.is_identity(&c)
}

/// Labels for `L ∩ (0 ⊕ Q)` and the projection of `L` to the first
/// coordinate, detecting divisibility by comparing two cutoffs.
fn lattice_sections(lat: &LatticeByZ) -> Vec<Section> {
    if lat.finitely_generated_lattice().is_some() {
        return vec![Section::localized(1), Section::localized(1)];
    }
    let (small, big) = (lat.lattice_at(12), lat.lattice_at(24));
    let [a1, c1] = hnf_diagonal(&small);
    let [a2, c2] = hnf_diagonal(&big);
    let divisible = |x: &Rational, y: &Rational| -> u64 {
        lat.bad_primes()
            .iter()
            .filter(|&&p| y.valuation(p).unwrap_or(0) < x.valuation(p).unwrap_or(0))
            .product()
    };
    vec![Section::localized(divisible(&c1, &c2)), Section::localized(divisible(&a1, &a2))]
}

fn hnf_diagonal(l: &Lattice2) -> [Rational; 2] {
    let [r1, r2] = l.basis();
    [r1[0].clone(), r2[1].clone()]
}

fn lattice_facts(g: &LatticeByZ) -> Result<Facts, ClassifyError> {
    let m = g.matrix();
    if is_virtually_unipotent(m) {
        let mut f = Facts::new(
            3,
            RadicalInfo {
                hirsch: 3,
                module_description: ModuleDescription::WholeGroupVirtuallyNilpotent,
                is_abelian: has_finite_order(m),
            },
        );
        f.quotient = Some(QuotientType::VirtuallyTrivial);
        f.polycyclic = true;
        f.abelian = m.is_identity();
        f.sections = vec![Section::localized(1); 3];
        return Ok(f);
    }
    let closed = g.finitely_generated_lattice().is_some();
    let mut f = Facts::new(
        3,
        RadicalInfo {
            hirsch: 2,
            module_description: ModuleDescription::SublatticeOfQ2 {
                matrix: Some(m.clone()),
                inverted_primes: if closed { Vec::new() } else { g.bad_primes().to_vec() },
                finitely_generated: closed,
            },
            is_abelian: true,
        },
    );
    f.quotient = Some(QuotientType::Z);
    f.polycyclic = is_unimodular_integral_class(m)?;
    f.fp = conjugate_to_integral(m)? || conjugate_to_integral(g.matrix_inverse())?;
    f.fp2 = TriState::of(f.fp, if f.fp { "finitely presentable" } else { NOTE_NOT_FP2 });
    f.coherent = Some(TriState::of(f.fp, NOTE_COHERENCE));
    if f.fp && !f.polycyclic {
        f.constructible_type = ConstructibleType::Type2 { base: Base::Z2 };
    }
    f.sections = lattice_sections(g);
    f.sections.push(Section::localized(1));
    Ok(f)
}

fn hnn_facts(g: &AscHnnKb) -> Facts {
    let phi = g.endo();
    if phi.index() == 1 {
        let mut f = Facts::new(
            3,
            RadicalInfo {
                hirsch: 3,
                module_description: ModuleDescription::WholeGroupVirtuallyNilpotent,
                is_abelian: true,
            },
        );
        f.quotient = Some(QuotientType::VirtuallyTrivial);
        f.polycyclic = true;
        f.sections = vec![Section::localized(1); 3];
        return f;
    }
    let ed = (phi.e as i128 * phi.d as i128).unsigned_abs() as u64;
    let inverted: Vec<u64> = prime_support(&BigInt::from(ed)).unwrap_or_default();
    let mut f = Facts::new(
        3,
        RadicalInfo {
            hirsch: 2,
            module_description: ModuleDescription::SublatticeOfQ2 {
                matrix: Some(Mat2Q::new(phi.e, 0, 0, phi.d)),
                inverted_primes: inverted,
                finitely_generated: false,
            },
            is_abelian: true,
        },
    );
    f.quotient = Some(QuotientType::ZplusZ2);
    f.fp = true;
    f.fp2 = TriState::yes("finitely presentable");
    f.coherent = Some(TriState::yes(NOTE_COHERENCE));
    f.constructible_type = ConstructibleType::Type2 { base: Base::Kb };
    f.sections = vec![
        Section::localized(phi.d.unsigned_abs()),
        Section::localized(phi.e.unsigned_abs()),
        Section::localized(1),
    ];
    f
}

fn bsbar_facts(g: &BSbar) -> Facts {
    let (m, n) = (g.m(), g.n());
    if m == 1 && n.abs() == 1 {
        let mut f = Facts::new(
            2,
            RadicalInfo {
                hirsch: 2,
                module_description: ModuleDescription::SublatticeOfQ2 {
                    matrix: None,
                    inverted_primes: Vec::new(),
                    finitely_generated: true,
                },
                is_abelian: true,
            },
        );
        f.polycyclic = true;
        f.abelian = n == 1;
        f.sections = vec![Section::localized(1); 2];
        return f;
    }
    let mut f = Facts::new(
        2,
        RadicalInfo {
            hirsch: 1,
            module_description: ModuleDescription::LocalizedIntegers { d: g.locus() },
            is_abelian: true,
        },
    );
    f.fp = m == 1 || n.abs() == 1;
    f.fp2 = TriState::of(f.fp, if f.fp { "finitely presentable" } else { "BSbar(m,n) with m, |n| > 1 is not FP2" });
    f.coherent = Some(TriState::of(
        f.fp,
        if f.fp { "BS(1,n) is coherent" } else { "not FP2" },
    ));
    f.sections = vec![Section::localized(g.locus()), Section::localized(1)];
    f
}

fn rank_one_facts(g: &RankOneQ) -> Facts {
    if g.is_trivial() {
        let mut f = Facts::new(
            0,
            RadicalInfo {
                hirsch: 0,
                module_description: ModuleDescription::LocalizedIntegers { d: 1 },
                is_abelian: true,
            },
        );
        f.polycyclic = true;
        f.abelian = true;
        f.derived_length = Some(0);
        return f;
    }
    let d = g.locus();
    let mut f = Facts::new(
        1,
        RadicalInfo {
            hirsch: 1,
            module_description: ModuleDescription::LocalizedIntegers { d },
            is_abelian: true,
        },
    );
    f.abelian = true;
    f.sections = vec![Section::localized(d)];
    if g.is_cyclic() {
        f.polycyclic = true;
    } else {
        f.fp2 = TriState::no("not finitely generated");
        f.coherent = Some(TriState::yes("finitely generated subgroups of Q are cyclic"));
        f.cd = Some(2);
    }
    f
}

/// The supported shape: two generators with involutive determinant −1 linear
/// parts whose product has infinite order, all others translations.
fn affine_facts(g: &AffineQ2) -> Result<Facts, ClassifyError> {
    let maps: Vec<(&str, AffineMap2)> = g.generator_maps().collect();
    let mut flips = Vec::new();
    for (name, map) in &maps {
        if map.is_translation() {
            continue;
        }
        let lin = &map.linear;
        if (-&lin.det()).is_one() && lin.mul(lin).is_identity() {
            flips.push((name, lin.clone()));
        } else {
            return Err(ClassifyError::Unsupported(format!(
                "generator `{name}` is neither a translation nor a determinant −1 involution"
            )));
        }
    }
    if flips.len() != 2 {
        return Err(ClassifyError::Unsupported(format!(
            "expected two determinant −1 involutions, found {}",
            flips.len()
        )));
    }
    let mt = flips[0].1.mul(&flips[1].1);
    if has_finite_order(&mt) {
        return Err(ClassifyError::Unsupported(
            "the product of the involutions has finite order".into(),
        ));
    }
    let mut vectors: Vec<Vec2Q> = Vec::new();
    for w in g.radical_words() {
        let img = g.of_word(w)?;
        if !img.is_translation() {
            return Err(ClassifyError::Unsupported(format!("radical word `{w}` is not a translation")));
        }
        vectors.push(img.translation);
    }
    let Some(basis) = span_basis(&vectors) else {
        return Err(ClassifyError::Unsupported(
            "radical words must span a rank-two lattice of translations".into(),
        ));
    };
    let p = Mat2Q::from_columns(&basis[0], &basis[1]);
    let local = LatticeByZ::new(p.inverse()?.mul(&mt).mul(&p))?;
    let closed = local.finitely_generated_lattice().is_some();
    let mut f = Facts::new(
        3,
        RadicalInfo {
            hirsch: 2,
            module_description: ModuleDescription::SublatticeOfQ2 {
                matrix: Some(mt.clone()),
                inverted_primes: if closed { Vec::new() } else { local.bad_primes().to_vec() },
                finitely_generated: closed,
            },
            is_abelian: true,
        },
    );
    f.quotient = Some(QuotientType::Dinfty);
    f.derived_length = Some(3);
    f.polycyclic = is_unimodular_integral_class(&mt)?;
    f.fp = f.polycyclic;
    f.fp2 = TriState::of(f.fp, if f.fp { "polycyclic" } else { NOTE_NOT_FP2 });
    f.coherent = Some(TriState::of(f.fp, NOTE_COHERENCE));
    f.sections = lattice_sections(&local);
    f.sections.push(Section::localized(1));
    f.sections.push(Section::finite(2));
    f.notes.push("affine representation assumed faithful".into());
    Ok(f)
}

/// A basis of the subgroup of `Q^2` spanned by `vectors`, when it has rank two.
pub fn span_basis(vectors: &[Vec2Q]) -> Option<[Vec2Q; 2]> {
    let det = |u: &Vec2Q, v: &Vec2Q| &(&u[0] * &v[1]) - &(&u[1] * &v[0]);
    let (i, j) = (0..vectors.len())
        .flat_map(|i| (i + 1..vectors.len()).map(move |j| (i, j)))
        .find(|&(i, j)| !det(&vectors[i], &vectors[j]).is_zero())?;
    let p = Mat2Q::from_columns(&vectors[i], &vectors[j]);
    let pinv = p.inverse().ok()?;
    let mut lat = Lattice2::standard();
    for v in vectors {
        lat.insert(&pinv.apply(v));
    }
    let [b1, b2] = lat.basis();
    Some([p.apply(&b1), p.apply(&b2)])
}

fn facts(desc: &GroupDescriptor) -> Result<Facts, ClassifyError> {
    match Model::new(desc)? {
        Model::RankOne(g) => Ok(rank_one_facts(&g)),
        Model::BSbar(g) => Ok(bsbar_facts(&g)),
        Model::Meta(g) => meta_facts(&g),
        Model::Lattice(g) => lattice_facts(&g),
        Model::HnnKb(g) => Ok(hnn_facts(&g)),
        Model::Affine(g) => affine_facts(&g),
    }
}

pub fn classify(desc: &GroupDescriptor) -> Result<ClassificationReport, ClassifyError> {
    let f = facts(desc)?;
    let h = f.hirsch;
    let constructible = f.fp || f.polycyclic;
    let (fp2, coherent, ctype) = if f.polycyclic {
        (
            TriState::yes(NOTE_POLYCYCLIC),
            TriState::yes(NOTE_POLYCYCLIC),
            ConstructibleType::Type3,
        )
    } else {
        let coherent = f.coherent.unwrap_or_else(|| TriState::unknown(""));
        (f.fp2, coherent, f.constructible_type)
    };
    let cd = f.cd.unwrap_or(if constructible { h } else { h + 1 });
    let manifold_dim = if f.polycyclic {
        Some(ManifoldDim {
            lower: h,
            upper: Some(h),
            exact: Some(h),
            open: false,
        })
    } else if h == 3 {
        Some(match ctype {
            ConstructibleType::Type1 { .. } => ManifoldDim {
                lower: 5,
                upper: Some(5),
                exact: Some(5),
                open: false,
            },
            ConstructibleType::Type2 { .. } => ManifoldDim {
                lower: 5,
                upper: Some(6),
                exact: None,
                open: true,
            },
            _ => ManifoldDim {
                lower: 5,
                upper: None,
                exact: None,
                open: true,
            },
        })
    } else {
        None
    };
    let derived_length = f
        .derived_length
        .unwrap_or(if f.abelian { 1 } else { 2 });
    let report = ClassificationReport {
        hirsch_length: h,
        radical: f.radical,
        quotient: if h == 3 { f.quotient } else { None },
        derived_length,
        polycyclic: f.polycyclic,
        finitely_presentable: constructible,
        constructible,
        fp2,
        coherent,
        cohomological_dimension: cd,
        minimax: Minimax {
            is_minimax: true,
            sections: f.sections,
        },
        constructible_type: ctype,
        manifold_dim,
        notes: f.notes,
    };
    let problems = check_invariants(&report);
    if !problems.is_empty() {
        return Err(ClassifyError::Invariant(problems));
    }
    Ok(report)
}

/// Consistency conditions every report must satisfy.
pub fn check_invariants(r: &ClassificationReport) -> Vec<String> {
    let mut out = Vec::new();
    let h = r.hirsch_length;
    if r.finitely_presentable != r.constructible {
        out.push("finitely presentable must equal constructible".into());
    }
    if r.constructible && r.cohomological_dimension != h {
        out.push("constructible groups have cd equal to the Hirsch length".into());
    }
    if r.cohomological_dimension < h || r.cohomological_dimension > h + 1 {
        out.push("cd must be h or h + 1".into());
    }
    if r.radical.hirsch > h {
        out.push("radical Hirsch length exceeds the Hirsch length".into());
    }
    if r.polycyclic {
        if r.constructible_type != ConstructibleType::Type3 {
            out.push("polycyclic groups are Type3".into());
        }
        if !r.coherent.is_true() {
            out.push("polycyclic groups are coherent".into());
        }
        if r.manifold_dim.as_ref().and_then(|m| m.exact) != Some(h) {
            out.push("polycyclic groups have manifold dimension h".into());
        }
    }
    if r.finitely_presentable && r.fp2.value != TriValue::True {
        out.push("finitely presentable groups are FP2".into());
    }
    if h == 3 {
        let ok = match (r.radical.hirsch, r.quotient) {
            (1, Some(QuotientType::Z2)) => true,
            (2, Some(QuotientType::Z | QuotientType::Dinfty | QuotientType::ZplusZ2)) => true,
            (3, Some(QuotientType::VirtuallyTrivial)) => true,
            _ => false,
        };
        if !ok {
            out.push("quotient type does not match the radical".into());
        }
        if r.radical.hirsch == 1 && r.coherent.value == TriValue::True {
            out.push("a radical of Hirsch length 1 rules out coherence".into());
        }
    } else if r.quotient.is_some() {
        out.push("quotient type is only defined for Hirsch length 3".into());
    }
    let section_sum: u32 = r.minimax.sections.iter().map(|s| s.hirsch).sum();
    if section_sum != h {
        out.push(format!("minimax sections sum to {section_sum}, not {h}"));
    }
    if !(r.derived_length <= 3) {
        out.push("derived length exceeds 3".into());
    }
    out
}

pub fn hirsch_length(desc: &GroupDescriptor) -> Result<u32, ClassifyError> {
    Ok(facts(desc)?.hirsch)
}

pub fn radical_info(desc: &GroupDescriptor) -> Result<RadicalInfo, ClassifyError> {
    Ok(facts(desc)?.radical)
}

pub fn quotient_type(desc: &GroupDescriptor) -> Result<QuotientType, ClassifyError> {
    classify(desc)?
        .quotient
        .ok_or_else(|| ClassifyError::Precondition("the quotient type needs Hirsch length 3".into()))
}

pub fn derived_length(desc: &GroupDescriptor) -> Result<u32, ClassifyError> {
    Ok(classify(desc)?.derived_length)
}

pub fn is_polycyclic(desc: &GroupDescriptor) -> Result<bool, ClassifyError> {
    Ok(facts(desc)?.polycyclic)
}

pub fn fp_status(
    desc: &GroupDescriptor,
) -> Result<(bool, ConstructibleType, TriState), ClassifyError> {
    let r = classify(desc)?;
    Ok((r.finitely_presentable, r.constructible_type, r.fp2))
}

pub fn cohomological_dimension(desc: &GroupDescriptor) -> Result<u32, ClassifyError> {
    Ok(classify(desc)?.cohomological_dimension)
}

pub fn coherence_status(desc: &GroupDescriptor) -> Result<TriState, ClassifyError> {
    let r = classify(desc)?;
    if r.hirsch_length != 3 {
        return Err(ClassifyError::Precondition("coherence status needs Hirsch length 3".into()));
    }
    Ok(r.coherent)
}

pub fn minimax_series(desc: &GroupDescriptor) -> Result<Vec<Section>, ClassifyError> {
    Ok(classify(desc)?.minimax.sections)
}

pub fn manifold_dim_info(desc: &GroupDescriptor) -> Result<ManifoldDim, ClassifyError> {
    let r = classify(desc)?;
    r.manifold_dim.filter(|_| r.hirsch_length == 3).ok_or_else(|| {
        ClassifyError::Precondition("manifold dimension needs Hirsch length 3".into())
    })
}
