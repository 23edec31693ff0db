//! Parametrized group families with exact normal forms and solvable word
//! problems.

pub mod affine;
pub mod bsbar;
pub mod kb;
pub mod lattice;
pub mod meta;
pub mod rank_one;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{ArithError, Mat2Q, Rational};
use crate::presentation::Word;

pub use affine::{AffineDescriptor, AffineGenerator, AffineMap2, AffineQ2};
pub use bsbar::{BSbar, BSbarElem};
pub use kb::{AscHnnKb, BrittonElem, KbElem, KbEndo};
pub use lattice::{LatticeByZ, LatticeElem};
pub use meta::{bs1n_ext_to_meta, BS1nAut, MetaH31, MetaH31Elem};
pub use rank_one::RankOneQ;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("invalid descriptor: {0}")]
    Invalid(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("{0} is not an element of the group")]
    NotMember(String),
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
}

/// Input to the classifier: one of the supported families with its
/// parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum GroupDescriptor {
    /// The subgroup of `Q` generated by `generators`, localized at `invert`
    /// when given (so `{1}` with `invert = 6` is `Z[1/6]`).
    RankOneQ {
        generators: Vec<Rational>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        invert: Option<u64>,
    },
    /// `BS(m,n)` modulo the second derived subgroup of the normal closure of `a`.
    BSbar { m: i64, n: i64 },
    /// `< a, t, u | t a^m t^-1 = a^n, u a^p u^-1 = a^q, u t u^-1 = t a^e >`.
    MetabelianH31 {
        m: i64,
        n: i64,
        p: i64,
        q: i64,
        e: Rational,
    },
    /// `L ⋊_M Z` with `L` the smallest `M^{±1}`-invariant subgroup containing `Z^2`.
    LatticeByZ {
        #[serde(rename = "M")]
        m: Mat2Q,
    },
    /// Ascending HNN extension of the Klein bottle group along
    /// `x ↦ x^e y^f`, `y ↦ y^d`.
    AscHNNKb { e: i64, f: i64, d: i64 },
    /// A subgroup of `Aff(Q^2)` given by generator maps.
    AffineQ2(AffineDescriptor),
}

impl GroupDescriptor {
    pub fn family_name(&self) -> &'static str {
        match self {
            GroupDescriptor::RankOneQ { .. } => "RankOneQ",
            GroupDescriptor::BSbar { .. } => "BSbar",
            GroupDescriptor::MetabelianH31 { .. } => "MetabelianH31",
            GroupDescriptor::LatticeByZ { .. } => "LatticeByZ",
            GroupDescriptor::AscHNNKb { .. } => "AscHNNKb",
            GroupDescriptor::AffineQ2(_) => "AffineQ2",
        }
    }

    pub fn validate(&self) -> Result<(), FamilyError> {
        Model::new(self).map(|_| ())
    }
}

/// A defining relation `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub label: String,
    pub lhs: Word,
    pub rhs: Word,
}

impl Relation {
    pub fn new(label: impl Into<String>, lhs: Word, rhs: Word) -> Relation {
        Relation {
            label: label.into(),
            lhs,
            rhs,
        }
    }

    pub fn relator(&self) -> Word {
        self.lhs.mul(&self.rhs.inverse())
    }
}

/// Exact group operations for one family.
pub trait GroupModel {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn generators(&self) -> Vec<String>;
    fn identity(&self) -> Self::Elem;
    fn generator(&self, symbol: &str) -> Result<Self::Elem, FamilyError>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn relations(&self) -> Vec<Relation>;

    fn pow(&self, a: &Self::Elem, k: i64) -> Self::Elem {
        let mut base = if k < 0 { self.inv(a) } else { a.clone() };
        let mut k = k.unsigned_abs();
        let mut acc = self.identity();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn of_word(&self, w: &Word) -> Result<Self::Elem, FamilyError> {
        let mut acc = self.identity();
        for s in w.syllables() {
            let g = self.generator(&s.generator)?;
            acc = self.mul(&acc, &self.pow(&g, s.exponent));
        }
        Ok(acc)
    }

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }

    fn commutator(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(&ab, &self.inv(&ba))
    }

    fn conjugate(&self, g: &Self::Elem, a: &Self::Elem) -> Self::Elem {
        self.mul(&self.mul(g, a), &self.inv(g))
    }
}

/// A validated descriptor ready for computation.
#[derive(Clone, Debug)]
pub enum Model {
    RankOne(RankOneQ),
    BSbar(BSbar),
    Meta(MetaH31),
    Lattice(LatticeByZ),
    HnnKb(AscHnnKb),
    Affine(AffineQ2),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Element {
    RankOne(Rational),
    BSbar(BSbarElem),
    Meta(MetaH31Elem),
    Lattice(LatticeElem),
    HnnKb(BrittonElem),
    Affine(AffineMap2),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::RankOne(x) => write!(f, "{x}"),
            Element::BSbar(g) => write!(f, "{g}"),
            Element::Meta(g) => write!(f, "{g}"),
            Element::Lattice(g) => write!(f, "{g}"),
            Element::HnnKb(g) => write!(f, "{g}"),
            Element::Affine(g) => write!(f, "{g}"),
        }
    }
}

impl Model {
    pub fn new(desc: &GroupDescriptor) -> Result<Model, FamilyError> {
        Ok(match desc {
            GroupDescriptor::RankOneQ { generators, invert } => {
                Model::RankOne(RankOneQ::new(generators.clone(), invert.unwrap_or(1))?)
            }
            GroupDescriptor::BSbar { m, n } => Model::BSbar(BSbar::new(*m, *n)?),
            GroupDescriptor::MetabelianH31 { m, n, p, q, e } => {
                Model::Meta(MetaH31::new(*m, *n, *p, *q, e.clone())?)
            }
            GroupDescriptor::LatticeByZ { m } => Model::Lattice(LatticeByZ::new(m.clone())?),
            GroupDescriptor::AscHNNKb { e, f, d } => {
                Model::HnnKb(AscHnnKb::new(KbEndo::new(*e, *f, *d)?))
            }
            GroupDescriptor::AffineQ2(a) => Model::Affine(AffineQ2::new(a.clone())?),
        })
    }
}

macro_rules! dispatch {
    ($self:expr, $m:ident => $body:expr) => {
        match $self {
            Model::RankOne($m) => $body,
            Model::BSbar($m) => $body,
            Model::Meta($m) => $body,
            Model::Lattice($m) => $body,
            Model::HnnKb($m) => $body,
            Model::Affine($m) => $body,
        }
    };
}

macro_rules! binary {
    ($self:expr, $a:expr, $b:expr, $op:ident) => {
        match ($self, $a, $b) {
            (Model::RankOne(m), Element::RankOne(x), Element::RankOne(y)) => {
                Element::RankOne(m.$op(x, y))
            }
            (Model::BSbar(m), Element::BSbar(x), Element::BSbar(y)) => Element::BSbar(m.$op(x, y)),
            (Model::Meta(m), Element::Meta(x), Element::Meta(y)) => Element::Meta(m.$op(x, y)),
            (Model::Lattice(m), Element::Lattice(x), Element::Lattice(y)) => {
                Element::Lattice(m.$op(x, y))
            }
            (Model::HnnKb(m), Element::HnnKb(x), Element::HnnKb(y)) => Element::HnnKb(m.$op(x, y)),
            (Model::Affine(m), Element::Affine(x), Element::Affine(y)) => {
                Element::Affine(m.$op(x, y))
            }
            _ => panic!("element does not belong to this model"),
        }
    };
}

impl GroupModel for Model {
    type Elem = Element;

    fn generators(&self) -> Vec<String> {
        dispatch!(self, m => m.generators())
    }

    fn identity(&self) -> Element {
        match self {
            Model::RankOne(m) => Element::RankOne(m.identity()),
            Model::BSbar(m) => Element::BSbar(m.identity()),
            Model::Meta(m) => Element::Meta(m.identity()),
            Model::Lattice(m) => Element::Lattice(m.identity()),
            Model::HnnKb(m) => Element::HnnKb(m.identity()),
            Model::Affine(m) => Element::Affine(m.identity()),
        }
    }

    fn generator(&self, symbol: &str) -> Result<Element, FamilyError> {
        Ok(match self {
            Model::RankOne(m) => Element::RankOne(m.generator(symbol)?),
            Model::BSbar(m) => Element::BSbar(m.generator(symbol)?),
            Model::Meta(m) => Element::Meta(m.generator(symbol)?),
            Model::Lattice(m) => Element::Lattice(m.generator(symbol)?),
            Model::HnnKb(m) => Element::HnnKb(m.generator(symbol)?),
            Model::Affine(m) => Element::Affine(m.generator(symbol)?),
        })
    }

    fn mul(&self, a: &Element, b: &Element) -> Element {
        binary!(self, a, b, mul)
    }

    fn inv(&self, a: &Element) -> Element {
        match (self, a) {
            (Model::RankOne(m), Element::RankOne(x)) => Element::RankOne(m.inv(x)),
            (Model::BSbar(m), Element::BSbar(x)) => Element::BSbar(m.inv(x)),
            (Model::Meta(m), Element::Meta(x)) => Element::Meta(m.inv(x)),
            (Model::Lattice(m), Element::Lattice(x)) => Element::Lattice(m.inv(x)),
            (Model::HnnKb(m), Element::HnnKb(x)) => Element::HnnKb(m.inv(x)),
            (Model::Affine(m), Element::Affine(x)) => Element::Affine(m.inv(x)),
            _ => panic!("element does not belong to this model"),
        }
    }

    fn relations(&self) -> Vec<Relation> {
        dispatch!(self, m => m.relations())
    }

    fn of_word(&self, w: &Word) -> Result<Element, FamilyError> {
        Ok(match self {
            Model::RankOne(m) => Element::RankOne(m.of_word(w)?),
            Model::BSbar(m) => Element::BSbar(m.of_word(w)?),
            Model::Meta(m) => Element::Meta(m.of_word(w)?),
            Model::Lattice(m) => Element::Lattice(m.of_word(w)?),
            Model::HnnKb(m) => Element::HnnKb(m.of_word(w)?),
            Model::Affine(m) => Element::Affine(m.of_word(w)?),
        })
    }
}

pub(crate) fn unknown(symbol: &str) -> FamilyError {
    FamilyError::UnknownGenerator(symbol.to_string())
}

pub(crate) fn names(gens: &[&str]) -> Vec<String> {
    gens.iter().map(|s| s.to_string()).collect()
}
