//! The Klein bottle group `< x, y | x y x^-1 = y^-1 >`, its endomorphisms
//! `x ↦ x^e y^f`, `y ↦ y^d`, and the ascending HNN extension
//! `< x, y, t | t g t^-1 = φ(g) >` with Britton normal forms.

use std::fmt;

use crate::presentation::Word;

use super::{names, unknown, FamilyError, GroupModel, Relation};

/// `x^a y^b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct KbElem {
    pub a: i128,
    pub b: i128,
}

impl KbElem {
    pub const IDENTITY: KbElem = KbElem { a: 0, b: 0 };

    pub fn new(a: i128, b: i128) -> KbElem {
        KbElem { a, b }
    }

    pub fn mul(&self, o: &KbElem) -> KbElem {
        let b = if o.a.rem_euclid(2) == 0 { self.b } else { -self.b };
        KbElem {
            a: self.a.checked_add(o.a).expect("Klein bottle coordinate overflow"),
            b: b.checked_add(o.b).expect("Klein bottle coordinate overflow"),
        }
    }

    pub fn inv(&self) -> KbElem {
        let b = if self.a.rem_euclid(2) == 0 { -self.b } else { self.b };
        KbElem { a: -self.a, b }
    }
}

impl fmt::Display for KbElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// The Klein bottle group on its own, for testing and as the HNN base.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Kb;

impl GroupModel for Kb {
    type Elem = KbElem;

    fn generators(&self) -> Vec<String> {
        names(&["x", "y"])
    }

    fn identity(&self) -> KbElem {
        KbElem::IDENTITY
    }

    fn generator(&self, symbol: &str) -> Result<KbElem, FamilyError> {
        match symbol {
            "x" => Ok(KbElem::new(1, 0)),
            "y" => Ok(KbElem::new(0, 1)),
            _ => Err(unknown(symbol)),
        }
    }

    fn mul(&self, a: &KbElem, b: &KbElem) -> KbElem {
        a.mul(b)
    }

    fn inv(&self, a: &KbElem) -> KbElem {
        a.inv()
    }

    fn relations(&self) -> Vec<Relation> {
        let x = Word::generator("x");
        let y = Word::generator("y");
        vec![Relation::new("x y x^-1 = y^-1", y.conjugate_by(&x), y.inverse())]
    }
}

/// `φ(x) = x^e y^f`, `φ(y) = y^d`; `e` must be odd for `φ` to respect the
/// relation, and `e, d ≠ 0` makes it injective.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KbEndo {
    pub e: i64,
    pub f: i64,
    pub d: i64,
}

impl KbEndo {
    pub fn new(e: i64, f: i64, d: i64) -> Result<KbEndo, FamilyError> {
        if e % 2 == 0 {
            return Err(FamilyError::Invalid(format!(
                "x ↦ x^e y^f respects x y x^-1 = y^-1 only for odd e, got e={e}"
            )));
        }
        if d == 0 {
            return Err(FamilyError::Invalid("d must be nonzero".into()));
        }
        Ok(KbEndo { e, f, d })
    }

    pub fn apply(&self, g: &KbElem) -> KbElem {
        let odd = i128::from(g.a.rem_euclid(2) == 1);
        let a = g.a.checked_mul(self.e as i128);
        let b = g
            .b
            .checked_mul(self.d as i128)
            .and_then(|b| b.checked_add(self.f as i128 * odd));
        KbElem {
            a: a.expect("Klein bottle coordinate overflow"),
            b: b.expect("Klein bottle coordinate overflow"),
        }
    }

    pub fn apply_n(&self, g: &KbElem, k: u64) -> KbElem {
        (0..k).fold(*g, |h, _| self.apply(&h))
    }

    /// `φ^-1(g)` when `g` lies in the image.
    pub fn preimage(&self, g: &KbElem) -> Option<KbElem> {
        let e = self.e as i128;
        let d = self.d as i128;
        if g.a % e != 0 {
            return None;
        }
        let a = g.a / e;
        let rest = g.b - self.f as i128 * i128::from(a.rem_euclid(2) == 1);
        if rest % d != 0 {
            return None;
        }
        Some(KbElem::new(a, rest / d))
    }

    pub fn in_image(&self, g: &KbElem) -> bool {
        self.preimage(g).is_some()
    }

    /// `|e·d|`, the index of the image.
    pub fn index(&self) -> u64 {
        (self.e as i128 * self.d as i128).unsigned_abs() as u64
    }
}

/// `t^-i g t^j` with `i, j ≥ 0`; reduced means `g ∉ φ(Kb)` whenever `i, j > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BrittonElem {
    pub i: u64,
    pub g: KbElem,
    pub j: u64,
}

impl fmt::Display for BrittonElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.i, self.g, self.j)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AscHnnKb {
    phi: KbEndo,
}

impl AscHnnKb {
    pub fn new(phi: KbEndo) -> AscHnnKb {
        AscHnnKb { phi }
    }

    pub fn endo(&self) -> &KbEndo {
        &self.phi
    }

    pub fn base(&self, g: KbElem) -> BrittonElem {
        BrittonElem { i: 0, g, j: 0 }
    }

    pub fn reduce(&self, mut h: BrittonElem) -> BrittonElem {
        while h.i > 0 && h.j > 0 {
            match self.phi.preimage(&h.g) {
                Some(g) => {
                    h = BrittonElem {
                        i: h.i - 1,
                        g,
                        j: h.j - 1,
                    }
                }
                None => break,
            }
        }
        h
    }

    /// Exponent sum of the stable letter.
    pub fn height(&self, h: &BrittonElem) -> i64 {
        h.j as i64 - h.i as i64
    }
}

impl GroupModel for AscHnnKb {
    type Elem = BrittonElem;

    fn generators(&self) -> Vec<String> {
        names(&["x", "y", "t"])
    }

    fn identity(&self) -> BrittonElem {
        self.base(KbElem::IDENTITY)
    }

    fn generator(&self, symbol: &str) -> Result<BrittonElem, FamilyError> {
        match symbol {
            "t" => Ok(BrittonElem {
                i: 0,
                g: KbElem::IDENTITY,
                j: 1,
            }),
            _ => Ok(self.base(Kb.generator(symbol)?)),
        }
    }

    fn mul(&self, p: &BrittonElem, q: &BrittonElem) -> BrittonElem {
        // t^-i1 g1 t^j1 t^-i2 g2 t^j2, using t^k g = φ^k(g) t^k and g t^-k = t^-k φ^k(g).
        let merged = if p.j >= q.i {
            let k = p.j - q.i;
            BrittonElem {
                i: p.i,
                g: p.g.mul(&self.phi.apply_n(&q.g, k)),
                j: k + q.j,
            }
        } else {
            let k = q.i - p.j;
            BrittonElem {
                i: p.i + k,
                g: self.phi.apply_n(&p.g, k).mul(&q.g),
                j: q.j,
            }
        };
        self.reduce(merged)
    }

    fn inv(&self, p: &BrittonElem) -> BrittonElem {
        BrittonElem {
            i: p.j,
            g: p.g.inv(),
            j: p.i,
        }
    }

    fn relations(&self) -> Vec<Relation> {
        let x = Word::generator("x");
        let y = Word::generator("y");
        let t = Word::generator("t");
        vec![
            Relation::new("x y x^-1 = y^-1", y.conjugate_by(&x), y.inverse()),
            Relation::new(
                "t x t^-1 = x^e y^f",
                x.conjugate_by(&t),
                Word::new([("x", self.phi.e), ("y", self.phi.f)]),
            ),
            Relation::new(
                "t y t^-1 = y^d",
                y.conjugate_by(&t),
                Word::power_of("y", self.phi.d),
            ),
        ]
    }
}
