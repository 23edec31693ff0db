//! `BS(m,n)/⟨⟨a⟩⟩''`, realized as `Z[1/mn] ⋊ Z` with `t` acting by `n/m`.

use std::fmt;

use num_integer::Integer;

use crate::arith::{in_localized, radical, Rational};
use crate::presentation::Word;

use super::{names, unknown, FamilyError, GroupModel, Relation};

/// `(u, k)` stands for `a^u t^k`, with `u ∈ Z[1/mn]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BSbarElem {
    pub u: Rational,
    pub k: i64,
}

impl fmt::Display for BSbarElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BSbar {
    m: i64,
    n: i64,
    ratio: Rational,
    locus: u64,
}

impl BSbar {
    pub fn new(m: i64, n: i64) -> Result<BSbar, FamilyError> {
        if m < 1 || n == 0 {
            return Err(FamilyError::Invalid(format!(
                "BSbar needs m ≥ 1 and n ≠ 0, got m={m}, n={n}"
            )));
        }
        if m.gcd(&n) != 1 {
            return Err(FamilyError::Invalid(format!(
                "BSbar needs gcd(m,n) = 1, got m={m}, n={n}"
            )));
        }
        let locus = radical((m as i128 * n as i128).unsigned_abs() as u64);
        Ok(BSbar {
            m,
            n,
            ratio: Rational::new(n, m),
            locus,
        })
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    /// `n/m`, the action of `t` on the radical.
    pub fn ratio(&self) -> &Rational {
        &self.ratio
    }

    /// Square-free radical of `|mn|`.
    pub fn locus(&self) -> u64 {
        self.locus
    }

    pub fn element(&self, u: Rational, k: i64) -> Result<BSbarElem, FamilyError> {
        if !in_localized(&u, self.locus)? {
            return Err(FamilyError::NotMember(format!("a^{u}")));
        }
        Ok(BSbarElem { u, k })
    }
}

impl GroupModel for BSbar {
    type Elem = BSbarElem;

    fn generators(&self) -> Vec<String> {
        names(&["a", "t"])
    }

    fn identity(&self) -> BSbarElem {
        BSbarElem {
            u: Rational::zero(),
            k: 0,
        }
    }

    fn generator(&self, symbol: &str) -> Result<BSbarElem, FamilyError> {
        match symbol {
            "a" => Ok(BSbarElem {
                u: Rational::one(),
                k: 0,
            }),
            "t" => Ok(BSbarElem {
                u: Rational::zero(),
                k: 1,
            }),
            _ => Err(unknown(symbol)),
        }
    }

    fn mul(&self, g: &BSbarElem, h: &BSbarElem) -> BSbarElem {
        BSbarElem {
            u: &g.u + &(self.ratio.pow(g.k) * &h.u),
            k: g.k + h.k,
        }
    }

    fn inv(&self, g: &BSbarElem) -> BSbarElem {
        BSbarElem {
            u: -(self.ratio.pow(-g.k) * &g.u),
            k: -g.k,
        }
    }

    fn relations(&self) -> Vec<Relation> {
        let a = Word::generator("a");
        let t = Word::generator("t");
        let ta = a.conjugate_by(&t);
        vec![
            Relation::new(
                "t a^m t^-1 = a^n",
                Word::power_of("a", self.m).conjugate_by(&t),
                Word::power_of("a", self.n),
            ),
            Relation::new("a (t a t^-1) = (t a t^-1) a", a.mul(&ta), ta.mul(&a)),
        ]
    }
}
