//! `< a, t, u | t a^m t^-1 = a^n, u a^p u^-1 = a^q, u t u^-1 = t a^e >`, with
//! normal form `a^x t^i u^j` computed by rewriting.

use std::fmt;

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::arith::{in_localized, is_unit_localized, radical, Rational};
use crate::presentation::Word;

use super::{names, unknown, FamilyError, GroupDescriptor, GroupModel, Relation};

/// `(x, i, j)` stands for `a^x t^i u^j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MetaH31Elem {
    pub x: Rational,
    pub i: i64,
    pub j: i64,
}

impl fmt::Display for MetaH31Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.i, self.j)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetaH31 {
    m: i64,
    n: i64,
    p: i64,
    q: i64,
    e: Rational,
    r: Rational,
    s: Rational,
    locus: u64,
}

enum Letter {
    A(Rational),
    T(i64),
    U(i64),
}

fn locus_of(values: &[i64]) -> Result<u64, FamilyError> {
    let mut d: u64 = 1;
    for v in values {
        let rv = radical(v.unsigned_abs());
        d = d
            .checked_mul(rv / d.gcd(&rv))
            .ok_or_else(|| FamilyError::Invalid("parameters too large".into()))?;
    }
    Ok(d)
}

impl MetaH31 {
    pub fn new(m: i64, n: i64, p: i64, q: i64, e: Rational) -> Result<MetaH31, FamilyError> {
        if m < 1 || p < 1 || n == 0 || q == 0 {
            return Err(FamilyError::Invalid(format!(
                "MetabelianH31 needs m, p ≥ 1 and n, q ≠ 0, got ({m}, {n}, {p}, {q})"
            )));
        }
        if m.gcd(&n) != 1 || p.gcd(&q) != 1 {
            return Err(FamilyError::Invalid(format!(
                "MetabelianH31 needs gcd(m,n) = gcd(p,q) = 1, got ({m}, {n}, {p}, {q})"
            )));
        }
        let locus = locus_of(&[m, n, p, q])?;
        if !in_localized(&e, locus)? {
            return Err(FamilyError::Invalid(format!("e = {e} is not in Z[1/{locus}]")));
        }
        Ok(MetaH31 {
            m,
            n,
            p,
            q,
            r: Rational::new(n, m),
            s: Rational::new(q, p),
            e,
            locus,
        })
    }

    pub fn params(&self) -> (i64, i64, i64, i64) {
        (self.m, self.n, self.p, self.q)
    }

    pub fn e(&self) -> &Rational {
        &self.e
    }

    /// `n/m`, the action of `t` on `a`.
    pub fn r(&self) -> &Rational {
        &self.r
    }

    /// `q/p`, the action of `u` on `a`.
    pub fn s(&self) -> &Rational {
        &self.s
    }

    /// Square-free radical `D` of `|mnpq|`.
    pub fn locus(&self) -> u64 {
        self.locus
    }

    pub fn descriptor(&self) -> GroupDescriptor {
        GroupDescriptor::MetabelianH31 {
            m: self.m,
            n: self.n,
            p: self.p,
            q: self.q,
            e: self.e.clone(),
        }
    }

    pub fn element(&self, x: Rational, i: i64, j: i64) -> Result<MetaH31Elem, FamilyError> {
        if !in_localized(&x, self.locus)? {
            return Err(FamilyError::NotMember(format!("a^{x}")));
        }
        Ok(MetaH31Elem { x, i, j })
    }

    /// The `a`-exponent produced by `u^σ t^τ → t^τ a^c u^σ`.
    fn swap_exponent(&self, sigma: i64, tau: i64) -> Rational {
        match (sigma > 0, tau > 0) {
            (true, true) => self.e.clone(),
            (true, false) => -(&self.r * &self.e),
            (false, true) => -(&self.e / &self.s),
            (false, false) => &self.r * &self.e / &self.s,
        }
    }

    /// Appends one letter to a normal form, moving it left into place.
    fn push(&self, g: &mut MetaH31Elem, letter: Letter) {
        match letter {
            Letter::A(y) => {
                let moved = self.r.pow(g.i) * self.s.pow(g.j) * y;
                g.x += &moved;
            }
            Letter::U(sigma) => g.j += sigma,
            Letter::T(tau) => {
                // u^j t^τ = t^τ a^c u^j, passing t^τ left through one u at a time.
                let sigma = g.j.signum();
                let step = if sigma > 0 { self.s.clone() } else { self.s.recip() };
                let c1 = self.swap_exponent(sigma, tau);
                let mut c = Rational::zero();
                let mut scale = Rational::one();
                for _ in 0..g.j.unsigned_abs() {
                    c += &(&scale * &c1);
                    scale *= &step;
                }
                g.i += tau;
                if !c.is_zero() {
                    let moved = self.r.pow(g.i) * c;
                    g.x += &moved;
                }
            }
        }
    }

    fn push_all(&self, g: &mut MetaH31Elem, h: &MetaH31Elem) {
        self.push(g, Letter::A(h.x.clone()));
        for _ in 0..h.i.unsigned_abs() {
            self.push(g, Letter::T(h.i.signum()));
        }
        for _ in 0..h.j.unsigned_abs() {
            self.push(g, Letter::U(h.j.signum()));
        }
    }
}

impl GroupModel for MetaH31 {
    type Elem = MetaH31Elem;

    fn generators(&self) -> Vec<String> {
        names(&["a", "t", "u"])
    }

    fn identity(&self) -> MetaH31Elem {
        MetaH31Elem {
            x: Rational::zero(),
            i: 0,
            j: 0,
        }
    }

    fn generator(&self, symbol: &str) -> Result<MetaH31Elem, FamilyError> {
        let (x, i, j) = match symbol {
            "a" => (1, 0, 0),
            "t" => (0, 1, 0),
            "u" => (0, 0, 1),
            _ => return Err(unknown(symbol)),
        };
        Ok(MetaH31Elem {
            x: Rational::from(x),
            i,
            j,
        })
    }

    fn mul(&self, g: &MetaH31Elem, h: &MetaH31Elem) -> MetaH31Elem {
        let mut out = g.clone();
        self.push_all(&mut out, h);
        out
    }

    fn inv(&self, g: &MetaH31Elem) -> MetaH31Elem {
        // (a^x t^i u^j)^-1 = u^-j t^-i a^-x
        let mut out = self.identity();
        for _ in 0..g.j.unsigned_abs() {
            self.push(&mut out, Letter::U(-g.j.signum()));
        }
        for _ in 0..g.i.unsigned_abs() {
            self.push(&mut out, Letter::T(-g.i.signum()));
        }
        self.push(&mut out, Letter::A(-&g.x));
        out
    }

    fn of_word(&self, w: &Word) -> Result<MetaH31Elem, FamilyError> {
        let mut out = self.identity();
        for (g, sign) in w.letters() {
            let letter = match g {
                "a" => Letter::A(Rational::from(sign)),
                "t" => Letter::T(sign),
                "u" => Letter::U(sign),
                _ => return Err(unknown(g)),
            };
            self.push(&mut out, letter);
        }
        Ok(out)
    }

    fn relations(&self) -> Vec<Relation> {
        let t = Word::generator("t");
        let u = Word::generator("u");
        let mut out = vec![
            Relation::new(
                "t a^m t^-1 = a^n",
                Word::power_of("a", self.m).conjugate_by(&t),
                Word::power_of("a", self.n),
            ),
            Relation::new(
                "u a^p u^-1 = a^q",
                Word::power_of("a", self.p).conjugate_by(&u),
                Word::power_of("a", self.q),
            ),
        ];
        // a^e is written as a conjugate t^k u^l a^c u^-l t^-k with c integral.
        if let Some(conj) = self.e_as_conjugate() {
            out.push(Relation::new("u t u^-1 = t a^e", t.conjugate_by(&u), t.mul(&conj)));
        }
        out
    }
}

impl MetaH31 {
    /// A word for `a^e` of the form `t^k u^l a^c u^-l t^-k`, when one exists
    /// with `|k|, |l| ≤ 32`.
    fn e_as_conjugate(&self) -> Option<Word> {
        let mut best: Option<(i64, i64, i64)> = None;
        for k in -32i64..=32 {
            for l in -32i64..=32 {
                let c = &self.e / &(self.r.pow(k) * self.s.pow(l));
                if let Some(c) = c.to_integer().and_then(|z| z.to_i64()) {
                    if best.is_none_or(|(bk, bl, _)| k.abs() + l.abs() < bk.abs() + bl.abs()) {
                        best = Some((k, l, c));
                    }
                }
            }
        }
        best.map(|(k, l, c)| {
            let g = Word::new([("t", k), ("u", l)]);
            Word::power_of("a", c).conjugate_by(&g)
        })
    }
}

/// An automorphism `a ↦ a^c`, `t ↦ t a^b` of `BS(1,n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BS1nAut {
    pub c: Rational,
    pub b: Rational,
}

/// `BS(1,n) ⋊_θ Z` as a member of the `MetabelianH31` family, with the
/// stable letter `u` acting by `a ↦ a^c`, `t ↦ t a^b`.
pub fn bs1n_ext_to_meta(n: i64, theta: &BS1nAut) -> Result<GroupDescriptor, FamilyError> {
    if n.unsigned_abs() < 2 {
        return Err(FamilyError::Invalid(format!("need |n| ≥ 2, got {n}")));
    }
    let d = radical(n.unsigned_abs());
    if !is_unit_localized(&theta.c, d)? {
        return Err(FamilyError::Invalid(format!(
            "{} is not a unit of Z[1/{n}]",
            theta.c
        )));
    }
    if !in_localized(&theta.b, d)? {
        return Err(FamilyError::Invalid(format!("{} is not in Z[1/{n}]", theta.b)));
    }
    let to_i64 = |z: &num_bigint::BigInt| {
        z.to_i64()
            .ok_or_else(|| FamilyError::Invalid("parameters too large".into()))
    };
    let desc = GroupDescriptor::MetabelianH31 {
        m: 1,
        n,
        p: to_i64(theta.c.denom())?,
        q: to_i64(theta.c.numer())?,
        e: theta.b.clone(),
    };
    desc.validate()?;
    Ok(desc)
}
