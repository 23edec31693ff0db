//! `L ⋊_M Z`, where `L ⊂ Q^2` is the smallest `M^{±1}`-invariant subgroup
//! containing `Z^2`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::arith::{prime_support, ArithError, Mat2Q, Rational, Vec2Q};
use crate::presentation::Word;

use super::{names, unknown, FamilyError, GroupModel, Relation};

/// `(v, k)` stands for `v · t^k` with `v ∈ L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeElem {
    pub v: Vec2Q,
    pub k: i64,
}

impl fmt::Display for LatticeElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({}, {}), {})", self.v[0], self.v[1], self.k)
    }
}

/// Extended gcd of two rationals: `g = u x + w y` with `u, w` integers and
/// `g ≥ 0` generating `xZ + yZ`.
fn rat_egcd(x: &Rational, y: &Rational) -> (Rational, BigInt, BigInt) {
    let den = x.denom().lcm(y.denom());
    let xi = x.numer() * (&den / x.denom());
    let yi = y.numer() * (&den / y.denom());
    let eg = xi.extended_gcd(&yi);
    let (mut g, mut u, mut w) = (eg.gcd, eg.x, eg.y);
    if g.is_negative() {
        g = -g;
        u = -u;
        w = -w;
    }
    (Rational::new(g, den), u, w)
}

fn scale(k: &BigInt, x: &Rational) -> Rational {
    Rational::from(k.clone()) * x
}

/// A full-rank subgroup of `Q^2` in Hermite normal form: rows `(a, b)` and
/// `(0, c)` with `a, c > 0` and `0 ≤ b < c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice2 {
    a: Rational,
    b: Rational,
    c: Rational,
}

impl Lattice2 {
    pub fn standard() -> Lattice2 {
        Lattice2 {
            a: Rational::one(),
            b: Rational::zero(),
            c: Rational::one(),
        }
    }

    pub fn basis(&self) -> [Vec2Q; 2] {
        [
            [self.a.clone(), self.b.clone()],
            [Rational::zero(), self.c.clone()],
        ]
    }

    pub fn insert(&mut self, v: &Vec2Q) {
        let (g, u, w) = rat_egcd(&self.a, &v[0]);
        // [[u, w], [-x/g, a/g]] is unimodular.
        let xg = (&v[0] / &g).to_integer().expect("g divides x");
        let ag = (&self.a / &g).to_integer().expect("g divides a");
        let new_b = scale(&u, &self.b) + scale(&w, &v[1]);
        let z = scale(&ag, &v[1]) - scale(&xg, &self.b);
        let (c, _, _) = rat_egcd(&self.c, &z);
        self.a = g;
        self.c = c;
        self.b = new_b;
        self.reduce();
    }

    fn reduce(&mut self) {
        let q = (&self.b / &self.c).numer().div_floor((&self.b / &self.c).denom());
        self.b = &self.b - &scale(&q, &self.c);
    }

    pub fn contains(&self, v: &Vec2Q) -> bool {
        let k1 = &v[0] / &self.a;
        if !k1.is_integer() {
            return false;
        }
        ((&v[1] - &(&k1 * &self.b)) / &self.c).is_integer()
    }

    /// Index-free comparison: `self ⊆ other`.
    pub fn is_sublattice_of(&self, other: &Lattice2) -> bool {
        self.basis().iter().all(|r| other.contains(r))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeByZ {
    m: Mat2Q,
    m_inv: Mat2Q,
    /// Primes that may occur in denominators of `L`.
    bad_primes: Vec<u64>,
    /// `L` itself when it is finitely generated.
    closed: Option<Lattice2>,
}

const STABILIZE_LIMIT: u64 = 24;

impl LatticeByZ {
    pub fn new(m: Mat2Q) -> Result<LatticeByZ, FamilyError> {
        let m_inv = m.inverse()?;
        let mut primes = BTreeSet::new();
        for x in m.entries().into_iter().chain(m_inv.entries()) {
            primes.extend(prime_support(x.denom())?);
        }
        let mut out = LatticeByZ {
            m,
            m_inv,
            bad_primes: primes.into_iter().collect(),
            closed: None,
        };
        out.closed = out.try_close();
        Ok(out)
    }

    pub fn matrix(&self) -> &Mat2Q {
        &self.m
    }

    pub fn matrix_inverse(&self) -> &Mat2Q {
        &self.m_inv
    }

    /// `L` when it is finitely generated, which happens exactly when it is
    /// reached by some finite `L_K`.
    pub fn finitely_generated_lattice(&self) -> Option<&Lattice2> {
        self.closed.as_ref()
    }

    pub fn bad_primes(&self) -> &[u64] {
        &self.bad_primes
    }

    fn try_close(&self) -> Option<Lattice2> {
        let mut prev = self.lattice_at(0);
        for k in 1..=STABILIZE_LIMIT {
            let next = self.lattice_at(k);
            if next == prev {
                return Some(prev);
            }
            prev = next;
        }
        None
    }

    /// `L_K`, spanned by `M^k e_i` for `|k| ≤ K`.
    pub fn lattice_at(&self, cutoff: u64) -> Lattice2 {
        let mut lat = Lattice2::standard();
        let mut fwd = Mat2Q::identity();
        let mut back = Mat2Q::identity();
        for _ in 0..cutoff {
            fwd = self.m.mul(&fwd);
            back = self.m_inv.mul(&back);
            for mat in [&fwd, &back] {
                lat.insert(&[mat.a.clone(), mat.c.clone()]);
                lat.insert(&[mat.b.clone(), mat.d.clone()]);
            }
        }
        lat
    }

    /// A cutoff `K` with `v ∈ L ⇔ v ∈ L_K`.
    pub fn cutoff_for(&self, v: &Vec2Q) -> Result<u64, ArithError> {
        let mut a = 0i64;
        for x in v {
            for &p in &self.bad_primes {
                if let Some(val) = x.valuation(p) {
                    a = a.max(-val);
                }
            }
        }
        let mut s = 0i64;
        for x in self.m.entries().into_iter().chain(self.m_inv.entries()) {
            for &p in &self.bad_primes {
                if let Some(val) = x.valuation(p) {
                    s = s.max(val.abs());
                }
            }
        }
        Ok((2 * a + 2 * s + 2) as u64)
    }

    pub fn contains(&self, v: &Vec2Q) -> Result<bool, FamilyError> {
        if let Some(l) = &self.closed {
            return Ok(l.contains(v));
        }
        for x in v {
            for p in prime_support(x.denom())? {
                if !self.bad_primes.contains(&p) {
                    return Ok(false);
                }
            }
        }
        let k = self.cutoff_for(v)?;
        if k > 4096 {
            return Err(FamilyError::ResourceBound(format!(
                "lattice cutoff {k} is too large"
            )));
        }
        Ok(self.lattice_at(k).contains(v))
    }

    pub fn element(&self, v: Vec2Q, k: i64) -> Result<LatticeElem, FamilyError> {
        if !self.contains(&v)? {
            return Err(FamilyError::NotMember(format!("({}, {})", v[0], v[1])));
        }
        Ok(LatticeElem { v, k })
    }

    fn power(&self, k: i64) -> Mat2Q {
        self.m.pow(k).expect("M is invertible")
    }

    pub fn mul_checked(
        &self,
        g: &LatticeElem,
        h: &LatticeElem,
    ) -> Result<LatticeElem, FamilyError> {
        for x in [g, h] {
            if !self.contains(&x.v)? {
                return Err(FamilyError::NotMember(x.to_string()));
            }
        }
        Ok(self.mul(g, h))
    }

    fn matrix_words(&self, mat: &Mat2Q, conj: &Word) -> Option<Vec<Relation>> {
        if !mat.is_integral() {
            return None;
        }
        let int = |x: &Rational| x.to_integer().and_then(|z| z.to_i64());
        let img = |p: &Rational, q: &Rational| -> Option<Word> {
            Some(Word::new([("x", int(p)?), ("y", int(q)?)]))
        };
        let ix = img(&mat.a, &mat.c)?;
        let iy = img(&mat.b, &mat.d)?;
        Some(vec![
            Relation::new(
                format!("{} x {} = {}", conj, conj.inverse(), ix),
                Word::generator("x").conjugate_by(conj),
                ix,
            ),
            Relation::new(
                format!("{} y {} = {}", conj, conj.inverse(), iy),
                Word::generator("y").conjugate_by(conj),
                iy,
            ),
        ])
    }
}

impl GroupModel for LatticeByZ {
    type Elem = LatticeElem;

    fn generators(&self) -> Vec<String> {
        names(&["x", "y", "t"])
    }

    fn identity(&self) -> LatticeElem {
        LatticeElem {
            v: [Rational::zero(), Rational::zero()],
            k: 0,
        }
    }

    fn generator(&self, symbol: &str) -> Result<LatticeElem, FamilyError> {
        let (v, k) = match symbol {
            "x" => ([1, 0], 0),
            "y" => ([0, 1], 0),
            "t" => ([0, 0], 1),
            _ => return Err(unknown(symbol)),
        };
        Ok(LatticeElem {
            v: [Rational::from(v[0]), Rational::from(v[1])],
            k,
        })
    }

    fn mul(&self, g: &LatticeElem, h: &LatticeElem) -> LatticeElem {
        let w = self.power(g.k).apply(&h.v);
        LatticeElem {
            v: [&g.v[0] + &w[0], &g.v[1] + &w[1]],
            k: g.k + h.k,
        }
    }

    fn inv(&self, g: &LatticeElem) -> LatticeElem {
        let w = self.power(-g.k).apply(&g.v);
        LatticeElem {
            v: [-&w[0], -&w[1]],
            k: -g.k,
        }
    }

    fn relations(&self) -> Vec<Relation> {
        let x = Word::generator("x");
        let y = Word::generator("y");
        let t = Word::generator("t");
        let mut out = vec![Relation::new("x y = y x", x.mul(&y), y.mul(&x))];
        if let Some(r) = self.matrix_words(&self.m, &t) {
            out.extend(r);
        }
        if let Some(r) = self.matrix_words(&self.m_inv, &t.inverse()) {
            out.extend(r);
        }
        out
    }
}
