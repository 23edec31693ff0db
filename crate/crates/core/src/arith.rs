//! Exact rational arithmetic, localizations `Z[1/D]`, multiplicative rank of
//! subgroups of `Q^×`, and 2×2 rational matrices.
//!
//! Everything here is exact. Integrality questions are decided on reduced
//! fractions, never on approximations.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("matrix is singular")]
    Singular,
    #[error("zero has no multiplicative structure")]
    Zero,
    #[error("locus must be a positive integer, got {0}")]
    InvalidLocus(i128),
    #[error("{value} is not in Z[1/{locus}]")]
    NotLocalized { value: Rational, locus: u64 },
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("integer {0} is outside the supported factorization range")]
    TooLarge(BigInt),
}

/// A reduced fraction with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Rational {
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Rational {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Rational {
        Rational(BigRational::zero())
    }

    pub fn one() -> Rational {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Rational {
        Rational(self.0.recip())
    }

    /// Integer power; negative exponents invert. Panics on `0^k` with `k < 0`.
    pub fn pow(&self, k: i64) -> Rational {
        if k < 0 {
            assert!(!self.is_zero(), "negative power of zero");
        }
        let mag = u32::try_from(k.unsigned_abs()).expect("exponent out of range");
        let base_num = self.numer().pow(mag);
        let base_den = self.denom().pow(mag);
        if k >= 0 {
            Rational::new(base_num, base_den)
        } else {
            Rational::new(base_den, base_num)
        }
    }

    /// The integer value, if this rational is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.numer().clone())
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.to_integer().and_then(|n| n.to_i64())
    }

    /// `p`-adic valuation; `None` for zero.
    pub fn valuation(&self, p: u64) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(int_valuation(self.numer(), p) as i64 - int_valuation(self.denom(), p) as i64)
    }
}

fn int_valuation(n: &BigInt, p: u64) -> u32 {
    debug_assert!(p >= 2);
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    while !n.is_zero() && (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Rational, ArithError> {
        let err = || ArithError::Parse(s.to_string());
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| err())?;
        let den: BigInt = den.parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        Ok(Rational::new(num, den))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Accepts `"p/q"` strings and plain integers.
impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = Rational;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational such as \"-3/4\" or an integer")
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Rational, E> {
                v.parse().map_err(E::custom)
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<Rational, E> {
                Ok(Rational::from_int(v))
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Rational, E> {
                Ok(Rational::from_int(v))
            }
        }
        d.deserialize_any(V)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Rational {
        Rational::from_int(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Rational {
        Rational::from_int(n)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$m(&rhs.0))
            }
        }
        impl<'a> $tr<Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational((&self.0).$m(rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$m(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// Prime factorization of a positive integer by trial division.
pub fn factorize(n: &BigUint) -> Result<Vec<(u64, u32)>, ArithError> {
    let mut n = n
        .to_u128()
        .ok_or_else(|| ArithError::TooLarge(BigInt::from(n.clone())))?;
    let mut out = Vec::new();
    if n <= 1 {
        return Ok(out);
    }
    let mut p: u128 = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        let p = u64::try_from(n).map_err(|_| ArithError::TooLarge(BigInt::from(n)))?;
        out.push((p, 1));
    }
    Ok(out)
}

/// Distinct primes dividing `|n|`.
pub fn prime_support(n: &BigInt) -> Result<Vec<u64>, ArithError> {
    Ok(factorize(n.magnitude())?.into_iter().map(|(p, _)| p).collect())
}

/// Square-free radical of a positive integer.
pub fn radical(n: u64) -> u64 {
    factorize(&BigUint::from(n))
        .expect("u64 always factors")
        .into_iter()
        .map(|(p, _)| p)
        .product::<u64>()
        .max(1)
}

/// Strips every factor of `n` that shares a prime with `d`.
fn strip_support(n: &BigInt, d: u64) -> BigInt {
    let d = BigInt::from(d);
    let mut n = n.abs();
    loop {
        let g = n.gcd(&d);
        if g.is_one() {
            return n;
        }
        while (&n % &g).is_zero() {
            n /= &g;
        }
    }
}

/// Whether `x ∈ Z[1/d]`.
pub fn in_localized(x: &Rational, d: u64) -> Result<bool, ArithError> {
    if d == 0 {
        return Err(ArithError::InvalidLocus(0));
    }
    Ok(strip_support(x.denom(), d).is_one())
}

/// Whether `x` is a unit of `Z[1/d]`, i.e. `±` a product of powers of primes dividing `d`.
pub fn is_unit_localized(x: &Rational, d: u64) -> Result<bool, ArithError> {
    if d == 0 {
        return Err(ArithError::InvalidLocus(0));
    }
    if x.is_zero() {
        return Err(ArithError::Zero);
    }
    Ok(strip_support(x.numer(), d).is_one() && strip_support(x.denom(), d).is_one())
}

/// An element of `Z[1/D]`, with `D` stored square-free.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct LocalRational {
    value: Rational,
    locus: u64,
}

impl LocalRational {
    pub fn new(value: Rational, locus: u64) -> Result<LocalRational, ArithError> {
        if locus == 0 {
            return Err(ArithError::InvalidLocus(0));
        }
        let locus = radical(locus);
        if !in_localized(&value, locus)? {
            return Err(ArithError::NotLocalized { value, locus });
        }
        Ok(LocalRational { value, locus })
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn locus(&self) -> u64 {
        self.locus
    }

    pub fn into_value(self) -> Rational {
        self.value
    }
}

/// A nonzero rational written multiplicatively as a sign and prime exponents.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PrimeVector {
    pub negative: bool,
    pub exponents: BTreeMap<u64, i64>,
}

impl PrimeVector {
    pub fn of(x: &Rational) -> Result<PrimeVector, ArithError> {
        if x.is_zero() {
            return Err(ArithError::Zero);
        }
        let mut exponents = BTreeMap::new();
        for (p, e) in factorize(x.numer().magnitude())? {
            exponents.insert(p, e as i64);
        }
        for (p, e) in factorize(x.denom().magnitude())? {
            exponents.insert(p, -(e as i64));
        }
        Ok(PrimeVector {
            negative: x.is_negative(),
            exponents,
        })
    }

    pub fn exponent(&self, p: u64) -> i64 {
        self.exponents.get(&p).copied().unwrap_or(0)
    }
}

/// Rank data of the subgroup of `Q^×` generated by a list of ratios.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultRank {
    pub rank: usize,
    pub has_minus_one_torsion: bool,
    /// Basis of the integer relation lattice `{c : Π ratio_i^{c_i} = ±1}`.
    pub relations: Vec<Vec<BigInt>>,
}

/// Rank of `⟨ratios⟩ ≤ Q^×` and whether it contains `-1`.
pub fn mult_rank(ratios: &[Rational]) -> Result<MultRank, ArithError> {
    let vectors = ratios
        .iter()
        .map(PrimeVector::of)
        .collect::<Result<Vec<_>, _>>()?;
    let primes: Vec<u64> = {
        let mut ps: Vec<u64> = vectors
            .iter()
            .flat_map(|v| v.exponents.keys().copied())
            .collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    };
    let k = vectors.len();
    // Row i: [exponents of ratio i | e_i]; integer row operations keep the
    // right block unimodular, so zero left rows span the relation lattice.
    let mut rows: Vec<(Vec<BigInt>, Vec<BigInt>)> = vectors
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let left = primes.iter().map(|&p| BigInt::from(v.exponent(p))).collect();
            let right = (0..k).map(|j| BigInt::from((i == j) as i64)).collect();
            (left, right)
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..primes.len() {
        loop {
            let nonzero: Vec<usize> = (pivot_row..k)
                .filter(|&r| !rows[r].0[col].is_zero())
                .collect();
            if nonzero.is_empty() {
                break;
            }
            let best = *nonzero
                .iter()
                .min_by_key(|&&r| rows[r].0[col].abs())
                .unwrap();
            rows.swap(pivot_row, best);
            let mut done = true;
            for r in pivot_row + 1..k {
                if rows[r].0[col].is_zero() {
                    continue;
                }
                let q = rows[r].0[col].div_floor(&rows[pivot_row].0[col]);
                let (pl, pr) = rows[pivot_row].clone();
                for (x, y) in rows[r].0.iter_mut().zip(&pl) {
                    *x -= &q * y;
                }
                for (x, y) in rows[r].1.iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
                if !rows[r].0[col].is_zero() {
                    done = false;
                }
            }
            if done {
                pivot_row += 1;
                break;
            }
        }
        if pivot_row == k {
            break;
        }
    }
    let relations: Vec<Vec<BigInt>> = rows[pivot_row..].iter().map(|(_, r)| r.clone()).collect();
    let has_minus_one_torsion = relations.iter().any(|c| {
        let odd = c
            .iter()
            .zip(&vectors)
            .filter(|(_, v)| v.negative)
            .fold(BigInt::zero(), |acc, (ci, _)| acc + ci);
        odd.is_odd()
    });
    Ok(MultRank {
        rank: pivot_row,
        has_minus_one_torsion,
        relations,
    })
}

/// Positive generator of the cyclic subgroup `⟨xs⟩ ≤ (Q, +)`; zero if all inputs vanish.
pub fn cyclic_generator(xs: &[Rational]) -> Rational {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for x in xs.iter().filter(|x| !x.is_zero()) {
        num = num.gcd(x.numer());
        den = den.lcm(x.denom());
    }
    if num.is_zero() {
        Rational::zero()
    } else {
        Rational::new(num, den)
    }
}

pub type Vec2Q = [Rational; 2];

/// A 2×2 rational matrix `[[a, b], [c, d]]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat2Q {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl Mat2Q {
    pub fn new(
        a: impl Into<Rational>,
        b: impl Into<Rational>,
        c: impl Into<Rational>,
        d: impl Into<Rational>,
    ) -> Mat2Q {
        Mat2Q {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Mat2Q {
        Mat2Q::new(1, 0, 0, 1)
    }

    pub fn scalar(x: Rational) -> Mat2Q {
        Mat2Q::new(x.clone(), 0, 0, x)
    }

    /// Matrix with columns `u` and `v`.
    pub fn from_columns(u: &Vec2Q, v: &Vec2Q) -> Mat2Q {
        Mat2Q::new(u[0].clone(), v[0].clone(), u[1].clone(), v[1].clone())
    }

    pub fn entries(&self) -> [&Rational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self) -> Rational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> Rational {
        &self.a + &self.d
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat2Q::identity()
    }

    pub fn is_scalar(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    pub fn is_integral(&self) -> bool {
        self.entries().iter().all(|x| x.is_integer())
    }

    pub fn inverse(&self) -> Result<Mat2Q, ArithError> {
        let det = self.det();
        if det.is_zero() {
            return Err(ArithError::Singular);
        }
        Ok(Mat2Q {
            a: &self.d / &det,
            b: -(&self.b / &det),
            c: -(&self.c / &det),
            d: &self.a / &det,
        })
    }

    pub fn mul(&self, o: &Mat2Q) -> Mat2Q {
        Mat2Q {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn apply(&self, v: &Vec2Q) -> Vec2Q {
        [
            &self.a * &v[0] + &self.b * &v[1],
            &self.c * &v[0] + &self.d * &v[1],
        ]
    }

    /// `M^k`; negative powers require an invertible matrix.
    pub fn pow(&self, k: i64) -> Result<Mat2Q, ArithError> {
        let mut base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Mat2Q::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        Ok(acc)
    }

    fn require_invertible(&self) -> Result<(), ArithError> {
        if self.det().is_zero() {
            Err(ArithError::Singular)
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Mat2Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for Mat2Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Mat2Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.entries().serialize(s)
    }
}

/// `"[[a, b], [c, d]]"`, row-major.
impl FromStr for Mat2Q {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Mat2Q, ArithError> {
        let err = || ArithError::Parse(s.to_string());
        let inner = s.trim().strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(err)?;
        let mut rows = Vec::new();
        for part in inner.split(']') {
            let part = part.trim().trim_start_matches(',').trim();
            if part.is_empty() {
                continue;
            }
            let row = part.strip_prefix('[').ok_or_else(err)?;
            let xs = row.split(',').map(str::parse).collect::<Result<Vec<Rational>, _>>()?;
            rows.push(xs);
        }
        match <[Vec<Rational>; 2]>::try_from(rows) {
            Ok([r1, r2]) if r1.len() == 2 && r2.len() == 2 => {
                let [a, b] = <[Rational; 2]>::try_from(r1).map_err(|_| err())?;
                let [c, d] = <[Rational; 2]>::try_from(r2).map_err(|_| err())?;
                Ok(Mat2Q { a, b, c, d })
            }
            _ => Err(err()),
        }
    }
}

/// Accepts a flat `[a, b, c, d]` array or a `"[[a, b], [c, d]]"` string.
impl<'de> Deserialize<'de> for Mat2Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Mat2Q, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Flat([Rational; 4]),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Flat([a, b, c, d]) => Ok(Mat2Q { a, b, c, d }),
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// `M ∈ GL(2,Q)` is conjugate to an integral matrix iff its determinant and trace are integers.
pub fn conjugate_to_integral(m: &Mat2Q) -> Result<bool, ArithError> {
    m.require_invertible()?;
    Ok(m.det().is_integer() && m.trace().is_integer())
}

/// Returns `(P, N)` with `P⁻¹ M P = N` integral, when such a conjugation exists.
///
/// For non-scalar `M` the columns of `P` are a non-eigenvector `x` and `Mx`;
/// by Cayley–Hamilton `N` is then the companion matrix `[[0, -det], [1, tr]]`.
pub fn integralize(m: &Mat2Q) -> Result<Option<(Mat2Q, Mat2Q)>, ArithError> {
    if !conjugate_to_integral(m)? {
        return Ok(None);
    }
    if m.is_scalar() {
        return Ok(Some((Mat2Q::identity(), m.clone())));
    }
    let candidates: [Vec2Q; 3] = [
        [Rational::one(), Rational::zero()],
        [Rational::zero(), Rational::one()],
        [Rational::one(), Rational::one()],
    ];
    for x in candidates {
        let mx = m.apply(&x);
        let p = Mat2Q::from_columns(&x, &mx);
        if p.det().is_zero() {
            continue;
        }
        let n = p.inverse()?.mul(m).mul(&p);
        debug_assert!(n.is_integral());
        return Ok(Some((p, n)));
    }
    unreachable!("a non-scalar 2x2 matrix has a non-eigenvector among e1, e2, e1+e2")
}

/// `det M = ±1` and `tr M ∈ Z`: the conjugacy class meets `GL(2,Z)`.
pub fn is_unimodular_integral_class(m: &Mat2Q) -> Result<bool, ArithError> {
    m.require_invertible()?;
    let det = m.det();
    Ok((det.is_one() || (-&det).is_one()) && m.trace().is_integer())
}

/// Both eigenvalues of `M` are roots of unity (`M` has a unipotent power).
pub fn is_virtually_unipotent(m: &Mat2Q) -> bool {
    let det = m.det();
    let tr = m.trace();
    if det.is_one() {
        tr.to_i64().is_some_and(|t| (-2..=2).contains(&t))
    } else if (-&det).is_one() {
        tr.is_zero()
    } else {
        false
    }
}

/// Whether `M` has finite multiplicative order.
pub fn has_finite_order(m: &Mat2Q) -> bool {
    if !is_virtually_unipotent(m) {
        return false;
    }
    // elements of finite order in GL(2,Q) have order 1, 2, 3, 4 or 6
    (1..=12).any(|k| m.pow(k).map(|p| p.is_identity()).unwrap_or(false))
}

#[cfg(test)]
mod tests {

    #[test]
    fn matrix_text_and_serde_forms() {
        let m: Mat2Q = "[[0, -2], [1, 1/2]]".parse().unwrap();
        assert_eq!(m, Mat2Q::new(0, -2, 1, Rational::new(1, 2)));
        assert!("[[0, -2]]".parse::<Mat2Q>().is_err());
        assert!("[[0, -2], [1]]".parse::<Mat2Q>().is_err());
        let flat: Mat2Q = serde_json::from_str(r#"["0", -2, "1", "1/2"]"#).unwrap();
        assert_eq!(flat, m);
        let text: Mat2Q = serde_json::from_str(r#""[[0,-2],[1,1/2]]""#).unwrap();
        assert_eq!(text, m);
        let x: Rational = serde_json::from_str("-3").unwrap();
        assert_eq!(x, Rational::from_int(-3));
    }
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn rational_text_form() {
        assert_eq!(q("6/4").to_string(), "3/2");
        assert_eq!(q("-4/2").to_string(), "-2");
        assert_eq!(q("0/7"), Rational::zero());
        assert_eq!(q("3/-6").to_string(), "-1/2");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn localization_membership() {
        assert!(in_localized(&q("3/8"), 2).unwrap());
        assert!(!in_localized(&q("1/3"), 2).unwrap());
        assert!(in_localized(&q("7"), 1).unwrap());
        assert!(in_localized(&q("5/36"), 6).unwrap());
        assert!(in_localized(&q("5/36"), 12).unwrap());
        assert!(in_localized(&q("1"), 0).is_err());
    }

    #[test]
    fn localized_units() {
        assert!(is_unit_localized(&q("2/3"), 6).unwrap());
        assert!(!is_unit_localized(&q("5"), 6).unwrap());
        assert!(is_unit_localized(&q("-8/9"), 6).unwrap());
        assert!(is_unit_localized(&q("-1"), 1).unwrap());
        assert_eq!(is_unit_localized(&q("0"), 6), Err(ArithError::Zero));
    }

    #[test]
    fn local_rational_normalizes_locus() {
        let x = LocalRational::new(q("1/4"), 12).unwrap();
        assert_eq!(x.locus(), 6);
        assert!(LocalRational::new(q("1/5"), 12).is_err());
    }

    #[test]
    fn radicals() {
        assert_eq!(radical(1), 1);
        assert_eq!(radical(72), 6);
        assert_eq!(radical(97), 97);
    }

    #[test]
    fn mult_rank_examples() {
        let r = mult_rank(&[q("2"), q("3")]).unwrap();
        assert_eq!((r.rank, r.has_minus_one_torsion), (2, false));
        let r = mult_rank(&[q("4"), q("8")]).unwrap();
        assert_eq!((r.rank, r.has_minus_one_torsion), (1, false));
        let r = mult_rank(&[q("2"), q("-2")]).unwrap();
        assert_eq!((r.rank, r.has_minus_one_torsion), (1, true));
        let r = mult_rank(&[q("-1")]).unwrap();
        assert_eq!((r.rank, r.has_minus_one_torsion), (0, true));
        let r = mult_rank(&[q("-4"), q("8")]).unwrap();
        // (-4)^3 / 8^2 = -1
        assert_eq!((r.rank, r.has_minus_one_torsion), (1, true));
        let r = mult_rank(&[q("4"), q("-8")]).unwrap();
        // 4^3 (-8)^-2 = 1 generates the relations; -1 is not reached
        assert_eq!((r.rank, r.has_minus_one_torsion), (1, false));
        assert!(mult_rank(&[q("0")]).is_err());
    }

    /// Brute-force relation search with exponents in [-6, 6].
    fn brute_minus_one(ratios: &[Rational]) -> bool {
        fn rec(ratios: &[Rational], acc: Rational, any: bool) -> bool {
            match ratios.split_first() {
                None => any && acc == Rational::from_int(-1),
                Some((r, rest)) => (-6..=6).any(|e| rec(rest, &acc * r.pow(e), any || e != 0)),
            }
        }
        rec(ratios, Rational::one(), false)
    }

    #[test]
    fn minus_one_matches_bruteforce() {
        for ratios in [
            vec![q("2"), q("-2")],
            vec![q("2"), q("3")],
            vec![q("-4"), q("8")],
            vec![q("4"), q("-8")],
            vec![q("-3/2"), q("9/4")],
            vec![q("-3/2"), q("-9/4")],
        ] {
            let r = mult_rank(&ratios).unwrap();
            assert_eq!(r.has_minus_one_torsion, brute_minus_one(&ratios), "{ratios:?}");
        }
    }

    #[test]
    fn cyclic_generator_examples() {
        // a/2 + b/3 over small integers: smallest positive value
        let brute = (-6i64..=6)
            .flat_map(|a| (-6i64..=6).map(move |b| q(&format!("{a}/2")) + q(&format!("{b}/3"))))
            .filter(|x| !x.is_zero() && !x.is_negative())
            .min()
            .unwrap();
        assert_eq!(brute, q("1/6"));
        assert_eq!(cyclic_generator(&[q("1/2"), q("1/3")]), q("1/6"));
        assert_eq!(cyclic_generator(&[q("2"), q("3")]), q("1"));
        assert_eq!(cyclic_generator(&[q("0")]), q("0"));
        assert_eq!(cyclic_generator(&[q("-4/3"), q("2/9")]), q("2/9"));
    }

    #[test]
    fn integral_conjugacy_examples() {
        assert!(conjugate_to_integral(&Mat2Q::new(0, -1, 1, 1)).unwrap());
        let m = Mat2Q::new(q("1/2"), q("-3/4"), 1, q("1/2"));
        assert!(conjugate_to_integral(&m).unwrap());
        let p = Mat2Q::new(1, q("1/2"), 0, 1);
        let back = p.mul(&Mat2Q::new(0, -1, 1, 1)).mul(&p.inverse().unwrap());
        assert_eq!(back, m);
        assert!(!conjugate_to_integral(&Mat2Q::new(q("1/2"), 0, 0, 1)).unwrap());
        assert_eq!(
            conjugate_to_integral(&Mat2Q::new(1, 2, 2, 4)),
            Err(ArithError::Singular)
        );
    }

    #[test]
    fn integralize_examples() {
        let m = Mat2Q::new(q("1/2"), q("-3/4"), 1, q("1/2"));
        let (p, n) = integralize(&m).unwrap().unwrap();
        assert_eq!(p, Mat2Q::new(1, q("1/2"), 0, 1));
        assert_eq!(p.inverse().unwrap().mul(&m).mul(&p), n);
        assert!(n.is_integral());
        assert_eq!(
            integralize(&Mat2Q::identity()).unwrap(),
            Some((Mat2Q::identity(), Mat2Q::identity()))
        );
        assert_eq!(integralize(&Mat2Q::new(q("1/2"), 0, 0, 1)).unwrap(), None);
        // diagonal, non-scalar: both coordinate vectors are eigenvectors
        let m = Mat2Q::new(1, 0, 0, 2);
        let (p, n) = integralize(&m).unwrap().unwrap();
        assert_eq!(p.inverse().unwrap().mul(&m).mul(&p), n);
        assert!(n.is_integral());
    }

    #[test]
    fn unimodular_class_examples() {
        assert!(is_unimodular_integral_class(&Mat2Q::new(2, 1, 1, 1)).unwrap());
        assert!(!is_unimodular_integral_class(&Mat2Q::new(2, 0, 0, 1)).unwrap());
        assert!(!is_unimodular_integral_class(&Mat2Q::new(q("1/2"), 0, 0, 2)).unwrap());
    }

    #[test]
    fn finite_order_detection() {
        assert!(has_finite_order(&Mat2Q::new(0, -1, 1, 1)));
        assert!(has_finite_order(&Mat2Q::new(1, 0, 0, -1)));
        assert!(!has_finite_order(&Mat2Q::new(1, 1, 0, 1)));
        assert!(is_virtually_unipotent(&Mat2Q::new(1, 1, 0, 1)));
        assert!(!is_virtually_unipotent(&Mat2Q::new(2, 1, 1, 1)));
    }

    #[test]
    fn matrix_powers() {
        let m = Mat2Q::new(0, -2, 1, 0);
        assert_eq!(m.pow(2).unwrap(), Mat2Q::scalar(q("-2")));
        assert_eq!(m.pow(-2).unwrap(), Mat2Q::scalar(q("-1/2")));
        assert_eq!(m.pow(3).unwrap().mul(&m.pow(-3).unwrap()), Mat2Q::identity());
    }
}
