//! Faithful representations by 3×3 rational matrices together with exponent
//! counters, evaluated independently of the family normal forms.

use std::collections::HashMap;

use thiserror::Error;

use crate::arith::{Mat2Q, Rational};
use crate::families::{FamilyError, GroupModel, Model};
use crate::presentation::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat3([[Rational; 3]; 3]);

impl Mat3 {
    pub fn identity() -> Mat3 {
        Mat3::from_fn(|i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    fn from_fn(f: impl Fn(usize, usize) -> Rational) -> Mat3 {
        Mat3(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
    }

    /// `[[a, b, tx], [c, d, ty], [0, 0, 1]]`.
    pub fn affine(m: &Mat2Q, t: [Rational; 2]) -> Mat3 {
        let z = Rational::zero;
        let [tx, ty] = t;
        Mat3([
            [m.a.clone(), m.b.clone(), tx],
            [m.c.clone(), m.d.clone(), ty],
            [z(), z(), Rational::one()],
        ])
    }

    /// `y ↦ λ y + β` on the first coordinate.
    pub fn affine_line(lambda: Rational, beta: Rational) -> Mat3 {
        Mat3::affine(&Mat2Q::new(lambda, 0, 0, 1), [beta, Rational::zero()])
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.0[i][j]
    }

    pub fn mul(&self, o: &Mat3) -> Mat3 {
        Mat3::from_fn(|i, j| (0..3).map(|k| &self.0[i][k] * &o.0[k][j]).fold(Rational::zero(), |a, b| a + b))
    }

    fn minor(&self, i: usize, j: usize) -> Rational {
        let r: Vec<usize> = (0..3).filter(|&x| x != i).collect();
        let c: Vec<usize> = (0..3).filter(|&x| x != j).collect();
        &(&self.0[r[0]][c[0]] * &self.0[r[1]][c[1]]) - &(&self.0[r[0]][c[1]] * &self.0[r[1]][c[0]])
    }

    pub fn det(&self) -> Rational {
        (0..3)
            .map(|j| {
                let t = &self.0[0][j] * &self.minor(0, j);
                if j % 2 == 0 { t } else { -t }
            })
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn inverse(&self) -> Option<Mat3> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        Some(Mat3::from_fn(|i, j| {
            let c = self.minor(j, i) / det.clone();
            if (i + j) % 2 == 0 { c } else { -c }
        }))
    }

    fn bits(&self) -> u64 {
        self.0
            .iter()
            .flatten()
            .map(|x| x.numer().bits() + x.denom().bits())
            .max()
            .unwrap_or(0)
    }
}

/// A faithful image: matrix plus exponent sums of the counted generators.
pub type OracleElem = (Mat3, Vec<i64>);

const MAX_BITS: u64 = 1 << 14;

#[derive(Clone, Debug)]
pub struct Oracle {
    images: HashMap<String, (Mat3, Mat3, usize)>,
    counters: usize,
    max_len: u64,
}

impl Oracle {
    /// Builds the representation for `model`; `max_len` bounds accepted words.
    pub fn new(model: &Model, max_len: u64) -> Oracle {
        let q = Rational::from_int;
        let h = |x: Rational| Rational::new(1, 2) * x;
        let none = usize::MAX;
        let mut gens: Vec<(String, Mat3, usize)> = Vec::new();
        let mut counters = 0;
        match model {
            Model::RankOne(g) => {
                for (name, x) in g.generators().into_iter().zip(g.generator_values()) {
                    gens.push((name, Mat3::affine_line(Rational::one(), x.clone()), none));
                }
            }
            Model::BSbar(g) => {
                counters = 1;
                gens.push(("a".into(), Mat3::affine_line(q(1), q(1)), none));
                gens.push(("t".into(), Mat3::affine_line(g.ratio().clone(), q(0)), 0));
            }
            Model::Meta(g) => {
                let (r, s, e) = (g.r().clone(), g.s().clone(), g.e().clone());
                if !r.is_one() || !s.is_one() {
                    // u t u^-1 = t a^e forces γ(1 − r) + β(s − 1) = r e.
                    let re = &r * &e;
                    let (beta, gamma) = if !r.is_one() {
                        (q(0), re / (q(1) - r.clone()))
                    } else {
                        (re / (s.clone() - q(1)), q(0))
                    };
                    counters = 2;
                    gens.push(("a".into(), Mat3::affine_line(q(1), q(1)), none));
                    gens.push(("t".into(), Mat3::affine_line(r, beta), 0));
                    gens.push(("u".into(), Mat3::affine_line(s, gamma), 1));
                } else if !e.is_zero() {
                    // Heisenberg: [u, t] = a^e is central.
                    let unit = |i: usize, j: usize, x: Rational| {
                        Mat3::from_fn(|a, b| {
                            if a == b {
                                q(1)
                            } else if (a, b) == (i, j) {
                                x.clone()
                            } else {
                                q(0)
                            }
                        })
                    };
                    gens.push(("a".into(), unit(0, 2, -(e.recip())), none));
                    gens.push(("t".into(), unit(0, 1, q(1)), none));
                    gens.push(("u".into(), unit(1, 2, q(1)), none));
                } else {
                    counters = 3;
                    for (k, name) in ["a", "t", "u"].into_iter().enumerate() {
                        gens.push((name.into(), Mat3::identity(), k));
                    }
                }
            }
            Model::Lattice(g) => {
                counters = 1;
                gens.push(("x".into(), Mat3::affine(&Mat2Q::identity(), [q(1), q(0)]), none));
                gens.push(("y".into(), Mat3::affine(&Mat2Q::identity(), [q(0), q(1)]), none));
                gens.push(("t".into(), Mat3::affine(g.matrix(), [q(0), q(0)]), 0));
            }
            Model::HnnKb(g) => {
                let phi = g.endo();
                counters = 1;
                gens.push(("x".into(), Mat3::affine(&Mat2Q::new(1, 0, 0, -1), [q(1), q(0)]), none));
                gens.push(("y".into(), Mat3::affine(&Mat2Q::identity(), [q(0), q(1)]), none));
                gens.push((
                    "t".into(),
                    Mat3::affine(&Mat2Q::new(phi.e, 0, 0, phi.d), [q(0), -h(q(phi.f))]),
                    0,
                ));
            }
            Model::Affine(g) => {
                for (name, map) in g.generator_maps() {
                    gens.push((name.to_string(), Mat3::affine(&map.linear, map.translation.clone()), none));
                }
            }
        }
        let images = gens
            .into_iter()
            .map(|(name, m, c)| {
                let inv = m.inverse().expect("generator images are invertible");
                (name, (m, inv, c))
            })
            .collect();
        Oracle {
            images,
            counters,
            max_len,
        }
    }

    pub fn eval(&self, w: &Word) -> Result<OracleElem, OracleError> {
        if w.len() > self.max_len {
            return Err(OracleError::ResourceBound(format!(
                "word length {} exceeds {}",
                w.len(),
                self.max_len
            )));
        }
        let mut m = Mat3::identity();
        let mut c = vec![0i64; self.counters];
        for (g, sign) in w.letters() {
            let (img, inv, k) = self
                .images
                .get(g)
                .ok_or_else(|| FamilyError::UnknownGenerator(g.to_string()))?;
            m = m.mul(if sign > 0 { img } else { inv });
            if *k != usize::MAX {
                c[*k] += sign;
            }
            if m.bits() > MAX_BITS {
                return Err(OracleError::ResourceBound("matrix entries exceed the size bound".into()));
            }
        }
        Ok((m, c))
    }

    pub fn equal(&self, w1: &Word, w2: &Word) -> Result<bool, OracleError> {
        Ok(self.eval(w1)? == self.eval(w2)?)
    }
}
