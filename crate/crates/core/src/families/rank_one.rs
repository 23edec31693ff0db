//! Subgroups of `(Q, +)`: finitely generated ones are cyclic, and `invert`
//! localizes to `c·Z[1/D]`.

use crate::arith::{cyclic_generator, in_localized, radical, Rational};
use crate::presentation::Word;

use super::{unknown, FamilyError, GroupModel, Relation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOneQ {
    generators: Vec<Rational>,
    invert: u64,
    cyclic: Rational,
}

impl RankOneQ {
    pub fn new(generators: Vec<Rational>, invert: u64) -> Result<RankOneQ, FamilyError> {
        if invert == 0 {
            return Err(FamilyError::Invalid("invert must be positive".into()));
        }
        let cyclic = cyclic_generator(&generators);
        Ok(RankOneQ {
            generators,
            invert: radical(invert),
            cyclic,
        })
    }

    /// The positive generator `c` with the group equal to `c·Z[1/D]`.
    pub fn cyclic_generator(&self) -> &Rational {
        &self.cyclic
    }

    pub fn generator_values(&self) -> &[Rational] {
        &self.generators
    }

    /// Square-free `D` (1 when nothing is inverted).
    pub fn locus(&self) -> u64 {
        self.invert
    }

    pub fn is_trivial(&self) -> bool {
        self.cyclic.is_zero()
    }

    pub fn is_cyclic(&self) -> bool {
        self.is_trivial() || self.invert == 1
    }

    pub fn contains(&self, x: &Rational) -> bool {
        if self.cyclic.is_zero() {
            return x.is_zero();
        }
        in_localized(&(x / &self.cyclic), self.invert).unwrap_or(false)
    }

    fn symbol(i: usize) -> String {
        format!("g{}", i + 1)
    }
}

impl GroupModel for RankOneQ {
    type Elem = Rational;

    fn generators(&self) -> Vec<String> {
        (0..self.generators.len()).map(RankOneQ::symbol).collect()
    }

    fn identity(&self) -> Rational {
        Rational::zero()
    }

    fn generator(&self, symbol: &str) -> Result<Rational, FamilyError> {
        symbol
            .strip_prefix('g')
            .and_then(|k| k.parse::<usize>().ok())
            .filter(|&k| k >= 1 && k <= self.generators.len() && symbol == RankOneQ::symbol(k - 1))
            .map(|k| self.generators[k - 1].clone())
            .ok_or_else(|| unknown(symbol))
    }

    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }

    fn inv(&self, a: &Rational) -> Rational {
        -a
    }

    fn pow(&self, a: &Rational, k: i64) -> Rational {
        a * &Rational::from(k)
    }

    fn relations(&self) -> Vec<Relation> {
        let gens = self.generators();
        let mut out = Vec::new();
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                let x = Word::generator(&gens[i]);
                let y = Word::generator(&gens[j]);
                out.push(Relation::new(
                    format!("[{},{}]", gens[i], gens[j]),
                    x.mul(&y),
                    y.mul(&x),
                ));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn cyclic_generator_of_halves_and_thirds() {
        let g = RankOneQ::new(vec![q("1/2"), q("1/3")], 1).unwrap();
        assert_eq!(g.cyclic_generator(), &q("1/6"));
        assert!(g.is_cyclic());
        assert!(g.contains(&q("5/6")));
        assert!(!g.contains(&q("1/12")));
    }

    #[test]
    fn localized_subgroup() {
        let g = RankOneQ::new(vec![q("1")], 12).unwrap();
        assert_eq!(g.locus(), 6);
        assert!(!g.is_cyclic());
        assert!(g.contains(&q("5/72")));
        assert!(!g.contains(&q("1/5")));
    }

    #[test]
    fn trivial_and_word_evaluation() {
        let g = RankOneQ::new(vec![q("0")], 1).unwrap();
        assert!(g.is_trivial());
        let g = RankOneQ::new(vec![q("1/2"), q("1/3")], 1).unwrap();
        let w = Word::new([("g1", 2), ("g2", -1)]);
        assert_eq!(g.of_word(&w).unwrap(), q("2/3"));
        assert!(g.generator("g3").is_err());
        assert!(g.generator("g01").is_err());
    }
}
