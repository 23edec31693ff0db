//! Groups given by affine maps of `Q^2`, composed exactly.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{Mat2Q, Rational, Vec2Q};
use crate::presentation::{parse_presentation, parse_word, Presentation, Word};

use super::{unknown, FamilyError, GroupModel, Relation};

/// `v ↦ linear·v + translation`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineMap2 {
    pub linear: Mat2Q,
    pub translation: Vec2Q,
}

impl AffineMap2 {
    pub fn identity() -> AffineMap2 {
        AffineMap2 {
            linear: Mat2Q::identity(),
            translation: [Rational::zero(), Rational::zero()],
        }
    }

    pub fn translation(v: Vec2Q) -> AffineMap2 {
        AffineMap2 {
            linear: Mat2Q::identity(),
            translation: v,
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap2) -> AffineMap2 {
        let w = self.linear.apply(&other.translation);
        AffineMap2 {
            linear: self.linear.mul(&other.linear),
            translation: [&w[0] + &self.translation[0], &w[1] + &self.translation[1]],
        }
    }

    pub fn inverse(&self) -> AffineMap2 {
        let inv = self.linear.inverse().expect("affine maps have invertible linear part");
        let w = inv.apply(&self.translation);
        AffineMap2 {
            linear: inv,
            translation: [-&w[0], -&w[1]],
        }
    }

    pub fn apply(&self, v: &Vec2Q) -> Vec2Q {
        let w = self.linear.apply(v);
        [&w[0] + &self.translation[0], &w[1] + &self.translation[1]]
    }

    pub fn is_translation(&self) -> bool {
        self.linear.is_identity()
    }
}

impl fmt::Display for AffineMap2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, ({}, {}))",
            self.linear, self.translation[0], self.translation[1]
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineGenerator {
    pub name: String,
    pub linear: Mat2Q,
    pub translation: Vec2Q,
}

impl AffineGenerator {
    pub fn map(&self) -> AffineMap2 {
        AffineMap2 {
            linear: self.linear.clone(),
            translation: self.translation.clone(),
        }
    }
}

/// Generator maps, plus the presentation they realize and words generating
/// the radical.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineDescriptor {
    pub generators: Vec<AffineGenerator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub radical: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineQ2 {
    desc: AffineDescriptor,
    presentation: Option<Presentation>,
    radical: Vec<Word>,
}

impl AffineQ2 {
    pub fn new(desc: AffineDescriptor) -> Result<AffineQ2, FamilyError> {
        let mut names: Vec<String> = Vec::new();
        for g in &desc.generators {
            let valid = g.name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && g.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(FamilyError::Invalid(format!("invalid generator name `{}`", g.name)));
            }
            if names.contains(&g.name) {
                return Err(FamilyError::Invalid(format!("duplicate generator `{}`", g.name)));
            }
            if g.linear.det().is_zero() {
                return Err(FamilyError::Invalid(format!(
                    "generator `{}` has singular linear part",
                    g.name
                )));
            }
            names.push(g.name.clone());
        }
        let presentation = match &desc.presentation {
            None => None,
            Some(text) => {
                let p = parse_presentation(text)
                    .map_err(|e| FamilyError::Invalid(format!("presentation: {e}")))?;
                if let Some(g) = p.generators.iter().find(|g| !names.contains(g)) {
                    return Err(FamilyError::Invalid(format!(
                        "presentation generator `{g}` has no affine map"
                    )));
                }
                Some(p)
            }
        };
        let radical = desc
            .radical
            .iter()
            .map(|w| {
                parse_word(w, &names).map_err(|e| FamilyError::Invalid(format!("radical word `{w}`: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AffineQ2 {
            desc,
            presentation,
            radical,
        })
    }

    pub fn descriptor(&self) -> &AffineDescriptor {
        &self.desc
    }

    pub fn presentation(&self) -> Option<&Presentation> {
        self.presentation.as_ref()
    }

    pub fn radical_words(&self) -> &[Word] {
        &self.radical
    }

    pub fn generator_maps(&self) -> impl Iterator<Item = (&str, AffineMap2)> {
        self.desc.generators.iter().map(|g| (g.name.as_str(), g.map()))
    }
}

impl GroupModel for AffineQ2 {
    type Elem = AffineMap2;

    fn generators(&self) -> Vec<String> {
        self.desc.generators.iter().map(|g| g.name.clone()).collect()
    }

    fn identity(&self) -> AffineMap2 {
        AffineMap2::identity()
    }

    fn generator(&self, symbol: &str) -> Result<AffineMap2, FamilyError> {
        self.desc
            .generators
            .iter()
            .find(|g| g.name == symbol)
            .map(AffineGenerator::map)
            .ok_or_else(|| unknown(symbol))
    }

    fn mul(&self, a: &AffineMap2, b: &AffineMap2) -> AffineMap2 {
        a.compose(b)
    }

    fn inv(&self, a: &AffineMap2) -> AffineMap2 {
        a.inverse()
    }

    fn relations(&self) -> Vec<Relation> {
        self.presentation
            .iter()
            .flat_map(|p| p.relators.iter())
            .map(|r| Relation::new(r.to_string(), r.clone(), Word::identity()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn gen(name: &str, m: [&str; 4], t: [&str; 2]) -> AffineGenerator {
        AffineGenerator {
            name: name.into(),
            linear: Mat2Q::new(q(m[0]), q(m[1]), q(m[2]), q(m[3])),
            translation: [q(t[0]), q(t[1])],
        }
    }

    fn d_infty() -> AffineQ2 {
        AffineQ2::new(AffineDescriptor {
            generators: vec![
                gen("u", ["1", "0", "0", "-1"], ["1/2", "0"]),
                gen("v", ["2", "-1", "3", "-2"], ["0", "-1"]),
                gen("y", ["1", "0", "0", "1"], ["0", "1"]),
            ],
            presentation: Some(
                "<u, v, y | u y u^-1 = y^-1, v y v^-1 = v^-2 y^-1, v^2 = u^2 y>".into(),
            ),
            radical: vec!["u^2".into(), "y".into()],
        })
        .unwrap()
    }

    #[test]
    fn squares_of_the_involutions() {
        let g = d_infty();
        let u2 = g.of_word(&Word::power_of("u", 2)).unwrap();
        assert_eq!(u2, AffineMap2::translation([q("1"), q("0")]));
        let v2 = g.of_word(&Word::power_of("v", 2)).unwrap();
        assert_eq!(v2, AffineMap2::translation([q("1"), q("1")]));
        let u2y = g.of_word(&Word::new([("u", 2), ("y", 1)])).unwrap();
        assert_eq!(v2, u2y);
        assert_eq!(g.of_word(&Word::identity()).unwrap(), AffineMap2::identity());
    }

    #[test]
    fn presentation_relators_hold() {
        let g = d_infty();
        let rels = g.relations();
        assert_eq!(rels.len(), 3);
        for r in rels {
            assert_eq!(g.of_word(&r.relator()).unwrap(), AffineMap2::identity(), "{}", r.label);
        }
    }

    #[test]
    fn inverse_and_errors() {
        let g = d_infty();
        let v = g.generator("v").unwrap();
        assert_eq!(v.compose(&v.inverse()), AffineMap2::identity());
        assert!(matches!(g.of_word(&Word::generator("z")), Err(FamilyError::UnknownGenerator(_))));
        let bad = AffineDescriptor {
            generators: vec![gen("u", ["1", "1", "1", "1"], ["0", "0"])],
            presentation: None,
            radical: vec![],
        };
        assert!(AffineQ2::new(bad).is_err());
    }
}
