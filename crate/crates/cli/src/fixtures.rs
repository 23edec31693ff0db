//! The shipped example descriptors.

pub struct Fixture {
    pub name: &'static str,
    pub summary: &'static str,
    pub text: &'static str,
}

macro_rules! fixture {
    ($name:literal, $summary:literal) => {
        Fixture {
            name: $name,
            summary: $summary,
            text: include_str!(concat!("../fixtures/", $name, ".toml")),
        }
    };
}

pub const FIXTURES: &[Fixture] = &[
    fixture!("d_infty_amalgam", "amalgam of two Klein bottle groups over Z^2, quotient D_infinity"),
    fixture!("z_plus_z2", "ascending HNN extension of the Klein bottle group, quotient Z + Z/2"),
    fixture!("f_mod_kprime", "F/K' with K/K' = Z[1/3]^2 and quotient D_infinity, not FP2"),
    fixture!("bsbar_23", "BSbar(2,3), Hirsch length 2, not FP2"),
    fixture!("bs12_rtimes", "BS(1,2) semidirect Z with ratios 2 and 3, type 1 with n = 6"),
    fixture!("lattice_sol", "Z^2 semidirect Z by [[2,1],[1,1]], polycyclic (type 3)"),
    fixture!("lattice_asc", "L semidirect Z by [[0,-2],[1,0]], type 2 over Z^2"),
];

pub fn find(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::parse_descriptor;

    #[test]
    fn every_fixture_parses_with_its_own_name() {
        assert_eq!(FIXTURES.len(), 7);
        for f in FIXTURES {
            let d = parse_descriptor(f.text, f.name).unwrap();
            assert_eq!(d.name.as_deref(), Some(f.name));
        }
        assert!(find("nope").is_none());
    }
}
