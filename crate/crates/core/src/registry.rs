//! Named surface recipes with their claimed groups and component fields.

use crate::arith::count::Weierstrass;
use crate::arith::{SurfaceKind, SurfaceSpec};
use crate::error::{invalid, Result};
use crate::galois::LFieldSpec;
use crate::stgroups::GroupTag;
use serde::Serialize;

/// 37a1: `y² + y = x³ − x`, non-CM, conductor 37.
pub const E37A1: Weierstrass = [0, 0, 1, -1, 0];
/// 11a1: `y² + y = x³ − x² − 10x − 20`, non-CM, conductor 11.
pub const E11A1: Weierstrass = [0, -1, 1, -10, -20];
/// 32a2: `y² = x³ − x`, CM by `Q(i)`.
pub const E32A2: Weierstrass = [0, 0, 0, -1, 0];
/// 389a1: `y² + y = x³ + x² − 2x`, non-CM, conductor 389.
pub const E389A1: Weierstrass = [0, 1, 1, -2, 0];
/// `y² = x⁶ + x² + 1`; the involution `x ↦ −x` splits its Jacobian over Q.
pub const G2_EVEN_SEXTIC: [i64; 7] = [1, 0, 1, 0, 0, 0, 1];

#[derive(Debug, Clone, Serialize)]
pub struct RegistryEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub surface: SurfaceSpec,
    pub lfield: LFieldSpec,
    /// How `Frob_p` picks its component.
    pub component_rule: &'static str,
    /// Claimed group not established; to be checked with `analyze`.
    pub experimental: bool,
}

impl RegistryEntry {
    pub fn claimed_group(&self) -> GroupTag {
        self.surface.claimed_group.expect("registry entries carry a claim")
    }
}

pub fn registry() -> Vec<RegistryEntry> {
    let spec = |kind, tag| SurfaceSpec { kind, claimed_group: Some(tag) };
    vec![
        RegistryEntry {
            name: "B_C1",
            description: "37a1 x 11a1: two non-CM, non-isogenous elliptic curves",
            surface: spec(SurfaceKind::Product(E37A1, E11A1), GroupTag::BC1),
            lfield: LFieldSpec::Trivial {},
            component_rule: "trivial",
            experimental: false,
        },
        RegistryEntry {
            name: "C_C2",
            description: "32a2 x 37a1: CM curve y^2 = x^3 - x (CM by Q(i)) times a non-CM curve",
            surface: spec(SurfaceKind::Product(E32A2, E37A1), GroupTag::CC2),
            lfield: LFieldSpec::Quadratic { d: -1 },
            component_rule: "kronecker(-4, p) = -1 selects the non-identity component",
            experimental: false,
        },
        RegistryEntry {
            name: "E_C1",
            description: "389a1 x 389a1: square of a non-CM elliptic curve",
            surface: spec(SurfaceKind::Square(E389A1), GroupTag::EC1),
            lfield: LFieldSpec::Trivial {},
            component_rule: "trivial",
            experimental: false,
        },
        RegistryEntry {
            name: "E_C2_RR",
            description: "37a1 x 37a1^(2): a non-CM curve and its quadratic twist by Q(sqrt 2)",
            surface: spec(SurfaceKind::TwistPair(E37A1, 2), GroupTag::EC2RR),
            lfield: LFieldSpec::Quadratic { d: 2 },
            component_rule: "kronecker(8, p) = -1 selects the non-identity component",
            experimental: false,
        },
        RegistryEntry {
            name: "G2_even_sextic",
            description: "Jacobian of y^2 = x^6 + x^2 + 1, split by x -> -x into two elliptic factors",
            surface: spec(SurfaceKind::Genus2(G2_EVEN_SEXTIC.to_vec()), GroupTag::BC1),
            lfield: LFieldSpec::Trivial {},
            component_rule: "trivial",
            experimental: true,
        },
    ]
}

/// Looks up an entry by name, ignoring ASCII case.
pub fn lookup(name: &str) -> Result<RegistryEntry> {
    let all = registry();
    let names: Vec<&str> = all.iter().map(|e| e.name).collect();
    match all.iter().find(|e| e.name.eq_ignore_ascii_case(name.trim())) {
        Some(e) => Ok(e.clone()),
        None => invalid(format!("unknown registry entry {name:?}; known: {}", names.join(", "))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Surface;
    use crate::galois::LField;
    use crate::stgroups::SatoTateGroup;

    #[test]
    fn entries_are_consistent() {
        let all = registry();
        assert!(all.len() >= 5);
        for e in &all {
            Surface::new(&e.surface).unwrap();
            let l = LField::new(&e.lfield).unwrap();
            let g = SatoTateGroup::new(e.claimed_group());
            assert_eq!(l.degree(), g.num_components(), "{}", e.name);
        }
    }

    #[test]
    fn lookup_examples() {
        let e = lookup("e_c1").unwrap();
        assert!(matches!(e.surface.kind, SurfaceKind::Square(_)));
        assert_eq!(e.lfield, LFieldSpec::Trivial {});
        assert_eq!(SatoTateGroup::new(e.claimed_group()).num_components(), 1);
        let c = lookup("C_C2").unwrap();
        assert_eq!(c.lfield, LFieldSpec::Quadratic { d: -1 });
        assert!(lookup("B_C9").is_err());
    }
}
