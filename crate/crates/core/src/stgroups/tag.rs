use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// The thirteen Sato–Tate groups of abelian surfaces potentially of GL₂-type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupTag {
    #[serde(rename = "B_C1")]
    BC1,
    #[serde(rename = "B_C2")]
    BC2,
    #[serde(rename = "C_C2")]
    CC2,
    #[serde(rename = "E_C1")]
    EC1,
    /// `J(E₁) = ⟨SU(2), J⟩`.
    #[serde(rename = "E_C2_RR")]
    EC2RR,
    /// `E₂ = ⟨SU(2), Δ₂⟩`.
    #[serde(rename = "E_C2_C")]
    EC2C,
    #[serde(rename = "E_C3")]
    EC3,
    #[serde(rename = "E_C4")]
    EC4,
    #[serde(rename = "E_C6")]
    EC6,
    #[serde(rename = "J_E2")]
    JE2,
    #[serde(rename = "J_E3")]
    JE3,
    #[serde(rename = "J_E4")]
    JE4,
    #[serde(rename = "J_E6")]
    JE6,
}

/// Structural family of a group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `SU(2) × SU(2)`, optionally extended by `J`.
    B { extended: bool },
    /// `N(U(1)) × SU(2)`.
    C,
    /// `⟨SU(2), Δ_n⟩`, optionally with `J`.
    E { n: usize, with_j: bool },
}

impl GroupTag {
    pub const ALL: [GroupTag; 13] = [
        GroupTag::BC1,
        GroupTag::BC2,
        GroupTag::CC2,
        GroupTag::EC1,
        GroupTag::EC2RR,
        GroupTag::EC2C,
        GroupTag::EC3,
        GroupTag::EC4,
        GroupTag::EC6,
        GroupTag::JE2,
        GroupTag::JE3,
        GroupTag::JE4,
        GroupTag::JE6,
    ];

    pub fn family(self) -> Family {
        use GroupTag::*;
        match self {
            BC1 => Family::B { extended: false },
            BC2 => Family::B { extended: true },
            CC2 => Family::C,
            EC1 => Family::E { n: 1, with_j: false },
            EC2RR => Family::E { n: 1, with_j: true },
            EC2C => Family::E { n: 2, with_j: false },
            EC3 => Family::E { n: 3, with_j: false },
            EC4 => Family::E { n: 4, with_j: false },
            EC6 => Family::E { n: 6, with_j: false },
            JE2 => Family::E { n: 2, with_j: true },
            JE3 => Family::E { n: 3, with_j: true },
            JE4 => Family::E { n: 4, with_j: true },
            JE6 => Family::E { n: 6, with_j: true },
        }
    }

    pub fn name(self) -> &'static str {
        use GroupTag::*;
        match self {
            BC1 => "B_C1",
            BC2 => "B_C2",
            CC2 => "C_C2",
            EC1 => "E_C1",
            EC2RR => "E_C2_RR",
            EC2C => "E_C2_C",
            EC3 => "E_C3",
            EC4 => "E_C4",
            EC6 => "E_C6",
            JE2 => "J_E2",
            JE3 => "J_E3",
            JE4 => "J_E4",
            JE6 => "J_E6",
        }
    }

    /// Name of the group as a subgroup of USp(4).
    pub fn group_name(self) -> &'static str {
        use GroupTag::*;
        match self {
            BC1 => "SU(2)xSU(2)",
            BC2 => "N(SU(2)xSU(2))",
            CC2 => "N(U(1))xSU(2)",
            EC1 => "E_1",
            EC2RR => "J(E_1)",
            EC2C => "E_2",
            EC3 => "E_3",
            EC4 => "E_4",
            EC6 => "E_6",
            JE2 => "J(E_2)",
            JE3 => "J(E_3)",
            JE4 => "J(E_4)",
            JE6 => "J(E_6)",
        }
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GroupTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GroupTag::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidInput(format!("unknown group tag '{s}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for t in GroupTag::ALL {
            assert_eq!(t.name().parse::<GroupTag>().unwrap(), t);
        }
        assert!("A_C1".parse::<GroupTag>().is_err());
        assert!("".parse::<GroupTag>().is_err());
    }
}
