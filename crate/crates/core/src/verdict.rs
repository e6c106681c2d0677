//! Decider outcomes and their witnesses.

use serde::Serialize;

use crate::algebraic::{AlgebraicJson, RhoK};

/// Result of a big-O decision procedure.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    IsBigO,
    NotBigO { witness: Witness },
    /// Some real-exponential sentences could not be settled.
    Unknown { unresolved: Vec<String> },
}

impl Verdict {
    pub fn is_big_o(&self) -> bool {
        matches!(self, Verdict::IsBigO)
    }

    pub fn is_not_big_o(&self) -> bool {
        matches!(self, Verdict::NotBigO { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown { .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::NotBigO { witness } => Some(witness),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::IsBigO => "IsBigO",
            Verdict::NotBigO { .. } => "NotBigO",
            Verdict::Unknown { .. } => "Unknown",
        }
    }

    /// Process exit code: 0, 1 or 2.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::IsBigO => 0,
            Verdict::NotBigO { .. } => 1,
            Verdict::Unknown { .. } => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RhoKJson {
    pub rho: AlgebraicJson,
    pub k: usize,
}

impl From<&RhoK> for RhoKJson {
    fn from(x: &RhoK) -> RhoKJson {
        RhoKJson { rho: x.rho.to_json(), k: x.k }
    }
}

/// One edge of a product cycle: `(p, q) --a--> (p2, q2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleEdge {
    pub from: (String, String),
    pub symbol: String,
    pub to: (String, String),
    pub ratio: String,
}

/// Point of an integer-grid witness: block lengths and a certified upper
/// bound on the sentence objective there (it tends to `-∞` along the grid,
/// so the weight ratio grows roughly like its negated exponential).
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GridPoint {
    pub lengths: Vec<u64>,
    pub objective_upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type")]
pub enum Witness {
    /// A word with `ν_s(w) > 0 = ν_{s'}(w)`.
    LcCounterexample { word: Vec<String> },
    /// Lengths `length + i·period` where the degree of `s` reaches `x` but that of `s'` does not.
    DegreeGap { x: RhoKJson, length: usize, period: usize },
    /// A reachable, co-reachable product cycle whose ratio product exceeds 1.
    ExpansiveCycle { prefix: Vec<String>, cycle: Vec<CycleEdge>, suffix: Vec<String>, ratio: String },
    /// A certified diverging sequence for a real-exponential sentence.
    /// `blocks` names the word repeated in each coordinate of the grid.
    Divergence { formula: String, blocks: Vec<String>, grid: Vec<GridPoint> },
}
