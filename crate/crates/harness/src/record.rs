//! Run records: one JSON object per solve, written as JSON lines by the
//! bench sweep. Witnesses are re-verified and reported in 1-indexed input
//! ids; generated instances are identified by family and seed.

use nearforest::{Solution, VertexId};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunRecord {
    /// File path or a family descriptor like `planted(n=8,k=1,r=1)#3`.
    pub instance: String,
    pub problem: String,
    pub k: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    pub status: String,
    pub witness: Option<Vec<u32>>,
    pub nodes_expanded: u64,
    pub elapsed_ms: u64,
    /// Largest measure seen at the root of a disjoint sub-solve (rpf only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure_root: Option<i64>,
    pub rng: String,
    /// Oracle cross-check where the instance fits under the oracle cap.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_agrees: Option<bool>,
}

pub fn status_str(sol: &Solution) -> &'static str {
    match sol {
        Solution::Yes(_) => "yes",
        Solution::No => "no",
    }
}

/// Witness in sorted, 1-indexed form for output.
pub fn witness_external(sol: &Solution) -> Option<Vec<u32>> {
    sol.witness()
        .map(|w| w.iter().map(|v| v.0 + 1).collect())
}

pub fn witness_internal(ids: &[u32]) -> Vec<VertexId> {
    ids.iter().map(|&x| VertexId(x - 1)).collect()
}
