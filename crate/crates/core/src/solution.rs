//! Solver verdicts: a yes with a witness deletion set, or a proven no.

use std::collections::BTreeSet;

use crate::graph::VertexId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Yes(BTreeSet<VertexId>),
    No,
}

impl Solution {
    pub fn is_yes(&self) -> bool {
        matches!(self, Solution::Yes(_))
    }

    pub fn witness(&self) -> Option<&BTreeSet<VertexId>> {
        match self {
            Solution::Yes(w) => Some(w),
            Solution::No => None,
        }
    }
}
