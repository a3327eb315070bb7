//! Target-set heuristics: MTS (subtractive, with a limbo set), TSS (the
//! earlier pruning heuristic), a max-degree greedy, and the TIP core
//! decomposition.

mod greedy;
mod mts;
mod tip;
mod tss;

pub use greedy::greedy;
pub use mts::{mts, mts_with, MtsOptions};
pub use tip::tip_decomp;
pub use tss::tss;

use std::time::Duration;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::NodeId;

/// How equally-ranked candidates are ordered. `MinId` is fully
/// deterministic; `Random` draws a node permutation from the seed once per
/// run, so results stay reproducible for a fixed seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TiePolicy {
    MinId,
    Random(u64),
}

impl TiePolicy {
    /// `rank[v]` = priority of `v` among ties; lower wins.
    pub(crate) fn ranks(self, n: usize) -> Vec<u32> {
        match self {
            TiePolicy::MinId => (0..n as u32).collect(),
            TiePolicy::Random(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut perm: Vec<u32> = (0..n as u32).collect();
                perm.shuffle(&mut rng);
                let mut rank = vec![0u32; n];
                for (pos, &v) in perm.iter().enumerate() {
                    rank[v as usize] = pos as u32;
                }
                rank
            }
        }
    }
}

/// One solver iteration, as recorded with tracing enabled. Sizes are taken
/// at the beginning of the iteration, before `node` is processed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceRow {
    pub iteration: usize,
    pub node: NodeId,
    pub case: u8,
    pub surviving: usize,
    pub limbo: usize,
    pub target: usize,
}

/// Solver output: the target set plus run statistics.
#[derive(Debug, Clone)]
pub struct TargetSetResult {
    /// Target set, sorted by node id.
    pub seeds: Vec<NodeId>,
    /// Iterations of the main loop.
    pub iterations: usize,
    /// How often each of the three selection cases fired. Greedy maps
    /// eliminations to case 1 and insertions to case 2; TIP counts its
    /// removals as case 1.
    pub case_counts: [usize; 3],
    pub wall_time: Duration,
    /// Per-iteration rows when tracing was requested.
    pub trace: Option<Vec<TraceRow>>,
}

impl TargetSetResult {
    pub fn size(&self) -> usize {
        self.seeds.len()
    }
}

/// Compares k(a)/(δ(a)(δ(a)+1)) against k(b)/(δ(b)(δ(b)+1)) without
/// floating point: cross-multiplied in u128 so ties are exact.
pub(crate) fn cmp_metric(ka: u32, da: u32, kb: u32, db: u32) -> std::cmp::Ordering {
    let lhs = ka as u128 * (db as u128 * (db as u128 + 1));
    let rhs = kb as u128 * (da as u128 * (da as u128 + 1));
    lhs.cmp(&rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_are_a_permutation() {
        for tie in [TiePolicy::MinId, TiePolicy::Random(3)] {
            let ranks = tie.ranks(20);
            let mut sorted = ranks.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..20).collect::<Vec<u32>>());
        }
        assert_eq!(TiePolicy::Random(5).ranks(50), TiePolicy::Random(5).ranks(50));
    }

    #[test]
    fn metric_comparison_is_exact() {
        use std::cmp::Ordering::*;
        // 1/(3*4) < 1/(2*3)
        assert_eq!(cmp_metric(1, 3, 1, 2), Less);
        // 1/(2*3) == 2/(3*4), both 1/6
        assert_eq!(cmp_metric(1, 2, 2, 3), Equal);
        // 3/(1*2) > 1/(3*4)
        assert_eq!(cmp_metric(3, 1, 1, 3), Greater);
    }
}
