//! Per-run rates and stall sequences derived from the decision stream.

use idionet_core::antigen::{BLOCKED_BEHIND, STALLED};
use serde::{Deserialize, Serialize};

/// One decision tick as seen by the metrics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub tick: u64,
    pub dominant: usize,
    pub stage1_winner: usize,
    pub winner: usize,
    /// `None` when the run ended before the decision was assessed.
    pub rf: Option<f64>,
}

impl Decision {
    pub fn is_stall(&self) -> bool {
        is_stall_antigen(self.dominant)
    }

    pub fn idiotypic_difference(&self) -> bool {
        self.winner != self.stage1_winner
    }

    pub fn rewarded(&self) -> bool {
        self.rf.is_some_and(|r| r > 0.0)
    }
}

pub fn is_stall_antigen(antigen: usize) -> bool {
    antigen == STALLED || antigen == BLOCKED_BEHIND
}

/// Percentages in `[0, 100]`; `None` when the denominator is zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Rates {
    /// Decisions with a positive score.
    pub reinforcement_success: Option<f64>,
    /// Decisions whose winner differs from the previous decision's.
    pub antibody_change: Option<f64>,
    /// Decisions where the final winner is not the stage-1 winner.
    pub idiotypic_difference: Option<f64>,
    /// Positive scores among the idiotypic-difference decisions.
    pub idiotypic_success: Option<f64>,
}

fn pct(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| 100.0 * num as f64 / den as f64)
}

impl Rates {
    /// Rates over the decisions at `indices` of `all`; antibody changes are
    /// measured against the decision immediately before in `all`.
    fn over(all: &[Decision], indices: impl Iterator<Item = usize>) -> Self {
        let (mut n, mut rewarded, mut diff, mut diff_ok, mut change_den, mut changes) =
            (0, 0, 0, 0, 0, 0);
        for i in indices {
            let d = &all[i];
            n += 1;
            rewarded += d.rewarded() as usize;
            if d.idiotypic_difference() {
                diff += 1;
                diff_ok += d.rewarded() as usize;
            }
            if i > 0 {
                change_den += 1;
                changes += (all[i - 1].winner != d.winner) as usize;
            }
        }
        Self {
            reinforcement_success: pct(rewarded, n),
            antibody_change: pct(changes, change_den),
            idiotypic_difference: pct(diff, n),
            idiotypic_success: pct(diff_ok, diff),
        }
    }
}

/// A maximal run of consecutive stall decisions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StallSequence {
    /// Index of the first decision.
    pub start: usize,
    pub length: usize,
    pub antibodies: Vec<usize>,
    /// A non-stall decision followed the sequence.
    pub escaped: bool,
    /// The last decision of an escaped sequence was an idiotypic difference.
    pub escape_by_difference: bool,
}

impl StallSequence {
    pub fn is_long(&self) -> bool {
        self.length > 1
    }

    /// Winner changes between consecutive decisions inside the sequence.
    pub fn changes(&self) -> usize {
        self.antibodies.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

pub fn stall_sequences(decisions: &[Decision]) -> Vec<StallSequence> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < decisions.len() {
        if !decisions[i].is_stall() {
            i += 1;
            continue;
        }
        let start = i;
        while i < decisions.len() && decisions[i].is_stall() {
            i += 1;
        }
        let escaped = i < decisions.len();
        out.push(StallSequence {
            start,
            length: i - start,
            antibodies: decisions[start..i].iter().map(|d| d.winner).collect(),
            escaped,
            escape_by_difference: escaped && decisions[i - 1].idiotypic_difference(),
        });
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub decisions: usize,
    pub stall_ticks: usize,
    pub all: Rates,
    pub stalls: Rates,
    pub stall_sequences: Vec<StallSequence>,
}

impl RunMetrics {
    pub fn from_decisions(decisions: &[Decision]) -> Self {
        let stall_idx: Vec<usize> = (0..decisions.len()).filter(|&i| decisions[i].is_stall()).collect();
        Self {
            decisions: decisions.len(),
            stall_ticks: stall_idx.len(),
            all: Rates::over(decisions, 0..decisions.len()),
            stalls: Rates::over(decisions, stall_idx.into_iter()),
            stall_sequences: stall_sequences(decisions),
        }
    }

    pub fn long_stalls(&self) -> impl Iterator<Item = &StallSequence> {
        self.stall_sequences.iter().filter(|s| s.is_long())
    }
}
