use serde::{Deserialize, Serialize};

/// Everything computed for one decision tick.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionTrace<F> {
    pub presenting: Vec<usize>,
    pub dominant: usize,
    pub t1: Vec<F>,
    pub t2: Vec<F>,
    pub t3: Vec<F>,
    pub tg: Vec<F>,
    pub activation: Vec<F>,
    /// Concentrations after this tick's update (all 1 outside S3).
    pub concentrations: Vec<F>,
    pub stage1_winner: usize,
    pub final_winner: usize,
    pub idiotypic_difference: bool,
}
