//! Stage 1 (antigen matching), stage 2 (idiotypic suppression and
//! stimulation) and stage 3 (concentration and activation) of antibody
//! selection.
//!
//! Only the antigenic antibody `x_w1` (the stage 1 winner) disturbs the
//! network: every other antibody with a positive antigen match competes
//! with it, being suppressed when its idiotope is recognised by the
//! winner's paratope and stimulated when its paratope recognises the
//! winner's idiotope.

use serde::{Deserialize, Serialize};

use crate::antigen::Stimulus;
use crate::concentration::ConcentrationVector;
use crate::error::CoreError;
use crate::paratope::{IdiotopeMatrix, ParatopeMatrix};
use crate::scalar::Scalar;
use crate::trace::SelectionTrace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub enum SelectionMode {
    /// Reinforcement learning only: the stage 1 winner executes.
    S1,
    /// Idiotypic selection on global strength, concentrations fixed at 1.
    S2,
    /// Full network: concentration dynamics and activation.
    S3,
}

impl SelectionMode {
    pub const ALL: [SelectionMode; 3] = [SelectionMode::S1, SelectionMode::S2, SelectionMode::S3];
}

impl std::fmt::Display for SelectionMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SelectionMode::S1 => "S1",
            SelectionMode::S2 => "S2",
            SelectionMode::S3 => "S3",
        })
    }
}

impl std::str::FromStr for SelectionMode {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self, CoreError> {
        match s.to_ascii_uppercase().as_str() {
            "S1" => Ok(SelectionMode::S1),
            "S2" => Ok(SelectionMode::S2),
            "S3" => Ok(SelectionMode::S3),
            _ => Err(CoreError::InvalidParameter(format!("unknown system {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkParams<F> {
    /// Suppression weight relative to stimulation.
    pub k1: F,
    /// Concentration death rate per decision tick.
    pub k2: F,
    /// Rate constant on the global strength of match.
    pub b: F,
    pub mode: SelectionMode,
}

impl<F: Scalar> NetworkParams<F> {
    pub fn new(mode: SelectionMode, k1: F, b: F, k2: F) -> Result<Self, CoreError> {
        let p = Self { k1, k2, b, mode };
        p.validate()?;
        Ok(p)
    }

    /// `k1 = 0.625`, `b = 80`, `k2 = 0.05`.
    pub fn standard(mode: SelectionMode) -> Self {
        Self {
            k1: F::lit(0.625),
            k2: F::lit(0.05),
            b: F::lit(80.0),
            mode,
        }
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        if !(self.k1 >= F::zero() && self.k1 <= F::one()) {
            return Err(CoreError::InvalidParameter(format!("k1 = {} not in [0, 1]", self.k1)));
        }
        if !(self.k2 >= F::zero()) {
            return Err(CoreError::InvalidParameter(format!("k2 = {} is negative", self.k2)));
        }
        if !(self.b > F::zero()) {
            return Err(CoreError::InvalidParameter(format!("b = {} must be positive", self.b)));
        }
        Ok(())
    }
}

/// Index of the largest value, lowest index on ties.
pub fn argmax<F: Scalar>(values: &[F]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// `T1(x_i) = sum_j P[x_i, y_j] * G(x_i)_j`.
pub fn strength_of_match<F: Scalar>(
    paratope: &ParatopeMatrix<F>,
    stimulus: &Stimulus,
    weak: bool,
) -> Vec<F> {
    let dominant = stimulus.dominant();
    (0..paratope.antibodies())
        .map(|i| {
            let row = paratope.row(i);
            let g = stimulus.antigen_array::<F>(row[dominant] > F::zero(), weak);
            row.iter().zip(g.weights()).map(|(&p, &w)| p * w).sum()
        })
        .collect()
}

/// Stage 1 winner: the antibody with the highest `T1`.
pub fn select_antigenic_antibody<F: Scalar>(t1: &[F]) -> Result<usize, CoreError> {
    let best = argmax(t1);
    if t1.get(best).is_some_and(|&v| v > F::zero()) {
        Ok(best)
    } else {
        Err(CoreError::NoMatchingAntibody)
    }
}

/// `H`: set for antibodies with `T1 > 0` other than the stage 1 winner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompetitorMask(Vec<bool>);

impl CompetitorMask {
    pub fn build<F: Scalar>(t1: &[F], stage1: usize) -> Self {
        Self(
            t1.iter()
                .enumerate()
                .map(|(i, &v)| i != stage1 && v > F::zero())
                .collect(),
        )
    }

    pub fn flags(&self) -> &[bool] {
        &self.0
    }

    #[inline]
    pub fn competes(&self, antibody: usize) -> bool {
        self.0[antibody]
    }
}

fn collision<F: Scalar>(conc: Option<&ConcentrationVector<F>>, i: usize, stage1: usize) -> F {
    conc.map_or(F::one(), |c| c.get(i) * c.get(stage1))
}

/// `T2(x_i) = sum_m P[x_w1, y_m] I[x_i, y_m] H_i * C(x_i) C(x_w1)`.
/// `conc = None` fixes both concentration factors at 1.
pub fn suppression<F: Scalar>(
    paratope: &ParatopeMatrix<F>,
    idiotope: &IdiotopeMatrix<F>,
    mask: &CompetitorMask,
    stage1: usize,
    conc: Option<&ConcentrationVector<F>>,
) -> Vec<F> {
    let winner = paratope.row(stage1);
    (0..paratope.antibodies())
        .map(|i| {
            if !mask.competes(i) {
                return F::zero();
            }
            let s: F = winner
                .iter()
                .zip(idiotope.row(i))
                .map(|(&p, &id)| p * id)
                .sum();
            s * collision(conc, i, stage1)
        })
        .collect()
}

/// `T3(x_i) = sum_p (1 - P[x_i, y_p]) I[x_w1, y_p] H_i * C(x_i) C(x_w1)`.
pub fn stimulation<F: Scalar>(
    paratope: &ParatopeMatrix<F>,
    idiotope: &IdiotopeMatrix<F>,
    mask: &CompetitorMask,
    stage1: usize,
    conc: Option<&ConcentrationVector<F>>,
) -> Vec<F> {
    let winner = idiotope.row(stage1);
    (0..paratope.antibodies())
        .map(|i| {
            if !mask.competes(i) {
                return F::zero();
            }
            let s: F = paratope
                .row(i)
                .iter()
                .zip(winner)
                .map(|(&p, &id)| (F::one() - p) * id)
                .sum();
            s * collision(conc, i, stage1)
        })
        .collect()
}

/// `Tg = T1 - k1*T2 + T3`.
pub fn global_strength<F: Scalar>(t1: &[F], t2: &[F], t3: &[F], k1: F) -> Vec<F> {
    t1.iter()
        .zip(t2)
        .zip(t3)
        .map(|((&a, &s), &st)| a - k1 * s + st)
        .collect()
}

/// Outcome of one decision: the trace and the concentrations to carry into
/// the next tick.
#[derive(Clone, Debug, PartialEq)]
pub struct Selection<F> {
    pub trace: SelectionTrace<F>,
    pub concentrations: ConcentrationVector<F>,
}

/// Runs all three stages for one decision tick.
///
/// `conc` holds the concentrations going into the tick; it is ignored
/// outside S3. For S1 the idiotypic terms are still evaluated (with unit
/// concentrations) so the trace is complete, but they never affect the
/// winner.
pub fn select_winner<F: Scalar>(
    paratope: &ParatopeMatrix<F>,
    idiotope: &IdiotopeMatrix<F>,
    stimulus: &Stimulus,
    conc: &ConcentrationVector<F>,
    params: &NetworkParams<F>,
    weak: bool,
) -> Result<Selection<F>, CoreError> {
    let n = paratope.antibodies();
    if idiotope.antibodies() != n || idiotope.antigens() != paratope.antigens() {
        return Err(CoreError::Dimension(format!(
            "paratope {}x{} vs idiotope {}x{}",
            n,
            paratope.antigens(),
            idiotope.antibodies(),
            idiotope.antigens()
        )));
    }
    if stimulus.antigens() != paratope.antigens() {
        return Err(CoreError::Dimension(format!(
            "stimulus over {} antigens, paratope has {}",
            stimulus.antigens(),
            paratope.antigens()
        )));
    }
    if conc.len() != n {
        return Err(CoreError::Dimension(format!(
            "{} concentrations for {n} antibodies",
            conc.len()
        )));
    }

    let t1 = strength_of_match(paratope, stimulus, weak);
    let stage1 = select_antigenic_antibody(&t1)?;
    let mask = CompetitorMask::build(&t1, stage1);
    let full = params.mode == SelectionMode::S3;
    let live = full.then_some(conc);
    let t2 = suppression(paratope, idiotope, &mask, stage1, live);
    let t3 = stimulation(paratope, idiotope, &mask, stage1, live);
    let tg = global_strength(&t1, &t2, &t3, params.k1);

    let (next, activation) = if full {
        let next = conc.update(&tg, params.b, params.k2).normalized();
        let a = next.activation(&tg);
        (next, a)
    } else {
        (ConcentrationVector::uniform(n), tg.clone())
    };

    let final_winner = match params.mode {
        SelectionMode::S1 => stage1,
        SelectionMode::S2 => argmax(&tg),
        SelectionMode::S3 => argmax(&activation),
    };

    Ok(Selection {
        trace: SelectionTrace {
            presenting: stimulus.presenting().to_vec(),
            dominant: stimulus.dominant(),
            t1,
            t2,
            t3,
            tg,
            activation,
            concentrations: next.values().to_vec(),
            stage1_winner: stage1,
            final_winner,
            idiotypic_difference: final_winner != stage1,
        },
        concentrations: next,
    })
}

/// Selection state carried across the decision ticks of one run.
#[derive(Clone, Debug)]
pub struct ImmuneNetwork<F> {
    idiotope: IdiotopeMatrix<F>,
    params: NetworkParams<F>,
    concentrations: ConcentrationVector<F>,
    previous: ConcentrationVector<F>,
}

impl<F: Scalar> ImmuneNetwork<F> {
    pub fn new(idiotope: IdiotopeMatrix<F>, params: NetworkParams<F>) -> Result<Self, CoreError> {
        params.validate()?;
        let n = idiotope.antibodies();
        Ok(Self {
            idiotope,
            params,
            concentrations: ConcentrationVector::uniform(n),
            previous: ConcentrationVector::uniform(n),
        })
    }

    pub fn params(&self) -> &NetworkParams<F> {
        &self.params
    }

    pub fn idiotope(&self) -> &IdiotopeMatrix<F> {
        &self.idiotope
    }

    pub fn concentrations(&self) -> &ConcentrationVector<F> {
        &self.concentrations
    }

    /// Back to uniform concentrations, as at the start of every run.
    pub fn reset(&mut self) {
        let n = self.idiotope.antibodies();
        self.concentrations = ConcentrationVector::uniform(n);
        self.previous = ConcentrationVector::uniform(n);
    }

    pub fn decide(
        &mut self,
        paratope: &ParatopeMatrix<F>,
        stimulus: &Stimulus,
        weak: bool,
    ) -> Result<SelectionTrace<F>, CoreError> {
        let sel = select_winner(
            paratope,
            &self.idiotope,
            stimulus,
            &self.concentrations,
            &self.params,
            weak,
        )?;
        self.previous = std::mem::replace(&mut self.concentrations, sel.concentrations);
        Ok(sel.trace)
    }

    /// Removes this tick's concentration change for a penalized antibody.
    /// No effect outside S3.
    pub fn penalize(&mut self, antibody: usize) {
        if self.params.mode == SelectionMode::S3 {
            self.concentrations = self.concentrations.rollback(&self.previous, antibody);
        }
    }
}
