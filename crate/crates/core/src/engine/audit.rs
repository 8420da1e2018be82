//! Truth-table checks of a finished trace, independent of the oracle.

use super::trace::{Mode, PruneTrace, StageKind};
use crate::formula::{brute_force_sat, brute_force_taut, Formula, FormulaError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelViolation {
    pub level_index: usize,
    pub root_holds: bool,
    pub level_holds: bool,
}

fn holds(mode: Mode, formula: &Formula) -> Result<bool, FormulaError> {
    match mode {
        Mode::Fortune => brute_force_taut(formula),
        Mode::Mahaney | Mode::OneTt => brute_force_sat(formula),
    }
}

/// Levels where the root's status disagrees with the survivors': for SAT,
/// "some survivor satisfiable"; for TAUT, "every survivor a tautology".
/// TAUT levels cut short by a Case 1 rejection keep no survivors and are
/// skipped.
pub fn audit_level_equivalence(trace: &PruneTrace) -> Result<Vec<LevelViolation>, FormulaError> {
    let root_holds = holds(trace.mode, &trace.root)?;
    let mut violations = Vec::new();
    for level in &trace.levels {
        if trace.mode == Mode::Fortune && level.ended_early() {
            continue;
        }
        let level_holds = match trace.mode {
            Mode::Fortune => {
                let mut all = true;
                for f in &level.surviving {
                    all &= brute_force_taut(f)?;
                }
                all
            }
            Mode::Mahaney | Mode::OneTt => {
                let mut any = false;
                for f in &level.surviving {
                    any |= brute_force_sat(f)?;
                }
                any
            }
        };
        if level_holds != root_holds {
            violations.push(LevelViolation {
                level_index: level.level_index,
                root_holds,
                level_holds,
            });
        }
    }
    Ok(violations)
}

/// `(level, i, j)` of a collision whose two formulas differ.
pub type CollisionFailure = (usize, usize, usize);

/// Replays every Case 2 stage whose first formula does not settle the level
/// (unsatisfiable for SAT, a tautology for TAUT) and returns
/// `(events checked, (level, i, j) pairs where φ_i and φ_j differ)`.
pub fn case2_witness_failures(
    trace: &PruneTrace,
) -> Result<(usize, Vec<CollisionFailure>), FormulaError> {
    let mut checked = 0;
    let mut failures = Vec::new();
    for level in &trace.levels {
        for (stage, list) in level.stages.iter().zip(level.stage_inputs()) {
            let (StageKind::Case2RemoveCollider, Some((i, j))) = (stage.kind, stage.collision_pair)
            else {
                continue;
            };
            let first = holds(trace.mode, &list[0])?;
            let first_settles = match trace.mode {
                Mode::Fortune => !first,
                Mode::Mahaney | Mode::OneTt => first,
            };
            if first_settles {
                continue;
            }
            checked += 1;
            if holds(trace.mode, &list[i - 1])? != holds(trace.mode, &list[j - 1])? {
                failures.push((level.level_index, i, j));
            }
        }
    }
    Ok((checked, failures))
}
