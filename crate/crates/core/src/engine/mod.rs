//! The pruned downward self-reduction tree.
//!
//! Level `ℓ` replaces `x_ℓ` by both constants in every surviving formula.
//! Whenever a level holds more formulas than the width cap, stages of
//! pruning run: with `φ_1` first in the list, query `q_i = f(φ_1 ∘ φ_i)`
//! for every other `φ_i` (`∘` is `|` for SAT, `&` for TAUT).
//!
//! * all `q_i` distinct: more distinct queries than the target has short
//!   members, so some `φ_1 ∘ φ_i` is a no-instance. For SAT that makes
//!   `φ_1` unsatisfiable and it is dropped; for TAUT some formula at the
//!   level is not a tautology and the run rejects.
//! * `q_i = q_j`: `φ_i` is dropped. Either `φ_1` already decides the level,
//!   or `φ_i` and `φ_j` stand or fall together.
//!
//! With a valid oracle, "the root is satisfiable iff some formula at the
//! level is" (for TAUT: "iff every formula is a tautology") survives every
//! stage, and each level stays within `t + 1` formulas where
//! `t = s(r(2n + 5))`.

mod audit;
mod dot;
mod trace;

use std::collections::{HashMap, HashSet};

use crate::formula::{combine_and, combine_or, Assignment, Formula, FormulaError, VarIndex};
use crate::oracles::{Direction, OracleError, QueryLabel, ReductionOracle};
use crate::poly::PolyError;

pub use audit::{
    audit_level_equivalence, case2_witness_failures, CollisionFailure, LevelViolation,
};
pub use dot::trace_to_dot;
pub use trace::{LevelRecord, Mode, Outcome, PruneTrace, QueryRecord, StageEvent, StageKind};

/// JSON Schema (draft 2020-12) for [`PruneTrace::to_json`] output.
pub const TRACE_SCHEMA: &str = include_str!("prune_trace.schema.json");

/// Default largest variable index the engine branches on.
pub const DEFAULT_MAX_VARIABLE: VarIndex = 64;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("width bound: {0}")]
    Bound(#[from] PolyError),
    #[error("width cap {0} does not fit the platform integer range")]
    CapOverflow(u64),
    #[error("oracle {oracle} has no label map; one-query mode needs one")]
    MissingLabel { oracle: String },
    #[error("{mode} mode needs a {expected:?} oracle, {oracle} reduces {found:?}")]
    DirectionMismatch {
        mode: Mode,
        oracle: String,
        expected: Direction,
        found: Direction,
    },
    #[error("variable x{index} exceeds the configured maximum x{max}")]
    VariableTooLarge { index: VarIndex, max: VarIndex },
    #[error("cannot prune an empty level")]
    EmptyLevel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub max_variable: VarIndex,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_variable: DEFAULT_MAX_VARIABLE,
        }
    }
}

/// `t = s(r(2n + 5))` and the number of formulas a level may keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Width {
    t: u64,
    cap: u64,
}

impl Width {
    /// `t + 1` for the many-one modes, `2(t + 1)` for one-query mode.
    pub fn for_mode(mode: Mode, t: u64) -> Result<Self, EngineError> {
        let plus_one = t.checked_add(1).ok_or(PolyError::Overflow)?;
        let cap = match mode {
            Mode::Mahaney | Mode::Fortune => plus_one,
            Mode::OneTt => plus_one.checked_mul(2).ok_or(PolyError::Overflow)?,
        };
        if usize::try_from(cap).is_err() {
            return Err(EngineError::CapOverflow(cap));
        }
        Ok(Width { t, cap })
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }
}

/// Width for a root of length `n`, from the oracle's declared census and
/// stretch bounds.
pub fn width_cap(oracle: &ReductionOracle, n: usize, mode: Mode) -> Result<Width, EngineError> {
    let n = n as u64;
    let combined_len = n
        .checked_mul(2)
        .and_then(|v| v.checked_add(5))
        .ok_or(PolyError::Overflow)?;
    let stretched = oracle.stretch_bound().eval(combined_len)?;
    let t = oracle.target().census_bound().eval(stretched)?;
    Width::for_mode(mode, t)
}

/// Result of pruning one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pruned {
    pub surviving: Vec<Formula>,
    pub stages: Vec<StageEvent>,
    pub early: Option<Outcome>,
}

/// Runs pruning stages until the list fits the cap or a stage decides the
/// instance outright.
pub fn prune_level(
    formulas: Vec<Formula>,
    oracle: &ReductionOracle,
    width: Width,
    mode: Mode,
) -> Result<Pruned, EngineError> {
    if formulas.is_empty() {
        return Err(EngineError::EmptyLevel);
    }
    let mut list = formulas;
    let mut stages = Vec::new();
    while list.len() as u64 > width.cap {
        let queries = stage_queries(&list, oracle, mode)?;
        let collision = first_collision(&queries);
        let (event, early) = match (mode, collision) {
            (Mode::Mahaney, None) => (
                remove(&mut list, StageKind::Case1RemoveFirst, queries, 1, None),
                None,
            ),
            (Mode::Mahaney | Mode::Fortune, Some((i, j))) => (
                remove(
                    &mut list,
                    StageKind::Case2RemoveCollider,
                    queries,
                    i,
                    Some((i, j)),
                ),
                None,
            ),
            (Mode::Fortune, None) => {
                list.clear();
                (
                    stop(StageKind::FortuneReject, queries, None),
                    Some(Outcome::Reject),
                )
            }
            (Mode::OneTt, None) => {
                let negated: Vec<usize> = queries
                    .iter()
                    .filter(|q| q.label == Some(QueryLabel::Neg))
                    .map(|q| q.index)
                    .collect();
                if negated.len() as u64 > width.t {
                    // some negated query is outside the target: φ_1 ∨ φ_i is satisfiable
                    let mut witness = vec![list[0].clone()];
                    witness.extend(
                        negated
                            .iter()
                            .take(width.t as usize + 1)
                            .map(|&i| list[i - 1].clone()),
                    );
                    list = witness;
                    (
                        stop(StageKind::OneTtAccept, queries, None),
                        Some(Outcome::Accept),
                    )
                } else {
                    (
                        remove(&mut list, StageKind::Case1RemoveFirst, queries, 1, None),
                        None,
                    )
                }
            }
            (Mode::OneTt, Some((i, j))) => {
                if queries[i - 2].label == queries[j - 2].label {
                    (
                        remove(
                            &mut list,
                            StageKind::Case2RemoveCollider,
                            queries,
                            i,
                            Some((i, j)),
                        ),
                        None,
                    )
                } else {
                    // one of the two answers is positive whatever q's membership
                    list = vec![list[0].clone(), list[i - 1].clone(), list[j - 1].clone()];
                    (
                        stop(StageKind::OneTtAccept, queries, Some((i, j))),
                        Some(Outcome::Accept),
                    )
                }
            }
        };
        stages.push(event);
        if early.is_some() {
            return Ok(Pruned {
                surviving: list,
                stages,
                early,
            });
        }
    }
    Ok(Pruned {
        surviving: list,
        stages,
        early: None,
    })
}

fn stage_queries(
    list: &[Formula],
    oracle: &ReductionOracle,
    mode: Mode,
) -> Result<Vec<QueryRecord>, EngineError> {
    let first = &list[0];
    list.iter()
        .enumerate()
        .skip(1)
        .map(|(pos, other)| {
            let combined = match mode {
                Mode::Fortune => combine_and(first, other),
                Mode::Mahaney | Mode::OneTt => combine_or(first, other),
            };
            let q = oracle.query(&combined)?;
            let label = match mode {
                Mode::OneTt => {
                    Some(
                        oracle
                            .label(&combined)?
                            .ok_or_else(|| EngineError::MissingLabel {
                                oracle: oracle.name.clone(),
                            })?,
                    )
                }
                Mode::Mahaney | Mode::Fortune => None,
            };
            Ok(QueryRecord {
                index: pos + 1,
                q,
                label,
            })
        })
        .collect()
}

/// Lexicographically first `(i, j)`, `i < j`, with `q_i = q_j`.
fn first_collision(queries: &[QueryRecord]) -> Option<(usize, usize)> {
    let mut first_two: HashMap<&str, (usize, Option<usize>)> = HashMap::new();
    for q in queries {
        first_two
            .entry(q.q.as_str())
            .and_modify(|(_, second)| {
                second.get_or_insert(q.index);
            })
            .or_insert((q.index, None));
    }
    first_two
        .into_values()
        .filter_map(|(i, j)| j.map(|j| (i, j)))
        .min()
}

fn remove(
    list: &mut Vec<Formula>,
    kind: StageKind,
    queries: Vec<QueryRecord>,
    index: usize,
    collision_pair: Option<(usize, usize)>,
) -> StageEvent {
    list.remove(index - 1);
    StageEvent {
        kind,
        queries,
        removed_index: Some(index),
        collision_pair,
    }
}

fn stop(
    kind: StageKind,
    queries: Vec<QueryRecord>,
    collision_pair: Option<(usize, usize)>,
) -> StageEvent {
    StageEvent {
        kind,
        queries,
        removed_index: None,
        collision_pair,
    }
}

/// Decides SAT through a many-one reduction to a sparse set.
pub fn decide_sat_mahaney(
    formula: &Formula,
    oracle: &ReductionOracle,
) -> Result<(bool, PruneTrace), EngineError> {
    decide(formula, oracle, Mode::Mahaney, EngineConfig::default())
}

/// Decides TAUT through a many-one reduction from TAUT to a sparse set.
pub fn decide_taut_fortune(
    formula: &Formula,
    oracle: &ReductionOracle,
) -> Result<(bool, PruneTrace), EngineError> {
    decide(formula, oracle, Mode::Fortune, EngineConfig::default())
}

/// Decides SAT through a one-query reduction `(f, g)` to a sparse set.
pub fn decide_sat_one_tt(
    formula: &Formula,
    oracle: &ReductionOracle,
) -> Result<(bool, PruneTrace), EngineError> {
    decide(formula, oracle, Mode::OneTt, EngineConfig::default())
}

pub fn decide(
    root: &Formula,
    oracle: &ReductionOracle,
    mode: Mode,
    config: EngineConfig,
) -> Result<(bool, PruneTrace), EngineError> {
    let expected = match mode {
        Mode::Fortune => Direction::Taut,
        Mode::Mahaney | Mode::OneTt => Direction::Sat,
    };
    if oracle.direction != expected {
        return Err(EngineError::DirectionMismatch {
            mode,
            oracle: oracle.name.clone(),
            expected,
            found: oracle.direction,
        });
    }
    if mode == Mode::OneTt && !oracle.has_label() {
        return Err(EngineError::MissingLabel {
            oracle: oracle.name.clone(),
        });
    }
    let last_variable = root.max_variable().unwrap_or(0);
    if last_variable > config.max_variable {
        return Err(EngineError::VariableTooLarge {
            index: last_variable,
            max: config.max_variable,
        });
    }

    let width = width_cap(oracle, root.len(), mode)?;
    // a leaf with this value settles the run; leaves with the other value are dropped
    let deciding_value = mode != Mode::Fortune;
    let on_deciding_leaf = if deciding_value {
        Outcome::Accept
    } else {
        Outcome::Reject
    };
    let on_empty_level = if deciding_value {
        Outcome::Reject
    } else {
        Outcome::Accept
    };

    let mut levels = Vec::new();
    let mut outcome = None;
    if root.is_variable_free() {
        let value = root.evaluate(&Assignment::new())?;
        outcome = Some(if value == deciding_value {
            on_deciding_leaf
        } else {
            on_empty_level
        });
    }

    let mut current = vec![root.clone()];
    for variable in 1..=last_variable {
        if outcome.is_some() {
            break;
        }
        let mut seen = HashSet::new();
        let mut entering = Vec::new();
        let mut deciding_leaf = None;
        for parent in &current {
            for value in [false, true] {
                let child = parent.substitute(variable, value);
                if !seen.insert(child.serialize()) {
                    continue;
                }
                if child.is_variable_free() {
                    if child.evaluate(&Assignment::new())? != deciding_value {
                        continue;
                    }
                    if deciding_leaf.is_none() {
                        deciding_leaf = Some(child.clone());
                    }
                }
                entering.push(child);
            }
        }

        let level_index = variable as usize;
        if let Some(leaf) = deciding_leaf {
            levels.push(LevelRecord {
                level_index,
                entering,
                stages: Vec::new(),
                surviving: vec![leaf],
            });
            outcome = Some(on_deciding_leaf);
            break;
        }
        if entering.is_empty() {
            levels.push(LevelRecord {
                level_index,
                entering,
                stages: Vec::new(),
                surviving: Vec::new(),
            });
            outcome = Some(on_empty_level);
            break;
        }
        let pruned = prune_level(entering.clone(), oracle, width, mode)?;
        levels.push(LevelRecord {
            level_index,
            entering,
            stages: pruned.stages,
            surviving: pruned.surviving.clone(),
        });
        if let Some(early) = pruned.early {
            outcome = Some(early);
            break;
        }
        current = pruned.surviving;
    }

    // every formula is variable-free after the last level, so the loop decides
    let outcome = outcome.unwrap_or(on_empty_level);
    let query_count = levels
        .iter()
        .flat_map(|l: &LevelRecord| &l.stages)
        .map(|s| s.queries.len() as u64)
        .sum();
    let trace = PruneTrace {
        root: root.clone(),
        mode,
        width_cap: width.cap,
        t_value: width.t,
        levels,
        outcome,
        query_count,
    };
    Ok((outcome.accepted(), trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{brute_force_sat, parse};
    use crate::oracles::{
        chain_pclose_solver, fingerprint_reduction, one_tt_from_pclose, tally_reduction,
        taut_coreduction,
    };

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn width_examples() {
        let w = width_cap(&tally_reduction(), 2, Mode::Mahaney).unwrap();
        assert_eq!((w.t(), w.cap()), (9, 10));
        for n in [1, 7, 300] {
            let w = width_cap(&fingerprint_reduction(), n, Mode::Mahaney).unwrap();
            assert_eq!((w.t(), w.cap()), (1, 2));
        }
        assert_eq!(Width::for_mode(Mode::OneTt, 1).unwrap().cap(), 4);
        assert_eq!(Width::for_mode(Mode::Fortune, 1).unwrap().cap(), 2);
    }

    #[test]
    fn width_overflow() {
        let huge = tally_reduction().with_census_scale(u64::MAX / 4).unwrap();
        assert!(matches!(
            width_cap(&huge, 100, Mode::Mahaney),
            Err(EngineError::Bound(_))
        ));
        assert!(Width::for_mode(Mode::OneTt, u64::MAX / 2).is_err());
    }

    #[test]
    fn small_level_untouched() {
        let list = vec![f("x1"), f("x2")];
        let width = Width::for_mode(Mode::Mahaney, 1).unwrap();
        let pruned = prune_level(list.clone(), &tally_reduction(), width, Mode::Mahaney).unwrap();
        assert_eq!(pruned.surviving, list);
        assert!(pruned.stages.is_empty());
        assert_eq!(pruned.early, None);
    }

    #[test]
    fn tally_collision_removes_collider() {
        // φ_1 unsatisfiable, φ_2 and φ_3 satisfiable and of equal length
        let list = vec![f("(x1&!x1)"), f("(x2|x3)"), f("(x3|x2)")];
        let width = Width::for_mode(Mode::Mahaney, 1).unwrap();
        let pruned = prune_level(list.clone(), &tally_reduction(), width, Mode::Mahaney).unwrap();
        assert_eq!(pruned.stages.len(), 1);
        let stage = &pruned.stages[0];
        assert_eq!(stage.kind, StageKind::Case2RemoveCollider);
        assert_eq!(stage.collision_pair, Some((2, 3)));
        assert_eq!(stage.queries[0].q, "1".repeat(8 + 7 + 5));
        assert_eq!(pruned.surviving, vec![list[0].clone(), list[2].clone()]);
        assert!(pruned.surviving.iter().any(|g| brute_force_sat(g).unwrap()));
    }

    #[test]
    fn fingerprint_distinct_queries_remove_first() {
        let list = vec![f("(x1&!x1)"), f("(x2&!x2)"), f("(x3&!x3)")];
        let width = Width::for_mode(Mode::Mahaney, 1).unwrap();
        let pruned =
            prune_level(list.clone(), &fingerprint_reduction(), width, Mode::Mahaney).unwrap();
        assert_eq!(pruned.stages[0].kind, StageKind::Case1RemoveFirst);
        assert_eq!(pruned.stages[0].removed_index, Some(1));
        assert_eq!(pruned.surviving, list[1..].to_vec());
    }

    #[test]
    fn collision_is_lexicographically_first() {
        let q = |index, s: &str| QueryRecord {
            index,
            q: s.to_owned(),
            label: None,
        };
        let queries = [q(2, "a"), q(3, "b"), q(4, "b"), q(5, "a")];
        assert_eq!(first_collision(&queries), Some((2, 5)));
        assert_eq!(first_collision(&queries[..2]), None);
    }

    #[test]
    fn fortune_distinct_queries_reject() {
        let list = vec![f("x1"), f("x2"), f("x3")];
        let width = Width::for_mode(Mode::Fortune, 1).unwrap();
        let pruned = prune_level(list, &taut_coreduction(), width, Mode::Fortune).unwrap();
        assert_eq!(pruned.early, Some(Outcome::Reject));
        assert_eq!(pruned.stages[0].kind, StageKind::FortuneReject);
        assert!(pruned.surviving.is_empty());
    }

    #[test]
    fn basic_decisions() {
        let tally = tally_reduction();
        assert!(decide_sat_mahaney(&f("x1"), &tally).unwrap().0);
        assert!(!decide_sat_mahaney(&f("(x1&!x1)"), &tally).unwrap().0);
        let taut = taut_coreduction();
        assert!(decide_taut_fortune(&f("(x1|!x1)"), &taut).unwrap().0);
        assert!(!decide_taut_fortune(&f("x1"), &taut).unwrap().0);
        let pclose = one_tt_from_pclose(&chain_pclose_solver());
        assert!(decide_sat_one_tt(&f("x1"), &pclose).unwrap().0);
        assert!(!decide_sat_one_tt(&f("(x1&!x1)"), &pclose).unwrap().0);
    }

    #[test]
    fn variable_free_root() {
        let (sat, trace) = decide_sat_mahaney(&f("(1&!0)"), &tally_reduction()).unwrap();
        assert!(sat);
        assert!(trace.levels.is_empty());
        assert_eq!(trace.query_count, 0);
        let (taut, _) = decide_taut_fortune(&f("0"), &taut_coreduction()).unwrap();
        assert!(!taut);
    }

    #[test]
    fn absent_variables_are_branched_and_merged() {
        let (sat, trace) = decide_sat_mahaney(&f("(x3&!x3)"), &tally_reduction()).unwrap();
        assert!(!sat);
        assert_eq!(trace.levels.len(), 3);
        assert_eq!(trace.levels[0].entering, vec![f("(x3&!x3)")]);
        assert!(trace.levels[2].entering.is_empty());
    }

    #[test]
    fn errors() {
        let tally = tally_reduction();
        assert!(matches!(
            decide_taut_fortune(&f("x1"), &tally),
            Err(EngineError::DirectionMismatch { .. })
        ));
        assert!(matches!(
            decide_sat_one_tt(&f("x1"), &tally),
            Err(EngineError::MissingLabel { .. })
        ));
        assert!(matches!(
            decide_sat_mahaney(&f("x65"), &tally),
            Err(EngineError::VariableTooLarge { index: 65, max: 64 })
        ));
        let wide = EngineConfig { max_variable: 100 };
        assert!(decide(&f("x65"), &tally, Mode::Mahaney, wide).unwrap().0);
        assert_eq!(
            prune_level(
                Vec::new(),
                &tally,
                Width::for_mode(Mode::Mahaney, 1).unwrap(),
                Mode::Mahaney
            ),
            Err(EngineError::EmptyLevel)
        );
    }
}
