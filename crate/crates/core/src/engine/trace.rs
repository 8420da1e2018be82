use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::formula::Formula;
use crate::oracles::QueryLabel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Mode {
    /// SAT through a many-one reduction, disjunctive queries.
    Mahaney,
    /// TAUT through a many-one reduction, conjunctive queries.
    Fortune,
    /// SAT through a one-query reduction with answer labels.
    OneTt,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Mahaney => "MAHANEY",
            Mode::Fortune => "FORTUNE",
            Mode::OneTt => "ONE_TT",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Outcome {
    Accept,
    Reject,
}

impl Outcome {
    pub fn accepted(self) -> bool {
        self == Outcome::Accept
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StageKind {
    #[serde(rename = "CASE1_REMOVE_FIRST")]
    Case1RemoveFirst,
    #[serde(rename = "CASE2_REMOVE_COLLIDER")]
    Case2RemoveCollider,
    OneTtAccept,
    FortuneReject,
}

/// `q_i = f(combine(φ_1, φ_i))`, with `b_i = g(…)` in one-query mode.
/// Indices are 1-based positions in the list the stage saw.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryRecord {
    pub index: usize,
    pub q: String,
    pub label: Option<QueryLabel>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageEvent {
    pub kind: StageKind,
    pub queries: Vec<QueryRecord>,
    pub removed_index: Option<usize>,
    pub collision_pair: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    /// Level `ℓ` has every variable up to `x_ℓ` replaced by constants.
    pub level_index: usize,
    /// After branching, merging duplicates and dropping decided leaves.
    pub entering: Vec<Formula>,
    pub stages: Vec<StageEvent>,
    /// After pruning. When the level ends the run early this is the
    /// witness for the outcome: the deciding leaf, or the formulas a
    /// one-query acceptance rests on. Empty after a conjunctive Case 1 stop.
    pub surviving: Vec<Formula>,
}

impl LevelRecord {
    /// The formula list each stage operated on, rebuilt from `entering` by
    /// replaying the removals.
    pub fn stage_inputs(&self) -> Vec<Vec<Formula>> {
        let mut list = self.entering.clone();
        let mut inputs = Vec::with_capacity(self.stages.len());
        for stage in &self.stages {
            inputs.push(list.clone());
            if let Some(i) = stage.removed_index {
                list.remove(i - 1);
            }
        }
        inputs
    }

    pub fn ended_early(&self) -> bool {
        self.stages
            .last()
            .is_some_and(|s| matches!(s.kind, StageKind::OneTtAccept | StageKind::FortuneReject))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneTrace {
    pub root: Formula,
    pub mode: Mode,
    pub width_cap: u64,
    pub t_value: u64,
    pub levels: Vec<LevelRecord>,
    pub outcome: Outcome,
    pub query_count: u64,
}

impl PruneTrace {
    /// Number of branching levels: the largest variable index of the root.
    pub fn variable_levels(&self) -> u64 {
        u64::from(self.root.max_variable().unwrap_or(0))
    }

    /// `levels · cap · (2·cap − 1)`: at most `cap` removal stages per level,
    /// each with at most `2·cap − 1` queries.
    pub fn query_budget(&self) -> u64 {
        let cap = self.width_cap;
        self.variable_levels()
            .saturating_mul(cap)
            .saturating_mul((2 * cap).saturating_sub(1))
    }

    /// Structural invariants that hold for any oracle, valid or not.
    pub fn structural_violations(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let mut stage_queries = 0u64;
        for level in &self.levels {
            let at = level.level_index;
            if level.surviving.len() as u64 > self.width_cap {
                problems.push(format!(
                    "level {at}: {} survivors exceed width cap {}",
                    level.surviving.len(),
                    self.width_cap
                ));
            }
            let entering: HashSet<String> = level.entering.iter().map(|f| f.serialize()).collect();
            if entering.len() != level.entering.len() {
                problems.push(format!("level {at}: duplicate entering formulas"));
            }
            if let Some(f) = level
                .surviving
                .iter()
                .find(|f| !entering.contains(&Formula::serialize(f)))
            {
                problems.push(format!("level {at}: survivor {f} was not entering"));
            }
            for (stage, input) in level.stages.iter().zip(level.stage_inputs()) {
                stage_queries += stage.queries.len() as u64;
                if stage.queries.len() + 1 != input.len() {
                    problems.push(format!("level {at}: stage query count mismatch"));
                }
                let qs: Vec<&str> = stage.queries.iter().map(|q| q.q.as_str()).collect();
                let distinct = qs.iter().collect::<HashSet<_>>().len() == qs.len();
                match stage.kind {
                    StageKind::Case1RemoveFirst if !distinct => {
                        problems.push(format!("level {at}: Case 1 with colliding queries"))
                    }
                    StageKind::Case2RemoveCollider => match stage.collision_pair {
                        Some((i, j)) if i >= 2 && i < j && qs[i - 2] == qs[j - 2] => {}
                        _ => problems.push(format!("level {at}: malformed Case 2 collision")),
                    },
                    _ => {}
                }
            }
        }
        if stage_queries != self.query_count {
            problems.push(format!(
                "query_count {} differs from stage total {stage_queries}",
                self.query_count
            ));
        }
        if self.query_count > self.query_budget() {
            problems.push(format!(
                "query_count {} exceeds budget {}",
                self.query_count,
                self.query_budget()
            ));
        }
        problems
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }
}
