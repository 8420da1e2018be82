use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use super::{Direction, QueryLabel, ReductionOracle};
use crate::formula::{brute_force_sat, brute_force_taut, Formula};

/// A corpus formula on which the reduction gives the wrong answer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub formula: String,
    /// SAT or TAUT membership by truth table.
    pub expected: bool,
    pub query: String,
    pub label: Option<QueryLabel>,
    pub member: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StretchViolation {
    pub formula: String,
    pub query_length: usize,
    pub bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub oracle: String,
    pub corpus_size: usize,
    pub valid: bool,
    pub counterexamples: Vec<Counterexample>,
    pub stretch_violations: Vec<StretchViolation>,
    pub census_ok: bool,
    /// Formulas the truth-table oracle or the query map could not handle.
    pub skipped: Vec<String>,
}

/// Checks `ground_truth(φ) ⇔ f(φ) ∈ L` (or the one-query contract for
/// labeled oracles) over `corpus`, plus the stretch bound on every query and
/// the census bound on the members among the query outputs.
pub fn verify_reduction(oracle: &ReductionOracle, corpus: &[Formula]) -> ValidityReport {
    let mut counterexamples = Vec::new();
    let mut stretch_violations = Vec::new();
    let mut skipped = Vec::new();
    let mut member_outputs = BTreeSet::new();

    for phi in corpus {
        let truth = match oracle.direction {
            Direction::Sat => brute_force_sat(phi),
            Direction::Taut => brute_force_taut(phi),
        };
        let (Ok(expected), Ok(query), Ok(label)) =
            (truth, oracle.raw_query(phi), oracle.label(phi))
        else {
            skipped.push(phi.serialize());
            continue;
        };

        let query_length = query.chars().count();
        match oracle.stretch_bound().eval(phi.len() as u64) {
            Ok(bound) if query_length as u64 > bound => stretch_violations.push(StretchViolation {
                formula: phi.serialize(),
                query_length,
                bound,
            }),
            _ => {}
        }

        let member = oracle.target().contains(&query);
        if member {
            member_outputs.insert((query_length, query.clone()));
        }
        let answer = match label {
            Some(QueryLabel::Neg) => !member,
            Some(QueryLabel::Orig) | None => member,
        };
        if answer != expected {
            counterexamples.push(Counterexample {
                formula: phi.serialize(),
                expected,
                query,
                label,
                member,
            });
        }
    }

    let census_ok = census_within_bound(oracle, &member_outputs);
    ValidityReport {
        oracle: oracle.name.clone(),
        corpus_size: corpus.len(),
        valid: counterexamples.is_empty() && stretch_violations.is_empty() && census_ok,
        counterexamples,
        stretch_violations,
        census_ok,
        skipped,
    }
}

/// For each output length `n`, the distinct members of length ≤ n seen
/// among the outputs must not exceed `s(n)`.
fn census_within_bound(oracle: &ReductionOracle, members: &BTreeSet<(usize, String)>) -> bool {
    let lengths: BTreeSet<usize> = members.iter().map(|(len, _)| *len).collect();
    lengths.into_iter().all(|n| {
        let count = members.iter().filter(|(len, _)| *len <= n).count() as u64;
        match oracle.target().census_bound().eval(n as u64) {
            Ok(bound) => count <= bound,
            Err(_) => true,
        }
    })
}

impl ValidityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        writeln!(out, "oracle: {}", self.oracle)?;
        writeln!(out, "corpus: {} formulas", self.corpus_size)?;
        writeln!(out, "valid: {}", self.valid)?;
        writeln!(out, "census_ok: {}", self.census_ok)?;
        writeln!(out, "counterexamples: {}", self.counterexamples.len())?;
        for c in &self.counterexamples {
            let label = c.label.map(|l| format!(" label={l}")).unwrap_or_default();
            writeln!(
                out,
                "  counterexample {} expected={} query={:?}{label} member={}",
                c.formula, c.expected, c.query, c.member
            )?;
        }
        writeln!(out, "stretch_violations: {}", self.stretch_violations.len())?;
        for v in &self.stretch_violations {
            writeln!(
                out,
                "  stretch {} |q|={} bound={}",
                v.formula, v.query_length, v.bound
            )?;
        }
        if !self.skipped.is_empty() {
            writeln!(out, "skipped: {}", self.skipped.len())?;
        }
        f.write_str(&out)
    }
}
