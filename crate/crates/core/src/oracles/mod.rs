//! Many-one reductions into sparse languages, modeled at desk scale.
//!
//! A [`ReductionOracle`] bundles the query map `f`, its declared stretch
//! bound `r`, the target [`SparseLanguage`] with census bound `s`, and for
//! one-query truth-table reductions the label map `g`. "Polynomial time" is
//! represented only by these declared bounds; the built-in maps use
//! truth tables internally.
//!
//! The pruning engine only ever calls [`ReductionOracle::query`] and
//! [`ReductionOracle::label`]. Target membership is consulted by
//! [`verify_reduction`] and census checks, never while deciding.

mod builtin;
mod verify;

use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::formula::{Formula, FormulaError};
use crate::poly::PolyError;
use crate::Poly;

pub use builtin::{
    broken_reduction, builtin_names, by_name, chain_disagreement, chain_pclose_solver,
    fingerprint_reduction, one_tt_from_pclose, tally_reduction, taut_coreduction,
};
pub use verify::{verify_reduction, Counterexample, StretchViolation, ValidityReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Direction {
    Sat,
    Taut,
}

/// Whether the membership answer for a query is taken as is or negated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum QueryLabel {
    Orig,
    Neg,
}

impl fmt::Display for QueryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QueryLabel::Orig => "ORIG",
            QueryLabel::Neg => "NEG",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Bound(#[from] PolyError),
    #[error("oracle {oracle}: |f({formula})| = {query_len} exceeds stretch bound {bound}")]
    StretchViolation {
        oracle: String,
        formula: String,
        query_len: usize,
        bound: u64,
    },
}

pub type MembershipFn = Arc<dyn Fn(&str) -> bool + Send + Sync>;
/// Lists the members of a language with length at most `n`.
pub type EnumeratorFn = Arc<dyn Fn(usize) -> Vec<String> + Send + Sync>;
pub type QueryFn = Arc<dyn Fn(&Formula) -> Result<String, OracleError> + Send + Sync>;
pub type LabelFn = Arc<dyn Fn(&Formula) -> Result<QueryLabel, OracleError> + Send + Sync>;
pub type DecideFn = Arc<dyn Fn(&Formula) -> Result<bool, OracleError> + Send + Sync>;

/// A language with a declared bound `s(n)` on its members of length at most `n`.
#[derive(Clone)]
pub struct SparseLanguage {
    pub name: String,
    member: MembershipFn,
    census_bound: Poly,
    enumerator: Option<EnumeratorFn>,
}

impl SparseLanguage {
    pub fn new(name: impl Into<String>, member: MembershipFn, census_bound: Poly) -> Self {
        SparseLanguage {
            name: name.into(),
            member,
            census_bound,
            enumerator: None,
        }
    }

    pub fn with_enumerator(mut self, enumerator: EnumeratorFn) -> Self {
        self.enumerator = Some(enumerator);
        self
    }

    pub fn contains(&self, word: &str) -> bool {
        (self.member)(word)
    }

    pub fn census_bound(&self) -> &Poly {
        &self.census_bound
    }

    /// Members of length at most `n`, via the language's own enumerator.
    /// Candidates are re-checked against the membership predicate.
    pub fn census(&self, n: usize) -> Option<u64> {
        let enumerate = self.enumerator.as_ref()?;
        let mut words: Vec<String> = enumerate(n)
            .into_iter()
            .filter(|w| w.chars().count() <= n && self.contains(w))
            .collect();
        words.sort();
        words.dedup();
        Some(words.len() as u64)
    }

    /// Census within the declared bound for every length up to `max_len`.
    /// `None` when the language has no enumerator.
    pub fn census_sound_up_to(&self, max_len: usize) -> Option<bool> {
        for n in 0..=max_len {
            let count = self.census(n)?;
            match self.census_bound.eval(n as u64) {
                Ok(bound) if count <= bound => {}
                Ok(_) => return Some(false),
                // an overflowing bound is larger than any count
                Err(_) => {}
            }
        }
        Some(true)
    }

    fn with_census_bound(&self, census_bound: Poly) -> Self {
        SparseLanguage {
            census_bound,
            ..self.clone()
        }
    }
}

impl fmt::Debug for SparseLanguage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SparseLanguage")
            .field("name", &self.name)
            .field("census_bound", &self.census_bound)
            .finish_non_exhaustive()
    }
}

/// A reduction from SAT (or TAUT) to a sparse language.
#[derive(Clone)]
pub struct ReductionOracle {
    pub name: String,
    pub direction: Direction,
    target: SparseLanguage,
    f: QueryFn,
    stretch_bound: Poly,
    label: Option<LabelFn>,
}

impl ReductionOracle {
    pub fn new(
        name: impl Into<String>,
        direction: Direction,
        target: SparseLanguage,
        f: QueryFn,
        stretch_bound: Poly,
    ) -> Self {
        ReductionOracle {
            name: name.into(),
            direction,
            target,
            f,
            stretch_bound,
            label: None,
        }
    }

    pub fn with_label(mut self, label: LabelFn) -> Self {
        self.label = Some(label);
        self
    }

    pub fn target(&self) -> &SparseLanguage {
        &self.target
    }

    pub fn stretch_bound(&self) -> &Poly {
        &self.stretch_bound
    }

    pub fn has_label(&self) -> bool {
        self.label.is_some()
    }

    /// `f(φ)`, checked against the stretch bound.
    pub fn query(&self, formula: &Formula) -> Result<String, OracleError> {
        let q = (self.f)(formula)?;
        let bound = self.stretch_bound.eval(formula.len() as u64)?;
        let query_len = q.chars().count();
        if query_len as u64 > bound {
            return Err(OracleError::StretchViolation {
                oracle: self.name.clone(),
                formula: formula.serialize(),
                query_len,
                bound,
            });
        }
        Ok(q)
    }

    /// `f(φ)` without the stretch check.
    pub(crate) fn raw_query(&self, formula: &Formula) -> Result<String, OracleError> {
        (self.f)(formula)
    }

    /// `g(φ)`, or `None` for a plain many-one reduction.
    pub fn label(&self, formula: &Formula) -> Result<Option<QueryLabel>, OracleError> {
        self.label.as_ref().map(|g| g(formula)).transpose()
    }

    /// Same reduction with the target's census bound multiplied by `factor`.
    pub fn with_census_scale(&self, factor: u64) -> Result<Self, PolyError> {
        let scaled = self.target.census_bound.scaled(factor)?;
        Ok(ReductionOracle {
            target: self.target.with_census_bound(scaled),
            ..self.clone()
        })
    }

    /// Wraps the query map so every call is appended to the returned log in
    /// call order.
    pub fn recording(&self) -> (ReductionOracle, QueryLog) {
        let log = QueryLog::default();
        let inner = Arc::clone(&self.f);
        let sink = log.clone();
        let f: QueryFn = Arc::new(move |formula| {
            let q = inner(formula)?;
            sink.push(formula.serialize(), q.clone());
            Ok(q)
        });
        (ReductionOracle { f, ..self.clone() }, log)
    }
}

impl fmt::Debug for ReductionOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReductionOracle")
            .field("name", &self.name)
            .field("direction", &self.direction)
            .field("target", &self.target)
            .field("stretch_bound", &self.stretch_bound)
            .field("labeled", &self.label.is_some())
            .finish()
    }
}

/// Ordered `(input, output)` pairs of the query map.
#[derive(Clone, Default)]
pub struct QueryLog {
    entries: Arc<Mutex<Vec<(String, String)>>>,
}

impl QueryLog {
    fn push(&self, input: String, output: String) {
        self.entries
            .lock()
            .expect("query log poisoned")
            .push((input, output));
    }

    pub fn entries(&self) -> Vec<(String, String)> {
        self.entries.lock().expect("query log poisoned").clone()
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("query log poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A polynomial-time heuristic for SAT that errs on a sparse set of formulas.
#[derive(Clone)]
pub struct PCloseSolver {
    pub name: String,
    decide: DecideFn,
    disagreement_census: Poly,
    known_disagreements: Option<EnumeratorFn>,
}

impl PCloseSolver {
    pub fn new(name: impl Into<String>, decide: DecideFn, disagreement_census: Poly) -> Self {
        PCloseSolver {
            name: name.into(),
            decide,
            disagreement_census,
            known_disagreements: None,
        }
    }

    /// Enumerator for the disagreement set, used for census checks.
    pub fn with_known_disagreements(mut self, enumerator: EnumeratorFn) -> Self {
        self.known_disagreements = Some(enumerator);
        self
    }

    pub fn decide(&self, formula: &Formula) -> Result<bool, OracleError> {
        (self.decide)(formula)
    }

    pub fn disagreement_census(&self) -> &Poly {
        &self.disagreement_census
    }
}

impl fmt::Debug for PCloseSolver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PCloseSolver")
            .field("name", &self.name)
            .field("disagreement_census", &self.disagreement_census)
            .finish_non_exhaustive()
    }
}
