//! Almost-polynomial-time SAT deciders and the reduction built from them.
//!
//! A decider runs as a sequence of abstract steps. Clocked at its declared
//! bound `t(|φ|)`, it either halts or times out; the formulas that time out
//! form its slow set `N`, and `N' = N ∩ SAT`. When `N'` is nonempty,
//!
//! ```text
//! reduce(φ) = x_yes   if A(φ) accepts within t(|φ|) steps
//!             x_no    if A(φ) rejects within t(|φ|) steps
//!             φ       otherwise
//! ```
//!
//! is a many-one reduction from SAT to `N'`. When `N'` is empty, the clocked
//! run that rejects on timeout already decides SAT.

use serde::{Deserialize, Serialize};

use crate::formula::{brute_force_sat, Formula, FormulaError, VarIndex};
use crate::poly::PolyError;
use crate::Poly;

pub const DEFAULT_SAFETY_CAP: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Accept,
    Reject,
}

pub enum Step<S> {
    Continue(S),
    Halt(Verdict),
}

pub trait SteppedDecider {
    type State;

    fn name(&self) -> &str;
    fn init(&self, formula: &Formula) -> Self::State;
    fn step(&self, state: Self::State) -> Step<Self::State>;
    /// The clock `t(n)`, in steps.
    fn declared_bound(&self) -> &Poly;

    fn safety_cap(&self) -> u64 {
        DEFAULT_SAFETY_CAP
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "UPPERCASE")]
pub enum RunResult {
    Halted { verdict: Verdict, steps: u64 },
    Timeout { steps: u64 },
}

impl RunResult {
    pub fn steps(&self) -> u64 {
        match *self {
            RunResult::Halted { steps, .. } | RunResult::Timeout { steps } => steps,
        }
    }

    pub fn verdict(&self) -> Option<Verdict> {
        match *self {
            RunResult::Halted { verdict, .. } => Some(verdict),
            RunResult::Timeout { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AptError {
    #[error("step budget must be at least 1")]
    ZeroBudget,
    #[error("decider {decider} ran past its safety cap of {cap} steps on {formula}")]
    SafetyCapExceeded {
        decider: String,
        formula: String,
        cap: u64,
    },
    #[error("decider {decider} answers {claimed} on {formula}, truth table says {truth}")]
    WrongDecider {
        decider: String,
        formula: String,
        claimed: bool,
        truth: bool,
    },
    #[error(transparent)]
    Bound(#[from] PolyError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// Runs at most `budget` steps; the step count is exact.
pub fn run_bounded<D: SteppedDecider>(
    decider: &D,
    formula: &Formula,
    budget: u64,
) -> Result<RunResult, AptError> {
    if budget == 0 {
        return Err(AptError::ZeroBudget);
    }
    let cap = decider.safety_cap();
    let mut state = decider.init(formula);
    let mut steps = 0;
    loop {
        if steps == budget {
            return Ok(RunResult::Timeout { steps });
        }
        if steps == cap {
            return Err(AptError::SafetyCapExceeded {
                decider: decider.name().to_owned(),
                formula: formula.serialize(),
                cap,
            });
        }
        steps += 1;
        match decider.step(state) {
            Step::Continue(next) => state = next,
            Step::Halt(verdict) => return Ok(RunResult::Halted { verdict, steps }),
        }
    }
}

/// Clocked run with budget `t(|φ|)`.
pub fn run_clocked<D: SteppedDecider>(
    decider: &D,
    formula: &Formula,
) -> Result<RunResult, AptError> {
    let budget = decider.declared_bound().eval(formula.len() as u64)?;
    run_bounded(decider, formula, budget.max(1))
}

/// Unclocked run, limited only by the safety cap.
pub fn run_to_completion<D: SteppedDecider>(
    decider: &D,
    formula: &Formula,
) -> Result<Verdict, AptError> {
    match run_bounded(decider, formula, u64::MAX)? {
        RunResult::Halted { verdict, .. } => Ok(verdict),
        RunResult::Timeout { .. } => unreachable!("the safety cap stops the run first"),
    }
}

pub fn is_slow<D: SteppedDecider>(decider: &D, formula: &Formula) -> Result<bool, AptError> {
    Ok(matches!(
        run_clocked(decider, formula)?,
        RunResult::Timeout { .. }
    ))
}

/// Membership in `N' = N ∩ SAT`.
pub fn in_slow_sat<D: SteppedDecider>(decider: &D, formula: &Formula) -> Result<bool, AptError> {
    Ok(is_slow(decider, formula)? && brute_force_sat(formula)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlowSet {
    /// `N ∩ corpus`, in corpus order.
    pub slow: Vec<Formula>,
    /// `N' ∩ corpus`.
    pub slow_sat: Vec<Formula>,
}

pub fn slow_set<D: SteppedDecider>(decider: &D, corpus: &[Formula]) -> Result<SlowSet, AptError> {
    let mut slow = Vec::new();
    let mut slow_sat = Vec::new();
    for phi in corpus {
        if is_slow(decider, phi)? {
            if brute_force_sat(phi)? {
                slow_sat.push(phi.clone());
            }
            slow.push(phi.clone());
        }
    }
    Ok(SlowSet { slow, slow_sat })
}

/// Either the reduction to `N'` or, when `N'` misses the corpus, the clocked
/// decider itself.
pub enum AptConstruction<'a, D: SteppedDecider> {
    Reduction {
        decider: &'a D,
        x_yes: Formula,
        x_no: Formula,
    },
    Direct {
        decider: &'a D,
    },
}

impl<D: SteppedDecider> AptConstruction<'_, D> {
    pub fn decider(&self) -> &D {
        match self {
            AptConstruction::Reduction { decider, .. } | AptConstruction::Direct { decider } => {
                decider
            }
        }
    }

    /// The three-way map; `None` for the direct branch.
    pub fn reduce(&self, formula: &Formula) -> Result<Option<Formula>, AptError> {
        let AptConstruction::Reduction {
            decider,
            x_yes,
            x_no,
        } = self
        else {
            return Ok(None);
        };
        Ok(Some(match run_clocked(*decider, formula)?.verdict() {
            Some(Verdict::Accept) => x_yes.clone(),
            Some(Verdict::Reject) => x_no.clone(),
            None => formula.clone(),
        }))
    }

    /// Clocked run rejecting on timeout; `None` for the reduction branch.
    pub fn or_else(&self, formula: &Formula) -> Result<Option<bool>, AptError> {
        let AptConstruction::Direct { decider } = self else {
            return Ok(None);
        };
        Ok(Some(
            run_clocked(*decider, formula)?.verdict() == Some(Verdict::Accept),
        ))
    }
}

/// Checks the decider against truth tables on `corpus`, then picks the
/// branch. `x_yes` is the first `N'` formula in corpus order and `x_no` the
/// first corpus formula outside `N'`.
pub fn build_apt_construction<'a, D: SteppedDecider>(
    decider: &'a D,
    corpus: &[Formula],
) -> Result<AptConstruction<'a, D>, AptError> {
    for phi in corpus {
        let claimed = run_to_completion(decider, phi)? == Verdict::Accept;
        let truth = brute_force_sat(phi)?;
        if claimed != truth {
            return Err(AptError::WrongDecider {
                decider: decider.name().to_owned(),
                formula: phi.serialize(),
                claimed,
                truth,
            });
        }
    }
    let slow = slow_set(decider, corpus)?;
    let Some(x_yes) = slow.slow_sat.first().cloned() else {
        return Ok(AptConstruction::Direct { decider });
    };
    let x_no = corpus
        .iter()
        .find(|phi| !slow.slow_sat.contains(phi))
        .cloned()
        // N' is sparse, so some short unsatisfiable constant lies outside it
        .unwrap_or(Formula::Const(false));
    Ok(AptConstruction::Reduction {
        decider,
        x_yes,
        x_no,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AptRow {
    pub formula: Formula,
    pub run: RunResult,
    pub sat: bool,
    /// Reduction branch: the image. Direct branch: absent.
    pub image: Option<Formula>,
    /// Reduction branch: whether the image lies in `N'`. Direct branch: the
    /// clocked verdict.
    pub answer: bool,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AptReport {
    pub decider: String,
    pub branch: String,
    pub x_yes: Option<Formula>,
    pub x_no: Option<Formula>,
    pub slow: Vec<Formula>,
    pub slow_sat: Vec<Formula>,
    pub rows: Vec<AptRow>,
    pub valid: bool,
}

impl AptReport {
    pub fn summary(&self) -> String {
        match (self.branch.as_str(), self.valid) {
            ("reduction", true) => "reduction branch, valid over corpus".to_owned(),
            ("reduction", false) => "reduction branch, INVALID over corpus".to_owned(),
            (_, true) => "empty-N′ branch, decider agrees with brute force".to_owned(),
            (_, false) => "empty-N′ branch, decider DISAGREES with brute force".to_owned(),
        }
    }
}

/// Builds the construction and checks it formula by formula:
/// `φ ∈ SAT ⇔ reduce(φ) ∈ N'`, or `or_else(φ) = sat(φ)`.
pub fn apt_report<D: SteppedDecider>(
    decider: &D,
    corpus: &[Formula],
) -> Result<AptReport, AptError> {
    let construction = build_apt_construction(decider, corpus)?;
    let slow = slow_set(decider, corpus)?;
    let mut rows = Vec::with_capacity(corpus.len());
    for phi in corpus {
        let run = run_clocked(decider, phi)?;
        let sat = brute_force_sat(phi)?;
        let (image, answer) = match construction.reduce(phi)? {
            Some(image) => {
                let answer = in_slow_sat(decider, &image)?;
                (Some(image), answer)
            }
            None => (None, construction.or_else(phi)?.expect("direct branch")),
        };
        rows.push(AptRow {
            formula: phi.clone(),
            run,
            sat,
            image,
            answer,
            agrees: answer == sat,
        });
    }
    let (branch, x_yes, x_no) = match &construction {
        AptConstruction::Reduction { x_yes, x_no, .. } => {
            ("reduction", Some(x_yes.clone()), Some(x_no.clone()))
        }
        AptConstruction::Direct { .. } => ("empty", None, None),
    };
    Ok(AptReport {
        decider: decider.name().to_owned(),
        branch: branch.to_owned(),
        x_yes,
        x_no,
        slow: slow.slow,
        slow_sat: slow.slow_sat,
        valid: rows.iter().all(|r| r.agrees),
        rows,
    })
}

/// Truth-table SAT, one assignment per step, optionally idling for `2^|φ|`
/// steps first on the tautology chain `(x1|!x1)`, `((x1|!x1)|1)`, …
#[derive(Clone, Debug)]
pub struct TruthTableDecider {
    name: String,
    slow_on_chain: bool,
    bound: Poly,
    safety_cap: u64,
}

pub struct TruthTableRun {
    formula: Formula,
    vars: Vec<VarIndex>,
    idle: u64,
    next: u64,
    total: u64,
}

/// `n^2 + 1` steps: enough for `2^v + 1` table steps whenever the `v`
/// variables fit in the formula, up to about eleven variables.
fn table_clock() -> Poly {
    Poly::new(vec![1, 0, 1]).expect("nonempty")
}

/// Brute force with a sparse slow path on the tautology chain.
pub fn demo_decider() -> TruthTableDecider {
    TruthTableDecider {
        name: "demo".to_owned(),
        slow_on_chain: true,
        bound: table_clock(),
        safety_cap: DEFAULT_SAFETY_CAP,
    }
}

/// Brute force, never slow.
pub fn fast_decider() -> TruthTableDecider {
    TruthTableDecider {
        name: "fast".to_owned(),
        slow_on_chain: false,
        bound: table_clock(),
        safety_cap: DEFAULT_SAFETY_CAP,
    }
}

impl TruthTableDecider {
    pub fn with_safety_cap(mut self, cap: u64) -> Self {
        self.safety_cap = cap;
        self
    }
}

/// The `k`-th member of `(x1|!x1)`, `((x1|!x1)|1)`, `(((x1|!x1)|1)|1)`, …
pub fn slow_chain(k: usize) -> String {
    let mut s = "(x1|!x1)".to_owned();
    for _ in 0..k {
        s = format!("({s}|1)");
    }
    s
}

fn on_slow_chain(text: &str) -> bool {
    let len = text.len();
    len >= 8 && (len - 8).is_multiple_of(4) && text == slow_chain((len - 8) / 4)
}

impl SteppedDecider for TruthTableDecider {
    type State = TruthTableRun;

    fn name(&self) -> &str {
        &self.name
    }

    fn init(&self, formula: &Formula) -> TruthTableRun {
        let vars: Vec<VarIndex> = formula.variables().into_iter().collect();
        let total = 1u64.checked_shl(vars.len() as u32).unwrap_or(u64::MAX);
        let idle = if self.slow_on_chain && on_slow_chain(&formula.serialize()) {
            1u64.checked_shl(formula.len() as u32).unwrap_or(u64::MAX)
        } else {
            0
        };
        TruthTableRun {
            formula: formula.clone(),
            vars,
            idle,
            next: 0,
            total,
        }
    }

    fn step(&self, mut run: TruthTableRun) -> Step<TruthTableRun> {
        if run.idle > 0 {
            run.idle -= 1;
            return Step::Continue(run);
        }
        if run.next == run.total {
            return Step::Halt(Verdict::Reject);
        }
        let mask = run.next;
        let vars = &run.vars;
        let lookup = |i: VarIndex| vars.binary_search(&i).ok().map(|pos| mask >> pos & 1 == 1);
        let value = run
            .formula
            .evaluate_with(&lookup)
            .expect("all variables bound");
        if value {
            return Step::Halt(Verdict::Accept);
        }
        run.next += 1;
        Step::Continue(run)
    }

    fn declared_bound(&self) -> &Poly {
        &self.bound
    }

    fn safety_cap(&self) -> u64 {
        self.safety_cap
    }
}
