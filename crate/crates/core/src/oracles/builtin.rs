use std::sync::Arc;

use super::{Direction, PCloseSolver, QueryLabel, ReductionOracle, SparseLanguage};
use crate::formula::{brute_force_sat, brute_force_taut, parse, Formula};
use crate::Poly;

const TALLY: &str = "tally";
const FINGERPRINT: &str = "fingerprint";
const BROKEN: &str = "broken";
const TAUT: &str = "taut";
const PCLOSE: &str = "pclose";

/// Oracle names accepted by [`by_name`].
pub fn builtin_names() -> &'static [&'static str] {
    &[TALLY, FINGERPRINT, BROKEN, TAUT, PCLOSE]
}

pub fn by_name(name: &str) -> Option<ReductionOracle> {
    match name {
        TALLY => Some(tally_reduction()),
        FINGERPRINT => Some(fingerprint_reduction()),
        BROKEN => Some(broken_reduction()),
        TAUT => Some(taut_coreduction()),
        PCLOSE => Some(one_tt_from_pclose(&chain_pclose_solver())),
        _ => None,
    }
}

/// `{1^k : k ≥ 1}`, with `n` members of length at most `n`.
fn ones_language() -> SparseLanguage {
    SparseLanguage::new(
        "ones",
        Arc::new(|w: &str| !w.is_empty() && w.bytes().all(|b| b == b'1')),
        Poly::identity(),
    )
    .with_enumerator(Arc::new(|n| (1..=n).map(|k| "1".repeat(k)).collect()))
}

/// `{"1"}`
fn singleton_language() -> SparseLanguage {
    SparseLanguage::new("singleton", Arc::new(|w: &str| w == "1"), Poly::constant(1))
        .with_enumerator(Arc::new(|n| {
            if n >= 1 {
                vec!["1".to_owned()]
            } else {
                Vec::new()
            }
        }))
}

/// `f(φ)` is a block of `|φ|` ones when φ is satisfiable and `|φ|` zeros otherwise.
pub fn tally_reduction() -> ReductionOracle {
    ReductionOracle::new(
        TALLY,
        Direction::Sat,
        ones_language(),
        Arc::new(|phi: &Formula| {
            let digit = if brute_force_sat(phi)? { "1" } else { "0" };
            Ok(digit.repeat(phi.len()))
        }),
        Poly::identity(),
    )
}

/// `f(φ) = "1"` for satisfiable φ and `"0" + φ` otherwise, so distinct
/// unsatisfiable formulas never collide.
pub fn fingerprint_reduction() -> ReductionOracle {
    ReductionOracle::new(
        FINGERPRINT,
        Direction::Sat,
        singleton_language(),
        Arc::new(|phi: &Formula| {
            Ok(if brute_force_sat(phi)? {
                "1".to_owned()
            } else {
                format!("0{phi}")
            })
        }),
        Poly::shifted(1),
    )
}

/// The tally map with its answer flipped on formulas of length exactly 8.
/// Not a valid reduction.
pub fn broken_reduction() -> ReductionOracle {
    ReductionOracle::new(
        BROKEN,
        Direction::Sat,
        ones_language(),
        Arc::new(|phi: &Formula| {
            let sat = brute_force_sat(phi)? ^ (phi.len() == 8);
            Ok(if sat { "1" } else { "0" }.repeat(phi.len()))
        }),
        Poly::identity(),
    )
}

/// TAUT to `{"1"}`: tautologies map to `"1"`, everything else to `"0" + φ`.
pub fn taut_coreduction() -> ReductionOracle {
    ReductionOracle::new(
        TAUT,
        Direction::Taut,
        singleton_language(),
        Arc::new(|phi: &Formula| {
            Ok(if brute_force_taut(phi)? {
                "1".to_owned()
            } else {
                format!("0{phi}")
            })
        }),
        Poly::shifted(1),
    )
}

/// The `k`-th member of `(x1&!x1)`, `((x1&!x1)&1)`, `(((x1&!x1)&1)&1)`, …
/// Lengths are `8 + 4k`, so there is at most one member per length.
pub fn chain_disagreement(k: usize) -> String {
    let mut s = "(x1&!x1)".to_owned();
    for _ in 0..k {
        s = format!("({s}&1)");
    }
    s
}

fn in_chain(text: &str) -> bool {
    let len = text.len();
    len >= 8 && (len - 8).is_multiple_of(4) && text == chain_disagreement((len - 8) / 4)
}

fn chain_up_to(n: usize) -> Vec<String> {
    (0..)
        .map(chain_disagreement)
        .take_while(|s| s.len() <= n)
        .collect()
}

/// Truth-table SAT with the answer flipped on the contradiction chain
/// [`chain_disagreement`]. Wrong on exactly one formula per length `8 + 4k`.
pub fn chain_pclose_solver() -> PCloseSolver {
    PCloseSolver::new(
        "chain",
        Arc::new(|phi: &Formula| Ok(brute_force_sat(phi)? ^ in_chain(&phi.serialize()))),
        Poly::identity(),
    )
    .with_known_disagreements(Arc::new(chain_up_to))
}

/// The one-query reduction to `S = SAT Δ L'`: ask whether φ itself is in
/// `S`, and negate the answer when the solver claims φ satisfiable.
pub fn one_tt_from_pclose(solver: &PCloseSolver) -> ReductionOracle {
    let member_solver = solver.clone();
    let member = Arc::new(move |w: &str| {
        let Ok(phi) = parse(w) else { return false };
        match (member_solver.decide(&phi), brute_force_sat(&phi)) {
            (Ok(claimed), Ok(truth)) => claimed != truth,
            _ => false,
        }
    });
    let mut target = SparseLanguage::new(
        format!("disagreements({})", solver.name),
        member,
        solver.disagreement_census().clone(),
    );
    if let Some(enumerate) = &solver.known_disagreements {
        target = target.with_enumerator(Arc::clone(enumerate));
    }
    let label_solver = solver.clone();
    ReductionOracle::new(
        PCLOSE,
        Direction::Sat,
        target,
        Arc::new(|phi: &Formula| Ok(phi.serialize())),
        Poly::identity(),
    )
    .with_label(Arc::new(move |phi: &Formula| {
        Ok(if label_solver.decide(phi)? {
            QueryLabel::Neg
        } else {
            QueryLabel::Orig
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn tally_examples() {
        let o = tally_reduction();
        assert_eq!(o.query(&f("x1")).unwrap(), "11");
        assert!(o.target().contains("11"));
        let q = o.query(&f("(x1&!x1)")).unwrap();
        assert_eq!(q, "00000000");
        assert!(!o.target().contains(&q));
        assert!(!o.target().contains(""));
    }

    #[test]
    fn fingerprint_examples() {
        let o = fingerprint_reduction();
        assert_eq!(o.query(&f("(x1&!x1)")).unwrap(), "0(x1&!x1)");
        assert_ne!(
            o.query(&f("(x1&!x1)")).unwrap(),
            o.query(&f("(x2&!x2)")).unwrap()
        );
        assert_eq!(o.query(&f("(x1|x2)")).unwrap(), "1");
    }

    #[test]
    fn broken_examples() {
        let o = broken_reduction();
        assert_eq!(o.query(&f("x1")).unwrap(), "11");
        assert_eq!(o.query(&f("(x1&!x1)")).unwrap(), "11111111");
    }

    #[test]
    fn taut_examples() {
        let o = taut_coreduction();
        assert_eq!(o.direction, Direction::Taut);
        assert_eq!(o.query(&f("(x1|!x1)")).unwrap(), "1");
        assert_eq!(o.query(&f("x1")).unwrap(), "0x1");
    }

    #[test]
    fn chain_shape() {
        assert_eq!(chain_disagreement(0), "(x1&!x1)");
        assert_eq!(chain_disagreement(1), "((x1&!x1)&1)");
        assert_eq!(chain_disagreement(2), "(((x1&!x1)&1)&1)");
        assert!(in_chain("((x1&!x1)&1)"));
        assert!(!in_chain("((x1&!x1)&0)"));
        assert_eq!(chain_up_to(15).len(), 2);
    }

    #[test]
    fn pclose_examples() {
        let solver = chain_pclose_solver();
        assert!(solver.decide(&f("(x1&!x1)")).unwrap());
        assert!(solver.decide(&f("x1")).unwrap());
        assert!(!solver.decide(&f("(x2&!x2)")).unwrap());

        let o = one_tt_from_pclose(&solver);
        // heuristic right: negated membership of a non-member gives true
        assert_eq!(o.label(&f("x1")).unwrap(), Some(QueryLabel::Neg));
        assert_eq!(o.query(&f("x1")).unwrap(), "x1");
        assert!(!o.target().contains("x1"));
        // heuristic wrong: negated membership of a member gives false
        let delta = f("(x1&!x1)");
        assert_eq!(o.label(&delta).unwrap(), Some(QueryLabel::Neg));
        assert!(o.target().contains(&o.query(&delta).unwrap()));
        // unsatisfiable and off the chain: ORIG, non-member, false
        assert_eq!(o.label(&f("(x2&!x2)")).unwrap(), Some(QueryLabel::Orig));
        assert!(!o.target().contains("(x2&!x2)"));
        assert!(!o.target().contains("not a formula"));
    }

    #[test]
    fn census_bounds_hold_to_24() {
        for oracle in builtin_names().iter().map(|n| by_name(n).unwrap()) {
            assert_eq!(
                oracle.target().census_sound_up_to(24),
                Some(true),
                "{}",
                oracle.name
            );
        }
        assert_eq!(tally_reduction().target().census(24), Some(24));
        assert_eq!(fingerprint_reduction().target().census(0), Some(0));
        // chain members of length ≤ 24: 8, 12, 16, 20, 24
        assert_eq!(by_name("pclose").unwrap().target().census(24), Some(5));
    }

    #[test]
    fn stretch_violation_is_reported() {
        let shrunk = ReductionOracle::new(
            "too-long",
            Direction::Sat,
            ones_language(),
            Arc::new(|phi: &Formula| Ok("1".repeat(phi.len() + 3))),
            Poly::identity(),
        );
        let err = shrunk.query(&f("x1")).unwrap_err();
        assert!(matches!(
            err,
            super::super::OracleError::StretchViolation {
                query_len: 5,
                bound: 2,
                ..
            }
        ));
    }

    #[test]
    fn recording_keeps_call_order() {
        let (o, log) = tally_reduction().recording();
        o.query(&f("x2")).unwrap();
        o.query(&f("0")).unwrap();
        assert_eq!(
            log.entries(),
            vec![
                ("x2".to_owned(), "11".to_owned()),
                ("0".to_owned(), "0".to_owned())
            ]
        );
    }

    #[test]
    fn census_scale_multiplies_bound() {
        let o = tally_reduction().with_census_scale(4).unwrap();
        assert_eq!(o.target().census_bound().eval(10), Ok(40));
        assert_eq!(tally_reduction().target().census_bound().eval(10), Ok(10));
    }
}
