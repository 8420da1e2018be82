use mahaney_core::apt::{
    apt_report, build_apt_construction, demo_decider, fast_decider, in_slow_sat, is_slow,
    run_clocked, slow_chain, AptConstruction, RunResult, SteppedDecider,
};
use mahaney_core::formula::{brute_force_sat, enumerate_formulas, parse, Formula};

fn corpus() -> Vec<Formula> {
    enumerate_formulas(3, 9)
}

#[test]
fn demo_reduction_is_correct_on_corpus() {
    let decider = demo_decider();
    let corpus = corpus();
    let construction = build_apt_construction(&decider, &corpus).unwrap();
    let AptConstruction::Reduction { x_yes, x_no, .. } = &construction else {
        panic!("demo decider should give the reduction branch");
    };
    assert_eq!(x_yes.serialize(), slow_chain(0));
    assert!(in_slow_sat(&decider, x_yes).unwrap());
    assert!(!in_slow_sat(&decider, x_no).unwrap());
    for phi in &corpus {
        let image = construction.reduce(phi).unwrap().unwrap();
        assert_eq!(
            brute_force_sat(phi).unwrap(),
            in_slow_sat(&decider, &image).unwrap(),
            "{phi}"
        );
    }
    assert_eq!(construction.or_else(&corpus[0]).unwrap(), None);
}

#[test]
fn fast_decider_takes_direct_branch() {
    let decider = fast_decider();
    let corpus = corpus();
    let construction = build_apt_construction(&decider, &corpus).unwrap();
    assert!(matches!(construction, AptConstruction::Direct { .. }));
    for phi in &corpus {
        assert_eq!(
            construction.or_else(phi).unwrap(),
            Some(brute_force_sat(phi).unwrap()),
            "{phi}"
        );
        assert_eq!(construction.reduce(phi).unwrap(), None);
    }
}

#[test]
fn slow_set_is_sparse() {
    let decider = demo_decider();
    let report = apt_report(&decider, &corpus()).unwrap();
    assert!(report.valid);
    assert_eq!(report.branch, "reduction");
    assert_eq!(report.summary(), "reduction branch, valid over corpus");
    // at most one slow formula per length, hence at most n up to length n
    for n in 0..=40 {
        let count = report.slow.iter().filter(|f| f.len() <= n).count();
        assert!(count <= n, "n={n}");
    }
    let lengths: Vec<usize> = report.slow.iter().map(Formula::len).collect();
    assert_eq!(lengths, vec![8, 12]);
    assert_eq!(report.slow, report.slow_sat);
}

#[test]
fn fast_report_summary() {
    let report = apt_report(&fast_decider(), &enumerate_formulas(2, 6)).unwrap();
    assert!(report.valid);
    assert_eq!(report.branch, "empty");
    assert!(report.slow.is_empty());
    assert_eq!(
        report.summary(),
        "empty-N′ branch, decider agrees with brute force"
    );
}

#[test]
fn clock_is_respected() {
    let decider = demo_decider();
    for phi in corpus().iter().step_by(53) {
        let bound = decider.declared_bound().eval(phi.len() as u64).unwrap();
        match run_clocked(&decider, phi).unwrap() {
            RunResult::Halted { steps, .. } => assert!(steps <= bound),
            RunResult::Timeout { steps } => {
                assert_eq!(steps, bound);
                assert!(is_slow(&decider, phi).unwrap());
            }
        }
    }
    let chain = parse(&slow_chain(1)).unwrap();
    assert!(is_slow(&decider, &chain).unwrap());
    assert!(!is_slow(&fast_decider(), &chain).unwrap());
}
