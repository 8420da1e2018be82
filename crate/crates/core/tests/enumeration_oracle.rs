//! Independent check of the corpus generator: build every token string up to
//! a length bound, keep the ones that parse to grammar formulas within the
//! node budget, and compare the resulting set with `enumerate_formulas`.

use std::collections::BTreeSet;

use mahaney_core::formula::{count_formulas, enumerate_formulas, parse, Formula};

fn tokens(max_vars: u32) -> Vec<String> {
    let mut t: Vec<String> = ["0", "1", "!", "(", ")", "&", "|"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    t.extend((1..=max_vars).map(|i| format!("x{i}")));
    t
}

fn has_double_paren(f: &Formula) -> bool {
    match f {
        Formula::Const(_) | Formula::Var(_) => false,
        Formula::Paren(c) => matches!(**c, Formula::Paren(_)) || has_double_paren(c),
        Formula::Not(c) => has_double_paren(c),
        Formula::And(l, r) | Formula::Or(l, r) => has_double_paren(l) || has_double_paren(r),
    }
}

// Leaves are one token and every other node adds at most two, so token strings
// of length 2·max_nodes − 1 cover every formula within the budget.
fn by_tokens(max_vars: u32, max_nodes: usize) -> BTreeSet<String> {
    let alphabet = tokens(max_vars);
    let mut found = BTreeSet::new();
    let mut stack: Vec<(String, usize, i32)> = vec![(String::new(), 0, 0)];
    while let Some((text, count, depth)) = stack.pop() {
        if count > 0 && depth == 0 {
            if let Ok(f) = parse(&text) {
                // adjacent tokens can fuse into a larger index, e.g. "x1" "0"
                let in_range = f.max_variable().unwrap_or(0) <= max_vars;
                if in_range
                    && f.is_grammar_formula()
                    && !has_double_paren(&f)
                    && f.node_count() <= max_nodes
                {
                    found.insert(f.serialize());
                }
            }
        }
        if count == 2 * max_nodes - 1 {
            continue;
        }
        for t in &alphabet {
            let depth = match t.as_str() {
                "(" => depth + 1,
                ")" => depth - 1,
                _ => depth,
            };
            if depth < 0 || depth as usize + count > 2 * max_nodes - 1 {
                continue;
            }
            stack.push((format!("{text}{t}"), count + 1, depth));
        }
    }
    found
}

fn check(max_vars: u32, max_nodes: usize) {
    let expected = by_tokens(max_vars, max_nodes);
    let listed: Vec<String> = enumerate_formulas(max_vars, max_nodes)
        .iter()
        .map(Formula::serialize)
        .collect();
    let as_set: BTreeSet<String> = listed.iter().cloned().collect();
    assert_eq!(
        as_set.len(),
        listed.len(),
        "duplicates for ({max_vars},{max_nodes})"
    );
    assert_eq!(as_set, expected, "({max_vars},{max_nodes})");
    assert_eq!(count_formulas(max_vars, max_nodes), expected.len() as u128);
}

#[test]
fn one_variable_three_nodes() {
    check(1, 3);
    assert_eq!(by_tokens(1, 3).len(), 18);
}

#[test]
fn two_variables_three_nodes() {
    check(2, 3);
}

#[test]
fn one_variable_four_nodes() {
    check(1, 4);
}

#[test]
fn two_variables_four_nodes() {
    check(2, 4);
}
