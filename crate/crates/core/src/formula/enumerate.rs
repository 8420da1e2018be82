use super::{Formula, VarIndex};

/// All grammar formulas over `x1..x{max_vars}` with at most `max_nodes` AST
/// nodes, ordered by node count and then by serialization.
///
/// `Paren` directly around `Paren` is skipped; every other shape is produced
/// exactly once. A binary production `(a&b)` counts two nodes (`Paren` and
/// `And`).
pub fn enumerate_formulas(max_vars: u32, max_nodes: usize) -> Vec<Formula> {
    let mut by_size: Vec<Vec<Formula>> = vec![Vec::new(); max_nodes + 1];
    if max_nodes == 0 {
        return Vec::new();
    }
    by_size[1].push(Formula::Const(false));
    by_size[1].push(Formula::Const(true));
    by_size[1].extend((1..=max_vars).map(|i| Formula::Var(i as VarIndex)));

    for size in 2..=max_nodes {
        let mut level = Vec::new();
        for child in &by_size[size - 1] {
            level.push(Formula::Not(Box::new(child.clone())));
            if !matches!(child, Formula::Paren(_)) {
                level.push(Formula::Paren(Box::new(child.clone())));
            }
        }
        // Paren + binary node + both operands
        for left_size in 1..size.saturating_sub(2) {
            let right_size = size - 2 - left_size;
            for left in &by_size[left_size] {
                for right in &by_size[right_size] {
                    let l = || Box::new(left.clone());
                    let r = || Box::new(right.clone());
                    level.push(Formula::Paren(Box::new(Formula::And(l(), r()))));
                    level.push(Formula::Paren(Box::new(Formula::Or(l(), r()))));
                }
            }
        }
        by_size[size] = level;
    }

    let mut out = Vec::new();
    for level in by_size {
        let mut keyed: Vec<(String, Formula)> =
            level.into_iter().map(|f| (f.serialize(), f)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        out.extend(keyed.into_iter().map(|(_, f)| f));
    }
    out
}

/// Per-size counts of the formulas [`enumerate_formulas`] yields:
/// `(total, paren_rooted)` indexed by node count.
pub(crate) fn size_table(max_vars: u32, max_nodes: usize) -> Vec<(u128, u128)> {
    let mut table = vec![(0u128, 0u128); max_nodes + 1];
    if max_nodes == 0 {
        return table;
    }
    table[1] = (2 + u128::from(max_vars), 0);
    for size in 2..=max_nodes {
        let (prev_total, prev_paren) = table[size - 1];
        let mut binary: u128 = 0;
        for left_size in 1..size.saturating_sub(2) {
            let right_size = size - 2 - left_size;
            let pairs = table[left_size]
                .0
                .checked_mul(table[right_size].0)
                .expect("formula count overflow");
            binary = binary.checked_add(pairs).expect("formula count overflow");
        }
        let binary = binary.checked_mul(2).expect("formula count overflow");
        let paren = (prev_total - prev_paren)
            .checked_add(binary)
            .expect("formula count overflow");
        let total = prev_total
            .checked_add(paren)
            .expect("formula count overflow");
        table[size] = (total, paren);
    }
    table
}

/// Number of formulas `enumerate_formulas(max_vars, max_nodes)` returns,
/// computed without materializing them.
pub fn count_formulas(max_vars: u32, max_nodes: usize) -> u128 {
    size_table(max_vars, max_nodes).iter().map(|(t, _)| t).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn smallest_formulas_first() {
        let texts: Vec<String> = enumerate_formulas(1, 1)
            .iter()
            .map(|f| f.serialize())
            .collect();
        assert_eq!(texts, ["0", "1", "x1"]);
    }

    #[test]
    fn frozen_counts() {
        // frozen from the first run, cross-checked by the string-level oracle
        // in tests/enumeration_oracle.rs
        assert_eq!(enumerate_formulas(1, 3).len(), 18);
        assert_eq!(count_formulas(1, 3), 18);
        assert_eq!(count_formulas(3, 9), 67_910);
    }

    #[test]
    fn counts_agree_with_materialized_output() {
        for vars in 1..=3 {
            for nodes in 1..=7 {
                assert_eq!(
                    enumerate_formulas(vars, nodes).len() as u128,
                    count_formulas(vars, nodes),
                    "vars={vars} nodes={nodes}"
                );
            }
        }
    }

    #[test]
    fn ordered_and_duplicate_free() {
        let corpus = enumerate_formulas(2, 6);
        let mut seen = HashSet::new();
        for pair in corpus.windows(2) {
            let key = |f: &Formula| (f.node_count(), f.serialize());
            assert!(key(&pair[0]) < key(&pair[1]));
        }
        for f in &corpus {
            assert!(seen.insert(f.serialize()));
            assert!(f.is_grammar_formula());
            assert!(f.node_count() <= 6);
        }
    }
}
