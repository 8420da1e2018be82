use rand::Rng;

use super::enumerate::size_table;
use super::{Formula, VarIndex};

/// Largest node budget the exact shape counts support.
const MAX_RANDOM_NODES: usize = 48;

/// Draws a grammar formula over `x1..x{max_vars}`.
///
/// The node count is uniform on `1..=max_nodes`; given the node count, the
/// formula is uniform among all formulas [`enumerate_formulas`] would list
/// at that size.
///
/// [`enumerate_formulas`]: super::enumerate_formulas
pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, max_vars: u32, max_nodes: usize) -> Formula {
    assert!(max_vars >= 1 && max_nodes >= 1, "empty formula space");
    assert!(
        max_nodes <= MAX_RANDOM_NODES,
        "node budget above {MAX_RANDOM_NODES}"
    );
    let table = size_table(max_vars, max_nodes);
    let size = rng.gen_range(1..=max_nodes);
    sample(rng, &table, max_vars, size, true)
}

fn sample<R: Rng + ?Sized>(
    rng: &mut R,
    table: &[(u128, u128)],
    max_vars: u32,
    size: usize,
    paren_allowed: bool,
) -> Formula {
    if size == 1 {
        let pick = rng.gen_range(0..2 + max_vars);
        return match pick {
            0 => Formula::Const(false),
            1 => Formula::Const(true),
            v => Formula::Var((v - 1) as VarIndex),
        };
    }
    let (prev_total, prev_paren) = table[size - 1];
    let nots = prev_total;
    let plain_parens = prev_total - prev_paren;
    let binaries = table[size].1 - plain_parens;
    let total = if paren_allowed {
        nots + plain_parens + binaries
    } else {
        nots
    };
    let mut pick = rng.gen_range(0..total);

    if pick < nots {
        return Formula::Not(Box::new(sample(rng, table, max_vars, size - 1, true)));
    }
    pick -= nots;
    if pick < plain_parens {
        return Formula::Paren(Box::new(sample(rng, table, max_vars, size - 1, false)));
    }
    pick -= plain_parens;

    let is_and = pick % 2 == 0;
    let mut pair_pick = pick / 2;
    for left_size in 1..size - 2 {
        let right_size = size - 2 - left_size;
        let pairs = table[left_size].0 * table[right_size].0;
        if pair_pick < pairs {
            let left = Box::new(sample(rng, table, max_vars, left_size, true));
            let right = Box::new(sample(rng, table, max_vars, right_size, true));
            let inner = if is_and {
                Formula::And(left, right)
            } else {
                Formula::Or(left, right)
            };
            return Formula::Paren(Box::new(inner));
        }
        pair_pick -= pairs;
    }
    unreachable!("pick exceeds shape count")
}
