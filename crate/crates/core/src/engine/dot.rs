use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use super::trace::PruneTrace;
use crate::formula::Formula;

fn quoted(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        if matches!(c, '"' | '\\') {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Graphviz rendering of a trace: one node per distinct formula per level,
/// labelled with its serialization. Branch edges into a survivor are solid;
/// edges into formulas that were pruned or dropped as leaves are dashed.
pub fn trace_to_dot(trace: &PruneTrace) -> String {
    let mut out = String::new();
    let title = format!(
        "{} {:?} t={} cap={} queries={}",
        trace.mode, trace.outcome, trace.t_value, trace.width_cap, trace.query_count
    );
    writeln!(out, "digraph prune_trace {{").unwrap();
    writeln!(out, "  label={};", quoted(&title)).unwrap();
    writeln!(out, "  node [shape=box, fontname=\"monospace\"];").unwrap();
    writeln!(out, "  r [label={}];", quoted(&trace.root.serialize())).unwrap();

    let mut parents: Vec<(String, Formula)> = vec![("r".to_owned(), trace.root.clone())];
    for level in &trace.levels {
        let variable = level.level_index as u32;
        let surviving: HashSet<String> = level.surviving.iter().map(|f| f.serialize()).collect();
        let mut ids: HashMap<String, String> = HashMap::new();
        let mut edges: HashSet<(String, String)> = HashSet::new();
        let mut next_parents = Vec::new();
        for (parent_id, parent) in &parents {
            for value in [false, true] {
                let child = parent.substitute(variable, value);
                let text = child.serialize();
                let style = if surviving.contains(&text) {
                    "solid"
                } else {
                    "dashed"
                };
                let id = match ids.get(&text) {
                    Some(id) => id.clone(),
                    None => {
                        let id = format!("l{}_{}", level.level_index, ids.len());
                        writeln!(out, "  {id} [label={}, style={style}];", quoted(&text)).unwrap();
                        ids.insert(text.clone(), id.clone());
                        if surviving.contains(&text) {
                            next_parents.push((id.clone(), child));
                        }
                        id
                    }
                };
                if edges.insert((parent_id.clone(), id.clone())) {
                    writeln!(
                        out,
                        "  {parent_id} -> {id} [label=\"x{variable}={}\", style={style}];",
                        u8::from(value)
                    )
                    .unwrap();
                }
            }
        }
        // survivors keep their order from the trace
        next_parents.sort_by_key(|(_, f)| level.surviving.iter().position(|s| s == f));
        parents = next_parents;
    }
    writeln!(out, "}}").unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::decide_sat_mahaney;
    use crate::formula::parse;
    use crate::oracles::fingerprint_reduction;

    #[test]
    fn pruned_children_are_dashed() {
        let root = parse("((x1&!x1)&(x2|x3))").unwrap();
        let (_, trace) = decide_sat_mahaney(&root, &fingerprint_reduction()).unwrap();
        let dot = trace_to_dot(&trace);
        assert!(dot.starts_with("digraph prune_trace {"));
        assert!(dot.trim_end().ends_with('}'));
        assert!(dot.contains("r [label=\"((x1&!x1)&(x2|x3))\"]"));
        assert!(dot.contains("style=dashed"));
        assert!(dot.contains("-> l1_0 [label=\"x1=0\", style=solid]"));
    }

    #[test]
    fn labels_are_escaped() {
        assert_eq!(quoted("a\"b\\"), "\"a\\\"b\\\\\"");
    }
}
