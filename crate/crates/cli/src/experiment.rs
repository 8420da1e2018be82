//! Census-scale sweep: how width, queries and outcome move when the sparse
//! target is allowed more members.

use std::io::Write;
use std::ops::RangeInclusive;

use mahaney_core::formula::{brute_force_sat, random_formula, Formula};
use mahaney_core::oracles::ReductionOracle;
use mahaney_core::{decide_sat_mahaney, EngineError, Outcome};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub const CSV_HEADER: &str =
    "n_vars,root_length,census_scale,t_value,width_cap,query_count,outcome,agrees";

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub oracle: ReductionOracle,
    pub vars: RangeInclusive<u32>,
    pub scales: Vec<u64>,
    pub runs: usize,
    pub max_nodes: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExperimentRow {
    pub n_vars: u32,
    pub root_length: usize,
    pub census_scale: u64,
    pub t_value: u64,
    pub width_cap: u64,
    pub query_count: u64,
    pub outcome: Outcome,
    #[serde(rename = "agrees")]
    pub agrees_with_brute_force: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("census scale {0} overflows the oracle's census bound")]
    Scale(u64),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Formula(#[from] mahaney_core::formula::FormulaError),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

/// The formulas for one variable count. Each count draws from its own
/// ChaCha stream, so the list does not depend on which other counts run.
pub fn sweep_formulas(seed: u64, n_vars: u32, runs: usize, max_nodes: usize) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::from(n_vars));
    (0..runs)
        .map(|_| random_formula(&mut rng, n_vars, max_nodes))
        .collect()
}

/// Rows in `(n_vars, census_scale, run)` order. Every scale sees the same
/// formulas for a given variable count.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>, ExperimentError> {
    let mut cells = Vec::new();
    for n_vars in config.vars.clone() {
        let formulas = sweep_formulas(config.seed, n_vars, config.runs, config.max_nodes);
        for &scale in &config.scales {
            cells.push((n_vars, scale, formulas.clone()));
        }
    }
    let per_cell: Vec<Result<Vec<ExperimentRow>, ExperimentError>> = cells
        .into_par_iter()
        .map(|(n_vars, scale, formulas)| {
            let oracle = config
                .oracle
                .with_census_scale(scale)
                .map_err(|_| ExperimentError::Scale(scale))?;
            formulas
                .iter()
                .map(|phi| {
                    let (accepted, trace) = decide_sat_mahaney(phi, &oracle)?;
                    Ok(ExperimentRow {
                        n_vars,
                        root_length: phi.len(),
                        census_scale: scale,
                        t_value: trace.t_value,
                        width_cap: trace.width_cap,
                        query_count: trace.query_count,
                        outcome: trace.outcome,
                        agrees_with_brute_force: accepted == brute_force_sat(phi)?,
                    })
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::new();
    for cell in per_cell {
        rows.extend(cell?);
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[ExperimentRow], out: W) -> Result<(), ExperimentError> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    writer.write_record(CSV_HEADER.split(','))?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use mahaney_core::oracles::tally_reduction;

    #[test]
    fn header_matches_row_fields() {
        let row = ExperimentRow {
            n_vars: 2,
            root_length: 7,
            census_scale: 1,
            t_value: 19,
            width_cap: 20,
            query_count: 0,
            outcome: Outcome::Accept,
            agrees_with_brute_force: true,
        };
        let mut buf = Vec::new();
        write_csv(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, format!("{CSV_HEADER}\n2,7,1,19,20,0,ACCEPT,true\n"));
    }

    #[test]
    fn streams_are_independent_of_range() {
        let a = sweep_formulas(4, 3, 5, 15);
        assert_eq!(a, sweep_formulas(4, 3, 5, 15));
        assert_ne!(a, sweep_formulas(4, 4, 5, 15));
        let config = ExperimentConfig {
            oracle: tally_reduction(),
            vars: 3..=3,
            scales: vec![1, 2],
            runs: 5,
            max_nodes: 15,
            seed: 4,
        };
        let rows = run_experiment(&config).unwrap();
        assert_eq!(rows.len(), 10);
        let lengths: Vec<usize> = a.iter().map(Formula::len).collect();
        let first: Vec<usize> = rows[..5].iter().map(|r| r.root_length).collect();
        let second: Vec<usize> = rows[5..].iter().map(|r| r.root_length).collect();
        assert_eq!(first, lengths);
        assert_eq!(second, lengths);
    }
}
