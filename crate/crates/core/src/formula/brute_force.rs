use super::{Formula, FormulaError, VarIndex};

/// Largest variable count the truth-table oracles accept by default.
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 16;

/// Truth-table satisfiability.
pub fn brute_force_sat(formula: &Formula) -> Result<bool, FormulaError> {
    brute_force_sat_with_cap(formula, DEFAULT_BRUTE_FORCE_CAP)
}

/// Truth-table validity.
pub fn brute_force_taut(formula: &Formula) -> Result<bool, FormulaError> {
    brute_force_taut_with_cap(formula, DEFAULT_BRUTE_FORCE_CAP)
}

pub fn brute_force_sat_with_cap(formula: &Formula, cap: usize) -> Result<bool, FormulaError> {
    any_assignment(formula, cap, true)
}

pub fn brute_force_taut_with_cap(formula: &Formula, cap: usize) -> Result<bool, FormulaError> {
    any_assignment(formula, cap, false).map(|found_false| !found_false)
}

/// Whether some assignment makes `formula` evaluate to `target`.
fn any_assignment(formula: &Formula, cap: usize, target: bool) -> Result<bool, FormulaError> {
    let vars: Vec<VarIndex> = formula.variables().into_iter().collect();
    if vars.len() > cap {
        return Err(FormulaError::CapExceeded {
            found: vars.len(),
            cap,
        });
    }
    // cap is bounded well below 64 in practice; u64 keeps the shift defined
    let total: u64 = 1u64
        .checked_shl(vars.len() as u32)
        .ok_or(FormulaError::CapExceeded {
            found: vars.len(),
            cap: 63,
        })?;
    for mask in 0..total {
        let lookup = |i: VarIndex| vars.binary_search(&i).ok().map(|pos| mask >> pos & 1 == 1);
        if formula.evaluate_with(&lookup)? == target {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn examples() {
        assert!(!brute_force_sat(&parse("(x1&!x1)").unwrap()).unwrap());
        assert!(brute_force_taut(&parse("(x1|!x1)").unwrap()).unwrap());
        assert!(brute_force_sat(&parse("x1").unwrap()).unwrap());
        assert!(!brute_force_taut(&parse("x1").unwrap()).unwrap());
        assert!(brute_force_sat(&parse("1").unwrap()).unwrap());
        assert!(!brute_force_sat(&parse("0").unwrap()).unwrap());
        assert!(brute_force_taut(&parse("(x1)|(!x1)").unwrap()).unwrap());
    }

    #[test]
    fn cap_exceeded() {
        let phi = parse("((x1&x2)&x3)").unwrap();
        assert_eq!(
            brute_force_sat_with_cap(&phi, 2),
            Err(FormulaError::CapExceeded { found: 3, cap: 2 })
        );
        assert!(brute_force_sat_with_cap(&phi, 3).unwrap());
    }
}
