//! Propositional formulas over the fixed ASCII grammar
//!
//! ```text
//! formula := '0' | '1' | var | '!' formula | '(' formula ')'
//!          | '(' formula '&' formula ')' | '(' formula '|' formula ')'
//! var     := 'x' nonzero-digit digit*
//! ```
//!
//! The serialized text is the measure of a formula: `len()` is its character
//! count. Binary nodes carry no parentheses of their own, so the grammar's
//! `(a&b)` is `Paren(And(a, b))`. A bare binary node may only sit at the root
//! or directly under `Paren`; this is what lets the combined query
//! `(φ)|(ψ)` exist as a formula with exactly five extra characters.

mod brute_force;
mod enumerate;
mod parse;
mod random;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use brute_force::{
    brute_force_sat, brute_force_sat_with_cap, brute_force_taut, brute_force_taut_with_cap,
    DEFAULT_BRUTE_FORCE_CAP,
};
pub use enumerate::{count_formulas, enumerate_formulas};
pub use parse::{parse, ParseError};
pub use random::random_formula;

/// Index of a propositional variable; `x1` has index 1.
pub type VarIndex = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(bool),
    Var(VarIndex),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Paren(Box<Formula>),
}

/// Partial map from variable index to truth value.
pub type Assignment = BTreeMap<VarIndex, bool>;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("variable x{0} is not bound by the assignment")]
    Unbound(VarIndex),
    #[error("formula has {found} variables, brute-force cap is {cap}")]
    CapExceeded { found: usize, cap: usize },
}

impl Formula {
    pub fn var(index: VarIndex) -> Self {
        assert!(index >= 1, "variable indices start at 1");
        Formula::Var(index)
    }

    /// `!φ`, parenthesizing a bare binary operand so the result stays well formed.
    pub fn negate(inner: Formula) -> Self {
        Formula::Not(Box::new(inner.enclosed()))
    }

    /// The grammar production `(l&r)`.
    pub fn and(left: Formula, right: Formula) -> Self {
        Formula::Paren(Box::new(Formula::And(
            Box::new(left.enclosed()),
            Box::new(right.enclosed()),
        )))
    }

    /// The grammar production `(l|r)`.
    pub fn or(left: Formula, right: Formula) -> Self {
        Formula::Paren(Box::new(Formula::Or(
            Box::new(left.enclosed()),
            Box::new(right.enclosed()),
        )))
    }

    pub fn paren(inner: Formula) -> Self {
        Formula::Paren(Box::new(inner))
    }

    fn enclosed(self) -> Self {
        if self.is_bare_binary() {
            Formula::Paren(Box::new(self))
        } else {
            self
        }
    }

    pub fn is_bare_binary(&self) -> bool {
        matches!(self, Formula::And(..) | Formula::Or(..))
    }

    /// True when every binary node is the root or the direct child of a
    /// `Paren`. Parsed, enumerated and combined formulas always are.
    pub fn is_well_formed(&self) -> bool {
        fn inner(f: &Formula, binary_allowed: bool) -> bool {
            match f {
                Formula::Const(_) => true,
                Formula::Var(i) => *i >= 1,
                Formula::Not(c) => inner(c, false),
                Formula::Paren(c) => inner(c, true),
                Formula::And(l, r) | Formula::Or(l, r) => {
                    binary_allowed && inner(l, false) && inner(r, false)
                }
            }
        }
        inner(self, true)
    }

    /// Well formed and derivable from the `formula` nonterminal, i.e. not a
    /// root-level bare combination such as `(x1)|(x2)`.
    pub fn is_grammar_formula(&self) -> bool {
        !self.is_bare_binary() && self.is_well_formed()
    }

    pub fn serialize(&self) -> String {
        let mut out = String::with_capacity(self.len());
        self.write_to(&mut out);
        out
    }

    fn write_to(&self, out: &mut String) {
        match self {
            Formula::Const(false) => out.push('0'),
            Formula::Const(true) => out.push('1'),
            Formula::Var(i) => {
                out.push('x');
                out.push_str(&i.to_string());
            }
            Formula::Not(c) => {
                out.push('!');
                c.write_to(out);
            }
            Formula::Paren(c) => {
                out.push('(');
                c.write_to(out);
                out.push(')');
            }
            Formula::And(l, r) => {
                l.write_to(out);
                out.push('&');
                r.write_to(out);
            }
            Formula::Or(l, r) => {
                l.write_to(out);
                out.push('|');
                r.write_to(out);
            }
        }
    }

    /// Character count of the serialization.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        match self {
            Formula::Const(_) => 1,
            Formula::Var(i) => 1 + decimal_width(*i),
            Formula::Not(c) => 1 + c.len(),
            Formula::Paren(c) => 2 + c.len(),
            Formula::And(l, r) | Formula::Or(l, r) => 1 + l.len() + r.len(),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Var(_) => 1,
            Formula::Not(c) | Formula::Paren(c) => 1 + c.node_count(),
            Formula::And(l, r) | Formula::Or(l, r) => 1 + l.node_count() + r.node_count(),
        }
    }

    pub fn variables(&self) -> BTreeSet<VarIndex> {
        let mut vars = BTreeSet::new();
        self.collect_vars(&mut vars);
        vars
    }

    fn collect_vars(&self, vars: &mut BTreeSet<VarIndex>) {
        match self {
            Formula::Const(_) => {}
            Formula::Var(i) => {
                vars.insert(*i);
            }
            Formula::Not(c) | Formula::Paren(c) => c.collect_vars(vars),
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.collect_vars(vars);
                r.collect_vars(vars);
            }
        }
    }

    pub fn max_variable(&self) -> Option<VarIndex> {
        match self {
            Formula::Const(_) => None,
            Formula::Var(i) => Some(*i),
            Formula::Not(c) | Formula::Paren(c) => c.max_variable(),
            Formula::And(l, r) | Formula::Or(l, r) => l.max_variable().max(r.max_variable()),
        }
    }

    pub fn is_variable_free(&self) -> bool {
        self.max_variable().is_none()
    }

    /// Replaces every `x{var}` token by the constant `value`. No simplification.
    pub fn substitute(&self, var: VarIndex, value: bool) -> Formula {
        match self {
            Formula::Const(b) => Formula::Const(*b),
            Formula::Var(i) if *i == var => Formula::Const(value),
            Formula::Var(i) => Formula::Var(*i),
            Formula::Not(c) => Formula::Not(Box::new(c.substitute(var, value))),
            Formula::Paren(c) => Formula::Paren(Box::new(c.substitute(var, value))),
            Formula::And(l, r) => Formula::And(
                Box::new(l.substitute(var, value)),
                Box::new(r.substitute(var, value)),
            ),
            Formula::Or(l, r) => Formula::Or(
                Box::new(l.substitute(var, value)),
                Box::new(r.substitute(var, value)),
            ),
        }
    }

    pub fn evaluate(&self, assignment: &Assignment) -> Result<bool, FormulaError> {
        self.evaluate_with(&|i| assignment.get(&i).copied())
    }

    pub(crate) fn evaluate_with<F>(&self, lookup: &F) -> Result<bool, FormulaError>
    where
        F: Fn(VarIndex) -> Option<bool>,
    {
        Ok(match self {
            Formula::Const(b) => *b,
            Formula::Var(i) => lookup(*i).ok_or(FormulaError::Unbound(*i))?,
            Formula::Not(c) => !c.evaluate_with(lookup)?,
            Formula::Paren(c) => c.evaluate_with(lookup)?,
            Formula::And(l, r) => l.evaluate_with(lookup)? && r.evaluate_with(lookup)?,
            Formula::Or(l, r) => l.evaluate_with(lookup)? || r.evaluate_with(lookup)?,
        })
    }
}

fn decimal_width(mut n: VarIndex) -> usize {
    let mut width = 1;
    while n >= 10 {
        n /= 10;
        width += 1;
    }
    width
}

/// `(φ)|(ψ)`: five characters longer than the two operands together.
pub fn combine_or(left: &Formula, right: &Formula) -> Formula {
    Formula::Or(
        Box::new(Formula::paren(left.clone())),
        Box::new(Formula::paren(right.clone())),
    )
}

/// `(φ)&(ψ)`, the conjunctive counterpart of [`combine_or`].
pub fn combine_and(left: &Formula, right: &Formula) -> Formula {
    Formula::And(
        Box::new(Formula::paren(left.clone())),
        Box::new(Formula::paren(right.clone())),
    )
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&Formula::serialize(self))
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn serialize_examples() {
        assert_eq!(Formula::var(1).serialize(), "x1");
        assert_eq!(Formula::var(1).len(), 2);
        let contradiction = Formula::and(Formula::var(1), Formula::negate(Formula::var(1)));
        assert_eq!(contradiction.serialize(), "(x1&!x1)");
        assert_eq!(contradiction.len(), 8);
    }

    #[test]
    fn combine_adds_five_symbols() {
        let c = combine_or(&f("x1"), &f("x2"));
        assert_eq!(c.serialize(), "(x1)|(x2)");
        assert_eq!(c.len(), 9);
        assert_eq!(combine_and(&f("x1"), &f("1")).serialize(), "(x1)&(1)");
        // re-parses to the same tree
        assert_eq!(f("(x1)|(x2)"), c);
        // nested combination stays well formed
        let nested = combine_or(&c, &f("!x3"));
        assert_eq!(nested.serialize(), "((x1)|(x2))|(!x3)");
        assert!(nested.is_well_formed());
        assert_eq!(f(&nested.serialize()), nested);
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(f("(x1&!x2)").substitute(1, true).serialize(), "(1&!x2)");
        assert_eq!(f("x2").substitute(1, false).serialize(), "x2");
        assert_eq!(f("(x12|x1)").substitute(1, false).serialize(), "(x12|0)");
    }

    #[test]
    fn evaluation_examples() {
        assert!(f("(1&!0)").evaluate(&Assignment::new()).unwrap());
        let a0 = Assignment::from([(1, false)]);
        let a1 = Assignment::from([(1, true)]);
        assert!(f("(x1|!x1)").evaluate(&a0).unwrap());
        assert!(!f("(x1&!x1)").evaluate(&a1).unwrap());
        assert_eq!(f("(x1&x7)").evaluate(&a1), Err(FormulaError::Unbound(7)));
    }

    #[test]
    fn variables_match_tokens() {
        let phi = f("((x3|!x10)&(1|x3))");
        assert_eq!(phi.variables(), BTreeSet::from([3, 10]));
        assert_eq!(phi.max_variable(), Some(10));
        assert!(f("!(0|1)").is_variable_free());
    }

    #[test]
    fn negate_encloses_bare_binary() {
        let c = combine_and(&f("x1"), &f("x2"));
        assert_eq!(Formula::negate(c).serialize(), "!((x1)&(x2))");
        assert_eq!(Formula::negate(f("x1")).serialize(), "!x1");
    }

    #[test]
    fn well_formedness() {
        let bad = Formula::Not(Box::new(Formula::And(
            Box::new(Formula::var(1)),
            Box::new(Formula::var(2)),
        )));
        assert!(!bad.is_well_formed());
        assert!(f("(x1)|(x2)").is_well_formed());
        assert!(!f("(x1)|(x2)").is_grammar_formula());
        assert!(f("((x1)|(x2))").is_grammar_formula());
    }

    #[test]
    fn serde_uses_text() {
        let json = serde_json::to_string(&f("(x1&!x2)")).unwrap();
        assert_eq!(json, "\"(x1&!x2)\"");
        let back: Formula = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f("(x1&!x2)"));
    }
}
