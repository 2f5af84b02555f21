//! Strongly linear interpretations `f(x1..xn) = x1 + .. + xn + c_f`.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::trs::{Rule, Sym, Term, Var};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SliWeights {
    pub weight: BTreeMap<Sym, u64>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SliError {
    #[error("no weight for symbol {0:?}")]
    UndefinedSymbol(Sym),
    #[error("no value for variable {0:?}")]
    UnassignedVariable(Var),
}

pub const DEFAULT_MAX_WEIGHT: u64 = 16;

/// Value of `t` under the weights and an assignment of the variables.
pub fn interpret(
    weights: &SliWeights,
    t: &Term,
    assignment: &BTreeMap<Var, u64>,
) -> Result<u64, SliError> {
    match t {
        Term::Var(v) => assignment
            .get(v)
            .copied()
            .ok_or(SliError::UnassignedVariable(*v)),
        Term::App(f, args) => {
            let mut sum = *weights.weight.get(f).ok_or(SliError::UndefinedSymbol(*f))?;
            for a in args.iter() {
                sum += interpret(weights, a, assignment)?;
            }
            Ok(sum)
        }
    }
}

fn weight_sum(weights: &SliWeights, t: &Term) -> u64 {
    t.symbol_occurrences()
        .iter()
        .map(|(f, n)| weights.weight.get(f).copied().unwrap_or(0) * *n as u64)
        .sum()
}

fn dominates(rule: &Rule) -> bool {
    rule.is_non_duplicating()
}

/// `l > r` for every rule and every assignment: variable multiplicities of
/// `l` dominate those of `r`, and the constant part of `l` is larger.
/// Symbols without a weight count as 0.
pub fn check_compat(weights: &SliWeights, rules: &[Rule]) -> bool {
    rules
        .iter()
        .all(|r| dominates(r) && weight_sum(weights, &r.lhs) > weight_sum(weights, &r.rhs))
}

/// Weights in `0..=max_weight` orienting every rule, found by a pruned
/// search with growing bounds.
pub fn synthesize(rules: &[Rule]) -> Option<SliWeights> {
    synthesize_bounded(rules, DEFAULT_MAX_WEIGHT)
}

pub fn synthesize_bounded(rules: &[Rule], max_weight: u64) -> Option<SliWeights> {
    if !rules.iter().all(dominates) {
        return None;
    }
    let syms: Vec<Sym> = rules
        .iter()
        .flat_map(|r| r.lhs.symbols().into_iter().chain(r.rhs.symbols()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    // diff[r][i]: occurrences of syms[i] in lhs minus in rhs
    let diff: Vec<Vec<i64>> = rules
        .iter()
        .map(|r| {
            let (l, rr) = (r.lhs.symbol_occurrences(), r.rhs.symbol_occurrences());
            syms.iter()
                .map(|f| *l.get(f).unwrap_or(&0) as i64 - *rr.get(f).unwrap_or(&0) as i64)
                .collect()
        })
        .collect();
    let mut bound = 1;
    loop {
        let mut budget = 2_000_000u64;
        let mut c = vec![0i64; syms.len()];
        if search(0, &diff, &mut c, bound as i64, &mut budget) {
            let weights = SliWeights {
                weight: syms.iter().zip(&c).map(|(f, &w)| (*f, w as u64)).collect(),
            };
            debug_assert!(check_compat(&weights, rules));
            return Some(weights);
        }
        if bound >= max_weight {
            return None;
        }
        bound = (bound * 2).min(max_weight);
    }
}

fn search(i: usize, diff: &[Vec<i64>], c: &mut Vec<i64>, bound: i64, budget: &mut u64) -> bool {
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    // optimistic value of every constraint given the remaining freedom
    for d in diff {
        let fixed: i64 = (0..i).map(|j| d[j] * c[j]).sum();
        let best: i64 = (i..c.len()).map(|j| d[j].max(0) * bound).sum();
        if fixed + best < 1 {
            return false;
        }
    }
    if i == c.len() {
        return true;
    }
    for w in 0..=bound {
        c[i] = w;
        if search(i + 1, diff, c, bound, budget) {
            return true;
        }
    }
    c[i] = 0;
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trs::parse_trs;

    #[test]
    fn bin_usable_rules() {
        let mut trs =
            parse_trs("(VAR x)(RULES half(0) -> 0 half(s(0)) -> 0 half(s(s(x))) -> s(half(x)))")
                .unwrap();
        let s = |n: &str| trs.sig.lookup(n).unwrap();
        let w = SliWeights {
            weight: [(s("0"), 0), (s("s"), 1), (s("half"), 1)].into(),
        };
        assert!(check_compat(&w, &trs.rules));
        let t = trs.sig.term("half(s(s(x)))").unwrap();
        let x = trs.sig.lookup_var("x").unwrap();
        assert_eq!(interpret(&w, &t, &[(x, 0)].into()), Ok(3));
        let found = synthesize(&trs.rules).unwrap();
        assert!(check_compat(&found, &trs.rules));
    }

    #[test]
    fn impossible_and_trivial() {
        let trs = parse_trs("(VAR x)(RULES f(x) -> f(x))").unwrap();
        assert_eq!(synthesize(&trs.rules), None);
        let trs = parse_trs("(VAR x)(RULES f(x) -> c(x, x))").unwrap();
        assert_eq!(synthesize(&trs.rules), None);
        let trs = parse_trs("(VAR x)(RULES f(x) -> x)").unwrap();
        let w = synthesize(&trs.rules).unwrap();
        assert!(w.weight[&trs.sig.lookup("f").unwrap()] >= 1);
        assert!(check_compat(&SliWeights::default(), &[]));
    }
}
