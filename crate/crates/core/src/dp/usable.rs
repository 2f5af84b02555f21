use std::collections::BTreeSet;

use super::pairs::DependencyPair;
use crate::trs::{Sym, Trs};

/// Defined symbols reachable from `start` through `f ⊒d g` (g a defined
/// symbol on the right of an `f`-rule), including `start ∩ D` itself.
pub fn reachable_defined(trs: &Trs, start: impl IntoIterator<Item = Sym>) -> BTreeSet<Sym> {
    let mut seen: BTreeSet<Sym> = BTreeSet::new();
    let mut stack: Vec<Sym> = start.into_iter().filter(|f| trs.is_defined(*f)).collect();
    while let Some(f) = stack.pop() {
        if !seen.insert(f) {
            continue;
        }
        for r in trs.rules.iter().filter(|r| r.root() == f) {
            for g in r.rhs.symbols() {
                if trs.is_defined(g) && !seen.contains(&g) {
                    stack.push(g);
                }
            }
        }
    }
    seen
}

/// Indices of the usable rules of the given pairs, ascending.
pub fn usable_rules<'a>(
    pairs: impl IntoIterator<Item = &'a DependencyPair>,
    trs: &Trs,
) -> Vec<usize> {
    let mut start = BTreeSet::new();
    for p in pairs {
        start.extend(p.rhs.symbols());
    }
    let reach = reachable_defined(trs, start);
    (0..trs.rules.len())
        .filter(|&i| reach.contains(&trs.rules[i].root()))
        .collect()
}
