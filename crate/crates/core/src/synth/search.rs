use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use super::{FilterSpace, ObligationSet, SynthError};
use crate::orders::{ArgumentFiltering, Filter, OrderParams, Precedence, SafeMapping};
use crate::trs::Sym;

#[derive(Clone, Copy, Debug)]
pub struct SearchLimits {
    /// Bound on the symbols that carry parameters.
    pub max_symbols: usize,
    pub max_candidates: u128,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_symbols: 8,
            max_candidates: 4_000_000,
        }
    }
}

/// Ordered partitions of `items` into consecutive ranks starting at 1.
fn ranked_partitions(items: &[Sym]) -> Vec<BTreeMap<Sym, u32>> {
    // restricted growth strings enumerate the set partitions
    fn rgs(n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max.min(n) {
            cur.push(b);
            rgs(n, cur, if b == max { max + 1 } else { max }, out);
            cur.pop();
        }
    }
    let mut parts = Vec::new();
    rgs(items.len(), &mut Vec::new(), 0, &mut parts);
    let mut out = Vec::new();
    for p in parts {
        let blocks = p.iter().max().map_or(0, |m| m + 1);
        for order in (0..blocks).permutations(blocks) {
            out.push(
                items
                    .iter()
                    .zip(&p)
                    .map(|(&f, &b)| (f, order[b] as u32 + 1))
                    .collect(),
            );
        }
    }
    out
}

fn filter_options(n: usize, space: FilterSpace) -> Vec<Option<Filter>> {
    let mut out = vec![None];
    if space == FilterSpace::Identity || n == 0 {
        return out;
    }
    out.extend((0..n).map(|i| Some(Filter::Collapse(i))));
    match space {
        FilterSpace::Restricted => {
            out.extend((0..n).map(|i| Some(Filter::Keep((0..n).filter(|&j| j != i).collect()))));
        }
        FilterSpace::Full => {
            for k in 0..n {
                out.extend((0..n).combinations(k).map(|v| Some(Filter::Keep(v))));
            }
        }
        FilterSpace::Identity => unreachable!(),
    }
    out
}

/// Exhaustive search in a fixed order: precedences, then safe mappings,
/// then filterings. Symbols outside the guard share the bottom rank, which
/// loses no solution since they only enter comparisons through `≈`.
pub fn search_backtracking(
    obls: &ObligationSet,
    limits: &SearchLimits,
) -> Result<Option<OrderParams>, SynthError> {
    let syms: Vec<Sym> = obls.symbols().into_iter().collect();
    let guarded: Vec<Sym> = syms
        .iter()
        .copied()
        .filter(|f| obls.guard.contains(f))
        .collect();
    let precs = ranked_partitions(&guarded);
    let safes: Vec<Vec<BTreeSet<usize>>> = guarded
        .iter()
        .map(|f| {
            (0..obls.arity[f])
                .powerset()
                .map(BTreeSet::from_iter)
                .collect()
        })
        .collect();
    let filters: Vec<(Sym, Vec<Option<Filter>>)> = syms
        .iter()
        .map(|&f| {
            let fixed = obls.safe_filtering && obls.compounds.contains(&f);
            let space = if fixed {
                FilterSpace::Identity
            } else {
                obls.filters
            };
            (f, filter_options(obls.arity[&f], space))
        })
        .collect();
    let total = precs.len() as u128
        * safes.iter().map(|s| s.len() as u128).product::<u128>()
        * filters.iter().map(|f| f.1.len() as u128).product::<u128>();
    // nullary symbols outside the guard carry no parameters
    let free = syms
        .iter()
        .filter(|f| obls.arity[f] > 0 || obls.guard.contains(f))
        .count();
    if free > limits.max_symbols || total > limits.max_candidates {
        return Err(SynthError::SearchCap(total));
    }
    let safe_maps: Vec<SafeMapping> = safes
        .iter()
        .multi_cartesian_product()
        .map(|choice| SafeMapping {
            safe: guarded
                .iter()
                .zip(choice)
                .filter(|(_, s)| !s.is_empty())
                .map(|(&f, s)| (f, s.clone()))
                .collect(),
        })
        .collect();
    let safe_maps = if guarded.is_empty() {
        vec![SafeMapping::default()]
    } else {
        safe_maps
    };
    let filterings: Vec<ArgumentFiltering> = filters
        .iter()
        .map(|(_, o)| o.iter())
        .multi_cartesian_product()
        .map(|choice| ArgumentFiltering {
            pi: syms
                .iter()
                .zip(choice)
                .filter_map(|(&f, o)| o.clone().map(|o| (f, o)))
                .collect(),
        })
        .collect();
    let filterings = if syms.is_empty() {
        vec![ArgumentFiltering::identity()]
    } else {
        filterings
    };
    for rank in &precs {
        for safe in &safe_maps {
            for filtering in &filterings {
                let params = OrderParams {
                    prec: Precedence { rank: rank.clone() },
                    safe: safe.clone(),
                    filtering: filtering.clone(),
                    guard: obls.guard.clone(),
                };
                if obls.check(&params).is_ok() {
                    return Ok(Some(params));
                }
            }
        }
    }
    Ok(None)
}
