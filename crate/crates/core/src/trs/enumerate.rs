//! Ground values and ground basic terms by size, and runtime-complexity
//! sampling on top of them.

use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::dl::{dl_in_place, with_big_stack, DlError, Strategy};
use super::term::{Sym, Term};
use super::Trs;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Overflow {
    /// Fail when a size has more terms than the cap.
    Error,
    /// Draw `cap` terms uniformly at random instead.
    Sample { seed: u64 },
}

#[derive(Clone, Debug)]
pub struct SampleConfig {
    pub cap_per_size: usize,
    pub overflow: Overflow,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            cap_per_size: 10_000,
            overflow: Overflow::Error,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RcError {
    #[error("fuel exhausted on {term}")]
    FuelExhausted { term: String },
    #[error("{count} ground basic terms of size {size} exceed the cap of {cap}")]
    EnumerationOverflow {
        size: usize,
        count: u128,
        cap: usize,
    },
}

/// Outcome for one size `n`: `max_dl` is the maximum over all terms of size
/// at most `n` (so the sequence is monotone).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RcSample {
    pub size: usize,
    pub max_dl: u64,
    /// Terms of exactly this size that were evaluated.
    pub terms: usize,
    /// Terms of exactly this size whose evaluation ran out of fuel.
    pub exhausted: usize,
    /// Whether the terms of this size were sampled rather than enumerated.
    pub sampled: bool,
}

/// Counts and builds ground terms over a fixed constructor set.
pub struct TermSpace {
    cons: Vec<(Sym, usize)>,
    /// `counts[n]`: number of values of size `n`.
    counts: Vec<u128>,
    /// `ways[a][m]`: number of `a`-tuples of values of total size `m`.
    ways: Vec<Vec<u128>>,
    cache: Vec<Option<Vec<Term>>>,
}

impl TermSpace {
    pub fn new(trs: &Trs, constructors: &BTreeSet<Sym>, max_size: usize) -> Self {
        let cons: Vec<(Sym, usize)> = constructors
            .iter()
            .map(|&c| (c, trs.sig.arity(c)))
            .collect();
        let max_arity = trs.symbols().map(|s| trs.sig.arity(s)).max().unwrap_or(0);
        let mut counts = vec![0u128; max_size + 1];
        let mut ways = vec![vec![0u128; max_size + 1]; max_arity + 1];
        ways[0][0] = 1;
        for n in 1..=max_size {
            // ways[a][m] for m < n are final; compute counts[n], then ways[*][n]
            let mut c = 0u128;
            for &(_, a) in &cons {
                c = c.saturating_add(ways[a][n - 1]);
            }
            counts[n] = c;
            for a in 1..=max_arity {
                let mut w = 0u128;
                for p in 1..=n {
                    w = w.saturating_add(counts[p].saturating_mul(ways[a - 1][n - p]));
                }
                ways[a][n] = w;
            }
        }
        TermSpace {
            cons,
            counts,
            ways,
            cache: vec![None; max_size + 1],
        }
    }

    pub fn count(&self, n: usize) -> u128 {
        self.counts.get(n).copied().unwrap_or(0)
    }

    pub fn tuples(&self, arity: usize, total: usize) -> u128 {
        self.ways[arity][total]
    }

    /// All values of size `n`; only call when the count is manageable.
    pub fn values(&mut self, n: usize) -> Vec<Term> {
        if let Some(v) = &self.cache[n] {
            return v.clone();
        }
        let mut out = Vec::new();
        for (c, a) in self.cons.clone() {
            for tuple in self.all_tuples(a, n - 1) {
                out.push(Term::app(c, tuple));
            }
        }
        self.cache[n] = Some(out.clone());
        out
    }

    pub fn all_tuples(&mut self, arity: usize, total: usize) -> Vec<Vec<Term>> {
        if arity == 0 {
            return if total == 0 {
                vec![Vec::new()]
            } else {
                Vec::new()
            };
        }
        let mut out = Vec::new();
        for first in 1..=total {
            if self.count(first) == 0 || self.tuples(arity - 1, total - first) == 0 {
                continue;
            }
            let heads = self.values(first);
            let tails = self.all_tuples(arity - 1, total - first);
            for h in &heads {
                for t in &tails {
                    let mut v = Vec::with_capacity(arity);
                    v.push(h.clone());
                    v.extend(t.iter().cloned());
                    out.push(v);
                }
            }
        }
        out
    }

    pub fn random_value(&self, n: usize, rng: &mut impl Rng) -> Term {
        let total = self.count(n);
        let mut pick = rng.gen_range(0..total);
        for &(c, a) in &self.cons {
            let w = self.ways[a][n - 1];
            if pick < w {
                return Term::app(c, self.random_tuple(a, n - 1, rng));
            }
            pick -= w;
        }
        unreachable!("weights sum to the count")
    }

    pub fn random_tuple(&self, arity: usize, total: usize, rng: &mut impl Rng) -> Vec<Term> {
        let mut out = Vec::with_capacity(arity);
        let mut rest = total;
        for k in (1..=arity).rev() {
            let all = self.ways[k][rest];
            let mut pick = rng.gen_range(0..all);
            let mut chosen = 0;
            for p in 1..=rest {
                let w = self.counts[p].saturating_mul(self.ways[k - 1][rest - p]);
                if pick < w {
                    chosen = p;
                    break;
                }
                pick -= w;
            }
            out.push(self.random_value(chosen, rng));
            rest -= chosen;
        }
        out
    }
}

/// Ground basic terms `f(v1..vk)` of size exactly `n`, or a uniform sample
/// of `cap` of them when there are more.
pub fn basic_terms_of_size(
    trs: &Trs,
    space: &mut TermSpace,
    n: usize,
    config: &SampleConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<Term>, bool), RcError> {
    let roots: Vec<(Sym, usize)> = trs.defined.iter().map(|&f| (f, trs.sig.arity(f))).collect();
    let count: u128 = roots.iter().fold(0u128, |acc, &(_, a)| {
        acc.saturating_add(space.tuples(a, n - 1))
    });
    if count <= config.cap_per_size as u128 {
        let mut out = Vec::new();
        for &(f, a) in &roots {
            for tuple in space.all_tuples(a, n - 1) {
                out.push(Term::app(f, tuple));
            }
        }
        return Ok((out, false));
    }
    match config.overflow {
        Overflow::Error => Err(RcError::EnumerationOverflow {
            size: n,
            count,
            cap: config.cap_per_size,
        }),
        Overflow::Sample { .. } => {
            let mut seen = HashSet::new();
            let mut out = Vec::new();
            for _ in 0..config.cap_per_size {
                let mut pick = rng.gen_range(0..count);
                for &(f, a) in &roots {
                    let w = space.tuples(a, n - 1);
                    if pick < w {
                        let t = Term::app(f, space.random_tuple(a, n - 1, rng));
                        if seen.insert(t.clone()) {
                            out.push(t);
                        }
                        break;
                    }
                    pick -= w;
                }
            }
            Ok((out, true))
        }
    }
}

/// Per-size runtime-complexity samples; fuel exhaustion is counted instead
/// of aborting.
pub fn rc_samples(
    trs: &Trs,
    max_size: usize,
    fuel: u64,
    config: &SampleConfig,
) -> Result<Vec<RcSample>, RcError> {
    with_big_stack(|| {
        let seed = match config.overflow {
            Overflow::Sample { seed } => seed,
            Overflow::Error => 0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut space = TermSpace::new(trs, &trs.constructors, max_size);
        let mut out = Vec::new();
        let mut running = 0u64;
        for n in 1..=max_size {
            let (terms, sampled) = basic_terms_of_size(trs, &mut space, n, config, &mut rng)?;
            let mut exhausted = 0;
            for t in &terms {
                match dl_in_place(trs, t, &Strategy::Innermost, fuel) {
                    Ok(d) => running = running.max(d),
                    Err(DlError::FuelExhausted) => exhausted += 1,
                }
            }
            out.push(RcSample {
                size: n,
                max_dl: running,
                terms: terms.len(),
                exhausted,
                sampled,
            });
        }
        Ok(out)
    })
}

/// `(n, rc(n))` for `n = 1..=max_size` with the default enumeration cap.
pub fn runtime_complexity_samples(
    trs: &Trs,
    max_size: usize,
    fuel: u64,
) -> Result<Vec<(usize, u64)>, RcError> {
    runtime_complexity_samples_with(trs, max_size, fuel, &SampleConfig::default())
}

pub fn runtime_complexity_samples_with(
    trs: &Trs,
    max_size: usize,
    fuel: u64,
    config: &SampleConfig,
) -> Result<Vec<(usize, u64)>, RcError> {
    // Re-run strictly so that the first exhausted term is reported.
    with_big_stack(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(match config.overflow {
            Overflow::Sample { seed } => seed,
            Overflow::Error => 0,
        });
        let mut space = TermSpace::new(trs, &trs.constructors, max_size);
        let mut out = Vec::new();
        let mut running = 0u64;
        for n in 1..=max_size {
            let (terms, _) = basic_terms_of_size(trs, &mut space, n, config, &mut rng)?;
            for t in &terms {
                let d = dl_in_place(trs, t, &Strategy::Innermost, fuel).map_err(|_| {
                    RcError::FuelExhausted {
                        term: trs.sig.show(t).to_string(),
                    }
                })?;
                running = running.max(d);
            }
            out.push((n, running));
        }
        Ok(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trs::parse_trs;

    #[test]
    fn counts_match_enumeration() {
        let trs =
            parse_trs("(VAR x)(RULES f(x) -> x) (TYPES nil : L cons : N L -> L z : N s : N -> N)")
                .unwrap();
        let mut space = TermSpace::new(&trs, &trs.constructors, 7);
        for n in 1..=7 {
            let vals = space.values(n);
            assert_eq!(vals.len() as u128, space.count(n), "size {n}");
            assert!(vals.iter().all(|v| v.size() == n));
            let set: HashSet<_> = vals.iter().collect();
            assert_eq!(set.len(), vals.len());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            assert_eq!(space.random_value(6, &mut rng).size(), 6);
        }
    }
}
