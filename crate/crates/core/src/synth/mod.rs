//! Search for order parameters discharging a set of strict and weak
//! obligations: a propositional encoding solved in-process or by an
//! external solver, and an exhaustive reference search.

mod cnf;
mod encode;
mod search;
mod solve;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Duration;

use thiserror::Error;

use crate::orders::{is_admissible, orient, Mode, OrderParams};
use crate::trs::{Sym, Term};

pub use cnf::{Cnf, DimacsError, Model};
pub use encode::{decode, encode, encode_with_cap, EncodingArtifact, FilterVars, DEFAULT_MAX_VARS};
pub use search::{search_backtracking, SearchLimits};
pub use solve::{parse_solver_output, solve, write_solver_output, Backend, SolveError};

/// Admissible argument filterings per symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FilterSpace {
    Identity,
    /// Identity, a single collapse, or all positions but one.
    Restricted,
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObligationSet {
    pub strict: Vec<(Term, Term)>,
    pub weak: Vec<(Term, Term)>,
    /// Arity of every symbol occurring in the obligations.
    pub arity: BTreeMap<Sym, usize>,
    /// Symbols treated as defined by the order.
    pub guard: BTreeSet<Sym>,
    pub compounds: BTreeSet<Sym>,
    /// Compound symbols may be neither collapsed nor shortened.
    pub safe_filtering: bool,
    pub filters: FilterSpace,
}

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("encoding exceeds the cap of {0} variables")]
    Capacity(usize),
    #[error("search space of {0} candidates exceeds the cap")]
    SearchCap(u128),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("decoded parameters do not verify: {0}")]
    DecodeInconsistency(String),
}

impl ObligationSet {
    pub fn new(
        strict: Vec<(Term, Term)>,
        weak: Vec<(Term, Term)>,
        guard: BTreeSet<Sym>,
        compounds: BTreeSet<Sym>,
        filters: FilterSpace,
    ) -> Self {
        let mut arity = BTreeMap::new();
        for (l, r) in strict.iter().chain(&weak) {
            for t in [l, r] {
                t.walk(&mut |u| {
                    if let Term::App(f, a) = u {
                        arity.insert(*f, a.len());
                    }
                });
            }
        }
        ObligationSet {
            strict,
            weak,
            arity,
            guard,
            compounds,
            safe_filtering: true,
            filters,
        }
    }

    pub fn symbols(&self) -> BTreeSet<Sym> {
        self.arity.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.strict.len() + self.weak.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Verifies candidate parameters with the order decision procedures.
    pub fn check(&self, params: &OrderParams) -> Result<(), String> {
        if !is_admissible(&params.prec, &params.guard, &self.symbols()) {
            return Err("precedence is not admissible".into());
        }
        if self.safe_filtering
            && !params.filtering.is_safe_for(&self.compounds, |c| {
                self.arity.get(&c).copied().unwrap_or(0)
            })
        {
            return Err("filtering drops an argument of a compound symbol".into());
        }
        let strict = orient(&self.strict, params, Mode::Strict).map_err(|e| e.to_string())?;
        if let Some(&i) = strict.failures().first() {
            return Err(format!("strict obligation {i} is not oriented"));
        }
        let weak = orient(&self.weak, params, Mode::Weak).map_err(|e| e.to_string())?;
        if let Some(&i) = weak.failures().first() {
            return Err(format!("weak obligation {i} is not oriented"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SynthConfig {
    pub backend: Backend,
    pub timeout: Option<Duration>,
    pub max_vars: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            backend: Backend::Internal,
            timeout: None,
            max_vars: DEFAULT_MAX_VARS,
        }
    }
}

/// Encodes, solves and decodes; `None` when no parameters exist in the
/// configured space.
pub fn synthesize(
    obls: &ObligationSet,
    config: &SynthConfig,
) -> Result<Option<OrderParams>, SynthError> {
    let art = encode_with_cap(obls, config.max_vars)?;
    match solve(&art.cnf, &config.backend, config.timeout)? {
        None => Ok(None),
        Some(model) => decode(&art, &model, obls).map(Some),
    }
}

#[cfg(test)]
mod tests;
