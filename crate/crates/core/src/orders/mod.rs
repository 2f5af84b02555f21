//! Quasi-precedences, safe mappings, argument filterings and the polynomial
//! path order POP* with its auxiliary order, as decision procedures.

mod multiset;
mod pop;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::trs::{Rule, Sym, Term};

pub use multiset::{multiset_cmp, multiset_cmp_matrix, MulOrd};
pub use pop::{equiv, Pop};

/// A total quasi-precedence given by ranks; unranked symbols have rank 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Precedence {
    pub rank: BTreeMap<Sym, u32>,
}

impl Precedence {
    pub fn rank(&self, f: Sym) -> u32 {
        self.rank.get(&f).copied().unwrap_or(0)
    }

    pub fn gt(&self, f: Sym, g: Sym) -> bool {
        self.rank(f) > self.rank(g)
    }

    pub fn equiv(&self, f: Sym, g: Sym) -> bool {
        self.rank(f) == self.rank(g)
    }
}

impl FromIterator<(Sym, u32)> for Precedence {
    fn from_iter<I: IntoIterator<Item = (Sym, u32)>>(iter: I) -> Self {
        Precedence {
            rank: iter.into_iter().collect(),
        }
    }
}

/// Safe argument positions (0-based) of the guarded symbols. A guarded
/// symbol without an entry has no safe position.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SafeMapping {
    pub safe: BTreeMap<Sym, BTreeSet<usize>>,
}

impl SafeMapping {
    pub fn get(&self, f: Sym) -> Option<&BTreeSet<usize>> {
        self.safe.get(&f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Filter {
    /// Replace the term by its argument at this (0-based) position.
    Collapse(usize),
    /// Keep these positions, strictly increasing.
    Keep(Vec<usize>),
}

/// Argument filtering; symbols without an entry are left untouched.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ArgumentFiltering {
    pub pi: BTreeMap<Sym, Filter>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FilterError {
    #[error("filter position {position} out of range for symbol {symbol:?} of arity {arity}")]
    OutOfRange {
        symbol: Sym,
        position: usize,
        arity: usize,
    },
    #[error("kept positions of {0:?} are not strictly increasing")]
    Unordered(Sym),
}

impl ArgumentFiltering {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn get(&self, f: Sym) -> Option<&Filter> {
        self.pi.get(&f)
    }

    pub fn is_collapsing(&self, f: Sym) -> bool {
        matches!(self.pi.get(&f), Some(Filter::Collapse(_)))
    }

    /// Original position of the `j`-th argument of `f` after filtering.
    pub fn original_position(&self, f: Sym, j: usize) -> usize {
        match self.pi.get(&f) {
            Some(Filter::Keep(v)) => v[j],
            _ => j,
        }
    }

    /// Whether `f`'s original position `i` survives filtering.
    pub fn keeps(&self, f: Sym, i: usize) -> bool {
        match self.pi.get(&f) {
            None => true,
            Some(Filter::Keep(v)) => v.contains(&i),
            Some(Filter::Collapse(_)) => false,
        }
    }

    pub fn apply(&self, t: &Term) -> Result<Term, FilterError> {
        match t {
            Term::Var(_) => Ok(t.clone()),
            Term::App(f, args) => match self.pi.get(f) {
                None => Ok(Term::App(
                    *f,
                    args.iter()
                        .map(|a| self.apply(a))
                        .collect::<Result<_, _>>()?,
                )),
                Some(Filter::Collapse(i)) => {
                    let a = args.get(*i).ok_or(FilterError::OutOfRange {
                        symbol: *f,
                        position: *i,
                        arity: args.len(),
                    })?;
                    self.apply(a)
                }
                Some(Filter::Keep(keep)) => {
                    if keep.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(FilterError::Unordered(*f));
                    }
                    let mut out = Vec::with_capacity(keep.len());
                    for &i in keep {
                        let a = args.get(i).ok_or(FilterError::OutOfRange {
                            symbol: *f,
                            position: i,
                            arity: args.len(),
                        })?;
                        out.push(self.apply(a)?);
                    }
                    Ok(Term::app(*f, out))
                }
            },
        }
    }

    /// No compound symbol is collapsed or loses an argument.
    pub fn is_safe_for(&self, compounds: &BTreeSet<Sym>, arity: impl Fn(Sym) -> usize) -> bool {
        compounds.iter().all(|&c| match self.pi.get(&c) {
            None => true,
            Some(Filter::Keep(v)) => v.len() == arity(c),
            Some(Filter::Collapse(_)) => false,
        })
    }
}

pub fn apply_filtering(pi: &ArgumentFiltering, t: &Term) -> Result<Term, FilterError> {
    pi.apply(t)
}

/// Precedence, safe mapping and filtering, together with the set of
/// symbols treated as defined by the order (`D`, `GD`, or `GD` plus the
/// marked symbols). Every other symbol is a constructor: all of its
/// positions are safe and it never heads a precedence decrease.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrderParams {
    pub prec: Precedence,
    pub safe: SafeMapping,
    pub filtering: ArgumentFiltering,
    pub guard: BTreeSet<Sym>,
}

impl OrderParams {
    pub fn is_guarded(&self, f: Sym) -> bool {
        self.guard.contains(&f)
    }

    /// Safety of position `j` of `f` in a filtered term.
    pub fn is_safe(&self, f: Sym, j: usize) -> bool {
        if !self.is_guarded(f) {
            return true;
        }
        let i = self.filtering.original_position(f, j);
        self.safe.get(f).is_some_and(|s| s.contains(&i))
    }

    pub fn gpop_filtered(&self, s: &Term, t: &Term) -> Result<bool, FilterError> {
        let (fs, ft) = (self.filtering.apply(s)?, self.filtering.apply(t)?);
        Ok(Pop::new(self).gpop(&fs, &ft))
    }

    pub fn geq_filtered(&self, s: &Term, t: &Term) -> Result<bool, FilterError> {
        let (fs, ft) = (self.filtering.apply(s)?, self.filtering.apply(t)?);
        Ok(Pop::new(self).geq(&fs, &ft))
    }
}

/// `f ≻ g` with `g` guarded forces `f` guarded, and equivalent symbols are
/// either both guarded or both not.
pub fn is_admissible(prec: &Precedence, guard: &BTreeSet<Sym>, symbols: &BTreeSet<Sym>) -> bool {
    symbols.iter().all(|&f| {
        symbols.iter().all(|&g| {
            let (df, dg) = (guard.contains(&f), guard.contains(&g));
            !(prec.gt(f, g) && dg && !df) && !(prec.equiv(f, g) && df != dg)
        })
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Strict,
    Weak,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientReport {
    pub results: Vec<bool>,
}

impl OrientReport {
    pub fn all(&self) -> bool {
        self.results.iter().all(|&b| b)
    }

    pub fn failures(&self) -> Vec<usize> {
        (0..self.results.len())
            .filter(|&i| !self.results[i])
            .collect()
    }
}

/// Checks every `(lhs, rhs)` obligation with `>pop*_π` (strict) or
/// `≥pop*_π` (weak), sharing one memo table.
pub fn orient(
    obligations: &[(Term, Term)],
    params: &OrderParams,
    mode: Mode,
) -> Result<OrientReport, FilterError> {
    let mut pop = Pop::new(params);
    let mut results = Vec::with_capacity(obligations.len());
    for (l, r) in obligations {
        let (fl, fr) = (params.filtering.apply(l)?, params.filtering.apply(r)?);
        results.push(match mode {
            Mode::Strict => pop.gpop(&fl, &fr),
            Mode::Weak => pop.geq(&fl, &fr),
        });
    }
    Ok(OrientReport { results })
}

pub fn orient_rules(
    rules: &[Rule],
    params: &OrderParams,
    mode: Mode,
) -> Result<OrientReport, FilterError> {
    let obls: Vec<(Term, Term)> = rules
        .iter()
        .map(|r| (r.lhs.clone(), r.rhs.clone()))
        .collect();
    orient(&obls, params, mode)
}

#[cfg(test)]
mod tests;
