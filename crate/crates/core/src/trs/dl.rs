//! Exact derivation lengths by memoised search.
//!
//! For every subterm the engine computes the set of terminal terms it can
//! reach together with the maximal number of counted steps needed to get
//! there. Arguments are independent under the restricted relations used
//! here, so the map of `f(t1..tn)` is built from the product of the
//! argument maps followed by root steps.

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use thiserror::Error;

use super::rewrite::match_term;
use super::term::Term;
use super::{Rule, Trs};

pub const DEFAULT_FUEL: u64 = 100_000;

const ENGINE_STACK: usize = 256 << 20;

#[derive(Clone, Copy, Debug)]
pub enum Strategy<'a> {
    Innermost,
    /// `weak* . strict . weak*` with redex arguments normal for
    /// `strict ∪ weak`; only strict steps are counted.
    Relative {
        strict: &'a [Rule],
        weak: &'a [Rule],
        root_only: bool,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DlError {
    /// The budget was used up or a cycle was found.
    #[error("fuel exhausted")]
    FuelExhausted,
}

type NfMap = Rc<Vec<(Term, u64)>>;

struct Engine<'a> {
    /// (rule, weight, usable below the root)
    rules: Vec<(&'a Rule, u64, bool)>,
    q: Vec<&'a Rule>,
    top_matters: bool,
    memo: HashMap<(Term, bool), NfMap>,
    active: HashSet<(Term, bool)>,
    normal: HashMap<Term, bool>,
    fuel: u64,
}

impl<'a> Engine<'a> {
    fn new(trs: &'a Trs, strategy: &Strategy<'a>, fuel: u64) -> Self {
        let rules: Vec<(&Rule, u64, bool)> = match *strategy {
            Strategy::Innermost => trs.rules.iter().map(|r| (r, 1, true)).collect(),
            Strategy::Relative {
                strict,
                weak,
                root_only,
            } => strict
                .iter()
                .map(|r| (r, 1, !root_only))
                .chain(weak.iter().map(|r| (r, 0, true)))
                .collect(),
        };
        let q = rules.iter().map(|(r, _, _)| *r).collect();
        let top_matters = rules.iter().any(|(_, _, inner)| !inner);
        Engine {
            rules,
            q,
            top_matters,
            memo: HashMap::new(),
            active: HashSet::new(),
            normal: HashMap::new(),
            fuel,
        }
    }

    fn burn(&mut self) -> Result<(), DlError> {
        if self.fuel == 0 {
            return Err(DlError::FuelExhausted);
        }
        self.fuel -= 1;
        Ok(())
    }

    fn is_q_normal(&mut self, t: &Term) -> bool {
        if t.is_var() {
            return true;
        }
        if let Some(&b) = self.normal.get(t) {
            return b;
        }
        let b = t.args().iter().all(|a| self.is_q_normal(a))
            && !self
                .q
                .iter()
                .any(|r| r.lhs.root() == t.root() && match_term(&r.lhs, t).is_some());
        self.normal.insert(t.clone(), b);
        b
    }

    fn nf(&mut self, t: &Term, top: bool) -> Result<NfMap, DlError> {
        let Term::App(f, args) = t else {
            return Ok(Rc::new(vec![(t.clone(), 0)]));
        };
        let key = (t.clone(), top && self.top_matters);
        if let Some(m) = self.memo.get(&key) {
            return Ok(m.clone());
        }
        if self.active.contains(&key) {
            return Err(DlError::FuelExhausted);
        }
        self.burn()?;
        self.active.insert(key.clone());
        let mut maps = Vec::with_capacity(args.len());
        for a in args.iter() {
            maps.push(self.nf(a, false)?);
        }
        let mut result: HashMap<Term, u64> = HashMap::new();
        let mut idx = vec![0usize; maps.len()];
        loop {
            self.burn()?;
            let mut base = 0;
            let mut combo = Vec::with_capacity(maps.len());
            for (m, &i) in maps.iter().zip(idx.iter()) {
                combo.push(m[i].0.clone());
                base += m[i].1;
            }
            let u = Term::app(*f, combo);
            let mut reducts = Vec::new();
            if u.args().iter().all(|a| self.is_q_normal(a)) {
                for &(r, w, inner) in &self.rules {
                    if (top || inner) && r.lhs.root() == Some(*f) {
                        if let Some(s) = match_term(&r.lhs, &u) {
                            reducts.push((r.rhs.apply(&s), w));
                        }
                    }
                }
            }
            if reducts.is_empty() {
                let e = result.entry(u).or_insert(base);
                *e = (*e).max(base);
            } else {
                for (r, w) in reducts {
                    let m = self.nf(&r, top)?;
                    for (v, s) in m.iter() {
                        let total = base + w + s;
                        let e = result.entry(v.clone()).or_insert(total);
                        *e = (*e).max(total);
                    }
                }
            }
            // advance the odometer over argument maps
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < maps[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
        self.active.remove(&key);
        let mut v: Vec<(Term, u64)> = result.into_iter().collect();
        v.sort();
        let m = Rc::new(v);
        self.memo.insert(key, m.clone());
        Ok(m)
    }
}

/// Runs `f` on a thread with a large stack; the engine recurses once per
/// step along a derivation.
pub(crate) fn with_big_stack<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(ENGINE_STACK)
            .spawn_scoped(s, f)
            .expect("spawn derivation-length worker")
            .join()
            .expect("derivation-length worker panicked")
    })
}

/// Derivation length without switching stacks; callers must already run on
/// a large stack.
pub(crate) fn dl_in_place(
    trs: &Trs,
    t: &Term,
    strategy: &Strategy<'_>,
    fuel: u64,
) -> Result<u64, DlError> {
    let mut e = Engine::new(trs, strategy, fuel);
    let m = e.nf(t, true)?;
    Ok(m.iter().map(|(_, n)| *n).max().unwrap_or(0))
}

/// Terminal terms reachable from `t`, each with the longest counted
/// derivation reaching it.
pub fn normal_forms(
    trs: &Trs,
    t: &Term,
    strategy: &Strategy<'_>,
    fuel: u64,
) -> Result<Vec<(Term, u64)>, DlError> {
    with_big_stack(|| {
        let mut e = Engine::new(trs, strategy, fuel);
        e.nf(t, true).map(|m| m.as_ref().clone())
    })
}

/// Maximal number of counted steps from `t`.
pub fn derivation_length(
    trs: &Trs,
    t: &Term,
    strategy: &Strategy<'_>,
    fuel: u64,
) -> Result<u64, DlError> {
    with_big_stack(|| dl_in_place(trs, t, strategy, fuel))
}
