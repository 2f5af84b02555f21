use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use super::interp::{nf_v, v_redexes, Interpretation};
use super::order::SeqOrder;
use super::Seq;
use crate::orders::{FilterError, OrderParams};
use crate::trs::rewrite::{match_term, redexes};
use crate::trs::{Rule, Sym, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbeddingMode {
    /// Interpretation `N`; strict rules at the root are strict steps, every
    /// other step is weak.
    Direct,
    /// Interpretation `Q`; every strict-rule step is strict.
    Pairs,
}

#[derive(Clone, Debug)]
pub struct EmbeddingConfig {
    pub k: usize,
    /// Maximal number of explored terms.
    pub fuel: usize,
    pub mode: EmbeddingMode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub from: Term,
    pub to: Term,
    pub rule: usize,
    pub strict: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EmbeddingReport {
    pub states: usize,
    pub strict_steps: usize,
    pub weak_steps: usize,
    /// Steps that needed the detour through `nfV` with single `V` steps.
    pub indirect: usize,
    pub violations: Vec<Violation>,
    /// Longest number of strict steps along an explored derivation.
    pub max_strict_chain: u64,
}

impl EmbeddingReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbedError {
    #[error("fuel exhausted after {0} states")]
    FuelExhausted(usize),
    #[error(transparent)]
    Filter(#[from] FilterError),
}

/// `max{3·‖π(r)‖}` over the right-hand sides of the given rules.
pub fn default_k(rules: &[Rule], params: &OrderParams) -> Result<usize, FilterError> {
    let mut k = 1;
    for r in rules {
        k = k.max(3 * params.filtering.apply(&r.rhs)?.bnorm());
    }
    Ok(k)
}

struct Checker<'a> {
    all: Vec<Rule>,
    n_strict: usize,
    v_roots: &'a BTreeSet<Sym>,
    bottom: Sym,
    interp: Interpretation<'a>,
    order: SeqOrder<'a>,
    mode: EmbeddingMode,
    cache: HashMap<Term, Seq>,
}

impl Checker<'_> {
    fn seq(&mut self, t: &Term) -> Result<Seq, FilterError> {
        if let Some(s) = self.cache.get(t) {
            return Ok(s.clone());
        }
        let s = match self.mode {
            EmbeddingMode::Direct => self.interp.pred_n(t)?,
            EmbeddingMode::Pairs => self.interp.pred_q(t)?,
        };
        self.cache.insert(t.clone(), s.clone());
        Ok(s)
    }

    fn nfv(&self, t: &Term) -> Term {
        nf_v(&self.all, self.v_roots, self.bottom, t)
    }

    fn descends(&mut self, a: &Term, b: &Term, strict: bool) -> Result<bool, FilterError> {
        let (sa, sb) = (self.seq(a)?, self.seq(b)?);
        let k = self.order.k();
        Ok(if strict {
            self.order.gpop(&sa, &sb, k)
        } else {
            self.order.geq(&sa, &sb, k)
        })
    }

    /// Replays the step on `nfV(u)` with the same rule and position, then
    /// normalises with single innermost `V` steps, checking each link.
    fn indirect(
        &mut self,
        u: &Term,
        pos: &[usize],
        rule: usize,
        strict: bool,
        target: &Term,
    ) -> Result<bool, FilterError> {
        let nu = self.nfv(u);
        let Some(redex) = nu.at(pos) else {
            return Ok(false);
        };
        let r = &self.all[rule];
        let Some(sigma) = match_term(&r.lhs, redex) else {
            return Ok(false);
        };
        let mut w = nu.replace_at(pos, r.rhs.apply(&sigma));
        if !self.descends(&nu, &w, strict)? {
            return Ok(false);
        }
        let bot = Term::constant(self.bottom);
        loop {
            let ps = v_redexes(&self.all, self.v_roots, &w);
            let Some(p) = ps.first() else { break };
            let next = w.replace_at(p, bot.clone());
            if !self.descends(&w, &next, false)? {
                return Ok(false);
            }
            w = next;
        }
        Ok(&w == target)
    }
}

/// Explores every derivation from `start` under innermost `strict ∪ weak`
/// rewriting and checks that each step descends under the interpretation
/// of `V`-normal forms: strictly in `>pop_k` for strict steps, weakly for
/// the others.
#[allow(clippy::too_many_arguments)]
pub fn check_embedding(
    strict: &[Rule],
    weak: &[Rule],
    params: &OrderParams,
    compounds: &BTreeSet<Sym>,
    v_roots: &BTreeSet<Sym>,
    bottom: Sym,
    start: &Term,
    config: &EmbeddingConfig,
) -> Result<EmbeddingReport, EmbedError> {
    let all: Vec<Rule> = strict.iter().chain(weak).cloned().collect();
    let mut c = Checker {
        all,
        n_strict: strict.len(),
        v_roots,
        bottom,
        interp: Interpretation::new(params, compounds),
        order: SeqOrder::new(&params.prec, config.k),
        mode: config.mode,
        cache: HashMap::new(),
    };
    let mut report = EmbeddingReport::default();
    let mut index: HashMap<Term, usize> = HashMap::new();
    let mut terms: Vec<Term> = Vec::new();
    let mut edges: Vec<Vec<(usize, bool)>> = Vec::new();
    let mut queue = VecDeque::new();
    index.insert(start.clone(), 0);
    terms.push(start.clone());
    edges.push(Vec::new());
    queue.push_back(0);
    while let Some(i) = queue.pop_front() {
        let u = terms[i].clone();
        let nu = c.nfv(&u);
        for x in redexes(&c.all, &c.all, &u) {
            let v = x.apply(&u);
            let is_strict = x.rule < c.n_strict
                && (config.mode == EmbeddingMode::Pairs || x.position.is_empty());
            if is_strict {
                report.strict_steps += 1;
            } else {
                report.weak_steps += 1;
            }
            let nv = c.nfv(&v);
            if !c.descends(&nu, &nv, is_strict)? {
                if c.indirect(&u, &x.position, x.rule, is_strict, &nv)? {
                    report.indirect += 1;
                } else {
                    report.violations.push(Violation {
                        from: u.clone(),
                        to: v.clone(),
                        rule: x.rule,
                        strict: is_strict,
                    });
                }
            }
            let j = match index.get(&v) {
                Some(&j) => j,
                None => {
                    if terms.len() >= config.fuel {
                        return Err(EmbedError::FuelExhausted(terms.len()));
                    }
                    let j = terms.len();
                    index.insert(v.clone(), j);
                    terms.push(v);
                    edges.push(Vec::new());
                    queue.push_back(j);
                    j
                }
            };
            edges[i].push((j, is_strict));
        }
    }
    report.states = terms.len();
    report.max_strict_chain = longest(&edges).ok_or(EmbedError::FuelExhausted(terms.len()))?;
    Ok(report)
}

/// Longest weighted path from node 0; `None` on a cycle.
fn longest(edges: &[Vec<(usize, bool)>]) -> Option<u64> {
    let n = edges.len();
    let mut best: Vec<Option<u64>> = vec![None; n];
    let mut state = vec![0u8; n];
    // iterative post-order to stay off the call stack
    let mut stack = vec![(0usize, 0usize)];
    state[0] = 1;
    while let Some(&mut (v, ref mut e)) = stack.last_mut() {
        if *e < edges[v].len() {
            let (w, _) = edges[v][*e];
            *e += 1;
            match state[w] {
                0 => {
                    state[w] = 1;
                    stack.push((w, 0));
                }
                1 => return None,
                _ => {}
            }
        } else {
            let b = edges[v]
                .iter()
                .map(|&(w, s)| best[w].unwrap() + u64::from(s))
                .max()
                .unwrap_or(0);
            best[v] = Some(b);
            state[v] = 2;
            stack.pop();
        }
    }
    best[0]
}
