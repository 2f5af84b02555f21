use std::collections::{HashSet, VecDeque};

use thiserror::Error;

use super::term::{Position, Subst, Term, Var};
use super::{Rule, Trs};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("fuel exhausted after exploring {0} terms")]
    FuelExhausted(u64),
}

pub fn match_term(pattern: &Term, subject: &Term) -> Option<Subst> {
    let mut s = Subst::new();
    match_into(pattern, subject, &mut s).then_some(s)
}

fn match_into(p: &Term, t: &Term, s: &mut Subst) -> bool {
    match p {
        Term::Var(v) => match s.get(v) {
            Some(bound) => bound == t,
            None => {
                s.insert(*v, t.clone());
                true
            }
        },
        Term::App(f, ps) => match t {
            Term::App(g, ts) if f == g && ps.len() == ts.len() => {
                ps.iter().zip(ts.iter()).all(|(p, t)| match_into(p, t, s))
            }
            _ => false,
        },
    }
}

fn walk<'a>(t: &'a Term, s: &'a Subst) -> &'a Term {
    let mut t = t;
    while let Term::Var(v) = t {
        match s.get(v) {
            Some(b) => t = b,
            None => break,
        }
    }
    t
}

fn occurs(v: Var, t: &Term, s: &Subst) -> bool {
    match walk(t, s) {
        Term::Var(w) => *w == v,
        Term::App(_, args) => args.iter().any(|a| occurs(v, a, s)),
    }
}

fn resolve(t: &Term, s: &Subst) -> Term {
    match walk(t, s) {
        Term::Var(v) => Term::Var(*v),
        Term::App(f, args) => Term::App(*f, args.iter().map(|a| resolve(a, s)).collect()),
    }
}

/// Most general unifier, fully resolved.
pub fn unify(a: &Term, b: &Term) -> Option<Subst> {
    let mut s = Subst::new();
    let mut stack = vec![(a.clone(), b.clone())];
    while let Some((x, y)) = stack.pop() {
        let x = walk(&x, &s).clone();
        let y = walk(&y, &s).clone();
        match (&x, &y) {
            (Term::Var(v), Term::Var(w)) if v == w => {}
            (Term::Var(v), t) | (t, Term::Var(v)) => {
                if occurs(*v, t, &s) {
                    return None;
                }
                s.insert(*v, t.clone());
            }
            (Term::App(f, xs), Term::App(g, ys)) => {
                if f != g || xs.len() != ys.len() {
                    return None;
                }
                stack.extend(xs.iter().cloned().zip(ys.iter().cloned()));
            }
        }
    }
    let keys: Vec<Var> = s.keys().copied().collect();
    Some(
        keys.into_iter()
            .map(|v| (v, resolve(&Term::Var(v), &s)))
            .collect(),
    )
}

/// A contractible redex: rule `rule` applies at `position`, yielding `result`
/// there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Redex {
    pub position: Position,
    pub rule: usize,
    pub result: Term,
}

impl Redex {
    pub fn apply(&self, t: &Term) -> Term {
        t.replace_at(&self.position, self.result.clone())
    }
}

fn root_matches(rules: &[Rule], t: &Term) -> bool {
    rules
        .iter()
        .any(|r| r.lhs.root() == t.root() && match_term(&r.lhs, t).is_some())
}

/// All redexes of `rules` in `t` whose arguments are normal forms of `q`.
pub fn redexes(rules: &[Rule], q: &[Rule], t: &Term) -> Vec<Redex> {
    fn visit(
        rules: &[Rule],
        q: &[Rule],
        t: &Term,
        path: &mut Position,
        out: &mut Vec<Redex>,
    ) -> bool {
        match t {
            Term::Var(_) => true,
            Term::App(f, args) => {
                let mut args_nf = true;
                for (i, a) in args.iter().enumerate() {
                    path.push(i);
                    args_nf &= visit(rules, q, a, path, out);
                    path.pop();
                }
                if !args_nf {
                    return false;
                }
                for (ri, r) in rules.iter().enumerate() {
                    if r.lhs.root() != Some(*f) {
                        continue;
                    }
                    if let Some(s) = match_term(&r.lhs, t) {
                        out.push(Redex {
                            position: path.clone(),
                            rule: ri,
                            result: r.rhs.apply(&s),
                        });
                    }
                }
                !root_matches(q, t)
            }
        }
    }
    let mut out = Vec::new();
    visit(rules, q, t, &mut Vec::new(), &mut out);
    out
}

pub fn is_normal_form(rules: &[Rule], t: &Term) -> bool {
    match t {
        Term::Var(_) => true,
        Term::App(_, args) => {
            args.iter().all(|a| is_normal_form(rules, a)) && !root_matches(rules, t)
        }
    }
}

fn dedup(ts: impl IntoIterator<Item = Term>) -> Vec<Term> {
    let mut seen = HashSet::new();
    ts.into_iter().filter(|t| seen.insert(t.clone())).collect()
}

pub fn q_restricted_step(r: &[Rule], q: &[Rule], t: &Term) -> Vec<Term> {
    dedup(redexes(r, q, t).iter().map(|x| x.apply(t)))
}

pub fn innermost_step(trs: &Trs, t: &Term) -> Vec<Term> {
    q_restricted_step(&trs.rules, &trs.rules, t)
}

/// One step of `weak* . strict . weak*` with arguments of every redex normal
/// with respect to `strict ∪ weak`; with `root_only` the strict step is at
/// the root.
pub fn relative_step(
    strict: &[Rule],
    weak: &[Rule],
    t: &Term,
    root_only: bool,
) -> Result<Vec<Term>, RewriteError> {
    relative_step_with_fuel(strict, weak, t, root_only, super::DEFAULT_FUEL)
}

pub fn relative_step_with_fuel(
    strict: &[Rule],
    weak: &[Rule],
    t: &Term,
    root_only: bool,
    fuel: u64,
) -> Result<Vec<Term>, RewriteError> {
    let q: Vec<Rule> = strict.iter().chain(weak.iter()).cloned().collect();
    let mut budget = fuel;
    let before = weak_closure(weak, &q, [t.clone()], &mut budget, fuel)?;
    let mut mids = Vec::new();
    for u in &before {
        for x in redexes(strict, &q, u) {
            if !root_only || x.position.is_empty() {
                mids.push(x.apply(u));
            }
        }
    }
    weak_closure(weak, &q, dedup(mids), &mut budget, fuel)
}

fn weak_closure(
    weak: &[Rule],
    q: &[Rule],
    start: impl IntoIterator<Item = Term>,
    budget: &mut u64,
    fuel: u64,
) -> Result<Vec<Term>, RewriteError> {
    let mut seen: HashSet<Term> = HashSet::new();
    let mut order = Vec::new();
    let mut queue: VecDeque<Term> = VecDeque::new();
    for s in start {
        if seen.insert(s.clone()) {
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        if *budget == 0 {
            return Err(RewriteError::FuelExhausted(fuel));
        }
        *budget -= 1;
        for v in q_restricted_step(weak, q, &u) {
            if seen.insert(v.clone()) {
                queue.push_back(v);
            }
        }
        order.push(u);
    }
    Ok(order)
}
