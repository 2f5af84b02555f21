use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::pairs::DpProblem;
use crate::trs::{match_term, unify, Rule, Subst, Term, Trs, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyGraph {
    pub nodes: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

impl DependencyGraph {
    pub fn successors(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.range((n, 0)..(n + 1, 0)).map(|&(_, m)| m)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a, b))
    }
}

/// A path `P1 .. Pm` of the congruence graph, starting at a source. The
/// last class is the strict part; the others form the weak part.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CongruencePath {
    pub classes: Vec<Vec<usize>>,
}

impl CongruencePath {
    pub fn strict_part(&self) -> &[usize] {
        self.classes.last().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn weak_part(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.classes[..self.classes.len().saturating_sub(1)]
            .iter()
            .flatten()
            .copied()
            .collect();
        v.sort_unstable();
        v
    }

    pub fn all_pairs(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.classes.iter().flatten().copied().collect();
        v.sort_unstable();
        v
    }
}

fn contains_redex(rules: &[Rule], t: &Term) -> bool {
    match t {
        Term::Var(_) => false,
        Term::App(..) => {
            t.args().iter().any(|a| contains_redex(rules, a))
                || rules
                    .iter()
                    .any(|r| r.lhs.root() == t.root() && match_term(&r.lhs, t).is_some())
        }
    }
}

/// The arguments of every constraint term can still be normal forms after
/// applying `mu`.
fn args_may_be_normal(rules: &[Rule], mu: &Subst, constraints: &[&Term]) -> bool {
    constraints.iter().all(|c| {
        c.args()
            .iter()
            .all(|a| !contains_redex(rules, &a.apply(mu)))
    })
}

struct Icap<'a> {
    rules: &'a [Rule],
    next_var: u32,
}

impl Icap<'_> {
    fn fresh(&mut self) -> Term {
        let v = Term::Var(Var(self.next_var));
        self.next_var += 1;
        v
    }

    /// Innermost cap of `t` under the normality context `ctx`: subterms that
    /// might reduce are replaced by fresh variables; variables are kept
    /// because they stand for normal forms.
    fn cap(&mut self, t: &Term, ctx: &Term) -> Term {
        match t {
            Term::Var(_) => t.clone(),
            Term::App(f, args) => {
                let capped = Term::App(*f, args.iter().map(|a| self.cap(a, ctx)).collect());
                let rules = self.rules;
                for r in rules.iter().filter(|r| r.lhs.root() == Some(*f)) {
                    let offset = self.next_var;
                    let lhs = r.lhs.shift_vars(offset);
                    self.next_var += r.lhs.max_var().map_or(0, |m| m + 1);
                    if let Some(mu) = unify(&capped, &lhs) {
                        if args_may_be_normal(rules, &mu, &[ctx, &lhs]) {
                            return self.fresh();
                        }
                    }
                }
                capped
            }
        }
    }
}

fn max_var_of(ts: &[&Term]) -> u32 {
    ts.iter()
        .filter_map(|t| t.max_var())
        .max()
        .map_or(0, |m| m + 1)
}

/// Estimated weak innermost dependency graph: an edge `p -> q` whenever the
/// innermost cap of a marked component of `rhs_p` unifies with a renamed
/// `lhs_q` such that both left-hand sides keep normal arguments.
pub fn estimate_graph(problem: &DpProblem, trs: &Trs) -> DependencyGraph {
    let rules = &trs.rules;
    let n = problem.pairs.len();
    let mut edges = BTreeSet::new();
    for (i, p) in problem.pairs.iter().enumerate() {
        let base = max_var_of(&[&p.lhs, &p.rhs]);
        let mut icap = Icap {
            rules,
            next_var: base.max(1000),
        };
        let caps: Vec<Term> = p
            .components()
            .into_iter()
            .map(|u| icap.cap(u, &p.lhs))
            .collect();
        for (j, q) in problem.pairs.iter().enumerate() {
            let shift = icap.next_var + 1;
            let lhs_q = q.lhs.shift_vars(shift);
            let hit = caps.iter().any(|c| {
                c.root() == lhs_q.root()
                    && unify(c, &lhs_q)
                        .is_some_and(|mu| args_may_be_normal(rules, &mu, &[&p.lhs, &lhs_q]))
            });
            if hit {
                edges.insert((i, j));
            }
        }
    }
    DependencyGraph { nodes: n, edges }
}

/// Strongly connected components (Tarjan), each sorted, ordered by least
/// member.
pub fn sccs(g: &DependencyGraph) -> Vec<Vec<usize>> {
    struct St<'a> {
        g: &'a DependencyGraph,
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }
    fn connect(st: &mut St<'_>, v: usize) {
        st.index[v] = Some(st.next);
        st.low[v] = st.next;
        st.next += 1;
        st.stack.push(v);
        st.on[v] = true;
        let succ: Vec<usize> = st.g.successors(v).collect();
        for w in succ {
            match st.index[w] {
                None => {
                    connect(st, w);
                    st.low[v] = st.low[v].min(st.low[w]);
                }
                Some(iw) if st.on[w] => st.low[v] = st.low[v].min(iw),
                _ => {}
            }
        }
        if Some(st.low[v]) == st.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = st.stack.pop().unwrap();
                st.on[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            st.out.push(comp);
        }
    }
    let mut st = St {
        g,
        index: vec![None; g.nodes],
        low: vec![0; g.nodes],
        on: vec![false; g.nodes],
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..g.nodes {
        if st.index[v].is_none() {
            connect(&mut st, v);
        }
    }
    let mut out = st.out;
    out.sort();
    out
}

/// SCCs with at least two nodes or a self-loop.
pub fn nontrivial_sccs(g: &DependencyGraph) -> Vec<Vec<usize>> {
    sccs(g)
        .into_iter()
        .filter(|c| c.len() > 1 || g.has_edge(c[0], c[0]))
        .collect()
}

/// Every path of the congruence graph that starts in a source, including
/// all prefixes, so that each class is the strict part of some path.
pub fn congruence_paths(g: &DependencyGraph) -> Vec<CongruencePath> {
    let classes = sccs(g);
    let mut class_of = vec![0; g.nodes];
    for (c, members) in classes.iter().enumerate() {
        for &m in members {
            class_of[m] = c;
        }
    }
    let mut succ: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    let mut has_pred = vec![false; classes.len()];
    for &(a, b) in &g.edges {
        let (ca, cb) = (class_of[a], class_of[b]);
        if ca != cb {
            succ.entry(ca).or_default().insert(cb);
            has_pred[cb] = true;
        }
    }
    let mut out = Vec::new();
    fn extend(
        path: &mut Vec<usize>,
        succ: &BTreeMap<usize, BTreeSet<usize>>,
        classes: &[Vec<usize>],
        out: &mut Vec<CongruencePath>,
    ) {
        out.push(CongruencePath {
            classes: path.iter().map(|&c| classes[c].clone()).collect(),
        });
        let last = *path.last().unwrap();
        if let Some(next) = succ.get(&last) {
            for &c in next {
                path.push(c);
                extend(path, succ, classes, out);
                path.pop();
            }
        }
    }
    for c in 0..classes.len() {
        if !has_pred[c] {
            extend(&mut vec![c], &succ, &classes, &mut out);
        }
    }
    out
}

/// DOT rendering; nodes are labelled with 1-based pair indices.
pub fn to_dot(g: &DependencyGraph, labels: Option<&[String]>) -> String {
    let mut s = String::from("digraph widg {\n");
    for n in 0..g.nodes {
        match labels {
            Some(l) => {
                let _ = writeln!(
                    s,
                    "  n{} [label=\"{}: {}\"];",
                    n + 1,
                    n + 1,
                    l[n].replace('"', "\\\"")
                );
            }
            None => {
                let _ = writeln!(s, "  n{} [label=\"{}\"];", n + 1, n + 1);
            }
        }
    }
    for &(a, b) in &g.edges {
        let _ = writeln!(s, "  n{} -> n{};", a + 1, b + 1);
    }
    s.push_str("}\n");
    s
}
