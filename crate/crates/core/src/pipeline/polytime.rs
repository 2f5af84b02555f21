use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::cert::{AnalysisMode, Certificate};
use crate::trs::{unify, SortDecl, Sym, Term, Trs, Var};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PolytimeReason {
    /// The certificate does not establish the required hypotheses.
    CertificateNotApplicable(String),
    NotConstructor,
    NotOrthogonal(String),
    MissingSortDecl(String),
    UnknownSort(String),
    /// Rule index (0-based).
    NotSorted(usize),
    NotSimple(String),
    NotCompletelyDefined(String),
}

impl fmt::Display for PolytimeReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolytimeReason::CertificateNotApplicable(why) => {
                write!(f, "certificate not applicable: {why}")
            }
            PolytimeReason::NotConstructor => f.write_str("not a constructor system"),
            PolytimeReason::NotOrthogonal(why) => write!(f, "not orthogonal: {why}"),
            PolytimeReason::MissingSortDecl(s) => write!(f, "no sort declaration for `{s}`"),
            PolytimeReason::UnknownSort(s) => write!(f, "undeclared sort `{s}`"),
            PolytimeReason::NotSorted(i) => write!(f, "rule {} is not well-sorted", i + 1),
            PolytimeReason::NotSimple(s) => write!(f, "sort `{s}` has no rank"),
            PolytimeReason::NotCompletelyDefined(g) => write!(f, "`{g}` is not completely defined"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolytimeOutcome {
    Claim,
    NotApplicable(Vec<PolytimeReason>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SortedSignatureInfo {
    pub sorts: BTreeSet<String>,
    pub decls: BTreeMap<Sym, SortDecl>,
    /// Filled in by [`SortedSignatureInfo::ranks`] when the signature is simple.
    pub rank: BTreeMap<String, u32>,
}

impl SortedSignatureInfo {
    /// Declarations of the symbols of `trs`; sorts come from the SORTS block
    /// when present and from the declarations otherwise.
    pub fn from_trs(trs: &Trs) -> Self {
        let decls: BTreeMap<Sym, SortDecl> = trs
            .symbols()
            .filter_map(|f| trs.sig.sort(f).map(|d| (f, d.clone())))
            .collect();
        let sorts = if trs.sorts.is_empty() {
            decls
                .values()
                .flat_map(|d| d.args.iter().chain([&d.result]))
                .cloned()
                .collect()
        } else {
            trs.sorts.iter().cloned().collect()
        };
        let mut info = SortedSignatureInfo {
            sorts,
            decls,
            rank: BTreeMap::new(),
        };
        if let Ok(rank) = info.ranks(&trs.constructors) {
            info.rank = rank;
        }
        info
    }

    /// A rank function over the sorts, or the sorts admitting none. A
    /// constructor may have at most one argument whose sort lies in the
    /// strongly connected component of its result sort; ranks are heights
    /// in the condensation.
    pub fn ranks(
        &self,
        constructors: &BTreeSet<Sym>,
    ) -> Result<BTreeMap<String, u32>, Vec<String>> {
        let idx: BTreeMap<&String, usize> =
            self.sorts.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let n = self.sorts.len();
        let mut adj = vec![BTreeSet::new(); n];
        let cons: Vec<&SortDecl> = constructors
            .iter()
            .filter_map(|c| self.decls.get(c))
            .collect();
        for d in &cons {
            let Some(&r) = idx.get(&d.result) else {
                continue;
            };
            for a in &d.args {
                if let Some(&i) = idx.get(a) {
                    adj[r].insert(i);
                }
            }
        }
        let comp = components(&adj);
        let mut bad = BTreeSet::new();
        for d in &cons {
            let Some(&r) = idx.get(&d.result) else {
                continue;
            };
            let same = d
                .args
                .iter()
                .filter(|a| idx.get(a).is_some_and(|&i| comp[i] == comp[r]))
                .count();
            if same > 1 {
                bad.insert(d.result.clone());
            }
        }
        if !bad.is_empty() {
            return Err(bad.into_iter().collect());
        }
        let mut height: BTreeMap<usize, u32> = BTreeMap::new();
        fn h(c: usize, cadj: &[BTreeSet<usize>], memo: &mut BTreeMap<usize, u32>) -> u32 {
            if let Some(&x) = memo.get(&c) {
                return x;
            }
            let v = cadj[c]
                .iter()
                .map(|&d| h(d, cadj, memo) + 1)
                .max()
                .unwrap_or(0);
            memo.insert(c, v);
            v
        }
        let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);
        let mut cadj = vec![BTreeSet::new(); ncomp];
        for (s, succ) in adj.iter().enumerate() {
            for &t in succ {
                if comp[s] != comp[t] {
                    cadj[comp[s]].insert(comp[t]);
                }
            }
        }
        Ok(self
            .sorts
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), h(comp[i], &cadj, &mut height)))
            .collect())
    }
}

/// Tarjan's algorithm; returns the component id of every node.
fn components(adj: &[BTreeSet<usize>]) -> Vec<usize> {
    struct St<'a> {
        adj: &'a [BTreeSet<usize>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on: Vec<bool>,
        stack: Vec<usize>,
        comp: Vec<usize>,
        next: usize,
        ncomp: usize,
    }
    fn go(s: &mut St, v: usize) {
        s.index[v] = Some(s.next);
        s.low[v] = s.next;
        s.next += 1;
        s.stack.push(v);
        s.on[v] = true;
        for &w in s.adj[v].iter() {
            match s.index[w] {
                None => {
                    go(s, w);
                    s.low[v] = s.low[v].min(s.low[w]);
                }
                Some(i) if s.on[w] => s.low[v] = s.low[v].min(i),
                _ => {}
            }
        }
        if Some(s.low[v]) == s.index[v] {
            while let Some(w) = s.stack.pop() {
                s.on[w] = false;
                s.comp[w] = s.ncomp;
                if w == v {
                    break;
                }
            }
            s.ncomp += 1;
        }
    }
    let n = adj.len();
    let mut s = St {
        adj,
        index: vec![None; n],
        low: vec![0; n],
        on: vec![false; n],
        stack: Vec::new(),
        comp: vec![0; n],
        next: 0,
        ncomp: 0,
    };
    for v in 0..n {
        if s.index[v].is_none() {
            go(&mut s, v);
        }
    }
    s.comp
}

fn sort_of(
    t: &Term,
    decls: &BTreeMap<Sym, SortDecl>,
    env: &mut BTreeMap<Var, String>,
    expected: Option<&str>,
) -> Option<String> {
    match t {
        Term::Var(v) => match (env.get(v), expected) {
            (Some(s), Some(e)) => (s == e).then(|| s.clone()),
            (Some(s), None) => Some(s.clone()),
            (None, Some(e)) => {
                env.insert(*v, e.to_owned());
                Some(e.to_owned())
            }
            // the sort of a bare variable is fixed by the other side
            (None, None) => Some(String::new()),
        },
        Term::App(f, args) => {
            let d = decls.get(f)?;
            if expected.is_some_and(|e| e != d.result) || d.args.len() != args.len() {
                return None;
            }
            for (a, s) in args.iter().zip(&d.args) {
                sort_of(a, decls, env, Some(s))?;
            }
            Some(d.result.clone())
        }
    }
}

fn rule_is_sorted(lhs: &Term, rhs: &Term, decls: &BTreeMap<Sym, SortDecl>) -> bool {
    let mut env = BTreeMap::new();
    match sort_of(lhs, decls, &mut env, None) {
        Some(s) => sort_of(rhs, decls, &mut env, Some(&s)).is_some(),
        None => false,
    }
}

fn orthogonality(trs: &Trs) -> Option<String> {
    for (i, r) in trs.rules.iter().enumerate() {
        if !r.is_left_linear() {
            return Some(format!("rule {} is not left-linear", i + 1));
        }
    }
    for (i, r) in trs.rules.iter().enumerate() {
        let offset = r.lhs.max_var().map_or(0, |m| m + 1);
        for (j, s) in trs.rules.iter().enumerate() {
            let renamed = s.lhs.shift_vars(offset);
            for p in r.lhs.positions() {
                let sub = r.lhs.at(&p).unwrap();
                if sub.is_var() || (i == j && p.is_empty()) {
                    continue;
                }
                if unify(sub, &renamed).is_some() {
                    return Some(format!("rules {} and {} overlap", i + 1, j + 1));
                }
            }
        }
    }
    None
}

/// Whether every tuple of values of the given sorts matches some row.
fn covers(
    rows: Vec<Vec<Term>>,
    sorts: &[String],
    cons_of: &BTreeMap<&str, Vec<(Sym, &SortDecl)>>,
) -> bool {
    let Some((first, rest)) = sorts.split_first() else {
        return !rows.is_empty();
    };
    if rows.iter().all(|r| r[0].is_var()) {
        return covers(
            rows.into_iter().map(|r| r[1..].to_vec()).collect(),
            rest,
            cons_of,
        );
    }
    let Some(cons) = cons_of.get(first.as_str()) else {
        // no values of this sort
        return true;
    };
    cons.iter().all(|&(c, d)| {
        let k = d.args.len();
        let spec: Vec<Vec<Term>> = rows
            .iter()
            .filter_map(|r| {
                let head: Vec<Term> = match &r[0] {
                    Term::Var(_) => vec![Term::var(0); k],
                    Term::App(g, a) if *g == c => a.to_vec(),
                    Term::App(..) => return None,
                };
                Some(head.into_iter().chain(r[1..].iter().cloned()).collect())
            })
            .collect();
        let sorts: Vec<String> = d.args.iter().chain(rest).cloned().collect();
        covers(spec, &sorts, cons_of)
    })
}

/// Side conditions for polytime computability of the functions computed by
/// `trs`, on top of a polynomial whole-set certificate over weak innermost
/// dependency pairs.
pub fn check_polytime(
    trs: &Trs,
    info: &SortedSignatureInfo,
    cert: &Certificate,
) -> PolytimeOutcome {
    let mut reasons = Vec::new();
    if !cert.verdict.is_polynomial() || cert.mode != AnalysisMode::Dp || cert.tpwidp {
        reasons.push(PolytimeReason::CertificateNotApplicable(
            "requires a polynomial certificate over all weak innermost dependency pairs".into(),
        ));
    }
    if !trs.is_constructor_system() {
        reasons.push(PolytimeReason::NotConstructor);
    }
    if let Some(why) = orthogonality(trs) {
        reasons.push(PolytimeReason::NotOrthogonal(why));
    }
    let mut declared = true;
    for f in trs.symbols() {
        match info.decls.get(&f) {
            None => {
                declared = false;
                reasons.push(PolytimeReason::MissingSortDecl(trs.sig.name(f).to_owned()));
            }
            Some(d) => {
                for s in d.args.iter().chain([&d.result]) {
                    if !info.sorts.contains(s) {
                        declared = false;
                        reasons.push(PolytimeReason::UnknownSort(s.clone()));
                    }
                }
            }
        }
    }
    if declared {
        for (i, r) in trs.rules.iter().enumerate() {
            if !rule_is_sorted(&r.lhs, &r.rhs, &info.decls) {
                reasons.push(PolytimeReason::NotSorted(i));
            }
        }
        if let Err(bad) = info.ranks(&trs.constructors) {
            reasons.extend(bad.into_iter().map(PolytimeReason::NotSimple));
        }
        let mut cons_of: BTreeMap<&str, Vec<(Sym, &SortDecl)>> = BTreeMap::new();
        for &c in &trs.constructors {
            let d = &info.decls[&c];
            cons_of.entry(d.result.as_str()).or_default().push((c, d));
        }
        for &f in &trs.defined {
            let rows: Vec<Vec<Term>> = trs
                .rules
                .iter()
                .filter(|r| r.root() == f)
                .map(|r| r.lhs.args().to_vec())
                .collect();
            if !covers(rows, &info.decls[&f].args, &cons_of) {
                reasons.push(PolytimeReason::NotCompletelyDefined(
                    trs.sig.name(f).to_owned(),
                ));
            }
        }
    }
    if reasons.is_empty() {
        PolytimeOutcome::Claim
    } else {
        reasons.sort();
        reasons.dedup();
        PolytimeOutcome::NotApplicable(reasons)
    }
}
