use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::cnf::{Cnf, Model};
use super::{FilterSpace, ObligationSet, SynthError};
use crate::orders::{ArgumentFiltering, Filter, OrderParams, Precedence, SafeMapping};
use crate::trs::{Sym, Term};

/// Variable 1 is fixed to true.
pub const TRUE: i32 = 1;
pub const FALSE: i32 = -1;

pub const DEFAULT_MAX_VARS: usize = 4_000_000;

/// Relations between filtered terms. `Eqt` is syntactic equality and
/// `Psub` the proper-subterm relation, both after filtering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Rel {
    Gsq,
    Gpop,
    Eqs,
    Eqt,
    Psub,
}

#[derive(Clone, Debug)]
pub struct FilterVars {
    pub col: i32,
    pub col_at: Vec<i32>,
    pub keep: Vec<i32>,
}

/// The CNF together with the variables that carry the order parameters.
#[derive(Clone, Debug)]
pub struct EncodingArtifact {
    pub cnf: Cnf,
    /// `rank[f][v-1]` holds `rank(f) ≥ v`.
    pub rank: BTreeMap<Sym, Vec<i32>>,
    /// Safe positions of guarded symbols.
    pub safe: BTreeMap<Sym, Vec<i32>>,
    pub filter: BTreeMap<Sym, FilterVars>,
    /// Number of derivation atoms.
    pub atoms: usize,
}

struct Enc<'a> {
    obls: &'a ObligationSet,
    cnf: Cnf,
    rank: BTreeMap<Sym, Vec<i32>>,
    safe: BTreeMap<Sym, Vec<i32>>,
    filter: BTreeMap<Sym, FilterVars>,
    gt: HashMap<(Sym, Sym), i32>,
    eq: HashMap<(Sym, Sym), i32>,
    atoms: HashMap<(Rel, Term, Term), i32>,
    work: Vec<(Rel, Term, Term, i32)>,
    max_vars: usize,
}

pub fn encode(obls: &ObligationSet) -> Result<EncodingArtifact, SynthError> {
    encode_with_cap(obls, DEFAULT_MAX_VARS)
}

pub fn encode_with_cap(
    obls: &ObligationSet,
    max_vars: usize,
) -> Result<EncodingArtifact, SynthError> {
    let mut e = Enc {
        obls,
        cnf: Cnf::new(),
        rank: BTreeMap::new(),
        safe: BTreeMap::new(),
        filter: BTreeMap::new(),
        gt: HashMap::new(),
        eq: HashMap::new(),
        atoms: HashMap::new(),
        work: Vec::new(),
        max_vars,
    };
    let t = e.cnf.fresh();
    e.cnf.add(vec![t]);
    e.parameters();
    for (l, r) in &obls.strict {
        let a = e.atom(Rel::Gpop, l, r);
        e.clause(&[a]);
    }
    for (l, r) in &obls.weak {
        let a = e.atom(Rel::Eqs, l, r);
        let b = e.atom(Rel::Gpop, l, r);
        e.clause(&[a, b]);
    }
    while let Some((rel, s, t, a)) = e.work.pop() {
        e.define(rel, &s, &t, a);
        if e.cnf.num_vars > e.max_vars {
            return Err(SynthError::Capacity(e.max_vars));
        }
    }
    Ok(EncodingArtifact {
        atoms: e.atoms.len(),
        cnf: e.cnf,
        rank: e.rank,
        safe: e.safe,
        filter: e.filter,
    })
}

impl Enc<'_> {
    fn fresh(&mut self) -> i32 {
        self.cnf.fresh()
    }

    /// Adds a clause after constant folding.
    fn clause(&mut self, lits: &[i32]) {
        let mut out: Vec<i32> = Vec::with_capacity(lits.len());
        for &l in lits {
            if l == TRUE || out.contains(&-l) {
                return;
            }
            if l != FALSE && !out.contains(&l) {
                out.push(l);
            }
        }
        self.cnf.add(out);
    }

    /// A literal implying every given disjunction. Folds constants unless
    /// `fresh` asks for a new variable in any non-false case.
    fn and_with(&mut self, parts: Vec<Vec<i32>>, fresh: bool) -> i32 {
        let mut kept = Vec::new();
        for p in parts {
            if p.contains(&TRUE) {
                continue;
            }
            let p: Vec<i32> = p.into_iter().filter(|&l| l != FALSE).collect();
            if p.is_empty() {
                return FALSE;
            }
            kept.push(p);
        }
        if !fresh {
            match kept.as_slice() {
                [] => return TRUE,
                [p] if p.len() == 1 => return p[0],
                _ => {}
            }
        }
        let x = self.fresh();
        for mut p in kept {
            p.insert(0, -x);
            self.clause(&p);
        }
        x
    }

    fn and(&mut self, parts: Vec<Vec<i32>>) -> i32 {
        self.and_with(parts, false)
    }

    fn guarded(&self, f: Sym) -> bool {
        self.obls.guard.contains(&f)
    }

    fn is_safe(&self, f: Sym, i: usize) -> i32 {
        self.safe.get(&f).map_or(TRUE, |v| v[i])
    }

    fn keep(&self, f: Sym, i: usize) -> i32 {
        self.filter.get(&f).map_or(TRUE, |v| v.keep[i])
    }

    fn col(&self, f: Sym) -> i32 {
        self.filter.get(&f).map_or(FALSE, |v| v.col)
    }

    fn collapsible(&self, t: &Term) -> bool {
        t.root().is_some_and(|f| self.col(f) != FALSE)
    }

    fn parameters(&mut self) {
        let syms: Vec<(Sym, usize)> = self.obls.arity.iter().map(|(&f, &n)| (f, n)).collect();
        let levels = syms.len().saturating_sub(1);
        for &(f, _) in &syms {
            let r: Vec<i32> = (0..levels).map(|_| self.fresh()).collect();
            for w in r.windows(2) {
                self.clause(&[-w[1], w[0]]);
            }
            self.rank.insert(f, r);
        }
        for &(f, n) in &syms {
            if self.guarded(f) && n > 0 {
                let s = (0..n).map(|_| self.fresh()).collect();
                self.safe.insert(f, s);
            }
        }
        for &(f, n) in &syms {
            if n == 0 {
                continue;
            }
            let fixed = self.obls.filters == FilterSpace::Identity
                || (self.obls.safe_filtering && self.obls.compounds.contains(&f));
            let fv = if fixed {
                FilterVars {
                    col: FALSE,
                    col_at: vec![FALSE; n],
                    keep: vec![TRUE; n],
                }
            } else {
                let col = self.fresh();
                let col_at: Vec<i32> = (0..n).map(|_| self.fresh()).collect();
                let keep: Vec<i32> = (0..n).map(|_| self.fresh()).collect();
                let mut at_least = vec![-col];
                at_least.extend(&col_at);
                self.clause(&at_least);
                for i in 0..n {
                    self.clause(&[-col_at[i], col]);
                    self.clause(&[-col, -keep[i]]);
                    for j in i + 1..n {
                        self.clause(&[-col_at[i], -col_at[j]]);
                        if self.obls.filters == FilterSpace::Restricted {
                            self.clause(&[col, keep[i], keep[j]]);
                        }
                    }
                }
                FilterVars { col, col_at, keep }
            };
            self.filter.insert(f, fv);
        }
        // admissibility: guarded symbols sit strictly above the others
        for &(g, _) in &syms {
            for &(f, _) in &syms {
                if self.guarded(g) && !self.guarded(f) {
                    let l = self.gt(g, f);
                    self.clause(&[l]);
                }
            }
        }
    }

    fn gt(&mut self, f: Sym, g: Sym) -> i32 {
        if f == g {
            return FALSE;
        }
        if let Some(&l) = self.gt.get(&(f, g)) {
            return l;
        }
        let (rf, rg) = (self.rank[&f].clone(), self.rank[&g].clone());
        let l = if rf.is_empty() {
            FALSE
        } else {
            let x = self.fresh();
            let mut some = vec![-x];
            for v in 0..rf.len() {
                let d = self.fresh();
                self.clause(&[-d, rf[v]]);
                self.clause(&[-d, -rg[v]]);
                self.clause(&[d, -rf[v], rg[v]]);
                self.clause(&[-d, x]);
                some.push(d);
            }
            self.clause(&some);
            x
        };
        self.gt.insert((f, g), l);
        l
    }

    fn eq(&mut self, f: Sym, g: Sym) -> i32 {
        if f == g {
            return TRUE;
        }
        let key = (f.min(g), f.max(g));
        if let Some(&l) = self.eq.get(&key) {
            return l;
        }
        let (a, b) = (self.gt(f, g), self.gt(g, f));
        let l = if a == FALSE && b == FALSE {
            TRUE
        } else {
            let x = self.fresh();
            self.clause(&[-x, -a]);
            self.clause(&[-x, -b]);
            self.clause(&[x, a, b]);
            x
        };
        self.eq.insert(key, l);
        l
    }

    fn atom(&mut self, rel: Rel, s: &Term, t: &Term) -> i32 {
        match rel {
            Rel::Gsq | Rel::Gpop | Rel::Psub if s.is_var() => return FALSE,
            Rel::Eqs | Rel::Eqt => {
                if s == t {
                    return TRUE;
                }
                let rigid = |u: &Term| !self.collapsible(u);
                if (s.is_var() && t.is_var())
                    || (s.is_var() && rigid(t))
                    || (t.is_var() && rigid(s))
                {
                    return FALSE;
                }
            }
            _ => {}
        }
        let key = (rel, s.clone(), t.clone());
        if let Some(&l) = self.atoms.get(&key) {
            return l;
        }
        let a = self.fresh();
        self.atoms.insert(key, a);
        self.work.push((rel, s.clone(), t.clone(), a));
        a
    }

    fn define(&mut self, rel: Rel, s: &Term, t: &Term, a: i32) {
        let mut prefix = vec![-a];
        if let Term::App(g, ts) = t {
            if self.col(*g) != FALSE {
                for j in 0..ts.len() {
                    let c = self.filter[g].col_at[j];
                    let sub = self.atom(rel, s, &ts[j]);
                    self.clause(&[-a, -c, sub]);
                }
                prefix.push(self.col(*g));
            }
        }
        if let Term::App(f, ss) = s {
            if self.col(*f) != FALSE {
                for i in 0..ss.len() {
                    let c = self.filter[f].col_at[i];
                    let sub = self.atom(rel, &ss[i], t);
                    let mut cl = prefix.clone();
                    cl.extend([-c, sub]);
                    self.clause(&cl);
                }
                prefix.push(self.col(*f));
            }
        }
        match rel {
            Rel::Gsq => self.def_gsq(s, t, prefix),
            Rel::Gpop => self.def_gpop(s, t, prefix),
            Rel::Eqs => self.def_eqs(s, t, prefix),
            Rel::Eqt => self.def_eqt(s, t, prefix),
            Rel::Psub => self.def_psub(s, t, prefix),
        }
    }

    fn def_gsq(&mut self, s: &Term, t: &Term, mut prefix: Vec<i32>) {
        let Term::App(f, ss) = s else { unreachable!() };
        let f = *f;
        let guarded = self.guarded(f);
        for i in 0..ss.len() {
            let k = self.keep(f, i);
            let normal = if guarded { -self.is_safe(f, i) } else { TRUE };
            let e = self.atom(Rel::Eqs, &ss[i], t);
            let g = self.atom(Rel::Gsq, &ss[i], t);
            let x = self.and(vec![vec![k], vec![normal], vec![e, g]]);
            prefix.push(x);
        }
        if let (Term::App(g, ts), true) = (t, guarded) {
            let mut parts = vec![vec![self.gt(f, *g)]];
            for j in 0..ts.len() {
                let sub = self.atom(Rel::Gsq, s, &ts[j]);
                parts.push(vec![-self.keep(*g, j), sub]);
            }
            let x = self.and(parts);
            prefix.push(x);
        }
        self.clause(&prefix);
    }

    fn def_gpop(&mut self, s: &Term, t: &Term, mut prefix: Vec<i32>) {
        let Term::App(f, ss) = s else { unreachable!() };
        let f = *f;
        for i in 0..ss.len() {
            let k = self.keep(f, i);
            let e = self.atom(Rel::Eqs, &ss[i], t);
            let g = self.atom(Rel::Gpop, &ss[i], t);
            let x = self.and(vec![vec![k], vec![e, g]]);
            prefix.push(x);
        }
        let sq = self.atom(Rel::Gsq, s, t);
        prefix.push(sq);
        if let Term::App(g, ts) = t {
            if self.guarded(f) {
                let x = self.recursion(f, s, *g, ts);
                prefix.push(x);
            }
            let x = self.multiset(f, ss, *g, ts);
            prefix.push(x);
        }
        self.clause(&prefix);
    }

    fn recursion(&mut self, f: Sym, s: &Term, g: Sym, ts: &[Term]) -> i32 {
        let gt = self.gt(f, g);
        if gt == FALSE {
            return FALSE;
        }
        let n = ts.len();
        let mut side = Vec::with_capacity(n);
        let mut below = Vec::with_capacity(n);
        for j in 0..n {
            let safe = self.is_safe(g, j);
            let p = self.atom(Rel::Psub, s, &ts[j]);
            side.push(self.and(vec![vec![safe], vec![p]]));
            below.push(self.atom(Rel::Gsq, s, &ts[j]));
        }
        let mut choices = Vec::with_capacity(n);
        for j0 in 0..n {
            let rec = self.atom(Rel::Gpop, s, &ts[j0]);
            let mut parts = vec![vec![self.keep(g, j0)], vec![self.is_safe(g, j0)], vec![rec]];
            for j in (0..n).filter(|&j| j != j0) {
                parts.push(vec![-self.keep(g, j), below[j], side[j]]);
            }
            choices.push(self.and(parts));
        }
        self.and(vec![vec![gt], choices])
    }

    fn multiset(&mut self, f: Sym, ss: &[Term], g: Sym, ts: &[Term]) -> i32 {
        let e = self.eq(f, g);
        if e == FALSE {
            return FALSE;
        }
        let member = |this: &Self, h: Sym, n: usize, safe: bool| -> Vec<Vec<i32>> {
            (0..n)
                .map(|i| {
                    let s = this.is_safe(h, i);
                    vec![this.keep(h, i), if safe { s } else { -s }]
                })
                .collect()
        };
        let (ln, rn) = (
            member(self, f, ss.len(), false),
            member(self, g, ts.len(), false),
        );
        let (ls, rs) = (
            member(self, f, ss.len(), true),
            member(self, g, ts.len(), true),
        );
        let strict = self.mul(ss, &ln, ts, &rn, true);
        if strict == FALSE {
            return FALSE;
        }
        let weak = self.mul(ss, &ls, ts, &rs, false);
        self.and(vec![vec![e], vec![strict], vec![weak]])
    }

    /// Multiset comparison between the elements of `left` and `right`
    /// present under the membership conjunctions; `>mul` when `strict`,
    /// `>mul ∪ ≈mul` otherwise.
    fn mul(
        &mut self,
        left: &[Term],
        lm: &[Vec<i32>],
        right: &[Term],
        rm: &[Vec<i32>],
        strict: bool,
    ) -> i32 {
        let present = |m: &[Vec<i32>]| -> Vec<usize> {
            (0..m.len()).filter(|&i| !m[i].contains(&FALSE)).collect()
        };
        let (li, ri) = (present(lm), present(rm));
        if strict && li.is_empty() {
            return FALSE;
        }
        if !strict && ri.is_empty() {
            return TRUE;
        }
        let unit = |m: &Vec<i32>| -> Vec<Vec<i32>> { m.iter().map(|&l| vec![l]).collect() };
        let x = self.fresh();
        let iseq: Vec<i32> = li.iter().map(|_| self.fresh()).collect();
        let mut eqv = vec![vec![FALSE; ri.len()]; li.len()];
        for (b, &j) in ri.iter().enumerate() {
            let mut cover = vec![-x];
            cover.extend(rm[j].iter().map(|&l| -l));
            for (a, &i) in li.iter().enumerate() {
                let gp = self.atom(Rel::Gpop, &left[i], &right[j]);
                let mut parts = unit(&lm[i]);
                parts.extend(unit(&rm[j]));
                parts.push(vec![gp]);
                parts.push(vec![-iseq[a]]);
                cover.push(self.and_with(parts, true));
                let es = self.atom(Rel::Eqs, &left[i], &right[j]);
                let mut parts = unit(&lm[i]);
                parts.extend(unit(&rm[j]));
                parts.push(vec![es]);
                parts.push(vec![iseq[a]]);
                eqv[a][b] = self.and_with(parts, true);
                cover.push(eqv[a][b]);
            }
            self.clause(&cover);
        }
        for a in 0..li.len() {
            for b in 0..ri.len() {
                for b2 in b + 1..ri.len() {
                    self.clause(&[-eqv[a][b], -eqv[a][b2]]);
                }
                for a2 in a + 1..li.len() {
                    self.clause(&[-eqv[a][b], -eqv[a2][b]]);
                }
            }
        }
        let mut out = vec![-x];
        for (a, &i) in li.iter().enumerate() {
            let mut parts = unit(&lm[i]);
            parts.push(vec![-iseq[a]]);
            out.push(self.and(parts));
        }
        if !strict {
            let all = self.fresh();
            for (a, &i) in li.iter().enumerate() {
                let mut cl = vec![-all];
                cl.extend(lm[i].iter().map(|&l| -l));
                cl.extend(&eqv[a]);
                self.clause(&cl);
            }
            out.push(all);
        }
        self.clause(&out);
        x
    }

    fn def_eqs(&mut self, s: &Term, t: &Term, prefix: Vec<i32>) {
        let (Term::App(f, ss), Term::App(g, ts)) = (s, t) else {
            // a variable against a different variable or an unfiltered symbol
            self.clause(&prefix);
            return;
        };
        let (f, g) = (*f, *g);
        let e = self.eq(f, g);
        let mut cl = prefix.clone();
        cl.push(e);
        self.clause(&cl);
        let mut m = vec![vec![FALSE; ts.len()]; ss.len()];
        for i in 0..ss.len() {
            for j in 0..ts.len() {
                let sub = self.atom(Rel::Eqs, &ss[i], &ts[j]);
                if sub == FALSE {
                    continue;
                }
                let x = self.fresh();
                let (kf, kg) = (self.keep(f, i), self.keep(g, j));
                let (sf, sg) = (self.is_safe(f, i), self.is_safe(g, j));
                self.clause(&[-x, kf]);
                self.clause(&[-x, kg]);
                self.clause(&[-x, sub]);
                self.clause(&[-x, -sf, sg]);
                self.clause(&[-x, sf, -sg]);
                m[i][j] = x;
            }
        }
        for i in 0..ss.len() {
            let mut cl = prefix.clone();
            cl.push(-self.keep(f, i));
            cl.extend(&m[i]);
            self.clause(&cl);
            for j in 0..ts.len() {
                for j2 in j + 1..ts.len() {
                    self.clause(&[-m[i][j], -m[i][j2]]);
                }
            }
        }
        for j in 0..ts.len() {
            let mut cl = prefix.clone();
            cl.push(-self.keep(g, j));
            cl.extend((0..ss.len()).map(|i| m[i][j]));
            self.clause(&cl);
            for i in 0..ss.len() {
                for i2 in i + 1..ss.len() {
                    self.clause(&[-m[i][j], -m[i2][j]]);
                }
            }
        }
    }

    fn def_eqt(&mut self, s: &Term, t: &Term, prefix: Vec<i32>) {
        match (s, t) {
            (Term::App(f, ss), Term::App(g, ts)) if f == g => {
                for i in 0..ss.len() {
                    let sub = self.atom(Rel::Eqt, &ss[i], &ts[i]);
                    let mut cl = prefix.clone();
                    cl.extend([-self.keep(*f, i), sub]);
                    self.clause(&cl);
                }
            }
            _ => self.clause(&prefix),
        }
    }

    fn def_psub(&mut self, s: &Term, t: &Term, mut prefix: Vec<i32>) {
        let Term::App(f, ss) = s else { unreachable!() };
        for i in 0..ss.len() {
            let k = self.keep(*f, i);
            let e = self.atom(Rel::Eqt, &ss[i], t);
            let p = self.atom(Rel::Psub, &ss[i], t);
            let x = self.and(vec![vec![k], vec![e, p]]);
            prefix.push(x);
        }
        self.clause(&prefix);
    }
}

impl EncodingArtifact {
    /// Unit literals fixing the parameter variables to `params`. Ranks are
    /// compressed first; ranks beyond the encoded range are rejected.
    pub fn fixing(&self, params: &OrderParams) -> Option<Vec<i32>> {
        let ranks = dense_ranks(self.rank.keys().map(|&f| (f, params.prec.rank(f))));
        let mut units = Vec::new();
        for (f, vars) in &self.rank {
            let r = ranks[f] as usize;
            if r > vars.len() {
                return None;
            }
            for (v, &x) in vars.iter().enumerate() {
                units.push(if v < r { x } else { -x });
            }
        }
        for (f, vars) in &self.safe {
            let set = params.safe.get(*f);
            for (i, &x) in vars.iter().enumerate() {
                units.push(if set.is_some_and(|s| s.contains(&i)) {
                    x
                } else {
                    -x
                });
            }
        }
        for (f, fv) in &self.filter {
            let n = fv.keep.len();
            let (col_at, keep): (Option<usize>, Vec<bool>) = match params.filtering.get(*f) {
                None => (None, vec![true; n]),
                Some(Filter::Collapse(i)) => (Some(*i), vec![false; n]),
                Some(Filter::Keep(v)) => (None, (0..n).map(|i| v.contains(&i)).collect()),
            };
            let mut set = |x: i32, b: bool| units.push(if b { x } else { -x });
            set(fv.col, col_at.is_some());
            for i in 0..n {
                set(fv.col_at[i], col_at == Some(i));
                set(fv.keep[i], keep[i]);
            }
        }
        Some(units.into_iter().filter(|&l| l != TRUE).collect())
    }
}

fn dense_ranks(ranks: impl Iterator<Item = (Sym, u32)>) -> BTreeMap<Sym, u32> {
    let ranks: Vec<(Sym, u32)> = ranks.collect();
    let levels: Vec<u32> = ranks
        .iter()
        .map(|r| r.1)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    ranks
        .into_iter()
        .map(|(f, r)| (f, levels.binary_search(&r).unwrap() as u32))
        .collect()
}

/// Reads order parameters off a model and re-verifies them against the
/// obligations; a mismatch is reported, never accepted.
pub fn decode(
    art: &EncodingArtifact,
    model: &Model,
    obls: &ObligationSet,
) -> Result<OrderParams, SynthError> {
    let bad = |m: String| SynthError::DecodeInconsistency(m);
    let mut raw = Vec::new();
    for (&f, vars) in &art.rank {
        let bits: Vec<bool> = vars.iter().map(|&x| model.value(x)).collect();
        if bits.windows(2).any(|w| w[1] && !w[0]) {
            return Err(bad(format!("non-monotone rank bits for {f:?}")));
        }
        raw.push((f, bits.iter().filter(|&&b| b).count() as u32));
    }
    let prec = Precedence {
        rank: dense_ranks(raw.into_iter()),
    };
    let mut safe = SafeMapping::default();
    for (&f, vars) in &art.safe {
        let set: BTreeSet<usize> = (0..vars.len()).filter(|&i| model.value(vars[i])).collect();
        if !set.is_empty() {
            safe.safe.insert(f, set);
        }
    }
    let mut filtering = ArgumentFiltering::identity();
    for (&f, fv) in &art.filter {
        let n = fv.keep.len();
        if model.value(fv.col) {
            let at: Vec<usize> = (0..n).filter(|&i| model.value(fv.col_at[i])).collect();
            let [i] = at.as_slice() else {
                return Err(bad(format!("collapse of {f:?} has {} targets", at.len())));
            };
            filtering.pi.insert(f, Filter::Collapse(*i));
        } else {
            let keep: Vec<usize> = (0..n).filter(|&i| model.value(fv.keep[i])).collect();
            if keep.len() < n {
                filtering.pi.insert(f, Filter::Keep(keep));
            }
        }
    }
    let params = OrderParams {
        prec,
        safe,
        filtering,
        guard: obls.guard.clone(),
    };
    obls.check(&params).map_err(bad)?;
    Ok(params)
}
