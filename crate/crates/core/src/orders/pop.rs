use std::collections::HashMap;

use super::multiset::{multiset_cmp_matrix, perfect_matching, MulOrd};
use super::{OrderParams, Precedence};
use crate::trs::{Sym, Term};

type Memo = HashMap<(Term, Term), bool>;

/// Decision procedures for `⊐sq`, `>pop*` and `≈s` on (already filtered)
/// terms, memoised on term pairs.
pub struct Pop<'a> {
    params: &'a OrderParams,
    sq: Memo,
    pop: Memo,
    eqs: Memo,
}

/// `s ≈ t`: equal up to equivalent roots and permuted arguments.
pub fn equiv(prec: &Precedence, s: &Term, t: &Term) -> bool {
    if s == t {
        return true;
    }
    match (s, t) {
        (Term::App(f, ss), Term::App(g, ts)) if ss.len() == ts.len() && prec.equiv(*f, *g) => {
            let adj: Vec<Vec<bool>> = ss
                .iter()
                .map(|a| ts.iter().map(|b| equiv(prec, a, b)).collect())
                .collect();
            has_perfect_matching(&adj)
        }
        _ => false,
    }
}

fn has_perfect_matching(adj: &[Vec<bool>]) -> bool {
    perfect_matching(adj, adj.len(), adj.first().map_or(0, Vec::len))
}

impl<'a> Pop<'a> {
    pub fn new(params: &'a OrderParams) -> Self {
        Pop {
            params,
            sq: HashMap::new(),
            pop: HashMap::new(),
            eqs: HashMap::new(),
        }
    }

    pub fn params(&self) -> &OrderParams {
        self.params
    }

    /// `s ≈s t`: as `≈`, but the permutation maps safe to safe and normal to
    /// normal positions.
    pub fn eqs(&mut self, s: &Term, t: &Term) -> bool {
        if s == t {
            return true;
        }
        let (Term::App(f, ss), Term::App(g, ts)) = (s, t) else {
            return false;
        };
        if ss.len() != ts.len() || !self.params.prec.equiv(*f, *g) {
            return false;
        }
        let key = (s.clone(), t.clone());
        if let Some(&b) = self.eqs.get(&key) {
            return b;
        }
        let p = self.params;
        let mut adj = vec![vec![false; ts.len()]; ss.len()];
        for (i, a) in ss.iter().enumerate() {
            for (j, b) in ts.iter().enumerate() {
                adj[i][j] = p.is_safe(*f, i) == p.is_safe(*g, j) && self.eqs(a, b);
            }
        }
        let b = has_perfect_matching(&adj);
        self.eqs.insert(key, b);
        b
    }

    pub fn geq_sq(&mut self, s: &Term, t: &Term) -> bool {
        self.eqs(s, t) || self.gsq(s, t)
    }

    /// `s ⊐sq t`.
    pub fn gsq(&mut self, s: &Term, t: &Term) -> bool {
        let Term::App(f, ss) = s else {
            return false;
        };
        let key = (s.clone(), t.clone());
        if let Some(&b) = self.sq.get(&key) {
            return b;
        }
        let p = self.params;
        let guarded = p.is_guarded(*f);
        let mut b = ss
            .iter()
            .enumerate()
            .any(|(i, si)| (!guarded || !p.is_safe(*f, i)) && self.geq_sq(si, t));
        if !b {
            if let Term::App(g, ts) = t {
                b = guarded && p.prec.gt(*f, *g) && ts.iter().all(|tj| self.gsq(s, tj));
            }
        }
        self.sq.insert(key, b);
        b
    }

    /// `s ≥pop* t`.
    pub fn geq(&mut self, s: &Term, t: &Term) -> bool {
        self.eqs(s, t) || self.gpop(s, t)
    }

    /// `s >pop* t`.
    pub fn gpop(&mut self, s: &Term, t: &Term) -> bool {
        let Term::App(f, ss) = s else {
            return false;
        };
        let key = (s.clone(), t.clone());
        if let Some(&b) = self.pop.get(&key) {
            return b;
        }
        let b = ss.iter().any(|si| self.geq(si, t))
            || self.gsq(s, t)
            || match t {
                Term::App(g, ts) => {
                    let (f, g) = (*f, *g);
                    let p = self.params;
                    (p.is_guarded(f) && p.prec.gt(f, g) && self.recursion(s, g, ts))
                        || (p.prec.equiv(f, g) && self.multiset_clause(f, ss, g, ts))
                }
                Term::Var(_) => false,
            };
        self.pop.insert(key, b);
        b
    }

    /// Clause (2): one safe recursive slot `j0`, all other arguments either
    /// below in `⊐sq` or proper subterms placed safely.
    fn recursion(&mut self, s: &Term, g: Sym, ts: &[Term]) -> bool {
        let p = self.params;
        let side: Vec<bool> = ts
            .iter()
            .enumerate()
            .map(|(j, tj)| self.gsq(s, tj) || (p.is_safe(g, j) && s.has_proper_subterm(tj)))
            .collect();
        (0..ts.len()).any(|j0| {
            p.is_safe(g, j0) && (0..ts.len()).all(|j| j == j0 || side[j]) && self.gpop(s, &ts[j0])
        })
    }

    /// Clause (3): normal arguments decrease in the multiset extension, safe
    /// arguments do not increase.
    fn multiset_clause(&mut self, f: Sym, ss: &[Term], g: Sym, ts: &[Term]) -> bool {
        let p = self.params;
        let split = |h, xs: &[Term]| -> (Vec<Term>, Vec<Term>) {
            let (mut n, mut s) = (Vec::new(), Vec::new());
            for (i, x) in xs.iter().enumerate() {
                if p.is_safe(h, i) {
                    s.push(x.clone());
                } else {
                    n.push(x.clone());
                }
            }
            (n, s)
        };
        let (sn, ssafe) = split(f, ss);
        let (tn, tsafe) = split(g, ts);
        self.mul(&sn, &tn) == MulOrd::Strict && self.mul(&ssafe, &tsafe).is_geq()
    }

    pub fn mul(&mut self, left: &[Term], right: &[Term]) -> MulOrd {
        let mut gt = vec![vec![false; right.len()]; left.len()];
        let mut eq = vec![vec![false; right.len()]; left.len()];
        for (i, a) in left.iter().enumerate() {
            for (j, b) in right.iter().enumerate() {
                eq[i][j] = self.eqs(a, b);
                gt[i][j] = self.gpop(a, b);
            }
        }
        multiset_cmp_matrix(&gt, &eq, right.len())
    }
}
