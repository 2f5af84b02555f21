use std::collections::HashMap;

use super::Seq;
use crate::orders::Precedence;
use crate::orders::{multiset_cmp_matrix, MulOrd};

type Memo = HashMap<(Seq, Seq, usize), bool>;

/// The approximations `⊐ₖˡ` and `>popₖˡ` for a fixed `k`, memoised per
/// instance. Level 0 is the empty relation.
pub struct SeqOrder<'a> {
    prec: &'a Precedence,
    k: usize,
    gpp: Memo,
    pop: Memo,
    eq: HashMap<(Seq, Seq), bool>,
}

/// `•`, variables and the empty sequence are below everything.
fn is_minimal(s: &Seq) -> bool {
    match s {
        Seq::Dot | Seq::Var(_) => true,
        Seq::List(a) => a.is_empty(),
        Seq::Fn(..) => false,
    }
}

fn cover(gt: &[Vec<bool>], eq: &[Vec<bool>], right_len: usize) -> bool {
    multiset_cmp_matrix(gt, eq, right_len) == MulOrd::Strict
}

impl<'a> SeqOrder<'a> {
    pub fn new(prec: &'a Precedence, k: usize) -> Self {
        SeqOrder {
            prec,
            k,
            gpp: HashMap::new(),
            pop: HashMap::new(),
            eq: HashMap::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Strict precedence between the heads of two non-list sequences; `•`
    /// is below every normalised symbol.
    fn head_gt(&self, s: &Seq, t: &Seq) -> bool {
        match (s, t) {
            (Seq::Fn(f, _), Seq::Fn(g, _)) => self.prec.gt(*f, *g),
            (Seq::Fn(..), Seq::Dot) => true,
            _ => false,
        }
    }

    /// `≈` on sequences; lists are compared up to permutation.
    pub fn equiv(&mut self, s: &Seq, t: &Seq) -> bool {
        if s == t {
            return true;
        }
        let (ss, ts) = match (s, t) {
            (Seq::Fn(f, ss), Seq::Fn(g, ts)) if self.prec.equiv(*f, *g) => (ss, ts),
            (Seq::List(ss), Seq::List(ts)) => (ss, ts),
            _ => return false,
        };
        if ss.len() != ts.len() {
            return false;
        }
        let key = (s.clone(), t.clone());
        if let Some(&b) = self.eq.get(&key) {
            return b;
        }
        let n = ss.len();
        let mut adj = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                adj[i][j] = self.equiv(&ss[i], &ts[j]);
            }
        }
        let b = multiset_cmp_matrix(&vec![vec![false; n]; n], &adj, n) == MulOrd::Equiv;
        self.eq.insert(key, b);
        b
    }

    fn width_ok(&self, s: &Seq, m: usize) -> bool {
        m < self.k + s.width()
    }

    /// `s ⊐ₖˡ t`.
    pub fn gpp(&mut self, s: &Seq, t: &Seq, l: usize) -> bool {
        if l == 0 || is_minimal(s) {
            return false;
        }
        let key = (s.clone(), t.clone(), l);
        if let Some(&b) = self.gpp.get(&key) {
            return b;
        }
        let ss = s.args();
        let mut b = ss.iter().any(|si| self.equiv(si, t) || self.gpp(si, t, l));
        if !b {
            if let Seq::Fn(..) = s {
                let ts = t.args();
                let head = matches!(t, Seq::List(_)) || self.head_gt(s, t);
                b = head
                    && self.width_ok(s, ts.len())
                    && ts.iter().all(|tj| self.gpp(s, tj, l - 1));
            }
        }
        if !b {
            if let (Seq::List(ss), Seq::List(ts)) = (s, t) {
                b = self.width_ok(s, ts.len()) && self.list_cover(ss, ts, l, false);
            }
        }
        self.gpp.insert(key, b);
        b
    }

    /// `s >popₖˡ t`.
    pub fn gpop(&mut self, s: &Seq, t: &Seq, l: usize) -> bool {
        if l == 0 || is_minimal(s) {
            return false;
        }
        let key = (s.clone(), t.clone(), l);
        if let Some(&b) = self.pop.get(&key) {
            return b;
        }
        let ss = s.args();
        let b = self.gpp(s, t, l)
            || ss.iter().any(|si| self.equiv(si, t) || self.gpop(si, t, l))
            || match (s, t) {
                (Seq::Fn(..), Seq::List(ts)) => {
                    self.width_ok(s, ts.len()) && {
                        let side: Vec<bool> = ts.iter().map(|tj| self.gpp(s, tj, l - 1)).collect();
                        (0..ts.len()).any(|j0| {
                            (0..ts.len()).all(|j| j == j0 || side[j])
                                && self.gpop(s, &ts[j0], l - 1)
                        })
                    }
                }
                (Seq::Fn(f, ss), Seq::Fn(g, ts)) if self.prec.equiv(*f, *g) => {
                    self.gpop(&Seq::List(ss.clone()), &Seq::List(ts.clone()), l)
                }
                (Seq::List(ss), Seq::List(ts)) => {
                    self.width_ok(s, ts.len()) && self.list_cover(ss, ts, l, true)
                }
                _ => false,
            };
        self.pop.insert(key, b);
        b
    }

    pub fn geq(&mut self, s: &Seq, t: &Seq, l: usize) -> bool {
        self.equiv(s, t) || self.gpop(s, t, l)
    }

    /// Cover clause: `t`'s elements split into groups `N_i`, each either a
    /// single element equivalent to `s_i` or entirely below `s_i`, with at
    /// least one group of the second kind.
    fn list_cover(&mut self, ss: &[Seq], ts: &[Seq], l: usize, pop: bool) -> bool {
        let mut gt = vec![vec![false; ts.len()]; ss.len()];
        let mut eq = vec![vec![false; ts.len()]; ss.len()];
        for (i, a) in ss.iter().enumerate() {
            for (j, b) in ts.iter().enumerate() {
                eq[i][j] = self.equiv(a, b);
                gt[i][j] = if pop {
                    self.gpop(a, b, l)
                } else {
                    self.gpp(a, b, l)
                };
            }
        }
        cover(&gt, &eq, ts.len())
    }
}

pub fn gpp_seq(s: &Seq, t: &Seq, k: usize, l: usize, prec: &Precedence) -> bool {
    SeqOrder::new(prec, k).gpp(s, t, l)
}

pub fn gpop_seq(s: &Seq, t: &Seq, k: usize, l: usize, prec: &Precedence) -> bool {
    SeqOrder::new(prec, k).gpop(s, t, l)
}
