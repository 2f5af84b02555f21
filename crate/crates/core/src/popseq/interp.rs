use std::collections::BTreeSet;

use super::Seq;
use crate::orders::{FilterError, OrderParams};
use crate::trs::rewrite::is_normal_form;
use crate::trs::{Rule, Sym, Term};

/// Predicative interpretations `S`, `N` and the extended `Q` under fixed
/// order parameters. Guarded symbols of the parameters play the role of
/// defined symbols; compound symbols are interpreted as sequences by `Q`.
pub struct Interpretation<'a> {
    pub params: &'a OrderParams,
    pub compounds: &'a BTreeSet<Sym>,
}

impl<'a> Interpretation<'a> {
    pub fn new(params: &'a OrderParams, compounds: &'a BTreeSet<Sym>) -> Self {
        Interpretation { params, compounds }
    }

    fn is_value(&self, u: &Term) -> bool {
        match u {
            Term::Var(_) => true,
            Term::App(f, args) => {
                !self.params.is_guarded(*f) && args.iter().all(|a| self.is_value(a))
            }
        }
    }

    /// `S` on an already filtered term.
    pub fn s_filtered(&self, u: &Term) -> Seq {
        if self.is_value(u) {
            return Seq::empty();
        }
        let Term::App(f, args) = u else {
            unreachable!("variables are values")
        };
        let mut normal = Vec::new();
        let mut tail = Vec::new();
        for (j, a) in args.iter().enumerate() {
            if self.params.is_safe(*f, j) {
                tail.push(self.s_filtered(a));
            } else {
                normal.push(self.n_filtered(a));
            }
        }
        let mut items = Vec::with_capacity(tail.len() + 1);
        items.push(Seq::func(*f, normal));
        items.extend(tail);
        Seq::list(items)
    }

    /// `N` on an already filtered term: `S(u)` followed by `‖u‖` copies of `•`.
    pub fn n_filtered(&self, u: &Term) -> Seq {
        let mut items = Vec::with_capacity(u.bnorm() + 1);
        items.push(self.s_filtered(u));
        items.extend(std::iter::repeat_n(Seq::Dot, u.bnorm()));
        Seq::list(items)
    }

    pub fn pred_s(&self, t: &Term) -> Result<Seq, FilterError> {
        Ok(self.s_filtered(&self.params.filtering.apply(t)?))
    }

    pub fn pred_n(&self, t: &Term) -> Result<Seq, FilterError> {
        Ok(self.n_filtered(&self.params.filtering.apply(t)?))
    }

    /// `Q(c(t1..tn)) = [Q(t1) .. Q(tn)]` for compound `c`, `[N(t)]` otherwise.
    pub fn pred_q(&self, t: &Term) -> Result<Seq, FilterError> {
        match t {
            Term::App(c, args) if self.compounds.contains(c) => Ok(Seq::list(
                args.iter()
                    .map(|a| self.pred_q(a))
                    .collect::<Result<_, _>>()?,
            )),
            _ => Ok(Seq::list(vec![self.pred_n(t)?])),
        }
    }
}

/// Normal form under `V(R)`: every maximal ground subterm that is a normal
/// form of `rules` and has its root in `roots` becomes `bottom`.
pub fn nf_v(rules: &[Rule], roots: &BTreeSet<Sym>, bottom: Sym, t: &Term) -> Term {
    match t {
        Term::Var(_) => t.clone(),
        Term::App(f, args) => {
            if roots.contains(f) && t.is_ground() && is_normal_form(rules, t) {
                Term::constant(bottom)
            } else {
                Term::App(
                    *f,
                    args.iter().map(|a| nf_v(rules, roots, bottom, a)).collect(),
                )
            }
        }
    }
}

/// Innermost `V(R)` redexes: positions of ground normal forms rooted in
/// `roots` none of whose proper subterms is such a term.
pub(crate) fn v_redexes(rules: &[Rule], roots: &BTreeSet<Sym>, t: &Term) -> Vec<Vec<usize>> {
    fn go(
        rules: &[Rule],
        roots: &BTreeSet<Sym>,
        t: &Term,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) -> bool {
        let Term::App(f, args) = t else { return false };
        let mut below = false;
        for (i, a) in args.iter().enumerate() {
            path.push(i);
            below |= go(rules, roots, a, path, out);
            path.pop();
        }
        if below {
            return true;
        }
        if roots.contains(f) && t.is_ground() && is_normal_form(rules, t) {
            out.push(path.clone());
            return true;
        }
        false
    }
    let mut out = Vec::new();
    go(rules, roots, t, &mut Vec::new(), &mut out);
    out
}
