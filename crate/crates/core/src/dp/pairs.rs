use std::collections::BTreeSet;

use crate::trs::{Rule, Signature, SortDecl, Sym, SymbolKind, Term, Trs};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyPair {
    pub lhs: Term,
    pub rhs: Term,
    /// Index of the generating rule.
    pub origin: usize,
    pub compound: Option<Sym>,
    /// Context represented by the compound symbol (type-preserving pairs
    /// only); holes are the auxiliary `_hole` constant.
    pub context: Option<Term>,
}

impl DependencyPair {
    pub fn as_rule(&self) -> Rule {
        Rule {
            lhs: self.lhs.clone(),
            rhs: self.rhs.clone(),
        }
    }

    /// The marked terms on the right: the compound's arguments, or the
    /// right-hand side itself.
    pub fn components(&self) -> Vec<&Term> {
        match self.compound {
            Some(_) => self.rhs.args().iter().collect(),
            None => vec![&self.rhs],
        }
    }
}

/// Pairs of a system together with the extended signature that holds the
/// marked and compound symbols.
#[derive(Clone, Debug)]
pub struct DpProblem {
    pub sig: Signature,
    pub pairs: Vec<DependencyPair>,
    pub type_preserving: bool,
}

impl DpProblem {
    pub fn rules(&self) -> Vec<Rule> {
        self.pairs.iter().map(DependencyPair::as_rule).collect()
    }

    pub fn compounds(&self) -> BTreeSet<Sym> {
        self.pairs.iter().filter_map(|p| p.compound).collect()
    }

    pub fn marked_symbols(&self) -> BTreeSet<Sym> {
        self.sig
            .symbols()
            .filter(|&s| self.sig.is_marked(s))
            .collect()
    }

    pub fn pair_display(&self, i: usize) -> String {
        let p = &self.pairs[i];
        format!("{} -> {}", self.sig.show(&p.lhs), self.sig.show(&p.rhs))
    }
}

/// Splits `t` as `C[u1..un]` where the `ui` are the maximal subterms rooted
/// in `split`, collected left to right. Returns the context with holes and
/// the extracted subterms.
pub fn decompose(t: &Term, split: &BTreeSet<Sym>, hole: Sym) -> (Term, Vec<Term>) {
    fn go(t: &Term, split: &BTreeSet<Sym>, hole: Sym, out: &mut Vec<Term>) -> Term {
        match t {
            Term::App(f, _) if split.contains(f) => {
                out.push(t.clone());
                Term::constant(hole)
            }
            Term::App(f, args) => {
                Term::App(*f, args.iter().map(|a| go(a, split, hole, out)).collect())
            }
            Term::Var(_) => t.clone(),
        }
    }
    let mut out = Vec::new();
    let c = go(t, split, hole, &mut out);
    (c, out)
}

fn build(trs: &Trs, type_preserving: bool) -> DpProblem {
    let mut sig = trs.sig.clone();
    let hole = sig.hole();
    let mut pairs = Vec::with_capacity(trs.rules.len());
    let mut next_compound = 1;
    for (i, r) in trs.rules.iter().enumerate() {
        let (ctx, us) = decompose(&r.rhs, &trs.refined_defined, hole);
        let lhs = sig.mark_term(&r.lhs);
        let marked: Vec<Term> = us.iter().map(|u| sig.mark_term(u)).collect();
        let (rhs, compound, context) = if !type_preserving && marked.len() == 1 {
            (marked[0].clone(), None, None)
        } else {
            let index = if type_preserving {
                i + 1
            } else {
                next_compound
            };
            next_compound += 1;
            let c = sig.add_fresh(&format!("c_{index}"), marked.len(), SymbolKind::Compound);
            let arg_sorts: Option<Vec<String>> = us
                .iter()
                .map(|u| {
                    u.root()
                        .and_then(|f| trs.sig.sort(f))
                        .map(|d| d.result.clone())
                })
                .collect();
            let result = trs.sig.sort(r.root()).map(|d| d.result.clone());
            if let (Some(args), Some(result)) = (arg_sorts, result) {
                sig.set_sort(c, Some(SortDecl { args, result }));
            }
            let context = type_preserving.then_some(ctx);
            (Term::app(c, marked), Some(c), context)
        };
        pairs.push(DependencyPair {
            lhs,
            rhs,
            origin: i,
            compound,
            context,
        });
    }
    DpProblem {
        sig,
        pairs,
        type_preserving,
    }
}

/// Weak innermost dependency pairs: `l# -> COM(u1#..un#)`, with a compound
/// symbol unless `n = 1`.
pub fn widp(trs: &Trs) -> DpProblem {
    build(trs, false)
}

/// Type-preserving variant: every pair gets its own compound `c_i`
/// (`i` the rule index) remembering the context it replaces.
pub fn tpwidp(trs: &Trs) -> DpProblem {
    build(trs, true)
}

/// No variable occurs more often on a right-hand side than on the left.
pub fn is_non_duplicating(pairs: &[DependencyPair]) -> bool {
    pairs.iter().all(|p| p.as_rule().is_non_duplicating())
}
