use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// Index of a function symbol in a [`Signature`](super::Signature).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym(pub u32);

impl Sym {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u32);

/// Argument positions are 0-based internally; rendered output is 1-based.
pub type Position = Vec<usize>;

pub type Subst = BTreeMap<Var, Term>;

/// A first-order term. Arguments are shared, so cloning is cheap and
/// structural equality/hash make terms usable as memo keys.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    App(Sym, Arc<[Term]>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Measures {
    pub size: usize,
    pub width: usize,
    pub bnorm: usize,
    pub depth: usize,
}

impl Term {
    pub fn var(id: u32) -> Term {
        Term::Var(Var(id))
    }

    pub fn app(f: Sym, args: Vec<Term>) -> Term {
        Term::App(f, args.into())
    }

    pub fn constant(f: Sym) -> Term {
        Term::App(f, Arc::from(Vec::new()))
    }

    pub fn root(&self) -> Option<Sym> {
        match self {
            Term::Var(_) => None,
            Term::App(f, _) => Some(*f),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(_, args) => args,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<Var> {
        match self {
            Term::Var(v) => Some(*v),
            Term::App(..) => None,
        }
    }

    pub fn size(&self) -> usize {
        1 + self.args().iter().map(Term::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.args().iter().map(Term::depth).max().unwrap_or(0)
    }

    pub fn width(&self) -> usize {
        let args = self.args();
        if args.is_empty() {
            1
        } else {
            args.iter()
                .map(Term::width)
                .max()
                .unwrap_or(0)
                .max(args.len())
        }
    }

    /// Buchholz norm: `1 + max(n, |t1|, .., |tn|)`, and 1 for variables.
    pub fn bnorm(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => {
                1 + args
                    .iter()
                    .map(Term::bnorm)
                    .max()
                    .unwrap_or(0)
                    .max(args.len())
            }
        }
    }

    pub fn measures(&self) -> Measures {
        Measures {
            size: self.size(),
            width: self.width(),
            bnorm: self.bnorm(),
            depth: self.depth(),
        }
    }

    /// Distinct variables in order of first occurrence.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.walk(&mut |t| {
            if let Term::Var(v) = t {
                if !out.contains(v) {
                    out.push(*v);
                }
            }
        });
        out
    }

    pub fn var_occurrences(&self) -> BTreeMap<Var, usize> {
        let mut out = BTreeMap::new();
        self.walk(&mut |t| {
            if let Term::Var(v) = t {
                *out.entry(*v).or_insert(0) += 1;
            }
        });
        out
    }

    pub fn symbol_occurrences(&self) -> BTreeMap<Sym, usize> {
        let mut out = BTreeMap::new();
        self.walk(&mut |t| {
            if let Term::App(f, _) = t {
                *out.entry(*f).or_insert(0) += 1;
            }
        });
        out
    }

    pub fn symbols(&self) -> BTreeSet<Sym> {
        self.symbol_occurrences().into_keys().collect()
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn max_var(&self) -> Option<u32> {
        match self {
            Term::Var(v) => Some(v.0),
            Term::App(_, args) => args.iter().filter_map(Term::max_var).max(),
        }
    }

    /// Pre-order traversal including the term itself.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        f(self);
        for a in self.args() {
            a.walk(f);
        }
    }

    pub fn subterms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        self.walk(&mut |t| out.push(t));
        out
    }

    /// `self ▷ t`
    pub fn has_proper_subterm(&self, t: &Term) -> bool {
        self.args()
            .iter()
            .any(|a| a == t || a.has_proper_subterm(t))
    }

    pub fn at(&self, pos: &[usize]) -> Option<&Term> {
        match pos.split_first() {
            None => Some(self),
            Some((i, rest)) => self.args().get(*i)?.at(rest),
        }
    }

    /// Replaces the subterm at `pos`. Panics on an invalid position.
    pub fn replace_at(&self, pos: &[usize], new: Term) -> Term {
        match pos.split_first() {
            None => new,
            Some((i, rest)) => match self {
                Term::App(f, args) => {
                    let mut v = args.to_vec();
                    v[*i] = v[*i].replace_at(rest, new);
                    Term::app(*f, v)
                }
                Term::Var(_) => panic!("position below a variable"),
            },
        }
    }

    pub fn positions(&self) -> Vec<Position> {
        fn go(t: &Term, p: &mut Position, out: &mut Vec<Position>) {
            out.push(p.clone());
            for (i, a) in t.args().iter().enumerate() {
                p.push(i);
                go(a, p, out);
                p.pop();
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn apply(&self, s: &Subst) -> Term {
        match self {
            Term::Var(v) => s.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, args) => Term::App(*f, args.iter().map(|a| a.apply(s)).collect()),
        }
    }

    pub fn map_vars(&self, f: &mut impl FnMut(Var) -> Term) -> Term {
        match self {
            Term::Var(v) => f(*v),
            Term::App(g, args) => Term::App(*g, args.iter().map(|a| a.map_vars(f)).collect()),
        }
    }

    pub fn map_symbols(&self, f: &mut impl FnMut(Sym) -> Sym) -> Term {
        match self {
            Term::Var(_) => self.clone(),
            Term::App(g, args) => {
                let g = f(*g);
                Term::App(g, args.iter().map(|a| a.map_symbols(f)).collect())
            }
        }
    }

    /// Shifts every variable id by `offset` (renaming apart).
    pub fn shift_vars(&self, offset: u32) -> Term {
        self.map_vars(&mut |v| Term::Var(Var(v.0 + offset)))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "x{}", v.0),
            Term::App(s, args) => {
                write!(f, "f{}", s.0)?;
                if !args.is_empty() {
                    f.debug_list().entries(args.iter()).finish()?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: Term) -> Term {
        Term::app(Sym(1), vec![t])
    }

    #[test]
    fn measures_of_small_terms() {
        let zero = Term::constant(Sym(0));
        let t = s(s(zero.clone()));
        assert_eq!(t.size(), 3);
        assert_eq!(t.depth(), 3);
        assert_eq!(t.width(), 1);
        assert_eq!(t.bnorm(), 3);
        assert_eq!(zero.bnorm(), 1);
        assert_eq!(Term::var(0).bnorm(), 1);
        let pair = Term::app(Sym(2), vec![zero.clone(), Term::var(0)]);
        assert_eq!(pair.width(), 2);
        assert_eq!(pair.bnorm(), 3);
    }

    #[test]
    fn replace_and_positions() {
        let t = Term::app(Sym(2), vec![Term::var(0), s(Term::var(1))]);
        assert_eq!(t.positions().len(), 4);
        assert_eq!(t.at(&[1, 0]), Some(&Term::var(1)));
        let u = t.replace_at(&[1, 0], Term::constant(Sym(0)));
        assert_eq!(u.at(&[1, 0]), Some(&Term::constant(Sym(0))));
        assert!(u.has_proper_subterm(&Term::constant(Sym(0))));
        assert!(!u.has_proper_subterm(&u));
    }
}
