//! Terms, signatures, parsing and rewriting.

pub mod dl;
pub mod enumerate;
pub mod parse;
pub mod rewrite;
pub mod signature;
pub mod term;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

pub use dl::{derivation_length, normal_forms, DlError, Strategy, DEFAULT_FUEL};
pub use enumerate::{runtime_complexity_samples, Overflow, RcError, RcSample, SampleConfig};
pub use parse::{parse_trs, ParseError};
pub use rewrite::{
    innermost_step, is_normal_form, match_term, q_restricted_step, redexes, relative_step, unify,
    Redex, RewriteError,
};
pub use signature::{Signature, SortDecl, SymbolInfo, SymbolKind};
pub use term::{Measures, Position, Subst, Sym, Term, Var};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub lhs: Term,
    pub rhs: Term,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RuleError {
    #[error("left-hand side is a variable")]
    VariableLhs,
    #[error("right-hand side variable {0:?} does not occur on the left")]
    ExtraVariable(Var),
}

impl Rule {
    pub fn new(lhs: Term, rhs: Term) -> Result<Rule, RuleError> {
        if lhs.is_var() {
            return Err(RuleError::VariableLhs);
        }
        let lv = lhs.vars();
        if let Some(v) = rhs.vars().into_iter().find(|v| !lv.contains(v)) {
            return Err(RuleError::ExtraVariable(v));
        }
        Ok(Rule { lhs, rhs })
    }

    pub fn root(&self) -> Sym {
        self.lhs.root().expect("rule lhs is an application")
    }

    /// No variable occurs more often on the right than on the left.
    pub fn is_non_duplicating(&self) -> bool {
        let l = self.lhs.var_occurrences();
        self.rhs
            .var_occurrences()
            .iter()
            .all(|(v, n)| l.get(v).copied().unwrap_or(0) >= *n)
    }

    pub fn is_left_linear(&self) -> bool {
        self.lhs.var_occurrences().values().all(|&n| n == 1)
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> String {
        format!("{} -> {}", sig.show(&self.lhs), sig.show(&self.rhs))
    }
}

/// A term rewrite system with its partitions. Symbol kinds in the signature
/// are kept in sync with `defined`.
#[derive(Clone, Debug)]
pub struct Trs {
    pub sig: Signature,
    pub rules: Vec<Rule>,
    /// Sorts listed in a `(SORTS ...)` block, in order.
    pub sorts: Vec<String>,
    pub defined: BTreeSet<Sym>,
    pub constructors: BTreeSet<Sym>,
    pub refined_defined: BTreeSet<Sym>,
    pub refined_constructors: BTreeSet<Sym>,
}

impl Trs {
    pub fn new(mut sig: Signature, rules: Vec<Rule>) -> Trs {
        let defined: BTreeSet<Sym> = rules.iter().map(Rule::root).collect();
        let all: Vec<Sym> = sig
            .symbols()
            .filter(|s| matches!(sig.kind(*s), SymbolKind::Constructor | SymbolKind::Defined))
            .collect();
        for &s in &all {
            let kind = if defined.contains(&s) {
                SymbolKind::Defined
            } else {
                SymbolKind::Constructor
            };
            sig.set_kind(s, kind);
        }
        let constructors: BTreeSet<Sym> = all
            .iter()
            .copied()
            .filter(|s| !defined.contains(s))
            .collect();
        let mut trs = Trs {
            sig,
            rules,
            sorts: Vec::new(),
            defined,
            constructors,
            refined_defined: BTreeSet::new(),
            refined_constructors: BTreeSet::new(),
        };
        let (gd, gc) = refined_partition(&trs);
        trs.refined_defined = gd;
        trs.refined_constructors = gc;
        trs
    }

    /// Every symbol of the underlying signature (defined or constructor).
    pub fn symbols(&self) -> impl Iterator<Item = Sym> + '_ {
        self.defined.iter().chain(self.constructors.iter()).copied()
    }

    pub fn is_defined(&self, f: Sym) -> bool {
        self.defined.contains(&f)
    }

    /// `t ∈ T(C, V)`
    pub fn is_value(&self, t: &Term) -> bool {
        match t {
            Term::Var(_) => true,
            Term::App(f, args) => {
                !self.defined.contains(f) && args.iter().all(|a| self.is_value(a))
            }
        }
    }

    /// `t ∈ T(GC, V)`
    pub fn is_refined_value(&self, t: &Term) -> bool {
        match t {
            Term::Var(_) => true,
            Term::App(f, args) => {
                !self.refined_defined.contains(f) && args.iter().all(|a| self.is_refined_value(a))
            }
        }
    }

    pub fn is_basic(&self, t: &Term) -> bool {
        match t {
            Term::Var(_) => false,
            Term::App(f, args) => self.defined.contains(f) && args.iter().all(|a| self.is_value(a)),
        }
    }

    pub fn is_normal_form(&self, t: &Term) -> bool {
        rewrite::is_normal_form(&self.rules, t)
    }

    pub fn is_constructor_system(&self) -> bool {
        self.rules.iter().all(|r| self.is_basic(&r.lhs))
    }

    pub fn rule_display(&self, i: usize) -> String {
        self.rules[i].display(&self.sig)
    }

    /// Renders the system in the input format; `parse_trs(render(t))`
    /// reproduces `t` up to symbol numbering.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut vars: BTreeSet<Var> = BTreeSet::new();
        for r in &self.rules {
            vars.extend(r.lhs.vars());
        }
        let names: Vec<String> = vars.iter().map(|v| self.sig.var_name(*v)).collect();
        let _ = writeln!(out, "(VAR {})", names.join(" "));
        if !self.sorts.is_empty() {
            let _ = writeln!(out, "(SORTS {})", self.sorts.join(" "));
        }
        let typed: Vec<Sym> = self
            .sig
            .symbols()
            .filter(|s| self.sig.sort(*s).is_some())
            .collect();
        if !typed.is_empty() {
            let _ = writeln!(out, "(TYPES");
            for s in typed {
                let d = self.sig.sort(s).unwrap();
                if d.args.is_empty() {
                    let _ = writeln!(out, "  {} : {}", self.sig.name(s), d.result);
                } else {
                    let _ = writeln!(
                        out,
                        "  {} : {} -> {}",
                        self.sig.name(s),
                        d.args.join(" "),
                        d.result
                    );
                }
            }
            let _ = writeln!(out, ")");
        }
        let _ = writeln!(out, "(RULES");
        for r in &self.rules {
            let _ = writeln!(out, "  {}", r.display(&self.sig));
        }
        let _ = writeln!(out, ")");
        out
    }
}

/// GC is the least set containing the constructors and every symbol below
/// the root of a left-hand side; GD is the rest.
pub fn refined_partition(trs: &Trs) -> (BTreeSet<Sym>, BTreeSet<Sym>) {
    let mut gc = trs.constructors.clone();
    for r in &trs.rules {
        for a in r.lhs.args() {
            gc.extend(a.symbols());
        }
    }
    let gd = trs.symbols().filter(|s| !gc.contains(s)).collect();
    (gd, gc)
}
