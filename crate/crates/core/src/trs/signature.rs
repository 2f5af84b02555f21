use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::term::{Sym, Term, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    Constructor,
    Defined,
    /// `f#`, carrying the unmarked original.
    Marked(Sym),
    /// Fresh constructor introduced by dependency-pair construction.
    Compound,
    /// Reserved constants such as the bottom symbol or context holes.
    Auxiliary,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortDecl {
    pub args: Vec<String>,
    pub result: String,
}

#[derive(Clone, Debug)]
pub struct SymbolInfo {
    pub name: String,
    pub arity: usize,
    pub kind: SymbolKind,
    pub sort: Option<SortDecl>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SignatureError {
    #[error("symbol `{name}` used with arity {found}, previously declared with arity {expected}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
}

pub const BOTTOM: &str = "_bot";
pub const HOLE: &str = "_hole";

/// Symbol table plus variable names. Shared by a TRS and everything derived
/// from it; derived problems clone and extend it.
#[derive(Clone, Debug, Default)]
pub struct Signature {
    symbols: Vec<SymbolInfo>,
    by_name: HashMap<String, Sym>,
    marks: HashMap<Sym, Sym>,
    var_names: Vec<String>,
    var_by_name: HashMap<String, Var>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Sym> + '_ {
        (0..self.symbols.len() as u32).map(Sym)
    }

    /// Returns the existing symbol of that name, or adds it.
    pub fn intern(
        &mut self,
        name: &str,
        arity: usize,
        kind: SymbolKind,
    ) -> Result<Sym, SignatureError> {
        if let Some(&s) = self.by_name.get(name) {
            let expected = self.symbols[s.index()].arity;
            if expected != arity {
                return Err(SignatureError::ArityMismatch {
                    name: name.to_string(),
                    expected,
                    found: arity,
                });
            }
            return Ok(s);
        }
        Ok(self.push(name.to_string(), arity, kind))
    }

    fn push(&mut self, name: String, arity: usize, kind: SymbolKind) -> Sym {
        let s = Sym(self.symbols.len() as u32);
        self.by_name.insert(name.clone(), s);
        self.symbols.push(SymbolInfo {
            name,
            arity,
            kind,
            sort: None,
        });
        s
    }

    /// Adds a symbol whose name is `base`, or `base'`, `base''`, ... if taken.
    pub fn add_fresh(&mut self, base: &str, arity: usize, kind: SymbolKind) -> Sym {
        let mut name = base.to_string();
        while self.by_name.contains_key(&name) {
            name.push('\'');
        }
        self.push(name, arity, kind)
    }

    pub fn lookup(&self, name: &str) -> Option<Sym> {
        self.by_name.get(name).copied()
    }

    pub fn info(&self, s: Sym) -> &SymbolInfo {
        &self.symbols[s.index()]
    }

    pub fn name(&self, s: Sym) -> &str {
        &self.symbols[s.index()].name
    }

    pub fn arity(&self, s: Sym) -> usize {
        self.symbols[s.index()].arity
    }

    pub fn kind(&self, s: Sym) -> &SymbolKind {
        &self.symbols[s.index()].kind
    }

    pub fn set_kind(&mut self, s: Sym, kind: SymbolKind) {
        self.symbols[s.index()].kind = kind;
    }

    pub fn sort(&self, s: Sym) -> Option<&SortDecl> {
        self.symbols[s.index()].sort.as_ref()
    }

    pub fn set_sort(&mut self, s: Sym, sort: Option<SortDecl>) {
        self.symbols[s.index()].sort = sort;
    }

    pub fn is_compound(&self, s: Sym) -> bool {
        matches!(self.kind(s), SymbolKind::Compound)
    }

    pub fn is_marked(&self, s: Sym) -> bool {
        matches!(self.kind(s), SymbolKind::Marked(_))
    }

    /// The marked version `f#` of `f`, created on first request.
    pub fn mark(&mut self, f: Sym) -> Sym {
        if let Some(&m) = self.marks.get(&f) {
            return m;
        }
        let base = format!("{}#", self.name(f));
        let arity = self.arity(f);
        let m = self.add_fresh(&base, arity, SymbolKind::Marked(f));
        let sort = self.sort(f).cloned();
        self.set_sort(m, sort);
        self.marks.insert(f, m);
        m
    }

    pub fn marked(&self, f: Sym) -> Option<Sym> {
        self.marks.get(&f).copied()
    }

    pub fn unmark(&self, s: Sym) -> Sym {
        match self.kind(s) {
            SymbolKind::Marked(f) => *f,
            _ => s,
        }
    }

    /// Marks the root of `t`; `t` must be an application.
    pub fn mark_term(&mut self, t: &Term) -> Term {
        match t {
            Term::App(f, args) => {
                let m = self.mark(*f);
                Term::App(m, args.clone())
            }
            Term::Var(_) => t.clone(),
        }
    }

    pub fn bottom(&mut self) -> Sym {
        match self.lookup(BOTTOM) {
            Some(s) => s,
            None => self.push(BOTTOM.to_string(), 0, SymbolKind::Auxiliary),
        }
    }

    pub fn hole(&mut self) -> Sym {
        match self.lookup(HOLE) {
            Some(s) => s,
            None => self.push(HOLE.to_string(), 0, SymbolKind::Auxiliary),
        }
    }

    pub fn intern_var(&mut self, name: &str) -> Var {
        if let Some(&v) = self.var_by_name.get(name) {
            return v;
        }
        let v = Var(self.var_names.len() as u32);
        self.var_names.push(name.to_string());
        self.var_by_name.insert(name.to_string(), v);
        v
    }

    pub fn lookup_var(&self, name: &str) -> Option<Var> {
        self.var_by_name.get(name).copied()
    }

    pub fn var_name(&self, v: Var) -> String {
        match self.var_names.get(v.0 as usize) {
            Some(n) => n.clone(),
            None => format!("_x{}", v.0),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.var_names.len()
    }

    pub fn show<'a>(&'a self, t: &'a Term) -> TermDisplay<'a> {
        TermDisplay { sig: self, term: t }
    }

    /// Parses a term in prefix notation against this signature. Unknown
    /// identifiers are variables. Intended for tests and certificates.
    pub fn term(&mut self, text: &str) -> Result<Term, super::parse::ParseError> {
        super::parse::parse_term(self, text)
    }
}

pub struct TermDisplay<'a> {
    sig: &'a Signature,
    term: &'a Term,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Var(v) => write!(f, "{}", self.sig.var_name(*v)),
            Term::App(s, args) => {
                write!(f, "{}", self.sig.name(*s))?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{}", self.sig.show(a))?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}
