use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use thiserror::Error;

use super::empirical::EmpiricalReport;
use crate::orders::{ArgumentFiltering, Filter, OrderParams, Precedence, SafeMapping};
use crate::sli::SliWeights;
use crate::trs::{Signature, Sym};

pub const FORMAT_HEADER: &str = "popcert certificate v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Polynomial,
    /// Polynomial, and the computed functions are polytime computable.
    PolytimeComputable,
    Maybe,
}

impl Verdict {
    pub fn is_polynomial(self) -> bool {
        self != Verdict::Maybe
    }

    pub fn exit_code(self) -> i32 {
        if self.is_polynomial() {
            0
        } else {
            1
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Polynomial => "polynomial-innermost-runtime",
            Verdict::PolytimeComputable => "polytime-computable",
            Verdict::Maybe => "maybe",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AnalysisMode {
    /// Orient the rules themselves.
    Direct,
    /// All dependency pairs at once.
    Dp,
    /// One obligation set per path of the congruence graph.
    Dg,
}

impl fmt::Display for AnalysisMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AnalysisMode::Direct => "direct",
            AnalysisMode::Dp => "dp",
            AnalysisMode::Dg => "dg",
        })
    }
}

impl std::str::FromStr for AnalysisMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "direct" => Ok(AnalysisMode::Direct),
            "dp" => Ok(AnalysisMode::Dp),
            "dg" => Ok(AnalysisMode::Dg),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

/// Order parameters keyed by symbol name, so that a certificate can be read
/// without the signature it was produced with.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NamedParams {
    pub guard: BTreeSet<String>,
    pub rank: BTreeMap<String, u32>,
    /// 0-based positions.
    pub safe: BTreeMap<String, BTreeSet<usize>>,
    pub filter: BTreeMap<String, Filter>,
}

impl NamedParams {
    pub fn from_params(p: &OrderParams, sig: &Signature) -> Self {
        let name = |f: &Sym| sig.name(*f).to_owned();
        NamedParams {
            guard: p.guard.iter().map(name).collect(),
            rank: p.prec.rank.iter().map(|(f, r)| (name(f), *r)).collect(),
            safe: p
                .safe
                .safe
                .iter()
                .map(|(f, s)| (name(f), s.clone()))
                .collect(),
            filter: p
                .filtering
                .pi
                .iter()
                .map(|(f, x)| (name(f), x.clone()))
                .collect(),
        }
    }

    pub fn to_params(&self, sig: &Signature) -> Result<OrderParams, String> {
        let sym = |n: &String| sig.lookup(n).ok_or_else(|| format!("unknown symbol `{n}`"));
        Ok(OrderParams {
            guard: self.guard.iter().map(sym).collect::<Result<_, _>>()?,
            prec: Precedence {
                rank: self
                    .rank
                    .iter()
                    .map(|(n, r)| Ok((sym(n)?, *r)))
                    .collect::<Result<_, String>>()?,
            },
            safe: SafeMapping {
                safe: self
                    .safe
                    .iter()
                    .map(|(n, s)| Ok((sym(n)?, s.clone())))
                    .collect::<Result<_, String>>()?,
            },
            filtering: ArgumentFiltering {
                pi: self
                    .filter
                    .iter()
                    .map(|(n, x)| Ok((sym(n)?, x.clone())))
                    .collect::<Result<_, String>>()?,
            },
        })
    }
}

/// SLI weights keyed by symbol name, with the arity of each symbol.
pub type NamedSli = BTreeMap<String, (usize, u64)>;

pub fn named_sli(w: &SliWeights, sig: &Signature) -> NamedSli {
    w.weight
        .iter()
        .map(|(f, c)| (sig.name(*f).to_owned(), (sig.arity(*f), *c)))
        .collect()
}

pub fn resolve_sli(w: &NamedSli, sig: &Signature) -> Result<SliWeights, String> {
    let mut out = SliWeights::default();
    for (n, &(arity, c)) in w {
        let f = sig
            .lookup(n)
            .ok_or_else(|| format!("unknown symbol `{n}`"))?;
        if sig.arity(f) != arity {
            return Err(format!("`{n}` has arity {}, not {arity}", sig.arity(f)));
        }
        out.weight.insert(f, c);
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PathRecord {
    /// Classes of pair indices (0-based); empty in direct mode.
    pub classes: Vec<Vec<usize>>,
    /// Usable rule indices (0-based).
    pub usable: Vec<usize>,
    /// The discharged obligations, rendered.
    pub strict: Vec<String>,
    pub weak: Vec<String>,
    pub sli: Option<NamedSli>,
    pub params: NamedParams,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub tool: String,
    pub verdict: Verdict,
    pub mode: AnalysisMode,
    pub tpwidp: bool,
    pub paths: Vec<PathRecord>,
    pub diagnostics: Vec<String>,
    pub empirical: Option<EmpiricalReport>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("malformed certificate, line {line}: {message}")]
pub struct CertificateError {
    pub line: usize,
    pub message: String,
}

pub fn tool_version() -> String {
    format!("popcert {}", env!("CARGO_PKG_VERSION"))
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    let v: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    if v.is_empty() {
        "-".into()
    } else {
        v.join(sep)
    }
}

impl Certificate {
    pub fn maybe(mode: AnalysisMode, tpwidp: bool, diagnostics: Vec<String>) -> Self {
        Certificate {
            tool: tool_version(),
            verdict: Verdict::Maybe,
            mode,
            tpwidp,
            paths: Vec::new(),
            diagnostics,
            empirical: None,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let w = &mut s;
        writeln!(w, "{FORMAT_HEADER}").unwrap();
        writeln!(w, "tool: {}", self.tool).unwrap();
        writeln!(w, "verdict: {}", self.verdict).unwrap();
        writeln!(w, "mode: {}", self.mode).unwrap();
        writeln!(w, "pairs: {}", if self.tpwidp { "tpwidp" } else { "widp" }).unwrap();
        for d in &self.diagnostics {
            writeln!(w, "diagnostic: {}", d.replace('\n', " ")).unwrap();
        }
        for (i, p) in self.paths.iter().enumerate() {
            writeln!(w, "path: {}", i + 1).unwrap();
            let classes = p.classes.iter().map(|c| join(c.iter().map(|x| x + 1), ","));
            writeln!(w, "classes: {}", join(classes, "; ")).unwrap();
            writeln!(w, "usable: {}", join(p.usable.iter().map(|x| x + 1), ",")).unwrap();
            for o in &p.strict {
                writeln!(w, "strict: {o}").unwrap();
            }
            for o in &p.weak {
                writeln!(w, "weak: {o}").unwrap();
            }
            writeln!(w, "guard: {}", join(&p.params.guard, " ")).unwrap();
            for (f, r) in &p.params.rank {
                writeln!(w, "rank: {f} := {r}").unwrap();
            }
            for (f, set) in &p.params.safe {
                writeln!(w, "safe: {f} := {}", join(set.iter().map(|x| x + 1), ",")).unwrap();
            }
            for (f, x) in &p.params.filter {
                match x {
                    Filter::Collapse(i) => writeln!(w, "filter: {f} := {}", i + 1).unwrap(),
                    Filter::Keep(v) => {
                        let v: Vec<String> = v.iter().map(|x| (x + 1).to_string()).collect();
                        writeln!(w, "filter: {f} := [{}]", v.join(",")).unwrap()
                    }
                }
            }
            if let Some(sli) = &p.sli {
                writeln!(w, "interpretation: sli").unwrap();
                for (f, (n, c)) in sli {
                    writeln!(w, "sli: {f}/{n} := sum(args) + {c}").unwrap();
                }
            }
            writeln!(w, "end").unwrap();
        }
        if let Some(e) = &self.empirical {
            writeln!(w, "empirical: {}", e.samples.len()).unwrap();
            for (n, d) in &e.samples {
                writeln!(w, "sample: {n} {d}").unwrap();
            }
            writeln!(w, "exhausted: {}", e.exhausted).unwrap();
            writeln!(w, "exponent: {:?}", e.exponent).unwrap();
            writeln!(w, "superpolynomial: {}", e.super_polynomial).unwrap();
            writeln!(w, "flagged: {}", e.flagged).unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<Certificate, CertificateError> {
        Parser::new(text).certificate()
    }
}

struct Parser<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            lines: text
                .lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l))
                .filter(|(_, l)| !l.trim().is_empty())
                .collect(),
            pos: 0,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, CertificateError> {
        let line = self
            .lines
            .get(self.pos)
            .map_or(self.lines.last().map_or(0, |l| l.0), |l| l.0);
        Err(CertificateError {
            line,
            message: message.into(),
        })
    }

    /// Error on the line just consumed.
    fn bad<T>(&self, message: impl Into<String>) -> Result<T, CertificateError> {
        Err(CertificateError {
            line: self.lines[self.pos.saturating_sub(1)].0,
            message: message.into(),
        })
    }

    fn peek_key(&self) -> Option<&'a str> {
        self.lines
            .get(self.pos)
            .and_then(|(_, l)| l.split_once(": ").map(|(k, _)| k).or(Some(*l)))
    }

    fn field(&mut self, key: &str) -> Result<&'a str, CertificateError> {
        match self.lines.get(self.pos) {
            Some((_, l)) => match l.split_once(": ") {
                Some((k, v)) if k == key => {
                    self.pos += 1;
                    Ok(v)
                }
                _ => self.err(format!("expected `{key}:`")),
            },
            None => self.err(format!("expected `{key}:` before end of input")),
        }
    }

    fn num<T: std::str::FromStr>(&self, s: &str) -> Result<T, CertificateError> {
        match s.trim().parse() {
            Ok(x) => Ok(x),
            Err(_) => self.bad(format!("bad number `{s}`")),
        }
    }

    fn positions(&self, s: &str) -> Result<Vec<usize>, CertificateError> {
        if s == "-" || s.is_empty() {
            return Ok(Vec::new());
        }
        s.split(',')
            .map(|x| match self.num::<usize>(x)? {
                0 => self.bad("positions are 1-based"),
                n => Ok(n - 1),
            })
            .collect()
    }

    fn assignment(&self, s: &'a str) -> Result<(&'a str, &'a str), CertificateError> {
        match s.split_once(" := ") {
            Some(x) => Ok(x),
            None => self.bad("expected `name := value`"),
        }
    }

    fn certificate(mut self) -> Result<Certificate, CertificateError> {
        match self.lines.first() {
            Some((_, l)) if *l == FORMAT_HEADER => self.pos = 1,
            _ => return self.err(format!("missing `{FORMAT_HEADER}` header")),
        }
        let tool = self.field("tool")?.to_owned();
        let verdict = match self.field("verdict")? {
            "polynomial-innermost-runtime" => Verdict::Polynomial,
            "polytime-computable" => Verdict::PolytimeComputable,
            "maybe" => Verdict::Maybe,
            v => return self.bad(format!("unknown verdict `{v}`")),
        };
        let mode = match self.field("mode")?.parse() {
            Ok(m) => m,
            Err(e) => return self.bad(e),
        };
        let tpwidp = match self.field("pairs")? {
            "widp" => false,
            "tpwidp" => true,
            v => return self.bad(format!("unknown pair kind `{v}`")),
        };
        let mut diagnostics = Vec::new();
        while self.peek_key() == Some("diagnostic") {
            diagnostics.push(self.field("diagnostic")?.to_owned());
        }
        let mut paths = Vec::new();
        while self.peek_key() == Some("path") {
            let n: usize = {
                let v = self.field("path")?;
                self.num(v)
            }?;
            if n != paths.len() + 1 {
                return self.bad("paths must be numbered consecutively");
            }
            paths.push(self.path()?);
        }
        let empirical = if self.peek_key() == Some("empirical") {
            Some(self.empirical()?)
        } else {
            None
        };
        if self.pos < self.lines.len() {
            return self.err("unexpected trailing content");
        }
        Ok(Certificate {
            tool,
            verdict,
            mode,
            tpwidp,
            paths,
            diagnostics,
            empirical,
        })
    }

    fn path(&mut self) -> Result<PathRecord, CertificateError> {
        let classes = match self.field("classes")? {
            "-" => Vec::new(),
            c => c
                .split("; ")
                .map(|x| self.positions(x))
                .collect::<Result<_, _>>()?,
        };
        let usable = {
            let v = self.field("usable")?;
            self.positions(v)
        }?;
        let mut strict = Vec::new();
        while self.peek_key() == Some("strict") {
            strict.push(self.field("strict")?.to_owned());
        }
        let mut weak = Vec::new();
        while self.peek_key() == Some("weak") {
            weak.push(self.field("weak")?.to_owned());
        }
        let mut params = NamedParams::default();
        let guard = self.field("guard")?;
        if guard != "-" {
            params.guard = guard.split(' ').map(str::to_owned).collect();
        }
        while self.peek_key() == Some("rank") {
            let (f, r) = {
                let v = self.field("rank")?;
                self.assignment(v)
            }?;
            params.rank.insert(f.to_owned(), self.num(r)?);
        }
        while self.peek_key() == Some("safe") {
            let (f, s) = {
                let v = self.field("safe")?;
                self.assignment(v)
            }?;
            params
                .safe
                .insert(f.to_owned(), self.positions(s)?.into_iter().collect());
        }
        while self.peek_key() == Some("filter") {
            let (f, x) = {
                let v = self.field("filter")?;
                self.assignment(v)
            }?;
            let filter = match x.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
                Some(inner) => Filter::Keep(if inner.is_empty() {
                    Vec::new()
                } else {
                    self.positions(inner)?
                }),
                None => match self.positions(x)?.as_slice() {
                    [i] => Filter::Collapse(*i),
                    _ => return self.bad("a collapse names one position"),
                },
            };
            params.filter.insert(f.to_owned(), filter);
        }
        let sli = if self.peek_key() == Some("interpretation") {
            if self.field("interpretation")? != "sli" {
                return self.bad("only `sli` interpretations are supported");
            }
            let mut w = NamedSli::new();
            while self.peek_key() == Some("sli") {
                let (lhs, rhs) = {
                    let v = self.field("sli")?;
                    self.assignment(v)
                }?;
                let Some((f, n)) = lhs.rsplit_once('/') else {
                    return self.bad("expected `name/arity`");
                };
                let Some(c) = rhs.strip_prefix("sum(args) + ") else {
                    return self.bad("expected `sum(args) + c`");
                };
                w.insert(f.to_owned(), (self.num(n)?, self.num(c)?));
            }
            Some(w)
        } else {
            None
        };
        if self.peek_key() != Some("end") {
            return self.err("expected `end`");
        }
        self.pos += 1;
        Ok(PathRecord {
            classes,
            usable,
            strict,
            weak,
            sli,
            params,
        })
    }

    fn empirical(&mut self) -> Result<EmpiricalReport, CertificateError> {
        let count: usize = {
            let v = self.field("empirical")?;
            self.num(v)
        }?;
        let mut samples = Vec::with_capacity(count);
        for _ in 0..count {
            let s = self.field("sample")?;
            let Some((n, d)) = s.split_once(' ') else {
                return self.bad("expected `size dl`");
            };
            samples.push((self.num(n)?, self.num(d)?));
        }
        let exhausted = {
            let v = self.field("exhausted")?;
            self.num(v)
        }?;
        let exponent = {
            let v = self.field("exponent")?;
            self.num(v)
        }?;
        let super_polynomial = {
            let v = self.field("superpolynomial")?;
            self.num(v)
        }?;
        let flagged = {
            let v = self.field("flagged")?;
            self.num(v)
        }?;
        Ok(EmpiricalReport {
            samples,
            exhausted,
            exponent,
            super_polynomial,
            flagged,
        })
    }
}
