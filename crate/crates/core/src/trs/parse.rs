//! Reader for the `(VAR ..)(RULES ..)` format with optional `(SORTS ..)`
//! and `(TYPES f : s1 .. sn -> s)` blocks.

use std::collections::HashMap;

use thiserror::Error;

use super::signature::{Signature, SignatureError, SortDecl, SymbolKind};
use super::term::Term;
use super::{Rule, RuleError, Trs};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("{line}:{col}: symbol `{name}` used with arity {found}, previously {expected}")]
    Arity {
        line: usize,
        col: usize,
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("{line}:{col}: rule {index}: left-hand side is a variable")]
    VariableLhs {
        line: usize,
        col: usize,
        index: usize,
    },
    #[error(
        "{line}:{col}: rule {index}: variable `{var}` occurs on the right but not on the left"
    )]
    ExtraVariable {
        line: usize,
        col: usize,
        index: usize,
        var: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Comma,
    Colon,
    Arrow,
    Ident(String),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        // `#` only opens a comment at the start of a token, so `f#` stays a name.
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start_col = col;
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            ':' => Some(Tok::Colon),
            '-' if chars.get(i + 1) == Some(&'>') => Some(Tok::Arrow),
            _ => None,
        };
        if let Some(tok) = single {
            let len = if tok == Tok::Arrow { 2 } else { 1 };
            i += len;
            col += len;
            out.push(Token {
                tok,
                line,
                col: start_col,
            });
            continue;
        }
        let mut name = String::new();
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace()
                || "(),:".contains(c)
                || (c == '-' && chars.get(i + 1) == Some(&'>'))
            {
                break;
            }
            name.push(c);
            i += 1;
            col += 1;
        }
        out.push(Token {
            tok: Tok::Ident(name),
            line,
            col: start_col,
        });
    }
    out
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    sig: &'a mut Signature,
    vars: HashMap<String, ()>,
    /// When set, unknown identifiers without arguments are variables.
    free_vars: bool,
    /// Set for inputs without a VAR block: names like `x`, `y1`, `z'` are variables.
    implicit_vars: bool,
    eof: (usize, usize),
}

impl<'a> Parser<'a> {
    fn new(text: &str, sig: &'a mut Signature) -> Self {
        let lines: Vec<&str> = text.split('\n').collect();
        let eof = (
            lines.len(),
            lines.last().map_or(0, |l| l.chars().count()) + 1,
        );
        Parser {
            toks: lex(text),
            pos: 0,
            sig,
            vars: HashMap::new(),
            free_vars: false,
            implicit_vars: false,
            eof,
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map_or(self.eof, |t| (t.line, t.col))
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError::Syntax {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn intern(
        &mut self,
        name: &str,
        arity: usize,
        at: (usize, usize),
    ) -> Result<super::Sym, ParseError> {
        self.sig
            .intern(name, arity, SymbolKind::Constructor)
            .map_err(
                |SignatureError::ArityMismatch {
                     name,
                     expected,
                     found,
                 }| ParseError::Arity {
                    line: at.0,
                    col: at.1,
                    name,
                    expected,
                    found,
                },
            )
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let at = self.here();
        let name = self.ident("a term")?;
        let unknown_constant =
            self.sig.lookup(&name).is_none() && self.peek() != Some(&Tok::LParen);
        let is_var = self.vars.contains_key(&name)
            || (self.free_vars && unknown_constant)
            || (self.implicit_vars && unknown_constant && looks_like_var(&name));
        if is_var {
            if self.peek() == Some(&Tok::LParen) {
                return self.err(format!("variable `{name}` applied to arguments"));
            }
            return Ok(Term::Var(self.sig.intern_var(&name)));
        }
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            if self.peek() == Some(&Tok::RParen) {
                self.pos += 1;
            } else {
                loop {
                    args.push(self.term()?);
                    match self.peek() {
                        Some(Tok::Comma) => self.pos += 1,
                        Some(Tok::RParen) => {
                            self.pos += 1;
                            break;
                        }
                        _ => return self.err("expected `,` or `)` in argument list"),
                    }
                }
            }
        }
        let f = self.intern(&name, args.len(), at)?;
        Ok(Term::app(f, args))
    }

    fn skip_block(&mut self) -> Result<(), ParseError> {
        let mut depth = 1usize;
        while depth > 0 {
            match self.peek() {
                None => return self.err("unterminated block"),
                Some(Tok::LParen) => depth += 1,
                Some(Tok::RParen) => depth -= 1,
                _ => {}
            }
            self.pos += 1;
        }
        Ok(())
    }

    fn rules(&mut self, out: &mut Vec<Rule>) -> Result<(), ParseError> {
        loop {
            match self.peek() {
                Some(Tok::RParen) => {
                    self.pos += 1;
                    return Ok(());
                }
                None => return self.err("unterminated RULES block"),
                _ => {}
            }
            let (line, col) = self.here();
            let lhs = self.term()?;
            self.expect(Tok::Arrow, "`->`")?;
            let rhs = self.term()?;
            if self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
            }
            let index = out.len() + 1;
            match Rule::new(lhs, rhs) {
                Ok(r) => out.push(r),
                Err(RuleError::VariableLhs) => {
                    return Err(ParseError::VariableLhs { line, col, index })
                }
                Err(RuleError::ExtraVariable(v)) => {
                    return Err(ParseError::ExtraVariable {
                        line,
                        col,
                        index,
                        var: self.sig.var_name(v),
                    })
                }
            }
        }
    }

    fn types(&mut self) -> Result<(), ParseError> {
        loop {
            match self.peek() {
                Some(Tok::RParen) => {
                    self.pos += 1;
                    return Ok(());
                }
                Some(Tok::Comma) => {
                    self.pos += 1;
                    continue;
                }
                None => return self.err("unterminated TYPES block"),
                _ => {}
            }
            let at = self.here();
            let name = self.ident("a symbol name")?;
            self.expect(Tok::Colon, "`:`")?;
            let mut sorts = Vec::new();
            let mut result = None;
            loop {
                match (self.peek(), self.peek_at(1)) {
                    (Some(Tok::Arrow), _) => {
                        self.pos += 1;
                        result = Some(self.ident("a result sort")?);
                        break;
                    }
                    (Some(Tok::Ident(_)), Some(Tok::Colon)) => break,
                    (Some(Tok::Ident(s)), _) => {
                        sorts.push(s.clone());
                        self.pos += 1;
                    }
                    _ => break,
                }
            }
            let decl = match result {
                Some(r) => SortDecl {
                    args: sorts,
                    result: r,
                },
                None if sorts.len() == 1 => SortDecl {
                    args: Vec::new(),
                    result: sorts.pop().unwrap(),
                },
                None => return self.err(format!("malformed type declaration for `{name}`")),
            };
            let f = self.intern(&name, decl.args.len(), at)?;
            self.sig.set_sort(f, Some(decl));
        }
    }
}

fn looks_like_var(name: &str) -> bool {
    let mut cs = name.chars();
    matches!(cs.next(), Some('u'..='z')) && cs.all(|c| c.is_ascii_digit() || c == '\'')
}

pub fn parse_trs(text: &str) -> Result<Trs, ParseError> {
    let mut sig = Signature::new();
    let mut rules = Vec::new();
    let mut sorts = Vec::new();
    {
        let mut p = Parser::new(text, &mut sig);
        p.implicit_vars = !p
            .toks
            .windows(2)
            .any(|w| w[0].tok == Tok::LParen && w[1].tok == Tok::Ident("VAR".into()));
        while p.peek().is_some() {
            p.expect(Tok::LParen, "`(`")?;
            let kw = p.ident("a block keyword")?;
            match kw.as_str() {
                "VAR" => {
                    while let Some(Tok::Ident(v)) = p.peek() {
                        let v = v.clone();
                        p.vars.insert(v.clone(), ());
                        p.sig.intern_var(&v);
                        p.pos += 1;
                    }
                    p.expect(Tok::RParen, "`)` closing VAR")?;
                }
                "RULES" => p.rules(&mut rules)?,
                "SORTS" => {
                    while let Some(Tok::Ident(s)) = p.peek() {
                        sorts.push(s.clone());
                        p.pos += 1;
                    }
                    p.expect(Tok::RParen, "`)` closing SORTS")?;
                }
                "TYPES" => p.types()?,
                _ => p.skip_block()?,
            }
        }
    }
    let mut trs = Trs::new(sig, rules);
    trs.sorts = sorts;
    Ok(trs)
}

/// Parses a single term. Identifiers that are not yet symbols and carry no
/// argument list become variables.
pub fn parse_term(sig: &mut Signature, text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, sig);
    p.free_vars = true;
    let t = p.term()?;
    if p.peek().is_some() {
        return p.err("trailing input after term");
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_marked_names() {
        let trs = parse_trs("# header\n(VAR x)\n(RULES f#(x) -> x # trailing\n)").unwrap();
        assert_eq!(trs.rules.len(), 1);
        assert_eq!(trs.sig.name(trs.rules[0].root()), "f#");
    }

    #[test]
    fn errors_carry_locations() {
        match parse_trs("(VAR x)\n(RULES\n  f(x) -> f(x, x)\n)") {
            Err(ParseError::Arity { line: 3, name, .. }) => assert_eq!(name, "f"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_trs("(RULES x -> x)"),
            Err(ParseError::VariableLhs { .. })
        ));
        // with a VAR block, undeclared names are constants
        assert!(parse_trs("(VAR y)(RULES x -> x)").is_ok());
        assert!(matches!(
            parse_trs("(VAR x)(RULES x -> x)"),
            Err(ParseError::VariableLhs {
                line: 1,
                index: 1,
                ..
            })
        ));
        assert!(matches!(
            parse_trs("(VAR x y)(RULES f(x) -> y)"),
            Err(ParseError::ExtraVariable { .. })
        ));
        assert!(matches!(
            parse_trs("(VAR x)(RULES f(x) ->"),
            Err(ParseError::Syntax { .. })
        ));
    }

    #[test]
    fn types_block() {
        let trs = parse_trs(
            "(SORTS Nat List)(TYPES 0 : Nat s : Nat -> Nat nil : List cons : Nat List -> List)(RULES )",
        )
        .unwrap();
        let cons = trs.sig.lookup("cons").unwrap();
        assert_eq!(trs.sig.arity(cons), 2);
        assert_eq!(trs.sig.sort(cons).unwrap().result, "List");
        assert_eq!(trs.sorts, vec!["Nat", "List"]);
    }
}
