//! The polynomial path order on sequences, predicative interpretations of
//! terms into sequences, and a harness that checks the embedding of
//! concrete derivations into descending chains.

mod embed;
mod interp;
mod order;

use std::fmt;
use std::sync::Arc;

use crate::trs::{Signature, Sym, Var};

pub use embed::{
    check_embedding, default_k, EmbedError, EmbeddingConfig, EmbeddingMode, EmbeddingReport,
    Violation,
};
pub use interp::{nf_v, Interpretation};
pub use order::{gpop_seq, gpp_seq, SeqOrder};

/// Sequences: terms over normalised symbols, the minimal constant `•` and
/// the variadic list constructor.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Seq {
    Dot,
    Var(Var),
    /// A normalised symbol `fⁿ`, applied to the interpretations of the
    /// normal arguments of `f`.
    Fn(Sym, Arc<[Seq]>),
    List(Arc<[Seq]>),
}

impl Seq {
    pub fn list(items: Vec<Seq>) -> Seq {
        Seq::List(items.into())
    }

    pub fn func(f: Sym, items: Vec<Seq>) -> Seq {
        Seq::Fn(f, items.into())
    }

    pub fn empty() -> Seq {
        Seq::List(Arc::from([]))
    }

    pub fn args(&self) -> &[Seq] {
        match self {
            Seq::Fn(_, a) | Seq::List(a) => a,
            _ => &[],
        }
    }

    /// `max{n, width(s1)..width(sn)}` for `n > 0` arguments, 1 otherwise.
    pub fn width(&self) -> usize {
        let a = self.args();
        if a.is_empty() {
            1
        } else {
            a.iter().map(Seq::width).max().unwrap().max(a.len())
        }
    }

    pub fn size(&self) -> usize {
        1 + self.args().iter().map(Seq::size).sum::<usize>()
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> SeqDisplay<'a> {
        SeqDisplay {
            seq: self,
            sig: Some(sig),
        }
    }
}

pub struct SeqDisplay<'a> {
    seq: &'a Seq,
    sig: Option<&'a Signature>,
}

impl fmt::Display for SeqDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |s| SeqDisplay {
            seq: s,
            sig: self.sig,
        };
        match self.seq {
            Seq::Dot => write!(f, "@"),
            Seq::Var(v) => match self.sig {
                Some(sig) => write!(f, "{}", sig.var_name(*v)),
                None => write!(f, "x{}", v.0),
            },
            Seq::Fn(g, args) => {
                match self.sig {
                    Some(sig) => write!(f, "{}", sig.name(*g))?,
                    None => write!(f, "f{}", g.0)?,
                }
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{}", sub(a))?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
            Seq::List(items) => {
                write!(f, "[")?;
                for (i, a) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{}", sub(a))?;
                }
                write!(f, "]")
            }
        }
    }
}

impl fmt::Debug for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}",
            SeqDisplay {
                seq: self,
                sig: None
            }
        )
    }
}
