use std::fmt::Write as _;
use std::io;

use thiserror::Error;

/// A propositional formula in conjunctive normal form over variables
/// `1..=num_vars`, literals as signed integers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

#[derive(Debug, Error)]
#[error("malformed CNF: {0}")]
pub struct DimacsError(pub String);

/// Truth values indexed by variable; index 0 is unused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model(pub Vec<bool>);

impl Model {
    pub fn value(&self, lit: i32) -> bool {
        let v = self
            .0
            .get(lit.unsigned_abs() as usize)
            .copied()
            .unwrap_or(false);
        if lit > 0 {
            v
        } else {
            !v
        }
    }

    pub fn satisfies(&self, cnf: &Cnf) -> bool {
        cnf.clauses.iter().all(|c| c.iter().any(|&l| self.value(l)))
    }

    /// Signed literal per variable, as printed after a solver's `v` prefix.
    pub fn literals(&self) -> Vec<i32> {
        (1..self.0.len())
            .map(|v| if self.0[v] { v as i32 } else { -(v as i32) })
            .collect()
    }
}

impl Cnf {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&mut self) -> i32 {
        self.num_vars += 1;
        self.num_vars as i32
    }

    pub fn add(&mut self, clause: Vec<i32>) {
        for &l in &clause {
            debug_assert!(l != 0 && l.unsigned_abs() as usize <= self.num_vars);
        }
        self.clauses.push(clause);
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                write!(out, "{l} ").unwrap();
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn from_dimacs(input: impl io::Read) -> Result<Cnf, DimacsError> {
        let formula =
            varisat::dimacs::DimacsParser::parse(input).map_err(|e| DimacsError(e.to_string()))?;
        Ok(Cnf {
            num_vars: formula.var_count(),
            clauses: formula
                .iter()
                .map(|c| c.iter().map(|l| l.to_dimacs() as i32).collect())
                .collect(),
        })
    }
}
