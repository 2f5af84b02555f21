use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use thiserror::Error;

use super::cnf::{Cnf, Model};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Backend {
    /// The in-process CDCL solver.
    Internal,
    /// A solver executable taking the CNF file path as its last argument.
    /// Extra arguments may precede the file.
    External { program: PathBuf, args: Vec<String> },
}

impl Backend {
    /// Parses `internal`, `ext:<program> [args..]` or a bare program path.
    pub fn parse(spec: &str) -> Backend {
        let spec = spec.trim();
        if spec == "internal" {
            return Backend::Internal;
        }
        let cmd = spec.strip_prefix("ext:").unwrap_or(spec);
        let mut words = cmd.split_whitespace();
        let program = PathBuf::from(words.next().unwrap_or_default());
        Backend::External {
            program,
            args: words.map(str::to_owned).collect(),
        }
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("solver timed out")]
    Timeout,
    #[error("solver I/O failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("unrecognised solver output: {0}")]
    BadOutput(String),
    #[error("solver failure: {0}")]
    Internal(String),
}

/// A satisfying assignment, or `None` when the formula is unsatisfiable.
pub fn solve(
    cnf: &Cnf,
    backend: &Backend,
    timeout: Option<Duration>,
) -> Result<Option<Model>, SolveError> {
    match backend {
        Backend::Internal => solve_internal(cnf, timeout),
        Backend::External { program, args } => solve_external(cnf, program, args, timeout),
    }
}

fn run_varisat(cnf: &Cnf) -> Result<Option<Model>, SolveError> {
    let mut solver = varisat::Solver::new();
    let mut formula = varisat::CnfFormula::new();
    formula.set_var_count(cnf.num_vars);
    for c in &cnf.clauses {
        let lits: Vec<varisat::Lit> = c
            .iter()
            .map(|&l| varisat::Lit::from_dimacs(l as isize))
            .collect();
        varisat::ExtendFormula::add_clause(&mut formula, &lits);
    }
    solver.add_formula(&formula);
    if !solver
        .solve()
        .map_err(|e| SolveError::Internal(e.to_string()))?
    {
        return Ok(None);
    }
    let mut values = vec![false; cnf.num_vars + 1];
    for l in solver.model().unwrap_or_default() {
        let d = l.to_dimacs();
        if let Some(slot) = values.get_mut(d.unsigned_abs()) {
            *slot = d > 0;
        }
    }
    Ok(Some(Model(values)))
}

fn solve_internal(cnf: &Cnf, timeout: Option<Duration>) -> Result<Option<Model>, SolveError> {
    let Some(limit) = timeout else {
        return run_varisat(cnf);
    };
    // the solver has no interruption hook; a timed-out run is abandoned
    let (tx, rx) = mpsc::channel();
    let owned = cnf.clone();
    thread::spawn(move || {
        let _ = tx.send(run_varisat(&owned));
    });
    rx.recv_timeout(limit).map_err(|_| SolveError::Timeout)?
}

static FILE_COUNTER: AtomicUsize = AtomicUsize::new(0);

fn solve_external(
    cnf: &Cnf,
    program: &PathBuf,
    args: &[String],
    timeout: Option<Duration>,
) -> Result<Option<Model>, SolveError> {
    let path = std::env::temp_dir().join(format!(
        "popcert-{}-{}.cnf",
        std::process::id(),
        FILE_COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    std::fs::write(&path, cnf.to_dimacs())?;
    let result = run_external(program, args, &path, timeout);
    let _ = std::fs::remove_file(&path);
    parse_solver_output(&result?, cnf.num_vars)
}

fn run_external(
    program: &PathBuf,
    args: &[String],
    file: &PathBuf,
    timeout: Option<Duration>,
) -> Result<String, SolveError> {
    let mut child = Command::new(program)
        .args(args)
        .arg(file)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()?;
    let mut stdout = child.stdout.take().expect("piped stdout");
    let reader = thread::spawn(move || {
        let mut s = String::new();
        stdout.read_to_string(&mut s).map(|_| s)
    });
    let start = Instant::now();
    loop {
        if child.try_wait()?.is_some() {
            break;
        }
        if timeout.is_some_and(|t| start.elapsed() > t) {
            let _ = child.kill();
            let _ = child.wait();
            return Err(SolveError::Timeout);
        }
        thread::sleep(Duration::from_millis(2));
    }
    reader
        .join()
        .map_err(|_| SolveError::Internal("output reader panicked".into()))?
        .map_err(SolveError::Io)
}

/// Accepts both the competition format (`s SATISFIABLE` with `v` lines)
/// and the bare `SAT`/`UNSAT` format followed by a literal line.
pub fn parse_solver_output(out: &str, num_vars: usize) -> Result<Option<Model>, SolveError> {
    let mut status = None;
    let mut values = vec![false; num_vars + 1];
    for line in out.lines() {
        let line = line.trim();
        let body = match line.split_once(' ') {
            Some(("s", rest)) => {
                status = Some(rest.trim() == "SATISFIABLE");
                continue;
            }
            Some(("v", rest)) => rest,
            Some(("c", _)) => continue,
            _ => match line {
                "SAT" | "SATISFIABLE" => {
                    status = Some(true);
                    continue;
                }
                "UNSAT" | "UNSATISFIABLE" => {
                    status = Some(false);
                    continue;
                }
                "" | "c" => continue,
                _ => line,
            },
        };
        for tok in body.split_whitespace() {
            let l: i64 = tok
                .parse()
                .map_err(|_| SolveError::BadOutput(line.to_owned()))?;
            if let Some(slot) = values.get_mut(l.unsigned_abs() as usize) {
                *slot = l > 0;
            }
        }
    }
    match status {
        Some(true) => Ok(Some(Model(values))),
        Some(false) => Ok(None),
        None => Err(SolveError::BadOutput(
            out.lines().next().unwrap_or("").to_owned(),
        )),
    }
}

/// Writes a solver answer in the bare format read by [`parse_solver_output`].
pub fn write_solver_output(model: Option<&Model>, out: &mut impl Write) -> std::io::Result<()> {
    match model {
        None => writeln!(out, "UNSAT"),
        Some(m) => {
            writeln!(out, "SAT")?;
            for l in m.literals() {
                write!(out, "{l} ")?;
            }
            writeln!(out, "0")
        }
    }
}
