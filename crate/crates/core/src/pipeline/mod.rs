//! End-to-end analysis: the three modes, certificate assembly and replay,
//! the polytime side conditions and empirical validation.

mod cert;
mod empirical;
mod polytime;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::dp::{
    congruence_paths, estimate_graph, is_non_duplicating, tpwidp, usable_rules, widp,
    CongruencePath, DpProblem,
};
use crate::orders::OrderParams;
use crate::sli::{self, check_compat};
use crate::synth::{
    synthesize, Backend, FilterSpace, ObligationSet, SynthConfig, DEFAULT_MAX_VARS,
};
use crate::trs::{Rule, Sym, Term, Trs};

pub use cert::{
    named_sli, resolve_sli, tool_version, AnalysisMode, Certificate, CertificateError, NamedParams,
    NamedSli, PathRecord, Verdict, FORMAT_HEADER,
};
pub use empirical::{
    doubling_ratio_test, empirical_validate, empirical_validate_with, fit_exponent,
    EmpiricalConfig, EmpiricalReport, DEFAULT_EXPONENT_THRESHOLD, DOUBLING_RATIO,
};
pub use polytime::{check_polytime, PolytimeOutcome, PolytimeReason, SortedSignatureInfo};

#[derive(Clone, Debug)]
pub struct AnalysisConfig {
    pub mode: AnalysisMode,
    pub tpwidp: bool,
    pub filters: FilterSpace,
    pub backend: Backend,
    /// Budget for the whole analysis.
    pub timeout: Duration,
    pub path_timeout: Duration,
    pub workers: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            mode: AnalysisMode::Dg,
            tpwidp: false,
            filters: FilterSpace::Restricted,
            backend: Backend::Internal,
            timeout: Duration::from_secs(60),
            path_timeout: Duration::from_secs(5),
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

fn pairs_of(rules: impl IntoIterator<Item = Rule>) -> Vec<(Term, Term)> {
    rules.into_iter().map(|r| (r.lhs, r.rhs)).collect()
}

fn rules_at(trs: &Trs, idx: &[usize]) -> Vec<Rule> {
    idx.iter().map(|&i| trs.rules[i].clone()).collect()
}

fn direct_obligations(trs: &Trs) -> ObligationSet {
    ObligationSet::new(
        pairs_of(trs.rules.iter().cloned()),
        Vec::new(),
        trs.refined_defined.clone(),
        BTreeSet::new(),
        FilterSpace::Identity,
    )
}

fn dp_problem(trs: &Trs, tp: bool) -> DpProblem {
    if tp {
        tpwidp(trs)
    } else {
        widp(trs)
    }
}

fn dp_guard(trs: &Trs, problem: &DpProblem) -> BTreeSet<Sym> {
    trs.refined_defined
        .union(&problem.marked_symbols())
        .copied()
        .collect()
}

/// The whole pair set as one path in dp mode, the congruence paths in dg mode.
fn analysis_paths(trs: &Trs, problem: &DpProblem, mode: AnalysisMode) -> Vec<CongruencePath> {
    match mode {
        AnalysisMode::Dg => congruence_paths(&estimate_graph(problem, trs)),
        _ if problem.pairs.is_empty() => Vec::new(),
        _ => vec![CongruencePath {
            classes: vec![(0..problem.pairs.len()).collect()],
        }],
    }
}

fn path_usable(trs: &Trs, problem: &DpProblem, path: &CongruencePath) -> Vec<usize> {
    usable_rules(path.all_pairs().iter().map(|&i| &problem.pairs[i]), trs)
}

fn path_obligations(
    trs: &Trs,
    problem: &DpProblem,
    path: &CongruencePath,
    usable: &[usize],
    filters: FilterSpace,
) -> ObligationSet {
    let pair = |i: &usize| (problem.pairs[*i].lhs.clone(), problem.pairs[*i].rhs.clone());
    let strict = path.strict_part().iter().map(pair).collect();
    let mut weak: Vec<(Term, Term)> = path.weak_part().iter().map(pair).collect();
    weak.extend(pairs_of(rules_at(trs, usable)));
    ObligationSet::new(
        strict,
        weak,
        dp_guard(trs, problem),
        problem.compounds(),
        filters,
    )
}

fn path_text(
    trs: &Trs,
    problem: &DpProblem,
    path: &CongruencePath,
    usable: &[usize],
) -> (Vec<String>, Vec<String>) {
    let strict = path
        .strict_part()
        .iter()
        .map(|&i| problem.pair_display(i))
        .collect();
    let mut weak: Vec<String> = path
        .weak_part()
        .iter()
        .map(|&i| problem.pair_display(i))
        .collect();
    weak.extend(usable.iter().map(|&i| trs.rule_display(i)));
    (strict, weak)
}

fn run_synth(
    obls: &ObligationSet,
    config: &AnalysisConfig,
    timeout: Duration,
) -> Result<OrderParams, String> {
    let synth = SynthConfig {
        backend: config.backend.clone(),
        timeout: Some(timeout),
        max_vars: DEFAULT_MAX_VARS,
    };
    match synthesize(obls, &synth) {
        Ok(Some(p)) => Ok(p),
        Ok(None) => Err("no order parameters exist".into()),
        Err(e) => Err(e.to_string()),
    }
}

pub fn analyze(trs: &Trs, config: &AnalysisConfig) -> Certificate {
    let deadline = Instant::now() + config.timeout;
    let mut cert = match config.mode {
        AnalysisMode::Direct => analyze_direct(trs, config),
        _ => analyze_dp(trs, config, deadline),
    };
    if cert.verdict.is_polynomial() {
        if let Err(e) = verify(&cert, trs) {
            cert = Certificate::maybe(
                config.mode,
                cert.tpwidp,
                vec![format!("certificate failed replay: {e}")],
            );
        }
    }
    cert
}

/// The guard is the refined set of defined symbols, which coincides with
/// the defined symbols on constructor systems.
fn analyze_direct(trs: &Trs, config: &AnalysisConfig) -> Certificate {
    let obls = direct_obligations(trs);
    match run_synth(&obls, config, config.timeout) {
        Ok(params) => Certificate {
            verdict: Verdict::Polynomial,
            paths: vec![PathRecord {
                classes: Vec::new(),
                usable: (0..trs.rules.len()).collect(),
                strict: (0..trs.rules.len()).map(|i| trs.rule_display(i)).collect(),
                weak: Vec::new(),
                sli: None,
                params: NamedParams::from_params(&params, &trs.sig),
            }],
            ..Certificate::maybe(AnalysisMode::Direct, false, Vec::new())
        },
        Err(e) => Certificate::maybe(AnalysisMode::Direct, false, vec![format!("rules: {e}")]),
    }
}

fn analyze_dp(trs: &Trs, config: &AnalysisConfig, deadline: Instant) -> Certificate {
    let (mode, tp) = (config.mode, config.tpwidp);
    let problem = dp_problem(trs, tp);
    if !is_non_duplicating(&problem.pairs) {
        return Certificate::maybe(mode, tp, vec!["dependency pairs are duplicating".into()]);
    }
    let paths = analysis_paths(trs, &problem, mode);
    let work = |(n, path): (usize, &CongruencePath)| -> Result<PathRecord, String> {
        let usable = path_usable(trs, &problem, path);
        let weights = sli::synthesize(&rules_at(trs, &usable)).ok_or_else(|| {
            format!(
                "path {}: no strongly linear interpretation for the usable rules",
                n + 1
            )
        })?;
        let remaining = deadline.saturating_duration_since(Instant::now());
        if remaining.is_zero() {
            return Err(format!("path {}: global timeout", n + 1));
        }
        let obls = path_obligations(trs, &problem, path, &usable, config.filters);
        let params = run_synth(&obls, config, remaining.min(config.path_timeout))
            .map_err(|e| format!("path {}: {e}", n + 1))?;
        let (strict, weak) = path_text(trs, &problem, path, &usable);
        Ok(PathRecord {
            classes: path.classes.clone(),
            usable,
            strict,
            weak,
            sli: Some(named_sli(&weights, &trs.sig)),
            params: NamedParams::from_params(&params, &problem.sig),
        })
    };
    let results: Vec<Result<PathRecord, String>> = match rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.max(1))
        .build()
    {
        Ok(pool) => pool.install(|| paths.par_iter().enumerate().map(work).collect()),
        Err(_) => paths.iter().enumerate().map(work).collect(),
    };
    let failures: Vec<String> = results
        .iter()
        .filter_map(|r| r.as_ref().err().cloned())
        .collect();
    if !failures.is_empty() {
        return Certificate::maybe(mode, tp, failures);
    }
    Certificate {
        verdict: Verdict::Polynomial,
        paths: results.into_iter().map(Result::unwrap).collect(),
        ..Certificate::maybe(mode, tp, Vec::new())
    }
}

/// Replays every obligation of a certificate without search.
pub fn verify(cert: &Certificate, trs: &Trs) -> Result<(), String> {
    if !cert.verdict.is_polynomial() {
        return Ok(());
    }
    match cert.mode {
        AnalysisMode::Direct => verify_direct(cert, trs)?,
        _ => verify_dp(cert, trs)?,
    }
    if cert.verdict == Verdict::PolytimeComputable {
        let weaker = Certificate {
            verdict: Verdict::Polynomial,
            ..cert.clone()
        };
        if let PolytimeOutcome::NotApplicable(r) =
            check_polytime(trs, &SortedSignatureInfo::from_trs(trs), &weaker)
        {
            return Err(format!("polytime side condition fails: {}", r[0]));
        }
    }
    Ok(())
}

pub fn recheck(cert: &Certificate, trs: &Trs) -> bool {
    verify(cert, trs).is_ok()
}

pub fn recheck_text(text: &str, trs: &Trs) -> Result<bool, CertificateError> {
    Certificate::parse(text).map(|c| recheck(&c, trs))
}

fn names(syms: &BTreeSet<Sym>, sig: &crate::trs::Signature) -> BTreeSet<String> {
    syms.iter().map(|&f| sig.name(f).to_owned()).collect()
}

fn verify_direct(cert: &Certificate, trs: &Trs) -> Result<(), String> {
    let [path] = &cert.paths[..] else {
        return Err("direct certificates have exactly one path".into());
    };
    let rules: Vec<String> = (0..trs.rules.len()).map(|i| trs.rule_display(i)).collect();
    if !path.classes.is_empty()
        || path.usable != (0..trs.rules.len()).collect::<Vec<_>>()
        || path.strict != rules
        || !path.weak.is_empty()
        || path.sli.is_some()
    {
        return Err("path record does not match the rules".into());
    }
    if path.params.guard != names(&trs.refined_defined, &trs.sig) {
        return Err("guard differs from the defined symbols".into());
    }
    if !path.params.filter.is_empty() {
        return Err("direct mode admits no argument filtering".into());
    }
    let params = path.params.to_params(&trs.sig)?;
    direct_obligations(trs).check(&params)
}

fn verify_dp(cert: &Certificate, trs: &Trs) -> Result<(), String> {
    let problem = dp_problem(trs, cert.tpwidp);
    if !is_non_duplicating(&problem.pairs) {
        return Err("dependency pairs are duplicating".into());
    }
    let paths = analysis_paths(trs, &problem, cert.mode);
    if paths.len() != cert.paths.len() {
        return Err(format!(
            "expected {} paths, found {}",
            paths.len(),
            cert.paths.len()
        ));
    }
    let guard = names(&dp_guard(trs, &problem), &problem.sig);
    for (n, (path, rec)) in paths.iter().zip(&cert.paths).enumerate() {
        let at = |e: String| format!("path {}: {e}", n + 1);
        if path.classes != rec.classes {
            return Err(at("classes differ from the dependency graph".into()));
        }
        let usable = path_usable(trs, &problem, path);
        if usable != rec.usable {
            return Err(at("usable rules differ".into()));
        }
        if (rec.strict.clone(), rec.weak.clone()) != path_text(trs, &problem, path, &usable) {
            return Err(at("obligations differ".into()));
        }
        let weights = resolve_sli(
            rec.sli
                .as_ref()
                .ok_or_else(|| at("missing interpretation".into()))?,
            &trs.sig,
        )
        .map_err(at)?;
        if !check_compat(&weights, &rules_at(trs, &usable)) {
            return Err(at("interpretation does not orient the usable rules".into()));
        }
        if rec.params.guard != guard {
            return Err(at(
                "guard differs from the defined and marked symbols".into()
            ));
        }
        let params = rec.params.to_params(&problem.sig).map_err(at)?;
        // the filter space only restricts search; any safe filtering is sound
        let obls = path_obligations(trs, &problem, path, &usable, FilterSpace::Full);
        obls.check(&params).map_err(at)?;
    }
    Ok(())
}
