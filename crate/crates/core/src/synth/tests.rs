use super::*;
use crate::dp::{usable_rules, widp, DpProblem};
use crate::orders::Filter;
use crate::trs::{parse_trs, Trs};

const BIN: &str = "(VAR x)
(RULES
  half(0) -> 0
  half(s(0)) -> 0
  half(s(s(x))) -> s(half(x))
  bits(0) -> 0
  bits(s(0)) -> s(0)
  bits(s(s(x))) -> s(bits(s(half(x))))
)";

const EXP: &str = "(VAR x y)
(RULES
  exp(x) -> e(g(x))
  e(g(s(x))) -> dup1(g(x))
  g(0) -> 0
  dup1(x) -> dup2(e(x), x)
  dup2(x, y) -> pr(x, e(y))
)";

fn bin_obligations(filters: FilterSpace) -> (Trs, DpProblem, ObligationSet) {
    let trs = parse_trs(BIN).unwrap();
    let p = widp(&trs);
    let strict = p
        .pairs
        .iter()
        .map(|q| (q.lhs.clone(), q.rhs.clone()))
        .collect();
    let weak = usable_rules(&p.pairs, &trs)
        .into_iter()
        .map(|i| (trs.rules[i].lhs.clone(), trs.rules[i].rhs.clone()))
        .collect();
    let guard = trs
        .refined_defined
        .union(&p.marked_symbols())
        .copied()
        .collect();
    let obls = ObligationSet::new(strict, weak, guard, p.compounds(), filters);
    (trs, p, obls)
}

#[test]
fn solver_basics() {
    let mut cnf = Cnf::new();
    let (p, q) = (cnf.fresh(), cnf.fresh());
    cnf.add(vec![p, q]);
    cnf.add(vec![-p]);
    let m = solve(&cnf, &Backend::Internal, None).unwrap().unwrap();
    assert!(!m.value(p) && m.value(q));
    let mut cnf = Cnf::new();
    let p = cnf.fresh();
    cnf.add(vec![p]);
    cnf.add(vec![-p]);
    assert_eq!(solve(&cnf, &Backend::Internal, None).unwrap(), None);
    let m = solve(&Cnf::new(), &Backend::Internal, None)
        .unwrap()
        .unwrap();
    assert!(m.literals().is_empty());
}

#[test]
fn dimacs_and_output_formats() {
    let cnf = Cnf {
        num_vars: 3,
        clauses: vec![vec![1, -2], vec![3], vec![-1, 2, -3]],
    };
    let text = cnf.to_dimacs();
    assert_eq!(text, "p cnf 3 3\n1 -2 0\n3 0\n-1 2 -3 0\n");
    assert_eq!(Cnf::from_dimacs(text.as_bytes()).unwrap(), cnf);
    assert!(Cnf::from_dimacs("p cnf 1 1\n1 x 0\n".as_bytes()).is_err());

    let m = parse_solver_output("c hello\ns SATISFIABLE\nv 1 2\nv 3 0\n", 3)
        .unwrap()
        .unwrap();
    assert!(m.satisfies(&cnf));
    let m = parse_solver_output("SAT\n1 -2 3 0\n", 3).unwrap().unwrap();
    assert_eq!(m.literals(), vec![1, -2, 3]);
    assert_eq!(parse_solver_output("s UNSATISFIABLE\n", 3).unwrap(), None);
    assert_eq!(parse_solver_output("UNSAT\n", 3).unwrap(), None);
    assert!(parse_solver_output("garbage\n", 3).is_err());

    let mut out = Vec::new();
    write_solver_output(Some(&m), &mut out).unwrap();
    assert_eq!(
        parse_solver_output(std::str::from_utf8(&out).unwrap(), 3).unwrap(),
        Some(m)
    );

    assert_eq!(Backend::parse("internal"), Backend::Internal);
    assert_eq!(
        Backend::parse("ext:/bin/solver -q"),
        Backend::External {
            program: "/bin/solver".into(),
            args: vec!["-q".into()],
        }
    );
}

#[test]
fn bin_is_satisfiable_in_both_backends() {
    for filters in [FilterSpace::Restricted, FilterSpace::Full] {
        let (_, _, obls) = bin_obligations(filters);
        let art = encode(&obls).unwrap();
        assert!(art.atoms > 0);
        let params = synthesize(&obls, &SynthConfig::default())
            .unwrap()
            .expect("witness exists");
        assert!(obls.check(&params).is_ok());
    }
    let (_, _, obls) = bin_obligations(FilterSpace::Restricted);
    let params = search_backtracking(&obls, &SearchLimits::default())
        .unwrap()
        .unwrap();
    assert!(obls.check(&params).is_ok());
}

#[test]
fn bin_needs_a_filtering() {
    // half(s(s(x))) -> s(half(x)) makes half recursive on its normal
    // argument, while bits# calls half inside its recursive argument
    let (_, _, obls) = bin_obligations(FilterSpace::Identity);
    assert_eq!(synthesize(&obls, &SynthConfig::default()).unwrap(), None);
    assert_eq!(
        search_backtracking(&obls, &SearchLimits::default()).unwrap(),
        None
    );
}

#[test]
fn hand_built_model_decodes_to_its_parameters() {
    let (_, p, obls) = bin_obligations(FilterSpace::Restricted);
    let s = |n: &str| p.sig.lookup(n).unwrap();
    let mut params = OrderParams::default();
    for f in ["half", "half#", "bits#"] {
        params.prec.rank.insert(s(f), 1);
    }
    for f in obls.symbols() {
        params.prec.rank.entry(f).or_insert(0);
    }
    params.filtering.pi.insert(s("half"), Filter::Collapse(0));
    params.guard = obls.guard.clone();
    assert!(obls.check(&params).is_ok());

    let art = encode(&obls).unwrap();
    let mut cnf = art.cnf.clone();
    for l in art.fixing(&params).unwrap() {
        cnf.add(vec![l]);
    }
    let model = solve(&cnf, &Backend::Internal, None).unwrap().unwrap();
    assert_eq!(decode(&art, &model, &obls).unwrap(), params);
}

#[test]
fn trivial_sets() {
    let mut trs = parse_trs("(VAR x)(RULES f(x) -> x)").unwrap();
    let x = trs.sig.term("x").unwrap();
    let obls = ObligationSet::new(
        vec![(x.clone(), x.clone())],
        vec![],
        [].into(),
        [].into(),
        FilterSpace::Full,
    );
    assert_eq!(synthesize(&obls, &SynthConfig::default()).unwrap(), None);
    assert_eq!(
        search_backtracking(&obls, &SearchLimits::default()).unwrap(),
        None
    );

    let fx = trs.sig.term("f(x)").unwrap();
    let f = trs.sig.lookup("f").unwrap();
    let obls = ObligationSet::new(
        vec![(fx.clone(), fx.clone())],
        vec![],
        [f].into(),
        [].into(),
        FilterSpace::Full,
    );
    assert_eq!(synthesize(&obls, &SynthConfig::default()).unwrap(), None);
    assert_eq!(
        search_backtracking(&obls, &SearchLimits::default()).unwrap(),
        None
    );
    let obls = ObligationSet::new(
        vec![],
        vec![(fx.clone(), fx)],
        [f].into(),
        [].into(),
        FilterSpace::Full,
    );
    assert!(synthesize(&obls, &SynthConfig::default())
        .unwrap()
        .is_some());

    let empty = ObligationSet::new(vec![], vec![], [].into(), [].into(), FilterSpace::Full);
    let params = synthesize(&empty, &SynthConfig::default())
        .unwrap()
        .unwrap();
    assert_eq!(
        params.filtering,
        crate::orders::ArgumentFiltering::identity()
    );
    assert!(params.prec.rank.is_empty());
}

#[test]
fn exp_is_blocked_by_the_refined_guard() {
    let trs = parse_trs(EXP).unwrap();
    let rules: Vec<(Term, Term)> = trs
        .rules
        .iter()
        .map(|r| (r.lhs.clone(), r.rhs.clone()))
        .collect();
    let naive = ObligationSet::new(
        rules.clone(),
        vec![],
        trs.defined.clone(),
        [].into(),
        FilterSpace::Identity,
    );
    assert!(synthesize(&naive, &SynthConfig::default())
        .unwrap()
        .is_some());
    assert!(search_backtracking(&naive, &SearchLimits::default())
        .unwrap()
        .is_some());
    let refined = ObligationSet::new(
        rules,
        vec![],
        trs.refined_defined.clone(),
        [].into(),
        FilterSpace::Identity,
    );
    assert_eq!(synthesize(&refined, &SynthConfig::default()).unwrap(), None);
    assert_eq!(
        search_backtracking(&refined, &SearchLimits::default()).unwrap(),
        None
    );
}

#[test]
fn capacity_and_search_caps() {
    let (_, _, obls) = bin_obligations(FilterSpace::Full);
    assert!(matches!(
        encode_with_cap(&obls, 10),
        Err(SynthError::Capacity(10))
    ));
    let tight = SearchLimits {
        max_symbols: 8,
        max_candidates: 10,
    };
    assert!(matches!(
        search_backtracking(&obls, &tight),
        Err(SynthError::SearchCap(_))
    ));
}
