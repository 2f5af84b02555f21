use super::*;
use crate::dp::widp;
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

fn sym(trs: &Trs, name: &str) -> Sym {
    trs.sig.lookup(name).unwrap()
}

#[test]
fn bin_witness_orients_all_pairs() {
    let trs = parse_trs(BIN).unwrap();
    let p = widp(&trs);
    let s = |n: &str| p.sig.lookup(n).unwrap();
    let mut params = OrderParams::default();
    for f in ["half", "half#", "bits#"] {
        params.prec.rank.insert(s(f), 1);
        params.guard.insert(s(f));
    }
    params.safe.safe.insert(s("s"), [0].into());
    params.filtering.pi.insert(s("half"), Filter::Collapse(0));
    let obls: Vec<(Term, Term)> = p
        .pairs
        .iter()
        .map(|q| (q.lhs.clone(), q.rhs.clone()))
        .collect();
    assert!(orient(&obls, &params, Mode::Strict).unwrap().all());
    let usable: Vec<Rule> = trs.rules[..3].to_vec();
    assert!(orient_rules(&usable, &params, Mode::Weak).unwrap().all());
    let relevant: BTreeSet<Sym> = p
        .sig
        .symbols()
        .filter(|&f| p.sig.name(f) != "bits")
        .collect();
    assert!(is_admissible(&params.prec, &params.guard, &relevant));
}

#[test]
fn filtering_cases() {
    let mut trs = parse_trs(BIN).unwrap();
    let mut pi = ArgumentFiltering::identity();
    let t = trs.sig.term("s(half(x))").unwrap();
    assert_eq!(pi.apply(&t).unwrap(), t);
    pi.pi.insert(sym(&trs, "half"), Filter::Collapse(0));
    assert_eq!(pi.apply(&t).unwrap(), trs.sig.term("s(x)").unwrap());
    pi.pi.insert(sym(&trs, "s"), Filter::Keep(vec![]));
    assert_eq!(pi.apply(&t).unwrap(), Term::constant(sym(&trs, "s")));
    pi.pi.insert(sym(&trs, "s"), Filter::Collapse(3));
    assert!(pi.apply(&t).is_err());
}

#[test]
fn exp_naive_versus_refined() {
    let trs = parse_trs(EXP).unwrap();
    let order = ["0", "pr", "e", "dup2", "dup1", "g", "exp"];
    let mut params = OrderParams::default();
    for (r, f) in order.iter().enumerate() {
        params.prec.rank.insert(sym(&trs, f), r as u32);
    }
    params.prec.rank.insert(sym(&trs, "s"), 0);
    params.guard = trs.defined.clone();
    for f in ["e", "dup1", "dup2"] {
        let n = trs.sig.arity(sym(&trs, f));
        params.safe.safe.insert(sym(&trs, f), (0..n).collect());
    }
    let report = orient_rules(&trs.rules, &params, Mode::Strict).unwrap();
    assert!(report.all(), "{:?}", report);
    assert!(is_admissible(
        &params.prec,
        &params.guard,
        &trs.symbols().collect()
    ));
    let mut refined = params.clone();
    refined.guard = trs.refined_defined.clone();
    assert!(!orient_rules(&trs.rules, &refined, Mode::Strict)
        .unwrap()
        .all());
}

#[test]
fn equivalences() {
    let mut trs = parse_trs("(VAR x y)(RULES f(x, y) -> x g(x, y) -> y)").unwrap();
    let (f, g) = (sym(&trs, "f"), sym(&trs, "g"));
    let mut params = OrderParams {
        guard: [f, g].into(),
        ..OrderParams::default()
    };
    params.safe.safe.insert(f, [1].into());
    params.safe.safe.insert(g, [1].into());
    let s = trs.sig.term("f(x, y)").unwrap();
    let t = trs.sig.term("g(x, y)").unwrap();
    let u = trs.sig.term("g(y, x)").unwrap();
    assert!(equiv(&params.prec, &s, &u));
    let mut pop = Pop::new(&params);
    assert!(pop.eqs(&s, &t));
    assert!(!pop.eqs(&s, &u));
    assert!(!pop.gpop(&s, &s));
}

#[test]
fn safe_argument_is_not_accessible_to_gsq() {
    let mut trs = parse_trs("(VAR x)(RULES f(x) -> x)").unwrap();
    let f = sym(&trs, "f");
    let mut params = OrderParams {
        guard: [f].into(),
        ..OrderParams::default()
    };
    params.safe.safe.insert(f, [0].into());
    let s = trs.sig.term("f(x)").unwrap();
    let x = trs.sig.term("x").unwrap();
    let mut pop = Pop::new(&params);
    assert!(!pop.gsq(&s, &x));
    assert!(pop.gpop(&s, &x));
}

#[test]
fn admissibility() {
    let trs = parse_trs(BIN).unwrap();
    let prec: Precedence = [(sym(&trs, "0"), 3), (sym(&trs, "half"), 1)]
        .into_iter()
        .collect();
    assert!(!is_admissible(
        &prec,
        &trs.defined,
        &trs.symbols().collect()
    ));
    assert!(is_admissible(
        &Precedence::default(),
        &BTreeSet::new(),
        &BTreeSet::new()
    ));
}
