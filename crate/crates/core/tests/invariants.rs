mod common;

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use popcert_core::dp::{
    congruence_paths, estimate_graph, is_non_duplicating, reachable_defined, tpwidp, usable_rules,
    widp,
};
use popcert_core::orders::{equiv, Pop};
use popcert_core::pipeline::{analyze, AnalysisConfig, AnalysisMode, Verdict};
use popcert_core::popseq::{gpop_seq, Interpretation, Seq};
use popcert_core::sli::{check_compat, synthesize as synthesize_sli, SliWeights};
use popcert_core::trs::enumerate::TermSpace;
use popcert_core::trs::{
    derivation_length, innermost_step, is_normal_form, match_term, normal_forms, parse_trs,
    q_restricted_step, Rule, Strategy, Subst, Sym, Term, Trs, DEFAULT_FUEL,
};

fn ground_term(rng: &mut impl Rng, trs: &Trs, depth: usize) -> Term {
    let syms: Vec<Sym> = trs.symbols().collect();
    let pool: Vec<Sym> = if depth <= 1 {
        syms.iter()
            .copied()
            .filter(|&f| trs.sig.arity(f) == 0)
            .collect()
    } else {
        syms
    };
    let f = *pool.choose(rng).unwrap();
    let args = (0..trs.sig.arity(f))
        .map(|_| ground_term(rng, trs, depth - 1))
        .collect();
    Term::app(f, args)
}

fn values_up_to(trs: &Trs, size: usize) -> Vec<Term> {
    let mut space = TermSpace::new(trs, &trs.constructors, size);
    (1..=size).flat_map(|n| space.values(n)).collect()
}

/// Every ground substitution of `vars` drawn from `values`.
fn substitutions(vars: &[popcert_core::trs::Var], values: &[Term]) -> Vec<Subst> {
    let mut out = vec![Subst::new()];
    for &v in vars {
        out = out
            .into_iter()
            .flat_map(|s| {
                values.iter().map(move |t| {
                    let mut s = s.clone();
                    s.insert(v, t.clone());
                    s
                })
            })
            .collect();
    }
    out
}

fn config(mode: AnalysisMode) -> AnalysisConfig {
    AnalysisConfig {
        mode,
        ..AnalysisConfig::default()
    }
}

#[test]
fn render_then_parse_is_stable() {
    for (name, trs) in corpus() {
        let text = trs.render();
        let back = parse_trs(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(back.render(), text, "{name}");
        assert_eq!(back.rules.len(), trs.rules.len(), "{name}");
    }
}

#[test]
fn step_relations_are_nested_and_keep_terms_ground() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, trs) in corpus() {
        for _ in 0..40 {
            let depth = rng.gen_range(1..=4);
            let t = ground_term(&mut rng, &trs, depth);
            let inner: BTreeSet<Term> = innermost_step(&trs, &t).into_iter().collect();
            let restricted: BTreeSet<Term> = q_restricted_step(&trs.rules, &trs.rules, &t)
                .into_iter()
                .collect();
            let free: BTreeSet<Term> = q_restricted_step(&trs.rules, &[], &t).into_iter().collect();
            assert!(inner.is_subset(&restricted), "{name}: {}", trs.sig.show(&t));
            assert!(restricted.is_subset(&free), "{name}");
            assert!(free.iter().all(Term::is_ground), "{name}");
            if trs.is_value(&t) {
                assert_eq!(
                    derivation_length(&trs, &t, &Strategy::Innermost, DEFAULT_FUEL),
                    Ok(0)
                );
            }
        }
    }
}

#[test]
fn measures_follow_their_recurrences() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let rs = random_signature(&mut rng, 5, 3);
        let depth = rng.gen_range(1..=5);
        let t = random_term(&mut rng, &rs, depth, true);
        for u in t.subterms() {
            let args = u.args();
            let n = args.len();
            let wmax = args.iter().map(Term::width).max().unwrap_or(0);
            let bmax = args.iter().map(Term::bnorm).max().unwrap_or(0);
            assert_eq!(u.width(), if n == 0 { 1 } else { n.max(wmax) });
            if !u.is_var() {
                assert_eq!(u.bnorm(), 1 + n.max(bmax));
                assert!(u.bnorm() >= u.depth() && u.depth() >= 1);
            }
        }
    }
}

#[test]
fn one_pair_per_rule_with_marked_lhs() {
    for (name, trs) in corpus() {
        for problem in [widp(&trs), tpwidp(&trs)] {
            assert_eq!(problem.pairs.len(), trs.rules.len(), "{name}");
            for p in &problem.pairs {
                let rule = &trs.rules[p.origin];
                let root = p.lhs.root().unwrap();
                assert!(problem.sig.is_marked(root), "{name}");
                assert_eq!(problem.sig.unmark(root), rule.root());
                assert_eq!(p.lhs.args(), rule.lhs.args());
            }
        }
    }
}

#[test]
fn usable_rules_are_monotone_and_closed() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for (name, trs) in corpus() {
        let problem = widp(&trs);
        let all = usable_rules(&problem.pairs, &trs);
        for _ in 0..10 {
            let subset: Vec<_> = problem
                .pairs
                .iter()
                .filter(|_| rng.gen_bool(0.5))
                .cloned()
                .collect();
            let some: BTreeSet<usize> = usable_rules(&subset, &trs).into_iter().collect();
            assert!(some.iter().all(|i| all.contains(i)), "{name}");
        }
        let start: BTreeSet<Sym> = problem.pairs.iter().flat_map(|p| p.rhs.symbols()).collect();
        let reach = reachable_defined(&trs, start);
        assert_eq!(reachable_defined(&trs, reach.clone()), reach, "{name}");
    }
}

#[test]
fn every_pair_is_a_strict_part() {
    for (name, trs) in corpus() {
        let problem = widp(&trs);
        let paths = congruence_paths(&estimate_graph(&problem, &trs));
        let strict: BTreeSet<usize> = paths
            .iter()
            .flat_map(|p| p.strict_part().to_vec())
            .collect();
        assert_eq!(strict.len(), problem.pairs.len(), "{name}");
        for p in &paths {
            assert!(!p.classes.is_empty());
        }
    }
}

/// A concrete chain step from pair `p` into pair `q` must be an edge.
#[test]
fn estimated_graph_covers_concrete_chains() {
    for (name, trs) in corpus() {
        let values: Vec<Term> = values_up_to(&trs, 3).into_iter().take(8).collect();
        for problem in [widp(&trs), tpwidp(&trs)] {
            let graph = estimate_graph(&problem, &trs);
            for (i, p) in problem.pairs.iter().enumerate() {
                let vars = p.lhs.vars();
                for sigma in substitutions(&vars, &values) {
                    let lhs = p.lhs.apply(&sigma);
                    if !lhs.args().iter().all(|a| is_normal_form(&trs.rules, a)) {
                        continue;
                    }
                    for u in p.components() {
                        let u = u.apply(&sigma);
                        let Ok(nfs) = normal_forms(&trs, &u, &Strategy::Innermost, DEFAULT_FUEL)
                        else {
                            continue;
                        };
                        for (v, _) in nfs {
                            for (j, q) in problem.pairs.iter().enumerate() {
                                if match_term(&q.lhs, &v).is_some() {
                                    assert!(
                                        graph.has_edge(i, j),
                                        "{name}: missing edge {} -> {}",
                                        i + 1,
                                        j + 1
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn type_preserving_pairs_keep_derivation_lengths() {
    for name in ["bin", "plus", "append", "minus", "lt", "exp"] {
        let trs = load(name);
        let plain = widp(&trs);
        let typed = tpwidp(&trs);
        let values: Vec<Term> = values_up_to(&trs, 4);
        for &f in &trs.defined {
            let vars: Vec<_> = (0..trs.sig.arity(f) as u32)
                .map(popcert_core::trs::Var)
                .collect();
            for sigma in substitutions(&vars, &values).into_iter().take(60) {
                let args: Vec<Term> = vars.iter().map(|v| sigma[v].clone()).collect();
                let dl = |problem: &popcert_core::dp::DpProblem| {
                    let marked = problem.sig.marked(f).unwrap();
                    let pairs = problem.rules();
                    derivation_length(
                        &trs,
                        &Term::app(marked, args.clone()),
                        &Strategy::Relative {
                            strict: &pairs,
                            weak: &trs.rules,
                            root_only: false,
                        },
                        DEFAULT_FUEL,
                    )
                };
                assert_eq!(dl(&plain), dl(&typed), "{name}");
            }
        }
    }
}

/// Positions below guarded symbols that only pass through normal arguments.
fn normal_reachable(p: &popcert_core::orders::OrderParams, t: &Term, out: &mut Vec<Term>) {
    if let Term::App(f, args) = t {
        for (i, a) in args.iter().enumerate() {
            if !p.is_guarded(*f) || !p.is_safe(*f, i) {
                out.push(a.clone());
                normal_reachable(p, a, out);
            }
        }
    }
}

#[test]
fn subterm_property_and_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..300 {
        let rs = random_signature(&mut rng, 5, 3);
        let p = random_params(&mut rng, &rs);
        let mut pop = Pop::new(&p);
        let depth = rng.gen_range(2..=4);
        let s = random_term(&mut rng, &rs, depth, true);
        let Term::App(f, _) = &s else { continue };
        if p.is_guarded(*f) {
            let mut below = Vec::new();
            normal_reachable(&p, &s, &mut below);
            for t in below {
                assert!(pop.gsq(&s, &t), "{} / {}", rs.sig.show(&s), rs.sig.show(&t));
                assert!(pop.gpop(&s, &t));
            }
        }
        let is_value = s.symbols().iter().all(|&g| !p.is_guarded(g));
        if is_value {
            let depth = rng.gen_range(1..=3);
            let t = random_term(&mut rng, &rs, depth, true);
            if pop.gpop(&s, &t) {
                assert!(
                    s.subterms()[1..].iter().any(|u| equiv(&p.prec, u, &t)),
                    "{} / {}",
                    rs.sig.show(&s),
                    rs.sig.show(&t)
                );
            }
        }
    }
}

#[test]
fn interpretation_width_is_norm_plus_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let compounds = BTreeSet::new();
    for _ in 0..300 {
        let rs = random_signature(&mut rng, 5, 3);
        let p = random_params(&mut rng, &rs);
        let depth = rng.gen_range(1..=5);
        let t = random_term(&mut rng, &rs, depth, true);
        let n = Interpretation::new(&p, &compounds).pred_n(&t).unwrap();
        assert_eq!(n.width(), t.bnorm() + 1, "{}", rs.sig.show(&t));
    }
}

/// A sequence equivalent to `s`: arguments permuted, heads swapped for
/// equal-rank symbols.
fn perturb_seq(
    rng: &mut impl Rng,
    rs: &RandomSig,
    p: &popcert_core::orders::OrderParams,
    s: &Seq,
) -> Seq {
    match s {
        Seq::Fn(f, args) => {
            let same: Vec<Sym> = rs
                .syms
                .iter()
                .map(|x| x.0)
                .filter(|&g| p.prec.equiv(*f, g))
                .collect();
            let mut args: Vec<Seq> = args.iter().map(|a| perturb_seq(rng, rs, p, a)).collect();
            args.shuffle(rng);
            Seq::func(*same.choose(rng).unwrap_or(f), args)
        }
        Seq::List(args) => {
            let mut args: Vec<Seq> = args.iter().map(|a| perturb_seq(rng, rs, p, a)).collect();
            args.shuffle(rng);
            Seq::list(args)
        }
        other => other.clone(),
    }
}

#[test]
fn sequence_order_is_compatible_with_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mut accepted = 0;
    for _ in 0..600 {
        let rs = random_signature(&mut rng, 5, 3);
        let p = random_params(&mut rng, &rs);
        let a = random_seq(&mut rng, &rs, 4);
        let b = shrink_seq(&mut rng, &a);
        let k = rng.gen_range(1..=3);
        if gpop_seq(&a, &b, k, k, &p.prec) {
            accepted += 1;
            let a2 = perturb_seq(&mut rng, &rs, &p, &a);
            let b2 = perturb_seq(&mut rng, &rs, &p, &b);
            assert!(gpop_seq(&a2, &b, k, k, &p.prec));
            assert!(gpop_seq(&a, &b2, k, k, &p.prec));
        }
    }
    assert!(accepted > 50);
}

#[test]
fn sli_compatibility_is_antitone() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..300 {
        let rs = random_signature(&mut rng, 4, 2);
        let weights = SliWeights {
            weight: rs
                .syms
                .iter()
                .map(|&(f, _)| (f, rng.gen_range(0..4)))
                .collect(),
        };
        let mut rules = Vec::new();
        for _ in 0..4 {
            let lhs = random_term(&mut rng, &rs, 3, true);
            let rhs = random_term(&mut rng, &rs, 2, true);
            if let Ok(r) = Rule::new(lhs, rhs) {
                let before = check_compat(&weights, &rules);
                rules.push(r);
                assert!(before || !check_compat(&weights, &rules));
            }
        }
    }
}

#[test]
fn modes_are_monotone_on_the_corpus() {
    for (name, trs) in corpus() {
        let certified = |mode| analyze(&trs, &config(mode)).verdict == Verdict::Polynomial;
        let (direct, dp, dg) = (
            certified(AnalysisMode::Direct),
            certified(AnalysisMode::Dp),
            certified(AnalysisMode::Dg),
        );
        if dp {
            assert!(dg, "{name}: dp without dg");
        }
        if direct && !dp {
            // a direct proof is only lost to the side conditions of the pair
            // modes: non-duplicating pairs and an SLI for the usable rules
            let problem = widp(&trs);
            let usable: Vec<Rule> = usable_rules(&problem.pairs, &trs)
                .into_iter()
                .map(|i| trs.rules[i].clone())
                .collect();
            assert!(
                !is_non_duplicating(&problem.pairs) || synthesize_sli(&usable).is_none(),
                "{name}: direct without dp"
            );
        }
    }
}
