mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use popcert_core::orders::{equiv, multiset_cmp, MulOrd, Pop};
use popcert_core::pipeline::{analyze, recheck, AnalysisConfig, AnalysisMode, Certificate};
use popcert_core::popseq::gpop_seq;
use popcert_core::sli::{check_compat, interpret, synthesize as synth_sli, SliWeights};
use popcert_core::synth::{search_backtracking, synthesize, SearchLimits, SynthConfig};
use popcert_core::trs::{Rule, Term};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gpop_is_irreflexive_and_contains_gsq(seed: u64) {
        let mut r = rng(seed);
        let rs = random_signature(&mut r, 5, 3);
        let p = random_params(&mut r, &rs);
        let mut pop = Pop::new(&p);
        let s = random_term(&mut r, &rs, 4, true);
        let t = random_term(&mut r, &rs, 4, true);
        prop_assert!(!pop.gpop(&s, &s));
        prop_assert!(!pop.gsq(&s, &s));
        if pop.gsq(&s, &t) {
            prop_assert!(pop.gpop(&s, &t));
        }
        if pop.gpop(&s, &t) {
            prop_assert!(!pop.gpop(&t, &s));
        }
    }

    #[test]
    fn gpop_is_closed_under_equivalence(seed: u64) {
        let mut r = rng(seed);
        let rs = random_signature(&mut r, 5, 3);
        let p = random_params(&mut r, &rs);
        let mut pop = Pop::new(&p);
        let s = random_term(&mut r, &rs, 4, true);
        let t = random_term(&mut r, &rs, 3, true);
        let s2 = perturb(&mut r, &rs, &p, &s, true);
        let t2 = perturb(&mut r, &rs, &p, &t, true);
        prop_assert!(pop.eqs(&s, &s2));
        prop_assert!(equiv(&p.prec, &s, &s2));
        prop_assert_eq!(pop.gpop(&s, &t), pop.gpop(&s2, &t2));
    }

    #[test]
    fn multiset_extension_matches_enumeration(
        m in prop::collection::vec(0u8..6, 0..5),
        n in prop::collection::vec(0u8..6, 0..5),
        classes in 1u8..4,
    ) {
        let gt = |x: u8, y: u8| x / classes > y / classes;
        let eq = |x: u8, y: u8| x / classes == y / classes;
        let fast = multiset_cmp(&m, &n, |&x, &y| gt(x, y), |&x, &y| eq(x, y));
        prop_assert_eq!(fast, brute_multiset(&m, &n, gt, eq));
        if fast == MulOrd::Equiv {
            prop_assert_eq!(m.len(), n.len());
        }
    }

    #[test]
    fn sequence_order_is_monotone_and_bounded(seed: u64, k in 1usize..4) {
        let mut r = rng(seed);
        let rs = random_signature(&mut r, 5, 3);
        let p = random_params(&mut r, &rs);
        let a = random_seq(&mut r, &rs, 4);
        let b = if r.gen_bool(0.7) { shrink_seq(&mut r, &a) } else { random_seq(&mut r, &rs, 3) };
        prop_assert!(!gpop_seq(&a, &a, k, k, &p.prec));
        if gpop_seq(&a, &b, k, k, &p.prec) {
            prop_assert!(b.width() < a.width() + k);
            prop_assert!(gpop_seq(&a, &b, k + 1, k + 1, &p.prec));
        }
    }

    #[test]
    fn sli_is_additive(seed: u64) {
        let mut r = rng(seed);
        let rs = random_signature(&mut r, 5, 3);
        let weights = SliWeights {
            weight: rs.syms.iter().map(|&(f, _)| (f, r.gen_range(0..5))).collect(),
        };
        let t = random_term(&mut r, &rs, 4, true);
        let assignment: BTreeMap<_, _> = rs.vars.iter().map(|&v| (v, r.gen_range(0..20))).collect();
        let expected: u64 = t
            .subterms()
            .into_iter()
            .map(|u| match u {
                Term::Var(v) => assignment[v],
                Term::App(f, _) => weights.weight[f],
            })
            .sum();
        prop_assert_eq!(interpret(&weights, &t, &assignment).unwrap(), expected);
    }

    #[test]
    fn synthesized_sli_orients_every_rule(seed: u64) {
        let mut r = rng(seed);
        let rs = random_signature(&mut r, 5, 2);
        let rules: Vec<Rule> = (0..r.gen_range(1..4))
            .filter_map(|_| {
                let lhs = random_term(&mut r, &rs, 3, true);
                let rhs = random_term(&mut r, &rs, 2, true);
                Rule::new(lhs, rhs).ok()
            })
            .collect();
        if let Some(w) = synth_sli(&rules) {
            prop_assert!(check_compat(&w, &rules));
            for rule in &rules {
                let a: BTreeMap<_, _> = rs.vars.iter().map(|&v| (v, r.gen_range(0..10))).collect();
                let full = SliWeights {
                    weight: rs.syms.iter().map(|&(f, _)| (f, w.weight.get(&f).copied().unwrap_or(0))).collect(),
                };
                prop_assert!(interpret(&full, &rule.lhs, &a).unwrap() > interpret(&full, &rule.rhs, &a).unwrap());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn encoding_agrees_with_search(seed: u64) {
        let mut r = rng(seed);
        let (_, obls) = random_obligation_set(&mut r);
        let limits = SearchLimits::default();
        let Ok(reference) = search_backtracking(&obls, &limits) else {
            return Ok(());
        };
        let found = synthesize(&obls, &SynthConfig::default()).unwrap();
        prop_assert_eq!(found.is_some(), reference.is_some());
        if let Some(p) = found {
            prop_assert!(obls.check(&p).is_ok());
        }
    }
}

#[test]
fn certificates_round_trip_over_the_corpus() {
    for (name, trs) in corpus() {
        for mode in [AnalysisMode::Direct, AnalysisMode::Dp, AnalysisMode::Dg] {
            let cert = analyze(
                &trs,
                &AnalysisConfig {
                    mode,
                    ..AnalysisConfig::default()
                },
            );
            let text = cert.to_text();
            let back = Certificate::parse(&text).unwrap_or_else(|e| panic!("{name} {mode}: {e:?}"));
            assert_eq!(back, cert, "{name} {mode}");
            assert!(recheck(&back, &trs), "{name} {mode}");
        }
    }
}
