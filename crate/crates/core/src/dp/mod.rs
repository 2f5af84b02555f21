//! Weak innermost dependency pairs, usable rules and the estimated
//! dependency graph.

pub mod graph;
pub mod pairs;
pub mod usable;

pub use graph::{
    congruence_paths, estimate_graph, nontrivial_sccs, sccs, to_dot, CongruencePath,
    DependencyGraph,
};
pub use pairs::{decompose, is_non_duplicating, tpwidp, widp, DependencyPair, DpProblem};
pub use usable::{reachable_defined, usable_rules};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trs::parse_trs;

    const BIN: &str = "(VAR x)
(RULES
  half(0) -> 0
  half(s(0)) -> 0
  half(s(s(x))) -> s(half(x))
  bits(0) -> 0
  bits(s(0)) -> s(0)
  bits(s(s(x))) -> s(bits(s(half(x))))
)";

    #[test]
    fn bin_pairs() {
        let trs = parse_trs(BIN).unwrap();
        let p = widp(&trs);
        let shown: Vec<String> = (0..6).map(|i| p.pair_display(i)).collect();
        assert_eq!(
            shown,
            [
                "half#(0) -> c_1",
                "half#(s(0)) -> c_2",
                "half#(s(s(x))) -> half#(x)",
                "bits#(0) -> c_3",
                "bits#(s(0)) -> c_4",
                "bits#(s(s(x))) -> bits#(s(half(x)))",
            ]
        );
        assert!(is_non_duplicating(&p.pairs));
        assert_eq!(usable_rules(&p.pairs, &trs), vec![0, 1, 2]);
    }

    #[test]
    fn bin_graph() {
        let trs = parse_trs(BIN).unwrap();
        let p = widp(&trs);
        let g = estimate_graph(&p, &trs);
        let edges: Vec<(usize, usize)> = g.edges.iter().map(|&(a, b)| (a + 7, b + 7)).collect();
        assert_eq!(edges, [(9, 7), (9, 8), (9, 9), (12, 11), (12, 12)]);
        assert_eq!(nontrivial_sccs(&g), vec![vec![2], vec![5]]);
        let paths = congruence_paths(&g);
        let strict: Vec<&[usize]> = paths.iter().map(|p| p.strict_part()).collect();
        for i in 0..6 {
            assert!(strict.contains(&&[i][..]));
        }
        assert_eq!(paths.len(), 6);
    }

    #[test]
    fn tp_pairs_store_contexts() {
        let trs = parse_trs(BIN).unwrap();
        let p = tpwidp(&trs);
        assert_eq!(p.pair_display(2), "half#(s(s(x))) -> c_3(half#(x))");
        let ctx = p.pairs[2].context.as_ref().unwrap();
        assert_eq!(p.sig.show(ctx).to_string(), "s(_hole)");
    }

    #[test]
    fn cap_abstracts_defined_calls() {
        let trs = parse_trs("(VAR x)(RULES f(x) -> f(g(x)) g(x) -> x)").unwrap();
        let p = widp(&trs);
        let g = estimate_graph(&p, &trs);
        assert!(g.has_edge(0, 0));
    }

    #[test]
    fn paths_of_small_graphs() {
        let g = DependencyGraph {
            nodes: 3,
            edges: Default::default(),
        };
        assert_eq!(congruence_paths(&g).len(), 3);
        let g = DependencyGraph {
            nodes: 2,
            edges: [(0, 1), (1, 0)].into_iter().collect(),
        };
        assert_eq!(
            congruence_paths(&g),
            vec![CongruencePath {
                classes: vec![vec![0, 1]]
            }]
        );
        let g = DependencyGraph {
            nodes: 3,
            edges: (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).collect(),
        };
        assert_eq!(sccs(&g), vec![vec![0, 1, 2]]);
    }
}
