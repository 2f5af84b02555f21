#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;

use popcert_core::orders::{MulOrd, OrderParams};
use popcert_core::popseq::Seq;
use popcert_core::synth::{FilterSpace, ObligationSet};
use popcert_core::trs::{parse_trs, Signature, Sym, SymbolKind, Term, Trs, Var};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn load(name: &str) -> Trs {
    let path = corpus_dir().join(format!("{name}.trs"));
    parse_trs(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

/// Every corpus system, sorted by name.
pub fn corpus() -> Vec<(String, Trs)> {
    let mut names: Vec<String> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .filter_map(|e| {
            let p = e.unwrap().path();
            (p.extension()? == "trs").then(|| p.file_stem().unwrap().to_string_lossy().into_owned())
        })
        .collect();
    names.sort();
    names.into_iter().map(|n| (n.clone(), load(&n))).collect()
}

pub struct RandomSig {
    pub sig: Signature,
    /// `(symbol, arity)`, at least one constant first.
    pub syms: Vec<(Sym, usize)>,
    pub vars: Vec<Var>,
}

pub fn random_signature(rng: &mut impl Rng, max_syms: usize, max_arity: usize) -> RandomSig {
    let mut sig = Signature::new();
    let n = rng.gen_range(2..=max_syms);
    let mut syms = Vec::new();
    for i in 0..n {
        let arity = if i == 0 {
            0
        } else {
            rng.gen_range(0..=max_arity)
        };
        let f = sig
            .intern(&format!("f{i}"), arity, SymbolKind::Constructor)
            .unwrap();
        syms.push((f, arity));
    }
    let vars = vec![sig.intern_var("x"), sig.intern_var("y")];
    RandomSig { sig, syms, vars }
}

pub fn random_term(rng: &mut impl Rng, rs: &RandomSig, depth: usize, with_vars: bool) -> Term {
    let leaf = depth <= 1;
    if with_vars && rng.gen_bool(if leaf { 0.4 } else { 0.15 }) {
        return Term::Var(*rs.vars.choose(rng).unwrap());
    }
    let pool: Vec<&(Sym, usize)> = if leaf {
        rs.syms.iter().filter(|s| s.1 == 0).collect()
    } else {
        rs.syms.iter().collect()
    };
    let &(f, n) = *pool.choose(rng).unwrap();
    Term::app(
        f,
        (0..n)
            .map(|_| random_term(rng, rs, depth - 1, with_vars))
            .collect(),
    )
}

/// Ranks in `0..3`, a random guard, random safe sets and no filtering.
pub fn random_params(rng: &mut impl Rng, rs: &RandomSig) -> OrderParams {
    let mut p = OrderParams::default();
    for &(f, n) in &rs.syms {
        p.prec.rank.insert(f, rng.gen_range(0..3));
        if rng.gen_bool(0.5) {
            p.guard.insert(f);
        }
        let safe: BTreeSet<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if !safe.is_empty() {
            p.safe.safe.insert(f, safe);
        }
    }
    p
}

/// Effective safe positions: every position of an unguarded symbol is safe.
fn safe_set(p: &OrderParams, f: Sym, arity: usize) -> BTreeSet<usize> {
    (0..arity).filter(|&i| p.is_safe(f, i)).collect()
}

/// A term equivalent to `t`: heads are swapped for equal-rank symbols of the
/// same arity (and the same guard status and safe positions when
/// `respect_safe`, as an admissible precedence guarantees), arguments
/// are permuted (within the safe and normal positions when `respect_safe`).
pub fn perturb(
    rng: &mut impl Rng,
    rs: &RandomSig,
    p: &OrderParams,
    t: &Term,
    respect_safe: bool,
) -> Term {
    let Term::App(f, args) = t else {
        return t.clone();
    };
    let candidates: Vec<Sym> = rs
        .syms
        .iter()
        .filter(|&&(g, n)| {
            n == args.len()
                && p.prec.equiv(*f, g)
                && (!respect_safe
                    || (p.is_guarded(*f) == p.is_guarded(g)
                        && safe_set(p, *f, n) == safe_set(p, g, n)))
        })
        .map(|s| s.0)
        .collect();
    let g = *candidates.choose(rng).unwrap_or(f);
    let mut args: Vec<Term> = args
        .iter()
        .map(|a| perturb(rng, rs, p, a, respect_safe))
        .collect();
    if respect_safe {
        let safe = safe_set(p, *f, args.len());
        for part in [
            (0..args.len())
                .filter(|i| safe.contains(i))
                .collect::<Vec<_>>(),
            (0..args.len()).filter(|i| !safe.contains(i)).collect(),
        ] {
            let mut shuffled = part.clone();
            shuffled.shuffle(rng);
            let old = args.clone();
            for (&i, &j) in part.iter().zip(&shuffled) {
                args[i] = old[j].clone();
            }
        }
    } else {
        args.shuffle(rng);
    }
    Term::app(g, args)
}

pub fn random_seq(rng: &mut impl Rng, rs: &RandomSig, depth: usize) -> Seq {
    let choice = if depth <= 1 {
        rng.gen_range(0..3)
    } else {
        rng.gen_range(0..6)
    };
    match choice {
        0 => Seq::Dot,
        1 => Seq::Var(*rs.vars.choose(rng).unwrap()),
        2 => Seq::func(rs.syms.choose(rng).unwrap().0, vec![]),
        3 | 4 => {
            let n = rng.gen_range(1..=3);
            Seq::func(
                rs.syms.choose(rng).unwrap().0,
                (0..n).map(|_| random_seq(rng, rs, depth - 1)).collect(),
            )
        }
        _ => {
            let n = rng.gen_range(0..=3);
            Seq::list((0..n).map(|_| random_seq(rng, rs, depth - 1)).collect())
        }
    }
}

/// A random proper subsequence-ish descendant of `s`, so that accepted pairs
/// are common.
pub fn shrink_seq(rng: &mut impl Rng, s: &Seq) -> Seq {
    let args = s.args();
    if args.is_empty() || rng.gen_bool(0.2) {
        return Seq::Dot;
    }
    let a = args.choose(rng).unwrap();
    if rng.gen_bool(0.5) {
        a.clone()
    } else {
        let mut kept = Vec::new();
        for b in args {
            if rng.gen_bool(0.6) {
                kept.push(shrink_seq(rng, b));
            }
        }
        Seq::list(kept)
    }
}

/// `M >mul N` by enumeration: `M = X ⊎ M'`, `N = Y ⊎ N'` with `M' ≈ N'`
/// under some bijection, `X` non-empty, every `y ∈ Y` below some `x ∈ X`.
pub fn brute_multiset(
    m: &[u8],
    n: &[u8],
    gt: impl Fn(u8, u8) -> bool,
    eq: impl Fn(u8, u8) -> bool,
) -> MulOrd {
    let matched = |a: &[u8], b: &[u8]| {
        a.len() == b.len()
            && b.iter()
                .permutations(b.len())
                .any(|p| a.iter().zip(p).all(|(&x, &y)| eq(x, y)))
    };
    let strict = (1..1u32 << m.len()).any(|xmask| {
        (0..1u32 << n.len()).any(|ymask| {
            let pick = |v: &[u8], mask: u32, inside: bool| -> Vec<u8> {
                v.iter()
                    .enumerate()
                    .filter(|(i, _)| (mask >> i & 1 == 1) == inside)
                    .map(|(_, &x)| x)
                    .collect()
            };
            let (x, rest_m) = (pick(m, xmask, true), pick(m, xmask, false));
            let (y, rest_n) = (pick(n, ymask, true), pick(n, ymask, false));
            y.iter().all(|&b| x.iter().any(|&a| gt(a, b))) && matched(&rest_m, &rest_n)
        })
    });
    if strict {
        MulOrd::Strict
    } else if matched(m, n) {
        MulOrd::Equiv
    } else {
        MulOrd::Incomparable
    }
}

/// A random obligation set over at most six symbols and at most eight
/// pairs, with at most three guarded symbols of arity at most two.
pub fn random_obligation_set(rng: &mut impl Rng) -> (RandomSig, ObligationSet) {
    let rs = random_signature(rng, 6, 2);
    let mut guard = BTreeSet::new();
    for &(f, n) in &rs.syms {
        if n > 0 && guard.len() < 3 && rng.gen_bool(0.6) {
            guard.insert(f);
        }
    }
    let pairs = rng.gen_range(1..=8);
    let mut strict = Vec::new();
    let mut weak = Vec::new();
    for _ in 0..pairs {
        let depth = rng.gen_range(2..=3);
        let lhs = random_term(rng, &rs, depth, true);
        let lhs = if lhs.is_var() {
            random_term(rng, &rs, 2, false)
        } else {
            lhs
        };
        let depth = rng.gen_range(1..=3);
        let rhs = random_term(rng, &rs, depth, true);
        // keep rhs variables within the lhs variables
        let lv: BTreeSet<Var> = lhs.vars().into_iter().collect();
        let rhs = rhs.map_vars(&mut |v| {
            if lv.contains(&v) {
                Term::Var(v)
            } else {
                random_term(rng, &rs, 1, false)
            }
        });
        if rng.gen_bool(0.5) {
            strict.push((lhs, rhs));
        } else {
            weak.push((lhs, rhs));
        }
    }
    let filters = if rng.gen_bool(0.5) {
        FilterSpace::Identity
    } else {
        FilterSpace::Restricted
    };
    let obls = ObligationSet::new(strict, weak, guard, BTreeSet::new(), filters);
    (rs, obls)
}
