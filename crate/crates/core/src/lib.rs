//! Certification of polynomial innermost runtime complexity for term
//! rewrite systems, based on polynomial path orders (POP*) combined with
//! weak innermost dependency pairs.
//!
//! The crate is organised bottom-up:
//!
//! * [`trs`]: terms, parsing, rewriting and the derivation-length oracle;
//! * [`dp`]: dependency pairs, usable rules and the dependency graph;
//! * [`orders`]: POP* and its auxiliary relations as decision procedures;
//! * [`popseq`]: the path order on sequences and predicative interpretations;
//! * [`sli`]: strongly linear interpretations;
//! * [`synth`]: SAT-based and exhaustive search for order parameters;
//! * [`pipeline`]: analysis modes, certificates and checks.

pub mod dp;
pub mod orders;
pub mod pipeline;
pub mod popseq;
pub mod sli;
pub mod synth;
pub mod trs;
