//! Kleisli simulations, forward partial execution and infinite-trace oracles
//! for finite nondeterministic, probabilistic and exception-raising tree
//! automata.

pub mod corpus;
pub mod error;
pub mod exec;
pub mod fpe;
pub mod kleisli;
pub mod random;
pub mod semantics;
pub mod signature;
pub mod simulation;
pub mod space;
pub mod systems;
pub mod value;

pub use error::{Error, Result};
pub use exec::Exec;
pub use fpe::{apply_fpe, bwd_adequacy_preconditions, fwd_adequacy_witness};
pub use kleisli::{compose, leq, lift_f, meet_decreasing, violations, KleisliArrow, Monad, Rows};
pub use semantics::{
    cylinder_prob, lift_inclusion_upto, lift_output, render_tree, live_states, prefix_lang, prob_inclusion_upto, skeleton,
    subdist_tree_prob, survival, tree_inclusion_upto, word_inclusion_exact, BranchingProcess,
    CylinderOracle, InclusionReport, InclusionWitness, LiftOutput, Start, Survival, Verdict,
};
pub use signature::{
    enumerate_fterms, is_prefix, parse_tree, prefix_trees, FTerm, Node, PrefixTree,
    RankedAlphabet, Symbol,
};
pub use simulation::{
    check_bwd, check_fwd, check_restrictions, find_bwd_bruteforce, find_fwd_rel, parse_witness,
    witness_to_json, witness_to_string, CheckReport, Direction, RestrictionFlags, SimWitness,
    Violation,
};
pub use space::Space;
pub use systems::{
    parse_system, serialize_system, system_from_json, system_to_string, validate_system,
    Diagnostic, System,
};
pub use value::{format_weight, parse_weight, ratio, Mode, Prob, Valuation, Weight};
