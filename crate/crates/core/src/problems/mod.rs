//! Concrete enumeration problems: CNF formulas, flashlight AllSAT, the padded
//! instance family and explicit-set generators.

pub mod cnf;
pub mod explicit;
pub mod flashlight;
pub mod pad;

pub use cnf::{
    brute_force_models, emit_dimacs, index_to_bits, parse_dimacs, Assignment, CnfFormula,
    DimacsError,
};
pub use explicit::{explicit_generator, ExplicitGenerator, ExplicitSet};
pub use flashlight::{BruteForceOracle, ExtensionOracle, FlashlightAllSat, OracleCharge};
pub use pad::{ceil_pow2, BruteForceSat, PadEnumerator, PaddedInstance, Ratio, SatSolver};

/// Default hard cap on the number of variables of brute-forced instances.
pub const DEFAULT_MAX_VARS: usize = 24;

/// Environment variable overriding [`DEFAULT_MAX_VARS`] in the command-line tool.
pub const MAX_VARS_ENV: &str = "ENUMDELAY_MAX_VARS";
