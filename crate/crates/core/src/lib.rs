//! Maximal Sperner families of type `(k,k+1)` over a small ordered ground set.
//!
//! * [`setcore`]: subsets as bit words, exact binomials.
//! * [`family`]: canonical families and their text format.
//! * [`analysis`]: Sperner, type and maximality predicates; `p_i`, `q_i`, `r_i`.
//! * [`completion`]: fragment completion and its inverse.
//! * [`enumeration`]: exhaustive oracles and the verification passes.
//! * [`asymmetry`]: the prefix family and the cipher/decipher size table.
//!
//! Element indices are zero-based in the API (`a1` is index 0) and one-based
//! in text files and messages.

pub mod analysis;
pub mod asymmetry;
pub mod completion;
pub mod enumeration;
mod error;
pub mod family;
mod finding;
pub mod sampling;
pub mod setcore;

pub use analysis::{
    check_r_bound, classify_type, compute_params, is_maximal, is_maximal_naive, is_sperner,
    ParamReport, TypedFamily,
};
pub use asymmetry::{
    asymmetry_report, build_decipher, decide_membership, enumerate_prefix_family, AsymmetryReport,
    AsymmetryRow, DecipherFragment, PrefixFamilySpec,
};
pub use completion::{
    complete_fragment, recover_fragment, strip_pivot, verify_injectivity, CompletionResult,
    Fragment,
};
pub use enumeration::{
    enumerate_fragments, enumerate_msf, verify_theorem1, verify_theorem2, EnumMode, EnumTask,
    FragmentAudit, Limits, VerificationReport,
};
pub use error::{Error, Result};
pub use family::Family;
pub use finding::{Finding, FindingKind};
pub use setcore::{binomial, is_subset_of, subset_from_string, ExactCount, GroundSize, Subset};
