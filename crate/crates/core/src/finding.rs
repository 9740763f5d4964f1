use std::fmt;

use crate::family::Family;
use crate::setcore::ExactCount;

/// What went wrong in a [`Finding`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FindingKind {
    /// A constructed family is not Sperner.
    NotSperner,
    /// A constructed family is not maximal.
    NotMaximal,
    /// A constructed family is not of type `(k,k+1)`.
    WrongType,
    /// The completion does not contain its fragment.
    FragmentMissing,
    /// Two parts of a completion share a member.
    PartsOverlap,
    /// `r_max` of a completion differs from `C(n-1,k)`.
    RMaxMismatch {
        expected: ExactCount,
        actual: ExactCount,
    },
    /// Recovering the fragment from its completion gave something else.
    RoundTripFailed,
    /// Two distinct fragments were completed to the same family.
    DuplicateImage,
    /// `|F|` outside `[C(n-1,k), C(n,k+1)]`.
    SizeBound {
        size: usize,
        lower: ExactCount,
        upper: ExactCount,
    },
    /// `r_i > C(n-1,k)` at element `index` (zero-based).
    RBound {
        index: usize,
        r: ExactCount,
        bound: ExactCount,
    },
    /// Layered and naive maximality disagree.
    CriterionDisagreement { layered: bool, naive: bool },
}

/// A counterexample to an asserted property, carrying the offending family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub kind: FindingKind,
    pub family: Family,
}

impl Finding {
    pub fn new(kind: FindingKind, family: Family) -> Self {
        Finding { kind, family }
    }
}

impl fmt::Display for FindingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FindingKind::NotSperner => f.write_str("not-sperner"),
            FindingKind::NotMaximal => f.write_str("not-maximal"),
            FindingKind::WrongType => f.write_str("wrong-type"),
            FindingKind::FragmentMissing => f.write_str("fragment-missing"),
            FindingKind::PartsOverlap => f.write_str("parts-overlap"),
            FindingKind::RMaxMismatch { expected, actual } => {
                write!(f, "r-max-mismatch expected={expected} actual={actual}")
            }
            FindingKind::RoundTripFailed => f.write_str("round-trip-failed"),
            FindingKind::DuplicateImage => f.write_str("duplicate-image"),
            FindingKind::SizeBound { size, lower, upper } => {
                write!(f, "size-bound size={size} lower={lower} upper={upper}")
            }
            FindingKind::RBound { index, r, bound } => {
                write!(f, "r-bound i={} r={r} bound={bound}", index + 1)
            }
            FindingKind::CriterionDisagreement { layered, naive } => {
                write!(f, "criterion-disagreement layered={layered} naive={naive}")
            }
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FINDING {} n={} family={}",
            self.kind,
            self.family.n(),
            self.family.inline(",")
        )
    }
}
