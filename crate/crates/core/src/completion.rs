//! Completion of an admissible fragment to a maximal Sperner family.
//!
//! For a fragment `F^(k+1)` whose members all contain the pivot `a_i`:
//!
//! * `F  = F^(k+1) \ {a_i}` (pivot removed from every member),
//! * `F1 = {k-sets avoiding a_i} \ F`,
//! * `G' = k-sets containing a_i, incomparable with every fragment member`,
//! * `G  = (k+1)-sets avoiding a_i, incomparable with every member of F1`,
//!
//! and the completion is `F' = F^(k+1) ∪ F1 ∪ G ∪ G'`. It is a maximal
//! Sperner family of type `(k,k+1)` with `r(F') = C(n-1,k)`, and the fragment
//! is recovered from `F'` as its `(k+1)`-members containing `a_i`.
//!
//! All subsets stay over the full ground set; `F` is simply encoded with the
//! pivot bit clear.

use std::collections::HashSet;

use crate::analysis::{compute_params, is_maximal, is_sperner, TypedFamily};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::finding::{Finding, FindingKind};
use crate::setcore::{binomial, GroundSize, LayerIter, Subset, SubsetIndex};

/// Nonempty family of `(k+1)`-sets all containing `a_pivot`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fragment {
    typed: TypedFamily,
    pivot: usize,
}

impl Fragment {
    /// Validates a fragment. `pivot` is zero-based; `k` is one less than the
    /// common member cardinality.
    pub fn new(family: Family, pivot: usize) -> Result<Self> {
        let n = family.n();
        if pivot >= n {
            return Err(Error::usage(format!(
                "pivot a{} outside 1..={n}",
                pivot + 1
            )));
        }
        let cards = family.cardinalities();
        let c = match cards[..] {
            [] => return Err(Error::usage("fragment must be nonempty")),
            [c] => c,
            _ => return Err(Error::usage("fragment members must share one cardinality")),
        };
        if c < 2 || c + 1 > n {
            return Err(Error::usage(format!(
                "fragment member size {c} gives k={} outside 1..=n-2",
                c as isize - 1
            )));
        }
        if let Some(bad) = family.iter().find(|s| !s.contains(pivot)) {
            return Err(Error::usage(format!(
                "member {} misses pivot a{}",
                bad.to_bit_string(family.ground()),
                pivot + 1
            )));
        }
        let typed = TypedFamily::new(family, c - 1)?;
        Ok(Fragment { typed, pivot })
    }

    /// Like [`Fragment::new`] but also checks the member size against `k`.
    pub fn with_k(family: Family, k: usize, pivot: usize) -> Result<Self> {
        let frag = Fragment::new(family, pivot)?;
        if frag.k() != k {
            return Err(Error::usage(format!(
                "fragment members have size {}, expected k+1={}",
                frag.k() + 1,
                k + 1
            )));
        }
        Ok(frag)
    }

    pub fn family(&self) -> &Family {
        self.typed.family()
    }

    pub fn typed(&self) -> &TypedFamily {
        &self.typed
    }

    pub fn k(&self) -> usize {
        self.typed.k()
    }

    pub fn n(&self) -> usize {
        self.typed.n()
    }

    pub fn ground(&self) -> GroundSize {
        self.typed.ground()
    }

    /// Zero-based pivot index.
    pub fn pivot(&self) -> usize {
        self.pivot
    }

    pub fn len(&self) -> usize {
        self.typed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.typed.is_empty()
    }
}

/// The four parts of a completion, their union, and any postcondition
/// failures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletionResult {
    pub fragment_part: Family,
    pub f1_part: Family,
    pub g_part: Family,
    pub gprime_part: Family,
    pub union: TypedFamily,
    pub pivot: usize,
    /// Empty when every postcondition holds.
    pub findings: Vec<Finding>,
}

impl CompletionResult {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }
}

/// Removes the pivot from every fragment member.
pub fn strip_pivot(frag: &Fragment) -> Family {
    let members = frag.family().iter().map(|s| s.without(frag.pivot()));
    Family::new(frag.ground(), members).expect("stripping keeps members inside the ground set")
}

/// One layer of subsets, queried for comparability with arbitrary candidates.
struct Layer<'a> {
    members: &'a [Subset],
    card: usize,
    index: SubsetIndex,
}

impl<'a> Layer<'a> {
    fn new(ground: GroundSize, members: &'a [Subset]) -> Self {
        let card = members.first().map_or(0, |s| s.len());
        debug_assert!(members.iter().all(|s| s.len() == card));
        Layer {
            members,
            card,
            index: SubsetIndex::new(ground, members.iter().copied()),
        }
    }

    /// True iff the candidate is comparable with no member, checking
    /// containment in both directions.
    fn incomparable(&self, c: Subset, ground: GroundSize) -> bool {
        if self.members.is_empty() {
            return true;
        }
        let member_below = if c.len() == self.card + 1 {
            c.elements().any(|j| self.index.contains(c.without(j)))
        } else if c.len() == self.card {
            self.index.contains(c)
        } else if c.len() > self.card {
            self.members.iter().any(|m| m.is_subset_of(c))
        } else {
            false
        };
        let member_above = if c.len() + 1 == self.card {
            c.complement_elements(ground)
                .any(|j| self.index.contains(c.with(j)))
        } else if c.len() == self.card {
            self.index.contains(c)
        } else if c.len() < self.card {
            self.members.iter().any(|m| c.is_subset_of(*m))
        } else {
            false
        };
        !member_below && !member_above
    }
}

/// Builds the completion of `frag` and audits its postconditions.
/// Postcondition failures are reported in `findings`, never as errors.
pub fn complete_fragment(frag: &Fragment) -> CompletionResult {
    let ground = frag.ground();
    let n = ground.get();
    let k = frag.k();
    let pivot = frag.pivot();

    let stripped = SubsetIndex::new(ground, strip_pivot(frag).iter().copied());
    let fragment_layer = Layer::new(ground, frag.family().members());

    let mut f1 = Vec::new();
    let mut gprime = Vec::new();
    for s in LayerIter::new(n, k) {
        if !s.contains(pivot) {
            if !stripped.contains(s) {
                f1.push(s);
            }
        } else if fragment_layer.incomparable(s, ground) {
            gprime.push(s);
        }
    }
    f1.sort_unstable();
    gprime.sort_unstable();

    let f1_layer = Layer::new(ground, &f1);
    let mut g: Vec<Subset> = LayerIter::new(n, k + 1)
        .filter(|t| !t.contains(pivot) && f1_layer.incomparable(*t, ground))
        .collect();
    g.sort_unstable();

    let fragment_part = frag.family().clone();
    let f1_part = Family::from_sorted_unchecked(ground, f1);
    let g_part = Family::from_sorted_unchecked(ground, g);
    let gprime_part = Family::from_sorted_unchecked(ground, gprime);

    let parts = [&fragment_part, &f1_part, &g_part, &gprime_part];
    let total: usize = parts.iter().map(|p| p.len()).sum();
    let union_members = parts.iter().flat_map(|p| p.iter().copied());
    let union_family = Family::new(ground, union_members).expect("parts fit the ground set");

    let mut findings = Vec::new();
    if union_family.len() != total {
        findings.push(Finding::new(
            FindingKind::PartsOverlap,
            union_family.clone(),
        ));
    }
    // All parts are k- or (k+1)-sets by construction; a type failure would
    // mean the constructor itself is wrong.
    let union = match TypedFamily::new(union_family.clone(), k) {
        Ok(t) => t,
        Err(_) => {
            findings.push(Finding::new(FindingKind::WrongType, union_family.clone()));
            TypedFamily::new_unchecked(union_family.clone(), k)
        }
    };
    if !fragment_part.iter().all(|s| union_family.contains(*s)) {
        findings.push(Finding::new(
            FindingKind::FragmentMissing,
            union_family.clone(),
        ));
    }
    let sperner = is_sperner(&union_family);
    if !sperner {
        findings.push(Finding::new(FindingKind::NotSperner, union_family.clone()));
    }
    if sperner && !is_maximal(&union) {
        findings.push(Finding::new(FindingKind::NotMaximal, union_family.clone()));
    }
    let expected = binomial(n as u64 - 1, k as i64);
    let actual = compute_params(&union).r_max;
    if actual != expected {
        findings.push(Finding::new(
            FindingKind::RMaxMismatch { expected, actual },
            union_family,
        ));
    }

    CompletionResult {
        fragment_part,
        f1_part,
        g_part,
        gprime_part,
        union,
        pivot,
        findings,
    }
}

/// Inverse of the completion map at a fixed pivot: the `(k+1)`-members
/// containing `a_pivot`.
pub fn recover_fragment(completed: &TypedFamily, pivot: usize) -> Result<Fragment> {
    if pivot >= completed.n() {
        return Err(Error::usage(format!(
            "pivot a{} outside 1..={}",
            pivot + 1,
            completed.n()
        )));
    }
    let members: Vec<Subset> = completed.upper().filter(|s| s.contains(pivot)).collect();
    if members.is_empty() {
        return Err(Error::OutsideImage { pivot });
    }
    let family = Family::from_sorted_unchecked(completed.ground(), members);
    Fragment::with_k(family, completed.k(), pivot)
}

/// True iff distinct fragments have pairwise distinct completions and every
/// completion round-trips through [`recover_fragment`]. Repeated inputs are
/// collapsed first. All fragments must share `n`, `k` and pivot.
pub fn verify_injectivity(fragments: &[Fragment]) -> Result<bool> {
    let Some(first) = fragments.first() else {
        return Ok(true);
    };
    let key = (first.n(), first.k(), first.pivot());
    if fragments.iter().any(|f| (f.n(), f.k(), f.pivot()) != key) {
        return Err(Error::usage("fragments must share n, k and pivot"));
    }
    let mut distinct: Vec<&Fragment> = fragments.iter().collect();
    distinct.sort();
    distinct.dedup();

    let mut images = HashSet::with_capacity(distinct.len());
    for frag in distinct {
        let result = complete_fragment(frag);
        match recover_fragment(&result.union, frag.pivot()) {
            Ok(back) if &back == frag => {}
            _ => return Ok(false),
        }
        if !images.insert(result.union.into_family()) {
            return Ok(false);
        }
    }
    Ok(true)
}
