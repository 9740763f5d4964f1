//! Exhaustive enumeration of maximal Sperner families of type `(k,k+1)` and
//! of admissible fragments, plus the verification passes built on them.
//!
//! A maximal type-`(k,k+1)` family is determined by its `k`-layer `K`: the
//! `(k+1)`-layer is forced to be every `(k+1)`-set containing no member of
//! `K`, and the family is maximal iff every `k`-set outside `K` lies in one of
//! those. The search walks the `k`-sets in canonical order deciding
//! membership, tracks which `(k+1)`-sets are still unblocked, and prunes a
//! branch as soon as an excluded `k`-set loses its last unblocked superset.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::analysis::{
    classify_type, is_maximal, is_maximal_naive, is_sperner, r_bound_excess, TypedFamily,
};
use crate::completion::{complete_fragment, recover_fragment, Fragment};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::finding::{Finding, FindingKind};
use crate::setcore::{binomial, binomial_u64, ExactCount, GroundSize, Subset};

/// Default cap on `C(n,k) + C(n,k+1)` for family enumeration.
pub const DEFAULT_LAYER_LIMIT: u64 = 40;
/// Default cap on `C(n-1,k)` for fragment enumeration.
pub const DEFAULT_FRAGMENT_LIMIT: u64 = 20;
/// Hard cap on `C(n-1,k)` regardless of overrides (fragment masks are `u64`).
const FRAGMENT_HARD_LIMIT: u64 = 63;

/// Search-space guards.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub layer_total: u64,
    pub fragment_layer: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            layer_total: DEFAULT_LAYER_LIMIT,
            fragment_layer: DEFAULT_FRAGMENT_LIMIT,
        }
    }
}

impl Limits {
    /// No guard beyond what the representation can handle.
    pub fn unbounded() -> Self {
        Limits {
            layer_total: u64::MAX,
            fragment_layer: FRAGMENT_HARD_LIMIT,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumMode {
    Families,
    /// Zero-based pivot.
    Fragments {
        pivot: usize,
    },
}

/// What to enumerate; `1 <= k <= floor(n/2)` and `k <= n - 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumTask {
    n: GroundSize,
    k: usize,
    mode: EnumMode,
}

impl EnumTask {
    pub fn families(n: usize, k: usize) -> Result<Self> {
        EnumTask::new(n, k, EnumMode::Families)
    }

    /// `pivot` is zero-based.
    pub fn fragments(n: usize, k: usize, pivot: usize) -> Result<Self> {
        if pivot >= n {
            return Err(Error::usage(format!(
                "pivot a{} outside 1..={n}",
                pivot + 1
            )));
        }
        EnumTask::new(n, k, EnumMode::Fragments { pivot })
    }

    fn new(n: usize, k: usize, mode: EnumMode) -> Result<Self> {
        let ground = GroundSize::new(n)?;
        if k < 1 || k > n / 2 || k + 2 > n {
            return Err(Error::usage(format!(
                "no valid type (k,k+1) for n={n}, k={k}: need 1 <= k <= min(floor(n/2), n-2)"
            )));
        }
        Ok(EnumTask { n: ground, k, mode })
    }

    pub fn n(&self) -> usize {
        self.n.get()
    }

    pub fn ground(&self) -> GroundSize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mode(&self) -> EnumMode {
        self.mode
    }
}

/// Enumerates every maximal Sperner family of type `(k,k+1)` over `S`,
/// visiting each once in lexicographic order of its canonical rendering.
/// Returns the number of families.
pub fn enumerate_msf<V>(task: &EnumTask, limits: &Limits, mut visit: V) -> Result<u64>
where
    V: FnMut(&TypedFamily),
{
    let families = collect_msf(task, limits)?;
    for f in &families {
        visit(f);
    }
    Ok(families.len() as u64)
}

/// All maximal families of a task, sorted canonically.
pub fn collect_msf(task: &EnumTask, limits: &Limits) -> Result<Vec<TypedFamily>> {
    if task.mode != EnumMode::Families {
        return Err(Error::usage("enumerate_msf needs a families-mode task"));
    }
    let (n, k) = (task.n(), task.k());
    let lower_count = binomial_u64(n, k).unwrap_or(u64::MAX);
    let upper_count = binomial_u64(n, k + 1).unwrap_or(u64::MAX);
    let total = lower_count.saturating_add(upper_count);
    if total > limits.layer_total {
        return Err(Error::capability(format!(
            "search space C({n},{k})+C({n},{})={total} exceeds limit {}",
            k + 1,
            limits.layer_total
        )));
    }

    let mut search = LayerSearch::new(task.ground(), k);
    search.run(0);
    let mut families = search.found;
    families.sort_unstable();
    Ok(families
        .into_iter()
        .map(|f| TypedFamily::new_unchecked(f, k))
        .collect())
}

struct LayerSearch {
    ground: GroundSize,
    lower: Vec<Subset>,
    upper: Vec<Subset>,
    /// For each lower set, indices of upper sets containing it.
    supersets: Vec<Vec<usize>>,
    /// For each upper set, indices of lower sets it contains.
    subsets: Vec<Vec<usize>>,
    /// `Some(true)` included, `Some(false)` excluded, `None` undecided.
    decision: Vec<Option<bool>>,
    /// Included lower sets below each upper set.
    blockers: Vec<u32>,
    /// Unblocked upper sets above each lower set.
    free_above: Vec<u32>,
    found: Vec<Family>,
}

impl LayerSearch {
    fn new(ground: GroundSize, k: usize) -> Self {
        let lower = ground.layer(k);
        let upper = ground.layer(k + 1);
        let position = |layer: &[Subset], s: Subset| layer.binary_search(&s).expect("layer member");
        let supersets: Vec<Vec<usize>> = lower
            .iter()
            .map(|s| {
                s.complement_elements(ground)
                    .map(|j| position(&upper, s.with(j)))
                    .collect()
            })
            .collect();
        let subsets: Vec<Vec<usize>> = upper
            .iter()
            .map(|t| {
                t.elements()
                    .map(|j| position(&lower, t.without(j)))
                    .collect()
            })
            .collect();
        let free_above = supersets.iter().map(|v| v.len() as u32).collect();
        LayerSearch {
            ground,
            decision: vec![None; lower.len()],
            blockers: vec![0; upper.len()],
            free_above,
            lower,
            upper,
            supersets,
            subsets,
            found: Vec::new(),
        }
    }

    fn run(&mut self, i: usize) {
        if i == self.lower.len() {
            self.emit();
            return;
        }
        // Exclude: the set must stay inside some unblocked (k+1)-set.
        if self.free_above[i] > 0 {
            self.decision[i] = Some(false);
            self.run(i + 1);
        }
        // Include: blocks every (k+1)-set above it.
        self.decision[i] = Some(true);
        if self.include(i) {
            self.run(i + 1);
        }
        self.retract(i);
        self.decision[i] = None;
    }

    /// Adds lower set `i`; false if some excluded set lost its last cover.
    fn include(&mut self, i: usize) -> bool {
        let mut ok = true;
        for idx in 0..self.supersets[i].len() {
            let u = self.supersets[i][idx];
            self.blockers[u] += 1;
            if self.blockers[u] == 1 {
                for &l in &self.subsets[u] {
                    self.free_above[l] -= 1;
                    if self.free_above[l] == 0 && self.decision[l] == Some(false) {
                        ok = false;
                    }
                }
            }
        }
        ok
    }

    fn retract(&mut self, i: usize) {
        for idx in 0..self.supersets[i].len() {
            let u = self.supersets[i][idx];
            self.blockers[u] -= 1;
            if self.blockers[u] == 0 {
                for &l in &self.subsets[u] {
                    self.free_above[l] += 1;
                }
            }
        }
    }

    fn emit(&mut self) {
        let lower = self
            .lower
            .iter()
            .zip(&self.decision)
            .filter(|(_, d)| **d == Some(true))
            .map(|(s, _)| *s);
        let upper = self
            .upper
            .iter()
            .zip(&self.blockers)
            .filter(|(_, b)| **b == 0)
            .map(|(t, _)| *t);
        let family = Family::new(self.ground, lower.chain(upper)).expect("layers fit");
        self.found.push(family);
    }
}

/// The `(k+1)`-sets containing the pivot, canonically ordered.
fn pivot_layer(task: &EnumTask, pivot: usize) -> Vec<Subset> {
    task.ground()
        .layer(task.k() + 1)
        .into_iter()
        .filter(|s| s.contains(pivot))
        .collect()
}

/// Enumerates every nonempty family of `(k+1)`-sets containing the pivot,
/// in increasing order of the selection mask over the canonically ordered
/// pivot layer. Returns `2^C(n-1,k) - 1`.
pub fn enumerate_fragments<V>(task: &EnumTask, limits: &Limits, mut visit: V) -> Result<u64>
where
    V: FnMut(&Fragment),
{
    let (pivot, layer) = fragment_layer(task, limits)?;
    let total = 1u64 << layer.len();
    for mask in 1..total {
        visit(&fragment_from_mask(task, &layer, pivot, mask));
    }
    Ok(total - 1)
}

fn fragment_layer(task: &EnumTask, limits: &Limits) -> Result<(usize, Vec<Subset>)> {
    let EnumMode::Fragments { pivot } = task.mode else {
        return Err(Error::usage(
            "enumerate_fragments needs a fragments-mode task",
        ));
    };
    let (n, k) = (task.n(), task.k());
    let width = binomial_u64(n - 1, k).unwrap_or(u64::MAX);
    let limit = limits.fragment_layer.min(FRAGMENT_HARD_LIMIT);
    if width > limit {
        return Err(Error::capability(format!(
            "fragment layer C({},{k})={width} exceeds limit {limit}",
            n - 1
        )));
    }
    Ok((pivot, pivot_layer(task, pivot)))
}

fn fragment_from_mask(task: &EnumTask, layer: &[Subset], pivot: usize, mask: u64) -> Fragment {
    let members = Subset::from_bits(mask)
        .elements()
        .map(|i| layer[i])
        .collect::<Vec<_>>();
    let family = Family::new(task.ground(), members).expect("layer members fit");
    Fragment::new(family, pivot).expect("pivot layer subsets are fragments")
}

/// Outcome of checking the size bounds and related claims on every maximal
/// family of one task.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub task: EnumTask,
    pub total: ExactCount,
    pub min_size: ExactCount,
    pub max_size: ExactCount,
    /// `C(n-1,k)`.
    pub bound_lower: ExactCount,
    /// `C(n,k+1)`.
    pub bound_upper: ExactCount,
    /// Families outside `[bound_lower, bound_upper]`.
    pub violations: Vec<Finding>,
    /// Families with some `r_i > C(n-1,k)`.
    pub r_bound_findings: Vec<Finding>,
    /// Families where the layered and naive maximality tests disagree, or
    /// that fail Sperner or type checks.
    pub consistency_findings: Vec<Finding>,
}

impl VerificationReport {
    pub fn finding_count(&self) -> usize {
        self.violations.len() + self.r_bound_findings.len() + self.consistency_findings.len()
    }

    pub fn is_clean(&self) -> bool {
        self.finding_count() == 0
    }

    /// One summary line, then one line per finding.
    pub fn render(&self) -> String {
        let mut out = format!(
            "n={} k={} families={} min_size={} max_size={} bound_lower={} bound_upper={} \
             violations={} r_bound_findings={} consistency_findings={}\n",
            self.task.n(),
            self.task.k(),
            self.total,
            self.min_size,
            self.max_size,
            self.bound_lower,
            self.bound_upper,
            self.violations.len(),
            self.r_bound_findings.len(),
            self.consistency_findings.len(),
        );
        for f in self
            .violations
            .iter()
            .chain(&self.r_bound_findings)
            .chain(&self.consistency_findings)
        {
            out.push_str(&f.to_string());
            out.push('\n');
        }
        out
    }
}

struct FamilyCheck {
    size: usize,
    bounds: Vec<Finding>,
    r_bound: Vec<Finding>,
    consistency: Vec<Finding>,
}

/// Checks `C(n-1,k) <= |F| <= C(n,k+1)`, the `r_i` bound, and agreement of
/// the two maximality tests on every maximal family of type `(k,k+1)`.
pub fn verify_theorem1(task: &EnumTask, limits: &Limits) -> Result<VerificationReport> {
    let families = collect_msf(task, limits)?;
    let (n, k) = (task.n(), task.k());
    let bound_lower = binomial(n as u64 - 1, k as i64);
    let bound_upper = binomial(n as u64, k as i64 + 1);

    let checked: Vec<FamilyCheck> = families
        .par_iter()
        .map(|typed| {
            let family = typed.family();
            let size = BigUint::from(typed.len());
            let mut bounds = Vec::new();
            if size < bound_lower || size > bound_upper {
                bounds.push(Finding::new(
                    FindingKind::SizeBound {
                        size: typed.len(),
                        lower: bound_lower.clone(),
                        upper: bound_upper.clone(),
                    },
                    family.clone(),
                ));
            }
            let mut r_bound = Vec::new();
            let bound = bound_lower.clone();
            for (index, r) in r_bound_excess(typed).expect("n >= 3 for every task") {
                r_bound.push(Finding::new(
                    FindingKind::RBound {
                        index,
                        r,
                        bound: bound.clone(),
                    },
                    family.clone(),
                ));
            }
            let mut consistency = Vec::new();
            let layered = is_maximal(typed);
            let naive =
                is_maximal_naive(typed).expect("enumeration sizes are far below the naive cap");
            if !(layered && naive) {
                consistency.push(Finding::new(
                    FindingKind::CriterionDisagreement { layered, naive },
                    family.clone(),
                ));
            }
            if !is_sperner(family) {
                consistency.push(Finding::new(FindingKind::NotSperner, family.clone()));
            }
            // A uniform (k+1)-layer may classify as k+1 under the tie rule.
            let typed_ok = classify_type(family)
                .ok()
                .flatten()
                .is_some_and(|t| t.k() == k || t.k() == k + 1);
            if !typed_ok {
                consistency.push(Finding::new(FindingKind::WrongType, family.clone()));
            }
            FamilyCheck {
                size: typed.len(),
                bounds,
                r_bound,
                consistency,
            }
        })
        .collect();

    let min_size = checked.iter().map(|c| c.size).min().unwrap_or(0);
    let max_size = checked.iter().map(|c| c.size).max().unwrap_or(0);
    let mut report = VerificationReport {
        task: *task,
        total: BigUint::from(families.len()),
        min_size: BigUint::from(min_size),
        max_size: BigUint::from(max_size),
        bound_lower,
        bound_upper,
        violations: Vec::new(),
        r_bound_findings: Vec::new(),
        consistency_findings: Vec::new(),
    };
    for c in checked {
        report.violations.extend(c.bounds);
        report.r_bound_findings.extend(c.r_bound);
        report.consistency_findings.extend(c.consistency);
    }
    Ok(report)
}

/// Outcome of completing every fragment at one `(n, k, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FragmentAudit {
    pub task: EnumTask,
    pub fragments: u64,
    pub completions: u64,
    pub distinct: u64,
    pub round_trips: u64,
    pub findings: Vec<Finding>,
}

impl FragmentAudit {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "fragments={} completions={} distinct={} findings={}\n",
            self.fragments,
            self.completions,
            self.distinct,
            self.findings.len()
        );
        for f in &self.findings {
            out.push_str(&f.to_string());
            out.push('\n');
        }
        out
    }
}

/// Completes every fragment of the task, checks each completion's
/// postconditions and round trip, and checks the images are pairwise
/// distinct.
pub fn verify_theorem2(task: &EnumTask, limits: &Limits) -> Result<FragmentAudit> {
    let (pivot, layer) = fragment_layer(task, limits)?;
    let total = 1u64 << layer.len();

    let results: Vec<(Fragment, Family, Vec<Finding>, bool)> = (1..total)
        .into_par_iter()
        .map(|mask| {
            let frag = fragment_from_mask(task, &layer, pivot, mask);
            let result = complete_fragment(&frag);
            let mut findings = result.findings.clone();
            let round_trip =
                matches!(recover_fragment(&result.union, pivot), Ok(ref back) if *back == frag);
            if !round_trip {
                findings.push(Finding::new(
                    FindingKind::RoundTripFailed,
                    result.union.family().clone(),
                ));
            }
            (frag, result.union.into_family(), findings, round_trip)
        })
        .collect();

    let mut findings = Vec::new();
    let mut round_trips = 0;
    let mut images: Vec<&Family> = Vec::with_capacity(results.len());
    for (_, image, f, ok) in &results {
        findings.extend(f.iter().cloned());
        round_trips += u64::from(*ok);
        images.push(image);
    }
    images.sort_unstable();
    let mut distinct = images.len() as u64;
    for w in images.windows(2) {
        if w[0] == w[1] {
            distinct -= 1;
            findings.push(Finding::new(FindingKind::DuplicateImage, w[0].clone()));
        }
    }

    Ok(FragmentAudit {
        task: *task,
        fragments: total - 1,
        completions: results.len() as u64,
        distinct,
        round_trips,
        findings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: usize, s: &[&str]) -> Family {
        Family::from_bit_strings(n, s).unwrap()
    }

    #[test]
    fn task_validation() {
        assert!(matches!(EnumTask::families(2, 1), Err(Error::Usage(_))));
        assert!(EnumTask::families(3, 1).is_ok());
        assert!(EnumTask::families(3, 2).is_err());
        assert!(EnumTask::families(4, 2).is_ok());
        assert!(EnumTask::families(5, 3).is_err());
        assert!(EnumTask::families(5, 0).is_err());
        assert!(EnumTask::fragments(3, 1, 3).is_err());
    }

    #[test]
    fn n3_census() {
        let task = EnumTask::families(3, 1).unwrap();
        let mut seen = Vec::new();
        let count =
            enumerate_msf(&task, &Limits::default(), |f| seen.push(f.family().clone())).unwrap();
        assert_eq!(count, 5);
        let mut expected = vec![
            fam(3, &["100", "010", "001"]),
            fam(3, &["110", "101", "011"]),
            fam(3, &["110", "001"]),
            fam(3, &["101", "010"]),
            fam(3, &["011", "100"]),
        ];
        expected.sort();
        assert_eq!(seen, expected);
    }

    #[test]
    fn visit_order_is_rendering_order() {
        let task = EnumTask::families(4, 1).unwrap();
        let mut renders = Vec::new();
        enumerate_msf(&task, &Limits::default(), |f| {
            renders.push(f.family().render())
        })
        .unwrap();
        let mut sorted = renders.clone();
        sorted.sort();
        assert_eq!(renders, sorted);
    }

    #[test]
    fn layer_guard() {
        let task = EnumTask::families(7, 3).unwrap();
        assert!(matches!(
            enumerate_msf(&task, &Limits::default(), |_| {}),
            Err(Error::Capability(_))
        ));
        let frag_task = EnumTask::families(3, 1).unwrap();
        assert!(enumerate_fragments(&frag_task, &Limits::default(), |_| {}).is_err());
    }

    #[test]
    fn fragment_counts() {
        let count = |n, k, p| {
            let task = EnumTask::fragments(n, k, p).unwrap();
            enumerate_fragments(&task, &Limits::default(), |_| {}).unwrap()
        };
        assert_eq!(count(3, 1, 0), 3);
        assert_eq!(count(4, 1, 1), 7);
        assert_eq!(count(5, 2, 0), 63);
    }

    #[test]
    fn fragments_n3() {
        let task = EnumTask::fragments(3, 1, 0).unwrap();
        let mut seen = Vec::new();
        enumerate_fragments(&task, &Limits::default(), |f| seen.push(f.family().clone())).unwrap();
        seen.sort();
        let mut expected = vec![fam(3, &["110"]), fam(3, &["101"]), fam(3, &["110", "101"])];
        expected.sort();
        assert_eq!(seen, expected);
    }

    #[test]
    fn fragment_guard() {
        let task = EnumTask::fragments(10, 4, 0).unwrap();
        assert!(matches!(
            enumerate_fragments(&task, &Limits::default(), |_| {}),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn size_bounds_n3() {
        let report =
            verify_theorem1(&EnumTask::families(3, 1).unwrap(), &Limits::default()).unwrap();
        assert_eq!(report.total, BigUint::from(5u32));
        assert_eq!(report.min_size, BigUint::from(2u32));
        assert_eq!(report.max_size, BigUint::from(3u32));
        assert_eq!(report.bound_lower, BigUint::from(2u32));
        assert_eq!(report.bound_upper, BigUint::from(3u32));
        assert!(report.is_clean(), "{}", report.render());
    }

    #[test]
    fn fragment_audit_n3() {
        let audit =
            verify_theorem2(&EnumTask::fragments(3, 1, 0).unwrap(), &Limits::default()).unwrap();
        assert_eq!(
            audit.render(),
            "fragments=3 completions=3 distinct=3 findings=0\n"
        );
        assert_eq!(audit.round_trips, 3);
    }
}
