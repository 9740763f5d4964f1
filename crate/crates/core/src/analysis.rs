//! Sperner, type and maximality predicates, and the per-element parameters
//! `p_i`, `q_i`, `r_i`.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::setcore::{binomial, ExactCount, GroundSize, LayerIter, Subset, SubsetIndex};

/// Largest `n` accepted by [`is_maximal_naive`], which scans all `2^n` subsets.
pub const NAIVE_MAX_GROUND: usize = 20;

/// A family whose members all have cardinality `k` or `k + 1`, with
/// `1 <= k <= n - 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypedFamily {
    family: Family,
    k: usize,
}

impl TypedFamily {
    pub fn new(family: Family, k: usize) -> Result<Self> {
        let n = family.n();
        if k < 1 || k + 2 > n {
            return Err(Error::usage(format!(
                "type parameter k={k} outside 1..=n-2 for n={n}"
            )));
        }
        if let Some(bad) = family.iter().find(|s| s.len() != k && s.len() != k + 1) {
            return Err(Error::usage(format!(
                "member {} has cardinality {}, not in {{{k},{}}}",
                bad.to_bit_string(family.ground()),
                bad.len(),
                k + 1
            )));
        }
        Ok(TypedFamily { family, k })
    }

    pub(crate) fn new_unchecked(family: Family, k: usize) -> Self {
        debug_assert!(TypedFamily::new(family.clone(), k).is_ok());
        TypedFamily { family, k }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn into_family(self) -> Family {
        self.family
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.family.n()
    }

    pub fn ground(&self) -> GroundSize {
        self.family.ground()
    }

    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }

    /// `F^(k)`.
    pub fn lower(&self) -> impl Iterator<Item = Subset> + '_ {
        self.family.layer(self.k)
    }

    /// `F^(k+1)`.
    pub fn upper(&self) -> impl Iterator<Item = Subset> + '_ {
        self.family.layer(self.k + 1)
    }
}

/// True iff no member is contained in a distinct member.
pub fn is_sperner(family: &Family) -> bool {
    let cards = family.cardinalities();
    if cards.len() <= 1 {
        return true;
    }
    let index = SubsetIndex::new(family.ground(), family.iter().copied());
    for (i, &small) in cards.iter().enumerate() {
        for &large in &cards[i + 1..] {
            let ok = if large == small + 1 {
                // A (c+1)-set contains a c-member iff one of its c-subsets is a member.
                family
                    .layer(large)
                    .all(|t| t.elements().all(|j| !index.contains(t.without(j))))
            } else {
                family
                    .layer(small)
                    .all(|a| family.layer(large).all(|b| !a.is_subset_of(b)))
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Infers the type parameter `k`.
///
/// When all members share one cardinality `c`, both `k = c` and `k = c - 1`
/// fit; `k = c` is preferred when `c <= n - 2`. Returns `None` when the
/// cardinalities are not one or two adjacent values, or no legal `k` exists.
pub fn classify_type(family: &Family) -> Result<Option<TypedFamily>> {
    if family.is_empty() {
        return Err(Error::usage("cannot classify the type of an empty family"));
    }
    let n = family.n();
    let legal = |k: usize| k >= 1 && k + 2 <= n;
    let k = match family.cardinalities()[..] {
        [c] if legal(c) => Some(c),
        [c] if c >= 1 && legal(c - 1) => Some(c - 1),
        [c, d] if d == c + 1 && legal(c) => Some(c),
        _ => None,
    };
    Ok(k.map(|k| TypedFamily::new_unchecked(family.clone(), k)))
}

/// Definition-level maximality: every subset of `S` outside the family is
/// comparable with some member. Scans all `2^n` subsets.
pub fn is_maximal_naive(typed: &TypedFamily) -> Result<bool> {
    naive_maximal_scan(typed.family())
}

pub(crate) fn naive_maximal_scan(family: &Family) -> Result<bool> {
    let n = family.n();
    if n > NAIVE_MAX_GROUND {
        return Err(Error::capability(format!(
            "naive maximality scans 2^n subsets and is limited to n <= {NAIVE_MAX_GROUND} \
             (got n={n}); use is_maximal"
        )));
    }
    let members = family.members();
    let index = SubsetIndex::new(family.ground(), members.iter().copied());
    Ok((0..1u64 << n)
        .map(Subset::from_bits)
        .all(|x| index.contains(x) || members.iter().any(|&m| x.is_comparable(m))))
}

/// Layered maximality for a Sperner type-`(k,k+1)` family:
/// (a) every `k`-set outside `F^(k)` lies inside some member of `F^(k+1)`;
/// (b) every `(k+1)`-set outside `F^(k+1)` contains some member of `F^(k)`.
///
/// Agrees with [`is_maximal_naive`] on every Sperner typed family.
pub fn is_maximal(typed: &TypedFamily) -> bool {
    let ground = typed.ground();
    let n = ground.get();
    let k = typed.k();
    let index = SubsetIndex::new(ground, typed.family().iter().copied());

    let covered_above = LayerIter::new(n, k).all(|s| {
        index.contains(s)
            || s.complement_elements(ground)
                .any(|j| index.contains(s.with(j)))
    });
    covered_above
        && LayerIter::new(n, k + 1)
            .all(|t| index.contains(t) || t.elements().any(|j| index.contains(t.without(j))))
}

/// Per-element counts for a typed family, indexed by zero-based element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamReport {
    /// `p_i`: members of `F^(k)` avoiding `a_i`.
    pub p: Vec<ExactCount>,
    /// `q_i`: members of `F^(k+1)` containing `a_i`.
    pub q: Vec<ExactCount>,
    /// `r_i = p_i + q_i`.
    pub r: Vec<ExactCount>,
    pub r_max: ExactCount,
}

impl ParamReport {
    /// Zero-based indices `i` with `r_i = r_max`.
    pub fn argmax(&self) -> Vec<usize> {
        (0..self.r.len())
            .filter(|&i| self.r[i] == self.r_max)
            .collect()
    }
}

pub fn compute_params(typed: &TypedFamily) -> ParamReport {
    let n = typed.n();
    let mut p = vec![0u64; n];
    let mut q = vec![0u64; n];
    for s in typed.lower() {
        for i in s.complement_elements(typed.ground()) {
            p[i] += 1;
        }
    }
    for t in typed.upper() {
        for i in t.elements() {
            q[i] += 1;
        }
    }
    let r: Vec<u64> = p.iter().zip(&q).map(|(a, b)| a + b).collect();
    let r_max = r.iter().copied().max().unwrap_or(0);
    let big = |v: Vec<u64>| v.into_iter().map(BigUint::from).collect::<Vec<_>>();
    ParamReport {
        p: big(p),
        q: big(q),
        r: big(r),
        r_max: BigUint::from(r_max),
    }
}

/// Checks `r_i <= C(n-1, k)` for every element. Requires `n >= 3`.
pub fn check_r_bound(typed: &TypedFamily) -> Result<bool> {
    Ok(r_bound_excess(typed)?.is_empty())
}

/// Elements (zero-based) whose `r_i` exceeds `C(n-1, k)`, with their `r_i`.
pub fn r_bound_excess(typed: &TypedFamily) -> Result<Vec<(usize, ExactCount)>> {
    let n = typed.n();
    if n < 3 {
        return Err(Error::usage(format!("r-bound requires n >= 3, got n={n}")));
    }
    let bound = binomial(n as u64 - 1, typed.k() as i64);
    let report = compute_params(typed);
    Ok(report
        .r
        .into_iter()
        .enumerate()
        .filter(|(_, r)| *r > bound)
        .collect())
}
