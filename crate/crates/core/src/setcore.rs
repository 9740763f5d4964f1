//! Ground set, subset and exact-count primitives.
//!
//! Elements of the ordered ground set `S = (a1, ..., an)` are addressed by
//! zero-based index: element `a_j` is index `j - 1`. A [`Subset`] is a single
//! machine word with bit `j - 1` set iff `a_j` belongs to it, so `n` is capped
//! at 64.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision non-negative count. Family sizes and binomials are
/// always carried in this type so results never depend on word width.
pub type ExactCount = BigUint;

/// Largest supported ground set.
pub const MAX_GROUND: usize = 64;

/// Number of elements `n` of the ground set, `2 <= n <= 64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundSize(u8);

impl GroundSize {
    pub fn new(n: usize) -> Result<Self> {
        if !(2..=MAX_GROUND).contains(&n) {
            return Err(Error::usage(format!(
                "ground size n={n} outside supported range 2..=64"
            )));
        }
        Ok(GroundSize(n as u8))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0 as usize
    }

    /// Mask with the low `n` bits set.
    #[inline]
    pub fn full_mask(self) -> u64 {
        if self.0 as usize == MAX_GROUND {
            u64::MAX
        } else {
            (1u64 << self.0) - 1
        }
    }

    /// All subsets of cardinality `k`, in canonical order.
    pub fn layer(self, k: usize) -> Vec<Subset> {
        let mut out: Vec<Subset> = LayerIter::new(self.get(), k).collect();
        out.sort_unstable();
        out
    }
}

impl fmt::Display for GroundSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A subset of the ground set as a bit word.
///
/// Ordering is canonical: the bit string `sigma_1 ... sigma_n` read as a
/// binary number with `a1` most significant. Because unused high bits are
/// zero, comparing bit-reversed words gives that order for every `n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Self {
        Subset(elements.into_iter().fold(0, |acc, i| acc | (1u64 << i)))
    }

    /// Parses a `'0'/'1'` string of length `n`; the leftmost character is `a1`.
    pub fn from_bit_string(s: &str, n: GroundSize) -> Result<Self> {
        if s.len() != n.get() {
            return Err(Error::format(
                None,
                format!("bit string {s:?} has length {}, expected n={}", s.len(), n),
            ));
        }
        let mut bits = 0u64;
        for (j, c) in s.bytes().enumerate() {
            match c {
                b'1' => bits |= 1 << j,
                b'0' => {}
                _ => {
                    return Err(Error::format(
                        None,
                        format!("illegal character {:?} in bit string", c as char),
                    ))
                }
            }
        }
        Ok(Subset(bits))
    }

    /// Renders as a bit string of length `n`.
    pub fn to_bit_string(self, n: GroundSize) -> String {
        (0..n.get())
            .map(|j| if self.contains(j) { '1' } else { '0' })
            .collect()
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn with(self, i: usize) -> Self {
        Subset(self.0 | 1 << i)
    }

    #[inline]
    pub fn without(self, i: usize) -> Self {
        Subset(self.0 & !(1 << i))
    }

    /// Cardinality.
    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// `self ⊆ other` (equality allowed).
    #[inline]
    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    /// True iff one of the two contains the other.
    #[inline]
    pub fn is_comparable(self, other: Subset) -> bool {
        self.is_subset_of(other) || other.is_subset_of(self)
    }

    #[inline]
    pub fn fits(self, n: GroundSize) -> bool {
        self.0 & !n.full_mask() == 0
    }

    /// Member indices in increasing order.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        })
    }

    /// Indices in `0..n` not in the subset.
    pub fn complement_elements(self, n: GroundSize) -> impl Iterator<Item = usize> {
        Subset(!self.0 & n.full_mask()).elements()
    }

    /// Image under the element relabeling `i -> perm[i]`.
    pub fn permute(self, perm: &[usize]) -> Self {
        Subset::from_elements(self.elements().map(|i| perm[i]))
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.reverse_bits().cmp(&other.0.reverse_bits())
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.elements().map(|i| i + 1))
            .finish()
    }
}

/// Parses a bit string over `n` elements.
pub fn subset_from_string(s: &str, n: GroundSize) -> Result<Subset> {
    Subset::from_bit_string(s, n)
}

pub fn is_subset_of(a: Subset, b: Subset) -> bool {
    a.is_subset_of(b)
}

/// Exact `C(n, k)`; zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> ExactCount {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc = C(n, i) here; C(n, i+1) = C(n, i) * (n - i) / (i + 1) exactly.
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Machine-word binomial for internal sizing; `None` on overflow.
pub(crate) fn binomial_u64(n: usize, k: usize) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Iterates all `k`-subsets of an `n`-set in increasing bit-word order
/// (Gosper's hack). Not canonical order; sort if that matters.
#[derive(Clone, Debug)]
pub struct LayerIter {
    next: Option<u64>,
    limit_mask: u64,
}

impl LayerIter {
    pub fn new(n: usize, k: usize) -> Self {
        assert!(n <= MAX_GROUND);
        let next = if k > n {
            None
        } else if k == 64 {
            Some(u64::MAX)
        } else {
            Some((1u64 << k) - 1)
        };
        let limit_mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        LayerIter { next, limit_mask }
    }
}

impl Iterator for LayerIter {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            let low = cur & cur.wrapping_neg();
            let (ripple, overflow) = cur.overflowing_add(low);
            if overflow || ripple == 0 {
                None
            } else {
                let ones = ((cur ^ ripple) >> 2) / low;
                let nxt = ripple | ones;
                (nxt & !self.limit_mask == 0).then_some(nxt)
            }
        };
        Some(Subset(cur))
    }
}

/// Membership index over subsets of one ground set: a dense bitmap for
/// small `n`, a hash set otherwise.
#[derive(Clone, Debug)]
pub(crate) enum SubsetIndex {
    Dense(Vec<u64>),
    Sparse(HashSet<u64>),
}

const DENSE_LIMIT: usize = 20;

impl SubsetIndex {
    pub(crate) fn new<I: IntoIterator<Item = Subset>>(n: GroundSize, members: I) -> Self {
        let mut index = if n.get() <= DENSE_LIMIT {
            SubsetIndex::Dense(vec![0; (1usize << n.get()).div_ceil(64)])
        } else {
            SubsetIndex::Sparse(HashSet::new())
        };
        for s in members {
            index.insert(s);
        }
        index
    }

    pub(crate) fn insert(&mut self, s: Subset) {
        match self {
            SubsetIndex::Dense(words) => {
                let b = s.0 as usize;
                words[b / 64] |= 1 << (b % 64);
            }
            SubsetIndex::Sparse(set) => {
                set.insert(s.0);
            }
        }
    }

    #[inline]
    pub(crate) fn contains(&self, s: Subset) -> bool {
        match self {
            SubsetIndex::Dense(words) => {
                let b = s.0 as usize;
                words[b / 64] >> (b % 64) & 1 == 1
            }
            SubsetIndex::Sparse(set) => set.contains(&s.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize) -> GroundSize {
        GroundSize::new(n).unwrap()
    }

    fn s(bits: &str) -> Subset {
        Subset::from_bit_string(bits, g(bits.len())).unwrap()
    }

    #[test]
    fn ground_size_range() {
        assert!(GroundSize::new(1).is_err());
        assert!(GroundSize::new(65).is_err());
        assert_eq!(g(64).full_mask(), u64::MAX);
        assert_eq!(g(3).full_mask(), 0b111);
    }

    #[test]
    fn parse_examples() {
        let a = subset_from_string("110", g(3)).unwrap();
        assert_eq!(a, Subset::from_elements([0, 1]));
        assert_eq!(subset_from_string("000", g(3)).unwrap(), Subset::EMPTY);
        assert!(matches!(
            subset_from_string("1011", g(3)),
            Err(Error::Format { .. })
        ));
        assert!(matches!(
            subset_from_string("1x1", g(3)),
            Err(Error::Format { .. })
        ));
    }

    #[test]
    fn inclusion_examples() {
        assert!(is_subset_of(s("100"), s("110")));
        assert!(!is_subset_of(s("110"), s("101")));
        assert!(is_subset_of(s("110"), s("110")));
    }

    #[test]
    fn canonical_order_is_bit_string_order() {
        let n = g(4);
        let mut all: Vec<Subset> = (0..16).map(Subset::from_bits).collect();
        all.sort();
        let strings: Vec<String> = all.iter().map(|x| x.to_bit_string(n)).collect();
        let mut sorted = strings.clone();
        sorted.sort();
        assert_eq!(strings, sorted);
        assert_eq!(strings[0], "0000");
        assert_eq!(strings[1], "0001");
        assert_eq!(strings[15], "1111");
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(3, 2), BigUint::from(3u32));
        assert_eq!(binomial(2, 1), BigUint::from(2u32));
        assert_eq!(binomial(10, 5), BigUint::from(252u32));
        assert_eq!(binomial(4, -1), BigUint::zero());
        assert_eq!(binomial(4, 5), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::one());
    }

    #[test]
    fn layer_iter_counts() {
        for n in 2..=10 {
            for k in 0..=n {
                let layer: Vec<Subset> = LayerIter::new(n, k).collect();
                assert_eq!(layer.len() as u64, binomial_u64(n, k).unwrap());
                assert!(layer.iter().all(|x| x.len() == k && x.fits(g(n))));
            }
        }
        assert_eq!(LayerIter::new(64, 64).count(), 1);
        assert_eq!(LayerIter::new(64, 63).count(), 64);
        assert_eq!(LayerIter::new(64, 0).count(), 1);
    }

    #[test]
    fn index_dense_and_sparse_agree() {
        let members = [s("1100"), s("0011")];
        let dense = SubsetIndex::new(g(4), members);
        let wide = GroundSize::new(30).unwrap();
        let sparse = SubsetIndex::new(wide, members);
        for b in 0..16 {
            let x = Subset::from_bits(b);
            assert_eq!(dense.contains(x), sparse.contains(x));
        }
    }
}
