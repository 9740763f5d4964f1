//! The prefix family and the cipher/decipher size contrast.
//!
//! For odd `n` and a constant `l`, the prefix family holds every
//! `ceil(n/2)`-subset containing `a1, ..., a_m` with `m = ceil(n/2) - l`. It
//! has `C(floor(n/2) + l, l)` members, a polynomial of degree `l` in `n`, and
//! membership is a single mask test. Completing a member (as a one-set
//! fragment at pivot `a1`) gives a maximal Sperner family with at least
//! `C(n-1, (n-1)/2)` members.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::completion::{complete_fragment, CompletionResult, Fragment};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::finding::Finding;
use crate::setcore::{binomial, binomial_u64, ExactCount, GroundSize, LayerIter, Subset};

/// Largest `n` for which [`asymmetry_report`] will build completions.
pub const MAX_CONSTRUCT: usize = 25;
/// Largest prefix family [`enumerate_prefix_family`] will materialize.
pub const PREFIX_FAMILY_LIMIT: u64 = 1 << 24;

/// Parameters of a prefix family: odd `n >= 3` and `0 <= l <= ceil(n/2) - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrefixFamilySpec {
    n: GroundSize,
    l: usize,
    prefix_mask: u64,
}

impl PrefixFamilySpec {
    pub fn new(n: usize, l: usize) -> Result<Self> {
        let ground = GroundSize::new(n)?;
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::usage(format!(
                "prefix family needs odd n >= 3, got n={n}"
            )));
        }
        let half = n.div_ceil(2);
        if l >= half {
            return Err(Error::usage(format!(
                "l={l} leaves an empty prefix for n={n}; need l <= {}",
                half - 1
            )));
        }
        let m = half - l;
        Ok(PrefixFamilySpec {
            n: ground,
            l,
            prefix_mask: (1u64 << m) - 1,
        })
    }

    pub fn n(&self) -> usize {
        self.n.get()
    }

    pub fn ground(&self) -> GroundSize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// `ceil(n/2)`.
    pub fn member_size(&self) -> usize {
        self.n().div_ceil(2)
    }

    /// `m = ceil(n/2) - l`.
    pub fn prefix_len(&self) -> usize {
        self.member_size() - self.l
    }

    pub fn prefix(&self) -> Subset {
        Subset::from_bits(self.prefix_mask)
    }

    /// `C(floor(n/2) + l, l)`.
    pub fn family_size(&self) -> ExactCount {
        binomial((self.n() / 2 + self.l) as u64, self.l as i64)
    }
}

/// Constant-time membership test: `|A| = ceil(n/2)` and the prefix is in `A`.
#[inline]
pub fn decide_membership(a: Subset, spec: &PrefixFamilySpec) -> bool {
    a.fits(spec.n)
        && a.len() == spec.member_size()
        && a.bits() & spec.prefix_mask == spec.prefix_mask
}

/// Materializes the prefix family in canonical order.
pub fn enumerate_prefix_family(spec: &PrefixFamilySpec) -> Result<Family> {
    let n = spec.n();
    let m = spec.prefix_len();
    let free = n - m;
    let size = binomial_u64(free, spec.l).unwrap_or(u64::MAX);
    if size > PREFIX_FAMILY_LIMIT {
        return Err(Error::capability(format!(
            "prefix family has {size} members, limit {PREFIX_FAMILY_LIMIT}"
        )));
    }
    // Choose l of the elements after the prefix.
    let members = LayerIter::new(free, spec.l)
        .map(|tail| Subset::from_bits(spec.prefix_mask | tail.bits() << m));
    Family::new(spec.ground(), members)
}

/// Which fragment to complete for a cipher `A`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DecipherFragment {
    /// The one-set fragment `{A}`.
    #[default]
    Singleton,
    /// The whole prefix family.
    PrefixFamily,
}

/// Completes a cipher to its maximal Sperner family, with pivot `a1` and
/// `k = ceil(n/2) - 1`.
pub fn build_decipher(
    a: Subset,
    spec: &PrefixFamilySpec,
    choice: DecipherFragment,
) -> Result<CompletionResult> {
    if !decide_membership(a, spec) {
        return Err(Error::usage(format!(
            "{} is not in the prefix family for n={}, l={}",
            a.to_bit_string(spec.ground()),
            spec.n(),
            spec.l()
        )));
    }
    let family = match choice {
        DecipherFragment::Singleton => Family::new(spec.ground(), [a])?,
        DecipherFragment::PrefixFamily => enumerate_prefix_family(spec)?,
    };
    let frag = Fragment::with_k(family, spec.member_size() - 1, 0)?;
    Ok(complete_fragment(&frag))
}

/// One odd `n` of the size contrast.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymmetryRow {
    pub n: usize,
    /// Size of the prefix family.
    pub cipher_size: ExactCount,
    /// `C(n-1, (n-1)/2)`.
    pub decipher_lower_bound: ExactCount,
    /// `|F'|` when the completion was built.
    pub decipher_size: Option<ExactCount>,
    /// Postcondition failures of the built completion, if any.
    pub findings: Vec<Finding>,
}

impl AsymmetryRow {
    /// `decipher_lower_bound / cipher_size`.
    pub fn ratio(&self) -> f64 {
        let num = self.decipher_lower_bound.to_f64().unwrap_or(f64::INFINITY);
        let den = self.cipher_size.to_f64().unwrap_or(f64::INFINITY);
        num / den
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymmetryReport {
    pub l: usize,
    pub rows: Vec<AsymmetryRow>,
    /// Even values in the requested range, which have no prefix family.
    pub skipped_even: Vec<usize>,
}

impl AsymmetryReport {
    pub fn findings(&self) -> impl Iterator<Item = &Finding> {
        self.rows.iter().flat_map(|r| r.findings.iter())
    }

    /// True iff every built decipher meets the lower bound, no completion
    /// reported a finding, and the ratio increases strictly with `n`.
    pub fn is_clean(&self) -> bool {
        let bounded = self.rows.iter().all(|r| {
            r.decipher_size
                .as_ref()
                .is_none_or(|d| *d >= r.decipher_lower_bound)
        });
        let increasing = self.rows.windows(2).all(|w| {
            // cross-multiplied: lb1 / c1 > lb0 / c0
            &w[1].decipher_lower_bound * &w[0].cipher_size
                > &w[0].decipher_lower_bound * &w[1].cipher_size
        });
        bounded && increasing && self.findings().next().is_none()
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::from("n,cipher_size,decipher_lower_bound,decipher_size,ratio\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{:.4}",
                r.n,
                r.cipher_size,
                r.decipher_lower_bound,
                r.decipher_size
                    .as_ref()
                    .map(|d| d.to_string())
                    .unwrap_or_default(),
                r.ratio()
            );
        }
        out
    }

    pub fn render_text(&self) -> String {
        let header = [
            "n",
            "cipher_size",
            "decipher_lower_bound",
            "decipher_size",
            "ratio",
        ];
        let cells: Vec<[String; 5]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.n.to_string(),
                    r.cipher_size.to_string(),
                    r.decipher_lower_bound.to_string(),
                    r.decipher_size
                        .as_ref()
                        .map_or_else(|| "-".into(), |d| d.to_string()),
                    format!("{:.4}", r.ratio()),
                ]
            })
            .collect();
        let mut widths = header.map(str::len);
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let mut out = format!("# l={}\n", self.l);
        let line = |cols: Vec<&str>| {
            cols.iter()
                .zip(widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        out.push_str(&line(header.to_vec()));
        out.push('\n');
        for row in &cells {
            out.push_str(&line(row.iter().map(String::as_str).collect()));
            out.push('\n');
        }
        for f in self.findings() {
            out.push_str(&f.to_string());
            out.push('\n');
        }
        out
    }
}

/// Builds one row per odd `n` in `n_min..=n_max`; completions are built for
/// `n <= construct_up_to`, from the first member of the prefix family in
/// canonical order.
pub fn asymmetry_report(
    l: usize,
    n_min: usize,
    n_max: usize,
    construct_up_to: usize,
    choice: DecipherFragment,
) -> Result<AsymmetryReport> {
    if construct_up_to > MAX_CONSTRUCT {
        return Err(Error::capability(format!(
            "construct_up_to={construct_up_to} exceeds limit {MAX_CONSTRUCT}"
        )));
    }
    if n_min > n_max {
        return Err(Error::usage(format!("empty range n={n_min}..={n_max}")));
    }
    let (odd, even): (Vec<usize>, Vec<usize>) = (n_min..=n_max).partition(|n| n % 2 == 1);
    let specs = odd
        .iter()
        .map(|&n| PrefixFamilySpec::new(n, l))
        .collect::<Result<Vec<_>>>()?;

    let rows = specs
        .par_iter()
        .map(|spec| -> Result<AsymmetryRow> {
            let n = spec.n();
            let mut row = AsymmetryRow {
                n,
                cipher_size: spec.family_size(),
                decipher_lower_bound: binomial(n as u64 - 1, ((n - 1) / 2) as i64),
                decipher_size: None,
                findings: Vec::new(),
            };
            if n <= construct_up_to {
                let first = enumerate_prefix_family(spec)?.members()[0];
                let result = build_decipher(first, spec, choice)?;
                row.decipher_size = Some(BigUint::from(result.union.len()));
                row.findings = result.findings;
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(AsymmetryReport {
        l,
        rows,
        skipped_even: even,
    })
}
