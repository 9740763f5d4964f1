//! Families of subsets and their line-oriented text format.
//!
//! ```text
//! # comment
//! n=3
//! 001
//! 110
//! ```
//!
//! A fragment file is a family file followed by one `pivot=<i>` line, with
//! `i` counted from 1. A family stream is a sequence of family blocks
//! separated by blank lines.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::setcore::{GroundSize, Subset};

/// A deduplicated, canonically ordered set of subsets of one ground set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Family {
    ground: GroundSize,
    members: Vec<Subset>,
}

impl Family {
    /// Builds a family; members are sorted and duplicates collapsed.
    pub fn new<I: IntoIterator<Item = Subset>>(ground: GroundSize, members: I) -> Result<Self> {
        let mut members: Vec<Subset> = members.into_iter().collect();
        if let Some(bad) = members.iter().find(|s| !s.fits(ground)) {
            return Err(Error::usage(format!(
                "subset {bad:?} does not fit ground size n={ground}"
            )));
        }
        members.sort_unstable();
        members.dedup();
        Ok(Family { ground, members })
    }

    pub(crate) fn from_sorted_unchecked(ground: GroundSize, members: Vec<Subset>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(members.iter().all(|s| s.fits(ground)));
        Family { ground, members }
    }

    pub fn empty(ground: GroundSize) -> Self {
        Family {
            ground,
            members: Vec::new(),
        }
    }

    /// Convenience constructor from bit strings; `n` is taken from the
    /// argument, not from the strings.
    pub fn from_bit_strings<S: AsRef<str>>(n: usize, strings: &[S]) -> Result<Self> {
        let ground = GroundSize::new(n)?;
        let members = strings
            .iter()
            .map(|s| Subset::from_bit_string(s.as_ref(), ground))
            .collect::<Result<Vec<_>>>()?;
        Family::new(ground, members)
    }

    #[inline]
    pub fn ground(&self) -> GroundSize {
        self.ground
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.ground.get()
    }

    #[inline]
    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Subset> {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.members.binary_search(&s).is_ok()
    }

    /// Members of cardinality `c`, in canonical order.
    pub fn layer(&self, c: usize) -> impl Iterator<Item = Subset> + '_ {
        self.members.iter().copied().filter(move |s| s.len() == c)
    }

    /// Distinct member cardinalities, ascending.
    pub fn cardinalities(&self) -> Vec<usize> {
        let mut cards: Vec<usize> = self.members.iter().map(|s| s.len()).collect();
        cards.sort_unstable();
        cards.dedup();
        cards
    }

    /// Image under the relabeling `a_{i+1} -> a_{perm[i]+1}`.
    pub fn permute(&self, perm: &[usize]) -> Family {
        assert_eq!(perm.len(), self.n(), "permutation length must equal n");
        let mut members: Vec<Subset> = self.members.iter().map(|s| s.permute(perm)).collect();
        members.sort_unstable();
        Family {
            ground: self.ground,
            members,
        }
    }

    pub fn into_members(self) -> Vec<Subset> {
        self.members
    }

    /// Members as bit strings joined by `sep`, for one-line messages.
    pub fn inline(&self, sep: &str) -> String {
        let strings: Vec<String> = self
            .members
            .iter()
            .map(|s| s.to_bit_string(self.ground))
            .collect();
        format!("{{{}}}", strings.join(sep))
    }

    /// Renders in the family text format (`n=` header plus one line per member).
    pub fn render(&self) -> String {
        let mut out = String::with_capacity((self.members.len() + 1) * (self.n() + 1) + 4);
        let _ = writeln!(out, "n={}", self.ground);
        for s in &self.members {
            out.push_str(&s.to_bit_string(self.ground));
            out.push('\n');
        }
        out
    }

    /// Parses the family text format. Duplicate member lines are an error.
    pub fn parse(text: &str) -> Result<Self> {
        let (family, pivot) = parse_block(text, 0, false)?;
        debug_assert!(pivot.is_none());
        Ok(family)
    }
}

impl<'a> IntoIterator for &'a Family {
    type Item = &'a Subset;
    type IntoIter = std::slice::Iter<'a, Subset>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// Parses a fragment file: family text plus a trailing `pivot=<i>` line.
/// Returns the family and the zero-based pivot index.
pub fn parse_fragment_text(text: &str) -> Result<(Family, usize)> {
    let (family, pivot) = parse_block(text, 0, true)?;
    match pivot {
        Some(p) => Ok((family, p)),
        None => Err(Error::format(None, "missing trailing pivot=<i> line")),
    }
}

/// Renders a fragment file.
pub fn render_fragment_text(family: &Family, pivot: usize) -> String {
    let mut out = family.render();
    let _ = writeln!(out, "pivot={}", pivot + 1);
    out
}

/// Renders several families as a stream, blocks separated by one blank line.
pub fn render_stream<'a, I: IntoIterator<Item = &'a Family>>(families: I) -> String {
    let mut out = String::new();
    for (i, f) in families.into_iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&f.render());
    }
    out
}

/// Parses a blank-line separated stream of family blocks.
pub fn parse_stream(text: &str) -> Result<Vec<Family>> {
    let mut families = Vec::new();
    let mut block = String::new();
    let mut block_start = 0;
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            if !block.is_empty() {
                families.push(parse_block(&block, block_start, false)?.0);
                block.clear();
            }
            continue;
        }
        if block.is_empty() {
            block_start = i;
        }
        block.push_str(line);
        block.push('\n');
    }
    if !block.is_empty() {
        families.push(parse_block(&block, block_start, false)?.0);
    }
    Ok(families)
}

fn parse_block(
    text: &str,
    line_offset: usize,
    expect_pivot: bool,
) -> Result<(Family, Option<usize>)> {
    let mut ground: Option<GroundSize> = None;
    let mut members: Vec<Subset> = Vec::new();
    let mut pivot: Option<usize> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = Some(line_offset + idx + 1);
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if pivot.is_some() {
            return Err(Error::format(lineno, "content after pivot line"));
        }
        let Some(n) = ground else {
            let value = line.strip_prefix("n=").ok_or_else(|| {
                Error::format(lineno, format!("expected n=<int>, found {line:?}"))
            })?;
            let n: usize = value
                .parse()
                .map_err(|_| Error::format(lineno, format!("invalid ground size {value:?}")))?;
            ground = Some(GroundSize::new(n).map_err(|e| Error::format(lineno, e.to_string()))?);
            continue;
        };
        if let Some(value) = line.strip_prefix("pivot=") {
            if !expect_pivot {
                return Err(Error::format(
                    lineno,
                    "unexpected pivot line in family file",
                ));
            }
            let p: usize = value
                .parse()
                .map_err(|_| Error::format(lineno, format!("invalid pivot {value:?}")))?;
            if p == 0 || p > n.get() {
                return Err(Error::format(
                    lineno,
                    format!("pivot {p} outside 1..={}", n.get()),
                ));
            }
            pivot = Some(p - 1);
            continue;
        }
        let s = Subset::from_bit_string(line, n).map_err(|e| match e {
            Error::Format { message, .. } => Error::Format {
                line: lineno,
                message,
            },
            other => other,
        })?;
        members.push(s);
    }

    let ground = ground.ok_or_else(|| Error::format(None, "missing n=<int> header"))?;
    let count = members.len();
    let family = Family::new(ground, members)?;
    if family.len() != count {
        let dup = duplicate_line(text, line_offset);
        return Err(Error::format(dup, "duplicate member line"));
    }
    Ok((family, pivot))
}

fn duplicate_line(text: &str, line_offset: usize) -> Option<usize> {
    let mut seen = std::collections::HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.contains('=') {
            continue;
        }
        if !seen.insert(line) {
            return Some(line_offset + idx + 1);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_is_canonical() {
        let f = Family::from_bit_strings(3, &["110", "001"]).unwrap();
        assert_eq!(f.render(), "n=3\n001\n110\n");
        assert_eq!(f.inline(","), "{001,110}");
    }

    #[test]
    fn parse_with_comments() {
        let f = Family::parse("# a family\nn=3\n110\n\n# x\n001\n").unwrap();
        assert_eq!(f, Family::from_bit_strings(3, &["001", "110"]).unwrap());
    }

    #[test]
    fn parse_rejects_duplicates_with_line() {
        let err = Family::parse("n=3\n110\n001\n110\n").unwrap_err();
        assert_eq!(
            err,
            Error::Format {
                line: Some(4),
                message: "duplicate member line".into()
            }
        );
    }

    #[test]
    fn parse_reports_bad_length_line() {
        let err = Family::parse("n=3\n110\n1011\n").unwrap_err();
        assert!(
            matches!(err, Error::Format { line: Some(3), .. }),
            "{err:?}"
        );
    }

    #[test]
    fn parse_requires_header() {
        assert!(matches!(
            Family::parse("110\n"),
            Err(Error::Format { line: Some(1), .. })
        ));
        assert!(matches!(
            Family::parse(""),
            Err(Error::Format { line: None, .. })
        ));
        assert!(Family::parse("n=1\n1\n").is_err());
    }

    #[test]
    fn fragment_round_trip() {
        let f = Family::from_bit_strings(3, &["110", "101"]).unwrap();
        let text = render_fragment_text(&f, 0);
        assert_eq!(text, "n=3\n101\n110\npivot=1\n");
        assert_eq!(parse_fragment_text(&text).unwrap(), (f, 0));
    }

    #[test]
    fn fragment_pivot_rules() {
        assert!(parse_fragment_text("n=3\n110\n").is_err());
        assert!(parse_fragment_text("n=3\n110\npivot=4\n").is_err());
        assert!(parse_fragment_text("n=3\n110\npivot=0\n").is_err());
        assert!(parse_fragment_text("n=3\npivot=1\n110\n").is_err());
        assert!(Family::parse("n=3\n110\npivot=1\n").is_err());
    }

    #[test]
    fn stream_round_trip() {
        let a = Family::from_bit_strings(3, &["110", "001"]).unwrap();
        let b = Family::from_bit_strings(3, &["100", "010", "001"]).unwrap();
        let text = render_stream([&a, &b]);
        assert_eq!(text, "n=3\n001\n110\n\nn=3\n001\n010\n100\n");
        assert_eq!(parse_stream(&text).unwrap(), vec![a, b]);
    }

    #[test]
    fn permute_relabels() {
        let f = Family::from_bit_strings(3, &["110"]).unwrap();
        // a1 -> a3, a2 -> a1, a3 -> a2
        let g = f.permute(&[2, 0, 1]);
        assert_eq!(g, Family::from_bit_strings(3, &["101"]).unwrap());
    }
}
