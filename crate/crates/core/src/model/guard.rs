use std::fmt;

use super::{Date, ModelError};

/// A closed integer interval `[lo, hi]`; `hi == None` stands for `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Date,
    pub hi: Option<Date>,
}

impl Interval {
    pub fn new(lo: Date, hi: Option<Date>) -> Self {
        Interval { lo, hi }
    }

    pub fn unbounded(lo: Date) -> Self {
        Interval { lo, hi: None }
    }

    pub fn point(d: Date) -> Self {
        Interval { lo: d, hi: Some(d) }
    }

    fn contains(&self, d: Date) -> bool {
        d >= self.lo && self.hi.is_none_or(|hi| d <= hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hi {
            Some(hi) => write!(f, "{}..{}", self.lo, hi),
            None => write!(f, "{}..inf", self.lo),
        }
    }
}

/// The dates at which an edge may be crossed: a finite union of disjoint
/// integer intervals.
///
/// Stored normalized: sorted by `lo`, non-empty, and any two consecutive
/// intervals are separated by at least one missing date.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Guard {
    intervals: Vec<Interval>,
}

impl Guard {
    /// Builds a guard from arbitrary (possibly overlapping) intervals.
    pub fn new(intervals: impl IntoIterator<Item = Interval>) -> Result<Guard, ModelError> {
        let intervals: Vec<Interval> = intervals.into_iter().collect();
        if intervals.is_empty() {
            return Err(ModelError::EmptyGuard { line: None });
        }
        if let Some(bad) = intervals.iter().find(|iv| iv.hi.is_some_and(|hi| hi < iv.lo)) {
            return Err(ModelError::InvertedInterval { line: None, interval: bad.to_string() });
        }
        Ok(Guard { intervals: merge(intervals) })
    }

    /// The guard `[0, +∞)`.
    pub fn always() -> Guard {
        Guard { intervals: vec![Interval::unbounded(0)] }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn normalize(&self) -> Guard {
        Guard { intervals: merge(self.intervals.clone()) }
    }

    pub fn union(&self, other: &Guard) -> Guard {
        Guard { intervals: merge(self.intervals.iter().chain(&other.intervals).copied().collect()) }
    }

    pub fn contains(&self, d: Date) -> bool {
        // last interval whose lo <= d
        let idx = self.intervals.partition_point(|iv| iv.lo <= d);
        idx > 0 && self.intervals[idx - 1].contains(d)
    }

    /// Smallest satisfied date `>= d`.
    pub fn first_at_or_after(&self, d: Date) -> Option<Date> {
        let idx = self.intervals.partition_point(|iv| iv.lo <= d);
        if idx > 0 && self.intervals[idx - 1].contains(d) {
            return Some(d);
        }
        self.intervals.get(idx).map(|iv| iv.lo)
    }

    /// Satisfied dates in the inclusive range `[from, to]`, ascending.
    pub fn dates_in(&self, from: Date, to: Date) -> impl Iterator<Item = Date> + '_ {
        self.intervals
            .iter()
            .flat_map(move |iv| {
                let lo = iv.lo.max(from);
                let hi = iv.hi.map_or(to, |hi| hi.min(to));
                lo..=hi
            })
            .filter(move |&d| d >= from && d <= to)
    }

    /// Largest finite constant appearing in the guard.
    pub fn max_constant(&self) -> Date {
        self.intervals.iter().map(|iv| iv.hi.unwrap_or(iv.lo)).max().unwrap_or(0)
    }
}

fn merge(mut intervals: Vec<Interval>) -> Vec<Interval> {
    intervals.sort_by_key(|iv| (iv.lo, iv.hi.map_or(u64::MAX, u64::from)));
    let mut out: Vec<Interval> = Vec::with_capacity(intervals.len());
    for iv in intervals {
        match out.last_mut() {
            Some(last) if last.hi.is_none_or(|hi| u64::from(iv.lo) <= u64::from(hi) + 1) => {
                last.hi = match (last.hi, iv.hi) {
                    (Some(a), Some(b)) => Some(a.max(b)),
                    _ => None,
                };
            }
            _ => out.push(iv),
        }
    }
    out
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, iv) in self.intervals.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(ivs: &[(Date, Option<Date>)]) -> Guard {
        Guard::new(ivs.iter().map(|&(lo, hi)| Interval::new(lo, hi))).unwrap()
    }

    #[test]
    fn membership_on_figure_guards() {
        assert!(g(&[(2, Some(3))]).contains(2));
        assert!(!g(&[(4, Some(4))]).contains(5));
        assert!(g(&[(0, None)]).contains(1_000_000_000));
        assert!(!g(&[(1, Some(2))]).contains(3));
    }

    #[test]
    fn adjacent_and_overlapping_intervals_merge() {
        let merged = g(&[(4, Some(4)), (2, Some(3)), (7, None), (9, Some(12))]);
        assert_eq!(merged.intervals(), &[Interval::new(2, Some(4)), Interval::unbounded(7)]);
        assert_eq!(merged.max_constant(), 7);
    }

    #[test]
    fn empty_and_inverted_guards_are_rejected() {
        assert!(matches!(Guard::new([]), Err(ModelError::EmptyGuard { .. })));
        assert!(matches!(Guard::new([Interval::new(3, Some(2))]), Err(ModelError::InvertedInterval { .. })));
    }

    #[test]
    fn first_at_or_after_skips_gaps() {
        let gd = g(&[(2, Some(3)), (6, None)]);
        assert_eq!(gd.first_at_or_after(0), Some(2));
        assert_eq!(gd.first_at_or_after(3), Some(3));
        assert_eq!(gd.first_at_or_after(4), Some(6));
        assert_eq!(gd.first_at_or_after(100), Some(100));
        assert_eq!(g(&[(1, Some(1))]).first_at_or_after(2), None);
        assert_eq!(gd.dates_in(3, 7).collect::<Vec<_>>(), vec![3, 6, 7]);
    }

    fn arb_intervals() -> impl Strategy<Value = Vec<Interval>> {
        prop::collection::vec(
            (0u32..20, prop::option::weighted(0.8, 0u32..8)).prop_map(|(lo, len)| Interval::new(lo, len.map(|l| lo + l))),
            1..6,
        )
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(ivs in arb_intervals()) {
            let gd = Guard::new(ivs).unwrap();
            prop_assert_eq!(gd.normalize(), gd.clone());
            for w in gd.intervals().windows(2) {
                prop_assert!(w[0].hi.unwrap() + 2 <= w[1].lo);
            }
        }

        #[test]
        fn membership_matches_raw_intervals(ivs in arb_intervals(), d in 0u32..40) {
            let raw = ivs.iter().any(|iv| iv.contains(d));
            prop_assert_eq!(Guard::new(ivs).unwrap().contains(d), raw);
        }
    }
}
