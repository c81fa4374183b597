use crate::rational::{modulo, zero, Rational};

/// Disjoint half-open intervals of phases in `[0, P)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseIntervalSet {
    period: Rational,
    intervals: Vec<(Rational, Rational)>,
}

impl PhaseIntervalSet {
    /// Reduces each closed interval modulo `period` and merges the results.
    pub fn from_intervals(period: Rational, raw: impl IntoIterator<Item = (Rational, Rational)>) -> Self {
        assert!(period > zero(), "period must be positive");
        let mut pieces = Vec::new();
        for (a, b) in raw {
            if b - a >= period {
                pieces.clear();
                pieces.push((zero(), period));
                return PhaseIntervalSet { period, intervals: pieces };
            }
            let lo = modulo(a, &period);
            let hi = lo + (b - a);
            if hi <= period {
                pieces.push((lo, hi));
            } else {
                pieces.push((lo, period));
                pieces.push((zero(), hi - period));
            }
        }
        PhaseIntervalSet {
            period,
            intervals: merge(pieces),
        }
    }

    pub fn period(&self) -> Rational {
        self.period
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    pub fn measure(&self) -> Rational {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    /// Fraction of the period covered.
    pub fn fraction(&self) -> Rational {
        self.measure() / self.period
    }

    pub fn contains(&self, phase: Rational) -> bool {
        let p = modulo(phase, &self.period);
        self.intervals.iter().any(|&(a, b)| a <= p && p <= b)
    }
}

/// Sorted union of closed intervals; touching intervals are joined.
pub(crate) fn merge(mut v: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    v.sort();
    let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(v.len());
    for (a, b) in v {
        match out.last_mut() {
            Some(last) if a <= last.1 => {
                if b > last.1 {
                    last.1 = b;
                }
            }
            _ => out.push((a, b)),
        }
    }
    out
}

/// Measure of `⋃ [a, b] ∩ [lo, hi]`.
pub(crate) fn clipped_union(intervals: impl IntoIterator<Item = (Rational, Rational)>, lo: Rational, hi: Rational) -> Rational {
    let clipped: Vec<_> = intervals
        .into_iter()
        .filter_map(|(a, b)| {
            let a = if a < lo { lo } else { a };
            let b = if b > hi { hi } else { b };
            (a < b).then_some((a, b))
        })
        .collect();
    merge(clipped).iter().map(|(a, b)| b - a).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn wraps_and_merges() {
        let s = PhaseIntervalSet::from_intervals(int(4), [(int(-1), int(0)), (int(1), int(2))]);
        assert_eq!(s.intervals(), &[(int(1), int(2)), (int(3), int(4))]);
        assert_eq!(s.fraction(), rat(1, 2));
        let s = PhaseIntervalSet::from_intervals(int(4), [(int(3), int(5)), (int(0), rat(1, 2))]);
        assert_eq!(s.intervals(), &[(int(0), int(1)), (int(3), int(4))]);
        assert!(s.contains(int(7)));
        let full = PhaseIntervalSet::from_intervals(int(4), [(int(0), int(5))]);
        assert_eq!(full.fraction(), int(1));
    }

    #[test]
    fn clipping() {
        let m = clipped_union([(int(-2), int(1)), (rat(1, 2), int(3)), (int(5), int(9))], int(0), int(6));
        assert_eq!(m, int(4));
    }
}
