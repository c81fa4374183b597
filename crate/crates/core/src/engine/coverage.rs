//! Exact integrals of interception probability over a segment.
//!
//! On one arc every pass of a walk reaches offset `s` at a time affine in
//! `s` with slope ±1. For a fixed start time the favourable offsets are an
//! interval per pass. For a favourable-set measure (uniform phase, or
//! uniform start time) the integrand is the measure of a union of
//! intervals whose ends move affinely with `s`; it is affine between the
//! offsets where two ends (or an end and the window) cross, so integrating
//! piece by piece with the midpoint value is exact.

use super::phase::clipped_union;
use super::{ceil_int, floor_int, Motion, PreparedComponent};
use crate::network::{Network, Segment};
use crate::rational::{half, int, zero, Rational};
use crate::strategy::{Phase, TemporalLaw};

/// Arrival time `c + sigma * s`, valid for `s` in `[lo, hi]`.
#[derive(Clone, Copy, Debug)]
struct Instant {
    c: Rational,
    sigma: i128,
    lo: Rational,
    hi: Rational,
}

impl Instant {
    fn at(&self, s: Rational) -> Rational {
        self.c + int(self.sigma) * s
    }

    fn shifted(&self, by: Rational) -> Instant {
        Instant { c: self.c + by, ..*self }
    }
}

fn instants(c: &PreparedComponent, seg: &Segment) -> Vec<Instant> {
    c.timeline.passes[seg.arc.0]
        .iter()
        .filter_map(|p| {
            let (lo, hi, inst) = if p.from < p.to {
                (p.from, p.to, (p.start_time - p.from, 1))
            } else {
                (p.to, p.from, (p.start_time + p.from, -1))
            };
            let lo = if lo > seg.lo { lo } else { seg.lo };
            let hi = if hi < seg.hi { hi } else { seg.hi };
            (lo < hi).then_some(Instant { c: inst.0, sigma: inst.1, lo, hi })
        })
        .collect()
}

/// `∫ over seg` of the component's interception probability.
pub(crate) fn integrate(
    net: &Network,
    c: &PreparedComponent,
    seg: &Segment,
    temporal: TemporalLaw,
    alpha: Rational,
) -> Rational {
    let _ = net;
    let base = instants(c, seg);
    if base.is_empty() {
        return zero();
    }
    let phi = match c.phase {
        Phase::Fixed(p) => p,
        Phase::Uniform => zero(),
    };
    match (c.motion, c.phase, temporal) {
        (Motion::Stationary(_), _, _) => zero(),
        (Motion::Periodic(period), Phase::Uniform, _) => {
            let copies = floor_int(alpha / period) + 2;
            let shifted: Vec<_> = (0..=copies)
                .flat_map(|k| base.iter().map(move |i| i.shifted(int(k) * period)))
                .collect();
            window_integral(&shifted, alpha, zero(), period, seg) / period
        }
        (Motion::Periodic(period), Phase::Fixed(_), TemporalLaw::Fixed(t)) => {
            let kmin = floor_int((t + phi) / period) - 1;
            let kmax = ceil_int((t + alpha + phi) / period);
            let shifted: Vec<_> = (kmin..=kmax)
                .flat_map(|k| base.iter().map(move |i| i.shifted(int(k) * period - phi)))
                .collect();
            indicator_integral(&shifted, t, t + alpha)
        }
        (Motion::Periodic(period), Phase::Fixed(_), TemporalLaw::Uniform(h)) => {
            let kmin = floor_int(phi / period) - 1;
            let kmax = ceil_int((h + alpha + phi) / period);
            let shifted: Vec<_> = (kmin..=kmax)
                .flat_map(|k| base.iter().map(move |i| i.shifted(int(k) * period - phi)))
                .collect();
            window_integral(&shifted, alpha, zero(), h, seg) / h
        }
        (Motion::Open { .. }, _, TemporalLaw::Fixed(t)) => {
            let shifted: Vec<_> = base.iter().map(|i| i.shifted(-phi)).collect();
            indicator_integral(&shifted, t, t + alpha)
        }
        (Motion::Open { .. }, _, TemporalLaw::Uniform(h)) => {
            let shifted: Vec<_> = base.iter().map(|i| i.shifted(-phi)).collect();
            window_integral(&shifted, alpha, zero(), h, seg) / h
        }
    }
}

/// Measure of offsets `s` with some arrival time in `[t0, t1]`.
fn indicator_integral(inst: &[Instant], t0: Rational, t1: Rational) -> Rational {
    let pieces = inst.iter().filter_map(|i| {
        // sigma = ±1, so solve t0 <= c ± s <= t1 directly
        let (a, b) = if i.sigma > 0 {
            (t0 - i.c, t1 - i.c)
        } else {
            (i.c - t1, i.c - t0)
        };
        let a = if a > i.lo { a } else { i.lo };
        let b = if b < i.hi { b } else { i.hi };
        (a < b).then_some((a, b))
    });
    clipped_union(pieces, Rational::from_integer(i128::MIN / 4), Rational::from_integer(i128::MAX / 4))
}

/// `∫ |⋃ [v(s) - alpha, v(s)] ∩ [w0, w1]| ds` over the segment.
fn window_integral(inst: &[Instant], alpha: Rational, w0: Rational, w1: Rational, seg: &Segment) -> Rational {
    let mut cuts = vec![seg.lo, seg.hi];
    for i in inst {
        cuts.push(i.lo);
        cuts.push(i.hi);
    }
    // moving ends: (intercept, slope); constants for the window
    let mut ends: Vec<(Rational, i128)> = vec![(w0, 0), (w1, 0)];
    for i in inst {
        ends.push((i.c, i.sigma));
        ends.push((i.c - alpha, i.sigma));
    }
    for (x, &(c1, s1)) in ends.iter().enumerate() {
        for &(c2, s2) in &ends[x + 1..] {
            if s1 != s2 {
                cuts.push((c2 - c1) / int(s1 - s2));
            }
        }
    }
    cuts.retain(|s| *s >= seg.lo && *s <= seg.hi);
    cuts.sort();
    cuts.dedup();
    let mut total = zero();
    for w in cuts.windows(2) {
        let (p, q) = (w[0], w[1]);
        let mid = (p + q) * half();
        let active = inst
            .iter()
            .filter(|i| i.lo <= mid && mid <= i.hi)
            .map(|i| {
                let v = i.at(mid);
                (v - alpha, v)
            });
        total += clipped_union(active, w0, w1) * (q - p);
    }
    total
}
