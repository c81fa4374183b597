//! Interception probabilities of patrols against attacks.
//!
//! A patrol component with uniform phase intercepts an attack at `x`
//! starting at `t` for exactly the phases in `⋃ [v - t - α, v - t]` (mod
//! the period) over the visit times `v` of `x`, so its probability is the
//! measure of that union over the period. Fixed phases give 0 or 1 for a
//! single attack; averaging over a uniform start time is again a measure of
//! a union of intervals. Everything here is exact, except the Monte Carlo
//! estimator, which works in floating point.

mod coverage;
mod monte_carlo;
mod phase;
mod search;

pub use monte_carlo::monte_carlo;
pub use phase::PhaseIntervalSet;
pub use search::{
    attacker_best_response, patrol_search, search_walks, BestResponse, GridSpec, SearchFamily,
    SearchResult,
};

use crate::error::{Error, Result};
use crate::network::{Network, Point, Walk, WalkTimeline};
use crate::rational::{format_rational, int, one, to_f64, zero, Rational};
use crate::strategy::{AttackStrategy, Phase, PatrolComponent, PatrolStrategy, TemporalLaw};

use phase::clipped_union;

/// How a component moves once its walk is exhausted.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Motion {
    Stationary(Point),
    Periodic(Rational),
    Open { duration: Rational, end: Point },
}

#[derive(Clone, Debug)]
pub(crate) struct PreparedComponent {
    pub probability: Rational,
    pub phase: Phase,
    pub motion: Motion,
    pub timeline: WalkTimeline,
}

fn floor_int(r: Rational) -> i128 {
    r.floor().to_integer()
}

fn ceil_int(r: Rational) -> i128 {
    r.ceil().to_integer()
}

impl PreparedComponent {
    pub fn new(net: &Network, c: &PatrolComponent) -> Self {
        let w = &c.walk;
        let motion = if w.duration() == zero() {
            Motion::Stationary(w.start())
        } else if w.is_closed() {
            Motion::Periodic(w.duration())
        } else {
            Motion::Open { duration: w.duration(), end: w.end() }
        };
        PreparedComponent {
            probability: c.probability,
            phase: c.phase,
            motion,
            timeline: w.timeline(net),
        }
    }

    fn fixed_phase(&self) -> Rational {
        match self.phase {
            Phase::Fixed(p) => p,
            Phase::Uniform => zero(),
        }
    }

    /// Probability of an interception at `x` for an attack during
    /// `[t, t + alpha]`.
    pub fn hit(&self, x: &Point, t: Rational, alpha: Rational) -> Rational {
        match self.motion {
            Motion::Stationary(p) => indicator(p == *x),
            Motion::Periodic(period) => {
                let visits = self.timeline.visit_intervals(x);
                match self.phase {
                    Phase::Uniform => {
                        if visits.is_empty() {
                            return zero();
                        }
                        PhaseIntervalSet::from_intervals(period, visits.iter().map(|&(a, b)| (a - t - alpha, b - t)))
                            .fraction()
                    }
                    Phase::Fixed(phi) => {
                        let u = t + phi;
                        indicator(visits.iter().any(|&(a, b)| {
                            ceil_int((u - b) / period) <= floor_int((u + alpha - a) / period)
                        }))
                    }
                }
            }
            Motion::Open { duration, end } => {
                let u = t + self.fixed_phase();
                let held = end == *x && u + alpha >= duration;
                indicator(held || self.timeline.visit_intervals(x).iter().any(|&(a, b)| a <= u + alpha && b >= u))
            }
        }
    }

    /// Whether `hit` ignores the attack start time.
    pub fn time_invariant(&self) -> bool {
        matches!(self.motion, Motion::Stationary(_)) || self.phase == Phase::Uniform
    }

    /// Expected interception at `x` over the start-time law.
    pub fn averaged_hit(&self, x: &Point, temporal: TemporalLaw, alpha: Rational) -> Rational {
        let horizon = match temporal {
            TemporalLaw::Fixed(t) => return self.hit(x, t, alpha),
            TemporalLaw::Uniform(h) => h,
        };
        if self.time_invariant() {
            return self.hit(x, zero(), alpha);
        }
        let phi = self.fixed_phase();
        let visits = self.timeline.visit_intervals(x);
        let favourable: Vec<(Rational, Rational)> = match self.motion {
            Motion::Stationary(_) => unreachable!("stationary components are time invariant"),
            Motion::Periodic(period) => {
                let kmin = floor_int(phi / period) - 1;
                let kmax = ceil_int((horizon + alpha + phi) / period);
                (kmin..=kmax)
                    .flat_map(|k| {
                        let shift = int(k) * period - phi;
                        visits.iter().map(move |&(a, b)| (a + shift - alpha, b + shift))
                    })
                    .collect()
            }
            Motion::Open { duration, end } => {
                let mut v: Vec<_> = visits.iter().map(|&(a, b)| (a - phi - alpha, b - phi)).collect();
                if end == *x {
                    v.push((duration - phi - alpha, horizon));
                }
                v
            }
        };
        clipped_union(favourable, zero(), horizon) / horizon
    }
}

fn indicator(b: bool) -> Rational {
    if b {
        one()
    } else {
        zero()
    }
}

/// A patrol with per-component visit indexes built once.
#[derive(Clone, Debug)]
pub struct PreparedPatrol {
    pub(crate) components: Vec<PreparedComponent>,
}

impl PreparedPatrol {
    pub fn new(net: &Network, patrol: &PatrolStrategy) -> Self {
        PreparedPatrol {
            components: patrol.components().iter().map(|c| PreparedComponent::new(net, c)).collect(),
        }
    }

    pub fn hit(&self, x: &Point, t: Rational, alpha: Rational) -> Rational {
        self.components.iter().map(|c| c.probability * c.hit(x, t, alpha)).sum()
    }

    pub fn averaged_hit(&self, x: &Point, temporal: TemporalLaw, alpha: Rational) -> Rational {
        self.components
            .iter()
            .map(|c| c.probability * c.averaged_hit(x, temporal, alpha))
            .sum()
    }

    pub fn time_invariant(&self) -> bool {
        self.components.iter().all(PreparedComponent::time_invariant)
    }

    /// Exact interception probability of an attack strategy.
    pub fn evaluate_exact(&self, net: &Network, attack: &AttackStrategy, alpha: Rational) -> Rational {
        let mut total = zero();
        for (x, m) in &attack.spatial.atoms {
            if *m > zero() {
                total += *m * self.averaged_hit(x, attack.temporal, alpha);
            }
        }
        for part in &attack.spatial.uniform {
            let density = part.density();
            for seg in part.region.segments() {
                for c in &self.components {
                    total += density * c.probability * coverage::integrate(net, c, seg, attack.temporal, alpha);
                }
            }
        }
        total
    }
}

/// Whether a pure walk (periodic when closed, holding its end point when
/// open) occupies `x` at some instant of `[t, t + alpha]`.
pub fn intercept(net: &Network, walk: &Walk, x: &Point, t: Rational, alpha: Rational) -> bool {
    let c = PatrolComponent { walk: walk.clone(), probability: one(), phase: Phase::Fixed(zero()) };
    PreparedComponent::new(net, &c).hit(x, t, alpha) == one()
}

/// Exact `Σ s_i P_i(x, t)`.
pub fn interception_probability(
    net: &Network,
    patrol: &PatrolStrategy,
    x: &Point,
    t: Rational,
    alpha: Rational,
) -> Rational {
    PreparedPatrol::new(net, patrol).hit(x, t, alpha)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exact,
    MonteCarlo { trials: u64, seed: u64, jobs: Option<usize> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodTag {
    Exact,
    MonteCarlo,
    Grid,
}

impl MethodTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            MethodTag::Exact => "exact",
            MethodTag::MonteCarlo => "monte-carlo",
            MethodTag::Grid => "grid",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvaluationResult {
    pub method: MethodTag,
    pub probability: f64,
    /// Present for exact and grid results.
    pub exact: Option<Rational>,
    pub ci_halfwidth: Option<f64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub argmin: Option<(Point, Rational)>,
}

pub const CSV_HEADER: &str = "method,probability,ci_halfwidth,trials,seed,argmin_point,argmin_time";

impl EvaluationResult {
    pub fn exact(value: Rational) -> Self {
        EvaluationResult {
            method: MethodTag::Exact,
            probability: to_f64(&value),
            exact: Some(value),
            ci_halfwidth: None,
            trials: None,
            seed: None,
            argmin: None,
        }
    }

    pub fn csv_row(&self, net: &Network) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        let probability = match self.exact {
            Some(r) => format_rational(&r),
            None => format!("{:.6}", self.probability),
        };
        let (point, time) = match &self.argmin {
            Some((p, t)) => (net.point_label(p), format_rational(t)),
            None => (String::new(), String::new()),
        };
        format!(
            "{},{},{},{},{},{},{}",
            self.method.as_str(),
            probability,
            opt(self.ci_halfwidth.map(|h| format!("{h:.6}"))),
            opt(self.trials.map(|n| n.to_string())),
            opt(self.seed.map(|s| s.to_string())),
            point,
            time
        )
    }
}

/// Interception probability of `patrol` against `attack`.
pub fn evaluate(
    net: &Network,
    patrol: &PatrolStrategy,
    attack: &AttackStrategy,
    alpha: Rational,
    method: Method,
) -> Result<EvaluationResult> {
    if alpha <= zero() {
        return Err(Error::InvalidAlpha {
            alpha: format_rational(&alpha),
            reason: "must be positive".into(),
        });
    }
    patrol.validate_on(net)?;
    attack.spatial.validate(net)?;
    match method {
        Method::Exact => Ok(EvaluationResult::exact(
            PreparedPatrol::new(net, patrol).evaluate_exact(net, attack, alpha),
        )),
        Method::MonteCarlo { trials, seed, jobs } => monte_carlo(net, patrol, attack, alpha, trials, seed, jobs),
    }
}
