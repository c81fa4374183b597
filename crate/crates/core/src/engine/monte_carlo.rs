//! Seeded Monte Carlo estimation. Trial `i` draws from its own ChaCha8
//! stream `(seed, i)`, so the hit count is the same under any thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{EvaluationResult, Motion, MethodTag, PreparedPatrol};
use crate::error::{Error, Result};
use crate::network::{ArcId, Network, Point};
use crate::rational::to_f64;
use crate::strategy::{AttackStrategy, Phase, PatrolStrategy, TemporalLaw};

#[derive(Clone, Copy, Debug)]
enum FloatMotion {
    Stationary,
    Periodic(f64),
    Open(f64),
}

struct FloatComponent {
    cumulative: f64,
    uniform_phase: bool,
    phi: f64,
    motion: FloatMotion,
    start: Point,
    end: Point,
    /// Per arc: (start time, from offset, to offset).
    passes: Vec<Vec<(f64, f64, f64)>>,
    node_visits: Vec<Vec<(f64, f64)>>,
    dwells: Vec<(Point, f64, f64)>,
}

/// A sampled location. Interior atoms keep their exact point so dwells
/// there can be matched.
#[derive(Clone, Copy, Debug)]
enum Location {
    Node(Point),
    Interior { arc: ArcId, offset: f64, exact: Option<Point> },
}

impl FloatComponent {
    fn visits(&self, x: &Location, out: &mut Vec<(f64, f64)>) {
        out.clear();
        match *x {
            Location::Node(Point::Node(n)) => out.extend_from_slice(&self.node_visits[n.0]),
            Location::Node(_) => unreachable!("node locations hold nodes"),
            Location::Interior { arc, offset, exact } => {
                for &(t0, from, to) in &self.passes[arc.0] {
                    let (lo, hi) = if from < to { (from, to) } else { (to, from) };
                    if lo <= offset && offset <= hi {
                        let t = t0 + (offset - from).abs();
                        out.push((t, t));
                    }
                }
                if let Some(p) = exact {
                    out.extend(self.dwells.iter().filter(|d| d.0 == p).map(|d| (d.1, d.2)));
                }
            }
        }
    }

    fn at(&self, x: &Location, p: &Point) -> bool {
        match *x {
            Location::Node(q) => q == *p,
            Location::Interior { exact, .. } => exact == Some(*p),
        }
    }

    fn hit(&self, x: &Location, t: f64, alpha: f64, phase: f64, scratch: &mut Vec<(f64, f64)>) -> bool {
        match self.motion {
            FloatMotion::Stationary => self.at(x, &self.start),
            FloatMotion::Periodic(period) => {
                self.visits(x, scratch);
                let u = t + phase;
                scratch
                    .iter()
                    .any(|&(a, b)| ((u - b) / period).ceil() <= ((u + alpha - a) / period).floor())
            }
            FloatMotion::Open(duration) => {
                let u = t + phase;
                if self.at(x, &self.end) && u + alpha >= duration {
                    return true;
                }
                self.visits(x, scratch);
                scratch.iter().any(|&(a, b)| a <= u + alpha && b >= u)
            }
        }
    }
}

/// `(cumulative length, arc, start, end)`.
type Piece = (f64, ArcId, f64, f64);

struct Sampler {
    atoms: Vec<(f64, Location)>,
    /// Cumulative mass, then segments with cumulative length.
    parts: Vec<(f64, Vec<Piece>)>,
    horizon: Option<f64>,
    fixed: f64,
}

impl Sampler {
    fn new(net: &Network, attack: &AttackStrategy) -> Sampler {
        let mut acc = 0.0;
        let atoms = attack
            .spatial
            .atoms
            .iter()
            .map(|(p, m)| {
                acc += to_f64(m);
                let loc = match *p {
                    Point::Node(_) => Location::Node(*p),
                    Point::Interior { arc, offset } => Location::Interior { arc, offset: to_f64(&offset), exact: Some(*p) },
                };
                (acc, loc)
            })
            .collect();
        let parts = attack
            .spatial
            .uniform
            .iter()
            .map(|u| {
                acc += to_f64(&u.mass);
                let mut len = 0.0;
                let segs = u
                    .region
                    .segments()
                    .iter()
                    .map(|s| {
                        len += to_f64(&s.measure());
                        (len, s.arc, to_f64(&s.lo), to_f64(&s.hi))
                    })
                    .collect();
                (acc, segs)
            })
            .collect();
        let _ = net;
        let (horizon, fixed) = match attack.temporal {
            TemporalLaw::Fixed(t) => (None, to_f64(&t)),
            TemporalLaw::Uniform(h) => (Some(to_f64(&h)), 0.0),
        };
        Sampler { atoms, parts, horizon, fixed }
    }

    fn location(&self, u: f64, v: f64) -> Location {
        if let Some(a) = self.atoms.iter().find(|a| u < a.0) {
            return a.1;
        }
        let part = self
            .parts
            .iter()
            .find(|p| u < p.0)
            .or(self.parts.last())
            .or(None);
        match part {
            Some((_, segs)) => {
                let total = segs.last().map_or(0.0, |s| s.0);
                let target = v * total;
                let &(end, arc, lo, hi) = segs.iter().find(|s| target < s.0).unwrap_or(segs.last().expect("segments"));
                let offset = hi - (end - target);
                Location::Interior { arc, offset: offset.clamp(lo, hi), exact: None }
            }
            None => self.atoms.last().expect("attack has mass").1,
        }
    }

    fn time(&self, u: f64) -> f64 {
        match self.horizon {
            Some(h) => u * h,
            None => self.fixed,
        }
    }
}

fn float_components(net: &Network, patrol: &PatrolStrategy) -> Vec<FloatComponent> {
    let prepared = PreparedPatrol::new(net, patrol);
    let mut acc = 0.0;
    prepared
        .components
        .iter()
        .zip(patrol.components())
        .map(|(c, raw)| {
            acc += to_f64(&c.probability);
            let motion = match c.motion {
                Motion::Stationary(_) => FloatMotion::Stationary,
                Motion::Periodic(p) => FloatMotion::Periodic(to_f64(&p)),
                Motion::Open { duration, .. } => FloatMotion::Open(to_f64(&duration)),
            };
            let tl = &c.timeline;
            FloatComponent {
                cumulative: acc,
                uniform_phase: c.phase == Phase::Uniform,
                phi: match c.phase {
                    Phase::Fixed(p) => to_f64(&p),
                    Phase::Uniform => 0.0,
                },
                motion,
                start: raw.walk.start(),
                end: raw.walk.end(),
                passes: tl
                    .passes
                    .iter()
                    .map(|v| v.iter().map(|p| (to_f64(&p.start_time), to_f64(&p.from), to_f64(&p.to))).collect())
                    .collect(),
                node_visits: tl
                    .node_visits
                    .iter()
                    .map(|v| v.iter().map(|(a, b)| (to_f64(a), to_f64(b))).collect())
                    .collect(),
                dwells: tl.point_dwells.iter().map(|(p, a, b)| (*p, to_f64(a), to_f64(b))).collect(),
            }
        })
        .collect()
}

/// Estimates the interception probability by sampling the attack and the
/// patrol's component and phase.
pub fn monte_carlo(
    net: &Network,
    patrol: &PatrolStrategy,
    attack: &AttackStrategy,
    alpha: crate::Rational,
    trials: u64,
    seed: u64,
    jobs: Option<usize>,
) -> Result<EvaluationResult> {
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one trial is needed".into()));
    }
    let components = float_components(net, patrol);
    let sampler = Sampler::new(net, attack);
    let alpha = to_f64(&alpha);
    let run = || -> u64 {
        (0..trials)
            .into_par_iter()
            .map_init(Vec::new, |scratch, i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i);
                let x = sampler.location(rng.random(), rng.random());
                let t = sampler.time(rng.random());
                let pick: f64 = rng.random();
                let c = components
                    .iter()
                    .find(|c| pick < c.cumulative)
                    .unwrap_or_else(|| components.last().expect("components"));
                let u: f64 = rng.random();
                let phase = match (c.uniform_phase, c.motion) {
                    (true, FloatMotion::Periodic(p)) => u * p,
                    _ => c.phi,
                };
                u64::from(c.hit(&x, t, alpha, phase, scratch))
            })
            .sum()
    };
    let hits = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    };
    let p = hits as f64 / trials as f64;
    Ok(EvaluationResult {
        method: MethodTag::MonteCarlo,
        probability: p,
        exact: None,
        ci_halfwidth: Some(1.96 * (p * (1.0 - p) / trials as f64).sqrt()),
        trials: Some(trials),
        seed: Some(seed),
        argmin: None,
    })
}
