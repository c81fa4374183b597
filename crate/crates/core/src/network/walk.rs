use super::{ArcId, Network, Point};
use crate::error::{Error, Result};
use crate::rational::{zero, Rational};

/// One piece of a walk. Traversals move at unit speed within a single arc;
/// dwells stay put.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Traverse {
        arc: ArcId,
        from: Rational,
        to: Rational,
    },
    Dwell(Rational),
}

impl Step {
    pub fn duration(&self) -> Rational {
        match *self {
            Step::Traverse { from, to, .. } => {
                if to > from {
                    to - from
                } else {
                    from - to
                }
            }
            Step::Dwell(d) => d,
        }
    }
}

/// A time at which a walk occupies a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Visit {
    At(Rational),
    Dwell { from: Rational, to: Rational },
}

impl Visit {
    pub fn bounds(&self) -> (Rational, Rational) {
        match *self {
            Visit::At(t) => (t, t),
            Visit::Dwell { from, to } => (from, to),
        }
    }
}

/// Unit-speed path through a network, starting at time 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Walk {
    start: Point,
    end: Point,
    steps: Vec<Step>,
    duration: Rational,
}

impl Walk {
    /// Validates incidence: every step must start where the previous ended.
    pub fn new(net: &Network, start: Point, steps: Vec<Step>) -> Result<Walk> {
        net.validate_point(&start)?;
        let mut here = start;
        let mut duration = zero();
        for (i, step) in steps.iter().enumerate() {
            match *step {
                Step::Traverse { arc, from, to } => {
                    if arc.0 >= net.arc_count() {
                        return Err(Error::InvalidWalk(format!("step {i}: unknown arc")));
                    }
                    let entry = net
                        .point(arc, from)
                        .map_err(|e| Error::InvalidWalk(format!("step {i}: {e}")))?;
                    if entry != here {
                        return Err(Error::InvalidWalk(format!(
                            "step {i} does not start where step {} ended",
                            i as isize - 1
                        )));
                    }
                    if from == to {
                        return Err(Error::InvalidWalk(format!("step {i} has zero length")));
                    }
                    here = net
                        .point(arc, to)
                        .map_err(|e| Error::InvalidWalk(format!("step {i}: {e}")))?;
                }
                Step::Dwell(d) => {
                    if d <= zero() {
                        return Err(Error::InvalidWalk(format!("step {i}: nonpositive dwell")));
                    }
                }
            }
            duration += step.duration();
        }
        Ok(Walk {
            start,
            end: here,
            steps,
            duration,
        })
    }

    /// Zero-length walk that never moves.
    pub fn stationary(start: Point) -> Walk {
        Walk {
            start,
            end: start,
            steps: Vec::new(),
            duration: zero(),
        }
    }

    pub fn start(&self) -> Point {
        self.start
    }

    pub fn end(&self) -> Point {
        self.end
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn duration(&self) -> Rational {
        self.duration
    }

    pub fn is_closed(&self) -> bool {
        self.start == self.end
    }

    /// The same route walked backwards.
    pub fn reversed(&self) -> Walk {
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|s| match *s {
                Step::Traverse { arc, from, to } => Step::Traverse { arc, from: to, to: from },
                d => d,
            })
            .collect();
        Walk {
            start: self.end,
            end: self.start,
            steps,
            duration: self.duration,
        }
    }

    /// `self` followed by `other`; `other` must start where `self` ends.
    pub fn then(&self, net: &Network, other: &Walk) -> Result<Walk> {
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        if other.start != self.end {
            return Err(Error::InvalidWalk("walks are not contiguous".into()));
        }
        Walk::new(net, self.start, steps)
    }

    /// Number of times each arc is fully traversed (either direction).
    pub fn full_traversals(&self, net: &Network) -> Vec<usize> {
        let mut counts = vec![0; net.arc_count()];
        for s in &self.steps {
            if let Step::Traverse { arc, from, to } = *s {
                let len = net.length(arc);
                if (from == zero() && to == len) || (from == len && to == zero()) {
                    counts[arc.0] += 1;
                }
            }
        }
        counts
    }

    /// Location at time `t`, `0 <= t <= duration`.
    pub fn position(&self, net: &Network, t: Rational) -> Result<Point> {
        if t < zero() || t > self.duration {
            return Err(Error::InvalidParameter(format!(
                "time {t} outside walk duration {}",
                self.duration
            )));
        }
        let mut clock = zero();
        let mut here = self.start;
        for step in &self.steps {
            let d = step.duration();
            if let Step::Traverse { arc, from, to } = *step {
                if t <= clock + d {
                    let moved = t - clock;
                    let offset = if to > from { from + moved } else { from - moved };
                    return net.point(arc, offset);
                }
                here = net.point_unchecked(arc, to);
            } else if t <= clock + d {
                return Ok(here);
            }
            clock += d;
        }
        Ok(here)
    }

    /// Every time in `[0, duration]` at which the walk is at `x`, in order.
    pub fn visit_times(&self, net: &Network, x: &Point) -> Vec<Visit> {
        WalkTimeline::new(net, self).visits(x)
    }

    pub fn timeline(&self, net: &Network) -> WalkTimeline {
        WalkTimeline::new(net, self)
    }
}

/// Unit-speed pass across part of an arc starting at `start_time`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArcPass {
    pub start_time: Rational,
    pub from: Rational,
    pub to: Rational,
}

impl ArcPass {
    pub fn covers(&self, s: Rational) -> bool {
        if self.from < self.to {
            self.from <= s && s <= self.to
        } else {
            self.to <= s && s <= self.from
        }
    }

    pub fn time_at(&self, s: Rational) -> Rational {
        if self.from < self.to {
            self.start_time + (s - self.from)
        } else {
            self.start_time + (self.from - s)
        }
    }
}

/// Per-arc and per-node index of when a walk is where.
#[derive(Clone, Debug)]
pub struct WalkTimeline {
    pub duration: Rational,
    pub passes: Vec<Vec<ArcPass>>,
    pub node_visits: Vec<Vec<(Rational, Rational)>>,
    pub point_dwells: Vec<(Point, Rational, Rational)>,
}

impl WalkTimeline {
    pub fn new(net: &Network, walk: &Walk) -> WalkTimeline {
        let mut passes = vec![Vec::new(); net.arc_count()];
        let mut node_visits = vec![Vec::new(); net.node_count()];
        let mut point_dwells = Vec::new();
        let mut here = walk.start;
        let mut clock = zero();
        let mark = |p: &Point, a: Rational, b: Rational, nv: &mut Vec<Vec<_>>, pd: &mut Vec<_>| {
            match p {
                Point::Node(n) => nv[n.0].push((a, b)),
                Point::Interior { .. } if a < b => pd.push((*p, a, b)),
                Point::Interior { .. } => {}
            }
        };
        mark(&here, clock, clock, &mut node_visits, &mut point_dwells);
        for step in &walk.steps {
            let d = step.duration();
            match *step {
                Step::Traverse { arc, from, to } => {
                    passes[arc.0].push(ArcPass {
                        start_time: clock,
                        from,
                        to,
                    });
                    here = net.point_unchecked(arc, to);
                    clock += d;
                    mark(&here, clock, clock, &mut node_visits, &mut point_dwells);
                }
                Step::Dwell(_) => {
                    mark(&here, clock, clock + d, &mut node_visits, &mut point_dwells);
                    clock += d;
                }
            }
        }
        for v in &mut node_visits {
            *v = merge_intervals(std::mem::take(v));
        }
        WalkTimeline {
            duration: walk.duration,
            passes,
            node_visits,
            point_dwells,
        }
    }

    /// Visit intervals of `x` (instants have equal bounds), merged and sorted.
    pub fn visit_intervals(&self, x: &Point) -> Vec<(Rational, Rational)> {
        match *x {
            Point::Node(n) => self.node_visits[n.0].clone(),
            Point::Interior { arc, offset } => {
                let mut out: Vec<(Rational, Rational)> = self.passes[arc.0]
                    .iter()
                    .filter(|p| p.covers(offset))
                    .map(|p| {
                        let t = p.time_at(offset);
                        (t, t)
                    })
                    .collect();
                out.extend(
                    self.point_dwells
                        .iter()
                        .filter(|(p, _, _)| p == x)
                        .map(|&(_, a, b)| (a, b)),
                );
                merge_intervals(out)
            }
        }
    }

    pub fn visits(&self, x: &Point) -> Vec<Visit> {
        self.visit_intervals(x)
            .into_iter()
            .map(|(a, b)| {
                if a == b {
                    Visit::At(a)
                } else {
                    Visit::Dwell { from: a, to: b }
                }
            })
            .collect()
    }
}

pub(crate) fn merge_intervals(mut v: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
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
