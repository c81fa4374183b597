//! Grid best responses for the Attacker and exhaustive walk-family search
//! for the Patroller. Both evaluate exactly and break ties by enumeration
//! order, so results do not depend on the thread schedule.

use rayon::prelude::*;

use super::{EvaluationResult, MethodTag, PreparedPatrol};
use crate::error::{Error, Result};
use crate::network::{ArcId, Network, Point, Step, Walk};
use crate::rational::{int, to_f64, zero, Rational};
use crate::strategy::{AttackStrategy, Phase, PatrolStrategy};

/// Attacker grid: every node, the extra points, and arc offsets at
/// multiples of `space_step`; start times at multiples of `time_step` below
/// `time_span` (only when the patrol depends on the start time).
#[derive(Clone, Debug)]
pub struct GridSpec {
    pub space_step: Rational,
    pub time_step: Rational,
    /// Defaults to the longest component period.
    pub time_span: Option<Rational>,
    pub extra_points: Vec<Point>,
}

impl GridSpec {
    pub fn new(space_step: Rational, time_step: Rational) -> Self {
        GridSpec { space_step, time_step, time_span: None, extra_points: Vec::new() }
    }

    pub fn points(&self, net: &Network) -> Vec<Point> {
        let mut pts: Vec<Point> = net.node_ids().map(Point::Node).collect();
        for arc in net.arc_ids() {
            let len = net.length(arc);
            let mut k = 1;
            while int(k) * self.space_step < len {
                pts.push(net.point(arc, int(k) * self.space_step).expect("offset inside arc"));
                k += 1;
            }
        }
        pts.extend(self.extra_points.iter().copied());
        pts.sort();
        pts.dedup();
        pts
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BestResponse {
    pub point: Point,
    pub time: Rational,
    pub probability: Rational,
    pub points_examined: usize,
    pub times_examined: usize,
    pub space_step: Rational,
    pub time_step: Rational,
}

impl BestResponse {
    pub fn to_result(&self) -> EvaluationResult {
        EvaluationResult {
            method: MethodTag::Grid,
            probability: to_f64(&self.probability),
            exact: Some(self.probability),
            ci_halfwidth: None,
            trials: None,
            seed: None,
            argmin: Some((self.point, self.time)),
        }
    }
}

/// Minimizes the exact interception probability over the grid.
pub fn attacker_best_response(
    net: &Network,
    patrol: &PatrolStrategy,
    alpha: Rational,
    grid: &GridSpec,
) -> Result<BestResponse> {
    if grid.space_step <= zero() || grid.time_step <= zero() {
        return Err(Error::InvalidParameter("grid steps must be positive".into()));
    }
    patrol.validate_on(net)?;
    for p in &grid.extra_points {
        net.validate_point(p)?;
    }
    let prepared = PreparedPatrol::new(net, patrol);
    let times = if prepared.time_invariant() {
        vec![zero()]
    } else {
        let span = grid.time_span.unwrap_or_else(|| {
            patrol
                .components()
                .iter()
                .map(|c| c.walk.duration())
                .max()
                .unwrap_or_else(zero)
        });
        let mut v = vec![zero()];
        let mut k = 1;
        while int(k) * grid.time_step < span {
            v.push(int(k) * grid.time_step);
            k += 1;
        }
        v
    };
    let points = grid.points(net);
    let best = points
        .par_iter()
        .map(|x| {
            times
                .iter()
                .map(|&t| (prepared.hit(x, t, alpha), t))
                .reduce(|a, b| if b.0 < a.0 { b } else { a })
                .expect("at least one time")
        })
        .collect::<Vec<_>>();
    let (i, &(probability, time)) = best
        .iter()
        .enumerate()
        .reduce(|a, b| if b.1 .0 < a.1 .0 { b } else { a })
        .expect("networks have nodes");
    Ok(BestResponse {
        point: points[i],
        time,
        probability,
        points_examined: points.len(),
        times_examined: times.len(),
        space_step: grid.space_step,
        time_step: grid.time_step,
    })
}

/// Unit-speed walks that start on a grid point and then cross whole arcs.
#[derive(Clone, Debug)]
pub struct SearchFamily {
    /// Maximum number of whole-arc steps.
    pub max_steps: usize,
    /// Interior start offsets are multiples of this step.
    pub offset_step: Rational,
    /// A walk stops growing once it lasts this long; defaults to the
    /// attack's latest start plus `alpha`.
    pub duration_target: Option<Rational>,
    pub limit: usize,
}

impl SearchFamily {
    pub fn new(max_steps: usize, offset_step: Rational) -> Self {
        SearchFamily { max_steps, offset_step, duration_target: None, limit: 2_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub walk: Walk,
    pub probability: Rational,
    pub examined: usize,
}

fn traverse(net: &Network, arc: ArcId, from_node: crate::NodeId) -> Step {
    let len = net.length(arc);
    if net.arc(arc).u == from_node {
        Step::Traverse { arc, from: zero(), to: len }
    } else {
        Step::Traverse { arc, from: len, to: zero() }
    }
}

/// Every walk of the family; all prefixes are members.
pub fn search_walks(net: &Network, family: &SearchFamily, target: Rational) -> Result<Vec<Walk>> {
    if family.offset_step <= zero() {
        return Err(Error::InvalidParameter("offset step must be positive".into()));
    }
    // (start point, initial partial steps, node reached, elapsed)
    let mut starts: Vec<(Point, Vec<Step>, Option<crate::NodeId>, Rational)> = Vec::new();
    for n in net.node_ids() {
        starts.push((Point::Node(n), Vec::new(), Some(n), zero()));
    }
    for arc in net.arc_ids() {
        let a = net.arc(arc);
        let len = a.length;
        let mut k = 1;
        while int(k) * family.offset_step < len {
            let s = int(k) * family.offset_step;
            let p = net.point(arc, s)?;
            starts.push((p, Vec::new(), None, zero()));
            starts.push((p, vec![Step::Traverse { arc, from: s, to: len }], Some(a.v), len - s));
            starts.push((p, vec![Step::Traverse { arc, from: s, to: zero() }], Some(a.u), s));
            k += 1;
        }
    }
    let mut out = Vec::new();
    let guard = |n: usize| {
        if n > family.limit {
            Err(Error::SizeGuard(format!("walk family exceeds {} walks", family.limit)))
        } else {
            Ok(())
        }
    };
    for (start, prefix, node, elapsed) in starts {
        out.push(Walk::new(net, start, prefix.clone())?);
        guard(out.len())?;
        let Some(node) = node else { continue };
        if elapsed >= target {
            continue;
        }
        // explicit stack of (node, steps, elapsed, next incident index)
        let mut stack = vec![(node, prefix.clone(), elapsed, 0usize)];
        while let Some(top) = stack.last_mut() {
            let (at, ref steps, el, ref mut next) = *top;
            let inc = net.incident(at);
            if *next >= inc.len() || steps.len() - prefix.len() >= family.max_steps {
                stack.pop();
                continue;
            }
            let arc = inc[*next];
            *next += 1;
            let mut steps = steps.clone();
            steps.push(traverse(net, arc, at));
            let el = el + net.length(arc);
            let to = net.arc(arc).other_end(at);
            out.push(Walk::new(net, start, steps.clone())?);
            guard(out.len())?;
            if el < target {
                stack.push((to, steps, el, 0));
            }
        }
    }
    Ok(out)
}

/// Best pure walk (phase 0) of the family against `attack`.
pub fn patrol_search(
    net: &Network,
    attack: &AttackStrategy,
    alpha: Rational,
    family: &SearchFamily,
) -> Result<SearchResult> {
    attack.spatial.validate(net)?;
    let target = family.duration_target.unwrap_or(attack.temporal.latest() + alpha);
    let walks = search_walks(net, family, target)?;
    let values: Vec<Rational> = walks
        .par_iter()
        .map(|w| {
            let p = PatrolStrategy::pure(w.clone(), Phase::Fixed(zero())).expect("pure walks are valid");
            PreparedPatrol::new(net, &p).evaluate_exact(net, attack, alpha)
        })
        .collect();
    let (i, &probability) = values
        .iter()
        .enumerate()
        .reduce(|a, b| if b.1 > a.1 { b } else { a })
        .expect("family contains the start points");
    Ok(SearchResult { walk: walks[i].clone(), probability, examined: walks.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::round_robin_one_factorization;
    use crate::measure::SpatialMeasure;
    use crate::network::generators::{complete, path};
    use crate::network::NodeId;
    use crate::rational::{one, rat};
    use crate::strategy::{complete_patrolling, TemporalLaw};

    #[test]
    fn complete_patrol_minimum_is_regular_value() {
        let k4 = complete(4, |_, _| int(1));
        let p = complete_patrolling(&k4, &round_robin_one_factorization(&k4).unwrap()).unwrap();
        let r = attacker_best_response(&k4, &p, int(3), &GridSpec::new(rat(1, 8), rat(1, 8))).unwrap();
        assert_eq!(r.probability, rat(1, 2));
        assert!(!r.point.is_node());
        assert_eq!(r.times_examined, 1);
    }

    #[test]
    fn stationary_patrol_leaves_points_open() {
        let net = path(&[int(2)]);
        let p = PatrolStrategy::pure(Walk::stationary(Point::Node(NodeId(0))), Phase::Fixed(zero())).unwrap();
        let r = attacker_best_response(&net, &p, one(), &GridSpec::new(rat(1, 2), one())).unwrap();
        assert_eq!(r.probability, zero());
        assert_ne!(r.point, Point::Node(NodeId(0)));
    }

    #[test]
    fn search_reaches_a_far_atom() {
        let net = path(&[int(1), int(1)]);
        let spatial = SpatialMeasure { atoms: vec![(Point::Node(NodeId(2)), one())], uniform: vec![] };
        let a = AttackStrategy::new(&net, spatial, TemporalLaw::Fixed(int(1))).unwrap();
        let r = patrol_search(&net, &a, one(), &SearchFamily::new(3, rat(1, 2))).unwrap();
        assert_eq!(r.probability, one());
    }

    #[test]
    fn family_guard() {
        let k4 = complete(4, |_, _| int(1));
        let mut f = SearchFamily::new(8, rat(1, 4));
        f.limit = 100;
        assert!(matches!(search_walks(&k4, &f, int(20)), Err(Error::SizeGuard(_))));
    }
}
