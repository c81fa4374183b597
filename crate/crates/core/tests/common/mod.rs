//! Walk builders shared by the integration tests.

use patrol_core::network::{Step, Walk};
use patrol_core::rational::{rat, zero};
use patrol_core::strategy::{Phase, PatrolStrategy};
use patrol_core::{ArcId, Network, NodeId, Point};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Node path between two nodes of a tree.
pub fn tree_path(t: &Network, from: NodeId, to: NodeId) -> Vec<(ArcId, NodeId)> {
    let mut parent: Vec<Option<(ArcId, NodeId)>> = vec![None; t.node_count()];
    let mut seen = vec![false; t.node_count()];
    let mut queue = std::collections::VecDeque::from([from]);
    seen[from.0] = true;
    while let Some(v) = queue.pop_front() {
        for &a in t.incident(v) {
            let w = t.arc(a).other_end(v);
            if !seen[w.0] {
                seen[w.0] = true;
                parent[w.0] = Some((a, v));
                queue.push_back(w);
            }
        }
    }
    let mut out = Vec::new();
    let mut v = to;
    while v != from {
        let (a, p) = parent[v.0].unwrap();
        out.push((a, v));
        v = p;
    }
    out.reverse();
    out
}

pub fn cross(t: &Network, arc: ArcId, from: NodeId) -> Step {
    let len = t.length(arc);
    if t.arc(arc).u == from {
        Step::Traverse { arc, from: zero(), to: len }
    } else {
        Step::Traverse { arc, from: len, to: zero() }
    }
}

/// Closes a node walk by the tree path back to its start.
pub fn closed_walk(t: &Network, start: NodeId, moves: &[(ArcId, NodeId)]) -> Walk {
    let mut steps = Vec::new();
    let mut at = start;
    for &(a, w) in moves {
        steps.push(cross(t, a, at));
        at = w;
    }
    for (a, w) in tree_path(t, at, start) {
        steps.push(cross(t, a, at));
        at = w;
    }
    Walk::new(t, Point::Node(start), steps).unwrap()
}

pub fn random_walk_patrol(t: &Network, rng: &mut ChaCha8Rng) -> PatrolStrategy {
    let start = NodeId(rng.random_range(0..t.node_count()));
    let mut moves = Vec::new();
    let mut at = start;
    for _ in 0..rng.random_range(1..=30) {
        let inc = t.incident(at);
        let a = inc[rng.random_range(0..inc.len())];
        at = t.arc(a).other_end(at);
        moves.push((a, at));
    }
    let walk = closed_walk(t, start, &moves);
    let phase = if rng.random_bool(0.5) {
        Phase::Uniform
    } else {
        Phase::Fixed(rat(rng.random_range(0..64), 4))
    };
    PatrolStrategy::pure(walk, phase).unwrap()
}
