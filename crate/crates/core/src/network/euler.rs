use super::{ArcId, Network, NodeId, Point, Step, Walk};
use crate::error::{Error, Result};
use crate::rational::zero;

/// Closed walk traversing every arc exactly once.
pub fn eulerian_tour(net: &Network) -> Result<Walk> {
    let arcs: Vec<ArcId> = net.arc_ids().collect();
    eulerian_circuit(net, &arcs)
}

/// Hierholzer's algorithm restricted to the sub-network formed by `arcs`.
///
/// The circuit starts at the lowest-numbered node touched by `arcs` and,
/// at each node, leaves by the lowest-numbered unused arc.
pub fn eulerian_circuit(net: &Network, arcs: &[ArcId]) -> Result<Walk> {
    if arcs.is_empty() {
        return Err(Error::InvalidParameter("no arcs to tour".into()));
    }
    let mut degree = vec![0usize; net.node_count()];
    let mut in_set = vec![false; net.arc_count()];
    for &a in arcs {
        if in_set[a.0] {
            return Err(Error::InvalidParameter(format!("arc {} listed twice", net.arc(a).name)));
        }
        in_set[a.0] = true;
        let info = net.arc(a);
        degree[info.u.0] += 1;
        degree[info.v.0] += 1;
    }
    if degree.iter().any(|d| d % 2 == 1) {
        return Err(Error::NotEulerian);
    }
    let start = NodeId(degree.iter().position(|&d| d > 0).expect("some arc"));

    let mut adjacency: Vec<Vec<ArcId>> = net
        .node_ids()
        .map(|n| {
            let mut v: Vec<ArcId> = net.incident(n).iter().copied().filter(|a| in_set[a.0]).collect();
            v.sort();
            v.dedup();
            v.reverse();
            v
        })
        .collect();
    let mut used = vec![false; net.arc_count()];
    // stack of (node, arc used to arrive)
    let mut stack: Vec<(NodeId, Option<ArcId>)> = vec![(start, None)];
    let mut circuit: Vec<(NodeId, Option<ArcId>)> = Vec::with_capacity(arcs.len() + 1);
    while let Some(&(node, _)) = stack.last() {
        let next = loop {
            match adjacency[node.0].last().copied() {
                Some(a) if used[a.0] => {
                    adjacency[node.0].pop();
                }
                other => break other,
            }
        };
        match next {
            Some(a) => {
                used[a.0] = true;
                adjacency[node.0].pop();
                stack.push((net.arc(a).other_end(node), Some(a)));
            }
            None => circuit.push(stack.pop().expect("nonempty")),
        }
    }
    if circuit.len() != arcs.len() + 1 {
        return Err(Error::InvalidParameter("arcs do not form a connected sub-network".into()));
    }
    circuit.reverse();
    let mut steps = Vec::with_capacity(arcs.len());
    for pair in circuit.windows(2) {
        let (from_node, _) = pair[0];
        let (_, Some(arc)) = pair[1] else { unreachable!() };
        let info = net.arc(arc);
        let (from, to) = if info.u == from_node {
            (zero(), info.length)
        } else {
            (info.length, zero())
        };
        steps.push(Step::Traverse { arc, from, to });
    }
    Walk::new(net, Point::Node(start), steps)
}
