//! Small network families used by tests, the CLI and the Python bindings.

use rand::Rng;

use super::{Network, NetworkBuilder};
use crate::rational::{rat, Rational};

/// Path `p0 - p1 - ... - pk` with the given arc lengths.
pub fn path(lengths: &[Rational]) -> Network {
    let mut b = NetworkBuilder::new();
    let mut prev = b.add_node("p0").unwrap();
    for (i, len) in lengths.iter().enumerate() {
        let next = b.add_node(&format!("p{}", i + 1)).unwrap();
        b.add_arc(&format!("e{i}"), prev, next, *len).unwrap();
        prev = next;
    }
    b.build().expect("path is connected")
}

/// Star with centre `c` and leaves `l0..`.
pub fn star(lengths: &[Rational]) -> Network {
    let mut b = NetworkBuilder::new();
    let c = b.add_node("c").unwrap();
    for (i, len) in lengths.iter().enumerate() {
        let leaf = b.add_node(&format!("l{i}")).unwrap();
        b.add_arc(&format!("e{i}"), c, leaf, *len).unwrap();
    }
    b.build().expect("star is connected")
}

/// Cycle through `n0..n{k-1}`; needs at least 3 arcs to be simple.
pub fn cycle(lengths: &[Rational]) -> Network {
    let mut b = NetworkBuilder::new();
    let k = lengths.len();
    let nodes: Vec<_> = (0..k).map(|i| b.add_node(&format!("n{i}")).unwrap()).collect();
    for (i, len) in lengths.iter().enumerate() {
        b.add_arc(&format!("e{i}"), nodes[i], nodes[(i + 1) % k], *len)
            .unwrap();
    }
    b.build().expect("cycle is connected")
}

/// Complete network on nodes `v1..vn`; arcs `vi-vj` (i < j) in
/// lexicographic order, with lengths from `length(i, j)` (0-based).
pub fn complete(n: usize, length: impl Fn(usize, usize) -> Rational) -> Network {
    let mut b = NetworkBuilder::new();
    let nodes: Vec<_> = (0..n).map(|i| b.add_node(&format!("v{}", i + 1)).unwrap()).collect();
    for i in 0..n {
        for j in i + 1..n {
            b.add_arc(&format!("v{}-v{}", i + 1, j + 1), nodes[i], nodes[j], length(i, j))
                .unwrap();
        }
    }
    b.build().expect("complete network is connected")
}

/// Ten-unit tree with five leaves used as the running example throughout
/// the test suites: A-L5 (1), A-L62 (2), A-B (1), B-L22 (2), B-C (2),
/// C-L3 (1), C-L4 (1).
pub fn sample_tree() -> Network {
    let mut b = NetworkBuilder::new();
    for name in ["A", "B", "C", "L3", "L4", "L5", "L22", "L62"] {
        b.add_node(name).unwrap();
    }
    let arcs = [
        ("AL5", "A", "L5", 1),
        ("AL62", "A", "L62", 2),
        ("AB", "A", "B", 1),
        ("BL22", "B", "L22", 2),
        ("BC", "B", "C", 2),
        ("CL3", "C", "L3", 1),
        ("CL4", "C", "L4", 1),
    ];
    for (name, u, v, len) in arcs {
        let (u, v) = (b.node_id(u).unwrap(), b.node_id(v).unwrap());
        b.add_arc(name, u, v, Rational::from_integer(len)).unwrap();
    }
    b.build().unwrap()
}

/// Random tree with `arcs` arcs; each new node attaches to a uniformly
/// chosen existing node, lengths are `k / denom` with `1 <= k <= max_numer`.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, arcs: usize, max_numer: i128, denom: i128) -> Network {
    let mut b = NetworkBuilder::new();
    let mut nodes = vec![b.add_node("t0").unwrap()];
    for i in 0..arcs {
        let parent = nodes[rng.random_range(0..nodes.len())];
        let child = b.add_node(&format!("t{}", i + 1)).unwrap();
        let len = rat(rng.random_range(1..=max_numer), denom);
        b.add_arc(&format!("a{i}"), parent, child, len).unwrap();
        nodes.push(child);
    }
    b.build().unwrap()
}

/// Random connected network: a random spanning tree plus `extra` arcs
/// between distinct non-adjacent node pairs where possible.
pub fn random_connected<R: Rng + ?Sized>(
    rng: &mut R,
    nodes: usize,
    extra: usize,
    max_numer: i128,
    denom: i128,
) -> Network {
    let mut b = NetworkBuilder::new();
    let ids: Vec<_> = (0..nodes).map(|i| b.add_node(&format!("n{i}")).unwrap()).collect();
    let mut pairs = std::collections::HashSet::new();
    let mut count = 0;
    for i in 1..nodes {
        let j = rng.random_range(0..i);
        pairs.insert((j, i));
        b.add_arc(&format!("a{count}"), ids[j], ids[i], rat(rng.random_range(1..=max_numer), denom))
            .unwrap();
        count += 1;
    }
    let mut attempts = 0;
    let mut added = 0;
    while added < extra && attempts < 100 * (extra + 1) {
        attempts += 1;
        let i = rng.random_range(0..nodes);
        let j = rng.random_range(0..nodes);
        let key = (i.min(j), i.max(j));
        if i == j || pairs.contains(&key) {
            continue;
        }
        pairs.insert(key);
        b.add_arc(&format!("a{count}"), ids[key.0], ids[key.1], rat(rng.random_range(1..=max_numer), denom))
            .unwrap();
        count += 1;
        added += 1;
    }
    b.build().unwrap()
}
