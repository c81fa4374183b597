//! m-factorizations of regular networks: validation, the round-robin
//! 1-factorization of a complete network, exhaustive enumeration of
//! 1-factorizations on small networks, δ minimization and the girth.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;

use crate::error::{parse_error, Error, Result};
use crate::network::format::{arc_by_name, strip_comment};
use crate::network::{ArcId, Network, NodeId};
use crate::rational::{zero, Rational};

/// Largest node count accepted by the exhaustive enumerator.
pub const ENUMERATION_NODE_LIMIT: usize = 8;

/// Why a list of factors is not an m-factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Factor is not `m`-regular at a node.
    NotRegular { factor: usize, node: String, degree: usize, expected: usize },
    /// Factor misses a node entirely.
    NotSpanning { factor: usize, node: String },
    /// Arc in no factor.
    Uncovered { arc: String },
    /// Arc in two factors.
    Overlap { arc: String, first: usize, second: usize },
    /// Arc listed twice inside one factor.
    Repeated { factor: usize, arc: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotRegular { factor, node, degree, expected } => write!(
                f,
                "factor {factor} has degree {degree} at node {node}, expected {expected}"
            ),
            Violation::NotSpanning { factor, node } => {
                write!(f, "factor {factor} does not span node {node}")
            }
            Violation::Uncovered { arc } => write!(f, "arc {arc} is in no factor"),
            Violation::Overlap { arc, first, second } => {
                write!(f, "arc {arc} is in factors {first} and {second}")
            }
            Violation::Repeated { factor, arc } => {
                write!(f, "factor {factor} lists arc {arc} twice")
            }
        }
    }
}

/// Validated factorization. Factors are sorted internally and listed in
/// order of their least arc, so equal factor sets compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factorization {
    regularity: usize,
    factors: Vec<Vec<ArcId>>,
}

impl Factorization {
    pub fn new(net: &Network, regularity: usize, factors: Vec<Vec<ArcId>>) -> Result<Factorization> {
        let violations = validate_factorization(net, &factors, regularity)?;
        if !violations.is_empty() {
            return Err(Error::InvalidFactorization(violations));
        }
        Ok(Self::canonical(regularity, factors))
    }

    fn canonical(regularity: usize, mut factors: Vec<Vec<ArcId>>) -> Factorization {
        for f in &mut factors {
            f.sort();
        }
        factors.sort();
        Factorization { regularity, factors }
    }

    pub fn regularity(&self) -> usize {
        self.regularity
    }

    pub fn factors(&self) -> &[Vec<ArcId>] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factor_length(&self, net: &Network, i: usize) -> Rational {
        self.factors[i].iter().map(|&a| net.length(a)).sum()
    }

    /// δ(F): the largest factor length.
    pub fn delta(&self, net: &Network) -> Rational {
        (0..self.len())
            .map(|i| self.factor_length(net, i))
            .max()
            .unwrap_or_else(zero)
    }

    /// Arcs of `Q_i = Q - F_i`, in id order.
    pub fn complement(&self, net: &Network, i: usize) -> Vec<ArcId> {
        net.arc_ids().filter(|a| self.factors[i].binary_search(a).is_err()).collect()
    }
}

/// Checks regularity, spanning and that every arc lies in exactly one
/// factor. An empty list means the factors form an `m`-factorization.
pub fn validate_factorization(net: &Network, factors: &[Vec<ArcId>], m: usize) -> Result<Vec<Violation>> {
    if !net.is_simple() {
        return Err(Error::NotSimple);
    }
    let mut out = Vec::new();
    let mut owner: Vec<Option<usize>> = vec![None; net.arc_count()];
    for (i, factor) in factors.iter().enumerate() {
        let mut degree = vec![0usize; net.node_count()];
        let mut seen = vec![false; net.arc_count()];
        for &a in factor {
            if a.0 >= net.arc_count() {
                return Err(Error::InvalidParameter(format!("unknown arc id {}", a.0)));
            }
            let name = net.arc(a).name.clone();
            if std::mem::replace(&mut seen[a.0], true) {
                out.push(Violation::Repeated { factor: i, arc: name });
                continue;
            }
            match owner[a.0] {
                Some(first) => out.push(Violation::Overlap { arc: name, first, second: i }),
                None => owner[a.0] = Some(i),
            }
            degree[net.arc(a).u.0] += 1;
            degree[net.arc(a).v.0] += 1;
        }
        for node in net.node_ids() {
            let d = degree[node.0];
            let name = net.node_name(node).to_string();
            if d == 0 && m > 0 {
                out.push(Violation::NotSpanning { factor: i, node: name });
            } else if d != m {
                out.push(Violation::NotRegular { factor: i, node: name, degree: d, expected: m });
            }
        }
    }
    for a in net.arc_ids() {
        if owner[a.0].is_none() {
            out.push(Violation::Uncovered { arc: net.arc(a).name.clone() });
        }
    }
    Ok(out)
}

fn arc_lookup(net: &Network) -> BTreeMap<(NodeId, NodeId), ArcId> {
    net.arc_ids()
        .map(|a| {
            let info = net.arc(a);
            ((info.u.min(info.v), info.u.max(info.v)), a)
        })
        .collect()
}

fn require_even_complete(net: &Network) -> Result<()> {
    if !net.is_simple() {
        return Err(Error::NotSimple);
    }
    if !net.is_complete() {
        return Err(Error::InvalidNetwork("network is not complete".into()));
    }
    if !net.node_count().is_multiple_of(2) {
        return Err(Error::InvalidNetwork(format!(
            "complete network on {} nodes has no 1-factorization",
            net.node_count()
        )));
    }
    Ok(())
}

/// Circle-method 1-factorization of `K_{2n}`: fix the last node, rotate the
/// others.
pub fn round_robin_one_factorization(net: &Network) -> Result<Factorization> {
    require_even_complete(net)?;
    let nodes: Vec<NodeId> = net.node_ids().collect();
    let lookup = arc_lookup(net);
    let arc = |a: NodeId, b: NodeId| lookup[&(a.min(b), a.max(b))];
    let k = nodes.len() - 1;
    let mut factors = Vec::with_capacity(k);
    for r in 0..k {
        let mut f = vec![arc(nodes[r], nodes[k])];
        for i in 1..=(k / 2) {
            f.push(arc(nodes[(r + i) % k], nodes[(r + k - i) % k]));
        }
        factors.push(f);
    }
    Factorization::new(net, 1, factors)
}

/// All perfect matchings as arc bitmasks.
fn perfect_matchings(net: &Network) -> Vec<u64> {
    fn extend(net: &Network, covered: u64, mask: u64, out: &mut Vec<u64>) {
        let n = net.node_count();
        let Some(first) = (0..n).find(|&v| covered & (1 << v) == 0) else {
            out.push(mask);
            return;
        };
        for &a in net.incident(NodeId(first)) {
            let w = net.arc(a).other_end(NodeId(first)).0;
            if covered & (1 << w) == 0 && w != first {
                extend(net, covered | (1 << first) | (1 << w), mask | (1 << a.0), out);
            }
        }
    }
    let mut out = Vec::new();
    extend(net, 0, 0, &mut out);
    out.sort_unstable();
    out
}

/// Exhaustive stream of 1-factorizations, each produced once as a set of
/// factors. At every level the next factor is the one holding the least
/// uncovered arc, which makes every factorization reachable by exactly one
/// path.
pub struct OneFactorizations<'a> {
    net: &'a Network,
    matchings: Vec<u64>,
    all: u64,
    /// Per level: covered mask before the level, candidates, next index.
    stack: Vec<(u64, Vec<u64>, usize)>,
    chosen: Vec<u64>,
}

impl<'a> OneFactorizations<'a> {
    fn candidates(&self, covered: u64) -> Vec<u64> {
        let free = self.all & !covered;
        let least = free & free.wrapping_neg();
        self.matchings
            .iter()
            .copied()
            .filter(|m| m & least != 0 && m & covered == 0)
            .collect()
    }

    fn emit(&self) -> Factorization {
        let factors = self
            .chosen
            .iter()
            .map(|&m| (0..64).filter(|b| m & (1 << b) != 0).map(ArcId).collect())
            .collect();
        Factorization::canonical(1, factors)
    }
}

impl Iterator for OneFactorizations<'_> {
    type Item = Factorization;

    fn next(&mut self) -> Option<Factorization> {
        while let Some((covered, cands, idx)) = self.stack.last_mut() {
            if *idx == cands.len() {
                self.stack.pop();
                continue;
            }
            let m = cands[*idx];
            *idx += 1;
            let covered = *covered | m;
            // replace this level's choice
            let depth = self.stack.len();
            self.chosen.truncate(depth - 1);
            self.chosen.push(m);
            if covered == self.all {
                let f = self.emit();
                return Some(f);
            }
            let next = self.candidates(covered);
            self.stack.push((covered, next, 0));
        }
        let _ = self.net;
        None
    }
}

/// Streams every 1-factorization of a simple regular network with at most
/// [`ENUMERATION_NODE_LIMIT`] nodes.
pub fn enumerate_one_factorizations(net: &Network) -> Result<OneFactorizations<'_>> {
    if !net.is_simple() {
        return Err(Error::NotSimple);
    }
    if net.node_count() > ENUMERATION_NODE_LIMIT {
        return Err(Error::SizeGuard(format!(
            "enumeration is limited to {ENUMERATION_NODE_LIMIT} nodes, network has {}",
            net.node_count()
        )));
    }
    if net.regular_degree().is_none() || !net.node_count().is_multiple_of(2) {
        return Err(Error::InvalidNetwork("network is not regular on an even node count".into()));
    }
    let all = if net.arc_count() == 64 { u64::MAX } else { (1u64 << net.arc_count()) - 1 };
    let mut it = OneFactorizations {
        net,
        matchings: perfect_matchings(net),
        all,
        stack: Vec::new(),
        chosen: Vec::new(),
    };
    let first = it.candidates(0);
    it.stack.push((0, first, 0));
    Ok(it)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Enumerate everything; refuses networks above the size guard.
    Exhaustive,
    /// Local search from the round-robin factorization.
    Heuristic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BestFactorization {
    pub factorization: Factorization,
    pub delta: Rational,
    /// True when the minimum was established by exhaustive enumeration.
    pub certified: bool,
    /// Number of factorizations examined (exhaustive mode).
    pub examined: u64,
}

pub fn best_one_factorization(net: &Network, mode: SearchMode) -> Result<BestFactorization> {
    match mode {
        SearchMode::Exhaustive => {
            let mut best: Option<(Rational, Factorization)> = None;
            let mut examined = 0;
            for f in enumerate_one_factorizations(net)? {
                examined += 1;
                let d = f.delta(net);
                if best.as_ref().is_none_or(|(b, _)| d < *b) {
                    best = Some((d, f));
                }
            }
            let (delta, factorization) =
                best.ok_or_else(|| Error::InvalidNetwork("network has no 1-factorization".into()))?;
            Ok(BestFactorization { factorization, delta, certified: true, examined })
        }
        SearchMode::Heuristic => {
            let start = round_robin_one_factorization(net)?;
            let factorization = improve_by_swaps(net, start);
            Ok(BestFactorization {
                delta: factorization.delta(net),
                factorization,
                certified: false,
                examined: 0,
            })
        }
    }
}

/// Swaps alternating cycles between the longest factor and the others while
/// that shortens the longer of the pair.
fn improve_by_swaps(net: &Network, f: Factorization) -> Factorization {
    let mut factors = f.factors.clone();
    let len = |arcs: &[ArcId]| arcs.iter().map(|&a| net.length(a)).sum::<Rational>();
    loop {
        let lengths: Vec<Rational> = factors.iter().map(|x| len(x)).collect();
        let worst = (0..factors.len()).max_by_key(|&i| (lengths[i], Reverse(i))).expect("factors");
        let mut improved = false;
        'pairs: for other in 0..factors.len() {
            if other == worst {
                continue;
            }
            for cycle in alternating_cycles(net, &factors[worst], &factors[other]) {
                let (mut a, mut b) = (factors[worst].clone(), factors[other].clone());
                for arc in &cycle {
                    if let Some(p) = a.iter().position(|x| x == arc) {
                        b.push(a.remove(p));
                    } else if let Some(p) = b.iter().position(|x| x == arc) {
                        a.push(b.remove(p));
                    }
                }
                let before = lengths[worst];
                if len(&a).max(len(&b)) < before {
                    factors[worst] = a;
                    factors[other] = b;
                    improved = true;
                    break 'pairs;
                }
            }
        }
        if !improved {
            return Factorization::canonical(f.regularity, factors);
        }
    }
}

/// The union of two disjoint perfect matchings splits into even cycles.
fn alternating_cycles(net: &Network, a: &[ArcId], b: &[ArcId]) -> Vec<Vec<ArcId>> {
    let mut used = vec![false; net.arc_count()];
    let partner = |m: &[ArcId], v: NodeId| m.iter().copied().find(|&x| net.arc(x).u == v || net.arc(x).v == v);
    let mut out = Vec::new();
    for &start in a {
        if used[start.0] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut arc = start;
        let mut at = net.arc(start).u;
        let mut in_a = true;
        loop {
            used[arc.0] = true;
            cycle.push(arc);
            at = net.arc(arc).other_end(at);
            in_a = !in_a;
            let next = if in_a { partner(a, at) } else { partner(b, at) };
            match next {
                Some(n) if !used[n.0] => arc = n,
                _ => break,
            }
        }
        out.push(cycle);
    }
    out
}

/// Minimum circuit length.
pub fn girth(net: &Network) -> Result<Rational> {
    let mut best: Option<Rational> = None;
    for a in net.arc_ids() {
        let info = net.arc(a);
        let cycle = if info.is_loop() {
            Some(info.length)
        } else {
            distance_without(net, a, info.u, info.v).map(|d| d + info.length)
        };
        if let Some(c) = cycle {
            if best.is_none_or(|b| c < b) {
                best = Some(c);
            }
        }
    }
    best.ok_or_else(|| Error::InvalidNetwork("network has no circuit".into()))
}

fn distance_without(net: &Network, skip: ArcId, from: NodeId, to: NodeId) -> Option<Rational> {
    let mut dist: Vec<Option<Rational>> = vec![None; net.node_count()];
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((zero(), from)));
    while let Some(Reverse((d, v))) = heap.pop() {
        if dist[v.0].is_some() {
            continue;
        }
        dist[v.0] = Some(d);
        if v == to {
            return Some(d);
        }
        for &a in net.incident(v) {
            if a == skip {
                continue;
            }
            let w = net.arc(a).other_end(v);
            if dist[w.0].is_none() {
                heap.push(Reverse((d + net.length(a), w)));
            }
        }
    }
    None
}

/// Reads one factor per line as whitespace-separated arc names. The
/// regularity is taken from `m`, or from the first factor's degree at the
/// first node when not given.
pub fn parse_factorization(net: &Network, text: &str, m: Option<usize>) -> Result<Factorization> {
    let mut factors = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let factor = line
            .split_whitespace()
            .map(|name| arc_by_name(net, name).map_err(|e| parse_error(i + 1, e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        factors.push(factor);
    }
    if factors.is_empty() {
        return Err(parse_error(text.lines().count().max(1), "no factors listed"));
    }
    let m = m.unwrap_or_else(|| {
        factors[0]
            .iter()
            .filter(|&&a| net.arc(a).u == NodeId(0) || net.arc(a).v == NodeId(0))
            .count()
    });
    Factorization::new(net, m, factors)
}

pub fn write_factorization(net: &Network, f: &Factorization) -> String {
    let mut out = String::new();
    for factor in f.factors() {
        let names: Vec<&str> = factor.iter().map(|&a| net.arc(a).name.as_str()).collect();
        out.push_str(&names.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::generators::{complete, cycle, path};
    use crate::rational::{int, rat};

    fn unit(n: usize) -> Network {
        complete(n, |_, _| int(1))
    }

    #[test]
    fn round_robin_sizes() {
        for (n, k, per) in [(4, 3, 2), (6, 5, 3), (8, 7, 4), (10, 9, 5)] {
            let net = unit(n);
            let f = round_robin_one_factorization(&net).unwrap();
            assert_eq!(f.len(), k);
            assert!(f.factors().iter().all(|x| x.len() == per));
            assert_eq!(f.delta(&net), int(per as i128));
        }
        assert!(round_robin_one_factorization(&unit(5)).is_err());
    }

    #[test]
    fn violations_are_named() {
        let net = unit(4);
        let a = |n: &str| net.arc_id(n).unwrap();
        let shared = vec![vec![a("v1-v2"), a("v3-v4")], vec![a("v1-v2"), a("v3-v4")], vec![a("v1-v3"), a("v2-v4")]];
        let v = validate_factorization(&net, &shared, 1).unwrap();
        assert!(v.iter().any(|x| matches!(x, Violation::Overlap { .. })));
        assert!(v.iter().any(|x| matches!(x, Violation::Uncovered { .. })));
        let f = round_robin_one_factorization(&net).unwrap();
        assert!(validate_factorization(&net, f.factors(), 1).unwrap().is_empty());

        let k6 = unit(6);
        let rr = round_robin_one_factorization(&k6).unwrap();
        let mut factors = rr.factors().to_vec();
        factors[0].pop();
        let v = validate_factorization(&k6, &factors, 1).unwrap();
        assert!(v.iter().any(|x| matches!(x, Violation::NotSpanning { factor: 0, .. })));
        assert!(matches!(Factorization::new(&k6, 1, factors), Err(Error::InvalidFactorization(_))));
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_one_factorizations(&unit(4)).unwrap().count(), 1);
        let all: Vec<_> = enumerate_one_factorizations(&unit(6)).unwrap().collect();
        assert_eq!(all.len(), 6);
        let mut dedup = all.clone();
        dedup.sort_by(|a, b| a.factors().cmp(b.factors()));
        dedup.dedup();
        assert_eq!(dedup.len(), 6);
        let k6 = unit(6);
        assert!(all.iter().all(|f| validate_factorization(&k6, f.factors(), 1).unwrap().is_empty()));
        assert!(matches!(enumerate_one_factorizations(&unit(10)), Err(Error::SizeGuard(_))));
    }

    #[test]
    fn best_factorizations() {
        let k4 = complete(4, |i, j| if (i, j) == (2, 3) { int(9) } else { int(1) });
        let best = best_one_factorization(&k4, SearchMode::Exhaustive).unwrap();
        assert_eq!(best.delta, int(10));
        assert!(best.certified);
        let best = best_one_factorization(&unit(6), SearchMode::Exhaustive).unwrap();
        assert_eq!(best.delta, int(3));
        assert_eq!(best.examined, 6);
        let h = best_one_factorization(&unit(10), SearchMode::Heuristic).unwrap();
        assert_eq!(h.delta, int(5));
        assert!(!h.certified);
    }

    #[test]
    fn heuristic_does_not_get_worse() {
        let net = complete(8, |i, j| rat(((i * 7 + j * 3) % 5 + 1) as i128, 2));
        let rr = round_robin_one_factorization(&net).unwrap().delta(&net);
        let h = best_one_factorization(&net, SearchMode::Heuristic).unwrap();
        assert!(h.delta <= rr);
        assert!(validate_factorization(&net, h.factorization.factors(), 1).unwrap().is_empty());
    }

    #[test]
    fn girths() {
        assert_eq!(girth(&unit(4)).unwrap(), int(3));
        assert_eq!(girth(&unit(6)).unwrap(), int(3));
        assert_eq!(girth(&cycle(&[int(1), int(2), int(3), int(4)])).unwrap(), int(10));
        assert!(girth(&path(&[int(1), int(1)])).is_err());
    }

    #[test]
    fn file_round_trip() {
        let net = unit(6);
        let f = round_robin_one_factorization(&net).unwrap();
        let text = write_factorization(&net, &f);
        assert_eq!(parse_factorization(&net, &text, None).unwrap(), f);
        assert_eq!(parse_factorization(&net, &text, Some(1)).unwrap(), f);
        assert!(matches!(
            parse_factorization(&net, "v1-v2 nope\n", None),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
