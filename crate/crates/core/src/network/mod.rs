//! Metric multigraphs, points on them, and the measurable pieces the rest
//! of the crate works with.
//!
//! A [`Network`] is immutable once built. Nodes and arcs are addressed by
//! dense ids ([`NodeId`], [`ArcId`]) assigned in declaration order; that
//! order is the canonical order used for tie-breaking everywhere else.

mod euler;
pub mod format;
pub mod generators;
pub mod local_tree;
mod point;
mod region;
mod walk;

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

pub use euler::{eulerian_circuit, eulerian_tour};
pub use point::Point;
pub use region::{Region, Segment};
pub use walk::{ArcPass, Step, Visit, Walk, WalkTimeline};

use crate::error::{Error, Result};
use crate::rational::{zero, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkArc {
    pub name: String,
    pub u: NodeId,
    pub v: NodeId,
    pub length: Rational,
}

impl NetworkArc {
    pub fn other_end(&self, node: NodeId) -> NodeId {
        if node == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

/// Connected metric multigraph with positive rational arc lengths.
#[derive(Clone, Debug)]
pub struct Network {
    node_names: Vec<String>,
    arcs: Vec<NetworkArc>,
    incidence: Vec<Vec<ArcId>>,
    node_index: HashMap<String, NodeId>,
    arc_index: HashMap<String, ArcId>,
    total_length: Rational,
}

impl PartialEq for Network {
    fn eq(&self, other: &Self) -> bool {
        self.node_names == other.node_names && self.arcs == other.arcs
    }
}

#[derive(Default, Debug, Clone)]
pub struct NetworkBuilder {
    node_names: Vec<String>,
    arcs: Vec<NetworkArc>,
    node_index: HashMap<String, NodeId>,
    arc_index: HashMap<String, ArcId>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && !name
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '@' | '#' | '[' | ']' | ',' | ';' | ':'))
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, name: &str) -> Result<NodeId> {
        if !valid_name(name) {
            return Err(Error::InvalidNetwork(format!("invalid node name {name:?}")));
        }
        if self.node_index.contains_key(name) {
            return Err(Error::InvalidNetwork(format!("duplicate node {name}")));
        }
        let id = NodeId(self.node_names.len());
        self.node_names.push(name.to_string());
        self.node_index.insert(name.to_string(), id);
        Ok(id)
    }

    /// Returns the id of `name`, declaring it first if needed.
    pub fn node(&mut self, name: &str) -> Result<NodeId> {
        match self.node_index.get(name) {
            Some(id) => Ok(*id),
            None => self.add_node(name),
        }
    }

    pub fn node_id(&self, name: &str) -> Option<NodeId> {
        self.node_index.get(name).copied()
    }

    pub fn add_arc(&mut self, name: &str, u: NodeId, v: NodeId, length: Rational) -> Result<ArcId> {
        if !valid_name(name) {
            return Err(Error::InvalidNetwork(format!("invalid arc name {name:?}")));
        }
        if self.arc_index.contains_key(name) {
            return Err(Error::InvalidNetwork(format!("duplicate arc {name}")));
        }
        if u.0 >= self.node_names.len() || v.0 >= self.node_names.len() {
            return Err(Error::InvalidNetwork(format!("arc {name} has an unknown endpoint")));
        }
        if length <= zero() {
            return Err(Error::InvalidNetwork(format!("arc {name} has nonpositive length")));
        }
        let id = ArcId(self.arcs.len());
        self.arcs.push(NetworkArc {
            name: name.to_string(),
            u,
            v,
            length,
        });
        self.arc_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn build(self) -> Result<Network> {
        if self.arcs.is_empty() {
            return Err(Error::InvalidNetwork("network has no arcs".into()));
        }
        let mut incidence = vec![Vec::new(); self.node_names.len()];
        for (i, arc) in self.arcs.iter().enumerate() {
            incidence[arc.u.0].push(ArcId(i));
            incidence[arc.v.0].push(ArcId(i));
        }
        let total_length = self.arcs.iter().map(|a| a.length).sum();
        let net = Network {
            node_names: self.node_names,
            arcs: self.arcs,
            incidence,
            node_index: self.node_index,
            arc_index: self.arc_index,
            total_length,
        };
        let all: Vec<ArcId> = net.arc_ids().collect();
        if !net.arcs_connect_all_nodes(&all) {
            return Err(Error::InvalidNetwork("network is disconnected".into()));
        }
        Ok(net)
    }
}

impl Network {
    pub fn node_count(&self) -> usize {
        self.node_names.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.node_names.len()).map(NodeId)
    }

    pub fn arc_ids(&self) -> impl Iterator<Item = ArcId> + '_ {
        (0..self.arcs.len()).map(ArcId)
    }

    pub fn arc(&self, id: ArcId) -> &NetworkArc {
        &self.arcs[id.0]
    }

    pub fn arcs(&self) -> &[NetworkArc] {
        &self.arcs
    }

    pub fn length(&self, id: ArcId) -> Rational {
        self.arcs[id.0].length
    }

    pub fn node_name(&self, id: NodeId) -> &str {
        &self.node_names[id.0]
    }

    pub fn node_id(&self, name: &str) -> Option<NodeId> {
        self.node_index.get(name).copied()
    }

    pub fn arc_id(&self, name: &str) -> Option<ArcId> {
        self.arc_index.get(name).copied()
    }

    /// Arcs incident to `node`; a loop is listed twice.
    pub fn incident(&self, node: NodeId) -> &[ArcId] {
        &self.incidence[node.0]
    }

    /// μ, the sum of all arc lengths.
    pub fn total_length(&self) -> Rational {
        self.total_length
    }

    pub fn node_degree(&self, node: NodeId) -> usize {
        self.incidence[node.0].len()
    }

    /// No loops and at most one arc between any pair of nodes.
    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.arcs.iter().all(|a| {
            let key = if a.u < a.v { (a.u, a.v) } else { (a.v, a.u) };
            !a.is_loop() && seen.insert(key)
        })
    }

    pub fn is_tree(&self) -> bool {
        self.arcs.len() + 1 == self.node_names.len()
    }

    pub fn leaf_nodes(&self) -> Vec<NodeId> {
        self.node_ids().filter(|&n| self.node_degree(n) == 1).collect()
    }

    pub fn is_eulerian(&self) -> bool {
        self.node_ids().all(|n| self.node_degree(n).is_multiple_of(2))
    }

    /// Simple network on `k + 1` nodes with every pair joined.
    pub fn is_complete(&self) -> bool {
        let n = self.node_count();
        self.is_simple() && self.arcs.len() == n * (n - 1) / 2
    }

    /// Degree `k` if every node has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let k = self.node_degree(NodeId(0));
        self.node_ids().all(|n| self.node_degree(n) == k).then_some(k)
    }

    /// Whether the sub-network formed by `arcs` is connected and spans
    /// every node.
    pub fn arcs_connect_all_nodes(&self, arcs: &[ArcId]) -> bool {
        let n = self.node_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for a in arcs {
            let arc = self.arc(*a);
            let (ru, rv) = (find(&mut parent, arc.u.0), find(&mut parent, arc.v.0));
            parent[ru] = rv;
        }
        let root = find(&mut parent, 0);
        (0..n).all(|x| find(&mut parent, x) == root)
    }

    /// Builds a point, normalizing offsets `0` and `length` to nodes.
    pub fn point(&self, arc: ArcId, offset: Rational) -> Result<Point> {
        let Some(info) = self.arcs.get(arc.0) else {
            return Err(Error::InvalidPoint(format!("unknown arc id {}", arc.0)));
        };
        if offset < zero() || offset > info.length {
            return Err(Error::InvalidPoint(format!(
                "offset {} outside arc {}",
                offset, info.name
            )));
        }
        Ok(if offset == zero() {
            Point::Node(info.u)
        } else if offset == info.length {
            Point::Node(info.v)
        } else {
            Point::Interior { arc, offset }
        })
    }

    pub(crate) fn point_unchecked(&self, arc: ArcId, offset: Rational) -> Point {
        self.point(arc, offset).expect("offset within arc")
    }

    pub fn validate_point(&self, p: &Point) -> Result<()> {
        match *p {
            Point::Node(n) if n.0 < self.node_count() => Ok(()),
            Point::Node(n) => Err(Error::InvalidPoint(format!("unknown node id {}", n.0))),
            Point::Interior { arc, offset } => match self.point(arc, offset)? {
                Point::Interior { .. } => Ok(()),
                _ => Err(Error::InvalidPoint("interior point at an arc end".into())),
            },
        }
    }

    /// Offset of `p` along `arc`, if `p` lies on that arc (nodes lie on
    /// their incident arcs at offset 0 or the arc length).
    pub fn offset_on(&self, p: &Point, arc: ArcId) -> Option<Rational> {
        let info = self.arc(arc);
        match *p {
            Point::Interior { arc: a, offset } if a == arc => Some(offset),
            Point::Interior { .. } => None,
            Point::Node(n) if n == info.u => Some(zero()),
            Point::Node(n) if n == info.v => Some(info.length),
            Point::Node(_) => None,
        }
    }

    /// Shortest-path distances from `p` to every node.
    pub fn node_distances_from(&self, p: &Point) -> Vec<Rational> {
        let mut dist: Vec<Option<Rational>> = vec![None; self.node_count()];
        let mut heap = BinaryHeap::new();
        let seed = |node: NodeId, d: Rational, heap: &mut BinaryHeap<_>| {
            heap.push(Reverse((d, node)));
        };
        match *p {
            Point::Node(n) => seed(n, zero(), &mut heap),
            Point::Interior { arc, offset } => {
                let info = self.arc(arc);
                seed(info.u, offset, &mut heap);
                seed(info.v, info.length - offset, &mut heap);
            }
        }
        while let Some(Reverse((d, node))) = heap.pop() {
            if dist[node.0].is_some() {
                continue;
            }
            dist[node.0] = Some(d);
            for &a in self.incident(node) {
                let info = self.arc(a);
                let next = info.other_end(node);
                if dist[next.0].is_none() {
                    heap.push(Reverse((d + info.length, next)));
                }
            }
        }
        dist.into_iter()
            .map(|d| d.expect("network is connected"))
            .collect()
    }

    /// Length of a shortest path between two points.
    pub fn distance(&self, a: &Point, b: &Point) -> Rational {
        let from_a = self.node_distances_from(a);
        match *b {
            Point::Node(n) => from_a[n.0],
            Point::Interior { arc, offset } => {
                let info = self.arc(arc);
                let mut best = crate::rational::min(
                    from_a[info.u.0] + offset,
                    from_a[info.v.0] + info.length - offset,
                );
                if let Some(sa) = self.offset_on(a, arc) {
                    let direct = if sa > offset { sa - offset } else { offset - sa };
                    best = crate::rational::min(best, direct);
                }
                best
            }
        }
    }

    /// Components of the tree minus `x`, each with its measure.
    pub fn components_after_removal(&self, x: &Point) -> Result<Vec<(Region, Rational)>> {
        if !self.is_tree() {
            return Err(Error::NotATree);
        }
        self.validate_point(x)?;
        Ok(Region::whole(self)
            .components(self, Some(x))
            .into_iter()
            .map(|r| {
                let m = r.measure();
                (r, m)
            })
            .collect())
    }

    /// Checks `0 < alpha` against the minimum tour time: `2μ` for trees,
    /// `μ` for Eulerian networks. Other networks accept `alpha <= 2μ` with
    /// a warning, since their minimum tour time is not computed here.
    pub fn validate_alpha(&self, alpha: Rational) -> Result<()> {
        let mu = self.total_length;
        let reject = |reason: String| Error::InvalidAlpha {
            alpha: crate::rational::format_rational(&alpha),
            reason,
        };
        if alpha <= zero() {
            return Err(reject("must be positive".into()));
        }
        let two_mu = mu + mu;
        if self.is_tree() {
            if alpha > two_mu {
                return Err(reject(format!("exceeds the tree tour time {two_mu}")));
            }
        } else if self.is_eulerian() {
            if alpha > mu {
                return Err(reject(format!("exceeds the Eulerian tour time {mu}")));
            }
        } else if alpha > two_mu {
            return Err(reject(format!("exceeds twice the network length {two_mu}")));
        } else {
            log::warn!("minimum tour time not computed for this network; accepting alpha = {alpha} <= 2μ");
        }
        Ok(())
    }

    /// Human-readable form of a point: a node name or `arc@offset`.
    pub fn point_label(&self, p: &Point) -> String {
        format::format_point(self, p)
    }
}

#[cfg(test)]
mod tests {
    use super::generators::{complete, cycle, path, sample_tree};
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn total_lengths() {
        assert_eq!(sample_tree().total_length(), int(10));
        assert_eq!(path(&[int(7)]).total_length(), int(7));
        assert_eq!(complete(4, |_, _| int(1)).total_length(), int(6));
    }

    #[test]
    fn distances() {
        let t = sample_tree();
        let l3 = Point::Node(t.node_id("L3").unwrap());
        let l4 = Point::Node(t.node_id("L4").unwrap());
        assert_eq!(t.distance(&l3, &l4), int(2));
        assert_eq!(t.distance(&l3, &l3), int(0));
        let k4 = complete(4, |_, _| int(1));
        assert_eq!(k4.distance(&Point::Node(NodeId(0)), &Point::Node(NodeId(2))), int(1));
        // two points on the same arc
        let p = k4.point(ArcId(0), rat(1, 4)).unwrap();
        let q = k4.point(ArcId(0), rat(3, 4)).unwrap();
        assert_eq!(k4.distance(&p, &q), rat(1, 2));
    }

    #[test]
    fn removal_components() {
        let t = sample_tree();
        let b = Point::Node(t.node_id("B").unwrap());
        let mut m: Vec<_> = t
            .components_after_removal(&b)
            .unwrap()
            .into_iter()
            .map(|c| c.1)
            .collect();
        m.sort();
        assert_eq!(m, vec![int(2), int(4), int(4)]);

        let p = path(&[int(4)]);
        let mid = p.point(ArcId(0), int(2)).unwrap();
        let m: Vec<_> = p.components_after_removal(&mid).unwrap().into_iter().map(|c| c.1).collect();
        assert_eq!(m, vec![int(2), int(2)]);

        // A-L5 is declared A..L5, so offset 1/2 from L5 is offset 1/2 from A too.
        let a_l5 = t.arc_id("AL5").unwrap();
        let x = t.point(a_l5, rat(1, 2)).unwrap();
        let mut m: Vec<_> = t.components_after_removal(&x).unwrap().into_iter().map(|c| c.1).collect();
        m.sort();
        assert_eq!(m, vec![rat(1, 2), rat(19, 2)]);

        assert_eq!(
            complete(4, |_, _| int(1)).components_after_removal(&Point::Node(NodeId(0))),
            Err(Error::NotATree)
        );
    }

    #[test]
    fn graph_predicates() {
        let t = sample_tree();
        assert!(t.is_tree());
        let mut leaves: Vec<_> = t.leaf_nodes().iter().map(|&n| t.node_name(n).to_string()).collect();
        leaves.sort();
        assert_eq!(leaves, ["L22", "L3", "L4", "L5", "L62"]);
        let k4 = complete(4, |_, _| int(1));
        assert!(!k4.is_tree());
        assert!(k4.leaf_nodes().is_empty());
        assert!(!k4.is_eulerian());
        assert!(complete(5, |_, _| int(1)).is_eulerian());
        assert!(cycle(&[int(1); 4]).is_eulerian());
        assert_eq!(path(&[int(3)]).leaf_nodes().len(), 2);
        assert_eq!(t.node_degree(t.node_id("B").unwrap()), 3);
    }

    #[test]
    fn points_normalize_to_nodes() {
        let t = sample_tree();
        let ab = t.arc_id("AB").unwrap();
        assert_eq!(t.point(ab, int(0)).unwrap(), Point::Node(t.node_id("A").unwrap()));
        assert_eq!(t.point(ab, int(1)).unwrap(), Point::Node(t.node_id("B").unwrap()));
        assert!(t.point(ab, int(2)).is_err());
    }

    #[test]
    fn alpha_ranges() {
        let t = sample_tree();
        assert!(t.validate_alpha(int(20)).is_ok());
        assert!(t.validate_alpha(int(21)).is_err());
        assert!(t.validate_alpha(int(0)).is_err());
        let c = cycle(&[int(1); 4]);
        assert!(c.validate_alpha(int(4)).is_ok());
        assert!(c.validate_alpha(rat(9, 2)).is_err());
        let k4 = complete(4, |_, _| int(1));
        assert!(k4.validate_alpha(int(12)).is_ok());
        assert!(k4.validate_alpha(int(13)).is_err());
    }

    #[test]
    fn builder_rejects_bad_input() {
        let mut b = NetworkBuilder::new();
        let a = b.add_node("a").unwrap();
        let c = b.add_node("c").unwrap();
        assert!(b.add_arc("x", a, c, int(0)).is_err());
        assert!(b.add_node("a").is_err());
        let d = b.add_node("d").unwrap();
        b.add_arc("ac", a, c, int(1)).unwrap();
        let _ = d;
        assert!(matches!(b.build(), Err(Error::InvalidNetwork(_))));
    }
}
