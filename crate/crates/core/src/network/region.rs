use std::collections::BTreeMap;

use super::{ArcId, Network, NodeId, Point};
use crate::error::{Error, Result};
use crate::rational::{zero, Rational};

/// Closed piece `[lo, hi]` of one arc, measured from the arc's `u` end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub arc: ArcId,
    pub lo: Rational,
    pub hi: Rational,
}

impl Segment {
    pub fn new(net: &Network, arc: ArcId, lo: Rational, hi: Rational) -> Result<Self> {
        if arc.0 >= net.arc_count() {
            return Err(Error::InvalidPoint(format!("unknown arc id {}", arc.0)));
        }
        if lo < zero() || hi > net.length(arc) || lo >= hi {
            return Err(Error::InvalidParameter(format!(
                "segment [{lo}, {hi}] invalid on arc {}",
                net.arc(arc).name
            )));
        }
        Ok(Segment { arc, lo, hi })
    }

    pub fn whole(net: &Network, arc: ArcId) -> Self {
        Segment {
            arc,
            lo: zero(),
            hi: net.length(arc),
        }
    }

    pub fn measure(&self) -> Rational {
        self.hi - self.lo
    }

    pub fn contains_offset(&self, s: Rational) -> bool {
        self.lo <= s && s <= self.hi
    }

    /// Nodes of the arc that this segment reaches.
    fn touched_nodes(&self, net: &Network) -> impl Iterator<Item = NodeId> {
        let info = net.arc(self.arc);
        let at_u = (self.lo == zero()).then_some(info.u);
        let at_v = (self.hi == info.length).then_some(info.v);
        at_u.into_iter().chain(at_v)
    }
}

/// Finite union of closed segments, kept canonical: sorted by arc then
/// offset, with overlapping or touching pieces on the same arc merged.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Region {
    segments: Vec<Segment>,
}

impl Region {
    pub fn empty() -> Self {
        Region::default()
    }

    pub fn whole(net: &Network) -> Self {
        Region {
            segments: net.arc_ids().map(|a| Segment::whole(net, a)).collect(),
        }
    }

    pub fn from_arcs(net: &Network, arcs: impl IntoIterator<Item = ArcId>) -> Self {
        Self::from_segments(arcs.into_iter().map(|a| Segment::whole(net, a)))
    }

    pub fn from_segments(segments: impl IntoIterator<Item = Segment>) -> Self {
        let mut all: Vec<Segment> = segments.into_iter().filter(|s| s.lo < s.hi).collect();
        all.sort();
        let mut merged: Vec<Segment> = Vec::with_capacity(all.len());
        for seg in all {
            match merged.last_mut() {
                Some(last) if last.arc == seg.arc && seg.lo <= last.hi => {
                    if seg.hi > last.hi {
                        last.hi = seg.hi;
                    }
                }
                _ => merged.push(seg),
            }
        }
        Region { segments: merged }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn measure(&self) -> Rational {
        self.segments.iter().map(Segment::measure).sum()
    }

    pub fn contains(&self, net: &Network, p: &Point) -> bool {
        match *p {
            Point::Interior { arc, offset } => self
                .segments
                .iter()
                .any(|s| s.arc == arc && s.contains_offset(offset)),
            Point::Node(n) => self.touches_node(net, n),
        }
    }

    pub fn touches_node(&self, net: &Network, node: NodeId) -> bool {
        self.segments
            .iter()
            .any(|s| s.touched_nodes(net).any(|t| t == node))
    }

    /// Measure of the part of `self` lying on `arc`.
    pub fn measure_on(&self, arc: ArcId) -> Rational {
        self.segments
            .iter()
            .filter(|s| s.arc == arc)
            .map(Segment::measure)
            .sum()
    }

    pub fn intersect(&self, other: &Region) -> Region {
        let mut out = Vec::new();
        for a in &self.segments {
            for b in other.segments.iter().filter(|b| b.arc == a.arc) {
                let lo = crate::rational::max(a.lo, b.lo);
                let hi = crate::rational::min(a.hi, b.hi);
                if lo < hi {
                    out.push(Segment { arc: a.arc, lo, hi });
                }
            }
        }
        Region::from_segments(out)
    }

    pub fn intersection_measure(&self, other: &Region) -> Rational {
        self.intersect(other).measure()
    }

    pub fn union(&self, other: &Region) -> Region {
        Region::from_segments(self.segments.iter().chain(&other.segments).copied())
    }

    /// Closure of `whole(net) - self`.
    pub fn complement(&self, net: &Network) -> Region {
        let mut by_arc: BTreeMap<ArcId, Vec<&Segment>> = BTreeMap::new();
        for s in &self.segments {
            by_arc.entry(s.arc).or_default().push(s);
        }
        let mut out = Vec::new();
        for arc in net.arc_ids() {
            let mut cursor = zero();
            for s in by_arc.get(&arc).into_iter().flatten() {
                if s.lo > cursor {
                    out.push(Segment { arc, lo: cursor, hi: s.lo });
                }
                cursor = s.hi;
            }
            if cursor < net.length(arc) {
                out.push(Segment {
                    arc,
                    lo: cursor,
                    hi: net.length(arc),
                });
            }
        }
        Region::from_segments(out)
    }

    /// Same region with `p` inserted as a segment endpoint.
    pub fn split_at(&self, p: &Point) -> Vec<Segment> {
        split_segments(&self.segments, p)
    }

    /// Connected components, optionally after deleting the point `cut`.
    ///
    /// Pieces only connect through shared nodes; segments on one arc that
    /// touch at a regular point only arise from `cut` itself and stay apart.
    pub fn components(&self, net: &Network, cut: Option<&Point>) -> Vec<Region> {
        let pieces = match cut {
            Some(p) => self.split_at(p),
            None => self.segments.clone(),
        };
        let cut_node = cut.and_then(Point::as_node);
        let mut parent: Vec<usize> = (0..pieces.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut at_node: BTreeMap<NodeId, usize> = BTreeMap::new();
        for (i, piece) in pieces.iter().enumerate() {
            for node in piece.touched_nodes(net) {
                if Some(node) == cut_node {
                    continue;
                }
                match at_node.get(&node) {
                    Some(&j) => {
                        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                        parent[ri] = rj;
                    }
                    None => {
                        at_node.insert(node, i);
                    }
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<Segment>> = BTreeMap::new();
        for (i, piece) in pieces.iter().enumerate() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(*piece);
        }
        let mut out: Vec<Region> = groups
            .into_values()
            .map(Region::from_segments)
            .collect();
        out.sort_by(|a, b| a.segments.cmp(&b.segments));
        out
    }

    pub fn is_connected(&self, net: &Network) -> bool {
        self.components(net, None).len() <= 1
    }
}

pub(crate) fn split_segments(segments: &[Segment], p: &Point) -> Vec<Segment> {
    let mut pieces = Vec::with_capacity(segments.len() + 1);
    for s in segments {
        match *p {
            Point::Interior { arc, offset } if s.arc == arc && s.lo < offset && offset < s.hi => {
                pieces.push(Segment { arc, lo: s.lo, hi: offset });
                pieces.push(Segment { arc, lo: offset, hi: s.hi });
            }
            _ => pieces.push(*s),
        }
    }
    pieces
}
