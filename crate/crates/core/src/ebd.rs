//! Equal branch density leaf distributions on rooted subtrees.
//!
//! At every branch point the mass arriving from below is split between the
//! branches above in proportion to their measures, so all branches there
//! carry the same density. Mass only comes to rest at leaves.

use crate::error::{Error, Result};
use crate::network::local_tree::{LocalTree, RootedTree};
use crate::network::{Network, Point, Region, Segment};
use crate::rational::{zero, Rational};

/// A closed connected subtree together with a root on it.
#[derive(Clone, Debug, PartialEq)]
pub struct RootedSubtree {
    pub region: Region,
    pub root: Point,
}

impl RootedSubtree {
    pub fn new(net: &Network, region: Region, root: Point) -> Result<Self> {
        if region.is_empty() {
            return Err(Error::ZeroMeasure);
        }
        if !region.contains(net, &root) {
            return Err(Error::InvalidPoint("root is not on the subtree".into()));
        }
        if !region.is_connected(net) {
            return Err(Error::InvalidParameter("subtree is not connected".into()));
        }
        Ok(RootedSubtree { region, root })
    }

    /// Local graph view with the root inserted as a vertex, rooted there.
    pub fn view(&self, net: &Network) -> (LocalTree, RootedTree) {
        let tree = LocalTree::new(net, &self.region, &[self.root]);
        let root = tree.vertex_of(&self.root).expect("root is a vertex");
        let rooted = tree.rooted(root);
        (tree, rooted)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LeafDistribution {
    pub atoms: Vec<(Point, Rational)>,
    pub total: Rational,
}

impl LeafDistribution {
    /// Mass on the atoms lying in a closed union of segments.
    pub fn mass_in(&self, net: &Network, segments: &[Segment]) -> Rational {
        self.atoms
            .iter()
            .filter(|(p, _)| {
                segments.iter().any(|s| match net.offset_on(p, s.arc) {
                    Some(off) => s.contains_offset(off),
                    None => false,
                })
            })
            .map(|a| a.1)
            .sum()
    }
}

pub fn ebd(net: &Network, sub: &RootedSubtree, total: Rational) -> Result<LeafDistribution> {
    let (tree, rooted) = sub.view(net);
    if rooted.children[rooted.root].is_empty() {
        return Err(Error::InvalidParameter("subtree has no leaf besides its root".into()));
    }
    let mut mass = vec![zero(); tree.vertices.len()];
    mass[rooted.root] = total;
    let mut atoms = Vec::new();
    for &v in &rooted.order {
        let kids = &rooted.children[v];
        if kids.is_empty() {
            atoms.push((tree.vertices[v], mass[v]));
            continue;
        }
        let spread = rooted.above[v];
        for &(e, w) in kids {
            mass[w] = mass[v] * rooted.branch_measure(&tree, e, w) / spread;
        }
    }
    atoms.sort();
    Ok(LeafDistribution { atoms, total })
}

/// Subtrees `Z` of the branch above `x` that contain `x`, generated by
/// choosing for every arc piece above `x` one of: drop it, keep the part of
/// length `k/steps` of it nearest `x` (`0 < k < steps`), or keep it whole.
/// Pieces above a dropped or shortened piece are dropped.
pub struct GridCuts {
    pieces: Vec<GridPiece>,
    steps: i128,
}

#[derive(Clone, Copy, Debug)]
struct GridPiece {
    segment: Segment,
    /// Offset of the end nearer `x`.
    near: Rational,
    parent: Option<usize>,
}

impl GridCuts {
    pub fn new(net: &Network, sub: &RootedSubtree, x: &Point, steps: u32) -> Result<GridCuts> {
        if !sub.region.contains(net, x) {
            return Err(Error::InvalidPoint("cut base is not on the subtree".into()));
        }
        if steps == 0 {
            return Err(Error::InvalidParameter("grid needs at least one step".into()));
        }
        let tree = LocalTree::new(net, &sub.region, &[sub.root, *x]);
        let root = tree.vertex_of(&sub.root).expect("root vertex");
        let base = tree.vertex_of(x).expect("base vertex");
        let rooted = tree.rooted(root);
        let mut pieces = Vec::new();
        let mut stack: Vec<(usize, Option<usize>)> = vec![(base, None)];
        while let Some((v, parent)) = stack.pop() {
            for &(e, w) in rooted.children[v].iter().rev() {
                let edge = tree.edges[e];
                let idx = pieces.len();
                pieces.push(GridPiece {
                    segment: edge.segment,
                    near: edge.offset_at(v),
                    parent,
                });
                stack.push((w, Some(idx)));
            }
        }
        Ok(GridCuts {
            pieces,
            steps: i128::from(steps),
        })
    }

    /// Number of nonempty subtrees `for_each` will produce.
    pub fn count(&self) -> u128 {
        // ways[i]: choices for the branch hanging from piece i
        let n = self.pieces.len();
        let mut ways = vec![1u128; n];
        let mut through = vec![1u128; n];
        for i in (0..n).rev() {
            ways[i] = self.steps as u128 + through[i];
            if let Some(p) = self.pieces[i].parent {
                through[p] = through[p].saturating_mul(ways[i]);
            }
        }
        let top: u128 = (0..n)
            .filter(|&i| self.pieces[i].parent.is_none())
            .map(|i| ways[i])
            .fold(1u128, |a, b| a.saturating_mul(b));
        top - 1
    }

    pub fn for_each(&self, mut f: impl FnMut(&[Segment])) {
        let mut chosen = Vec::new();
        let mut whole = vec![false; self.pieces.len()];
        self.visit(0, &mut chosen, &mut whole, &mut f);
    }

    fn visit(
        &self,
        i: usize,
        chosen: &mut Vec<Segment>,
        whole: &mut Vec<bool>,
        f: &mut impl FnMut(&[Segment]),
    ) {
        if i == self.pieces.len() {
            if !chosen.is_empty() {
                f(chosen);
            }
            return;
        }
        let piece = self.pieces[i];
        let open = piece.parent.is_none_or(|p| whole[p]);
        whole[i] = false;
        self.visit(i + 1, chosen, whole, f);
        if !open {
            return;
        }
        let seg = piece.segment;
        let len = seg.measure();
        for k in 1..self.steps {
            let part = len * Rational::new(k, self.steps);
            let cut = if piece.near == seg.lo {
                Segment { arc: seg.arc, lo: seg.lo, hi: seg.lo + part }
            } else {
                Segment { arc: seg.arc, lo: seg.hi - part, hi: seg.hi }
            };
            chosen.push(cut);
            self.visit(i + 1, chosen, whole, f);
            chosen.pop();
        }
        chosen.push(seg);
        whole[i] = true;
        self.visit(i + 1, chosen, whole, f);
        whole[i] = false;
        chosen.pop();
    }
}

/// Densities of the branches at every vertex with two or more branches,
/// under a leaf distribution.
pub fn branch_densities(net: &Network, sub: &RootedSubtree, dist: &LeafDistribution) -> Vec<Vec<Rational>> {
    let (tree, rooted) = sub.view(net);
    let mut out = Vec::new();
    for &v in &rooted.order {
        let kids = &rooted.children[v];
        if kids.len() < 2 {
            continue;
        }
        let mut row = Vec::new();
        for &(e, w) in kids {
            let mut segs = vec![tree.edges[e].segment];
            let mut stack = vec![w];
            while let Some(u) = stack.pop() {
                for &(e2, w2) in &rooted.children[u] {
                    segs.push(tree.edges[e2].segment);
                    stack.push(w2);
                }
            }
            row.push(dist.mass_in(net, &segs) / rooted.branch_measure(&tree, e, w));
        }
        out.push(row);
    }
    out
}

/// `h(Q_x) / λ(Q_x)` for the branch above `x`.
pub fn branch_density_above(net: &Network, sub: &RootedSubtree, dist: &LeafDistribution, x: &Point) -> Result<Rational> {
    let cuts = GridCuts::new(net, sub, x, 1)?;
    let segs: Vec<Segment> = cuts.pieces.iter().map(|p| p.segment).collect();
    let len: Rational = segs.iter().map(Segment::measure).sum();
    if len == zero() {
        return Err(Error::ZeroMeasure);
    }
    Ok(dist.mass_in(net, &segs) / len)
}
