use std::collections::HashMap;

use super::region::split_segments;
use super::{Network, Point, Region, Segment};
use crate::rational::{zero, Rational};

/// Explicit graph view of a region: vertices are segment endpoints (and any
/// requested cut points), edges are the region's segments.
#[derive(Clone, Debug)]
pub struct LocalTree {
    pub vertices: Vec<Point>,
    pub edges: Vec<LocalEdge>,
    pub adjacency: Vec<Vec<usize>>,
    index: HashMap<Point, usize>,
}

#[derive(Clone, Copy, Debug)]
pub struct LocalEdge {
    pub segment: Segment,
    /// Vertex at `segment.lo`, vertex at `segment.hi`.
    pub ends: [usize; 2],
}

impl LocalEdge {
    pub fn other(&self, v: usize) -> usize {
        if self.ends[0] == v {
            self.ends[1]
        } else {
            self.ends[0]
        }
    }

    pub fn length(&self) -> Rational {
        self.segment.measure()
    }

    /// Offset of vertex `v` along the underlying arc.
    pub fn offset_at(&self, v: usize) -> Rational {
        if self.ends[0] == v {
            self.segment.lo
        } else {
            self.segment.hi
        }
    }
}

/// Rooted traversal data for a [`LocalTree`].
#[derive(Clone, Debug)]
pub struct RootedTree {
    pub root: usize,
    pub parent_edge: Vec<Option<usize>>,
    /// `(edge, child vertex)` in canonical edge order.
    pub children: Vec<Vec<(usize, usize)>>,
    /// Vertices in preorder.
    pub order: Vec<usize>,
    /// Measure of everything above each vertex.
    pub above: Vec<Rational>,
}

impl LocalTree {
    pub fn new(net: &Network, region: &Region, cuts: &[Point]) -> LocalTree {
        let mut pieces: Vec<Segment> = region.segments().to_vec();
        for cut in cuts {
            pieces = split_segments(&pieces, cut);
        }
        pieces.sort();
        let mut tree = LocalTree {
            vertices: Vec::new(),
            edges: Vec::new(),
            adjacency: Vec::new(),
            index: HashMap::new(),
        };
        for seg in pieces {
            let a = tree.vertex(net.point_unchecked(seg.arc, seg.lo));
            let b = tree.vertex(net.point_unchecked(seg.arc, seg.hi));
            let e = tree.edges.len();
            tree.edges.push(LocalEdge { segment: seg, ends: [a, b] });
            tree.adjacency[a].push(e);
            tree.adjacency[b].push(e);
        }
        tree
    }

    fn vertex(&mut self, p: Point) -> usize {
        if let Some(&i) = self.index.get(&p) {
            return i;
        }
        let i = self.vertices.len();
        self.vertices.push(p);
        self.adjacency.push(Vec::new());
        self.index.insert(p, i);
        i
    }

    pub fn vertex_of(&self, p: &Point) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Roots the view at `root`; assumes the view is acyclic.
    pub fn rooted(&self, root: usize) -> RootedTree {
        let n = self.vertices.len();
        let mut parent_edge = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut visited = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut stack = vec![root];
        visited[root] = true;
        while let Some(v) = stack.pop() {
            order.push(v);
            let mut kids = Vec::new();
            for &e in &self.adjacency[v] {
                let w = self.edges[e].other(v);
                if !visited[w] {
                    visited[w] = true;
                    parent_edge[w] = Some(e);
                    kids.push((e, w));
                }
            }
            for &(_, w) in kids.iter().rev() {
                stack.push(w);
            }
            children[v] = kids;
        }
        let mut above = vec![zero(); n];
        for &v in order.iter().rev() {
            let mut total = zero();
            for &(e, w) in &children[v] {
                total += self.edges[e].length() + above[w];
            }
            above[v] = total;
        }
        RootedTree {
            root,
            parent_edge,
            children,
            order,
            above,
        }
    }
}

impl RootedTree {
    /// Measure of the branch through `edge` into `child`.
    pub fn branch_measure(&self, tree: &LocalTree, edge: usize, child: usize) -> Rational {
        tree.edges[edge].length() + self.above[child]
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        v != self.root && self.children[v].is_empty()
    }
}
