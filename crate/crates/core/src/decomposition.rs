//! Extremity sets, cores, the critical attack time and the subtree
//! decomposition of a tree.
//!
//! Everything is computed per arc and exactly. For a point at offset `s` on
//! an arc `(u, v)` of length `l`, the two sides of the tree have measures
//! `W_u + s` and `W_v + l - s`, where `W_u` (`W_v`) is the measure of the
//! part of the tree hanging off `u` (`v`) once the arc is removed. The
//! smaller side is piecewise linear in `s`, so the set where it drops below
//! `alpha / 2` is at most two intervals touching the arc ends.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::network::{ArcId, Network, Point, Region, Segment};
use crate::rational::{half, int, zero, Rational};

/// Closure of the extremity set at a given attack duration.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtremitySet {
    pub alpha: Rational,
    pub region: Region,
    pub measure: Rational,
}

/// Core of a tree: a closed subtree, or a single point once the extremity
/// set is the whole tree.
#[derive(Clone, Debug, PartialEq)]
pub enum Core {
    Region(Region),
    Point(Point),
}

impl Core {
    pub fn measure(&self) -> Rational {
        match self {
            Core::Region(r) => r.measure(),
            Core::Point(_) => zero(),
        }
    }

    pub fn contains(&self, net: &Network, p: &Point) -> bool {
        match self {
            Core::Region(r) => r.contains(net, p),
            Core::Point(x) => x == p,
        }
    }

    pub fn region(&self) -> Region {
        match self {
            Core::Region(r) => r.clone(),
            Core::Point(_) => Region::empty(),
        }
    }
}

/// One closed subtree `E^j` of the decomposition with its local root.
#[derive(Clone, Debug, PartialEq)]
pub struct SubtreeComponent {
    pub region: Region,
    pub root: Point,
    pub measure: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubtreeDecomposition {
    pub alpha: Rational,
    pub total_length: Rational,
    pub critical_alpha: Rational,
    pub local_root: Point,
    pub core: Core,
    pub components: Vec<SubtreeComponent>,
    /// λ(E), the measure of the extremity set.
    pub extremity_measure: Rational,
}

impl SubtreeDecomposition {
    /// `alpha / (μ + λ(E))`.
    pub fn value(&self) -> Rational {
        self.alpha / (self.total_length + self.extremity_measure)
    }

    /// Components grouped by shared local root, in canonical root order.
    /// Each group is one maximal connected component of the closed
    /// extremity set.
    pub fn groups(&self) -> Vec<(Point, Vec<usize>)> {
        let mut map: BTreeMap<Point, Vec<usize>> = BTreeMap::new();
        for (i, c) in self.components.iter().enumerate() {
            map.entry(c.root).or_default().push(i);
        }
        map.into_iter().collect()
    }
}

/// Per arc `(W_u, W_v)`: measure hanging off each end with the arc removed.
pub(crate) fn side_weights(tree: &Network) -> Result<Vec<(Rational, Rational)>> {
    if !tree.is_tree() {
        return Err(Error::NotATree);
    }
    let n = tree.node_count();
    let mut parent_arc: Vec<Option<ArcId>> = vec![None; n];
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut stack = vec![crate::network::NodeId(0)];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &a in tree.incident(v) {
            let w = tree.arc(a).other_end(v);
            if !seen[w.0] {
                seen[w.0] = true;
                parent_arc[w.0] = Some(a);
                stack.push(w);
            }
        }
    }
    // below[v]: measure of the subtree under v (rooted at node 0)
    let mut below = vec![zero(); n];
    for &v in order.iter().rev() {
        if let Some(a) = parent_arc[v.0] {
            let p = tree.arc(a).other_end(v);
            let add = below[v.0] + tree.length(a);
            below[p.0] += add;
        }
    }
    let mu = tree.total_length();
    Ok(tree
        .arc_ids()
        .map(|a| {
            let info = tree.arc(a);
            let len = info.length;
            if parent_arc[info.v.0] == Some(a) {
                let wv = below[info.v.0];
                (mu - len - wv, wv)
            } else {
                let wu = below[info.u.0];
                (wu, mu - len - wu)
            }
        })
        .collect())
}

/// Closure of `{regular x : smaller side of Q - x has measure < alpha/2}`.
pub fn extremity_set(tree: &Network, alpha: Rational) -> Result<ExtremitySet> {
    let weights = side_weights(tree)?;
    tree.validate_alpha(alpha)?;
    let half_alpha = alpha * half();
    let mut segments = Vec::new();
    for (a, &(wu, wv)) in tree.arc_ids().zip(&weights) {
        let len = tree.length(a);
        // u side below alpha/2 for s < half_alpha - wu
        let near_u = half_alpha - wu;
        if near_u > zero() {
            segments.push(Segment {
                arc: a,
                lo: zero(),
                hi: crate::rational::min(near_u, len),
            });
        }
        // v side below alpha/2 for s > len + wv - half_alpha
        let near_v = len + wv - half_alpha;
        if near_v < len {
            segments.push(Segment {
                arc: a,
                lo: crate::rational::max(near_v, zero()),
                hi: len,
            });
        }
    }
    let region = Region::from_segments(segments);
    let measure = region.measure();
    Ok(ExtremitySet {
        alpha,
        region,
        measure,
    })
}

/// Smallest `alpha` with `closure(E) = Q`: twice the largest smaller-side
/// measure over all points.
pub fn critical_alpha(tree: &Network) -> Result<Rational> {
    let weights = side_weights(tree)?;
    let mut best = zero();
    for (a, &(wu, wv)) in tree.arc_ids().zip(&weights) {
        let len = tree.length(a);
        let cross = (wv + len - wu) * half();
        let value = if cross < zero() {
            wv + len
        } else if cross > len {
            wu + len
        } else {
            wu + cross
        };
        if value > best {
            best = value;
        }
    }
    Ok(best * int(2))
}

/// The point minimizing the largest component of `Q - x` (the limit of the
/// cores as `alpha` increases to the critical value).
pub fn local_root_of_tree(tree: &Network) -> Result<Point> {
    let weights = side_weights(tree)?;
    let mut candidates: Vec<(Rational, Point)> = Vec::new();
    for node in tree.node_ids() {
        let worst = tree
            .incident(node)
            .iter()
            .map(|&a| {
                let info = tree.arc(a);
                let (wu, wv) = weights[a.0];
                if info.u == node {
                    info.length + wv
                } else {
                    info.length + wu
                }
            })
            .max()
            .expect("tree nodes have an incident arc");
        candidates.push((worst, Point::Node(node)));
    }
    for (a, &(wu, wv)) in tree.arc_ids().zip(&weights) {
        let len = tree.length(a);
        let cross = (wv + len - wu) * half();
        if zero() < cross && cross < len {
            candidates.push((wu + cross, Point::Interior { arc: a, offset: cross }));
        }
    }
    let best = candidates.iter().map(|c| c.0).min().expect("nonempty");
    let mut tied: Vec<Point> = candidates
        .into_iter()
        .filter(|c| c.0 == best)
        .map(|c| c.1)
        .collect();
    tied.sort();
    if tied.len() > 1 {
        log::warn!("local root tie between {} candidates; taking the canonical least", tied.len());
    }
    Ok(tied[0])
}

/// Core: closure of the complement of the closed extremity set, or the
/// local root of the tree when `alpha >= alpha*`.
pub fn core(tree: &Network, alpha: Rational) -> Result<Core> {
    let critical = critical_alpha(tree)?;
    if alpha >= critical {
        tree.validate_alpha(alpha)?;
        return Ok(Core::Point(local_root_of_tree(tree)?));
    }
    let e = extremity_set(tree, alpha)?;
    Ok(Core::Region(e.region.complement(tree)))
}

pub fn subtree_decomposition(tree: &Network, alpha: Rational) -> Result<SubtreeDecomposition> {
    let extremity = extremity_set(tree, alpha)?;
    let critical = critical_alpha(tree)?;
    let local_root = local_root_of_tree(tree)?;
    let total_length = tree.total_length();

    if alpha >= critical {
        let components = Region::whole(tree)
            .components(tree, Some(&local_root))
            .into_iter()
            .map(|region| SubtreeComponent {
                measure: region.measure(),
                region,
                root: local_root,
            })
            .collect();
        return Ok(SubtreeDecomposition {
            alpha,
            total_length,
            critical_alpha: critical,
            local_root,
            core: Core::Point(local_root),
            components,
            extremity_measure: total_length,
        });
    }

    let core_region = extremity.region.complement(tree);
    let mut components = Vec::new();
    for maximal in extremity.region.components(tree, None) {
        let root = boundary_point(tree, &maximal, &core_region)?;
        for region in maximal.components(tree, Some(&root)) {
            components.push(SubtreeComponent {
                measure: region.measure(),
                region,
                root,
            });
        }
    }
    components.sort_by(|a, b| (a.root, a.region.segments()).cmp(&(b.root, b.region.segments())));
    Ok(SubtreeDecomposition {
        alpha,
        total_length,
        critical_alpha: critical,
        local_root,
        core: Core::Region(core_region),
        components,
        extremity_measure: extremity.measure,
    })
}

/// The single point where a maximal extremity component meets the core.
fn boundary_point(tree: &Network, component: &Region, core: &Region) -> Result<Point> {
    let mut found: Vec<Point> = component
        .segments()
        .iter()
        .flat_map(|s| [tree.point_unchecked(s.arc, s.lo), tree.point_unchecked(s.arc, s.hi)])
        .filter(|p| core.contains(tree, p))
        .collect();
    found.sort();
    found.dedup();
    match found.as_slice() {
        [p] => Ok(*p),
        _ => Err(Error::Unsupported(format!(
            "extremity component with {} boundary points",
            found.len()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::generators::{path, sample_tree, star};
    use crate::network::NodeId;
    use crate::rational::rat;

    fn node(t: &Network, name: &str) -> Point {
        Point::Node(t.node_id(name).unwrap())
    }

    #[test]
    fn sample_tree_extremity_measures() {
        let t = sample_tree();
        // the closures of the two leaf arcs at C touch, so alpha = 2 gives 4 pieces
        for (alpha, measure, parts) in [(2, 5, 4), (4, 7, 3), (6, 8, 3), (8, 10, 1)] {
            let e = extremity_set(&t, int(alpha)).unwrap();
            assert_eq!(e.measure, int(measure), "alpha={alpha}");
            assert_eq!(e.region.components(&t, None).len(), parts, "alpha={alpha}");
        }
        // alpha = 2: five subtrees of measure 1 once split at their roots
        let d = subtree_decomposition(&t, int(2)).unwrap();
        assert_eq!(d.components.len(), 5);
        assert!(d.components.iter().all(|c| c.measure == int(1)));
        // alpha = 8: the whole tree
        assert_eq!(extremity_set(&t, int(8)).unwrap().region, Region::whole(&t));
    }

    #[test]
    fn path_extremity_and_core() {
        let p = path(&[int(4)]);
        let e = extremity_set(&p, int(2)).unwrap();
        assert_eq!(e.measure, int(2));
        assert_eq!(e.region.segments().len(), 2);
        let c = core(&p, int(2)).unwrap();
        assert_eq!(c.measure(), int(2));
        assert_eq!(
            c,
            Core::Region(Region::from_segments([Segment { arc: ArcId(0), lo: int(1), hi: int(3) }]))
        );
    }

    #[test]
    fn cores_of_sample_tree() {
        let t = sample_tree();
        let c = core(&t, int(2)).unwrap();
        assert_eq!(c.measure(), int(5));
        for n in ["A", "B", "C"] {
            assert!(c.contains(&t, &node(&t, n)), "{n}");
        }
        assert!(!c.contains(&t, &node(&t, "L3")));
        assert_eq!(core(&t, int(8)).unwrap(), Core::Point(node(&t, "B")));
        assert_eq!(core(&t, int(12)).unwrap(), Core::Point(node(&t, "B")));
    }

    #[test]
    fn critical_values() {
        assert_eq!(critical_alpha(&sample_tree()).unwrap(), int(8));
        assert_eq!(critical_alpha(&path(&[int(5)])).unwrap(), int(5));
        assert_eq!(critical_alpha(&path(&[int(2), int(3)])).unwrap(), int(5));
        assert_eq!(critical_alpha(&star(&[int(1); 3])).unwrap(), int(2));
    }

    #[test]
    fn local_roots() {
        let t = sample_tree();
        assert_eq!(local_root_of_tree(&t).unwrap(), node(&t, "B"));
        let p = path(&[int(4)]);
        assert_eq!(
            local_root_of_tree(&p).unwrap(),
            Point::Interior { arc: ArcId(0), offset: int(2) }
        );
        let p = path(&[int(1), int(3)]);
        assert_eq!(
            local_root_of_tree(&p).unwrap(),
            Point::Interior { arc: ArcId(1), offset: int(1) }
        );
        assert_eq!(local_root_of_tree(&star(&[int(2); 4])).unwrap(), Point::Node(NodeId(0)));
    }

    fn summary(t: &Network, d: &SubtreeDecomposition) -> Vec<(Rational, String)> {
        let mut v: Vec<_> = d
            .components
            .iter()
            .map(|c| (c.measure, t.point_label(&c.root)))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn decomposition_alpha_4() {
        let t = sample_tree();
        let d = subtree_decomposition(&t, int(4)).unwrap();
        assert_eq!(d.extremity_measure, int(7));
        assert_eq!(d.value(), rat(4, 17));
        assert_eq!(
            summary(&t, &d),
            vec![
                (int(1), "A".into()),
                (int(1), "C".into()),
                (int(1), "C".into()),
                (int(2), "A".into()),
                (int(2), "B".into()),
            ]
        );
    }

    #[test]
    fn decomposition_alpha_6() {
        let t = sample_tree();
        let d = subtree_decomposition(&t, int(6)).unwrap();
        assert_eq!(d.extremity_measure, int(8));
        assert_eq!(
            summary(&t, &d),
            vec![
                (int(1), "A".into()),
                (int(2), "A".into()),
                (int(2), "B".into()),
                (int(3), "BC@1".into()),
            ]
        );
        assert_eq!(d.core.measure(), int(2));
    }

    #[test]
    fn decomposition_alpha_8() {
        let t = sample_tree();
        let d = subtree_decomposition(&t, int(8)).unwrap();
        assert_eq!(d.core, Core::Point(node(&t, "B")));
        let m: Vec<_> = summary(&t, &d).into_iter().map(|x| x.0).collect();
        assert_eq!(m, vec![int(2), int(4), int(4)]);
        assert_eq!(d.value(), rat(2, 5));
    }

    #[test]
    fn non_tree_rejected() {
        let k4 = crate::network::generators::complete(4, |_, _| int(1));
        assert_eq!(extremity_set(&k4, int(1)), Err(Error::NotATree));
        assert_eq!(critical_alpha(&k4), Err(Error::NotATree));
    }
}
