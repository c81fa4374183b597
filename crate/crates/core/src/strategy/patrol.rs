use std::collections::BTreeMap;

use super::{Phase, PatrolComponent, PatrolStrategy};
use crate::decomposition::{subtree_decomposition, Core};
use crate::error::{Error, Result};
use crate::factorization::Factorization;
use crate::network::local_tree::{LocalTree, RootedTree};
use crate::network::{eulerian_circuit, Network, Point, Region, Step, Walk};
use crate::rational::{half, int, one, Rational};

/// Walk builder over a rooted local view.
struct Tour<'a> {
    tree: &'a LocalTree,
    rooted: &'a RootedTree,
    steps: Vec<Step>,
}

impl Tour<'_> {
    fn along(&mut self, edge: usize, from: usize) {
        let e = self.tree.edges[edge];
        let to = e.other(from);
        self.steps.push(Step::Traverse {
            arc: e.segment.arc,
            from: e.offset_at(from),
            to: e.offset_at(to),
        });
    }

    /// Down `edge` into `child`, around everything above it, and back.
    fn excursion(&mut self, v: usize, edge: usize, child: usize) {
        self.along(edge, v);
        self.around(child);
        self.along(edge, child);
    }

    fn around(&mut self, v: usize) {
        for &(e, w) in &self.rooted.children[v] {
            self.excursion(v, e, w);
        }
    }
}

/// Closed depth-first tour of a tree from `start`, each arc walked twice,
/// children in arc id order.
pub fn depth_first_tour(tree: &Network, start: &Point) -> Result<Walk> {
    if !tree.is_tree() {
        return Err(Error::NotATree);
    }
    tree.validate_point(start)?;
    let view = LocalTree::new(tree, &Region::whole(tree), &[*start]);
    let root = view.vertex_of(start).expect("start is a vertex");
    let rooted = view.rooted(root);
    let mut tour = Tour { tree: &view, rooted: &rooted, steps: Vec::new() };
    tour.around(root);
    Walk::new(tree, *start, tour.steps)
}

/// Periodic tour of length `2(μ + λ(E))`, played with uniform phase in
/// either orientation with probability 1/2 each.
///
/// The tour runs depth-first over the core from a local root. Each maximal
/// component `X` of the extremity set is toured twice, from its local
/// root `r`, during the visit to `r`. When the core continues past `r`,
/// the two tours of `X` bracket the excursion into the first such core
/// branch; otherwise they run back to back. Core arcs are walked twice per
/// period and extremity arcs four times.
pub fn e_patrolling(tree: &Network, alpha: Rational) -> Result<PatrolStrategy> {
    let walk = e_patrol_walk(tree, alpha)?;
    let reversed = walk.reversed();
    PatrolStrategy::new(vec![
        PatrolComponent { walk, probability: half(), phase: Phase::Uniform },
        PatrolComponent { walk: reversed, probability: half(), phase: Phase::Uniform },
    ])
}

pub(crate) fn e_patrol_walk(tree: &Network, alpha: Rational) -> Result<Walk> {
    let d = subtree_decomposition(tree, alpha)?;
    let roots: Vec<Point> = d.groups().into_iter().map(|g| g.0).collect();
    let start = roots[0];
    let view = LocalTree::new(tree, &Region::whole(tree), &roots);
    let root = view.vertex_of(&start).expect("start is a vertex");
    let rooted = view.rooted(root);
    let in_core = |e: usize| -> bool {
        match &d.core {
            Core::Point(_) => false,
            Core::Region(core) => {
                let s = view.edges[e].segment;
                let mid = tree
                    .point(s.arc, (s.lo + s.hi) * half())
                    .expect("midpoint is on the arc");
                core.contains(tree, &mid)
            }
        }
    };
    let is_root: BTreeMap<usize, ()> = roots
        .iter()
        .map(|p| (view.vertex_of(p).expect("root is a vertex"), ()))
        .collect();

    let mut tour = Tour { tree: &view, rooted: &rooted, steps: Vec::new() };
    // explicit recursion over core vertices
    fn visit(
        tour: &mut Tour<'_>,
        v: usize,
        in_core: &dyn Fn(usize) -> bool,
        is_root: &BTreeMap<usize, ()>,
    ) {
        let kids = tour.rooted.children[v].clone();
        let (core_kids, extremity): (Vec<_>, Vec<_>) = kids.into_iter().partition(|&(e, _)| in_core(e));
        let tour_x = |tour: &mut Tour<'_>| {
            for &(e, w) in &extremity {
                tour.excursion(v, e, w);
            }
        };
        let mut core_kids = core_kids.into_iter();
        if is_root.contains_key(&v) {
            tour_x(tour);
            if let Some((e, w)) = core_kids.next() {
                tour.along(e, v);
                visit(tour, w, in_core, is_root);
                tour.along(e, w);
            }
            tour_x(tour);
        }
        for (e, w) in core_kids {
            tour.along(e, v);
            visit(tour, w, in_core, is_root);
            tour.along(e, w);
        }
    }
    visit(&mut tour, root, &in_core, &is_root);
    let walk = Walk::new(tree, start, tour.steps)?;
    debug_assert_eq!(walk.duration(), int(2) * (d.total_length + d.extremity_measure));
    Ok(walk)
}

fn require_simple_regular(net: &Network) -> Result<usize> {
    if !net.is_simple() {
        return Err(Error::NotSimple);
    }
    net.regular_degree()
        .ok_or_else(|| Error::InvalidNetwork("network is not regular".into()))
}

/// Eulerian tours of `Q_i = K_{2n} - F_i`, tour `i` chosen with probability
/// `λ(Q_i) / ((2n - 2) μ)`, each with uniform phase.
pub fn complete_patrolling(net: &Network, f: &Factorization) -> Result<PatrolStrategy> {
    require_simple_regular(net)?;
    if !net.is_complete() || !net.node_count().is_multiple_of(2) {
        return Err(Error::InvalidNetwork("complete patrolling needs a complete network on an even node count".into()));
    }
    if f.regularity() != 1 {
        return Err(Error::InvalidParameter("complete patrolling needs a 1-factorization".into()));
    }
    let revalidated = Factorization::new(net, 1, f.factors().to_vec())?;
    debug_assert_eq!(&revalidated, f);
    let n2 = net.node_count() as i128;
    let denom = int(n2 - 2) * net.total_length();
    tours(net, f, denom)
}

/// Mixed patrol over complement tours for a `k`-regular network with an
/// `m`-factorization, `k` odd and `k >= n + m` on `2n` nodes.
pub fn factor_patrolling(net: &Network, f: &Factorization) -> Result<PatrolStrategy> {
    let k = require_simple_regular(net)?;
    let m = f.regularity();
    let nodes = net.node_count();
    let mut problems = Vec::new();
    if !nodes.is_multiple_of(2) {
        problems.push(format!("node count {nodes} is odd"));
    }
    if k % 2 == 0 {
        problems.push(format!("degree {k} is even"));
    }
    if m == 0 || k % m != 0 {
        problems.push(format!("factor regularity {m} does not divide degree {k}"));
    }
    if k < nodes / 2 + m {
        problems.push(format!("degree {k} is below n + m = {}", nodes / 2 + m));
    }
    if let Err(Error::InvalidFactorization(v)) = Factorization::new(net, m, f.factors().to_vec()) {
        problems.extend(v.iter().map(ToString::to_string));
    }
    for i in 0..f.len() {
        let arcs = f.complement(net, i);
        if !net.arcs_connect_all_nodes(&arcs) {
            problems.push(format!("complement of factor {i} is disconnected"));
        }
    }
    if !problems.is_empty() {
        return Err(Error::InvalidParameter(problems.join("; ")));
    }
    let denom: Rational = (0..f.len()).map(|i| net.total_length() - f.factor_length(net, i)).sum();
    tours(net, f, denom)
}

fn tours(net: &Network, f: &Factorization, denom: Rational) -> Result<PatrolStrategy> {
    let mut components = Vec::with_capacity(f.len());
    for i in 0..f.len() {
        let arcs = f.complement(net, i);
        let walk = eulerian_circuit(net, &arcs)?;
        let probability = walk.duration() / denom;
        components.push(PatrolComponent { walk, probability, phase: Phase::Uniform });
    }
    debug_assert_eq!(components.iter().map(|c| c.probability).sum::<Rational>(), one());
    PatrolStrategy::new(components)
}
