//! Nested convex-hull decomposition of a point set.
//!
//! Every node covers a subset of `E`. A node is split along its diameter
//! segment `[a, b]`: points are projected to parameters `t` in `[0, 1]`, and
//! when some `t` falls in the open middle third (case P1) the split happens at
//! that point, which then belongs to both children. Otherwise (case P2) the
//! outer thirds become the children and a shortest bridge joins them.
//!
//! Nodes are labeled good when one of their associated dyadic cubes `Q` has
//! `r_E(3Q) < 2r`; good nodes and single points are leaves, bad nodes are
//! split.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{
    clip_line_to_hull, convex_hull, diameter_pair, hull_beta_hat, hull_distance, hull_meets_box,
    project_onto_segment_line, Hull, Point, PointSet, Rank, Segment, EPS,
};
use crate::multiscale::{beta_of_cube, finest_scale, side_at, BetaResult, DyadicCube, Region};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TreeError {
    #[error("leaf node: cannot split a node with fewer than two distinct points")]
    LeafNode,
    #[error("construction does not terminate at r = 0 (r must be positive)")]
    NonPositiveRadius,
}

/// Constants of the construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    /// Generations after which `beta_hat` of a wide descendant is small.
    pub m0: u32,
    /// Generations after which diameters have at least halved.
    pub m: u32,
    /// Constant of the split-length inequality.
    pub k: f64,
    /// Taylor constant for `sqrt(1 + x^2) <= 1 + K1 x^2`.
    pub k1: f64,
}

impl Constants {
    pub fn derive() -> Self {
        let m0 = ((1.0 / 1024.0 * (17.0f64 / 576.0).sqrt()).ln() / (35.0f64 / 36.0).ln()).ceil();
        let m0 = m0 as u32;
        let k1: f64 = 0.5;
        Constants {
            m0,
            m: 3 * (m0 + 1),
            k: (2.0 * (36.0 * 36.0 * k1 + 12.0)).max(1350.0),
            k1,
        }
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::derive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitCase {
    P1,
    P2,
    Leaf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Good,
    Bad,
    Unlabeled,
}

/// Shortest segment between the point sets of two sibling nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bridge {
    pub e0: Point,
    pub e1: Point,
    pub length: f64,
}

impl Bridge {
    pub fn segment(&self) -> Segment {
        Segment::new(self.e0, self.e1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullNode {
    pub id: usize,
    /// Binary address; the root is the empty string.
    pub sigma: String,
    pub depth: usize,
    pub parent: Option<usize>,
    /// Indices into the point set.
    pub points: Vec<usize>,
    pub hull: Hull,
    pub diam: f64,
    pub diam_segment: Segment,
    pub beta_hat: f64,
    pub split_case: SplitCase,
    pub z_param: Option<f64>,
    pub children: Option<[usize; 2]>,
    pub bridge: Option<Bridge>,
    pub label: Label,
    pub good_cube: Option<DyadicCube>,
    pub chord: Option<Segment>,
}

impl HullNode {
    fn from_points(e: &PointSet, points: Vec<usize>, sigma: String, depth: usize) -> HullNode {
        let coords: Vec<Point> = points.iter().map(|&i| e.points()[i]).collect();
        let hull = convex_hull(&coords).expect("node point sets are nonempty");
        let (a, b, diam) = diameter_pair(&hull);
        let beta_hat = hull_beta_hat(&hull);
        HullNode {
            id: 0,
            sigma,
            depth,
            parent: None,
            points,
            hull,
            diam,
            diam_segment: Segment::new(a, b),
            beta_hat,
            split_case: SplitCase::Leaf,
            z_param: None,
            children: None,
            bridge: None,
            label: Label::Unlabeled,
            good_cube: None,
            chord: None,
        }
    }

    pub fn is_single_point(&self) -> bool {
        self.hull.rank() == Rank::Point
    }

    pub fn coords<'a>(&'a self, e: &'a PointSet) -> impl Iterator<Item = Point> + 'a {
        self.points.iter().map(move |&i| e.points()[i])
    }
}

/// Root node covering all of `E`.
pub fn make_root(e: &PointSet) -> HullNode {
    HullNode::from_points(e, (0..e.len()).collect(), String::new(), 0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub children: [HullNode; 2],
    pub bridge: Bridge,
    pub case: SplitCase,
    pub z_param: Option<f64>,
}

/// Splits a node with at least two distinct points.
pub fn split_node(e: &PointSet, node: &HullNode) -> Result<Split, TreeError> {
    if node.points.len() < 2 || node.diam <= 0.0 {
        return Err(TreeError::LeafNode);
    }
    let params: Vec<(usize, f64)> = node
        .points
        .iter()
        .map(|&i| {
            let t = project_onto_segment_line(e.points()[i], &node.diam_segment)
                .expect("positive diameter");
            (i, t)
        })
        .collect();

    let third = 1.0 / 3.0;
    let two_thirds = 2.0 / 3.0;
    // closest to the midpoint, ties to the smaller parameter, then index
    let z = params
        .iter()
        .filter(|&&(_, t)| t > third && t < two_thirds)
        .min_by(|a, b| {
            (a.1 - 0.5)
                .abs()
                .total_cmp(&(b.1 - 0.5).abs())
                .then(a.1.total_cmp(&b.1))
                .then(a.0.cmp(&b.0))
        })
        .copied()
        .filter(|&(_, t)| t > EPS && t < 1.0 - EPS);

    let child_sigma = |bit: char| {
        let mut s = node.sigma.clone();
        s.push(bit);
        s
    };

    let (lo, hi, case, z_param) = match z {
        Some((_, zt)) => (zt, zt, SplitCase::P1, Some(zt)),
        None => (third, two_thirds, SplitCase::P2, None),
    };
    let left: Vec<usize> = params.iter().filter(|p| p.1 <= lo).map(|p| p.0).collect();
    let right: Vec<usize> = params.iter().filter(|p| p.1 >= hi).map(|p| p.0).collect();
    debug_assert!(!left.is_empty() && !right.is_empty());

    let bridge = match z {
        Some((zi, _)) => {
            let zp = e.points()[zi];
            Bridge {
                e0: zp,
                e1: zp,
                length: 0.0,
            }
        }
        None => {
            let mut best: Option<Bridge> = None;
            for &i in &left {
                for &j in &right {
                    let (a, b) = (e.points()[i], e.points()[j]);
                    let d = a.dist(b);
                    if best.map_or(true, |bb| d < bb.length) {
                        best = Some(Bridge {
                            e0: a,
                            e1: b,
                            length: d,
                        });
                    }
                }
            }
            best.expect("both children nonempty")
        }
    };

    let c0 = HullNode::from_points(e, left, child_sigma('0'), node.depth + 1);
    let c1 = HullNode::from_points(e, right, child_sigma('1'), node.depth + 1);
    Ok(Split {
        children: [c0, c1],
        bridge,
        case,
        z_param,
    })
}

/// The scale `n` with `side(n)/2 < diam <= side(n)`.
pub fn associated_scale(diam: f64) -> i32 {
    debug_assert!(diam > 0.0);
    let mut n = (-diam.log2().ceil()) as i32;
    while side_at(n) < diam {
        n -= 1;
    }
    while side_at(n) / 2.0 >= diam {
        n += 1;
    }
    n
}

/// Cubes at the associated scale whose closure meets the hull, sorted.
/// Empty for single-point hulls.
pub fn associated_cubes(node: &HullNode) -> Vec<DyadicCube> {
    if node.diam <= 0.0 {
        return Vec::new();
    }
    let n = associated_scale(node.diam);
    let s = side_at(n);
    let bb = node.hull.bbox();
    let k0 = (bb.min.x / s).ceil() as i64 - 1;
    let k1 = (bb.max.x / s).floor() as i64;
    let j0 = (bb.min.y / s).ceil() as i64 - 1;
    let j1 = (bb.max.y / s).floor() as i64;
    let mut out = Vec::new();
    for k in k0..=k1 {
        for j in j0..=j1 {
            let q = DyadicCube::new(n, k, j);
            if hull_meets_box(&node.hull, &q.closure()) {
                out.push(q);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub label: Label,
    pub good_cube: Option<DyadicCube>,
    pub chord: Option<Segment>,
    /// Beta results of every cube examined, in examination order.
    pub examined: Vec<BetaResult>,
}

/// Good/bad label of a node together with its chord.
pub fn classify(node: &HullNode, e: &PointSet, r: f64) -> Classification {
    let mut cache = BTreeMap::new();
    classify_cached(node, e, r, &mut cache)
}

fn classify_cached(
    node: &HullNode,
    e: &PointSet,
    r: f64,
    cache: &mut BTreeMap<DyadicCube, BetaResult>,
) -> Classification {
    if node.is_single_point() {
        let p = node.hull.vertices()[0];
        return Classification {
            label: Label::Good,
            good_cube: Some(DyadicCube::containing(p, finest_scale(r, Region::Cube))),
            chord: None,
            examined: Vec::new(),
        };
    }
    let mut examined = Vec::new();
    for q in associated_cubes(node) {
        let beta = *cache
            .entry(q)
            .or_insert_with(|| beta_of_cube(e, q, Region::Triple));
        examined.push(beta);
        if beta.r_value < 2.0 * r {
            let fit = beta.fit.expect("3Q contains the node's points");
            let tol = EPS * e.scale();
            let chord = clip_line_to_hull(fit.anchor, fit.direction, &node.hull, tol)
                .filter(|c| !c.is_degenerate());
            return Classification {
                label: Label::Good,
                good_cube: Some(q),
                chord,
                examined,
            };
        }
    }
    Classification {
        label: Label::Bad,
        good_cube: None,
        chord: None,
        examined,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HullTree {
    nodes: Vec<HullNode>,
    constants: Constants,
    r: f64,
    generations: usize,
    /// `3Q` beta results of every cube touched by classification.
    triple_betas: BTreeMap<DyadicCube, BetaResult>,
}

/// Breadth-first construction: classify, split bad nodes, repeat.
pub fn build_tree(e: &PointSet, r: f64) -> Result<HullTree, TreeError> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(TreeError::NonPositiveRadius);
    }
    let mut cache = BTreeMap::new();
    let mut nodes = vec![make_root(e)];
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        let c = classify_cached(&nodes[id], e, r, &mut cache);
        let node = &mut nodes[id];
        node.label = c.label;
        node.good_cube = c.good_cube;
        node.chord = c.chord;
        if node.label != Label::Bad {
            continue;
        }
        let split = split_node(e, &nodes[id])?;
        let base = nodes.len();
        let node = &mut nodes[id];
        node.split_case = split.case;
        node.z_param = split.z_param;
        node.bridge = Some(split.bridge);
        node.children = Some([base, base + 1]);
        for (i, mut child) in split.children.into_iter().enumerate() {
            child.id = base + i;
            child.parent = Some(id);
            nodes.push(child);
            queue.push_back(base + i);
        }
    }
    let generations = nodes.iter().map(|n| n.depth).max().unwrap_or(0);
    Ok(HullTree {
        nodes,
        constants: Constants::derive(),
        r,
        generations,
        triple_betas: cache,
    })
}

impl HullTree {
    pub fn nodes(&self) -> &[HullNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &HullNode {
        &self.nodes[id]
    }

    pub fn root(&self) -> &HullNode {
        &self.nodes[0]
    }

    pub fn constants(&self) -> &Constants {
        &self.constants
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Generation count `N` (depth of the deepest node).
    pub fn generations(&self) -> usize {
        self.generations
    }

    pub fn triple_betas(&self) -> &BTreeMap<DyadicCube, BetaResult> {
        &self.triple_betas
    }

    pub fn leaves(&self) -> impl Iterator<Item = &HullNode> {
        self.nodes.iter().filter(|n| n.children.is_none())
    }

    /// Nodes that were split.
    pub fn splits(&self) -> impl Iterator<Item = &HullNode> {
        self.nodes.iter().filter(|n| n.children.is_some())
    }

    pub fn is_fully_labeled(&self) -> bool {
        self.nodes.iter().all(|n| n.label != Label::Unlabeled)
    }

    /// Nodes at exactly `depth`, in breadth-first order.
    pub fn generation(&self, depth: usize) -> impl Iterator<Item = &HullNode> {
        self.nodes.iter().filter(move |n| n.depth == depth)
    }

    /// Descendants of `id` exactly `steps` generations below it.
    pub fn descendants_at(&self, id: usize, steps: usize) -> Vec<usize> {
        let mut frontier = vec![id];
        for _ in 0..steps {
            frontier = frontier
                .iter()
                .filter_map(|&i| self.nodes[i].children)
                .flatten()
                .collect();
            if frontier.is_empty() {
                break;
            }
        }
        frontier
    }

    /// Largest violation of the split postconditions: children's parameters
    /// fall in `[0, z]` / `[z, 1]` (P1) or `[0, 1/3]` / `[2/3, 1]` (P2), the
    /// children partition the parent's points (sharing only the P1 split
    /// points) and neither is empty. Zero when everything holds.
    pub fn split_violation(&self, e: &PointSet) -> f64 {
        let mut worst = 0.0f64;
        for node in self.splits() {
            let [c0, c1] = node.children.unwrap();
            let (c0, c1) = (&self.nodes[c0], &self.nodes[c1]);
            if c0.points.is_empty() || c1.points.is_empty() {
                return f64::INFINITY;
            }
            let (hi0, lo1) = match node.split_case {
                SplitCase::P1 => {
                    let z = node.z_param.unwrap();
                    (z, z)
                }
                _ => (1.0 / 3.0, 2.0 / 3.0),
            };
            let t = |i: usize| {
                project_onto_segment_line(e.points()[i], &node.diam_segment).unwrap()
            };
            for &i in &c0.points {
                let ti = t(i);
                worst = worst.max(ti - hi0).max(-ti - EPS);
            }
            for &i in &c1.points {
                let ti = t(i);
                worst = worst.max(lo1 - ti).max(ti - 1.0 - EPS);
            }
            let mut union: Vec<usize> = c0.points.iter().chain(&c1.points).copied().collect();
            union.sort_unstable();
            union.dedup();
            let mut parent = node.points.clone();
            parent.sort_unstable();
            if union != parent {
                return f64::INFINITY;
            }
        }
        worst.max(0.0)
    }

    /// Largest distance by which a child vertex sticks out of its parent.
    pub fn containment_violation(&self) -> f64 {
        let mut worst = 0.0f64;
        for node in self.splits() {
            for c in node.children.unwrap() {
                for &v in self.nodes[c].hull.vertices() {
                    if !node.hull.contains(v, 0.0) {
                        let edges = node.hull.edges();
                        let d = edges
                            .iter()
                            .map(|s| crate::geom::dist_point_segment(v, s))
                            .fold(f64::INFINITY, f64::min);
                        let d = if edges.is_empty() {
                            v.dist(node.hull.vertices()[0])
                        } else {
                            d
                        };
                        worst = worst.max(d);
                    }
                }
            }
        }
        worst
    }

    /// Smallest value of `dist(C_0, C_1) - |L|/3` over P2 splits
    /// (`+inf` when there are none).
    pub fn p2_separation_margin(&self) -> f64 {
        self.splits()
            .filter(|n| n.split_case == SplitCase::P2)
            .map(|n| {
                let [c0, c1] = n.children.unwrap();
                hull_distance(&self.nodes[c0].hull, &self.nodes[c1].hull) - n.diam / 3.0
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Generations (up to `N`) at which some point of `E` is in no hull of
    /// the frontier (nodes of that depth plus shallower leaves).
    pub fn uncovered_generations(&self, e: &PointSet) -> Vec<usize> {
        let tol = EPS * e.scale();
        let mut bad = Vec::new();
        for k in 0..=self.generations {
            let frontier: Vec<&HullNode> = self
                .nodes
                .iter()
                .filter(|n| n.depth == k || (n.depth < k && n.children.is_none()))
                .collect();
            let mut covered = vec![false; e.len()];
            for n in &frontier {
                for &i in &n.points {
                    if n.hull.contains(e.points()[i], tol) {
                        covered[i] = true;
                    }
                }
            }
            if covered.iter().any(|c| !c) {
                bad.push(k);
            }
        }
        bad
    }

    /// Pairs of same-generation hulls that meet. The disjointness claimed for
    /// a generation fails around shared P1 split points, so this is reported
    /// rather than asserted.
    pub fn same_generation_overlaps(&self) -> usize {
        let mut count = 0;
        for k in 0..=self.generations {
            let gen: Vec<&HullNode> = self.generation(k).collect();
            for a in 0..gen.len() {
                for b in (a + 1)..gen.len() {
                    if hull_distance(&gen[a].hull, &gen[b].hull) == 0.0 {
                        count += 1;
                    }
                }
            }
        }
        count
    }
}
