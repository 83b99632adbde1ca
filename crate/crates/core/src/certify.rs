//! Runtime certification of a pipeline run: coverage, connectivity, curve
//! length, and every constant-explicit inequality of the construction.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::curve_builder::{assemble, good_hull_piece, termination_bound, AssemblyTrace, Curve, CurveError};
use crate::geom::{
    convex_hull, dist_point_segment, dist_segment_segment, hull_area, BBox, GeomError, Point,
    PointSet, Rank, Segment, EPS,
};
use crate::hull_tree::{associated_cubes, build_tree, HullTree, Label, SplitCase, TreeError};
use crate::multiscale::{
    beta_of_cube, default_eps_top, lower_bound, truncated_square_sum, DyadicCube, MultiscaleError,
    Region,
};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error(transparent)]
    Multiscale(#[from] MultiscaleError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("empty curve")]
    EmptyCurve,
}

/// Serializes non-finite floats as strings so JSON stays valid.
fn ser_float<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else if x.is_nan() {
        s.serialize_str("nan")
    } else if *x > 0.0 {
        s.serialize_str("+inf")
    } else {
        s.serialize_str("-inf")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverageResult {
    pub ok: bool,
    pub worst_point: Point,
    /// `max_e dist(e, curve) - r`.
    #[serde(serialize_with = "ser_float")]
    pub worst_residual: f64,
}

fn curve_elements(curve: &Curve) -> Vec<Segment> {
    let mut out = curve.plain_segments();
    out.extend(curve.points().into_iter().map(|p| Segment::new(p, p)));
    out
}

fn scale_of(points: &[Point]) -> f64 {
    match BBox::of(points) {
        Some(b) => {
            let d = b.width().hypot(b.height());
            if d > 0.0 {
                d
            } else {
                1.0
            }
        }
        None => 1.0,
    }
}

/// Distance from `x` to the union of the curve's pieces.
pub fn dist_to_curve(x: Point, curve: &Curve) -> f64 {
    let s = curve
        .segments
        .iter()
        .map(|s| dist_point_segment(x, &s.segment))
        .fold(f64::INFINITY, f64::min);
    curve
        .isolated_points
        .iter()
        .map(|p| x.dist(p.point))
        .fold(s, f64::min)
}

pub fn coverage_check(e: &PointSet, curve: &Curve, r: f64) -> CoverageResult {
    let tol = EPS * e.scale();
    if curve.is_empty() {
        return CoverageResult {
            ok: false,
            worst_point: e.points()[0],
            worst_residual: f64::INFINITY,
        };
    }
    let dists: Vec<f64> = e
        .points()
        .par_iter()
        .map(|&x| dist_to_curve(x, curve))
        .collect();
    let (i, d) = dists
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, d)| if d > acc.1 { (i, d) } else { acc });
    let residual = d - r;
    CoverageResult {
        ok: residual <= tol,
        worst_point: e.points()[i],
        worst_residual: residual,
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Number of connected components of the curve, pieces joined when they
/// come within `tol`.
pub fn components(curve: &Curve, tol: f64) -> usize {
    let elems = curve_elements(curve);
    if elems.is_empty() {
        return 0;
    }
    let boxes: Vec<BBox> = elems.iter().map(|s| BBox::of(&[s.p, s.q]).unwrap()).collect();
    let mut order: Vec<usize> = (0..elems.len()).collect();
    order.sort_by(|&a, &b| boxes[a].min.x.total_cmp(&boxes[b].min.x).then(a.cmp(&b)));
    let mut uf = UnionFind((0..elems.len()).collect());
    for (oi, &i) in order.iter().enumerate() {
        for &j in &order[oi + 1..] {
            if boxes[j].min.x > boxes[i].max.x + tol {
                break;
            }
            if boxes[j].min.y > boxes[i].max.y + tol || boxes[i].min.y > boxes[j].max.y + tol {
                continue;
            }
            if dist_segment_segment(&elems[i], &elems[j]) <= tol {
                uf.union(i, j);
            }
        }
    }
    (0..elems.len()).filter(|&i| uf.find(i) == i).count()
}

pub fn connectivity_check(curve: &Curve) -> bool {
    let tol = EPS * scale_of(&curve.vertices());
    components(curve, tol) == 1
}

/// One-dimensional measure of the union of the curve's segments.
pub fn curve_length(curve: &Curve) -> f64 {
    let segs: Vec<Segment> = curve
        .plain_segments()
        .into_iter()
        .filter(|s| !s.is_degenerate())
        .collect();
    let tol = EPS * scale_of(&curve.vertices());
    // Groups of segments sharing a supporting line: (origin, unit direction, members).
    let mut groups: Vec<(Point, Point, Vec<(f64, f64)>)> = Vec::new();
    for s in segs {
        let d = s.q - s.p;
        let u = d * (1.0 / d.norm());
        let found = groups.iter_mut().find(|(o, g, _)| {
            g.cross(u).abs() <= EPS && g.cross(s.p - *o).abs() <= tol && g.cross(s.q - *o).abs() <= tol
        });
        match found {
            Some((o, g, members)) => {
                let (a, b) = (g.dot(s.p - *o), g.dot(s.q - *o));
                members.push((a.min(b), a.max(b)));
            }
            None => groups.push((s.p, u, vec![(0.0, d.norm())])),
        }
    }
    let mut total = 0.0;
    for (_, _, mut iv) in groups {
        iv.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let (mut lo, mut hi) = iv[0];
        for &(a, b) in &iv[1..] {
            if a > hi {
                total += hi - lo;
                lo = a;
                hi = b;
            } else {
                hi = hi.max(b);
            }
        }
        total += hi - lo;
    }
    total
}

/// Length of the optimal curve for two points at distance `d`.
pub fn two_point_oracle(d: f64, r: f64) -> f64 {
    (d - 2.0 * r).max(0.0)
}

fn samples(curve: &Curve, step: f64) -> Vec<Point> {
    let mut out = curve.points();
    for s in curve.plain_segments() {
        let k = (s.length() / step).ceil().max(1.0) as usize;
        out.extend((0..=k).map(|i| s.at(i as f64 / k as f64)));
    }
    out
}

/// Symmetric Hausdorff distance, sampled at `1e-3` of the joint scale.
pub fn hausdorff_distance(c1: &Curve, c2: &Curve) -> Result<f64, CertifyError> {
    if c1.is_empty() || c2.is_empty() {
        return Err(CertifyError::EmptyCurve);
    }
    let mut all = c1.vertices();
    all.extend(c2.vertices());
    let step = 1e-3 * scale_of(&all);
    let one_sided = |a: &Curve, b: &Curve| {
        samples(a, step)
            .par_iter()
            .map(|&x| dist_to_curve(x, b))
            .reduce(|| 0.0, f64::max)
    };
    Ok(one_sided(c1, c2).max(one_sided(c2, c1)))
}

/// Half-width of the thinnest strip containing `points`, by trying the
/// direction of every pair of hull vertices.
pub fn strip_half_width_brute_force(points: &[Point]) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    let hull = convex_hull(points).expect("finite points");
    let v = hull.vertices();
    let mut best = f64::INFINITY;
    for i in 0..v.len() {
        for j in (i + 1)..v.len() {
            let d = v[j] - v[i];
            let n = d.perp() * (1.0 / d.norm());
            let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| {
                let t = n.dot(p);
                (lo.min(t), hi.max(t))
            });
            best = best.min((hi - lo) / 2.0);
        }
    }
    if best.is_finite() {
        best
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Check {
    pub pass: bool,
    /// Largest violation `lhs - rhs`; nonpositive when the inequality holds.
    #[serde(serialize_with = "ser_float")]
    pub residual: f64,
}

impl Check {
    fn le(residual: f64, tol: f64) -> Check {
        Check {
            pass: residual <= tol,
            residual,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Telescoping {
    /// `sum_good |C| + 1/2 sum |B|`.
    pub lhs: f64,
    /// `|E| + sum_bad beta_hat^2 |C|`.
    pub rhs: f64,
    /// `|E| + K sum_bad beta_hat^2 |C|`.
    pub rhs_k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub schema: u32,
    pub r: f64,
    pub diameter: f64,
    pub points: usize,
    pub variant: &'static str,
    pub eps_top: f64,
    pub lower: f64,
    pub point_minimizer: bool,
    pub truncated_sum_q: f64,
    pub truncated_sum_3q: f64,
    pub curve_length: f64,
    pub curve_segments: usize,
    pub curve_isolated_points: usize,
    pub generations: usize,
    pub termination_bound: u64,
    pub nodes: usize,
    pub splits_p1: usize,
    pub splits_p2: usize,
    pub good_leaves: usize,
    pub bridge_length: f64,
    pub bad_beta_hat_sum: f64,
    pub telescoping: Telescoping,
    /// Smallest depth after which every node's descendants have halved.
    pub observed_halving_depth: usize,
    pub max_multiplicity: usize,
    pub same_generation_overlaps: usize,
    pub checks: BTreeMap<String, Check>,
}

impl BoundsReport {
    pub fn failed(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|(_, c)| !c.pass)
            .map(|(k, _)| k.as_str())
            .collect()
    }

    pub fn all_pass(&self) -> bool {
        self.checks.values().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub variant: Region,
    /// Upward truncation tolerance; `None` uses the default.
    pub eps_top: Option<f64>,
    pub snapshots: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            variant: Region::Cube,
            eps_top: None,
            snapshots: false,
        }
    }
}

/// Everything produced by one run.
#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub tree: HullTree,
    pub curve: Curve,
    pub trace: AssemblyTrace,
    pub report: BoundsReport,
}

struct CubeFamily {
    /// Node ids associated to each cube.
    members: BTreeMap<DyadicCube, Vec<usize>>,
}

impl CubeFamily {
    fn of(tree: &HullTree) -> Self {
        let mut members: BTreeMap<DyadicCube, Vec<usize>> = BTreeMap::new();
        for node in tree.nodes() {
            for q in associated_cubes(node) {
                members.entry(q).or_default().push(node.id);
            }
        }
        CubeFamily { members }
    }
}

fn observed_halving_depth(tree: &HullTree) -> usize {
    let mut worst = 0;
    for node in tree.nodes() {
        let mut steps = 0;
        let mut frontier = vec![node.id];
        while !frontier.is_empty()
            && frontier
                .iter()
                .any(|&i| tree.node(i).diam > 0.5 * node.diam)
        {
            frontier = frontier
                .iter()
                .filter_map(|&i| tree.node(i).children)
                .flatten()
                .collect();
            steps += 1;
        }
        if !frontier.is_empty() {
            worst = worst.max(steps);
        }
    }
    worst
}

pub fn run_pipeline(e: &PointSet, r: f64, opts: EvalOptions) -> Result<PipelineRun, CertifyError> {
    let eps_top = opts.eps_top.unwrap_or_else(|| default_eps_top(e));
    let lb = lower_bound(e, r, opts.variant, eps_top)?;
    let other = match opts.variant {
        Region::Cube => Region::Triple,
        Region::Triple => Region::Cube,
    };
    let other_sum = truncated_square_sum(e, r, other, eps_top)?.total;
    let (sum_q, sum_3q) = match opts.variant {
        Region::Cube => (lb.sum.total, other_sum),
        Region::Triple => (other_sum, lb.sum.total),
    };

    let tree = build_tree(e, r)?;
    let (curve, trace) = assemble(&tree, opts.snapshots)?;
    let consts = *tree.constants();
    let scale = e.scale();
    let tol = EPS * scale;
    let tol_area = EPS * scale * scale;
    let diameter = e.diameter();
    let length = curve_length(&curve);
    let mut checks = BTreeMap::new();
    let mut put = |name: &str, c: Check| {
        checks.insert(name.to_string(), c);
    };

    let cov = coverage_check(e, &curve, r);
    put("coverage", Check::le(cov.worst_residual, tol));
    let comps = components(&curve, EPS * scale_of(&curve.vertices()));
    put(
        "connectivity",
        Check {
            pass: comps == 1,
            residual: comps as f64 - 1.0,
        },
    );

    let mut k_split = f64::NEG_INFINITY;
    for node in tree.splits() {
        let [a, b] = node.children.unwrap();
        let lhs = tree.node(a).diam + 0.5 * node.bridge.unwrap().length + tree.node(b).diam;
        let rhs = node.diam + consts.k * node.beta_hat.powi(2) * node.diam;
        k_split = k_split.max(lhs - rhs);
    }
    put("K_split", Check::le(k_split, tol));

    let mut seven = f64::NEG_INFINITY;
    let mut good_diam = 0.0;
    for node in tree.nodes().iter().filter(|n| n.label == Label::Good) {
        let piece = good_hull_piece(node)?;
        seven = seven.max(curve_length(&piece) - 7.0 * node.diam);
        good_diam += node.diam;
    }
    put("seven_bound", Check::le(seven, tol));

    let mut area = f64::NEG_INFINITY;
    for node in tree.nodes().iter().filter(|n| n.hull.rank() == Rank::Polygon) {
        let a = hull_area(&node.hull);
        let d2 = node.diam * node.diam;
        area = area
            .max(0.5 * node.beta_hat * d2 - a)
            .max(a - 2.0 * node.beta_hat * d2);
    }
    put("area_sandwich", Check::le(area, tol_area));

    let bridge_length: f64 = tree.splits().map(|n| n.bridge.unwrap().length).sum();
    let bad_beta_hat_sum: f64 = tree
        .nodes()
        .iter()
        .filter(|n| n.label == Label::Bad)
        .map(|n| n.beta_hat.powi(2) * n.diam)
        .sum();
    let tele = Telescoping {
        lhs: good_diam + 0.5 * bridge_length,
        rhs: diameter + bad_beta_hat_sum,
        rhs_k: diameter + consts.k * bad_beta_hat_sum,
    };
    put("telescoping", Check::le(tele.lhs - tele.rhs, tol));
    put("telescoping_K", Check::le(tele.lhs - tele.rhs_k, tol));
    put("length_chain", Check::le(length - 7.0 * tele.lhs, tol));
    put("length_bound", Check::le(length - 7.0 * tele.rhs, tol));
    put("lower_vs_length", Check::le(lb.value - (length + 2.0 * r), tol));
    put("diameter_gap", Check::le(diameter - 2.0 * r - length, tol));

    // Per-cube families: the 288M lemma and multiplicity.
    let family = CubeFamily::of(&tree);
    let big = (288.0 * consts.m as f64).powi(2);
    let (mut lemma, mut corollary) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut max_mult = 0usize;
    for (q, ids) in &family.members {
        let beta = tree
            .triple_betas()
            .get(q)
            .copied()
            .unwrap_or_else(|| beta_of_cube(e, *q, Region::Triple));
        if beta.r_value >= 2.0 * r {
            let lhs: f64 = ids
                .iter()
                .map(|&i| tree.node(i).beta_hat.powi(2) * tree.node(i).diam)
                .sum();
            lemma = lemma.max(lhs - big * beta.beta.powi(2) * q.diam());
            let reduced = beta.beta - r / q.region_diam(Region::Triple);
            corollary = corollary.max(lhs - big * reduced.powi(2) * q.diam());
        }
        for &x in e.points().iter().filter(|&&x| q.contains(x)) {
            let count = ids
                .iter()
                .filter(|&&i| tree.node(i).hull.contains(x, tol))
                .count();
            max_mult = max_mult.max(count);
        }
    }
    put("lemma_288M", Check::le(lemma, tol));
    put("corollary_288M", Check::le(corollary, tol));
    put(
        "multiplicity",
        Check::le(max_mult as f64 - consts.m as f64, 0.0),
    );

    let mut halving = f64::NEG_INFINITY;
    for node in tree.nodes() {
        for d in tree.descendants_at(node.id, consts.m as usize) {
            if d != node.id {
                halving = halving.max(tree.node(d).diam - 0.5 * node.diam);
            }
        }
    }
    put("diameter_halving", Check::le(halving, tol));

    let bound = termination_bound(e, r, consts.m);
    put(
        "termination",
        Check::le(trace.generations as f64 - bound as f64, 0.0),
    );
    put(
        "final_generation_good",
        Check {
            pass: trace.last_bad_is_empty(),
            residual: trace.records.last().map_or(0, |rec| rec.bad.len()) as f64,
        },
    );

    put("split_postconditions", Check::le(tree.split_violation(e), EPS));
    put("child_containment", Check::le(tree.containment_violation(), tol));
    put("p2_separation", Check::le(-tree.p2_separation_margin(), tol));
    let uncovered = tree.uncovered_generations(e);
    put(
        "generation_coverage",
        Check {
            pass: uncovered.is_empty(),
            residual: uncovered.len() as f64,
        },
    );

    let mut oracle = 0.0f64;
    for (q, beta) in tree.triple_betas() {
        let pts: Vec<Point> = e
            .points()
            .iter()
            .copied()
            .filter(|&p| q.region_contains(Region::Triple, p))
            .collect();
        oracle = oracle.max((strip_half_width_brute_force(&pts) - beta.r_value).abs());
    }
    put("beta_oracle", Check::le(oracle, tol));

    if e.len() == 2 && diameter > 2.0 * r {
        put(
            "two_point_oracle",
            Check::le((lb.value - two_point_oracle(diameter, r)).abs(), tol),
        );
    }

    let report = BoundsReport {
        schema: SCHEMA,
        r,
        diameter,
        points: e.len(),
        variant: opts.variant.label(),
        eps_top,
        lower: lb.value,
        point_minimizer: lb.point_minimizer,
        truncated_sum_q: sum_q,
        truncated_sum_3q: sum_3q,
        curve_length: length,
        curve_segments: curve.segments.len(),
        curve_isolated_points: curve.isolated_points.len(),
        generations: trace.generations,
        termination_bound: bound,
        nodes: tree.nodes().len(),
        splits_p1: tree.splits().filter(|n| n.split_case == SplitCase::P1).count(),
        splits_p2: tree.splits().filter(|n| n.split_case == SplitCase::P2).count(),
        good_leaves: tree.nodes().iter().filter(|n| n.label == Label::Good).count(),
        bridge_length,
        bad_beta_hat_sum,
        telescoping: tele,
        observed_halving_depth: observed_halving_depth(&tree),
        max_multiplicity: max_mult,
        same_generation_overlaps: tree.same_generation_overlaps(),
        checks,
    };
    Ok(PipelineRun {
        tree,
        curve,
        trace,
        report,
    })
}

pub fn evaluate_bounds(e: &PointSet, r: f64, opts: EvalOptions) -> Result<BoundsReport, CertifyError> {
    Ok(run_pipeline(e, r, opts)?.report)
}

fn write_canonical(v: &serde_json::Value, out: &mut String) {
    use serde_json::Value;
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                // adding zero turns -0.0 into 0.0
                out.push_str(&format!("{:.16e}", n.as_f64().unwrap() + 0.0));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(a) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_canonical(x, out);
            }
            out.push(']');
        }
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                write_canonical(&m[k], out);
            }
            out.push('}');
        }
    }
}

/// JSON with sorted keys and every float printed with 17 significant digits.
pub fn to_canonical_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let v = serde_json::to_value(value)?;
    let mut out = String::new();
    write_canonical(&v, &mut out);
    out.push('\n');
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve_builder::Provenance;
    use approx::assert_abs_diff_eq;

    fn pts(v: &[(f64, f64)]) -> PointSet {
        PointSet::new(v.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
    }

    fn curve_of(segs: &[((f64, f64), (f64, f64))]) -> Curve {
        let mut c = Curve::default();
        for &((a, b), (x, y)) in segs {
            c.push(
                Segment::new(Point::new(a, b), Point::new(x, y)),
                Provenance::Bridge(String::new()),
            );
        }
        c
    }

    #[test]
    fn coverage_examples() {
        let e = pts(&[(0.0, 0.0), (1.0, 0.0)]);
        let c = curve_of(&[((0.0, 0.0), (1.0, 0.0))]);
        let res = coverage_check(&e, &c, 0.3);
        assert!(res.ok);
        assert_abs_diff_eq!(res.worst_residual, -0.3);

        let e = pts(&[(0.0, 0.0), (0.1, 0.0), (0.0, 0.1)]);
        let mut c = Curve::default();
        c.push(
            Segment::new(Point::new(0.05, 0.05), Point::new(0.05, 0.05)),
            Provenance::Point(String::new()),
        );
        assert!(coverage_check(&e, &c, 0.1).ok);

        let empty = coverage_check(&e, &Curve::default(), 1.0);
        assert!(!empty.ok);
        assert!(empty.worst_residual.is_infinite());
    }

    #[test]
    fn connectivity_examples() {
        assert!(connectivity_check(&curve_of(&[
            ((0.0, 0.0), (1.0, 0.0)),
            ((1.0, 0.0), (1.0, 1.0))
        ])));
        assert!(!connectivity_check(&curve_of(&[
            ((0.0, 0.0), (1.0, 0.0)),
            ((0.0, 1.0), (1.0, 1.0))
        ])));
        assert!(connectivity_check(&curve_of(&[
            ((0.0, 0.0), (1.0, 1.0)),
            ((0.0, 1.0), (1.0, 0.0))
        ])));
    }

    #[test]
    fn length_examples() {
        let twice = curve_of(&[((0.0, 0.0), (1.0, 0.0)), ((1.0, 0.0), (0.0, 0.0))]);
        assert_abs_diff_eq!(curve_length(&twice), 1.0);
        let cross = curve_of(&[((0.0, 0.5), (1.0, 0.5)), ((0.5, 0.0), (0.5, 1.0))]);
        assert_abs_diff_eq!(curve_length(&cross), 2.0);
        let square = curve_of(&[
            ((0.0, 0.0), (1.0, 0.0)),
            ((1.0, 0.0), (1.0, 1.0)),
            ((1.0, 1.0), (0.0, 1.0)),
            ((0.0, 1.0), (0.0, 0.0)),
        ]);
        assert_abs_diff_eq!(curve_length(&square), 4.0);
        let overlap = curve_of(&[((0.0, 0.0), (0.6, 0.0)), ((0.4, 0.0), (1.0, 0.0)), ((2.0, 0.0), (3.0, 0.0))]);
        assert_abs_diff_eq!(curve_length(&overlap), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn two_point_oracle_examples() {
        assert_abs_diff_eq!(two_point_oracle(1.0, 0.2), 0.6, epsilon = 1e-15);
        assert_eq!(two_point_oracle(0.4, 0.2), 0.0);
        assert_eq!(two_point_oracle(10.0, 1.0), 8.0);
    }

    #[test]
    fn hausdorff_examples() {
        let a = curve_of(&[((0.0, 0.0), (1.0, 0.0))]);
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
        let b = curve_of(&[((0.0, 0.25), (1.0, 0.25))]);
        assert_abs_diff_eq!(hausdorff_distance(&a, &b).unwrap(), 0.25, epsilon = 1e-12);
        assert!(hausdorff_distance(&a, &Curve::default()).is_err());
    }

    #[test]
    fn brute_force_strip() {
        let sq = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ];
        assert_abs_diff_eq!(strip_half_width_brute_force(&sq), 0.5);
        assert_eq!(strip_half_width_brute_force(&sq[..2]), 0.0);
        assert_eq!(strip_half_width_brute_force(&sq[..1]), 0.0);
    }

    #[test]
    fn two_point_report() {
        let e = pts(&[(0.0, 0.0), (1.0, 0.0)]);
        let rep = evaluate_bounds(&e, 0.2, EvalOptions::default()).unwrap();
        assert_abs_diff_eq!(rep.lower, 0.6, epsilon = 1e-12);
        assert_abs_diff_eq!(rep.curve_length, 1.0, epsilon = 1e-12);
        assert!(rep.all_pass(), "{:?}", rep.failed());
        assert!(rep.checks.contains_key("two_point_oracle"));
    }

    #[test]
    fn collinear_report() {
        let e = PointSet::new((0..100).map(|i| Point::new(i as f64 / 99.0, 0.0)).collect()).unwrap();
        let rep = evaluate_bounds(&e, 0.1, EvalOptions::default()).unwrap();
        assert_eq!(rep.truncated_sum_q, 0.0);
        assert_eq!(rep.truncated_sum_3q, 0.0);
        assert_abs_diff_eq!(rep.curve_length, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(rep.lower, 0.8, epsilon = 1e-9);
    }

    #[test]
    fn canonical_json_is_sorted_and_fixed_width() {
        let mut m = BTreeMap::new();
        m.insert("b", 0.1f64);
        m.insert("a", 2.0);
        let s = to_canonical_json(&m).unwrap();
        assert_eq!(s, "{\"a\":2.0000000000000000e0,\"b\":1.0000000000000001e-1}\n");
        let c = Check {
            pass: false,
            residual: f64::INFINITY,
        };
        assert!(to_canonical_json(&c).unwrap().contains("\"+inf\""));
    }
}
