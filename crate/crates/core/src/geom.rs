//! Planar primitives with an explicit absolute tolerance.
//!
//! Everything here is a pure function of its inputs. Hulls are stored as
//! counterclockwise lists of extreme vertices together with a degeneracy
//! rank, so that single points and segments flow through the same code paths
//! as genuine polygons.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute geometric tolerance, applied after scaling by the size of the
/// data at hand.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("empty point set")]
    EmptyPointSet,
    #[error("non-finite coordinate at index {0}")]
    NonFinite(usize),
    #[error("projection undefined: degenerate segment")]
    ProjectionUndefined,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    /// Counterclockwise perpendicular.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Total lexicographic order on (x, y).
    pub fn lex_cmp(&self, other: &Point) -> Ordering {
        self.x
            .total_cmp(&other.x)
            .then_with(|| self.y.total_cmp(&other.y))
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

/// Twice the signed area of the triangle (o, a, b).
pub fn orient(o: Point, a: Point, b: Point) -> f64 {
    (a - o).cross(b - o)
}

/// Closed line segment; `p == q` is allowed and denotes a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub p: Point,
    pub q: Point,
}

impl Segment {
    pub const fn new(p: Point, q: Point) -> Self {
        Self { p, q }
    }

    pub fn length(&self) -> f64 {
        self.p.dist(self.q)
    }

    pub fn is_degenerate(&self) -> bool {
        self.p == self.q
    }

    pub fn at(&self, t: f64) -> Point {
        self.p + (self.q - self.p) * t
    }

    pub fn midpoint(&self) -> Point {
        self.at(0.5)
    }
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub min: Point,
    pub max: Point,
}

impl BBox {
    pub fn of(points: &[Point]) -> Option<BBox> {
        let first = *points.first()?;
        let mut b = BBox {
            min: first,
            max: first,
        };
        for p in &points[1..] {
            b.min.x = b.min.x.min(p.x);
            b.min.y = b.min.y.min(p.y);
            b.max.x = b.max.x.max(p.x);
            b.max.y = b.max.y.max(p.y);
        }
        Some(b)
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    /// Larger of the two side lengths.
    pub fn extent(&self) -> f64 {
        self.width().max(self.height())
    }

    pub fn contains_closed(&self, p: Point) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }
}

/// Degeneracy rank of a hull.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rank {
    Point,
    Segment,
    Polygon,
}

impl Rank {
    pub fn as_u8(self) -> u8 {
        match self {
            Rank::Point => 0,
            Rank::Segment => 1,
            Rank::Polygon => 2,
        }
    }
}

/// Convex hull of a finite point set.
///
/// Rank 2 hulls list their vertices counterclockwise starting from the
/// lexicographically smallest one. Rank 1 hulls hold the two extreme points in
/// lexicographic order, rank 0 hulls a single point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hull {
    vertices: Vec<Point>,
    rank: Rank,
}

impl Hull {
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn bbox(&self) -> BBox {
        BBox::of(&self.vertices).expect("hull has at least one vertex")
    }

    /// Boundary as segments: polygon edges, the segment itself, or nothing.
    pub fn edges(&self) -> Vec<Segment> {
        let v = &self.vertices;
        match self.rank {
            Rank::Point => Vec::new(),
            Rank::Segment => vec![Segment::new(v[0], v[1])],
            Rank::Polygon => (0..v.len())
                .map(|i| Segment::new(v[i], v[(i + 1) % v.len()]))
                .collect(),
        }
    }

    /// One-dimensional measure of the boundary (a segment counts once).
    pub fn boundary_length(&self) -> f64 {
        self.edges().iter().map(Segment::length).sum()
    }

    pub fn diameter(&self) -> f64 {
        diameter_pair(self).2
    }

    /// Closed membership with absolute slack `tol`.
    pub fn contains(&self, p: Point, tol: f64) -> bool {
        let v = &self.vertices;
        match self.rank {
            Rank::Point => v[0].dist(p) <= tol,
            Rank::Segment => dist_point_segment(p, &Segment::new(v[0], v[1])) <= tol,
            Rank::Polygon => (0..v.len()).all(|i| {
                let a = v[i];
                let b = v[(i + 1) % v.len()];
                let len = a.dist(b);
                orient(a, b, p) >= -tol * len
            }),
        }
    }
}

fn validate(points: &[Point]) -> Result<(), GeomError> {
    if points.is_empty() {
        return Err(GeomError::EmptyPointSet);
    }
    if let Some(i) = points.iter().position(|p| !p.is_finite()) {
        return Err(GeomError::NonFinite(i));
    }
    Ok(())
}

/// Monotone-chain convex hull keeping only extreme vertices.
///
/// The chain uses exact orientation signs. Afterwards a vertex lying between
/// its neighbours within `EPS * extent` of their line is dropped, so nearly
/// collinear input collapses to a rank 1 hull.
pub fn convex_hull(points: &[Point]) -> Result<Hull, GeomError> {
    validate(points)?;
    let mut pts = points.to_vec();
    pts.sort_by(Point::lex_cmp);
    pts.dedup();
    if pts.len() == 1 {
        return Ok(Hull {
            vertices: pts,
            rank: Rank::Point,
        });
    }
    let tol = EPS * BBox::of(&pts).unwrap().extent();

    let mut lower: Vec<Point> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let exact = lower;

    let mut v = exact.clone();
    let mut changed = true;
    while changed && v.len() > 2 {
        changed = false;
        let mut i = 0;
        while i < v.len() && v.len() > 2 {
            let n = v.len();
            let (a, b, c) = (v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
            let ac = c - a;
            let len2 = ac.dot(ac);
            let t = (b - a).dot(ac);
            let between = t >= 0.0 && t <= len2;
            if between && orient(a, b, c).abs() <= tol * len2.sqrt() {
                v.remove(i);
                changed = true;
            } else {
                i += 1;
            }
        }
    }

    if v.len() <= 2 {
        let mut best = (exact[0], exact[exact.len() - 1]);
        let mut best_d = -1.0;
        for (i, &a) in exact.iter().enumerate() {
            for &b in &exact[i + 1..] {
                let d = a.dist(b);
                if d > best_d {
                    best_d = d;
                    best = ordered_pair(a, b);
                }
            }
        }
        return Ok(Hull {
            vertices: vec![best.0, best.1],
            rank: Rank::Segment,
        });
    }
    Ok(Hull {
        vertices: v,
        rank: Rank::Polygon,
    })
}

fn ordered_pair(a: Point, b: Point) -> (Point, Point) {
    if a.lex_cmp(&b) == Ordering::Greater {
        (b, a)
    } else {
        (a, b)
    }
}

fn pair_cmp(a: &(Point, Point), b: &(Point, Point)) -> Ordering {
    a.0.lex_cmp(&b.0).then_with(|| a.1.lex_cmp(&b.1))
}

/// Index pairs of antipodal vertices of a rank 2 hull (rotating calipers).
///
/// Every pair realizing the diameter is antipodal, so the diameter can be
/// read off this list. Near-parallel edge/vertex contacts contribute both
/// candidate vertices.
fn antipodal_pairs(v: &[Point]) -> Vec<(usize, usize)> {
    let n = v.len();
    let extent = BBox::of(v).unwrap().extent();
    let tol = EPS * extent * extent;
    let area = |i: usize, i1: usize, k: usize| orient(v[i], v[i1], v[k]).abs();
    let mut pairs = Vec::with_capacity(2 * n);
    let mut j = 1;
    for i in 0..n {
        let i1 = (i + 1) % n;
        while area(i, i1, (j + 1) % n) > area(i, i1, j) + tol {
            j = (j + 1) % n;
        }
        pairs.push((i, j));
        pairs.push((i1, j));
        let j1 = (j + 1) % n;
        if (area(i, i1, j1) - area(i, i1, j)).abs() <= tol {
            pairs.push((i, j1));
            pairs.push((i1, j1));
        }
    }
    pairs
}

/// A pair of hull vertices at maximal distance, and that distance.
///
/// Among exact ties the lexicographically smallest ordered pair wins.
pub fn diameter_pair(h: &Hull) -> (Point, Point, f64) {
    let v = &h.vertices;
    match h.rank {
        Rank::Point => (v[0], v[0], 0.0),
        Rank::Segment => (v[0], v[1], v[0].dist(v[1])),
        Rank::Polygon => {
            let mut best: Option<((Point, Point), f64)> = None;
            for (i, j) in antipodal_pairs(v) {
                if i == j {
                    continue;
                }
                let d = v[i].dist(v[j]);
                let pair = ordered_pair(v[i], v[j]);
                best = match best {
                    None => Some((pair, d)),
                    Some((bp, bd)) => {
                        if d > bd || (d == bd && pair_cmp(&pair, &bp) == Ordering::Less) {
                            Some((pair, d))
                        } else {
                            Some((bp, bd))
                        }
                    }
                };
            }
            let ((a, b), d) = best.expect("polygon has antipodal pairs");
            (a, b, d)
        }
    }
}

/// Best-fitting strip: all points lie within `width / 2` of the center line
/// through `anchor` with unit `direction`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripFit {
    pub direction: Point,
    pub anchor: Point,
    pub width: f64,
}

impl StripFit {
    pub fn half_width(&self) -> f64 {
        0.5 * self.width
    }

    /// Distance from `p` to the center line.
    pub fn dist_to_center(&self, p: Point) -> f64 {
        self.direction.cross(p - self.anchor).abs()
    }
}

/// Minimum-width strip of a point set.
///
/// The optimal strip of a convex polygon is flush with one of its edges, so
/// each edge is paired with its farthest vertex by rotating calipers.
pub fn min_width_strip(points: &[Point]) -> Result<StripFit, GeomError> {
    let hull = convex_hull(points)?;
    Ok(hull_min_width_strip(&hull))
}

pub fn hull_min_width_strip(hull: &Hull) -> StripFit {
    let v = &hull.vertices;
    match hull.rank {
        Rank::Point => StripFit {
            direction: Point::new(1.0, 0.0),
            anchor: v[0],
            width: 0.0,
        },
        Rank::Segment => {
            let d = v[1] - v[0];
            StripFit {
                direction: d * (1.0 / d.norm()),
                anchor: v[0],
                width: 0.0,
            }
        }
        Rank::Polygon => {
            let n = v.len();
            let height = |i: usize, k: usize| {
                let e = v[(i + 1) % n] - v[i];
                e.cross(v[k] - v[i]) / e.norm()
            };
            let mut j = 1;
            let mut best: Option<(usize, f64)> = None;
            for i in 0..n {
                while height(i, (j + 1) % n) > height(i, j) {
                    j = (j + 1) % n;
                }
                let w = height(i, j);
                if best.map_or(true, |(_, bw)| w < bw) {
                    best = Some((i, w));
                }
            }
            let (i, w) = best.unwrap();
            let e = v[(i + 1) % n] - v[i];
            let dir = e * (1.0 / e.norm());
            StripFit {
                direction: dir,
                anchor: v[i] + dir.perp() * (0.5 * w),
                width: w,
            }
        }
    }
}

pub fn dist_point_segment(x: Point, s: &Segment) -> f64 {
    let d = s.q - s.p;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return x.dist(s.p);
    }
    let t = ((x - s.p).dot(d) / len2).clamp(0.0, 1.0);
    x.dist(s.at(t))
}

fn on_segment(p: Point, q: Point, r: Point) -> bool {
    r.x >= p.x.min(q.x) && r.x <= p.x.max(q.x) && r.y >= p.y.min(q.y) && r.y <= p.y.max(q.y)
}

/// Closed segments share a point (exact orientation signs).
pub fn segments_intersect(a: &Segment, b: &Segment) -> bool {
    let d1 = orient(b.p, b.q, a.p);
    let d2 = orient(b.p, b.q, a.q);
    let d3 = orient(a.p, a.q, b.p);
    let d4 = orient(a.p, a.q, b.q);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(b.p, b.q, a.p))
        || (d2 == 0.0 && on_segment(b.p, b.q, a.q))
        || (d3 == 0.0 && on_segment(a.p, a.q, b.p))
        || (d4 == 0.0 && on_segment(a.p, a.q, b.q))
}

pub fn dist_segment_segment(a: &Segment, b: &Segment) -> f64 {
    if segments_intersect(a, b) {
        return 0.0;
    }
    dist_point_segment(a.p, b)
        .min(dist_point_segment(a.q, b))
        .min(dist_point_segment(b.p, a))
        .min(dist_point_segment(b.q, a))
}

/// Shoelace area; zero for degenerate hulls.
pub fn hull_area(h: &Hull) -> f64 {
    if h.rank != Rank::Polygon {
        return 0.0;
    }
    let v = &h.vertices;
    let twice: f64 = (0..v.len())
        .map(|i| v[i].cross(v[(i + 1) % v.len()]))
        .sum();
    0.5 * twice.abs()
}

/// Largest distance from the hull to any of its diameter segments
/// (pairs within a relative `EPS` of the maximum are all considered).
pub fn hull_beta_hat_abs(h: &Hull) -> f64 {
    if h.rank != Rank::Polygon {
        return 0.0;
    }
    let v = &h.vertices;
    let diam = h.diameter();
    let cutoff = diam - EPS * diam;
    let mut best = 0.0f64;
    for i in 0..v.len() {
        for j in (i + 1)..v.len() {
            if v[i].dist(v[j]) < cutoff {
                continue;
            }
            let s = Segment::new(v[i], v[j]);
            for &y in v {
                best = best.max(dist_point_segment(y, &s));
            }
        }
    }
    best
}

/// Flatness of a hull relative to its own diameter, normalized by the
/// diameter; lies in `[0, sqrt(3)/2]`.
pub fn hull_beta_hat(h: &Hull) -> f64 {
    let abs = hull_beta_hat_abs(h);
    if abs == 0.0 {
        return 0.0;
    }
    abs / h.diameter()
}

/// Parameter `t` of the orthogonal projection of `x` onto the line through
/// `s`, so that the foot point is `s.p + t (s.q - s.p)`.
pub fn project_onto_segment_line(x: Point, s: &Segment) -> Result<f64, GeomError> {
    let d = s.q - s.p;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return Err(GeomError::ProjectionUndefined);
    }
    Ok((x - s.p).dot(d) / len2)
}

/// Intersection of the line `anchor + t * direction` with a hull.
///
/// Returns `None` when the line misses the hull (beyond `tol`); the result may
/// be a degenerate segment when the line only touches it.
pub fn clip_line_to_hull(anchor: Point, direction: Point, h: &Hull, tol: f64) -> Option<Segment> {
    let v = &h.vertices;
    let unit = direction * (1.0 / direction.norm());
    let foot = |p: Point| anchor + unit * (p - anchor).dot(unit);
    match h.rank {
        Rank::Point => (unit.cross(v[0] - anchor).abs() <= tol).then(|| Segment::new(v[0], v[0])),
        Rank::Segment => {
            let sa = unit.cross(v[0] - anchor);
            let sb = unit.cross(v[1] - anchor);
            if sa.abs() <= tol && sb.abs() <= tol {
                Some(Segment::new(v[0], v[1]))
            } else if sa.abs() <= tol {
                Some(Segment::new(v[0], v[0]))
            } else if sb.abs() <= tol {
                Some(Segment::new(v[1], v[1]))
            } else if (sa > 0.0) != (sb > 0.0) {
                let x = v[0] + (v[1] - v[0]) * (sa / (sa - sb));
                Some(Segment::new(x, x))
            } else {
                None
            }
        }
        Rank::Polygon => {
            let interval = |slack: f64| -> Option<(f64, f64)> {
                let mut lo = f64::NEG_INFINITY;
                let mut hi = f64::INFINITY;
                for i in 0..v.len() {
                    let a = v[i];
                    let e = v[(i + 1) % v.len()] - a;
                    // inside when e x (anchor + t unit - a) >= -slack |e|
                    let c0 = e.cross(anchor - a) + slack * e.norm();
                    let c1 = e.cross(unit);
                    if c1 == 0.0 {
                        if c0 < 0.0 {
                            return None;
                        }
                    } else if c1 > 0.0 {
                        lo = lo.max(-c0 / c1);
                    } else {
                        hi = hi.min(-c0 / c1);
                    }
                }
                (lo <= hi).then_some((lo, hi))
            };
            // exact clip when the line crosses; a tangent line within `tol`
            // yields the touching point
            match interval(0.0) {
                Some((lo, hi)) => Some(Segment::new(
                    foot(anchor + unit * lo),
                    foot(anchor + unit * hi),
                )),
                None => interval(tol).map(|(lo, hi)| {
                    let m = foot(anchor + unit * (0.5 * (lo + hi)));
                    Segment::new(m, m)
                }),
            }
        }
    }
}

fn project_range(v: &[Point], axis: Point) -> (f64, f64) {
    v.iter()
        .map(|p| p.dot(axis))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
            (lo.min(x), hi.max(x))
        })
}

fn axes(v: &[Point]) -> Vec<Point> {
    match v.len() {
        0 | 1 => Vec::new(),
        2 => vec![(v[1] - v[0]).perp()],
        n => (0..n).map(|i| (v[(i + 1) % n] - v[i]).perp()).collect(),
    }
}

/// Separating-axis test between two closed convex sets given by their
/// vertex lists (1, 2 or at least 3 vertices). Touching counts.
pub fn convex_sets_intersect(a: &[Point], b: &[Point]) -> bool {
    let mut all_axes = vec![Point::new(1.0, 0.0), Point::new(0.0, 1.0)];
    all_axes.extend(axes(a));
    all_axes.extend(axes(b));
    all_axes.iter().all(|&axis| {
        let (alo, ahi) = project_range(a, axis);
        let (blo, bhi) = project_range(b, axis);
        !(ahi < blo || bhi < alo)
    })
}

/// Hull meets the closed axis-aligned box.
pub fn hull_meets_box(h: &Hull, b: &BBox) -> bool {
    let corners = [
        b.min,
        Point::new(b.max.x, b.min.y),
        b.max,
        Point::new(b.min.x, b.max.y),
    ];
    convex_sets_intersect(&h.vertices, &corners)
}

/// Euclidean distance between two hulls (zero when they meet).
pub fn hull_distance(a: &Hull, b: &Hull) -> f64 {
    if convex_sets_intersect(&a.vertices, &b.vertices) {
        return 0.0;
    }
    let pieces = |h: &Hull| -> Vec<Segment> {
        match h.rank {
            Rank::Point => vec![Segment::new(h.vertices[0], h.vertices[0])],
            _ => h.edges(),
        }
    };
    let pa = pieces(a);
    let pb = pieces(b);
    let mut best = f64::INFINITY;
    for s in &pa {
        for t in &pb {
            best = best.min(dist_segment_segment(s, t));
        }
    }
    best
}

/// Finite planar point set with duplicates removed.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
    hull: Hull,
    diameter: f64,
    duplicates_removed: usize,
}

impl PointSet {
    /// Drops exact duplicates, keeping first occurrences in input order.
    pub fn new(points: Vec<Point>) -> Result<PointSet, GeomError> {
        validate(&points)?;
        let mut sorted: Vec<(Point, usize)> =
            points.iter().copied().enumerate().map(|(i, p)| (p, i)).collect();
        sorted.sort_by(|a, b| a.0.lex_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut keep = vec![false; points.len()];
        for (k, &(p, i)) in sorted.iter().enumerate() {
            if k == 0 || sorted[k - 1].0 != p {
                keep[i] = true;
            }
        }
        let unique: Vec<Point> = points
            .iter()
            .zip(&keep)
            .filter_map(|(p, &k)| k.then_some(*p))
            .collect();
        let duplicates_removed = points.len() - unique.len();
        let hull = convex_hull(&unique)?;
        let diameter = hull.diameter();
        Ok(PointSet {
            points: unique,
            hull,
            diameter,
            duplicates_removed,
        })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn hull(&self) -> &Hull {
        &self.hull
    }

    /// Diameter `|E|`.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn bbox(&self) -> BBox {
        BBox::of(&self.points).unwrap()
    }

    pub fn duplicates_removed(&self) -> usize {
        self.duplicates_removed
    }

    /// Length scale for tolerances: the diameter, or 1 for a single point.
    pub fn scale(&self) -> f64 {
        if self.diameter > 0.0 {
            self.diameter
        } else {
            1.0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn unit_square() -> Vec<Point> {
        vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)]
    }

    #[test]
    fn hull_single_point() {
        let h = convex_hull(&[p(0.0, 0.0)]).unwrap();
        assert_eq!(h.rank(), Rank::Point);
        assert_eq!(h.vertices(), &[p(0.0, 0.0)]);
    }

    #[test]
    fn hull_collinear() {
        let h = convex_hull(&[p(0.0, 0.0), p(1.0, 0.0), p(0.5, 0.0)]).unwrap();
        assert_eq!(h.rank(), Rank::Segment);
        assert_eq!(h.vertices(), &[p(0.0, 0.0), p(1.0, 0.0)]);
    }

    #[test]
    fn hull_square_with_interior_point() {
        let mut pts = unit_square();
        pts.push(p(0.5, 0.5));
        let h = convex_hull(&pts).unwrap();
        assert_eq!(h.rank(), Rank::Polygon);
        let mut v = h.vertices().to_vec();
        v.sort_by(Point::lex_cmp);
        let mut expected = unit_square();
        expected.sort_by(Point::lex_cmp);
        assert_eq!(v, expected);
        // counterclockwise
        assert!(hull_area(&h) > 0.0);
        assert!(orient(v[0], h.vertices()[1], h.vertices()[2]) != 0.0);
    }

    #[test]
    fn hull_rejects_empty_and_nan() {
        assert_eq!(convex_hull(&[]), Err(GeomError::EmptyPointSet));
        assert_eq!(
            convex_hull(&[p(0.0, 0.0), p(f64::NAN, 1.0)]),
            Err(GeomError::NonFinite(1))
        );
        assert_eq!(GeomError::EmptyPointSet.to_string(), "empty point set");
    }

    #[test]
    fn diameter_examples() {
        let sq = convex_hull(&unit_square()).unwrap();
        let (a, b, d) = diameter_pair(&sq);
        assert_eq!((a, b), (p(0.0, 0.0), p(1.0, 1.0)));
        assert_eq!(d, 2f64.sqrt());

        let pt = convex_hull(&[p(3.0, 4.0)]).unwrap();
        assert_eq!(diameter_pair(&pt), (p(3.0, 4.0), p(3.0, 4.0), 0.0));

        let seg = convex_hull(&[p(2.0, 0.0), p(0.0, 0.0)]).unwrap();
        assert_eq!(diameter_pair(&seg), (p(0.0, 0.0), p(2.0, 0.0), 2.0));
    }

    #[test]
    fn width_examples() {
        let s = min_width_strip(&[p(0.0, 0.0), p(1.0, 1.0), p(2.0, 2.0)]).unwrap();
        assert_eq!(s.width, 0.0);
        assert_abs_diff_eq!(s.direction.cross(p(1.0, 1.0)).abs(), 0.0, epsilon = 1e-15);

        let s = min_width_strip(&unit_square()).unwrap();
        assert_abs_diff_eq!(s.width, 1.0, epsilon = 1e-12);
        for q in unit_square() {
            assert!(s.dist_to_center(q) <= 0.5 + 1e-12);
        }

        let tri = [p(0.0, 0.0), p(1.0, 0.0), p(0.5, 3f64.sqrt() / 2.0)];
        let s = min_width_strip(&tri).unwrap();
        assert_abs_diff_eq!(s.width, 3f64.sqrt() / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn point_segment_distance() {
        let s = Segment::new(p(-1.0, 0.0), p(1.0, 0.0));
        assert_eq!(dist_point_segment(p(0.0, 1.0), &s), 1.0);
        assert_eq!(dist_point_segment(p(1.0, 0.0), &s), 0.0);
        assert_eq!(dist_point_segment(p(2.0, 0.0), &s), 1.0);
    }

    #[test]
    fn areas() {
        assert_eq!(hull_area(&convex_hull(&unit_square()).unwrap()), 1.0);
        assert_eq!(hull_area(&convex_hull(&[p(0.0, 0.0), p(3.0, 1.0)]).unwrap()), 0.0);
        let tri = convex_hull(&[p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)]).unwrap();
        assert_eq!(hull_area(&tri), 0.5);
    }

    #[test]
    fn beta_hat_examples() {
        let seg = convex_hull(&[p(0.0, 0.0), p(1.0, 0.0)]).unwrap();
        assert_eq!(hull_beta_hat(&seg), 0.0);
        let sq = convex_hull(&unit_square()).unwrap();
        assert_abs_diff_eq!(hull_beta_hat(&sq), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(hull_beta_hat_abs(&sq), 0.5f64.sqrt(), epsilon = 1e-12);
        let tri =
            convex_hull(&[p(0.0, 0.0), p(1.0, 0.0), p(0.5, 3f64.sqrt() / 2.0)]).unwrap();
        assert_abs_diff_eq!(hull_beta_hat(&tri), 3f64.sqrt() / 2.0, epsilon = 1e-12);
        assert_eq!(hull_beta_hat(&convex_hull(&[p(1.0, 1.0)]).unwrap()), 0.0);
    }

    #[test]
    fn projection_parameters() {
        let s = Segment::new(p(0.0, 0.0), p(2.0, 0.0));
        assert_eq!(project_onto_segment_line(p(0.0, 0.0), &s).unwrap(), 0.0);
        assert_eq!(project_onto_segment_line(p(2.0, 0.0), &s).unwrap(), 1.0);
        assert_eq!(project_onto_segment_line(p(1.0, 5.0), &s).unwrap(), 0.5);
        let degenerate = Segment::new(p(1.0, 1.0), p(1.0, 1.0));
        assert_eq!(
            project_onto_segment_line(p(0.0, 0.0), &degenerate),
            Err(GeomError::ProjectionUndefined)
        );
    }

    #[test]
    fn clipping() {
        let sq = convex_hull(&unit_square()).unwrap();
        let c = clip_line_to_hull(p(0.0, 0.5), p(1.0, 0.0), &sq, 0.0).unwrap();
        assert_abs_diff_eq!(c.length(), 1.0, epsilon = 1e-12);
        assert!(clip_line_to_hull(p(0.0, 2.0), p(1.0, 0.0), &sq, 1e-9).is_none());
        let diag = clip_line_to_hull(p(0.0, 0.0), p(1.0, 1.0), &sq, 1e-12).unwrap();
        assert_abs_diff_eq!(diag.length(), 2f64.sqrt(), epsilon = 1e-9);

        let seg = convex_hull(&[p(0.0, 0.0), p(1.0, 0.0)]).unwrap();
        let on = clip_line_to_hull(p(-3.0, 0.0), p(1.0, 0.0), &seg, 1e-12).unwrap();
        assert_eq!(on.length(), 1.0);
        let cross = clip_line_to_hull(p(0.25, -1.0), p(0.0, 1.0), &seg, 1e-12).unwrap();
        assert!(cross.is_degenerate());
        assert_abs_diff_eq!(cross.p.x, 0.25, epsilon = 1e-15);
    }

    #[test]
    fn box_and_hull_distance() {
        let tri = convex_hull(&[p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)]).unwrap();
        let touching = BBox {
            min: p(1.0, 0.0),
            max: p(2.0, 1.0),
        };
        assert!(hull_meets_box(&tri, &touching));
        let apart = BBox {
            min: p(0.6, 0.6),
            max: p(2.0, 2.0),
        };
        assert!(!hull_meets_box(&tri, &apart));

        let far = convex_hull(&[p(3.0, 0.0), p(4.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(hull_distance(&tri, &far), 2.0, epsilon = 1e-15);
        let pt = convex_hull(&[p(0.2, 0.2)]).unwrap();
        assert_eq!(hull_distance(&tri, &pt), 0.0);
    }

    #[test]
    fn segment_distances() {
        let a = Segment::new(p(0.0, 0.0), p(1.0, 0.0));
        let b = Segment::new(p(1.0, 0.0), p(1.0, 1.0));
        assert_eq!(dist_segment_segment(&a, &b), 0.0);
        let c = Segment::new(p(0.0, 1.0), p(1.0, 1.0));
        assert_eq!(dist_segment_segment(&a, &c), 1.0);
        let x = Segment::new(p(0.5, -1.0), p(0.5, 1.0));
        assert_eq!(dist_segment_segment(&a, &x), 0.0);
    }

    #[test]
    fn point_set_dedups() {
        let e = PointSet::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(0.0, 0.0)]).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.duplicates_removed(), 1);
        assert_eq!(e.diameter(), 1.0);
        assert_eq!(e.points(), &[p(0.0, 0.0), p(1.0, 0.0)]);
    }
}
