//! Dyadic cubes, beta numbers and multiscale square sums.
//!
//! Cubes live on the absolute grid `[k 2^-n, (k+1) 2^-n) x [j 2^-n, (j+1) 2^-n)`.
//! `|Q|` is always the diameter `sqrt(2) side(Q)`; `3Q` is the closed
//! concentric square of side `3 side(Q)`.
//!
//! Sums are evaluated scale by scale over every cube whose region meets `E`.
//! Scales finer than the point where `|region| < r` contribute nothing and
//! are skipped; coarse scales are summed until an analytic bound on the rest
//! of the dyadic tower drops below `eps_top`.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::SQRT_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{min_width_strip, BBox, Point, PointSet, StripFit};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MultiscaleError {
    #[error("r must be positive (use classical_jones_sum for r = 0)")]
    NonPositiveRadius,
    #[error("eps_top must be positive and finite")]
    InvalidTolerance,
}

/// Hard cap on the number of scales a single sum may visit.
const MAX_SCALES: usize = 1100;

/// Side length `2^-n`.
pub fn side_at(n: i32) -> f64 {
    2f64.powi(-n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DyadicCube {
    /// Scale exponent; side is `2^-n`.
    pub n: i32,
    pub k: i64,
    pub j: i64,
}

impl DyadicCube {
    pub const fn new(n: i32, k: i64, j: i64) -> Self {
        Self { n, k, j }
    }

    /// The scale-`n` cube containing `p`.
    pub fn containing(p: Point, n: i32) -> Self {
        let s = side_at(n);
        Self::new(n, (p.x / s).floor() as i64, (p.y / s).floor() as i64)
    }

    pub fn side(&self) -> f64 {
        side_at(self.n)
    }

    /// Diameter `|Q|`.
    pub fn diam(&self) -> f64 {
        SQRT_2 * self.side()
    }

    /// Half-open membership.
    pub fn contains(&self, p: Point) -> bool {
        let s = self.side();
        (p.x / s).floor() as i64 == self.k && (p.y / s).floor() as i64 == self.j
    }

    pub fn closure(&self) -> BBox {
        let s = self.side();
        BBox {
            min: Point::new(self.k as f64 * s, self.j as f64 * s),
            max: Point::new((self.k + 1) as f64 * s, (self.j + 1) as f64 * s),
        }
    }

    /// Closed `3Q`.
    pub fn triple(&self) -> BBox {
        let s = self.side();
        BBox {
            min: Point::new((self.k - 1) as f64 * s, (self.j - 1) as f64 * s),
            max: Point::new((self.k + 2) as f64 * s, (self.j + 2) as f64 * s),
        }
    }

    pub fn region_contains(&self, region: Region, p: Point) -> bool {
        match region {
            Region::Cube => self.contains(p),
            Region::Triple => self.triple().contains_closed(p),
        }
    }

    pub fn region_diam(&self, region: Region) -> f64 {
        region.factor() * self.diam()
    }
}

/// Which set the beta number is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Region {
    #[serde(rename = "q")]
    Cube,
    #[serde(rename = "3q")]
    Triple,
}

impl Region {
    /// Ratio of the region's diameter to `|Q|`.
    pub fn factor(self) -> f64 {
        match self {
            Region::Cube => 1.0,
            Region::Triple => 3.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Region::Cube => "q",
            Region::Triple => "3q",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaResult {
    pub cube: DyadicCube,
    pub region: Region,
    /// Number of points of `E` inside the region.
    pub count: usize,
    /// Half-width of the thinnest strip containing `E ∩ region`.
    pub r_value: f64,
    /// `r_value / |region|`.
    pub beta: f64,
    pub fit: Option<StripFit>,
}

impl BetaResult {
    fn from_points(cube: DyadicCube, region: Region, pts: &[Point]) -> Self {
        if pts.is_empty() {
            return BetaResult {
                cube,
                region,
                count: 0,
                r_value: 0.0,
                beta: 0.0,
                fit: None,
            };
        }
        let fit = min_width_strip(pts).expect("nonempty finite points");
        let r_value = fit.half_width();
        BetaResult {
            cube,
            region,
            count: pts.len(),
            r_value,
            beta: r_value / cube.region_diam(region),
            fit: Some(fit),
        }
    }

    /// `max{beta - r/|region|, 0}^2 |Q|`.
    pub fn square_term(&self, r: f64) -> f64 {
        let excess = (self.beta - r / self.cube.region_diam(self.region)).max(0.0);
        excess * excess * self.cube.diam()
    }
}

/// Beta number of `E` over `Q` or `3Q`, by a full scan of `E`.
pub fn beta_of_cube(e: &PointSet, q: DyadicCube, region: Region) -> BetaResult {
    let pts: Vec<Point> = e
        .points()
        .iter()
        .copied()
        .filter(|&p| q.region_contains(region, p))
        .collect();
    BetaResult::from_points(q, region, &pts)
}

/// Scale-`n` cubes `Q` with `E ∩ Q` nonempty, sorted and deduplicated.
pub fn enumerate_cubes(e: &PointSet, n: i32) -> Vec<DyadicCube> {
    let set: BTreeSet<DyadicCube> = e
        .points()
        .iter()
        .map(|&p| DyadicCube::containing(p, n))
        .collect();
    set.into_iter().collect()
}

/// Point buckets for one scale, for fast region queries.
struct ScaleIndex {
    n: i32,
    cells: BTreeMap<(i64, i64), Vec<Point>>,
}

impl ScaleIndex {
    fn new(e: &PointSet, n: i32) -> Self {
        let mut cells: BTreeMap<(i64, i64), Vec<Point>> = BTreeMap::new();
        for &p in e.points() {
            let c = DyadicCube::containing(p, n);
            cells.entry((c.k, c.j)).or_default().push(p);
        }
        Self { n, cells }
    }

    /// Cubes whose region meets `E`.
    fn cubes(&self, region: Region) -> Vec<DyadicCube> {
        match region {
            Region::Cube => self
                .cells
                .keys()
                .map(|&(k, j)| DyadicCube::new(self.n, k, j))
                .collect(),
            Region::Triple => {
                let s = side_at(self.n);
                let mut set = BTreeSet::new();
                for pts in self.cells.values() {
                    for p in pts {
                        let (u, v) = (p.x / s, p.y / s);
                        let (k0, k1) = ((u - 2.0).ceil() as i64, (u + 1.0).floor() as i64);
                        let (j0, j1) = ((v - 2.0).ceil() as i64, (v + 1.0).floor() as i64);
                        for k in k0..=k1 {
                            for j in j0..=j1 {
                                set.insert(DyadicCube::new(self.n, k, j));
                            }
                        }
                    }
                }
                set.into_iter().collect()
            }
        }
    }

    fn region_points(&self, q: DyadicCube, region: Region) -> Vec<Point> {
        match region {
            Region::Cube => self.cells.get(&(q.k, q.j)).cloned().unwrap_or_default(),
            Region::Triple => {
                let mut out = Vec::new();
                for k in (q.k - 1)..=(q.k + 2) {
                    for j in (q.j - 1)..=(q.j + 2) {
                        if let Some(pts) = self.cells.get(&(k, j)) {
                            out.extend(pts.iter().copied().filter(|&p| q.region_contains(region, p)));
                        }
                    }
                }
                out
            }
        }
    }
}

/// One cube's contribution to a sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubeTerm {
    pub beta: BetaResult,
    pub term: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleSum {
    pub n: i32,
    pub partial: f64,
    pub cubes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumReport {
    pub r: f64,
    pub variant: Region,
    pub total: f64,
    /// Coarse to fine.
    pub per_scale: Vec<ScaleSum>,
    pub n_top: i32,
    pub n_bottom: i32,
    /// Bound on everything above `n_top` that was not summed.
    pub upward_truncation_bound: f64,
    #[serde(skip)]
    pub terms: Vec<CubeTerm>,
}

/// Finest scale whose regions can still carry a nonzero term: the largest
/// `n` with `|region| >= r`. Any omitted cube has `r_E <= |region| < r`.
pub fn finest_scale(r: f64, region: Region) -> i32 {
    let target = region.factor() * SQRT_2 / r;
    let mut n = target.log2().floor().clamp(-1074.0, 1074.0) as i32;
    while region.factor() * SQRT_2 * side_at(n) < r {
        n -= 1;
    }
    while region.factor() * SQRT_2 * side_at(n + 1) >= r {
        n += 1;
    }
    n
}

/// Largest `n` with `side(n) >= extent` (0 for a degenerate extent).
fn enclosing_scale(extent: f64) -> i32 {
    if extent <= 0.0 {
        return 0;
    }
    let mut n = (-extent.log2().ceil()) as i32;
    while side_at(n) < extent {
        n -= 1;
    }
    while side_at(n + 1) >= extent {
        n += 1;
    }
    n
}

struct ScaleOutcome {
    partial: f64,
    terms: Vec<CubeTerm>,
    max_count: usize,
}

fn sum_scale(e: &PointSet, n: i32, r: f64, region: Region) -> ScaleOutcome {
    let index = ScaleIndex::new(e, n);
    let cubes = index.cubes(region);
    let terms: Vec<CubeTerm> = cubes
        .par_iter()
        .map(|&q| {
            let beta = BetaResult::from_points(q, region, &index.region_points(q, region));
            CubeTerm {
                term: beta.square_term(r),
                beta,
            }
        })
        .collect();
    let mut partial = 0.0;
    let mut max_count = 0;
    for t in &terms {
        partial += t.term;
        max_count = max_count.max(t.beta.count);
    }
    ScaleOutcome {
        partial,
        terms,
        max_count,
    }
}

/// Bound on all terms at scales strictly coarser than `n`, assuming
/// `side(n) >= extent(E)`: at most 2 (resp. 4) cubes per axis meet `E`
/// through `Q` (resp. `3Q`), and each term is at most
/// `excess^2 / |region|^2 * |Q|`, which is geometric in the scale.
fn upward_tail(n: i32, excess: f64, region: Region) -> f64 {
    let per_axis: f64 = match region {
        Region::Cube => 2.0,
        Region::Triple => 4.0,
    };
    let c = region.factor();
    per_axis * per_axis * excess * excess / (SQRT_2 * c * c * side_at(n))
}

fn sum_over_scales(
    e: &PointSet,
    r: f64,
    region: Region,
    eps_top: f64,
    finest: Option<i32>,
) -> SumReport {
    let extent = e.bbox().extent();
    let half_width = min_width_strip(e.points()).expect("nonempty").half_width();
    let excess = (half_width - r).max(0.0);

    let enclosing = enclosing_scale(extent);
    let mut n_top = finest.map_or(enclosing, |f| f.min(enclosing));
    let mut guard = 0;
    while upward_tail(n_top, excess, region) > eps_top && guard < MAX_SCALES {
        n_top -= 1;
        guard += 1;
    }

    let mut per_scale = Vec::new();
    let mut terms = Vec::new();
    let mut total = 0.0;
    let mut n = n_top;
    loop {
        let out = sum_scale(e, n, r, region);
        per_scale.push(ScaleSum {
            n,
            partial: out.partial,
            cubes: out.terms.len(),
        });
        total += out.partial;
        terms.extend(out.terms);
        // With at most two points per region every finer region is a subset
        // and therefore collinear: all finer terms vanish.
        let exhausted = out.max_count <= 2 && n >= enclosing;
        if finest.map_or(false, |f| n >= f) || exhausted || per_scale.len() >= MAX_SCALES {
            break;
        }
        n += 1;
    }

    SumReport {
        r,
        variant: region,
        total,
        per_scale,
        n_top,
        n_bottom: n,
        upward_truncation_bound: upward_tail(n_top, excess, region),
        terms,
    }
}

/// Default `eps_top`: `1e-12 |E|`, floored away from zero.
pub fn default_eps_top(e: &PointSet) -> f64 {
    (1e-12 * e.diameter()).max(1e-300)
}

/// `sum_Q max{beta_E(R) - r/|R|, 0}^2 |Q|` over all dyadic cubes, with `R`
/// either `Q` or `3Q`.
pub fn truncated_square_sum(
    e: &PointSet,
    r: f64,
    variant: Region,
    eps_top: f64,
) -> Result<SumReport, MultiscaleError> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(MultiscaleError::NonPositiveRadius);
    }
    if !(eps_top > 0.0) || !eps_top.is_finite() {
        return Err(MultiscaleError::InvalidTolerance);
    }
    Ok(sum_over_scales(
        e,
        r,
        variant,
        eps_top,
        Some(finest_scale(r, variant)),
    ))
}

/// Jones' sum `sum_Q beta_E(3Q)^2 |Q|`.
pub fn classical_jones_sum(e: &PointSet, eps_top: f64) -> Result<SumReport, MultiscaleError> {
    if !(eps_top > 0.0) || !eps_top.is_finite() {
        return Err(MultiscaleError::InvalidTolerance);
    }
    Ok(sum_over_scales(e, 0.0, Region::Triple, eps_top, None))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    /// `|E| - 2r + sum`.
    pub value: f64,
    pub diameter: f64,
    pub r: f64,
    /// `|E| < 2r`: the optimal curve is a single point.
    pub point_minimizer: bool,
    pub sum: SumReport,
}

pub fn lower_bound(
    e: &PointSet,
    r: f64,
    variant: Region,
    eps_top: f64,
) -> Result<LowerBound, MultiscaleError> {
    let sum = truncated_square_sum(e, r, variant, eps_top)?;
    let diameter = e.diameter();
    Ok(LowerBound {
        value: diameter - 2.0 * r + sum.total,
        diameter,
        r,
        point_minimizer: diameter < 2.0 * r,
        sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pts(v: &[(f64, f64)]) -> PointSet {
        PointSet::new(v.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
    }

    fn centered_square() -> PointSet {
        pts(&[(0.5, 0.5), (1.5, 0.5), (1.5, 1.5), (0.5, 1.5)])
    }

    #[test]
    fn cube_geometry() {
        let q = DyadicCube::new(1, 1, 1);
        assert_eq!(q.side(), 0.5);
        assert_eq!(q.diam(), 0.5 * SQRT_2);
        assert!(q.contains(Point::new(0.5, 0.5)));
        assert!(!q.contains(Point::new(1.0, 0.75)));
        assert!(q.region_contains(Region::Triple, Point::new(1.5, 0.0)));
        assert_eq!(q.region_diam(Region::Triple), 1.5 * SQRT_2);
        let big = DyadicCube::new(-2, -1, 0);
        assert_eq!(big.side(), 4.0);
        assert!(big.contains(Point::new(-0.1, 3.9)));
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(
            enumerate_cubes(&pts(&[(0.1, 0.1)]), 0),
            vec![DyadicCube::new(0, 0, 0)]
        );
        assert_eq!(
            enumerate_cubes(&pts(&[(0.1, 0.1), (1.5, 0.2)]), 0),
            vec![DyadicCube::new(0, 0, 0), DyadicCube::new(0, 1, 0)]
        );
        assert_eq!(
            enumerate_cubes(&pts(&[(0.5, 0.5)]), 1),
            vec![DyadicCube::new(1, 1, 1)]
        );
    }

    #[test]
    fn beta_examples() {
        let collinear = pts(&[(0.1, 0.1), (0.2, 0.2), (0.7, 0.7)]);
        let b = beta_of_cube(&collinear, DyadicCube::new(0, 0, 0), Region::Cube);
        assert_eq!(b.count, 3);
        assert_eq!(b.beta, 0.0);

        let b = beta_of_cube(&collinear, DyadicCube::new(0, 5, 5), Region::Cube);
        assert_eq!((b.count, b.beta, b.r_value), (0, 0.0, 0.0));

        let b = beta_of_cube(&centered_square(), DyadicCube::new(-1, 0, 0), Region::Cube);
        assert_eq!(b.count, 4);
        assert_abs_diff_eq!(b.r_value, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(b.beta, 0.5 / (2.0 * SQRT_2), epsilon = 1e-12);
        assert_abs_diff_eq!(b.beta, 0.17677669529663687, epsilon = 1e-12);
    }

    #[test]
    fn square_term_of_dominating_cube() {
        let b = beta_of_cube(&centered_square(), DyadicCube::new(-1, 0, 0), Region::Cube);
        assert_abs_diff_eq!(b.square_term(0.3), 0.04 / (2.0 * SQRT_2), epsilon = 1e-12);
        assert_abs_diff_eq!(b.square_term(0.3), 0.014142135623730951, epsilon = 1e-12);

        let report = truncated_square_sum(&centered_square(), 0.3, Region::Cube, 1e-15).unwrap();
        let found = report
            .terms
            .iter()
            .find(|t| t.beta.cube == DyadicCube::new(-1, 0, 0))
            .unwrap();
        assert_abs_diff_eq!(found.term, 0.014142135623730951, epsilon = 1e-12);
        assert!(report.total >= found.term);
    }

    #[test]
    fn truncated_sum_zero_cases() {
        let line: Vec<(f64, f64)> = (0..20).map(|i| (i as f64 * 0.05, 0.3)).collect();
        let line = pts(&line);
        for r in [0.001, 0.1, 5.0] {
            for v in [Region::Cube, Region::Triple] {
                assert_eq!(truncated_square_sum(&line, r, v, 1e-12).unwrap().total, 0.0);
            }
        }
        let sq = centered_square();
        let big_r = sq.diameter();
        assert_eq!(truncated_square_sum(&sq, big_r, Region::Cube, 1e-12).unwrap().total, 0.0);
    }

    #[test]
    fn truncated_sum_rejects_zero_radius() {
        let err = truncated_square_sum(&centered_square(), 0.0, Region::Cube, 1e-12).unwrap_err();
        assert_eq!(err, MultiscaleError::NonPositiveRadius);
        assert!(err.to_string().contains("classical_jones_sum"));
    }

    #[test]
    fn classical_zero_cases() {
        let two = pts(&[(0.0, 0.0), (1.0, 0.3)]);
        assert_eq!(classical_jones_sum(&two, 1e-12).unwrap().total, 0.0);
        let line = pts(&[(0.0, 0.0), (0.25, 0.25), (1.0, 1.0), (3.0, 3.0)]);
        assert_eq!(classical_jones_sum(&line, 1e-12).unwrap().total, 0.0);
    }

    #[test]
    fn lower_bound_examples() {
        let two = pts(&[(0.0, 0.0), (1.0, 0.0)]);
        let lb = lower_bound(&two, 0.2, Region::Cube, 1e-12).unwrap();
        assert_eq!(lb.value, 0.6);
        assert!(!lb.point_minimizer);

        let single = pts(&[(0.3, 0.3)]);
        let lb = lower_bound(&single, 0.25, Region::Cube, 1e-12).unwrap();
        assert_eq!(lb.value, -0.5);
        assert!(lb.point_minimizer);

        let l = 2.0;
        let line = pts(&[(0.0, 1.0), (0.7, 1.0), (l, 1.0)]);
        let lb = lower_bound(&line, l / 4.0, Region::Cube, 1e-12).unwrap();
        assert_eq!(lb.value, l / 2.0);
    }

    #[test]
    fn finest_scale_brackets_radius() {
        for r in [1e-3, 0.01, 0.2, 0.3, 1.0, 7.5, 1e4] {
            for v in [Region::Cube, Region::Triple] {
                let n = finest_scale(r, v);
                assert!(v.factor() * SQRT_2 * side_at(n) >= r);
                assert!(v.factor() * SQRT_2 * side_at(n + 1) < r);
            }
        }
    }
}
