//! Assembly of the candidate curve from a labeled hull tree.
//!
//! Good leaves contribute their boundary plus their chord, every split node
//! contributes its bridge. Bad hulls only ever appear in intermediate
//! snapshots, drawn by their boundary.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Point, PointSet, Rank, Segment};
use crate::hull_tree::{HullNode, HullTree, Label};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("node {0:?} is not labeled good")]
    NotGood(String),
    #[error("classification incomplete")]
    ClassificationIncomplete,
}

/// Where a curve piece came from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "sigma", rename_all = "lowercase")]
pub enum Provenance {
    Boundary(String),
    Chord(String),
    Bridge(String),
    Point(String),
    /// Boundary of a bad hull, only in snapshots.
    Pending(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSegment {
    pub segment: Segment,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub point: Point,
    pub provenance: Provenance,
}

/// A finite union of segments and isolated points.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Curve {
    pub segments: Vec<CurveSegment>,
    pub isolated_points: Vec<CurvePoint>,
}

impl Curve {
    pub fn is_empty(&self) -> bool {
        self.segments.is_empty() && self.isolated_points.is_empty()
    }

    /// Adds a piece; zero-length segments become isolated points.
    pub fn push(&mut self, segment: Segment, provenance: Provenance) {
        if segment.is_degenerate() {
            self.isolated_points.push(CurvePoint {
                point: segment.p,
                provenance,
            });
        } else {
            self.segments.push(CurveSegment {
                segment,
                provenance,
            });
        }
    }

    pub fn plain_segments(&self) -> Vec<Segment> {
        self.segments.iter().map(|s| s.segment).collect()
    }

    pub fn points(&self) -> Vec<Point> {
        self.isolated_points.iter().map(|p| p.point).collect()
    }

    /// Sum of listed segment lengths, overlaps counted repeatedly.
    pub fn listed_length(&self) -> f64 {
        self.segments.iter().map(|s| s.segment.length()).sum()
    }

    /// Every segment endpoint and isolated point.
    pub fn vertices(&self) -> Vec<Point> {
        let mut out: Vec<Point> = self
            .segments
            .iter()
            .flat_map(|s| [s.segment.p, s.segment.q])
            .collect();
        out.extend(self.points());
        out
    }
}

/// Boundary and chord of a good hull.
pub fn good_hull_piece(node: &HullNode) -> Result<Curve, CurveError> {
    if node.label != Label::Good {
        return Err(CurveError::NotGood(node.sigma.clone()));
    }
    let mut c = Curve::default();
    match node.hull.rank() {
        Rank::Point => c.push(
            Segment::new(node.hull.vertices()[0], node.hull.vertices()[0]),
            Provenance::Point(node.sigma.clone()),
        ),
        _ => {
            for e in node.hull.edges() {
                c.push(e, Provenance::Boundary(node.sigma.clone()));
            }
        }
    }
    if let Some(chord) = node.chord {
        if !chord.is_degenerate() {
            c.push(chord, Provenance::Chord(node.sigma.clone()));
        }
    }
    Ok(c)
}

/// Good and bad node ids and bridges of one generation.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub depth: usize,
    pub good: Vec<usize>,
    pub bad: Vec<usize>,
    pub bridges: Vec<Segment>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AssemblyTrace {
    /// Generation count `N`.
    pub generations: usize,
    pub records: Vec<GenerationRecord>,
    /// `Gamma_j` for each `j`, when requested.
    pub snapshots: Vec<Curve>,
}

impl AssemblyTrace {
    pub fn last_bad_is_empty(&self) -> bool {
        self.records.last().map_or(true, |r| r.bad.is_empty())
    }
}

fn extend(into: &mut Curve, from: Curve) {
    into.segments.extend(from.segments);
    into.isolated_points.extend(from.isolated_points);
}

fn bridge_piece(node: &HullNode) -> Option<CurveSegment> {
    let b = node.bridge?;
    (b.length > 0.0).then(|| CurveSegment {
        segment: b.segment(),
        provenance: Provenance::Bridge(node.sigma.clone()),
    })
}

/// `Gamma*`: all good-leaf pieces plus every positive-length bridge, in node
/// order.
pub fn assemble(tree: &HullTree, snapshots: bool) -> Result<(Curve, AssemblyTrace), CurveError> {
    if !tree.is_fully_labeled() {
        return Err(CurveError::ClassificationIncomplete);
    }
    let mut curve = Curve::default();
    for node in tree.nodes() {
        match node.label {
            Label::Good => extend(&mut curve, good_hull_piece(node)?),
            Label::Bad => {
                if let Some(b) = bridge_piece(node) {
                    curve.segments.push(b);
                }
            }
            Label::Unlabeled => return Err(CurveError::ClassificationIncomplete),
        }
    }

    let n = tree.generations();
    let mut trace = AssemblyTrace {
        generations: n,
        ..Default::default()
    };
    for depth in 0..=n {
        let mut rec = GenerationRecord {
            depth,
            ..Default::default()
        };
        for node in tree.generation(depth) {
            match node.label {
                Label::Good => rec.good.push(node.id),
                _ => {
                    rec.bad.push(node.id);
                    if let Some(b) = node.bridge {
                        rec.bridges.push(b.segment());
                    }
                }
            }
        }
        trace.records.push(rec);
    }

    if snapshots {
        for j in 0..=n {
            let mut snap = Curve::default();
            for node in tree.nodes().iter().filter(|nd| nd.depth <= j) {
                match node.label {
                    Label::Good => extend(&mut snap, good_hull_piece(node)?),
                    _ if node.depth == j => {
                        for e in node.hull.edges() {
                            snap.push(e, Provenance::Pending(node.sigma.clone()));
                        }
                    }
                    _ => {
                        if let Some(b) = bridge_piece(node) {
                            snap.segments.push(b);
                        }
                    }
                }
            }
            trace.snapshots.push(snap);
        }
    }
    Ok((curve, trace))
}

/// Upper bound on the generation count: `M (ceil(log2(3|E|/r)) + 1)`.
pub fn termination_bound(e: &PointSet, r: f64, m: u32) -> u64 {
    let ratio = 3.0 * e.diameter() / r;
    let steps = if ratio > 1.0 {
        ratio.log2().ceil() as u64
    } else {
        0
    };
    m as u64 * (steps + 1)
}
