//! Discrete closed curves in the half-plane and their geometric functionals:
//! Euclidean/geodesic curvature, weighted length, enclosed Gauss area,
//! Gauss-Bonnet residual, and position relative to the cylinder.
//!
//! Orientation convention: closed curves are stored counterclockwise in the
//! (r, x) plane, so the enclosed region lies to the left of travel and the
//! enclosed Gauss area is positive. Euclidean curvature is the standard
//! signed curvature for that orientation (+1/R on a counterclockwise circle)
//! and the geodesic curvature is taken against the inward normal
//! (-t_x, t_r), which makes the Gauss-Bonnet identity
//! GA + closed-integral(k_g ds) = 2 pi hold with positive area.
//!
//! Curves flagged `symmetric` keep node 0 on the r-axis with an even node
//! count and node i mirroring node N - i; `symmetrize` folds across the axis
//! under that pairing to kill reflection drift during a flow.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{self, Dimension, Point};

const DEGENERATE_LENGTH: f64 = 1e-12;

/// Position of a curve relative to the cylinder r = r_n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurvePosition {
    /// Entirely in {r < r_n}.
    Left,
    /// Entirely in {r > r_n}.
    Right,
    /// Meets the line r = r_n.
    Crossing,
}

impl std::fmt::Display for CurvePosition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CurvePosition::Left => write!(f, "Left"),
            CurvePosition::Right => write!(f, "Right"),
            CurvePosition::Crossing => write!(f, "Crossing"),
        }
    }
}

/// Ordered polyline of points in {r > 0}; closed curves wrap node N-1 to 0.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscreteCurve {
    nodes: Vec<Point>,
    closed: bool,
    symmetric: bool,
}

/// Per-node unit Euclidean tangents and the unwrapped tangent angle.
#[derive(Debug, Clone)]
pub struct TangentFrame {
    /// Unit tangent components (t_r, t_x).
    pub tangents: Vec<(f64, f64)>,
    /// theta = atan2(t_x, t_r), made continuous along the curve.
    pub angles: Vec<f64>,
}

impl DiscreteCurve {
    pub fn closed(nodes: Vec<Point>) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::InvalidArgument(format!(
                "closed curve needs >= 3 nodes, got {}",
                nodes.len()
            )));
        }
        Self::validate(&nodes)?;
        Ok(DiscreteCurve { nodes, closed: true, symmetric: false })
    }

    pub fn open(nodes: Vec<Point>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidArgument("open curve needs >= 2 nodes".into()));
        }
        Self::validate(&nodes)?;
        Ok(DiscreteCurve { nodes, closed: false, symmetric: false })
    }

    fn validate(nodes: &[Point]) -> Result<()> {
        for p in nodes {
            if !(p.r > 0.0) || !p.r.is_finite() || !p.x.is_finite() {
                return Err(Error::Domain { r: p.r });
            }
        }
        Ok(())
    }

    pub fn with_symmetry(mut self, symmetric: bool) -> Self {
        self.symmetric = symmetric;
        self
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn nodes_mut(&mut self) -> &mut [Point] {
        &mut self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn min_r(&self) -> f64 {
        self.nodes.iter().map(|p| p.r).fold(f64::INFINITY, f64::min)
    }

    pub fn max_r(&self) -> f64 {
        self.nodes.iter().map(|p| p.r).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Reverse traversal direction (flips orientation-sensitive functionals).
    pub fn reversed(&self) -> Self {
        let mut nodes = self.nodes.clone();
        nodes.reverse();
        DiscreteCurve { nodes, closed: self.closed, symmetric: self.symmetric }
    }

    /// Shoelace area in the (r, x) plane; positive for counterclockwise.
    pub fn signed_euclidean_area(&self) -> f64 {
        let n = self.nodes.len();
        let mut acc = 0.0;
        for i in 0..n {
            let p = self.nodes[i];
            let q = self.nodes[(i + 1) % n];
            acc += p.r * q.x - q.r * p.x;
        }
        0.5 * acc
    }

    /// Total Euclidean length of the polyline (including the closing edge).
    pub fn euclidean_length(&self) -> f64 {
        let n = self.nodes.len();
        let last = if self.closed { n } else { n - 1 };
        (0..last)
            .map(|i| {
                let p = self.nodes[i];
                let q = self.nodes[(i + 1) % n];
                (q.r - p.r).hypot(q.x - p.x)
            })
            .sum()
    }

    /// Resample to `target` nodes equally spaced in Euclidean arclength,
    /// anchored at node 0. Preserves orientation and the symmetry flag
    /// (folding across the axis afterwards when flagged).
    ///
    /// Smooth runs of a closed polyline are interpolated with Catmull-Rom
    /// segments so resampling does not systematically cut corners off
    /// well-resolved curves; segments adjacent to a sharp vertex stay on the
    /// straight chords.
    pub fn resample(&self, target: usize) -> Result<Self> {
        if target < 16 {
            return Err(Error::InvalidArgument(format!("resample target {target} < 16")));
        }
        let n = self.nodes.len();
        let seg_count = if self.closed { n } else { n - 1 };
        let mut cum = Vec::with_capacity(seg_count + 1);
        cum.push(0.0);
        for i in 0..seg_count {
            let p = self.nodes[i];
            let q = self.nodes[(i + 1) % n];
            cum.push(cum[i] + (q.r - p.r).hypot(q.x - p.x));
        }
        let total = *cum.last().unwrap();
        if total < DEGENERATE_LENGTH {
            return Err(Error::DegenerateCurve { length: total });
        }

        let smooth = self.segment_smoothness(&cum);

        let spacing = if self.closed {
            total / target as f64
        } else {
            total / (target as f64 - 1.0)
        };
        let mut out = Vec::with_capacity(target);
        let mut seg = 0usize;
        for j in 0..target {
            let s = (j as f64 * spacing).min(total);
            while seg + 1 < cum.len() - 1 && cum[seg + 1] < s {
                seg += 1;
            }
            let p = self.nodes[seg];
            let q = self.nodes[(seg + 1) % n];
            let den = cum[seg + 1] - cum[seg];
            let t = if den > 0.0 { ((s - cum[seg]) / den).clamp(0.0, 1.0) } else { 0.0 };
            if smooth[seg] {
                let p0 = self.nodes[(seg + n - 1) % n];
                let p3 = self.nodes[(seg + 2) % n];
                out.push(catmull_rom(p0, p, q, p3, t));
            } else {
                out.push(Point { r: p.r + t * (q.r - p.r), x: p.x + t * (q.x - p.x) });
            }
        }
        let mut res = DiscreteCurve { nodes: out, closed: self.closed, symmetric: self.symmetric };
        Self::validate(&res.nodes)?;
        if res.symmetric {
            res.symmetrize();
        }
        Ok(res)
    }

    /// Per-segment flag: true when the segment and its neighbors form a
    /// smooth, near-uniform run where spline interpolation is faithful.
    fn segment_smoothness(&self, cum: &[f64]) -> Vec<bool> {
        const MAX_TURN: f64 = 0.35; // radians
        const MAX_LEN_RATIO: f64 = 1.5;
        let n = self.nodes.len();
        let seg_count = cum.len() - 1;
        if !self.closed || n < 8 {
            return vec![false; seg_count];
        }
        let turn = |i: usize| -> f64 {
            // turn angle at node i between incoming and outgoing edges
            let a = self.nodes[(i + n - 1) % n];
            let b = self.nodes[i];
            let c = self.nodes[(i + 1) % n];
            let (ur, ux) = (b.r - a.r, b.x - a.x);
            let (vr, vx) = (c.r - b.r, c.x - b.x);
            let dot = ur * vr + ux * vx;
            let cross = ur * vx - ux * vr;
            cross.atan2(dot).abs()
        };
        (0..seg_count)
            .map(|i| {
                let len = cum[i + 1] - cum[i];
                let prev_len = cum[if i == 0 { seg_count } else { i }] - cum[if i == 0 { seg_count - 1 } else { i - 1 }];
                let next_len = cum[(i + 1) % seg_count + 1] - cum[(i + 1) % seg_count];
                let uniform = len > 0.0
                    && prev_len / len < MAX_LEN_RATIO
                    && len / prev_len.max(1e-300) < MAX_LEN_RATIO
                    && next_len / len < MAX_LEN_RATIO
                    && len / next_len.max(1e-300) < MAX_LEN_RATIO;
                uniform && turn(i) < MAX_TURN && turn((i + 1) % n) < MAX_TURN
            })
            .collect()
    }

    /// Fold across the r-axis under the node pairing i <-> N-i. Requires the
    /// symmetric-curve layout (node 0 on the axis, even node count); silently
    /// does nothing otherwise.
    pub fn symmetrize(&mut self) {
        let n = self.nodes.len();
        if !self.closed || n % 2 != 0 {
            return;
        }
        self.nodes[0].x = 0.0;
        self.nodes[n / 2].x = 0.0;
        for i in 1..n / 2 {
            let j = n - i;
            let r = 0.5 * (self.nodes[i].r + self.nodes[j].r);
            let x = 0.5 * (self.nodes[i].x - self.nodes[j].x);
            self.nodes[i] = Point { r, x };
            self.nodes[j] = Point { r, x: -x };
        }
    }

    /// Per-node unit tangents and unwrapped tangent angles.
    pub fn tangent_frame(&self) -> TangentFrame {
        let n = self.nodes.len();
        let mut tangents = Vec::with_capacity(n);
        for i in 0..n {
            let (p, q) = self.central_neighbors(i);
            let dr = q.r - p.r;
            let dx = q.x - p.x;
            let norm = dr.hypot(dx).max(1e-300);
            tangents.push((dr / norm, dx / norm));
        }
        let mut angles = Vec::with_capacity(n);
        let mut prev = 0.0f64;
        for (i, &(tr, tx)) in tangents.iter().enumerate() {
            let mut th = tx.atan2(tr);
            if i > 0 {
                while th - prev > std::f64::consts::PI {
                    th -= 2.0 * std::f64::consts::PI;
                }
                while th - prev < -std::f64::consts::PI {
                    th += 2.0 * std::f64::consts::PI;
                }
            }
            angles.push(th);
            prev = th;
        }
        TangentFrame { tangents, angles }
    }

    fn central_neighbors(&self, i: usize) -> (Point, Point) {
        let n = self.nodes.len();
        if self.closed {
            (self.nodes[(i + n - 1) % n], self.nodes[(i + 1) % n])
        } else if i == 0 {
            (self.nodes[0], self.nodes[1])
        } else if i == n - 1 {
            (self.nodes[n - 2], self.nodes[n - 1])
        } else {
            (self.nodes[i - 1], self.nodes[i + 1])
        }
    }

    /// Signed Euclidean curvature per node; positive on counterclockwise
    /// convex arcs. Endpoints of open curves copy their neighbor's value.
    pub fn euclidean_curvature(&self) -> Vec<f64> {
        let n = self.nodes.len();
        let mut ks = vec![0.0; n];
        let interior = |prev: Point, here: Point, next: Point| -> f64 {
            let hm = (here.r - prev.r).hypot(here.x - prev.x).max(1e-300);
            let hp = (next.r - here.r).hypot(next.x - here.x).max(1e-300);
            let dr = (next.r - prev.r) / (hm + hp);
            let dx = (next.x - prev.x) / (hm + hp);
            let ddr = 2.0 * ((next.r - here.r) / hp - (here.r - prev.r) / hm) / (hm + hp);
            let ddx = 2.0 * ((next.x - here.x) / hp - (here.x - prev.x) / hm) / (hm + hp);
            let speed_sq = dr * dr + dx * dx;
            (dr * ddx - dx * ddr) / speed_sq.powf(1.5).max(1e-300)
        };
        if self.closed {
            for i in 0..n {
                ks[i] = interior(
                    self.nodes[(i + n - 1) % n],
                    self.nodes[i],
                    self.nodes[(i + 1) % n],
                );
            }
        } else {
            for i in 1..n - 1 {
                ks[i] = interior(self.nodes[i - 1], self.nodes[i], self.nodes[i + 1]);
            }
            ks[0] = ks[1];
            ks[n - 1] = ks[n - 2];
        }
        ks
    }

    /// Geodesic curvature per node against the inward normal (-t_x, t_r):
    /// k_g = lambda^-1 (k_E + ((n-1)/r - r/2) t_x + (x/2) t_r).
    pub fn geodesic_curvature(&self, n: Dimension) -> Result<Vec<f64>> {
        Self::validate(&self.nodes)?;
        let ke = self.euclidean_curvature();
        let frame = self.tangent_frame();
        let m = n.nf() - 1.0;
        Ok(self
            .nodes
            .iter()
            .zip(ke.iter().zip(frame.tangents.iter()))
            .map(|(p, (&k, &(tr, tx)))| {
                let lam = metric::log_conformal_factor(n, *p).exp();
                (k + (m / p.r - 0.5 * p.r) * tx + 0.5 * p.x * tr) / lam
            })
            .collect())
    }

    /// Weighted length: trapezoid sum of lambda ds over the polyline edges.
    pub fn curve_length(&self, n: Dimension) -> Result<f64> {
        Self::validate(&self.nodes)?;
        let count = self.nodes.len();
        let last = if self.closed { count } else { count - 1 };
        let mut lam = Vec::with_capacity(count);
        for p in &self.nodes {
            lam.push(metric::log_conformal_factor(n, *p).exp());
        }
        let mut acc = 0.0;
        for i in 0..last {
            let j = (i + 1) % count;
            let p = self.nodes[i];
            let q = self.nodes[j];
            acc += 0.5 * (lam[i] + lam[j]) * (q.r - p.r).hypot(q.x - p.x);
        }
        Ok(acc)
    }

    /// Enclosed Gauss area: contour integral of F(r) dx with
    /// F(r) = r - (n-1)/r (antiderivative of 1 + (n-1)/r^2), evaluated in
    /// closed form per edge. Positive for counterclockwise boundaries.
    pub fn enclosed_gauss_area(&self, n: Dimension) -> Result<f64> {
        Self::validate(&self.nodes)?;
        let m = n.nf() - 1.0;
        let count = self.nodes.len();
        let mut acc = 0.0;
        for i in 0..count {
            let p = self.nodes[i];
            let q = self.nodes[(i + 1) % count];
            let dx = q.x - p.x;
            if dx == 0.0 {
                continue;
            }
            let dr = q.r - p.r;
            // int over the edge of (r - (n-1)/r) dx with r linear in x
            let mean_r = 0.5 * (p.r + q.r);
            let inv_term = if dr.abs() < 1e-8 * mean_r {
                1.0 / mean_r
            } else {
                ((q.r / p.r).ln()) / dr
            };
            acc += dx * (mean_r - m * inv_term);
        }
        Ok(acc)
    }

    /// Gauss area of the underlying smooth curve: Richardson extrapolation of
    /// the polyline functional under node doubling, which cancels the O(h^2)
    /// chord-sliver bias. Intended for closed, well-resolved curves.
    pub fn refined_gauss_area(&self, n: Dimension) -> Result<f64> {
        let coarse = self.enclosed_gauss_area(n)?;
        if !self.closed || self.nodes.len() < 32 {
            return Ok(coarse);
        }
        let fine = self.resample(2 * self.nodes.len())?.enclosed_gauss_area(n)?;
        Ok((4.0 * fine - coarse) / 3.0)
    }

    /// |GA_n + closed-integral(k_g ds) - 2 pi|; small for well-resolved
    /// smooth closed curves.
    pub fn gauss_bonnet_residual(&self, n: Dimension) -> Result<f64> {
        let ga = self.enclosed_gauss_area(n)?;
        let kg = self.geodesic_curvature(n)?;
        let count = self.nodes.len();
        let mut total = 0.0;
        for i in 0..count {
            let p = self.nodes[i];
            let prev = self.nodes[(i + count - 1) % count];
            let next = self.nodes[(i + 1) % count];
            let ds = 0.5
                * ((p.r - prev.r).hypot(p.x - prev.x) + (next.r - p.r).hypot(next.x - p.x));
            let lam = metric::log_conformal_factor(n, p).exp();
            total += kg[i] * lam * ds;
        }
        Ok((ga + total - 2.0 * std::f64::consts::PI).abs())
    }

    /// Position relative to the cylinder r = r_n.
    pub fn classify_vs_cylinder(&self, n: Dimension) -> CurvePosition {
        let rn = n.cylinder_radius();
        if self.max_r() < rn {
            CurvePosition::Left
        } else if self.min_r() > rn {
            CurvePosition::Right
        } else {
            CurvePosition::Crossing
        }
    }

    /// True iff no two non-adjacent segments intersect (O(N^2) sweep).
    pub fn self_intersection_check(&self) -> bool {
        let n = self.nodes.len();
        let seg_count = if self.closed { n } else { n - 1 };
        for i in 0..seg_count {
            for j in (i + 1)..seg_count {
                // skip segments sharing a node
                if j == i + 1 || (self.closed && i == 0 && j == seg_count - 1) {
                    continue;
                }
                let a = self.nodes[i];
                let b = self.nodes[(i + 1) % n];
                let c = self.nodes[j];
                let d = self.nodes[(j + 1) % n];
                if segments_intersect(a, b, c, d) {
                    return false;
                }
            }
        }
        true
    }

    /// Max over nodes of |k_g|; zero exactly on geodesics.
    pub fn geodesic_residual(&self, n: Dimension) -> Result<f64> {
        Ok(self
            .geodesic_curvature(n)?
            .iter()
            .fold(0.0f64, |m, k| m.max(k.abs())))
    }

    /// Interpolated r-values where the polyline crosses the r-axis (x = 0).
    pub fn axis_crossings(&self) -> Vec<f64> {
        let n = self.nodes.len();
        let last = if self.closed { n } else { n - 1 };
        let mut out = Vec::new();
        for i in 0..last {
            let p = self.nodes[i];
            let q = self.nodes[(i + 1) % n];
            if p.x == 0.0 {
                out.push(p.r);
            } else if (p.x < 0.0) != (q.x < 0.0) && q.x != 0.0 {
                let t = p.x / (p.x - q.x);
                out.push(p.r + t * (q.r - p.r));
            }
        }
        out
    }

    /// Serialize as CSV with header `r,x`, one node per row; closure is
    /// implicit for closed curves.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,x\n");
        for p in &self.nodes {
            s.push_str(&format!("{},{}\n", p.r, p.x));
        }
        s
    }

    /// Parse the CSV form; the polyline is taken as closed.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut nodes = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line.eq_ignore_ascii_case("r,x")) {
                continue;
            }
            let mut it = line.split(',');
            let (Some(rs), Some(xs)) = (it.next(), it.next()) else {
                return Err(Error::InvalidArgument(format!("bad CSV row {}: {line}", lineno + 1)));
            };
            let r: f64 = rs
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad r on row {}", lineno + 1)))?;
            let x: f64 = xs
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad x on row {}", lineno + 1)))?;
            nodes.push(Point { r, x });
        }
        DiscreteCurve::closed(nodes)
    }
}

/// JSON envelope for curve snapshots in flow logs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveEnvelope {
    pub n: u32,
    pub time: f64,
    pub nodes: Vec<[f64; 2]>,
}

impl CurveEnvelope {
    pub fn new(n: Dimension, time: f64, curve: &DiscreteCurve) -> Self {
        CurveEnvelope {
            n: n.n(),
            time,
            nodes: curve.nodes().iter().map(|p| [p.r, p.x]).collect(),
        }
    }

    pub fn to_curve(&self) -> Result<DiscreteCurve> {
        DiscreteCurve::closed(
            self.nodes.iter().map(|&[r, x]| Point { r, x }).collect(),
        )
    }
}

/// Uniform Catmull-Rom interpolation on [p1, p2] with neighbors p0, p3.
fn catmull_rom(p0: Point, p1: Point, p2: Point, p3: Point, t: f64) -> Point {
    let blend = |a: f64, b: f64, c: f64, d: f64| -> f64 {
        let c0 = b;
        let c1 = 0.5 * (c - a);
        let c2 = a - 2.5 * b + 2.0 * c - 0.5 * d;
        let c3 = -0.5 * a + 1.5 * b - 1.5 * c + 0.5 * d;
        c0 + t * (c1 + t * (c2 + t * c3))
    };
    Point { r: blend(p0.r, p1.r, p2.r, p3.r), x: blend(p0.x, p1.x, p2.x, p3.x) }
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.r - a.r) * (c.x - a.x) - (b.x - a.x) * (c.r - a.r)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.r >= a.r.min(b.r) - 1e-14
        && p.r <= a.r.max(b.r) + 1e-14
        && p.x >= a.x.min(b.x) - 1e-14
        && p.x <= a.x.max(b.x) + 1e-14
}

fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = orient(a, b, c);
    let d2 = orient(a, b, d);
    let d3 = orient(c, d, a);
    let d4 = orient(c, d, b);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(a, b, c))
        || (d2 == 0.0 && on_segment(a, b, d))
        || (d3 == 0.0 && on_segment(c, d, a))
        || (d4 == 0.0 && on_segment(c, d, b))
}

fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let vr = b.r - a.r;
    let vx = b.x - a.x;
    let len_sq = vr * vr + vx * vx;
    if len_sq == 0.0 {
        return (p.r - a.r).hypot(p.x - a.x);
    }
    let t = (((p.r - a.r) * vr + (p.x - a.x) * vx) / len_sq).clamp(0.0, 1.0);
    (p.r - a.r - t * vr).hypot(p.x - a.x - t * vx)
}

fn directed_hausdorff(from: &DiscreteCurve, to: &DiscreteCurve) -> f64 {
    let n = to.len();
    let last = if to.is_closed() { n } else { n - 1 };
    from.nodes()
        .iter()
        .map(|&p| {
            (0..last)
                .map(|i| point_segment_distance(p, to.nodes()[i], to.nodes()[(i + 1) % n]))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0f64, f64::max)
}

/// Symmetric Hausdorff distance between two polylines.
pub fn hausdorff_distance(a: &DiscreteCurve, b: &DiscreteCurve) -> f64 {
    directed_hausdorff(a, b).max(directed_hausdorff(b, a))
}

/// Counterclockwise circle, node 0 at angle 0; test and demo helper.
pub fn make_circle(center: Point, radius: f64, nodes: usize) -> Result<DiscreteCurve> {
    let pts = (0..nodes)
        .map(|i| {
            let th = 2.0 * std::f64::consts::PI * i as f64 / nodes as f64;
            Point { r: center.r + radius * th.cos(), x: center.x + radius * th.sin() }
        })
        .collect();
    DiscreteCurve::closed(pts)
}

/// Sharp counterclockwise rectangle [a,b] x [-c,c] with corner points as
/// nodes, node 0 at (b, 0). The upper half is subdivided near-uniformly and
/// mirrored, so the node pairing i <-> N-i holds exactly and the polyline is
/// the exact rectangle (the realized node count is close to the request).
pub fn make_rectangle(a: f64, b: f64, c: f64, nodes: usize) -> Result<DiscreteCurve> {
    if !(0.0 < a && a < b && c > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "rectangle needs 0 < a < b and c > 0, got a={a} b={b} c={c}"
        )));
    }
    if nodes < 16 {
        return Err(Error::InvalidArgument(format!("node count {nodes} must be >= 16")));
    }
    // upper-half corner walk (b,0) -> (b,c) -> (a,c) -> (a,0), mirrored below
    let waypoints = [
        Point { r: b, x: 0.0 },
        Point { r: b, x: c },
        Point { r: a, x: c },
        Point { r: a, x: 0.0 },
    ];
    let half_perimeter = c + (b - a) + c;
    let half_target = (nodes / 2).max(8) as f64;
    let mut upper = vec![waypoints[0]];
    for w in waypoints.windows(2) {
        let len = (w[1].r - w[0].r).hypot(w[1].x - w[0].x);
        let pieces = ((len / half_perimeter * half_target).round() as usize).max(1);
        for k in 1..=pieces {
            let t = k as f64 / pieces as f64;
            upper.push(Point {
                r: w[0].r + t * (w[1].r - w[0].r),
                x: w[0].x + t * (w[1].x - w[0].x),
            });
        }
    }
    // upper now runs (b,0)..(a,0); lower half is its mirror, reversed
    let mut pts = upper.clone();
    for p in upper.iter().rev().skip(1).take(upper.len() - 2) {
        pts.push(Point { r: p.r, x: -p.x });
    }
    Ok(DiscreteCurve::closed(pts)?.with_symmetry(true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn pt(r: f64, x: f64) -> Point {
        Point { r, x }
    }

    fn rectangle_curve(a: f64, b: f64, c: f64, nodes: usize) -> DiscreteCurve {
        make_rectangle(a, b, c, nodes).unwrap()
    }

    #[test]
    fn resample_square_equal_spacing() {
        let sq = DiscreteCurve::closed(vec![pt(1.0, 0.0), pt(2.0, 0.0), pt(2.0, 1.0), pt(1.0, 1.0)])
            .unwrap();
        let rs = sq.resample(16).unwrap();
        let total = rs.euclidean_length();
        for i in 0..16 {
            let p = rs.nodes()[i];
            let q = rs.nodes()[(i + 1) % 16];
            let d = (q.r - p.r).hypot(q.x - p.x);
            assert!((d - total / 16.0).abs() < 1e-12, "segment {i}: {d}");
        }
    }

    #[test]
    fn resample_idempotent_on_uniform_curve() {
        let c = make_circle(pt(3.0, 0.0), 1.0, 64).unwrap();
        let r = c.resample(64).unwrap();
        for (p, q) in c.nodes().iter().zip(r.nodes()) {
            assert!((p.r - q.r).abs() < 1e-12 && (p.x - q.x).abs() < 1e-12);
        }
    }

    #[test]
    fn resample_circle_stays_on_circle() {
        let c = make_circle(pt(3.0, 0.0), 1.0, 64).unwrap();
        let r = c.resample(128).unwrap();
        for p in r.nodes() {
            let rad = (p.r - 3.0).hypot(p.x);
            assert!((rad - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn resample_rejects_degenerate() {
        let c = DiscreteCurve::closed(vec![pt(1.0, 0.0), pt(1.0, 1e-14), pt(1.0, 2e-14)]);
        assert!(c.is_ok());
        assert!(matches!(
            c.unwrap().resample(16),
            Err(Error::DegenerateCurve { .. })
        ));
    }

    #[test]
    fn euclidean_curvature_line_and_circle() {
        let line = DiscreteCurve::open(
            (0..32).map(|i| pt(1.0 + i as f64 * 0.1, 2.0)).collect(),
        )
        .unwrap();
        for k in line.euclidean_curvature() {
            assert!(k.abs() < 1e-12);
        }

        let circ = make_circle(pt(5.0, 0.0), 2.0, 256).unwrap();
        for k in circ.euclidean_curvature() {
            assert!((k - 0.5).abs() < 0.005, "k = {k}");
        }
        for k in circ.reversed().euclidean_curvature() {
            assert!((k + 0.5).abs() < 0.005);
        }
    }

    #[test]
    fn geodesic_curvature_model_geodesics() {
        let n = dim(2);
        let rn = n.cylinder_radius();
        // cylinder segment r = sqrt(2)
        let cyl = DiscreteCurve::open(
            (0..512).map(|i| pt(rn, -2.0 + 4.0 * i as f64 / 511.0)).collect(),
        )
        .unwrap();
        assert!(cyl.geodesic_residual(n).unwrap() <= 1e-3);

        // plane segment x = 0
        let plane = DiscreteCurve::open(
            (0..512).map(|i| pt(0.5 + 3.0 * i as f64 / 511.0, 0.0)).collect(),
        )
        .unwrap();
        assert!(plane.geodesic_residual(n).unwrap() <= 1e-10);
    }

    #[test]
    fn geodesic_curvature_line_anchor() {
        // r = 1, n = 2, traversed upward: k_g = lambda^-1 ((n-1)/r - r/2) at x=0,
        // i.e. e^{1/4} * 0.5 ~ 0.642 against the inward convention.
        let n = dim(2);
        let line = DiscreteCurve::open(
            (0..257).map(|i| pt(1.0, -1.0 + 2.0 * i as f64 / 256.0)).collect(),
        )
        .unwrap();
        let kg = line.geodesic_curvature(n).unwrap();
        let mid = kg[128];
        let expect = 0.25f64.exp() * 0.5;
        assert!((mid - expect).abs() < 1e-6, "mid = {mid}, expect = {expect}");
        assert!((mid.abs() - 0.6420).abs() < 1e-3);
    }

    #[test]
    fn curve_length_model_values() {
        let n = dim(2);
        // long plane segment approaches L_{2,P} = 2
        let plane = DiscreteCurve::open(
            (0..4096).map(|i| pt(1e-6 + 12.0 * i as f64 / 4095.0, 0.0)).collect(),
        )
        .unwrap();
        let l = plane.curve_length(n).unwrap();
        assert!((l - 2.0).abs() < 1e-5, "plane length {l}");

        // long cylinder segment approaches L_{2,C}
        let rn = n.cylinder_radius();
        let cyl = DiscreteCurve::open(
            (0..8192).map(|i| pt(rn, -14.0 + 28.0 * i as f64 / 8191.0)).collect(),
        )
        .unwrap();
        let l = cyl.curve_length(n).unwrap();
        let expect = crate::metric::cylinder_length(n);
        assert!((l - expect).abs() < 1e-5, "cylinder length {l} vs {expect}");
    }

    #[test]
    fn gauss_area_rectangle_closed_form() {
        let n = dim(2);
        let rect = rectangle_curve(1.0, 2.0, 1.0, 512);
        let ga = rect.enclosed_gauss_area(n).unwrap();
        assert!((ga - 3.0).abs() < 1e-10, "ga = {ga}");

        // generic rectangle against the closed form
        let (a, b, c) = (0.7, 2.9, 0.6);
        let rect = rectangle_curve(a, b, c, 512);
        let expect = 2.0 * c * ((b - a) + (1.0) * (1.0 / a - 1.0 / b));
        let ga = rect.enclosed_gauss_area(n).unwrap();
        assert!((ga - expect).abs() < 1e-10);
    }

    #[test]
    fn gauss_area_matches_riemann_sum() {
        // 2-D quadrature oracle over the box [1,2] x [-1,1], n = 2.
        let n = dim(2);
        let rect = rectangle_curve(1.0, 2.0, 1.0, 1024);
        let ga = rect.enclosed_gauss_area(n).unwrap();
        let oracle = quad::integrate_default(
            |r| 2.0 * (1.0 + 1.0 / (r * r)), // x-extent is 2 for every r in [1,2]
            1.0,
            2.0,
        );
        assert!((ga - oracle).abs() < 1e-4, "ga = {ga}, oracle = {oracle}");
        assert!((oracle - 3.0).abs() < 1e-10);
    }

    #[test]
    fn gauss_area_orientation_and_length_invariance() {
        let n = dim(3);
        let c = make_circle(pt(3.0, 0.5), 0.8, 256).unwrap();
        let ga = c.enclosed_gauss_area(n).unwrap();
        let ga_rev = c.reversed().enclosed_gauss_area(n).unwrap();
        assert!((ga + ga_rev).abs() < 1e-12);
        let l = c.curve_length(n).unwrap();
        let l_rev = c.reversed().curve_length(n).unwrap();
        assert!((l - l_rev).abs() < 1e-12);
    }

    #[test]
    fn gauss_bonnet_residual_small_cases() {
        let n = dim(2);
        let circ = make_circle(pt(2.0, 0.0), 0.3, 512).unwrap();
        let res = circ.gauss_bonnet_residual(n).unwrap();
        assert!(res <= 1e-2, "circle residual {res}");

        // refinement decreases the residual
        let coarse = make_circle(pt(2.0, 0.0), 0.3, 128).unwrap();
        let fine = make_circle(pt(2.0, 0.0), 0.3, 1024).unwrap();
        let rc = coarse.gauss_bonnet_residual(n).unwrap();
        let rf = fine.gauss_bonnet_residual(n).unwrap();
        assert!(rf < rc, "coarse {rc} fine {rf}");
    }

    #[test]
    fn classify_vs_cylinder_cases() {
        let n = dim(2);
        assert_eq!(
            rectangle_curve(0.2, 0.8, 0.481, 64).classify_vs_cylinder(n),
            CurvePosition::Left
        );
        assert_eq!(
            rectangle_curve(2.0, 4.0, 0.481, 64).classify_vs_cylinder(n),
            CurvePosition::Right
        );
        assert_eq!(
            rectangle_curve(1.0, 2.0, 0.481, 64).classify_vs_cylinder(n),
            CurvePosition::Crossing
        );
    }

    #[test]
    fn self_intersection_check_cases() {
        let convex = make_circle(pt(3.0, 0.0), 1.0, 64).unwrap();
        assert!(convex.self_intersection_check());

        let rounded = rectangle_curve(1.0, 2.0, 0.5, 128);
        assert!(rounded.self_intersection_check());

        // figure-eight
        let mut nodes = Vec::new();
        for i in 0..64 {
            let th = 2.0 * std::f64::consts::PI * i as f64 / 64.0;
            nodes.push(pt(3.0 + th.sin(), (2.0 * th).sin() * 0.5));
        }
        let eight = DiscreteCurve::closed(nodes).unwrap();
        assert!(!eight.self_intersection_check());
    }

    #[test]
    fn axis_crossings_of_circle() {
        let c = make_circle(pt(3.0, 0.0), 1.0, 128).unwrap();
        let mut xs = c.axis_crossings();
        xs.sort_by(f64::total_cmp);
        assert_eq!(xs.len(), 2);
        assert!((xs[0] - 2.0).abs() < 1e-3 && (xs[1] - 4.0).abs() < 1e-3);
    }

    #[test]
    fn csv_and_envelope_round_trip() {
        let c = make_circle(pt(2.0, 0.0), 0.5, 32).unwrap();
        let csv = c.to_csv();
        let back = DiscreteCurve::from_csv(&csv).unwrap();
        for (p, q) in c.nodes().iter().zip(back.nodes()) {
            assert_eq!(p.r, q.r);
            assert_eq!(p.x, q.x);
        }
        let env = CurveEnvelope::new(dim(2), 1.5, &c);
        let text = serde_json::to_string(&env).unwrap();
        let parsed: CurveEnvelope = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.n, 2);
        assert_eq!(parsed.to_curve().unwrap().len(), 32);
    }

    #[test]
    fn hausdorff_of_concentric_circles() {
        let a = make_circle(pt(3.0, 0.0), 1.0, 256).unwrap();
        let b = make_circle(pt(3.0, 0.0), 1.1, 256).unwrap();
        let d = hausdorff_distance(&a, &b);
        assert!((d - 0.1).abs() < 1e-3, "d = {d}");
    }

    #[test]
    fn symmetrize_folds_drift() {
        let mut c = make_circle(pt(3.0, 0.0), 1.0, 64).unwrap().with_symmetry(true);
        // introduce antisymmetric drift
        for p in c.nodes_mut() {
            p.x += 1e-3;
        }
        c.symmetrize();
        for (i, p) in c.nodes().iter().enumerate() {
            let q = c.nodes()[(64 - i) % 64];
            assert!((p.x + q.x).abs() < 1e-15, "node {i}");
            assert!((p.r - q.r).abs() < 1e-15);
        }
    }
}
