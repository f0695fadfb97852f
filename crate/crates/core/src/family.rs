//! The one-parameter family of rounded rectangles with Gauss area 2 pi and
//! perimeter below the double cover of the plane geodesic, plus the bisection
//! on the left edge a that brackets the critical initial curve.
//!
//! Rectangles R[a, b, c] have vertices (a, +-c), (b, +-c). The family fixes
//! c = c0, the unique height with e^(-c0^2/4) / int_0^c0 e^(-x^2/4) dx = 2,
//! rounds the corners with quarter circles, and chooses b = phi(a) so the
//! enclosed Gauss area is exactly 2 pi.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::curve::DiscreteCurve;
use crate::error::{Error, Result};
use crate::flow::{self, FlowConfig, FlowOutcome, FlowOutcomeKind};
use crate::metric::{self, Dimension, Point};
use crate::quad;

/// Geometry of one rounded rectangle.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RectangleSpec {
    /// Left edge.
    pub a: f64,
    /// Right edge.
    pub b: f64,
    /// Half-height.
    pub c: f64,
    /// Corner rounding radius (0 = sharp).
    pub rho: f64,
}

impl RectangleSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.a && self.a < self.b && self.c > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "need 0 < a < b and c > 0: a={} b={} c={}",
                self.a, self.b, self.c
            )));
        }
        let cap = 0.5 * self.c.min(0.5 * (self.b - self.a));
        if self.rho < 0.0 || self.rho > cap {
            return Err(Error::InvalidArgument(format!(
                "rounding radius {} outside [0, {cap}]",
                self.rho
            )));
        }
        Ok(())
    }
}

/// One member of the family: b = phi(a) after area correction.
#[derive(Debug, Clone, Serialize)]
pub struct FamilyMember {
    pub a: f64,
    pub b: f64,
    pub rho: f64,
    pub gauss_area: f64,
    pub length: f64,
    #[serde(skip)]
    pub curve: DiscreteCurve,
}

/// Ratio e^(-c^2/4) / int_0^c e^(-x^2/4) dx, strictly decreasing in c.
fn height_ratio(c: f64) -> f64 {
    let den = quad::integrate_default(|x| (-x * x / 4.0).exp(), 0.0, c);
    (-c * c / 4.0).exp() / den
}

/// The height constant c0: the positive root of height_ratio(c) = 2,
/// approximately 0.481. Residual of the defining ratio <= 1e-12.
pub fn solve_c0() -> f64 {
    let (mut lo, mut hi) = (0.1f64, 1.0f64);
    debug_assert!(height_ratio(lo) > 2.0 && height_ratio(hi) < 2.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if height_ratio(mid) > 2.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Cached value of c0 for the hot paths.
pub fn c0() -> f64 {
    static C0: OnceLock<f64> = OnceLock::new();
    *C0.get_or_init(solve_c0)
}

/// Perimeter of the sharp rectangle R[a,b,c] in the weighted metric:
/// 2 (a^(n-1) e^(-a^2/4) + b^(n-1) e^(-b^2/4)) int_0^c e^(-x^2/4) dx
///   + 2 e^(-c^2/4) int_a^b r^(n-1) e^(-r^2/4) dr.
pub fn rectangle_perimeter(n: Dimension, a: f64, b: f64, c: f64) -> Result<f64> {
    if !(0.0 < a && a < b && c > 0.0) {
        return Err(Error::InvalidArgument(format!("need 0 < a < b, c > 0: a={a} b={b} c={c}")));
    }
    let m = n.nf() - 1.0;
    let vert = quad::integrate_default(|x| (-x * x / 4.0).exp(), 0.0, c);
    let horiz = quad::integrate_default(|r| r.powf(m) * (-r * r / 4.0).exp(), a, b);
    let edge = |r: f64| r.powf(m) * (-r * r / 4.0).exp();
    Ok(2.0 * (edge(a) + edge(b)) * vert + 2.0 * (-c * c / 4.0).exp() * horiz)
}

/// Gauss area lost to one pair (top + bottom) of rounded corners whose
/// quarter circles span r in [r_lo, r_lo + rho] ... [r_hi - rho, r_hi].
/// `left` selects which side the arc bulges toward.
fn corner_pair_area(n: Dimension, r_edge: f64, rho: f64, left: bool) -> f64 {
    if rho == 0.0 {
        return 0.0;
    }
    let m = n.nf() - 1.0;
    // substitute r = r_edge -+ rho (1 - sin theta): the notch height is
    // rho (1 - cos theta) and dr = +-rho cos theta d theta, theta in [0, pi/2]
    2.0 * quad::integrate_default(
        |theta| {
            let (s, c) = theta.sin_cos();
            let r = if left {
                r_edge + rho * (1.0 - s)
            } else {
                r_edge - rho * (1.0 - s)
            };
            (1.0 + m / (r * r)) * rho * (1.0 - c) * rho * c
        },
        0.0,
        std::f64::consts::FRAC_PI_2,
    )
}

/// Enclosed Gauss area of the (possibly rounded) rectangle: the sharp closed
/// form 2c [(b-a) + (n-1)(1/a - 1/b)] minus the four corner corrections.
pub fn rectangle_gauss_area(n: Dimension, spec: &RectangleSpec) -> Result<f64> {
    spec.validate()?;
    let m = n.nf() - 1.0;
    let sharp = 2.0 * spec.c * ((spec.b - spec.a) + m * (1.0 / spec.a - 1.0 / spec.b));
    Ok(sharp
        - corner_pair_area(n, spec.b, spec.rho, false)
        - corner_pair_area(n, spec.a, spec.rho, true))
}

/// Solve phi(a): the b > a with rectangle_gauss_area = 2 pi. The sharp case
/// is the closed-form quadratic root; rounding is corrected by bisection.
pub fn solve_phi(n: Dimension, a: f64, rho: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::Domain { r: a });
    }
    let c = c0();
    let m = n.nf() - 1.0;
    // sharp: 2c [(b-a) + m (1/a - 1/b)] = 2 pi
    // <=> b^2 - b (a + pi/c - m/a) - m = 0
    let coeff = a + std::f64::consts::PI / c - m / a;
    let b_sharp = 0.5 * (coeff + (coeff * coeff + 4.0 * m).sqrt());
    if rho == 0.0 {
        return Ok(b_sharp);
    }

    let b_min = a + 4.0 * rho; // keep the validate() cap strict
    let ga_at = |b: f64| -> Result<f64> {
        rectangle_gauss_area(n, &RectangleSpec { a, b, c, rho })
    };
    let target = 2.0 * std::f64::consts::PI;
    let ga_min = ga_at(b_min * (1.0 + 1e-12))?;
    if ga_min >= target {
        return Err(Error::NoSolution { a, ga_min });
    }
    let mut lo = b_min;
    let mut hi = b_sharp.max(b_min) + 1.0;
    while ga_at(hi)? < target {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::NoSolution { a, ga_min });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ga_at(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 * hi.max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Exact uniform-arclength polyline of the rounded rectangle, node 0 at
/// (b, 0), counterclockwise; node count made even for the symmetric pairing.
pub fn rounded_rectangle_curve(spec: &RectangleSpec, nodes: usize) -> Result<DiscreteCurve> {
    spec.validate()?;
    if nodes < 64 {
        return Err(Error::InvalidArgument(format!("node count {nodes} < 64")));
    }
    let nodes = nodes + nodes % 2;
    let (a, b, c, rho) = (spec.a, spec.b, spec.c, spec.rho);
    let quarter = std::f64::consts::FRAC_PI_2 * rho;
    // piece lengths, counterclockwise from (b, 0)
    let lens = [
        c - rho,           // right edge, upper part
        quarter,           // top-right arc
        b - a - 2.0 * rho, // top edge
        quarter,           // top-left arc
        2.0 * (c - rho),   // left edge
        quarter,           // bottom-left arc
        b - a - 2.0 * rho, // bottom edge
        quarter,           // bottom-right arc
        c - rho,           // right edge, lower part
    ];
    let total: f64 = lens.iter().sum();
    let point_at = |s: f64| -> Point {
        let mut s = s;
        // 0: right edge up
        if s < lens[0] {
            return Point { r: b, x: s };
        }
        s -= lens[0];
        if s < lens[1] {
            let th = s / rho;
            return Point { r: b - rho + rho * th.cos(), x: c - rho + rho * th.sin() };
        }
        s -= lens[1];
        if s < lens[2] {
            return Point { r: b - rho - s, x: c };
        }
        s -= lens[2];
        if s < lens[3] {
            let th = std::f64::consts::FRAC_PI_2 + s / rho;
            return Point { r: a + rho + rho * th.cos(), x: c - rho + rho * th.sin() };
        }
        s -= lens[3];
        if s < lens[4] {
            return Point { r: a, x: c - rho - s };
        }
        s -= lens[4];
        if s < lens[5] {
            let th = std::f64::consts::PI + s / rho;
            return Point { r: a + rho + rho * th.cos(), x: -(c - rho) + rho * th.sin() };
        }
        s -= lens[5];
        if s < lens[6] {
            return Point { r: a + rho + s, x: -c };
        }
        s -= lens[6];
        if s < lens[7] {
            let th = 1.5 * std::f64::consts::PI + s / rho;
            return Point { r: b - rho + rho * th.cos(), x: -(c - rho) + rho * th.sin() };
        }
        s -= lens[7];
        Point { r: b, x: (s - (c - rho)).min(0.0) }
    };
    let pts: Vec<Point> = (0..nodes)
        .map(|j| point_at(total * j as f64 / nodes as f64))
        .collect();
    let mut curve = DiscreteCurve::closed(pts)?.with_symmetry(true);
    curve.symmetrize();
    Ok(curve)
}

/// Build the family member for left edge `a`: rounded rectangle with
/// b = phi(a), then a final secant touch-up of b so the *discrete* polyline
/// carries Gauss area 2 pi to 1e-10. Asserts the length bound
/// L < 2 L_{n,P} required of every member.
pub fn build_initial_curve(n: Dimension, a: f64, nodes: usize) -> Result<FamilyMember> {
    if !(a > 0.0) {
        return Err(Error::Domain { r: a });
    }
    let c = c0();
    // rho = c0/4 by default; slim members (tiny or huge a) take whatever
    // smaller radius still reaches Gauss area 2 pi and fits the geometry
    let mut rho = 0.25 * c;
    let mut b = f64::NAN;
    for _ in 0..60 {
        match solve_phi(n, a, rho) {
            Ok(bv) if rho <= 0.5 * (0.5 * (bv - a)).min(c) => {
                b = bv;
                break;
            }
            Ok(bv) => rho = (0.2 * (bv - a).min(c)).min(0.5 * rho),
            Err(Error::NoSolution { .. }) => rho *= 0.5,
            Err(e) => return Err(e),
        }
        if rho < 1e-9 {
            rho = 0.0;
            b = solve_phi(n, a, 0.0)?;
            break;
        }
    }
    if !b.is_finite() {
        return Err(Error::NoSolution { a, ga_min: f64::NAN });
    }

    // b solves the analytic area equation, so the underlying smooth curve
    // carries Gauss area 2 pi to the root-finder tolerance; the polyline
    // functional on the sampled nodes differs only by its O(h^2) chord bias.
    let target = std::f64::consts::TAU;
    let spec = RectangleSpec { a, b, c, rho };
    let ga = rectangle_gauss_area(n, &spec)?;
    if (ga - target).abs() > 1e-8 {
        return Err(Error::NoSolution { a, ga_min: ga });
    }
    let curve = rounded_rectangle_curve(&spec, nodes)?;

    let length = curve.curve_length(n)?;
    let bound = 2.0 * metric::plane_length(n);
    if length >= bound {
        return Err(Error::InvalidArgument(format!(
            "family member a={a} has length {length} >= 2 L_(n,P) = {bound}"
        )));
    }
    Ok(FamilyMember { a, b, rho, gauss_area: ga, length, curve })
}

/// Result of the critical-a bisection.
#[derive(Debug, Clone)]
pub struct CriticalSearch {
    pub a0: f64,
    pub runs: usize,
    /// Outcome of the deciding run, with `best_curve`/`best_residual`
    /// replaced by the best snapshot seen across the whole search.
    pub outcome: FlowOutcome,
}

/// Bisection on a: members with small a flow out to the left of the cylinder,
/// members with large a flow out to the right, and the bracket shrinks onto
/// the critical curve that keeps crossing it.
pub fn find_critical_a(
    n: Dimension,
    cfg: &FlowConfig,
    bracket: (f64, f64),
) -> Result<CriticalSearch> {
    let (mut lo, mut hi) = bracket;
    if !(0.0 < lo && lo < hi) {
        return Err(Error::InvalidArgument(format!("bad bracket ({lo}, {hi})")));
    }
    let run = |a: f64| -> Result<FlowOutcome> {
        let member = build_initial_curve(n, a, cfg.node_count)?;
        flow::run_flow(&member.curve, n, cfg)
    };

    let lo_out = run(lo)?;
    let hi_out = run(hi)?;
    if lo_out.kind != FlowOutcomeKind::ExitedLeft || hi_out.kind != FlowOutcomeKind::ExitedRight {
        return Err(Error::BracketInvalid {
            a_lo: lo,
            a_hi: hi,
            lo_kind: lo_out.kind.to_string(),
            hi_kind: hi_out.kind.to_string(),
        });
    }

    let mut best_curve = if lo_out.best_residual <= hi_out.best_residual {
        (lo_out.best_curve.clone(), lo_out.best_residual)
    } else {
        (hi_out.best_curve.clone(), hi_out.best_residual)
    };
    let mut runs = 2;
    let mut a0 = 0.5 * (lo + hi);
    let mut last_outcome = None;

    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        let out = run(mid)?;
        runs += 1;
        if out.best_residual < best_curve.1 {
            best_curve = (out.best_curve.clone(), out.best_residual);
        }
        a0 = mid;
        let kind = out.kind;
        last_outcome = Some(out);
        match kind {
            FlowOutcomeKind::ExitedLeft => lo = mid,
            FlowOutcomeKind::ExitedRight => hi = mid,
            // a run that kept crossing to t_max (or stalled on the geodesic)
            // is the deepest useful bracket refinement
            FlowOutcomeKind::Converged | FlowOutcomeKind::TimeOut => break,
        }
    }

    // polish: restart from the best hovering snapshot at doubled resolution.
    // The snapshot carries the Gauss-area drift of its run, so it is first
    // projected back onto the GA = 2 pi manifold by a uniform normal offset
    // (the same area-correction idea as solving b = phi(a) at build time);
    // the restarted flow then hovers on a fresh conservation clock.
    let mut outcome = last_outcome.expect("at least one bisection run");
    let polish_cfg = FlowConfig { node_count: 2 * cfg.node_count, ..cfg.clone() };
    for _ in 0..2 {
        if best_curve.1 <= 0.5 * cfg.residual_tol {
            break;
        }
        let Ok(seed) = best_curve.0.resample(polish_cfg.node_count) else { break };
        let Ok(seed) = project_gauss_area(&seed, n) else { break };
        let Ok(out) = flow::run_flow(&seed, n, &polish_cfg) else { break };
        runs += 1;
        let improved = out.best_residual < best_curve.1;
        if improved {
            best_curve = (out.best_curve.clone(), out.best_residual);
        }
        outcome = out;
        if !improved {
            break;
        }
    }
    outcome.best_curve = best_curve.0;
    outcome.best_residual = best_curve.1;
    Ok(CriticalSearch { a0, runs, outcome })
}

/// Offset every node along the outward normal by the amount that restores
/// enclosed Gauss area 2 pi (secant iteration on the refined functional).
pub fn project_gauss_area(curve: &DiscreteCurve, n: Dimension) -> Result<DiscreteCurve> {
    let target = std::f64::consts::TAU;
    let offset = |s: f64| -> Result<DiscreteCurve> {
        let frame = curve.tangent_frame();
        let mut out = curve.clone();
        for (i, p) in out.nodes_mut().iter_mut().enumerate() {
            let (tr, tx) = frame.tangents[i];
            p.r += s * tx;
            p.x -= s * tr;
        }
        if out.min_r() <= 0.0 {
            return Err(Error::Domain { r: out.min_r() });
        }
        Ok(out)
    };
    let mut s0 = 0.0;
    let mut g0 = curve.refined_gauss_area(n)? - target;
    let mut s1 = 1e-4;
    let mut g1 = offset(s1)?.refined_gauss_area(n)? - target;
    for _ in 0..60 {
        if g1.abs() <= 1e-10 {
            break;
        }
        let slope = (g1 - g0) / (s1 - s0);
        if slope == 0.0 || !slope.is_finite() {
            break;
        }
        let s2 = s1 - g1 / slope;
        s0 = s1;
        g0 = g1;
        s1 = s2;
        g1 = offset(s1)?.refined_gauss_area(n)? - target;
    }
    let mut out = offset(s1)?;
    if out.is_symmetric() {
        out.symmetrize();
    }
    Ok(out)
}
