//! The weighted half-plane: conformal factor, curvatures, and the closed-form
//! lengths of the two model geodesics (cylinder and plane).
//!
//! The metric is g = lambda^2 (dr^2 + dx^2) on {r > 0} with
//! lambda = r^(n-1) exp(-(x^2 + r^2)/4). Its Gauss curvature
//! K = lambda^(-2) (1 + (n-1)/r^2) is strictly positive.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;

/// Ambient dimension parameter of the metric, n >= 2.
///
/// The profile curve of an n-dimensional rotational self-shrinker lives in
/// the half-plane with this weight; the stationary cylinder sits at
/// r_n = sqrt(2(n-1)).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dimension(u32);

impl Dimension {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("dimension n = {n} must be >= 2")));
        }
        Ok(Dimension(n))
    }

    #[inline]
    pub fn n(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn nf(self) -> f64 {
        f64::from(self.0)
    }

    /// Radius of the stationary cylinder, r_n = sqrt(2(n-1)).
    #[inline]
    pub fn cylinder_radius(self) -> f64 {
        (2.0 * (self.nf() - 1.0)).sqrt()
    }
}

/// A point (r, x) in the open half-plane r > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub r: f64,
    pub x: f64,
}

impl Point {
    pub fn new(r: f64, x: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::Domain { r });
        }
        Ok(Point { r, x })
    }
}

fn check_r(r: f64) -> Result<f64> {
    if r > 0.0 {
        Ok(r)
    } else {
        Err(Error::Domain { r })
    }
}

/// ln lambda at (r, x).
#[inline]
pub fn log_conformal_factor(n: Dimension, p: Point) -> f64 {
    (n.nf() - 1.0) * p.r.ln() - 0.25 * (p.x * p.x + p.r * p.r)
}

/// The conformal factor lambda = r^(n-1) exp(-(x^2 + r^2)/4).
pub fn conformal_factor(n: Dimension, p: Point) -> Result<f64> {
    check_r(p.r)?;
    Ok(log_conformal_factor(n, p).exp())
}

/// Gauss curvature K = lambda^(-2) (1 + (n-1)/r^2); strictly positive.
pub fn gauss_curvature(n: Dimension, p: Point) -> Result<f64> {
    check_r(p.r)?;
    let log_k = -2.0 * log_conformal_factor(n, p) + (1.0 + (n.nf() - 1.0) / (p.r * p.r)).ln();
    Ok(log_k.exp())
}

fn ln_factorial(m: u32) -> f64 {
    (2..=u64::from(m)).map(|i| (i as f64).ln()).sum()
}

/// m! as f64; exact through 20!, via summed logs beyond.
fn factorial_f64(m: u32) -> f64 {
    if m <= 20 {
        let mut f: u64 = 1;
        for i in 2..=u64::from(m) {
            f *= i;
        }
        f as f64
    } else {
        ln_factorial(m).exp()
    }
}

/// ln Gamma(n/2) for integer n >= 1, from the exact half-integer forms.
fn ln_gamma_half(n: u32) -> f64 {
    if n % 2 == 0 {
        ln_factorial(n / 2 - 1)
    } else {
        // Gamma(k + 1/2) = sqrt(pi) (2k-1)!! / 2^k with k = (n-1)/2.
        let k = (n - 1) / 2;
        let mut s = 0.5 * std::f64::consts::PI.ln();
        for i in 1..=k {
            s += (f64::from(i) - 0.5).ln();
        }
        s
    }
}

/// ln L_{n,P} = (n-1) ln 2 + ln Gamma(n/2).
pub fn ln_plane_length(n: Dimension) -> f64 {
    (n.nf() - 1.0) * std::f64::consts::LN_2 + ln_gamma_half(n.n())
}

/// Weighted length of the plane geodesic (the half-line x = 0):
/// L_{n,P} = int_0^inf u^(n-1) e^(-u^2/4) du = 2^(n-1) Gamma(n/2).
///
/// Even n = 2k gives the exact integer 2^(2k-1) (k-1)!; odd n = 2k+1 gives
/// sqrt(pi) 2^k (2k-1)!!. Evaluated in log space once the closed form would
/// lose exactness.
pub fn plane_length(n: Dimension) -> f64 {
    let nv = n.n();
    if nv % 2 == 0 {
        let k = nv / 2;
        if nv <= 40 {
            return 2f64.powi(nv as i32 - 1) * factorial_f64(k - 1);
        }
    } else {
        let k = (nv - 1) / 2;
        if nv <= 41 {
            let mut df = 1.0; // (2k-1)!!
            for i in 1..=k {
                df *= 2.0 * f64::from(i) - 1.0;
            }
            return std::f64::consts::PI.sqrt() * 2f64.powi(k as i32) * df;
        }
    }
    ln_plane_length(n).exp()
}

/// ln L_{n,C} = ln(2 sqrt(pi)) + (n-1) ln r_n - (n-1)/2.
pub fn ln_cylinder_length(n: Dimension) -> f64 {
    let m = n.nf() - 1.0;
    (2.0 * std::f64::consts::PI.sqrt()).ln() + m * n.cylinder_radius().ln() - 0.5 * m
}

/// Weighted length of the cylinder geodesic r = r_n:
/// L_{n,C} = 2 sqrt(pi) r_n^(n-1) e^(-r_n^2/4), and r_n^2/4 = (n-1)/2.
pub fn cylinder_length(n: Dimension) -> f64 {
    ln_cylinder_length(n).exp()
}

/// Quadrature oracle for L_{n,P}; independent of the closed form.
pub fn plane_length_quadrature(n: Dimension) -> f64 {
    let m = n.nf() - 1.0;
    let cutoff = quad::gaussian_tail_cutoff(n.n());
    quad::integrate_default(|u| u.powf(m) * (-u * u / 4.0).exp(), 0.0, cutoff)
}

/// Quadrature oracle for L_{n,C}.
pub fn cylinder_length_quadrature(n: Dimension) -> f64 {
    let rn = n.cylinder_radius();
    let w = rn.powf(n.nf() - 1.0);
    let cutoff = quad::gaussian_tail_cutoff(2);
    2.0 * quad::integrate_default(
        |u| w * (-(u * u + rn * rn) / 4.0).exp(),
        0.0,
        cutoff,
    )
}

/// One row of the plane-vs-cylinder comparison.
#[derive(Debug, Clone, Serialize)]
pub struct PlaneCylinderItem {
    pub n: u32,
    pub ln_plane: f64,
    pub ln_cylinder: f64,
    /// L_{n,C} - L_{n,P}; positive when the cylinder is longer.
    pub margin: f64,
    pub pass: bool,
}

/// One Stirling-bound check: sqrt(2 pi) m^(m+1/2) e^-m <= m! <= e m^(m+1/2) e^-m.
#[derive(Debug, Clone, Serialize)]
pub struct StirlingItem {
    pub m: u32,
    pub ln_lower: f64,
    pub ln_factorial: f64,
    pub ln_upper: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlaneCylinderReport {
    pub items: Vec<PlaneCylinderItem>,
    pub stirling: Vec<StirlingItem>,
    pub all_pass: bool,
}

/// Check L_{n,P} < L_{n,C} for 2 <= n <= n_max, and Stirling's bounds for
/// every factorial the comparison's proof consumes. Violations are recorded,
/// not thrown.
pub fn check_plane_lt_cylinder(n_max: u32) -> Result<PlaneCylinderReport> {
    if n_max < 2 {
        return Err(Error::InvalidArgument(format!("n_max = {n_max} must be >= 2")));
    }
    let mut items = Vec::new();
    let mut factorials = std::collections::BTreeSet::new();
    for nv in 2..=n_max {
        let n = Dimension::new(nv)?;
        let lp = ln_plane_length(n);
        let lc = ln_cylinder_length(n);
        let margin = if lc < 700.0 { lc.exp() - lp.exp() } else { f64::INFINITY };
        items.push(PlaneCylinderItem {
            n: nv,
            ln_plane: lp,
            ln_cylinder: lc,
            margin,
            pass: lp < lc,
        });
        if nv % 2 == 0 {
            factorials.insert(nv / 2 - 1);
        } else {
            let k = (nv - 1) / 2;
            factorials.insert(k);
            factorials.insert(2 * k);
        }
    }
    let stirling: Vec<StirlingItem> = factorials
        .into_iter()
        .filter(|&m| m >= 1)
        .map(|m| {
            let mf = f64::from(m);
            let core = (mf + 0.5) * mf.ln() - mf;
            let ln_lower = 0.5 * (2.0 * std::f64::consts::PI).ln() + core;
            let ln_upper = 1.0 + core;
            let lf = ln_factorial(m);
            StirlingItem {
                m,
                ln_lower,
                ln_factorial: lf,
                ln_upper,
                pass: ln_lower <= lf && lf <= ln_upper,
            }
        })
        .collect();
    let all_pass = items.iter().all(|i| i.pass) && stirling.iter().all(|s| s.pass);
    Ok(PlaneCylinderReport { items, stirling, all_pass })
}
