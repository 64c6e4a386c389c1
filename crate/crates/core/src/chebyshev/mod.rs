//! Chebyshev-basis approximations with certified sup-norm error bounds.
//!
//! Coefficients come from Chebyshev–Gauss quadrature on 4(d+1) nodes,
//! which is a DCT of the target sampled at the nodes. Bounds are either
//! analytic (Bernstein ellipse of analyticity, closed-form corollaries) or
//! measured on a uniform grid when no analyticity data is supplied.

pub mod dct;
mod targets;
mod taylor;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) use targets::log_fermi_scaled;
pub use targets::{
    bernstein_bound, fermi_dirac_approx, fermi_dirac_bound, fermi_dirac_degree, fermi_dirac_scaled,
    greens_bound_terms, greens_degree, greens_scalar_approx, log_fermi_approx, log_fermi_ellipse,
    resolvent_bound, GreensBound,
};
pub use taylor::{exp_taylor, TaylorPoly};

/// Number of uniform grid points used for measured errors.
pub const GRID_POINTS: usize = 10_000;

/// Function being approximated, with the parameters needed to re-evaluate it.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    /// Free-form description of a user-supplied function.
    Custom(String),
    /// scale / (1 + e^{c x})
    FermiDirac { c: f64, scale: f64 },
    /// (η/8)·g(x) with the Fermi factor and the two resolvent branches.
    Greens {
        beta: f64,
        s: f64,
        eta: f64,
        omega: f64,
    },
    /// scale · log(1 + e^{−βs x})
    LogFermi { beta: f64, s: f64, scale: f64 },
}

impl Target {
    /// Exact value of the target at x, when it is a known closed form.
    pub fn evaluate(&self, x: f64) -> Option<Complex64> {
        match *self {
            Target::Custom(_) => None,
            Target::FermiDirac { c, scale } => Some(Complex64::new(scale * logistic(c * x), 0.0)),
            Target::Greens {
                beta,
                s,
                eta,
                omega,
            } => Some(greens_scalar(beta, s, eta, omega, x)),
            Target::LogFermi { beta, s, scale } => {
                Some(Complex64::new(scale * softplus(-beta * s * x), 0.0))
            }
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Custom(name) => write!(f, "custom {name}"),
            Target::FermiDirac { c, scale } => write!(f, "fermi-dirac c={c} scale={scale}"),
            Target::Greens {
                beta,
                s,
                eta,
                omega,
            } => {
                write!(f, "greens beta={beta} s={s} eta={eta} omega={omega}")
            }
            Target::LogFermi { beta, s, scale } => {
                write!(f, "log-fermi beta={beta} s={s} scale={scale}")
            }
        }
    }
}

impl FromStr for Target {
    type Err = String;

    fn from_str(text: &str) -> std::result::Result<Self, String> {
        let text = text.trim();
        let (kind, rest) = text.split_once(' ').unwrap_or((text, ""));
        if kind == "custom" {
            return Ok(Target::Custom(rest.to_string()));
        }
        let mut params = std::collections::HashMap::new();
        for pair in rest.split_whitespace() {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| format!("malformed parameter `{pair}`"))?;
            let v: f64 = v
                .parse()
                .map_err(|_| format!("malformed number in `{pair}`"))?;
            params.insert(k, v);
        }
        let get = |k: &str| {
            params
                .get(k)
                .copied()
                .ok_or_else(|| format!("missing parameter `{k}` for {kind}"))
        };
        match kind {
            "fermi-dirac" => Ok(Target::FermiDirac {
                c: get("c")?,
                scale: get("scale")?,
            }),
            "greens" => Ok(Target::Greens {
                beta: get("beta")?,
                s: get("s")?,
                eta: get("eta")?,
                omega: get("omega")?,
            }),
            "log-fermi" => Ok(Target::LogFermi {
                beta: get("beta")?,
                s: get("s")?,
                scale: get("scale")?,
            }),
            other => Err(format!("unknown target kind `{other}`")),
        }
    }
}

/// Where the certified bound came from.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundKind {
    /// Closed-form corollary of Bernstein's theorem; the string names it.
    Analytic(String),
    /// 2C r^{−d}/(r − 1) for the given ellipse parameter and modulus bound.
    Bernstein { r: f64, modulus: f64 },
    /// Maximum deviation observed on the uniform grid.
    Measured,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundKind::Analytic(name) => write!(f, "analytic {name}"),
            BoundKind::Bernstein { r, modulus } => write!(f, "bernstein r={r} C={modulus}"),
            BoundKind::Measured => write!(f, "measured"),
        }
    }
}

/// Bernstein-ellipse data for an analytic target: |f| ≤ modulus on E_r.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse {
    pub r: f64,
    pub modulus: f64,
}

/// Chebyshev series Σ a_k T_k(x) with a certified sup-norm error on [−1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevApprox {
    pub coeffs: Vec<Complex64>,
    pub target: Target,
    pub certified_bound: f64,
    pub bound_kind: BoundKind,
}

impl ChebyshevApprox {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Σ a_k T_k(x) by the Clenshaw recurrence.
    pub fn eval(&self, x: f64) -> Complex64 {
        eval_poly(&self.coeffs, x)
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|a| a.im == 0.0)
    }

    /// Multiplies the series and its bound by a positive factor.
    pub fn scaled(&self, factor: f64) -> ChebyshevApprox {
        ChebyshevApprox {
            coeffs: self.coeffs.iter().map(|a| a * factor).collect(),
            target: self.target.clone(),
            certified_bound: self.certified_bound * factor,
            bound_kind: self.bound_kind.clone(),
        }
    }

    /// Largest |p(x)| over a dense Chebyshev-node grid plus both endpoints.
    pub fn max_abs_on_grid(&self) -> f64 {
        max_abs_on_grid(&self.coeffs)
    }

    /// Sup deviation from the target on a uniform grid, when the target is
    /// a known closed form.
    pub fn measured_error(&self, points: usize) -> Option<f64> {
        let target = self.target.clone();
        if target.evaluate(0.0).is_none() {
            return None;
        }
        Some(measured_error(
            &self.coeffs,
            |x| target.evaluate(x).unwrap(),
            points,
        ))
    }

    /// Text record: header, target, degree, bound, one coefficient per line.
    pub fn to_record(&self) -> String {
        let mut out = String::from("chebyshev-approx v1\n");
        out.push_str(&format!("target: {}\n", self.target));
        out.push_str(&format!("degree: {}\n", self.degree()));
        out.push_str(&format!(
            "bound: {} {}\n",
            self.certified_bound, self.bound_kind
        ));
        for a in &self.coeffs {
            out.push_str(&format!("{} {}\n", a.re, a.im));
        }
        out
    }

    pub fn from_record(text: &str) -> Result<Self> {
        let perr = |line: usize, message: String| Error::Parse { line, message };
        let mut lines = text.lines().enumerate();
        let mut next = |what: &str| {
            lines
                .next()
                .map(|(i, l)| (i + 1, l))
                .ok_or_else(|| perr(0, format!("missing {what}")))
        };
        let (ln, header) = next("header")?;
        if header.trim() != "chebyshev-approx v1" {
            return Err(perr(ln, "unknown record header".into()));
        }
        let (ln, target) = next("target")?;
        let target = target
            .strip_prefix("target: ")
            .ok_or_else(|| perr(ln, "expected `target:`".into()))?
            .parse::<Target>()
            .map_err(|m| perr(ln, m))?;
        let (ln, degree) = next("degree")?;
        let degree: usize = degree
            .strip_prefix("degree: ")
            .and_then(|d| d.trim().parse().ok())
            .ok_or_else(|| perr(ln, "expected `degree: <int>`".into()))?;
        let (ln, bound) = next("bound")?;
        let bound = bound
            .strip_prefix("bound: ")
            .ok_or_else(|| perr(ln, "expected `bound:`".into()))?;
        let (value, kind) = bound.split_once(' ').unwrap_or((bound, "measured"));
        let certified_bound: f64 = value
            .parse()
            .map_err(|_| perr(ln, format!("malformed bound `{value}`")))?;
        let bound_kind = parse_bound_kind(kind).map_err(|m| perr(ln, m))?;
        let mut coeffs = Vec::with_capacity(degree + 1);
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let mut num = || -> Result<f64> {
                parts
                    .next()
                    .and_then(|p| p.parse().ok())
                    .ok_or_else(|| perr(i + 1, "malformed coefficient".into()))
            };
            coeffs.push(Complex64::new(num()?, num()?));
        }
        if coeffs.len() != degree + 1 {
            return Err(perr(
                0,
                format!(
                    "expected {} coefficients, found {}",
                    degree + 1,
                    coeffs.len()
                ),
            ));
        }
        Ok(ChebyshevApprox {
            coeffs,
            target,
            certified_bound,
            bound_kind,
        })
    }
}

fn parse_bound_kind(text: &str) -> std::result::Result<BoundKind, String> {
    let text = text.trim();
    if text == "measured" {
        return Ok(BoundKind::Measured);
    }
    if let Some(name) = text.strip_prefix("analytic ") {
        return Ok(BoundKind::Analytic(name.to_string()));
    }
    if let Some(rest) = text.strip_prefix("bernstein ") {
        let mut r = None;
        let mut modulus = None;
        for pair in rest.split_whitespace() {
            match pair.split_once('=') {
                Some(("r", v)) => r = v.parse().ok(),
                Some(("C", v)) => modulus = v.parse().ok(),
                _ => return Err(format!("malformed bernstein parameter `{pair}`")),
            }
        }
        return match (r, modulus) {
            (Some(r), Some(modulus)) => Ok(BoundKind::Bernstein { r, modulus }),
            _ => Err("bernstein bound needs r and C".into()),
        };
    }
    Err(format!("unknown bound kind `{text}`"))
}

/// Σ a_k T_k(x) by the Clenshaw recurrence. Values outside [−1, 1] are
/// evaluated but logged, since T_k grows exponentially there.
pub fn eval_poly(coeffs: &[Complex64], x: f64) -> Complex64 {
    if !(-1.0..=1.0).contains(&x) {
        log::warn!("evaluating Chebyshev series outside [-1, 1] at x = {x}");
    }
    clenshaw(coeffs, x)
}

fn clenshaw(coeffs: &[Complex64], x: f64) -> Complex64 {
    let n = coeffs.len();
    if n == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let mut b1 = Complex64::new(0.0, 0.0);
    let mut b2 = Complex64::new(0.0, 0.0);
    let two_x = 2.0 * x;
    for a in coeffs[1..].iter().rev() {
        let b0 = a + b1 * two_x - b2;
        b2 = b1;
        b1 = b0;
    }
    coeffs[0] + b1 * x - b2
}

/// Chebyshev coefficients a_0..a_d of f from 4(d+1)-node Gauss quadrature.
pub fn fit_coefficients<F>(f: F, degree: usize) -> Result<Vec<Complex64>>
where
    F: Fn(f64) -> Complex64,
{
    let m = 4 * (degree + 1);
    let nodes = dct::chebyshev_nodes(m);
    let mut values = Vec::with_capacity(m);
    for &x in &nodes {
        let v = f(x);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFinite { x });
        }
        values.push(v);
    }
    let mut coeffs = dct::coefficients_from_nodes(&values);
    coeffs.truncate(degree + 1);
    Ok(coeffs)
}

/// Degree-d Chebyshev approximation of `f`. With an ellipse the certified
/// bound is Bernstein's 2C r^{−d}/(r − 1); otherwise it is the error
/// measured on a uniform 10^4-point grid.
pub fn chebyshev_fit<F>(
    f: F,
    degree: usize,
    ellipse: Option<Ellipse>,
    description: &str,
) -> Result<ChebyshevApprox>
where
    F: Fn(f64) -> Complex64,
{
    let coeffs = fit_coefficients(&f, degree)?;
    let (certified_bound, bound_kind) = match ellipse {
        Some(e) => (
            bernstein_bound(e.r, e.modulus, degree) + rounding_allowance(&coeffs),
            BoundKind::Bernstein {
                r: e.r,
                modulus: e.modulus,
            },
        ),
        None => (
            measured_error(&coeffs, &f, GRID_POINTS),
            BoundKind::Measured,
        ),
    };
    Ok(ChebyshevApprox {
        coeffs,
        target: Target::Custom(description.to_string()),
        certified_bound,
        bound_kind,
    })
}

/// Floating-point allowance added to Bernstein certificates once the
/// analytic term drops below machine precision: 4(d+1)·ε_mach·Σ|a_k|.
pub fn rounding_allowance(coeffs: &[Complex64]) -> f64 {
    let l1: f64 = coeffs.iter().map(|a| a.norm()).sum();
    4.0 * coeffs.len() as f64 * f64::EPSILON * l1.max(1.0)
}

/// max_x |p(x) − f(x)| over `points` uniformly spaced x in [−1, 1].
pub fn measured_error<F>(coeffs: &[Complex64], f: F, points: usize) -> f64
where
    F: Fn(f64) -> Complex64,
{
    uniform_grid(points)
        .map(|x| (clenshaw(coeffs, x) - f(x)).norm())
        .fold(0.0, f64::max)
}

pub fn uniform_grid(points: usize) -> impl Iterator<Item = f64> {
    let points = points.max(2);
    (0..points).map(move |k| -1.0 + 2.0 * k as f64 / (points - 1) as f64)
}

/// max |p| over max(2(d+1), 4096) Chebyshev nodes and the two endpoints.
pub fn max_abs_on_grid(coeffs: &[Complex64]) -> f64 {
    let m = (2 * coeffs.len()).max(4096);
    let at_nodes = dct::values_at_nodes(coeffs, m)
        .iter()
        .fold(0.0_f64, |acc, v| acc.max(v.norm()));
    let at_one: Complex64 = coeffs.iter().sum();
    let at_minus_one: Complex64 = coeffs
        .iter()
        .enumerate()
        .map(|(k, a)| if k % 2 == 0 { *a } else { -a })
        .sum();
    at_nodes.max(at_one.norm()).max(at_minus_one.norm())
}

/// 1/(1 + e^{y}) without overflow.
pub fn logistic(y: f64) -> f64 {
    if y > 0.0 {
        let e = (-y).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + y.exp())
    }
}

/// log(1 + e^{y}) without overflow.
pub fn softplus(y: f64) -> f64 {
    y.max(0.0) + (-y.abs()).exp().ln_1p()
}

/// (η/8)·[(1 − f)/(iη − (sx + ω)) − f/(iη + (sx + ω))] with f = 1/(1 + e^{βsx}).
pub fn greens_scalar(beta: f64, s: f64, eta: f64, omega: f64, x: f64) -> Complex64 {
    let f = logistic(beta * s * x);
    let e = s * x + omega;
    let g1 = Complex64::new(-e, eta).inv();
    let g2 = -Complex64::new(e, eta).inv();
    (g1 * (1.0 - f) + g2 * f) * (eta / 8.0)
}
