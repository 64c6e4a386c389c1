use std::f64::consts::PI;

use num_complex::Complex64;

use super::{
    dct, fit_coefficients, logistic, measured_error, rounding_allowance, softplus, BoundKind,
    ChebyshevApprox, Target, GRID_POINTS,
};
use crate::error::{invalid, Error, Result};

/// Bernstein's estimate 2C r^{−d}/(r − 1) for a target bounded by C on E_r.
pub fn bernstein_bound(r: f64, modulus: f64, degree: usize) -> f64 {
    if r <= 1.0 {
        return f64::INFINITY;
    }
    2.0 * modulus * (-(degree as f64) * r.ln()).exp() / (r - 1.0)
}

/// Closed-form error bound for degree-d Chebyshev approximation of
/// 1/(1 + e^{cx}): (12/d)(c/π)^4 when c ≥ 2π, else (40/d)(c/π)^2.
pub fn fermi_dirac_bound(c: f64, degree: usize) -> f64 {
    let c = c.abs();
    if c == 0.0 {
        return 0.0;
    }
    if degree == 0 {
        return f64::INFINITY;
    }
    fermi_dirac_numerator(c) / degree as f64
}

fn fermi_dirac_numerator(c: f64) -> f64 {
    let ratio = c / PI;
    if c >= 2.0 * PI {
        12.0 * ratio.powi(4)
    } else {
        40.0 * ratio.powi(2)
    }
}

/// Smallest degree whose Fermi-Dirac bound is at most `eps`.
pub fn fermi_dirac_degree(c: f64, eps: f64) -> Result<usize> {
    if !(eps > 0.0) {
        return Err(invalid("eps_PA", format!("must be positive, got {eps}")));
    }
    let d = (fermi_dirac_numerator(c.abs()) / eps).ceil().max(1.0);
    if d > 1e9 {
        return Err(invalid("eps_PA", format!("{eps} would need degree {d:e}")));
    }
    Ok(d as usize)
}

fn check_c(c: f64) -> Result<()> {
    if !c.is_finite() || c < 0.0 {
        return Err(invalid(
            "c",
            format!("must be finite and non-negative, got {c}"),
        ));
    }
    Ok(())
}

/// Degree-d approximation of scale/(1 + e^{cx}) for 0 < scale ≤ 1. The
/// certified bound is the closed-form value for the unscaled function,
/// which dominates every scale up to 1.
pub fn fermi_dirac_scaled(c: f64, degree: usize, scale: f64) -> Result<ChebyshevApprox> {
    check_c(c)?;
    if !(scale > 0.0 && scale <= 1.0) {
        return Err(invalid("scale", format!("must lie in (0, 1], got {scale}")));
    }
    let target = Target::FermiDirac { c, scale };
    let coeffs = fit_coefficients(|x| Complex64::new(scale * logistic(c * x), 0.0), degree)?;
    let (certified_bound, bound_kind) = if c == 0.0 {
        let err = measured_error(&coeffs, |_| Complex64::new(scale / 2.0, 0.0), GRID_POINTS);
        (err, BoundKind::Measured)
    } else {
        let name = if c >= 2.0 * PI {
            "12/d (c/pi)^4"
        } else {
            "40/d (c/pi)^2"
        };
        (
            fermi_dirac_bound(c, degree),
            BoundKind::Analytic(name.to_string()),
        )
    };
    Ok(ChebyshevApprox {
        coeffs,
        target,
        certified_bound,
        bound_kind,
    })
}

/// Degree-d approximation of ¼·1/(1 + e^{cx}), the form whose modulus
/// stays within ½ as block-polynomial application requires.
pub fn fermi_dirac_approx(c: f64, degree: usize) -> Result<ChebyshevApprox> {
    fermi_dirac_scaled(c, degree, 0.25)
}

/// Resolvent error term: (128/d)(s/η)^4 when 2s/η ≥ 1, else (32/d)(s/η)^2.
pub fn resolvent_bound(s: f64, eta: f64, degree: usize) -> f64 {
    if degree == 0 {
        return f64::INFINITY;
    }
    resolvent_numerator(s, eta) / degree as f64
}

fn resolvent_numerator(s: f64, eta: f64) -> f64 {
    let ratio = s / eta;
    if 2.0 * s / eta >= 1.0 {
        128.0 * ratio.powi(4)
    } else {
        32.0 * ratio.powi(2)
    }
}

/// Components of the Green's-function approximation bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreensBound {
    /// Closed-form Fermi term with c = βs.
    pub fermi: f64,
    /// Closed-form resolvent term.
    pub resolvent: f64,
    /// Direct Bernstein estimate of the resolvent contribution for the
    /// product construction, with C = 4/(3η) on E_r, r = √((η/2s)² + 1).
    pub resolvent_direct: f64,
}

impl GreensBound {
    pub fn total(&self) -> f64 {
        self.fermi + self.resolvent.max(self.resolvent_direct)
    }
}

/// Bound terms for the degree-d Green's-function polynomial.
pub fn greens_bound_terms(beta: f64, s: f64, eta: f64, degree: usize) -> GreensBound {
    let half = degree / 2;
    let fermi = fermi_dirac_bound(beta * s, degree);
    let r = ((eta / (2.0 * s)).powi(2) + 1.0).sqrt();
    let modulus = 4.0 / (3.0 * eta);
    let per_branch = bernstein_bound(r, modulus, half);
    let fermi_half = fermi_dirac_bound(beta * s, half);
    let resolvent_direct = eta / 8.0 * (1.0 + fermi_half) * 2.0 * per_branch;
    GreensBound {
        fermi,
        resolvent: resolvent_bound(s, eta, degree),
        resolvent_direct,
    }
}

/// Smallest even degree whose Green's bound is at most `eps`.
pub fn greens_degree(beta: f64, s: f64, eta: f64, eps: f64) -> Result<usize> {
    if !(eps > 0.0) {
        return Err(invalid("eps_PA", format!("must be positive, got {eps}")));
    }
    let numerator = if beta * s == 0.0 {
        0.0
    } else {
        fermi_dirac_numerator(beta * s)
    } + resolvent_numerator(s, eta);
    let mut d = (numerator / eps).ceil().max(2.0);
    if d > 1e9 {
        return Err(invalid("eps_PA", format!("{eps} would need degree {d:e}")));
    }
    if d as usize % 2 == 1 {
        d += 1.0;
    }
    let mut d = d as usize;
    while greens_bound_terms(beta, s, eta, d).total() > eps {
        d += 2;
    }
    Ok(d)
}

/// Even-degree approximation of (η/8)·g(x), built as the product of the
/// degree-d/2 Chebyshev approximants of the Fermi factor and of the two
/// resolvent branches g₁ = 1/(iη − (sx + ω)), g₂ = −1/(iη + (sx + ω)).
pub fn greens_scalar_approx(
    beta: f64,
    s: f64,
    eta: f64,
    omega: f64,
    degree: usize,
) -> Result<ChebyshevApprox> {
    if degree % 2 != 0 {
        return Err(invalid(
            "d",
            format!("Green's degree must be even, got {degree}"),
        ));
    }
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(invalid("eta", format!("must be positive, got {eta}")));
    }
    if !(s > 0.0) {
        return Err(invalid("s", format!("must be positive, got {s}")));
    }
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(invalid(
            "beta",
            format!("must be finite and non-negative, got {beta}"),
        ));
    }
    if !omega.is_finite() {
        return Err(invalid("omega", "must be finite"));
    }
    let half = degree / 2;
    let c = beta * s;
    let f = fit_coefficients(|x| Complex64::new(logistic(c * x), 0.0), half)?;
    let g1 = fit_coefficients(|x| Complex64::new(-(s * x + omega), eta).inv(), half)?;
    let g2 = fit_coefficients(|x| -Complex64::new(s * x + omega, eta).inv(), half)?;

    let m = degree + 1;
    let fv = dct::values_at_nodes(&f, m);
    let g1v = dct::values_at_nodes(&g1, m);
    let g2v = dct::values_at_nodes(&g2, m);
    let one = Complex64::new(1.0, 0.0);
    let product: Vec<Complex64> = (0..m)
        .map(|j| (g1v[j] * (one - fv[j]) + g2v[j] * fv[j]) * (eta / 8.0))
        .collect();
    let coeffs = dct::coefficients_from_nodes(&product);

    let terms = greens_bound_terms(beta, s, eta, degree);
    Ok(ChebyshevApprox {
        coeffs,
        target: Target::Greens {
            beta,
            s,
            eta,
            omega,
        },
        certified_bound: terms.total(),
        bound_kind: BoundKind::Analytic("fermi + resolvent".to_string()),
    })
}

/// Ellipse parameter and modulus bound for log(1 + e^{−cx}).
///
/// With r = √((π/c)² + 1) every point of E_r has |Im z| ≤ π/(2c), so
/// Re(1 + e^{−cz}) ≥ 1 and |log(1 + e^{−cz})| ≤ log(1 + e^{cρ}) + π/2 where
/// ρ = (r + 1/r)/2 is the semi-major axis.
pub fn log_fermi_ellipse(c: f64) -> (f64, f64) {
    let r = ((PI / c).powi(2) + 1.0).sqrt();
    let rho = 0.5 * (r + 1.0 / r);
    (r, softplus(c * rho) + PI / 2.0)
}

/// Degree-d approximation of scale·log(1 + e^{−βs x}).
pub fn log_fermi_approx(beta: f64, s: f64, degree: usize) -> Result<ChebyshevApprox> {
    log_fermi_scaled(beta, s, degree, 1.0)
}

pub(crate) fn log_fermi_scaled(
    beta: f64,
    s: f64,
    degree: usize,
    scale: f64,
) -> Result<ChebyshevApprox> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(invalid(
            "beta",
            format!("must be finite and non-negative, got {beta}"),
        ));
    }
    if !(s > 0.0) {
        return Err(invalid("s", format!("must be positive, got {s}")));
    }
    let c = beta * s;
    let target = Target::LogFermi { beta, s, scale };
    let coeffs = fit_coefficients(|x| Complex64::new(scale * softplus(-c * x), 0.0), degree)?;
    if coeffs.iter().any(|a| !a.re.is_finite()) {
        return Err(Error::NonFinite { x: f64::NAN });
    }
    let (certified_bound, bound_kind) = if c == 0.0 {
        let err = measured_error(
            &coeffs,
            |_| Complex64::new(scale * std::f64::consts::LN_2, 0.0),
            GRID_POINTS,
        );
        (err, BoundKind::Measured)
    } else {
        let (r, modulus) = log_fermi_ellipse(c);
        let modulus = modulus * scale;
        (
            bernstein_bound(r, modulus, degree) + rounding_allowance(&coeffs),
            BoundKind::Bernstein { r, modulus },
        )
    };
    Ok(ChebyshevApprox {
        coeffs,
        target,
        certified_bound,
        bound_kind,
    })
}
