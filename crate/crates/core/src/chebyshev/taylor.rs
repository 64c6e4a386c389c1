use num_complex::Complex64;

/// Truncated Taylor series Σ_{k≤K} (itx)^k/k! of e^{itx} in the monomial basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorPoly {
    pub t: f64,
    pub order: usize,
    /// Monomial coefficients (it)^k/k!, lowest order first.
    pub coeffs: Vec<Complex64>,
    /// (|t|/√K)^{K+1}, the big-O rate instantiated with constant 1.
    pub instantiated_bound: f64,
    /// Lagrange remainder |t|^{K+1}/(K+1)!, a rigorous bound on [−1, 1].
    pub lagrange_bound: f64,
}

impl TaylorPoly {
    /// Horner evaluation at x.
    pub fn eval(&self, x: f64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, a| acc * x + a)
    }

    /// Sup deviation from e^{itx} on a uniform grid over [−1, 1].
    pub fn measured_error(&self, points: usize) -> f64 {
        super::uniform_grid(points)
            .map(|x| (self.eval(x) - Complex64::from_polar(1.0, self.t * x)).norm())
            .fold(0.0, f64::max)
    }
}

pub fn exp_taylor(t: f64, order: usize) -> TaylorPoly {
    let mut coeffs = Vec::with_capacity(order + 1);
    let it = Complex64::new(0.0, t);
    let mut term = Complex64::new(1.0, 0.0);
    coeffs.push(term);
    for k in 1..=order {
        term = term * it / k as f64;
        coeffs.push(term);
    }
    let k = order as f64;
    let instantiated_bound = (t.abs() / k.max(1.0).sqrt()).powf(k + 1.0);
    // |t|^{K+1}/(K+1)! accumulated as a product to stay finite
    let lagrange_bound = (1..=order + 1).fold(1.0, |acc, j| acc * t.abs() / j as f64);
    TaylorPoly {
        t,
        order,
        coeffs,
        instantiated_bound,
        lagrange_bound,
    }
}
