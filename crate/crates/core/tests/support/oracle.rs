//! Reference implementations that share no code with the library: Jacobi
//! functions by numerically inverting the incomplete elliptic integral, and a
//! finite-difference Jacobian checker.

use std::f64::consts::PI;

/// Gauss-Legendre nodes and weights on [-1, 1], found by Newton iteration on
/// the Legendre polynomial.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

pub struct EllipticOracle {
    m: f64,
    rule: Vec<(f64, f64)>,
    panels: usize,
}

impl EllipticOracle {
    pub fn new(m: f64) -> Self {
        Self {
            m,
            rule: gauss_legendre(16),
            panels: 8,
        }
    }

    fn integrand(&self, theta: f64) -> f64 {
        1.0 / (1.0 - self.m * theta.sin().powi(2)).sqrt()
    }

    /// Incomplete integral of the first kind F(phi | m), composite quadrature.
    pub fn f(&self, phi: f64) -> f64 {
        let h = phi / self.panels as f64;
        let mut sum = 0.0;
        for p in 0..self.panels {
            let mid = (p as f64 + 0.5) * h;
            for &(x, w) in &self.rule {
                sum += w * self.integrand(mid + 0.5 * h * x);
            }
        }
        0.5 * h * sum
    }

    pub fn k(&self) -> f64 {
        self.f(PI / 2.0)
    }

    /// Amplitude phi with F(phi | m) = u.
    pub fn amplitude(&self, u: f64) -> f64 {
        let mut phi = u * PI / (2.0 * self.k());
        for _ in 0..60 {
            let step = (self.f(phi) - u) / self.integrand(phi);
            phi -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        phi
    }

    /// (sn, cn, dn)(u | m).
    pub fn ellipj(&self, u: f64) -> (f64, f64, f64) {
        let phi = self.amplitude(u);
        let s = phi.sin();
        (s, phi.cos(), (1.0 - self.m * s * s).sqrt())
    }
}

/// Ratio of the singular values of a 2x2 matrix; 1 for a similarity.
pub fn singular_value_ratio(j: [[f64; 2]; 2]) -> f64 {
    let e = j[0][0].powi(2) + j[0][1].powi(2) + j[1][0].powi(2) + j[1][1].powi(2);
    let det = (j[0][0] * j[1][1] - j[0][1] * j[1][0]).abs();
    let disc = (e * e - 4.0 * det * det).max(0.0).sqrt();
    let hi = ((e + disc) / 2.0).sqrt();
    let lo = ((e - disc) / 2.0).max(0.0).sqrt();
    if lo == 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// Finite-difference Jacobian of `f` at `(x, y)` inside `[-1, 1]²`, centred
/// where the stencil fits and one-sided against the boundary.
pub fn jacobian(
    f: &dyn Fn(f64, f64) -> Option<(f64, f64)>,
    x: f64,
    y: f64,
    h: f64,
) -> Option<[[f64; 2]; 2]> {
    let partial = |dx: f64, dy: f64| -> Option<(f64, f64)> {
        let fwd_ok = (x + dx).abs() <= 1.0 && (y + dy).abs() <= 1.0;
        let back_ok = (x - dx).abs() <= 1.0 && (y - dy).abs() <= 1.0;
        let (a, b, span) = match (back_ok, fwd_ok) {
            (true, true) => (f(x - dx, y - dy)?, f(x + dx, y + dy)?, 2.0 * h),
            (false, true) => (f(x, y)?, f(x + dx, y + dy)?, h),
            (true, false) => (f(x - dx, y - dy)?, f(x, y)?, h),
            (false, false) => return None,
        };
        Some(((b.0 - a.0) / span, (b.1 - a.1) / span))
    };
    let gx = partial(h, 0.0)?;
    let gy = partial(0.0, h)?;
    Some([[gx.0, gy.0], [gx.1, gy.1]])
}
