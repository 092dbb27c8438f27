//! Complete elliptic integral of the first kind and Jacobi elliptic functions.
//!
//! Everything here is evaluated with the arithmetic-geometric mean (descending
//! Landen) recursion. The projection only ever needs the parameter `m = 1/2`,
//! but the routines accept any `m` in `[0, 1)` so they can be checked against
//! independent references at other parameters.
//!
//! Conventions follow Abramowitz & Stegun: `m = k²` is the *parameter*, and
//! the complementary parameter is `1 - m`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

/// Default stopping tolerance for the AGM recursion.
pub const DEFAULT_TOL: f64 = f64::EPSILON;

/// Denominators of the complex `cn` formula below this value are treated as a pole.
pub const POLE_THRESHOLD: f64 = 1e-14;

/// The AGM converges quadratically; 40 steps is far beyond anything `f64` needs.
const MAX_AGM_STEPS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum EllipticError {
    #[error("elliptic parameter m = {0} is outside [0, 1)")]
    Domain(f64),
    #[error("stopping tolerance must be positive and finite, got {0}")]
    Tolerance(f64),
    #[error("cn({re} + {im}i) is a pole")]
    Pole { re: f64, im: f64 },
}

/// `sn`, `cn` and `dn` evaluated at the same real argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

fn check_parameter(m: f64) -> Result<(), EllipticError> {
    if (0.0..1.0).contains(&m) {
        Ok(())
    } else {
        Err(EllipticError::Domain(m))
    }
}

fn check_tol(tol: f64) -> Result<(), EllipticError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(EllipticError::Tolerance(tol))
    }
}

/// Complete elliptic integral of the first kind, `K(m) = π / (2·AGM(1, √(1-m)))`.
pub fn quarter_period(m: f64) -> Result<f64, EllipticError> {
    check_parameter(m)?;
    let mut a = 1.0_f64;
    let mut b = (1.0 - m).sqrt();
    for _ in 0..MAX_AGM_STEPS {
        if (a - b).abs() <= DEFAULT_TOL * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    Ok(FRAC_PI_2 / a)
}

/// Jacobi elliptic functions of a real argument.
///
/// Runs the AGM forward until `|c_n| <= tol`, then recovers the amplitude by
/// the backward recurrence `φ_{n-1} = (φ_n + asin(c_n/a_n · sin φ_n)) / 2`.
/// `dn` is taken from `dn² = 1 - m·sn²`, which is positive for real arguments.
pub fn ellipj_real(u: f64, m: f64, tol: f64) -> Result<EllipticTriple, EllipticError> {
    check_parameter(m)?;
    check_tol(tol)?;
    if m == 0.0 {
        let (sn, cn) = u.sin_cos();
        return Ok(EllipticTriple { sn, cn, dn: 1.0 });
    }

    let mut a = [0.0_f64; MAX_AGM_STEPS + 1];
    let mut c = [0.0_f64; MAX_AGM_STEPS + 1];
    a[0] = 1.0;
    c[0] = m.sqrt();
    let mut b = (1.0 - m).sqrt();
    let mut n = 0;
    while c[n].abs() > tol && n < MAX_AGM_STEPS {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = (a[n] * b).sqrt();
        n += 1;
    }

    let mut phi = (1u64 << n) as f64 * a[n] * u;
    for k in (1..=n).rev() {
        phi = 0.5 * (phi + (c[k] / a[k] * phi.sin()).asin());
    }
    let (sn, cn) = phi.sin_cos();
    let dn = (1.0 - m * sn * sn).sqrt();
    Ok(EllipticTriple { sn, cn, dn })
}

/// `cn(u + iv | m)` from real-argument evaluations at `m` and `1 - m`:
///
/// ```text
/// cn(u + iv) = (c·c1 - i·s·d·s1·d1) / (c1² + m·s²·s1²)
/// ```
///
/// where `(s, c, d) = ellipj(u | m)` and `(s1, c1, d1) = ellipj(v | 1 - m)`.
/// A purely real argument short-circuits to the real routine.
pub fn cn_complex(u: f64, v: f64, m: f64, tol: f64) -> Result<Complex64, EllipticError> {
    if !(m > 0.0 && m < 1.0) {
        return Err(EllipticError::Domain(m));
    }
    check_tol(tol)?;
    if v.abs() < tol {
        let t = ellipj_real(u, m, tol)?;
        return Ok(Complex64::new(t.cn, 0.0));
    }
    let EllipticTriple {
        sn: s,
        cn: c,
        dn: d,
    } = ellipj_real(u, m, tol)?;
    let EllipticTriple {
        sn: s1,
        cn: c1,
        dn: d1,
    } = ellipj_real(v, 1.0 - m, tol)?;
    let delta = c1 * c1 + m * s * s * s1 * s1;
    if delta < POLE_THRESHOLD {
        return Err(EllipticError::Pole { re: u, im: v });
    }
    Ok(Complex64::new(c * c1 / delta, -(s * d * s1 * d1) / delta))
}
