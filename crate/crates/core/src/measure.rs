//! Real SO(3) factor of the connection measure and the one-dimensional
//! reduction of the scalar generating function.
//!
//! Points of the group are parameterized by `r = phi sin(phi)/phi`,
//! `|r| <= 1`, with density `(1/sqrt(1 - r^2) - 1) / (8 pi^2 r^2)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::quadrature::{self, QuadratureError, QuadratureSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("rotation vector must satisfy |r| < 1, got |r| = {0}")]
    OutsideGroup(f64),
    #[error("argument {0} is outside the supported domain")]
    Domain(f64),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationVector([f64; 3]);

impl RotationVector {
    pub fn new(r: [f64; 3]) -> Result<Self, MeasureError> {
        let v = Self(r);
        let norm = v.norm_sqr().sqrt();
        if !(norm <= 1.0) {
            return Err(MeasureError::OutsideGroup(norm));
        }
        Ok(v)
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }
}

/// `(1/sqrt(1 - s) - 1)/(8 pi^2 s)` at `s = r^2`, written without the
/// cancellation at small `s`.
fn density_of_square(s: f64) -> f64 {
    let root = (1.0 - s).sqrt();
    1.0 / (8.0 * PI * PI * root * (1.0 + root))
}

pub fn dr_density(r: &RotationVector) -> Result<f64, MeasureError> {
    let s = r.norm_sqr();
    if s >= 1.0 {
        return Err(MeasureError::OutsideGroup(s.sqrt()));
    }
    Ok(density_of_square(s))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureNorm {
    pub quadrature: f64,
    pub error: f64,
    /// `(pi/2 - 1) / (2 pi)`
    pub analytic: f64,
}

/// Integral of the density over the unit ball,
/// `(1/2pi) \int_0^1 (1/sqrt(1-rho^2) - 1) d rho`, evaluated after
/// `rho = sin theta` to remove the endpoint singularity.
pub fn measure_norm(spec: &QuadratureSpec) -> Result<MeasureNorm, MeasureError> {
    let (value, error) = quadrature::integrate_real(|t| 1.0 - t.cos(), 0.0, PI / 2.0, spec)?;
    Ok(MeasureNorm {
        quadrature: value / (2.0 * PI),
        error: error / (2.0 * PI),
        analytic: (PI / 2.0 - 1.0) / (2.0 * PI),
    })
}

/// `2 pi ln((1 + sqrt(1 - z^2)) / 2)` on principal branches.
pub fn i_tilde_closed(z: Complex64) -> Complex64 {
    let root = (Complex64::new(1.0, 0.0) - z * z).sqrt();
    ((root + 1.0) / 2.0).ln() * (2.0 * PI)
}

/// `-2 pi \int_0^z (1/sqrt(1 - rho^2) - 1) d rho / rho` for `0 < z < 1`.
///
/// This is what remains of the generating function once the `v` integral is
/// done in closed form: for fixed `rho` it equals `-4 pi^2/rho` when
/// `rho < z` and vanishes otherwise. The `rho` integral runs over
/// `theta = arcsin rho`, where the integrand is `(1 - cos t)/sin t = sin t/(1 + cos t)`.
pub fn i_tilde_quadrature(z: f64, spec: &QuadratureSpec) -> Result<f64, MeasureError> {
    if !(z > 0.0 && z < 1.0) {
        if z == 0.0 {
            return Ok(0.0);
        }
        return Err(MeasureError::Domain(z));
    }
    let (value, _) =
        quadrature::integrate_real(|t| t.sin() / (1.0 + t.cos()), 0.0, z.asin(), spec)?;
    Ok(-2.0 * PI * value)
}

/// The reduced integrand `(1/sqrt(1 - rho^2) - 1)/rho` in the original variable.
pub fn reduced_integrand(rho: f64) -> f64 {
    if rho == 0.0 {
        return 0.0;
    }
    let s = rho * rho;
    let root = (1.0 - s).sqrt();
    rho / (root * (1.0 + root))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_examples() {
        let zero = RotationVector::new([0.0; 3]).unwrap();
        assert!((dr_density(&zero).unwrap() - 1.0 / (16.0 * PI * PI)).abs() < 1e-18);
        let r = RotationVector::new([0.6, 0.0, 0.0]).unwrap();
        let expected = 0.25 / (2.88 * PI * PI);
        assert!((dr_density(&r).unwrap() - expected).abs() < 1e-15);
        let r = RotationVector::new([0.0, 0.6, 0.8]).unwrap();
        assert!(matches!(dr_density(&r), Err(MeasureError::OutsideGroup(_))));
        assert!(RotationVector::new([1.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn density_nonnegative() {
        for i in 0..1000 {
            let x = i as f64 / 1000.0;
            let r = RotationVector::new([x * 0.6, x * 0.8, 0.0]).unwrap();
            assert!(dr_density(&r).unwrap() >= 0.0);
        }
    }

    #[test]
    fn norm_matches_analytic() {
        let m = measure_norm(&QuadratureSpec::default()).unwrap();
        assert!((m.quadrature - m.analytic).abs() < 1e-10);
        assert!((m.analytic - 0.090_845_1).abs() < 1e-7);
        assert!(m.quadrature > 0.0 && m.quadrature < 1.0);
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(
            i_tilde_closed(Complex64::new(0.0, 0.0)),
            Complex64::new(0.0, 0.0)
        );
        let one = i_tilde_closed(Complex64::new(1.0, 0.0));
        assert!((one.re + 2.0 * PI * 2f64.ln()).abs() < 1e-14);
        let z = 1e-2;
        let small = i_tilde_closed(Complex64::new(z, 0.0)).re;
        let series = -PI * z * z / 2.0 - 3.0 * PI * z.powi(4) / 16.0;
        assert!((small - series).abs() < 1e-11);
    }

    #[test]
    fn quadrature_reduction() {
        let spec = QuadratureSpec::default();
        for z in [0.5, 0.9] {
            let q = i_tilde_quadrature(z, &spec).unwrap();
            assert!((q - i_tilde_closed(Complex64::new(z, 0.0)).re).abs() < 1e-10);
        }
        assert_eq!(i_tilde_quadrature(0.0, &spec).unwrap(), 0.0);
        assert!(i_tilde_quadrature(1.0, &spec).is_err());
    }

    #[test]
    fn reduced_integrand_regular() {
        let mut last = 0.0;
        for i in 1..=990 {
            let v = reduced_integrand(i as f64 / 1000.0);
            assert!(v.is_finite() && v >= last);
            last = v;
        }
        // integrating in the original variable away from rho = 1 converges cleanly
        let (v, _) =
            quadrature::integrate_real(reduced_integrand, 0.0, 0.99, &QuadratureSpec::default())
                .unwrap();
        let expected = -i_tilde_closed(Complex64::new(0.99, 0.0)).re / (2.0 * PI);
        assert!((v - expected).abs() < 1e-10);
    }
}
