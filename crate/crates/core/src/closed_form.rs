//! Closed-form area distribution and its linear-variant Bessel counterpart.
//!
//! With `w = sqrt((1/gamma - i)^2 v^2)` on the branch `Re w >= 0` the
//! arcsin-variant density is
//!
//! ```text
//! N = | (w/4) / ((w^2/4 + 1) sinh(pi w / 2)) |^2
//! ```
//!
//! and the linear-variant density is `|Ki1(w/2) / (2 pi (w/2))|^2`. Both are
//! even in `w`. The arcsin form has poles at `v^2 = 4 n^2 (1 + i/gamma)^{-2}`,
//! which never lie on the real axis for finite `gamma`.

use std::cell::Cell;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::moments::Variant;
use crate::quadrature::{self, QuadratureError, QuadratureSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistributionError {
    #[error("gamma must be positive, got {0}")]
    InvalidGamma(f64),
    #[error("v^2 = {vsq} lies within {distance:e} of singular point n = {n}")]
    NearSingularPoint {
        n: u32,
        vsq: Complex64,
        distance: f64,
    },
    #[error("the linear-variant density diverges at v^2 = 0")]
    Divergent,
    #[error("Ki1 needs Re x > 0, got x = {0}")]
    Ki1Domain(Complex64),
    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: f64, hi: f64 },
    #[error("fit failed: {0}")]
    Fit(String),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Squared complexified area. Real values are physical: positive is
/// timelike, negative spacelike.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaSquared {
    pub vsq: Complex64,
}

impl AreaSquared {
    pub fn new(vsq: Complex64) -> Self {
        Self { vsq }
    }

    pub fn real(vsq: f64) -> Self {
        Self::new(Complex64::new(vsq, 0.0))
    }

    /// `|A| = sqrt(|v^2|)`.
    pub fn area_abs(&self) -> f64 {
        self.vsq.norm().sqrt()
    }

    pub fn is_physical(&self) -> bool {
        self.vsq.im == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub n: u32,
    pub location: Complex64,
    /// Pole order of the holomorphic factor: 2 for `n = 1`, 1 otherwise.
    pub order: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistributionSample {
    pub vsq: f64,
    pub n_value: f64,
    /// `(2 pi)^2 N`.
    pub scaled: f64,
}

impl DistributionSample {
    pub fn new(vsq: f64, n_value: f64) -> Self {
        Self {
            vsq,
            n_value,
            scaled: 4.0 * PI * PI * n_value,
        }
    }
}

/// Relative distance to a singular point below which evaluation is refused.
pub const SINGULAR_PROXIMITY: f64 = 1e-9;

/// `sqrt((1/gamma - i)^2 vsq)` with `Re w >= 0`, and `Im w >= 0` when `Re w = 0`.
/// `gamma = inf` is accepted as the limiting case.
pub fn branch_w(vsq: Complex64, gamma: f64) -> Complex64 {
    let w = Complex64::new(1.0 / gamma, -1.0) * vsq.sqrt();
    if w.re < 0.0 || (w.re == 0.0 && w.im < 0.0) {
        -w
    } else {
        w
    }
}

fn check_gamma(gamma: f64) -> Result<(), DistributionError> {
    if gamma > 0.0 && !gamma.is_nan() {
        Ok(())
    } else {
        Err(DistributionError::InvalidGamma(gamma))
    }
}

/// `4 n^2 gamma^2 / (gamma + i)^2`.
pub fn singular_location(n: u32, gamma: f64) -> Complex64 {
    let d = Complex64::new(gamma, 1.0);
    let n = n as f64;
    Complex64::new(4.0 * n * n * gamma * gamma, 0.0) / (d * d)
}

pub fn singular_points(gamma: f64, n_max: u32) -> Result<Vec<SingularPoint>, DistributionError> {
    check_gamma(gamma)?;
    Ok((1..=n_max)
        .map(|n| SingularPoint {
            n,
            location: singular_location(n, gamma),
            order: if n == 1 { 2 } else { 1 },
        })
        .collect())
}

fn check_singular_proximity(vsq: Complex64, gamma: f64) -> Result<(), DistributionError> {
    let first = singular_location(1, gamma).norm();
    let n_hi = (vsq.norm() / first).sqrt().ceil() as u32 + 1;
    for n in 1..=n_hi.max(1) {
        let loc = singular_location(n, gamma);
        let distance = (vsq - loc).norm();
        if distance < SINGULAR_PROXIMITY * loc.norm() {
            return Err(DistributionError::NearSingularPoint { n, vsq, distance });
        }
    }
    Ok(())
}

/// `ln |sinh z|^2`, computed from `|Re z|` and `|Im z|` so that the result is
/// even in `z` bit for bit.
fn ln_sinh_norm_sqr(z: Complex64) -> f64 {
    let x = z.re.abs();
    let y = z.im.abs();
    if x > 300.0 {
        // sinh^2 x = e^{2x}/4 (1 - e^{-2x})^2 and sin^2 y <= 1 are both
        // invisible at this size.
        2.0 * x - 4f64.ln()
    } else {
        let s = x.sinh();
        let t = y.sin();
        (s * s + t * t).ln()
    }
}

/// `ln N` of the arcsin-variant density for a given branch value `w`.
pub fn ln_distribution_arcsin_w(w: Complex64) -> f64 {
    let w2 = w * w;
    let rational = (w2 / 4.0 + 1.0).norm_sqr().ln();
    let z = w * (PI / 2.0);
    if z.norm() < 1e-4 {
        // |w/4|^2 / |sinh z|^2 = 1/(4 pi^2) |z / sinh z|^2 and sinh z / z = 1 + z^2/6 + ...
        let ratio = (z * z / 6.0 + 1.0).norm_sqr().ln();
        return -(4.0 * PI * PI).ln() - ratio - rational;
    }
    (w.norm_sqr() / 16.0).ln() - rational - ln_sinh_norm_sqr(z)
}

/// Arcsin-variant density from the branch value `w`; even in `w`.
pub fn distribution_arcsin_w(w: Complex64) -> f64 {
    ln_distribution_arcsin_w(w).exp()
}

pub fn distribution_arcsin(vsq: Complex64, gamma: f64) -> Result<f64, DistributionError> {
    check_gamma(gamma)?;
    check_singular_proximity(vsq, gamma)?;
    Ok(distribution_arcsin_w(branch_w(vsq, gamma)))
}

/// `ln N` of the linear-variant density.
pub fn ln_distribution_linear(vsq: Complex64, gamma: f64) -> Result<f64, DistributionError> {
    check_gamma(gamma)?;
    if vsq == Complex64::new(0.0, 0.0) {
        return Err(DistributionError::Divergent);
    }
    let x = branch_w(vsq, gamma) / 2.0;
    let scaled = ki1_scaled(x)?;
    // Ki1(x) = e^{-x} S(x)
    Ok(2.0 * (scaled.norm().ln() - x.re) - 2.0 * (2.0 * PI * x.norm()).ln())
}

pub fn distribution_linear(vsq: Complex64, gamma: f64) -> Result<f64, DistributionError> {
    ln_distribution_linear(vsq, gamma).map(f64::exp)
}

pub fn distribution(
    vsq: Complex64,
    gamma: f64,
    variant: Variant,
) -> Result<f64, DistributionError> {
    match variant {
        Variant::Arcsin => distribution_arcsin(vsq, gamma),
        Variant::Linear => distribution_linear(vsq, gamma),
    }
}

pub fn ln_distribution(
    vsq: Complex64,
    gamma: f64,
    variant: Variant,
) -> Result<f64, DistributionError> {
    match variant {
        Variant::Arcsin => {
            check_gamma(gamma)?;
            check_singular_proximity(vsq, gamma)?;
            Ok(ln_distribution_arcsin_w(branch_w(vsq, gamma)))
        }
        Variant::Linear => ln_distribution_linear(vsq, gamma),
    }
}

/// `z / sinh(pi z)`, with the `z -> 0` limit `1/pi` and no overflow for large
/// `|Re z|`.
pub fn z_over_sinh_pi_z(z: Complex64) -> Complex64 {
    // even function; work with Re z >= 0
    let z = if z.re < 0.0 { -z } else { z };
    let pz = z * PI;
    if pz.norm() < 1e-4 {
        let p2 = pz * pz;
        return (Complex64::new(1.0, 0.0) - p2 / 6.0 + p2 * p2 * (7.0 / 360.0)) / PI;
    }
    if pz.re > 20.0 {
        // 2 z e^{-pi z} / (1 - e^{-2 pi z})
        let e = (-pz).exp();
        return z * e * 2.0 / (Complex64::new(1.0, 0.0) - e * e);
    }
    z / pz.sinh()
}

const TAIL_LOG: f64 = 41.446_531_673_892_82; // ln(1e18)

fn ki1_spec() -> QuadratureSpec {
    QuadratureSpec::default()
        .with_abs_tol(1e-16)
        .with_rel_tol(1e-13)
}

/// `S(x) = \int_0^\infty e^{-x (cosh t - 1)} / cosh t dt`, so that
/// `Ki1(x) = e^{-x} S(x)`.
pub fn ki1_scaled(x: Complex64) -> Result<Complex64, DistributionError> {
    if !(x.re > 0.0) {
        return Err(DistributionError::Ki1Domain(x));
    }
    // e^{-Re x (cosh T - 1)} = 1e-18, with cosh T - 1 = 2 sinh^2(T/2)
    let t_max = 2.0 * (TAIL_LOG / (2.0 * x.re)).sqrt().asinh();
    let integrand = |t: f64| {
        let s = (0.5 * t).sinh();
        (-x * (2.0 * s * s)).exp() / t.cosh()
    };
    Ok(quadrature::integrate(integrand, 0.0, t_max, &ki1_spec())?.value)
}

/// Integrated Bessel function `Ki1(x) = \int_0^\infty e^{-x cosh t}/cosh t dt`
/// for `Re x > 0`.
pub fn ki1(x: Complex64) -> Result<Complex64, DistributionError> {
    Ok(ki1_scaled(x)? * (-x).exp())
}

/// `e^{z} K0(z) = \int_0^\infty e^{-z (cosh t - 1)} dt` for `Re z > 0`.
pub fn k0_scaled(z: Complex64) -> Result<Complex64, DistributionError> {
    if !(z.re > 0.0) {
        return Err(DistributionError::Ki1Domain(z));
    }
    let t_max = 2.0 * (TAIL_LOG / (2.0 * z.re)).sqrt().asinh();
    let integrand = |t: f64| {
        let s = (0.5 * t).sinh();
        (-z * (2.0 * s * s)).exp()
    };
    Ok(quadrature::integrate(integrand, 0.0, t_max, &ki1_spec())?.value)
}

/// `Ki1(x) = \int_x^\infty K0(u) du` along the ray `u = x s`, `s >= 1`.
/// Independent of [`ki1`]: it nests a `K0` quadrature inside the ray integral.
pub fn ki1_via_k0(x: Complex64) -> Result<Complex64, DistributionError> {
    if !(x.re > 0.0) {
        return Err(DistributionError::Ki1Domain(x));
    }
    let failure = Cell::new(None);
    // x \int_0^\infty e^{-x u} [e^{x(1+u)} K0(x(1+u))] du, times e^{-x}
    let integrand = |u: f64| match k0_scaled(x * (1.0 + u)) {
        Ok(k) => (-x * u).exp() * k,
        Err(e) => {
            failure.set(Some(e));
            Complex64::new(f64::NAN, 0.0)
        }
    };
    let outer = quadrature::integrate(integrand, 0.0, f64::INFINITY, &ki1_spec());
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(outer?.value * x * (-x).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalMaximum {
    pub vsq: f64,
    pub n_value: f64,
}

pub const DEFAULT_SCAN_SAMPLES: usize = 4001;

pub fn local_maxima(
    gamma: f64,
    vsq_lo: f64,
    vsq_hi: f64,
    variant: Variant,
) -> Result<Vec<LocalMaximum>, DistributionError> {
    local_maxima_with(gamma, vsq_lo, vsq_hi, variant, DEFAULT_SCAN_SAMPLES)
}

/// Interior local maxima of the density on real `v^2`: grid scan, then
/// golden-section refinement to `1e-8` in `v^2`.
pub fn local_maxima_with(
    gamma: f64,
    vsq_lo: f64,
    vsq_hi: f64,
    variant: Variant,
    samples: usize,
) -> Result<Vec<LocalMaximum>, DistributionError> {
    check_gamma(gamma)?;
    if !(vsq_lo < vsq_hi) || samples < 3 {
        return Err(DistributionError::InvalidRange {
            lo: vsq_lo,
            hi: vsq_hi,
        });
    }
    // The linear density diverges at the origin; that is not an interior maximum.
    let eval = |vsq: f64| -> Result<f64, DistributionError> {
        match distribution(Complex64::new(vsq, 0.0), gamma, variant) {
            Err(DistributionError::Divergent) => Ok(f64::NAN),
            other => other,
        }
    };
    let step = (vsq_hi - vsq_lo) / (samples - 1) as f64;
    let grid: Vec<f64> = (0..samples).map(|i| vsq_lo + step * i as f64).collect();
    let values = grid
        .iter()
        .map(|&x| eval(x))
        .collect::<Result<Vec<_>, _>>()?;

    let mut maxima = Vec::new();
    for i in 1..samples - 1 {
        let (l, m, r) = (values[i - 1], values[i], values[i + 1]);
        if l < m && m >= r {
            let vsq = golden_max(
                |x| eval(x).unwrap_or(f64::NAN),
                grid[i - 1],
                grid[i + 1],
                1e-8,
            );
            maxima.push(LocalMaximum {
                vsq,
                n_value: eval(vsq)?,
            });
        }
    }
    Ok(maxima)
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
        if b - a <= f64::EPSILON * a.abs().max(b.abs()) {
            break;
        }
    }
    0.5 * (a + b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    /// `v^2 < 0`
    Spacelike,
    /// `v^2 > 0`
    Timelike,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// Fitted exponential rate `r` in `N ~ |A|^{-p} e^{-r |A|}`.
    pub fitted: f64,
    pub theoretical: f64,
    /// Fitted power `p` of the algebraic prefactor.
    pub prefactor_power: f64,
    pub window: (f64, f64),
    /// True when the window had to shrink because `N` underflowed.
    pub shrunk: bool,
}

impl DecayFit {
    pub fn relative_error(&self) -> f64 {
        (self.fitted - self.theoretical).abs() / self.theoretical
    }
}

pub fn theoretical_rate(gamma: f64, region: Region, variant: Variant) -> f64 {
    let base = match variant {
        Variant::Arcsin => PI,
        Variant::Linear => 1.0,
    };
    match region {
        Region::Spacelike => base,
        Region::Timelike => base / gamma,
    }
}

pub const DEFAULT_DECAY_WINDOW: (f64, f64) = (10.0, 30.0);
const DECAY_SAMPLES: usize = 81;
const UNDERFLOW: f64 = 1e-300;

pub fn decay_rate(
    gamma: f64,
    region: Region,
    variant: Variant,
) -> Result<DecayFit, DistributionError> {
    decay_rate_with(gamma, region, variant, DEFAULT_DECAY_WINDOW)
}

/// Least-squares fit of `-ln N = r |A| + p ln |A| + c` over `|A|` in `window`.
///
/// If `N` drops below `1e-300` inside the window, the window is scaled down
/// until it does not and `shrunk` is set.
pub fn decay_rate_with(
    gamma: f64,
    region: Region,
    variant: Variant,
    window: (f64, f64),
) -> Result<DecayFit, DistributionError> {
    check_gamma(gamma)?;
    let (mut lo, mut hi) = window;
    if !(lo > 0.0 && lo < hi) {
        return Err(DistributionError::InvalidRange { lo, hi });
    }
    let ln_n = |area: f64| {
        let vsq = match region {
            Region::Spacelike => -area * area,
            Region::Timelike => area * area,
        };
        ln_distribution(Complex64::new(vsq, 0.0), gamma, variant)
    };
    let mut shrunk = false;
    for _ in 0..200 {
        if ln_n(hi)? >= UNDERFLOW.ln() {
            break;
        }
        shrunk = true;
        lo *= 0.9;
        hi *= 0.9;
    }

    let areas: Vec<f64> = (0..DECAY_SAMPLES)
        .map(|i| lo + (hi - lo) * i as f64 / (DECAY_SAMPLES - 1) as f64)
        .collect();
    let targets = areas
        .iter()
        .map(|&a| ln_n(a).map(|v| -v))
        .collect::<Result<Vec<_>, _>>()?;
    let design = DMatrix::from_fn(areas.len(), 3, |i, j| match j {
        0 => areas[i],
        1 => areas[i].ln(),
        _ => 1.0,
    });
    let solution = design
        .svd(true, true)
        .solve(&DVector::from_vec(targets), 1e-14)
        .map_err(|e| DistributionError::Fit(e.to_string()))?;
    Ok(DecayFit {
        fitted: solution[0],
        theoretical: theoretical_rate(gamma, region, variant),
        prefactor_power: solution[1],
        window: (lo, hi),
        shrunk,
    })
}
