//! Scalar moments `N(v^{2l})` of the area distribution.
//!
//! With the rescaling factor `c = 1 + i/gamma` the moment is
//!
//! ```text
//! N(v^{2l}) = pi (-1)^l (2 d/dh)^{2l+2} [ 2 z'(h) ln((1 + sqrt(1 - z^2)) / 2) ]_{h=0}
//! ```
//!
//! with `z = sin(h/c)` for the arcsin variant and `z = h/c` for the linear
//! one. Substituting `h -> c h` turns this into
//! `pi (-1)^l (2/c)^{2l+3} F^{(2l+2)}(0)` where `F(h) = cos h ln((1 + cos h)/2)`
//! (arcsin) or `F(h) = ln((1 + sqrt(1 - h^2))/2)` (linear).
//!
//! Four routes are provided and are expected to agree:
//!
//! * [`Route::SeriesUnrescaled`] expands the first form with truncated series.
//! * [`Route::SeriesRescaled`] expands `F` with real series and applies the prefactor.
//! * [`Route::IntegralRep`] (arcsin) writes `F` through the table integral
//!   `T(h) = \int_0^\infty l/(l^2+1) cosh(hl)/sinh(pi l) dl`, using
//!   `F(h) = 2T(h) - h sin h + 1 - ln 4 cos h`, so each derivative becomes a
//!   moment of `l^{2l+3}/((l^2+1) sinh(pi l))` plus elementary terms.
//! * [`Route::RadialQuadrature`] integrates the radial density over real `v`.
//!   For the linear variant the density is `-i Ki1(a v)/(2 pi a v)` with
//!   `a = (1/gamma - i)/2`; for the arcsin variant it is
//!   `(i/2) a v / ((a^2 v^2 + 1) sinh(pi a v))` and the quadrature only sees the
//!   regular part, so the singular contribution from
//!   [`singular_coefficients`] is added back.
//!
//! # Singular part
//!
//! In the integral representation the `ln 4 cos h` and `h sin h` terms produce
//! contributions `a f(x0) + b f'(x0)` with `x0 = 4/c^2` and
//!
//! ```text
//! a = pi (2/c)^3 (ln 4 - 2),    b = -2 pi (2/c)^3 x0,
//! ```
//!
//! independent of `l`. Probes with `f(x0) = f'(x0) = 0` (admissible probes)
//! see only the regular part, which equals the radial integral.
//!
//! # Normalization
//!
//! The factorized six-dimensional moment is `2^{-3} N(f) conj(N(g))`, and the
//! single-factor functional `N(f)` is normalized so that it equals the radial
//! integral `(i/2) \int a v/((a^2 v^2+1) sinh(pi a v)) f(v^2) d^3v` on
//! admissible probes. With that choice `N(1) = pi (1 + i)` at `gamma = 1`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closed_form::{self, DistributionError};
use crate::quadrature::{self, QuadratureError, QuadratureSpec};
use crate::series::{Elementary, SeriesError, TruncatedSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `h(z)` proportional to `arcsin z`.
    Arcsin,
    /// `h(z)` proportional to `z`.
    Linear,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Arcsin => "arcsin",
            Variant::Linear => "linear",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "arcsin" => Ok(Variant::Arcsin),
            "linear" => Ok(Variant::Linear),
            other => Err(format!(
                "unknown variant `{other}` (expected arcsin or linear)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    SeriesUnrescaled,
    SeriesRescaled,
    IntegralRep,
    RadialQuadrature,
}

impl Route {
    pub const ALL: [Route; 4] = [
        Route::SeriesUnrescaled,
        Route::SeriesRescaled,
        Route::IntegralRep,
        Route::RadialQuadrature,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Route::SeriesUnrescaled => "series_unrescaled",
            Route::SeriesRescaled => "series_rescaled",
            Route::IntegralRep => "integral_rep",
            Route::RadialQuadrature => "radial_quadrature",
        }
    }

    pub fn supports(self, variant: Variant) -> bool {
        !(self == Route::IntegralRep && variant == Variant::Linear)
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MomentError {
    #[error("gamma must satisfy 0 < gamma < inf, got {0}")]
    InvalidGamma(f64),
    #[error("route {route} is not available for the {variant} variant")]
    UnsupportedRoute { route: Route, variant: Variant },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Distribution(#[from] DistributionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    gamma: f64,
    variant: Variant,
}

impl ModelParams {
    pub fn new(gamma: f64, variant: Variant) -> Result<Self, MomentError> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(MomentError::InvalidGamma(gamma));
        }
        Ok(Self { gamma, variant })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// `c = 1 + i/gamma`.
    pub fn rescaling(&self) -> Complex64 {
        Complex64::new(1.0, 1.0 / self.gamma)
    }

    /// The first singular point `x0 = 4 (1 + i/gamma)^{-2}`, evaluated as
    /// `4 gamma^2 / (gamma + i)^2`.
    pub fn x0(&self) -> Complex64 {
        let g = self.gamma;
        let denom = Complex64::new(g, 1.0);
        Complex64::new(4.0 * g * g, 0.0) / (denom * denom)
    }
}

/// Tuning for moment evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentOptions {
    /// Working series order; `None` means `2l + 6`.
    pub order: Option<usize>,
    pub quadrature: QuadratureSpec,
}

impl Default for MomentOptions {
    fn default() -> Self {
        Self {
            order: None,
            quadrature: QuadratureSpec::default()
                .with_abs_tol(1e-14)
                .with_rel_tol(1e-11),
        }
    }
}

impl MomentOptions {
    pub fn working_order(&self, l: usize) -> usize {
        self.order.unwrap_or(2 * l + 6)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentValue {
    pub l: usize,
    pub value: Complex64,
    pub route: Route,
}

pub fn moment_scalar(
    l: usize,
    params: &ModelParams,
    route: Route,
) -> Result<MomentValue, MomentError> {
    moment_scalar_with(l, params, route, &MomentOptions::default())
}

pub fn moment_scalar_with(
    l: usize,
    params: &ModelParams,
    route: Route,
    options: &MomentOptions,
) -> Result<MomentValue, MomentError> {
    let value = moment_at_rescaling(l, params.rescaling(), params.variant(), route, options)?;
    Ok(MomentValue { l, value, route })
}

/// Moment for an arbitrary rescaling factor `c` (the physical case is
/// `c = 1 + i/gamma`). Replacing `c` by its conjugate conjugates the result,
/// which is how the conjugation symmetry is exercised.
pub fn moment_at_rescaling(
    l: usize,
    c: Complex64,
    variant: Variant,
    route: Route,
    options: &MomentOptions,
) -> Result<Complex64, MomentError> {
    let k = 2 * l + 2;
    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
    match route {
        Route::SeriesUnrescaled => {
            let d = route_derivative(k, c, variant, route, options.working_order(l), options)?;
            Ok(d * (sign * PI * 4f64.powi(l as i32 + 1)))
        }
        Route::SeriesRescaled | Route::IntegralRep => {
            if !route.supports(variant) {
                return Err(MomentError::UnsupportedRoute { route, variant });
            }
            let d = route_derivative(k, c, variant, route, options.working_order(l), options)?;
            Ok(d * prefactor(l, c))
        }
        Route::RadialQuadrature => radial_moment(l, c, variant, &options.quadrature),
    }
}

/// `pi (-1)^l (2/c)^{2l+3}` by repeated multiplication.
fn prefactor(l: usize, c: Complex64) -> Complex64 {
    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
    ipow(Complex64::new(2.0, 0.0) / c, 2 * l + 3) * (sign * PI)
}

fn ipow(z: Complex64, n: usize) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, _| acc * z)
}

/// The `k`-th derivative at `h = 0` of the expression each route
/// differentiates: `2 z'(h) ln((1+sqrt(1-z^2))/2)` for the unrescaled route and
/// `F(h)` for the rescaled and integral routes. `order` is the working
/// series order.
pub fn route_derivative(
    k: usize,
    c: Complex64,
    variant: Variant,
    route: Route,
    order: usize,
    options: &MomentOptions,
) -> Result<Complex64, MomentError> {
    match (route, variant) {
        (Route::SeriesUnrescaled, _) => {
            Ok(unrescaled_series(c, variant, order)?.derivative_at_zero(k)?)
        }
        (Route::SeriesRescaled, _) => Ok(rescaled_series(variant, order)?.derivative_at_zero(k)?),
        (Route::IntegralRep, Variant::Arcsin) => {
            if k > order {
                return Err(SeriesError::InsufficientOrder {
                    requested: k,
                    order,
                }
                .into());
            }
            Ok(Complex64::new(
                integral_rep_derivative(k, &options.quadrature)?,
                0.0,
            ))
        }
        _ => Err(MomentError::UnsupportedRoute { route, variant }),
    }
}

/// `ln((1 + sqrt(1 - z^2)) / 2)` for a series `z` with zero constant term.
fn log_half_one_plus_root(z: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    let order = z.order();
    let z2 = z * z;
    let root = TruncatedSeries::elementary(Elementary::Sqrt1m, order).compose(&z2)?;
    let shifted = (&root - &TruncatedSeries::constant(1.0.into(), order)).scale(0.5.into());
    TruncatedSeries::elementary(Elementary::Ln1p, order).compose(&shifted)
}

/// Series of `2 z'(h) ln((1 + sqrt(1 - z^2)) / 2)` with `z = sin(h/c)` or `z = h/c`.
pub fn unrescaled_series(
    c: Complex64,
    variant: Variant,
    order: usize,
) -> Result<TruncatedSeries, SeriesError> {
    let inv_c = Complex64::new(1.0, 0.0) / c;
    let h_over_c = TruncatedSeries::linear(inv_c, order + 1);
    let z = match variant {
        Variant::Arcsin => {
            TruncatedSeries::elementary(Elementary::Sin, order + 1).compose(&h_over_c)?
        }
        Variant::Linear => h_over_c,
    };
    let dz = z.derivative()?;
    let log = log_half_one_plus_root(&z.truncate(order))?;
    Ok((&dz * &log).scale(2.0.into()))
}

/// Series of `cos h ln((1 + cos h)/2)` (arcsin) or `ln((1 + sqrt(1 - h^2))/2)` (linear).
pub fn rescaled_series(variant: Variant, order: usize) -> Result<TruncatedSeries, SeriesError> {
    match variant {
        Variant::Arcsin => {
            let cos = TruncatedSeries::elementary(Elementary::Cos, order);
            let shifted = (&cos - &TruncatedSeries::constant(1.0.into(), order)).scale(0.5.into());
            let log = TruncatedSeries::elementary(Elementary::Ln1p, order).compose(&shifted)?;
            Ok(&cos * &log)
        }
        Variant::Linear => log_half_one_plus_root(&TruncatedSeries::linear(1.0.into(), order)),
    }
}

/// `\int_0^\infty l^n / ((l^2 + 1) sinh(pi l)) dl` for `n >= 1`.
pub fn regular_integral(n: usize, spec: &QuadratureSpec) -> Result<f64, QuadratureError> {
    assert!(n >= 1, "regular integral needs n >= 1");
    let integrand = move |x: f64| {
        if x == 0.0 {
            if n == 1 {
                1.0 / PI
            } else {
                0.0
            }
        } else {
            let s = (PI * x).sinh();
            if s.is_infinite() {
                0.0
            } else {
                x.powi(n as i32) / ((x * x + 1.0) * s)
            }
        }
    };
    quadrature::integrate_real(integrand, 0.0, f64::INFINITY, spec).map(|(v, _)| v)
}

// k-th derivative of cos h ln((1 + cos h)/2) at 0 through the table integral.
fn integral_rep_derivative(k: usize, spec: &QuadratureSpec) -> Result<f64, QuadratureError> {
    if k % 2 == 1 {
        return Ok(0.0);
    }
    let half = k / 2;
    let alt = if half % 2 == 0 { 1.0 } else { -1.0 };
    let table = 2.0 * regular_integral(k + 1, spec)?;
    // d^k/dh^k (h sin h) at 0 is k (-1)^{k/2 - 1} for even k >= 2.
    let h_sin_h = if k == 0 { 0.0 } else { -alt * k as f64 };
    let constant = if k == 0 { 1.0 } else { 0.0 };
    Ok(table - h_sin_h + constant - 4f64.ln() * alt)
}

/// Regular part `pi (-1)^l (2/c)^{2l+3} 2 I_{2l+3}` of the arcsin moment.
pub fn regular_part(
    l: usize,
    params: &ModelParams,
    spec: &QuadratureSpec,
) -> Result<Complex64, MomentError> {
    let integral = regular_integral(2 * l + 3, spec)?;
    Ok(prefactor(l, params.rescaling()) * (2.0 * integral))
}

fn radial_moment(
    l: usize,
    c: Complex64,
    variant: Variant,
    spec: &QuadratureSpec,
) -> Result<Complex64, MomentError> {
    // c = 1 + i/gamma = 2 i a, so a = c / (2i).
    let a = c / Complex64::new(0.0, 2.0);
    match variant {
        Variant::Arcsin => {
            let radial = radial_arcsin(a, |x| x.powi(l as i32), spec)?;
            let x0 = Complex64::new(4.0, 0.0) / (c * c);
            let coeffs = singular_coefficients_at(c);
            let f0 = ipow(x0, l);
            let df0 = if l == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                ipow(x0, l - 1) * l as f64
            };
            Ok(radial + coeffs.a * f0 + coeffs.b * df0)
        }
        Variant::Linear => {
            let j = radial_linear(a, l, spec)?;
            Ok(j * Complex64::new(0.0, -1.0))
        }
    }
}

/// `(i/2) 4 pi \int_0^\infty a v/((a^2 v^2 + 1) sinh(pi a v)) f(v^2) v^2 dv`
/// with `a = (1/gamma - i)/2`.
pub fn radial_arcsin(
    a: Complex64,
    probe: impl Fn(Complex64) -> Complex64,
    spec: &QuadratureSpec,
) -> Result<Complex64, MomentError> {
    let integrand = |v: f64| {
        let z = a * v;
        let denom = z * z + 1.0;
        closed_form::z_over_sinh_pi_z(z) / denom * probe(Complex64::new(v * v, 0.0)) * (v * v)
    };
    let e = quadrature::integrate(integrand, 0.0, f64::INFINITY, spec)?;
    Ok(e.value * Complex64::new(0.0, 2.0 * PI))
}

/// `4 pi \int_0^\infty Ki1(a v)/(2 pi a v) v^{2l+2} dv`.
pub fn radial_linear(
    a: Complex64,
    l: usize,
    spec: &QuadratureSpec,
) -> Result<Complex64, MomentError> {
    let failure = std::cell::Cell::new(None);
    let integrand = |v: f64| {
        if v == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let z = a * v;
        match closed_form::ki1(z) {
            Ok(k) => k / (z * (2.0 * PI)) * v.powi(2 * l as i32 + 2),
            Err(e) => {
                failure.set(Some(e));
                Complex64::new(f64::NAN, 0.0)
            }
        }
    };
    let result = quadrature::integrate(integrand, 0.0, f64::INFINITY, spec);
    if let Some(e) = failure.take() {
        return Err(e.into());
    }
    Ok(result?.value * (4.0 * PI))
}

/// Coefficients of the singular contribution `a f(x0) + b f'(x0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularCoefficients {
    pub a: Complex64,
    pub b: Complex64,
    pub x0: Complex64,
}

impl SingularCoefficients {
    pub fn apply(&self, value: Complex64, derivative: Complex64) -> Complex64 {
        self.a * value + self.b * derivative
    }
}

/// Singular-part coefficients for the arcsin variant; the same for every `l`.
/// The linear variant has no singular part and gets zeros.
pub fn singular_coefficients(params: &ModelParams) -> SingularCoefficients {
    match params.variant() {
        Variant::Arcsin => SingularCoefficients {
            x0: params.x0(),
            ..singular_coefficients_at(params.rescaling())
        },
        Variant::Linear => SingularCoefficients {
            a: Complex64::new(0.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            x0: params.x0(),
        },
    }
}

fn singular_coefficients_at(c: Complex64) -> SingularCoefficients {
    let scale = ipow(Complex64::new(2.0, 0.0) / c, 3) * PI;
    let x0 = Complex64::new(4.0, 0.0) / (c * c);
    SingularCoefficients {
        a: scale * (4f64.ln() - 2.0),
        b: -scale * x0 * 2.0,
        x0,
    }
}

/// Polynomial probe `f(x) = sum_k c_k x^k` in `x = v^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbePolynomial {
    coeffs: Vec<Complex64>,
    x0: Complex64,
    admissible: bool,
}

const ADMISSIBILITY_TOL: f64 = 1e-12;

impl ProbePolynomial {
    /// Builds a probe and decides admissibility at the first singular point
    /// for `params`.
    pub fn new(coeffs: Vec<Complex64>, params: &ModelParams) -> Self {
        let x0 = params.x0();
        let mut probe = Self {
            coeffs,
            x0,
            admissible: false,
        };
        let scale: f64 = probe
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.norm() * x0.norm().powi(k as i32) * (1 + k) as f64)
            .sum();
        probe.admissible = probe.value(x0).norm() <= ADMISSIBILITY_TOL * scale
            && probe.derivative(x0).norm() <= ADMISSIBILITY_TOL * scale;
        probe
    }

    /// `(x - x0)^2 q(x)`, admissible by construction.
    pub fn vanishing_at_singularity(q: &[Complex64], params: &ModelParams) -> Self {
        let x0 = params.x0();
        let square = [x0 * x0, -x0 * 2.0, Complex64::new(1.0, 0.0)];
        let mut coeffs = vec![Complex64::new(0.0, 0.0); q.len() + 2];
        for (i, qi) in q.iter().enumerate() {
            for (j, sj) in square.iter().enumerate() {
                coeffs[i + j] += qi * sj;
            }
        }
        Self::new(coeffs, params)
    }

    pub fn monomial(l: usize, params: &ModelParams) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); l + 1];
        coeffs[l] = Complex64::new(1.0, 0.0);
        Self::new(coeffs, params)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn x0(&self) -> Complex64 {
        self.x0
    }

    pub fn admissible(&self) -> bool {
        self.admissible
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }

    pub fn value(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    pub fn derivative(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, &c)| {
                acc * x + c * k as f64
            })
    }
}

pub fn moment_of_polynomial(
    probe: &ProbePolynomial,
    params: &ModelParams,
) -> Result<Complex64, MomentError> {
    moment_of_polynomial_with(
        probe,
        params,
        Route::SeriesRescaled,
        &MomentOptions::default(),
    )
}

pub fn moment_of_polynomial_with(
    probe: &ProbePolynomial,
    params: &ModelParams,
    route: Route,
    options: &MomentOptions,
) -> Result<Complex64, MomentError> {
    probe
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() != 0.0)
        .try_fold(Complex64::new(0.0, 0.0), |acc, (l, &c)| {
            Ok(acc + c * moment_scalar_with(l, params, route, options)?.value)
        })
}

/// Singular contribution of a probe: exactly zero for admissible probes,
/// `a f(x0) + b f'(x0)` otherwise.
pub fn singular_part(probe: &ProbePolynomial, params: &ModelParams) -> Complex64 {
    if probe.admissible() || params.variant() == Variant::Linear {
        return Complex64::new(0.0, 0.0);
    }
    let coeffs = singular_coefficients(params);
    coeffs.apply(probe.value(coeffs.x0), probe.derivative(coeffs.x0))
}

/// `2^{-3} N(v^{2l}) conj(N(v^{2m}))`.
pub fn factorized_moment(
    l: usize,
    m: usize,
    params: &ModelParams,
) -> Result<Complex64, MomentError> {
    let left = moment_scalar(l, params, Route::SeriesRescaled)?.value;
    let right = moment_scalar(m, params, Route::SeriesRescaled)?.value;
    Ok(left * right.conj() / 8.0)
}
