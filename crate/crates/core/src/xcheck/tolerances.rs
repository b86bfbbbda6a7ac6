//! Per-check tolerances, with the error source that dominates each one.

/// Table integral, quadrature vs closed form (absolute). Dominated by the
/// quadrature error of the slowly decaying integrand near `|h| = pi`.
pub const TABLE_INTEGRAL: f64 = 1e-10;

/// Generating-function reduction, quadrature vs closed form (absolute).
pub const GENERATING_FUNCTION: f64 = 1e-10;

/// Unrescaled vs rescaled series moments (relative). Both are exact up to
/// rounding in the Cauchy products; the gap grows with `l` through `(2l+2)!`.
pub const SERIES_ROUTES: f64 = 1e-10;

/// Integral representation vs series moment (relative). Quadrature of the
/// regular integral plus cancellation against the elementary terms.
pub const INTEGRAL_ROUTE: f64 = 1e-8;

/// Spot value of the base moment at `gamma = 1` (relative).
pub const SPOT_MOMENT: f64 = 1e-12;

/// `\int l^3/((l^2+1) sinh(pi l)) dl` vs `3/4 - ln 2` (absolute).
pub const SINGULAR_CONSTANT: f64 = 1e-10;

/// Radial real-axis quadrature vs series moment on admissible probes
/// (relative). Oscillatory integrand on a semi-infinite range.
pub const RADIAL_FUNCTIONAL: f64 = 1e-6;

/// Peak position vs the nominal `4 n^2` lattice (relative).
pub const PEAK_POSITION: f64 = 0.05;

/// `(2 pi)^2 N(0) = 1` (absolute), pure rounding.
pub const INTERCEPT: f64 = 1e-12;

/// Fitted decay rate vs asymptotic rate (relative); finite-window bias.
pub const DECAY_RATE: f64 = 0.03;

/// Ki1 direct integral vs nested `K0` integral (relative).
pub const KI1_REPRESENTATIONS: f64 = 1e-10;

/// Linear-variant series moment vs Ki1 radial quadrature (relative). Nested
/// quadrature over an oscillatory kernel.
pub const LINEAR_BESSEL: f64 = 1e-6;

/// Measure normalization, quadrature vs analytic (absolute).
pub const MEASURE_NORM: f64 = 1e-10;

/// Reconstruction of the singular part for monomial probes (relative).
pub const SINGULAR_DECOMPOSITION: f64 = 1e-8;
