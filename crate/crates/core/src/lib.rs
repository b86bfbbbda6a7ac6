//! Moments and closed-form area distribution obtained by integrating the
//! connection out of the Regge-calculus path integral.
//!
//! * [`series`]: truncated power series used to take high-order derivatives.
//! * [`quadrature`]: adaptive Gauss-Kronrod engine shared by every oracle.
//! * [`moments`]: scalar moments by several independent routes.
//! * [`closed_form`]: the distribution itself, its singular points, maxima and decay.
//! * [`measure`]: the SO(3) measure factor and the generating-function reduction.
//! * [`cli`]: the command-line front end.
//! * [`xcheck`]: the verification suite tying closed forms to oracles.

pub mod cli;
pub mod closed_form;
pub mod measure;
pub mod moments;
pub mod quadrature;
pub mod series;
pub mod xcheck;

pub use closed_form::{AreaSquared, DistributionSample, Region, SingularPoint};
pub use moments::{
    ModelParams, MomentValue, ProbePolynomial, Route, SingularCoefficients, Variant,
};
pub use quadrature::QuadratureSpec;
pub use series::TruncatedSeries;
pub use xcheck::{CheckReport, SuiteConfig};
