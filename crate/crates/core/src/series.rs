//! Truncated power series in one variable with complex coefficients.
//!
//! Coefficients are Taylor coefficients (already divided by `k!`), so a
//! series of order `K` stores `K + 1` values `c_0 ..= c_K` and represents
//! `c_0 + c_1 h + ... + c_K h^K + O(h^{K+1})`. Binary operations truncate to
//! the smaller of the two orders; nothing ever silently extends a series.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("a truncated series needs at least one coefficient")]
    Empty,
    #[error("composition requires the inner series to have a zero constant term, got {0}")]
    NonzeroConstantTerm(Complex64),
    #[error("derivative of order {requested} requested from a series of order {order}")]
    InsufficientOrder { requested: usize, order: usize },
}

/// Maclaurin expansions available through [`TruncatedSeries::elementary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Elementary {
    /// `sin h`
    Sin,
    /// `cos h`
    Cos,
    /// `sqrt(1 - h)`
    Sqrt1m,
    /// `ln(1 + h)`
    Ln1p,
    /// `arcsin h`
    Arcsin,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self, SeriesError> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); order + 1],
        }
    }

    pub fn constant(value: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = value;
        s
    }

    /// The series `scale * h`.
    pub fn linear(scale: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = scale;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Option<Complex64> {
        self.coeffs.get(k).copied()
    }

    /// Drops every coefficient above `order`. Asking for a larger order is a
    /// no-op: truncation never pads.
    pub fn truncate(&self, order: usize) -> Self {
        let keep = (order + 1).min(self.coeffs.len());
        Self {
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
        }
    }

    /// Substitutes `h -> alpha h`, i.e. multiplies `c_k` by `alpha^k`.
    pub fn rescale(&self, alpha: Complex64) -> Self {
        let mut power = Complex64::new(1.0, 0.0);
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                let out = c * power;
                power *= alpha;
                out
            })
            .collect();
        Self { coeffs }
    }

    /// Term-by-term `d/dh`; the result has order one less.
    pub fn derivative(&self) -> Result<Self, SeriesError> {
        if self.order() == 0 {
            return Err(SeriesError::InsufficientOrder {
                requested: 1,
                order: 0,
            });
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Ok(Self { coeffs })
    }

    /// `f(g(h))` where `self` is `f`. The result has order `min(order f, order g)`.
    pub fn compose(&self, inner: &TruncatedSeries) -> Result<Self, SeriesError> {
        let c0 = inner.coeffs[0];
        if c0 != Complex64::new(0.0, 0.0) {
            return Err(SeriesError::NonzeroConstantTerm(c0));
        }
        let order = self.order().min(inner.order());
        let g = inner.truncate(order);
        // Horner in the series ring; terms of f above `order` cannot contribute
        // because g starts at h^1.
        let mut acc = Self::constant(self.coeffs[order], order);
        for k in (0..order).rev() {
            acc = &acc * &g;
            acc.coeffs[0] += self.coeffs[k];
        }
        Ok(acc)
    }

    /// `k!` times the `k`-th coefficient, i.e. the `k`-th derivative at `h = 0`.
    pub fn derivative_at_zero(&self, k: usize) -> Result<Complex64, SeriesError> {
        let c = self.coeff(k).ok_or(SeriesError::InsufficientOrder {
            requested: k,
            order: self.order(),
        })?;
        let factorial: f64 = (1..=k).map(|j| j as f64).product();
        Ok(c * factorial)
    }

    /// True when every odd-index coefficient is exactly zero.
    pub fn is_even(&self) -> bool {
        self.coeffs
            .iter()
            .skip(1)
            .step_by(2)
            .all(|c| c.re == 0.0 && c.im == 0.0)
    }

    pub fn elementary(kind: Elementary, order: usize) -> Self {
        let coeffs = (0..=order)
            .scan(1.0_f64, |inv_fact, k| {
                if k > 0 {
                    *inv_fact /= k as f64;
                }
                Some(*inv_fact)
            })
            .enumerate()
            .map(|(k, inv_fact)| match kind {
                Elementary::Sin if k % 2 == 1 => sign(k / 2) * inv_fact,
                Elementary::Cos if k % 2 == 0 => sign(k / 2) * inv_fact,
                Elementary::Sin | Elementary::Cos => 0.0,
                Elementary::Sqrt1m => sqrt1m_coeff(k),
                Elementary::Ln1p if k == 0 => 0.0,
                Elementary::Ln1p => -sign(k) / k as f64,
                Elementary::Arcsin if k % 2 == 1 => arcsin_coeff(k),
                Elementary::Arcsin => 0.0,
            })
            .map(|c| Complex64::new(c, 0.0))
            .collect();
        Self { coeffs }
    }
}

fn sign(n: usize) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

// binom(1/2, k) (-1)^k
fn sqrt1m_coeff(k: usize) -> f64 {
    (1..=k).fold(1.0, |c, j| c * (j as f64 - 1.5) / j as f64)
}

// (2n)! / (4^n (n!)^2 (2n + 1)) for k = 2n + 1
fn arcsin_coeff(k: usize) -> f64 {
    let n = k / 2;
    let central = (1..=n).fold(1.0, |t, j| t * (2 * j - 1) as f64 / (2 * j) as f64);
    central / k as f64
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        TruncatedSeries { coeffs }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        TruncatedSeries { coeffs }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    /// Cauchy product truncated to the smaller order.
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|k| {
                (0..=k)
                    .map(|j| self.coeffs[j] * rhs.coeffs[k - j])
                    .sum::<Complex64>()
            })
            .collect();
        TruncatedSeries { coeffs }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $method:ident),*) => {$(
        impl $tr for TruncatedSeries {
            type Output = TruncatedSeries;

            fn $method(self, rhs: TruncatedSeries) -> TruncatedSeries {
                (&self).$method(&rhs)
            }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn real(coeffs: &[f64]) -> TruncatedSeries {
        TruncatedSeries::from_real(coeffs).unwrap()
    }

    fn assert_close(s: &TruncatedSeries, expected: &[f64], tol: f64) {
        assert_eq!(s.order() + 1, expected.len(), "order mismatch: {s:?}");
        for (k, (c, e)) in s.coeffs().iter().zip(expected).enumerate() {
            assert!(
                (c.re - e).abs() <= tol && c.im.abs() <= tol,
                "coefficient {k}: got {c}, expected {e}"
            );
        }
    }

    // Plain convolution over f64 slices, used as the oracle for products.
    fn convolve(a: &[f64], b: &[f64], order: usize) -> Vec<f64> {
        (0..=order)
            .map(|k| (0..=k).map(|j| a[j] * b[k - j]).sum())
            .collect()
    }

    #[test]
    fn add_cancels_and_truncates() {
        let s = &real(&[1.0, 1.0]) + &real(&[1.0, -1.0]);
        assert_close(&s, &[2.0, 0.0], 0.0);

        let s = real(&[0.0, 0.0, 1.0]) + real(&[0.0, 0.0, 3.0]);
        assert_close(&s, &[0.0, 0.0, 4.0], 0.0);

        let s = &real(&[1.0, 2.0, 3.0]) + &real(&[1.0, 1.0]);
        assert_eq!(s.order(), 1);
    }

    #[test]
    fn zero_is_additive_identity() {
        let s = real(&[0.3, -1.5, 2.0]);
        assert_eq!(&TruncatedSeries::zero(2) + &s, s);
    }

    #[test]
    fn mul_matches_convolution_oracle() {
        let p = &real(&[1.0, 1.0, 0.0]) * &real(&[1.0, -1.0, 0.0]);
        assert_close(&p, &[1.0, 0.0, -1.0], 0.0);

        let sin = TruncatedSeries::elementary(Elementary::Sin, 5);
        let cos = TruncatedSeries::elementary(Elementary::Cos, 5);
        let re = |s: &TruncatedSeries| s.coeffs().iter().map(|c| c.re).collect::<Vec<_>>();
        let oracle = convolve(&re(&sin), &re(&cos), 5);
        let product = &sin * &cos;
        assert_close(&product, &oracle, 1e-15);
        assert_close(
            &product,
            &[0.0, 1.0, 0.0, -2.0 / 3.0, 0.0, 2.0 / 15.0],
            1e-15,
        );

        let one = TruncatedSeries::constant(Complex64::new(1.0, 0.0), 5);
        assert_eq!(&sin * &one, sin);
    }

    #[test]
    fn compose_examples() {
        let sin = TruncatedSeries::elementary(Elementary::Sin, 4);
        let square = real(&[0.0, 0.0, 1.0, 0.0, 0.0]);
        assert_close(
            &square.compose(&sin).unwrap(),
            &[0.0, 0.0, 1.0, 0.0, -1.0 / 3.0],
            1e-15,
        );

        let f = real(&[0.5, -2.0, 0.25, 7.0]);
        let identity = TruncatedSeries::linear(Complex64::new(1.0, 0.0), 3);
        assert_eq!(f.compose(&identity).unwrap(), f);

        // exp(ln(1 + h)) = 1 + h; exp coefficients entered by hand.
        let exp = real(&[1.0, 1.0, 0.5, 1.0 / 6.0]);
        let ln1p = TruncatedSeries::elementary(Elementary::Ln1p, 3);
        assert_close(&exp.compose(&ln1p).unwrap(), &[1.0, 1.0, 0.0, 0.0], 1e-15);
    }

    #[test]
    fn compose_rejects_nonzero_constant() {
        let f = real(&[1.0, 1.0]);
        let g = real(&[0.5, 1.0]);
        assert!(matches!(
            f.compose(&g),
            Err(SeriesError::NonzeroConstantTerm(_))
        ));
    }

    #[test]
    fn arcsin_of_sin_is_identity() {
        let sin = TruncatedSeries::elementary(Elementary::Sin, 15);
        let asin = TruncatedSeries::elementary(Elementary::Arcsin, 15);
        let mut expected = vec![0.0; 16];
        expected[1] = 1.0;
        assert_close(&asin.compose(&sin).unwrap(), &expected, 1e-15);
    }

    #[test]
    fn elementary_examples() {
        assert_close(
            &TruncatedSeries::elementary(Elementary::Sin, 5),
            &[0.0, 1.0, 0.0, -1.0 / 6.0, 0.0, 1.0 / 120.0],
            0.0,
        );
        assert_close(
            &TruncatedSeries::elementary(Elementary::Sqrt1m, 2),
            &[1.0, -0.5, -0.125],
            0.0,
        );
        assert_close(
            &TruncatedSeries::elementary(Elementary::Arcsin, 5),
            &[0.0, 1.0, 0.0, 1.0 / 6.0, 0.0, 3.0 / 40.0],
            1e-17,
        );
        assert_close(
            &TruncatedSeries::elementary(Elementary::Ln1p, 3),
            &[0.0, 1.0, -0.5, 1.0 / 3.0],
            1e-17,
        );
        assert_eq!(TruncatedSeries::elementary(Elementary::Cos, 0).order(), 0);
    }

    #[test]
    fn derivative_at_zero_examples() {
        let cos = TruncatedSeries::elementary(Elementary::Cos, 6);
        assert_eq!(
            cos.derivative_at_zero(2).unwrap(),
            Complex64::new(-1.0, 0.0)
        );
        assert_eq!(cos.derivative_at_zero(3).unwrap(), Complex64::new(0.0, 0.0));

        // cos h ln((1 + cos h) / 2) = -h^2/4 + 11 h^4/96 + O(h^6)
        let half_cos_minus_one =
            (&cos - &TruncatedSeries::constant(1.0.into(), 6)).scale(Complex64::new(0.5, 0.0));
        let log = TruncatedSeries::elementary(Elementary::Ln1p, 6)
            .compose(&half_cos_minus_one)
            .unwrap();
        let target = &cos * &log;
        assert!((target.coeff(2).unwrap().re + 0.25).abs() < 1e-16);
        assert!((target.coeff(4).unwrap().re - 11.0 / 96.0).abs() < 1e-16);
        assert!((target.derivative_at_zero(2).unwrap().re + 0.5).abs() < 1e-15);
        assert!(target.is_even());
    }

    #[test]
    fn derivative_beyond_order_is_an_error() {
        let s = TruncatedSeries::elementary(Elementary::Cos, 4);
        assert_eq!(
            s.derivative_at_zero(5),
            Err(SeriesError::InsufficientOrder {
                requested: 5,
                order: 4
            })
        );
        assert!(TruncatedSeries::zero(0).derivative().is_err());
    }

    #[test]
    fn empty_series_rejected() {
        assert_eq!(TruncatedSeries::new(vec![]), Err(SeriesError::Empty));
    }

    #[test]
    fn rescale_and_derivative() {
        let s = real(&[1.0, 2.0, 3.0]);
        let r = s.rescale(Complex64::new(0.0, 1.0));
        assert_eq!(r.coeffs()[1], Complex64::new(0.0, 2.0));
        assert_eq!(r.coeffs()[2], Complex64::new(-3.0, 0.0));
        assert_close(&s.derivative().unwrap(), &[2.0, 6.0], 0.0);
    }
}
