//! Harmonic analysis on the circle factor.
//!
//! Irreducible unitary representations of the circle are the characters
//! `e_k(t) = exp(i k t)`, `k` an integer; all are one-dimensional.  The
//! normalized Haar measure is `dt / (2 pi)`, and the uniform grid quadrature
//! `(1/n) * sum_j f(t_j)` with `t_j = 2 pi j / n` integrates trigonometric
//! polynomials of band up to `n - 1` exactly, which makes the discrete
//! transform below an exact Fourier analysis for band-limited data.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircleError {
    #[error("grid with {n} points cannot resolve band {band} (needs at least {needed})")]
    GridTooSmall { n: usize, band: i64, needed: usize },
    #[error("coefficient vector of length {got} does not match band {band} (expect {expect})")]
    CoefficientLength { got: usize, band: i64, expect: usize },
    #[error("sample vector of length {got} does not match grid size {n}")]
    SampleLength { got: usize, n: usize },
}

/// Character index of a circle representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CircleRep {
    pub k: i64,
}

impl CircleRep {
    /// Smoothed eigenvalue weight `<k> = sqrt(1 + k^2)`.
    pub fn weight(&self) -> f64 {
        ((1 + self.k * self.k) as f64).sqrt()
    }

    /// Symbol of `d/dt` on the character `e_k`: the scalar `i k`.
    pub fn derivative_symbol(&self) -> Complex64 {
        Complex64::new(0.0, self.k as f64)
    }
}

/// Character evaluation `e_k(t) = exp(i k t)`.
pub fn t1_char(k: i64, t: f64) -> Complex64 {
    Complex64::from_polar(1.0, k as f64 * t)
}

/// Uniform quadrature grid on the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleGrid {
    /// Number of nodes; node `j` sits at `2 pi j / n` with weight `1/n`.
    pub n_points: usize,
}

impl CircleGrid {
    pub fn new(n_points: usize) -> Self {
        assert!(n_points > 0, "grid needs at least one node");
        CircleGrid { n_points }
    }

    /// Minimal grid resolving band `k_max` (transforms of band-limited data
    /// are exact): `2*k_max + 1` nodes.
    pub fn minimal_for_band(k_max: i64) -> Self {
        CircleGrid::new((2 * k_max.max(0) + 1) as usize)
    }

    /// Default grid for band `k_max`: `4*k_max + 1` nodes, so products of two
    /// band-limited functions still transform exactly.
    pub fn default_for_band(k_max: i64) -> Self {
        CircleGrid::new((4 * k_max.max(0) + 1) as usize)
    }

    pub fn node(&self, j: usize) -> f64 {
        2.0 * std::f64::consts::PI * j as f64 / self.n_points as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.node(j)).collect()
    }

    /// Quadrature weight (normalized Haar): identical at every node.
    pub fn weight(&self) -> f64 {
        1.0 / self.n_points as f64
    }

    /// Largest band this grid resolves exactly: `floor((n-1)/2)`.
    pub fn resolved_band(&self) -> i64 {
        ((self.n_points - 1) / 2) as i64
    }
}

/// Forward transform: coefficients `f_hat(k) = (1/n) sum_j f(t_j) e_k(t_j)*`
/// for `k = -band ..= band`, returned in ascending `k` order.
///
/// Rejects grids too small for the requested band: the quadrature would
/// alias, silently corrupting every downstream certified quantity.
pub fn t1_forward(
    grid: &CircleGrid,
    samples: &[Complex64],
    band: i64,
) -> Result<Vec<Complex64>, CircleError> {
    let n = grid.n_points;
    if samples.len() != n {
        return Err(CircleError::SampleLength {
            got: samples.len(),
            n,
        });
    }
    let needed = (2 * band + 1) as usize;
    if n < needed {
        return Err(CircleError::GridTooSmall { n, band, needed });
    }
    let w = grid.weight();
    let mut out = Vec::with_capacity(needed);
    for k in -band..=band {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &f) in samples.iter().enumerate() {
            acc += f * t1_char(k, grid.node(j)).conj();
        }
        out.push(acc * w);
    }
    Ok(out)
}

/// Inverse transform (synthesis): `f(t_j) = sum_k f_hat(k) e_k(t_j)`.
pub fn t1_inverse(
    grid: &CircleGrid,
    coeffs: &[Complex64],
    band: i64,
) -> Result<Vec<Complex64>, CircleError> {
    let expect = (2 * band + 1) as usize;
    if coeffs.len() != expect {
        return Err(CircleError::CoefficientLength {
            got: coeffs.len(),
            band,
            expect,
        });
    }
    let mut out = vec![Complex64::new(0.0, 0.0); grid.n_points];
    for (idx, &c) in coeffs.iter().enumerate() {
        let k = idx as i64 - band;
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (j, slot) in out.iter_mut().enumerate() {
            *slot += c * t1_char(k, grid.node(j));
        }
    }
    Ok(out)
}

/// Spectral derivative of grid samples: analyse at the grid's resolved band,
/// scale by the derivative symbol `i k`, and synthesize back.  Exact for
/// band-limited data; for anything else it differentiates the trigonometric
/// interpolant.
pub fn t1_spectral_derivative(
    grid: &CircleGrid,
    samples: &[Complex64],
) -> Result<Vec<Complex64>, CircleError> {
    let band = grid.resolved_band();
    let mut coeffs = t1_forward(grid, samples, band)?;
    for (idx, c) in coeffs.iter_mut().enumerate() {
        let k = idx as i64 - band;
        *c *= CircleRep { k }.derivative_symbol();
    }
    t1_inverse(grid, &coeffs, band)
}

/// Squared norm of grid samples under normalized Haar quadrature.
pub fn t1_norm_sq(grid: &CircleGrid, samples: &[Complex64]) -> f64 {
    let w = grid.weight();
    samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * w
}
