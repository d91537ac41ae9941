//! Harmonic analysis on the 3-sphere factor (the group of unit quaternions).
//!
//! Irreducible unitary representations are indexed by a half-integer spin,
//! stored throughout as the doubled integer `two_ell` (so spin 1/2 is
//! `two_ell = 1`); the representation has dimension `two_ell + 1` and its
//! matrix entries in Euler coordinates `(phi, theta, psi)` factor as
//!
//! ```text
//! t[m, n](phi, theta, psi) = exp(i m phi) * d[m, n](theta) * exp(i n psi)
//! ```
//!
//! with `m, n` half-integers ranging over `-ell ..= ell` (ascending index
//! order) and `d` the real orthogonal little-d matrix.  In this convention
//! the right-invariant derivative along `psi` has diagonal symbol `i*m`,
//! which is the normalization the operator calculus relies on.
//!
//! Haar measure in these coordinates is `sin(theta) / (16 pi^2)` with
//! `phi in [0, 2pi)`, `theta in [0, pi]`, `psi in [-2pi, 2pi)`; the `psi`
//! range is of length `4 pi` so that half-integer spins are genuine
//! single-valued representations.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::One;
use num_complex::Complex64;
use thiserror::Error;

use crate::scalars::rat_to_f64;

#[derive(Debug, Error, PartialEq)]
pub enum Su2Error {
    #[error("index two_m={two_m} invalid for two_ell={two_ell}: {reason}")]
    BadIndex {
        two_ell: u32,
        two_m: i32,
        reason: String,
    },
    #[error("band {band} exceeds grid band {grid_band}")]
    BandTooLarge { band: u32, grid_band: u32 },
    #[error("sample vector length {got} does not match grid size {expect}")]
    SampleLength { got: usize, expect: usize },
    #[error("coefficient block for two_ell={two_ell} has {got} entries, expected {expect}")]
    BlockShape {
        two_ell: u32,
        got: usize,
        expect: usize,
    },
    #[error("quadrature failed to reach exactness after {0} refinement rounds")]
    QuadratureStuck(u32),
}

/// Representation label: doubled spin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Su2Rep {
    pub two_ell: u32,
}

impl Su2Rep {
    pub fn dim(&self) -> usize {
        (self.two_ell + 1) as usize
    }

    /// Smoothed eigenvalue weight `<ell> = sqrt(1 + ell*(ell+1))`.
    pub fn weight(&self) -> f64 {
        let te = self.two_ell as f64;
        (1.0 + (te / 2.0) * (te / 2.0 + 1.0)).sqrt()
    }

    /// Row/column half-integer indices in ascending order, doubled.
    pub fn two_m_values(&self) -> impl Iterator<Item = i32> {
        let te = self.two_ell as i32;
        (-te..=te).step_by(2)
    }

    /// Array index of a doubled half-integer row/column label.
    pub fn index_of(&self, two_m: i32) -> usize {
        ((two_m + self.two_ell as i32) / 2) as usize
    }
}

/// Euler coordinates on the 3-sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles {
    pub phi: f64,
    pub theta: f64,
    pub psi: f64,
}

fn check_index(two_ell: u32, two_m: i32, what: &str) -> Result<(), Su2Error> {
    let te = two_ell as i32;
    if two_m.abs() > te {
        return Err(Su2Error::BadIndex {
            two_ell,
            two_m,
            reason: format!("{what} magnitude exceeds two_ell"),
        });
    }
    if (two_m - te) % 2 != 0 {
        return Err(Su2Error::BadIndex {
            two_ell,
            two_m,
            reason: format!("{what} parity does not match two_ell"),
        });
    }
    Ok(())
}

fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n as u64 {
        acc *= i;
    }
    acc
}

/// One monomial of a little-d entry: `coef * cos(theta/2)^p * sin(theta/2)^q`.
#[derive(Debug, Clone, Copy)]
struct DTerm {
    coef: f64,
    p: u32,
    q: u32,
}

/// Build the monomial expansion of `d[two_m, two_n]` with exact integer
/// factorial arithmetic for the coefficients (converted to f64 only at the
/// very end, one rounding per term).
fn little_d_terms(two_ell: u32, two_m: i32, two_n: i32) -> Result<Vec<DTerm>, Su2Error> {
    check_index(two_ell, two_m, "two_m")?;
    check_index(two_ell, two_n, "two_n")?;
    let te = two_ell as i32;
    // All of these are nonnegative integers thanks to the parity check.
    let a = ((te + two_m) / 2) as u32; // ell + m
    let b = ((te - two_m) / 2) as u32; // ell - m
    let c = ((te + two_n) / 2) as u32; // ell + n
    let e = ((te - two_n) / 2) as u32; // ell - n
    let t = (two_m - two_n) / 2; // m - n, an integer
    let sqrt_arg = factorial(a) * factorial(b) * factorial(c) * factorial(e);

    let s_min = 0.max(-t) as u32;
    let s_max = c.min(b);
    let mut terms = Vec::new();
    let mut s = s_min;
    while s <= s_max {
        let denom = factorial(c - s)
            * factorial(s)
            * factorial((t + s as i32) as u32)
            * factorial(b - s);
        // coefficient = +-sqrt(sqrt_arg) / denom; square it to stay rational.
        let ratio = BigRational::new(sqrt_arg.clone(), &denom * &denom);
        let mut coef = rat_to_f64(&ratio).sqrt();
        if (t + s as i32).rem_euclid(2) == 1 {
            coef = -coef;
        }
        let p = (te - 2 * s as i32 - t) as u32; // cos power
        let q = (t + 2 * s as i32) as u32; // sin power
        terms.push(DTerm { coef, p, q });
        if s == s_max {
            break;
        }
        s += 1;
    }
    Ok(terms)
}

/// Little-d matrix entry `d[two_m, two_n](theta)`.
///
/// Rejects index/parity mismatches instead of guessing: a half-integer row
/// in an integer-spin block is a caller bug, not a zero.
pub fn wigner_little_d(two_ell: u32, two_m: i32, two_n: i32, theta: f64) -> Result<f64, Su2Error> {
    let terms = little_d_terms(two_ell, two_m, two_n)?;
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    Ok(terms
        .iter()
        .map(|t| t.coef * c.powi(t.p as i32) * s.powi(t.q as i32))
        .sum())
}

/// Full representation matrix `t[m, n] = e^{im phi} d[m, n](theta) e^{in psi}`
/// in ascending half-integer index order, row-major.
pub fn rep_matrix(two_ell: u32, x: &EulerAngles) -> Result<Vec<Complex64>, Su2Error> {
    let rep = Su2Rep { two_ell };
    let dim = rep.dim();
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    for two_m in rep.two_m_values() {
        let row_phase = Complex64::from_polar(1.0, two_m as f64 / 2.0 * x.phi);
        for two_n in rep.two_m_values() {
            let col_phase = Complex64::from_polar(1.0, two_n as f64 / 2.0 * x.psi);
            let d = wigner_little_d(two_ell, two_m, two_n, x.theta)?;
            out[rep.index_of(two_m) * dim + rep.index_of(two_n)] = row_phase * d * col_phase;
        }
    }
    Ok(out)
}

/// Diagonal symbol of the invariant derivative along `psi`: entries `i*m`
/// for `m = -ell ..= ell` ascending.
pub fn dpsi_symbol(two_ell: u32) -> Vec<Complex64> {
    Su2Rep { two_ell }
        .two_m_values()
        .map(|two_m| Complex64::new(0.0, two_m as f64 / 2.0))
        .collect()
}

/// Trace of the defining (spin 1/2) representation at `x`:
/// `2 cos(theta/2) cos((phi+psi)/2)`.
pub fn trace_defining_rep(x: &EulerAngles) -> f64 {
    2.0 * (x.theta / 2.0).cos() * ((x.phi + x.psi) / 2.0).cos()
}

/// The derivative of the defining trace along `psi`:
/// `h(x) = -cos(theta/2) sin((phi+psi)/2)`.  A mean-zero function used by
/// the variable-perturbation corpus.
pub fn euler_h(x: &EulerAngles) -> f64 {
    -(x.theta / 2.0).cos() * ((x.phi + x.psi) / 2.0).sin()
}

/// Defining 2x2 matrix of the Euler triple in the analysis convention:
/// the spin-1/2 representation with descending index order, made explicit so
/// group elements can be composed and converted back to Euler coordinates.
pub fn euler_to_matrix2(x: &EulerAngles) -> [[Complex64; 2]; 2] {
    let c = (x.theta / 2.0).cos();
    let s = (x.theta / 2.0).sin();
    let alpha = (x.phi + x.psi) / 2.0;
    let beta = (x.phi - x.psi) / 2.0;
    [
        [
            Complex64::from_polar(c, -alpha),
            -Complex64::from_polar(s, -beta),
        ],
        [
            Complex64::from_polar(s, beta),
            Complex64::from_polar(c, alpha),
        ],
    ]
}

/// Compose two group elements given in Euler coordinates.
pub fn euler_compose(x1: &EulerAngles, x2: &EulerAngles) -> EulerAngles {
    let a = euler_to_matrix2(x1);
    let b = euler_to_matrix2(x2);
    let mut prod = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for (k, bk) in b.iter().enumerate() {
                prod[i][j] += a[i][k] * bk[j];
            }
        }
    }
    matrix2_to_euler(&prod)
}

/// Recover canonical Euler coordinates from a (near-)unitary 2x2 element.
///
/// `phi` is reduced into `[0, 2pi)` and `psi` into `[-2pi, 2pi)`; the pair
/// `(phi, psi)` is shifted by compensating multiples of `2pi` so the group
/// element is preserved exactly (the chart is 4pi-periodic in `psi`).
pub fn matrix2_to_euler(u: &[[Complex64; 2]; 2]) -> EulerAngles {
    let c = u[0][0].norm();
    let s = u[1][0].norm();
    let theta = 2.0 * s.atan2(c);
    let alpha = if c > 1e-300 { -u[0][0].arg() } else { 0.0 };
    let beta = if s > 1e-300 { u[1][0].arg() } else { 0.0 };
    let phi0 = alpha + beta;
    let psi0 = alpha - beta;
    // Reduce phi into [0, 2pi), compensating psi so (phi+psi, phi-psi) only
    // moves by multiples of 4pi.
    let tau = 2.0 * std::f64::consts::PI;
    let mut phi = phi0.rem_euclid(tau);
    if phi >= tau {
        phi = 0.0;
    }
    let shift = phi - phi0;
    let mut psi = psi0 - shift;
    psi = (psi + tau).rem_euclid(2.0 * tau) - tau;
    EulerAngles { phi, theta, psi }
}

// ---------------------------------------------------------------------------
// Quadrature grid and transforms
// ---------------------------------------------------------------------------

/// Product quadrature grid on the 3-sphere: uniform in `phi` and `psi`,
/// Gauss-Legendre in `cos(theta)`, with little-d tables precomputed at the
/// theta nodes.  Exact (to rounding) for coefficient products within `band`.
#[derive(Debug, Clone)]
pub struct Su2Grid {
    /// Largest doubled spin the grid analyses exactly.
    pub band: u32,
    pub n_phi: usize,
    pub n_theta: usize,
    pub n_psi: usize,
    /// Gauss-Legendre nodes in `u = cos(theta)` and their weights (sum 2).
    pub theta_u: Vec<f64>,
    pub theta_w: Vec<f64>,
    /// dtab[two_ell][b * dim^2 + i_m * dim + i_n] = d[m, n](theta_b).
    dtab: Vec<Vec<f64>>,
}

impl Su2Grid {
    /// Build a grid for the requested band, refining the node counts until
    /// the factorized orthonormality checks pass at 1e-12.
    pub fn new(band: u32) -> Result<Self, Su2Error> {
        let mut n_phi = (2 * band + 1) as usize;
        let mut n_psi = (2 * band + 1) as usize;
        let mut n_theta = (band + 2) as usize;
        for _round in 0..6 {
            let grid = Su2Grid::with_sizes(band, n_phi, n_theta, n_psi)?;
            if grid.validate_exactness(1e-12) {
                return Ok(grid);
            }
            n_phi += 2;
            n_psi += 2;
            n_theta += 4;
        }
        Err(Su2Error::QuadratureStuck(6))
    }

    pub fn with_sizes(
        band: u32,
        n_phi: usize,
        n_theta: usize,
        n_psi: usize,
    ) -> Result<Self, Su2Error> {
        let (theta_u, theta_w) = gauss_legendre(n_theta);
        let mut dtab = Vec::with_capacity(band as usize + 1);
        for two_ell in 0..=band {
            let rep = Su2Rep { two_ell };
            let dim = rep.dim();
            let mut tab = vec![0.0; n_theta * dim * dim];
            for two_m in rep.two_m_values() {
                for two_n in rep.two_m_values() {
                    let terms = little_d_terms(two_ell, two_m, two_n)?;
                    let offset = rep.index_of(two_m) * dim + rep.index_of(two_n);
                    for (b, &u) in theta_u.iter().enumerate() {
                        let theta = u.clamp(-1.0, 1.0).acos();
                        let ch = (theta / 2.0).cos();
                        let sh = (theta / 2.0).sin();
                        let val: f64 = terms
                            .iter()
                            .map(|t| t.coef * ch.powi(t.p as i32) * sh.powi(t.q as i32))
                            .sum();
                        tab[b * dim * dim + offset] = val;
                    }
                }
            }
            dtab.push(tab);
        }
        Ok(Su2Grid {
            band,
            n_phi,
            n_theta,
            n_psi,
            theta_u,
            theta_w,
            dtab,
        })
    }

    pub fn node_count(&self) -> usize {
        self.n_phi * self.n_theta * self.n_psi
    }

    pub fn phi_node(&self, j: usize) -> f64 {
        2.0 * std::f64::consts::PI * j as f64 / self.n_phi as f64
    }

    pub fn psi_node(&self, l: usize) -> f64 {
        -2.0 * std::f64::consts::PI + 4.0 * std::f64::consts::PI * l as f64 / self.n_psi as f64
    }

    pub fn theta_node(&self, b: usize) -> f64 {
        self.theta_u[b].clamp(-1.0, 1.0).acos()
    }

    /// Flattened node index: `(j_phi * n_theta + b) * n_psi + l`.
    pub fn node(&self, idx: usize) -> EulerAngles {
        let l = idx % self.n_psi;
        let rest = idx / self.n_psi;
        let b = rest % self.n_theta;
        let j = rest / self.n_theta;
        EulerAngles {
            phi: self.phi_node(j),
            theta: self.theta_node(b),
            psi: self.psi_node(l),
        }
    }

    pub fn nodes(&self) -> Vec<EulerAngles> {
        (0..self.node_count()).map(|i| self.node(i)).collect()
    }

    /// Haar quadrature weight of a flattened node.
    pub fn weight(&self, idx: usize) -> f64 {
        let b = (idx / self.n_psi) % self.n_theta;
        self.theta_w[b] / (2.0 * self.n_phi as f64 * self.n_psi as f64)
    }

    pub fn little_d_at(&self, two_ell: u32, b: usize, i_m: usize, i_n: usize) -> f64 {
        let dim = (two_ell + 1) as usize;
        self.dtab[two_ell as usize][b * dim * dim + i_m * dim + i_n]
    }

    /// Factorized exactness check: the uniform angular sums must vanish at
    /// every nonzero in-band frequency, and the Gauss-Legendre rule must
    /// reproduce the little-d orthogonality relations.
    pub fn validate_exactness(&self, tol: f64) -> bool {
        // phi: integer frequencies up to band.
        for nu in 1..=self.band as i64 {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.n_phi {
                acc += Complex64::from_polar(1.0, -(nu as f64) * self.phi_node(j));
            }
            if (acc / self.n_phi as f64).norm() > tol {
                return false;
            }
        }
        // psi: half-integer frequencies, doubled steps up to 2*band over a
        // 4pi period.
        for kappa in 1..=(2 * self.band as i64) {
            let mut acc = Complex64::new(0.0, 0.0);
            for l in 0..self.n_psi {
                acc += Complex64::from_polar(1.0, -(kappa as f64) / 2.0 * self.psi_node(l));
            }
            if (acc / self.n_psi as f64).norm() > tol {
                return false;
            }
        }
        // theta: same-(m,n) little-d products must integrate to the
        // orthogonality values delta / (two_ell + 1).
        for two_ell in 0..=self.band {
            let rep = Su2Rep { two_ell };
            let dim = rep.dim();
            for two_lp in (two_ell % 2..=self.band).step_by(2) {
                let repp = Su2Rep { two_ell: two_lp };
                let dimp = repp.dim();
                for two_m in rep.two_m_values() {
                    if two_m.abs() > two_lp as i32 {
                        continue;
                    }
                    for two_n in rep.two_m_values() {
                        if two_n.abs() > two_lp as i32 {
                            continue;
                        }
                        let i_m = rep.index_of(two_m);
                        let i_n = rep.index_of(two_n);
                        let ip_m = repp.index_of(two_m);
                        let ip_n = repp.index_of(two_n);
                        let mut acc = 0.0;
                        for b in 0..self.n_theta {
                            acc += self.theta_w[b] / 2.0
                                * self.dtab[two_ell as usize][b * dim * dim + i_m * dim + i_n]
                                * self.dtab[two_lp as usize][b * dimp * dimp + ip_m * dimp + ip_n];
                        }
                        let expect = if two_ell == two_lp {
                            1.0 / (two_ell as f64 + 1.0)
                        } else {
                            0.0
                        };
                        if (acc - expect).abs() > tol {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Coefficient blocks of a function on the 3-sphere: `blocks[two_ell]` is the
/// row-major `(two_ell+1)^2` matrix of the transform at that spin.
#[derive(Debug, Clone, PartialEq)]
pub struct Su2Coeffs {
    pub band: u32,
    pub blocks: Vec<Vec<Complex64>>,
}

impl Su2Coeffs {
    pub fn zero(band: u32) -> Self {
        let blocks = (0..=band)
            .map(|two_ell| vec![Complex64::new(0.0, 0.0); ((two_ell + 1) * (two_ell + 1)) as usize])
            .collect();
        Su2Coeffs { band, blocks }
    }

    pub fn norm_sq(&self) -> f64 {
        self.blocks
            .iter()
            .enumerate()
            .map(|(two_ell, block)| {
                (two_ell as f64 + 1.0) * block.iter().map(|z| z.norm_sqr()).sum::<f64>()
            })
            .sum()
    }
}

/// Forward transform: `f_hat(ell)[m, n] = integral f * conj(t[n, m])`.
///
/// Separated evaluation: a `psi` analysis, then a `phi` analysis, then the
/// Gauss-Legendre contraction against the little-d tables.
pub fn su2_forward(grid: &Su2Grid, samples: &[Complex64], band: u32) -> Result<Su2Coeffs, Su2Error> {
    if band > grid.band {
        return Err(Su2Error::BandTooLarge {
            band,
            grid_band: grid.band,
        });
    }
    if samples.len() != grid.node_count() {
        return Err(Su2Error::SampleLength {
            got: samples.len(),
            expect: grid.node_count(),
        });
    }
    let (n_phi, n_theta, n_psi) = (grid.n_phi, grid.n_theta, grid.n_psi);
    let n_freq = (2 * band + 1) as usize; // doubled frequencies -band..=band
    let freq_of = |idx: usize| idx as i64 - band as i64;

    // Stage 1: psi analysis. h[(j * n_theta + b) * n_freq + f_m] with the
    // psi weight 1/n_psi folded in.
    let mut h = vec![Complex64::new(0.0, 0.0); n_phi * n_theta * n_freq * 0 + n_phi * n_theta * n_freq];
    for j in 0..n_phi {
        for b in 0..n_theta {
            let row = &samples[(j * n_theta + b) * n_psi..(j * n_theta + b) * n_psi + n_psi];
            for f_m in 0..n_freq {
                let two_m = freq_of(f_m);
                let mut acc = Complex64::new(0.0, 0.0);
                for (l, &val) in row.iter().enumerate() {
                    acc += val
                        * Complex64::from_polar(1.0, -(two_m as f64) / 2.0 * grid.psi_node(l));
                }
                h[(j * n_theta + b) * n_freq + f_m] = acc / n_psi as f64;
            }
        }
    }

    // Stage 2: phi analysis. g[(f_n * n_theta + b) * n_freq + f_m].
    let mut g = vec![Complex64::new(0.0, 0.0); n_freq * n_theta * n_freq];
    for f_n in 0..n_freq {
        let two_n = freq_of(f_n);
        for j in 0..n_phi {
            let phase = Complex64::from_polar(1.0, -(two_n as f64) / 2.0 * grid.phi_node(j));
            for b in 0..n_theta {
                for f_m in 0..n_freq {
                    g[(f_n * n_theta + b) * n_freq + f_m] +=
                        h[(j * n_theta + b) * n_freq + f_m] * phase;
                }
            }
        }
    }
    for slot in g.iter_mut() {
        *slot /= n_phi as f64;
    }

    // Stage 3: theta contraction. f_hat(ell)[m, n] uses conj(t[n, m]) =
    // e^{-i n phi} d[n, m](theta) e^{-i m psi}.
    let mut out = Su2Coeffs::zero(band);
    for two_ell in 0..=band {
        let rep = Su2Rep { two_ell };
        let dim = rep.dim();
        let block = &mut out.blocks[two_ell as usize];
        for two_m in rep.two_m_values() {
            let f_m = (two_m as i64 + band as i64) as usize;
            for two_n in rep.two_m_values() {
                let f_n = (two_n as i64 + band as i64) as usize;
                let mut acc = Complex64::new(0.0, 0.0);
                for b in 0..n_theta {
                    acc += g[(f_n * n_theta + b) * n_freq + f_m]
                        * (grid.theta_w[b] / 2.0)
                        * grid.little_d_at(two_ell, b, rep.index_of(two_n), rep.index_of(two_m));
                }
                block[rep.index_of(two_m) * dim + rep.index_of(two_n)] = acc;
            }
        }
    }
    Ok(out)
}

/// Inverse transform (synthesis):
/// `f(x) = sum_ell (two_ell+1) * trace(t(x) * f_hat(ell))`.
pub fn su2_inverse(grid: &Su2Grid, coeffs: &Su2Coeffs) -> Result<Vec<Complex64>, Su2Error> {
    let band = coeffs.band;
    if band > grid.band {
        return Err(Su2Error::BandTooLarge {
            band,
            grid_band: grid.band,
        });
    }
    for (two_ell, block) in coeffs.blocks.iter().enumerate() {
        let dim = two_ell + 1;
        if block.len() != dim * dim {
            return Err(Su2Error::BlockShape {
                two_ell: two_ell as u32,
                got: block.len(),
                expect: dim * dim,
            });
        }
    }
    let (n_phi, n_theta, n_psi) = (grid.n_phi, grid.n_theta, grid.n_psi);
    let n_freq = (2 * band + 1) as usize;

    // Stage 1: theta synthesis. p[(f_m * n_theta + b) * n_freq + f_n] =
    // sum_ell (two_ell+1) d[m, n](theta_b) f_hat(ell)[n, m].
    let mut p = vec![Complex64::new(0.0, 0.0); n_freq * n_theta * n_freq];
    for two_ell in 0..=band {
        let rep = Su2Rep { two_ell };
        let dim = rep.dim();
        let block = &coeffs.blocks[two_ell as usize];
        let dfac = two_ell as f64 + 1.0;
        for two_m in rep.two_m_values() {
            let f_m = (two_m as i64 + band as i64) as usize;
            for two_n in rep.two_m_values() {
                let f_n = (two_n as i64 + band as i64) as usize;
                let c = block[rep.index_of(two_n) * dim + rep.index_of(two_m)] * dfac;
                if c.norm_sqr() == 0.0 {
                    continue;
                }
                for b in 0..n_theta {
                    p[(f_m * n_theta + b) * n_freq + f_n] +=
                        c * grid.little_d_at(two_ell, b, rep.index_of(two_m), rep.index_of(two_n));
                }
            }
        }
    }

    // Stage 2: phi synthesis. r[(j * n_theta + b) * n_freq + f_n].
    let mut r = vec![Complex64::new(0.0, 0.0); n_phi * n_theta * n_freq];
    for j in 0..n_phi {
        for f_m in 0..n_freq {
            let two_m = f_m as i64 - band as i64;
            let phase = Complex64::from_polar(1.0, two_m as f64 / 2.0 * grid.phi_node(j));
            for b in 0..n_theta {
                for f_n in 0..n_freq {
                    r[(j * n_theta + b) * n_freq + f_n] +=
                        p[(f_m * n_theta + b) * n_freq + f_n] * phase;
                }
            }
        }
    }

    // Stage 3: psi synthesis.
    let mut out = vec![Complex64::new(0.0, 0.0); grid.node_count()];
    for j in 0..n_phi {
        for b in 0..n_theta {
            for l in 0..n_psi {
                let mut acc = Complex64::new(0.0, 0.0);
                for f_n in 0..n_freq {
                    let two_n = f_n as i64 - band as i64;
                    acc += r[(j * n_theta + b) * n_freq + f_n]
                        * Complex64::from_polar(1.0, two_n as f64 / 2.0 * grid.psi_node(l));
                }
                out[(j * n_theta + b) * n_psi + l] = acc;
            }
        }
    }
    Ok(out)
}

/// Squared Haar-quadrature norm of grid samples.
pub fn su2_norm_sq(grid: &Su2Grid, samples: &[Complex64]) -> f64 {
    samples
        .iter()
        .enumerate()
        .map(|(i, z)| grid.weight(i) * z.norm_sqr())
        .sum()
}

/// Spectral derivative along `psi` of grid samples: a plain 1-D Fourier
/// analysis/synthesis along the `psi` axis (period `4 pi`), keeping every
/// frequency the grid resolves.  Exact for data within the grid band.
pub fn dpsi_on_grid(grid: &Su2Grid, samples: &[Complex64]) -> Result<Vec<Complex64>, Su2Error> {
    if samples.len() != grid.node_count() {
        return Err(Su2Error::SampleLength {
            got: samples.len(),
            expect: grid.node_count(),
        });
    }
    let n_psi = grid.n_psi;
    let half = (n_psi - 1) / 2; // doubled frequencies -half ..= half
    let mut out = vec![Complex64::new(0.0, 0.0); samples.len()];
    let rows = samples.len() / n_psi;
    for row in 0..rows {
        let data = &samples[row * n_psi..(row + 1) * n_psi];
        for f in 0..=2 * half {
            let two_n = f as i64 - half as i64;
            let mut c = Complex64::new(0.0, 0.0);
            for (l, &val) in data.iter().enumerate() {
                c += val * Complex64::from_polar(1.0, -(two_n as f64) / 2.0 * grid.psi_node(l));
            }
            c /= n_psi as f64;
            // derivative symbol: i * n with n = two_n / 2
            let dc = c * Complex64::new(0.0, two_n as f64 / 2.0);
            if dc.norm_sqr() == 0.0 {
                continue;
            }
            for (l, slot) in out[row * n_psi..(row + 1) * n_psi].iter_mut().enumerate() {
                *slot += dc * Complex64::from_polar(1.0, two_n as f64 / 2.0 * grid.psi_node(l));
            }
        }
    }
    Ok(out)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` (weights sum to 2),
/// computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Initial guess (Chebyshev-like).
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            // Evaluate P_n and P_n' by recurrence.
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0, x);
        for k in 2..=n {
            let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_mul(a: &[Complex64], b: &[Complex64], dim: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for k in 0..dim {
                let aik = a[i * dim + k];
                if aik.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..dim {
                    out[i * dim + j] += aik * b[k * dim + j];
                }
            }
        }
        out
    }

    fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn little_d_spin_half_closed_form() {
        let theta = 0.7;
        let c = (theta / 2.0).cos();
        let s = (theta / 2.0).sin();
        assert!((wigner_little_d(1, -1, -1, theta).unwrap() - c).abs() < 1e-15);
        assert!((wigner_little_d(1, -1, 1, theta).unwrap() - s).abs() < 1e-15);
        assert!((wigner_little_d(1, 1, -1, theta).unwrap() - (-s)).abs() < 1e-15);
        assert!((wigner_little_d(1, 1, 1, theta).unwrap() - c).abs() < 1e-15);
    }

    #[test]
    fn little_d_rejects_parity_mismatch() {
        // Half-integer row index in an integer-spin block.
        let err = wigner_little_d(2, 1, 0, 0.3).unwrap_err();
        assert!(matches!(err, Su2Error::BadIndex { .. }));
        let err = wigner_little_d(1, 3, 1, 0.3).unwrap_err();
        assert!(matches!(err, Su2Error::BadIndex { .. }));
    }

    #[test]
    fn little_d_matrix_is_orthogonal() {
        for two_ell in [1u32, 2, 3, 5, 8] {
            let rep = Su2Rep { two_ell };
            let dim = rep.dim();
            let theta = 1.234;
            let mut d = vec![0.0; dim * dim];
            for two_m in rep.two_m_values() {
                for two_n in rep.two_m_values() {
                    d[rep.index_of(two_m) * dim + rep.index_of(two_n)] =
                        wigner_little_d(two_ell, two_m, two_n, theta).unwrap();
                }
            }
            for i in 0..dim {
                for j in 0..dim {
                    let dot: f64 = (0..dim).map(|k| d[i * dim + k] * d[j * dim + k]).sum();
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (dot - expect).abs() < 1e-12,
                        "two_ell={two_ell} rows {i},{j}: {dot}"
                    );
                }
            }
        }
    }

    #[test]
    fn rep_matrix_is_unitary() {
        let x = EulerAngles {
            phi: 1.1,
            theta: 0.9,
            psi: -2.3,
        };
        for two_ell in 0..=8u32 {
            let dim = (two_ell + 1) as usize;
            let t = rep_matrix(two_ell, &x).unwrap();
            let mut tt = vec![Complex64::new(0.0, 0.0); dim * dim];
            for i in 0..dim {
                for j in 0..dim {
                    for k in 0..dim {
                        tt[i * dim + j] += t[i * dim + k] * t[j * dim + k].conj();
                    }
                }
            }
            for i in 0..dim {
                for j in 0..dim {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (tt[i * dim + j] - expect).norm() < 1e-12,
                        "two_ell={two_ell}"
                    );
                }
            }
        }
    }

    #[test]
    fn spin_half_matrix_entries_and_trace() {
        // Diagonal entries are cos(theta/2) e^{-+i(phi+psi)/2}; the trace is
        // 2 cos(theta/2) cos((phi+psi)/2); off-diagonal magnitudes are
        // sin(theta/2).
        let x = EulerAngles {
            phi: 0.8,
            theta: 1.3,
            psi: 2.9,
        };
        let t = rep_matrix(1, &x).unwrap();
        let c = (x.theta / 2.0).cos();
        let s = (x.theta / 2.0).sin();
        let alpha = (x.phi + x.psi) / 2.0;
        // ascending order: index 0 = m=-1/2, index 1 = m=+1/2.
        assert!((t[0] - Complex64::from_polar(c, -alpha)).norm() < 1e-14);
        assert!((t[3] - Complex64::from_polar(c, alpha)).norm() < 1e-14);
        assert!((t[1].norm() - s).abs() < 1e-14);
        assert!((t[2].norm() - s).abs() < 1e-14);
        let trace = t[0] + t[3];
        assert!((trace.re - trace_defining_rep(&x)).abs() < 1e-14);
        assert!(trace.im.abs() < 1e-14);
    }

    #[test]
    fn euler_round_trip_through_matrix() {
        let samples = [
            EulerAngles {
                phi: 0.3,
                theta: 0.7,
                psi: 1.9,
            },
            EulerAngles {
                phi: 5.9,
                theta: 3.0,
                psi: -5.5,
            },
            EulerAngles {
                phi: 0.0,
                theta: 0.0,
                psi: 1.0,
            },
            EulerAngles {
                phi: 2.0,
                theta: std::f64::consts::PI,
                psi: -1.0,
            },
        ];
        for x in samples {
            let u = euler_to_matrix2(&x);
            let y = matrix2_to_euler(&u);
            let v = euler_to_matrix2(&y);
            for i in 0..2 {
                for j in 0..2 {
                    assert!(
                        (u[i][j] - v[i][j]).norm() < 1e-12,
                        "round trip moved the group element for {x:?}"
                    );
                }
            }
            assert!((0.0..2.0 * std::f64::consts::PI).contains(&y.phi));
            assert!((-2.0 * std::f64::consts::PI..2.0 * std::f64::consts::PI).contains(&y.psi));
        }
    }

    #[test]
    fn representation_property_under_composition() {
        let x1 = EulerAngles {
            phi: 0.4,
            theta: 1.1,
            psi: -2.0,
        };
        let x2 = EulerAngles {
            phi: 3.9,
            theta: 2.2,
            psi: 4.4,
        };
        let x12 = euler_compose(&x1, &x2);
        for two_ell in 1..=6u32 {
            let dim = (two_ell + 1) as usize;
            let t1 = rep_matrix(two_ell, &x1).unwrap();
            let t2 = rep_matrix(two_ell, &x2).unwrap();
            let t12 = rep_matrix(two_ell, &x12).unwrap();
            let prod = mat_mul(&t1, &t2, dim);
            assert!(
                max_abs_diff(&t12, &prod) < 1e-10,
                "two_ell={two_ell}: {}",
                max_abs_diff(&t12, &prod)
            );
        }
    }

    #[test]
    fn dpsi_symbol_matches_finite_difference() {
        let x = EulerAngles {
            phi: 0.9,
            theta: 1.7,
            psi: 0.6,
        };
        let h = 1e-5;
        for two_ell in [1u32, 2, 5, 8] {
            let rep = Su2Rep { two_ell };
            let dim = rep.dim();
            let t = rep_matrix(two_ell, &x).unwrap();
            let tp = rep_matrix(
                two_ell,
                &EulerAngles {
                    psi: x.psi + h,
                    ..x
                },
            )
            .unwrap();
            let tm = rep_matrix(
                two_ell,
                &EulerAngles {
                    psi: x.psi - h,
                    ..x
                },
            )
            .unwrap();
            // sigma = t(x)^* (d/dpsi t)(x)
            let mut sigma = vec![Complex64::new(0.0, 0.0); dim * dim];
            for i in 0..dim {
                for j in 0..dim {
                    for k in 0..dim {
                        sigma[i * dim + j] +=
                            t[k * dim + i].conj() * (tp[k * dim + j] - tm[k * dim + j]) / (2.0 * h);
                    }
                }
            }
            let diag = dpsi_symbol(two_ell);
            for i in 0..dim {
                for j in 0..dim {
                    let expect = if i == j {
                        diag[i]
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    assert!(
                        (sigma[i * dim + j] - expect).norm() < 1e-7,
                        "two_ell={two_ell} entry ({i},{j}): {:?}",
                        sigma[i * dim + j]
                    );
                }
            }
        }
    }

    #[test]
    fn weight_bracketing_and_dimension_bound() {
        for two_ell in 0..=24u32 {
            let rep = Su2Rep { two_ell };
            let ell = two_ell as f64 / 2.0;
            let w = rep.weight();
            assert!(w >= (1.0 + ell) / 2f64.sqrt() - 1e-12);
            assert!(w <= 1.0 + ell + 1e-12);
            // dimension bound: 2 ell + 1 <= 2 <ell>^(3/2)
            assert!((rep.dim() as f64) <= 2.0 * w.powf(1.5) + 1e-12);
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (nodes, weights) = gauss_legendre(6);
        // degree 11 and below must be exact: check x^8 and x^10.
        let int8: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(x, w)| w * x.powi(8))
            .sum();
        assert!((int8 - 2.0 / 9.0).abs() < 1e-14);
        let int10: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(x, w)| w * x.powi(10))
            .sum();
        assert!((int10 - 2.0 / 11.0).abs() < 1e-14);
        let total: f64 = weights.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn quadrature_grid_validates_at_requested_band() {
        let grid = Su2Grid::new(8).unwrap();
        assert!(grid.validate_exactness(1e-12));
        let mass: f64 = (0..grid.node_count()).map(|i| grid.weight(i)).sum();
        assert!((mass - 1.0).abs() < 1e-13);
    }

    #[test]
    fn forward_picks_out_single_coefficient() {
        // f = t[m0, n0] at spin 1 must transform to a single entry of value
        // 1/(two_ell+1) at the transposed slot, zero elsewhere.
        let band = 4u32;
        let grid = Su2Grid::new(band).unwrap();
        let two_ell = 1u32;
        let rep = Su2Rep { two_ell };
        let dim = rep.dim();
        let (two_m0, two_n0) = (1i32, -1i32);
        let samples: Vec<Complex64> = (0..grid.node_count())
            .map(|i| {
                let t = rep_matrix(two_ell, &grid.node(i)).unwrap();
                t[rep.index_of(two_m0) * dim + rep.index_of(two_n0)]
            })
            .collect();
        let coeffs = su2_forward(&grid, &samples, band).unwrap();
        for (te, block) in coeffs.blocks.iter().enumerate() {
            let d = te + 1;
            for (idx, &c) in block.iter().enumerate() {
                let expect = if te == two_ell as usize
                    && idx == rep.index_of(two_n0) * d + rep.index_of(two_m0)
                {
                    Complex64::new(1.0 / (two_ell as f64 + 1.0), 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                assert!(
                    (c - expect).norm() < 1e-13,
                    "two_ell={te} idx={idx}: {c:?}"
                );
            }
        }
    }

    #[test]
    fn round_trip_and_plancherel_on_random_band_limited_data() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let band = 6u32;
        let grid = Su2Grid::new(band).unwrap();
        let mut coeffs = Su2Coeffs::zero(band);
        for block in coeffs.blocks.iter_mut() {
            for slot in block.iter_mut() {
                *slot = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        let samples = su2_inverse(&grid, &coeffs).unwrap();
        let back = su2_forward(&grid, &samples, band).unwrap();
        let mut max_err: f64 = 0.0;
        for (a, b) in coeffs.blocks.iter().zip(back.blocks.iter()) {
            for (x, y) in a.iter().zip(b.iter()) {
                max_err = max_err.max((x - y).norm());
            }
        }
        assert!(max_err < 1e-12, "round trip error {max_err}");
        let grid_norm = su2_norm_sq(&grid, &samples);
        let coeff_norm = coeffs.norm_sq();
        assert!(
            (grid_norm - coeff_norm).abs() <= 1e-12 * coeff_norm.max(1.0),
            "{grid_norm} vs {coeff_norm}"
        );
    }

    #[test]
    fn psi_derivative_on_grid_matches_symbol() {
        let band = 4u32;
        let grid = Su2Grid::new(band).unwrap();
        let two_ell = 3u32;
        let rep = Su2Rep { two_ell };
        let dim = rep.dim();
        let (two_m0, two_n0) = (3i32, 1i32);
        let samples: Vec<Complex64> = (0..grid.node_count())
            .map(|i| {
                let t = rep_matrix(two_ell, &grid.node(i)).unwrap();
                t[rep.index_of(two_m0) * dim + rep.index_of(two_n0)]
            })
            .collect();
        let deriv = dpsi_on_grid(&grid, &samples).unwrap();
        // d/dpsi t[m, n] = (i n) t[m, n]
        for (i, &d) in deriv.iter().enumerate() {
            let expect = samples[i] * Complex64::new(0.0, two_n0 as f64 / 2.0);
            assert!((d - expect).norm() < 1e-11);
        }
    }

    #[test]
    fn euler_h_is_dpsi_of_defining_trace() {
        let xs = [
            EulerAngles {
                phi: 0.2,
                theta: 0.9,
                psi: -1.0,
            },
            EulerAngles {
                phi: 4.0,
                theta: 2.0,
                psi: 3.0,
            },
        ];
        let h = 1e-6;
        for x in xs {
            let plus = trace_defining_rep(&EulerAngles {
                psi: x.psi + h,
                ..x
            });
            let minus = trace_defining_rep(&EulerAngles {
                psi: x.psi - h,
                ..x
            });
            let fd = (plus - minus) / (2.0 * h);
            assert!((fd - euler_h(&x)).abs() < 1e-9);
        }
    }
}
