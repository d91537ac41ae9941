//! Exact scalar constants and certified small-divisor arithmetic.
//!
//! The resonance analysis of a first-order operator `X1 + a·X2 + q` hinges on
//! how close `lambda + a·mu` comes to zero as `(lambda, mu)` ranges over
//! half-integer eigenvalue pairs.  Floating point cannot distinguish an exact
//! cancellation from a tiny gap, so the coefficient `a` (and the perturbation
//! `q`) are carried as typed exact constants and every zero/nonzero claim is
//! made in exact arithmetic:
//!
//! * `rational:p/q`     — gaps are multiples of `1/(2q)`,
//! * `quadratic:u+v*sqrt(d)` — gaps bounded below via the algebraic conjugate,
//! * `liouville:J`      — the depth-`J` truncation `sum_{j<=J} 10^(-j!)` of a
//!   classical badly-approximable constant, with its convergent ladder,
//! * `float:x`          — best-effort f64; can never certify a zero,
//! * `complex:re+im*i`  — exact rational components (parsed losslessly from
//!   decimal text), so a nonzero imaginary part yields a certified gap floor.
//!
//! Eigenvalue indices are passed as *doubled* integers (`two_lambda`,
//! `two_mu`) so that half-integers stay exact.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use num_complex::Complex64;
use std::fmt;
use thiserror::Error;

/// Largest admitted depth for the badly-approximable truncation: depth 8
/// already carries a denominator with 40320 digits, ample for any desk-scale
/// demonstration while keeping arithmetic affordable.
pub const MAX_LIOUVILLE_DEPTH: u32 = 8;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ScalarError {
    #[error("cannot parse scalar constant `{0}`: {1}")]
    Parse(String, String),
    #[error("quadratic radicand {0} is not admissible: {1}")]
    BadRadicand(u64, String),
    #[error("quadratic coefficient v must be nonzero (use rational: for v = 0)")]
    ZeroQuadraticPart,
    #[error("liouville depth {0} out of range (1..={MAX_LIOUVILLE_DEPTH})")]
    BadLiouvilleDepth(u32),
    #[error("denominator must be nonzero")]
    ZeroDenominator,
}

/// A typed exact (or explicitly inexact) scalar coefficient.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarConstant {
    /// Exact rational `p/q`, kept in lowest terms by construction.
    Rational(BigRational),
    /// Real quadratic irrational `u + v*sqrt(d)`, `v != 0`, `d` squarefree >= 2.
    Quadratic {
        u: BigRational,
        v: BigRational,
        d: u64,
    },
    /// Truncation `sum_{j=1..depth} 10^(-j!)` of the classical
    /// badly-approximable decimal constant.
    Liouville { depth: u32 },
    /// Plain f64 value; participates in numerics but never in certification.
    Float(f64),
    /// Complex constant with exact rational real and imaginary parts.
    Complex { re: BigRational, im: BigRational },
}

impl ScalarConstant {
    pub fn rational_i64(p: i64, q: i64) -> Result<Self, ScalarError> {
        if q == 0 {
            return Err(ScalarError::ZeroDenominator);
        }
        Ok(ScalarConstant::Rational(BigRational::new(
            BigInt::from(p),
            BigInt::from(q),
        )))
    }

    pub fn integer(n: i64) -> Self {
        ScalarConstant::Rational(BigRational::from(BigInt::from(n)))
    }

    /// `u + v*sqrt(d)` with rational `u`, `v`.
    pub fn quadratic(u: BigRational, v: BigRational, d: u64) -> Result<Self, ScalarError> {
        check_radicand(d)?;
        if v.is_zero() {
            return Err(ScalarError::ZeroQuadraticPart);
        }
        Ok(ScalarConstant::Quadratic { u, v, d })
    }

    /// The square root of 2, the workhorse irrational of the fixture corpus.
    pub fn sqrt2() -> Self {
        ScalarConstant::Quadratic {
            u: BigRational::zero(),
            v: BigRational::one(),
            d: 2,
        }
    }

    pub fn liouville(depth: u32) -> Result<Self, ScalarError> {
        if depth == 0 || depth > MAX_LIOUVILLE_DEPTH {
            return Err(ScalarError::BadLiouvilleDepth(depth));
        }
        Ok(ScalarConstant::Liouville { depth })
    }

    /// Purely imaginary constant `c*i` with exact rational `c`.
    pub fn imaginary(c: BigRational) -> Self {
        ScalarConstant::Complex {
            re: BigRational::zero(),
            im: c,
        }
    }

    /// Whether every arithmetic claim about this constant is certifiable.
    pub fn is_exact_kind(&self) -> bool {
        !matches!(self, ScalarConstant::Float(_))
    }

    /// Real part as an exact field element, when the kind is exact.
    pub fn re_exact(&self) -> Option<ExactReal> {
        match self {
            ScalarConstant::Rational(r) => Some(ExactReal::rational(r.clone())),
            ScalarConstant::Quadratic { u, v, d } => {
                Some(ExactReal::quadratic(u.clone(), v.clone(), *d))
            }
            ScalarConstant::Liouville { depth } => {
                Some(ExactReal::rational(liouville_value(*depth)))
            }
            ScalarConstant::Complex { re, .. } => Some(ExactReal::rational(re.clone())),
            ScalarConstant::Float(_) => None,
        }
    }

    /// Imaginary part as an exact rational, when the kind is exact.
    pub fn im_exact(&self) -> Option<BigRational> {
        match self {
            ScalarConstant::Complex { im, .. } => Some(im.clone()),
            ScalarConstant::Float(_) => None,
            _ => Some(BigRational::zero()),
        }
    }

    /// f64 evaluation (real and imaginary parts).
    pub fn to_complex_f64(&self) -> Complex64 {
        match self {
            ScalarConstant::Rational(r) => Complex64::new(rat_to_f64(r), 0.0),
            ScalarConstant::Quadratic { u, v, d } => {
                Complex64::new(rat_to_f64(u) + rat_to_f64(v) * (*d as f64).sqrt(), 0.0)
            }
            ScalarConstant::Liouville { depth } => {
                Complex64::new(rat_to_f64(&liouville_value(*depth)), 0.0)
            }
            ScalarConstant::Float(x) => Complex64::new(*x, 0.0),
            ScalarConstant::Complex { re, im } => Complex64::new(rat_to_f64(re), rat_to_f64(im)),
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            ScalarConstant::Complex { im, .. } => im.is_zero(),
            _ => true,
        }
    }

    /// Parse the textual syntax used in operator spec files.
    pub fn parse(text: &str) -> Result<Self, ScalarError> {
        let text = text.trim();
        let (kind, rest) = text
            .split_once(':')
            .ok_or_else(|| ScalarError::Parse(text.into(), "missing `kind:` prefix".into()))?;
        let rest = rest.trim();
        match kind.trim() {
            "rational" => Ok(ScalarConstant::Rational(parse_rational(rest).map_err(
                |e| ScalarError::Parse(text.into(), e),
            )?)),
            "quadratic" => parse_quadratic(rest).map_err(|e| match e {
                ScalarError::Parse(_, msg) => ScalarError::Parse(text.into(), msg),
                other => other,
            }),
            "liouville" => {
                let depth: u32 = rest
                    .parse()
                    .map_err(|_| ScalarError::Parse(text.into(), "depth must be an integer".into()))?;
                ScalarConstant::liouville(depth)
            }
            "float" => {
                let x: f64 = rest
                    .parse()
                    .map_err(|_| ScalarError::Parse(text.into(), "not a float".into()))?;
                Ok(ScalarConstant::Float(x))
            }
            "complex" => parse_complex(rest).map_err(|e| ScalarError::Parse(text.into(), e)),
            other => Err(ScalarError::Parse(
                text.into(),
                format!("unknown scalar kind `{other}`"),
            )),
        }
    }
}

impl fmt::Display for ScalarConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarConstant::Rational(r) => write!(f, "rational:{r}"),
            ScalarConstant::Quadratic { u, v, d } => write!(f, "quadratic:{u}+{v}*sqrt({d})"),
            ScalarConstant::Liouville { depth } => write!(f, "liouville:{depth}"),
            ScalarConstant::Float(x) => write!(f, "float:{x}"),
            ScalarConstant::Complex { re, im } => write!(f, "complex:{re}+{im}*i"),
        }
    }
}

fn check_radicand(d: u64) -> Result<(), ScalarError> {
    if d < 2 {
        return Err(ScalarError::BadRadicand(d, "must be >= 2".into()));
    }
    let mut p = 2u64;
    while p.saturating_mul(p) <= d {
        if d % (p * p) == 0 {
            return Err(ScalarError::BadRadicand(
                d,
                format!("divisible by {}^2", p),
            ));
        }
        p += 1;
    }
    Ok(())
}

/// Parse `p/q`, an integer, or a finite decimal, exactly into a rational.
pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator `{p}`"))?;
        let q: BigInt = q
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator `{q}`"))?;
        if q.is_zero() {
            return Err("zero denominator".into());
        }
        return Ok(BigRational::new(p, q));
    }
    // Finite decimal such as `1.5` or `-0.25`; every such literal is an exact
    // rational, so no precision is lost here.
    let (sign, digits) = match text.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, fr)) => (i, fr),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err("empty number".into());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(format!("bad number `{text}`"));
    }
    let mut numer: BigInt = if int_part.is_empty() {
        BigInt::zero()
    } else {
        int_part.parse().map_err(|_| "bad integer part")?
    };
    let mut denom = BigInt::one();
    for c in frac_part.chars() {
        numer = numer * 10 + (c as u8 - b'0');
        denom *= 10;
    }
    Ok(BigRational::new(BigInt::from(sign) * numer, denom))
}

fn parse_quadratic(text: &str) -> Result<ScalarConstant, ScalarError> {
    // Form: u+v*sqrt(d) or u-v*sqrt(d); u and v rational literals.
    let err = |msg: &str| ScalarError::Parse(text.into(), msg.into());
    let open = text
        .find("sqrt(")
        .ok_or_else(|| err("expected `sqrt(d)`"))?;
    let close = text[open..]
        .find(')')
        .ok_or_else(|| err("unclosed sqrt("))?
        + open;
    let d: u64 = text[open + 5..close]
        .trim()
        .parse()
        .map_err(|_| err("radicand must be a positive integer"))?;
    let head = text[..open]
        .trim_end()
        .strip_suffix('*')
        .ok_or_else(|| err("expected `v*sqrt(d)`"))?
        .trim_end();
    // Split head into u and v at the last top-level +/- that is not a sign.
    let bytes = head.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-')
            && bytes[i - 1] != b'/'
            && bytes[i - 1] != b'+'
            && bytes[i - 1] != b'-'
            && !head[..i].trim().is_empty()
        {
            split = Some(i);
            break;
        }
    }
    let (u_text, v_text) = match split {
        Some(i) => (&head[..i], &head[i..]),
        None => ("0", head),
    };
    let u = parse_rational(u_text).map_err(|e| err(&e))?;
    let v_text = v_text.trim();
    let v = match v_text.strip_prefix('+') {
        Some(rest) => parse_rational(rest).map_err(|e| err(&e))?,
        None => parse_rational(v_text).map_err(|e| err(&e))?,
    };
    ScalarConstant::quadratic(u, v, d)
}

fn parse_complex(text: &str) -> Result<ScalarConstant, String> {
    // Form: re+im*i (or re-im*i); both parts exact decimal/fraction literals.
    let text = text.trim();
    let tail = text
        .strip_suffix('i')
        .ok_or_else(|| "expected `re+im*i`".to_string())?;
    let tail = tail
        .trim_end()
        .strip_suffix('*')
        .ok_or_else(|| "expected `im*i`".to_string())?
        .trim_end();
    let bytes = tail.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-')
            && bytes[i - 1] != b'/'
            && bytes[i - 1] != b'+'
            && bytes[i - 1] != b'-'
        {
            split = Some(i);
            break;
        }
    }
    let (re_text, im_text) = match split {
        Some(i) => (&tail[..i], &tail[i..]),
        None => ("0", tail),
    };
    let re = parse_rational(re_text)?;
    let im_text = im_text.trim();
    let im = match im_text.strip_prefix('+') {
        Some(rest) => parse_rational(rest)?,
        None => parse_rational(im_text)?,
    };
    Ok(ScalarConstant::Complex { re, im })
}

/// Exact element of the real quadratic field `Q(sqrt(d))`: `u + v*sqrt(d)`.
/// A pure rational is represented with `v = 0` (any `d`).
#[derive(Debug, Clone, PartialEq)]
pub struct ExactReal {
    pub u: BigRational,
    pub v: BigRational,
    pub d: u64,
}

impl ExactReal {
    pub fn rational(u: BigRational) -> Self {
        ExactReal {
            u,
            v: BigRational::zero(),
            d: 1,
        }
    }

    pub fn quadratic(u: BigRational, v: BigRational, d: u64) -> Self {
        ExactReal { u, v, d }
    }

    pub fn zero() -> Self {
        ExactReal::rational(BigRational::zero())
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    /// Add two elements; they must be compatible (same radicand, or at least
    /// one rational).  Returns `None` on a genuine field mismatch.
    pub fn add(&self, other: &ExactReal) -> Option<ExactReal> {
        let d = if self.v.is_zero() {
            other.d
        } else if other.v.is_zero() || other.d == self.d {
            self.d
        } else {
            return None;
        };
        Some(ExactReal {
            u: &self.u + &other.u,
            v: &self.v + &other.v,
            d,
        })
    }

    pub fn scale_rat(&self, c: &BigRational) -> ExactReal {
        ExactReal {
            u: &self.u * c,
            v: &self.v * c,
            d: self.d,
        }
    }

    pub fn neg(&self) -> ExactReal {
        ExactReal {
            u: -self.u.clone(),
            v: -self.v.clone(),
            d: self.d,
        }
    }

    pub fn is_zero(&self) -> bool {
        // sqrt(d) is irrational for squarefree d >= 2, so u + v*sqrt(d) = 0
        // forces u = v = 0.
        self.u.is_zero() && self.v.is_zero()
    }

    /// Exact sign: -1, 0, or +1.
    pub fn sign(&self) -> i32 {
        if self.v.is_zero() {
            return rat_sign(&self.u);
        }
        if self.u.is_zero() {
            return rat_sign(&self.v);
        }
        let su = rat_sign(&self.u);
        let sv = rat_sign(&self.v);
        if su == sv {
            return su;
        }
        // Opposite signs: compare u^2 against d*v^2.
        let u2 = &self.u * &self.u;
        let dv2 = &self.v * &self.v * BigRational::from(BigInt::from(self.d));
        match u2.cmp(&dv2) {
            std::cmp::Ordering::Greater => su,
            std::cmp::Ordering::Less => sv,
            std::cmp::Ordering::Equal => 0, // unreachable for squarefree d
        }
    }

    /// A certified strictly positive rational lower bound for `|self|`,
    /// or `None` when the value is exactly zero.
    ///
    /// For a pure rational this is `|u|` itself.  Otherwise the algebraic
    /// conjugate gives `|u + v*sqrt(d)| = |u^2 - d v^2| / |u - v*sqrt(d)|`,
    /// and `|u - v*sqrt(d)| <= |u| + |v|*ceil(sqrt(d))`.
    pub fn abs_lower_bound(&self) -> Option<BigRational> {
        if self.is_zero() {
            return None;
        }
        if self.v.is_zero() {
            return Some(self.u.abs());
        }
        let norm =
            (&self.u * &self.u - &self.v * &self.v * BigRational::from(BigInt::from(self.d))).abs();
        if norm.is_zero() {
            return None; // unreachable for squarefree d
        }
        let sqrt_ceil = BigRational::from(BigInt::from(int_sqrt_ceil(self.d)));
        let denom = self.u.abs() + self.v.abs() * sqrt_ceil;
        if denom.is_zero() {
            return Some(norm);
        }
        Some(norm / denom)
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.u) + rat_to_f64(&self.v) * (self.d as f64).sqrt()
    }
}

fn rat_sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn int_sqrt_ceil(d: u64) -> u64 {
    let mut r = (d as f64).sqrt() as u64;
    while r * r < d {
        r += 1;
    }
    r
}

/// Convert a big rational to f64, robust to components far beyond f64 range.
pub fn rat_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    if let Some(x) = r.to_f64() {
        if x.is_finite() {
            return x;
        }
    }
    // Fall back to a scaled conversion via bit lengths.
    let nbits = r.numer().bits() as i64;
    let dbits = r.denom().bits() as i64;
    let shift = nbits - dbits;
    if shift > 1_000 {
        if r.is_positive() {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        }
    } else if shift < -1_100 {
        0.0
    } else {
        // Should be representable; retry with explicit scaling.
        let scaled = r * BigRational::from(BigInt::from(2).pow(200u32));
        scaled.to_f64().map(|x| x / 2f64.powi(200)).unwrap_or(0.0)
    }
}

/// Certified zero/nonzero status of an evaluated small divisor.
#[derive(Debug, Clone, PartialEq)]
pub enum ZeroStatus {
    /// Exactly zero, proven in exact arithmetic.
    ExactZero,
    /// Nonzero with a certified rational lower bound on the magnitude.
    CertifiedNonzero { lower_bound: BigRational },
    /// f64 evaluation indistinguishable from zero at working precision
    /// (within the tracked 4-ulp error radius); no certification possible.
    NumericallyZero,
    /// f64 evaluation clearly nonzero, but the coefficient kind is inexact
    /// so no exact certificate exists.
    NumericallyNonzero,
}

/// The evaluated divisor `lambda + a*mu` (optionally shifted by a
/// perturbation) with its certification status.
#[derive(Debug, Clone)]
pub struct GapValue {
    /// f64 approximation of the complex value.
    pub approx: Complex64,
    /// Certification status of the magnitude.
    pub status: ZeroStatus,
}

impl GapValue {
    pub fn is_exact_zero(&self) -> bool {
        matches!(self.status, ZeroStatus::ExactZero)
    }

    pub fn is_certified_nonzero(&self) -> bool {
        matches!(self.status, ZeroStatus::CertifiedNonzero { .. })
    }

    /// Magnitude of the f64 approximation.
    pub fn magnitude(&self) -> f64 {
        self.approx.norm()
    }

    /// The certified lower bound as f64 (rounded toward zero is fine for
    /// reporting; certification claims live in the rational itself).
    pub fn lower_bound_f64(&self) -> Option<f64> {
        match &self.status {
            ZeroStatus::CertifiedNonzero { lower_bound } => Some(rat_to_f64(lower_bound)),
            _ => None,
        }
    }
}

/// Relative f64 error budget: 4 ulps on the combined evaluation.
const ULP_BUDGET: f64 = 4.0 * f64::EPSILON;

/// Evaluate the divisor `(two_lambda + a*two_mu)/2` exactly where possible.
///
/// `two_lambda`, `two_mu` are doubled eigenvalue indices, so half-integer
/// spectra stay in integer arithmetic.
pub fn gap(two_lambda: i64, a: &ScalarConstant, two_mu: i64) -> GapValue {
    gap_with_shift(two_lambda, a, two_mu, None)
}

/// Evaluate `(two_lambda + a*two_mu)/2 + shift` where `shift` is an exact
/// complex offset (used for constant perturbations: `shift = -i*q` becomes
/// `re = Im(q), im = -Re(q)` contributions).
///
/// `shift` is given as `(re, im)` exact parts; `None` means no shift.
pub fn gap_with_shift(
    two_lambda: i64,
    a: &ScalarConstant,
    two_mu: i64,
    shift: Option<(&ExactReal, &ExactReal)>,
) -> GapValue {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let lam = BigRational::from(BigInt::from(two_lambda)) * &half;
    let mu = BigRational::from(BigInt::from(two_mu)) * &half;

    if let (Some(a_re), Some(a_im)) = (a.re_exact(), a.im_exact()) {
        // Exact path: real part = lambda + Re(a)*mu + shift_re,
        //             imag part = Im(a)*mu + shift_im.
        let mut re = ExactReal::rational(lam.clone())
            .add(&a_re.scale_rat(&mu))
            .expect("field mismatch in real part");
        let mut im = ExactReal::rational(&a_im * &mu);
        if let Some((s_re, s_im)) = shift {
            re = match re.add(s_re) {
                Some(x) => x,
                None => return float_gap(two_lambda, a, two_mu, shift),
            };
            im = match im.add(s_im) {
                Some(x) => x,
                None => return float_gap(two_lambda, a, two_mu, shift),
            };
        }
        let approx = Complex64::new(re.to_f64(), im.to_f64());
        if re.is_zero() && im.is_zero() {
            return GapValue {
                approx: Complex64::new(0.0, 0.0),
                status: ZeroStatus::ExactZero,
            };
        }
        // |z| >= max(|Re z|, |Im z|): use the larger certified component bound.
        let bound = [re.abs_lower_bound(), im.abs_lower_bound()]
            .into_iter()
            .flatten()
            .max();
        let lower_bound = bound.expect("nonzero value must bound one component");
        return GapValue {
            approx,
            status: ZeroStatus::CertifiedNonzero { lower_bound },
        };
    }
    float_gap(two_lambda, a, two_mu, shift)
}

fn float_gap(
    two_lambda: i64,
    a: &ScalarConstant,
    two_mu: i64,
    shift: Option<(&ExactReal, &ExactReal)>,
) -> GapValue {
    let lam = two_lambda as f64 / 2.0;
    let mu = two_mu as f64 / 2.0;
    let av = a.to_complex_f64();
    let mut z = Complex64::new(lam, 0.0) + av * mu;
    if let Some((s_re, s_im)) = shift {
        z += Complex64::new(s_re.to_f64(), s_im.to_f64());
    }
    // Error scale: a few ulps relative to the magnitudes combined.
    let scale = lam.abs() + av.norm() * mu.abs() + 1.0;
    let status = if z.norm() <= ULP_BUDGET * scale {
        ZeroStatus::NumericallyZero
    } else {
        ZeroStatus::NumericallyNonzero
    };
    GapValue { approx: z, status }
}

/// The exact value `sum_{j=1..depth} 10^(-j!)` as a big rational.
pub fn liouville_value(depth: u32) -> BigRational {
    let mut acc = BigRational::zero();
    let mut fact: u64 = 1;
    for j in 1..=depth as u64 {
        fact *= j;
        let denom = BigInt::from(10u32).pow(fact as u32);
        acc += BigRational::new(BigInt::one(), denom);
    }
    acc
}

/// The convergent ladder `(p_j, q_j)` with `q_j = 10^(j!)` and
/// `p_j / q_j = sum_{i=1..j} 10^(-i!)`, for `j = 1..=depth`.
pub fn liouville_convergents(depth: u32) -> Result<Vec<(BigInt, BigInt)>, ScalarError> {
    if depth == 0 || depth > MAX_LIOUVILLE_DEPTH {
        return Err(ScalarError::BadLiouvilleDepth(depth));
    }
    let mut out = Vec::with_capacity(depth as usize);
    let mut fact: u64 = 1;
    for j in 1..=depth as u64 {
        fact *= j;
        let q = BigInt::from(10u32).pow(fact as u32);
        let value = liouville_value(j as u32);
        // p = value * q is integral because q = 10^(j!) clears every term.
        let p_rat = &value * BigRational::from(q.clone());
        debug_assert!(p_rat.is_integer());
        out.push((p_rat.to_integer(), q));
    }
    Ok(out)
}

/// An enclosure `[lo, hi]` of the *untruncated* badly-approximable constant
/// `sum_{j>=1} 10^(-j!)`, tight to depth `depth`: `lo` is the depth-`depth`
/// truncation and the tail is bounded by twice its first omitted term.
pub fn liouville_enclosure(depth: u32) -> (BigRational, BigRational) {
    let lo = liouville_value(depth);
    let mut fact: u64 = 1;
    for j in 1..=(depth as u64 + 1) {
        fact *= j;
    }
    let first_omitted = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(fact as u32));
    let hi = &lo + first_omitted * BigRational::from(BigInt::from(2));
    (lo, hi)
}
