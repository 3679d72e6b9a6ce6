//! Explicit scalar lower bounds.
//!
//! Every bound is a pure function of spectral scalars, so each one can be
//! unit-tested exhaustively on parameter grids. Matrix-level verification of
//! the corresponding operator inequalities lives in [`crate::verify`].
//!
//! For `A > B >= 0` with strict gap `m = ||(A - B)^{-1}||^{-1}`:
//!
//! - power/log estimates in terms of `||A||`: `||A||^r - (||A|| - m)^r` and
//!   `log ||A|| - log(||A|| - m)`;
//! - the sharper forms in terms of `||B||`: `f(||B|| + m) - f(||B||)` for a
//!   nonconstant operator monotone `f`, specialized to powers and `log`;
//! - resolvent estimates for `B^{-1} - A^{-1}`;
//! - the unit-interval key bound built from `f_lambda(t) = t/(1 - lambda t)`
//!   and its measure-weighted aggregate;
//! - Furuta-type estimates built on `k(b, m, p, q, r) =
//!   (b + m)^{(p+r)/q - r} - b^{(p+r)/q - r}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcrep::{FunctionKind, FunctionSpec};

/// The exponent triple `(p, q, r)` of the Furuta inequality, with the
/// base-domain constraints `p >= 0`, `q >= 1`, `r >= 0` enforced on
/// construction. Validity for specific theorems is a separate predicate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ExpWire")]
pub struct FurutaExponents {
    p: f64,
    q: f64,
    r: f64,
}

#[derive(Deserialize)]
struct ExpWire {
    p: f64,
    q: f64,
    r: f64,
}

impl TryFrom<ExpWire> for FurutaExponents {
    type Error = Error;

    fn try_from(w: ExpWire) -> Result<Self> {
        FurutaExponents::new(w.p, w.q, w.r)
    }
}

impl FurutaExponents {
    pub fn new(p: f64, q: f64, r: f64) -> Result<Self> {
        if !(p.is_finite() && q.is_finite() && r.is_finite()) {
            return Err(Error::ExponentDomainViolation(
                "exponents must be finite".into(),
            ));
        }
        if p < 0.0 {
            return Err(Error::ExponentDomainViolation(format!(
                "p >= 0 violated (p = {p})"
            )));
        }
        if q < 1.0 {
            return Err(Error::ExponentDomainViolation(format!(
                "q >= 1 violated (q = {q})"
            )));
        }
        if r < 0.0 {
            return Err(Error::ExponentDomainViolation(format!(
                "r >= 0 violated (r = {r})"
            )));
        }
        Ok(FurutaExponents { p, q, r })
    }

    /// The optimal-case triple with `q = (p + r) / (1 + r)`; requires
    /// `p >= 1` so that `q >= 1`.
    pub fn optimal(p: f64, r: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::ExponentDomainViolation(format!(
                "p >= 1 violated (p = {p})"
            )));
        }
        Self::new(p, (p + r) / (1.0 + r), r)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// The exponent `(p + r)/q - r` appearing in `k(b, m, p, q, r)`.
    pub fn k_exponent(&self) -> f64 {
        (self.p + self.r) / self.q - self.r
    }

    /// Relative slack applied to the inequality predicates so that exponents
    /// sitting exactly on a boundary (for example the optimal
    /// `q = (p+r)/(1+r)`, which rounds) are not rejected by one ulp.
    fn slack(&self) -> f64 {
        1e-12 * (1.0 + self.p.abs() + self.q.abs() + self.r.abs())
    }

    /// Furuta inequality domain: `(1 + r) q >= p + r`.
    pub fn fi_valid(&self) -> bool {
        (1.0 + self.r) * self.q >= self.p + self.r - self.slack()
    }

    /// Domain of the general estimate: additionally `p + r >= q r` and
    /// `0 < r <= 1`.
    pub fn thm41_valid(&self) -> bool {
        self.fi_valid()
            && self.p + self.r >= self.q * self.r - self.slack()
            && self.r > 0.0
            && self.r <= 1.0
    }

    /// Optimal case: `p >= 1` and `q = (p + r) / (1 + r)`.
    pub fn thm42_valid(&self) -> bool {
        let q_opt = (self.p + self.r) / (1.0 + self.r);
        self.p >= 1.0 && (self.q - q_opt).abs() <= 1e-12 * (1.0 + q_opt)
    }

    pub fn validate_fi(&self) -> Result<()> {
        if !self.fi_valid() {
            return Err(Error::ExponentDomainViolation(format!(
                "(1+r)q >= p+r violated (p = {}, q = {}, r = {})",
                self.p, self.q, self.r
            )));
        }
        Ok(())
    }

    /// Validation used by the general estimate. Accepts `r = 0` as the
    /// degenerate reduction (the bound then collapses to the `||B||`-based
    /// power estimate), while the sweep predicate [`Self::thm41_valid`]
    /// keeps the strict `0 < r <= 1` of the statement.
    pub fn validate_thm41(&self) -> Result<()> {
        self.validate_fi()?;
        if self.p + self.r < self.q * self.r - self.slack() {
            return Err(Error::ExponentDomainViolation(format!(
                "p+r >= qr violated (p = {}, q = {}, r = {})",
                self.p, self.q, self.r
            )));
        }
        if self.r > 1.0 {
            return Err(Error::ExponentDomainViolation(format!(
                "r <= 1 violated (r = {})",
                self.r
            )));
        }
        Ok(())
    }
}

fn finite_positive(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "{name} must be finite and > 0, got {v}"
        )));
    }
    Ok(())
}

/// `||A||^r - (||A|| - m)^r` for `0 < r <= 1` and `0 < m <= ||A||`.
pub fn theorem_a_bound(r: f64, norm_a: f64, m: f64) -> Result<f64> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::InvalidParams(format!(
            "exponent must satisfy 0 < r <= 1, got {r}"
        )));
    }
    finite_positive("norm_a", norm_a)?;
    finite_positive("m", m)?;
    if m > norm_a {
        return Err(Error::InvalidParams(format!(
            "m <= ||A|| violated (m = {m}, ||A|| = {norm_a}); would require B not >= 0"
        )));
    }
    Ok(norm_a.powf(r) - (norm_a - m).powf(r))
}

/// `log ||A|| - log(||A|| - m)` for `0 < m < ||A||`.
pub fn theorem_a_log_bound(norm_a: f64, m: f64) -> Result<f64> {
    finite_positive("norm_a", norm_a)?;
    finite_positive("m", m)?;
    if m >= norm_a {
        return Err(Error::InvalidParams(format!(
            "m < ||A|| violated (m = {m}, ||A|| = {norm_a})"
        )));
    }
    Ok(norm_a.ln() - (norm_a - m).ln())
}

/// `f(||B|| + m) - f(||B||)` for a nonconstant monotone-class spec.
pub fn theorem_b_bound(f: &FunctionSpec, norm_b: f64, m: f64) -> Result<f64> {
    finite_positive("m", m)?;
    if f.is_constant() {
        return Err(Error::ConstantFunction);
    }
    Ok(f.eval(norm_b + m)? - f.eval(norm_b)?)
}

/// The pair `((||B|| + m)^r - ||B||^r, log(||B|| + m) - log ||B||)`.
pub fn theorem_c_bounds(r: f64, norm_b: f64, m: f64) -> Result<(f64, f64)> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::InvalidParams(format!(
            "exponent must satisfy 0 < r <= 1, got {r}"
        )));
    }
    finite_positive("norm_b", norm_b)?;
    finite_positive("m", m)?;
    let power = (norm_b + m).powf(r) - norm_b.powf(r);
    let log = (norm_b + m).ln() - norm_b.ln();
    Ok((power, log))
}

/// Resolvent estimates for `B^{-1} - A^{-1}`:
/// `(i) 1/(||A|| - m) - 1/||A||` and `(ii) m / ((||B|| + m) ||B||)`.
pub fn lemma31_bounds(norm_a: f64, norm_b: f64, m: f64) -> Result<(f64, f64)> {
    finite_positive("norm_a", norm_a)?;
    finite_positive("norm_b", norm_b)?;
    finite_positive("m", m)?;
    if m >= norm_a {
        return Err(Error::InvalidParams(format!(
            "m < ||A|| violated (m = {m}, ||A|| = {norm_a})"
        )));
    }
    let bound_i = 1.0 / (norm_a - m) - 1.0 / norm_a;
    let bound_ii = m / ((norm_b + m) * norm_b);
    Ok((bound_i, bound_ii))
}

/// Unit-interval key bound for `f_lambda(t) = t / (1 - lambda t)`:
///
/// - `f_lambda(M_B + m) - f_lambda(M_B)` for `-1 < lambda <= 0`;
/// - `f_lambda(m_A) - f_lambda(m_A - m)` for `0 < lambda < 1`.
///
/// The case `lambda = 0` returns `m` exactly.
pub fn key_lemma_bound(lambda: f64, m_b_max: f64, m_a_min: f64, m: f64) -> Result<f64> {
    if !(lambda > -1.0 && lambda < 1.0) {
        return Err(Error::DomainViolation(format!(
            "lambda must lie in (-1, 1), got {lambda}"
        )));
    }
    finite_positive("m", m)?;
    let unit = |name: &str, v: f64| -> Result<()> {
        if !(v > -1.0 && v < 1.0) {
            return Err(Error::DomainViolation(format!(
                "{name} = {v} outside (-1, 1)"
            )));
        }
        Ok(())
    };
    let mob = |t: f64| t / (1.0 - lambda * t);
    if lambda == 0.0 {
        return Ok(m);
    }
    if lambda < 0.0 {
        unit("M_B", m_b_max)?;
        unit("M_B + m", m_b_max + m)?;
        Ok(mob(m_b_max + m) - mob(m_b_max))
    } else {
        unit("m_A", m_a_min)?;
        unit("m_A - m", m_a_min - m)?;
        Ok(mob(m_a_min) - mob(m_a_min - m))
    }
}

/// Measure-weighted aggregate of [`key_lemma_bound`] for a unit-interval
/// monotone representation: `f'(0) * sum_i w_i * key(lambda_i, M_B, m_A, m)`.
pub fn finite_interval_monotone_bound(
    f: &FunctionSpec,
    m_b_max: f64,
    m_a_min: f64,
    m: f64,
) -> Result<f64> {
    let quad = match f.kind() {
        FunctionKind::QuadMonotoneUnit(q) => q,
        _ => {
            return Err(Error::InvalidParams(format!(
                "finite-interval bound requires a QuadMonotoneUnit spec, got {}",
                f.id()
            )))
        }
    };
    if quad.fp0() == 0.0 {
        return Err(Error::ConstantFunction);
    }
    let mut acc = 0.0;
    for (lambda, w) in quad.measure().iter() {
        acc += w * key_lemma_bound(lambda, m_b_max, m_a_min, m)?;
    }
    Ok(quad.fp0() * acc)
}

/// `k(b, m, p, q, r) = (b + m)^e - b^e` with `e = (p + r)/q - r`,
/// computed as-is; `e = 0` and `e = 1` take exact fast paths.
pub fn furuta_k(b: f64, m: f64, p: f64, q: f64, r: f64) -> Result<f64> {
    if !(b.is_finite() && b >= 0.0) {
        return Err(Error::InvalidParams(format!("b >= 0 violated (b = {b})")));
    }
    finite_positive("m", m)?;
    if q == 0.0 {
        return Err(Error::InvalidParams("q must be nonzero".into()));
    }
    let e = (p + r) / q - r;
    if e == 0.0 {
        return Ok(0.0);
    }
    if e == 1.0 {
        return Ok(m);
    }
    if b == 0.0 && e < 0.0 {
        return Err(Error::InvalidParams(format!(
            "b = 0 with negative exponent e = {e}"
        )));
    }
    Ok((b + m).powf(e) - b.powf(e))
}

/// `k(||B||, m, p, q, r) * m_A^r` under the general-estimate exponent domain.
pub fn theorem41_bound(norm_b: f64, m: f64, exps: &FurutaExponents, m_a: f64) -> Result<f64> {
    exps.validate_thm41()?;
    finite_positive("m", m)?;
    finite_positive("m_a", m_a)?;
    let k = furuta_k(norm_b, m, exps.p(), exps.q(), exps.r())?;
    Ok(k * m_a.powf(exps.r()))
}

/// `m * m_A^r` — the optimal-case estimate.
pub fn theorem42_bound(m: f64, m_a: f64, r: f64) -> Result<f64> {
    finite_positive("m", m)?;
    finite_positive("m_a", m_a)?;
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::InvalidParams(format!("r >= 0 violated (r = {r})")));
    }
    Ok(m * m_a.powf(r))
}

/// `||A||^{(p+r)/q} - (||A||^{1+r} - m m_A^r)^{(p+r)/(q(1+r))}` for FI-valid
/// exponents; requires `||A||^{1+r} > m m_A^r` (automatic for `A > B >= 0`).
pub fn corollary43_bound(
    norm_a: f64,
    m: f64,
    m_a: f64,
    exps: &FurutaExponents,
) -> Result<f64> {
    exps.validate_fi()?;
    finite_positive("norm_a", norm_a)?;
    finite_positive("m", m)?;
    finite_positive("m_a", m_a)?;
    let (p, q, r) = (exps.p(), exps.q(), exps.r());
    let shrunk = norm_a.powf(1.0 + r) - m * m_a.powf(r);
    if shrunk <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "||A||^(1+r) > m * m_A^r violated ({} vs {})",
            norm_a.powf(1.0 + r),
            m * m_a.powf(r)
        )));
    }
    let alpha = (p + r) / (q * (1.0 + r));
    Ok(norm_a.powf((p + r) / q) - shrunk.powf(alpha))
}
