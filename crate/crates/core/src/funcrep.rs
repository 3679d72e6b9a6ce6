//! Scalar function specifications.
//!
//! A [`FunctionSpec`] couples a scalar function with a declared domain and an
//! advisory class claim. The catalog covers affine maps, powers, `log`,
//! `1/x`, `x^2` and the two Möbius families on `(-1, 1)`:
//! `t / (1 - lambda t)` (monotone building block) and
//! `x^2 / (1 - lambda x)` (convex building block). Functions can also be
//! assembled from discrete quadrature measures:
//!
//! - `f(t) = f(0) + f'(0) * sum_i w_i t/(1 - lambda_i t)` with nodes in
//!   `(-1, 1)` and total weight one;
//! - `f(x) = f(0) + alpha x + sum_i w_i x^2/(1 - lambda_i x)` with nodes in
//!   `[-1, 1]`;
//! - `f(t) = a + b t + sum_i w_i (1 + t s_i)/(s_i - t)` with nodes
//!   `s_i <= 0`, on `(0, inf)`.
//!
//! The class claim is metadata: the Löwner-matrix certifier
//! [`certify_monotone`] recomputes monotonicity from evaluations, and the
//! checkers in [`crate::verify`] never trust the claim.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::HermitianMatrix;
use crate::seedmix;

const CERTIFY_TAG: u64 = seedmix::fnv1a(b"certify");

/// Relative factor for the domain margin that keeps evaluations away from
/// endpoint singularities such as `1/(1 - lambda t)`.
const DOMAIN_MARGIN_SCALE: f64 = 1e-8;

/// Relative factor below which divided differences are replaced by the
/// analytic derivative in Löwner matrices.
const MERGE_EPS_SCALE: f64 = 1e-7;

/// An interval with open/closed flags per endpoint; `lo < hi` always holds
/// and either endpoint may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
    lo_closed: bool,
    hi_closed: bool,
}

impl Interval {
    pub fn new(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Self {
        assert!(lo < hi, "interval requires lo < hi, got [{lo}, {hi}]");
        assert!(!lo.is_nan() && !hi.is_nan());
        Interval {
            lo,
            hi,
            lo_closed: lo_closed && lo.is_finite(),
            hi_closed: hi_closed && hi.is_finite(),
        }
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, false, false)
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Self::new(lo, hi, true, true)
    }

    /// `(0, inf)`.
    pub fn positive_halfline() -> Self {
        Self::open(0.0, f64::INFINITY)
    }

    /// `(-inf, inf)`.
    pub fn real_line() -> Self {
        Self::open(f64::NEG_INFINITY, f64::INFINITY)
    }

    /// `(-1, 1)`.
    pub fn unit() -> Self {
        Self::open(-1.0, 1.0)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Margin kept between evaluation points and finite endpoints. For a
    /// bounded interval this is `1e-8 * length`; a half-line uses
    /// `1e-8 * (1 + |finite endpoint|)`.
    pub fn endpoint_margin(&self) -> f64 {
        if self.is_bounded() {
            DOMAIN_MARGIN_SCALE * self.length()
        } else if self.lo.is_finite() {
            DOMAIN_MARGIN_SCALE * (1.0 + self.lo.abs())
        } else if self.hi.is_finite() {
            DOMAIN_MARGIN_SCALE * (1.0 + self.hi.abs())
        } else {
            0.0
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        let above = t > self.lo || (self.lo_closed && t == self.lo);
        let below = t < self.hi || (self.hi_closed && t == self.hi);
        t.is_finite() && above && below
    }

    /// Strict interior containment with the endpoint margin applied at every
    /// finite endpoint.
    pub fn contains_with_margin(&self, t: f64) -> bool {
        if !t.is_finite() {
            return false;
        }
        let em = self.endpoint_margin();
        let above = !self.lo.is_finite() || t >= self.lo + em;
        let below = !self.hi.is_finite() || t <= self.hi - em;
        above && below
    }

    /// Whether `self` is contained in `other`.
    pub fn subset_of(&self, other: &Interval) -> bool {
        let lo_ok = other.lo < self.lo
            || (other.lo == self.lo && (other.lo_closed || !self.lo_closed))
            || (other.lo == f64::NEG_INFINITY && self.lo == f64::NEG_INFINITY);
        let hi_ok = other.hi > self.hi
            || (other.hi == self.hi && (other.hi_closed || !self.hi_closed))
            || (other.hi == f64::INFINITY && self.hi == f64::INFINITY);
        lo_ok && hi_ok
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        write!(f, "{l}{}, {}{r}", self.lo, self.hi)
    }
}

/// A finite positive measure given by nodes and nonnegative weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureWire", into = "MeasureWire")]
pub struct DiscreteMeasure {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct MeasureWire {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl From<DiscreteMeasure> for MeasureWire {
    fn from(m: DiscreteMeasure) -> Self {
        MeasureWire {
            nodes: m.nodes,
            weights: m.weights,
        }
    }
}

impl TryFrom<MeasureWire> for DiscreteMeasure {
    type Error = Error;

    fn try_from(w: MeasureWire) -> Result<Self> {
        DiscreteMeasure::new(w.nodes, w.weights)
    }
}

impl DiscreteMeasure {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.len() != weights.len() {
            return Err(Error::InvalidMeasure(format!(
                "nodes and weights must have the same length ({} vs {})",
                nodes.len(),
                weights.len()
            )));
        }
        if nodes.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMeasure("nodes must be finite".into()));
        }
        for &w in &weights {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidMeasure(format!(
                    "weights must be finite and nonnegative, got {w}"
                )));
            }
        }
        Ok(DiscreteMeasure { nodes, weights })
    }

    /// The zero measure.
    pub fn empty() -> Self {
        DiscreteMeasure {
            nodes: Vec::new(),
            weights: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
    }

    /// Rescale so the total weight is one.
    pub fn normalized(&self) -> Result<Self> {
        let total = self.total_weight();
        if total <= 0.0 {
            return Err(Error::InvalidMeasure(
                "cannot normalize a measure with zero total weight".into(),
            ));
        }
        Ok(DiscreteMeasure {
            nodes: self.nodes.clone(),
            weights: self.weights.iter().map(|w| w / total).collect(),
        })
    }

    /// Gauss–Legendre nodes and weights on `[-1, 1]` (weights sum to 2);
    /// the stand-in for a "generic" continuous measure in tests.
    pub fn gauss_legendre(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess for the i-th largest root of P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..64 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-15 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        DiscreteMeasure { nodes, weights }
    }
}

/// Legendre polynomial `P_n(x)` and its derivative by the three-term
/// recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Advisory operator class of a function spec.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassClaim {
    OperatorMonotone,
    OperatorConvex,
    Neither,
}

/// Payload of the unit-interval monotone representation
/// `f(t) = f0 + fp0 * integral of t/(1 - lambda t) d mu(lambda)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadMonotoneUnit {
    f0: f64,
    fp0: f64,
    measure: DiscreteMeasure,
}

impl QuadMonotoneUnit {
    pub fn f0(&self) -> f64 {
        self.f0
    }

    pub fn fp0(&self) -> f64 {
        self.fp0
    }

    /// Probability measure on `(-1, 1)` (normalized on construction).
    pub fn measure(&self) -> &DiscreteMeasure {
        &self.measure
    }
}

/// Payload of the unit-interval convex representation
/// `f(x) = f0 + alpha x + integral of x^2/(1 - lambda x) d mu(lambda)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadConvexUnit {
    f0: f64,
    alpha: f64,
    measure: DiscreteMeasure,
}

impl QuadConvexUnit {
    pub fn f0(&self) -> f64 {
        self.f0
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn measure(&self) -> &DiscreteMeasure {
        &self.measure
    }
}

/// Payload of the half-line monotone representation
/// `f(t) = a + b t + integral of (1 + t s)/(s - t) d m(s)` with `s <= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadMonotoneHalfline {
    a: f64,
    b: f64,
    measure: DiscreteMeasure,
}

impl QuadMonotoneHalfline {
    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn measure(&self) -> &DiscreteMeasure {
        &self.measure
    }
}

/// The function kinds of the catalog.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionKind {
    Affine { c0: f64, c1: f64 },
    Power { r: f64 },
    Log,
    Inverse,
    Square,
    MobiusMonotone { lambda: f64 },
    MobiusConvex { lambda: f64 },
    QuadMonotoneUnit(QuadMonotoneUnit),
    QuadConvexUnit(QuadConvexUnit),
    QuadMonotoneHalfline(QuadMonotoneHalfline),
}

/// A scalar function with a declared domain and advisory class claim.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecWire", into = "SpecWire")]
pub struct FunctionSpec {
    kind: FunctionKind,
    domain: Interval,
    class_claim: ClassClaim,
}

fn mobius(lambda: f64, t: f64) -> f64 {
    t / (1.0 - lambda * t)
}

impl FunctionSpec {
    pub fn affine(c0: f64, c1: f64) -> Self {
        let class_claim = if c1 >= 0.0 {
            ClassClaim::OperatorMonotone
        } else {
            ClassClaim::Neither
        };
        FunctionSpec {
            kind: FunctionKind::Affine { c0, c1 },
            domain: Interval::real_line(),
            class_claim,
        }
    }

    /// `t^r` on `(0, inf)`; operator monotone exactly for `0 < r <= 1`
    /// (Löwner–Heinz). Other exponents are accepted with claim `Neither`.
    pub fn power(r: f64) -> Result<Self> {
        if !r.is_finite() {
            return Err(Error::InvalidParams(format!("power exponent {r}")));
        }
        let class_claim = if r > 0.0 && r <= 1.0 {
            ClassClaim::OperatorMonotone
        } else {
            ClassClaim::Neither
        };
        Ok(FunctionSpec {
            kind: FunctionKind::Power { r },
            domain: Interval::positive_halfline(),
            class_claim,
        })
    }

    pub fn log() -> Self {
        FunctionSpec {
            kind: FunctionKind::Log,
            domain: Interval::positive_halfline(),
            class_claim: ClassClaim::OperatorMonotone,
        }
    }

    pub fn inverse() -> Self {
        FunctionSpec {
            kind: FunctionKind::Inverse,
            domain: Interval::positive_halfline(),
            class_claim: ClassClaim::OperatorConvex,
        }
    }

    pub fn square() -> Self {
        FunctionSpec {
            kind: FunctionKind::Square,
            domain: Interval::real_line(),
            class_claim: ClassClaim::OperatorConvex,
        }
    }

    /// `f_lambda(t) = t / (1 - lambda t)` on `(-1, 1)`, `lambda in (-1, 1)`.
    pub fn mobius_monotone(lambda: f64) -> Result<Self> {
        if !(lambda > -1.0 && lambda < 1.0) {
            return Err(Error::InvalidParams(format!(
                "mobius monotone parameter must lie in (-1, 1), got {lambda}"
            )));
        }
        Ok(FunctionSpec {
            kind: FunctionKind::MobiusMonotone { lambda },
            domain: Interval::unit(),
            class_claim: ClassClaim::OperatorMonotone,
        })
    }

    /// `f_lambda(x) = x^2 / (1 - lambda x)` on `(-1, 1)`, `|lambda| <= 1`.
    pub fn mobius_convex(lambda: f64) -> Result<Self> {
        if !(lambda.abs() <= 1.0) {
            return Err(Error::InvalidParams(format!(
                "mobius convex parameter must satisfy |lambda| <= 1, got {lambda}"
            )));
        }
        Ok(FunctionSpec {
            kind: FunctionKind::MobiusConvex { lambda },
            domain: Interval::unit(),
            class_claim: ClassClaim::OperatorConvex,
        })
    }

    /// Assemble an operator convex function on `(-1, 1)` from
    /// `f(x) = f0 + alpha x + sum_i w_i x^2 / (1 - lambda_i x)`.
    ///
    /// Nodes must lie in `[-1, 1]`; the result is nonlinear exactly when the
    /// measure has positive total weight.
    pub fn build_convex_from_measure(
        f0: f64,
        alpha: f64,
        measure: DiscreteMeasure,
    ) -> Result<Self> {
        if !f0.is_finite() || !alpha.is_finite() {
            return Err(Error::InvalidParams("f0 and alpha must be finite".into()));
        }
        for &node in measure.nodes() {
            if !(-1.0..=1.0).contains(&node) {
                return Err(Error::InvalidMeasure(format!(
                    "convex representation node {node} outside [-1, 1]"
                )));
            }
        }
        Ok(FunctionSpec {
            kind: FunctionKind::QuadConvexUnit(QuadConvexUnit { f0, alpha, measure }),
            domain: Interval::unit(),
            class_claim: ClassClaim::OperatorConvex,
        })
    }

    /// Assemble an operator monotone function on `(-1, 1)` from
    /// `f(t) = f0 + fp0 * sum_i w_i t / (1 - lambda_i t)`.
    ///
    /// Nodes must lie strictly inside `(-1, 1)`; the measure is normalized to
    /// total weight one, mirroring the factoring of `f'(0)` outside the
    /// integral. `fp0 = 0` yields the constant `f0`.
    pub fn build_monotone_from_measure(
        f0: f64,
        fp0: f64,
        measure: DiscreteMeasure,
    ) -> Result<Self> {
        if !f0.is_finite() || !fp0.is_finite() || fp0 < 0.0 {
            return Err(Error::InvalidParams(format!(
                "require finite f0 and fp0 >= 0, got f0={f0}, fp0={fp0}"
            )));
        }
        for &node in measure.nodes() {
            if !(node > -1.0 && node < 1.0) {
                return Err(Error::InvalidMeasure(format!(
                    "monotone representation node {node} at or outside (-1, 1)"
                )));
            }
        }
        let measure = if fp0 > 0.0 {
            measure.normalized()?
        } else {
            measure
        };
        Ok(FunctionSpec {
            kind: FunctionKind::QuadMonotoneUnit(QuadMonotoneUnit { f0, fp0, measure }),
            domain: Interval::unit(),
            class_claim: ClassClaim::OperatorMonotone,
        })
    }

    /// Assemble an operator monotone function on `(0, inf)` from
    /// `f(t) = a + b t + sum_i w_i (1 + t s_i) / (s_i - t)` with `s_i <= 0`.
    pub fn build_monotone_halfline(a: f64, b: f64, measure: DiscreteMeasure) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || b < 0.0 {
            return Err(Error::InvalidParams(format!(
                "require finite a and b >= 0, got a={a}, b={b}"
            )));
        }
        for &node in measure.nodes() {
            if node > 0.0 {
                return Err(Error::InvalidMeasure(format!(
                    "half-line representation node {node} must satisfy s <= 0"
                )));
            }
        }
        Ok(FunctionSpec {
            kind: FunctionKind::QuadMonotoneHalfline(QuadMonotoneHalfline { a, b, measure }),
            domain: Interval::positive_halfline(),
            class_claim: ClassClaim::OperatorMonotone,
        })
    }

    /// Restrict the domain. The new domain must be contained in the current
    /// one, so evaluations can never reach a singularity.
    pub fn with_domain(mut self, domain: Interval) -> Result<Self> {
        if !domain.subset_of(&self.domain) {
            return Err(Error::InvalidParams(format!(
                "domain {domain} is not contained in {}",
                self.domain
            )));
        }
        self.domain = domain;
        Ok(self)
    }

    /// Override the advisory class claim (never trusted by checkers).
    pub fn with_class_claim(mut self, claim: ClassClaim) -> Self {
        self.class_claim = claim;
        self
    }

    pub fn kind(&self) -> &FunctionKind {
        &self.kind
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    pub fn class_claim(&self) -> ClassClaim {
        self.class_claim
    }

    /// Stable short identifier used in reports.
    pub fn id(&self) -> String {
        match &self.kind {
            FunctionKind::Affine { c0, c1 } => format!("affine({c0},{c1})"),
            FunctionKind::Power { r } => format!("pow({r})"),
            FunctionKind::Log => "log".into(),
            FunctionKind::Inverse => "inverse".into(),
            FunctionKind::Square => "square".into(),
            FunctionKind::MobiusMonotone { lambda } => format!("mobius_monotone({lambda})"),
            FunctionKind::MobiusConvex { lambda } => format!("mobius_convex({lambda})"),
            FunctionKind::QuadMonotoneUnit(q) => {
                format!("quad_monotone_unit(n={})", q.measure.len())
            }
            FunctionKind::QuadConvexUnit(q) => format!("quad_convex_unit(n={})", q.measure.len()),
            FunctionKind::QuadMonotoneHalfline(h) => {
                format!("halfline(a={},b={},n={})", h.a, h.b, h.measure.len())
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        match &self.kind {
            FunctionKind::Affine { c1, .. } => *c1 == 0.0,
            FunctionKind::Power { r } => *r == 0.0,
            FunctionKind::Log | FunctionKind::Inverse | FunctionKind::Square => false,
            FunctionKind::MobiusMonotone { .. } | FunctionKind::MobiusConvex { .. } => false,
            FunctionKind::QuadMonotoneUnit(q) => q.fp0 == 0.0,
            FunctionKind::QuadConvexUnit(q) => q.alpha == 0.0 && q.measure.total_weight() == 0.0,
            FunctionKind::QuadMonotoneHalfline(h) => {
                h.b == 0.0 && h.measure.total_weight() == 0.0
            }
        }
    }

    pub fn is_linear(&self) -> bool {
        self.is_constant()
            || match &self.kind {
                FunctionKind::Affine { .. } => true,
                FunctionKind::Power { r } => *r == 1.0,
                FunctionKind::QuadConvexUnit(q) => q.measure.total_weight() == 0.0,
                FunctionKind::QuadMonotoneHalfline(h) => h.measure.total_weight() == 0.0,
                FunctionKind::QuadMonotoneUnit(q) => q.measure.nodes().iter().all(|&x| x == 0.0),
                _ => false,
            }
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        if !self.domain.contains_with_margin(t) {
            return Err(Error::DomainViolation(format!(
                "{t} is at or beyond the boundary of {} for {}",
                self.domain,
                self.id()
            )));
        }
        Ok(())
    }

    /// Evaluate at `t`. The argument must sit inside the domain with margin.
    pub fn eval(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        Ok(self.eval_unchecked(t))
    }

    fn eval_unchecked(&self, t: f64) -> f64 {
        match &self.kind {
            FunctionKind::Affine { c0, c1 } => c0 + c1 * t,
            FunctionKind::Power { r } => t.powf(*r),
            FunctionKind::Log => t.ln(),
            FunctionKind::Inverse => t.recip(),
            FunctionKind::Square => t * t,
            FunctionKind::MobiusMonotone { lambda } => mobius(*lambda, t),
            FunctionKind::MobiusConvex { lambda } => t * t / (1.0 - lambda * t),
            FunctionKind::QuadMonotoneUnit(q) => {
                let integral: f64 = q.measure.iter().map(|(l, w)| w * mobius(l, t)).sum();
                q.f0 + q.fp0 * integral
            }
            FunctionKind::QuadConvexUnit(q) => {
                let integral: f64 = q
                    .measure
                    .iter()
                    .map(|(l, w)| w * t * t / (1.0 - l * t))
                    .sum();
                q.f0 + q.alpha * t + integral
            }
            FunctionKind::QuadMonotoneHalfline(h) => {
                let integral: f64 = h
                    .measure
                    .iter()
                    .map(|(s, w)| w * (1.0 + t * s) / (s - t))
                    .sum();
                h.a + h.b * t + integral
            }
        }
    }

    /// Analytic derivative at an interior point; term-wise for the
    /// quadrature kinds.
    pub fn eval_derivative(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        Ok(self.derivative_unchecked(t))
    }

    fn derivative_unchecked(&self, t: f64) -> f64 {
        match &self.kind {
            FunctionKind::Affine { c1, .. } => *c1,
            FunctionKind::Power { r } => r * t.powf(r - 1.0),
            FunctionKind::Log => t.recip(),
            FunctionKind::Inverse => -1.0 / (t * t),
            FunctionKind::Square => 2.0 * t,
            FunctionKind::MobiusMonotone { lambda } => {
                let d = 1.0 - lambda * t;
                1.0 / (d * d)
            }
            FunctionKind::MobiusConvex { lambda } => {
                let d = 1.0 - lambda * t;
                (2.0 * t - lambda * t * t) / (d * d)
            }
            FunctionKind::QuadMonotoneUnit(q) => {
                let integral: f64 = q
                    .measure
                    .iter()
                    .map(|(l, w)| {
                        let d = 1.0 - l * t;
                        w / (d * d)
                    })
                    .sum();
                q.fp0 * integral
            }
            FunctionKind::QuadConvexUnit(q) => {
                let integral: f64 = q
                    .measure
                    .iter()
                    .map(|(l, w)| {
                        let d = 1.0 - l * t;
                        w * (2.0 * t - l * t * t) / (d * d)
                    })
                    .sum();
                q.alpha + integral
            }
            FunctionKind::QuadMonotoneHalfline(h) => {
                let integral: f64 = h
                    .measure
                    .iter()
                    .map(|(s, w)| {
                        let d = s - t;
                        w * (1.0 + s * s) / (d * d)
                    })
                    .sum();
                h.b + integral
            }
        }
    }
}

// ---------------------------------------------------------------------------
// JSON wire format: {"kind": "...", "params": {...}, "domain": [lo, hi]}
// with null endpoints for unbounded domains.
// ---------------------------------------------------------------------------

#[derive(Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ParamsWire {
    #[serde(skip_serializing_if = "Option::is_none")]
    c0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    f0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fp0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    measure: Option<DiscreteMeasure>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecWire {
    kind: String,
    #[serde(default)]
    params: ParamsWire,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    domain: Option<[Option<f64>; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    class_claim: Option<ClassClaim>,
}

fn req(name: &str, v: Option<f64>) -> Result<f64> {
    v.ok_or_else(|| Error::InvalidParams(format!("missing parameter '{name}'")))
}

fn req_measure(v: Option<DiscreteMeasure>) -> Result<DiscreteMeasure> {
    v.ok_or_else(|| Error::InvalidParams("missing parameter 'measure'".into()))
}

impl TryFrom<SpecWire> for FunctionSpec {
    type Error = Error;

    fn try_from(w: SpecWire) -> Result<Self> {
        let p = w.params;
        let mut spec = match w.kind.as_str() {
            "Affine" => FunctionSpec::affine(req("c0", p.c0)?, req("c1", p.c1)?),
            "Power" => FunctionSpec::power(req("r", p.r)?)?,
            "Log" => FunctionSpec::log(),
            "Inverse" => FunctionSpec::inverse(),
            "Square" => FunctionSpec::square(),
            "MobiusMonotone" => FunctionSpec::mobius_monotone(req("lambda", p.lambda)?)?,
            "MobiusConvex" => FunctionSpec::mobius_convex(req("lambda", p.lambda)?)?,
            "QuadMonotoneUnit" => FunctionSpec::build_monotone_from_measure(
                req("f0", p.f0)?,
                req("fp0", p.fp0)?,
                req_measure(p.measure)?,
            )?,
            "QuadConvexUnit" => FunctionSpec::build_convex_from_measure(
                req("f0", p.f0)?,
                req("alpha", p.alpha)?,
                req_measure(p.measure)?,
            )?,
            "QuadMonotoneHalfline" => FunctionSpec::build_monotone_halfline(
                req("a", p.a)?,
                req("b", p.b)?,
                req_measure(p.measure)?,
            )?,
            other => {
                return Err(Error::InvalidParams(format!("unknown function kind '{other}'")))
            }
        };
        if let Some([lo, hi]) = w.domain {
            let lo = lo.unwrap_or(f64::NEG_INFINITY);
            let hi = hi.unwrap_or(f64::INFINITY);
            if !(lo < hi) {
                return Err(Error::InvalidParams(format!(
                    "domain requires lo < hi, got [{lo}, {hi}]"
                )));
            }
            spec = spec.with_domain(Interval::open(lo, hi))?;
        }
        if let Some(claim) = w.class_claim {
            spec = spec.with_class_claim(claim);
        }
        Ok(spec)
    }
}

impl From<FunctionSpec> for SpecWire {
    fn from(f: FunctionSpec) -> Self {
        let mut p = ParamsWire::default();
        let kind = match f.kind {
            FunctionKind::Affine { c0, c1 } => {
                p.c0 = Some(c0);
                p.c1 = Some(c1);
                "Affine"
            }
            FunctionKind::Power { r } => {
                p.r = Some(r);
                "Power"
            }
            FunctionKind::Log => "Log",
            FunctionKind::Inverse => "Inverse",
            FunctionKind::Square => "Square",
            FunctionKind::MobiusMonotone { lambda } => {
                p.lambda = Some(lambda);
                "MobiusMonotone"
            }
            FunctionKind::MobiusConvex { lambda } => {
                p.lambda = Some(lambda);
                "MobiusConvex"
            }
            FunctionKind::QuadMonotoneUnit(q) => {
                p.f0 = Some(q.f0);
                p.fp0 = Some(q.fp0);
                p.measure = Some(q.measure);
                "QuadMonotoneUnit"
            }
            FunctionKind::QuadConvexUnit(q) => {
                p.f0 = Some(q.f0);
                p.alpha = Some(q.alpha);
                p.measure = Some(q.measure);
                "QuadConvexUnit"
            }
            FunctionKind::QuadMonotoneHalfline(h) => {
                p.a = Some(h.a);
                p.b = Some(h.b);
                p.measure = Some(h.measure);
                "QuadMonotoneHalfline"
            }
        };
        let enc = |v: f64| if v.is_finite() { Some(v) } else { None };
        SpecWire {
            kind: kind.into(),
            params: p,
            domain: Some([enc(f.domain.lo), enc(f.domain.hi)]),
            class_claim: Some(f.class_claim),
        }
    }
}

// ---------------------------------------------------------------------------
// Löwner matrices and the monotonicity certifier
// ---------------------------------------------------------------------------

/// Matrix of divided differences `(f(t_i) - f(t_j)) / (t_i - t_j)`, with the
/// analytic derivative at the midpoint substituted when two points are closer
/// than the merge threshold (divided differences are unstable there).
pub fn loewner_matrix(f: &FunctionSpec, points: &[f64]) -> Result<HermitianMatrix> {
    if points.is_empty() {
        return Err(Error::InvalidParams(
            "loewner matrix needs at least one point".into(),
        ));
    }
    for &t in points {
        f.check_domain(t)?;
    }
    let merge_eps = {
        let d = f.domain();
        let scale = if d.is_bounded() {
            d.length()
        } else {
            let span = points.iter().copied().fold(f64::NEG_INFINITY, f64::max)
                - points.iter().copied().fold(f64::INFINITY, f64::min);
            1.0 + span
        };
        MERGE_EPS_SCALE * scale
    };
    let n = points.len();
    let mut m = nalgebra::DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let (ti, tj) = (points[i], points[j]);
            let v = if (ti - tj).abs() > merge_eps {
                (f.eval_unchecked(ti) - f.eval_unchecked(tj)) / (ti - tj)
            } else {
                f.derivative_unchecked(0.5 * (ti + tj))
            };
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    HermitianMatrix::from_dmatrix(m)
}

/// Verdict of the randomized Löwner-matrix monotonicity certifier.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum CertifyVerdict {
    Accept {
        trials: usize,
    },
    Reject {
        trial: usize,
        witness: Vec<f64>,
        lambda_min: f64,
    },
}

impl CertifyVerdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, CertifyVerdict::Accept { .. })
    }
}

/// Randomized monotonicity certification: sample `trials` point sets of size
/// `points_per_trial` inside `interval` and accept iff every Löwner matrix is
/// positive semidefinite up to `1e-9 (1 + max |entry|)`.
///
/// Each trial draws from an independent stream derived from `seed`, so the
/// outcome does not depend on trial execution order.
pub fn certify_monotone(
    f: &FunctionSpec,
    interval: &Interval,
    trials: usize,
    points_per_trial: usize,
    seed: u64,
) -> Result<CertifyVerdict> {
    if trials < 1 || points_per_trial < 2 {
        return Err(Error::InvalidParams(format!(
            "need trials >= 1 and points_per_trial >= 2, got {trials} and {points_per_trial}"
        )));
    }
    if !interval.is_bounded() {
        return Err(Error::InvalidParams(
            "certification interval must be bounded".into(),
        ));
    }
    let em = interval.endpoint_margin();
    let (lo, hi) = (interval.lo() + em, interval.hi() - em);
    if !(f.domain().contains_with_margin(lo) && f.domain().contains_with_margin(hi)) {
        return Err(Error::DomainViolation(format!(
            "certification interval {interval} is not inside the domain {} of {}",
            f.domain(),
            f.id()
        )));
    }
    for trial in 0..trials {
        let mut rng = seedmix::stream(&[seed, CERTIFY_TAG, trial as u64]);
        let points: Vec<f64> = (0..points_per_trial)
            .map(|_| rng.random_range(lo..hi))
            .collect();
        let loewner = loewner_matrix(f, &points)?;
        let max_entry = loewner
            .as_dmatrix()
            .iter()
            .fold(0.0f64, |acc, v| acc.max(v.abs()));
        let psd_tol = 1e-9 * (1.0 + max_entry);
        let lambda_min = loewner.min_eig();
        if lambda_min < -psd_tol {
            return Ok(CertifyVerdict::Reject {
                trial,
                witness: points,
                lambda_min,
            });
        }
    }
    Ok(CertifyVerdict::Accept { trials })
}
