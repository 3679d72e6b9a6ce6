//! Matrix-level inequality checkers.
//!
//! Each checker evaluates the operator inequality through the functional
//! calculus, computes the scalar bound from the [`crate::bounds`] module, and
//! reports `achieved_margin = lambda_min(LHS - bound * I)` with a verdict at
//! tolerance `tau = tol_scale * (1 + ||A|| + ||B|| + |bound|)`.

use crate::bounds::{
    corollary43_bound, finite_interval_monotone_bound, key_lemma_bound, theorem41_bound,
    theorem42_bound, theorem_a_bound, theorem_a_log_bound, theorem_b_bound, theorem_c_bounds,
    FurutaExponents,
};
use crate::error::{Error, Result};
use crate::funcrep::{FunctionKind, FunctionSpec};
use crate::matcore::{apply_function, strict_gap, HermitianMatrix};

use super::{verdict_for, BoundReport, TheoremId};

/// Default scale of the verdict tolerance
/// `tau = tol_scale * (1 + ||A|| + ||B|| + |bound|)`.
pub const DEFAULT_TOL_SCALE: f64 = 1e-9;

/// Which scalar lower bound a monotone-difference check compares against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonotoneBoundKind {
    /// `||A||^r - (||A|| - m)^r` (powers) or the log analogue.
    TheoremA,
    /// `f(||B|| + m) - f(||B||)` for any nonconstant monotone spec.
    TheoremB,
    /// The `||B||`-based power/log pair computed through its own formula.
    TheoremC,
    /// Unit-interval Möbius bound; the spec must be `MobiusMonotone`.
    KeyLemma,
    /// Measure-aggregated unit-interval bound; requires `QuadMonotoneUnit`.
    FiniteInterval,
}

impl MonotoneBoundKind {
    fn theorem(&self) -> TheoremId {
        match self {
            MonotoneBoundKind::TheoremA => TheoremId::ThmA,
            MonotoneBoundKind::TheoremB => TheoremId::ThmB,
            MonotoneBoundKind::TheoremC => TheoremId::ThmC,
            MonotoneBoundKind::KeyLemma => TheoremId::KeyLemma,
            MonotoneBoundKind::FiniteInterval => TheoremId::Thm33,
        }
    }
}

fn tolerance(a: &HermitianMatrix, b: &HermitianMatrix, bound: f64, tol_scale: f64) -> f64 {
    tol_scale * (1.0 + a.operator_norm() + b.operator_norm() + bound.abs())
}

/// Check `f(A) - f(B) >= bound * I` for `A > B` with spectra in `domain(f)`.
pub fn check_monotone_bound(
    f: &FunctionSpec,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    kind: MonotoneBoundKind,
    tol_scale: f64,
) -> Result<BoundReport> {
    let m = strict_gap(a, b)?;
    let norm_a = a.operator_norm();
    let norm_b = b.operator_norm();
    let (m_a_min, _) = a.spectrum_extrema();
    let (_, m_b_max) = b.spectrum_extrema();

    let mut lambda = None;
    let bound = match kind {
        MonotoneBoundKind::TheoremA => match f.kind() {
            FunctionKind::Power { r } => theorem_a_bound(*r, norm_a, m)?,
            FunctionKind::Log => theorem_a_log_bound(norm_a, m)?,
            _ => {
                return Err(Error::InvalidParams(format!(
                    "the ||A||-based bound covers powers and log, not {}",
                    f.id()
                )))
            }
        },
        MonotoneBoundKind::TheoremB => theorem_b_bound(f, norm_b, m)?,
        MonotoneBoundKind::TheoremC => match f.kind() {
            FunctionKind::Power { r } => theorem_c_bounds(*r, norm_b, m)?.0,
            FunctionKind::Log => theorem_c_bounds(1.0, norm_b, m)?.1,
            _ => {
                return Err(Error::InvalidParams(format!(
                    "the ||B||-based power/log pair covers powers and log, not {}",
                    f.id()
                )))
            }
        },
        MonotoneBoundKind::KeyLemma => match f.kind() {
            FunctionKind::MobiusMonotone { lambda: l } => {
                lambda = Some(*l);
                key_lemma_bound(*l, m_b_max, m_a_min, m)?
            }
            _ => {
                return Err(Error::InvalidParams(format!(
                    "the key bound requires a MobiusMonotone spec, not {}",
                    f.id()
                )))
            }
        },
        MonotoneBoundKind::FiniteInterval => {
            finite_interval_monotone_bound(f, m_b_max, m_a_min, m)?
        }
    };

    let fa = apply_function(f, a)?;
    let fb = apply_function(f, b)?;
    let margin = fa.sub(&fb)?.shifted(-bound).min_eig();
    let tol = tolerance(a, b, bound, tol_scale);
    Ok(BoundReport {
        theorem: kind.theorem(),
        dim: a.dim(),
        seed: 0,
        function: Some(f.id()),
        exponents: None,
        s: None,
        lambda,
        m: Some(m),
        bound: Some(bound),
        achieved_margin: Some(margin),
        verdict: verdict_for(margin, tol),
        tolerance: Some(tol),
        error: None,
    })
}

/// Check the strict convexity gap
/// `s f(A) + (1-s) f(B) - f(s A + (1-s) B) > 0` for `s in (0, 1)`.
///
/// The report's `m` field carries the invertibility gap
/// `min |eig(A - B)|`; the bound is zero.
pub fn check_strict_convexity(
    f: &FunctionSpec,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    s: f64,
    tol_scale: f64,
) -> Result<BoundReport> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidParams(format!(
            "mixing parameter must lie in (0, 1), got {s}"
        )));
    }
    let diff_evs = a.sub(b)?.eigenvalues();
    let inv_gap = diff_evs.iter().fold(f64::INFINITY, |acc, v| acc.min(v.abs()));

    let mix = a.scale(s).add(&b.scale(1.0 - s))?;
    let fa = apply_function(f, a)?;
    let fb = apply_function(f, b)?;
    let fmix = apply_function(f, &mix)?;
    let gap = fa.scale(s).add(&fb.scale(1.0 - s))?.sub(&fmix)?;
    let margin = gap.min_eig();
    let tol = tolerance(a, b, 0.0, tol_scale);
    Ok(BoundReport {
        theorem: TheoremId::Convexity,
        dim: a.dim(),
        seed: 0,
        function: Some(f.id()),
        exponents: None,
        s: Some(s),
        lambda: None,
        m: Some(inv_gap),
        bound: Some(0.0),
        achieved_margin: Some(margin),
        verdict: verdict_for(margin, tol),
        tolerance: Some(tol),
        error: None,
    })
}

/// Which side arrangement of the Furuta inequality to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FurutaVariant {
    /// `A^{(p+r)/q} - (A^{r/2} B^p A^{r/2})^{1/q}`.
    General,
    /// `A^{1+r} - (A^{r/2} B^p A^{r/2})^{(1+r)/(p+r)}`.
    Optimal,
}

/// Which scalar estimate [`check_furuta`] compares against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FurutaBound {
    Thm41,
    Thm42,
    Cor43,
}

fn validate_optimal_exponents(exps: &FurutaExponents) -> Result<()> {
    if exps.p() < 1.0 {
        return Err(Error::ExponentDomainViolation(format!(
            "p >= 1 violated (p = {})",
            exps.p()
        )));
    }
    Ok(())
}

fn require_positive_definite(m: &HermitianMatrix) -> Result<()> {
    let min_eig = m.min_eig();
    if min_eig <= 0.0 {
        return Err(Error::NotPositiveDefinite { min_eig });
    }
    Ok(())
}

/// The Furuta left-hand side for strictly positive `A`, `B`. The inner
/// product `A^{r/2} B^p A^{r/2}` is symmetrized before its spectral root.
pub fn furuta_lhs(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    exps: &FurutaExponents,
    variant: FurutaVariant,
) -> Result<HermitianMatrix> {
    match variant {
        FurutaVariant::General => exps.validate_fi()?,
        FurutaVariant::Optimal => validate_optimal_exponents(exps)?,
    }
    require_positive_definite(a)?;
    require_positive_definite(b)?;

    let (p, q, r) = (exps.p(), exps.q(), exps.r());
    let a_r2 = apply_function(&FunctionSpec::power(0.5 * r)?, a)?;
    let b_p = apply_function(&FunctionSpec::power(p)?, b)?;
    let inner = HermitianMatrix::from_dmatrix(
        a_r2.as_dmatrix() * b_p.as_dmatrix() * a_r2.as_dmatrix(),
    )?;

    let (outer_a, outer_inner) = match variant {
        FurutaVariant::General => ((p + r) / q, 1.0 / q),
        FurutaVariant::Optimal => (1.0 + r, (1.0 + r) / (p + r)),
    };
    let lhs_a = apply_function(&FunctionSpec::power(outer_a)?, a)?;
    let root = apply_function(&FunctionSpec::power(outer_inner)?, &inner)?;
    lhs_a.sub(&root)
}

/// Check a Furuta-type estimate. The exponent predicate is evaluated before
/// any matrix work, so invalid exponents never reach the eigensolver.
pub fn check_furuta(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    exps: &FurutaExponents,
    variant: FurutaVariant,
    which: FurutaBound,
    tol_scale: f64,
) -> Result<BoundReport> {
    let (theorem, required_variant) = match which {
        FurutaBound::Thm41 => {
            exps.validate_thm41()?;
            (TheoremId::Thm41, FurutaVariant::General)
        }
        FurutaBound::Thm42 => {
            validate_optimal_exponents(exps)?;
            if !exps.thm42_valid() {
                return Err(Error::ExponentDomainViolation(format!(
                    "q = (p+r)/(1+r) violated (p = {}, q = {}, r = {})",
                    exps.p(),
                    exps.q(),
                    exps.r()
                )));
            }
            (TheoremId::Thm42, FurutaVariant::Optimal)
        }
        FurutaBound::Cor43 => {
            exps.validate_fi()?;
            (TheoremId::Cor43, FurutaVariant::General)
        }
    };
    if variant != required_variant {
        return Err(Error::InvalidParams(format!(
            "{} is stated for the {:?} form",
            theorem, required_variant
        )));
    }

    let m = strict_gap(a, b)?;
    let norm_a = a.operator_norm();
    let norm_b = b.operator_norm();
    let m_a = a.min_eig();
    let bound = match which {
        FurutaBound::Thm41 => theorem41_bound(norm_b, m, exps, m_a)?,
        FurutaBound::Thm42 => theorem42_bound(m, m_a, exps.r())?,
        FurutaBound::Cor43 => corollary43_bound(norm_a, m, m_a, exps)?,
    };
    let lhs = furuta_lhs(a, b, exps, variant)?;
    let margin = lhs.shifted(-bound).min_eig();
    let tol = tolerance(a, b, bound, tol_scale);
    Ok(BoundReport {
        theorem,
        dim: a.dim(),
        seed: 0,
        function: None,
        exponents: Some(*exps),
        s: None,
        lambda: None,
        m: Some(m),
        bound: Some(bound),
        achieved_margin: Some(margin),
        verdict: verdict_for(margin, tol),
        tolerance: Some(tol),
        error: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::Verdict;
    use approx::assert_abs_diff_eq;

    #[test]
    fn monotone_bound_scalar_equality_case() {
        let a = HermitianMatrix::scalar(4.0);
        let b = HermitianMatrix::scalar(1.0);
        let f = FunctionSpec::power(0.5).unwrap();
        let rep =
            check_monotone_bound(&f, &a, &b, MonotoneBoundKind::TheoremB, DEFAULT_TOL_SCALE)
                .unwrap();
        assert_abs_diff_eq!(rep.bound.unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rep.achieved_margin.unwrap(), 0.0, epsilon = 1e-12);
        assert_eq!(rep.verdict, Verdict::HoldsWithEquality);
    }

    #[test]
    fn monotone_bound_log_scalar_reduction() {
        let a = HermitianMatrix::diagonal(&[4.0, 4.0]);
        let b = HermitianMatrix::diagonal(&[1.0, 1.0]);
        let rep = check_monotone_bound(
            &FunctionSpec::log(),
            &a,
            &b,
            MonotoneBoundKind::TheoremB,
            DEFAULT_TOL_SCALE,
        )
        .unwrap();
        assert_abs_diff_eq!(rep.bound.unwrap(), 4.0f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(rep.achieved_margin.unwrap(), 0.0, epsilon = 1e-12);
        assert_eq!(rep.verdict, Verdict::HoldsWithEquality);
    }

    #[test]
    fn monotone_bound_full_pipeline_holds() {
        let spec = crate::verify::PairSpec {
            dim: 5,
            interval: crate::funcrep::Interval::open(0.1, 10.0),
            min_gap: 0.3,
            seed: 9,
            ordered: true,
        };
        let (a, b) = crate::verify::gen_ordered_pair(&spec).unwrap();
        let f = FunctionSpec::power(0.5).unwrap();
        let rep =
            check_monotone_bound(&f, &a, &b, MonotoneBoundKind::TheoremB, DEFAULT_TOL_SCALE)
                .unwrap();
        assert_eq!(rep.verdict, Verdict::Holds, "margin {:?}", rep.achieved_margin);
    }

    #[test]
    fn monotone_bound_rejects_unordered_pair() {
        let a = HermitianMatrix::diagonal(&[1.0, -1.0]);
        let b = HermitianMatrix::zeros(2);
        let f = FunctionSpec::square();
        assert!(matches!(
            check_monotone_bound(&f, &a, &b, MonotoneBoundKind::TheoremB, DEFAULT_TOL_SCALE),
            Err(Error::NotStrictlyOrdered { .. })
        ));
    }

    #[test]
    fn convexity_square_margin_identity() {
        let a = HermitianMatrix::diagonal(&[2.0, 3.0]);
        let b = HermitianMatrix::diagonal(&[1.0, 1.0]);
        let rep = check_strict_convexity(&FunctionSpec::square(), &a, &b, 0.5, DEFAULT_TOL_SCALE)
            .unwrap();
        // s(1-s) lambda_min((A-B)^2) = 0.25 * min(1, 4).
        assert_abs_diff_eq!(rep.achieved_margin.unwrap(), 0.25, epsilon = 1e-12);
        assert_eq!(rep.verdict, Verdict::Holds);
    }

    #[test]
    fn convexity_affine_holds_with_equality() {
        let a = HermitianMatrix::diagonal(&[2.0, 3.0]);
        let b = HermitianMatrix::diagonal(&[1.0, 0.5]);
        let rep =
            check_strict_convexity(&FunctionSpec::affine(1.0, 2.0), &a, &b, 0.3, DEFAULT_TOL_SCALE)
                .unwrap();
        assert_abs_diff_eq!(rep.achieved_margin.unwrap(), 0.0, epsilon = 1e-12);
        assert_eq!(rep.verdict, Verdict::HoldsWithEquality);
    }

    #[test]
    fn convexity_inverse_diagonal_case() {
        let a = HermitianMatrix::diagonal(&[2.0, 4.0]);
        let b = HermitianMatrix::diagonal(&[1.0, 2.0]);
        let rep =
            check_strict_convexity(&FunctionSpec::inverse(), &a, &b, 0.5, DEFAULT_TOL_SCALE)
                .unwrap();
        // Componentwise: first entry 0.5(1/2 + 1) - 1/1.5 = 1/12; second
        // entry 0.5(1/4 + 1/2) - 1/3 = 1/24. The margin is their minimum.
        let first = 0.5 * (0.5 + 1.0) - 1.0 / 1.5;
        assert_abs_diff_eq!(first, 1.0 / 12.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rep.achieved_margin.unwrap(), 1.0 / 24.0, epsilon = 1e-12);
        assert!(rep.achieved_margin.unwrap() > 0.0);
    }

    #[test]
    fn convexity_rejects_bad_mix() {
        let a = HermitianMatrix::scalar(2.0);
        let b = HermitianMatrix::scalar(1.0);
        assert!(check_strict_convexity(&FunctionSpec::square(), &a, &b, 1.0, 1e-9).is_err());
        assert!(check_strict_convexity(&FunctionSpec::square(), &a, &b, 0.0, 1e-9).is_err());
    }

    #[test]
    fn furuta_lhs_scalar_examples() {
        // General, 1x1: p = q = r = 2 gives 2^2 - (2 * 1 * 2)^(1/2) = 2.
        let a = HermitianMatrix::scalar(2.0);
        let b = HermitianMatrix::scalar(1.0);
        let exps = FurutaExponents::new(2.0, 2.0, 2.0).unwrap();
        let lhs = furuta_lhs(&a, &b, &exps, FurutaVariant::General).unwrap();
        assert_abs_diff_eq!(lhs.entry(0, 0), 2.0, epsilon = 1e-12);

        // r = 0, q = 1, p = 1 collapses to A - B.
        let exps = FurutaExponents::new(1.0, 1.0, 0.0).unwrap();
        let a2 = HermitianMatrix::diagonal(&[3.0, 2.0]);
        let b2 = HermitianMatrix::diagonal(&[1.0, 0.5]);
        let lhs = furuta_lhs(&a2, &b2, &exps, FurutaVariant::General).unwrap();
        let diff = a2.sub(&b2).unwrap();
        assert!((lhs.as_dmatrix() - diff.as_dmatrix()).norm() < 1e-12);

        // Optimal, 1x1: p = 2, r = 1 gives 4 - 2^(2/3).
        let exps = FurutaExponents::optimal(2.0, 1.0).unwrap();
        let lhs = furuta_lhs(&a, &b, &exps, FurutaVariant::Optimal).unwrap();
        assert_abs_diff_eq!(
            lhs.entry(0, 0),
            4.0 - 2.0f64.powf(2.0 / 3.0),
            epsilon = 1e-12
        );
    }

    #[test]
    fn furuta_lhs_requires_positive_definite_inputs() {
        let a = HermitianMatrix::diagonal(&[1.0, -0.5]);
        let b = HermitianMatrix::identity(2);
        let exps = FurutaExponents::new(1.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            furuta_lhs(&a, &b, &exps, FurutaVariant::General),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn check_furuta_scalar_examples() {
        let a = HermitianMatrix::scalar(2.0);
        let b = HermitianMatrix::scalar(1.0);

        // Optimal estimate: LHS = 4 - 2^(2/3) = 2.4126 vs bound m * m_A = 2.
        let exps = FurutaExponents::optimal(2.0, 1.0).unwrap();
        let rep = check_furuta(
            &a,
            &b,
            &exps,
            FurutaVariant::Optimal,
            FurutaBound::Thm42,
            DEFAULT_TOL_SCALE,
        )
        .unwrap();
        assert_abs_diff_eq!(rep.bound.unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            rep.achieved_margin.unwrap(),
            4.0 - 2.0f64.powf(2.0 / 3.0) - 2.0,
            epsilon = 1e-12
        );
        assert_eq!(rep.verdict, Verdict::Holds);

        // General estimate at r = 0 on commuting inputs: exact equality.
        let a2 = HermitianMatrix::diagonal(&[4.0, 4.0]);
        let b2 = HermitianMatrix::diagonal(&[1.0, 1.0]);
        let exps = FurutaExponents::new(1.0, 1.0, 0.0).unwrap();
        let rep = check_furuta(
            &a2,
            &b2,
            &exps,
            FurutaVariant::General,
            FurutaBound::Thm41,
            DEFAULT_TOL_SCALE,
        )
        .unwrap();
        assert_abs_diff_eq!(rep.bound.unwrap(), 3.0, epsilon = 1e-12);
        assert_eq!(rep.verdict, Verdict::HoldsWithEquality);

        // Corollary collapse: p = 1, q = 1, r = 0 on scalars.
        let rep = check_furuta(
            &a,
            &b,
            &exps,
            FurutaVariant::General,
            FurutaBound::Cor43,
            DEFAULT_TOL_SCALE,
        )
        .unwrap();
        assert_abs_diff_eq!(rep.bound.unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(rep.verdict, Verdict::HoldsWithEquality);
    }

    #[test]
    fn corollary_bound_needs_p_at_least_one() {
        // The corollary estimate is proved through the optimal case, which
        // requires p >= 1. Below that the scalar case already violates it:
        // a = 2, b = 1, p = 1/2, q = 1, r = 1 gives LHS 2^1.5 - 2 against
        // bound 2^1.5 - 2^0.75. The checker reports exactly that.
        let a = HermitianMatrix::scalar(2.0);
        let b = HermitianMatrix::scalar(1.0);
        let exps = FurutaExponents::new(0.5, 1.0, 1.0).unwrap();
        assert!(exps.fi_valid());
        let rep = check_furuta(
            &a,
            &b,
            &exps,
            FurutaVariant::General,
            FurutaBound::Cor43,
            DEFAULT_TOL_SCALE,
        )
        .unwrap();
        let lhs = 2.0f64.powf(1.5) - 2.0;
        let bound = 2.0f64.powf(1.5) - 2.0f64.powf(0.75);
        assert_abs_diff_eq!(rep.achieved_margin.unwrap(), lhs - bound, epsilon = 1e-12);
        assert_eq!(rep.verdict, Verdict::Violated);
    }

    #[test]
    fn exponent_gate_fires_before_matrix_work() {
        // Invalid exponents plus a non-positive-definite matrix: the
        // exponent violation must win, proving nothing was evaluated.
        let a = HermitianMatrix::diagonal(&[1.0, -1.0]);
        let b = HermitianMatrix::identity(2);
        let exps = FurutaExponents::new(3.0, 1.0, 0.0).unwrap(); // FI-invalid
        let err = check_furuta(
            &a,
            &b,
            &exps,
            FurutaVariant::General,
            FurutaBound::Thm41,
            DEFAULT_TOL_SCALE,
        )
        .unwrap_err();
        assert!(matches!(err, Error::ExponentDomainViolation(_)), "{err}");
    }

    #[test]
    fn variant_mismatch_is_rejected() {
        let a = HermitianMatrix::scalar(2.0);
        let b = HermitianMatrix::scalar(1.0);
        let exps = FurutaExponents::optimal(2.0, 1.0).unwrap();
        assert!(check_furuta(
            &a,
            &b,
            &exps,
            FurutaVariant::General,
            FurutaBound::Thm42,
            DEFAULT_TOL_SCALE
        )
        .is_err());
    }
}
