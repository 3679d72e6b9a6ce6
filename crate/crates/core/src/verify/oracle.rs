//! Commuting-case scalar oracles.
//!
//! Simultaneously diagonal pairs reduce every matrix expression to
//! componentwise scalar arithmetic. The oracle recomputes the checked
//! quantity (the achieved margin or the left-hand-side spectrum minimum)
//! through pure scalars, independently of the eigendecomposition pipeline,
//! so the two routes can be compared to near machine precision.

use crate::bounds::{
    corollary43_bound, finite_interval_monotone_bound, key_lemma_bound, theorem41_bound,
    theorem42_bound, theorem_a_bound, theorem_a_log_bound, theorem_b_bound, theorem_c_bounds,
    FurutaExponents,
};
use crate::error::{Error, Result};
use crate::funcrep::{FunctionKind, FunctionSpec};

use super::checks::{FurutaBound, FurutaVariant, MonotoneBoundKind};

/// The quantity to recompute by componentwise scalar arithmetic.
#[derive(Clone, Debug)]
pub enum OracleCheck<'a> {
    /// `min_i (f(a_i) - f(b_i))`: the spectrum minimum of `f(A) - f(B)`.
    MonotoneDiff { f: &'a FunctionSpec },
    /// The achieved margin of a monotone-difference check.
    MonotoneMargin {
        f: &'a FunctionSpec,
        kind: MonotoneBoundKind,
    },
    /// The achieved margin of the strict convexity check (bound zero).
    ConvexityMargin { f: &'a FunctionSpec, s: f64 },
    /// The spectrum minimum of the Furuta left-hand side.
    FurutaLhs {
        exps: FurutaExponents,
        variant: FurutaVariant,
    },
    /// The achieved margin of a Furuta estimate check.
    FurutaMargin {
        exps: FurutaExponents,
        which: FurutaBound,
    },
}

struct Scalars {
    m: f64,
    norm_a: f64,
    norm_b: f64,
    m_a_min: f64,
    m_b_max: f64,
}

fn spectral_scalars(eigs_a: &[f64], eigs_b: &[f64]) -> Scalars {
    let fold_max_abs = |v: &[f64]| v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    Scalars {
        m: eigs_a
            .iter()
            .zip(eigs_b)
            .map(|(a, b)| a - b)
            .fold(f64::INFINITY, f64::min),
        norm_a: fold_max_abs(eigs_a),
        norm_b: fold_max_abs(eigs_b),
        m_a_min: eigs_a.iter().copied().fold(f64::INFINITY, f64::min),
        m_b_max: eigs_b.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    }
}

fn require_ordered(s: &Scalars) -> Result<()> {
    if !(s.m > 0.0) {
        return Err(Error::NotStrictlyOrdered {
            witness_min_eig: s.m,
        });
    }
    Ok(())
}

fn require_positive(eigs: &[f64]) -> Result<()> {
    let min = eigs.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min > 0.0) {
        return Err(Error::NotPositiveDefinite { min_eig: min });
    }
    Ok(())
}

fn furuta_lhs_scalar(a: f64, b: f64, exps: &FurutaExponents, variant: FurutaVariant) -> f64 {
    let (p, q, r) = (exps.p(), exps.q(), exps.r());
    let inner = a.powf(0.5 * r) * b.powf(p) * a.powf(0.5 * r);
    match variant {
        FurutaVariant::General => a.powf((p + r) / q) - inner.powf(1.0 / q),
        FurutaVariant::Optimal => a.powf(1.0 + r) - inner.powf((1.0 + r) / (p + r)),
    }
}

/// Recompute a checked quantity for simultaneously diagonal `A`, `B` whose
/// paired eigenvalues are given componentwise; returns the minimum over
/// components. Pairs must be ordered componentwise where the check assumes
/// `A > B`.
pub fn commuting_oracle(check: &OracleCheck, eigs_a: &[f64], eigs_b: &[f64]) -> Result<f64> {
    if eigs_a.len() != eigs_b.len() {
        return Err(Error::DimensionMismatch {
            left: eigs_a.len(),
            right: eigs_b.len(),
        });
    }
    if eigs_a.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let s = spectral_scalars(eigs_a, eigs_b);

    match check {
        OracleCheck::MonotoneDiff { f } => {
            require_ordered(&s)?;
            let mut min = f64::INFINITY;
            for (&a, &b) in eigs_a.iter().zip(eigs_b) {
                min = min.min(f.eval(a)? - f.eval(b)?);
            }
            Ok(min)
        }
        OracleCheck::MonotoneMargin { f, kind } => {
            require_ordered(&s)?;
            let bound = match kind {
                MonotoneBoundKind::TheoremA => match f.kind() {
                    FunctionKind::Power { r } => theorem_a_bound(*r, s.norm_a, s.m)?,
                    FunctionKind::Log => theorem_a_log_bound(s.norm_a, s.m)?,
                    _ => {
                        return Err(Error::InvalidParams(
                            "scalar oracle: power/log only for the ||A||-based bound".into(),
                        ))
                    }
                },
                MonotoneBoundKind::TheoremB => theorem_b_bound(f, s.norm_b, s.m)?,
                MonotoneBoundKind::TheoremC => match f.kind() {
                    FunctionKind::Power { r } => theorem_c_bounds(*r, s.norm_b, s.m)?.0,
                    FunctionKind::Log => theorem_c_bounds(1.0, s.norm_b, s.m)?.1,
                    _ => {
                        return Err(Error::InvalidParams(
                            "scalar oracle: power/log only for the ||B||-based pair".into(),
                        ))
                    }
                },
                MonotoneBoundKind::KeyLemma => match f.kind() {
                    FunctionKind::MobiusMonotone { lambda } => {
                        key_lemma_bound(*lambda, s.m_b_max, s.m_a_min, s.m)?
                    }
                    _ => {
                        return Err(Error::InvalidParams(
                            "scalar oracle: key bound needs MobiusMonotone".into(),
                        ))
                    }
                },
                MonotoneBoundKind::FiniteInterval => {
                    finite_interval_monotone_bound(f, s.m_b_max, s.m_a_min, s.m)?
                }
            };
            let mut min = f64::INFINITY;
            for (&a, &b) in eigs_a.iter().zip(eigs_b) {
                min = min.min(f.eval(a)? - f.eval(b)?);
            }
            Ok(min - bound)
        }
        OracleCheck::ConvexityMargin { f, s: mix } => {
            if !(*mix > 0.0 && *mix < 1.0) {
                return Err(Error::InvalidParams(format!(
                    "mixing parameter must lie in (0, 1), got {mix}"
                )));
            }
            let mut min = f64::INFINITY;
            for (&a, &b) in eigs_a.iter().zip(eigs_b) {
                let gap = mix * f.eval(a)? + (1.0 - mix) * f.eval(b)?
                    - f.eval(mix * a + (1.0 - mix) * b)?;
                min = min.min(gap);
            }
            Ok(min)
        }
        OracleCheck::FurutaLhs { exps, variant } => {
            require_positive(eigs_a)?;
            require_positive(eigs_b)?;
            match variant {
                FurutaVariant::General => exps.validate_fi()?,
                FurutaVariant::Optimal => {}
            }
            let mut min = f64::INFINITY;
            for (&a, &b) in eigs_a.iter().zip(eigs_b) {
                min = min.min(furuta_lhs_scalar(a, b, exps, *variant));
            }
            Ok(min)
        }
        OracleCheck::FurutaMargin { exps, which } => {
            require_ordered(&s)?;
            require_positive(eigs_a)?;
            require_positive(eigs_b)?;
            let (bound, variant) = match which {
                FurutaBound::Thm41 => (
                    theorem41_bound(s.norm_b, s.m, exps, s.m_a_min)?,
                    FurutaVariant::General,
                ),
                FurutaBound::Thm42 => (
                    theorem42_bound(s.m, s.m_a_min, exps.r())?,
                    FurutaVariant::Optimal,
                ),
                FurutaBound::Cor43 => (
                    corollary43_bound(s.norm_a, s.m, s.m_a_min, exps)?,
                    FurutaVariant::General,
                ),
            };
            let mut min = f64::INFINITY;
            for (&a, &b) in eigs_a.iter().zip(eigs_b) {
                min = min.min(furuta_lhs_scalar(a, b, exps, variant));
            }
            Ok(min - bound)
        }
    }
}
