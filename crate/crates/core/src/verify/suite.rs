//! Deterministic suite runner.
//!
//! Every `(theorem, dim, trial)` cell derives child seeds by hashing the
//! master seed with the theorem's name tag, the dimension and the trial
//! index, so trial streams are independent and stable under suite growth.
//! Per-trial failures become `Errored` reports instead of aborting the run.

use rand::Rng;

use crate::bounds::FurutaExponents;
use crate::error::{Error, Result};
use crate::funcrep::{DiscreteMeasure, FunctionSpec, Interval};
use crate::matcore::HermitianMatrix;
use crate::seedmix;

use super::checks::{
    check_furuta, check_monotone_bound, check_strict_convexity, FurutaBound, FurutaVariant,
    MonotoneBoundKind,
};
use super::gen::{gen_invertible_diff_pair, gen_ordered_pair, PairSpec};
use super::{BoundReport, CellSummary, TheoremId, Verdict};

const REGEN_TAG: u64 = seedmix::fnv1a(b"regen");
const EXP_TAG: u64 = seedmix::fnv1a(b"exponents");
const S_TAG: u64 = seedmix::fnv1a(b"mixing");
const LAMBDA_TAG: u64 = seedmix::fnv1a(b"lambda");
const SPEC_TAG: u64 = seedmix::fnv1a(b"quad_spec");

/// Condition-number ceiling for `A - B`; worse pairs are regenerated with
/// the next child seed rather than silently passed through.
const MAX_DIFF_CONDITION: f64 = 1e12;

/// Suite configuration: which theorems, dimensions, trials per cell, the
/// master seed and the tolerance policy scale.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub theorems: Vec<TheoremId>,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub master_seed: u64,
    pub tol_scale: f64,
    /// Replaces the per-theorem default function sets when present.
    pub functions: Option<Vec<FunctionSpec>>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            theorems: TheoremId::ALL.to_vec(),
            dims: vec![1, 2, 4],
            trials: 25,
            master_seed: 0,
            tol_scale: super::checks::DEFAULT_TOL_SCALE,
            functions: None,
        }
    }
}

impl SuiteConfig {
    fn validate(&self) -> Result<()> {
        if self.theorems.is_empty() {
            return Err(Error::InvalidConfig("no theorems selected".into()));
        }
        if self.dims.is_empty() || self.dims.iter().any(|&d| d < 1) {
            return Err(Error::InvalidConfig(
                "dims must be a nonempty list of integers >= 1".into(),
            ));
        }
        if self.trials < 1 {
            return Err(Error::InvalidConfig("trials must be >= 1".into()));
        }
        if !(self.tol_scale > 0.0 && self.tol_scale.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "tol_scale must be finite and > 0, got {}",
                self.tol_scale
            )));
        }
        Ok(())
    }
}

/// All reports plus the per-cell summary, in deterministic order.
#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub reports: Vec<BoundReport>,
    pub summary: Vec<CellSummary>,
}

impl SuiteOutcome {
    pub fn violated(&self) -> usize {
        self.count(Verdict::Violated)
    }

    pub fn errored(&self) -> usize {
        self.count(Verdict::Errored)
    }

    fn count(&self, v: Verdict) -> usize {
        self.reports.iter().filter(|r| r.verdict == v).count()
    }
}

fn positive_interval() -> Interval {
    Interval::open(0.1, 50.0)
}

fn unit_interval() -> Interval {
    Interval::unit()
}

pub(crate) fn furuta_interval() -> Interval {
    Interval::open(0.3, 3.0)
}

/// Power `1/2`, power `1/3` and `log`: the monotone catalog entries used by
/// the `||A||`- and `||B||`-based estimates.
pub fn theorem_a_functions() -> Vec<FunctionSpec> {
    vec![
        FunctionSpec::power(0.5).expect("exponent is finite"),
        FunctionSpec::power(1.0 / 3.0).expect("exponent is finite"),
        FunctionSpec::log(),
    ]
}

/// The monotone suite set: powers, `log` and `t/(1+t)` through its
/// half-line representation.
pub fn theorem_b_functions() -> Vec<FunctionSpec> {
    let mut funcs = theorem_a_functions();
    funcs.push(halfline_t_over_one_plus_t());
    funcs
}

/// `t / (1 + t)` as a half-line quadrature spec:
/// `1/2 + (1/2) (t - 1)/(t + 1)`, i.e. `a = 1/2`, `b = 0`, node `-1` with
/// weight `1/2`.
pub fn halfline_t_over_one_plus_t() -> FunctionSpec {
    FunctionSpec::build_monotone_halfline(
        0.5,
        0.0,
        DiscreteMeasure::new(vec![-1.0], vec![0.5]).expect("static measure"),
    )
    .expect("static spec")
}

/// Five-node Gauss–Legendre convex representation on `(-1, 1)`.
pub fn quad_convex_gl5() -> FunctionSpec {
    FunctionSpec::build_convex_from_measure(0.0, 0.0, DiscreteMeasure::gauss_legendre(5))
        .expect("static spec")
}

/// The strict-convexity suite set.
pub fn convexity_functions() -> Vec<FunctionSpec> {
    vec![
        FunctionSpec::square(),
        FunctionSpec::inverse(),
        FunctionSpec::mobius_convex(0.5).expect("parameter in range"),
        FunctionSpec::mobius_convex(-0.5).expect("parameter in range"),
        quad_convex_gl5(),
    ]
}

/// Pair interval for a convexity trial of `f`: the declared domain when
/// bounded, otherwise a fixed well-conditioned window inside it.
fn convexity_interval(f: &FunctionSpec) -> Interval {
    let d = f.domain();
    if d.is_bounded() {
        *d
    } else if d.lo().is_finite() {
        Interval::open(d.lo() + 0.1, d.lo() + 10.0)
    } else {
        unit_interval()
    }
}

fn gen_pair_conditioned(
    dim: usize,
    interval: Interval,
    min_gap: f64,
    seed: u64,
    ordered: bool,
) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let mut child = seed;
    for attempt in 0..16u64 {
        if attempt > 0 {
            child = seedmix::mix(&[seed, REGEN_TAG, attempt]);
        }
        let spec = PairSpec {
            dim,
            interval,
            min_gap,
            seed: child,
            ordered,
        };
        let (a, b) = if ordered {
            gen_ordered_pair(&spec)?
        } else {
            gen_invertible_diff_pair(&spec)?
        };
        let evs = a.sub(&b)?.eigenvalues();
        let max_abs = evs.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let min_abs = evs.iter().fold(f64::INFINITY, |acc, v| acc.min(v.abs()));
        if max_abs <= MAX_DIFF_CONDITION * min_abs {
            return Ok((a, b));
        }
    }
    Err(Error::InfeasibleSpec(
        "could not generate a well-conditioned difference in 16 attempts".into(),
    ))
}

/// Run the whole suite; deterministic given the config. Per-trial errors are
/// folded into the reports as `Errored` verdicts.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteOutcome> {
    config.validate()?;
    let mut reports = Vec::new();
    for &theorem in &config.theorems {
        for &dim in &config.dims {
            for trial in 0..config.trials {
                run_trial(theorem, dim, trial, config, &mut reports);
            }
        }
    }
    let summary = summarize(config, &reports);
    Ok(SuiteOutcome { reports, summary })
}

fn cell_seed(config: &SuiteConfig, theorem: TheoremId, dim: usize, trial: usize) -> u64 {
    seedmix::mix(&[
        config.master_seed,
        theorem.stream_tag(),
        dim as u64,
        trial as u64,
    ])
}

fn push(
    reports: &mut Vec<BoundReport>,
    theorem: TheoremId,
    dim: usize,
    seed: u64,
    function: Option<String>,
    exponents: Option<FurutaExponents>,
    outcome: Result<BoundReport>,
) {
    match outcome {
        Ok(mut rep) => {
            rep.seed = seed;
            reports.push(rep);
        }
        Err(e) => reports.push(BoundReport::errored(
            theorem, dim, seed, function, exponents, &e,
        )),
    }
}

fn run_trial(
    theorem: TheoremId,
    dim: usize,
    trial: usize,
    config: &SuiteConfig,
    reports: &mut Vec<BoundReport>,
) {
    let seed = cell_seed(config, theorem, dim, trial);
    match theorem {
        TheoremId::ThmA | TheoremId::ThmB | TheoremId::ThmC => {
            let kind = match theorem {
                TheoremId::ThmA => MonotoneBoundKind::TheoremA,
                TheoremId::ThmB => MonotoneBoundKind::TheoremB,
                _ => MonotoneBoundKind::TheoremC,
            };
            let funcs = config.functions.clone().unwrap_or_else(|| {
                if theorem == TheoremId::ThmB {
                    theorem_b_functions()
                } else {
                    theorem_a_functions()
                }
            });
            let pair = gen_pair_conditioned(dim, positive_interval(), 0.5, seed, true);
            match pair {
                Ok((a, b)) => {
                    for f in &funcs {
                        push(
                            reports,
                            theorem,
                            dim,
                            seed,
                            Some(f.id()),
                            None,
                            check_monotone_bound(f, &a, &b, kind, config.tol_scale),
                        );
                    }
                }
                Err(e) => reports.push(BoundReport::errored(theorem, dim, seed, None, None, &e)),
            }
        }
        TheoremId::Convexity => {
            let funcs = config.functions.clone().unwrap_or_else(convexity_functions);
            for (fi, f) in funcs.iter().enumerate() {
                let fseed = seedmix::mix(&[seed, fi as u64]);
                let interval = convexity_interval(f);
                let min_gap = 0.05 * interval.length();
                let s = seedmix::stream(&[fseed, S_TAG]).random_range(0.05..0.95);
                let outcome = gen_pair_conditioned(dim, interval, min_gap, fseed, false)
                    .and_then(|(a, b)| {
                        check_strict_convexity(f, &a, &b, s, config.tol_scale)
                    });
                push(reports, theorem, dim, fseed, Some(f.id()), None, outcome);
            }
        }
        TheoremId::KeyLemma => {
            let lambda = seedmix::stream(&[seed, LAMBDA_TAG]).random_range(-0.95..0.95);
            let outcome = FunctionSpec::mobius_monotone(lambda).and_then(|f| {
                let (a, b) = gen_pair_conditioned(dim, unit_interval(), 0.08, seed, true)?;
                check_monotone_bound(&f, &a, &b, MonotoneBoundKind::KeyLemma, config.tol_scale)
            });
            push(reports, theorem, dim, seed, None, None, outcome);
        }
        TheoremId::Thm33 => {
            let funcs = match &config.functions {
                Some(fs) => fs.clone(),
                None => vec![random_quad_monotone_spec(seed)],
            };
            let pair = gen_pair_conditioned(dim, unit_interval(), 0.08, seed, true);
            match pair {
                Ok((a, b)) => {
                    for f in &funcs {
                        push(
                            reports,
                            theorem,
                            dim,
                            seed,
                            Some(f.id()),
                            None,
                            check_monotone_bound(
                                f,
                                &a,
                                &b,
                                MonotoneBoundKind::FiniteInterval,
                                config.tol_scale,
                            ),
                        );
                    }
                }
                Err(e) => reports.push(BoundReport::errored(theorem, dim, seed, None, None, &e)),
            }
        }
        TheoremId::Thm41 => {
            let mut rng = seedmix::stream(&[seed, EXP_TAG]);
            let r = rng.random_range(0.01..1.0);
            let q = rng.random_range(1.0..3.0);
            let p = rng.random_range(r * (q - 1.0)..(1.0 + r) * q - r);
            let outcome = FurutaExponents::new(p, q, r).and_then(|exps| {
                let (a, b) = gen_pair_conditioned(dim, furuta_interval(), 0.05, seed, true)?;
                check_furuta(
                    &a,
                    &b,
                    &exps,
                    FurutaVariant::General,
                    FurutaBound::Thm41,
                    config.tol_scale,
                )
            });
            push(reports, theorem, dim, seed, None, None, outcome);
        }
        TheoremId::Thm42 => {
            let mut rng = seedmix::stream(&[seed, EXP_TAG]);
            let p = rng.random_range(1.0..4.0);
            let r = rng.random_range(0.0..5.0);
            let outcome = FurutaExponents::optimal(p, r).and_then(|exps| {
                let (a, b) = gen_pair_conditioned(dim, furuta_interval(), 0.05, seed, true)?;
                check_furuta(
                    &a,
                    &b,
                    &exps,
                    FurutaVariant::Optimal,
                    FurutaBound::Thm42,
                    config.tol_scale,
                )
            });
            push(reports, theorem, dim, seed, None, None, outcome);
        }
        TheoremId::Cor43 => {
            // Same pair stream as the optimal-case suite, fresh exponents.
            // The estimate inherits p >= 1 from the optimal case its proof
            // rests on; p < 1 admits scalar counterexamples.
            let pair_seed = cell_seed(config, TheoremId::Thm42, dim, trial);
            let mut rng = seedmix::stream(&[seed, EXP_TAG]);
            let r: f64 = rng.random_range(0.0..5.0);
            let q: f64 = rng.random_range(1.0..3.0);
            let p_hi = ((1.0 + r) * q - r).min(4.0);
            let p = if p_hi > 1.0 {
                rng.random_range(1.0..p_hi)
            } else {
                1.0
            };
            let outcome = FurutaExponents::new(p, q, r).and_then(|exps| {
                let (a, b) =
                    gen_pair_conditioned(dim, furuta_interval(), 0.05, pair_seed, true)?;
                check_furuta(
                    &a,
                    &b,
                    &exps,
                    FurutaVariant::General,
                    FurutaBound::Cor43,
                    config.tol_scale,
                )
            });
            push(reports, theorem, dim, seed, None, None, outcome);
        }
    }
}

/// Random unit-interval monotone representation with up to 8 nodes.
pub(crate) fn random_quad_monotone_spec(seed: u64) -> FunctionSpec {
    let mut rng = seedmix::stream(&[seed, SPEC_TAG]);
    let k = rng.random_range(1..=8usize);
    let nodes: Vec<f64> = (0..k).map(|_| rng.random_range(-0.9..0.9)).collect();
    let weights: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    let f0 = rng.random_range(-1.0..1.0);
    let fp0 = rng.random_range(0.1..2.0);
    FunctionSpec::build_monotone_from_measure(
        f0,
        fp0,
        DiscreteMeasure::new(nodes, weights).expect("sampled measure is valid"),
    )
    .expect("sampled spec is valid")
}

fn summarize(config: &SuiteConfig, reports: &[BoundReport]) -> Vec<CellSummary> {
    let mut cells = Vec::new();
    for &theorem in &config.theorems {
        for &dim in &config.dims {
            let mut cell = CellSummary {
                theorem,
                dim,
                trials: 0,
                holds: 0,
                equality: 0,
                violated: 0,
                errored: 0,
                worst_margin: None,
            };
            for r in reports
                .iter()
                .filter(|r| r.theorem == theorem && r.dim == dim)
            {
                cell.trials += 1;
                match r.verdict {
                    Verdict::Holds => cell.holds += 1,
                    Verdict::HoldsWithEquality => cell.equality += 1,
                    Verdict::Violated => cell.violated += 1,
                    Verdict::Errored => cell.errored += 1,
                }
                if let Some(m) = r.achieved_margin {
                    cell.worst_margin = Some(match cell.worst_margin {
                        Some(w) => w.min(m),
                        None => m,
                    });
                }
            }
            cells.push(cell);
        }
    }
    cells
}
