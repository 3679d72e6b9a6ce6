//! Randomized matrix-level verification.
//!
//! Seeded generators produce operator pairs realizing each hypothesis
//! (`A > B` with a prescribed strict gap, or an invertible possibly
//! indefinite difference). Checkers evaluate both sides of every inequality
//! through the functional calculus and compare against the scalar bounds,
//! reporting an achieved margin `lambda_min(LHS - bound * I)` and a verdict.
//! Commuting-case oracles recompute the same quantities by componentwise
//! scalar arithmetic, independently of the matrix pipeline. The suite runner
//! is fully deterministic given its master seed and serializes to JSONL and
//! CSV.

mod checks;
mod gen;
mod oracle;
mod suite;
mod sweep;

pub use checks::{
    check_furuta, check_monotone_bound, check_strict_convexity, furuta_lhs, FurutaBound,
    FurutaVariant, MonotoneBoundKind, DEFAULT_TOL_SCALE,
};
pub use gen::{gen_invertible_diff_pair, gen_ordered_pair, PairSpec};
pub use oracle::{commuting_oracle, OracleCheck};
pub use suite::{
    convexity_functions, halfline_t_over_one_plus_t, quad_convex_gl5, run_suite,
    theorem_a_functions, theorem_b_functions, SuiteConfig, SuiteOutcome,
};
pub use sweep::{run_sweep, sweep_to_csv, GridRange, SweepConfig, SweepRow};

use serde::{Deserialize, Serialize};

use crate::bounds::FurutaExponents;
use crate::error::Error;

/// The inequalities the suite can exercise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "thmA")]
    ThmA,
    #[serde(rename = "thmB")]
    ThmB,
    #[serde(rename = "thmC")]
    ThmC,
    #[serde(rename = "convexity")]
    Convexity,
    #[serde(rename = "keyLemma")]
    KeyLemma,
    #[serde(rename = "thm33")]
    Thm33,
    #[serde(rename = "thm41")]
    Thm41,
    #[serde(rename = "thm42")]
    Thm42,
    #[serde(rename = "cor43")]
    Cor43,
}

impl TheoremId {
    pub const ALL: [TheoremId; 9] = [
        TheoremId::ThmA,
        TheoremId::ThmB,
        TheoremId::ThmC,
        TheoremId::Convexity,
        TheoremId::KeyLemma,
        TheoremId::Thm33,
        TheoremId::Thm41,
        TheoremId::Thm42,
        TheoremId::Cor43,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::ThmA => "thmA",
            TheoremId::ThmB => "thmB",
            TheoremId::ThmC => "thmC",
            TheoremId::Convexity => "convexity",
            TheoremId::KeyLemma => "keyLemma",
            TheoremId::Thm33 => "thm33",
            TheoremId::Thm41 => "thm41",
            TheoremId::Thm42 => "thm42",
            TheoremId::Cor43 => "cor43",
        }
    }

    pub fn parse(s: &str) -> Option<TheoremId> {
        TheoremId::ALL.iter().copied().find(|t| t.as_str() == s)
    }

    /// Stable stream tag; hashing the name keeps existing cells unchanged
    /// when theorems are added to the suite.
    pub(crate) fn stream_tag(&self) -> u64 {
        crate::seedmix::fnv1a(self.as_str().as_bytes())
    }
}

impl std::fmt::Display for TheoremId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Trial verdict at tolerance `tau`: `Violated` iff the margin is below
/// `-tau`, `HoldsWithEquality` iff it lies within `[-tau, tau]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Verdict {
    Holds,
    HoldsWithEquality,
    Violated,
    Errored,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::HoldsWithEquality => "holdsWithEquality",
            Verdict::Violated => "violated",
            Verdict::Errored => "errored",
        }
    }
}

pub(crate) fn verdict_for(margin: f64, tol: f64) -> Verdict {
    if margin < -tol {
        Verdict::Violated
    } else if margin <= tol {
        Verdict::HoldsWithEquality
    } else {
        Verdict::Holds
    }
}

/// One verification trial: the inputs summary, the strict gap, the scalar
/// bound, the achieved margin and the verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub theorem: TheoremId,
    pub dim: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<FurutaExponents>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub achieved_margin: Option<f64>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl BoundReport {
    pub(crate) fn errored(
        theorem: TheoremId,
        dim: usize,
        seed: u64,
        function: Option<String>,
        exponents: Option<FurutaExponents>,
        err: &Error,
    ) -> Self {
        BoundReport {
            theorem,
            dim,
            seed,
            function,
            exponents,
            s: None,
            lambda: None,
            m: None,
            bound: None,
            achieved_margin: None,
            verdict: Verdict::Errored,
            tolerance: None,
            error: Some(err.to_string()),
        }
    }
}

/// Aggregated verdict counts for one `(theorem, dim)` cell.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellSummary {
    pub theorem: TheoremId,
    pub dim: usize,
    /// Number of reports in the cell (trials times function instances).
    pub trials: usize,
    pub holds: usize,
    pub equality: usize,
    pub violated: usize,
    pub errored: usize,
    pub worst_margin: Option<f64>,
}

/// One report per line, in suite order.
pub fn reports_to_jsonl(reports: &[BoundReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r).expect("report serialization"));
        out.push('\n');
    }
    out
}

/// CSV summary with one row per `(theorem, dim)` cell.
pub fn summary_to_csv(summary: &[CellSummary]) -> String {
    let mut out = String::from("theorem_id,dim,trials,holds,equality,violated,worst_margin\n");
    for c in summary {
        let worst = c.worst_margin.map(|v| v.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            c.theorem.as_str(),
            c.dim,
            c.trials,
            c.holds,
            c.equality,
            c.violated,
            worst
        ));
    }
    out
}
