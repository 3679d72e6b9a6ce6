//! Seeded random pair generation.
//!
//! Both generators control the difference spectrum directly: eigenvalues for
//! `A - B` are sampled first (at least `min_gap` in magnitude), conjugated by
//! a random orthogonal basis, and `B` is then sampled so that both spectra
//! land inside the target interval. Up to 1000 rejection rounds run before
//! the spec is declared infeasible.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::funcrep::Interval;
use crate::matcore::{strict_gap, HermitianMatrix};
use crate::seedmix;

const ORDERED_TAG: u64 = seedmix::fnv1a(b"gen_ordered_pair");
const INVERTIBLE_TAG: u64 = seedmix::fnv1a(b"gen_invertible_diff_pair");
const MAX_REJECTIONS: usize = 1000;

/// Recipe for one random operator pair.
#[derive(Clone, Copy, Debug)]
pub struct PairSpec {
    pub dim: usize,
    pub interval: Interval,
    /// Lower bound for the strict gap (ordered) or for the smallest
    /// eigenvalue magnitude of the difference (invertible).
    pub min_gap: f64,
    pub seed: u64,
    /// `true` requests `A > B`; `false` only an invertible difference.
    pub ordered: bool,
}

impl PairSpec {
    fn validate(&self) -> Result<()> {
        if self.dim < 1 {
            return Err(Error::InfeasibleSpec("dim must be at least 1".into()));
        }
        if !self.interval.is_bounded() {
            return Err(Error::InfeasibleSpec(
                "pair generation needs a bounded interval".into(),
            ));
        }
        if !(self.min_gap > 0.0 && self.min_gap.is_finite()) {
            return Err(Error::InfeasibleSpec(format!(
                "min_gap must be finite and > 0, got {}",
                self.min_gap
            )));
        }
        if self.min_gap >= self.interval.length() {
            return Err(Error::InfeasibleSpec(format!(
                "min_gap {} is not below the interval length {}",
                self.min_gap,
                self.interval.length()
            )));
        }
        Ok(())
    }

    /// Interval shrunk by a safety multiple of the domain margin, so spectra
    /// stay clear of every function-domain boundary.
    fn effective_range(&self) -> (f64, f64) {
        let em = 4.0 * self.interval.endpoint_margin();
        (self.interval.lo() + em, self.interval.hi() - em)
    }
}

/// Haar-like random orthogonal matrix: QR of a Gaussian matrix with the R
/// diagonal sign-fixed, so the draw is deterministic under the seed.
pub(crate) fn random_orthogonal(rng: &mut ChaCha20Rng, dim: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    let (mut q, r) = g.qr().unpack();
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            for i in 0..dim {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

fn conjugate(u: &DMatrix<f64>, eigs: &[f64]) -> Result<HermitianMatrix> {
    let n = eigs.len();
    let diag = DMatrix::from_fn(n, n, |i, j| if i == j { eigs[i] } else { 0.0 });
    HermitianMatrix::from_dmatrix(u * diag * u.transpose())
}

fn spectra_inside(m: &HermitianMatrix, interval: &Interval) -> bool {
    m.eigenvalues()
        .iter()
        .all(|&t| interval.contains_with_margin(t))
}

/// Generate `A > B` with spectra in the interval and
/// `A - B >= min_gap * I`; deterministic under the seed.
pub fn gen_ordered_pair(spec: &PairSpec) -> Result<(HermitianMatrix, HermitianMatrix)> {
    spec.validate()?;
    let (lo, hi) = spec.effective_range();
    let room = (hi - lo) - spec.min_gap;
    if room <= 0.0 {
        return Err(Error::InfeasibleSpec(format!(
            "no room for a gap of {} inside {}",
            spec.min_gap, spec.interval
        )));
    }
    let mut rng = seedmix::stream(&[spec.seed, ORDERED_TAG]);
    let spread = 0.5 * room;
    for _ in 0..MAX_REJECTIONS {
        let gaps: Vec<f64> = (0..spec.dim)
            .map(|_| rng.random_range(spec.min_gap..spec.min_gap + spread))
            .collect();
        let max_gap = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let b_eigs: Vec<f64> = (0..spec.dim)
            .map(|_| rng.random_range(lo..hi - max_gap))
            .collect();
        let u_d = random_orthogonal(&mut rng, spec.dim);
        let u_b = random_orthogonal(&mut rng, spec.dim);
        let b = conjugate(&u_b, &b_eigs)?;
        let a = b.add(&conjugate(&u_d, &gaps)?)?;

        if !(spectra_inside(&a, &spec.interval) && spectra_inside(&b, &spec.interval)) {
            continue;
        }
        match strict_gap(&a, &b) {
            Ok(m) if m >= spec.min_gap * (1.0 - 1e-9) => return Ok((a, b)),
            _ => continue,
        }
    }
    Err(Error::InfeasibleSpec(format!(
        "exhausted {MAX_REJECTIONS} rejection rounds for {spec:?}"
    )))
}

/// Generate a pair whose difference is invertible with
/// `min |eig(A - B)| >= min_gap`; for `dim >= 2` the difference is forced
/// indefinite by toggling the sign per eigen-direction.
pub fn gen_invertible_diff_pair(spec: &PairSpec) -> Result<(HermitianMatrix, HermitianMatrix)> {
    spec.validate()?;
    let (lo, hi) = spec.effective_range();
    let len = hi - lo;
    let half = 0.5 * len;
    if spec.min_gap >= half {
        return Err(Error::InfeasibleSpec(format!(
            "invertible-difference generation needs min_gap < half the interval length \
             ({} vs {half})",
            spec.min_gap
        )));
    }
    let mut rng = seedmix::stream(&[spec.seed, INVERTIBLE_TAG]);
    let spread = 0.25 * (half - spec.min_gap);
    for _ in 0..MAX_REJECTIONS {
        let mags: Vec<f64> = (0..spec.dim)
            .map(|_| rng.random_range(spec.min_gap..spec.min_gap + spread))
            .collect();
        let diffs: Vec<f64> = mags
            .iter()
            .enumerate()
            .map(|(i, &m)| if i % 2 == 0 { m } else { -m })
            .collect();
        let max_mag = mags.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let b_eigs: Vec<f64> = (0..spec.dim)
            .map(|_| rng.random_range(lo + max_mag..hi - max_mag))
            .collect();
        let u_d = random_orthogonal(&mut rng, spec.dim);
        let u_b = random_orthogonal(&mut rng, spec.dim);
        let b = conjugate(&u_b, &b_eigs)?;
        let a = b.add(&conjugate(&u_d, &diffs)?)?;

        if !(spectra_inside(&a, &spec.interval) && spectra_inside(&b, &spec.interval)) {
            continue;
        }
        let evs = a.sub(&b)?.eigenvalues();
        let min_abs = evs.iter().fold(f64::INFINITY, |acc, v| acc.min(v.abs()));
        if min_abs < spec.min_gap * (1.0 - 1e-9) {
            continue;
        }
        if spec.dim >= 2 && !(evs[0] < 0.0 && evs[evs.len() - 1] > 0.0) {
            continue;
        }
        return Ok((a, b));
    }
    Err(Error::InfeasibleSpec(format!(
        "exhausted {MAX_REJECTIONS} rejection rounds for {spec:?}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{loewner_compare, OrderClass};

    fn spec(dim: usize, lo: f64, hi: f64, min_gap: f64, seed: u64, ordered: bool) -> PairSpec {
        PairSpec {
            dim,
            interval: Interval::open(lo, hi),
            min_gap,
            seed,
            ordered,
        }
    }

    #[test]
    fn ordered_scalar_pair_meets_postconditions() {
        let (a, b) = gen_ordered_pair(&spec(1, 0.0, 10.0, 3.0, 5, true)).unwrap();
        let (av, bv) = (a.entry(0, 0), b.entry(0, 0));
        assert!(av > bv && av - bv >= 3.0 * (1.0 - 1e-9));
        assert!(av < 10.0 && bv > 0.0);
    }

    #[test]
    fn ordered_pair_is_deterministic() {
        let s = spec(4, 0.1, 5.0, 0.2, 42, true);
        let (a1, b1) = gen_ordered_pair(&s).unwrap();
        let (a2, b2) = gen_ordered_pair(&s).unwrap();
        assert_eq!(a1, a2);
        assert_eq!(b1, b2);
    }

    #[test]
    fn ordered_pair_gap_lands_in_expected_window() {
        let (a, b) = gen_ordered_pair(&spec(6, 0.0, 1.0, 0.2, 42, true)).unwrap();
        let gap = strict_gap(&a, &b).unwrap();
        assert!((0.2..=0.8).contains(&gap), "gap {gap}");
        for t in a.eigenvalues().into_iter().chain(b.eigenvalues()) {
            assert!((0.0..1.0).contains(&t), "eigenvalue {t} escaped (0, 1)");
        }
    }

    #[test]
    fn infeasible_spec_is_rejected() {
        assert!(matches!(
            gen_ordered_pair(&spec(2, 0.0, 1.0, 2.0, 1, true)),
            Err(Error::InfeasibleSpec(_))
        ));
    }

    #[test]
    fn invertible_scalar_pair() {
        let (a, b) = gen_invertible_diff_pair(&spec(1, 0.0, 10.0, 0.5, 9, false)).unwrap();
        assert!((a.entry(0, 0) - b.entry(0, 0)).abs() >= 0.5 * (1.0 - 1e-9));
    }

    #[test]
    fn invertible_pair_has_indefinite_difference() {
        let (a, b) = gen_invertible_diff_pair(&spec(2, -1.0, 1.0, 0.1, 3, false)).unwrap();
        let rel = loewner_compare(&a, &b, 1e-10).unwrap();
        assert_eq!(rel.class, OrderClass::Incomparable);
        let evs = a.sub(&b).unwrap().eigenvalues();
        assert!(evs[0] < 0.0 && evs[1] > 0.0);
    }

    #[test]
    fn invertible_pair_is_deterministic() {
        let s = spec(3, -1.0, 1.0, 0.1, 77, false);
        assert_eq!(
            gen_invertible_diff_pair(&s).unwrap(),
            gen_invertible_diff_pair(&s).unwrap()
        );
    }
}
