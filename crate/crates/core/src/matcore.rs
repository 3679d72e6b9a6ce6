//! Dense real-symmetric matrix algebra.
//!
//! Provides the [`HermitianMatrix`] value type (entries are symmetrized
//! exactly on construction), canonical spectral decomposition, the functional
//! calculus `f(A) = U diag(f(lambda_i)) U^T`, Loewner order predicates, and
//! the spectral scalars used by the bound formulas: operator norm, spectrum
//! extrema `(m_X, M_X)` and the strict gap `m = lambda_min(A - B)`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcrep::FunctionSpec;

/// Maximum QL iterations handed to the eigensolver before reporting failure.
const EIGEN_MAX_ITER: usize = 10_000;

/// Absolute symmetry tolerance when loading matrices from their JSON literal.
pub const JSON_SYMMETRY_TOL: f64 = 1e-12;

/// A dense real symmetric matrix with `entries[i][j] == entries[j][i]`
/// exactly. All `opilab` operators are values of this type.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixWire", into = "MatrixWire")]
pub struct HermitianMatrix {
    data: DMatrix<f64>,
}

/// JSON literal form: `{"dim": n, "rows": [[...], ...]}`.
#[derive(Serialize, Deserialize)]
struct MatrixWire {
    dim: usize,
    rows: Vec<Vec<f64>>,
}

impl From<HermitianMatrix> for MatrixWire {
    fn from(m: HermitianMatrix) -> Self {
        let n = m.dim();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| m.data[(i, j)]).collect())
            .collect();
        MatrixWire { dim: n, rows }
    }
}

impl TryFrom<MatrixWire> for HermitianMatrix {
    type Error = Error;

    fn try_from(w: MatrixWire) -> Result<Self> {
        if w.dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        if w.rows.len() != w.dim || w.rows.iter().any(|r| r.len() != w.dim) {
            return Err(Error::InvalidParams(format!(
                "matrix literal rows must form a {0}x{0} array",
                w.dim
            )));
        }
        let m = DMatrix::from_fn(w.dim, w.dim, |i, j| w.rows[i][j]);
        for i in 0..w.dim {
            for j in (i + 1)..w.dim {
                let asym = (m[(i, j)] - m[(j, i)]).abs();
                if !(asym <= JSON_SYMMETRY_TOL) {
                    return Err(Error::NotSymmetric {
                        i,
                        j,
                        asym,
                        tol: JSON_SYMMETRY_TOL,
                    });
                }
            }
        }
        HermitianMatrix::from_dmatrix(m)
    }
}

impl HermitianMatrix {
    /// Build from a square matrix, symmetrizing as `(M + M^T) / 2` so that
    /// `entries[i][j] == entries[j][i]` holds exactly.
    pub fn from_dmatrix(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() == 0 || m.ncols() == 0 {
            return Err(Error::EmptyMatrix);
        }
        if m.nrows() != m.ncols() {
            return Err(Error::InvalidParams(format!(
                "matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEntry);
        }
        let mut data = m;
        let n = data.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (data[(i, j)] + data[(j, i)]);
                data[(i, j)] = avg;
                data[(j, i)] = avg;
            }
        }
        Ok(HermitianMatrix { data })
    }

    /// Build from nested rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParams(
                "rows must form a nonempty square array".into(),
            ));
        }
        Self::from_dmatrix(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// Diagonal matrix from the given entries.
    pub fn diagonal(diag: &[f64]) -> Self {
        assert!(!diag.is_empty(), "diagonal needs at least one entry");
        let n = diag.len();
        HermitianMatrix {
            data: DMatrix::from_fn(n, n, |i, j| if i == j { diag[i] } else { 0.0 }),
        }
    }

    /// The 1x1 matrix `[x]`.
    pub fn scalar(x: f64) -> Self {
        Self::diagonal(&[x])
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        HermitianMatrix {
            data: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        HermitianMatrix {
            data: DMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.data[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(HermitianMatrix {
            data: &self.data + &other.data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(HermitianMatrix {
            data: &self.data - &other.data,
        })
    }

    pub fn scale(&self, c: f64) -> Self {
        HermitianMatrix {
            data: &self.data * c,
        }
    }

    /// `A + c I`.
    pub fn shifted(&self, c: f64) -> Self {
        let mut data = self.data.clone();
        for i in 0..data.nrows() {
            data[(i, i)] += c;
        }
        HermitianMatrix { data }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut vals: Vec<f64> = self.data.symmetric_eigenvalues().iter().copied().collect();
        vals.sort_by(|a, b| a.total_cmp(b));
        vals
    }

    /// `(min sp(X), max sp(X))`. For `X > 0` the first component equals
    /// `||X^{-1}||^{-1}`.
    pub fn spectrum_extrema(&self) -> (f64, f64) {
        let vals = self.eigenvalues();
        (vals[0], vals[vals.len() - 1])
    }

    pub fn min_eig(&self) -> f64 {
        self.spectrum_extrema().0
    }

    /// Operator norm: the largest eigenvalue magnitude.
    pub fn operator_norm(&self) -> f64 {
        let (lo, hi) = self.spectrum_extrema();
        lo.abs().max(hi.abs())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.norm()
    }

    /// Canonical spectral decomposition `A = U diag(lambda) U^T`.
    pub fn spectral_decompose(&self) -> Result<SpectralDecomposition> {
        SpectralDecomposition::new(self)
    }

    /// Apply the scalar function through the functional calculus.
    pub fn apply(&self, f: &FunctionSpec) -> Result<HermitianMatrix> {
        apply_function(f, self)
    }
}

/// Eigenpairs of a [`HermitianMatrix`], canonicalized so repeated runs are
/// reproducible: eigenvalues ascending, and each eigenvector's
/// largest-magnitude component made positive.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
}

impl SpectralDecomposition {
    fn new(a: &HermitianMatrix) -> Result<Self> {
        let n = a.dim();
        let fail = || Error::EigenFailure {
            dim: n,
            norm: a.frobenius_norm(),
            max_entry: a.data.iter().fold(0.0f64, |acc, v| acc.max(v.abs())),
        };
        let eig = SymmetricEigen::try_new(a.data.clone(), f64::EPSILON, EIGEN_MAX_ITER)
            .ok_or_else(fail)?;
        if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
            return Err(fail());
        }

        // Canonical order: ascending eigenvalues, ties kept in solver order.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

        let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let mut eigenvectors = DMatrix::zeros(n, n);
        for (col, &k) in order.iter().enumerate() {
            let v = eig.eigenvectors.column(k);
            // Sign fix: make the first largest-magnitude component positive.
            let mut pivot = 0;
            for i in 1..n {
                if v[i].abs() > v[pivot].abs() {
                    pivot = i;
                }
            }
            let sign = if v[pivot] < 0.0 { -1.0 } else { 1.0 };
            for i in 0..n {
                eigenvectors[(i, col)] = sign * v[i];
            }
        }

        let dec = SpectralDecomposition {
            eigenvalues,
            eigenvectors,
        };
        dec.validate(a)?;
        Ok(dec)
    }

    fn validate(&self, a: &HermitianMatrix) -> Result<()> {
        let n = a.dim();
        let rtol = 1e-12 * n as f64;
        let recon_err = (&self.reconstruct_raw() - &a.data).norm();
        let ortho_err =
            (self.eigenvectors.transpose() * &self.eigenvectors - DMatrix::identity(n, n)).norm();
        if recon_err > rtol * a.frobenius_norm().max(1e-300) && recon_err > rtol
            || ortho_err > rtol
        {
            return Err(Error::EigenFailure {
                dim: n,
                norm: a.frobenius_norm(),
                max_entry: recon_err.max(ortho_err),
            });
        }
        Ok(())
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Orthogonal matrix whose columns are eigenvectors, in eigenvalue order.
    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    fn reconstruct_raw(&self) -> DMatrix<f64> {
        let diag = DMatrix::from_fn(self.eigenvalues.len(), self.eigenvalues.len(), |i, j| {
            if i == j {
                self.eigenvalues[i]
            } else {
                0.0
            }
        });
        &self.eigenvectors * diag * self.eigenvectors.transpose()
    }

    /// `U diag(lambda) U^T` as a matrix value; used by reconstruction tests.
    pub fn reconstruct(&self) -> Result<HermitianMatrix> {
        HermitianMatrix::from_dmatrix(self.reconstruct_raw())
    }

    /// `U diag(g(lambda_i)) U^T` for an already-evaluated spectrum.
    fn assemble(&self, values: &[f64]) -> Result<HermitianMatrix> {
        let n = self.eigenvalues.len();
        let diag = DMatrix::from_fn(n, n, |i, j| if i == j { values[i] } else { 0.0 });
        HermitianMatrix::from_dmatrix(&self.eigenvectors * diag * self.eigenvectors.transpose())
    }
}

/// Functional calculus `f(A) = U diag(f(lambda_i)) U^T`.
///
/// The whole spectrum must sit inside `domain(f)` with the domain margin;
/// otherwise a [`Error::DomainViolation`] lists the offending eigenvalues.
pub fn apply_function(f: &FunctionSpec, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let dec = a.spectral_decompose()?;
    let offenders: Vec<f64> = dec
        .eigenvalues()
        .iter()
        .copied()
        .filter(|&t| !f.domain().contains_with_margin(t))
        .collect();
    if !offenders.is_empty() {
        return Err(Error::DomainViolation(format!(
            "spectrum outside domain {} of {}: offending eigenvalues {:?}",
            f.domain(),
            f.id(),
            offenders
        )));
    }
    let values: Vec<f64> = dec
        .eigenvalues()
        .iter()
        .map(|&t| f.eval(t))
        .collect::<Result<_>>()?;
    dec.assemble(&values)
}

/// Outcome of a Loewner comparison `A` vs `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderClass {
    StrictlyGreater,
    GreaterEqual,
    Equal,
    Incomparable,
}

/// Loewner order verdict together with `lambda_min(A - B)` as witness.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrderRelation {
    pub class: OrderClass,
    pub witness_min_eig: f64,
}

/// Default comparison tolerance `1e-10 (1 + ||A|| + ||B||)`.
pub fn default_order_tol(a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
    1e-10 * (1.0 + a.operator_norm() + b.operator_norm())
}

/// Classify the pair in the Loewner order.
///
/// Tie precedence: `Equal` before `GreaterEqual` before `StrictlyGreater`.
/// Pairs that are not `>= B` in any of those senses (including `B > A`) are
/// reported `Incomparable`.
pub fn loewner_compare(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tol: f64,
) -> Result<OrderRelation> {
    if tol < 0.0 || !tol.is_finite() {
        return Err(Error::InvalidParams(format!(
            "comparison tolerance must be finite and >= 0, got {tol}"
        )));
    }
    let diff = a.sub(b)?;
    let (lo, hi) = diff.spectrum_extrema();
    let norm = lo.abs().max(hi.abs());
    let class = if norm <= tol {
        OrderClass::Equal
    } else if lo > tol {
        OrderClass::StrictlyGreater
    } else if lo >= -tol {
        OrderClass::GreaterEqual
    } else {
        OrderClass::Incomparable
    };
    Ok(OrderRelation {
        class,
        witness_min_eig: lo,
    })
}

/// The strict gap `m = lambda_min(A - B) = ||(A - B)^{-1}||^{-1}` for `A > B`.
///
/// This is the largest `c >= 0` with `A - B >= c I`. Errors with
/// [`Error::NotStrictlyOrdered`] when the pair is not strictly ordered at the
/// default tolerance.
pub fn strict_gap(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
    let rel = loewner_compare(a, b, default_order_tol(a, b))?;
    if rel.class != OrderClass::StrictlyGreater {
        return Err(Error::NotStrictlyOrdered {
            witness_min_eig: rel.witness_min_eig,
        });
    }
    Ok(rel.witness_min_eig)
}
