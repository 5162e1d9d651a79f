//! Pure and density states, tensor products, partial traces and the
//! Hilbert–Schmidt pairing.

mod basis;
pub mod io;
mod random;

pub use basis::{gellmann_basis, local_basis, FactorLabel, GeneratorBasis};
pub use random::{random_state, RandomSpec, RandomState, StateSampler};

use crate::error::{Error, Result};
use crate::linalg::{self, eigvalsh, hermitian_defect, trace, CMatrix, CVector, C64};

/// Hermiticity and trace tolerance for [`DensityState`] validation.
pub const STATE_TOL: f64 = 1e-12;
/// Negative-eigenvalue slack for [`DensityState`] validation.
pub const EIGEN_SLACK: f64 = 1e-10;

/// A nonzero vector of the punctured Hilbert space. Rays are not normalized
/// away; every consumer divides by `<psi|psi>` where it matters.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
    dims: Vec<usize>,
}

impl PureState {
    pub fn new(amplitudes: CVector) -> Result<Self> {
        let n = amplitudes.len();
        Self::with_dims(amplitudes, vec![n])
    }

    pub fn from_slice(amplitudes: &[C64]) -> Result<Self> {
        Self::new(CVector::from_column_slice(amplitudes))
    }

    /// Vector on `C^n ⊗ C^n`.
    pub fn bipartite(amplitudes: CVector, n: usize) -> Result<Self> {
        Self::with_dims(amplitudes, vec![n, n])
    }

    pub fn with_dims(amplitudes: CVector, dims: Vec<usize>) -> Result<Self> {
        if amplitudes.is_empty() || dims.iter().product::<usize>() != amplitudes.len() {
            return Err(Error::Shape(format!(
                "dims {dims:?} do not match vector length {}",
                amplitudes.len()
            )));
        }
        if !linalg::all_finite(amplitudes.iter().flat_map(|z| [z.re, z.im])) {
            return Err(Error::Numeric("state amplitudes".into()));
        }
        if amplitudes.iter().all(|z| *z == C64::from(0.0)) {
            return Err(Error::Domain("zero vector is not a state".into()));
        }
        Ok(Self { amplitudes, dims })
    }

    /// Product vector `a ⊗ b`.
    pub fn product(a: &PureState, b: &PureState) -> Result<Self> {
        let v = a.amplitudes.kronecker(&b.amplitudes);
        Self::with_dims(v, vec![a.dim(), b.dim()])
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    pub fn normalized(&self) -> Self {
        let scale = C64::from(1.0 / self.norm_sqr().sqrt());
        Self {
            amplitudes: &self.amplitudes * scale,
            dims: self.dims.clone(),
        }
    }

    pub fn scaled(&self, factor: C64) -> Result<Self> {
        Self::with_dims(&self.amplitudes * factor, self.dims.clone())
    }

    /// Applies a matrix to the amplitudes, keeping the factor layout.
    pub fn transformed(&self, u: &CMatrix) -> Result<Self> {
        if u.ncols() != self.dim() || u.nrows() != self.dim() {
            return Err(Error::Shape(format!(
                "operator {:?} on state of dim {}",
                u.shape(),
                self.dim()
            )));
        }
        Self::with_dims(u * &self.amplitudes, self.dims.clone())
    }

    /// Factor dimension `n` when the state lives on `C^n ⊗ C^n`.
    pub fn bipartite_dim(&self) -> Result<usize> {
        bipartite_factor(&self.dims)
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    matrix: CMatrix,
    dims: Vec<usize>,
}

impl DensityState {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let n = matrix.nrows();
        Self::with_dims(matrix, vec![n])
    }

    pub fn bipartite(matrix: CMatrix, n: usize) -> Result<Self> {
        Self::with_dims(matrix, vec![n, n])
    }

    pub fn with_dims(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let n = linalg::require_square(&matrix, "density matrix")?;
        if n == 0 || dims.iter().product::<usize>() != n {
            return Err(Error::Shape(format!(
                "dims {dims:?} do not match matrix size {n}"
            )));
        }
        if !linalg::all_finite(matrix.iter().flat_map(|z| [z.re, z.im])) {
            return Err(Error::Numeric("density matrix entries".into()));
        }
        let defect = hermitian_defect(&matrix);
        if defect > STATE_TOL {
            return Err(Error::Domain(format!(
                "density matrix not Hermitian (defect {defect:e})"
            )));
        }
        let tr = trace(&matrix);
        if (tr - C64::from(1.0)).norm() > STATE_TOL {
            return Err(Error::Domain(format!("trace is {tr}, expected 1")));
        }
        let min_eig = eigvalsh(&matrix)[0];
        if min_eig < -EIGEN_SLACK {
            return Err(Error::Domain(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(Self { matrix, dims })
    }

    /// Builds a state from a matrix that is Hermitian and unit-trace only up
    /// to rounding; the Hermitian part is taken and the trace renormalized
    /// before validation.
    pub(crate) fn from_rounded(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let h = linalg::hermitian_part(&matrix);
        let tr = trace(&h).re;
        Self::with_dims(h / C64::from(tr), dims)
    }

    /// Maximally mixed state on a factor layout.
    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let n: usize = dims.iter().product();
        Self {
            matrix: linalg::identity(n) / C64::from(n as f64),
            dims,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn bipartite_dim(&self) -> Result<usize> {
        bipartite_factor(&self.dims)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigvalsh(&self.matrix)
    }

    pub fn purity(&self) -> f64 {
        linalg::trace_of_product(&self.matrix, &self.matrix).re
    }

    /// `Tr(rho A)`.
    pub fn expect(&self, a: &CMatrix) -> C64 {
        linalg::trace_of_product(&self.matrix, a)
    }

    /// `U rho U†`, keeping the factor layout.
    pub fn conjugated(&self, u: &CMatrix) -> Result<Self> {
        if u.shape() != self.matrix.shape() {
            return Err(Error::Shape(format!(
                "unitary {:?} on state {:?}",
                u.shape(),
                self.matrix.shape()
            )));
        }
        Self::from_rounded(u * &self.matrix * u.adjoint(), self.dims.clone())
    }

    /// Convex combination `w a + (1-w) b`.
    pub fn mix(a: &DensityState, b: &DensityState, w: f64) -> Result<Self> {
        if a.dims != b.dims {
            return Err(Error::Shape(format!("{:?} vs {:?}", a.dims, b.dims)));
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::Domain(format!("mixing weight {w} outside [0,1]")));
        }
        Self::with_dims(
            &a.matrix * C64::from(w) + &b.matrix * C64::from(1.0 - w),
            a.dims.clone(),
        )
    }
}

fn bipartite_factor(dims: &[usize]) -> Result<usize> {
    match dims {
        [a, b] if a == b => Ok(*a),
        _ => Err(Error::Shape(format!(
            "expected bipartite dims [n, n], got {dims:?}"
        ))),
    }
}

/// `rho_A ⊗ rho_B` with dims `[n_A, n_B]`.
pub fn tensor_product(a: &DensityState, b: &DensityState) -> DensityState {
    DensityState {
        matrix: a.matrix.kronecker(&b.matrix),
        dims: vec![a.dim(), b.dim()],
    }
}

/// Which factor of a bipartite state survives the partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// Reduced state on `side`, tracing out the other factor.
pub fn partial_trace(rho: &DensityState, side: Side) -> Result<DensityState> {
    let (na, nb) = match rho.dims() {
        [a, b] => (*a, *b),
        other => {
            return Err(Error::Shape(format!(
                "partial trace needs two factors, got dims {other:?}"
            )))
        }
    };
    let m = rho.matrix();
    let reduced = match side {
        Side::A => CMatrix::from_fn(na, na, |i, k| {
            (0..nb).map(|j| m[(i * nb + j, k * nb + j)]).sum()
        }),
        Side::B => CMatrix::from_fn(nb, nb, |i, k| {
            (0..na).map(|j| m[(j * nb + i, j * nb + k)]).sum()
        }),
    };
    let n = reduced.nrows();
    DensityState::from_rounded(reduced, vec![n])
}

/// Rank-one state `|psi><psi| / <psi|psi>`.
pub fn projector(psi: &PureState) -> DensityState {
    let v = psi.amplitudes();
    let m = v * v.adjoint() / C64::from(psi.norm_sqr());
    DensityState {
        matrix: linalg::hermitian_part(&m),
        dims: psi.dims().to_vec(),
    }
}

/// `Tr(A† B)`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Result<C64> {
    linalg::require_same_shape(a, b)?;
    Ok(a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum())
}

pub fn hs_norm(a: &CMatrix) -> f64 {
    linalg::frobenius(a)
}
