//! Dense complex linear-algebra helpers shared by every module.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;
pub type RMatrix = DMatrix<f64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Largest entry-wise deviation from Hermiticity.
pub fn hermitian_defect(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn is_hermitian(a: &CMatrix, tol: f64) -> bool {
    a.is_square() && hermitian_defect(a) <= tol
}

pub fn require_square(a: &CMatrix, what: &str) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::Shape(format!(
            "{what} must be square, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(a.nrows())
}

pub fn require_same_shape(a: &CMatrix, b: &CMatrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::Shape(format!("{:?} vs {:?}", a.shape(), b.shape())));
    }
    Ok(())
}

pub fn require_hermitian(a: &CMatrix, tol: f64, what: &str) -> Result<()> {
    require_square(a, what)?;
    let defect = hermitian_defect(a);
    if defect > tol {
        return Err(Error::Domain(format!(
            "{what} is not Hermitian (defect {defect:e})"
        )));
    }
    Ok(())
}

/// `(A + A†)/2`, used to remove rounding asymmetry from products that are
/// Hermitian in exact arithmetic.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()) * C64::from(0.5)
}

pub fn trace(a: &CMatrix) -> C64 {
    a.diagonal().iter().sum()
}

/// `Tr(A B)` without forming the product.
pub fn trace_of_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.nrows();
    let m = a.ncols();
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..m {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending with
/// matching eigenvector columns.
pub fn eigh(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = hermitian_part(a).symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub fn eigvalsh(a: &CMatrix) -> Vec<f64> {
    eigh(a).0
}

/// Applies a real function to the spectrum of a Hermitian matrix.
pub fn hermitian_function(a: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (values, vectors) = eigh(a);
    let n = values.len();
    let mut scaled = vectors.clone();
    for (j, &v) in values.iter().enumerate() {
        let fv = C64::from(f(v));
        for i in 0..n {
            scaled[(i, j)] *= fv;
        }
    }
    scaled * vectors.adjoint()
}

/// Square root of a positive semidefinite matrix. Eigenvalues at or below
/// `1e-13` are treated as zero, so rounding noise in the kernel does not
/// turn into `sqrt(eps)`-sized entries.
pub fn sqrt_psd(a: &CMatrix) -> CMatrix {
    hermitian_function(a, |v| if v > 1e-13 { v.sqrt() } else { 0.0 })
}

/// `exp(-i t H)` for Hermitian `H`.
pub fn unitary_from_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    let (values, vectors) = eigh(h);
    let n = values.len();
    let mut scaled = vectors.clone();
    for (j, &v) in values.iter().enumerate() {
        let phase = C64::from_polar(1.0, -t * v);
        for i in 0..n {
            scaled[(i, j)] *= phase;
        }
    }
    scaled * vectors.adjoint()
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_real(a: &RMatrix) -> f64 {
    a.iter().map(|z| z.abs()).fold(0.0, f64::max)
}

pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn real_part(a: &CMatrix) -> RMatrix {
    a.map(|z| z.re)
}

pub fn imag_part(a: &CMatrix) -> RMatrix {
    a.map(|z| z.im)
}

/// `<u|v>` with the conjugate on the left argument.
pub fn braket(u: &CVector, v: &CVector) -> C64 {
    u.dotc(v)
}

pub fn all_finite(values: impl IntoIterator<Item = f64>) -> bool {
    values.into_iter().all(f64::is_finite)
}
