//! Pull-back tensors on a Lie group acting unitarily on the Hilbert space.
//!
//! For a representation with Hermitian generators `R_j` and a state `ρ`, the
//! pull-back of the Hermitian tensor along `g ↦ U(g)|ψ>` has coefficients
//! `T_jk = ρ(R_j R_k)` in the left-invariant coframe. The projective variant
//! subtracts the first moments, `T̃_jk = ρ(R_j R_k) − ρ(R_j) ρ(R_k)`, and is
//! the coefficient matrix of the Fubini–Study pull-back (equivalently the
//! covariance-matrix tensor of the shifted generators).

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, RMatrix, C64};
use crate::qstate::io::raw_real_matrix;
use crate::qstate::{DensityState, FactorLabel, GeneratorBasis};

/// Coefficient matrix of a pull-back tensor over a generator basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PullbackTensor {
    coefficients: CMatrix,
    basis: GeneratorBasis,
    projective: bool,
}

/// Same-factor and cross blocks of a tensor over a bipartite basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientBlocks {
    /// Indices acting on factor A.
    pub a_block: CMatrix,
    /// Indices acting on factor B.
    pub b_block: CMatrix,
    /// Rows from A, columns from B.
    pub c_block: CMatrix,
}

/// Real and imaginary parts of a tensor, plus its blocks when the basis is
/// bipartite.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    /// `Re T_jk = ρ([R_j, R_k]₊)`
    pub riemannian: RMatrix,
    /// `Im T_jk = ρ([R_j, R_k]₋)`
    pub symplectic: RMatrix,
    pub blocks: Option<CoefficientBlocks>,
}

impl PullbackTensor {
    pub fn coefficients(&self) -> &CMatrix {
        &self.coefficients
    }

    pub fn basis(&self) -> &GeneratorBasis {
        &self.basis
    }

    pub fn is_projective(&self) -> bool {
        self.projective
    }

    pub fn riemannian(&self) -> RMatrix {
        linalg::real_part(&self.coefficients)
    }

    pub fn symplectic(&self) -> RMatrix {
        linalg::imag_part(&self.coefficients)
    }

    pub fn blocks(&self) -> Result<CoefficientBlocks> {
        if !self.basis.is_bipartite() {
            return Err(Error::Label);
        }
        let a = self.basis.indices_of(FactorLabel::A);
        let b = self.basis.indices_of(FactorLabel::B);
        let slice = |rows: &[usize], cols: &[usize]| {
            CMatrix::from_fn(rows.len(), cols.len(), |i, j| {
                self.coefficients[(rows[i], cols[j])]
            })
        };
        Ok(CoefficientBlocks {
            a_block: slice(&a, &a),
            b_block: slice(&b, &b),
            c_block: slice(&a, &b),
        })
    }

    /// Number of directions along which the Riemannian part is degenerate,
    /// i.e. the dimension of the isotropy algebra seen by the tensor.
    pub fn riemannian_nullity(&self, tol: f64) -> usize {
        let sym = self.riemannian().map(C64::from);
        linalg::eigvalsh(&sym)
            .iter()
            .filter(|v| v.abs() <= tol)
            .count()
    }

    /// Eigenvalues of the (Hermitian) coefficient matrix, ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.coefficients)
    }
}

fn check_shapes(rho: &DensityState, basis: &GeneratorBasis) -> Result<()> {
    if rho.dim() != basis.dim() {
        return Err(Error::Shape(format!(
            "state of dimension {} with generators of dimension {}",
            rho.dim(),
            basis.dim()
        )));
    }
    Ok(())
}

/// `T_jk = Tr(ρ R_j R_k)` for pure or mixed `ρ`.
pub fn pullback_tensor(rho: &DensityState, basis: &GeneratorBasis) -> Result<PullbackTensor> {
    check_shapes(rho, basis)?;
    let gens = basis.generators();
    let rho_r: Vec<CMatrix> = gens.iter().map(|g| rho.matrix() * g).collect();
    let m = gens.len();
    let mut t = CMatrix::zeros(m, m);
    for j in 0..m {
        for k in j..m {
            let v = linalg::trace_of_product(&rho_r[j], &gens[k]);
            t[(j, k)] = v;
            t[(k, j)] = v.conj();
        }
        t[(j, j)].im = 0.0;
    }
    Ok(PullbackTensor {
        coefficients: t,
        basis: basis.clone(),
        projective: false,
    })
}

/// First moments `ρ(R_j)`.
pub fn first_moments(rho: &DensityState, basis: &GeneratorBasis) -> Result<Vec<f64>> {
    check_shapes(rho, basis)?;
    Ok(basis
        .generators()
        .iter()
        .map(|g| rho.expect(g).re)
        .collect())
}

/// `T̃_jk = Tr(ρ R_j R_k) − Tr(ρ R_j) Tr(ρ R_k)`.
pub fn projective_pullback_tensor(
    rho: &DensityState,
    basis: &GeneratorBasis,
) -> Result<PullbackTensor> {
    let mut t = pullback_tensor(rho, basis)?;
    let mean = first_moments(rho, basis)?;
    let m = mean.len();
    for j in 0..m {
        for k in 0..m {
            t.coefficients[(j, k)] -= C64::from(mean[j] * mean[k]);
        }
    }
    t.projective = true;
    Ok(t)
}

pub fn decompose(t: &PullbackTensor) -> Decomposition {
    Decomposition {
        riemannian: t.riemannian(),
        symplectic: t.symplectic(),
        blocks: t.blocks().ok(),
    }
}

#[derive(serde::Serialize)]
struct TensorOut {
    projective: bool,
    labels: Vec<&'static str>,
    real: Vec<Vec<Box<serde_json::value::RawValue>>>,
    imag: Vec<Vec<Box<serde_json::value::RawValue>>>,
}

impl PullbackTensor {
    /// JSON object with the generator labels and the real and imaginary
    /// parts of the coefficients as lists of rows.
    pub fn to_json(&self) -> Result<String> {
        let m = self.coefficients.nrows();
        let c = &self.coefficients;
        let out = TensorOut {
            projective: self.projective,
            labels: self
                .basis
                .labels()
                .iter()
                .map(|l| match l {
                    FactorLabel::Whole => "whole",
                    FactorLabel::A => "A",
                    FactorLabel::B => "B",
                })
                .collect(),
            real: raw_real_matrix(m, m, |j, k| c[(j, k)].re)?,
            imag: raw_real_matrix(m, m, |j, k| c[(j, k)].im)?,
        };
        serde_json::to_string(&out).map_err(|e| Error::Parse(e.to_string()))
    }
}
