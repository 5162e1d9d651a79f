//! Invariant operator-valued tensors on the local unitary group.
//!
//! The order-`k` tensor `Π_a R(X_{i_a}) ⊗_a θ^{i_a}` is evaluated on a state
//! to the complex array `ρ(R_{i_1} ⋯ R_{i_k})`. Inner products over the flat
//! coframe metric give functions constant on local-unitary orbits, which are
//! the entanglement monotone candidates. Replacing `R_j` by the shifted
//! `R̃_j = R_j − ρ(R_j)·1` gives the covariance-matrix realization.

use crate::error::{Error, Result};
use crate::grouppullback::first_moments;
use crate::linalg::{self, CMatrix, C64};
use crate::qstate::{local_basis, DensityState, GeneratorBasis};

/// Upper bound on the number of tensor entries `m^k`.
pub const MAX_ENTRIES: u128 = 10_000_000;

/// Evaluated tensor, stored flat in row-major multi-index order.
#[derive(Debug, Clone, PartialEq)]
pub struct IovtCoefficients {
    order: usize,
    basis_len: usize,
    entries: Vec<C64>,
    shifted: bool,
    first_moments: Option<Vec<f64>>,
}

impl IovtCoefficients {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn basis_len(&self) -> usize {
        self.basis_len
    }

    pub fn is_shifted(&self) -> bool {
        self.shifted
    }

    /// First moments `ρ(R_j)` subtracted from the generators, when shifted.
    pub fn first_moments(&self) -> Option<&[f64]> {
        self.first_moments.as_deref()
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn get(&self, index: &[usize]) -> Option<C64> {
        if index.len() != self.order || index.iter().any(|&i| i >= self.basis_len) {
            return None;
        }
        let flat = index.iter().fold(0, |acc, &i| acc * self.basis_len + i);
        Some(self.entries[flat])
    }

    /// Order-2 tensor as an `m × m` matrix.
    pub fn as_matrix(&self) -> Option<CMatrix> {
        (self.order == 2)
            .then(|| CMatrix::from_row_slice(self.basis_len, self.basis_len, &self.entries))
    }
}

fn collect_traces(prefix: &CMatrix, gens: &[CMatrix], depth: usize, out: &mut Vec<C64>) {
    if depth == 1 {
        out.extend(gens.iter().map(|g| linalg::trace_of_product(prefix, g)));
        return;
    }
    for g in gens {
        collect_traces(&(prefix * g), gens, depth - 1, out);
    }
}

/// `entry(i_1, …, i_k) = Tr(ρ S_{i_1} ⋯ S_{i_k})` with `S = R` or `R̃`.
pub fn iovt(
    rho: &DensityState,
    basis: &GeneratorBasis,
    k: usize,
    shifted: bool,
) -> Result<IovtCoefficients> {
    if k == 0 {
        return Err(Error::Domain("tensor order must be >= 1".into()));
    }
    let m = basis.len();
    let entries = (m as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if entries > MAX_ENTRIES {
        return Err(Error::Capacity {
            entries,
            limit: MAX_ENTRIES,
        });
    }
    let moments = first_moments(rho, basis)?;
    let gens: Vec<CMatrix> = if shifted {
        let id = linalg::identity(basis.dim());
        basis
            .generators()
            .iter()
            .zip(&moments)
            .map(|(g, &mu)| g - &id * C64::from(mu))
            .collect()
    } else {
        basis.generators().to_vec()
    };
    let mut out = Vec::with_capacity(entries as usize);
    collect_traces(rho.matrix(), &gens, k, &mut out);
    Ok(IovtCoefficients {
        order: k,
        basis_len: m,
        entries: out,
        shifted,
        first_moments: shifted.then_some(moments),
    })
}

/// `Σ conj(t) s` over all multi-indices.
pub fn iovt_inner(t: &IovtCoefficients, s: &IovtCoefficients) -> Result<C64> {
    if t.order != s.order || t.basis_len != s.basis_len {
        return Err(Error::Shape(format!(
            "order {} over {} generators vs order {} over {}",
            t.order, t.basis_len, s.order, s.basis_len
        )));
    }
    Ok(t.entries
        .iter()
        .zip(&s.entries)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

fn self_inner(t: &IovtCoefficients) -> f64 {
    t.entries.iter().map(|z| z.norm_sqr()).sum()
}

/// `(1/8)(<G,G> + (−1)^s <Ω,Ω>) − 1/2` for a two-qubit state, where
/// `G = ρ([R_j,R_k]₊)` and `Ω = ρ([R_j,R_k]₋)` over the local basis.
/// Equals `Tr ρ²` for `s = 0` and `Tr ρρ̃` for `s = 1`.
pub fn purity_scalar(rho: &DensityState, s: u8) -> Result<f64> {
    if rho.dims() != [2, 2] {
        return Err(Error::Shape(format!(
            "two-qubit state expected, got dims {:?}",
            rho.dims()
        )));
    }
    if s > 1 {
        return Err(Error::Domain(format!("s must be 0 or 1, got {s}")));
    }
    let t = iovt(rho, &local_basis(2)?, 2, false)?;
    let g: f64 = t.entries.iter().map(|z| z.re * z.re).sum();
    let omega: f64 = t.entries.iter().map(|z| z.im * z.im).sum();
    let sign = if s == 0 { 1.0 } else { -1.0 };
    Ok((g + sign * omega) / 8.0 - 0.5)
}

/// `Σ_n a_n <θ,θ>^n` for the order-`k` tensor `θ` of `ρ`.
pub fn monotone_poly(
    rho: &DensityState,
    basis: &GeneratorBasis,
    k: usize,
    coeffs: &[f64],
    shifted: bool,
) -> Result<f64> {
    if coeffs.is_empty() {
        return Err(Error::Domain(
            "polynomial needs at least one coefficient".into(),
        ));
    }
    let x = self_inner(&iovt(rho, basis, k, shifted)?);
    // Horner
    Ok(coeffs.iter().rev().fold(0.0, |acc, &a| acc * x + a))
}

/// `<θ̃,θ̃>` for the shifted order-2 tensor over the local basis.
pub fn f2_candidate(rho: &DensityState) -> Result<f64> {
    let n = rho.bipartite_dim()?;
    monotone_poly(rho, &local_basis(n)?, 2, &[0.0, 1.0], true)
}
