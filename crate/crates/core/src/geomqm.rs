//! Functions and tensors on the Hilbert manifold.
//!
//! A Hermitian operator `A` becomes the quadratic function
//! `f_A(ψ) = <ψ|Aψ>` on the real manifold with coordinates
//! `z^j = x^j + i y^j`. Its Rayleigh quotient `e_A = f_A / <ψ|ψ>` has the
//! eigenvectors of `A` as critical points, and the operator products
//! `[A,B]₊`, `[A,B]₋`, `AB` are recovered from the contravariant metric and
//! Poisson tensors applied to `df_A`, `df_B`.

use crate::error::{Error, Result};
use crate::linalg::{self, braket, CMatrix, CVector, C64};
use crate::qstate::PureState;

const HERMITIAN_TOL: f64 = 1e-10;

fn check_operator(a: &CMatrix, psi: &PureState, what: &str) -> Result<()> {
    linalg::require_hermitian(a, HERMITIAN_TOL, what)?;
    if a.nrows() != psi.dim() {
        return Err(Error::Shape(format!(
            "{what} is {}x{} but the state has dimension {}",
            a.nrows(),
            a.ncols(),
            psi.dim()
        )));
    }
    Ok(())
}

/// `f_A(ψ) = <ψ|Aψ>`, not normalized.
pub fn expectation(a: &CMatrix, psi: &PureState) -> Result<f64> {
    check_operator(a, psi, "operator")?;
    let v = psi.amplitudes();
    Ok(braket(v, &(a * v)).re)
}

/// `e_A(ψ) = f_A(ψ) / <ψ|ψ>`; constant on rays.
pub fn rayleigh(a: &CMatrix, psi: &PureState) -> Result<f64> {
    Ok(expectation(a, psi)? / psi.norm_sqr())
}

/// Gradient of `e_A` in the real coordinates, laid out as
/// `[∂/∂x^1 .. ∂/∂x^n, ∂/∂y^1 .. ∂/∂y^n]`.
///
/// `de_A = (2/<ψ|ψ>) (Re, Im)(Aψ − e_A ψ)`, which vanishes exactly when `ψ`
/// is an eigenvector.
pub fn rayleigh_gradient(a: &CMatrix, psi: &PureState) -> Result<Vec<f64>> {
    let e = rayleigh(a, psi)?;
    let v = psi.amplitudes();
    let residual = a * v - v * C64::from(e);
    let scale = 2.0 / psi.norm_sqr();
    Ok(residual
        .iter()
        .map(|z| scale * z.re)
        .chain(residual.iter().map(|z| scale * z.im))
        .collect())
}

/// Partial derivatives of a real function in the `(x, y)` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct RealCotangent {
    pub dx: Vec<f64>,
    pub dy: Vec<f64>,
}

/// `df_A` at `ψ`: `∂f_A/∂x^j = 2 Re (Aψ)_j`, `∂f_A/∂y^j = 2 Im (Aψ)_j`.
pub fn quadratic_differential(a: &CMatrix, psi: &PureState) -> Result<RealCotangent> {
    check_operator(a, psi, "operator")?;
    let av = a * psi.amplitudes();
    Ok(RealCotangent {
        dx: av.iter().map(|z| 2.0 * z.re).collect(),
        dy: av.iter().map(|z| 2.0 * z.im).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketKind {
    /// `f_{(AB+BA)/2}`
    Symmetric,
    /// `f_{(AB−BA)/(2i)}`
    Poisson,
    /// `f_{AB}`
    Star,
}

/// Bracket of `f_A` and `f_B` at `ψ`, evaluated from the operator product.
pub fn bracket(a: &CMatrix, b: &CMatrix, psi: &PureState, kind: BracketKind) -> Result<C64> {
    check_operator(a, psi, "first operator")?;
    check_operator(b, psi, "second operator")?;
    let v = psi.amplitudes();
    // <ψ|AB|ψ> = <Aψ|Bψ> = f_{[A,B]₊} + i f_{[A,B]₋}
    let star = braket(&(a * v), &(b * v));
    Ok(match kind {
        BracketKind::Symmetric => C64::from(star.re),
        BracketKind::Poisson => C64::from(star.im),
        BracketKind::Star => star,
    })
}

/// Same bracket evaluated from the coordinate differentials `df_A`, `df_B`
/// contracted with the contravariant tensors
/// `G⁻¹ = ¼ Σ (∂x⊗∂x + ∂y⊗∂y)` and `Ω⁻¹ = ¼ Σ (∂x⊗∂y − ∂y⊗∂x)`.
///
/// The ¼ comes from the quadratic functions having differentials `2(Aψ)`
/// in these coordinates.
pub fn bracket_coordinates(
    a: &CMatrix,
    b: &CMatrix,
    psi: &PureState,
    kind: BracketKind,
) -> Result<C64> {
    let da = quadratic_differential(a, psi)?;
    let db = quadratic_differential(b, psi)?;
    Ok(contract_brackets(&da, &db, kind))
}

/// Contraction of two cotangents with `G⁻¹` and/or `Ω⁻¹`.
pub fn contract_brackets(da: &RealCotangent, db: &RealCotangent, kind: BracketKind) -> C64 {
    let n = da.dx.len();
    let mut sym = 0.0;
    let mut poisson = 0.0;
    for j in 0..n {
        sym += da.dx[j] * db.dx[j] + da.dy[j] * db.dy[j];
        poisson += da.dx[j] * db.dy[j] - da.dy[j] * db.dx[j];
    }
    let (sym, poisson) = (0.25 * sym, 0.25 * poisson);
    match kind {
        BracketKind::Symmetric => C64::from(sym),
        BracketKind::Poisson => C64::from(poisson),
        BracketKind::Star => C64::new(sym, poisson),
    }
}

/// Tangent vector at a point of `H₀`, given by its complex components
/// `dz^j = dx^j + i dy^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealTangent(pub CVector);

impl RealTangent {
    pub fn new(components: CVector) -> Self {
        Self(components)
    }

    pub fn from_slice(components: &[C64]) -> Self {
        Self(CVector::from_column_slice(components))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// Pull-back of the Fubini–Study tensor to `H₀`, evaluated on `(u, v)`:
///
/// `<u|v>/<ψ|ψ> − <u|ψ><ψ|v>/<ψ|ψ>²`
///
/// which equals `Tr(ρ_ψ dρ_ψ(u) dρ_ψ(v))`. Hermitian in `(u, v)`; vanishes
/// whenever `u` or `v` lies along `ψ` or `iψ`.
pub fn fs_pullback_value(psi: &PureState, u: &RealTangent, v: &RealTangent) -> Result<C64> {
    if u.dim() != psi.dim() || v.dim() != psi.dim() {
        return Err(Error::Shape(format!(
            "tangents of dims {} and {} at a point of dim {}",
            u.dim(),
            v.dim(),
            psi.dim()
        )));
    }
    let p = psi.amplitudes();
    let norm = psi.norm_sqr();
    Ok(braket(&u.0, &v.0) / norm - braket(&u.0, p) * braket(p, &v.0) / (norm * norm))
}

/// Matrix `K_ab = fs_pullback_value(ψ, t_a, t_b)` over a list of tangents.
pub fn fs_pullback_matrix(psi: &PureState, tangents: &[RealTangent]) -> Result<CMatrix> {
    let m = tangents.len();
    let mut k = CMatrix::zeros(m, m);
    for a in 0..m {
        for b in 0..m {
            k[(a, b)] = fs_pullback_value(psi, &tangents[a], &tangents[b])?;
        }
    }
    Ok(k)
}
