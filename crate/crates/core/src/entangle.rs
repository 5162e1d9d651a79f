//! Bipartite entanglement: separability and maximal-entanglement predicates
//! read off the local-unitary pull-back, the cross-block norm identity,
//! spin flip and concurrence, the two-parameter two-qubit family, and the
//! quantum relative entropy.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::grouppullback::{projective_pullback_tensor, pullback_tensor};
use crate::iovt::f2_candidate;
use crate::linalg::{self, c, CMatrix, CVector, C64};
use crate::qstate::{
    gellmann_basis, hs_norm, local_basis, partial_trace, projector, tensor_product, DensityState,
    PureState, Side,
};

fn two_qubit(rho: &DensityState) -> Result<()> {
    if rho.dims() != [2, 2] {
        return Err(Error::Shape(format!(
            "two-qubit state expected, got dims {:?}",
            rho.dims()
        )));
    }
    Ok(())
}

/// Cross block `C̃_jk = ρ(g_j ⊗ g_k) − ρ_A(g_j) ρ_B(g_k)` over the
/// local Gell-Mann basis.
pub fn cross_block(rho: &DensityState) -> Result<CMatrix> {
    let n = rho.bipartite_dim()?;
    projective_pullback_tensor(rho, &local_basis(n)?)?
        .blocks()
        .map(|b| b.c_block)
}

/// True iff the projective cross block vanishes, `max |C̃_jk| ≤ tol`; the
/// vanishing cross block characterizes product vectors (the image of the
/// Segre embedding).
pub fn is_separable_pure(psi: &PureState, tol: f64) -> Result<bool> {
    psi.bipartite_dim()?;
    Ok(linalg::max_abs(&cross_block(&projector(psi))?) <= tol)
}

/// The two quantities behind [`is_maximally_entangled`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximalityWitness {
    /// `max |Im T_jk|` over the local basis.
    pub symplectic_sup: f64,
    /// `||ρ_A − 1/n||₂`.
    pub reduced_distance: f64,
}

pub fn maximality_witness(psi: &PureState) -> Result<MaximalityWitness> {
    let n = psi.bipartite_dim()?;
    let rho = projector(psi);
    let t = pullback_tensor(&rho, &local_basis(n)?)?;
    let symplectic_sup = linalg::max_abs_real(&t.symplectic());
    let reduced = partial_trace(&rho, Side::A)?;
    let reduced_distance = hs_norm(&(reduced.matrix() - linalg::identity(n) / C64::from(n as f64)));
    Ok(MaximalityWitness {
        symplectic_sup,
        reduced_distance,
    })
}

/// True iff the pulled-back symplectic form vanishes (`sup |Im T| ≤ tol`).
///
/// The reduced-state test `||ρ_A − 1/n||₂ ≤ tol` is evaluated alongside.
/// The two quantities bound each other within a factor `n²`, so a verdict
/// from one test while the other exceeds `n²·tol` is reported as
/// [`Error::Consistency`].
pub fn is_maximally_entangled(psi: &PureState, tol: f64) -> Result<bool> {
    let n = psi.bipartite_dim()? as f64;
    let w = maximality_witness(psi)?;
    let by_symplectic = w.symplectic_sup <= tol;
    let by_reduced = w.reduced_distance <= tol;
    let band = n * n * tol;
    if (by_symplectic && w.reduced_distance > band) || (by_reduced && w.symplectic_sup > band) {
        return Err(Error::Consistency(format!(
            "symplectic sup {:e} and reduced-state distance {:e} disagree at tol {tol:e}",
            w.symplectic_sup, w.reduced_distance
        )));
    }
    Ok(by_symplectic)
}

/// Both sides of the cross-block norm identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormDistance {
    /// `||C̃||₂ / n²` with single-factor generators normalized to
    /// `Tr(g_j g_k) = n² δ_jk`.
    pub lhs: f64,
    /// `||ρ − ρ_A ⊗ ρ_B||₂`.
    pub rhs: f64,
}

/// `(1/n²)||C̃||₂` against `||ρ − ρ_A ⊗ ρ_B||₂` for a pure bipartite state.
///
/// The identity is normalization-dependent; it holds exactly when the local
/// generators carry `Tr(g_j g_k) = n² δ_jk`, so the cross block is taken over
/// the Gell-Mann basis rescaled by `n/√2`.
pub fn c_norm_distance(psi: &PureState) -> Result<NormDistance> {
    let n = psi.bipartite_dim()?;
    let rho = projector(psi);
    let scaled = local_basis(n)?.rescaled(n as f64 / 2f64.sqrt());
    let cross = projective_pullback_tensor(&rho, &scaled)?.blocks()?.c_block;
    let lhs = hs_norm(&cross) / (n * n) as f64;
    let ra = partial_trace(&rho, Side::A)?;
    let rb = partial_trace(&rho, Side::B)?;
    let rhs = hs_norm(&(rho.matrix() - tensor_product(&ra, &rb).matrix()));
    Ok(NormDistance { lhs, rhs })
}

fn sigma_y_sigma_y() -> CMatrix {
    let sy = gellmann_basis(2).expect("n = 2 is valid").generators()[1].clone();
    sy.kronecker(&sy)
}

/// `ρ̃ = (σy ⊗ σy) ρ̄ (σy ⊗ σy)`, with `ρ̄` the entry-wise conjugate.
pub fn spin_flip(rho: &DensityState) -> Result<DensityState> {
    two_qubit(rho)?;
    let y = sigma_y_sigma_y();
    DensityState::from_rounded(&y * rho.matrix().conjugate() * &y, vec![2, 2])
}

/// Which closed form turns `Spec(ρρ̃)` into a concurrence value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConcurrenceForm {
    /// `max(√μ₁ − √μ₂ − √μ₃ − √μ₄, 0)` with `μ` decreasing.
    #[default]
    Wootters,
    /// `max(μ₄ − μ₃ − μ₂ − μ₁, 0)` with `μ` increasing, i.e. eigenvalues
    /// used without square roots.
    LiteralSpectrum,
}

/// Square roots of the eigenvalues of `ρρ̃`, decreasing.
///
/// Computed as the singular values of `√ρ √ρ̃`, whose Gram matrix
/// `√ρ ρ̃ √ρ` is similar to `ρρ̃`; this avoids a non-Hermitian eigensolve and
/// the `√ε` blow-up of taking roots of rounding noise.
pub fn spin_flip_spectrum_roots(rho: &DensityState) -> Result<[f64; 4]> {
    two_qubit(rho)?;
    let y = sigma_y_sigma_y();
    let sqrt_rho = linalg::sqrt_psd(rho.matrix());
    let sqrt_flipped = &y * sqrt_rho.conjugate() * &y;
    let mut s: Vec<f64> = (sqrt_rho * sqrt_flipped)
        .singular_values()
        .iter()
        .copied()
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok([s[0], s[1], s[2], s[3]])
}

pub fn concurrence(rho: &DensityState) -> Result<f64> {
    concurrence_with(rho, ConcurrenceForm::Wootters)
}

pub fn concurrence_with(rho: &DensityState, form: ConcurrenceForm) -> Result<f64> {
    let roots = spin_flip_spectrum_roots(rho)?;
    let value = match form {
        ConcurrenceForm::Wootters => roots[0] - roots[1] - roots[2] - roots[3],
        ConcurrenceForm::LiteralSpectrum => {
            let mu = roots.map(|r| r * r);
            mu[0] - mu[1] - mu[2] - mu[3]
        }
    };
    Ok(value.max(0.0))
}

/// Point of the family `x|α₀><α₀| + (1−x) 1/4` with
/// `|α₀> = cos α₀ |11> + sin α₀ |00>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyPoint {
    x: f64,
    alpha0: f64,
}

impl FamilyPoint {
    pub fn new(x: f64, alpha0: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!("x = {x} outside [0, 1]")));
        }
        if !(0.0..=FRAC_PI_2).contains(&alpha0) {
            return Err(Error::Domain(format!(
                "alpha0 = {alpha0} outside [0, pi/2]"
            )));
        }
        Ok(Self { x, alpha0 })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }
}

pub fn family_state(p: FamilyPoint) -> DensityState {
    let (s, co) = p.alpha0.sin_cos();
    let v = CVector::from_vec(vec![c(s, 0.), c(0., 0.), c(0., 0.), c(co, 0.)]);
    let pure = v.clone() * v.adjoint();
    let mixed = linalg::identity(4) / C64::from(4.0);
    let m = pure * C64::from(p.x) + mixed * C64::from(1.0 - p.x);
    DensityState::from_rounded(m, vec![2, 2]).expect("convex combination of states")
}

/// `S(ρ) = −Tr ρ ln ρ`, with `0 ln 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityState) -> f64 {
    -rho.eigenvalues()
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| l * l.ln())
        .sum::<f64>()
}

const SUPPORT_TOL: f64 = 1e-12;

/// `S(ρ‖σ) = Tr ρ ln ρ − Tr ρ ln σ`; `+∞` when the support of `ρ` is not
/// contained in that of `σ`.
pub fn relative_entropy(rho: &DensityState, sigma: &DensityState) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Shape(format!(
            "states of dimension {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let (mu, vectors) = linalg::eigh(sigma.matrix());
    let mut cross = 0.0;
    for (k, &m) in mu.iter().enumerate() {
        let v = vectors.column(k);
        let weight = (v.adjoint() * rho.matrix() * v)[(0, 0)].re;
        if m <= SUPPORT_TOL {
            if weight > SUPPORT_TOL {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += weight * m.ln();
    }
    Ok((-von_neumann_entropy(rho) - cross).max(0.0))
}

/// Uniform `nx × nalpha` grid over `x ∈ [0, 1]`, `α₀ ∈ [0, π/2]`, endpoints
/// included.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    nx: usize,
    nalpha: usize,
}

/// Monotone candidate and concurrence at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub x: f64,
    pub alpha0: f64,
    pub f2: f64,
    pub concurrence: f64,
}

impl GridSpec {
    pub fn new(nx: usize, nalpha: usize) -> Result<Self> {
        if nx < 2 || nalpha < 2 {
            return Err(Error::Domain(format!(
                "grid needs at least 2 points per axis, got {nx} x {nalpha}"
            )));
        }
        Ok(Self { nx, nalpha })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn nalpha(&self) -> usize {
        self.nalpha
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.nx {
            1.0
        } else {
            i as f64 / (self.nx - 1) as f64
        }
    }

    pub fn alpha0(&self, j: usize) -> f64 {
        if j + 1 == self.nalpha {
            FRAC_PI_2
        } else {
            FRAC_PI_2 * j as f64 / (self.nalpha - 1) as f64
        }
    }

    /// Row `i`: fixed `x`, all `α₀` in increasing order.
    pub fn row(&self, i: usize) -> Result<Vec<GridPoint>> {
        let x = self.x(i);
        (0..self.nalpha)
            .map(|j| {
                let alpha0 = self.alpha0(j);
                let rho = family_state(FamilyPoint::new(x, alpha0)?);
                Ok(GridPoint {
                    x,
                    alpha0,
                    f2: f2_candidate(&rho)?,
                    concurrence: concurrence(&rho)?,
                })
            })
            .collect()
    }

    /// All rows, `x` outer.
    pub fn evaluate(&self) -> Result<Vec<GridPoint>> {
        let mut out = Vec::with_capacity(self.nx * self.nalpha);
        for i in 0..self.nx {
            out.extend(self.row(i)?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use crate::qstate::StateSampler;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, LN_2};

    fn ket(n: usize, amps: &[(usize, C64)]) -> PureState {
        let mut v = CVector::zeros(n * n);
        for &(i, a) in amps {
            v[i] = a;
        }
        PureState::bipartite(v, n).unwrap()
    }

    fn bell() -> PureState {
        let s = 0.5f64.sqrt();
        ket(2, &[(0, c(s, 0.)), (3, c(s, 0.))])
    }

    /// Wootters oracle: roots of the eigenvalues of the non-Hermitian
    /// product `ρρ̃`, from a general Schur eigensolve.
    fn concurrence_oracle(rho: &DensityState) -> f64 {
        let flipped = spin_flip(rho).unwrap();
        let prod = rho.matrix() * flipped.matrix();
        let mut roots: Vec<f64> = prod
            .schur()
            .eigenvalues()
            .expect("complex Schur form is triangular")
            .iter()
            .map(|z| z.re.max(0.0).sqrt())
            .collect();
        roots.sort_by(|a, b| b.total_cmp(a));
        (roots[0] - roots[1] - roots[2] - roots[3]).max(0.0)
    }

    #[test]
    fn separability_examples() {
        assert!(is_separable_pure(&ket(2, &[(0, c(1., 0.))]), 1e-12).unwrap());
        assert!(!is_separable_pure(&bell(), 1e-12).unwrap());
        let s = 0.5f64.sqrt();
        assert!(is_separable_pure(&ket(2, &[(0, c(s, 0.)), (1, c(s, 0.))]), 1e-12).unwrap());
        let single = PureState::from_slice(&[c(1., 0.), c(0., 0.)]).unwrap();
        assert!(matches!(
            is_separable_pure(&single, 1e-12),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn maximal_entanglement_examples() {
        assert!(is_maximally_entangled(&bell(), 1e-10).unwrap());
        assert!(!is_maximally_entangled(&ket(2, &[(0, c(1., 0.))]), 1e-10).unwrap());
        let (s, co) = FRAC_PI_6.sin_cos();
        let partial = ket(2, &[(0, c(co, 0.)), (3, c(s, 0.))]);
        assert!(!is_maximally_entangled(&partial, 1e-10).unwrap());
        // Oracle: reduced state diag(3/4, 1/4).
        let ra = partial_trace(&projector(&partial), Side::A).unwrap();
        assert!((ra.matrix()[(0, 0)].re - 0.75).abs() < 1e-15);
        assert!((ra.matrix()[(1, 1)].re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn maximal_entanglement_survives_local_unitaries() {
        let mut s = StateSampler::new(12);
        for n in 2..4 {
            let amps: Vec<(usize, C64)> = (0..n)
                .map(|i| (i * n + i, c(1.0 / (n as f64).sqrt(), 0.)))
                .collect();
            let max = ket(n, &amps);
            for _ in 0..10 {
                let rotated = max.transformed(&s.local_unitary(n)).unwrap();
                assert!(is_maximally_entangled(&rotated, 1e-10).unwrap());
            }
        }
    }

    #[test]
    fn norm_identity_examples() {
        let d = c_norm_distance(&bell()).unwrap();
        let want = 3f64.sqrt() / 2.0;
        assert!((d.lhs - want).abs() < 1e-12);
        assert!((d.rhs - want).abs() < 1e-12);
        // Oracle for rhs: ||ρ_Bell − 1/4||² = 1 − 1/2 + 1/4.
        assert!((want * want - 0.75).abs() < 1e-15);
        let d = c_norm_distance(&ket(2, &[(0, c(1., 0.))])).unwrap();
        assert_eq!((d.lhs, d.rhs), (0.0, 0.0));
        // Unscaled cross block of the Bell state is diag(1, -1, 1).
        let cb = cross_block(&projector(&bell())).unwrap();
        assert!((hs_norm(&cb) - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn norm_identity_on_random_states() {
        let mut s = StateSampler::new(77);
        for n in 2..4 {
            for _ in 0..100 {
                let d = c_norm_distance(&s.pure_bipartite(n)).unwrap();
                assert!((d.lhs - d.rhs).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn spin_flip_examples() {
        let zz = projector(&ket(2, &[(0, c(1., 0.))]));
        let oo = projector(&ket(2, &[(3, c(1., 0.))]));
        assert!(max_abs(&(spin_flip(&zz).unwrap().matrix() - oo.matrix())) < 1e-15);
        let b = projector(&bell());
        assert!(max_abs(&(spin_flip(&b).unwrap().matrix() - b.matrix())) < 1e-15);
        let mm = DensityState::maximally_mixed(vec![2, 2]);
        assert!(max_abs(&(spin_flip(&mm).unwrap().matrix() - mm.matrix())) < 1e-15);
        let qutrits = DensityState::maximally_mixed(vec![3, 3]);
        assert!(matches!(spin_flip(&qutrits), Err(Error::Shape(_))));
    }

    #[test]
    fn concurrence_examples() {
        assert!((concurrence(&projector(&bell())).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(
            concurrence(&projector(&ket(2, &[(0, c(1., 0.))]))).unwrap(),
            0.0
        );
        let werner = family_state(FamilyPoint::new(2.0 / 3.0, FRAC_PI_4).unwrap());
        assert!((concurrence(&werner).unwrap() - 0.5).abs() < 1e-12);
        assert!((concurrence_oracle(&werner) - 0.5).abs() < 1e-7);
    }

    #[test]
    fn literal_form_differs_off_the_endpoints() {
        // Eigenvalues of ρρ̃ for a Werner state are ((1+3x)/4)², ((1−x)/4)² ×3.
        let x = 0.5;
        let werner = family_state(FamilyPoint::new(x, FRAC_PI_4).unwrap());
        let big: f64 = (1.0 + 3.0 * x) / 4.0;
        let small: f64 = (1.0 - x) / 4.0;
        let want = (big * big - 3.0 * small * small).max(0.0);
        let got = concurrence_with(&werner, ConcurrenceForm::LiteralSpectrum).unwrap();
        assert!((got - want).abs() < 1e-12);
        let wootters = concurrence(&werner).unwrap();
        assert!((wootters - (3.0 * x - 1.0) / 2.0).abs() < 1e-12);
        assert!((got - wootters).abs() > 0.05);
    }

    #[test]
    fn concurrence_agrees_with_eigen_oracle() {
        let mut s = StateSampler::new(5);
        for rank in 1..=4 {
            for _ in 0..10 {
                let rho = s.mixed_bipartite(2, rank).unwrap();
                let got = concurrence(&rho).unwrap();
                assert!((got - concurrence_oracle(&rho)).abs() < 1e-6, "rank {rank}");
                assert!((0.0..=1.0).contains(&got));
            }
        }
    }

    #[test]
    fn werner_line() {
        for x in [0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0] {
            let rho = family_state(FamilyPoint::new(x, FRAC_PI_4).unwrap());
            let want = ((3.0 * x - 1.0) / 2.0f64).max(0.0);
            assert!(
                (concurrence(&rho).unwrap() - want).abs() <= 1e-10,
                "x = {x}"
            );
        }
    }

    #[test]
    fn family_edges_are_separable() {
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            for a in [0.0, FRAC_PI_2] {
                let rho = family_state(FamilyPoint::new(x, a).unwrap());
                assert!(concurrence(&rho).unwrap() <= 1e-12, "x={x} a={a}");
            }
        }
    }

    #[test]
    fn family_examples() {
        let bell_rho = projector(&bell());
        let f = family_state(FamilyPoint::new(1.0, FRAC_PI_4).unwrap());
        assert!(max_abs(&(f.matrix() - bell_rho.matrix())) < 1e-15);
        let f = family_state(FamilyPoint::new(0.0, 0.7).unwrap());
        assert!(max_abs(&(f.matrix() - linalg::identity(4) / C64::from(4.0))) < 1e-15);
        let f = family_state(FamilyPoint::new(0.5, 0.0).unwrap());
        let mut want = linalg::identity(4) / C64::from(8.0);
        want[(3, 3)] += c(0.5, 0.);
        assert!(max_abs(&(f.matrix() - want)) < 1e-15);
        assert!(FamilyPoint::new(1.1, 0.0).is_err());
        assert!(FamilyPoint::new(0.5, 2.0).is_err());
    }

    #[test]
    fn concurrence_local_unitary_invariance() {
        let mut s = StateSampler::new(44);
        for rank in 1..=4 {
            let rho = s.mixed_bipartite(2, rank).unwrap();
            let rotated = rho.conjugated(&s.local_unitary(2)).unwrap();
            assert!((concurrence(&rho).unwrap() - concurrence(&rotated).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn relative_entropy_examples() {
        let up = projector(&PureState::from_slice(&[c(1., 0.), c(0., 0.)]).unwrap());
        let down = projector(&PureState::from_slice(&[c(0., 0.), c(1., 0.)]).unwrap());
        let mm = DensityState::maximally_mixed(vec![2]);
        assert_eq!(relative_entropy(&up, &up).unwrap(), 0.0);
        assert!((relative_entropy(&up, &mm).unwrap() - LN_2).abs() < 1e-14);
        assert_eq!(relative_entropy(&up, &down).unwrap(), f64::INFINITY);
        assert!(matches!(
            relative_entropy(&up, &DensityState::maximally_mixed(vec![3])),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn klein_inequality() {
        let mut s = StateSampler::new(8);
        for dim in 2..5 {
            for rank in 1..=dim {
                let rho = s.mixed(dim, rank).unwrap();
                let sigma = s.mixed(dim, dim).unwrap();
                assert!(relative_entropy(&rho, &sigma).unwrap() >= -1e-10);
                assert!(relative_entropy(&sigma, &sigma).unwrap().abs() < 1e-10);
            }
        }
    }

    #[test]
    fn grid_layout() {
        let g = GridSpec::new(3, 5).unwrap();
        let pts = g.evaluate().unwrap();
        assert_eq!(pts.len(), 15);
        assert_eq!((pts[0].x, pts[0].alpha0), (0.0, 0.0));
        assert_eq!((pts[14].x, pts[14].alpha0), (1.0, FRAC_PI_2));
        assert_eq!(pts[5].x, 0.5);
        // x = 1, α₀ = π/4 is the Bell state
        assert!((pts[12].concurrence - 1.0).abs() < 1e-10);
        assert!((pts[12].f2 - 12.0).abs() < 1e-10);
        assert!(GridSpec::new(1, 5).is_err());
    }
}
