//! Quantum and classical information metrics on parametrized families.
//!
//! A [`ParamFamily`] maps parameters `θ ∈ ℝ^d` to density states; its
//! quantum Fisher metric is built from the symmetric logarithmic derivative.
//! A [`SampledWavefunction`] is a one-dimensional family
//! `ψ(x, θ) = p(x, θ)^{1/2} e^{iW(x, θ)/2}` known on a grid. Its metric
//! decomposes into the classical Fisher metric of `p` plus the covariance
//! of the phase differentials.
//!
//! All θ-derivatives are central differences.

pub mod families;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geomqm::{fs_pullback_matrix, RealTangent};
use crate::linalg::{self, CMatrix, CVector, RMatrix, C64};
use crate::qstate::io::raw_real_matrix;
use crate::qstate::{DensityState, PureState};

pub const DEFAULT_FD_STEP: f64 = 1e-5;
/// Pairs of eigenvalues summing below this are treated as outside the support.
pub const SLD_CUTOFF: f64 = 1e-12;
const TANGENT_TOL: f64 = 1e-10;
const PURITY_TOL: f64 = 1e-8;
const NORMALIZATION_TOL: f64 = 1e-8;

type DensityMap = dyn Fn(&[f64]) -> Result<DensityState> + Send + Sync;
type GridMap = dyn Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync;

fn check_step(h: f64) -> Result<f64> {
    if h.is_finite() && h > 0.0 {
        Ok(h)
    } else {
        Err(Error::Domain(format!(
            "finite-difference step must be positive, got {h}"
        )))
    }
}

fn check_theta(theta: &[f64], d: usize) -> Result<()> {
    if theta.len() != d {
        return Err(Error::Shape(format!(
            "expected {d} parameters, got {}",
            theta.len()
        )));
    }
    if !linalg::all_finite(theta.iter().copied()) {
        return Err(Error::Domain(format!("non-finite parameters {theta:?}")));
    }
    Ok(())
}

fn probe(theta: &[f64], a: usize, delta: f64) -> Vec<f64> {
    let mut t = theta.to_vec();
    t[a] += delta;
    t
}

fn evaluation_error(theta: &[f64], e: Error) -> Error {
    match e {
        e @ Error::FamilyEvaluation { .. } => e,
        e => Error::FamilyEvaluation {
            theta: theta.to_vec(),
            reason: e.to_string(),
        },
    }
}

/// Parametrized family of density states.
#[derive(Clone)]
pub struct ParamFamily {
    evaluator: Arc<DensityMap>,
    fd_step: f64,
    d: usize,
}

impl fmt::Debug for ParamFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParamFamily")
            .field("d", &self.d)
            .field("fd_step", &self.fd_step)
            .finish_non_exhaustive()
    }
}

impl ParamFamily {
    pub fn new(
        d: usize,
        evaluator: impl Fn(&[f64]) -> Result<DensityState> + Send + Sync + 'static,
    ) -> Self {
        Self {
            evaluator: Arc::new(evaluator),
            fd_step: DEFAULT_FD_STEP,
            d,
        }
    }

    pub fn with_step(mut self, fd_step: f64) -> Result<Self> {
        self.fd_step = check_step(fd_step)?;
        Ok(self)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    pub fn evaluate(&self, theta: &[f64]) -> Result<DensityState> {
        check_theta(theta, self.d)?;
        (self.evaluator)(theta).map_err(|e| evaluation_error(theta, e))
    }

    /// `ρ(θ)` and the central differences `∂_a ρ`.
    pub fn derivatives(&self, theta: &[f64]) -> Result<(DensityState, Vec<CMatrix>)> {
        let rho = self.evaluate(theta)?;
        let h = self.fd_step;
        let mut out = Vec::with_capacity(self.d);
        for a in 0..self.d {
            let plus = self.evaluate(&probe(theta, a, h))?;
            let minus = self.evaluate(&probe(theta, a, -h))?;
            if plus.dim() != rho.dim() || minus.dim() != rho.dim() {
                return Err(Error::FamilyEvaluation {
                    theta: theta.to_vec(),
                    reason: "dimension changes between probe points".into(),
                });
            }
            let diff = (plus.matrix() - minus.matrix()) / C64::from(2.0 * h);
            out.push(linalg::hermitian_part(&diff));
        }
        Ok((rho, out))
    }
}

/// Symmetric logarithmic derivative: the `L` with `dρ = ½(ρL + Lρ)`.
///
/// Solved in the eigenbasis of `ρ`; entries with `λ_j + λ_k ≤ 1e-12` are
/// set to zero.
pub fn sld(rho: &DensityState, drho: &CMatrix) -> Result<CMatrix> {
    let n = linalg::require_square(drho, "tangent")?;
    if n != rho.dim() {
        return Err(Error::Shape(format!(
            "tangent is {n}x{n} but the state has dimension {}",
            rho.dim()
        )));
    }
    let scale = linalg::max_abs(drho).max(1.0);
    linalg::require_hermitian(drho, TANGENT_TOL * scale, "tangent")?;
    let tr = linalg::trace(drho);
    if tr.norm() > TANGENT_TOL * scale {
        return Err(Error::Domain(format!("tangent has trace {tr}, expected 0")));
    }
    let (lambda, v) = linalg::eigh(rho.matrix());
    let mut l = v.adjoint() * drho * &v;
    for j in 0..n {
        for k in 0..n {
            let s = lambda[j] + lambda[k];
            l[(j, k)] = if s > SLD_CUTOFF {
                l[(j, k)] * (2.0 / s)
            } else {
                C64::from(0.0)
            };
        }
    }
    Ok(linalg::hermitian_part(&(&v * l * v.adjoint())))
}

/// `Tr(ρ L_a L_b)`, Hermitian in `(a, b)`.
fn sld_tensor(rho: &DensityState, slds: &[CMatrix]) -> CMatrix {
    let d = slds.len();
    let rl: Vec<CMatrix> = slds.iter().map(|l| rho.matrix() * l).collect();
    let mut t = CMatrix::zeros(d, d);
    for a in 0..d {
        for b in a..d {
            let mut v = linalg::trace_of_product(&rl[a], &slds[b]);
            if a == b {
                v.im = 0.0;
            }
            t[(a, b)] = v;
            t[(b, a)] = v.conj();
        }
    }
    t
}

fn sld_tensor_at(
    fam: &ParamFamily,
    theta: &[f64],
) -> Result<(DensityState, Vec<CMatrix>, CMatrix)> {
    let (rho, drho) = fam.derivatives(theta)?;
    let slds = drho
        .iter()
        .map(|d| sld(&rho, d))
        .collect::<Result<Vec<_>>>()?;
    let t = sld_tensor(&rho, &slds);
    Ok((rho, drho, t))
}

/// `I_ab = Re Tr(ρ L_a L_b)`.
pub fn qfi_metric(fam: &ParamFamily, theta: &[f64]) -> Result<RMatrix> {
    Ok(linalg::real_part(&sld_tensor_at(fam, theta)?.2))
}

/// `4 Re Tr(ρ ∂_aρ ∂_bρ)`; only defined where `ρ(θ)` is pure.
pub fn pure_qfi(fam: &ParamFamily, theta: &[f64]) -> Result<RMatrix> {
    let (rho, drho) = fam.derivatives(theta)?;
    let defect = linalg::frobenius(&(rho.matrix() * rho.matrix() - rho.matrix()));
    if defect > PURITY_TOL {
        return Err(Error::NotPure(defect));
    }
    let d = drho.len();
    let mut out = RMatrix::zeros(d, d);
    for a in 0..d {
        let left = rho.matrix() * &drho[a];
        for b in a..d {
            let v = 4.0 * linalg::trace_of_product(&left, &drho[b]).re;
            out[(a, b)] = v;
            out[(b, a)] = v;
        }
    }
    Ok(out)
}

/// Metric decomposition `G = F + Cov(dW)` with antisymmetric part `Ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub g: RMatrix,
    pub omega: RMatrix,
    pub f: RMatrix,
    pub cov_w: RMatrix,
}

#[derive(serde::Serialize)]
struct ReportOut {
    #[serde(rename = "G")]
    g: Vec<Vec<Box<serde_json::value::RawValue>>>,
    #[serde(rename = "Omega")]
    omega: Vec<Vec<Box<serde_json::value::RawValue>>>,
    #[serde(rename = "F")]
    f: Vec<Vec<Box<serde_json::value::RawValue>>>,
    #[serde(rename = "CovW")]
    cov_w: Vec<Vec<Box<serde_json::value::RawValue>>>,
}

impl MetricReport {
    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    /// JSON object with keys `G`, `Omega`, `F`, `CovW`, each a list of rows.
    pub fn to_json(&self) -> Result<String> {
        let rows = |m: &RMatrix| raw_real_matrix(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
        let out = ReportOut {
            g: rows(&self.g)?,
            omega: rows(&self.omega)?,
            f: rows(&self.f)?,
            cov_w: rows(&self.cov_w)?,
        };
        serde_json::to_string(&out).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Report for a density family: `G` is the SLD metric, `Ω = Im Tr(ρ L_a L_b)`,
/// `F` the classical Fisher metric of the diagonal of `ρ` and
/// `Cov(dW) = G − F`.
pub fn density_report(fam: &ParamFamily, theta: &[f64]) -> Result<MetricReport> {
    let (rho, drho, t) = sld_tensor_at(fam, theta)?;
    let d = fam.d();
    let mut f = RMatrix::zeros(d, d);
    for i in 0..rho.dim() {
        let p = rho.matrix()[(i, i)].re;
        if p <= SLD_CUTOFF {
            continue;
        }
        for a in 0..d {
            for b in 0..d {
                f[(a, b)] += drho[a][(i, i)].re * drho[b][(i, i)].re / p;
            }
        }
    }
    let g = linalg::real_part(&t);
    Ok(MetricReport {
        cov_w: &g - &f,
        omega: linalg::imag_part(&t),
        g,
        f,
    })
}

/// One-dimensional wavefunction family sampled on a fixed grid.
#[derive(Clone)]
pub struct SampledWavefunction {
    grid: Vec<f64>,
    weights: Vec<f64>,
    p: Arc<GridMap>,
    w: Arc<GridMap>,
    d: usize,
    fd_step: f64,
}

impl fmt::Debug for SampledWavefunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SampledWavefunction")
            .field("points", &self.grid.len())
            .field("d", &self.d)
            .field("fd_step", &self.fd_step)
            .finish_non_exhaustive()
    }
}

/// Trapezoid weights on a strictly increasing grid.
pub fn trapezoid_weights(grid: &[f64]) -> Vec<f64> {
    let n = grid.len();
    let mut w = vec![0.0; n];
    for j in 1..n {
        let half = 0.5 * (grid[j] - grid[j - 1]);
        w[j - 1] += half;
        w[j] += half;
    }
    w
}

/// Per-θ samples of `p` and `W`.
struct Samples {
    p: Vec<f64>,
    w: Vec<f64>,
}

/// Samples at `θ` with `∂_a ln p` and `∂_a W` on the grid.
type Differentials = (Samples, Vec<Vec<f64>>, Vec<Vec<f64>>);

impl SampledWavefunction {
    /// `p` must return strictly positive densities normalized on the grid;
    /// `w` returns the phase in radians.
    pub fn new(
        grid: Vec<f64>,
        d: usize,
        p: impl Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync + 'static,
        w: impl Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync + 'static,
    ) -> Result<Self> {
        if grid.len() < 2 {
            return Err(Error::InvalidDimension(format!(
                "grid needs at least 2 points, got {}",
                grid.len()
            )));
        }
        if !linalg::all_finite(grid.iter().copied()) || grid.windows(2).any(|s| s[1] <= s[0]) {
            return Err(Error::Domain(
                "grid must be finite and strictly increasing".into(),
            ));
        }
        Ok(Self {
            weights: trapezoid_weights(&grid),
            grid,
            p: Arc::new(p),
            w: Arc::new(w),
            d,
            fd_step: DEFAULT_FD_STEP,
        })
    }

    pub fn with_step(mut self, fd_step: f64) -> Result<Self> {
        self.fd_step = check_step(fd_step)?;
        Ok(self)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    fn samples(&self, theta: &[f64]) -> Result<Samples> {
        check_theta(theta, self.d)?;
        let n = self.grid.len();
        let p = (self.p)(theta).map_err(|e| evaluation_error(theta, e))?;
        let w = (self.w)(theta).map_err(|e| evaluation_error(theta, e))?;
        if p.len() != n || w.len() != n {
            return Err(Error::Shape(format!(
                "grid has {n} points, got {} densities and {} phases",
                p.len(),
                w.len()
            )));
        }
        if let Some(j) = p.iter().position(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::Domain(format!(
                "density must be positive, got p = {} at x = {}",
                p[j], self.grid[j]
            )));
        }
        if !linalg::all_finite(w.iter().copied()) {
            return Err(Error::Numeric("non-finite phase".into()));
        }
        let mass: f64 = p.iter().zip(&self.weights).map(|(p, w)| p * w).sum();
        if (mass - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Domain(format!(
                "density integrates to {mass} at θ = {theta:?}"
            )));
        }
        Ok(Samples { p, w })
    }

    /// Samples at `θ` and central differences of `ln p` and `W`.
    fn differentials(&self, theta: &[f64]) -> Result<Differentials> {
        let base = self.samples(theta)?;
        let h = self.fd_step;
        let mut dlnp = Vec::with_capacity(self.d);
        let mut dw = Vec::with_capacity(self.d);
        for a in 0..self.d {
            let plus = self.samples(&probe(theta, a, h))?;
            let minus = self.samples(&probe(theta, a, -h))?;
            dlnp.push(
                plus.p
                    .iter()
                    .zip(&minus.p)
                    .map(|(u, v)| (u.ln() - v.ln()) / (2.0 * h))
                    .collect(),
            );
            dw.push(
                plus.w
                    .iter()
                    .zip(&minus.w)
                    .map(|(u, v)| (u - v) / (2.0 * h))
                    .collect(),
            );
        }
        Ok((base, dlnp, dw))
    }

    fn expect_with(&self, p: &[f64], f: impl Fn(usize) -> f64) -> f64 {
        (0..self.grid.len())
            .map(|j| self.weights[j] * p[j] * f(j))
            .sum()
    }

    /// Discretized state `ψ_j = (p_j w_j)^{1/2} e^{iW_j/2}` with trapezoid
    /// weights `w_j`, so that `<ψ|ψ> = ∫ p dx`.
    fn discretized(&self, s: &Samples) -> CVector {
        CVector::from_iterator(
            self.grid.len(),
            (0..self.grid.len())
                .map(|j| C64::from_polar((s.p[j] * self.weights[j]).sqrt(), 0.5 * s.w[j])),
        )
    }
}

/// `E_p(T) = ∫ p T dx` by trapezoid quadrature. `t` returns the components
/// of the tensor at `x`, in any fixed order.
pub fn expectation_integral(
    sw: &SampledWavefunction,
    theta: &[f64],
    t: impl Fn(f64) -> Vec<f64>,
) -> Result<Vec<f64>> {
    let s = sw.samples(theta)?;
    let mut acc: Option<Vec<f64>> = None;
    for (j, &x) in sw.grid.iter().enumerate() {
        let value = t(x);
        if !linalg::all_finite(value.iter().copied()) {
            return Err(Error::Numeric(format!("non-finite integrand at x = {x}")));
        }
        let acc = acc.get_or_insert_with(|| vec![0.0; value.len()]);
        if value.len() != acc.len() {
            return Err(Error::Shape(format!(
                "integrand has {} components at x = {x}, expected {}",
                value.len(),
                acc.len()
            )));
        }
        let wp = sw.weights[j] * s.p[j];
        for (a, v) in acc.iter_mut().zip(value) {
            *a += wp * v;
        }
    }
    Ok(acc.unwrap_or_default())
}

/// `F_ab = E(∂_a ln p ∂_b ln p)`, `Cov(dW)_ab = E(∂_aW ∂_bW) − E(∂_aW) E(∂_bW)`,
/// `G = F + Cov(dW)` and `Ω_ab = E(∂_a ln p ∂_bW − ∂_b ln p ∂_aW)`.
pub fn pullback_metric(sw: &SampledWavefunction, theta: &[f64]) -> Result<MetricReport> {
    let (s, dlnp, dw) = sw.differentials(theta)?;
    let d = sw.d;
    let mean_dw: Vec<f64> = (0..d).map(|a| sw.expect_with(&s.p, |j| dw[a][j])).collect();
    let mut f = RMatrix::zeros(d, d);
    let mut cov_w = RMatrix::zeros(d, d);
    let mut omega = RMatrix::zeros(d, d);
    for a in 0..d {
        for b in a..d {
            let fab = sw.expect_with(&s.p, |j| dlnp[a][j] * dlnp[b][j]);
            let cab = sw.expect_with(&s.p, |j| dw[a][j] * dw[b][j]) - mean_dw[a] * mean_dw[b];
            f[(a, b)] = fab;
            f[(b, a)] = fab;
            cov_w[(a, b)] = cab;
            cov_w[(b, a)] = cab;
            if a != b {
                let oab = sw.expect_with(&s.p, |j| dlnp[a][j] * dw[b][j] - dlnp[b][j] * dw[a][j]);
                omega[(a, b)] = oab;
                omega[(b, a)] = 0.0 - oab;
            }
        }
    }
    Ok(MetricReport {
        g: &f + &cov_w,
        omega,
        f,
        cov_w,
    })
}

/// `max_ab |4K_ab − (G_ab + iΩ_ab)|`, where `K` is the Fubini–Study pull-back
/// of the discretized state evaluated on finite-difference tangents.
pub fn pure_consistency_check(sw: &SampledWavefunction, theta: &[f64]) -> Result<f64> {
    let report = pullback_metric(sw, theta)?;
    let psi = sw.discretized(&sw.samples(theta)?);
    let h = sw.fd_step;
    let tangents = (0..sw.d)
        .map(|a| {
            let plus = sw.discretized(&sw.samples(&probe(theta, a, h))?);
            let minus = sw.discretized(&sw.samples(&probe(theta, a, -h))?);
            Ok(RealTangent::new((plus - minus) / C64::from(2.0 * h)))
        })
        .collect::<Result<Vec<_>>>()?;
    let k = fs_pullback_matrix(&PureState::new(psi)?, &tangents)?;
    let mut dev: f64 = 0.0;
    for a in 0..sw.d {
        for b in 0..sw.d {
            let target = C64::new(report.g[(a, b)], report.omega[(a, b)]);
            dev = dev.max((k[(a, b)] * 4.0 - target).norm());
        }
    }
    Ok(dev)
}

#[cfg(test)]
mod tests {
    use super::families::*;
    use super::*;
    use crate::linalg::{c, max_abs, max_abs_real};
    use crate::qstate::{projector, StateSampler};

    fn sld_residual(rho: &DensityState, drho: &CMatrix, l: &CMatrix) -> f64 {
        let r = rho.matrix();
        max_abs(&(drho - (r * l + l * r) * c(0.5, 0.)))
    }

    #[test]
    fn sld_of_pure_tangent_is_twice_the_tangent() {
        let mut s = StateSampler::new(4);
        for dim in 2..5 {
            let psi = s.pure(dim);
            let rho = projector(&psi);
            // tangent along exp(−itH)
            let h = s.hermitian(dim);
            let drho = (&h * rho.matrix() - rho.matrix() * &h) * c(0., -1.);
            let l = sld(&rho, &drho).unwrap();
            assert!(max_abs(&(&l - &drho * c(2., 0.))) < 1e-12);
            assert!(sld_residual(&rho, &drho, &l) < 1e-12);
        }
    }

    #[test]
    fn sld_examples() {
        let p = 0.3;
        let rho = DensityState::new(CMatrix::from_diagonal(&CVector::from_vec(vec![
            c(p, 0.),
            c(1. - p, 0.),
        ])))
        .unwrap();
        let drho = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1., 0.), c(-1., 0.)]));
        let l = sld(&rho, &drho).unwrap();
        assert!((l[(0, 0)] - c(1. / p, 0.)).norm() < 1e-12);
        assert!((l[(1, 1)] - c(-1. / (1. - p), 0.)).norm() < 1e-12);
        assert!(l[(0, 1)].norm() < 1e-14);

        let half = DensityState::maximally_mixed(vec![2]);
        let sz = CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
        let l = sld(&half, &(&sz * c(0.5, 0.))).unwrap();
        assert!(max_abs(&(l - sz)) < 1e-12);
    }

    #[test]
    fn sld_rejects_bad_tangents() {
        let rho = DensityState::maximally_mixed(vec![2]);
        let skew = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(-1., 0.), c(0., 0.)]);
        assert!(matches!(sld(&rho, &skew), Err(Error::Domain(_))));
        assert!(matches!(
            sld(&rho, &linalg::identity(2)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            sld(&rho, &CMatrix::zeros(3, 3)),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn sld_residual_on_random_mixed_states() {
        let mut s = StateSampler::new(8);
        for i in 0..30 {
            let dim = 2 + i % 3;
            let rho = s.mixed(dim, 1 + i % dim).unwrap();
            let h = s.hermitian(dim);
            let drho = (&h * rho.matrix() - rho.matrix() * &h) * c(0., -1.);
            let l = sld(&rho, &drho).unwrap();
            assert!(linalg::is_hermitian(&l, 1e-10));
            // residual on the support
            let (lambda, v) = linalg::eigh(rho.matrix());
            let res =
                v.adjoint() * (&drho - (rho.matrix() * &l + &l * rho.matrix()) * c(0.5, 0.)) * &v;
            for j in 0..dim {
                for k in 0..dim {
                    if lambda[j] + lambda[k] > SLD_CUTOFF {
                        assert!(res[(j, k)].norm() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn qfi_examples() {
        let i = qfi_metric(&bernoulli(), &[0.3]).unwrap();
        assert!((i[(0, 0)] - (1. / 0.3 + 1. / 0.7)).abs() < 1e-6);
        for t in [0.0, 0.4, 1.3] {
            assert!((qfi_metric(&circle(), &[t]).unwrap()[(0, 0)] - 4.0).abs() < 1e-6);
            assert!((pure_qfi(&circle(), &[t]).unwrap()[(0, 0)] - 4.0).abs() < 1e-6);
        }
        let fixed = constant(DensityState::maximally_mixed(vec![3]), 2);
        assert!(max_abs_real(&qfi_metric(&fixed, &[0.1, 0.2]).unwrap()) < 1e-12);
    }

    #[test]
    fn bloch_round_metric() {
        for polar in [0.4, std::f64::consts::FRAC_PI_2, 2.0] {
            let theta = [polar, 0.7];
            let oracle = RMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, polar.sin().powi(2)]);
            assert!(max_abs_real(&(pure_qfi(&bloch(), &theta).unwrap() - &oracle)) < 1e-6);
            assert!(max_abs_real(&(qfi_metric(&bloch(), &theta).unwrap() - &oracle)) < 1e-6);
        }
    }

    #[test]
    fn pure_qfi_requires_purity() {
        assert!(matches!(
            pure_qfi(&bernoulli(), &[0.3]),
            Err(Error::NotPure(_))
        ));
        let fixed = constant(projector(&StateSampler::new(1).pure(3)), 1);
        assert!(max_abs_real(&pure_qfi(&fixed, &[0.5]).unwrap()) < 1e-12);
    }

    #[test]
    fn qfi_equals_pure_qfi_on_pure_families() {
        let mut s = StateSampler::new(12);
        let psi = s.pure_bipartite(2);
        let orbit = unitary_orbit(psi, s.hermitian(4)).unwrap();
        let cases: [(ParamFamily, Vec<f64>); 3] = [
            (circle(), vec![0.9]),
            (bloch(), vec![1.1, -0.3]),
            (orbit, vec![0.25]),
        ];
        for (fam, theta) in &cases {
            let q = qfi_metric(fam, theta).unwrap();
            let p = pure_qfi(fam, theta).unwrap();
            assert!(max_abs_real(&(q - p)) < 1e-6);
        }
    }

    #[test]
    fn diagonal_family_is_classical() {
        let theta = [0.2, 0.5];
        let q = qfi_metric(&categorical3(), &theta).unwrap();
        let p3 = 1.0 - theta[0] - theta[1];
        let oracle = RMatrix::from_row_slice(
            2,
            2,
            &[
                1. / theta[0] + 1. / p3,
                1. / p3,
                1. / p3,
                1. / theta[1] + 1. / p3,
            ],
        );
        assert!(max_abs_real(&(q - oracle)) < 1e-6);
        let r = density_report(&bernoulli(), &[0.3]).unwrap();
        assert!(max_abs_real(&(&r.g - &r.f)) < 1e-6);
        assert!(max_abs_real(&r.omega) < 1e-12);
    }

    #[test]
    fn bloch_report_splits_metric() {
        let polar = 1.2;
        let r = density_report(&bloch(), &[polar, 0.3]).unwrap();
        assert!((r.f[(0, 0)] - 1.0).abs() < 1e-6);
        assert!(r.f[(1, 1)].abs() < 1e-9);
        assert!((r.cov_w[(1, 1)] - polar.sin().powi(2)).abs() < 1e-6);
        assert!((r.omega[(0, 1)] - polar.sin()).abs() < 1e-6);
        assert!((r.omega[(0, 1)] + r.omega[(1, 0)]).abs() < 1e-12);
    }

    #[test]
    fn evaluation_failures_are_reported() {
        match qfi_metric(&bernoulli(), &[1.0]) {
            Err(Error::FamilyEvaluation { theta, .. }) => assert!(theta[0] > 1.0),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            qfi_metric(&bernoulli(), &[0.1, 0.2]),
            Err(Error::Shape(_))
        ));
        assert!(bernoulli().with_step(0.0).is_err());
    }

    #[test]
    fn expectation_integral_moments() {
        let (mu, sigma) = (0.7, 1.3);
        let sw = gaussian(mu, sigma).unwrap();
        let theta = [mu, sigma];
        let one = expectation_integral(&sw, &theta, |_| vec![1.0]).unwrap();
        assert!((one[0] - 1.0).abs() < 1e-12);
        let m = expectation_integral(&sw, &theta, |x| vec![x, (x - mu).powi(2)]).unwrap();
        assert!((m[0] - mu).abs() < 1e-8);
        assert!((m[1] - sigma * sigma).abs() < 1e-8);
        assert!(matches!(
            expectation_integral(&sw, &theta, |x| vec![if x > mu { f64::NAN } else { x }]),
            Err(Error::Numeric(_))
        ));
    }

    #[test]
    fn gaussian_fisher_metric() {
        let (mu, sigma) = (-0.4, 0.8);
        let r = pullback_metric(&gaussian(mu, sigma).unwrap(), &[mu, sigma]).unwrap();
        let oracle =
            RMatrix::from_row_slice(2, 2, &[1. / (sigma * sigma), 0., 0., 2. / (sigma * sigma)]);
        assert!(max_abs_real(&(&r.f - &oracle)) < 1e-6);
        assert!(max_abs_real(&r.cov_w) < 1e-12);
        assert!(max_abs_real(&r.omega) < 1e-12);
        assert_eq!(r.g, r.f);
    }

    #[test]
    fn shifted_phase_family() {
        let r = pullback_metric(&shifted_phase(0.3).unwrap(), &[0.3, 0.5]).unwrap();
        assert!(
            max_abs_real(&(&r.cov_w - RMatrix::from_row_slice(2, 2, &[0., 0., 0., 1.]))) < 1e-6
        );
        assert!((r.omega[(0, 1)] - 1.0).abs() < 1e-6);
        assert!((r.omega[(1, 0)] + 1.0).abs() < 1e-6);
        assert!(max_abs_real(&(&r.g - (&r.f + &r.cov_w))) < 1e-12);
        assert!(linalg::eigvalsh(&r.f.map(C64::from))[0] > -1e-10);
    }

    #[test]
    fn gaussian_phase_family() {
        let (mu, sigma) = (0.2, 1.5);
        let r = pullback_metric(&gaussian_phase(mu, sigma).unwrap(), &[mu, sigma, 0.4]).unwrap();
        // dW = (0, 0, x): Var(x) = σ², E[∂_μ ln p · x] = 1, E[∂_σ ln p · x] = 0
        assert!((r.cov_w[(2, 2)] - sigma * sigma).abs() < 1e-6);
        assert!((r.omega[(0, 2)] - 1.0).abs() < 1e-6);
        assert!(r.omega[(1, 2)].abs() < 1e-6);
        assert!((r.f[(1, 1)] - 2. / (sigma * sigma)).abs() < 1e-6);
    }

    #[test]
    fn one_parameter_omega_vanishes() {
        let sw = SampledWavefunction::new(
            gaussian_grid(0.0, 1.0, 801),
            1,
            |t| {
                Ok(gaussian_grid(0.0, 1.0, 801)
                    .iter()
                    .map(|x| normal_pdf(*x, t[0], 1.0))
                    .collect())
            },
            |t| {
                Ok(gaussian_grid(0.0, 1.0, 801)
                    .iter()
                    .map(|x| t[0] * x * x)
                    .collect())
            },
        )
        .unwrap();
        let r = pullback_metric(&sw, &[0.1]).unwrap();
        assert_eq!(r.omega[(0, 0)], 0.0);
    }

    #[test]
    fn density_validation() {
        let grid = vec![0.0, 1.0, 2.0];
        let zero = SampledWavefunction::new(
            grid.clone(),
            1,
            |_| Ok(vec![0.0, 1.0, 0.0]),
            |_| Ok(vec![0.0; 3]),
        )
        .unwrap();
        assert!(matches!(
            pullback_metric(&zero, &[0.0]),
            Err(Error::Domain(_))
        ));
        let unnormalized =
            SampledWavefunction::new(grid.clone(), 1, |_| Ok(vec![1.0; 3]), |_| Ok(vec![0.0; 3]))
                .unwrap();
        assert!(matches!(
            pullback_metric(&unnormalized, &[0.0]),
            Err(Error::Domain(_))
        ));
        assert!(
            SampledWavefunction::new(vec![0.0, 0.0], 1, |_| Ok(vec![]), |_| Ok(vec![])).is_err()
        );
    }

    #[test]
    fn consistency_with_fubini_study_pullback() {
        let (mu, sigma) = (0.1, 0.9);
        let dev = pure_consistency_check(&gaussian(mu, sigma).unwrap(), &[mu, sigma]).unwrap();
        assert!(dev <= 1e-5, "{dev}");
        let dev =
            pure_consistency_check(&gaussian_phase(mu, sigma).unwrap(), &[mu, sigma, 0.6]).unwrap();
        assert!(dev <= 1e-5, "{dev}");
        let dev = pure_consistency_check(&shifted_phase(0.0).unwrap(), &[0.0, -1.2]).unwrap();
        assert!(dev <= 1e-5, "{dev}");
        let grid = gaussian_grid(0.0, 1.0, 401);
        let p: Vec<f64> = grid.iter().map(|x| normal_pdf(*x, 0.0, 1.0)).collect();
        let fixed =
            SampledWavefunction::new(grid, 2, move |_| Ok(p.clone()), |_| Ok(vec![0.3; 401]))
                .unwrap();
        assert!(pure_consistency_check(&fixed, &[0.0, 0.0]).unwrap() < 1e-12);
    }

    #[test]
    fn trapezoid_converges_under_grid_doubling() {
        let (mu, sigma) = (0.0, 1.0);
        let error = |points: usize| {
            let sw = gaussian_on(gaussian_grid(mu, sigma, points)).unwrap();
            let f = pullback_metric(&sw, &[mu, sigma]).unwrap().f;
            (f[(0, 0)] - 1.0).abs().max((f[(1, 1)] - 2.0).abs())
        };
        // Below this the central-difference error dominates.
        let floor = 1e-8;
        let errors: Vec<f64> = [17, 33, 65].iter().map(|&n| error(n)).collect();
        for w in errors.windows(2) {
            assert!(w[1] <= w[0] / 4.0 || w[1] < floor, "{errors:?}");
        }
        assert!(errors[0] > errors[2]);
        // dropping every second sample of the default grid
        assert!((error(2001) - error(1001)).abs() < floor);
    }

    #[test]
    fn report_json_keys() {
        let r = density_report(&bernoulli(), &[0.5]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        for key in ["G", "Omega", "F", "CovW"] {
            assert_eq!(v[key].as_array().unwrap().len(), 1);
        }
        assert!((v["G"][0][0].as_f64().unwrap() - 4.0).abs() < 1e-6);
    }
}
