//! Built-in parametrized families.

use std::f64::consts::PI;

use super::{ParamFamily, SampledWavefunction};
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector};
use crate::qstate::{projector, DensityState, PureState};

/// Half-width of the built-in Gaussian grids, in standard deviations.
pub const GRID_HALF_WIDTH: f64 = 8.0;
pub const GRID_POINTS: usize = 2001;

pub fn normal_pdf(x: f64, mean: f64, sigma: f64) -> f64 {
    let z = (x - mean) / sigma;
    (-0.5 * z * z).exp() / (sigma * (2.0 * PI).sqrt())
}

/// `points` equally spaced samples on `mean ± 8σ`.
pub fn gaussian_grid(mean: f64, sigma: f64, points: usize) -> Vec<f64> {
    let lo = mean - GRID_HALF_WIDTH * sigma;
    let step = 2.0 * GRID_HALF_WIDTH * sigma / (points - 1) as f64;
    (0..points).map(|j| lo + step * j as f64).collect()
}

fn normal_on(grid: &[f64], mean: f64, sigma: f64) -> Result<Vec<f64>> {
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::Domain(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    Ok(grid.iter().map(|&x| normal_pdf(x, mean, sigma)).collect())
}

/// `p = N(θ₁, θ₂²)`, `W ≡ 0` on a user grid.
pub fn gaussian_on(grid: Vec<f64>) -> Result<SampledWavefunction> {
    let g = grid.clone();
    let n = grid.len();
    SampledWavefunction::new(
        grid,
        2,
        move |t| normal_on(&g, t[0], t[1]),
        move |_| Ok(vec![0.0; n]),
    )
}

/// `p = N(θ₁, θ₂²)`, `W ≡ 0`, sampled on `mean ± 8σ` with 2001 points.
pub fn gaussian(mean: f64, sigma: f64) -> Result<SampledWavefunction> {
    gaussian_on(gaussian_grid(mean, sigma, GRID_POINTS))
}

/// `p = N(θ₁, θ₂²)`, `W = θ₃ x`.
pub fn gaussian_phase(mean: f64, sigma: f64) -> Result<SampledWavefunction> {
    let grid = gaussian_grid(mean, sigma, GRID_POINTS);
    let (gp, gw) = (grid.clone(), grid.clone());
    SampledWavefunction::new(
        grid,
        3,
        move |t| normal_on(&gp, t[0], t[1]),
        move |t| Ok(gw.iter().map(|x| t[2] * x).collect()),
    )
}

/// `p = N(θ₁, 1)`, `W = θ₂ x`.
pub fn shifted_phase(mean: f64) -> Result<SampledWavefunction> {
    let grid = gaussian_grid(mean, 1.0, GRID_POINTS);
    let (gp, gw) = (grid.clone(), grid.clone());
    SampledWavefunction::new(
        grid,
        2,
        move |t| normal_on(&gp, t[0], 1.0),
        move |t| Ok(gw.iter().map(|x| t[1] * x).collect()),
    )
}

fn diagonal(probs: &[f64]) -> Result<DensityState> {
    if let Some(p) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
    }
    let d = CVector::from_iterator(probs.len(), probs.iter().map(|&p| c(p, 0.0)));
    DensityState::new(CMatrix::from_diagonal(&d))
}

/// `ρ(t) = diag(t, 1 − t)`.
pub fn bernoulli() -> ParamFamily {
    ParamFamily::new(1, |t| diagonal(&[t[0], 1.0 - t[0]]))
}

/// `ρ(θ) = diag(θ₁, θ₂, 1 − θ₁ − θ₂)`.
pub fn categorical3() -> ParamFamily {
    ParamFamily::new(2, |t| diagonal(&[t[0], t[1], 1.0 - t[0] - t[1]]))
}

/// Pure qubit `cos(θ₁/2)|0⟩ + e^{iθ₂} sin(θ₁/2)|1⟩`.
pub fn bloch() -> ParamFamily {
    ParamFamily::new(2, |t| {
        let (s, co) = (0.5 * t[0]).sin_cos();
        let psi = PureState::from_slice(&[c(co, 0.0), c(t[1].cos() * s, t[1].sin() * s)])?;
        Ok(projector(&psi))
    })
}

/// Pure qubit `cos t|0⟩ + sin t|1⟩`.
pub fn circle() -> ParamFamily {
    ParamFamily::new(1, |t| {
        let psi = PureState::from_slice(&[c(t[0].cos(), 0.0), c(t[0].sin(), 0.0)])?;
        Ok(projector(&psi))
    })
}

/// Curve `e^{−itH}|ψ⟩` through `ψ` at `t = 0`.
pub fn unitary_orbit(psi: PureState, generator: CMatrix) -> Result<ParamFamily> {
    linalg::require_hermitian(&generator, 1e-10, "generator")?;
    if generator.nrows() != psi.dim() {
        return Err(Error::Shape(format!(
            "generator is {0}x{0} but the state has dimension {1}",
            generator.nrows(),
            psi.dim()
        )));
    }
    let psi = psi.normalized();
    Ok(ParamFamily::new(1, move |t| {
        let u = linalg::unitary_from_hermitian(&generator, t[0]);
        Ok(projector(&psi.transformed(&u)?))
    }))
}

/// `ρ(θ) = ρ₀` for every `θ ∈ ℝ^d`.
pub fn constant(rho: DensityState, d: usize) -> ParamFamily {
    ParamFamily::new(d, move |_| Ok(rho.clone()))
}
