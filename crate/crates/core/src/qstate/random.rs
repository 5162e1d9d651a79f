use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{DensityState, PureState};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64};

/// What [`random_state`] should draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomSpec {
    Pure { dim: usize },
    Mixed { dim: usize, rank: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum RandomState {
    Pure(PureState),
    Mixed(DensityState),
}

/// Deterministic draw of a Haar-random pure state or a rank-constrained
/// Wishart state.
pub fn random_state(seed: u64, spec: RandomSpec) -> Result<RandomState> {
    let mut sampler = StateSampler::new(seed);
    match spec {
        RandomSpec::Pure { dim } => {
            if dim == 0 {
                return Err(Error::InvalidDimension("dim must be >= 1".into()));
            }
            Ok(RandomState::Pure(sampler.pure(dim)))
        }
        RandomSpec::Mixed { dim, rank } => sampler.mixed(dim, rank).map(RandomState::Mixed),
    }
}

/// Seeded source of random states, unitaries and Hermitian matrices.
pub struct StateSampler {
    rng: ChaCha8Rng,
}

impl StateSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    fn complex_normal(&mut self) -> C64 {
        C64::new(self.normal(), self.normal())
    }

    /// Ginibre matrix with i.i.d. standard complex normal entries.
    pub fn ginibre(&mut self, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| self.complex_normal())
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        use rand::Rng;
        self.rng.random_range(lo..hi)
    }

    /// Haar-uniform unit vector.
    pub fn pure(&mut self, dim: usize) -> PureState {
        loop {
            let v = CVector::from_fn(dim, |_, _| self.complex_normal());
            let norm = v.norm();
            if norm > 1e-8 {
                return PureState::new(v / C64::from(norm)).expect("nonzero by construction");
            }
        }
    }

    /// Haar-random pure state on `C^n ⊗ C^n`.
    pub fn pure_bipartite(&mut self, n: usize) -> PureState {
        let v = self.pure(n * n);
        PureState::bipartite(v.amplitudes().clone(), n).expect("dims match")
    }

    /// Normalized `G G†` with `G` a `dim x rank` Ginibre matrix.
    pub fn mixed(&mut self, dim: usize, rank: usize) -> Result<DensityState> {
        self.mixed_with_dims(vec![dim], rank)
    }

    pub fn mixed_bipartite(&mut self, n: usize, rank: usize) -> Result<DensityState> {
        self.mixed_with_dims(vec![n, n], rank)
    }

    fn mixed_with_dims(&mut self, dims: Vec<usize>, rank: usize) -> Result<DensityState> {
        let dim: usize = dims.iter().product();
        if dim == 0 {
            return Err(Error::InvalidDimension("dim must be >= 1".into()));
        }
        if rank == 0 || rank > dim {
            return Err(Error::InvalidRank { rank, dim });
        }
        let g = self.ginibre(dim, rank);
        let w = &g * g.adjoint();
        let tr = linalg::trace(&w).re;
        DensityState::from_rounded(w / C64::from(tr), dims)
    }

    /// Haar-random unitary (QR of a Ginibre matrix with the phase of `R`'s
    /// diagonal absorbed into `Q`).
    pub fn unitary(&mut self, dim: usize) -> CMatrix {
        let qr = self.ginibre(dim, dim).qr();
        let mut q = qr.q();
        let r = qr.r();
        for j in 0..dim {
            let d = r[(j, j)];
            let phase = if d.norm() > 0.0 {
                d / C64::from(d.norm())
            } else {
                C64::from(1.0)
            };
            for i in 0..dim {
                q[(i, j)] *= phase;
            }
        }
        q
    }

    /// `U_A ⊗ U_B` with independent Haar factors.
    pub fn local_unitary(&mut self, n: usize) -> CMatrix {
        let ua = self.unitary(n);
        let ub = self.unitary(n);
        ua.kronecker(&ub)
    }

    /// Hermitian matrix `(G + G†)/2` with Ginibre `G`.
    pub fn hermitian(&mut self, dim: usize) -> CMatrix {
        let g = self.ginibre(dim, dim);
        linalg::hermitian_part(&g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_is_normalized_and_deterministic() {
        let a = random_state(42, RandomSpec::Pure { dim: 4 }).unwrap();
        let b = random_state(42, RandomSpec::Pure { dim: 4 }).unwrap();
        assert_eq!(a, b);
        let RandomState::Pure(psi) = a else {
            panic!("expected pure")
        };
        assert!((psi.amplitudes().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mixed_has_requested_rank() {
        let RandomState::Mixed(rho) =
            random_state(42, RandomSpec::Mixed { dim: 4, rank: 2 }).unwrap()
        else {
            panic!("expected mixed")
        };
        let count = rho.eigenvalues().iter().filter(|&&v| v > 1e-10).count();
        assert_eq!(count, 2);
    }

    #[test]
    fn rank_above_dim_is_rejected() {
        assert!(matches!(
            random_state(1, RandomSpec::Mixed { dim: 2, rank: 3 }),
            Err(Error::InvalidRank { rank: 3, dim: 2 })
        ));
    }

    #[test]
    fn unitary_is_unitary() {
        let mut s = StateSampler::new(5);
        for d in 1..6 {
            let u = s.unitary(d);
            let dev = &u * u.adjoint() - linalg::identity(d);
            assert!(linalg::max_abs(&dev) < 1e-12);
        }
    }
}
