use crate::error::{Error, Result};
use crate::linalg::{self, c, hermitian_defect, identity, CMatrix, C64};

const BASIS_TOL: f64 = 1e-12;

/// Which tensor factor a generator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorLabel {
    /// Single-system generator.
    Whole,
    /// `g ⊗ 1`.
    A,
    /// `1 ⊗ g`.
    B,
}

/// Ordered list of Hermitian generators `R(X_j)`; the position in the list is
/// the index `j` of the dual coframe `θ^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorBasis {
    generators: Vec<CMatrix>,
    labels: Vec<FactorLabel>,
    factor_dim: usize,
}

impl GeneratorBasis {
    /// Custom single-factor basis. Generators must be Hermitian, of a common
    /// shape, and pairwise trace-orthogonal.
    pub fn new(generators: Vec<CMatrix>) -> Result<Self> {
        let n = generators
            .first()
            .map(|g| g.nrows())
            .ok_or_else(|| Error::InvalidDimension("empty generator list".into()))?;
        let labels = vec![FactorLabel::Whole; generators.len()];
        let basis = Self {
            generators,
            labels,
            factor_dim: n,
        };
        basis.validate(None)?;
        Ok(basis)
    }

    fn validate(&self, norm: Option<f64>) -> Result<()> {
        let n = self.dim();
        for (j, g) in self.generators.iter().enumerate() {
            if g.shape() != (n, n) {
                return Err(Error::Shape(format!(
                    "generator {j} has shape {:?}, expected {n}x{n}",
                    g.shape()
                )));
            }
            if hermitian_defect(g) > BASIS_TOL {
                return Err(Error::Domain(format!("generator {j} is not Hermitian")));
            }
        }
        for j in 0..self.len() {
            for k in 0..self.len() {
                let ip = linalg::trace_of_product(&self.generators[j], &self.generators[k]);
                let expected = match (j == k, norm) {
                    (true, Some(v)) => v,
                    (true, None) => ip.re,
                    (false, _) => 0.0,
                };
                if (ip - C64::from(expected)).norm() > BASIS_TOL * expected.max(1.0) {
                    return Err(Error::Domain(format!(
                        "generators {j},{k} are not trace-orthogonal (Tr = {ip})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn labels(&self) -> &[FactorLabel] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Dimension of the space the generators act on.
    pub fn dim(&self) -> usize {
        self.generators[0].nrows()
    }

    /// Dimension of a single factor (equal to [`Self::dim`] for single-factor bases).
    pub fn factor_dim(&self) -> usize {
        self.factor_dim
    }

    pub fn is_bipartite(&self) -> bool {
        self.labels.iter().any(|l| *l != FactorLabel::Whole)
    }

    pub fn indices_of(&self, label: FactorLabel) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| self.labels[j] == label)
            .collect()
    }

    /// Same generators multiplied by `factor`; labels are kept.
    pub fn rescaled(&self, factor: f64) -> Self {
        Self {
            generators: self
                .generators
                .iter()
                .map(|g| g * C64::from(factor))
                .collect(),
            labels: self.labels.clone(),
            factor_dim: self.factor_dim,
        }
    }
}

fn unit(n: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(i, j)] = c(1., 0.);
    m
}

/// Traceless generalized Gell-Mann matrices with `Tr(g_j g_k) = 2 δ_jk`.
///
/// Ordering follows the usual λ-numbering: for each column `k = 1..n-1`,
/// the symmetric and antisymmetric pairs `(j, k)` for `j < k`, then the
/// `k`-th diagonal generator. For `n = 2` this yields σx, σy, σz.
pub fn gellmann_basis(n: usize) -> Result<GeneratorBasis> {
    if n < 2 {
        return Err(Error::InvalidDimension(format!(
            "su(n) basis needs n >= 2, got {n}"
        )));
    }
    let mut generators = Vec::with_capacity(n * n - 1);
    for k in 1..n {
        for j in 0..k {
            generators.push(unit(n, j, k) + unit(n, k, j));
            generators.push(unit(n, j, k) * c(0., -1.) + unit(n, k, j) * c(0., 1.));
        }
        let scale = (2.0 / (k * (k + 1)) as f64).sqrt();
        let mut d = CMatrix::zeros(n, n);
        for m in 0..k {
            d[(m, m)] = c(scale, 0.);
        }
        d[(k, k)] = c(-(k as f64) * scale, 0.);
        generators.push(d);
    }
    let basis = GeneratorBasis {
        labels: vec![FactorLabel::Whole; generators.len()],
        generators,
        factor_dim: n,
    };
    basis.validate(Some(2.0))?;
    Ok(basis)
}

/// Local generators on `C^n ⊗ C^n`: `g_j ⊗ 1` for every Gell-Mann `g_j`,
/// followed by `1 ⊗ g_j`. Generators are not rescaled, so
/// `Tr(G_j G_k) = 2n δ_jk` on the product space.
pub fn local_basis(n: usize) -> Result<GeneratorBasis> {
    let single = gellmann_basis(n)?;
    let id = identity(n);
    let mut generators = Vec::with_capacity(2 * single.len());
    let mut labels = Vec::with_capacity(2 * single.len());
    for g in single.generators() {
        generators.push(g.kronecker(&id));
        labels.push(FactorLabel::A);
    }
    for g in single.generators() {
        generators.push(id.kronecker(g));
        labels.push(FactorLabel::B);
    }
    let basis = GeneratorBasis {
        generators,
        labels,
        factor_dim: n,
    };
    basis.validate(Some(2.0 * n as f64))?;
    Ok(basis)
}
