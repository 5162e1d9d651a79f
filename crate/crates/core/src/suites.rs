//! Seeded verification suites, one per acceptance criterion.
//!
//! Every suite draws its random inputs from a [`StateSampler`] seeded with
//! [`SuiteConfig::seed`], so a run is reproducible. `trials` sets the base
//! sample size; suites that need more or fewer samples scale it.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use crate::entangle::{
    c_norm_distance, concurrence, cross_block, family_state, maximality_witness, spin_flip,
    FamilyPoint, GridSpec,
};
use crate::error::{Error, Result};
use crate::fisher::families::{
    bernoulli, bloch, categorical3, circle, gaussian, shifted_phase, unitary_orbit,
};
use crate::fisher::{pullback_metric, pure_qfi, qfi_metric};
use crate::geomqm::{bracket, bracket_coordinates, rayleigh_gradient, BracketKind};
use crate::grouppullback::projective_pullback_tensor;
use crate::iovt::{f2_candidate, iovt, purity_scalar};
use crate::linalg::{self, braket, c, max_abs, max_abs_real, CMatrix, CVector, RMatrix, C64};
use crate::qstate::{
    gellmann_basis, hs_norm, local_basis, partial_trace, projector, DensityState, PureState, Side,
    StateSampler,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    NormTheorem,
    MaxEntanglement,
    Separability,
    Purity,
    GroupPullback,
    Brackets,
    Concurrence,
    Grid,
    Fisher,
    Consistency,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::NormTheorem,
        Suite::MaxEntanglement,
        Suite::Separability,
        Suite::Purity,
        Suite::GroupPullback,
        Suite::Brackets,
        Suite::Concurrence,
        Suite::Grid,
        Suite::Fisher,
        Suite::Consistency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::NormTheorem => "norm-theorem",
            Suite::MaxEntanglement => "max-entanglement",
            Suite::Separability => "separability",
            Suite::Purity => "purity",
            Suite::GroupPullback => "group-pullback",
            Suite::Brackets => "brackets",
            Suite::Concurrence => "concurrence",
            Suite::Grid => "grid",
            Suite::Fisher => "fisher",
            Suite::Consistency => "consistency",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            trials: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub checks: usize,
    pub detail: String,
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} {} ({} checks): {}",
            self.suite, self.checks, self.detail
        )
    }
}

/// Counts checks and records failures.
#[derive(Default)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
    worst: f64,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    /// `|value| ≤ tol`, tracking the largest deviation seen.
    fn small(&mut self, value: f64, tol: f64, what: impl FnOnce() -> String) {
        self.worst = self.worst.max(value.abs());
        self.check(value.abs() <= tol, || {
            format!("{}: {value:e} > {tol:e}", what())
        });
    }

    fn close(&mut self, got: f64, want: f64, tol: f64, what: impl FnOnce() -> String) {
        self.small(got - want, tol, || {
            format!("{} (got {got}, want {want})", what())
        });
    }
}

pub fn run_suite(suite: Suite, cfg: SuiteConfig) -> SuiteReport {
    let mut tally = Tally::default();
    let mut s = StateSampler::new(cfg.seed);
    let n = cfg.trials.max(1);
    let outcome = match suite {
        Suite::NormTheorem => norm_theorem(&mut tally, &mut s, n),
        Suite::MaxEntanglement => max_entanglement(&mut tally, &mut s, n),
        Suite::Separability => separability(&mut tally, &mut s, n),
        Suite::Purity => purity(&mut tally, &mut s, n),
        Suite::GroupPullback => group_pullback(&mut tally, &mut s, n.div_ceil(10)),
        Suite::Brackets => brackets(&mut tally, &mut s, 2 * n, n.div_ceil(2)),
        Suite::Concurrence => concurrence_suite(&mut tally, &mut s, n),
        Suite::Grid => grid(&mut tally),
        Suite::Fisher => fisher(&mut tally),
        Suite::Consistency => consistency(&mut tally, &mut s, n, n.div_ceil(10)),
    };
    let detail = match (&outcome, tally.failures.first()) {
        (Err(e), _) => format!("error: {e}"),
        (Ok(()), Some(first)) => format!(
            "{} of {} checks failed; first: {first}",
            tally.failures.len(),
            tally.checks
        ),
        (Ok(()), None) => format!("max deviation {:.3e}", tally.worst),
    };
    SuiteReport {
        suite,
        passed: outcome.is_ok() && tally.failures.is_empty() && tally.checks > 0,
        checks: tally.checks,
        detail,
    }
}

pub fn run_all(cfg: SuiteConfig) -> Vec<SuiteReport> {
    Suite::ALL
        .into_iter()
        .map(|suite| run_suite(suite, cfg))
        .collect()
}

fn ket(amps: &[(usize, f64)], n: usize) -> Result<PureState> {
    let mut v = CVector::zeros(n * n);
    for &(i, a) in amps {
        v[i] = c(a, 0.0);
    }
    PureState::bipartite(v, n)
}

/// `Σ_k |kk>/√n`.
fn maximally_entangled(n: usize) -> Result<PureState> {
    let a = 1.0 / (n as f64).sqrt();
    ket(&(0..n).map(|k| (k * n + k, a)).collect::<Vec<_>>(), n)
}

fn random_product(s: &mut StateSampler, n: usize) -> Result<PureState> {
    let a = s.pure(n);
    let b = s.pure(n);
    let v = a.amplitudes().kronecker(b.amplitudes());
    PureState::bipartite(v, n)
}

fn norm_theorem(t: &mut Tally, s: &mut StateSampler, trials: usize) -> Result<()> {
    for n in [2, 3] {
        for k in 0..trials {
            let d = c_norm_distance(&s.pure_bipartite(n))?;
            t.small(d.lhs - d.rhs, 1e-10, || format!("n = {n}, state {k}"));
        }
    }
    let bell = c_norm_distance(&maximally_entangled(2)?)?;
    t.close(bell.lhs, 3f64.sqrt() / 2.0, 1e-12, || "Bell lhs".into());
    t.close(bell.rhs, 3f64.sqrt() / 2.0, 1e-12, || "Bell rhs".into());
    Ok(())
}

fn max_entanglement(t: &mut Tally, s: &mut StateSampler, trials: usize) -> Result<()> {
    let tol = 1e-10;
    let mut agree = |psi: &PureState, expect: Option<bool>, what: String| -> Result<()> {
        let w = maximality_witness(psi)?;
        let by_symplectic = w.symplectic_sup <= tol;
        let by_reduced = w.reduced_distance <= tol;
        t.check(by_symplectic == by_reduced, || {
            format!(
                "{what}: symplectic {:e} vs reduced {:e}",
                w.symplectic_sup, w.reduced_distance
            )
        });
        if let Some(e) = expect {
            t.check(by_symplectic == e, || {
                format!("{what}: expected maximal = {e}")
            });
        }
        Ok(())
    };
    for n in [2, 3] {
        agree(
            &maximally_entangled(n)?,
            Some(true),
            format!("maximal n = {n}"),
        )?;
        for k in 0..trials {
            agree(
                &s.pure_bipartite(n),
                None,
                format!("random n = {n}, state {k}"),
            )?;
        }
        for k in 0..trials.div_ceil(10) {
            let lu = s.local_unitary(n);
            agree(
                &maximally_entangled(n)?.transformed(&lu)?,
                Some(true),
                format!("rotated maximal n = {n}, {k}"),
            )?;
            agree(
                &random_product(s, n)?,
                Some(false),
                format!("product n = {n}, {k}"),
            )?;
        }
    }
    Ok(())
}

fn separability(t: &mut Tally, s: &mut StateSampler, trials: usize) -> Result<()> {
    for n in [2, 3] {
        let basis = local_basis(n)?;
        let single = gellmann_basis(n)?;
        for k in 0..trials {
            let psi = random_product(s, n)?;
            let rho = projector(&psi);
            let blocks = projective_pullback_tensor(&rho, &basis)?.blocks()?;
            t.small(max_abs(&blocks.c_block), 1e-12, || {
                format!("C̃ of product n = {n}, {k}")
            });
            // block split: each diagonal block is the reduced state's tensor
            let ra = partial_trace(&rho, Side::A)?;
            let rb = partial_trace(&rho, Side::B)?;
            let ta = projective_pullback_tensor(&ra, &single)?;
            let tb = projective_pullback_tensor(&rb, &single)?;
            t.small(
                max_abs(&(&blocks.a_block - ta.coefficients())),
                1e-12,
                || format!("A block of product n = {n}, {k}"),
            );
            t.small(
                max_abs(&(&blocks.b_block - tb.coefficients())),
                1e-12,
                || format!("B block of product n = {n}, {k}"),
            );
        }
    }
    let mut entangled = 0;
    for k in 0..trials {
        let rho = s.mixed_bipartite(2, 1 + k % 2)?;
        let conc = concurrence(&rho)?;
        if conc > 0.05 {
            entangled += 1;
            let norm = hs_norm(&cross_block(&rho)?);
            t.check(norm > 0.01, || {
                format!("state {k}: concurrence {conc} but ‖C̃‖ = {norm}")
            });
        }
    }
    t.check(entangled > 0, || "no entangled states in the sample".into());
    Ok(())
}

fn purity(t: &mut Tally, s: &mut StateSampler, trials: usize) -> Result<()> {
    for k in 0..trials {
        let rho = s.mixed_bipartite(2, 1 + k % 4)?;
        let tr2 = linalg::trace(&(rho.matrix() * rho.matrix())).re;
        let trf = linalg::trace(&(rho.matrix() * spin_flip(&rho)?.matrix())).re;
        t.close(purity_scalar(&rho, 0)?, tr2, 1e-10, || {
            format!("Tr ρ², state {k}")
        });
        t.close(purity_scalar(&rho, 1)?, trf, 1e-10, || {
            format!("Tr ρρ̃, state {k}")
        });
    }
    let mm = DensityState::maximally_mixed(vec![2, 2]);
    let zz = projector(&ket(&[(0, 1.0)], 2)?);
    let bell = projector(&maximally_entangled(2)?);
    t.close(purity_scalar(&mm, 0)?, 0.25, 1e-12, || "I/4".into());
    t.close(purity_scalar(&zz, 0)?, 1.0, 1e-12, || "|00>, s = 0".into());
    t.close(purity_scalar(&zz, 1)?, 0.0, 1e-12, || "|00>, s = 1".into());
    t.close(purity_scalar(&bell, 0)?, 1.0, 1e-12, || {
        "Bell, s = 0".into()
    });
    t.close(purity_scalar(&bell, 1)?, 1.0, 1e-12, || {
        "Bell, s = 1".into()
    });
    Ok(())
}

/// Hilbert-space tangents `d/dt e^{−itR_j}|ψ>` at `t = 0` by central
/// differences.
fn orbit_tangents(psi: &PureState, gens: &[CMatrix], h: f64) -> Vec<CVector> {
    gens.iter()
        .map(|g| {
            let plus = linalg::unitary_from_hermitian(g, h) * psi.amplitudes();
            let minus = linalg::unitary_from_hermitian(g, -h) * psi.amplitudes();
            (plus - minus) / C64::from(2.0 * h)
        })
        .collect()
}

fn group_pullback(t: &mut Tally, s: &mut StateSampler, trials: usize) -> Result<()> {
    let basis = local_basis(2)?;
    for k in 0..trials {
        let psi = s.pure_bipartite(2);
        let group_side = crate::grouppullback::pullback_tensor(&projector(&psi), &basis)?;
        let tangents = orbit_tangents(&psi, basis.generators(), 1e-5);
        let m = tangents.len();
        let hilbert_side = CMatrix::from_fn(m, m, |a, b| braket(&tangents[a], &tangents[b]));
        t.small(
            max_abs(&(hilbert_side - group_side.coefficients())),
            1e-6,
            || format!("state {k}"),
        );
    }
    Ok(())
}

fn brackets(t: &mut Tally, s: &mut StateSampler, triples: usize, matrices: usize) -> Result<()> {
    for k in 0..triples {
        let dim = 2 + k % 4;
        let a = s.hermitian(dim);
        let b = s.hermitian(dim);
        let psi = s.pure(dim);
        for kind in [
            BracketKind::Symmetric,
            BracketKind::Poisson,
            BracketKind::Star,
        ] {
            let op = bracket(&a, &b, &psi, kind)?;
            let coord = bracket_coordinates(&a, &b, &psi, kind)?;
            t.small((op - coord).norm(), 1e-9, || {
                format!("triple {k}, {kind:?}")
            });
        }
    }
    for k in 0..matrices {
        let dim = 2 + k % 4;
        let a = s.hermitian(dim);
        let (_, vectors) = linalg::eigh(&a);
        for col in 0..dim {
            let v = PureState::new(vectors.column(col).into_owned())?;
            let grad = rayleigh_gradient(&a, &v)?;
            let norm = grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
            t.small(norm, 1e-10, || format!("matrix {k}, eigenvector {col}"));
        }
        let generic = s.pure(dim);
        let norm = rayleigh_gradient(&a, &generic)?
            .iter()
            .fold(0.0f64, |m, g| m.max(g.abs()));
        t.check(norm > 1e-6, || {
            format!("matrix {k}: gradient {norm:e} at a generic state")
        });
    }
    Ok(())
}

fn concurrence_suite(t: &mut Tally, s: &mut StateSampler, trials: usize) -> Result<()> {
    for x in [0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0] {
        let rho = family_state(FamilyPoint::new(x, FRAC_PI_4)?);
        let want = ((3.0 * x - 1.0) / 2.0).max(0.0);
        t.close(concurrence(&rho)?, want, 1e-10, || {
            format!("Werner x = {x}")
        });
    }
    t.close(
        concurrence(&projector(&maximally_entangled(2)?))?,
        1.0,
        1e-10,
        || "Bell".into(),
    );
    for k in 0..trials.div_ceil(10) {
        let p = random_product(s, 2)?;
        t.small(concurrence(&projector(&p))?, 1e-10, || {
            format!("product {k}")
        });
    }
    for k in 0..trials {
        let rho = s.mixed_bipartite(2, 1 + k % 4)?;
        let rotated = rho.conjugated(&s.local_unitary(2))?;
        t.small(concurrence(&rho)? - concurrence(&rotated)?, 1e-9, || {
            format!("local unitary, state {k}")
        });
    }
    Ok(())
}

fn grid(t: &mut Tally) -> Result<()> {
    let spec = GridSpec::new(51, 51)?;
    let points = spec.evaluate()?;
    t.check(points.len() == 51 * 51, || {
        format!("{} grid points", points.len())
    });
    let all_finite = points
        .iter()
        .all(|p| p.f2.is_finite() && p.concurrence.is_finite());
    t.check(all_finite, || "non-finite grid values".into());
    let at = |i: usize, j: usize| points[i * 51 + j];
    t.close(at(0, 0).f2, 6.0, 1e-10, || "f2 at I/4".into());
    t.close(at(50, 25).f2, 12.0, 1e-10, || "f2 at Bell".into());
    t.close(at(50, 50).f2, 8.0, 1e-10, || "f2 at |00>".into());
    t.close(at(50, 25).concurrence, 1.0, 1e-10, || {
        "concurrence at Bell".into()
    });
    for i in 0..51 {
        for j in [0, 50] {
            let p = at(i, j);
            t.small(p.concurrence, 1e-12, || {
                format!("concurrence at x = {}, α₀ = {}", p.x, p.alpha0)
            });
        }
        if i > 0 {
            let step = at(i, 25).concurrence - at(i - 1, 25).concurrence;
            t.check(step >= -1e-12, || {
                format!("concurrence decreases at x = {}: {step:e}", at(i, 25).x)
            });
        }
    }
    // the grid endpoints reproduce the named states exactly
    t.close(
        f2_candidate(&family_state(FamilyPoint::new(1.0, FRAC_PI_2)?))?,
        8.0,
        1e-10,
        || "f2 direct".into(),
    );
    Ok(())
}

fn fisher(t: &mut Tally) -> Result<()> {
    for (mu, sigma) in [(0.0, 1.0), (-0.5, 0.7), (1.3, 2.2)] {
        let r = pullback_metric(&gaussian(mu, sigma)?, &[mu, sigma])?;
        let oracle = RMatrix::from_row_slice(
            2,
            2,
            &[1.0 / (sigma * sigma), 0.0, 0.0, 2.0 / (sigma * sigma)],
        );
        t.small(max_abs_real(&(&r.f - oracle)), 1e-6, || {
            format!("Gaussian F at σ = {sigma}")
        });
        t.small(max_abs_real(&r.cov_w), 1e-12, || {
            format!("Gaussian Cov(dW) at σ = {sigma}")
        });
        t.small(max_abs_real(&r.omega), 1e-12, || {
            format!("Gaussian Ω at σ = {sigma}")
        });
    }
    let r = pullback_metric(&shifted_phase(0.4)?, &[0.4, 0.9])?;
    t.close(r.cov_w[(1, 1)], 1.0, 1e-6, || {
        "phase family Cov(dW)₂₂".into()
    });
    t.small(r.cov_w[(0, 0)], 1e-6, || "phase family Cov(dW)₁₁".into());
    t.close(r.omega[(0, 1)], 1.0, 1e-6, || "phase family Ω₁₂".into());

    let mut s = StateSampler::new(0);
    let orbit = unitary_orbit(s.pure_bipartite(2), s.hermitian(4))?;
    let pure = [
        (circle(), vec![0.7]),
        (bloch(), vec![1.0, 0.4]),
        (orbit, vec![0.3]),
    ];
    for (k, (fam, theta)) in pure.iter().enumerate() {
        let diff = qfi_metric(fam, theta)? - pure_qfi(fam, theta)?;
        t.small(max_abs_real(&diff), 1e-6, || format!("pure family {k}"));
    }
    for p in [0.1, 0.3, 0.5, 0.85] {
        let i = qfi_metric(&bernoulli(), &[p])?;
        t.close(i[(0, 0)], 1.0 / p + 1.0 / (1.0 - p), 1e-6, || {
            format!("Bernoulli p = {p}")
        });
    }
    let i = qfi_metric(&categorical3(), &[0.25, 0.35])?;
    let p3: f64 = 0.4;
    t.close(i[(0, 1)], 1.0 / p3, 1e-6, || {
        "categorical off-diagonal".into()
    });
    Ok(())
}

fn consistency(t: &mut Tally, s: &mut StateSampler, states: usize, curves: usize) -> Result<()> {
    let basis = local_basis(2)?;
    for k in 0..states {
        let rho = projector(&s.pure_bipartite(2));
        let tensor = iovt(&rho, &basis, 2, true)?.as_matrix().expect("order 2");
        let projective = projective_pullback_tensor(&rho, &basis)?;
        t.small(
            max_abs(&(tensor - projective.coefficients())),
            1e-12,
            || format!("state {k}"),
        );
    }
    for k in 0..curves {
        let psi = s.pure_bipartite(2);
        let projective = projective_pullback_tensor(&projector(&psi), &basis)?;
        for (j, g) in basis.generators().iter().enumerate() {
            let fam = unitary_orbit(psi.clone(), g.clone())?;
            let qfi = qfi_metric(&fam, &[0.0])?[(0, 0)];
            let want = 4.0 * projective.coefficients()[(j, j)].re;
            t.close(qfi, want, 1e-6, || format!("curve {k}, generator {j}"));
        }
    }
    Ok(())
}
