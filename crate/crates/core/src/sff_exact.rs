//! Disorder-averaged spectral form factor from exact Floquet eigenphases.

use std::f64::consts::TAU;

use faer::{c64, Mat};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::enumerate_sector;
use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{
    build_driving_matrix, build_phase_vector, draw_disorder, propagator, ModelParams, PhaseVector,
    UnitaryMatrix,
};

/// Largest sector handled by the dense non-symmetric eigensolver.
pub const EXACT_DIM_BUDGET: usize = 4096;

/// Tolerated deviation of a Floquet eigenvalue modulus from one.
pub const MODULUS_TOLERANCE: f64 = 1e-8;

/// Eigenphases of one Floquet operator, each in `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenphaseSet {
    pub phases: Vec<f64>,
}

impl EigenphaseSet {
    /// `|Σ_n e^{iφ_n t}|²` for every `t` of the grid.
    pub fn form_factor(&self, t_grid: &[u64]) -> Vec<f64> {
        t_grid
            .iter()
            .map(|&t| {
                let t = t as f64;
                let (mut re, mut im) = (0.0, 0.0);
                for &p in &self.phases {
                    let (s, c) = (p * t).sin_cos();
                    re += c;
                    im += s;
                }
                re * re + im * im
            })
            .collect()
    }
}

/// `K(t)` on a grid of integer times, with ensemble metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSeries {
    pub t_grid: Vec<u64>,
    pub k: Vec<f64>,
    /// Hilbert-space dimension, i.e. the Heisenberg time.
    pub dim: usize,
    pub realizations: usize,
    pub label: String,
    /// Standard error of the ensemble mean, when more than one realization.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stderr: Option<Vec<f64>>,
}

impl SpectralSeries {
    pub fn k_over_2t(&self) -> Vec<f64> {
        self.t_grid.iter().zip(&self.k).map(|(&t, &k)| k / (2.0 * t as f64)).collect()
    }

    pub fn len(&self) -> usize {
        self.t_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_grid.is_empty()
    }
}

/// Eigenphases of `U = V diag(e^{-iθ})`.
pub fn floquet_eigenphases(v: &UnitaryMatrix, theta: &PhaseVector) -> Result<EigenphaseSet> {
    let n = v.dim();
    if theta.theta.len() != n {
        return Err(Error::InvalidParams(format!(
            "phase vector of length {} for a propagator of dimension {n}",
            theta.theta.len()
        )));
    }
    let kick: Vec<c64> = theta.theta.iter().map(|&t| c64::cis(-t)).collect();
    let u = Mat::<c64>::from_fn(n, n, |i, j| v.matrix[(i, j)] * kick[j]);
    let values = linalg::general_eigenvalues(&u)?;
    let mut phases = Vec::with_capacity(n);
    for z in values {
        let modulus = z.norm();
        if (modulus - 1.0).abs() > MODULUS_TOLERANCE || !modulus.is_finite() {
            return Err(Error::ModulusDrift { modulus, tolerance: MODULUS_TOLERANCE });
        }
        phases.push(z.arg().rem_euclid(TAU));
    }
    Ok(EigenphaseSet { phases })
}

/// `K(t) = ⟨|Σ_n e^{iφ_n t}|²⟩` over realizations `0..realizations`.
///
/// Realizations run in parallel; their contributions are added in index
/// order, so the result does not depend on the thread count.
pub fn compute_exact_sff(
    params: &ModelParams,
    t_grid: &[u64],
    realizations: usize,
) -> Result<SpectralSeries> {
    if realizations == 0 {
        return Err(Error::InvalidParams("at least one realization is required".into()));
    }
    if t_grid.contains(&0) {
        return Err(Error::InvalidParams("time grid must start at t = 1".into()));
    }
    params.validate()?;
    let basis = enumerate_sector(&params.sector)?;
    if basis.dim() > EXACT_DIM_BUDGET {
        return Err(Error::Budget(format!(
            "exact form factor needs dense diagonalisation of dimension {} (budget {EXACT_DIM_BUDGET})",
            basis.dim()
        )));
    }
    let v = propagator(&build_driving_matrix(params, &basis)?)?;

    let per_realization: Vec<Vec<f64>> = (0..realizations as u64)
        .into_par_iter()
        .map(|r| {
            let disorder = draw_disorder(params, r);
            let theta = build_phase_vector(params, &basis, &disorder)?;
            Ok(floquet_eigenphases(&v, &theta)?.form_factor(t_grid))
        })
        .collect::<Result<_>>()?;

    let r = realizations as f64;
    let mut mean = vec![0.0; t_grid.len()];
    for k in &per_realization {
        for (m, x) in mean.iter_mut().zip(k) {
            *m += x;
        }
    }
    mean.iter_mut().for_each(|m| *m /= r);

    let stderr = (realizations > 1).then(|| {
        let mut var = vec![0.0; t_grid.len()];
        for k in &per_realization {
            for ((s, x), m) in var.iter_mut().zip(k).zip(&mean) {
                *s += (x - m) * (x - m);
            }
        }
        var.iter().map(|s| (s / (r - 1.0) / r).sqrt()).collect()
    });

    Ok(SpectralSeries {
        t_grid: t_grid.to_vec(),
        k: mean,
        dim: basis.dim(),
        realizations,
        label: "exact".into(),
        stderr,
    })
}

/// Leading and second-order COE form factor `2t - 2t²/dim`.
pub fn coe_reference(t: f64, dim: usize) -> f64 {
    2.0 * t - 2.0 * t * t / dim as f64
}

pub fn coe_first_order(t: f64) -> f64 {
    2.0 * t
}

/// Every `t ≤ 100`, then about forty points per decade up to
/// `min(4 dim, 10⁴)`.
pub fn default_time_grid(dim: usize) -> Vec<u64> {
    let t_max = (4 * dim as u64).clamp(1, 10_000);
    let mut grid: Vec<u64> = (1..=t_max.min(100)).collect();
    if t_max > 100 {
        let per_decade = 40.0;
        let steps = ((t_max as f64 / 100.0).log10() * per_decade).ceil() as u32;
        for s in 1..=steps {
            let t = (100.0 * 10f64.powf(s as f64 / per_decade)).round() as u64;
            let t = t.min(t_max);
            if *grid.last().unwrap() < t {
                grid.push(t);
            }
        }
        if *grid.last().unwrap() < t_max {
            grid.push(t_max);
        }
    }
    grid
}
