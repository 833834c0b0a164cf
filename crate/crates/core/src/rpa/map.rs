use std::collections::HashMap;

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::basis::{Basis, FockState, SectorSpec};
use crate::error::{Error, Result};
use crate::model::{
    build_driving_matrix, build_sparse_driving, driving_action, merge_duplicates, propagator,
    ModelParams, UnitaryMatrix,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MapKind {
    /// `M_ab = |V_ab|²`.
    Full,
    /// Second-order expansion `I + H∘H - diag(H²)`.
    Trotter,
}

/// Real symmetric matrix whose spectrum controls the RPA form factor.
#[derive(Debug, Clone)]
pub struct StochasticMap {
    pub matrix: Mat<f64>,
    pub kind: MapKind,
    pub sector: Option<SectorSpec>,
}

impl StochasticMap {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `max_a |Σ_b M_ab - 1|`.
    pub fn row_sum_defect(&self) -> f64 {
        let m = &self.matrix;
        (0..m.nrows())
            .map(|i| ((0..m.ncols()).map(|j| m[(i, j)]).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn column_sum_defect(&self) -> f64 {
        let m = &self.matrix;
        (0..m.ncols())
            .map(|j| ((0..m.nrows()).map(|i| m[(i, j)]).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `max |M_ab - M_ba|`.
    pub fn symmetry_defect(&self) -> f64 {
        let m = &self.matrix;
        let mut worst = 0.0f64;
        for j in 0..m.ncols() {
            for i in 0..j {
                worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn min_entry(&self) -> f64 {
        let m = &self.matrix;
        let mut low = f64::INFINITY;
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                low = low.min(m[(i, j)]);
            }
        }
        low
    }
}

/// Element-wise squared modulus of the propagator.
pub fn stochastic_map_from_unitary(v: &UnitaryMatrix) -> StochasticMap {
    let n = v.dim();
    let matrix = Mat::<f64>::from_fn(n, n, |i, j| v.matrix[(i, j)].norm_sqr());
    StochasticMap { matrix, kind: MapKind::Full, sector: None }
}

/// `|V|²` for the model on `basis`.
pub fn full_map(params: &ModelParams, basis: &Basis) -> Result<StochasticMap> {
    let v = propagator(&build_driving_matrix(params, basis)?)?;
    let mut m = stochastic_map_from_unitary(&v);
    m.sector = Some(basis.spec().clone());
    Ok(m)
}

pub fn build_map(params: &ModelParams, basis: &Basis, kind: MapKind) -> Result<StochasticMap> {
    match kind {
        MapKind::Full => full_map(params, basis),
        MapKind::Trotter => trotter_generating_map(params, basis),
    }
}

/// `M = I + H∘H - diag(H²)`.
///
/// On a qubit-pattern sector the map is the block of the Rabi-boson
/// generator at fixed `σ^x_j = ±1`; each qubit flip then contributes the
/// sign of its `σ^x` eigenvalue.
pub fn trotter_generating_map(params: &ModelParams, basis: &Basis) -> Result<StochasticMap> {
    if basis.spec() != &params.sector {
        return Err(Error::BasisMismatch);
    }
    if params.sector.is_pattern_sector() {
        return pattern_trotter_map(params, basis);
    }
    let h = build_sparse_driving(params, basis)?;
    let n = h.dim();
    let mut m = Mat::<f64>::zeros(n, n);
    for i in 0..n {
        let mut diag = 1.0;
        for &(j, v) in h.row(i) {
            let w = v * v;
            if j == i {
                m[(i, i)] += w;
            } else {
                m[(i, j)] = w;
            }
            diag -= w;
        }
        m[(i, i)] += diag;
    }
    Ok(StochasticMap { matrix: m, kind: MapKind::Trotter, sector: Some(basis.spec().clone()) })
}

fn pattern_trotter_map(params: &ModelParams, basis: &Basis) -> Result<StochasticMap> {
    params.validate()?;
    let spec = &params.sector;
    let pattern = spec.qubit_pattern.as_ref().expect("pattern sector");
    let cap = spec.max_bosons.expect("pattern sectors carry a boson cap");
    let sign: Vec<f64> = pattern.iter().map(|&m| if m == 1 { 1.0 } else { -1.0 }).collect();
    // index bosonic configurations through their zero-qubit representative
    let lookup: HashMap<Vec<u8>, usize> = basis
        .states()
        .iter()
        .enumerate()
        .map(|(k, s)| (s.occupations.clone(), k))
        .collect();

    let n = basis.dim();
    let l = spec.sites;
    let mut m = Mat::<f64>::identity(n, n);
    let mut scratch = Vec::new();
    for (a, s) in basis.states().iter().enumerate() {
        let probe = FockState::new(s.occupations.clone(), vec![0; l]);
        scratch.clear();
        driving_action(params, &probe, &mut scratch);
        let mut merged: HashMap<FockState, f64> = HashMap::new();
        for (t, amp) in scratch.drain(..) {
            if t.particle_count() <= cap {
                *merged.entry(t).or_insert(0.0) += amp;
            }
        }
        let mut entries: Vec<(usize, f64)> = Vec::with_capacity(merged.len());
        for (t, amp) in merged {
            let w = amp * amp;
            m[(a, a)] -= w;
            let b = lookup[&t.occupations];
            let weight: f64 = t
                .qubits
                .iter()
                .zip(&sign)
                .map(|(&q, &s)| if q == 1 { s } else { 1.0 })
                .product();
            entries.push((b, weight * w));
        }
        merge_duplicates(&mut entries);
        for (b, w) in entries {
            m[(a, b)] += w;
        }
    }
    Ok(StochasticMap { matrix: m, kind: MapKind::Trotter, sector: Some(spec.clone()) })
}
