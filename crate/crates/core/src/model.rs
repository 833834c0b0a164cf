//! Kick phases, driving Hamiltonian and one-kick propagator.
//!
//! The Floquet operator is `U = V W` with `W = exp(-i H_0)` diagonal in the
//! occupation basis (phases `θ`) and `V = exp(-i H_drive)`, where the driving
//! Hamiltonian mixes species on every site (Jaynes-Cummings or Rabi form)
//! and hops the itinerant species between nearest neighbours on a ring.
//!
//! Fermions are ordered site by site, so `a†_i` picks up `(-1)` to the number
//! of fermions on sites `< i`. This reproduces the Jordan-Wigner form of the
//! ring, where the bond closing the chain carries `(-1)^{N_f}`.

use faer::{c64, Mat};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::basis::{Basis, FockState, Mixing, SectorSpec, Species};
use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianLaw {
    pub mean: f64,
    pub std: f64,
}

impl GaussianLaw {
    pub const fn new(mean: f64, std: f64) -> Self {
        Self { mean, std }
    }
}

fn default_interaction() -> f64 {
    10.0
}

fn default_alpha() -> f64 {
    1.4
}

fn default_law() -> GaussianLaw {
    GaussianLaw::new(1.0, 0.3)
}

/// Complete definition of one kicked mixture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub sector: SectorSpec,
    /// Uniform mixing strength `g`.
    pub coupling: f64,
    /// Optional site-resolved mixing strengths `g_i`, overriding `coupling`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub site_coupling: Option<Vec<f64>>,
    /// Hopping amplitude `J`.
    pub hopping: f64,
    /// Long-range interaction amplitude `U_0`.
    #[serde(default = "default_interaction")]
    pub interaction: f64,
    /// Interaction exponent `α ∈ (1, 2)`.
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// Law of the particle on-site energies `ω_i`.
    #[serde(default = "default_law")]
    pub onsite: GaussianLaw,
    /// Law of the qubit transition frequencies `Ω_i`.
    #[serde(default = "default_law")]
    pub qubit: GaussianLaw,
    #[serde(default)]
    pub seed: u64,
    /// Measure `|i - j|` around the ring instead of along the chain.
    #[serde(default)]
    pub ring_distance: bool,
}

impl ModelParams {
    /// Model with the default disorder constants (`U_0 = 10`, `α = 1.4`,
    /// Gaussian energies of mean 1 and width 0.3).
    pub fn new(sector: SectorSpec, coupling: f64, hopping: f64) -> Self {
        Self {
            sector,
            coupling,
            site_coupling: None,
            hopping,
            interaction: default_interaction(),
            alpha: default_alpha(),
            onsite: default_law(),
            qubit: default_law(),
            seed: 0,
            ring_distance: false,
        }
    }

    pub fn sites(&self) -> usize {
        self.sector.sites
    }

    pub fn coupling_at(&self, site: usize) -> f64 {
        match &self.site_coupling {
            Some(g) => g[site],
            None => self.coupling,
        }
    }

    /// Whether every site carries the same mixing strength.
    pub fn is_uniform(&self) -> bool {
        match &self.site_coupling {
            None => true,
            Some(g) => g.iter().all(|&x| x == g[0]),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.sector.validate()?;
        let bad = |m: String| Err(Error::InvalidParams(m));
        if !(self.alpha > 1.0 && self.alpha < 2.0) {
            return bad(format!("alpha must lie in (1, 2), got {}", self.alpha));
        }
        for (name, law) in [("onsite", self.onsite), ("qubit", self.qubit)] {
            if !(law.std >= 0.0) || !law.mean.is_finite() || !law.std.is_finite() {
                return bad(format!("{name} law needs a finite mean and std >= 0"));
            }
        }
        if let Some(g) = &self.site_coupling {
            if g.len() != self.sites() {
                return bad(format!("site_coupling has {} entries for {} sites", g.len(), self.sites()));
            }
        }
        if !self.coupling.is_finite() || !self.hopping.is_finite() || !self.interaction.is_finite() {
            return bad("coupling, hopping and interaction must be finite".into());
        }
        Ok(())
    }

    fn check_basis(&self, basis: &Basis) -> Result<()> {
        if basis.spec() != &self.sector {
            return Err(Error::BasisMismatch);
        }
        if self.sector.is_pattern_sector() {
            return Err(Error::Unsupported(
                "qubit-pattern sectors live in the σ^x basis and carry no occupation-basis Hamiltonian".into(),
            ));
        }
        Ok(())
    }
}

/// One draw of the on-site energies and qubit frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct DisorderRealization {
    pub onsite: Vec<f64>,
    pub qubit: Vec<f64>,
    pub index: u64,
}

fn draw(law: GaussianLaw, rng: &mut ChaCha8Rng) -> f64 {
    if law.std == 0.0 {
        return law.mean;
    }
    Normal::new(law.mean, law.std).expect("validated law").sample(rng)
}

/// Disorder realization `index`, a pure function of `(params.seed, index)`.
pub fn draw_disorder(params: &ModelParams, index: u64) -> DisorderRealization {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(index);
    let l = params.sites();
    let onsite = (0..l).map(|_| draw(params.onsite, &mut rng)).collect();
    let qubit = (0..l).map(|_| draw(params.qubit, &mut rng)).collect();
    DisorderRealization { onsite, qubit, index }
}

/// Diagonal kick phases `θ`, one per basis state.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector {
    pub theta: Vec<f64>,
}

/// `θ = Σ_i (ω_i n_i + Ω_i σ_i) + Σ_{i<j} U_0 / d(i,j)^α n_i n_j`.
pub fn build_phase_vector(
    params: &ModelParams,
    basis: &Basis,
    disorder: &DisorderRealization,
) -> Result<PhaseVector> {
    params.check_basis(basis)?;
    let l = params.sites();
    if disorder.onsite.len() != l || disorder.qubit.len() != l {
        return Err(Error::InvalidParams(format!(
            "disorder realization has {} / {} entries for {l} sites",
            disorder.onsite.len(),
            disorder.qubit.len()
        )));
    }
    let mut pair = vec![0.0; l * l];
    for i in 0..l {
        for j in i + 1..l {
            let linear = (j - i) as f64;
            let d = if params.ring_distance { linear.min(l as f64 - linear) } else { linear };
            pair[i * l + j] = params.interaction / d.powf(params.alpha);
        }
    }
    let theta = basis
        .states()
        .iter()
        .map(|s| {
            let mut t = 0.0;
            for i in 0..l {
                let n = s.occupations[i] as f64;
                t += disorder.onsite[i] * n + disorder.qubit[i] * s.qubits[i] as f64;
                if n != 0.0 {
                    for j in i + 1..l {
                        t += pair[i * l + j] * n * s.occupations[j] as f64;
                    }
                }
            }
            t
        })
        .collect();
    Ok(PhaseVector { theta })
}

/// Remove one particle from `site`; returns the matrix-element factor.
fn annihilate(occ: &mut [u8], site: usize, species: Species) -> Option<f64> {
    let n = occ[site];
    if n == 0 {
        return None;
    }
    let amp = match species {
        Species::Fermion => fermion_sign(occ, site),
        Species::Boson => (n as f64).sqrt(),
    };
    occ[site] -= 1;
    Some(amp)
}

fn create(occ: &mut [u8], site: usize, species: Species) -> Option<f64> {
    let n = occ[site];
    let amp = match species {
        Species::Fermion => {
            if n != 0 {
                return None;
            }
            fermion_sign(occ, site)
        }
        Species::Boson => {
            if n == u8::MAX {
                return None;
            }
            (n as f64 + 1.0).sqrt()
        }
    };
    occ[site] += 1;
    Some(amp)
}

fn fermion_sign(occ: &[u8], site: usize) -> f64 {
    let before: u32 = occ[..site].iter().map(|&n| n as u32).sum();
    if before % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Action of the driving Hamiltonian on an occupation-basis state.
///
/// Pushes `(target, amplitude)` pairs; a target may repeat and callers sum
/// the amplitudes.
pub(crate) fn driving_action(
    params: &ModelParams,
    state: &FockState,
    out: &mut Vec<(FockState, f64)>,
) {
    let species = params.sector.species;
    let l = state.sites();
    for i in 0..l {
        let g = params.coupling_at(i);
        if g != 0.0 {
            let qubit_up = state.qubits[i] == 1;
            let allow_create = match params.sector.mixing {
                // a†σ needs an excited qubit, the Rabi term takes either
                Mixing::JaynesCummings => qubit_up,
                Mixing::Rabi => true,
            };
            let allow_annihilate = match params.sector.mixing {
                Mixing::JaynesCummings => !qubit_up,
                Mixing::Rabi => true,
            };
            if allow_create {
                let mut s = state.clone();
                if let Some(a) = create(&mut s.occupations, i, species) {
                    s.qubits[i] ^= 1;
                    out.push((s, g * a));
                }
            }
            if allow_annihilate {
                let mut s = state.clone();
                if let Some(a) = annihilate(&mut s.occupations, i, species) {
                    s.qubits[i] ^= 1;
                    out.push((s, g * a));
                }
            }
        }

        if params.hopping != 0.0 {
            let j = (i + 1) % l;
            for (to, from) in [(i, j), (j, i)] {
                let mut s = state.clone();
                let Some(a1) = annihilate(&mut s.occupations, from, species) else {
                    continue;
                };
                let Some(a2) = create(&mut s.occupations, to, species) else {
                    continue;
                };
                out.push((s, -params.hopping * (a1 * a2)));
            }
        }
    }
}

/// Row-compressed driving Hamiltonian restricted to a sector.
#[derive(Debug, Clone)]
pub struct SparseDriving {
    rows: Vec<Vec<(usize, f64)>>,
}

impl SparseDriving {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Gershgorin bound on the spectral radius.
    pub fn spectral_bound(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.iter().map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DrivingMatrix {
        let n = self.dim();
        let mut m = Mat::<f64>::zeros(n, n);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m[(i, j)] = v;
            }
        }
        DrivingMatrix { matrix: m }
    }

    fn apply_real(&self, x: &[f64], y: &mut [f64]) {
        for (yi, row) in y.iter_mut().zip(&self.rows) {
            *yi = row.iter().map(|&(j, v)| v * x[j]).sum();
        }
    }

    /// Column `col` of `exp(-iH)` by a Chebyshev expansion.
    ///
    /// The iterates `T_k(H/β) e_col` stay real; even orders feed the real
    /// part and odd orders the imaginary part.
    pub fn propagate_unit_vector(&self, col: usize) -> Vec<c64> {
        let n = self.dim();
        let beta = self.spectral_bound();
        let mut out = vec![c64::new(0.0, 0.0); n];
        if beta == 0.0 {
            out[col] = c64::new(1.0, 0.0);
            return out;
        }
        let coeffs = chebyshev_exp_coefficients(beta);
        let scale = 1.0 / beta;

        let mut prev = vec![0.0; n];
        prev[col] = 1.0;
        let mut cur = vec![0.0; n];
        self.apply_real(&prev, &mut cur);
        cur.iter_mut().for_each(|x| *x *= scale);
        let mut next = vec![0.0; n];

        let mut re = vec![0.0; n];
        let mut im = vec![0.0; n];
        re[col] += coeffs[0];
        accumulate(&mut re, &mut im, 1, coeffs[1], &cur);
        for (k, &c) in coeffs.iter().enumerate().skip(2) {
            self.apply_real(&cur, &mut next);
            for (nx, &px) in next.iter_mut().zip(&prev) {
                *nx = 2.0 * scale * *nx - px;
            }
            accumulate(&mut re, &mut im, k, c, &next);
            std::mem::swap(&mut prev, &mut cur);
            std::mem::swap(&mut cur, &mut next);
        }
        for ((o, r), i) in out.iter_mut().zip(re).zip(im) {
            *o = c64::new(r, i);
        }
        out
    }
}

/// `(2 - δ_k0) (-i)^k J_k(β)` weight added to the real or imaginary part.
fn accumulate(re: &mut [f64], im: &mut [f64], k: usize, c: f64, v: &[f64]) {
    // (-i)^k cycles 1, -i, -1, i
    let (target, sign) = match k % 4 {
        0 => (re, 1.0),
        1 => (im, -1.0),
        2 => (re, -1.0),
        _ => (im, 1.0),
    };
    let w = sign * c;
    for (t, &x) in target.iter_mut().zip(v) {
        *t += w * x;
    }
}

/// `c_0 = J_0(β)`, `c_k = 2 J_k(β)`, truncated once the terms are below
/// double precision.
fn chebyshev_exp_coefficients(beta: f64) -> Vec<f64> {
    let j = bessel_j_sequence(beta, (1.5 * beta) as usize + 40);
    let mut coeffs: Vec<f64> = j
        .iter()
        .enumerate()
        .map(|(k, &v)| if k == 0 { v } else { 2.0 * v })
        .collect();
    while coeffs.len() > 2 {
        let last = *coeffs.last().unwrap();
        if last.abs() < 1e-18 && (coeffs.len() as f64) > beta {
            coeffs.pop();
        } else {
            break;
        }
    }
    coeffs
}

/// `J_0(x) .. J_kmax(x)` by Miller's downward recurrence, normalised with
/// `J_0 + 2 Σ J_{2k} = 1`.
fn bessel_j_sequence(x: f64, kmax: usize) -> Vec<f64> {
    let start = kmax + 30 + (x as usize);
    let mut vals = vec![0.0; start + 2];
    vals[start] = 1e-300;
    for k in (1..=start).rev() {
        vals[k - 1] = 2.0 * k as f64 / x * vals[k] - vals[k + 1];
        if vals[k - 1].abs() > 1e250 {
            for v in vals.iter_mut().skip(k - 1) {
                *v *= 1e-250;
            }
        }
    }
    let norm = vals[0] + 2.0 * vals.iter().skip(2).step_by(2).sum::<f64>();
    vals.truncate(kmax + 1);
    vals.iter_mut().for_each(|v| *v /= norm);
    vals
}

pub fn build_sparse_driving(params: &ModelParams, basis: &Basis) -> Result<SparseDriving> {
    params.validate()?;
    params.check_basis(basis)?;
    let mut scratch = Vec::new();
    let rows = basis
        .states()
        .iter()
        .map(|s| {
            scratch.clear();
            driving_action(params, s, &mut scratch);
            let mut row: Vec<(usize, f64)> = scratch
                .drain(..)
                .filter_map(|(t, a)| basis.find(&t).map(|k| (k, a)))
                .collect();
            merge_duplicates(&mut row);
            row
        })
        .collect();
    Ok(SparseDriving { rows: mirror_lower(rows) })
}

/// Copies each upper-triangle value onto its mirror so that `H = Hᵀ` holds
/// bit for bit whatever the summation order of repeated targets.
fn mirror_lower(mut rows: Vec<Vec<(usize, f64)>>) -> Vec<Vec<(usize, f64)>> {
    for i in 0..rows.len() {
        for k in 0..rows[i].len() {
            let j = rows[i][k].0;
            if j < i {
                if let Ok(pos) = rows[j].binary_search_by_key(&i, |e| e.0) {
                    rows[i][k].1 = rows[j][pos].1;
                }
            }
        }
    }
    rows
}

pub(crate) fn merge_duplicates(row: &mut Vec<(usize, f64)>) {
    row.sort_by_key(|&(k, _)| k);
    let mut merged: Vec<(usize, f64)> = Vec::with_capacity(row.len());
    for &(k, v) in row.iter() {
        match merged.last_mut() {
            Some((lk, lv)) if *lk == k => *lv += v,
            _ => merged.push((k, v)),
        }
    }
    merged.retain(|&(_, v)| v != 0.0);
    *row = merged;
}

/// Dense real symmetric matrix of the driving Hamiltonian.
#[derive(Debug, Clone)]
pub struct DrivingMatrix {
    pub matrix: Mat<f64>,
}

impl DrivingMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

pub fn build_driving_matrix(params: &ModelParams, basis: &Basis) -> Result<DrivingMatrix> {
    Ok(build_sparse_driving(params, basis)?.to_dense())
}

/// Dense one-kick propagator `V = exp(-iH)`.
#[derive(Debug, Clone)]
pub struct UnitaryMatrix {
    pub matrix: Mat<c64>,
}

impl UnitaryMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `max |(V†V - I)_ab|`.
    pub fn unitarity_defect(&self) -> f64 {
        let v = &self.matrix;
        let p = v.adjoint() * v;
        let mut worst = 0.0f64;
        for j in 0..p.ncols() {
            for i in 0..p.nrows() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((p[(i, j)] - c64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

/// `V = Q diag(e^{-iλ}) Qᵀ` from the symmetric eigendecomposition `H = Q Λ Qᵀ`.
pub fn propagator(h: &DrivingMatrix) -> Result<UnitaryMatrix> {
    let n = h.dim();
    if n == 0 {
        return Ok(UnitaryMatrix { matrix: Mat::zeros(0, 0) });
    }
    if (0..n).any(|j| (0..n).any(|i| !h.matrix[(i, j)].is_finite())) {
        return Err(Error::InvalidParams("driving matrix has non-finite entries".into()));
    }
    let (values, q) = linalg::symmetric_eigen(&h.matrix)?;
    let qc = Mat::<f64>::from_fn(n, n, |i, k| q[(i, k)] * values[k].cos());
    let qs = Mat::<f64>::from_fn(n, n, |i, k| q[(i, k)] * values[k].sin());
    let re = &qc * q.transpose();
    let im = &qs * q.transpose();
    let matrix = Mat::<c64>::from_fn(n, n, |i, j| c64::new(re[(i, j)], -im[(i, j)]));
    Ok(UnitaryMatrix { matrix })
}
