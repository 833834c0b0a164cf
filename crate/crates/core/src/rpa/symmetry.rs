//! Commutation checks of a map against the generators of its symmetries.
//!
//! The map acts on occupation configurations, so each site carries plain
//! Pauli matrices with `|0⟩, |1⟩` as the `σ^z = +1, -1` states (no
//! Jordan-Wigner strings). Bosons use `K^0 = -(n + 1/2)`, `K^+ = a√n`,
//! `K^- = √n a†`. Operators are restricted to the supplied basis; targets
//! outside it are dropped, so the basis must be closed under the generators
//! being tested.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::basis::{Basis, FockState, Mixing, Species};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::rpa::map::StochasticMap;

pub const COMMUTES_BELOW: f64 = 1e-11;
pub const BREAKS_ABOVE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expectation {
    Commutes,
    Breaks,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryCheck {
    pub generator: String,
    /// `max |[M, G]_ab|`.
    pub norm: f64,
    pub expected: Expectation,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub checks: Vec<SymmetryCheck>,
}

impl SymmetryReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, generator: &str) -> Option<&SymmetryCheck> {
        self.checks.iter().find(|c| c.generator == generator)
    }

    fn push(&mut self, generator: impl Into<String>, m: &Mat<f64>, g: &Mat<f64>, expected: Expectation) {
        let norm = commutator_norm(m, g);
        let pass = match expected {
            Expectation::Commutes => norm < COMMUTES_BELOW,
            Expectation::Breaks => norm > BREAKS_ABOVE,
        };
        self.checks.push(SymmetryCheck { generator: generator.into(), norm, expected, pass });
    }
}

pub fn commutator_norm(a: &Mat<f64>, b: &Mat<f64>) -> f64 {
    let c = a * b - b * a;
    let mut worst = 0.0f64;
    for j in 0..c.ncols() {
        for i in 0..c.nrows() {
            worst = worst.max(c[(i, j)].abs());
        }
    }
    worst
}

/// Dense matrix of an operator given by its action on single states.
fn operator<F>(basis: &Basis, action: F) -> Mat<f64>
where
    F: Fn(&FockState) -> Vec<(FockState, f64)>,
{
    let n = basis.dim();
    let mut m = Mat::<f64>::zeros(n, n);
    for (col, s) in basis.states().iter().enumerate() {
        for (t, w) in action(s) {
            if let Some(row) = basis.find(&t) {
                m[(row, col)] += w;
            }
        }
    }
    m
}

fn sum_over_sites<F>(basis: &Basis, local: F) -> Mat<f64>
where
    F: Fn(&FockState, usize) -> Vec<(FockState, f64)>,
{
    let l = basis.sites();
    operator(basis, |s| (0..l).flat_map(|i| local(s, i)).collect())
}

/// Pauli action on one two-level entry; `y` is the real form `iσ^y`.
fn pauli(bits: &[u8], axis: char) -> (u8, f64) {
    let b = bits[0];
    match axis {
        'x' => (1 - b, 1.0),
        'y' => (1 - b, if b == 0 { -1.0 } else { 1.0 }),
        'z' => (b, if b == 0 { 1.0 } else { -1.0 }),
        _ => unreachable!(),
    }
}

fn flip_fermion(s: &FockState, i: usize, axis: char) -> (FockState, f64) {
    let (v, w) = pauli(&s.occupations[i..=i], axis);
    let mut t = s.clone();
    t.occupations[i] = v;
    (t, w)
}

fn flip_qubit(s: &FockState, i: usize, axis: char) -> (FockState, f64) {
    let (v, w) = pauli(&s.qubits[i..=i], axis);
    let mut t = s.clone();
    t.qubits[i] = v;
    (t, w)
}

/// Raising moves `|0⟩ → |1⟩`.
fn raise_fermion(s: &FockState, i: usize) -> Option<FockState> {
    (s.occupations[i] == 0).then(|| {
        let mut t = s.clone();
        t.occupations[i] = 1;
        t
    })
}

fn raise_qubit(s: &FockState, i: usize) -> Option<FockState> {
    (s.qubits[i] == 0).then(|| {
        let mut t = s.clone();
        t.qubits[i] = 1;
        t
    })
}

fn lower_qubit(s: &FockState, i: usize) -> Option<FockState> {
    (s.qubits[i] == 1).then(|| {
        let mut t = s.clone();
        t.qubits[i] = 0;
        t
    })
}

/// Checklist of symmetry generators for the model variant of `params`.
pub fn symmetry_report(m: &StochasticMap, basis: &Basis, params: &ModelParams) -> Result<SymmetryReport> {
    if m.dim() != basis.dim() {
        return Err(Error::InvalidParams(format!(
            "map of dimension {} against a basis of dimension {}",
            m.dim(),
            basis.dim()
        )));
    }
    let mut report = SymmetryReport { checks: Vec::new() };
    let mm = &m.matrix;
    match (params.sector.species, params.sector.mixing) {
        (Species::Fermion, Mixing::JaynesCummings) => jc_fermion(&mut report, mm, basis),
        (Species::Boson, Mixing::JaynesCummings) => jc_boson(&mut report, mm, basis),
        (Species::Fermion, Mixing::Rabi) => rabi_fermion(&mut report, mm, basis)?,
        (Species::Boson, Mixing::Rabi) => rabi_boson(&mut report, mm, basis)?,
    }
    Ok(report)
}

fn jc_fermion(report: &mut SymmetryReport, m: &Mat<f64>, basis: &Basis) {
    for axis in ['x', 'y', 'z'] {
        let g = sum_over_sites(basis, |s, i| {
            let (a, wa) = flip_fermion(s, i, axis);
            let (b, wb) = flip_qubit(s, i, axis);
            vec![(a, wa / 2.0), (b, wb / 2.0)]
        });
        report.push(format!("Σ(τ^{axis} + σ^{axis})/2"), m, &g, Expectation::Commutes);
    }
    let raise = sum_over_sites(basis, |s, i| {
        raise_fermion(s, i).into_iter().chain(raise_qubit(s, i)).map(|t| (t, 1.0)).collect()
    });
    let lower = raise.transpose().to_owned();
    report.push("S^+", m, &raise, Expectation::Commutes);
    report.push("S^-", m, &lower, Expectation::Commutes);
}

fn jc_boson(report: &mut SymmetryReport, m: &Mat<f64>, basis: &Basis) {
    let k0 = |s: &FockState, i: usize| -(s.occupations[i] as f64 + 0.5);
    let conserved = sum_over_sites(basis, |s, i| vec![(s.clone(), s.qubits[i] as f64 - k0(s, i))]);
    report.push("Σ(σ†σ - K^0)", m, &conserved, Expectation::Commutes);
    let literal = sum_over_sites(basis, |s, i| vec![(s.clone(), s.qubits[i] as f64 + k0(s, i))]);
    report.push("Σ(K^0 + σ†σ)", m, &literal, Expectation::Breaks);
    let lowering = sum_over_sites(basis, |s, i| {
        let mut out = Vec::new();
        let n = s.occupations[i];
        if n > 0 {
            let mut t = s.clone();
            t.occupations[i] -= 1;
            out.push((t, n as f64));
        }
        out.extend(lower_qubit(s, i).map(|t| (t, 1.0)));
        out
    });
    report.push("Σ(K^+ + σ)", m, &lowering, Expectation::Breaks);
}

/// Product of the single-spin rotations `exp(iπ/4 σ^y) = (1 + iσ^y)/√2` over
/// every fermion and qubit, as an orthogonal change of basis.
fn rotation(basis: &Basis) -> Result<Mat<f64>> {
    let l = basis.sites();
    if basis.dim() != 1 << (2 * l) {
        return Err(Error::Unsupported(
            "the rotated-frame check needs the full Rabi-fermion space (no parity label)".into(),
        ));
    }
    let r = [[1.0, 1.0], [-1.0, 1.0]];
    let scale = 0.5f64.powi(l as i32);
    let n = basis.dim();
    let states = basis.states();
    Ok(Mat::<f64>::from_fn(n, n, |a, b| {
        let (sa, sb) = (&states[a], &states[b]);
        let mut w = scale;
        for i in 0..l {
            w *= r[sa.occupations[i] as usize][sb.occupations[i] as usize];
            w *= r[sa.qubits[i] as usize][sb.qubits[i] as usize];
            if w == 0.0 {
                break;
            }
        }
        w
    }))
}

fn rabi_fermion(report: &mut SymmetryReport, m: &Mat<f64>, basis: &Basis) -> Result<()> {
    let r = rotation(basis)?;
    let rotated = &r * m * r.transpose();
    let l = basis.sites();
    let tau_z = sum_over_sites(basis, |s, i| vec![flip_fermion(s, i, 'z')]);
    report.push("Σ τ̃^z", &rotated, &tau_z, Expectation::Commutes);
    for j in 0..l {
        let sz = operator(basis, |s| vec![flip_qubit(s, j, 'z')]);
        report.push(format!("σ̃^z_{}", j + 1), &rotated, &sz, Expectation::Commutes);
    }
    let flip = operator(basis, |s| {
        let t = FockState::new(
            s.occupations.iter().map(|&n| 1 - n).collect(),
            s.qubits.iter().map(|&q| 1 - q).collect(),
        );
        vec![(t, 1.0)]
    });
    report.push("Π τ̃^x σ̃^x", &rotated, &flip, Expectation::Commutes);
    Ok(())
}

fn rabi_boson(report: &mut SymmetryReport, m: &Mat<f64>, basis: &Basis) -> Result<()> {
    if basis.spec().max_bosons.is_none() || basis.spec().is_pattern_sector() {
        return Err(Error::Unsupported(
            "σ^x checks need the boson-capped sector with all qubit configurations".into(),
        ));
    }
    for j in 0..basis.sites() {
        let sx = operator(basis, |s| vec![flip_qubit(s, j, 'x')]);
        report.push(format!("σ^x_{}", j + 1), m, &sx, Expectation::Commutes);
    }
    Ok(())
}
