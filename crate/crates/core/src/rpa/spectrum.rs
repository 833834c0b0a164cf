use serde::{Deserialize, Serialize};

use crate::basis::{enumerate_sector, Mixing};
use crate::error::{Error, Result};
use crate::linalg;
use crate::model::ModelParams;
use crate::rpa::map::{build_map, MapKind, StochasticMap};
use crate::sff_exact::SpectralSeries;

/// Eigenvalues closer than this are treated as one degenerate level.
pub const CLUSTER_TOLERANCE: f64 = 1e-9;

/// Run of consecutive eigenvalues within [`CLUSTER_TOLERANCE`] of each other.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumCluster {
    /// Mean of the members.
    pub value: f64,
    /// Position of the first member in the sorted eigenvalue list.
    pub start: usize,
    pub size: usize,
}

/// Eigenvalues in descending order with their degeneracy clusters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSpectrum {
    pub eigenvalues: Vec<f64>,
    pub clusters: Vec<SpectrumCluster>,
}

impl MapSpectrum {
    /// Sorts descending and groups.
    pub fn from_values(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        let mut clusters: Vec<SpectrumCluster> = Vec::new();
        for (k, &x) in eigenvalues.iter().enumerate() {
            match clusters.last_mut() {
                Some(c) if eigenvalues[k - 1] - x <= CLUSTER_TOLERANCE => {
                    c.value += (x - c.value) / (c.size + 1) as f64;
                    c.size += 1;
                }
                _ => clusters.push(SpectrumCluster { value: x, start: k, size: 1 }),
            }
        }
        Self { eigenvalues, clusters }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn largest(&self) -> Option<f64> {
        self.eigenvalues.first().copied()
    }

    /// Second distinct level, i.e. the largest eigenvalue below the top
    /// cluster.
    pub fn lambda1(&self) -> Option<f64> {
        self.clusters.get(1).map(|c| c.value)
    }

    pub fn lambda1_cluster(&self) -> Option<SpectrumCluster> {
        self.clusters.get(1).copied()
    }

    /// Largest `|λ|` outside the top cluster.
    pub fn subleading_modulus(&self) -> Option<f64> {
        let top = self.clusters.first()?;
        self.eigenvalues[top.size..].iter().map(|x| x.abs()).reduce(f64::max)
    }
}

/// Dense symmetric diagonalisation of a map.
pub fn map_spectrum(m: &StochasticMap) -> Result<MapSpectrum> {
    if m.symmetry_defect() > 1e-10 {
        return Err(Error::InvalidParams("map_spectrum expects a symmetric map".into()));
    }
    Ok(MapSpectrum::from_values(linalg::symmetric_eigenvalues(&m.matrix)?))
}

/// `K(t) = 2t Σ_i λ_i^t`.
pub fn rpa_sff(spectrum: &MapSpectrum, t_grid: &[u64]) -> SpectralSeries {
    let k = t_grid
        .iter()
        .map(|&t| {
            let p = i32::try_from(t).unwrap_or(i32::MAX);
            2.0 * t as f64 * spectrum.eigenvalues.iter().map(|l| l.powi(p)).sum::<f64>()
        })
        .collect();
    SpectralSeries {
        t_grid: t_grid.to_vec(),
        k,
        dim: spectrum.dim(),
        realizations: 0,
        label: "rpa".into(),
        stderr: None,
    }
}

/// `λ_1` of the map in each JC excitation sector.
///
/// Sectors of dimension one carry no `λ_1` and are skipped.
pub fn lambda1_across_n(
    params: &ModelParams,
    kind: MapKind,
    excitations: &[u32],
) -> Result<Vec<(u32, f64)>> {
    if params.sector.mixing != Mixing::JaynesCummings {
        return Err(Error::Unsupported("λ1 across N needs a number-conserving (JC) model".into()));
    }
    let mut out = Vec::with_capacity(excitations.len());
    for &n in excitations {
        let mut p = params.clone();
        p.sector = params.sector.with_excitations(n);
        p.sector.max_excitations = None;
        let basis = enumerate_sector(&p.sector)?;
        if basis.dim() < 2 {
            continue;
        }
        let spec = map_spectrum(&build_map(&p, &basis, kind)?)?;
        if let Some(l1) = spec.lambda1() {
            out.push((n, l1));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{Parity, SectorSpec, Species};
    use crate::rpa::map::trotter_generating_map;

    #[test]
    fn clusters_group_close_values() {
        let s = MapSpectrum::from_values(vec![0.5, 1.0, 0.9, 0.9 + 1e-12, 0.9 - 5e-10, 0.2]);
        assert_eq!(s.eigenvalues[0], 1.0);
        let sizes: Vec<usize> = s.clusters.iter().map(|c| c.size).collect();
        assert_eq!(sizes, vec![1, 3, 1, 1]);
        assert!((s.lambda1().unwrap() - 0.9).abs() < 1e-9);
        assert_eq!(s.clusters[2].start, 4);
    }

    #[test]
    fn rpa_form_factor_values() {
        let flat = MapSpectrum::from_values(vec![1.0, 0.0, 0.0]);
        let s = rpa_sff(&flat, &[1, 2, 7]);
        assert_eq!(s.k, vec![2.0, 4.0, 14.0]);
        let one = MapSpectrum::from_values(vec![1.0, 0.99]);
        assert!((rpa_sff(&one, &[1]).k[0] - 3.98).abs() < 1e-14);
    }

    #[test]
    fn top_eigenvalue_is_one() {
        let p = ModelParams::new(SectorSpec::jc_fermion(4, 2), 0.1, 0.4);
        let b = enumerate_sector(&p.sector).unwrap();
        let s = map_spectrum(&trotter_generating_map(&p, &b).unwrap()).unwrap();
        assert!((s.largest().unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(s.clusters[0].size, 1);
    }

    #[test]
    fn rabi_fermion_full_space_top_is_doubly_degenerate() {
        let p = ModelParams::new(SectorSpec::rabi_fermion(3, None), 0.3, 0.5);
        let b = enumerate_sector(&p.sector).unwrap();
        let s = map_spectrum(&crate::rpa::map::full_map(&p, &b).unwrap()).unwrap();
        assert!((s.largest().unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(s.clusters[0].size, 2);
        assert!(s.eigenvalues.iter().all(|x| x.abs() <= 1.0 + 1e-10));

        let pe = ModelParams::new(SectorSpec::rabi_fermion(3, Some(Parity::Even)), 0.3, 0.5);
        let be = enumerate_sector(&pe.sector).unwrap();
        let se = map_spectrum(&crate::rpa::map::full_map(&pe, &be).unwrap()).unwrap();
        assert_eq!(se.clusters[0].size, 1);
    }

    #[test]
    fn lambda1_is_filling_independent_for_jc_fermions() {
        let p = ModelParams::new(SectorSpec::jc_fermion(4, 1), 0.1, 0.4);
        let all: Vec<u32> = (1..8).collect();
        let l1 = lambda1_across_n(&p, MapKind::Trotter, &all).unwrap();
        assert_eq!(l1.len(), 7);
        for (_, v) in &l1 {
            assert!((v - l1[0].1).abs() < 1e-10);
        }
    }

    #[test]
    fn lambda1_across_n_rejects_rabi() {
        let p = ModelParams::new(SectorSpec::rabi_fermion(3, None), 0.1, 0.4);
        assert!(lambda1_across_n(&p, MapKind::Trotter, &[1]).is_err());
        let q = ModelParams::new(SectorSpec::jc_truncated(Species::Boson, 2, 2), 0.1, 0.4);
        assert_eq!(lambda1_across_n(&q, MapKind::Trotter, &[0]).unwrap(), vec![]);
    }
}
