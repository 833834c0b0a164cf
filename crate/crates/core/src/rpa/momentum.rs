//! Map spectra through lattice momentum blocks.
//!
//! Both maps are invariant under a cyclic shift of all sites, so `M` splits
//! into `L` Hermitian blocks labelled by `k = 2πm/L`. A block needs only the
//! rows of `M` at one representative per translation orbit. For the full map
//! such a row is `|exp(-iH) e_r|²`, obtained by a Chebyshev expansion on the
//! sparse driving Hamiltonian, so no dense propagator of the whole sector is
//! ever formed.

use std::f64::consts::TAU;

use faer::{c64, Mat};
use rayon::prelude::*;

use crate::basis::Basis;
use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{build_sparse_driving, ModelParams, SparseDriving};
use crate::rpa::map::MapKind;
use crate::rpa::spectrum::MapSpectrum;

/// Translation orbits of a basis.
struct Orbits {
    /// Basis index of each representative.
    reps: Vec<usize>,
    periods: Vec<usize>,
    /// For every state: its orbit and the shift `d` with `T^d rep = state`.
    place: Vec<(usize, usize)>,
}

fn orbits(basis: &Basis) -> Result<Orbits> {
    let l = basis.sites();
    let mut rep_of = vec![usize::MAX; basis.dim()];
    let mut reps = Vec::new();
    let mut periods = Vec::new();
    let mut place = vec![(0, 0); basis.dim()];
    for (k, s) in basis.states().iter().enumerate() {
        if rep_of[k] != usize::MAX {
            continue;
        }
        let orbit = reps.len();
        let mut period = l;
        for d in 0..l {
            let image = basis.find(&s.translated(d)).ok_or_else(|| {
                Error::Unsupported("sector is not closed under lattice translations".into())
            })?;
            if d > 0 && image == k {
                period = d;
                break;
            }
            rep_of[image] = orbit;
            place[image] = (orbit, d);
        }
        reps.push(k);
        periods.push(period);
    }
    Ok(Orbits { reps, periods, place })
}

fn check_translation_invariant(params: &ModelParams, basis: &Basis) -> Result<()> {
    if basis.spec() != &params.sector {
        return Err(Error::BasisMismatch);
    }
    if params.sector.is_pattern_sector() {
        return Err(Error::Unsupported("momentum blocks need an occupation-basis sector".into()));
    }
    if !params.is_uniform() {
        return Err(Error::Unsupported("site-dependent coupling breaks translation symmetry".into()));
    }
    Ok(())
}

fn map_row(h: &SparseDriving, kind: MapKind, r: usize) -> Vec<f64> {
    match kind {
        MapKind::Full => h.propagate_unit_vector(r).iter().map(|z| z.norm_sqr()).collect(),
        MapKind::Trotter => {
            let mut row = vec![0.0; h.dim()];
            row[r] = 1.0;
            for &(j, v) in h.row(r) {
                row[j] += v * v;
                row[r] -= v * v;
            }
            row
        }
    }
}

/// Full spectrum of the map assembled from its momentum blocks.
pub fn momentum_map_spectrum(
    params: &ModelParams,
    basis: &Basis,
    kind: MapKind,
) -> Result<MapSpectrum> {
    check_translation_invariant(params, basis)?;
    let h = build_sparse_driving(params, basis)?;
    let orb = orbits(basis)?;
    let l = basis.sites();
    let n_orbits = orb.reps.len();

    // folded[a][b * l + d] = M[r_a, T^d r_b]
    let folded: Vec<Vec<f64>> = orb
        .reps
        .par_iter()
        .map(|&r| {
            let row = map_row(&h, kind, r);
            let mut f = vec![0.0; n_orbits * l];
            for (y, &w) in row.iter().enumerate() {
                let (b, d) = orb.place[y];
                f[b * l + d] += w;
            }
            f
        })
        .collect();

    let blocks: Vec<Vec<f64>> = (0..l)
        .into_par_iter()
        .map(|m| {
            let members: Vec<usize> = (0..n_orbits).filter(|&a| (m * orb.periods[a]) % l == 0).collect();
            let n = members.len();
            let phase: Vec<c64> = (0..l).map(|d| c64::cis(-TAU * (m * d) as f64 / l as f64)).collect();
            let mut block = Mat::<c64>::zeros(n, n);
            for (i, &a) in members.iter().enumerate() {
                for (j, &b) in members.iter().enumerate() {
                    let pb = orb.periods[b];
                    let scale = (orb.periods[a] as f64 / pb as f64).sqrt();
                    let mut acc = c64::new(0.0, 0.0);
                    for d in 0..pb {
                        let w = folded[a][b * l + d];
                        if w != 0.0 {
                            acc += phase[d] * w;
                        }
                    }
                    block[(i, j)] = acc * scale;
                }
            }
            let sym = Mat::<c64>::from_fn(n, n, |i, j| (block[(i, j)] + block[(j, i)].conj()) * 0.5);
            linalg::hermitian_eigenvalues(&sym)
        })
        .collect::<Result<_>>()?;

    let values: Vec<f64> = blocks.into_iter().flatten().collect();
    debug_assert_eq!(values.len(), basis.dim());
    Ok(MapSpectrum::from_values(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{enumerate_sector, Parity, SectorSpec};
    use crate::rpa::map::build_map;
    use crate::rpa::spectrum::map_spectrum;

    fn compare(spec: SectorSpec, g: f64, j: f64, kind: MapKind) {
        let p = ModelParams::new(spec, g, j);
        let b = enumerate_sector(&p.sector).unwrap();
        let dense = map_spectrum(&build_map(&p, &b, kind).unwrap()).unwrap();
        let blocks = momentum_map_spectrum(&p, &b, kind).unwrap();
        assert_eq!(dense.dim(), blocks.dim());
        for (a, c) in dense.eigenvalues.iter().zip(&blocks.eigenvalues) {
            assert!((a - c).abs() < 1e-11, "{a} vs {c}");
        }
    }

    #[test]
    fn blocks_reproduce_dense_spectra() {
        for kind in [MapKind::Full, MapKind::Trotter] {
            compare(SectorSpec::jc_fermion(6, 3), 0.4, 0.1, kind);
            compare(SectorSpec::jc_fermion(4, 4), 0.9, 0.7, kind);
            compare(SectorSpec::jc_boson(4, 3), 0.3, 0.5, kind);
            compare(SectorSpec::rabi_fermion(3, Some(Parity::Even)), 0.6, 0.8, kind);
            compare(SectorSpec::rabi_boson(3, 4, None), 0.2, 0.4, kind);
        }
    }

    #[test]
    fn site_dependent_coupling_is_rejected() {
        let mut p = ModelParams::new(SectorSpec::jc_fermion(3, 1), 0.1, 0.4);
        p.site_coupling = Some(vec![0.1, 0.2, 0.3]);
        let b = enumerate_sector(&p.sector).unwrap();
        assert!(momentum_map_spectrum(&p, &b, MapKind::Trotter).is_err());
    }
}
