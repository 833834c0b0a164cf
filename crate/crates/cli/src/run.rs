use std::path::Path;

use kickmix_core::{
    build_map, chain_green_diagonal, compute_exact_sff, crossover_scales, dyson_bound_states, enumerate_sector,
    extrapolate_lambda1, fit_scaling, lambda1_across_n, map_spectrum, momentum_map_spectrum,
    rabi_fermion_lambda1, rpa_sff, symmetry_report, thouless_estimate, Basis, BoundStatePair, CrossoverScales,
    Error, ExtrapolationResult, MapKind, MapSpectrum, ModelParams, ScalingFit, SpectrumCluster,
    SymmetryReport, ThoulessInput, ThoulessMethod, DEFAULT_EXTRAPOLATION_POINTS,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{sector_label, Experiment, RunConfig};
use crate::emit::{OutputManifest, RunWriter};
use crate::error::CliError;

pub const CONFIG_ECHO_NAME: &str = "config.json";

/// Largest sector for which a dense map is formed.
pub const DENSE_MAP_BUDGET: usize = 8192;

/// Below this dimension the dense route is cheaper than momentum blocks.
const DENSE_PREFERRED: usize = 1024;

fn dense_map(p: &ModelParams, basis: &Basis, kind: MapKind) -> Result<kickmix_core::StochasticMap, Error> {
    if basis.dim() > DENSE_MAP_BUDGET {
        return Err(Error::Budget(format!(
            "dense map of dimension {} exceeds {DENSE_MAP_BUDGET}",
            basis.dim()
        )));
    }
    build_map(p, basis, kind)
}

/// Map spectrum through momentum blocks when the model allows it.
pub fn spectrum_of(p: &ModelParams, basis: &Basis, kind: MapKind) -> Result<MapSpectrum, Error> {
    let blocks = p.is_uniform() && !p.sector.is_pattern_sector() && basis.dim() > DENSE_PREFERRED;
    if blocks {
        momentum_map_spectrum(p, basis, kind)
    } else {
        map_spectrum(&dense_map(p, basis, kind)?)
    }
}

#[derive(Serialize)]
struct SpectrumFile<'a> {
    sector: &'a kickmix_core::SectorSpec,
    map: MapKind,
    spectrum: &'a MapSpectrum,
}

#[derive(Serialize)]
struct LambdaPoint {
    excitations: u32,
    lambda1: f64,
}

#[derive(Serialize)]
struct LambdaFile {
    map: MapKind,
    points: Vec<LambdaPoint>,
}

#[derive(Serialize)]
struct ThoulessPoint {
    sites: usize,
    t_star: f64,
    inputs: String,
}

#[derive(Serialize)]
struct ThoulessFile {
    method: ThoulessMethod,
    points: Vec<ThoulessPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fit: Option<ScalingFit>,
}

#[derive(Serialize)]
struct RabiLambda1 {
    sites: usize,
    value: f64,
    degeneracy: usize,
}

#[derive(Serialize)]
struct BoundStateFile {
    coupling: f64,
    hopping: f64,
    bound_states: BoundStatePair,
    /// `G_0(j, j; E_b+)`, equal to `1/(4g²)` at the pole.
    green_at_plus: Option<f64>,
    pole_target: f64,
    crossover: CrossoverScales,
    rabi_fermion_lambda1: RabiLambda1,
}

#[derive(Serialize)]
struct ExtrapolationPoint {
    max_excitations: u32,
    dim: usize,
    lambda1: f64,
    leading_clusters: Vec<SpectrumCluster>,
}

#[derive(Serialize)]
struct ExtrapolationFile {
    map: MapKind,
    points: Vec<ExtrapolationPoint>,
    fit: ExtrapolationResult,
}

#[derive(Serialize)]
struct SymmetryFile<'a> {
    sector: &'a kickmix_core::SectorSpec,
    map: MapKind,
    report: SymmetryReport,
}

/// Validates, computes and writes one run into `out`, manifest last.
pub fn run_experiment(config: &RunConfig, out: &Path) -> Result<OutputManifest, CliError> {
    config.validate()?;
    let mut w = RunWriter::create(out, config.experiment)?;
    let mut echo = config.clone();
    echo.output_dir = Some(out.to_path_buf());
    w.json(CONFIG_ECHO_NAME, &echo, None)?;

    let tag = config.experiment.tag();
    let kind = config.map_kind();
    let models = config.models();

    match config.experiment {
        Experiment::SffExact => {
            let r = config.realizations.expect("validated");
            for p in &models {
                let basis = enumerate_sector(&p.sector)?;
                let grid = config.t_grid.resolve(basis.dim());
                let series = compute_exact_sff(p, &grid, r)?;
                let collapse = config.collapse.map(|c| (c, p.sites()));
                w.series(&format!("{tag}_{}.csv", sector_label(&p.sector)), &series, collapse, Some(p))?;
            }
        }
        Experiment::SffRpa => {
            let series = models
                .par_iter()
                .map(|p| {
                    let basis = enumerate_sector(&p.sector)?;
                    let s = spectrum_of(p, &basis, kind)?;
                    let mut series = rpa_sff(&s, &config.t_grid.resolve(basis.dim()));
                    series.label = format!("rpa-{kind:?}").to_lowercase();
                    Ok(series)
                })
                .collect::<Result<Vec<_>, Error>>()?;
            for (p, s) in models.iter().zip(&series) {
                let collapse = config.collapse.map(|c| (c, p.sites()));
                w.series(&format!("{tag}_{}.csv", sector_label(&p.sector)), s, collapse, Some(p))?;
            }
        }
        Experiment::Spectrum => {
            for p in &models {
                let basis = enumerate_sector(&p.sector)?;
                let spectrum = spectrum_of(p, &basis, kind)?;
                let file = SpectrumFile { sector: &p.sector, map: kind, spectrum: &spectrum };
                w.json(&format!("{tag}_{}.json", sector_label(&p.sector)), &file, Some(p))?;
            }
        }
        Experiment::LambdaAcrossN => {
            for p in &models {
                let points = lambda1_across_n(p, kind, &config.excitations)?
                    .into_iter()
                    .map(|(excitations, lambda1)| LambdaPoint { excitations, lambda1 })
                    .collect();
                w.json(&format!("{tag}_L{}.json", p.sites()), &LambdaFile { map: kind, points }, Some(p))?;
            }
        }
        Experiment::Thouless => {
            let method = config.thouless();
            let points = models
                .par_iter()
                .map(|p| thouless_point(config, p, method, kind))
                .collect::<Result<Vec<_>, Error>>()?;
            let fit = match config.scaling {
                Some(form) => {
                    let xy: Vec<(f64, f64)> = points.iter().map(|q| (q.sites as f64, q.t_star)).collect();
                    Some(fit_scaling(&xy, form)?)
                }
                None => None,
            };
            let base = config.base_model();
            w.json(&format!("{tag}.json"), &ThoulessFile { method, points, fit }, Some(&base))?;
        }
        Experiment::BoundState => {
            let p = config.base_model();
            let (g, j) = (p.coupling, p.hopping);
            let bound_states = dyson_bound_states(g, j)?;
            let (value, degeneracy) = rabi_fermion_lambda1(g, j, p.sites())?;
            let file = BoundStateFile {
                coupling: g,
                hopping: j,
                bound_states,
                green_at_plus: chain_green_diagonal(bound_states.plus, g, j),
                pole_target: 1.0 / (4.0 * g * g),
                crossover: crossover_scales(g, j)?,
                rabi_fermion_lambda1: RabiLambda1 { sites: p.sites(), value, degeneracy },
            };
            w.json(&format!("{tag}.json"), &file, Some(&p))?;
        }
        Experiment::Extrapolate => {
            for p in &models {
                let points = config
                    .max_excitations
                    .par_iter()
                    .map(|&n| {
                        let mut q = p.clone();
                        q.sector.max_excitations = Some(n);
                        let basis = enumerate_sector(&q.sector)?;
                        let s = spectrum_of(&q, &basis, kind)?;
                        let lambda1 = s
                            .lambda1()
                            .ok_or_else(|| Error::InvalidParams(format!("N_max = {n} leaves a single level")))?;
                        Ok(ExtrapolationPoint {
                            max_excitations: n,
                            dim: basis.dim(),
                            lambda1,
                            leading_clusters: s.clusters.iter().take(6).copied().collect(),
                        })
                    })
                    .collect::<Result<Vec<_>, Error>>()?;
                let xy: Vec<(f64, f64)> = points.iter().map(|q| (q.max_excitations as f64, q.lambda1)).collect();
                let k = config.extrapolation_points.unwrap_or(DEFAULT_EXTRAPOLATION_POINTS);
                let fit = extrapolate_lambda1(&xy, k)?;
                let mut csv = String::from("n_max,inv_n_max,lambda1\n");
                for (n, l1) in &xy {
                    csv.push_str(&format!("{n},{:.16e},{l1:.16e}\n", 1.0 / n));
                }
                w.csv(&format!("{tag}_L{}.csv", p.sites()), &csv, Some(p))?;
                w.json(&format!("{tag}_L{}.json", p.sites()), &ExtrapolationFile { map: kind, points, fit }, Some(p))?;
            }
        }
        Experiment::SymmetryCheck => {
            for p in &models {
                let basis = enumerate_sector(&p.sector)?;
                let m = dense_map(p, &basis, kind)?;
                let report = symmetry_report(&m, &basis, p)?;
                let file = SymmetryFile { sector: &p.sector, map: kind, report };
                w.json(&format!("{tag}_{}.json", sector_label(&p.sector)), &file, Some(p))?;
            }
        }
    }
    w.finish()
}

fn thouless_point(
    config: &RunConfig,
    p: &ModelParams,
    method: ThoulessMethod,
    kind: MapKind,
) -> Result<ThoulessPoint, Error> {
    let est = match method {
        ThoulessMethod::FromDegenerateSum => thouless_estimate(ThoulessInput::DegenerateSum {
            sites: p.sites(),
            g: p.coupling,
            j: p.hopping,
        })?,
        ThoulessMethod::FromLambda1 => {
            let basis = enumerate_sector(&p.sector)?;
            let l1 = spectrum_of(p, &basis, kind)?
                .lambda1()
                .ok_or_else(|| Error::InvalidParams("the sector has a single map level".into()))?;
            thouless_estimate(ThoulessInput::Lambda1(l1))?
        }
        ThoulessMethod::FromSffCurve => {
            let basis = enumerate_sector(&p.sector)?;
            let s = spectrum_of(p, &basis, kind)?;
            let series = rpa_sff(&s, &config.t_grid.resolve(basis.dim()));
            thouless_estimate(ThoulessInput::sff_curve(&series))?
        }
    };
    Ok(ThoulessPoint { sites: p.sites(), t_star: est.t_star, inputs: est.inputs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use kickmix_core::SectorSpec;

    #[test]
    fn dense_and_block_routes_agree() {
        let p = ModelParams::new(SectorSpec::jc_fermion(10, 3), 0.3, 0.5);
        let b = enumerate_sector(&p.sector).unwrap();
        assert!(b.dim() > DENSE_PREFERRED);
        let fast = spectrum_of(&p, &b, MapKind::Trotter).unwrap();
        let dense = map_spectrum(&dense_map(&p, &b, MapKind::Trotter).unwrap()).unwrap();
        for (a, c) in fast.eigenvalues.iter().zip(&dense.eigenvalues) {
            assert!((a - c).abs() < 1e-11);
        }
    }

    #[test]
    fn dense_budget_is_enforced() {
        let p = ModelParams::new(SectorSpec::jc_fermion(10, 5), 0.3, 0.5);
        let b = enumerate_sector(&p.sector).unwrap();
        assert!(matches!(dense_map(&p, &b, MapKind::Trotter), Err(Error::Budget(_))));
    }
}
