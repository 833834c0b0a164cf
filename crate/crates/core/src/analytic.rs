//! Closed-form spectra, crossover scales, Thouless-time estimators and fits.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sff_exact::SpectralSeries;

/// Both branches of the `N = 1` JC map spectrum, indexed by momentum `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct N1Eigenvalues {
    pub plus: Vec<f64>,
    pub minus: Vec<f64>,
}

impl N1Eigenvalues {
    pub fn all(&self) -> Vec<f64> {
        self.plus.iter().chain(&self.minus).copied().collect()
    }
}

/// `λ_i^± = 1 - g² - J²c_i ± √(J⁴c_i² + g⁴)` with `c_i = 1 - cos(2πi/L)`.
pub fn jc_n1_eigenvalues(sites: usize, g: f64, j: f64) -> Result<N1Eigenvalues> {
    if sites < 2 {
        return Err(Error::InvalidParams("the N = 1 spectrum needs at least two sites".into()));
    }
    let (g2, j2) = (g * g, j * j);
    let mut plus = Vec::with_capacity(sites);
    let mut minus = Vec::with_capacity(sites);
    for i in 0..sites {
        let c = 1.0 - (2.0 * PI * i as f64 / sites as f64).cos();
        let root = (j2 * j2 * c * c + g2 * g2).sqrt();
        plus.push(1.0 - g2 - j2 * c + root);
        minus.push(1.0 - g2 - j2 * c - root);
    }
    // c_0 = 0 makes the top level exactly one
    plus[0] = 1.0;
    Ok(N1Eigenvalues { plus, minus })
}

/// Small-`g/J` form `1 - g² + g⁴ / (2J² c_i)` of the plus branch, `i ≥ 1`.
pub fn jc_n1_small_coupling(sites: usize, g: f64, j: f64, i: usize) -> f64 {
    let c = 1.0 - (2.0 * PI * i as f64 / sites as f64).cos();
    1.0 - g * g + g.powi(4) / (2.0 * j * j * c)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossoverScales {
    /// `ℓ_c = π / asin(g / (√2 J))`, zero once the argument reaches one.
    pub critical_length: f64,
    /// `(g/J)_c = √(2/3)`, where the Rabi-fermion `λ_1` changes character.
    pub transition_ratio: f64,
}

pub fn crossover_scales(g: f64, j: f64) -> Result<CrossoverScales> {
    if j == 0.0 {
        return Err(Error::InvalidParams("crossover scales need J ≠ 0".into()));
    }
    let x = (g / (2f64.sqrt() * j)).abs();
    let critical_length = if x < 1.0 { PI / x.asin() } else { 0.0 };
    Ok(CrossoverScales { critical_length, transition_ratio: (2.0f64 / 3.0).sqrt() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThoulessMethod {
    FromLambda1,
    FromDegenerateSum,
    FromSffCurve,
}

pub enum ThoulessInput<'a> {
    /// `t* = -1 / log λ_1`.
    Lambda1(f64),
    /// Time at which the near-degenerate `N = 1` levels sum to one.
    DegenerateSum { sites: usize, g: f64, j: f64 },
    /// First grid time starting a run of `window` points with
    /// `|K/(2t) - 1| < tolerance`.
    SffCurve { series: &'a SpectralSeries, tolerance: f64, window: usize },
}

impl ThoulessInput<'_> {
    pub fn sff_curve(series: &SpectralSeries) -> ThoulessInput<'_> {
        ThoulessInput::SffCurve { series, tolerance: 0.05, window: 5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThoulessEstimate {
    pub t_star: f64,
    pub method: ThoulessMethod,
    /// The inputs in `name=value` form.
    pub inputs: String,
}

/// `(1-g²)^t (L-1) + t g⁴ (1-g²)^{t-1} (L²-1) / (12 J²)`, the contribution of
/// the `L - 1` levels below one at time `t` for small `g/J`.
pub fn degenerate_sum(sites: usize, g: f64, j: f64, t: f64) -> f64 {
    let l = sites as f64;
    let q = 1.0 - g * g;
    q.powf(t - 1.0) * ((l - 1.0) * q + t * g.powi(4) / (4.0 * j * j) * (l * l - 1.0) / 3.0)
}

pub const BISECTION_TOLERANCE: f64 = 1e-6;

pub fn thouless_estimate(input: ThoulessInput<'_>) -> Result<ThoulessEstimate> {
    match input {
        ThoulessInput::Lambda1(l1) => {
            if !(l1 > 0.0 && l1 < 1.0) {
                return Err(Error::InvalidParams(format!("λ1 must lie in (0, 1), got {l1}")));
            }
            Ok(ThoulessEstimate {
                t_star: -1.0 / l1.ln(),
                method: ThoulessMethod::FromLambda1,
                inputs: format!("lambda1={l1}"),
            })
        }
        ThoulessInput::DegenerateSum { sites, g, j } => {
            if sites < 2 || j == 0.0 || !(g * g < 1.0) || g == 0.0 {
                return Err(Error::InvalidParams("degenerate sum needs L ≥ 2, 0 < g² < 1, J ≠ 0".into()));
            }
            let f = |t: f64| degenerate_sum(sites, g, j, t) - 1.0;
            let mut lo = 1.0;
            if f(lo) <= 0.0 {
                return Err(Error::NoCrossing(format!("sum already below one at t = 1 for L = {sites}")));
            }
            let mut hi = 2.0;
            while f(hi) > 0.0 {
                lo = hi;
                hi *= 2.0;
                if hi > 1e12 {
                    return Err(Error::NoCrossing("sum stays above one".into()));
                }
            }
            while hi - lo > BISECTION_TOLERANCE {
                let mid = 0.5 * (lo + hi);
                if f(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(ThoulessEstimate {
                t_star: 0.5 * (lo + hi),
                method: ThoulessMethod::FromDegenerateSum,
                inputs: format!("L={sites} g={g} J={j}"),
            })
        }
        ThoulessInput::SffCurve { series, tolerance, window } => {
            if window == 0 {
                return Err(Error::InvalidParams("window must be positive".into()));
            }
            let ratio = series.k_over_2t();
            let mut run = 0;
            for (k, r) in ratio.iter().enumerate() {
                if (r - 1.0).abs() < tolerance {
                    run += 1;
                    if run == window {
                        let first = k + 1 - window;
                        return Ok(ThoulessEstimate {
                            t_star: series.t_grid[first] as f64,
                            method: ThoulessMethod::FromSffCurve,
                            inputs: format!("tolerance={tolerance} window={window}"),
                        });
                    }
                } else {
                    run = 0;
                }
            }
            Err(Error::NoCrossing(format!(
                "K/2t never stays within {tolerance} of one for {window} points"
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScalingForm {
    /// `a log(L + b) + c`
    LogShift,
    /// `a L^γ`
    Power,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub form: ScalingForm,
    pub a: f64,
    /// Shift `b` of the log form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    /// Offset `c` of the log form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    /// Exponent of the power form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// `‖y - ŷ‖₂` on the data scale.
    pub residual_norm: f64,
    pub r_squared: f64,
}

impl ScalingFit {
    pub fn eval(&self, l: f64) -> f64 {
        match self.form {
            ScalingForm::LogShift => self.a * (l + self.b.unwrap_or(0.0)).ln() + self.c.unwrap_or(0.0),
            ScalingForm::Power => self.a * l.powf(self.gamma.unwrap_or(0.0)),
        }
    }
}

/// Least squares of `y = α + β x`, returning `(α, β)`.
fn line_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if !(sxx > 0.0) {
        return Err(Error::DegenerateFit("abscissae do not vary".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let beta = sxy / sxx;
    Ok((my - beta * mx, beta))
}

fn log_rss(ls: &[f64], ts: &[f64], b: f64) -> Option<(f64, f64, f64)> {
    let x: Vec<f64> = ls.iter().map(|l| (l + b).ln()).collect();
    let (c, a) = line_fit(&x, ts).ok()?;
    let rss = x.iter().zip(ts).map(|(xi, t)| (a * xi + c - t).powi(2)).sum();
    Some((rss, a, c))
}

/// Profile the shift `b` (coarse scan then golden section), then polish all
/// three parameters with Gauss-Newton steps.
fn fit_log_shift(ls: &[f64], ts: &[f64]) -> Result<(f64, f64, f64)> {
    let l_min = ls.iter().copied().fold(f64::INFINITY, f64::min);
    let l_max = ls.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // b = u - l_min with u > 0 on a log scale
    let u_of = |s: f64| s.exp();
    let profile = |s: f64| log_rss(ls, ts, u_of(s) - l_min).map_or(f64::INFINITY, |r| r.0);
    let (s_lo, s_hi) = ((1e-8f64).ln(), (1e4 * (l_max + 1.0)).ln());
    let steps = 600;
    let grid: Vec<f64> = (0..=steps).map(|k| s_lo + (s_hi - s_lo) * k as f64 / steps as f64).collect();
    let best = (0..=steps)
        .min_by(|&a, &b| profile(grid[a]).total_cmp(&profile(grid[b])))
        .expect("non-empty grid");
    let (mut lo, mut hi) = (grid[best.saturating_sub(1)], grid[(best + 1).min(steps)]);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let m1 = hi - phi * (hi - lo);
        let m2 = lo + phi * (hi - lo);
        if profile(m1) < profile(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let b0 = u_of(0.5 * (lo + hi)) - l_min;
    let (_, a0, c0) = log_rss(ls, ts, b0).ok_or_else(|| Error::DegenerateFit("log fit failed".into()))?;

    let mut p = [a0, b0, c0];
    let rss = |p: &[f64; 3]| -> f64 {
        ls.iter()
            .zip(ts)
            .map(|(l, t)| {
                let z = l + p[1];
                if z <= 0.0 {
                    f64::INFINITY
                } else {
                    (p[0] * z.ln() + p[2] - t).powi(2)
                }
            })
            .sum()
    };
    for _ in 0..50 {
        // normal equations JᵀJ δ = Jᵀr
        let mut jtj = [[0.0; 3]; 3];
        let mut jtr = [0.0; 3];
        for (l, t) in ls.iter().zip(ts) {
            let z = l + p[1];
            let r = t - (p[0] * z.ln() + p[2]);
            let row = [z.ln(), p[0] / z, 1.0];
            for i in 0..3 {
                jtr[i] += row[i] * r;
                for k in 0..3 {
                    jtj[i][k] += row[i] * row[k];
                }
            }
        }
        let Some(delta) = solve3(jtj, jtr) else { break };
        let trial = [p[0] + delta[0], p[1] + delta[1], p[2] + delta[2]];
        if rss(&trial) <= rss(&p) {
            p = trial;
        } else {
            break;
        }
        if delta.iter().all(|d| d.abs() < 1e-15) {
            break;
        }
    }
    Ok((p[0], p[1], p[2]))
}

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &k| a[i][col].abs().total_cmp(&a[k][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let s: f64 = (row + 1..3).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Least-squares fit of `t*(L)` to the requested form.
pub fn fit_scaling(points: &[(f64, f64)], form: ScalingForm) -> Result<ScalingFit> {
    if points.len() < 3 {
        return Err(Error::DegenerateFit(format!("{} points; at least 3 are needed", points.len())));
    }
    let ls: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ts: Vec<f64> = points.iter().map(|p| p.1).collect();
    if ls.iter().chain(&ts).any(|v| !v.is_finite()) {
        return Err(Error::DegenerateFit("non-finite data".into()));
    }
    let mut fit = match form {
        ScalingForm::LogShift => {
            let (a, b, c) = fit_log_shift(&ls, &ts)?;
            ScalingFit { form, a, b: Some(b), c: Some(c), gamma: None, residual_norm: 0.0, r_squared: 0.0 }
        }
        ScalingForm::Power => {
            if ls.iter().chain(&ts).any(|&v| v <= 0.0) {
                return Err(Error::DegenerateFit("power fit needs positive data".into()));
            }
            let x: Vec<f64> = ls.iter().map(|l| l.ln()).collect();
            let y: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
            let (ln_a, gamma) = line_fit(&x, &y)?;
            ScalingFit { form, a: ln_a.exp(), b: None, c: None, gamma: Some(gamma), residual_norm: 0.0, r_squared: 0.0 }
        }
    };
    let mean = ts.iter().sum::<f64>() / ts.len() as f64;
    let ss_res: f64 = ls.iter().zip(&ts).map(|(l, t)| (t - fit.eval(*l)).powi(2)).sum();
    let ss_tot: f64 = ts.iter().map(|t| (t - mean).powi(2)).sum();
    fit.residual_norm = ss_res.sqrt();
    fit.r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(fit)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundStatePair {
    pub plus: f64,
    pub minus: f64,
}

/// `E_b± = 1 - 4g² - 2J² ± 2J² √(1 + 4g⁴/J⁴)`.
///
/// Only `E_b+` lies where the free Green's function is positive and so
/// satisfies `G_0(j, j; E) = 1/(4g²)`; `E_b-` is the mirror root with
/// `G_0 = -1/(4g²)`.
pub fn dyson_bound_states(g: f64, j: f64) -> Result<BoundStatePair> {
    if j == 0.0 {
        return Err(Error::InvalidParams("bound states need J ≠ 0".into()));
    }
    let (g2, j2) = (g * g, j * j);
    let base = 1.0 - 4.0 * g2 - 2.0 * j2;
    let split = 2.0 * j2 * (1.0 + 4.0 * g2 * g2 / (j2 * j2)).sqrt();
    Ok(BoundStatePair { plus: base + split, minus: base - split })
}

/// Diagonal free Green's function `G_0(j, j; z)` of the infinite chain with
/// on-site `1 - 4g² - 2J²` and hopping `J²`, for real `z` outside the band.
pub fn chain_green_diagonal(z: f64, g: f64, j: f64) -> Option<f64> {
    let j2 = j * j;
    let eps = (z - 1.0 + 4.0 * g * g + 2.0 * j2) / (2.0 * j2);
    if eps.abs() <= 1.0 {
        return None;
    }
    Some(eps.signum() / (2.0 * j2 * (eps * eps - 1.0).sqrt()))
}

/// Second-largest Rabi-fermion map eigenvalue and its degeneracy.
///
/// At exactly `(g/J)² = 2/3` the two branches meet and their multiplets
/// merge into `2L + 1` states.
pub fn rabi_fermion_lambda1(g: f64, j: f64, sites: usize) -> Result<(f64, usize)> {
    if j == 0.0 {
        return Err(Error::InvalidParams("λ1 needs J ≠ 0".into()));
    }
    let ratio2 = (g / j).powi(2);
    let below = 1.0 - 2.0 * g * g;
    let above = dyson_bound_states(g, j)?.plus;
    let critical = 2.0 / 3.0;
    Ok(if (ratio2 - critical).abs() <= 1e-12 * critical {
        (below, 2 * sites + 1)
    } else if ratio2 < critical {
        (below, sites + 1)
    } else {
        (above, sites)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtrapolationResult {
    /// `λ_1` at `1/N_max → 0`.
    pub intercept: f64,
    /// Coefficient of `1/N_max`.
    pub slope: f64,
    pub points_used: usize,
}

pub const DEFAULT_EXTRAPOLATION_POINTS: usize = 3;

/// Linear fit of `λ_1` against `1/N_max` over the `last` largest truncations.
pub fn extrapolate_lambda1(points: &[(f64, f64)], last: usize) -> Result<ExtrapolationResult> {
    let mut pts: Vec<(f64, f64)> = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    if pts.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::DegenerateFit("repeated truncation values".into()));
    }
    if pts.iter().any(|p| !(p.0 > 0.0)) {
        return Err(Error::DegenerateFit("truncations must be positive".into()));
    }
    let used = last.min(pts.len());
    if used < 2 {
        return Err(Error::DegenerateFit(format!("{used} usable points; at least 2 are needed")));
    }
    let tail = &pts[pts.len() - used..];
    let x: Vec<f64> = tail.iter().map(|p| 1.0 / p.0).collect();
    let y: Vec<f64> = tail.iter().map(|p| p.1).collect();
    let (intercept, slope) = line_fit(&x, &y)?;
    Ok(ExtrapolationResult { intercept, slope, points_used: used })
}
