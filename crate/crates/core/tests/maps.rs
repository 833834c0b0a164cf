use kickmix_core::*;

/// `exp(-iH)` by scaling and squaring a Taylor series, on plain arrays.
fn taylor_propagator(h: &[Vec<f64>]) -> Vec<Vec<(f64, f64)>> {
    let n = h.len();
    let norm = h.iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
    let squarings = (norm.max(1.0).log2().ceil() as u32) + 4;
    let s = 2f64.powi(squarings as i32);
    let mul = |a: &Vec<Vec<(f64, f64)>>, b: &Vec<Vec<(f64, f64)>>| {
        let mut c = vec![vec![(0.0, 0.0); n]; n];
        for i in 0..n {
            for k in 0..n {
                let (ar, ai) = a[i][k];
                if ar == 0.0 && ai == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let (br, bi) = b[k][j];
                    c[i][j].0 += ar * br - ai * bi;
                    c[i][j].1 += ar * bi + ai * br;
                }
            }
        }
        c
    };
    // A = -iH / s
    let a: Vec<Vec<(f64, f64)>> = h.iter().map(|r| r.iter().map(|&x| (0.0, -x / s)).collect()).collect();
    let mut sum: Vec<Vec<(f64, f64)>> = (0..n).map(|i| (0..n).map(|j| ((i == j) as u8 as f64, 0.0)).collect()).collect();
    let mut term = sum.clone();
    for k in 1..30 {
        term = mul(&term, &a);
        for row in term.iter_mut() {
            for z in row.iter_mut() {
                z.0 /= k as f64;
                z.1 /= k as f64;
            }
        }
        for i in 0..n {
            for j in 0..n {
                sum[i][j].0 += term[i][j].0;
                sum[i][j].1 += term[i][j].1;
            }
        }
    }
    for _ in 0..squarings {
        sum = mul(&sum, &sum);
    }
    sum
}

#[test]
fn full_map_matches_taylor_propagator() {
    for spec in [
        SectorSpec::jc_fermion(4, 2),
        SectorSpec::jc_boson(3, 2),
        SectorSpec::rabi_fermion(3, Some(Parity::Odd)),
        SectorSpec::rabi_boson(2, 3, None),
    ] {
        let p = ModelParams::new(spec, 0.8, 1.1);
        let b = enumerate_sector(&p.sector).unwrap();
        let h = build_driving_matrix(&p, &b).unwrap().matrix;
        let rows: Vec<Vec<f64>> = (0..b.dim()).map(|i| (0..b.dim()).map(|j| h[(i, j)]).collect()).collect();
        let v = taylor_propagator(&rows);
        let m = full_map(&p, &b).unwrap();
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                let want = v[i][j].0 * v[i][j].0 + v[i][j].1 * v[i][j].1;
                assert!((m.matrix[(i, j)] - want).abs() < 1e-12, "{:?} ({i},{j})", p.sector);
            }
        }
    }
}

#[test]
fn rpa_form_factor_is_a_trace_of_powers() {
    let p = ModelParams::new(SectorSpec::jc_fermion(5, 2), 0.5, 0.7);
    let b = enumerate_sector(&p.sector).unwrap();
    let m = full_map(&p, &b).unwrap();
    let s = rpa_sff(&map_spectrum(&m).unwrap(), &[1, 2, 3]);
    let n = b.dim();
    let trace1: f64 = (0..n).map(|i| m.matrix[(i, i)]).sum();
    let trace2: f64 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| m.matrix[(i, j)] * m.matrix[(j, i)]).sum();
    assert!((s.k[0] - 2.0 * trace1).abs() < 1e-11);
    assert!((s.k[1] - 4.0 * trace2).abs() < 1e-11);
    assert!(s.k[2] > 0.0);
}

#[test]
fn map_spectrum_ignores_disorder() {
    let mut p = ModelParams::new(SectorSpec::jc_fermion(4, 2), 0.5, 0.7);
    let b = enumerate_sector(&p.sector).unwrap();
    let a = map_spectrum(&full_map(&p, &b).unwrap()).unwrap();
    p.seed = 99;
    p.onsite = GaussianLaw::new(3.0, 2.0);
    let c = map_spectrum(&full_map(&p, &b).unwrap()).unwrap();
    assert_eq!(a, c);
}
