//! EM estimation of a per-frequency RTF from noisy binaural bins, against the mean-ratio
//! and mean-ILD/IPD baselines.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rbrloc::baseline::{mean_ild_ipd, mean_ratio};
use rbrloc::cstat::{cgauss2_sample, standard_cnormal, ComplexGauss2, HermitianCov2};
use rbrloc::estimate::{estimate_rtf, EmConfig};
use rbrloc::rbr::{extract_rbr, RbrOptions};
use rbrloc::whiten::{whiten_spectra, NoiseModel, DEFAULT_RANK_TOL};
use rbrloc::C64;

fn main() -> rbrloc::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (nf, nt) = (8, 20);
    let cov = HermitianCov2::from_correlation(1.0, 1.2, C64::from_polar(0.6, 1.0))?;
    let noise = NoiseModel::uniform(cov, nf);
    let truth: Vec<C64> = (0..nf).map(|_| standard_cnormal(&mut rng)).collect();

    let mut m1 = Array2::zeros((nf, nt));
    let mut m2 = Array2::zeros((nf, nt));
    for f in 0..nf {
        let n = cgauss2_sample(&ComplexGauss2::centered(cov), nt, &mut rng);
        for t in 0..nt {
            let s = standard_cnormal(&mut rng) * rng.random_range(0.0..20.0f64).sqrt();
            m1[[f, t]] = s + n[t][0];
            m2[[f, t]] = truth[f] * s + n[t][1];
        }
    }

    let ws = noise.whiteners(DEFAULT_RANK_TOL)?;
    let (m1p, m2p) = whiten_spectra(&m1, &m2, &ws)?;
    let kinds: Vec<_> = ws.iter().map(|w| w.kind()).collect();
    let field = extract_rbr(&m1p, &m2p, &kinds, RbrOptions::default())?;
    let est = estimate_rtf(&field, &ws, &EmConfig::default(), &mut rng)?;

    println!(" f |   true RTF     |  RBR-EM err | mean-ratio err | ILD/IPD err | iters");
    for f in 0..nf {
        let missing: Vec<bool> = field.missing().row(f).to_vec();
        let (a, b) = (m1.row(f).to_vec(), m2.row(f).to_vec());
        let err = |x: Option<C64>| x.map_or(f64::NAN, |x| (x - truth[f]).norm_sqr());
        println!(
            "{f:>2} | {:>14.3} | {:>11.2e} | {:>14.2e} | {:>11.2e} | {}",
            truth[f],
            err(est.r[f]),
            err(mean_ratio(&a, &b, &missing)),
            err(mean_ild_ipd(&a, &b, &missing)),
            est.iters[f]
        );
    }
    Ok(())
}
