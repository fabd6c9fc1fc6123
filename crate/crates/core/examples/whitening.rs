//! Whitening a full-rank and a rank-1 noise covariance, and mapping an RTF through it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rbrloc::cstat::{cgauss2_sample, ComplexGauss2, HermitianCov2};
use rbrloc::whiten::{build_whitener, dewhiten_rtf, whiten_obs, whiten_rtf, Mat2, DEFAULT_RANK_TOL};
use rbrloc::C64;

fn main() -> rbrloc::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let full = HermitianCov2::from_correlation(1.0, 1.5, C64::from_polar(0.8, 0.7))?;
    let beta = C64::from_polar(0.6, 2.0);
    let rank1 = HermitianCov2::new(2.0, beta.norm_sqr() * 2.0, beta.conj() * 2.0)?;

    for (name, cov) in [("full-rank", full), ("rank-1", rank1)] {
        let w = build_whitener(&cov, DEFAULT_RANK_TOL)?;
        let q = w.q();
        let qrq = q.mul(&Mat2::from(&cov)).mul(&q.adjoint());
        println!("{name}: {:?}, Q R Q^H =", w.kind());
        for i in 0..2 {
            println!("    [{:>8.4} {:>8.4}]", qrq.get(i, 0), qrq.get(i, 1));
        }
        let n = 50_000;
        let (mut p1, mut p2) = (0.0, 0.0);
        for m in cgauss2_sample(&ComplexGauss2::centered(cov), n, &mut rng) {
            let [a, b] = whiten_obs(&w, m);
            p1 += a.norm_sqr();
            p2 += b.norm_sqr();
        }
        println!("    whitened noise powers {:.3}, {:.3}", p1 / n as f64, p2 / n as f64);
        let r = C64::from_polar(1.0, -0.4);
        let rp = whiten_rtf(&w, r)?;
        println!("    r = {r:.3}  ->  r' = {rp:.3}  ->  back {:.3}", dewhiten_rtf(&w, rp)?);
    }
    Ok(())
}
