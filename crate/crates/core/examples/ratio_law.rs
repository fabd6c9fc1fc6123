//! The ratio of two correlated complex Gaussians is complex-t with one degree of
//! freedom. Samples ratios for a few covariances and reports the radial KS distance to
//! the closed form.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rbrloc::cstat::{ratio_distribution, verify_theorem1, HermitianCov2};
use rbrloc::C64;

fn main() -> rbrloc::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let covs = [
        HermitianCov2::identity(),
        HermitianCov2::new(1.0, 4.0, C64::new(1.2, 0.5))?,
        HermitianCov2::from_correlation(0.5, 2.0, C64::from_polar(0.9, -1.0))?,
    ];
    for cov in covs {
        let law = ratio_distribution(&cov)?;
        let ks = verify_theorem1(&cov, 100_000, &mut rng)?;
        println!(
            "v11={:.2} v22={:.2} c12={:.2}  ->  mean {:.3}, spread {:.4}, KS {ks:.4}",
            cov.v11(),
            cov.v22(),
            cov.c12(),
            law.mean,
            law.spread
        );
    }
    Ok(())
}
