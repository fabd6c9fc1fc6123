//! Point-source (rank-1) noise: whitening cancels the noise in the second channel and
//! the delay is still recovered.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rbrloc::cstat::HermitianCov2;
use rbrloc::estimate::{grid_select, tdoa_grid};
use rbrloc::rbr::{extract_rbr, RbrOptions};
use rbrloc::signal::{corrupt_with_noise, synth_delayed_pair, synth_speechlike, SpectroPair, StftConfig};
use rbrloc::whiten::{whiten_spectra, NoiseModel, DEFAULT_RANK_TOL};
use rbrloc::C64;

fn main() -> rbrloc::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let s = synth_speechlike(1.0, 16_000, &mut rng)?;
    let tau = 11;
    let (a, b) = synth_delayed_pair(&s, tau)?;
    let clean = SpectroPair::from_stereo(&a, &b, 16_000, &StftConfig::default())?;

    // Noise from a second point source: n2 = beta(f) n1, 10 dB below the speech.
    let v = clean.mean_power_ch1() / 10.0;
    let covs = (0..clean.n_freqs())
        .map(|_| {
            let beta = C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
            HermitianCov2::new(v, v, beta.conj() * v)
        })
        .collect::<rbrloc::Result<Vec<_>>>()?;
    let noise = NoiseModel::new(covs);
    let pair = corrupt_with_noise(&clean, &noise, &mut rng)?;

    let ws = noise.whiteners(DEFAULT_RANK_TOL)?;
    println!("whitener kinds: {:?}", ws[0].kind());
    let (m1p, m2p) = whiten_spectra(&pair.m1, &pair.m2, &ws)?;
    let kinds: Vec<_> = ws.iter().map(|w| w.kind()).collect();
    let field = extract_rbr(&m1p, &m2p, &kinds, RbrOptions::default())?;
    let sel = grid_select(&field, &tdoa_grid(20, &pair.frequencies(), &ws)?)?;
    println!("true delay {tau}, estimated {}", sel.label);
    Ok(())
}
