//! Delay estimation on a noisy speech-like pair: RBR grid selection against
//! PHAT-histogram, with the azimuth for a 20 cm microphone pair.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rbrloc::baseline::{phat_histogram_tdoa, PhatConfig};
use rbrloc::bench::{calibrated_noise, NoiseRanges, SnrDb};
use rbrloc::estimate::{grid_select, tdoa_grid, tdoa_to_azimuth};
use rbrloc::rbr::{extract_rbr, RbrOptions};
use rbrloc::signal::{corrupt_with_noise, synth_delayed_pair, synth_speechlike, SpectroPair, StftConfig};
use rbrloc::whiten::{whiten_spectra, DEFAULT_RANK_TOL};

fn main() -> rbrloc::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let cfg = StftConfig::default();
    println!("SNR dB | true tau | RBR | PHAT | RBR azimuth");
    for snr in [6.0, 0.0, -6.0] {
        let s = synth_speechlike(1.0, 16_000, &mut rng)?;
        let tau = rng.random_range(-9..=9);
        let (a, b) = synth_delayed_pair(&s, tau)?;
        let clean = SpectroPair::from_stereo(&a, &b, 16_000, &cfg)?;
        let noise = calibrated_noise(&NoiseRanges::default(), clean.n_freqs(), clean.mean_power_ch1(), SnrDb(snr), &mut rng)?;
        let pair = corrupt_with_noise(&clean, &noise, &mut rng)?;

        let ws = noise.whiteners(DEFAULT_RANK_TOL)?;
        let (m1p, m2p) = whiten_spectra(&pair.m1, &pair.m2, &ws)?;
        let kinds: Vec<_> = ws.iter().map(|w| w.kind()).collect();
        let field = extract_rbr(&m1p, &m2p, &kinds, RbrOptions::default())?;
        let grid = tdoa_grid(20, &pair.frequencies(), &ws)?;
        let rbr = grid_select(&field, &grid)?.label;
        let phat = phat_histogram_tdoa(&pair, &PhatConfig::new(20)?)?;
        let az = tdoa_to_azimuth(rbr, 0.2, 16_000.0, 343.0).map_or("-".to_string(), |d| format!("{d:.1} deg"));
        println!("{snr:>6} | {tau:>8} | {rbr:>3} | {phat:>4} | {az}");
    }
    Ok(())
}
