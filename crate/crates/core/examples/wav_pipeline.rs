//! File-based round trip: write a stereo WAV and its noise model, read them back and
//! estimate the RTF phase slope, as the `rbr estimate-rtf` command does.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rbrloc::cstat::HermitianCov2;
use rbrloc::estimate::{estimate_rtf, free_field_rtf, EmConfig};
use rbrloc::rbr::{extract_rbr, RbrOptions};
use rbrloc::signal::{synth_delayed_pair, synth_speechlike, SpectroPair, StftConfig, Window};
use rbrloc::wav::{read_wav, write_wav, WavAudio};
use rbrloc::whiten::{whiten_spectra, NoiseModel, DEFAULT_RANK_TOL};

fn main() -> rbrloc::Result<()> {
    let dir = std::env::temp_dir().join("rbrloc-wav-pipeline");
    std::fs::create_dir_all(&dir)?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let sigma = 0.003;
    let s = synth_speechlike(1.0, 16_000, &mut rng)?;
    let (a, b) = synth_delayed_pair(&s, -6)?;
    let mut add_noise = |x: Vec<f64>| -> Vec<f64> {
        x.into_iter().map(|v| 0.5 * v + sigma * rng.sample::<f64, _>(StandardNormal)).collect()
    };
    let (a, b) = (add_noise(a), add_noise(b));
    write_wav(dir.join("pair.wav"), &WavAudio::from_f64(16_000, &[a, b]))?;
    let cfg = StftConfig::default();
    let v = sigma * sigma * Window::Hann.coefficients(cfg.window_len).iter().map(|w| w * w).sum::<f64>();
    NoiseModel::uniform(HermitianCov2::diag(v, v), cfg.n_freqs()).write(dir.join("noise.json"))?;

    let audio = read_wav(dir.join("pair.wav"))?;
    let noise = NoiseModel::read(dir.join("noise.json"))?;
    let pair = SpectroPair::from_stereo(&audio.channel_f64(0).unwrap(), &audio.channel_f64(1).unwrap(), audio.sample_rate, &cfg)?;
    let ws = noise.whiteners(DEFAULT_RANK_TOL)?;
    let (m1p, m2p) = whiten_spectra(&pair.m1, &pair.m2, &ws)?;
    let kinds: Vec<_> = ws.iter().map(|w| w.kind()).collect();
    let field = extract_rbr(&m1p, &m2p, &kinds, RbrOptions::default())?;
    let est = estimate_rtf(&field, &ws, &EmConfig::default(), &mut rng)?;

    let freqs = pair.frequencies();
    println!("{} of {} bins missing", field.n_missing(), field.y().len());
    for f in [15, 63, 127, 255, 383] {
        if let Some(r) = est.r[f] {
            let err = (r / free_field_rtf(-6.0, freqs[f])).arg();
            println!("bin {:>3} ({:>5.0} Hz): |r| {:.3}, phase error vs 6-sample lead {err:+.3} rad", f + 1, freqs[f] * 16_000.0, r.norm());
        }
    }
    Ok(())
}
