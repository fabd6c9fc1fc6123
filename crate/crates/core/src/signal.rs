//! Time-frequency plumbing: STFT / inverse STFT, delayed-pair synthesis, stationary
//! noise corruption in the STFT domain and a synthetic speech-like source.
//!
//! Frames are centred: the signal is zero-padded by half a window on both sides and
//! only full frames are kept, so a signal of `L` samples yields `1 + L / hop` frames
//! (1 s at 16 kHz with 1024-sample windows and 50% overlap gives 32 frames).
//!
//! Estimation uses the `F = window_len / 2` positive-frequency bins `k = 1..=F`; row `i`
//! of a [`SpectroPair`] is bin `k = i + 1` at normalised frequency `k / window_len`
//! cycles per sample. The last row is the Nyquist bin.

use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::Array2;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::{Fft, FftPlanner};

use crate::cstat::{cgauss2_sample, ComplexGauss2};
use crate::whiten::NoiseModel;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Window {
    #[default]
    Hann,
}

impl Window {
    /// Periodic window of length `n`.
    pub fn coefficients(self, n: usize) -> Vec<f64> {
        match self {
            Window::Hann => (0..n)
                .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StftConfig {
    pub window_len: usize,
    pub overlap: f64,
    pub window: Window,
}

impl Default for StftConfig {
    /// 64 ms at 16 kHz, 50% overlap.
    fn default() -> Self {
        Self {
            window_len: 1024,
            overlap: 0.5,
            window: Window::Hann,
        }
    }
}

impl StftConfig {
    /// Window length from a duration in milliseconds, rounded to an even sample count.
    pub fn from_ms(window_ms: f64, overlap: f64, fs: u32) -> Result<Self> {
        let n = (window_ms * 1e-3 * fs as f64).round() as usize;
        let cfg = Self {
            window_len: n + n % 2,
            overlap,
            window: Window::Hann,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.window_len < 2 || self.window_len % 2 != 0 {
            return Err(Error::Config(format!("window length must be even and >= 2, got {}", self.window_len)));
        }
        if !(0.0..1.0).contains(&self.overlap) {
            return Err(Error::Config(format!("overlap must be in [0, 1), got {}", self.overlap)));
        }
        if self.hop() == 0 {
            return Err(Error::Config("overlap leaves a zero hop".into()));
        }
        Ok(())
    }

    pub fn hop(&self) -> usize {
        (self.window_len as f64 * (1.0 - self.overlap)).round() as usize
    }

    /// Number of positive-frequency bins `F = window_len / 2`.
    pub fn n_freqs(&self) -> usize {
        self.window_len / 2
    }

    /// Frame count for a signal of `len` samples.
    pub fn n_frames(&self, len: usize) -> usize {
        1 + len / self.hop()
    }

    /// Normalised frequency (cycles / sample) of each estimation row.
    pub fn frequencies(&self) -> Vec<f64> {
        bin_frequencies(self.window_len)
    }
}

/// Normalised frequencies `k / window_len` for `k = 1..=window_len/2`.
pub fn bin_frequencies(window_len: usize) -> Vec<f64> {
    (1..=window_len / 2).map(|k| k as f64 / window_len as f64).collect()
}

/// One-sided spectrogram with all `window_len/2 + 1` bins (DC through Nyquist).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    bins: Array2<C64>,
    cfg: StftConfig,
    signal_len: usize,
}

impl Spectrogram {
    pub fn bins(&self) -> &Array2<C64> {
        &self.bins
    }

    pub fn config(&self) -> &StftConfig {
        &self.cfg
    }

    pub fn signal_len(&self) -> usize {
        self.signal_len
    }

    pub fn n_frames(&self) -> usize {
        self.bins.ncols()
    }

    /// The `F x T` estimation rows, bins `1..=F` (DC dropped).
    pub fn positive_bins(&self) -> Array2<C64> {
        self.bins.slice(ndarray::s![1.., ..]).to_owned()
    }
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut planner = FftPlanner::new();
    if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    }
}

pub fn stft(x: &[f64], cfg: &StftConfig) -> Result<Spectrogram> {
    cfg.validate()?;
    let n = cfg.window_len;
    if x.len() < n {
        return Err(Error::TooShort { len: x.len(), needed: n });
    }
    let hop = cfg.hop();
    let half = n / 2;
    let frames = cfg.n_frames(x.len());
    let win = cfg.window.coefficients(n);
    let fft = plan(n, false);
    let mut bins = Array2::zeros((half + 1, frames));
    let mut buf = vec![C64::new(0.0, 0.0); n];
    for t in 0..frames {
        // Frame t covers original samples [t*hop - n/2, t*hop + n/2).
        let start = (t * hop) as isize - half as isize;
        for (i, b) in buf.iter_mut().enumerate() {
            let idx = start + i as isize;
            let v = if idx >= 0 && (idx as usize) < x.len() { x[idx as usize] } else { 0.0 };
            *b = C64::new(v * win[i], 0.0);
        }
        fft.process(&mut buf);
        for k in 0..=half {
            bins[[k, t]] = buf[k];
        }
    }
    Ok(Spectrogram { bins, cfg: *cfg, signal_len: x.len() })
}

/// Weighted overlap-add inverse of [`stft`]. Samples where the summed squared window
/// vanishes are returned as zero.
pub fn istft(spec: &Spectrogram) -> Vec<f64> {
    let cfg = spec.cfg;
    let n = cfg.window_len;
    let half = n / 2;
    let hop = cfg.hop();
    let win = cfg.window.coefficients(n);
    let ifft = plan(n, true);
    let len = spec.signal_len;
    let mut out = vec![0.0; len];
    let mut norm = vec![0.0; len];
    let mut buf = vec![C64::new(0.0, 0.0); n];
    for t in 0..spec.n_frames() {
        for k in 0..=half {
            buf[k] = spec.bins[[k, t]];
        }
        for k in 1..half {
            buf[n - k] = buf[k].conj();
        }
        ifft.process(&mut buf);
        let start = (t * hop) as isize - half as isize;
        for (i, b) in buf.iter().enumerate() {
            let idx = start + i as isize;
            if idx >= 0 && (idx as usize) < len {
                out[idx as usize] += b.re / n as f64 * win[i];
                norm[idx as usize] += win[i] * win[i];
            }
        }
    }
    for (o, w) in out.iter_mut().zip(&norm) {
        *o = if *w > 1e-12 { *o / w } else { 0.0 };
    }
    out
}

/// Binaural observations `m1, m2`, each `F x T` (rows are bins `1..=F`).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectroPair {
    pub m1: Array2<C64>,
    pub m2: Array2<C64>,
    pub fs: u32,
    pub hop: usize,
    pub window_len: usize,
}

impl SpectroPair {
    pub fn new(m1: Array2<C64>, m2: Array2<C64>, fs: u32, window_len: usize, hop: usize) -> Result<Self> {
        if m1.dim() != m2.dim() {
            return Err(Error::shape(format!("{:?}", m1.dim()), format!("{:?}", m2.dim())));
        }
        if m1.nrows() != window_len / 2 {
            return Err(Error::shape(format!("{} rows", window_len / 2), m1.nrows()));
        }
        if m1.ncols() == 0 {
            return Err(Error::Config("spectro pair needs at least one frame".into()));
        }
        Ok(Self { m1, m2, fs, hop, window_len })
    }

    pub fn from_stereo(ch1: &[f64], ch2: &[f64], fs: u32, cfg: &StftConfig) -> Result<Self> {
        if ch1.len() != ch2.len() {
            return Err(Error::shape(ch1.len(), ch2.len()));
        }
        let m1 = stft(ch1, cfg)?.positive_bins();
        let m2 = stft(ch2, cfg)?.positive_bins();
        Self::new(m1, m2, fs, cfg.window_len, cfg.hop())
    }

    pub fn n_freqs(&self) -> usize {
        self.m1.nrows()
    }

    pub fn n_frames(&self) -> usize {
        self.m1.ncols()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        bin_frequencies(self.window_len)
    }

    /// Mean of `|m1|^2` over all bins.
    pub fn mean_power_ch1(&self) -> f64 {
        self.m1.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.m1.len() as f64
    }
}

/// Channel 1 is `s`, channel 2 is `s` delayed by `tau` samples (advanced for negative
/// `tau`), zero-filled at the edges.
pub fn synth_delayed_pair(s: &[f64], tau: i64) -> Result<(Vec<f64>, Vec<f64>)> {
    if tau.unsigned_abs() as usize >= s.len() {
        return Err(Error::OutOfRange { what: "|tau| must be below the signal length", value: tau as f64 });
    }
    let n = s.len();
    let ch2 = (0..n)
        .map(|i| {
            let j = i as i64 - tau;
            if (0..n as i64).contains(&j) { s[j as usize] } else { 0.0 }
        })
        .collect();
    Ok((s.to_vec(), ch2))
}

/// Adds independent `CN2(0, R(f))` draws to every bin of row `f`.
pub fn corrupt_with_noise<R: Rng + ?Sized>(m: &SpectroPair, noise: &NoiseModel, rng: &mut R) -> Result<SpectroPair> {
    if noise.len() != m.n_freqs() {
        return Err(Error::shape(format!("{} noise covariances", m.n_freqs()), noise.len()));
    }
    let mut out = m.clone();
    let t_len = m.n_frames();
    for (f, cov) in noise.covs().iter().enumerate() {
        let draws = cgauss2_sample(&ComplexGauss2::centered(*cov), t_len, rng);
        for (t, [a, b]) in draws.into_iter().enumerate() {
            out.m1[[f, t]] += a;
            out.m2[[f, t]] += b;
        }
    }
    Ok(out)
}

/// Two-pole resonator `y[n] = x[n] + a1 y[n-1] + a2 y[n-2]` at `freq` Hz.
fn resonate(x: &[f64], freq: f64, bandwidth: f64, fs: f64) -> Vec<f64> {
    let r = (-PI * bandwidth / fs).exp();
    let a1 = 2.0 * r * (2.0 * PI * freq / fs).cos();
    let a2 = -r * r;
    let gain = 1.0 - r;
    let mut y = vec![0.0; x.len()];
    for i in 0..x.len() {
        let y1 = if i >= 1 { y[i - 1] } else { 0.0 };
        let y2 = if i >= 2 { y[i - 2] } else { 0.0 };
        y[i] = gain * x[i] + a1 * y1 + a2 * y2;
    }
    y
}

/// Speech-like test source: a glottal pulse train mixed with noise, shaped by a few
/// formant resonators, with high-band fricative onsets, gated by a syllabic (~4 Hz)
/// envelope with silent gaps. Output is normalised to unit peak.
pub fn synth_speechlike<R: Rng + ?Sized>(duration: f64, fs: u32, rng: &mut R) -> Result<Vec<f64>> {
    if !(duration > 0.0) {
        return Err(Error::OutOfRange { what: "duration must be > 0", value: duration });
    }
    let fsf = fs as f64;
    let n = (duration * fsf).round() as usize;
    let f0 = rng.random_range(90.0..220.0);
    let voicing: f64 = rng.random_range(0.4..0.9);
    let mut phase = 0.0;
    let excitation: Vec<f64> = (0..n)
        .map(|_| {
            phase += f0 / fsf;
            let pulse = if phase >= 1.0 {
                phase -= 1.0;
                1.0
            } else {
                0.0
            };
            let noise: f64 = StandardNormal.sample(rng);
            voicing * pulse * 4.0 + (1.0 - voicing) * 0.3 * noise
        })
        .collect();

    let formants = [
        (rng.random_range(300.0..800.0), 80.0),
        (rng.random_range(900.0..2200.0), 120.0),
        (rng.random_range(2300.0..3200.0), 180.0),
        (rng.random_range(3300.0..4500.0), 250.0),
    ];
    let mut voiced = vec![0.0; n];
    for (k, &(freq, bw)) in formants.iter().enumerate() {
        let weight = 1.0 / (1 + k) as f64;
        for (v, r) in voiced.iter_mut().zip(resonate(&excitation, freq, bw, fsf)) {
            *v += weight * r;
        }
    }

    // Fricative noise: broad high-band resonance, 6-12 dB below the voiced part.
    let hiss: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
    let mut fricative = resonate(&hiss, rng.random_range(4000.0..6500.0), 2500.0, fsf);
    let rms = |x: &[f64]| (x.iter().map(|v| v * v).sum::<f64>() / x.len().max(1) as f64).sqrt();
    let gain = rms(&voiced) / rms(&fricative).max(f64::MIN_POSITIVE) * 10f64.powf(-rng.random_range(6.0..12.0) / 20.0);
    fricative.iter_mut().for_each(|v| *v *= gain);

    // Syllables: raised-sine bursts of random length separated by short pauses, about
    // half of them led by a fricative onset.
    let mut out = vec![0.0; n];
    let mut t = rng.random_range(0.0..0.08) * fsf;
    while (t as usize) < n {
        let len = rng.random_range(0.10..0.22) * fsf;
        let amp = rng.random_range(0.3..1.0);
        let fric_len = if rng.random_bool(0.5) { rng.random_range(0.03..0.08) * fsf } else { 0.0 };
        let start = t as usize;
        let end = ((t + fric_len + len) as usize).min(n);
        for (i, o) in out[start..end].iter_mut().enumerate() {
            let i = i as f64;
            let j = start + i as usize;
            *o = if i < fric_len {
                amp * (PI * i / fric_len).sin() * fricative[j]
            } else {
                amp * (PI * (i - fric_len) / len).sin().powi(2) * voiced[j]
            };
        }
        t += fric_len + len + rng.random_range(0.04..0.12) * fsf;
    }

    let peak = out.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak > 0.0 {
        out.iter_mut().for_each(|v| *v /= peak);
    }
    Ok(out)
}
