//! Monte-Carlo harness for the two evaluation protocols:
//!
//! - **exp1**: per-trial random RTF, random noise covariance and random time-varying
//!   source variances on `T` synthetic bins; RTF squared error of RBR-EM against the
//!   mean-ratio, mean-ILD/IPD and random baselines.
//! - **exp2**: a 1 s source delayed by a random integer number of samples, STFT,
//!   frequency-domain stationary noise; delay error (0/1) of RBR grid selection
//!   against PHAT-histogram.
//!
//! SNR is the average per-bin source power over the average noise power at
//! microphone 1. Every trial draws from its own ChaCha stream derived from
//! `(seed, cell, trial)`, so results do not depend on thread scheduling.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use ndarray::Array1;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::baseline::{mean_ild_ipd, mean_ratio, phat_histogram_tdoa, random_rtf, PhatConfig};
use crate::cstat::{standard_cnormal, HermitianCov2};
use crate::estimate::{em_rtf_frequency, grid_select, tdoa_grid, EmConfig};
use crate::rbr::{extract_rbr, RbrOptions};
use crate::signal::{corrupt_with_noise, synth_delayed_pair, synth_speechlike, SpectroPair, StftConfig};
use crate::wav::read_wav;
use crate::whiten::{build_whitener, dewhiten_rtf, whiten_obs, whiten_rtf, NoiseModel, DEFAULT_RANK_TOL};
use crate::{Error, Result, C64};

/// Noise scale standing in for an infinite SNR.
pub const NOISE_FREE_SCALE: f64 = 1e-12;

/// SNR in dB; `inf` means noise-free. Serialised as a number or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrDb(pub f64);

impl SnrDb {
    pub fn is_noise_free(self) -> bool {
        self.0 == f64::INFINITY
    }

    /// Linear power ratio.
    pub fn linear(self) -> f64 {
        10f64.powf(self.0 / 10.0)
    }
}

impl fmt::Display for SnrDb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for SnrDb {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_noise_free() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for SnrDb {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) if v.is_finite() => Ok(SnrDb(v)),
            Raw::Text(t) if matches!(t.as_str(), "inf" | "+inf" | "Infinity") => Ok(SnrDb(f64::INFINITY)),
            _ => Err(serde::de::Error::custom("snr must be a finite number or \"inf\"")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sparsity {
    Dense,
    /// Source variance zeroed with probability 1/2.
    Sparse,
}

/// Ranges for random noise covariances: variances uniform on `variance`, correlation
/// magnitude uniform on `[0, max_correlation]` with uniform phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseRanges {
    pub variance: (f64, f64),
    pub max_correlation: f64,
}

impl Default for NoiseRanges {
    fn default() -> Self {
        Self { variance: (0.5, 2.0), max_correlation: 0.95 }
    }
}

impl NoiseRanges {
    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.variance;
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return Err(Error::Config(format!("noise variance range must satisfy 0 < lo <= hi, got {lo}..{hi}")));
        }
        if !(0.0..1.0).contains(&self.max_correlation) {
            return Err(Error::Config("max_correlation must be in [0, 1)".into()));
        }
        Ok(())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> HermitianCov2 {
        let (lo, hi) = self.variance;
        let mut var = || if hi > lo { rng.random_range(lo..hi) } else { lo };
        let (v11, v22) = (var(), var());
        let rho = C64::from_polar(rng.random_range(0.0..=self.max_correlation), rng.random_range(0.0..2.0 * PI));
        HermitianCov2::from_correlation(v11.sqrt(), v22.sqrt(), rho).expect("|rho| < 1 is PSD")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Exp1Config {
    pub trials_per_cell: usize,
    #[serde(rename = "T", alias = "t")]
    pub t: usize,
    pub snr_grid: Vec<SnrDb>,
    pub sparsity: Sparsity,
    pub seed: u64,
    pub noise: NoiseRanges,
    pub em: EmSettings,
    /// Wall-clock runtimes make output non-reproducible, so they are opt-in.
    pub record_runtime: bool,
}

impl Default for Exp1Config {
    fn default() -> Self {
        Self {
            trials_per_cell: 1000,
            t: 20,
            snr_grid: [-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0].map(SnrDb).to_vec(),
            sparsity: Sparsity::Dense,
            seed: 0,
            noise: NoiseRanges::default(),
            em: EmSettings::default(),
            record_runtime: false,
        }
    }
}

/// Serialisable subset of [`EmConfig`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmSettings {
    pub max_iters: usize,
    pub rel_tol: f64,
}

impl Default for EmSettings {
    fn default() -> Self {
        let d = EmConfig::default();
        Self { max_iters: d.max_iters, rel_tol: d.rel_tol }
    }
}

impl From<EmSettings> for EmConfig {
    fn from(s: EmSettings) -> Self {
        EmConfig { max_iters: s.max_iters, rel_tol: s.rel_tol, ..EmConfig::default() }
    }
}

impl Exp1Config {
    pub fn validate(&self) -> Result<()> {
        if self.trials_per_cell < 1 || self.t < 1 {
            return Err(Error::Config("trials_per_cell and T must be >= 1".into()));
        }
        if self.snr_grid.is_empty() {
            return Err(Error::Config("snr_grid is empty".into()));
        }
        self.noise.validate()?;
        EmConfig::from(self.em).validate()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Source-variance ceiling giving the requested average SNR at mic 1 for noise
    /// variance `v11`: the mean of `U[0, c]` is `c/2`, halved again when sparse.
    pub fn source_ceiling(&self, snr: SnrDb, v11: f64) -> f64 {
        let lin = if snr.is_noise_free() { 1.0 } else { snr.linear() };
        let k = match self.sparsity {
            Sparsity::Dense => 2.0,
            Sparsity::Sparse => 4.0,
        };
        k * lin * v11
    }

    fn experiment_id(&self, domain: &str) -> String {
        let s = match self.sparsity {
            Sparsity::Dense => "dense",
            Sparsity::Sparse => "sparse",
        };
        format!("exp1-{s}-{domain}")
    }
}

/// Source material for exp2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceSpec {
    Synthetic,
    /// Directory of mono 16-bit WAV files at the configured sample rate.
    WavDir(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Exp2Config {
    pub trials_per_snr: usize,
    pub snr_grid: Vec<SnrDb>,
    pub tau_max: u32,
    pub duration: f64,
    pub fs: u32,
    pub window_ms: f64,
    pub overlap: f64,
    pub source: SourceSpec,
    pub seed: u64,
    pub noise: NoiseRanges,
    pub record_runtime: bool,
}

impl Default for Exp2Config {
    fn default() -> Self {
        Self {
            trials_per_snr: 200,
            snr_grid: [-12.0, -9.0, -6.0, -3.0, 0.0, 3.0, 6.0].map(SnrDb).to_vec(),
            tau_max: 20,
            duration: 1.0,
            fs: 16_000,
            window_ms: 64.0,
            overlap: 0.5,
            source: SourceSpec::Synthetic,
            seed: 0,
            noise: NoiseRanges::default(),
            record_runtime: false,
        }
    }
}

impl Exp2Config {
    pub fn validate(&self) -> Result<()> {
        if self.trials_per_snr < 1 || self.tau_max < 1 {
            return Err(Error::Config("trials_per_snr and tau_max must be >= 1".into()));
        }
        if self.snr_grid.is_empty() {
            return Err(Error::Config("snr_grid is empty".into()));
        }
        if !(self.duration > 0.0) {
            return Err(Error::Config("duration must be > 0".into()));
        }
        self.noise.validate()?;
        self.stft()?;
        Ok(())
    }

    pub fn stft(&self) -> Result<StftConfig> {
        StftConfig::from_ms(self.window_ms, self.overlap, self.fs)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub experiment: String,
    pub snr_db: SnrDb,
    pub method: String,
    pub trial: usize,
    /// Squared RTF error (exp1) or 1 for a wrong delay (exp2).
    pub error: f64,
    pub runtime_ms: Option<f64>,
    pub seed: u64,
}

fn trial_rng(seed: u64, cell: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((cell as u64) << 32) | trial as u64);
    rng
}

/// One synthetic exp1 trial before estimation.
#[derive(Debug, Clone)]
pub struct Exp1Trial {
    pub cov: HermitianCov2,
    pub r: C64,
    /// Source variance per bin.
    pub sigma_s2: Array1<f64>,
    /// Source sample per bin.
    pub s: Vec<C64>,
    pub m: Vec<[C64; 2]>,
}

impl Exp1Trial {
    /// Realised SNR at mic 1 relative to the (unscaled) noise variance.
    pub fn source_power(&self) -> f64 {
        self.s.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.s.len() as f64
    }
}

/// Draws one exp1 trial: observation `m = [1, r] s + n`.
pub fn exp1_trial<R: Rng + ?Sized>(cfg: &Exp1Config, snr: SnrDb, rng: &mut R) -> Exp1Trial {
    let base = cfg.noise.sample(rng);
    let r = standard_cnormal(rng);
    let ceiling = cfg.source_ceiling(snr, base.v11());
    let sigma_s2 = Array1::from_shape_fn(cfg.t, |_| {
        let v = rng.random_range(0.0..ceiling);
        match cfg.sparsity {
            Sparsity::Sparse if rng.random_bool(0.5) => 0.0,
            _ => v,
        }
    });
    let cov = if snr.is_noise_free() { base.scaled(NOISE_FREE_SCALE).expect("positive scale") } else { base };
    let noise = crate::cstat::cgauss2_sample(&crate::cstat::ComplexGauss2::centered(cov), cfg.t, rng);
    let s: Vec<C64> = sigma_s2.iter().map(|&v| standard_cnormal(rng) * v.sqrt()).collect();
    let m = s.iter().zip(noise).map(|(&s, [n1, n2])| [s + n1, r * s + n2]).collect();
    Exp1Trial { cov, r, sigma_s2, s, m }
}

fn timed<T>(on: bool, f: impl FnOnce() -> T) -> (T, Option<f64>) {
    if on {
        let t0 = Instant::now();
        let v = f();
        (v, Some(t0.elapsed().as_secs_f64() * 1e3))
    } else {
        (f(), None)
    }
}

fn run_exp1_trial(cfg: &Exp1Config, snr: SnrDb, trial: usize, rng: &mut ChaCha8Rng) -> Result<Vec<TrialRecord>> {
    let data = exp1_trial(cfg, snr, rng);
    let w = build_whitener(&data.cov, DEFAULT_RANK_TOL)?;
    let r_white = whiten_rtf(&w, data.r)?;
    let (m1, m2): (Vec<C64>, Vec<C64>) = data.m.iter().map(|&[a, b]| (a, b)).unzip();
    let (w1, w2): (Vec<C64>, Vec<C64>) = data.m.iter().map(|&m| whiten_obs(&w, m)).map(|[a, b]| (a, b)).unzip();

    let em_cfg = EmConfig::from(cfg.em);
    let (rbr, rbr_ms) = timed(cfg.record_runtime, || -> Result<_> {
        let a = ndarray::Array2::from_shape_vec((1, cfg.t), w1.clone()).expect("shape");
        let b = ndarray::Array2::from_shape_vec((1, cfg.t), w2.clone()).expect("shape");
        let field = extract_rbr(&a, &b, &[w.kind()], RbrOptions::default())?;
        let missing: Vec<bool> = field.missing().row(0).to_vec();
        let y = field.y().row(0).to_vec();
        let spread = field.spread().row(0).to_vec();
        let est = em_rtf_frequency(&y, &spread, &missing, &em_cfg, rng)?;
        Ok((est.r_prime, dewhiten_rtf(&w, est.r_prime)?, missing))
    });
    let (rbr_white, rbr_raw, missing) = rbr?;

    let mut out = Vec::new();
    let mut push = |domain: &str, method: &str, est: Option<C64>, truth: C64, ms: Option<f64>| {
        if let Some(e) = est {
            out.push(TrialRecord {
                experiment: cfg.experiment_id(domain),
                snr_db: snr,
                method: method.into(),
                trial,
                error: (e - truth).norm_sqr(),
                runtime_ms: ms,
                seed: cfg.seed,
            });
        }
    };
    let random = random_rtf(rng);
    push("whitened", "rbr", Some(rbr_white), r_white, rbr_ms);
    push("whitened", "mean_ratio", mean_ratio(&w1, &w2, &missing), r_white, None);
    push("whitened", "mean_ild_ipd", mean_ild_ipd(&w1, &w2, &missing), r_white, None);
    push("whitened", "random", Some(random), r_white, None);
    push("raw", "rbr", Some(rbr_raw), data.r, rbr_ms);
    push("raw", "mean_ratio", mean_ratio(&m1, &m2, &missing), data.r, None);
    push("raw", "mean_ild_ipd", mean_ild_ipd(&m1, &m2, &missing), data.r, None);
    push("raw", "random", Some(random), data.r, None);
    Ok(out)
}

/// Runs every `(snr, trial)` cell of exp1. Trials whose bins are all missing, or whose
/// estimate cannot be mapped back, are skipped with a log message.
pub fn run_exp1(cfg: &Exp1Config) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let jobs: Vec<(usize, usize)> = (0..cfg.snr_grid.len())
        .flat_map(|c| (0..cfg.trials_per_cell).map(move |t| (c, t)))
        .collect();
    let per_trial: Vec<Vec<TrialRecord>> = jobs
        .par_iter()
        .map(|&(cell, trial)| {
            let snr = cfg.snr_grid[cell];
            let mut rng = trial_rng(cfg.seed, cell, trial);
            run_exp1_trial(cfg, snr, trial, &mut rng).unwrap_or_else(|e| {
                log::info!("exp1 snr {snr} trial {trial} skipped: {e}");
                Vec::new()
            })
        })
        .collect();
    Ok(per_trial.into_iter().flatten().collect())
}

/// Random per-frequency noise covariances scaled so that the mean mic-1 noise variance
/// sits `snr` below `signal_power`.
pub fn calibrated_noise<R: Rng + ?Sized>(
    ranges: &NoiseRanges,
    n_freqs: usize,
    signal_power: f64,
    snr: SnrDb,
    rng: &mut R,
) -> Result<NoiseModel> {
    let raw = NoiseModel::new((0..n_freqs).map(|_| ranges.sample(rng)).collect());
    let mean_v11 = raw.covs().iter().map(|c| c.v11()).sum::<f64>() / n_freqs as f64;
    let target = if snr.is_noise_free() { signal_power * NOISE_FREE_SCALE } else { signal_power / snr.linear() };
    if !(target > 0.0) {
        return Err(Error::Domain("source has no energy; SNR is undefined".into()));
    }
    raw.scaled(target / mean_v11)
}

fn list_wavs(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("wav")))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::Config(format!("no .wav files in {}", dir.display())));
    }
    Ok(files)
}

fn exp2_source<R: Rng + ?Sized>(cfg: &Exp2Config, wavs: &[PathBuf], rng: &mut R) -> Result<Vec<f64>> {
    match &cfg.source {
        SourceSpec::Synthetic => synth_speechlike(cfg.duration, cfg.fs, rng),
        SourceSpec::WavDir(_) => {
            let path = &wavs[rng.random_range(0..wavs.len())];
            let audio = read_wav(path)?;
            if audio.sample_rate != cfg.fs || audio.n_channels() != 1 {
                return Err(Error::Wav(format!("{}: need mono at {} Hz", path.display(), cfg.fs)));
            }
            let n = (cfg.duration * cfg.fs as f64).round() as usize;
            let x = audio.channel_f64(0).expect("one channel");
            if x.len() < n {
                return Err(Error::TooShort { len: x.len(), needed: n });
            }
            let start = rng.random_range(0..=x.len() - n);
            Ok(x[start..start + n].to_vec())
        }
    }
}

/// Estimated delays of one exp2 trial: `(tau_true, rbr, phat)`.
pub fn exp2_trial<R: Rng + ?Sized>(
    cfg: &Exp2Config,
    snr: SnrDb,
    wavs: &[PathBuf],
    rng: &mut R,
    runtime: bool,
) -> Result<(i64, (i64, Option<f64>), (i64, Option<f64>))> {
    let stft_cfg = cfg.stft()?;
    let s = exp2_source(cfg, wavs, rng)?;
    let tm = cfg.tau_max as i64;
    let tau = rng.random_range(-tm..=tm);
    let (a, b) = synth_delayed_pair(&s, tau)?;
    let clean = SpectroPair::from_stereo(&a, &b, cfg.fs, &stft_cfg)?;
    let noise = calibrated_noise(&cfg.noise, clean.n_freqs(), clean.mean_power_ch1(), snr, rng)?;
    let pair = corrupt_with_noise(&clean, &noise, rng)?;

    let (rbr, rbr_ms) = timed(runtime, || -> Result<i64> {
        let ws = noise.whiteners(DEFAULT_RANK_TOL)?;
        let (m1p, m2p) = crate::whiten::whiten_spectra(&pair.m1, &pair.m2, &ws)?;
        let kinds: Vec<_> = ws.iter().map(|w| w.kind()).collect();
        let field = extract_rbr(&m1p, &m2p, &kinds, RbrOptions::default())?;
        let grid = tdoa_grid(cfg.tau_max, &pair.frequencies(), &ws)?;
        Ok(grid_select(&field, &grid)?.label as i64)
    });
    let (phat, phat_ms) = timed(runtime, || phat_histogram_tdoa(&pair, &PhatConfig::new(cfg.tau_max)?));
    Ok((tau, (rbr?, rbr_ms), (phat?, phat_ms)))
}

pub fn run_exp2(cfg: &Exp2Config) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let wavs = match &cfg.source {
        SourceSpec::Synthetic => Vec::new(),
        SourceSpec::WavDir(dir) => list_wavs(dir)?,
    };
    let jobs: Vec<(usize, usize)> = (0..cfg.snr_grid.len())
        .flat_map(|c| (0..cfg.trials_per_snr).map(move |t| (c, t)))
        .collect();
    let per_trial: Vec<Vec<TrialRecord>> = jobs
        .par_iter()
        .map(|&(cell, trial)| {
            let snr = cfg.snr_grid[cell];
            let mut rng = trial_rng(cfg.seed, cell, trial);
            match exp2_trial(cfg, snr, &wavs, &mut rng, cfg.record_runtime) {
                Ok((tau, rbr, phat)) => [("rbr", rbr), ("phat_histogram", phat)]
                    .into_iter()
                    .map(|(method, (est, ms))| TrialRecord {
                        experiment: "exp2".into(),
                        snr_db: snr,
                        method: method.into(),
                        trial,
                        error: f64::from(u8::from(est != tau)),
                        runtime_ms: ms,
                        seed: cfg.seed,
                    })
                    .collect(),
                Err(e) => {
                    log::info!("exp2 snr {snr} trial {trial} skipped: {e}");
                    Vec::new()
                }
            }
        })
        .collect();
    Ok(per_trial.into_iter().flatten().collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub experiment: String,
    pub snr_db: SnrDb,
    pub method: String,
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

pub const BOOTSTRAP_RESAMPLES: usize = 1000;

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Percentile bootstrap 95% interval of the mean.
pub fn bootstrap_ci<R: Rng + ?Sized>(values: &[f64], resamples: usize, rng: &mut R) -> (f64, f64) {
    let n = values.len();
    let mut means: Vec<f64> = (0..resamples)
        .map(|_| (0..n).map(|_| values[rng.random_range(0..n)]).sum::<f64>() / n as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    let at = |q: f64| means[((q * (resamples - 1) as f64).round() as usize).min(resamples - 1)];
    (at(0.025), at(0.975))
}

/// Per-(experiment, snr, method) aggregates in first-appearance order.
pub fn summarize(records: &[TrialRecord], seed: u64) -> Vec<SummaryRow> {
    let mut keys: Vec<(String, SnrDb, String)> = Vec::new();
    let mut groups: Vec<Vec<f64>> = Vec::new();
    for r in records {
        let key = (r.experiment.clone(), r.snr_db, r.method.clone());
        match keys.iter().position(|k| *k == key) {
            Some(i) => groups[i].push(r.error),
            None => {
                keys.push(key);
                groups.push(vec![r.error]);
            }
        }
    }
    keys.into_iter()
        .zip(groups)
        .enumerate()
        .map(|(i, ((experiment, snr_db, method), mut v))| {
            let mut rng = trial_rng(seed, usize::MAX >> 32, i);
            let (ci_lo, ci_hi) = bootstrap_ci(&v, BOOTSTRAP_RESAMPLES, &mut rng);
            let mean = v.iter().sum::<f64>() / v.len() as f64;
            v.sort_by(f64::total_cmp);
            SummaryRow { experiment, snr_db, method, n: v.len(), mean, median: median(&v), ci_lo, ci_hi }
        })
        .collect()
}

pub fn write_records_csv<W: Write>(records: &[TrialRecord], mut out: W) -> Result<()> {
    writeln!(out, "experiment,snr_db,method,trial,error,runtime_ms,seed")?;
    for r in records {
        let ms = r.runtime_ms.map(|v| format!("{v:.3}")).unwrap_or_default();
        writeln!(out, "{},{},{},{},{},{},{}", r.experiment, r.snr_db, r.method, r.trial, r.error, ms, r.seed)?;
    }
    Ok(())
}

pub fn write_summary_csv<W: Write>(rows: &[SummaryRow], mut out: W) -> Result<()> {
    writeln!(out, "experiment,snr_db,method,n,mean,median,ci_lo,ci_hi")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.experiment, r.snr_db, r.method, r.n, r.mean, r.median, r.ci_lo, r.ci_hi
        )?;
    }
    Ok(())
}

/// Looks up a summary cell.
pub fn cell<'a>(rows: &'a [SummaryRow], experiment: &str, snr: f64, method: &str) -> Option<&'a SummaryRow> {
    rows.iter().find(|r| r.experiment == experiment && r.snr_db.0 == snr && r.method == method)
}
