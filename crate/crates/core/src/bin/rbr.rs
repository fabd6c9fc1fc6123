//! `rbr` command-line front end.
//!
//! Exit codes: 0 success, 1 estimation failure (e.g. every bin missing), 2 usage or I/O
//! error.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rbrloc::bench::{self, Exp1Config, Exp2Config, TrialRecord};
use rbrloc::cstat::{verify_theorem1, HermitianCov2};
use rbrloc::estimate::{estimate_rtf, grid_select, tdoa_grid, tdoa_to_azimuth, EmConfig};
use rbrloc::rbr::{extract_rbr, RbrOptions};
use rbrloc::signal::{SpectroPair, StftConfig};
use rbrloc::wav::read_wav;
use rbrloc::whiten::{whiten_spectra, NoiseModel, DEFAULT_RANK_TOL};
use rbrloc::{Error, C64};

#[derive(Parser)]
#[command(name = "rbr", version, about = "Robust binaural RTF / TDOA estimation with rectified binaural ratios")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Per-frequency RTF estimates from a stereo WAV (CSV).
    EstimateRtf {
        #[command(flatten)]
        io: InputArgs,
        /// Output CSV (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integer TDOA by likelihood scoring of the free-field delay grid.
    EstimateTdoa {
        #[command(flatten)]
        io: InputArgs,
        #[arg(long, default_value_t = 20)]
        tau_max: u32,
        /// Microphone spacing in metres; enables the azimuth output.
        #[arg(long)]
        d: Option<f64>,
        /// Sample rate used for the azimuth (defaults to the WAV rate).
        #[arg(long)]
        fs: Option<f64>,
        /// Speed of sound in m/s.
        #[arg(long, default_value_t = 343.0)]
        c: f64,
        /// Write per-delay scores as CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// RTF mean-squared-error experiment; writes results.csv and summary.csv.
    BenchExp1(BenchArgs),
    /// TDOA error-rate experiment; writes results.csv and summary.csv.
    BenchExp2(BenchArgs),
    /// Kolmogorov-Smirnov check of the ratio law on random covariances.
    VerifyTheorem1 {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random covariances.
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Samples per covariance.
        #[arg(long, default_value_t = 100_000)]
        n: usize,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Stereo 16-bit PCM WAV.
    #[arg(long)]
    input: PathBuf,
    /// Per-frequency noise covariances (JSON list of {v11, v22, re_c12, im_c12}).
    #[arg(long, required_unless_present = "white", conflicts_with = "white")]
    noise_model: Option<PathBuf>,
    /// Estimate white noise per frequency from a noise-only interval `start_s,end_s`.
    #[arg(long, value_parser = parse_interval)]
    white: Option<(f64, f64)>,
    #[arg(long, default_value_t = 64.0)]
    window_ms: f64,
    #[arg(long, default_value_t = 0.5)]
    overlap: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BenchArgs {
    /// JSON config; defaults apply to omitted fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn parse_interval(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected start_s,end_s")?;
    let a: f64 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if !(0.0 <= a && a < b) {
        return Err("need 0 <= start < end".into());
    }
    Ok((a, b))
}

/// Command failure with the exit code it maps to.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) | Error::Json(_) | Error::Config(_) | Error::Wav(_) | Error::ShapeMismatch { .. } | Error::TooShort { .. } => 2,
            _ => 1,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn io_context(path: &Path) -> impl FnOnce(Error) -> Failure + '_ {
    move |e| {
        let mut f = Failure::from(e);
        f.msg = format!("{}: {}", path.display(), f.msg);
        f
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| io_context(p)(e.into()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

struct Prepared {
    pair: SpectroPair,
    noise: NoiseModel,
}

/// Per-frequency `sigma^2 I` from the frames centred inside `[start, end]` seconds.
fn white_noise_model(pair: &SpectroPair, (start, end): (f64, f64)) -> Result<NoiseModel, Failure> {
    let frames: Vec<usize> = (0..pair.n_frames())
        .filter(|&t| (start..=end).contains(&((t * pair.hop) as f64 / pair.fs as f64)))
        .collect();
    if frames.is_empty() {
        return Err(usage(format!("--white {start},{end}: no analysis frame inside the interval")));
    }
    let covs = (0..pair.n_freqs())
        .map(|f| {
            let p: f64 = frames.iter().map(|&t| pair.m1[[f, t]].norm_sqr() + pair.m2[[f, t]].norm_sqr()).sum();
            let v = p / (2 * frames.len()) as f64;
            HermitianCov2::diag(v, v)
        })
        .collect();
    Ok(NoiseModel::new(covs))
}

fn prepare(io: &InputArgs) -> Result<Prepared, Failure> {
    let audio = read_wav(&io.input).map_err(io_context(&io.input))?;
    if audio.n_channels() != 2 {
        return Err(usage(format!("{}: need a stereo file, found {} channel(s)", io.input.display(), audio.n_channels())));
    }
    let cfg = StftConfig::from_ms(io.window_ms, io.overlap, audio.sample_rate)?;
    let (a, b) = (audio.channel_f64(0).unwrap(), audio.channel_f64(1).unwrap());
    let pair = SpectroPair::from_stereo(&a, &b, audio.sample_rate, &cfg)?;
    let noise = match (&io.noise_model, io.white) {
        (Some(p), _) => NoiseModel::read(p).map_err(io_context(p))?,
        (None, Some(iv)) => white_noise_model(&pair, iv)?,
        (None, None) => return Err(usage("one of --noise-model or --white is required")),
    };
    if noise.len() != pair.n_freqs() {
        return Err(usage(format!(
            "noise model has {} frequencies, the STFT has {}",
            noise.len(),
            pair.n_freqs()
        )));
    }
    Ok(Prepared { pair, noise })
}

fn rbr_field(p: &Prepared) -> Result<(rbrloc::rbr::RbrField, Vec<rbrloc::whiten::Whitener>), Failure> {
    let ws = p.noise.whiteners(DEFAULT_RANK_TOL)?;
    let (m1p, m2p) = whiten_spectra(&p.pair.m1, &p.pair.m2, &ws)?;
    let kinds: Vec<_> = ws.iter().map(|w| w.kind()).collect();
    Ok((extract_rbr(&m1p, &m2p, &kinds, RbrOptions::default())?, ws))
}

fn cmd_estimate_rtf(io: &InputArgs, out: Option<&Path>) -> Result<(), Failure> {
    let p = prepare(io)?;
    let (field, ws) = rbr_field(&p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(io.seed);
    let est = estimate_rtf(&field, &ws, &EmConfig::default(), &mut rng)?;
    if est.r_prime.iter().all(Option::is_none) {
        return Err(Error::AllMissing.into());
    }
    let mut w = output(out)?;
    est.write_csv(&mut w)?;
    w.flush().map_err(Error::from)?;
    Ok(())
}

fn cmd_estimate_tdoa(
    io: &InputArgs,
    tau_max: u32,
    geometry: (Option<f64>, Option<f64>, f64),
    out: Option<&Path>,
) -> Result<(), Failure> {
    let p = prepare(io)?;
    let (field, ws) = rbr_field(&p)?;
    let grid = tdoa_grid(tau_max, &p.pair.frequencies(), &ws)?;
    let sel = grid_select(&field, &grid)?;
    let mut report = serde_json::json!({ "tau": sel.label });
    if let (Some(d), fs, c) = geometry {
        let fs = fs.unwrap_or(p.pair.fs as f64);
        report["azimuth_deg"] = tdoa_to_azimuth(sel.label, d, fs, c)?.into();
    }
    println!("{report}");
    if let Some(path) = out {
        let mut w = output(Some(path))?;
        sel.write_csv(grid.labels(), &mut w)?;
        w.flush().map_err(Error::from)?;
    }
    Ok(())
}

fn load_config<T: serde::de::DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, Failure> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| io_context(p)(e.into()))?;
            serde_json::from_str(&text).map_err(|e| io_context(p)(e.into()))
        }
    }
}

fn write_bench(records: &[TrialRecord], seed: u64, dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| io_context(dir)(e.into()))?;
    let results = dir.join("results.csv");
    let summary = dir.join("summary.csv");
    let mut w = output(Some(&results))?;
    bench::write_records_csv(records, &mut w)?;
    w.flush().map_err(Error::from)?;
    let mut w = output(Some(&summary))?;
    bench::write_summary_csv(&bench::summarize(records, seed), &mut w)?;
    w.flush().map_err(Error::from)?;
    eprintln!("wrote {} and {}", results.display(), summary.display());
    Ok(())
}

fn cmd_bench_exp1(args: &BenchArgs) -> Result<(), Failure> {
    let mut cfg: Exp1Config = load_config(args.config.as_deref())?;
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    let records = bench::run_exp1(&cfg)?;
    write_bench(&records, cfg.seed, &args.out)
}

fn cmd_bench_exp2(args: &BenchArgs) -> Result<(), Failure> {
    let mut cfg: Exp2Config = load_config(args.config.as_deref())?;
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    let records = bench::run_exp2(&cfg)?;
    write_bench(&records, cfg.seed, &args.out)
}

fn cmd_verify_theorem1(seed: u64, trials: usize, n: usize) -> Result<(), Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ranges = bench::NoiseRanges::default();
    println!("trial,v11,v22,re_c12,im_c12,ks");
    let mut worst: f64 = 0.0;
    for i in 0..trials {
        let cov = ranges.sample(&mut rng);
        let ks = verify_theorem1(&cov, n, &mut rng)?;
        worst = worst.max(ks);
        let c: C64 = cov.c12();
        println!("{i},{},{},{},{},{ks}", cov.v11(), cov.v22(), c.re, c.im);
    }
    eprintln!("max KS statistic {worst:.4} over {trials} covariances ({n} samples each)");
    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::EstimateRtf { io, out } => cmd_estimate_rtf(io, out.as_deref()),
        Cmd::EstimateTdoa { io, tau_max, d, fs, c, out } => cmd_estimate_tdoa(io, *tau_max, (*d, *fs, *c), out.as_deref()),
        Cmd::BenchExp1(a) => cmd_bench_exp1(a),
        Cmd::BenchExp2(a) => cmd_bench_exp2(a),
        Cmd::VerifyTheorem1 { seed, trials, n } => cmd_verify_theorem1(*seed, *trials, *n),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
