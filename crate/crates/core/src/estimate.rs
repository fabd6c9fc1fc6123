//! RTF estimation from rectified ratios.
//!
//! Each rectified ratio is complex-t with one degree of freedom around the whitened RTF
//! `r'`, i.e. a Gaussian scale mixture. EM on the mixing variables gives an iteratively
//! reweighted mean:
//!
//! ```text
//! M: r' = sum_t w_t y_t / sum_t w_t
//! E: w_t = 1 / (spread_t + |y_t - r'|^2)
//! ```
//!
//! For a finite candidate set the maximum-likelihood candidate minimises
//! `sum_{f,t} ln(spread + |y - r'_k(f)|^2)` ([`grid_select`]).

use std::f64::consts::PI;
use std::io::Write;

use ndarray::Array2;
use rand::Rng;
use rayon::prelude::*;

use crate::rbr::RbrField;
use crate::whiten::{dewhiten_rtf, whiten_rtf, Whitener};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitWeights {
    /// All initial weights equal to one.
    #[default]
    Uniform,
    /// Initial weights uniform on `(0, 1]`.
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmConfig {
    pub max_iters: usize,
    /// Stop once `|r'_new - r'_old| < rel_tol * |r'_new|`.
    pub rel_tol: f64,
    pub init_weights: InitWeights,
}

impl Default for EmConfig {
    fn default() -> Self {
        Self {
            max_iters: 500,
            rel_tol: 1e-3,
            init_weights: InitWeights::Uniform,
        }
    }
}

impl EmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::Config("max_iters must be >= 1".into()));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::Config(format!("rel_tol must be in (0, 1), got {}", self.rel_tol)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmOutcome {
    pub r_prime: C64,
    pub iters: usize,
    pub converged: bool,
}

/// Complex-t (one degree of freedom) log-likelihood of the non-missing bins of a row
/// at location `r`.
pub fn t_log_likelihood(y: &[C64], spread: &[f64], missing: &[bool], r: C64) -> f64 {
    y.iter()
        .zip(spread)
        .zip(missing)
        .filter(|(_, &m)| !m)
        .map(|((&y, &s), _)| -PI.ln() - s.ln() - 2.0 * ((y - r).norm_sqr() / s).ln_1p())
        .sum()
}

fn check_row(y: &[C64], spread: &[f64], missing: &[bool]) -> Result<()> {
    if y.len() != spread.len() || y.len() != missing.len() {
        return Err(Error::shape(
            format!("{} spreads and mask entries", y.len()),
            format!("{} / {}", spread.len(), missing.len()),
        ));
    }
    if missing.iter().all(|&m| m) {
        return Err(Error::AllMissing);
    }
    Ok(())
}

fn run_em<R: Rng + ?Sized>(
    y: &[C64],
    spread: &[f64],
    missing: &[bool],
    cfg: &EmConfig,
    rng: &mut R,
    mut trace: Option<&mut Vec<f64>>,
) -> Result<EmOutcome> {
    cfg.validate()?;
    check_row(y, spread, missing)?;
    let mut w: Vec<f64> = missing
        .iter()
        .map(|&m| match (m, cfg.init_weights) {
            (true, _) => 0.0,
            (false, InitWeights::Uniform) => 1.0,
            (false, InitWeights::Random) => 1.0 - rng.random::<f64>(),
        })
        .collect();
    let mut prev: Option<C64> = None;
    let mut r = C64::new(0.0, 0.0);
    for it in 1..=cfg.max_iters {
        let (num, den) = y
            .iter()
            .zip(&w)
            .fold((C64::new(0.0, 0.0), 0.0), |(n, d), (&y, &w)| (n + y * w, d + w));
        r = num / den;
        if let Some(t) = trace.as_deref_mut() {
            t.push(t_log_likelihood(y, spread, missing, r));
        }
        if let Some(p) = prev {
            let step = (r - p).norm();
            if step < cfg.rel_tol * r.norm() || step == 0.0 {
                return Ok(EmOutcome { r_prime: r, iters: it, converged: true });
            }
        }
        prev = Some(r);
        for ((wt, (&yt, &st)), &m) in w.iter_mut().zip(y.iter().zip(spread)).zip(missing) {
            *wt = if m { 0.0 } else { 1.0 / (st + (yt - r).norm_sqr()).max(f64::MIN_POSITIVE) };
        }
    }
    Ok(EmOutcome { r_prime: r, iters: cfg.max_iters, converged: false })
}

/// EM estimate of the whitened RTF at one frequency from its row of rectified ratios.
/// Missing bins carry zero weight.
pub fn em_rtf_frequency<R: Rng + ?Sized>(
    y: &[C64],
    spread: &[f64],
    missing: &[bool],
    cfg: &EmConfig,
    rng: &mut R,
) -> Result<EmOutcome> {
    run_em(y, spread, missing, cfg, rng, None)
}

/// Same as [`em_rtf_frequency`], also returning the log-likelihood after every M-step.
pub fn em_rtf_trace<R: Rng + ?Sized>(
    y: &[C64],
    spread: &[f64],
    missing: &[bool],
    cfg: &EmConfig,
    rng: &mut R,
) -> Result<(EmOutcome, Vec<f64>)> {
    let mut trace = Vec::new();
    let out = run_em(y, spread, missing, cfg, rng, Some(&mut trace))?;
    Ok((out, trace))
}

/// Per-frequency RTF estimates. Frequencies without any usable bin are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct RtfEstimate {
    pub r_prime: Vec<Option<C64>>,
    /// De-whitened RTF; `None` when unestimable or when the inverse map is singular.
    pub r: Vec<Option<C64>>,
    pub iters: Vec<usize>,
    pub converged: Vec<bool>,
}

impl RtfEstimate {
    pub fn n_freqs(&self) -> usize {
        self.r_prime.len()
    }

    /// CSV with columns `f,re_r_prime,im_r_prime,re_r,im_r,iters,converged`.
    /// Unestimable frequencies are omitted; an undefined `r` leaves its columns empty.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "f,re_r_prime,im_r_prime,re_r,im_r,iters,converged")?;
        for f in 0..self.n_freqs() {
            let Some(rp) = self.r_prime[f] else { continue };
            let (rr, ri) = match self.r[f] {
                Some(r) => (r.re.to_string(), r.im.to_string()),
                None => (String::new(), String::new()),
            };
            writeln!(
                out,
                "{f},{},{},{rr},{ri},{},{}",
                rp.re,
                rp.im,
                self.iters[f],
                u8::from(self.converged[f])
            )?;
        }
        Ok(())
    }
}

/// Runs EM independently per frequency and maps each estimate back through its
/// whitener.
pub fn estimate_rtf<R: Rng + ?Sized>(
    field: &RbrField,
    whiteners: &[Whitener],
    cfg: &EmConfig,
    rng: &mut R,
) -> Result<RtfEstimate> {
    let nf = field.n_freqs();
    if whiteners.len() != nf {
        return Err(Error::shape(format!("{nf} whiteners"), whiteners.len()));
    }
    let mut est = RtfEstimate {
        r_prime: vec![None; nf],
        r: vec![None; nf],
        iters: vec![0; nf],
        converged: vec![false; nf],
    };
    for f in 0..nf {
        let y: Vec<C64> = field.y().row(f).to_vec();
        let spread: Vec<f64> = field.spread().row(f).to_vec();
        let missing: Vec<bool> = field.missing().row(f).to_vec();
        match em_rtf_frequency(&y, &spread, &missing, cfg, rng) {
            Ok(out) => {
                est.r_prime[f] = Some(out.r_prime);
                est.r[f] = dewhiten_rtf(&whiteners[f], out.r_prime).ok();
                est.iters[f] = out.iters;
                est.converged[f] = out.converged;
            }
            Err(Error::AllMissing) => {
                log::debug!("frequency {f}: every bin missing, left unestimated");
            }
            Err(e) => return Err(e),
        }
    }
    Ok(est)
}

/// Finite set of candidate whitened RTFs, `K x F`.
#[derive(Debug, Clone, PartialEq)]
pub struct RtfGrid {
    values: Array2<C64>,
    labels: Vec<f64>,
    /// Frequencies that take part in scoring.
    active: Vec<bool>,
}

impl RtfGrid {
    pub fn new(values: Array2<C64>, labels: Vec<f64>) -> Result<Self> {
        if values.nrows() == 0 {
            return Err(Error::Config("candidate grid needs at least one row".into()));
        }
        if labels.len() != values.nrows() {
            return Err(Error::shape(format!("{} labels", values.nrows()), labels.len()));
        }
        if values.iter().any(|z| !z.is_finite()) {
            return Err(Error::Domain("candidate grid entries must be finite".into()));
        }
        let active = vec![true; values.ncols()];
        Ok(Self { values, labels, active })
    }

    /// Restricts scoring to frequencies where `active` is true.
    pub fn with_active(mut self, active: Vec<bool>) -> Result<Self> {
        if active.len() != self.values.ncols() {
            return Err(Error::shape(self.values.ncols(), active.len()));
        }
        self.active = active;
        Ok(self)
    }

    pub fn values(&self) -> &Array2<C64> {
        &self.values
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn active(&self) -> &[bool] {
        &self.active
    }

    pub fn len(&self) -> usize {
        self.values.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.values.nrows() == 0
    }

    pub fn n_freqs(&self) -> usize {
        self.values.ncols()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSelection {
    pub index: usize,
    pub label: f64,
    /// `sum ln(spread + |y - r'_k|^2)` per candidate; lower is more likely.
    pub scores: Vec<f64>,
}

impl GridSelection {
    /// CSV with columns `label,score`.
    pub fn write_csv<W: Write>(&self, labels: &[f64], mut out: W) -> Result<()> {
        writeln!(out, "label,score")?;
        for (l, s) in labels.iter().zip(&self.scores) {
            writeln!(out, "{l},{s}")?;
        }
        Ok(())
    }
}

/// Maximum-likelihood candidate under a finite (mixture-of-Dirac) prior. Missing bins
/// and inactive frequencies are skipped; ties go to the smallest index.
pub fn grid_select(field: &RbrField, grid: &RtfGrid) -> Result<GridSelection> {
    if grid.n_freqs() != field.n_freqs() {
        return Err(Error::shape(format!("{} grid frequencies", field.n_freqs()), grid.n_freqs()));
    }
    let mut bins: Vec<(usize, C64, f64)> = Vec::new();
    for ((f, t), &missing) in field.missing().indexed_iter() {
        if !missing && grid.active[f] {
            bins.push((f, field.y()[[f, t]], field.spread()[[f, t]]));
        }
    }
    if bins.is_empty() {
        return Err(Error::AllMissing);
    }
    let scores: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let row = grid.values.row(k);
            bins.iter().map(|&(f, y, s)| (s + (y - row[f]).norm_sqr()).ln()).sum()
        })
        .collect();
    let mut index = 0;
    for (k, &s) in scores.iter().enumerate() {
        if s < scores[index] {
            index = k;
        }
    }
    Ok(GridSelection { index, label: grid.labels[index], scores })
}

/// Free-field RTF of an integer-or-fractional delay `tau` (samples) at normalised
/// frequency `nu` (cycles per sample): `exp(-2 pi i tau nu)`.
pub fn free_field_rtf(tau: f64, nu: f64) -> C64 {
    C64::from_polar(1.0, -2.0 * PI * tau * nu)
}

/// Whitened free-field candidates for integer delays `-tau_max..=tau_max`.
///
/// Frequencies at DC or Nyquist (no usable phase for real signals), and frequencies
/// where some candidate hits a singular whitening map, are deactivated.
pub fn tdoa_grid(tau_max: u32, freqs: &[f64], whiteners: &[Whitener]) -> Result<RtfGrid> {
    if whiteners.len() != freqs.len() {
        return Err(Error::shape(format!("{} whiteners", freqs.len()), whiteners.len()));
    }
    let taus: Vec<f64> = (-(tau_max as i64)..=tau_max as i64).map(|t| t as f64).collect();
    let mut active: Vec<bool> = freqs.iter().map(|&nu| nu > 0.0 && nu < 0.5).collect();
    let mut values = Array2::zeros((taus.len(), freqs.len()));
    for (f, (&nu, w)) in freqs.iter().zip(whiteners).enumerate() {
        for (k, &tau) in taus.iter().enumerate() {
            match whiten_rtf(w, free_field_rtf(tau, nu)) {
                Ok(v) => values[[k, f]] = v,
                Err(_) => active[f] = false,
            }
        }
    }
    RtfGrid::new(values, taus)?.with_active(active)
}

/// Far-field azimuth in degrees from a delay in samples: `acos(tau c / (d fs))`.
pub fn tdoa_to_azimuth(tau: f64, d: f64, fs: f64, c: f64) -> Result<f64> {
    let x = tau * c / (d * fs);
    if !(-1.0..=1.0).contains(&x) || !x.is_finite() {
        return Err(Error::OutOfRange { what: "delay inconsistent with microphone spacing", value: tau });
    }
    Ok(x.acos().to_degrees())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cstat::standard_cnormal;
    use crate::whiten::{build_whitener, DEFAULT_RANK_TOL};
    use crate::cstat::HermitianCov2;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Synthetic RBR row drawn from complex-t with per-bin spreads.
    fn t_row(rng: &mut ChaCha8Rng, n: usize, r: C64) -> (Vec<C64>, Vec<f64>, Vec<bool>) {
        let spread: Vec<f64> = (0..n).map(|_| 10f64.powf(rng.random_range(-2.0..1.0))).collect();
        let y = spread
            .iter()
            .map(|&s| {
                let u: f64 = rand_distr::Distribution::sample(&rand_distr::Exp1, rng);
                r + standard_cnormal(rng) * (s / u).sqrt()
            })
            .collect();
        (y, spread, vec![false; n])
    }

    #[test]
    fn single_and_constant_rows() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let out = em_rtf_frequency(&[c(0.3, 0.4)], &[2.0], &[false], &EmConfig::default(), &mut rng).unwrap();
        assert_eq!(out.r_prime, c(0.3, 0.4));
        let y = vec![c(-1.0, 2.0); 7];
        let out = em_rtf_frequency(&y, &[0.5; 7], &[false; 7], &EmConfig::default(), &mut rng).unwrap();
        assert!((out.r_prime - c(-1.0, 2.0)).norm() < 1e-15);
        assert!(out.converged && out.iters <= 2);
    }

    #[test]
    fn all_missing_row_is_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let err = em_rtf_frequency(&[c(1.0, 0.0)], &[1.0], &[true], &EmConfig::default(), &mut rng);
        assert!(matches!(err, Err(Error::AllMissing)));
    }

    #[test]
    fn missing_bins_are_ignored() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let y = [c(1.0, 0.0), c(1e6, 0.0)];
        let out = em_rtf_frequency(&y, &[1.0, 1.0], &[false, true], &EmConfig::default(), &mut rng).unwrap();
        assert_eq!(out.r_prime, c(1.0, 0.0));
    }

    #[test]
    fn fixed_point_is_stationary() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let tight = EmConfig { rel_tol: 1e-14, max_iters: 100_000, ..Default::default() };
        for _ in 0..50 {
            let (y, s, m) = t_row(&mut rng, 40, c(0.8, -0.3));
            let out = em_rtf_frequency(&y, &s, &m, &tight, &mut rng).unwrap();
            let grad: C64 = y
                .iter()
                .zip(&s)
                .map(|(&yt, &st)| (yt - out.r_prime) / (st + (yt - out.r_prime).norm_sqr()))
                .sum();
            let scale: f64 = s.iter().map(|&st| 1.0 / st.sqrt()).sum();
            assert!(grad.norm() <= 1e-6 * scale, "{}", grad.norm());
        }
    }

    #[test]
    fn log_likelihood_never_decreases() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let (y, s, m) = t_row(&mut rng, 30, c(-0.2, 0.9));
            let (_, trace) = em_rtf_trace(&y, &s, &m, &EmConfig::default(), &mut rng).unwrap();
            for pair in trace.windows(2) {
                assert!(pair[1] >= pair[0] - 1e-9 * pair[0].abs().max(1.0));
            }
        }
    }

    #[test]
    fn permutation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let cfg = EmConfig { rel_tol: 1e-12, max_iters: 10_000, ..Default::default() };
        let (y, s, m) = t_row(&mut rng, 25, c(0.1, 0.1));
        let a = em_rtf_frequency(&y, &s, &m, &cfg, &mut rng).unwrap().r_prime;
        let (yr, sr): (Vec<C64>, Vec<f64>) = y.iter().rev().cloned().zip(s.iter().rev().cloned()).unzip();
        let b = em_rtf_frequency(&yr, &sr, &m, &cfg, &mut rng).unwrap().r_prime;
        assert!((a - b).norm() < 1e-9);
    }

    #[test]
    fn random_and_uniform_inits_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let uniform = EmConfig { rel_tol: 1e-10, max_iters: 10_000, ..Default::default() };
        let random = EmConfig { init_weights: InitWeights::Random, ..uniform };
        let mut disagreements = 0;
        for _ in 0..100 {
            let (y, s, m) = t_row(&mut rng, 20, c(0.5, 0.5));
            let a = em_rtf_frequency(&y, &s, &m, &uniform, &mut rng).unwrap().r_prime;
            for _ in 0..20 {
                let b = em_rtf_frequency(&y, &s, &m, &random, &mut rng).unwrap().r_prime;
                if (a - b).norm() > 1e-4 * a.norm() {
                    disagreements += 1;
                }
            }
        }
        // Multimodal likelihoods can separate the two; report rather than fail.
        if disagreements > 0 {
            eprintln!("init disagreement on {disagreements} of 2000 runs");
        }
    }

    #[test]
    fn gross_outlier_is_downweighted() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (mut y, mut s, mut m) = t_row(&mut rng, 30, c(0.4, -0.1));
        let cfg = EmConfig { rel_tol: 1e-12, max_iters: 10_000, ..Default::default() };
        let weighted_mean = |y: &[C64], s: &[f64]| {
            let w: f64 = s.iter().map(|v| 1.0 / v).sum();
            y.iter().zip(s).map(|(a, b)| a / b).sum::<C64>() / w
        };
        let before = em_rtf_frequency(&y, &s, &m, &cfg, &mut rng).unwrap().r_prime;
        let mean_before = weighted_mean(&y, &s);
        y.push(c(1e3, 0.0));
        s.push(1.0);
        m.push(false);
        let after = em_rtf_frequency(&y, &s, &m, &cfg, &mut rng).unwrap().r_prime;
        let mean_after = weighted_mean(&y, &s);
        assert!((after - before).norm() * 10.0 < (mean_after - mean_before).norm());
    }

    #[test]
    fn estimate_rtf_handles_unestimable_frequency_and_noise_free_limit() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut bins = Array2::from_elem((2, 4), None);
        for t in 0..4 {
            bins[[0, t]] = Some((c(0.7, -0.2), 1e-14));
        }
        let field = RbrField::from_bins(&bins);
        let w = vec![Whitener::identity(); 2];
        let est = estimate_rtf(&field, &w, &EmConfig::default(), &mut rng).unwrap();
        assert!((est.r_prime[0].unwrap() - c(0.7, -0.2)).norm() < 1e-6);
        assert_eq!(est.r[0], est.r_prime[0]);
        assert!(est.r_prime[1].is_none() && est.r[1].is_none());

        let mut buf = Vec::new();
        est.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.starts_with("f,re_r_prime,im_r_prime,re_r,im_r,iters,converged\n0,"));

        assert!(estimate_rtf(&field, &w[..1], &EmConfig::default(), &mut rng).is_err());
    }

    #[test]
    fn tdoa_grid_examples() {
        assert_eq!(free_field_rtf(0.0, 0.37), c(1.0, 0.0));
        // Normalised frequency 1/2 (half a cycle per sample).
        assert!((free_field_rtf(1.0, 256.0 / 512.0) - c(-1.0, 0.0)).norm() < 1e-12);
        let freqs: Vec<f64> = (1..=8).map(|k| k as f64 / 16.0).collect();
        let grid = tdoa_grid(3, &freqs, &vec![Whitener::identity(); 8]).unwrap();
        assert_eq!(grid.len(), 7);
        assert_eq!(grid.labels(), &[-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
        for f in 0..8 {
            for k in 0..3 {
                assert!((grid.values()[[k, f]] - grid.values()[[6 - k, f]].conj()).norm() < 1e-12);
            }
            assert_eq!(grid.values()[[3, f]], c(1.0, 0.0));
        }
        assert_eq!(grid.active().iter().filter(|&&a| a).count(), 7, "Nyquist row inactive");
    }

    fn field_from_grid_row(grid: &RtfGrid, k: usize, frames: usize) -> RbrField {
        let bins = Array2::from_shape_fn((grid.n_freqs(), frames), |(f, _)| Some((grid.values()[[k, f]], 1e-3)));
        RbrField::from_bins(&bins)
    }

    #[test]
    fn grid_select_recovers_noise_free_row() {
        let freqs: Vec<f64> = (1..=32).map(|k| k as f64 / 64.0).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let ws: Vec<Whitener> = (0..32)
            .map(|_| {
                let cov = HermitianCov2::from_correlation(1.0, rng.random_range(0.5..2.0), C64::from_polar(0.5, 1.0)).unwrap();
                build_whitener(&cov, DEFAULT_RANK_TOL).unwrap()
            })
            .collect();
        let grid = tdoa_grid(5, &freqs, &ws).unwrap();
        for k in 0..grid.len() {
            let sel = grid_select(&field_from_grid_row(&grid, k, 4), &grid).unwrap();
            assert_eq!(sel.index, k);
            assert_eq!(sel.label, grid.labels()[k]);
            assert_eq!(sel.scores.len(), grid.len());
        }
    }

    #[test]
    fn grid_select_single_candidate_ties_and_errors() {
        let one = RtfGrid::new(Array2::from_elem((1, 3), c(0.5, 0.0)), vec![42.0]).unwrap();
        let bins = Array2::from_shape_fn((3, 2), |(f, t)| Some((c(f as f64, t as f64), 1.0)));
        let sel = grid_select(&RbrField::from_bins(&bins), &one).unwrap();
        assert_eq!((sel.index, sel.label), (0, 42.0));

        let tied = RtfGrid::new(Array2::from_elem((3, 3), c(0.5, 0.0)), vec![0.0, 1.0, 2.0]).unwrap();
        assert_eq!(grid_select(&RbrField::from_bins(&bins), &tied).unwrap().index, 0);

        let empty = RbrField::from_bins(&Array2::from_elem((3, 2), None));
        assert!(matches!(grid_select(&empty, &one), Err(Error::AllMissing)));
        let bad = RtfGrid::new(Array2::from_elem((1, 4), c(0.5, 0.0)), vec![0.0]).unwrap();
        assert!(grid_select(&RbrField::from_bins(&bins), &bad).is_err());
    }

    #[test]
    fn duplicating_bins_keeps_argmin() {
        let freqs: Vec<f64> = (1..=16).map(|k| k as f64 / 32.0).collect();
        let grid = tdoa_grid(4, &freqs, &vec![Whitener::identity(); 16]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let bins = Array2::from_shape_fn((16, 6), |_| {
                Some((standard_cnormal(&mut rng) * 2.0, 10f64.powf(rng.random_range(-2.0..1.0))))
            });
            let field = RbrField::from_bins(&bins);
            let doubled = field.concat_frames(&field).unwrap();
            assert_eq!(grid_select(&field, &grid).unwrap().index, grid_select(&doubled, &grid).unwrap().index);
        }
    }

    #[test]
    fn azimuth_examples() {
        assert!((tdoa_to_azimuth(0.0, 0.2, 16_000.0, 343.0).unwrap() - 90.0).abs() < 1e-12);
        let endfire = 0.2 * 16_000.0 / 343.0;
        assert!(tdoa_to_azimuth(endfire, 0.2, 16_000.0, 343.0).unwrap().abs() < 1e-6);
        assert!((tdoa_to_azimuth(4.66, 0.2, 16_000.0, 343.0).unwrap() - 60.0).abs() < 0.5);
        assert!(tdoa_to_azimuth(10.0, 0.2, 16_000.0, 343.0).is_err());
    }

    #[test]
    fn grid_scores_csv() {
        let sel = GridSelection { index: 0, label: -1.0, scores: vec![1.5, 2.5] };
        let mut buf = Vec::new();
        sel.write_csv(&[-1.0, 1.0], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "label,score\n-1,1.5\n1,2.5\n");
    }
}
