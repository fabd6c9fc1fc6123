//! Comparison methods: mean ratio, mean ILD/IPD, random guessing and PHAT-histogram
//! TDOA.

use std::f64::consts::PI;

use rand::Rng;

use crate::cstat::standard_cnormal;
use crate::signal::SpectroPair;
use crate::{Error, Result, C64};

/// Arithmetic mean of `m2 / m1` over unmasked bins. `None` when nothing is usable.
pub fn mean_ratio(m1: &[C64], m2: &[C64], missing: &[bool]) -> Option<C64> {
    let (sum, n) = m1
        .iter()
        .zip(m2)
        .zip(missing)
        .filter(|((a, _), &m)| !m && a.norm_sqr() > 0.0)
        .fold((C64::new(0.0, 0.0), 0usize), |(s, n), ((a, b), _)| (s + b / a, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// `exp(mean ln|m2/m1|) * mean((m2/|m2|) / (m1/|m1|))` over unmasked bins with nonzero
/// magnitudes. The phase average is deliberately not renormalised.
pub fn mean_ild_ipd(m1: &[C64], m2: &[C64], missing: &[bool]) -> Option<C64> {
    let mut ild = 0.0;
    let mut ipd = C64::new(0.0, 0.0);
    let mut n = 0usize;
    for ((&a, &b), &m) in m1.iter().zip(m2).zip(missing) {
        let (na, nb) = (a.norm(), b.norm());
        if m || na == 0.0 || nb == 0.0 {
            continue;
        }
        ild += (nb / na).ln();
        ipd += (b / nb) / (a / na);
        n += 1;
    }
    (n > 0).then(|| (ild / n as f64).exp() * ipd / n as f64)
}

/// Uninformed estimate drawn from the prior `CN(0, 1)`.
pub fn random_rtf<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    standard_cnormal(rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FrameWeighting {
    #[default]
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhatConfig {
    pub tau_max: u32,
    pub frame_weighting: FrameWeighting,
}

impl PhatConfig {
    pub fn new(tau_max: u32) -> Result<Self> {
        if tau_max < 1 {
            return Err(Error::Config("PHAT tau_max must be >= 1".into()));
        }
        Ok(Self { tau_max, frame_weighting: FrameWeighting::None })
    }

    /// One histogram bin per integer lag.
    pub fn histogram_bins(&self) -> usize {
        2 * self.tau_max as usize + 1
    }
}

/// Frame-wise GCC-PHAT evaluated at integer lags, then the mode of the per-frame
/// argmax lags. Positive lags mean channel 2 lags channel 1. Ties in the mode go to
/// the smallest `|tau|`, then to the negative lag.
pub fn phat_histogram_tdoa(pair: &SpectroPair, cfg: &PhatConfig) -> Result<i64> {
    if cfg.tau_max < 1 {
        return Err(Error::Config("PHAT tau_max must be >= 1".into()));
    }
    if pair.n_freqs() < 2 {
        return Err(Error::shape(">= 2 frequencies", pair.n_freqs()));
    }
    let tm = cfg.tau_max as i64;
    let lags: Vec<i64> = (-tm..=tm).collect();
    let freqs = pair.frequencies();
    // steer[l][f] = exp(-2 pi i lag nu_f), shared by all frames.
    let steer: Vec<Vec<C64>> = lags
        .iter()
        .map(|&l| freqs.iter().map(|&nu| C64::from_polar(1.0, -2.0 * PI * l as f64 * nu)).collect())
        .collect();
    let mut hist = vec![0usize; lags.len()];
    for t in 0..pair.n_frames() {
        let g: Vec<C64> = (0..pair.n_freqs())
            .map(|f| {
                let cpsd = pair.m1[[f, t]] * pair.m2[[f, t]].conj();
                let n = cpsd.norm();
                if n > 0.0 { cpsd / n } else { C64::new(0.0, 0.0) }
            })
            .collect();
        if g.iter().all(|z| z.norm_sqr() == 0.0) {
            continue;
        }
        let mut best = (f64::NEG_INFINITY, 0);
        for (i, row) in steer.iter().enumerate() {
            let v: f64 = g.iter().zip(row).map(|(a, b)| (a * b).re).sum();
            if v > best.0 {
                best = (v, i);
            }
        }
        hist[best.1] += 1;
    }
    let mut order: Vec<usize> = (0..lags.len()).collect();
    order.sort_by_key(|&i| (lags[i].abs(), lags[i]));
    let mode = order.iter().copied().fold(order[0], |b, i| if hist[i] > hist[b] { i } else { b });
    Ok(lags[mode])
}
