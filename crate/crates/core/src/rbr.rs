//! Rectified binaural ratio (RBR) features.
//!
//! After whitening, the plain ratio `m'2 / m'1` is complex-t distributed around
//! `sigma_s^2 / (1 + sigma_s^2) * r'`, i.e. shrunk towards zero by the instantaneous
//! source-to-noise ratio. Multiplying by `(1 + sigma_s^2) / sigma_s^2` re-centres it on
//! the whitened RTF `r'` and yields a per-bin spread that measures its reliability:
//!
//! ```text
//! y      = (1 + s2) / s2 * m'2 / m'1
//! spread = (|m'2|^2 + s2) / s2^2        full-rank noise
//! spread =  |m'2|^2       / s2^2        rank-1 noise (n'2 = 0)
//! ```
//!
//! with `s2 = max(|m'1|^2 - 1, 0)`. Bins with `s2 == 0` are missing.

use std::io::Write;

use ndarray::Array2;

use crate::cstat::ComplexT1Params;
use crate::whiten::WhitenerKind;
use crate::{Error, Result, C64};

/// Lower bound on finite spreads; keeps likelihood terms and EM weights finite when
/// `|m'2| = 0` under rank-1 noise.
pub const SPREAD_FLOOR: f64 = 1e-200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RbrOptions {
    /// Half-width, in bins along both axes, of the box average used for the
    /// instantaneous variances. Zero uses single-bin magnitudes.
    pub smoothing_radius: usize,
}

/// Per-bin rectified ratios, spreads and missing mask, all `F x T`.
#[derive(Debug, Clone, PartialEq)]
pub struct RbrField {
    y: Array2<C64>,
    spread: Array2<f64>,
    missing: Array2<bool>,
    sigma_s2: Array2<f64>,
}

impl RbrField {
    pub fn y(&self) -> &Array2<C64> {
        &self.y
    }

    /// `+inf` on missing bins.
    pub fn spread(&self) -> &Array2<f64> {
        &self.spread
    }

    pub fn missing(&self) -> &Array2<bool> {
        &self.missing
    }

    pub fn sigma_s2(&self) -> &Array2<f64> {
        &self.sigma_s2
    }

    pub fn n_freqs(&self) -> usize {
        self.y.nrows()
    }

    pub fn n_frames(&self) -> usize {
        self.y.ncols()
    }

    pub fn n_missing(&self) -> usize {
        self.missing.iter().filter(|&&m| m).count()
    }

    /// Assembles a field from per-bin `(y, spread)` values, `None` marking missing bins.
    /// The source variance of such bins is unknown and stored as NaN.
    pub fn from_bins(bins: &Array2<Option<(C64, f64)>>) -> Self {
        let dim = bins.dim();
        let mut field = Self {
            y: Array2::zeros(dim),
            spread: Array2::from_elem(dim, f64::INFINITY),
            missing: Array2::from_elem(dim, true),
            sigma_s2: Array2::zeros(dim),
        };
        for ((f, t), bin) in bins.indexed_iter() {
            if let Some((y, spread)) = *bin {
                field.set(f, t, y, spread.max(SPREAD_FLOOR), f64::NAN);
            }
        }
        field
    }

    /// Appends `other` along the time axis.
    pub fn concat_frames(&self, other: &RbrField) -> Result<RbrField> {
        use ndarray::{concatenate, Axis};
        if self.n_freqs() != other.n_freqs() {
            return Err(Error::shape(self.n_freqs(), other.n_freqs()));
        }
        let cat = |a: &Array2<f64>, b: &Array2<f64>| concatenate(Axis(1), &[a.view(), b.view()]);
        Ok(RbrField {
            y: concatenate(Axis(1), &[self.y.view(), other.y.view()]).expect("rows checked"),
            spread: cat(&self.spread, &other.spread).expect("rows checked"),
            missing: concatenate(Axis(1), &[self.missing.view(), other.missing.view()]).expect("rows checked"),
            sigma_s2: cat(&self.sigma_s2, &other.sigma_s2).expect("rows checked"),
        })
    }

    fn set(&mut self, f: usize, t: usize, y: C64, spread: f64, sigma_s2: f64) {
        self.y[[f, t]] = y;
        self.spread[[f, t]] = spread;
        self.missing[[f, t]] = false;
        self.sigma_s2[[f, t]] = sigma_s2;
    }

    /// Debug dump with columns `f,t,re_y,im_y,spread,missing`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "f,t,re_y,im_y,spread,missing")?;
        for ((f, t), y) in self.y.indexed_iter() {
            let missing = self.missing[[f, t]];
            writeln!(
                out,
                "{f},{t},{},{},{},{}",
                y.re,
                y.im,
                self.spread[[f, t]],
                u8::from(missing)
            )?;
        }
        Ok(())
    }
}

/// Instantaneous source variance from the whitened reference channel,
/// `max(|m'1|^2 - 1, 0)`. The boundary `|m'1|^2 == 1` is missing.
pub fn estimate_sigma_s2(m1_whitened: C64) -> f64 {
    let p = m1_whitened.norm_sqr();
    if p > 1.0 {
        p - 1.0
    } else {
        0.0
    }
}

/// Rectifies one bin given the source variance and the channel-2 variance.
/// Returns `None` for a missing bin (`sigma_s2 <= 0`).
pub fn rectify_bin(
    m1: C64,
    m2: C64,
    sigma_s2: f64,
    sigma_m2_sq: f64,
    kind: WhitenerKind,
) -> Option<(C64, f64)> {
    if !(sigma_s2 > 0.0) || m1.norm_sqr() == 0.0 {
        return None;
    }
    let y = m2 / m1 * ((1.0 + sigma_s2) / sigma_s2);
    let num = match kind {
        WhitenerKind::FullRank => sigma_m2_sq + sigma_s2,
        WhitenerKind::Rank1 => sigma_m2_sq,
    };
    let spread = (num / (sigma_s2 * sigma_s2)).max(SPREAD_FLOOR);
    Some((y, spread))
}

fn box_mean(p: &Array2<f64>, radius: usize) -> Array2<f64> {
    if radius == 0 {
        return p.clone();
    }
    let (nf, nt) = p.dim();
    Array2::from_shape_fn((nf, nt), |(f, t)| {
        let (f0, f1) = (f.saturating_sub(radius), (f + radius + 1).min(nf));
        let (t0, t1) = (t.saturating_sub(radius), (t + radius + 1).min(nt));
        let window = p.slice(ndarray::s![f0..f1, t0..t1]);
        window.sum() / window.len() as f64
    })
}

/// Extracts RBR features from whitened spectra. `kinds` gives the whitener kind of each
/// frequency row.
pub fn extract_rbr(
    m1p: &Array2<C64>,
    m2p: &Array2<C64>,
    kinds: &[WhitenerKind],
    opts: RbrOptions,
) -> Result<RbrField> {
    if m1p.dim() != m2p.dim() {
        return Err(Error::shape(format!("{:?}", m1p.dim()), format!("{:?}", m2p.dim())));
    }
    if kinds.len() != m1p.nrows() {
        return Err(Error::shape(format!("{} kinds", m1p.nrows()), kinds.len()));
    }
    let p1 = box_mean(&m1p.mapv(|z| z.norm_sqr()), opts.smoothing_radius);
    let p2 = box_mean(&m2p.mapv(|z| z.norm_sqr()), opts.smoothing_radius);
    let dim = m1p.dim();
    let mut field = RbrField {
        y: Array2::zeros(dim),
        spread: Array2::from_elem(dim, f64::INFINITY),
        missing: Array2::from_elem(dim, true),
        sigma_s2: Array2::zeros(dim),
    };
    for ((f, t), &m1) in m1p.indexed_iter() {
        let s2 = if p1[[f, t]] > 1.0 { p1[[f, t]] - 1.0 } else { 0.0 };
        if let Some((y, spread)) = rectify_bin(m1, m2p[[f, t]], s2, p2[[f, t]], kinds[f]) {
            field.set(f, t, y, spread, s2);
        }
    }
    Ok(field)
}

/// Law of the unrectified whitened ratio `m'2 / m'1` for a given source variance and
/// whitened RTF under white unit noise: complex-t centred on
/// `sigma_s2 / (1 + sigma_s2) * r'` with spread
/// `(|r'|^2 sigma_s2 + 1 + sigma_s2) / (1 + sigma_s2)^2`.
pub fn biased_ratio_params(sigma_s2: f64, r_prime: C64) -> Result<ComplexT1Params> {
    if !(sigma_s2 >= 0.0) {
        return Err(Error::Domain(format!("source variance must be >= 0, got {sigma_s2}")));
    }
    let a = 1.0 + sigma_s2;
    let sigma_m2_sq = r_prime.norm_sqr() * sigma_s2 + 1.0;
    ComplexT1Params::new(r_prime * (sigma_s2 / a), (sigma_m2_sq + sigma_s2) / (a * a), 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cstat::{ct1_radial_cdf, ks_one_sample, standard_cnormal};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn median(mut xs: Vec<f64>) -> f64 {
        xs.sort_by(f64::total_cmp);
        xs[xs.len() / 2]
    }

    #[test]
    fn sigma_s2_branches() {
        assert_eq!(estimate_sigma_s2(c(2.0, 1.0)), 4.0);
        assert_eq!(estimate_sigma_s2(c(0.5f64.sqrt(), 0.0)), 0.0);
        assert_eq!(estimate_sigma_s2(c(1.0, 0.0)), 0.0);
    }

    #[test]
    fn extract_single_bin_arithmetic() {
        let m1 = Array2::from_elem((1, 2), c(2.0, 0.0));
        let mut m2 = Array2::from_elem((1, 2), c(1.0, 1.0));
        m2[[0, 1]] = c(5.0, 5.0);
        let mut m1b = m1.clone();
        m1b[[0, 1]] = c(0.9, 0.0);
        let field = extract_rbr(&m1b, &m2, &[WhitenerKind::FullRank], RbrOptions::default()).unwrap();
        assert!((field.y()[[0, 0]] - c(2.0 / 3.0, 2.0 / 3.0)).norm() < 1e-15);
        assert!((field.spread()[[0, 0]] - 5.0 / 9.0).abs() < 1e-15);
        assert_eq!(field.sigma_s2()[[0, 0]], 3.0);
        assert!(field.missing()[[0, 1]]);
        assert!(field.spread()[[0, 1]].is_infinite());

        let rank1 = extract_rbr(&m1, &m2, &[WhitenerKind::Rank1], RbrOptions::default()).unwrap();
        assert!((rank1.spread()[[0, 0]] - 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let a = Array2::<C64>::zeros((2, 3));
        let b = Array2::<C64>::zeros((2, 4));
        assert!(extract_rbr(&a, &b, &[WhitenerKind::FullRank; 2], RbrOptions::default()).is_err());
        assert!(extract_rbr(&a, &a, &[WhitenerKind::FullRank; 3], RbrOptions::default()).is_err());
    }

    #[test]
    fn biased_ratio_examples() {
        let p = biased_ratio_params(0.0, c(0.7, 0.2)).unwrap();
        assert_eq!((p.mean, p.spread), (c(0.0, 0.0), 1.0));
        let p = biased_ratio_params(1.0, c(1.0, 0.0)).unwrap();
        assert!((p.mean - c(0.5, 0.0)).norm() < 1e-15 && (p.spread - 0.75).abs() < 1e-15);
        let p = biased_ratio_params(1e12, c(0.3, -0.4)).unwrap();
        assert!((p.mean - c(0.3, -0.4)).norm() < 1e-9 && p.spread < 1e-9);
    }

    /// Whitened bins `m'1 = s + n1`, `m'2 = r' s + n2` with `s ~ CN(0, sigma_s2)`.
    fn white_bins(rng: &mut ChaCha8Rng, n: usize, sigma_s2: f64, r: C64) -> Vec<(C64, C64)> {
        (0..n)
            .map(|_| {
                let s = standard_cnormal(rng) * sigma_s2.sqrt();
                (s + standard_cnormal(rng), r * s + standard_cnormal(rng))
            })
            .collect()
    }

    #[test]
    fn rectification_removes_shrinkage_bias() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let bins = white_bins(&mut rng, 100_000, 1.0, c(1.0, 0.0));
        let raw: Vec<C64> = bins.iter().map(|(a, b)| b / a).collect();
        let rect: Vec<C64> = bins
            .iter()
            .map(|&(a, b)| rectify_bin(a, b, 1.0, 2.0, WhitenerKind::FullRank).unwrap().0)
            .collect();
        let loc = |v: &[C64]| c(median(v.iter().map(|z| z.re).collect()), median(v.iter().map(|z| z.im).collect()));
        assert!((loc(&raw) - c(0.5, 0.0)).norm() < 0.03);
        assert!((loc(&rect) - c(1.0, 0.0)).norm() < 0.03);
    }

    #[test]
    fn exact_variance_rbr_is_complex_t() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let (s2, r) = (2.0, c(0.4, -0.7));
        let sigma_m2_sq = r.norm_sqr() * s2 + 1.0;
        let lambda2 = (sigma_m2_sq + s2) / (s2 * s2);
        let radii: Vec<f64> = white_bins(&mut rng, 100_000, s2, r)
            .into_iter()
            .map(|(a, b)| {
                let (y, spread) = rectify_bin(a, b, s2, sigma_m2_sq, WhitenerKind::FullRank).unwrap();
                assert!((spread - lambda2).abs() < 1e-12);
                (y - r).norm() / lambda2.sqrt()
            })
            .collect();
        let unit = ComplexT1Params::new(c(0.0, 0.0), 1.0, 1.0).unwrap();
        assert!(ks_one_sample(&radii, |x| ct1_radial_cdf(x, &unit)) <= 0.02);
    }

    #[test]
    fn spread_decreases_with_source_variance() {
        let m2 = c(0.8, 0.3);
        let mut last = f64::INFINITY;
        for k in 1..200 {
            let s2 = k as f64 * 0.05;
            let (_, spread) = rectify_bin(c(1.0, 0.0), m2, s2, m2.norm_sqr(), WhitenerKind::FullRank).unwrap();
            assert!(spread < last);
            last = spread;
        }
        assert!(rectify_bin(c(1.0, 0.0), m2, 1e-9, 1.0, WhitenerKind::FullRank).unwrap().1 > 1e17);
        assert!(rectify_bin(c(1.0, 0.0), m2, 1e9, 1.0, WhitenerKind::FullRank).unwrap().1 < 1e-8);
    }

    #[test]
    fn smoothing_averages_powers() {
        let m1 = Array2::from_shape_fn((3, 3), |(f, t)| c(if f == 1 && t == 1 { 3.0 } else { 0.0 }, 0.0));
        let m2 = Array2::from_elem((3, 3), c(1.0, 0.0));
        let field = extract_rbr(&m1, &m2, &[WhitenerKind::FullRank; 3], RbrOptions { smoothing_radius: 1 }).unwrap();
        // Centre power 9 averaged over 9 bins = 1: not above the unit noise floor.
        assert!(field.missing()[[1, 1]]);
        let plain = extract_rbr(&m1, &m2, &[WhitenerKind::FullRank; 3], RbrOptions::default()).unwrap();
        assert!(!plain.missing()[[1, 1]]);
    }

    #[test]
    fn csv_dump_has_header_and_rows() {
        let m1 = Array2::from_elem((2, 2), c(2.0, 0.0));
        let field = extract_rbr(&m1, &m1, &[WhitenerKind::FullRank; 2], RbrOptions::default()).unwrap();
        let mut buf = Vec::new();
        field.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("f,t,re_y,im_y,spread,missing\n"));
        assert_eq!(text.lines().count(), 5);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn mask_consistency(
                vals in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0), 12),
                rank1 in any::<bool>(),
            ) {
                let m1 = Array2::from_shape_fn((3, 4), |(f, t)| { let v = vals[f * 4 + t]; c(v.0, v.1) });
                let m2 = Array2::from_shape_fn((3, 4), |(f, t)| { let v = vals[f * 4 + t]; c(v.2, v.3) });
                let kind = if rank1 { WhitenerKind::Rank1 } else { WhitenerKind::FullRank };
                let field = extract_rbr(&m1, &m2, &[kind; 3], RbrOptions::default()).unwrap();
                for ((f, t), &missing) in field.missing().indexed_iter() {
                    let s2 = field.sigma_s2()[[f, t]];
                    let spread = field.spread()[[f, t]];
                    prop_assert_eq!(missing, s2 == 0.0);
                    prop_assert_eq!(missing, spread.is_infinite());
                    prop_assert_eq!(s2, estimate_sigma_s2(m1[[f, t]]));
                    if !missing {
                        prop_assert!(spread > 0.0);
                        prop_assert!(field.y()[[f, t]].is_finite());
                    }
                }
            }
        }
    }
}
