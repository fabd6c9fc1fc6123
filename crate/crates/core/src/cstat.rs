//! Complex circular-symmetric Gaussian and complex-t distributions.
//!
//! The central fact used by the rest of the crate is that the ratio `m2 / m1` of a
//! zero-mean bivariate complex Gaussian pair is complex-t distributed with one degree
//! of freedom, with location and spread read off the covariance
//! ([`ratio_distribution`]). [`verify_theorem1`] checks that claim by simulation.
//!
//! Covariances are stored with `c12 = E[m1 conj(m2)]`, so the correlation coefficient
//! is `rho = c12 / (sigma1 sigma2)`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::{Error, Result, C64};

/// 2x2 complex Hermitian positive semi-definite matrix `[[v11, c12], [conj(c12), v22]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianCov2 {
    v11: f64,
    v22: f64,
    c12: C64,
}

impl HermitianCov2 {
    /// Relative slack allowed on `|c12|^2 <= v11 v22` to absorb rounding.
    const PSD_SLACK: f64 = 1e-12;

    pub fn new(v11: f64, v22: f64, c12: C64) -> Result<Self> {
        if !(v11.is_finite() && v22.is_finite() && c12.re.is_finite() && c12.im.is_finite()) {
            return Err(Error::Domain("covariance entries must be finite".into()));
        }
        if v11 < 0.0 || v22 < 0.0 {
            return Err(Error::Domain(format!(
                "negative variance on the diagonal ({v11}, {v22})"
            )));
        }
        let c12_sq = c12.norm_sqr();
        let prod = v11 * v22;
        if c12_sq > prod * (1.0 + Self::PSD_SLACK) + f64::MIN_POSITIVE {
            return Err(Error::NotPsd { c12_sq, prod });
        }
        Ok(Self { v11, v22, c12 })
    }

    pub fn identity() -> Self {
        Self::diag(1.0, 1.0)
    }

    /// Diagonal covariance. Panics on negative entries.
    pub fn diag(v11: f64, v22: f64) -> Self {
        Self::new(v11, v22, C64::new(0.0, 0.0)).expect("diagonal variances must be >= 0")
    }

    /// Builds a covariance from standard deviations and a correlation coefficient
    /// `rho = E[m1 conj(m2)] / (sigma1 sigma2)`, `|rho| <= 1`.
    pub fn from_correlation(sigma1: f64, sigma2: f64, rho: C64) -> Result<Self> {
        Self::new(sigma1 * sigma1, sigma2 * sigma2, rho * (sigma1 * sigma2))
    }

    pub fn v11(&self) -> f64 {
        self.v11
    }

    pub fn v22(&self) -> f64 {
        self.v22
    }

    /// `E[m1 conj(m2)]`.
    pub fn c12(&self) -> C64 {
        self.c12
    }

    pub fn trace(&self) -> f64 {
        self.v11 + self.v22
    }

    pub fn det(&self) -> f64 {
        (self.v11 * self.v22 - self.c12.norm_sqr()).max(0.0)
    }

    /// Eigenvalues `(min, max)`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let half_gap = (0.25 * (self.v11 - self.v22).powi(2) + self.c12.norm_sqr()).sqrt();
        let max = 0.5 * self.trace() + half_gap;
        // det / max is more accurate than tr/2 - gap for nearly singular matrices.
        let min = if max > 0.0 { self.det() / max } else { 0.0 };
        (min, max)
    }

    /// Correlation coefficient, `None` when either variance is zero.
    pub fn correlation(&self) -> Option<C64> {
        let denom = (self.v11 * self.v22).sqrt();
        (denom > 0.0).then(|| self.c12 / denom)
    }

    pub fn scaled(&self, k: f64) -> Result<Self> {
        Self::new(self.v11 * k, self.v22 * k, self.c12 * k)
    }

    /// Full matrix, row-major.
    pub fn to_matrix(&self) -> [[C64; 2]; 2] {
        [
            [C64::new(self.v11, 0.0), self.c12],
            [self.c12.conj(), C64::new(self.v22, 0.0)],
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexGauss1 {
    pub mean: C64,
    pub variance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexGauss2 {
    pub mean: [C64; 2],
    pub cov: HermitianCov2,
}

impl ComplexGauss2 {
    pub fn centered(cov: HermitianCov2) -> Self {
        Self {
            mean: [C64::new(0.0, 0.0); 2],
            cov,
        }
    }
}

/// Parameters of the univariate complex t-distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexT1Params {
    pub mean: C64,
    /// Spread `lambda^2`. Zero encodes a point mass at `mean`.
    pub spread: f64,
    /// Degrees of freedom `nu`.
    pub dof: f64,
}

impl ComplexT1Params {
    pub fn new(mean: C64, spread: f64, dof: f64) -> Result<Self> {
        if !(spread >= 0.0) || !spread.is_finite() {
            return Err(Error::Domain(format!("spread must be finite and >= 0, got {spread}")));
        }
        if !(dof > 0.0) {
            return Err(Error::Domain(format!("degrees of freedom must be > 0, got {dof}")));
        }
        Ok(Self { mean, spread, dof })
    }

    /// True for the point-mass case (`spread == 0`) produced by rank-1 covariances.
    pub fn is_degenerate(&self) -> bool {
        self.spread == 0.0
    }
}

/// Draws from the standard complex normal `CN(0, 1)`: real and imaginary parts are
/// independent `N(0, 1/2)`.
pub fn standard_cnormal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn cgauss1_pdf(x: C64, p: &ComplexGauss1) -> Result<f64> {
    if !(p.variance > 0.0) {
        return Err(Error::Domain("complex normal density needs variance > 0".into()));
    }
    Ok((-(x - p.mean).norm_sqr() / p.variance).exp() / (PI * p.variance))
}

pub fn cgauss1_sample<R: Rng + ?Sized>(p: &ComplexGauss1, n: usize, rng: &mut R) -> Vec<C64> {
    let scale = p.variance.max(0.0).sqrt();
    (0..n).map(|_| p.mean + standard_cnormal(rng) * scale).collect()
}

/// Lower-triangular factor `L` with `L L^H = cov`, valid for singular covariances.
fn cholesky2(cov: &HermitianCov2) -> [[C64; 2]; 2] {
    let zero = C64::new(0.0, 0.0);
    if cov.v11 > 0.0 {
        let a = cov.v11.sqrt();
        let b = cov.c12.conj() / a;
        let c = (cov.v22 - cov.c12.norm_sqr() / cov.v11).max(0.0).sqrt();
        [[C64::new(a, 0.0), zero], [b, C64::new(c, 0.0)]]
    } else {
        // PSD with v11 = 0 forces c12 = 0.
        [[zero, zero], [zero, C64::new(cov.v22.sqrt(), 0.0)]]
    }
}

/// Draws `n` samples of a bivariate complex circular-symmetric Gaussian.
pub fn cgauss2_sample<R: Rng + ?Sized>(p: &ComplexGauss2, n: usize, rng: &mut R) -> Vec<[C64; 2]> {
    let l = cholesky2(&p.cov);
    (0..n)
        .map(|_| {
            let w0 = standard_cnormal(rng);
            let w1 = standard_cnormal(rng);
            [
                p.mean[0] + l[0][0] * w0,
                p.mean[1] + l[1][0] * w0 + l[1][1] * w1,
            ]
        })
        .collect()
}

pub fn ct1_pdf(y: C64, p: &ComplexT1Params) -> Result<f64> {
    if !(p.spread > 0.0) {
        return Err(Error::Domain("complex-t density needs spread > 0".into()));
    }
    let d = (y - p.mean).norm_sqr() / (p.dof * p.spread);
    Ok((1.0 + d).powf(-(1.0 + p.dof)) / (PI * p.spread))
}

pub fn ct1_log_pdf(y: C64, p: &ComplexT1Params) -> Result<f64> {
    if !(p.spread > 0.0) {
        return Err(Error::Domain("complex-t density needs spread > 0".into()));
    }
    let d = (y - p.mean).norm_sqr() / (p.dof * p.spread);
    Ok(-PI.ln() - p.spread.ln() - (1.0 + p.dof) * d.ln_1p())
}

/// CDF of the radius `|y - mean|`: `1 - (1 + rho^2 / (nu lambda^2))^(-nu)`.
pub fn ct1_radial_cdf(radius: f64, p: &ComplexT1Params) -> f64 {
    if radius <= 0.0 {
        return 0.0;
    }
    if p.spread == 0.0 {
        return 1.0;
    }
    let d = radius * radius / (p.dof * p.spread);
    1.0 - (-p.dof * d.ln_1p()).exp()
}

/// Samples via the Gaussian scale mixture: `u ~ Gamma(nu, rate nu)`,
/// `y | u ~ CN(mean, spread / u)`.
pub fn ct1_sample<R: Rng + ?Sized>(p: &ComplexT1Params, n: usize, rng: &mut R) -> Result<Vec<C64>> {
    if !(p.spread > 0.0) {
        return Err(Error::Domain("complex-t sampler needs spread > 0".into()));
    }
    let gamma = Gamma::new(p.dof, 1.0 / p.dof)
        .map_err(|e| Error::Domain(format!("gamma mixing law: {e}")))?;
    Ok((0..n)
        .map(|_| {
            let u: f64 = gamma.sample(rng);
            p.mean + standard_cnormal(rng) * (p.spread / u).sqrt()
        })
        .collect())
}

/// Exact law of `m2 / m1` for `(m1, m2) ~ CN2(0, cov)`.
///
/// Location `(sigma2/sigma1) conj(rho) = conj(c12) / v11`, spread
/// `(v22/v11)(1 - |rho|^2)`, one degree of freedom. A zero spread means `m2` is a
/// deterministic multiple of `m1`; `v22 = 0` yields the point mass at zero.
pub fn ratio_distribution(cov: &HermitianCov2) -> Result<ComplexT1Params> {
    if !(cov.v11 > 0.0) {
        return Err(Error::Domain(
            "ratio law undefined: denominator channel has zero variance".into(),
        ));
    }
    let mean = cov.c12.conj() / cov.v11;
    let spread = ((cov.v22 - cov.c12.norm_sqr() / cov.v11) / cov.v11).max(0.0);
    ComplexT1Params::new(mean, spread, 1.0)
}

/// One-sample Kolmogorov-Smirnov statistic of `samples` against `cdf`.
pub fn ks_one_sample(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov-Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Monte-Carlo check of the ratio law: samples `n` pairs from `CN2(0, cov)`, forms
/// `m2 / m1`, and returns the KS statistic of the normalised radius
/// `|y - mean| / sqrt(spread)` against the one-degree-of-freedom radial CDF.
pub fn verify_theorem1<R: Rng + ?Sized>(cov: &HermitianCov2, n: usize, rng: &mut R) -> Result<f64> {
    let law = ratio_distribution(cov)?;
    if law.is_degenerate() {
        return Err(Error::Domain("ratio law is a point mass; covariance must be positive definite".into()));
    }
    let scale = law.spread.sqrt();
    let radii: Vec<f64> = cgauss2_sample(&ComplexGauss2::centered(*cov), n, rng)
        .into_iter()
        .map(|[m1, m2]| (m2 / m1 - law.mean).norm() / scale)
        .collect();
    let unit = ComplexT1Params::new(C64::new(0.0, 0.0), 1.0, 1.0)?;
    Ok(ks_one_sample(&radii, |r| ct1_radial_cdf(r, &unit)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Midpoint rule over the square `[-half, half]^2`, restricted to the disc.
    fn integrate_disc(half: f64, steps: usize, f: impl Fn(C64) -> f64) -> f64 {
        let h = 2.0 * half / steps as f64;
        let mut acc = 0.0;
        for i in 0..steps {
            for j in 0..steps {
                let z = c(-half + (i as f64 + 0.5) * h, -half + (j as f64 + 0.5) * h);
                if z.norm() <= half {
                    acc += f(z);
                }
            }
        }
        acc * h * h
    }

    #[test]
    fn cgauss1_pdf_values() {
        let p = ComplexGauss1 { mean: c(0.0, 0.0), variance: 1.0 };
        assert!((cgauss1_pdf(c(0.0, 0.0), &p).unwrap() - 1.0 / PI).abs() < 1e-12);
        assert!((cgauss1_pdf(c(1.0, 0.0), &p).unwrap() - (-1.0f64).exp() / PI).abs() < 1e-12);
        let total = integrate_disc(8.0, 800, |z| cgauss1_pdf(z, &p).unwrap());
        assert!((total - 1.0).abs() < 1e-3, "{total}");
        let zero = ComplexGauss1 { mean: c(0.0, 0.0), variance: 0.0 };
        assert!(cgauss1_pdf(c(0.0, 0.0), &zero).is_err());
    }

    #[test]
    fn cgauss2_identity_covariance_and_circularity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let xs = cgauss2_sample(&ComplexGauss2::centered(HermitianCov2::identity()), 100_000, &mut rng);
        let n = xs.len() as f64;
        let mut cov = [[c(0.0, 0.0); 2]; 2];
        let mut pseudo = c(0.0, 0.0);
        for z in &xs {
            for a in 0..2 {
                for b in 0..2 {
                    cov[a][b] += z[a] * z[b].conj() / n;
                }
            }
            pseudo += z[0] * z[0] / n;
        }
        let target = HermitianCov2::identity().to_matrix();
        for a in 0..2 {
            for b in 0..2 {
                assert!((cov[a][b] - target[a][b]).norm() < 0.05);
            }
        }
        assert!(pseudo.norm() < 0.05);
    }

    #[test]
    fn cgauss2_degenerate_direction_and_determinism() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = ComplexGauss2::centered(HermitianCov2::diag(0.0, 1.0));
        assert!(cgauss2_sample(&p, 1000, &mut rng).iter().all(|z| z[0] == c(0.0, 0.0)));

        let draw = || {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            cgauss2_sample(&ComplexGauss2::centered(HermitianCov2::identity()), 3, &mut rng)
        };
        assert_eq!(draw(), draw());
    }

    #[test]
    fn ct1_pdf_values_and_normalisation() {
        let p = ComplexT1Params::new(c(0.0, 0.0), 1.0, 1.0).unwrap();
        assert!((ct1_pdf(c(0.0, 0.0), &p).unwrap() - 1.0 / PI).abs() < 1e-12);
        assert!((ct1_pdf(c(1.0, 0.0), &p).unwrap() - 1.0 / (4.0 * PI)).abs() < 1e-12);
        // Mass outside radius 50 is 1/(1+2500) ~ 4e-4.
        let total = integrate_disc(50.0, 2000, |z| ct1_pdf(z, &p).unwrap());
        assert!((total - 1.0).abs() < 2e-2, "{total}");
        let point = ComplexT1Params::new(c(0.0, 0.0), 0.0, 1.0).unwrap();
        assert!(ct1_pdf(c(0.0, 0.0), &point).is_err());
    }

    #[test]
    fn ct1_log_pdf_matches_pdf() {
        let p = ComplexT1Params::new(c(0.3, -0.2), 2.5, 1.0).unwrap();
        assert!((ct1_log_pdf(p.mean, &p).unwrap() + (PI * 2.5).ln()).abs() < 1e-12);
        let unit = ComplexT1Params::new(c(0.0, 0.0), 1.0, 1.0).unwrap();
        assert!((ct1_log_pdf(c(0.0, 1.0), &unit).unwrap() + (4.0 * PI).ln()).abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let p = ComplexT1Params::new(
                c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
                rng.random_range(0.01..10.0),
                rng.random_range(0.2..5.0),
            )
            .unwrap();
            let y = c(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
            let lp = ct1_log_pdf(y, &p).unwrap();
            let direct = ct1_pdf(y, &p).unwrap().ln();
            assert!((lp - direct).abs() <= 1e-12 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn ct1_sample_matches_inverse_cdf_oracle() {
        let p = ComplexT1Params::new(c(0.0, 0.0), 1.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let radii: Vec<f64> = ct1_sample(&p, 100_000, &mut rng)
            .unwrap()
            .iter()
            .map(|y| (y - p.mean).norm())
            .collect();
        // Inverse of F(r) = 1 - 1/(1 + r^2): r = sqrt(1/(1-u) - 1).
        let oracle: Vec<f64> = (0..100_000)
            .map(|_| {
                let u: f64 = rng.random();
                (1.0 / (1.0 - u) - 1.0).sqrt()
            })
            .collect();
        assert!(ks_two_sample(&radii, &oracle) <= 0.02);

        let mut sorted = radii.clone();
        sorted.sort_by(f64::total_cmp);
        let median = sorted[sorted.len() / 2];
        assert!((median - 1.0).abs() < 0.03, "{median}");

        let again = |seed| ct1_sample(&p, 4, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        assert_eq!(again(9), again(9));
    }

    #[test]
    fn ratio_distribution_examples() {
        let law = ratio_distribution(&HermitianCov2::identity()).unwrap();
        assert_eq!((law.mean, law.spread, law.dof), (c(0.0, 0.0), 1.0, 1.0));

        let law = ratio_distribution(&HermitianCov2::diag(1.0, 4.0)).unwrap();
        assert_eq!((law.mean, law.spread), (c(0.0, 0.0), 4.0));

        let rank1 = HermitianCov2::new(1.0, 1.0, c(0.0, 1.0)).unwrap();
        let law = ratio_distribution(&rank1).unwrap();
        assert!(law.is_degenerate());
        assert!((law.mean - c(0.0, -1.0)).norm() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for [m1, m2] in cgauss2_sample(&ComplexGauss2::centered(rank1), 100_000, &mut rng) {
            assert!((m2 / m1 - c(0.0, -1.0)).norm() < 1e-9);
        }

        assert!(ratio_distribution(&HermitianCov2::diag(0.0, 1.0)).is_err());
        let law = ratio_distribution(&HermitianCov2::diag(1.0, 0.0)).unwrap();
        assert!(law.is_degenerate() && law.mean == c(0.0, 0.0));
    }

    #[test]
    fn verify_theorem1_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(verify_theorem1(&HermitianCov2::identity(), 100_000, &mut rng).unwrap() <= 0.02);
        let cov = HermitianCov2::new(1.0, 4.0, c(1.2, 0.5)).unwrap();
        assert!(verify_theorem1(&cov, 100_000, &mut rng).unwrap() <= 0.02);
        let ks = verify_theorem1(&cov, 100, &mut rng).unwrap();
        assert!((0.0..=1.0).contains(&ks));
    }

    #[test]
    fn scale_mixture_density_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let p = ComplexT1Params::new(c(0.2, 0.1), 0.7, 1.0).unwrap();
        let us: Vec<f64> = (0..20_000).map(|_| Gamma::new(1.0, 1.0).unwrap().sample(&mut rng)).collect();
        for _ in 0..200 {
            let y = p.mean + c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let mc = us
                .iter()
                .map(|&u| cgauss1_pdf(y, &ComplexGauss1 { mean: p.mean, variance: p.spread / u }).unwrap())
                .sum::<f64>()
                / us.len() as f64;
            let exact = ct1_pdf(y, &p).unwrap();
            assert!((mc / exact - 1.0).abs() < 0.02, "{mc} vs {exact}");
        }
    }

    #[test]
    fn common_phase_leaves_ratio_law_unchanged() {
        let cov = HermitianCov2::new(2.0, 1.0, c(0.4, -0.9)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let law = ratio_distribution(&cov).unwrap();
        let draw = |rng: &mut ChaCha8Rng, phase: C64| -> Vec<f64> {
            cgauss2_sample(&ComplexGauss2::centered(cov), 100_000, rng)
                .into_iter()
                .map(|[a, b]| ((b * phase) / (a * phase) - law.mean).norm())
                .collect()
        };
        let plain = draw(&mut rng, c(1.0, 0.0));
        let rotated = draw(&mut rng, C64::from_polar(1.0, 1.1));
        assert!(ks_two_sample(&plain, &rotated) <= 0.02);
    }

    #[test]
    fn ks_two_sample_basic() {
        assert_eq!(ks_two_sample(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]), 0.0);
        assert_eq!(ks_two_sample(&[0.0, 1.0], &[5.0, 6.0]), 1.0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn cov_strategy() -> impl Strategy<Value = HermitianCov2> {
            (0.1f64..10.0, 0.1f64..10.0, 0.0f64..0.99, 0.0f64..std::f64::consts::TAU).prop_map(
                |(s1, s2, r, ph)| HermitianCov2::from_correlation(s1.sqrt(), s2.sqrt(), C64::from_polar(r, ph)).unwrap(),
            )
        }

        proptest! {
            #[test]
            fn pdf_is_maximal_at_the_mean(
                mre in -3.0f64..3.0, mim in -3.0f64..3.0, spread in 0.01f64..10.0,
                dof in 0.1f64..10.0, dre in -3.0f64..3.0, dim in -3.0f64..3.0,
            ) {
                let p = ComplexT1Params::new(c(mre, mim), spread, dof).unwrap();
                let peak = ct1_pdf(p.mean, &p).unwrap();
                prop_assert!((peak - 1.0 / (PI * spread)).abs() <= 1e-12 * peak);
                prop_assert!(ct1_pdf(p.mean + c(dre, dim), &p).unwrap() <= peak);
            }

            #[test]
            fn ratio_law_is_scale_free(cov in cov_strategy(), k in 1e-3f64..1e3) {
                let a = ratio_distribution(&cov).unwrap();
                let b = ratio_distribution(&cov.scaled(k).unwrap()).unwrap();
                prop_assert!((a.mean - b.mean).norm() <= 1e-12 * (1.0 + a.mean.norm()));
                prop_assert!((a.spread - b.spread).abs() <= 1e-12 * (1.0 + a.spread));
                prop_assert_eq!(a.dof, b.dof);
            }
        }
    }
}
