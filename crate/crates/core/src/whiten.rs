//! Noise whitening.
//!
//! With a positive definite noise covariance `R`, the whitener is the inverse PSD
//! square root `Q = R^{-1/2}`, so `Q n ~ CN2(0, I)`. When `R` is rank-1 (a point-source
//! noise, `n2 = beta n1`) no such `Q` exists; the rank-1 whitener instead cancels the
//! noise on channel 2 exactly and scales channel 1 to unit variance:
//!
//! ```text
//! Q = [[ 1/sigma1,          0               ],
//!      [ 1/sigma1,  -1/(sigma1 * beta)      ]]
//! ```
//!
//! which gives `n'1 ~ CN(0, 1)` and `n'2 = 0`. Both kinds are invertible, so RTFs can be
//! mapped back and forth in either case.

use std::fs;
use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::cstat::HermitianCov2;
use crate::{Error, Result, C64};

/// Default eigenvalue-ratio threshold below which a covariance is treated as rank-1.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Small dense complex 2x2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        Mat2([[o, z], [z, o]])
    }

    pub fn from_real_diag(a: f64, b: f64) -> Self {
        let z = C64::new(0.0, 0.0);
        Mat2([[C64::new(a, 0.0), z], [z, C64::new(b, 0.0)]])
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[i][j]
    }

    pub fn mul_vec(&self, v: [C64; 2]) -> [C64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat2 {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det();
        if d.norm() == 0.0 || !d.is_finite() {
            return None;
        }
        let m = &self.0;
        Some(Mat2([[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]]))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        d
    }
}

impl From<&HermitianCov2> for Mat2 {
    fn from(c: &HermitianCov2) -> Self {
        Mat2(c.to_matrix())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WhitenerKind {
    FullRank,
    Rank1,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Whitener {
    q: Mat2,
    q_inv: Mat2,
    kind: WhitenerKind,
}

impl Whitener {
    pub fn identity() -> Self {
        Self {
            q: Mat2::identity(),
            q_inv: Mat2::identity(),
            kind: WhitenerKind::FullRank,
        }
    }

    pub fn q(&self) -> &Mat2 {
        &self.q
    }

    pub fn q_inv(&self) -> &Mat2 {
        &self.q_inv
    }

    pub fn kind(&self) -> WhitenerKind {
        self.kind
    }
}

/// Builds the whitener for noise covariance `r`.
///
/// The eigenvalue ratio `min/max` decides the branch: above `rank_tol` the inverse PSD
/// square root is used, otherwise the rank-1 construction.
pub fn build_whitener(r: &HermitianCov2, rank_tol: f64) -> Result<Whitener> {
    let (lo, hi) = r.eigenvalues();
    if !(hi > 0.0) {
        return Err(Error::Domain("noise covariance is the zero matrix".into()));
    }
    if lo / hi > rank_tol {
        Ok(full_rank_whitener(r))
    } else {
        rank1_whitener(r, rank_tol)
    }
}

/// `R^{1/2} = (R + sI) / t` with `s = sqrt(det R)`, `t = sqrt(tr R + 2s)`; the inverse
/// follows from the 2x2 adjugate: `R^{-1/2} = adj(R + sI) / (s t)`.
fn full_rank_whitener(r: &HermitianCov2) -> Whitener {
    let s = r.det().sqrt();
    let t = (r.trace() + 2.0 * s).sqrt();
    let c = r.c12();
    let re = |x: f64| C64::new(x, 0.0);
    let q_inv = Mat2([
        [re((r.v11() + s) / t), c / t],
        [c.conj() / t, re((r.v22() + s) / t)],
    ]);
    let st = s * t;
    let q = Mat2([
        [re((r.v22() + s) / st), -c / st],
        [-c.conj() / st, re((r.v11() + s) / st)],
    ]);
    Whitener { q, q_inv, kind: WhitenerKind::FullRank }
}

fn rank1_whitener(r: &HermitianCov2, rank_tol: f64) -> Result<Whitener> {
    if !(r.v11() > 0.0) {
        return Err(Error::Domain(
            "rank-1 noise with no component on channel 1 cannot be whitened".into(),
        ));
    }
    let sigma1 = r.v11().sqrt();
    // n2 = beta * n1 with E[n1 conj(n2)] = conj(beta) v11.
    let beta = r.c12().conj() / r.v11();
    let z = C64::new(0.0, 0.0);
    let inv_s1 = C64::new(1.0 / sigma1, 0.0);
    let q = if beta.norm_sqr() > rank_tol {
        Mat2([[inv_s1, z], [inv_s1, -inv_s1 / beta]])
    } else {
        // Channel 2 is noise-free already.
        Mat2([[inv_s1, z], [z, inv_s1]])
    };
    let q_inv = q.inverse().ok_or(Error::VanishingDenominator)?;
    Ok(Whitener { q, q_inv, kind: WhitenerKind::Rank1 })
}

pub fn whiten_obs(w: &Whitener, m: [C64; 2]) -> [C64; 2] {
    w.q.mul_vec(m)
}

/// Maps an RTF to the whitened domain: the ratio of the components of `Q [1, r]^T`.
pub fn whiten_rtf(w: &Whitener, r: C64) -> Result<C64> {
    mobius(&w.q, r)
}

/// Inverse of [`whiten_rtf`]: the ratio of the components of `Q^{-1} [1, r']^T`.
pub fn dewhiten_rtf(w: &Whitener, r_prime: C64) -> Result<C64> {
    mobius(&w.q_inv, r_prime)
}

fn mobius(m: &Mat2, r: C64) -> Result<C64> {
    let den = m.get(0, 0) + m.get(0, 1) * r;
    let num = m.get(1, 0) + m.get(1, 1) * r;
    let scale = m.get(0, 0).norm() + m.get(0, 1).norm() * r.norm();
    if den.norm() <= 1e-14 * scale || den.norm() == 0.0 {
        return Err(Error::VanishingDenominator);
    }
    let out = num / den;
    if !out.is_finite() {
        return Err(Error::VanishingDenominator);
    }
    Ok(out)
}

/// Whitens a pair of `F x T` spectra with one whitener per frequency row.
pub fn whiten_spectra(
    m1: &Array2<C64>,
    m2: &Array2<C64>,
    whiteners: &[Whitener],
) -> Result<(Array2<C64>, Array2<C64>)> {
    if m1.dim() != m2.dim() {
        return Err(Error::shape(format!("{:?}", m1.dim()), format!("{:?}", m2.dim())));
    }
    if whiteners.len() != m1.nrows() {
        return Err(Error::shape(
            format!("{} whiteners", m1.nrows()),
            format!("{}", whiteners.len()),
        ));
    }
    let mut o1 = m1.clone();
    let mut o2 = m2.clone();
    for (f, w) in whiteners.iter().enumerate() {
        for t in 0..m1.ncols() {
            let [a, b] = whiten_obs(w, [m1[[f, t]], m2[[f, t]]]);
            o1[[f, t]] = a;
            o2[[f, t]] = b;
        }
    }
    Ok((o1, o2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct CovRecord {
    v11: f64,
    v22: f64,
    re_c12: f64,
    im_c12: f64,
}

/// Known, stationary noise statistics: one covariance per frequency row.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    covs: Vec<HermitianCov2>,
}

impl NoiseModel {
    pub fn new(covs: Vec<HermitianCov2>) -> Self {
        Self { covs }
    }

    pub fn uniform(cov: HermitianCov2, n_freqs: usize) -> Self {
        Self { covs: vec![cov; n_freqs] }
    }

    pub fn covs(&self) -> &[HermitianCov2] {
        &self.covs
    }

    pub fn len(&self) -> usize {
        self.covs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.covs.is_empty()
    }

    pub fn scaled(&self, k: f64) -> Result<Self> {
        Ok(Self {
            covs: self.covs.iter().map(|c| c.scaled(k)).collect::<Result<_>>()?,
        })
    }

    pub fn whiteners(&self, rank_tol: f64) -> Result<Vec<Whitener>> {
        self.covs.iter().map(|c| build_whitener(c, rank_tol)).collect()
    }

    /// Parses a JSON array of `{v11, v22, re_c12, im_c12}` records.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let records: Vec<CovRecord> = serde_json::from_str(s)?;
        let covs = records
            .into_iter()
            .map(|r| HermitianCov2::new(r.v11, r.v22, C64::new(r.re_c12, r.im_c12)))
            .collect::<Result<_>>()?;
        Ok(Self { covs })
    }

    pub fn to_json_string(&self) -> String {
        let records: Vec<CovRecord> = self
            .covs
            .iter()
            .map(|c| CovRecord { v11: c.v11(), v22: c.v22(), re_c12: c.c12().re, im_c12: c.c12().im })
            .collect();
        serde_json::to_string_pretty(&records).expect("plain records always serialize")
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json_string())?;
        Ok(())
    }
}
