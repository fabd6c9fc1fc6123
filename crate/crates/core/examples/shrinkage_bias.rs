//! Plain microphone ratios are pulled towards zero by noise in the denominator;
//! rectified ratios are centred on the true RTF.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rbrloc::cstat::standard_cnormal;
use rbrloc::rbr::{biased_ratio_params, rectify_bin};
use rbrloc::whiten::WhitenerKind;
use rbrloc::C64;

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn main() -> rbrloc::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let r = C64::new(1.0, 0.0);
    println!("source variance | raw-ratio location (predicted) | rectified location");
    for s2 in [0.25, 1.0, 4.0, 16.0] {
        let (mut raw, mut rect) = (Vec::new(), Vec::new());
        for _ in 0..100_000 {
            let s = standard_cnormal(&mut rng) * f64::sqrt(s2);
            let m1 = s + standard_cnormal(&mut rng);
            let m2 = r * s + standard_cnormal(&mut rng);
            raw.push((m2 / m1).re);
            rect.push(rectify_bin(m1, m2, s2, r.norm_sqr() * s2 + 1.0, WhitenerKind::FullRank).unwrap().0.re);
        }
        let predicted = biased_ratio_params(s2, r)?.mean.re;
        println!("{s2:>15} | {:>22.3} ({predicted:.3}) | {:>18.3}", median(raw), median(rect));
    }
    Ok(())
}
