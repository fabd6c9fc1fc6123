//! Small delay-error sweep: RBR grid selection against PHAT-histogram.
//!
//! `cargo run --release --example bench_tdoa [trials_per_snr]`

use rbrloc::bench::{run_exp2, summarize, Exp2Config, SnrDb};

fn main() -> rbrloc::Result<()> {
    let trials = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(50);
    let cfg = Exp2Config { trials_per_snr: trials, snr_grid: [-9.0, -6.0, -3.0, 0.0, 6.0].map(SnrDb).to_vec(), ..Default::default() };
    println!("{:>6}  {:>8}  {:>8}", "SNR dB", "RBR", "PHAT");
    let rows = summarize(&run_exp2(&cfg)?, cfg.seed);
    for pair in rows.chunks(2) {
        println!("{:>6}  {:>7.1}%  {:>7.1}%", pair[0].snr_db.to_string(), 100.0 * pair[0].mean, 100.0 * pair[1].mean);
    }
    Ok(())
}
