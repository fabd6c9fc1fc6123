//! Small RTF mean-squared-error sweep, dense and sparse sources.
//!
//! `cargo run --release --example bench_rtf_mse [trials_per_cell]`

use rbrloc::bench::{run_exp1, summarize, write_summary_csv, Exp1Config, Sparsity, SnrDb};

fn main() -> rbrloc::Result<()> {
    let trials = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(200);
    let mut rows = Vec::new();
    for sparsity in [Sparsity::Dense, Sparsity::Sparse] {
        let cfg = Exp1Config {
            trials_per_cell: trials,
            snr_grid: [-5.0, 0.0, 10.0, 20.0, 30.0].map(SnrDb).to_vec(),
            sparsity,
            ..Default::default()
        };
        rows.extend(summarize(&run_exp1(&cfg)?, cfg.seed).into_iter().filter(|r| r.experiment.ends_with("raw")));
    }
    write_summary_csv(&rows, std::io::stdout().lock())
}
