//! Simulated estimator variance on cycle powers across block sizes, written
//! as CSV to stdout. Defaults are small; pass `n replicates` to scale up.
//!
//! ```text
//! cargo run --release --example cycle_variance_sweep -- 2000 100000 > sweep.csv
//! ```

use netexp::exposure::ExposureKind;
use netexp::experiments::{cycle_power_sweep, SweepConfig};

fn main() -> netexp::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>());
    let n = args.next().transpose().ok().flatten().unwrap_or(500) as usize;
    let replicates = args.next().transpose().ok().flatten().unwrap_or(5_000);
    let cfg = SweepConfig {
        n,
        ks: vec![1, 2, 3],
        cs: (1..=12).collect(),
        p: 0.5,
        spec: ExposureKind::FullNeighborhood,
        y1: 1.0,
        y0: 0.0,
        replicates,
        seed: 1,
    };
    let result = cycle_power_sweep(&cfg)?;
    result.write_csv(std::io::stdout().lock())?;
    for &k in &cfg.ks {
        let best = result.argmin(k).expect("non-empty sweep");
        eprintln!("k = {k}: smallest variance at c = {} (n * Var = {:.2})", best.c, n as f64 * best.var);
    }
    Ok(())
}
