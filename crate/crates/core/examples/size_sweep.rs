//! Runs the blacklist-size experiment with optional overrides:
//! `size_sweep [channel_spread] [replicates] [none|full|shift-only|scale-only]`.

use std::time::Instant;

use multitarget::{run_size_sweep, NormMode, SizeSweepResultF64, SweepConfig};

fn main() -> multitarget::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut config = SweepConfig::default();
    if let Some(c) = args.first() {
        config.population.channel_spread = c.parse().expect("channel spread");
    }
    if let Some(r) = args.get(1) {
        config.replicates = r.parse().expect("replicates");
    }
    if let Some(m) = args.get(2) {
        config.norm = m.parse::<NormMode>()?;
    }
    let start = Instant::now();
    let result: SizeSweepResultF64 = run_size_sweep(&config)?;
    println!("blacklist_size,top_s_eer,top_1_eer");
    for row in &result.rows {
        println!("{},{:.4},{:.4}", row.blacklist_size, row.top_s_eer, row.top_1_eer);
    }
    eprintln!("{} replicates in {:?}", result.replicate_count, start.elapsed());
    Ok(())
}
