//! Measures the all-times factor-2 failure rate of the distinct-count sketch
//! over a grid of (k_min, reps) and prints the cheapest setting per budget.
//!
//! Usage: cargo run --release --example calibrate_sketch [streams] [log2 length]

use enumdelay::sketch::{DistinctSketch, SketchParams};
use enumdelay::Solution;
use rayon::prelude::*;

fn failure_rate(params: SketchParams, streams: u64, items: &[Solution]) -> f64 {
    let failed = (0..streams)
        .into_par_iter()
        .filter(|&seed| {
            let mut sk = DistinctSketch::new(params, 0xca1b ^ (seed << 16)).unwrap();
            items.iter().enumerate().any(|(i, s)| {
                sk.update(s);
                let t = (i + 1) as f64;
                let e = sk.estimate();
                e < t / 2.0 || e > 2.0 * t
            })
        })
        .count();
    failed as f64 / streams as f64
}

fn main() {
    let mut args = std::env::args().skip(1);
    let streams: u64 = args.next().map_or(2000, |a| a.parse().unwrap());
    let log_len: u32 = args.next().map_or(16, |a| a.parse().unwrap());
    let items: Vec<Solution> = (0..1u64 << log_len)
        .map(|i| Solution::from_uint(i, log_len as usize + 1))
        .collect();
    let mut grid = Vec::new();
    for reps in [1, 3, 5, 7] {
        for k in [4, 6, 8, 10, 12, 16, 20, 24, 32] {
            let params = SketchParams { k_min: k, reps };
            let f = failure_rate(params, streams, &items);
            println!("k_min={k:2} reps={reps} failure={f:.4}");
            grid.push((params, f));
        }
    }
    for delta in [0.25, 0.1, 0.05] {
        // Keep a margin so that an independent check at the same budget passes.
        let best = grid
            .iter()
            .filter(|(_, f)| *f <= 0.75 * delta)
            .min_by_key(|(p, _)| (p.k_min * p.reps, p.reps))
            .unwrap();
        println!("delta={delta}: {:?} measured {:.4}", best.0, best.1);
    }
}
