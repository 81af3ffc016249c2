//! Shared corpora for the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use enumdelay::problems::{CnfFormula, FlashlightAllSat};
use enumdelay::scripted::Scripted;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A named scripted inner enumerator.
pub struct Named {
    pub name: String,
    pub inner: Scripted,
}

fn named(name: impl Into<String>, inner: Scripted) -> Named {
    Named {
        name: name.into(),
        inner,
    }
}

/// Mixed schedules: bursts, isolated gaps, dense/gap blocks, random delays.
pub fn scripted_corpus() -> Vec<Named> {
    let mut out = vec![
        named("empty", Scripted::from_output_times(vec![])),
        named("singleton", Scripted::from_output_times(vec![1])),
        named("late-singleton", Scripted::from_output_times(vec![40])),
        named("linear", Scripted::from_output_times((1..=50).collect())),
        named(
            "slow-linear",
            Scripted::from_output_times((1..=30).map(|k| 7 * k).collect()),
        ),
        named(
            "quadratic",
            Scripted::from_output_times((1..=20).map(|k| k * k).collect()),
        ),
        named(
            "one-two-hundred",
            Scripted::from_output_times(vec![1, 2, 100]),
        ),
        named("burst-16", Scripted::burst(16)),
        named("burst-256", Scripted::burst(256)),
        named(
            "fenced",
            Scripted::from_output_times((20..60).collect()).with_fence(10),
        ),
        named("doubling-blocks", Scripted::dense_blocks(&doubling(6, 30))),
        named("front-loaded", front_loaded(64, 12, 40)),
    ];
    for g in 1..=4 {
        out.push(named(format!("gaps-{g}"), with_gaps(60, g, 50)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for i in 0..8 {
        let len = rng.gen_range(1..80);
        let delays: Vec<u64> = (0..len)
            .map(|_| {
                if rng.gen_bool(0.1) {
                    rng.gen_range(10..120)
                } else {
                    rng.gen_range(1..4)
                }
            })
            .collect();
        out.push(named(format!("random-{i}"), Scripted::from_delays(&delays)));
    }
    out
}

/// Blocks of `2^j` outputs at delay 1 separated by waits of `gap * 2^j`.
pub fn doubling(blocks: u32, gap: u64) -> Vec<(u64, u64)> {
    (0..blocks).map(|j| (1 << j, gap << j)).collect()
}

/// `dense` outputs at delay 1, then `sparse` outputs each after a wait of `gap`.
pub fn front_loaded(dense: u64, sparse: u64, gap: u64) -> Scripted {
    let mut delays = vec![1; dense as usize];
    delays.extend(std::iter::repeat_n(gap, sparse as usize));
    Scripted::from_delays(&delays)
}

/// `len` outputs at delay 1 with `g` evenly spread waits of `wait` steps.
pub fn with_gaps(len: usize, g: usize, wait: u64) -> Scripted {
    let mut delays = vec![1; len];
    for j in 1..=g {
        delays[j * len / (g + 1)] = wait;
    }
    Scripted::from_delays(&delays)
}

/// Random 3-CNFs with 4 to 12 variables plus a few fixed edge cases.
pub fn cnf_corpus() -> Vec<Arc<CnfFormula>> {
    let mut out = vec![
        CnfFormula::new(3, vec![]),
        CnfFormula::new(2, vec![vec![1], vec![2]]),
        CnfFormula::new(1, vec![vec![1], vec![-1]]),
        CnfFormula::new(4, vec![vec![1, -2], vec![2, 3, -4], vec![-1, 4]]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0xc1a5e);
    for i in 0..10 {
        let n = 4 + (i % 9);
        let m = rng.gen_range(1..=2 * n as usize);
        let clauses = (0..m)
            .map(|_| {
                (0..3)
                    .map(|_| {
                        let v = rng.gen_range(1..=n);
                        if rng.gen_bool(0.5) {
                            v
                        } else {
                            -v
                        }
                    })
                    .collect()
            })
            .collect();
        out.push(CnfFormula::new(n as usize, clauses));
    }
    out.into_iter().map(Arc::new).collect()
}

pub fn allsat(phi: &Arc<CnfFormula>) -> FlashlightAllSat {
    FlashlightAllSat::new(Arc::clone(phi)).unwrap()
}
