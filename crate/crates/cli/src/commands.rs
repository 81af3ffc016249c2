use std::collections::HashSet;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use anyhow::{bail, Context, Result};
use enumdelay::analysis::{
    check_incremental, summarize, tightest_constant, IncrementalLimits, IncrementalVerdict,
    ProfileSummary,
};
use enumdelay::problems::{
    brute_force_models, explicit_generator, BruteForceSat, ExplicitGenerator, ExplicitSet,
    PadEnumerator, PaddedInstance, Ratio,
};
use enumdelay::regularize::{
    queue_amortize, shortcut_regularize, stock_regularize, DelayBound, Evaluated, StockStats,
};
use enumdelay::sampling::{
    sample_enumerate, sample_enumerate_biased, sample_enumerate_sketch, SamplingConfig,
};
use enumdelay::sketch::DistinctSketch;
use enumdelay::trace::write_trace;
use enumdelay::{record_trace, run_to_end, EnumerationTrace, Enumerator, Solution};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::source::{max_vars, parse_poly, read_cnf, Source};
use crate::{FitArgs, PadBenchArgs, ProfileArgs, RegularizeArgs, SampleArgs, Scheme};

#[derive(Debug, Serialize)]
struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

impl Check {
    fn new(name: &'static str, pass: bool, detail: String) -> Self {
        Self { name, pass, detail }
    }
}

fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

fn prepare(out: Option<&Path>) -> Result<()> {
    if let Some(dir) = out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(())
}

/// Prints `report` and saves it as `report.json` under `out`.
fn report<T: Serialize>(out: Option<&Path>, report: &T) -> Result<()> {
    let json = serde_json::to_string_pretty(report)? + "\n";
    if let Some(dir) = out {
        fs::write(dir.join("report.json"), &json)?;
    }
    print!("{json}");
    Ok(())
}

fn save_trace(out: Option<&Path>, file: &str, instance: &str, t: &EnumerationTrace) -> Result<()> {
    if let Some(dir) = out {
        let path = dir.join(file);
        let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        write_trace(BufWriter::new(f), instance, t)?;
    }
    Ok(())
}

fn save_rows<T: Serialize>(out: Option<&Path>, file: &str, rows: &[T]) -> Result<()> {
    if let Some(dir) = out {
        let mut w = csv::Writer::from_path(dir.join(file))?;
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
    }
    Ok(())
}

fn limits(fit: &FitArgs) -> Result<IncrementalLimits> {
    if !(fit.max_constant.is_finite() && fit.max_constant > 0.0) {
        bail!("--max-constant must be positive");
    }
    Ok(IncrementalLimits {
        max_n_exponent: fit.max_n_exponent,
        max_constant: fit.max_constant,
    })
}

fn ratio(s: &str) -> Result<Ratio> {
    Ok(s.parse::<Ratio>()?)
}

fn exponent_of(t: Ratio) -> f64 {
    t.den() as f64 / t.num() as f64
}

fn describe(v: &IncrementalVerdict) -> String {
    match v {
        IncrementalVerdict::Fits(f) => {
            format!("fits with c = {} and n exponent {}", f.c, f.n_exponent)
        }
        IncrementalVerdict::Violated { m, required_c } => {
            format!("violated at output {m}, which needs c = {required_c}")
        }
        IncrementalVerdict::Incomplete => "trace truncated".into(),
    }
}

#[derive(Serialize)]
struct Fit {
    a: f64,
    declared: bool,
    limits: IncrementalLimits,
    #[serde(flatten)]
    verdict: IncrementalVerdict,
}

#[derive(Serialize)]
struct ProfileReport {
    instance: String,
    n: usize,
    summary: ProfileSummary,
    incremental: Fit,
    checks: Vec<Check>,
    pass: bool,
}

pub fn profile(args: ProfileArgs) -> Result<bool> {
    let t = args.source.t.as_deref().map(ratio).transpose()?;
    let source = Source::from_flags(
        args.source.input.as_deref(),
        args.source.script.as_deref(),
        t,
    )?;
    let limits = limits(&args.fit)?;
    let out = args.out.as_deref();
    prepare(out)?;
    let mut e = source.build()?;
    let trace = record_trace(e.as_mut(), args.budget.unwrap_or(u64::MAX))?;
    let n = trace.input_size;
    let p = match &args.p_coeffs {
        Some(c) => parse_poly(c)?.eval_positive(n, "p")?,
        None => {
            let k = trace.len().max(1) as u64;
            trace.relative_time(trace.len()).div_ceil(k).max(1)
        }
    };
    let declared = args.a.or(source.t.map(exponent_of));
    let a = declared.unwrap_or(1.0);
    if !(a.is_finite() && a >= 0.0) {
        bail!("--a must be nonnegative");
    }
    let verdict = check_incremental(&trace, a, n, limits);
    let mut checks = Vec::new();
    if declared.is_some() {
        checks.push(Check::new(
            "incremental",
            verdict.fits(),
            describe(&verdict),
        ));
    }
    save_trace(out, "trace.csv", &source.name, &trace)?;
    let r = ProfileReport {
        instance: source.name,
        n,
        summary: summarize(&trace, p),
        incremental: Fit {
            a,
            declared: declared.is_some(),
            limits,
            verdict,
        },
        pass: all_pass(&checks),
        checks,
    };
    report(out, &r)?;
    Ok(r.pass)
}

/// Each inner solution appears exactly once in `outer`.
fn same_set(inner: &EnumerationTrace, outer: &EnumerationTrace) -> Check {
    let mut a: Vec<&Solution> = inner.solutions.iter().collect();
    let mut b: Vec<&Solution> = outer.solutions.iter().collect();
    a.sort();
    b.sort();
    let distinct = b.windows(2).all(|w| w[0] != w[1]);
    Check::new(
        "same_set",
        a == b && distinct,
        format!("{} inner outputs, {} outer outputs", a.len(), b.len()),
    )
}

#[derive(Serialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
enum SchemeReport {
    Queue {
        p: u64,
        a: u32,
    },
    Shortcut {
        bounds: Evaluated,
        delay_bound: u64,
        stored_pairs: usize,
        jumps: usize,
    },
    Stock {
        bounds: Evaluated,
        delay_bound: u64,
        stats: StockStats,
    },
}

#[derive(Serialize)]
struct RegularizeReport {
    instance: String,
    n: usize,
    inner: ProfileSummary,
    outer: Option<ProfileSummary>,
    regularizer: SchemeReport,
    checks: Vec<Check>,
    pass: bool,
}

fn delay_check(t: &EnumerationTrace, bound: u64) -> Check {
    let d = t.max_delay();
    Check::new("delay", d <= bound, format!("max delay {d}, bound {bound}"))
}

pub fn regularize(args: RegularizeArgs) -> Result<bool> {
    let t = args.source.t.as_deref().map(ratio).transpose()?;
    let source = Source::from_flags(
        args.source.input.as_deref(),
        args.source.script.as_deref(),
        t,
    )?;
    let out = args.out.as_deref();
    prepare(out)?;
    let inner = run_to_end(source.build()?.as_mut())?;
    let n = inner.input_size;
    let p = parse_poly(&args.p_coeffs)?;
    let bounds = || -> Result<DelayBound> {
        let h = args
            .h_coeffs
            .as_deref()
            .context("--h-coeffs is required by this scheme")?;
        let q = args
            .q_coeffs
            .as_deref()
            .context("--q-coeffs is required by this scheme")?;
        Ok(DelayBound::new(p.clone(), parse_poly(h)?, parse_poly(q)?))
    };

    let mut checks = Vec::new();
    let (outer, regularizer) = match args.scheme {
        Scheme::Queue => {
            let mut q = queue_amortize(source.build()?, args.a, &p)?;
            let outer = run_to_end(&mut q);
            if let Ok(t) = &outer {
                let worst = t
                    .delays()
                    .into_iter()
                    .enumerate()
                    .find(|&(k, d)| d > q.delay_bound(k as u64));
                checks.push(Check::new(
                    "delay",
                    worst.is_none(),
                    match worst {
                        None => {
                            format!("every delay within its bound, max delay {}", t.max_delay())
                        }
                        Some((k, d)) => format!(
                            "delay {d} before output {} exceeds {}",
                            k + 1,
                            q.delay_bound(k as u64)
                        ),
                    },
                ));
            }
            (outer, SchemeReport::Queue { p: q.p(), a: q.a() })
        }
        Scheme::Shortcut => {
            let mut r = shortcut_regularize(source.build()?, &bounds()?)?;
            let outer = run_to_end(&mut r);
            if let Ok(t) = &outer {
                checks.push(delay_check(t, r.delay_bound()));
            }
            let rep = SchemeReport::Shortcut {
                bounds: r.bounds(),
                delay_bound: r.delay_bound(),
                stored_pairs: r.stored_pairs(),
                jumps: r.jumps(),
            };
            (outer, rep)
        }
        Scheme::Stock => {
            let mut r = stock_regularize(source.build()?, &bounds()?)?;
            let outer = run_to_end(&mut r);
            if let Ok(t) = &outer {
                checks.push(delay_check(t, r.delay_bound()));
            }
            let rep = SchemeReport::Stock {
                bounds: r.bounds(),
                delay_bound: r.delay_bound(),
                stats: r.stats(),
            };
            (outer, rep)
        }
    };
    let outer = match outer {
        Ok(t) => {
            checks.insert(0, same_set(&inner, &t));
            Some(t)
        }
        Err(e) => {
            checks.push(Check::new("run", false, e.to_string()));
            None
        }
    };
    save_trace(out, "inner.csv", &source.name, &inner)?;
    if let Some(t) = &outer {
        save_trace(out, "outer.csv", &source.name, t)?;
    }
    let gap_p = p.eval(n).max(1);
    let r = RegularizeReport {
        instance: source.name,
        n,
        inner: summarize(&inner, gap_p),
        outer: outer.as_ref().map(|t| summarize(t, gap_p)),
        regularizer,
        pass: all_pass(&checks),
        checks,
    };
    report(out, &r)?;
    Ok(r.pass)
}

#[derive(Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
enum Mode {
    Uniform,
    Biased,
    Sketch,
}

#[derive(Serialize)]
struct TrialRow {
    trial: u64,
    seed: u64,
    k: u64,
    draws: u64,
    /// Draws until the last distinct solution first appeared.
    completion_draws: Option<u64>,
    emitted: u64,
    distinct: usize,
    duplicates: u64,
    coverage: f64,
    covered: bool,
    peak_store_bits: u64,
}

/// Generator and sketch seeds for `trial`, one ChaCha stream per trial.
fn trial_seeds(seed: u64, trial: u64) -> (u64, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    (rng.next_u64(), rng.next_u64())
}

fn run_trial(
    g: &ExplicitGenerator,
    mode: Mode,
    cfg: SamplingConfig,
    seed: u64,
    trial: u64,
) -> Result<TrialRow> {
    let (gen_seed, sketch_seed) = trial_seeds(seed, trial);
    let cfg = cfg.with_seed(gen_seed);
    let gen = Box::new(g.clone());
    let mut e = match mode {
        Mode::Uniform => sample_enumerate(gen, cfg)?,
        Mode::Biased => sample_enumerate_biased(gen, cfg)?,
        Mode::Sketch => {
            let sk = DistinctSketch::for_delta(cfg.epsilon() / 2.0, sketch_seed)?;
            sample_enumerate_sketch(gen, cfg, sk)?
        }
    };
    let mut seen = HashSet::new();
    let size = g.set().len();
    let (mut emitted, mut duplicates, mut peak) = (0, 0, 0);
    let mut completion_draws = None;
    loop {
        let step = e.step()?;
        peak = peak.max(e.store_bits());
        if step.is_done() {
            break;
        }
        if let Some(s) = step.solution() {
            emitted += 1;
            if !seen.insert(s.clone()) {
                duplicates += 1;
            } else if seen.len() == size {
                completion_draws = Some(e.draws());
            }
        }
    }
    Ok(TrialRow {
        trial,
        seed: gen_seed,
        k: e.k(),
        draws: e.draws(),
        completion_draws,
        emitted,
        distinct: seen.len(),
        duplicates,
        coverage: seen.len() as f64 / size as f64,
        covered: seen.len() == size,
        peak_store_bits: peak,
    })
}

#[derive(Serialize)]
struct SampleReport {
    input: String,
    set_size: usize,
    mode: Mode,
    epsilon: f64,
    p_bits: u64,
    seed: u64,
    trials: u64,
    k: u64,
    mean_draws: f64,
    /// Over the trials that covered the set.
    mean_completion_draws: Option<f64>,
    mean_coverage: f64,
    covered_fraction: f64,
    duplicates: u64,
    max_peak_store_bits: u64,
    checks: Vec<Check>,
    pass: bool,
}

pub fn sample(args: SampleArgs) -> Result<bool> {
    if args.trials == 0 {
        bail!("--trials must be positive");
    }
    let text = fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let set =
        ExplicitSet::parse(&text).with_context(|| format!("parsing {}", args.input.display()))?;
    let mode = match (args.sketch, set.weights().is_some()) {
        (true, true) => bail!("--sketch needs an unweighted set"),
        (true, false) => Mode::Sketch,
        (false, true) => Mode::Biased,
        (false, false) => Mode::Uniform,
    };
    let set_size = set.len();
    let p_bits = args.p_bits.unwrap_or(set.max_len().max(1) as u64);
    let cfg = SamplingConfig::new(args.epsilon, p_bits)?;
    let g = explicit_generator(set, 0)?;
    let out = args.out.as_deref();
    prepare(out)?;

    let rows = (0..args.trials)
        .into_par_iter()
        .map(|t| run_trial(&g, mode, cfg, args.seed, t))
        .collect::<Result<Vec<_>>>()?;
    save_rows(out, "coverage.csv", &rows)?;

    let trials = rows.len() as f64;
    let mean = |f: fn(&TrialRow) -> f64| rows.iter().map(f).sum::<f64>() / trials;
    let covered_fraction = rows.iter().filter(|r| r.covered).count() as f64 / trials;
    let duplicates = rows.iter().map(|r| r.duplicates).sum();
    let eps = args.epsilon;
    // Three standard deviations of binomial noise below 1 - eps.
    let floor = 1.0 - eps - 3.0 * (eps * (1.0 - eps) / trials).sqrt();
    let mut checks = vec![Check::new(
        "coverage",
        covered_fraction >= floor,
        format!("{covered_fraction:.4} of trials covered the set, floor {floor:.4}"),
    )];
    if mode != Mode::Sketch {
        checks.push(Check::new(
            "no_duplicates",
            duplicates == 0,
            format!("{duplicates} repeated outputs"),
        ));
    }
    let r = SampleReport {
        input: args.input.display().to_string(),
        set_size,
        mode,
        epsilon: eps,
        p_bits,
        seed: args.seed,
        trials: args.trials,
        k: rows[0].k,
        mean_draws: mean(|r| r.draws as f64),
        mean_completion_draws: {
            let done: Vec<u64> = rows.iter().filter_map(|r| r.completion_draws).collect();
            (!done.is_empty()).then(|| done.iter().sum::<u64>() as f64 / done.len() as f64)
        },
        mean_coverage: mean(|r| r.coverage),
        covered_fraction,
        duplicates,
        max_peak_store_bits: rows.iter().map(|r| r.peak_store_bits).max().unwrap_or(0),
        pass: all_pass(&checks),
        checks,
    };
    report(out, &r)?;
    Ok(r.pass)
}

#[derive(Serialize)]
struct PadRow {
    t: String,
    n: usize,
    models: usize,
    padding: u64,
    outputs: usize,
    expected: String,
    exact: bool,
    exponent: f64,
    fit_c: Option<f64>,
    fits: bool,
    /// Constant the next lower exponent would need.
    c_below: f64,
    total_steps: u64,
}

#[derive(Serialize)]
struct PadReport {
    input: String,
    limits: IncrementalLimits,
    rows: Vec<PadRow>,
    checks: Vec<Check>,
    pass: bool,
}

pub fn pad_bench(args: PadBenchArgs) -> Result<bool> {
    let phi = read_cnf(&args.input)?;
    let limits = limits(&args.fit)?;
    let ts = args
        .t
        .split(',')
        .map(|s| ratio(s.trim()))
        .collect::<Result<Vec<_>>>()?;
    let cap = max_vars()?;
    let out = args.out.as_deref();
    prepare(out)?;
    let n = phi.n_vars();
    let models = if n <= cap {
        brute_force_models(&phi).len()
    } else {
        0
    };
    let mut rows = Vec::new();
    for t in ts {
        let inst = PaddedInstance::new(phi.clone(), t);
        let expected = inst.expected_len(models as u64);
        let mut e = PadEnumerator::with_solver(inst, Box::new(BruteForceSat), cap)?;
        let padding = e.padding_count();
        let trace = run_to_end(&mut e)?;
        let b = exponent_of(t);
        let verdict = check_incremental(&trace, b, n, limits);
        let fit_c = match verdict {
            IncrementalVerdict::Fits(f) => Some(f.c),
            _ => None,
        };
        rows.push(PadRow {
            t: t.to_string(),
            n,
            models,
            padding,
            outputs: trace.len(),
            exact: expected == trace.len().into(),
            expected: expected.to_string(),
            exponent: b,
            fit_c,
            fits: verdict.fits(),
            c_below: tightest_constant(&trace, b - 1.0, n, limits.max_n_exponent),
            total_steps: trace.total_steps,
        });
    }
    save_rows(out, "pad_bench.csv", &rows)?;
    let checks = vec![
        Check::new(
            "cardinality",
            rows.iter().all(|r| r.exact),
            format!(
                "{} of {} exponents exact",
                rows.iter().filter(|r| r.exact).count(),
                rows.len()
            ),
        ),
        Check::new(
            "incremental",
            rows.iter().all(|r| r.fits),
            format!(
                "{} of {} fit exponent 1/t",
                rows.iter().filter(|r| r.fits).count(),
                rows.len()
            ),
        ),
    ];
    let r = PadReport {
        input: args.input.display().to_string(),
        limits,
        rows,
        pass: all_pass(&checks),
        checks,
    };
    report(out, &r)?;
    Ok(r.pass)
}
