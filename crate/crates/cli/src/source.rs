//! Building the enumerator under study from command-line flags.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use enumdelay::problems::{
    parse_dimacs, BruteForceOracle, BruteForceSat, CnfFormula, FlashlightAllSat, OracleCharge,
    PadEnumerator, PaddedInstance, Ratio, DEFAULT_MAX_VARS, MAX_VARS_ENV,
};
use enumdelay::scripted::Scripted;
use enumdelay::{Enumerator, Polynomial};

/// Variable cap for brute-forced instances, overridable from the environment.
pub fn max_vars() -> Result<usize> {
    match std::env::var(MAX_VARS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("{MAX_VARS_ENV}={v:?} is not a variable count")),
        Err(_) => Ok(DEFAULT_MAX_VARS),
    }
}

pub fn read_cnf(path: &Path) -> Result<Arc<CnfFormula>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let phi = parse_dimacs(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(Arc::new(phi))
}

/// Comma-separated coefficients, lowest degree first.
pub fn parse_poly(s: &str) -> Result<Polynomial> {
    let coeffs = s
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<f64>()
                .with_context(|| format!("bad coefficient {c:?}"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Polynomial::new(coeffs)?)
}

fn numbers(list: &str) -> Result<Vec<u64>> {
    list.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| {
            x.trim()
                .parse::<u64>()
                .with_context(|| format!("bad number {x:?}"))
        })
        .collect()
}

/// Scripted enumerators:
/// `burst:N`, `times:T1,T2,...`, `delays:D1,D2,...` and
/// `blocks:DENSE@GAP,...` (see [`Scripted::dense_blocks`]).
pub fn parse_script(spec: &str) -> Result<Scripted> {
    let (kind, args) = spec.split_once(':').unwrap_or((spec, ""));
    let s = match kind {
        "burst" => {
            let n: u64 = args
                .trim()
                .parse()
                .with_context(|| format!("bad burst size {args:?}"))?;
            if n == 0 {
                bail!("burst size must be positive");
            }
            Scripted::burst(n)
        }
        "times" => {
            let t = numbers(args)?;
            if t.first() == Some(&0) || t.windows(2).any(|w| w[0] >= w[1]) {
                bail!("output times must be positive and strictly increasing");
            }
            Scripted::from_output_times(t)
        }
        "delays" => Scripted::from_delays(&numbers(args)?),
        "blocks" => {
            let blocks = args
                .split(',')
                .map(|b| {
                    let (d, g) = b
                        .split_once('@')
                        .with_context(|| format!("block {b:?} is not DENSE@GAP"))?;
                    Ok((d.trim().parse()?, g.trim().parse()?))
                })
                .collect::<Result<Vec<(u64, u64)>>>()?;
            Scripted::dense_blocks(&blocks)
        }
        _ => bail!("unknown script {kind:?}; expected burst, times, delays or blocks"),
    };
    Ok(s)
}

/// The enumerator selected by `--script`, or by `--input` (flashlight
/// AllSAT, or the padded instance when `t` is given).
pub struct Source {
    pub name: String,
    pub t: Option<Ratio>,
    kind: Kind,
}

enum Kind {
    Script(Scripted),
    AllSat(Arc<CnfFormula>, usize),
    Pad(Arc<CnfFormula>, Ratio, usize),
}

impl Source {
    pub fn from_flags(
        input: Option<&Path>,
        script: Option<&str>,
        t: Option<Ratio>,
    ) -> Result<Self> {
        match (input, script) {
            (Some(_), Some(_)) => bail!("--input and --script are exclusive"),
            (None, None) => bail!("one of --input or --script is required"),
            (None, Some(spec)) => {
                if t.is_some() {
                    bail!("--t needs a CNF --input");
                }
                Ok(Self {
                    name: format!("script {spec}"),
                    t: None,
                    kind: Kind::Script(parse_script(spec)?),
                })
            }
            (Some(path), None) => {
                let phi = read_cnf(path)?;
                let cap = max_vars()?;
                let file = path.file_name().map_or_else(
                    || path.display().to_string(),
                    |f| f.to_string_lossy().into_owned(),
                );
                let (name, kind) = match t {
                    Some(t) => (format!("pad {file} t={t}"), Kind::Pad(phi, t, cap)),
                    None => (format!("allsat {file}"), Kind::AllSat(phi, cap)),
                };
                let source = Self { name, t, kind };
                // Surface size errors before any work starts.
                source.build()?;
                Ok(source)
            }
        }
    }

    /// A fresh enumerator.
    pub fn build(&self) -> Result<Box<dyn Enumerator>> {
        Ok(match &self.kind {
            Kind::Script(s) => Box::new(s.clone()),
            Kind::AllSat(phi, cap) => Box::new(FlashlightAllSat::with_oracle(
                Arc::clone(phi),
                Box::new(BruteForceOracle),
                OracleCharge::Unit,
                *cap,
            )?),
            Kind::Pad(phi, t, cap) => Box::new(PadEnumerator::with_solver(
                PaddedInstance::new(Arc::clone(phi), *t),
                Box::new(BruteForceSat),
                *cap,
            )?),
        })
    }
}
