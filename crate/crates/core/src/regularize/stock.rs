//! Stock regularization for enumerators whose prefixes always contain a long
//! gap-free run.
//!
//! The explorer `Ex` simulates the inner enumerator ahead of the enumerator,
//! so that every unit of enumerator work costs `2hq` together with the
//! explorer's share, and splits its outputs into runs: a run
//! starts right after a `p`-gap (or at the start) and extends while outputs
//! keep arriving within `p`. It keeps the state at the start of the open
//! run, of the latest closed run that was long enough (`b - a > b / q`),
//! and of the largest run together with the state that follows it.
//!
//! The enumerator `En` is a set of lanes, each a simulation responsible for
//! a range of output indices. In simple mode one lane emits everything. At a
//! `p`-gap after output `i`, a fresh stock starting at `a > i` is taken:
//! a filling lane resumes from the state at `a` and becomes the pacer, while
//! the old lane keeps running in the background until it has emitted output
//! `a`. Each round the pacer runs to its next output, then every background
//! lane gets `hq` charged steps. Ranges never overlap, so no solution is
//! emitted twice and no solution set is stored.
//!
//! Once the explorer terminates, the largest run is used one last time: a
//! lane from the state after that run is started in the background so the
//! tail behind the last stock is produced while the run is being emitted.

use serde::{Deserialize, Serialize};

use crate::cost;
use crate::enumerator::{Enumerator, Lifecycle, Sim, Snapshot, Step, StepOutcome};
use crate::error::{EnumError, Result};
use crate::regularize::{require_forkable, DelayBound, Evaluated};
use crate::solution::Solution;

struct Lane {
    sim: Sim,
    pending: Option<Solution>,
    /// Last index this lane emits; `None` runs to the end.
    end: Option<u64>,
}

impl Lane {
    fn space_bits(&self) -> u64 {
        self.sim.space_bits()
            + self
                .pending
                .as_ref()
                .map_or(0, |s| cost::solution_bits(s.len()))
            + 64
    }

    fn fork(&self) -> Option<Self> {
        Some(Self {
            sim: self.sim.fork()?,
            pending: self.pending.clone(),
            end: self.end,
        })
    }
}

struct ClosedRun {
    a: u64,
    state: Snapshot,
}

struct Largest {
    a: u64,
    b: u64,
    start: Snapshot,
    /// Solution `b + 1` and the state right after it, unless the run ends
    /// the enumeration.
    next: Option<(Solution, Snapshot)>,
}

impl Largest {
    fn len(&self) -> u64 {
        self.b - self.a
    }
}

struct Explorer {
    sim: Option<Sim>,
    open_a: u64,
    open_state: Snapshot,
    latest_good: Option<ClosedRun>,
    largest: Option<Largest>,
    finished: bool,
    /// Charge spent so far, simulation and copies.
    spent: u64,
}

impl Explorer {
    fn index(&self) -> u64 {
        self.sim.as_ref().map_or(0, |s| s.index)
    }

    fn space_bits(&self) -> u64 {
        self.sim.as_ref().map_or(0, Sim::space_bits)
            + self.open_state.size_bits()
            + self.latest_good.as_ref().map_or(0, |r| r.state.size_bits())
            + self.largest.as_ref().map_or(0, |l| {
                l.start.size_bits()
                    + l.next
                        .as_ref()
                        .map_or(0, |(s, m)| m.size_bits() + cost::solution_bits(s.len()))
            })
            + 6 * 64
    }

    fn fork(&self) -> Option<Self> {
        let sim = match &self.sim {
            Some(s) => Some(s.fork()?),
            None => None,
        };
        Some(Self {
            sim,
            open_a: self.open_a,
            open_state: self.open_state.clone(),
            latest_good: self.latest_good.as_ref().map(|r| ClosedRun {
                a: r.a,
                state: r.state.clone(),
            }),
            largest: self.largest.as_ref().map(|l| Largest {
                a: l.a,
                b: l.b,
                start: l.start.clone(),
                next: l.next.clone(),
            }),
            finished: self.finished,
            spent: self.spent,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Round {
    Pacer,
    Background { lane: usize, left: u64 },
}

/// Counters describing what the regularizer did.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StockStats {
    /// Times the enumerator switched to filling mode at a gap.
    pub fills: usize,
    pub max_lanes: usize,
    /// Whether the post-exploration lane from the largest run was started.
    pub tail_lane: bool,
    /// Gaps met in simple mode after the explorer had finished.
    pub late_gaps: usize,
}

pub struct StockRegularizer {
    bounds: Evaluated,
    input_size: usize,
    solution_bound: usize,
    lanes: Vec<Lane>,
    round: Round,
    ex: Explorer,
    en_work: u64,
    tail_pending: bool,
    stats: StockStats,
    life: Lifecycle,
}

/// Wraps a snapshottable `e` with average delay `h` whose every prefix of
/// `k` outputs contains a gap-free run longer than `k / q`.
pub fn stock_regularize(e: Box<dyn Enumerator>, bounds: &DelayBound) -> Result<StockRegularizer> {
    require_forkable(e.as_ref())?;
    let bounds = bounds.eval(e.input_size())?;
    let open_state = Snapshot::capture(e.as_ref(), 0)?;
    let ex_sim = Sim::new(e.fork().ok_or(EnumError::NotSnapshottable)?);
    Ok(StockRegularizer {
        bounds,
        input_size: e.input_size(),
        solution_bound: e.solution_bound(),
        lanes: vec![Lane {
            sim: Sim::new(e),
            pending: None,
            end: None,
        }],
        round: Round::Pacer,
        ex: Explorer {
            sim: Some(ex_sim),
            open_a: 0,
            open_state,
            latest_good: None,
            largest: None,
            finished: false,
            spent: 0,
        },
        en_work: 0,
        tail_pending: false,
        stats: StockStats {
            max_lanes: 1,
            ..StockStats::default()
        },
        life: Lifecycle::default(),
    })
}

impl StockRegularizer {
    pub fn bounds(&self) -> Evaluated {
        self.bounds
    }

    pub fn stats(&self) -> StockStats {
        self.stats
    }

    /// `2qh (qh + p)`.
    pub fn delay_bound(&self) -> u64 {
        let Evaluated { p, h, q } = self.bounds;
        2 * q * h * (q * h + p)
    }

    fn hq(&self) -> u64 {
        self.bounds.h * self.bounds.q
    }

    /// Runs the explorer until it has spent `2hq - 2` charged steps per
    /// unit of enumerator work. With the unit itself this leaves one step of
    /// slack per unit for snapshot copies, which count against the same
    /// allowance. Returns the charge.
    fn advance_explorer(&mut self) -> Result<u64> {
        let target = (2 * self.hq()).saturating_sub(2).max(1) * self.en_work;
        let mut charge = 0;
        while let Some(sim) = &mut self.ex.sim {
            if self.ex.spent + charge >= target {
                break;
            }
            let step = sim.step()?;
            charge += step.charge;
            match step.outcome {
                StepOutcome::Output(s) if sim.last_delay > self.bounds.p => {
                    let j = sim.index;
                    let state = sim.snapshot()?;
                    charge += self.close_run(j - 1, Some((s, state)));
                }
                StepOutcome::Done => {
                    let n = sim.index;
                    charge += self.close_run(n, None);
                    self.ex.sim = None;
                    self.ex.finished = true;
                    self.tail_pending = true;
                }
                _ => {}
            }
        }
        self.ex.spent += charge;
        Ok(charge)
    }

    /// Closes the open run at `b`; `next` is the solution and state that
    /// open the following run. Returns the copy charge.
    fn close_run(&mut self, b: u64, next: Option<(Solution, Snapshot)>) -> u64 {
        let a = self.ex.open_a;
        let q = self.bounds.q;
        let good = next.is_some() && q * (b - a) > b;
        let largest = b > a && self.ex.largest.as_ref().is_none_or(|l| b - a > l.len());
        let mut charge = 0;
        let (new_a, new_state) = match &next {
            Some((_, m)) => {
                charge += m.copy_charge();
                (b + 1, m.clone())
            }
            None => (b, self.ex.open_state.clone()),
        };
        let old_state = std::mem::replace(&mut self.ex.open_state, new_state);
        self.ex.open_a = new_a;
        if largest {
            charge += old_state.copy_charge();
            let start = old_state.clone();
            self.ex.largest = Some(Largest {
                a,
                b,
                start,
                next: next.map(|(s, m)| {
                    charge += m.copy_charge();
                    (s, m)
                }),
            });
        }
        if good {
            self.ex.latest_good = Some(ClosedRun {
                a,
                state: old_state,
            });
        }
        charge
    }

    /// A fresh stock for an enumerator that has emitted `i` outputs.
    fn stock(&self, i: u64) -> Option<(u64, &Snapshot)> {
        let q = self.bounds.q;
        let b = self.ex.index();
        let a = self.ex.open_a;
        if !self.ex.finished && a > i && b > a && q * (b - a) > b {
            return Some((a, &self.ex.open_state));
        }
        self.ex
            .latest_good
            .as_ref()
            .filter(|r| r.a > i)
            .map(|r| (r.a, &r.state))
    }

    fn enter_filling(&mut self, i: u64) -> Result<u64> {
        let (a, state) = self
            .stock(i)
            .ok_or(EnumError::DensityViolation { index: i })?;
        let charge = state.copy_charge();
        let fill = Lane {
            sim: Sim::at(state.resume_copy(), a),
            pending: None,
            end: None,
        };
        self.lanes[0].end = Some(a);
        self.lanes.insert(0, fill);
        self.round = Round::Pacer;
        self.stats.fills += 1;
        self.stats.max_lanes = self.stats.max_lanes.max(self.lanes.len());
        Ok(charge)
    }

    /// After the explorer stops, starts a background lane behind the largest
    /// run, as described in the module docs.
    fn start_tail(&mut self) -> u64 {
        self.tail_pending = false;
        let Some(largest) = self.ex.largest.take() else {
            return 0;
        };
        let i = self.lanes[0].sim.index;
        if i >= largest.b {
            return 0;
        }
        let mut charge = 0;
        let fresh = largest.a > i;
        let tail = largest.next.map(|(s, m)| {
            charge += m.copy_charge();
            Lane {
                sim: Sim::at(m.resume(), largest.b + 1),
                pending: Some(s),
                end: None,
            }
        });
        if tail.is_none() && !fresh {
            return charge;
        }
        let run_end = tail.as_ref().map(|_| largest.b);
        if fresh {
            charge += largest.start.copy_charge();
            self.lanes[0].end = Some(largest.a);
            self.lanes.insert(
                0,
                Lane {
                    sim: Sim::at(largest.start.resume(), largest.a),
                    pending: None,
                    end: run_end,
                },
            );
        } else {
            self.lanes[0].end = run_end;
        }
        self.lanes.extend(tail);
        self.round = Round::Pacer;
        self.stats.tail_lane = self.lanes.len() > 1;
        self.stats.max_lanes = self.stats.max_lanes.max(self.lanes.len());
        charge
    }

    fn remove_lane(&mut self, k: usize) {
        self.lanes.remove(k);
        self.round = match self.round {
            Round::Background { lane, .. } if k != 0 && lane == k && k < self.lanes.len() => {
                Round::Background {
                    lane: k,
                    left: self.hq(),
                }
            }
            Round::Background { lane, left } if k != 0 && lane > k => Round::Background {
                lane: lane - 1,
                left,
            },
            Round::Background { .. } if k != 0 && self.lanes.len() > 1 => self.round,
            _ => Round::Pacer,
        };
        if let Round::Background { lane, .. } = self.round {
            if lane >= self.lanes.len() {
                self.round = Round::Pacer;
            }
        }
    }

    fn next_round(&mut self, acted: usize, charge: u64, emitted: bool) {
        let hq = self.hq();
        self.round = match self.round {
            Round::Pacer if acted == 0 && emitted && self.lanes.len() > 1 => {
                Round::Background { lane: 1, left: hq }
            }
            Round::Background { lane, left } if lane == acted => {
                if left > charge {
                    Round::Background {
                        lane,
                        left: left - charge,
                    }
                } else if lane + 1 < self.lanes.len() {
                    Round::Background {
                        lane: lane + 1,
                        left: hq,
                    }
                } else {
                    Round::Pacer
                }
            }
            r => r,
        };
    }
}

impl Enumerator for StockRegularizer {
    fn input_size(&self) -> usize {
        self.input_size
    }

    fn solution_bound(&self) -> usize {
        self.solution_bound
    }

    fn step(&mut self) -> Result<Step> {
        self.life.check()?;
        if self.lanes.is_empty() {
            return Ok(self.life.finish(1));
        }
        let mut charge = 0;
        if self.tail_pending && self.lanes.len() == 1 {
            charge += self.start_tail();
        }
        let acting = match self.round {
            Round::Pacer => 0,
            Round::Background { lane, .. } => lane,
        };
        if let Some(s) = self.lanes[acting].pending.take() {
            charge += cost::write_charge(s.len());
            self.next_round(acting, 1, true);
            return Ok(Step::output(s, charge));
        }
        let lane = &mut self.lanes[acting];
        let step = lane.sim.step()?;
        self.en_work += step.charge;
        charge += step.charge;
        let index = lane.sim.index;
        let end = lane.end;
        let elapsed = lane.sim.elapsed;
        charge += self.advance_explorer()?;
        let mut finished_lane = false;
        let out = match step.outcome {
            StepOutcome::Output(s) => {
                if end.is_some_and(|e| index > e) {
                    return Err(EnumError::ContractViolation(format!(
                        "lane passed its end {} at output {index}",
                        end.unwrap()
                    )));
                }
                finished_lane = end == Some(index);
                Step::output(s, 0)
            }
            StepOutcome::Done => {
                if end.is_some_and(|e| index < e) {
                    return Err(EnumError::ContractViolation(format!(
                        "inner terminated at {index} before a lane's end {}",
                        end.unwrap()
                    )));
                }
                finished_lane = true;
                Step::idle(0)
            }
            StepOutcome::NoOutput => {
                if self.lanes.len() == 1 && !step.fence && elapsed > self.bounds.p {
                    let first_time = elapsed - step.charge <= self.bounds.p;
                    if !self.ex.finished {
                        charge += self.enter_filling(index)?;
                    } else if first_time {
                        self.stats.late_gaps += 1;
                    }
                }
                Step::idle(0)
            }
        };
        let emitted = out.solution().is_some();
        if finished_lane {
            self.remove_lane(acting);
        } else {
            self.next_round(acting, step.charge, emitted);
        }
        if self.lanes.is_empty() && !emitted {
            return Ok(self.life.finish(charge));
        }
        let mut out = match out.outcome {
            StepOutcome::Output(s) => Step::output(s, charge),
            _ => Step::idle(charge),
        };
        out.fence = step.fence && acting == 0 && self.stats.fills == 0;
        Ok(out)
    }

    fn space_bits(&self) -> u64 {
        self.lanes.iter().map(Lane::space_bits).sum::<u64>() + self.ex.space_bits() + 4 * 64
    }

    fn fork(&self) -> Option<Box<dyn Enumerator>> {
        let lanes = self
            .lanes
            .iter()
            .map(Lane::fork)
            .collect::<Option<Vec<_>>>()?;
        Some(Box::new(Self {
            bounds: self.bounds,
            input_size: self.input_size,
            solution_bound: self.solution_bound,
            lanes,
            round: self.round,
            ex: self.ex.fork()?,
            en_work: self.en_work,
            tail_pending: self.tail_pending,
            stats: self.stats,
            life: self.life,
        }))
    }
}
