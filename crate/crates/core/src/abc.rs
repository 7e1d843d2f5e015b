//! Simulator of the a-b-c tick process.
//!
//! A run is a sequence of trading sessions. Session `j` opens with a
//! c-increment applied to the last tick of the previous session (a strictly
//! positive time gap and a discrete price jump), then takes `N_j - 1`
//! intraday steps, each adding a strictly positive waiting time (the
//! a-increment) and a whole-tick price change (the b-increment). Prices stay
//! integers in tick units throughout.
//!
//! All randomness comes from one seeded [`SplitMix64`] stream, drawn in a
//! fixed order per session — tick count, then the c-increment pair (time
//! gap, price jump), then one (wait, price change) pair per intraday step —
//! so a seed fully determines the series and tests can replay the stream.

use crate::rng::SplitMix64;
use std::collections::BTreeMap;
use thiserror::Error;

/// One transaction: time in time units, price in whole ticks, and an
/// optional volume (carried, never modeled).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tick {
    pub t: f64,
    pub p: i64,
    pub v: Option<u64>,
}

impl Tick {
    pub fn new(t: f64, p: i64) -> Self {
        Tick { t, p, v: None }
    }
}

/// Sampler of positive reals for waiting times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RealSampler {
    Const(f64),
    Uniform { lo: f64, hi: f64 },
    Weibull { shape: f64, scale: f64 },
}

impl RealSampler {
    pub fn sample(&self, rng: &mut SplitMix64) -> f64 {
        match *self {
            RealSampler::Const(v) => v,
            RealSampler::Uniform { lo, hi } => lo + rng.next_f64() * (hi - lo),
            RealSampler::Weibull { shape, scale } => loop {
                // Inverse CDF; u = 0 would give a zero waiting time, redraw.
                let u = rng.next_f64();
                let w = scale * (-(1.0 - u).ln()).powf(1.0 / shape);
                if w > 0.0 {
                    break w;
                }
            },
        }
    }

    fn strictly_positive(&self) -> bool {
        match *self {
            RealSampler::Const(v) => v > 0.0,
            RealSampler::Uniform { lo, hi } => lo > 0.0 && lo <= hi,
            RealSampler::Weibull { shape, scale } => shape > 0.0 && scale > 0.0,
        }
    }
}

/// Sampler of integers for price increments and tick counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntSampler {
    Const(i64),
    Uniform { lo: i64, hi: i64 },
}

impl IntSampler {
    pub fn sample(&self, rng: &mut SplitMix64) -> i64 {
        match *self {
            IntSampler::Const(v) => v,
            IntSampler::Uniform { lo, hi } => rng.next_i64_inclusive(lo, hi),
        }
    }

    fn min_value(&self) -> i64 {
        match *self {
            IntSampler::Const(v) => v,
            IntSampler::Uniform { lo, .. } => lo,
        }
    }

    fn well_formed(&self) -> bool {
        match *self {
            IntSampler::Const(_) => true,
            IntSampler::Uniform { lo, hi } => lo <= hi,
        }
    }
}

/// The inter-session increment: a positive time gap and a discrete jump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CIncrement {
    pub wait: RealSampler,
    pub jump: IntSampler,
}

/// The pluggable distributions of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncrementModel {
    /// Intraday waiting times; samples must be strictly positive.
    pub wait: RealSampler,
    /// Intraday price increments in whole ticks.
    pub b_inc: IntSampler,
    /// The c-increment bridging consecutive sessions.
    pub c_inc: CIncrement,
    /// Ticks per session; samples must be at least one.
    pub n_ticks: IntSampler,
}

impl Default for IncrementModel {
    fn default() -> Self {
        IncrementModel {
            wait: RealSampler::Weibull {
                shape: 0.8,
                scale: 1.0,
            },
            b_inc: IntSampler::Uniform { lo: -1, hi: 1 },
            c_inc: CIncrement {
                wait: RealSampler::Const(12.0),
                jump: IntSampler::Uniform { lo: -5, hi: 5 },
            },
            n_ticks: IntSampler::Uniform { lo: 10, hi: 50 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbcError {
    #[error("waiting-time samplers must be strictly positive")]
    NonPositiveWait,
    #[error("tick-count sampler must draw at least 1")]
    EmptySession,
    #[error("integer sampler range is empty")]
    EmptyRange,
    #[error("no sessions to summarize")]
    NoSessions,
}

impl IncrementModel {
    pub fn validate(&self) -> Result<(), AbcError> {
        if !self.b_inc.well_formed()
            || !self.n_ticks.well_formed()
            || !self.c_inc.jump.well_formed()
        {
            return Err(AbcError::EmptyRange);
        }
        if !self.wait.strictly_positive() || !self.c_inc.wait.strictly_positive() {
            return Err(AbcError::NonPositiveWait);
        }
        if self.n_ticks.min_value() < 1 {
            return Err(AbcError::EmptySession);
        }
        Ok(())
    }
}

/// A simulated run: the seed tick (last tick of the session before the run)
/// and one tick sequence per session.
#[derive(Debug, Clone, PartialEq)]
pub struct SessionSeries {
    pub z0: Tick,
    pub sessions: Vec<Vec<Tick>>,
}

/// Simulate `sessions` sessions from the seed tick. Deterministic in `seed`.
pub fn simulate(
    z0: Tick,
    model: &IncrementModel,
    sessions: u64,
    seed: u64,
) -> Result<SessionSeries, AbcError> {
    model.validate()?;
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::with_capacity(sessions as usize);
    let mut prev = z0;
    for _ in 0..sessions {
        let n = model.n_ticks.sample(&mut rng);
        let gap = model.c_inc.wait.sample(&mut rng);
        let jump = model.c_inc.jump.sample(&mut rng);
        let mut session = Vec::with_capacity(n as usize);
        session.push(Tick::new(prev.t + gap, prev.p + jump));
        for _ in 1..n {
            let dt = model.wait.sample(&mut rng);
            let dp = model.b_inc.sample(&mut rng);
            let last = session.last().expect("session opened with one tick");
            session.push(Tick::new(last.t + dt, last.p + dp));
        }
        prev = *session.last().expect("session is nonempty");
        out.push(session);
    }
    Ok(SessionSeries { z0, sessions: out })
}

/// First-order statistics of a run: per-session tick counts and the intraday
/// waiting-time and price-increment distributions (c-increments excluded).
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub ticks_per_session: Vec<usize>,
    pub dt_count: usize,
    pub dt_mean: f64,
    /// Sample variance (n - 1 divisor); zero when fewer than two waits.
    pub dt_var: f64,
    pub dp_hist: BTreeMap<i64, u64>,
}

pub fn summarize(series: &SessionSeries) -> Result<Summary, AbcError> {
    if series.sessions.is_empty() {
        return Err(AbcError::NoSessions);
    }
    let ticks_per_session = series.sessions.iter().map(Vec::len).collect();
    let mut waits = Vec::new();
    let mut dp_hist = BTreeMap::new();
    for session in &series.sessions {
        for pair in session.windows(2) {
            waits.push(pair[1].t - pair[0].t);
            *dp_hist.entry(pair[1].p - pair[0].p).or_insert(0u64) += 1;
        }
    }
    let n = waits.len();
    let dt_mean = if n == 0 {
        0.0
    } else {
        waits.iter().sum::<f64>() / n as f64
    };
    let dt_var = if n < 2 {
        0.0
    } else {
        waits.iter().map(|w| (w - dt_mean).powi(2)).sum::<f64>() / (n - 1) as f64
    };
    Ok(Summary {
        ticks_per_session,
        dt_count: n,
        dt_mean,
        dt_var,
        dp_hist,
    })
}

/// CSV `session,index,t,p` over all sessions, full float precision.
pub fn series_csv(series: &SessionSeries) -> String {
    let mut out = String::from("session,index,t,p\n");
    for (j, session) in series.sessions.iter().enumerate() {
        for (i, tick) in session.iter().enumerate() {
            out.push_str(&format!("{},{},{},{}\n", j, i, tick.t, tick.p));
        }
    }
    out
}
