//! Flat key=value configuration for the a-b-c simulator.
//!
//! Recognized keys: `wait`, `b`, `c_wait`, `c_jump`, `nticks`, `t0`, `p0`.
//! Sampler values are `const:X`, `uniform:LO,HI`, or (reals only)
//! `weibull:SHAPE,SCALE`. Lines starting with `#` and blank lines are
//! ignored; unknown keys are rejected, never ignored.

use iteral_core::abc::{CIncrement, IncrementModel, IntSampler, RealSampler, Tick};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub struct AbcConfig {
    wait: RealSampler,
    b: IntSampler,
    c_wait: RealSampler,
    c_jump: IntSampler,
    nticks: IntSampler,
    t0: f64,
    p0: i64,
}

impl Default for AbcConfig {
    fn default() -> Self {
        let model = IncrementModel::default();
        AbcConfig {
            wait: model.wait,
            b: model.b_inc,
            c_wait: model.c_inc.wait,
            c_jump: model.c_inc.jump,
            nticks: model.n_ticks,
            t0: 0.0,
            p0: 1000,
        }
    }
}

impl AbcConfig {
    /// Apply overrides from a key=value file body.
    pub fn apply(&mut self, text: &str) -> Result<(), String> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key=value, got `{line}`", lineno + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let context = |e: String| format!("line {}: {e}", lineno + 1);
            match key {
                "wait" => self.wait = parse_real_sampler(value).map_err(context)?,
                "b" => self.b = parse_int_sampler(value).map_err(context)?,
                "c_wait" => self.c_wait = parse_real_sampler(value).map_err(context)?,
                "c_jump" => self.c_jump = parse_int_sampler(value).map_err(context)?,
                "nticks" => self.nticks = parse_int_sampler(value).map_err(context)?,
                "t0" => {
                    self.t0 = value
                        .parse()
                        .map_err(|_| context(format!("`{value}` is not a number")))?;
                }
                "p0" => {
                    self.p0 = value
                        .parse()
                        .map_err(|_| context(format!("`{value}` is not an integer")))?;
                }
                other => return Err(format!("line {}: unknown key `{other}`", lineno + 1)),
            }
        }
        Ok(())
    }

    pub fn model(&self) -> IncrementModel {
        IncrementModel {
            wait: self.wait,
            b_inc: self.b,
            c_inc: CIncrement {
                wait: self.c_wait,
                jump: self.c_jump,
            },
            n_ticks: self.nticks,
        }
    }

    /// The seed tick: the last tick of the session before the run.
    pub fn seed_tick(&self) -> Tick {
        Tick::new(self.t0, self.p0)
    }

    /// Effective configuration in the same key=value syntax `apply` reads.
    pub fn listing(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "abc.wait={}", render_real(&self.wait));
        let _ = writeln!(s, "abc.b={}", render_int(&self.b));
        let _ = writeln!(s, "abc.c_wait={}", render_real(&self.c_wait));
        let _ = writeln!(s, "abc.c_jump={}", render_int(&self.c_jump));
        let _ = writeln!(s, "abc.nticks={}", render_int(&self.nticks));
        let _ = writeln!(s, "abc.t0={}", self.t0);
        let _ = writeln!(s, "abc.p0={}", self.p0);
        s
    }
}

fn split_spec(value: &str) -> (&str, Option<&str>) {
    match value.split_once(':') {
        Some((name, params)) => (name.trim(), Some(params.trim())),
        None => (value.trim(), None),
    }
}

fn numbers<T, const N: usize>(params: Option<&str>, spec: &str) -> Result<[T; N], String>
where
    T: std::str::FromStr + Copy + Default,
{
    let params = params.ok_or_else(|| format!("`{spec}` is missing `:params`"))?;
    let parts: Vec<&str> = params.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!("`{spec}` expects {N} parameters"));
    }
    let mut out = [T::default(); N];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .parse()
            .map_err(|_| format!("`{part}` in `{spec}` is not a number"))?;
    }
    Ok(out)
}

fn parse_real_sampler(spec: &str) -> Result<RealSampler, String> {
    let (name, params) = split_spec(spec);
    match name {
        "const" => {
            let [v] = numbers::<f64, 1>(params, spec)?;
            Ok(RealSampler::Const(v))
        }
        "uniform" => {
            let [lo, hi] = numbers::<f64, 2>(params, spec)?;
            Ok(RealSampler::Uniform { lo, hi })
        }
        "weibull" => {
            let [shape, scale] = numbers::<f64, 2>(params, spec)?;
            Ok(RealSampler::Weibull { shape, scale })
        }
        other => Err(format!(
            "unknown sampler `{other}` (expected const, uniform, or weibull)"
        )),
    }
}

fn parse_int_sampler(spec: &str) -> Result<IntSampler, String> {
    let (name, params) = split_spec(spec);
    match name {
        "const" => {
            let [v] = numbers::<i64, 1>(params, spec)?;
            Ok(IntSampler::Const(v))
        }
        "uniform" => {
            let [lo, hi] = numbers::<i64, 2>(params, spec)?;
            Ok(IntSampler::Uniform { lo, hi })
        }
        other => Err(format!(
            "unknown sampler `{other}` (expected const or uniform)"
        )),
    }
}

fn render_real(s: &RealSampler) -> String {
    match s {
        RealSampler::Const(v) => format!("const:{v}"),
        RealSampler::Uniform { lo, hi } => format!("uniform:{lo},{hi}"),
        RealSampler::Weibull { shape, scale } => format!("weibull:{shape},{scale}"),
    }
}

fn render_int(s: &IntSampler) -> String {
    match s {
        IntSampler::Const(v) => format!("const:{v}"),
        IntSampler::Uniform { lo, hi } => format!("uniform:{lo},{hi}"),
    }
}
