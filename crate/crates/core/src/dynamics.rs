//! Numeric iterated-map demos: logistic orbits, escape-time membership grids
//! for the filled-in Julia and Mandelbrot sets, and the Lorenz
//! double-approximation integrator.
//!
//! Boundedness of a complex orbit is decided by the finite surrogate
//! `(max_iter, bailout)`: an orbit is treated as a member when its modulus
//! never exceeds the bailout within the iteration budget. For `z^2 + c` a
//! bailout of 2 is sound — once |z| > 2 and |z| >= |c| the orbit must escape.

use crate::iteration::{splinter, Orbit};
use crate::scalar::Scalar;
use num_complex::Complex64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Orbit of the logistic map `x -> b x (1 - x)` from `x0`, `n` steps.
pub fn logistic_orbit(b: f64, x0: f64, n: u64) -> Orbit {
    splinter(
        |x| {
            let v = x.to_f64().expect("logistic orbits stay real");
            Ok(Scalar::Real(b * v * (1.0 - v)))
        },
        &Scalar::Real(x0),
        n,
    )
}

/// Finite surrogate for orbit boundedness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EscapeParams {
    pub max_iter: u32,
    pub bailout: f64,
}

impl Default for EscapeParams {
    fn default() -> Self {
        EscapeParams {
            max_iter: 1000,
            bailout: 2.0,
        }
    }
}

/// First-passage time of the orbit `z <- z^2 + c` from `z0` out of the
/// bailout disk: the 1-based index of the first orbit member (counting the
/// initial value as member one) whose modulus exceeds the bailout. `None`
/// means no member of the first `max_iter` did, i.e. the point is treated as
/// a member of the bounded set.
pub fn escape_time(c: Complex64, z0: Complex64, params: &EscapeParams) -> Option<u32> {
    debug_assert!(params.max_iter >= 1 && params.bailout >= 2.0);
    let bailout_sqr = params.bailout * params.bailout;
    let mut z = z0;
    for t in 1..=params.max_iter {
        if z.norm_sqr() > bailout_sqr {
            return Some(t);
        }
        z = z * z + c;
    }
    None
}

/// Rectangle of the complex plane sampled on a pixel grid. Pixels map to
/// cell centers; row 0 is the top of the image (largest imaginary part).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub width: u32,
    pub height: u32,
}

impl GridSpec {
    pub fn point(&self, col: u32, row: u32) -> Complex64 {
        let re = self.re_min + (col as f64 + 0.5) * (self.re_max - self.re_min) / self.width as f64;
        let im =
            self.im_max - (row as f64 + 0.5) * (self.im_max - self.im_min) / self.height as f64;
        Complex64::new(re, im)
    }

    pub fn is_valid(&self) -> bool {
        self.re_min < self.re_max
            && self.im_min < self.im_max
            && self.width >= 1
            && self.height >= 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FractalKind {
    /// Escape of the critical orbit from z = 0; the pixel is the parameter c.
    Mandelbrot,
    /// Escape from the pixel as initial value under fixed parameter c.
    Julia(Complex64),
}

/// Escape counts per pixel, row-major from the top row; `None` marks members.
#[derive(Debug, Clone, PartialEq)]
pub struct EscapeGrid {
    pub width: u32,
    pub height: u32,
    pub max_iter: u32,
    pub counts: Vec<Option<u32>>,
}

fn pixel(
    kind: FractalKind,
    grid: &GridSpec,
    params: &EscapeParams,
    col: u32,
    row: u32,
) -> Option<u32> {
    let point = grid.point(col, row);
    match kind {
        FractalKind::Mandelbrot => escape_time(point, Complex64::new(0.0, 0.0), params),
        FractalKind::Julia(c) => escape_time(c, point, params),
    }
}

/// Sequential row-major rendering; the reference [`render_grid`] must match
/// bit for bit.
pub fn render_grid_seq(kind: FractalKind, grid: &GridSpec, params: &EscapeParams) -> EscapeGrid {
    assert!(grid.is_valid(), "degenerate grid");
    let mut counts = Vec::with_capacity(grid.width as usize * grid.height as usize);
    for row in 0..grid.height {
        for col in 0..grid.width {
            counts.push(pixel(kind, grid, params, col, row));
        }
    }
    EscapeGrid {
        width: grid.width,
        height: grid.height,
        max_iter: params.max_iter,
        counts,
    }
}

/// Render the grid, fanning rows out over rayon when the `parallel` feature
/// is enabled. Pixels are pure, so the output is identical to
/// [`render_grid_seq`] either way.
pub fn render_grid(kind: FractalKind, grid: &GridSpec, params: &EscapeParams) -> EscapeGrid {
    #[cfg(feature = "parallel")]
    {
        assert!(grid.is_valid(), "degenerate grid");
        let width = grid.width as usize;
        let mut counts = vec![None; width * grid.height as usize];
        counts
            .par_chunks_mut(width)
            .enumerate()
            .for_each(|(row, out)| {
                for col in 0..grid.width {
                    out[col as usize] = pixel(kind, grid, params, col, row as u32);
                }
            });
        EscapeGrid {
            width: grid.width,
            height: grid.height,
            max_iter: params.max_iter,
            counts,
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        render_grid_seq(kind, grid, params)
    }
}

impl EscapeGrid {
    pub fn at(&self, col: u32, row: u32) -> Option<u32> {
        self.counts[row as usize * self.width as usize + col as usize]
    }

    /// Binary PGM (P5, maxval 255): members are black, escape counts scale
    /// linearly up to 255 with a floor of 1 so every escaper is visible.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(self.counts.iter().map(|&c| match c {
            None => 0u8,
            Some(t) => {
                let scaled = (t as f64 * 255.0 / self.max_iter as f64).round();
                scaled.clamp(1.0, 255.0) as u8
            }
        }));
        out
    }

    /// Long-form CSV `x,y,count` with members written as 0 (real escape
    /// counts are always >= 1).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,count\n");
        for row in 0..self.height {
            for col in 0..self.width {
                let count = self.at(col, row).unwrap_or(0);
                out.push_str(&format!("{col},{row},{count}\n"));
            }
        }
        out
    }
}

/// Lorenz system constants and the dimensionless time step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorenzParams {
    pub sigma: f64,
    pub r: f64,
    pub b: f64,
    pub dt: f64,
}

/// The classic convection values; the time step is conventional, not part of
/// the system.
impl Default for LorenzParams {
    fn default() -> Self {
        LorenzParams {
            sigma: 10.0,
            r: 28.0,
            b: 8.0 / 3.0,
            dt: 0.01,
        }
    }
}

/// Phase point: intensity of convection, temperature difference between
/// currents, distortion of the vertical temperature profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorenzState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl LorenzState {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        LorenzState { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    fn add(&self, other: &LorenzState) -> LorenzState {
        LorenzState::new(self.x + other.x, self.y + other.y, self.z + other.z)
    }

    fn scale(&self, s: f64) -> LorenzState {
        LorenzState::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Right-hand side of the Lorenz equations.
pub fn lorenz_rhs(s: &LorenzState, prm: &LorenzParams) -> LorenzState {
    LorenzState::new(
        -prm.sigma * s.x + prm.sigma * s.y,
        -s.x * s.z + prm.r * s.x - s.y,
        s.x * s.y - prm.b * s.z,
    )
}

/// Euler substep `g(p) = p + F(p) dt` of the double-approximation scheme.
fn euler_substep(s: &LorenzState, prm: &LorenzParams) -> LorenzState {
    s.add(&lorenz_rhs(s, prm).scale(prm.dt))
}

/// One step of the double-approximation procedure: `0.5 (s + g(g(s)))` with
/// the Euler substep applied exactly twice. Algebraically this is Heun's
/// method, `s + dt/2 (F(s) + F(s + dt F(s)))`.
pub fn lorenz_step(s: &LorenzState, prm: &LorenzParams) -> LorenzState {
    s.add(&euler_substep(&euler_substep(s, prm), prm))
        .scale(0.5)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LorenzTrajectory {
    /// `n + 1` states for an `n`-step run, starting with the initial state.
    pub states: Vec<LorenzState>,
    /// Step index at which a non-finite state appeared, if the run was cut
    /// short; the offending state is not included.
    pub truncated: Option<u64>,
}

/// Repeated [`lorenz_step`]; truncates with a diagnostic index instead of
/// recording non-finite states.
pub fn lorenz_trajectory(s0: &LorenzState, prm: &LorenzParams, n: u64) -> LorenzTrajectory {
    let mut states = Vec::with_capacity(n as usize + 1);
    states.push(*s0);
    for step in 1..=n {
        let next = lorenz_step(states.last().expect("nonempty"), prm);
        if !next.is_finite() {
            return LorenzTrajectory {
                states,
                truncated: Some(step),
            };
        }
        states.push(next);
    }
    LorenzTrajectory {
        states,
        truncated: None,
    }
}

/// CSV `n,x` of an orbit's values, full float precision.
pub fn orbit_csv(orbit: &Orbit) -> String {
    let mut out = String::from("n,x\n");
    for (i, v) in orbit.values.iter().enumerate() {
        out.push_str(&format!("{i},{v}\n"));
    }
    out
}

/// CSV `tau,x,y,z` with tau = step * dt, full float precision.
pub fn trajectory_csv(t: &LorenzTrajectory, dt: f64) -> String {
    let mut out = String::from("tau,x,y,z\n");
    for (i, s) in t.states.iter().enumerate() {
        out.push_str(&format!("{},{},{},{}\n", i as f64 * dt, s.x, s.y, s.z));
    }
    out
}
