//! Phase scans of `S(α)` and detection of the threshold angles.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::field::{solve_threshold_field, NearFieldParams};
use crate::error::{Error, Result};

/// Samples with `||S| − 1|` above this are flagged as not accepted.
pub const UNITARITY_TOL: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringSample {
    pub alpha: f64,
    pub s_re: f64,
    pub s_im: f64,
    pub phase_unwrapped: f64,
    pub abs_s_error: f64,
    pub truncation_l: f64,
    pub mesh_h: f64,
    pub accepted: bool,
}

impl ScatteringSample {
    pub fn s(&self) -> Complex64 {
        Complex64::new(self.s_re, self.s_im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Raw {
    alpha: f64,
    s: Complex64,
    l: f64,
}

fn solve_s(alpha: f64, params: &NearFieldParams) -> Result<Raw> {
    let f = solve_threshold_field(alpha, params)?;
    Ok(Raw {
        alpha,
        s: f.s,
        l: f.geom.truncation_l,
    })
}

fn solve_many(alphas: &[f64], params: &NearFieldParams) -> Result<Vec<Raw>> {
    alphas.par_iter().map(|&a| solve_s(a, params)).collect()
}

/// Wrapped phase increment `arg(b / a)` in `(−π, π]`.
fn phase_step(a: Complex64, b: Complex64) -> f64 {
    (b / a).arg()
}

/// Adaptive scan options.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanOptions {
    /// Neighbouring samples whose phase differs by more than this get a midpoint.
    pub max_phase_step: f64,
    /// Intervals narrower than this are never split.
    pub min_spacing: f64,
    pub max_passes: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            max_phase_step: FRAC_PI_4,
            min_spacing: 1e-5,
            max_passes: 12,
        }
    }
}

/// `S(α)` on `alpha_grid`, refined where the phase moves quickly, with the
/// phase continued from `arg S(α₀) ∈ (0, 2π]`.
pub fn scan_phase(alpha_grid: &[f64], params: &NearFieldParams) -> Result<Vec<ScatteringSample>> {
    scan_phase_with(alpha_grid, params, &ScanOptions::default())
}

pub fn scan_phase_with(
    alpha_grid: &[f64],
    params: &NearFieldParams,
    opts: &ScanOptions,
) -> Result<Vec<ScatteringSample>> {
    if alpha_grid.is_empty() {
        return Err(Error::InvalidArgument("empty alpha grid".into()));
    }
    if alpha_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument(
            "alpha grid must be strictly increasing".into(),
        ));
    }
    if !(alpha_grid[0] >= 0.0 && alpha_grid[alpha_grid.len() - 1] < FRAC_PI_2) {
        return Err(Error::InvalidArgument(
            "alpha grid must lie in [0, pi/2)".into(),
        ));
    }
    let mut raw = solve_many(alpha_grid, params)?;
    for _ in 0..opts.max_passes {
        let steps: Vec<f64> = raw
            .windows(2)
            .map(|w| phase_step(w[0].s, w[1].s).abs())
            .collect();
        let mids: Vec<f64> = (0..steps.len())
            .filter(|&i| {
                let neighbour = [i.checked_sub(1), Some(i + 1)]
                    .into_iter()
                    .flatten()
                    .filter_map(|j| steps.get(j))
                    .fold(0.0f64, |a, &b| a.max(b));
                // a step much larger than its neighbours hints at an aliased full turn
                let sudden = steps[i] > 0.1 && steps[i] > 3.0 * neighbour;
                (steps[i] > opts.max_phase_step || sudden)
                    && raw[i + 1].alpha - raw[i].alpha > opts.min_spacing
            })
            .map(|i| 0.5 * (raw[i].alpha + raw[i + 1].alpha))
            .collect();
        if mids.is_empty() {
            break;
        }
        raw.extend(solve_many(&mids, params)?);
        raw.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
    }
    Ok(unwrap(&raw, params.h))
}

fn unwrap(raw: &[Raw], h: f64) -> Vec<ScatteringSample> {
    let mut out = Vec::with_capacity(raw.len());
    let mut phase = 0.0;
    for (i, r) in raw.iter().enumerate() {
        phase = if i == 0 {
            let a = r.s.arg();
            if a > 0.0 {
                a
            } else {
                a + 2.0 * PI
            }
        } else {
            phase + phase_step(raw[i - 1].s, r.s)
        };
        let err = (r.s.norm() - 1.0).abs();
        out.push(ScatteringSample {
            alpha: r.alpha,
            s_re: r.s.re,
            s_im: r.s.im,
            phase_unwrapped: phase,
            abs_s_error: err,
            truncation_l: r.l,
            mesh_h: h,
            accepted: err < UNITARITY_TOL,
        });
    }
    out
}

/// Uniform grid of `n` points on `[a, b]`.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdAngle {
    pub alpha: f64,
    /// Final bisection bracket.
    pub bracket: [f64; 2],
    /// Branch index `m` of the crossing `phase = π + 2πm`.
    pub branch: i64,
    /// `(α, phase − π − 2πm)` for every fresh solve of the refinement.
    pub history: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdAngles {
    pub angles: Vec<ThresholdAngle>,
    pub requested: usize,
    /// False when fewer than `requested` positive angles were found.
    pub complete: bool,
}

impl ThresholdAngles {
    pub fn values(&self) -> Vec<f64> {
        self.angles.iter().map(|a| a.alpha).collect()
    }

    /// First positive threshold angle.
    pub fn first_positive(&self) -> Option<f64> {
        self.angles.get(1).map(|a| a.alpha)
    }
}

/// Locates up to `k_max` positive threshold angles where the unwrapped phase
/// crosses `π + 2πm`, bisecting with fresh solves to width `tol`.
pub fn find_threshold_angles(
    scan: &[ScatteringSample],
    k_max: usize,
    params: &NearFieldParams,
    tol: f64,
) -> Result<ThresholdAngles> {
    if scan.is_empty() {
        return Err(Error::InvalidArgument("empty scan".into()));
    }
    let mut brackets = Vec::new();
    for w in scan.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let (lo, hi) = (
            a.phase_unwrapped.min(b.phase_unwrapped),
            a.phase_unwrapped.max(b.phase_unwrapped),
        );
        let m_lo = ((lo - PI) / (2.0 * PI)).ceil() as i64;
        let m_hi = ((hi - PI) / (2.0 * PI)).floor() as i64;
        for m in m_lo..=m_hi {
            let target = PI + 2.0 * PI * m as f64;
            let fa = a.phase_unwrapped - target;
            // the crossing at the origin is the trivial angle 0
            if a.alpha == 0.0 && fa.abs() < UNITARITY_TOL {
                continue;
            }
            if fa == 0.0 || fa.signum() != (b.phase_unwrapped - target).signum() {
                brackets.push((*a, *b, m));
            }
        }
    }
    let refined: Vec<ThresholdAngle> = brackets
        .par_iter()
        .take(k_max)
        .map(|&(a, b, m)| refine_crossing(a, b, m, params, tol))
        .collect::<Result<_>>()?;
    let mut angles = vec![ThresholdAngle {
        alpha: 0.0,
        bracket: [0.0, 0.0],
        branch: 0,
        history: Vec::new(),
    }];
    angles.extend(refined);
    let complete = angles.len() > k_max;
    Ok(ThresholdAngles {
        angles,
        requested: k_max,
        complete,
    })
}

fn refine_crossing(
    a: ScatteringSample,
    b: ScatteringSample,
    m: i64,
    params: &NearFieldParams,
    tol: f64,
) -> Result<ThresholdAngle> {
    let target = PI + 2.0 * PI * m as f64;
    let (mut xa, mut fa, mut sa) = (a.alpha, a.phase_unwrapped - target, a.s());
    let (mut xb, mut fb) = (b.alpha, b.phase_unwrapped - target);
    let mut history = vec![[xa, fa], [xb, fb]];
    while xb - xa > tol {
        let xm = 0.5 * (xa + xb);
        let s = solve_s(xm, params)?.s;
        let fm = fa + phase_step(sa, s);
        history.push([xm, fm]);
        if fm == 0.0 {
            xa = xm;
            xb = xm;
            fa = 0.0;
            fb = 0.0;
            break;
        }
        if fm.signum() == fa.signum() {
            (xa, fa, sa) = (xm, fm, s);
        } else {
            (xb, fb) = (xm, fm);
        }
    }
    let alpha = if fb == fa {
        0.5 * (xa + xb)
    } else {
        xa - fa * (xb - xa) / (fb - fa)
    };
    Ok(ThresholdAngle {
        alpha,
        bracket: [xa, xb],
        branch: m,
        history,
    })
}

/// Nearest angle to `guess` within `±window` where `S = −1`, found by
/// bisection on `arg(−S)` to width `tol`.
pub fn refine_threshold_near(
    guess: f64,
    window: f64,
    params: &NearFieldParams,
    tol: f64,
) -> Result<f64> {
    let f = |a: f64| -> Result<f64> { Ok((-solve_s(a, params)?.s).arg()) };
    let f0 = f(guess)?;
    if f0 == 0.0 {
        return Ok(guess);
    }
    // walk outward on both sides until arg(−S) changes sign away from the cut at ±π
    let steps = 16;
    let mut prev = [(guess, f0), (guess, f0)];
    let mut bracket = None;
    'outer: for k in 1..=steps {
        for (side, dir) in [-1.0, 1.0].into_iter().enumerate() {
            let x = guess + dir * window * k as f64 / steps as f64;
            if !(0.0..FRAC_PI_2).contains(&x) {
                continue;
            }
            let fx = f(x)?;
            let (xp, fp) = prev[side];
            if fx.signum() != fp.signum() && fx.abs() < FRAC_PI_2 && fp.abs() < FRAC_PI_2 {
                bracket = Some(if xp < x { (xp, fp, x) } else { (x, fx, xp) });
                break 'outer;
            }
            prev[side] = (x, fx);
        }
    }
    let (mut xa, mut fa, mut xb) = bracket.ok_or_else(|| {
        Error::InvalidArgument(format!("no angle with S = -1 within {window} of {guess}"))
    })?;
    while xb - xa > tol {
        let xm = 0.5 * (xa + xb);
        let fm = f(xm)?;
        if fm == 0.0 {
            return Ok(xm);
        }
        if fm.signum() == fa.signum() {
            (xa, fa) = (xm, fm);
        } else {
            xb = xm;
        }
    }
    Ok(0.5 * (xa + xb))
}
