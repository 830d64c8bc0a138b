//! Derivative-free maximization over periodic angle parameters.
//!
//! Coordinate ascent: each coordinate is scanned on a coarse periodic grid and
//! the best cell is refined by golden-section search. Sweeps repeat until a
//! full sweep improves the objective by less than [`SWEEP_TOLERANCE`].
//! Restarts draw uniform angles in `[0, 2π)` from a seeded ChaCha stream.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub const SWEEP_TOLERANCE: f64 = 1e-12;
const GRID_POINTS: usize = 24;
const GOLDEN_TOLERANCE: f64 = 1e-11;
const MAX_SWEEPS: usize = 2000;
const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub params: Vec<f64>,
    pub value: f64,
    /// Index of the restart that produced the optimum (lowest wins ties).
    pub restart: usize,
}

fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > GOLDEN_TOLERANCE {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Locally maximizes `objective` starting from `start`.
pub fn refine<F: Fn(&[f64]) -> f64>(objective: &F, start: &[f64]) -> (Vec<f64>, f64) {
    let mut x = start.to_vec();
    let mut best = objective(&x);
    let step = TAU / GRID_POINTS as f64;
    for _ in 0..MAX_SWEEPS {
        let sweep_start = best;
        for i in 0..x.len() {
            let mut probe = x.clone();
            let mut eval = |v: f64| {
                probe[i] = v;
                objective(&probe)
            };
            let origin = x[i];
            let mut grid_best = (origin, best);
            for g in 1..GRID_POINTS {
                let v = origin + g as f64 * step;
                let fv = eval(v);
                if fv > grid_best.1 {
                    grid_best = (v, fv);
                }
            }
            let centre = grid_best.0;
            let (v, fv) = golden_section(&mut eval, centre - step, centre + step);
            let (v, fv) = if fv >= grid_best.1 { (v, fv) } else { grid_best };
            if fv > best {
                x[i] = v.rem_euclid(TAU);
                best = fv;
            }
        }
        if best - sweep_start < SWEEP_TOLERANCE {
            break;
        }
    }
    (x, best)
}

/// Multi-start maximization over `dim` angles.
pub fn maximize<F: Fn(&[f64]) -> f64>(objective: F, dim: usize, restarts: usize, seed: u64) -> Result<SearchResult> {
    if restarts == 0 {
        return Err(Error::InvalidConfig("restarts must be >= 1".into()));
    }
    if dim == 0 {
        return Err(Error::InvalidConfig("at least one parameter is required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<SearchResult> = None;
    for restart in 0..restarts {
        let start: Vec<f64> = (0..dim).map(|_| rng.random_range(0.0..TAU)).collect();
        let (params, value) = refine(&objective, &start);
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(SearchResult { params, value, restart });
        }
    }
    Ok(best.expect("restarts >= 1"))
}
