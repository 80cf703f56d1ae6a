use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::optimize::{ascend, Ascent, Objective, KKT_TOL};
use super::profile::{f_value, FObjective, ProfilePoint, TwoBlockParams};
#[allow(unused_imports)]
use num_traits::Float;

/// Points whose values are within this of the best are all reported.
pub const VALUE_TOL: f64 = 1e-9;
/// Canonical points closer than this are the same maximizer.
pub const DEDUP_TOL: f64 = 1e-6;
const SEED: u64 = 0x6d66_715f_7365_6564;
const SEEDS_GENERAL: usize = 64;
const SEEDS_REDUCED: usize = 8;
const GRID: usize = 48;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    ClosedFormCandidate,
    Numeric,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MaximizerReport {
    pub value: f64,
    /// Distinct global maximizers in canonical order.
    pub points: Vec<ProfilePoint>,
    pub at_omega0: bool,
    pub method: Method,
}

impl MaximizerReport {
    pub fn is_unique(&self) -> bool {
        self.points.len() == 1
    }
}

/// Global maximizers of `F` over the profile set.
pub fn maximize_f(p: &TwoBlockParams) -> Result<MaximizerReport> {
    let obj = FObjective::new(p);
    let mut starts = closed_form_candidates(p);
    starts.extend(crate::groundstate::candidate_points(&p.couplings()).into_iter().map(|w| interior(&w, p)));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let s = FObjective::simplices(p);
    if p.c > 0.0 {
        starts.extend(reduced_grid_starts(p));
        starts.extend((0..SEEDS_REDUCED).map(|_| ProfilePoint::from_vec(&s.dirichlet(&mut rng))));
    } else {
        starts.extend((0..SEEDS_GENERAL).map(|_| ProfilePoint::from_vec(&s.dirichlet(&mut rng))));
    }
    run(&obj, p, &starts)
}

/// Maximize `F(ω) + Σ gx_i x_i + gy_i y_i`. Used for field-dependent free
/// energies; `warm` are extra starting points.
pub(crate) fn maximize_linear(
    p: &TwoBlockParams,
    gx: Vec<f64>,
    gy: Vec<f64>,
    warm: &[ProfilePoint],
) -> Result<MaximizerReport> {
    let mut obj = FObjective::new(p);
    obj.gx = gx;
    obj.gy = gy;
    let mut starts = closed_form_candidates(p);
    starts.extend(warm.iter().map(|w| interior(w, p)));
    // Every ordering of a warm start matters once the field breaks the
    // permutation symmetry; the sorted and reversed ones are enough to seed.
    for w in warm {
        let mut rev = w.clone();
        rev.x.reverse();
        rev.y.reverse();
        starts.push(interior(&rev, p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let s = FObjective::simplices(p);
    starts.extend((0..SEEDS_GENERAL).map(|_| ProfilePoint::from_vec(&s.dirichlet(&mut rng))));
    run(&obj, p, &starts)
}

fn closed_form_candidates(p: &TwoBlockParams) -> Vec<ProfilePoint> {
    let w0 = ProfilePoint::uniform(p.rho, p.r);
    let mut v = vec![w0];
    if p.r > 2 {
        v.push(ProfilePoint::omega1(p.rho, p.r, 1.0));
        v.push(ProfilePoint::omega1(p.rho, p.r, -1.0));
    }
    v
}

fn interior(w: &ProfilePoint, p: &TwoBlockParams) -> ProfilePoint {
    let s = FObjective::simplices(p);
    ProfilePoint::from_vec(&s.interiorize(&w.to_vec(), 0.05))
}

/// Two-value profiles `x = (u, ρ−u/(r−1), …)`, `y = (v, …)` on a grid; the
/// grid's local maxima seed the full-space ascent.
fn reduced_grid_starts(p: &TwoBlockParams) -> Vec<ProfilePoint> {
    let r = p.r as f64;
    let (rho, rb) = (p.rho, p.rho_b());
    let point = |i: usize, j: usize| {
        let u = rho / r + (rho - rho / r) * i as f64 / GRID as f64;
        let v = rb / r + (rb - rb / r) * j as f64 / GRID as f64;
        let mut x = vec![(rho - u) / (r - 1.0); p.r];
        let mut y = vec![(rb - v) / (r - 1.0); p.r];
        x[0] = u;
        y[0] = v;
        ProfilePoint { x, y }
    };
    let vals: Vec<Vec<f64>> = (0..GRID).map(|i| (0..GRID).map(|j| f_value(&point(i, j), p)).collect()).collect();
    let mut peaks = Vec::new();
    for i in 0..GRID {
        for j in 0..GRID {
            let mut is_max = true;
            for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    let (ni, nj) = (i as i64 + di, j as i64 + dj);
                    if (di, dj) == (0, 0) || ni < 0 || nj < 0 || ni >= GRID as i64 || nj >= GRID as i64 {
                        continue;
                    }
                    if vals[ni as usize][nj as usize] > vals[i][j] {
                        is_max = false;
                    }
                }
            }
            if is_max {
                peaks.push((vals[i][j], i, j));
            }
        }
    }
    peaks.sort_by(|a, b| b.0.total_cmp(&a.0));
    peaks.truncate(8);
    peaks.into_iter().map(|(_, i, j)| point(i, j)).collect()
}

fn run(obj: &FObjective, p: &TwoBlockParams, starts: &[ProfilePoint]) -> Result<MaximizerReport> {
    let s = FObjective::simplices(p);
    let mut results: Vec<Ascent> = starts
        .iter()
        .map(|w| ascend(obj, &s, &w.to_vec()))
        .filter(|a| a.residual <= KKT_TOL && a.value.is_finite())
        .collect();
    if results.is_empty() {
        return Err(Error::NoConvergence("no start reached the KKT tolerance"));
    }
    results.sort_by(|a, b| b.value.total_cmp(&a.value));
    let best = results[0].value;
    let mut kept: Vec<Ascent> = Vec::new();
    for a in results.into_iter().take_while(|a| a.value >= best - VALUE_TOL) {
        if !kept.iter().any(|k| same_basin(obj, k, &a)) {
            kept.push(a);
        }
    }

    let w0 = ProfilePoint::uniform(p.rho, p.r);
    let w1 = ProfilePoint::omega1(p.rho, p.r, p.c);
    let w1_stationary = p.r > 2 && stationary(obj, p, &w1);
    let mut points = Vec::new();
    let mut all_closed = true;
    for a in &kept {
        let w = ProfilePoint::from_vec(&a.point).canonical(p.c);
        let snapped = if w.distance(&w0) < DEDUP_TOL {
            w0.clone()
        } else if w1_stationary && w.distance(&w1) < DEDUP_TOL {
            w1.clone()
        } else {
            all_closed = false;
            w
        };
        if !points.iter().any(|q: &ProfilePoint| q.distance(&snapped) < DEDUP_TOL) {
            points.push(snapped);
        }
    }
    let value = points.iter().map(|w| obj.value(&w.to_vec())).fold(f64::NEG_INFINITY, f64::max).max(best);
    let at_omega0 = points.iter().any(|w| *w == w0);
    Ok(MaximizerReport {
        value,
        points,
        at_omega0,
        method: if all_closed { Method::ClosedFormCandidate } else { Method::Numeric },
    })
}

fn stationary(obj: &FObjective, p: &TwoBlockParams, w: &ProfilePoint) -> bool {
    let v = w.to_vec();
    let mut g = vec![0.0; v.len()];
    obj.gradient(&v, &mut g);
    FObjective::simplices(p).project_tangent(&mut g);
    g.iter().all(|x| x.abs() < KKT_TOL)
}

/// Two maximizers are the same when close, or when `F` does not dip along
/// the segment between them (a flat maximum found twice).
fn same_basin(obj: &FObjective, a: &Ascent, b: &Ascent) -> bool {
    let d = a.point.iter().zip(&b.point).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    if d < DEDUP_TOL {
        return true;
    }
    let floor = a.value.min(b.value) - 1e-11;
    (1..10).all(|k| {
        let t = k as f64 / 10.0;
        let m: Vec<f64> = a.point.iter().zip(&b.point).map(|(x, y)| (1.0 - t) * x + t * y).collect();
        obj.value(&m) >= floor
    })
}

/// `max F`, the same for the AB and WB models.
pub fn free_energy(p: &TwoBlockParams) -> Result<f64> {
    Ok(maximize_f(p)?.value)
}

/// `max F + ρ log ρ + ρ′ log ρ′`: the limit of `(1/n) log Z_n` itself. The
/// constant comes from `(1/n) log d_μ` for `μ ⊢ ρn` and does not affect any
/// maximizer.
pub fn free_energy_comparable(p: &TwoBlockParams) -> Result<f64> {
    let rb = p.rho_b();
    Ok(free_energy(p)? + p.rho * p.rho.ln() + rb * rb.ln())
}
