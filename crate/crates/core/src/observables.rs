//! Limiting correlation functions and magnetisation.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::combinatorics::characters::complete_homogeneous;
use crate::combinatorics::partitions_bounded;
use crate::error::{Error, Result};
use crate::variational::{free_energy, maximize_f, maximize_linear, ProfilePoint, TwoBlockParams};
#[allow(unused_imports)]
use num_traits::Float;

/// Accept the determinant quotient without trying the series when its
/// estimated relative rounding error is below this.
const DIRECT_ACCEPT: f64 = 1e-13;
/// Largest `max|w|·max|z|` (after centering) for which the series is tried.
const SERIES_SPREAD_LIMIT: f64 = 40.0;
const MAX_SERIES_DEGREE: usize = 200;

/// Which of the two-block models an observable refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Ab,
    Wb,
}

impl Kind {
    fn same_sign(self) -> bool {
        self == Kind::Ab
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

/// `R(w; z) = det[e^{w_i z_j}] ∏_{i<j} (j−i)/((w_i−w_j)(z_i−z_j))`, extended
/// continuously to coinciding nodes.
///
/// Both arguments are centered first, using `R(w + s; z) = e^{sΣz} R(w; z)`
/// and its mirror, and balanced with `R(tw; z/t) = R(w; z)`. The determinant
/// quotient and the Schur expansion each carry a rounding estimate and the
/// better one is returned.
pub fn r_function(w: &[Complex64], z: &[f64]) -> Result<Complex64> {
    let r = w.len();
    if z.len() != r {
        return Err(Error::RankMismatch { expected: r, got: z.len() });
    }
    if r <= 1 {
        return Ok(w.first().map_or(Complex64::one(), |&w0| (w0 * z[0]).exp()));
    }
    let w_mean = w.iter().sum::<Complex64>() / r as f64;
    let z_sum: f64 = z.iter().sum();
    let z_mean = z_sum / r as f64;
    let mut wc: Vec<Complex64> = w.iter().map(|v| v - w_mean).collect();
    let mut zc: Vec<Complex64> = z.iter().map(|&v| Complex64::new(v - z_mean, 0.0)).collect();
    let (sw, sz) = (max_norm(&wc), max_norm(&zc));
    if sw == 0.0 || sz == 0.0 {
        return Ok((w_mean * z_sum).exp());
    }
    let t = (sz / sw).sqrt();
    wc.iter_mut().for_each(|v| *v *= t);
    zc.iter_mut().for_each(|v| *v /= t);
    let prefactor = (w_mean * z_sum).exp();

    let direct = direct(&wc, &zc);
    let mut best = direct;
    if direct.map_or(true, |(_, err)| err > DIRECT_ACCEPT) && sw * sz <= SERIES_SPREAD_LIMIT {
        if let Some(series) = series(&wc, &zc) {
            if best.map_or(true, |(_, err)| series.1 < err) {
                best = Some(series);
            }
        }
    }
    let value = best.ok_or(Error::IllConditioned)?.0 * prefactor;
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::IllConditioned)
    }
}

fn max_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

fn superfactorial(r: usize) -> f64 {
    (1..r).map(|k| (1..=k).map(|j| j as f64).product::<f64>()).product()
}

/// Determinant quotient with a Hadamard-type estimate of its relative error.
fn direct(w: &[Complex64], z: &[Complex64]) -> Option<(Complex64, f64)> {
    let r = w.len();
    let m = DMatrix::from_fn(r, r, |i, j| (w[i] * z[j]).exp());
    let det = m.determinant();
    let mut den = Complex64::one();
    for i in 0..r {
        for j in i + 1..r {
            den *= (w[i] - w[j]) * (z[i] - z[j]);
        }
    }
    if den.norm() == 0.0 || det.norm() == 0.0 {
        return None;
    }
    let rows: f64 = (0..r).map(|i| m.row(i).iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()).product();
    let err = f64::EPSILON * r as f64 * rows / det.norm();
    Some((det * superfactorial(r) / den, err))
}

/// Cauchy–Binet expansion `Σ_λ s_λ(w) s_λ(z) / ∏_j (λ_j + r − j)!`, summed
/// by degree until the tail is negligible. The error estimate is the
/// rounding on the sum of absolute terms.
fn series(w: &[Complex64], z: &[Complex64]) -> Option<(Complex64, f64)> {
    let r = w.len();
    let top = MAX_SERIES_DEGREE + r;
    let hw = complete_homogeneous(w, top);
    let hz = complete_homogeneous(z, top);
    let mut ln_fact = vec![0.0; top + 1];
    for k in 1..=top {
        ln_fact[k] = ln_fact[k - 1] + (k as f64).ln();
    }
    let schur = |h: &[Complex64], parts: &[usize]| -> Complex64 {
        let len = parts.len();
        if len == 0 {
            return Complex64::one();
        }
        let entry = |k: i64| if k < 0 { Complex64::zero() } else { h[k as usize] };
        DMatrix::from_fn(len, len, |i, j| entry(parts[i] as i64 - i as i64 + j as i64)).determinant()
    };
    let norm = superfactorial(r);
    let bound = max_norm(w) * max_norm(z);
    let mut total = Complex64::zero();
    let mut magnitude = 0.0;
    let mut quiet = 0;
    for n in 0..=MAX_SERIES_DEGREE {
        let mut layer = Complex64::zero();
        for lam in partitions_bounded(n, r) {
            let parts = lam.parts();
            let ln_den: f64 = (0..r).map(|j| ln_fact[parts.get(j).copied().unwrap_or(0) + r - 1 - j]).sum();
            let term = schur(&hw, parts) * schur(&hz, parts) * (-ln_den).exp() * norm;
            magnitude += term.norm();
            layer += term;
        }
        total += layer;
        if (n as f64) > bound && layer.norm() <= 1e-17 * total.norm().max(1e-300) {
            quiet += 1;
            if quiet >= 3 {
                let err = f64::EPSILON * (n as f64).max(1.0) * magnitude / total.norm().max(1e-300);
                return Some((total, err));
            }
        } else {
            quiet = 0;
        }
    }
    None
}

/// `R` at `w = h(0, 1, …, r−1)` in product form.
pub fn r_function_arithmetic(h: f64, z: &[f64]) -> f64 {
    let mut out = 1.0;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let x = h * (z[i] - z[j]);
            let ratio = if x == 0.0 { 1.0 } else { x.exp_m1() / x };
            out *= (h * z[j]).exp() * ratio;
        }
    }
    out
}

/// Limit of `⟨exp((1/n)Σ W_i)⟩` for `W = h·(rank-1 projector)` in the AB
/// model when `z = (z_1, z_2, …, z_2)` sums to 1, with `u = z_1 − z_2`.
pub fn projector_correlation(h: f64, u: f64, r: usize) -> f64 {
    let s2 = (r - 1) as i32;
    let x = h * u;
    let fact: f64 = (1..=r - 1).map(|k| k as f64).product();
    let prefactor = (h / r as f64 * (1.0 - u)).exp();
    if x.abs() < 1.0 {
        // Σ_{j ≥ 2S} x^{j − 2S} (2S)!/j!, summed directly to avoid cancellation
        let mut term = 1.0f64;
        let mut sum = 1.0f64;
        let mut j = s2;
        while term.abs() > 1e-18 * sum.abs() {
            j += 1;
            term *= x / j as f64;
            sum += term;
        }
        return prefactor * sum;
    }
    let head: f64 = (0..s2).scan(1.0, |t, j| {
        let out = *t;
        *t *= x / (j + 1) as f64;
        Some(out)
    })
    .sum();
    prefactor * fact / x.powi(s2) * (x.exp() - head)
}

fn sorted_z(w: &ProfilePoint, kind: Kind) -> Vec<f64> {
    w.z(kind.same_sign())
}

/// Limit of `⟨exp((1/n)(Σ_A W_i ± Σ_B W_i))⟩` (transpose on `B` for WB) for
/// `W` with eigenvalues `w`. Needs a unique maximizer of `F`; otherwise the
/// error carries the `R` value at each maximizer.
pub fn limit_correlation(p: &TwoBlockParams, kind: Kind, w: &[Complex64]) -> Result<Complex64> {
    if w.len() != p.r {
        return Err(Error::RankMismatch { expected: p.r, got: w.len() });
    }
    let report = maximize_f(p)?;
    let values = report
        .points
        .iter()
        .map(|pt| r_function(w, &sorted_z(pt, kind)))
        .collect::<Result<Vec<_>>>()?;
    if values.len() == 1 {
        Ok(values[0])
    } else {
        Err(Error::NonUniqueMaximizer { candidates: values })
    }
}

fn sorted_desc(w: &[f64]) -> Vec<f64> {
    let mut v = w.to_vec();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    v
}

/// One-sided derivative of `Φ(β, h)` at `h = 0`: the largest `Σ z_i w_i`
/// (right) or smallest `Σ z_i w_{r+1−i}` (left) over all maximizers.
pub fn magnetisation(p: &TwoBlockParams, kind: Kind, w: &[f64], side: Side) -> Result<f64> {
    if w.len() != p.r {
        return Err(Error::RankMismatch { expected: p.r, got: w.len() });
    }
    let w = sorted_desc(w);
    let report = maximize_f(p)?;
    let values = report.points.iter().map(|pt| {
        let z = sorted_z(pt, kind);
        match side {
            Side::Right => z.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>(),
            Side::Left => z.iter().zip(w.iter().rev()).map(|(a, b)| a * b).sum::<f64>(),
        }
    });
    Ok(match side {
        Side::Right => values.fold(f64::NEG_INFINITY, f64::max),
        Side::Left => values.fold(f64::INFINITY, f64::min),
    })
}

/// `Φ(β, h) = max_ω [F(ω) + h Σ_i z_i w_{σ(i)}]`, with `z` the sorted
/// `x ± y` and `σ` the identity for `h > 0` and the reversal for `h < 0`.
pub fn free_energy_with_field(p: &TwoBlockParams, kind: Kind, w: &[f64], h: f64) -> Result<f64> {
    if w.len() != p.r {
        return Err(Error::RankMismatch { expected: p.r, got: w.len() });
    }
    if h == 0.0 {
        return free_energy(p);
    }
    // The rearrangement inequality turns the sorted pairing into a plain
    // linear term once ω ranges over all orderings.
    let gx: Vec<f64> = w.iter().map(|v| h * v).collect();
    let s = if kind.same_sign() { 1.0 } else { -1.0 };
    let gy: Vec<f64> = gx.iter().map(|v| s * v).collect();
    let warm = maximize_f(p)?.points;
    let mut starts = Vec::new();
    for pt in &warm {
        // align the zero-field maximizer with the field
        let z: Vec<f64> = pt.x.iter().zip(&pt.y).map(|(x, y)| x + s * y).collect();
        let mut idx: Vec<usize> = (0..p.r).collect();
        idx.sort_by(|&i, &j| z[j].partial_cmp(&z[i]).unwrap_or(Ordering::Equal));
        if h < 0.0 {
            idx.reverse();
        }
        let mut slots: Vec<usize> = (0..p.r).collect();
        slots.sort_by(|&i, &j| w[j].partial_cmp(&w[i]).unwrap_or(Ordering::Equal));
        let mut x = vec![0.0; p.r];
        let mut y = vec![0.0; p.r];
        for (rank, &src) in idx.iter().enumerate() {
            x[slots[rank]] = pt.x[src];
            y[slots[rank]] = pt.y[src];
        }
        starts.push(ProfilePoint { x, y });
    }
    Ok(maximize_linear(p, gx, gy, &starts)?.value)
}
