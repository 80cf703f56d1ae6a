use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::numeric::xlogx;

use super::optimize::{Objective, Simplices};
#[allow(unused_imports)]
use num_traits::Float;

/// Couplings and density of a two-block model, without a temperature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Couplings {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub rho: f64,
    pub r: usize,
}

impl Couplings {
    pub fn new(a: f64, b: f64, c: f64, rho: f64, r: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::InvalidParameter(format!("couplings must be finite, got ({a}, {b}, {c})")));
        }
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::InvalidParameter(format!("rho must lie in (0, 1), got {rho}")));
        }
        if r < 2 {
            return Err(Error::InvalidParameter(format!("r must be at least 2, got {r}")));
        }
        Ok(Self { a, b, c, rho, r })
    }

    pub fn rho_b(&self) -> f64 {
        1.0 - self.rho
    }

    /// `Q(x, y) = (a x² + b y² + 2c x y) / 2`.
    pub fn q(&self, x: f64, y: f64) -> f64 {
        0.5 * (self.a * x * x + self.b * y * y + 2.0 * self.c * x * y)
    }

    /// True when `Q` is negative semidefinite: `a ≤ 0`, `b ≤ 0`, `ab ≥ c²`.
    pub fn q_negative_semidefinite(&self) -> bool {
        self.a <= 0.0 && self.b <= 0.0 && self.a * self.b >= self.c * self.c
    }

    pub fn at(&self, beta: f64) -> Result<TwoBlockParams> {
        TwoBlockParams::new(self.a, self.b, self.c, self.rho, self.r, beta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoBlockParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub rho: f64,
    pub r: usize,
    pub beta: f64,
}

impl TwoBlockParams {
    pub fn new(a: f64, b: f64, c: f64, rho: f64, r: usize, beta: f64) -> Result<Self> {
        Couplings::new(a, b, c, rho, r)?;
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
        }
        Ok(Self { a, b, c, rho, r, beta })
    }

    pub fn couplings(&self) -> Couplings {
        Couplings { a: self.a, b: self.b, c: self.c, rho: self.rho, r: self.r }
    }

    pub fn rho_b(&self) -> f64 {
        1.0 - self.rho
    }
}

/// A point `ω = (x; y)` of the profile set: `x` sums to `ρ`, `y` to `1 − ρ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfilePoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl ProfilePoint {
    pub fn new(x: Vec<f64>, y: Vec<f64>, rho: f64) -> Result<Self> {
        if x.len() != y.len() || x.is_empty() {
            return Err(Error::ShapeMismatch);
        }
        if x.iter().chain(&y).any(|v| !(*v >= 0.0)) {
            return Err(Error::InvalidParameter("profile entries must be nonnegative".into()));
        }
        let sx: f64 = x.iter().sum();
        let sy: f64 = y.iter().sum();
        if (sx - rho).abs() > 1e-12 || (sy - (1.0 - rho)).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "profile sums ({sx}, {sy}) do not match ({rho}, {})",
                1.0 - rho
            )));
        }
        Ok(Self { x, y })
    }

    /// The uniform point `ω₀`.
    pub fn uniform(rho: f64, r: usize) -> Self {
        Self { x: vec![rho / r as f64; r], y: vec![(1.0 - rho) / r as f64; r] }
    }

    /// `ω₁`: one heavy entry `(r−1)/r` of each block total, the rest equal.
    /// The `y` entries are aligned with `x` for `c ≥ 0` and reversed otherwise.
    pub fn omega1(rho: f64, r: usize, c: f64) -> Self {
        let rf = r as f64;
        let col = |total: f64| {
            let mut v = vec![total / (rf * (rf - 1.0)); r];
            v[0] = (rf - 1.0) * total / rf;
            v
        };
        let x = col(rho);
        let mut y = col(1.0 - rho);
        if c < 0.0 {
            y.reverse();
        }
        Self { x, y }
    }

    pub fn r(&self) -> usize {
        self.x.len()
    }

    /// Pairs `(x_i, y_i)` sorted by decreasing `x`; ties are broken by `y`,
    /// decreasing for `c ≥ 0` and increasing for `c < 0`. The pairing itself
    /// is kept, so `F` is unchanged.
    pub fn canonical(&self, c: f64) -> Self {
        let mut idx: Vec<usize> = (0..self.r()).collect();
        idx.sort_by(|&i, &j| {
            let by_x = self.x[j].partial_cmp(&self.x[i]).unwrap_or(Ordering::Equal);
            let by_y = if c >= 0.0 {
                self.y[j].partial_cmp(&self.y[i])
            } else {
                self.y[i].partial_cmp(&self.y[j])
            };
            by_x.then(by_y.unwrap_or(Ordering::Equal))
        });
        Self { x: idx.iter().map(|&i| self.x[i]).collect(), y: idx.iter().map(|&i| self.y[i]).collect() }
    }

    /// Sort `x` decreasing and `y` independently: decreasing for `c > 0`,
    /// increasing for `c < 0`. This pairing never lowers `F`.
    pub fn optimally_paired(&self, c: f64) -> Self {
        let mut x = self.x.clone();
        let mut y = self.y.clone();
        x.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
        if c >= 0.0 {
            y.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
        } else {
            y.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        }
        Self { x, y }
    }

    /// `z = x + y` (`same_sign`) or `x − y`, sorted decreasing.
    pub fn z(&self, same_sign: bool) -> Vec<f64> {
        let s = if same_sign { 1.0 } else { -1.0 };
        let mut z: Vec<f64> = self.x.iter().zip(&self.y).map(|(x, y)| x + s * y).collect();
        z.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
        z
    }

    pub fn distance(&self, other: &Self) -> f64 {
        crate::numeric::max_abs_diff(&self.x, &other.x).max(crate::numeric::max_abs_diff(&self.y, &other.y))
    }

    pub(crate) fn to_vec(&self) -> Vec<f64> {
        self.x.iter().chain(&self.y).copied().collect()
    }

    pub(crate) fn from_vec(v: &[f64]) -> Self {
        let r = v.len() / 2;
        Self { x: v[..r].to_vec(), y: v[r..].to_vec() }
    }
}

/// `F(ω) = Σ_i [−x_i log x_i − y_i log y_i + β Q(x_i, y_i)]`.
pub fn f_value(w: &ProfilePoint, p: &TwoBlockParams) -> f64 {
    let cp = p.couplings();
    w.x.iter().zip(&w.y).map(|(&x, &y)| -xlogx(x) - xlogx(y) + p.beta * cp.q(x, y)).sum()
}

/// Split `F(ω) − F(ω₀) = βE + H` into the energy `E`, written as a sum over
/// pair differences, and the entropy deficit `H ≤ 0`.
pub fn energy_entropy_split(w: &ProfilePoint, p: &TwoBlockParams) -> (f64, f64) {
    let cp = p.couplings();
    let r = w.r();
    let mut e = 0.0;
    for i in 0..r {
        for j in i + 1..r {
            e += cp.q(w.x[i] - w.x[j], w.y[i] - w.y[j]);
        }
    }
    e /= r as f64;
    let rf = r as f64;
    let rb = p.rho_b();
    let h = w.x.iter().chain(&w.y).map(|&v| -xlogx(v)).sum::<f64>() + p.rho * (p.rho / rf).ln() + rb * (rb / rf).ln();
    (e, h)
}

/// `F` plus the linear term `Σ gx_i x_i + gy_i y_i`, on variables `(x; y)`.
pub(crate) struct FObjective {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub beta: f64,
    pub gx: Vec<f64>,
    pub gy: Vec<f64>,
}

impl FObjective {
    pub fn new(p: &TwoBlockParams) -> Self {
        Self { a: p.a, b: p.b, c: p.c, beta: p.beta, gx: vec![0.0; p.r], gy: vec![0.0; p.r] }
    }

    pub fn simplices(p: &TwoBlockParams) -> Simplices {
        Simplices { sizes: vec![p.r, p.r], totals: vec![p.rho, p.rho_b()] }
    }
}

impl Objective for FObjective {
    fn value(&self, v: &[f64]) -> f64 {
        let r = v.len() / 2;
        (0..r)
            .map(|i| {
                let (x, y) = (v[i], v[r + i]);
                -xlogx(x) - xlogx(y)
                    + 0.5 * self.beta * (self.a * x * x + self.b * y * y + 2.0 * self.c * x * y)
                    + self.gx[i] * x
                    + self.gy[i] * y
            })
            .sum()
    }

    fn gradient(&self, v: &[f64], g: &mut [f64]) {
        let r = v.len() / 2;
        for i in 0..r {
            let (x, y) = (v[i], v[r + i]);
            g[i] = -x.ln() - 1.0 + self.beta * (self.a * x + self.c * y) + self.gx[i];
            g[r + i] = -y.ln() - 1.0 + self.beta * (self.b * y + self.c * x) + self.gy[i];
        }
    }

    fn hessian(&self, v: &[f64], h: &mut DMatrix<f64>) {
        let r = v.len() / 2;
        h.fill(0.0);
        for i in 0..r {
            h[(i, i)] = -1.0 / v[i] + self.beta * self.a;
            h[(r + i, r + i)] = -1.0 / v[r + i] + self.beta * self.b;
            h[(i, r + i)] = self.beta * self.c;
            h[(r + i, i)] = self.beta * self.c;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_at_uniform() {
        let p = TwoBlockParams::new(1.0, 1.0, 1.0, 0.5, 2, 2.0).unwrap();
        let w = ProfilePoint::uniform(0.5, 2);
        assert!((f_value(&w, &p) - (4.0f64.ln() + 0.5)).abs() < 1e-14);
        let p0 = TwoBlockParams::new(0.3, -1.0, 2.0, 0.3, 3, 1e-300).unwrap();
        let expected = 3.0f64.ln() - 0.3 * 0.3f64.ln() - 0.7 * 0.7f64.ln();
        assert!((f_value(&ProfilePoint::uniform(0.3, 3), &p0) - expected).abs() < 1e-14);
    }

    #[test]
    fn zero_entries_are_finite() {
        let p = TwoBlockParams::new(1.0, 1.0, 1.0, 0.5, 3, 1.0).unwrap();
        let w = ProfilePoint::new(vec![0.5, 0.0, 0.0], vec![0.25, 0.25, 0.0], 0.5).unwrap();
        assert!(f_value(&w, &p).is_finite());
    }

    #[test]
    fn split_at_omega1_under_tcond() {
        let (r, c) = (4usize, 1.5);
        let p = TwoBlockParams::new(c, c, c, 0.5, r, 1.3).unwrap();
        let w1 = ProfilePoint::omega1(0.5, r, c);
        let (e, h) = energy_entropy_split(&w1, &p);
        let rf = r as f64;
        assert!((h + (rf - 2.0) / rf * (rf - 1.0).ln()).abs() < 1e-13);
        assert!((e - (rf - 2.0).powi(2) / (rf * (rf - 1.0)) * c / 2.0).abs() < 1e-13);
        let (e0, h0) = energy_entropy_split(&ProfilePoint::uniform(0.5, r), &p);
        assert!(e0.abs() < 1e-15 && h0.abs() < 1e-14);
    }

    #[test]
    fn canonical_keeps_pairs() {
        let w = ProfilePoint::new(vec![0.1, 0.3, 0.1], vec![0.15, 0.05, 0.3], 0.5).unwrap();
        let cw = w.canonical(1.0);
        assert_eq!(cw.x, vec![0.3, 0.1, 0.1]);
        assert_eq!(cw.y, vec![0.05, 0.3, 0.15]);
        let cn = w.canonical(-1.0);
        assert_eq!(cn.y, vec![0.05, 0.15, 0.3]);
    }
}
