//! Interior ascent on a product of scaled simplices `{v ≥ 0, Σ_{group} v = total}`.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
#[allow(unused_imports)]
use num_traits::Float;

pub(crate) trait Objective {
    fn value(&self, v: &[f64]) -> f64;
    fn gradient(&self, v: &[f64], g: &mut [f64]);
    fn hessian(&self, v: &[f64], h: &mut DMatrix<f64>);
}

/// Consecutive variable groups with prescribed sums.
#[derive(Clone, Debug)]
pub(crate) struct Simplices {
    pub sizes: Vec<usize>,
    pub totals: Vec<f64>,
}

impl Simplices {
    pub fn dim(&self) -> usize {
        self.sizes.iter().sum()
    }

    fn groups(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let mut start = 0;
        self.sizes.iter().zip(&self.totals).map(move |(&len, &total)| {
            let g = (start, len, total);
            start += len;
            g
        })
    }

    /// Gradient minus its mean on each group (the projection onto the
    /// tangent space of the constraint set).
    pub fn project_tangent(&self, g: &mut [f64]) {
        for (start, len, _) in self.groups() {
            let mean = g[start..start + len].iter().sum::<f64>() / len as f64;
            for x in &mut g[start..start + len] {
                *x -= mean;
            }
        }
    }

    pub fn uniform(&self) -> Vec<f64> {
        self.groups().flat_map(|(_, len, total)| core::iter::repeat(total / len as f64).take(len)).collect()
    }

    /// Independent Dirichlet(1) draws on each group.
    pub fn dirichlet<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.dim());
        for (_, len, total) in self.groups() {
            let draws: Vec<f64> = (0..len).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
            let s: f64 = draws.iter().sum();
            v.extend(draws.iter().map(|d| total * d / s));
        }
        v
    }

    /// Move `v` a fraction `t` of the way towards the uniform point, so every
    /// entry is strictly positive.
    pub fn interiorize(&self, v: &[f64], t: f64) -> Vec<f64> {
        let u = self.uniform();
        v.iter().zip(&u).map(|(a, b)| (1.0 - t) * a + t * b).collect()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Ascent {
    pub point: Vec<f64>,
    pub value: f64,
    /// Max-norm of the tangential gradient at `point`.
    pub residual: f64,
}

pub(crate) const KKT_TOL: f64 = 1e-10;
const MAX_ITER: usize = 400;

/// Damped Newton ascent with gradient fallback, keeping all entries positive.
pub(crate) fn ascend<O: Objective>(obj: &O, s: &Simplices, start: &[f64]) -> Ascent {
    let n = s.dim();
    let k = s.sizes.len();
    let mut v = start.to_vec();
    let mut g = vec![0.0; n];
    let mut h = DMatrix::zeros(n, n);
    let mut value = obj.value(&v);
    let mut stalls = 0;
    for _ in 0..MAX_ITER {
        obj.gradient(&v, &mut g);
        let mut pg = g.clone();
        s.project_tangent(&mut pg);
        let residual = pg.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if residual < 1e-14 {
            break;
        }
        obj.hessian(&v, &mut h);
        let dir = newton_direction(&h, &g, s, k).filter(|d| {
            let slope: f64 = d.iter().zip(&g).map(|(a, b)| a * b).sum();
            let curv = quad(&h, d);
            slope > 0.0 && curv < 0.0
        });
        let (dir, newton) = match dir {
            Some(d) => (d, true),
            None => (pg.clone(), false),
        };
        let slope: f64 = dir.iter().zip(&g).map(|(a, b)| a * b).sum();
        let mut t_max = f64::INFINITY;
        for (x, d) in v.iter().zip(&dir) {
            if *d < 0.0 {
                t_max = t_max.min(-x / d);
            }
        }
        let mut t = if newton { 1.0f64.min(0.995 * t_max) } else { (0.5 / residual.max(1e-300)).min(0.995 * t_max) };
        let mut accepted = false;
        for _ in 0..80 {
            let trial: Vec<f64> = v.iter().zip(&dir).map(|(x, d)| x + t * d).collect();
            if trial.iter().all(|&x| x > 0.0) {
                let tv = obj.value(&trial);
                if tv >= value + 1e-4 * t * slope || (newton && tv >= value && residual < 1e-8) {
                    v = trial;
                    value = tv;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            stalls += 1;
            if stalls > 2 {
                break;
            }
        } else {
            stalls = 0;
        }
        renormalize(&mut v, s);
        value = obj.value(&v);
    }
    obj.gradient(&v, &mut g);
    s.project_tangent(&mut g);
    let residual = g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Ascent { point: v, value, residual }
}

/// Solve `[[H, Aᵀ], [A, 0]] [d; λ] = [-g; 0]` for the constrained Newton step.
fn newton_direction(h: &DMatrix<f64>, g: &[f64], s: &Simplices, k: usize) -> Option<Vec<f64>> {
    let n = g.len();
    let mut kkt = DMatrix::zeros(n + k, n + k);
    kkt.view_mut((0, 0), (n, n)).copy_from(h);
    for (gi, (start, len, _)) in s.groups().enumerate() {
        for i in start..start + len {
            kkt[(n + gi, i)] = 1.0;
            kkt[(i, n + gi)] = 1.0;
        }
    }
    let mut rhs = DVector::zeros(n + k);
    for i in 0..n {
        rhs[i] = -g[i];
    }
    let sol = kkt.lu().solve(&rhs)?;
    let d: Vec<f64> = sol.iter().take(n).copied().collect();
    d.iter().all(|x| x.is_finite()).then_some(d)
}

fn quad(h: &DMatrix<f64>, d: &[f64]) -> f64 {
    let v = DVector::from_column_slice(d);
    v.dot(&(h * &v))
}

fn renormalize(v: &mut [f64], s: &Simplices) {
    for (start, len, total) in s.groups() {
        let sum: f64 = v[start..start + len].iter().sum();
        for x in &mut v[start..start + len] {
            *x *= total / sum;
        }
    }
}
