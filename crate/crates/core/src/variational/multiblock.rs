use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numeric::xlogx;
use crate::oracle::MbTerm;

use super::optimize::{ascend, Objective, Simplices, KKT_TOL};
#[allow(unused_imports)]
use num_traits::Float;

const SEED: u64 = 0x6d62_5f73_6565_6473;
const SEEDS: usize = 64;
const REFINE_STEPS: usize = 200;
const REFINE_STARTS: usize = 4;
/// Improvement over the commuting value that counts as real.
pub const REFINE_GAIN: f64 = 1e-9;

/// Thermodynamic multi-block functional: `p` blocks of density `ρ_k` and
/// couplings per cycle type. Each term's `block[k]` multiplies
/// `∏_j tr X_k^{γ_j}` and `global` multiplies `∏_j tr (Σ_k X_k)^{γ_j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiBlockSpec {
    pub r: usize,
    pub rho: Vec<f64>,
    pub beta: f64,
    pub terms: Vec<MbTerm>,
}

impl MultiBlockSpec {
    pub fn new(r: usize, rho: Vec<f64>, beta: f64, terms: Vec<MbTerm>) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidParameter(format!("r must be at least 2, got {r}")));
        }
        if rho.is_empty() || rho.iter().any(|&x| !(x > 0.0)) || (rho.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter("block densities must be positive and sum to 1".into()));
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta must be nonnegative, got {beta}")));
        }
        if terms.iter().any(|t| t.block.len() != rho.len()) {
            return Err(Error::InvalidParameter("every term needs one coupling per block".into()));
        }
        Ok(Self { r, rho, beta, terms })
    }

    /// Convert couplings of the finite Hamiltonian, whose block terms are
    /// class averages over `m_k = ρ_k n` sites, to this functional: the block
    /// character ratio tends to `p_γ(x/ρ_k)`, so `a_k` becomes
    /// `a_k / ρ_k^{|γ|}`.
    pub fn from_finite(r: usize, rho: Vec<f64>, beta: f64, terms: &[MbTerm]) -> Result<Self> {
        let scaled = terms
            .iter()
            .map(|t| {
                let size = t.cycle.size() as i32;
                MbTerm {
                    cycle: t.cycle.clone(),
                    block: t.block.iter().zip(&rho).map(|(a, p)| a / p.powi(size)).collect(),
                    global: t.global,
                }
            })
            .collect::<Vec<_>>();
        Self::new(r, rho, beta, scaled)
    }

    fn simplices(&self) -> Simplices {
        Simplices { sizes: vec![self.r; self.rho.len()], totals: self.rho.clone() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiBlockResult {
    /// Maximum over simultaneously diagonal tuples.
    pub commuting_value: f64,
    /// Best value after the conjugation refinement (never below the
    /// commuting value).
    pub value: f64,
    pub improved: bool,
    /// Eigenvalues of each `X_k` at the commuting maximizer, paired by index.
    pub spectra: Vec<Vec<f64>>,
}

struct Commuting<'a> {
    spec: &'a MultiBlockSpec,
}

/// `P = ∏_j p_{γ_j}(v)` with its gradient and Hessian.
fn power_sum_product(parts: &[usize], v: &[f64]) -> (f64, Vec<f64>, DMatrix<f64>) {
    let r = v.len();
    let sums: Vec<f64> = parts.iter().map(|&q| v.iter().map(|x| x.powi(q as i32)).sum()).collect();
    let others = |skip: &[usize]| -> f64 {
        sums.iter().enumerate().filter(|(i, _)| !skip.contains(i)).map(|(_, s)| s).product()
    };
    let value = sums.iter().product();
    let mut grad = vec![0.0; r];
    let mut hess = DMatrix::zeros(r, r);
    for (j, &q) in parts.iter().enumerate() {
        let qf = q as f64;
        let rest = others(&[j]);
        for i in 0..r {
            grad[i] += qf * v[i].powi(q as i32 - 1) * rest;
            hess[(i, i)] += qf * (qf - 1.0) * v[i].powi(q as i32 - 2) * rest;
        }
        for (l, &q2) in parts.iter().enumerate() {
            if l == j {
                continue;
            }
            let rest2 = others(&[j, l]);
            for i in 0..r {
                for k in 0..r {
                    hess[(i, k)] += qf * v[i].powi(q as i32 - 1) * q2 as f64 * v[k].powi(q2 as i32 - 1) * rest2;
                }
            }
        }
    }
    (value, grad, hess)
}

impl Commuting<'_> {
    fn total(&self, v: &[f64]) -> Vec<f64> {
        let r = self.spec.r;
        (0..r).map(|i| v.iter().skip(i).step_by(r).sum()).collect()
    }
}

impl Objective for Commuting<'_> {
    fn value(&self, v: &[f64]) -> f64 {
        let (r, sp) = (self.spec.r, self.spec);
        let s = self.total(v);
        let mut e = 0.0;
        for t in &sp.terms {
            for (k, a) in t.block.iter().enumerate() {
                e += a * power_sum_product(t.cycle.parts(), &v[k * r..(k + 1) * r]).0;
            }
            e += t.global * power_sum_product(t.cycle.parts(), &s).0;
        }
        -v.iter().map(|&x| xlogx(x)).sum::<f64>() + sp.beta * e
    }

    fn gradient(&self, v: &[f64], g: &mut [f64]) {
        let (r, sp) = (self.spec.r, self.spec);
        let s = self.total(v);
        for (i, x) in v.iter().enumerate() {
            g[i] = -x.ln() - 1.0;
        }
        for t in &sp.terms {
            let gs = power_sum_product(t.cycle.parts(), &s).1;
            for (k, a) in t.block.iter().enumerate() {
                let gk = power_sum_product(t.cycle.parts(), &v[k * r..(k + 1) * r]).1;
                for i in 0..r {
                    g[k * r + i] += sp.beta * (a * gk[i] + t.global * gs[i]);
                }
            }
        }
    }

    fn hessian(&self, v: &[f64], h: &mut DMatrix<f64>) {
        let (r, sp) = (self.spec.r, self.spec);
        let p = sp.rho.len();
        let s = self.total(v);
        h.fill(0.0);
        for (i, x) in v.iter().enumerate() {
            h[(i, i)] = -1.0 / x;
        }
        for t in &sp.terms {
            let hs = power_sum_product(t.cycle.parts(), &s).2;
            for k in 0..p {
                let hk = power_sum_product(t.cycle.parts(), &v[k * r..(k + 1) * r]).2;
                for i in 0..r {
                    for j in 0..r {
                        h[(k * r + i, k * r + j)] += sp.beta * t.block[k] * hk[(i, j)];
                        for l in 0..p {
                            h[(k * r + i, l * r + j)] += sp.beta * t.global * hs[(i, j)];
                        }
                    }
                }
            }
        }
    }
}

fn commuting_maximum(spec: &MultiBlockSpec) -> Result<(f64, Vec<f64>)> {
    let obj = Commuting { spec };
    let s = spec.simplices();
    let (r, p) = (spec.r, spec.rho.len());
    let mut starts = vec![s.uniform()];
    // Peaked tuples, every block on level 0 or the last block reversed.
    for reversed in [false, true] {
        let mut v = Vec::with_capacity(r * p);
        for (k, &rho) in spec.rho.iter().enumerate() {
            let mut col = vec![0.0; r];
            col[if reversed && k + 1 == p { r - 1 } else { 0 }] = rho;
            v.extend(col);
        }
        starts.push(s.interiorize(&v, 0.1));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    starts.extend((0..SEEDS).map(|_| s.dirichlet(&mut rng)));
    starts
        .iter()
        .map(|v| ascend(&obj, &s, v))
        .filter(|a| a.residual <= KKT_TOL)
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .map(|a| (a.value, a.point))
        .ok_or(Error::NoConvergence("multi-block commuting ansatz"))
}

/// Cayley transform `(I − A)⁻¹(I + A)` of an antisymmetric generator.
fn cayley(params: &[f64], r: usize) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(r, r);
    let mut idx = 0;
    for i in 0..r {
        for j in i + 1..r {
            a[(i, j)] = params[idx];
            a[(j, i)] = -params[idx];
            idx += 1;
        }
    }
    let id = DMatrix::<f64>::identity(r, r);
    (&id - &a).lu().solve(&(&id + &a)).unwrap_or(id)
}

/// Global energy with block `k ≥ 1` conjugated by `U_k`.
fn conjugated_global(spec: &MultiBlockSpec, spectra: &[Vec<f64>], params: &[f64]) -> f64 {
    let r = spec.r;
    let per = r * (r - 1) / 2;
    let mut total = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&spectra[0]));
    for (k, d) in spectra.iter().enumerate().skip(1) {
        let u = cayley(&params[(k - 1) * per..k * per], r);
        let dm = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(d));
        total += &u * dm * u.transpose();
    }
    let mut e = 0.0;
    for t in &spec.terms {
        let mut prod = 1.0;
        for &q in t.cycle.parts() {
            let mut pw = total.clone();
            for _ in 1..q {
                pw = &pw * &total;
            }
            prod *= pw.trace();
        }
        e += t.global * prod;
    }
    spec.beta * e
}

/// Maximize the multi-block functional: first over commuting tuples, then
/// locally over relative real rotations of the blocks.
pub fn multi_block_free_energy(spec: &MultiBlockSpec) -> Result<MultiBlockResult> {
    let (commuting_value, point) = commuting_maximum(spec)?;
    let r = spec.r;
    let spectra: Vec<Vec<f64>> = point.chunks(r).map(|c| c.to_vec()).collect();
    let dim = (spec.rho.len() - 1) * r * (r - 1) / 2;
    let base = conjugated_global(spec, &spectra, &vec![0.0; dim]);
    let mut best_gain = 0.0f64;
    if dim > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
        for _ in 0..REFINE_STARTS {
            let mut th: Vec<f64> = (0..dim).map(|_| 0.05 * (2.0 * rng.gen::<f64>() - 1.0)).collect();
            let mut val = conjugated_global(spec, &spectra, &th);
            let mut step = 0.1;
            for _ in 0..REFINE_STEPS {
                let grad: Vec<f64> = (0..dim)
                    .map(|i| {
                        let h = 1e-6;
                        let mut tp = th.clone();
                        let mut tm = th.clone();
                        tp[i] += h;
                        tm[i] -= h;
                        (conjugated_global(spec, &spectra, &tp) - conjugated_global(spec, &spectra, &tm)) / (2.0 * h)
                    })
                    .collect();
                let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
                if norm < 1e-12 {
                    break;
                }
                let mut moved = false;
                while step > 1e-12 {
                    let trial: Vec<f64> = th.iter().zip(&grad).map(|(t, g)| t + step * g / norm).collect();
                    let tv = conjugated_global(spec, &spectra, &trial);
                    if tv > val {
                        th = trial;
                        val = tv;
                        step *= 2.0;
                        moved = true;
                        break;
                    }
                    step *= 0.5;
                }
                if !moved {
                    break;
                }
            }
            best_gain = best_gain.max(val - base);
        }
    }
    let improved = best_gain > REFINE_GAIN;
    Ok(MultiBlockResult {
        commuting_value,
        value: commuting_value + if improved { best_gain } else { 0.0 },
        improved,
        spectra,
    })
}

/// Transition point of the commuting functional: the smallest `β` at which
/// the uniform tuple stops being the maximizer. `None` if no transition is
/// found below `β = 10⁴`.
pub fn multi_block_beta_crit(spec: &MultiBlockSpec) -> Result<Option<f64>> {
    let ordered = |beta: f64| -> Result<bool> {
        let s = MultiBlockSpec { beta, ..spec.clone() };
        let obj = Commuting { spec: &s };
        let uniform = obj.value(&s.simplices().uniform());
        Ok(commuting_maximum(&s)?.0 > uniform + super::PREDICATE_GAP)
    };
    let mut hi = 1.0;
    while !ordered(hi)? {
        hi *= 2.0;
        if hi > 1e4 {
            return Ok(None);
        }
    }
    let mut lo = if hi > 1.0 { hi / 2.0 } else { 1e-6 };
    while hi - lo > 1e-7 {
        let mid = 0.5 * (lo + hi);
        if ordered(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}
