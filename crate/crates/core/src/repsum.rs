//! Exact finite-size partition functions as sums over irreducible
//! representations (Schur–Weyl duality for `S_m × S_{n-m}` and for the walled
//! Brauer algebra).

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::combinatorics::{
    dim_gl_rational, dim_specht, gl_character, lr_product, mn_character, multi_lr_product, partitions_bounded, wb_branch, Partition, SignedWeight,
};
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::oracle::{MbTerm, Model, ModelInstance, ModelKind};
#[allow(unused_imports)]
use num_traits::Float;

/// Largest `n` the representation sums accept.
pub const MAX_REPSUM_N: usize = 40;

fn to_f64(x: num_bigint::BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// `χ_w(e^{w⃗})`, or the dimension when no field is given.
fn gl_factor(weight: &SignedWeight, field: Option<&[f64]>) -> Result<f64> {
    match field {
        None => Ok(to_f64(dim_gl_rational(weight))),
        Some(w) => {
            let x: Vec<Complex64> = w.iter().map(|&wi| Complex64::new(wi.exp(), 0.0)).collect();
            Ok(gl_character(weight, &x)?.re)
        }
    }
}

fn check(inst: &ModelInstance, beta: f64, field: Option<&[f64]>) -> Result<()> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!("beta must be nonnegative, got {beta}")));
    }
    if inst.n > MAX_REPSUM_N {
        return Err(Error::InvalidParameter(format!(
            "n = {} exceeds the representation-sum limit {MAX_REPSUM_N}",
            inst.n
        )));
    }
    if let Some(w) = field {
        if w.len() != inst.r {
            return Err(Error::RankMismatch { expected: inst.r, got: w.len() });
        }
    }
    Ok(())
}

/// `tr[e^{W} ⊗ … ⊗ e^{W} e^{-βH}]` for the AB model, with `W = diag(field)`
/// (`field = None` gives the partition function).
pub fn z_ab_exact(inst: &ModelInstance, beta: f64, field: Option<&[f64]>) -> Result<f64> {
    check(inst, beta, field)?;
    let Model::TwoBlock { kind: ModelKind::Ab, m, a, b, c } = inst.model else {
        return Err(Error::WrongKind("z_ab_exact needs an AB instance"));
    };
    let (n, r) = (inst.n, inst.r);
    let k = beta / n as f64;
    let mut sum = CompensatedSum::new();
    for mu in partitions_bounded(m, r) {
        let d_mu = to_f64(dim_specht(&mu));
        for nu in partitions_bounded(n - m, r) {
            let d_nu = to_f64(dim_specht(&nu));
            let block = (a - c) * mu.content() as f64 + (b - c) * nu.content() as f64;
            for (lam, mult) in lr_product(&mu, &nu, r, None) {
                let chi = gl_factor(&SignedWeight::from_partition(&lam, r)?, field)?;
                let term = chi * mult as f64 * d_mu * d_nu * (k * (block + c * lam.content() as f64)).exp();
                debug_assert!(term > 0.0);
                sum.add(term);
            }
        }
    }
    Ok(sum.value())
}

/// The walled-Brauer analogue of [`z_ab_exact`]; identical for the `Q` and
/// `P` cross terms. The field acts as `W` on block A and `-Wᵀ` on block B.
pub fn z_wb_exact(inst: &ModelInstance, beta: f64, field: Option<&[f64]>) -> Result<f64> {
    check(inst, beta, field)?;
    let Model::TwoBlock { kind: ModelKind::WbQ | ModelKind::WbP, m, a, b, c } = inst.model else {
        return Err(Error::WrongKind("z_wb_exact needs a WB-Q or WB-P instance"));
    };
    let (n, r) = (inst.n, inst.r);
    let k = beta / n as f64;
    let mut sum = CompensatedSum::new();
    for pi in partitions_bounded(m, r) {
        let d_pi = to_f64(dim_specht(&pi));
        for tau in partitions_bounded(n - m, r) {
            let d_tau = to_f64(dim_specht(&tau));
            let outer = (c + a) * pi.content() as f64 + (c + b) * tau.content() as f64;
            for t in 0..=m.min(n - m) {
                for lam in partitions_bounded(m - t, r) {
                    for mu in partitions_bounded(n - m - t, r - lam.length().min(r)) {
                        let mult = wb_branch(&lam, &mu, &pi, &tau, r);
                        if mult == 0 {
                            continue;
                        }
                        let chi = gl_factor(&SignedWeight::from_pair(&lam, &mu, r)?, field)?;
                        let inner = (lam.content() + mu.content()) as f64 - (r * t) as f64;
                        let term = chi * mult as f64 * d_pi * d_tau * (k * (outer - c * inner)).exp();
                        debug_assert!(term > 0.0);
                        sum.add(term);
                    }
                }
            }
        }
    }
    Ok(sum.value())
}

/// Partition function of a multi-block model.
pub fn z_mb_exact(inst: &ModelInstance, beta: f64) -> Result<f64> {
    check(inst, beta, None)?;
    let Model::MultiBlock { blocks, terms } = &inst.model else {
        return Err(Error::WrongKind("z_mb_exact needs a multi-block instance"));
    };
    let (n, r) = (inst.n, inst.r);
    let choices: Vec<Vec<Partition>> = blocks.iter().map(|&size| partitions_bounded(size, r)).collect();
    let mut sum = CompensatedSum::new();
    let mut pick = alloc::vec![0usize; blocks.len()];
    loop {
        let mus: Vec<Partition> = pick.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect();
        let mut dims = 1.0;
        let mut exponent = 0.0;
        for (k, mu) in mus.iter().enumerate() {
            dims *= to_f64(dim_specht(mu));
            for term in terms {
                exponent += term.block[k] * character_ratio(mu, term)?;
            }
        }
        for (lam, mult) in multi_lr_product(&mus, r) {
            let mut global = 0.0;
            for term in terms {
                global += term.global * character_ratio(&lam, term)?;
            }
            let dim = to_f64(dim_gl_rational(&SignedWeight::from_partition(&lam, r)?));
            let t = dim * mult as f64 * dims * (n as f64 * beta * (exponent + global)).exp();
            debug_assert!(t > 0.0);
            sum.add(t);
        }
        if !advance(&mut pick, &choices) {
            break;
        }
    }
    Ok(sum.value())
}

/// `χ_μ(γ) / d_μ`.
fn character_ratio(mu: &Partition, term: &MbTerm) -> Result<f64> {
    let chi = mn_character(mu, &term.cycle)? as f64;
    Ok(chi / to_f64(dim_specht(mu)))
}

fn advance(pick: &mut [usize], choices: &[Vec<Partition>]) -> bool {
    for k in (0..pick.len()).rev() {
        pick[k] += 1;
        if pick[k] < choices[k].len() {
            return true;
        }
        pick[k] = 0;
    }
    false
}

/// Dispatch on the model kind (bilinear-biquadratic models have no sum here).
pub fn z_exact(inst: &ModelInstance, beta: f64) -> Result<f64> {
    match inst.kind() {
        ModelKind::Ab => z_ab_exact(inst, beta, None),
        ModelKind::WbQ | ModelKind::WbP => z_wb_exact(inst, beta, None),
        ModelKind::Mb => z_mb_exact(inst, beta),
        ModelKind::BilinearBiquadratic => Err(Error::WrongKind("no representation sum for the mixed T/P model")),
    }
}
