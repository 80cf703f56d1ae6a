use crate::error::{Error, Result};

use super::maximize::maximize_f;
use super::profile::{f_value, Couplings, ProfilePoint};
#[allow(unused_imports)]
use num_traits::Float;

/// The predicate `max F > F(ω₀) + PREDICATE_GAP` locates the transition.
pub const PREDICATE_GAP: f64 = 1e-12;
pub const BISECTION_TOL: f64 = 1e-5;
const BISECTION_LOWER: f64 = 1e-6;
const MAX_BISECTIONS: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BetaCritMethod {
    ClosedFormR2,
    ClosedFormTcond,
    Bisection,
}

impl BetaCritMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::ClosedFormR2 => "closed-form-r2",
            Self::ClosedFormTcond => "closed-form-tcond",
            Self::Bisection => "bisection",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BetaCrit {
    pub value: f64,
    pub method: BetaCritMethod,
}

/// Critical inverse temperature of the homogeneous model on `C^r`:
/// `2` for `r = 2`, else `2(r−1) log(r−1)/(r−2)`.
pub fn beta_crit_homogeneous(r: usize) -> f64 {
    if r == 2 {
        2.0
    } else {
        let rf = r as f64;
        2.0 * (rf - 1.0) * (rf - 1.0).ln() / (rf - 2.0)
    }
}

/// The largest `γ` with `γ Q(s, t) ≤ s²/ρ + t²/ρ′` for all `s, t`; in closed
/// form `4/(ρa + ρ′b + √((ρa − ρ′b)² + 4ρρ′c²))`.
pub fn gamma_value(a: f64, b: f64, c: f64, rho: f64) -> Result<f64> {
    let cp = Couplings::new(a, b, c, rho, 2)?;
    if cp.q_negative_semidefinite() {
        return Err(Error::NegativeSemidefinite);
    }
    let rb = 1.0 - rho;
    let disc = ((rho * a - rb * b).powi(2) + 4.0 * rho * rb * c * c).sqrt();
    Ok(4.0 / (rho * a + rb * b + disc))
}

/// Lower and upper bounds on `β_crit`.
pub fn beta_crit_bounds(cp: &Couplings) -> Result<(f64, f64)> {
    let gamma = gamma_value(cp.a, cp.b, cp.c, cp.rho)?;
    let bh = beta_crit_homogeneous(cp.r);
    let lower = 0.5 * bh * gamma;
    let mut upper = cp.r as f64 * gamma / 2.0;
    let q = cp.q(cp.rho, cp.rho_b());
    if cp.r >= 3 && q > 0.0 {
        upper = upper.min(bh / (2.0 * q));
    }
    Ok((lower, upper))
}

/// `β_crit`, or `None` when `Q` is negative semidefinite and `ω₀` maximizes
/// `F` at every temperature.
pub fn beta_crit(cp: &Couplings) -> Result<Option<BetaCrit>> {
    if cp.q_negative_semidefinite() {
        return Ok(None);
    }
    if cp.r == 2 {
        return Ok(Some(BetaCrit { value: gamma_value(cp.a, cp.b, cp.c, cp.rho)?, method: BetaCritMethod::ClosedFormR2 }));
    }
    let t = (cp.a - cp.c) * cp.rho;
    let t_b = (cp.b - cp.c) * cp.rho_b();
    let scale = 1.0 + cp.a.abs().max(cp.b.abs()).max(cp.c.abs());
    if cp.c >= 0.0 && (t - t_b).abs() <= 1e-12 * scale && cp.c + t > 0.0 {
        let r = cp.r as f64;
        let value = 2.0 * (r - 1.0) * (r - 1.0).ln() / ((r - 2.0) * (cp.c + t));
        return Ok(Some(BetaCrit { value, method: BetaCritMethod::ClosedFormTcond }));
    }
    beta_crit_bisection(cp).map(|v| v.map(|value| BetaCrit { value, method: BetaCritMethod::Bisection }))
}

/// Numeric `β_crit` by bisection on whether `ω₀` is still the maximizer.
pub fn beta_crit_bisection(cp: &Couplings) -> Result<Option<f64>> {
    if cp.q_negative_semidefinite() {
        return Ok(None);
    }
    let (_, upper) = beta_crit_bounds(cp)?;
    let (mut lo, mut hi) = (BISECTION_LOWER, 2.0 * upper);
    if ordered(cp, lo)? || !ordered(cp, hi)? {
        return Err(Error::BracketFailure { lower: lo, upper: hi });
    }
    for _ in 0..MAX_BISECTIONS {
        if hi - lo < BISECTION_TOL * 1e-2 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if ordered(cp, mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// True when some profile beats `ω₀` at `β`.
fn ordered(cp: &Couplings, beta: f64) -> Result<bool> {
    let p = cp.at(beta)?;
    let f0 = f_value(&ProfilePoint::uniform(cp.rho, cp.r), &p);
    Ok(maximize_f(&p)?.value > f0 + PREDICATE_GAP)
}
