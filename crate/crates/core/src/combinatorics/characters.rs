use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};

use super::partition::Partition;
use super::weight::SignedWeight;
use crate::error::{Error, Result};

/// Cycle type of a permutation with its fixed points removed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleType(Partition);

impl CycleType {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        let p = Partition::new(parts).map_err(|_| Error::NotACycleType)?;
        if p.is_empty() || p.parts().iter().any(|&k| k < 2) {
            return Err(Error::NotACycleType);
        }
        Ok(Self(p))
    }

    pub fn parts(&self) -> &[usize] {
        self.0.parts()
    }

    /// Number of moved points.
    pub fn size(&self) -> usize {
        self.0.size()
    }

    /// The full cycle type in `S_n`, fixed points included.
    pub fn with_fixed_points(&self, n: usize) -> Result<Partition> {
        let size = self.size();
        if size > n {
            return Err(Error::CycleTooLarge { size, n });
        }
        let mut parts = self.parts().to_vec();
        parts.resize(parts.len() + n - size, 1);
        Partition::new(parts)
    }
}

/// Character of the Specht module `V_μ` at a permutation with the given full
/// cycle type (`|class| = |μ|`), by the Murnaghan–Nakayama rule on beta-sets.
pub fn mn_character_full(mu: &Partition, class: &Partition) -> i64 {
    if mu.size() != class.size() {
        return 0;
    }
    let len = mu.length();
    let top = mu.part(0) + len;
    let mut beads = vec![false; top.max(1)];
    for i in 0..len {
        beads[mu.part(i) + len - 1 - i] = true;
    }
    strip(&mut beads, class.parts())
}

fn strip(beads: &mut [bool], hooks: &[usize]) -> i64 {
    let Some((&k, rest)) = hooks.split_first() else {
        return 1;
    };
    let mut total = 0;
    for b in k..beads.len() {
        if beads[b] && !beads[b - k] {
            let between = beads[b - k + 1..b].iter().filter(|&&x| x).count();
            beads[b] = false;
            beads[b - k] = true;
            let sub = strip(beads, rest);
            beads[b - k] = false;
            beads[b] = true;
            total += if between % 2 == 0 { sub } else { -sub };
        }
    }
    total
}

/// `χ_μ` at a permutation of `|μ|` points with the given nontrivial cycles.
pub fn mn_character(mu: &Partition, gamma: &CycleType) -> Result<i64> {
    Ok(mn_character_full(mu, &gamma.with_fixed_points(mu.size())?))
}

/// Relative node separation below which the bialternant quotient is abandoned
/// in favour of the division-free Jacobi–Trudi determinant.
const CONFLUENCE_TOL: f64 = 1e-3;

/// Character of the rational GL_r module of highest weight `w` at a matrix
/// with eigenvalues `x`.
pub fn gl_character(w: &SignedWeight, x: &[Complex64]) -> Result<Complex64> {
    let r = w.rank();
    if x.len() != r {
        return Err(Error::RankMismatch { expected: r, got: x.len() });
    }
    if r == 0 {
        return Ok(Complex64::one());
    }
    let scale = x.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let min_gap = (0..r)
        .flat_map(|i| (i + 1..r).map(move |j| (i, j)))
        .map(|(i, j)| (x[i] - x[j]).norm())
        .fold(f64::INFINITY, f64::min);
    let value = if min_gap > CONFLUENCE_TOL * scale {
        bialternant(w.entries(), x)
    } else {
        jacobi_trudi(w, x)
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::IllConditioned)
    }
}

fn bialternant(w: &[i64], x: &[Complex64]) -> Complex64 {
    let r = w.len();
    let num = DMatrix::from_fn(r, r, |i, j| x[i].powi((w[j] + (r - 1 - j) as i64) as i32)).determinant();
    let mut den = Complex64::one();
    for i in 0..r {
        for j in i + 1..r {
            den *= x[i] - x[j];
        }
    }
    num / den
}

fn jacobi_trudi(w: &SignedWeight, x: &[Complex64]) -> Complex64 {
    let shift = (-w.entries().last().copied().unwrap_or(0)).max(0);
    let lam = w.shifted(shift).to_partition().expect("shifted weight is nonnegative");
    let len = lam.length();
    let top = lam.part(0) + len;
    let h = complete_homogeneous(x, top);
    let entry = |k: i64| if k < 0 { Complex64::zero() } else { h[k as usize] };
    let s = if len == 0 {
        Complex64::one()
    } else {
        DMatrix::from_fn(len, len, |i, j| entry(lam.part(i) as i64 - i as i64 + j as i64)).determinant()
    };
    let det: Complex64 = x.iter().product();
    s / det.powi(shift as i32)
}

/// `h_0, …, h_{top}` of the variables `x`.
pub(crate) fn complete_homogeneous(x: &[Complex64], top: usize) -> Vec<Complex64> {
    let mut h = vec![Complex64::zero(); top + 1];
    h[0] = Complex64::one();
    for &xi in x {
        for k in 1..=top {
            let prev = h[k - 1];
            h[k] += xi * prev;
        }
    }
    h
}
