use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};

use super::characters::CycleType;
use super::partition::Partition;
use super::weight::SignedWeight;
use crate::error::{Error, Result};

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// Dimension of the irreducible polynomial GL_r module with highest weight `λ`.
pub fn dim_gl(lambda: &Partition, r: usize) -> Result<BigUint> {
    if lambda.length() > r {
        return Err(Error::LengthExceedsRank { length: lambda.length(), r });
    }
    Ok(weyl_dimension(&lambda.padded(r)))
}

/// Dimension of the rational GL_r module with highest weight `w`.
pub fn dim_gl_rational(w: &SignedWeight) -> BigUint {
    weyl_dimension(w.entries())
}

fn weyl_dimension(w: &[i64]) -> BigUint {
    let r = w.len();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..r {
        for j in i + 1..r {
            num *= w[i] - w[j] + (j - i) as i64;
            den *= (j - i) as i64;
        }
    }
    (num / den).magnitude().clone()
}

/// Dimension of the Specht module `V_μ` of `S_{|μ|}`.
pub fn dim_specht(mu: &Partition) -> BigUint {
    let r = mu.length();
    let m: Vec<i64> = (0..r).map(|i| (mu.part(i) + r - i) as i64 - 1).collect();
    let mut num = BigInt::from(factorial(mu.size()));
    for i in 0..r {
        for j in i + 1..r {
            num *= m[i] - m[j];
        }
    }
    let den: BigUint = m.iter().map(|&mi| factorial(mi as usize)).product();
    let q = num / BigInt::from(den);
    debug_assert!(!q.is_negative());
    q.magnitude().clone()
}

/// Number of permutations of `n` elements with cycle type `γ` plus fixed points.
pub fn conjugacy_class_size(gamma: &CycleType, n: usize) -> Result<BigUint> {
    let full = gamma.with_fixed_points(n)?;
    let mut z = BigUint::one();
    let parts = full.parts();
    let mut i = 0;
    while i < parts.len() {
        let k = parts[i];
        let mult = parts[i..].iter().take_while(|&&p| p == k).count();
        z *= BigUint::from(k).pow(mult as u32) * factorial(mult);
        i += mult;
    }
    Ok(factorial(n) / z)
}
