use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::max_abs_diff;

use super::model::{hamiltonian, Model, ModelInstance, ModelKind};
use super::operator::DenseOperator;
use super::thermal::spectrum;

/// Largest dimension for which the explicit intertwiner is applied to the
/// whole Hamiltonian.
const MAX_CONJUGATION_DIM: usize = 729;

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    /// Largest difference between the sorted spectra.
    pub spectral_gap: f64,
    /// `max |A⁻¹ H_Q A - H_P|` for the explicit intertwiner `A`, when one is
    /// known for this `r` and the dimension is small enough.
    pub intertwiner_residual: Option<f64>,
    /// For `r = 3`: `max_k |M_k + M_kᵀ|` with `M_k = ψ⁻¹ S^(k) ψ`.
    pub antisymmetry_residual: Option<f64>,
}

/// Compare the walled-Brauer Hamiltonians built with `Q` and with `P`.
pub fn spectra_equal_under_equivalence(q: &ModelInstance, p: &ModelInstance) -> Result<EquivalenceReport> {
    let (Model::TwoBlock { kind: kq, m: mq, a: aq, b: bq, c: cq }, Model::TwoBlock { kind: kp, m: mp, a: ap, b: bp, c: cp }) =
        (&q.model, &p.model)
    else {
        return Err(Error::WrongKind("equivalence compares two walled-Brauer models"));
    };
    if *kq != ModelKind::WbQ || *kp != ModelKind::WbP {
        return Err(Error::WrongKind("first instance must be WB-Q and second WB-P"));
    }
    if (q.r, q.n, mq, aq, bq, cq) != (p.r, p.n, mp, ap, bp, cp) {
        return Err(Error::InvalidParameter("instances differ in (r, n, m, a, b, c)".into()));
    }
    let hq = hamiltonian(q)?;
    let hp = hamiltonian(p)?;
    let spectral_gap = max_abs_diff(&spectrum(&hq)?, &spectrum(&hp)?);
    let single = match q.r {
        3 => Some((spin_one_intertwiner(), spin_one_intertwiner())),
        r if r % 2 == 0 => Some(even_intertwiner(r)),
        _ => None,
    };
    let intertwiner_residual = match single {
        Some((alpha, gamma)) if hq.dim() <= MAX_CONJUGATION_DIM => {
            let mut factors = Vec::with_capacity(q.n);
            for k in 0..q.n {
                factors.push(if k < *mq { &alpha } else { &gamma });
            }
            Some(conjugation_residual(&hq, &hp, &factors, q.r == 3))
        }
        _ => None,
    };
    let antisymmetry_residual = (q.r == 3).then(|| {
        let psi = spin_one_intertwiner();
        let inv = psi.adjoint();
        spin_one_matrices()
            .iter()
            .map(|s| {
                let m = &inv * s * &psi;
                (&m + m.transpose()).iter().map(|z| z.norm()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    });
    Ok(EquivalenceReport { spectral_gap, intertwiner_residual, antisymmetry_residual })
}

/// For `r = 3` the intertwiner maps `P` to `Q` (`ψ⁻¹ P ψ = Q`); for even `r`
/// it maps `Q` to `P`. Both factors are unitary.
fn conjugation_residual(hq: &DenseOperator, hp: &DenseOperator, factors: &[&DMatrix<Complex64>], p_to_q: bool) -> f64 {
    let mut a = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
    for f in factors {
        a = a.kronecker(f);
    }
    let (from, to) = if p_to_q { (hp, hq) } else { (hq, hp) };
    let from = from.matrix().map(|x| Complex64::new(x, 0.0));
    let conj = a.adjoint() * from * &a;
    conj.iter()
        .zip(to.matrix().iter())
        .map(|(z, &t)| (z - Complex64::new(t, 0.0)).norm())
        .fold(0.0, f64::max)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The spin-1 intertwiner `ψ` in the basis ordered by increasing spin label.
pub fn spin_one_intertwiner() -> DMatrix<Complex64> {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    // printed in the order α = 1, 0, -1; reversed on both sides
    let psi = DMatrix::from_row_slice(3, 3, &[c(s, 0.0), c(0.0, 0.0), c(0.0, s), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(-s, 0.0), c(0.0, 0.0), c(0.0, s)]);
    reverse(&psi)
}

/// Spin-1 matrices `S^(1), S^(2), S^(3)` in the basis ordered by increasing
/// spin label.
pub fn spin_one_matrices() -> [DMatrix<Complex64>; 3] {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let z = c(0.0, 0.0);
    let s1 = DMatrix::from_row_slice(3, 3, &[z, c(s, 0.0), z, c(s, 0.0), z, c(s, 0.0), z, c(s, 0.0), z]);
    let s2 = DMatrix::from_row_slice(3, 3, &[z, c(0.0, -s), z, c(0.0, s), z, c(0.0, -s), z, c(0.0, s), z]);
    let s3 = DMatrix::from_row_slice(3, 3, &[c(1.0, 0.0), z, z, z, z, z, z, z, c(-1.0, 0.0)]);
    [reverse(&s1), reverse(&s2), reverse(&s3)]
}

fn reverse(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let k = m.nrows();
    DMatrix::from_fn(k, k, |i, j| m[(k - 1 - i, k - 1 - j)])
}

/// `(α, γ)` for even `r`: `α` block-antidiagonal with blocks `g1`, `γ`
/// block-diagonal with blocks `(-1)^{r/2} g2`.
fn even_intertwiner(r: usize) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let g1 = [[c(0.0, s), c(0.0, s)], [c(-s, 0.0), c(s, 0.0)]];
    let g2 = [[c(-s, 0.0), c(s, 0.0)], [c(0.0, -s), c(0.0, -s)]];
    let sign = if (r / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let mut alpha = DMatrix::zeros(r, r);
    let mut gamma = DMatrix::zeros(r, r);
    for blk in 0..r / 2 {
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            alpha[(2 * blk + i, r - 2 - 2 * blk + j)] = g1[i][j];
            gamma[(2 * blk + i, 2 * blk + j)] = g2[i][j] * sign;
        }
    }
    (alpha, gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{build_p, build_transposition};

    fn pair(r: usize, n: usize, m: usize, a: f64, b: f64, cc: f64) -> (ModelInstance, ModelInstance) {
        (
            ModelInstance::two_block(ModelKind::WbQ, r, n, m, a, b, cc).unwrap(),
            ModelInstance::two_block(ModelKind::WbP, r, n, m, a, b, cc).unwrap(),
        )
    }

    #[test]
    fn reference_instances() {
        for (r, n, m, a, b, cc) in [(2, 2, 1, 0.0, 0.0, 1.0), (3, 4, 2, 1.0, -1.0, 2.0), (4, 3, 1, 0.0, 0.0, 1.0)] {
            let (q, p) = pair(r, n, m, a, b, cc);
            let rep = spectra_equal_under_equivalence(&q, &p).unwrap();
            assert!(rep.spectral_gap <= 1e-10, "{rep:?}");
            assert!(rep.intertwiner_residual.unwrap() <= 1e-12, "{rep:?}");
            if r == 3 {
                assert!(rep.antisymmetry_residual.unwrap() <= 1e-12);
            } else {
                assert!(rep.antisymmetry_residual.is_none());
            }
        }
    }

    #[test]
    fn spin_one_dot_product_is_t_minus_p() {
        let [s1, s2, s3] = spin_one_matrices();
        let dot = s1.kronecker(&s1) + s2.kronecker(&s2) + s3.kronecker(&s3);
        let t = build_transposition(1, 2, 2, 3).unwrap();
        let p = build_p(1, 2, 2, 3).unwrap();
        let want = t.matrix() - p.matrix();
        for (z, w) in dot.iter().zip(want.iter()) {
            assert!((z - c(*w, 0.0)).norm() < 1e-14);
        }
        let sq = &dot * &dot;
        let want = p.matrix() + DMatrix::<f64>::identity(9, 9);
        for (z, w) in sq.iter().zip(want.iter()) {
            assert!((z - c(*w, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn rejects_mismatched_instances() {
        let (q, _) = pair(2, 3, 1, 1.0, 1.0, 1.0);
        let (_, p) = pair(2, 3, 1, 1.0, 1.0, 2.0);
        assert!(spectra_equal_under_equivalence(&q, &p).is_err());
        assert!(spectra_equal_under_equivalence(&p, &q).is_err());
    }
}
