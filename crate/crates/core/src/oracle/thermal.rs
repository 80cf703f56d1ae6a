use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, log_sum_exp};

use super::model::{hamiltonian, ModelInstance};
use super::operator::DenseOperator;
#[allow(unused_imports)]
use num_traits::Float;

/// Eigendecomposition of a symmetric matrix, computed separately on each
/// connected component of its off-diagonal sparsity graph. The Hamiltonians
/// here conserve weight sectors, so this is exact and much cheaper than a
/// full dense solve.
pub struct BlockEigen {
    blocks: Vec<(Vec<usize>, SymmetricEigen<f64, nalgebra::Dyn>)>,
}

impl BlockEigen {
    pub fn new(m: &DMatrix<f64>) -> Result<Self> {
        let scale = m.amax().max(1.0);
        let d = m.nrows();
        let mut parent: Vec<usize> = (0..d).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for j in 0..d {
            for i in 0..j {
                let (a, b) = (m[(i, j)], m[(j, i)]);
                if (a - b).abs() > 1e-10 * scale {
                    return Err(Error::NotSymmetric);
                }
                if a != 0.0 || b != 0.0 {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri] = rj;
                    }
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); d];
        for i in 0..d {
            let root = find(&mut parent, i);
            groups[root].push(i);
        }
        let blocks = groups
            .into_iter()
            .filter(|g| !g.is_empty())
            .map(|idx| {
                let k = idx.len();
                let sub = DMatrix::from_fn(k, k, |a, b| 0.5 * (m[(idx[a], idx[b])] + m[(idx[b], idx[a])]));
                let eig = SymmetricEigen::new(sub);
                (idx, eig)
            })
            .collect();
        Ok(Self { blocks })
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self.blocks.iter().flat_map(|(_, e)| e.eigenvalues.iter().copied()).collect();
        all.sort_by(f64::total_cmp);
        all
    }

    /// `Σ_k f(ε_k) ⟨v_k|O|v_k⟩` over all eigenpairs.
    fn weighted_diagonal(&self, o: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> f64 {
        let mut terms = Vec::new();
        for (idx, eig) in &self.blocks {
            let k = idx.len();
            let sub = DMatrix::from_fn(k, k, |a, b| o[(idx[a], idx[b])]);
            for (col, &eps) in eig.eigenvalues.iter().enumerate() {
                let v: DVector<f64> = eig.eigenvectors.column(col).into_owned();
                terms.push(f(eps) * v.dot(&(&sub * &v)));
            }
        }
        compensated_sum(terms)
    }
}

/// Sorted eigenvalues of a symmetric operator.
pub fn spectrum(op: &DenseOperator) -> Result<Vec<f64>> {
    Ok(BlockEigen::new(op.matrix())?.eigenvalues())
}

/// `Z = tr e^{-βH}`.
pub fn partition_function(h: &DenseOperator, beta: f64) -> Result<f64> {
    let z = log_partition_function(h, beta)?.exp();
    if z.is_finite() {
        Ok(z)
    } else {
        Err(Error::Underflow)
    }
}

/// `log tr e^{-βH}`, stable for large `β`.
pub fn log_partition_function(h: &DenseOperator, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let exps: Vec<f64> = spectrum(h)?.iter().map(|e| -beta * e).collect();
    Ok(log_sum_exp(&exps))
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(alloc::format!("beta must be positive, got {beta}")))
    }
}

/// `tr[O e^{-βH}] / tr e^{-βH}`.
pub fn thermal_expectation(h: &DenseOperator, beta: f64, o: &DenseOperator) -> Result<f64> {
    check_beta(beta)?;
    if h.dim() != o.dim() {
        return Err(Error::ShapeMismatch);
    }
    let eig = BlockEigen::new(h.matrix())?;
    let ground = eig.eigenvalues().first().copied().unwrap_or(0.0);
    let weight = |e: f64| (-beta * (e - ground)).exp();
    let id = DMatrix::identity(h.dim(), h.dim());
    let z = eig.weighted_diagonal(&id, weight);
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::Underflow);
    }
    Ok(eig.weighted_diagonal(o.matrix(), weight) / z)
}

/// `tr exp(-βH + h Σ_k W_k)` with the site fields of
/// [`ModelInstance::field_values`].
pub fn magnetized_partition_function(inst: &ModelInstance, beta: f64, w: &[f64], h: f64) -> Result<f64> {
    check_beta(beta)?;
    let mut op = hamiltonian(inst)?;
    op.scale(-beta);
    if w.len() != inst.r {
        return Err(Error::RankMismatch { expected: inst.r, got: w.len() });
    }
    let (fa, fb) = inst.field_values(w);
    let field = DenseOperator::site_field(inst.n, inst.r, inst.m(), &fa, &fb)?;
    let field: Vec<f64> = field.iter().map(|f| h * f).collect();
    op.add_diagonal(&field)?;
    let z = log_sum_exp(&spectrum(&op)?).exp();
    if z.is_finite() {
        Ok(z)
    } else {
        Err(Error::Underflow)
    }
}
