use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Largest tensor dimension `r^n` the dense oracle accepts.
pub const MAX_DENSE_DIM: usize = 20_000;

/// A real symmetric operator on `(C^r)^{⊗n}` in the product basis.
///
/// Basis vectors are digit strings `d_1 … d_n` with `d_k ∈ {0, …, r-1}`,
/// indexed in mixed radix with slot 1 most significant. For the singlet
/// operator the digit `d` stands for the spin label `α = d - (r-1)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    r: usize,
    n: usize,
    matrix: DMatrix<f64>,
}

pub(crate) fn checked_dim(r: usize, n: usize) -> Result<usize> {
    let dim = (r as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if dim > MAX_DENSE_DIM as u128 {
        return Err(Error::SizeGuard { dim, limit: MAX_DENSE_DIM });
    }
    Ok(dim as usize)
}

impl DenseOperator {
    pub fn zeros(n: usize, r: usize) -> Result<Self> {
        let dim = checked_dim(r, n)?;
        Ok(Self { r, n, matrix: DMatrix::zeros(dim, dim) })
    }

    pub fn identity(n: usize, r: usize) -> Result<Self> {
        let dim = checked_dim(r, n)?;
        Ok(Self { r, n, matrix: DMatrix::identity(dim, dim) })
    }

    /// Wrap an existing matrix; it must be `r^n × r^n`.
    pub fn from_matrix(n: usize, r: usize, matrix: DMatrix<f64>) -> Result<Self> {
        let dim = checked_dim(r, n)?;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::ShapeMismatch);
        }
        Ok(Self { r, n, matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    /// Largest `|A_ij - A_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i + 1..d {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn scale(&mut self, k: f64) {
        self.matrix *= k;
    }

    pub fn add_assign(&mut self, other: &DenseOperator) -> Result<()> {
        if self.matrix.shape() != other.matrix.shape() {
            return Err(Error::ShapeMismatch);
        }
        self.matrix += &other.matrix;
        Ok(())
    }

    pub fn add_diagonal(&mut self, diag: &[f64]) -> Result<()> {
        if diag.len() != self.dim() {
            return Err(Error::ShapeMismatch);
        }
        for (i, &d) in diag.iter().enumerate() {
            self.matrix[(i, i)] += d;
        }
        Ok(())
    }

    /// Place value of slot `k` (0-based).
    fn place(&self, k: usize) -> usize {
        self.r.pow((self.n - 1 - k) as u32)
    }

    fn digit(&self, idx: usize, k: usize) -> usize {
        (idx / self.place(k)) % self.r
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<(usize, usize)> {
        if i == 0 || i >= j || j > self.n {
            return Err(Error::SlotOutOfRange { i, j, n: self.n });
        }
        Ok((i - 1, j - 1))
    }

    /// `self += coef · T_{i,j}` (slots 1-based).
    pub fn add_transposition(&mut self, i: usize, j: usize, coef: f64) -> Result<()> {
        let (i, j) = self.check_pair(i, j)?;
        let (pi, pj) = (self.place(i), self.place(j));
        for idx in 0..self.dim() {
            let (di, dj) = (self.digit(idx, i), self.digit(idx, j));
            let out = idx + dj * pi + di * pj - di * pi - dj * pj;
            self.matrix[(out, idx)] += coef;
        }
        Ok(())
    }

    /// `self += coef · Q_{i,j}` with `⟨a1 a2|Q|a3 a4⟩ = δ_{a1 a2} δ_{a3 a4}`.
    pub fn add_q(&mut self, i: usize, j: usize, coef: f64) -> Result<()> {
        let (i, j) = self.check_pair(i, j)?;
        let step = self.place(i) + self.place(j);
        for idx in 0..self.dim() {
            let di = self.digit(idx, i);
            if di != self.digit(idx, j) {
                continue;
            }
            let base = idx - di * step;
            for a in 0..self.r {
                self.matrix[(base + a * step, idx)] += coef;
            }
        }
        Ok(())
    }

    /// `self += coef · P_{i,j}` with
    /// `⟨α1 α2|P|α3 α4⟩ = (-1)^{α1-α3} δ_{α1,-α2} δ_{α3,-α4}`.
    pub fn add_p(&mut self, i: usize, j: usize, coef: f64) -> Result<()> {
        let (i, j) = self.check_pair(i, j)?;
        let (pi, pj) = (self.place(i), self.place(j));
        let top = self.r - 1;
        for idx in 0..self.dim() {
            let (di, dj) = (self.digit(idx, i), self.digit(idx, j));
            if di + dj != top {
                continue;
            }
            let base = idx - di * pi - dj * pj;
            for a in 0..self.r {
                let sign = if (a + di) % 2 == 0 { 1.0 } else { -1.0 };
                self.matrix[(base + a * pi + (top - a) * pj, idx)] += sign * coef;
            }
        }
        Ok(())
    }

    /// `self += coef · T_σ` for `σ` in one-line notation on `1..=n`.
    pub fn add_permutation(&mut self, sigma: &[usize], coef: f64) -> Result<()> {
        check_permutation(sigma, self.n)?;
        let places: Vec<usize> = sigma.iter().map(|&s| self.place(s - 1)).collect();
        for idx in 0..self.dim() {
            let out: usize = (0..self.n).map(|l| self.digit(idx, l) * places[l]).sum();
            self.matrix[(out, idx)] += coef;
        }
        Ok(())
    }

    /// Diagonal of `Σ_k f_k(d_k)` where `f_k` is `a_values` on the first `m`
    /// slots and `b_values` on the rest.
    pub fn site_field(n: usize, r: usize, m: usize, a_values: &[f64], b_values: &[f64]) -> Result<Vec<f64>> {
        let dim = checked_dim(r, n)?;
        for v in [a_values, b_values] {
            if v.len() != r {
                return Err(Error::RankMismatch { expected: r, got: v.len() });
            }
        }
        let mut diag = vec![0.0; dim];
        for (idx, d) in diag.iter_mut().enumerate() {
            let mut rest = idx;
            for k in (0..n).rev() {
                *d += if k < m { a_values[rest % r] } else { b_values[rest % r] };
                rest /= r;
            }
        }
        Ok(diag)
    }
}

fn check_permutation(sigma: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if sigma.len() != n {
        return Err(Error::NotAPermutation { n });
    }
    for &s in sigma {
        if s == 0 || s > n || seen[s - 1] {
            return Err(Error::NotAPermutation { n });
        }
        seen[s - 1] = true;
    }
    Ok(())
}

pub fn build_transposition(i: usize, j: usize, n: usize, r: usize) -> Result<DenseOperator> {
    let mut op = DenseOperator::zeros(n, r)?;
    op.add_transposition(i, j, 1.0)?;
    Ok(op)
}

pub fn build_q(i: usize, j: usize, n: usize, r: usize) -> Result<DenseOperator> {
    let mut op = DenseOperator::zeros(n, r)?;
    op.add_q(i, j, 1.0)?;
    Ok(op)
}

pub fn build_p(i: usize, j: usize, n: usize, r: usize) -> Result<DenseOperator> {
    let mut op = DenseOperator::zeros(n, r)?;
    op.add_p(i, j, 1.0)?;
    Ok(op)
}

/// `T_σ`, which maps `v_1 ⊗ … ⊗ v_n` to `v_{σ⁻¹(1)} ⊗ … ⊗ v_{σ⁻¹(n)}`.
pub fn build_perm_operator(sigma: &[usize], r: usize) -> Result<DenseOperator> {
    let mut op = DenseOperator::zeros(sigma.len(), r)?;
    op.add_permutation(sigma, 1.0)?;
    Ok(op)
}

/// Number of cycles of a permutation in one-line notation on `1..=n`.
pub fn cycle_count(sigma: &[usize]) -> usize {
    cycle_lengths(sigma).len()
}

/// Cycle lengths of `σ`, sorted decreasing.
pub fn cycle_lengths(sigma: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; sigma.len()];
    let mut out = Vec::new();
    for start in 0..sigma.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = sigma[k] - 1;
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Composition `(στ)(i) = σ(τ(i))`.
pub fn compose(sigma: &[usize], tau: &[usize]) -> Vec<usize> {
    tau.iter().map(|&t| sigma[t - 1]).collect()
}
