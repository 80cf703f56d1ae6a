use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::combinatorics::CycleType;
use crate::error::{Error, Result};

use super::operator::DenseOperator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// Interchange `T` on every pair.
    Ab,
    /// Walled Brauer: `T` inside the blocks, `Q` across.
    WbQ,
    /// Walled Brauer with the singlet operator `P` across.
    WbP,
    /// `J1 T + (J2 - J1) P` across the blocks only.
    BilinearBiquadratic,
    /// Class sums of cycle types inside each block and globally.
    Mb,
}

/// One cycle type `γ` of a multi-block Hamiltonian with its block couplings
/// `a_k^γ` and global coupling `c^γ`.
#[derive(Clone, Debug, PartialEq)]
pub struct MbTerm {
    pub cycle: CycleType,
    pub block: Vec<f64>,
    pub global: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Model {
    TwoBlock { kind: ModelKind, m: usize, a: f64, b: f64, c: f64 },
    BilinearBiquadratic { m: usize, j1: f64, j2: f64 },
    MultiBlock { blocks: Vec<usize>, terms: Vec<MbTerm> },
}

/// A finite-size model: `n` sites carrying `C^r`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelInstance {
    pub r: usize,
    pub n: usize,
    pub model: Model,
}

impl ModelInstance {
    /// An AB, WB-Q or WB-P model with block A = sites `1..=m`.
    pub fn two_block(kind: ModelKind, r: usize, n: usize, m: usize, a: f64, b: f64, c: f64) -> Result<Self> {
        if !matches!(kind, ModelKind::Ab | ModelKind::WbQ | ModelKind::WbP) {
            return Err(Error::WrongKind("two_block takes AB, WB-Q or WB-P"));
        }
        check_size(r, n, m)?;
        if ![a, b, c].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidParameter("couplings must be finite".into()));
        }
        Ok(Self { r, n, model: Model::TwoBlock { kind, m, a, b, c } })
    }

    pub fn ab(r: usize, n: usize, m: usize, a: f64, b: f64, c: f64) -> Result<Self> {
        Self::two_block(ModelKind::Ab, r, n, m, a, b, c)
    }

    pub fn bilinear_biquadratic(r: usize, n: usize, m: usize, j1: f64, j2: f64) -> Result<Self> {
        check_size(r, n, m)?;
        Ok(Self { r, n, model: Model::BilinearBiquadratic { m, j1, j2 } })
    }

    /// A multi-block model on consecutive blocks of the given sizes.
    pub fn multi_block(r: usize, blocks: Vec<usize>, terms: Vec<MbTerm>) -> Result<Self> {
        let n: usize = blocks.iter().sum();
        check_size(r, n, 0)?;
        if blocks.iter().any(|&b| b == 0) {
            return Err(Error::InvalidParameter("block sizes must be positive".into()));
        }
        let smallest = blocks.iter().copied().min().unwrap_or(0);
        for t in &terms {
            if t.block.len() != blocks.len() {
                return Err(Error::InvalidParameter(format!(
                    "cycle type {:?} has {} block couplings for {} blocks",
                    t.cycle.parts(),
                    t.block.len(),
                    blocks.len()
                )));
            }
            if t.cycle.size() > smallest {
                return Err(Error::CycleTooLarge { size: t.cycle.size(), n: smallest });
            }
        }
        Ok(Self { r, n, model: Model::MultiBlock { blocks, terms } })
    }

    pub fn kind(&self) -> ModelKind {
        match &self.model {
            Model::TwoBlock { kind, .. } => *kind,
            Model::BilinearBiquadratic { .. } => ModelKind::BilinearBiquadratic,
            Model::MultiBlock { .. } => ModelKind::Mb,
        }
    }

    /// Size of block A (the first block for multi-block models).
    pub fn m(&self) -> usize {
        match &self.model {
            Model::TwoBlock { m, .. } | Model::BilinearBiquadratic { m, .. } => *m,
            Model::MultiBlock { blocks, .. } => blocks[0],
        }
    }

    /// Per-site field values `(block A, block B)` realizing `W = diag(w)`.
    ///
    /// AB and multi-block models carry `W` everywhere. WB-Q carries `-Wᵀ` on
    /// block B. For WB-P the B-block field is the image of `-Wᵀ` under the
    /// intertwiner relating `Q` and `P`, namely `-diag(w_r, …, w_1)`; when the
    /// spectrum is symmetric about zero (spin matrices) this is `W` again.
    pub fn field_values(&self, w: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let a = w.to_vec();
        let b = match self.kind() {
            ModelKind::Ab | ModelKind::Mb => a.clone(),
            ModelKind::WbQ => w.iter().map(|x| -x).collect(),
            ModelKind::WbP | ModelKind::BilinearBiquadratic => w.iter().rev().map(|x| -x).collect(),
        };
        (a, b)
    }
}

fn check_size(r: usize, n: usize, m: usize) -> Result<()> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!("r must be at least 2, got {r}")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if m > n {
        return Err(Error::InvalidParameter(format!("block size m = {m} exceeds n = {n}")));
    }
    Ok(())
}

/// Largest number of sites for which class sums are enumerated explicitly.
pub const MAX_CLASS_ENUMERATION: usize = 8;

/// The Hamiltonian as a dense operator.
pub fn hamiltonian(inst: &ModelInstance) -> Result<DenseOperator> {
    let (n, r) = (inst.n, inst.r);
    let mut h = DenseOperator::zeros(n, r)?;
    let scale = -1.0 / n as f64;
    match &inst.model {
        Model::TwoBlock { kind, m, a, b, c } => {
            for i in 1..=n {
                for j in i + 1..=n {
                    match (j <= *m, i > *m) {
                        (true, _) => h.add_transposition(i, j, scale * a)?,
                        (_, true) => h.add_transposition(i, j, scale * b)?,
                        _ => match kind {
                            ModelKind::WbQ => h.add_q(i, j, scale * c)?,
                            ModelKind::WbP => h.add_p(i, j, scale * c)?,
                            _ => h.add_transposition(i, j, scale * c)?,
                        },
                    }
                }
            }
        }
        Model::BilinearBiquadratic { m, j1, j2 } => {
            for i in 1..=*m {
                for j in *m + 1..=n {
                    h.add_transposition(i, j, scale * j1)?;
                    h.add_p(i, j, scale * (j2 - j1))?;
                }
            }
        }
        Model::MultiBlock { blocks, terms } => {
            if n > MAX_CLASS_ENUMERATION {
                return Err(Error::InvalidParameter(format!(
                    "multi-block dense oracle enumerates class members and needs n <= {MAX_CLASS_ENUMERATION}"
                )));
            }
            let all: Vec<usize> = (0..n).collect();
            for term in terms {
                let mut start = 0;
                for (k, &size) in blocks.iter().enumerate() {
                    let slots: Vec<usize> = (start..start + size).collect();
                    start += size;
                    add_class_average(&mut h, &slots, &term.cycle, -(n as f64) * term.block[k])?;
                }
                add_class_average(&mut h, &all, &term.cycle, -(n as f64) * term.global)?;
            }
        }
    }
    Ok(h)
}

fn add_class_average(h: &mut DenseOperator, slots: &[usize], gamma: &CycleType, coef: f64) -> Result<()> {
    if coef == 0.0 {
        return Ok(());
    }
    let members = class_members(h.n(), slots, gamma)?;
    let each = coef / members.len() as f64;
    for sigma in &members {
        h.add_permutation(sigma, each)?;
    }
    Ok(())
}

/// All permutations of `1..=n` that fix every site outside `slots` (0-based)
/// and have cycle type `γ` on `slots`.
pub fn class_members(n: usize, slots: &[usize], gamma: &CycleType) -> Result<Vec<Vec<usize>>> {
    let full = gamma.with_fixed_points(slots.len())?;
    let mut lengths: Vec<(usize, usize)> = Vec::new();
    for &p in full.parts() {
        match lengths.last_mut() {
            Some((len, count)) if *len == p => *count += 1,
            _ => lengths.push((p, 1)),
        }
    }
    let mut sigma: Vec<usize> = (1..=n).collect();
    let mut out = Vec::new();
    let mut free = vec![false; n];
    for &s in slots {
        free[s] = true;
    }
    place_cycles(&mut sigma, &mut free, &mut lengths, &mut out);
    Ok(out)
}

/// Cycles are built from the smallest free site, so each permutation is
/// produced exactly once.
fn place_cycles(sigma: &mut Vec<usize>, free: &mut Vec<bool>, lengths: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<usize>>) {
    let Some(start) = free.iter().position(|&f| f) else {
        out.push(sigma.clone());
        return;
    };
    free[start] = false;
    for li in 0..lengths.len() {
        let (len, count) = lengths[li];
        if count == 0 {
            continue;
        }
        lengths[li].1 -= 1;
        let mut cycle = vec![start];
        extend_cycle(len, &mut cycle, sigma, free, lengths, out);
        lengths[li].1 += 1;
    }
    free[start] = true;
}

fn extend_cycle(
    len: usize,
    cycle: &mut Vec<usize>,
    sigma: &mut Vec<usize>,
    free: &mut Vec<bool>,
    lengths: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<usize>>,
) {
    if cycle.len() == len {
        for w in 0..len {
            sigma[cycle[w]] = cycle[(w + 1) % len] + 1;
        }
        place_cycles(sigma, free, lengths, out);
        for &c in cycle.iter() {
            sigma[c] = c + 1;
        }
        return;
    }
    for next in 0..free.len() {
        if free[next] {
            free[next] = false;
            cycle.push(next);
            extend_cycle(len, cycle, sigma, free, lengths, out);
            cycle.pop();
            free[next] = true;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::conjugacy_class_size;
    use crate::oracle::{cycle_lengths, partition_function, spectrum};
    use num_traits::ToPrimitive;

    #[test]
    fn class_member_counts() {
        for n in 2..8 {
            for parts in [vec![2], vec![3], vec![2, 2], vec![4], vec![3, 2]] {
                let gamma = CycleType::new(parts.clone()).unwrap();
                if gamma.size() > n {
                    continue;
                }
                let members = class_members(n, &(0..n).collect::<Vec<_>>(), &gamma).unwrap();
                let want = conjugacy_class_size(&gamma, n).unwrap().to_usize().unwrap();
                assert_eq!(members.len(), want);
                let full = gamma.with_fixed_points(n).unwrap();
                for m in &members {
                    assert_eq!(cycle_lengths(m), full.parts());
                }
            }
        }
    }

    #[test]
    fn class_members_respect_slots() {
        let gamma = CycleType::new(vec![2]).unwrap();
        let members = class_members(5, &[1, 3, 4], &gamma).unwrap();
        assert_eq!(members.len(), 3);
        for m in members {
            assert_eq!((m[0], m[2]), (1, 3));
        }
    }

    #[test]
    fn ab_pair_in_one_block() {
        let h = hamiltonian(&ModelInstance::ab(2, 2, 2, 1.0, 0.0, 0.0).unwrap()).unwrap();
        let spec = spectrum(&h).unwrap();
        let want = [-0.5, -0.5, -0.5, 0.5];
        assert!(spec.iter().zip(want).all(|(x, y)| (x - y).abs() < 1e-12));
        let z = partition_function(&h, 1.0).unwrap();
        assert!((z - (3.0 * 0.5f64.exp() + (-0.5f64).exp())).abs() < 1e-12);
        assert!((z - 5.5525).abs() < 1e-3);
    }

    #[test]
    fn ab_pair_across_blocks() {
        let h = hamiltonian(&ModelInstance::ab(2, 2, 1, 0.0, 0.0, 1.0).unwrap()).unwrap();
        for beta in [0.3, 1.0, 2.5] {
            let want = 3.0 * (beta / 2.0f64).exp() + (-beta / 2.0f64).exp();
            assert!((partition_function(&h, beta).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn single_block_mb_is_mean_field_interchange() {
        let term = MbTerm { cycle: CycleType::new(vec![2]).unwrap(), block: vec![0.0], global: 0.5 };
        let h = hamiltonian(&ModelInstance::multi_block(2, vec![3], vec![term]).unwrap()).unwrap();
        let mut direct = DenseOperator::zeros(3, 2).unwrap();
        for (i, j) in [(1, 2), (1, 3), (2, 3)] {
            direct.add_transposition(i, j, -0.5).unwrap();
        }
        assert!((h.matrix() - direct.matrix()).amax() < 1e-14);
    }

    #[test]
    fn validation() {
        assert!(ModelInstance::ab(1, 2, 1, 1.0, 1.0, 1.0).is_err());
        assert!(ModelInstance::ab(2, 2, 3, 1.0, 1.0, 1.0).is_err());
        assert!(ModelInstance::two_block(ModelKind::Mb, 2, 2, 1, 1.0, 1.0, 1.0).is_err());
        let term = MbTerm { cycle: CycleType::new(vec![3]).unwrap(), block: vec![1.0, 1.0], global: 0.0 };
        assert!(ModelInstance::multi_block(2, vec![2, 3], vec![term]).is_err());
    }
}
