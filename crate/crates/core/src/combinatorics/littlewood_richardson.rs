use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::partition::Partition;
use super::weight::SignedWeight;

/// Littlewood–Richardson coefficient `c^λ_{μν}`: the number of LR tableaux of
/// skew shape `λ/μ` and content `ν`.
pub fn lr_coeff(lambda: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    if mu.size() + nu.size() != lambda.size() || !lambda.contains(mu) || !lambda.contains(nu) {
        return 0;
    }
    if nu.is_empty() {
        return 1;
    }
    let rows = lambda.length();
    let mut grid: Vec<Vec<usize>> = (0..rows).map(|i| vec![usize::MAX; lambda.part(i)]).collect();
    let mut counts = vec![0usize; nu.length()];
    let mut filler = Filler { lambda, mu, nu, grid: &mut grid, counts: &mut counts };
    filler.fill(0, lambda.part(0))
}

struct Filler<'a> {
    lambda: &'a Partition,
    mu: &'a Partition,
    nu: &'a Partition,
    grid: &'a mut Vec<Vec<usize>>,
    counts: &'a mut Vec<usize>,
}

impl Filler<'_> {
    /// Fill cell `(row, col - 1)`, walking each row right to left (reading order).
    fn fill(&mut self, row: usize, col: usize) -> u64 {
        if row == self.lambda.length() {
            return 1;
        }
        if col == self.mu.part(row) {
            let next = row + 1;
            return self.fill(next, self.lambda.part(next));
        }
        let j = col - 1;
        let hi = if col < self.lambda.part(row) { self.grid[row][col] } else { self.nu.length() - 1 };
        let lo = if row > 0 && j >= self.mu.part(row - 1) { self.grid[row - 1][j] + 1 } else { 0 };
        // an entry v sits in row >= v of an LR tableau
        let hi = hi.min(row);
        let mut total = 0;
        for v in lo..=hi {
            if self.counts[v] == self.nu.part(v) || (v > 0 && self.counts[v] == self.counts[v - 1]) {
                continue;
            }
            self.counts[v] += 1;
            self.grid[row][j] = v;
            total += self.fill(row, j);
            self.counts[v] -= 1;
        }
        if lo <= hi {
            self.grid[row][j] = usize::MAX;
        }
        total
    }
}

/// `s_μ · s_ν` expanded in Schur functions, keeping only terms with at most
/// `max_len` rows and, when given, fitting inside `bound`.
pub fn lr_product(
    mu: &Partition,
    nu: &Partition,
    max_len: usize,
    bound: Option<&Partition>,
) -> BTreeMap<Partition, u64> {
    let size = mu.size() + nu.size();
    let mut out = BTreeMap::new();
    for lam in supersets(mu, size, max_len, bound) {
        let c = lr_coeff(&lam, mu, nu);
        if c > 0 {
            out.insert(lam, c);
        }
    }
    out
}

/// Partitions of `size` containing `inner`, with at most `max_len` rows and
/// inside `bound`.
fn supersets(inner: &Partition, size: usize, max_len: usize, bound: Option<&Partition>) -> Vec<Partition> {
    fn go(
        i: usize,
        rem: usize,
        cap: usize,
        inner: &Partition,
        max_len: usize,
        bound: Option<&Partition>,
        cur: &mut Vec<usize>,
        out: &mut Vec<Partition>,
    ) {
        let floor: usize = (i..max_len.max(inner.length())).map(|k| inner.part(k)).sum();
        if rem < floor {
            return;
        }
        if rem == 0 {
            out.push(Partition::new(cur.clone()).expect("decreasing"));
            return;
        }
        if i >= max_len {
            return;
        }
        let mut hi = cap.min(rem);
        if let Some(b) = bound {
            hi = hi.min(b.part(i));
        }
        let lo = inner.part(i).max(1);
        for v in (lo..=hi).rev() {
            cur.push(v);
            go(i + 1, rem - v, v, inner, max_len, bound, cur, out);
            cur.pop();
        }
    }
    if inner.length() > max_len {
        return Vec::new();
    }
    let mut out = Vec::new();
    go(0, size, size, inner, max_len, bound, &mut Vec::new(), &mut out);
    out
}

/// Multiplicities of all `λ` (at most `max_len` rows) in `s_{μ(1)} ⋯ s_{μ(p)}`.
pub fn multi_lr_product(blocks: &[Partition], max_len: usize) -> BTreeMap<Partition, u64> {
    fold_product(blocks, max_len, None)
}

fn fold_product(blocks: &[Partition], max_len: usize, bound: Option<&Partition>) -> BTreeMap<Partition, u64> {
    let mut acc = BTreeMap::new();
    let fits = |p: &Partition| p.length() <= max_len && bound.map_or(true, |b| b.contains(p));
    match blocks.split_first() {
        None => {
            acc.insert(Partition::empty(), 1);
            return acc;
        }
        Some((first, _)) if fits(first) => {
            acc.insert(first.clone(), 1);
        }
        _ => return acc,
    }
    for block in &blocks[1..] {
        let mut next = BTreeMap::new();
        for (kappa, mult) in &acc {
            for (lam, c) in lr_product(kappa, block, max_len, bound) {
                *next.entry(lam).or_insert(0) += mult * c;
            }
        }
        acc = next;
    }
    acc
}

/// Multiplicity of `s_λ` in `s_{μ(1)} ⋯ s_{μ(p)}`.
pub fn multi_lr_coeff(lambda: &Partition, blocks: &[Partition]) -> u64 {
    if blocks.iter().map(Partition::size).sum::<usize>() != lambda.size() {
        return 0;
    }
    fold_product(blocks, lambda.length(), Some(lambda)).get(lambda).copied().unwrap_or(0)
}

/// Whether `c^λ_{μν} > 0` with all three of length at most `r`.
pub fn horn_positive(lambda: &Partition, mu: &Partition, nu: &Partition, r: usize) -> bool {
    [lambda, mu, nu].iter().all(|p| p.length() <= r) && lr_coeff(lambda, mu, nu) > 0
}

/// Multiplicity of the walled-Brauer irreducible `(λ, μ)` inside
/// `V_π ⊗ V_τ` restricted from `S_m × S_{n-m}`, as the LR coefficient
/// `c^{[λ,μ]+τ_1}_{π, [∅,τ]+τ_1}`.
pub fn wb_branch(lambda: &Partition, mu: &Partition, pi: &Partition, tau: &Partition, r: usize) -> u64 {
    if lambda.length() + mu.length() > r || pi.length() > r || tau.length() > r {
        return 0;
    }
    if pi.size() < lambda.size() || tau.size() < mu.size() {
        return 0;
    }
    if pi.size() - lambda.size() != tau.size() - mu.size() {
        return 0;
    }
    let shift = tau.part(0) as i64;
    let top = SignedWeight::from_pair(lambda, mu, r).expect("checked length").shifted(shift);
    let bottom = SignedWeight::from_pair(&Partition::empty(), tau, r).expect("checked length").shifted(shift);
    match (top.to_partition(), bottom.to_partition()) {
        (Some(top), Some(bottom)) => lr_coeff(&top, pi, &bottom),
        _ => 0,
    }
}
