//! Exhaustive ground-state oracle shared by the integration tests.

use std::collections::BTreeSet;

use mfq_core::groundstate::{g_value, GroundRegion};
use mfq_core::variational::{Couplings, ProfilePoint};
use nalgebra::{DMatrix, DVector};

/// Global maximum of the quadratic `G` over `Ω`, from the stationary points
/// of its restriction to every face `{x_i = 0, i ∉ S_x; y_i = 0, i ∉ S_y}`.
/// Faces whose system is singular are skipped, which only loses points of
/// flat families that also appear on smaller faces.
pub fn brute_force(cp: &Couplings) -> (f64, Vec<ProfilePoint>) {
    let r = cp.r;
    let mut found: Vec<(f64, ProfilePoint)> = Vec::new();
    for sx in 1u32..(1 << r) {
        for sy in 1u32..(1 << r) {
            let xs: Vec<usize> = (0..r).filter(|i| sx >> i & 1 == 1).collect();
            let ys: Vec<usize> = (0..r).filter(|i| sy >> i & 1 == 1).collect();
            let n = xs.len() + ys.len() + 2;
            let mut m = DMatrix::<f64>::zeros(n, n);
            let mut rhs = DVector::<f64>::zeros(n);
            let (lx, ly) = (n - 2, n - 1);
            for (p, &i) in xs.iter().enumerate() {
                m[(p, p)] = cp.a;
                if let Some(q) = ys.iter().position(|&j| j == i) {
                    m[(p, xs.len() + q)] = cp.c;
                }
                m[(p, lx)] = -1.0;
                m[(lx, p)] = 1.0;
            }
            for (q, &j) in ys.iter().enumerate() {
                let row = xs.len() + q;
                m[(row, row)] = cp.b;
                if let Some(p) = xs.iter().position(|&i| i == j) {
                    m[(row, p)] = cp.c;
                }
                m[(row, ly)] = -1.0;
                m[(ly, row)] = 1.0;
            }
            rhs[lx] = cp.rho;
            rhs[ly] = cp.rho_b();
            let lu = m.clone().full_piv_lu();
            let Some(sol) = lu.solve(&rhs) else { continue };
            if (&m * &sol - &rhs).amax() > 1e-9 {
                continue;
            }
            let mut x = vec![0.0; r];
            let mut y = vec![0.0; r];
            for (p, &i) in xs.iter().enumerate() {
                x[i] = sol[p];
            }
            for (q, &j) in ys.iter().enumerate() {
                y[j] = sol[xs.len() + q];
            }
            if x.iter().chain(&y).any(|v| *v < -1e-12) {
                continue;
            }
            let w = ProfilePoint { x, y };
            found.push((g_value(&w, cp.a, cp.b, cp.c), w));
        }
    }
    let best = found.iter().map(|f| f.0).fold(f64::NEG_INFINITY, f64::max);
    let pts = found.into_iter().filter(|f| f.0 >= best - 1e-10).map(|f| f.1.canonical(cp.c)).collect();
    (best, pts)
}

pub fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

pub fn inventory(r: usize, rho: f64, lo: f64, hi: f64, n: usize) -> (BTreeSet<GroundRegion>, BTreeSet<(GroundRegion, GroundRegion)>) {
    let cells = mfq_core::groundstate::diagram_grid((lo, hi), (lo, hi), n, -1.0, rho, r).unwrap();
    let mut seen = BTreeSet::new();
    let mut adjacent = BTreeSet::new();
    for j in 0..n {
        for i in 0..n {
            let g = cells[j * n + i].region;
            seen.insert(g);
            // the diagonal neighbours catch boundaries along a = b
            for (di, dj) in [(1i64, 0i64), (0, 1), (1, 1), (-1, 1)] {
                let (ni, nj) = (i as i64 + di, j as i64 + dj);
                if ni >= 0 && (ni as usize) < n && (nj as usize) < n {
                    let h = cells[nj as usize * n + ni as usize].region;
                    if g != h && !g.is_boundary() && !h.is_boundary() {
                        adjacent.insert((g.min(h), g.max(h)));
                    }
                }
            }
        }
    }
    (seen, adjacent)
}

pub fn allowed_neighbours(r: usize) -> BTreeSet<(GroundRegion, GroundRegion)> {
    use GroundRegion::*;
    let mut s = BTreeSet::new();
    let mut add = |g: GroundRegion, h: GroundRegion| {
        s.insert((g.min(h), g.max(h)));
    };
    // every B region and A meet at the origin
    for k in 1..r {
        add(A, B(k));
        for l in k + 1..r {
            add(B(k), B(l));
        }
    }
    for k in 1..r {
        add(B(k), C(k));
        add(B(k), C(k + 1));
        add(B(k), D);
        if k + 1 < r {
            add(B(k), B(k + 1));
        }
    }
    for k in 1..=r {
        add(C(k), D);
        if k < r {
            add(C(k), C(k + 1));
        }
    }
    s
}
