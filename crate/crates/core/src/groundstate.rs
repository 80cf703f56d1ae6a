//! Zero-temperature phase diagrams: maximizers of
//! `G(x; y) = Σ_i ½(a x_i² + b y_i² + 2c x_i y_i)` over the profile set.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::variational::{Couplings, ProfilePoint};
#[allow(unused_imports)]
use num_traits::Float;

/// Tolerance on the defining (in)equalities, after scaling to `|c| = 1`.
pub const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroundRegion {
    /// Disordered: `a, b < 0`, `ab > c²`.
    D,
    BoundaryD,
    E1,
    E2,
    /// Ferromagnetic (`c > 0`).
    F,
    /// Antiferromagnetic: `a, b > 0` (`c < 0`).
    A,
    /// `a, b ≥ 0` with at least one zero.
    BoundaryA,
    B(usize),
    C(usize),
    /// The corner `P_k` shared by `B_k`, `B_{k+1}` and `C_{k+1}`.
    PCorner(usize),
    /// The segment between `B_k` and `B_{k+1}`.
    BBBoundary(usize),
    /// A segment between `B_k` and a neighbouring `C` region.
    BCBoundary(usize),
}

impl GroundRegion {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::D => "D",
            Self::BoundaryD => "boundary-D",
            Self::E1 => "E1",
            Self::E2 => "E2",
            Self::F => "F",
            Self::A => "A",
            Self::BoundaryA => "boundary-A",
            Self::B(_) => "B",
            Self::C(_) => "C",
            Self::PCorner(_) => "P-corner",
            Self::BBBoundary(_) => "BB-boundary",
            Self::BCBoundary(_) => "BC-boundary",
        }
    }

    pub fn k(&self) -> Option<usize> {
        match *self {
            Self::B(k) | Self::C(k) | Self::PCorner(k) | Self::BBBoundary(k) | Self::BCBoundary(k) => Some(k),
            _ => None,
        }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(
            self,
            Self::BoundaryD | Self::BoundaryA | Self::PCorner(_) | Self::BBBoundary(_) | Self::BCBoundary(_)
        )
    }
}

impl core::fmt::Display for GroundRegion {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self.k() {
            Some(k) => write!(f, "{}{}", self.tag(), k),
            None => f.write_str(self.tag()),
        }
    }
}

/// Infinite maximizer families, described by their defining equations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    /// `√−a (x_i − ρ/r) = s √−b (y_i − ρ′/r)` for every `i`, with `s = ±1`.
    Semidefinite { sqrt_neg_a: f64, sqrt_neg_b: f64, sign: f64 },
    /// `b = 0 < a`: `x = (ρ, 0, …)`, `y_1 = 0`, the rest of `y` free.
    BZero,
    /// `a = 0 < b`: `y = (…, 0, ρ′)`, `x_r = 0`, the rest of `x` free.
    AZero,
    /// `a = b = 0`: `x_i y_i = 0` for every `i`.
    Origin,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MaximizerSet {
    Points(Vec<ProfilePoint>),
    /// All `t ω_{B_k} + (1 − t) ω_{B_{k+1}}`, `0 ≤ t ≤ 1`.
    Segment { from: ProfilePoint, to: ProfilePoint },
    Family { family: Family, representative: ProfilePoint },
}

impl MaximizerSet {
    /// One maximizer from the set.
    pub fn representative(&self) -> &ProfilePoint {
        match self {
            Self::Points(p) => &p[0],
            Self::Segment { from, .. } => from,
            Self::Family { representative, .. } => representative,
        }
    }

    /// Whether `w` (in canonical order) belongs to the set, within `tol`.
    pub fn contains(&self, w: &ProfilePoint, rho: f64, tol: f64) -> bool {
        let r = w.r() as f64;
        match self {
            Self::Points(p) => p.iter().any(|q| q.distance(w) <= tol),
            Self::Segment { from, to } => {
                let d: Vec<f64> = from.to_vec().iter().zip(to.to_vec()).map(|(f, t)| f - t).collect();
                let v: Vec<f64> = w.to_vec().iter().zip(to.to_vec()).map(|(x, t)| x - t).collect();
                let dd: f64 = d.iter().map(|x| x * x).sum();
                let t = (v.iter().zip(&d).map(|(a, b)| a * b).sum::<f64>() / dd).clamp(0.0, 1.0);
                v.iter().zip(&d).all(|(x, y)| (x - t * y).abs() <= tol)
            }
            Self::Family { family, .. } => match *family {
                Family::Semidefinite { sqrt_neg_a, sqrt_neg_b, sign } => w
                    .x
                    .iter()
                    .zip(&w.y)
                    .all(|(x, y)| (sqrt_neg_a * (x - rho / r) - sign * sqrt_neg_b * (y - (1.0 - rho) / r)).abs() <= tol),
                Family::BZero => {
                    (w.x[0] - rho).abs() <= tol && w.x[1..].iter().all(|x| x.abs() <= tol) && w.y[0].abs() <= tol
                }
                Family::AZero => {
                    let n = w.r();
                    (w.y[n - 1] - (1.0 - rho)).abs() <= tol
                        && w.y[..n - 1].iter().all(|y| y.abs() <= tol)
                        && w.x[n - 1].abs() <= tol
                }
                Family::Origin => w.x.iter().zip(&w.y).all(|(x, y)| (x * y).abs() <= tol),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub region: GroundRegion,
    pub maximizers: MaximizerSet,
    pub max_g: f64,
}

/// `G(ω) = Σ_i ½(a x_i² + b y_i² + 2c x_i y_i)`.
pub fn g_value(w: &ProfilePoint, a: f64, b: f64, c: f64) -> f64 {
    w.x.iter().zip(&w.y).map(|(x, y)| 0.5 * (a * x * x + b * y * y + 2.0 * c * x * y)).sum()
}

fn point(x: Vec<f64>, y: Vec<f64>) -> ProfilePoint {
    ProfilePoint { x, y }
}

fn spike(total: f64, r: usize, at: usize) -> Vec<f64> {
    let mut v = vec![0.0; r];
    v[at] = total;
    v
}

pub fn omega_f(rho: f64, r: usize) -> ProfilePoint {
    point(spike(rho, r, 0), spike(1.0 - rho, r, 0))
}

pub fn omega_a(rho: f64, r: usize) -> ProfilePoint {
    point(spike(rho, r, 0), spike(1.0 - rho, r, r - 1))
}

pub fn omega_e1(cp: &Couplings) -> ProfilePoint {
    let (r, rb) = (cp.r as f64, cp.rho_b());
    let mut y = vec![(cp.b * rb + cp.c * cp.rho) / (cp.b * r); cp.r];
    y[0] = (cp.b * rb - (r - 1.0) * cp.c * cp.rho) / (cp.b * r);
    point(spike(cp.rho, cp.r, 0), y)
}

pub fn omega_e2(cp: &Couplings) -> ProfilePoint {
    let (r, rb) = (cp.r as f64, cp.rho_b());
    let mut x = vec![(cp.a * cp.rho + cp.c * rb) / (cp.a * r); cp.r];
    x[0] = (cp.a * cp.rho - (r - 1.0) * cp.c * rb) / (cp.a * r);
    point(x, spike(rb, cp.r, 0))
}

/// `ω_{B_k}`: `k` equal entries of `x`, then `r − k` equal entries of `y`.
pub fn omega_b(rho: f64, r: usize, k: usize) -> ProfilePoint {
    let rb = 1.0 - rho;
    let x = (0..r).map(|i| if i < k { rho / k as f64 } else { 0.0 }).collect();
    let y = (0..r).map(|i| if i < k { 0.0 } else { rb / (r - k) as f64 }).collect();
    point(x, y)
}

/// `ω_{C_k}`, or `None` where its defining linear system is singular.
pub fn omega_c(cp: &Couplings, k: usize) -> Option<ProfilePoint> {
    let (a, b, c, rho, rb) = (cp.a, cp.b, cp.c, cp.rho, cp.rho_b());
    let r = cp.r;
    let (rf, kf) = (r as f64, k as f64);
    let (x1, x2, y1, y2) = if k == 1 {
        if b == 0.0 {
            return None;
        }
        let y2 = (c * rho + b * rb) / (rf * b);
        (0.0, rho, rb - (rf - 1.0) * y2, y2)
    } else if k == r {
        if a == 0.0 {
            return None;
        }
        let x1 = (a * rho + c * rb) / (rf * a);
        (x1, rho - (rf - 1.0) * x1, rb, 0.0)
    } else {
        let det = kf * (rf + 1.0 - kf) * a * b - (kf - 1.0) * (rf - kf) * c * c;
        if det == 0.0 {
            return None;
        }
        (
            ((rf + 1.0 - kf) * rho * a * b + rb * b * c - (rf - kf) * rho * c * c) / det,
            ((rf + 1.0 - kf) * rho * a * b - (kf - 1.0) * rb * b * c) / det,
            (kf * rb * a * b - (rf - kf) * rho * a * c) / det,
            (kf * rb * a * b + rho * a * c - (kf - 1.0) * rb * c * c) / det,
        )
    };
    let x = (0..r).map(|i| if i + 1 < k { x1 } else if i + 1 == k { x2 } else { 0.0 }).collect();
    let y = (0..r).map(|i| if i + 1 < k { 0.0 } else if i + 1 == k { y1 } else { y2 }).collect();
    Some(point(x, y))
}

/// `P_k = (kρ′c/((r−k)ρ), (r−k−1)ρc/((k+1)ρ′))`, `1 ≤ k ≤ r − 2`.
pub fn p_corner(c: f64, rho: f64, r: usize, k: usize) -> (f64, f64) {
    let (rf, kf, rb) = (r as f64, k as f64, 1.0 - rho);
    (kf * rb * c / ((rf - kf) * rho), (rf - kf - 1.0) * rho * c / ((kf + 1.0) * rb))
}

/// `Q_k = (kρ′c/((r−k)ρ), (r−k)ρc/(kρ′))`, `1 ≤ k ≤ r − 1`; on `∂D`.
pub fn q_corner(c: f64, rho: f64, r: usize, k: usize) -> (f64, f64) {
    let (rf, kf, rb) = (r as f64, k as f64, 1.0 - rho);
    (kf * rb * c / ((rf - kf) * rho), (rf - kf) * rho * c / (kf * rb))
}

fn validate(cp: &Couplings) -> Result<()> {
    if cp.c == 0.0 {
        return Err(Error::InvalidParameter(
            "c = 0 decouples the blocks into two homogeneous models; not classified".into(),
        ));
    }
    Ok(())
}

fn classified(region: GroundRegion, maximizers: MaximizerSet, cp: &Couplings) -> Classification {
    let max_g = g_value(maximizers.representative(), cp.a, cp.b, cp.c);
    Classification { region, maximizers, max_g }
}

/// Phase and maximizers for `c > 0`.
pub fn classify_c_positive(cp: &Couplings) -> Result<Classification> {
    validate(cp)?;
    if cp.c < 0.0 {
        return Err(Error::InvalidParameter(format!("expected c > 0, got {}", cp.c)));
    }
    let (a, b) = (cp.a / cp.c, cp.b / cp.c);
    let (rho, rb, r) = (cp.rho, cp.rho_b(), cp.r);
    if a < 0.0 && b < 0.0 && (a * b - 1.0).abs() <= BOUNDARY_TOL {
        let family = Family::Semidefinite { sqrt_neg_a: (-cp.a).sqrt(), sqrt_neg_b: (-cp.b).sqrt(), sign: 1.0 };
        let rep = ProfilePoint::uniform(rho, r);
        return Ok(classified(GroundRegion::BoundaryD, MaximizerSet::Family { family, representative: rep }, cp));
    }
    if a < 0.0 && b < 0.0 && a * b > 1.0 {
        return Ok(classified(GroundRegion::D, MaximizerSet::Points(vec![ProfilePoint::uniform(rho, r)]), cp));
    }
    let (region, w) = if b <= -rho / rb {
        (GroundRegion::E1, omega_e1(cp))
    } else if a <= -rb / rho {
        (GroundRegion::E2, omega_e2(cp))
    } else {
        (GroundRegion::F, omega_f(rho, r))
    };
    Ok(classified(region, MaximizerSet::Points(vec![w]), cp))
}

/// Defining inequalities `f_i > 0` of the intermediate regions for `c < 0`,
/// in couplings scaled to `c = −1`.
fn intermediate_regions(a: f64, b: f64, rho: f64, r: usize) -> Vec<(GroundRegion, Vec<f64>)> {
    let (c, rb, rf) = (-1.0, 1.0 - rho, r as f64);
    let (p2, q2) = (rho * rho, rb * rb);
    let mut out = Vec::new();
    for k in 1..r {
        let kf = k as f64;
        let f = if k == 1 {
            vec![
                a - rb * c / ((rf - 1.0) * rho),
                b - (rf - 1.0) * rho * c / rb,
                -b,
                p2 * (rf - 1.0) * (rf - 2.0) * a - 2.0 * q2 * b,
            ]
        } else if k == r - 1 {
            vec![
                a - (rf - 1.0) * rb * c / rho,
                -a,
                b - rho * c / ((rf - 1.0) * rb),
                q2 * (rf - 1.0) * (rf - 2.0) * b - 2.0 * p2 * a,
            ]
        } else {
            vec![
                a - kf * rb * c / ((rf - kf) * rho),
                b - (rf - kf) * rho * c / (kf * rb),
                (rf - kf) * (rf - kf - 1.0) * p2 * a - kf * (kf + 1.0) * q2 * b,
                (kf - 1.0) * kf * q2 * b - (rf - kf + 1.0) * (rf - kf) * p2 * a,
            ]
        };
        out.push((GroundRegion::B(k), f));
    }
    for k in 1..=r {
        let kf = k as f64;
        let f = if k == 1 {
            vec![(rf - 1.0) * rho * c / rb - b, c * c - a * b]
        } else if k == r {
            vec![(rf - 1.0) * rb * c / rho - a, c * c - a * b]
        } else {
            vec![
                (kf - 1.0) * rb * c / ((rf - kf + 1.0) * rho) - a,
                (rf - kf) * rho * c / (kf * rb) - b,
                c * c - a * b,
            ]
        };
        out.push((GroundRegion::C(k), f));
    }
    out
}

/// Phase and maximizers for `c < 0`. For `r = 2` the diagram is the `c > 0`
/// one with `|c|`, and the `y` entries of every maximizer reversed.
pub fn classify_c_negative(cp: &Couplings) -> Result<Classification> {
    validate(cp)?;
    if cp.c > 0.0 {
        return Err(Error::InvalidParameter(format!("expected c < 0, got {}", cp.c)));
    }
    let (rho, r) = (cp.rho, cp.r);
    if r == 2 {
        let mirrored = Couplings { c: -cp.c, ..*cp };
        let cl = classify_c_positive(&mirrored)?;
        let flip = |w: &ProfilePoint| point(w.x.clone(), w.y.iter().rev().copied().collect());
        let maximizers = match cl.maximizers {
            MaximizerSet::Points(p) => MaximizerSet::Points(p.iter().map(flip).collect()),
            MaximizerSet::Family { family: Family::Semidefinite { sqrt_neg_a, sqrt_neg_b, .. }, representative } => {
                MaximizerSet::Family {
                    family: Family::Semidefinite { sqrt_neg_a, sqrt_neg_b, sign: -1.0 },
                    representative: flip(&representative),
                }
            }
            other => other,
        };
        return Ok(classified(cl.region, maximizers, cp));
    }

    let s = -cp.c;
    let (a, b) = (cp.a / s, cp.b / s);
    let tol = BOUNDARY_TOL;
    if a >= -tol && b >= -tol {
        if a > tol && b > tol {
            return Ok(classified(GroundRegion::A, MaximizerSet::Points(vec![omega_a(rho, r)]), cp));
        }
        let family = if a > tol {
            Family::BZero
        } else if b > tol {
            Family::AZero
        } else {
            Family::Origin
        };
        let set = MaximizerSet::Family { family, representative: omega_a(rho, r) };
        return Ok(classified(GroundRegion::BoundaryA, set, cp));
    }
    if a < 0.0 && b < 0.0 && (a * b - 1.0).abs() <= tol {
        let family = Family::Semidefinite { sqrt_neg_a: (-cp.a).sqrt(), sqrt_neg_b: (-cp.b).sqrt(), sign: -1.0 };
        let set = MaximizerSet::Family { family, representative: ProfilePoint::uniform(rho, r) };
        return Ok(classified(GroundRegion::BoundaryD, set, cp));
    }
    if a < 0.0 && b < 0.0 && a * b > 1.0 {
        return Ok(classified(GroundRegion::D, MaximizerSet::Points(vec![ProfilePoint::uniform(rho, r)]), cp));
    }
    for k in 1..r - 1 {
        let (pa, pb) = p_corner(-1.0, rho, r, k);
        if (a - pa).abs() <= tol && (b - pb).abs() <= tol {
            let set = MaximizerSet::Segment { from: omega_b(rho, r, k), to: omega_b(rho, r, k + 1) };
            return Ok(classified(GroundRegion::PCorner(k), set, cp));
        }
    }

    let regions = intermediate_regions(a, b, rho, r);
    let strict: Vec<GroundRegion> =
        regions.iter().filter(|(_, f)| f.iter().all(|&v| v > tol)).map(|(g, _)| *g).collect();
    let closed: Vec<GroundRegion> =
        regions.iter().filter(|(_, f)| f.iter().all(|&v| v >= -tol)).map(|(g, _)| *g).collect();
    let region_point = |g: GroundRegion| match g {
        GroundRegion::B(k) => Some(omega_b(rho, r, k)),
        GroundRegion::C(k) => omega_c(cp, k),
        _ => None,
    };
    if let [g] = strict[..] {
        if let Some(w) = region_point(g) {
            return Ok(classified(g, MaximizerSet::Points(vec![w]), cp));
        }
    }
    let bs: Vec<usize> = closed.iter().filter_map(|g| if let GroundRegion::B(k) = g { Some(*k) } else { None }).collect();
    if let [k, l] = bs[..] {
        if l == k + 1 {
            let set = MaximizerSet::Points(vec![omega_b(rho, r, k), omega_b(rho, r, k + 1)]);
            return Ok(classified(GroundRegion::BBBoundary(k), set, cp));
        }
    }
    if let [k] = bs[..] {
        if closed.iter().any(|g| matches!(g, GroundRegion::C(_))) {
            return Ok(classified(GroundRegion::BCBoundary(k), MaximizerSet::Points(vec![omega_b(rho, r, k)]), cp));
        }
    }
    Err(Error::InvalidParameter(format!(
        "could not place (a, b) = ({}, {}) in the c < 0 diagram",
        cp.a, cp.b
    )))
}

pub fn classify(cp: &Couplings) -> Result<Classification> {
    if cp.c > 0.0 {
        classify_c_positive(cp)
    } else {
        classify_c_negative(cp)
    }
}

/// Derivative of the ground-state energy in a trace-zero field with top
/// eigenvalue `w1`, for `c > 0`.
pub fn ground_magnetisation(region: GroundRegion, cp: &Couplings, w1: f64) -> Result<f64> {
    match region {
        GroundRegion::D => Ok(0.0),
        GroundRegion::E1 => Ok((1.0 - cp.c / cp.b) * cp.rho * w1),
        GroundRegion::E2 => Ok((1.0 - cp.c / cp.a) * cp.rho_b() * w1),
        GroundRegion::F => Ok(w1),
        GroundRegion::BoundaryD => Err(Error::OnBoundary),
        _ => Err(Error::InvalidParameter(format!("region {region} is not part of the c > 0 diagram"))),
    }
}

/// Every closed-form maximizer that is a valid profile at these couplings.
pub fn candidate_points(cp: &Couplings) -> Vec<ProfilePoint> {
    let (rho, r) = (cp.rho, cp.r);
    let mut out = vec![omega_f(rho, r), omega_a(rho, r)];
    if cp.b != 0.0 {
        out.push(omega_e1(cp));
    }
    if cp.a != 0.0 {
        out.push(omega_e2(cp));
    }
    for k in 1..r {
        out.push(omega_b(rho, r, k));
    }
    out.extend((1..=r).filter_map(|k| omega_c(cp, k)));
    out.retain(|w| w.x.iter().chain(&w.y).all(|v| v.is_finite() && *v >= 0.0));
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridCell {
    pub a: f64,
    pub b: f64,
    pub region: GroundRegion,
    pub max_g: f64,
}

/// Classify a `resolution × resolution` grid over `[a0, a1] × [b0, b1]`.
/// Rows run over `b` (ascending), columns over `a`.
pub fn diagram_grid(
    a_range: (f64, f64),
    b_range: (f64, f64),
    resolution: usize,
    c: f64,
    rho: f64,
    r: usize,
) -> Result<Vec<GridCell>> {
    if resolution < 2 {
        return Err(Error::InvalidParameter(format!("resolution must be at least 2, got {resolution}")));
    }
    let step = |(lo, hi): (f64, f64), i: usize| lo + (hi - lo) * i as f64 / (resolution - 1) as f64;
    let mut out = Vec::with_capacity(resolution * resolution);
    for j in 0..resolution {
        for i in 0..resolution {
            let (a, b) = (step(a_range, i), step(b_range, j));
            let cl = classify(&Couplings::new(a, b, c, rho, r)?)?;
            out.push(GridCell { a, b, region: cl.region, max_g: cl.max_g });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(a: f64, b: f64, c: f64, rho: f64, r: usize) -> Couplings {
        Couplings::new(a, b, c, rho, r).unwrap()
    }

    #[test]
    fn positive_examples() {
        assert_eq!(classify(&cp(1.0, 1.0, 1.0, 0.5, 3)).unwrap().region, GroundRegion::F);
        assert_eq!(classify(&cp(-2.0, -2.0, 1.0, 0.5, 3)).unwrap().region, GroundRegion::D);
        let e1 = classify(&cp(1.0, -2.0, 1.0, 0.5, 2)).unwrap();
        assert_eq!(e1.region, GroundRegion::E1);
        assert_eq!(e1.maximizers, MaximizerSet::Points(vec![point(vec![0.5, 0.0], vec![0.375, 0.125])]));
    }

    #[test]
    fn g_examples() {
        let w0 = ProfilePoint::uniform(0.5, 4);
        assert!((g_value(&w0, 1.0, 1.0, 1.0) - 1.0 / 8.0).abs() < 1e-15);
        let c = cp(0.3, -0.7, 0.9, 0.4, 3);
        assert!((g_value(&omega_f(0.4, 3), c.a, c.b, c.c) - c.q(0.4, 0.6)).abs() < 1e-15);
    }

    #[test]
    fn corners() {
        let (pa, pb) = p_corner(-1.0, 0.5, 3, 1);
        assert!((pa + 0.5).abs() < 1e-15 && (pb + 0.5).abs() < 1e-15);
        let (qa, qb) = q_corner(-1.0, 0.5, 3, 1);
        assert!((qa + 0.5).abs() < 1e-15 && (qb + 2.0).abs() < 1e-15);
    }

    #[test]
    fn negative_examples() {
        assert_eq!(classify(&cp(1.0, 1.0, -1.0, 0.5, 3)).unwrap().region, GroundRegion::A);
        let p1 = classify(&cp(-0.5, -0.5, -1.0, 0.5, 3)).unwrap();
        assert_eq!(p1.region, GroundRegion::PCorner(1));
    }

    #[test]
    fn magnetisation_table() {
        let c = cp(1.0, -2.0, 1.0, 0.5, 3);
        assert!((ground_magnetisation(GroundRegion::E1, &c, 2.0).unwrap() - 1.5 * 0.5 * 2.0).abs() < 1e-15);
        assert_eq!(ground_magnetisation(GroundRegion::F, &c, 0.7).unwrap(), 0.7);
        assert_eq!(ground_magnetisation(GroundRegion::BoundaryD, &c, 1.0), Err(Error::OnBoundary));
    }
}
