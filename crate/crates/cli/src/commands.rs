use std::collections::BTreeMap;

use anyhow::{anyhow, Context, Result};
use mfq_core::groundstate::classify;
use mfq_core::observables::{self, Kind, Side};
use mfq_core::oracle::{hamiltonian, partition_function, spectrum as dense_spectrum, ModelInstance, ModelKind};
use mfq_core::repsum::z_exact;
use mfq_core::variational::{
    self, beta_crit_bounds, free_energy_comparable, maximize_f, multi_block_beta_crit, multi_block_free_energy,
    Couplings, Method, ProfilePoint, TwoBlockParams,
};
use mfq_core::Error;
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::mbconfig::{parse_gamma, MbConfig};
use crate::output::{cell, csv_writer, num, nums, Report};
use crate::{CouplingArgs, FieldArgs, FiniteArgs, FiniteKind, MbArgs, ObservableKind, PhaseArgs, ScalingArgs, StateArgs};

/// Gap allowed between the two partition functions in `exact-check`.
const EXACT_CHECK_TOL: f64 = 1e-9;
/// Eigenvalues closer than this are reported as one level.
const LEVEL_TOL: f64 = 1e-9;

fn coupling_params(c: &CouplingArgs) -> Value {
    json!({ "r": c.r, "a": num(c.a), "b": num(c.b), "c": num(c.c), "rho": num(c.rho) })
}

fn state_params(s: &StateArgs) -> Value {
    let mut v = coupling_params(&s.couplings);
    v["beta"] = num(s.beta);
    v
}

fn point_json(w: &ProfilePoint) -> Value {
    json!({ "x": nums(&w.x), "y": nums(&w.y) })
}

fn kind(k: ObservableKind) -> Kind {
    match k {
        ObservableKind::Ab => Kind::Ab,
        ObservableKind::Wb => Kind::Wb,
    }
}

fn kind_name(k: ObservableKind) -> &'static str {
    match k {
        ObservableKind::Ab => "ab",
        ObservableKind::Wb => "wb",
    }
}

pub fn free_energy(args: &StateArgs) -> Result<()> {
    let p = args.validate()?;
    let report = maximize_f(&p)?;
    let mut out = Report::new("free-energy", state_params(args));
    out.set("free_energy", num(report.value))
        .set("log_z_per_site", num(free_energy_comparable(&p)?))
        .set("maximizers", json!(report.points.len()))
        .set("at_omega0", json!(report.at_omega0));
    out.print()
}

pub fn beta_crit(args: &CouplingArgs) -> Result<()> {
    let cp = args.validate()?;
    let mut out = Report::new("beta-crit", coupling_params(args));
    match variational::beta_crit(&cp)? {
        Some(bc) => {
            let (lower, upper) = beta_crit_bounds(&cp)?;
            out.set("beta_crit", num(bc.value))
                .set("method", json!(bc.method.as_str()))
                .set("bounds", json!([num(lower), num(upper)]));
        }
        None => {
            out.set("beta_crit", Value::Null).set("reason", json!("Q negative semidefinite"));
        }
    }
    out.print()
}

pub fn maximize(args: &StateArgs) -> Result<()> {
    let p = args.validate()?;
    let report = maximize_f(&p)?;
    let mut out = Report::new("maximize", state_params(args));
    out.set("value", num(report.value))
        .set("unique", json!(report.is_unique()))
        .set("at_omega0", json!(report.at_omega0))
        .set(
            "method",
            json!(match report.method {
                Method::ClosedFormCandidate => "closed-form-candidate",
                Method::Numeric => "numeric",
            }),
        )
        .set("points", Value::Array(report.points.iter().map(point_json).collect()));
    out.print()
}

pub fn phase_diagram(args: &PhaseArgs) -> Result<()> {
    args.validate()?;
    let n = args.resolution;
    let step = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (n - 1) as f64;
    let cells: Vec<(f64, f64)> = (0..n)
        .flat_map(|j| (0..n).map(move |i| (i, j)))
        .map(|(i, j)| (step(args.a_min, args.a_max, i), step(args.b_min, args.b_max, j)))
        .collect();
    let classified = cells
        .par_iter()
        .map(|&(a, b)| Ok((a, b, classify(&Couplings::new(a, b, args.c, args.rho, args.r)?)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut writer = csv_writer(args.out.as_deref())?;
    writer.write_record(["a", "b", "region", "k", "maxG"])?;
    for (a, b, cl) in &classified {
        *counts.entry(cl.region.to_string()).or_default() += 1;
        let k = cl.region.k().map(|k| k.to_string()).unwrap_or_default();
        writer.write_record([cell(*a), cell(*b), cl.region.tag().to_string(), k, cell(cl.max_g)])?;
    }
    writer.flush()?;
    drop(writer);
    if let Some(path) = &args.out {
        let params = json!({
            "r": args.r, "c": num(args.c), "rho": num(args.rho),
            "a_range": [num(args.a_min), num(args.a_max)], "b_range": [num(args.b_min), num(args.b_max)],
            "resolution": n,
        });
        let mut out = Report::new("phase-diagram", params);
        out.set("csv", json!(path.display().to_string())).set("cells", json!(classified.len())).set("regions", json!(counts));
        out.print()?;
    }
    Ok(())
}

fn field_params(args: &FieldArgs) -> Value {
    let mut v = state_params(&args.state);
    v["kind"] = json!(kind_name(args.kind));
    v["w"] = nums(&args.w);
    v
}

pub fn magnetisation(args: &FieldArgs) -> Result<()> {
    let p = args.validate()?;
    let k = kind(args.kind);
    let right = observables::magnetisation(&p, k, &args.w, Side::Right)?;
    let left = observables::magnetisation(&p, k, &args.w, Side::Left)?;
    let mut out = Report::new("magnetisation", field_params(args));
    out.set("right", num(right)).set("left", num(left)).set("continuous", json!((right - left).abs() <= 1e-9));
    out.print()
}

fn complex_json(z: Complex64) -> Value {
    json!({ "re": num(z.re), "im": num(z.im) })
}

pub fn correlation(args: &FieldArgs) -> Result<()> {
    let p = args.validate()?;
    let w: Vec<Complex64> = args.w.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut out = Report::new("correlation", field_params(args));
    match observables::limit_correlation(&p, kind(args.kind), &w) {
        Ok(v) => {
            out.set("value", complex_json(v));
        }
        Err(Error::NonUniqueMaximizer { candidates }) => {
            out.set("value", Value::Null)
                .set("reason", json!("maximizer is not unique"))
                .set("candidates", Value::Array(candidates.into_iter().map(complex_json).collect()));
        }
        Err(e) => return Err(e.into()),
    }
    out.print()
}

fn finite_params(args: &FiniteArgs) -> Value {
    let mut v = json!({ "r": args.r, "n": args.n, "m": args.m });
    match args.kind {
        FiniteKind::Bb => {
            v["kind"] = json!("bb");
            v["j1"] = num(args.j1);
            v["j2"] = num(args.j2);
        }
        k => {
            v["kind"] = json!(match k {
                FiniteKind::Ab => "ab",
                FiniteKind::WbQ => "wb-q",
                _ => "wb-p",
            });
            v["a"] = num(args.a);
            v["b"] = num(args.b);
            v["c"] = num(args.c);
        }
    }
    if let Some(beta) = args.beta {
        v["beta"] = num(beta);
    }
    v
}

fn finite_instance(args: &FiniteArgs) -> Result<ModelInstance> {
    let kind = match args.kind {
        FiniteKind::Bb => return Ok(ModelInstance::bilinear_biquadratic(args.r, args.n, args.m, args.j1, args.j2)?),
        FiniteKind::Ab => ModelKind::Ab,
        FiniteKind::WbQ => ModelKind::WbQ,
        FiniteKind::WbP => ModelKind::WbP,
    };
    Ok(ModelInstance::two_block(kind, args.r, args.n, args.m, args.a, args.b, args.c)?)
}

pub fn exact_check(args: &FiniteArgs) -> Result<()> {
    args.validate(true)?;
    if args.kind == FiniteKind::Bb {
        return Err(anyhow!("exact-check supports --kind ab, wb-q or wb-p"));
    }
    let beta = args.beta.expect("validated");
    let inst = finite_instance(args)?;
    let dense = partition_function(&hamiltonian(&inst)?, beta)?;
    let sum = z_exact(&inst, beta)?;
    let gap = (sum - dense).abs() / dense.abs();
    let mut out = Report::new("exact-check", finite_params(args));
    out.set("dense_z", num(dense))
        .set("repsum_z", num(sum))
        .set("relative_gap", num(gap))
        .set("tolerance", num(EXACT_CHECK_TOL))
        .set("agree", json!(gap <= EXACT_CHECK_TOL));
    out.print()
}

pub fn spectrum(args: &FiniteArgs) -> Result<()> {
    args.validate(false)?;
    let values = dense_spectrum(&hamiltonian(&finite_instance(args)?)?)?;
    let mut levels: Vec<(f64, usize)> = Vec::new();
    for v in values {
        match levels.last_mut() {
            Some((e, k)) if (v - *e).abs() <= LEVEL_TOL => *k += 1,
            _ => levels.push((v, 1)),
        }
    }
    let mut out = Report::new("spectrum", finite_params(args));
    out.set("dimension", json!(levels.iter().map(|l| l.1).sum::<usize>()))
        .set("ground_energy", num(levels[0].0))
        .set("levels", Value::Array(levels.iter().map(|&(e, k)| json!({ "energy": num(e), "multiplicity": k })).collect()));
    out.print()
}

pub fn mb_free_energy(args: &MbArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.config).with_context(|| format!("cannot read {}", args.config.display()))?;
    let mut cfg = MbConfig::parse(&text)?;
    if let Some(g) = &args.gamma {
        cfg.global = parse_gamma(g).context("--gamma")?;
    }
    if let Some(beta) = args.beta {
        cfg.beta = beta;
    }
    cfg.validate()?;
    let spec = cfg.spec()?;
    let result = multi_block_free_energy(&spec)?;
    let mut out = Report::new("mb-free-energy", cfg.to_json());
    out.set("free_energy", num(result.value))
        .set("commuting_value", num(result.commuting_value))
        .set("refinement_improved", json!(result.improved))
        .set("spectra", Value::Array(result.spectra.iter().map(|s| nums(s)).collect()));
    if args.beta_crit {
        out.set("beta_crit", multi_block_beta_crit(&spec)?.map_or(Value::Null, num));
    }
    out.print()
}

pub fn scaling_study(args: &ScalingArgs) -> Result<()> {
    let p: TwoBlockParams = args.validate()?;
    let limit = free_energy_comparable(&p)?;
    let rows = args
        .n
        .par_iter()
        .map(|&n| {
            let m = (p.rho * n as f64).round() as usize;
            let inst = ModelInstance::ab(p.r, n, m, p.a, p.b, p.c)?;
            let per_site = z_exact(&inst, p.beta)?.ln() / n as f64;
            Ok((n, m, per_site))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut writer = csv_writer(args.out.as_deref())?;
    writer.write_record(["n", "m", "log_z_per_site", "limit", "gap"])?;
    for (n, m, per_site) in rows {
        writer.write_record([n.to_string(), m.to_string(), cell(per_site), cell(limit), cell((per_site - limit).abs())])?;
    }
    writer.flush()?;
    Ok(())
}
