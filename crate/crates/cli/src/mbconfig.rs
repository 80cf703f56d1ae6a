//! Multi-block model description: a line-oriented `key = value` file plus the
//! compact coupling grammar `"2:0.5,2+2:-0.1"` (cycle type, then global
//! coupling `c^γ`; parts of a cycle type are joined with `+`).
//!
//! ```text
//! # two blocks of density 0.4 and 0.6
//! r = 3
//! rho = 0.4, 0.6
//! beta = 1.5
//! gamma = 2:0.5
//! a.2 = 1.0, -0.5
//! couplings = functional
//! ```
//!
//! `a.<cycle>` lists the block couplings `a_k^γ`, one per block; cycle types
//! that appear only there get `c^γ = 0`, and cycle types that appear only in
//! `gamma` get zero block couplings. `couplings = finite` rescales block
//! couplings to match the finite-volume Hamiltonian.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use mfq_core::combinatorics::CycleType;
use mfq_core::oracle::MbTerm;
use mfq_core::variational::MultiBlockSpec;
use serde_json::{json, Value};

use crate::output::{num, nums};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scaling {
    Functional,
    Finite,
}

#[derive(Clone, Debug)]
pub struct MbConfig {
    pub r: usize,
    pub rho: Vec<f64>,
    pub beta: f64,
    pub global: BTreeMap<Vec<usize>, f64>,
    pub block: BTreeMap<Vec<usize>, Vec<f64>>,
    pub scaling: Scaling,
}

pub fn parse_cycle(text: &str) -> Result<Vec<usize>> {
    let parts = text
        .split('+')
        .map(|p| p.trim().parse::<usize>().map_err(|_| anyhow!("bad cycle type `{text}`: parts must be integers")))
        .collect::<Result<Vec<_>>>()?;
    let mut sorted = parts.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    CycleType::new(sorted.clone()).map_err(|e| anyhow!("bad cycle type `{text}`: {e}"))?;
    Ok(sorted)
}

/// Parse `"2:0.5,3:-0.1"` into `{[2]: 0.5, [3]: -0.1}`.
pub fn parse_gamma(text: &str) -> Result<BTreeMap<Vec<usize>, f64>> {
    let mut out = BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (cycle, value) = item.split_once(':').ok_or_else(|| anyhow!("bad coupling `{item}`: expected CYCLE:VALUE"))?;
        let value: f64 = value.trim().parse().map_err(|_| anyhow!("bad coupling value in `{item}`"))?;
        if !value.is_finite() {
            bail!("coupling in `{item}` must be finite");
        }
        if out.insert(parse_cycle(cycle)?, value).is_some() {
            bail!("cycle type `{}` listed twice", cycle.trim());
        }
    }
    Ok(out)
}

fn parse_list(key: &str, text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|v| {
            let x: f64 = v.trim().parse().map_err(|_| anyhow!("`{key}`: `{}` is not a number", v.trim()))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(anyhow!("`{key}`: values must be finite"))
            }
        })
        .collect()
}

impl MbConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut r = None;
        let mut rho = None;
        let mut beta = None;
        let mut global = BTreeMap::new();
        let mut block = BTreeMap::new();
        let mut scaling = Scaling::Functional;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let ctx = || format!("config line {}", lineno + 1);
            let (key, value) = line.split_once('=').ok_or_else(|| anyhow!("expected KEY = VALUE")).with_context(ctx)?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "r" => r = Some(value.parse::<usize>().map_err(|_| anyhow!("`r` must be an integer")).with_context(ctx)?),
                "rho" => rho = Some(parse_list(key, value).with_context(ctx)?),
                "beta" => beta = Some(parse_list(key, value).with_context(ctx)?.first().copied().unwrap_or(f64::NAN)),
                "gamma" => global = parse_gamma(value).with_context(ctx)?,
                "couplings" => {
                    scaling = match value {
                        "functional" => Scaling::Functional,
                        "finite" => Scaling::Finite,
                        other => bail!("{}: `couplings` must be `functional` or `finite`, got `{other}`", ctx()),
                    }
                }
                k if k.starts_with("a.") => {
                    let cycle = parse_cycle(&k[2..]).with_context(ctx)?;
                    block.insert(cycle, parse_list(k, value).with_context(ctx)?);
                }
                other => bail!("{}: unknown key `{other}`", ctx()),
            }
        }
        Ok(Self {
            r: r.ok_or_else(|| anyhow!("config is missing `r`"))?,
            rho: rho.ok_or_else(|| anyhow!("config is missing `rho`"))?,
            beta: beta.unwrap_or(f64::NAN),
            global,
            block,
            scaling,
        })
    }

    /// Check domains; called before any computation.
    pub fn validate(&self) -> Result<()> {
        if self.r < 2 {
            bail!("r must be at least 2, got {}", self.r);
        }
        if self.rho.iter().any(|&x| !(x > 0.0 && x < 1.0 + 1e-12)) {
            bail!("every block density must lie in (0, 1]");
        }
        let total: f64 = self.rho.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            bail!("block densities must sum to 1, got {total}");
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            bail!("beta must be positive (set `beta` in the config or pass --beta)");
        }
        if self.global.is_empty() && self.block.is_empty() {
            bail!("no couplings: give `gamma` and/or `a.<cycle>` entries");
        }
        for (cycle, values) in &self.block {
            if values.len() != self.rho.len() {
                bail!("a.{} has {} values for {} blocks", join(cycle), values.len(), self.rho.len());
            }
        }
        Ok(())
    }

    pub fn terms(&self) -> Result<Vec<MbTerm>> {
        let cycles: std::collections::BTreeSet<&Vec<usize>> = self.global.keys().chain(self.block.keys()).collect();
        cycles
            .into_iter()
            .map(|cycle| {
                Ok(MbTerm {
                    cycle: CycleType::new(cycle.clone())?,
                    block: self.block.get(cycle).cloned().unwrap_or_else(|| vec![0.0; self.rho.len()]),
                    global: self.global.get(cycle).copied().unwrap_or(0.0),
                })
            })
            .collect()
    }

    pub fn spec(&self) -> Result<MultiBlockSpec> {
        let terms = self.terms()?;
        Ok(match self.scaling {
            Scaling::Functional => MultiBlockSpec::new(self.r, self.rho.clone(), self.beta, terms)?,
            Scaling::Finite => MultiBlockSpec::from_finite(self.r, self.rho.clone(), self.beta, &terms)?,
        })
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms()
            .unwrap_or_default()
            .iter()
            .map(|t| json!({ "cycle": join(t.cycle.parts()), "block": nums(&t.block), "global": num(t.global) }))
            .collect();
        json!({
            "r": self.r,
            "rho": nums(&self.rho),
            "beta": num(self.beta),
            "couplings": match self.scaling { Scaling::Functional => "functional", Scaling::Finite => "finite" },
            "terms": terms,
        })
    }
}

fn join(cycle: &[usize]) -> String {
    cycle.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("+")
}
