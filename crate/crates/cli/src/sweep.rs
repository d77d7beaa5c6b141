//! Parameter sweeps over up to three axes, configured from TOML or JSON.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{evaluate, krein_string, Model, Params, PointResult};
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Document, Table};

pub const MAX_POINTS: u64 = 10_000_000;
pub const MAX_AXES: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub count: u64,
    #[serde(default)]
    pub scale: Scale,
}

impl Axis {
    pub fn value(&self, i: u64) -> f64 {
        let t = i as f64 / (self.count - 1) as f64;
        match self.scale {
            Scale::Linear => self.start + (self.stop - self.start) * t,
            Scale::Log => (self.start.ln() + (self.stop.ln() - self.start.ln()) * t).exp(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Verdict,
    Abscissa,
    Leading,
    H,
    Krein,
}

fn default_outputs() -> Vec<Output> {
    vec![Output::Verdict, Output::Abscissa, Output::Leading, Output::H, Output::Krein]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub model: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub axes: Vec<Axis>,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<Output>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

/// A validated spec.
pub struct Plan {
    pub spec: SweepSpec,
    pub model: Model,
    pub base: Params,
    pub tol: f64,
    pub total: u64,
}

pub fn load_spec(path: &Path) -> CliResult<SweepSpec> {
    let text = std::fs::read_to_string(path)?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        // a previous JSON output carries its spec under "spec"
        let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?;
        let v = v.get("spec").cloned().unwrap_or(v);
        serde_json::from_value(v).map_err(|e| CliError::Config(e.to_string()))
    } else {
        toml::from_str(&text).map_err(|e| CliError::Config(e.to_string()))
    }
}

pub fn plan(mut spec: SweepSpec, cli_tol: f64) -> CliResult<Plan> {
    let cfg = |m: String| CliError::Config(m);
    let model = Model::parse(&spec.model)
        .ok_or_else(|| cfg(format!("unknown model '{}' (known: {})", spec.model, Model::names())))?;
    let base = Params::resolve(model, &spec.params).map_err(cfg)?;
    if spec.axes.is_empty() || spec.axes.len() > MAX_AXES {
        return Err(cfg(format!("a sweep needs 1 to {MAX_AXES} axes, got {}", spec.axes.len())));
    }
    let mut total: u64 = 1;
    for (i, ax) in spec.axes.iter().enumerate() {
        let mut probe = base.clone();
        probe.set(model, &ax.name, 0.0).map_err(cfg)?;
        if spec.axes[..i].iter().any(|a| a.name == ax.name) {
            return Err(cfg(format!("axis '{}' appears twice", ax.name)));
        }
        if ax.count < 2 {
            return Err(cfg(format!("axis '{}' needs count >= 2", ax.name)));
        }
        if !ax.start.is_finite() || !ax.stop.is_finite() {
            return Err(cfg(format!("axis '{}' has a non-finite bound", ax.name)));
        }
        if ax.scale == Scale::Log && !(ax.start > 0.0 && ax.stop > 0.0) {
            return Err(cfg(format!("log axis '{}' needs positive bounds", ax.name)));
        }
        total = total.saturating_mul(ax.count);
    }
    if spec.outputs.is_empty() {
        return Err(cfg("outputs must not be empty".into()));
    }
    let tol = spec.tol.unwrap_or(cli_tol);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(cfg(format!("tol must be positive, got {tol}")));
    }
    if total > MAX_POINTS {
        return Err(CliError::Guard(format!("sweep has {total} points, limit is {MAX_POINTS}")));
    }
    spec.tol = Some(tol);
    Ok(Plan { spec, model, base, tol, total })
}

/// Coordinates of point `idx`; the last axis varies fastest.
fn coords(axes: &[Axis], mut idx: u64) -> Vec<f64> {
    let mut out = vec![0.0; axes.len()];
    for (k, ax) in axes.iter().enumerate().rev() {
        out[k] = ax.value(idx % ax.count);
        idx /= ax.count;
    }
    out
}

fn point(plan: &Plan, idx: u64) -> (Vec<f64>, Result<PointResult, String>) {
    let xs = coords(&plan.spec.axes, idx);
    let mut p = plan.base.clone();
    for (ax, &x) in plan.spec.axes.iter().zip(&xs) {
        // names were checked when planning
        p.set(plan.model, &ax.name, x).expect("validated axis");
    }
    (xs, evaluate(plan.model, &p, plan.tol).map_err(|e| e.to_string()))
}

pub fn run(plan: &Plan) -> Document {
    let results: Vec<_> = (0..plan.total).into_par_iter().map(|i| point(plan, i)).collect();

    let mut cols: Vec<(String, String)> =
        plan.spec.axes.iter().map(|a| (a.name.clone(), plan.model.unit(&a.name).to_string())).collect();
    let mut outputs = plan.spec.outputs.clone();
    outputs.dedup();
    for o in &outputs {
        match o {
            Output::Verdict => cols.push(("verdict".into(), String::new())),
            Output::Abscissa => cols.push(("abscissa".into(), "1/time".into())),
            Output::Leading => {
                cols.push(("leading_re".into(), "1/time".into()));
                cols.push(("leading_im".into(), "1/time".into()));
            }
            Output::H => cols.push(("h".into(), String::new())),
            Output::Krein => cols.push(("krein".into(), String::new())),
        }
    }
    let names: Vec<(&str, &str)> = cols.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let mut table = Table::new(&names);

    for (xs, r) in results {
        let mut row: Vec<Cell> = xs.into_iter().map(Cell::Num).collect();
        for o in &outputs {
            match (o, &r) {
                (Output::Verdict, Ok(v)) => row.push(Cell::Text(v.class.to_string())),
                (Output::Verdict, Err(e)) => row.push(Cell::Text(format!("error: {e}"))),
                (Output::Abscissa, _) => row.push(Cell::Num(r.as_ref().map_or(f64::NAN, |v| v.abscissa))),
                (Output::Leading, _) => {
                    let z = r.as_ref().map_or((f64::NAN, f64::NAN), |v| (v.leading.re, v.leading.im));
                    row.push(Cell::Num(z.0));
                    row.push(Cell::Num(z.1));
                }
                (Output::H, _) => row.push(Cell::Num(r.as_ref().ok().and_then(|v| v.h).unwrap_or(f64::NAN))),
                (Output::Krein, _) => {
                    let s = r.as_ref().ok().and_then(|v| v.krein.as_deref()).map(krein_string).unwrap_or_default();
                    row.push(Cell::Text(s));
                }
            }
        }
        table.rows.push(row);
    }

    let mut doc = Document::new("sweep");
    doc.meta.insert("spec".into(), serde_json::to_value(&plan.spec).expect("spec serializes"));
    doc.meta.insert(
        "provenance".into(),
        serde_json::json!({
            "tool": "dissipstab",
            "version": env!("CARGO_PKG_VERSION"),
            "model": plan.model.name(),
            "points": plan.total,
            "determinism": "rows are in axis order and independent of the thread count",
        }),
    );
    doc.table = Some(table);
    doc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(text: &str) -> SweepSpec {
        toml::from_str(text).unwrap()
    }

    #[test]
    fn last_axis_fastest() {
        let axes = vec![
            Axis { name: "a".into(), start: 0.0, stop: 1.0, count: 2, scale: Scale::Linear },
            Axis { name: "b".into(), start: 1.0, stop: 100.0, count: 3, scale: Scale::Log },
        ];
        assert_eq!(coords(&axes, 0), vec![0.0, 1.0]);
        assert!((coords(&axes, 1)[1] - 10.0).abs() < 1e-12);
        assert_eq!(coords(&axes, 3)[0], 1.0);
    }

    #[test]
    fn validation() {
        let ok = spec("model = \"ziegler\"\n[[axes]]\nname = \"p\"\nstart = 0\nstop = 3\ncount = 4\n");
        assert_eq!(plan(ok.clone(), 1e-12).unwrap().total, 4);
        let mut bad = ok.clone();
        bad.axes[0].count = 1;
        assert!(matches!(plan(bad, 1e-12), Err(CliError::Config(_))));
        let mut bad = ok.clone();
        bad.axes[0].name = "q".into();
        assert!(matches!(plan(bad, 1e-12), Err(CliError::Config(_))));
        let mut big = ok;
        big.axes[0].count = 20_000_000;
        assert!(matches!(plan(big, 1e-12), Err(CliError::Guard(_))));
    }
}
