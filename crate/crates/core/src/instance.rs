//! Instances loaded from the catalog or from JSON files.
//!
//! File layout:
//!
//! ```json
//! {
//!   "algebra": {"dim": 3, "basis": ["x", "y", "z"],
//!               "brackets": [{"i": 0, "j": 1, "coeffs": [0, 0, 1]}]},
//!   "metric": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
//!   "vector": [1, 0, 0],
//!   "w_kind": "left",
//!   "subalgebra": [[0, 0, 1]],
//!   "ambient_form": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
//!   "chart": {"series_order": 10, "radius": 0.3, "samples": 20, "seed": 0, "fd_step": 1e-4}
//! }
//! ```
//!
//! Brackets are listed once per pair with `i < j` (0-based); unlisted pairs
//! are zero. With a subalgebra, `metric` may be given on `𝔪` coordinates.

use nalgebra::{DMatrix, DVector};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::catalog::{self, CatalogEntry, Expected, HomogeneousData, Param};
use crate::error::{Error, Result};
use crate::kropina::WKind;
use crate::lie::{Bracket, InnerProduct, LieAlgebra};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub algebra: AlgebraFile,
    #[serde(default)]
    pub metric: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub vector: Option<Vec<f64>>,
    #[serde(default)]
    pub w_kind: Option<String>,
    #[serde(default)]
    pub subalgebra: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub ambient_form: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub chart: Option<ChartFile>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub dim: usize,
    #[serde(default)]
    pub basis: Option<Vec<String>>,
    #[serde(default)]
    pub brackets: Vec<BracketFile>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketFile {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartFile {
    pub series_order: Option<usize>,
    pub radius: Option<f64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub fd_step: Option<f64>,
}

/// Everything a command needs, whatever the source.
#[derive(Debug, Clone)]
pub struct Instance {
    /// Echo of the source for reports.
    pub label: Value,
    pub algebra: LieAlgebra,
    /// Left-invariant metric (Lie-group instances).
    pub metric: Option<InnerProduct>,
    pub vectors: Vec<(String, DVector<f64>)>,
    pub w_kind: Option<WKind>,
    pub homogeneous: Option<HomogeneousData>,
    pub chart: ChartFile,
    pub expected: Option<Expected>,
}

impl Instance {
    pub fn from_entry(e: &CatalogEntry) -> Self {
        let mut params = Map::new();
        for (k, v) in &e.params {
            let value = if v.fract() == 0.0 && v.abs() < 1e15 { json!(*v as i64) } else { crate::report::num(*v) };
            params.insert(k.clone(), value);
        }
        Self {
            label: json!({"builtin": e.name, "params": Value::Object(params)}),
            algebra: e.algebra.clone(),
            metric: Some(e.metric.clone()),
            vectors: e.vectors.clone(),
            w_kind: e.w_kind,
            homogeneous: e.homogeneous.clone(),
            chart: ChartFile::default(),
            expected: Some(e.expected.clone()),
        }
    }

    pub fn from_builtin(name: &str, params: &[Param]) -> Result<Self> {
        Ok(Self::from_entry(&catalog::get(name, params)?))
    }

    pub fn from_json_str(text: &str, label: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Input(format!("{label}: {e}")))?;
        Self::from_file(file, json!({"input": label}))
    }

    pub fn from_file(f: InstanceFile, label: Value) -> Result<Self> {
        let n = f.algebra.dim;
        if n == 0 {
            return Err(Error::Input("algebra.dim must be positive".into()));
        }
        let names = match f.algebra.basis {
            Some(b) if b.len() == n => b,
            Some(b) => return Err(Error::Input(format!("algebra.basis has {} names for dim {n}", b.len()))),
            None => (0..n).map(|i| format!("e{i}")).collect(),
        };
        let brackets: Vec<Bracket> = f.algebra.brackets.into_iter().map(|b| Bracket::new(b.i, b.j, b.coeffs)).collect();
        let algebra = LieAlgebra::from_brackets(names, &brackets)?;

        let mut group_metric = None;
        let homogeneous = if f.subalgebra.is_some() || f.ambient_form.is_some() {
            let h_basis = f.subalgebra.unwrap_or_default().into_iter().map(DVector::from_vec).collect();
            let (ambient_form, metric_m) = match (f.ambient_form, f.metric) {
                (Some(q), m) => (parse_matrix(q, n, "ambient_form")?, m),
                (None, Some(m)) if m.len() == n => (parse_matrix(m, n, "metric")?, None),
                (None, _) => return Err(Error::Input("a homogeneous instance needs ambient_form".into())),
            };
            let metric_m = match metric_m {
                Some(m) => {
                    let p = m.len();
                    Some(parse_matrix(m, p, "metric")?)
                }
                None => None,
            };
            Some(HomogeneousData { h_basis, ambient_form, metric_m })
        } else {
            group_metric = f.metric;
            None
        };
        let metric = match (&homogeneous, group_metric) {
            (Some(hd), _) => Some(hd.ambient_form.clone()),
            (None, Some(m)) => Some(parse_matrix(m, n, "metric")?),
            (None, None) => None,
        };
        let mut vectors = Vec::new();
        if let Some(v) = f.vector {
            vectors.push(("vector".to_string(), DVector::from_vec(v)));
        }
        let w_kind = f.w_kind.as_deref().map(str::parse).transpose()?;
        Ok(Self {
            label,
            algebra,
            metric,
            vectors,
            w_kind,
            homogeneous,
            chart: f.chart.unwrap_or_default(),
            expected: None,
        })
    }

    /// Resolves `--w`: a named vector, a basis name, or a comma list.
    pub fn resolve_vector(&self, spec: &str) -> Result<(String, DVector<f64>)> {
        if let Some((n, v)) = self.vectors.iter().find(|(n, _)| n == spec) {
            return Ok((n.clone(), v.clone()));
        }
        if let Some(i) = self.algebra.basis_names().iter().position(|b| b == spec) {
            return Ok((spec.to_string(), self.algebra.basis_vector(i)));
        }
        let parts: std::result::Result<Vec<f64>, _> = spec.split(',').map(|p| p.trim().parse::<f64>()).collect();
        match parts {
            Ok(v) if !v.is_empty() => Ok((spec.to_string(), DVector::from_vec(v))),
            _ => {
                let mut known: Vec<String> = self.vectors.iter().map(|(n, _)| n.clone()).collect();
                known.extend(self.algebra.basis_names().iter().cloned());
                Err(Error::Input(format!("unknown vector {spec:?}; known names: {}", known.join(", "))))
            }
        }
    }
}

fn parse_matrix(rows: Vec<Vec<f64>>, n: usize, what: &str) -> Result<InnerProduct> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Input(format!("{what} must be a {n}x{n} array")));
    }
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    InnerProduct::new(DMatrix::from_row_slice(n, n, &flat))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_entries_round_trip_through_json() {
        for name in catalog::NAMES {
            let e = catalog::get(name, &[]).unwrap();
            let text = serde_json::to_string(&e.to_instance()).unwrap();
            let inst = Instance::from_json_str(&text, "x.json").unwrap();
            assert_eq!(inst.algebra.structure_constants(), e.algebra.structure_constants(), "{name}");
            assert_eq!(inst.metric.as_ref().unwrap(), &e.metric, "{name}");
            assert_eq!(inst.homogeneous, e.homogeneous, "{name}");
            assert_eq!(inst.w_kind, e.w_kind, "{name}");
        }
    }

    #[test]
    fn malformed_files_are_input_errors() {
        assert!(matches!(Instance::from_json_str("{", "f"), Err(Error::Input(_))));
        assert!(matches!(Instance::from_json_str(r#"{"algebra": {"dim": 2}, "extra": 1}"#, "f"), Err(Error::Input(_))));
        let bad = r#"{"algebra": {"dim": 2, "brackets": [{"i": 1, "j": 0, "coeffs": [1, 0]}]}}"#;
        assert!(Instance::from_json_str(bad, "f").is_err());
        let bad = r#"{"algebra": {"dim": 2}, "metric": [[1, 0]]}"#;
        assert!(Instance::from_json_str(bad, "f").is_err());
    }

    #[test]
    fn vector_resolution() {
        let inst = Instance::from_builtin("e0tilde2", &catalog::parse_params("nu=4").unwrap()).unwrap();
        assert_eq!(inst.resolve_vector("W_thm3").unwrap().1, DVector::from_vec(vec![0.0, 0.0, 0.5]));
        assert_eq!(inst.resolve_vector("y").unwrap().1, DVector::from_vec(vec![0.0, 1.0, 0.0]));
        assert_eq!(inst.resolve_vector("1,2,3").unwrap().1, DVector::from_vec(vec![1.0, 2.0, 3.0]));
        assert!(inst.resolve_vector("nope").is_err());
    }
}
