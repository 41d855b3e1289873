//! Built-in instances addressed by name, with parameters.
//!
//! Lie-group entries carry a left-invariant metric and named vectors;
//! homogeneous entries additionally carry the isotropy subalgebra and the
//! ambient form used to build the reductive complement.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::homog::{self, ReductiveSpace};
use crate::kropina::WKind;
use crate::lie::{Bracket, InnerProduct, LieAlgebra};

pub const NAMES: [&str; 9] = [
    "r3_abelian",
    "e0tilde2",
    "su2_round",
    "su2_diag",
    "so_n",
    "heisenberg3",
    "sphere_so",
    "sphere_u",
    "su2_plus_r1",
];

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    /// published closed-form result
    Literature,
    /// computed by an independent method and frozen
    Oracle,
    /// holds by construction
    Construction,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Expectation<T> {
    pub value: T,
    pub origin: Origin,
}

fn lit<T>(value: T) -> Option<Expectation<T>> {
    Some(Expectation { value, origin: Origin::Literature })
}

fn oracle<T>(value: T) -> Option<Expectation<T>> {
    Some(Expectation { value, origin: Origin::Oracle })
}

fn built<T>(value: T) -> Option<Expectation<T>> {
    Some(Expectation { value, origin: Origin::Construction })
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Expected {
    pub sigma: Option<Expectation<f64>>,
    pub einstein: Option<Expectation<bool>>,
    pub killing_dim: Option<Expectation<usize>>,
    pub center_dim: Option<Expectation<usize>>,
    /// dimension of the isotropy-fixed subspace of `𝔪`
    pub invariant_dim: Option<Expectation<usize>>,
}

/// Isotropy data of a homogeneous entry.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousData {
    pub h_basis: Vec<DVector<f64>>,
    pub ambient_form: InnerProduct,
    /// Metric on `𝔪` coordinates; the restriction of `ambient_form` if unset.
    pub metric_m: Option<InnerProduct>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub name: String,
    pub params: Vec<(String, f64)>,
    pub algebra: LieAlgebra,
    /// Left-invariant metric; the ambient form for homogeneous entries.
    pub metric: InnerProduct,
    /// Named vectors in ambient coordinates, not necessarily normalized.
    pub vectors: Vec<(String, DVector<f64>)>,
    /// Extension used with the default navigation vector.
    pub w_kind: Option<WKind>,
    pub homogeneous: Option<HomogeneousData>,
    pub expected: Expected,
}

impl CatalogEntry {
    pub fn vector(&self, name: &str) -> Option<&DVector<f64>> {
        self.vectors.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    /// Navigation vector used when none is requested.
    pub fn default_vector(&self) -> Option<(&str, &DVector<f64>)> {
        self.vectors.first().map(|(n, v)| (n.as_str(), v))
    }

    pub fn reductive_space(&self) -> Result<Option<ReductiveSpace>> {
        let Some(hd) = &self.homogeneous else { return Ok(None) };
        let s = homog::build_reductive(&self.algebra, &hd.h_basis, &hd.ambient_form)?;
        Ok(Some(match &hd.metric_m {
            Some(m) => s.with_metric(m.clone())?,
            None => s,
        }))
    }

    /// The entry in the JSON instance format.
    pub fn to_instance(&self) -> Value {
        let brackets: Vec<Value> = self
            .algebra
            .brackets()
            .iter()
            .map(|b| json!({"i": b.i, "j": b.j, "coeffs": b.coeffs}))
            .collect();
        let mut doc = serde_json::Map::new();
        doc.insert(
            "algebra".into(),
            json!({"dim": self.algebra.dim(), "basis": self.algebra.basis_names(), "brackets": brackets}),
        );
        match &self.homogeneous {
            None => {
                doc.insert("metric".into(), matrix_json(self.metric.matrix()));
            }
            Some(hd) => {
                doc.insert("subalgebra".into(), Value::Array(hd.h_basis.iter().map(vector_json).collect()));
                doc.insert("ambient_form".into(), matrix_json(hd.ambient_form.matrix()));
                if let Some(m) = &hd.metric_m {
                    doc.insert("metric".into(), matrix_json(m.matrix()));
                }
            }
        }
        if let Some((_, v)) = self.default_vector() {
            doc.insert("vector".into(), vector_json(v));
        }
        if let Some(k) = self.w_kind {
            doc.insert("w_kind".into(), Value::String(k.as_str().into()));
        }
        Value::Object(doc)
    }
}

fn matrix_json(m: &DMatrix<f64>) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| json!(m[(i, j)])).collect())).collect())
}

fn vector_json(v: &DVector<f64>) -> Value {
    Value::Array(v.iter().map(|x| json!(x)).collect())
}

/// A parameter value, either named (`nu=2`) or positional.
#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub name: Option<String>,
    pub value: f64,
}

/// Parses `nu=2`, `1,2,3` or a mix.
pub fn parse_params(text: &str) -> Result<Vec<Param>> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = match part.split_once('=') {
            Some((k, v)) => (Some(k.trim().to_string()), v.trim()),
            None => (None, part),
        };
        let value: f64 = value.parse().map_err(|_| Error::Input(format!("bad parameter value {value:?}")))?;
        out.push(Param { name, value });
    }
    Ok(out)
}

struct ParamSpec {
    name: &'static str,
    default: f64,
    integer: bool,
    min: f64,
    // inclusive lower bound if true, strict otherwise
    inclusive: bool,
}

const fn real(name: &'static str, default: f64) -> ParamSpec {
    ParamSpec { name, default, integer: false, min: 0.0, inclusive: false }
}

const fn int(name: &'static str, default: f64, min: f64) -> ParamSpec {
    ParamSpec { name, default, integer: true, min, inclusive: true }
}

fn param_specs(name: &str) -> Option<Vec<ParamSpec>> {
    Some(match name {
        "r3_abelian" | "heisenberg3" | "su2_plus_r1" => vec![],
        "e0tilde2" => vec![real("nu", 1.0)],
        "su2_round" => vec![real("lambda", 1.0)],
        "su2_diag" => vec![real("lambda1", 1.0), real("lambda2", 2.0), real("lambda3", 3.0)],
        "so_n" => vec![int("n", 3.0, 3.0)],
        "sphere_so" => vec![int("n", 2.0, 2.0)],
        "sphere_u" => vec![int("n", 1.0, 1.0), real("fiber", 1.0)],
        _ => return None,
    })
}

fn describe_ranges() -> String {
    NAMES
        .iter()
        .map(|n| {
            let specs = param_specs(n).unwrap_or_default();
            if specs.is_empty() {
                n.to_string()
            } else {
                let ps: Vec<String> = specs
                    .iter()
                    .map(|s| {
                        let op = if s.inclusive { ">=" } else { ">" };
                        let kind = if s.integer { " integer" } else { "" };
                        format!("{}{} {} {}", s.name, kind, op, s.min)
                    })
                    .collect();
                format!("{n}({})", ps.join(", "))
            }
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn resolve_params(name: &str, given: &[Param]) -> Result<Vec<(String, f64)>> {
    let specs = param_specs(name)
        .ok_or_else(|| Error::Input(format!("unknown catalog entry {name:?}; valid entries: {}", describe_ranges())))?;
    let mut values: Vec<Option<f64>> = vec![None; specs.len()];
    let mut next = 0;
    for p in given {
        let idx = match &p.name {
            Some(k) => specs
                .iter()
                .position(|s| s.name == k)
                .ok_or_else(|| Error::Input(format!("{name} has no parameter {k:?}; valid: {}", describe_ranges())))?,
            None => {
                while next < specs.len() && values[next].is_some() {
                    next += 1;
                }
                if next >= specs.len() {
                    return Err(Error::Input(format!("too many parameters for {name}; valid: {}", describe_ranges())));
                }
                next
            }
        };
        if values[idx].is_some() {
            return Err(Error::Input(format!("parameter {} given twice", specs[idx].name)));
        }
        values[idx] = Some(p.value);
    }
    let mut out = Vec::with_capacity(specs.len());
    for (s, v) in specs.iter().zip(values) {
        let v = v.unwrap_or(s.default);
        let ok_range = if s.inclusive { v >= s.min } else { v > s.min };
        if !v.is_finite() || !ok_range || (s.integer && v.fract() != 0.0) {
            return Err(Error::Input(format!("parameter {}={v} out of range for {name}; valid: {}", s.name, describe_ranges())));
        }
        if s.integer && v > 12.0 {
            return Err(Error::Input(format!("parameter {}={v} is too large (max 12)", s.name)));
        }
        out.push((s.name.to_string(), v));
    }
    Ok(out)
}

/// Builds the named entry; `params` may be named or positional.
pub fn get(name: &str, params: &[Param]) -> Result<CatalogEntry> {
    let params = resolve_params(name, params)?;
    let p = |k: &str| params.iter().find(|(n, _)| n == k).map(|(_, v)| *v).expect("resolved parameter");
    let mut entry = match name {
        "r3_abelian" => r3_abelian(),
        "e0tilde2" => e0tilde2(p("nu")),
        "su2_round" => su2_round(p("lambda")),
        "su2_diag" => su2_diag(p("lambda1"), p("lambda2"), p("lambda3")),
        "so_n" => so_n(p("n") as usize),
        "heisenberg3" => heisenberg3(),
        "sphere_so" => sphere_so(p("n") as usize),
        "sphere_u" => sphere_u(p("n") as usize, p("fiber")),
        "su2_plus_r1" => su2_plus_r1(),
        _ => unreachable!("names are validated by resolve_params"),
    }?;
    entry.params = params;
    Ok(entry)
}

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn v(xs: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(xs)
}

fn xyz() -> Vec<(String, DVector<f64>)> {
    vec![("x".into(), v(&[1.0, 0.0, 0.0])), ("y".into(), v(&[0.0, 1.0, 0.0])), ("z".into(), v(&[0.0, 0.0, 1.0]))]
}

fn su2_algebra() -> Result<LieAlgebra> {
    LieAlgebra::from_brackets(
        names(&["x", "y", "z"]),
        &[
            Bracket::new(0, 1, vec![0.0, 0.0, 1.0]),
            Bracket::new(0, 2, vec![0.0, -1.0, 0.0]),
            Bracket::new(1, 2, vec![1.0, 0.0, 0.0]),
        ],
    )
}

fn group_entry(name: &str, algebra: LieAlgebra, metric: InnerProduct) -> CatalogEntry {
    CatalogEntry {
        name: name.to_string(),
        params: vec![],
        algebra,
        metric,
        vectors: vec![],
        w_kind: None,
        homogeneous: None,
        expected: Expected::default(),
    }
}

fn r3_abelian() -> Result<CatalogEntry> {
    let a = LieAlgebra::from_brackets(names(&["x", "y", "z"]), &[])?;
    let mut e = group_entry("r3_abelian", a, InnerProduct::identity(3));
    e.vectors = [vec![("W_thm3".to_string(), v(&[1.0, 0.0, 0.0]))], xyz()].concat();
    e.w_kind = Some(WKind::Left);
    e.expected = Expected {
        sigma: lit(0.0),
        einstein: lit(true),
        killing_dim: lit(3),
        center_dim: built(3),
        invariant_dim: None,
    };
    Ok(e)
}

fn e0tilde2(nu: f64) -> Result<CatalogEntry> {
    let a = LieAlgebra::from_brackets(
        names(&["x", "y", "z"]),
        &[Bracket::new(0, 2, vec![0.0, 1.0, 0.0]), Bracket::new(1, 2, vec![-1.0, 0.0, 0.0])],
    )?;
    let mut e = group_entry("e0tilde2", a, InnerProduct::diagonal(&[1.0, 1.0, nu])?);
    e.vectors = [vec![("W_thm3".to_string(), v(&[0.0, 0.0, 1.0 / nu.sqrt()]))], xyz()].concat();
    e.w_kind = Some(WKind::Left);
    e.expected = Expected {
        sigma: oracle(0.0),
        einstein: lit(true),
        killing_dim: lit(1),
        center_dim: oracle(0),
        invariant_dim: None,
    };
    Ok(e)
}

fn su2_round(lambda: f64) -> Result<CatalogEntry> {
    let mut e = group_entry("su2_round", su2_algebra()?, InnerProduct::diagonal(&[lambda; 3])?);
    e.vectors = [vec![("W_thm3".to_string(), v(&[1.0 / lambda.sqrt(), 0.0, 0.0]))], xyz()].concat();
    e.w_kind = Some(WKind::Left);
    e.expected = Expected {
        sigma: oracle(0.5 / lambda),
        einstein: lit(true),
        killing_dim: lit(3),
        center_dim: oracle(0),
        invariant_dim: None,
    };
    Ok(e)
}

fn su2_diag(l1: f64, l2: f64, l3: f64) -> Result<CatalogEntry> {
    let mut e = group_entry("su2_diag", su2_algebra()?, InnerProduct::diagonal(&[l1, l2, l3])?);
    e.vectors = xyz();
    e.w_kind = Some(WKind::Left);
    // distinct eigenvalues admit no Killing field; a repeated pair admits the
    // third axis
    let distinct = [l1 != l2, l2 != l3, l1 != l3].iter().filter(|&&d| d).count();
    let killing = match distinct {
        0 => 3,
        3 => 0,
        _ => 1,
    };
    e.expected = Expected {
        sigma: if distinct == 0 { oracle(0.5 / l1) } else { None },
        einstein: oracle(distinct == 0),
        killing_dim: oracle(killing),
        center_dim: oracle(0),
        invariant_dim: None,
    };
    Ok(e)
}

fn heisenberg3() -> Result<CatalogEntry> {
    let a = LieAlgebra::from_brackets(names(&["x", "y", "z"]), &[Bracket::new(0, 1, vec![0.0, 0.0, 1.0])])?;
    let mut e = group_entry("heisenberg3", a, InnerProduct::identity(3));
    e.vectors = [vec![("W_thm3".to_string(), v(&[0.0, 0.0, 1.0]))], xyz()].concat();
    e.w_kind = Some(WKind::Central);
    e.expected = Expected {
        sigma: None,
        einstein: oracle(false),
        killing_dim: oracle(1),
        center_dim: oracle(1),
        invariant_dim: None,
    };
    Ok(e)
}

fn su2_plus_r1() -> Result<CatalogEntry> {
    let r1 = LieAlgebra::from_brackets(names(&["t"]), &[])?;
    let a = su2_algebra()?.direct_sum(&r1)?;
    let mut e = group_entry("su2_plus_r1", a, InnerProduct::identity(4));
    e.vectors = vec![("t".into(), v(&[0.0, 0.0, 0.0, 1.0])), ("x".into(), v(&[1.0, 0.0, 0.0, 0.0]))];
    e.w_kind = Some(WKind::Central);
    e.expected = Expected {
        sigma: None,
        einstein: oracle(false),
        killing_dim: oracle(4),
        center_dim: oracle(1),
        invariant_dim: None,
    };
    Ok(e)
}

/// Index of `E_ij` (`i < j`, 0-based) in the lexicographic basis of so(n).
fn so_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Structure constants of so(n) on `E_ij = e_i e_jᵀ − e_j e_iᵀ`:
/// `[E_ij, E_kl] = δ_jk E_il − δ_ik E_jl − δ_jl E_ik + δ_il E_jk`.
pub fn so_algebra(n: usize) -> Result<LieAlgebra> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let d = pairs.len();
    let basis_names: Vec<String> = pairs.iter().map(|(i, j)| format!("E{}_{}", i + 1, j + 1)).collect();
    // signed basis index of E_ab for a != b
    let signed = |a: usize, b: usize| if a < b { (so_index(n, a, b), 1.0) } else { (so_index(n, b, a), -1.0) };
    let mut c = vec![0.0; d * d * d];
    for (p, &(i, j)) in pairs.iter().enumerate() {
        for (q, &(k, l)) in pairs.iter().enumerate() {
            let mut add = |a: usize, b: usize, coef: f64| {
                if a != b {
                    let (idx, s) = signed(a, b);
                    c[(p * d + q) * d + idx] += coef * s;
                }
            };
            if j == k {
                add(i, l, 1.0);
            }
            if i == k {
                add(j, l, -1.0);
            }
            if j == l {
                add(i, k, -1.0);
            }
            if i == l {
                add(j, k, 1.0);
            }
        }
    }
    LieAlgebra::new(basis_names, c)
}

fn so_n(n: usize) -> Result<CatalogEntry> {
    let a = so_algebra(n)?;
    let d = a.dim();
    // −B = −(n−2) tr, and tr(E_ij E_ij) = −2
    let metric = InnerProduct::diagonal(&vec![2.0 * (n as f64 - 2.0); d])?;
    let w = crate::linalg::unit(d, 0) / (2.0 * (n as f64 - 2.0)).sqrt();
    let mut e = group_entry("so_n", a, metric);
    e.vectors = vec![("W_thm3".into(), w)];
    e.w_kind = Some(WKind::Right);
    e.expected = Expected {
        sigma: lit(0.25),
        einstein: lit(true),
        killing_dim: oracle(d),
        center_dim: oracle(0),
        invariant_dim: None,
    };
    Ok(e)
}

/// SO(n+1)/SO(n) with `𝔥` the stabilizer of the last coordinate and the
/// ambient form `−B`.
fn sphere_so(n: usize) -> Result<CatalogEntry> {
    let a = so_algebra(n + 1)?;
    let d = a.dim();
    let h_basis: Vec<DVector<f64>> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| crate::linalg::unit(d, so_index(n + 1, i, j)))
        .collect();
    let q = InnerProduct::diagonal(&vec![2.0 * (n as f64 - 1.0); d])?;
    let mut e = group_entry("sphere_so", a, q.clone());
    e.vectors = (0..n)
        .map(|i| (format!("m{}", i + 1), crate::linalg::unit(d, so_index(n + 1, i, n))))
        .collect();
    e.homogeneous = Some(HomogeneousData { h_basis, ambient_form: q, metric_m: None });
    e.expected = Expected {
        sigma: oracle(0.5),
        einstein: lit(true),
        killing_dim: None,
        center_dim: oracle(0),
        invariant_dim: oracle(0),
    };
    Ok(e)
}

/// Complex matrix as (real part, imaginary part).
type CMat = (DMatrix<f64>, DMatrix<f64>);

fn cmul(a: &CMat, b: &CMat) -> CMat {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

/// Basis of u(N): `iE_kk`, then for `k < l` the pair
/// `E_kl − E_lk`, `i(E_kl + E_lk)`.
fn u_basis(big_n: usize) -> (Vec<String>, Vec<CMat>) {
    let z = || DMatrix::<f64>::zeros(big_n, big_n);
    let mut names = Vec::new();
    let mut mats = Vec::new();
    for k in 0..big_n {
        let mut im = z();
        im[(k, k)] = 1.0;
        names.push(format!("d{}", k + 1));
        mats.push((z(), im));
    }
    for k in 0..big_n {
        for l in k + 1..big_n {
            let mut re = z();
            re[(k, l)] = 1.0;
            re[(l, k)] = -1.0;
            names.push(format!("a{}_{}", k + 1, l + 1));
            mats.push((re, z()));
            let mut im = z();
            im[(k, l)] = 1.0;
            im[(l, k)] = 1.0;
            names.push(format!("s{}_{}", k + 1, l + 1));
            mats.push((z(), im));
        }
    }
    (names, mats)
}

/// Coordinates of a skew-Hermitian matrix in [`u_basis`].
fn u_coords(big_n: usize, m: &CMat) -> DVector<f64> {
    let mut out = Vec::with_capacity(big_n * big_n);
    for k in 0..big_n {
        out.push(m.1[(k, k)]);
    }
    for k in 0..big_n {
        for l in k + 1..big_n {
            out.push(m.0[(k, l)]);
            out.push(m.1[(k, l)]);
        }
    }
    DVector::from_vec(out)
}

pub fn u_algebra(big_n: usize) -> Result<LieAlgebra> {
    let (names, mats) = u_basis(big_n);
    let d = mats.len();
    let mut c = vec![0.0; d * d * d];
    for i in 0..d {
        for j in 0..d {
            let ab = cmul(&mats[i], &mats[j]);
            let ba = cmul(&mats[j], &mats[i]);
            let coords = u_coords(big_n, &(ab.0 - ba.0, ab.1 - ba.1));
            for k in 0..d {
                c[(i * d + j) * d + k] = coords[k];
            }
        }
    }
    LieAlgebra::new(names, c)
}

/// U(n+1)/U(n) with `𝔥 = u(n)` acting on coordinates `2..n+1`. The
/// complement comes from the trace form; the metric on it is
/// `Re⟨X e₁, Y e₁⟩` (the unit round sphere) with the Hopf direction scaled
/// by `fiber`.
fn sphere_u(n: usize, fiber: f64) -> Result<CatalogEntry> {
    let big_n = n + 1;
    let a = u_algebra(big_n)?;
    let (names, mats) = u_basis(big_n);
    let d = a.dim();
    let fixes_first = |m: &CMat| (0..big_n).all(|r| m.0[(r, 0)] == 0.0 && m.1[(r, 0)] == 0.0 && m.0[(0, r)] == 0.0 && m.1[(0, r)] == 0.0);
    let h_idx: Vec<usize> = (0..d).filter(|&i| fixes_first(&mats[i])).collect();
    let h_basis: Vec<DVector<f64>> = h_idx.iter().map(|&i| crate::linalg::unit(d, i)).collect();
    // −Re tr(XY)
    let q = DMatrix::from_fn(d, d, |i, j| -cmul(&mats[i], &mats[j]).0.trace());
    let q = InnerProduct::from_symmetrized(q)?;

    let space = homog::build_reductive(&a, &h_basis, &q)?;
    let p = space.dim_m();
    let first_col = |v: &DVector<f64>| {
        let mut re = DVector::zeros(big_n);
        let mut im = DVector::zeros(big_n);
        for (c, m) in v.iter().zip(&mats) {
            if *c != 0.0 {
                re += m.0.column(0) * *c;
                im += m.1.column(0) * *c;
            }
        }
        (re, im)
    };
    let cols: Vec<_> = space.m_basis().iter().map(first_col).collect();
    let hopf = crate::linalg::unit(d, names.iter().position(|s| s == "d1").expect("d1 in basis"));
    let hopf_m = space.to_m_coords(&hopf)?;
    let mut metric = DMatrix::from_fn(p, p, |i, j| cols[i].0.dot(&cols[j].0) + cols[i].1.dot(&cols[j].1));
    if fiber != 1.0 {
        // rescale the Hopf direction, keeping its orthogonal complement
        let g0 = metric.clone();
        let gh = &g0 * &hopf_m;
        let hh = hopf_m.dot(&gh);
        metric = &g0 + (&gh * gh.transpose()) * ((fiber - 1.0) / hh);
    }
    let metric_m = InnerProduct::from_symmetrized(metric)?;

    let mut e = group_entry("sphere_u", a, q.clone());
    let horizontal = crate::linalg::unit(d, names.iter().position(|s| s == "a1_2").expect("a1_2 in basis"));
    e.vectors = vec![("hopf".into(), hopf), ("horizontal".into(), horizontal)];
    e.homogeneous = Some(HomogeneousData { h_basis, ambient_form: q, metric_m: Some(metric_m) });
    e.expected = Expected {
        sigma: if fiber == 1.0 { oracle(2.0 * n as f64) } else { None },
        einstein: oracle(fiber == 1.0),
        killing_dim: None,
        center_dim: oracle(1),
        invariant_dim: oracle(1),
    };
    Ok(e)
}
