//! Truncated multivariate Taylor polynomials ("jets") for exact-in-exact-
//! arithmetic derivatives of the chart quantities.
//!
//! A [`JetSpace`] fixes the variables and the truncation: total degree at
//! most `max_deg`, and degree at most `max_xdeg` in the first `n_x`
//! variables. Both conditions describe an ideal of monomials, so ring
//! operations followed by truncation are consistent. The numeric code in
//! [`crate::chart`] is written once against [`Arith`] and runs either on
//! plain `f64` values or on jets.

use std::collections::HashMap;

/// Ring operations needed by the generic chart code.
pub trait Arith {
    type T: Clone;
    fn zero(&self) -> Self::T;
    fn constant(&self, c: f64) -> Self::T;
    fn add(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn sub(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn mul(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn scale(&self, a: &Self::T, c: f64) -> Self::T;
    fn recip(&self, a: &Self::T) -> Self::T;
    /// Constant term (the value at the expansion point).
    fn value(&self, a: &Self::T) -> f64;

    fn add_assign(&self, a: &mut Self::T, b: &Self::T) {
        *a = self.add(a, b);
    }
    /// `a += b * c`
    fn fma_assign(&self, a: &mut Self::T, b: &Self::T, c: &Self::T) {
        *a = self.add(a, &self.mul(b, c));
    }
}

/// Plain floating-point evaluation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Real;

impl Arith for Real {
    type T = f64;
    fn zero(&self) -> f64 {
        0.0
    }
    fn constant(&self, c: f64) -> f64 {
        c
    }
    fn add(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }
    fn sub(&self, a: &f64, b: &f64) -> f64 {
        a - b
    }
    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a * b
    }
    fn scale(&self, a: &f64, c: f64) -> f64 {
        a * c
    }
    fn recip(&self, a: &f64) -> f64 {
        1.0 / a
    }
    fn value(&self, a: &f64) -> f64 {
        *a
    }
    fn fma_assign(&self, a: &mut f64, b: &f64, c: &f64) {
        *a += b * c;
    }
}

/// Dense coefficient vector over the monomials of a [`JetSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub coeffs: Vec<f64>,
}

type Exponents = Vec<u8>;

#[derive(Debug, Clone)]
pub struct JetSpace {
    n_vars: usize,
    max_deg: usize,
    monomials: Vec<Exponents>,
    index: HashMap<Exponents, usize>,
    // (a, b, out) with monomial(a) * monomial(b) = monomial(out)
    mul_table: Vec<(u32, u32, u32)>,
}

impl JetSpace {
    /// Jets in `n_vars` variables with total degree `<= max_deg`; the first
    /// `n_x` variables additionally have joint degree `<= max_xdeg`.
    pub fn new(n_vars: usize, n_x: usize, max_deg: usize, max_xdeg: usize) -> Self {
        assert!(n_x <= n_vars);
        let mut monomials = Vec::new();
        let mut current = vec![0u8; n_vars];
        for deg in 0..=max_deg {
            enumerate(&mut monomials, &mut current, 0, deg, n_x, max_xdeg);
        }
        let index: HashMap<Exponents, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut mul_table = Vec::new();
        let mut prod = vec![0u8; n_vars];
        for (a, ma) in monomials.iter().enumerate() {
            let da: usize = ma.iter().map(|&e| e as usize).sum();
            for (b, mb) in monomials.iter().enumerate() {
                let db: usize = mb.iter().map(|&e| e as usize).sum();
                if da + db > max_deg {
                    // monomials are graded, later ones only have larger degree
                    break;
                }
                for v in 0..n_vars {
                    prod[v] = ma[v] + mb[v];
                }
                if let Some(&out) = index.get(&prod) {
                    mul_table.push((a as u32, b as u32, out as u32));
                }
            }
        }
        Self { n_vars, max_deg, monomials, index, mul_table }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn max_deg(&self) -> usize {
        self.max_deg
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// The jet of the coordinate function `value + d(var)`.
    pub fn variable(&self, var: usize, value: f64) -> Jet {
        let mut j = self.constant(value);
        let mut e = vec![0u8; self.n_vars];
        e[var] = 1;
        if let Some(&i) = self.index.get(&e) {
            j.coeffs[i] = 1.0;
        }
        j
    }

    fn index_of(&self, exps: &[u8]) -> Option<usize> {
        self.index.get(exps).copied()
    }

    /// Partial derivative at the expansion point for the multi-index `exps`
    /// (coefficient times the product of factorials). Zero when truncated.
    pub fn derivative_at(&self, jet: &Jet, exps: &[u8]) -> f64 {
        match self.index_of(exps) {
            Some(i) => jet.coeffs[i] * exps.iter().map(|&e| factorial(e)).product::<f64>(),
            None => 0.0,
        }
    }

    /// `∂/∂var` of `jet`, re-expanded in `target` (which must have the same
    /// variables and a degree bound at most `max_deg - 1` to be exact).
    pub fn differentiate(&self, jet: &Jet, var: usize, target: &JetSpace) -> Jet {
        debug_assert_eq!(self.n_vars, target.n_vars);
        let mut out = target.zero();
        let mut e = vec![0u8; self.n_vars];
        for (i, m) in self.monomials.iter().enumerate() {
            let c = jet.coeffs[i];
            if c == 0.0 || m[var] == 0 {
                continue;
            }
            e.copy_from_slice(m);
            e[var] -= 1;
            if let Some(t) = target.index_of(&e) {
                out.coeffs[t] += c * m[var] as f64;
            }
        }
        out
    }

    /// Re-expands `jet` into `target`. Variables are matched by position;
    /// extra target variables are absent from the source, and monomials not
    /// representable in the target are dropped.
    pub fn transfer(&self, jet: &Jet, target: &JetSpace) -> Jet {
        let mut out = target.zero();
        let mut e = vec![0u8; target.n_vars];
        'outer: for (i, m) in self.monomials.iter().enumerate() {
            let c = jet.coeffs[i];
            if c == 0.0 {
                continue;
            }
            e.iter_mut().for_each(|x| *x = 0);
            for (v, &p) in m.iter().enumerate() {
                if v < target.n_vars {
                    e[v] = p;
                } else if p != 0 {
                    continue 'outer;
                }
            }
            if let Some(t) = target.index_of(&e) {
                out.coeffs[t] += c;
            }
        }
        out
    }

    /// Maps source variable `v` to target variable `var_map[v]`.
    pub fn transfer_mapped(&self, jet: &Jet, target: &JetSpace, var_map: &[usize]) -> Jet {
        let mut out = target.zero();
        let mut e = vec![0u8; target.n_vars];
        for (i, m) in self.monomials.iter().enumerate() {
            let c = jet.coeffs[i];
            if c == 0.0 {
                continue;
            }
            e.iter_mut().for_each(|x| *x = 0);
            for (v, &p) in m.iter().enumerate() {
                e[var_map[v]] += p;
            }
            if let Some(t) = target.index_of(&e) {
                out.coeffs[t] += c;
            }
        }
        out
    }
}

fn factorial(e: u8) -> f64 {
    (1..=e as u32).map(|k| k as f64).product()
}

fn enumerate(out: &mut Vec<Exponents>, current: &mut Exponents, var: usize, remaining: usize, n_x: usize, max_xdeg: usize) {
    if var == current.len() {
        if remaining == 0 {
            let xdeg: usize = current[..n_x].iter().map(|&e| e as usize).sum();
            if xdeg <= max_xdeg {
                out.push(current.clone());
            }
        }
        return;
    }
    for p in (0..=remaining).rev() {
        current[var] = p as u8;
        enumerate(out, current, var + 1, remaining - p, n_x, max_xdeg);
    }
    current[var] = 0;
}

impl Arith for JetSpace {
    type T = Jet;

    fn zero(&self) -> Jet {
        Jet { coeffs: vec![0.0; self.monomials.len()] }
    }

    fn constant(&self, c: f64) -> Jet {
        let mut j = self.zero();
        j.coeffs[0] = c;
        j
    }

    fn add(&self, a: &Jet, b: &Jet) -> Jet {
        Jet { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect() }
    }

    fn sub(&self, a: &Jet, b: &Jet) -> Jet {
        Jet { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect() }
    }

    fn mul(&self, a: &Jet, b: &Jet) -> Jet {
        let mut out = self.zero();
        self.mul_into(&mut out, a, b);
        out
    }

    fn scale(&self, a: &Jet, c: f64) -> Jet {
        Jet { coeffs: a.coeffs.iter().map(|x| x * c).collect() }
    }

    /// `1/a` via the geometric series in the non-constant part.
    fn recip(&self, a: &Jet) -> Jet {
        let a0 = a.coeffs[0];
        let inv0 = 1.0 / a0;
        let mut delta = self.scale(a, -inv0);
        delta.coeffs[0] = 0.0;
        // 1/a = inv0 * Σ_k delta^k
        let mut sum = self.constant(1.0);
        let mut term = self.constant(1.0);
        for _ in 0..self.max_deg {
            term = self.mul(&term, &delta);
            sum = self.add(&sum, &term);
        }
        self.scale(&sum, inv0)
    }

    fn value(&self, a: &Jet) -> f64 {
        a.coeffs[0]
    }

    fn add_assign(&self, a: &mut Jet, b: &Jet) {
        a.coeffs.iter_mut().zip(&b.coeffs).for_each(|(x, y)| *x += y);
    }

    fn fma_assign(&self, a: &mut Jet, b: &Jet, c: &Jet) {
        self.mul_into(a, b, c);
    }
}

impl JetSpace {
    /// `out += a * b`
    fn mul_into(&self, out: &mut Jet, a: &Jet, b: &Jet) {
        let (ac, bc) = (&a.coeffs, &b.coeffs);
        for &(i, j, k) in &self.mul_table {
            let x = ac[i as usize];
            if x != 0.0 {
                out.coeffs[k as usize] += x * bc[j as usize];
            }
        }
    }
}

/// Row-major square matrices over an [`Arith`] scalar.
pub mod mat {
    use super::Arith;

    pub fn identity<A: Arith>(ar: &A, n: usize) -> Vec<A::T> {
        (0..n * n).map(|i| if i / n == i % n { ar.constant(1.0) } else { ar.zero() }).collect()
    }

    pub fn mul<A: Arith>(ar: &A, a: &[A::T], b: &[A::T], n: usize) -> Vec<A::T> {
        let mut out = vec![ar.zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = &a[i * n + k];
                for j in 0..n {
                    ar.fma_assign(&mut out[i * n + j], aik, &b[k * n + j]);
                }
            }
        }
        out
    }

    pub fn transpose<A: Arith>(a: &[A::T], n: usize) -> Vec<A::T> {
        (0..n * n).map(|idx| a[(idx % n) * n + idx / n].clone()).collect()
    }

    pub fn mul_vec<A: Arith>(ar: &A, a: &[A::T], v: &[A::T], n: usize) -> Vec<A::T> {
        (0..n)
            .map(|i| {
                let mut s = ar.zero();
                for k in 0..n {
                    ar.fma_assign(&mut s, &a[i * n + k], &v[k]);
                }
                s
            })
            .collect()
    }

    /// Solves `a x = b` by Gauss-Jordan elimination with partial pivoting on
    /// the constant parts. Returns `None` if a pivot is exactly zero.
    pub fn solve<A: Arith>(ar: &A, a: &[A::T], b: &[A::T], n: usize) -> Option<Vec<A::T>> {
        let mut m = a.to_vec();
        let mut rhs = b.to_vec();
        for col in 0..n {
            let piv = (col..n).max_by(|&r, &s| ar.value(&m[r * n + col]).abs().total_cmp(&ar.value(&m[s * n + col]).abs()))?;
            if ar.value(&m[piv * n + col]) == 0.0 {
                return None;
            }
            if piv != col {
                for j in 0..n {
                    m.swap(piv * n + j, col * n + j);
                }
                rhs.swap(piv, col);
            }
            let inv = ar.recip(&m[col * n + col]);
            for j in 0..n {
                m[col * n + j] = ar.mul(&m[col * n + j], &inv);
            }
            rhs[col] = ar.mul(&rhs[col], &inv);
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = m[r * n + col].clone();
                for j in 0..n {
                    let t = ar.mul(&f, &m[col * n + j]);
                    m[r * n + j] = ar.sub(&m[r * n + j], &t);
                }
                let t = ar.mul(&f, &rhs[col]);
                rhs[r] = ar.sub(&rhs[r], &t);
            }
        }
        Some(rhs)
    }

    /// Inverse via column-by-column solves.
    pub fn inverse<A: Arith>(ar: &A, a: &[A::T], n: usize) -> Option<Vec<A::T>> {
        let mut inv = vec![ar.zero(); n * n];
        for c in 0..n {
            let e: Vec<A::T> = (0..n).map(|i| if i == c { ar.constant(1.0) } else { ar.zero() }).collect();
            let col = solve(ar, a, &e, n)?;
            for (r, v) in col.into_iter().enumerate() {
                inv[r * n + c] = v;
            }
        }
        Some(inv)
    }
}
