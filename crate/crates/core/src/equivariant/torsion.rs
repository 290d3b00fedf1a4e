//! Pointwise torsion admissibility for user-supplied tensors.

use std::sync::OnceLock;

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;
use serde_json::Value;

use super::invariant::{admissible_torsion_module, torsion_setup, AdmissibleModule};
use super::{pair_index, pairs, EquivariantError, G2Frame, Model};
use crate::linalg::DenseMatrix;
use crate::octonion::{Octonions, DIM};
use crate::rep::Weight;
use crate::scalar::{parse_rational, Gq};

#[derive(Debug, Clone, PartialEq)]
pub enum TensorEntries {
    Exact(Vec<(usize, usize, usize, Gq)>),
    Float(Vec<(usize, usize, usize, Complex64)>),
}

/// Form `T(x, y, z)` alternating in `x, y`, stored as sparse entries
/// `T(e_a, e_b, e_c)` with `a < b` in standard coordinates. For `dim = 8`
/// slot 0 is the trivial summand and slot `k` is `e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    pub dim: usize,
    pub entries: TensorEntries,
}

fn shape(msg: impl Into<String>) -> EquivariantError {
    EquivariantError::ShapeMismatch(msg.into())
}

impl Tensor3 {
    /// Parses `{"dim": 7|8, "entries": [[a, b, c, re, im], ...]}`. String
    /// components are exact rationals; JSON numbers select the floating path.
    pub fn from_json(src: &str) -> Result<Self, EquivariantError> {
        let v: Value = serde_json::from_str(src).map_err(|e| shape(e.to_string()))?;
        let dim = v.get("dim").and_then(Value::as_u64).ok_or_else(|| shape("missing integer `dim`"))? as usize;
        Model::from_dim(dim).map_err(|_| shape(format!("dim must be 7 or 8, got {dim}")))?;
        let list = v.get("entries").and_then(Value::as_array).ok_or_else(|| shape("missing array `entries`"))?;
        let mut exact = Vec::new();
        let mut float = Vec::new();
        let mut any_float = false;
        for e in list {
            let arr = e.as_array().filter(|a| a.len() == 5).ok_or_else(|| shape(format!("entry {e} is not [a,b,c,re,im]")))?;
            let idx = |k: usize| -> Result<usize, EquivariantError> {
                let i = arr[k].as_u64().ok_or_else(|| shape(format!("index {} in {e}", arr[k])))? as usize;
                if i >= dim {
                    return Err(shape(format!("index {i} out of range for dim {dim}")));
                }
                Ok(i)
            };
            let (a, b, c) = (idx(0)?, idx(1)?, idx(2)?);
            if a >= b {
                return Err(shape(format!("entry {e} needs a < b")));
            }
            let comp = |x: &Value| -> Result<(Option<num_rational::BigRational>, f64), EquivariantError> {
                match x {
                    Value::String(s) => {
                        let r = parse_rational(s).map_err(|err| shape(err.to_string()))?;
                        let f = Gq::real(r.clone()).to_f64_pair().0;
                        Ok((Some(r), f))
                    }
                    Value::Number(n) => Ok((None, n.as_f64().ok_or_else(|| shape(format!("bad number {n}")))?)),
                    _ => Err(shape(format!("component {x} must be a string or number"))),
                }
            };
            let (re, im) = (comp(&arr[3])?, comp(&arr[4])?);
            float.push((a, b, c, Complex64::new(re.1, im.1)));
            match (re.0, im.0) {
                (Some(r), Some(i)) => exact.push((a, b, c, Gq::new(r, i))),
                _ => any_float = true,
            }
        }
        let entries = if any_float { TensorEntries::Float(float) } else { TensorEntries::Exact(exact) };
        Ok(Tensor3 { dim, entries })
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = match &self.entries {
            TensorEntries::Exact(es) => es
                .iter()
                .map(|(a, b, c, x)| serde_json::json!([a, b, c, x.re.to_string(), x.im.to_string()]))
                .collect(),
            TensorEntries::Float(es) => es.iter().map(|(a, b, c, x)| serde_json::json!([a, b, c, x.re, x.im])).collect(),
        };
        serde_json::json!({ "dim": self.dim, "entries": entries })
    }

    /// Dense coordinates `T(e_a, e_b, e_c)` indexed by `pair(a, b)·dim + c`.
    pub fn exact_coords(&self) -> Option<Vec<Gq>> {
        let TensorEntries::Exact(es) = &self.entries else { return None };
        let n = self.dim;
        let mut v = vec![Gq::zero(); n * (n - 1) / 2 * n];
        for (a, b, c, x) in es {
            v[pair_index(n, *a, *b) * n + c] += x;
        }
        Some(v)
    }

    pub fn float_coords(&self) -> Vec<Complex64> {
        let n = self.dim;
        let mut v = vec![Complex64::zero(); n * (n - 1) / 2 * n];
        match &self.entries {
            TensorEntries::Exact(es) => {
                for (a, b, c, x) in es {
                    let (re, im) = x.to_f64_pair();
                    v[pair_index(n, *a, *b) * n + c] += Complex64::new(re, im);
                }
            }
            TensorEntries::Float(es) => {
                for (a, b, c, x) in es {
                    v[pair_index(n, *a, *b) * n + c] += x;
                }
            }
        }
        v
    }

    pub fn from_exact_coords(dim: usize, coords: &[Gq]) -> Self {
        let mut es = Vec::new();
        for (a, b) in pairs(dim) {
            for c in 0..dim {
                let x = &coords[pair_index(dim, a, b) * dim + c];
                if !x.is_zero() {
                    es.push((a, b, c, x.clone()));
                }
            }
        }
        Tensor3 { dim, entries: TensorEntries::Exact(es) }
    }
}

/// `T(x, y, z) = ⟨x × y, z⟩` on `U`.
pub fn cross_product_tensor(o: &Octonions) -> Tensor3 {
    let mut es = Vec::new();
    for a in 0..DIM {
        for b in a + 1..DIM {
            if let Some((c, s)) = o.basis_product(a, b) {
                es.push((a, b, c, Gq::from(s)));
            }
        }
    }
    Tensor3 { dim: DIM, entries: TensorEntries::Exact(es) }
}

/// Tensor in standard coordinates from a form given in weight coordinates.
pub fn weight_form_to_tensor(model: Model, coords: &[Gq]) -> Tensor3 {
    let m = model_matrix(&G2Frame::standard().to_weight, model);
    Tensor3::from_exact_coords(model.dim(), &transform_form(model.dim(), &m, coords))
}

/// `dim × dim` change of basis on `W`, trivial slot fixed.
fn model_matrix(p: &DenseMatrix, model: Model) -> DenseMatrix {
    let n = model.dim();
    let k = model.offset();
    let mut out = vec![vec![Gq::zero(); n]; n];
    if k == 1 {
        out[0][0] = Gq::from(1);
    }
    for i in 0..DIM {
        for j in 0..DIM {
            out[i + k][j + k] = p[i][j].clone();
        }
    }
    out
}

/// Coordinates of the same form in the basis given by the columns of `p`:
/// `T'(a, b, c) = Σ T(i, j, k) p[i][a] p[j][b] p[k][c]`.
pub(crate) fn transform_form(n: usize, p: &DenseMatrix, t: &[Gq]) -> Vec<Gq> {
    let mut out = vec![Gq::zero(); t.len()];
    let ps = pairs(n);
    for (i, j) in ps.iter().copied() {
        for k in 0..n {
            let x = &t[pair_index(n, i, j) * n + k];
            if x.is_zero() {
                continue;
            }
            for (a, b) in ps.iter().copied() {
                let w2 = &(&p[i][a] * &p[j][b]) - &(&p[j][a] * &p[i][b]);
                if w2.is_zero() {
                    continue;
                }
                let xw = x * &w2;
                for c in 0..n {
                    if !p[k][c].is_zero() {
                        out[pair_index(n, a, b) * n + c] += &(&xw * &p[k][c]);
                    }
                }
            }
        }
    }
    out
}

fn transform_form_f64(n: usize, p: &[Vec<Complex64>], t: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::zero(); t.len()];
    let ps = pairs(n);
    for (i, j) in ps.iter().copied() {
        for k in 0..n {
            let x = t[pair_index(n, i, j) * n + k];
            if x == Complex64::zero() {
                continue;
            }
            for (a, b) in ps.iter().copied() {
                let w2 = p[i][a] * p[j][b] - p[j][a] * p[i][b];
                for c in 0..n {
                    out[pair_index(n, a, b) * n + c] += x * w2 * p[k][c];
                }
            }
        }
    }
    out
}

fn to_c64(m: &DenseMatrix) -> Vec<Vec<Complex64>> {
    m.iter()
        .map(|r| r.iter().map(|x| { let (a, b) = x.to_f64_pair(); Complex64::new(a, b) }).collect())
        .collect()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Admissible,
    NotAdmissible,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TensorComponent {
    pub irrep: Weight,
    /// Euclidean norm of the component in standard coordinates.
    pub norm: f64,
    /// Exact vanishing, when the input is exact.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorsionReport {
    pub dim: usize,
    pub exact: bool,
    pub verdict: Verdict,
    pub norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub module_dim: usize,
    pub components: Vec<TensorComponent>,
}

fn standard_module(model: Model) -> &'static AdmissibleModule {
    static U: OnceLock<AdmissibleModule> = OnceLock::new();
    static CU: OnceLock<AdmissibleModule> = OnceLock::new();
    let cell = if model == Model::U { &U } else { &CU };
    cell.get_or_init(|| admissible_torsion_module(model.dim(), &Gq::from(1)).expect("base flag is valid"))
}

/// Membership of `t` in the admissible module at the base flag: exact for
/// exact input, and `distance ≤ tol·‖t‖` for floating input.
pub fn torsion_check(t: &Tensor3, dim_case: usize, tol: f64) -> Result<TorsionReport, EquivariantError> {
    if t.dim != dim_case {
        return Err(shape(format!("tensor has dim {} but the check is for dim {dim_case}", t.dim)));
    }
    let model = Model::from_dim(dim_case)?;
    let frame = G2Frame::standard();
    let to_weight = model_matrix(&frame.to_standard, model);
    let to_standard = model_matrix(&frame.to_weight, model);
    let (_, dec) = torsion_setup(model);
    let module = standard_module(model);
    let n = model.dim();
    let fl = t.float_coords();
    let t_norm = norm(&fl);

    if let Some(coords) = t.exact_coords() {
        let tw = transform_form(n, &to_weight, &coords);
        let inside = module.subspace.contains(&tw);
        let components = dec
            .projectors
            .iter()
            .map(|(x, p)| {
                let comp = transform_form(n, &to_standard, &p.apply(&tw));
                let zero = comp.iter().all(Zero::is_zero);
                let f: Vec<Complex64> =
                    comp.iter().map(|z| { let (a, b) = z.to_f64_pair(); Complex64::new(a, b) }).collect();
                TensorComponent { irrep: *x, norm: norm(&f), zero: Some(zero) }
            })
            .collect();
        return Ok(TorsionReport {
            dim: n,
            exact: true,
            verdict: if inside { Verdict::Admissible } else { Verdict::NotAdmissible },
            norm: t_norm,
            distance: None,
            tolerance: None,
            module_dim: module.dim,
            components,
        });
    }

    // Orthonormal basis of the module in standard coordinates.
    let mut ortho: Vec<Vec<Complex64>> = Vec::new();
    let ts64 = to_c64(&to_standard);
    for b in &module.subspace.basis {
        let dense: Vec<Complex64> = b
            .to_dense(module.subspace.ambient)
            .iter()
            .map(|z| { let (a, c) = z.to_f64_pair(); Complex64::new(a, c) })
            .collect();
        let mut v = transform_form_f64(n, &ts64, &dense);
        for _ in 0..2 {
            for q in &ortho {
                let c: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= c * qi;
                }
            }
        }
        let nv = norm(&v);
        if nv > 1e-12 {
            ortho.push(v.iter().map(|x| x / nv).collect());
        }
    }
    let mut resid = fl.clone();
    for q in &ortho {
        let c: Complex64 = q.iter().zip(&resid).map(|(a, b)| a.conj() * b).sum();
        for (ri, qi) in resid.iter_mut().zip(q) {
            *ri -= c * qi;
        }
    }
    let distance = norm(&resid);
    let tw = transform_form_f64(n, &to_c64(&to_weight), &fl);
    let components = dec
        .projectors
        .iter()
        .map(|(x, p)| {
            let pc: Vec<Complex64> = p
                .rows
                .iter()
                .map(|r| r.entries.iter().map(|(j, z)| { let (a, b) = z.to_f64_pair(); Complex64::new(a, b) * tw[*j] }).sum())
                .collect();
            TensorComponent { irrep: *x, norm: norm(&transform_form_f64(n, &ts64, &pc)), zero: None }
        })
        .collect();
    Ok(TorsionReport {
        dim: n,
        exact: false,
        verdict: if distance <= tol * t_norm { Verdict::Admissible } else { Verdict::NotAdmissible },
        norm: t_norm,
        distance: Some(distance),
        tolerance: Some(tol),
        module_dim: module.dim,
        components,
    })
}
