//! Explicit representations of the derivation algebra on tensor spaces,
//! Casimir projectors, maximal invariant subspaces and the pointwise
//! admissibility tests for torsion and curvature.
//!
//! All spaces are written in the weight basis of `U` coming from the split
//! Cartan subalgebra, so the torus acts diagonally and every generator is
//! sparse. Tensors are multilinear forms; their coordinates are the values
//! on basis vectors.

mod casimir;
mod invariant;
mod torsion;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{self, DenseMatrix, SparseMatrix};
use crate::octonion::{span_coordinates, CartanData, Octonions, DIM};
use crate::rep::{self, w, IrrepSum};
use crate::scalar::Gq;

pub use casimir::{casimir, isotypic_decompose, ComponentReport, IsotypicDecomposition, IsotypicReport};
pub use invariant::{
    admissible_torsion_module, admissible_torsion_module_with, curvature_check, curvature_check_with,
    max_invariant_subspace, torsion_setup, AdmissibleModule, CurvatureReport, Flag, InvariantSubspace,
};
pub use torsion::{cross_product_tensor, torsion_check, weight_form_to_tensor, Tensor3, TensorEntries, TorsionReport, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivariantError {
    #[error("unknown representation space `{0}`")]
    UnknownSpace(String),
    #[error("trace form of the seven-dimensional representation is degenerate")]
    DegenerateTraceForm,
    #[error("Casimir eigenvalues of {0} and {1} coincide")]
    CollidingEigenvalues(String, String),
    #[error("Casimir spectrum differs from the expected decomposition: {0}")]
    SpectrumMismatch(String),
    #[error("trivialization scale must be nonzero")]
    BadScale,
    #[error("dimension case must be 7 or 8, got {0}")]
    BadDimCase(usize),
    #[error("tensor shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Octonion(#[from] crate::octonion::OctonionError),
}

/// Model vector space `W`: `U` itself or `C ⊕ U` with the trivial slot first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Model {
    U,
    CU,
}

impl Model {
    pub fn from_dim(d: usize) -> Result<Self, EquivariantError> {
        match d {
            7 => Ok(Model::U),
            8 => Ok(Model::CU),
            _ => Err(EquivariantError::BadDimCase(d)),
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Model::U => DIM,
            Model::CU => DIM + 1,
        }
    }

    /// Offset of the first `U` slot.
    pub fn offset(self) -> usize {
        self.dim() - DIM
    }

    /// Decomposition of `W`.
    pub fn irreps(self) -> IrrepSum {
        let mut s = IrrepSum::single(w(1, 0));
        if self == Model::CU {
            s.add(w(0, 0), 1);
        }
        s
    }
}

/// Representation spaces in scope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SpaceSpec {
    /// `U`.
    Seven,
    /// Forms on `W × W × W` alternating in the first two slots: `Λ²W* ⊗ W*`.
    Torsion(Model),
    /// `Λ²W* ⊗ g2`.
    Curvature(Model),
}

impl FromStr for SpaceSpec {
    type Err = EquivariantError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "U" => Ok(SpaceSpec::Seven),
            "L2U*xU" => Ok(SpaceSpec::Torsion(Model::U)),
            "L2(C+U)*x(C+U)" => Ok(SpaceSpec::Torsion(Model::CU)),
            "L2U*xg2" => Ok(SpaceSpec::Curvature(Model::U)),
            "L2(C+U)*xg2" => Ok(SpaceSpec::Curvature(Model::CU)),
            _ => Err(EquivariantError::UnknownSpace(s.to_string())),
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SpaceSpec::Seven => "U",
            SpaceSpec::Torsion(Model::U) => "L2U*xU",
            SpaceSpec::Torsion(Model::CU) => "L2(C+U)*x(C+U)",
            SpaceSpec::Curvature(Model::U) => "L2U*xg2",
            SpaceSpec::Curvature(Model::CU) => "L2(C+U)*xg2",
        };
        write!(f, "{s}")
    }
}

impl SpaceSpec {
    /// Expected decomposition, computed combinatorially.
    pub fn expected(self) -> IrrepSum {
        let wedge_dual = |m: Model| {
            // Λ²(C ⊕ U) = U ⊕ Λ²U.
            let mut s = rep::lambda2(w(1, 0)).expect("dominant");
            if m == Model::CU {
                s.add(w(1, 0), 1);
            }
            s
        };
        let times = |a: &IrrepSum, b: &IrrepSum| {
            let mut out = IrrepSum::new();
            for (x, k) in a.iter() {
                out = out.plus(&rep::tensor_with_sum(x, b).expect("dominant").scaled(k));
            }
            out
        };
        match self {
            SpaceSpec::Seven => IrrepSum::single(w(1, 0)),
            SpaceSpec::Torsion(m) => times(&wedge_dual(m), &m.irreps()),
            SpaceSpec::Curvature(m) => times(&wedge_dual(m), &IrrepSum::single(w(0, 1))),
        }
    }
}

/// Derivation algebra in the weight basis, with change-of-basis data.
#[derive(Debug, Clone)]
pub struct G2Frame {
    pub cartan: CartanData,
    /// Columns are the weight vectors, in standard coordinates.
    pub to_standard: DenseMatrix,
    pub to_weight: DenseMatrix,
    /// The 14 Chevalley generators acting on weight coordinates of `U`.
    pub generators: Vec<DenseMatrix>,
}

impl G2Frame {
    pub fn new(o: &Octonions) -> Result<Self, EquivariantError> {
        let cartan = o.cartan_weights()?;
        let to_standard = cartan.weight_basis_matrix();
        let to_weight = linalg::inverse(&to_standard).ok_or(EquivariantError::DegenerateTraceForm)?;
        let generators = cartan
            .chevalley_basis()
            .iter()
            .map(|x| linalg::mat_mul(&to_weight, &linalg::mat_mul(x, &to_standard)))
            .collect();
        Ok(Self { cartan, to_standard, to_weight, generators })
    }

    /// Frame over the standard multiplication table (computed once).
    pub fn standard() -> &'static G2Frame {
        static FRAME: OnceLock<G2Frame> = OnceLock::new();
        FRAME.get_or_init(|| G2Frame::new(&Octonions::standard()).expect("standard table has a split Cartan"))
    }

    /// Generators acting on weight coordinates of `W`.
    pub fn model_generators(&self, m: Model) -> Vec<DenseMatrix> {
        let k = m.offset();
        self.generators
            .iter()
            .map(|x| {
                let mut out = vec![vec![Gq::zero(); m.dim()]; m.dim()];
                for i in 0..DIM {
                    for j in 0..DIM {
                        out[i + k][j + k] = x[i][j].clone();
                    }
                }
                out
            })
            .collect()
    }

    /// `ad` matrices on generator coordinates: column `μ` holds `[x, X_μ]`.
    pub fn adjoint(&self) -> Vec<DenseMatrix> {
        let n = self.generators.len();
        self.generators
            .iter()
            .map(|x| {
                let cols: Vec<Vec<Gq>> = self
                    .generators
                    .iter()
                    .map(|y| span_coordinates(&self.generators, &commutator(x, y)).expect("bracket closes"))
                    .collect();
                (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
            })
            .collect()
    }

    /// Weight coordinates of a standard-coordinate vector of `W`.
    pub fn vector_to_weight(&self, m: Model, v: &[Gq]) -> Vec<Gq> {
        change_model_basis(&self.to_weight, m, v)
    }

    pub fn vector_to_standard(&self, m: Model, v: &[Gq]) -> Vec<Gq> {
        change_model_basis(&self.to_standard, m, v)
    }
}

fn change_model_basis(p: &DenseMatrix, m: Model, v: &[Gq]) -> Vec<Gq> {
    let k = m.offset();
    let mut out = v.to_vec();
    let inner = linalg::mat_vec(p, &v[k..]);
    out[k..].clone_from_slice(&inner);
    out
}

pub(crate) fn commutator(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let ab = linalg::mat_mul(a, b);
    let ba = linalg::mat_mul(b, a);
    ab.iter().zip(&ba).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

/// Index of the pair `a < b` among pairs of `0..n` in lexicographic order.
pub fn pair_index(n: usize, a: usize, b: usize) -> usize {
    debug_assert!(a < b && b < n);
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

#[derive(Debug, Clone)]
pub struct MatrixRep {
    pub spec: SpaceSpec,
    pub dim: usize,
    /// Images of the 14 Chevalley generators, in the order of the frame.
    pub generators: Vec<SparseMatrix>,
    /// Basis labels: `a^b|c` for alternating pairs and a third slot.
    pub labels: Vec<String>,
}

/// Action on `Λ²W* ⊗ V` given the action `A` on `W` and `B` on `V`.
fn wedge_dual_tensor(a: &DenseMatrix, b: &DenseMatrix) -> SparseMatrix {
    let n = a.len();
    let nv = b.len();
    let np = n * (n - 1) / 2;
    let dim = np * nv;
    let mut rows: Vec<std::collections::BTreeMap<usize, Gq>> = vec![Default::default(); dim];
    let mut put = |row: usize, col: usize, x: Gq| {
        if !x.is_zero() {
            *rows[row].entry(col).or_insert_with(Gq::zero) += &x;
        }
    };
    // Dual action on W*: e^a ↦ −Σ_d A[a][d] e^d.
    for (a0, b0) in pairs(n) {
        let p = pair_index(n, a0, b0);
        for v in 0..nv {
            let col = p * nv + v;
            for d in 0..n {
                let coef = -&a[a0][d];
                if !coef.is_zero() && d != b0 {
                    let (s, (x, y)) = if d < b0 { (1, (d, b0)) } else { (-1, (b0, d)) };
                    put(pair_index(n, x, y) * nv + v, col, if s > 0 { coef.clone() } else { -coef.clone() });
                }
                let coef = -&a[b0][d];
                if !coef.is_zero() && d != a0 {
                    let (s, (x, y)) = if a0 < d { (1, (a0, d)) } else { (-1, (d, a0)) };
                    put(pair_index(n, x, y) * nv + v, col, if s > 0 { coef } else { -coef });
                }
            }
            for (u, row) in b.iter().enumerate() {
                put(p * nv + u, col, row[v].clone());
            }
        }
    }
    SparseMatrix {
        n: dim,
        rows: rows.into_iter().map(crate::linalg::SparseVec::from_map).collect(),
    }
}

fn dual_action(a: &DenseMatrix) -> DenseMatrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| -&a[j][i]).collect()).collect()
}

/// Builds the representation on one of the spaces in scope.
pub fn rep_on(spec: SpaceSpec) -> MatrixRep {
    rep_on_frame(spec, G2Frame::standard())
}

pub fn rep_on_frame(spec: SpaceSpec, frame: &G2Frame) -> MatrixRep {
    let slot = |m: Model, i: usize| if m == Model::CU && i == 0 { "c".to_string() } else { format!("f{}", i - m.offset()) };
    match spec {
        SpaceSpec::Seven => MatrixRep {
            spec,
            dim: DIM,
            generators: frame.generators.iter().map(|x| SparseMatrix::from_dense(x)).collect(),
            labels: (0..DIM).map(|i| format!("f{i}")).collect(),
        },
        SpaceSpec::Torsion(m) => {
            let gens = frame.model_generators(m);
            let n = m.dim();
            let generators = gens.iter().map(|a| wedge_dual_tensor(a, &dual_action(a))).collect();
            let labels = pairs(n)
                .into_iter()
                .flat_map(|(a, b)| (0..n).map(move |c| (a, b, c)))
                .map(|(a, b, c)| format!("{}^{}|{}", slot(m, a), slot(m, b), slot(m, c)))
                .collect();
            MatrixRep { spec, dim: n * (n - 1) / 2 * n, generators, labels }
        }
        SpaceSpec::Curvature(m) => {
            let gens = frame.model_generators(m);
            let ad = frame.adjoint();
            let n = m.dim();
            let generators = gens.iter().zip(&ad).map(|(a, b)| wedge_dual_tensor(a, b)).collect();
            let labels = pairs(n)
                .into_iter()
                .flat_map(|(a, b)| (0..ad.len()).map(move |mu| (a, b, mu)))
                .map(|(a, b, mu)| format!("{}^{}|X{mu}", slot(m, a), slot(m, b)))
                .collect();
            MatrixRep { spec, dim: n * (n - 1) / 2 * ad.len(), generators, labels }
        }
    }
}

impl MatrixRep {
    /// Checks `[ρ(X_i), ρ(X_j)] = ρ([X_i, X_j])` for the given index pairs.
    pub fn is_homomorphism_on(&self, frame: &G2Frame, pairs: &[(usize, usize)]) -> bool {
        pairs.iter().all(|&(i, j)| {
            let c = span_coordinates(&frame.generators, &commutator(&frame.generators[i], &frame.generators[j]))
                .expect("bracket closes");
            let mut rhs = SparseMatrix::zero(self.dim);
            for (k, ck) in c.iter().enumerate() {
                if !ck.is_zero() {
                    rhs = rhs.add_scaled(&self.generators[k], ck);
                }
            }
            self.generators[i].commutator(&self.generators[j]) == rhs
        })
    }
}
