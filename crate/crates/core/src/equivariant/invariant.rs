//! Largest invariant subspaces and the admissible torsion and curvature
//! modules at the base point.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::Zero;
use serde::Serialize;

use super::casimir::{isotypic_decompose, IsotypicDecomposition, IsotypicReport, ComponentReport};
use super::{pair_index, pairs, rep_on, EquivariantError, G2Frame, MatrixRep, Model, SpaceSpec};
use crate::linalg::{EchelonBasis, SparseMatrix, SparseVec};
use crate::octonion::{OctVector, Octonions, Subspace};
use crate::rep::{w, weyl_dim, IrrepSum};
use crate::scalar::Gq;

/// A subspace cut out by a generator-closed set of linear functionals.
#[derive(Debug, Clone)]
pub struct InvariantSubspace {
    pub ambient: usize,
    pub annihilator: EchelonBasis,
    pub basis: Vec<SparseVec>,
}

impl InvariantSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[Gq]) -> bool {
        self.annihilator.rows().all(|r| r.dot(v).is_zero())
    }

    /// Every generator maps every basis vector back into the subspace.
    pub fn is_invariant(&self, rep: &MatrixRep) -> bool {
        self.basis.iter().all(|b| {
            let v = b.to_dense(self.ambient);
            rep.generators.iter().all(|g| self.contains(&g.apply(&v)))
        })
    }
}

/// Largest invariant subspace inside `{v : φ(v) = 0 for all constraints φ}`:
/// the span of the constraints is closed under `φ ↦ φ ∘ g` for all
/// generators, and the result is its common kernel.
pub fn max_invariant_subspace(rep: &MatrixRep, constraints: &[SparseVec]) -> InvariantSubspace {
    // Diagonal generators grade the coordinates; the closure of a graded
    // set of functionals under the remaining generators stays graded, so
    // echelon reduction only mixes functionals of equal weight.
    let (diag, moving): (Vec<&SparseMatrix>, Vec<&SparseMatrix>) =
        rep.generators.iter().partition(|g| g.rows.iter().enumerate().all(|(i, r)| r.entries.iter().all(|(j, _)| *j == i)));
    let mut grades: Vec<Vec<Gq>> = Vec::new();
    let grade: Vec<usize> = (0..rep.dim)
        .map(|i| {
            let g: Vec<Gq> = diag.iter().map(|d| d.get(i, i)).collect();
            grades.iter().position(|h| *h == g).unwrap_or_else(|| {
                grades.push(g);
                grades.len() - 1
            })
        })
        .collect();
    let mut ann = EchelonBasis::new(rep.dim);
    let mut queue: Vec<SparseVec> = Vec::new();
    for c in constraints {
        let mut parts: BTreeMap<usize, Vec<(usize, Gq)>> = BTreeMap::new();
        for (j, x) in &c.entries {
            parts.entry(grade[*j]).or_default().push((*j, x.clone()));
        }
        for (_, entries) in parts {
            let v = SparseVec { entries };
            if ann.insert(&v) {
                queue.push(v);
            }
        }
    }
    while let Some(phi) = queue.pop() {
        for g in &moving {
            let psi = g.left_apply(&phi);
            if ann.insert(&psi) {
                queue.push(psi);
            }
        }
    }
    let basis = ann.kernel();
    InvariantSubspace { ambient: rep.dim, annihilator: ann, basis }
}

/// `E⊥` embedded in `W`, and its metric annihilator `normal` in `W`, in
/// weight coordinates. For `W = U` the annihilator is `E`. For `W = C ⊕ U`,
/// `E⊥` is the graph of a functional that vanishes on `E` and takes the value
/// `scale` on a fixed vector `v` of `E⊥ ∖ E`, and the annihilator is
/// `E + span(1, -scale·v/⟨v,v⟩)`.
#[derive(Debug, Clone)]
pub struct Flag {
    pub model: Model,
    pub scale: Gq,
    pub normal: Vec<Vec<Gq>>,
    pub eperp: Vec<Vec<Gq>>,
}

impl Flag {
    pub fn new(frame: &G2Frame, model: Model, assoc: &Subspace, scale: &Gq) -> Result<Self, EquivariantError> {
        if scale.is_zero() {
            return Err(EquivariantError::BadScale);
        }
        let perp = assoc.perp();
        let extra = perp
            .basis()
            .iter()
            .find(|v| !assoc.contains(v))
            .cloned()
            .ok_or(crate::octonion::OctonionError::Degenerate)?;
        let lift = |v: &OctVector, c: Gq| {
            let mut out = Vec::with_capacity(model.dim());
            if model == Model::CU {
                out.push(c);
            }
            out.extend(v.0.iter().cloned());
            frame.vector_to_weight(model, &out)
        };
        let e: Vec<Vec<Gq>> = assoc.basis().iter().map(|v| lift(v, Gq::zero())).collect();
        let mut eperp = e.clone();
        eperp.push(lift(&extra, scale.clone()));
        let mut normal = e;
        if model == Model::CU {
            let q = Octonions::standard().bilinear(&extra, &extra);
            let c = &(&Gq::zero() - scale) * &q.inv();
            normal.push(lift(&extra.scale(&c), Gq::from(1)));
        }
        Ok(Self { model, scale: scale.clone(), normal, eperp })
    }

    /// The base flag of the Cartan frame.
    pub fn base(frame: &G2Frame, model: Model, scale: &Gq) -> Result<Self, EquivariantError> {
        Self::new(frame, model, &frame.cartan.base_flag.associative, scale)
    }

    /// A flag through a seeded random isotropic associative space.
    pub fn random(frame: &G2Frame, model: Model, seed: u64, scale: &Gq) -> Result<Self, EquivariantError> {
        let assoc = Octonions::standard().assoc3_sample(seed)?;
        Self::new(frame, model, &assoc, scale)
    }
}

fn wedge_coeffs(n: usize, x: &[Gq], y: &[Gq]) -> Vec<(usize, Gq)> {
    pairs(n)
        .into_iter()
        .map(|(a, b)| (pair_index(n, a, b), &(&x[a] * &y[b]) - &(&x[b] * &y[a])))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

/// Functionals `T ↦ T(x, y, z)` for `x, y` in `E⊥` and `z` in its annihilator.
fn torsion_constraints(flag: &Flag) -> Vec<SparseVec> {
    let n = flag.model.dim();
    let mut out = Vec::new();
    for (i, j) in pairs(flag.eperp.len()) {
        let xy = wedge_coeffs(n, &flag.eperp[i], &flag.eperp[j]);
        for z in &flag.normal {
            let mut m = BTreeMap::new();
            for (p, c) in &xy {
                for (k, zk) in z.iter().enumerate() {
                    if !zk.is_zero() {
                        *m.entry(p * n + k).or_insert_with(Gq::zero) += &(c * zk);
                    }
                }
            }
            out.push(SparseVec::from_map(m));
        }
    }
    out
}

/// Functionals `ω ↦ ω(x, y)_μ` for `x, y` in `E⊥`.
fn curvature_constraints(flag: &Flag, nalg: usize) -> Vec<SparseVec> {
    let n = flag.model.dim();
    let mut out = Vec::new();
    for (i, j) in pairs(flag.eperp.len()) {
        let xy = wedge_coeffs(n, &flag.eperp[i], &flag.eperp[j]);
        for mu in 0..nalg {
            out.push(SparseVec::from_map(xy.iter().map(|(p, c)| (p * nalg + mu, c.clone())).collect()));
        }
    }
    out
}

pub type Setup = (MatrixRep, IsotypicDecomposition);

/// Torsion representation and its projectors over the standard frame.
pub fn torsion_setup(model: Model) -> &'static Setup {
    static U: OnceLock<Setup> = OnceLock::new();
    static CU: OnceLock<Setup> = OnceLock::new();
    let cell = if model == Model::U { &U } else { &CU };
    cell.get_or_init(|| {
        let rep = rep_on(SpaceSpec::Torsion(model));
        let dec = isotypic_decompose(&rep, G2Frame::standard()).expect("torsion spaces have a simple Casimir spectrum");
        (rep, dec)
    })
}

/// Isotypic type of an invariant subspace, from the ranks of its projections.
pub fn subspace_type(dec: &IsotypicDecomposition, sub: &InvariantSubspace, space: &str) -> IsotypicReport {
    let mut components = Vec::new();
    for (x, p) in &dec.projectors {
        let mut img = EchelonBasis::new(sub.ambient);
        for b in &sub.basis {
            img.insert(&SparseVec::from_dense(&p.apply(&b.to_dense(sub.ambient))));
        }
        let d = weyl_dim(*x).expect("dominant") as usize;
        if img.rank() > 0 {
            components.push(ComponentReport {
                irrep: *x,
                casimir_ratio: super::casimir::casimir_form(*x),
                eigenspace_dim: img.rank(),
                multiplicity: img.rank() / d,
            });
        }
    }
    IsotypicReport { space: space.to_string(), dim: sub.dim(), components }
}

#[derive(Debug, Clone, Serialize)]
pub struct AdmissibleModule {
    pub model: Model,
    pub scale: Gq,
    pub constraint_count: usize,
    pub dim: usize,
    pub report: IsotypicReport,
    /// `k·(U{0,0} ⊕ U{1,0})` with `k = 1` for `U` and `k = 2` for `C ⊕ U`.
    pub expected: IrrepSum,
    pub matches_expected: bool,
    #[serde(skip)]
    pub subspace: InvariantSubspace,
}

pub fn admissible_torsion_module(dim_case: usize, scale: &Gq) -> Result<AdmissibleModule, EquivariantError> {
    let model = Model::from_dim(dim_case)?;
    admissible_torsion_module_with(&Flag::base(G2Frame::standard(), model, scale)?)
}

pub fn admissible_torsion_module_with(flag: &Flag) -> Result<AdmissibleModule, EquivariantError> {
    let (rep, dec) = torsion_setup(flag.model);
    let constraints = torsion_constraints(flag);
    let sub = max_invariant_subspace(rep, &constraints);
    let report = subspace_type(dec, &sub, &format!("K in {}", rep.spec));
    let k = if flag.model == Model::U { 1 } else { 2 };
    let expected = IrrepSum::from_terms([(w(0, 0), k), (w(1, 0), k)]);
    let matches_expected = report.as_sum() == expected && report.components.iter().all(|c| c.eigenspace_dim % weyl_dim(c.irrep).unwrap_or(1) as usize == 0);
    Ok(AdmissibleModule {
        model: flag.model,
        scale: flag.scale.clone(),
        constraint_count: constraints.len(),
        dim: sub.dim(),
        report,
        expected,
        matches_expected,
        subspace: sub,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvatureReport {
    pub model: Model,
    pub ambient: usize,
    pub constraint_count: usize,
    /// Dimension of the largest invariant space of forms vanishing on `Λ²E⊥`.
    pub kernel_dim: usize,
    pub forces_zero: bool,
}

pub fn curvature_check(dim_case: usize, scale: &Gq) -> Result<CurvatureReport, EquivariantError> {
    let model = Model::from_dim(dim_case)?;
    curvature_check_with(&Flag::base(G2Frame::standard(), model, scale)?)
}

pub fn curvature_check_with(flag: &Flag) -> Result<CurvatureReport, EquivariantError> {
    let rep = curvature_rep(flag.model);
    let constraints = curvature_constraints(flag, G2Frame::standard().generators.len());
    let sub = max_invariant_subspace(rep, &constraints);
    Ok(CurvatureReport {
        model: flag.model,
        ambient: rep.dim,
        constraint_count: constraints.len(),
        kernel_dim: sub.dim(),
        forces_zero: sub.dim() == 0,
    })
}

pub fn curvature_rep(model: Model) -> &'static MatrixRep {
    static U: OnceLock<MatrixRep> = OnceLock::new();
    static CU: OnceLock<MatrixRep> = OnceLock::new();
    let cell = if model == Model::U { &U } else { &CU };
    cell.get_or_init(|| rep_on(SpaceSpec::Curvature(model)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_constraint_sets() {
        let rep = rep_on(SpaceSpec::Torsion(Model::U));
        assert_eq!(max_invariant_subspace(&rep, &[]).dim(), 147);
        let all: Vec<SparseVec> = (0..rep.dim).map(|i| SparseVec { entries: vec![(i, Gq::from(1))] }).collect();
        assert_eq!(max_invariant_subspace(&rep, &all).dim(), 0);
    }

    #[test]
    fn zero_scale_is_rejected() {
        assert!(matches!(admissible_torsion_module(8, &Gq::zero()), Err(EquivariantError::BadScale)));
        assert!(matches!(admissible_torsion_module(9, &Gq::from(1)), Err(EquivariantError::BadDimCase(9))));
    }
}
