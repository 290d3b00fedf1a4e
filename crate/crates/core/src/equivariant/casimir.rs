//! Casimir operator and its spectral projectors.

use num_traits::{One, Zero};
use serde::Serialize;

use super::{EquivariantError, G2Frame, MatrixRep};
use crate::linalg::{self, SparseMatrix};
use crate::rep::{weyl_dim, Weight, RHO};
use crate::scalar::Gq;

/// Casimir of `rep` with respect to the trace form of `U`, and its scalar
/// value on `U`.
pub fn casimir(rep: &MatrixRep, frame: &G2Frame) -> Result<(SparseMatrix, Gq), EquivariantError> {
    let g = &frame.generators;
    let gram: Vec<Vec<Gq>> = g
        .iter()
        .map(|x| g.iter().map(|y| trace_of_product(x, y)).collect())
        .collect();
    let inv = linalg::inverse(&gram).ok_or(EquivariantError::DegenerateTraceForm)?;
    let mut c = SparseMatrix::zero(rep.dim);
    for (i, xi) in rep.generators.iter().enumerate() {
        let mut dual = SparseMatrix::zero(rep.dim);
        for (j, xj) in rep.generators.iter().enumerate() {
            if !inv[i][j].is_zero() {
                dual = dual.add_scaled(xj, &inv[i][j]);
            }
        }
        c = c.add_scaled(&xi.mul(&dual), &Gq::one());
    }
    // On U the Casimir is dim(g)/dim(U) times the identity.
    let on_u = Gq::from_ratio(g.len() as i64, g[0].len() as i64);
    Ok((c, on_u))
}

fn trace_of_product(a: &[Vec<Gq>], b: &[Vec<Gq>]) -> Gq {
    let mut t = Gq::zero();
    for (i, row) in a.iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            if !x.is_zero() && !b[k][i].is_zero() {
                t += &(x * &b[k][i]);
            }
        }
    }
    t
}

/// `(λ, λ + 2ρ)` with `(α, α) = 2`; equals 12 on `U`.
pub fn casimir_form(x: Weight) -> i64 {
    x.inner(x + RHO + RHO)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub irrep: Weight,
    /// Eigenvalue normalised so that `U` has 12.
    pub casimir_ratio: i64,
    pub eigenspace_dim: usize,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsotypicReport {
    pub space: String,
    pub dim: usize,
    pub components: Vec<ComponentReport>,
}

impl IsotypicReport {
    pub fn as_sum(&self) -> crate::rep::IrrepSum {
        crate::rep::IrrepSum::from_terms(self.components.iter().map(|c| (c.irrep, c.multiplicity as i64)))
    }
}

#[derive(Debug, Clone)]
pub struct IsotypicDecomposition {
    pub casimir: SparseMatrix,
    /// Projector onto each isotypic component, in increasing Casimir order.
    pub projectors: Vec<(Weight, SparseMatrix)>,
    pub report: IsotypicReport,
}

/// Projectors as Lagrange polynomials in the Casimir over the eigenvalues of
/// the expected isotypes; the spectrum is validated by `(C − c_λ) P_λ = 0`
/// and `Σ P_λ = 1`.
pub fn isotypic_decompose(rep: &MatrixRep, frame: &G2Frame) -> Result<IsotypicDecomposition, EquivariantError> {
    let (c, on_u) = casimir(rep, frame)?;
    let mut isotypes: Vec<Weight> = rep.spec.expected().iter().map(|(x, _)| x).collect();
    isotypes.sort_by_key(|x| (casimir_form(*x), *x));
    for pair in isotypes.windows(2) {
        if casimir_form(pair[0]) == casimir_form(pair[1]) {
            return Err(EquivariantError::CollidingEigenvalues(pair[0].to_string(), pair[1].to_string()));
        }
    }
    let eig = |x: Weight| &on_u * &Gq::from_ratio(casimir_form(x), 12);
    let n = rep.dim;
    let shifted = |x: Weight| c.add_scaled(&SparseMatrix::identity(n), &-eig(x));

    let mut projectors = Vec::with_capacity(isotypes.len());
    let mut total = SparseMatrix::zero(n);
    let mut components = Vec::new();
    for &x in &isotypes {
        let mut p = SparseMatrix::identity(n);
        for &y in isotypes.iter().filter(|y| **y != x) {
            let denom = &eig(x) - &eig(y);
            p = p.mul(&shifted(y)).scale(&denom.inv());
        }
        if !p.mul(&shifted(x)).is_zero() {
            return Err(EquivariantError::SpectrumMismatch(format!("eigenvalue of {x} has a nontrivial Jordan block or is missing")));
        }
        let tr = p.trace();
        let rank = gq_to_usize(&tr).ok_or_else(|| EquivariantError::SpectrumMismatch(format!("trace {tr} of the {x} projector")))?;
        let d = weyl_dim(x).expect("dominant") as usize;
        if rank % d != 0 {
            return Err(EquivariantError::SpectrumMismatch(format!("eigenspace of {x} has dimension {rank}")));
        }
        components.push(ComponentReport { irrep: x, casimir_ratio: casimir_form(x), eigenspace_dim: rank, multiplicity: rank / d });
        total = total.add_scaled(&p, &Gq::one());
        projectors.push((x, p));
    }
    if total != SparseMatrix::identity(n) {
        return Err(EquivariantError::SpectrumMismatch("projectors do not sum to the identity".into()));
    }
    let report = IsotypicReport { space: rep.spec.to_string(), dim: n, components };
    Ok(IsotypicDecomposition { casimir: c, projectors, report })
}

fn gq_to_usize(x: &Gq) -> Option<usize> {
    use num_traits::ToPrimitive;
    (x.is_real() && x.re.is_integer()).then(|| x.re.to_integer().to_usize()).flatten()
}
