//! Complexified imaginary octonions: cross product, bilinear form and exact
//! subspaces of the seven-dimensional space `U`.

mod classify;
mod lie;
mod sample;

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, DenseMatrix};
use crate::scalar::Gq;

pub use classify::{PlaneClass, ThreeSpaceClass, TrichotomyCase, TrichotomyReport};
pub use lie::{span_coordinates, BaseFlag, CartanData, Frame, WeightVector};
pub use sample::RETRY_BUDGET;

pub const DIM: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OctonionError {
    #[error("expected a subspace of dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("subspace is not isotropic")]
    NotIsotropic,
    #[error("plane is not self-dual")]
    NotSelfDual,
    #[error("plane is not anti-self-dual")]
    NotAntiSelfDual,
    #[error("subspace is not closed under the cross product")]
    NotClosed,
    #[error("subspace is not an associative space of the required kind")]
    NotAssociative,
    #[error("subspace is degenerate for the bilinear form")]
    Degenerate,
    #[error("not an isotropic line inside the given space")]
    BadLine,
    #[error("vector does not lie in the given subspace")]
    NotInSubspace,
    #[error("sampler exhausted its retry budget of {0}")]
    ExhaustedRetries(usize),
    #[error("hyperplane is degenerate or not spanned by real vectors")]
    DegenerateV,
    #[error("line is fixed by conjugation up to scale")]
    RealLine,
    #[error("direct and criterion-based trichotomy disagree: {direct:?} vs {criteria:?}")]
    CriteriaDisagree { direct: TrichotomyCase, criteria: TrichotomyCase },
    #[error("generic element has centralizer of dimension {0}, expected 2")]
    DegenerateCartan(usize),
    #[error("multiplication table is inconsistent: {0}")]
    BadTable(String),
}

/// Oriented triples `(a, b, c)` (1-based) with `e_a × e_b = e_c` cyclically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MulTable {
    pub triples: Vec<[usize; 3]>,
}

impl MulTable {
    /// Index-doubling convention: `(i, i+1, i+3)` modulo 7.
    pub fn standard() -> Self {
        let triples = (0..7)
            .map(|i| [i % 7 + 1, (i + 1) % 7 + 1, (i + 3) % 7 + 1])
            .collect();
        Self { triples }
    }
}

/// An element of `U ⊗ C` in the basis `e1..e7`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OctVector(pub [Gq; DIM]);

impl OctVector {
    pub fn zero() -> Self {
        Self(std::array::from_fn(|_| Gq::zero()))
    }

    /// Basis vector `e_k` for `k` in `1..=7`.
    pub fn e(k: usize) -> Self {
        let mut v = Self::zero();
        v.0[k - 1] = Gq::one();
        v
    }

    pub fn from_slice(s: &[Gq]) -> Self {
        Self(std::array::from_fn(|i| s[i].clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Gq) -> Self {
        Self(std::array::from_fn(|i| &self.0[i] * c))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self(std::array::from_fn(|i| &self.0[i] + &o.0[i]))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self(std::array::from_fn(|i| &self.0[i] - &o.0[i]))
    }

    /// Coordinatewise complex conjugation.
    pub fn conj(&self) -> Self {
        Self(std::array::from_fn(|i| self.0[i].conj()))
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(Gq::is_real)
    }

    pub fn to_vec(&self) -> Vec<Gq> {
        self.0.to_vec()
    }

    /// Complex-bilinear (not Hermitian) form `Σ u_k v_k`.
    pub fn bilinear(&self, o: &Self) -> Gq {
        let mut s = Gq::zero();
        for (a, b) in self.0.iter().zip(&o.0) {
            if !a.is_zero() && !b.is_zero() {
                s += &(a * b);
            }
        }
        s
    }
}

impl fmt::Debug for OctVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})e{}", k + 1)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `a e_j + b e_k`, handy for writing the isotropic vectors of the examples.
pub fn ov(terms: &[(usize, Gq)]) -> OctVector {
    let mut v = OctVector::zero();
    for (k, c) in terms {
        v.0[k - 1] += c;
    }
    v
}

/// A linear subspace of `U`, stored as its reduced echelon basis.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subspace {
    basis: Vec<OctVector>,
}

impl Subspace {
    pub fn span(vectors: &[OctVector]) -> Self {
        let rows: DenseMatrix = vectors.iter().map(OctVector::to_vec).collect();
        let (r, _) = linalg::rref(&rows, DIM);
        Self { basis: r.iter().map(|v| OctVector::from_slice(v)).collect() }
    }

    pub fn zero() -> Self {
        Self { basis: Vec::new() }
    }

    pub fn whole() -> Self {
        Self::span(&(1..=7).map(OctVector::e).collect::<Vec<_>>())
    }

    pub fn basis(&self) -> &[OctVector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn rows(&self) -> DenseMatrix {
        self.basis.iter().map(OctVector::to_vec).collect()
    }

    pub fn contains(&self, v: &OctVector) -> bool {
        let mut rows = self.rows();
        rows.push(v.to_vec());
        linalg::rank(&rows, DIM) == self.dim()
    }

    pub fn contains_space(&self, o: &Subspace) -> bool {
        o.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, o: &Subspace) -> Subspace {
        let mut v = self.basis.clone();
        v.extend(o.basis.iter().cloned());
        Subspace::span(&v)
    }

    /// Orthogonal complement for the bilinear form.
    pub fn perp(&self) -> Subspace {
        let ns = linalg::nullspace(&self.rows(), DIM);
        Subspace::span(&ns.iter().map(|v| OctVector::from_slice(v)).collect::<Vec<_>>())
    }

    pub fn intersect(&self, o: &Subspace) -> Subspace {
        // (A ∩ B) = (A⊥ + B⊥)⊥ holds for the nondegenerate form on U.
        self.perp().sum(&o.perp()).perp()
    }

    pub fn gram(&self) -> DenseMatrix {
        self.basis
            .iter()
            .map(|a| self.basis.iter().map(|b| a.bilinear(b)).collect())
            .collect()
    }

    pub fn is_isotropic(&self) -> bool {
        self.gram().iter().flatten().all(Zero::is_zero)
    }

    pub fn is_nondegenerate(&self) -> bool {
        !linalg::determinant(&self.gram()).is_zero()
    }

    /// Coordinatewise conjugate subspace.
    pub fn conj(&self) -> Subspace {
        Subspace::span(&self.basis.iter().map(OctVector::conj).collect::<Vec<_>>())
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.basis).finish()
    }
}

/// The algebra `(U, ×, ⟨,⟩)` for a given multiplication table.
#[derive(Debug, Clone)]
pub struct Octonions {
    table: MulTable,
    /// `products[a][b] = Some((c, sign))` meaning `e_a × e_b = sign · e_c` (0-based).
    products: [[Option<(usize, i64)>; DIM]; DIM],
}

impl Default for Octonions {
    fn default() -> Self {
        Self::standard()
    }
}

impl Octonions {
    pub fn standard() -> Self {
        Self::with_table(MulTable::standard()).expect("standard table is consistent")
    }

    /// Builds the cross product from oriented triples. Triples may be any
    /// orientation; each unordered pair must be covered at most once.
    pub fn with_table(table: MulTable) -> Result<Self, OctonionError> {
        let mut products = [[None; DIM]; DIM];
        for t in &table.triples {
            if t.iter().any(|&k| k == 0 || k > DIM) || t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(OctonionError::BadTable(format!("invalid triple {t:?}")));
            }
            let [a, b, c] = t.map(|k| k - 1);
            for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                if products[x][y].is_some() {
                    return Err(OctonionError::BadTable(format!("pair ({},{}) repeated", x + 1, y + 1)));
                }
                products[x][y] = Some((z, 1));
                products[y][x] = Some((z, -1));
            }
        }
        Ok(Self { table, products })
    }

    pub fn table(&self) -> &MulTable {
        &self.table
    }

    /// Structure constant: `e_a × e_b = sign · e_c` (0-based indices).
    pub fn basis_product(&self, a: usize, b: usize) -> Option<(usize, i64)> {
        self.products[a][b]
    }

    pub fn cross(&self, u: &OctVector, v: &OctVector) -> OctVector {
        let mut out = OctVector::zero();
        for (a, x) in u.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in v.0.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                if let Some((c, s)) = self.products[a][b] {
                    let t = x * y;
                    if s > 0 {
                        out.0[c] += &t;
                    } else {
                        out.0[c] -= &t;
                    }
                }
            }
        }
        out
    }

    pub fn bilinear(&self, u: &OctVector, v: &OctVector) -> Gq {
        u.bilinear(v)
    }

    /// Matrix of `x ↦ u × x` (columns are images of `e_k`).
    pub fn left_mul_matrix(&self, u: &OctVector) -> DenseMatrix {
        let cols: Vec<OctVector> = (1..=DIM).map(|k| self.cross(u, &OctVector::e(k))).collect();
        (0..DIM).map(|i| cols.iter().map(|c| c.0[i].clone()).collect()).collect()
    }

    /// `span{x × y : x ∈ a, y ∈ b}`.
    pub fn cross_span(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut v = Vec::new();
        for x in a.basis() {
            for y in b.basis() {
                v.push(self.cross(x, y));
            }
        }
        Subspace::span(&v)
    }

    pub fn is_closed(&self, q: &Subspace) -> bool {
        let b = q.basis();
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                if !q.contains(&self.cross(&b[i], &b[j])) {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gq;
    use proptest::prelude::*;

    fn vec_strategy() -> impl Strategy<Value = OctVector> {
        proptest::collection::vec((-4i64..5, -4i64..5), 7)
            .prop_map(|c| OctVector::from_slice(&c.iter().map(|&(a, b)| gq(a, b)).collect::<Vec<_>>()))
    }

    #[test]
    fn standard_table_shape() {
        let t = MulTable::standard();
        assert_eq!(
            t.triples,
            vec![[1, 2, 4], [2, 3, 5], [3, 4, 6], [4, 5, 7], [5, 6, 1], [6, 7, 2], [7, 1, 3]]
        );
    }

    #[test]
    fn e1_cross_e2() {
        let o = Octonions::standard();
        assert_eq!(o.cross(&OctVector::e(1), &OctVector::e(2)), OctVector::e(4));
        assert_eq!(o.cross(&OctVector::e(2), &OctVector::e(1)), OctVector::e(4).scale(&gq(-1, 0)));
        assert!(o.cross(&OctVector::e(3), &OctVector::e(3)).is_zero());
    }

    #[test]
    fn isotropic_pair_products() {
        let o = Octonions::standard();
        let a = ov(&[(1, gq(1, 0)), (2, gq(0, 1))]);
        assert!(o.cross(&a, &ov(&[(7, gq(1, 0)), (5, gq(0, 1))])).is_zero());
        let ab = o.cross(&a, &ov(&[(7, gq(1, 0)), (5, gq(0, -1))]));
        assert_eq!(ab, ov(&[(3, gq(-2, 0)), (6, gq(0, -2))]));
    }

    #[test]
    fn form_values() {
        let a = ov(&[(1, gq(1, 0)), (2, gq(0, 1))]);
        assert!(a.bilinear(&a).is_zero());
        assert_eq!(OctVector::e(1).bilinear(&OctVector::e(1)), gq(1, 0));
    }

    #[test]
    fn repeated_pair_is_rejected() {
        let t = MulTable { triples: vec![[1, 2, 4], [2, 1, 3]] };
        assert!(matches!(Octonions::with_table(t), Err(OctonionError::BadTable(_))));
    }

    #[test]
    fn subspace_is_canonical() {
        let a = ov(&[(1, gq(1, 0)), (2, gq(0, 1))]);
        let b = ov(&[(7, gq(1, 0)), (5, gq(0, 1))]);
        let s1 = Subspace::span(&[a.clone(), b.clone()]);
        let s2 = Subspace::span(&[a.add(&b), b.scale(&gq(3, -2))]);
        assert_eq!(s1, s2);
        assert_eq!(s1.perp().dim(), 5);
        assert!(s1.is_isotropic());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn cross_is_orthogonal_to_factors(u in vec_strategy(), v in vec_strategy()) {
            let o = Octonions::standard();
            let w = o.cross(&u, &v);
            prop_assert!(w.bilinear(&u).is_zero());
            prop_assert!(w.bilinear(&v).is_zero());
            prop_assert_eq!(o.cross(&v, &u), w.scale(&gq(-1, 0)));
        }

        #[test]
        fn double_cross_identity(u in vec_strategy(), v in vec_strategy()) {
            let o = Octonions::standard();
            let lhs = o.cross(&u, &o.cross(&u, &v));
            let rhs = u.scale(&u.bilinear(&v)).sub(&v.scale(&u.bilinear(&u)));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
