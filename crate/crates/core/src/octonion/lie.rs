//! The derivation algebra of the cross product, a split Cartan subalgebra,
//! root vectors, weights of `U` and the base flag.

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::sample::{rng_for, RETRY_BUDGET};
use super::{ov, OctVector, Octonions, OctonionError, PlaneClass, Subspace, DIM};
use crate::linalg::{self, DenseMatrix};
use crate::scalar::{gq, Gq};

/// A weight vector of `U` with its weight in simple-root coordinates `(a, b)`,
/// meaning `a·α + b·β`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightVector {
    pub vector: OctVector,
    pub root_coords: (i64, i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseFlag {
    /// Highest-weight line `L0`.
    pub line: Subspace,
    /// Isotropic associative space `E0` determined by `L0`.
    pub associative: Subspace,
    /// Anti-self-dual plane `U−0` with `L0 ⊂ U−0 ⊂ E0`.
    pub asd_plane: Subspace,
    pub line_weights: Vec<(i64, i64)>,
    pub associative_weights: Vec<(i64, i64)>,
    pub asd_plane_weights: Vec<(i64, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanData {
    /// Two commuting semisimple derivations spanning the Cartan subalgebra.
    pub cartan: [DenseMatrix; 2],
    /// Values of `α` and `β` on the Cartan pair.
    pub simple_roots: [[Gq; 2]; 2],
    /// Weight basis of `U`, ordered by decreasing height; the zero weight sits
    /// in the middle and `weights[6 - k]` pairs with `weights[k]`.
    pub weights: Vec<WeightVector>,
    /// Root vectors with their roots in simple-root coordinates.
    pub roots: Vec<((i64, i64), DenseMatrix)>,
    pub base_flag: BaseFlag,
}

impl CartanData {
    /// Change of basis whose columns are the weight vectors.
    pub fn weight_basis_matrix(&self) -> DenseMatrix {
        (0..DIM).map(|i| self.weights.iter().map(|w| w.vector.0[i].clone()).collect()).collect()
    }

    /// Multiset of the weights of `U` in simple-root coordinates, sorted.
    pub fn weight_multiset(&self) -> Vec<(i64, i64)> {
        let mut v: Vec<_> = self.weights.iter().map(|w| w.root_coords).collect();
        v.sort();
        v
    }

    /// The 14 generators: the Cartan pair followed by the root vectors.
    pub fn chevalley_basis(&self) -> Vec<DenseMatrix> {
        let mut g = vec![self.cartan[0].clone(), self.cartan[1].clone()];
        g.extend(self.roots.iter().map(|(_, m)| m.clone()));
        g
    }
}

/// Reference frame pinning the torus and the positive chamber.
#[derive(Debug, Clone)]
pub struct Frame {
    /// Index (1-based) of the axis fixed by the torus.
    pub axis: usize,
    /// Weight vector chosen as highest weight of `U`.
    pub highest: OctVector,
    /// Weight vector of the short simple root `α`.
    pub simple_short: OctVector,
}

impl Default for Frame {
    fn default() -> Self {
        Self {
            axis: 4,
            highest: ov(&[(3, gq(1, 0)), (6, gq(0, 1))]),
            simple_short: ov(&[(1, gq(1, 0)), (2, gq(0, 1))]),
        }
    }
}

fn flatten(m: &DenseMatrix) -> Vec<Gq> {
    m.iter().flatten().cloned().collect()
}

fn unflatten(v: &[Gq]) -> DenseMatrix {
    v.chunks(DIM).map(<[Gq]>::to_vec).collect()
}

fn combination(basis: &[DenseMatrix], coeffs: &[Gq]) -> DenseMatrix {
    let mut out = vec![vec![Gq::zero(); DIM]; DIM];
    for (b, c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for i in 0..DIM {
            for j in 0..DIM {
                if !b[i][j].is_zero() {
                    out[i][j] += &(c * &b[i][j]);
                }
            }
        }
    }
    out
}

pub(crate) fn bracket(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let ab = linalg::mat_mul(a, b);
    let ba = linalg::mat_mul(b, a);
    ab.iter().zip(&ba).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

/// Coordinates of `m` in the span of `basis`, if any.
pub fn span_coordinates(basis: &[DenseMatrix], m: &DenseMatrix) -> Option<Vec<Gq>> {
    let flat: Vec<Vec<Gq>> = basis.iter().map(flatten).collect();
    linalg::coordinates(&flat, &flatten(m))
}

/// Subspace of `span(basis)` where the given linear conditions on the
/// combined matrix vanish; returns the solution matrices.
fn solve_in_span<F>(basis: &[DenseMatrix], condition: F) -> Vec<DenseMatrix>
where
    F: Fn(&DenseMatrix) -> Vec<Gq>,
{
    // Columns of the system are the images of each basis element.
    let images: Vec<Vec<Gq>> = basis.iter().map(&condition).collect();
    let nrows = images.first().map_or(0, Vec::len);
    let rows: DenseMatrix = (0..nrows).map(|r| images.iter().map(|img| img[r].clone()).collect()).collect();
    linalg::nullspace(&rows, basis.len()).iter().map(|c| combination(basis, c)).collect()
}

fn solve_2x2(a: &[Gq; 2], b: &[Gq; 2], target: &[Gq; 2]) -> Option<(Gq, Gq)> {
    let det = &(&a[0] * &b[1]) - &(&a[1] * &b[0]);
    if det.is_zero() {
        return None;
    }
    let x = &(&(&target[0] * &b[1]) - &(&target[1] * &b[0])) / &det;
    let y = &(&(&a[0] * &target[1]) - &(&a[1] * &target[0])) / &det;
    Some((x, y))
}

fn as_integer(x: &Gq) -> Option<i64> {
    use num_traits::ToPrimitive;
    if x.is_real() && x.re.is_integer() {
        x.re.to_integer().to_i64()
    } else {
        None
    }
}

fn eigenvalue(m: &DenseMatrix, v: &OctVector) -> Option<Gq> {
    let mv = OctVector::from_slice(&linalg::mat_vec(m, &v.to_vec()));
    let k = v.0.iter().position(|x| !x.is_zero())?;
    let c = &mv.0[k] / &v.0[k];
    (mv == v.scale(&c)).then_some(c)
}

impl Octonions {
    /// Basis of `{A : A(x × y) = Ax × y + x × Ay}` from the exact nullspace of
    /// the 147 × 49 linear system.
    pub fn derivations_of_cross(&self) -> Vec<DenseMatrix> {
        let var = |i: usize, j: usize| i * DIM + j;
        let mut rows: DenseMatrix = Vec::new();
        for a in 0..DIM {
            for b in a + 1..DIM {
                let mut eqs = vec![vec![Gq::zero(); DIM * DIM]; DIM];
                // A(e_a × e_b)
                if let Some((c, s)) = self.basis_product(a, b) {
                    for (k, eq) in eqs.iter_mut().enumerate() {
                        eq[var(k, c)] += &gq(s, 0);
                    }
                }
                // −(A e_a) × e_b − e_a × (A e_b)
                for i in 0..DIM {
                    if let Some((k, s)) = self.basis_product(i, b) {
                        eqs[k][var(i, a)] -= &gq(s, 0);
                    }
                    if let Some((k, s)) = self.basis_product(a, i) {
                        eqs[k][var(i, b)] -= &gq(s, 0);
                    }
                }
                rows.extend(eqs);
            }
        }
        linalg::nullspace(&rows, DIM * DIM).iter().map(|v| unflatten(v)).collect()
    }

    /// Split Cartan subalgebra, roots, weights of `U` and the base flag, for
    /// the default reference frame.
    pub fn cartan_weights(&self) -> Result<CartanData, OctonionError> {
        self.cartan_weights_in(&Frame::default(), 0)
    }

    pub fn cartan_weights_in(&self, frame: &Frame, seed: u64) -> Result<CartanData, OctonionError> {
        let der = self.derivations_of_cross();
        if der.len() != 14 {
            return Err(OctonionError::BadTable(format!("derivation algebra has dimension {}", der.len())));
        }
        let axis = frame.axis - 1;
        let j_axis = self.left_mul_matrix(&OctVector::e(frame.axis));
        // Torus: derivations killing the axis and preserving each plane {e_j, J e_j}.
        let torus = solve_in_span(&der, |m| {
            let mut c = Vec::new();
            for j in 0..DIM {
                for i in 0..DIM {
                    let partner = !j_axis[i][j].is_zero();
                    if j == axis || !partner {
                        c.push(m[i][j].clone());
                    }
                }
            }
            c
        });
        if torus.len() != 2 {
            return Err(OctonionError::DegenerateCartan(torus.len()));
        }
        let mut rng = rng_for(seed ^ 0xca27a);
        let mut cartan = None;
        let mut last_dim = 0;
        for _ in 0..RETRY_BUDGET {
            let t = [gq(rng.gen_range(1..=9), 0), gq(rng.gen_range(-9..=9), 0)];
            let h = combination(&torus, &t);
            let centralizer = solve_in_span(&der, |m| flatten(&bracket(&h, m)));
            last_dim = centralizer.len();
            if last_dim == 2 {
                cartan = Some([centralizer[0].clone(), centralizer[1].clone()]);
                break;
            }
        }
        let cartan = cartan.ok_or(OctonionError::DegenerateCartan(last_dim))?;
        if !bracket(&cartan[0], &cartan[1]).iter().flatten().all(Zero::is_zero) {
            return Err(OctonionError::DegenerateCartan(0));
        }

        // Joint eigenvectors: the axis and e_j ± i J e_j.
        let mut candidates = vec![OctVector::e(frame.axis)];
        for j in 0..DIM {
            for i in j + 1..DIM {
                if !j_axis[i][j].is_zero() && j != axis {
                    for s in [1, -1] {
                        candidates.push(ov(&[(j + 1, gq(1, 0)), (i + 1, gq(0, s))]));
                    }
                }
            }
        }
        let mut weight_values = Vec::new();
        for v in &candidates {
            let l0 = eigenvalue(&cartan[0], v).ok_or(OctonionError::DegenerateCartan(2))?;
            let l1 = eigenvalue(&cartan[1], v).ok_or(OctonionError::DegenerateCartan(2))?;
            weight_values.push((Subspace::span(std::slice::from_ref(v)).basis()[0].clone(), [l0, l1]));
        }
        let find = |target: &OctVector| -> Result<[Gq; 2], OctonionError> {
            let line = Subspace::span(std::slice::from_ref(target));
            weight_values
                .iter()
                .find(|(v, _)| line.contains(v))
                .map(|(_, w)| w.clone())
                .ok_or(OctonionError::DegenerateCartan(2))
        };
        let alpha = find(&frame.simple_short)?;
        let theta = find(&frame.highest)?;
        let beta = [&theta[0] - &(&alpha[0] * &gq(2, 0)), &theta[1] - &(&alpha[1] * &gq(2, 0))];
        let to_root_coords = |w: &[Gq; 2]| -> Result<(i64, i64), OctonionError> {
            let (x, y) = solve_2x2(&alpha, &beta, w).ok_or(OctonionError::DegenerateCartan(2))?;
            match (as_integer(&x), as_integer(&y)) {
                (Some(a), Some(b)) => Ok((a, b)),
                _ => Err(OctonionError::DegenerateCartan(2)),
            }
        };
        let mut weights = Vec::new();
        for (v, w) in &weight_values {
            weights.push(WeightVector { vector: v.clone(), root_coords: to_root_coords(w)? });
        }
        // Decreasing height, ties broken by the α-coefficient.
        weights.sort_by_key(|w| (-(w.root_coords.0 + w.root_coords.1), -w.root_coords.0));

        // Root spaces inside the derivation algebra.
        let mut roots = Vec::new();
        for a in -3i64..=3 {
            for b in -2i64..=2 {
                if (a, b) == (0, 0) {
                    continue;
                }
                let gamma = [
                    &(&alpha[0] * &gq(a, 0)) + &(&beta[0] * &gq(b, 0)),
                    &(&alpha[1] * &gq(a, 0)) + &(&beta[1] * &gq(b, 0)),
                ];
                let space = solve_in_span(&der, |m| {
                    let mut c = Vec::new();
                    for (h, g) in cartan.iter().zip(&gamma) {
                        let br = bracket(h, m);
                        for i in 0..DIM {
                            for j in 0..DIM {
                                c.push(&br[i][j] - &(g * &m[i][j]));
                            }
                        }
                    }
                    c
                });
                match space.len() {
                    0 => {}
                    1 => roots.push(((a, b), normalise(&space[0]))),
                    _ => return Err(OctonionError::DegenerateCartan(space.len())),
                }
            }
        }
        if roots.len() != 12 {
            return Err(OctonionError::DegenerateCartan(roots.len()));
        }
        roots.sort_by_key(|((a, b), _)| (-(a + b), -*a));

        let base_flag = self.base_flag(&weights)?;
        Ok(CartanData { cartan, simple_roots: [alpha, beta], weights, roots, base_flag })
    }

    fn base_flag(&self, weights: &[WeightVector]) -> Result<BaseFlag, OctonionError> {
        let top = &weights[0];
        let line = Subspace::span(std::slice::from_ref(&top.vector));
        let associative = self.associative_of_line(&line, 0)?;
        let weights_in = |s: &Subspace| -> Vec<(i64, i64)> {
            weights.iter().filter(|w| s.contains(&w.vector)).map(|w| w.root_coords).collect()
        };
        // U−0: the anti-self-dual plane spanned by the two highest weight vectors of E0.
        let inside: Vec<&WeightVector> = weights.iter().filter(|w| associative.contains(&w.vector)).collect();
        if inside.len() != 3 {
            return Err(OctonionError::NotAssociative);
        }
        let asd_plane = Subspace::span(&[inside[0].vector.clone(), inside[1].vector.clone()]);
        if self.classify_plane(&asd_plane)? != PlaneClass::AntiSelfDual {
            return Err(OctonionError::NotAntiSelfDual);
        }
        Ok(BaseFlag {
            line_weights: weights_in(&line),
            associative_weights: weights_in(&associative),
            asd_plane_weights: weights_in(&asd_plane),
            line,
            associative,
            asd_plane,
        })
    }
}

/// Scales a matrix so that its first nonzero entry (row-major) is one.
fn normalise(m: &DenseMatrix) -> DenseMatrix {
    let lead = m.iter().flatten().find(|x| !x.is_zero()).cloned().unwrap_or_else(Gq::one);
    let inv = lead.inv();
    m.iter().map(|r| r.iter().map(|x| x * &inv).collect()).collect()
}
