//! Classification of isotropic planes and three-spaces, and the constructions
//! linking isotropic lines, anti-self-dual planes and associative spaces.

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::sample::{rng_for, small_vector, RETRY_BUDGET};
use super::{OctVector, Octonions, OctonionError, Subspace};
use crate::scalar::Gq;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlaneClass {
    SelfDual,
    AntiSelfDual,
}

#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class")]
pub enum ThreeSpaceClass {
    /// `α: Λ²q → U` has rank one with image inside `q`.
    IsotropicAssociative { image_line: Subspace },
    /// `α` has rank three; `q` is the `+i` eigenspace of `axis × ·` and the
    /// image of `α` is the `−i` eigenspace.
    EigenspaceType { axis: OctVector, eigenvalue_sign: i8, image: Subspace },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrichotomyCase {
    Contained,
    ASDIntersection,
    SDIntersection,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrichotomyReport {
    pub case: TrichotomyCase,
    /// Isotropic associative space determined by the line.
    pub associative: Subspace,
    pub intersection_dim: usize,
    pub line_in_hyperplane: bool,
    pub line_is_eigenline: bool,
    /// Diagnostics on the real associative space through the line.
    pub real_associative_contains_normal: bool,
    pub real_associative_in_hyperplane: bool,
}

fn expect_dim(s: &Subspace, d: usize) -> Result<(), OctonionError> {
    if s.dim() != d {
        return Err(OctonionError::WrongDimension { expected: d, got: s.dim() });
    }
    Ok(())
}

fn isotropic_line(o: &Octonions, ell: &Subspace) -> Result<OctVector, OctonionError> {
    let _ = o;
    if ell.dim() != 1 || !ell.is_isotropic() {
        return Err(OctonionError::BadLine);
    }
    Ok(ell.basis()[0].clone())
}

impl Octonions {
    /// Self-dual iff `p × p ≠ 0` for the isotropic plane `p`.
    pub fn classify_plane(&self, p: &Subspace) -> Result<PlaneClass, OctonionError> {
        expect_dim(p, 2)?;
        if !p.is_isotropic() {
            return Err(OctonionError::NotIsotropic);
        }
        let [a, b] = [&p.basis()[0], &p.basis()[1]];
        Ok(if self.cross(a, b).is_zero() { PlaneClass::AntiSelfDual } else { PlaneClass::SelfDual })
    }

    /// `p × p` for a plane (zero or a line).
    pub fn plane_square(&self, p: &Subspace) -> Subspace {
        self.cross_span(p, p)
    }

    /// `p + (p × p)` for a self-dual plane.
    pub fn associative_hull(&self, p: &Subspace) -> Result<Subspace, OctonionError> {
        match self.classify_plane(p)? {
            PlaneClass::SelfDual => Ok(p.sum(&self.plane_square(p))),
            PlaneClass::AntiSelfDual => Err(OctonionError::NotSelfDual),
        }
    }

    /// Classifies an isotropic three-space by the rank of `α: Λ²q → U`.
    ///
    /// With `assert_closed` the input must be closed under the cross product.
    pub fn classify_3space(&self, q: &Subspace, assert_closed: bool) -> Result<ThreeSpaceClass, OctonionError> {
        expect_dim(q, 3)?;
        if !q.is_isotropic() {
            return Err(OctonionError::NotIsotropic);
        }
        let closed = self.is_closed(q);
        if assert_closed && !closed {
            return Err(OctonionError::NotClosed);
        }
        let image = self.cross_span(q, q);
        match image.dim() {
            1 if q.contains_space(&image) => Ok(ThreeSpaceClass::IsotropicAssociative { image_line: image }),
            3 => {
                let normal = q.sum(&image).perp();
                if normal.dim() != 1 {
                    return Err(OctonionError::NotAssociative);
                }
                let v = normal.basis()[0].clone();
                let w = &q.basis()[0];
                let vw = self.cross(&v, w);
                // v × w = c w for every w in q, with c² = −⟨v,v⟩.
                let Some(k) = w.0.iter().position(|x| !x.is_zero()) else {
                    return Err(OctonionError::NotAssociative);
                };
                let c = &vw.0[k] / &w.0[k];
                if vw != w.scale(&c) || &c * &c != -v.bilinear(&v) || c.is_zero() {
                    return Err(OctonionError::NotAssociative);
                }
                for x in q.basis() {
                    if self.cross(&v, x) != x.scale(&c) {
                        return Err(OctonionError::NotAssociative);
                    }
                }
                // u = i v / c is a unit vector acting as +i on q.
                let mut axis = v.scale(&(Gq::i() / &c));
                let mut sign = 1i8;
                let lead = axis.0.iter().find(|x| !x.is_zero()).cloned().unwrap_or_else(Gq::zero);
                if lead.lex_negative() {
                    axis = axis.scale(&Gq::int(-1));
                    sign = -1;
                }
                Ok(ThreeSpaceClass::EigenspaceType { axis, eigenvalue_sign: sign, image })
            }
            _ => Err(OctonionError::NotAssociative),
        }
    }

    /// `ℓ + (ℓ × p⊥)` for a nondegenerate associative `p ⊇ ℓ`.
    pub fn q_embedding(&self, ell: &Subspace, p: &Subspace) -> Result<Subspace, OctonionError> {
        let l = isotropic_line(self, ell)?;
        if p.dim() != 3 || !self.is_closed(p) {
            return Err(OctonionError::NotAssociative);
        }
        if !p.is_nondegenerate() {
            return Err(OctonionError::Degenerate);
        }
        if !p.contains(&l) {
            return Err(OctonionError::BadLine);
        }
        let out = ell.sum(&self.cross_span(ell, &p.perp()));
        if out.dim() != 3 {
            return Err(OctonionError::NotAssociative);
        }
        Ok(out)
    }

    /// Nondegenerate associative `span{a, b, a×b}` through the line spanned by `a`.
    pub fn nondegenerate_associative_through(&self, ell: &Subspace, seed: u64) -> Result<Subspace, OctonionError> {
        let a = isotropic_line(self, ell)?;
        let mut rng = rng_for(seed ^ 0x5eed_a550);
        for _ in 0..RETRY_BUDGET {
            let b = small_vector(&mut rng, 3);
            let ab = self.cross(&a, &b);
            let p = Subspace::span(&[a.clone(), b, ab]);
            if p.dim() == 3 && p.is_nondegenerate() && self.is_closed(&p) {
                return Ok(p);
            }
        }
        Err(OctonionError::ExhaustedRetries(RETRY_BUDGET))
    }

    /// The isotropic associative space determined by an isotropic line.
    pub fn associative_of_line(&self, ell: &Subspace, seed: u64) -> Result<Subspace, OctonionError> {
        let p = self.nondegenerate_associative_through(ell, seed)?;
        self.q_embedding(ell, &p)
    }

    /// One associative space per line of the anti-self-dual plane `p`.
    pub fn asd_family(&self, p: &Subspace, lines: &[Subspace], seed: u64) -> Result<Vec<Subspace>, OctonionError> {
        if self.classify_plane(p)? != PlaneClass::AntiSelfDual {
            return Err(OctonionError::NotAntiSelfDual);
        }
        lines
            .iter()
            .map(|ell| {
                if ell.dim() != 1 || !p.contains_space(ell) {
                    return Err(OctonionError::BadLine);
                }
                let q = self.associative_of_line(ell, seed)?;
                debug_assert!(q.contains_space(p));
                Ok(q)
            })
            .collect()
    }

    /// Anti-self-dual planes `span(ℓ, d)` inside an isotropic associative `q`
    /// with axis line `ℓ`.
    pub fn asd_in_associative(&self, q: &Subspace, directions: &[OctVector]) -> Result<Vec<Subspace>, OctonionError> {
        let ThreeSpaceClass::IsotropicAssociative { image_line } = self.classify_3space(q, false)? else {
            return Err(OctonionError::NotAssociative);
        };
        directions
            .iter()
            .map(|d| {
                if !q.contains(d) {
                    return Err(OctonionError::NotInSubspace);
                }
                let plane = image_line.sum(&Subspace::span(std::slice::from_ref(d)));
                expect_dim(&plane, 2)?;
                Ok(plane)
            })
            .collect()
    }

    /// How the associative space of `ell` meets the real hyperplane `v_space`,
    /// computed directly and through the eigenline criteria; both must agree.
    pub fn hyperplane_trichotomy(
        &self,
        ell: &Subspace,
        v_space: &Subspace,
        seed: u64,
    ) -> Result<TrichotomyReport, OctonionError> {
        let l = isotropic_line(self, ell)?;
        if v_space.dim() != 6 || !v_space.basis().iter().all(OctVector::is_real) || !v_space.is_nondegenerate() {
            return Err(OctonionError::DegenerateV);
        }
        if ell.conj() == *ell {
            return Err(OctonionError::RealLine);
        }
        let normal = v_space.perp().basis()[0].clone();
        let p = self.associative_of_line(ell, seed)?;
        let inter = p.intersect(v_space);
        let direct = match inter.dim() {
            3 => TrichotomyCase::Contained,
            2 => match self.classify_plane(&inter)? {
                PlaneClass::AntiSelfDual => TrichotomyCase::ASDIntersection,
                PlaneClass::SelfDual => TrichotomyCase::SDIntersection,
            },
            d => return Err(OctonionError::WrongDimension { expected: 2, got: d }),
        };
        let in_v = v_space.contains(&l);
        let eigen = ell.contains(&self.cross(&normal, &l));
        let criteria = match (in_v, eigen) {
            (true, true) => TrichotomyCase::Contained,
            (true, false) => TrichotomyCase::ASDIntersection,
            (false, _) => TrichotomyCase::SDIntersection,
        };
        if direct != criteria {
            return Err(OctonionError::CriteriaDisagree { direct, criteria });
        }
        // Real associative space through ℓ = span(x + i y): span(x, y, x × y).
        let x = OctVector(std::array::from_fn(|k| Gq::real(l.0[k].re.clone())));
        let y = OctVector(std::array::from_fn(|k| Gq::real(l.0[k].im.clone())));
        let real_assoc = Subspace::span(&[x.clone(), y.clone(), self.cross(&x, &y)]);
        Ok(TrichotomyReport {
            case: direct,
            intersection_dim: inter.dim(),
            associative: p,
            line_in_hyperplane: in_v,
            line_is_eigenline: eigen,
            real_associative_contains_normal: real_assoc.contains(&normal),
            real_associative_in_hyperplane: v_space.contains_space(&real_assoc),
        })
    }
}

/// Random element of `q` (integer combination of its basis).
pub(crate) fn random_in<R: Rng>(rng: &mut R, q: &Subspace) -> OctVector {
    let mut v = OctVector::zero();
    for b in q.basis() {
        let c = Gq::from_ints(rng.gen_range(-4..=4), rng.gen_range(-4..=4));
        v = v.add(&b.scale(&c));
    }
    v
}
