//! Seeded constructive samplers. All randomness flows from a ChaCha8 stream
//! seeded with the caller's 64-bit seed, so outputs are reproducible across
//! platforms.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::classify::random_in;
use super::{OctVector, Octonions, OctonionError, PlaneClass, Subspace, ThreeSpaceClass};
use crate::scalar::{gq, Gq};

/// Rejection-sampling budget shared by every sampler.
pub const RETRY_BUDGET: usize = 64;

pub(crate) fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Vector with Gaussian-integer coordinates in `[-r, r] + i[-r, r]`.
pub(crate) fn small_vector<R: Rng>(rng: &mut R, r: i64) -> OctVector {
    OctVector(std::array::from_fn(|_| gq(rng.gen_range(-r..=r), rng.gen_range(-r..=r))))
}

fn real_vector<R: Rng>(rng: &mut R, r: i64) -> OctVector {
    OctVector(std::array::from_fn(|_| gq(rng.gen_range(-r..=r), 0)))
}

impl Octonions {
    /// Isotropic line by stereographic projection of `Σ z² = 0` from `e1 + i e2`.
    pub fn line_sample(&self, seed: u64) -> Result<Subspace, OctonionError> {
        let mut rng = rng_for(seed);
        let base = super::ov(&[(1, gq(1, 0)), (2, gq(0, 1))]);
        for _ in 0..RETRY_BUDGET {
            let d = small_vector(&mut rng, 3);
            let dd = d.bilinear(&d);
            let bd = base.bilinear(&d);
            if dd.is_zero() {
                continue;
            }
            // base + t d with t = −2⟨base,d⟩/⟨d,d⟩, scaled by ⟨d,d⟩.
            let p = base.scale(&dd).sub(&d.scale(&(&bd * &gq(2, 0))));
            if p.is_zero() {
                continue;
            }
            return Ok(Subspace::span(&[p]));
        }
        Err(OctonionError::ExhaustedRetries(RETRY_BUDGET))
    }

    /// Random isotropic associative three-space.
    pub fn assoc3_sample(&self, seed: u64) -> Result<Subspace, OctonionError> {
        let ell = self.line_sample(seed)?;
        self.associative_of_line(&ell, seed.wrapping_add(1))
    }

    /// Anti-self-dual plane `ℓ + x × ℓ` with `x` nondegenerate and orthogonal
    /// to a nondegenerate associative space through `ℓ`.
    pub fn asd_sample(&self, seed: u64) -> Result<Subspace, OctonionError> {
        let ell = self.line_sample(seed)?;
        let l = ell.basis()[0].clone();
        let p = self.nondegenerate_associative_through(&ell, seed.wrapping_add(7))?;
        let perp = p.perp();
        let mut rng = rng_for(seed.wrapping_mul(31).wrapping_add(3));
        for _ in 0..RETRY_BUDGET {
            let x = random_in(&mut rng, &perp);
            if x.bilinear(&x).is_zero() {
                continue;
            }
            let plane = Subspace::span(&[l.clone(), self.cross(&x, &l)]);
            if plane.dim() == 2 && plane.is_isotropic() {
                return Ok(plane);
            }
        }
        Err(OctonionError::ExhaustedRetries(RETRY_BUDGET))
    }

    /// Self-dual plane: a generic plane of an isotropic associative space.
    pub fn sd_sample(&self, seed: u64) -> Result<Subspace, OctonionError> {
        let q = self.assoc3_sample(seed)?;
        let mut rng = rng_for(seed.wrapping_mul(17).wrapping_add(5));
        for _ in 0..RETRY_BUDGET {
            let plane = Subspace::span(&[random_in(&mut rng, &q), random_in(&mut rng, &q)]);
            if plane.dim() != 2 {
                continue;
            }
            if self.classify_plane(&plane)? == PlaneClass::SelfDual {
                return Ok(plane);
            }
        }
        Err(OctonionError::ExhaustedRetries(RETRY_BUDGET))
    }

    /// Isotropic three-space of eigenspace type: the `+i` eigenspace of
    /// `u × ·` for a random rational unit vector `u`.
    pub fn eigenspace_sample(&self, seed: u64) -> Result<Subspace, OctonionError> {
        let mut rng = rng_for(seed ^ 0xe16e);
        for _ in 0..RETRY_BUDGET {
            // Inverse stereographic projection gives a rational point of S⁶.
            let t = real_vector(&mut rng, 4);
            let t6: Vec<Gq> = t.0[..6].to_vec();
            let n2 = t6.iter().fold(Gq::zero(), |acc, x| &acc + &(x * x));
            let denom = &n2 + &gq(1, 0);
            let mut u = OctVector::zero();
            for k in 0..6 {
                u.0[k] = &(&t6[k] * &gq(2, 0)) / &denom;
            }
            u.0[6] = &(&n2 - &gq(1, 0)) / &denom;
            let mut m = self.left_mul_matrix(&u);
            for (k, row) in m.iter_mut().enumerate() {
                row[k] -= &Gq::i();
            }
            let ns = crate::linalg::nullspace(&m, super::DIM);
            let q = Subspace::span(&ns.iter().map(|v| OctVector::from_slice(v)).collect::<Vec<_>>());
            if q.dim() == 3 {
                return Ok(q);
            }
        }
        Err(OctonionError::ExhaustedRetries(RETRY_BUDGET))
    }

    /// Axis line of an isotropic associative three-space.
    pub fn axis_line(&self, q: &Subspace) -> Result<Subspace, OctonionError> {
        match self.classify_3space(q, false)? {
            ThreeSpaceClass::IsotropicAssociative { image_line } => Ok(image_line),
            _ => Err(OctonionError::NotAssociative),
        }
    }
}
