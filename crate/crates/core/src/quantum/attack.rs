use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{ComplexVector, PreparedState};
use crate::{Error, Result};

/// Absolute tolerance on the isometry constraints.
pub const UNITARITY_TOL: f64 = 1e-12;

pub const DEFAULT_ANCILLA_DIM: usize = 4;

/// Bob-side component of Eve's output state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Zero = 0,
    One = 1,
    Vacuum = 2,
}

impl Component {
    pub const ALL: [Component; 3] = [Self::Zero, Self::One, Self::Vacuum];
}

/// A collective attack given by the six ancilla vectors `phi_i^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct EveAttack {
    ancilla_dim: usize,
    // phi[i][j]: Alice's Z input i, Bob component j.
    phi: [[ComplexVector; 3]; 2],
}

impl EveAttack {
    /// Builds an attack and checks the isometry constraints.
    pub fn new(phi: [[ComplexVector; 3]; 2]) -> Result<Self> {
        let ancilla_dim = phi[0][0].len();
        if ancilla_dim == 0 {
            return Err(Error::param("ancilla_dim", "must be at least 1"));
        }
        if phi.iter().flatten().any(|v| v.len() != ancilla_dim) {
            return Err(Error::param("phi", "all ancilla vectors must share one dimension"));
        }
        let attack = Self { ancilla_dim, phi };
        let worst = attack.unitarity_residuals().into_iter().fold(0.0_f64, f64::max);
        if !(worst <= UNITARITY_TOL) {
            return Err(Error::param("phi", format!("not an isometry (residual {worst:e})")));
        }
        Ok(attack)
    }

    /// No eavesdropping: `phi_0^0 = phi_1^1 = e_0`.
    pub fn identity(ancilla_dim: usize) -> Result<Self> {
        if ancilla_dim == 0 {
            return Err(Error::param("ancilla_dim", "must be at least 1"));
        }
        let e0 = basis_vector(ancilla_dim, 0);
        let zero = ComplexVector::zeros(ancilla_dim);
        Self::new([[e0.clone(), zero.clone(), zero.clone()], [zero.clone(), e0, zero]])
    }

    /// Eve copies the Z bit into orthogonal ancilla states.
    pub fn intercept_resend() -> Self {
        let zero = ComplexVector::zeros(2);
        Self::new([
            [basis_vector(2, 0), zero.clone(), zero.clone()],
            [zero.clone(), basis_vector(2, 1), zero],
        ])
        .expect("orthonormal construction")
    }

    /// Relative phase flip: |+> is mapped to |->.
    pub fn phase_flip(ancilla_dim: usize) -> Result<Self> {
        if ancilla_dim == 0 {
            return Err(Error::param("ancilla_dim", "must be at least 1"));
        }
        let e0 = basis_vector(ancilla_dim, 0);
        let zero = ComplexVector::zeros(ancilla_dim);
        Self::new([[e0.clone(), zero.clone(), zero.clone()], [zero.clone(), -e0, zero]])
    }

    /// Random isometry: two orthonormal columns of a QR-reduced complex
    /// Gaussian `3d x 2` matrix, cut into the six blocks. The vacuum rows are
    /// scaled so that roughly `loss_weight` of each column's mass lands there.
    pub fn sample(ancilla_dim: usize, loss_weight: f64, seed: u64) -> Result<Self> {
        check_sampling(ancilla_dim, loss_weight)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = ancilla_dim;
        let vac_scale = (2.0 * loss_weight / (1.0 - loss_weight)).sqrt();
        let g = DMatrix::<Complex64>::from_fn(3 * d, 2, |r, _| {
            let z = gaussian(&mut rng);
            if r >= 2 * d {
                z * vac_scale
            } else {
                z
            }
        });
        let q = g.qr().q();
        let block = |col: usize, comp: usize| -> ComplexVector {
            ComplexVector::from_iterator(d, (0..d).map(|r| q[(comp * d + r, col)]))
        };
        Self::new([
            [block(0, 0), block(0, 1), block(0, 2)],
            [block(1, 0), block(1, 1), block(1, 2)],
        ])
    }

    /// Random attack that never flips a Z bit (`phi_0^1 = phi_1^0 = 0`).
    pub fn sample_without_bit_flips(ancilla_dim: usize, loss_weight: f64, seed: u64) -> Result<Self> {
        check_sampling(ancilla_dim, loss_weight)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = ancilla_dim;
        let vac_scale = (loss_weight / (1.0 - loss_weight)).sqrt();
        let mut draw = |scale: f64| ComplexVector::from_iterator(d, (0..d).map(|_| gaussian(&mut rng) * scale));
        let keep0 = draw(1.0);
        let keep1 = draw(1.0);
        let vac0 = draw(vac_scale);
        let mut vac1 = draw(vac_scale);
        // The only cross term left in the isometry condition is <vac0|vac1>.
        let n0 = vac0.norm_squared();
        if n0 > 0.0 {
            let overlap = vac0.dotc(&vac1) / n0;
            vac1 -= &vac0 * overlap;
        }
        let norm0 = (keep0.norm_squared() + vac0.norm_squared()).sqrt();
        let norm1 = (keep1.norm_squared() + vac1.norm_squared()).sqrt();
        let zero = ComplexVector::zeros(d);
        Self::new([
            [keep0.unscale(norm0), zero.clone(), vac0.unscale(norm0)],
            [zero, keep1.unscale(norm1), vac1.unscale(norm1)],
        ])
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla_dim
    }

    /// `phi_i^j` for Alice's Z bit `i`.
    pub fn phi(&self, input: usize, component: Component) -> &ComplexVector {
        &self.phi[input][component as usize]
    }

    /// `[|sum_j <phi_0^j|phi_0^j> - 1|, |sum_j <phi_1^j|phi_1^j> - 1|, |sum_j <phi_0^j|phi_1^j>|]`
    pub fn unitarity_residuals(&self) -> [f64; 3] {
        let norm = |i: usize| self.phi[i].iter().map(|v| v.norm_squared()).sum::<f64>();
        let cross: Complex64 = (0..3).map(|j| self.phi[0][j].dotc(&self.phi[1][j])).sum();
        [(norm(0) - 1.0).abs(), (norm(1) - 1.0).abs(), cross.norm()]
    }

    /// `<phi_a^j | phi_b^k>`
    pub fn overlap(&self, a: usize, j: Component, b: usize, k: Component) -> Complex64 {
        self.phi(a, j).dotc(self.phi(b, k))
    }

    /// Eve-side vectors attached to Bob's |0>, |1> and vacuum components
    /// when Alice prepares `state`.
    pub fn bob_components(&self, state: PreparedState) -> [ComplexVector; 3] {
        let (c0, c1) = state.amplitudes();
        std::array::from_fn(|j| &self.phi[0][j] * Complex64::from(c0) + &self.phi[1][j] * Complex64::from(c1))
    }

    /// Adds a fraction `loss` of extra, basis-independent vacuum: every
    /// non-vacuum amplitude shrinks by `sqrt(1 - loss)` and the removed
    /// weight moves to two fresh orthogonal ancilla directions.
    pub fn with_basis_independent_loss(&self, loss: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&loss) {
            return Err(Error::param("loss", "must lie in [0, 1]"));
        }
        let d = self.ancilla_dim;
        let keep = Complex64::from((1.0 - loss).sqrt());
        let extra = Complex64::from(loss.sqrt());
        let phi = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut v = ComplexVector::zeros(d + 2);
                v.rows_mut(0, d).copy_from(&(&self.phi[i][j] * keep));
                if j == Component::Vacuum as usize {
                    v[d + i] = extra;
                }
                v
            })
        });
        Self::new(phi)
    }
}

fn check_sampling(ancilla_dim: usize, loss_weight: f64) -> Result<()> {
    if ancilla_dim == 0 {
        return Err(Error::param("ancilla_dim", "must be at least 1"));
    }
    if !(0.0..1.0).contains(&loss_weight) {
        return Err(Error::param("loss_weight", "must lie in [0, 1)"));
    }
    Ok(())
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

fn basis_vector(dim: usize, k: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(dim);
    v[k] = Complex64::from(1.0);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_zero_residuals() {
        for d in 1..6 {
            let a = EveAttack::identity(d).unwrap();
            assert_eq!(a.unitarity_residuals(), [0.0; 3]);
            assert_eq!(a.phi(0, Component::Zero)[0], Complex64::from(1.0));
            assert_eq!(a.phi(1, Component::One)[0], Complex64::from(1.0));
            assert_eq!(a.phi(0, Component::One).norm(), 0.0);
        }
        assert!(EveAttack::identity(0).is_err());
    }

    #[test]
    fn intercept_resend_is_exact_isometry() {
        let a = EveAttack::intercept_resend();
        assert_eq!(a.unitarity_residuals(), [0.0; 3]);
        assert_eq!(a.overlap(0, Component::Zero, 1, Component::One).norm(), 0.0);
    }

    #[test]
    fn random_attack_is_isometry_and_deterministic() {
        let a = EveAttack::sample(4, 0.3, 1).unwrap();
        assert!(a.unitarity_residuals().iter().all(|r| *r <= UNITARITY_TOL));
        assert_eq!(a, EveAttack::sample(4, 0.3, 1).unwrap());
        assert_ne!(a, EveAttack::sample(4, 0.3, 2).unwrap());
        assert!(EveAttack::sample(0, 0.3, 1).is_err());
        assert!(EveAttack::sample(2, 1.0, 1).is_err());
    }

    #[test]
    fn zero_loss_weight_leaves_vacuum_empty() {
        let a = EveAttack::sample(3, 0.0, 11).unwrap();
        assert_eq!(a.phi(0, Component::Vacuum).norm(), 0.0);
        assert_eq!(a.phi(1, Component::Vacuum).norm(), 0.0);
    }

    #[test]
    fn loss_weight_biases_vacuum_mass() {
        let mass = |w: f64| -> f64 {
            (0..200)
                .map(|s| {
                    let a = EveAttack::sample(4, w, s).unwrap();
                    a.phi(0, Component::Vacuum).norm_squared()
                })
                .sum::<f64>()
                / 200.0
        };
        let (lo, hi) = (mass(0.1), mass(0.8));
        assert!(lo < 0.2 && hi > 0.6, "lo={lo} hi={hi}");
    }

    #[test]
    fn bit_flip_free_sampler() {
        for s in 0..50 {
            let a = EveAttack::sample_without_bit_flips(3, 0.4, s).unwrap();
            assert_eq!(a.phi(0, Component::One).norm(), 0.0);
            assert_eq!(a.phi(1, Component::Zero).norm(), 0.0);
        }
    }

    #[test]
    fn added_loss_keeps_isometry() {
        let a = EveAttack::sample(2, 0.2, 5).unwrap();
        let b = a.with_basis_independent_loss(0.7).unwrap();
        assert_eq!(b.ancilla_dim(), 4);
        assert!(b.unitarity_residuals().iter().all(|r| *r <= UNITARITY_TOL));
    }

    #[test]
    fn rejects_non_isometry() {
        let v = ComplexVector::from_element(1, Complex64::from(0.5));
        let z = ComplexVector::zeros(1);
        let err = EveAttack::new([[v.clone(), z.clone(), z.clone()], [z.clone(), v, z]]);
        assert!(err.is_err());
    }
}
