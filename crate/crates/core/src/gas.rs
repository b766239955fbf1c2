//! Gamma-law gas thermodynamics: state conversions, the physical entropy
//! eta = C_v rho ln(p / rho^gamma), and the internal energy rho*e expressed in
//! the (rho, eta) variables together with its first and second derivatives.
//! The gas constant is normalized to 1, so the temperature is theta = p / rho
//! and C_v = 1 / (gamma - 1).

use crate::error::{Error, Result};

/// Primitive state (rho, velocity, p). `vel` always has three slots; unused
/// trailing components are zero, so the same type serves 1D and 2D fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimState {
    pub rho: f64,
    pub vel: [f64; 3],
    pub p: f64,
}

impl PrimState {
    pub fn new_1d(rho: f64, u: f64, p: f64) -> Self {
        Self { rho, vel: [u, 0.0, 0.0], p }
    }

    pub fn new_2d(rho: f64, u: f64, v: f64, p: f64) -> Self {
        Self { rho, vel: [u, v, 0.0], p }
    }
}

/// Conserved state (rho, momentum, total energy). Same three-slot momentum
/// convention as [`PrimState`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConsState {
    pub rho: f64,
    pub mom: [f64; 3],
    pub e_total: f64,
}

impl ConsState {
    pub const ZERO: ConsState = ConsState { rho: 0.0, mom: [0.0; 3], e_total: 0.0 };

    pub fn new_1d(rho: f64, mx: f64, e: f64) -> Self {
        Self { rho, mom: [mx, 0.0, 0.0], e_total: e }
    }

    /// Euclidean norm over the (rho, mom, E) components; used for interface
    /// jump magnitudes.
    pub fn norm(&self) -> f64 {
        (self.rho * self.rho
            + self.mom[0] * self.mom[0]
            + self.mom[1] * self.mom[1]
            + self.mom[2] * self.mom[2]
            + self.e_total * self.e_total)
            .sqrt()
    }
}

impl std::ops::Add for ConsState {
    type Output = ConsState;
    fn add(self, o: ConsState) -> ConsState {
        ConsState {
            rho: self.rho + o.rho,
            mom: [
                self.mom[0] + o.mom[0],
                self.mom[1] + o.mom[1],
                self.mom[2] + o.mom[2],
            ],
            e_total: self.e_total + o.e_total,
        }
    }
}

impl std::ops::Sub for ConsState {
    type Output = ConsState;
    fn sub(self, o: ConsState) -> ConsState {
        ConsState {
            rho: self.rho - o.rho,
            mom: [
                self.mom[0] - o.mom[0],
                self.mom[1] - o.mom[1],
                self.mom[2] - o.mom[2],
            ],
            e_total: self.e_total - o.e_total,
        }
    }
}

impl std::ops::Mul<f64> for ConsState {
    type Output = ConsState;
    fn mul(self, s: f64) -> ConsState {
        ConsState {
            rho: self.rho * s,
            mom: [self.mom[0] * s, self.mom[1] * s, self.mom[2] * s],
            e_total: self.e_total * s,
        }
    }
}

/// Thermodynamic point of the (rho, eta) closure: pressure, temperature
/// theta = p / rho and specific internal energy e = C_v theta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoPoint {
    pub p: f64,
    pub theta: f64,
    pub e: f64,
}

/// Gamma-law equation of state with gamma in (1, 2].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasLaw {
    gamma: f64,
    c_v: f64,
}

impl Default for GasLaw {
    fn default() -> Self {
        GasLaw::new(1.4).unwrap()
    }
}

impl GasLaw {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0 && gamma <= 2.0) {
            return Err(Error::InvalidGamma(gamma));
        }
        Ok(GasLaw { gamma, c_v: 1.0 / (gamma - 1.0) })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn c_v(&self) -> f64 {
        self.c_v
    }

    /// E = p/(gamma-1) + rho |u|^2 / 2. Rejects rho <= 0 and p <= 0.
    pub fn cons_from_prim(&self, w: &PrimState) -> Result<ConsState> {
        if !(w.rho > 0.0) {
            return Err(Error::NonPhysical { what: "rho", value: w.rho });
        }
        if !(w.p > 0.0) {
            return Err(Error::NonPhysical { what: "p", value: w.p });
        }
        let q2 = w.vel[0] * w.vel[0] + w.vel[1] * w.vel[1] + w.vel[2] * w.vel[2];
        Ok(ConsState {
            rho: w.rho,
            mom: [w.rho * w.vel[0], w.rho * w.vel[1], w.rho * w.vel[2]],
            e_total: w.p / (self.gamma - 1.0) + 0.5 * w.rho * q2,
        })
    }

    /// Inverse of [`cons_from_prim`]; rejects rho <= 0 and non-positive
    /// internal energy instead of clamping.
    pub fn prim_from_cons(&self, u: &ConsState) -> Result<PrimState> {
        if !(u.rho > 0.0) {
            return Err(Error::NonPhysical { what: "rho", value: u.rho });
        }
        let vel = [u.mom[0] / u.rho, u.mom[1] / u.rho, u.mom[2] / u.rho];
        let e_int = u.e_total
            - 0.5 * (u.mom[0] * vel[0] + u.mom[1] * vel[1] + u.mom[2] * vel[2]);
        if !(e_int > 0.0) {
            return Err(Error::NonPhysical { what: "internal energy", value: e_int });
        }
        Ok(PrimState { rho: u.rho, vel, p: (self.gamma - 1.0) * e_int })
    }

    /// Pressure recovered from a conserved state.
    pub fn pressure(&self, u: &ConsState) -> Result<f64> {
        Ok(self.prim_from_cons(u)?.p)
    }

    /// Physical entropy eta = C_v rho ln(p / rho^gamma) of a conserved state.
    pub fn entropy_eta(&self, u: &ConsState) -> Result<f64> {
        let p = self.pressure(u)?;
        Ok(self.c_v * u.rho * (p.ln() - self.gamma * u.rho.ln()))
    }

    /// (rho, eta) closure: S = eta/(C_v rho), p = rho^gamma e^S, theta = p/rho.
    pub fn thermo_from_rho_eta(&self, rho: f64, eta: f64) -> Result<ThermoPoint> {
        if !(rho > 0.0) {
            return Err(Error::NonPhysical { what: "rho", value: rho });
        }
        let s = eta / (self.c_v * rho);
        let p = (self.gamma * rho.ln() + s).exp();
        let theta = p / rho;
        Ok(ThermoPoint { p, theta, e: self.c_v * theta })
    }

    /// First derivatives of rho*e in the (rho, eta) variables:
    /// d(rho e)/d rho = (1 + C_v) theta - eta theta / rho,  d(rho e)/d eta = theta.
    pub fn d_rho_e(&self, rho: f64, eta: f64) -> Result<(f64, f64)> {
        let t = self.thermo_from_rho_eta(rho, eta)?;
        Ok((
            (1.0 + self.c_v) * t.theta - eta * t.theta / rho,
            t.theta,
        ))
    }

    /// Hessian of rho*e in (rho, eta):
    /// theta/(C_v rho) * [[1, 1 - eta/rho], [1 - eta/rho, C_v + (1 - eta/rho)^2]].
    /// Positive definite for rho > 0, with determinant C_v (theta/(C_v rho))^2.
    pub fn hessian_rho_e(&self, rho: f64, eta: f64) -> Result<[[f64; 2]; 2]> {
        let t = self.thermo_from_rho_eta(rho, eta)?;
        let scale = t.theta / (self.c_v * rho);
        let k = 1.0 - eta / rho;
        Ok([
            [scale, scale * k],
            [scale * k, scale * (self.c_v + k * k)],
        ])
    }

    /// c = sqrt(gamma p / rho); `w` must be admissible.
    pub fn sound_speed(&self, w: &PrimState) -> f64 {
        (self.gamma * w.p / w.rho).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gas() -> GasLaw {
        GasLaw::default()
    }

    #[test]
    fn gamma_domain_is_enforced() {
        assert!(GasLaw::new(1.0).is_err());
        assert!(GasLaw::new(2.2).is_err());
        assert!(GasLaw::new(f64::NAN).is_err());
        assert!(GasLaw::new(2.0).is_ok());
        assert!(GasLaw::new(1.0 + 1e-9).is_ok());
    }

    #[test]
    fn cons_from_prim_reference_values() {
        let u = gas().cons_from_prim(&PrimState::new_1d(1.0, 0.0, 1.0)).unwrap();
        assert_eq!(u.rho, 1.0);
        assert_eq!(u.mom, [0.0; 3]);
        assert_relative_eq!(u.e_total, 2.5, max_relative = 1e-15);

        // left state of the single-contact wave
        let u = gas().cons_from_prim(&PrimState::new_1d(0.5, 0.5, 5.0)).unwrap();
        assert_relative_eq!(u.mom[0], 0.25, max_relative = 1e-15);
        assert_relative_eq!(u.e_total, 12.5625, max_relative = 1e-15);
    }

    #[test]
    fn degenerate_states_are_rejected_not_clamped() {
        assert!(gas().cons_from_prim(&PrimState::new_1d(-1.0, 0.0, 1.0)).is_err());
        assert!(gas().cons_from_prim(&PrimState::new_1d(1.0, 0.0, 0.0)).is_err());
        // kinetic energy exceeding the total => negative internal energy
        let u = ConsState::new_1d(1.0, 3.0, 1.0);
        assert!(gas().prim_from_cons(&u).is_err());
        assert!(gas().prim_from_cons(&ConsState::new_1d(0.0, 0.0, 1.0)).is_err());
        assert!(gas().thermo_from_rho_eta(0.0, 1.0).is_err());
    }

    #[test]
    fn prim_cons_round_trip_on_random_states() {
        let g = gas();
        let mut rng = ChaCha8Rng::seed_from_u64(0x67a5);
        for _ in 0..1000 {
            let w = PrimState::new_2d(
                rng.gen_range(0.05..5.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(0.02..10.0),
            );
            let back = g.prim_from_cons(&g.cons_from_prim(&w).unwrap()).unwrap();
            assert_relative_eq!(back.rho, w.rho, max_relative = 1e-14);
            assert_relative_eq!(back.p, w.p, max_relative = 1e-13);
            for a in 0..3 {
                assert_relative_eq!(back.vel[a], w.vel[a], epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn entropy_reference_values() {
        // C_v rho (ln p - gamma ln rho) at (rho, p) = (0.125, 0.1), gamma = 1.4
        let u = gas().cons_from_prim(&PrimState::new_1d(0.125, 0.0, 0.1)).unwrap();
        assert_relative_eq!(
            gas().entropy_eta(&u).unwrap(),
            0.19019783292428894,
            max_relative = 1e-12
        );
        // (1, 0, 1) has S = 0 exactly
        let u = gas().cons_from_prim(&PrimState::new_1d(1.0, 0.0, 1.0)).unwrap();
        assert!(gas().entropy_eta(&u).unwrap().abs() < 1e-15);
    }

    #[test]
    fn rho_eta_closure_reference_value_and_inverse() {
        // p(rho=2, eta=1) = 2^1.4 * exp(0.2)
        let t = gas().thermo_from_rho_eta(2.0, 1.0).unwrap();
        assert_relative_eq!(t.p, 3.2233012032643526, max_relative = 1e-13);
        assert_relative_eq!(t.theta, t.p / 2.0, max_relative = 1e-15);
        assert_relative_eq!(t.e, 2.5 * t.theta, max_relative = 1e-15);

        // closure inverts entropy_eta
        let w = PrimState::new_1d(2.0, 0.0, t.p);
        let u = gas().cons_from_prim(&w).unwrap();
        assert_relative_eq!(gas().entropy_eta(&u).unwrap(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn d_rho_e_reference_point_and_finite_differences() {
        let g = gas();
        let (dr, de) = g.d_rho_e(1.0, 0.0).unwrap();
        assert_relative_eq!(dr, 3.5, max_relative = 1e-14);
        assert_relative_eq!(de, 1.0, max_relative = 1e-14);

        let rho_e = |rho: f64, eta: f64| {
            let t = g.thermo_from_rho_eta(rho, eta).unwrap();
            rho * t.e
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0x11d);
        for _ in 0..50 {
            let rho = rng.gen_range(0.1..4.0);
            let eta = rng.gen_range(-1.5..1.5);
            let (dr, de) = g.d_rho_e(rho, eta).unwrap();
            let h = 1e-6;
            let fd_r = (rho_e(rho + h, eta) - rho_e(rho - h, eta)) / (2.0 * h);
            let fd_e = (rho_e(rho, eta + h) - rho_e(rho, eta - h)) / (2.0 * h);
            assert_relative_eq!(dr, fd_r, max_relative = 1e-6);
            assert_relative_eq!(de, fd_e, max_relative = 1e-6);
        }
    }

    #[test]
    fn hessian_reference_point_and_determinant_identity() {
        let g = gas();
        let h = g.hessian_rho_e(1.0, 0.0).unwrap();
        assert_relative_eq!(h[0][0], 0.4, max_relative = 1e-14);
        assert_relative_eq!(h[0][1], 0.4, max_relative = 1e-14);
        assert_relative_eq!(h[1][0], 0.4, max_relative = 1e-14);
        assert_relative_eq!(h[1][1], 1.4, max_relative = 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(0xbee);
        for _ in 0..200 {
            let rho = rng.gen_range(0.05..5.0);
            let eta = rng.gen_range(-2.0..2.0);
            let h = g.hessian_rho_e(rho, eta).unwrap();
            let t = g.thermo_from_rho_eta(rho, eta).unwrap();
            let scale = t.theta / (g.c_v() * rho);
            let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
            assert_relative_eq!(det, g.c_v() * scale * scale, max_relative = 1e-13);
            assert_eq!(h[0][1], h[1][0]);
            // positive definite: both leading minors positive
            assert!(h[0][0] > 0.0 && det > 0.0);
        }
    }

    #[test]
    fn gibbs_relation_probe() {
        // Gibbs relation theta ds = de + p d(1/rho) with specific entropy
        // s = eta / rho; central differences along a fixed direction must
        // leave a residual shrinking like t^2.
        let g = gas();
        let (rho0, eta0) = (1.3, 0.4);
        let dir = (0.7, -0.4);
        let residual = |t: f64| {
            let q = |s: f64| {
                let (rho, eta) = (rho0 + s * dir.0, eta0 + s * dir.1);
                let tp = g.thermo_from_rho_eta(rho, eta).unwrap();
                (eta / rho, tp.e, 1.0 / rho)
            };
            let (sp, ep, vp) = q(t);
            let (sm, em, vm) = q(-t);
            let tp0 = g.thermo_from_rho_eta(rho0, eta0).unwrap();
            tp0.theta * (sp - sm) / (2.0 * t) - (ep - em) / (2.0 * t)
                - tp0.p * (vp - vm) / (2.0 * t)
        };
        let r1 = residual(1e-3).abs();
        let r2 = residual(5e-4).abs();
        assert!(r1 < 1e-5, "gibbs residual too large: {r1}");
        // second-order decay (ratio ~ 4 for half the step)
        assert!(r1 / r2 > 3.0 && r1 / r2 < 5.0, "ratio {}", r1 / r2);
    }

    #[test]
    fn sound_speed_reference_value() {
        let c = gas().sound_speed(&PrimState::new_1d(1.0, 0.0, 1.0));
        assert_relative_eq!(c, 1.1832159566199232, max_relative = 1e-15);
    }
}
