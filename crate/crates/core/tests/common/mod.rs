//! Shared helpers for the integration tests: an independent bisection solver
//! for the star pressure of the 1D Riemann problem, and admissible-state
//! sampling inside the acceptance box.

use eulerfv::{GasLaw, PrimState};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Star pressure by interval bisection on the pressure function, written
/// directly from the Rankine-Hugoniot jump conditions (shock branch, via the
/// mass flux Q_K) and the isentropic relations (rarefaction branch, via
/// exp/ln). Entirely independent of the library's Newton iteration.
pub fn bisect_star_pressure(left: &PrimState, right: &PrimState, gamma: f64) -> f64 {
    let f_side = |p: f64, w: &PrimState| -> f64 {
        if p > w.p {
            let q = (w.rho * ((gamma + 1.0) * p + (gamma - 1.0) * w.p) / 2.0).sqrt();
            (p - w.p) / q
        } else {
            let c = (gamma * w.p / w.rho).sqrt();
            let z = (gamma - 1.0) / (2.0 * gamma);
            2.0 * c / (gamma - 1.0) * ((z * (p / w.p).ln()).exp() - 1.0)
        }
    };
    let f = |p: f64| f_side(p, left) + f_side(p, right) + (right.vel[0] - left.vel[0]);

    // The pressure function is strictly increasing; bracket the root by
    // halving/doubling from the input pressures, then bisect to width 1e-12.
    let mut lo = left.p.min(right.p);
    let mut hi = left.p.max(right.p);
    while f(lo) > 0.0 {
        hi = lo;
        lo *= 0.5;
        assert!(lo > 1e-300, "no lower bracket: vacuum-adjacent data");
    }
    while f(hi) < 0.0 {
        hi *= 2.0;
        assert!(hi < 1e300, "no upper bracket: inadmissible data");
    }
    for _ in 0..200 {
        if hi - lo <= 1e-12 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Uniform state in the acceptance box rho in [0.05, 5], |u| <= 3,
/// p in [0.02, 10].
pub fn random_state(rng: &mut ChaCha8Rng) -> PrimState {
    PrimState::new_1d(
        rng.gen_range(0.05..=5.0),
        rng.gen_range(-3.0..=3.0),
        rng.gen_range(0.02..=10.0),
    )
}

/// Pair satisfying the no-vacuum condition 2(c_L + c_R)/(gamma - 1) > u_R - u_L.
pub fn random_vacuum_free_pair(rng: &mut ChaCha8Rng, gas: &GasLaw) -> (PrimState, PrimState) {
    loop {
        let l = random_state(rng);
        let r = random_state(rng);
        let margin = 2.0 * (gas.sound_speed(&l) + gas.sound_speed(&r)) / (gas.gamma() - 1.0)
            - (r.vel[0] - l.vel[0]);
        if margin > 1e-6 {
            return (l, r);
        }
    }
}
