//! Exact solver for the 1D Riemann problem of the gamma-law Euler equations.
//!
//! The star-region pressure solves f_L(p) + f_R(p) + (u_R - u_L) = 0 where
//! each branch function follows the Rankine-Hugoniot relation (shock) or the
//! isentropic law (rarefaction); the construction and the sampling formulas
//! are the classical ones (see e.g. Toro, "Riemann Solvers and Numerical
//! Methods for Fluid Dynamics", ch. 4).
//!
//! The solver treats `vel[0]` as the normal velocity; the remaining velocity
//! components are passive and jump only across the contact.

use crate::error::{Error, Result};
use crate::gas::{ConsState, GasLaw, PrimState};
use crate::grid::{CellField, StructMesh};
use crate::util::pairwise_sum_by;

/// Nonlinear wave family on one side of the fan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveKind {
    Shock,
    Rarefaction,
}

/// Star-region solution of a Riemann problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannFan {
    pub p_star: f64,
    pub u_star: f64,
    pub rho_star_left: f64,
    pub rho_star_right: f64,
    pub left_wave: WaveKind,
    pub right_wave: WaveKind,
}

/// Characteristic speeds bounding the fan, ordered
/// left_head <= left_tail <= contact <= right_tail <= right_head.
/// For a shock, head and tail coincide with the shock speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSpan {
    pub left_head: f64,
    pub left_tail: f64,
    pub contact: f64,
    pub right_tail: f64,
    pub right_head: f64,
}

/// Star-pressure iteration knobs. Defaults: Newton from the two-rarefaction
/// guess, pressure floor 1e-14, relative tolerance 1e-12, 100-iteration cap,
/// bisection fallback.
#[derive(Debug, Clone, Copy)]
pub struct SolverOpts {
    pub tol: f64,
    pub max_iter: usize,
    pub p_floor: f64,
}

impl Default for SolverOpts {
    fn default() -> Self {
        SolverOpts { tol: 1e-12, max_iter: 100, p_floor: 1e-14 }
    }
}

/// Sub-samples per cell used by [`exact_profile`]. A power of two keeps the
/// pairwise quadrature sum exact on cells strictly outside the fan.
const PROFILE_SUBSAMPLES: usize = 64;

/// Branch function f_K(p) and its derivative for one side of the fan.
fn branch(p: f64, rho_k: f64, p_k: f64, c_k: f64, gamma: f64) -> (f64, f64) {
    if p > p_k {
        // shock: f = (p - p_K) sqrt(A / (p + B))
        let a = 2.0 / ((gamma + 1.0) * rho_k);
        let b = (gamma - 1.0) / (gamma + 1.0) * p_k;
        let root = (a / (p + b)).sqrt();
        let f = (p - p_k) * root;
        let df = root * (1.0 - 0.5 * (p - p_k) / (p + b));
        (f, df)
    } else {
        // rarefaction: f = 2 c_K/(gamma-1) ((p/p_K)^((gamma-1)/2gamma) - 1)
        let z = (gamma - 1.0) / (2.0 * gamma);
        let ratio = p / p_k;
        let f = 2.0 * c_k / (gamma - 1.0) * (ratio.powf(z) - 1.0);
        let df = ratio.powf(-(gamma + 1.0) / (2.0 * gamma)) / (rho_k * c_k);
        (f, df)
    }
}

fn check_admissible(w: &PrimState, side: &'static str) -> Result<()> {
    if !(w.rho > 0.0) {
        return Err(Error::NonPhysical { what: side, value: w.rho });
    }
    if !(w.p > 0.0) {
        return Err(Error::NonPhysical { what: side, value: w.p });
    }
    Ok(())
}

/// Solve for the star region with explicit iteration options.
pub fn solve_star_with(
    left: &PrimState,
    right: &PrimState,
    gas: &GasLaw,
    opts: &SolverOpts,
) -> Result<RiemannFan> {
    check_admissible(left, "left rho/p")?;
    check_admissible(right, "right rho/p")?;
    let gamma = gas.gamma();
    let (cl, cr) = (gas.sound_speed(left), gas.sound_speed(right));
    let du = right.vel[0] - left.vel[0];

    // positivity condition: the two rarefactions must not pull apart to vacuum
    let bound = 2.0 * (cl + cr) / (gamma - 1.0);
    if du >= bound {
        return Err(Error::VacuumFormation { du, bound });
    }

    // two-rarefaction initial guess
    let z = (gamma - 1.0) / (2.0 * gamma);
    let guess = ((cl + cr - 0.5 * (gamma - 1.0) * du)
        / (cl / left.p.powf(z) + cr / right.p.powf(z)))
    .powf(1.0 / z);
    let mut p = guess.max(opts.p_floor);

    let eval = |p: f64| {
        let (fl, dl) = branch(p, left.rho, left.p, cl, gamma);
        let (fr, dr) = branch(p, right.rho, right.p, cr, gamma);
        (fl + fr + du, dl + dr)
    };
    let residual_ok = |p: f64, f: f64| f.abs() <= 1e-12 * p.max(1.0);

    let mut converged = false;
    for _ in 0..opts.max_iter {
        let (f, df) = eval(p);
        if residual_ok(p, f) {
            converged = true;
            break;
        }
        let p_new = (p - f / df).max(opts.p_floor);
        let rel = (p_new - p).abs() / (0.5 * (p_new + p));
        p = p_new;
        if rel < opts.tol {
            let (f, _) = eval(p);
            converged = residual_ok(p, f);
            if converged {
                break;
            }
        }
    }

    if !converged {
        // monotone f: bracket upward from the floor and bisect
        let mut lo = opts.p_floor;
        let mut hi = left.p.max(right.p).max(p);
        for _ in 0..200 {
            if eval(hi).0 > 0.0 {
                break;
            }
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if eval(mid).0 > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        p = 0.5 * (lo + hi);
        if !residual_ok(p, eval(p).0) {
            return Err(Error::NoConvergence { iterations: opts.max_iter });
        }
    }

    let (fl, _) = branch(p, left.rho, left.p, cl, gamma);
    let (fr, _) = branch(p, right.rho, right.p, cr, gamma);
    let u_star = 0.5 * (left.vel[0] + right.vel[0]) + 0.5 * (fr - fl);

    // kind ties (p* == p_K) count as rarefactions
    let g = (gamma - 1.0) / (gamma + 1.0);
    let star_rho = |w: &PrimState| {
        let ratio = p / w.p;
        if p > w.p {
            (w.rho * (ratio + g) / (g * ratio + 1.0), WaveKind::Shock)
        } else {
            (w.rho * ratio.powf(1.0 / gamma), WaveKind::Rarefaction)
        }
    };
    let (rho_star_left, left_wave) = star_rho(left);
    let (rho_star_right, right_wave) = star_rho(right);

    Ok(RiemannFan {
        p_star: p,
        u_star,
        rho_star_left,
        rho_star_right,
        left_wave,
        right_wave,
    })
}

/// Solve for the star region with default options.
pub fn solve_star(left: &PrimState, right: &PrimState, gas: &GasLaw) -> Result<RiemannFan> {
    solve_star_with(left, right, gas, &SolverOpts::default())
}

/// Characteristic speeds of the fan.
pub fn wave_span(fan: &RiemannFan, left: &PrimState, right: &PrimState, gas: &GasLaw) -> WaveSpan {
    let gamma = gas.gamma();
    let (cl, cr) = (gas.sound_speed(left), gas.sound_speed(right));
    let z = (gamma - 1.0) / (2.0 * gamma);

    let (left_head, left_tail) = match fan.left_wave {
        WaveKind::Shock => {
            let s = left.vel[0]
                - cl * ((gamma + 1.0) / (2.0 * gamma) * fan.p_star / left.p
                    + (gamma - 1.0) / (2.0 * gamma))
                .sqrt();
            (s, s)
        }
        WaveKind::Rarefaction => {
            let c_star = cl * (fan.p_star / left.p).powf(z);
            (left.vel[0] - cl, fan.u_star - c_star)
        }
    };
    let (right_tail, right_head) = match fan.right_wave {
        WaveKind::Shock => {
            let s = right.vel[0]
                + cr * ((gamma + 1.0) / (2.0 * gamma) * fan.p_star / right.p
                    + (gamma - 1.0) / (2.0 * gamma))
                .sqrt();
            (s, s)
        }
        WaveKind::Rarefaction => {
            let c_star = cr * (fan.p_star / right.p).powf(z);
            (fan.u_star + c_star, right.vel[0] + cr)
        }
    };

    WaveSpan {
        left_head,
        left_tail,
        contact: fan.u_star,
        right_tail,
        right_head,
    }
}

/// Self-similar solution at xi = x/t.
///
/// Degenerate xi exactly on a wave speed samples the upstream side: xi on a
/// shock speed returns the outer (pre-shock) state, xi on the contact returns
/// the left star state. Tangential velocity components switch across the
/// contact.
pub fn sample(
    fan: &RiemannFan,
    left: &PrimState,
    right: &PrimState,
    xi: f64,
    gas: &GasLaw,
) -> PrimState {
    let gamma = gas.gamma();
    let z = (gamma - 1.0) / (2.0 * gamma);

    if xi <= fan.u_star {
        let tangential = [left.vel[1], left.vel[2]];
        let with_tan = |rho: f64, u: f64, p: f64| PrimState {
            rho,
            vel: [u, tangential[0], tangential[1]],
            p,
        };
        let cl = gas.sound_speed(left);
        match fan.left_wave {
            WaveKind::Shock => {
                let s = left.vel[0]
                    - cl * ((gamma + 1.0) / (2.0 * gamma) * fan.p_star / left.p
                        + (gamma - 1.0) / (2.0 * gamma))
                    .sqrt();
                if xi <= s {
                    *left
                } else {
                    with_tan(fan.rho_star_left, fan.u_star, fan.p_star)
                }
            }
            WaveKind::Rarefaction => {
                let head = left.vel[0] - cl;
                let tail = fan.u_star - cl * (fan.p_star / left.p).powf(z);
                if xi <= head {
                    *left
                } else if xi >= tail {
                    with_tan(fan.rho_star_left, fan.u_star, fan.p_star)
                } else {
                    // interior of the left fan
                    let beta = 2.0 / (gamma + 1.0)
                        + (gamma - 1.0) / ((gamma + 1.0) * cl) * (left.vel[0] - xi);
                    let u = 2.0 / (gamma + 1.0) * (cl + 0.5 * (gamma - 1.0) * left.vel[0] + xi);
                    with_tan(
                        left.rho * beta.powf(2.0 / (gamma - 1.0)),
                        u,
                        left.p * beta.powf(2.0 * gamma / (gamma - 1.0)),
                    )
                }
            }
        }
    } else {
        let tangential = [right.vel[1], right.vel[2]];
        let with_tan = |rho: f64, u: f64, p: f64| PrimState {
            rho,
            vel: [u, tangential[0], tangential[1]],
            p,
        };
        let cr = gas.sound_speed(right);
        match fan.right_wave {
            WaveKind::Shock => {
                let s = right.vel[0]
                    + cr * ((gamma + 1.0) / (2.0 * gamma) * fan.p_star / right.p
                        + (gamma - 1.0) / (2.0 * gamma))
                    .sqrt();
                if xi >= s {
                    *right
                } else {
                    with_tan(fan.rho_star_right, fan.u_star, fan.p_star)
                }
            }
            WaveKind::Rarefaction => {
                let head = right.vel[0] + cr;
                let tail = fan.u_star + cr * (fan.p_star / right.p).powf(z);
                if xi >= head {
                    *right
                } else if xi <= tail {
                    with_tan(fan.rho_star_right, fan.u_star, fan.p_star)
                } else {
                    let beta = 2.0 / (gamma + 1.0)
                        - (gamma - 1.0) / ((gamma + 1.0) * cr) * (right.vel[0] - xi);
                    let u = 2.0 / (gamma + 1.0) * (-cr + 0.5 * (gamma - 1.0) * right.vel[0] + xi);
                    with_tan(
                        right.rho * beta.powf(2.0 / (gamma - 1.0)),
                        u,
                        right.p * beta.powf(2.0 * gamma / (gamma - 1.0)),
                    )
                }
            }
        }
    }
}

/// State advected through the interface xi = 0; the Godunov flux evaluates
/// the physical flux of this state.
pub fn interface_state(left: &PrimState, right: &PrimState, gas: &GasLaw) -> Result<PrimState> {
    let fan = solve_star(left, right, gas)?;
    Ok(sample(&fan, left, right, 0.0, gas))
}

/// Cell averages of the self-similar solution at time `t` on a 1D mesh, with
/// the initial jump at `jump_position`. Composite midpoint quadrature with 64
/// sub-samples per cell; cells strictly outside the fan hold exactly the
/// outer states.
pub fn exact_profile(
    left: &PrimState,
    right: &PrimState,
    jump_position: f64,
    t: f64,
    mesh: &StructMesh,
    gas: &GasLaw,
) -> Result<CellField> {
    if mesh.dim != 1 {
        return Err(Error::MeshMismatch(format!(
            "exact_profile needs a 1D mesh, got dim {}",
            mesh.dim
        )));
    }
    if !(t >= 0.0) {
        return Err(Error::InvalidConfig(format!("exact_profile needs t >= 0, got {t}")));
    }
    let fan = solve_star(left, right, gas)?;
    let ul = gas.cons_from_prim(left)?;
    let ur = gas.cons_from_prim(right)?;

    let h = mesh.h[0];
    let s = PROFILE_SUBSAMPLES;
    let mut data = Vec::with_capacity(mesh.cell_count());
    for i in 0..mesh.n[0] {
        let x0 = mesh.origin[0] + i as f64 * h;
        let avg = pairwise_sum_by(0, s, ConsState::ZERO, &|k| {
            let x = x0 + (k as f64 + 0.5) / s as f64 * h;
            if t == 0.0 {
                // initial data; left-closed at the jump
                if x <= jump_position {
                    ul
                } else {
                    ur
                }
            } else {
                let w = sample(&fan, left, right, (x - jump_position) / t, gas);
                gas.cons_from_prim(&w).expect("sampled fan state is admissible")
            }
        }) * (1.0 / s as f64);
        data.push(avg);
    }
    Ok(CellField { mesh: *mesh, data })
}
