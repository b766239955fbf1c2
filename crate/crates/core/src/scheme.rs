//! First-order finite-volume schemes on structured meshes: the Godunov
//! scheme with the exact Riemann solver and a diffusive central scheme (VFV)
//! used as a comparison method, advanced with unsplit forward-Euler steps
//! under a CFL-limited adaptive dt.
//!
//! Face fluxes and cell updates are data-parallel map work; all reductions
//! run in a fixed order so parallel and sequential execution agree bitwise.

use crate::error::{Error, Result};
use crate::gas::{ConsState, GasLaw, PrimState};
use crate::grid::{CellField, StructMesh};
use crate::riemann;
use crate::util::{map_indexed, pairwise_sum_by, ExecMode};

/// Numerical flux family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeKind {
    Godunov,
    /// Central average plus scalar dissipation 0.5*lambda*[[U]] with
    /// lambda = mu_scale * max(|u.n| + c) + h^epsilon. A deliberately simple
    /// stand-in for the viscosity finite-volume method it is compared
    /// against; run it at CFL 0.3.
    Vfv { mu_scale: f64, epsilon: f64 },
}

impl SchemeKind {
    pub fn vfv_default() -> Self {
        SchemeKind::Vfv { mu_scale: 1.0, epsilon: 1.0 }
    }

    /// Desk defaults: 0.9 for Godunov, 0.3 for the diffusive scheme.
    pub fn default_cfl(&self) -> f64 {
        match self {
            SchemeKind::Godunov => 0.9,
            SchemeKind::Vfv { .. } => 0.3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SchemeKind::Godunov => "godunov",
            SchemeKind::Vfv { .. } => "vfv",
        }
    }
}

/// Boundary treatment of one mesh face.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    /// Mirror the normal momentum component (slip wall).
    Reflective,
    /// Copy the inner state (outflow).
    Transmissive,
    /// Wrap around to the opposite side; must be set on both faces of an axis.
    Periodic,
}

/// Per-axis boundary tags, `tags[axis] = [low, high]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryConfig {
    pub tags: [[BoundaryKind; 2]; 3],
}

impl BoundaryConfig {
    pub fn uniform(kind: BoundaryKind) -> Self {
        BoundaryConfig { tags: [[kind; 2]; 3] }
    }

    /// Periodic tags must pair up across each axis.
    pub fn validate(&self, dim: usize) -> Result<()> {
        for a in 0..dim {
            let lo = self.tags[a][0] == BoundaryKind::Periodic;
            let hi = self.tags[a][1] == BoundaryKind::Periodic;
            if lo != hi {
                return Err(Error::InvalidConfig(format!(
                    "periodic boundary on axis {a} must be set on both faces"
                )));
            }
        }
        Ok(())
    }
}

/// Ghost state outside a non-periodic boundary face with outward normal
/// along `axis`. Periodic faces pair with the opposite side of the mesh and
/// never consult a ghost state.
pub fn ghost_state(inner: &ConsState, kind: BoundaryKind, axis: usize) -> ConsState {
    match kind {
        BoundaryKind::Reflective => {
            let mut g = *inner;
            g.mom[axis] = -g.mom[axis];
            g
        }
        BoundaryKind::Transmissive => *inner,
        BoundaryKind::Periodic => {
            panic!("periodic faces wrap around the mesh; there is no ghost state")
        }
    }
}

/// Physical flux F(U) . n for the unit normal along `axis`.
pub fn physical_flux(w: &PrimState, axis: usize, gas: &GasLaw) -> ConsState {
    let q2 = w.vel[0] * w.vel[0] + w.vel[1] * w.vel[1] + w.vel[2] * w.vel[2];
    let e_total = w.p / (gas.gamma() - 1.0) + 0.5 * w.rho * q2;
    let un = w.vel[axis];
    let mut mom = [
        w.rho * un * w.vel[0],
        w.rho * un * w.vel[1],
        w.rho * un * w.vel[2],
    ];
    mom[axis] += w.p;
    ConsState { rho: w.rho * un, mom, e_total: un * (e_total + w.p) }
}

fn swap_axis0(w: &PrimState, axis: usize) -> PrimState {
    let mut v = *w;
    v.vel.swap(0, axis);
    v
}

/// Godunov flux: rotate into the face frame, sample the exact Riemann fan at
/// xi = 0, and evaluate the physical flux of the interface state. Equal
/// states short-circuit to the physical flux, which also makes consistency
/// exact and skips the star iteration on uniform regions.
pub fn godunov_flux(
    wl: &PrimState,
    wr: &PrimState,
    axis: usize,
    gas: &GasLaw,
) -> Result<ConsState> {
    if wl == wr {
        return Ok(physical_flux(wl, axis, gas));
    }
    let l = swap_axis0(wl, axis);
    let r = swap_axis0(wr, axis);
    let w0 = riemann::interface_state(&l, &r, gas)?;
    Ok(physical_flux(&swap_axis0(&w0, axis), axis, gas))
}

/// Diffusive comparison flux: 0.5 (F(uL) + F(uR)) . n - 0.5 lambda [[U]],
/// lambda = mu_scale * max(|uL.n| + cL, |uR.n| + cR) + h^epsilon.
pub fn vfv_flux(
    wl: &PrimState,
    wr: &PrimState,
    axis: usize,
    gas: &GasLaw,
    mu_scale: f64,
    epsilon: f64,
    h: f64,
) -> Result<ConsState> {
    let ul = gas.cons_from_prim(wl)?;
    let ur = gas.cons_from_prim(wr)?;
    let sl = wl.vel[axis].abs() + gas.sound_speed(wl);
    let sr = wr.vel[axis].abs() + gas.sound_speed(wr);
    let lambda = mu_scale * sl.max(sr) + h.powf(epsilon);
    let central = (physical_flux(wl, axis, gas) + physical_flux(wr, axis, gas)) * 0.5;
    Ok(central - (ur - ul) * (0.5 * lambda))
}

/// Per-step diagnostics: extrema, signal speed, interface-jump sums, and the
/// measure-weighted conserved totals (all evaluated on the post-step field;
/// jump sums run over interior faces, counting the wrap face on periodic
/// axes).
#[derive(Debug, Clone, Copy)]
pub struct StepStats {
    pub t: f64,
    pub dt: f64,
    pub smax: f64,
    pub rho_min: f64,
    pub p_min: f64,
    pub e_max: f64,
    pub jump_l1: f64,
    pub jump_l2h: f64,
    pub totals: ConsState,
}

impl StepStats {
    pub fn csv_header(dim: usize) -> String {
        let mom = if dim == 2 { "momx,momy" } else { "momx" };
        format!("t,dt,smax,rho_min,p_min,E_max,jump_l1,jump_l2h,mass,{mom},energy")
    }

    pub fn csv_row(&self, dim: usize) -> String {
        let f = |x: f64| format!("{x:.16e}");
        let mut cols = vec![
            f(self.t),
            f(self.dt),
            f(self.smax),
            f(self.rho_min),
            f(self.p_min),
            f(self.e_max),
            f(self.jump_l1),
            f(self.jump_l2h),
            f(self.totals.rho),
            f(self.totals.mom[0]),
        ];
        if dim == 2 {
            cols.push(f(self.totals.mom[1]));
        }
        cols.push(f(self.totals.e_total));
        cols.join(",")
    }
}

/// Time-integration configuration. The mesh travels with the initial field
/// handed to [`run`]; solution monitors abort (never clamp) when density or
/// pressure cross their floors.
#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub scheme: SchemeKind,
    pub boundary: BoundaryConfig,
    pub gas: GasLaw,
    pub cfl: f64,
    pub t_final: f64,
    pub rho_min_alarm: f64,
    pub p_min_alarm: f64,
    pub exec: ExecMode,
    /// Record stats every k-th step (the final step is always recorded).
    pub stats_every: usize,
}

impl RunConfig {
    pub fn new(scheme: SchemeKind, t_final: f64) -> Self {
        RunConfig {
            scheme,
            boundary: BoundaryConfig::uniform(BoundaryKind::Transmissive),
            gas: GasLaw::default(),
            cfl: scheme.default_cfl(),
            t_final,
            rho_min_alarm: 1e-10,
            p_min_alarm: 1e-10,
            exec: ExecMode::default(),
            stats_every: 1,
        }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(Error::InvalidConfig(format!("cfl must lie in (0, 1), got {}", self.cfl)));
        }
        if !(self.t_final >= 0.0) {
            return Err(Error::InvalidConfig(format!("t_final must be >= 0, got {}", self.t_final)));
        }
        if self.stats_every == 0 {
            return Err(Error::InvalidConfig("stats_every must be >= 1".into()));
        }
        self.boundary.validate(dim)
    }
}

/// Finished run: final field plus the recorded per-step stats.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub field: CellField,
    pub stats: Vec<StepStats>,
    pub steps: usize,
}

fn prim_field(field: &CellField, gas: &GasLaw, exec: ExecMode) -> Result<Vec<PrimState>> {
    let prims = map_indexed(exec, field.data.len(), |i| gas.prim_from_cons(&field.data[i]));
    let mut out = Vec::with_capacity(prims.len());
    for (cell, p) in prims.into_iter().enumerate() {
        match p {
            Ok(w) => out.push(w),
            Err(Error::NonPhysical { what, value }) => {
                return Err(Error::NonPhysicalCell { cell, what, value })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// CFL-limited time step for the unsplit update,
/// dt = cfl * min_K 1 / (sum_axis (|u_axis| + c) / h_axis).
/// In 1D this is the familiar cfl * h / max(|u| + c); in 2D the axis sum
/// keeps the single forward-in-time update stable when both axes carry
/// comparable wave speeds.
pub fn compute_dt(field: &CellField, cfl: f64, gas: &GasLaw, exec: ExecMode) -> Result<f64> {
    let prims = prim_field(field, gas, exec)?;
    let mesh = &field.mesh;
    let mut dt = f64::INFINITY;
    for w in &prims {
        let c = gas.sound_speed(w);
        let mut rate = 0.0;
        for a in 0..mesh.dim {
            rate += (w.vel[a].abs() + c) / mesh.h[a];
        }
        dt = dt.min(1.0 / rate);
    }
    Ok(cfl * dt)
}

/// One face flux along `axis` with boundary resolution. `k` is the face
/// index along the axis (0..=n_axis), `t` the transverse cell index.
fn face_flux_1axis(
    prims: &[PrimState],
    mesh: &StructMesh,
    cfg: &RunConfig,
    axis: usize,
    k: usize,
    t: usize,
) -> Result<ConsState> {
    let n_axis = mesh.n[axis];
    let cell = |along: usize| -> usize {
        if axis == 0 {
            mesh.index(along, t)
        } else {
            mesh.index(t, along)
        }
    };
    let mirror = |w: &PrimState| {
        let mut m = *w;
        m.vel[axis] = -m.vel[axis];
        m
    };
    let wl = if k == 0 {
        match cfg.boundary.tags[axis][0] {
            BoundaryKind::Periodic => prims[cell(n_axis - 1)],
            BoundaryKind::Transmissive => prims[cell(0)],
            BoundaryKind::Reflective => mirror(&prims[cell(0)]),
        }
    } else {
        prims[cell(k - 1)]
    };
    let wr = if k == n_axis {
        match cfg.boundary.tags[axis][1] {
            BoundaryKind::Periodic => prims[cell(0)],
            BoundaryKind::Transmissive => prims[cell(n_axis - 1)],
            BoundaryKind::Reflective => mirror(&prims[cell(n_axis - 1)]),
        }
    } else {
        prims[cell(k)]
    };
    match cfg.scheme {
        SchemeKind::Godunov => godunov_flux(&wl, &wr, axis, &cfg.gas),
        SchemeKind::Vfv { mu_scale, epsilon } => {
            vfv_flux(&wl, &wr, axis, &cfg.gas, mu_scale, epsilon, mesh.h[axis])
        }
    }
}

fn collect_fluxes(
    prims: &[PrimState],
    mesh: &StructMesh,
    cfg: &RunConfig,
    axis: usize,
) -> Result<Vec<ConsState>> {
    let (n_along, n_trans) = if axis == 0 {
        (mesh.n[0], mesh.n[1])
    } else {
        (mesh.n[1], mesh.n[0])
    };
    let count = (n_along + 1) * n_trans;
    let fluxes = map_indexed(cfg.exec, count, |f| {
        let k = f % (n_along + 1);
        let t = f / (n_along + 1);
        face_flux_1axis(prims, mesh, cfg, axis, k, t)
    });
    // deterministic error reporting: first failing face wins
    let mut out = Vec::with_capacity(count);
    for f in fluxes {
        out.push(f?);
    }
    Ok(out)
}

/// One forward-Euler update U' = U - dt/|K| * sum_faces |sigma| F.n.
/// Checks the solution monitors on the updated field and returns it together
/// with the step diagnostics evaluated at `t_new`.
pub fn step(field: &CellField, cfg: &RunConfig, dt: f64, t_new: f64) -> Result<(CellField, StepStats)> {
    let mesh = field.mesh;
    cfg.validate(mesh.dim)?;
    if !(dt > 0.0) {
        return Err(Error::InvalidConfig(format!("step needs dt > 0, got {dt}")));
    }
    let prims = prim_field(field, &cfg.gas, cfg.exec)?;

    let mut fluxes: Vec<Vec<ConsState>> = Vec::with_capacity(mesh.dim);
    for axis in 0..mesh.dim {
        fluxes.push(collect_fluxes(&prims, &mesh, cfg, axis)?);
    }

    let n0 = mesh.n[0];
    let data = map_indexed(cfg.exec, field.data.len(), |flat| {
        let i = flat % n0;
        let j = flat / n0;
        let fx = &fluxes[0];
        let mut du = (fx[j * (n0 + 1) + i + 1] - fx[j * (n0 + 1) + i]) * (1.0 / mesh.h[0]);
        if mesh.dim == 2 {
            // axis-1 faces are laid out transverse-major: i * (n1 + 1) + j
            let fy = &fluxes[1];
            let n1 = mesh.n[1];
            du = du + (fy[i * (n1 + 1) + j + 1] - fy[i * (n1 + 1) + j]) * (1.0 / mesh.h[1]);
        }
        field.data[flat] - du * dt
    });
    let new_field = CellField { mesh, data };

    let stats = gather_stats(&new_field, cfg, dt, t_new)?;
    Ok((new_field, stats))
}

/// Monitors + diagnostics on an updated field. Aborts with MonitorViolation
/// the moment any cell sits at or below a floor (NaN counts as a violation).
fn gather_stats(field: &CellField, cfg: &RunConfig, dt: f64, t: f64) -> Result<StepStats> {
    let mesh = &field.mesh;
    let gamma = cfg.gas.gamma();
    let mut rho_min = f64::INFINITY;
    let mut p_min = f64::INFINITY;
    let mut e_max = f64::NEG_INFINITY;
    let mut smax: f64 = 0.0;
    for (cell, u) in field.data.iter().enumerate() {
        if !(u.rho > cfg.rho_min_alarm) {
            return Err(Error::MonitorViolation { t, cell, what: "rho", value: u.rho });
        }
        let q2 = (u.mom[0] * u.mom[0] + u.mom[1] * u.mom[1] + u.mom[2] * u.mom[2]) / u.rho;
        let p = (gamma - 1.0) * (u.e_total - 0.5 * q2);
        if !(p > cfg.p_min_alarm) {
            return Err(Error::MonitorViolation { t, cell, what: "p", value: p });
        }
        rho_min = rho_min.min(u.rho);
        p_min = p_min.min(p);
        e_max = e_max.max(u.e_total);
        let c = (gamma * p / u.rho).sqrt();
        for a in 0..mesh.dim {
            smax = smax.max((u.mom[a] / u.rho).abs() + c);
        }
    }

    // interface jump sums over interior faces (plus the wrap face when periodic)
    let mut jump_l1 = 0.0;
    let mut jump_l2h = 0.0;
    for axis in 0..mesh.dim {
        let area = mesh.face_area(axis);
        let h = mesh.h[axis];
        let n_axis = mesh.n[axis];
        let n_trans = if axis == 0 { mesh.n[1] } else { mesh.n[0] };
        let periodic = cfg.boundary.tags[axis][0] == BoundaryKind::Periodic;
        for t_idx in 0..n_trans {
            let cell = |along: usize| -> usize {
                if axis == 0 {
                    mesh.index(along, t_idx)
                } else {
                    mesh.index(t_idx, along)
                }
            };
            for k in 1..n_axis {
                let jump = (field.data[cell(k)] - field.data[cell(k - 1)]).norm();
                jump_l1 += area * jump;
                jump_l2h += area * jump * jump / h;
            }
            if periodic && n_axis > 1 {
                let jump = (field.data[cell(0)] - field.data[cell(n_axis - 1)]).norm();
                jump_l1 += area * jump;
                jump_l2h += area * jump * jump / h;
            }
        }
    }

    let totals =
        pairwise_sum_by(0, field.data.len(), ConsState::ZERO, &|i| field.data[i]) * mesh.cell_volume();

    Ok(StepStats {
        t,
        dt,
        smax,
        rho_min,
        p_min,
        e_max,
        jump_l1,
        jump_l2h,
        totals,
    })
}

/// Advance the initial field to t_final with CFL-limited forward-Euler
/// steps. The last dt is clipped so the run lands exactly on t_final.
pub fn run(cfg: &RunConfig, initial: CellField) -> Result<RunOutcome> {
    let dim = initial.mesh.dim;
    cfg.validate(dim)?;
    let mut field = initial;
    let mut stats = Vec::new();
    let mut t = 0.0;
    let mut steps = 0usize;

    // relative slack absorbs the rounding of t accumulation
    let eps = 1e-14 * cfg.t_final.max(1.0);
    while t < cfg.t_final - eps {
        let remaining = cfg.t_final - t;
        let dt_cfl = compute_dt(&field, cfg.cfl, &cfg.gas, cfg.exec)
            .map_err(|e| attach_time(e, t))?;
        let (dt, landing) = if dt_cfl >= remaining {
            (remaining, true)
        } else {
            (dt_cfl, false)
        };
        let t_new = if landing { cfg.t_final } else { t + dt };
        let (next, st) = step(&field, cfg, dt, t_new)?;
        field = next;
        steps += 1;
        t = t_new;
        if landing || steps % cfg.stats_every == 0 {
            stats.push(st);
        }
    }
    Ok(RunOutcome { field, stats, steps })
}

fn attach_time(e: Error, t: f64) -> Error {
    match e {
        Error::NonPhysicalCell { cell, what, value } => {
            Error::MonitorViolation { t, cell, what, value }
        }
        other => other,
    }
}
