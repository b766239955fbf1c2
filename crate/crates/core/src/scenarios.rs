//! Catalog of Riemann-problem scenarios (1D single waves, colliding
//! rarefactions, Sod, and four 2D quadrant problems) plus a TOML schema for
//! user-defined scenarios. Initial fields are exact projections of the
//! piecewise-constant data, so interfaces aligned with mesh lines carry no
//! projection error.

use std::fmt::Write as _;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::gas::{ConsState, GasLaw, PrimState};
use crate::grid::{CellField, StructMesh};
use crate::scheme::BoundaryKind;

/// Which side of an axis-aligned interface a region occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Below,
    Above,
}

/// One strict half-space constraint `x[axis] < pos` or `x[axis] > pos`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cond {
    pub axis: usize,
    pub side: Side,
    pub pos: f64,
}

/// Constant-state region: the intersection of its half-space constraints.
/// An empty constraint list covers the whole domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub conds: Vec<Cond>,
    pub state: PrimState,
}

impl Region {
    pub fn contains(&self, x: [f64; 3]) -> bool {
        self.conds.iter().all(|c| match c.side {
            Side::Below => x[c.axis] < c.pos,
            Side::Above => x[c.axis] > c.pos,
        })
    }

    fn where_string(&self) -> String {
        if self.conds.is_empty() {
            return "all".into();
        }
        self.conds
            .iter()
            .map(|c| {
                let axis = ["x", "y"][c.axis];
                let op = match c.side {
                    Side::Below => "<",
                    Side::Above => ">",
                };
                format!("{axis} {op} {}", toml_f64(c.pos))
            })
            .collect::<Vec<_>>()
            .join(" & ")
    }
}

/// Reference solution prescription for convergence studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceSpec {
    /// Exact self-similar fan of a two-state 1D problem.
    Exact1D,
    /// Godunov run at CFL 0.9 on an n^dim mesh, restricted to each ladder mesh.
    FineMesh(usize),
}

impl ReferenceSpec {
    pub fn parse(s: &str) -> Result<Self> {
        if s == "exact" {
            return Ok(ReferenceSpec::Exact1D);
        }
        if let Some(n) = s.strip_prefix("fine:") {
            let n: usize = n
                .parse()
                .map_err(|_| Error::ScenarioSchema(format!("bad reference mesh size in {s:?}")))?;
            if n == 0 {
                return Err(Error::ScenarioSchema("reference mesh size must be positive".into()));
            }
            return Ok(ReferenceSpec::FineMesh(n));
        }
        Err(Error::ScenarioSchema(format!(
            "unknown reference spec {s:?}; expected \"exact\" or \"fine:N\""
        )))
    }
}

impl std::fmt::Display for ReferenceSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReferenceSpec::Exact1D => write!(f, "exact"),
            ReferenceSpec::FineMesh(n) => write!(f, "fine:{n}"),
        }
    }
}

/// Complete problem description: domain box, final time, gas constant,
/// piecewise-constant initial regions, a uniform boundary tag, and the
/// reference prescription.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub dim: usize,
    pub origin: [f64; 2],
    pub extent: [f64; 2],
    pub t_final: f64,
    pub gamma: f64,
    pub regions: Vec<Region>,
    pub boundary: BoundaryKind,
    pub reference: ReferenceSpec,
}

impl Scenario {
    /// Square mesh with n cells per axis over the scenario domain.
    pub fn mesh(&self, n: usize) -> Result<StructMesh> {
        match self.dim {
            1 => StructMesh::line(self.origin[0], self.origin[0] + self.extent[0], n),
            _ => StructMesh::rect(self.origin, self.extent, [n, n]),
        }
    }

    /// First region containing the point, if any (points on an interface
    /// belong to none; the initial data is defined almost everywhere).
    pub fn eval_point(&self, x: [f64; 3]) -> Option<&PrimState> {
        self.regions.iter().find(|r| r.contains(x)).map(|r| &r.state)
    }

    /// True when every region interface lands on a mesh line, so the exact
    /// projection reproduces the region states cellwise.
    pub fn interfaces_aligned(&self, mesh: &StructMesh) -> bool {
        self.regions.iter().flat_map(|r| &r.conds).all(|c| {
            let cells = (c.pos - mesh.origin[c.axis]) * mesh.n[c.axis] as f64
                / (mesh.extent[c.axis]);
            cells.fract() == 0.0
        })
    }

    /// Two-state 1D problem with a single x interface, as (left, right,
    /// jump position) — the shape required by the exact reference.
    pub fn exact1d_pair(&self) -> Option<(PrimState, PrimState, f64)> {
        if self.dim != 1 || self.regions.len() != 2 {
            return None;
        }
        let one_cond = |r: &Region| -> Option<Cond> {
            match r.conds.as_slice() {
                [c] if c.axis == 0 => Some(*c),
                _ => None,
            }
        };
        let a = one_cond(&self.regions[0])?;
        let b = one_cond(&self.regions[1])?;
        if a.pos != b.pos {
            return None;
        }
        match (a.side, b.side) {
            (Side::Below, Side::Above) => {
                Some((self.regions[0].state, self.regions[1].state, a.pos))
            }
            (Side::Above, Side::Below) => {
                Some((self.regions[1].state, self.regions[0].state, a.pos))
            }
            _ => None,
        }
    }

    /// TOML form of the scenario; parses back equal.
    pub fn to_toml_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "name = {:?}", self.name);
        let _ = writeln!(out, "dim = {}", self.dim);
        match self.dim {
            1 => {
                let _ = writeln!(
                    out,
                    "domain = [{}, {}]",
                    toml_f64(self.origin[0]),
                    toml_f64(self.origin[0] + self.extent[0])
                );
            }
            _ => {
                let _ = writeln!(
                    out,
                    "domain = [{}, {}, {}, {}]",
                    toml_f64(self.origin[0]),
                    toml_f64(self.origin[1]),
                    toml_f64(self.origin[0] + self.extent[0]),
                    toml_f64(self.origin[1] + self.extent[1])
                );
            }
        }
        let _ = writeln!(out, "t_final = {}", toml_f64(self.t_final));
        let _ = writeln!(out, "gamma = {}", toml_f64(self.gamma));
        let boundary = match self.boundary {
            BoundaryKind::Transmissive => "transmissive",
            BoundaryKind::Reflective => "reflective",
            BoundaryKind::Periodic => "periodic",
        };
        let _ = writeln!(out, "boundary = {boundary:?}");
        let _ = writeln!(out, "reference = \"{}\"", self.reference);
        for r in &self.regions {
            let _ = writeln!(out, "\n[[regions]]");
            let _ = writeln!(out, "where = {:?}", r.where_string());
            let _ = writeln!(out, "rho = {}", toml_f64(r.state.rho));
            let _ = writeln!(out, "u = {}", toml_f64(r.state.vel[0]));
            if self.dim == 2 {
                let _ = writeln!(out, "v = {}", toml_f64(r.state.vel[1]));
            }
            let _ = writeln!(out, "p = {}", toml_f64(r.state.p));
        }
        out
    }
}

/// Shortest f64 form that TOML reads back as a float with identical bits.
fn toml_f64(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{x:.1}")
    } else {
        format!("{x}")
    }
}

/// Stable scenario identifiers, 1D first.
pub fn builtin_names() -> &'static [&'static str] {
    &[
        "single-c",
        "single-r",
        "single-s",
        "double-r",
        "sod",
        "2d-rarefactions",
        "2d-contacts",
        "2d-shocks",
        "2d-mixed",
    ]
}

fn halfspace_1d(
    name: &str,
    t_final: f64,
    left: PrimState,
    right: PrimState,
) -> Scenario {
    let cond = |side| Cond { axis: 0, side, pos: 0.5 };
    Scenario {
        name: name.into(),
        dim: 1,
        origin: [0.0, 0.0],
        extent: [1.0, 1.0],
        t_final,
        gamma: 1.4,
        regions: vec![
            Region { conds: vec![cond(Side::Below)], state: left },
            Region { conds: vec![cond(Side::Above)], state: right },
        ],
        boundary: BoundaryKind::Transmissive,
        reference: ReferenceSpec::Exact1D,
    }
}

/// Quadrant states in the display order: (x>.5, y>.5), (x<.5, y>.5),
/// (x<.5, y<.5), (x>.5, y<.5).
fn quadrants(name: &str, t_final: f64, q: [PrimState; 4]) -> Scenario {
    let c = |axis, side| Cond { axis, side, pos: 0.5 };
    let keys = [
        [Side::Above, Side::Above],
        [Side::Below, Side::Above],
        [Side::Below, Side::Below],
        [Side::Above, Side::Below],
    ];
    Scenario {
        name: name.into(),
        dim: 2,
        origin: [0.0, 0.0],
        extent: [1.0, 1.0],
        t_final,
        gamma: 1.4,
        regions: keys
            .iter()
            .zip(q)
            .map(|(k, state)| Region {
                conds: vec![c(0, k[0]), c(1, k[1])],
                state,
            })
            .collect(),
        boundary: BoundaryKind::Transmissive,
        reference: ReferenceSpec::FineMesh(256),
    }
}

/// Scenario catalog; see [`builtin_names`] for the identifiers.
pub fn builtin(name: &str) -> Result<Scenario> {
    let p1 = PrimState::new_1d;
    let p2 = PrimState::new_2d;
    let s = match name {
        "single-c" => halfspace_1d("single-c", 0.2, p1(0.5, 0.5, 5.0), p1(1.0, 0.5, 5.0)),
        "single-r" => {
            halfspace_1d("single-r", 0.2, p1(0.5197, -0.7259, 0.4), p1(1.0, 0.0, 1.0))
        }
        "single-s" => halfspace_1d("single-s", 0.25, p1(1.0, 0.7276, 1.0), p1(0.5313, 0.0, 0.4)),
        "double-r" => halfspace_1d("double-r", 0.15, p1(1.0, -2.0, 0.4), p1(1.0, 2.0, 0.4)),
        "sod" => halfspace_1d("sod", 0.15, p1(1.0, 0.0, 1.0), p1(0.125, 0.0, 0.1)),
        "2d-rarefactions" => quadrants(
            "2d-rarefactions",
            0.2,
            [
                p2(1.0, 0.0, 0.0, 1.0),
                p2(0.5197, -0.7259, 0.0, 0.4),
                p2(1.0, -0.7259, -0.7259, 1.0),
                p2(0.5197, 0.0, -0.7259, 0.4),
            ],
        ),
        "2d-contacts" => quadrants(
            "2d-contacts",
            0.2,
            [
                p2(0.5, 0.5, -0.5, 5.0),
                p2(1.0, 0.5, 0.5, 5.0),
                p2(2.0, -0.5, 0.5, 5.0),
                p2(1.5, -0.5, -0.5, 5.0),
            ],
        ),
        "2d-shocks" => quadrants(
            "2d-shocks",
            0.35,
            [
                p2(1.5, 0.0, 0.0, 1.5),
                p2(0.5323, 1.206, 0.0, 0.3),
                p2(0.138, 1.206, 1.206, 0.029),
                p2(0.5323, 0.0, 1.206, 0.3),
            ],
        ),
        "2d-mixed" => quadrants(
            "2d-mixed",
            0.25,
            [
                p2(0.5313, 0.0, 0.0, 0.4),
                p2(1.0, 0.7276, 0.0, 1.0),
                p2(0.8, 0.0, 0.0, 1.0),
                p2(1.0, 0.0, 0.7276, 1.0),
            ],
        ),
        other => return Err(Error::UnknownScenario(other.into())),
    };
    Ok(s)
}

/// Exact projection of the piecewise-constant initial data: each cell holds
/// the measure-weighted mix of its region states. Overlap fractions are
/// computed in cell units, so cells fully inside one region get weight
/// exactly one and interfaces on mesh lines leave no projection error.
pub fn initial_field(s: &Scenario, mesh: &StructMesh, gas: &GasLaw) -> Result<CellField> {
    if mesh.dim != s.dim {
        return Err(Error::MeshMismatch(format!(
            "scenario {} is {}D, mesh is {}D",
            s.name, s.dim, mesh.dim
        )));
    }
    for a in 0..s.dim {
        if mesh.origin[a] != s.origin[a] || mesh.extent[a] != s.extent[a] {
            return Err(Error::MeshMismatch(format!(
                "mesh domain differs from scenario {} domain on axis {a}",
                s.name
            )));
        }
    }
    let states: Vec<ConsState> = s
        .regions
        .iter()
        .map(|r| gas.cons_from_prim(&r.state))
        .collect::<Result<_>>()?;

    // interface positions in cell units per axis
    let cut = |c: &Cond| (c.pos - mesh.origin[c.axis]) * mesh.n[c.axis] as f64 / mesh.extent[c.axis];

    let mut data = Vec::with_capacity(mesh.cell_count());
    for flat in 0..mesh.cell_count() {
        let ij = mesh.coords(flat);
        let mut acc = ConsState::ZERO;
        for (r, u) in s.regions.iter().zip(&states) {
            // clip the unit cell [i, i+1] per axis against the region
            let mut w = 1.0;
            for axis in 0..s.dim {
                let mut lo = ij[axis] as f64;
                let mut hi = lo + 1.0;
                for c in r.conds.iter().filter(|c| c.axis == axis) {
                    let pos = cut(c);
                    match c.side {
                        Side::Below => hi = hi.min(pos),
                        Side::Above => lo = lo.max(pos),
                    }
                }
                w *= (hi - lo).max(0.0);
            }
            if w != 0.0 {
                acc = acc + *u * w;
            }
        }
        data.push(acc);
    }
    Ok(CellField { mesh: *mesh, data })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    dim: usize,
    domain: Vec<f64>,
    t_final: f64,
    gamma: Option<f64>,
    boundary: Option<String>,
    reference: Option<String>,
    regions: Vec<RawRegion>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRegion {
    #[serde(rename = "where")]
    predicate: String,
    rho: f64,
    u: f64,
    v: Option<f64>,
    p: f64,
}

fn parse_where(text: &str, dim: usize) -> Result<Vec<Cond>> {
    let trimmed = text.trim();
    if trimmed == "all" {
        return Ok(Vec::new());
    }
    let mut conds = Vec::new();
    for clause in trimmed.split('&') {
        let c = clause.trim();
        let (axis, rest) = match c.split_at_checked(1) {
            Some(("x", rest)) => (0, rest),
            Some(("y", rest)) if dim == 2 => (1, rest),
            _ => {
                return Err(Error::ScenarioSchema(format!(
                    "bad where clause {c:?}; expected \"x < pos\"{}",
                    if dim == 2 { " or \"y > pos\"" } else { "" }
                )))
            }
        };
        let rest = rest.trim_start();
        let (side, rest) = match rest.split_at_checked(1) {
            Some(("<", rest)) => (Side::Below, rest),
            Some((">", rest)) => (Side::Above, rest),
            _ => {
                return Err(Error::ScenarioSchema(format!(
                    "bad where clause {c:?}; missing < or >"
                )))
            }
        };
        let pos: f64 = rest
            .trim()
            .parse()
            .map_err(|_| Error::ScenarioSchema(format!("bad threshold in where clause {c:?}")))?;
        conds.push(Cond { axis, side, pos });
    }
    Ok(conds)
}

/// Parse and validate a TOML scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let raw: RawScenario =
        toml::from_str(text).map_err(|e| Error::ScenarioSchema(e.to_string()))?;

    if raw.dim != 1 && raw.dim != 2 {
        return Err(Error::ScenarioSchema(format!("dim must be 1 or 2, got {}", raw.dim)));
    }
    let (origin, extent) = match (raw.dim, raw.domain.as_slice()) {
        (1, &[x0, x1]) => ([x0, 0.0], [x1 - x0, 1.0]),
        (2, &[x0, y0, x1, y1]) => ([x0, y0], [x1 - x0, y1 - y0]),
        (d, dom) => {
            return Err(Error::ScenarioSchema(format!(
                "domain needs {} entries for dim {d}, got {}",
                2 * d,
                dom.len()
            )))
        }
    };
    for a in 0..raw.dim {
        if !(extent[a] > 0.0) {
            return Err(Error::ScenarioSchema(format!("domain is empty along axis {a}")));
        }
    }
    if !(raw.t_final >= 0.0) {
        return Err(Error::ScenarioSchema(format!("t_final must be >= 0, got {}", raw.t_final)));
    }
    let gamma = raw.gamma.unwrap_or(1.4);
    GasLaw::new(gamma).map_err(|e| Error::ScenarioSchema(e.to_string()))?;

    let boundary = match raw.boundary.as_deref() {
        None | Some("transmissive") => BoundaryKind::Transmissive,
        Some("reflective") => BoundaryKind::Reflective,
        Some("periodic") => BoundaryKind::Periodic,
        Some(other) => {
            return Err(Error::ScenarioSchema(format!("unknown boundary kind {other:?}")))
        }
    };
    let reference = match raw.reference.as_deref() {
        None => {
            if raw.dim == 1 {
                ReferenceSpec::Exact1D
            } else {
                ReferenceSpec::FineMesh(256)
            }
        }
        Some(s) => ReferenceSpec::parse(s)?,
    };
    if reference == ReferenceSpec::Exact1D && raw.dim != 1 {
        return Err(Error::ScenarioSchema(
            "the exact reference applies to 1D scenarios only".into(),
        ));
    }

    if raw.regions.is_empty() {
        return Err(Error::ScenarioSchema("at least one region is required".into()));
    }
    let mut regions = Vec::with_capacity(raw.regions.len());
    for (k, r) in raw.regions.iter().enumerate() {
        if raw.dim == 1 && r.v.is_some() {
            return Err(Error::ScenarioSchema(format!(
                "region {}: key \"v\" is not allowed in a 1D scenario",
                k + 1
            )));
        }
        if !(r.rho > 0.0) {
            return Err(Error::ScenarioSchema(format!(
                "region {}: rho = {} must be positive",
                k + 1,
                r.rho
            )));
        }
        if !(r.p > 0.0) {
            return Err(Error::ScenarioSchema(format!(
                "region {}: p = {} must be positive",
                k + 1,
                r.p
            )));
        }
        let state = if raw.dim == 1 {
            PrimState::new_1d(r.rho, r.u, r.p)
        } else {
            PrimState::new_2d(r.rho, r.u, r.v.unwrap_or(0.0), r.p)
        };
        regions.push(Region { conds: parse_where(&r.predicate, raw.dim)?, state });
    }

    let s = Scenario {
        name: raw.name,
        dim: raw.dim,
        origin,
        extent,
        t_final: raw.t_final,
        gamma,
        regions,
        boundary,
        reference,
    };
    check_partition(&s)?;
    Ok(s)
}

/// Heuristic partition check: on a sample grid (offset to dodge interface
/// lines), every point must belong to exactly one region.
fn check_partition(s: &Scenario) -> Result<()> {
    const N: usize = 37;
    const OFFSET: f64 = 0.381_966_011_250_105; // avoids rational thresholds
    let coord = |axis: usize, k: usize| {
        s.origin[axis] + s.extent[axis] * (k as f64 + OFFSET) / N as f64
    };
    let points = if s.dim == 1 { N } else { N * N };
    for q in 0..points {
        let x = [coord(0, q % N), if s.dim == 2 { coord(1, q / N) } else { 0.0 }, 0.0];
        let hits = s.regions.iter().filter(|r| r.contains(x)).count();
        if hits != 1 {
            return Err(Error::ScenarioSchema(format!(
                "regions must partition the domain: point ({}, {}) lies in {hits} regions",
                x[0], x[1]
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{project, totals, DEFAULT_SUBSAMPLES};
    use crate::riemann::solve_star;
    use crate::util::ExecMode;
    use approx::assert_relative_eq;

    #[test]
    fn catalog_is_complete_and_validated() {
        assert_eq!(builtin_names().len(), 9);
        for name in builtin_names() {
            let s = builtin(name).unwrap();
            assert_eq!(&s.name, name);
            assert!(s.t_final > 0.0);
            // round-trips through the documented TOML schema
            let parsed = parse_scenario(&s.to_toml_string()).unwrap();
            assert_eq!(parsed, s);
        }
        assert!(matches!(builtin("sed"), Err(Error::UnknownScenario(_))));
    }

    #[test]
    fn sod_on_four_cells_is_exact() {
        let s = builtin("sod").unwrap();
        let g = GasLaw::default();
        let mesh = s.mesh(4).unwrap();
        let f = initial_field(&s, &mesh, &g).unwrap();
        let left = g.cons_from_prim(&PrimState::new_1d(1.0, 0.0, 1.0)).unwrap();
        let right = g.cons_from_prim(&PrimState::new_1d(0.125, 0.0, 0.1)).unwrap();
        assert_eq!(f.data, vec![left, left, right, right]);
        assert!(s.interfaces_aligned(&mesh));
    }

    #[test]
    fn aligned_projection_matches_subsampled_projection_bitwise() {
        let g = GasLaw::default();
        for name in builtin_names() {
            let s = builtin(name).unwrap();
            let mesh = s.mesh(8).unwrap();
            assert!(s.interfaces_aligned(&mesh), "{name} misaligned on n=8");
            let exact = initial_field(&s, &mesh, &g).unwrap();
            let sampled = project(
                &mesh,
                |x: &[f64; 3]| g.cons_from_prim(s.eval_point(*x).unwrap()).unwrap(),
                DEFAULT_SUBSAMPLES,
                ExecMode::Sequential,
            );
            assert_eq!(exact.data, sampled.data, "{name}");
        }
    }

    #[test]
    fn misaligned_mesh_splits_the_interface_cell() {
        let s = builtin("sod").unwrap();
        let g = GasLaw::default();
        let mesh = s.mesh(3).unwrap();
        assert!(!s.interfaces_aligned(&mesh));
        let f = initial_field(&s, &mesh, &g).unwrap();
        // middle cell [1/3, 2/3] is half left, half right
        assert_relative_eq!(f.data[1].rho, 0.5 * (1.0 + 0.125), max_relative = 1e-15);
        // projection conserves the exact integrals
        assert_relative_eq!(totals(&f).rho, 0.5 * 1.0 + 0.5 * 0.125, max_relative = 1e-15);
    }

    #[test]
    fn eval_point_uses_strict_halfspaces() {
        let s = builtin("sod").unwrap();
        assert_eq!(s.eval_point([0.3, 0.0, 0.0]).unwrap().rho, 1.0);
        assert_eq!(s.eval_point([0.7, 0.0, 0.0]).unwrap().rho, 0.125);
        assert!(s.eval_point([0.5, 0.0, 0.0]).is_none());
    }

    #[test]
    fn exact1d_pair_shape() {
        let s = builtin("single-s").unwrap();
        let (l, r, pos) = s.exact1d_pair().unwrap();
        assert_eq!(l.vel[0], 0.7276);
        assert_eq!(r.rho, 0.5313);
        assert_eq!(pos, 0.5);
        assert!(builtin("2d-mixed").unwrap().exact1d_pair().is_none());
    }

    #[test]
    fn builtin_states_are_pairwise_vacuum_free() {
        let g = GasLaw::default();
        for name in builtin_names() {
            let s = builtin(name).unwrap();
            for a in &s.regions {
                for b in &s.regions {
                    for axis in 0..s.dim {
                        let swap = |w: &PrimState| {
                            let mut v = *w;
                            v.vel.swap(0, axis);
                            v
                        };
                        solve_star(&swap(&a.state), &swap(&b.state), &g).unwrap_or_else(|e| {
                            panic!("{name}: vacuum or failure across regions: {e}")
                        });
                    }
                }
            }
        }
    }

    #[test]
    fn quadrant_document_reproduces_the_shock_builtin() {
        let text = r#"
            name = "2d-shocks"
            dim = 2
            domain = [0.0, 0.0, 1.0, 1.0]
            t_final = 0.35

            [[regions]]
            where = "x > 0.5 & y > 0.5"
            rho = 1.5
            u = 0.0
            v = 0.0
            p = 1.5

            [[regions]]
            where = "x < 0.5 & y > 0.5"
            rho = 0.5323
            u = 1.206
            v = 0.0
            p = 0.3

            [[regions]]
            where = "x < 0.5 & y < 0.5"
            rho = 0.138
            u = 1.206
            v = 1.206
            p = 0.029

            [[regions]]
            where = "x > 0.5 & y < 0.5"
            rho = 0.5323
            u = 0.0
            v = 1.206
            p = 0.3
        "#;
        let s = parse_scenario(text).unwrap();
        assert_eq!(s, builtin("2d-shocks").unwrap());
    }

    #[test]
    fn schema_violations_are_named() {
        let base = |patch: &str| {
            format!(
                r#"
                name = "t"
                dim = 1
                domain = [0.0, 1.0]
                t_final = 0.1
                {patch}
                "#
            )
        };
        let bad_p = base(
            r#"
            [[regions]]
            where = "x < 0.5"
            rho = 1.0
            u = 0.0
            p = 1.0
            [[regions]]
            where = "x > 0.5"
            rho = 1.0
            u = 0.0
            p = -1.0
            "#,
        );
        match parse_scenario(&bad_p) {
            Err(Error::ScenarioSchema(msg)) => assert!(msg.contains("region 2"), "{msg}"),
            other => panic!("expected schema error, got {other:?}"),
        }

        let v_in_1d = base(
            r#"
            [[regions]]
            where = "all"
            rho = 1.0
            u = 0.0
            v = 0.3
            p = 1.0
            "#,
        );
        assert!(matches!(parse_scenario(&v_in_1d), Err(Error::ScenarioSchema(_))));

        let gap = base(
            r#"
            [[regions]]
            where = "x < 0.4"
            rho = 1.0
            u = 0.0
            p = 1.0
            [[regions]]
            where = "x > 0.6"
            rho = 1.0
            u = 0.0
            p = 1.0
            "#,
        );
        match parse_scenario(&gap) {
            Err(Error::ScenarioSchema(msg)) => assert!(msg.contains("partition"), "{msg}"),
            other => panic!("expected partition error, got {other:?}"),
        }

        let overlap = base(
            r#"
            [[regions]]
            where = "all"
            rho = 1.0
            u = 0.0
            p = 1.0
            [[regions]]
            where = "x < 0.5"
            rho = 2.0
            u = 0.0
            p = 1.0
            "#,
        );
        assert!(parse_scenario(&overlap).is_err());

        let bad_where = base(
            r#"
            [[regions]]
            where = "z < 0.5"
            rho = 1.0
            u = 0.0
            p = 1.0
            "#,
        );
        assert!(matches!(parse_scenario(&bad_where), Err(Error::ScenarioSchema(_))));

        // toml-level diagnostics surface as schema errors too
        assert!(matches!(
            parse_scenario("name = \"x\"\nnot_a_key = 1"),
            Err(Error::ScenarioSchema(_))
        ));
    }

    #[test]
    fn gamma_and_reference_overrides() {
        let text = r#"
            name = "hot"
            dim = 1
            domain = [0.0, 2.0]
            t_final = 0.1
            gamma = 1.667
            boundary = "reflective"
            reference = "fine:512"

            [[regions]]
            where = "all"
            rho = 1.0
            u = 0.0
            p = 1.0
        "#;
        let s = parse_scenario(text).unwrap();
        assert_eq!(s.gamma, 1.667);
        assert_eq!(s.boundary, BoundaryKind::Reflective);
        assert_eq!(s.reference, ReferenceSpec::FineMesh(512));
        assert_eq!(s.extent[0], 2.0);

        assert!(ReferenceSpec::parse("fine:0").is_err());
        assert!(ReferenceSpec::parse("coarse").is_err());
        assert_eq!(ReferenceSpec::parse("exact").unwrap(), ReferenceSpec::Exact1D);
        assert_eq!(ReferenceSpec::Exact1D.to_string(), "exact");
        assert_eq!(ReferenceSpec::FineMesh(64).to_string(), "fine:64");
    }
}
