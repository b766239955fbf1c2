//! Uniform structured meshes and piecewise-constant fields, plus the mesh
//! transfer operators used by the convergence harness: cell-average
//! projection, conservative restriction onto nested coarser meshes, volume-
//! weighted Lp norms, and a plain-text field dump format.
//!
//! Cells are stored with the first axis varying fastest (index = j*n0 + i in
//! 2D); the three-slot axis arrays follow the same convention as the state
//! types, with unused axes holding n = 1 and unit extent so that cell
//! measures come out right in any dimension.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::gas::ConsState;
use crate::util::{map_indexed, pairwise_sum_by, ExecMode};

/// Uniform axis-aligned mesh in 1 or 2 dimensions (3 reserved).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructMesh {
    pub dim: usize,
    pub n: [usize; 3],
    pub origin: [f64; 3],
    pub extent: [f64; 3],
    pub h: [f64; 3],
}

impl StructMesh {
    /// 1D mesh of `n` cells on [x0, x1].
    pub fn line(x0: f64, x1: f64, n: usize) -> Result<Self> {
        Self::build(1, [x0, 0.0, 0.0], [x1 - x0, 1.0, 1.0], [n, 1, 1])
    }

    /// 2D mesh of n[0] x n[1] cells on the rectangle origin + [0,size].
    pub fn rect(origin: [f64; 2], size: [f64; 2], n: [usize; 2]) -> Result<Self> {
        Self::build(
            2,
            [origin[0], origin[1], 0.0],
            [size[0], size[1], 1.0],
            [n[0], n[1], 1],
        )
    }

    fn build(dim: usize, origin: [f64; 3], extent: [f64; 3], n: [usize; 3]) -> Result<Self> {
        for a in 0..dim {
            if n[a] == 0 {
                return Err(Error::InvalidConfig(format!("mesh needs n >= 1 on axis {a}")));
            }
            if !(extent[a] > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "mesh extent must be positive on axis {a}, got {}",
                    extent[a]
                )));
            }
        }
        let mut h = [1.0; 3];
        for a in 0..dim {
            h[a] = extent[a] / n[a] as f64;
        }
        Ok(StructMesh { dim, n, origin, extent, h })
    }

    pub fn cell_count(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    /// Cell measure |K|; unused axes carry unit spacing.
    pub fn cell_volume(&self) -> f64 {
        self.h[0] * self.h[1] * self.h[2]
    }

    /// Face measure for a face normal to `axis`.
    pub fn face_area(&self, axis: usize) -> f64 {
        self.cell_volume() / self.h[axis]
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.n[0] + i
    }

    pub fn coords(&self, flat: usize) -> [usize; 3] {
        let i = flat % self.n[0];
        let j = (flat / self.n[0]) % self.n[1];
        let k = flat / (self.n[0] * self.n[1]);
        [i, j, k]
    }

    pub fn cell_center(&self, flat: usize) -> [f64; 3] {
        let c = self.coords(flat);
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = self.origin[a] + (c[a] as f64 + 0.5) * self.h[a];
        }
        x
    }

    /// Lower corner of a cell.
    pub fn cell_origin(&self, flat: usize) -> [f64; 3] {
        let c = self.coords(flat);
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = self.origin[a] + c[a] as f64 * self.h[a];
        }
        x
    }

    pub fn domains_match(&self, other: &StructMesh) -> bool {
        self.dim == other.dim && self.origin == other.origin && self.extent == other.extent
    }
}

/// Piecewise-constant conserved field over a mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct CellField {
    pub mesh: StructMesh,
    pub data: Vec<ConsState>,
}

impl CellField {
    pub fn from_fn(mesh: StructMesh, f: impl FnMut(usize) -> ConsState) -> Self {
        let data = (0..mesh.cell_count()).map(f).collect();
        CellField { mesh, data }
    }

    pub fn constant(mesh: StructMesh, u: ConsState) -> Self {
        CellField { mesh, data: vec![u; mesh.cell_count()] }
    }
}

/// Number of midpoint sub-samples per axis used by [`project`] by default.
pub const DEFAULT_SUBSAMPLES: usize = 4;

/// Cell-average projection of a pointwise state function by composite
/// midpoint quadrature with `sub` samples per axis. For data constant on each
/// cell the result is exact (the sub-sample count per cell is a power of two
/// when `sub` is, keeping the pairwise average bitwise equal to the value).
pub fn project<F>(mesh: &StructMesh, f: F, sub: usize, exec: ExecMode) -> CellField
where
    F: Fn(&[f64; 3]) -> ConsState + Sync + Send,
{
    assert!(sub >= 1, "need at least one sub-sample per axis");
    let dim = mesh.dim;
    let per_cell = sub.pow(dim as u32);
    let data = map_indexed(exec, mesh.cell_count(), |flat| {
        let lo = mesh.cell_origin(flat);
        pairwise_sum_by(0, per_cell, ConsState::ZERO, &|s| {
            let mut x = [0.0; 3];
            let mut rem = s;
            for a in 0..dim {
                let k = rem % sub;
                rem /= sub;
                x[a] = lo[a] + (k as f64 + 0.5) / sub as f64 * mesh.h[a];
            }
            f(&x)
        }) * (1.0 / per_cell as f64)
    });
    CellField { mesh: *mesh, data }
}

/// Conservative restriction of a fine field onto a nested coarser mesh over
/// the same domain. Every coarse cell is the measure-weighted average of its
/// fine children; errors if the cell counts are not integer multiples.
pub fn restrict(fine: &CellField, coarse_mesh: &StructMesh) -> Result<CellField> {
    let fm = &fine.mesh;
    if !fm.domains_match(coarse_mesh) {
        return Err(Error::MeshMismatch(
            "restriction requires identical domains and dimension".into(),
        ));
    }
    let mut ratio = [1usize; 3];
    for a in 0..fm.dim {
        if coarse_mesh.n[a] == 0 || fm.n[a] % coarse_mesh.n[a] != 0 {
            return Err(Error::NonNestedMesh {
                fine: fm.n[a],
                coarse: coarse_mesh.n[a],
                axis: a,
            });
        }
        ratio[a] = fm.n[a] / coarse_mesh.n[a];
    }
    let children = ratio[0] * ratio[1] * ratio[2];
    let weight = 1.0 / children as f64;

    let mut data = Vec::with_capacity(coarse_mesh.cell_count());
    for flat in 0..coarse_mesh.cell_count() {
        let c = coarse_mesh.coords(flat);
        let sum = pairwise_sum_by(0, children, ConsState::ZERO, &|s| {
            let di = s % ratio[0];
            let dj = s / ratio[0];
            fine.data[fm.index(c[0] * ratio[0] + di, c[1] * ratio[1] + dj)]
        });
        data.push(sum * weight);
    }
    Ok(CellField { mesh: *coarse_mesh, data })
}

/// Norm order for [`lp_norm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lp {
    One,
    Two,
}

/// Volume-weighted Lp norm ( sum |K| |v_K|^p )^(1/p) of per-cell magnitudes,
/// accumulated in a fixed pairwise order.
pub fn lp_norm(mesh: &StructMesh, cell_values: &[f64], p: Lp) -> f64 {
    assert_eq!(mesh.cell_count(), cell_values.len(), "field/mesh size mismatch");
    let vol = mesh.cell_volume();
    match p {
        Lp::One => vol * pairwise_sum_by(0, cell_values.len(), 0.0, &|i| cell_values[i].abs()),
        Lp::Two => {
            (vol * pairwise_sum_by(0, cell_values.len(), 0.0, &|i| cell_values[i] * cell_values[i]))
                .sqrt()
        }
    }
}

/// Measure-weighted conserved totals (mass, momentum, energy) of a field.
pub fn totals(field: &CellField) -> ConsState {
    let vol = field.mesh.cell_volume();
    pairwise_sum_by(0, field.data.len(), ConsState::ZERO, &|i| field.data[i]) * vol
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write a field dump: header `dim n1 [n2] origin extent gamma time`, then
/// one record per cell in storage order with rho, the dim momentum
/// components, and E, all at 17 significant digits.
pub fn write_dump(field: &CellField, gamma: f64, time: f64, out: &mut dyn Write) -> Result<()> {
    let m = &field.mesh;
    let mut header = vec![m.dim.to_string()];
    for a in 0..m.dim {
        header.push(m.n[a].to_string());
    }
    for a in 0..m.dim {
        header.push(fmt17(m.origin[a]));
    }
    for a in 0..m.dim {
        header.push(fmt17(m.extent[a]));
    }
    header.push(fmt17(gamma));
    header.push(fmt17(time));
    writeln!(out, "{}", header.join(" "))?;

    for u in &field.data {
        let mut rec = vec![fmt17(u.rho)];
        for a in 0..m.dim {
            rec.push(fmt17(u.mom[a]));
        }
        rec.push(fmt17(u.e_total));
        writeln!(out, "{}", rec.join(" "))?;
    }
    Ok(())
}

/// Read a dump produced by [`write_dump`]; returns the field with the gamma
/// and time recorded in the header.
pub fn read_dump(input: &mut dyn BufRead) -> Result<(CellField, f64, f64)> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    let mut tok = text.split_whitespace();
    let mut next = |what: &str| -> Result<&str> {
        tok.next()
            .ok_or_else(|| Error::DumpParse(format!("unexpected end of dump while reading {what}")))
    };
    let parse_f = |s: &str, what: &str| -> Result<f64> {
        s.parse::<f64>()
            .map_err(|_| Error::DumpParse(format!("bad float '{s}' for {what}")))
    };

    let dim: usize = next("dim")?
        .parse()
        .map_err(|_| Error::DumpParse("bad dimension".into()))?;
    if !(dim == 1 || dim == 2) {
        return Err(Error::DumpParse(format!("unsupported dimension {dim}")));
    }
    let mut n = [1usize; 3];
    for a in 0..dim {
        n[a] = next("n")?
            .parse()
            .map_err(|_| Error::DumpParse("bad cell count".into()))?;
    }
    let mut origin = [0.0; 3];
    let mut extent = [1.0; 3];
    for a in 0..dim {
        origin[a] = parse_f(next("origin")?, "origin")?;
    }
    for a in 0..dim {
        extent[a] = parse_f(next("extent")?, "extent")?;
    }
    let gamma = parse_f(next("gamma")?, "gamma")?;
    let time = parse_f(next("time")?, "time")?;

    let mesh = if dim == 1 {
        StructMesh::line(origin[0], origin[0] + extent[0], n[0])
            .map_err(|e| Error::DumpParse(e.to_string()))?
    } else {
        StructMesh::rect(
            [origin[0], origin[1]],
            [extent[0], extent[1]],
            [n[0], n[1]],
        )
        .map_err(|e| Error::DumpParse(e.to_string()))?
    };

    let mut data = Vec::with_capacity(mesh.cell_count());
    for _ in 0..mesh.cell_count() {
        let rho = parse_f(next("rho")?, "rho")?;
        let mut mom = [0.0; 3];
        for a in 0..dim {
            mom[a] = parse_f(next("mom")?, "momentum")?;
        }
        let e_total = parse_f(next("E")?, "energy")?;
        data.push(ConsState { rho, mom, e_total });
    }
    if tok.next().is_some() {
        return Err(Error::DumpParse("trailing tokens after cell records".into()));
    }
    Ok((CellField { mesh, data }, gamma, time))
}
