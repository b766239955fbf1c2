//! Error measurement against a reference solution: the relative energy
//! functional built on the (rho, eta) closure, L2 error norms of
//! (rho, m, eta), experimental orders of convergence, and an empirical probe
//! of the equivalence between relative energy and the squared error.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gas::{ConsState, GasLaw};
use crate::grid::{lp_norm, CellField, Lp};
use crate::util::pairwise_sum;

/// Reference trio (rho~, u~, eta~); momentum and the thermodynamic tail
/// (p~, theta~, e~) follow from the gas closures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefState {
    pub rho: f64,
    pub vel: [f64; 3],
    pub eta: f64,
}

/// Reference state carried by a conserved state (used when the reference is
/// itself a numerical field).
pub fn ref_from_cons(u: &ConsState, gas: &GasLaw) -> Result<RefState> {
    let w = gas.prim_from_cons(u)?;
    Ok(RefState { rho: u.rho, vel: w.vel, eta: gas.entropy_eta(u)? })
}

/// Cellwise [`ref_from_cons`] over a whole field.
pub fn ref_field(field: &CellField, gas: &GasLaw) -> Result<Vec<RefState>> {
    field.data.iter().map(|u| ref_from_cons(u, gas)).collect()
}

/// Relative energy
/// E(U | ref) = rho/2 |m/rho - u~|^2 + rho e
///   - d(rho e)/d rho|~ (rho - rho~) - d(rho e)/d eta|~ (eta - eta~) - rho~ e~,
/// nonnegative by convexity of rho e in (rho, eta) and zero exactly at the
/// reference.
pub fn relative_energy(u: &ConsState, r: &RefState, gas: &GasLaw) -> Result<f64> {
    let eta = gas.entropy_eta(u)?;
    let q2 = u.mom[0] * u.mom[0] + u.mom[1] * u.mom[1] + u.mom[2] * u.mom[2];
    let rho_e = u.e_total - 0.5 * q2 / u.rho;
    let (d_rho, d_eta) = gas.d_rho_e(r.rho, r.eta)?;
    let tp = gas.thermo_from_rho_eta(r.rho, r.eta)?;
    let dv = [
        u.mom[0] / u.rho - r.vel[0],
        u.mom[1] / u.rho - r.vel[1],
        u.mom[2] / u.rho - r.vel[2],
    ];
    let kin = 0.5 * u.rho * (dv[0] * dv[0] + dv[1] * dv[1] + dv[2] * dv[2]);
    Ok(kin + rho_e - d_rho * (u.rho - r.rho) - d_eta * (eta - r.eta) - r.rho * tp.e)
}

/// Expanded form of the same functional,
/// E + rho (|u~|^2/2 - (1 + C_v) theta~ + theta~ eta~ / rho~)
///   - m . u~ - eta theta~ + p~,
/// kept as an independent cross-check of [`relative_energy`].
pub fn relative_energy_dual(u: &ConsState, r: &RefState, gas: &GasLaw) -> Result<f64> {
    let eta = gas.entropy_eta(u)?;
    let tp = gas.thermo_from_rho_eta(r.rho, r.eta)?;
    let c_v = gas.c_v();
    let q2_ref = r.vel[0] * r.vel[0] + r.vel[1] * r.vel[1] + r.vel[2] * r.vel[2];
    let m_dot_u = u.mom[0] * r.vel[0] + u.mom[1] * r.vel[1] + u.mom[2] * r.vel[2];
    Ok(u.e_total
        + u.rho * (0.5 * q2_ref - (1.0 + c_v) * tp.theta + tp.theta * r.eta / r.rho)
        - m_dot_u
        - eta * tp.theta
        + tp.p)
}

/// Spatial L1 of the relative energy, sum_K |K| E(U_K | ref_K).
pub fn relative_energy_norm(
    field: &CellField,
    refs: &[RefState],
    gas: &GasLaw,
) -> Result<f64> {
    if refs.len() != field.data.len() {
        return Err(Error::MeshMismatch(format!(
            "field has {} cells, reference has {}",
            field.data.len(),
            refs.len()
        )));
    }
    let mut cells = Vec::with_capacity(refs.len());
    for (u, r) in field.data.iter().zip(refs) {
        cells.push(relative_energy(u, r, gas)?);
    }
    Ok(field.mesh.cell_volume() * pairwise_sum(&cells))
}

/// Volume-weighted L2 errors of density, momentum (vector magnitude) and
/// total entropy against the reference trio.
pub fn error_norms(
    field: &CellField,
    refs: &[RefState],
    gas: &GasLaw,
) -> Result<(f64, f64, f64)> {
    if refs.len() != field.data.len() {
        return Err(Error::MeshMismatch(format!(
            "field has {} cells, reference has {}",
            field.data.len(),
            refs.len()
        )));
    }
    let n = field.data.len();
    let mut d_rho = Vec::with_capacity(n);
    let mut d_mom = Vec::with_capacity(n);
    let mut d_eta = Vec::with_capacity(n);
    for (u, r) in field.data.iter().zip(refs) {
        d_rho.push(u.rho - r.rho);
        let dm = [
            u.mom[0] - r.rho * r.vel[0],
            u.mom[1] - r.rho * r.vel[1],
            u.mom[2] - r.rho * r.vel[2],
        ];
        d_mom.push((dm[0] * dm[0] + dm[1] * dm[1] + dm[2] * dm[2]).sqrt());
        d_eta.push(gas.entropy_eta(u)? - r.eta);
    }
    Ok((
        lp_norm(&field.mesh, &d_rho, Lp::Two),
        lp_norm(&field.mesh, &d_mom, Lp::Two),
        lp_norm(&field.mesh, &d_eta, Lp::Two),
    ))
}

/// Reference resolved below the cell scale: `per_cell` reference states per
/// cell, stored cell-major (all samples of cell 0, then cell 1, ...). Each
/// sample carries equal quadrature weight 1/per_cell within its cell.
///
/// Error functionals evaluated against a profile integrate the
/// piecewise-constant numerical field against the sub-cell reference, so a
/// discontinuity of the reference inside a cell contributes its full in-cell
/// variance instead of being averaged away. With `per_cell = 1` the
/// functionals reduce exactly to the cellwise conventions above.
#[derive(Debug, Clone)]
pub struct RefProfile {
    pub per_cell: usize,
    pub states: Vec<RefState>,
}

impl RefProfile {
    /// Wrap a plain one-state-per-cell reference.
    pub fn cellwise(states: Vec<RefState>) -> Self {
        RefProfile { per_cell: 1, states }
    }

    fn check(&self, field: &CellField) -> Result<()> {
        if self.per_cell == 0 {
            return Err(Error::InvalidConfig(
                "reference profile needs at least one sample per cell".into(),
            ));
        }
        if self.states.len() != field.data.len() * self.per_cell {
            return Err(Error::MeshMismatch(format!(
                "field has {} cells x {} samples, reference profile has {} states",
                field.data.len(),
                self.per_cell,
                self.states.len()
            )));
        }
        Ok(())
    }
}

/// L2 errors of density, momentum (vector magnitude) and total entropy with
/// the squared pointwise error integrated against the reference profile.
pub fn error_norms_profile(
    field: &CellField,
    prof: &RefProfile,
    gas: &GasLaw,
) -> Result<(f64, f64, f64)> {
    prof.check(field)?;
    let m = prof.per_cell;
    let n = field.data.len();
    let mut d_rho = Vec::with_capacity(n);
    let mut d_mom = Vec::with_capacity(n);
    let mut d_eta = Vec::with_capacity(n);
    for (i, u) in field.data.iter().enumerate() {
        let eta = gas.entropy_eta(u)?;
        let samples = &prof.states[i * m..(i + 1) * m];
        let mut s_rho = Vec::with_capacity(m);
        let mut s_mom = Vec::with_capacity(m);
        let mut s_eta = Vec::with_capacity(m);
        for r in samples {
            let dr = u.rho - r.rho;
            let dm = [
                u.mom[0] - r.rho * r.vel[0],
                u.mom[1] - r.rho * r.vel[1],
                u.mom[2] - r.rho * r.vel[2],
            ];
            s_rho.push(dr * dr);
            s_mom.push(dm[0] * dm[0] + dm[1] * dm[1] + dm[2] * dm[2]);
            s_eta.push((eta - r.eta) * (eta - r.eta));
        }
        let w = 1.0 / m as f64;
        d_rho.push((pairwise_sum(&s_rho) * w).sqrt());
        d_mom.push((pairwise_sum(&s_mom) * w).sqrt());
        d_eta.push((pairwise_sum(&s_eta) * w).sqrt());
    }
    Ok((
        lp_norm(&field.mesh, &d_rho, Lp::Two),
        lp_norm(&field.mesh, &d_mom, Lp::Two),
        lp_norm(&field.mesh, &d_eta, Lp::Two),
    ))
}

/// Spatial L1 of the relative energy integrated against the reference
/// profile: sum_K |K| mean_k E(U_K | ref_{K,k}).
pub fn relative_energy_norm_profile(
    field: &CellField,
    prof: &RefProfile,
    gas: &GasLaw,
) -> Result<f64> {
    prof.check(field)?;
    let m = prof.per_cell;
    let mut cells = Vec::with_capacity(field.data.len());
    for (i, u) in field.data.iter().enumerate() {
        let samples = &prof.states[i * m..(i + 1) * m];
        let mut vals = Vec::with_capacity(m);
        for r in samples {
            vals.push(relative_energy(u, r, gas)?);
        }
        cells.push(pairwise_sum(&vals) / m as f64);
    }
    Ok(field.mesh.cell_volume() * pairwise_sum(&cells))
}

/// Experimental order of convergence between meshes differing by a factor
/// of two: log2(e_coarse / e_fine). Both errors must be positive.
pub fn eoc(e_coarse: f64, e_fine: f64) -> Result<f64> {
    if !(e_coarse > 0.0 && e_fine > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "eoc needs positive errors, got ({e_coarse}, {e_fine})"
        )));
    }
    Ok((e_coarse / e_fine).log2())
}

/// Empirical extremal ratios E / (|m - m~|^2 + (eta - eta~)^2 + (rho - rho~)^2)
/// over a sample set; the equivalence constants are state-dependent, so only
/// the observed range is reported. Samples with a zero denominator are
/// skipped.
pub fn equivalence_probe(
    samples: &[(ConsState, RefState)],
    gas: &GasLaw,
) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (u, r) in samples {
        let dm = [
            u.mom[0] - r.rho * r.vel[0],
            u.mom[1] - r.rho * r.vel[1],
            u.mom[2] - r.rho * r.vel[2],
        ];
        let d_eta = gas.entropy_eta(u)? - r.eta;
        let d_rho = u.rho - r.rho;
        let denom =
            dm[0] * dm[0] + dm[1] * dm[1] + dm[2] * dm[2] + d_eta * d_eta + d_rho * d_rho;
        if denom == 0.0 {
            continue;
        }
        let ratio = relative_energy(u, r, gas)? / denom;
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    if lo > hi {
        return Err(Error::InvalidConfig(
            "equivalence probe needs at least one perturbed sample".into(),
        ));
    }
    Ok((lo, hi))
}

/// One mesh level of a convergence study. `ord_*` holds the EOC against the
/// previous (factor-two coarser) level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorRow {
    pub n: usize,
    pub e_rho: f64,
    pub ord_rho: Option<f64>,
    pub e_mom: f64,
    pub ord_mom: Option<f64>,
    pub e_eta: f64,
    pub ord_eta: Option<f64>,
    pub e_re: f64,
    pub ord_re: Option<f64>,
}

/// Convergence table plus the metadata needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub scenario: String,
    pub scheme: String,
    pub cfl: f64,
    pub gamma: f64,
    pub t_final: f64,
    pub dim: usize,
    pub reference: String,
    pub rows: Vec<ErrorRow>,
}

impl ErrorReport {
    /// Append a level; EOC columns fill in when the previous level used
    /// exactly half the resolution and both errors are positive.
    pub fn push_row(&mut self, n: usize, e_rho: f64, e_mom: f64, e_eta: f64, e_re: f64) {
        let ord = |prev: Option<(usize, f64)>, e: f64| -> Option<f64> {
            let (pn, pe) = prev?;
            if n == 2 * pn {
                eoc(pe, e).ok()
            } else {
                None
            }
        };
        let prev = self.rows.last().copied();
        let row = ErrorRow {
            n,
            e_rho,
            ord_rho: ord(prev.map(|r| (r.n, r.e_rho)), e_rho),
            e_mom,
            ord_mom: ord(prev.map(|r| (r.n, r.e_mom)), e_mom),
            e_eta,
            ord_eta: ord(prev.map(|r| (r.n, r.e_eta)), e_eta),
            e_re,
            ord_re: ord(prev.map(|r| (r.n, r.e_re)), e_re),
        };
        self.rows.push(row);
    }

    /// Full-precision CSV; EOC gaps stay empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,e_rho,ord_rho,e_mom,ord_mom,e_eta,ord_eta,e_RE,ord_RE\n");
        for r in &self.rows {
            let o = |v: Option<f64>| v.map(|x| format!("{x:.16e}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{:.16e},{},{:.16e},{},{:.16e},{},{:.16e},{}",
                r.n,
                r.e_rho,
                o(r.ord_rho),
                r.e_mom,
                o(r.ord_mom),
                r.e_eta,
                o(r.ord_eta),
                r.e_re,
                o(r.ord_re)
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Fixed-point table for the terminal; errors to 4 decimals, relative
    /// energy to 6, orders to 4, '-' where no EOC is defined.
    pub fn display_table(&self) -> String {
        let mut out = format!(
            "# {} | {} | cfl {} | gamma {} | T {} | ref {}\n",
            self.scenario, self.scheme, self.cfl, self.gamma, self.t_final, self.reference
        );
        let _ = writeln!(
            out,
            "{:>6} {:>10} {:>8} {:>10} {:>8} {:>10} {:>8} {:>12} {:>8}",
            "n", "e_rho", "ord", "e_mom", "ord", "e_eta", "ord", "e_RE", "ord"
        );
        for r in &self.rows {
            let o = |v: Option<f64>| v.map(|x| format!("{x:.4}")).unwrap_or_else(|| "-".into());
            let _ = writeln!(
                out,
                "{:>6} {:>10.4} {:>8} {:>10.4} {:>8} {:>10.4} {:>8} {:>12.6} {:>8}",
                r.n,
                r.e_rho,
                o(r.ord_rho),
                r.e_mom,
                o(r.ord_mom),
                r.e_eta,
                o(r.ord_eta),
                r.e_re,
                o(r.ord_re)
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::PrimState;
    use crate::grid::StructMesh;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gas() -> GasLaw {
        GasLaw::default()
    }

    fn random_prim(rng: &mut ChaCha8Rng) -> PrimState {
        PrimState::new_2d(
            rng.gen_range(0.2..3.0),
            rng.gen_range(-1.5..1.5),
            rng.gen_range(-1.5..1.5),
            rng.gen_range(0.1..4.0),
        )
    }

    #[test]
    fn zero_at_the_reference() {
        let g = gas();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let u = g.cons_from_prim(&random_prim(&mut rng)).unwrap();
            let r = ref_from_cons(&u, &g).unwrap();
            let re = relative_energy(&u, &r, &g).unwrap();
            assert!(re.abs() <= 1e-12 * u.e_total.abs().max(1.0), "re = {re}");
        }
    }

    #[test]
    fn pure_momentum_perturbation_is_kinetic() {
        let g = gas();
        let w = PrimState::new_2d(0.8, 0.3, -0.4, 1.7);
        let u = g.cons_from_prim(&w).unwrap();
        let r = ref_from_cons(&u, &g).unwrap();
        let delta = [0.05, -0.02, 0.0];
        // same rho and p (hence eta); velocity shifted by delta / rho
        let w2 = PrimState {
            rho: w.rho,
            vel: [
                w.vel[0] + delta[0] / w.rho,
                w.vel[1] + delta[1] / w.rho,
                0.0,
            ],
            p: w.p,
        };
        let u2 = g.cons_from_prim(&w2).unwrap();
        let expect = (delta[0] * delta[0] + delta[1] * delta[1]) / (2.0 * w.rho);
        assert_relative_eq!(
            relative_energy(&u2, &r, &g).unwrap(),
            expect,
            max_relative = 1e-12
        );
    }

    #[test]
    fn compact_and_dual_forms_agree() {
        let g = gas();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..1000 {
            let u = g.cons_from_prim(&random_prim(&mut rng)).unwrap();
            let rref = g.cons_from_prim(&random_prim(&mut rng)).unwrap();
            let r = ref_from_cons(&rref, &g).unwrap();
            let a = relative_energy(&u, &r, &g).unwrap();
            let b = relative_energy_dual(&u, &r, &g).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-12, epsilon = 1e-12);
        }
    }

    #[test]
    fn nonnegative_on_random_pairs() {
        let g = gas();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for k in 0..10_000 {
            let u = g.cons_from_prim(&random_prim(&mut rng)).unwrap();
            let r = if k % 4 == 0 {
                // near-coincident pairs stress the cancellation
                let mut r = ref_from_cons(&u, &g).unwrap();
                r.rho *= 1.0 + 1e-9;
                r.vel[0] += 1e-9;
                r
            } else {
                ref_from_cons(&g.cons_from_prim(&random_prim(&mut rng)).unwrap(), &g).unwrap()
            };
            let re = relative_energy(&u, &r, &g).unwrap();
            assert!(
                re >= -1e-12 * (1.0 + u.e_total.abs()),
                "negative relative energy {re} at sample {k}"
            );
        }
    }

    #[test]
    fn probe_recovers_kinetic_ratio() {
        let g = gas();
        let w = PrimState::new_1d(0.8, 0.2, 1.0);
        let u = g.cons_from_prim(&w).unwrap();
        let r = ref_from_cons(&u, &g).unwrap();
        let mut samples = Vec::new();
        for k in 1..=5 {
            let d = 0.01 * k as f64;
            let w2 = PrimState::new_1d(w.rho, w.vel[0] + d / w.rho, w.p);
            samples.push((g.cons_from_prim(&w2).unwrap(), r));
        }
        let (lo, hi) = equivalence_probe(&samples, &g).unwrap();
        // pure momentum perturbations: E / |dm|^2 = 1 / (2 rho)
        assert_relative_eq!(lo, 1.0 / (2.0 * w.rho), max_relative = 1e-9);
        assert_relative_eq!(hi, 1.0 / (2.0 * w.rho), max_relative = 1e-9);

        let coincident = vec![(u, r)];
        assert!(equivalence_probe(&coincident, &g).is_err());
    }

    #[test]
    fn eoc_reference_values() {
        assert_relative_eq!(eoc(0.0292, 0.0201).unwrap(), 0.5388, max_relative = 1e-3);
        assert_eq!(eoc(4.0, 1.0).unwrap(), 2.0);
        assert_eq!(eoc(0.5, 0.5).unwrap(), 0.0);
        assert!(eoc(0.0, 1.0).is_err());
        assert!(eoc(1.0, -2.0).is_err());
    }

    #[test]
    fn error_norms_identical_and_offset_fields() {
        let g = gas();
        let mesh = StructMesh::line(0.0, 1.0, 8).unwrap();
        let u = g.cons_from_prim(&PrimState::new_1d(1.2, 0.4, 0.9)).unwrap();
        let field = CellField::constant(mesh, u);
        let refs = ref_field(&field, &g).unwrap();
        assert_eq!(error_norms(&field, &refs, &g).unwrap(), (0.0, 0.0, 0.0));

        // constant offsets (a, b, c) in (rho, m, eta) on the unit domain
        let (a, b, c) = (0.05, -0.03, 0.02);
        let r0 = refs[0];
        let rho = r0.rho + a;
        let m = r0.rho * r0.vel[0] + b;
        let tp = g.thermo_from_rho_eta(rho, r0.eta + c).unwrap();
        let off = ConsState::new_1d(rho, m, tp.p / (g.gamma() - 1.0) + 0.5 * m * m / rho);
        let field2 = CellField::constant(mesh, off);
        let (e_rho, e_mom, e_eta) = error_norms(&field2, &refs, &g).unwrap();
        assert_relative_eq!(e_rho, a.abs(), max_relative = 1e-13);
        assert_relative_eq!(e_mom, b.abs(), max_relative = 1e-13);
        assert_relative_eq!(e_eta, c.abs(), max_relative = 1e-11);
    }

    #[test]
    fn re_norm_constant_integrand() {
        let g = gas();
        let mesh = StructMesh::line(0.0, 1.0, 16).unwrap();
        let w = PrimState::new_1d(0.9, 0.1, 1.3);
        let u = g.cons_from_prim(&w).unwrap();
        let refs = ref_field(&CellField::constant(mesh, u), &g).unwrap();
        let d = 0.04;
        let w2 = PrimState::new_1d(w.rho, w.vel[0] + d / w.rho, w.p);
        let field = CellField::constant(mesh, g.cons_from_prim(&w2).unwrap());
        assert_relative_eq!(
            relative_energy_norm(&field, &refs, &g).unwrap(),
            d * d / (2.0 * w.rho),
            max_relative = 1e-12
        );

        let short = vec![refs[0]; 3];
        assert!(matches!(
            relative_energy_norm(&field, &short, &g),
            Err(Error::MeshMismatch(_))
        ));
        assert!(matches!(
            error_norms(&field, &short, &g),
            Err(Error::MeshMismatch(_))
        ));
    }

    #[test]
    fn profile_with_one_sample_per_cell_matches_cellwise() {
        let g = gas();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mesh = StructMesh::line(0.0, 1.0, 17).unwrap();
        let field = CellField::from_fn(mesh, |_| {
            g.cons_from_prim(&random_prim(&mut rng)).unwrap()
        });
        let refs: Vec<RefState> = (0..17)
            .map(|_| {
                let w = random_prim(&mut rng);
                ref_from_cons(&g.cons_from_prim(&w).unwrap(), &g).unwrap()
            })
            .collect();
        let prof = RefProfile::cellwise(refs.clone());
        let a = error_norms(&field, &refs, &g).unwrap();
        let b = error_norms_profile(&field, &prof, &g).unwrap();
        assert_relative_eq!(a.0, b.0, max_relative = 1e-15);
        assert_relative_eq!(a.1, b.1, max_relative = 1e-15);
        assert_relative_eq!(a.2, b.2, max_relative = 1e-15);
        assert_relative_eq!(
            relative_energy_norm(&field, &refs, &g).unwrap(),
            relative_energy_norm_profile(&field, &prof, &g).unwrap(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn profile_integrates_sub_cell_reference_variance() {
        // One cell holding rho = 1 against a reference that is 0.5 on half the
        // cell and 1.5 on the other half: the cell-average reference sees zero
        // density error, the sub-cell profile sees the full in-cell variance
        // sqrt(mean((1-0.5)^2, (1-1.5)^2)) = 0.5.
        let g = gas();
        let mesh = StructMesh::line(0.0, 1.0, 1).unwrap();
        let w = PrimState::new_1d(1.0, 0.0, 1.0);
        let field = CellField::constant(mesh, g.cons_from_prim(&w).unwrap());
        let half = |rho: f64| {
            let u = g.cons_from_prim(&PrimState::new_1d(rho, 0.0, 1.0)).unwrap();
            ref_from_cons(&u, &g).unwrap()
        };
        let prof = RefProfile { per_cell: 2, states: vec![half(0.5), half(1.5)] };
        let (e_rho, _, _) = error_norms_profile(&field, &prof, &g).unwrap();
        assert_relative_eq!(e_rho, 0.5, max_relative = 1e-14);
        let avg = vec![half(1.0)];
        let (e_avg, _, _) = error_norms(&field, &avg, &g).unwrap();
        assert_eq!(e_avg, 0.0);

        // shape violations are named errors
        let bad = RefProfile { per_cell: 2, states: vec![half(0.5)] };
        assert!(matches!(
            error_norms_profile(&field, &bad, &g),
            Err(Error::MeshMismatch(_))
        ));
        let zero = RefProfile { per_cell: 0, states: vec![] };
        assert!(matches!(
            relative_energy_norm_profile(&field, &zero, &g),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn report_serialization_round_trip() {
        let mut rep = ErrorReport {
            scenario: "sod".into(),
            scheme: "godunov".into(),
            cfl: 0.9,
            gamma: 1.4,
            t_final: 0.15,
            dim: 1,
            reference: "exact".into(),
            rows: Vec::new(),
        };
        rep.push_row(32, 0.0378, 0.0376, 0.0615, 0.005135);
        rep.push_row(64, 0.0292, 0.0250, 0.0430, 0.002210);
        rep.push_row(256, 0.0100, 0.0080, 0.0150, 0.000500); // skips a level: no EOC

        assert!(rep.rows[0].ord_rho.is_none());
        let expect = eoc(0.0378, 0.0292).unwrap();
        assert_eq!(rep.rows[1].ord_rho, Some(expect));
        assert!(rep.rows[2].ord_rho.is_none());

        let csv = rep.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "n,e_rho,ord_rho,e_mom,ord_mom,e_eta,ord_eta,e_RE,ord_RE");
        let first: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(first[0], "32");
        assert_eq!(first[2], ""); // empty EOC slot
        assert_eq!(first[1].parse::<f64>().unwrap(), 0.0378);
        let second: Vec<&str> = lines[2].split(',').collect();
        assert_eq!(second[2].parse::<f64>().unwrap(), expect);

        let json = rep.to_json();
        let back: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(back["scenario"], "sod");
        assert_eq!(back["rows"].as_array().unwrap().len(), 3);
        assert_eq!(back["rows"][0]["ord_rho"], serde_json::Value::Null);

        let table = rep.display_table();
        assert!(table.contains("e_RE"));
        assert!(table.contains('-'));
        assert_eq!(table.lines().count(), 5);
    }
}
