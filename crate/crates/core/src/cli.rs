//! Command-line front end: single runs, convergence studies, exact-Riemann
//! queries, and the scenario listing. Outputs are deterministic: identical
//! command lines produce byte-identical dumps, CSV, and JSON.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::diagnostics::{
    error_norms_profile, ref_field, ref_from_cons, relative_energy_norm_profile, ErrorReport,
    RefProfile,
};
use crate::error::{Error, Result};
use crate::gas::{GasLaw, PrimState};
use crate::grid::{read_dump, totals, write_dump, CellField, StructMesh};
use crate::riemann::{exact_profile, sample, solve_star, wave_span};
use crate::scenarios::{builtin, builtin_names, initial_field, parse_scenario, ReferenceSpec, Scenario};
use crate::scheme::{run, BoundaryConfig, RunConfig, SchemeKind, StepStats};
use crate::util::ExecMode;

#[derive(Parser)]
#[command(
    name = "eulerfv",
    version,
    about = "Finite-volume Euler solver: Godunov with the exact Riemann solver, \
             a diffusive comparison scheme, and relative-energy convergence studies"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one scenario on one mesh and print a conservation summary
    Solve(SolveArgs),
    /// Run a mesh ladder against a reference and print the error table
    Convergence(ConvergenceArgs),
    /// Solve a single Riemann problem and print the star state
    Riemann(RiemannArgs),
    /// List the builtin scenarios
    ListScenarios,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Builtin scenario name (see list-scenarios)
    #[arg(required_unless_present = "scenario_file", conflicts_with = "scenario_file")]
    scenario: Option<String>,

    /// TOML scenario document to run instead of a builtin
    #[arg(long, value_name = "PATH")]
    scenario_file: Option<PathBuf>,

    /// Override the scenario's adiabatic exponent
    #[arg(long)]
    gamma: Option<f64>,
}

impl ScenarioArgs {
    fn load(&self) -> Result<Scenario> {
        let mut s = if let Some(path) = &self.scenario_file {
            parse_scenario(&std::fs::read_to_string(path)?)?
        } else {
            builtin(self.scenario.as_deref().unwrap_or_default())?
        };
        if let Some(g) = self.gamma {
            GasLaw::new(g)?;
            s.gamma = g;
        }
        Ok(s)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Godunov,
    Vfv,
}

#[derive(Args)]
struct SchemeArgs {
    /// Numerical flux
    #[arg(long, value_enum, default_value = "godunov")]
    scheme: SchemeArg,

    /// CFL number (defaults: godunov 0.9, vfv 0.3)
    #[arg(long)]
    cfl: Option<f64>,

    /// Dissipation scale of the vfv flux
    #[arg(long, default_value_t = 1.0)]
    vfv_mu: f64,

    /// Mesh-viscosity exponent of the vfv flux (adds h^epsilon to lambda)
    #[arg(long, default_value_t = 1.0)]
    vfv_epsilon: f64,

    /// Disable data parallelism (results are bitwise identical either way)
    #[arg(long)]
    sequential: bool,
}

impl SchemeArgs {
    fn kind(&self) -> SchemeKind {
        match self.scheme {
            SchemeArg::Godunov => SchemeKind::Godunov,
            SchemeArg::Vfv => SchemeKind::Vfv {
                mu_scale: self.vfv_mu,
                epsilon: self.vfv_epsilon,
            },
        }
    }

    fn cfl(&self) -> f64 {
        self.cfl.unwrap_or_else(|| self.kind().default_cfl())
    }

    fn exec(&self) -> ExecMode {
        if self.sequential {
            ExecMode::Sequential
        } else {
            ExecMode::Parallel
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,

    /// Cells per axis
    #[arg(short, long, default_value_t = 128)]
    n: usize,

    #[command(flatten)]
    scheme: SchemeArgs,

    /// Write the final field in the text dump format
    #[arg(long, value_name = "PATH")]
    dump: Option<PathBuf>,

    /// Write per-step stats as CSV
    #[arg(long, value_name = "PATH")]
    stats: Option<PathBuf>,
}

#[derive(Args)]
struct ConvergenceArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,

    /// Mesh ladder `A:B`, doubling from A to B (at least two levels)
    #[arg(long, value_name = "A:B")]
    ladder: String,

    #[command(flatten)]
    scheme: SchemeArgs,

    /// Reference: `exact`, `fine:N`, or `file:PATH` (a dump at the final time)
    #[arg(long = "ref", value_name = "SPEC")]
    reference: Option<String>,

    /// Write the error table as CSV (a JSON twin goes next to it)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RiemannArgs {
    /// Left state as `rho,u,p`
    #[arg(long, value_name = "RHO,U,P")]
    left: String,

    /// Right state as `rho,u,p`
    #[arg(long, value_name = "RHO,U,P")]
    right: String,

    /// Adiabatic exponent
    #[arg(long, default_value_t = 1.4)]
    gamma: f64,

    /// Sample the exact solution at time T on N cells over [0, 1], jump at 0.5
    #[arg(long, num_args = 2, value_names = ["T", "N"], requires = "dump")]
    profile: Option<Vec<String>>,

    /// Dump path for `--profile`
    #[arg(long, value_name = "PATH", requires = "profile")]
    dump: Option<PathBuf>,
}

/// Parse, dispatch, and map failures to process exit codes:
/// 0 success, 2 usage/config, 3 runtime failure, 4 I/O.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::UnknownScenario(_)) {
                eprintln!("available scenarios: {}", builtin_names().join(", "));
            }
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Solve(a) => cmd_solve(a),
        Cmd::Convergence(a) => cmd_convergence(a),
        Cmd::Riemann(a) => cmd_riemann(a),
        Cmd::ListScenarios => cmd_list(),
    }
}

fn fmt_totals(dim: usize, u: &crate::gas::ConsState) -> String {
    let mut s = format!("mass {:.16e} momx {:.16e}", u.rho, u.mom[0]);
    if dim == 2 {
        s.push_str(&format!(" momy {:.16e}", u.mom[1]));
    }
    s.push_str(&format!(" energy {:.16e}", u.e_total));
    s
}

fn cmd_solve(a: SolveArgs) -> Result<()> {
    let s = a.scenario.load()?;
    let gas = GasLaw::new(s.gamma)?;
    let scheme = a.scheme.kind();
    let cfl = a.scheme.cfl();
    let mesh = s.mesh(a.n)?;
    if !s.interfaces_aligned(&mesh) {
        println!("note: region interfaces do not align with the mesh; initial data uses sub-cell integration");
    }
    let init = initial_field(&s, &mesh, &gas)?;
    let before = totals(&init);

    let mut cfg = RunConfig::new(scheme, s.t_final);
    cfg.boundary = BoundaryConfig::uniform(s.boundary);
    cfg.gas = gas;
    cfg.cfl = cfl;
    cfg.exec = a.scheme.exec();
    let out = run(&cfg, init)?;
    let after = totals(&out.field);

    println!(
        "scenario {} | dim {} | n {} | scheme {} | cfl {} | gamma {} | T {}",
        s.name,
        s.dim,
        a.n,
        scheme.label(),
        cfl,
        s.gamma,
        s.t_final
    );
    println!("steps {}", out.steps);
    println!("totals initial: {}", fmt_totals(s.dim, &before));
    println!("totals final:   {}", fmt_totals(s.dim, &after));
    println!("boundary delta: {}", fmt_totals(s.dim, &(after - before)));
    if let Some(st) = out.stats.last() {
        println!(
            "monitors: rho_min {:.16e} p_min {:.16e} smax {:.16e} jump_l1 {:.16e}",
            st.rho_min, st.p_min, st.smax, st.jump_l1
        );
    }

    if let Some(path) = &a.dump {
        let mut w = BufWriter::new(File::create(path)?);
        write_dump(&out.field, s.gamma, s.t_final, &mut w)?;
        w.flush()?;
    }
    if let Some(path) = &a.stats {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "{}", StepStats::csv_header(s.dim))?;
        for st in &out.stats {
            writeln!(w, "{}", st.csv_row(s.dim))?;
        }
        w.flush()?;
    }
    Ok(())
}

fn parse_ladder(text: &str) -> Result<Vec<usize>> {
    let bad = |msg: &str| Error::InvalidConfig(format!("ladder {text:?}: {msg}"));
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| bad("expected the form A:B"))?;
    let a: usize = a.trim().parse().map_err(|_| bad("A is not a positive integer"))?;
    let b: usize = b.trim().parse().map_err(|_| bad("B is not a positive integer"))?;
    if a == 0 || b < 2 * a {
        return Err(bad("need 0 < A and B >= 2A"));
    }
    let mut ladder = vec![a];
    while *ladder.last().unwrap() < b {
        ladder.push(2 * ladder.last().unwrap());
    }
    if *ladder.last().unwrap() != b {
        return Err(bad("B must be A times a power of two"));
    }
    Ok(ladder)
}

/// Reference source for a convergence study.
pub enum RefSource {
    /// Exact self-similar fan (two-state 1D scenarios only).
    Exact1D,
    /// Godunov run at CFL 0.9 on an n-per-axis mesh; each ladder cell then
    /// integrates against its nested fine cells.
    FineMesh(usize),
    /// Externally supplied field at the final time (e.g. a loaded dump).
    Field { field: CellField, label: String },
}

/// Everything a convergence study needs; shared by the CLI and the test
/// harness.
pub struct StudySpec {
    pub scenario: Scenario,
    pub scheme: SchemeKind,
    pub cfl: f64,
    pub ladder: Vec<usize>,
    pub reference: RefSource,
    pub exec: ExecMode,
}

/// Run every ladder entry, measure (rho, m, eta) L2 errors and the relative
/// energy against the reference, and assemble the report with EOC columns.
pub fn convergence_study(spec: &StudySpec) -> Result<ErrorReport> {
    let s = &spec.scenario;
    let gas = GasLaw::new(s.gamma)?;
    if spec.ladder.is_empty() {
        return Err(Error::InvalidConfig("empty mesh ladder".into()));
    }
    for w in spec.ladder.windows(2) {
        if w[1] != 2 * w[0] {
            return Err(Error::InvalidConfig(format!(
                "ladder must double at each level, got {} then {}",
                w[0], w[1]
            )));
        }
    }

    let exact_pair = match &spec.reference {
        RefSource::Exact1D => Some(s.exact1d_pair().ok_or_else(|| {
            Error::InvalidConfig(
                "the exact reference needs a 1D scenario with two states and a single x interface"
                    .into(),
            )
        })?),
        _ => None,
    };
    let fine = match &spec.reference {
        RefSource::Exact1D => None,
        RefSource::FineMesh(n_ref) => {
            let mesh = s.mesh(*n_ref)?;
            let init = initial_field(s, &mesh, &gas)?;
            let mut cfg = RunConfig::new(SchemeKind::Godunov, s.t_final);
            cfg.boundary = BoundaryConfig::uniform(s.boundary);
            cfg.gas = gas;
            cfg.cfl = 0.9;
            cfg.exec = spec.exec;
            cfg.stats_every = usize::MAX;
            Some(run(&cfg, init)?.field)
        }
        RefSource::Field { field, .. } => Some(field.clone()),
    };
    let ref_label = match &spec.reference {
        RefSource::Exact1D => ReferenceSpec::Exact1D.to_string(),
        RefSource::FineMesh(n) => ReferenceSpec::FineMesh(*n).to_string(),
        RefSource::Field { label, .. } => label.clone(),
    };

    let mut report = ErrorReport {
        scenario: s.name.clone(),
        scheme: spec.scheme.label(),
        cfl: spec.cfl,
        gamma: s.gamma,
        t_final: s.t_final,
        dim: s.dim,
        reference: ref_label,
        rows: Vec::new(),
    };

    for &n in &spec.ladder {
        let mesh = s.mesh(n)?;
        let init = initial_field(s, &mesh, &gas)?;
        let mut cfg = RunConfig::new(spec.scheme, s.t_final);
        cfg.boundary = BoundaryConfig::uniform(s.boundary);
        cfg.gas = gas;
        cfg.cfl = spec.cfl;
        cfg.exec = spec.exec;
        cfg.stats_every = usize::MAX;
        let out = run(&cfg, init)?;

        let reference = match (&exact_pair, &fine) {
            (Some((l, r, pos)), _) => exact_ref_profile(l, r, *pos, s.t_final, &mesh, &gas)?,
            (None, Some(f)) => fine_ref_profile(f, &mesh, &gas)?,
            (None, None) => unreachable!("reference source handled above"),
        };
        let (e_rho, e_mom, e_eta) = error_norms_profile(&out.field, &reference, &gas)?;
        let e_re = relative_energy_norm_profile(&out.field, &reference, &gas)?;
        report.push_row(n, e_rho, e_mom, e_eta, e_re);
    }
    Ok(report)
}

/// Sub-cell sample count for exact references in the error functionals.
const REF_SUBSAMPLES: usize = 64;

/// Exact Riemann fan sampled at [`REF_SUBSAMPLES`] midpoints per cell. The
/// error functionals integrate the squared pointwise error over each cell,
/// so a cell straddling a reference discontinuity contributes its full
/// in-cell variance instead of having the jump averaged away first;
/// averaging the reference first would understate the error near fronts.
fn exact_ref_profile(
    left: &PrimState,
    right: &PrimState,
    jump_position: f64,
    t: f64,
    mesh: &StructMesh,
    gas: &GasLaw,
) -> Result<RefProfile> {
    if mesh.dim != 1 {
        return Err(Error::MeshMismatch(format!(
            "the exact reference needs a 1D mesh, got dim {}",
            mesh.dim
        )));
    }
    if !(t > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "the exact reference needs t > 0, got {t}"
        )));
    }
    let fan = solve_star(left, right, gas)?;
    let h = mesh.h[0];
    let m = REF_SUBSAMPLES;
    let mut states = Vec::with_capacity(mesh.n[0] * m);
    for i in 0..mesh.n[0] {
        let x0 = mesh.origin[0] + i as f64 * h;
        for k in 0..m {
            let x = x0 + (k as f64 + 0.5) / m as f64 * h;
            let w = sample(&fan, left, right, (x - jump_position) / t, gas);
            let u = gas.cons_from_prim(&w)?;
            states.push(ref_from_cons(&u, gas)?);
        }
    }
    Ok(RefProfile { per_cell: m, states })
}

/// Fine numerical reference attached to a coarse mesh: each coarse cell
/// carries the reference states of its nested fine cells, so the error
/// functionals integrate exactly against the piecewise-constant fine field.
fn fine_ref_profile(fine: &CellField, coarse: &StructMesh, gas: &GasLaw) -> Result<RefProfile> {
    let fm = &fine.mesh;
    if !fm.domains_match(coarse) {
        return Err(Error::MeshMismatch(
            "the reference needs identical domains and dimension".into(),
        ));
    }
    let mut ratio = [1usize; 3];
    for a in 0..fm.dim {
        if coarse.n[a] == 0 || fm.n[a] % coarse.n[a] != 0 {
            return Err(Error::NonNestedMesh {
                fine: fm.n[a],
                coarse: coarse.n[a],
                axis: a,
            });
        }
        ratio[a] = fm.n[a] / coarse.n[a];
    }
    let fine_refs = ref_field(fine, gas)?;
    let children = ratio[0] * ratio[1] * ratio[2];
    let mut states = Vec::with_capacity(coarse.cell_count() * children);
    for flat in 0..coarse.cell_count() {
        let c = coarse.coords(flat);
        for s in 0..children {
            let di = s % ratio[0];
            let dj = s / ratio[0];
            states.push(fine_refs[fm.index(c[0] * ratio[0] + di, c[1] * ratio[1] + dj)]);
        }
    }
    Ok(RefProfile { per_cell: children, states })
}

fn cmd_convergence(a: ConvergenceArgs) -> Result<()> {
    let s = a.scenario.load()?;
    let ladder = parse_ladder(&a.ladder)?;
    let reference = match a.reference.as_deref() {
        None => match s.reference {
            ReferenceSpec::Exact1D => RefSource::Exact1D,
            ReferenceSpec::FineMesh(n) => RefSource::FineMesh(n),
        },
        Some(spec) => {
            if let Some(path) = spec.strip_prefix("file:") {
                let mut r = BufReader::new(File::open(path)?);
                let (field, gamma, time) = read_dump(&mut r)?;
                if (gamma - s.gamma).abs() > 1e-12 {
                    return Err(Error::InvalidConfig(format!(
                        "reference dump has gamma {gamma}, scenario uses {}",
                        s.gamma
                    )));
                }
                if (time - s.t_final).abs() > 1e-12 * s.t_final.max(1.0) {
                    return Err(Error::InvalidConfig(format!(
                        "reference dump is at t = {time}, scenario ends at {}",
                        s.t_final
                    )));
                }
                RefSource::Field { field, label: format!("file:{path}") }
            } else {
                match ReferenceSpec::parse(spec)? {
                    ReferenceSpec::Exact1D => RefSource::Exact1D,
                    ReferenceSpec::FineMesh(n) => RefSource::FineMesh(n),
                }
            }
        }
    };

    let spec = StudySpec {
        scheme: a.scheme.kind(),
        cfl: a.scheme.cfl(),
        ladder,
        reference,
        exec: a.scheme.exec(),
        scenario: s,
    };
    let report = convergence_study(&spec)?;
    print!("{}", report.display_table());

    if let Some(path) = &a.out {
        std::fs::write(path, report.to_csv())?;
        let json_path = json_twin(path);
        if json_path != *path {
            std::fs::write(json_path, report.to_json())?;
        }
    }
    Ok(())
}

fn json_twin(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

fn parse_state(text: &str) -> Result<PrimState> {
    let parts: Vec<&str> = text.split(',').collect();
    let bad = || Error::InvalidConfig(format!("state {text:?} must be rho,u,p"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut v = [0.0; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part.trim().parse().map_err(|_| bad())?;
    }
    Ok(PrimState::new_1d(v[0], v[1], v[2]))
}

fn cmd_riemann(a: RiemannArgs) -> Result<()> {
    let gas = GasLaw::new(a.gamma)?;
    let left = parse_state(&a.left)?;
    let right = parse_state(&a.right)?;
    let fan = solve_star(&left, &right, &gas)?;
    let span = wave_span(&fan, &left, &right, &gas);
    let kind = |k: crate::riemann::WaveKind| match k {
        crate::riemann::WaveKind::Shock => "shock",
        crate::riemann::WaveKind::Rarefaction => "rarefaction",
    };
    println!("p_star {:.16e}", fan.p_star);
    println!("u_star {:.16e}", fan.u_star);
    println!("rho_star_left {:.16e}", fan.rho_star_left);
    println!("rho_star_right {:.16e}", fan.rho_star_right);
    println!("left_wave {} right_wave {}", kind(fan.left_wave), kind(fan.right_wave));
    println!(
        "span {:.16e} {:.16e} {:.16e} {:.16e} {:.16e}",
        span.left_head, span.left_tail, span.contact, span.right_tail, span.right_head
    );

    if let Some(profile) = &a.profile {
        let t: f64 = profile[0]
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad profile time {:?}", profile[0])))?;
        let n: usize = profile[1]
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad profile size {:?}", profile[1])))?;
        let mesh = crate::grid::StructMesh::line(0.0, 1.0, n)?;
        let field = exact_profile(&left, &right, 0.5, t, &mesh, &gas)?;
        let path = a.dump.as_ref().expect("clap enforces --dump with --profile");
        let mut w = BufWriter::new(File::create(path)?);
        write_dump(&field, a.gamma, t, &mut w)?;
        w.flush()?;
        println!("profile written: t {t} n {n}");
    }
    Ok(())
}

fn cmd_list() -> Result<()> {
    for name in builtin_names() {
        let s = builtin(name)?;
        println!(
            "{name:<16} dim {}  T {:<5} ref {:<9} regions {}",
            s.dim,
            s.t_final,
            s.reference.to_string(),
            s.regions.len()
        );
    }
    Ok(())
}

impl SchemeKind {
    /// Human label; the diffusive scheme is marked as the stand-in it is.
    pub fn label(&self) -> String {
        match self {
            SchemeKind::Godunov => "godunov".into(),
            SchemeKind::Vfv { mu_scale, epsilon } => {
                format!("vfv-standin(mu={mu_scale},eps={epsilon})")
            }
        }
    }
}
