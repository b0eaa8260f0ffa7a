use std::io::Write;

use loop_modes::solver::{
    mode_coefficients, solve_free_parameter, sweep_square, trace_wavefunction, FreeParameter, ModeRoot, RefineOptions,
    SolveOptions, SweepOptions,
};
use loop_modes::triangular::{self, TriangularBarrierSpec};
use loop_modes::{make_profile, Circuit, ConstantsProfile, Model};
use serde_json::json;

use crate::cli::{Cli, Command};
use crate::config::{OutputFormat, RangeSpec, RunConfig};
use crate::format::{opt_sci, row, sci};
use crate::CliError;

pub const DEFAULT_SAMPLES: usize = 200;

pub fn run(cli: Cli, out: &mut impl Write) -> Result<(), CliError> {
    let (name, model, common) = match &cli.command {
        Command::Solve { model, common } => ("solve", *model, common),
        Command::Sweep { common } => ("sweep", None, common),
        Command::Scan { common } => ("scan", None, common),
        Command::Wavefunction { model, common } => ("wavefunction", *model, common),
    };
    let flags = common.to_config(model);
    let cfg = match &common.config {
        Some(path) => RunConfig::load(path)?.overlay(&flags),
        None => flags,
    };
    match name {
        "solve" => solve(&cfg, out),
        "sweep" => sweep(&cfg, out),
        "scan" => scan(&cfg, out),
        _ => wavefunction(&cfg, out),
    }
}

fn write_json(out: &mut impl Write, value: &serde_json::Value) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| CliError::Io(e.into()))?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Θ is entered and reported in degrees.
fn to_internal(free: FreeParameter, x: f64) -> f64 {
    if free == FreeParameter::Theta {
        x.to_radians()
    } else {
        x
    }
}

fn to_external(free: FreeParameter, x: f64) -> f64 {
    if free == FreeParameter::Theta {
        x.to_degrees()
    } else {
        x
    }
}

fn external_unit(free: FreeParameter) -> &'static str {
    if free == FreeParameter::Theta {
        "deg"
    } else {
        free.unit()
    }
}

fn find_roots(
    cfg: &RunConfig,
    model: Model,
    profile: &ConstantsProfile,
) -> Result<(FreeParameter, Vec<ModeRoot>), CliError> {
    let free = cfg.free.ok_or_else(|| CliError::Input("--free is required".into()))?;
    let range = cfg.range()?.ok_or_else(|| CliError::Input("--range is required".into()))?;
    let (lo, hi) = (to_internal(free, range.lo), to_internal(free, range.hi));
    let steps = range.step.map(|step| ((range.hi - range.lo) / step).ceil().max(2.0) as usize);
    let opts = SolveOptions { steps, refine: RefineOptions::default() };
    let roots = solve_free_parameter(model, &cfg.parameters()?, free, lo, hi, profile, &opts)?;
    Ok((free, roots))
}

fn solve(cfg: &RunConfig, out: &mut impl Write) -> Result<(), CliError> {
    let model = cfg.model()?;
    let profile = make_profile(cfg.constants());
    let (free, roots) = find_roots(cfg, model, &profile)?;
    match cfg.format() {
        OutputFormat::Csv => {
            out.write_all(b"branch,free_parameter,value,unit,residual\n")?;
            for r in &roots {
                let cells = [
                    r.branch_index.to_string(),
                    free.name().to_string(),
                    sci(to_external(free, r.value)),
                    external_unit(free).to_string(),
                    sci(r.residual),
                ];
                out.write_all(row(&cells).as_bytes())?;
            }
        }
        OutputFormat::Json => {
            let list: Vec<_> = roots
                .iter()
                .map(|r| {
                    json!({
                        "branch": r.branch_index,
                        "free_parameter": free,
                        "value": to_external(free, r.value),
                        "unit": external_unit(free),
                        "residual": r.residual,
                    })
                })
                .collect();
            write_json(out, &json!({ "config": cfg, "roots": list }))?;
        }
    }
    if roots.is_empty() {
        return Err(CliError::NoRoots(format!("no {} root in range {}", free, cfg.range.as_deref().unwrap_or(""))));
    }
    Ok(())
}

fn barrier_lengths(cfg: &RunConfig) -> Result<Vec<f64>, CliError> {
    let mut list = if !cfg.b_list.is_empty() {
        cfg.b_list.clone()
    } else {
        let range: RangeSpec = cfg.range()?.ok_or_else(|| CliError::Input("sweep needs --b-list or --range".into()))?;
        match cfg.log_points {
            Some(n) => range.log_grid(n)?,
            None => range.grid()?,
        }
    };
    list.sort_by(f64::total_cmp);
    list.dedup();
    Ok(list)
}

fn sweep(cfg: &RunConfig, out: &mut impl Write) -> Result<(), CliError> {
    if cfg.model.is_some_and(|m| m != Model::Square) {
        return Err(CliError::Input("sweep follows the square loop only".into()));
    }
    let profile = make_profile(cfg.constants());
    let energy = cfg.require(cfg.energy, "energy")?;
    let potential = cfg.require(cfg.potential, "potential")?;
    let bs = barrier_lengths(cfg)?;
    let result = sweep_square(energy, potential, &bs, &profile, &SweepOptions::default())?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    match cfg.format() {
        OutputFormat::Csv => {
            out.write_all(b"b,theta_deg_branch0,ka_branch0,a_branch0,theta_deg_branch1,ka_branch1,a_branch1\n")?;
            for r in &result.rows {
                let mut cells = vec![sci(r.b)];
                for p in &r.branches {
                    cells.push(opt_sci(p.map(|p| p.theta_deg)));
                    cells.push(opt_sci(p.map(|p| p.ka)));
                    cells.push(opt_sci(p.map(|p| p.a)));
                }
                out.write_all(row(&cells).as_bytes())?;
            }
        }
        OutputFormat::Json => {
            let rows: Vec<_> = result
                .rows
                .iter()
                .map(|r| {
                    let branches: Vec<_> = r
                        .branches
                        .iter()
                        .map(|p| {
                            p.map(|p| json!({ "theta_deg": p.theta_deg, "ka": p.ka, "a": p.a, "residual": p.residual }))
                        })
                        .collect();
                    json!({ "b": r.b, "branches": branches })
                })
                .collect();
            write_json(out, &json!({ "config": cfg, "rows": rows, "warnings": result.warnings }))?;
        }
    }
    Ok(())
}

struct ScanRow {
    theta_deg: f64,
    start: f64,
    turning: f64,
    end: f64,
    determinant: f64,
    note: &'static str,
}

fn scan(cfg: &RunConfig, out: &mut impl Write) -> Result<(), CliError> {
    if cfg.model.is_some_and(|m| m != Model::Triangular) {
        return Err(CliError::Input("scan tabulates the triangular loop only".into()));
    }
    let profile = make_profile(cfg.constants());
    let energy = cfg.require(cfg.energy, "energy")?;
    let potential = cfg.require(cfg.potential, "potential")?;
    let length = cfg.require(cfg.barrier_length, "barrier-length")?;
    let mut grid = match cfg.range()? {
        Some(r) => r.grid()?,
        None => Vec::new(),
    };
    grid.extend(&cfg.theta);
    if grid.is_empty() {
        return Err(CliError::Input("scan needs --range lo:hi:step or --theta".into()));
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let rows = grid
        .iter()
        .map(|&deg| {
            let spec = TriangularBarrierSpec::new(energy, potential, length, deg.to_radians())?;
            let context = |source| CliError::Evaluation { context: format!("theta = {deg} deg"), source };
            let d = triangular::derive(&spec, &profile).map_err(context)?;
            let determinant = Circuit::Triangular(spec).determinant(&profile).map_err(context)?;
            let note = if d.barrier_start == 0.0 { "degenerate: A = 0" } else { "" };
            Ok(ScanRow {
                theta_deg: deg,
                start: d.barrier_start,
                turning: d.turning_point,
                end: d.barrier_end,
                determinant,
                note,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    match cfg.format() {
        OutputFormat::Csv => {
            out.write_all(b"theta_deg,A,B,C,determinant,note\n")?;
            for r in &rows {
                let cells = [
                    sci(r.theta_deg),
                    sci(r.start),
                    sci(r.turning),
                    sci(r.end),
                    sci(r.determinant),
                    r.note.to_string(),
                ];
                out.write_all(row(&cells).as_bytes())?;
            }
        }
        OutputFormat::Json => {
            let list: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "theta_deg": r.theta_deg, "A": r.start, "B": r.turning, "C": r.end,
                        "determinant": r.determinant, "note": r.note,
                    })
                })
                .collect();
            write_json(out, &json!({ "config": cfg, "rows": list }))?;
        }
    }
    Ok(())
}

fn wavefunction(cfg: &RunConfig, out: &mut impl Write) -> Result<(), CliError> {
    let model = cfg.model()?;
    let profile = make_profile(cfg.constants());
    let samples = cfg.samples.unwrap_or(DEFAULT_SAMPLES);
    let params = if cfg.free.is_some() {
        let (free, roots) = find_roots(cfg, model, &profile)?;
        let index = cfg.root_index.unwrap_or(0);
        let root = match roots.get(index) {
            Some(r) => r,
            None if roots.is_empty() => {
                return Err(CliError::NoRoots(format!(
                    "no {free} root in range {}",
                    cfg.range.as_deref().unwrap_or("")
                )))
            }
            None => {
                return Err(CliError::Input(format!("root index {index} out of range ({} roots found)", roots.len())))
            }
        };
        cfg.parameters()?.with(free, root.value)
    } else {
        cfg.parameters()?
    };
    let circuit = params.circuit(model, &profile)?;
    let theta_deg = circuit.theta(&profile)?.to_degrees();
    let coeffs = mode_coefficients(&circuit, &profile)?;
    let trace = trace_wavefunction(&circuit, &coeffs, samples, &profile)?;

    match cfg.format() {
        OutputFormat::Csv => {
            let join = |v: &[f64]| v.iter().map(|x| sci(*x)).collect::<Vec<_>>().join(",");
            writeln!(out, "# model={model} theta_deg={}", sci(theta_deg))?;
            writeln!(out, "# coefficients={}", join(&coeffs.c))?;
            writeln!(out, "# boundary_residuals={}", join(&trace.boundary_residuals))?;
            writeln!(out, "# relative_boundary_residuals={}", join(&trace.relative_residuals()))?;
            out.write_all(b"x,psi,dpsi,region\n")?;
            for s in &trace.samples {
                let cells = [sci(s.x), sci(s.psi), sci(s.dpsi), s.region.name().to_string()];
                out.write_all(row(&cells).as_bytes())?;
            }
        }
        OutputFormat::Json => {
            let value = json!({
                "config": cfg,
                "circuit": circuit,
                "theta_deg": theta_deg,
                "coefficients": coeffs,
                "boundary_residuals": trace.boundary_residuals,
                "relative_boundary_residuals": trace.relative_residuals(),
                "samples": trace.samples,
            });
            write_json(out, &value)?;
        }
    }
    Ok(())
}
