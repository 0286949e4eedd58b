//! The five batch commands. Every emitted file starts with the schema and
//! normalization header; numbers in CSV carry 17 significant digits so
//! identical configs and seeds reproduce byte-identical artifacts.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use pextremal::calculus::mass::{self, MassReport};
use pextremal::calculus::scan;
use pextremal::potential::{self, PotentialSpec, DEFAULT_APPROX_LEVEL};
use pextremal::{product, suites, ConvexBody, GridSpec, ScalarField, NORMALIZATION_NOTE, SCHEMA};

use crate::config::{Command, OutputFormat, RunConfig};
use crate::CliError;

pub struct Effective {
    pub out: PathBuf,
    pub format: OutputFormat,
    pub seed: u64,
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn file_header(command: &str, seed: u64) -> String {
    format!("# schema {SCHEMA}\n# command {command}\n# seed {seed}\n# normalization {NORMALIZATION_NOTE}\n")
}

fn write_out(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

fn with_suffix(path: &Path, suffix: &str, ext: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    dir.join(format!("{stem}{suffix}.{ext}"))
}

pub fn run(config: &RunConfig, eff: &Effective) -> Result<i32, CliError> {
    match config.command {
        Command::EvalGrid => eval_grid(config, eff),
        Command::Check => check(config, eff),
        Command::MaGrid => ma_grid(config, eff),
        Command::ExploreSupport => explore_support(config, eff),
        Command::ApproxBody => approx_body(config, eff),
    }
}

fn eval_grid(config: &RunConfig, eff: &Effective) -> Result<i32, CliError> {
    let body = config.body().map_err(CliError::Config)?;
    let sets = config.sets().map_err(CliError::Config)?;
    let grid = config.grid().map_err(CliError::Config)?;
    if sets.dim() != body.dim() || grid.dim() != body.dim() {
        return Err(CliError::Config(format!(
            "dimension mismatch: body {}, sets {}, grid {}",
            body.dim(),
            sets.dim(),
            grid.dim()
        )));
    }
    let level = config.approx_level.unwrap_or(DEFAULT_APPROX_LEVEL);
    let resolved = PotentialSpec::smooth_at_level(body.clone(), level)
        .resolve()
        .map_err(CliError::num)?;

    let n = grid.total_points();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    for k in 0..n {
        let z = grid.point(k);
        let mut row: Vec<f64> = z.iter().flat_map(|w| [w.re, w.im]).collect();
        row.push(product::p_extremal(&body, &sets, &z).map_err(CliError::num)?);
        row.push(potential::indicator_h(&body, &z).map_err(CliError::num)?);
        row.push(resolved.eval(&z));
        rows.push(row);
    }
    let mut columns: Vec<String> = Vec::new();
    for j in 0..body.dim() {
        columns.push(format!("re_z{}", j + 1));
        columns.push(format!("im_z{}", j + 1));
    }
    columns.extend(
        ["p_extremal", "indicator_h", "potential_u"]
            .iter()
            .map(|s| s.to_string()),
    );

    match eff.format {
        OutputFormat::Csv => {
            let mut out = file_header("eval-grid", eff.seed);
            out.push_str(&columns.join(","));
            out.push('\n');
            for row in &rows {
                let line: Vec<String> = row.iter().map(|&v| num(v)).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
            write_out(&eff.out, &out)?;
        }
        OutputFormat::Json => {
            let doc = serde_json::json!({
                "schema": SCHEMA,
                "command": "eval-grid",
                "seed": eff.seed,
                "normalization": NORMALIZATION_NOTE,
                "columns": columns,
                "rows": rows,
            });
            write_out(&eff.out, &serde_json::to_string_pretty(&doc).unwrap())?;
        }
    }
    Ok(0)
}

fn check(config: &RunConfig, eff: &Effective) -> Result<i32, CliError> {
    let suite = config
        .suite
        .clone()
        .ok_or_else(|| CliError::Config("check needs a suite (--suite or config)".into()))?;
    let report = suites::run_suite(&suite, eff.seed, &config.tolerances).map_err(|e| match e {
        pextremal::Error::InvalidParameter(msg) => CliError::Config(msg),
        other => CliError::num(other),
    })?;
    match eff.format {
        OutputFormat::Json => write_out(&eff.out, &report.to_json())?,
        OutputFormat::Csv => {
            let mut out = file_header(&format!("check {suite}"), eff.seed);
            out.push_str("name,passed,measured,bound\n");
            for c in &report.checks {
                let _ = writeln!(out, "{},{},{},{}", c.name, c.passed, num(c.measured), num(c.bound));
            }
            write_out(&eff.out, &out)?;
        }
    }
    Ok(if report.passed { 0 } else { 1 })
}

fn mass_report_files(
    report: &MassReport,
    command: &str,
    eff: &Effective,
    path: &Path,
) -> Result<(), CliError> {
    match eff.format {
        OutputFormat::Json => {
            let doc = serde_json::json!({
                "schema": SCHEMA,
                "command": command,
                "seed": eff.seed,
                "report": report,
            });
            write_out(path, &serde_json::to_string_pretty(&doc).unwrap())?;
        }
        OutputFormat::Csv => {
            // heatmap rows over the first complex axis (full cells for
            // dimension 1, marginal cells for dimension 2)
            let axis = &report.grid.axes[0];
            let mut out = file_header(command, eff.seed);
            let _ = writeln!(out, "# total {}", num(report.total));
            let _ = writeln!(out, "# smoothing {}", num(report.smoothing));
            if let (Some(m), Some(r)) = (report.near_set_mass, report.near_set_radius) {
                let _ = writeln!(out, "# near_set_mass {} within {}", num(m), num(r));
            }
            out.push_str("x,y,mass\n");
            for i in 0..axis.nx {
                let x = axis.x.0 + i as f64 * axis.step_x();
                for j in 0..axis.ny {
                    let y = axis.y.0 + j as f64 * axis.step_y();
                    let _ = writeln!(out, "{},{},{}", num(x), num(y), num(report.cells[i * axis.ny + j]));
                }
            }
            write_out(path, &out)?;
        }
    }
    Ok(())
}

fn ma_grid(config: &RunConfig, eff: &Effective) -> Result<i32, CliError> {
    let sets = config.sets().map_err(CliError::Config)?;
    let grid = config.grid().map_err(CliError::Config)?;
    let body = match &config.body {
        Some(descr) => descr.build().map_err(|e| CliError::Config(e.to_string()))?,
        None => ConvexBody::simplex(sets.dim()),
    };
    if grid.dim() != sets.dim() || body.dim() != sets.dim() {
        return Err(CliError::Config("body, sets, and grid dimensions must agree".into()));
    }
    let step = grid.step().map_err(|e| CliError::Config(e.to_string()))?;
    let smoothing = config.smoothing.unwrap_or(4.0 * step);
    let field = ScalarField::p_extremal(body, sets).without_smooth_region();
    let report = mass::ma_mass(&field, &grid, smoothing).map_err(CliError::num)?;
    mass_report_files(&report, "ma-grid", eff, &eff.out)?;
    Ok(0)
}

fn explore_support(config: &RunConfig, eff: &Effective) -> Result<i32, CliError> {
    let sets = config.sets().map_err(CliError::Config)?;
    let grid = config.grid().map_err(CliError::Config)?;
    let q = match (config.q, &config.body) {
        (Some(q), _) => q,
        (None, Some(descr)) => descr
            .build()
            .map_err(|e| CliError::Config(e.to_string()))?
            .lq_exponent()
            .ok_or_else(|| CliError::Config("explore-support needs an l^q body or \"q\"".into()))?,
        (None, None) => {
            return Err(CliError::Config("explore-support needs an l^q body or \"q\"".into()))
        }
    };
    let levels = config.refine.unwrap_or(2).max(2);
    let step = grid.step().map_err(|e| CliError::Config(e.to_string()))?;
    let smoothing = config.smoothing.unwrap_or(4.0 * step);

    let mut reports: Vec<MassReport> = Vec::new();
    for level in 0..levels {
        let scale = 1u32 << level;
        let axes = grid
            .axes
            .iter()
            .map(|a| pextremal::AxisSpec {
                x: a.x,
                y: a.y,
                nx: (a.nx - 1) * scale as usize + 1,
                ny: (a.ny - 1) * scale as usize + 1,
            })
            .collect();
        let refined = GridSpec::new(axes).map_err(CliError::num)?;
        let sigma = smoothing / scale as f64;
        let report = scan::support_explore(q, &sets, &refined, sigma).map_err(CliError::num)?;
        let path = with_suffix(&eff.out, &format!("_level{level}"), "csv");
        let csv_eff = Effective {
            out: path.clone(),
            format: OutputFormat::Csv,
            seed: eff.seed,
        };
        mass_report_files(&report, "explore-support", &csv_eff, &path)?;
        reports.push(report);
    }
    let mut max_gap = 0.0f64;
    for pair in reports.windows(2) {
        max_gap = max_gap.max((pair[1].total - pair[0].total).abs() / pair[0].total.abs());
    }
    let cauchy_ok = max_gap <= 0.05;
    let doc = serde_json::json!({
        "schema": SCHEMA,
        "command": "explore-support",
        "seed": eff.seed,
        "normalization": NORMALIZATION_NOTE,
        "q": q,
        "note": "exploratory evidence only; no claim is made about the true support",
        "levels": reports.iter().map(|r| serde_json::json!({
            "smoothing": r.smoothing,
            "total": r.total,
            "near_set_mass": r.near_set_mass,
            "near_set_radius": r.near_set_radius,
        })).collect::<Vec<_>>(),
        "max_refinement_gap": max_gap,
        "cauchy_ok": cauchy_ok,
    });
    write_out(&with_suffix(&eff.out, "_summary", "json"), &serde_json::to_string_pretty(&doc).unwrap())?;
    Ok(if cauchy_ok { 0 } else { 1 })
}

fn approx_body(config: &RunConfig, eff: &Effective) -> Result<i32, CliError> {
    let body = config.body().map_err(CliError::Config)?;
    if body.dim() != 2 {
        return Err(CliError::Config(
            "approx-body gap curves are computed for dimension 2".into(),
        ));
    }
    let base = config.approx_level.unwrap_or(16);
    let levels = config.refine.unwrap_or(3).max(1);

    let sup_gap = |pn: &ConvexBody| -> f64 {
        let mut g = 0.0f64;
        for i in 0..4000 {
            let th = std::f64::consts::TAU * (i as f64 + 0.5) / 4000.0;
            let x = [th.cos(), th.sin()];
            g = g.max(pn.support_value(&x).unwrap() - body.support_value(&x).unwrap());
        }
        g
    };

    let mut rows = Vec::new();
    for level in 0..levels {
        let n = base * (1 << level);
        let pn = body.outer_polytope_approximation(n).map_err(CliError::num)?;
        let gap = sup_gap(&pn);
        let vertices: Vec<Vec<f64>> = pn
            .vertices()
            .map(|v| v.to_vec())
            .unwrap_or_default();
        rows.push((n, gap, vertices));
    }

    let doc = serde_json::json!({
        "schema": SCHEMA,
        "command": "approx-body",
        "seed": eff.seed,
        "levels": rows.iter().map(|(n, gap, vertices)| serde_json::json!({
            "n": n,
            "sup_gap": gap,
            "vertices": vertices,
        })).collect::<Vec<_>>(),
    });
    write_out(&eff.out, &serde_json::to_string_pretty(&doc).unwrap())?;

    let mut csv = file_header("approx-body", eff.seed);
    csv.push_str("n,sup_gap\n");
    for (n, gap, _) in &rows {
        let _ = writeln!(csv, "{n},{}", num(*gap));
    }
    write_out(&with_suffix(&eff.out, "_gaps", "csv"), &csv)?;
    Ok(0)
}
