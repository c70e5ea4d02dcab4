//! nodalcert: certified bounds on the number of nodal domains of
//! -Delta u = f(u) on rectangles, from a spectral approximation and
//! certified (or clearly-tagged heuristic) error bounds.
//!
//! Exit codes: 0 = certified, 2 = sound but not certified, 1 = error.

mod config;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use config::Config;
use nodalcert_core::basis::{read_coefficient_file, write_coefficient_file, CoefficientField};
use nodalcert_core::grid::{classify, region_components, Adjacency, CellLabel, Region};
use nodalcert_core::render::{pgm_bytes, svg_string, SvgStyle};
use nodalcert_core::solver::{
    defect_estimate, heuristic_error, newton_galerkin, FKind, SolveConfig,
};
use nodalcert_core::verifier::{
    self, set_certificate_source, ConstantsPolicy, NodalReport, Verdict,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "nodalcert",
    about = "Certified nodal-domain analysis for -Delta u = f(u) on rectangles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the non-rigorous Newton-Galerkin solver and write coefficients.
    Solve(CommonArgs),
    /// Classify the grid cells of a coefficient field.
    Classify(CommonArgs),
    /// Check the sign-structure theorems and emit a NodalReport.
    Verify(CommonArgs),
    /// Render a classification to PGM or SVG.
    Render(CommonArgs),
    /// solve -> error estimates -> classify -> verify -> render.
    Pipeline(CommonArgs),
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Path to the flat `section.key = value` config file.
    #[arg(long)]
    config: PathBuf,
    /// Override grid.m.
    #[arg(long)]
    m: Option<u32>,
    /// Override certificates.sigma.
    #[arg(long)]
    sigma: Option<f64>,
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    let (args, run): (&CommonArgs, fn(&Config) -> Result<i32>) = match &cli.command {
        Command::Solve(a) => (a, cmd_solve),
        Command::Classify(a) => (a, cmd_classify),
        Command::Verify(a) => (a, cmd_verify),
        Command::Render(a) => (a, cmd_render),
        Command::Pipeline(a) => (a, cmd_pipeline),
    };
    match load_config(args).and_then(|cfg| run(&cfg)) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

/// NODALCERT_THREADS caps the rayon worker pool.
fn init_thread_pool() {
    if let Ok(n) = std::env::var("NODALCERT_THREADS") {
        if let Ok(n) = n.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
}

fn load_config(args: &CommonArgs) -> Result<Config> {
    let mut cfg = Config::load(&args.config)?;
    if let Some(m) = args.m {
        cfg.override_value("grid.m", m.to_string());
    }
    if let Some(sigma) = args.sigma {
        cfg.override_value("certificates.sigma", format!("{sigma}"));
    }
    Ok(cfg)
}

fn cmd_solve(cfg: &Config) -> Result<i32> {
    let field = run_solve(cfg)?;
    let out = cfg.path("paths.coefficients")?;
    ensure_parent(&out)?;
    write_coefficient_file(&field, &out)?;
    println!("solved: mu = {}, coefficients -> {}", field.mu(), out.display());
    Ok(0)
}

fn run_solve(cfg: &Config) -> Result<CoefficientField> {
    let mut solve = SolveConfig::new(
        cfg.get_usize("solve.mu")?
            .ok_or_else(|| anyhow!("missing required field `solve.mu`"))?,
        cfg.f_kind()?,
        cfg.initial_guess()?,
    );
    if let Some(tol) = cfg.get_f64("solve.newton_tol")? {
        solve.newton_tol = tol;
    }
    if let Some(iters) = cfg.get_usize("solve.max_iters")? {
        solve.max_iters = iters;
    }
    if let Some(q) = cfg.get_usize("solve.quadrature")? {
        solve.quadrature_order = q;
    }
    Ok(newton_galerkin(&solve)?)
}

fn cmd_classify(cfg: &Config) -> Result<i32> {
    let field = read_coefficient_file(&cfg.path("paths.coefficients")?)?;
    let sigma = cfg.require_f64("certificates.sigma")?;
    let m = cfg.require_u32("grid.m")?;
    let cls = classify(&field, sigma, m)?;
    let zero_cells = cls.cell_indices_with(CellLabel::Undetermined);
    let zero = region_components(&cls, Region::ZeroRegion, Adjacency::EdgeAndCorner)?;
    let summary = format!(
        "{{\n  \"m\": {m},\n  \"sigma\": {sigma},\n  \"plus_cells\": {},\n  \
         \"minus_cells\": {},\n  \"undetermined_cells\": {},\n  \
         \"omega0_volume_upper\": {},\n  \"omega0_components\": {}\n}}\n",
        cls.count(CellLabel::Plus),
        cls.count(CellLabel::Minus),
        zero_cells.len(),
        nodalcert_core::grid::region_volume_upper(&cls, &zero_cells),
        zero.count()
    );
    if let Some(path) = cfg.path_opt("paths.report") {
        ensure_parent(&path)?;
        std::fs::write(&path, &summary)?;
    }
    print!("{summary}");
    maybe_render(cfg, &cls)?;
    Ok(0)
}

fn cmd_render(cfg: &Config) -> Result<i32> {
    let field = read_coefficient_file(&cfg.path("paths.coefficients")?)?;
    let sigma = cfg.require_f64("certificates.sigma")?;
    let m = cfg.require_u32("grid.m")?;
    let cls = classify(&field, sigma, m)?;
    let path = cfg.path("paths.image")?;
    render_to(cfg, &cls, &path)?;
    println!("rendered -> {}", path.display());
    Ok(0)
}

fn maybe_render(cfg: &Config, cls: &nodalcert_core::grid::CellClassification) -> Result<()> {
    if let Some(path) = cfg.path_opt("paths.image") {
        render_to(cfg, cls, &path)?;
        println!("rendered -> {}", path.display());
    }
    Ok(())
}

fn render_to(
    cfg: &Config,
    cls: &nodalcert_core::grid::CellClassification,
    path: &Path,
) -> Result<()> {
    ensure_parent(path)?;
    match cfg.get("render.format").unwrap_or("pgm") {
        "pgm" => {
            let scale = cfg.get_u32("render.resolution")?.unwrap_or(1);
            std::fs::write(path, pgm_bytes(cls, scale))?;
        }
        "svg" => {
            let style = SvgStyle {
                cell_size: cfg.get_f64("render.resolution")?.unwrap_or(8.0),
                shade_signs: cfg.get("render.shade_signs") == Some("true"),
            };
            std::fs::write(path, svg_string(cls, &style))?;
        }
        other => bail!("unknown render.format {other:?} (pgm | svg)"),
    }
    Ok(())
}

fn cmd_verify(cfg: &Config) -> Result<i32> {
    let field = read_coefficient_file(&cfg.path("paths.coefficients")?)?;
    let report = run_verify(cfg, &field)?;
    finish_report(cfg, &field, report)
}

fn run_verify(cfg: &Config, field: &CoefficientField) -> Result<NodalReport> {
    let m = cfg.require_u32("grid.m")?;
    let sigma = cfg.require_f64("certificates.sigma")?;
    let policy = cfg.constants_policy()?;
    let bc = cfg.boundary_spec()?;
    let route = cfg.get("verify.route").unwrap_or("auto");

    let mut report = if route == "linf-only" {
        verifier::verify_linf_only(field, sigma, &cfg.nonlinearity_bound()?, m, policy)?
    } else if !bc.gamma_n_is_empty() {
        let rho = cfg.require_f64("certificates.rho")?;
        verifier::verify_mixed(
            field,
            rho,
            sigma,
            &cfg.nonlinearity_bound()?,
            &bc,
            m,
            &cfg.user_lambda1()?,
            policy,
        )?
    } else {
        let rho = cfg.require_f64("certificates.rho")?;
        match cfg.f_kind()? {
            FKind::AllenCahn { epsilon } => {
                verifier::verify_allen_cahn(field, rho, sigma, epsilon, m)?
            }
            FKind::Emden { lambda, p } => {
                verifier::verify_emden(field, rho, sigma, lambda, p, m, policy)?
            }
            _ => verifier::verify_dirichlet(field, rho, sigma, &cfg.nonlinearity_bound()?, m, policy)?,
        }
    };
    set_certificate_source(&mut report, cfg.certificate_source()?);
    Ok(report)
}

fn finish_report(cfg: &Config, field: &CoefficientField, report: NodalReport) -> Result<i32> {
    if let Some(path) = cfg.path_opt("paths.report") {
        ensure_parent(&path)?;
        std::fs::write(&path, report.to_json())
            .with_context(|| format!("writing report to {}", path.display()))?;
    }
    println!("{}", report.summary_line());
    if let Some(path) = cfg.path_opt("paths.image") {
        let cls = classify(field, report.inputs.sigma, report.inputs.m)?;
        render_to(cfg, &cls, &path)?;
        println!("rendered -> {}", path.display());
    }
    Ok(match report.verdict {
        Verdict::Certified => 0,
        Verdict::NotCertified => 2,
    })
}

fn cmd_pipeline(cfg: &Config) -> Result<i32> {
    let field = run_solve(cfg)?;
    if let Some(out) = cfg.path_opt("paths.coefficients") {
        ensure_parent(&out)?;
        write_coefficient_file(&field, &out)?;
        println!("coefficients -> {}", out.display());
    }

    // Heuristic or externally supplied error bounds.
    let source = cfg.certificate_source()?;
    let (rho, sigma) = if source == "certified-external" {
        (
            cfg.require_f64("certificates.rho")?,
            cfg.require_f64("certificates.sigma")?,
        )
    } else {
        let f_kind = cfg.f_kind()?;
        let tau = cfg.get_f64("constants.tau")?.unwrap_or(0.0);
        let k = cfg.require_f64("constants.k")?;
        let c_embed = cfg.get_f64("constants.c_embed_linf")?.unwrap_or(1.0);
        let order = cfg.get_usize("solve.quadrature")?.unwrap_or(2 * field.mu() + 8);
        let delta = defect_estimate(&field, &f_kind, tau, order);
        let h = heuristic_error(delta, k, &f_kind, &field, tau, c_embed)?;
        println!(
            "heuristic error bounds (NOT certified): delta = {delta:.3e}, rho = {:.3e}, \
             sigma = {:.3e}",
            h.rho, h.sigma
        );
        (h.rho, h.sigma)
    };

    let mut cfg = cfg.clone();
    cfg.override_value("certificates.rho", format!("{rho}"));
    cfg.override_value("certificates.sigma", format!("{sigma}"));
    let report = run_verify(&cfg, &field)?;
    finish_report(&cfg, &field, report)
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .with_context(|| format!("creating directory {}", parent.display()))?;
        }
    }
    Ok(())
}

// ConstantsPolicy is consumed via config::constants_policy; silence the
// otherwise-unused import when features shift.
#[allow(unused)]
fn _policy_is_used(p: ConstantsPolicy) -> ConstantsPolicy {
    p
}
