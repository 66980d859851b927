//! `qf`: build gap-constrained combs and the multiscale measure, verify
//! its certificates, and export atoms in exact form.

mod config;
mod output;

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use crystalline::build::{assemble, check_hypotheses, Check, CrystallineMeasure};
use crystalline::io::{self, AtomFormat};
use crystalline::meyer::{build_meyer, verify_meyer, Method, WindowSpec};
use crystalline::rational::{self, Interval};
use crystalline::schwartz::{eta_eval, psi_eval};
use crystalline::verify::{blowup_profile, headline_report, psi_for, Verdict};
use num::ToPrimitive;

use config::{LevelSpec, RunConfig};
use output::OutDir;

/// Refuse exports that would enumerate more lattice sites than this.
const EXPORT_SITE_LIMIT: u64 = 50_000_000;

#[derive(Parser)]
#[command(name = "qf", version, about = "Crystalline measure builder and verifier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one gap-constrained coefficient vector and certify it.
    Meyer(MeyerArgs),
    /// Assemble the multiscale measure and its transform.
    Build(BuildArgs),
    /// Re-check a built measure and write the verdict and tables.
    Verify(VerifyArgs),
    /// Write the atoms of a built measure inside a window.
    Export(ExportArgs),
}

#[derive(Args)]
struct Shared {
    /// TOML run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(short, long)]
    verbose: bool,
}

#[derive(Args)]
struct MeyerArgs {
    #[arg(long = "M")]
    m: Option<u64>,
    /// Gap fraction as "p/q".
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    method: Option<Method>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    /// Coefficient file format.
    #[arg(long)]
    format: Option<AtomFormat>,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    base: Option<u64>,
    #[arg(long)]
    alpha: Option<String>,
    /// "1..2", "1,3" or "none".
    #[arg(long)]
    levels: Option<String>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    method: Option<Method>,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct VerifyArgs {
    /// Measure file written by `qf build`.
    #[arg(long)]
    measure: PathBuf,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Mu,
    MuHat,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    measure: PathBuf,
    /// Interval such as "[-1, 1]" or "(2897/64, 2898/64]".
    #[arg(long, allow_hyphen_values = true)]
    window: String,
    #[arg(long, value_enum, default_value = "mu")]
    side: Side,
    #[arg(long)]
    format: Option<AtomFormat>,
    /// Output directory; atoms go to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    let outcome = match cli.command {
        Command::Meyer(a) => cmd_meyer(a),
        Command::Build(a) => cmd_build(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Export(a) => cmd_export(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("QF_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .with_context(|| format!("QF_THREADS must be a positive integer, got {v:?}"))?;
    if n == 0 {
        bail!("QF_THREADS must be a positive integer, got 0");
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn base_config(shared: &Shared) -> Result<RunConfig> {
    let file = match &shared.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    Ok(file.overlay(RunConfig {
        out: shared.out.clone(),
        verbose: shared.verbose.then_some(true),
        ..Default::default()
    }))
}

fn log(rc: &RunConfig, msg: impl AsRef<str>) {
    if rc.verbose() {
        eprintln!("{}", msg.as_ref());
    }
}

fn report_checks(checks: &[Check]) -> bool {
    let mut ok = true;
    for c in checks.iter().filter(|c| !c.passed) {
        ok = false;
        match c.level {
            Some(n) => eprintln!("certificate failure ({}, level {n}): {}", c.name, c.detail),
            None => eprintln!("certificate failure ({}): {}", c.name, c.detail),
        }
    }
    ok
}

fn cmd_meyer(a: MeyerArgs) -> Result<bool> {
    let rc = base_config(&a.shared)?.overlay(RunConfig {
        m: a.m,
        alpha: a.alpha,
        method: a.method,
        seed: a.seed,
        tol: a.tol,
        format: a.format,
        ..Default::default()
    });
    let w = WindowSpec::new(rc.m(), rc.alpha()?)?;
    let start = Instant::now();
    let mc = build_meyer(&w, rc.method(), rc.seed(), rc.tol())?;
    log(&rc, format!("built M={} in {:.2?}", w.m(), start.elapsed()));

    let out = OutDir::create(&rc.out())?;
    let stem = format!("meyer_M{}", w.m());
    match rc.format() {
        AtomFormat::Csv => {
            let mut s = String::from("index,re,im\n");
            for (j, z) in mc.coeffs().iter().enumerate() {
                writeln!(s, "{j},{},{}", io::fmt_f64(z.re), io::fmt_f64(z.im))?;
            }
            out.write_str(&format!("{stem}.csv"), &s)?;
        }
        AtomFormat::Json => {
            out.write_with(&format!("{stem}.json"), |w| Ok(serde_json::to_writer(w, &mc)?))?;
        }
    }

    let cert = verify_meyer(&mc, &w, rc.tol());
    let record = match &cert {
        Ok(c) => serde_json::to_string_pretty(c)?,
        Err(_) => serde_json::to_string_pretty(&mc.certificate)?,
    };
    out.write_str(&format!("{stem}_certificate.json"), &(record + "\n"))?;
    match cert {
        Ok(c) => {
            println!(
                "M={} L={} forbidden={} nullity={} freq_residual={:.3e} max_forbidden_time={:.1e}: pass",
                w.m(),
                w.len(),
                w.forbidden_indices().len(),
                mc.nullity.map_or("-".to_string(), |n| n.to_string()),
                c.freq_residual,
                c.max_forbidden_time,
            );
            Ok(true)
        }
        Err(e) => {
            eprintln!("{e}");
            Ok(false)
        }
    }
}

fn cmd_build(a: BuildArgs) -> Result<bool> {
    let rc = base_config(&a.shared)?.overlay(RunConfig {
        base: a.base,
        alpha: a.alpha,
        levels: a.levels.map(LevelSpec::Text),
        q: a.q,
        tol: a.tol,
        seed: a.seed,
        method: a.method,
        ..Default::default()
    });
    let cfg = rc.build_config()?;
    let start = Instant::now();
    let fm = assemble(&cfg)?;
    log(
        &rc,
        format!(
            "assembled {} level(s) in {:.2?}",
            fm.levels.len(),
            start.elapsed()
        ),
    );

    let out = OutDir::create(&rc.out())?;
    out.write_str("config.toml", &toml::to_string(&rc.resolved_build()?)?)?;
    out.write_with("measure.json", |w| Ok(serde_json::to_writer(w, &fm)?))?;
    out.write_str(
        "certificates.json",
        &(serde_json::to_string_pretty(&fm.certificates)? + "\n"),
    )?;
    let hyp = check_hypotheses(&fm);
    out.write_str("hypotheses.json", &(serde_json::to_string_pretty(&hyp)? + "\n"))?;
    for h in hyp.iter().filter(|h| !h.passed) {
        eprintln!("hypothesis not met ({}): {}", h.name, h.detail);
    }

    for l in &fm.levels {
        println!(
            "level {}: M={} h={} lambda={} j''={}",
            l.params.n,
            l.params.m,
            rational::format(&l.placement.h),
            rational::format(&l.placement.lambda),
            l.placement.j_dd
        );
    }
    if !fm.dropped_levels.is_empty() {
        println!("thinned out: {:?}", fm.dropped_levels);
    }
    let ok = report_checks(&fm.certificates);
    println!(
        "{} certificate(s): {}",
        fm.certificates.len(),
        if ok { "pass" } else { "fail" }
    );
    Ok(ok)
}

fn load_measure(path: &Path) -> Result<CrystallineMeasure> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    serde_json::from_reader(BufReader::new(f)).with_context(|| format!("reading measure {}", path.display()))
}

fn cmd_verify(a: VerifyArgs) -> Result<bool> {
    let rc = base_config(&a.shared)?;
    let fm = load_measure(&a.measure)?;
    let start = Instant::now();
    let verdict = headline_report(&fm)?;
    log(&rc, format!("verified in {:.2?}", start.elapsed()));

    let stored_match = verdict.checks.len() >= fm.certificates.len()
        && verdict.checks[..fm.certificates.len()] == fm.certificates[..];
    if !stored_match {
        eprintln!("stored certificates differ from the recomputed ones");
    }

    let out = OutDir::create(&rc.out())?;
    write_tables(&out, &fm, &verdict)?;
    println!("{}", verdict.summary);
    let checks_ok = report_checks(&verdict.checks);
    Ok(checks_ok && stored_match && verdict.crystalline)
}

fn write_tables(out: &OutDir, fm: &CrystallineMeasure, v: &Verdict) -> Result<()> {
    out.write_str("verdict.json", &(serde_json::to_string_pretty(v)? + "\n"))?;
    if let Some(b) = &v.blowup {
        out.write_str("blowup.csv", &b.to_csv())?;
    }
    out.write_str("growth.csv", &v.growth.to_csv())?;

    let mut s = String::from("index,space_re,space_im,frequency_re,frequency_im,residual,allowed,tail\n");
    for (i, p) in v.poisson.iter().enumerate() {
        writeln!(
            s,
            "{i},{},{},{},{},{},{},{}",
            io::fmt_f64(p.space_side.re),
            io::fmt_f64(p.space_side.im),
            io::fmt_f64(p.frequency_side.re),
            io::fmt_f64(p.frequency_side.im),
            io::fmt_f64(p.residual),
            io::fmt_f64(p.allowed),
            io::fmt_f64(p.tail),
        )?;
    }
    out.write_str("poisson.csv", &s)?;

    let mut by_level: Vec<(u32, String)> = Vec::new();
    for (n, t, abs) in blowup_profile(fm)? {
        if by_level.last().is_none_or(|(m, _)| *m != n) {
            by_level.push((n, String::from("t,t_float,abs\n")));
        }
        let s = &mut by_level.last_mut().expect("just pushed").1;
        writeln!(
            s,
            "{},{},{}",
            rational::format(&t),
            io::fmt_f64(rational::to_f64(&t)),
            io::fmt_f64(abs)
        )?;
    }
    for (n, s) in by_level {
        out.write_str(&format!("profile_n{n}.csv"), &s)?;
    }

    let psi = psi_for(fm);
    let mut s = String::from("n,x,x_float,psi\n");
    for l in &psi.levels {
        let hw = l.half_width();
        for k in -40i64..=40 {
            let x = &l.lambda + &hw * rational::ratio(k, 32);
            let n = fm
                .levels
                .iter()
                .find(|b| b.placement.lambda == l.lambda)
                .map_or(0, |b| b.params.n);
            writeln!(
                s,
                "{n},{},{},{}",
                rational::format(&x),
                io::fmt_f64(rational::to_f64(&x)),
                io::fmt_f64(psi_eval(&psi, &x, 0))
            )?;
        }
    }
    out.write_str("psi.csv", &s)?;

    let mut s = String::from("x,eta,eta_d1\n");
    for k in -300i32..=300 {
        let x = f64::from(k) / 500.0;
        writeln!(
            s,
            "{},{},{}",
            io::fmt_f64(x),
            io::fmt_f64(eta_eval(x, 0)),
            io::fmt_f64(eta_eval(x, 1))
        )?;
    }
    out.write_str("eta.csv", &s)?;
    Ok(())
}

fn cmd_export(a: ExportArgs) -> Result<bool> {
    let fm = load_measure(&a.measure)?;
    let window = Interval::parse(&a.window)?;
    let (m, name) = match a.side {
        Side::Mu => (&fm.mu, "mu"),
        Side::MuHat => (&fm.mu_hat, "mu_hat"),
    };
    let sites: u64 = m
        .terms
        .iter()
        .map(|t| t.sites_in(&window).to_u64().unwrap_or(u64::MAX))
        .fold(0u64, u64::saturating_add);
    if sites > EXPORT_SITE_LIMIT {
        bail!("window {window} spans {sites} lattice sites; the limit is {EXPORT_SITE_LIMIT}");
    }
    let atoms = m.atoms_in(&window);
    let format = a.format.unwrap_or(AtomFormat::Csv);
    match &a.out {
        Some(dir) => {
            let out = OutDir::create(dir)?;
            let ext = match format {
                AtomFormat::Csv => "csv",
                AtomFormat::Json => "json",
            };
            let path = out.write_with(&format!("{name}_atoms.{ext}"), |w| {
                Ok(io::write_atoms(&atoms, format, w)?)
            })?;
            eprintln!("{} atom(s) in {window} -> {}", atoms.len(), path.display());
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            io::write_atoms(&atoms, format, &mut lock)?;
            lock.flush()?;
        }
    }
    Ok(true)
}
