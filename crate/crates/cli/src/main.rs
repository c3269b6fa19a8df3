use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};

use opbit::analysis::{analytic_ber, snr_gain_db, unload_probability};
use opbit::fec::DEFAULT_MAX_ITERS;
use opbit::harness::{
    measure_snr_gap, run_ber, run_roundtrip, run_unload_experiment, snr_at_ber, snr_grid, write_csv,
    CodeChoice, ExperimentConfig, SnapshotMode,
};
use opbit::{Scheme, SchemeParams, SnrConvention};

mod settings;

use settings::{parse_list, FileConfig};

#[derive(Parser, Debug)]
#[command(name = "opbit", version, about = "Opportunistic-bit link simulator")]
struct Cli {
    /// Flat key = value file; keys mirror the long flag names.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Monte Carlo BER sweep of the proposed and conventional schemes.
    Ber(BerArgs),
    /// Column-empty frequency of the falling model vs the closed form.
    Unload(UnloadArgs),
    /// Closed-form BER and unload curves.
    Analytic(AnalyticArgs),
    /// Noiseless end-to-end fidelity check.
    Roundtrip(RoundtripArgs),
}

#[derive(Args, Debug)]
struct SchemeArgs {
    #[arg(long)]
    n_total: Option<usize>,
    #[arg(long)]
    k_ob: Option<usize>,
    #[arg(long)]
    m_storage: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SnrArgs {
    #[arg(long, allow_negative_numbers = true)]
    snr_start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    snr_stop: Option<f64>,
    #[arg(long)]
    snr_step: Option<f64>,
    /// ebn0 (energy per information bit) or esn0 (energy per symbol).
    #[arg(long)]
    convention: Option<SnrConvention>,
}

#[derive(Args, Debug)]
struct CodeArgs {
    /// rate1 or ldpc.
    #[arg(long)]
    code: Option<String>,
    /// Parity-check matrix; the shipped 1296-bit rate-1/2 code when absent.
    #[arg(long)]
    alist: Option<PathBuf>,
    #[arg(long)]
    max_iters: Option<usize>,
}

#[derive(Args, Debug)]
struct BerArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    #[command(flatten)]
    snr: SnrArgs,
    #[command(flatten)]
    code: CodeArgs,
    /// Stop a point after this many bit errors.
    #[arg(long)]
    min_errors: Option<u64>,
    /// Upper bound on BUs per SNR point.
    #[arg(long)]
    n_bus: Option<u64>,
    /// Use the same source and noise streams for both schemes.
    #[arg(long)]
    paired_noise: bool,
    /// Append SNR gaps at these comma-separated BER targets.
    #[arg(long)]
    summary: Option<String>,
}

#[derive(Args, Debug)]
struct UnloadArgs {
    #[arg(long)]
    phi_list: Option<String>,
    /// Grid spans m = 1 ..= factor * phi.
    #[arg(long)]
    m_max_factor: Option<usize>,
    /// Grid points per phi.
    #[arg(long)]
    m_points: Option<usize>,
    #[arg(long)]
    trials: Option<u64>,
    /// steady or accumulation.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AnalyticArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    #[command(flatten)]
    snr: SnrArgs,
    #[arg(long)]
    phi_list: Option<String>,
    #[arg(long)]
    m_max_factor: Option<usize>,
}

#[derive(Args, Debug)]
struct RoundtripArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long)]
    n_bus: Option<u64>,
}

fn open_out(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn scheme_params(file: &FileConfig, a: &SchemeArgs) -> Result<SchemeParams> {
    Ok(SchemeParams::new(
        file.pick(a.n_total, "n-total", 36)?,
        file.pick(a.k_ob, "k-ob", 4)?,
        file.pick(a.m_storage, "m-storage", 256)?,
    )?)
}

fn grid(file: &FileConfig, a: &SnrArgs, stop_default: f64) -> Result<Vec<opbit::SnrSpec>> {
    Ok(snr_grid(
        file.pick(a.snr_start, "snr-start", 0.0)?,
        file.pick(a.snr_stop, "snr-stop", stop_default)?,
        file.pick(a.snr_step, "snr-step", 1.0)?,
        file.pick(a.convention, "convention", SnrConvention::EbN0Info)?,
    )?)
}

fn code_choice(file: &FileConfig, a: &CodeArgs) -> Result<CodeChoice> {
    let kind: String = file.pick(a.code.clone(), "code", "rate1".to_string())?;
    match kind.as_str() {
        "rate1" => Ok(CodeChoice::Rate1),
        "ldpc" => Ok(CodeChoice::Ldpc {
            alist: file.pick_opt(a.alist.clone(), "alist")?,
            max_iters: file.pick(a.max_iters, "max-iters", DEFAULT_MAX_ITERS)?,
        }),
        other => bail!("unknown code '{other}' (expected rate1 or ldpc)"),
    }
}

fn cmd_ber(file: &FileConfig, a: &BerArgs) -> Result<()> {
    let params = scheme_params(file, &a.scheme)?;
    let config = ExperimentConfig {
        scheme: Scheme::Proposed,
        params,
        snr_grid: grid(file, &a.snr, 9.0)?,
        code: code_choice(file, &a.code)?,
        n_bus: file.pick(a.n_bus, "n-bus", 1_000_000)?,
        master_seed: file.pick(a.scheme.seed, "seed", 1)?,
        min_errors: file.pick(a.min_errors, "min-errors", 100)?,
        paired_noise: a.paired_noise || file.pick(None, "paired-noise", false)?,
    };
    let proposed = run_ber(&config)?;
    let conventional = run_ber(&config.with_scheme(Scheme::Conventional))?;
    let mut out = open_out(a.scheme.out.as_ref())?;
    write_csv(&[&proposed, &conventional], &mut out)?;

    let summary: Option<String> = file.pick_opt(a.summary.clone(), "summary")?;
    if let Some(targets) = summary {
        writeln!(
            out,
            "# code={} noise={} llr_clamp={} seed={} convention={}",
            proposed.code_label,
            proposed.noise_generator,
            proposed.llr_clamp.map_or("none".to_string(), |c| c.to_string()),
            config.master_seed,
            config.snr_grid[0].convention,
        )?;
        writeln!(
            out,
            "# energy_gain_db={:.4}",
            snr_gain_db(params.n_total(), params.k_ob())?
        )?;
        for target in parse_list::<f64>(&targets)? {
            match measure_snr_gap(&conventional, &proposed, target) {
                Ok(g) => writeln!(out, "# gap target_ber={target:e} gap_db={g:.4}")?,
                Err(e) => writeln!(out, "# gap target_ber={target:e} unavailable: {e}")?,
            }
            if matches!(config.code, CodeChoice::Rate1) {
                let snr: Vec<f64> = config.snr_grid.iter().map(|s| s.value_db).collect();
                let curve = |scheme| -> Result<Vec<f64>> {
                    config
                        .snr_grid
                        .iter()
                        .map(|&s| Ok(analytic_ber(scheme, s, &params, 1.0)?))
                        .collect()
                };
                let (p, c) = (curve(Scheme::Proposed)?, curve(Scheme::Conventional)?);
                if let (Some(sp), Some(sc)) = (snr_at_ber(&snr, &p, target), snr_at_ber(&snr, &c, target)) {
                    writeln!(out, "# analytic_gap target_ber={target:e} gap_db={:.4}", sc - sp)?;
                }
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn unload_grid(phi: usize, factor: usize, points: usize) -> Vec<usize> {
    let max = factor * phi;
    let step = (max / points.max(1)).max(1);
    let mut grid: Vec<usize> = (1..=max).step_by(step).collect();
    if grid.last() != Some(&max) {
        grid.push(max);
    }
    grid
}

fn cmd_unload(file: &FileConfig, a: &UnloadArgs) -> Result<()> {
    let phis: Vec<usize> = parse_list(&file.pick(a.phi_list.clone(), "phi-list", "8,16,32".to_string())?)?;
    let factor = file.pick(a.m_max_factor, "m-max-factor", 12)?;
    let points = file.pick(a.m_points, "m-points", 48)?;
    let trials = file.pick(a.trials, "trials", 20_000)?;
    let seed = file.pick(a.seed, "seed", 1)?;
    let mode = match file.pick(a.mode.clone(), "mode", "steady".to_string())?.as_str() {
        "steady" => SnapshotMode::SteadyState,
        "accumulation" => SnapshotMode::Accumulation,
        other => bail!("unknown mode '{other}' (expected steady or accumulation)"),
    };
    let mut out = open_out(a.out.as_ref())?;
    writeln!(out, "phi,m,snapshots,empty,empirical,ci_lo,ci_hi,analytic,expected_events")?;
    for &phi in &phis {
        let curves = run_unload_experiment(&[phi], &unload_grid(phi, factor, points), trials, seed, mode)?;
        for p in &curves[0].points {
            let (lo, hi) = p.ci95();
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                p.phi,
                p.m,
                p.snapshots,
                p.empty,
                p.empirical(),
                lo,
                hi,
                p.analytic,
                p.expected_events()
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_analytic(file: &FileConfig, a: &AnalyticArgs) -> Result<()> {
    let params = scheme_params(file, &a.scheme)?;
    let mut out = open_out(a.scheme.out.as_ref())?;
    writeln!(out, "curve,x,scheme_or_phi,y")?;
    for snr in grid(file, &a.snr, 12.0)? {
        for scheme in [Scheme::Proposed, Scheme::Conventional] {
            writeln!(out, "ber,{},{},{}", snr.value_db, scheme, analytic_ber(scheme, snr, &params, 1.0)?)?;
        }
    }
    let phis: Vec<usize> = parse_list(&file.pick(a.phi_list.clone(), "phi-list", "8,16,32".to_string())?)?;
    let factor = file.pick(a.m_max_factor, "m-max-factor", 12)?;
    for phi in phis {
        for m in 0..=factor * phi {
            writeln!(out, "unload,{m},{phi},{}", unload_probability(phi, m))?;
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_roundtrip(file: &FileConfig, a: &RoundtripArgs) -> Result<()> {
    let params = scheme_params(file, &a.scheme)?;
    let n_bus = file.pick(a.n_bus, "n-bus", 10_000)?;
    let seed = file.pick(a.scheme.seed, "seed", 1)?;
    let codec = code_choice(file, &a.code)?.build()?;
    let report = run_roundtrip(params, n_bus, seed, &codec)?;
    let mut out = open_out(a.scheme.out.as_ref())?;
    let r = &report.reconciliation;
    writeln!(
        out,
        "sent={} recovered={} padding={} phantoms={} missing={} unexplained={} class_order={} symbols={}",
        report.sent,
        report.recovered,
        report.padding,
        r.phantoms,
        r.missing,
        r.unexplained,
        r.class_order_preserved,
        report.symbols
    )?;
    writeln!(out, "{}", if report.passed() { "PASS" } else { "FAIL" })?;
    out.flush()?;
    if !report.passed() {
        bail!("round trip mismatch");
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    match &cli.command {
        Command::Ber(a) => cmd_ber(&file, a),
        Command::Unload(a) => cmd_unload(&file, a),
        Command::Analytic(a) => cmd_analytic(&file, a),
        Command::Roundtrip(a) => cmd_roundtrip(&file, a),
    }
}
