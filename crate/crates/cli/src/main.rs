//! Experiment runner: every computation is a subcommand with an explicit
//! seed, CSV (default) or JSON output, and a run manifest for reproducing
//! the result. Exit codes: 0 all checks pass, 1 an assertion failed,
//! 2 usage error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use chrono::{SecondsFormat, Utc};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use perfora::density::{
    flat_survival, run_event, threshold_exponent, DensityConfig, EventKind, FlatTrace,
};
use perfora::error::Error;
use perfora::geometry::parse_complex_spec;
use perfora::gf::GfParams;
use perfora::local_rings::{
    brute_force_counts, commuting_pair_bound_check, count_cube_roots, frobenius_unipotent_order,
    group_order, CommutingMode, GroupKind, LocalRing,
};
use perfora::perforation::{
    lambda0_after_removal, sweep_lambda0, verify_one_missing, SweepMode,
};
use perfora::poly::parse_poly;
use perfora::spectral::lambda0_bipartite;

#[derive(Parser)]
#[command(name = "perfora", version, about = "spectral gaps of perforated A2 links, matrix groups over local rings, and density-model experiments")]
struct Cli {
    /// emit JSON instead of CSV / table output
    #[arg(long, global = true)]
    json: bool,
    /// write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// write the run manifest to this file instead of stderr
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral gap of the PG(2,q) incidence graph, complete or perforated
    Spectral {
        /// building order (prime power)
        #[arg(long)]
        q: u64,
        /// either a removal count k (sweep over all k-subsets of flags) or a
        /// comma-separated list of flag ids ("5," removes just flag 5)
        #[arg(long)]
        remove: Option<String>,
        /// cap on exhaustive sweep size
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        /// switch the k-sweep to `budget` sampled removal sets (needs --seed)
        #[arg(long)]
        sampled: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Matrix groups over F_q[y]/(f^s): orders, cube roots, commuting pairs,
    /// Frobenius exponent
    Rings {
        /// base field order (prime power); the residue order when --f is absent
        #[arg(long)]
        q: u64,
        /// monic irreducible modulus over F_q, e.g. "y^2+y+1" (must be
        /// coprime to y and y+1)
        #[arg(long)]
        f: Option<String>,
        /// ring length s >= 1
        #[arg(long, default_value_t = 1)]
        s: usize,
        #[arg(long, value_enum)]
        check: RingCheck,
        /// sampled pair budget for --check commuting on large groups
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Monte Carlo runs of the chamber-density model events
    Density {
        /// complex spec: torus:n or thick:n,t
        #[arg(long)]
        complex: String,
        /// density parameter in (0,1)
        #[arg(long)]
        delta: f64,
        #[arg(long, value_enum)]
        event: EventName,
        #[arg(long, default_value_t = 500)]
        trials: u64,
        /// mandatory: stochastic runs must be reproducible
        #[arg(long)]
        seed: u64,
        /// separation radius
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// ball occupancy bound
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// free-edge target count
        #[arg(long, default_value_t = 3)]
        ell: usize,
        /// flat-trace size |F'| for --event survival
        #[arg(long)]
        fprime: Option<u64>,
    },
    /// Critical-density exponents for the congruence tower
    Thresholds {
        /// residue field order
        #[arg(long = "Q", visible_alias = "q", default_value_t = 2)]
        q: u64,
        /// ring length s >= 1
        #[arg(long)]
        s: usize,
        #[arg(long)]
        delta: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RingCheck {
    Orders,
    CubeRoots,
    Commuting,
    Frobenius,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EventName {
    RSeparated,
    AdjacentPairs,
    BallOccupancy,
    FreeEdges,
    Survival,
}

#[derive(Serialize)]
struct RunManifest {
    subcommand: String,
    params: serde_json::Value,
    seed: Option<u64>,
    version: String,
    started: String,
    finished: String,
    output_sha256: String,
    exit_code: u8,
}

struct RunOutput {
    text: String,
    /// false when an internal assertion failed (exit 1)
    pass: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true);
    let (name, params, seed) = describe(&cli.command);
    match run(&cli) {
        Ok(output) => {
            let exit = if output.pass { 0u8 } else { 1u8 };
            let manifest = RunManifest {
                subcommand: name,
                params,
                seed,
                version: env!("CARGO_PKG_VERSION").to_string(),
                started,
                finished: Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true),
                output_sha256: hex_digest(output.text.as_bytes()),
                exit_code: exit,
            };
            if let Err(e) = write_output(&cli, &output.text, &manifest) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(exit)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn write_output(cli: &Cli, text: &str, manifest: &RunManifest) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
        }
    }
    let mjson = serde_json::to_string(manifest).expect("manifest serializes");
    match &cli.manifest {
        Some(path) => std::fs::write(path, mjson + "\n")?,
        None => eprintln!("manifest: {mjson}"),
    }
    Ok(())
}

fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Usage problems exit 2, failed assertions exit 1.
fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::FormulaMismatch { .. }
        | Error::RootMissing { .. }
        | Error::BoundViolation { .. }
        | Error::FrobeniusCounterexample(_)
        | Error::Disconnected(_)
        | Error::DisconnectedLinks(_)
        | Error::IsolatedVertex(_)
        | Error::NoConvergence(_) => 1,
        _ => 2,
    }
}

fn describe(cmd: &Command) -> (String, serde_json::Value, Option<u64>) {
    match cmd {
        Command::Spectral { q, remove, budget, sampled, seed } => (
            "spectral".into(),
            serde_json::json!({ "q": q, "remove": remove, "budget": budget, "sampled": sampled, "seed": seed }),
            *seed,
        ),
        Command::Rings { q, f, s, check, budget, seed } => (
            "rings".into(),
            serde_json::json!({ "q": q, "f": f, "s": s, "check": format!("{check:?}"), "budget": budget, "seed": seed }),
            *seed,
        ),
        Command::Density { complex, delta, event, trials, seed, r, k, ell, fprime } => (
            "density".into(),
            serde_json::json!({
                "complex": complex, "delta": delta, "event": format!("{event:?}"),
                "trials": trials, "seed": seed, "r": r, "k": k, "ell": ell, "fprime": fprime
            }),
            Some(*seed),
        ),
        Command::Thresholds { q, s, delta } => (
            "thresholds".into(),
            serde_json::json!({ "Q": q, "s": s, "delta": delta }),
            None,
        ),
    }
}

fn run(cli: &Cli) -> perfora::Result<RunOutput> {
    match &cli.command {
        Command::Spectral { q, remove, budget, sampled, seed } => {
            run_spectral(cli.json, *q, remove.as_deref(), *budget, *sampled, *seed)
        }
        Command::Rings { q, f, s, check, budget, seed } => {
            run_rings(cli.json, *q, f.as_deref(), *s, *check, *budget, *seed)
        }
        Command::Density { complex, delta, event, trials, seed, r, k, ell, fprime } => run_density(
            cli.json, complex, *delta, *event, *trials, *seed, *r, *k, *ell, *fprime,
        ),
        Command::Thresholds { q, s, delta } => run_thresholds(cli.json, *q, *s, *delta),
    }
}

enum RemovalSpec {
    Count(usize),
    Edges(Vec<u32>),
}

fn parse_removal(spec: &str) -> perfora::Result<RemovalSpec> {
    if spec.contains(',') {
        let ids: Vec<u32> = spec
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse().map_err(|_| Error::Parse(format!("bad flag id '{s}'"))))
            .collect::<perfora::Result<_>>()?;
        if ids.is_empty() {
            return Err(Error::Parse("empty removal list".into()));
        }
        Ok(RemovalSpec::Edges(ids))
    } else {
        spec.parse()
            .map(RemovalSpec::Count)
            .map_err(|_| Error::Parse(format!("--remove takes a count or a comma-separated id list, got '{spec}'")))
    }
}

fn csv_ids(ids: &[u32]) -> String {
    ids.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(";")
}

fn run_spectral(
    json: bool,
    q: u64,
    remove: Option<&str>,
    budget: u64,
    sampled: bool,
    seed: Option<u64>,
) -> perfora::Result<RunOutput> {
    if q < 2 {
        return Err(Error::Parse(format!("q must be at least 2, got {q}")));
    }
    let mut text = String::new();
    let mut pass = true;
    match remove.map(parse_removal).transpose()? {
        None => {
            let plane = perfora::geometry::build_projective_plane(q)?;
            let graph = perfora::geometry::incidence_graph(&plane);
            if json {
                let report = perfora::spectral::graph_spectrum(&graph.to_graph())?;
                text = serde_json::to_string_pretty(&report).expect("serializes") + "\n";
            } else {
                let value = lambda0_bipartite(&graph)?;
                text.push_str("q,k,removal_ids,lambda0\n");
                text.push_str(&format!("{q},0,,{value:.12}\n"));
            }
        }
        Some(RemovalSpec::Count(k)) => {
            let mode = if sampled {
                let seed = seed.ok_or_else(|| Error::Parse("--sampled requires --seed".into()))?;
                SweepMode::Sampled { budget, seed }
            } else {
                SweepMode::Exhaustive
            };
            if k == 1 && !sampled {
                // flag transitivity check comes free with the full sweep
                let report = verify_one_missing(q)?;
                pass &= report.spread <= 1e-9;
                if json {
                    text = serde_json::to_string_pretty(&report).expect("serializes") + "\n";
                } else {
                    let rows = sweep_lambda0(q, 1, &SweepMode::Exhaustive, budget)?;
                    text.push_str("q,k,removal_ids,lambda0\n");
                    for (ids, value) in rows {
                        match value {
                            Some(v) => text.push_str(&format!("{q},1,{},{v:.12}\n", csv_ids(&ids))),
                            None => text.push_str(&format!("{q},1,{},disconnected\n", csv_ids(&ids))),
                        }
                    }
                }
            } else {
                let report = perfora::perforation::lambda0_k_min(q, k, mode.clone(), budget)?;
                if json {
                    text = serde_json::to_string_pretty(&report).expect("serializes") + "\n";
                } else {
                    let rows = sweep_lambda0(q, k, &mode, budget)?;
                    text.push_str("q,k,removal_ids,lambda0\n");
                    for (ids, value) in rows {
                        match value {
                            Some(v) => text.push_str(&format!("{q},{k},{},{v:.12}\n", csv_ids(&ids))),
                            None => text.push_str(&format!("{q},{k},{},disconnected\n", csv_ids(&ids))),
                        }
                    }
                }
            }
        }
        Some(RemovalSpec::Edges(ids)) => {
            let plane = perfora::geometry::build_projective_plane(q)?;
            let graph = perfora::geometry::incidence_graph(&plane);
            let flags = graph.edges();
            let removal: Vec<(u32, u32)> = ids
                .iter()
                .map(|&i| {
                    flags
                        .get(i as usize)
                        .copied()
                        .ok_or(Error::Parse(format!("flag id {i} out of range (graph has {} flags)", flags.len())))
                })
                .collect::<perfora::Result<_>>()?;
            let value = lambda0_after_removal(q, &removal)?;
            if json {
                text = serde_json::json!({
                    "q": q,
                    "removed_flag_ids": ids,
                    "lambda0": value,
                })
                .to_string()
                    + "\n";
            } else {
                text.push_str("q,k,removal_ids,lambda0\n");
                text.push_str(&format!("{q},{},{},{value:.12}\n", ids.len(), csv_ids(&ids)));
            }
        }
    }
    Ok(RunOutput { text, pass })
}

fn run_rings(
    json: bool,
    q: u64,
    f: Option<&str>,
    s: usize,
    check: RingCheck,
    budget: u64,
    seed: Option<u64>,
) -> perfora::Result<RunOutput> {
    // with --f the residue order comes from the user's modulus, validated
    // against the congruence constraints
    let (residue_order, length) = match f {
        Some(src) => {
            let base = GfParams::for_order(q)?;
            let poly = parse_poly(src, &base)?;
            let ring = LocalRing::congruence(base, poly, s)?;
            (ring.residue_order(), ring.length())
        }
        None => (q, s),
    };
    let mut text = String::new();
    let mut pass = true;
    match check {
        RingCheck::Orders => {
            let mut rows = Vec::new();
            let ring = LocalRing::canonical(residue_order, length)?;
            let brute = if ring.size() <= 6 { Some(brute_force_counts(&ring)?) } else { None };
            for kind in [GroupKind::Gl3, GroupKind::Sl3, GroupKind::Pgl3, GroupKind::Psl3] {
                let formula = group_order(kind, residue_order, length)?;
                let brute_value = match (kind, &brute) {
                    (GroupKind::Gl3, Some((gl, _))) => Some(*gl),
                    (GroupKind::Sl3, Some((_, sl))) => Some(*sl),
                    _ => None,
                };
                if let Some(b) = brute_value {
                    pass &= formula == b.into();
                }
                rows.push((kind, formula, brute_value));
            }
            if json {
                let objs: Vec<_> = rows
                    .iter()
                    .map(|(kind, formula, brute)| {
                        serde_json::json!({
                            "kind": kind.name(), "q": residue_order, "s": length,
                            "formula": formula.to_string(), "brute_force": brute,
                            "match": brute.map(|b| formula == &b.into()),
                        })
                    })
                    .collect();
                text = serde_json::to_string_pretty(&objs).expect("serializes") + "\n";
            } else {
                text.push_str("kind,q,s,formula,brute_force,match\n");
                for (kind, formula, brute) in rows {
                    let (bs, ms) = match brute {
                        Some(b) => (b.to_string(), (formula == b.into()).to_string()),
                        None => ("-".into(), "-".into()),
                    };
                    text.push_str(&format!("{},{residue_order},{length},{formula},{bs},{ms}\n", kind.name()));
                }
            }
        }
        RingCheck::CubeRoots => {
            let mu = count_cube_roots(residue_order, length)?;
            if json {
                text = serde_json::json!({ "q": residue_order, "s": length, "mu": mu }).to_string() + "\n";
            } else {
                text.push_str("q,s,mu\n");
                text.push_str(&format!("{residue_order},{length},{mu}\n"));
            }
        }
        RingCheck::Commuting => {
            let pgl = group_order(GroupKind::Pgl3, residue_order, length)?;
            let mode = if pgl <= 6000u32.into() {
                CommutingMode::Exhaustive
            } else {
                let seed = seed.ok_or_else(|| Error::Parse("sampled commuting sweep requires --seed".into()))?;
                CommutingMode::Sampled { budget, seed }
            };
            let report = commuting_pair_bound_check(residue_order, length, mode)?;
            if json {
                text = serde_json::to_string_pretty(&report).expect("serializes") + "\n";
            } else {
                text.push_str("q,s,bound,max_found,pairs_tested,mode\n");
                text.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    report.q, report.s, report.bound, report.max_order,
                    report.commuting_pairs_tested, report.mode
                ));
            }
            pass &= report.max_order <= report.bound;
        }
        RingCheck::Frobenius => {
            let report = frobenius_unipotent_order(residue_order, length)?;
            pass &= report.verified;
            if json {
                text = serde_json::to_string_pretty(&report).expect("serializes") + "\n";
            } else {
                text.push_str("q,s,exponent,kernel_size,verified\n");
                text.push_str(&format!(
                    "{},{},{},{},{}\n",
                    report.q, report.s, report.exponent, report.kernel_size, report.verified
                ));
            }
        }
    }
    Ok(RunOutput { text, pass })
}

#[allow(clippy::too_many_arguments)]
fn run_density(
    json: bool,
    complex_spec: &str,
    delta: f64,
    event: EventName,
    trials: u64,
    seed: u64,
    r: usize,
    k: usize,
    ell: usize,
    fprime: Option<u64>,
) -> perfora::Result<RunOutput> {
    let complex = parse_complex_spec(complex_spec)?;
    let side: String = complex_spec
        .split(':')
        .nth(1)
        .unwrap_or("")
        .split(',')
        .next()
        .unwrap_or("")
        .to_string();
    let n_faces = complex.face_count() as u64;
    let config = DensityConfig { delta, trials, seed, r, k, ell };
    config.validate()?;
    let m = perfora::density::draw_count(n_faces, delta);
    let mut pass = true;
    let (stats, extra) = match event {
        EventName::RSeparated => (run_event(&complex, &config, EventKind::RSeparated { r })?, None),
        EventName::AdjacentPairs => {
            (run_event(&complex, &config, EventKind::AdjacentPairs { count: r })?, None)
        }
        EventName::BallOccupancy => {
            (run_event(&complex, &config, EventKind::BallOccupancy { r, k })?, None)
        }
        EventName::FreeEdges => {
            (run_event(&complex, &config, EventKind::FreeEdges { ell, r })?, None)
        }
        EventName::Survival => {
            let size = fprime.ok_or_else(|| Error::Parse("--event survival requires --fprime".into()))?;
            let trace = FlatTrace::prefix(n_faces, size)?;
            let report = flat_survival(n_faces, &trace, delta, trials, seed)?;
            pass &= report.holds;
            let stats = report.stats.clone();
            (stats, Some(report))
        }
    };
    let text = if json {
        match extra {
            Some(report) => serde_json::to_string_pretty(&report).expect("serializes") + "\n",
            None => {
                let obj = serde_json::json!({
                    "n": side, "n_faces": n_faces, "delta": delta, "m": m,
                    "event": stats.event, "trials": stats.trials, "successes": stats.successes,
                    "p_hat": stats.p_hat, "stderr": stats.std_err, "seed": stats.seed,
                });
                serde_json::to_string_pretty(&obj).expect("serializes") + "\n"
            }
        }
    } else {
        let mut t = String::from("n,N_faces,delta,m,event,trials,successes,p_hat,stderr,seed\n");
        t.push_str(&format!(
            "{side},{n_faces},{delta},{m},{},{},{},{:.6},{:.6},{}\n",
            stats.event, stats.trials, stats.successes, stats.p_hat, stats.std_err, stats.seed
        ));
        t
    };
    Ok(RunOutput { text, pass })
}

fn run_thresholds(json: bool, q: u64, s: usize, delta: Option<f64>) -> perfora::Result<RunOutput> {
    let report = threshold_exponent(q, s, delta)?;
    let text = if json {
        serde_json::to_string_pretty(&report).expect("serializes") + "\n"
    } else {
        let mut t = String::from("q,s,delta,exponent,generic_exponent,critical,critical_exact,discrepancy,stated\n");
        let fmt_opt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.9}"));
        let stated = match (report.stated_num, report.stated_den) {
            (Some(n), Some(d)) => format!("{n}/{d}"),
            _ => "-".into(),
        };
        t.push_str(&format!(
            "{},{},{},{},{},{:.9},{}/{},{},{}\n",
            report.q,
            report.s,
            report.delta.map_or("-".to_string(), |d| d.to_string()),
            fmt_opt(report.exponent),
            fmt_opt(report.generic_exponent),
            report.critical,
            report.critical_num,
            report.critical_den,
            report.discrepancy,
            stated
        ));
        for note in &report.notes {
            t.push_str(&format!("# {note}\n"));
        }
        t
    };
    Ok(RunOutput { text, pass: true })
}
