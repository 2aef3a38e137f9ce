//! Command-line front end: curve construction, pair verification, the
//! Lax and traveling-wave checks, and the soliton simulator.
//!
//! Exit codes: 0 success, 1 hard identity failure, 2 input error,
//! 3 numeric abort.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rank2::family::{Family, FamilyTag};
use rank2::rational::{rat_parse, rat_str, rint, Rat};
use rank2::report::VerificationReport;
use rank2::sim::{self, SimConfig, Simulator};
use rank2::verify;
use rank2::{Error, Result};

#[derive(Parser)]
#[command(name = "rank2", about = "Commuting differential operator pairs: construction, verification, simulation")]
struct Cli {
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct FamilyArgs {
    /// Family: trig | cos | elliptic | rapid-decay | lame | dixmier.
    #[arg(long)]
    family: String,
    /// Spectral genus.
    #[arg(long, default_value_t = 1)]
    g: usize,
    #[arg(long)]
    alpha0: Option<String>,
    #[arg(long)]
    alpha1: Option<String>,
    #[arg(long)]
    g2: Option<String>,
    #[arg(long)]
    g1: Option<String>,
    #[arg(long)]
    g0: Option<String>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    h: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct Q and the spectral curve, with printed-formula cross-checks.
    Curve {
        #[command(flatten)]
        fam: FamilyArgs,
        /// Output JSON path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the partner operator and certify all pair identities.
    Pair {
        #[command(flatten)]
        fam: FamilyArgs,
        /// Verify at this many random rational parameter tuples instead
        /// of explicit parameters.
        #[arg(long)]
        tuples: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Schrödinger curve functional resolution at a given genus.
    Lame {
        #[arg(long, default_value_t = 1)]
        g: usize,
        #[arg(long, default_value = "1")]
        g1: String,
        #[arg(long, default_value = "1")]
        g0: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The quartic pair with polynomial coefficients.
    Dixmier {
        #[arg(long, default_value = "0")]
        h: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Jet-ring certification that commutativity is the evolution system.
    LaxCheck {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Traveling-wave solution: solved coefficients and the parameter locus.
    TravelingWave {
        #[arg(long, default_value = "1")]
        b: String,
        #[arg(long, default_value = "0")]
        g2: String,
        #[arg(long, default_value = "0")]
        g1: String,
        #[arg(long, default_value = "0")]
        g0: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evolve the system from the rapid-decay initial data.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "sim-out")]
        out_dir: PathBuf,
    },
}

fn parse_opt(name: &str, v: &Option<String>) -> Result<Option<(String, Rat)>> {
    match v {
        None => Ok(None),
        Some(s) => Ok(Some((name.to_string(), rat_parse(s)?))),
    }
}

fn family_from_args(fa: &FamilyArgs) -> Result<Family> {
    let tag = match fa.family.as_str() {
        "trig" => FamilyTag::Trig,
        "cos" => FamilyTag::Cos,
        "elliptic" => FamilyTag::Elliptic,
        "rapid-decay" => FamilyTag::RapidDecay,
        "lame" => FamilyTag::Lame,
        "dixmier" => FamilyTag::Dixmier,
        other => return Err(Error::BadConfig(format!("unknown family `{other}`"))),
    };
    let mut params = BTreeMap::new();
    for kv in [
        parse_opt("alpha0", &fa.alpha0)?,
        parse_opt("alpha1", &fa.alpha1)?,
        parse_opt("g2", &fa.g2)?,
        parse_opt("g1", &fa.g1)?,
        parse_opt("g0", &fa.g0)?,
        parse_opt("a", &fa.a)?,
        parse_opt("h", &fa.h)?,
    ]
    .into_iter()
    .flatten()
    {
        params.insert(kv.0, kv.1);
    }
    Ok(Family::new(tag, fa.g, params))
}

/// Random nonzero rational with small numerator and denominator.
fn rand_rat(rng: &mut ChaCha8Rng, nonzero: bool) -> Rat {
    loop {
        let p = rng.gen_range(-9i64..=9);
        let q = rng.gen_range(1i64..=9);
        let r = rint(p) / rint(q);
        if !nonzero || p != 0 {
            return r;
        }
    }
}

fn random_family(tag: FamilyTag, g: usize, rng: &mut ChaCha8Rng) -> Family {
    let mut params = BTreeMap::new();
    match tag {
        FamilyTag::Trig => {
            params.insert("alpha1".into(), rand_rat(rng, true));
            params.insert("alpha0".into(), rand_rat(rng, false));
            params.insert("g2".into(), rand_rat(rng, true));
            params.insert("g1".into(), rand_rat(rng, false));
            params.insert("g0".into(), rand_rat(rng, false));
        }
        FamilyTag::Cos => {
            params.insert("alpha1".into(), rand_rat(rng, true));
            params.insert("alpha0".into(), rand_rat(rng, false));
        }
        FamilyTag::Elliptic => {
            params.insert("alpha0".into(), rand_rat(rng, false));
            params.insert("g2".into(), rand_rat(rng, false));
            params.insert("g1".into(), rand_rat(rng, false));
            params.insert("g0".into(), rand_rat(rng, false));
        }
        FamilyTag::RapidDecay => {
            params.insert("a".into(), rand_rat(rng, true));
            params.insert("alpha0".into(), rand_rat(rng, false));
        }
        FamilyTag::Lame => {
            params.insert("g1".into(), rand_rat(rng, false));
            params.insert("g0".into(), rand_rat(rng, false));
        }
        FamilyTag::Dixmier => {
            params.insert("h".into(), rand_rat(rng, false));
        }
    }
    Family::new(tag, g, params)
}

/// Writes atomically: temp file in the target directory, then rename.
fn write_atomic(path: &Path, data: &str) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name().map(|s| s.to_string_lossy()).unwrap_or_default()
    ));
    std::fs::write(&tmp, data)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn emit(json_mode: bool, out: &Option<PathBuf>, value: &serde_json::Value, human: &[String]) -> Result<()> {
    let pretty = serde_json::to_string_pretty(value)?;
    if let Some(path) = out {
        write_atomic(path, &pretty)?;
        if !json_mode {
            println!("wrote {}", path.display());
        }
    }
    if json_mode {
        println!("{pretty}");
    } else {
        for line in human {
            println!("{line}");
        }
    }
    Ok(())
}

fn report_value(rep: &VerificationReport) -> serde_json::Value {
    serde_json::to_value(rep).unwrap_or(serde_json::Value::Null)
}

fn finish_report(json: bool, out: &Option<PathBuf>, rep: &VerificationReport) -> Result<ExitCode> {
    emit(json, out, &report_value(rep), &rep.summary_lines())?;
    Ok(if rep.all_hard_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Curve { fam, out } => {
            let family = family_from_args(&fam)?;
            let (rep, pair) = verify::verify_family(&family)?;
            let mut value = pair.curve.to_json(&family);
            value["report"] = report_value(&rep);
            let mut human = vec![format!(
                "F(z) coefficients (ascending): [{}]",
                pair.curve
                    .f
                    .coeffs()
                    .iter()
                    .map(rat_str)
                    .collect::<Vec<_>>()
                    .join(", ")
            )];
            human.extend(rep.summary_lines());
            emit(cli.json, &out, &value, &human)?;
            Ok(if rep.all_hard_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::Pair {
            fam,
            tuples,
            seed,
            out,
        } => {
            let mut master = VerificationReport::new("pair");
            match tuples {
                None => {
                    let family = family_from_args(&fam)?;
                    let (rep, _) = verify::verify_family(&family)?;
                    master.merge(rep);
                }
                Some(count) => {
                    let tag = family_from_args(&fam)?.tag;
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    if !cli.json {
                        println!("seed = {seed}");
                    }
                    for i in 0..count {
                        let family = random_family(tag, fam.g, &mut rng);
                        let (mut rep, _) = verify::verify_family(&family)?;
                        rep.label = format!("{}#{i}", rep.label);
                        master.merge(rep);
                    }
                }
            }
            finish_report(cli.json, &out, &master)
        }
        Cmd::Lame { g, g1, g0, out } => {
            let rep = verify::lame_eigen_check(g, &rat_parse(&g1)?, &rat_parse(&g0)?)?;
            finish_report(cli.json, &out, &rep)
        }
        Cmd::Dixmier { h, out } => {
            let rep = verify::dixmier_check(&rat_parse(&h)?)?;
            finish_report(cli.json, &out, &rep)
        }
        Cmd::LaxCheck { out } => {
            let rep = verify::lax_check();
            finish_report(cli.json, &out, &rep)
        }
        Cmd::TravelingWave { b, g2, g1, g0, out } => {
            let rep = verify::traveling_wave_solve(
                &rat_parse(&b)?,
                &rat_parse(&g2)?,
                &rat_parse(&g1)?,
                &rat_parse(&g0)?,
            )?;
            let value = serde_json::to_value(&rep)?;
            let mut human = vec![
                format!("V = {} u + {}", rep.p, rep.v0),
                format!("W = {} u^2 + {} u + c", rep.q, rep.r),
                format!(
                    "constraint residual = {} (g1 required: {})",
                    rep.constraint_residual, rep.g1_required
                ),
            ];
            human.extend(rep.report.summary_lines());
            emit(cli.json, &out, &value, &human)?;
            Ok(if rep.report.all_hard_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::Simulate { config, out_dir } => {
            let text = std::fs::read_to_string(&config)?;
            let value: serde_json::Value = serde_json::from_str(&text)?;
            let cfg = SimConfig::from_json(&value)?;
            cfg.validate()?;
            if !cli.json {
                println!(
                    "effective config: g={} a={} alpha0={} L={} N={} dt={} T={} snapshot_every={} track_Q={} dealias={}",
                    cfg.g,
                    rat_str(&cfg.a),
                    rat_str(&cfg.alpha0),
                    cfg.l,
                    cfg.n,
                    cfg.dt,
                    cfg.t_end,
                    cfg.snapshot_every,
                    cfg.track_q,
                    cfg.dealias
                );
            }
            let out = Simulator::run(cfg)?;
            for wmsg in &out.warnings {
                eprintln!("warning: {wmsg}");
            }
            std::fs::create_dir_all(&out_dir)?;
            for st in &out.snapshots {
                let name = format!("snap_t{}.csv", sim::fmt_time(st.t));
                write_atomic(&out_dir.join(name), &sim::snapshot_csv(&out.x, st))?;
            }
            write_atomic(
                &out_dir.join("diagnostics.csv"),
                &sim::diagnostics_csv(&out.diagnostics),
            )?;
            let last = out.diagnostics.last().unwrap();
            let line = format!(
                "t={} mass_V={} mass_W={} max_abs_V={} peak_count={}{}",
                last.t,
                last.mass_v,
                last.mass_w,
                last.max_abs_v,
                last.peak_count,
                last.curve_residual_max
                    .map(|r| format!(" curve_residual_max={r}"))
                    .unwrap_or_default()
            );
            if cli.json {
                let v = serde_json::json!({
                    "t": last.t,
                    "mass_V": last.mass_v,
                    "mass_W": last.mass_w,
                    "max_abs_V": last.max_abs_v,
                    "peak_count": last.peak_count,
                    "curve_residual_max": last.curve_residual_max,
                });
                println!("{}", serde_json::to_string_pretty(&v)?);
            } else {
                println!("{line}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Error::NumericAbort { t }) => {
            eprintln!("error: numeric abort, last stable time t = {t}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
