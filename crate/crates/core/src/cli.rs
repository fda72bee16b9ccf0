//! The `hde` command-line interface. Subcommands mirror the library surface:
//! validate, graphs, certify, thresholds, unn-search, rej, correct, distance,
//! amp-check, affine-build, affine-check, experiment. Reports are written as
//! one `key=value` pair per line. Exit codes: 0 pass, 1 verdict fail,
//! 2 usage or parse error.

use crate::affine::{
    affine_expansion_check, affine_testability_thresholds, build_affine_instance, ordered_covers,
    verify_ordered_covers, AffineCaps,
};
use crate::code::DEFAULT_CODEWORD_CAP;
use crate::expansion::{
    certify_hde, main_theorem_thresholds, unique_neighbor_falsification_search, SearchMode,
    DEFAULT_SEARCH_CAP,
};
use crate::experiment::{run_rejection_experiment, ExperimentConfig};
use crate::graph::GraphLimits;
use crate::ratio::{fmt_frac, parse_rat, rat_int, Rat};
use crate::{io, Error, Result};
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "hde",
    version,
    about = "Two-layer systems, expansion certificates, and modelled codes"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a two-layer system file.
    Validate { file: PathBuf },
    /// Emit derived graphs of a system as #wgraph files.
    Graphs {
        file: PathBuf,
        /// ground | links | nonint | opposite
        #[arg(long)]
        emit: String,
        /// Output directory (defaults to stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify the HDE condition at a single lambda.
    Certify {
        system: PathBuf,
        /// Expansion parameter; negative rationals are accepted.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Print the main-theorem thresholds for given parameters.
    Thresholds(ThresholdArgs),
    /// Search for a unique-neighbor-expansion counterexample.
    UnnSearch {
        system: PathBuf,
        #[arg(long)]
        delta: String,
        #[arg(long, default_value = "0")]
        alpha: String,
        #[arg(long)]
        eps0: String,
        /// exhaustive | randomized
        #[arg(long, default_value = "exhaustive")]
        mode: String,
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Weighted rejection of a word.
    Rej {
        code: PathBuf,
        #[arg(long)]
        word: PathBuf,
    },
    /// Bit-flip correction of a word.
    Correct {
        code: PathBuf,
        #[arg(long)]
        word: PathBuf,
        #[arg(long)]
        delta: String,
    },
    /// Distance bound versus true minimum distance.
    Distance { code: PathBuf },
    /// Amplified testability bound for a word.
    AmpCheck {
        code: PathBuf,
        #[arg(long)]
        word: PathBuf,
        #[arg(long)]
        r: String,
        #[arg(long)]
        t: u32,
    },
    /// Build the affine-invariant system and code from a spec.
    AffineBuild {
        spec: PathBuf,
        #[arg(long)]
        out_system: PathBuf,
        #[arg(long)]
        out_code: PathBuf,
    },
    /// Build and verify the affine expansion and testability figures.
    AffineCheck {
        spec: PathBuf,
        #[arg(long)]
        delta: String,
        /// Also verify the ordered weak covers (slower).
        #[arg(long, default_value_t = false)]
        covers: bool,
    },
    /// Randomized rejection-vs-distance experiment with CSV output.
    Experiment {
        code: PathBuf,
        /// Comma-separated corruption rates, e.g. 0,1/3,2/3.
        #[arg(long)]
        rates: String,
        #[arg(long, default_value_t = 10)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        r: Option<String>,
        #[arg(long, default_value_t = 3)]
        t: u32,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Output CSV path (defaults to stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long)]
    s: usize,
    #[arg(long)]
    k: usize,
    #[arg(long = "K")]
    big_k: usize,
    #[arg(long = "R", default_value = "1")]
    r_nint: String,
    #[arg(long)]
    delta: String,
    #[arg(long, default_value = "0")]
    alpha: String,
}

/// Runs the CLI; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Report { lines, pass }) => {
            for line in lines {
                println!("{line}");
            }
            if pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

struct Report {
    lines: Vec<String>,
    pass: bool,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::parse(0, format!("cannot read {}: {e}", path.display())))
}

fn load_system(path: &Path) -> Result<crate::system::TwoLayerSystem> {
    io::parse_system(&read(path)?)
}

fn load_code(path: &Path) -> Result<crate::code::LinearCodeModel> {
    let base = path.parent().unwrap_or(Path::new("."));
    io::parse_code(&read(path)?, base)
}

fn load_word(code: &crate::code::LinearCodeModel, path: &Path) -> Result<crate::code::Word> {
    let words = io::parse_words(&read(path)?, code.system(), code.p())?;
    Ok(words
        .into_iter()
        .next()
        .expect("parse_words yields at least one"))
}

fn run(cmd: Command) -> Result<Report> {
    match cmd {
        Command::Validate { file } => {
            let text = read(&file)?;
            // Surface the violation list rather than the build error.
            match io::parse_system(&text) {
                Ok(x) => {
                    let (s, k, big_k) = x.params();
                    Ok(Report {
                        lines: vec![
                            "valid=true".to_string(),
                            format!("s={s}"),
                            format!("k={k}"),
                            format!("K={big_k}"),
                            format!("vertices={}", x.vertex_count()),
                            format!("edges={}", x.edge_count()),
                            format!("tops={}", x.top_count()),
                        ],
                        pass: true,
                    })
                }
                Err(Error::Parse { line: 0, msg }) => {
                    let mut lines = vec!["valid=false".to_string()];
                    for (i, v) in msg
                        .trim_start_matches("invalid system: ")
                        .split("; ")
                        .enumerate()
                    {
                        lines.push(format!("violation{}={v}", i + 1));
                    }
                    Ok(Report { lines, pass: false })
                }
                Err(e) => Err(e),
            }
        }
        Command::Graphs { file, emit, out } => {
            let x = load_system(&file)?;
            let mut outputs: Vec<(String, String)> = Vec::new();
            match emit.as_str() {
                "ground" => {
                    outputs.push(("ground.wgraph".into(), io::write_wgraph(&x.ground_graph())))
                }
                "nonint" => {
                    let nint = x.nonintersecting_graph();
                    outputs.push(("nonint.wgraph".into(), io::write_wgraph(&nint.graph)));
                }
                "links" => {
                    for v in 0..x.vertex_count() {
                        let g = x.link_graph(v)?;
                        outputs.push((
                            format!("link_{}.wgraph", x.vertex_labels()[v]),
                            io::write_wgraph(&g),
                        ));
                    }
                }
                "opposite" => {
                    let opp = x.opposite_graph();
                    // Prefix sides so vertex and edge names cannot collide.
                    let g = opp.graph.graph();
                    let mut text = String::from("#wgraph v1\n");
                    let nl = opp.graph.left_count();
                    for (i, l) in g.labels().iter().enumerate() {
                        let tag = if i < nl { "v" } else { "e" };
                        text.push_str(&format!("vertex {tag}.{l}\n"));
                    }
                    for (a, b, w) in g.edges() {
                        let la = format!("{}.{}", if *a < nl { "v" } else { "e" }, g.labels()[*a]);
                        let lb = format!("{}.{}", if *b < nl { "v" } else { "e" }, g.labels()[*b]);
                        text.push_str(&format!("edge {la} {lb} {}\n", fmt_frac(w)));
                    }
                    outputs.push(("opposite.wgraph".into(), text));
                }
                other => {
                    return Err(Error::parse(0, format!("unknown --emit value `{other}`")));
                }
            }
            let mut lines = Vec::new();
            match out {
                Some(dir) => {
                    std::fs::create_dir_all(&dir)?;
                    for (name, text) in outputs {
                        let path = dir.join(&name);
                        std::fs::write(&path, text)?;
                        lines.push(format!("wrote={}", path.display()));
                    }
                }
                None => {
                    for (_, text) in outputs {
                        lines.extend(text.lines().map(str::to_string));
                    }
                }
            }
            Ok(Report { lines, pass: true })
        }
        Command::Certify { system, lambda } => {
            let x = load_system(&system)?;
            let lambda = parse_rat(&lambda)?;
            let cert = certify_hde(&x, &lambda, &GraphLimits::default());
            let mut lines = vec![
                format!("lambda={}", fmt_frac(&lambda)),
                format!("ground_pass={}", cert.ground.passed),
                format!("ground_reason={}", cert.ground.reason()),
            ];
            for (v, verdict) in cert.links.iter().enumerate() {
                if !verdict.passed {
                    lines.push(format!(
                        "link_fail={} reason={}",
                        x.vertex_labels()[v],
                        verdict.reason()
                    ));
                }
            }
            lines.push(format!(
                "links_pass={}",
                cert.links.iter().all(|l| l.passed)
            ));
            lines.push(format!("nonint_edgeless={}", cert.nonint_edgeless));
            if let Some(nv) = &cert.nonint {
                lines.push(format!("nonint_pass={}", nv.passed));
                lines.push(format!("nonint_reason={}", nv.reason()));
            }
            lines.push(format!("r_nint={}", fmt_frac(&cert.r_nint)));
            lines.push(format!("pass={}", cert.passed));
            Ok(Report {
                lines,
                pass: cert.passed,
            })
        }
        Command::Thresholds(args) => {
            let r = parse_rat(&args.r_nint)?;
            let delta = parse_rat(&args.delta)?;
            let alpha = parse_rat(&args.alpha)?;
            let t = main_theorem_thresholds(args.s, args.k, args.big_k, &r, &delta, &alpha)?;
            Ok(Report {
                lines: vec![
                    format!("lambda_ground={}", fmt_frac(&t.lambda_ground)),
                    format!("lambda_links={}", fmt_frac(&t.lambda_links)),
                    format!("lambda_nonint={}", fmt_frac(&t.lambda_nonint)),
                    format!("eps0={}", fmt_frac(&t.eps0)),
                ],
                pass: true,
            })
        }
        Command::UnnSearch {
            system,
            delta,
            alpha,
            eps0,
            mode,
            budget,
            seed,
        } => {
            let x = load_system(&system)?;
            let delta = parse_rat(&delta)?;
            let alpha = parse_rat(&alpha)?;
            let eps0 = parse_rat(&eps0)?;
            let mode = match mode.as_str() {
                "exhaustive" => SearchMode::Exhaustive,
                "randomized" => SearchMode::Randomized,
                other => return Err(Error::parse(0, format!("unknown --mode `{other}`"))),
            };
            let found = unique_neighbor_falsification_search(
                &x,
                &delta,
                &alpha,
                &eps0,
                mode,
                budget,
                seed,
                DEFAULT_SEARCH_CAP,
            )?;
            match found {
                Some(a) => {
                    let names: Vec<&str> = a.iter().map(|&e| x.edge_labels()[e].as_str()).collect();
                    Ok(Report {
                        lines: vec![
                            "counterexample=true".to_string(),
                            format!("set={}", names.join(",")),
                        ],
                        pass: false,
                    })
                }
                None => Ok(Report {
                    lines: vec!["counterexample=false".to_string()],
                    pass: true,
                }),
            }
        }
        Command::Rej { code, word } => {
            let code = load_code(&code)?;
            let w = load_word(&code, &word)?;
            let rej = code.rej(&w)?;
            Ok(Report {
                lines: vec![
                    format!("rej={}", fmt_frac(&rej)),
                    format!("in_code={}", rej == rat_int(0)),
                ],
                pass: true,
            })
        }
        Command::Correct { code, word, delta } => {
            let code = load_code(&code)?;
            let w = load_word(&code, &word)?;
            let delta = parse_rat(&delta)?;
            let (fixed, flips) = code.bitflip_correct(&w, &delta)?;
            let names: Vec<&str> = flips
                .iter()
                .map(|&v| code.system().vertex_labels()[v].as_str())
                .collect();
            let in_code = code.is_codeword(&fixed)?;
            Ok(Report {
                lines: vec![
                    format!("flips={}", flips.len()),
                    format!("flip_sequence={}", names.join(",")),
                    format!(
                        "corrected={}",
                        io::write_word(code.system(), &fixed).trim_end()
                    ),
                    format!("in_code={in_code}"),
                ],
                pass: in_code,
            })
        }
        Command::Distance { code } => {
            let code = load_code(&code)?;
            let report =
                code.distance_bound_check(&GraphLimits::default(), DEFAULT_CODEWORD_CAP)?;
            Ok(Report {
                lines: vec![
                    format!("bound={}", fmt_frac(&report.bound)),
                    format!(
                        "true_distance={}",
                        report
                            .true_distance
                            .as_ref()
                            .map_or("none".into(), fmt_frac)
                    ),
                    format!("lambda_ground={}", fmt_frac(&report.lambda_ground)),
                    format!("pass={}", report.holds),
                ],
                pass: report.holds,
            })
        }
        Command::AmpCheck { code, word, r, t } => {
            let code = load_code(&code)?;
            let w = load_word(&code, &word)?;
            let r = parse_rat(&r)?;
            let report = code.check_amplified_bound(&w, &r, t, DEFAULT_CODEWORD_CAP)?;
            Ok(Report {
                lines: vec![
                    format!("rej={}", fmt_frac(&report.lhs)),
                    format!("bound={}", fmt_frac(&report.rhs)),
                    format!("distance={}", fmt_frac(&report.distance)),
                    format!("pass={}", report.holds),
                ],
                pass: report.holds,
            })
        }
        Command::AffineBuild {
            spec,
            out_system,
            out_code,
        } => {
            let spec = io::parse_affine_spec(&read(&spec)?)?;
            let instance = build_affine_instance(&spec, &AffineCaps::default())?;
            std::fs::write(&out_system, io::write_system(&instance.system))?;
            let system_ref = out_system
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| out_system.display().to_string());
            std::fs::write(&out_code, io::write_code(&instance.code, &system_ref))?;
            let (s, k, big_k) = instance.system.params();
            Ok(Report {
                lines: vec![
                    format!("vertices={}", instance.system.vertex_count()),
                    format!("edges={}", instance.system.edge_count()),
                    format!("tops={}", instance.system.top_count()),
                    format!("gp_matrices={}", instance.gp_count),
                    format!("k_prime={}", instance.k_prime),
                    format!("s={s}"),
                    format!("k={k}"),
                    format!("K={big_k}"),
                    format!("wrote_system={}", out_system.display()),
                    format!("wrote_code={}", out_code.display()),
                ],
                pass: true,
            })
        }
        Command::AffineCheck {
            spec,
            delta,
            covers,
        } => {
            let spec = io::parse_affine_spec(&read(&spec)?)?;
            let delta = parse_rat(&delta)?;
            let instance = build_affine_instance(&spec, &AffineCaps::default())?;
            let thresholds = affine_testability_thresholds(spec.p, spec.k(), &delta)?;
            let expansion = affine_expansion_check(&instance, &GraphLimits::default())?;
            let mut lines = vec![
                format!("size={}", spec.space.size()),
                format!(
                    "size_requirement={}",
                    fmt_frac(&thresholds.size_requirement)
                ),
                format!("size_ok={}", thresholds.size_ok(spec.space.size())),
                format!("eps0={}", fmt_frac(&thresholds.eps0)),
                format!("r={}", fmt_frac(&thresholds.r)),
                format!("t={}", thresholds.t),
                format!("expansion_applicable={}", expansion.applicable),
                format!("lambda_target={}", fmt_frac(&expansion.lambda_target)),
                format!("ground_complete={}", expansion.ground_complete),
                format!(
                    "ground_constant_weight={}",
                    expansion.ground_constant_weight
                ),
            ];
            for m in &expansion.measurements {
                if let Some(v) = m.one_minus_h {
                    lines.push(format!(
                        "graph={} one_minus_h={v} pass={}",
                        m.name, m.passed
                    ));
                }
            }
            let mut pass = expansion.applicable && expansion.passed;
            if covers {
                let oc = ordered_covers(&instance, &AffineCaps::default())?;
                match verify_ordered_covers(&instance, &oc, &GraphLimits::default()) {
                    Ok(()) => lines.push("ordered_covers=ok".to_string()),
                    Err(e) => {
                        lines.push(format!("ordered_covers=failed: {e}"));
                        pass = false;
                    }
                }
            }
            lines.push(format!("pass={pass}"));
            Ok(Report { lines, pass })
        }
        Command::Experiment {
            code,
            rates,
            samples,
            seed,
            delta,
            r,
            t,
            threads,
            out,
        } => {
            let code = load_code(&code)?;
            let rates: Vec<Rat> = rates.split(',').map(parse_rat).collect::<Result<_>>()?;
            let mut cfg = ExperimentConfig::new(rates, samples, seed, parse_rat(&delta)?)?;
            cfg.t = t;
            cfg.threads = threads;
            if let Some(r) = r {
                cfg.r = Some(parse_rat(&r)?);
            }
            let csv = run_rejection_experiment(&code, &cfg)?;
            match out {
                Some(path) => {
                    std::fs::write(&path, &csv)?;
                    Ok(Report {
                        lines: vec![format!("wrote={}", path.display())],
                        pass: true,
                    })
                }
                None => Ok(Report {
                    lines: csv.lines().map(str::to_string).collect(),
                    pass: true,
                }),
            }
        }
    }
}
