//! Command-line front end. The binary only forwards its arguments here.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::duality::{dual_graph, dual_of_dual_check, trace_faces, verify_duality, PlanarEmbedding};
use crate::error::{Error, Result};
use crate::graph::{default_spanning_tree, enumerate_spanning_trees, load_graph, validate_tree, GraphDocument, OrientedGraph, TreeSelection};
use crate::linalg::rational_json;
use crate::report::VerificationReport;
use crate::suite::{analyze, verify_random, RunReport};
use crate::thermo::{entropy_production, kirchhoff_checks, linear_regime_epr, macroscopic_observables, ThermoDocument, ThermoState};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "cocycle", version, about = "Exact cycle/cocycle projection algebra for oriented graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print incidence matrix, bases, projections and KS matrices, and run
    /// every identity check.
    Analyze {
        graph: PathBuf,
        /// Comma-separated spanning tree edge ids.
        #[arg(long, value_delimiter = ',')]
        tree: Option<Vec<String>>,
    },
    /// Compare det K, det *K and a brute-force spanning tree count.
    CountTrees {
        graph: PathBuf,
        #[arg(long, value_delimiter = ',')]
        tree: Option<Vec<String>>,
    },
    /// Build the planar dual from the embedding in the graph file.
    Dual {
        graph: PathBuf,
        #[arg(long, value_delimiter = ',')]
        tree: Option<Vec<String>>,
    },
    /// Macroscopic observables, Kirchhoff laws and entropy production.
    Thermo {
        graph: PathBuf,
        state: PathBuf,
        #[arg(long, value_delimiter = ',')]
        tree: Option<Vec<String>>,
    },
    /// Randomized property suite over graphs and abstract projections.
    Verify {
        #[arg(long, default_value_t = 200)]
        random: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_v: usize,
        #[arg(long, default_value_t = 14)]
        max_e: usize,
    },
}

/// Output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn read_graph(path: &Path) -> Result<(GraphDocument, OrientedGraph)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let doc = GraphDocument::from_json(&text)?;
    let g = load_graph(&doc)?;
    Ok((doc, g))
}

fn choose_tree(g: &OrientedGraph, doc: &GraphDocument, flag: &Option<Vec<String>>) -> Result<TreeSelection> {
    match flag.as_ref().or(doc.tree.as_ref()) {
        Some(ids) => validate_tree(g, ids),
        None => Ok(default_spanning_tree(g)),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let text = e.render().to_string();
            return if code == EXIT_PASS {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    let started = Instant::now();
    match execute(&cli, started) {
        Ok((report, text)) => {
            let code = if report.passed { EXIT_PASS } else { EXIT_FAIL };
            let stdout = match cli.format {
                Format::Json => serde_json::to_string_pretty(&report).expect("reports serialize") + "\n",
                Format::Text => text,
            };
            Outcome { stdout, stderr: String::new(), code }
        }
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: EXIT_INPUT,
        },
    }
}

fn execute(cli: &Cli, started: Instant) -> Result<(RunReport, String)> {
    match &cli.command {
        Command::Analyze { graph, tree } => cmd_analyze(graph, tree, started),
        Command::CountTrees { graph, tree } => cmd_count_trees(graph, tree, started),
        Command::Dual { graph, tree } => cmd_dual(graph, tree, started),
        Command::Thermo { graph, state, tree } => cmd_thermo(graph, state, tree, started),
        Command::Verify { random, seed, max_v, max_e } => Ok(cmd_verify(*random, *seed, *max_v, *max_e, started)),
    }
}

fn checks_text(out: &mut String, r: &VerificationReport) {
    let _ = write!(out, "{r}");
    let failed = r.failures().count();
    let _ = writeln!(out, "{} checks, {failed} failed", r.checks.len());
}

fn section(out: &mut String, title: &str, body: impl std::fmt::Display) {
    let _ = writeln!(out, "{title}:\n{body}");
}

fn cmd_analyze(path: &Path, tree: &Option<Vec<String>>, started: Instant) -> Result<(RunReport, String)> {
    let (doc, g) = read_graph(path)?;
    let t = choose_tree(&g, &doc, tree)?;
    let a = analyze(&g, &t)?;
    let b = &a.basis;
    let order = t.permutation_ids(&g);
    let mut out = String::new();
    let _ = writeln!(out, "edge order: {} | {}", order[..b.cochord_count()].join(" "), order[b.cochord_count()..].join(" "));
    section(&mut out, "incidence", b.canonical_incidence());
    section(&mut out, "cocycles", b.cocycle_matrix());
    section(&mut out, "cycles", b.cycle_matrix());
    section(&mut out, "P", &a.projections.p);
    section(&mut out, "Q", &a.projections.q);
    section(&mut out, "Omega", &a.projections.omega);
    section(&mut out, "omega", &a.projections.omega_block);
    section(&mut out, "K", &a.ks.k);
    section(&mut out, "*K", &a.ks.kstar);
    let _ = writeln!(out, "char K:  {}", a.spectra.char_k);
    let _ = writeln!(out, "char *K: {}", a.spectra.char_kstar);
    let eigs = |v: &[crate::linalg::EigenPair]| v.iter().map(|e| format!("{:.9}", e.value)).collect::<Vec<_>>().join(", ");
    let _ = writeln!(out, "eigenvalues K:  [{}]", eigs(&a.spectra.eig_k));
    let _ = writeln!(out, "eigenvalues *K: [{}]", eigs(&a.spectra.eig_kstar));
    checks_text(&mut out, &a.report);
    let data = json!({
        "edge_order": order,
        "incidence": b.canonical_incidence(),
        "cocycles": b.cocycles(),
        "cycles": b.cycles(),
        "P": a.projections.p,
        "Q": a.projections.q,
        "Omega": a.projections.omega,
        "omega": a.projections.omega_block,
        "K": a.ks.k,
        "Kstar": a.ks.kstar,
        "spectra": a.spectra,
    });
    let inputs = vec![path.display().to_string(), format!("tree={}", t.tree_edge_ids(&g).join(","))];
    Ok((RunReport::new("analyze", inputs, a.report, Some(data), started), out))
}

fn cmd_count_trees(path: &Path, tree: &Option<Vec<String>>, started: Instant) -> Result<(RunReport, String)> {
    let (doc, g) = read_graph(path)?;
    let t = choose_tree(&g, &doc, tree)?;
    let a = analyze(&g, &t)?;
    let count = enumerate_spanning_trees(&g)?;
    let det_k = a.ks.k.det()?;
    let det_ks = a.ks.kstar.det()?;
    let mut r = VerificationReport::new("count-trees");
    let trees = crate::linalg::Rational::from_integer(count.into());
    r.record_with("det K = det *K = #trees", det_k == trees && det_ks == trees, format!("{det_k}, {det_ks}, {count}"));
    let mut out = format!("det K = {det_k}\ndet *K = {det_ks}\nspanning trees = {count}\n");
    checks_text(&mut out, &r);
    let data = json!({"det_K": rational_json(&det_k), "det_Kstar": rational_json(&det_ks), "spanning_trees": count});
    Ok((RunReport::new("count-trees", vec![path.display().to_string()], r, Some(data), started), out))
}

fn cmd_dual(path: &Path, tree: &Option<Vec<String>>, started: Instant) -> Result<(RunReport, String)> {
    let (doc, g) = read_graph(path)?;
    let t = choose_tree(&g, &doc, tree)?;
    let emb = PlanarEmbedding::from_document(&g, &doc)?;
    let d = dual_graph(&g, &emb, &t)?;
    let a = analyze(&g, &t)?;
    let outcome = verify_duality(&a.basis, &a.projections, &d)?;
    let mut r = outcome.checks.clone();
    r.absorb(dual_of_dual_check(&g, &emb, &t)?);
    let dual_doc = d.to_document();
    let mut out = String::new();
    let faces = trace_faces(&g, &emb);
    for (i, f) in faces.iter().enumerate() {
        let _ = writeln!(out, "f{}: {}", i + 1, f.join(" "));
    }
    let _ = writeln!(out, "dual graph:\n{}", dual_doc.to_json());
    if outcome.flipped {
        let _ = writeln!(out, "dual orientation globally reversed");
    }
    checks_text(&mut out, &r);
    let data = json!({"faces": faces, "dual": dual_doc, "flipped": outcome.flipped});
    Ok((RunReport::new("dual", vec![path.display().to_string()], r, Some(data), started), out))
}

fn cmd_thermo(path: &Path, state_path: &Path, tree: &Option<Vec<String>>, started: Instant) -> Result<(RunReport, String)> {
    let (doc, g) = read_graph(path)?;
    let t = choose_tree(&g, &doc, tree)?;
    let a = analyze(&g, &t)?;
    let b = &a.basis;
    let text = std::fs::read_to_string(state_path).map_err(|e| Error::Parse(format!("{}: {e}", state_path.display())))?;
    let s = ThermoState::from_document(b, &ThermoDocument::from_json(&text)?)?;
    let obs = macroscopic_observables(b, &s)?;
    let flags = kirchhoff_checks(b, &a.projections, &s)?;
    let ep = entropy_production(b, &s)?;
    let zero = crate::linalg::rat(0);
    let mut r = VerificationReport::new("thermo");
    r.record("sigma = tidal + vortex", ep.sigma == &ep.tidal + &ep.vortex);
    r.record("kcl iff tidal currents vanish", flags.kcl == obs.j_mu.iter().all(|x| x == &zero));
    r.record("kvl iff circuitations vanish", flags.kvl == obs.f_alpha.iter().all(|x| x == &zero));
    let linear = if s.currents == s.forces {
        let lr = linear_regime_epr(b, &a.ks, &s.currents)?;
        r.record_with("linear regime entropy production", lr.passed(), format!("{} vs {}", lr.direct, lr.decomposed));
        Some(lr)
    } else {
        None
    };
    let fmt = |v: &[crate::linalg::Rational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
    let mut out = String::new();
    let _ = writeln!(out, "J_mu    = [{}]", fmt(&obs.j_mu));
    let _ = writeln!(out, "J_alpha = [{}]", fmt(&obs.j_alpha));
    let _ = writeln!(out, "F_mu    = [{}]", fmt(&obs.f_mu));
    let _ = writeln!(out, "F_alpha = [{}]", fmt(&obs.f_alpha));
    let _ = writeln!(out, "kcl = {}, kvl = {}, equilibrium = {}", flags.kcl, flags.kvl, flags.equilibrium);
    let _ = writeln!(out, "sigma = {} (tidal {}, vortex {})", ep.sigma, ep.tidal, ep.vortex);
    checks_text(&mut out, &r);
    let data = json!({"observables": obs, "kirchhoff": flags, "entropy_production": ep, "linear_regime": linear});
    let inputs = vec![path.display().to_string(), state_path.display().to_string()];
    Ok((RunReport::new("thermo", inputs, r, Some(data), started), out))
}

fn cmd_verify(cases: usize, seed: u64, max_v: usize, max_e: usize, started: Instant) -> (RunReport, String) {
    let run = verify_random(cases, seed, max_v, max_e);
    let mut out = String::new();
    for f in run.graph_failures.iter().chain(&run.projection_failures) {
        let _ = writeln!(out, "{f}");
    }
    checks_text(&mut out, &run.report);
    let data = json!({"graph_failures": run.graph_failures, "projection_failures": run.projection_failures});
    let inputs = vec![format!("random={cases}"), format!("seed={seed}"), format!("max_v={max_v}"), format!("max_e={max_e}")];
    (RunReport::new("verify", inputs, run.report, Some(data), started), out)
}
