use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use wirenet::analysis::{analyze_with_table, analyze_point, format_point, AnalysisOptions};
use wirenet::bandscan::{degeneracy_candidates, scan_grid, scan_path, write_csv, ScanResult, TorusPath};
use wirenet::hamiltonian::build_hamiltonian;
use wirenet::regauge::cocycle_check;
use wirenet::symlift::{group_action_table, strata_census};
use wirenet::{Error, ErrorKind, TorusPoint, WeightedGraph};

#[derive(Parser)]
#[command(name = "wirenet", version, about = "Symmetry and spectral analysis of periodic graph Hamiltonians")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Numerical tolerance for eigenvalue clustering.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Args)]
struct GraphArg {
    /// Built-in name (P, D, G, honeycomb) or path to a JSON graph description.
    #[arg(long)]
    graph: String,
    /// Also enumerate automorphisms that reverse loops.
    #[arg(long)]
    loop_reversal: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the graph and weight function.
    Validate(GraphArg),
    /// List automorphisms with their lifted torus actions.
    Autos(GraphArg),
    /// Sample spectra on a grid or along a path.
    Bands {
        #[command(flatten)]
        graph: GraphArg,
        /// Per-axis resolution, e.g. 51,51,51; a single value applies to every axis.
        #[arg(long, conflicts_with = "path")]
        grid: Option<String>,
        /// "diag" or start:end in turns.
        #[arg(long)]
        path: Option<String>,
        #[arg(long, default_value_t = 400)]
        samples: usize,
        /// Report clusters with minimum gap below this value (table format).
        #[arg(long, default_value_t = 0.02)]
        gap_tol: f64,
    },
    /// Strata of points with non-trivial stabilizer.
    FixedPoints(GraphArg),
    /// Stabilizer, cocycle, extension and decomposition at one point.
    AnalyzePoint {
        #[command(flatten)]
        graph: GraphArg,
        /// Point in turns, e.g. 1/4,1/4,1/4.
        #[arg(long)]
        point: String,
    },
    /// Full pipeline over all symmetry strata.
    Analyze(GraphArg),
    /// Randomized check of the re-gauging identities.
    CocycleCheck {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

enum Failure {
    Lib(Error),
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Lib(Error::Json(e))
    }
}

fn letters(n: usize) -> Vec<String> {
    (0..n).map(|i| if i < 26 { ((b'A' + i as u8) as char).to_string() } else { format!("X{i}") }).collect()
}

fn sink(out: &Option<String>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit_json(w: &mut dyn Write, v: &impl serde::Serialize) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *w, v)?;
    writeln!(w)?;
    Ok(())
}

fn load(arg: &GraphArg) -> Result<WeightedGraph, Failure> {
    Ok(WeightedGraph::load(&arg.graph)?)
}

fn options(g: &Global, arg: &GraphArg) -> AnalysisOptions {
    AnalysisOptions { tol: g.tol, seed: g.seed, loop_reversal: arg.loop_reversal, ..Default::default() }
}

fn scan_summary(scan: &ScanResult, gap_tol: f64) -> String {
    let mut s = String::new();
    let gmin = scan.min_gap.iter().copied().fold(f64::INFINITY, f64::min);
    s.push_str(&format!("points {}  bands {}  min gap {:.6e}\n", scan.points.len(), scan.eigenvalues.first().map_or(0, |v| v.len()), gmin));
    let c = degeneracy_candidates(scan, gap_tol);
    s.push_str(&format!("clusters with gap < {gap_tol}: {}\n", c.len()));
    for cand in c {
        let p: Vec<String> = cand.best.iter().map(|x| format!("{x:.4}")).collect();
        s.push_str(&format!("  ({})  gap {:.3e}  size {}\n", p.join(","), cand.min_gap, cand.members.len()));
    }
    s
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Validate(arg) => {
            let wg = load(arg)?;
            let report = wg.check()?;
            let mut w = sink(&g.out)?;
            if g.format == Some(Format::Json) {
                emit_json(&mut w, &json!({ "graph": wg.graph.name(), "report": report }))?;
            } else {
                writeln!(w, "graph {}  vertices {}  edges {}  rank {}", wg.graph.name(), wg.graph.num_vertices(), wg.graph.num_edges(), wg.graph.rank())?;
                writeln!(w, "adjoint symmetric  {}", report.adjoint_symmetric)?;
                if let Some(tc) = report.tree_compatible {
                    writeln!(w, "tree compatible    {tc}")?;
                }
                writeln!(w, "non-degenerate     {}", report.nondegenerate)?;
                for v in &report.violations {
                    writeln!(w, "violation {}: {}", v.edge, v.reason)?;
                }
            }
            w.flush()?;
            if !report.is_valid() {
                return Err(Failure::Lib(report.into_result().expect_err("invalid report")));
            }
        }
        Command::Autos(arg) => {
            let wg = load(arg)?;
            let table = group_action_table(&wg, options(g, arg).automorphisms())?;
            let names = letters(wg.graph.rank());
            let names: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            let rows: Vec<(String, String)> = table
                .automorphisms
                .iter()
                .zip(&table.actions)
                .map(|(a, act)| {
                    let c = a.cycle_notation(&wg.graph);
                    (if c.is_empty() { "()".into() } else { c }, act.describe(&names))
                })
                .collect();
            let mut w = sink(&g.out)?;
            match g.format {
                Some(Format::Json) => emit_json(
                    &mut w,
                    &json!({
                        "graph": wg.graph.name(),
                        "order": table.len(),
                        "label": table.group.identify(),
                        "automorphisms": rows.iter().map(|(a, b)| json!({"automorphism": a, "action": b})).collect::<Vec<_>>(),
                    }),
                )?,
                Some(Format::Csv) => {
                    writeln!(w, "automorphism,action")?;
                    for (a, b) in &rows {
                        writeln!(w, "\"{a}\",\"{b}\"")?;
                    }
                }
                _ => {
                    writeln!(w, "Aut({}) = {} (order {})", wg.graph.name(), table.group.identify(), table.len())?;
                    for (a, b) in &rows {
                        writeln!(w, "  {a:<24} {b}")?;
                    }
                }
            }
            w.flush()?;
        }
        Command::Bands { graph, grid, path, samples, gap_tol } => {
            let wg = load(graph)?;
            let h = build_hamiltonian(&wg.graph, &wg.weights, &wg.tree)?;
            let scan = match (grid, path) {
                (Some(spec), _) => {
                    let res = spec
                        .split(',')
                        .map(|x| x.trim().parse::<usize>().map_err(|_| Failure::Usage(format!("bad grid resolution {x:?}"))))
                        .collect::<Result<Vec<_>, _>>()?;
                    let res = if res.len() == 1 { vec![res[0]; h.rank()] } else { res };
                    scan_grid(&h, &res)?
                }
                (None, Some(p)) => scan_path(&h, &TorusPath::parse(p, wg.graph.rank())?, *samples)?,
                (None, None) => return Err(Failure::Usage("bands needs --grid or --path".into())),
            };
            let mut w = sink(&g.out)?;
            match g.format.unwrap_or(Format::Csv) {
                Format::Csv => write_csv(&scan, &mut w)?,
                Format::Json => emit_json(&mut w, &scan)?,
                Format::Table => write!(w, "{}", scan_summary(&scan, *gap_tol))?,
            }
            w.flush()?;
        }
        Command::FixedPoints(arg) => {
            let wg = load(arg)?;
            let table = group_action_table(&wg, options(g, arg).automorphisms())?;
            let strata = strata_census(&table);
            let mut w = sink(&g.out)?;
            let rows: Vec<_> = strata
                .iter()
                .map(|s| {
                    json!({
                        "stabilizer": s.label,
                        "order": s.order,
                        "abelian": s.abelian,
                        "dimension": s.component.dim(),
                        "fixed_set": s.component.to_string(),
                    })
                })
                .collect();
            match g.format {
                Some(Format::Json) => emit_json(&mut w, &json!({ "graph": wg.graph.name(), "strata": rows }))?,
                Some(Format::Csv) => {
                    writeln!(w, "stabilizer,order,abelian,dimension,fixed_set")?;
                    for s in &strata {
                        writeln!(w, "{},{},{},{},\"{}\"", s.label, s.order, s.abelian, s.component.dim(), s.component)?;
                    }
                }
                _ => {
                    writeln!(w, "{:<12} {:>5}  fixed set", "stabilizer", "order")?;
                    for s in &strata {
                        writeln!(w, "{:<12} {:>5}  {}", s.label, s.order, s.component)?;
                    }
                }
            }
            w.flush()?;
        }
        Command::AnalyzePoint { graph, point } => {
            let wg = load(graph)?;
            let t = TorusPoint::from_str(point)?;
            let t = t.as_exact().ok_or_else(|| Failure::Usage("analyze-point needs a rational point in turns".into()))?.to_vec();
            let opts = options(g, graph);
            let table = group_action_table(&wg, opts.automorphisms())?;
            let r = analyze_point(&wg, &table, &t, &opts)?;
            let mut w = sink(&g.out)?;
            match g.format {
                Some(Format::Json) => emit_json(&mut w, &r)?,
                Some(Format::Csv) => {
                    writeln!(w, "point,stabilizer,order,cocycle_order,extension,irrep_dims,eigenvalues")?;
                    let dims: Vec<String> = r.irrep_dims.iter().map(|d| d.to_string()).collect();
                    let ev: Vec<String> = r.eigenvalues.iter().map(|c| format!("{:.12}x{}", c.value, c.multiplicity)).collect();
                    writeln!(
                        w,
                        "\"{}\",{},{},{},{},\"{}\",\"{}\"",
                        format_point(&t),
                        r.stabilizer_label,
                        r.stabilizer_order,
                        r.cocycle_order,
                        r.extension_label,
                        dims.join(" "),
                        ev.join(" ")
                    )?;
                }
                _ => write!(w, "{}", r.render_table())?,
            }
            w.flush()?;
        }
        Command::Analyze(arg) => {
            let wg = load(arg)?;
            let opts = options(g, arg);
            let table = group_action_table(&wg, opts.automorphisms())?;
            let r = analyze_with_table(&wg, &table, &opts)?;
            let mut w = sink(&g.out)?;
            match g.format {
                Some(Format::Json) => emit_json(&mut w, &r)?,
                Some(Format::Csv) => {
                    writeln!(w, "stabilizer,order,fixed_set,sample,extension,irrep_dims")?;
                    for s in &r.strata {
                        let dims: Vec<String> = s.report.irrep_dims.iter().map(|d| d.to_string()).collect();
                        writeln!(
                            w,
                            "{},{},\"{}\",\"{}\",{},\"{}\"",
                            s.stabilizer_label,
                            s.stabilizer_order,
                            s.fixed_set,
                            s.sample,
                            s.report.extension_label,
                            dims.join(" ")
                        )?;
                    }
                }
                _ => write!(w, "{}", r.render_table())?,
            }
            w.flush()?;
        }
        Command::CocycleCheck { graph, trials } => {
            let wg = load(graph)?;
            let r = cocycle_check(&wg.graph, &wg.weights, *trials, g.seed)?;
            let mut w = sink(&g.out)?;
            if g.format == Some(Format::Json) {
                emit_json(&mut w, &r)?;
            } else {
                writeln!(w, "trials {}  seed {}", r.trials, r.seed)?;
                writeln!(w, "conjugation      {}/{}", r.conjugation_passed, r.trials)?;
                writeln!(w, "composition      {}/{}", r.composition_passed, r.trials)?;
                writeln!(w, "cocycle          {}/{}", r.cocycle_passed, r.trials)?;
                writeln!(w, "tree compatible  {}/{}", r.tree_compatible_passed, r.trials)?;
                writeln!(w, "numeric          {}/{}  (max error {:.2e})", r.numeric_passed, r.trials, r.max_numeric_error)?;
                writeln!(w, "spectrum         {}/{}", r.spectrum_passed, r.trials)?;
            }
            w.flush()?;
            if !r.all_passed() {
                return Err(Failure::Check("re-gauging identities failed on some trials".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Validation => 2,
                ErrorKind::Numerical => 3,
                ErrorKind::Io => 4,
            })
        }
    }
}
