use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crcodes::codefile::{parse_design_header, read_code_any, read_design, write_code, write_code_any, write_design};
use crcodes::constructions::{
    avoid_code, desarguesian_2spread, extended_hamming_sqs, hyperplane_code, hyperplane_point_code, symplectic_code,
    unit_vector, Design,
};
use crcodes::graphs::{AnyGraph, Family, Graph, GraphSpec};
use crcodes::orbit_bip::{
    centralizer_coarsenings, export_lp, export_opb, feasible_parameters, frobenius_permutation, lift_code, orbits,
    quotient_matrix, singer_permutation, sweep, BipInstance, Budget, GroupAction, Mode, Portfolio, Status,
};
use crcodes::galois::FieldSpec;
use crcodes::subspaces::{Lattice, SubsetLattice, SubspaceLattice};
use crcodes::verify::{verify, Code, Report};
use crcodes::{Error, Result};

const EXIT_REFUTED: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "crcodes", version, about = "Completely regular codes in Johnson and Grassmann graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the eigenvalues theta_i of a graph.
    Eigenvalues {
        /// `j:n,k` or `jq:q,n,k`
        #[arg(long)]
        graph: GraphSpec,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a design or a code and write it in the text format.
    Construct(ConstructArgs),
    /// Check a code file for complete regularity; prints a JSON report.
    Verify {
        /// Code file as written by `construct` or `search`.
        file: PathBuf,
        /// Must agree with the file header when given.
        #[arg(long)]
        graph: Option<GraphSpec>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for covering radius one codes that are unions of group orbits.
    Search(SearchArgs),
    /// The table of covering radius one codes in J_2(6,3).
    Table1 {
        /// JSON output of an earlier `search` run to take verdicts from.
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Opb,
    Lp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    /// Desarguesian 2-spread of GF(q)^n (design).
    Spread,
    /// Quadruple system of the extended Hamming code of length 2^m (design).
    Sqs,
    /// Vertices containing no block of a design.
    Avoid,
    /// Totally isotropic subspaces of the standard symplectic form.
    Symplectic,
    /// Subspaces inside the hyperplane x_1 = 0.
    Hyperplane,
    /// Subspaces inside x_1 = 0 or containing e_1.
    HyperplanePoint,
}

#[derive(Args)]
struct ConstructArgs {
    kind: Kind,
    /// Ambient graph, for code constructions.
    #[arg(long)]
    graph: Option<GraphSpec>,
    /// Field order for `spread`.
    #[arg(long)]
    q: Option<u64>,
    /// Dimension for `spread`.
    #[arg(long)]
    n: Option<u32>,
    /// Hamming parameter for `sqs`.
    #[arg(long)]
    m: Option<u32>,
    /// For `avoid`: `spread`, `sqs` or a design file.
    #[arg(long)]
    design: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    graph: GraphSpec,
    /// `identity` or a comma-separated list of `singer:<e>` and `frobenius:<f>`.
    #[arg(long, default_value = "identity")]
    group: String,
    /// Eigenvalue `m - beta_0 - gamma_1`; alone it sweeps the whole row.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<i64>,
    #[arg(long)]
    gamma1: Option<u64>,
    #[arg(long)]
    beta0: Option<u64>,
    #[arg(long, default_value = "first")]
    mode: Mode,
    #[arg(long)]
    max_nodes: Option<u64>,
    #[arg(long)]
    max_seconds: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    jobs: Option<usize>,
    /// Coarsenings from larger groups searched alongside the full system
    /// (Singer groups only; 0 disables them).
    #[arg(long, default_value_t = 64)]
    coarsenings: usize,
    /// Largest per-round node budget of a coarsening before it is retired.
    #[arg(long, default_value_t = 1_000_000)]
    coarse_nodes: u64,
    /// Directory for solution code files.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Unsupported(msg.into())
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

#[derive(Serialize)]
struct EigenRow {
    i: u32,
    theta: i64,
    multiplicity: String,
}

fn cmd_eigenvalues(spec: GraphSpec, format: Format, out: Option<&Path>) -> Result<u8> {
    let rows: Vec<EigenRow> = (0..=spec.k.min(spec.n - spec.k))
        .map(|i| {
            Ok(EigenRow {
                i,
                theta: spec.theta(i)? as i64,
                multiplicity: spec.multiplicity(i).to_string(),
            })
        })
        .collect::<Result<_>>()?;
    let text = match format {
        Format::Json => json(&serde_json::json!({ "graph": spec, "eigenvalues": rows })),
        Format::Csv => rows.iter().fold("i,theta,multiplicity\n".to_string(), |mut s, r| {
            writeln!(s, "{},{},{}", r.i, r.theta, r.multiplicity).unwrap();
            s
        }),
        Format::Text => rows.iter().fold(format!("{spec}\n  i  theta  multiplicity\n"), |mut s, r| {
            writeln!(s, "{:>3}  {:>5}  {}", r.i, r.theta, r.multiplicity).unwrap();
            s
        }),
        Format::Opb | Format::Lp => return Err(usage("eigenvalues support text, json and csv")),
    };
    emit(out, &text)?;
    Ok(0)
}

fn grassmann(spec: Option<GraphSpec>) -> Result<Graph<SubspaceLattice>> {
    let spec = spec.ok_or_else(|| usage("--graph is required"))?;
    if spec.family != Family::Grassmann {
        return Err(usage(format!("{spec} is not a Grassmann graph")));
    }
    Graph::grassmann(spec.q, spec.n, spec.k)
}

fn cmd_construct(a: &ConstructArgs) -> Result<u8> {
    let out = a.out.as_deref();
    let text = match a.kind {
        Kind::Spread => {
            let (q, n) = (a.q.unwrap_or(2), a.n.ok_or_else(|| usage("spread needs --n"))?);
            let lattice = SubspaceLattice::new(q, n as usize)?;
            write_design(&lattice, &desarguesian_2spread(&lattice)?)
        }
        Kind::Sqs => {
            let m = a.m.ok_or_else(|| usage("sqs needs --m"))?;
            let lattice = SubsetLattice::new(1 << m)?;
            write_design(&lattice, &extended_hamming_sqs(m)?)
        }
        Kind::Avoid => {
            let spec = a.graph.ok_or_else(|| usage("avoid needs --graph"))?;
            let source = a.design.as_deref().unwrap_or("spread");
            match AnyGraph::build(spec)? {
                AnyGraph::Grassmann(g) => {
                    let design = match source {
                        "spread" => desarguesian_2spread(g.lattice())?,
                        "sqs" => return Err(usage("sqs designs live in Johnson graphs")),
                        path => read_design(g.lattice(), &read(Path::new(path))?)?,
                    };
                    avoid_text(&g, &design, source)?
                }
                AnyGraph::Johnson(g) => {
                    let design = match source {
                        "sqs" => {
                            let m = spec.n.trailing_zeros();
                            if spec.n != 1 << m {
                                return Err(usage("the quadruple system needs n = 2^m"));
                            }
                            extended_hamming_sqs(m)?
                        }
                        "spread" => return Err(usage("spreads live in Grassmann graphs")),
                        path => {
                            let text = read(Path::new(path))?;
                            if parse_design_header(&text)?.q != 1 {
                                return Err(usage("a design of subspaces cannot index a Johnson graph"));
                            }
                            read_design(g.lattice(), &text)?
                        }
                    };
                    avoid_text(&g, &design, source)?
                }
            }
        }
        Kind::Symplectic => {
            let g = grassmann(a.graph)?;
            write_code(&g, &symplectic_code(&g)?)?
        }
        Kind::Hyperplane => {
            let g = grassmann(a.graph)?;
            let h = unit_vector(g.lattice());
            write_code(&g, &hyperplane_code(&g, h)?)?
        }
        Kind::HyperplanePoint => {
            let g = grassmann(a.graph)?;
            let h = unit_vector(g.lattice());
            write_code(&g, &hyperplane_point_code(&g, h, h)?)?
        }
    };
    emit(out, &text)?;
    Ok(0)
}

fn avoid_text<L: Lattice>(g: &Graph<L>, design: &Design<L::Elem>, source: &str) -> Result<String> {
    let code = avoid_code(g, design)?.with_label(format!("avoid {source}"));
    write_code(g, &code)
}

fn verify_any(graph: &AnyGraph, code: &Code) -> Result<Report> {
    match graph {
        AnyGraph::Johnson(g) => verify(g, code),
        AnyGraph::Grassmann(g) => verify(g, code),
    }
}

fn cmd_verify(file: &Path, graph: Option<GraphSpec>, out: Option<&Path>) -> Result<u8> {
    let text = read(file)?;
    let header = crcodes::codefile::parse_code_header(&text)?;
    if let Some(spec) = graph {
        if spec != header.spec {
            return Err(usage(format!("--graph {spec} but the file is for {}", header.spec)));
        }
    }
    let g = AnyGraph::build(header.spec)?;
    let code = read_code_any(&g, &text)?;
    let report = verify_any(&g, &code)?;
    emit(out, &(report.to_json() + "\n"))?;
    Ok(if report.passed() { 0 } else { EXIT_REFUTED })
}

/// The group named by `--group` together with the Singer exponent when the
/// group is a single Singer subgroup.
fn parse_group(g: &AnyGraph, text: &str) -> Result<(GroupAction, Option<u64>)> {
    let spec = g.spec();
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts == ["identity"] {
        let action = match g {
            AnyGraph::Johnson(g) => GroupAction::trivial(g, spec),
            AnyGraph::Grassmann(g) => GroupAction::trivial(g, spec),
        };
        return Ok((action, None));
    }
    let AnyGraph::Grassmann(graph) = g else {
        return Err(usage("Singer and Frobenius maps act on Grassmann graphs only"));
    };
    let field = FieldSpec::new(spec.q as u32, spec.n, None)?;
    let mut gens = Vec::new();
    let mut singer = None;
    for p in &parts {
        let (name, arg) = p.split_once(':').ok_or_else(|| usage(format!("group element {p:?}")))?;
        let arg: u64 = arg.parse().map_err(|_| usage(format!("group element {p:?}")))?;
        gens.push(match name {
            "singer" => {
                singer = Some(arg);
                singer_permutation(graph, &field, arg)?
            }
            "frobenius" => frobenius_permutation(graph, &field, arg as u32)?,
            _ => return Err(usage(format!("unknown group element {name:?}"))),
        });
    }
    let action = GroupAction::new(graph, spec, gens, text)?;
    Ok((action, if parts.len() == 1 { singer } else { None }))
}

#[derive(Serialize)]
struct SearchRow {
    theta: i64,
    beta0: u64,
    gamma1: u64,
    status: String,
    verdict: String,
    nodes: u64,
    solutions: u64,
    via: Option<String>,
    verified: Option<bool>,
    files: Vec<String>,
}

#[derive(Serialize)]
struct SearchReport {
    graph: GraphSpec,
    group: String,
    orbits: usize,
    mode: Mode,
    results: Vec<SearchRow>,
}

fn parameter_pairs(spec: GraphSpec, a: &SearchArgs) -> Result<Vec<(u64, u64)>> {
    let m = spec.valency() as i64;
    match (a.theta, a.beta0, a.gamma1) {
        (_, Some(b), Some(g)) => {
            if a.theta.is_some_and(|t| t != m - (b + g) as i64) {
                return Err(usage("--theta disagrees with --beta0 and --gamma1"));
            }
            Ok(vec![(b, g)])
        }
        (Some(t), None, Some(g)) => {
            let b = m - t - g as i64;
            if b < 1 {
                return Err(usage(format!("gamma_1 = {g} leaves beta_0 = {b}")));
            }
            Ok(vec![(b as u64, g)])
        }
        (Some(t), None, None) => {
            let row = feasible_parameters(spec)
                .into_iter()
                .find(|r| r.theta == t)
                .ok_or_else(|| usage(format!("{t} is not an eigenvalue theta_i, i >= 1, of {spec}")))?;
            let s = row.sum(spec.valency());
            Ok((1..=s / 2).map(|g| (s - g, g)).collect())
        }
        _ => Err(usage("give --theta, or --gamma1 with --theta or --beta0")),
    }
}

fn cmd_search(a: &SearchArgs) -> Result<u8> {
    let spec = a.graph;
    let g = AnyGraph::build(spec)?;
    let (action, singer) = parse_group(&g, &a.group)?;
    let orbit_system = orbits(&action);
    let quotient = match &g {
        AnyGraph::Johnson(g) => quotient_matrix(g, &orbit_system)?,
        AnyGraph::Grassmann(g) => quotient_matrix(g, &orbit_system)?,
    };
    let sizes = orbit_system.sizes();
    let pairs = parameter_pairs(spec, a)?;

    if matches!(a.format, Format::Opb | Format::Lp) {
        let [(b, gm)] = pairs[..] else {
            return Err(usage("opb and lp export one parameter pair; give --gamma1"));
        };
        let inst = BipInstance::new(quotient, sizes, b, gm)?;
        let text = if a.format == Format::Opb { export_opb(&inst) } else { export_lp(&inst) };
        emit(a.out.as_deref(), &text)?;
        return Ok(0);
    }

    let portfolio = match (&g, singer) {
        (AnyGraph::Grassmann(graph), Some(e)) if a.coarsenings > 0 => Portfolio {
            coarsenings: centralizer_coarsenings(graph, e, a.coarsenings, a.seed)?,
            nodes_each: a.coarse_nodes,
        },
        _ => Portfolio::default(),
    };
    let budget = Budget {
        max_nodes: a.max_nodes,
        max_time: a.max_seconds.map(Duration::from_secs),
        seed: a.seed,
    };
    let results = sweep(&quotient, &sizes, spec, &pairs, a.mode, &budget, &portfolio, a.jobs)?;

    if let Some(dir) = &a.out {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    }
    let mut rows = Vec::new();
    for r in results {
        let mut row = SearchRow {
            theta: r.theta,
            beta0: r.beta0,
            gamma1: r.gamma1,
            status: "REJECTED".into(),
            verdict: "excluded by the integer conditions".into(),
            nodes: 0,
            solutions: 0,
            via: None,
            verified: None,
            files: Vec::new(),
        };
        if let Some(o) = r.outcome {
            row.status = o.status.to_string();
            row.verdict = match o.status {
                Status::Sat => format!("{}-invariant code found", a.group),
                Status::Unsat => format!("no {}-invariant code", a.group),
                Status::BudgetExceeded => "undecided within the budget".into(),
            };
            row.nodes = o.nodes;
            row.solutions = o.count;
            row.via = o.via;
            if !o.solutions.is_empty() {
                let mut all_ok = true;
                for (idx, x) in o.solutions.iter().enumerate() {
                    let code = lift_code(x, &orbit_system, spec)?
                        .with_label(format!("{} {{{}; {}}}", a.group, r.beta0, r.gamma1));
                    let report = verify_any(&g, &code)?;
                    all_ok &= report.passed()
                        && report.rho == 1
                        && report.beta == Some(vec![r.beta0])
                        && report.gamma == Some(vec![r.gamma1]);
                    if let Some(dir) = &a.out {
                        let path = dir.join(format!("gamma{}_{idx}.code", r.gamma1));
                        emit(Some(&path), &write_code_any(&g, &code)?)?;
                        row.files.push(path.display().to_string());
                    }
                }
                row.verified = Some(all_ok);
            }
        }
        rows.push(row);
    }
    let exit = if rows.iter().any(|r| r.verified == Some(false)) {
        EXIT_REFUTED
    } else if rows.iter().any(|r| r.status == "BUDGET_EXCEEDED") {
        EXIT_BUDGET
    } else if rows.iter().any(|r| r.status == "SAT") {
        0
    } else {
        EXIT_REFUTED
    };
    let text = match a.format {
        Format::Csv => rows.iter().fold(
            "theta,beta0,gamma1,status,nodes,solutions,verified\n".to_string(),
            |mut s, r| {
                let v = r.verified.map_or(String::new(), |v| v.to_string());
                writeln!(s, "{},{},{},{},{},{},{v}", r.theta, r.beta0, r.gamma1, r.status, r.nodes, r.solutions).unwrap();
                s
            },
        ),
        Format::Text => rows.iter().fold(String::new(), |mut s, r| {
            writeln!(s, "theta={} {{{}; {}}}: {} ({})", r.theta, r.beta0, r.gamma1, r.status, r.verdict).unwrap();
            s
        }),
        _ => json(&SearchReport {
            graph: spec,
            group: a.group.clone(),
            orbits: orbit_system.len(),
            mode: a.mode,
            results: rows,
        }),
    };
    // solution files go to --out, so the report itself goes to stdout
    print!("{text}");
    Ok(exit)
}

#[derive(Serialize)]
struct Construction {
    gamma1: u64,
    tag: String,
    description: String,
    verified: bool,
}

#[derive(Serialize)]
struct TableRow {
    theta: i64,
    strength: u32,
    sum: u64,
    modulus: u64,
    rejected: Vec<u64>,
    constructions: Vec<Construction>,
    note: Option<String>,
    search: BTreeMap<String, Vec<u64>>,
}

/// Verifies a construction and reads off `gamma_1`, optionally of the
/// complement.
fn known(g: &Graph<SubspaceLattice>, code: Code, tag: &str, description: &str, complement: bool) -> Result<Construction> {
    let code = if complement { code.complement() } else { code };
    let report = verify(g, &code)?;
    let ok = report.passed() && report.rho == 1;
    Ok(Construction {
        gamma1: report.gamma.as_ref().map_or(0, |v| v[0]),
        tag: tag.into(),
        description: description.into(),
        verified: ok,
    })
}

fn cmd_table1(cache: Option<&Path>, format: Format, out: Option<&Path>) -> Result<u8> {
    let spec = GraphSpec::grassmann(2, 6, 3)?;
    let g = Graph::grassmann(2, 6, 3)?;
    let h = unit_vector(g.lattice());
    let cached: Vec<(u64, u64, String)> = match cache {
        Some(p) => {
            let v: serde_json::Value =
                serde_json::from_str(&read(p)?).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
            v["results"]
                .as_array()
                .ok_or_else(|| Error::Parse("search report without results".into()))?
                .iter()
                .filter_map(|r| {
                    Some((r["beta0"].as_u64()?, r["gamma1"].as_u64()?, r["status"].as_str()?.to_string()))
                })
                .collect()
        }
        None => Vec::new(),
    };
    let mut rows = Vec::new();
    for p in feasible_parameters(spec) {
        let s = p.sum(spec.valency());
        let modulus = p.feasible.iter().fold(0, |a, &b| gcd(a, b));
        let (constructions, note) = match p.theta {
            35 => (
                vec![
                    known(&g, hyperplane_code(&g, h)?, "H", "subspaces of a hyperplane", false)?,
                    known(&g, hyperplane_point_code(&g, h, h)?, "HP", "in a hyperplane or through a point outside", false)?,
                ],
                None,
            ),
            5 => (
                vec![
                    known(&g, symplectic_code(&g)?, "M", "totally isotropic subspaces", false)?,
                    known(
                        &g,
                        avoid_code(&g, &desarguesian_2spread(g.lattice())?)?,
                        "M'",
                        "subspaces containing no spread line",
                        false,
                    )?,
                ],
                None,
            ),
            _ => (Vec::new(), Some("2-designs; constructions out of scope".to_string())),
        };
        let mut search: BTreeMap<String, Vec<u64>> = BTreeMap::new();
        for (b, gm, status) in &cached {
            if b + gm == s {
                search.entry(status.clone()).or_default().push(*gm);
            }
        }
        rows.push(TableRow {
            theta: p.theta,
            strength: p.strength,
            sum: s,
            modulus,
            rejected: p.rejected,
            constructions,
            note,
            search,
        });
    }
    let ok = rows.iter().all(|r| r.constructions.iter().all(|c| c.verified));
    let text = match format {
        Format::Json => json(&serde_json::json!({ "graph": spec, "rows": rows })),
        Format::Csv => {
            let mut s = "theta,strength,beta0_plus_gamma1,gamma1_modulus,constructions,search\n".to_string();
            for r in &rows {
                writeln!(s, "{},{},{},{},{},{}", r.theta, r.strength, r.sum, r.modulus, cons_text(r), search_text(r)).unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = format!("Covering radius one completely regular codes in {spec}\n");
            for r in &rows {
                writeln!(s, "\ntheta = {}  strength {}  beta_0 + gamma_1 = {}", r.theta, r.strength, r.sum).unwrap();
                writeln!(s, "  integer conditions: gamma_1 = 0 mod {}", r.modulus).unwrap();
                writeln!(s, "  constructions:      {}", cons_text(r)).unwrap();
                writeln!(s, "  search:             {}", search_text(r)).unwrap();
            }
            s
        }
        Format::Opb | Format::Lp => return Err(usage("table1 supports text, json and csv")),
    };
    emit(out, &text)?;
    Ok(if ok { 0 } else { EXIT_REFUTED })
}

fn cons_text(r: &TableRow) -> String {
    if let Some(n) = &r.note {
        return n.clone();
    }
    let parts: Vec<String> = r
        .constructions
        .iter()
        .map(|c| format!("{}^{} ({})", c.gamma1, c.tag, if c.verified { "verified" } else { "FAILED" }))
        .collect();
    parts.join(" ")
}

fn search_text(r: &TableRow) -> String {
    if r.search.is_empty() {
        return "no cached run".into();
    }
    let parts: Vec<String> = r
        .search
        .iter()
        .map(|(k, v)| {
            let list: Vec<String> = v.iter().map(u64::to_string).collect();
            format!("{k} {}", list.join(","))
        })
        .collect();
    parts.join("; ")
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Eigenvalues { graph, format, out } => cmd_eigenvalues(graph, format, out.as_deref()),
        Command::Construct(a) => cmd_construct(&a),
        Command::Verify { file, graph, out } => cmd_verify(&file, graph, out.as_deref()),
        Command::Search(a) => cmd_search(&a),
        Command::Table1 { cache, format, out } => cmd_table1(cache.as_deref(), format, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("crcodes: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
