//! `hypercount`: exact and cluster-expansion counts of independent sets in
//! k-partite hypergraphs, plus instance generation and property checks.

use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use hypercount::cluster::{census, class_clusters, cluster_weight, estimate_count, truncated_log_xi};
use hypercount::closed_form::{closed_form_t1, closed_form_t2};
use hypercount::counting::{count_independent_sets, count_with_defect_class};
use hypercount::lab::{self, ExpansionScan, PropertyReport, Verdict};
use hypercount::numeric::{parse_rational, rational_to_f64};
use hypercount::polymer::{kp_sum, polymer_weight, PolymerModel};
use hypercount::report::{compare, Field, RunReport};
use hypercount::{io as hio, Budgets, Error, Hypergraph, Rational, VertexId};

#[derive(Parser)]
#[command(name = "hypercount", version, about = "Count independent sets in k-partite k-uniform hypergraphs")]
struct Cli {
    /// Hypergraph file (text or JSON); `-` reads standard input.
    #[arg(short, long, global = true, default_value = "-")]
    input: String,
    /// Emit JSON instead of key=value lines.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ClassBound {
    #[arg(long)]
    class: usize,
    #[arg(long)]
    b: usize,
}

#[derive(Args)]
struct ClassT {
    #[arg(long)]
    class: usize,
    #[arg(long)]
    t: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Exact number of independent sets.
    ExactCount,
    /// Independent sets whose trace on a class has Z₂-components of order at most b.
    DefectCount(ClassBound),
    /// Polymers of a class with their weights.
    Polymers {
        #[command(flatten)]
        cb: ClassBound,
        /// Only polymers containing this vertex, as `class:index`.
        #[arg(long)]
        root: Option<String>,
    },
    /// Exact polymer partition function.
    Xi(ClassBound),
    /// Kotecký–Preiss sum per vertex of a class.
    KpCheck {
        #[command(flatten)]
        cb: ClassBound,
        #[arg(long)]
        root: Option<String>,
    },
    /// Clusters of size at most t, grouped by size and length.
    Clusters(ClassT),
    /// Truncated cluster expansion of log Ξ.
    LogXiTrunc(ClassT),
    /// Log-domain estimate of the independent set count.
    Estimate {
        #[arg(long)]
        t: usize,
    },
    /// Closed-form estimates for linear regular hypergraphs.
    ClosedForm {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        t: u8,
        /// Parameters; when all three are given no input is read.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
    },
    /// Property checks.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Random linear regular hypergraph.
    Generate {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        min_girth: Option<usize>,
    },
    /// Exact count against the estimate and the closed forms.
    Compare {
        #[arg(long)]
        t: usize,
    },
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 3)]
    size_cap: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ScanArgs {
    fn scan(&self) -> ExpansionScan {
        ExpansionScan {
            size_cap: self.size_cap,
            samples: self.samples,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum CheckCommand {
    Reg {
        #[arg(long)]
        t: usize,
    },
    Exp1 {
        #[arg(long)]
        alpha: String,
        #[command(flatten)]
        scan: ScanArgs,
    },
    Exp2 {
        #[arg(long)]
        beta: String,
        #[command(flatten)]
        scan: ScanArgs,
    },
    Def {
        #[arg(long)]
        b: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Linear,
    Girth {
        #[arg(long, default_value_t = 5)]
        min_girth: usize,
    },
    CommonNeighbor,
}

/// Command output: a report, or a hypergraph for `generate`.
enum Output {
    Report(RunReport),
    Graph(Hypergraph),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    match run(&cli) {
        Ok(Output::Report(mut report)) => {
            report.timing("total", start.elapsed().as_secs_f64());
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("report serialises"));
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::SUCCESS
        }
        Ok(Output::Graph(g)) => {
            if cli.json {
                println!("{}", hio::to_json(&g));
            } else {
                print!("{}", hio::to_text(&g));
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Input(_) | Error::Parse { .. } => 2,
        Error::Budget(_) => 3,
        Error::Generation(_) => 4,
    }
}

fn load(path: &str) -> Result<Hypergraph, Error> {
    let text = if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Input(format!("reading stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Error::Input(format!("reading {path}: {e}")))?
    };
    hio::parse(&text)
}

fn parse_vertex(g: &Hypergraph, s: &str) -> Result<VertexId, Error> {
    let (c, i) = s
        .split_once(':')
        .and_then(|(c, i)| Some((c.parse().ok()?, i.parse().ok()?)))
        .ok_or_else(|| Error::Input(format!("bad vertex `{s}`, expected <class>:<index>")))?;
    let v = VertexId::new(c, i);
    g.global(v)?;
    Ok(v)
}

fn parse_param(name: &str, s: &str) -> Result<Rational, Error> {
    parse_rational(s).ok_or_else(|| Error::Input(format!("bad value for --{name}: `{s}`")))
}

fn check_class(g: &Hypergraph, class: usize) -> Result<(), Error> {
    if class >= g.k() {
        return Err(Error::Input(format!("class {class} out of range (k = {})", g.k())));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let budgets = Budgets::from_env();
    let closed_form_params = match &cli.command {
        Command::ClosedForm { k: Some(k), n: Some(n), r: Some(r), .. } => Some((*k, *n, *r)),
        _ => None,
    };
    if let Command::Generate { k, n, r, seed, min_girth } = &cli.command {
        return Ok(Output::Graph(lab::gen_linear_regular(*k, *n, *r, *seed, *min_girth)?));
    }
    let g = match closed_form_params {
        Some(_) => None,
        None => Some(load(&cli.input)?),
    };
    let mut report = RunReport::new(command_name(&cli.command));
    if let Some(g) = &g {
        report.digest = Some(hio::digest(g));
    }
    match &cli.command {
        Command::ExactCount => {
            let g = g.as_ref().expect("input loaded");
            let count = count_independent_sets(&g.to_edge_system());
            report.field("count", Field::Integer(count));
        }
        Command::DefectCount(cb) => {
            let g = g.as_ref().expect("input loaded");
            check_class(g, cb.class)?;
            report.param("class", cb.class).param("b", cb.b);
            let d = count_with_defect_class(g, cb.class, cb.b, budgets.enumeration_vertices)?;
            report.field("count", Field::Integer(d.count));
        }
        Command::Polymers { cb, root } => {
            let g = g.as_ref().expect("input loaded");
            check_class(g, cb.class)?;
            report.param("class", cb.class).param("b", cb.b);
            let root = match root {
                Some(s) => {
                    report.param("root", s);
                    Some(g.global(parse_vertex(g, s)?)?)
                }
                None => None,
            };
            let polymers = hypercount::polymer::enumerate_polymers(g, cb.class, cb.b, root)?;
            report.field("polymers", Field::Integer(polymers.len().into()));
            for (i, p) in polymers.iter().enumerate() {
                let vs: Vec<String> = g.vertex_ids(p.vertices()).iter().map(|v| v.to_string()).collect();
                report.field(format!("polymer.{i}.vertices"), Field::Text(vs.join(" ")));
                report.field(format!("polymer.{i}.weight"), Field::Exact(polymer_weight(g, p)));
            }
        }
        Command::Xi(cb) => {
            let g = g.as_ref().expect("input loaded");
            check_class(g, cb.class)?;
            report.param("class", cb.class).param("b", cb.b);
            let model = PolymerModel::with_cap(g, cb.class, cb.b, budgets.polymers)?;
            let xi = model.partition_function();
            report.field("polymers", Field::Integer(model.polymers().len().into()));
            report.field("xi", Field::Exact(xi.clone()));
            report.field("xi_ln", Field::Log(rational_to_f64(&xi).ln()));
        }
        Command::KpCheck { cb, root } => {
            let g = g.as_ref().expect("input loaded");
            check_class(g, cb.class)?;
            report.param("class", cb.class).param("b", cb.b);
            let roots: Vec<VertexId> = match root {
                Some(s) => {
                    let v = parse_vertex(g, s)?;
                    if v.class != cb.class {
                        return Err(Error::Input(format!("root {v} is not in class {}", cb.class)));
                    }
                    vec![v]
                }
                None => g.class_range(cb.class).map(|v| g.vertex_id(v)).collect(),
            };
            let mut all_hold = true;
            for v in roots {
                let kp = kp_sum(g, v, cb.b, budgets.polymers)?;
                all_hold &= kp.holds;
                report.field(format!("kp.{v}.lhs_upper"), Field::Float(kp.lhs.upper_f64()));
                report.field(format!("kp.{v}.rhs"), Field::Exact(kp.rhs.clone()));
                report.field(format!("kp.{v}.holds"), Field::Text(kp.holds.to_string()));
            }
            report.field("holds", Field::Text(all_hold.to_string()));
        }
        Command::Clusters(ct) => {
            let g = g.as_ref().expect("input loaded");
            check_class(g, ct.class)?;
            report.param("class", ct.class).param("t", ct.t);
            let (model, clusters) = class_clusters(g, ct.class, ct.t, &budgets)?;
            report.field("polymers", Field::Integer(model.polymers().len().into()));
            report.field("clusters", Field::Integer(clusters.len().into()));
            for ((size, length), (multisets, ordered)) in census(&clusters) {
                report.field(format!("size{size}.length{length}.multisets"), Field::Integer(multisets.into()));
                report.field(format!("size{size}.length{length}.ordered"), Field::Integer(ordered));
            }
            let mut total = Rational::from_integer(0.into());
            for c in &clusters {
                total += cluster_weight(&model, c, budgets.ursell_vertices)?
                    * Rational::from_integer(c.ordering_count().clone().into());
            }
            report.field("weight_sum", Field::Exact(total));
        }
        Command::LogXiTrunc(ct) => {
            let g = g.as_ref().expect("input loaded");
            check_class(g, ct.class)?;
            report.param("class", ct.class).param("t", ct.t);
            let v = truncated_log_xi(g, ct.class, ct.t, &budgets)?;
            report.field("log_xi_trunc", Field::Exact(v.clone()));
            report.field("log_xi_trunc_float", Field::Float(rational_to_f64(&v)));
        }
        Command::Estimate { t } => {
            let g = g.as_ref().expect("input loaded");
            report.param("t", t);
            let e = estimate_count(g, *t, &budgets)?;
            for (z, x) in e.exponents.iter().enumerate() {
                report.field(format!("exponent.{z}"), Field::Exact(x.clone()));
            }
            report.field("estimate_ln", Field::Log(e.value.ln()));
        }
        Command::ClosedForm { t, .. } => {
            let (k, n, r) = match closed_form_params {
                Some(p) => p,
                None => {
                    let g = g.as_ref().expect("input loaded");
                    let r = g
                        .regular_degree()
                        .ok_or_else(|| Error::Input("closed forms need a regular hypergraph".into()))?;
                    if !g.has_equal_class_sizes() {
                        return Err(Error::Input("closed forms need equal class sizes".into()));
                    }
                    (g.k(), g.class_size(0), r)
                }
            };
            report.param("t", t).param("k", k).param("n", n).param("r", r);
            if *t == 1 {
                let c = closed_form_t1(k, n, r)?;
                report.field("exponent", Field::Exact(c.exponent));
                report.field("estimate_ln", Field::Log(c.log_value));
            } else {
                let c = closed_form_t2(k, n, r)?;
                report.field("printed.exponent", Field::Exact(c.printed.exponent));
                report.field("printed.estimate_ln", Field::Log(c.printed.log_value));
                report.field("corrected.exponent", Field::Exact(c.corrected.exponent));
                report.field("corrected.estimate_ln", Field::Log(c.corrected.log_value));
                report.field("delta", Field::Exact(c.delta));
            }
        }
        Command::Check(check) => {
            let g = g.as_ref().expect("input loaded");
            let rep = match check {
                CheckCommand::Reg { t } => lab::check_reg(g, *t)?,
                CheckCommand::Exp1 { alpha, scan } => lab::check_exp1(g, &parse_param("alpha", alpha)?, &scan.scan())?,
                CheckCommand::Exp2 { beta, scan } => lab::check_exp2(g, &parse_param("beta", beta)?, &scan.scan())?,
                CheckCommand::Def { b, seed } => lab::check_def(g, *b, budgets.enumeration_vertices, *seed)?,
                CheckCommand::Linear => lab::check_linear(g),
                CheckCommand::Girth { min_girth } => lab::check_girth(g, *min_girth, budgets.girth_nodes)?,
                CheckCommand::CommonNeighbor => lab::check_common_neighbor(g),
            };
            fill_property(&mut report, &rep);
        }
        Command::Compare { t } => {
            let g = g.as_ref().expect("input loaded");
            report.param("t", t);
            compare(g, *t, &budgets)?.fill(&mut report);
        }
        Command::Generate { .. } => unreachable!("handled above"),
    }
    Ok(Output::Report(report))
}

fn fill_property(report: &mut RunReport, rep: &PropertyReport) {
    for (k, v) in &rep.params {
        report.param(k, v);
    }
    report.field("property", Field::Text(rep.name.clone()));
    report.field("verdict", Field::Text(rep.verdict.label().to_string()));
    if let Some(w) = rep.worst_ratio {
        report.field("worst_ratio", Field::Float(w));
    }
    match &rep.verdict {
        Verdict::Violated(w) => {
            let vs: Vec<String> = w.vertices.iter().map(|v| v.to_string()).collect();
            report.field("witness", Field::Text(vs.join(" ")));
            report.field("detail", Field::Text(w.detail.clone()));
        }
        Verdict::Unknown { reason } => {
            report.field("reason", Field::Text(reason.clone()));
        }
        Verdict::Holds => {}
    }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::ExactCount => "exact-count".into(),
        Command::DefectCount(_) => "defect-count".into(),
        Command::Polymers { .. } => "polymers".into(),
        Command::Xi(_) => "xi".into(),
        Command::KpCheck { .. } => "kp-check".into(),
        Command::Clusters(_) => "clusters".into(),
        Command::LogXiTrunc(_) => "log-xi-trunc".into(),
        Command::Estimate { .. } => "estimate".into(),
        Command::ClosedForm { .. } => "closed-form".into(),
        Command::Check(c) => format!(
            "check {}",
            match c {
                CheckCommand::Reg { .. } => "reg",
                CheckCommand::Exp1 { .. } => "exp1",
                CheckCommand::Exp2 { .. } => "exp2",
                CheckCommand::Def { .. } => "def",
                CheckCommand::Linear => "linear",
                CheckCommand::Girth { .. } => "girth",
                CheckCommand::CommonNeighbor => "common-neighbor",
            }
        ),
        Command::Generate { .. } => "generate".into(),
        Command::Compare { .. } => "compare".into(),
    }
}
