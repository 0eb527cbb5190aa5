use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use pebblebound::harness::{
    self, bound_for, load_profiles, render_report, reproduce, to_interchange, ProfileResolver, ReproduceOptions,
    ResultsCache, REPORT_KIND, REPRODUCE_KIND,
};
use pebblebound::model::{assemble_model, ConstraintEnumerationPolicy};
use pebblebound::oracle::{pebbling_number, two_pebbling_tables};
use pebblebound::reference;
use pebblebound::search::{SearchOptions, DEFAULT_SCHEDULE};
use pebblebound::solver::{debug_listing, probe_backends, select_backend, write_lp, SolverKind, SOLVER_ENV};
use pebblebound::{catalog_graph, HarnessError, OracleError, OracleOptions, SearchError, SolverError};

const EXIT_CONFIG: u8 = 2;
const EXIT_SOLVER: u8 = 3;
const EXIT_ORACLE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "pebblebound",
    version,
    about = "Integer-programming upper bounds for pebbling numbers of graph products"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// MILP backend: gurobi, highs, scip or cbc.
    #[arg(long, global = true, env = SOLVER_ENV)]
    solver: Option<String>,
    /// Scratch, cache and report directory.
    #[arg(long, global = true)]
    workdir: Option<PathBuf>,
    /// Concurrent solves (bound) or table rows (reproduce).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Constraint enumeration policy document.
    #[arg(long, global = true)]
    policy_file: Option<PathBuf>,
    /// Profile document whose entries replace computed profiles.
    #[arg(long, global = true)]
    profile_override: Vec<PathBuf>,
    /// Wall-clock seconds for a search (bound) or each row (reproduce).
    #[arg(long, global = true)]
    time_budget: Option<f64>,
    /// Comma-separated relative gaps, e.g. 0.1,0.05,0.
    #[arg(long, global = true, value_delimiter = ',')]
    gap_schedule: Option<Vec<f64>>,
    /// State cap per oracle call.
    #[arg(long, global = true)]
    oracle_budget: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Pebbling number with a largest unsolvable configuration.
    Pi { graph: String },
    /// 2-pebbling and monotone 2-pebbling tables.
    Twopeb { graph: String },
    /// Upper bound on the pebbling number of G □ H.
    Bound {
        g: String,
        h: String,
        /// Use the published base-graph profiles instead of the oracle.
        #[arg(long)]
        published_profiles: bool,
        /// Where to write the search report.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Keep per-solve LP and log files under the workdir.
        #[arg(long)]
        keep_files: bool,
    },
    /// Recompute a published table (3 to 8) and compare.
    Reproduce {
        table: u8,
        /// Only these rows, e.g. LxK44.
        #[arg(long, value_delimiter = ',')]
        rows: Option<Vec<String>>,
        /// Also attempt rows whose published run failed.
        #[arg(long)]
        attempt_failed: bool,
        /// Where to write the comparison report.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write the LP for one root.
    EmitLp {
        g: String,
        h: String,
        /// Output path.
        path: PathBuf,
        /// 1-based root, e.g. 1,1.
        #[arg(long, default_value = "1,1", value_parser = parse_root)]
        root: (usize, usize),
        #[arg(long)]
        published_profiles: bool,
        /// Also write a label-to-family listing here.
        #[arg(long)]
        listing: Option<PathBuf>,
    },
    /// List installed MILP backends.
    ProbeSolvers,
}

#[derive(Debug)]
enum CliError {
    Config(String),
    Solver(String),
    Oracle(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Solver(_) => EXIT_SOLVER,
            CliError::Oracle(_) => EXIT_ORACLE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Solver(m) => write!(f, "solver error: {m}"),
            CliError::Oracle(m) => write!(
                f,
                "oracle error: {m}\nhint: raise --oracle-budget or supply the profile with --profile-override"
            ),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Invalid(_) => CliError::Config(e.to_string()),
            _ => CliError::Oracle(e.to_string()),
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::UnknownSolver(_) | SolverError::BadGap(_) | SolverError::Model(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Solver(e.to_string()),
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Solve { .. } => CliError::Solver(e.to_string()),
            SearchError::Solver(s) => s.into(),
            SearchError::Model(m) => CliError::Config(m.to_string()),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Oracle(o) => o.into(),
            HarnessError::Search(s) => s.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}

fn parse_root(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected i,j")?;
    let p = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok((p(a)?, p(b)?))
}

fn config<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Config(e.to_string())
}

impl Global {
    fn oracle(&self) -> OracleOptions {
        let mut o = OracleOptions::default();
        if let Some(b) = self.oracle_budget {
            o.budget = b;
        }
        o
    }

    fn budget(&self) -> Result<Option<Duration>, CliError> {
        self.time_budget
            .map(|s| Duration::try_from_secs_f64(s).map_err(|_| config(format!("bad --time-budget {s}"))))
            .transpose()
    }

    fn policy(&self) -> Result<ConstraintEnumerationPolicy, CliError> {
        match &self.policy_file {
            None => Ok(Default::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| config(format!("{}: {e}", p.display())))?;
                Ok(harness::from_interchange("policy", &text, &p.display().to_string())?)
            }
        }
    }

    fn resolver(&self, published_profiles: bool) -> Result<ProfileResolver, CliError> {
        let mut r = if published_profiles {
            ProfileResolver::with_published_profiles()
        } else {
            ProfileResolver::default()
        };
        r.oracle = self.oracle();
        r.cache_dir = self.workdir.clone();
        for path in &self.profile_override {
            for p in load_profiles(path)? {
                r.add_override(p);
            }
        }
        Ok(r)
    }

    fn search(&self) -> Result<SearchOptions, CliError> {
        let solver = select_backend(self.solver.as_deref())?;
        let mut o = SearchOptions::new(solver);
        if let Some(s) = &self.gap_schedule {
            o.schedule = s.clone();
        }
        o.jobs = self.jobs.max(1);
        o.workdir = self.workdir.as_ref().map(|w| w.join("solves"));
        if let Some(w) = &o.workdir {
            std::fs::create_dir_all(w).map_err(|e| config(format!("{}: {e}", w.display())))?;
        }
        Ok(o)
    }

    fn cache(&self) -> Option<ResultsCache> {
        self.workdir.as_ref().map(ResultsCache::new)
    }
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_pi(global: &Global, name: &str) -> Result<(), CliError> {
    let g = catalog_graph(name).map_err(config)?;
    let start = Instant::now();
    let pn = pebbling_number(&g, &global.oracle())?;
    println!(
        "graph      {} ({} vertices, {} edges)",
        g.name(),
        g.vertex_count(),
        g.edge_count()
    );
    println!("pi         {}", pn.pi);
    println!(
        "witness    root {}: {} pebbles unsolvable, counts [{}]",
        pn.witness.root + 1,
        pn.witness.configuration.size(),
        join(pn.witness.configuration.counts())
    );
    println!("states     {}", pn.explored);
    println!("seconds    {:.3}", start.elapsed().as_secs_f64());
    Ok(())
}

fn cmd_twopeb(global: &Global, name: &str) -> Result<(), CliError> {
    let g = catalog_graph(name).map_err(config)?;
    let start = Instant::now();
    let p = two_pebbling_tables(&g, &global.oracle())?;
    let n = p.vertex_count;
    println!("graph      {} (pi = {})", p.name, p.pi);
    println!("s          {}", join(1..=n));
    println!("pi2        {}", join((1..=n).map(|s| p.pi2(s))));
    println!("pi2_mon    {}", join((1..=n).map(|s| p.pi2_mon(s))));
    println!("2pi-s+1    {}", join((1..=n).map(|s| p.baseline(s))));
    println!("diff       {}", join((1..=n).map(|s| p.difference(s))));
    println!("diff_mon   {}", join((1..=n).map(|s| p.difference_mon(s))));
    println!(
        "U          {{{}}}",
        p.u_set().iter().map(usize::to_string).collect::<Vec<_>>().join(", ")
    );
    println!(
        "U_mon      {{{}}}",
        p.u_mon_set()
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    );
    println!(
        "2-pebbling property: {}",
        if p.has_two_pebbling_property() { "yes" } else { "no" }
    );
    println!("seconds    {:.3}", start.elapsed().as_secs_f64());
    Ok(())
}

fn write_out(path: &Path, text: &str) -> Result<(), CliError> {
    harness::write_file(path, text).map_err(CliError::from)
}

fn cmd_bound(
    global: &Global,
    g: &str,
    h: &str,
    published_profiles: bool,
    report_path: Option<&Path>,
    keep_files: bool,
) -> Result<(), CliError> {
    let resolver = global.resolver(published_profiles)?;
    let inst = resolver.instance(g, h)?;
    let policy = global.policy()?;
    let mut opts = global.search()?;
    opts.budget = global.budget()?;
    opts.keep_files = keep_files;
    let cache = global.cache();
    let (rep, cached) = bound_for(&inst, &policy, &opts, cache.as_ref())?;
    for s in &rep.log {
        println!(
            "root ({},{}) gap {:<5} n {:>6} u {:>6} {:>8.1}s {:?}",
            s.root.0,
            s.root.1,
            s.gap,
            s.n.map_or("-".into(), |v| v.to_string()),
            s.u.map_or("-".into(), |v| v.to_string()),
            s.seconds,
            s.status
        );
    }
    let graham = inst.g.pi() * inst.h.pi();
    println!("product    {}", rep.instance);
    println!("solver     {}{}", rep.solver, if cached { " (cached)" } else { "" });
    println!(
        "bound      {}{}",
        rep.final_bound,
        if rep.complete {
            ""
        } else {
            " (incomplete: budget spent)"
        }
    );
    println!("graham     {} = {} x {}", graham, inst.g.pi(), inst.h.pi());
    println!(
        "verdict    {}",
        if rep.final_bound <= graham {
            "conjecture holds for this product"
        } else {
            "bound does not settle the conjecture"
        }
    );
    if !rep.unresolved.is_empty() {
        println!("unresolved {}", rep.unresolved.len());
    }
    let default_path = global.workdir.as_ref().map(|w| {
        w.join("reports")
            .join(format!("{}.json", rep.instance.replace([':', ','], "_")))
    });
    if let Some(path) = report_path.map(Path::to_path_buf).or(default_path) {
        write_out(&path, &to_interchange(REPORT_KIND, &rep))?;
        println!("report     {}", path.display());
    }
    Ok(())
}

fn cmd_reproduce(
    global: &Global,
    table: u8,
    rows: Option<Vec<String>>,
    attempt_failed: bool,
    output: Option<&Path>,
) -> Result<(), CliError> {
    if reference::table(table).is_none() {
        return Err(HarnessError::UnknownTable(table).into());
    }
    let resolver = global.resolver(true)?;
    let mut search = global.search()?;
    search.jobs = 1;
    let mut opts = ReproduceOptions::new(search);
    opts.policy = global.policy()?;
    opts.row_budget = global.budget()?;
    opts.only = rows;
    opts.jobs = global.jobs.max(1);
    opts.attempt_failed_rows = attempt_failed;
    let cache = global.cache();
    let rep = reproduce(table, &opts, &resolver, cache.as_ref())?;
    print!("{}", render_report(&rep));
    if let Some(path) = output {
        write_out(path, &to_interchange(REPRODUCE_KIND, &rep))?;
    }
    Ok(())
}

fn cmd_emit_lp(
    global: &Global,
    g: &str,
    h: &str,
    path: &Path,
    root: (usize, usize),
    published_profiles: bool,
    listing: Option<&Path>,
) -> Result<(), CliError> {
    let resolver = global.resolver(published_profiles)?;
    let inst = resolver.instance(g, h)?;
    let (ri, rj) = root;
    if ri == 0 || rj == 0 || ri > inst.g.size() || rj > inst.h.size() {
        return Err(config(format!(
            "root ({ri},{rj}) outside {}x{}",
            inst.g.size(),
            inst.h.size()
        )));
    }
    let inst = inst.with_root((ri - 1, rj - 1)).map_err(config)?;
    let model = assemble_model(&inst, &global.policy()?);
    write_out(path, &write_lp(&model)?)?;
    if let Some(l) = listing {
        write_out(l, &debug_listing(&model))?;
    }
    println!(
        "wrote {} ({} variables, {} constraints)",
        path.display(),
        model.catalog.len(),
        model.constraints.len()
    );
    Ok(())
}

fn cmd_probe() -> Result<(), CliError> {
    let found = probe_backends();
    for k in SolverKind::PREFERENCE {
        println!(
            "{:<7} {}",
            k.id(),
            if found.contains(&k) { "available" } else { "missing" }
        );
    }
    if found.is_empty() {
        return Err(SolverError::NoBackend.into());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let g = &cli.global;
    match cli.command {
        Command::Pi { graph } => cmd_pi(g, &graph),
        Command::Twopeb { graph } => cmd_twopeb(g, &graph),
        Command::Bound {
            g: a,
            h: b,
            published_profiles,
            report,
            keep_files,
        } => cmd_bound(g, &a, &b, published_profiles, report.as_deref(), keep_files),
        Command::Reproduce {
            table,
            rows,
            attempt_failed,
            output,
        } => cmd_reproduce(g, table, rows, attempt_failed, output.as_deref()),
        Command::EmitLp {
            g: a,
            h: b,
            path,
            root,
            published_profiles,
            listing,
        } => cmd_emit_lp(g, &a, &b, &path, root, published_profiles, listing.as_deref()),
        Command::ProbeSolvers => cmd_probe(),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.global.gap_schedule.as_deref() == Some(&[]) {
        eprintln!("configuration error: empty --gap-schedule (default {DEFAULT_SCHEDULE:?})");
        return ExitCode::from(EXIT_CONFIG);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
