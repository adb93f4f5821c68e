use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use wcbv::crs::{parse_system, Document, TextError};
use wcbv::encode::{encode_cbn, encode_cbv, EncodeError};
use wcbv::graph::{graph_reduce, to_dot, GraphSystem, TermGraph};
use wcbv::lambda::{parse_term, ParseError, Policy, Strategy, Term};
use wcbv::scott::{ScottContext, ScottError};
use wcbv::workbench::{
    compare_engines, eval_crs, eval_graph_crs, eval_lambda, eval_phi_crs, eval_phi_graph, eval_psi_crs,
    eval_scott, expectation_path, lambda_expectation, roundtrip_check, system_expectation, CostReport,
    RunConfig, DEFAULT_BUDGET, DEFAULT_UNFOLD_LIMIT,
};

#[derive(Parser)]
#[command(name = "workbench", version, about = "Cross-engine normalization workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct RunArgs {
    /// Step budget of every engine.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Redex selection for call-by-value and rewriting engines.
    #[arg(long, value_enum, default_value_t = PolicyArg::Leftmost)]
    policy: PolicyArg,
    /// Seed of the random policy.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest graph unfolding that is read back.
    #[arg(long, default_value_t = DEFAULT_UNFOLD_LIMIT)]
    unfold_limit: u64,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            budget: self.budget,
            policy: match self.policy {
                PolicyArg::Leftmost => Policy::Leftmost,
                PolicyArg::Random => Policy::Random { seed: self.seed },
            },
            unfold_limit: self.unfold_limit,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Leftmost,
    Random,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    LambdaCbv,
    LambdaCbn,
    /// Φ image for `.lam`, the system itself for `.trs`.
    Crs,
    /// Ψ image of a `.lam` file.
    CrsCbn,
    Graph,
    /// Scott translation of a `.trs` file.
    Lambda,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Crs,
    CrsCbn,
    Lambda,
}

#[derive(Subcommand)]
enum Command {
    /// Run one engine.
    Eval {
        #[arg(long, value_enum)]
        engine: Option<Engine>,
        #[command(flatten)]
        run: RunArgs,
        /// Also write the final graph of the graph engine as DOT.
        #[arg(long)]
        emit_dot: Option<PathBuf>,
        file: PathBuf,
    },
    /// Compile a λ-term to a rewrite system, or a rewrite system's terms to λ-terms.
    Encode {
        #[arg(long, value_enum)]
        to: Target,
        #[arg(long)]
        out: Option<PathBuf>,
        file: PathBuf,
    },
    /// Run every engine and check the simulation results; directories are searched for `.lam` and `.trs` files.
    Compare {
        #[command(flatten)]
        run: RunArgs,
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Compare a rewrite system with its graph and Scott-encoded runs.
    Roundtrip {
        #[command(flatten)]
        run: RunArgs,
        file: PathBuf,
    },
    /// Print the term graph of an input as DOT.
    GraphDot {
        /// Reduce to normal form first.
        #[arg(long)]
        normalize: bool,
        /// Which `term` declaration of a `.trs` file.
        #[arg(long, default_value_t = 0)]
        term: usize,
        #[command(flatten)]
        run: RunArgs,
        file: PathBuf,
    },
    /// Write (or with --check, verify) the `.expect.json` sidecars of corpus files.
    Expect {
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Invalid(String),
    Theorem(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Theorem(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Invalid(m) | Failure::Theorem(m) => m,
        }
    }
}

impl From<EncodeError> for Failure {
    fn from(e: EncodeError) -> Failure {
        Failure::Invalid(e.to_string())
    }
}

impl From<ScottError> for Failure {
    fn from(e: ScottError) -> Failure {
        Failure::Invalid(e.to_string())
    }
}

enum Input {
    Lambda(String, Term),
    System(String, Document),
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn lambda_error(path: &Path, e: ParseError) -> Failure {
    Failure::Input(format!("{}:{e}", path.display()))
}

fn system_error(path: &Path, e: TextError) -> Failure {
    let m = format!("{}: {e}", path.display());
    if e.is_syntax() {
        Failure::Input(m)
    } else {
        Failure::Invalid(m)
    }
}

fn load(path: &Path) -> Result<Input, Failure> {
    let text = read(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("lam") => {
            let t = parse_term(&text).map_err(|e| lambda_error(path, e))?;
            if let Some(x) = t.free_vars().first() {
                return Err(EncodeError::OpenTerm(*x).into());
            }
            Ok(Input::Lambda(text, t))
        }
        Some("trs") => Ok(Input::System(
            text.clone(),
            parse_system(&text).map_err(|e| system_error(path, e))?,
        )),
        _ => Err(Failure::Input(format!(
            "{}: expected a .lam or .trs file",
            path.display()
        ))),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn label(path: &Path) -> String {
    path.display().to_string()
}

fn eval(engine: Option<Engine>, run: &RunArgs, emit_dot: &Option<PathBuf>, file: &Path) -> Result<(), Failure> {
    let cfg = run.config();
    let input = load(file)?;
    let mut dot = String::new();
    let report = match &input {
        Input::Lambda(text, m) => {
            let mut report = CostReport::new("eval", &label(file), text);
            let run = match engine.unwrap_or(Engine::LambdaCbv) {
                Engine::LambdaCbv => eval_lambda(m, Strategy::Cbv, &cfg),
                Engine::LambdaCbn => eval_lambda(m, Strategy::Cbn, &cfg),
                Engine::Crs => eval_phi_crs(m, &cfg)?,
                Engine::CrsCbn => eval_psi_crs(m, &cfg)?,
                Engine::Graph => {
                    if emit_dot.is_some() {
                        let phi = encode_cbv(m)?;
                        dot = final_dot(&phi.system, &phi.term, &cfg, true)?;
                    }
                    eval_phi_graph(m, &cfg)?
                }
                Engine::Lambda => {
                    return Err(Failure::Input("engine `lambda` needs a .trs file".into()));
                }
            };
            report.push_run(run);
            report
        }
        Input::System(text, doc) => {
            let mut report = CostReport::new("eval", &label(file), text);
            for t in &doc.terms {
                let run = match engine.unwrap_or(Engine::Crs) {
                    Engine::Crs => eval_crs(&doc.system, t, &cfg),
                    Engine::Graph => {
                        if emit_dot.is_some() {
                            dot.push_str(&final_dot(&doc.system, t, &cfg, true)?);
                        }
                        eval_graph_crs(&doc.system, t, &cfg)
                    }
                    Engine::Lambda => eval_scott(&doc.system, t, &cfg)?,
                    _ => {
                        return Err(Failure::Input(
                            "a .trs file runs on the crs, graph or lambda engine".into(),
                        ));
                    }
                };
                report.push_run(run);
            }
            report
        }
    };
    if emit_dot.is_some() {
        emit(emit_dot, &dot)?;
    }
    emit(&run.out, &report.to_json())
}

fn final_dot(
    sys: &wcbv::crs::CrsSystem,
    t: &wcbv::crs::CrsTerm,
    cfg: &RunConfig,
    normalize: bool,
) -> Result<String, Failure> {
    let g = TermGraph::from_term(t);
    if !normalize {
        return Ok(to_dot(&g));
    }
    let run = graph_reduce(g, &GraphSystem::from_crs(sys), cfg.budget)
        .map_err(|v| Failure::Theorem(v.to_string()))?;
    Ok(to_dot(&run.graph))
}

fn encode(to: Target, out: &Option<PathBuf>, file: &Path) -> Result<(), Failure> {
    let text = match (load(file)?, to) {
        (Input::Lambda(_, m), Target::Crs) => encode_cbv(&m)?.to_text(),
        (Input::Lambda(_, m), Target::CrsCbn) => encode_cbn(&m)?.to_text(),
        (Input::System(_, doc), Target::Lambda) => {
            let ctx = ScottContext::new(&doc.system);
            let mut s = String::new();
            for t in &doc.terms {
                s.push_str(&format!("# {t}\n{}\n", ctx.translate(t)?));
            }
            s
        }
        (Input::Lambda(..), Target::Lambda) => {
            return Err(Failure::Input("--to lambda needs a .trs file".into()));
        }
        (Input::System(..), _) => {
            return Err(Failure::Input("--to crs and --to crs-cbn need a .lam file".into()));
        }
    };
    emit(out, &text)
}

fn expand(paths: &[PathBuf]) -> Result<Vec<PathBuf>, Failure> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut found = Vec::new();
            walk(p, &mut found)?;
            found.sort();
            out.extend(found);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

fn walk(dir: &Path, out: &mut Vec<PathBuf>) -> Result<(), Failure> {
    let entries = fs::read_dir(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    for entry in entries {
        let path = entry
            .map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?
            .path();
        if path.is_dir() {
            walk(&path, out)?;
        } else if path.extension().is_some_and(|e| e == "lam" || e == "trs") {
            out.push(path);
        }
    }
    Ok(())
}

fn expectation(input: &Input, budget: u64) -> String {
    match input {
        Input::Lambda(_, m) => lambda_expectation(m, budget),
        Input::System(_, doc) => system_expectation(doc, budget),
    }
}

fn sidecar_budget(text: &str) -> Option<u64> {
    let v: serde_json::Value = serde_json::from_str(text).ok()?;
    v["budget"].as_u64()
}

fn compare_file(file: &Path, cfg: &RunConfig) -> Result<CostReport, Failure> {
    let input = load(file)?;
    let mut report = match &input {
        Input::Lambda(_, m) => compare_engines(m, &label(file), cfg)?,
        Input::System(text, doc) => {
            let mut report = CostReport::new("compare", &label(file), text);
            for t in &doc.terms {
                report.absorb(roundtrip_check(&doc.system, t, &label(file), cfg)?);
            }
            report
        }
    };
    let sidecar = expectation_path(file);
    if let Ok(stored) = fs::read_to_string(&sidecar) {
        let budget = sidecar_budget(&stored).unwrap_or(DEFAULT_BUDGET);
        report.check(
            "expectation_sidecar",
            expectation(&input, budget) == stored,
            format!("{} regenerated with budget {budget}", sidecar.display()),
        );
    }
    Ok(report)
}

fn compare(run: &RunArgs, paths: &[PathBuf]) -> Result<(), Failure> {
    let cfg = run.config();
    let files = expand(paths)?;
    let mut reports = Vec::new();
    for f in &files {
        reports.push(compare_file(f, &cfg)?);
    }
    let text = if reports.len() == 1 {
        reports[0].to_json()
    } else {
        let values: Vec<serde_json::Value> = reports
            .iter()
            .map(|r| serde_json::to_value(r).expect("reports serialize"))
            .collect();
        serde_json::to_string_pretty(&values).expect("values serialize") + "\n"
    };
    emit(&run.out, &text)?;
    let failed: Vec<String> = reports
        .iter()
        .flat_map(|r| {
            r.theorems
                .iter()
                .filter(|t| !t.holds)
                .map(move |t| format!("{}: {} ({})", r.input, t.name, t.detail))
        })
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Theorem(failed.join("\n")))
    }
}

fn roundtrip(run: &RunArgs, file: &Path) -> Result<(), Failure> {
    let cfg = run.config();
    let Input::System(text, doc) = load(file)? else {
        return Err(Failure::Input("roundtrip needs a .trs file".into()));
    };
    let mut report = CostReport::new("roundtrip", &label(file), &text);
    for t in &doc.terms {
        report.absorb(roundtrip_check(&doc.system, t, &label(file), &cfg)?);
    }
    emit(&run.out, &report.to_json())?;
    if report.all_hold() {
        Ok(())
    } else {
        Err(Failure::Theorem("a roundtrip check failed".into()))
    }
}

fn graph_dot(normalize: bool, term: usize, run: &RunArgs, file: &Path) -> Result<(), Failure> {
    let cfg = run.config();
    let dot = match load(file)? {
        Input::Lambda(_, m) => {
            let phi = encode_cbv(&m)?;
            final_dot(&phi.system, &phi.term, &cfg, normalize)?
        }
        Input::System(_, doc) => {
            let t = doc
                .terms
                .get(term)
                .ok_or_else(|| Failure::Input(format!("{} has no term {term}", file.display())))?;
            final_dot(&doc.system, t, &cfg, normalize)?
        }
    };
    emit(&run.out, &dot)
}

fn expect(check: bool, budget: u64, paths: &[PathBuf]) -> Result<(), Failure> {
    let mut stale = Vec::new();
    for f in expand(paths)? {
        let input = load(&f)?;
        let sidecar = expectation_path(&f);
        if check {
            let stored = fs::read_to_string(&sidecar).unwrap_or_default();
            let budget = sidecar_budget(&stored).unwrap_or(budget);
            if expectation(&input, budget) != stored {
                stale.push(sidecar.display().to_string());
            }
        } else {
            let text = expectation(&input, budget);
            fs::write(&sidecar, text).map_err(|e| Failure::Input(format!("{}: {e}", sidecar.display())))?;
            println!("{}", sidecar.display());
        }
    }
    if stale.is_empty() {
        Ok(())
    } else {
        Err(Failure::Theorem(format!("stale expectations: {}", stale.join(", "))))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Eval {
            engine,
            run,
            emit_dot,
            file,
        } => eval(engine, &run, &emit_dot, &file),
        Command::Encode { to, out, file } => encode(to, &out, &file),
        Command::Compare { run, paths } => compare(&run, &paths),
        Command::Roundtrip { run, file } => roundtrip(&run, &file),
        Command::GraphDot {
            normalize,
            term,
            run,
            file,
        } => graph_dot(normalize, term, &run, &file),
        Command::Expect { check, budget, paths } => expect(check, budget, &paths),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    // Deep terms are printed and compared recursively.
    let worker = std::thread::Builder::new()
        .stack_size(1 << 30)
        .spawn(move || run(cli))
        .expect("spawn worker thread");
    match worker.join().expect("worker thread panicked") {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
