//! Command-line front end: one subcommand per operation on digit sets and
//! intersection problems. Exit codes: 0 on success, 1 for input or
//! validation problems, 2 when a size guard is exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fractal_cubes::digits::DEFAULT_MAX_CELLS;
use fractal_cubes::oracle;
use fractal_cubes::reports::{
    self, analyze, Analysis, ProblemInput, DEFAULT_MAX_IMAGE,
};
use fractal_cubes::{DigitSet, Error, ExactPoint, FaceVector, IntersectionProblem};

#[derive(Parser)]
#[command(
    name = "fractal-cubes",
    about = "Analyze fractal cubes defined by digit sets",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify every intersection of a pair of cubes (or of one cube with
    /// its own translates) and emit a report.
    Analyze(AnalyzeArgs),
    /// Export the pruned structure graph as DOT.
    Graph(GraphArgs),
    /// Render a depth-p cover of a square as an ASCII PPM image.
    Render(RenderArgs),
    /// Refine a digit set to order n^p.
    Refine(RefineArgs),
    /// Extract the digits generating one section of a cube.
    Section(SectionArgs),
    /// Project a digit set onto the support of a face vector.
    Project(ProjectArgs),
    /// List face digit sets of a cube.
    Faces(FacesArgs),
    /// Brute-force checks, independent of the structure graph.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Problem file: digit-set JSON/text (self mode) or {"d1":..,"d2":..}.
    #[arg(long)]
    input: PathBuf,
    /// Face vector token "(a1,...,ak)" or "all".
    #[arg(long, default_value = "all")]
    alpha: String,
    /// Write the JSON report here (the table always goes to stdout).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Cross-check the graph against the brute-force oracle; any
    /// disagreement aborts with a diff.
    #[arg(long)]
    verify: bool,
    /// Maximum certification depth used by --verify.
    #[arg(long, default_value_t = 6)]
    pmax: u32,
    /// Ceiling on refinement cell counts.
    #[arg(long, default_value_t = DEFAULT_MAX_CELLS)]
    max_cells: u64,
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long)]
    input: PathBuf,
    /// Write DOT here instead of stdout.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderMode {
    Single,
    Overlay,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    input: PathBuf,
    /// Cover depth p; the image is n^p pixels on each side.
    #[arg(long)]
    depth: u32,
    /// Defaults to the input shape: single for one digit set, overlay for a pair.
    #[arg(long, value_enum)]
    mode: Option<RenderMode>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Ceiling on the image side length.
    #[arg(long, default_value_t = DEFAULT_MAX_IMAGE)]
    max_image: i64,
}

#[derive(Args)]
struct RefineArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    depth: u32,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_CELLS)]
    max_cells: u64,
}

#[derive(Args)]
struct SectionArgs {
    #[arg(long)]
    input: PathBuf,
    /// Face vector naming the section direction.
    #[arg(long)]
    alpha: String,
    /// Projected digit on the support coordinates, e.g. "(1)" or "(0,2)".
    #[arg(long)]
    digit: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProjectArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FacesArgs {
    #[arg(long)]
    input: PathBuf,
    /// Face vector token or "all" for every nonzero face.
    #[arg(long, default_value = "all")]
    alpha: String,
    /// Translate each face digit set to the origin and drop its pinned
    /// coordinates.
    #[arg(long)]
    normalize: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Search for a depth certifying that an intersection is empty.
    Empty(OracleEmptyArgs),
    /// Box-counting dimension estimate from cell adjacency counts.
    Boxdim(OracleBoxdimArgs),
    /// Exact membership of a rational point in a cube.
    Member(OracleMemberArgs),
    /// Exact membership of a rational point in an intersection.
    Verify(OracleVerifyArgs),
}

#[derive(Args)]
struct OracleEmptyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    alpha: String,
    #[arg(long, default_value_t = 6)]
    pmax: u32,
    #[arg(long, default_value_t = DEFAULT_MAX_CELLS)]
    max_cells: u64,
}

#[derive(Args)]
struct OracleBoxdimArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    plo: u32,
    #[arg(long)]
    phi: u32,
    /// Also print the (p, N_p) table.
    #[arg(long)]
    counts: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_CELLS)]
    max_cells: u64,
}

#[derive(Args)]
struct OracleMemberArgs {
    /// A single digit set (JSON or text).
    #[arg(long)]
    input: PathBuf,
    /// Point token with rational coordinates, e.g. "(1/3,2/9)".
    #[arg(long)]
    point: String,
}

#[derive(Args)]
struct OracleVerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    point: String,
}

enum CliError {
    Lib(Error),
    Message(String),
    Verify(Vec<String>),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) if e.is_guard() => 2,
            _ => 1,
        }
    }

    fn report(&self) {
        match self {
            CliError::Lib(e) => eprintln!("error: {e}"),
            CliError::Message(m) => eprintln!("error: {m}"),
            CliError::Verify(lines) => {
                eprintln!("error: graph/oracle verification failed:");
                for line in lines {
                    eprintln!("  {line}");
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits with 2 on usage errors by default; the contract
            // here is 1 for any input problem.
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            e.report();
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Graph(args) => cmd_graph(args),
        Command::Render(args) => cmd_render(args),
        Command::Refine(args) => cmd_refine(args),
        Command::Section(args) => cmd_section(args),
        Command::Project(args) => cmd_project(args),
        Command::Faces(args) => cmd_faces(args),
        Command::Oracle(cmd) => match cmd {
            OracleCommand::Empty(args) => cmd_oracle_empty(args),
            OracleCommand::Boxdim(args) => cmd_oracle_boxdim(args),
            OracleCommand::Member(args) => cmd_oracle_member(args),
            OracleCommand::Verify(args) => cmd_oracle_verify(args),
        },
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Message(format!("reading {}: {e}", path.display())))
}

fn load_problem(path: &Path) -> Result<ProblemInput, CliError> {
    Ok(reports::parse_problem(&read_input(path)?)?)
}

fn load_digit_set(path: &Path) -> Result<DigitSet, CliError> {
    Ok(reports::parse_digit_set(&read_input(path)?)?)
}

fn parse_alpha(token: &str, k: usize) -> Result<FaceVector, CliError> {
    let a: FaceVector = token.parse()?;
    if a.dim() != k {
        return Err(CliError::Message(format!(
            "face vector {a} has dimension {}, the problem has dimension {k}",
            a.dim()
        )));
    }
    Ok(a)
}

fn parse_int_tuple(token: &str) -> Result<Vec<i64>, CliError> {
    let inner = token
        .trim()
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| {
            CliError::Message(format!("digit token must look like (v1,...), got {token:?}"))
        })?;
    inner
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| CliError::Message(format!("invalid integer {t:?}")))
        })
        .collect()
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CliError::Message(format!("writing {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(bytes)
                .map_err(|e| CliError::Message(format!("writing stdout: {e}")))
        }
    }
}

/// Worker count for the verification pass: FRACTAL_CUBE_THREADS when set,
/// otherwise the available parallelism.
fn thread_count() -> Result<usize, CliError> {
    match std::env::var("FRACTAL_CUBE_THREADS") {
        Ok(raw) => {
            let n: usize = raw.trim().parse().map_err(|_| {
                CliError::Message(format!(
                    "FRACTAL_CUBE_THREADS must be an integer >= 1, got {raw:?}"
                ))
            })?;
            if n == 0 {
                return Err(CliError::Message(
                    "FRACTAL_CUBE_THREADS must be an integer >= 1, got 0".into(),
                ));
            }
            Ok(n)
        }
        Err(std::env::VarError::NotPresent) => Ok(std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)),
        Err(std::env::VarError::NotUnicode(_)) => Err(CliError::Message(
            "FRACTAL_CUBE_THREADS must be an integer >= 1".into(),
        )),
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let input = load_problem(&args.input)?;
    let mut analysis = analyze(&input)?;

    if args.alpha != "all" {
        let problem = input.problem()?;
        let a = parse_alpha(&args.alpha, problem.dim())?;
        let token = a.to_string();
        analysis.records.retain(|r| r.alpha == token);
        if analysis.records.is_empty() {
            return Err(CliError::Message(format!(
                "no report row for {token}; self-intersection reports cover nonzero face vectors"
            )));
        }
    }

    if args.verify {
        let disagreements = verify_analysis(&analysis, args.pmax, args.max_cells)?;
        if !disagreements.is_empty() {
            return Err(CliError::Verify(disagreements));
        }
        eprintln!(
            "verify: ok ({} face vectors checked at pmax={})",
            analysis.records.len(),
            args.pmax
        );
    }

    print!("{}", reports::report_table(&analysis));
    if let Some(path) = &args.report {
        write_output(Some(path), reports::report_json(&analysis).as_bytes())?;
    }
    Ok(())
}

/// Cross-checks every reported face vector: an emptiness certificate must
/// match a dead vertex, an alive vertex must stay undecided, and every
/// enumerated point of a finite intersection must pass the exact
/// membership test.
fn verify_analysis(
    analysis: &Analysis,
    pmax: u32,
    max_cells: u64,
) -> Result<Vec<String>, CliError> {
    let problem = analysis.input.problem()?;
    let graph = &analysis.graph;
    let records = &analysis.records;
    let workers = thread_count()?.max(1).min(records.len().max(1));

    let mut slots: Vec<Result<Vec<String>, Error>> = Vec::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for worker in 0..workers {
            let problem = &problem;
            let handle = scope.spawn(move || {
                let mut out = Vec::new();
                for (i, record) in records.iter().enumerate() {
                    if i % workers != worker {
                        continue;
                    }
                    out.push((i, verify_record(problem, graph, record, pmax, max_cells)));
                }
                out
            });
            handles.push(handle);
        }
        let mut collected: Vec<(usize, Result<Vec<String>, Error>)> = handles
            .into_iter()
            .flat_map(|h| h.join().expect("verification worker panicked"))
            .collect();
        collected.sort_by_key(|(i, _)| *i);
        slots = collected.into_iter().map(|(_, r)| r).collect();
    });

    let mut disagreements = Vec::new();
    for slot in slots {
        disagreements.extend(slot?);
    }
    Ok(disagreements)
}

fn verify_record(
    problem: &IntersectionProblem,
    graph: &fractal_cubes::StructureGraph,
    record: &reports::AlphaRecord,
    pmax: u32,
    max_cells: u64,
) -> Result<Vec<String>, Error> {
    let mut out = Vec::new();
    let a: FaceVector = record.alpha.parse()?;
    match oracle::certify_empty(problem, &a, pmax, max_cells)? {
        oracle::Emptiness::Certified(depth) => {
            if record.alive {
                out.push(format!(
                    "alpha={}: graph=alive oracle=certified-empty(p={depth})",
                    record.alpha
                ));
            }
        }
        oracle::Emptiness::Unknown => {
            if !record.alive {
                out.push(format!(
                    "alpha={}: graph=empty oracle=adjacent-through(p={pmax})",
                    record.alpha
                ));
            }
        }
    }
    if record.cardinality.class == "finite" {
        for point in graph.enumerate_finite_points(&a)? {
            if !oracle::verify_point(problem, &a, &point) {
                out.push(format!(
                    "alpha={}: enumerated point {point} fails exact membership",
                    record.alpha
                ));
            }
        }
    }
    Ok(out)
}

fn cmd_graph(args: GraphArgs) -> Result<(), CliError> {
    let input = load_problem(&args.input)?;
    let graph = input.problem()?.structure_graph();
    write_output(args.dot.as_deref(), reports::export_dot(&graph).as_bytes())
}

fn cmd_render(args: RenderArgs) -> Result<(), CliError> {
    let input = load_problem(&args.input)?;
    let bytes = match (&input, args.mode) {
        (ProblemInput::Pair(_), Some(RenderMode::Single)) => {
            return Err(CliError::Message(
                "--mode single needs a single digit-set input".into(),
            ))
        }
        (ProblemInput::SelfIntersection(_), Some(RenderMode::Overlay)) => {
            return Err(CliError::Message(
                "--mode overlay needs a problem pair input".into(),
            ))
        }
        (ProblemInput::Pair(p), _) => {
            reports::render_overlay(p.d1(), p.d2(), args.depth, args.max_image)?
        }
        (ProblemInput::SelfIntersection(d), _) => {
            reports::render_single(d, args.depth, args.max_image)?
        }
    };
    write_output(args.out.as_deref(), &bytes)
}

fn cmd_refine(args: RefineArgs) -> Result<(), CliError> {
    let d = load_digit_set(&args.input)?;
    let refined = d.refine_guarded(args.depth, args.max_cells)?;
    let mut json = reports::digit_set_json(&refined);
    json.push('\n');
    write_output(args.out.as_deref(), json.as_bytes())
}

fn cmd_section(args: SectionArgs) -> Result<(), CliError> {
    let d = load_digit_set(&args.input)?;
    let a = parse_alpha(&args.alpha, d.dim())?;
    let value = parse_int_tuple(&args.digit)?;
    let section = d.section(&a, &value)?;
    let mut json = reports::digit_set_json(&section);
    json.push('\n');
    write_output(args.out.as_deref(), json.as_bytes())
}

fn cmd_project(args: ProjectArgs) -> Result<(), CliError> {
    let d = load_digit_set(&args.input)?;
    let a = parse_alpha(&args.alpha, d.dim())?;
    let projected = d.project(&a)?;
    let mut json = reports::digit_set_json(&projected);
    json.push('\n');
    write_output(args.out.as_deref(), json.as_bytes())
}

fn cmd_faces(args: FacesArgs) -> Result<(), CliError> {
    let d = load_digit_set(&args.input)?;
    let selected: Vec<(FaceVector, DigitSet)> = if args.alpha == "all" {
        d.boundary_digits()
    } else {
        let a = parse_alpha(&args.alpha, d.dim())?;
        let fd = d.face_digits(&a)?;
        vec![(a, fd)]
    };
    let mut entries = Vec::new();
    for (a, fd) in selected {
        let set = if args.normalize {
            fd.normalize_face(&a)?
        } else {
            fd
        };
        entries.push(fractal_cubes::reports::face_entry_json(&a, &set));
    }
    let doc = fractal_cubes::reports::faces_document_json(&d, &entries);
    write_output(args.out.as_deref(), doc.as_bytes())
}

fn cmd_oracle_empty(args: OracleEmptyArgs) -> Result<(), CliError> {
    let input = load_problem(&args.input)?;
    let problem = input.problem()?;
    let a = parse_alpha(&args.alpha, problem.dim())?;
    match oracle::certify_empty(&problem, &a, args.pmax, args.max_cells)? {
        oracle::Emptiness::Certified(depth) => println!("certified p={depth}"),
        oracle::Emptiness::Unknown => println!("unknown pmax={}", args.pmax),
    }
    Ok(())
}

fn cmd_oracle_boxdim(args: OracleBoxdimArgs) -> Result<(), CliError> {
    let input = load_problem(&args.input)?;
    let problem = input.problem()?;
    let a = parse_alpha(&args.alpha, problem.dim())?;
    let table = oracle::count_table(&problem, &a, args.plo, args.phi, args.max_cells)?;
    if args.counts {
        for (p, count) in &table {
            println!("{p} {count}");
        }
    }
    let slope = oracle::estimate_dimension(&problem, &a, args.plo, args.phi, args.max_cells)?;
    println!("slope {slope}");
    Ok(())
}

fn cmd_oracle_member(args: OracleMemberArgs) -> Result<(), CliError> {
    let d = load_digit_set(&args.input)?;
    let point: ExactPoint = args.point.parse()?;
    if point.dim() != d.dim() {
        return Err(CliError::Message(format!(
            "point has {} coordinates, the digit set has dimension {}",
            point.dim(),
            d.dim()
        )));
    }
    println!("{}", oracle::exact_member(&d, &point));
    Ok(())
}

fn cmd_oracle_verify(args: OracleVerifyArgs) -> Result<(), CliError> {
    let input = load_problem(&args.input)?;
    let problem = input.problem()?;
    let a = parse_alpha(&args.alpha, problem.dim())?;
    let point: ExactPoint = args.point.parse()?;
    if point.dim() != problem.dim() {
        return Err(CliError::Message(format!(
            "point has {} coordinates, the problem has dimension {}",
            point.dim(),
            problem.dim()
        )));
    }
    println!("{}", oracle::verify_point(&problem, &a, &point));
    Ok(())
}
