//! The `bergman` command line. [`run`] holds everything so that tests can
//! drive it in-process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use bergman::endo::check_fan_compatibility;
use bergman::io::{fan_to_json, MapDoc, MatroidDoc};
use bergman::tropical::{matroid_polytope_vertices, polytope_dim};
use bergman::verify::{self, VerificationReport};
use bergman::{generators, BuildingSet, Error, Fan, LatticeOfFlats, Limits, Matroid};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Exit status for a failed check that produced a witness.
pub const EXIT_FAIL: i32 = 2;
/// Exit status for usage and data errors.
pub const EXIT_ERROR: i32 = 1;

#[derive(Parser, Debug)]
#[command(name = "bergman", version, about = "Matroids, lattices of flats and tropical fans of hyperplane arrangements")]
struct Cli {
    /// Largest accepted ground set
    #[arg(long, global = true, default_value_t = bergman::subset::DEFAULT_CAP)]
    cap: usize,
    /// Worker threads for per-chain work; output does not depend on it
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,
    /// Seed for sampled checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Sampled vectors have entries in [-box, box]
    #[arg(long = "box", global = true, default_value_t = 3)]
    bound: u32,
    /// Number of sampled vectors
    #[arg(long, global = true, default_value_t = 1000)]
    samples: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Summary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Building {
    Min,
    Max,
}

#[derive(Args, Debug)]
struct Input {
    /// Matroid JSON file; standard input when omitted
    path: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the circuits
    Circuits(Input),
    /// List the flats by rank
    Flats(Input),
    /// List the maximal chains of flats
    Chains(Input),
    /// List the nested sets of the minimal or maximal building set
    Nested {
        #[arg(long, value_enum, default_value_t = Building::Min)]
        building: Building,
        /// Only maximal nested sets
        #[arg(long)]
        maximal: bool,
        #[command(flatten)]
        input: Input,
    },
    /// Vertices and dimension of the matroid polytope
    Polytope(Input),
    /// The fine subdivision of trop(M)
    FineFan(Input),
    /// The nested-set fan of the minimal or maximal building set
    NestedFan {
        #[arg(long, value_enum, default_value_t = Building::Min)]
        building: Building,
        #[command(flatten)]
        input: Input,
    },
    /// The Bergman fan
    Bergman(Input),
    /// Distinct linear spans of the maximal Bergman cones
    VerifySpans {
        /// Check the cones of the fine subdivision instead
        #[arg(long)]
        fine: bool,
        #[command(flatten)]
        input: Input,
    },
    /// Connectivity of M[F, G] for all flats F below connected G
    VerifyFs(Input),
    /// Direct comparison of the minimal nested-set fan with the Bergman fan
    VerifyFans(Input),
    /// Circuit test against fan membership on sampled vectors
    VerifySupport(Input),
    /// Refinement of the Bergman fan by the fine subdivision
    VerifyRefine(Input),
    /// The verify-* checks as `verify <check>`
    Verify {
        #[command(subcommand)]
        check: VerifyCheck,
    },
    /// Whether an integer map sends trop(M) into itself compatibly with the Bergman fan
    CheckEndo {
        /// Matroid JSON file; standard input when omitted
        #[arg(long)]
        matroid: Option<PathBuf>,
        /// Map JSON file
        #[arg(long)]
        map: PathBuf,
    },
    /// Emit a matroid file
    Gen {
        #[command(subcommand)]
        what: Gen,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCheck {
    Spans {
        #[arg(long)]
        fine: bool,
        #[command(flatten)]
        input: Input,
    },
    Fs(Input),
    Fans(Input),
    Support(Input),
    Refine(Input),
}

#[derive(Subcommand, Debug)]
enum Gen {
    /// Braid arrangement on n coordinates
    Braid { n: usize },
    /// All points of PG(d, p)
    Pg { d: usize, p: u64 },
    /// Uniform matroid of rank r on n elements
    Uniform { r: usize, n: usize },
    /// Validate a matroid file and re-emit it canonically
    File { path: PathBuf },
}

enum Check {
    Spans(bool),
    Fs,
    Fans,
    Support,
    Refine,
}

#[derive(Debug)]
enum Failure {
    Data(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Data(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "{e}"),
        }
    }
}

struct Outcome {
    text: String,
    passed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, passed: true }
    }
}

struct Ctx {
    limits: Limits,
    output: Output,
    stdin: Option<String>,
}

impl Ctx {
    fn read(&mut self, path: &Option<PathBuf>) -> Result<String, Failure> {
        match path {
            Some(p) => fs::read_to_string(p).map_err(|e| Failure::Io(format!("cannot read {}: {e}", p.display()))),
            None => self.stdin.take().ok_or_else(|| Failure::Io("standard input already consumed".into())),
        }
    }

    fn matroid(&mut self, input: &Input) -> Result<Matroid, Failure> {
        let text = self.read(&input.path)?;
        Ok(MatroidDoc::parse(&text)?.to_matroid(self.limits)?)
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn lines<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().fold(String::new(), |mut acc, x| {
        let _ = writeln!(acc, "{x}");
        acc
    })
}

fn fan_summary(fan: &Fan) -> String {
    let mut s = format!("n {}\nlineality_dim {}\nrays {}\ncones {}\n", fan.size, fan.lineality_dim, fan.ray_flats.len(), fan.cones.len());
    for (i, c) in fan.cones.iter().enumerate() {
        let rays: Vec<String> = c.rays.iter().map(|&r| fan.ray_flats[r].to_string()).collect();
        let _ = writeln!(s, "cone {i}: {} ({} chain{})", rays.join(" "), c.chains.len(), if c.chains.len() == 1 { "" } else { "s" });
    }
    s
}

fn report_summary(r: &VerificationReport) -> String {
    let mut s = format!("{} {}\n", r.check, if r.passed() { "pass" } else { "fail" });
    for (k, v) in &r.stats {
        let _ = writeln!(s, "{k} {v}");
    }
    for w in &r.witnesses {
        let _ = writeln!(s, "witness {}", serde_json::to_string(w).expect("plain data serializes"));
    }
    s
}

fn building(m: &Matroid, lattice: &LatticeOfFlats, b: Building) -> Result<BuildingSet, Error> {
    match b {
        Building::Min => BuildingSet::minimal(m, lattice),
        Building::Max => BuildingSet::maximal(m, lattice),
    }
}

fn emit_fan(ctx: &Ctx, fan: &Fan) -> Outcome {
    Outcome::ok(match ctx.output {
        Output::Json => fan_to_json(fan) + "\n",
        Output::Summary => fan_summary(fan),
    })
}

fn verify(ctx: &mut Ctx, check: Check, input: &Input, cli: &Cli) -> Result<Outcome, Failure> {
    let m = ctx.matroid(input)?;
    let report = match check {
        Check::Spans(false) => verify::verify_distinct_spans(&m)?,
        Check::Spans(true) => verify::verify_distinct_spans_fine(&m)?,
        Check::Fs => verify::fs_criterion(&m)?,
        Check::Fans => verify::fans_equal_min_vs_bergman(&m)?,
        Check::Support => verify::support_consistency(&m, cli.bound, cli.samples, cli.seed)?,
        Check::Refine => verify::verify_refinement(&m)?,
    };
    let text = match ctx.output {
        Output::Json => json(&report),
        Output::Summary => report_summary(&report),
    };
    Ok(Outcome { text, passed: report.passed() })
}

#[derive(Serialize)]
struct PolytopeDoc {
    schema: &'static str,
    vertices: Vec<Vec<u8>>,
    dim: usize,
    components: usize,
}

#[derive(Serialize)]
struct EndoDoc {
    schema: &'static str,
    maps_into_trop: VerificationReport,
    compatibility: bergman::CompatibilityReport,
}

fn execute(cli: &Cli, ctx: &mut Ctx) -> Result<Outcome, Failure> {
    let summary = ctx.output == Output::Summary;
    match &cli.command {
        Command::Circuits(input) => {
            let c = ctx.matroid(input)?.circuits();
            Ok(Outcome::ok(if summary { lines(&c) } else { json(&c) }))
        }
        Command::Flats(input) => {
            let m = ctx.matroid(input)?;
            let lattice = LatticeOfFlats::new(&m);
            Ok(Outcome::ok(if summary {
                lines((0..=lattice.rank()).map(|r| {
                    let fs: Vec<String> = lattice.flats_of_rank(r).iter().map(ToString::to_string).collect();
                    format!("rank {r}: {}", fs.join(" "))
                }))
            } else {
                json(&lattice.flats())
            }))
        }
        Command::Chains(input) => {
            let m = ctx.matroid(input)?;
            let chains = LatticeOfFlats::new(&m).maximal_chains()?;
            Ok(Outcome::ok(if summary { lines(&chains) } else { json(&chains) }))
        }
        Command::Nested { building: b, maximal, input } => {
            let m = ctx.matroid(input)?;
            let lattice = LatticeOfFlats::new(&m);
            let g = building(&m, &lattice, *b)?;
            let sets = if *maximal { lattice.maximal_nested_sets(&g) } else { lattice.nested_sets(&g, None) };
            Ok(Outcome::ok(if summary {
                lines(sets.iter().map(|s| s.members().iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")))
            } else {
                json(&sets)
            }))
        }
        Command::Polytope(input) => {
            let m = ctx.matroid(input)?;
            let doc = PolytopeDoc { schema: "polytope/v1", vertices: matroid_polytope_vertices(&m), dim: polytope_dim(&m)?, components: m.num_components() };
            Ok(Outcome::ok(if summary {
                format!("vertices {}\ndim {}\ncomponents {}\n", doc.vertices.len(), doc.dim, doc.components)
            } else {
                json(&doc)
            }))
        }
        Command::FineFan(input) => {
            let fan = bergman::fine_subdivision(&ctx.matroid(input)?)?;
            Ok(emit_fan(ctx, &fan))
        }
        Command::NestedFan { building: b, input } => {
            let m = ctx.matroid(input)?;
            let lattice = LatticeOfFlats::new(&m);
            let fan = bergman::nested_fan(&m, &lattice, &building(&m, &lattice, *b)?)?;
            Ok(emit_fan(ctx, &fan))
        }
        Command::Bergman(input) => {
            let fan = bergman::bergman_fan(&ctx.matroid(input)?)?.to_fan();
            Ok(emit_fan(ctx, &fan))
        }
        Command::VerifySpans { fine, input } | Command::Verify { check: VerifyCheck::Spans { fine, input } } => verify(ctx, Check::Spans(*fine), input, cli),
        Command::VerifyFs(input) | Command::Verify { check: VerifyCheck::Fs(input) } => verify(ctx, Check::Fs, input, cli),
        Command::VerifyFans(input) | Command::Verify { check: VerifyCheck::Fans(input) } => verify(ctx, Check::Fans, input, cli),
        Command::VerifySupport(input) | Command::Verify { check: VerifyCheck::Support(input) } => verify(ctx, Check::Support, input, cli),
        Command::VerifyRefine(input) | Command::Verify { check: VerifyCheck::Refine(input) } => verify(ctx, Check::Refine, input, cli),
        Command::CheckEndo { matroid, map } => {
            let m = ctx.matroid(&Input { path: matroid.clone() })?;
            let map_text = ctx.read(&Some(map.clone()))?;
            let a = MapDoc::parse(&map_text)?.to_map()?;
            let doc = EndoDoc { schema: "endo/v1", maps_into_trop: bergman::maps_into_trop(&m, &a)?, compatibility: check_fan_compatibility(&m, &a)? };
            let passed = doc.maps_into_trop.passed() && doc.compatibility.passed();
            let text = if summary {
                let c = &doc.compatibility;
                let mut s = report_summary(&doc.maps_into_trop);
                let _ = writeln!(s, "compatibility {}", if c.passed() { "pass" } else { "fail" });
                for img in &c.cones {
                    let _ = match img.target {
                        Some(t) => writeln!(s, "cone {} -> {t}", img.source),
                        None => writeln!(s, "cone {} -> none", img.source),
                    };
                }
                let _ = writeln!(s, "determinant {}\ninvertible {}\nunimodular {}", c.determinant, c.invertible, c.unimodular);
                s
            } else {
                json(&doc)
            };
            Ok(Outcome { text, passed })
        }
        Command::Gen { what } => {
            let doc = match what {
                Gen::Braid { n } => {
                    generators::braid_with(*n, ctx.limits)?;
                    MatroidDoc::matrix(generators::braid_matrix(*n)?)
                }
                Gen::Pg { d, p } => {
                    let m = generators::pg_with(*d, *p, ctx.limits)?;
                    let points = generators::pg_points(*d, *p)?;
                    let rows: Vec<Vec<i64>> = (0..=*d).map(|r| points.iter().map(|pt| pt[r] as i64).collect()).collect();
                    debug_assert_eq!(m.size(), points.len());
                    MatroidDoc::matrix(bergman::ExactMatrix::prime(*p, rows)?)
                }
                Gen::Uniform { r, n } => MatroidDoc::bases(&Matroid::uniform_with(*r, *n, ctx.limits)?),
                Gen::File { path } => {
                    let doc = MatroidDoc::parse(&ctx.read(&Some(path.clone()))?)?;
                    doc.to_matroid(ctx.limits)?;
                    doc
                }
            };
            Ok(Outcome::ok(doc.to_json() + "\n"))
        }
    }
}

fn reads_stdin(command: &Command) -> bool {
    match command {
        Command::Circuits(i)
        | Command::Flats(i)
        | Command::Chains(i)
        | Command::Polytope(i)
        | Command::FineFan(i)
        | Command::Bergman(i)
        | Command::VerifyFs(i)
        | Command::VerifyFans(i)
        | Command::VerifySupport(i)
        | Command::VerifyRefine(i)
        | Command::Nested { input: i, .. }
        | Command::NestedFan { input: i, .. }
        | Command::VerifySpans { input: i, .. } => i.path.is_none(),
        Command::Verify { check } => match check {
            VerifyCheck::Spans { input: i, .. } | VerifyCheck::Fs(i) | VerifyCheck::Fans(i) | VerifyCheck::Support(i) | VerifyCheck::Refine(i) => {
                i.path.is_none()
            }
        },
        Command::CheckEndo { matroid, .. } => matroid.is_none(),
        Command::Gen { .. } => false,
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status: 0 on success or a passing check, 2 on a failing check,
/// 1 on usage or data errors.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                EXIT_ERROR
            } else {
                let _ = stdout.write_all(text.as_bytes());
                0
            };
        }
    };
    let limits = match Limits::new(cli.cap) {
        Ok(l) => l,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_ERROR;
        }
    };
    let mut stdin_text = None;
    if reads_stdin(&cli.command) {
        let mut s = String::new();
        if let Err(e) = stdin.read_to_string(&mut s) {
            let _ = writeln!(stderr, "error: cannot read standard input: {e}");
            return EXIT_ERROR;
        }
        stdin_text = Some(s);
    }
    let mut ctx = Ctx { limits, output: cli.output, stdin: stdin_text };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli, &mut ctx)),
            Err(e) => Err(Failure::Io(format!("cannot start {n} threads: {e}"))),
        },
        None => execute(&cli, &mut ctx),
    };
    match result {
        Ok(out) => {
            if stdout.write_all(out.text.as_bytes()).is_err() {
                return EXIT_ERROR;
            }
            if out.passed {
                0
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}
