//! Command-line surface for jointslab: generation, detection, verification
//! runs and bound checks over JSON documents.

pub mod document;
pub mod report;
pub mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use jointslab::algebra::{Field, DEFAULT_PRIME};
use jointslab::combinatorics::{count_rainbow_triangles, count_simplices, CombinatoricsError};
use jointslab::configs::{
    generate_from_colored_graph, generate_from_hypergraph, generate_generic_flat_config,
    generate_generic_hyperplane_config, generate_k4_blowup_multijoints, ConfigError, MultijointsConfiguration,
};

use document::{ConfigDocument, Configuration, GraphDocument};
use report::{digest, RunReport};
use verify::{Mode, VerifyOptions};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse error at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("invalid value at {path}: {message}")]
    Invalid { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Combinatorics(#[from] CombinatoricsError),
}

#[derive(Debug, Parser)]
#[command(name = "jointslab", version, about = "Joints configurations, vanishing systems and sharp bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a configuration and write it as JSON.
    Generate(GenerateArgs),
    /// Detect the joints of a document's lines.
    Detect(DetectArgs),
    /// Run the verification pipeline on a configuration.
    Verify(VerifyArgs),
    /// Check a bound on given or detected counts.
    CheckBound(CheckBoundArgs),
    /// Count rainbow triangles or simplices of a graph document.
    Count(CountArgs),
    /// Run every check and write JSON and text reports side by side.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenerateKind {
    /// Lines cut by `d-1` of `k` generic hyperplanes.
    Joints,
    /// Multijoints of the blow-up of K4 by `k`.
    #[value(name = "multijoints-k4")]
    MultijointsK4,
    /// Flat joints from `k` generic hyperplanes.
    Flatjoints,
    /// Joints encoding a hypergraph document (`--graph`).
    FromHypergraph,
    /// Multijoints encoding a colored-graph document (`--graph`).
    FromColoredGraph,
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Field descriptor, `rational` or `prime:p`.
    #[arg(long)]
    pub field: Option<String>,
    /// Prime used when no field is given.
    #[arg(long, env = "JOINTSLAB_PRIME", default_value_t = DEFAULT_PRIME)]
    pub prime: u64,
}

impl FieldArgs {
    pub fn resolve(&self) -> Result<Field, CliError> {
        let parsed = match &self.field {
            Some(f) => f.parse(),
            None => Field::prime(self.prime),
        };
        parsed.map_err(|e| CliError::Invalid {
            path: "--field".into(),
            message: e.to_string(),
        })
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub kind: GenerateKind,
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    /// Number of lines per flat joint.
    #[arg(long)]
    pub m: Option<usize>,
    #[command(flatten)]
    pub field: FieldArgs,
    /// Graph document for the encoding kinds.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Keep each joint independently with this probability.
    #[arg(long)]
    pub sample: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; the document goes to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Degree bound; defaults to 10 times the most joints on a line.
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long, value_enum, default_value_t = Mode::All)]
    pub mode: Mode,
    /// Largest degree bound for the exact kernel computation.
    #[arg(long)]
    pub degree_cap: Option<u64>,
}

impl RunArgs {
    fn options(&self) -> VerifyOptions {
        VerifyOptions {
            n: self.n,
            mode: self.mode,
            degree_cap: self.degree_cap,
            ..VerifyOptions::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub config: PathBuf,
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Also write the JSON report here.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    /// `d^(d-1) J^(d-1) <= (d-1)! L^d`.
    Main,
    /// `J^(d-1) <= d! L_1 ... L_d`.
    Multijoints,
    /// `J^m <= C(d,m) L^m F`.
    Flats,
    /// `J^2 <= 2 L_1 L_2 L_3`.
    Conj34,
}

#[derive(Debug, Args)]
pub struct CheckBoundArgs {
    #[arg(long, value_enum)]
    pub theorem: Theorem,
    /// Take the counts from this configuration.
    #[arg(long, conflicts_with_all = ["joints", "lines", "flats"])]
    pub config: Option<PathBuf>,
    #[arg(long = "J")]
    pub joints: Option<u64>,
    /// Line count, or one count per family.
    #[arg(long = "L", num_args = 1..)]
    pub lines: Vec<u64>,
    #[arg(long = "F")]
    pub flats: Option<u64>,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("counter").required(true).args(["rainbow", "simplices"]))]
pub struct CountArgs {
    /// Count rainbow triangles of a colored-graph document.
    #[arg(long)]
    pub rainbow: Option<PathBuf>,
    /// Count simplices of a hypergraph document.
    #[arg(long)]
    pub simplices: Option<PathBuf>,
    /// Simplex size; defaults to the arity plus one.
    #[arg(long)]
    pub d: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    pub config: PathBuf,
    #[command(flatten)]
    pub run: RunArgs,
    /// Directory for the reports; defaults to the input's directory.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_text(path: &Path) -> Result<(String, Vec<u8>), CliError> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| CliError::Invalid {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok((text, bytes))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

/// Counts line `L=6 J=4`, per family `L1=L2=L3=8 J=32` when sizes agree.
pub fn summary(cfg: &Configuration) -> String {
    match cfg {
        Configuration::Joints(c) => format!("L={} J={}", c.line_count(), c.joint_count()),
        Configuration::Multijoints(c) => {
            let sizes = c.family_sizes();
            let families = if sizes.windows(2).all(|w| w[0] == w[1]) {
                let names: Vec<String> = (1..=sizes.len()).map(|i| format!("L{i}")).collect();
                format!("{}={}", names.join("="), sizes.first().copied().unwrap_or(0))
            } else {
                sizes.iter().enumerate().map(|(i, s)| format!("L{}={s}", i + 1)).collect::<Vec<_>>().join(" ")
            };
            format!("{families} J={}", c.joint_count())
        }
        Configuration::Flat(c) => format!("L={} F={} J={}", c.lines().len(), c.flats().len(), c.joint_count()),
    }
}

pub fn load_configuration(path: &Path) -> Result<(Configuration, String), CliError> {
    let (text, bytes) = read_text(path)?;
    let cfg = ConfigDocument::parse(&text)?.to_configuration()?;
    Ok((cfg, digest(&bytes)))
}

fn sample_multijoints(cfg: &MultijointsConfiguration, rng: &mut ChaCha8Rng, keep: f64) -> Result<Configuration, CliError> {
    use rand::Rng;
    let kept: Vec<usize> = (0..cfg.joint_count()).filter(|_| rng.gen_bool(keep)).collect();
    let sub = MultijointsConfiguration::new(
        cfg.field(),
        cfg.families().to_vec(),
        kept.iter().map(|&j| cfg.joints()[j].clone()).collect(),
        kept.iter().map(|&j| cfg.incidence()[j].clone()).collect(),
    )?;
    Ok(Configuration::Multijoints(sub))
}

fn generate(args: &GenerateArgs) -> Result<Configuration, CliError> {
    let field = args.field.resolve()?;
    let graph = || -> Result<GraphDocument, CliError> {
        let path = args.graph.as_ref().ok_or_else(|| CliError::Usage("--graph is required for this kind".into()))?;
        GraphDocument::parse(&read_text(path)?.0)
    };
    let cfg = match args.kind {
        GenerateKind::Joints => Configuration::Joints(generate_generic_hyperplane_config(field, args.k, args.d)?),
        GenerateKind::MultijointsK4 => Configuration::Multijoints(generate_k4_blowup_multijoints(field, args.k)?),
        GenerateKind::Flatjoints => {
            let m = args.m.ok_or_else(|| CliError::Usage("--m is required for flatjoints".into()))?;
            Configuration::Flat(generate_generic_flat_config(field, args.k, args.d, m)?)
        }
        GenerateKind::FromHypergraph => Configuration::Joints(generate_from_hypergraph(field, &graph()?.hypergraph()?)?),
        GenerateKind::FromColoredGraph => {
            Configuration::Multijoints(generate_from_colored_graph(field, &graph()?.colored_graph()?)?)
        }
    };
    let Some(keep) = args.sample else {
        return Ok(cfg);
    };
    if !(0.0..=1.0).contains(&keep) {
        return Err(CliError::Usage(format!("--sample must lie in [0, 1], got {keep}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    Ok(match cfg {
        Configuration::Joints(c) => Configuration::Joints(c.random_subconfiguration(&mut rng, keep)),
        Configuration::Flat(c) => Configuration::Flat(c.random_subconfiguration(&mut rng, keep)),
        Configuration::Multijoints(c) => sample_multijoints(&c, &mut rng, keep)?,
    })
}

/// Writes `doc` to `out_path`, or to `out` when there is no path; the
/// summary goes to `out` or, when the document does, to `err`.
fn deliver(doc: &ConfigDocument, line: &str, out_path: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match out_path {
        Some(p) => {
            write_file(p, &(doc.to_json() + "\n"))?;
            emit(out, &format!("{line}\n"))
        }
        None => {
            emit(out, &(doc.to_json() + "\n"))?;
            emit(err, &format!("{line}\n"))
        }
    }
}

fn check_bound(args: &CheckBoundArgs) -> Result<RunReport, CliError> {
    let (mut report, counts) = match &args.config {
        Some(path) => {
            let (cfg, digest) = load_configuration(path)?;
            (RunReport::new("check-bound", digest), Counts::of(&cfg))
        }
        None => (
            RunReport::new("check-bound", String::new()),
            Counts {
                d: args.d,
                m: args.m,
                joints: args.joints.ok_or_else(|| CliError::Usage("--J is required without --config".into()))?,
                lines: args.lines.clone(),
                flats: args.flats,
            },
        ),
    };
    let one_line_count = |name: &str| -> Result<u64, CliError> {
        match counts.lines.as_slice() {
            [l] => Ok(*l),
            many if !many.is_empty() => Ok(many.iter().sum()),
            _ => Err(CliError::Usage(format!("--L is required for the {name} bound"))),
        }
    };
    let check = match args.theorem {
        Theorem::Main => {
            if counts.d < 2 {
                return Err(CliError::Usage("the joints bound needs d >= 2".into()));
            }
            verify::joints_bound_check(counts.d as u32, counts.joints, one_line_count("main")?)
        }
        Theorem::Multijoints => {
            if counts.lines.len() < 2 {
                return Err(CliError::Usage("give one --L count per family, at least two".into()));
            }
            verify::multijoints_bound_check(counts.joints, counts.lines.clone())
        }
        Theorem::Conj34 => {
            let families: [u64; 3] = counts
                .lines
                .as_slice()
                .try_into()
                .map_err(|_| CliError::Usage("give exactly three --L counts".into()))?;
            verify::sharp_multijoints_check(counts.joints, families)
        }
        Theorem::Flats => {
            let m = counts.m.ok_or_else(|| CliError::Usage("--m is required for the flats bound".into()))?;
            if m == 0 || m >= counts.d {
                return Err(CliError::Usage(format!("need 1 <= m < d, got m={m}, d={}", counts.d)));
            }
            let flats = counts.flats.ok_or_else(|| CliError::Usage("--F is required for the flats bound".into()))?;
            verify::flat_bound_check(counts.d as u32, m as u32, counts.joints, one_line_count("flats")?, flats)
        }
    };
    report.push(check);
    Ok(report)
}

/// Counts feeding a bound.
struct Counts {
    d: usize,
    m: Option<usize>,
    joints: u64,
    lines: Vec<u64>,
    flats: Option<u64>,
}

impl Counts {
    fn of(cfg: &Configuration) -> Self {
        match cfg {
            Configuration::Joints(c) => Counts {
                d: c.dim(),
                m: None,
                joints: c.joint_count() as u64,
                lines: vec![c.line_count() as u64],
                flats: None,
            },
            Configuration::Multijoints(c) => Counts {
                d: c.dim(),
                m: None,
                joints: c.joint_count() as u64,
                lines: c.family_sizes(),
                flats: None,
            },
            Configuration::Flat(c) => Counts {
                d: c.dim(),
                m: Some(c.m()),
                joints: c.joint_count() as u64,
                lines: vec![c.lines().len() as u64],
                flats: Some(c.flats().len() as u64),
            },
        }
    }
}

fn count(args: &CountArgs) -> Result<u128, CliError> {
    if let Some(path) = &args.rainbow {
        let g = GraphDocument::parse(&read_text(path)?.0)?.colored_graph()?;
        return Ok(count_rainbow_triangles(&g)?);
    }
    let path = args.simplices.as_ref().expect("clap requires one counter");
    let h = GraphDocument::parse(&read_text(path)?.0)?.hypergraph()?;
    Ok(count_simplices(&h, args.d.unwrap_or(h.arity() + 1))?)
}

fn print_report(report: &RunReport, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    match format {
        Format::Text => emit(out, &report.to_text()),
        Format::Json => emit(out, &(report.to_json() + "\n")),
    }
}

/// Runs one command. `Ok(false)` means some check failed.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool, CliError> {
    match &cli.command {
        Command::Generate(args) => {
            let cfg = generate(args)?;
            let doc = ConfigDocument::from_configuration(&cfg, true);
            deliver(&doc, &summary(&cfg), args.out.as_deref(), out, err)?;
            Ok(true)
        }
        Command::Detect(args) => {
            let mut doc = ConfigDocument::parse(&read_text(&args.config)?.0)?;
            if doc.kind == document::Kind::Flatjoints {
                return Err(CliError::Usage("flat joints are listed explicitly and not detected".into()));
            }
            doc.joints = None;
            let cfg = doc.to_configuration()?;
            let detected = ConfigDocument::from_configuration(&cfg, true);
            deliver(&detected, &summary(&cfg), args.out.as_deref(), out, err)?;
            Ok(true)
        }
        Command::Verify(args) => {
            let (cfg, digest) = load_configuration(&args.config)?;
            let report = verify::verify(&cfg, &args.run.options(), digest);
            if let Some(p) = &args.json {
                write_file(p, &(report.to_json() + "\n"))?;
            }
            print_report(&report, args.format, out)?;
            Ok(report.passed)
        }
        Command::CheckBound(args) => {
            let report = check_bound(args)?;
            print_report(&report, args.format, out)?;
            Ok(report.passed)
        }
        Command::Count(args) => {
            emit(out, &format!("{}\n", count(args)?))?;
            Ok(true)
        }
        Command::Report(args) => {
            let (cfg, digest) = load_configuration(&args.config)?;
            let mut report = verify::verify(&cfg, &args.run.options(), digest);
            report.command = "report".into();
            let dir = match &args.out_dir {
                Some(d) => d.clone(),
                None => args.config.parent().map(Path::to_path_buf).unwrap_or_default(),
            };
            let stem = args.config.file_stem().and_then(|s| s.to_str()).unwrap_or("config");
            let json_path = dir.join(format!("{stem}.report.json"));
            let text_path = dir.join(format!("{stem}.report.txt"));
            write_file(&json_path, &(report.to_json() + "\n"))?;
            write_file(&text_path, &report.to_text())?;
            emit(out, &report.to_text())?;
            emit(err, &format!("wrote {} and {}\n", json_path.display(), text_path.display()))?;
            Ok(report.passed)
        }
    }
}
