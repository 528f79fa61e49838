use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use ovalkit::gallery::GalleryConfig;
use ovalkit::request::{self, CurveKind, Operation, ScenarioFlags};
use ovalkit::scenario::{run_scenario, OutputFormat, ResultDocument, RunError, Scenario, ScenarioParseError};
use ovalkit::service::{serve, ServiceConfig};
use ovalkit::svg::{emit_svg, SvgStyle};

const EXIT_INVALID: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "ovalkit", version, about = "Offsets, envelopes and singular points of plane curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Offset curves at each distance.
    Offset(ScenarioArgs),
    /// Envelope of a circle family along the progenitor.
    Envelope(ScenarioArgs),
    /// Cusps and crunodes of the offsets.
    Singular(ScenarioArgs),
    /// Zero set of the implicit polynomial.
    Contour(ScenarioArgs),
    /// Run the built-in gallery.
    Gallery(GalleryArgs),
    /// Start the local HTTP service.
    Serve {
        /// Port on 127.0.0.1; defaults to OVALKIT_PORT or 7878.
        #[arg(long)]
        port: Option<u16>,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario JSON file; flags override its fields.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// cayley, ellipse, unit_circle, figure_eight or cos_sin_cubed.
    #[arg(long, value_parser = |s: &str| s.parse::<CurveKind>())]
    curve: Option<CurveKind>,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    /// Offset distances, comma-separated.
    #[arg(long, allow_negative_numbers = true, value_delimiter = ',')]
    d: Option<Vec<f64>>,
    /// left, right or both.
    #[arg(long, value_parser = request::parse_sides)]
    side: Option<ovalkit::offset::Sides>,
    #[arg(long)]
    samples: Option<usize>,
    /// Parameter range `lo,hi`.
    #[arg(long, allow_negative_numbers = true, value_parser = request::parse_range)]
    range: Option<[f64; 2]>,
    /// Envelope radius law: offset_distance, constant or abs_cos_center_x.
    #[arg(long)]
    law: Option<String>,
    /// Radius for the constant law.
    #[arg(long, allow_negative_numbers = true)]
    r: Option<f64>,
    /// Contour grid cells per axis.
    #[arg(long)]
    cells: Option<usize>,
    /// json or svg.
    #[arg(long, value_parser = request::parse_format)]
    format: Option<OutputFormat>,
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GalleryArgs {
    /// Directory for one file per entry; standard output (JSON lines) if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = request::parse_format, default_value = "json")]
    format: OutputFormat,
    /// Run only the named entries.
    #[arg(long)]
    only: Vec<String>,
    /// List entry names and exit.
    #[arg(long)]
    list: bool,
}

enum Failure {
    Invalid(String),
    Numerical(RunError),
    Io(String),
}

impl From<ScenarioParseError> for Failure {
    fn from(e: ScenarioParseError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Invalid(e) => Failure::Invalid(e.to_string()),
            other => Failure::Numerical(other),
        }
    }
}

fn build(op: Operation, args: &ScenarioArgs) -> Result<Scenario, Failure> {
    let base = match &args.scenario {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            Some(Scenario::from_json(&text)?)
        }
        None => None,
    };
    let radius = match (&args.law, args.r) {
        (None, None) => None,
        (law, r) => Some(
            request::parse_radius(law.as_deref().unwrap_or("constant"), r)
                .map_err(|m| Failure::Invalid(format!("law: {m}")))?,
        ),
    };
    let flags = ScenarioFlags {
        curve: args.curve,
        a: args.a,
        b: args.b,
        d: args.d.clone(),
        sides: args.side,
        samples: args.samples,
        range: args.range,
        format: args.format,
        radius,
        cells: args.cells,
    };
    flags.build(op, base).map_err(|e| Failure::Invalid(e.to_string()))
}

fn render(doc: &ResultDocument, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => doc.to_json(),
        OutputFormat::Svg => emit_svg(doc, &SvgStyle::default()),
    }
}

fn write_out(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_one(op: Operation, args: &ScenarioArgs) -> Result<(), Failure> {
    let s = build(op, args)?;
    let doc = run_scenario(&s)?;
    write_out(args.out.as_ref(), &render(&doc, s.format))
}

fn run_gallery(args: &GalleryArgs) -> Result<(), Failure> {
    let mut g = GalleryConfig::builtin();
    if args.list {
        for e in &g.entries {
            println!("{}", e.name);
        }
        return Ok(());
    }
    if !args.only.is_empty() {
        if let Some(missing) = args.only.iter().find(|n| g.get(n).is_none()) {
            return Err(Failure::Invalid(format!("no gallery entry named `{missing}`")));
        }
        g.entries.retain(|e| args.only.contains(&e.name));
    }
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    }
    for (name, result) in g.run() {
        let doc = result?;
        match &args.out {
            Some(dir) => {
                let ext = match args.format {
                    OutputFormat::Json => "json",
                    OutputFormat::Svg => "svg",
                };
                write_out(Some(&dir.join(format!("{name}.{ext}"))), &render(&doc, args.format))?;
            }
            None => match args.format {
                OutputFormat::Json => println!("{}", serde_json::to_string(&doc).expect("document serializes")),
                OutputFormat::Svg => print!("{}", render(&doc, args.format)),
            },
        }
    }
    Ok(())
}

fn serve_cmd(port: Option<u16>) -> Result<(), Failure> {
    let mut config = ServiceConfig::from_env().map_err(Failure::Invalid)?;
    if let Some(p) = port {
        config.port = p;
    }
    let rt = tokio::runtime::Runtime::new().map_err(|e| Failure::Io(e.to_string()))?;
    eprintln!("listening on http://127.0.0.1:{}", config.port);
    rt.block_on(serve(config)).map_err(|e| Failure::Io(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Offset(a) => run_one(Operation::Offset, a),
        Command::Envelope(a) => run_one(Operation::Envelope, a),
        Command::Singular(a) => run_one(Operation::Singular, a),
        Command::Contour(a) => run_one(Operation::Contour, a),
        Command::Gallery(a) => run_gallery(a),
        Command::Serve { port } => serve_cmd(*port),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(m)) => {
            eprintln!("invalid scenario: {m}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Numerical(e)) => {
            let diagnostics = match &e {
                RunError::Numerical { diagnostics, .. } => serde_json::to_value(diagnostics).expect("serializable"),
                _ => json!({}),
            };
            let body = json!({ "error": "numerical", "message": e.to_string(), "diagnostics": diagnostics });
            eprintln!("{}", serde_json::to_string_pretty(&body).expect("serializable"));
            ExitCode::from(EXIT_NUMERICAL)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::FAILURE
        }
    }
}
