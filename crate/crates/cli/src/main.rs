use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use texcurve::analysis::{self, DEFAULT_SAMPLES};
use texcurve::container;
use texcurve::reference::{bernstein_to_power, boehm_to_bezier};
use texcurve::{
    encode_bicubic_rgba, encode_bilinear_patch, encode_dc_cubic, encode_dc_quadratic,
    encode_dc_zigzag, encode_rational, encode_seiler, Basis, CurveFile, EncodeOptions,
    EncodedCurve, Error, EvalMode, Param, Point, RationalBase, ReferenceEval, SamplerConfig,
    SubtexelRounding, TexelFormat, ZigzagSeed,
};

#[derive(Parser)]
#[command(name = "texcurve", version, about = "Encode polynomial curves into texel grids and evaluate them through emulated texture filtering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a curve file into a CTEX1 container.
    Encode(EncodeArgs),
    /// Evaluate a container at given parameters.
    Eval(EvalArgs),
    /// Compare texture-path evaluation with a reference; writes CSV.
    Sweep(SweepArgs),
    /// Render a deviation image (binary PPM).
    Render(RenderArgs),
    /// Basis conversion and B-spline to Bézier extraction.
    Convert(ConvertArgs),
    /// Dump a container header and its texels.
    Inspect(InspectArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum LayoutArg {
    /// De Casteljau quadratic (2x2) or cubic (2x2x2), by degree.
    Dc,
    Zigzag,
    Seiler,
    Patch,
    Bicubic,
    Rational,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaseArg {
    Seiler,
    Dc,
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long, value_enum)]
    layout: LayoutArg,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value = "f32")]
    format: TexelFormat,
    /// Fit out-of-range texels into [0, 1] with a stored transform.
    #[arg(long)]
    rescale: bool,
    /// Zig-zag free texel: `default`, `auto` (minimize excursion) or values.
    #[arg(long)]
    seed_texel: Option<String>,
    /// Layout used for the homogeneous channels of a rational curve.
    #[arg(long, value_enum, default_value = "seiler")]
    rational_base: BaseArg,
    #[arg(long)]
    out: PathBuf,
    /// Also write the key/value description next to the container.
    #[arg(long)]
    sidecar: Option<PathBuf>,
}

#[derive(Args)]
struct SamplerArgs {
    /// Fixed-point fraction bits; 0 is an ideal (exact) sampler.
    #[arg(long, default_value_t = 8)]
    bits: u32,
    #[arg(long, default_value = "nearest")]
    subtexel_rounding: SubtexelRounding,
}

impl SamplerArgs {
    fn config(&self) -> texcurve::Result<SamplerConfig> {
        SamplerConfig::new(self.bits, self.subtexel_rounding)
    }
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    mode: Option<EvalMode>,
    #[command(flatten)]
    sampler: SamplerArgs,
    /// Curve parameter; repeat for several values.
    #[arg(long = "t", conflicts_with_all = ["u", "v"])]
    t: Vec<f64>,
    #[arg(long, requires = "v")]
    u: Option<f64>,
    #[arg(long, requires = "u")]
    v: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    /// Encoded container.
    #[arg(long = "in")]
    input: PathBuf,
    /// Curve file the container was encoded from.
    #[arg(long)]
    curve: PathBuf,
    #[arg(long)]
    mode: Option<EvalMode>,
    #[arg(long, default_value = "bernstein")]
    reference: ReferenceEval,
    #[command(flatten)]
    sampler: SamplerArgs,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    curve: PathBuf,
    #[arg(long)]
    mode: Option<EvalMode>,
    #[arg(long, default_value = "bernstein")]
    reference: ReferenceEval,
    #[command(flatten)]
    sampler: SamplerArgs,
    #[arg(long, default_value_t = analysis::RENDER_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 512)]
    width: usize,
    #[arg(long, default_value_t = 512)]
    height: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("conversion").required(true)))]
struct ConvertArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, group = "conversion")]
    power_to_bernstein: bool,
    #[arg(long, group = "conversion")]
    bernstein_to_power: bool,
    /// Split a B-spline into a chain of Bézier segments.
    #[arg(long, group = "conversion")]
    boehm: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InspectArgs {
    #[arg(long = "in")]
    input: PathBuf,
}

fn read_curve(path: &Path) -> anyhow::Result<CurveFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    CurveFile::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load(path: &Path) -> anyhow::Result<EncodedCurve> {
    Ok(container::load(path)?)
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            Ok(stdout.flush()?)
        }
    }
}

fn parse_seed(seed: Option<&str>, channels: usize) -> anyhow::Result<ZigzagSeed> {
    Ok(match seed {
        None | Some("default") => ZigzagSeed::Default,
        Some("auto") => ZigzagSeed::MinimizeExcursion,
        Some(values) => {
            let v = values
                .split([',', ' '])
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<f64>().map_err(|_| anyhow!("bad seed value `{s}`")))
                .collect::<anyhow::Result<Vec<_>>>()?;
            if v.len() == 1 && channels > 1 {
                ZigzagSeed::Value(Point::splat(v[0], channels))
            } else {
                ZigzagSeed::Value(Point::new(&v)?)
            }
        }
    })
}

fn encode(args: &EncodeArgs) -> anyhow::Result<()> {
    let file = read_curve(&args.input)?;
    let opts = EncodeOptions {
        format: args.format,
        rescale: args.rescale,
    };
    let curve = match args.layout {
        LayoutArg::Dc => {
            let poly = file.polygon()?;
            match poly.degree() {
                2 => encode_dc_quadratic(&poly, &opts)?,
                3 => encode_dc_cubic(&poly, &opts)?,
                degree => Err(Error::UnsupportedDegree {
                    degree,
                    limit: "de Casteljau layouts hold quadratics and cubics",
                })?,
            }
        }
        LayoutArg::Zigzag => {
            let seed = parse_seed(args.seed_texel.as_deref(), file.channels)?;
            encode_dc_zigzag(&file.chain()?, seed, &opts)?
        }
        LayoutArg::Seiler => encode_seiler(&file.polygon()?, &opts)?,
        LayoutArg::Patch => encode_bilinear_patch(&file.net()?, &opts)?,
        LayoutArg::Bicubic => encode_bicubic_rgba(&file.net()?, &opts)?,
        LayoutArg::Rational => {
            let weights = file
                .weights
                .as_ref()
                .ok_or_else(|| anyhow!("rational layout needs a `weights` line"))?;
            let base = match args.rational_base {
                BaseArg::Seiler => RationalBase::Seiler,
                BaseArg::Dc => RationalBase::DeCasteljau,
            };
            encode_rational(&file.polygon()?, weights, base, &opts)?
        }
    };
    container::save(&curve, &args.out)?;
    let summary = container::sidecar(&curve);
    if let Some(p) = &args.sidecar {
        fs::write(p, &summary).with_context(|| format!("writing {}", p.display()))?;
    }
    emit(None, summary.as_bytes())
}

fn mode_for(curve: &EncodedCurve, mode: Option<EvalMode>) -> EvalMode {
    mode.unwrap_or_else(|| EvalMode::default_for(curve.layout))
}

fn format_point(p: &Point) -> String {
    p.as_slice().iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" ")
}

fn eval(args: &EvalArgs) -> anyhow::Result<()> {
    let curve = load(&args.input)?;
    let mode = mode_for(&curve, args.mode);
    let cfg = args.sampler.config()?;
    let params: Vec<Param> = match (args.u, args.v) {
        (Some(u), Some(v)) => vec![Param::Surface(u, v)],
        _ if args.t.is_empty() => bail!("give --t or --u/--v"),
        _ => args.t.iter().map(|&t| Param::Curve(t)).collect(),
    };
    let mut out = String::new();
    for p in params {
        out += &format_point(&texcurve::eval_with(&curve, mode, p, &cfg)?);
        out.push('\n');
    }
    emit(None, out.as_bytes())
}

fn sweep(args: &SweepArgs) -> anyhow::Result<()> {
    let curve = load(&args.input)?;
    let source = read_curve(&args.curve)?.source(curve.layout)?;
    let cfg = args.sampler.config()?;
    let mode = mode_for(&curve, args.mode);
    let report = analysis::sweep(&curve, &source, args.reference, mode, &cfg, args.samples)?;
    emit(args.out.as_deref(), report.to_csv().as_bytes())
}

fn render(args: &RenderArgs) -> anyhow::Result<()> {
    let curve = load(&args.input)?;
    let source = read_curve(&args.curve)?.source(curve.layout)?;
    let cfg = args.sampler.config()?;
    let mode = mode_for(&curve, args.mode);
    let report = analysis::sweep(&curve, &source, args.reference, mode, &cfg, args.samples)?;
    let img = analysis::render_report(&report, args.width, args.height)?;
    emit(args.out.as_deref(), &img.to_ppm())
}

fn convert(args: &ConvertArgs) -> anyhow::Result<()> {
    let file = read_curve(&args.input)?;
    let text = if args.power_to_bernstein {
        let mut power = file.clone();
        power.basis = Basis::Power;
        CurveFile::from_polygon(&power.polygon()?).to_string()
    } else if args.bernstein_to_power {
        let coeffs = bernstein_to_power(&file.polygon()?)?;
        CurveFile {
            basis: Basis::Power,
            points: coeffs,
            ..CurveFile::from_polygon(&file.polygon()?)
        }
        .to_string()
    } else {
        let segments = boehm_to_bezier(&file.spline()?)?;
        let mut text = String::new();
        for (i, s) in segments.iter().enumerate() {
            text += &format!("# segment {i} covers [{:?}, {:?}]\n", s.domain.0, s.domain.1);
        }
        let polys: Vec<_> = segments.into_iter().map(|s| s.poly).collect();
        text + &CurveFile::from_chain(&polys)?.to_string()
    };
    emit(args.out.as_deref(), text.as_bytes())
}

fn inspect(args: &InspectArgs) -> anyhow::Result<()> {
    let curve = load(&args.input)?;
    let grid = &curve.grid;
    let (w, h, d) = grid.dims();
    let raw = grid.unorm_values();
    let c = grid.channels();
    let mut out = container::sidecar(&curve);
    for z in 0..d {
        for y in 0..h {
            for x in 0..w {
                let texel = grid.texel(x, y, z);
                out += &format!("texel {x} {y} {z}: {}", format_point(&texel));
                if let Some(raw) = &raw {
                    let i = ((z * h + y) * w + x) * c;
                    let ints: Vec<String> = raw[i..i + c].iter().map(|v| v.to_string()).collect();
                    out += &format!(" (raw {})", ints.join(" "));
                }
                out.push('\n');
            }
        }
    }
    emit(None, out.as_bytes())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::Range { .. }) => 2,
        Some(Error::UnsupportedDegree { .. }) => 3,
        Some(Error::LayoutMismatch(_)) => 4,
        Some(Error::OutOfDomain { .. }) => 5,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Encode(a) => encode(a),
        Command::Eval(a) => eval(a),
        Command::Sweep(a) => sweep(a),
        Command::Render(a) => render(a),
        Command::Convert(a) => convert(a),
        Command::Inspect(a) => inspect(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
