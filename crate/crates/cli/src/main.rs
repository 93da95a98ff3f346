use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use oscu_core::algebra::{Field, FieldElement, SymForm};
use oscu_core::fixtures;
use oscu_core::frames::{self, line_oracle, oracle_directions, AdaptedChart, FubiniTuple};
use oscu_core::geometry::{build_family, hilbert_of};
use oscu_core::moduli::{gauss_image_report, rank_phi};
use oscu_core::parser_io::{parse_field_element, parse_homogeneous, FieldSpec, Format, HypersurfaceSpec, Report};
use oscu_core::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser, Debug)]
#[command(name = "oscu", version, about = "Fubini forms, osculating lines and moduli ranks of hypersurfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Args, Debug, Clone)]
struct Options {
    /// Spec file (JSON).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Override the base point, e.g. "1,1,0,t".
    #[arg(long, global = true, allow_hyphen_values = true)]
    point: Option<String>,
    /// Override the order d (2..=12).
    #[arg(long, global = true)]
    order: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Text)]
    format: OutFormat,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Number of random samples (directions, points).
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum OutFormat {
    Text,
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Text => Format::Text,
            OutFormat::Json => Format::Json,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fubini forms F_2..F_{d+1} at the base point.
    Fubini,
    /// Ranks of the differential of the moduli map.
    Rank,
    /// Cross-check line contact orders against the forms.
    Oracle,
    /// Write the spec of the graph of p_2 + .. + p_d.
    Family(FamilyArgs),
    /// Hilbert function of (F_2, .., F_{d+1}) and syzygy defects.
    Hilbert {
        /// Largest degree (at most d + 4).
        #[arg(long)]
        max_degree: Option<u32>,
    },
    /// Built-in examples.
    Demo {
        #[command(subcommand)]
        which: Demo,
    },
}

#[derive(Args, Debug)]
struct FamilyArgs {
    /// Number of affine variables when drawing random forms.
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Degree d' of the hypersurface; defaults to d.
    #[arg(long)]
    degree: Option<u32>,
    /// Write the spec here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Demo {
    /// Fermat cubic in P^{n+1} over Q[t]/(t^3 - (n+1)).
    Fermat {
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// 3x3 determinant at a rank-two matrix.
    Det3,
    /// 3x3 permanent at random normalized points.
    Perm3,
}

/// Input of `family`: the forms `p_2, .., p_d` in `variables`.
#[derive(Deserialize)]
struct FamilyFile {
    variables: Vec<String>,
    #[serde(default = "FieldSpec::rational")]
    field: FieldSpec,
    forms: Vec<String>,
    degree: Option<u32>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.opts.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global();
    }
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("oscu: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<String> {
    let opts = &cli.opts;
    let report = match &cli.command {
        Command::Fubini => {
            let (spec, bytes) = load_spec(opts)?;
            cmd_fubini(&spec, &bytes)?
        }
        Command::Rank => {
            let (spec, bytes) = load_spec(opts)?;
            cmd_rank(&spec, &bytes)?
        }
        Command::Oracle => {
            let (spec, bytes) = load_spec(opts)?;
            cmd_oracle(&spec, &bytes, opts)?
        }
        Command::Hilbert { max_degree } => {
            let (spec, bytes) = load_spec(opts)?;
            cmd_hilbert(&spec, &bytes, *max_degree)?
        }
        Command::Family(args) => return cmd_family(args, opts),
        Command::Demo { which } => cmd_demo(which, opts)?,
    };
    Ok(report.emit(opts.format.into()))
}

fn load_spec(opts: &Options) -> Result<(HypersurfaceSpec, Vec<u8>)> {
    let path = opts.input.as_ref().ok_or_else(|| Error::Spec("--input FILE is required".into()))?;
    let bytes = std::fs::read(path)?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Error::Spec("spec file is not UTF-8".into()))?;
    let spec = apply_overrides(HypersurfaceSpec::from_json(&text)?, opts)?;
    Ok((spec, bytes))
}

fn apply_overrides(mut spec: HypersurfaceSpec, opts: &Options) -> Result<HypersurfaceSpec> {
    if let Some(text) = &opts.point {
        let point = text
            .split(',')
            .map(|c| parse_field_element(c.trim(), &spec.field))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        spec = spec.with_point(point)?;
    }
    if let Some(order) = opts.order {
        spec = spec.with_order(order)?;
    }
    Ok(spec)
}

fn point_strings(p: &[FieldElement]) -> Vec<String> {
    p.iter().map(ToString::to_string).collect()
}

fn describe_spec(report: &mut Report, spec: &HypersurfaceSpec) {
    report.insert("field", spec.field.describe());
    report.insert("point", point_strings(&spec.point));
    report.insert("order", spec.order);
    report.insert("dimension", spec.dim());
}

fn describe_chart(report: &mut Report, chart: &AdaptedChart) {
    report.insert(
        "frame",
        serde_json::json!({
            "rule": format!("{:?}", chart.rule()).to_lowercase(),
            "tangent_indices": chart.tangent_indices(),
            "normal_index": chart.normal_index(),
            "pivot_index": chart.pivot_index(),
        }),
    );
}

fn forms_map(t: &FubiniTuple) -> serde_json::Map<String, serde_json::Value> {
    // F10..F13 would sort before F2 as plain strings.
    t.forms()
        .iter()
        .map(|f| (format!("F{:02}", f.degree()), serde_json::Value::String(f.to_y_string())))
        .collect()
}

fn gauss_note(report: &mut Report, t: &FubiniTuple) -> Result<()> {
    let (nondeg, r) = frames::gauss_nondegenerate(t.form(2))?;
    report.insert("gauss_rank", r);
    if !nondeg {
        report.note(format!("Gauss map degenerate at this point: rank F2 = {r} < {}", t.dim()));
    }
    Ok(())
}

fn cmd_fubini(spec: &HypersurfaceSpec, input: &[u8]) -> Result<Report> {
    let (chart, t) = frames::fubini_forms(spec)?;
    let mut report = Report::new("fubini", input);
    describe_spec(&mut report, spec);
    describe_chart(&mut report, &chart);
    report.insert("forms", forms_map(&t));
    gauss_note(&mut report, &t)?;
    Ok(report)
}

fn rank_fields(report: &mut Report, t: &FubiniTuple) -> Result<()> {
    let r = rank_phi(t)?;
    report.insert("rank_tilde", r.rank_tilde);
    report.insert("rank_kernel", r.rank_kernel);
    report.insert("intersection_dim", r.intersection_dim);
    report.insert("rank_phi", r.rank_phi);
    let g = gauss_image_report(t, None)?;
    report.insert("xi_consistent", g.xi_consistent);
    report.insert("phi_member", g.phi_member);
    if let Some(v) = g.verdict {
        report.note(v);
    }
    Ok(())
}

fn cmd_rank(spec: &HypersurfaceSpec, input: &[u8]) -> Result<Report> {
    let (chart, t) = frames::fubini_forms(spec)?;
    let mut report = Report::new("rank", input);
    describe_spec(&mut report, spec);
    describe_chart(&mut report, &chart);
    gauss_note(&mut report, &t)?;
    rank_fields(&mut report, &t)?;
    report.note("ranks are computed at this point only; the stabilizer is assumed not to vary with the point");
    Ok(report)
}

fn cmd_oracle(spec: &HypersurfaceSpec, input: &[u8], opts: &Options) -> Result<Report> {
    let (chart, t) = frames::fubini_forms(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let dirs = oracle_directions(&t, &mut rng, opts.samples.unwrap_or(200))?;
    let o = line_oracle(&chart, &t, &dirs)?;
    let mut report = Report::new("oracle", input);
    describe_spec(&mut report, spec);
    report.insert("seed", opts.seed);
    report.insert("directions", o.directions);
    report.insert("form_order_counts", &o.form_order_counts);
    report.insert("contained_lines", o.contained_lines);
    report.insert("mismatches", &o.mismatches);
    if o.mismatches.is_empty() {
        report.note(format!("line oracle: {} directions agree for k = 2..{}", o.directions, spec.order));
    } else {
        return Err(Error::Precondition(format!(
            "line oracle disagrees on {} of {} directions",
            o.mismatches.len(),
            o.directions
        )));
    }
    Ok(report)
}

fn cmd_hilbert(spec: &HypersurfaceSpec, input: &[u8], max_degree: Option<u32>) -> Result<Report> {
    let (_, t) = frames::fubini_forms(spec)?;
    let gens: Vec<SymForm> = t.forms().iter().filter(|f| !f.is_zero()).cloned().collect();
    let top = spec.order + 1;
    let h = hilbert_of(&gens, t.dim(), max_degree.unwrap_or(top + 2), top + 3)?;
    let mut report = Report::new("hilbert", input);
    describe_spec(&mut report, spec);
    report.insert("generator_degrees", &h.generator_degrees);
    report.insert("ideal_dims", &h.ideal_dims);
    report.insert("quotient_dims", &h.quotient_dims);
    report.insert("predicted_quotient", &h.predicted_quotient);
    report.insert("defects", &h.defects);
    let flagged = h.flagged();
    if flagged.is_empty() {
        report.note("no syzygy defect up to the computed degree");
    } else {
        report.note(format!("syzygy defect in degrees {flagged:?}"));
    }
    Ok(report)
}

fn cmd_family(args: &FamilyArgs, opts: &Options) -> Result<String> {
    let (forms, degree) = match &opts.input {
        Some(path) => read_family(path)?,
        None => {
            let d = opts.order.unwrap_or(3);
            if !(2..=12).contains(&d) || args.n == 0 {
                return Err(Error::Precondition("family needs n >= 1 and 2 <= d <= 12".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let forms = (2..=d).map(|k| fixtures::generic_form(&mut rng, args.n, k)).collect();
            (forms, None)
        }
    };
    let d = forms.len() as u32 + 1;
    let spec = build_family(&forms, args.degree.or(degree).unwrap_or(d))?;
    let spec = apply_overrides(spec, &Options { point: None, ..opts.clone() })?;
    let json = spec.to_json();
    match &args.output {
        Some(path) => {
            std::fs::write(path, &json)?;
            Ok(String::new())
        }
        None => Ok(json),
    }
}

fn read_family(path: &Path) -> Result<(Vec<SymForm>, Option<u32>)> {
    let text = std::fs::read_to_string(path)?;
    let file: FamilyFile = serde_json::from_str(&text).map_err(|e| Error::Spec(e.to_string()))?;
    let field: Field = file.field.build()?;
    let forms = file
        .forms
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let p = parse_homogeneous(s, &file.variables, &field)?;
            SymForm::new(p, i as u32 + 2)
        })
        .collect::<Result<Vec<_>>>()?;
    if forms.is_empty() {
        return Err(Error::Spec("family needs at least p_2".into()));
    }
    Ok((forms, file.degree))
}

fn cmd_demo(which: &Demo, opts: &Options) -> Result<Report> {
    let order = opts.order.unwrap_or(3);
    match which {
        Demo::Det3 => demo_single("demo det3", apply_overrides(fixtures::det3(order)?, opts)?),
        Demo::Fermat { n } => {
            if !(1..=8).contains(n) {
                return Err(Error::Precondition(format!("fermat demo supports 1 <= n <= 8, got {n}")));
            }
            demo_single(&format!("demo fermat --n {n}"), apply_overrides(fixtures::fermat(*n, order)?, opts)?)
        }
        Demo::Perm3 => demo_perm3(opts, order),
    }
}

fn demo_single(command: &str, spec: HypersurfaceSpec) -> Result<Report> {
    let (chart, t) = frames::fubini_forms(&spec)?;
    let mut report = Report::new(command, spec.to_json().as_bytes());
    describe_spec(&mut report, &spec);
    describe_chart(&mut report, &chart);
    report.insert("forms", forms_map(&t));
    gauss_note(&mut report, &t)?;
    rank_fields(&mut report, &t)?;
    Ok(report)
}

fn demo_perm3(opts: &Options, order: u32) -> Result<Report> {
    use rayon::prelude::*;
    let count = opts.samples.unwrap_or(8);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let specs = match &opts.point {
        Some(_) => vec![apply_overrides(fixtures::perm3(fixtures::perm3_point(0, 0, 0).unwrap(), order)?, opts)?],
        None => fixtures::perm3_samples(&mut rng, count, order)?,
    };
    let rows: Vec<serde_json::Value> = specs
        .par_iter()
        .map(|s| {
            let (_, t) = frames::fubini_forms(s)?;
            let r = rank_phi(&t)?;
            Ok(serde_json::json!({
                "point": point_strings(&s.point),
                "rank_tilde": r.rank_tilde,
                "rank_phi": r.rank_phi,
            }))
        })
        .collect::<Result<_>>()?;
    let max = rows.iter().filter_map(|r| r["rank_phi"].as_u64()).max().unwrap_or(0);
    let mut report = Report::new("demo perm3", fixtures::PERM3.as_bytes());
    report.insert("seed", opts.seed);
    report.insert("order", order);
    report.insert("samples", rows);
    report.note(format!("max rank_phi over samples: {max} (bound 3)"));
    Ok(report)
}
