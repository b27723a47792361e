use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use umap_rips::io::{self, PointMetric};
use umap_rips::neighborhood::DEFAULT_FLOOR;
use umap_rips::rips::{betti_gf2, excision_check, merge_tree, wedge_complex};
use umap_rips::stability::umap_stability_certificates;
use umap_rips::synth::{random_system, WeightSource};
use umap_rips::{EpMetric, Error, ExtDist, NeighborhoodSystem, Rational, Scalar, WeightScheme};

/// Largest point count accepted by the full-neighborhood homology check.
const FULL_NEIGHBORHOOD_MAX_POINTS: usize = 6;

#[derive(Parser)]
#[command(name = "umap-rips", version, about = "UMAP neighborhood metrics and Rips cluster hierarchies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Merge tree and per-scale partitions of the UMAP metric.
    Cluster {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Excision and full-neighborhood homology checks.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        which: Which,
        /// Check this input instead of a generated suite (excision only).
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "distance-csv")]
        format: Format,
        #[command(flatten)]
        weighting: WeightArgs,
        /// Number of points of the full-neighborhood instance; all of 2..=6 when absent.
        #[arg(long)]
        points: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Interleaving certificates for an inclusion of neighborhood systems.
    VerifyStability {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        /// Two-column CSV mapping X identifiers to Y identifiers.
        #[arg(long)]
        inclusion: PathBuf,
        #[arg(long, value_enum, default_value = "distance-csv")]
        format: Format,
        #[command(flatten)]
        weighting: WeightArgs,
        /// k for Y, when it differs from X.
        #[arg(long)]
        y_k: Option<usize>,
        /// Weight scheme for Y, when it differs from X.
        #[arg(long, value_enum)]
        y_scheme: Option<Scheme>,
        /// Ambient distance CSV for an unweighted Y neighborhood file.
        #[arg(long)]
        y_ambient: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "distance-csv")]
    format: Format,
    #[command(flatten)]
    weighting: WeightArgs,
}

#[derive(Args, Clone)]
struct WeightArgs {
    /// Distance used for points-csv input.
    #[arg(long, value_enum, default_value = "euclidean")]
    metric: Metric,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value = "scaled")]
    scheme: Scheme,
    #[arg(long, default_value = DEFAULT_FLOOR)]
    floor: String,
    /// Ambient distance CSV for an unweighted neighborhood-json input.
    #[arg(long)]
    ambient: Option<PathBuf>,
}

#[derive(Args)]
struct CommonArgs {
    #[arg(long, value_enum, default_value = "float")]
    mode: Mode,
    /// Largest cell dimension built for homology.
    #[arg(long, default_value_t = 2)]
    cap: usize,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    PointsCsv,
    DistanceCsv,
    NeighborhoodJson,
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    Euclidean,
    Manhattan,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    Ambient,
    Scaled,
    Shifted,
}

impl From<Scheme> for WeightScheme {
    fn from(s: Scheme) -> Self {
        match s {
            Scheme::Ambient => WeightScheme::Ambient,
            Scheme::Scaled => WeightScheme::Scaled,
            Scheme::Shifted => WeightScheme::Shifted,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Float,
    Rational,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Excision,
    Remark5,
    All,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_system<S: Scalar>(path: &Path, format: Format, w: &WeightArgs) -> anyhow::Result<NeighborhoodSystem<S>> {
    let text = read(path)?;
    let floor = S::parse(&w.floor)?;
    let ambient: EpMetric<S> = match format {
        Format::NeighborhoodJson => {
            let ns = io::parse_neighborhood_json::<S>(&text)?;
            if ns.is_weighted() {
                return Ok(ns);
            }
            let Some(ambient_path) = &w.ambient else {
                bail!("{} has no weights; pass --ambient with a distance CSV", path.display());
            };
            let ambient = io::parse_distance_csv::<S>(&read(ambient_path)?)?;
            return Ok(ns.weighted(&ambient, w.scheme.into(), &floor)?);
        }
        Format::DistanceCsv => io::parse_distance_csv(&text)?,
        Format::PointsCsv => {
            let metric = match w.metric {
                Metric::Euclidean => PointMetric::Euclidean,
                Metric::Manhattan => PointMetric::Manhattan,
            };
            io::parse_points_csv(&text, metric)?
        }
    };
    let Some(k) = w.k else {
        bail!("--k is required for {} input", path.display());
    };
    Ok(NeighborhoodSystem::knn(&ambient, k)?.weighted(&ambient, w.scheme.into(), &floor)?)
}

fn write(out: &Path, name: &str, value: &Value) -> anyhow::Result<()> {
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    let path = out.join(name);
    io::write_json_atomic(&path, value).with_context(|| format!("cannot write {}", path.display()))
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn cluster<S: Scalar>(input: &InputArgs, common: &CommonArgs) -> anyhow::Result<bool> {
    let ns = load_system::<S>(&input.input, input.format, &input.weighting)?;
    let d = ns.umap_metric()?;
    let f = merge_tree(&d);
    write(&common.out, "dendrogram.json", &io::dendrogram_json(&f, d.points()))?;
    write(&common.out, "partitions.json", &io::partition_report_json(&f, d.points()))?;
    println!("components at s=inf: {}", f.roots().len());
    Ok(true)
}

fn excision_entry<S: Scalar>(ns: &NeighborhoodSystem<S>, label: Value) -> anyhow::Result<(bool, Value)> {
    let report = excision_check(ns)?;
    let ids = ns.points();
    let mismatches: Vec<Value> = report
        .mismatches
        .iter()
        .map(|mm| {
            let blocks = |p: &umap_rips::Partition| -> Value {
                p.blocks().iter().map(|b| b.iter().map(|&i| ids[i].clone()).collect::<Vec<_>>()).collect()
            };
            json!({ "s": mm.scale.to_json(), "wedge": blocks(&mm.wedge), "colimit": blocks(&mm.colimit) })
        })
        .collect();
    let ok = report.verdict();
    Ok((ok, json!({ "instance": label, "points": ids.len(), "scales": report.scales.len(), "mismatches": mismatches, "verdict": ok })))
}

/// Full neighborhoods with unit weights on `n` points, glued star complexes at s = ∞.
fn full_neighborhood_entry<S: Scalar>(n: usize) -> anyhow::Result<(bool, Value)> {
    if n > FULL_NEIGHBORHOOD_MAX_POINTS {
        return Err(Error::Resource(format!(
            "the full-neighborhood check is limited to {FULL_NEIGHBORHOOD_MAX_POINTS} points, got {n}"
        ))
        .into());
    }
    if n < 2 {
        bail!("the full-neighborhood check needs at least 2 points, got {n}");
    }
    let ids = (0..n).map(|i| format!("p{i}")).collect();
    let neighbors = (0..n).map(|x| (0..n).filter(|&y| y != x).collect()).collect();
    let ns = NeighborhoodSystem::<S>::new(ids, neighbors)?.with_weights(vec![vec![S::one(); n - 1]; n])?;
    let report = betti_gf2(&wedge_complex(&ns, &ExtDist::Inf, n - 1)?)?;
    let m = (n - 1) as i64;
    let expected_chi = 1 - m * m;
    let mut expected_betti = vec![1, (m * m) as usize];
    expected_betti.resize(n, 0);
    let ok = report.complete && report.euler_characteristic == expected_chi && report.betti == expected_betti;
    println!(
        "full neighborhood points={n}: chi={} betti={:?} expected chi={expected_chi} b1={} {}",
        report.euler_characteristic,
        report.betti,
        m * m,
        pass(ok)
    );
    let mut value = io::betti_json(&report);
    value["points"] = json!(n);
    value["expected_chi"] = json!(expected_chi);
    value["expected_betti"] = json!(expected_betti);
    value["verdict"] = json!(ok);
    Ok((ok, value))
}

#[allow(clippy::too_many_arguments)]
fn verify<S: Scalar>(
    which: Which,
    input: Option<&Path>,
    format: Format,
    weighting: &WeightArgs,
    points: Option<usize>,
    seed: u64,
    instances: usize,
    common: &CommonArgs,
) -> anyhow::Result<bool> {
    let mut all_ok = true;
    let mut report = serde_json::Map::new();
    report.insert("mode".into(), json!(S::MODE));
    if which != Which::Remark5 {
        let mut entries = Vec::new();
        let mut passed = 0;
        if let Some(path) = input {
            let ns = load_system::<S>(path, format, weighting)?;
            let (ok, entry) = excision_entry(&ns, json!(path.display().to_string()))?;
            passed += usize::from(ok);
            entries.push(entry);
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in 0..instances {
                let source = WeightSource::ALL[i % WeightSource::ALL.len()];
                let ns = random_system::<S, _>(&mut rng, 12, 4, source)?;
                let (ok, entry) = excision_entry(&ns, json!(format!("{seed}/{i}/{}", source.name())))?;
                passed += usize::from(ok);
                entries.push(entry);
            }
        }
        let ok = passed == entries.len();
        println!("excision: {passed}/{} instances agree {}", entries.len(), pass(ok));
        report.insert("excision".into(), json!({ "instances": entries, "verdict": ok }));
        all_ok &= ok;
    }
    if which != Which::Excision {
        let sizes: Vec<usize> = match points {
            Some(n) => vec![n],
            None => (2..=FULL_NEIGHBORHOOD_MAX_POINTS).collect(),
        };
        let mut entries = Vec::new();
        let mut ok = true;
        for n in sizes {
            let (entry_ok, entry) = full_neighborhood_entry::<S>(n)?;
            ok &= entry_ok;
            entries.push(entry);
        }
        report.insert("full_neighborhood".into(), json!({ "instances": entries, "verdict": ok }));
        all_ok &= ok;
    }
    report.insert("verdict".into(), json!(all_ok));
    write(&common.out, "verify.json", &Value::Object(report))?;
    Ok(all_ok)
}

#[allow(clippy::too_many_arguments)]
fn verify_stability<S: Scalar>(
    x: &Path,
    y: &Path,
    inclusion: &Path,
    format: Format,
    weighting: &WeightArgs,
    y_k: Option<usize>,
    y_scheme: Option<Scheme>,
    y_ambient: Option<&PathBuf>,
    common: &CommonArgs,
) -> anyhow::Result<bool> {
    let source = load_system::<S>(x, format, weighting)?;
    let mut y_weighting = weighting.clone();
    if let Some(k) = y_k {
        y_weighting.k = Some(k);
    }
    if let Some(scheme) = y_scheme {
        y_weighting.scheme = scheme;
    }
    if let Some(path) = y_ambient {
        y_weighting.ambient = Some(path.clone());
    }
    let target = load_system::<S>(y, format, &y_weighting)?;
    let map = io::parse_inclusion_csv(&read(inclusion)?, source.points(), target.points())?;
    let certificates = umap_stability_certificates(&source, &target, &map)?;
    let mut all_ok = true;
    for (i, uc) in certificates.iter().enumerate() {
        let cert = &uc.certificate;
        let mut value = io::certificate_json(cert, uc.inclusion.source().points(), uc.inclusion.target().points());
        value["component"] = json!(uc.inclusion.source().points());
        write(&common.out, &format!("certificate-{i}.json"), &value)?;
        println!(
            "component {i} ({} points): m={} r={} scales={} {}",
            uc.source_component.len(),
            cert.m.render(),
            cert.r.render(),
            cert.scales.len(),
            pass(cert.verdict())
        );
        all_ok &= cert.verdict();
    }
    Ok(all_ok)
}

fn run<S: Scalar>(cli: &Cli) -> anyhow::Result<bool> {
    match &cli.command {
        Command::Cluster { input, common } => cluster::<S>(input, common),
        Command::Verify { which, input, format, weighting, points, seed, instances, common } => {
            if common.cap == 0 {
                bail!("--cap must be at least 1");
            }
            verify::<S>(*which, input.as_deref(), *format, weighting, *points, *seed, *instances, common)
        }
        Command::VerifyStability { x, y, inclusion, format, weighting, y_k, y_scheme, y_ambient, common } => {
            verify_stability::<S>(x, y, inclusion, *format, weighting, *y_k, *y_scheme, y_ambient.as_ref(), common)
        }
    }
}

fn mode(cli: &Cli) -> Mode {
    match &cli.command {
        Command::Cluster { common, .. } | Command::Verify { common, .. } | Command::VerifyStability { common, .. } => {
            common.mode
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match mode(&cli) {
        Mode::Float => run::<f64>(&cli),
        Mode::Rational => run::<Rational>(&cli),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            if let Some(Error::Precondition { violations, .. }) = err.downcast_ref::<Error>() {
                for v in violations {
                    eprintln!("  {v}");
                }
            }
            ExitCode::from(2)
        }
    }
}
