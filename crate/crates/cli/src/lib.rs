//! The `doems` command line: catalog build/query/summary/what-if/verify and
//! per-design Gröbner bases, model bases, and model fitting.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use doems_core::bases::enumerate_model_bases;
use doems_core::catalog::{
    build_catalog, class_summary, read_catalog, verify_theorems, whatif_add_point, write_catalog,
    Catalog, CatalogRecord, CheckStatus, QueryFilter, SummaryStats, VerificationReport, WhatIf,
};
use doems_core::dataset::DataSet;
use doems_core::error::Error;
use doems_core::field::{FieldSpec, Point};
use doems_core::ideals::{bm_reduced_gb, fit_minimal_model, IOData};
use doems_core::monomial::{encode_set, parse_set};
use doems_core::order::TermOrderSpec;

/// Exit status for caller errors: bad flags, malformed input, missing catalog.
pub const EXIT_DOMAIN: i32 = 1;
/// Exit status when a structural check fails.
pub const EXIT_INCONSISTENT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "doems",
    version,
    about = "Design of experiments and model selection over finite fields"
)]
pub struct Cli {
    /// Directory holding catalog files.
    #[arg(
        long,
        global = true,
        env = "DOEMS_CATALOG_DIR",
        default_value = "catalog"
    )]
    pub catalog_dir: PathBuf,

    /// Output style.
    #[arg(long, global = true, value_enum, default_value_t = Format::Records)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// One JSON object per line.
    Records,
    /// Aligned text for reading.
    Table,
}

#[derive(Debug, Args)]
pub struct Layer {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build every m for (p, n) and write the catalog file.
    Build {
        #[command(flatten)]
        layer: Layer,
        /// Output directory (defaults to the catalog directory).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Allow (p, n) outside the default layers.
        #[arg(long)]
        allow_override: bool,
    },
    /// List catalog records matching every given filter.
    Query {
        #[command(flatten)]
        layer: Layer,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        contains_monomial: Option<String>,
        #[arg(long)]
        dataset: Option<String>,
        #[arg(long)]
        classlabel: Option<String>,
        #[arg(long)]
        representatives_only: bool,
        #[arg(long)]
        min_bases: Option<usize>,
        #[arg(long)]
        max_bases: Option<usize>,
    },
    /// Classes of one layer with sizes, representatives, and bases.
    Summary {
        #[command(flatten)]
        layer: Layer,
        #[arg(long)]
        m: usize,
    },
    /// Effect of adding one point to a design.
    Whatif {
        #[command(flatten)]
        layer: Layer,
        #[arg(long)]
        dataset: String,
        #[arg(long)]
        add_point: String,
    },
    /// Reduced Gröbner basis and standard monomials for one term order.
    Gb {
        #[command(flatten)]
        layer: Layer,
        #[arg(long)]
        dataset: String,
        /// e.g. "lex:x1>x2", "grevlex:x2>x1", "w:3,1|lex:x1>x2"
        #[arg(long, default_value = "grevlex")]
        order: String,
    },
    /// Every model basis of one design.
    Bases {
        #[command(flatten)]
        layer: Layer,
        #[arg(long)]
        dataset: String,
    },
    /// Interpolate observed outputs on a model basis.
    Fit {
        #[command(flatten)]
        layer: Layer,
        /// Points in the same order as --outputs.
        #[arg(long)]
        dataset: String,
        /// Comma-separated residues, one per point.
        #[arg(long)]
        outputs: String,
        /// e.g. "{1,x2}"
        #[arg(long)]
        basis: String,
    },
    /// Check the class-size, staircase, and shift-matrix properties.
    Verify {
        #[command(flatten)]
        layer: Layer,
        #[arg(long)]
        m: Option<usize>,
    },
}

#[derive(Debug, Serialize)]
pub struct GbOutput {
    pub dataset: String,
    pub order: String,
    pub groebner_basis: Vec<String>,
    pub standard_monomials: String,
}

#[derive(Debug, Serialize)]
pub struct BasisOutput {
    pub basis: String,
    pub lt_generators: Vec<String>,
    pub groebner_basis: Vec<String>,
    pub certificate: Vec<u64>,
}

#[derive(Debug, Serialize)]
pub struct FitOutput {
    pub dataset: String,
    pub basis: String,
    pub model: String,
}

#[derive(Debug, Serialize)]
struct BuildOutput {
    p: u32,
    n: usize,
    records: usize,
    path: String,
}

/// Failures, split by exit status.
#[derive(Debug)]
enum Failure {
    Domain(String),
    Inconsistent(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_domain_error() {
            Failure::Domain(e.to_string())
        } else {
            Failure::Inconsistent(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Parses `args` (program name first), runs, and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_DOMAIN;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_DOMAIN
        }
        Err(Failure::Inconsistent(msg)) => {
            let _ = writeln!(err, "inconsistency: {msg}");
            EXIT_INCONSISTENT
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Outcome {
    let fmt = cli.format;
    match &cli.command {
        Command::Build {
            layer,
            out: dir,
            allow_override,
        } => {
            let catalog = build_catalog(layer.p, layer.n, *allow_override)?;
            let dir = dir.as_ref().unwrap_or(&cli.catalog_dir);
            let path = write_catalog(&catalog, dir)?;
            let report = BuildOutput {
                p: layer.p,
                n: layer.n,
                records: catalog.len(),
                path: path.display().to_string(),
            };
            match fmt {
                Format::Records => emit_json(out, &report)?,
                Format::Table => {
                    writeln!(out, "built {} records into {}", report.records, report.path)?
                }
            }
        }
        Command::Query {
            layer,
            m,
            contains_monomial,
            dataset,
            classlabel,
            representatives_only,
            min_bases,
            max_bases,
        } => {
            let mut filter = QueryFilter::from_text(
                layer.p,
                layer.n,
                *m,
                contains_monomial.as_deref(),
                dataset.as_deref(),
                classlabel.as_deref(),
                *representatives_only,
            )?;
            filter.min_bases = *min_bases;
            filter.max_bases = *max_bases;
            let catalog = load(cli, layer)?;
            let hits = catalog.query(&filter);
            match fmt {
                Format::Records => {
                    for r in hits {
                        emit_json(out, r)?;
                    }
                }
                Format::Table => record_table(out, &hits)?,
            }
        }
        Command::Summary { layer, m } => {
            let catalog = load(cli, layer)?;
            let stats = class_summary(&catalog, *m)?;
            match fmt {
                Format::Records => emit_json(out, &stats)?,
                Format::Table => summary_table(out, &stats)?,
            }
        }
        Command::Whatif {
            layer,
            dataset,
            add_point,
        } => {
            let field = FieldSpec::new(layer.p)?;
            let s = DataSet::parse(dataset, field, layer.n)?;
            let x = Point::parse(add_point, &field, layer.n)?;
            let catalog = load(cli, layer)?;
            let result = whatif_add_point(&catalog, &s, &x)?;
            match fmt {
                Format::Records => emit_json(out, &result)?,
                Format::Table => whatif_table(out, &result)?,
            }
        }
        Command::Gb {
            layer,
            dataset,
            order,
        } => {
            let s = DataSet::parse(dataset, FieldSpec::new(layer.p)?, layer.n)?;
            let order = TermOrderSpec::parse(order, layer.n)?;
            let (gb, sm) = bm_reduced_gb(&s, &order)?;
            let result = GbOutput {
                dataset: s.encode(),
                order: order.to_string(),
                groebner_basis: gb.to_strings(),
                standard_monomials: encode_set(&sm),
            };
            match fmt {
                Format::Records => emit_json(out, &result)?,
                Format::Table => {
                    writeln!(out, "GB: {}", result.groebner_basis.join(", "))?;
                    writeln!(out, "SM: {}", result.standard_monomials)?;
                }
            }
        }
        Command::Bases { layer, dataset } => {
            let s = DataSet::parse(dataset, FieldSpec::new(layer.p)?, layer.n)?;
            let found: Vec<BasisOutput> = enumerate_model_bases(&s)
                .into_iter()
                .map(|a| BasisOutput {
                    basis: a.basis.encode(),
                    lt_generators: a.corners.iter().map(|c| c.to_string()).collect(),
                    groebner_basis: a.gb.iter().map(|g| g.to_string()).collect(),
                    certificate: a.certificate,
                })
                .collect();
            match fmt {
                Format::Records => {
                    for b in &found {
                        emit_json(out, b)?;
                    }
                }
                Format::Table => {
                    for b in &found {
                        writeln!(out, "{}  GB: {}", b.basis, b.groebner_basis.join(", "))?;
                    }
                }
            }
        }
        Command::Fit {
            layer,
            dataset,
            outputs,
            basis,
        } => {
            let result = fit(layer, dataset, outputs, basis)?;
            match fmt {
                Format::Records => emit_json(out, &result)?,
                Format::Table => writeln!(out, "{}", result.model)?,
            }
        }
        Command::Verify { layer, m } => {
            let catalog = load(cli, layer)?;
            let layers = match m {
                Some(m) => vec![*m],
                None => catalog.layers(),
            };
            let mut failed = Vec::new();
            for m in layers {
                let report = verify_theorems(&catalog, m)?;
                match fmt {
                    Format::Records => emit_json(out, &report)?,
                    Format::Table => report_table(out, &report)?,
                }
                failed.extend(report.failures().map(|c| format!("m={m} {}", c.name)));
            }
            if !failed.is_empty() {
                return Err(Failure::Inconsistent(format!(
                    "failed checks: {}",
                    failed.join(", ")
                )));
            }
        }
    }
    Ok(())
}

fn load(cli: &Cli, layer: &Layer) -> Result<Catalog, Failure> {
    Ok(read_catalog(&cli.catalog_dir, layer.p, layer.n)?)
}

fn fit(layer: &Layer, dataset: &str, outputs: &str, basis: &str) -> Result<FitOutput, Failure> {
    let field = FieldSpec::new(layer.p)?;
    let points = dataset
        .split(',')
        .map(|t| Point::parse(t, &field, layer.n))
        .collect::<Result<Vec<_>, _>>()?;
    let values = outputs
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u8>()
                .map_err(|_| Failure::Domain(format!("bad output value {t:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.len() != points.len() {
        return Err(Failure::Domain(format!(
            "{} outputs for {} points",
            values.len(),
            points.len()
        )));
    }
    let s = DataSet::new(points.clone(), field)?;
    // realign outputs with the sorted point order
    let sorted: Vec<u8> = s
        .points()
        .iter()
        .map(|x| values[points.iter().position(|y| y == x).expect("same points")])
        .collect();
    let data = IOData::new(s.clone(), sorted)?;
    let monomials = parse_set(basis, layer.n)?;
    let model = fit_minimal_model(&data, &monomials)?;
    Ok(FitOutput {
        dataset: s.encode(),
        basis: encode_set(&monomials),
        model: model.to_string(),
    })
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> std::io::Result<()> {
    let line = serde_json::to_string(value).expect("output types serialize");
    writeln!(out, "{line}")
}

fn record_table(out: &mut dyn Write, records: &[&CatalogRecord]) -> std::io::Result<()> {
    let width = records
        .iter()
        .map(|r| r.dataset.len())
        .max()
        .unwrap_or(7)
        .max(7);
    let label_width = records
        .iter()
        .map(|r| r.classlabel.len())
        .max()
        .unwrap_or(10)
        .max(10);
    writeln!(
        out,
        "{:<width$}  {:<label_width$}  rep  bases",
        "dataset", "classlabel"
    )?;
    for r in records {
        writeln!(
            out,
            "{:<width$}  {:<label_width$}  {:<3}  {}",
            r.dataset,
            r.classlabel,
            if r.is_representative { "*" } else { "" },
            r.bases.join(" ")
        )?;
    }
    writeln!(out, "({} records)", records.len())
}

fn summary_table(out: &mut dyn Write, stats: &SummaryStats) -> std::io::Result<()> {
    writeln!(
        out,
        "p={} n={} m={}: {} classes, {} data sets, {}..{} bases per class",
        stats.p,
        stats.n,
        stats.m,
        stats.class_count,
        stats.total_sets,
        stats.min_bases,
        stats.max_bases
    )?;
    for c in &stats.classes {
        writeln!(
            out,
            "{}  size {:>5}  rep {}  {} bases: {}",
            c.classlabel,
            c.size,
            c.representative,
            c.num_bases,
            c.bases.join(" ")
        )?;
    }
    Ok(())
}

fn whatif_table(out: &mut dyn Write, w: &WhatIf) -> std::io::Result<()> {
    writeln!(
        out,
        "{} + {} -> {} ({})",
        w.dataset, w.add_point, w.record.dataset, w.record.classlabel
    )?;
    for b in &w.record.bases {
        writeln!(out, "  {b}")?;
    }
    writeln!(out, "new monomials: {}", w.new_monomials.join(", "))
}

fn report_table(out: &mut dyn Write, report: &VerificationReport) -> std::io::Result<()> {
    writeln!(out, "p={} n={} m={}", report.p, report.n, report.m)?;
    for c in &report.checks {
        let tag = match c.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "SKIP",
        };
        writeln!(out, "  {tag}  {:<36} {}", c.name, c.detail)?;
    }
    Ok(())
}
