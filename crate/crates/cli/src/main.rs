use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use cosymplectic::catalogue;
use cosymplectic::ce::{check_betti_conditions, CeComplex, MetricComplex};
use cosymplectic::correspondence::{extend_named, reduce};
use cosymplectic::deformation::{kernel_dimensions, largest_passing, stabilize, DeformedStructure, JFamily};
use cosymplectic::foliated::check_kahler_identities;
use cosymplectic::json::{self as io, read_file, to_canonical_string};
use cosymplectic::lie::LieAlgebra;
use cosymplectic::pipeline::dossier;
use cosymplectic::scalar::{format_scalar, parse_scalar, Scalar};
use cosymplectic::structures::{curvature, verify_almost_contact, verify_cosymplectic, verify_kahler, verify_normal, StructureData};
use cosymplectic::{Error, Report, Result};

#[derive(Parser)]
#[command(name = "cosym", version, about = "Exact checks for cosymplectic and Kähler Lie algebras")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    AlmostContact,
    Normal,
    Cosymplectic,
    Kahler,
}

#[derive(Subcommand)]
enum Command {
    /// Antisymmetry and Jacobi identity.
    Validate { alg: PathBuf },
    /// Abelian, nilpotent, solvable, unimodular, completely solvable.
    Classify { alg: PathBuf },
    /// Betti numbers, optional Hodge dimensions, Betti screening.
    Cohomology {
        alg: PathBuf,
        #[arg(long)]
        metric: Option<PathBuf>,
        /// Screen against dimension 2n+1 (defaults to the algebra's own).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Staged structure verification.
    Verify {
        alg: PathBuf,
        structure: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
    },
    /// Levi-Civita connection, curvature and flatness.
    Curvature {
        alg: PathBuf,
        #[arg(long)]
        metric: PathBuf,
    },
    /// Build the cosymplectic extension of a Kähler algebra by a derivation.
    Extend {
        h: PathBuf,
        d: PathBuf,
        #[arg(long, default_value = "xi")]
        xi_name: String,
        /// Write PREFIX.json and PREFIX_struct.json instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover the Kähler leaf algebra and derivation.
    Reduce {
        alg: PathBuf,
        structure: PathBuf,
        /// Write PREFIX.json and PREFIX_D.json instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Δ_F = 2□_F = 2□̄_F on every bidegree.
    KahlerIdentities { alg: PathBuf, structure: PathBuf },
    /// Stabilize a deformation J_t at one or more rational t.
    Deform {
        /// Algebra file, or a file with "algebra" and "structure" fields.
        #[arg(long)]
        base: PathBuf,
        /// Structure file when --base holds only the algebra.
        #[arg(long)]
        structure: Option<PathBuf>,
        #[arg(long)]
        jt: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        /// Comma-separated values of t.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        t_list: Vec<String>,
        /// Bisect the sorted t list for the largest passing value.
        #[arg(long)]
        search: bool,
    },
    /// Built-in examples.
    Catalogue {
        #[command(subcommand)]
        action: CatalogueAction,
    },
    /// Every check on an algebra with structure data.
    Report { alg: PathBuf, structure: PathBuf },
}

#[derive(Subcommand)]
enum CatalogueAction {
    List,
    Emit {
        name: String,
        /// Write the files into this directory instead of printing.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

struct Outcome {
    value: Value,
    markdown: String,
    code: u8,
}

impl Outcome {
    fn report(r: &Report) -> Self {
        Outcome { value: r.to_json(), markdown: r.to_markdown(), code: if r.passed() { 0 } else { 1 } }
    }

    fn data(title: &str, value: Value) -> Self {
        let markdown = data_markdown(title, &value);
        Outcome { value, markdown, code: 0 }
    }
}

fn data_markdown(title: &str, value: &Value) -> String {
    let mut out = format!("## {title}\n\n");
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                out.push_str(&format!("- **{k}**: `{v}`\n"));
            }
        }
        other => out.push_str(&format!("`{other}`\n")),
    }
    out
}

fn load_lie(path: &Path) -> Result<LieAlgebra> {
    io::lie_from_json(&read_file(path)?).map_err(|e| in_file(path, e))
}

fn load_structure(path: &Path) -> Result<StructureData> {
    io::structure_from_json(&read_file(path)?).map_err(|e| in_file(path, e))
}

fn in_file(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    }
}

fn write_json(path: &Path, v: &Value) -> Result<()> {
    std::fs::write(path, to_canonical_string(v)).map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn parse_t(s: &str) -> Result<Scalar> {
    parse_scalar(s).map_err(|e| Error::Parse(format!("--t: {e}")))
}

fn slug(name: &str) -> String {
    name.replace(['(', ','], "_").replace(')', "").replace('/', "-")
}

fn deform_one(lie: &LieAlgebra, s: &StructureData, family: &JFamily, t: Scalar) -> Result<Report> {
    let ds = DeformedStructure::new(lie, s, t.clone(), family.at(&t))?;
    let shape = ds.check();
    if !shape.passed() {
        let mut r = Report::new(format!("stabilize at t = {}", format_scalar(&t)));
        r.absorb("J_t", &shape);
        return Ok(r);
    }
    let out = stabilize(&ds)?;
    let mut r = out.report;
    let kd = kernel_dimensions(&ds)?;
    r.stage(
        "Z^{1,1}_t = (∂_t∂̄_tΩ⁰ ∩ ker d_{1,0}) ⊕ 𝔽_t^{1,1}",
        (!kd.decomposition).then(|| cosymplectic::Witness::new("dimension count fails", kd.to_json())),
    );
    r.set_data("kernel_dimensions", kd.to_json());
    let ops = cosymplectic::deformation::assemble_e(&ds)?;
    r.absorb("E_t", &ops.kernel_characterization());
    r.set_data("J_0 = J", json!(family.at(&Scalar::default()) == s.j));
    Ok(r)
}

fn run(cli: &Cli) -> Result<Outcome> {
    Ok(match &cli.command {
        Command::Validate { alg } => Outcome::report(&load_lie(alg)?.validate()),
        Command::Classify { alg } => Outcome::data("classification", load_lie(alg)?.classify().to_json()),
        Command::Cohomology { alg, metric, n } => {
            let lie = load_lie(alg)?;
            let ce = CeComplex::new(&lie);
            let b = ce.betti();
            let mut out = Map::new();
            out.insert("betti".into(), json!(b));
            let screen_n = match n {
                Some(n) => Some(*n),
                None => (lie.dim() % 2 == 1).then(|| (lie.dim() - 1) / 2),
            };
            if let Some(n) = screen_n {
                out.insert("conditions".into(), check_betti_conditions(&b, n)?.to_json());
            }
            if let Some(m) = metric {
                let g = io::metric_from_json(&read_file(m)?).map_err(|e| in_file(m, e))?;
                let mc = MetricComplex::new(ce, &g)?;
                let hodge: Vec<Value> = (0..=lie.dim()).map(|k| mc.hodge(k).to_json()).collect();
                out.insert("hodge".into(), Value::Array(hodge));
            }
            Outcome::data("cohomology", Value::Object(out))
        }
        Command::Verify { alg, structure, kind } => {
            let lie = load_lie(alg)?;
            let r = match kind {
                Kind::Kahler => {
                    let (j, g) = io::complex_structure_from_json(&read_file(structure)?).map_err(|e| in_file(structure, e))?;
                    verify_kahler(&lie, &j, &g)?
                }
                other => {
                    let s = load_structure(structure)?;
                    match other {
                        Kind::AlmostContact => verify_almost_contact(&lie, &s),
                        Kind::Normal => verify_normal(&lie, &s),
                        _ => verify_cosymplectic(&lie, &s),
                    }
                }
            };
            Outcome::report(&r)
        }
        Command::Curvature { alg, metric } => {
            let lie = load_lie(alg)?;
            let g = io::metric_from_json(&read_file(metric)?).map_err(|e| in_file(metric, e))?;
            let (conn, curv) = curvature(&lie, &g)?;
            Outcome::data("curvature", json!({ "connection": conn.to_json(), "curvature": curv.to_json(), "flat": curv.is_flat() }))
        }
        Command::Extend { h, d, xi_name, out } => {
            let kahler = io::kahler_from_json(&read_file(h)?).map_err(|e| in_file(h, e))?;
            let der = io::derivation_from_json(&read_file(d)?).map_err(|e| in_file(d, e))?;
            let (lie, s) = extend_named(&kahler, &der, xi_name)?;
            let value = json!({ "algebra": io::lie_to_json(&lie), "structure": s.to_json() });
            if let Some(prefix) = out {
                write_json(&with_suffix(prefix, ".json"), &value["algebra"])?;
                write_json(&with_suffix(prefix, "_struct.json"), &value["structure"])?;
            }
            Outcome::data("extension", value)
        }
        Command::Reduce { alg, structure, out } => {
            let lie = load_lie(alg)?;
            let s = load_structure(structure)?;
            let (h, d) = reduce(&lie, &s)?;
            let value = json!({ "kahler": io::kahler_to_json(&h), "derivation": io::derivation_to_json(&d) });
            if let Some(prefix) = out {
                write_json(&with_suffix(prefix, ".json"), &value["kahler"])?;
                write_json(&with_suffix(prefix, "_D.json"), &value["derivation"])?;
            }
            Outcome::data("reduction", value)
        }
        Command::KahlerIdentities { alg, structure } => {
            let lie = load_lie(alg)?;
            let s = load_structure(structure)?;
            Outcome::report(&check_kahler_identities(&lie, &s)?)
        }
        Command::Deform { base, structure, jt, t, t_list, search } => {
            let v = read_file(base)?;
            let (lie, s) = match (v.get("algebra"), structure) {
                (Some(a), _) => (
                    io::lie_from_json(a).map_err(|e| in_file(base, e))?,
                    io::structure_from_json(v.get("structure").ok_or_else(|| Error::Parse(format!("{}: missing field \"structure\"", base.display())))?)
                        .map_err(|e| in_file(base, e))?,
                ),
                (None, Some(sp)) => (io::lie_from_json(&v).map_err(|e| in_file(base, e))?, load_structure(sp)?),
                (None, None) => return Err(Error::Parse("deform: --base has no \"structure\" field and --structure is missing".into())),
            };
            let family = io::family_from_json(&read_file(jt)?).map_err(|e| in_file(jt, e))?;
            if family.dim() != lie.dim() {
                return Err(Error::Parse(format!("{}: J_t is {}x{} but the algebra has dimension {}", jt.display(), family.dim(), family.dim(), lie.dim())));
            }
            let mut ts: Vec<Scalar> = t_list.iter().map(|x| parse_t(x)).collect::<Result<_>>()?;
            if let Some(x) = t {
                ts.insert(0, parse_t(x)?);
            }
            if ts.is_empty() {
                return Err(Error::Parse("deform: give --t or --t-list".into()));
            }
            if *search {
                let (best, reports) = largest_passing(&lie, &s, &family, &ts)?;
                Outcome::data(
                    "largest passing t",
                    json!({ "largest_passing": best.map(|b| format_scalar(&b)), "evaluated": reports.iter().map(Report::to_json).collect::<Vec<_>>() }),
                )
            } else if ts.len() == 1 {
                Outcome::report(&deform_one(&lie, &s, &family, ts.remove(0))?)
            } else {
                let reports = ts.into_iter().map(|t| deform_one(&lie, &s, &family, t)).collect::<Result<Vec<_>>>()?;
                let all = reports.iter().all(Report::passed);
                let markdown = reports.iter().map(Report::to_markdown).collect::<Vec<_>>().join("\n");
                Outcome { value: json!({ "results": reports.iter().map(Report::to_json).collect::<Vec<_>>() }), markdown, code: if all { 0 } else { 1 } }
            }
        }
        Command::Catalogue { action } => match action {
            CatalogueAction::List => Outcome::data("catalogue", json!({ "entries": catalogue::list() })),
            CatalogueAction::Emit { name, dir } => {
                let e = catalogue::get(name)?;
                let mut files: Vec<(String, Value)> = Vec::new();
                let stem = slug(&e.name);
                match &e.kahler {
                    Some(h) => files.push((format!("{stem}.json"), io::kahler_to_json(h))),
                    None => files.push((format!("{stem}.json"), io::lie_to_json(&e.lie))),
                }
                if let Some(s) = &e.structure {
                    files.push((format!("{stem}_struct.json"), s.to_json()));
                }
                if let Some(d) = &e.derivation {
                    files.push((format!("{stem}_D.json"), io::derivation_to_json(d)));
                }
                if let Some(f) = &e.family {
                    files.push((format!("{stem}_jt.json"), f.to_json()));
                }
                if let Some(dir) = dir {
                    std::fs::create_dir_all(dir).map_err(|err| Error::Parse(format!("cannot create {}: {err}", dir.display())))?;
                    for (file, v) in &files {
                        write_json(&dir.join(file), v)?;
                    }
                }
                let mut out = Map::new();
                out.insert("name".into(), json!(e.name));
                out.insert("expected".into(), json!(e.expected));
                out.insert("files".into(), Value::Object(files.into_iter().collect()));
                Outcome::data("catalogue entry", Value::Object(out))
            }
        },
        Command::Report { alg, structure } => {
            let lie = load_lie(alg)?;
            let s = load_structure(structure)?;
            Outcome::report(&dossier(&lie, &s)?)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => print!("{}", to_canonical_string(&out.value)),
                Format::Md => print!("{}", out.markdown),
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse(_) | Error::Dimension(_) | Error::UnknownEntry(_) => 2,
                Error::Precondition(_) => 1,
                Error::Invariant(_) | Error::Singular(_) => 3,
            })
        }
    }
}
