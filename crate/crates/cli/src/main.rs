use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kr_cli::cache::{default_dir, Cache};
use kr_cli::commands::{self, cached, emit, parse_range, read_json, Format, Report};
use kr_cli::json::{ModuleJson, PageJson, SpotMatrixJson};
use kr_cli::suite::{appendix_a, DEFAULT_SEED};
use kr_cli::CliError;
use kr_core::realcx::{build_model, ModelKind};
use serde_json::json;

#[derive(Parser)]
#[command(name = "kr", version, about = "Exact KR-theory of finite Real simplicial complexes")]
struct Cli {
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: FormatArg,
    /// Skip the result cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Cache directory (default: $KR_CACHE_DIR, then the user cache directory).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// KR-theory of a real algebraic curve.
    Curve(CurveArgs),
    /// KO^{-n}(S^d), optionally with Z/m coefficients.
    Sphere {
        #[arg(long)]
        dim: usize,
        #[arg(long = "mod")]
        modulus: Option<u64>,
        /// `a..b` or `a..=b`.
        #[arg(long, default_value = "0..8")]
        degrees: String,
    },
    /// KR pieces of a built-in model or a complex read from JSON.
    Model(ModelArgs),
    /// Spectral sequence pages.
    #[command(subcommand)]
    Ss(SsCommand),
    /// Z/2 group cohomology of a module read from JSON.
    Gcoh {
        module: PathBuf,
        #[arg(long, default_value = "0..=4")]
        degrees: String,
    },
    /// Run an acceptance suite.
    Check {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Inspect or clear the result cache.
    #[command(subcommand)]
    Cache(CacheCommand),
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long, default_value_t = 0)]
    genus: usize,
    #[arg(long)]
    real_components: usize,
    #[arg(long, conflicts_with = "affine")]
    projective: bool,
    #[arg(long)]
    affine: bool,
    #[arg(long = "mod")]
    modulus: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    SphereTrivial,
    SphereAntipodal,
    SurfaceFree,
    SurfaceReflection,
    AffineCurve,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum, required_unless_present = "complex")]
    kind: Option<KindArg>,
    /// Dimension for spheres.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    genus: Option<usize>,
    #[arg(long)]
    real_components: Option<usize>,
    #[arg(long, conflicts_with = "kind")]
    complex: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SsCommand {
    /// Run a page to E∞ and report the abutment.
    Run { page: PathBuf },
    /// Apply the comparison lemma to a morphism between two pages.
    Compare {
        source: PathBuf,
        target: PathBuf,
        /// JSON list of `{p, q, matrix}`; spots not listed map by zero.
        #[arg(long)]
        maps: Option<PathBuf>,
        #[arg(long = "N", alias = "n", default_value_t = 3)]
        n: i64,
        #[arg(long, default_value_t = 2)]
        r0: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    AppendixA,
}

#[derive(Subcommand)]
enum CacheCommand {
    /// Print the key of a command and its JSON parameters.
    Key { command: String, params: String },
    /// Print a stored value.
    Get { key: String },
    /// Store a JSON value read from a file.
    Put { key: String, file: PathBuf },
    /// Remove every entry.
    Clear,
}

fn model_kind(a: &ModelArgs, kind: KindArg) -> Result<ModelKind, CliError> {
    let need =
        |v: Option<usize>, name: &str| v.ok_or_else(|| CliError::Input(format!("--{name} is required for this kind")));
    Ok(match kind {
        KindArg::SphereTrivial => ModelKind::SphereTrivial(need(a.dim, "dim")?),
        KindArg::SphereAntipodal => ModelKind::SphereAntipodal(need(a.dim, "dim")?),
        KindArg::SurfaceFree => ModelKind::SurfaceFree(need(a.genus, "genus")?),
        KindArg::SurfaceReflection => ModelKind::SurfaceReflection(need(a.genus, "genus")?),
        KindArg::AffineCurve => ModelKind::AffineCurve {
            lambda: need(a.real_components, "real-components")?,
            free_loops: a.genus.unwrap_or(0),
        },
    })
}

fn finish<R: Report>(r: R, format: Format) -> Result<String, CliError> {
    let text = emit(&r, format);
    match r.mismatch() {
        Some(m) => {
            print!("{text}");
            Err(CliError::Mismatch(m))
        }
        None => Ok(text),
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    let cache = Cache::new(cli.cache_dir.clone().unwrap_or_else(default_dir));
    let store = (!cli.no_cache).then_some(&cache);
    match cli.command {
        Command::Curve(a) => {
            let projective = !a.affine;
            let params = json!({"genus": a.genus, "real_components": a.real_components, "projective": projective, "mod": a.modulus});
            let r = cached(store, "curve", &params, || {
                commands::cmd_curve(a.genus, a.real_components, projective, a.modulus)
            })?;
            finish(r, format)
        }
        Command::Sphere { dim, modulus, degrees } => {
            let degrees = parse_range(&degrees)?;
            let params = json!({"dim": dim, "mod": modulus, "degrees": degrees});
            let r = cached(store, "sphere", &params, || commands::cmd_sphere(dim, &degrees, modulus))?;
            finish(r, format)
        }
        Command::Model(a) => {
            let (name, x, params) = match (&a.complex, a.kind) {
                (Some(path), _) => {
                    let c: kr_cli::json::ComplexJson = read_json(path)?;
                    let x = c.to_complex()?;
                    let name = path.display().to_string();
                    let params = json!({"name": name, "complex": c});
                    (name, x, params)
                }
                (None, Some(kind)) => {
                    let k = model_kind(&a, kind)?;
                    let x = build_model(k).map_err(|e| CliError::Input(e.to_string()))?;
                    (format!("{k:?}"), x, json!({"kind": format!("{k:?}")}))
                }
                (None, None) => return Err(CliError::Input("give --kind or --complex".into())),
            };
            let r = cached(store, "model", &params, || commands::cmd_model(name, &x))?;
            finish(r, format)
        }
        Command::Ss(SsCommand::Run { page }) => {
            let p: PageJson = read_json(&page)?;
            let r = cached(store, "ss-run", &serde_json::to_value(&p)?, || commands::cmd_ss_run(&p))?;
            finish(r, format)
        }
        Command::Ss(SsCommand::Compare { source, target, maps, n, r0 }) => {
            let (a, b): (PageJson, PageJson) = (read_json(&source)?, read_json(&target)?);
            let maps: Option<Vec<SpotMatrixJson>> = maps.map(|m| read_json(&m)).transpose()?;
            let params = json!({"source": a, "target": b, "maps": maps, "n": n, "r0": r0});
            let r = cached(store, "ss-compare", &params, || commands::cmd_ss_compare(&a, &b, maps.as_deref(), n, r0))?;
            finish(r, format)
        }
        Command::Gcoh { module, degrees } => {
            let m: ModuleJson = read_json(&module)?;
            let degrees = parse_range(&degrees)?;
            let params = json!({"module": m, "degrees": degrees});
            let r = cached(store, "gcoh", &params, || commands::cmd_gcoh(&m, &degrees))?;
            finish(r, format)
        }
        Command::Check { suite: SuiteArg::AppendixA, seed } => {
            let results = appendix_a(seed);
            for r in &results {
                eprintln!("criterion {:>2}: {:.2} s", r.id, r.elapsed.as_secs_f64());
            }
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&results)? + "\n",
                Format::Text => results
                    .iter()
                    .map(|r| {
                        format!("[{}] {:>2}. {}: {}\n", if r.passed { "PASS" } else { "FAIL" }, r.id, r.title, r.detail)
                    })
                    .collect(),
            };
            let failed = results.iter().filter(|r| !r.passed).count();
            if failed > 0 {
                print!("{text}");
                return Err(CliError::Mismatch(format!("{failed} criteria failed")));
            }
            Ok(text)
        }
        Command::Cache(c) => match c {
            CacheCommand::Key { command, params } => {
                let params: serde_json::Value = serde_json::from_str(&params)?;
                Ok(cache.key(&command, &params) + "\n")
            }
            CacheCommand::Get { key } => match cache.get(&key)? {
                Some(v) => Ok(serde_json::to_string_pretty(&v)? + "\n"),
                None => Err(CliError::Input(format!("no entry for {key}"))),
            },
            CacheCommand::Put { key, file } => {
                let v: serde_json::Value = read_json(&file)?;
                cache.put(&key, &v)?;
                Ok(String::new())
            }
            CacheCommand::Clear => Ok(format!("removed {} entries\n", cache.clear()?)),
        },
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
