//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a computation fails or a verification
//! case fails, 2 on usage, configuration or input errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formal_group::{genus_map, generator_table, GeneratorTable, Genus};
use crate::graded::{GradedPoly, GradedPolyJson, Ring};
use crate::kring::{Algebra, AlgebraJson, Element};
use crate::loops::{omega, project, tensor_polarization_map, Kernel, LoopJson, PairingConfig, Point, Pole, Polarization, RationalLoop};
use crate::parse::{parse_loop, parse_scalar};
use crate::series::SeriesJson;
use crate::verify::{run_suite_with, to_json_lines, Fault, Options, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Parser, Debug)]
#[command(name = "cobloop", version, about = "Exact formal group laws, multiplicative classes and loop-space residues")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Truncation weight D of the coefficient ring.
    #[arg(long, global = true)]
    degree: Option<u32>,
    /// Series order N: rows k ≤ N, orientation known through t^(N+1).
    /// Defaults to the degree, where the c_k stop changing.
    #[arg(long, global = true)]
    order: Option<u32>,
    /// additive, classical_K or hirzebruch.
    #[arg(long, global = true)]
    genus: Option<String>,
    /// Builtin algebra (point, proj(n), products joined by `x`) or a JSON file.
    #[arg(long, global = true)]
    model: Option<String>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// canonical or hirzebruch.
    #[arg(long, global = true)]
    kernel: Option<String>,
    /// key=value file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of b_k, a_k, c_k.
    Generators,
    /// Images of p_n, the specialized orientation and c_k for a genus.
    Specialize,
    /// Loop-space computations.
    Loop {
        #[command(subcommand)]
        op: LoopOp,
    },
    /// Run an oracle suite and write a JSON-lines report.
    Verify {
        /// fgl, generators, loopspace, hirzebruch, kring or all.
        suite: String,
        /// Record per-case runtimes (makes reports non-reproducible).
        #[arg(long)]
        timings: bool,
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum LoopOp {
    /// Ω(f, g).
    Pair {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
        /// Twisting class W, an expression in the algebra generators.
        #[arg(long, allow_hyphen_values = true)]
        twist: Option<String>,
        /// Scalar factor of the pairing.
        #[arg(long, allow_hyphen_values = true)]
        scale: Option<String>,
        /// Read the pairing on the r-th component.
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
    /// Residue of f dq at zero, infinity or a root of unity.
    Residue {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        pole: String,
    },
    /// Split f into its Laurent-polynomial and negative parts.
    Project {
        #[arg(allow_hyphen_values = true)]
        f: String,
        /// standard, hirzebruch, or a kernel name prefixed with `kernel:`.
        #[arg(long, default_value = "standard")]
        polarization: String,
    },
    /// Apply the kernel map selected by --kernel.
    Polarize {
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
}

/// Resolved settings.
#[derive(Clone, Debug)]
pub struct Config {
    pub degree: u32,
    pub order: u32,
    pub genus: Option<Genus>,
    pub model: String,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub kernel: String,
}

impl Config {
    fn resolve(cli: &Cli) -> Result<Config> {
        let file = match &cli.config {
            Some(p) => read_config_file(p)?,
            None => BTreeMap::new(),
        };
        let get = |k: &str| file.get(k).cloned();
        let num = |k: &str| -> Result<Option<u64>> {
            get(k)
                .map(|v| v.parse::<u64>().map_err(|_| Error::Config(format!("`{k}` must be a non-negative integer"))))
                .transpose()
        };
        let degree = match cli.degree {
            Some(d) => d,
            None => num("degree")?.map(|v| v as u32).unwrap_or(8),
        };
        let order = match cli.order {
            Some(n) => n,
            None => num("order")?.map(|v| v as u32).unwrap_or(degree),
        };
        if order < 2 || degree < order {
            return Err(Error::Config(format!(
                "need degree ≥ order ≥ 2, got degree {degree}, order {order}"
            )));
        }
        let genus = cli
            .genus
            .clone()
            .or_else(|| get("genus"))
            .map(|g| g.parse::<Genus>())
            .transpose()?;
        let format = match cli.format {
            Some(f) => f,
            None => match get("format").as_deref() {
                None => Format::Pretty,
                Some(s) => Format::from_str(s, true).map_err(|_| Error::Config(format!("unknown format `{s}`")))?,
            },
        };
        Ok(Config {
            degree,
            order,
            genus,
            model: cli.model.clone().or_else(|| get("model")).unwrap_or_else(|| "point".into()),
            format,
            out: cli.out.clone().or_else(|| get("out").map(PathBuf::from)),
            seed: match cli.seed {
                Some(s) => s,
                None => num("seed")?.unwrap_or(0),
            },
            kernel: cli.kernel.clone().or_else(|| get("kernel")).unwrap_or_else(|| "canonical".into()),
        })
    }
}

const CONFIG_KEYS: [&str; 8] = ["degree", "order", "genus", "model", "format", "out", "seed", "kernel"];

fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key=value", i + 1)))?;
        let k = k.trim();
        if !CONFIG_KEYS.contains(&k) {
            return Err(Error::Config(format!("line {}: unknown key `{k}`", i + 1)));
        }
        out.insert(k.to_string(), v.trim().to_string());
    }
    Ok(out)
}

/// Run with process arguments; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_io(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with_io<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let cfg = match Config::resolve(&cli) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    match execute(&cli.command, &cfg, err) {
        Ok((text, code)) => match emit(&cfg, &text, out) {
            Ok(()) => code,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                1
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::Config(_)
        | Error::Schema(_)
        | Error::UnknownGenus(_)
        | Error::UnknownSuite(_)
        | Error::UndeclaredPole(_)
        | Error::UnsupportedModel(_)
        | Error::Io(_) => 2,
        _ => 1,
    }
}

fn emit(cfg: &Config, text: &str, out: &mut dyn Write) -> Result<()> {
    match &cfg.out {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn execute(cmd: &Command, cfg: &Config, err: &mut dyn Write) -> Result<(String, i32)> {
    match cmd {
        Command::Generators => Ok((cmd_generators(cfg)?, 0)),
        Command::Specialize => Ok((cmd_specialize(cfg)?, 0)),
        Command::Loop { op } => Ok((cmd_loop(cfg, op)?, 0)),
        Command::Verify {
            suite,
            timings,
            inject_fault,
        } => {
            let fault = inject_fault.as_deref().map(str::parse::<Fault>).transpose()?;
            let reports = run_suite_with(
                suite,
                &Options {
                    seed: cfg.seed,
                    timings: *timings,
                    fault,
                },
            )?;
            let failed = reports.iter().filter(|r| r.status == Status::Fail).count();
            for r in reports.iter().filter(|r| r.status == Status::Fail) {
                writeln!(err, "FAIL {}", r.case)?;
            }
            writeln!(err, "{} cases, {} failed", reports.len(), failed)?;
            Ok((to_json_lines(&reports), if failed == 0 { 0 } else { 1 }))
        }
    }
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn csv_rows(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| Error::Config(e.to_string()))?;
    for r in rows {
        w.write_record(r).map_err(|e| Error::Config(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn table_for(cfg: &Config, genus: Option<Genus>) -> Result<GeneratorTable> {
    generator_table(genus, cfg.order, cfg.degree)
}

fn cmd_generators(cfg: &Config) -> Result<String> {
    let t = table_for(cfg, cfg.genus)?;
    let n = t.order();
    let cell = |v: &[GradedPoly], k: usize| if k == 0 { String::new() } else { v[k - 1].to_string() };
    match cfg.format {
        Format::Json => json(&t.to_json()),
        Format::Csv => {
            let rows: Vec<Vec<String>> = (0..=n)
                .map(|k| vec![k.to_string(), cell(&t.b, k), cell(&t.a, k), t.c[k].to_string()])
                .collect();
            csv_rows(&["k", "b_k", "a_k", "c_k"], &rows)
        }
        Format::Pretty => {
            let mut s = format!("unit scale t0 = {}\nc0 = {}\n", t.t0, t.c[0]);
            for k in 1..=n {
                s += &format!("b{k} = {}\na{k} = {}\nc{k} = {}\n", t.b[k - 1], t.a[k - 1], t.c[k]);
            }
            Ok(s)
        }
    }
}

#[derive(Serialize)]
struct SpecializeJson {
    genus: String,
    phi: BTreeMap<String, GradedPolyJson>,
    unit_scale: GradedPolyJson,
    orientation: SeriesJson,
    c: Vec<GradedPolyJson>,
}

fn cmd_specialize(cfg: &Config) -> Result<String> {
    let genus = cfg
        .genus
        .ok_or_else(|| Error::Config("specialize needs --genus".into()))?;
    let m = genus_map(genus, cfg.order, cfg.degree);
    let t = table_for(cfg, Some(genus))?;
    let u = t.reconstruct()?;
    let mut phi: Vec<(usize, GradedPoly)> = m
        .phi
        .iter()
        .map(|(k, v)| (k[1..].parse::<usize>().expect("p<n>"), v.clone()))
        .collect();
    phi.sort_by_key(|(k, _)| *k);
    match cfg.format {
        Format::Json => json(&SpecializeJson {
            genus: genus.to_string(),
            phi: phi.iter().map(|(k, v)| (format!("p{k}"), v.to_json())).collect(),
            unit_scale: t.t0.to_json(),
            orientation: u.to_json(),
            c: t.c.iter().map(GradedPoly::to_json).collect(),
        }),
        Format::Csv => {
            let mut rows: Vec<Vec<String>> = phi
                .iter()
                .map(|(k, v)| vec!["phi".into(), k.to_string(), v.to_string()])
                .collect();
            rows.push(vec!["unit_scale".into(), String::new(), t.t0.to_string()]);
            for n in 1..=u.order() {
                rows.push(vec!["orientation".into(), n.to_string(), u.coeff(n).to_string()]);
            }
            for (k, c) in t.c.iter().enumerate() {
                rows.push(vec!["c".into(), k.to_string(), c.to_string()]);
            }
            csv_rows(&["kind", "index", "value"], &rows)
        }
        Format::Pretty => {
            let mut s = format!("genus: {genus}\n");
            for (k, v) in &phi {
                s += &format!("phi(p{k}) = {v}\n");
            }
            s += &format!("t0 = {}\nu(t) = {}\n", t.t0, u.render());
            for (k, c) in t.c.iter().enumerate() {
                s += &format!("c{k} = {c}\n");
            }
            Ok(s)
        }
    }
}

fn load_model(name: &str) -> Result<Arc<Algebra>> {
    if name.ends_with(".json") {
        let text = std::fs::read_to_string(name)?;
        let j: AlgebraJson = serde_json::from_str(&text).map_err(|e| Error::Schema(e.to_string()))?;
        return Ok(Arc::new(Algebra::from_json(&j)?));
    }
    Ok(Arc::new(Algebra::builtin(name)?))
}

fn load_loop(src: &str, alg: &Arc<Algebra>, ring: &Arc<Ring>) -> Result<RationalLoop> {
    if src.ends_with(".json") && Path::new(src).is_file() {
        let text = std::fs::read_to_string(src)?;
        let j: LoopJson = serde_json::from_str(&text).map_err(|e| Error::Schema(e.to_string()))?;
        return RationalLoop::from_json(&j, alg, ring);
    }
    parse_loop(src, alg, ring)
}

fn render_element(alg: &Algebra, e: &Element) -> String {
    let parts: Vec<String> = e
        .coords()
        .iter()
        .zip(alg.labels())
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, l)| {
            let cs = if c.num_terms() > 1 { format!("({c})") } else { c.to_string() };
            if l == "1" {
                cs
            } else {
                format!("{cs}*{l}")
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

#[derive(Serialize)]
struct ProjectionJson {
    plus: LoopJson,
    minus: LoopJson,
}

fn cmd_loop(cfg: &Config, op: &LoopOp) -> Result<String> {
    let alg = load_model(&cfg.model)?;
    let ring = Ring::hirzebruch(cfg.degree);
    let fmt = cfg.format;
    let single = |label: &str, pretty: String, j: String| -> Result<String> {
        Ok(match fmt {
            Format::Json => j,
            Format::Csv => csv_rows(&[label], &[vec![pretty]])?,
            Format::Pretty => pretty + "\n",
        })
    };
    match op {
        LoopOp::Pair { f, g, twist, scale, r } => {
            let f = load_loop(f, &alg, &ring)?;
            let g = load_loop(g, &alg, &ring)?;
            let twist = twist
                .as_deref()
                .map(|w| -> Result<Element> {
                    let l = parse_loop(w, &alg, &ring)?;
                    if !l.is_laurent() || l.laurent().keys().any(|&n| n != 0) {
                        return Err(Error::Config("--twist must be constant in q".into()));
                    }
                    Ok(l.laurent().get(&0).cloned().unwrap_or_else(|| alg.zero(&ring)))
                })
                .transpose()?;
            let scale = scale.as_deref().map(|s| parse_scalar(s, &ring)).transpose()?;
            let v = omega(&f, &g, &PairingConfig { twist, scale, r: *r })?;
            single("value", v.to_string(), json(&v.to_json())?)
        }
        LoopOp::Residue { f, pole } => {
            let f = load_loop(f, &alg, &ring)?;
            let at = match pole.trim() {
                "zero" | "0" => Point::Zero,
                "infinity" | "inf" | "∞" => Point::Infinity,
                other => Point::At(Pole::parse(other)?),
            };
            let v = f.residue(&at)?;
            single("value", render_element(&alg, &v), json(&v.to_json())?)
        }
        LoopOp::Project { f, polarization } => {
            let f = load_loop(f, &alg, &ring)?;
            let pol = match polarization.as_str() {
                "standard" => Polarization::Standard,
                "hirzebruch" => Polarization::hirzebruch(&ring)?,
                other => match other.strip_prefix("kernel:") {
                    Some(k) => Polarization::Tensor(Kernel::by_name(k, &ring)?),
                    None => return Err(Error::Config(format!("unknown polarization `{other}`"))),
                },
            };
            let (plus, minus) = project(&f, &pol)?;
            Ok(match fmt {
                Format::Json => json(&ProjectionJson {
                    plus: plus.to_json(),
                    minus: minus.to_json(),
                })?,
                Format::Csv => csv_rows(&["part", "value"], &[
                    vec!["plus".into(), plus.to_string()],
                    vec!["minus".into(), minus.to_string()],
                ])?,
                Format::Pretty => format!("plus: {plus}\nminus: {minus}\n"),
            })
        }
        LoopOp::Polarize { f } => {
            let f = load_loop(f, &alg, &ring)?;
            let k = Kernel::by_name(&cfg.kernel, &ring).map_err(|e| Error::Config(e.to_string()))?;
            let v = tensor_polarization_map(&k, &f)?;
            single("value", v.render_in("x"), json(&v.to_json())?)
        }
    }
}
