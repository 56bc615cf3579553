use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use hyperreduced::error::{Error, Result};
use hyperreduced::extremal::{maximize_area_over_simplex, monotonicity_table};
use hyperreduced::io::{render_svg, PolygonDocument, SvgOptions, DEFAULT_EDGE_SAMPLES, KIND_ORDINARY_REDUCED};
use hyperreduced::polygeom::{gauss_bonnet_area, thickness, triangulation_area, SupportKind};
use hyperreduced::redpoly::{
    area_formula, extract_butterflies, regular_reduced_ngon, sample_ordinary_reduced, validate_with,
    OrdinaryReducedPolygon, PhiVector, ValidateConfig,
};
use hyperreduced::suite::{run_suite, SuiteConfig};

/// Ordinary reduced polygons in the hyperbolic plane.
#[derive(Parser)]
#[command(name = "hyperreduced", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the regular ordinary reduced n-gon of thickness w.
    Regular {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a seeded non-regular ordinary reduced n-gon.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 0.1)]
        amplitude: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Validate a polygon document and print the check report.
    Validate {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Print the three area computations of a document.
    Area { file: PathBuf },
    /// Print the thickness and a supporting line attaining it.
    Thickness { file: PathBuf },
    /// Maximize the area formula over the angle simplex.
    Optimize {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Write the CSV of regular areas for n = 3, 5, …, n-max.
    Table {
        #[arg(long)]
        w: f64,
        #[arg(long, default_value_t = 201)]
        n_max: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the full property suite.
    Check {
        #[arg(long, default_value_t = 1.0)]
        w: f64,
        #[arg(long, default_value_t = 7)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
    /// Draw a document in the Poincaré disk.
    Render {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EDGE_SAMPLES)]
        samples: usize,
        #[arg(long)]
        no_butterflies: bool,
    },
}

fn read(path: &Path) -> Result<PolygonDocument> {
    let text = fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
    PolygonDocument::from_json(&text)
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

fn document(r: &OrdinaryReducedPolygon, meta: &[(&str, String)]) -> PolygonDocument {
    let mut doc = PolygonDocument::from_polygon(KIND_ORDINARY_REDUCED, &r.polygon, r.w);
    doc.phis = Some(r.butterflies.iter().map(|b| b.phi).collect());
    for (k, v) in meta {
        doc.metadata.insert(k.to_string(), v.clone());
    }
    doc
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json value")
}

fn run(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Regular { n, w, out } => {
            let r = regular_reduced_ngon(n, w)?;
            write(&out, &document(&r, &[("generator", "regular".into())]).to_json())?;
        }
        Command::Construct {
            n,
            w,
            seed,
            amplitude,
            out,
        } => {
            let r = sample_ordinary_reduced(n, w, seed, amplitude)?;
            let meta = [
                ("generator", "sampler".into()),
                ("seed", seed.to_string()),
                ("amplitude", amplitude.to_string()),
            ];
            write(&out, &document(&r, &meta).to_json())?;
        }
        Command::Validate { file, tol } => {
            let doc = read(&file)?;
            let cfg = ValidateConfig {
                tol,
                ..ValidateConfig::default()
            };
            let rep = validate_with(&doc.polygon()?, doc.w, &cfg);
            print!("{}", rep.to_json());
            return Ok(if rep.pass { 0 } else { 1 });
        }
        Command::Area { file } => {
            let doc = read(&file)?;
            let poly = doc.polygon()?;
            let formula = extract_butterflies(&poly, doc.w)
                .and_then(|b| PhiVector::new(b.iter().map(|x| x.phi).collect()))
                .and_then(|phis| area_formula(doc.w, &phis))
                .ok();
            let (gb, tr) = (gauss_bonnet_area(&poly), triangulation_area(&poly));
            let mut vals = vec![gb, tr];
            vals.extend(formula);
            let spread = vals.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b))
                - vals.iter().fold(f64::INFINITY, |a, &b| a.min(b));
            println!(
                "{}",
                pretty(&json!({
                    "formula": formula,
                    "angle_defect": gb,
                    "triangulation": tr,
                    "max_deviation": spread,
                }))
            );
        }
        Command::Thickness { file } => {
            let poly = read(&file)?.polygon()?;
            let (th, witness) = thickness(&poly);
            let kind = match witness.kind {
                SupportKind::Edge(i) => json!({ "type": "edge", "edge": i }),
                SupportKind::Pencil { vertex, theta } => json!({ "type": "pencil", "vertex": vertex, "theta": theta }),
            };
            let normal = witness.line.normal();
            println!(
                "{}",
                pretty(&json!({
                    "thickness": th,
                    "witness": kind,
                    "normal": [normal[0], normal[1], normal[2]],
                }))
            );
        }
        Command::Optimize { n, w, tol, seed } => {
            let res = maximize_area_over_simplex(w, n, tol, seed)?;
            println!("{}", serde_json::to_string_pretty(&res).expect("result serializes"));
        }
        Command::Table { w, n_max, out } => {
            write(&out, &monotonicity_table(w, n_max)?.to_csv())?;
        }
        Command::Check { w, n, seed, cases } => {
            let cfg = SuiteConfig {
                w,
                n,
                seed,
                cases,
                ..SuiteConfig::default()
            };
            let rep = run_suite(&cfg);
            print!("{}", rep.to_json());
            return Ok(if rep.pass { 0 } else { 1 });
        }
        Command::Render {
            file,
            out,
            samples,
            no_butterflies,
        } => {
            let opts = SvgOptions {
                samples,
                butterflies: !no_butterflies,
            };
            write(&out, &render_svg(&read(&file)?, &opts)?)?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
