use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use admissible::constructions::{example_catalogue, polydisk_to_halfplane};
use admissible::ideal::{membership, numerator_ideal, IdealError, IdealOptions, Verdict};
use admissible::oracle::{boundedness_oracle, OracleConfig};
use admissible::puiseux::newton_puiseux;
use admissible::render;
use admissible::{parse_poly, MultiPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Series truncation order.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u32).range(4..))]
    order: u32,
    /// Outer radius for numeric sampling.
    #[arg(long, global = true, default_value_t = 0.125)]
    eps: f64,
    /// Number of shell refinements.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    grid: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Parser, Debug)]
#[command(name = "admissible", version, about = "Bounded numerators of stable polynomials at a boundary zero")]
struct Cli {
    #[command(flatten)]
    cfg: RunConfig,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Branch, classification and ideal generators of a stable polynomial.
    Analyze { p: String },
    /// Decide whether q/p is bounded near the origin.
    Member { p: String, q: String },
    /// Newton-Puiseux branches of a bivariate f(x, y) with f(0, 0) = 0.
    Puiseux { f: String },
    /// Move a polydisk polynomial to the upper half-space.
    Transform { p: String },
    /// Print the built-in examples.
    Examples {
        #[arg(long)]
        name: Option<String>,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

fn fail(code: u8, msg: impl ToString) -> Failure {
    Failure { code, msg: msg.to_string() }
}

fn read_input(s: &str) -> Result<String, Failure> {
    match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map(|t| t.trim().to_string()).map_err(|e| fail(1, format!("{}: {}", path, e))),
        None => Ok(s.to_string()),
    }
}

fn poly_arg(s: &str) -> Result<MultiPoly, Failure> {
    let text = read_input(s)?;
    parse_poly(&text).map_err(|e| fail(1, format!("parse error: {}", e)))
}

fn ideal_opts(cfg: &RunConfig) -> IdealOptions {
    IdealOptions { order: cfg.order, seed: cfg.seed }
}

fn ideal_code(e: &IdealError) -> u8 {
    match e {
        IdealError::Branch(_) | IdealError::Sanity(_) | IdealError::OutOfScope(_) | IdealError::Puiseux(_) | IdealError::Closure(_) => 2,
    }
}

fn analyze(cfg: &RunConfig, p: &str) -> Result<String, Failure> {
    let p = poly_arg(p)?;
    let d = numerator_ideal(&p, &ideal_opts(cfg)).map_err(|e| fail(ideal_code(&e), e))?;
    Ok(match cfg.format {
        Format::Text => render::ideal_text(&d),
        Format::Json => render::ideal_json(&d) + "\n",
    })
}

fn member(cfg: &RunConfig, p: &str, q: &str) -> Result<(String, u8), Failure> {
    let p = poly_arg(p)?;
    let q = poly_arg(q)?;
    if q.vars().iter().any(|v| !p.vars().contains(v)) {
        return Err(fail(2, format!("q uses variables outside {:?}", p.vars())));
    }
    let opts = ideal_opts(cfg);
    let d = numerator_ideal(&p, &opts).map_err(|e| fail(ideal_code(&e), e))?;
    let m = membership(&d, &q, &opts);
    let ocfg = OracleConfig { eps: cfg.eps, grid: cfg.grid, seed: cfg.seed, ..Default::default() };
    let report = boundedness_oracle(&p, &q, &d.h, &ocfg);
    let out = match cfg.format {
        Format::Text => render::membership_text(&m, Some(&report)),
        Format::Json => render::membership_json(&m, Some(&report)) + "\n",
    };
    let code = match m.verdict {
        Verdict::InIdeal => 0,
        Verdict::NotInIdeal => 3,
        Verdict::Indeterminate => 4,
    };
    Ok((out, code))
}

fn puiseux(cfg: &RunConfig, f: &str) -> Result<String, Failure> {
    let f = poly_arg(f)?;
    if f.nvars() != 2 {
        return Err(fail(2, format!("expected a polynomial in two variables, got {}", f)));
    }
    let bs = newton_puiseux(&f, None, cfg.order).map_err(|e| fail(2, e))?;
    Ok(match cfg.format {
        Format::Text => render::branches_text(&bs),
        Format::Json => render::branches_json(&bs) + "\n",
    })
}

fn transform(cfg: &RunConfig, p: &str) -> Result<String, Failure> {
    let p = poly_arg(p)?;
    let out = polydisk_to_halfplane(&p).map_err(|e| fail(2, e))?;
    Ok(match cfg.format {
        Format::Text => format!("{}\n", out),
        Format::Json => render::polynomial_json(&out) + "\n",
    })
}

fn examples(cfg: &RunConfig, name: Option<&str>) -> Result<String, Failure> {
    let all = example_catalogue();
    let chosen: Vec<_> = match name {
        Some(n) => {
            let v: Vec<_> = all.into_iter().filter(|e| e.name == n).collect();
            if v.is_empty() {
                let names: Vec<&str> = example_catalogue().iter().map(|e| e.name).collect();
                return Err(fail(1, format!("unknown example {:?}; known: {}", n, names.join(", "))));
            }
            v
        }
        None => all,
    };
    let opts = ideal_opts(cfg);
    let mut text = String::new();
    let mut json = vec![];
    for e in &chosen {
        let d = numerator_ideal(&e.p, &opts).map_err(|err| fail(ideal_code(&err), format!("{}: {}", e.name, err)))?;
        match cfg.format {
            Format::Text => {
                text += &format!("== {} ({})\n", e.name, e.summary);
                text += &render::ideal_text(&d);
                text += "\n";
            }
            Format::Json => json.push(render::ExampleJson {
                name: e.name.to_string(),
                summary: e.summary.to_string(),
                p: e.p.to_string(),
                ideal: render::IdealJson::from(&d),
            }),
        }
    }
    Ok(match cfg.format {
        Format::Text => text,
        Format::Json => serde_json::to_string_pretty(&json).unwrap() + "\n",
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = &cli.cfg;
    let res = match &cli.cmd {
        Command::Analyze { p } => analyze(cfg, p).map(|s| (s, 0)),
        Command::Member { p, q } => member(cfg, p, q),
        Command::Puiseux { f } => puiseux(cfg, f).map(|s| (s, 0)),
        Command::Transform { p } => transform(cfg, p).map(|s| (s, 0)),
        Command::Examples { name } => examples(cfg, name.as_deref()).map(|s| (s, 0)),
    };
    match res {
        Ok((out, code)) => {
            print!("{}", out);
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
