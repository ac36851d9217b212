use clap::{Args, Parser, Subcommand, ValueEnum};
use ellqa::config::{RawConfig, SuiteConfig};
use ellqa::qseries::{bracket, theta_p, BracketKind};
use ellqa::registry;
use ellqa::structfuncs::{struct_fn, StructFnId};
use ellqa::{CheckReport, Ctx, C64};
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ellqa", version, about = "Numerical checks for the elliptic algebra U_{q,p}(A2(2))")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the check registry with anchors.
    List {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run check suites and emit a report.
    Run(RunArgs),
    /// Evaluate one function at one point.
    Eval(EvalArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct RunArgs {
    /// key = value file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    cutoff: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Repeatable; comma lists allowed. One of qseries, structfuncs, rmatrix,
    /// bosonope, evalrep, identities, all.
    #[arg(long, num_args = 1..)]
    suite: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Func {
    Bracket,
    BracketPlus,
    BracketStar,
    BracketStarPlus,
    Theta,
    RhoPlus,
    RhoPlusStar,
    Rho,
    Mu,
    MuStar,
    Chi,
    Kappa,
    KappaPrime,
    GConst,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long = "fn", value_enum)]
    func: Func,
    /// Additive argument, `re` or `re,im`.
    #[arg(long, conflicts_with = "z")]
    u: Option<String>,
    /// Multiplicative argument z = q^{2u}, `re` or `re,im`.
    #[arg(long)]
    z: Option<String>,
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    #[arg(long, default_value_t = 4.0)]
    r: f64,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn parse_complex(s: &str) -> Result<C64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|_| format!("cannot parse `{t}` as a number"));
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected `re` or `re,im`, got `{s}`")),
    }
}

fn load_config(a: &RunArgs) -> ellqa::Result<SuiteConfig> {
    let base = match &a.config {
        Some(p) => RawConfig::from_file(p)?,
        None => RawConfig::new(),
    };
    let mut flags = RawConfig::new();
    let pairs: [(&str, Option<String>); 8] = [
        ("q", a.q.map(|x| x.to_string())),
        ("r", a.r.map(|x| x.to_string())),
        ("c", a.c.map(|x| x.to_string())),
        ("tol", a.tol.map(|x| x.to_string())),
        ("samples", a.samples.map(|x| x.to_string())),
        ("order", a.order.map(|x| x.to_string())),
        ("cutoff", a.cutoff.map(|x| x.to_string())),
        ("seed", a.seed.map(|x| x.to_string())),
    ];
    for (k, v) in pairs {
        if let Some(v) = v {
            flags.set_flag(k, v)?;
        }
    }
    if !a.suite.is_empty() {
        flags.set_flag("suite", a.suite.join(","))?;
    }
    base.overlay(flags).validate()
}

fn render(cfg: &SuiteConfig, reports: &[CheckReport], format: Format) -> String {
    match format {
        Format::Json => {
            let doc = json!({"config": cfg, "reports": reports});
            let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => reports.iter().map(|r| r.text_line() + "\n").collect(),
    }
}

fn write_out(path: Option<&PathBuf>, body: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, body),
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    }
}

fn run(a: RunArgs) -> ExitCode {
    let cfg = match load_config(&a) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("ellqa: {e}");
            return ExitCode::from(2);
        }
    };
    let ctx = match cfg.ctx() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("ellqa: {e}");
            return ExitCode::from(2);
        }
    };
    let reports = registry::run_suites(&cfg.suites, &ctx, &cfg.run_params());
    if let Err(e) = write_out(a.out.as_ref(), &render(&cfg, &reports, a.format)) {
        eprintln!("ellqa: cannot write report: {e}");
        return ExitCode::from(2);
    }
    if reports.iter().all(|r| r.pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn list(format: Format) -> ExitCode {
    let entries = registry::registry();
    let body = match format {
        Format::Text => entries.iter().map(|e| format!("{}\t{}\t{}\n", e.suite, e.name, e.paper_ref)).collect(),
        Format::Json => {
            let v: Vec<_> =
                entries.iter().map(|e| json!({"suite": e.suite, "name": e.name, "paper_ref": e.paper_ref})).collect();
            serde_json::to_string_pretty(&v).expect("registry serializes") + "\n"
        }
    };
    match write_out(None, &body) {
        Ok(()) => ExitCode::SUCCESS,
        Err(_) => ExitCode::from(2),
    }
}

fn eval_value(a: &EvalArgs) -> Result<(C64, C64), String> {
    let ctx = Ctx::new(a.q, a.r, a.c).map_err(|e| e.to_string())?;
    let arg = match (&a.u, &a.z) {
        (Some(u), None) => Some(parse_complex(u)?),
        (None, Some(z)) => {
            let z = parse_complex(z)?;
            if let Func::Theta = a.func {
                return theta_p(z, ctx.p).map(|v| (z, v)).map_err(|e| e.to_string());
            }
            // principal branch of u = log z / (2 ln q)
            Some(z.ln() / (2.0 * ctx.lq))
        }
        _ => None,
    };
    let need = |x: Option<C64>| x.ok_or_else(|| "this function needs --u or --z".to_string());
    let sf = |id: StructFnId, u: C64| struct_fn(id, u, &ctx).map_err(|e| e.to_string());
    let zero = C64::new(0.0, 0.0);
    let v = match a.func {
        Func::Bracket => {
            let u = need(arg)?;
            (u, bracket(u, BracketKind::Plain, &ctx))
        }
        Func::BracketPlus => {
            let u = need(arg)?;
            (u, bracket(u, BracketKind::Plus, &ctx))
        }
        Func::BracketStar => {
            let u = need(arg)?;
            (u, bracket(u, BracketKind::StarPlain, &ctx))
        }
        Func::BracketStarPlus => {
            let u = need(arg)?;
            (u, bracket(u, BracketKind::StarPlus, &ctx))
        }
        Func::Theta => {
            let u = need(arg)?;
            let z = ctx.z_of(u);
            (z, theta_p(z, ctx.p).map_err(|e| e.to_string())?)
        }
        Func::RhoPlus => (need(arg)?, sf(StructFnId::RhoPlus, need(arg)?)?),
        Func::RhoPlusStar => (need(arg)?, sf(StructFnId::RhoPlusStar, need(arg)?)?),
        Func::Rho => (need(arg)?, sf(StructFnId::Rho, need(arg)?)?),
        Func::Mu => (need(arg)?, sf(StructFnId::Mu, need(arg)?)?),
        Func::MuStar => (need(arg)?, sf(StructFnId::MuStar, need(arg)?)?),
        Func::Chi => (need(arg)?, sf(StructFnId::Chi, need(arg)?)?),
        Func::Kappa => (zero, sf(StructFnId::Kappa, zero)?),
        Func::KappaPrime => (zero, sf(StructFnId::KappaPrime, zero)?),
        Func::GConst => (zero, sf(StructFnId::GConst, zero)?),
    };
    Ok(v)
}

fn eval(a: EvalArgs) -> ExitCode {
    let name = a.func.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    match eval_value(&a) {
        Ok((x, v)) => {
            let body = match a.format {
                Format::Text => format!("{name}({:.17e},{:.17e}) = {:.17e},{:.17e}\n", x.re, x.im, v.re, v.im),
                Format::Json => {
                    let doc = json!({"fn": name, "q": a.q, "r": a.r, "c": a.c, "arg": [x.re, x.im], "value": [v.re, v.im]});
                    serde_json::to_string_pretty(&doc).expect("value serializes") + "\n"
                }
            };
            match write_out(None, &body) {
                Ok(()) => ExitCode::SUCCESS,
                Err(_) => ExitCode::from(2),
            }
        }
        Err(e) => {
            eprintln!("ellqa: {e}");
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::List { format } => list(format),
        Cmd::Run(a) => run(a),
        Cmd::Eval(a) => eval(a),
    }
}
