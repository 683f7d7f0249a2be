//! Command-line surface: verification suites, figure renderings, JSON
//! exports.

use clap::{Parser, Subcommand, ValueEnum};
use mwcalc_core::export;
use mwcalc_core::render;
use mwcalc_core::segment::CuspidalDatum;
use mwcalc_core::spectral::{self, LocalCase, TableFunctor};
use mwcalc_core::verify::{run_suite, Status, Suite};
use mwcalc_core::CalcError;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "mwcalc",
    about = "Exact calculator for arrow-word combinatorics, sheaf symbols and monodromy spectral sequences",
    long_about = None
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and print one line per check.
    Verify {
        /// Suite to run: all, segments, jacquet, groth, sheaf, spectral.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Size bound for the checks.
        #[arg(long = "max-s", default_value_t = 6)]
        max_s: u32,
    },
    /// Render a figure grid as deterministic text or SVG.
    Render {
        /// One of: fig1, fig4, fig5, fig6, fig9, fig10.
        #[arg(long)]
        figure: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        s: Option<u32>,
        #[arg(long)]
        g: Option<u32>,
        #[arg(long)]
        d: Option<u32>,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export an object as canonical JSON.
    Export {
        /// One of: mle, mge, mgr, utable, cohtable, ss.
        #[arg(long)]
        object: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        s: Option<u32>,
        #[arg(long)]
        g: Option<u32>,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        t: Option<u32>,
        /// Page index for spectral-sequence objects.
        #[arg(long, default_value_t = 1)]
        page: u32,
        /// sp or speh.
        #[arg(long)]
        case: Option<String>,
        /// j!, j!* or Rj*.
        #[arg(long)]
        functor: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Svg,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CalcError> {
    match cli.command {
        Command::Verify { suite, max_s } => {
            if max_s == 0 {
                return Err(CalcError::Usage("--max-s must be at least 1".into()));
            }
            let suite: Suite = suite.parse()?;
            let report = run_suite(suite, max_s);
            for check in &report.checks {
                match check.status {
                    Status::Pass => println!("PASS {} [{}]", check.name, check.params),
                    Status::Fail => println!(
                        "FAIL {} [{}]: {}",
                        check.name,
                        check.params,
                        check.witness.as_deref().unwrap_or("no witness")
                    ),
                }
            }
            let failed = report.checks.iter().filter(|c| c.status == Status::Fail).count();
            println!(
                "{} checks, {} failed, {:.3}s",
                report.checks.len(),
                failed,
                report.elapsed.as_secs_f64()
            );
            if failed > 0 {
                // a single-check rerun hint for the first failure
                if let Some(c) = report.failures().next() {
                    let suite_name = c.name.split('/').next().unwrap_or("all");
                    eprintln!("rerun with: mwcalc verify --suite {suite_name} --max-s {max_s}");
                }
                Ok(ExitCode::FAILURE)
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Render {
            figure,
            format,
            s,
            g,
            d,
            out,
        } => {
            let fig = render::build_figure(&figure, s, g, d)?;
            let text = match format {
                Format::Text => render::render_text(&fig),
                Format::Svg => render::render_svg(&fig),
            };
            match out {
                Some(path) => std::fs::write(&path, text)
                    .map_err(|e| CalcError::Usage(format!("cannot write {path:?}: {e}")))?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Export {
            object,
            out,
            s,
            g,
            d,
            t,
            page,
            case,
            functor,
        } => {
            let json = export_object(&object, s, g, d, t, page, case, functor)?;
            std::fs::write(&out, json)
                .map_err(|e| CalcError::Usage(format!("cannot write {out:?}: {e}")))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn need(p: Option<u32>, what: &str) -> Result<u32, CalcError> {
    p.ok_or_else(|| CalcError::Usage(format!("missing --{what}")))
}

fn parse_case(case: Option<String>) -> Result<LocalCase, CalcError> {
    match case.as_deref() {
        Some("sp") => Ok(LocalCase::Sp),
        Some("speh") => Ok(LocalCase::Speh),
        Some(other) => Err(CalcError::Usage(format!("unknown case {other:?}"))),
        None => Err(CalcError::Usage("missing --case (sp or speh)".into())),
    }
}

#[allow(clippy::too_many_arguments)]
fn export_object(
    object: &str,
    s: Option<u32>,
    g: Option<u32>,
    d: Option<u32>,
    t: Option<u32>,
    page: u32,
    case: Option<String>,
    functor: Option<String>,
) -> Result<String, CalcError> {
    let base_of = |g: u32| CuspidalDatum::new(g, "pi", "pi*");
    match object {
        "mgr" => export::to_json(&export::mgr_to_dto(need(s, "s")?)),
        "mle" => {
            let s = need(s, "s")?;
            let base = base_of(1)?;
            let p = spectral::mle_page(&base, s, page)?;
            export::to_json(&export::rep_page_to_dto(&p))
        }
        "mge" => {
            let g = need(g, "g")?;
            let d = need(d, "d")?;
            let base = base_of(g)?;
            let p = spectral::mge_page(&base, d, g, page)?;
            export::to_json(&export::sheaf_page_to_dto(&p))
        }
        "utable" => {
            let g = need(g, "g")?;
            let d = need(d, "d")?;
            let s = need(s, "s")?;
            if d != s * g {
                return Err(CalcError::Usage(format!("need d = s·g, got {d} ≠ {s}·{g}")));
            }
            let base = base_of(g)?;
            export::to_json(&export::utable_to_dto(&base, d, s)?)
        }
        "cohtable" => {
            let g = need(g, "g")?;
            let s = need(s, "s")?;
            let t = need(t, "t")?;
            let case = parse_case(case)?;
            let functor = match functor.as_deref() {
                Some("j!") => TableFunctor::JShriek,
                Some("j!*") => TableFunctor::JShriekStar,
                Some("Rj*") => TableFunctor::RjStar,
                Some(other) => {
                    return Err(CalcError::Usage(format!("unknown functor {other:?}")))
                }
                None => return Err(CalcError::Usage("missing --functor".into())),
            };
            let base = base_of(g)?;
            export::to_json(&export::cohtable_to_dto(&base, case, t, s, functor)?)
        }
        "ss" => {
            let g = need(g, "g")?;
            let s = need(s, "s")?;
            let case = parse_case(case)?;
            let base = base_of(g)?;
            let gss = spectral::global_ss(&base, s * g, g, case)?;
            export::to_json(&export::global_ss_to_dto(s * g, g, &gss))
        }
        other => Err(CalcError::Usage(format!("unknown export object {other:?}"))),
    }
}
