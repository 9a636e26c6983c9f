use std::fmt::Write as _;
use std::io::{self, Read, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use morse_blocks::thue_morse::{block_length, quarter_markers};
use morse_blocks::{
    build_eta, enumerate_by_descendants, enumerate_by_scan, min_order, pf_eigenvalue, theta_n_explicit, verify_order,
    zeta_5_fixture, Claim, FactorSet, Substitution, TheoremOptions, VerificationReport,
};
use rayon::prelude::*;

#[derive(Parser)]
#[command(
    name = "morse-blocks",
    version,
    about = "Thue-Morse factors, N-block substitutions and their injective variants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the factors of length 2^m+1 in lexicographic order.
    Factors {
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum, default_value_t = Method::Scan)]
        method: Method,
        #[arg(long, value_enum, default_value_t = ListFormat::Text)]
        format: ListFormat,
    },
    /// Build θ_N or η_N for N = 2^m+1.
    Build {
        #[command(subcommand)]
        target: BuildTarget,
    },
    /// Dump a hard-coded fixture.
    Fixture {
        #[command(subcommand)]
        name: FixtureName,
    },
    /// Check the claims for every m in a range; exits 1 on any failure.
    Verify {
        /// Single order or inclusive range `lo..hi`.
        #[arg(long, value_parser = parse_range)]
        m: (u32, u32),
        /// Comma-separated claim names; all claims if omitted.
        #[arg(long, value_delimiter = ',')]
        claims: Option<Vec<Claim>>,
        #[arg(long, default_value_t = morse_blocks::substitution::DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = morse_blocks::injectivize::DEFAULT_DEPTH)]
        depth: u32,
    },
    /// PF eigenvalue and primitivity of a substitution given as JSON (`-` for stdin).
    Eigen {
        #[arg(long)]
        sub: PathBuf,
    },
}

#[derive(Subcommand)]
enum BuildTarget {
    Theta {
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        source: ThetaSource,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    Eta {
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct ThetaSource {
    /// Closed form via the pair maps.
    #[arg(long)]
    explicit: bool,
    /// Images of the 2-windows (default).
    #[arg(long)]
    windows: bool,
    /// Build both and require them to agree.
    #[arg(long)]
    both: bool,
}

#[derive(Subcommand)]
enum FixtureName {
    /// The non-primitive injective variant of θ_5.
    Zeta5 {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Scan,
    Descend,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ListFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("`{t}`: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (parse(lo)?, parse(hi.strip_prefix('=').unwrap_or(hi))?),
        None => {
            let m = parse(s)?;
            (m, m)
        }
    };
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

enum Failure {
    /// A check did not hold.
    Check(String),
    /// Bad input, unreadable file, unsupported order.
    Input(String),
}

impl Failure {
    fn input(e: impl std::fmt::Display) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<String, (String, Failure)>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out, failure) = match run(cli.command) {
        Ok(out) => (out, None),
        Err((out, f)) => (out, Some(f)),
    };
    let mut stdout = io::stdout().lock();
    if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(3);
    }
    match failure {
        None => ExitCode::SUCCESS,
        Some(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Some(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Outcome {
    let fail = |f: Failure| (String::new(), f);
    match command {
        Command::Factors { m, method, format } => {
            let set = match method {
                Method::Scan => enumerate_by_scan(m).map_err(|e| fail(Failure::input(e)))?,
                Method::Descend => enumerate_by_descendants(m).map_err(|e| fail(Failure::input(e)))?,
                Method::Both => {
                    let scan = enumerate_by_scan(m).map_err(|e| fail(Failure::input(e)))?;
                    let desc = enumerate_by_descendants(m).map_err(|e| fail(Failure::input(e)))?;
                    if scan != desc {
                        return Err(fail(Failure::Check(format!("enumerations disagree for m={m}"))));
                    }
                    scan
                }
            };
            Ok(match format {
                ListFormat::Text => factor_table(&set),
                ListFormat::Json => {
                    let words: Vec<String> = set.words().iter().map(ToString::to_string).collect();
                    serde_json::json!({ "m": m, "words": words }).to_string() + "\n"
                }
            })
        }
        Command::Build { target: BuildTarget::Theta { m, source, format } } => {
            let windows = || {
                morse_blocks::nblock::thue_morse_nblock(m)
                    .map(|s| s.into_substitution())
                    .map_err(|e| fail(Failure::input(e)))
            };
            let explicit = || theta_n_explicit(m).map_err(|e| fail(Failure::input(e)));
            let theta = if source.explicit {
                explicit()?
            } else if source.both {
                let (a, b) = (windows()?, explicit()?);
                if a != b {
                    return Err(fail(Failure::Check(format!("window and closed-form θ_N differ for m={m}"))));
                }
                a
            } else {
                windows()?
            };
            Ok(render(&theta, &format!("θ_{}", block_length(m)), format))
        }
        Command::Build { target: BuildTarget::Eta { m, format } } => {
            let sys = build_eta(m).map_err(|e| fail(Failure::input(e)))?;
            Ok(render(sys.eta(), &format!("η_{}", block_length(m)), format))
        }
        Command::Fixture { name: FixtureName::Zeta5 { format } } => Ok(render(&zeta_5_fixture(), "ζ_5", format)),
        Command::Verify { m: (lo, hi), claims, tol, depth } => {
            let claims = claims.unwrap_or_else(|| Claim::ALL.to_vec());
            verify(lo, hi, &claims, TheoremOptions { tol, depth })
        }
        Command::Eigen { sub } => eigen(&sub),
    }
}

fn verify(lo: u32, hi: u32, claims: &[Claim], opts: TheoremOptions) -> Outcome {
    let reports: Vec<_> = (lo..=hi)
        .into_par_iter()
        .map(|m| {
            let here: Vec<Claim> = claims.iter().copied().filter(|&c| m >= min_order(c)).collect();
            verify_order(m, &here, opts)
        })
        .collect();
    let mut report = VerificationReport::new();
    for (m, r) in (lo..=hi).zip(reports) {
        match r {
            Ok(r) => report.merge(r),
            Err(e) => return Err((String::new(), Failure::Input(format!("m={m}: {e}")))),
        }
    }
    let out = format!("{report}\n");
    if report.passed() {
        Ok(out)
    } else {
        let n = report.failed_count();
        Err((out, Failure::Check(format!("{n} claim(s) failed"))))
    }
}

fn eigen(path: &PathBuf) -> Outcome {
    let fail = |f: Failure| (String::new(), f);
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text).map_err(|e| fail(Failure::input(format!("stdin: {e}"))))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| fail(Failure::input(format!("{}: {e}", path.display()))))?;
    }
    let s = Substitution::from_json_str(&text).map_err(|e| fail(Failure::input(e)))?;
    let m = s.incidence_matrix();
    let pf =
        pf_eigenvalue(&m, morse_blocks::substitution::DEFAULT_TOL).map_err(|e| fail(Failure::Check(e.to_string())))?;
    Ok(format!("PF ≈ {pf:.9}, primitive: {}\n", m.is_primitive()))
}

/// Four columns, one per quarter, as in the usual listing of the factors.
fn factor_table(set: &FactorSet) -> String {
    let rows: Vec<String> = (1..=set.len()).map(|i| format!("w_{i} = {}", set.w(i))).collect();
    let mut out = columns(&rows);
    let marks = quarter_markers(set);
    let idx = |w| set.index_of(w).map_or(0, |i| i + 1);
    let q: Vec<String> = marks.q.iter().enumerate().map(|(j, w)| format!("q_{} = w_{}", j + 1, idx(w))).collect();
    let _ = writeln!(out, "{}, f_0 = w_{}, f_1 = w_{}", q.join(", "), idx(&marks.f0), idx(&marks.f1));
    out
}

fn render(s: &Substitution, name: &str, format: Format) -> String {
    match format {
        Format::Text => {
            let rows: Vec<String> = s
                .alphabet()
                .letters()
                .map(|a| {
                    let img: Vec<String> = s.image(a).iter().map(ToString::to_string).collect();
                    format!("{name}({a})={}", img.join(" "))
                })
                .collect();
            columns(&rows)
        }
        Format::Json => s.to_json_string() + "\n",
        Format::Dot => s.to_dot(name),
    }
}

/// Lays `cells` out column-major in four columns (fewer cells than four: one per line).
fn columns(cells: &[String]) -> String {
    let mut out = String::new();
    if cells.len() < 4 || !cells.len().is_multiple_of(4) {
        for c in cells {
            let _ = writeln!(out, "{c}");
        }
        return out;
    }
    let h = cells.len() / 4;
    let width: Vec<usize> =
        (0..4).map(|c| cells[c * h..(c + 1) * h].iter().map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    for r in 0..h {
        let mut line = String::new();
        for c in 0..4 {
            let cell = &cells[c * h + r];
            if c < 3 {
                let _ = write!(line, "{cell:<w$}   ", w = width[c]);
            } else {
                line.push_str(cell);
            }
        }
        let _ = writeln!(out, "{line}");
    }
    out
}
