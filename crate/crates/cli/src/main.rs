use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde_json::json;

use ybsl21_core::lowest::SpectrumRow;
use ybsl21_core::rational::{parse_rational, render};
use ybsl21_core::rops::ParamPair;
use ybsl21_core::sl21::Weight;
use ybsl21_core::suite::{self, Command, SuiteConfig, WeightInput};
use ybsl21_core::{CheckReport, Error, Rational, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CommandArg {
    CheckAlgebra,
    CheckLax,
    CheckRll,
    CheckDefining,
    CheckLemmas,
    CheckRecurrences,
    CheckFactorization,
    CheckYbe,
    Spectrum,
    All,
}

impl From<CommandArg> for Command {
    fn from(c: CommandArg) -> Command {
        match c {
            CommandArg::CheckAlgebra => Command::Algebra,
            CommandArg::CheckLax => Command::Lax,
            CommandArg::CheckRll => Command::Rll,
            CommandArg::CheckDefining => Command::Defining,
            CommandArg::CheckLemmas => Command::Lemmas,
            CommandArg::CheckRecurrences => Command::Recurrences,
            CommandArg::CheckFactorization => Command::Factorization,
            CommandArg::CheckYbe => Command::Ybe,
            CommandArg::Spectrum => Command::Spectrum,
            CommandArg::All => Command::All,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Exact checks of the factorized sl(2|1) R-operator.
#[derive(Debug, Parser)]
#[command(name = "ybsl21", version)]
struct Cli {
    #[arg(long, value_enum, default_value = "all")]
    command: CommandArg,
    /// Largest total z-degree of the test monomials.
    #[arg(long, default_value_t = 3)]
    max_degree: u32,
    #[arg(long, env = "YBSL21_SEED", default_value_t = 1)]
    seed: u64,
    /// Number of random parameter sets per suite.
    #[arg(long, default_value_t = 3)]
    samples: usize,
    /// Explicit "u1,u2,u3,v1,v2,v3".
    #[arg(long, conflicts_with = "weights")]
    params: Option<String>,
    /// Explicit "l1,b1,l2,b2,u,v".
    #[arg(long)]
    weights: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Keep per-check wall-clock times in the output.
    #[arg(long)]
    timing: bool,
}

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

fn parse_list<const N: usize>(flag: &str, s: &str) -> Result<[Rational; N], Error> {
    let values: Vec<Rational> = s.split(',').map(|x| parse_rational(x.trim())).collect::<Result<_, _>>()?;
    values
        .try_into()
        .map_err(|v: Vec<Rational>| Error::Parse(format!("--{flag} expects {N} values, got {}", v.len())))
}

fn config(cli: &Cli) -> Result<SuiteConfig, Error> {
    let mut cfg = SuiteConfig::new(cli.seed, cli.samples, cli.max_degree);
    if let Some(p) = &cli.params {
        cfg.params = Some(ParamPair::from_values(&parse_list::<6>("params", p)?));
    }
    if let Some(w) = &cli.weights {
        let [l1, b1, l2, b2, u, v] = parse_list::<6>("weights", w)?;
        cfg.weights = Some(WeightInput {
            w1: Weight::new(l1, b1),
            w2: Weight::new(l2, b2),
            u,
            v,
        });
    }
    cfg.validate()?;
    Ok(cfg)
}

struct Output {
    out: Box<dyn Write>,
    format: Format,
    timing: bool,
    counts: [usize; 3],
}

impl Output {
    fn report(&mut self, mut r: CheckReport) -> io::Result<()> {
        if !self.timing {
            r.elapsed_ms = None;
        }
        self.counts[match r.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }] += 1;
        match self.format {
            Format::Json => writeln!(self.out, "{}", serde_json::to_string(&r).expect("report serializes"))?,
            Format::Text => self.text_report(&r)?,
        }
        self.out.flush()
    }

    fn text_report(&mut self, r: &CheckReport) -> io::Result<()> {
        let status = match r.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        };
        let params: Vec<String> = r.params.iter().map(|p| format!("{}={}", p.name, p.value)).collect();
        write!(self.out, "{status:5} {} D={} [{}]", r.check_name, r.max_degree, params.join(" "))?;
        if let Some(ms) = r.elapsed_ms {
            write!(self.out, " {ms} ms")?;
        }
        writeln!(self.out)?;
        if let Some(e) = &r.error {
            writeln!(self.out, "      error: {e}")?;
        }
        for f in &r.failures {
            writeln!(self.out, "      at {}: lhs = {} ; rhs = {}", f.input, f.lhs, f.rhs)?;
        }
        if r.failure_count > r.failures.len() {
            writeln!(self.out, "      ... {} failures in total", r.failure_count)?;
        }
        for n in &r.notes {
            writeln!(self.out, "      note: {n}")?;
        }
        Ok(())
    }

    fn spectrum_table(&mut self, params: &[Rational; 6], rows: &[SpectrumRow]) -> io::Result<()> {
        let names = ["u1", "u2", "u3", "v1", "v2", "v3"];
        match self.format {
            Format::Json => {
                let p: Vec<_> = names
                    .iter()
                    .zip(params)
                    .map(|(n, v)| json!({"name": n, "value": render(v)}))
                    .collect();
                let line = json!({"spectrum_table": {"params": p, "rows": rows}});
                writeln!(self.out, "{line}")?;
            }
            Format::Text => {
                let p: Vec<String> = names.iter().zip(params).map(|(n, v)| format!("{n}={}", render(v))).collect();
                writeln!(self.out, "spectrum [{}]", p.join(" "))?;
                writeln!(
                    self.out,
                    "  {:<5} {:<6} {:>2}  {:<16} {:>24} {:>24}  ok",
                    "op", "sector", "n", "entry", "computed", "formula"
                )?;
                for r in rows {
                    let sector = serde_json::to_value(r.sector).expect("sector serializes");
                    writeln!(
                        self.out,
                        "  {:<5} {:<6} {:>2}  {:<16} {:>24} {:>24}  {}{}",
                        r.operator,
                        sector.as_str().unwrap_or_default(),
                        r.n,
                        r.entry,
                        r.computed,
                        r.formula,
                        if r.agree { "yes" } else { "NO" },
                        r.note.as_deref().map(|n| format!("  [{n}]")).unwrap_or_default()
                    )?;
                }
            }
        }
        self.out.flush()
    }

    fn summary(&mut self) -> io::Result<()> {
        let [pass, fail, error] = self.counts;
        match self.format {
            Format::Json => writeln!(
                self.out,
                "{}",
                json!({"summary": {"pass": pass, "fail": fail, "error": error}})
            )?,
            Format::Text => writeln!(self.out, "{pass} passed, {fail} failed, {error} errors")?,
        }
        self.out.flush()
    }
}

fn config_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse(_) | Error::SingularParameters(_) | Error::GuardExhausted(_) | Error::SingularWeight(_)
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("ybsl21: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let sink: Box<dyn Write> = match &cli.out {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("ybsl21: cannot open {}: {e}", path.display());
                return ExitCode::from(EXIT_CONFIG);
            }
        },
        None => Box::new(io::stdout().lock()),
    };
    let mut out = Output {
        out: sink,
        format: cli.format,
        timing: cli.timing,
        counts: [0; 3],
    };
    let command = Command::from(cli.command);

    let mut io_error = None;
    if command == Command::Spectrum {
        match suite::spectrum_table(&cfg) {
            Ok(tables) => {
                for (p, rows) in tables {
                    if let Err(e) = out.spectrum_table(&p.values(), &rows) {
                        io_error.get_or_insert(e);
                    }
                }
            }
            Err(e) => {
                eprintln!("ybsl21: {e}");
                return ExitCode::from(if config_error(&e) { EXIT_CONFIG } else { EXIT_INTERNAL });
            }
        }
    }
    let result = suite::run(&cfg, command, &mut |r| {
        if let Err(e) = out.report(r) {
            io_error.get_or_insert(e);
        }
    });
    if let Err(e) = result {
        eprintln!("ybsl21: {e}");
        return ExitCode::from(if config_error(&e) { EXIT_CONFIG } else { EXIT_INTERNAL });
    }
    if let Err(e) = out.summary() {
        io_error.get_or_insert(e);
    }
    if let Some(e) = io_error {
        eprintln!("ybsl21: write failed: {e}");
        return ExitCode::from(EXIT_INTERNAL);
    }
    match out.counts {
        [_, 0, 0] => ExitCode::SUCCESS,
        [_, _, 0] => ExitCode::from(EXIT_FAIL),
        _ => ExitCode::from(EXIT_INTERNAL),
    }
}
