use std::process::ExitCode;

use chiral_tduality::cdr::Cdr;
use chiral_tduality::error::Error;
use chiral_tduality::parse::{parse_scene, Parser as ExprParser, STD2D};
use chiral_tduality::tduality::{DualityPair, TauConvention};
use chiral_tduality::twisted::BundleScene;
use chiral_tduality::vertex::{State, VertexAlgebra};
use chiralt::{checks, exit, render, Check, Format, Settings, Which};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "chiralt", version, about = "Exact computations in chiral de Rham complexes and their T-duals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Scene file, or `std2d` for the bundled scene.
    #[arg(long, global = true, default_value = "std2d")]
    scene: String,
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 200)]
    samples: usize,
    /// Overrides the scene's weight cap.
    #[arg(long, global = true)]
    weight_cap: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Conv::Phi)]
    tau_convention: Conv,
    #[arg(long, global = true, value_enum, default_value_t = Fmt::Text)]
    format: Fmt,
    /// Algebra for `ope`, `prod`, `normalize` and table mutations.
    #[arg(long, global = true, value_enum, default_value_t = Alg::Cdr)]
    algebra: Alg,
    /// Perturb the n-th declared bracket before `check opes`.
    #[arg(long, global = true, hide = true)]
    mutate_entry: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Singular part of the OPE a(z)b(w). A single argument such as `QG` is split.
    Ope { a: String, b: Option<String> },
    /// The k-th product a_(k)b.
    #[command(allow_negative_numbers = true)]
    Prod { k: i64, a: String, b: String },
    /// Print the normal form.
    Normalize { a: String },
    /// Twisted differential D_H.
    D { a: String },
    /// Exotic differential.
    Dhat { a: String },
    /// tau on a twisted state.
    Tdualize { a: String },
    /// sigma-hat on an exotic state.
    Sigma { a: String },
    /// Round-trip suite.
    Roundtrip,
    /// Run one named suite.
    Check { suite: String },
    /// Run every suite; only `all` is accepted.
    Suite { name: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Conv {
    Paper,
    Phi,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Text,
    Lines,
}

#[derive(Clone, Copy, ValueEnum)]
enum Alg {
    Cdr,
    Twisted,
    Exotic,
}

fn status(e: &Error) -> i32 {
    match e {
        Error::CapExceeded(_) => exit::CAP,
        _ => exit::USAGE,
    }
}

fn load_scene(source: &str) -> Result<BundleScene, Error> {
    let text = if source == "std2d" {
        STD2D.to_string()
    } else {
        std::fs::read_to_string(source).map_err(|e| Error::Precondition(format!("{source}: {e}")))?
    };
    parse_scene(&text)
}

struct Session {
    settings: Settings,
    pair: DualityPair,
    cdr: Cdr,
}

impl Session {
    fn algebra(&self, which: Which) -> &VertexAlgebra {
        match which {
            Which::Cdr => self.cdr.algebra(),
            Which::Twisted => self.pair.twisted().algebra(),
            Which::Exotic => self.pair.exotic().algebra(),
        }
    }

    fn named(&self, which: Which) -> Vec<(&'static str, State)> {
        if which == Which::Cdr {
            self.cdr.named_fields()
        } else {
            Vec::new()
        }
    }

    fn parse(&self, which: Which, text: &str) -> Result<State, Error> {
        let named = self.named(which).into_iter().map(|(n, s)| (n.to_string(), s));
        let x = ExprParser::new(self.algebra(which)).with_named(named).with_phase_cap(self.settings.scene.caps.fourier).parse(text)?;
        let w = self.algebra(which).max_weight(&x).unwrap_or(0);
        if w > self.settings.weight_cap as i32 {
            return Err(Error::CapExceeded(format!("weight {w} above cap {}", self.settings.weight_cap)));
        }
        Ok(x)
    }

    /// `QG` style arguments: the first split where both halves parse.
    fn split(&self, which: Which, text: &str) -> Result<(State, State), Error> {
        let mut first = None;
        for (i, _) in text.char_indices().skip(1) {
            match (self.parse(which, &text[..i]), self.parse(which, &text[i..])) {
                (Ok(a), Ok(b)) => return Ok((a, b)),
                (Err(e), _) | (_, Err(e)) => {
                    first.get_or_insert(e);
                }
            }
        }
        Err(first.unwrap_or_else(|| Error::Parse { line: 1, col: 1, msg: "expected two fields".into() }))
    }
}

fn run(cli: Cli) -> Result<(String, i32), Error> {
    let scene = load_scene(&cli.scene)?;
    let mut settings = Settings::new(scene.clone());
    settings.seed = cli.seed;
    settings.samples = cli.samples;
    if let Some(w) = cli.weight_cap {
        settings.weight_cap = w;
    }
    settings.conv = match cli.tau_convention {
        Conv::Paper => TauConvention::Paper,
        Conv::Phi => TauConvention::Phi,
    };
    settings.algebra = match cli.algebra {
        Alg::Cdr => Which::Cdr,
        Alg::Twisted => Which::Twisted,
        Alg::Exotic => Which::Exotic,
    };
    settings.mutate = cli.mutate_entry;
    let format = match cli.format {
        Fmt::Text => Format::Text,
        Fmt::Lines => Format::Lines,
    };
    let which = settings.algebra;
    let session = Session { pair: DualityPair::new(&scene), cdr: Cdr::new(scene.patch().clone()), settings };
    let s = &session;
    let value = |alg: Which, x: State| Ok((format!("{}\n", s.algebra(alg).show(&x)), exit::PASS));
    let report = |checks: Vec<Check>| {
        let code = if checks.iter().all(|c| c.passed) { exit::PASS } else { exit::FAIL };
        Ok((render(&checks, format), code))
    };
    match cli.command {
        Command::Ope { a, b } => {
            let (x, y) = match b {
                Some(b) => (s.parse(which, &a)?, s.parse(which, &b)?),
                None => s.split(which, &a)?,
            };
            let named = s.named(which);
            Ok((format!("{}\n", s.algebra(which).show_ope(&x, &y, &named)), exit::PASS))
        }
        Command::Prod { k, a, b } => {
            let (x, y) = (s.parse(which, &a)?, s.parse(which, &b)?);
            value(which, s.algebra(which).product(k, &x, &y))
        }
        Command::Normalize { a } => value(which, s.parse(which, &a)?),
        Command::D { a } => value(Which::Twisted, s.pair.twisted().d_h(&s.parse(Which::Twisted, &a)?)),
        Command::Dhat { a } => value(Which::Exotic, s.pair.exotic().apply_full(&s.parse(Which::Exotic, &a)?)),
        Command::Tdualize { a } => value(Which::Exotic, s.pair.tau(&s.parse(Which::Twisted, &a)?, s.settings.conv)),
        Command::Sigma { a } => value(Which::Twisted, s.pair.sigma_hat(&s.parse(Which::Exotic, &a)?, s.settings.conv)),
        Command::Roundtrip => report(checks::roundtrip(&s.settings)),
        Command::Check { suite } => match checks::named(&suite, &s.settings) {
            Some(c) => report(c),
            None => Err(Error::Unknown(format!("{suite} (suites: {})", checks::SUITES.join(", ")))),
        },
        Command::Suite { name } if name == "all" => report(checks::all(&s.settings)),
        Command::Suite { name } => Err(Error::Unknown(format!("{name} (only `all`)"))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { exit::PASS as u8 });
        }
    };
    match run(cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("chiralt: {e}");
            ExitCode::from(status(&e) as u8)
        }
    }
}
