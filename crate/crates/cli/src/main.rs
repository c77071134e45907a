use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Float;
use serde::Serialize;

use cubicmop::asymptotics::{big_f, cubic_residual, phi, DensityModel};
use cubicmop::coeffs::{ab_sequence, general_t_sequence};
use cubicmop::moments::ContourPair;
use cubicmop::mop::{self, PolyExport};
use cubicmop::numeric::{format_real, parse_real};
use cubicmop::painleve::{verification_report, CheckRecord};
use cubicmop::zeros::{self, ZeroExport, DEFAULT_TOL_ARG};
use cubicmop::{BigComplex, Error, Precision};

const ZEROS_HELP: &str = "\
Scaling of the exported `scaled_*` coordinates, intended for plotting:
  P_{k,l} with k, l > 0: divide by ((k+l)/2)^{1/3}, so n^{1/3} for P_{n,n}
    (e.g. zeros --n 15, zeros --k 7 --l 30, zeros --k 20 --l 7);
  one-sided P_{k,0} or P_{0,l}: divide by (k+l)^{1/3}, so zeros --k 45 --l 0 plots
    the zeros of P_{45,0}(45^{1/3} x).
Zeros at the origin are reported through `origin_multiplicity` and as rows of class `origin`.";

#[derive(Parser, Debug)]
#[command(name = "cubicmop", version, about = "Multiple orthogonal polynomials for the weight exp(-x^3)")]
struct Cli {
    /// working precision in decimal digits (at least 30)
    #[arg(long, env = "CUBICMOP_PRECISION", default_value_t = 60, global = true)]
    precision: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// write to this file instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Pair {
    G01,
    G02,
}

impl From<Pair> for ContourPair {
    fn from(p: Pair) -> Self {
        match p {
            Pair::G01 => ContourPair::G01,
            Pair::G02 => ContourPair::G02,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Recurrence coefficients: (n, a_n, b_n, a_n/n^{2/3}, b_n/n^{1/3}) at t = 0,
    /// complex (beta_n, gamma^2_n) otherwise
    Coeffs {
        #[arg(long = "N", default_value_t = 70)]
        big_n: usize,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        t: String,
        /// contour pair for t != 0
        #[arg(long, value_enum, default_value_t = Pair::G01)]
        pair: Pair,
    },
    /// Coefficients of P_{k,l}
    Poly(Indices),
    /// Zeros of P_{k,l} with their ray classes
    #[command(after_long_help = ZEROS_HELP)]
    Zeros(Indices),
    /// Limiting zero density v(x) and the overlay 3 v(x)
    Density {
        #[arg(long, default_value_t = 1000)]
        grid: usize,
    },
    /// Ratio limit Phi(x) and F(x) at a complex point
    Phi {
        #[arg(long, allow_hyphen_values = true)]
        re: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        im: f64,
    },
    /// Run the invariant suite; exit code 3 if any check fails
    Verify {
        /// largest recurrence index in the deformation checks
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
}

#[derive(Args, Debug)]
struct Indices {
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    /// shorthand for k = l = n
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    t: String,
}

impl Indices {
    fn resolve(&self) -> Result<(usize, usize), Failure> {
        match (self.n, self.k, self.l) {
            (Some(n), None, None) => Ok((n, n)),
            (None, Some(k), Some(l)) => Ok((k, l)),
            (None, Some(k), None) => Ok((k, 0)),
            (None, None, Some(l)) => Ok((0, l)),
            _ => Err(Failure::Usage("give either --n or --k/--l".into())),
        }
    }
}

enum Failure {
    Usage(String),
    Precision(String),
    Verification(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_precision() {
            Failure::Precision(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

struct Output {
    sink: Box<dyn Write>,
    format: Format,
}

impl Output {
    fn open(path: &Option<PathBuf>, format: Format) -> Result<Self, Failure> {
        let sink: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        Ok(Output { sink, format })
    }

    fn json<T: Serialize>(&mut self, value: &T) -> Result<(), Failure> {
        serde_json::to_writer_pretty(&mut self.sink, value)?;
        writeln!(self.sink)?;
        Ok(())
    }

    fn csv<H, R>(&mut self, header: &[H], rows: R) -> Result<(), Failure>
    where
        H: AsRef<[u8]>,
        R: IntoIterator<Item = Vec<String>>,
    {
        let mut w = csv::Writer::from_writer(&mut self.sink);
        w.write_record(header)?;
        for r in rows {
            w.write_record(&r)?;
        }
        w.flush()?;
        Ok(())
    }

    fn finish(mut self) -> Result<(), Failure> {
        self.sink.flush()?;
        Ok(())
    }
}

fn opt(s: Option<String>) -> String {
    s.unwrap_or_default()
}

fn cmd_coeffs(big_n: usize, t: &str, pair: Pair, prec: Precision, out: &mut Output) -> Result<(), Failure> {
    let tv = parse_real(t, prec)?;
    let digits = prec.digits();
    if tv.is_zero() {
        let seq = ab_sequence(big_n, prec)?;
        let rows = seq.rows(digits);
        match out.format {
            Format::Json => out.json(&rows),
            Format::Csv => out.csv(
                &["n", "a", "b", "a_scaled", "b_scaled"],
                rows.into_iter()
                    .map(|r| vec![r.n.to_string(), r.a, r.b, opt(r.a_scaled), opt(r.b_scaled)]),
            ),
        }
    } else {
        let seq = general_t_sequence(big_n, pair.into(), &tv, prec)?;
        #[derive(Serialize)]
        struct Row {
            n: usize,
            beta: [String; 2],
            gamma2: [String; 2],
        }
        let f = |c: &BigComplex| [format_real(&c.re, digits), format_real(&c.im, digits)];
        let rows: Vec<Row> = (0..=big_n)
            .map(|n| Row { n, beta: f(&seq.beta[n]), gamma2: f(&seq.gamma2[n]) })
            .collect();
        match out.format {
            Format::Json => out.json(&rows),
            Format::Csv => out.csv(
                &["n", "beta_re", "beta_im", "gamma2_re", "gamma2_im"],
                rows.into_iter().map(|r| {
                    let [br, bi] = r.beta;
                    let [gr, gi] = r.gamma2;
                    vec![r.n.to_string(), br, bi, gr, gi]
                }),
            ),
        }
    }
}

fn cmd_poly(ix: &Indices, prec: Precision, out: &mut Output) -> Result<(), Failure> {
    let (k, l) = ix.resolve()?;
    let t = parse_real(&ix.t, prec)?;
    let p = mop::MopRequest::new(k, l, t.clone(), prec)?.build()?;
    let export = PolyExport::new(&p, k, l, &t);
    match out.format {
        Format::Json => out.json(&export),
        Format::Csv => out.csv(
            &["power", "re", "im"],
            export.coeffs.into_iter().enumerate().map(|(i, [re, im])| vec![i.to_string(), re, im]),
        ),
    }
}

/// `((k+l)/2)^{1/3}` when both indices are positive, `(k+l)^{1/3}` otherwise.
fn figure_scale(k: usize, l: usize, prec: Precision) -> Float {
    let bits = prec.bits();
    let n = Float::with_val(bits, k + l);
    if k > 0 && l > 0 {
        (n / 2u32).cbrt()
    } else if k + l == 0 {
        Float::with_val(bits, 1)
    } else {
        n.cbrt()
    }
}

fn cmd_zeros(ix: &Indices, prec: Precision, out: &mut Output) -> Result<(), Failure> {
    let (k, l) = ix.resolve()?;
    let t = parse_real(&ix.t, prec)?;
    let p = mop::MopRequest::new(k, l, t.clone(), prec)?.build()?;
    let z = zeros::find_zeros(&p, prec)?;
    let scale = figure_scale(k, l, prec);
    let export = ZeroExport::new(&z, k, l, &t, &scale, prec.digits());
    match out.format {
        Format::Json => out.json(&export),
        Format::Csv => {
            let zero = "0".to_string();
            let origin = (0..export.origin_multiplicity).map(|_| {
                vec![zero.clone(), zero.clone(), zero.clone(), zero.clone(), "origin".to_string()]
            });
            let rest = export
                .roots
                .iter()
                .zip(&export.scaled_roots)
                .zip(&export.ray_class)
                .map(|(([re, im], [sre, sim]), c)| {
                    vec![re.clone(), im.clone(), sre.clone(), sim.clone(), c.label().to_string()]
                });
            out.csv(&["re", "im", "scaled_re", "scaled_im", "class"], origin.chain(rest).collect::<Vec<_>>())
        }
    }
}

fn cmd_density(grid: usize, out: &mut Output) -> Result<(), Failure> {
    if grid < 2 {
        return Err(Failure::Usage("--grid needs at least 2 points".into()));
    }
    let rows = DensityModel::new().grid(grid);
    match out.format {
        Format::Json => out.json(&rows),
        Format::Csv => out.csv(
            &["x", "v", "v3"],
            rows.into_iter().map(|r| vec![fmt_f64(r.x), fmt_f64(r.v), fmt_f64(r.v3)]),
        ),
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.15e}")
}

fn cmd_phi(re: f64, im: f64, prec: Precision, out: &mut Output) -> Result<(), Failure> {
    let x = BigComplex::from_f64(re, im, prec);
    let ph = phi(&x)?;
    let f = big_f(&x)?;
    let res = cubic_residual(&x, &ph);
    let d = prec.digits();
    #[derive(Serialize)]
    struct Row {
        x: [String; 2],
        phi: [String; 2],
        big_f: [String; 2],
        cubic_residual: String,
    }
    let pair = |c: &BigComplex| [format_real(&c.re, d), format_real(&c.im, d)];
    let row = Row { x: pair(&x), phi: pair(&ph), big_f: pair(&f), cubic_residual: format_real(&res, 6) };
    match out.format {
        Format::Json => out.json(&row),
        Format::Csv => {
            let [xr, xi] = row.x;
            let [pr, pi] = row.phi;
            let [fr, fi] = row.big_f;
            out.csv(
                &["x_re", "x_im", "phi_re", "phi_im", "f_re", "f_im", "cubic_residual"],
                [vec![xr, xi, pr, pi, fr, fi, row.cubic_residual]],
            )
        }
    }
}

fn record(check: &str, n: usize, residual: &Float, bound: &Float) -> CheckRecord {
    CheckRecord {
        check: check.to_string(),
        n,
        t: 0.0,
        h: None,
        residual: residual.to_f64(),
        bound: bound.to_f64(),
        pass: residual <= bound,
    }
}

fn invariant_suite(n_max: usize, prec: Precision) -> Result<Vec<CheckRecord>, Failure> {
    let mut out = Vec::new();
    let seq = ab_sequence(200, prec)?;
    out.push(record("string residual", 200, &seq.string_residual(), &seq.precision_used.tol(15)));
    let t0 = Float::with_val(prec.bits(), 0);
    for n in 0..=10 {
        for k in 0..=n {
            let l = n - k;
            let p = mop::build(k, l, prec)?;
            let r = mop::orthogonality_residual(&p, k, l, &t0)?;
            out.push(record(&format!("orthogonality ({k},{l})"), n, &r, &prec.tol(25)));
        }
    }
    for n in 1..=20 {
        let p = mop::build(n, n, prec)?;
        let z = zeros::find_zeros(&p, prec)?;
        let rep = zeros::classify(&z, DEFAULT_TOL_ARG, Some(n));
        out.push(CheckRecord {
            check: "diagonal zero table".into(),
            n,
            t: 0.0,
            h: None,
            residual: rep.positive_real as f64,
            bound: zeros::expected_positive_count(n) as f64,
            pass: rep.diagonal_table_ok == Some(true),
        });
    }
    let model = DensityModel::new();
    let mass = 3.0 * model.segment_mass();
    out.push(CheckRecord {
        check: "density mass".into(),
        n: 0,
        t: 0.0,
        h: None,
        residual: (mass - 1.0).abs(),
        bound: 1e-10,
        pass: (mass - 1.0).abs() <= 1e-10,
    });
    for (re, im) in [(2.0, 0.0), (1.0, 1.0), (-1.0, 1.0)] {
        let x = BigComplex::from_f64(re, im, prec);
        let r = cubic_residual(&x, &phi(&x)?);
        out.push(record(&format!("phi cubic residual ({re}{im:+}i)"), 0, &r, &prec.tol(20)));
    }
    for pair in [ContourPair::G01, ContourPair::G02] {
        out.extend(verification_report(n_max, &[0.0, 0.5, -0.5], pair, prec)?);
    }
    Ok(out)
}

fn cmd_verify(n: usize, prec: Precision, out: &mut Output) -> Result<(), Failure> {
    let records = invariant_suite(n, prec)?;
    match out.format {
        Format::Json => out.json(&records)?,
        Format::Csv => out.csv(
            &["check", "n", "t", "h", "residual", "bound", "pass"],
            records.iter().map(|r| {
                vec![
                    r.check.clone(),
                    r.n.to_string(),
                    r.t.to_string(),
                    r.h.map(|h| h.to_string()).unwrap_or_default(),
                    fmt_f64(r.residual),
                    fmt_f64(r.bound),
                    r.pass.to_string(),
                ]
            }),
        )?,
    }
    let failed = records.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        return Err(Failure::Verification(format!("{failed} of {} checks failed", records.len())));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let prec = Precision::new(cli.precision).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut out = Output::open(&cli.out, cli.format)?;
    let res = match &cli.command {
        Command::Coeffs { big_n, t, pair } => cmd_coeffs(*big_n, t, *pair, prec, &mut out),
        Command::Poly(ix) => cmd_poly(ix, prec, &mut out),
        Command::Zeros(ix) => cmd_zeros(ix, prec, &mut out),
        Command::Density { grid } => cmd_density(*grid, &mut out),
        Command::Phi { re, im } => cmd_phi(*re, *im, prec, &mut out),
        Command::Verify { n } => cmd_verify(*n, prec, &mut out),
    };
    let fin = out.finish();
    res.and(fin)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (1, m),
                Failure::Io(m) => (1, m),
                Failure::Precision(m) => (2, m),
                Failure::Verification(m) => (3, m),
            };
            eprintln!("cubicmop: {msg}");
            ExitCode::from(code)
        }
    }
}
