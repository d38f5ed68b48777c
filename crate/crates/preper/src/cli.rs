//! Argument parsing and dispatch for the `preper` binary.

use std::collections::BTreeMap;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use num_traits::Pow;
use preper_core::dynamics::{self, PowerMap};
use preper_core::search::{self, CycleCertificate};
use preper_core::{abc, curves, fermat_catalan, Error, Integer, Rational, Result};

use crate::cert::{
    parse_integer, parse_rational, AbcTripleCert, BoundCert, Certificate, CurvePointCert, CycleCert, DecompositionCert,
    FactorizationCert, FamilyCert, FixedPairCert, NonexistenceCert, OrbitCert, Payload, PointPairCert, PolynomialCert,
    PreperNodeCert, Provenance, SignatureCert, SweepRowCert, SystemCheckCert, Type12Cert, VERSION,
};
use crate::parallel::{self, Workers};

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Exit status for invalid input.
pub const EXIT_INVALID: i32 = 2;
/// Exit status for a failed internal assertion: a result contradicted a
/// proven theorem, which indicates a bug.
pub const EXIT_INTERNAL: i32 = 3;

fn rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn integer_arg(s: &str) -> std::result::Result<Integer, String> {
    parse_integer(s).map_err(|e| e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "preper", version, about = "Rational periodic and preperiodic points of x^d + c")]
pub struct Cli {
    /// Emit one JSON certificate per line.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for searches (0 = all cores); never changes output.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Search bound (box size).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub bound: Option<i64>,
    /// Degree d of x^d + c.
    #[arg(long, global = true)]
    pub d: Option<u32>,
    /// Parameter c as p/q.
    #[arg(long, global = true, value_parser = rational_arg, allow_hyphen_values = true)]
    pub c: Option<Rational>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify the orbit of x under x^d + c.
    Orbit {
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        x: Rational,
    },
    /// The dynatomic polynomial Phi_n(x, c) of x^d + c.
    Dynatomic {
        #[arg(long, default_value_t = 2)]
        n: u32,
    },
    /// Res_x(Phi_2(x, c), t - x - f(x)) as a polynomial in t over Q[c].
    TraceResultant,
    /// All rational two-cycles of x^d + c (even d) with data at most --bound.
    #[command(name = "search-2cycles")]
    Search2Cycles,
    /// The complete preperiodic graph of x^d + c over P^1(Q).
    SearchPreper,
    /// All pairs of distinct rational fixed points with data at most --bound.
    SearchFixed,
    /// All solutions of X0^d - R^d = 2 X0 Z^(d-1) in the --bound box.
    SearchType12,
    /// Preperiodic graphs over a box of parameters c = C/Z^d.
    Sweep {
        /// Degrees to sweep (defaults to --d).
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<u32>,
        #[arg(long, default_value_t = 2)]
        z_max: i64,
        #[arg(long, default_value_t = 50)]
        height: i64,
        /// Extra parameters to include.
        #[arg(long, value_delimiter = ',', value_parser = rational_arg, allow_hyphen_values = true)]
        extra_c: Vec<Rational>,
    },
    /// Fermat-Catalan decomposition of two-cycles of x^d + c.
    FcDecompose(FcDecomposeArgs),
    /// Coprime solutions of x^k + y^k = delta z^(2k-1) in the --bound box.
    FcSearch {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        delta: u32,
    },
    /// Whether the 3 | 2k-1 nonexistence criterion applies to x^(2k) + c.
    FcCheck {
        #[arg(long)]
        k: u64,
    },
    /// Conditional degree bound; with --d also the fixed-point threshold W*.
    AbcBound {
        #[arg(long)]
        epsilon: f64,
        #[arg(long = "K")]
        k: f64,
        #[arg(long, default_value_t = 2.0)]
        base: f64,
        /// Evaluate the fixed-point inequality at this W (needs --d).
        #[arg(long)]
        w: Option<f64>,
    },
    /// Radical, quality and explicit-bound margins of an abc triple.
    AbcTriple {
        #[arg(value_parser = integer_arg, allow_hyphen_values = true)]
        a: Integer,
        #[arg(value_parser = integer_arg, allow_hyphen_values = true)]
        b: Integer,
        #[arg(value_parser = integer_arg, allow_hyphen_values = true)]
        sum: Integer,
    },
    /// Points of y^2 = -t^4 - 2t with t = P/Q, |P|, Q <= --bound.
    CurveQuartic,
    /// Points of Y^2 = X^5 + 81 Z^10 with |X| <= bound^2, Z <= bound.
    CurveHyper,
    /// The two-cycle of x^4 + c attached to a point (t, y) of y^2 = -t^4 - 2t.
    Family {
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        t: Rational,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        y: Rational,
    },
    /// Exact cofactor of the family factor in 64 t^6 Phi_2(x, c(t)).
    FamilyFactor,
    /// Evaluate each clause of the two-cycle abc system.
    SystemCheck {
        #[arg(long, value_parser = integer_arg, allow_hyphen_values = true)]
        x1: Integer,
        #[arg(long, value_parser = integer_arg, allow_hyphen_values = true)]
        x2: Integer,
        #[arg(long, value_parser = integer_arg, allow_hyphen_values = true)]
        x3: Integer,
        #[arg(long, value_parser = integer_arg, allow_hyphen_values = true)]
        z: Integer,
    },
    /// Map two fixed points of x^d + c to a two-cycle of x^d + c'.
    FixedToCycle(PairArgs),
    /// Map a two-cycle of x^d + c' to two fixed points of x^d + c.
    CycleToFixed(PairArgs),
    /// Prime factorization and radical.
    Factor {
        #[arg(value_parser = integer_arg, allow_hyphen_values = true)]
        n: Integer,
    },
}

#[derive(Args, Debug)]
pub struct FcDecomposeArgs {
    /// Decompose the single cycle X1/Z -> X2/Z instead of searching.
    #[arg(long, value_parser = integer_arg, allow_hyphen_values = true, requires_all = ["x2", "z"])]
    pub x1: Option<Integer>,
    #[arg(long, value_parser = integer_arg, allow_hyphen_values = true)]
    pub x2: Option<Integer>,
    #[arg(long, value_parser = integer_arg, allow_hyphen_values = true)]
    pub z: Option<Integer>,
}

#[derive(Args, Debug)]
pub struct PairArgs {
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    pub x1: Rational,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    pub x2: Rational,
}

fn need<T: Clone>(v: &Option<T>, flag: &str) -> Result<T> {
    v.clone().ok_or_else(|| Error::InvalidInput(format!("missing required flag --{flag}")))
}

struct Ctx {
    subcommand: String,
    params: BTreeMap<String, String>,
    out: Vec<Payload>,
}

impl Ctx {
    fn param(&mut self, k: &str, v: impl ToString) {
        self.params.insert(k.into(), v.to_string());
    }
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Orbit { .. } => "orbit",
        Command::Dynatomic { .. } => "dynatomic",
        Command::TraceResultant => "trace-resultant",
        Command::Search2Cycles => "search-2cycles",
        Command::SearchPreper => "search-preper",
        Command::SearchFixed => "search-fixed",
        Command::SearchType12 => "search-type12",
        Command::Sweep { .. } => "sweep",
        Command::FcDecompose(_) => "fc-decompose",
        Command::FcSearch { .. } => "fc-search",
        Command::FcCheck { .. } => "fc-check",
        Command::AbcBound { .. } => "abc-bound",
        Command::AbcTriple { .. } => "abc-triple",
        Command::CurveQuartic => "curve-quartic",
        Command::CurveHyper => "curve-hyper",
        Command::Family { .. } => "family",
        Command::FamilyFactor => "family-factor",
        Command::SystemCheck { .. } => "system-check",
        Command::FixedToCycle(_) => "fixed-to-cycle",
        Command::CycleToFixed(_) => "cycle-to-fixed",
        Command::Factor { .. } => "factor",
    }
}

fn cycle_from_points(d: u32, x1: &Integer, x2: &Integer, z: &Integer) -> Result<CycleCertificate> {
    if d < 2 {
        return Err(Error::InvalidInput("degree must be at least 2".into()));
    }
    if z.sign() != num_bigint::Sign::Plus {
        return Err(Error::InvalidInput("Z must be positive".into()));
    }
    let c_num = x2 * Pow::pow(z, d - 1) - Pow::pow(x1, d);
    let c = Rational::new(c_num.clone(), Pow::pow(z, d));
    let mut xs = vec![x1.clone(), x2.clone()];
    xs.sort();
    let cert = CycleCertificate { d, z: z.clone(), xs, c_num, c };
    cert.verify()
        .map_err(|_| Error::InvalidInput(format!("{x1}/{z} -> {x2}/{z} is not a two-cycle of any x^{d} + c")))?;
    Ok(cert)
}

fn execute(cli: &Cli, ctx: &mut Ctx) -> Result<()> {
    let workers = Workers::new(cli.threads);
    let d = || need(&cli.d, "d");
    let c = || need(&cli.c, "c");
    let bound = || need(&cli.bound, "bound");
    match &cli.command {
        Command::Orbit { x } => {
            let (d, c) = (d()?, c()?);
            ctx.param("d", d);
            ctx.param("c", &c);
            ctx.param("x", x);
            let map = PowerMap::new(d, c)?;
            let report = dynamics::orbit_classify(&map, x);
            ctx.out.push(Payload::Orbit(OrbitCert::from_core(&map, &report)));
        }
        Command::Dynatomic { n } => {
            let d = d()?;
            ctx.param("d", d);
            ctx.param("n", n);
            ctx.out.push(Payload::Polynomial(PolynomialCert::dynatomic(d, *n)?));
        }
        Command::TraceResultant => {
            let d = d()?;
            ctx.param("d", d);
            ctx.out.push(Payload::Polynomial(PolynomialCert::trace_resultant(d)?));
        }
        Command::Search2Cycles => {
            let (d, b) = (d()?, bound()?);
            ctx.param("d", d);
            ctx.param("bound", b);
            for cert in parallel::two_cycle_search(&workers, d, b)? {
                ctx.out.push(Payload::Cycle(CycleCert::from_core(&cert)));
            }
        }
        Command::SearchPreper => {
            let (d, c) = (d()?, c()?);
            ctx.param("d", d);
            ctx.param("c", &c);
            let graph = search::preperiodic_points(&PowerMap::new(d, c.clone())?);
            for node in &graph.nodes {
                ctx.out.push(Payload::PreperNode(PreperNodeCert::from_core(d, &c, &graph.nodes, node)));
            }
        }
        Command::SearchFixed => {
            let (d, b) = (d()?, bound()?);
            ctx.param("d", d);
            ctx.param("bound", b);
            for p in parallel::fixed_point_search(&workers, d, b)? {
                ctx.out.push(Payload::FixedPair(FixedPairCert::from_core(&p)));
            }
        }
        Command::SearchType12 => {
            let (d, b) = (d()?, bound()?);
            ctx.param("d", d);
            ctx.param("bound", b);
            for s in parallel::type12_search(&workers, d, b)? {
                ctx.out.push(Payload::Type12(Type12Cert::from_core(d, &s)));
            }
        }
        Command::Sweep { degrees, z_max, height, extra_c } => {
            let degrees = if degrees.is_empty() { vec![d()?] } else { degrees.clone() };
            let joined = |v: &[String]| v.join(",");
            ctx.param("degrees", joined(&degrees.iter().map(u32::to_string).collect::<Vec<_>>()));
            ctx.param("z_max", z_max);
            ctx.param("height", height);
            ctx.param("extra_c", joined(&extra_c.iter().map(Rational::to_string).collect::<Vec<_>>()));
            for row in parallel::sweep(&workers, &degrees, *z_max, *height, extra_c)? {
                ctx.out.push(Payload::SweepRow(SweepRowCert::from_core(&row)));
            }
        }
        Command::FcDecompose(args) => {
            let d = d()?;
            ctx.param("d", d);
            let cycles = match (&args.x1, &args.x2, &args.z) {
                (Some(x1), Some(x2), Some(z)) => {
                    ctx.param("x1", x1);
                    ctx.param("x2", x2);
                    ctx.param("z", z);
                    vec![cycle_from_points(d, x1, x2, z)?]
                }
                _ => {
                    let b = bound()?;
                    ctx.param("bound", b);
                    parallel::two_cycle_search(&workers, d, b)?
                }
            };
            for cert in &cycles {
                let dec = fermat_catalan::decompose_two_cycle(cert)?;
                ctx.out.push(Payload::Decomposition(DecompositionCert::from_core(&dec)));
            }
        }
        Command::FcSearch { k, delta } => {
            let b = bound()?;
            ctx.param("k", k);
            ctx.param("delta", delta);
            ctx.param("bound", b);
            for s in parallel::signature_search(&workers, *k, *delta, b)? {
                ctx.out.push(Payload::Signature(SignatureCert::from_core(*k, *delta, &s)));
            }
        }
        Command::FcCheck { k } => {
            ctx.param("k", k);
            let v = fermat_catalan::nonexistence_check(*k);
            ctx.out.push(Payload::Nonexistence(NonexistenceCert::from_core(*k, v)));
        }
        Command::AbcBound { epsilon, k, base, w } => {
            ctx.param("epsilon", epsilon);
            ctx.param("K", k);
            ctx.param("base", base);
            ctx.out.push(Payload::Bound(BoundCert::degree_bound(*epsilon, *k, *base)?));
            if let Some(d) = cli.d {
                ctx.param("d", d);
                ctx.out.push(Payload::Bound(BoundCert::fixedpoint_w_bound(*epsilon, *k, d)?));
                if let Some(w) = w {
                    ctx.param("w", w);
                    ctx.out.push(Payload::Bound(BoundCert::fixedpoint_sides(*epsilon, *k, d, *w)?));
                }
            } else if w.is_some() {
                return Err(Error::InvalidInput("--w needs --d".into()));
            }
        }
        Command::AbcTriple { a, b, sum } => {
            ctx.param("a", a);
            ctx.param("b", b);
            ctx.param("c", sum);
            let t = abc::validate_triple(a.clone(), b.clone(), sum.clone())?;
            ctx.out.push(Payload::AbcTriple(AbcTripleCert::from_core(&t)?));
        }
        Command::CurveQuartic => {
            let b = bound()?;
            ctx.param("bound", b);
            for p in parallel::quartic_points(&workers, b)? {
                ctx.out.push(Payload::CurvePoint(CurvePointCert::quartic(&p)));
            }
        }
        Command::CurveHyper => {
            let b = bound()?;
            ctx.param("bound", b);
            for p in parallel::hyperelliptic_points(&workers, b)? {
                ctx.out.push(Payload::CurvePoint(CurvePointCert::hyperelliptic(&p)));
            }
        }
        Command::Family { t, y } => {
            ctx.param("t", t);
            ctx.param("y", y);
            let f = curves::family_generator(t, y)?;
            ctx.out.push(Payload::Family(FamilyCert::from_core(&f)));
        }
        Command::FamilyFactor => {
            ctx.out.push(Payload::Polynomial(PolynomialCert::family_cofactor()?));
        }
        Command::SystemCheck { x1, x2, x3, z } => {
            let d = d()?;
            for (k, v) in [("x1", x1), ("x2", x2), ("x3", x3), ("z", z)] {
                ctx.param(k, v);
            }
            ctx.param("d", d);
            ctx.out.push(Payload::SystemCheck(SystemCheckCert::compute(x1, x2, x3, z, d)));
        }
        Command::FixedToCycle(p) | Command::CycleToFixed(p) => {
            let d = d()?;
            ctx.param("d", d);
            ctx.param("x1", &p.x1);
            ctx.param("x2", &p.x2);
            let dir = ctx.subcommand.clone();
            ctx.out.push(Payload::PointPair(PointPairCert::compute(&dir, d, &p.x1, &p.x2)?));
        }
        Command::Factor { n } => {
            ctx.param("n", n);
            ctx.out.push(Payload::Factorization(FactorizationCert::compute(n)?));
        }
    }
    Ok(())
}

/// Runs a search command and returns its certificates.
pub fn certificates(cli: &Cli) -> Result<Vec<Certificate>> {
    let mut ctx = Ctx {
        subcommand: subcommand_name(&cli.command).to_string(),
        params: BTreeMap::new(),
        out: Vec::new(),
    };
    execute(cli, &mut ctx)?;
    for p in &ctx.out {
        p.verify()?;
    }
    let provenance = Provenance {
        subcommand: ctx.subcommand,
        parameters: ctx.params,
        version: VERSION.to_string(),
    };
    Ok(ctx
        .out
        .into_iter()
        .map(|payload| Certificate { payload, provenance: provenance.clone() })
        .collect())
}

/// Parses `args` (including the program name), runs, and writes results to
/// `out` and diagnostics to `err`. Returns the process exit status.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match certificates(&cli) {
        Ok(certs) => {
            for c in &certs {
                let line = if cli.json { c.to_json() } else { c.human() };
                if writeln!(out, "{line}").is_err() {
                    return EXIT_INTERNAL;
                }
            }
            let _ = writeln!(err, "{}: {} certificate(s)", subcommand_name(&cli.command), certs.len());
            EXIT_OK
        }
        Err(Error::InvalidInput(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID
        }
        Err(e) => {
            let _ = writeln!(err, "internal assertion failed: {e}");
            EXIT_INTERNAL
        }
    }
}
