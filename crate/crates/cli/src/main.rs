use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cyclomds::badprimes::{compute_bad_primes, good_primes, BadPrimeReport, Budgets};
use cyclomds::codecheck::{analyze_with_report, is_mds, CodeReport};
use cyclomds::cycmatrix::{build_generator_matrix, chebotarev_check, enumerate_minors, lift_matrix, CodeSpec};
use cyclomds::ffield::build_field;
use cyclomds::numth::FactorBudget;
use cyclomds::tables::{reproduce, TableId, TableOutcome, T3_CODEWORD_BUDGET};
use cyclomds::Error;

mod jset;

const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_MISMATCH: u8 = 4;
const EXIT_INTERNAL: u8 = 5;
const EXIT_BAD_PRIME: u8 = 6;
const EXIT_NO_MDS: u8 = 7;

/// Certificates are listed individually only up to this count without --full.
const CERTIFICATE_LIMIT: usize = 40;

#[derive(Parser, Debug)]
#[command(name = "cyclomds", version, about = "Cyclic MDS codes from roots of unity reduced modulo good primes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: GlobalOpts,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    /// Maximum number of maximal minors to enumerate.
    #[arg(long, default_value_t = 1_000_000, global = true, value_parser = positive_u128)]
    minor_budget: u128,
    /// Pollard rho iterations per factorization.
    #[arg(long, default_value_t = 1 << 24, global = true, value_parser = positive_u64)]
    factor_budget: u64,
    /// Codewords enumerated by the brute-force distance check
    /// [default: 10000000, 30000000 for `reproduce`].
    #[arg(long, global = true, value_parser = positive_u128)]
    codeword_budget: Option<u128>,
    /// Largest prime accepted by `chebotarev`.
    #[arg(long, default_value_t = 11, global = true)]
    chebotarev_max: u32,
    /// Seed for randomized choices.
    #[arg(long, default_value_t = 20240601, global = true)]
    seed: u64,
    /// List every minor certificate.
    #[arg(long, global = true)]
    full: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Args, Debug)]
struct SpecArgs {
    /// Code length.
    #[arg(long)]
    n: u32,
    /// Defining set, e.g. `0,1,3` or `0..3,5`.
    #[arg(long, allow_hyphen_values = true)]
    j: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bad primes of (n, J) with a certificate per maximal minor.
    Badprimes(SpecArgs),
    /// Reduce (n, J) at a prime and classify the resulting code.
    Analyze {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, conflicts_with = "auto", required_unless_present = "auto")]
        p: Option<u64>,
        /// Prime limit and number of good primes to analyze.
        #[arg(long, num_args = 2, value_names = ["LIMIT", "COUNT"])]
        auto: Option<Vec<u64>>,
    },
    /// Recompute a reference table and compare it with the expected values.
    Reproduce {
        #[arg(value_parser = parse_table)]
        table: TableId,
    },
    /// Check every square submatrix of the n×n Fourier matrix for prime n.
    Chebotarev { n: u32 },
    /// Reduce (n, J) at a good prime with a seeded choice of root, lift the
    /// reduced matrix back and confirm its minors are nonzero in Z[ζ_n].
    Lift {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        p: u64,
    },
}

fn positive_u128(s: &str) -> Result<u128, String> {
    match s.parse::<u128>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_u64(s: &str) -> Result<u64, String> {
    positive_u128(s).and_then(|v| u64::try_from(v).map_err(|e| e.to_string()))
}

fn parse_table(s: &str) -> Result<TableId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure carrying its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::MinorBudgetExceeded { .. }
            | Error::BudgetExceeded(_)
            | Error::FactorizationIncomplete { .. }
            | Error::PrimalityBoundExceeded(_) => EXIT_BUDGET,
            Error::BadPrime { .. } | Error::Ramified { .. } => EXIT_BAD_PRIME,
            Error::ZeroMinorPresent => EXIT_NO_MDS,
            Error::InternalConsistency(_) => EXIT_INTERNAL,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

struct Output {
    format: Format,
    human: String,
    json: Value,
}

impl Output {
    fn emit(&self) {
        let mut out = std::io::stdout().lock();
        let _ = match self.format {
            Format::Human => write!(out, "{}", self.human),
            Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&self.json).expect("serializable")),
        };
    }
}

fn budgets(opts: &GlobalOpts, codeword_default: u128) -> Budgets {
    Budgets {
        minors: opts.minor_budget,
        factor: FactorBudget {
            rho_iterations: opts.factor_budget,
        },
        codewords: opts.codeword_budget.unwrap_or(codeword_default),
        chebotarev_max_n: opts.chebotarev_max,
    }
}

fn parse_spec(args: &SpecArgs) -> Result<CodeSpec, Failure> {
    let (j, warnings) = jset::parse(&args.j, args.n).map_err(|message| Failure {
        code: EXIT_USAGE,
        message,
    })?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(CodeSpec::new(args.n, j)?)
}

fn fmt_set<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    let v: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", v.join(", "))
}

fn certificates_json(report: &BadPrimeReport, full: bool) -> (Value, bool) {
    let elide = !full && report.certificates.len() > CERTIFICATE_LIMIT;
    if elide {
        (Value::Null, true)
    } else {
        (serde_json::to_value(&report.certificates).expect("serializable"), false)
    }
}

fn cmd_badprimes(args: &SpecArgs, opts: &GlobalOpts) -> Result<Output, Failure> {
    let spec = parse_spec(args)?;
    let report = compute_bad_primes(&spec, &budgets(opts, 10_000_000))?;
    let (certs, elided) = certificates_json(&report, opts.full);

    let mut human = format!("spec: {spec}\nminors: {}\n", report.certificates.len());
    human += &format!("no vanishing minor: {}\n", if report.has_zero_minor { "No" } else { "Yes" });
    if report.has_zero_minor {
        let shown: Vec<String> = report.zero_minor_subsets.iter().take(10).map(|s| fmt_set(s.iter())).collect();
        human += &format!(
            "vanishing minors: {} (first: {})\n",
            report.zero_minor_subsets.len(),
            shown.join(" ")
        );
    }
    human += &format!("P_bad: {}\n", fmt_set(report.bad_primes.iter()));
    if elided {
        human += &format!("certificates: {} (use --full to list)\n", report.certificates.len());
    } else {
        for c in &report.certificates {
            let factors = match &c.factors {
                Some(f) => f
                    .factors
                    .iter()
                    .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
                    .collect::<Vec<_>>()
                    .join(" * "),
                None => "-".into(),
            };
            human += &format!(
                "  {} det = {}  |N| = {}  = {}\n",
                fmt_set(c.subset.iter()),
                c.det,
                c.abs_norm,
                if c.abs_norm == 1u32.into() { "1".into() } else { factors }
            );
        }
    }

    let json = json!({
        "command": "badprimes",
        "spec": spec,
        "verdicts": {
            "has_zero_minor": report.has_zero_minor,
            "zero_minor_subsets": report.zero_minor_subsets,
            "bad_primes": report.bad_primes.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        },
        "certificate_count": report.certificates.len(),
        "certificates_elided": elided,
        "certificates": certs,
    });
    Ok(Output {
        format: opts.format,
        human,
        json,
    })
}

fn report_human(r: &CodeReport) -> String {
    let f = &r.field;
    let mut s = format!("spec: {}\n", r.spec);
    s += &format!(
        "field: F_{} = F_{}^{}  modulus {:?}  zeta' {:?}\n",
        f.q, f.p, f.f, f.modulus, f.zeta_prime
    );
    s += &format!("P_bad: {}\n", fmt_set(r.bad_primes.iter()));
    s += &format!("MDS: {}  cyclic: {}\n", r.is_mds, r.is_cyclic);
    match r.min_distance {
        Some(d) => s += &format!("minimum distance: {d} (codeword enumeration)\n"),
        None => s += "minimum distance: skipped, codeword budget exceeded\n",
    }
    s += &format!(
        "Schur square dim: {}  |J+J mod n|: {}  arithmetic progression: {}\n",
        r.schur_dim, r.sumset_mod_size, r.ap_flag
    );
    s += &format!(
        "classification: {} (tested {:?}, dim {}, Schur dim {})\n",
        r.classification, r.verdict.side, r.verdict.tested_dim, r.verdict.tested_schur_dim
    );
    s
}

fn cmd_analyze(args: &SpecArgs, p: Option<u64>, auto: Option<&[u64]>, opts: &GlobalOpts) -> Result<Output, Failure> {
    let spec = parse_spec(args)?;
    let b = budgets(opts, 10_000_000);
    let report = compute_bad_primes(&spec, &b)?;
    let primes = match (p, auto) {
        (Some(p), _) => vec![p],
        (None, Some([limit, count])) => {
            let found: Vec<u64> = good_primes(&report, *limit, false)?.into_iter().take(*count as usize).collect();
            if found.is_empty() {
                return Err(Failure {
                    code: EXIT_BAD_PRIME,
                    message: format!("no good prime up to {limit}"),
                });
            }
            found
        }
        _ => {
            return Err(Failure {
                code: EXIT_USAGE,
                message: "give --p or --auto LIMIT COUNT".into(),
            })
        }
    };
    let reports = primes
        .iter()
        .map(|&p| analyze_with_report(&report, p, &b))
        .collect::<Result<Vec<_>, _>>()?;
    let human = reports.iter().map(report_human).collect::<Vec<_>>().join("\n");
    let json = json!({
        "command": "analyze",
        "spec": spec,
        "reports": reports,
    });
    Ok(Output {
        format: opts.format,
        human,
        json,
    })
}

fn table_human(t: &TableOutcome) -> String {
    let mut s = format!("{}: {}\n", t.table, t.title);
    for row in &t.rows {
        s += &format!("{} {}\n", if row.ok() { "MATCH   " } else { "MISMATCH" }, row.label);
        for c in &row.checks {
            let note = c.note.as_ref().map(|n| format!("  [{n}]")).unwrap_or_default();
            s += &format!(
                "    {:<32} expected {:<24} computed {}{}{}\n",
                c.name,
                c.expected,
                c.computed,
                if c.ok { "" } else { "  <-- differs" },
                note
            );
        }
    }
    let bad = t.mismatches().len();
    s += &format!("{} rows, {} mismatches\n", t.rows.len(), bad);
    s
}

fn cmd_reproduce(table: TableId, opts: &GlobalOpts) -> Result<(Output, bool), Failure> {
    let outcome = reproduce(table, &budgets(opts, T3_CODEWORD_BUDGET))?;
    let all_match = outcome.all_match();
    let rows: Vec<Value> = outcome
        .rows
        .iter()
        .map(|r| {
            json!({
                "label": r.label,
                "match": r.ok(),
                "computed": r.checks.iter().map(|c| (c.name.clone(), json!(c.computed))).collect::<serde_json::Map<_, _>>(),
                "expected": r.checks.iter().map(|c| (c.name.clone(), json!(c.expected))).collect::<serde_json::Map<_, _>>(),
                "notes": r.checks.iter().filter_map(|c| c.note.clone()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let json = json!({
        "command": "reproduce",
        "table": outcome.table,
        "title": outcome.title,
        "all_match": all_match,
        "mismatched_rows": outcome.mismatches().iter().map(|r| r.label.clone()).collect::<Vec<_>>(),
        "rows": rows,
    });
    Ok((
        Output {
            format: opts.format,
            human: table_human(&outcome),
            json,
        },
        all_match,
    ))
}

fn cmd_chebotarev(n: u32, opts: &GlobalOpts) -> Result<(Output, bool), Failure> {
    let start = std::time::Instant::now();
    let out = chebotarev_check(n, opts.chebotarev_max)?;
    let elapsed = start.elapsed().as_secs_f64();
    let human = match &out.counterexample {
        None => format!("n = {n}: all {} square submatrices are nonsingular ({elapsed:.2}s)\n", out.submatrices),
        Some((rows, cols)) => format!(
            "n = {n}: singular submatrix at rows {} cols {} after {} checks\n",
            fmt_set(rows.iter()),
            fmt_set(cols.iter()),
            out.submatrices
        ),
    };
    let json = json!({
        "command": "chebotarev",
        "n": n,
        "passed": out.passed(),
        "submatrices": out.submatrices.to_string(),
        "counterexample": out.counterexample,
        "seconds": elapsed,
    });
    let passed = out.passed();
    Ok((
        Output {
            format: opts.format,
            human,
            json,
        },
        passed,
    ))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

// splitmix64 step: a fixed, documented generator for the root choice
fn splitmix(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn cmd_lift(args: &SpecArgs, p: u64, opts: &GlobalOpts) -> Result<Output, Failure> {
    let spec = parse_spec(args)?;
    let b = budgets(opts, 10_000_000);
    let report = compute_bad_primes(&spec, &b)?;
    if report.has_zero_minor {
        return Err(Error::ZeroMinorPresent.into());
    }
    if spec.n() as u64 % p == 0 || report.contains(p) {
        return Err(Error::BadPrime { p }.into());
    }
    let n = spec.n() as u64;
    let base = build_field(p, n)?;
    let units: Vec<u64> = (1..n).filter(|&u| gcd(u, n) == 1).collect();
    let u = units[(splitmix(opts.seed) % units.len() as u64) as usize];
    let ctx = base.with_root_exponent(u)?;
    let reduced = ctx.reduce_matrix(&build_generator_matrix(&spec))?;
    let mds = is_mds(&reduced, &ctx)?;
    let lifted = lift_matrix(&reduced, &ctx)?;
    let minors = enumerate_minors(&lifted, lifted.rows(), b.minors)?;
    let nonzero = minors.iter().filter(|m| !m.det.is_zero()).count();
    // ζ′^e lifts to ζ^e whichever root was chosen
    let same_code = lifted == build_generator_matrix(&spec);
    if !mds || nonzero != minors.len() {
        return Err(Error::InternalConsistency(format!(
            "lift of an MDS reduction has {} vanishing minors",
            minors.len() - nonzero
        ))
        .into());
    }
    let human = format!(
        "spec: {spec}\nfield: F_{} with zeta' = zeta0^{u} (seed {})\nreduced code MDS over F_{}: {mds}\nlifted minors nonzero in Z[zeta_{n}]: {nonzero}/{}\nlift equals G: {same_code}\n",
        ctx.order(),
        opts.seed,
        ctx.order(),
        minors.len()
    );
    let json = json!({
        "command": "lift",
        "spec": spec,
        "field": ctx.summary(),
        "seed": opts.seed,
        "root_exponent": u,
        "reduced_is_mds": mds,
        "lifted_minors": minors.len(),
        "lifted_nonzero_minors": nonzero,
        "lift_equals_generator": same_code,
        "reduced": reduced.to_repr(&ctx),
    });
    Ok(Output {
        format: opts.format,
        human,
        json,
    })
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let opts = &cli.opts;
    let (output, ok_code) = match &cli.command {
        Command::Badprimes(args) => (cmd_badprimes(args, opts)?, 0),
        Command::Analyze { spec, p, auto } => (cmd_analyze(spec, *p, auto.as_deref(), opts)?, 0),
        Command::Reproduce { table } => {
            let (out, all_match) = cmd_reproduce(*table, opts)?;
            (out, if all_match { 0 } else { EXIT_MISMATCH })
        }
        Command::Chebotarev { n } => {
            let (out, passed) = cmd_chebotarev(*n, opts)?;
            (out, if passed { 0 } else { EXIT_INTERNAL })
        }
        Command::Lift { spec, p } => (cmd_lift(spec, *p, opts)?, 0),
    };
    output.emit();
    Ok(ok_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            if cli.opts.format == Format::Json {
                println!("{}", json!({ "error": f.message, "exit_code": f.code }));
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
