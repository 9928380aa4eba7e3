use std::ffi::OsString;
use std::fs;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use circhad_core::linalg::{random_prime, rank, system_rank, FieldKind, RowSource};
use circhad_core::oracle::{check_search_order, s_value, scan_generators, search_space, SearchReport, UNFOLDED_CAP};
use circhad_core::symmetry::{build_orbit_table, SymmetryGroup};
use circhad_core::system::{build_system, s_coefficients, Coset};
use circhad_core::walsh::{walsh_transform, GroupElement, SignVector};
use circhad_core::witness::{
    build_tridiagonal, find_witness, symmetric_certificate, tridiagonal_rank, PartialSum, Verifier, VerificationReport,
    WitnessMode, WitnessOptions, DEFAULT_PIVOT_SEED,
};
use circhad_core::{Rational, CONVENTION_TAG, DEFAULT_ORDER_CAP, MAX_ORDER};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::cert;
use crate::error::{CliError, CliResult, EXIT_USAGE};
use crate::mtx::{read_mtx, write_system, FileRows};
use crate::report::{fingerprint, orbit_table_text, sha256_hex, OracleReport};

pub const CAP_ENV: &str = "CIRCHAD_SYSTEM_CAP";

/// Exit code when a witness search finds none.
pub const EXIT_NO_WITNESS: i32 = 2;
/// Exit code when verification or a check fails.
pub const EXIT_FAILED: i32 = 1;

/// Fixed block count for parallel scans; independent of the thread count.
const SCAN_BLOCKS: u64 = 256;

#[derive(Debug, Parser)]
#[command(name = "circhad", version, about = "Walsh-Fourier linear systems and non-existence certificates for circulant Hadamard matrices")]
pub struct Cli {
    /// Worker threads (default: available parallelism). Never changes output.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest order for which systems and orbit tables are built.
    #[arg(long, global = true, env = CAP_ENV)]
    pub cap: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CosetArg {
    Even,
    Odd,
    Both,
}

impl From<CosetArg> for Coset {
    fn from(c: CosetArg) -> Coset {
        match c {
            CosetArg::Even => Coset::Even,
            CosetArg::Odd => Coset::Odd,
            CosetArg::Both => Coset::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Full,
    OrbitReduced,
    Symmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Rational,
    Prime,
}

#[derive(Debug, Args)]
pub struct OrderArg {
    /// Matrix order n.
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exhaustive search for circulant Hadamard generators.
    Oracle {
        #[command(flatten)]
        order: OrderArg,
        /// Fix u_1 = 1 and add negations afterwards.
        #[arg(long)]
        fold: bool,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Turyn admissibility of an order.
    Turyn {
        #[arg(long)]
        n: u64,
    },
    /// Export the pair-shift system as a MatrixMarket file.
    System {
        #[command(flatten)]
        order: OrderArg,
        #[arg(long, value_enum, default_value = "both")]
        coset: CosetArg,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact or modular rank of a system or of a MatrixMarket file.
    Rank {
        #[arg(long, required_unless_present = "input", conflicts_with = "input")]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "both")]
        coset: CosetArg,
        /// Read the matrix from a MatrixMarket file instead.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "rational")]
        field: FieldArg,
        /// Seed for the random prime.
        #[arg(long, default_value_t = DEFAULT_PIVOT_SEED)]
        seed: u64,
    },
    /// Search for a certificate of non-existence.
    Witness {
        #[command(flatten)]
        order: OrderArg,
        #[arg(long, value_enum, default_value = "full")]
        mode: ModeArg,
        /// Coset of the rows used (full and orbit-reduced modes).
        #[arg(long, value_enum, default_value = "even")]
        coset: CosetArg,
        /// Seed for the modular pivot pre-pass.
        #[arg(long, default_value_t = DEFAULT_PIVOT_SEED)]
        seed: u64,
        /// Write the certificate here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-derive a certificate from freshly generated rows.
    Verify {
        file: PathBuf,
        /// Take the rows from this MatrixMarket export instead.
        #[arg(long)]
        system: Option<PathBuf>,
    },
    /// Aggregated single-weight system: entries, rank and symmetric witness.
    Tridiag {
        #[command(flatten)]
        order: OrderArg,
    },
    /// Walsh coefficients of the autocorrelation energy.
    Scoeffs {
        #[command(flatten)]
        order: OrderArg,
    },
    /// Cross-check the transformed coefficients against direct evaluation.
    WhtCheck {
        #[command(flatten)]
        order: OrderArg,
    },
    /// Orbit representatives of Z_2^n under shifts and multipliers.
    Orbits {
        #[command(flatten)]
        order: OrderArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    cap: usize,
    pool: rayon::ThreadPool,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let cap = cli.cap.unwrap_or(DEFAULT_ORDER_CAP);
    if cap > MAX_ORDER {
        return Err(CliError::Usage(format!("cap {cap} exceeds the supported maximum {MAX_ORDER}")));
    }
    let threads = match cli.threads {
        Some(0) => return Err(CliError::Usage("--threads must be at least 1".into())),
        Some(t) => t,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Cap(format!("thread pool: {e}")))?;
    let mut ctx = Ctx { out, err, cap, pool };
    let code = dispatch(cli.command, &mut ctx)?;
    ctx.out.flush()?;
    Ok(code)
}

fn dispatch(command: Command, ctx: &mut Ctx<'_>) -> CliResult<i32> {
    match command {
        Command::Oracle { order, fold, out } => oracle(ctx, order.n, fold, out.as_deref()),
        Command::Turyn { n } => turyn(ctx, n),
        Command::System { order, coset, out } => system(ctx, order.n, coset.into(), out.as_deref()),
        Command::Rank { n, coset, input, field, seed } => rank_cmd(ctx, n, coset.into(), input.as_deref(), field, seed),
        Command::Witness { order, mode, coset, seed, out } => witness(ctx, order.n, mode, coset.into(), seed, out.as_deref()),
        Command::Verify { file, system } => verify(ctx, &file, system.as_deref()),
        Command::Tridiag { order } => tridiag(ctx, order.n),
        Command::Scoeffs { order } => scoeffs(ctx, order.n),
        Command::WhtCheck { order } => wht_check(ctx, order.n),
        Command::Orbits { order, out } => orbits(ctx, order.n, out.as_deref()),
    }
}

fn preamble(ctx: &mut Ctx<'_>, fp: &str) -> CliResult<()> {
    writeln!(ctx.out, "convention: {CONVENTION_TAG}")?;
    writeln!(ctx.out, "fingerprint: {fp}")?;
    Ok(())
}

/// Integers print without a denominator.
fn show(q: &Rational) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn read_file(path: &Path) -> CliResult<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

/// Parallel exhaustive search, merged independently of scheduling.
pub fn parallel_search(n: usize, fold: bool) -> CliResult<SearchReport> {
    check_search_order(n, fold)?;
    let space = search_space(n, fold);
    let step = space.div_ceil(SCAN_BLOCKS).max(1);
    let parts: Vec<_> = (0..space.div_ceil(step))
        .into_par_iter()
        .map(|b| scan_generators(n, fold, b * step..((b + 1) * step).min(space)))
        .collect();
    Ok(SearchReport::from_parts(n, fold, parts))
}

fn oracle(ctx: &mut Ctx<'_>, n: usize, fold: bool, out: Option<&Path>) -> CliResult<i32> {
    let fp = fingerprint("oracle", &[("n", n.to_string()), ("fold", fold.to_string())]);
    let start = Instant::now();
    let report = ctx.pool.install(|| parallel_search(n, fold))?;
    writeln!(ctx.err, "elapsed: {:.3?}", start.elapsed())?;
    preamble(ctx, &fp)?;
    writeln!(ctx.out, "n: {n}")?;
    writeln!(ctx.out, "folded: {}", yes_no(fold))?;
    writeln!(ctx.out, "searched: {}", search_space(n, fold))?;
    writeln!(ctx.out, "count: {}", report.count)?;
    for g in &report.generators {
        writeln!(ctx.out, "generator: {g}")?;
    }
    let json = OracleReport::new(&report, Some(fp));
    writeln!(ctx.out, "turyn: {} ({})", if json.turyn.admissible { "admissible" } else { "not admissible" }, json.turyn.reason)?;
    if let Some(path) = out {
        write_file(path, json.render().as_bytes())?;
        writeln!(ctx.out, "report: {}", path.display())?;
    }
    Ok(0)
}

fn turyn(ctx: &mut Ctx<'_>, n: u64) -> CliResult<i32> {
    let fp = fingerprint("turyn", &[("n", n.to_string())]);
    preamble(ctx, &fp)?;
    let t = circhad_core::oracle::turyn_admissible(n);
    writeln!(ctx.out, "n: {n}")?;
    writeln!(ctx.out, "admissible: {}", yes_no(t.admissible))?;
    writeln!(ctx.out, "reason: {}", t.reason)?;
    Ok(0)
}

fn system(ctx: &mut Ctx<'_>, n: usize, coset: Coset, out: Option<&Path>) -> CliResult<i32> {
    let fp = fingerprint("system", &[("n", n.to_string()), ("coset", coset.to_string())]);
    let sys = build_system(n, coset, ctx.cap)?;
    let extra = [("fingerprint", fp.clone())];
    match out {
        None => write_system(&sys, &extra, &ctx.pool, ctx.out)?,
        Some(path) => {
            let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
            let mut w = BufWriter::new(file);
            write_system(&sys, &extra, &ctx.pool, &mut w).map_err(|e| match e {
                CliError::Output(io) => CliError::io(path, io),
                other => other,
            })?;
            w.flush().map_err(|e| CliError::io(path, e))?;
            preamble(ctx, &fp)?;
            writeln!(ctx.out, "n: {n}")?;
            writeln!(ctx.out, "coset: {coset}")?;
            writeln!(ctx.out, "rows: {}", sys.row_count())?;
            writeln!(ctx.out, "columns: {}", sys.column_count())?;
            writeln!(ctx.out, "entries: {}", crate::mtx::system_nnz(&sys))?;
            writeln!(ctx.out, "written: {}", path.display())?;
        }
    }
    Ok(0)
}

fn field_kind(field: FieldArg, seed: u64) -> FieldKind {
    match field {
        FieldArg::Rational => FieldKind::Rational,
        FieldArg::Prime => FieldKind::Prime(random_prime(seed)),
    }
}

fn rank_cmd(
    ctx: &mut Ctx<'_>,
    n: Option<usize>,
    coset: Coset,
    input: Option<&Path>,
    field: FieldArg,
    seed: u64,
) -> CliResult<i32> {
    let kind = field_kind(field, seed);
    let seed_field = match field {
        FieldArg::Rational => ("field", "rational".to_string()),
        FieldArg::Prime => ("field", format!("prime/{seed}")),
    };
    let start = Instant::now();
    let (fp, result, nrows, ncols, unknowns) = match (n, input) {
        (_, Some(path)) => {
            let bytes = read_file(path)?;
            let fp = fingerprint("rank", &[("input", sha256_hex(&bytes)), seed_field]);
            let file = read_mtx(BufReader::new(bytes.as_slice()))?;
            let rows = FileRows::new(&file);
            let r = rank(&rows, kind)?;
            (fp, r, rows.nrows() as u64, rows.ncols(), file.used_columns() as u64)
        }
        (Some(n), None) => {
            let fp = fingerprint("rank", &[("n", n.to_string()), ("coset", coset.to_string()), seed_field]);
            let sys = build_system(n, coset, ctx.cap)?;
            let r = system_rank(&sys, kind, ctx.cap)?;
            (fp, r, sys.row_count(), sys.column_count(), sys.variable_count())
        }
        (None, None) => return Err(CliError::Usage("rank needs --n or --input".into())),
    };
    writeln!(ctx.err, "elapsed: {:.3?}", start.elapsed())?;
    preamble(ctx, &fp)?;
    if let Some(n) = n {
        writeln!(ctx.out, "n: {n}")?;
        writeln!(ctx.out, "coset: {coset}")?;
    }
    writeln!(ctx.out, "field: {}", result.field)?;
    writeln!(ctx.out, "rows: {nrows}")?;
    writeln!(ctx.out, "columns: {ncols}")?;
    writeln!(ctx.out, "unknowns: {unknowns}")?;
    writeln!(ctx.out, "rank: {}", result.rank)?;
    writeln!(ctx.out, "deficient: {}", yes_no((result.rank as u64) < unknowns))?;
    writeln!(ctx.out, "rows consumed: {}", result.stats.rows_seen)?;
    if let FieldKind::Prime(_) = result.field {
        writeln!(ctx.out, "note: a modular rank is a lower bound for the rational rank")?;
    }
    Ok(0)
}

fn witness(
    ctx: &mut Ctx<'_>,
    n: usize,
    mode: ModeArg,
    coset: Coset,
    seed: u64,
    out: Option<&Path>,
) -> CliResult<i32> {
    let mode_name = match mode {
        ModeArg::Full => "full",
        ModeArg::OrbitReduced => "orbit-reduced",
        ModeArg::Symmetric => "symmetric",
    };
    let mut fields = vec![("n", n.to_string()), ("mode", mode_name.to_string())];
    if mode != ModeArg::Symmetric {
        fields.push(("coset", coset.to_string()));
        fields.push(("seed", seed.to_string()));
    }
    let fp = fingerprint("witness", &fields);
    let start = Instant::now();
    let found = match mode {
        ModeArg::Symmetric => symmetric_certificate(n)?,
        ModeArg::Full | ModeArg::OrbitReduced => {
            let m = if mode == ModeArg::Full { WitnessMode::Full } else { WitnessMode::OrbitReduced };
            let opts = WitnessOptions { coset, pivot_seed: seed, cap: ctx.cap };
            find_witness(n, m, &opts)?
        }
    };
    writeln!(ctx.err, "elapsed: {:.3?}", start.elapsed())?;
    preamble(ctx, &fp)?;
    writeln!(ctx.out, "n: {n}")?;
    writeln!(ctx.out, "mode: {mode_name}")?;
    let Some(cert) = found else {
        writeln!(ctx.out, "witness: none")?;
        let why = no_witness_reason(n, mode, coset, &ctx.pool)?;
        writeln!(ctx.out, "reason: {why}")?;
        writeln!(ctx.err, "no witness at n = {n}: {why}")?;
        return Ok(EXIT_NO_WITNESS);
    };
    writeln!(ctx.out, "witness: found")?;
    writeln!(ctx.out, "coset: {}", cert.coset)?;
    writeln!(ctx.out, "weights: {}", cert.weight_count())?;
    if let Some(p) = &cert.provenance {
        writeln!(ctx.out, "prime: {}", p.prime)?;
        writeln!(ctx.out, "full replay: {}", yes_no(p.full_replay))?;
    }
    let text = cert::render(&cert, Some(fp));
    match out {
        Some(path) => {
            write_file(path, text.as_bytes())?;
            writeln!(ctx.out, "written: {}", path.display())?;
        }
        None => writeln!(ctx.out, "certificate not written (use --out FILE)")?,
    }
    Ok(0)
}

fn no_witness_reason(n: usize, mode: ModeArg, coset: Coset, pool: &rayon::ThreadPool) -> CliResult<String> {
    if mode == ModeArg::Symmetric {
        let t = build_tridiagonal(n)?;
        let r = tridiagonal_rank(&t);
        return Ok(format!(
            "M(0) is outside the span of the aggregated single-weight expressions (rank {r} of {}); \
             this alone does not decide existence at order {n}",
            t.size()
        ));
    }
    if !coset.contains(0) {
        return Ok(format!("the {coset} coset does not contain the target M(0)"));
    }
    if n <= UNFOLDED_CAP {
        let report = pool.install(|| parallel_search(n, true))?;
        if let Some(g) = report.generators.first() {
            return Ok(format!(
                "M(0) is not in the row space; a circulant Hadamard matrix of order {n} exists, generated by {g} ({} generators in total)",
                report.count
            ));
        }
    }
    Ok("M(0) is not in the row space of the system".to_string())
}

/// Block partition for verification; fixed so the reduction tree does not
/// depend on the thread count.
fn verify_blocks(positions: u64) -> Vec<std::ops::Range<u64>> {
    let step = positions.div_ceil(SCAN_BLOCKS).max(1);
    (0..positions.div_ceil(step)).map(|b| b * step..((b + 1) * step).min(positions)).collect()
}

/// Accumulates blocks in parallel and merges them pairwise in block order.
pub fn parallel_verify(verifier: &Verifier<'_>) -> VerificationReport {
    let parts: Vec<PartialSum> = verify_blocks(verifier.positions())
        .into_par_iter()
        .map(|r| verifier.accumulate(r))
        .collect();
    let total = tree_merge(parts).expect("at least one block");
    verifier.finish(total)
}

fn tree_merge(mut parts: Vec<PartialSum>) -> Option<PartialSum> {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => a.merge(b),
                None => a,
            });
        }
        parts = next;
    }
    parts.pop()
}

fn verify(ctx: &mut Ctx<'_>, path: &Path, system_file: Option<&Path>) -> CliResult<i32> {
    let bytes = read_file(path)?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| CliError::Data(format!("{}: not UTF-8", path.display())))?;
    let cert = cert::parse(&text)?;
    let mut fields = vec![("certificate", sha256_hex(&bytes))];
    let sys_bytes = match system_file {
        Some(p) => {
            let b = read_file(p)?;
            fields.push(("system", sha256_hex(&b)));
            Some(b)
        }
        None => None,
    };
    let fp = fingerprint("verify", &fields);
    let verifier = Verifier::new(&cert, ctx.cap).map_err(|e| match e {
        circhad_core::Error::OrderTooLarge { .. } => CliError::from(e),
        other => CliError::Data(other.to_string()),
    })?;
    let start = Instant::now();
    let report = match sys_bytes {
        None => ctx.pool.install(|| parallel_verify(&verifier)),
        Some(b) => verify_against_file(&verifier, &cert, &b)?,
    };
    writeln!(ctx.err, "elapsed: {:.3?}", start.elapsed())?;
    preamble(ctx, &fp)?;
    writeln!(ctx.out, "n: {}", cert.n)?;
    writeln!(ctx.out, "kind: {}", cert.kind)?;
    writeln!(ctx.out, "coset: {}", cert.coset)?;
    writeln!(ctx.out, "weights: {}", cert.weight_count())?;
    writeln!(ctx.out, "rows: {}", if system_file.is_some() { "system file" } else { "regenerated" })?;
    writeln!(ctx.out, "rows used: {}", report.rows_used)?;
    writeln!(ctx.out, "columns checked: {}", report.columns_checked)?;
    writeln!(ctx.out, "coefficient of M(0): {}", show(&report.value_at_zero))?;
    writeln!(ctx.out, "residual columns: {}", report.residual_count)?;
    for (g, v) in &report.residuals {
        writeln!(ctx.out, "residual M({g}) = {}", show(v))?;
    }
    if report.residual_count > report.residuals.len() {
        writeln!(ctx.out, "... {} more", report.residual_count - report.residuals.len())?;
    }
    writeln!(ctx.out, "result: {}", if report.passed { "PASS" } else { "FAIL" })?;
    Ok(if report.passed { 0 } else { EXIT_FAILED })
}

/// Combines rows read from a system export with the certificate's lifted
/// weights.
fn verify_against_file(
    verifier: &Verifier<'_>,
    cert: &circhad_core::witness::WitnessCertificate,
    bytes: &[u8],
) -> CliResult<VerificationReport> {
    let file = read_mtx(BufReader::new(bytes))?;
    let (Some(n), Some(coset)) = (file.n(), file.coset()) else {
        return Err(CliError::Data("system file lacks the n and coset comments".into()));
    };
    if n != cert.n {
        return Err(CliError::Data(format!("system file has n = {n}, certificate has n = {}", cert.n)));
    }
    if coset != Coset::Both && coset != cert.coset {
        return Err(CliError::Data(format!("system file holds the {coset} coset, certificate uses {}", cert.coset)));
    }
    let sys = build_system(n, coset, MAX_ORDER)?;
    if file.matrix.nrows() as u64 != sys.row_count() || file.matrix.ncols() != sys.column_count() {
        return Err(CliError::Data("system file dimensions do not match its n and coset".into()));
    }
    let mut acc = vec![Rational::zero(); file.matrix.ncols()];
    let mut used = 0u64;
    for (i, row) in file.matrix.iter_rows().enumerate() {
        let (g, d) = sys.row_key(i as u64);
        if let Some(c) = verifier.weight_of(g, d) {
            used += 1;
            for (k, v) in row {
                acc[*k] += c * v;
            }
        }
    }
    let value_at_zero = acc[0].clone();
    acc[0] -= Rational::from_integer(1.into());
    let nonzero: Vec<(GroupElement, Rational)> = acc
        .into_iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(k, v)| (GroupElement::new(n, k as u64).expect("column in range"), v))
        .collect();
    Ok(VerificationReport {
        n,
        kind: cert.kind,
        passed: nonzero.is_empty(),
        rows_used: used,
        columns_checked: file.matrix.ncols() as u64,
        value_at_zero,
        residual_count: nonzero.len(),
        residuals: nonzero.into_iter().take(circhad_core::witness::MAX_LISTED_RESIDUALS).collect(),
    })
}

fn tridiag(ctx: &mut Ctx<'_>, n: usize) -> CliResult<i32> {
    let fp = fingerprint("tridiag", &[("n", n.to_string())]);
    let t = build_tridiagonal(n)?;
    let r = tridiagonal_rank(&t);
    preamble(ctx, &fp)?;
    writeln!(ctx.out, "n: {n}")?;
    writeln!(ctx.out, "size: {}", t.size())?;
    for w in (0..=n).step_by(2) {
        let sub = if w >= 2 { t.entry(w, w - 2) } else { 0 };
        writeln!(ctx.out, "row w={w}: sub={sub} diag={} super={}", t.entry(w, w), t.entry(w, w + 2))?;
    }
    writeln!(ctx.out, "rank: {r}")?;
    let label = if r == n / 2 { "n/2" } else if r == n / 2 + 1 { "n/2+1" } else { "other" };
    writeln!(ctx.out, "rank class: {label}")?;
    if n % 4 == 0 {
        let q = n / 4;
        let s = q.isqrt();
        writeln!(ctx.out, "n/4 perfect square: {}", yes_no(s * s == q))?;
        match circhad_core::witness::symmetric_witness(n)? {
            None => writeln!(ctx.out, "symmetric witness: none")?,
            Some(c) => {
                writeln!(ctx.out, "symmetric witness: found")?;
                for (w, v) in &c {
                    writeln!(ctx.out, "c_{w} = {}", show(v))?;
                }
            }
        }
    }
    Ok(0)
}

fn scoeffs(ctx: &mut Ctx<'_>, n: usize) -> CliResult<i32> {
    let fp = fingerprint("scoeffs", &[("n", n.to_string())]);
    let s = s_coefficients(n)?;
    preamble(ctx, &fp)?;
    writeln!(ctx.out, "n: {n}")?;
    writeln!(ctx.out, "terms: {}", s.len())?;
    writeln!(ctx.out, "S(0): {}", show(&s.get(&GroupElement::zero(n)?)))?;
    writeln!(ctx.out, "sum: {}", show(&s.sum_of_coefficients()))?;
    for (g, c) in s.iter() {
        writeln!(ctx.out, "{g} {}", show(c))?;
    }
    Ok(0)
}

fn wht_check(ctx: &mut Ctx<'_>, n: usize) -> CliResult<i32> {
    let fp = fingerprint("wht-check", &[("n", n.to_string())]);
    let limit = ctx.cap.min(UNFOLDED_CAP);
    if n > limit {
        return Err(circhad_core::Error::OrderTooLarge { n, cap: limit }.into());
    }
    let s = s_coefficients(n)?;
    let nn = (n * n) as i64;
    let dense: Vec<i64> = s
        .to_dense()
        .iter()
        .map(|q| q.to_integer().to_i64().ok_or_else(|| CliError::Cap("coefficient overflow".into())))
        .collect::<CliResult<_>>()?;
    let values = walsh_transform(&dense)?;
    let step = (values.len() as u64).div_ceil(SCAN_BLOCKS).max(1);
    let (mismatches, negatives, zeros): (u64, u64, Vec<u64>) = ctx.pool.install(|| (0..(values.len() as u64).div_ceil(step))
        .into_par_iter()
        .map(|b| {
            let mut m = 0;
            let mut neg = 0;
            let mut z = Vec::new();
            for mask in b * step..((b + 1) * step).min(values.len() as u64) {
                let v = values[mask as usize];
                let u = SignVector::from_group_element(&GroupElement::new(n, mask).expect("mask in range"));
                if v < 0 || v as u64 != s_value(&u) {
                    m += 1;
                }
                if v < 0 {
                    neg += 1;
                }
                if v == 0 {
                    z.push(mask);
                }
            }
            (m, neg, z)
        })
        .reduce(
            || (0, 0, Vec::new()),
            |mut a, b| {
                a.0 += b.0;
                a.1 += b.1;
                a.2.extend(b.2);
                a
            },
        ));
    let mut zeros = zeros;
    zeros.sort_unstable();
    let generators: Vec<u64> = ctx.pool.install(|| parallel_search(n, false))?.generators.iter().map(|g| g.mask()).collect();

    let checks = [
        ("S(0) = n^2", s.get(&GroupElement::zero(n)?) == Rational::from_integer(nn.into())),
        ("sum of coefficients = (n-1) n^2", s.sum_of_coefficients() == Rational::from_integer(((n as i64 - 1) * nn).into())),
        ("transform equals direct evaluation at every point", mismatches == 0),
        ("transform is nonnegative", negatives == 0),
        ("zero set equals the oracle generator set", zeros == generators),
    ];
    preamble(ctx, &fp)?;
    writeln!(ctx.out, "n: {n}")?;
    writeln!(ctx.out, "points: {}", values.len())?;
    writeln!(ctx.out, "zeros: {}", zeros.len())?;
    writeln!(ctx.out, "generators: {}", generators.len())?;
    let mut ok = true;
    for (name, pass) in checks {
        ok &= pass;
        writeln!(ctx.out, "[{}] {name}", if pass { "ok" } else { "FAIL" })?;
    }
    writeln!(ctx.out, "result: {}", if ok { "PASS" } else { "FAIL" })?;
    Ok(if ok { 0 } else { EXIT_FAILED })
}

fn orbits(ctx: &mut Ctx<'_>, n: usize, out: Option<&Path>) -> CliResult<i32> {
    let fp = fingerprint("orbits", &[("n", n.to_string())]);
    let table = build_orbit_table(n, ctx.cap)?;
    let group = SymmetryGroup::new(n)?;
    let text = orbit_table_text(&table, &group, &fp);
    match out {
        None => ctx.out.write_all(text.as_bytes())?,
        Some(path) => {
            write_file(path, text.as_bytes())?;
            preamble(ctx, &fp)?;
            writeln!(ctx.out, "n: {n}")?;
            writeln!(ctx.out, "group order: {}", group.order())?;
            writeln!(ctx.out, "orbits: {}", table.orbit_count())?;
            writeln!(ctx.out, "written: {}", path.display())?;
        }
    }
    Ok(0)
}

/// Entry point for the binary.
pub fn main_with_std_io() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = BufWriter::new(stdout.lock());
    let mut err = stderr.lock();
    let code = run(std::env::args_os(), &mut out, &mut err);
    if out.flush().is_err() {
        return crate::error::EXIT_IO;
    }
    code
}
