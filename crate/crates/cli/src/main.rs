use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polyshare_core::analytics::{baseline_bounds, table1_compare, worker_bound};
use polyshare_core::circuit::{compile, parse_expression, Expr};
use polyshare_core::cluster::{Cluster, RunReport, SystemConfig};
use polyshare_core::field::DEFAULT_SEED;
use polyshare_core::privacy::{
    distribution_audit_many, privacy_certificate, AuditReport, AuditSpec, CertificateReport, DEFAULT_TV_THRESHOLD,
};
use polyshare_core::transcript::Counters;
use polyshare_core::{Error, Field, Matrix, MatrixDoc, MERSENNE_61};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

const EXIT_CONFIG: u8 = 1;
const EXIT_PROTOCOL: u8 = 2;
const EXIT_AUDIT: u8 = 3;

#[derive(Parser)]
#[command(name = "polyshare", version, about = "Secure polynomial evaluation over shared matrices, simulated in process")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression over private input matrices.
    Run(RunArgs),
    /// Print the worker bound and the comparison against other schemes.
    Bound(BoundArgs),
    /// Check the evaluation points and, at tiny scale, the view distributions.
    Audit(AuditArgs),
    /// Compare measured counters with the cost model over a parameter grid.
    Bench(BenchArgs),
}

#[derive(Args, Clone)]
struct Common {
    /// Worker count N.
    #[arg(long, default_value_t = 8)]
    workers: usize,
    /// Privacy threshold t.
    #[arg(short, default_value_t = 2)]
    t: usize,
    /// Storage split k.
    #[arg(short, default_value_t = 2)]
    k: usize,
    /// Prime modulus.
    #[arg(long, default_value_t = MERSENNE_61)]
    modulus: u64,
    #[arg(long, env = "POLYSHARE_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Where to write the JSON report.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    /// File holding the expression, e.g. `X1' * X2 + X3`.
    #[arg(long)]
    expr: PathBuf,
    /// Input matrix files in order X1, X2, ...
    #[arg(long = "input", num_args = 1.., required = true)]
    inputs: Vec<PathBuf>,
    /// Number of sources; defaults to the number of inputs.
    #[arg(long)]
    gamma: Option<usize>,
    /// Matrix side; defaults to the side of the first input.
    #[arg(short)]
    m: Option<usize>,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(short)]
    t: usize,
    #[arg(short)]
    k: usize,
    /// Also print every scheme's worker count.
    #[arg(long)]
    table: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct AuditArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    expr: Option<PathBuf>,
    /// First input tuple; random if absent.
    #[arg(long = "input", num_args = 1..)]
    inputs: Vec<PathBuf>,
    /// Second input tuple; random if absent.
    #[arg(long = "input-b", num_args = 1..)]
    inputs_b: Vec<PathBuf>,
    #[arg(long, default_value_t = 2)]
    gamma: usize,
    #[arg(short, default_value_t = 1)]
    m: usize,
    /// Adversary size; defaults to t - 1. Larger values demonstrate leakage.
    #[arg(long)]
    subset_size: Option<usize>,
    #[arg(long, default_value_t = 50_000)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_TV_THRESHOLD)]
    tv_threshold: f64,
    /// Succeed only if the beyond-threshold audit does show leakage.
    #[arg(long)]
    expect_leak: bool,
    /// Comma-separated evaluation points to certify instead of sampled ones.
    #[arg(long, value_delimiter = ',')]
    alphas: Option<Vec<u64>>,
}

#[derive(Args)]
struct BenchArgs {
    /// Expression file; defaults to `X1' * X2`.
    #[arg(long)]
    expr: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    ks: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    ts: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "2,4")]
    ms: Vec<usize>,
    /// Extra workers beyond the requirement.
    #[arg(long, default_value_t = 0)]
    extra_workers: usize,
    #[arg(long, default_value_t = MERSENNE_61)]
    modulus: u64,
    #[arg(long, env = "POLYSHARE_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_protocol_error() { EXIT_PROTOCOL } else { EXIT_CONFIG };
        Failure { code, msg: e.to_string() }
    }
}

fn config_err(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        msg: msg.into(),
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Bound(a) => {
            cmd_bound(&a);
            Ok(())
        }
        Command::Audit(a) => cmd_audit(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))
}

fn read_matrix(path: &Path, field: &Field) -> Result<Matrix, Failure> {
    let doc = MatrixDoc::parse(&read_text(path)?).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    doc.to_matrix(field).map_err(|e| config_err(format!("{}: {e}", path.display())))
}

fn read_expr(path: &Path, field: &Field) -> Result<Expr, Failure> {
    parse_expression(read_text(path)?.trim(), field).map_err(|e| config_err(format!("{}: {e}", path.display())))
}

fn write_out(path: &Option<PathBuf>, json: &str) -> CmdResult {
    if let Some(p) = path {
        std::fs::write(p, json).map_err(|e| config_err(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

fn field_of(modulus: u64) -> Result<Field, Failure> {
    Ok(Field::new(modulus)?)
}

fn matrix_text(m: &Matrix) -> String {
    let vals = m.to_u64();
    let width = vals.iter().map(|v| v.to_string().len()).max().unwrap_or(1);
    let mut s = String::new();
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|c| format!("{:>width$}", vals[r * m.cols() + c]))
            .collect();
        let _ = writeln!(s, "  [{}]", row.join(" "));
    }
    s
}

fn counters_text(c: &Counters) -> String {
    let rows = [
        ("source -> worker", c.source_to_worker),
        ("worker -> worker", c.worker_to_worker),
        ("worker -> master", c.worker_to_master),
        ("local (self)", c.local),
        ("reshare rounds", c.reshare_rounds),
        ("master mults", c.master_mults),
    ];
    let mut s = String::new();
    for (name, v) in rows {
        let _ = writeln!(s, "  {name:<18} {v:>12}");
    }
    s
}

fn cmd_run(a: RunArgs) -> CmdResult {
    let field = field_of(a.common.modulus)?;
    let expr = read_expr(&a.expr, &field)?;
    let inputs = a
        .inputs
        .iter()
        .map(|p| read_matrix(p, &field))
        .collect::<Result<Vec<_>, _>>()?;
    let gamma = a.gamma.unwrap_or(inputs.len());
    if gamma != inputs.len() {
        return Err(config_err(format!("--gamma {gamma} but {} input files", inputs.len())));
    }
    let m = a.m.unwrap_or(inputs[0].rows());
    let cfg = SystemConfig {
        gamma,
        workers: a.common.workers,
        t: a.common.t,
        k: a.common.k,
        m,
        modulus: a.common.modulus,
        seed: a.common.seed,
    };
    let cluster = Cluster::new(cfg)?;
    let out = cluster.run(&expr, &inputs)?;
    let mut report = RunReport::new(&cluster, &expr, &out);
    report.certificate = Some(privacy_certificate(&field, &cluster.alphas, a.common.k, a.common.t, a.common.seed));
    println!("expression: {expr}");
    println!("output ({m} x {m}):");
    print!("{}", matrix_text(&out.output));
    println!("counters (field elements):");
    print!("{}", counters_text(&out.counters));
    println!("transcript: {} records, sha256 {}", out.transcript.len(), out.transcript.digest());
    write_out(&a.common.out, &report.to_json())
}

fn cmd_bound(a: &BoundArgs) {
    let b = baseline_bounds(a.t, a.k);
    println!("t = {}, k = {}", a.t, a.k);
    println!("  {:<16} {:>12}", "polyshare", worker_bound(a.t, a.k));
    println!("  {:<16} {:>12}", "job-split mult", b.job_split_multiply);
    println!("  {:<16} {:>12}", "linear only", b.linear_only);
    if a.table || a.csv {
        let table = table1_compare(a.t, a.k);
        println!();
        if a.csv {
            print!("{}", table.to_csv());
        } else {
            print!("{}", table.to_text());
        }
    }
}

#[derive(Serialize)]
struct AuditOutput {
    config: SystemConfig,
    alphas: Vec<u64>,
    certificate: CertificateReport,
    audits: Vec<AuditReport>,
    skipped: Option<String>,
    passed: bool,
}

fn random_tuple(field: &Field, gamma: usize, m: usize, seed: u64) -> Vec<Matrix> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..gamma).map(|_| Matrix::random(field, m, m, &mut rng)).collect()
}

fn cmd_audit(a: AuditArgs) -> CmdResult {
    let c = &a.common;
    let field = field_of(c.modulus)?;
    let expr = match &a.expr {
        Some(p) => read_expr(p, &field)?,
        None => parse_expression("X1' * X2", &field)?,
    };
    let load = |paths: &[PathBuf], seed: u64| -> Result<Vec<Matrix>, Failure> {
        if paths.is_empty() {
            Ok(random_tuple(&field, a.gamma, a.m, seed))
        } else {
            paths.iter().map(|p| read_matrix(p, &field)).collect()
        }
    };
    let inputs_a = load(&a.inputs, c.seed ^ 0xa)?;
    let mut inputs_b = load(&a.inputs_b, c.seed ^ 0xb)?;
    if inputs_b == inputs_a && a.inputs_b.is_empty() {
        inputs_b = load(&[], c.seed ^ 0xbb)?;
    }
    let cfg = SystemConfig {
        gamma: inputs_a.len(),
        workers: c.workers,
        t: c.t,
        k: c.k,
        m: inputs_a.first().map_or(a.m, Matrix::rows),
        modulus: c.modulus,
        seed: c.seed,
    };
    cfg.validate()?;

    let (alphas, injected) = match &a.alphas {
        Some(v) => {
            if v.len() != c.workers {
                return Err(config_err(format!("{} points for {} workers", v.len(), c.workers)));
            }
            (v.iter().map(|&x| field.checked_elem(x)).collect::<Result<Vec<_>, _>>()?, true)
        }
        None => (Cluster::new(cfg.clone())?.alphas, false),
    };
    let certificate = privacy_certificate(&field, &alphas, c.k, c.t, c.seed);

    let size = a.subset_size.unwrap_or(c.t - 1);
    if size > c.workers {
        return Err(config_err(format!("subset size {size} exceeds N = {}", c.workers)));
    }
    let mut skipped = None;
    let mut audits = Vec::new();
    if injected {
        skipped = Some("statistical audit runs on sampled points only".to_string());
    } else if size == 0 {
        skipped = Some("empty adversary sees nothing".to_string());
    } else {
        let spec = AuditSpec {
            config: cfg.clone(),
            expr,
            inputs_a,
            inputs_b,
            trials: a.trials,
            tv_threshold: a.tv_threshold,
        };
        match distribution_audit_many(&spec, &[(0..size).collect()]) {
            Ok(r) => audits = r,
            Err(Error::ParametersTooLarge(why)) => skipped = Some(why),
            Err(e) => return Err(e.into()),
        }
    }

    let leak_shown = audits.iter().any(|r| r.beyond_threshold && r.exceeds_threshold);
    let stats_ok = if a.expect_leak {
        leak_shown
    } else {
        audits.iter().all(|r| !r.exceeds_threshold)
    };
    let passed = certificate.passed && stats_ok;

    println!(
        "certificate: {} ({} of {} subsets of size {}{})",
        if certificate.passed { "pass" } else { "FAIL" },
        certificate.checked,
        certificate.total_subsets,
        certificate.subset_size,
        if certificate.exhaustive { ", exhaustive" } else { ", sampled" }
    );
    for s in certificate.failures.iter().take(20) {
        println!("  singular mask matrix for workers {s:?}");
    }
    if certificate.failures.len() > 20 {
        println!("  ... {} more", certificate.failures.len() - 20);
    }
    for r in &audits {
        println!(
            "audit {:?}: {} trials, {} coordinates, max TV {:.4} (single {:.4}, pair {:.4}), threshold {}{}",
            r.subset,
            r.trials,
            r.coordinates,
            r.max_tv,
            r.max_tv_single,
            r.max_tv_pair,
            r.tv_threshold,
            if r.beyond_threshold { ", beyond t - 1: leakage expected" } else { "" }
        );
    }
    if let Some(why) = &skipped {
        println!("statistical audit skipped: {why}");
    }
    if a.expect_leak && !leak_shown {
        println!("expected leakage was not observed");
    }

    let output = AuditOutput {
        config: cfg,
        alphas: alphas.iter().map(|x| x.value()).collect(),
        certificate,
        audits,
        skipped,
        passed,
    };
    write_out(&c.out, &to_json(&output))?;
    if passed {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_AUDIT,
            msg: "privacy audit failed".into(),
        })
    }
}

#[derive(Serialize)]
struct BenchRow {
    k: usize,
    t: usize,
    workers: usize,
    m: usize,
    measured: Counters,
    predicted: Counters,
    matches: bool,
}

fn cmd_bench(a: BenchArgs) -> CmdResult {
    let field = field_of(a.modulus)?;
    let expr = match &a.expr {
        Some(p) => read_expr(p, &field)?,
        None => parse_expression("X1' * X2", &field)?,
    };
    let circuit = compile(&expr);
    let gamma = expr.input_count();
    let mut rows = Vec::new();
    println!(
        "{:>3} {:>3} {:>5} {:>4}  {:>14} {:>14}  {:>14} {:>14}  match",
        "k", "t", "N", "m", "w->w meas", "w->w pred", "s->w meas", "s->w pred"
    );
    for &k in &a.ks {
        for &t in &a.ts {
            for &m in &a.ms {
                if k == 0 || t == 0 || m % k != 0 {
                    continue;
                }
                let workers = circuit.required_workers(t, k) + a.extra_workers;
                let cfg = SystemConfig {
                    gamma,
                    workers,
                    t,
                    k,
                    m,
                    modulus: a.modulus,
                    seed: a.seed,
                };
                let cluster = Cluster::new(cfg)?;
                let inputs = random_tuple(&field, gamma, m, a.seed);
                let measured = cluster.run_circuit(&circuit, &inputs, a.seed)?.counters;
                let predicted = cluster.predicted(&circuit);
                let matches = measured == predicted;
                println!(
                    "{k:>3} {t:>3} {workers:>5} {m:>4}  {:>14} {:>14}  {:>14} {:>14}  {}",
                    measured.worker_to_worker,
                    predicted.worker_to_worker,
                    measured.source_to_worker,
                    predicted.source_to_worker,
                    if matches { "yes" } else { "NO" }
                );
                rows.push(BenchRow {
                    k,
                    t,
                    workers,
                    m,
                    measured,
                    predicted,
                    matches,
                });
            }
        }
    }
    write_out(&a.out, &to_json(&rows))
}
