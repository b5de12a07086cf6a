use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use serde_json::Value;

use insdel_core::channel::{simulate, Decoder, Outcome};
use insdel_core::constructions::{
    construct_abc, construct_k2, field_size_lower_bound, random_construction, verify_abc, AbcArtifact,
    CodeArtifact, ConstructionError, Provenance,
};
use insdel_core::criterion::{verify_code, VerificationReport, VerifyOptions};
use insdel_core::field::{FieldElement, FieldSpec};
use insdel_core::rs_code::RsCode;

const EXIT_PROPERTY_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_EXHAUSTED: u8 = 3;

#[derive(Parser)]
#[command(name = "insdel-rs", version, about = "Reed-Solomon codes against insertions and deletions")]
struct Cli {
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, env = "INSDEL_RS_JOBS", default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build evaluation points and write a code file.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Check the determinant criterion for a code file.
    Verify {
        spec: PathBuf,
        /// Scan every pair and count failures.
        #[arg(long)]
        full: bool,
        /// Single-threaded lexicographic scan.
        #[arg(long)]
        deterministic: bool,
    },
    /// Random messages through a random insdel channel, then decode.
    Simulate {
        spec: PathBuf,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Edits per trial are drawn from 0..=budget; also the decoding radius.
        #[arg(long)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Transcript path (JSON lines); stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode a received word.
    Decode {
        spec: PathBuf,
        /// JSON array of symbols (integers or coefficient arrays).
        #[arg(long)]
        received: PathBuf,
        /// Defaults to the correction radius n - 2k + 1.
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Field-size and rate bounds for given n and k.
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum ConstructKind {
    /// Dimension-2 code over F_{3^{4m}} from a Sidon space.
    SidonK2 {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Points (x - i)^ell in F_p[x], verified at the ring level.
    Abc {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        /// Run even when the degree exceeds the work cap.
        #[arg(long)]
        force: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random points, resampled until the criterion passes.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        max_attempts: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            code: EXIT_USAGE,
            err: e.into(),
        }
    }
}

fn construction_failure(e: ConstructionError) -> Failure {
    let code = match e {
        ConstructionError::SearchExhausted { .. } | ConstructionError::AttemptsExhausted { .. } => EXIT_EXHAUSTED,
        _ => EXIT_USAGE,
    };
    Failure { code, err: e.into() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let jobs = cli.jobs;
    match cli.command {
        Command::Construct { kind } => construct(kind, jobs),
        Command::Verify { spec, full, deterministic } => {
            let opts = VerifyOptions { full, jobs, deterministic };
            let report = verify_file(&spec, &opts)?;
            println!("{}", serde_json::to_string(&report)?);
            Ok(if report.passed() { 0 } else { EXIT_PROPERTY_FAIL })
        }
        Command::Simulate { spec, trials, budget, seed, out } => {
            let code = load_code(&spec)?;
            if budget > code.correction_radius() {
                return Err(anyhow!("budget {budget} exceeds the correction radius {}", code.correction_radius()).into());
            }
            let (records, summary) = simulate(&code, trials, budget, seed, jobs)?;
            let mut lines = String::new();
            for r in &records {
                lines.push_str(&serde_json::to_string(r)?);
                lines.push('\n');
            }
            let summary_json = serde_json::to_string(&summary)?;
            match out {
                Some(path) => {
                    write_file(&path, &lines)?;
                    println!("{summary_json}");
                }
                None => {
                    io::stdout().write_all(lines.as_bytes())?;
                    eprintln!("{summary_json}");
                }
            }
            Ok(if summary.all_ok() { 0 } else { EXIT_PROPERTY_FAIL })
        }
        Command::Decode { spec, received, radius } => {
            let code = load_code(&spec)?;
            let text = fs::read_to_string(&received).with_context(|| format!("reading {}", received.display()))?;
            let word = parse_word(code.field(), &serde_json::from_str(&text)?)?;
            let radius = radius.unwrap_or(code.correction_radius());
            let result = Decoder::new(&code)?.decode(&word, radius)?;
            println!("{}", serde_json::to_string(&result)?);
            Ok(match result.outcome {
                Outcome::Decoded { .. } => 0,
                Outcome::Failure(_) => EXIT_PROPERTY_FAIL,
            })
        }
        Command::Bounds { n, k, json } => bounds(n, k, json),
    }
}

fn construct(kind: ConstructKind, jobs: usize) -> Result<u8, Failure> {
    let opts = VerifyOptions { jobs, ..Default::default() };
    match kind {
        ConstructKind::SidonK2 { m, seed, out } => {
            let c = construct_k2(m, seed).map_err(construction_failure)?;
            let report = verify_code(&c.code, &opts)?;
            if !report.passed() {
                return Err(Failure {
                    code: EXIT_PROPERTY_FAIL,
                    err: anyhow!("constructed code failed verification: {}", serde_json::to_string(&report)?),
                });
            }
            emit(out.as_deref(), &serde_json::to_string(&c.artifact(seed))?)?;
        }
        ConstructKind::Abc { k, n, force, out } => {
            let (params, alphas) = construct_abc(k, n, force).map_err(construction_failure)?;
            let mut value = serde_json::to_value(AbcArtifact::new(&params, &alphas))?;
            value["provenance"] = serde_json::to_value(Provenance {
                construction: "abc".into(),
                params: serde_json::json!({"k": k, "n": n, "p": params.p, "ell": params.ell}),
                seed: 0,
            })?;
            emit(out.as_deref(), &serde_json::to_string(&value)?)?;
        }
        ConstructKind::Random { n, k, q, seed, max_attempts, out } => {
            let r = random_construction(n, k, q, seed, max_attempts, &opts).map_err(construction_failure)?;
            eprintln!("found after {} attempts", r.attempts);
            emit(out.as_deref(), &serde_json::to_string(&r.artifact())?)?;
        }
    }
    Ok(0)
}

fn verify_file(path: &Path, opts: &VerifyOptions) -> Result<VerificationReport, Failure> {
    let value = read_json(path)?;
    if value.get("characteristic").is_some() {
        let art: AbcArtifact = serde_json::from_value(value).context("parsing ring-form spec")?;
        return Ok(verify_abc(&art.params(), &art.ring_alphas(), opts)?);
    }
    let art: CodeArtifact = serde_json::from_value(value).context("parsing code spec")?;
    Ok(verify_code(&art.code, opts)?)
}

fn load_code(path: &Path) -> Result<RsCode, Failure> {
    let value = read_json(path)?;
    if value.get("characteristic").is_some() {
        return Err(anyhow!("ring-form specs can be verified but not used for encoding").into());
    }
    let art: CodeArtifact = serde_json::from_value(value).context("parsing code spec")?;
    Ok(art.code)
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?)
}

fn parse_word(field: &FieldSpec, value: &Value) -> anyhow::Result<Vec<FieldElement>> {
    let items = value.as_array().ok_or_else(|| anyhow!("received word must be a JSON array"))?;
    items
        .iter()
        .map(|v| {
            let coeffs: Vec<u64> = match v {
                Value::Number(_) => vec![v.as_u64().ok_or_else(|| anyhow!("bad symbol {v}"))?],
                _ => serde_json::from_value(v.clone()).with_context(|| format!("bad symbol {v}"))?,
            };
            Ok(field.element(&coeffs)?)
        })
        .collect()
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write_file(path, &format!("{text}\n")),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn bounds(n: u64, k: u64, json: bool) -> Result<u8, Failure> {
    if k == 0 || 2 * k > n + 1 {
        return Err(anyhow!("need 1 <= k and 2k - 1 <= n").into());
    }
    let lower = match field_size_lower_bound(n, k) {
        Ok(b) => Some(b),
        Err(ConstructionError::DegenerateDimension(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let radius = n + 1 - 2 * k;
    let rate = k as f64 / n as f64;
    let half_singleton = (2 * k - 1) as f64 / (2 * n) as f64;
    // lengths reached by the Sidon construction
    let achieved = (k == 2)
        .then(|| (2..=3u32).find(|&m| (3u64.pow(m) + 1) / 2 == n))
        .flatten()
        .map(|m| (m, 3u64.pow(4 * m)));
    if json {
        let v = serde_json::json!({
            "n": n,
            "k": k,
            "lower_bound": lower,
            "trivial_bound": n,
            "radius": radius,
            "rate": rate,
            "half_singleton_rate": half_singleton,
            "sidon_k2": achieved.map(|(m, q)| serde_json::json!({"m": m, "q": q})),
        });
        println!("{}", serde_json::to_string(&v)?);
        return Ok(0);
    }
    println!("n = {n}, k = {k}, correction radius {radius}");
    match lower {
        Some(b) => match b.exact {
            Some(r) => println!("field size lower bound  q >= {}/{} ~ {:.2}", r.numer(), r.denom(), b.value),
            None => println!("field size lower bound  q >= {:.2}", b.value),
        },
        None => println!("field size lower bound  none (k = 1)"),
    }
    println!("trivial bound           q >= {n}");
    println!("rate k/n                {rate:.6}");
    println!("half-Singleton (1-d)/2  {half_singleton:.6}  (gap 1/(2n) = {:.6})", rate - half_singleton);
    if let Some((m, q)) = achieved {
        println!("sidon-k2 with m = {m} achieves q = {q}");
    }
    Ok(0)
}
