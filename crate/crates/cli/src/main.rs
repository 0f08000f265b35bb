//! `sefcc`: construct, validate, certify and simulate SEFCCs for the
//! [7,4,3] Hamming membership function.
//!
//! Exit status: 0 on success, 1 when a validation or certification fails,
//! 2 on usage or parse errors.

mod manifest;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use manifest::{default_manifest_path, FileRecord, RunManifest};
use sefcc::channel::{compare_csv, SimResult};
use sefcc::{
    certify_theorems, construct_max_sum, cross_class_min_distance, extend_to_full, has_dmin_2,
    is_valid, optimal_fer_code, run_simulation, spectrum, BooleanFunction, HammingCodebook,
    MaxSumParams, ParityAssignment, SearchMode, SearchStrategy, SimConfig, Word,
};

#[derive(Parser, Debug)]
#[command(name = "sefcc", version, about = "SEFCC workbench for the [7,4,3] Hamming membership function")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a parity assignment and write it in the 16-token text format.
    Construct(ConstructArgs),
    /// Check an assignment file; exit 0 iff it is a valid SEFCC.
    Validate(ValidateArgs),
    /// Print the distance spectrum of an assignment as `d,count` CSV.
    Spectrum(SpectrumArgs),
    /// Run the exhaustive census and certify the structural claims.
    Certify(CertifyArgs),
    /// Monte-Carlo BER/FER over AWGN with soft-decision ML decoding.
    Simulate(SimulateArgs),
    /// Print the Hamming codebook table.
    Codebook,
    /// Re-run a recorded manifest and check its outputs are byte-identical.
    Replay {
        manifest: PathBuf,
    },
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Manifest path (defaults to `<out>.manifest.json` when `--out` is set).
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
enum Kind {
    MaxSum,
    OptimalFer,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    kind: Kind,
    /// Odd-weight codewords (1-based) receiving the first symbol of their pair.
    #[arg(long, value_delimiter = ',', default_value = "3,4,5,6")]
    odd: Vec<usize>,
    /// Even-weight codewords (1-based) receiving the first symbol of their pair.
    #[arg(long, value_delimiter = ',', default_value = "1,2,7,8")]
    even: Vec<usize>,
    /// Give {01,10} to the odd partite set and {00,11} to the even one.
    #[arg(long)]
    swap: bool,
    /// Parity of the non-codewords for `optimal-fer`.
    #[arg(long, default_value = "00")]
    parity: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    file: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    file: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[arg(long, default_value = "backtracking", value_parser = ["backtracking", "full-sweep"])]
    strategy: String,
    #[arg(long, env = "SEFCC_WORKERS", default_value_t = 1)]
    workers: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Assignment files, one per code.
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Emit one joined CSV with the columns of every code.
    #[arg(long)]
    compare: bool,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    snr_start: f64,
    #[arg(long, default_value_t = 9.0, allow_negative_numbers = true)]
    snr_stop: f64,
    #[arg(long, default_value_t = 1.0)]
    snr_step: f64,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, env = "SEFCC_WORKERS", default_value_t = 1)]
    workers: usize,
    /// Simulate assignments that fail the validity test.
    #[arg(long)]
    allow_invalid: bool,
    /// Output file; a directory when several codes are simulated without
    /// `--compare` (one `<stem>.csv` each).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

/// Error carrying its exit status.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn usage(error: anyhow::Error) -> Self {
        Failure { code: 2, error }
    }
    fn check(error: anyhow::Error) -> Self {
        Failure { code: 1, error }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure::usage(error)
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Construct(a) => cmd_construct(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Codebook => {
            print!("{}", HammingCodebook::new().table());
            Ok(ExitCode::SUCCESS)
        }
        Command::Replay { manifest } => cmd_replay(&manifest),
    }
}

/// Reads a 16-token assignment file; errors name the line and token.
fn read_assignment(path: &Path) -> anyhow::Result<ParityAssignment> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.parse::<ParityAssignment>().map_err(|e| match e {
        sefcc::Error::Parse { token, message } => {
            let line = locate_token(&text, token);
            anyhow!("{}:{line}: token {token}: {message}", path.display())
        }
        other => anyhow!("{}: {other}", path.display()),
    })
}

/// 1-based line of the 1-based `token`, or of the end of input.
fn locate_token(text: &str, token: usize) -> usize {
    let mut seen = 0;
    for (n, line) in text.lines().enumerate() {
        seen += line.split_whitespace().count();
        if seen >= token {
            return n + 1;
        }
    }
    text.lines().count().max(1)
}

/// Writes `content` to `--out` (recording it) or stdout.
fn emit(out: Option<&Path>, content: &str, outputs: &mut Vec<FileRecord>) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            fs::write(path, content).with_context(|| format!("writing {}", path.display()))?;
            outputs.push(FileRecord::of(path)?);
        }
        None => std::io::stdout().write_all(content.as_bytes())?,
    }
    Ok(())
}

fn finish_manifest(mut m: RunManifest, output: &OutputArgs, outputs: Vec<FileRecord>) -> anyhow::Result<()> {
    m.outputs = outputs;
    let path = output
        .manifest
        .clone()
        .or_else(|| output.out.as_deref().map(default_manifest_path));
    if let Some(path) = path {
        m.write(&path)?;
    }
    Ok(())
}

fn output_argv(argv: &mut Vec<String>, output: &OutputArgs) {
    if let Some(out) = &output.out {
        argv.extend(["--out".into(), out.display().to_string()]);
    }
    if let Some(m) = &output.manifest {
        argv.extend(["--manifest".into(), m.display().to_string()]);
    }
}

fn summary(pa: &ParityAssignment) -> String {
    let cb = HammingCodebook::new();
    let g = cb.distance3_graph();
    let s = spectrum(&extend_to_full(pa, &cb));
    format!("sum={} dmin={} n2={} valid={}", s.sum_distance, s.d_min, s.n2(), is_valid(pa, &g))
}

fn cmd_construct(a: ConstructArgs) -> CmdResult {
    let cb = HammingCodebook::new();
    let g = cb.distance3_graph();
    let mut argv = vec!["construct".to_string()];
    let (pa, params) = match a.kind {
        Kind::MaxSum => {
            let to_zero = |v: &[usize]| -> anyhow::Result<Vec<usize>> {
                v.iter()
                    .map(|&i| {
                        if (1..=16).contains(&i) {
                            Ok(i - 1)
                        } else {
                            Err(anyhow!("codeword index {i} outside 1..=16"))
                        }
                    })
                    .collect()
            };
            let params = MaxSumParams {
                odd_subset: to_zero(&a.odd)?,
                even_subset: to_zero(&a.even)?,
                swap_pair_roles: a.swap,
            };
            let pa = construct_max_sum(&g, &params).map_err(|e| anyhow!(e))?;
            let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
            argv.extend(["max-sum".into(), "--odd".into(), join(&a.odd), "--even".into(), join(&a.even)]);
            if a.swap {
                argv.push("--swap".into());
            }
            (pa, json!({"kind": "max-sum", "odd": a.odd, "even": a.even, "swap": a.swap}))
        }
        Kind::OptimalFer => {
            let p: Word = a.parity.parse().map_err(|e| anyhow!("--parity: {e}"))?;
            let code = optimal_fer_code(&cb, p).map_err(|e| anyhow!("--parity: {e}"))?;
            argv.extend(["optimal-fer".into(), "--parity".into(), a.parity.clone()]);
            (*code.assignment(), json!({"kind": "optimal-fer", "parity": a.parity}))
        }
    };
    output_argv(&mut argv, &a.output);

    let mut outputs = Vec::new();
    emit(a.output.out.as_deref(), &format!("{pa}\n"), &mut outputs)?;
    let line = summary(&pa);
    if a.output.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    finish_manifest(RunManifest::new("construct", argv, params, None), &a.output, outputs)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(a: ValidateArgs) -> CmdResult {
    let pa = read_assignment(&a.file)?;
    let cb = HammingCodebook::new();
    let g = cb.distance3_graph();
    let f = BooleanFunction::hamming_membership(&cb);
    let code = extend_to_full(&pa, &cb);
    let valid = is_valid(&pa, &g);
    let s = spectrum(&code);
    let mut report = format!("valid={valid}\n");
    if valid {
        let dmin2 = has_dmin_2(&pa, &g).map_err(|e| anyhow!(e))?;
        report += &format!("dmin={}\n", if dmin2 { 2 } else { 1 });
    } else {
        let (i, k) = g
            .edges()
            .iter()
            .copied()
            .find(|&(i, k)| pa.value(i) == pa.value(k) ^ 3)
            .expect("invalid assignments have a complementary edge");
        report += &format!("violation=c{}:{} c{}:{}\n", i + 1, pa.parity(i), k + 1, pa.parity(k));
        report += &format!("dmin={}\n", s.d_min);
    }
    report += &format!(
        "sum={}\ncross_class_min={}\n",
        s.sum_distance,
        cross_class_min_distance(&code, &f).map_err(|e| anyhow!(e))?
    );
    report += &s.to_csv();

    let mut argv = vec!["validate".to_string(), a.file.display().to_string()];
    output_argv(&mut argv, &a.output);
    let mut m = RunManifest::new("validate", argv, json!({"file": a.file}), None);
    m.inputs.push(FileRecord::of(&a.file)?);
    let mut outputs = Vec::new();
    emit(a.output.out.as_deref(), &report, &mut outputs)?;
    finish_manifest(m, &a.output, outputs)?;
    if valid {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(Failure::check(anyhow!("{}: assignment is not a valid SEFCC", a.file.display())))
    }
}

fn cmd_spectrum(a: SpectrumArgs) -> CmdResult {
    let pa = read_assignment(&a.file)?;
    let cb = HammingCodebook::new();
    let s = spectrum(&extend_to_full(&pa, &cb));
    let mut argv = vec!["spectrum".to_string(), a.file.display().to_string()];
    output_argv(&mut argv, &a.output);
    let mut m = RunManifest::new("spectrum", argv, json!({"file": a.file}), None);
    m.inputs.push(FileRecord::of(&a.file)?);
    let mut outputs = Vec::new();
    emit(a.output.out.as_deref(), &s.to_csv(), &mut outputs)?;
    finish_manifest(m, &a.output, outputs)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_certify(a: CertifyArgs) -> CmdResult {
    let mode: SearchMode = a.strategy.parse().map_err(|e| anyhow!("{e}"))?;
    let strategy = SearchStrategy::new(mode, a.workers).map_err(|e| anyhow!("{e}"))?;
    let g = HammingCodebook::new().distance3_graph();
    let report = certify_theorems(&g, strategy);

    let mut argv = vec![
        "certify".to_string(),
        "--strategy".into(),
        a.strategy.clone(),
        "--workers".into(),
        a.workers.to_string(),
    ];
    output_argv(&mut argv, &a.output);
    let params = json!({"strategy": a.strategy, "workers": a.workers});
    let mut outputs = Vec::new();
    emit(a.output.out.as_deref(), &report.to_key_value(), &mut outputs)?;
    finish_manifest(RunManifest::new("certify", argv, params, None), &a.output, outputs)?;
    if report.all_passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(Failure::check(anyhow!("certification failed")))
    }
}

fn code_id(path: &Path) -> String {
    path.file_stem().map_or_else(|| "code".into(), |s| s.to_string_lossy().into_owned())
}

fn cmd_simulate(a: SimulateArgs) -> CmdResult {
    let cb = HammingCodebook::new();
    let g = cb.distance3_graph();
    let f = BooleanFunction::hamming_membership(&cb);
    let points = SimConfig::sweep(a.snr_start, a.snr_stop, a.snr_step).map_err(|e| anyhow!(e))?;
    let cfg = SimConfig::new(points, a.trials, a.seed)
        .and_then(|c| c.with_workers(a.workers))
        .map_err(|e| anyhow!(e))?;

    let mut m = RunManifest::new("simulate", Vec::new(), serde_json::Value::Null, Some(a.seed));
    let mut codes = Vec::new();
    for path in &a.files {
        let pa = read_assignment(path)?;
        if !is_valid(&pa, &g) && !a.allow_invalid {
            return Err(Failure::check(anyhow!(
                "{}: assignment is not a valid SEFCC (use --allow-invalid to simulate anyway)",
                path.display()
            )));
        }
        m.inputs.push(FileRecord::of(path)?);
        codes.push((code_id(path), extend_to_full(&pa, &cb)));
    }
    let results: Vec<(String, SimResult)> = codes
        .iter()
        .map(|(id, code)| Ok((id.clone(), run_simulation(code, &f, &cfg)?)))
        .collect::<Result<_, sefcc::Error>>()
        .map_err(|e| anyhow!(e))?;

    let mut outputs = Vec::new();
    if a.compare || results.len() == 1 {
        let csv = if a.compare {
            let runs: Vec<(&str, &SimResult)> = results.iter().map(|(id, r)| (id.as_str(), r)).collect();
            compare_csv(&runs).map_err(|e| anyhow!(e))?
        } else {
            results[0].1.to_csv(&results[0].0)
        };
        emit(a.out.as_deref(), &csv, &mut outputs)?;
    } else {
        let dir = a.out.clone().ok_or_else(|| anyhow!("--out DIR is required for several codes without --compare"))?;
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        for (id, r) in &results {
            emit(Some(&dir.join(format!("{id}.csv"))), &r.to_csv(id), &mut outputs)?;
        }
    }

    let mut argv = vec!["simulate".to_string()];
    argv.extend(a.files.iter().map(|p| p.display().to_string()));
    if a.compare {
        argv.push("--compare".into());
    }
    argv.extend([
        format!("--snr-start={}", a.snr_start),
        format!("--snr-stop={}", a.snr_stop),
        format!("--snr-step={}", a.snr_step),
        format!("--trials={}", a.trials),
        format!("--seed={}", a.seed),
        format!("--workers={}", a.workers),
    ]);
    if a.allow_invalid {
        argv.push("--allow-invalid".into());
    }
    let output = OutputArgs { out: a.out.clone(), manifest: a.manifest.clone() };
    output_argv(&mut argv, &output);
    m.argv = argv;
    m.params = json!({
        "files": a.files,
        "compare": a.compare,
        "snr_start": a.snr_start,
        "snr_stop": a.snr_stop,
        "snr_step": a.snr_step,
        "trials": a.trials,
        "seed": a.seed,
        "workers": a.workers,
        "allow_invalid": a.allow_invalid,
        "rate": "7/9",
    });
    let manifest_path = output.manifest.clone().or_else(|| {
        a.out.as_deref().map(|o| if results.len() > 1 && !a.compare { o.join("manifest.json") } else { default_manifest_path(o) })
    });
    m.outputs = outputs;
    if let Some(path) = manifest_path {
        m.write(&path)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_replay(path: &Path) -> CmdResult {
    let recorded = RunManifest::load(path)?;
    for input in &recorded.inputs {
        let now = FileRecord::of(Path::new(&input.path))?;
        if now.sha256 != input.sha256 {
            return Err(Failure::check(anyhow!("input {} changed since the manifest was written", input.path)));
        }
    }
    let argv = std::iter::once("sefcc".to_string()).chain(recorded.argv.iter().cloned());
    let cli = Cli::try_parse_from(argv).map_err(|e| anyhow!("manifest argv does not parse: {e}"))?;
    if matches!(cli.command, Command::Replay { .. }) {
        return Err(Failure::usage(anyhow!("a manifest cannot replay another manifest")));
    }
    // a failing validate/certify is still a faithful replay
    let status = match run(cli.command) {
        Ok(_) => None,
        Err(f) if f.code == 1 => Some(f),
        Err(f) => return Err(f),
    };
    let mut mismatched = Vec::new();
    for out in &recorded.outputs {
        let now = FileRecord::of(Path::new(&out.path))?;
        if now.sha256 != out.sha256 {
            mismatched.push(out.path.clone());
        }
    }
    if !mismatched.is_empty() {
        return Err(Failure::check(anyhow!("outputs differ from the manifest: {}", mismatched.join(", "))));
    }
    eprintln!("replayed {}: {} output(s) identical", recorded.subcommand, recorded.outputs.len());
    match status {
        Some(f) => Err(f),
        None => Ok(ExitCode::SUCCESS),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn token_lines() {
        let text = "00 01 00 00\n00 00 00 00\n\n00 00 00 00\n00 00 00 00\n";
        assert_eq!(locate_token(text, 1), 1);
        assert_eq!(locate_token(text, 5), 2);
        assert_eq!(locate_token(text, 9), 4);
        assert_eq!(locate_token(text, 17), 5);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
