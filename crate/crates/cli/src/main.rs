//! `k4e`: enumerate, classify and analyze (K4-e)-designs from the command line.

use std::collections::BTreeSet;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use k4e_core::audit::{audit, AuditReport};
use k4e_core::certificates::{verify_certificates, CertificateFile, CertificateReport};
use k4e_core::classify::{enumerate_classes, ClassifyOptions, DesignClass, DEFAULT_MAX_ORDER};
use k4e_core::parallel::map_units;
use k4e_core::spectrum::{compute_spectrum, reference_adm, reference_j_sets, SpectrumOptions, SpectrumResult};
use k4e_core::{admissible_order, Design, LabeledSearch, Strategy, SubtreeSearch};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "k4e", version, about = "Enumerate, classify and analyze (K4-e)-designs")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Order of the designs.
    #[arg(long, global = true, env = "K4E_ORDER", value_parser = parse_order)]
    order: Option<usize>,
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true, env = "K4E_JOBS", value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,
    /// Output file (a directory for `export`); defaults to stdout.
    #[arg(long, global = true, env = "K4E_OUTPUT")]
    output: Option<PathBuf>,
    #[arg(long, global = true, env = "K4E_FORMAT", value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Stream every labeled design as NDJSON (or CSV rows).
    Enumerate {
        /// Progress file of completed work units; rerunning with it continues
        /// an interrupted run.
        #[arg(long, env = "K4E_RESUME")]
        resume: Option<PathBuf>,
    },
    /// Isomorphism classes with automorphism group orders.
    Classify,
    /// Structural checks over every labeled design.
    Analyze,
    /// Achieved (s,t) pairs with witnesses and the gap to the envelope.
    Spectrum {
        /// Visit every relabeling instead of one per automorphism coset.
        #[arg(long, env = "K4E_FULL_SWEEP")]
        full_sweep: bool,
    },
    /// The admissible (s,t) envelope from the reference J and J_T sets.
    Adm,
    /// Replay permutation certificates.
    Verify {
        /// Certificate file; defaults to the bundled set.
        #[arg(long, env = "K4E_CERTIFICATES")]
        certificates: Option<PathBuf>,
    },
    /// Write every report for an order into the output directory.
    Export {
        #[arg(long, env = "K4E_FULL_SWEEP")]
        full_sweep: bool,
    },
}

fn parse_order(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    if !admissible_order(v) {
        return Err(format!("{v} is not an admissible order (v ≡ 0 or 1 mod 5, v ≥ 6)"));
    }
    if v > DEFAULT_MAX_ORDER {
        return Err(format!("orders above {DEFAULT_MAX_ORDER} are out of reach"));
    }
    Ok(v)
}

/// A run that finished but found something wrong.
#[derive(Debug, Serialize)]
struct Failure {
    command: &'static str,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn new(command: &'static str, kind: &'static str, message: impl Into<String>) -> Self {
        Failure {
            command,
            kind,
            message: message.into(),
        }
    }
}

type Outcome = Result<(), Failure>;

struct Ctx {
    order: usize,
    jobs: usize,
    output: Option<PathBuf>,
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let order = match (&cli.command, cli.global.order) {
        (Command::Verify { certificates: Some(_) }, o) => o.unwrap_or(0),
        (_, Some(v)) => v,
        (_, None) => clap::Error::raw(clap::error::ErrorKind::MissingRequiredArgument, "--order is required\n").exit(),
    };
    let ctx = Ctx {
        order,
        jobs: cli.global.jobs.map_or(0, usize::from),
        output: cli.global.output,
        format: cli.global.format,
    };
    let outcome = match cli.command {
        Command::Enumerate { resume } => enumerate(&ctx, resume.as_deref()),
        Command::Classify => classify(&ctx).and_then(|c| emit(&ctx, &ClassReport::new(ctx.order, c))),
        Command::Analyze => analyze(&ctx).and_then(|r| emit(&ctx, &r)),
        Command::Spectrum { full_sweep } => spectrum(&ctx, full_sweep).and_then(|r| emit(&ctx, &r)),
        Command::Adm => adm(&ctx).and_then(|r| emit(&ctx, &r)),
        Command::Verify { certificates } => verify(&ctx, certificates.as_deref()).and_then(|r| emit(&ctx, &r)),
        Command::Export { full_sweep } => export(&ctx, full_sweep),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(mut f) => {
            f.command = name;
            eprintln!("{}", serde_json::to_string(&f).expect("failure serializes"));
            ExitCode::from(1)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Enumerate { .. } => "enumerate",
        Command::Classify => "classify",
        Command::Analyze => "analyze",
        Command::Spectrum { .. } => "spectrum",
        Command::Adm => "adm",
        Command::Verify { .. } => "verify",
        Command::Export { .. } => "export",
    }
}

fn io_failure(e: io::Error) -> Failure {
    Failure::new("", "io", e.to_string())
}

fn core_failure(e: k4e_core::Error) -> Failure {
    Failure::new("", "computation", e.to_string())
}

/// Reports that render as JSON or CSV.
trait Report: Serialize {
    /// `(header, rows)`.
    fn csv(&self) -> (Vec<&'static str>, Vec<Vec<String>>);

    /// A description of what failed, if anything.
    fn failure(&self) -> Option<String> {
        None
    }
}

fn render(format: Format, report: &impl Report) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("reports serialize") + "\n",
        Format::Csv => {
            let (header, rows) = report.csv();
            let mut out = header.join(",") + "\n";
            for row in rows {
                out += &row.join(",");
                out.push('\n');
            }
            out
        }
    }
}

/// Writes the report, then fails if it records a failure.
fn emit(ctx: &Ctx, report: &impl Report) -> Outcome {
    let text = render(ctx.format, report);
    match &ctx.output {
        Some(path) => fs::write(path, text).map_err(io_failure)?,
        None => io::stdout().write_all(text.as_bytes()).map_err(io_failure)?,
    }
    match report.failure() {
        Some(msg) => Err(Failure::new("", "verification", msg)),
        None => Ok(()),
    }
}

fn blocks_cell(d: &Design) -> String {
    let parts: Vec<String> = d.blocks().iter().map(|b| b.to_string()).collect();
    format!("\"{}\"", parts.join(" "))
}

fn enumerate(ctx: &Ctx, resume: Option<&Path>) -> Outcome {
    let search = LabeledSearch::new(ctx.order, Strategy::default()).map_err(core_failure)?;
    // progress lines are "<unit> <output length after it>"; units complete in order
    let done: Vec<(usize, u64)> = match resume {
        Some(p) if p.exists() => BufReader::new(File::open(p).map_err(io_failure)?)
            .lines()
            .map(|line| {
                let line = line.map_err(io_failure)?;
                let mut it = line.split_whitespace().map(str::parse::<u64>);
                match (it.next(), it.next()) {
                    (Some(Ok(u)), Some(Ok(off))) => Ok((u as usize, off)),
                    _ => Err(Failure::new("", "resume", format!("malformed progress line {line:?}"))),
                }
            })
            .collect::<Result<_, _>>()?,
        _ => Vec::new(),
    };
    if done.iter().enumerate().any(|(k, &(u, _))| u != k) {
        return Err(Failure::new(
            "",
            "resume",
            "progress file is not a prefix of the unit order",
        ));
    }
    let mut out: Box<dyn Write> = match &ctx.output {
        Some(path) => {
            let file = OpenOptions::new()
                .create(true)
                .write(true)
                .truncate(false)
                .open(path)
                .map_err(io_failure)?;
            let keep = done.last().map_or(0, |&(_, off)| off);
            if !done.is_empty() && file.metadata().map_err(io_failure)?.len() < keep {
                return Err(Failure::new(
                    "",
                    "resume",
                    "output is shorter than the progress file records",
                ));
            }
            file.set_len(keep).map_err(io_failure)?;
            let mut file = file;
            io::Seek::seek(&mut file, io::SeekFrom::Start(keep)).map_err(io_failure)?;
            Box::new(BufWriter::new(file))
        }
        None if !done.is_empty() => {
            return Err(Failure::new("", "resume", "resuming needs --output"));
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let mut progress = match resume {
        Some(p) => Some(
            OpenOptions::new()
                .create(true)
                .append(true)
                .open(p)
                .map_err(io_failure)?,
        ),
        None => None,
    };
    let mut written = done.last().map_or(0, |&(_, off)| off);
    if ctx.format == Format::Csv && done.is_empty() {
        let header = "order,blocks\n";
        out.write_all(header.as_bytes()).map_err(io_failure)?;
        written += header.len() as u64;
    }

    let pending: Vec<usize> = (done.len()..search.num_subtrees()).collect();
    let batch = rayon::current_num_threads().max(ctx.jobs).max(1);
    for chunk in pending.chunks(batch) {
        let texts = map_units(ctx.jobs, chunk, |u| {
            let mut s = String::new();
            search.visit_subtree(u, &mut |d| {
                match ctx.format {
                    Format::Json => s += &serde_json::to_string(&d.to_record()).expect("designs serialize"),
                    Format::Csv => s += &format!("{},{}", d.order(), blocks_cell(d)),
                }
                s.push('\n');
            });
            s
        });
        for (&u, text) in chunk.iter().zip(texts) {
            out.write_all(text.as_bytes()).map_err(io_failure)?;
            written += text.len() as u64;
            if let Some(p) = progress.as_mut() {
                out.flush().map_err(io_failure)?;
                writeln!(p, "{u} {written}").map_err(io_failure)?;
            }
        }
    }
    out.flush().map_err(io_failure)
}

fn classify(ctx: &Ctx) -> Result<Vec<DesignClass>, Failure> {
    let opts = ClassifyOptions {
        jobs: ctx.jobs,
        ..Default::default()
    };
    enumerate_classes(ctx.order, &opts).map_err(core_failure)
}

#[derive(Serialize)]
struct ClassReport {
    order: usize,
    class_count: usize,
    labeled_total: u64,
    classes: Vec<DesignClass>,
}

impl ClassReport {
    fn new(order: usize, classes: Vec<DesignClass>) -> Self {
        ClassReport {
            order,
            class_count: classes.len(),
            labeled_total: classes.iter().map(|c| c.labeled_count).sum(),
            classes,
        }
    }
}

impl Report for ClassReport {
    fn csv(&self) -> (Vec<&'static str>, Vec<Vec<String>>) {
        let rows = self
            .classes
            .iter()
            .enumerate()
            .map(|(i, c)| {
                vec![
                    i.to_string(),
                    c.aut_order.to_string(),
                    c.labeled_count.to_string(),
                    blocks_cell(&c.representative),
                ]
            })
            .collect();
        (vec!["class", "aut_order", "labeled_count", "blocks"], rows)
    }
}

fn analyze(ctx: &Ctx) -> Result<AuditReport, Failure> {
    audit(ctx.order, ctx.jobs).map_err(core_failure)
}

impl Report for AuditReport {
    fn csv(&self) -> (Vec<&'static str>, Vec<Vec<String>>) {
        let rows = self
            .checks
            .iter()
            .map(|c| vec![c.name.clone(), c.checked.to_string(), c.violation_count.to_string()])
            .collect();
        (vec!["check", "checked", "violations"], rows)
    }

    fn failure(&self) -> Option<String> {
        let bad: Vec<String> = self
            .checks
            .iter()
            .filter(|c| c.violation_count > 0)
            .map(|c| format!("{} ({} violations)", c.name, c.violation_count))
            .collect();
        (!bad.is_empty()).then(|| bad.join(", "))
    }
}

#[derive(Serialize)]
struct SpectrumReport {
    #[serde(flatten)]
    result: SpectrumResult,
    j: BTreeSet<usize>,
    j_t: BTreeSet<usize>,
    reference_j: BTreeSet<usize>,
    reference_j_t: BTreeSet<usize>,
    adm_size: usize,
}

fn spectrum(ctx: &Ctx, full_sweep: bool) -> Result<SpectrumReport, Failure> {
    let reps: Vec<Design> = classify(ctx)?.into_iter().map(|c| c.representative).collect();
    let opts = SpectrumOptions {
        jobs: ctx.jobs,
        full_sweep,
    };
    let result = compute_spectrum(ctx.order, &reps, &opts).map_err(core_failure)?;
    let (reference_j, reference_j_t) = reference_j_sets(ctx.order).map_err(core_failure)?;
    Ok(SpectrumReport {
        j: result.j(),
        j_t: result.j_t(),
        reference_j,
        reference_j_t,
        adm_size: reference_adm(ctx.order).map_err(core_failure)?.pairs.len(),
        result,
    })
}

impl Report for SpectrumReport {
    fn csv(&self) -> (Vec<&'static str>, Vec<Vec<String>>) {
        let rows = self
            .result
            .achieved
            .iter()
            .map(|p| {
                vec![
                    p.s.to_string(),
                    p.t.to_string(),
                    p.i.to_string(),
                    p.j.to_string(),
                    format!("\"{}\"", p.perm),
                ]
            })
            .collect();
        (vec!["s", "t", "i", "j", "perm"], rows)
    }

    fn failure(&self) -> Option<String> {
        if self.j != self.reference_j {
            Some(format!("J = {:?}, reference {:?}", self.j, self.reference_j))
        } else if self.j_t != self.reference_j_t {
            Some(format!("J_T = {:?}, reference {:?}", self.j_t, self.reference_j_t))
        } else {
            None
        }
    }
}

#[derive(Serialize)]
struct AdmReport {
    order: usize,
    j: BTreeSet<usize>,
    j_t: BTreeSet<usize>,
    pairs: BTreeSet<(usize, usize)>,
}

fn adm(ctx: &Ctx) -> Result<AdmReport, Failure> {
    let (j, j_t) = reference_j_sets(ctx.order).map_err(core_failure)?;
    let env = reference_adm(ctx.order).map_err(core_failure)?;
    Ok(AdmReport {
        order: ctx.order,
        j,
        j_t,
        pairs: env.pairs,
    })
}

impl Report for AdmReport {
    fn csv(&self) -> (Vec<&'static str>, Vec<Vec<String>>) {
        let rows = self
            .pairs
            .iter()
            .map(|(s, t)| vec![s.to_string(), t.to_string()])
            .collect();
        (vec!["s", "t"], rows)
    }
}

#[derive(Serialize)]
struct VerifyReport {
    reports: Vec<CertificateReport>,
}

fn verify(ctx: &Ctx, path: Option<&Path>) -> Result<VerifyReport, Failure> {
    let file = match path {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(io_failure)?;
            CertificateFile::from_json(&text).map_err(core_failure)?
        }
        None => CertificateFile::bundled(),
    };
    let sets: Vec<_> = file
        .sets
        .iter()
        .filter(|s| ctx.order == 0 || s.order == ctx.order)
        .collect();
    if sets.is_empty() {
        return Err(Failure::new(
            "",
            "input",
            format!("no certificates for order {}", ctx.order),
        ));
    }
    let reports = sets
        .into_iter()
        .map(verify_certificates)
        .collect::<Result<_, _>>()
        .map_err(core_failure)?;
    Ok(VerifyReport { reports })
}

impl Report for VerifyReport {
    fn csv(&self) -> (Vec<&'static str>, Vec<Vec<String>>) {
        let rows = self
            .reports
            .iter()
            .flat_map(|r| {
                r.outcomes.iter().map(move |o| {
                    vec![
                        r.order.to_string(),
                        o.label.0.to_string(),
                        o.label.1.to_string(),
                        format!("\"{}\"", o.perm),
                        o.source.clone(),
                        o.target.clone(),
                        o.observed.0.to_string(),
                        o.observed.1.to_string(),
                        if o.passed { "pass" } else { "fail" }.to_string(),
                    ]
                })
            })
            .collect();
        (
            vec![
                "order",
                "s",
                "t",
                "perm",
                "source",
                "target",
                "observed_s",
                "observed_t",
                "result",
            ],
            rows,
        )
    }

    fn failure(&self) -> Option<String> {
        let failed: usize = self.reports.iter().map(|r| r.checked - r.passed).sum();
        (failed > 0).then(|| format!("{failed} certificates do not reproduce their label"))
    }
}

fn export(ctx: &Ctx, full_sweep: bool) -> Outcome {
    let dir = ctx
        .output
        .clone()
        .ok_or_else(|| Failure::new("", "input", "export needs --output <directory>"))?;
    fs::create_dir_all(&dir).map_err(io_failure)?;
    let ext = match ctx.format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    let write = |name: &str, report: &dyn Fn() -> String| {
        fs::write(dir.join(format!("{name}.{ext}")), report()).map_err(io_failure)
    };
    let mut failures = Vec::new();
    let mut note = |r: Option<String>, what: &str| {
        if let Some(msg) = r {
            failures.push(format!("{what}: {msg}"));
        }
    };

    let classes = ClassReport::new(ctx.order, classify(ctx)?);
    write("classes", &|| render(ctx.format, &classes))?;
    let analysis = analyze(ctx)?;
    write("analysis", &|| render(ctx.format, &analysis))?;
    note(analysis.failure(), "analysis");
    let adm_report = adm(ctx)?;
    write("adm", &|| render(ctx.format, &adm_report))?;
    let spectrum_report = spectrum(ctx, full_sweep)?;
    write("spectrum", &|| render(ctx.format, &spectrum_report))?;
    note(spectrum_report.failure(), "spectrum");
    let certs = verify(ctx, None)?;
    write("certificates", &|| render(ctx.format, &certs))?;
    note(certs.failure(), "certificates");

    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::new("", "verification", failures.join("; ")))
    }
}
