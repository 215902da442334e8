//! Command-line front end. Everything goes through [`run`], which writes to
//! the given streams and returns the process exit code.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::certificate::{run_pipeline, BoundRow, PipelineCertificate};
use crate::contfrac::{convergents, Tau};
use crate::error::Error;
use crate::linforms::{compute_bound_chain, Base, Campaign, Sign};
use crate::realnum::PrecisionPolicy;
use crate::reduction::orchestrate::{stage1, stage2, ReductionContext};
use crate::reduction::CampaignReport;
use crate::search::{enumerate, multi_represented, SolutionRecord};

pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const PRECISION: i32 = 3;
    pub const BOUND_DEVIATION: i32 = 4;
    pub const UNRESOLVED: i32 = 5;
}

/// Working precision when none is pinned.
pub const DEFAULT_PRECISION_BITS: u32 = 512;
/// Largest relative excess over a published constant `bound` tolerates.
pub const BOUND_TOLERANCE: f64 = 0.05;

#[derive(Parser, Debug)]
#[command(name = "pillai", version, about = "Double representations c = P_m - F_n: search, bounds and reduction")]
pub struct Cli {
    /// Pin the working precision (bits). Without it the run starts at 512
    /// bits and doubles on ambiguity.
    #[arg(long, global = true, env = "PILLAI_PRECISION_BITS", value_parser = clap::value_parser!(u32).range(64..=1 << 20))]
    pub precision_bits: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate P_m - F_n and list values with several representations.
    Search(SearchArgs),
    /// Continued fraction and convergents of a ratio of logarithms.
    Cf(CfArgs),
    /// Recompute the absolute bound chain next to the published figures.
    Bound(FormatArgs),
    /// Run one reduction campaign and print its report as JSON.
    Reduce(ReduceArgs),
    /// Run the whole pipeline and write a certificate.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SearchFormat {
    Json,
    Csv,
    Table,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TextFormat {
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 189)]
    pub m_max: u64,
    #[arg(long, default_value_t = 300)]
    pub n_max: u64,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    pub min_reps: u64,
    #[arg(long, value_enum, default_value_t = SearchFormat::Table)]
    pub format: SearchFormat,
}

#[derive(Args, Debug)]
pub struct CfArgs {
    #[arg(long, default_value = "delta-over-alpha", value_parser = parse_tau)]
    pub tau: Tau,
    #[arg(long, default_value_t = 110, value_parser = clap::value_parser!(u64).range(1..=100_000))]
    pub terms: u64,
    #[arg(long, value_enum, default_value_t = TextFormat::Text)]
    pub format: TextFormat,
}

#[derive(Args, Debug)]
pub struct FormatArgs {
    #[arg(long, value_enum, default_value_t = TextFormat::Text)]
    pub format: TextFormat,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[arg(long, value_parser = parse_campaign)]
    pub campaign: Campaign,
    /// Both signs when omitted.
    #[arg(long, value_parser = parse_sign)]
    pub sign: Option<Sign>,
    /// Override the derived upper end of the k range.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub k_max: Option<u64>,
    /// Override the derived upper end of the l range.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub l_max: Option<u64>,
    /// Leave out the per-parameter entries.
    #[arg(long)]
    pub summary: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Where to write the certificate.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Re-read a certificate and check its digest instead of running.
    #[arg(long, conflicts_with = "out")]
    pub check: Option<PathBuf>,
}

fn parse_tau(s: &str) -> Result<Tau, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_campaign(s: &str) -> Result<Campaign, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn policy(bits: Option<u32>) -> PrecisionPolicy {
    match bits {
        Some(b) => PrecisionPolicy::fixed(b),
        None => PrecisionPolicy::starting_at(DEFAULT_PRECISION_BITS),
    }
}

fn code_for(e: &Error) -> i32 {
    match e {
        Error::PrecisionExhausted { .. } => exit::PRECISION,
        Error::Reduction { .. } => exit::UNRESOLVED,
        Error::InvalidInput(_) => exit::USAGE,
        _ => exit::FAILURE,
    }
}

/// Parse `args` (program name first) and run the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let res = match &cli.command {
        Command::Search(a) => cmd_search(a, out),
        Command::Cf(a) => cmd_cf(a, cli.precision_bits, out),
        Command::Bound(a) => cmd_bound(a, out),
        Command::Reduce(a) => cmd_reduce(a, cli.precision_bits, out),
        Command::Verify(a) => cmd_verify(a, cli.precision_bits, out),
    };
    match res {
        Ok(code) => code,
        Err((code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

type CmdResult = Result<i32, (i32, String)>;

fn io(e: impl std::fmt::Display) -> (i32, String) {
    (exit::FAILURE, e.to_string())
}

fn fail(e: Error) -> (i32, String) {
    (code_for(&e), e.to_string())
}

pub fn write_records(records: &[SolutionRecord], format: SearchFormat, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        SearchFormat::Json => {
            serde_json::to_writer(&mut *out, records)?;
            writeln!(out)
        }
        SearchFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["c", "pairs"])?;
            for r in records {
                w.write_record([r.c.to_string(), r.pairs_text()])?;
            }
            w.flush()
        }
        SearchFormat::Table => {
            let width = records.iter().map(|r| r.c.to_string().len()).max().unwrap_or(1).max(1);
            writeln!(out, "{:>width$}  pairs", "c")?;
            for r in records {
                writeln!(out, "{:>width$}  {}", r.c.to_string(), r.pairs_text())?;
            }
            Ok(())
        }
    }
}

fn cmd_search(a: &SearchArgs, out: &mut dyn Write) -> CmdResult {
    let map = enumerate(0..=a.m_max, 0..=a.n_max);
    let records = multi_represented(&map, a.min_reps as usize);
    write_records(&records, a.format, out).map_err(io)?;
    Ok(exit::OK)
}

fn cmd_cf(a: &CfArgs, bits: Option<u32>, out: &mut dyn Write) -> CmdResult {
    let terms = a.terms as usize;
    let pq = a.tau.expand(terms, policy(bits)).map_err(fail)?;
    let convs = convergents(&pq);
    let (rp, rq) = a.tau.reference_convergent();
    let published = convs.iter().position(|c| c.p == rp && c.q == rq);
    match a.format {
        TextFormat::Json => {
            let v = serde_json::json!({
                "tau": a.tau.name(),
                "partial_quotients": pq,
                "convergents": convs,
                "published_index": published,
            });
            writeln!(out, "{v}").map_err(io)?;
        }
        TextFormat::Text => {
            let qs: Vec<String> = pq.quotients.iter().map(ToString::to_string).collect();
            let body = match qs.split_first() {
                Some((a0, rest)) if !rest.is_empty() => format!("[{a0}; {}]", rest.join(", ")),
                Some((a0, _)) => format!("[{a0}]"),
                None => "[]".into(),
            };
            writeln!(out, "tau = {}  ({} bits)", a.tau, pq.precision_bits).map_err(io)?;
            writeln!(out, "{body}").map_err(io)?;
            for c in &convs {
                let mark = if Some(c.index) == published { "  <- published" } else { "" };
                writeln!(out, "{}{mark}", c).map_err(io)?;
            }
        }
    }
    if pq.len() < terms {
        return Err((
            exit::PRECISION,
            format!("only {} of {terms} partial quotients certified at {} bits", pq.len(), pq.precision_bits),
        ));
    }
    Ok(exit::OK)
}

fn cmd_bound(a: &FormatArgs, out: &mut dyn Write) -> CmdResult {
    let chain = compute_bound_chain(PrecisionPolicy::default()).map_err(fail)?;
    let rows: Vec<BoundRow> = chain.rows.iter().map(BoundRow::from).collect();
    match a.format {
        TextFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rows).map_err(io)?).map_err(io)?,
        TextFormat::Text => {
            for r in &rows {
                let dev = r.deviation.map_or(String::new(), |d| format!("{:+.2}%", d * 100.0));
                let line =
                    format!("{:<20} {:<40} {:<12} {}", r.key, r.value, r.reference.as_deref().unwrap_or("-"), dev);
                writeln!(out, "{}", line.trim_end()).map_err(io)?;
            }
        }
    }
    let over: Vec<&str> =
        rows.iter().filter(|r| r.deviation.is_some_and(|d| d > BOUND_TOLERANCE)).map(|r| r.key.as_str()).collect();
    if !over.is_empty() {
        return Err((exit::BOUND_DEVIATION, format!("above the published value by more than 5%: {}", over.join(", "))));
    }
    Ok(exit::OK)
}

fn cmd_reduce(a: &ReduceArgs, bits: Option<u32>, out: &mut dyn Write) -> CmdResult {
    let chain = compute_bound_chain(PrecisionPolicy::default()).map_err(fail)?;
    let ctx = ReductionContext::new(&chain, policy(bits)).map_err(fail)?;
    let signs: Vec<Sign> = a.sign.map_or_else(|| vec![Sign::Pos, Sign::Neg], |s| vec![s]);
    let run =
        |c: Campaign, base: Base, k: Option<(u64, u64)>, l: Option<(u64, u64)>| -> Result<Vec<CampaignReport>, Error> {
            signs.iter().map(|&s| ctx.run(&ctx.spec(c, s, base, k, l)?)).collect()
        };
    let reports = (|| -> Result<Vec<CampaignReport>, Error> {
        match a.campaign {
            Campaign::Gamma => {
                let s1 = stage1(&ctx)?;
                Ok(s1.gamma.into_iter().filter(|r| signs.contains(&r.sign)).collect())
            }
            Campaign::Gamma1 => {
                let k = match a.k_max {
                    Some(k) => k,
                    None => stage1(&ctx)?.k_delta - 1,
                };
                run(Campaign::Gamma1, Base::Alpha, Some((1, k)), None)
            }
            Campaign::Gamma2 => {
                let k = match a.k_max {
                    Some(k) => k,
                    None => stage1(&ctx)?.l_alpha - 1,
                };
                run(Campaign::Gamma2, Base::Delta, Some((1, k)), None)
            }
            Campaign::Gamma3 => {
                let (k, l) = match (a.k_max, a.l_max) {
                    (Some(k), Some(l)) => (k, l),
                    (k, l) => {
                        let s2 = stage2(&ctx, &stage1(&ctx)?)?;
                        (k.unwrap_or(s2.n_gap_limit - 1), l.unwrap_or(s2.m_gap_limit - 1))
                    }
                };
                run(Campaign::Gamma3, Base::Delta, Some((1, k)), Some((1, l)))
            }
        }
    })()
    .map_err(fail)?;
    let reports: Vec<CampaignReport> =
        if a.summary { reports.into_iter().map(CampaignReport::without_entries).collect() } else { reports };
    serde_json::to_writer_pretty(&mut *out, &reports).map_err(io)?;
    writeln!(out).map_err(io)?;
    Ok(exit::OK)
}

fn cmd_verify(a: &VerifyArgs, bits: Option<u32>, out: &mut dyn Write) -> CmdResult {
    if let Some(path) = &a.check {
        let text = std::fs::read_to_string(path).map_err(io)?;
        let cert: PipelineCertificate = serde_json::from_str(&text).map_err(io)?;
        let ok = cert.digest_matches().map_err(fail)?;
        writeln!(out, "digest {} {}", cert.digest, if ok { "ok" } else { "MISMATCH" }).map_err(io)?;
        return Ok(if ok && cert.theorem_check.pass { exit::OK } else { exit::FAILURE });
    }
    let cert = run_pipeline(policy(bits)).map_err(|e| (code_for(&e.error), e.to_string()))?;
    let json = serde_json::to_string_pretty(&cert).map_err(io)?;
    if let Some(path) = &a.out {
        std::fs::write(path, format!("{json}\n")).map_err(io)?;
    }
    writeln!(
        out,
        "absolute bound n < {}; reduced to n < {}; search n <= {}, m <= {}: {} values; theorem check {}",
        cert.absolute_bound,
        cert.final_n_bound,
        cert.search.n_cutoff,
        cert.search.m_cutoff,
        cert.search.records.len(),
        if cert.theorem_check.pass { "pass" } else { "FAIL" },
    )
    .map_err(io)?;
    writeln!(out, "digest {}", cert.digest).map_err(io)?;
    if cert.theorem_check.pass {
        Ok(exit::OK)
    } else {
        Err((exit::FAILURE, format!("stage theorem failed: {}", cert.theorem_check.reason)))
    }
}
