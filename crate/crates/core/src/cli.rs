//! Command-line driver: field setup, `u` resolution, per-command reports.
//!
//! Reports go to the output writer one record per line (JSON lines, CSV with
//! a header, or plain text). A one-line JSON summary goes to the diagnostic
//! writer. Exit codes: 0 all checks pass, 1 verification mismatch, 2 usage or
//! configuration error.
//!
//! The spectrum-level CSV layout is fixed:
//! `n,modulus,u,class,epsilon,gamma3,gamma4,omega0,omega1,omega2,omega3,omega4,source,match`.

use std::io::Write;
use std::str::FromStr;

use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;

use crate::census::{CensusMismatch, CensusRunner, SolutionCensus, ZSignature};
use crate::char_sums::{verify_identities, IdentityReport};
use crate::closed_form::{
    classify_u, closed_form_inputs, spectrum_closed_form, u0_non_f3, verify_closed_form, UClassKind,
};
use crate::error::Error;
use crate::field::{FieldCtx, FieldElem};
use crate::ness::{spectrum_bruteforce, FunctionTable, Spectrum};
use crate::sampling::sample_indices;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Brute-force differential spectrum.
    Spectrum,
    /// Full DDT rows.
    Ddt,
    /// Per-pair solution census.
    Census,
    /// Character-sum identities.
    VerifyLemmas,
    /// Census summary: prediction vs. observed count for every pair.
    VerifyPropositions,
    /// Closed-form spectrum vs. brute force.
    VerifyTheorem,
    /// Closed-form parameters and spectrum, no brute force.
    Scan,
}

impl Command {
    pub fn label(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Ddt => "ddt",
            Command::Census => "census",
            Command::VerifyLemmas => "verify-lemmas",
            Command::VerifyPropositions => "verify-propositions",
            Command::VerifyTheorem => "verify-theorem",
            Command::Scan => "scan",
        }
    }

    /// Whether the command only makes sense for `u ∈ U0 \ F3`.
    pub fn requires_domain(self) -> bool {
        !matches!(self, Command::Spectrum | Command::Ddt)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// How the values of `u` are chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum USpec {
    /// Coefficient digits, lowest degree first.
    Explicit(String),
    /// `gen^k`.
    GenPow(u64),
    /// Every `u ∈ U0 \ F3` in enumeration order.
    All,
    /// `sample:N[:seed]`; without a seed the run-level seed is used.
    Sample { count: usize, seed: Option<u64> },
}

impl FromStr for USpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = |reason: &str| Error::Parse {
            text: s.to_string(),
            reason: reason.to_string(),
        };
        let s = s.trim();
        if s == "all" {
            return Ok(USpec::All);
        }
        if let Some(k) = s.strip_prefix("gen^") {
            return k
                .parse()
                .map(USpec::GenPow)
                .map_err(|_| bad("exponent after gen^ must be a nonnegative integer"));
        }
        if let Some(rest) = s.strip_prefix("sample:") {
            let mut parts = rest.split(':');
            let count: usize = parts
                .next()
                .and_then(|c| c.parse().ok())
                .ok_or_else(|| bad("sample size must be a positive integer"))?;
            if count == 0 {
                return Err(bad("sample size must be at least 1"));
            }
            let seed = match parts.next() {
                None => None,
                Some(t) => Some(
                    t.parse()
                        .map_err(|_| bad("seed must be an unsigned integer"))?,
                ),
            };
            if parts.next().is_some() {
                return Err(bad("expected sample:N or sample:N:seed"));
            }
            return Ok(USpec::Sample { count, seed });
        }
        if !s.is_empty() && s.bytes().all(|b| matches!(b, b'0'..=b'2')) {
            return Ok(USpec::Explicit(s.to_string()));
        }
        Err(bad(
            "expected digits in 0..=2, gen^k, all, or sample:N[:seed]",
        ))
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub n: usize,
    pub modulus: Option<String>,
    pub u_spec: USpec,
    pub command: Command,
    pub format: Format,
    pub seed: u64,
    /// Worker threads; `None` uses the rayon default.
    pub jobs: Option<usize>,
}

/// Resolves `spec` to a list of field elements. With `require_domain`,
/// explicit and `gen^k` values outside `U0 \ F3` are rejected.
pub fn resolve_u(
    ctx: &FieldCtx,
    spec: &USpec,
    default_seed: u64,
    require_domain: bool,
) -> Result<Vec<FieldElem>, Error> {
    let single = |u: FieldElem| {
        let class = classify_u(ctx, u);
        if require_domain && class.kind != UClassKind::U0NonF3 {
            return Err(Error::OutOfDomain {
                u: ctx.format_elem(u),
                class: class.kind.label().into(),
            });
        }
        Ok(vec![u])
    };
    match spec {
        USpec::Explicit(text) => single(ctx.parse_elem(text)?),
        USpec::GenPow(k) => single(ctx.pow(ctx.generator(), *k)),
        USpec::All => Ok(u0_non_f3(ctx)),
        USpec::Sample { count, seed } => {
            let pool = u0_non_f3(ctx);
            let picks = sample_indices(pool.len(), *count, seed.unwrap_or(default_seed))
                .ok_or_else(|| Error::Parse {
                    text: format!("sample:{count}"),
                    reason: format!("only {} values of u in U0\\F3", pool.len()),
                })?;
            Ok(picks.into_iter().map(|i| pool[i]).collect())
        }
    }
}

#[derive(Serialize)]
struct SpectrumRow<'a> {
    n: usize,
    modulus: &'a str,
    u: String,
    class: &'static str,
    epsilon: Option<u8>,
    gamma3: Option<i64>,
    gamma4: Option<i64>,
    omega0: u64,
    omega1: u64,
    omega2: u64,
    omega3: u64,
    omega4: u64,
    source: &'static str,
    #[serde(rename = "match")]
    matches: Option<bool>,
}

#[derive(Serialize)]
struct ClosedFormRecord {
    n: usize,
    modulus: String,
    u: String,
    class: &'static str,
    epsilon: u8,
    gamma3: i64,
    gamma4: i64,
    omegas: Vec<u64>,
    source: &'static str,
}

#[derive(Serialize)]
struct DdtRecord {
    n: usize,
    modulus: String,
    u: String,
    a: String,
    row: Vec<u32>,
}

#[derive(Serialize)]
struct DdtCsvRow<'a> {
    n: usize,
    modulus: &'a str,
    u: &'a str,
    a: &'a str,
    b: String,
    delta: u32,
}

#[derive(Serialize)]
struct IdentityLine<'a> {
    u: &'a str,
    identity: &'a str,
    lhs: i64,
    rhs: i64,
    pass: bool,
}

#[derive(Serialize)]
struct IdentityCsvRow<'a> {
    n: usize,
    modulus: &'a str,
    u: &'a str,
    identity: &'a str,
    lhs: i64,
    rhs: i64,
    pass: bool,
}

#[derive(Serialize)]
struct CensusSummaryCsvRow<'a> {
    n: usize,
    modulus: &'a str,
    u: &'a str,
    pairs: u64,
    mismatches: usize,
    ambiguous: usize,
    pass: bool,
}

#[derive(Serialize)]
struct CensusRecord {
    u: String,
    a: String,
    b: String,
    z: String,
    signature: ZSignature,
    pattern: [u8; 4],
    predicted: u8,
    condition: u8,
    observed: u8,
    consistent: bool,
}

#[derive(Serialize)]
struct CensusCsvRow<'a> {
    n: usize,
    modulus: &'a str,
    u: &'a str,
    a: String,
    b: String,
    z: String,
    n1: u8,
    n_i: u8,
    n_ii_iii: u8,
    n_iv: u8,
    predicted: u8,
    condition: u8,
    observed: u8,
    consistent: bool,
}

#[derive(Serialize)]
struct CensusSummaryLine {
    u: String,
    pairs: u64,
    pattern_counts: Vec<([u8; 4], u64)>,
    mismatches: usize,
    ambiguous: usize,
    pass: bool,
}

#[derive(Serialize)]
struct MismatchLine<'a> {
    mismatch: &'a CensusMismatch,
}

#[derive(Serialize)]
struct RunSummary<'a> {
    command: &'static str,
    n: usize,
    modulus: &'a str,
    u_count: usize,
    records: u64,
    failures: u64,
    errors: Vec<String>,
    pass: bool,
}

#[derive(Serialize)]
struct UsageError {
    error: String,
    kind: &'static str,
}

/// Record sink for one of the three output formats.
enum Sink<'w, W: Write> {
    Json(&'w mut W),
    Text(&'w mut W),
    Csv(Box<csv::Writer<&'w mut W>>),
}

impl<'w, W: Write> Sink<'w, W> {
    fn new(format: Format, out: &'w mut W) -> Self {
        match format {
            Format::Json => Sink::Json(out),
            Format::Text => Sink::Text(out),
            Format::Csv => Sink::Csv(Box::new(csv::Writer::from_writer(out))),
        }
    }

    /// Writes `json` as a JSON line, `csv` as a CSV record, or `text` verbatim.
    fn emit<J: Serialize, C: Serialize>(
        &mut self,
        json: &J,
        csv: &C,
        text: &str,
    ) -> std::io::Result<()> {
        match self {
            Sink::Json(w) => {
                serde_json::to_writer(&mut **w, json)?;
                writeln!(w)
            }
            Sink::Text(w) => writeln!(w, "{text}"),
            Sink::Csv(w) => w.serialize(csv).map_err(std::io::Error::other),
        }
    }

    fn finish(self) -> std::io::Result<()> {
        match self {
            Sink::Json(w) | Sink::Text(w) => w.flush(),
            Sink::Csv(mut w) => w.flush(),
        }
    }
}

#[derive(Default)]
struct Tally {
    records: u64,
    failures: u64,
    errors: Vec<String>,
}

impl Tally {
    fn record(&mut self, pass: bool) {
        self.records += 1;
        if !pass {
            self.failures += 1;
        }
    }
}

/// Runs one command, writing records to `out` and the summary (or a usage
/// error) as one JSON line to `diag`. Returns the exit code.
pub fn run<W: Write + Send, D: Write>(config: &RunConfig, out: &mut W, diag: &mut D) -> i32 {
    let usage = |diag: &mut D, e: &dyn std::fmt::Display| {
        let line = UsageError {
            error: e.to_string(),
            kind: "usage",
        };
        let _ = serde_json::to_writer(&mut *diag, &line);
        let _ = writeln!(diag);
        EXIT_USAGE
    };
    let ctx = match &config.modulus {
        Some(m) => FieldCtx::with_modulus_str(config.n, m),
        None => FieldCtx::new(config.n, None),
    };
    let ctx = match ctx {
        Ok(c) => c,
        Err(e) => return usage(diag, &e),
    };
    let us = match resolve_u(
        &ctx,
        &config.u_spec,
        config.seed,
        config.command.requires_domain(),
    ) {
        Ok(us) => us,
        Err(e) => return usage(diag, &e),
    };
    let pool = match config.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new().num_threads(j).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => return usage(diag, &e),
    };

    let outcome = pool.install(|| execute(config, &ctx, &us, out));
    let tally = match outcome {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(diag, "{{\"error\":{:?},\"kind\":\"io\"}}", e.to_string());
            return EXIT_MISMATCH;
        }
    };
    let pass = tally.failures == 0 && tally.errors.is_empty();
    let modulus = ctx.modulus_string();
    let summary = RunSummary {
        command: config.command.label(),
        n: ctx.n(),
        modulus: &modulus,
        u_count: us.len(),
        records: tally.records,
        failures: tally.failures,
        errors: tally.errors,
        pass,
    };
    let _ = serde_json::to_writer(&mut *diag, &summary);
    let _ = writeln!(diag);
    if pass {
        EXIT_PASS
    } else {
        EXIT_MISMATCH
    }
}

fn spectrum_row<'a>(
    ctx: &FieldCtx,
    modulus: &'a str,
    u: FieldElem,
    spectrum: &Spectrum,
    matches: Option<bool>,
) -> SpectrumRow<'a> {
    let class = classify_u(ctx, u);
    let inputs = closed_form_inputs(ctx, u).ok();
    let w = |i: usize| spectrum.omegas.get(i).copied().unwrap_or(0);
    SpectrumRow {
        n: ctx.n(),
        modulus,
        u: ctx.format_elem(u),
        class: class.kind.label(),
        epsilon: inputs.map(|i| i.epsilon),
        gamma3: inputs.map(|i| i.gamma3),
        gamma4: inputs.map(|i| i.gamma4),
        omega0: w(0),
        omega1: w(1),
        omega2: w(2),
        omega3: w(3),
        omega4: w(4),
        source: spectrum.source.label(),
        matches,
    }
}

fn execute<W: Write>(
    config: &RunConfig,
    ctx: &FieldCtx,
    us: &[FieldElem],
    out: &mut W,
) -> std::io::Result<Tally> {
    let mut sink = Sink::new(config.format, out);
    let mut tally = Tally::default();
    let modulus = ctx.modulus_string();
    let q = ctx.q();

    match config.command {
        Command::Spectrum => {
            for &u in us {
                let s = spectrum_bruteforce(ctx, u);
                if config.format == Format::Csv && s.omegas.len() > 5 {
                    tally.errors.push(format!(
                        "u={}: uniformity {} exceeds the five CSV omega columns",
                        ctx.format_elem(u),
                        s.uniformity()
                    ));
                }
                let ok = s.satisfies_sum_identities(q);
                tally.record(ok);
                let row = spectrum_row(ctx, &modulus, u, &s, None);
                let text = format!("u={} {} {:?}", row.u, row.class, s.omegas);
                sink.emit(&s.record(ctx, u), &row, &text)?;
            }
        }
        Command::Ddt => {
            let elems = ctx.enumerate();
            for &u in us {
                let table = FunctionTable::new(ctx, u);
                let us_text = ctx.format_elem(u);
                let rows: Vec<Vec<u32>> = elems[1..]
                    .par_iter()
                    .map(|&a| table.ddt_row(ctx, a))
                    .collect();
                for (&a, row) in elems[1..].iter().zip(rows) {
                    let a_text = ctx.format_elem(a);
                    tally.record(row.iter().sum::<u32>() == q);
                    match &mut sink {
                        Sink::Csv(w) => {
                            for (&b, &delta) in elems.iter().zip(&row) {
                                w.serialize(DdtCsvRow {
                                    n: ctx.n(),
                                    modulus: &modulus,
                                    u: &us_text,
                                    a: &a_text,
                                    b: ctx.format_elem(b),
                                    delta,
                                })
                                .map_err(std::io::Error::other)?;
                            }
                        }
                        _ => {
                            let text = format!(
                                "u={us_text} a={a_text} {}",
                                row.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
                            );
                            let rec = DdtRecord {
                                n: ctx.n(),
                                modulus: modulus.clone(),
                                u: us_text.clone(),
                                a: a_text,
                                row,
                            };
                            sink.emit(&rec, &(), &text)?;
                        }
                    }
                }
            }
        }
        Command::Census => {
            let elems = ctx.enumerate();
            for &u in us {
                let runner = match CensusRunner::new(ctx, u) {
                    Ok(r) => r,
                    Err(e) => {
                        tally.errors.push(e.to_string());
                        continue;
                    }
                };
                let us_text = ctx.format_elem(u);
                let rows: Vec<_> = elems[1..]
                    .par_iter()
                    .map(|&a| (a, runner.census_row(a)))
                    .collect();
                for (a, row) in rows {
                    let row = match row {
                        Ok(r) => r,
                        Err(e) => {
                            tally
                                .errors
                                .push(format!("u={us_text} a={}: {e}", ctx.format_elem(a)));
                            continue;
                        }
                    };
                    for c in row {
                        tally.record(c.consistent());
                        emit_census(&mut sink, ctx, &modulus, &us_text, &c)?;
                    }
                }
            }
        }
        Command::VerifyLemmas => {
            for &u in us {
                let us_text = ctx.format_elem(u);
                let reports = match verify_identities(ctx, u) {
                    Ok(r) => r,
                    Err(e) => {
                        tally.errors.push(e.to_string());
                        continue;
                    }
                };
                for IdentityReport {
                    identity,
                    lhs,
                    rhs,
                    pass,
                } in &reports
                {
                    tally.record(*pass);
                    let line = IdentityLine {
                        u: &us_text,
                        identity,
                        lhs: *lhs,
                        rhs: *rhs,
                        pass: *pass,
                    };
                    let csv_line = IdentityCsvRow {
                        n: ctx.n(),
                        modulus: &modulus,
                        u: &us_text,
                        identity,
                        lhs: *lhs,
                        rhs: *rhs,
                        pass: *pass,
                    };
                    let text = format!(
                        "u={us_text} {identity}: {lhs} vs {rhs} {}",
                        if *pass { "ok" } else { "FAIL" }
                    );
                    sink.emit(&line, &csv_line, &text)?;
                }
            }
        }
        Command::VerifyPropositions => {
            for &u in us {
                let summary = match crate::census::census_all(ctx, u) {
                    Ok(s) => s,
                    Err(e) => {
                        tally.errors.push(e.to_string());
                        continue;
                    }
                };
                let pass = summary.pass();
                tally.record(pass);
                tally.errors.extend(summary.ambiguous.iter().cloned());
                let rec = CensusSummaryLine {
                    u: summary.u.clone(),
                    pairs: summary.pairs,
                    pattern_counts: summary.pattern_counts.clone(),
                    mismatches: summary.mismatches.len(),
                    ambiguous: summary.ambiguous.len(),
                    pass,
                };
                let csv_row = CensusSummaryCsvRow {
                    n: ctx.n(),
                    modulus: &modulus,
                    u: &rec.u,
                    pairs: rec.pairs,
                    mismatches: rec.mismatches,
                    ambiguous: rec.ambiguous,
                    pass: rec.pass,
                };
                let text = format!(
                    "u={} pairs={} mismatches={} ambiguous={} {}",
                    rec.u,
                    rec.pairs,
                    rec.mismatches,
                    rec.ambiguous,
                    if pass { "ok" } else { "FAIL" }
                );
                sink.emit(&rec, &csv_row, &text)?;
                if let Sink::Json(w) = &mut sink {
                    for m in &summary.mismatches {
                        serde_json::to_writer(&mut **w, &MismatchLine { mismatch: m })?;
                        writeln!(w)?;
                    }
                }
            }
        }
        Command::VerifyTheorem => {
            let records: Vec<_> = us
                .par_iter()
                .map(|&u| (u, verify_closed_form(ctx, u)))
                .collect();
            for (u, rec) in records {
                let rec = match rec {
                    Ok(r) => r,
                    Err(e) => {
                        tally.errors.push(format!("u={}: {e}", ctx.format_elem(u)));
                        continue;
                    }
                };
                tally.record(rec.matches);
                match &mut sink {
                    Sink::Csv(w) => {
                        for (omegas, source) in [
                            (&rec.closed_form, crate::ness::Source::ClosedForm),
                            (&rec.brute_force, crate::ness::Source::BruteForce),
                        ] {
                            let s = Spectrum {
                                omegas: omegas.clone(),
                                source,
                            };
                            w.serialize(spectrum_row(ctx, &modulus, u, &s, Some(rec.matches)))
                                .map_err(std::io::Error::other)?;
                        }
                    }
                    _ => {
                        let text = format!(
                            "u={} eps={} gamma3={} gamma4={} closed={:?} brute={:?} {}",
                            rec.u,
                            rec.epsilon,
                            rec.gamma3,
                            rec.gamma4,
                            rec.closed_form,
                            rec.brute_force,
                            if rec.matches { "match" } else { "MISMATCH" }
                        );
                        sink.emit(&rec, &(), &text)?;
                    }
                }
            }
        }
        Command::Scan => {
            for &u in us {
                let inputs = closed_form_inputs(ctx, u);
                let spectrum = spectrum_closed_form(ctx, u);
                let (inputs, spectrum) = match (inputs, spectrum) {
                    (Ok(i), Ok(s)) => (i, s),
                    (Err(e), _) | (_, Err(e)) => {
                        tally.errors.push(format!("u={}: {e}", ctx.format_elem(u)));
                        continue;
                    }
                };
                tally.record(spectrum.satisfies_sum_identities(q));
                let rec = ClosedFormRecord {
                    n: ctx.n(),
                    modulus: modulus.clone(),
                    u: ctx.format_elem(u),
                    class: UClassKind::U0NonF3.label(),
                    epsilon: inputs.epsilon,
                    gamma3: inputs.gamma3,
                    gamma4: inputs.gamma4,
                    omegas: spectrum.omegas.clone(),
                    source: spectrum.source.label(),
                };
                let row = spectrum_row(ctx, &modulus, u, &spectrum, None);
                let text = format!(
                    "u={} eps={} gamma3={} gamma4={} {:?}",
                    rec.u, rec.epsilon, rec.gamma3, rec.gamma4, rec.omegas
                );
                sink.emit(&rec, &row, &text)?;
            }
        }
    }
    sink.finish()?;
    Ok(tally)
}

fn emit_census<W: Write>(
    sink: &mut Sink<'_, W>,
    ctx: &FieldCtx,
    modulus: &str,
    u_text: &str,
    c: &SolutionCensus,
) -> std::io::Result<()> {
    let p = c.pattern();
    let rec = CensusRecord {
        u: u_text.to_string(),
        a: ctx.format_elem(c.a),
        b: ctx.format_elem(c.b),
        z: ctx.format_elem(c.z),
        signature: c.signature,
        pattern: p,
        predicted: c.predicted_total,
        condition: c.condition_total,
        observed: c.observed_total,
        consistent: c.consistent(),
    };
    let row = CensusCsvRow {
        n: ctx.n(),
        modulus,
        u: u_text,
        a: rec.a.clone(),
        b: rec.b.clone(),
        z: rec.z.clone(),
        n1: p[0],
        n_i: p[1],
        n_ii_iii: p[2],
        n_iv: p[3],
        predicted: rec.predicted,
        condition: rec.condition,
        observed: rec.observed,
        consistent: rec.consistent,
    };
    let text = format!(
        "u={u_text} a={} b={} pattern={:?} predicted={} observed={} {}",
        rec.a,
        rec.b,
        p,
        rec.predicted,
        rec.observed,
        if rec.consistent { "ok" } else { "FAIL" }
    );
    sink.emit(&rec, &row, &text)
}
