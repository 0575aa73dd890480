//! Run configuration, report documents and their serialized forms.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::par::{map_ordered, ExecMode};
use crate::profile::MAX_PRECISION_BITS;
use crate::quadrature::QuadratureSpec;
use crate::scalar::ExactScalar;
use crate::suite::{
    build_named, coefficient_suite, flat_report, integral_table, integrals_reports, pohozaev_flat_check, scan_b,
    structural_checks, sym_reports, verify_pde, verify_pde_sweep, NamedId, Params, Status, SuiteError, SuiteOptions,
    VerificationReport,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Fixed CSV header for report rows.
pub const CSV_HEADER: [&str; 6] = ["lemma_id", "expected", "computed_exact", "computed_numeric", "rel_err", "status"];

/// Report order of `verify --all`, also the ids accepted by `verify --lemma`.
pub const LEMMA_IDS: [&str; 41] = [
    "ProbBubble",
    "Sym1",
    "Sym2",
    "Sym3",
    "Sym4",
    "Sym5",
    "t-integrali",
    "Iam",
    "poho-flat",
    "gradvq",
    "Uvq",
    "dervq",
    "Phitilda2",
    "Phitilda1",
    "Phi1e2",
    "Phi1-cross",
    "A-profile",
    "AdA-1",
    "A2-1",
    "35A-1",
    "stimafinalegamma",
    "pohofinale7",
    "AdA8",
    "AA8",
    "finale8",
    "bracket8",
    "stimafinalegamma8",
    "pohofinale8",
    "A1-1",
    "A2+A3-1",
    "A4-1",
    "rn-div-cancel",
    "R(UU)",
    "R(udelta)",
    "pohofinale6",
    "log-regression",
    "Phi0",
    "Phi1",
    "Phi2",
    "Phitilda0",
    "beta",
];

/// Parameter values swept for every free constant of a closed form.
pub fn sweep_values() -> Vec<ExactScalar> {
    vec![ExactScalar::int(0), ExactScalar::int(1), ExactScalar::int(-1), ExactScalar::ratio(3, 2), ExactScalar::int(-2)]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = RunError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(RunError::Usage(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "name")]
pub enum Command {
    VerifyAll,
    VerifyLemma { id: String },
    TableIntegrals,
    ScanB { grid: Vec<ExactScalar> },
    Pohozaev { n: u32, r: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub n: Option<u32>,
    pub b: ExactScalar,
    pub deltas: Vec<ExactScalar>,
    pub tol: f64,
    pub seed: u64,
    pub format: Format,
    pub output: Option<String>,
    pub precision_bits: u32,
    pub exec: ExecMode,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        let d = SuiteOptions::default();
        Self {
            command,
            n: None,
            b: d.b,
            deltas: d.deltas,
            tol: d.tol,
            seed: d.seed,
            format: Format::Json,
            output: None,
            precision_bits: MAX_PRECISION_BITS,
            exec: ExecMode::Parallel,
        }
    }

    /// Rejects anything that would fail only after computing.
    pub fn validate(&self) -> Result<(), RunError> {
        let usage = |m: String| Err(RunError::Usage(m));
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return usage(format!("--tol must lie in (0, 1), got {}", self.tol));
        }
        if self.precision_bits == 0 || self.precision_bits > MAX_PRECISION_BITS {
            return usage(format!("precision of {} bits is not available (1..={MAX_PRECISION_BITS})", self.precision_bits));
        }
        if let Some(n) = self.n {
            if !(5..=8).contains(&n) {
                return usage(format!("--n must be one of 5, 6, 7, 8, got {n}"));
            }
        }
        if self.deltas.is_empty() {
            return usage("--delta needs at least one value".into());
        }
        for (i, d) in self.deltas.iter().enumerate() {
            if !(d.is_positive() && *d < ExactScalar::one()) {
                return usage(format!("--delta values must lie in (0, 1), got {d}"));
            }
            if self.deltas[..i].contains(d) {
                return usage(format!("--delta value {d} repeated"));
            }
        }
        match &self.command {
            Command::VerifyLemma { id } if !LEMMA_IDS.contains(&id.as_str()) => usage(format!("unknown lemma id {id:?}")),
            Command::ScanB { grid } if grid.is_empty() => usage("--grid needs at least one value".into()),
            Command::Pohozaev { n, r } => {
                if *n < 3 {
                    return usage(format!("--n must be at least 3, got {n}"));
                }
                if !(r.is_finite() && *r > 0.0) {
                    return usage(format!("--r must be positive, got {r}"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn suite_options(&self) -> SuiteOptions {
        let mut quad = QuadratureSpec::default().with_exec(self.exec);
        quad.precision_bits = self.precision_bits;
        SuiteOptions { tol: self.tol, seed: self.seed, b: self.b.clone(), deltas: self.deltas.clone(), quad, ..SuiteOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub discrepancy_with_paper: usize,
}

impl Summary {
    pub fn tally(reports: &[VerificationReport]) -> Self {
        let count = |s| reports.iter().filter(|r| r.status == s).count();
        Self {
            total: reports.len(),
            pass: count(Status::Pass),
            fail: count(Status::Fail),
            discrepancy_with_paper: count(Status::DiscrepancyWithPaper),
        }
    }
}

/// Plain rectangular table of strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool_version: String,
    pub config: RunConfig,
    pub reports: Vec<VerificationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
    pub summary: Summary,
}

impl ReportDocument {
    pub fn new(config: RunConfig, reports: Vec<VerificationReport>, table: Option<Table>) -> Self {
        let summary = Summary::tally(&reports);
        Self { tool_version: TOOL_VERSION.to_string(), config, reports, table, summary }
    }

    pub fn exit_code(&self) -> i32 {
        exit_code(self.reports.iter().map(|r| r.status))
    }
}

/// 0 when everything passes, 1 on any failure, 3 on discrepancies without failures.
pub fn exit_code<I: IntoIterator<Item = Status>>(statuses: I) -> i32 {
    let (mut fail, mut disc) = (false, false);
    for s in statuses {
        match s {
            Status::Fail => fail = true,
            Status::DiscrepancyWithPaper => disc = true,
            Status::Pass => {}
        }
    }
    if fail {
        1
    } else if disc {
        3
    } else {
        0
    }
}

/// Unit of work of `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Job {
    Pde(&'static str, u32),
    Sym(u32),
    Integrals,
    PohoFlat(u32, u32),
    Structural(u32),
    Coefficients(u32),
}

const PDE_DIMS: [(&str, &[u32]); 9] = [
    ("ProbBubble", &[6, 7, 8]),
    ("Phi0", &[5, 7, 8]),
    ("Phi1", &[5, 7, 8]),
    ("Phi2", &[5, 7, 8]),
    ("Phitilda0", &[5, 7, 8]),
    ("beta", &[5, 7]),
    ("Phitilda1", &[5, 7, 8]),
    ("Phitilda2", &[5, 7, 8]),
    ("Phi1e2", &[5, 6, 7, 8]),
];

const COEFFICIENT_IDS: [(u32, &[&str]); 3] = [
    (7, &["A-profile", "AdA-1", "A2-1", "35A-1", "stimafinalegamma", "pohofinale7"]),
    (8, &["AdA8", "AA8", "finale8", "bracket8", "stimafinalegamma8", "pohofinale8"]),
    (6, &["A1-1", "A2+A3-1", "A4-1", "rn-div-cancel", "R(UU)", "R(udelta)", "pohofinale6", "log-regression"]),
];

impl Job {
    fn n(self) -> Option<u32> {
        match self {
            Job::Pde(_, n) | Job::Sym(n) | Job::PohoFlat(n, _) | Job::Structural(n) | Job::Coefficients(n) => Some(n),
            Job::Integrals => None,
        }
    }

    fn label(self) -> String {
        match self {
            Job::Pde(id, _) => id.to_string(),
            Job::Sym(_) => "Sym1".into(),
            Job::Integrals => "Iam".into(),
            Job::PohoFlat(..) => "poho-flat".into(),
            Job::Structural(_) => "gradvq".into(),
            Job::Coefficients(n) => COEFFICIENT_IDS.iter().find(|c| c.0 == n).map_or("", |c| c.1[0]).to_string(),
        }
    }

    /// Whether the job can produce reports under `id`.
    fn covers(self, id: &str) -> bool {
        match self {
            Job::Pde(l, _) => l == id,
            Job::Sym(_) => id.starts_with("Sym"),
            Job::Integrals => id == "t-integrali" || id == "Iam",
            Job::PohoFlat(..) => id == "poho-flat",
            Job::Structural(_) => ["gradvq", "Uvq", "dervq", "Phi1-cross"].contains(&id),
            Job::Coefficients(n) => COEFFICIENT_IDS.iter().any(|c| c.0 == n && c.1.contains(&id)),
        }
    }

    fn run(self, opts: &SuiteOptions) -> Result<Vec<VerificationReport>, SuiteError> {
        match self {
            Job::Pde(id, n) => pde_job(id, n, opts),
            Job::Sym(n) => sym_reports(n, opts),
            Job::Integrals => integrals_reports(opts),
            Job::PohoFlat(n, r) => Ok(vec![flat_report(&pohozaev_flat_check(n, r as f64, opts)?)]),
            Job::Structural(n) => structural_checks(n, opts),
            Job::Coefficients(n) => coefficient_suite(n, opts),
        }
    }
}

fn all_jobs() -> Vec<Job> {
    let mut jobs = Vec::new();
    for (id, dims) in PDE_DIMS {
        jobs.extend(dims.iter().map(|&n| Job::Pde(id, n)));
    }
    jobs.extend([6, 7, 8].map(Job::Sym));
    jobs.push(Job::Integrals);
    for n in [6, 7, 8] {
        jobs.extend([1, 2].map(|r| Job::PohoFlat(n, r)));
    }
    jobs.extend([6, 7, 8].map(Job::Structural));
    jobs.extend([7, 8, 6].map(Job::Coefficients));
    jobs
}

fn pde_job(lemma: &str, n: u32, opts: &SuiteOptions) -> Result<Vec<VerificationReport>, SuiteError> {
    let values = sweep_values();
    let id = match lemma {
        "Phi1e2" => {
            let mut out = Vec::new();
            for id in [NamedId::PhiTilde1, NamedId::PhiTilde2] {
                let mut r = verify_pde(&build_named(id, n, &Params::new())?, opts)?;
                r.lemma_id = "Phi1e2".into();
                r.case = format!("{}, {}", id.name(), r.case);
                out.push(r);
            }
            return Ok(out);
        }
        "ProbBubble" => NamedId::U,
        "Phitilda0" => NamedId::PhiTilde0,
        "Phitilda1" => NamedId::PhiTilde1,
        "Phitilda2" => NamedId::PhiTilde2,
        "beta" => NamedId::BetaKL,
        other => other.parse()?,
    };
    Ok(vec![verify_pde_sweep(id, n, id.params(), &values, opts)?])
}

fn order_of(id: &str) -> usize {
    LEMMA_IDS.iter().position(|l| *l == id).unwrap_or(LEMMA_IDS.len())
}

fn error_report(job: Job, e: &SuiteError) -> VerificationReport {
    let case = job.n().map_or_else(String::new, |n| format!("n={n}"));
    VerificationReport::new(&job.label(), case, job.n(), "")
        .status(Status::Fail)
        .note(format!("not computed: {e}"))
}

fn verify(config: &RunConfig, only: Option<&str>) -> Vec<VerificationReport> {
    let opts = config.suite_options();
    let jobs: Vec<Job> = all_jobs()
        .into_iter()
        .filter(|j| config.n.is_none() || j.n().is_none() || j.n() == config.n)
        .filter(|j| only.is_none_or(|id| j.covers(id)))
        .collect();
    let results = map_ordered(config.exec, &jobs, |j| j.run(&opts));
    let mut reports: Vec<VerificationReport> = jobs
        .iter()
        .zip(results)
        .flat_map(|(j, r)| match r {
            Ok(v) => v,
            Err(e) => vec![error_report(*j, &e)],
        })
        .filter(|r| r.matches_n(config.n))
        .filter(|r| only.is_none_or(|id| r.lemma_id == id))
        .collect();
    reports.sort_by_key(|r| order_of(&r.lemma_id));
    reports
}

fn sign_text(s: i32) -> &'static str {
    match s.signum() {
        1 => "+",
        -1 => "-",
        _ => "0",
    }
}

fn scan(grid: &[ExactScalar]) -> (Vec<VerificationReport>, Option<Table>) {
    let res = match scan_b(grid) {
        Ok(r) => r,
        Err(e) => {
            let r = VerificationReport::new("scan-b", "", Some(8), "").status(Status::Fail).note(format!("not computed: {e}"));
            return (vec![r], None);
        }
    };
    let rows = res.rows.iter().map(|r| vec![r.b.to_string(), r.bracket.to_string(), sign_text(r.sign).to_string()]).collect();
    let table = Table { columns: vec!["b".into(), "bracket".into(), "sign".into()], rows };
    let roots = res.roots.iter().map(|x| format!("{x:.12}")).collect::<Vec<_>>().join(", ");
    let signs: String = res.rows.iter().map(|r| sign_text(r.sign)).collect::<Vec<_>>().join(",");
    let expected = ExactScalar::ratio(-50, 21);
    let mut r = VerificationReport::new("scan-b", format!("{} grid points", grid.len()), Some(8), "vertex of the n = 8 bracket")
        .expect(expected.to_string(), crate::suite::Provenance::Derived)
        .exact(res.vertex_b.to_string())
        .note(format!("bracket {}", res.bracket))
        .note(format!("value at vertex {}", res.vertex_value))
        .note(format!("roots {roots}"))
        .note(format!("signs {signs}"));
    if res.vertex_b != expected {
        r = r.status(Status::Fail);
    }
    (vec![r], Some(table))
}

fn integral_rows() -> Result<Table, SuiteError> {
    let rows = integral_table(12, 12)?
        .into_iter()
        .map(|r| vec![r.m, r.alpha.to_string(), r.canonical_coeff.to_string(), r.base, format!("{:e}", r.value)])
        .collect();
    let columns = ["m", "alpha", "canonical_coeff", "canonical_base", "numeric_value"].map(String::from).to_vec();
    Ok(Table { columns, rows })
}

/// Outcome of a run: the exit code and the document to emit.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub document: ReportDocument,
}

/// Validates `config`, runs the selected command and assembles the document.
pub fn run(config: &RunConfig) -> Result<RunOutcome, RunError> {
    config.validate()?;
    let (reports, table) = match &config.command {
        Command::VerifyAll => (verify(config, None), None),
        Command::VerifyLemma { id } => (verify(config, Some(id)), None),
        Command::TableIntegrals => match integral_rows() {
            Ok(t) => (Vec::new(), Some(t)),
            Err(e) => (vec![VerificationReport::new("Iam", "", None, "").status(Status::Fail).note(e.to_string())], None),
        },
        Command::ScanB { grid } => scan(grid),
        Command::Pohozaev { n, r } => {
            let opts = config.suite_options();
            let rep = match pohozaev_flat_check(*n, *r, &opts) {
                Ok(c) => flat_report(&c),
                Err(e) => VerificationReport::new("poho-flat", format!("n={n}, r={r}"), Some(*n), "")
                    .status(Status::Fail)
                    .note(format!("not computed: {e}")),
            };
            (vec![rep], None)
        }
    };
    let document = ReportDocument::new(config.clone(), reports, table);
    Ok(RunOutcome { exit_code: document.exit_code(), document })
}

fn opt_num(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| format!("{x:e}"))
}

/// Serializes a document. CSV carries the table when there is one and the report rows otherwise.
pub fn emit(doc: &ReportDocument, format: Format) -> Result<Vec<u8>, RunError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).map_err(|e| RunError::Io(e.to_string()))?;
            s.push('\n');
            Ok(s.into_bytes())
        }
        Format::Csv => emit_csv(doc),
        Format::Text => Ok(emit_text(doc).into_bytes()),
    }
}

/// Reads back a JSON document written by [`emit`].
pub fn parse_json(bytes: &[u8]) -> Result<ReportDocument, RunError> {
    serde_json::from_slice(bytes).map_err(|e| RunError::Io(e.to_string()))
}

fn emit_csv(doc: &ReportDocument) -> Result<Vec<u8>, RunError> {
    let io = |e: csv::Error| RunError::Io(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    if let Some(t) = &doc.table {
        w.write_record(&t.columns).map_err(io)?;
        for row in &t.rows {
            w.write_record(row).map_err(io)?;
        }
    } else {
        w.write_record(CSV_HEADER).map_err(io)?;
        for r in &doc.reports {
            w.write_record([
                r.lemma_id.as_str(),
                r.expected.as_str(),
                r.computed_exact.as_str(),
                &opt_num(r.computed_numeric),
                &opt_num(r.rel_err),
                r.status.as_str(),
            ])
            .map_err(io)?;
        }
    }
    w.into_inner().map_err(|e| RunError::Io(e.to_string()))
}

fn text_table(out: &mut String, columns: &[&str], rows: &[Vec<String>]) {
    let mut width: Vec<usize> = columns.iter().map(|c| c.chars().count()).collect();
    for row in rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let parts: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
        parts.join("  ").trim_end().to_string()
    };
    let _ = writeln!(out, "{}", line(columns.to_vec()));
    for row in rows {
        let _ = writeln!(out, "{}", line(row.iter().map(String::as_str).collect()));
    }
}

fn emit_text(doc: &ReportDocument) -> String {
    let mut out = format!("pohozaev {}\n\n", doc.tool_version);
    if !doc.reports.is_empty() {
        let rows: Vec<Vec<String>> = doc
            .reports
            .iter()
            .map(|r| {
                vec![
                    r.lemma_id.clone(),
                    r.case.clone(),
                    r.expected.clone(),
                    r.computed_exact.clone(),
                    r.rel_err.map_or_else(String::new, |x| format!("{x:.2e}")),
                    r.status.as_str().to_string(),
                ]
            })
            .collect();
        text_table(&mut out, &["lemma_id", "case", "expected", "computed_exact", "rel_err", "status"], &rows);
        let notes: Vec<&VerificationReport> = doc.reports.iter().filter(|r| r.status != Status::Pass).collect();
        if !notes.is_empty() {
            out.push('\n');
            for r in notes {
                let _ = writeln!(out, "{} ({}): {}", r.lemma_id, r.case, r.notes);
            }
        }
        out.push('\n');
    }
    if let Some(t) = &doc.table {
        let cols: Vec<&str> = t.columns.iter().map(String::as_str).collect();
        text_table(&mut out, &cols, &t.rows);
        out.push('\n');
    }
    let s = &doc.summary;
    let _ = writeln!(
        out,
        "{} checks: {} pass, {} fail, {} discrepancy_with_paper",
        s.total, s.pass, s.fail, s.discrepancy_with_paper
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suite::Provenance;

    fn one_pass() -> ReportDocument {
        let r = VerificationReport::new("stimafinalegamma", "n=7", Some(7), "")
            .expect("29/432 * w5 * I(7,9)", Provenance::Printed)
            .exact("29/432 * w5 * I(7,9)")
            .numeric(0.1, 1e-16, 0.1);
        ReportDocument::new(RunConfig::new(Command::VerifyAll), vec![r], None)
    }

    #[test]
    fn empty_document() {
        let doc = ReportDocument::new(RunConfig::new(Command::VerifyAll), vec![], None);
        assert_eq!(doc.summary, Summary::default());
        assert_eq!(doc.exit_code(), 0);
        let bytes = emit(&doc, Format::Json).unwrap();
        let back: ReportDocument = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn json_keeps_exact_strings() {
        let doc = one_pass();
        let s = String::from_utf8(emit(&doc, Format::Json).unwrap()).unwrap();
        assert!(s.contains("\"computed_exact\": \"29/432 * w5 * I(7,9)\""));
        assert!(s.contains("\"status\": \"pass\""));
        assert!(s.find("\"tool_version\"").unwrap() < s.find("\"summary\"").unwrap());
    }

    #[test]
    fn csv_header_is_fixed() {
        let s = String::from_utf8(emit(&one_pass(), Format::Csv).unwrap()).unwrap();
        assert_eq!(s.lines().next().unwrap(), CSV_HEADER.join(","));
        assert_eq!(s.lines().count(), 2);
    }

    #[test]
    fn exit_codes() {
        use Status::*;
        assert_eq!(exit_code([]), 0);
        assert_eq!(exit_code([Pass, Pass]), 0);
        assert_eq!(exit_code([Pass, DiscrepancyWithPaper]), 3);
        assert_eq!(exit_code([DiscrepancyWithPaper, Fail]), 1);
    }

    #[test]
    fn validation() {
        let mut c = RunConfig::new(Command::VerifyLemma { id: "nope".into() });
        assert!(matches!(c.validate(), Err(RunError::Usage(_))));
        c.command = Command::VerifyAll;
        assert!(c.validate().is_ok());
        c.precision_bits = 64;
        assert!(c.validate().is_err());
        c.precision_bits = 53;
        c.deltas = vec![ExactScalar::int(2)];
        assert!(c.validate().is_err());
        assert!(RunConfig::new(Command::ScanB { grid: vec![] }).validate().is_err());
        assert!(run(&RunConfig::new(Command::Pohozaev { n: 7, r: -1.0 })).is_err());
    }

    #[test]
    fn every_job_covers_its_label() {
        for j in all_jobs() {
            assert!(j.covers(&j.label()), "{j:?}");
            assert!(LEMMA_IDS.contains(&j.label().as_str()));
        }
    }

    #[test]
    fn integral_table_csv() {
        let out = run(&RunConfig::new(Command::TableIntegrals)).unwrap();
        assert_eq!(out.exit_code, 0);
        let s = String::from_utf8(emit(&out.document, Format::Csv).unwrap()).unwrap();
        assert!(s.lines().next().unwrap().starts_with("m,alpha,canonical_coeff,canonical_base,numeric_value"));
        assert!(s.lines().any(|l| l.starts_with("7,7,1/2,\"I(7,9)\"") || l.starts_with("7,7,1/2,I(7,9)")), "{s}");
    }

    #[test]
    fn scan_reports_vertex() {
        let grid = [-3, -2, -1, 0].map(ExactScalar::int).to_vec();
        let out = run(&RunConfig::new(Command::ScanB { grid })).unwrap();
        assert_eq!(out.exit_code, 0);
        let t = out.document.table.unwrap();
        let signs: Vec<&str> = t.rows.iter().map(|r| r[2].as_str()).collect();
        assert_eq!(signs, ["+", "+", "+", "-"]);
        assert_eq!(out.document.reports[0].computed_exact, "-50/21");
    }
}
