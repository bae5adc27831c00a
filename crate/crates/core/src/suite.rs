//! Seeded batch runs of the inequality checkers.
//!
//! Every trial draws its inputs from a ChaCha stream keyed by
//! (master seed, suite, dim, trial), so any single trial can be replayed
//! without rerunning the batch, and the report bytes depend only on the
//! configuration.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcalc::{random_herglotz_with, MIN_NODES};
use crate::g1gen::{
    random_g1_with, G1Operator, G1OperatorJson, DEFAULT_CIRCLE_SAMPLES, DEFAULT_RING_RADII,
};
use crate::ineq::{
    self, Cor23Variant, Cor26Variant, InequalityReport, PairVariant, Sign, Thm22Variant,
};
use crate::linalg::{ComplexMatrix, MatrixJson};
use crate::random::{complex_gaussian_matrix, random_hermitian, stream_seed, trial_rng, TrialRng};

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "WRAD_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lemma21a,
    Lemma21b,
    Lemma21c,
    Lemma21d,
    Lemma21e,
    Lemma21f,
    Thm22,
    Cor23,
    Thm24,
    Rem25,
    Cor26,
    Rem27,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Lemma21a,
        Suite::Lemma21b,
        Suite::Lemma21c,
        Suite::Lemma21d,
        Suite::Lemma21e,
        Suite::Lemma21f,
        Suite::Thm22,
        Suite::Cor23,
        Suite::Thm24,
        Suite::Rem25,
        Suite::Cor26,
        Suite::Rem27,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma21a => "lemma21a",
            Suite::Lemma21b => "lemma21b",
            Suite::Lemma21c => "lemma21c",
            Suite::Lemma21d => "lemma21d",
            Suite::Lemma21e => "lemma21e",
            Suite::Lemma21f => "lemma21f",
            Suite::Thm22 => "thm22",
            Suite::Cor23 => "cor23",
            Suite::Thm24 => "thm24",
            Suite::Rem25 => "rem25",
            Suite::Cor26 => "cor26",
            Suite::Rem27 => "rem27",
        }
    }

    pub fn is_lemma(self) -> bool {
        self <= Suite::Lemma21f
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(Error::Config(format!("unknown report format {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub master_seed: u64,
    pub dims: Vec<usize>,
    pub trials_per_suite: usize,
    pub rho_max: f64,
    pub atoms: usize,
    pub suites: Vec<Suite>,
    pub quadrature_nodes: usize,
    pub report_format: ReportFormat,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            master_seed: 42,
            dims: vec![2, 3, 4, 6, 8],
            trials_per_suite: 200,
            rho_max: 0.8,
            atoms: 8,
            suites: Suite::ALL.to_vec(),
            quadrature_nodes: 512,
            report_format: ReportFormat::Json,
        }
    }
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if !(self.rho_max > 0.0 && self.rho_max < 1.0) {
            return fail(format!("rho_max must lie in (0, 1), got {}", self.rho_max));
        }
        if self.trials_per_suite == 0 {
            return fail("trials_per_suite must be at least 1".into());
        }
        if self.suites.is_empty() {
            return fail("at least one suite must be selected".into());
        }
        if self.dims.is_empty() || self.dims.contains(&0) {
            return fail("dims must be a non-empty list of positive integers".into());
        }
        if self.atoms == 0 {
            return fail("atoms must be at least 1".into());
        }
        if self.quadrature_nodes < MIN_NODES {
            return fail(format!("quadrature_nodes must be at least {MIN_NODES}"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub total: usize,
    pub passed: usize,
    pub max_ratio: f64,
    pub argmax_seed: u64,
    pub argmax_dim: usize,
    pub argmax_trial: usize,
    /// Seconds. Kept out of the report file so that its bytes are a
    /// function of the configuration alone.
    #[serde(skip)]
    pub wall_time: f64,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }
}

/// A finished run: the report file contents.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Batch {
    pub config: TrialConfig,
    pub suites: Vec<SuiteReport>,
    pub details: Vec<InequalityReport>,
}

impl Batch {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::all_passed)
    }
}

/// The worker pool, sized by [`THREADS_ENV`] when set.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var(THREADS_ENV) {
        let threads: usize = value
            .trim()
            .parse()
            .ok()
            .filter(|&t| t > 0)
            .ok_or_else(|| {
                Error::Config(format!(
                    "{THREADS_ENV} must be a positive integer, got {value:?}"
                ))
            })?;
        builder = builder.num_threads(threads);
    }
    builder.build().map_err(|e| Error::Config(e.to_string()))
}

/// Runs every selected suite and keeps all per-variant reports.
pub fn run(config: &TrialConfig) -> Result<Batch> {
    config.validate()?;
    let pool = thread_pool()?;
    let mut suites = Vec::with_capacity(config.suites.len());
    let mut details = Vec::new();
    for &suite in &config.suites {
        let started = Instant::now();
        let jobs: Vec<(usize, usize)> = config
            .dims
            .iter()
            .flat_map(|&dim| (0..config.trials_per_suite).map(move |trial| (dim, trial)))
            .collect();
        let trials = pool.install(|| {
            jobs.par_iter()
                .map(|&(dim, trial)| run_trial(config, suite, dim, trial))
                .collect::<Result<Vec<_>>>()
        })?;
        let mut report = aggregate(suite, &jobs, &trials);
        report.wall_time = started.elapsed().as_secs_f64();
        suites.push(report);
        details.extend(trials.into_iter().flatten());
    }
    Ok(Batch {
        config: config.clone(),
        suites,
        details,
    })
}

pub fn run_suite(config: &TrialConfig) -> Result<Vec<SuiteReport>> {
    run(config).map(|batch| batch.suites)
}

fn aggregate(
    suite: Suite,
    jobs: &[(usize, usize)],
    trials: &[Vec<InequalityReport>],
) -> SuiteReport {
    let mut report = SuiteReport {
        suite,
        total: trials.len(),
        passed: 0,
        max_ratio: 0.0,
        argmax_seed: 0,
        argmax_dim: 0,
        argmax_trial: 0,
        wall_time: 0.0,
    };
    let mut best = f64::NEG_INFINITY;
    for (&(dim, trial), reports) in jobs.iter().zip(trials) {
        if reports.iter().all(|r| r.pass) {
            report.passed += 1;
        }
        for r in reports.iter().filter(|r| r.ratio.is_finite()) {
            if r.ratio > best {
                best = r.ratio;
                report.max_ratio = r.ratio;
                report.argmax_seed = r.seed;
                report.argmax_dim = dim;
                report.argmax_trial = trial;
            }
        }
    }
    report
}

/// Reports of one trial, identical to the ones a full run produces for it.
pub fn replay(
    config: &TrialConfig,
    suite: Suite,
    dim: usize,
    trial: usize,
) -> Result<Vec<InequalityReport>> {
    config.validate()?;
    if dim == 0 {
        return Err(Error::Config("dimension must be at least 1".into()));
    }
    if trial >= config.trials_per_suite {
        return Err(Error::Config(format!(
            "trial {trial} out of range (trials_per_suite = {})",
            config.trials_per_suite
        )));
    }
    thread_pool()?.install(|| run_trial(config, suite, dim, trial))
}

fn run_trial(
    config: &TrialConfig,
    suite: Suite,
    dim: usize,
    trial: usize,
) -> Result<Vec<InequalityReport>> {
    let seed = stream_seed(config.master_seed, suite.name(), dim, trial as u64);
    let mut rng = trial_rng(seed);
    let reports = draw_and_check(config, suite, dim, &mut rng)?;
    Ok(reports.into_iter().map(|r| r.with_seed(seed)).collect())
}

fn draw_and_check(
    config: &TrialConfig,
    suite: Suite,
    n: usize,
    rng: &mut TrialRng,
) -> Result<Vec<InequalityReport>> {
    let nodes = config.quadrature_nodes;
    let gauss = |rng: &mut TrialRng| complex_gaussian_matrix(rng, n);
    match suite {
        Suite::Lemma21a => {
            let (a, x) = (gauss(rng), gauss(rng));
            Ok(vec![ineq::check_lemma21_a(&a, &x)?])
        }
        Suite::Lemma21b => {
            let (a, x) = (gauss(rng), gauss(rng));
            ineq::check_lemma21_b_variants(&a, &x, &Sign::BOTH)
        }
        Suite::Lemma21c => {
            let (a, b, x, y) = (gauss(rng), gauss(rng), gauss(rng), gauss(rng));
            ineq::check_lemma21_c_variants(&a, &b, &x, &y, &Sign::BOTH)
        }
        Suite::Lemma21d => {
            let (a, b, x, y) = (gauss(rng), gauss(rng), gauss(rng), gauss(rng));
            Ok(vec![ineq::check_lemma21_d(&a, &b, &x, &y)?])
        }
        Suite::Lemma21e => {
            let (x, y) = (gauss(rng), gauss(rng));
            Ok(vec![ineq::check_lemma21_e(&x, &y)?])
        }
        Suite::Lemma21f => {
            let x = gauss(rng);
            let theta = rng.random_range(0.0..std::f64::consts::TAU);
            Ok(vec![ineq::check_lemma21_f(&x, theta)])
        }
        Suite::Thm22 => {
            let op = random_g1_with(rng, n, config.rho_max)?;
            let f = random_herglotz_with(rng, config.atoms)?;
            let x = gauss(rng);
            ineq::check_thm22_variants(&f, &op, &x, &Thm22Variant::ALL, nodes)
        }
        Suite::Cor23 => {
            let op = random_g1_with(rng, n, config.rho_max)?;
            let f = random_herglotz_with(rng, config.atoms)?;
            ineq::check_cor23_variants(&f, &op, &Cor23Variant::ALL, nodes)
        }
        Suite::Thm24 | Suite::Rem25 | Suite::Rem27 => {
            let op_a = random_g1_with(rng, n, config.rho_max)?;
            let op_b = random_g1_with(rng, n, config.rho_max)?;
            let f = random_herglotz_with(rng, config.atoms)?;
            let variants = &PairVariant::ALL;
            match suite {
                Suite::Thm24 => {
                    ineq::check_thm24_variants(&f, &op_a, &op_b, &gauss(rng), variants, nodes)
                }
                Suite::Rem25 => {
                    let x = random_hermitian(rng, n);
                    ineq::check_rem25_variants(&f, &op_a, &op_b, &x, variants, nodes)
                }
                _ => ineq::check_rem27_variants(&f, &op_a, &op_b, &gauss(rng), variants, nodes),
            }
        }
        Suite::Cor26 => {
            let op_a = random_g1_with(rng, n, config.rho_max)?;
            let op_b = random_g1_with(rng, n, config.rho_max)?;
            let f = random_herglotz_with(rng, config.atoms)?;
            ineq::check_cor26_variants(&f, &op_a, &op_b, &Cor26Variant::ALL, nodes)
        }
    }
}

pub const CSV_HEADER: &str = "name,lhs,rhs,ratio,pass,seed,dim";

fn csv_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x > 0.0 {
        "inf".into()
    } else if x < 0.0 {
        "-inf".into()
    } else {
        "nan".into()
    }
}

/// The report as it is written to disk.
pub fn render_report(
    config: &TrialConfig,
    reports: &[SuiteReport],
    details: &[InequalityReport],
    format: ReportFormat,
) -> Result<String> {
    match format {
        ReportFormat::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                config: &'a TrialConfig,
                suites: &'a [SuiteReport],
                details: &'a [InequalityReport],
            }
            let mut text = serde_json::to_string_pretty(&Out {
                config,
                suites: reports,
                details,
            })?;
            text.push('\n');
            Ok(text)
        }
        ReportFormat::Csv => {
            let mut text = String::from(CSV_HEADER);
            text.push('\n');
            for r in details {
                text.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    r.name,
                    csv_float(r.lhs),
                    csv_float(r.rhs),
                    csv_float(r.ratio),
                    r.pass,
                    r.seed,
                    r.dim
                ));
            }
            Ok(text)
        }
    }
}

pub fn emit_report(
    config: &TrialConfig,
    reports: &[SuiteReport],
    details: &[InequalityReport],
    format: ReportFormat,
    path: &Path,
) -> Result<()> {
    fs::write(path, render_report(config, reports, details, format)?)?;
    Ok(())
}

/// Bare matrix file: the matrix fields plus the spectrum, which cannot be
/// recovered reliably from a non-normal matrix.
#[derive(Deserialize)]
struct BareOperatorJson {
    #[serde(flatten)]
    matrix: MatrixJson,
    spectrum: Option<Vec<[f64; 2]>>,
}

fn spectrum_from(pairs: &[[f64; 2]]) -> Result<Vec<Complex64>> {
    pairs
        .iter()
        .map(|&[re, im]| {
            if re.is_finite() && im.is_finite() {
                Ok(Complex64::new(re, im))
            } else {
                Err(Error::Parse("spectrum entries must be finite".into()))
            }
        })
        .collect()
}

/// Reads an operator file (G₁ operator format or bare matrix with spectrum)
/// and certifies it.
pub fn load_operator(path: &Path) -> Result<G1Operator> {
    load_operator_with(path, DEFAULT_CIRCLE_SAMPLES)
}

/// [`load_operator`] with `circle_samples` points per certification circle.
pub fn load_operator_with(path: &Path, circle_samples: usize) -> Result<G1Operator> {
    parse_operator_with(&fs::read_to_string(path)?, circle_samples)
}

pub fn parse_operator(text: &str) -> Result<G1Operator> {
    parse_operator_with(text, DEFAULT_CIRCLE_SAMPLES)
}

pub fn parse_operator_with(text: &str, circle_samples: usize) -> Result<G1Operator> {
    if circle_samples == 0 {
        return Err(Error::Config("circle_samples must be at least 1".into()));
    }
    let value: serde_json::Value = serde_json::from_str(text)?;
    let op = if value.get("matrix").is_some() {
        let json: G1OperatorJson = serde_json::from_value(value)?;
        let matrix = ComplexMatrix::try_from(json.matrix)?;
        let spectrum = spectrum_from(&json.spectrum)?;
        match json.unitary {
            Some(u) => {
                let op = G1Operator::from_normal_parts(ComplexMatrix::try_from(u)?, spectrum)?;
                let mismatch = (op.matrix() - &matrix).frobenius_norm();
                if mismatch > 1e-10 * (1.0 + matrix.frobenius_norm()) {
                    return Err(Error::Parse(format!(
                        "matrix does not equal U diag(spectrum) U* (residual {mismatch:.3e})"
                    )));
                }
                op
            }
            None => G1Operator::from_matrix(matrix, spectrum)?,
        }
    } else {
        let json: BareOperatorJson = serde_json::from_value(value)?;
        let pairs = json
            .spectrum
            .ok_or_else(|| Error::Parse("a bare matrix file must supply \"spectrum\"".into()))?;
        G1Operator::from_matrix(
            ComplexMatrix::try_from(json.matrix)?,
            spectrum_from(&pairs)?,
        )?
    };
    op.certified(circle_samples, &DEFAULT_RING_RADII)
}

/// Reads a matrix in the `{"n", "re", "im"}` format. Extra fields are
/// ignored, so operator files are accepted too.
pub fn load_matrix(path: &Path) -> Result<ComplexMatrix> {
    let value: serde_json::Value = serde_json::from_str(&fs::read_to_string(path)?)?;
    let inner = value.get("matrix").cloned().unwrap_or(value);
    let json: MatrixJson = serde_json::from_value(inner)?;
    ComplexMatrix::try_from(json)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(suites: &[Suite], dims: &[usize], trials: usize) -> TrialConfig {
        TrialConfig {
            suites: suites.to_vec(),
            dims: dims.to_vec(),
            trials_per_suite: trials,
            ..TrialConfig::default()
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
            assert_eq!(
                serde_json::to_string(&s).unwrap(),
                format!("\"{}\"", s.name())
            );
        }
        assert!("lemma22".parse::<Suite>().is_err());
        assert_eq!(Suite::ALL.iter().filter(|s| s.is_lemma()).count(), 6);
    }

    #[test]
    fn config_validation() {
        assert!(TrialConfig::default().validate().is_ok());
        let bad = [
            TrialConfig {
                rho_max: 1.0,
                ..Default::default()
            },
            TrialConfig {
                rho_max: 0.0,
                ..Default::default()
            },
            TrialConfig {
                trials_per_suite: 0,
                ..Default::default()
            },
            TrialConfig {
                suites: vec![],
                ..Default::default()
            },
            TrialConfig {
                dims: vec![2, 0],
                ..Default::default()
            },
            TrialConfig {
                atoms: 0,
                ..Default::default()
            },
            TrialConfig {
                quadrature_nodes: 8,
                ..Default::default()
            },
        ];
        for config in bad {
            assert!(matches!(run(&config), Err(Error::Config(_))), "{config:?}");
        }
    }

    #[test]
    fn single_trial_counts_once() {
        let reports = run_suite(&small(&[Suite::Thm22], &[2], 1)).unwrap();
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].total, 1);
        assert_eq!(reports[0].passed, 1);
    }

    #[test]
    fn totals_follow_dims_and_trials() {
        let batch = run(&small(&[Suite::Lemma21b, Suite::Cor26], &[2, 3], 4)).unwrap();
        for s in &batch.suites {
            assert_eq!(s.total, 8);
            assert!(s.passed <= s.total);
        }
        assert_eq!(batch.details.len(), 2 * 8 * 2);
    }

    #[test]
    fn max_ratio_matches_details() {
        let batch = run(&small(&[Suite::Lemma21e], &[2, 4], 5)).unwrap();
        let s = &batch.suites[0];
        let best = batch
            .details
            .iter()
            .filter(|r| r.ratio.is_finite())
            .max_by(|a, b| a.ratio.total_cmp(&b.ratio))
            .unwrap();
        assert_eq!(s.max_ratio, best.ratio);
        assert_eq!(s.argmax_seed, best.seed);
        assert_eq!(s.argmax_dim, best.dim);
    }

    #[test]
    fn replay_matches_batch() {
        let config = small(&[Suite::Rem25], &[3], 3);
        let batch = run(&config).unwrap();
        let again = replay(&config, Suite::Rem25, 3, 2).unwrap();
        assert_eq!(again, batch.details[4..6].to_vec());
        assert!(replay(&config, Suite::Rem25, 3, 3).is_err());
    }

    #[test]
    fn csv_rows() {
        let r = InequalityReport::bound("lemma21a", 0.5, 1.0, 2).with_seed(7);
        let text = render_report(&TrialConfig::default(), &[], &[r], ReportFormat::Csv).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(
            lines[1],
            "lemma21a,5.0000000000000000e-1,1.0000000000000000e0,5.0000000000000000e-1,true,7,2"
        );
        let inf = InequalityReport::bound("x", 1.0, 0.0, 2);
        let text = render_report(&TrialConfig::default(), &[], &[inf], ReportFormat::Csv).unwrap();
        assert!(text.lines().nth(1).unwrap().contains(",inf,false,"));
    }

    #[test]
    fn empty_json_report() {
        let text = render_report(&TrialConfig::default(), &[], &[], ReportFormat::Json).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["details"], serde_json::json!([]));
        assert_eq!(value["suites"], serde_json::json!([]));
        assert_eq!(value["config"]["trials_per_suite"], 200);
    }

    #[test]
    fn parse_zero_operator() {
        let op = parse_operator(
            r#"{"n":2,"re":[[0,0],[0,0]],"im":[[0,0],[0,0]],"spectrum":[[0,0],[0,0]]}"#,
        )
        .unwrap();
        assert_eq!(op.d(), 1.0);
        assert!(op.certificate().unwrap() <= 1e-12);
    }

    #[test]
    fn parse_rejects_jordan_block() {
        let text =
            r#"{"n":2,"re":[[0.5,1],[0,0.5]],"im":[[0,0],[0,0]],"spectrum":[[0.5,0],[0.5,0]]}"#;
        match parse_operator(text) {
            Err(Error::CertificationFailed { certificate, .. }) => assert!(certificate > 0.1),
            other => panic!("expected CertificationFailed, got {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_boundary_and_missing_spectrum() {
        let text = r#"{"n":1,"re":[[1.0]],"im":[[0.0]],"spectrum":[[1.0,0.0]]}"#;
        assert!(matches!(
            parse_operator(text),
            Err(Error::SpectrumOnBoundary { .. })
        ));
        let text = r#"{"n":1,"re":[[0.5]],"im":[[0.0]]}"#;
        assert!(matches!(parse_operator(text), Err(Error::Parse(_))));
        assert!(matches!(parse_operator("{not json"), Err(Error::Parse(_))));
    }

    #[test]
    fn parse_generated_operator_file() {
        let op = crate::g1gen::random_g1(3, 4, 0.8).unwrap();
        let text = serde_json::to_string(&op.to_json()).unwrap();
        let loaded = parse_operator(&text).unwrap();
        assert!(loaded.unitary().is_some());
        assert!(loaded.certificate().unwrap() <= 1e-8);
        assert_eq!(loaded.d(), op.d());

        let mut json = op.to_json();
        json.unitary = None;
        let bare = parse_operator(&serde_json::to_string(&json).unwrap()).unwrap();
        assert!(bare.unitary().is_none());
        assert!(bare.certificate().unwrap() <= 1e-8);
    }
}
