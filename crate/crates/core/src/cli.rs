//! The `nlab` command line.
//!
//! Every command is a library function returning an [`Outcome`] so that the
//! binary only prints and exits. Exit codes: 0 when every check passes, 1 on
//! any violation, 2 on usage, input or parse errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::algebroid::{
    anchor_pi, derive_anchor, run_suite, BracketKind, BracketVariant, LeibnizBracket, NambuBracket,
    Section, SignExponent, Suite, SuiteConfig,
};
use crate::calculus::{validate_nambu, NambuStructure, SamplingConfig};
use crate::dsl::{parse_form, parse_scene, DslError, ParseError, Scene};
use crate::exterior::MultivectorField;
use crate::report::VerificationReport;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Check the fundamental identity of each structure.
    Validate,
    /// Print the bracket of two sections.
    Bracket,
    /// Run verification suites.
    Verify,
    /// Compare the anchor recovered from the bracket with i(a)L.
    Anchor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Settings for one invocation, parsed from the command line.
#[derive(Debug, Clone, Parser)]
#[command(
    name = "nlab",
    version,
    about = "Exact checks for Leibniz algebroids of Nambu-Poisson structures"
)]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// Scene file.
    pub scene: PathBuf,
    /// Structure to use; defaults to all (validate, verify) or the only one.
    #[arg(long)]
    pub structure: Option<String>,
    #[arg(long, default_value = "ibanez", value_parser = clap::value_parser!(BracketKind))]
    pub variant: BracketKind,
    /// Exponent of the Ibanez sign: `dim` or `order`.
    #[arg(long, default_value = "dim", value_parser = clap::value_parser!(SignExponent))]
    pub sign: SignExponent,
    /// Comma-separated suite names; defaults to all.
    #[arg(long = "suite", value_delimiter = ',', value_parser = clap::value_parser!(Suite))]
    pub suites: Vec<Suite>,
    /// Section name or form expression.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Section name or form expression.
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, env = "NLAB_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Coefficient degree bound for sampled inputs.
    #[arg(long, default_value_t = 2)]
    pub max_degree: u32,
    /// Coefficient magnitude bound for sampled inputs.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_coeff: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

impl RunConfig {
    /// Defaults for `command` on `scene`, as if no flags were given.
    pub fn new(command: Command, scene: impl Into<PathBuf>) -> Self {
        RunConfig {
            command,
            scene: scene.into(),
            structure: None,
            variant: BracketKind::Ibanez,
            sign: SignExponent::default(),
            suites: Vec::new(),
            alpha: None,
            beta: None,
            trials: 100,
            seed: 42,
            max_degree: 2,
            max_coeff: 3,
            format: Format::Text,
        }
    }

    pub fn bracket_variant(&self) -> BracketVariant {
        match self.variant {
            BracketKind::Ibanez => BracketVariant::ibanez(self.sign),
            BracketKind::Hagiwara => BracketVariant::hagiwara(),
        }
    }

    pub fn sampling(&self) -> SamplingConfig {
        SamplingConfig {
            trials: self.trials as usize,
            seed: self.seed,
            max_degree: self.max_degree,
            max_abs_coeff: self.max_coeff,
        }
    }

    pub fn suite_config(&self) -> SuiteConfig {
        SuiteConfig {
            sampling: self.sampling(),
            sign_exponent: self.sign,
        }
    }

    fn selected_suites(&self) -> Vec<Suite> {
        if self.suites.is_empty() {
            Suite::ALL.to_vec()
        } else {
            self.suites.clone()
        }
    }
}

/// Errors that map to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Scene {
        path: PathBuf,
        #[source]
        source: Box<DslError>,
    },
    #[error("--{flag}: {source}")]
    Expression {
        flag: &'static str,
        #[source]
        source: ParseError,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] crate::Error),
}

/// What the binary prints, and its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
}

pub fn load_scene(path: &Path) -> Result<Scene, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scene(&text).map_err(|source| CliError::Scene {
        path: path.to_path_buf(),
        source: Box::new(source),
    })
}

/// Structures named by `--structure`, or all of them.
fn all_structures<'s>(
    scene: &'s Scene,
    cfg: &RunConfig,
) -> Result<Vec<&'s NambuStructure>, CliError> {
    match &cfg.structure {
        Some(name) => Ok(vec![find_structure(scene, name)?]),
        None if scene.structures().is_empty() => {
            Err(CliError::Usage("scene defines no structure".into()))
        }
        None => Ok(scene.structures().iter().collect()),
    }
}

fn one_structure<'s>(scene: &'s Scene, cfg: &RunConfig) -> Result<&'s NambuStructure, CliError> {
    match (&cfg.structure, scene.structures()) {
        (Some(name), _) => find_structure(scene, name),
        (None, [only]) => Ok(only),
        (None, []) => Err(CliError::Usage("scene defines no structure".into())),
        (None, _) => Err(CliError::Usage(
            "scene defines several structures; pick one with --structure".into(),
        )),
    }
}

fn find_structure<'s>(scene: &'s Scene, name: &str) -> Result<&'s NambuStructure, CliError> {
    scene
        .structure(name)
        .ok_or_else(|| CliError::Usage(format!("unknown structure `{name}`")))
}

/// A section by name, or else the text parsed as a form over the scene chart.
fn resolve_section(
    scene: &Scene,
    flag: &'static str,
    arg: Option<&str>,
) -> Result<Section, CliError> {
    let text = arg.ok_or_else(|| CliError::Usage(format!("--{flag} is required")))?;
    if let Some(a) = scene.section(text) {
        return Ok(a.clone());
    }
    let looks_like_name = text.chars().all(|c| c.is_alphanumeric() || c == '_')
        && !text.starts_with("dx")
        && !text.starts_with(|c: char| c.is_ascii_digit());
    if looks_like_name {
        return Err(CliError::Usage(format!("unknown section `{text}`")));
    }
    parse_form(text, scene.chart()).map_err(|source| CliError::Expression { flag, source })
}

fn render_reports(reports: &[VerificationReport], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s: String = reports.iter().map(|r| r.render_text()).collect();
            let passed = reports.iter().filter(|r| r.passed).count();
            let _ = writeln!(s, "{passed} of {} report(s) passed", reports.len());
            s
        }
    }
}

fn reports_outcome(reports: &[VerificationReport], format: Format) -> Outcome {
    let code = if reports.iter().all(|r| r.passed) {
        EXIT_PASS
    } else {
        EXIT_VIOLATION
    };
    Outcome {
        code,
        stdout: render_reports(reports, format),
    }
}

/// Fundamental-identity reports, one per selected structure.
pub fn cmd_validate(cfg: &RunConfig, scene: &Scene) -> Result<Vec<VerificationReport>, CliError> {
    let sampling = cfg.sampling();
    Ok(all_structures(scene, cfg)?
        .into_iter()
        .map(|s| validate_nambu(s, &sampling))
        .collect())
}

/// `[[alpha, beta]]` for the selected structure and variant.
pub fn cmd_bracket(cfg: &RunConfig, scene: &Scene) -> Result<Section, CliError> {
    let s = one_structure(scene, cfg)?;
    let a = resolve_section(scene, "alpha", cfg.alpha.as_deref())?;
    let b = resolve_section(scene, "beta", cfg.beta.as_deref())?;
    Ok(crate::algebroid::bracket(s, cfg.bracket_variant(), &a, &b)?)
}

/// Reports ordered by structure, then by suite as listed.
pub fn cmd_verify(cfg: &RunConfig, scene: &Scene) -> Result<Vec<VerificationReport>, CliError> {
    let suite_cfg = cfg.suite_config();
    let variant = cfg.bracket_variant();
    let mut reports = Vec::new();
    for s in all_structures(scene, cfg)? {
        let br = NambuBracket::new(s, variant);
        for suite in cfg.selected_suites() {
            reports.push(run_suite(&br, suite, &suite_cfg));
        }
    }
    Ok(reports)
}

/// The anchor of one section computed two ways.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnchorComparison {
    pub alpha: String,
    /// Recovered from the bracket alone, if extraction succeeded.
    pub derived: Option<String>,
    pub extraction_error: Option<String>,
    pub pi: String,
    pub agree: bool,
}

impl AnchorComparison {
    pub fn render_text(&self) -> String {
        let derived = match (&self.derived, &self.extraction_error) {
            (Some(d), _) => d.clone(),
            (None, Some(e)) => format!("extraction failed: {e}"),
            (None, None) => "-".into(),
        };
        format!(
            "alpha   = {}\nderived = {derived}\npi      = {}\nagree   = {}\n",
            self.alpha, self.pi, self.agree
        )
    }
}

/// Compares the anchor recovered from `br` with `i(alpha) L`.
pub fn compare_anchor<B: LeibnizBracket + ?Sized>(
    br: &B,
    alpha: &Section,
) -> Result<AnchorComparison, CliError> {
    let pi: MultivectorField = anchor_pi(br.structure(), alpha)?;
    let (derived, extraction_error) = match derive_anchor(br, alpha) {
        Ok(x) => (Some(x.vector_field()), None),
        Err(e @ crate::Error::ExtractionFailure { .. }) => (None, Some(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    Ok(AnchorComparison {
        alpha: alpha.render(),
        agree: derived.as_ref() == Some(&pi),
        derived: derived.map(|d| d.render()),
        extraction_error,
        pi: pi.render(),
    })
}

pub fn cmd_anchor(cfg: &RunConfig, scene: &Scene) -> Result<AnchorComparison, CliError> {
    let s = one_structure(scene, cfg)?;
    let a = resolve_section(scene, "alpha", cfg.alpha.as_deref())?;
    compare_anchor(&NambuBracket::new(s, cfg.bracket_variant()), &a)
}

#[derive(Serialize)]
struct BracketJson<'a> {
    structure: String,
    variant: String,
    alpha: &'a str,
    beta: &'a str,
    bracket: String,
}

/// Loads the scene, runs the command and renders its output.
pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let scene = load_scene(&cfg.scene)?;
    match cfg.command {
        Command::Validate => Ok(reports_outcome(&cmd_validate(cfg, &scene)?, cfg.format)),
        Command::Verify => Ok(reports_outcome(&cmd_verify(cfg, &scene)?, cfg.format)),
        Command::Bracket => {
            let result = cmd_bracket(cfg, &scene)?;
            let stdout = match cfg.format {
                Format::Text => format!("{}\n", result.render()),
                Format::Json => {
                    let s = one_structure(&scene, cfg)?;
                    let json = BracketJson {
                        structure: s.describe(),
                        variant: cfg.bracket_variant().to_string(),
                        alpha: cfg.alpha.as_deref().unwrap_or_default(),
                        beta: cfg.beta.as_deref().unwrap_or_default(),
                        bracket: result.render(),
                    };
                    serde_json::to_string_pretty(&json).expect("bracket serializes") + "\n"
                }
            };
            Ok(Outcome {
                code: EXIT_PASS,
                stdout,
            })
        }
        Command::Anchor => {
            let cmp = cmd_anchor(cfg, &scene)?;
            let stdout = match cfg.format {
                Format::Text => cmp.render_text(),
                Format::Json => {
                    serde_json::to_string_pretty(&cmp).expect("comparison serializes") + "\n"
                }
            };
            let code = if cmp.agree { EXIT_PASS } else { EXIT_VIOLATION };
            Ok(Outcome { code, stdout })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    const R3: &str = "dim 3\ncoords x y z\nstructure L order 3 = (1)*e1^e2^e3\n\
                      section a = (x)*dx2^dx3\nsection b = dx2^dx3\nsection zero = (0)*dx1^dx2\n";

    fn scene_file(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    fn config(command: Command, path: &Path) -> RunConfig {
        let mut c = RunConfig::new(command, path);
        c.trials = 5;
        c
    }

    #[test]
    fn parses_flags() {
        let cfg = RunConfig::try_parse_from([
            "nlab",
            "verify",
            "s.scene",
            "--variant",
            "hagiwara",
            "--sign",
            "order",
            "--suite",
            "leibniz-id,anchor-hom",
            "--trials",
            "7",
            "--seed",
            "9",
            "--max-degree",
            "1",
            "--format",
            "json",
        ])
        .unwrap();
        assert_eq!(cfg.command, Command::Verify);
        assert_eq!(cfg.bracket_variant(), BracketVariant::hagiwara());
        assert_eq!(cfg.sign, SignExponent::Order);
        assert_eq!(cfg.suites, vec![Suite::LeibnizIdentity, Suite::AnchorHom]);
        assert_eq!(
            (cfg.trials, cfg.seed, cfg.max_degree, cfg.max_coeff),
            (7, 9, 1, 3)
        );
        assert_eq!(cfg.format, Format::Json);
    }

    #[test]
    fn rejects_bad_flags() {
        for args in [
            vec!["nlab", "verify", "s", "--suite", "nope"],
            vec!["nlab", "verify", "s", "--trials", "0"],
            vec!["nlab", "verify", "s", "--sign", "both"],
            vec!["nlab", "frobnicate", "s"],
        ] {
            let err = RunConfig::try_parse_from(&args).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{args:?}");
        }
    }

    #[test]
    fn bracket_of_named_and_inline_sections() {
        let f = scene_file(R3);
        let scene = load_scene(f.path()).unwrap();
        for variant in ["ibanez", "hagiwara"] {
            let mut cfg = config(Command::Bracket, f.path());
            cfg.variant = variant.parse().unwrap();
            cfg.alpha = Some("a".into());
            cfg.beta = Some("b".into());
            assert_eq!(cmd_bracket(&cfg, &scene).unwrap().render(), "(-1)*dx2^dx3");
            cfg.alpha = Some("(x)*dx2^dx3".into());
            assert_eq!(cmd_bracket(&cfg, &scene).unwrap().render(), "(-1)*dx2^dx3");
        }
    }

    #[test]
    fn bracket_input_errors_exit_2() {
        let f = scene_file(R3);
        let mut cfg = config(Command::Bracket, f.path());
        cfg.alpha = Some("nosuch".into());
        cfg.beta = Some("b".into());
        assert!(matches!(run(&cfg), Err(CliError::Usage(_))));
        cfg.alpha = Some("dx1^^dx2".into());
        assert!(matches!(
            run(&cfg),
            Err(CliError::Expression { flag: "alpha", .. })
        ));
        cfg.alpha = Some("dx1".into());
        assert!(matches!(run(&cfg), Err(CliError::Compute(_))));
        let missing = config(Command::Validate, Path::new("/nonexistent/nlab.scene"));
        assert!(matches!(run(&missing), Err(CliError::Io { .. })));
    }

    #[test]
    fn anchor_agrees_on_canonical_structure() {
        let f = scene_file(R3);
        let mut cfg = config(Command::Anchor, f.path());
        cfg.alpha = Some("a".into());
        let out = run(&cfg).unwrap();
        assert_eq!(out.code, 0);
        let scene = load_scene(f.path()).unwrap();
        let cmp = cmd_anchor(&cfg, &scene).unwrap();
        assert_eq!(cmp.derived.as_deref(), Some("(x)*e1"));
        assert_eq!(cmp.pi, "(x)*e1");
        assert!(cmp.agree);

        cfg.alpha = Some("zero".into());
        let cmp = cmd_anchor(&cfg, &scene).unwrap();
        assert_eq!(cmp.derived.as_deref(), Some("(0)*e1"));
        assert_eq!(cmp.pi, "(0)*e1");
        assert!(cmp.agree);
    }

    #[test]
    fn validate_and_verify_exit_codes() {
        let f = scene_file(R3);
        let out = run(&config(Command::Validate, f.path())).unwrap();
        assert_eq!(out.code, 0, "{}", out.stdout);
        let mut cfg = config(Command::Verify, f.path());
        cfg.suites = vec![Suite::LeibnizIdentity, Suite::AnchorHomDerived];
        let out = run(&cfg).unwrap();
        assert_eq!(out.code, 0, "{}", out.stdout);
        assert!(out.stdout.ends_with("2 of 2 report(s) passed\n"));
    }

    #[test]
    fn json_reports_have_the_documented_fields() {
        let f = scene_file(R3);
        let mut cfg = config(Command::Verify, f.path());
        cfg.suites = vec![Suite::LeibnizRule];
        cfg.format = Format::Json;
        let out = run(&cfg).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        let report = &v.as_array().unwrap()[0];
        for field in [
            "suite",
            "structure",
            "variant",
            "trials",
            "seed",
            "passed",
            "violations",
        ] {
            assert!(report.get(field).is_some(), "missing {field}");
        }
        assert_eq!(report["seed"], 42);
        assert_eq!(run(&cfg).unwrap(), out);
    }

    #[test]
    fn structure_selection() {
        let f = scene_file(
            "dim 2\nstructure A order 2 = e1^e2\nstructure B order 2 = (x1)*e1^e2\nsection a = dx1",
        );
        let scene = load_scene(f.path()).unwrap();
        let mut cfg = config(Command::Anchor, f.path());
        cfg.alpha = Some("a".into());
        assert!(matches!(cmd_anchor(&cfg, &scene), Err(CliError::Usage(_))));
        cfg.structure = Some("B".into());
        assert_eq!(cmd_anchor(&cfg, &scene).unwrap().pi, "(x1)*e2");
        cfg.structure = Some("C".into());
        assert!(cmd_anchor(&cfg, &scene).is_err());
        let cfg = config(Command::Validate, f.path());
        assert_eq!(cmd_validate(&cfg, &scene).unwrap().len(), 2);
    }
}
