use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use super::{
    anchor_pi, check_anchor_homomorphism, check_antisymmetry_defects, check_derivation_property,
    check_leibniz_identity, check_leibniz_rule, compare_variants, derive_anchor, AnchorSource,
    LeibnizBracket, Section, SignExponent,
};
use crate::calculus::{NambuStructure, SamplingConfig};
use crate::error::Result;
use crate::exterior::sample_tensor;
use crate::report::{NamedValue, VerificationReport, Violation};
use crate::ring::{sample_polynomial, trial_rng, Polynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    LeibnizIdentity,
    LeibnizRule,
    AnchorHom,
    AnchorHomDerived,
    Derivation,
    AntisymAnchored,
    VariantCompare,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::LeibnizIdentity,
        Suite::LeibnizRule,
        Suite::AnchorHom,
        Suite::AnchorHomDerived,
        Suite::Derivation,
        Suite::AntisymAnchored,
        Suite::VariantCompare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::LeibnizIdentity => "leibniz-id",
            Suite::LeibnizRule => "leibniz-rule",
            Suite::AnchorHom => "anchor-hom",
            Suite::AnchorHomDerived => "anchor-hom-derived",
            Suite::Derivation => "derivation",
            Suite::AntisymAnchored => "antisym-anchored",
            Suite::VariantCompare => "variant-compare",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
                format!("unknown suite `{s}` (expected one of {})", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SuiteConfig {
    pub sampling: SamplingConfig,
    /// Sign used for the Ibanez side of `variant-compare`.
    pub sign_exponent: SignExponent,
}

/// Random `(p-1)`-form with a dense random coefficient on every component.
pub fn sample_section<R: Rng + ?Sized>(
    rng: &mut R,
    s: &NambuStructure,
    max_degree: u32,
    max_abs_coeff: u32,
) -> Section {
    sample_tensor(rng, s.chart(), s.order() - 1, max_degree, max_abs_coeff)
        .expect("order - 1 is a valid degree")
}

struct TrialInputs {
    alpha: Section,
    beta: Section,
    gamma: Section,
    f: Polynomial,
    g: Polynomial,
}

impl TrialInputs {
    /// Every suite draws the same inputs for a given `(seed, trial)`, in the
    /// order alpha, beta, gamma, f, g.
    fn draw(s: &NambuStructure, cfg: &SamplingConfig, trial: usize) -> Self {
        let mut rng = trial_rng(cfg.seed, trial);
        let (deg, coeff) = (cfg.max_degree, cfg.max_abs_coeff);
        let alpha = sample_section(&mut rng, s, deg, coeff);
        let beta = sample_section(&mut rng, s, deg, coeff);
        let gamma = sample_section(&mut rng, s, deg, coeff);
        let f = sample_polynomial(&mut rng, s.dimension(), deg, coeff);
        let g = sample_polynomial(&mut rng, s.dimension(), deg, coeff);
        TrialInputs {
            alpha,
            beta,
            gamma,
            f,
            g,
        }
    }
}

#[derive(Default)]
struct TrialOutcome {
    violations: Vec<Violation>,
    raw_difference_nonzero: bool,
}

struct Trial<'a> {
    index: usize,
    inputs: Vec<NamedValue>,
    outcome: &'a mut TrialOutcome,
}

impl Trial<'_> {
    fn record(&mut self, check: &str, defect: Result<Option<String>>) {
        let defect = match defect {
            Ok(None) => return,
            Ok(Some(d)) => d,
            Err(e) => format!("error: {e}"),
        };
        self.outcome.violations.push(Violation {
            trial: self.index,
            check: check.into(),
            inputs: self.inputs.clone(),
            defect,
        });
    }
}

fn nonzero<T>(
    value: T,
    is_zero: impl Fn(&T) -> bool,
    render: impl Fn(&T) -> String,
) -> Option<String> {
    (!is_zero(&value)).then(|| render(&value))
}

fn run_trial<B: LeibnizBracket + ?Sized>(
    br: &B,
    suite: Suite,
    cfg: &SuiteConfig,
    index: usize,
) -> TrialOutcome {
    let s = br.structure();
    let chart = s.chart();
    let TrialInputs {
        alpha,
        beta,
        gamma,
        f,
        g,
    } = TrialInputs::draw(s, &cfg.sampling, index);

    let mut inputs = vec![
        NamedValue::new("alpha", alpha.render()),
        NamedValue::new("beta", beta.render()),
    ];
    match suite {
        Suite::LeibnizIdentity => inputs.push(NamedValue::new("gamma", gamma.render())),
        Suite::LeibnizRule => inputs.push(NamedValue::new("f", chart.render(&f))),
        Suite::Derivation => {
            inputs = vec![
                NamedValue::new("alpha", alpha.render()),
                NamedValue::new("f", chart.render(&f)),
                NamedValue::new("g", chart.render(&g)),
            ]
        }
        _ => {}
    }

    let mut outcome = TrialOutcome::default();
    let mut trial = Trial {
        index,
        inputs,
        outcome: &mut outcome,
    };
    let form_defect = |r: Result<Section>| r.map(|d| nonzero(d, Section::is_zero, Section::render));
    let mv_defect = |r: Result<crate::exterior::MultivectorField>| {
        r.map(|d| nonzero(d, |d| d.is_zero(), |d| d.render()))
    };

    match suite {
        Suite::LeibnizIdentity => {
            trial.record(
                suite.name(),
                form_defect(check_leibniz_identity(br, &alpha, &beta, &gamma)),
            );
        }
        Suite::LeibnizRule => {
            trial.record(
                suite.name(),
                form_defect(check_leibniz_rule(br, &alpha, &beta, &f)),
            );
        }
        Suite::AnchorHom => {
            trial.record(
                suite.name(),
                mv_defect(check_anchor_homomorphism(
                    br,
                    &alpha,
                    &beta,
                    AnchorSource::Pi,
                )),
            );
        }
        Suite::AnchorHomDerived => {
            trial.record(
                suite.name(),
                mv_defect(check_anchor_homomorphism(
                    br,
                    &alpha,
                    &beta,
                    AnchorSource::Derived,
                )),
            );
            for section in [&alpha, &beta] {
                let consistency = derive_anchor(br, section).and_then(|derived| {
                    let pi = anchor_pi(s, section)?;
                    Ok((derived.vector_field() != pi).then(|| {
                        format!(
                            "derived {} vs pi {}",
                            derived.vector_field().render(),
                            pi.render()
                        )
                    }))
                });
                trial.record("extraction-consistency", consistency);
            }
        }
        Suite::Derivation => {
            let defect = check_derivation_property(br, &alpha, &f, &g)
                .map(|d| nonzero(d, Polynomial::is_zero, |d| chart.render(d)));
            trial.record(suite.name(), defect);
        }
        Suite::AntisymAnchored => match check_antisymmetry_defects(br, &alpha, &beta) {
            Ok(d) => {
                trial.record(
                    suite.name(),
                    Ok(nonzero(d.anchored_defect, |d| d.is_zero(), |d| d.render())),
                );
                if s.order() == 2 {
                    trial.record(
                        "koszul-skew",
                        Ok(nonzero(d.bracket_defect, Section::is_zero, Section::render)),
                    );
                }
            }
            Err(e) => trial.record(suite.name(), Err(e)),
        },
        Suite::VariantCompare => match compare_variants(s, &alpha, &beta, cfg.sign_exponent) {
            Ok(d) => {
                trial.outcome.raw_difference_nonzero = !d.raw_difference.is_zero();
                trial.record(
                    suite.name(),
                    Ok(nonzero(
                        d.anchored_difference,
                        |d| d.is_zero(),
                        |d| d.render(),
                    )),
                );
            }
            Err(e) => trial.record(suite.name(), Err(e)),
        },
    }
    outcome
}

/// Runs one checker over `trials` seeded random inputs. Trials run in
/// parallel; violations are reported in trial order.
pub fn run_suite<B: LeibnizBracket + ?Sized>(
    br: &B,
    suite: Suite,
    cfg: &SuiteConfig,
) -> VerificationReport {
    let outcomes: Vec<TrialOutcome> = (0..cfg.sampling.trials)
        .into_par_iter()
        .map(|t| run_trial(br, suite, cfg, t))
        .collect();

    let variant = match suite {
        Suite::VariantCompare => format!(
            "{} vs hagiwara",
            super::BracketVariant::ibanez(cfg.sign_exponent)
        ),
        _ => br.label(),
    };
    let raw_nonzero: Vec<usize> = outcomes
        .iter()
        .enumerate()
        .filter(|(_, o)| o.raw_difference_nonzero)
        .map(|(t, _)| t)
        .collect();
    let violations = outcomes.into_iter().flat_map(|o| o.violations).collect();
    let mut report = VerificationReport::new(
        suite.name(),
        br.structure().describe(),
        variant,
        cfg.sampling.trials,
        cfg.sampling.seed,
        violations,
    );
    if suite == Suite::VariantCompare {
        report = report.with_note(match raw_nonzero.first() {
            Some(first) => format!(
                "raw brackets differ on {} of {} trials (first witness: trial {first})",
                raw_nonzero.len(),
                cfg.sampling.trials
            ),
            None => format!(
                "raw brackets coincide on all {} trials",
                cfg.sampling.trials
            ),
        });
    }
    report
}
