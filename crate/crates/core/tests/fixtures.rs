mod common;

use common::{load, structure, NegatedLie, SplitCartan, WrongSignIbanez};
use nlab::algebroid::{anchor_pi, derive_anchor, run_suite, LeibnizBracket, Suite, SuiteConfig};
use nlab::calculus::SamplingConfig;
use nlab::cli::compare_anchor;
use nlab::Error;

fn config(trials: usize) -> SuiteConfig {
    SuiteConfig {
        sampling: SamplingConfig {
            trials,
            ..SamplingConfig::default()
        },
        ..SuiteConfig::default()
    }
}

#[test]
fn wrong_sign_bracket_keeps_the_anchor_but_breaks_the_homomorphism() {
    let scene = load("r3-canonical.scene");
    let s = structure(&scene);
    let br = WrongSignIbanez(s);
    let a = scene.section("a").unwrap();

    // the density term is C-linear in b, so recovery still yields i(a)L
    let cmp = compare_anchor(&br, a).unwrap();
    assert!(cmp.agree, "{cmp:?}");
    assert_eq!(cmp.derived.as_deref(), Some("(x)*e1"));

    let report = run_suite(&br, Suite::AnchorHomDerived, &config(20));
    assert!(!report.passed);
    assert!(report
        .violations
        .iter()
        .any(|v| v.check == "anchor-hom-derived"));
    assert!(report
        .violations
        .iter()
        .all(|v| v.check != "extraction-consistency"));
}

#[test]
fn negated_lie_bracket_recovers_minus_pi() {
    let scene = load("r3-canonical.scene");
    let s = structure(&scene);
    let br = NegatedLie(s);
    let a = scene.section("a").unwrap();

    let cmp = compare_anchor(&br, a).unwrap();
    assert!(!cmp.agree);
    assert_eq!(cmp.derived.as_deref(), Some("(-x)*e1"));
    assert_eq!(cmp.pi, "(x)*e1");
    assert_eq!(cmp.extraction_error, None);

    let report = run_suite(&br, Suite::AnchorHomDerived, &config(10));
    assert!(report
        .violations
        .iter()
        .any(|v| v.check == "extraction-consistency"));
}

#[test]
fn split_cartan_bracket_has_no_anchor() {
    let scene = load("r3-canonical.scene");
    let s = structure(&scene);
    let br = SplitCartan(s);
    let a = scene.section("a").unwrap();

    let err = derive_anchor(&br, a).unwrap_err();
    let Error::ExtractionFailure {
        function, probe, ..
    } = &err
    else {
        panic!("unexpected error {err}");
    };
    assert!(!function.is_empty() && !probe.is_empty());

    let cmp = compare_anchor(&br, a).unwrap();
    assert!(!cmp.agree);
    assert_eq!(cmp.derived, None);
    assert!(cmp
        .extraction_error
        .unwrap()
        .contains("anchor extraction failed"));
    assert_eq!(cmp.pi, anchor_pi(s, a).unwrap().render());

    let report = run_suite(&br, Suite::AnchorHomDerived, &config(5));
    assert!(!report.passed);
    assert!(report
        .violations
        .iter()
        .all(|v| v.defect.starts_with("error: anchor extraction failed")));
    assert_eq!(report.variant, br.label());
}

#[test]
fn zero_section_has_zero_anchor_both_ways() {
    let scene = load("r3-canonical.scene");
    let s = structure(&scene);
    let zero = nlab::exterior::DifferentialForm::zero(scene.chart().clone(), 2).unwrap();
    let cmp = compare_anchor(
        &nlab::algebroid::NambuBracket::new(s, nlab::algebroid::BracketVariant::hagiwara()),
        &zero,
    );
    let cmp = cmp.unwrap();
    assert!(cmp.agree);
    assert_eq!(cmp.pi, "(0)*e1");
}
