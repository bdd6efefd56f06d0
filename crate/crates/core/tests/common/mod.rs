//! Shared helpers for the integration tests: checked-in scenes and
//! deliberately broken brackets used as negative controls.

#![allow(dead_code)]

use std::path::PathBuf;

use nlab::algebroid::{anchor_pi, ibanez_sign, LeibnizBracket, Section, SignExponent};
use nlab::calculus::{exterior_derivative, lie_derivative_form, NambuStructure};
use nlab::dsl::Scene;
use nlab::exterior::{interior_product, pairing};
use nlab::Result;

pub fn scene_path(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("scenes")
        .join(file)
}

pub fn load(file: &str) -> Scene {
    nlab::cli::load_scene(&scene_path(file)).unwrap_or_else(|e| panic!("{file}: {e}"))
}

/// The only structure of a checked-in scene.
pub fn structure(scene: &Scene) -> &NambuStructure {
    match scene.structures() {
        [s] => s,
        other => panic!("expected one structure, found {}", other.len()),
    }
}

/// Ibanez bracket with the density term's sign flipped:
/// `L_{P(a)} b - s <L, da> b`.
pub struct WrongSignIbanez<'a>(pub &'a NambuStructure);

impl LeibnizBracket for WrongSignIbanez<'_> {
    fn structure(&self) -> &NambuStructure {
        self.0
    }

    fn label(&self) -> String {
        "wrong-sign ibanez".into()
    }

    fn bracket(&self, a: &Section, b: &Section) -> Result<Section> {
        let s = self.0;
        let lie = lie_derivative_form(&anchor_pi(s, a)?, b)?;
        let density = pairing(s.lambda(), &exterior_derivative(a)?)?;
        let correction = b
            .mul_function(&density)?
            .scale(&ibanez_sign(s, SignExponent::Order));
        lie.try_sub(&correction)
    }
}

/// Ibanez bracket with the Lie derivative term negated:
/// `-L_{P(a)} b + s <L, da> b`. Its recovered anchor is `-P`.
pub struct NegatedLie<'a>(pub &'a NambuStructure);

impl LeibnizBracket for NegatedLie<'_> {
    fn structure(&self) -> &NambuStructure {
        self.0
    }

    fn label(&self) -> String {
        "negated-lie ibanez".into()
    }

    fn bracket(&self, a: &Section, b: &Section) -> Result<Section> {
        let s = self.0;
        let lie = lie_derivative_form(&anchor_pi(s, a)?, b)?;
        let density = pairing(s.lambda(), &exterior_derivative(a)?)?;
        let correction = b
            .mul_function(&density)?
            .scale(&ibanez_sign(s, SignExponent::Order));
        correction.try_sub(&lie)
    }
}

/// Cartan's formula with the wrong relative sign, `d i_X b - i_X d b` for
/// `X = P(a)`. Not a first-order operator in `b`, so the bracket residual
/// is not a multiple of the probe and anchor recovery must fail.
pub struct SplitCartan<'a>(pub &'a NambuStructure);

impl LeibnizBracket for SplitCartan<'_> {
    fn structure(&self) -> &NambuStructure {
        self.0
    }

    fn label(&self) -> String {
        "split-cartan".into()
    }

    fn bracket(&self, a: &Section, b: &Section) -> Result<Section> {
        let x = anchor_pi(self.0, a)?;
        let first = exterior_derivative(&interior_product(&x, b)?)?;
        let second = interior_product(&x, &exterior_derivative(b)?)?;
        first.try_sub(&second)
    }
}
