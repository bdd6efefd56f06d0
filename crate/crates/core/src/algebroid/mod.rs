//! Leibniz algebroid attached to a Nambu structure: the anchor, the two
//! bracket variants on `(p-1)`-forms, recovery of the anchor from the
//! bracket alone, and checkers for the algebroid axioms.
//!
//! Checkers never fail on a violated identity; they return the defect as a
//! value and leave the zero test to the caller.

mod checks;
mod extract;
mod suite;

use std::fmt;
use std::str::FromStr;

use crate::calculus::{exterior_derivative, lie_derivative_form, NambuStructure};
use crate::error::{Error, Result};
use crate::exterior::{
    contract_form_into_multivector, interior_product, pairing, DifferentialForm, MultivectorField,
};
use crate::ring::{Polynomial, Rational};

pub use checks::{
    check_anchor_homomorphism, check_antisymmetry_defects, check_derivation_property,
    check_leibniz_identity, check_leibniz_rule, compare_variants, AnchorSource,
    AntisymmetryDefects, VariantDifference,
};
pub use extract::{derive_anchor, relation_scalar, ExtractedAnchor};
pub use suite::{run_suite, sample_section, Suite, SuiteConfig};

/// Sections of the bundle of `(p-1)`-forms.
pub type Section = DifferentialForm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BracketKind {
    /// `L_{P(a)} b + s <L, da> b`
    Ibanez,
    /// `L_{P(a)} b - i_{P(b)} da`
    Hagiwara,
}

/// Which exponent sets the sign `s = (-1)^k` of the Ibanez correction term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SignExponent {
    #[default]
    Dimension,
    Order,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BracketVariant {
    pub kind: BracketKind,
    /// Ignored by `Hagiwara`.
    pub sign_exponent: SignExponent,
}

impl BracketVariant {
    pub const fn ibanez(sign_exponent: SignExponent) -> Self {
        BracketVariant {
            kind: BracketKind::Ibanez,
            sign_exponent,
        }
    }

    pub const fn hagiwara() -> Self {
        BracketVariant {
            kind: BracketKind::Hagiwara,
            sign_exponent: SignExponent::Dimension,
        }
    }
}

impl fmt::Display for BracketVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.kind, self.sign_exponent) {
            (BracketKind::Hagiwara, _) => f.write_str("hagiwara"),
            (BracketKind::Ibanez, SignExponent::Dimension) => f.write_str("ibanez(sign=dim)"),
            (BracketKind::Ibanez, SignExponent::Order) => f.write_str("ibanez(sign=order)"),
        }
    }
}

impl FromStr for BracketKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ibanez" => Ok(BracketKind::Ibanez),
            "hagiwara" => Ok(BracketKind::Hagiwara),
            _ => Err(format!(
                "unknown bracket variant `{s}` (expected ibanez|hagiwara)"
            )),
        }
    }
}

impl FromStr for SignExponent {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "dim" | "dimension" => Ok(SignExponent::Dimension),
            "order" => Ok(SignExponent::Order),
            _ => Err(format!("unknown sign exponent `{s}` (expected dim|order)")),
        }
    }
}

/// A bilinear bracket on sections of `(p-1)`-forms over a Nambu structure.
///
/// Anchor recovery and the suites only ever call [`LeibnizBracket::bracket`],
/// so alternative (including deliberately broken) brackets can be plugged in.
pub trait LeibnizBracket: Sync {
    fn structure(&self) -> &NambuStructure;

    fn label(&self) -> String;

    fn bracket(&self, a: &Section, b: &Section) -> Result<Section>;
}

/// The bracket of a Nambu structure in one of its two standard forms.
#[derive(Debug, Clone, Copy)]
pub struct NambuBracket<'a> {
    pub structure: &'a NambuStructure,
    pub variant: BracketVariant,
}

impl<'a> NambuBracket<'a> {
    pub fn new(structure: &'a NambuStructure, variant: BracketVariant) -> Self {
        NambuBracket { structure, variant }
    }
}

impl LeibnizBracket for NambuBracket<'_> {
    fn structure(&self) -> &NambuStructure {
        self.structure
    }

    fn label(&self) -> String {
        self.variant.to_string()
    }

    fn bracket(&self, a: &Section, b: &Section) -> Result<Section> {
        bracket(self.structure, self.variant, a, b)
    }
}

pub(crate) fn check_section(s: &NambuStructure, a: &Section) -> Result<()> {
    s.lambda().same_chart(a)?;
    if a.degree() + 1 != s.order() {
        return Err(Error::DegreeMismatch {
            expected: s.order() - 1,
            found: a.degree(),
        });
    }
    Ok(())
}

/// The anchor `P(a) = i(a) L`.
pub fn anchor_pi(s: &NambuStructure, a: &Section) -> Result<MultivectorField> {
    check_section(s, a)?;
    contract_form_into_multivector(a, s.lambda())
}

/// `(-1)^k` with `k` the dimension or the order.
pub fn ibanez_sign(s: &NambuStructure, sign: SignExponent) -> Rational {
    let k = match sign {
        SignExponent::Dimension => s.dimension(),
        SignExponent::Order => s.order(),
    };
    Rational::from(if k % 2 == 0 { 1 } else { -1 })
}

pub fn bracket(s: &NambuStructure, v: BracketVariant, a: &Section, b: &Section) -> Result<Section> {
    check_section(s, a)?;
    check_section(s, b)?;
    let pa = anchor_pi(s, a)?;
    let lie = lie_derivative_form(&pa, b)?;
    // p <= n, so da always exists with degree p
    let da = exterior_derivative(a)?;
    match v.kind {
        BracketKind::Ibanez => {
            let density: Polynomial = pairing(s.lambda(), &da)?;
            let correction = b
                .mul_function(&density)?
                .scale(&ibanez_sign(s, v.sign_exponent));
            lie.try_add(&correction)
        }
        BracketKind::Hagiwara => {
            let pb = anchor_pi(s, b)?;
            lie.try_sub(&interior_product(&pb, &da)?)
        }
    }
}
