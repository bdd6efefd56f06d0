use super::{
    anchor_pi, bracket, check_section, derive_anchor, relation_scalar, BracketVariant,
    LeibnizBracket, Section, SignExponent,
};
use crate::calculus::{vf_commutator, NambuStructure};
use crate::error::Result;
use crate::exterior::MultivectorField;
use crate::ring::Polynomial;

/// Where the anchor comes from in a homomorphism check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnchorSource {
    /// `i(a) L`, computed from the structure.
    Pi,
    /// Recovered from the bracket via the defining relation only.
    Derived,
}

/// `[[a, [[b, c]]]] - [[[[a, b]], c]] - [[b, [[a, c]]]]`.
pub fn check_leibniz_identity<B: LeibnizBracket + ?Sized>(
    br: &B,
    a: &Section,
    b: &Section,
    c: &Section,
) -> Result<Section> {
    let lhs = br.bracket(a, &br.bracket(b, c)?)?;
    let first = br.bracket(&br.bracket(a, b)?, c)?;
    let second = br.bracket(b, &br.bracket(a, c)?)?;
    lhs.try_sub(&first)?.try_sub(&second)
}

fn anchor_of<B: LeibnizBracket + ?Sized>(
    br: &B,
    a: &Section,
    source: AnchorSource,
) -> Result<MultivectorField> {
    match source {
        AnchorSource::Pi => anchor_pi(br.structure(), a),
        AnchorSource::Derived => Ok(derive_anchor(br, a)?.vector_field()),
    }
}

/// `rho([[a, b]]) - [rho(a), rho(b)]`.
pub fn check_anchor_homomorphism<B: LeibnizBracket + ?Sized>(
    br: &B,
    a: &Section,
    b: &Section,
    source: AnchorSource,
) -> Result<MultivectorField> {
    let ab = br.bracket(a, b)?;
    let lhs = anchor_of(br, &ab, source)?;
    let rhs = vf_commutator(&anchor_of(br, a, source)?, &anchor_of(br, b, source)?)?;
    lhs.try_sub(&rhs)
}

/// `[[a, f b]] - f [[a, b]] - (P(a) f) b`.
pub fn check_leibniz_rule<B: LeibnizBracket + ?Sized>(
    br: &B,
    a: &Section,
    b: &Section,
    f: &Polynomial,
) -> Result<Section> {
    let fb = b.mul_function(f)?;
    let anchor_f = anchor_pi(br.structure(), a)?.apply(f)?;
    br.bracket(a, &fb)?
        .try_sub(&br.bracket(a, b)?.mul_function(f)?)?
        .try_sub(&b.mul_function(&anchor_f)?)
}

/// `a(fg) - f a(g) - g a(f)` where `a(h)` is evaluated through the bracket
/// relation `(a(X) h) Y = [[X, h Y]] - h [[X, Y]]` for each argument, so the
/// derivation property is tested rather than inherited from a vector field.
pub fn check_derivation_property<B: LeibnizBracket + ?Sized>(
    br: &B,
    a: &Section,
    f: &Polynomial,
    g: &Polynomial,
) -> Result<Polynomial> {
    let fg = f.try_mul(g)?;
    let a_fg = relation_scalar(br, a, &fg)?;
    let a_f = relation_scalar(br, a, f)?;
    let a_g = relation_scalar(br, a, g)?;
    Ok(&(&a_fg - &(f * &a_g)) - &(g * &a_f))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AntisymmetryDefects {
    /// `[[a, b]] + [[b, a]]`; may be nonzero for a Leibniz bracket.
    pub bracket_defect: Section,
    /// `P([[a, b]] + [[b, a]])`.
    pub anchored_defect: MultivectorField,
}

pub fn check_antisymmetry_defects<B: LeibnizBracket + ?Sized>(
    br: &B,
    a: &Section,
    b: &Section,
) -> Result<AntisymmetryDefects> {
    let bracket_defect = br.bracket(a, b)?.try_add(&br.bracket(b, a)?)?;
    let anchored_defect = anchor_pi(br.structure(), &bracket_defect)?;
    Ok(AntisymmetryDefects {
        bracket_defect,
        anchored_defect,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariantDifference {
    /// Ibanez bracket minus Hagiwara bracket.
    pub raw_difference: Section,
    pub anchored_difference: MultivectorField,
}

pub fn compare_variants(
    s: &NambuStructure,
    a: &Section,
    b: &Section,
    sign: SignExponent,
) -> Result<VariantDifference> {
    check_section(s, a)?;
    check_section(s, b)?;
    let ibanez = bracket(s, BracketVariant::ibanez(sign), a, b)?;
    let hagiwara = bracket(s, BracketVariant::hagiwara(), a, b)?;
    let raw_difference = ibanez.try_sub(&hagiwara)?;
    let anchored_difference = anchor_pi(s, &raw_difference)?;
    Ok(VariantDifference {
        raw_difference,
        anchored_difference,
    })
}
