//! Plain-text scenes and expressions.
//!
//! A scene is line oriented:
//!
//! ```text
//! dim 3
//! coords x y z
//! func h = x^2 - 1/3
//! structure L order 3 = (1)*e1^e2^e3
//! section a = (h)*dx2^dx3
//! ```
//!
//! Basis tokens are `dx<k>` in forms and `e<k>` in multivectors, 1-based.
//! Coefficients sit in parentheses, so `^` inside them is a power and `^`
//! between basis tokens is a wedge.

mod lexer;
mod parser;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::algebroid::Section;
use crate::calculus::NambuStructure;
use crate::exterior::{Chart, DifferentialForm, MultivectorField};
use crate::ring::Polynomial;
use lexer::{tokenize, TokenKind};
use parser::{Env, Parser};

pub use lexer::Token;

/// Syntax error at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message} (found `{token}`)")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub token: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("line {line}: section `{section}` has degree {found} but structure `{structure}` needs degree {expected}")]
    DegreeMismatch {
        line: usize,
        section: String,
        structure: String,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: crate::Error,
    },
}

impl DslError {
    /// 1-based line the error refers to.
    pub fn line(&self) -> usize {
        match self {
            DslError::Parse(e) => e.line,
            DslError::DegreeMismatch { line, .. } | DslError::Invalid { line, .. } => *line,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Scene {
    chart: Arc<Chart>,
    structures: Vec<NambuStructure>,
    sections: Vec<(String, Section)>,
    functions: Vec<(String, Polynomial)>,
}

impl Scene {
    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn structures(&self) -> &[NambuStructure] {
        &self.structures
    }

    pub fn sections(&self) -> &[(String, Section)] {
        &self.sections
    }

    pub fn functions(&self) -> &[(String, Polynomial)] {
        &self.functions
    }

    pub fn structure(&self, name: &str) -> Option<&NambuStructure> {
        self.structures.iter().find(|s| s.name() == Some(name))
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
    }

    pub fn function(&self, name: &str) -> Option<&Polynomial> {
        self.functions
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, f)| f)
    }
}

/// What an expression should parse to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExprKind {
    Form,
    Multivector,
    Function,
}

impl FromStr for ExprKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "form" => Ok(ExprKind::Form),
            "multivector" => Ok(ExprKind::Multivector),
            "function" => Ok(ExprKind::Function),
            other => Err(format!("unknown expression kind `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Function(Polynomial),
    Form(DifferentialForm),
    Multivector(MultivectorField),
}

impl Value {
    pub fn kind(&self) -> ExprKind {
        match self {
            Value::Function(_) => ExprKind::Function,
            Value::Form(_) => ExprKind::Form,
            Value::Multivector(_) => ExprKind::Multivector,
        }
    }
}

/// Canonical text for `value`; it parses back to an equal value.
pub fn render(value: &Value, chart: &Chart) -> String {
    match value {
        Value::Function(f) => chart.render(f),
        Value::Form(w) => w.render(),
        Value::Multivector(m) => m.render(),
    }
}

/// Parses one expression over `chart`. Only coordinate names are in scope.
pub fn parse_expression(
    text: &str,
    chart: &Arc<Chart>,
    kind: ExprKind,
) -> Result<Value, ParseError> {
    parse_expression_with(text, chart, &HashMap::new(), kind)
}

fn parse_expression_with(
    text: &str,
    chart: &Arc<Chart>,
    functions: &HashMap<String, Polynomial>,
    kind: ExprKind,
) -> Result<Value, ParseError> {
    let mut p = Parser::new(tokenize(text)?);
    let env = Env { chart, functions };
    p.skip_newlines();
    let value = match kind {
        ExprKind::Function => Value::Function(p.polynomial(&env)?),
        ExprKind::Form => Value::Form(p.tensor(&env)?),
        ExprKind::Multivector => Value::Multivector(p.tensor(&env)?),
    };
    p.skip_newlines();
    if *p.peek_kind() != TokenKind::Eof {
        return Err(p.error(p.peek(), "expected end of expression"));
    }
    Ok(value)
}

pub fn parse_form(text: &str, chart: &Arc<Chart>) -> Result<DifferentialForm, ParseError> {
    match parse_expression(text, chart, ExprKind::Form)? {
        Value::Form(w) => Ok(w),
        _ => unreachable!("form parser returns forms"),
    }
}

pub fn parse_multivector(text: &str, chart: &Arc<Chart>) -> Result<MultivectorField, ParseError> {
    match parse_expression(text, chart, ExprKind::Multivector)? {
        Value::Multivector(m) => Ok(m),
        _ => unreachable!("multivector parser returns multivectors"),
    }
}

pub fn parse_function(text: &str, chart: &Arc<Chart>) -> Result<Polynomial, ParseError> {
    match parse_expression(text, chart, ExprKind::Function)? {
        Value::Function(f) => Ok(f),
        _ => unreachable!("function parser returns polynomials"),
    }
}

const KEYWORDS: [&str; 6] = ["dim", "coords", "structure", "section", "func", "order"];

fn is_basis_name(name: &str) -> bool {
    ["dx", "e"].iter().any(|prefix| {
        name.strip_prefix(prefix)
            .is_some_and(|rest| !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()))
    })
}

struct SceneBuilder {
    dim: Option<(usize, Token)>,
    chart: Option<Arc<Chart>>,
    structures: Vec<(usize, NambuStructure)>,
    sections: Vec<(usize, String, Section)>,
    functions: Vec<(String, Polynomial)>,
    function_map: HashMap<String, Polynomial>,
}

impl SceneBuilder {
    /// The chart, fixing it to `x1..xn` if no `coords` line came first.
    fn chart(&mut self, p: &Parser, at: &Token) -> Result<Arc<Chart>, ParseError> {
        if let Some(c) = &self.chart {
            return Ok(c.clone());
        }
        let Some((n, _)) = &self.dim else {
            return Err(p.error(at, "expected `dim` before any definition"));
        };
        let chart = Arc::new(Chart::standard(*n).map_err(|e| p.error(at, e.to_string()))?);
        self.chart = Some(chart.clone());
        Ok(chart)
    }

    fn name_in_use(&self, name: &str, taken: impl Fn(&str) -> bool) -> bool {
        taken(name)
            || KEYWORDS.contains(&name)
            || is_basis_name(name)
            || self
                .chart
                .as_ref()
                .is_some_and(|c| c.index_of(name).is_some())
    }
}

/// Parses a whole scene.
pub fn parse_scene(text: &str) -> Result<Scene, DslError> {
    let mut p = Parser::new(tokenize(text)?);
    let mut b = SceneBuilder {
        dim: None,
        chart: None,
        structures: Vec::new(),
        sections: Vec::new(),
        functions: Vec::new(),
        function_map: HashMap::new(),
    };

    loop {
        p.skip_newlines();
        let head = p.peek().clone();
        let keyword = match &head.kind {
            TokenKind::Eof => break,
            TokenKind::Ident(k) => k.clone(),
            _ => return Err(p.error(&head, "expected statement keyword").into()),
        };
        p.advance();
        match keyword.as_str() {
            "dim" => {
                if b.dim.is_some() {
                    return Err(p.error(&head, "duplicate `dim` statement").into());
                }
                let (n, tok) = p.expect_int("dim statement")?;
                let n: usize = n
                    .parse()
                    .ok()
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| p.error(&tok, "dimension must be a positive integer"))?;
                b.dim = Some((n, tok));
                p.expect_end_of_statement("dim statement")?;
            }
            "coords" => {
                let Some((n, _)) = b.dim.clone() else {
                    return Err(p.error(&head, "expected `dim` before `coords`").into());
                };
                if b.chart.is_some() {
                    return Err(p
                        .error(
                            &head,
                            "`coords` must precede every definition and appear once",
                        )
                        .into());
                }
                let mut names: Vec<String> = Vec::new();
                while let TokenKind::Ident(name) = p.peek_kind().clone() {
                    let tok = p.advance();
                    if names.contains(&name) {
                        return Err(p
                            .error(&tok, format!("duplicate coordinate `{name}`"))
                            .into());
                    }
                    if KEYWORDS.contains(&name.as_str()) || is_basis_name(&name) {
                        return Err(p
                            .error(
                                &tok,
                                format!("`{name}` is reserved and cannot name a coordinate"),
                            )
                            .into());
                    }
                    names.push(name);
                }
                if names.len() != n {
                    return Err(p
                        .error(
                            p.peek(),
                            format!(
                                "expected {n} coordinate names in coords statement, found {}",
                                names.len()
                            ),
                        )
                        .into());
                }
                p.expect_end_of_statement("coords statement")?;
                let chart = Chart::new(names).map_err(|e| p.error(&head, e.to_string()))?;
                b.chart = Some(Arc::new(chart));
            }
            "func" => {
                let chart = b.chart(&p, &head)?;
                let (name, tok) = p.expect_ident("func statement")?;
                if b.name_in_use(&name, |n| b.function_map.contains_key(n)) {
                    return Err(p
                        .error(&tok, format!("function name `{name}` is already taken"))
                        .into());
                }
                p.expect(TokenKind::Equals, "func statement")?;
                let env = Env {
                    chart: &chart,
                    functions: &b.function_map,
                };
                let f = p.polynomial(&env)?;
                p.expect_end_of_statement("func statement")?;
                b.function_map.insert(name.clone(), f.clone());
                b.functions.push((name, f));
            }
            "structure" => {
                let chart = b.chart(&p, &head)?;
                let (name, tok) = p.expect_ident("structure statement")?;
                if b.name_in_use(&name, |n| {
                    b.structures.iter().any(|(_, s)| s.name() == Some(n))
                }) {
                    return Err(p
                        .error(&tok, format!("structure name `{name}` is already taken"))
                        .into());
                }
                match p.peek_kind() {
                    TokenKind::Ident(k) if k == "order" => {
                        p.advance();
                    }
                    _ => {
                        return Err(p
                            .error(p.peek(), "expected `order` in structure statement")
                            .into())
                    }
                }
                let (order, order_tok) = p.expect_int("structure statement")?;
                let order: usize = order
                    .parse()
                    .map_err(|_| p.error(&order_tok, "order too large"))?;
                p.expect(TokenKind::Equals, "structure statement")?;
                let env = Env {
                    chart: &chart,
                    functions: &b.function_map,
                };
                let lambda: MultivectorField = p.tensor(&env)?;
                p.expect_end_of_statement("structure statement")?;
                let s = NambuStructure::with_order(order, lambda)
                    .map_err(|source| DslError::Invalid {
                        line: head.line,
                        source,
                    })?
                    .named(name);
                b.structures.push((head.line, s));
            }
            "section" => {
                let chart = b.chart(&p, &head)?;
                let (name, tok) = p.expect_ident("section statement")?;
                if b.name_in_use(&name, |n| b.sections.iter().any(|(_, m, _)| m == n)) {
                    return Err(p
                        .error(&tok, format!("section name `{name}` is already taken"))
                        .into());
                }
                p.expect(TokenKind::Equals, "section statement")?;
                let env = Env {
                    chart: &chart,
                    functions: &b.function_map,
                };
                let a: Section = p.tensor(&env)?;
                p.expect_end_of_statement("section statement")?;
                b.sections.push((head.line, name, a));
            }
            _ => {
                return Err(p
                    .error(
                        &head,
                        "expected statement keyword (dim, coords, structure, section or func)",
                    )
                    .into())
            }
        }
    }

    let chart = match (&b.chart, &b.dim) {
        (Some(c), _) => c.clone(),
        (None, Some((n, tok))) => {
            Arc::new(Chart::standard(*n).map_err(|e| p.error(tok, e.to_string()))?)
        }
        (None, None) => return Err(p.error(p.peek(), "expected `dim` statement").into()),
    };

    for (line, name, a) in &b.sections {
        for (_, s) in &b.structures {
            if a.degree() + 1 != s.order() {
                return Err(DslError::DegreeMismatch {
                    line: *line,
                    section: name.clone(),
                    structure: s.name().unwrap_or_default().to_string(),
                    expected: s.order() - 1,
                    found: a.degree(),
                });
            }
        }
    }

    Ok(Scene {
        chart,
        structures: b.structures.into_iter().map(|(_, s)| s).collect(),
        sections: b.sections.into_iter().map(|(_, n, a)| (n, a)).collect(),
        functions: b.functions,
    })
}

impl fmt::Display for ExprKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExprKind::Form => "form",
            ExprKind::Multivector => "multivector",
            ExprKind::Function => "function",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{sample_tensor, Contravariant, Covariant, MultiIndex};
    use crate::ring::{sample_polynomial, trial_rng, Rational};
    use proptest::prelude::*;

    const R3: &str = "dim 3\ncoords x y z\nstructure L order 3 = (1)*e1^e2^e3";

    fn chart(n: usize) -> Arc<Chart> {
        Arc::new(Chart::standard(n).unwrap())
    }

    #[test]
    fn canonical_r3_scene() {
        let scene = parse_scene(R3).unwrap();
        assert_eq!(scene.chart().names(), ["x", "y", "z"]);
        let s = scene.structure("L").unwrap();
        assert_eq!(s.order(), 3);
        let expected = MultivectorField::basis(scene.chart().clone(), &[0, 1, 2]).unwrap();
        assert_eq!(s.lambda(), &expected);
    }

    #[test]
    fn section_in_scene() {
        let scene = parse_scene(&format!("{R3}\nsection a = (x)*dx2^dx3\n")).unwrap();
        let a = scene.section("a").unwrap();
        let x = scene.chart().coordinate(0).unwrap();
        let expected =
            DifferentialForm::from_components(scene.chart().clone(), 2, [(vec![1, 2], x)]).unwrap();
        assert_eq!(a, &expected);
    }

    #[test]
    fn duplicate_coordinate_is_rejected() {
        let err = parse_scene("dim 3\ncoords x x z").unwrap_err();
        let DslError::Parse(e) = err else {
            panic!("{err}")
        };
        assert_eq!((e.line, e.column), (2, 10));
        assert!(e.message.contains("duplicate coordinate"));
    }

    #[test]
    fn default_coordinates_and_functions() {
        let scene = parse_scene(
            "# comment line\ndim 2\nfunc h = x1^2 - 1/3\nfunc k = 2*h\nstructure P order 2 = (k)*e1^e2\nsection a = (x2)*dx1",
        )
        .unwrap();
        assert_eq!(scene.chart().names(), ["x1", "x2"]);
        let h = scene.function("h").unwrap();
        assert_eq!(scene.chart().render(h), "x1^2 - 1/3");
        let lambda = scene.structure("P").unwrap().lambda();
        assert_eq!(lambda.render(), "(2*x1^2 - 2/3)*e1^e2");
        assert_eq!(scene.sections().len(), 1);
    }

    #[test]
    fn section_degree_must_match_every_structure() {
        let err = parse_scene(&format!("{R3}\nsection a = (x)*dx1")).unwrap_err();
        assert!(matches!(
            err,
            DslError::DegreeMismatch {
                line: 4,
                expected: 2,
                found: 1,
                ..
            }
        ));
    }

    #[test]
    fn declared_order_must_match_degree() {
        let err = parse_scene("dim 3\nstructure L order 2 = e1^e2^e3").unwrap_err();
        assert!(matches!(err, DslError::Invalid { line: 2, .. }), "{err}");
        let err = parse_scene("dim 3\nstructure L order 1 = e1").unwrap_err();
        assert!(matches!(err, DslError::Invalid { line: 2, .. }), "{err}");
    }

    #[test]
    fn name_clashes() {
        assert!(parse_scene(&format!("{R3}\nstructure L order 3 = (2)*e1^e2^e3")).is_err());
        assert!(parse_scene("dim 2\nfunc x1 = 3").is_err());
        assert!(parse_scene("dim 2\ncoords dx1 y").is_err());
        assert!(parse_scene("dim 2\nfunc f = 1\nfunc f = 2").is_err());
        // categories are separate namespaces
        assert!(
            parse_scene("dim 2\nfunc a = 1\nstructure a order 2 = e1^e2\nsection a = dx1").is_ok()
        );
    }

    #[test]
    fn statement_order_errors() {
        let e = parse_scene("coords x y").unwrap_err();
        assert_eq!(e.line(), 1);
        let e = parse_scene("dim 2\nsection a = dx1\ncoords x y").unwrap_err();
        assert_eq!(e.line(), 3);
        let e = parse_scene("dim 2\ncoords x y z").unwrap_err();
        assert_eq!(e.line(), 2);
        let e = parse_scene("dim 2\nsection a = dx1 dx2").unwrap_err();
        assert_eq!(e.line(), 2);
        assert!(parse_scene("").is_err());
    }

    #[test]
    fn form_with_two_components() {
        let c = chart(2);
        let w = parse_form("(2/3)*dx1 + (x1^2)*dx2", &c).unwrap();
        assert_eq!(w.degree(), 1);
        assert_eq!(w.components().count(), 2);
        let two_thirds = Rational::from_signeds(2, 3);
        assert_eq!(
            w.coefficient(&MultiIndex::new(vec![0], 2).unwrap()),
            Polynomial::constant(2, two_thirds)
        );
        let x1 = c.coordinate(0).unwrap();
        assert_eq!(
            w.coefficient(&MultiIndex::new(vec![1], 2).unwrap()),
            &x1 * &x1
        );
    }

    #[test]
    fn double_caret_is_a_parse_error() {
        let e = parse_form("dx1^^dx2", &chart(2)).unwrap_err();
        assert_eq!((e.line, e.column), (1, 5));
        assert_eq!(e.token, "^");
    }

    #[test]
    fn scaled_trivector() {
        let c = chart(4);
        let m = parse_multivector("(x1)*e1^e2^e3", &c).unwrap();
        let expected = MultivectorField::from_components(
            c.clone(),
            3,
            [(vec![0, 1, 2], c.coordinate(0).unwrap())],
        )
        .unwrap();
        assert_eq!(m, expected);
    }

    #[test]
    fn basis_kind_mismatch() {
        let c = chart(3);
        let e = parse_form("(x1)*e1", &c).unwrap_err();
        assert!(e.message.contains("wrong kind"), "{e}");
        let e = parse_multivector("dx1^dx2", &c).unwrap_err();
        assert!(e.message.contains("wrong kind"), "{e}");
        let e = parse_form("dx4", &c).unwrap_err();
        assert!(e.message.contains("outside"), "{e}");
    }

    #[test]
    fn wedge_binds_tighter_than_sum_and_reorders() {
        let c = chart(3);
        let w = parse_form("dx2^dx1 + (3)*dx1^dx3 - dx3^dx1", &c).unwrap();
        assert_eq!(w.render(), "(-1)*dx1^dx2 + (4)*dx1^dx3");
        assert!(parse_form("dx1 + dx1^dx2", &c).is_err());
        assert!(parse_form("dx1^dx1", &c).unwrap().is_zero());
        assert_eq!(parse_form("-(x2)*dx1", &c).unwrap().render(), "(-x2)*dx1");
    }

    #[test]
    fn renders_of_zero_and_anchor_value() {
        let c = chart(3);
        let zero = DifferentialForm::zero(c.clone(), 0).unwrap();
        assert_eq!(render(&Value::Form(zero), &c), "(0)");
        let lambda = MultivectorField::basis(c.clone(), &[0, 1, 2]).unwrap();
        let s = NambuStructure::new(lambda).unwrap();
        let dxdy = DifferentialForm::basis(c.clone(), &[0, 1]).unwrap();
        let pi = crate::algebroid::anchor_pi(&s, &dxdy).unwrap();
        assert_eq!(render(&Value::Multivector(pi), &c), "(1)*e3");
    }

    #[test]
    fn every_error_position_lies_in_the_input() {
        let c = chart(2);
        let bad = [
            "(x1",
            "dx1^",
            "(x1)*",
            "x1",
            "(1/0)*dx1",
            "(x1/x2)*dx1",
            "dx1 dx2",
            "(x1)*dx1 ! dx2",
            "(x3)*dx1",
        ];
        for text in bad {
            let e = parse_form(text, &c).unwrap_err();
            let lines: Vec<&str> = text.split('\n').collect();
            assert!(e.line >= 1 && e.line <= lines.len(), "{text}: {e}");
            assert!(
                e.column >= 1 && e.column <= lines[e.line - 1].chars().count() + 1,
                "{text}: {e}"
            );
        }
    }

    fn roundtrip<V: crate::exterior::Variance>(c: &Arc<Chart>, seed: u64, degree: usize) {
        let mut rng = trial_rng(seed, 0);
        let t = sample_tensor::<V, _>(&mut rng, c, degree, 2, 5).unwrap();
        let text = t.render();
        let kind = if V::BASIS == "dx" {
            ExprKind::Form
        } else {
            ExprKind::Multivector
        };
        let back = parse_expression(&text, c, kind).unwrap();
        let text2 = render(&back, c);
        assert_eq!(text, text2);
        match back {
            Value::Form(w) => assert_eq!(
                w.components().collect::<Vec<_>>(),
                t.components().collect::<Vec<_>>()
            ),
            Value::Multivector(m) => assert_eq!(
                m.components().collect::<Vec<_>>(),
                t.components().collect::<Vec<_>>()
            ),
            Value::Function(_) => unreachable!(),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn polynomial_roundtrip(seed in any::<u64>(), n in 1usize..4) {
            let c = Arc::new(Chart::new(["x", "y", "z"].into_iter().take(n)).unwrap());
            let mut rng = trial_rng(seed, 0);
            let f = sample_polynomial(&mut rng, n, 3, 7);
            let text = c.render(&f);
            prop_assert_eq!(parse_function(&text, &c).unwrap(), f);
        }

        #[test]
        fn tensor_roundtrip(seed in any::<u64>(), n in 1usize..5, k in 0usize..5) {
            let c = chart(n);
            let k = k.min(n);
            roundtrip::<Covariant>(&c, seed, k);
            roundtrip::<Contravariant>(&c, seed, k);
        }
    }
}
