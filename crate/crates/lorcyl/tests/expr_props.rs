//! Round-trip and error-surface tests for the expression language and the
//! metric spec file format.

use lorcyl::expr::{BinOp, Func, DEFAULT_PERIODICITY_SAMPLES, DEFAULT_PERIODICITY_TOL};
use lorcyl::{
    parse_metric_spec, validate_periodicity, EvalError, Expression, ExprError, MetricError,
    MetricSpec, SpecFileError,
};
use proptest::prelude::*;

fn binop() -> impl Strategy<Value = BinOp> {
    prop_oneof![
        Just(BinOp::Add),
        Just(BinOp::Sub),
        Just(BinOp::Mul),
        Just(BinOp::Div),
        Just(BinOp::Pow),
    ]
}

fn func() -> impl Strategy<Value = Func> {
    prop_oneof![Just(Func::Sin), Just(Func::Cos), Just(Func::Exp), Just(Func::Log)]
}

/// Trees the parser itself could have produced: finite non-negative
/// literals, with negation only through the explicit node.
fn expr_tree() -> impl Strategy<Value = Expression> {
    let leaf = prop_oneof![
        (0.0..100.0f64).prop_map(Expression::Number),
        Just(Expression::Number(0.0)),
        Just(Expression::Number(1.0)),
        Just(Expression::X),
        Just(Expression::Y),
        Just(Expression::Pi),
    ];
    leaf.prop_recursive(6, 48, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expression::Neg(Box::new(e))),
            (binop(), inner.clone(), inner.clone())
                .prop_map(|(op, a, b)| Expression::Binary(op, Box::new(a), Box::new(b))),
            (func(), inner).prop_map(|(f, a)| Expression::Call(f, Box::new(a))),
        ]
    })
}

proptest! {
    #[test]
    fn printing_then_parsing_reproduces_the_tree(tree in expr_tree()) {
        let text = tree.to_string();
        let reparsed = Expression::parse(&text)
            .unwrap_or_else(|err| panic!("`{text}` failed to parse: {err}"));
        prop_assert_eq!(&reparsed, &tree, "text was `{}`", text);
        // And the printed form is a fixpoint.
        prop_assert_eq!(reparsed.to_string(), text);
    }

    #[test]
    fn periodicity_check_is_deterministic(tree in expr_tree()) {
        let first = validate_periodicity(&tree, DEFAULT_PERIODICITY_SAMPLES, DEFAULT_PERIODICITY_TOL);
        let second = validate_periodicity(&tree, DEFAULT_PERIODICITY_SAMPLES, DEFAULT_PERIODICITY_TOL);
        prop_assert_eq!(first, second);
    }
}

#[test]
fn evaluation_matches_a_frozen_value() {
    let expr = Expression::parse("exp(cos(2*pi*x)) - 2^2").expect("parses");
    let value = expr.eval(0.0, 0.0).expect("evaluates");
    assert_eq!(value, -1.281718171540955);
    assert_eq!(value.to_bits(), 0xBFF4_81EA_E9D7_512E);
}

#[test]
fn operator_precedence_follows_convention() {
    let cases = [
        ("1 + 2 * 3", 7.0),
        ("(1 + 2) * 3", 9.0),
        ("2 * x ^ 2", 8.0),
        ("-x^2", -4.0),
        ("(-2)^2", 4.0),
        ("2^3^2", 512.0),
        ("10 - 2 - 3", 5.0),
        ("2*pi/pi", 2.0),
    ];
    for (text, expected) in cases {
        let expr = Expression::parse(text).expect("parses");
        assert_eq!(expr.eval(2.0, 1.0), Ok(expected), "{text}");
    }
}

#[test]
fn parse_errors_carry_positions() {
    assert_eq!(Expression::parse("1 +"), Err(ExprError::UnexpectedEnd));
    assert_eq!(Expression::parse("1) + 2"), Err(ExprError::TrailingInput { col: 2 }));
    assert!(matches!(Expression::parse("1 ? 2"), Err(ExprError::UnexpectedChar { col: 3, ch: '?' })));
    assert!(matches!(
        Expression::parse("foo(2)"),
        Err(ExprError::UnknownName { col: 1, .. })
    ));
    assert_eq!(Expression::parse("(1 + 2"), Err(ExprError::UnexpectedEnd));
    assert!(matches!(Expression::parse("sin 2"), Err(ExprError::Expected { .. })));
    assert!(Expression::parse("").is_err());

    // Each parenthesis level passes through several grammar rules, so the
    // depth guard trips well before 512 literal parens.
    let deep = format!("{}1{}", "(".repeat(600), ")".repeat(600));
    assert_eq!(Expression::parse(&deep), Err(ExprError::TooDeep));
    let shallow = format!("{}1{}", "(".repeat(80), ")".repeat(80));
    assert!(Expression::parse(&shallow).is_ok());
}

#[test]
fn evaluation_errors_are_deterministic() {
    let cases: [(&str, EvalError); 5] = [
        ("1/0", EvalError::DivisionByZero),
        ("log(0)", EvalError::LogDomain { arg: 0.0 }),
        ("log(0 - 1)", EvalError::LogDomain { arg: -1.0 }),
        ("(0-2)^0.5", EvalError::PowDomain { base: -2.0, exponent: 0.5 }),
        ("exp(1000)", EvalError::NonFinite),
    ];
    for (text, expected) in cases {
        let expr = Expression::parse(text).expect("parses");
        assert_eq!(expr.eval(0.5, 0.5), Err(expected), "{text}");
    }
}

#[test]
fn periodicity_check_separates_wrapping_from_drifting() {
    let periodic = ["0", "sin(2*pi*x)", "y*y + 3", "cos(2*pi*x) * exp(y)", "sin(4*pi*x) - y"];
    for text in periodic {
        let expr = Expression::parse(text).expect("parses");
        assert_eq!(
            validate_periodicity(&expr, DEFAULT_PERIODICITY_SAMPLES, DEFAULT_PERIODICITY_TOL),
            Ok(true),
            "{text}"
        );
    }
    let aperiodic = ["x", "sin(pi*x)", "x*y", "x + sin(2*pi*x)"];
    for text in aperiodic {
        let expr = Expression::parse(text).expect("parses");
        assert_eq!(
            validate_periodicity(&expr, DEFAULT_PERIODICITY_SAMPLES, DEFAULT_PERIODICITY_TOL),
            Ok(false),
            "{text}"
        );
    }
    let undefined = Expression::parse("log(x - 2)").expect("parses");
    assert!(validate_periodicity(&undefined, DEFAULT_PERIODICITY_SAMPLES, DEFAULT_PERIODICITY_TOL)
        .is_err());
}

#[test]
fn spec_files_parse_into_the_three_shapes() {
    let flat = parse_metric_spec("type = flat\nE = 2\nF = 0.5\nG = 1\n").expect("parses");
    match flat {
        MetricSpec::Flat(m) => {
            assert_eq!((m.e(), m.f(), m.g()), (2.0, 0.5, 1.0));
        }
        other => panic!("expected a flat spec, got {other:?}"),
    }

    let conformal = parse_metric_spec(
        "# comment line\n\ntype = conformal\nE = -1\nF = 0\nG = -1\npsi = sin(2*pi*x)\n",
    )
    .expect("parses");
    match &conformal {
        MetricSpec::Conformal { base, psi } => {
            assert_eq!(base.e(), -1.0);
            assert_eq!(psi.to_string(), "sin(2*pi*x)");
        }
        other => panic!("expected a conformal spec, got {other:?}"),
    }
    assert!(conformal.flat_part().is_some());

    let general =
        parse_metric_spec("type = general\nE = 1 + 0.25*sin(2*pi*x)\nF = 0\nG = 1\n")
            .expect("parses");
    match &general {
        MetricSpec::General { e, .. } => {
            assert_eq!(e.eval(0.25, 0.0), Ok(1.25));
        }
        other => panic!("expected a general spec, got {other:?}"),
    }
    assert!(general.flat_part().is_none());
}

#[test]
fn spec_file_errors_name_the_offending_line() {
    use SpecFileError::*;
    assert_eq!(
        parse_metric_spec("type = flat\nE 1\n"),
        Err(MissingEquals { line: 2 })
    );
    assert!(matches!(
        parse_metric_spec("type = flat\nQ = 1\n"),
        Err(UnknownKey { line: 2, .. })
    ));
    assert!(matches!(
        parse_metric_spec("type = flat\nE = 1\nE = 2\n"),
        Err(DuplicateKey { line: 3, .. })
    ));
    assert_eq!(parse_metric_spec("E = 1\nF = 0\nG = 1\n"), Err(MissingKey { key: "type" }));
    assert_eq!(
        parse_metric_spec("type = flat\nE = 1\nF = 0\n"),
        Err(MissingKey { key: "G" })
    );
    assert!(matches!(
        parse_metric_spec("type = warped\nE = 1\nF = 0\nG = 1\n"),
        Err(UnknownType { line: 1, .. })
    ));
    assert!(matches!(
        parse_metric_spec("type = flat\nE = abc\nF = 0\nG = 1\n"),
        Err(InvalidNumber { line: 2, .. })
    ));
    assert!(matches!(
        parse_metric_spec("type = general\nE = sin(\nF = 0\nG = 1\n"),
        Err(Expr { line: 2, .. })
    ));
    assert!(matches!(
        parse_metric_spec("type = flat\nE = 1\nF = 0\nG = 1\npsi = x\n"),
        Err(UnexpectedPsi { line: 5 })
    ));
    assert!(matches!(
        parse_metric_spec("type = general\nE = 1\nF = 0\nG = 1\npsi = x\n"),
        Err(UnexpectedPsi { line: 5 })
    ));
    // Signature validation happens at parse time for constant coefficients.
    assert!(matches!(
        parse_metric_spec("type = flat\nE = 1\nF = 0\nG = -2\n"),
        Err(Metric(MetricError::NotLorentzian { .. }))
    ));
}

#[test]
fn comments_and_blank_lines_count_toward_line_numbers() {
    let text = "# header\n\ntype = flat\n# middle\nE = oops\nF = 0\nG = 1\n";
    assert!(matches!(
        parse_metric_spec(text),
        Err(SpecFileError::InvalidNumber { line: 5, .. })
    ));
}
