use std::collections::BTreeMap;

use num_rational::Ratio;
use proptest::prelude::*;

use equiaffine::chart::{eval_chart_jet, parse_source, BinOp, ChartDef, DslSource, Expr, Func};

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0u32..2000).prop_map(|k| Expr::Num(k as f64 / 8.0)),
        (0usize..3).prop_map(Expr::Var),
        Just(Expr::Param("c".into())),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        let func = prop_oneof![Just(Func::Exp), Just(Func::Log), Just(Func::Sqrt), Just(Func::Sin), Just(Func::Cos)];
        let op = prop_oneof![Just(BinOp::Add), Just(BinOp::Sub), Just(BinOp::Mul), Just(BinOp::Div)];
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (func, inner.clone()).prop_map(|(f, e)| Expr::Func(f, Box::new(e))),
            (op, inner.clone(), inner.clone()).prop_map(|(o, a, b)| Expr::Bin(o, Box::new(a), Box::new(b))),
            (inner, -4i64..5, 1i64..4).prop_map(|(e, p, q)| Expr::Pow(Box::new(e), Ratio::new(p, q))),
        ]
    })
}

fn source(components: Vec<Expr>) -> DslSource {
    let mut params = BTreeMap::new();
    params.insert("c".to_string(), 0.75);
    DslSource { dim: 3, components, params }
}

proptest! {
    #[test]
    fn printed_source_reparses_to_the_same_tree(comps in prop::collection::vec(expr(), 4)) {
        let src = source(comps);
        let text = src.to_text();
        let back = parse_source(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(back, src);
    }

    /// Value and gradient of the jet agree with central differences.
    #[test]
    fn jet_gradient_matches_finite_differences(
        a in -1.0f64..1.0, b in -1.0f64..1.0, p in prop::collection::vec(-0.4f64..0.4, 2),
    ) {
        let text = format!("dim 2; x1 = u1; x2 = u2; x3 = exp({a}*u1) * cos(u2) + {b}*u1^3*u2 + sqrt(2 + u1*u2);");
        let chart: ChartDef<f64> = ChartDef::from_source(parse_source(&text).unwrap());
        let jets = eval_chart_jet(&chart, &p, 2).unwrap();
        let f = |q: &[f64]| eval_chart_jet(&chart, q, 1).unwrap()[2].value();
        let h = 1e-5;
        for k in 0..2 {
            let (mut hi, mut lo) = (p.clone(), p.clone());
            hi[k] += h;
            lo[k] -= h;
            let fd = (f(&hi) - f(&lo)) / (2.0 * h);
            prop_assert!((jets[2].gradient()[k] - fd).abs() < 1e-8, "k={} jet={} fd={}", k, jets[2].gradient()[k], fd);
        }
    }
}
