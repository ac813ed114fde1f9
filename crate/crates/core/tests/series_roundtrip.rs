use proptest::prelude::*;

use kamforge::scalar::ScalarContext;
use kamforge::series::{BracketMode, PoissonSeries, SeriesSpace, TermKey, TruncationSpec};

fn space(ctx: ScalarContext, mode: BracketMode) -> SeriesSpace {
    SeriesSpace::new(ctx, TruncationSpec::new(2, 4, 3, 3), mode)
}

fn term() -> impl Strategy<Value = (Vec<i32>, Vec<u32>, u32, i64, i64, i64)> {
    (
        prop::collection::vec(-3i32..=3, 2),
        prop::collection::vec(0u32..=2, 2),
        0u32..=3,
        -50i64..=50,
        1i64..=9,
        -3i64..=3,
    )
}

fn build(s: &SeriesSpace, terms: &[(Vec<i32>, Vec<u32>, u32, i64, i64, i64)]) -> PoissonSeries {
    let mut out = s.zero();
    for (q, p, t, a, d, b) in terms {
        let lit = match s.context {
            ScalarContext::Quadratic(r) => format!("[{a}/{d}, {b}, {r}]"),
            _ => format!("{a}/{d}"),
        };
        let q = if s.mode == BracketMode::Symplectic { q.iter().map(|x| x.abs()).collect() } else { q.clone() };
        out.insert(TermKey::new(q, p.clone(), *t), s.context.parse(&lit).unwrap()).unwrap();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn json_round_trip(terms in prop::collection::vec(term(), 0..8), quad in any::<bool>(), symplectic in any::<bool>()) {
        let ctx = if quad { ScalarContext::quadratic(5).unwrap() } else { ScalarContext::Rational };
        let mode = if symplectic { BracketMode::Symplectic } else { BracketMode::Torus };
        let s = build(&space(ctx, mode), &terms);
        let text = s.to_json();
        let back = PoissonSeries::from_json(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn bracket_is_antisymmetric(a in prop::collection::vec(term(), 0..5), b in prop::collection::vec(term(), 0..5)) {
        let sp = space(ScalarContext::Rational, BracketMode::Torus);
        let (f, g) = (build(&sp, &a), build(&sp, &b));
        prop_assert!(f.bracket(&g).unwrap().add(&g.bracket(&f).unwrap()).unwrap().is_zero());
    }
}

#[test]
fn float_context_round_trips() {
    let s = SeriesSpace::new(ScalarContext::Float64, TruncationSpec::new(1, 2, 1, 1), BracketMode::Torus);
    let f = s.p(0).add(&s.monomial(vec![-1], vec![0], 1, s.context.parse("0.1").unwrap()).unwrap()).unwrap();
    assert_eq!(PoissonSeries::from_json(&f.to_json()).unwrap(), f);
}

#[test]
fn foreign_documents_are_rejected() {
    for bad in [
        r#"{"n":1,"context":"rational","trunc":{"dp":1,"dt":0,"nq":0},"mode":"torus","terms":[[[0],[2],0,"1"]]}"#,
        r#"{"n":1,"context":"rational","trunc":{"dp":1,"dt":0,"nq":0},"mode":"torus","terms":[[[0,0],[1],0,"1"]]}"#,
        r#"{"n":1,"context":{"quadratic":4},"trunc":{"dp":1,"dt":0,"nq":0},"mode":"torus","terms":[]}"#,
        r#"{"n":1,"context":"rational","trunc":{"dp":1,"dt":0,"nq":0},"mode":"torus","terms":[],"x":1}"#,
    ] {
        assert!(PoissonSeries::from_json(bad).is_err(), "{bad}");
    }
}
