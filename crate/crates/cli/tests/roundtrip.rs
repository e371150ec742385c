use std::path::Path;

use proptest::collection::{btree_map, vec};
use proptest::prelude::*;
use shortcalc::{Complex, Matrix64, Tolerance64};
use shortcalc_cli::problem::parse_json;
use shortcalc_cli::ProblemFile;

fn entry() -> impl Strategy<Value = Complex<f64>> {
    let real = prop_oneof![
        Just(0.0),
        -1e3..1e3f64,
        proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO,
    ];
    (real.clone(), prop_oneof![Just(0.0), real]).prop_map(|(re, im)| Complex::new(re, im))
}

fn matrix() -> impl Strategy<Value = Matrix64> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| vec(entry(), r * c).prop_map(move |v| Matrix64::from_vec(r, c, v)))
}

fn ident() -> impl Strategy<Value = String> {
    "[A-Za-z_][A-Za-z0-9_.]{0,6}".prop_filter("reserved", |s| s != "seed" && s != "tolerance")
}

fn problem() -> impl Strategy<Value = ProblemFile> {
    (
        btree_map(ident(), matrix(), 0..4),
        btree_map(ident(), matrix(), 0..3),
        proptest::option::of((0.0..1e-3f64, 0.0..1e-2f64, 0.0..1e-1f64)),
        proptest::option::of(any::<u64>()),
    )
        .prop_map(|(matrices, mut subspaces, tol, seed)| {
            subspaces.retain(|k, _| !matrices.contains_key(k));
            ProblemFile {
                matrices,
                subspaces,
                tolerance: tol.and_then(|(a, b, c)| Tolerance64::new(a, b, c)),
                seed,
            }
        })
}

proptest! {
    #[test]
    fn serialize_then_parse_is_identity(p in problem()) {
        let text = p.to_json();
        let back = parse_json(&text, Path::new("gen.json")).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(back.to_json(), text);
    }
}
