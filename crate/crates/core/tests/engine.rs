use trigreen::{
    backward_chain, build_table, convergence_study, make_guess, wedge_len, Complex64, DenseMatrix,
    EngineError, GuessKind, GuessSpec, InitialGuess, LatticeIndex, LinalgError, Wavenumber,
};

fn max_diff(a: &trigreen::GreenTable, b: &trigreen::GreenTable, radius: i64) -> f64 {
    a.entries()
        .filter(|e| e.0 + e.1 <= radius)
        .map(|(i, j, v)| (v - b.get_canonical(i, j).unwrap()).norm())
        .fold(0.0, f64::max)
}

#[test]
fn defining_equation_holds_on_the_table() {
    let k = Wavenumber::new(1.5, 0.0).unwrap();
    let t = build_table(&k, 283, 40, &GuessSpec::Zero).unwrap();
    assert_eq!(t.len(), 441);
    assert_eq!(t.len(), wedge_len(40));
    let (res, count) = t.defining_residual();
    assert!(res < 1e-8, "{res:e}");
    assert!(count > 400);
}

#[test]
fn normalization_and_first_shell() {
    let k = Wavenumber::new(1.5, 1e-2).unwrap();
    let (guess, closing) = make_guess(&GuessSpec::Shift, &k, 141).unwrap();
    let chain = backward_chain(&k, 141, 1, &guess, &closing).unwrap();
    assert_eq!(chain.len(), 1);
    assert_eq!((chain[0].rows(), chain[0].cols()), (1, 1));
    let a1 = chain[0][(0, 0)];
    let t = build_table(&k, 141, 1, &GuessSpec::Shift).unwrap();
    let g00 = t.green(LatticeIndex::new(0, 0)).unwrap();
    assert!((g00 - (6.0 * a1 - 6.0 + k.k2()).inv()).norm() < 1e-15);
    assert!((t.green(LatticeIndex::new(1, 0)).unwrap() - a1 * g00).norm() < 1e-15);
    assert!((6.0 * a1 * g00 - (6.0 - k.k2()) * g00 - 1.0).norm() < 1e-12);
}

#[test]
fn converged_values() {
    // Reference values from the same recursion at N = 1135.
    let k = Wavenumber::new(1.5, 1e-2).unwrap();
    let t = build_table(&k, 283, 4, &GuessSpec::Shift).unwrap();
    let expect = [
        ((0, 0), Complex64::new(-0.187264, -0.179036)),
        ((1, 0), Complex64::new(0.049328, -0.111585)),
        ((3, 0), Complex64::new(0.006000, 0.071368)),
        ((2, 1), Complex64::new(0.039867, 0.065157)),
    ];
    for ((i, j), v) in expect {
        let g = t.green(LatticeIndex::new(i, j)).unwrap();
        assert!((g - v).norm() < 1e-4, "({i},{j}): {g}");
    }
}

#[test]
fn shift_and_heuristic_tables_agree() {
    let shift = build_table(
        &Wavenumber::new(1.5, 1e-6).unwrap(),
        283,
        20,
        &GuessSpec::Shift,
    )
    .unwrap();
    let heur = build_table(
        &Wavenumber::new(1.5, 0.0).unwrap(),
        283,
        20,
        &GuessSpec::Heuristic { h: None },
    )
    .unwrap();
    assert_eq!(heur.guess().kind, GuessKind::Heuristic);
    let d = max_diff(&shift, &heur, 20);
    assert!(d < 1e-3, "{d:e}");
}

#[test]
fn zero_guess_fails_at_k_equal_two() {
    let k = Wavenumber::new(2.0, 0.0).unwrap();
    assert!(k.is_degenerate());
    assert!(matches!(
        build_table(&k, 141, 10, &GuessSpec::Zero),
        Err(EngineError::GuessInadmissible(_))
    ));
    // Forcing the zero closing matrix through the chain hits the singular shell.
    let guess = InitialGuess {
        kind: GuessKind::Zero,
        epsilon: 0.0,
        h: None,
        lambda: None,
    };
    let err = backward_chain(&k, 141, 10, &guess, &DenseMatrix::zeros(72, 71)).unwrap_err();
    match err {
        EngineError::Singular {
            n,
            source: LinalgError::SingularMatrix { .. },
            ..
        } => assert!(n <= 141),
        other => panic!("{other:?}"),
    }
}

#[test]
fn shift_guess_runs_at_k_equal_two() {
    let k = Wavenumber::new(2.0, 1e-6).unwrap();
    let t = build_table(&k, 283, 30, &GuessSpec::Shift).unwrap();
    assert!(t
        .entries()
        .all(|(_, _, v)| v.re.is_finite() && v.im.is_finite()));
    let (res, _) = t.defining_residual();
    assert!(res < 1e-8, "{res:e}");
}

#[test]
fn heuristic_runs_at_k_equal_two_without_shift() {
    let k = Wavenumber::new(2.0, 0.0).unwrap();
    let t = build_table(&k, 283, 30, &GuessSpec::Heuristic { h: None }).unwrap();
    let (res, _) = t.defining_residual();
    assert!(res < 1e-8, "{res:e}");
    assert!(t.guess().lambda.unwrap().im > 0.0);
}

#[test]
fn truncation_differences_decrease() {
    let k = Wavenumber::new(1.5, 1e-2).unwrap();
    let rows = convergence_study(&k, 12, &[0, 1, 2], &GuessSpec::Shift).unwrap();
    let d: Vec<f64> = rows.iter().filter_map(|r| r.difference).collect();
    assert_eq!(d.len(), 2);
    assert!(d[1] < d[0], "{d:?}");
}

#[test]
fn bad_parameters() {
    let k = Wavenumber::new(1.5, 0.0).unwrap();
    assert!(matches!(
        build_table(&k, 100, 10, &GuessSpec::Zero),
        Err(EngineError::EvenTruncation(100))
    ));
    assert!(matches!(
        build_table(&k, 11, 12, &GuessSpec::Zero),
        Err(EngineError::InvalidRadius { .. })
    ));
    assert!(matches!(
        build_table(&k, 11, 0, &GuessSpec::Zero),
        Err(EngineError::InvalidRadius { .. })
    ));
}
