use dpgap::family::{make_family, FamilyName, FamilySpec};
use dpgap::lax::{check_state, epsilon, epsilon_matrix, gap_values_general, init_state, run_states, step_general};
use dpgap::oracle::{
    build_ortho_basis, build_ortho_basis_covering, cd_kernel, compute_ak, compute_mk,
    drhp_lax_advance, gap_probabilities_gram, gap_probability_enumeration, DrhpSolution,
};
use dpgap::table::{gap_table, Method, RunSpec};
use dpgap::{BigFloat, Mat2, Real};
use num_traits::{One, Signed, Zero};

type B = BigFloat;

fn fam(name: FamilyName, p: &[(&str, &str)]) -> FamilySpec<B> {
    let v: Vec<(&str, B)> = p.iter().map(|(k, s)| (*k, B::parse(s).unwrap())).collect();
    make_family(name, &v).unwrap()
}

fn small(x: B) -> bool {
    x.abs() < B::lit(1e-60)
}

#[test]
fn drhp_solution_properties() {
    let f = fam(FamilyName::Charlier, &[("a", "2.5")]);
    for k in 1..5 {
        for z in ["0.5", "-3.25", "7.1", "11.9"] {
            let m = compute_mk(&f, k, &B::parse(z).unwrap()).unwrap();
            assert!(small(m.det() - B::one()));
        }
        let big = B::lit(1e6);
        let m = compute_mk(&f, k, &big).unwrap();
        let d = Mat2::diag(big.powi(-(k as i32)), big.powi(k as i32));
        let lead = &m * &d;
        assert!((lead - Mat2::identity()).norm() < B::lit(1e-4));
    }
}

#[test]
fn advancing_mk_by_ak() {
    let f = fam(FamilyName::Meixner, &[("beta", "1.5"), ("c", "0.3")]);
    let k = 2;
    let mut sol = DrhpSolution::initial(&f, k);
    let sts = run_states(&f, k, k + 4).unwrap();
    for st in &sts {
        sol = drhp_lax_advance(&sol, &st.a(), &B::lit(1e-50)).unwrap();
    }
    assert_eq!(sol.s, k + 5);
    let z = B::parse("3.3").unwrap();
    assert!(small(sol.eval(&z).unwrap().det() - B::one()));
    let big = B::lit(1e8);
    let lead = &sol.eval(&big).unwrap() * &Mat2::diag(big.powi(-(k as i32)), big.powi(k as i32));
    assert!((lead - Mat2::identity()).norm() < B::lit(1e-5));

    let mut bad = sts[0].a();
    bad.a12 = bad.a12 * B::lit(1.001);
    assert!(drhp_lax_advance(&DrhpSolution::initial(&f, k), &bad, &B::lit(1e-50)).is_err());
}

#[test]
fn first_step_matches_residue_conditions() {
    let f = fam(FamilyName::Charlier, &[("a", "2")]);
    let st = init_state(&f, 2).unwrap();
    let a = compute_ak(&f, 2).unwrap();
    assert!(small(st.p.clone() - a.a11) && small(st.q.clone() - a.a12) && small(st.r.clone() - a.a21));
    let next = step_general(&st, &f).unwrap();
    let rep = check_state(&f, &next, None);
    assert!(rep.nilpotency < B::lit(1e-60));
    assert!(rep.trace.unwrap() < B::lit(1e-60));
    assert!(small(epsilon(&next, &f) - epsilon_matrix(&next, &f)));
}

#[test]
fn compatibility_along_run() {
    let f = fam(FamilyName::Charlier, &[("a", "3")]);
    let sts = run_states(&f, 3, 20).unwrap();
    for w in sts.windows(2) {
        assert!(check_state(&f, &w[0], Some(&w[1])).compatibility < B::lit(1e-60));
    }
}

#[test]
fn meixner_matches_gram() {
    let f = fam(FamilyName::Meixner, &[("beta", "0.5"), ("c", "0.9")]);
    let g = gap_values_general(&f, 4, 30).unwrap();
    let basis = build_ortho_basis_covering(&f, 4, &B::tolerance().powi(2), 31).unwrap();
    let o = gap_probabilities_gram(&basis, 4, 30).unwrap();
    for (x, y) in g.iter().zip(&o[4..]) {
        assert!(B::rel_diff(x, y) < B::lit(1e-60));
    }
}

#[test]
fn enumeration_agrees_for_charlier() {
    let f = fam(FamilyName::Charlier, &[("a", "2")]);
    let basis = build_ortho_basis(&f, 2, &B::tolerance().powi(2)).unwrap();
    let g = gap_probabilities_gram(&basis, 2, 8).unwrap();
    for s in 2..=8 {
        let e = gap_probability_enumeration(&f, 2, s, basis.truncation).unwrap();
        assert!(B::rel_diff(&e, &g[s]) < B::lit(1e-60));
    }
}

#[test]
fn kernel_is_a_projection() {
    let f = fam(FamilyName::Charlier, &[("a", "1.5")]);
    let b = build_ortho_basis(&f, 3, &B::tolerance().powi(2)).unwrap();
    let e = (-B::parse("1.5").unwrap()).exp();
    assert!(small(cd_kernel(&b, 1, 0, 0).unwrap() - e));
    assert!(small(cd_kernel(&b, 3, 2, 5).unwrap() - cd_kernel(&b, 3, 5, 2).unwrap()));
    let trace = (0..b.truncation).fold(B::zero(), |acc, x| acc + cd_kernel(&b, 3, x, x).unwrap());
    assert!((trace - B::int(3)).abs() < B::lit(1e-40));
}

#[test]
fn finite_lattice_saturates() {
    let f = fam(FamilyName::Krawtchouk, &[("p", "0.4"), ("N", "12")]);
    let basis = build_ortho_basis(&f, 3, &B::tolerance()).unwrap();
    let g = gap_probabilities_gram(&basis, 3, 13).unwrap();
    assert!(small(g[13].clone() - B::one()));
    let v = gap_values_general(&f, 3, 13).unwrap();
    assert!(small(v.last().unwrap().clone() - B::one()));
}

#[test]
fn charlier_figure_table() {
    let spec = RunSpec::new(FamilyName::Charlier, &[("a", "20")], 6, 80);
    let t = gap_table::<B>(&spec, Method::Oracle).unwrap();
    let f = spec.build::<B>().unwrap();
    let peak = t
        .rows
        .iter()
        .max_by(|a, b| a.density.partial_cmp(&b.density).unwrap())
        .unwrap()
        .s;
    // the top of six particles sits near a + 2 sqrt(a k) ≈ 42
    assert!((35..=45).contains(&peak), "peak at {peak}");
    assert!(t.min_density().unwrap() >= B::zero());
    assert!(t.mass(&f) + t.rows[0].d.clone() <= B::one() + B::lit(1e-60));
    assert!(t.is_monotone(&B::zero()));
}

#[test]
fn methods_agree_on_a_table() {
    let spec = RunSpec::new(FamilyName::LittleQLaguerre, &[("a", "1/3"), ("q", "0.8")], 3, 40);
    let tabs: Vec<_> = Method::ALL.iter().map(|m| gap_table::<B>(&spec, *m).unwrap()).collect();
    for t in &tabs[1..] {
        for (a, b) in t.rows.iter().zip(&tabs[0].rows) {
            assert!(B::rel_diff(&a.d, &b.d) < B::lit(1e-20));
            assert_eq!(a.x_coord, b.x_coord);
        }
    }
}

#[test]
fn single_precision_runs() {
    let f = make_family(FamilyName::Charlier, &[("a", 2.0f32)]).unwrap();
    let v = gap_values_general(&f, 2, 10).unwrap();
    assert!(v.windows(2).all(|w| w[1] >= w[0] - 1e-5));
    assert!((v[8] - 1.0).abs() < 1e-2);
}
