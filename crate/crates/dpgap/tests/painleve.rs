use dpgap::family::{make_family, make_family_with, FamilyName, FamilyOptions, FamilySpec};
use dpgap::lax::{gap_values_general, run_states, LaxState};
use dpgap::painleve::closed::{closed_init, gap_values_closed};
use dpgap::painleve::dp::{dp_from_lax, sakai_dpv, sakai_dpv_lambda};
use dpgap::painleve::qcharlier::{qcharlier_init, qcharlier_step};
use dpgap::painleve::qp6::{
    compat_samples, det_factorization_residual, js_extract, js_extract_and_check, js_vars_check,
    qp6_build, qp6_compat_check,
};
use dpgap::painleve::{painleve_route, run_painleve, PainleveRoute};
use dpgap::special::{hyp1f1, hyp2f1, q_pochhammer, qhyp2phi0};
use dpgap::{BigFloat, Error, Real};
use num_traits::{One, Signed, Zero};

type B = BigFloat;

fn fam(name: FamilyName, p: &[(&str, &str)]) -> FamilySpec<B> {
    let v: Vec<(&str, B)> = p.iter().map(|(k, s)| (*k, B::parse(s).unwrap())).collect();
    make_family_with(name, &v, FamilyOptions { allow_signed_weight: true }).unwrap()
}

fn lqj() -> FamilySpec<B> {
    fam(FamilyName::LittleQJacobi, &[("a", "0.5"), ("b", "1.5"), ("q", "0.9")])
}

/// Relative, or absolute for values near zero.
fn close(a: &B, b: &B) -> bool {
    let scale = B::max_of(B::one(), B::max_of(a.abs(), b.abs()));
    (a.clone() - b.clone()).abs() < B::lit(1e-60) * scale
}

/// States `k..=k+3`; q-PVI variables live on `s > k`.
fn states(f: &FamilySpec<B>, k: usize) -> Vec<LaxState<B>> {
    run_states(f, k, k + 3).unwrap()
}

#[test]
fn leading_matrix_is_diagonal() {
    let f = lqj();
    let st = &states(&f, 2)[1];
    let d = qp6_build(&f, st).unwrap();
    let lin = f.linear_data().unwrap();
    let eta = f.eta();
    assert!(close(&d.kappa1, &(eta.powi(2) * lin.lambda1)));
    assert!(close(&d.kappa2, &(eta.powi(-2) * lin.lambda2)));
    assert!(close(&d.b3, &(B::one() / (eta * d.kappa1.clone()))));
    assert!(close(d.b4.as_ref().unwrap(), &(B::one() / d.kappa2.clone())));
    assert_eq!(st.lambda().a12, B::zero());
}

#[test]
fn spectral_determinant_factorizes() {
    for f in [lqj(), fam(FamilyName::LittleQLaguerre, &[("a", "0.5"), ("q", "0.8")])] {
        let st = &states(&f, 2)[2];
        let d = qp6_build(&f, st).unwrap();
        let xs: Vec<B> = ["0.13", "-2.7", "4.1", "0.999", "17"].iter().map(|s| B::parse(s).unwrap()).collect();
        assert!(det_factorization_residual(&d, st, &f.pi(st.s), &xs) < B::lit(1e-60));
    }
}

#[test]
fn eigenvalue_data_scales_with_t() {
    let f = lqj();
    let sts = states(&f, 2);
    let (a, b) = (qp6_build(&f, &sts[1]).unwrap(), qp6_build(&f, &sts[3]).unwrap());
    assert!(close(&a.trc, &b.trc));
    assert!(close(&a.dec, &b.dec));
}

#[test]
fn compatibility_check() {
    let f = lqj();
    let sts = states(&f, 2);
    let xs = compat_samples::<B>();
    let tol = B::lit(1e-40);
    assert!(qp6_compat_check(&f, &sts[1], &sts[2], &xs, &tol));

    let t = f.pi(sts[2].s);
    assert!(qp6_compat_check(&f, &sts[1], &sts[2], &[t], &tol));

    let mut bad = sts[2].clone();
    bad.p = bad.p.clone() + B::lit(1e-3);
    assert!(!qp6_compat_check(&f, &sts[1], &bad, &xs, &tol));
}

#[test]
fn jimbo_sakai_step() {
    let tol = B::lit(1e-40);
    for f in [
        lqj(),
        fam(FamilyName::QKrawtchouk, &[("p", "0.7"), ("N", "20"), ("q", "0.9")]),
        fam(FamilyName::QCharlier, &[("a", "2"), ("q", "0.7")]),
        fam(FamilyName::LittleQLaguerre, &[("a", "0.5"), ("q", "0.8")]),
    ] {
        let sts = states(&f, 2);
        assert!(js_extract_and_check(&f, &sts[1], &sts[2], &tol).unwrap(), "{}", f.name);
    }
}

#[test]
fn degenerate_families_use_reduced_map() {
    for name in [FamilyName::QCharlier, FamilyName::LittleQLaguerre] {
        let f = fam(name, &[("a", "0.5"), ("q", "0.8")]);
        let st = &states(&f, 2)[1];
        assert!(qp6_build(&f, st).unwrap().degenerate());
    }
    assert!(!qp6_build(&lqj(), &states(&lqj(), 2)[1]).unwrap().degenerate());
}

#[test]
fn flipped_w_fails() {
    let f = lqj();
    let sts = states(&f, 2);
    let d = qp6_build(&f, &sts[1]).unwrap();
    let (mut v, _) = js_extract(&d, &sts[1], &f.pi(sts[1].s)).unwrap();
    let tol = B::lit(1e-40);
    assert!(js_vars_check(&f, &d, &v, &sts[2], &tol).unwrap());
    v.w = -v.w;
    assert!(!js_vars_check(&f, &d, &v, &sts[2], &tol).unwrap());
}

#[test]
fn y_is_undefined_at_the_first_state() {
    let f = lqj();
    let st = &states(&f, 2)[0];
    let d = qp6_build(&f, st).unwrap();
    assert!(matches!(js_extract(&d, st, &f.pi(st.s)), Err(Error::DPSingular { .. })));
}

#[test]
fn charlier_initial_variables() {
    for a in ["0.5", "3", "20"] {
        let f = fam(FamilyName::Charlier, &[("a", a)]);
        let a = B::parse(a).unwrap();
        let st = closed_init(&f, 1).unwrap();
        assert!(close(&st.f, &(-a.clone())));
        assert!(close(&st.g, &(a.clone() / (B::one() + a.clone()))));
        for k in 2..6 {
            let st = closed_init(&f, k).unwrap();
            let fact = (1..k).fold(B::one(), |p, j| p * B::int(j as i64));
            let phi = hyp1f1(&B::int(1 - k as i64), &B::one(), &(-a.clone())).unwrap();
            assert!(close(&st.e, &(a.powi(k as i32) * fact / phi)));
            assert!(close(&st.h, &(fact_of(k))));
        }
    }
}

fn fact_of(k: usize) -> B {
    (1..=k).fold(B::one(), |p, j| p * B::int(j as i64))
}

#[test]
fn meixner_and_krawtchouk_initial_variables() {
    let me = fam(FamilyName::Meixner, &[("beta", "1.5"), ("c", "0.3")]);
    for k in 1..5 {
        assert!(closed_init(&me, k).unwrap().f.is_zero());
    }
    let (p, n) = (B::parse("0.35").unwrap(), 12);
    let kr = fam(FamilyName::Krawtchouk, &[("p", "0.35"), ("N", "12")]);
    for k in 1..5i64 {
        let st = closed_init(&kr, k as usize).unwrap();
        let z = B::one() - B::one() / p.clone();
        let one = B::one();
        let nf = B::int(n);
        let top = hyp2f1(&B::int(1 - k), &B::int(1 - k), &(one.clone() - nf.clone()), &z).unwrap();
        let bot = hyp2f1(&B::int(-k), &B::int(1 - k), &(-nf.clone()), &z).unwrap();
        let g = B::int(k) * (one - p.clone()) / (nf * p.clone()) * top / bot;
        assert!(close(&st.g, &g), "k={k}");
    }
}

#[test]
fn closed_forms_match_lax_variables() {
    let f = fam(FamilyName::Meixner, &[("beta", "1.5"), ("c", "0.3")]);
    let sts = run_states(&f, 2, 12).unwrap();
    let dp = closed_init(&f, 2).unwrap();
    let from = dp_from_lax(&sts[0], &f).unwrap();
    for (x, y) in [(&dp.e, &from.e), (&dp.f, &from.f), (&dp.g, &from.g), (&dp.h, &from.h)] {
        assert!(close(x, y), "{} vs {}", x.to_sci(20), y.to_sci(20));
    }
    let closed = gap_values_closed(&f, 2, 12).unwrap();
    let general = gap_values_general(&f, 2, 12).unwrap();
    for (x, y) in closed.iter().zip(&general) {
        assert!(close(x, y));
    }
}

#[test]
fn sakai_parameters_sum_to_one() {
    let theta = B::parse("0.37").unwrap();
    for s in 2..30 {
        assert!(close(&sakai_dpv_lambda(&sakai_dpv(s, 2, &theta)), &B::one()));
    }
}

#[test]
fn q_charlier_bundle() {
    let f = fam(FamilyName::QCharlier, &[("a", "1.7"), ("q", "0.6")]);
    let (q, a) = (f.q().unwrap(), f.param("a"));
    for k in 1..4 {
        let st = qcharlier_init(&f, k).unwrap();
        let qq = q_pochhammer(&q, &q, k);
        let ki = k as i32;
        assert!(close(&st.h, &(q.powi(-ki * ki) * qq.clone())));
        let qk = q.powi(-ki);
        let g0 = qhyp2phi0(&qk, &qk, &q, &(-q.powi(2 * ki) / a.clone())).unwrap();
        let g1 = qhyp2phi0(&qk, &(qk.clone() * q.clone()), &q, &(-q.powi(2 * ki - 1) / a.clone())).unwrap();
        let q_k = qq.clone() * qq.clone() * q.powi(-ki * (ki + 1)) / g0.clone();
        assert!(close(&st.qs, &q_k));
        let r_k = q.powi(ki * ki) * (B::one() - qk) / (qq * q_pochhammer(&q, &q, k - 1)) * g1.clone() * g1 / g0;
        assert!(close(&st.r, &r_k));
    }
    let mut st = qcharlier_init(&f, 2).unwrap();
    let lax = run_states(&f, 2, 12).unwrap();
    for l in &lax[1..11] {
        let next = qcharlier_step(&f, &st).unwrap();
        let gamma = st.gamma.clone() + q.powi(1) * st.r.clone();
        assert!(close(&next.gamma, &gamma));
        st = next;
        assert!(close(&st.p, &l.p) && close(&st.qs, &l.q) && close(&st.r, &l.r));
        assert!(close(&st.d_prev, &l.d_prev));
    }
}

#[test]
fn routes_and_fallback() {
    assert_eq!(painleve_route(FamilyName::Charlier), Some(PainleveRoute::DPIV));
    assert_eq!(painleve_route(FamilyName::Hahn), None);
    let hahn = make_family(
        FamilyName::Hahn,
        &[("alpha", B::one()), ("beta", B::one()), ("N", B::int(6))],
    )
    .unwrap();
    assert!(matches!(run_painleve(&hahn, 2, 5), Err(Error::UnsupportedFamily { .. })));
    let f = fam(FamilyName::Charlier, &[("a", "4")]);
    let run = run_painleve(&f, 3, 30).unwrap();
    assert!(run.fallback_steps.is_empty());
    assert_eq!(run.values.len(), 28);
}
