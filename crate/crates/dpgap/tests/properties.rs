use dpgap::family::{check_ratio_identity, make_family, FamilyName};
use dpgap::lax::{check_run, gap_values_general};
use dpgap::oracle::{build_ortho_basis_covering, gap_probabilities_gram};
use dpgap::painleve::run_painleve;
use dpgap::special::q_pochhammer;
use dpgap::table::{parse_real, GapTable, Method, TableMeta};
use dpgap::{BigFloat, Mat2, Poly, Real};
use num_traits::Signed;
use proptest::prelude::*;

type B = BigFloat;

fn b(x: f64) -> B {
    B::lit(x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn mat2_inverse_and_determinant(e in prop::array::uniform4(-5.0f64..5.0), g in prop::array::uniform4(-5.0f64..5.0)) {
        let m = Mat2::new(b(e[0]), b(e[1]), b(e[2]), b(e[3]));
        let n = Mat2::new(b(g[0]), b(g[1]), b(g[2]), b(g[3]));
        prop_assume!(m.det().abs() > b(1e-3));
        let inv = m.inv(&b(1e-40)).unwrap();
        prop_assert!(((&m * &inv) - Mat2::identity()).norm() < b(1e-60));
        let dp = (&m * &n).det() - m.det() * n.det();
        prop_assert!(dp.abs() < b(1e-60));
    }

    #[test]
    fn poly_from_roots_vanishes(r in prop::collection::vec(-10.0f64..10.0, 1..6)) {
        let roots: Vec<B> = r.iter().map(|x| b(*x)).collect();
        let p = Poly::from_roots(&roots);
        for z in &roots {
            prop_assert!(p.eval(z).abs() < b(1e-50));
        }
    }

    #[test]
    fn q_pochhammer_recurrence(a in -2.0f64..2.0, q in 0.05f64..0.95, n in 0usize..20) {
        let (a, q) = (b(a), b(q));
        let next = q_pochhammer(&a, &q, n + 1);
        let step = q_pochhammer(&a, &q, n) * (B::lit(1.0) - a * q.powi(n as i32));
        prop_assert!((next - step).abs() < b(1e-60));
    }

    #[test]
    fn fractions_parse(n in 1i64..1000, d in 1i64..1000) {
        let v: f64 = parse_real(&format!("{n}/{d}")).unwrap();
        prop_assert!((v - n as f64 / d as f64).abs() < 1e-12);
    }

    #[test]
    fn charlier_single_particle(a in 0.1f64..15.0) {
        let f = make_family(FamilyName::Charlier, &[("a", b(a))]).unwrap();
        let v = gap_values_general(&f, 1, 30).unwrap();
        let (mut term, mut sum) = ((-b(a)).exp(), B::lit(0.0));
        for (x, d) in v.iter().enumerate() {
            sum = sum + term.clone();
            prop_assert!(B::rel_diff(d, &sum) < b(1e-60));
            term = term * b(a) / B::int(x as i64 + 1);
        }
    }

    #[test]
    fn meixner_gap_is_a_distribution(beta in 0.3f64..6.0, c in 0.05f64..0.7, k in 1usize..5) {
        let f = make_family(FamilyName::Meixner, &[("beta", b(beta)), ("c", b(c))]).unwrap();
        let v = gap_values_general(&f, k, k + 25).unwrap();
        prop_assert!(v.iter().all(|d| *d > B::lit(0.0) && *d <= B::lit(1.0) + b(1e-60)));
        prop_assert!(v.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn routes_agree_on_krawtchouk(p in 0.1f64..0.9, n in 8usize..20, k in 1usize..4) {
        let f = make_family(FamilyName::Krawtchouk, &[("p", b(p)), ("N", B::int(n as i64))]).unwrap();
        let g = gap_values_general(&f, k, n + 1).unwrap();
        let pv = run_painleve(&f, k, n + 1).unwrap().values;
        let basis = build_ortho_basis_covering(&f, k, &B::tolerance(), n + 1).unwrap();
        let o = gap_probabilities_gram(&basis, k, n + 1).unwrap();
        for ((x, y), z) in g.iter().zip(&pv).zip(&o[k..]) {
            prop_assert!(B::rel_diff(x, y) < b(1e-40));
            prop_assert!(B::rel_diff(x, z) < b(1e-40));
        }
    }

    #[test]
    fn step_invariants_hold(a in 0.5f64..10.0, k in 1usize..5) {
        let f = make_family(FamilyName::Charlier, &[("a", b(a))]).unwrap();
        let r = check_run(&f, k, k + 15).unwrap();
        prop_assert!(r.nilpotency < b(1e-50));
        prop_assert!(r.trace.unwrap() < b(1e-50));
        prop_assert!(r.determinant < b(1e-50));
        prop_assert!(r.compatibility < b(1e-50));
    }

    #[test]
    fn weight_ratio_identity(a in 0.05f64..0.95, q in 0.2f64..0.95) {
        let f = make_family(FamilyName::LittleQLaguerre, &[("a", b(a)), ("q", b(q))]).unwrap();
        prop_assert!(check_ratio_identity(&f, 30, &b(1e-50)));
    }

    #[test]
    fn table_mass_telescopes(a in 0.5f64..5.0, q in 0.3f64..0.8, k in 1usize..4) {
        let f = make_family(FamilyName::QCharlier, &[("a", b(a)), ("q", b(q))]).unwrap();
        let v = gap_values_general(&f, k, k + 20).unwrap();
        let meta = TableMeta {
            family: f.name,
            params: vec![],
            k,
            precision: 256,
            method: Method::General,
            discrepancy: 0.0,
        };
        let t = GapTable::from_values(&f, meta, &v);
        let diff = v.last().unwrap().clone() - v[0].clone();
        prop_assert!((t.mass(&f) - diff).abs() < b(1e-60));
    }
}
