use num_complex::Complex64;

use super::*;
use crate::series::{exp, exp_int, PuiseuxSeries, Trunc, Valuation};
use crate::Ctx;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// The period-3 branch parameter at the line a=0: beta = -1 - t.
fn beta_plus3() -> PuiseuxSeries {
    PuiseuxSeries::from_terms(
        [(exp_int(0), c(-1.0)), (exp_int(1), c(-1.0))],
        Trunc::Exact,
    )
}

/// The period-3 branch parameter at the line at infinity: beta = -1 - 1/t.
fn beta_minus3() -> PuiseuxSeries {
    PuiseuxSeries::from_terms(
        [(exp_int(-1), c(-1.0)), (exp_int(0), c(-1.0))],
        Trunc::Exact,
    )
}

#[test]
fn apply_pole_and_infinity() {
    let ctx = Ctx::for_period(3);
    let map = MapChart::new(beta_plus3(), &ctx).unwrap();
    assert_eq!(map.kind, ChartKind::Plus);
    assert_eq!(map.tau_ord(), 0);
    // phi(0) = infinity, phi(infinity) = 1.
    match map.apply(&Point::Finite(PuiseuxSeries::zero()), &ctx).unwrap() {
        Point::Infinity => {}
        _ => panic!("pole at the marked critical point"),
    }
    match map.apply(&Point::Infinity, &ctx).unwrap() {
        Point::Finite(s) => assert!(s.approx_eq(&PuiseuxSeries::one(), 1e-12)),
        _ => panic!(),
    }
    // phi(1) = 1 + beta + t = 0 on the period-3 branch.
    match map.apply(&Point::Finite(PuiseuxSeries::one()), &ctx).unwrap() {
        Point::Infinity => {} // exact zero maps on to infinity
        Point::Finite(s) => assert!(s.ord().is_zero_like(), "got {s}"),
    }
}

#[test]
fn orbit_period3_both_charts() {
    let ctx = Ctx::for_period(3);
    for beta in [beta_plus3(), beta_minus3()] {
        let map = MapChart::new(beta, &ctx).unwrap();
        let scan = orbit_scan(&map, 3, &ctx).unwrap();
        assert_eq!(scan.first_zero, Some(3));
        assert!(matches!(scan.points[1], Point::Infinity));
        let w2 = scan.points[2].finite().unwrap();
        assert!(w2.approx_eq(&PuiseuxSeries::one(), 1e-12));
    }
}

#[test]
fn deriv_at_infinity_period3() {
    let ctx = Ctx::for_period(3);
    // Chain rule by hand: phi'(1) = -beta - 2t = 1 - t, so
    // G = beta phi'(1) = (-1-t)(1-t) = -1 + t^2.
    let map = MapChart::new(beta_plus3(), &ctx).unwrap();
    let g = deriv_at_infinity(&map, 3, &ctx).unwrap();
    let expect = PuiseuxSeries::from_terms(
        [(exp_int(0), c(-1.0)), (exp_int(2), c(1.0))],
        Trunc::Exact,
    );
    assert!(g.approx_eq(&expect, 1e-12), "got {g}");
    assert_eq!(g.ord(), Valuation::Finite(exp_int(0)));

    // Unbounded chart: phi'(1) = -beta - 2/t = 1 - 1/t and
    // G = -1 + t^{-2}, order -2.
    let map = MapChart::new(beta_minus3(), &ctx).unwrap();
    let g = deriv_at_infinity(&map, 3, &ctx).unwrap();
    let expect = PuiseuxSeries::from_terms(
        [(exp_int(0), c(-1.0)), (exp_int(-2), c(1.0))],
        Trunc::Exact,
    );
    assert!(g.approx_eq(&expect, 1e-12), "got {g}");
    assert_eq!(g.ord(), Valuation::Finite(exp_int(-2)));
}

#[test]
fn deriv_at_infinity_p2_is_beta() {
    // Empty chain-rule product.
    let ctx = Ctx::for_period(2);
    let beta = PuiseuxSeries::from_terms([(exp_int(0), c(0.5))], Trunc::Exact);
    let map = MapChart::new(beta.clone(), &ctx).unwrap();
    let g = deriv_at_infinity(&map, 2, &ctx).unwrap();
    assert!(g.approx_eq(&beta, 1e-12));
}

#[test]
fn dbeta_orbit_period3() {
    let ctx = Ctx::for_period(3);
    for beta in [beta_plus3(), beta_minus3()] {
        let map = MapChart::new(beta, &ctx).unwrap();
        // omega_3 = 1 + beta + a so d(omega_3)/d(beta) = 1.
        let d = dbeta_orbit(&map, 3, &ctx).unwrap();
        assert!(d.approx_eq(&PuiseuxSeries::one(), 1e-12), "got {d}");
    }
    // d(omega_2)/d(beta) = 0 for every parameter.
    let map = MapChart::new(beta_plus3(), &ctx).unwrap();
    let d = dbeta_orbit(&map, 2, &ctx).unwrap();
    assert!(d.is_structural_zero());
}

#[test]
fn classify_limb_examples() {
    let ctx = Ctx::for_period(3);
    // beta = -1 - t: theta = 1/3, q = 3, c_theta = -1.
    let map = MapChart::new(beta_plus3(), &ctx).unwrap();
    let limb = classify_limb(&map, 3, &ctx).unwrap();
    assert_eq!((limb.theta_num, limb.theta_den), (1, 3));
    assert!((limb.c_theta.unwrap() - c(-1.0)).norm() < 1e-12);
    // gamma = (beta - c_theta)/t = -1.
    assert!((limb.gamma_red - c(-1.0)).norm() < 1e-12);

    // beta = -1 - 1/t: theta = 1/2, gamma_red = -1.
    let map = MapChart::new(beta_minus3(), &ctx).unwrap();
    let limb = classify_limb(&map, 3, &ctx).unwrap();
    assert_eq!(limb.q, 2);
    assert!((limb.gamma_red - c(-1.0)).norm() < 1e-12);

    // beta = -1/2 + gamma t: theta = 1/4 (cos^2(pi/4) = 1/2).
    let beta = PuiseuxSeries::from_terms(
        [(exp_int(0), c(-0.5)), (exp_int(1), c(0.3))],
        Trunc::Exact,
    );
    let map = MapChart::new(beta, &ctx).unwrap();
    let limb = classify_limb(&map, 4, &ctx).unwrap();
    assert_eq!((limb.theta_num, limb.theta_den), (1, 4));
}

#[test]
fn level0_structure_q3() {
    let ctx = Ctx::for_period(3);
    let map = MapChart::new(beta_plus3(), &ctx).unwrap();
    let limb = classify_limb(&map, 3, &ctx).unwrap();
    let lvl = level0_structure(&limb, &map, &ctx).unwrap();
    // B_0 = closed ball around 0 of log-radius 1.
    assert_eq!(lvl.b[0].log_radius, exp_int(1));
    assert!(lvl.b[0].closed);
    assert!(lvl.b[0]
        .contains(&Point::Finite(PuiseuxSeries::zero()), &ctx)
        .unwrap());
    // D_0 = open ball around -c_theta^{-1} t = t.
    let t = PuiseuxSeries::var();
    assert!(lvl.d0.contains(&Point::Finite(t.clone()), &ctx).unwrap());
    assert!(!lvl.d0.closed);
    // B_1 is the inverted ball at infinity.
    assert!(lvl.b[1].contains(&Point::Infinity, &ctx).unwrap());
    assert!(lvl.b[1]
        .contains(
            &Point::Finite(PuiseuxSeries::monomial(exp_int(-1), c(2.0))),
            &ctx
        )
        .unwrap());
    // omega_2 = 1 sits in B_2.
    assert!(lvl.b[2]
        .contains(
            &Point::Finite(PuiseuxSeries::one().add(&PuiseuxSeries::var(), &ctx)),
            &ctx
        )
        .unwrap());
}

#[test]
fn level0_structure_q2() {
    let ctx = Ctx::for_period(3);
    let map = MapChart::new(beta_minus3(), &ctx).unwrap();
    let limb = classify_limb(&map, 3, &ctx).unwrap();
    let lvl = level0_structure(&limb, &map, &ctx).unwrap();
    // B_1 = complement ball at infinity with spherical log-diameter 1.
    assert_eq!(lvl.b[1].log_radius, exp_int(1));
    assert_eq!(lvl.b[1].chart, BallChart::Inverted);
    // D_0 is the open unit ball around -1/gamma = 1 + O(t): it contains
    // the finite zero of the map and the orbit entry omega_2 = 1.
    assert!(lvl
        .d0
        .contains(&Point::Finite(PuiseuxSeries::one()), &ctx)
        .unwrap());
    assert_eq!(lvl.d0.log_radius, exp_int(0));
    assert!(!lvl.d0.closed);
}

#[test]
fn ball_image_level0_cycle_q3() {
    let ctx = Ctx::for_period(3);
    let map = MapChart::new(beta_plus3(), &ctx).unwrap();
    let limb = classify_limb(&map, 3, &ctx).unwrap();
    let lvl = level0_structure(&limb, &map, &ctx).unwrap();
    // B_j -> B_{j+1} bijectively for j != 0.
    let (img, deg) = ball_image(&map, &lvl.b[1], &ctx).unwrap();
    assert_eq!(deg, 1);
    assert!(img.same_ball(&lvl.b[2], &ctx).unwrap(), "B_1 -> B_2");
    let (img, deg) = ball_image(&map, &lvl.b[2], &ctx).unwrap();
    assert_eq!(deg, 1);
    assert!(img.same_ball(&lvl.b[0], &ctx).unwrap(), "B_2 -> B_0");
    // C_j maps bijectively onto B_{j+1}.
    for (j, cj) in lvl.c.iter().enumerate() {
        let (img, deg) = ball_image(&map, cj, &ctx).unwrap();
        assert_eq!(deg, 1, "C_{} degree", j + 1);
        let target = &lvl.b[(j + 2) % 3];
        assert!(img.same_ball(target, &ctx).unwrap(), "C_{}", j + 1);
    }
}

#[test]
fn schwarz_equality_on_bijective_image() {
    // Distances inside a bijective ball image scale by exactly the
    // radius ratio.
    let ctx = Ctx::for_period(3);
    let map = MapChart::new(beta_plus3(), &ctx).unwrap();
    let limb = classify_limb(&map, 3, &ctx).unwrap();
    let lvl = level0_structure(&limb, &map, &ctx).unwrap();
    let b2 = &lvl.b[2]; // standard ball around 1, radius |t|
    let (img, _) = ball_image(&map, b2, &ctx).unwrap();
    let ratio = img.log_radius - b2.log_radius;
    for (d1, d2) in [(exp(3, 2), exp_int(2)), (exp_int(2), exp(5, 2))] {
        let z1 = b2.center.add(&PuiseuxSeries::monomial(d1, c(1.3)), &ctx);
        let z2 = b2.center.add(&PuiseuxSeries::monomial(d2, c(-0.7)), &ctx);
        let before = crate::series::spherical_ord(&z1, &z2, &ctx)
            .unwrap()
            .finite("test")
            .unwrap();
        let i1 = map.apply(&Point::Finite(z1), &ctx).unwrap();
        let i2 = map.apply(&Point::Finite(z2), &ctx).unwrap();
        let after = spherical_ord_points(&i1, &i2, &ctx)
            .unwrap()
            .finite("test")
            .unwrap();
        assert_eq!(after - before, ratio);
    }
}

#[test]
fn satellite_detection_p3() {
    let ctx = Ctx::for_period(3);
    // q = 3 = p: the orbit returns to the critical point with no entry
    // into the distinguished ball.
    let map = MapChart::new(beta_plus3(), &ctx).unwrap();
    let limb = classify_limb(&map, 3, &ctx).unwrap();
    let lvl = level0_structure(&limb, &map, &ctx).unwrap();
    let ret = first_noncentral_return(&limb, &lvl, &map, 3, &ctx).unwrap();
    assert!(ret.satellite);

    let map = MapChart::new(beta_minus3(), &ctx).unwrap();
    let limb = classify_limb(&map, 3, &ctx).unwrap();
    let lvl = level0_structure(&limb, &map, &ctx).unwrap();
    let ret = first_noncentral_return(&limb, &lvl, &map, 3, &ctx).unwrap();
    // q = 2 does not divide 3, so a non-central return must occur.
    assert!(!ret.satellite);
    assert_eq!(ret.ell0, Some(1));
}

#[test]
fn table_check_q3_samples() {
    let ctx = Ctx::for_period(3);
    let map = MapChart::new(beta_plus3(), &ctx).unwrap();
    let limb = classify_limb(&map, 3, &ctx).unwrap();
    let lvl = level0_structure(&limb, &map, &ctx).unwrap();
    // z in B_1: spherical z-derivative has order 0.
    let z = PuiseuxSeries::monomial(exp_int(-1), c(3.0));
    let chk = deriv_order_table_check(&limb, &lvl, &map, &z, &ctx).unwrap();
    assert!(chk.pass, "{chk:?}");
    assert_eq!(chk.z_ord_got, (0, 1));
    // z = 5t in B_0' at full diameter: order ord z - 1 = 0, matching the
    // diameter ratio of B_1 to B_0.
    let z = PuiseuxSeries::monomial(exp_int(1), c(5.0));
    let chk = deriv_order_table_check(&limb, &lvl, &map, &z, &ctx).unwrap();
    assert!(chk.pass, "{chk:?}");
    assert_eq!(chk.z_ord_got, (0, 1));
}

#[test]
fn table_check_q2_samples() {
    let ctx = Ctx::for_period(3);
    let map = MapChart::new(beta_minus3(), &ctx).unwrap();
    let limb = classify_limb(&map, 3, &ctx).unwrap();
    let lvl = level0_structure(&limb, &map, &ctx).unwrap();
    // z in B_1: parameter-derivative norm 1/|z|.
    let z = PuiseuxSeries::monomial(exp_int(-2), c(1.5));
    let chk = deriv_order_table_check(&limb, &lvl, &map, &z, &ctx).unwrap();
    assert!(chk.pass, "{chk:?}");
    assert_eq!(chk.beta_ord_got, (2, 1));
}
