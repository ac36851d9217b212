// Each check must be able to fail: a deliberately broken input is rejected,
// and the unbroken one passes at the same points.

use ellqa::bosonope::catalog::{Claim, Relation};
use ellqa::bosonope::checks::{relation_residual, series_residual};
use ellqa::bosonope::catalog;
use ellqa::identities::{
    contour_integral, contour_integral_checked, hc6_residual, residue_u, riemann_residual, weak_zero_residual, AppC,
    ContourSpec, FReading,
};
use ellqa::{Ctx, C64};

fn ctx() -> Ctx {
    Ctx::new(0.5, 4.0, 1.0).unwrap()
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

// A handful of fixed generic points; poles make a point return Err, which is skipped.
fn points() -> Vec<[C64; 5]> {
    vec![
        [c(0.31, 0.07), c(-0.42, 0.13), c(0.77, -0.09), c(-0.18, 0.21), c(0.26, -0.11)],
        [c(-0.93, 0.02), c(0.55, -0.17), c(0.12, 0.25), c(1.13, -0.04), c(-0.61, 0.08)],
        [c(0.44, -0.22), c(1.21, 0.05), c(-0.37, 0.14), c(0.69, 0.19), c(0.83, -0.27)],
    ]
}

#[test]
fn hc6_sign_flip_is_detected() {
    let ctx = ctx();
    let mut n = 0;
    for x in points() {
        if let (Ok(good), Ok(bad)) =
            (hc6_residual(&ctx, x[0], x[1], x[2], x[4], false), hc6_residual(&ctx, x[0], x[1], x[2], x[4], true))
        {
            assert!(good < 1e-10, "{good}");
            assert!(bad > 1e-3, "{bad}");
            n += 1;
        }
    }
    assert!(n > 0);
}

#[test]
fn riemann_with_unstarred_rhs_fails_at_level_one() {
    let ctx = ctx();
    for x in points() {
        let good = riemann_residual(&ctx, x[0], x[1], x[2], x[3], false).unwrap();
        let bad = riemann_residual(&ctx, x[0], x[1], x[2], x[3], true).unwrap();
        assert!(good < 1e-10, "{good}");
        assert!(bad > 1e-3, "{bad}");
    }
}

#[test]
fn weak_zero_needs_all_four_terms() {
    let ctx = ctx();
    let mut n = 0;
    for x in points() {
        let good = AppC::new(&ctx, FReading::Cubed);
        let mut bad = AppC::new(&ctx, FReading::Cubed);
        bad.drop_fourth = true;
        if let (Ok(g), Ok(b)) = (weak_zero_residual(&good, &ctx, &x), weak_zero_residual(&bad, &ctx, &x)) {
            assert!(g < 1e-9, "{g}");
            assert!(b > 1e-3, "{b}");
            n += 1;
        }
    }
    assert!(n > 0);
}

fn perturbed(rel: &Relation) -> Relation {
    let Claim::Product(fs) = &rel.claim else { panic!("not a product claim") };
    let mut fs = fs.clone();
    fs[0].power += 1;
    Relation {
        id: rel.id,
        paper_ref: rel.paper_ref,
        alg: rel.alg.clone(),
        left: rel.left.clone(),
        right: rel.right.clone(),
        claim: Claim::Product(fs),
    }
}

#[test]
fn perturbed_product_claim_fails_both_routes() {
    let ctx = ctx();
    let cat = catalog(&ctx).unwrap();
    let rel = cat.iter().find(|r| r.is_product()).expect("a product relation");
    let bad = perturbed(rel);
    assert!(series_residual(rel, 30).unwrap().0 < 1e-12);
    assert!(series_residual(&bad, 30).unwrap().0 > 1e-4);
    let (u1, u2) = (c(0.31, 0.07), c(-0.42, 0.13));
    assert!(relation_residual(rel, u1, u2).unwrap() < 1e-10);
    assert!(relation_residual(&bad, u1, u2).unwrap() > 1e-4);
}

#[test]
fn contour_picks_the_constant_term() {
    let spec = ContourSpec::new(c(0.0, 0.0), 0.7, 64).unwrap();
    for k in -3i32..=3 {
        let (v, drift) = contour_integral_checked(|z| z.powi(k), &spec).unwrap();
        let want = if k == 0 { 1.0 } else { 0.0 };
        assert!((v - want).norm() < 1e-14, "k={k}: {v}");
        assert!(drift < 1e-14);
    }
}

#[test]
fn contour_cauchy_formula() {
    // (1/2 pi i) \oint g(z)/(z - a) dz = g(a) for |a| < radius
    let spec = ContourSpec::new(c(0.0, 0.0), 1.0, 128).unwrap();
    let a = c(0.2, -0.3);
    let g = |z: C64| z.exp() * (z * z + 1.0);
    let v = contour_integral(|z| g(z) * z / (z - a), &spec).unwrap();
    assert!((v - g(a)).norm() < 1e-13, "{v}");
    assert!(ContourSpec::new(c(0.0, 0.0), 0.0, 64).is_err());
}

#[test]
fn residue_of_simple_pole() {
    let a = c(0.3, 0.1);
    let v = residue_u(|u| (u * 2.0).sin() / (u - a), a, &[c(0.305, 0.1)]).unwrap();
    assert!((v - (a * 2.0).sin()).norm() < 1e-12, "{v}");
}
