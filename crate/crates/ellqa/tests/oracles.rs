// Values frozen from an independent 40-digit evaluation (mpmath, direct
// double products) at q = 0.5, r = 4, c = 1 and u = 0.37 + 0.11i.

use ellqa::bosonope::{mode_commutator, BosonFamily, Lambert};
use ellqa::qseries::{bracket, theta_p, BracketKind};
use ellqa::structfuncs::{chi, kappa, mu, rho_plus};
use ellqa::{Ctx, C64};

fn ctx() -> Ctx {
    Ctx::new(0.5, 4.0, 1.0).unwrap()
}

fn u0() -> C64 {
    C64::new(0.37, 0.11)
}

fn close(got: C64, re: f64, im: f64, tol: f64) {
    let want = C64::new(re, im);
    let rel = (got - want).norm() / want.norm();
    assert!(rel < tol, "got {got}, want {want}, rel {rel:e}");
}

#[test]
fn bracket_values() {
    let c = ctx();
    close(bracket(u0(), BracketKind::Plain, &c), 0.50178117907727198244, 0.14467962108696087906, 1e-13);
    close(bracket(u0(), BracketKind::Plus, &c), 2.0261837087711006316, 0.011546725764521703855, 1e-13);
    close(bracket(u0(), BracketKind::StarPlain, &c), 0.47993640968973236957, 0.13488770801305916822, 1e-13);
}

#[test]
fn theta_value() {
    let c = ctx();
    close(theta_p(C64::new(0.3, 0.1), c.p).unwrap(), 0.68859422576421065827, -0.095859734177497011842, 1e-13);
}

#[test]
fn theta_at_origin_is_a_pole_error() {
    assert!(theta_p(C64::new(0.0, 0.0), 0.1).is_err());
}

#[test]
fn structure_functions() {
    let c = ctx();
    close(rho_plus(u0(), &c, false).unwrap(), 0.17676688981922608494, -0.019067392925258302429, 1e-12);
    close(rho_plus(u0(), &c, true).unwrap(), 0.166858279371672517, -0.020866044803081887528, 1e-12);
    close(mu(u0(), &c, false).unwrap(), 2.2572023012230875246, 0.66014295815686410243, 1e-12);
    close(chi(u0(), &c).unwrap(), -4.1805628656949662955, -5.8255132680590143503, 1e-12);
    close(kappa(&c).unwrap(), 1.0030679273242788269, 0.0, 1e-13);
}

#[test]
fn kappa_is_one_at_level_zero() {
    let c = Ctx::new(0.5, 4.0, 0.0).unwrap();
    assert_eq!(kappa(&c).unwrap(), C64::new(1.0, 0.0));
}

#[test]
fn a_mode_commutator_hand_value() {
    // ([2]-[1]) q^{-1} [1] = 1.5 * 2 at q = 1/2
    let v = mode_commutator(BosonFamily::A, 1, &ctx()).unwrap();
    assert!((v - 3.0).abs() < 1e-14, "{v}");
    assert!(mode_commutator(BosonFamily::A, 0, &ctx()).is_err());
}

#[test]
fn lambert_coefficients_match_direct_formulas() {
    let q = 0.5f64;
    let qi = |n: f64| (q.powf(n) - q.powf(-n)) / (q - 1.0 / q);
    for m in 1..=12usize {
        let mf = m as f64;
        let a = Lambert::inv_qint(1.5, q).coef(m, q);
        assert!((a - 1.0 / (qi(1.5 * mf) * mf)).abs() < 1e-13 * a.abs().max(1.0));
        let b = Lambert::inv_d21(q).coef(m, q);
        assert!((b - 1.0 / ((qi(2.0 * mf) - qi(mf)) * mf)).abs() < 1e-13 * b.abs().max(1.0));
        let d = Lambert::d21(q).coef(m, q);
        assert!((d - (qi(2.0 * mf) - qi(mf)) / mf).abs() < 1e-12 * d.abs().max(1.0));
    }
}
