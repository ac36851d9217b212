use ellqa::bosonope::zeromode::{ZeroModeWord, ZeroSym, ZeroVec};
use ellqa::qseries::{bracket, quasi_periodicity_residuals, theta_p, BracketKind};
use ellqa::series::PowerSeries;
use ellqa::structfuncs::{rho, rho_plus};
use ellqa::{Ctx, C64};
use proptest::prelude::*;

fn ctx_strategy() -> impl Strategy<Value = Ctx> {
    (0.2f64..0.8, 2.5f64..6.0, prop_oneof![Just(0.0), Just(1.0)]).prop_map(|(q, r, c)| Ctx::new(q, r, c).unwrap())
}

fn small_c64() -> impl Strategy<Value = C64> {
    (-1.5f64..1.5, -0.4f64..0.4).prop_map(|(a, b)| C64::new(a, b))
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_parity(ctx in ctx_strategy(), u in small_c64()) {
        let a = bracket(-u, BracketKind::Plain, &ctx);
        let b = -bracket(u, BracketKind::Plain, &ctx);
        prop_assert!(rel(a, b) < 1e-11);
        let a = bracket(-u, BracketKind::StarPlus, &ctx);
        let b = bracket(u, BracketKind::StarPlus, &ctx);
        prop_assert!(rel(a, b) < 1e-11);
    }

    #[test]
    fn bracket_real_period_laws(ctx in ctx_strategy(), u in small_c64()) {
        let res = quasi_periodicity_residuals(u, &ctx);
        // [u+r] = -[u], [u+r]_+ = [u]_+, [u + r tau/2]
        prop_assert!(res[0] < 1e-10 && res[2] < 1e-10 && res[4] < 1e-10, "{res:?}");
    }

    #[test]
    fn theta_inversion(ctx in ctx_strategy(), re in 0.3f64..1.5, arg in -3.0f64..3.0) {
        let z = C64::from_polar(re, arg);
        let a = theta_p(z, ctx.p).unwrap();
        let b = theta_p(ctx.p / z, ctx.p).unwrap();
        prop_assert!(rel(a, b) < 1e-11);
    }

    #[test]
    fn rho_is_rho_plus_ratio(ctx in ctx_strategy(), u in small_c64()) {
        let a = rho(u, &ctx);
        let b = rho_plus(u, &ctx, true).and_then(|s| rho_plus(u, &ctx, false).map(|t| s / t));
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert!(rel(a, b) < 1e-12);
        }
    }

    #[test]
    fn zero_mode_exchange_is_antisymmetric(
        v in prop::array::uniform5(-2.0f64..2.0),
        w in prop::array::uniform5(-2.0f64..2.0),
        u1 in small_c64(), u2 in small_c64(), pow1: bool, pow2: bool,
    ) {
        let mk = |v: [f64; 5], p: bool| if p { ZeroSym::pow(ZeroVec(v)) } else { ZeroSym::exp(ZeroVec(v)) };
        let a = ZeroModeWord::new(vec![mk(v, pow1), mk(w, !pow1)]);
        let b = ZeroModeWord::new(vec![mk(w, pow2)]);
        let lq = 0.5f64.ln();
        let s = a.exchange_log(&b, u1, u2, lq) + b.exchange_log(&a, u2, u1, lq);
        prop_assert!(s.norm() < 1e-12);
    }

    #[test]
    fn normalize_is_idempotent(
        vs in prop::collection::vec((prop::array::uniform5(-2.0f64..2.0), any::<bool>()), 1..6),
        u in small_c64(),
    ) {
        let syms = vs.iter().map(|(v, p)| if *p { ZeroSym::pow(ZeroVec(*v)) } else { ZeroSym::exp(ZeroVec(*v)) }).collect();
        let lq = 0.5f64.ln();
        let n1 = ZeroModeWord::new(syms).normalize(u, lq);
        prop_assert!(n1.is_normal());
        let n2 = n1.normalize(u, lq);
        prop_assert_eq!(n1, n2);
    }

    #[test]
    fn series_exp_ln_round_trip(cs in prop::collection::vec(-0.5f64..0.5, 1..12)) {
        let mut coeffs = vec![C64::new(0.0, 0.0)];
        coeffs.extend(cs.iter().map(|&x| C64::new(x, 0.0)));
        let s = PowerSeries::from_coeffs(coeffs);
        let back = s.exp().ln().unwrap();
        prop_assert!(back.max_abs_diff(&s) < 1e-12);
    }
}
