//! Implementation against independent test-side computations.

mod common;

use std::sync::OnceLock;

use common::{fibonacci, ln_big, padovan, representations, Fx, Oracle};
use num_bigint::BigInt;
use pillai_core::linforms::{compute_bound_chain, Base, Campaign, Sign};
use pillai_core::realnum::{constants_at, CertReal, Dyadic, PrecisionPolicy};
use pillai_core::reduction::{CampaignReport, ReductionContext};
use pillai_core::search::{enumerate, multi_represented, verify_theorem, THEOREM_VALUES};

fn oracle() -> &'static Oracle {
    static O: OnceLock<Oracle> = OnceLock::new();
    O.get_or_init(Oracle::new)
}

fn context() -> &'static ReductionContext {
    static C: OnceLock<ReductionContext> = OnceLock::new();
    C.get_or_init(|| {
        let chain = compute_bound_chain(PrecisionPolicy::default()).unwrap();
        ReductionContext::new(&chain, PrecisionPolicy::starting_at(512)).unwrap()
    })
}

/// Interval contains the fixed-point value up to the oracle's own error.
fn encloses(x: &CertReal, v: &Fx) {
    let slack = Dyadic::new(BigInt::from(1), -(common::SCALE as i64) + 40);
    let (n, s) = (v.0.clone(), -(common::SCALE as i64));
    let v = Dyadic::new(n, s);
    assert!(x.lo().sub(&slack) <= v && v <= x.hi().add(&slack), "{} vs {}", x.to_sci_string(20), v.to_f64());
}

#[test]
fn constants_agree_with_fixed_point() {
    let o = oracle();
    let c = constants_at(512).unwrap();
    encloses(&c.alpha, &o.alpha);
    encloses(&c.delta, &o.delta);
    encloses(&c.log_alpha, &o.ln_alpha);
    encloses(&c.log_delta, &o.ln_delta);
    encloses(&c.log_sqrt5_a, &o.ln_sqrt5_a);
}

#[test]
fn padovan_coefficient_matches_term_ratio() {
    let o = oracle();
    let a = common::padovan_a(&o.alpha);
    let p = padovan(400);
    // P_m / alpha^m -> a, with error of order |beta|^m
    let ratio = Fx::int(p[400].clone()).div(&o.alpha.pow(400));
    assert!((ratio.to_f64() - a.to_f64()).abs() < 1e-20);
    assert!((a.to_f64() - 0.722_124_418_303_112_8).abs() < 1e-15);
}

/// Check each entry of a report: `eps` and `k_bound` from the oracle.
fn check_report(report: &CampaignReport) {
    let o = oracle();
    let ctx = context();
    let positive = report.sign == Sign::Pos;
    let m = ctx.multiplier_bound(report.sign);
    let a: f64 = report.a.parse().unwrap();
    let ln_b = match report.base {
        Base::Alpha => o.ln_alpha.to_f64(),
        Base::Delta => o.ln_delta.to_f64(),
    };
    assert!(!report.entries.is_empty());
    for e in &report.entries {
        let q = &ctx.convergents(report.sign)[e.convergent_index].q;
        // the one-gap form on the alpha side carries its exponent in `k`
        let (dk, al) = match report.campaign {
            Campaign::Gamma2 => (0, e.k.unwrap()),
            _ => (e.k.unwrap_or(0), e.l.unwrap_or(0)),
        };
        let mu = o.mu(positive, dk, al);
        let eps = o.epsilon(positive, &mu, q, m).to_f64();
        let claimed: f64 = e.epsilon.parse().unwrap();
        assert!(eps > 0.0, "{} {:?}: oracle eps {eps}", report.label, e);
        assert!(
            claimed <= eps * (1.0 + 1e-12) && eps <= claimed * (1.0 + 1e-5),
            "{}: {claimed} vs {eps}",
            report.label
        );
        let x = (a.ln() + ln_big(q) - eps.ln()) / ln_b;
        if (x - x.round()).abs() > 1e-6 {
            assert_eq!(e.k_bound, x.ceil() as u64, "{} {:?}", report.label, e);
        } else {
            assert!(e.k_bound.abs_diff(x.round() as u64) <= 1);
        }
    }
}

#[test]
fn gamma3_subgrid_against_fixed_point() {
    let ctx = context();
    for sign in [Sign::Pos, Sign::Neg] {
        let spec = ctx.spec(Campaign::Gamma3, sign, Base::Delta, Some((101, 110)), Some((201, 210))).unwrap();
        let r = ctx.run(&spec).unwrap();
        assert_eq!(r.entries.len(), 100);
        check_report(&r);
    }
}

#[test]
fn one_gap_campaigns_against_fixed_point() {
    let ctx = context();
    for sign in [Sign::Pos, Sign::Neg] {
        check_report(&ctx.run(&ctx.spec(Campaign::Gamma, sign, Base::Delta, None, None).unwrap()).unwrap());
        check_report(&ctx.run(&ctx.spec(Campaign::Gamma, sign, Base::Alpha, None, None).unwrap()).unwrap());
        check_report(&ctx.run(&ctx.spec(Campaign::Gamma1, sign, Base::Alpha, Some((1, 12)), None).unwrap()).unwrap());
        check_report(
            &ctx.run(&ctx.spec(Campaign::Gamma2, sign, Base::Delta, Some((390, 400)), None).unwrap()).unwrap(),
        );
    }
}

#[test]
fn convergent_approximation_is_best_possible_order() {
    let o = oracle();
    let ctx = context();
    for (sign, positive) in [(Sign::Pos, true), (Sign::Neg, false)] {
        let convs = ctx.convergents(sign);
        let tau = o.tau(positive);
        for w in convs.windows(2).take(110) {
            // ||tau q_i|| < 1 / q_{i+1}
            let d = tau.mul_int(&w[0].q).dist_int();
            let bound = Fx::int(1).div(&Fx::int(w[1].q.clone()));
            assert!(d < bound, "index {}", w[0].index);
        }
    }
}

#[test]
fn search_against_brute_force() {
    let p = padovan(60);
    let f = fibonacci(40);
    let map = enumerate(4..=60, 2..=40);
    let mut total = 0;
    for (c, pairs) in &map {
        for &(m, n) in pairs {
            assert_eq!(&(&p[m as usize] - &f[n as usize]), c);
        }
        total += pairs.len();
    }
    assert_eq!(total, 57 * 39);
}

#[test]
fn search_box_from_cutoff_reproduces_the_list() {
    for n_cut in [300, 274] {
        let r = verify_theorem(n_cut).unwrap();
        assert!(r.pass, "{n_cut}: {:?} {:?}", r.missing, r.unexpected);
        let cs: Vec<i64> = r.records.iter().map(|x| i64::try_from(&x.c).unwrap()).collect();
        assert_eq!(cs, THEOREM_VALUES);
    }
}

#[test]
fn small_cutoff_is_the_filtered_fixture() {
    let r = verify_theorem(10).unwrap();
    assert!(!r.pass);
    let m_cut = r.m_cutoff;
    let want: Vec<(i64, Vec<(u64, u64)>)> = representations()
        .into_iter()
        .map(|(c, pairs)| (c, pairs.into_iter().filter(|&(m, n)| m <= m_cut && n <= 10).collect::<Vec<_>>()))
        .filter(|(_, pairs)| pairs.len() >= 2)
        .collect();
    let got: Vec<(i64, Vec<(u64, u64)>)> =
        r.records.iter().map(|x| (i64::try_from(&x.c).unwrap(), x.pairs.clone())).collect();
    assert_eq!(got, want);
    assert!(got.len() < 35);
}

#[test]
fn search_matches_fixture() {
    let got: Vec<(i64, Vec<(u64, u64)>)> = multi_represented(&enumerate(4..=189, 2..=300), 2)
        .into_iter()
        .map(|x| (i64::try_from(&x.c).unwrap(), x.pairs))
        .collect();
    assert_eq!(got, representations());
}
