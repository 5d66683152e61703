use growthlab::algnum::{power_trace, AlgebraicNumber, IntPolynomial};
use growthlab::dioph::{analyze_hit, eval_exp_sum, scan_hits, ExpSumSpec};
use growthlab::numkernel::{Dyadic, IntervalReal};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

/// `q phi_a^n + beta` with `phi_a` the larger root of `x^2 - a x - s`, a Pisot number for `a > |s| + 1`.
#[derive(Clone, Debug)]
struct Case {
    a: i64,
    s: i64,
    q: (i64, i64),
    beta: (i64, i64),
    theta: (i64, i64),
}

fn case() -> impl Strategy<Value = Case> {
    (3i64..=7, prop::sample::select(vec![-1i64, 1]), (-4i64..=4, 1i64..=3), (-3i64..=3, 1i64..=6), (1i64..=3, 4i64..=5))
        .prop_filter("nonzero q", |(_, _, q, _, _)| q.0 != 0)
        .prop_map(|(a, s, q, beta, theta)| Case { a, s, q, beta, theta })
}

impl Case {
    fn text(&self, n_max: u64) -> String {
        let root = (self.a as f64 + ((self.a * self.a + 4 * self.s) as f64).sqrt()) / 2.0;
        format!(
            "alpha.1.minpoly = x^2 - {}*x - {}\nalpha.1.root = {:.3}\nq.1 = {}/{}\nbeta = {}/{}\ntheta = {}/{}\nn_max = {n_max}\n",
            self.a, self.s, root, self.q.0, self.q.1, self.beta.0, self.beta.1, self.theta.0, self.theta.1
        )
        .replace("- -1", "+ 1")
    }

    fn alpha(&self) -> AlgebraicNumber {
        let p = IntPolynomial::from_i64(&[-self.s, -self.a, 1]);
        AlgebraicNumber::roots_of(&p).unwrap().into_iter().find(|r| r.cmp_modulus_one().unwrap().is_gt()).unwrap()
    }
}

fn rat((a, b): (i64, i64)) -> BigRational {
    BigRational::new(a.into(), b.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn doubling_precision_nests(c in case(), n in 0u64..=200, p in 32u32..160) {
        let f = ExpSumSpec::parse(&c.text(64)).unwrap();
        let lo = eval_exp_sum(&f.spec, n, p).unwrap();
        let hi = eval_exp_sum(&f.spec, n, 2 * p).unwrap();
        prop_assert!(lo.width() <= Dyadic::pow2(-(p as i64)));
        prop_assert!(hi.width() <= Dyadic::pow2(-2 * p as i64));
        prop_assert!(lo.overlaps(&hi));
        // independent oracle: powering the root enclosure directly
        let w = 2 * p + 4 * n as u32 + 32;
        let direct = c.alpha().real_enclosure(w).unwrap().powi(n).mul_rational(&rat(c.q)).add_rational(&rat(c.beta));
        prop_assert!(direct.overlaps(&hi), "{direct} vs {hi}");
    }

    #[test]
    fn trace_shortcut_agrees_on_hits(c in case()) {
        let f = ExpSumSpec::parse(&c.text(40)).unwrap();
        let res = scan_hits(&f.spec, &f.scan).unwrap();
        let alpha = c.alpha();
        let (q, beta) = (rat(c.q), rat(c.beta));
        for hit in &res.hits {
            let an = analyze_hit(&f.spec, hit).unwrap();
            let tc = an.trace_check.expect("rational coefficients and integral bases");
            prop_assert!(tc.agrees);
            prop_assert_eq!(&tc.predicted_nearest, &hit.nearest);
            // q Tr(alpha^n) + beta minus q times the small conjugate's power
            let conj_pow = IntervalReal::from_rational(&rat((-c.s, 1)), 128)
                .div(&alpha.real_enclosure(128).unwrap())
                .unwrap()
                .powi(hit.n);
            let v = conj_pow.mul_rational(&-q.clone()).add_rational(&(&q * power_trace(&alpha, hit.n) + &beta));
            prop_assert!(v.overlaps(&hit.value));
        }
        prop_assert!(res.hits.windows(2).all(|w| w[0].n < w[1].n));
    }
}

fn hits_to(text: &str, n_max: u64) -> (Vec<u64>, u64) {
    let f = ExpSumSpec::parse(text).unwrap();
    let mut cfg = f.scan.clone();
    cfg.n_max = n_max;
    let r = scan_hits(&f.spec, &cfg).unwrap();
    assert!(r.undecided.is_empty());
    (r.hits.iter().map(|h| h.n).collect(), r.n0)
}

/// Irrational algebraic beta: the hit list stays finite and nothing appears past the recorded n0.
#[test]
fn irrational_beta_has_no_late_hits() {
    let cases = [
        (
            "alpha.1.minpoly = x^2 - x - 1\nalpha.1.root = 1.618\nq.1 = 1\nbeta.minpoly = 2*x^2 - 1\nbeta.root = 0.707\ntheta = 1/2\n",
            4,
        ),
        (
            "alpha.1.minpoly = x^2 - 2*x - 1\nalpha.1.root = 2.414\nq.1 = 1\nbeta.minpoly = x^2 - 3\nbeta.root = 1.732\ntheta = 3/4\n",
            5,
        ),
    ];
    for (text, n0) in cases {
        let (short, n0_short) = hits_to(text, 60);
        assert_eq!(n0_short, n0, "{text}");
        let (long, n0_long) = hits_to(text, 1000);
        assert_eq!(long, short);
        assert_eq!(n0_long, n0);
    }
}

#[test]
fn nearest_integers_are_exact_traces_for_lucas() {
    // phi^n + psi^n = L_n, and phi^n is within |psi|^n of it
    let text = "alpha.1.minpoly = x^2 - x - 1\nalpha.1.root = 1.618\nq.1 = 1\nbeta = 0\ntheta = 2/3\nn_max = 80\n";
    let f = ExpSumSpec::parse(text).unwrap();
    let r = scan_hits(&f.spec, &f.scan).unwrap();
    let (mut a, mut b) = (BigInt::from(2), BigInt::from(1));
    let mut lucas = vec![a.clone()];
    for _ in 0..80 {
        lucas.push(b.clone());
        let c = &a + &b;
        a = std::mem::replace(&mut b, c);
    }
    // from n = 2 on |psi|^n < 1/2
    for h in r.hits.iter().filter(|h| h.n >= 2) {
        assert_eq!(h.nearest, lucas[h.n as usize]);
    }
    // |psi| = 0.618 < 2/3, so every exponent is a hit
    assert_eq!(r.hits.len(), 81);
}
