//! Scanner for `||q_1 alpha_1^n + ... + q_k alpha_k^n + beta|| < theta^n` and
//! analysis of its solutions.

pub mod analyze;
pub mod expand;
pub mod scan;
pub mod spec;

pub use analyze::{analyze_hit, BaseConjugates, HitAnalysis, TraceCheck};
pub use expand::{expand_poly_power_sum, multiplicative_relation};
pub use scan::{dist_equals_scaled_theta_power, eval_exp_sum, exact_offset, scan_hits, Hit, ScanResult, Undecided};
pub use spec::{common_field, Budget, ExpSumSpec, NFilter, ScanConfig, SpecFile, SpecOptions};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algnum::IntPolynomial;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use std::collections::BTreeMap;

    fn p(s: &str) -> IntPolynomial {
        IntPolynomial::parse(s).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn root(s: &str, lo: BigRational, hi: BigRational) -> crate::algnum::AlgebraicNumber {
        crate::algnum::AlgebraicNumber::real_root_in(&p(s), &lo, &hi).unwrap()
    }

    fn rat(a: i64, b: i64) -> crate::algnum::AlgebraicNumber {
        crate::algnum::AlgebraicNumber::from_rational(&q(a, b))
    }

    fn phi() -> crate::algnum::AlgebraicNumber {
        root("x^2 - x - 1", q(1, 1), q(2, 1))
    }

    fn theta_golden() -> crate::algnum::AlgebraicNumber {
        root("x^2 + x - 1", q(0, 1), q(1, 1))
    }

    fn golden_half_spec() -> ExpSumSpec {
        ExpSumSpec::new(vec![phi()], vec![rat(1, 2)], rat(1, 2), theta_golden(), None).unwrap()
    }

    #[test]
    fn integer_powers() {
        let s = ExpSumSpec::new(vec![rat(2, 1)], vec![rat(1, 1)], rat(0, 1), rat(1, 2), None).unwrap();
        let v = eval_exp_sum(&s, 10, 64).unwrap();
        assert!(v.contains_rational(&q(1024, 1)));
    }

    #[test]
    fn half_golden_power() {
        let s = golden_half_spec();
        let v = eval_exp_sum(&s, 4, 80).unwrap();
        // phi^4 = (7 + 3 sqrt 5)/2, so S_4 = (9 + 3 sqrt 5)/4
        let f = v.to_f64();
        assert!((f - 3.927050983124842).abs() < 1e-12);
        assert!(dist_equals_scaled_theta_power(&s, 4, &BigInt::from(4), &q(1, 2)).unwrap());
    }

    #[test]
    fn lucas_sum() {
        let conj = root("x^2 - x - 1", q(-1, 1), q(0, 1));
        let opts = SpecOptions { allow_small_bases: true, ..Default::default() };
        let s = ExpSumSpec::with_options(vec![phi(), conj], vec![rat(1, 1), rat(1, 1)], rat(0, 1), rat(1, 2), None, &opts).unwrap();
        assert_eq!(s.field().degree(), 2);
        let v = eval_exp_sum(&s, 7, 64).unwrap();
        assert!(v.contains_rational(&q(29, 1)));
        assert_eq!(s.value_element(7).as_rational(), Some(q(29, 1)));
    }

    #[test]
    fn rejects_bad_specs() {
        let one = rat(1, 1);
        assert!(ExpSumSpec::new(vec![phi(), phi().neg()], vec![one.clone(), one.clone()], rat(0, 1), rat(1, 2), None).is_err());
        assert!(ExpSumSpec::new(vec![rat(-1, 1)], vec![one.clone()], rat(0, 1), rat(1, 2), None).is_err());
        assert!(ExpSumSpec::new(vec![phi()], vec![one.clone()], rat(0, 1), rat(3, 2), None).is_err());
        let small = root("x^2 - x - 1", q(-1, 1), q(0, 1));
        assert!(ExpSumSpec::new(vec![small], vec![one], rat(0, 1), rat(1, 2), None).is_err());
    }

    #[test]
    fn golden_hits_at_powers_of_two() {
        let s = golden_half_spec();
        let cfg = ScanConfig { n_min: 1, n_max: 64, filter: NFilter::PowersOf2, ..Default::default() };
        let r = scan_hits(&s, &cfg).unwrap();
        assert_eq!(r.hits.iter().map(|h| h.n).collect::<Vec<_>>(), vec![1, 2, 4, 8, 16, 32, 64]);
        assert!(r.undecided.is_empty());
        let h16 = r.hits.iter().find(|h| h.n == 16).unwrap();
        assert_eq!(h16.nearest, BigInt::from(1104));
        let a = analyze_hit(&s, h16).unwrap();
        assert!(a.pseudo_pisot.pseudo_pisot);
        assert_eq!(a.pseudo_pisot.total, q(1104, 1));
        assert!(a.integrality_escape);
        let tc = a.trace_check.unwrap();
        assert!(tc.agrees && tc.outside_sum.to_f64() > 0.0);
    }

    #[test]
    fn pisot_square_with_third() {
        let phi2 = root("x^2 - 3*x + 1", q(2, 1), q(3, 1));
        let s = ExpSumSpec::new(vec![phi2], vec![rat(1, 1)], rat(1, 3), rat(1, 2), None).unwrap();
        let r = scan_hits(&s, &ScanConfig { n_max: 200, ..Default::default() }).unwrap();
        assert_eq!(r.hits.iter().map(|h| h.n).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(r.n0, 3);
        assert!(r.min_dist_beyond_n0.unwrap().to_f64() > 0.27);
        let a = analyze_hit(&s, &r.hits[1]).unwrap();
        assert!(!a.pseudo_pisot.pseudo_pisot);
        assert!(a.trace_check.unwrap().agrees);
    }

    #[test]
    fn forced_boundary_is_undecided() {
        // S_1 = 9/4, so ||S_1|| = 1/4 = theta exactly
        let s = ExpSumSpec::new(vec![rat(2, 1)], vec![rat(1, 1)], rat(1, 4), rat(1, 4), None).unwrap();
        let r = scan_hits(&s, &ScanConfig { n_max: 3, prec_cap: 512, ..Default::default() }).unwrap();
        assert_eq!(r.undecided.iter().map(|u| u.n).collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn integer_base_is_trivially_pisot() {
        let s = ExpSumSpec::new(vec![rat(2, 1)], vec![rat(1, 1)], rat(0, 1), rat(1, 2), None).unwrap();
        let r = scan_hits(&s, &ScanConfig { n_max: 5, ..Default::default() }).unwrap();
        assert_eq!(r.hits.len(), 6);
        let a = analyze_hit(&s, &r.hits[3]).unwrap();
        assert!(a.pseudo_pisot.pisot && a.bases[0].algebraic_integer && a.bases[0].others_below_one);
    }

    #[test]
    fn spec_file_round_trip() {
        let text = "alpha.1.minpoly = x^2-x-1\nalpha.1.root = 1.618\nq.1 = 1/2\nbeta = 1/2\n\
                    theta.minpoly = x^2+x-1\ntheta.root = 0.618\nn_max = 64\nn_filter = powers_of_2\nbudget = 2*sqrt(n)\n";
        let f = ExpSumSpec::parse(text).unwrap();
        assert_eq!(f.scan.filter, NFilter::PowersOf2);
        assert_eq!(f.spec.budget(), Some(&Budget::Sqrt { c: q(2, 1) }));
        assert!(f.spec.height_ok(4));
        assert!(ExpSumSpec::parse("alpha.1 = 3\ntheta = 1/2\nbogus = 1\n").is_err());
        assert_eq!(NFilter::parse("residue 7 mod 3").unwrap(), NFilter::Residue { r: 1, m: 3 });
    }

    #[test]
    fn expansion() {
        let mut poly = BTreeMap::new();
        poly.insert(vec![2], q(1, 1));
        poly.insert(vec![1], q(1, 1));
        let s = expand_poly_power_sum(&poly, &[phi()], rat(1, 2), None).unwrap();
        assert_eq!(s.k(), 2);
        assert_eq!(s.alphas()[0].minpoly(), &p("x^2 - x - 1"));
        assert_eq!(s.alphas()[1].minpoly(), &p("x^2 - 3*x + 1"));
        let mut poly = BTreeMap::new();
        poly.insert(vec![3], q(2, 1));
        poly.insert(vec![1], q(-1, 1));
        poly.insert(vec![0], q(1, 2));
        let s = expand_poly_power_sum(&poly, &[phi()], rat(1, 2), None).unwrap();
        assert_eq!(s.alphas()[1].minpoly(), &p("x^2 - 4*x - 1"));
        assert_eq!(s.qs()[1].as_rational(), Some(q(2, 1)));
        assert_eq!(s.beta().as_rational(), Some(q(1, 2)));

        let s2 = root("x^2 - 2", q(1, 1), q(2, 1));
        let s3 = root("x^2 - 3", q(1, 1), q(2, 1));
        let mut poly = BTreeMap::new();
        poly.insert(vec![1, 1], q(1, 1));
        poly.insert(vec![0, 0], q(3, 1));
        let s = expand_poly_power_sum(&poly, &[s2.clone(), s3], rat(1, 2), None).unwrap();
        assert_eq!(s.alphas()[0].minpoly(), &p("x^2 - 6"));
        assert_eq!(s.beta().as_rational(), Some(q(3, 1)));

        let two = rat(2, 1);
        let r = expand_poly_power_sum(&poly, &[s2, two], rat(1, 2), None);
        assert!(matches!(r, Err(crate::Error::MultiplicativeDependence(_))));
    }
}
