//! The dichotomy for growth constants: either no small minimal polynomial
//! exists (evidence of transcendence), or `alpha^h` is tested for being Pisot,
//! where h counts the roots of unity in the Galois closure of
//! `Q(alpha, a_d^{-1/(d-1)})`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algnum::{classify_pisot, torsion_order, AlgebraicNumber, ComplexBox, IntPolynomial, PisotClass, PisotWitness, TorsionReport};
use crate::error::{Error, Result};
use crate::growth::{growth_constant, GrowthResult};
use crate::lattice::relation::LatticeConfig;
use crate::lattice::{guess_min_poly_with, RelationReport, Verdict};
use crate::numkernel::IntervalReal;
use crate::recursion::RecursionSpec;

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyConfig {
    pub prec: u32,
    pub max_deg: usize,
    #[serde(serialize_with = "crate::ser::int")]
    pub max_height: BigInt,
    pub m_cap: u32,
    /// Cap on the product of generator degrees fed to the torsion step.
    pub torsion_degree_cap: usize,
    pub lattice: LatticeConfig,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            prec: 700,
            max_deg: 8,
            max_height: BigInt::from(10u64.pow(15)),
            m_cap: 4,
            torsion_degree_cap: 24,
            lattice: LatticeConfig::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MinpolyCandidate {
    pub polynomial: IntPolynomial,
    /// Irreducible, with exactly one certified root meeting the alpha enclosure.
    pub root_isolated: bool,
    /// The root still lies in alpha's enclosure at twice the precision.
    pub reverified_bits: Option<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TorsionSummary {
    pub h: Option<u64>,
    pub certified: bool,
    pub generators: Vec<IntPolynomial>,
    pub report: Option<TorsionReport>,
    /// Why h is missing, when it is.
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PisotPower {
    pub h: u64,
    pub minpoly: IntPolynomial,
    pub witness: PisotWitness,
}

#[derive(Clone, Debug, Serialize)]
pub struct MoreoverEntry {
    pub m: u32,
    /// Minimal polynomial of `a_d^{(d-2)/(d-1)} alpha^{d^m}`.
    pub minpoly: IntPolynomial,
    pub verdict: PisotClass,
}

#[derive(Clone, Debug, Serialize)]
pub struct MoreoverCheck {
    pub m_cap: u32,
    pub least_m: Option<u32>,
    pub entries: Vec<MoreoverEntry>,
    /// Set when the scan stopped early.
    pub stopped: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub spec: RecursionSpec,
    pub config: ClassifyConfig,
    pub alpha: IntervalReal,
    pub growth: GrowthResult,
    pub minpoly_candidate: Option<MinpolyCandidate>,
    pub transcendence_evidence: Option<RelationReport>,
    pub torsion: Option<TorsionSummary>,
    pub pisot_alpha_h: Option<PisotPower>,
    pub moreover_check: Option<MoreoverCheck>,
}

fn stage(name: &str, e: Error) -> Error {
    let tag = |m: String| format!("{name}: {m}");
    match e {
        Error::Domain(m) => Error::Domain(tag(m)),
        Error::PrecisionInsufficient(m) => Error::PrecisionInsufficient(tag(m)),
        Error::DivergenceNotEstablished(m) => Error::DivergenceNotEstablished(tag(m)),
        Error::Parse(m) => Error::Parse(tag(m)),
        Error::InvalidInput(m) => Error::InvalidInput(tag(m)),
        Error::Unsupported(m) => Error::Unsupported(tag(m)),
        other => other,
    }
}

/// Integer polynomial `u x^k - v` for `x^k = v/u`.
fn binomial(k: usize, r: &BigRational) -> IntPolynomial {
    let mut c = vec![BigInt::zero(); k + 1];
    c[0] = -r.numer().clone();
    c[k] = r.denom().clone();
    IntPolynomial::new(c)
}

/// The positive real root of `x^k = r` (r > 0) as an algebraic number.
fn positive_root(k: usize, r: &BigRational) -> Result<AlgebraicNumber> {
    if !r.is_positive() {
        return Err(Error::Unsupported("a_d must be positive for the real root a_d^{1/(d-1)}".into()));
    }
    if k == 1 {
        return Ok(AlgebraicNumber::from_rational(r));
    }
    let approx = r.to_f64().unwrap().powf(1.0 / k as f64);
    let lo = BigRational::from_float(approx * 0.999).unwrap();
    let hi = BigRational::from_float(approx * 1.001).unwrap();
    AlgebraicNumber::real_root_in(&binomial(k, r), &lo, &hi)
}

fn torsion_stage(alpha: &AlgebraicNumber, spec: &RecursionSpec, cfg: &ClassifyConfig) -> Result<TorsionSummary> {
    let d = spec.degree();
    let g = positive_root(d - 1, &spec.lead().recip())?;
    let generators = vec![alpha.minpoly().clone(), g.minpoly().clone()];
    Ok(match torsion_order(&generators, cfg.torsion_degree_cap) {
        Ok(r) => TorsionSummary { h: Some(r.h), certified: r.certified, generators, report: Some(r), error: None },
        Err(e @ Error::Unsupported(_)) | Err(e @ Error::PrecisionInsufficient(_)) => {
            TorsionSummary { h: None, certified: false, generators, report: None, error: Some(e.to_string()) }
        }
        Err(e) => return Err(e),
    })
}

fn moreover(alpha: &AlgebraicNumber, spec: &RecursionSpec, m_cap: u32) -> Result<Option<MoreoverCheck>> {
    let ad = spec.lead();
    if !ad.is_integer() {
        return Ok(None);
    }
    let d = spec.degree();
    let c = positive_root(d - 1, &num_traits::pow::pow(ad.clone(), d - 2))?;
    let mut out = MoreoverCheck { m_cap, least_m: None, entries: Vec::new(), stopped: None };
    for m in 0..=m_cap {
        let e = (d as u64).checked_pow(m).filter(|&e| e.saturating_mul(alpha.degree() as u64) <= 4096);
        let Some(e) = e else {
            out.stopped = Some(format!("alpha^(d^{m}) exceeds the exponent limit"));
            break;
        };
        let v = match alpha.pow(e).and_then(|p| c.mul(&p)) {
            Ok(v) => v,
            Err(err) => {
                out.stopped = Some(err.to_string());
                break;
            }
        };
        let w = classify_pisot(v.minpoly())?;
        if w.verdict == PisotClass::Pisot && out.least_m.is_none() {
            out.least_m = Some(m);
        }
        out.entries.push(MoreoverEntry { m, minpoly: v.minpoly().clone(), verdict: w.verdict });
    }
    Ok(Some(out))
}

/// Run the whole pipeline on one recursion.
pub fn classify(spec: &RecursionSpec, cfg: &ClassifyConfig) -> Result<ClassificationReport> {
    let needed = cfg.lattice.needed_bits(cfg.max_deg, &cfg.max_height) + 16;
    let prec = cfg.prec.max(needed);
    let growth = growth_constant(spec, prec).map_err(|e| stage("growth", e))?;
    let alpha = growth.alpha.clone();
    let rel = guess_min_poly_with(&alpha, cfg.max_deg, &cfg.max_height, &cfg.lattice).map_err(|e| stage("minpoly", e))?;
    let mut report = ClassificationReport {
        spec: spec.clone(),
        config: ClassifyConfig { prec, ..cfg.clone() },
        alpha: alpha.clone(),
        growth,
        minpoly_candidate: None,
        transcendence_evidence: None,
        torsion: None,
        pisot_alpha_h: None,
        moreover_check: None,
    };
    let f = match (&rel.verdict, &rel.polynomial) {
        (Verdict::RelationFound, Some(f)) => f.clone(),
        _ => {
            report.transcendence_evidence = Some(rel);
            return Ok(report);
        }
    };
    let a = AlgebraicNumber::new(f.clone(), ComplexBox::real(alpha.clone())).map_err(|e| stage("minpoly", e))?;
    // independent second look at twice the precision
    let fine = growth_constant(spec, 2 * prec).map_err(|e| stage("growth", e))?;
    let again = a.real_enclosure(2 * prec).map_err(|e| stage("minpoly", e))?;
    let reverified_bits = fine.alpha.overlaps(&again).then_some(2 * prec);
    report.minpoly_candidate = Some(MinpolyCandidate { polynomial: f, root_isolated: true, reverified_bits });
    if reverified_bits.is_none() {
        return Ok(report);
    }
    let tors = torsion_stage(&a, spec, cfg).map_err(|e| stage("torsion", e))?;
    if let Some(h) = tors.h {
        let ah = a.pow(h).map_err(|e| stage("pisot", e))?;
        let witness = classify_pisot(ah.minpoly()).map_err(|e| stage("pisot", e))?;
        report.pisot_alpha_h = Some(PisotPower { h, minpoly: ah.minpoly().clone(), witness });
    }
    report.torsion = Some(tors);
    report.moreover_check = moreover(&a, spec, cfg.m_cap).map_err(|e| stage("moreover", e))?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(s: &str) -> ClassificationReport {
        classify(&RecursionSpec::parse(s).unwrap(), &ClassifyConfig { prec: 320, max_deg: 4, max_height: BigInt::from(10u64.pow(6)), ..Default::default() }).unwrap()
    }

    #[test]
    fn golden_ratio_example() {
        let r = run("P = x^2 - 2; x1 = 3");
        let c = r.minpoly_candidate.unwrap();
        assert_eq!(c.polynomial, IntPolynomial::parse("x^2 - x - 1").unwrap());
        assert!(c.reverified_bits.is_some());
        let t = r.torsion.unwrap();
        assert_eq!((t.h, t.certified), (Some(2), true));
        let p = r.pisot_alpha_h.unwrap();
        assert_eq!(p.minpoly, IntPolynomial::parse("x^2 - 3*x + 1").unwrap());
        assert_eq!(p.witness.verdict, PisotClass::Pisot);
        assert_eq!(r.moreover_check.unwrap().least_m, Some(0));
    }

    #[test]
    fn exact_power_examples() {
        let r = run("P = 2*x^3; x0 = 1");
        assert_eq!(r.minpoly_candidate.unwrap().polynomial, IntPolynomial::parse("x^2 - 2").unwrap());
        let p = r.pisot_alpha_h.unwrap();
        assert_eq!((p.h, p.witness.verdict), (2, PisotClass::Pisot));
        let r = run("P = 2*x^4; x0 = 1");
        assert_eq!(r.minpoly_candidate.unwrap().polynomial, IntPolynomial::parse("x^3 - 2").unwrap());
        assert_eq!(r.torsion.unwrap().h, Some(6));
        let p = r.pisot_alpha_h.unwrap();
        assert_eq!(p.minpoly, IntPolynomial::parse("x - 4").unwrap());
        let m = r.moreover_check.unwrap();
        // 2^{2/3} alpha = 2 and 2^{2/3} alpha^4 = 4
        assert_eq!(m.entries[0].minpoly, IntPolynomial::parse("x - 2").unwrap());
        assert_eq!(m.entries[1].minpoly, IntPolynomial::parse("x - 4").unwrap());
    }

    #[test]
    fn sylvester_has_no_small_minpoly() {
        let r = run("P = x^2 - x + 1; x0 = 2");
        assert!(r.minpoly_candidate.is_none() && r.torsion.is_none());
        let e = r.transcendence_evidence.unwrap();
        assert_eq!(e.verdict, Verdict::NoneWithinBounds);
    }
}
