//! Exponential sums `sum q_i alpha_i^n + beta` and their spec files.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algnum::field::{FieldElement, NumberField};
use crate::algnum::{is_root_of_unity, reduce_degenerate, weil_height, AlgebraicNumber, IntPolynomial};
use crate::error::{Error, Result};
use crate::numkernel::{parse_rational, IntervalReal};

/// Largest degree of the common field holding bases, coefficients and `beta`.
pub const MAX_SUM_FIELD_DEGREE: usize = 32;

/// Sublinear height budget `f(n)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Budget {
    /// `c n^e` with `0 <= e < 1`.
    Power {
        #[serde(serialize_with = "ser_q")]
        c: BigRational,
        #[serde(serialize_with = "ser_q")]
        e: BigRational,
    },
    /// `c sqrt(n)`.
    Sqrt {
        #[serde(serialize_with = "ser_q")]
        c: BigRational,
    },
    /// `c ln(n)`.
    Log {
        #[serde(serialize_with = "ser_q")]
        c: BigRational,
    },
}

fn ser_q<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl Budget {
    /// Parse `C*n^E`, `C*sqrt(n)` or `C*log(n)` (the `C*` part is optional).
    pub fn parse(s: &str) -> Result<Budget> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (c, rest) = match t.rsplit_once('*') {
            Some((c, r)) if !r.is_empty() && !c.ends_with('^') => (parse_rational(c)?, r.to_string()),
            _ => (BigRational::one(), t.clone()),
        };
        if c.is_negative() {
            return Err(Error::Parse("budget constant must be nonnegative".into()));
        }
        let b = if rest == "sqrt(n)" {
            Budget::Sqrt { c }
        } else if rest == "log(n)" || rest == "ln(n)" {
            Budget::Log { c }
        } else if let Some(e) = rest.strip_prefix("n^") {
            let e = parse_rational(e.trim_start_matches('(').trim_end_matches(')'))?;
            if e.is_negative() || e >= BigRational::one() {
                return Err(Error::Parse("budget exponent must lie in [0, 1)".into()));
            }
            Budget::Power { c, e }
        } else if rest == "n" {
            return Err(Error::Parse("a linear budget is not sublinear".into()));
        } else {
            return Err(Error::Parse(format!("unknown budget {s:?}")));
        };
        Ok(b)
    }

    /// `f(n)` in floating point; height comparisons against it are advisory.
    pub fn eval(&self, n: u64) -> f64 {
        let n = n as f64;
        match self {
            Budget::Power { c, e } => c.to_f64().unwrap() * n.powf(e.to_f64().unwrap()),
            Budget::Sqrt { c } => c.to_f64().unwrap() * n.sqrt(),
            Budget::Log { c } => c.to_f64().unwrap() * n.max(1.0).ln(),
        }
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Budget::Power { c, e } => write!(f, "{c}*n^({e})"),
            Budget::Sqrt { c } => write!(f, "{c}*sqrt(n)"),
            Budget::Log { c } => write!(f, "{c}*log(n)"),
        }
    }
}

/// Which exponents a scan visits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NFilter {
    All,
    PowersOf2,
    Residue { r: u64, m: u64 },
}

impl NFilter {
    pub fn parse(s: &str) -> Result<NFilter> {
        let t = s.trim();
        match t {
            "all" => return Ok(NFilter::All),
            "powers_of_2" | "powers-of-2" => return Ok(NFilter::PowersOf2),
            _ => {}
        }
        let w: Vec<&str> = t.split_whitespace().collect();
        if let ["residue", r, "mod", m] = w.as_slice() {
            let r: u64 = r.parse().map_err(|_| Error::Parse(format!("bad residue in {s:?}")))?;
            let m: u64 = m.parse().map_err(|_| Error::Parse(format!("bad modulus in {s:?}")))?;
            if m == 0 {
                return Err(Error::Parse("modulus must be positive".into()));
            }
            return Ok(NFilter::Residue { r: r % m, m });
        }
        Err(Error::Parse(format!("unknown n_filter {s:?}")))
    }

    pub fn accepts(&self, n: u64) -> bool {
        match self {
            NFilter::All => true,
            NFilter::PowersOf2 => n.is_power_of_two(),
            NFilter::Residue { r, m } => n % m == *r,
        }
    }
}

/// Construction switches.
#[derive(Clone, Debug, Serialize)]
pub struct SpecOptions {
    /// Skip the `|alpha_i| >= 1` requirement (for identities such as Lucas sums).
    pub allow_small_bases: bool,
    pub max_field_degree: usize,
}

impl Default for SpecOptions {
    fn default() -> Self {
        SpecOptions { allow_small_bases: false, max_field_degree: MAX_SUM_FIELD_DEGREE }
    }
}

/// The inequality `||q_1 alpha_1^n + ... + q_k alpha_k^n + beta|| < theta^n`.
///
/// Bases, coefficients and `beta` are placed in one number field so that
/// every value of the sum is computed exactly before it is embedded.
#[derive(Clone, Debug)]
pub struct ExpSumSpec {
    alphas: Vec<AlgebraicNumber>,
    qs: Vec<AlgebraicNumber>,
    beta: AlgebraicNumber,
    theta: AlgebraicNumber,
    budget: Option<Budget>,
    field: NumberField,
    alpha_el: Vec<FieldElement>,
    q_el: Vec<FieldElement>,
    beta_el: FieldElement,
    small_bases_allowed: bool,
    max_q_height: Option<IntervalReal>,
}

/// Place the numbers in one field, returning it and their images.
pub fn common_field(nums: &[AlgebraicNumber], cap: usize) -> Result<(NumberField, Vec<FieldElement>)> {
    let mut k = NumberField::rationals();
    let mut els: Vec<FieldElement> = Vec::new();
    for a in nums {
        if let Some(e) = k.find(a)? {
            els.push(e);
            continue;
        }
        let (l, img_gen, img_a) = k.compositum(a)?;
        if l.degree() > cap {
            return Err(Error::Unsupported(format!("common field has degree {} above the cap {cap}", l.degree())));
        }
        els = els.iter().map(|e| e.substitute(&img_gen)).collect();
        els.push(img_a);
        k = l;
    }
    // fresh contexts keep every element on the same field polynomial
    let els = els.iter().map(|e| k.from_qpoly(&e.to_qpoly())).collect();
    Ok((k, els))
}

fn positive_below_one(t: &AlgebraicNumber) -> Result<bool> {
    if !t.is_real() || t.is_zero() {
        return Ok(false);
    }
    if let Some(r) = t.as_rational() {
        return Ok(r.is_positive() && r < BigRational::one());
    }
    let mut p = 32;
    let e = loop {
        let e = t.real_enclosure(p)?;
        if !e.contains_zero() {
            break e;
        }
        p *= 2;
    };
    Ok(e.is_positive() && t.cmp_modulus_one()? == Ordering::Less)
}

impl ExpSumSpec {
    pub fn new(
        alphas: Vec<AlgebraicNumber>,
        qs: Vec<AlgebraicNumber>,
        beta: AlgebraicNumber,
        theta: AlgebraicNumber,
        budget: Option<Budget>,
    ) -> Result<Self> {
        Self::with_options(alphas, qs, beta, theta, budget, &SpecOptions::default())
    }

    pub fn with_options(
        alphas: Vec<AlgebraicNumber>,
        qs: Vec<AlgebraicNumber>,
        beta: AlgebraicNumber,
        theta: AlgebraicNumber,
        budget: Option<Budget>,
        opts: &SpecOptions,
    ) -> Result<Self> {
        if alphas.is_empty() || alphas.len() != qs.len() {
            return Err(Error::InvalidInput("need as many coefficients as bases, at least one of each".into()));
        }
        for (i, a) in alphas.iter().enumerate() {
            if a.is_zero() {
                return Err(Error::InvalidInput(format!("alpha.{} is zero", i + 1)));
            }
            if !opts.allow_small_bases && a.cmp_modulus_one()? == Ordering::Less {
                return Err(Error::InvalidInput(format!("|alpha.{}| < 1", i + 1)));
            }
            if let Some(m) = is_root_of_unity(a) {
                return Err(Error::InvalidInput(format!("alpha.{} is a root of unity of order {m}", i + 1)));
            }
        }
        let red = reduce_degenerate(&alphas, &qs)?;
        if !red.is_trivial() {
            let merged: Vec<Vec<usize>> = red.classes[0].sources.iter().filter(|s| s.len() > 1).cloned().collect();
            return Err(Error::InvalidInput(format!(
                "degenerate bases (ratios are roots of unity, period {}, groups {merged:?}); split the sum with reduce_degenerate",
                red.period
            )));
        }
        if !positive_below_one(&theta)? {
            return Err(Error::InvalidInput("theta must be a real number in (0, 1)".into()));
        }
        let mut nums = alphas.clone();
        nums.extend(qs.iter().cloned());
        nums.push(beta.clone());
        let (field, mut els) = common_field(&nums, opts.max_field_degree)?;
        let beta_el = els.pop().unwrap();
        let q_el = els.split_off(alphas.len());
        let max_q_height = if budget.is_some() {
            let mut m: Option<IntervalReal> = None;
            for q in qs.iter().filter(|q| !q.is_zero()) {
                let h = weil_height(q, 64)?;
                m = Some(match m {
                    Some(x) => x.max_with(&h),
                    None => h,
                });
            }
            m
        } else {
            None
        };
        Ok(ExpSumSpec {
            alphas,
            qs,
            beta,
            theta,
            budget,
            field,
            alpha_el: els,
            q_el,
            beta_el,
            small_bases_allowed: opts.allow_small_bases,
            max_q_height,
        })
    }

    pub fn alphas(&self) -> &[AlgebraicNumber] {
        &self.alphas
    }

    pub fn qs(&self) -> &[AlgebraicNumber] {
        &self.qs
    }

    pub fn beta(&self) -> &AlgebraicNumber {
        &self.beta
    }

    pub fn theta(&self) -> &AlgebraicNumber {
        &self.theta
    }

    pub fn budget(&self) -> Option<&Budget> {
        self.budget.as_ref()
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.alphas.len()
    }

    pub(crate) fn beta_element(&self) -> &FieldElement {
        &self.beta_el
    }

    /// Largest Weil height among the coefficients (computed when a budget is set).
    pub fn max_coefficient_height(&self) -> Option<&IntervalReal> {
        self.max_q_height.as_ref()
    }

    /// Certified `max h(q_i) <= f(n)`; true without a budget.
    pub fn height_ok(&self, n: u64) -> bool {
        match (&self.budget, &self.max_q_height) {
            (Some(b), Some(h)) => h.hi().to_f64() <= b.eval(n),
            (Some(_), None) => true,
            (None, _) => true,
        }
    }

    /// `q_i alpha_i^n` as an exact field element.
    pub fn term(&self, i: usize, n: u64) -> FieldElement {
        self.q_el[i].mul(&self.alpha_el[i].pow(n))
    }

    /// `sum q_i alpha_i^n + beta` as an exact field element.
    pub fn value_element(&self, n: u64) -> FieldElement {
        (0..self.k()).fold(self.beta_el.clone(), |acc, i| acc.add(&self.term(i, n)))
    }

    /// Parse the flat key-value spec format.
    pub fn parse(text: &str) -> Result<SpecFile> {
        parse_spec_file(text)
    }
}

/// Number written in a spec file: a rational, or `minpoly` with a root hint.
fn number_from_keys(map: &BTreeMap<String, String>, key: &str) -> Result<Option<AlgebraicNumber>> {
    if let Some(v) = map.get(key) {
        return Ok(Some(AlgebraicNumber::from_rational(&parse_rational(v)?)));
    }
    let Some(mp) = map.get(&format!("{key}.minpoly")) else {
        return Ok(None);
    };
    let p = IntPolynomial::parse(mp)?;
    let re = map.get(&format!("{key}.root")).ok_or_else(|| Error::Parse(format!("{key}.root is missing")))?;
    let re = parse_rational(re)?;
    let im = match map.get(&format!("{key}.root_im")) {
        Some(s) => parse_rational(s)?,
        None => BigRational::zero(),
    };
    if p.degree() == 1 {
        let r = BigRational::new(-p.coeff(0), p.coeff(1));
        return Ok(Some(AlgebraicNumber::from_rational(&r)));
    }
    Ok(Some(AlgebraicNumber::nearest_root(&p, &re, &im)?))
}

/// Scan settings read from a spec file.
#[derive(Clone, Debug, Serialize)]
pub struct ScanConfig {
    pub n_min: u64,
    pub n_max: u64,
    pub filter: NFilter,
    /// Starting working precision in bits.
    pub prec: u32,
    /// Precision escalation stops here; undecided cases are reported.
    pub prec_cap: u32,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { n_min: 0, n_max: 64, filter: NFilter::All, prec: 64, prec_cap: 1 << 16 }
    }
}

impl ScanConfig {
    pub fn exponents(&self) -> Vec<u64> {
        (self.n_min..=self.n_max).filter(|&n| self.filter.accepts(n)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct SpecFile {
    pub spec: ExpSumSpec,
    pub scan: ScanConfig,
    /// Which scan keys the file set (so command-line flags can be layered on top).
    pub set_keys: Vec<String>,
}

fn parse_spec_file(text: &str) -> Result<SpecFile> {
    let mut map = BTreeMap::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse(format!("line {}: expected key = value", ln + 1)))?;
        if map.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
            return Err(Error::Parse(format!("line {}: duplicate key {}", ln + 1, k.trim())));
        }
    }
    let mut alphas = Vec::new();
    let mut qs = Vec::new();
    for i in 1.. {
        let a = number_from_keys(&map, &format!("alpha.{i}"))?;
        let q = number_from_keys(&map, &format!("q.{i}"))?;
        match (a, q) {
            (Some(a), Some(q)) => {
                alphas.push(a);
                qs.push(q);
            }
            (Some(a), None) => {
                alphas.push(a);
                qs.push(AlgebraicNumber::from_int(1));
            }
            (None, Some(_)) => return Err(Error::Parse(format!("q.{i} has no matching alpha.{i}"))),
            (None, None) => break,
        }
    }
    let beta = number_from_keys(&map, "beta")?.unwrap_or_else(|| AlgebraicNumber::from_int(0));
    let theta = number_from_keys(&map, "theta")?.ok_or_else(|| Error::Parse("theta is missing".into()))?;
    let budget = map.get("budget").map(|s| Budget::parse(s)).transpose()?;
    let mut opts = SpecOptions::default();
    if let Some(v) = map.get("allow_small_bases") {
        opts.allow_small_bases = v.parse().map_err(|_| Error::Parse("allow_small_bases must be true or false".into()))?;
    }
    let mut scan = ScanConfig::default();
    let mut set_keys = Vec::new();
    let int = |k: &str| -> Result<Option<u64>> {
        map.get(k).map(|v| v.parse::<u64>().map_err(|_| Error::Parse(format!("{k} must be a nonnegative integer")))).transpose()
    };
    if let Some(v) = int("n_min")? {
        scan.n_min = v;
        set_keys.push("n_min".into());
    }
    if let Some(v) = int("n_max")? {
        scan.n_max = v;
        set_keys.push("n_max".into());
    }
    if let Some(v) = int("prec")? {
        scan.prec = v as u32;
        set_keys.push("prec".into());
    }
    if let Some(v) = int("prec_cap")? {
        scan.prec_cap = v as u32;
        set_keys.push("prec_cap".into());
    }
    if let Some(v) = map.get("n_filter") {
        scan.filter = NFilter::parse(v)?;
        set_keys.push("n_filter".into());
    }
    let known = |k: &str| {
        ["beta", "theta", "budget", "allow_small_bases", "n_min", "n_max", "prec", "prec_cap", "n_filter"].contains(&k)
            || k.starts_with("alpha.")
            || k.starts_with("q.")
            || k.starts_with("beta.")
            || k.starts_with("theta.")
    };
    if let Some(k) = map.keys().find(|k| !known(k)) {
        return Err(Error::Parse(format!("unknown key {k}")));
    }
    let spec = ExpSumSpec::with_options(alphas, qs, beta, theta, budget, &opts)?;
    Ok(SpecFile { spec, scan, set_keys })
}

/// Echo of a spec for reports.
#[derive(Serialize)]
struct SpecEcho<'a> {
    alphas: &'a [AlgebraicNumber],
    qs: &'a [AlgebraicNumber],
    beta: &'a AlgebraicNumber,
    theta: &'a AlgebraicNumber,
    budget: Option<String>,
    field_poly: String,
    field_degree: usize,
    small_bases_allowed: bool,
}

impl Serialize for ExpSumSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpecEcho {
            alphas: &self.alphas,
            qs: &self.qs,
            beta: &self.beta,
            theta: &self.theta,
            budget: self.budget.as_ref().map(|b| b.to_string()),
            field_poly: self.field.poly().to_string_in("y"),
            field_degree: self.field.degree(),
            small_bases_allowed: self.small_bases_allowed,
        }
        .serialize(s)
    }
}
