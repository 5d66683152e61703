//! Command-line front end for growthlab. Every invocation writes exactly one
//! JSON document to standard output; [`run`] is the in-process entry point.

mod recfile;
mod render;

use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use growthlab::algnum::{classify_pisot, is_irreducible, power_trace, torsion_order, AlgebraicNumber, IntPolynomial};
use growthlab::classify::{classify, ClassifyConfig};
use growthlab::dioph::{analyze_hit, dist_equals_scaled_theta_power, scan_hits, ExpSumSpec, NFilter};
use growthlab::growth::{asymptotic_check, direct_root_alpha, growth_constant, kappa_product, precision_for_power};
use growthlab::lattice::guess_min_poly;
use growthlab::numkernel::{parse_decimal_enclosure, parse_mid_rad, parse_rational, IntervalReal};
use growthlab::recursion::iterate_orbit;
use growthlab::Error;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Map, Value};

pub use recfile::RecFile;

/// Environment variable capping every precision escalation, in bits.
pub const PREC_CAP_ENV: &str = "GROWTHLAB_PREC_CAP";

#[derive(Parser, Debug)]
#[command(name = "growthlab", version, about = "Growth constants of integer polynomial recursions")]
pub struct Cli {
    /// Render a human-readable table instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Omit the timing block so identical runs give identical bytes.
    #[arg(long, global = true)]
    pub no_meta: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact orbit of a recursion file.
    Orbit {
        file: PathBuf,
        /// Number of steps after the seed [default: 10].
        #[arg(long)]
        count: Option<usize>,
    },
    /// Certified growth constant with cross-checks and asymptotic residuals.
    Alpha {
        file: PathBuf,
        /// Target precision in bits [default: 256].
        #[arg(long)]
        prec: Option<u32>,
        /// Also compute x_n^(d^-n) at this index.
        #[arg(long)]
        direct_n: Option<usize>,
        /// Residuals are checked for indices from the seed up to this one.
        #[arg(long)]
        residuals: Option<usize>,
    },
    /// Transcendence evidence or the Pisot test on alpha^h.
    Classify {
        file: PathBuf,
        /// Precision of alpha in bits [default: 700].
        #[arg(long)]
        prec: Option<u32>,
        /// Largest minimal-polynomial degree searched [default: 8].
        #[arg(long)]
        max_deg: Option<usize>,
        /// Coefficient bound, as an integer, 10^k or 1e15 [default: 10^15].
        #[arg(long)]
        max_height: Option<String>,
        /// Largest m tried for the Pisot test on a_d^((d-2)/(d-1)) alpha^(d^m) [default: 4].
        #[arg(long)]
        m_cap: Option<u32>,
    },
    /// Certified solutions of ||sum q_i alpha_i^n + beta|| < theta^n.
    Scan {
        file: PathBuf,
        /// First exponent [default: 0].
        #[arg(long)]
        n_min: Option<u64>,
        /// Last exponent [default: 64].
        #[arg(long)]
        n_max: Option<u64>,
        /// Starting working precision in bits [default: 64].
        #[arg(long)]
        prec: Option<u32>,
        /// Escalation stops here and the exponent is reported undecided [default: 65536].
        #[arg(long)]
        prec_cap: Option<u32>,
        /// all | powers_of_2 | "residue r mod m"
        #[arg(long)]
        filter: Option<String>,
        /// Check ||S_n|| = C theta^n exactly at every hit.
        #[arg(long)]
        law: Option<String>,
        /// Skip the per-hit structural analysis.
        #[arg(long)]
        no_analyze: bool,
    },
    /// Pisot test of an integer polynomial.
    Pisot { poly: String },
    /// Minimal polynomial search for a decimal (or mid±rad) number.
    Minpoly {
        value: String,
        /// Largest degree searched [default: 8].
        #[arg(long)]
        max_deg: Option<usize>,
        /// Coefficient bound [default: 10^15].
        #[arg(long)]
        max_height: Option<String>,
    },
    /// Roots of unity in the Galois closure of the fields generated by the roots.
    Torsion {
        #[arg(required = true)]
        polys: Vec<String>,
        /// Largest Galois-closure degree attempted [default: 24].
        #[arg(long)]
        degree_cap: Option<usize>,
    },
    /// Traces Tr(alpha^n) for a root alpha of an irreducible polynomial.
    Trace {
        poly: String,
        /// Comma-separated exponents.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
    },
}

/// What a finished invocation produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub report: Value,
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::PrecisionInsufficient(_) => 3,
        Error::Unsupported(_) => 4,
        _ => 2,
    }
}

/// One configuration entry together with where its value came from.
#[derive(Default)]
struct Settings {
    values: Map<String, Value>,
    defaults: Map<String, Value>,
    sources: Map<String, Value>,
}

impl Settings {
    fn set<T: Serialize>(&mut self, key: &str, value: &T, default: &T, source: &str) {
        self.values.insert(key.into(), json!(value));
        self.defaults.insert(key.into(), json!(default));
        self.sources.insert(key.into(), json!(source));
    }

    /// flag > file > default
    fn resolve<T>(&mut self, key: &str, flag: Option<T>, file: Option<&str>, default: T) -> Result<T, Error>
    where
        T: FromStr + Serialize + Clone,
    {
        let (v, src) = match (flag, file) {
            (Some(v), _) => (v, "flag"),
            (None, Some(s)) => (s.trim().parse::<T>().map_err(|_| Error::Parse(format!("bad value for {key}: {s:?}")))?, "file"),
            (None, None) => (default.clone(), "default"),
        };
        self.set(key, &v, &default, src);
        Ok(v)
    }
}

fn prec_cap_env() -> Result<Option<u32>, Error> {
    match std::env::var(PREC_CAP_ENV) {
        Ok(s) => s.trim().parse().map(Some).map_err(|_| Error::InvalidInput(format!("{PREC_CAP_ENV} must be a bit count, got {s:?}"))),
        Err(_) => Ok(None),
    }
}

fn check_cap(bits: u32, cap: Option<u32>, what: &str) -> Result<(), Error> {
    match cap {
        Some(c) if bits > c => Err(Error::PrecisionInsufficient(format!("{what} needs {bits} bits, above {PREC_CAP_ENV}={c}"))),
        _ => Ok(()),
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn big(s: &str) -> Result<BigInt, Error> {
    parse_height(s)
}

/// Heights may be written as integers or powers such as `10^15` / `1e15`.
pub fn parse_height(s: &str) -> Result<BigInt, Error> {
    let s = s.trim();
    let pow = |b: &str, e: &str| -> Option<BigInt> {
        let b: BigInt = b.trim().parse().ok()?;
        let e: usize = e.trim().parse().ok()?;
        Some(num_traits::pow::pow(b, e))
    };
    let v = if let Some((b, e)) = s.split_once('^') {
        pow(b, e)
    } else if let Some((m, e)) = s.split_once(['e', 'E']) {
        let m: Option<BigInt> = m.trim().parse().ok();
        m.zip(pow("10", e)).map(|(m, p)| m * p)
    } else {
        s.parse().ok()
    };
    v.filter(|h: &BigInt| h.sign() == num_bigint::Sign::Plus).ok_or_else(|| Error::Parse(format!("bad height {s:?}")))
}

/// Upper bound on |a - b| over the two enclosures.
fn gap(a: &IntervalReal, b: &IntervalReal) -> String {
    growthlab::numkernel::to_sci(&(a - b).mag())
}

struct Report {
    command: &'static str,
    settings: Settings,
    input: Value,
    result: Value,
}

fn cmd_orbit(file: &Path, count: Option<usize>) -> Result<Report, Error> {
    let rf = RecFile::load(file)?;
    let mut st = Settings::default();
    let count = st.resolve("count", count, rf.opt("count"), 10)?;
    rf.reject_unused(&["count"])?;
    let orbit = iterate_orbit(&rf.spec, count)?;
    Ok(Report { command: "orbit", settings: st, input: json!(rf.spec), result: json!(orbit) })
}

fn cmd_alpha(file: &Path, prec: Option<u32>, direct_n: Option<usize>, residuals: Option<usize>) -> Result<Report, Error> {
    let rf = RecFile::load(file)?;
    let spec = &rf.spec;
    let cap = prec_cap_env()?;
    let mut st = Settings::default();
    let prec = st.resolve("prec", prec, rf.opt("prec"), 256)?;
    let direct_n = match (direct_n, rf.opt("direct_n")) {
        (None, None) => {
            st.set("direct_n", &Value::Null, &Value::Null, "default");
            None
        }
        (f, file) => Some(st.resolve("direct_n", f, file, 0)?),
    };
    let residuals = st.resolve("residuals", residuals, rf.opt("residuals"), spec.seed_index() + 5)?;
    rf.reject_unused(&["prec", "direct_n", "residuals"])?;
    check_cap(prec, cap, "alpha")?;

    let growth = growth_constant(spec, prec)?;
    let mut methods = vec![("log-series", growth.alpha.clone())];
    let direct = match direct_n {
        Some(n) => {
            let r = direct_root_alpha(spec, n, prec)?;
            methods.push(("direct-root", r.value.clone()));
            Some(r)
        }
        None => None,
    };
    let (product, product_note) = match kappa_product(spec, prec) {
        Ok(p) => {
            methods.push(("product-formula", p.value.clone()));
            (Some(p), None)
        }
        Err(Error::Unsupported(m)) => (None, Some(m)),
        Err(e) => return Err(e),
    };
    let mut agreement = Vec::new();
    for i in 0..methods.len() {
        for j in i + 1..methods.len() {
            let (a, b) = (&methods[i], &methods[j]);
            agreement.push(json!({ "a": a.0, "b": b.0, "overlap": a.1.overlaps(&b.1), "gap_upper": gap(&a.1, &b.1) }));
        }
    }

    let asymptotic = if residuals >= spec.seed_index() {
        let steps = (residuals - spec.seed_index()).max(1);
        let orbit = iterate_orbit(spec, steps)?;
        let w = prec.max(precision_for_power(spec, &orbit, residuals));
        check_cap(w, cap, "asymptotic residuals")?;
        let a = if w == prec { growth.alpha.clone() } else { growth_constant(spec, w)?.alpha };
        Some(asymptotic_check(spec, &orbit, &a, spec.seed_index()..=residuals)?)
    } else {
        None
    };
    let result = json!({
        "growth": growth,
        "direct_root": direct,
        "product": product,
        "product_note": product_note,
        "agreement": agreement,
        "asymptotic": asymptotic,
    });
    Ok(Report { command: "alpha", settings: st, input: json!(spec), result })
}

fn cmd_classify(file: &Path, prec: Option<u32>, max_deg: Option<usize>, max_height: Option<String>, m_cap: Option<u32>) -> Result<Report, Error> {
    let rf = RecFile::load(file)?;
    let cap = prec_cap_env()?;
    let d = ClassifyConfig::default();
    let mut st = Settings::default();
    let prec = st.resolve("prec", prec, rf.opt("prec"), d.prec)?;
    let max_deg = st.resolve("max_deg", max_deg, rf.opt("max_deg"), d.max_deg)?;
    let h = match max_height.as_deref().or(rf.opt("max_height")) {
        Some(s) => big(s)?,
        None => d.max_height.clone(),
    };
    let src = if max_height.is_some() { "flag" } else if rf.opt("max_height").is_some() { "file" } else { "default" };
    st.set("max_height", &h.to_string(), &d.max_height.to_string(), src);
    let m_cap = st.resolve("m_cap", m_cap, rf.opt("m_cap"), d.m_cap)?;
    let tcap = st.resolve("torsion_degree_cap", None, rf.opt("torsion_degree_cap"), d.torsion_degree_cap)?;
    rf.reject_unused(&["prec", "max_deg", "max_height", "m_cap", "torsion_degree_cap"])?;
    let cfg = ClassifyConfig { prec, max_deg, max_height: h, m_cap, torsion_degree_cap: tcap, lattice: d.lattice };
    let needed = cfg.lattice.needed_bits(max_deg, &cfg.max_height) + 16;
    // the minimal polynomial is re-verified at twice the working precision
    check_cap(2 * prec.max(needed), cap, "classify")?;
    let r = classify(&rf.spec, &cfg)?;
    Ok(Report { command: "classify", settings: st, input: json!(rf.spec), result: json!(r) })
}

#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    file: &Path,
    n_min: Option<u64>,
    n_max: Option<u64>,
    prec: Option<u32>,
    prec_cap: Option<u32>,
    filter: Option<String>,
    law: Option<String>,
    no_analyze: bool,
) -> Result<Report, Error> {
    let text = read(file)?;
    let sf = ExpSumSpec::parse(&text)?;
    let d = growthlab::dioph::ScanConfig::default();
    let mut cfg = sf.scan.clone();
    let mut st = Settings::default();
    let src = |flag: bool, key: &str| {
        if flag {
            "flag"
        } else if sf.set_keys.iter().any(|k| k == key) {
            "file"
        } else {
            "default"
        }
    };
    macro_rules! layer {
        ($flag:expr, $field:ident, $key:literal) => {{
            let s = src($flag.is_some(), $key);
            if let Some(v) = $flag {
                cfg.$field = v;
            }
            st.set($key, &cfg.$field, &d.$field, s);
        }};
    }
    layer!(n_min, n_min, "n_min");
    layer!(n_max, n_max, "n_max");
    layer!(prec, prec, "prec");
    let f = filter.map(|s| NFilter::parse(&s)).transpose()?;
    layer!(f, filter, "n_filter");
    let cap = prec_cap_env()?;
    let s = src(prec_cap.is_some(), "prec_cap");
    if let Some(v) = prec_cap {
        cfg.prec_cap = v;
    }
    if let Some(c) = cap {
        cfg.prec_cap = cfg.prec_cap.min(c);
    }
    st.set("prec_cap", &cfg.prec_cap, &d.prec_cap, if cap.is_some_and(|c| c <= cfg.prec_cap) && prec_cap.is_none() { "env" } else { s });
    if cfg.prec > cfg.prec_cap {
        cfg.prec = cfg.prec_cap;
    }
    let law_c = law.as_deref().map(parse_rational).transpose()?;
    st.set("law", &law, &None, if law.is_some() { "flag" } else { "default" });
    st.set("analyze", &!no_analyze, &true, if no_analyze { "flag" } else { "default" });

    let spec = &sf.spec;
    let r = scan_hits(spec, &cfg)?;
    let mut analyses = Vec::new();
    if !no_analyze {
        for h in &r.hits {
            analyses.push(json!(analyze_hit(spec, h)?));
        }
    }
    let mut laws = Vec::new();
    if let Some(c) = &law_c {
        for h in &r.hits {
            laws.push(json!({ "n": h.n, "holds": dist_equals_scaled_theta_power(spec, h.n, &h.nearest, c)? }));
        }
    }
    let mut result = json!(r);
    result["analyses"] = json!(analyses);
    if law_c.is_some() {
        result["law"] = json!({ "c": law, "checks": laws });
    }
    Ok(Report { command: "scan", settings: st, input: json!(spec), result })
}

fn poly(s: &str) -> Result<IntPolynomial, Error> {
    IntPolynomial::parse(s)
}

fn cmd_pisot(p: &str) -> Result<Report, Error> {
    let f = poly(p)?;
    let w = classify_pisot(&f)?;
    Ok(Report { command: "pisot", settings: Settings::default(), input: json!(f), result: json!(w) })
}

fn cmd_minpoly(value: &str, max_deg: Option<usize>, max_height: Option<String>) -> Result<Report, Error> {
    let mut st = Settings::default();
    let max_deg = st.resolve("max_deg", max_deg, None, 8)?;
    let dh = BigInt::from(10u64.pow(15));
    let h = match &max_height {
        Some(s) => big(s)?,
        None => dh.clone(),
    };
    st.set("max_height", &h.to_string(), &dh.to_string(), if max_height.is_some() { "flag" } else { "default" });
    let bits = (value.len() as f64 * 3.33) as u32 + 64;
    let x = if value.contains('±') || value.contains("+-") { parse_mid_rad(value, bits)? } else { parse_decimal_enclosure(value, bits)? };
    let r = guess_min_poly(&x, max_deg, &h)?;
    Ok(Report { command: "minpoly", settings: st, input: json!(value), result: json!(r) })
}

fn cmd_torsion(polys: &[String], degree_cap: Option<usize>) -> Result<Report, Error> {
    let gens = polys.iter().map(|s| poly(s)).collect::<Result<Vec<_>, _>>()?;
    let mut st = Settings::default();
    let cap = st.resolve("degree_cap", degree_cap, None, growthlab::algnum::torsion::MAX_CLOSURE_DEGREE)?;
    let r = torsion_order(&gens, cap)?;
    Ok(Report { command: "torsion", settings: st, input: json!(gens), result: json!(r) })
}

fn cmd_trace(p: &str, ns: &[u64]) -> Result<Report, Error> {
    let f = poly(p)?;
    if f.degree() == 0 || !is_irreducible(&f) {
        return Err(Error::InvalidInput(format!("{f} is not irreducible")));
    }
    let a = AlgebraicNumber::roots_of(&f)?.into_iter().next().ok_or_else(|| Error::InvalidInput("no roots".into()))?;
    let traces: Vec<Value> = ns
        .iter()
        .map(|&n| {
            let t = power_trace(&a, n);
            json!({ "n": n, "trace": t.to_string(), "integer": t.is_integer() })
        })
        .collect();
    Ok(Report { command: "trace", settings: Settings::default(), input: json!(f), result: json!(traces) })
}

fn dispatch(c: Command) -> (&'static str, Result<Report, Error>) {
    match c {
        Command::Orbit { file, count } => ("orbit", cmd_orbit(&file, count)),
        Command::Alpha { file, prec, direct_n, residuals } => ("alpha", cmd_alpha(&file, prec, direct_n, residuals)),
        Command::Classify { file, prec, max_deg, max_height, m_cap } => ("classify", cmd_classify(&file, prec, max_deg, max_height, m_cap)),
        Command::Scan { file, n_min, n_max, prec, prec_cap, filter, law, no_analyze } => {
            ("scan", cmd_scan(&file, n_min, n_max, prec, prec_cap, filter, law, no_analyze))
        }
        Command::Pisot { poly } => ("pisot", cmd_pisot(&poly)),
        Command::Minpoly { value, max_deg, max_height } => ("minpoly", cmd_minpoly(&value, max_deg, max_height)),
        Command::Torsion { polys, degree_cap } => ("torsion", cmd_torsion(&polys, degree_cap)),
        Command::Trace { poly, n } => ("trace", cmd_trace(&poly, &n)),
    }
}

fn finish(doc: Value, pretty: bool, code: i32) -> Outcome {
    let stdout = if pretty { render::table(&doc) } else { serde_json::to_string_pretty(&doc).unwrap() + "\n" };
    Outcome { code, stdout, report: doc }
}

/// Parse `args` (including the program name) and execute.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                return Outcome { code: 0, stdout: e.to_string(), report: Value::Null };
            }
            let doc = json!({ "error": { "kind": "usage", "message": e.to_string().trim_end(), "exit_code": 2 } });
            return finish(doc, false, 2);
        }
    };
    let start = Instant::now();
    let (name, res) = dispatch(cli.command);
    let mut doc = Map::new();
    doc.insert("command".into(), json!(name));
    doc.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    let code = match res {
        Ok(r) => {
            debug_assert_eq!(r.command, name);
            doc.insert("input".into(), r.input);
            doc.insert("config".into(), Value::Object(r.settings.values));
            doc.insert("defaults".into(), Value::Object(r.settings.defaults));
            doc.insert("sources".into(), Value::Object(r.settings.sources));
            doc.insert("result".into(), r.result);
            0
        }
        Err(e) => {
            let code = exit_code(&e);
            doc.insert("error".into(), json!({ "kind": e.kind(), "message": e.to_string(), "exit_code": code }));
            code
        }
    };
    if !cli.no_meta {
        let ts = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let ms = start.elapsed().as_millis().to_u64().unwrap_or(u64::MAX);
        doc.insert("meta".into(), json!({ "timestamp": ts, "elapsed_ms": ms }));
    }
    finish(Value::Object(doc), cli.pretty, code)
}
