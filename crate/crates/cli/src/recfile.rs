//! Recursion files: `key = value` lines (or `;`-separated pairs) holding the
//! polynomial `P`, one seed `x<k>`, and optional command settings.

use std::collections::BTreeMap;
use std::path::Path;

use growthlab::recursion::RecursionSpec;
use growthlab::Error;

/// Settings any command may read from a recursion file.
const KNOWN: &[&str] = &["count", "prec", "direct_n", "residuals", "max_deg", "max_height", "m_cap", "torsion_degree_cap"];

#[derive(Debug, Clone)]
pub struct RecFile {
    pub spec: RecursionSpec,
    options: BTreeMap<String, String>,
}

fn is_seed_key(k: &str) -> bool {
    let Some(rest) = k.strip_prefix('x') else { return false };
    let rest = rest.trim_start_matches('_').trim_start_matches('{').trim_end_matches('}');
    !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit())
}

impl RecFile {
    pub fn parse(text: &str) -> Result<RecFile, Error> {
        let mut poly = None;
        let mut seed = None;
        let mut options = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            for item in line.split(';') {
                let item = item.trim();
                if item.is_empty() {
                    continue;
                }
                let (k, v) = item
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("line {}: expected key = value, got {item:?}", lineno + 1)))?;
                let (k, v) = (k.trim(), v.trim());
                if k == "P" || k == "P(x)" {
                    if poly.replace(v.to_string()).is_some() {
                        return Err(Error::Parse("P given twice".into()));
                    }
                } else if is_seed_key(k) {
                    if seed.replace(format!("{k} = {v}")).is_some() {
                        return Err(Error::Parse("more than one seed term".into()));
                    }
                } else if KNOWN.contains(&k) {
                    options.insert(k.to_string(), v.to_string());
                } else {
                    return Err(Error::Parse(format!("line {}: unknown key {k:?}", lineno + 1)));
                }
            }
        }
        let poly = poly.ok_or_else(|| Error::Parse("missing P".into()))?;
        let seed = seed.ok_or_else(|| Error::Parse("missing seed, e.g. x0 = 2".into()))?;
        let spec = RecursionSpec::parse(&format!("P = {poly}; {seed}"))?;
        Ok(RecFile { spec, options })
    }

    pub fn load(path: &Path) -> Result<RecFile, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        RecFile::parse(&text)
    }

    pub fn opt(&self, key: &str) -> Option<&str> {
        self.options.get(key).map(String::as_str)
    }

    /// Settings meant for another command are an input error, not silently dropped.
    pub fn reject_unused(&self, used: &[&str]) -> Result<(), Error> {
        match self.options.keys().find(|k| !used.contains(&k.as_str())) {
            Some(k) => Err(Error::InvalidInput(format!("setting {k:?} does not apply to this command"))),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_layouts() {
        let a = RecFile::parse("P = x^2 - x + 1; x0 = 2").unwrap();
        let b = RecFile::parse("# Sylvester\nP = x^2 - x + 1\nx0 = 2\ncount = 5\n").unwrap();
        assert_eq!(a.spec, b.spec);
        assert_eq!(b.opt("count"), Some("5"));
        assert!(RecFile::parse("P = x^2\nx0 = 2\nfoo = 1").is_err());
        assert!(RecFile::parse("P = x^2").is_err());
        assert_eq!(RecFile::parse("P(x) = x^2 - 2\nx_1 = 3").unwrap().spec.seed_index(), 1);
    }
}
