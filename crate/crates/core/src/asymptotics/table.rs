//! Exact Maclaurin coefficients of the leading-order joint probability,
//! shipped as a checksummed text asset.
//!
//! Format: `#` comment lines, then `d,r,numerator,denominator` records. A
//! `# sha256: <hex>` header line carries the digest of the record lines
//! joined by `\n` with a trailing newline.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Environment variable naming a directory that overrides the embedded asset.
pub const DATA_DIR_ENV: &str = "QEDGE_DATA_DIR";

/// File name of the asset inside the data directory.
pub const TABLE_FILE: &str = "maclaurin_coefficients.csv";

const EMBEDDED: &str = include_str!("../../data/maclaurin_coefficients.csv");

/// Coefficients `a_1 ..= a_R` of `(N/2) P(x) = sum_r a_r x^(2r)` for one `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalCoefficientTable {
    d: u32,
    coeffs: Vec<BigRational>,
}

impl RationalCoefficientTable {
    pub fn d(&self) -> u32 {
        self.d
    }

    /// `a_1 ..= a_R`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// `a_r`, 1-based.
    pub fn a(&self, r: usize) -> Option<&BigRational> {
        r.checked_sub(1).and_then(|i| self.coeffs.get(i))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// The series in `t = x^2`: `[0, a_1, a_2, ...]`.
    pub fn series_in_t(&self) -> Vec<BigRational> {
        std::iter::once(BigRational::zero()).chain(self.coeffs.iter().cloned()).collect()
    }

    /// The primitive divided by `x`: `Q(x)/x = sum_r a_r / (2r + 1) t^r`.
    pub fn primitive_series_in_t(&self) -> Vec<BigRational> {
        std::iter::once(BigRational::zero())
            .chain(
                self.coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, a)| a / BigRational::from_integer(BigInt::from(2 * i + 3))),
            )
            .collect()
    }
}

/// Every table found in one asset.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    tables: BTreeMap<u32, RationalCoefficientTable>,
    source: String,
    sha256: String,
}

impl CoefficientSet {
    pub fn get(&self, d: u32) -> Result<&RationalCoefficientTable> {
        self.tables.get(&d).ok_or(Error::NotTabulated(d))
    }

    pub fn dimensions(&self) -> Vec<u32> {
        self.tables.keys().copied().collect()
    }

    /// Where the asset came from (`embedded` or a file path).
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn sha256(&self) -> &str {
        &self.sha256
    }
}

fn parse_rational(s: &str, line: usize) -> Result<BigInt> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|e| Error::DataAsset(format!("line {line}: bad integer {s:?}: {e}")))
}

/// Parses and checks an asset.
pub fn parse_asset(text: &str, source: &str) -> Result<CoefficientSet> {
    let mut declared = None;
    let mut records = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(hex) = comment.trim().strip_prefix("sha256:") {
                declared = Some(hex.trim().to_ascii_lowercase());
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        records.push((i + 1, line));
    }
    let mut hasher = Sha256::new();
    for (_, line) in &records {
        hasher.update(line.as_bytes());
        hasher.update(b"\n");
    }
    let digest: String = hasher.finalize().iter().map(|b| format!("{b:02x}")).collect();
    match declared {
        None => return Err(Error::DataAsset(format!("{source}: missing sha256 header"))),
        Some(h) if h != digest => {
            return Err(Error::DataAsset(format!("{source}: checksum mismatch (header {h}, content {digest})")))
        }
        Some(_) => {}
    }

    let mut rows: BTreeMap<u32, Vec<(usize, BigRational)>> = BTreeMap::new();
    for (line_no, line) in records {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::DataAsset(format!("line {line_no}: expected 4 fields, got {}", fields.len())));
        }
        let d: u32 = fields[0]
            .trim()
            .parse()
            .map_err(|_| Error::DataAsset(format!("line {line_no}: bad d {:?}", fields[0])))?;
        let r: usize = fields[1]
            .trim()
            .parse()
            .map_err(|_| Error::DataAsset(format!("line {line_no}: bad r {:?}", fields[1])))?;
        let num = parse_rational(fields[2], line_no)?;
        let den = parse_rational(fields[3], line_no)?;
        if den.is_zero() {
            return Err(Error::DataAsset(format!("line {line_no}: zero denominator")));
        }
        rows.entry(d).or_default().push((r, BigRational::new(num, den)));
    }

    let mut tables = BTreeMap::new();
    for (d, mut entries) in rows {
        entries.sort_by_key(|(r, _)| *r);
        for (i, (r, _)) in entries.iter().enumerate() {
            if *r != i + 1 {
                return Err(Error::DataAsset(format!("d = {d}: coefficient indices are not 1..R")));
            }
        }
        let coeffs: Vec<BigRational> = entries.into_iter().map(|(_, c)| c).collect();
        if d < 2 || coeffs[0] != BigRational::from_integer(BigInt::from(2 * (d - 1))) {
            return Err(Error::DataAsset(format!("d = {d}: leading coefficient is not 2(d-1)")));
        }
        tables.insert(d, RationalCoefficientTable { d, coeffs });
    }
    Ok(CoefficientSet {
        tables,
        source: source.to_string(),
        sha256: digest,
    })
}

/// The asset compiled into the library.
pub fn embedded_coefficients() -> &'static CoefficientSet {
    static SET: OnceLock<CoefficientSet> = OnceLock::new();
    SET.get_or_init(|| parse_asset(EMBEDDED, "embedded").expect("embedded coefficient asset is valid"))
}

/// Path of the override asset, if `QEDGE_DATA_DIR` is set.
pub fn override_path() -> Option<PathBuf> {
    std::env::var_os(DATA_DIR_ENV).map(|dir| Path::new(&dir).join(TABLE_FILE))
}

/// Reads an asset from a directory.
pub fn load_from_dir(dir: &Path) -> Result<CoefficientSet> {
    let path = dir.join(TABLE_FILE);
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::DataAsset(format!("{}: {e}", path.display())))?;
    parse_asset(&text, &path.display().to_string())
}

/// The asset in effect: the `QEDGE_DATA_DIR` override when set, else the
/// embedded copy.
pub fn load_coefficients() -> Result<CoefficientSet> {
    match std::env::var_os(DATA_DIR_ENV) {
        Some(dir) => load_from_dir(Path::new(&dir)),
        None => Ok(embedded_coefficients().clone()),
    }
}

/// Exact table for `d` from the asset in effect.
pub fn coefficient_table(d: u32) -> Result<RationalCoefficientTable> {
    load_coefficients()?.get(d).cloned()
}
