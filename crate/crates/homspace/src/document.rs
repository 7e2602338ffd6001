//! The algebra document format: a line-oriented `key: value` text file
//! with bracketed numeric rows, one-based basis indices, and numbers
//! written as decimals or exact fractions `p/q`.
//!
//! ```text
//! # comments start with '#'
//! name: h3_soliton
//! dim: 3
//! brackets:
//!   [1, 2, 3, 1]        # [e_1, e_2] = 1 * e_3
//! metric: identity      # or one [..] row per line after `metric:`
//! isotropy: []          # optional, indices into the basis
//! h_part: []            # optional splitting p = h + n
//! n_part: [1, 2, 3]
//! declared_nilradical: [1, 2, 3]   # optional
//! tolerances: identity=1e-9 jacobi=1e-12
//! lambda: -3/2          # optional warped-product data
//! fiber_dim: 2
//! derivation:           # optional, dim x dim rows
//!   [1, 0, 0]
//!   [0, 1, 0]
//!   [0, 0, 2]
//! ```
//!
//! Bracketed rows bind to the most recent list-valued key (`brackets`,
//! `metric`, or `derivation`). Serialization is canonical: fixed key
//! order, brackets sorted, shortest-round-trip floats; the input digest
//! is the SHA-256 of that canonical form.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use sha2::{Digest, Sha256};

use crate::algebra::{LieAlgebra, StructureConstant, Subspace};
use crate::error::{Error, Result};
use crate::homogeneous::{HomogeneousSpace, Tolerances};

#[derive(Debug, Clone, PartialEq)]
pub enum MetricSpec {
    Identity,
    Rows(Vec<Vec<f64>>),
}

#[derive(Debug, Clone)]
pub struct AlgebraDocument {
    pub name: String,
    pub dim: usize,
    /// One-based (i, j, k, c) entries, exactly as written.
    pub brackets: Vec<(usize, usize, usize, f64)>,
    pub metric: MetricSpec,
    pub isotropy: Option<Vec<usize>>,
    pub h_part: Option<Vec<usize>>,
    pub n_part: Option<Vec<usize>>,
    pub declared_nilradical: Option<Vec<usize>>,
    pub tolerances: Option<BTreeMap<String, f64>>,
    pub lambda: Option<f64>,
    pub fiber_dim: Option<u32>,
    pub derivation: Option<Vec<Vec<f64>>>,
}

fn parse_number(token: &str, line: usize) -> Result<f64> {
    let token = token.trim();
    let bad = |t: &str| Error::Parse { line, message: format!("cannot parse number `{t}`") };
    if let Some((p, q)) = token.split_once('/') {
        let p: f64 = p.trim().parse().map_err(|_| bad(token))?;
        let q: f64 = q.trim().parse().map_err(|_| bad(token))?;
        if q == 0.0 {
            return Err(Error::Parse { line, message: format!("zero denominator in `{token}`") });
        }
        return Ok(p / q);
    }
    token.parse().map_err(|_| bad(token))
}

fn parse_row(body: &str, line: usize) -> Result<Vec<f64>> {
    let inner = body
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or(Error::Parse { line, message: "expected a bracketed row [..]".into() })?;
    let inner = inner.trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(|t| parse_number(t, line)).collect()
}

fn parse_index_list(body: &str, line: usize) -> Result<Vec<usize>> {
    parse_row(body, line)?
        .into_iter()
        .map(|v| {
            if v.fract() != 0.0 || v < 1.0 {
                Err(Error::Parse { line, message: format!("expected a one-based index, got {v}") })
            } else {
                Ok(v as usize)
            }
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq)]
enum ListKey {
    Brackets,
    Metric,
    Derivation,
}

impl AlgebraDocument {
    /// Parses a document; every failure names the offending line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut name = None;
        let mut dim: Option<usize> = None;
        let mut brackets: Vec<(usize, usize, usize, f64, usize)> = Vec::new();
        let mut metric_identity = false;
        let mut metric_rows: Vec<Vec<f64>> = Vec::new();
        let mut isotropy = None;
        let mut h_part = None;
        let mut n_part = None;
        let mut declared_nilradical = None;
        let mut tolerances: Option<BTreeMap<String, f64>> = None;
        let mut lambda = None;
        let mut fiber_dim = None;
        let mut derivation_rows: Vec<Vec<f64>> = Vec::new();
        let mut saw_derivation = false;
        let mut current_list: Option<ListKey> = None;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let content = content.trim();
            if content.is_empty() {
                continue;
            }
            if content.starts_with('[') {
                let key = current_list.ok_or(Error::Parse {
                    line,
                    message: "bracketed row with no preceding list key".into(),
                })?;
                match key {
                    ListKey::Brackets => {
                        let row = parse_row(content, line)?;
                        brackets.push(Self::bracket_entry(&row, line)?);
                    }
                    ListKey::Metric => metric_rows.push(parse_row(content, line)?),
                    ListKey::Derivation => derivation_rows.push(parse_row(content, line)?),
                }
                continue;
            }
            let (key, value) = content.split_once(':').ok_or(Error::Parse {
                line,
                message: format!("expected `key: value`, got `{content}`"),
            })?;
            let key = key.trim();
            let value = value.trim();
            current_list = None;
            match key {
                "name" => name = Some(value.to_string()),
                "dim" => {
                    dim = Some(value.parse().map_err(|_| Error::Parse {
                        line,
                        message: format!("bad dimension `{value}`"),
                    })?)
                }
                "brackets" => {
                    current_list = Some(ListKey::Brackets);
                    for chunk in split_rows(value) {
                        let row = parse_row(&chunk, line)?;
                        brackets.push(Self::bracket_entry(&row, line)?);
                    }
                }
                "metric" => {
                    if value == "identity" {
                        metric_identity = true;
                    } else {
                        current_list = Some(ListKey::Metric);
                        for chunk in split_rows(value) {
                            metric_rows.push(parse_row(&chunk, line)?);
                        }
                    }
                }
                "isotropy" => isotropy = Some(parse_index_list(value, line)?),
                "h_part" => h_part = Some(parse_index_list(value, line)?),
                "n_part" => n_part = Some(parse_index_list(value, line)?),
                "declared_nilradical" => {
                    declared_nilradical = Some(parse_index_list(value, line)?)
                }
                "tolerances" => {
                    let mut map = BTreeMap::new();
                    for pair in value.split_whitespace() {
                        let (k, v) = pair.split_once('=').ok_or(Error::Parse {
                            line,
                            message: format!("expected key=value in tolerances, got `{pair}`"),
                        })?;
                        map.insert(k.to_string(), parse_number(v, line)?);
                    }
                    tolerances = Some(map);
                }
                "lambda" => lambda = Some(parse_number(value, line)?),
                "fiber_dim" => {
                    fiber_dim = Some(value.parse().map_err(|_| Error::Parse {
                        line,
                        message: format!("bad fiber dimension `{value}`"),
                    })?)
                }
                "derivation" => {
                    saw_derivation = true;
                    current_list = Some(ListKey::Derivation);
                    for chunk in split_rows(value) {
                        derivation_rows.push(parse_row(&chunk, line)?);
                    }
                }
                other => {
                    return Err(Error::Parse {
                        line,
                        message: format!("unknown key `{other}`"),
                    })
                }
            }
        }

        let dim = dim.ok_or(Error::Parse { line: 0, message: "missing `dim`".into() })?;
        // Validate bracket entries with their line anchors.
        let mut seen = std::collections::BTreeSet::new();
        for &(i, j, k, _, line) in &brackets {
            if i >= j {
                return Err(Error::Parse {
                    line,
                    message: format!("bracket entries need i < j, got ({i}, {j})"),
                });
            }
            if j > dim || k > dim {
                return Err(Error::Parse {
                    line,
                    message: format!("bracket index out of range for dim {dim}: ({i}, {j}) -> {k}"),
                });
            }
            if !seen.insert((i, j, k)) {
                return Err(Error::Parse {
                    line,
                    message: format!("duplicate bracket entry ({i}, {j}) -> {k}"),
                });
            }
        }

        let metric = if metric_identity || metric_rows.is_empty() {
            MetricSpec::Identity
        } else {
            MetricSpec::Rows(metric_rows)
        };

        Ok(AlgebraDocument {
            name: name.unwrap_or_else(|| "unnamed".to_string()),
            dim,
            brackets: brackets.into_iter().map(|(i, j, k, c, _)| (i, j, k, c)).collect(),
            metric,
            isotropy,
            h_part,
            n_part,
            declared_nilradical,
            tolerances,
            lambda,
            fiber_dim,
            derivation: if saw_derivation { Some(derivation_rows) } else { None },
        })
    }

    fn bracket_entry(row: &[f64], line: usize) -> Result<(usize, usize, usize, f64, usize)> {
        if row.len() != 4 {
            return Err(Error::Parse {
                line,
                message: format!("bracket entries have 4 fields [i, j, k, c], got {}", row.len()),
            });
        }
        let as_index = |v: f64| -> Result<usize> {
            if v.fract() != 0.0 || v < 1.0 {
                Err(Error::Parse { line, message: format!("expected a one-based index, got {v}") })
            } else {
                Ok(v as usize)
            }
        };
        Ok((as_index(row[0])?, as_index(row[1])?, as_index(row[2])?, row[3], line))
    }

    /// Canonical serialization (sorted brackets, fixed key order).
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("name: {}\n", self.name));
        out.push_str(&format!("dim: {}\n", self.dim));
        let mut brackets = self.brackets.clone();
        brackets.sort_by_key(|e| (e.0, e.1, e.2));
        if !brackets.is_empty() {
            out.push_str("brackets:\n");
            for (i, j, k, c) in &brackets {
                out.push_str(&format!("  [{i}, {j}, {k}, {c}]\n"));
            }
        }
        match &self.metric {
            MetricSpec::Identity => out.push_str("metric: identity\n"),
            MetricSpec::Rows(rows) => {
                out.push_str("metric:\n");
                for row in rows {
                    out.push_str(&format!("  [{}]\n", join_numbers(row)));
                }
            }
        }
        if let Some(v) = &self.isotropy {
            out.push_str(&format!("isotropy: [{}]\n", join_indices(v)));
        }
        if let Some(v) = &self.h_part {
            out.push_str(&format!("h_part: [{}]\n", join_indices(v)));
        }
        if let Some(v) = &self.n_part {
            out.push_str(&format!("n_part: [{}]\n", join_indices(v)));
        }
        if let Some(v) = &self.declared_nilradical {
            out.push_str(&format!("declared_nilradical: [{}]\n", join_indices(v)));
        }
        if let Some(map) = &self.tolerances {
            let pairs: Vec<String> = map.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out.push_str(&format!("tolerances: {}\n", pairs.join(" ")));
        }
        if let Some(v) = self.lambda {
            out.push_str(&format!("lambda: {v}\n"));
        }
        if let Some(v) = self.fiber_dim {
            out.push_str(&format!("fiber_dim: {v}\n"));
        }
        if let Some(rows) = &self.derivation {
            out.push_str("derivation:\n");
            for row in rows {
                out.push_str(&format!("  [{}]\n", join_numbers(row)));
            }
        }
        out
    }

    /// SHA-256 of the canonical serialization, as lowercase hex.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.serialize().as_bytes());
        let out = hasher.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn complement_indices(&self) -> Vec<usize> {
        let isotropy = self.isotropy.clone().unwrap_or_default();
        (1..=self.dim).filter(|i| !isotropy.contains(i)).collect()
    }

    fn requested_tolerances(&self) -> Tolerances {
        let mut tol = Tolerances::default();
        if let Some(map) = &self.tolerances {
            if let Some(&v) = map.get("identity") {
                tol.identity = v;
            }
            if let Some(&v) = map.get("jacobi") {
                tol.jacobi = v;
            }
        }
        tol
    }

    pub fn flow_tolerance(&self) -> Option<f64> {
        self.tolerances.as_ref().and_then(|m| m.get("flow").copied())
    }

    /// Builds the Lie algebra (one-based entries become zero-based).
    pub fn to_algebra(&self) -> Result<LieAlgebra> {
        let constants = self
            .brackets
            .iter()
            .map(|&(i, j, k, c)| StructureConstant { i: i - 1, j: j - 1, k: k - 1, c })
            .collect();
        LieAlgebra::with_tolerance(self.dim, constants, self.requested_tolerances().jacobi)
    }

    /// Builds the full homogeneous space, validating every invariant.
    pub fn to_space(&self) -> Result<HomogeneousSpace> {
        let algebra = self.to_algebra()?;
        let isotropy_idx: Vec<usize> =
            self.isotropy.clone().unwrap_or_default().iter().map(|i| i - 1).collect();
        let complement_idx: Vec<usize> =
            self.complement_indices().iter().map(|i| i - 1).collect();
        let isotropy = Subspace::coordinate(self.dim, &isotropy_idx)?;
        let complement = Subspace::coordinate(self.dim, &complement_idx)?;
        let d = complement_idx.len();

        let metric = match &self.metric {
            MetricSpec::Identity => DMatrix::identity(d, d),
            MetricSpec::Rows(rows) => {
                if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("metric must be {d} rows of {d} entries"),
                    });
                }
                DMatrix::from_fn(d, d, |i, j| rows[i][j])
            }
        };

        let splitting = match (&self.h_part, &self.n_part) {
            (Some(h), Some(n)) => {
                let mut combined: Vec<usize> = h.iter().chain(n.iter()).cloned().collect();
                combined.sort_unstable();
                let mut expected = self.complement_indices();
                expected.sort_unstable();
                if combined != expected {
                    return Err(Error::Parse {
                        line: 0,
                        message: "h_part and n_part must partition the complement indices".into(),
                    });
                }
                let h_idx: Vec<usize> = h.iter().map(|i| i - 1).collect();
                let n_idx: Vec<usize> = n.iter().map(|i| i - 1).collect();
                Some((
                    Subspace::coordinate(self.dim, &h_idx)?,
                    Subspace::coordinate(self.dim, &n_idx)?,
                ))
            }
            (None, None) => match &self.declared_nilradical {
                None => None,
                Some(n) => {
                    // h is filled in by the audit path when needed.
                    let n_idx: Vec<usize> = n.iter().map(|i| i - 1).collect();
                    let h: Vec<usize> = complement_idx
                        .iter()
                        .cloned()
                        .filter(|i| !n_idx.contains(i))
                        .collect();
                    Some((
                        Subspace::coordinate(self.dim, &h)?,
                        Subspace::coordinate(self.dim, &n_idx)?,
                    ))
                }
            },
            _ => {
                return Err(Error::Parse {
                    line: 0,
                    message: "h_part and n_part must be given together".into(),
                })
            }
        };

        HomogeneousSpace::with_options(
            algebra,
            isotropy,
            complement,
            metric,
            splitting,
            self.requested_tolerances(),
        )
    }

    /// The derivation matrix, acting on the algebra basis (row-major rows).
    pub fn derivation_matrix(&self) -> Result<Option<DMatrix<f64>>> {
        match &self.derivation {
            None => Ok(None),
            Some(rows) => {
                let n = self.dim;
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("derivation must be {n} rows of {n} entries"),
                    });
                }
                Ok(Some(DMatrix::from_fn(n, n, |i, j| rows[i][j])))
            }
        }
    }
}

/// Splits an inline value like "[1,2,3,1] [1,3,4,1]" into row chunks.
fn split_rows(value: &str) -> Vec<String> {
    let mut rows = Vec::new();
    let mut depth = 0usize;
    let mut current = String::new();
    for ch in value.chars() {
        match ch {
            '[' => {
                depth += 1;
                current.push(ch);
            }
            ']' => {
                depth = depth.saturating_sub(1);
                current.push(ch);
                if depth == 0 {
                    rows.push(current.trim().to_string());
                    current.clear();
                }
            }
            _ => {
                if depth > 0 {
                    current.push(ch);
                }
            }
        }
    }
    rows
}

fn join_numbers(row: &[f64]) -> String {
    row.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

fn join_indices(row: &[usize]) -> String {
    row.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    const H3_DOC: &str = "name: h3\ndim: 3\nbrackets: [1, 2, 3, 1]\nmetric: identity\n";

    #[test]
    fn parses_the_four_line_h3_document() {
        let doc = AlgebraDocument::parse(H3_DOC).unwrap();
        assert_eq!(doc.dim, 3);
        assert_eq!(doc.brackets, vec![(1, 2, 3, 1.0)]);
        assert_eq!(doc.metric, MetricSpec::Identity);
        let space = doc.to_space().unwrap();
        assert_eq!(space.dim_p(), 3);
    }

    #[test]
    fn fractions_parse_to_nearest_double() {
        let doc = AlgebraDocument::parse("name: x\ndim: 2\nbrackets: [1, 2, 2, 1/3]\nlambda: -3/2\n")
            .unwrap();
        assert_eq!(doc.brackets[0].3, 1.0 / 3.0);
        assert_eq!(doc.lambda, Some(-1.5));
    }

    #[test]
    fn out_of_range_index_names_the_line() {
        let text = "name: bad\ndim: 3\nbrackets:\n  [1, 2, 4, 1]\n";
        match AlgebraDocument::parse(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_order_and_duplicates() {
        let text = "dim: 3\nbrackets: [2, 1, 3, 1]\n";
        assert!(matches!(AlgebraDocument::parse(text), Err(Error::Parse { .. })));
        let text = "dim: 3\nbrackets: [1, 2, 3, 1] [1, 2, 3, 0.5]\n";
        assert!(matches!(AlgebraDocument::parse(text), Err(Error::Parse { .. })));
    }

    #[test]
    fn roundtrip_is_identity_on_canonical_documents() {
        let text = "name: hyperbolic3\ndim: 3\nbrackets:\n  [1, 2, 2, 1]\n  [1, 3, 3, 1]\nmetric: identity\nh_part: [1]\nn_part: [2, 3]\nlambda: -2\nfiber_dim: 3\n";
        let doc = AlgebraDocument::parse(text).unwrap();
        let canonical = doc.serialize();
        let reparsed = AlgebraDocument::parse(&canonical).unwrap();
        assert_eq!(canonical, reparsed.serialize());
        assert_eq!(doc.digest(), reparsed.digest());
    }

    #[test]
    fn metric_rows_and_derivation_rows() {
        let text = "name: weighted\ndim: 3\nbrackets: [1, 2, 3, 1]\nmetric:\n  [1, 0, 0]\n  [0, 1, 0]\n  [0, 0, 4]\nderivation:\n  [1, 0, 0]\n  [0, 1, 0]\n  [0, 0, 2]\n";
        let doc = AlgebraDocument::parse(text).unwrap();
        let space = doc.to_space().unwrap();
        assert_eq!(space.metric()[(2, 2)], 4.0);
        let d = doc.derivation_matrix().unwrap().unwrap();
        assert_eq!(d[(2, 2)], 2.0);
    }

    #[test]
    fn digest_is_deterministic_and_input_sensitive() {
        let a = AlgebraDocument::parse(H3_DOC).unwrap();
        let b = AlgebraDocument::parse(H3_DOC).unwrap();
        assert_eq!(a.digest(), b.digest());
        let c =
            AlgebraDocument::parse("name: h3\ndim: 3\nbrackets: [1, 2, 3, 2]\nmetric: identity\n")
                .unwrap();
        assert_ne!(a.digest(), c.digest());
    }

    #[test]
    fn unknown_key_is_an_error() {
        assert!(matches!(
            AlgebraDocument::parse("dim: 2\nfrobnicate: yes\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
