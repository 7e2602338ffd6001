//! Built-in example documents.
//!
//! Parameterized entries use the call syntax `name(k)`, e.g.
//! `heisenberg(5)` or `h3_lnm_extension(3)`.

use crate::document::{AlgebraDocument, MetricSpec};
use crate::error::{Error, Result};

pub const CORPUS_SUMMARY: &[(&str, &str)] = &[
    ("abelian(n)", "flat R^n, every curvature quantity vanishes"),
    ("heisenberg(2k+1)", "Heisenberg algebra with the nilsoliton inner product"),
    ("hyperbolic(n)", "R acting on R^(n-1) by the identity: hyperbolic n-space, Ric = -(n-1) I"),
    ("h3_soliton", "heisenberg(3) with the identity metric; soliton constant -3/2"),
    ("h3_lnm_extension(m)", "h3 base with D = diag(1,1,2), lambda = -3/2, fiber dimension m"),
];

fn base_doc(name: &str, dim: usize) -> AlgebraDocument {
    AlgebraDocument {
        name: name.to_string(),
        dim,
        brackets: Vec::new(),
        metric: MetricSpec::Identity,
        isotropy: None,
        h_part: None,
        n_part: None,
        declared_nilradical: None,
        tolerances: None,
        lambda: None,
        fiber_dim: None,
        derivation: None,
    }
}

fn abelian(n: usize) -> Result<AlgebraDocument> {
    if !(1..=10).contains(&n) {
        return Err(Error::Precondition(format!("abelian(n) needs 1 <= n <= 10, got {n}")));
    }
    let mut doc = base_doc(&format!("abelian{n}"), n);
    doc.h_part = Some(Vec::new());
    doc.n_part = Some((1..=n).collect());
    Ok(doc)
}

fn heisenberg(n: usize) -> Result<AlgebraDocument> {
    if !(3..=9).contains(&n) || n.is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "heisenberg(n) needs odd 3 <= n <= 9, got {n}"
        )));
    }
    let k = (n - 1) / 2;
    let mut doc = base_doc(&format!("heisenberg{n}"), n);
    doc.brackets = (1..=k).map(|i| (2 * i - 1, 2 * i, n, 1.0)).collect();
    doc.h_part = Some(Vec::new());
    doc.n_part = Some((1..=n).collect());
    Ok(doc)
}

fn hyperbolic(n: usize) -> Result<AlgebraDocument> {
    if !(2..=10).contains(&n) {
        return Err(Error::Precondition(format!("hyperbolic(n) needs 2 <= n <= 10, got {n}")));
    }
    let mut doc = base_doc(&format!("hyperbolic{n}"), n);
    doc.brackets = (2..=n).map(|j| (1, j, j, 1.0)).collect();
    doc.h_part = Some(vec![1]);
    doc.n_part = Some((2..=n).collect());
    Ok(doc)
}

fn h3_soliton() -> Result<AlgebraDocument> {
    let mut doc = heisenberg(3)?;
    doc.name = "h3_soliton".to_string();
    Ok(doc)
}

fn h3_lnm_extension(m: usize) -> Result<AlgebraDocument> {
    if !(2..=1000).contains(&m) {
        return Err(Error::Precondition(format!(
            "h3_lnm_extension(m) needs 2 <= m <= 1000, got {m}"
        )));
    }
    let mut doc = h3_soliton()?;
    doc.name = format!("h3_lnm_extension{m}");
    doc.lambda = Some(-1.5);
    doc.fiber_dim = Some(m as u32);
    doc.derivation = Some(vec![
        vec![1.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0],
        vec![0.0, 0.0, 2.0],
    ]);
    Ok(doc)
}

/// Looks up a corpus entry, accepting `name` or `name(k)`.
pub fn corpus(request: &str) -> Result<AlgebraDocument> {
    let request = request.trim();
    let (name, arg) = match request.find('(') {
        None => (request, None),
        Some(pos) => {
            let inner = request[pos..]
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| unknown(request))?;
            let value: usize = inner.trim().parse().map_err(|_| unknown(request))?;
            (&request[..pos], Some(value))
        }
    };
    match (name, arg) {
        ("abelian", Some(n)) => abelian(n),
        ("heisenberg", Some(n)) => heisenberg(n),
        ("hyperbolic", Some(n)) => hyperbolic(n),
        ("h3_soliton", None) => h3_soliton(),
        ("h3_lnm_extension", Some(m)) => h3_lnm_extension(m),
        _ => Err(unknown(request)),
    }
}

fn unknown(request: &str) -> Error {
    let available = CORPUS_SUMMARY
        .iter()
        .map(|(name, _)| *name)
        .collect::<Vec<_>>()
        .join(", ");
    Error::UnknownCorpus { name: request.to_string(), available }
}

/// The list of concrete documents the verification suites run over.
pub fn verification_corpus() -> Vec<AlgebraDocument> {
    vec![
        corpus("abelian(3)").unwrap(),
        corpus("abelian(5)").unwrap(),
        corpus("heisenberg(3)").unwrap(),
        corpus("heisenberg(5)").unwrap(),
        corpus("heisenberg(7)").unwrap(),
        corpus("hyperbolic(2)").unwrap(),
        corpus("hyperbolic(3)").unwrap(),
        corpus("hyperbolic(4)").unwrap(),
        corpus("hyperbolic(5)").unwrap(),
        corpus("h3_soliton").unwrap(),
        corpus("h3_lnm_extension(2)").unwrap(),
        corpus("h3_lnm_extension(3)").unwrap(),
        corpus("h3_lnm_extension(5)").unwrap(),
    ]
}
