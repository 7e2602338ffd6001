//! Command-line interface: `homspace <command> [flags] [file|corpus:<name>]`.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on
//! input errors (bad documents, unknown corpus entries, violated
//! preconditions). Machine mode emits one JSON object with the same
//! fields the text report shows.

use std::collections::BTreeMap;

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;

use crate::corpus::{corpus, CORPUS_SUMMARY};
use crate::document::{AlgebraDocument, MetricSpec};
use crate::error::{Error, Result};
use crate::extension::{extend, extended_mean_curvature, lnm_alpha_squared};
use crate::homogeneous::HomogeneousSpace;
use crate::lnm::{audit, ensure_splitting, lnm_verify, AUDIT_TOL};
use crate::report::{CheckEntry, Report};
use crate::soliton::{check_fit_derivation, soliton_fit};
use crate::strata::{
    beta_estimate, ebeta_trace_check, stratum_properties_check, FlowParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    Text,
    Machine,
}

#[derive(Debug, Parser)]
#[command(name = "homspace", version, about = "Curvature workbench for homogeneous spaces given as metric Lie algebra data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub output: OutputMode,

    /// Tolerance for exact identities (default 1e-9, or HOMSPACE_TOLERANCE).
    #[arg(long, global = true)]
    pub tol_identity: Option<f64>,

    /// Tolerance for flow-derived quantities (default 1e-6).
    #[arg(long, global = true)]
    pub tol_flow: Option<f64>,

    /// Gradient flow step size.
    #[arg(long, global = true, default_value_t = 0.01)]
    pub step: f64,

    /// Gradient flow iteration budget.
    #[arg(long, global = true, default_value_t = 200_000)]
    pub max_iter: usize,

    /// Seed echoed into reports (reserved for randomized starts).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Overrides the document's lambda.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda: Option<f64>,

    /// Overrides the document's fiber dimension.
    #[arg(long, global = true)]
    pub fiber_dim: Option<u32>,

    /// Extension scale alpha (otherwise derived from lambda and fiber_dim).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a document: parsing, Jacobi identity, metric, invariants.
    Check { input: String },
    /// Ricci operator by both routes, mean curvature, scalar curvature.
    Curvature { input: String },
    /// Least-squares algebraic soliton fit.
    Soliton { input: String },
    /// Gradient-flow stratum label estimate plus its property checks.
    Stratify { input: String },
    /// Build the one-dimensional extension and verify it.
    Extend { input: String },
    /// Verify the warped-product Einstein conditions (1)-(3).
    #[command(name = "verify-lnm")]
    VerifyLnm { input: String },
    /// Full structural audit: every operator-level conclusion plus the
    /// soliton fit of the base.
    Audit { input: String },
    /// List corpus entries, or print one as a document.
    Corpus { name: Option<String> },
}

struct Settings {
    tol_identity: f64,
    tol_flow: f64,
    flow: FlowParams,
    lambda: Option<f64>,
    fiber_dim: Option<u32>,
    alpha: Option<f64>,
    seed: u64,
}

impl Settings {
    fn from_cli(cli: &Cli) -> Self {
        let env_tol = std::env::var("HOMSPACE_TOLERANCE")
            .ok()
            .and_then(|v| v.parse::<f64>().ok());
        let tol_identity = cli.tol_identity.or(env_tol).unwrap_or(1e-9);
        let tol_flow = cli.tol_flow.unwrap_or(1e-6);
        Settings {
            tol_identity,
            tol_flow,
            flow: FlowParams { step: cli.step, max_iter: cli.max_iter, tol: 1e-8 },
            lambda: cli.lambda,
            fiber_dim: cli.fiber_dim,
            alpha: cli.alpha,
            seed: cli.seed,
        }
    }

    fn echo_into(&self, report: &mut Report) {
        report.flag("tol-identity", self.tol_identity);
        report.flag("tol-flow", self.tol_flow);
        report.flag("step", self.flow.step);
        report.flag("max-iter", self.flow.max_iter);
        report.flag("seed", self.seed);
        if let Some(v) = self.lambda {
            report.flag("lambda", v);
        }
        if let Some(v) = self.fiber_dim {
            report.flag("fiber-dim", v);
        }
        if let Some(v) = self.alpha {
            report.flag("alpha", v);
        }
    }
}

/// Loads `corpus:<name>` or a file path.
fn load_document(input: &str) -> Result<AlgebraDocument> {
    if let Some(name) = input.strip_prefix("corpus:") {
        return corpus(name);
    }
    let text = std::fs::read_to_string(input)?;
    AlgebraDocument::parse(&text)
}

fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Data (derivation, lambda, fiber_dim) for the warped-product commands,
/// with CLI flags taking precedence over the document.
fn lnm_inputs(
    doc: &AlgebraDocument,
    settings: &Settings,
) -> Result<(DMatrix<f64>, f64, u32)> {
    let derivation = doc
        .derivation_matrix()?
        .ok_or_else(|| Error::Precondition("document carries no `derivation:` block".into()))?;
    let lambda = settings
        .lambda
        .or(doc.lambda)
        .ok_or_else(|| Error::Precondition("no lambda given (document or --lambda)".into()))?;
    let fiber_dim = settings
        .fiber_dim
        .or(doc.fiber_dim)
        .ok_or_else(|| Error::Precondition("no fiber dimension given (document or --fiber-dim)".into()))?;
    Ok((derivation, lambda, fiber_dim))
}

fn check_command(doc: &AlgebraDocument, settings: &Settings, report: &mut Report) -> Result<()> {
    let algebra = doc.to_algebra()?;
    report.push(CheckEntry::residual(
        "Jacobi identity defect",
        "jacobi-identity",
        algebra.jacobi_defect(),
        doc.tolerances
            .as_ref()
            .and_then(|m| m.get("jacobi").copied())
            .unwrap_or(1e-12),
    ));
    match doc.to_space() {
        Err(e) => {
            report.push(CheckEntry::residual(
                format!("space invariants ({e})"),
                "space-invariants",
                f64::INFINITY,
                settings.tol_identity,
            ));
        }
        Ok(space) => {
            let eigmin = crate::linalg::sym_eigenvalues(space.metric())[0];
            report.push(CheckEntry::positive(
                "metric positive definite (smallest eigenvalue)",
                "metric-spd",
                eigmin,
            ));
            report.push(CheckEntry::residual(
                "moment map trace identity",
                "moment-trace-identity",
                space.bracket_tensor_frame().moment_trace_residual(),
                settings.tol_identity,
            ));
            report.push(CheckEntry::residual(
                "two-route Ricci agreement",
                "two-route-ricci",
                space.ricci_route_mismatch()?,
                settings.tol_identity,
            ));
            if let Some(split) = space.splitting() {
                report.push(CheckEntry::residual(
                    "nilradical certificate (ideal residual)",
                    "splitting-certificate",
                    split.certificate.ideal_residual,
                    settings.tol_identity,
                ));
            }
            let ders =
                crate::derivations::derivations_preserving(space.algebra(), space.isotropy())?;
            let mut worst = 0.0_f64;
            for d in ders.iter() {
                worst = worst.max(space.ric_derivation_trace(d)?.abs());
            }
            report.push(CheckEntry::residual(
                "tr((Ric + S(ad H)) D_p) over the derivation basis",
                "ricci-derivation-trace",
                worst,
                settings.tol_identity,
            ));
            report.insert_data("dim", space.algebra().dim());
            report.insert_data("dim_p", space.dim_p());
            report.insert_data("derivation_dim", ders.dim());
        }
    }
    Ok(())
}

fn curvature_command(doc: &AlgebraDocument, settings: &Settings, report: &mut Report) -> Result<()> {
    let space = doc.to_space()?;
    let ric = space.ricci()?;
    report.push(CheckEntry::residual(
        "two-route Ricci agreement",
        "two-route-ricci",
        space.ricci_route_mismatch()?,
        settings.tol_identity,
    ));
    report.push(CheckEntry::residual(
        "moment map trace identity",
        "moment-trace-identity",
        space.bracket_tensor_frame().moment_trace_residual(),
        settings.tol_identity,
    ));
    report.insert_data("ricci", matrix_rows(&ric));
    report.insert_data("ricci_eigenvalues", crate::linalg::sym_eigenvalues(&space.ricci_frame()?));
    report.insert_data("scalar_curvature", space.scalar_curvature()?);
    report.insert_data("mean_curvature", space.mean_curvature().iter().cloned().collect::<Vec<f64>>());
    report.insert_data("moment_term", matrix_rows(&space.moment_term()?));
    Ok(())
}

fn soliton_command(doc: &AlgebraDocument, settings: &Settings, report: &mut Report) -> Result<()> {
    let space = doc.to_space()?;
    let fit = soliton_fit(&space)?;
    report.push(CheckEntry::residual(
        "soliton fit residual",
        "soliton-fit-residual",
        fit.residual,
        settings.tol_identity,
    ));
    report.push(CheckEntry::residual(
        "first-order optimality of the fit",
        "soliton-first-order-optimality",
        fit.optimality_residual,
        1e-10,
    ));
    check_fit_derivation(&space, &fit)?;
    report.push(CheckEntry::residual(
        "fitted derivation lies in the preserving span",
        "soliton-derivation-span",
        0.0,
        settings.tol_identity,
    ));
    report.insert_data("soliton_constant", fit.c);
    report.insert_data("derivation_p", matrix_rows(&fit.d_p(&space)));
    report.insert_data("identity_degenerate", fit.identity_degenerate);
    report.insert_data("normality_residual", fit.normality_residual);
    report.insert_data("symmetric_fit_residual", fit.symmetric_fit_residual);
    Ok(())
}

fn stratify_command(doc: &AlgebraDocument, settings: &Settings, report: &mut Report) -> Result<()> {
    let space = ensure_splitting(&doc.to_space()?)?;
    let h_dim = space.dim_h().unwrap_or(0);
    let d = space.dim_p();
    let n_dim = d - h_dim;
    // Nilradical bracket in the adapted frame.
    let t = space.bracket_tensor_frame();
    let mut mu_n = crate::bracket::BracketTensor::zero(n_dim);
    for a in 0..n_dim {
        for b in (a + 1)..n_dim {
            for k in 0..n_dim {
                let c = t.get(h_dim + a, h_dim + b, h_dim + k);
                if c != 0.0 {
                    mu_n.add(a, b, k, c);
                }
            }
        }
    }

    let flow_tol = doc.flow_tolerance().unwrap_or(settings.flow.tol);
    let params = FlowParams { tol: flow_tol, ..settings.flow };
    let label = beta_estimate(&mu_n, &params)?;
    report.push(CheckEntry::residual(
        "flow converged (final gradient norm)",
        "flow-convergence",
        label.final_gradient_norm,
        params.tol.max(settings.tol_flow),
    ));
    report.insert_data("flow_iterations", label.flow_iterations);

    match label.spectrum() {
        None => report.insert_data("beta", "infinity (abelian)"),
        Some(spec) => report.insert_data("beta_spectrum", spec),
    }

    // Validate the label against the input and check the five properties
    // on the flow endpoint (where the label's matrix lives).
    label.validate_against(&mu_n)?;
    report.push(CheckEntry::residual(
        "stratum label invariants",
        "stratum-label-invariants",
        0.0,
        settings.tol_identity,
    ));
    let endpoint = label.final_bracket().cloned().unwrap_or_else(|| mu_n.clone());
    let ders = crate::derivations::derivation_algebra_of_tensor(&endpoint);
    let props = stratum_properties_check(&endpoint, &label, &ders)?;
    report.push(CheckEntry::lower_bound(
        "tr(T [D, D^t]) over Der(n)",
        "stratum-property-commutator",
        props.commutator_trace_min,
        1e-8,
    ));
    report.push(CheckEntry::positive(
        "T positive definite (smallest eigenvalue)",
        "stratum-property-positive",
        props.core_eigmin,
    ));
    report.push(CheckEntry::lower_bound(
        "|m(mu)| - |beta|",
        "stratum-property-norm-bound",
        props.norm_slack.unwrap_or(0.0),
        1e-8,
    ));
    report.push(CheckEntry::residual(
        "tr(T D) = tr D over Der(n)",
        "stratum-property-trace",
        props.trace_mismatch_max,
        1e-8,
    ));
    report.push(CheckEntry::lower_bound(
        "<pi(T) mu, mu>",
        "stratum-property-pairing",
        props.pi_pairing,
        1e-8,
    ));

    if space.dim_h().is_some() {
        let check = ebeta_trace_check(&space, &label);
        if let Ok(check) = check {
            report.push(CheckEntry::lower_bound(
                "tr((Ric + S(ad H)) E_beta)",
                "stratum-trace-inequality",
                check.value,
                settings.tol_identity,
            ));
            report.insert_data("lambda1_norm", check.lambda1_norm);
        }
    }
    Ok(())
}

fn extend_command(doc: &AlgebraDocument, settings: &Settings, report: &mut Report) -> Result<()> {
    let space = doc.to_space()?;
    let derivation = doc
        .derivation_matrix()?
        .ok_or_else(|| Error::Precondition("document carries no `derivation:` block".into()))?;
    let alpha = match settings.alpha {
        Some(a) => a,
        None => {
            let (d, lambda, fiber) = lnm_inputs(doc, settings)?;
            let d_p = space.induced_operator_frame(&d)?;
            let s_trace = 0.5 * (&d_p + d_p.transpose()).trace();
            lnm_alpha_squared(s_trace, lambda, fiber as f64)?.sqrt()
        }
    };
    let ext = extend(&space, &derivation, alpha)?;
    report.push(CheckEntry::residual(
        "extension passes all space invariants",
        "extension-invariants",
        0.0,
        settings.tol_identity,
    ));
    report.push(CheckEntry::residual(
        "two-route Ricci agreement on the extension",
        "extension-two-route-ricci",
        ext.ricci_route_mismatch()?,
        settings.tol_identity,
    ));
    let formula = extended_mean_curvature(&space, &derivation, alpha)?;
    let engine = ext.mean_curvature();
    report.push(CheckEntry::residual(
        "mean curvature formula matches the engine",
        "extension-mean-curvature",
        (formula - engine).norm(),
        1e-12,
    ));
    report.insert_data("alpha", alpha);
    report.insert_data("extended_ricci", matrix_rows(&ext.ricci()?));
    report.insert_data("extension_document", extension_document(doc, &ext));
    Ok(())
}

/// Serializes a constructed extension back into document form.
fn extension_document(doc: &AlgebraDocument, ext: &HomogeneousSpace) -> String {
    let algebra = ext.algebra();
    let brackets = algebra
        .constants()
        .iter()
        .map(|sc| (sc.i + 1, sc.j + 1, sc.k + 1, sc.c))
        .collect();
    let metric = MetricSpec::Rows(matrix_rows(ext.metric()));
    let out = AlgebraDocument {
        name: format!("{}_extended", doc.name),
        dim: algebra.dim(),
        brackets,
        metric,
        isotropy: doc.isotropy.clone(),
        h_part: None,
        n_part: None,
        declared_nilradical: None,
        tolerances: doc.tolerances.clone(),
        lambda: None,
        fiber_dim: None,
        derivation: None,
    };
    out.serialize()
}

fn verify_lnm_entries(
    report: &mut Report,
    lnm: &crate::lnm::LnmReport,
    settings: &Settings,
) {
    report.push(CheckEntry::residual(
        "condition (1): Ric = lambda I + S(D_p) + alpha^2 [S, A]",
        "lnm-condition-1",
        lnm.cond1_residual,
        settings.tol_identity,
    ));
    report.push(CheckEntry::residual(
        "condition (2): div S(D_p) = 0",
        "lnm-condition-2",
        lnm.cond2_residual,
        settings.tol_identity,
    ));
    report.push(CheckEntry::residual(
        "condition (3): tr S(D_p)^2 = -lambda tr S(D_p)",
        "lnm-condition-3",
        lnm.cond3_residual,
        settings.tol_identity,
    ));
    report.push(CheckEntry::residual(
        "extension Ricci matches the predicted operator",
        "lnm-extension-ricci",
        lnm.extension_ricci_mismatch,
        settings.tol_identity,
    ));
    report.push(CheckEntry::lower_bound(
        "tr F^2 + lambda tr F <= 0",
        "lnm-trace-inequality-f",
        -lnm.ineq_f_value,
        settings.tol_identity,
    ));
    // Equality case must coincide with D(H) = 0.
    let dh_entry = if lnm.ineq_f_value > -1e-8 {
        CheckEntry::residual("equality case has D(H) = 0", "lnm-equality-dh", lnm.dh_norm, 1e-8)
    } else {
        CheckEntry::residual("strict case (no D(H) constraint)", "lnm-equality-dh", 0.0, 1e-8)
    };
    report.push(dh_entry);
    report.insert_data("alpha_squared", lnm.alpha_squared);
    report.insert_data("ineq_f_value", lnm.ineq_f_value);
    report.insert_data("dh_norm", lnm.dh_norm);
}

fn verify_lnm_command(
    doc: &AlgebraDocument,
    settings: &Settings,
    report: &mut Report,
) -> Result<()> {
    let space = doc.to_space()?;
    let (derivation, lambda, fiber_dim) = lnm_inputs(doc, settings)?;
    let lnm = lnm_verify(&space, &derivation, lambda, fiber_dim)?;
    report.flag("lambda", lambda);
    report.flag("fiber-dim", fiber_dim);
    verify_lnm_entries(report, &lnm, settings);
    Ok(())
}

fn audit_command(doc: &AlgebraDocument, settings: &Settings, report: &mut Report) -> Result<()> {
    let space = doc.to_space()?;
    let (derivation, lambda, fiber_dim) = lnm_inputs(doc, settings)?;
    report.flag("lambda", lambda);
    report.flag("fiber-dim", fiber_dim);
    // Run the verification stage first so a refusal still reports the
    // failing conditions rather than a bare error.
    let lnm = lnm_verify(&space, &derivation, lambda, fiber_dim)?;
    verify_lnm_entries(report, &lnm, settings);
    if lnm.worst_condition_residual() > AUDIT_TOL || lnm.extension_ricci_mismatch > AUDIT_TOL {
        report.insert_data("audit", "refused: warped-product Einstein conditions fail");
        return Ok(());
    }
    let out = audit(&space, &derivation, lambda, fiber_dim, AUDIT_TOL)?;
    for entry in &out.entries {
        report.push(CheckEntry {
            name: entry.name.to_string(),
            anchor: "audit-structure",
            value: entry.value,
            tolerance: entry.tolerance,
            pass: entry.pass,
        });
    }
    report.push(CheckEntry::residual(
        "soliton fit at c = lambda",
        "audit-soliton-constant",
        out.constrained_fit_residual,
        AUDIT_TOL,
    ));
    report.insert_data("soliton_constant", out.soliton.c);
    report.insert_data("soliton_residual", out.soliton.residual);
    if let Some(spec) = &out.label_spectrum {
        report.insert_data("beta_spectrum", spec.clone());
    }
    Ok(())
}

fn corpus_command(name: &Option<String>, report: &mut Report) -> Result<()> {
    match name {
        None => {
            let listing: Vec<BTreeMap<&str, &str>> = CORPUS_SUMMARY
                .iter()
                .map(|(n, d)| BTreeMap::from([("name", *n), ("describes", *d)]))
                .collect();
            report.insert_data("corpus", listing);
        }
        Some(n) => {
            let doc = corpus(n)?;
            report.input_digest = doc.digest();
            report.insert_data("document", doc.serialize());
        }
    }
    Ok(())
}

/// Runs a parsed command line; returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let settings = Settings::from_cli(cli);
    let (command_name, input) = match &cli.command {
        Command::Check { input } => ("check", Some(input.clone())),
        Command::Curvature { input } => ("curvature", Some(input.clone())),
        Command::Soliton { input } => ("soliton", Some(input.clone())),
        Command::Stratify { input } => ("stratify", Some(input.clone())),
        Command::Extend { input } => ("extend", Some(input.clone())),
        Command::VerifyLnm { input } => ("verify-lnm", Some(input.clone())),
        Command::Audit { input } => ("audit", Some(input.clone())),
        Command::Corpus { name } => ("corpus", name.clone()),
    };

    let doc = match &input {
        None => None,
        Some(input) if matches!(cli.command, Command::Corpus { .. }) => {
            // corpus subcommand takes a bare name, resolved later.
            let _ = input;
            None
        }
        Some(input) => match load_document(input) {
            Ok(doc) => Some(doc),
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        },
    };

    let mut report = Report::new(
        command_name,
        input.as_deref().unwrap_or("-"),
        doc.as_ref().map(|d| d.digest()).unwrap_or_default().as_str(),
    );
    settings.echo_into(&mut report);

    let outcome = match (&cli.command, &doc) {
        (Command::Corpus { name }, _) => corpus_command(name, &mut report),
        (Command::Check { .. }, Some(doc)) => check_command(doc, &settings, &mut report),
        (Command::Curvature { .. }, Some(doc)) => curvature_command(doc, &settings, &mut report),
        (Command::Soliton { .. }, Some(doc)) => soliton_command(doc, &settings, &mut report),
        (Command::Stratify { .. }, Some(doc)) => stratify_command(doc, &settings, &mut report),
        (Command::Extend { .. }, Some(doc)) => extend_command(doc, &settings, &mut report),
        (Command::VerifyLnm { .. }, Some(doc)) => {
            verify_lnm_command(doc, &settings, &mut report)
        }
        (Command::Audit { .. }, Some(doc)) => audit_command(doc, &settings, &mut report),
        _ => Err(Error::Precondition("missing input".into())),
    };

    match outcome {
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
        Ok(()) => {
            match cli.output {
                OutputMode::Text => print!("{}", report.render_text()),
                OutputMode::Machine => println!("{}", report.render_machine()),
            }
            if report.verdict {
                0
            } else {
                1
            }
        }
    }
}

/// Convenience used by tests: run from raw arguments, capturing the code.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            eprintln!("{e}");
            2
        }
    }
}
