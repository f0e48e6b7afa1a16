//! Command-line surface.
//!
//! Commands load a JSON document, run one operation and print a report.
//! Exit codes: 0 for a true verdict or successful computation, 1 for a
//! false verdict (with a witness in the report), 2 for input errors.
//! `--tol` sets the quantum tolerance, `--format` selects text or JSON
//! output, and the `EA_SEED` environment variable fixes the
//! diagonalization seed (default 42).

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{is_effect, AlgebraError};
use crate::doc::{DocError, Document};
use crate::infocomplete::{self, InfoError};
use crate::observables::{
    classical_iso, coexistence_witness, find_postprocessing, InfeasibleReason, ObservableError,
    Postprocessing,
};
use crate::quantum::{self, QuantumError, StrongifyOutcome};
use crate::report::{
    partition_json, payload_json, rationals_json, scalar_json, Report, ReportFormat,
};
use crate::subalgebra::{Coefficients, SubalgebraError};
use crate::{DEFAULT_SEED, DEFAULT_TOLERANCE};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Doc(#[from] DocError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Subalgebra(#[from] SubalgebraError),
    #[error(transparent)]
    Observable(#[from] ObservableError),
    #[error(transparent)]
    Info(#[from] InfoError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error("{0}")]
    Input(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "cea",
    version,
    about = "Convex effect algebras: exact classical and numerical quantum toolkit"
)]
pub struct Cli {
    /// Tolerance for quantum-side comparisons.
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    pub tol: f64,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pointwise effect predicates.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Convex subeffect algebras.
    #[command(subcommand)]
    Csea(CseaCmd),
    /// Observables and channels.
    #[command(subcommand)]
    Obs(ObsCmd),
    /// Informational completeness of random variables.
    #[command(subcommand)]
    Ic(IcCmd),
    /// Quantum effect families.
    #[command(subcommand)]
    Q(QCmd),
}

#[derive(Debug, Subcommand)]
pub enum CheckCmd {
    /// Is the named payload an effect (0 <= a <= u)?
    Effect { doc: PathBuf, name: String },
    /// Is the named effect sharp?
    Sharp { doc: PathBuf, name: String },
    /// Is the named effect strong?
    Strong { doc: PathBuf, name: String },
}

#[derive(Debug, Subcommand)]
pub enum CseaCmd {
    /// Build the named subalgebra from its generator list.
    Build { doc: PathBuf, name: String },
    /// Does the effect lie in the subalgebra?
    Contains {
        doc: PathBuf,
        subalgebra: String,
        effect: String,
    },
    /// Largest common subalgebra.
    Meet {
        doc: PathBuf,
        left: String,
        right: String,
    },
    /// Smallest subalgebra containing both.
    Join {
        doc: PathBuf,
        left: String,
        right: String,
    },
    /// Do the two subalgebras intersect only in multiples of the unit?
    Separated {
        doc: PathBuf,
        left: String,
        right: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum ObsCmd {
    /// Do the named outcome effects sum to the unit?
    Validate { doc: PathBuf, name: String },
    /// Outcome distribution of an observable in a state.
    Dist {
        doc: PathBuf,
        observable: String,
        state: String,
    },
    /// Find the channel writing the target as a postprocessing of the source.
    Postprocess {
        doc: PathBuf,
        source: String,
        target: String,
    },
    /// Joint-measurability witness for two members of a strong span.
    Coexist {
        doc: PathBuf,
        span: String,
        left: String,
        right: String,
    },
    /// Coordinates of span members in the simplex picture.
    Iso {
        doc: PathBuf,
        span: String,
        member: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum IcCmd {
    /// Is the family of random variables informationally complete?
    Decide {
        doc: PathBuf,
        names: Vec<String>,
    },
    /// Is the joint refinement of the family all singletons?
    Complementary {
        doc: PathBuf,
        names: Vec<String>,
    },
    /// Is every point a singleton of some member's partition?
    StrongComplementary {
        doc: PathBuf,
        names: Vec<String>,
    },
    /// Exhaustive implication sweep over all partitions of {1..n}.
    Sweep { n: usize },
}

#[derive(Debug, Subcommand)]
pub enum QCmd {
    /// Eigenvalues of a quantum effect, ascending.
    Spectrum { doc: PathBuf, name: String },
    /// Strong decomposition of a family of quantum effects.
    Decompose {
        doc: PathBuf,
        names: Vec<String>,
    },
    /// Three-outcome noncommutative qubit observable from a pair.
    Example6 {
        doc: PathBuf,
        alpha: String,
        beta: String,
    },
    /// Dimension-five noncommutative strong family from three qubit blocks.
    Example7 {
        doc: PathBuf,
        b: String,
        c: String,
        d: String,
    },
    /// Rewrite a commuting family as strong generators.
    Strongify {
        doc: PathBuf,
        names: Vec<String>,
    },
}

/// Rendered output plus process exit code.
#[derive(Debug, Clone)]
pub struct CliOutcome {
    pub output: String,
    pub exit_code: i32,
}

/// Parses arguments and runs the selected command.
pub fn run<I, T>(args: I) -> CliOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            let code = if e.exit_code() == 0 { 0 } else { 2 };
            return CliOutcome {
                output: e.to_string(),
                exit_code: code,
            };
        }
    };
    let format = match cli.format {
        OutputFormat::Text => ReportFormat::Text,
        OutputFormat::Json => ReportFormat::Json,
    };
    let seed = std::env::var("EA_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED);
    match dispatch(cli.command, cli.tol, seed) {
        Ok(report) => CliOutcome {
            output: report.render(format),
            exit_code: report.exit_code,
        },
        Err(err) => {
            let output = match format {
                ReportFormat::Text => format!("error: {err}"),
                ReportFormat::Json => json!({
                    "report_version": crate::report::REPORT_VERSION,
                    "error": err.to_string(),
                    "exit": 2,
                })
                .to_string(),
            };
            CliOutcome {
                output,
                exit_code: 2,
            }
        }
    }
}

fn load(path: &Path, tol: f64) -> Result<Document, CliError> {
    Ok(Document::load(path, tol)?)
}

fn coeffs_json(c: &Coefficients) -> Value {
    match c {
        Coefficients::Rational(v) => rationals_json(v),
        Coefficients::Real(v) => json!(v),
    }
}

fn dispatch(command: Command, tol: f64, seed: u64) -> Result<Report, CliError> {
    match command {
        Command::Check(cmd) => run_check(cmd, tol),
        Command::Csea(cmd) => run_csea(cmd, tol),
        Command::Obs(cmd) => run_obs(cmd, tol),
        Command::Ic(cmd) => run_ic(cmd),
        Command::Q(cmd) => run_q(cmd, tol, seed),
    }
}

fn run_check(cmd: CheckCmd, tol: f64) -> Result<Report, CliError> {
    match cmd {
        CheckCmd::Effect { doc, name } => {
            let document = load(&doc, tol)?;
            let payload = document.effect_payload(&name)?;
            let verdict = is_effect(&document.base(), payload, tol)?;
            let command = format!("check effect {} {name}", doc.display());
            Ok(Report::verdict(command, verdict, Value::Null)
                .with_details(json!({"name": name, "payload": payload_json(payload)})))
        }
        CheckCmd::Sharp { doc, name } => {
            let document = load(&doc, tol)?;
            let effect = document.effect(&name, tol)?;
            let command = format!("check sharp {} {name}", doc.display());
            Ok(Report::verdict(command, effect.is_sharp(tol), Value::Null)
                .with_details(json!({"name": name})))
        }
        CheckCmd::Strong { doc, name } => {
            let document = load(&doc, tol)?;
            let effect = document.effect(&name, tol)?;
            let command = format!("check strong {} {name}", doc.display());
            Ok(Report::verdict(command, effect.is_strong(tol), Value::Null)
                .with_details(json!({"name": name})))
        }
    }
}

fn subalgebra_summary(f: &crate::subalgebra::Subalgebra) -> Value {
    json!({
        "dim": f.dim(),
        "unit_coefficients": coeffs_json(f.unit_coefficients()),
        "generators": f
            .generators()
            .iter()
            .map(|g| payload_json(g.payload()))
            .collect::<Vec<_>>(),
    })
}

fn run_csea(cmd: CseaCmd, tol: f64) -> Result<Report, CliError> {
    match cmd {
        CseaCmd::Build { doc, name } => {
            let document = load(&doc, tol)?;
            let f = document.subalgebra(&name, tol)?;
            let command = format!("csea build {} {name}", doc.display());
            Ok(Report::success(command, subalgebra_summary(&f)))
        }
        CseaCmd::Contains {
            doc,
            subalgebra,
            effect,
        } => {
            let document = load(&doc, tol)?;
            let f = document.subalgebra(&subalgebra, tol)?;
            let a = document.effect(&effect, tol)?;
            let verdict = f.contains(&a, tol)?;
            let witness = match f.coordinates(&a, tol)? {
                Some(c) => json!({"coordinates": coeffs_json(&c)}),
                None => Value::Null,
            };
            let command = format!("csea contains {} {subalgebra} {effect}", doc.display());
            Ok(Report::verdict(command, verdict, witness))
        }
        CseaCmd::Meet { doc, left, right } => {
            let document = load(&doc, tol)?;
            let f = document.subalgebra(&left, tol)?;
            let g = document.subalgebra(&right, tol)?;
            let meet = f.meet(&g, tol)?;
            let command = format!("csea meet {} {left} {right}", doc.display());
            Ok(Report::success(command, subalgebra_summary(&meet)))
        }
        CseaCmd::Join { doc, left, right } => {
            let document = load(&doc, tol)?;
            let f = document.subalgebra(&left, tol)?;
            let g = document.subalgebra(&right, tol)?;
            let join = f.join(&g, tol)?;
            let command = format!("csea join {} {left} {right}", doc.display());
            Ok(Report::success(command, subalgebra_summary(&join)))
        }
        CseaCmd::Separated { doc, left, right } => {
            let document = load(&doc, tol)?;
            let f = document.subalgebra(&left, tol)?;
            let g = document.subalgebra(&right, tol)?;
            let meet = f.meet(&g, tol)?;
            let verdict = meet.dim() == 1;
            let command = format!("csea separated {} {left} {right}", doc.display());
            Ok(Report::verdict(command, verdict, Value::Null)
                .with_details(json!({"meet_dim": meet.dim()})))
        }
    }
}

fn run_obs(cmd: ObsCmd, tol: f64) -> Result<Report, CliError> {
    match cmd {
        ObsCmd::Validate { doc, name } => {
            let document = load(&doc, tol)?;
            let command = format!("obs validate {} {name}", doc.display());
            match document.observable(&name, tol) {
                Ok(obs) => Ok(Report::verdict(command, true, Value::Null)
                    .with_details(json!({"outcomes": obs.outcomes()}))),
                Err(DocError::NotFound { kind, name }) => {
                    Err(CliError::Doc(DocError::NotFound { kind, name }))
                }
                Err(e) => Ok(Report::verdict(command, false, json!(e.to_string()))),
            }
        }
        ObsCmd::Dist {
            doc,
            observable,
            state,
        } => {
            let document = load(&doc, tol)?;
            let obs = document.observable(&observable, tol)?;
            let s = document.state(&state)?;
            let dist = obs.distribution(s)?;
            let entries: Vec<Value> = dist
                .iter()
                .map(|(o, p)| json!({"outcome": o, "probability": scalar_json(p)}))
                .collect();
            let command = format!("obs dist {} {observable} {state}", doc.display());
            Ok(Report::success(command, json!({"distribution": entries})))
        }
        ObsCmd::Postprocess { doc, source, target } => {
            let document = load(&doc, tol)?;
            let a = document.observable(&source, tol)?;
            let b = document.observable(&target, tol)?;
            let command = format!("obs postprocess {} {source} {target}", doc.display());
            match find_postprocessing(&a, &b, tol)? {
                Postprocessing::Found(channel) => {
                    let rows: Vec<Value> = channel
                        .matrix()
                        .iter()
                        .map(|row| rationals_json(row))
                        .collect();
                    Ok(Report::success(
                        command,
                        json!({
                            "source_outcomes": channel.source(),
                            "target_outcomes": channel.target(),
                            "channel": rows,
                        }),
                    ))
                }
                Postprocessing::Infeasible(reason) => Ok(Report::verdict(
                    command,
                    false,
                    infeasible_json(&reason),
                )),
            }
        }
        ObsCmd::Coexist {
            doc,
            span,
            left,
            right,
        } => {
            let document = load(&doc, tol)?;
            let strong = document.strong_span(&span, tol)?;
            let b = document.effect(&left, tol)?;
            let c = document.effect(&right, tol)?;
            let witness = coexistence_witness(&strong, &b, &c, tol)?;
            let observable = witness.observable(tol)?;
            let residual = witness
                .reconstruct_left()
                .max_distance(&b)
                .max(witness.reconstruct_right().max_distance(&c));
            let command = format!("obs coexist {} {span} {left} {right}", doc.display());
            Ok(Report::success(
                command,
                json!({
                    "left_rest": payload_json(witness.left_rest.payload()),
                    "right_rest": payload_json(witness.right_rest.payload()),
                    "common": payload_json(witness.common.payload()),
                    "observable_outcomes": observable.outcomes(),
                }),
            )
            .with_residuals(json!({"reconstruction": residual})))
        }
        ObsCmd::Iso { doc, span, member } => {
            let document = load(&doc, tol)?;
            let strong = document.strong_span(&span, tol)?;
            let iso = classical_iso(&strong);
            match member {
                Some(name) => {
                    let a = document.effect(&name, tol)?;
                    let command = format!("obs iso {} {span} {name}", doc.display());
                    match strong.strong_coordinates(&a, tol)? {
                        Some(coords) => {
                            let image = iso.to_simplex(&a, tol)?;
                            let back = iso.from_simplex(&image, tol)?;
                            let residual = back.max_distance(&a);
                            Ok(Report::verdict(command, true, Value::Null)
                                .with_details(json!({
                                    "coordinates": coeffs_json(&coords),
                                    "simplex_size": strong.dim(),
                                }))
                                .with_residuals(json!({"round_trip": residual})))
                        }
                        None => Ok(Report::verdict(
                            command,
                            false,
                            json!("effect is not a [0,1]-combination of the span generators"),
                        )),
                    }
                }
                None => {
                    let command = format!("obs iso {} {span}", doc.display());
                    let images: Vec<Value> = strong
                        .generators()
                        .iter()
                        .enumerate()
                        .map(|(i, g)| {
                            json!({
                                "generator": i + 1,
                                "payload": payload_json(g.payload()),
                            })
                        })
                        .collect();
                    Ok(Report::success(
                        command,
                        json!({"simplex_size": strong.dim(), "generators": images}),
                    ))
                }
            }
        }
    }
}

fn infeasible_json(reason: &InfeasibleReason) -> Value {
    match reason {
        InfeasibleReason::OutsideSpan { outcome } => {
            json!({"kind": "outside_span", "outcome": outcome})
        }
        InfeasibleReason::CoefficientOutOfRange {
            source,
            target,
            value,
        } => json!({
            "kind": "coefficient_out_of_range",
            "source": source,
            "target": target,
            "value": scalar_json(value),
        }),
        InfeasibleReason::RowSumNotOne { source, sum } => json!({
            "kind": "row_sum_not_one",
            "source": source,
            "sum": scalar_json(sum),
        }),
        InfeasibleReason::NotReproduced { residual } => json!({
            "kind": "not_reproduced",
            "residual": residual,
        }),
    }
}

fn run_ic(cmd: IcCmd) -> Result<Report, CliError> {
    match cmd {
        IcCmd::Decide { doc, names } => {
            let document = load(&doc, DEFAULT_TOLERANCE)?;
            let fs = document.random_variables_in_order(&names)?;
            let verdict = infocomplete::is_ic(&fs)?;
            let witness = match &verdict.witness {
                Some(w) => json!({
                    "mu": rationals_json(&w.mu),
                    "nu": rationals_json(&w.nu),
                }),
                None => Value::Null,
            };
            let command = format!("ic decide {} {}", doc.display(), names.join(" "));
            Ok(Report::verdict(command.trim_end().to_string(), verdict.ic, witness)
                .with_details(json!({"variables": fs.len()})))
        }
        IcCmd::Complementary { doc, names } => {
            let document = load(&doc, DEFAULT_TOLERANCE)?;
            let fs = document.random_variables_in_order(&names)?;
            let refinement = infocomplete::joint_refinement(&fs)?;
            let verdict = refinement.is_discrete();
            let command = format!("ic complementary {} {}", doc.display(), names.join(" "));
            Ok(Report::verdict(command.trim_end().to_string(), verdict, Value::Null)
                .with_details(json!({
                    "partitions": fs
                        .iter()
                        .map(|f| partition_json(&f.partition()))
                        .collect::<Vec<_>>(),
                    "joint_refinement": partition_json(&refinement),
                })))
        }
        IcCmd::StrongComplementary { doc, names } => {
            let document = load(&doc, DEFAULT_TOLERANCE)?;
            let fs = document.random_variables_in_order(&names)?;
            let verdict = infocomplete::is_strongly_complementary(&fs)?;
            let command = format!(
                "ic strong-complementary {} {}",
                doc.display(),
                names.join(" ")
            );
            Ok(Report::verdict(
                command.trim_end().to_string(),
                verdict,
                Value::Null,
            ))
        }
        IcCmd::Sweep { n } => {
            if n == 0 || n > 6 {
                return Err(CliError::Input(
                    "sweep size must be between 1 and 6".into(),
                ));
            }
            let summary = infocomplete::sweep(n)?;
            let verdict = summary.single_ic_iff_discrete
                && summary.strong_implies_ic
                && summary.ic_implies_complementary;
            let pair_json = |p: &Option<(infocomplete::Partition, infocomplete::Partition)>| {
                p.as_ref()
                    .map(|(a, b)| json!([partition_json(a), partition_json(b)]))
                    .unwrap_or(Value::Null)
            };
            let command = format!("ic sweep {n}");
            Ok(Report::verdict(command, verdict, Value::Null).with_details(json!({
                "partitions": summary.partition_count,
                "pairs": summary.pair_count,
                "single_ic_iff_discrete": summary.single_ic_iff_discrete,
                "strong_implies_ic": summary.strong_implies_ic,
                "ic_implies_complementary": summary.ic_implies_complementary,
                "strongly_complementary_pairs": summary.strongly_complementary_pairs,
                "ic_pairs": summary.ic_pairs,
                "complementary_pairs": summary.complementary_pairs,
                "complementary_not_ic": pair_json(&summary.complementary_not_ic),
                "ic_not_strongly_complementary": pair_json(&summary.ic_not_strongly_complementary),
            })))
        }
    }
}

fn run_q(cmd: QCmd, tol: f64, seed: u64) -> Result<Report, CliError> {
    match cmd {
        QCmd::Spectrum { doc, name } => {
            let document = load(&doc, tol)?;
            let effect = document.effect(&name, tol)?;
            let values = quantum::spectrum(&effect)?;
            let command = format!("q spectrum {} {name}", doc.display());
            Ok(Report::success(command, json!({"eigenvalues": values})))
        }
        QCmd::Decompose { doc, names } => {
            let document = load(&doc, tol)?;
            let effects = document.effects_in_order(&names, tol)?;
            let command = format!("q decompose {} {}", doc.display(), names.join(" "));
            let command = command.trim_end().to_string();
            match quantum::strong_decomposition(&effects, tol) {
                Ok(d) => Ok(Report::success(
                    command,
                    json!({
                        "projections": d
                            .projections()
                            .iter()
                            .map(|p| json!({"trace": p.trace()}))
                            .collect::<Vec<_>>(),
                        "q_trace": d.q().trace(),
                        "remainder_spectra": d.remainder_spectra(),
                    }),
                )
                .with_residuals(json!({
                    "reconstruction": d.reconstruction_residual(),
                    "partition": d.partition_residual(),
                    "orthogonality": d.orthogonality_residual(),
                    "cross": d.cross_residual(),
                }))),
                Err(QuantumError::DecompositionFailed(msg)) => {
                    Ok(Report::verdict(command, false, json!(msg)))
                }
                Err(e) => Err(e.into()),
            }
        }
        QCmd::Example6 { doc, alpha, beta } => {
            let document = load(&doc, tol)?;
            let a = document.effect(&alpha, tol)?;
            let b = document.effect(&beta, tol)?;
            let obs = quantum::build_example6(&a, &b, tol)?;
            let command = format!("q example6 {} {alpha} {beta}", doc.display());
            Ok(Report::success(
                command,
                json!({
                    "outcomes": obs.outcomes(),
                    "effects": obs
                        .effects()
                        .iter()
                        .map(|e| payload_json(e.payload()))
                        .collect::<Vec<_>>(),
                    "commutator_norm": quantum::commutator_norm(&obs.effects()[0], &obs.effects()[1])?,
                }),
            ))
        }
        QCmd::Example7 { doc, b, c, d } => {
            let document = load(&doc, tol)?;
            let eb = document.effect(&b, tol)?;
            let ec = document.effect(&c, tol)?;
            let ed = document.effect(&d, tol)?;
            let family = quantum::build_example7(&eb, &ec, &ed, tol)?;
            let command = format!("q example7 {} {b} {c} {d}", doc.display());
            Ok(Report::success(
                command,
                json!({
                    "commutative": family.commutative,
                    "effects": family
                        .effects
                        .iter()
                        .map(|e| payload_json(e.payload()))
                        .collect::<Vec<_>>(),
                }),
            )
            .with_residuals(json!({
                "reconstruction": family.decomposition.reconstruction_residual(),
                "partition": family.decomposition.partition_residual(),
            })))
        }
        QCmd::Strongify { doc, names } => {
            let document = load(&doc, tol)?;
            let effects = document.effects_in_order(&names, tol)?;
            let command = format!("q strongify {} {}", doc.display(), names.join(" "));
            let command = command.trim_end().to_string();
            match quantum::strongify_commutative(&effects, tol, seed)? {
                StrongifyOutcome::Strong(out) => Ok(Report::success(
                    command,
                    json!({
                        "generators": out
                            .iter()
                            .map(|e| payload_json(e.payload()))
                            .collect::<Vec<_>>(),
                        "seed": seed,
                    }),
                )),
                StrongifyOutcome::ProofGap(report) => Ok(Report::verdict(
                    command,
                    false,
                    json!({
                        "kind": "proof_gap_instance",
                        "detail": report.detail,
                        "selections_tried": report.selections_tried,
                        "diagonals": report.diagonals,
                    }),
                )),
            }
        }
    }
}

