//! Command-line front end: speed limits, curve export, gate classification,
//! certification, and bottleneck diagnostics.
//!
//! Exit codes are stable: 0 success (for `certify`, the set certifies; for
//! `table`, every row matches), 1 negative result (non-certifying set or
//! table mismatch), 2 unusable input (unknown gate, malformed file or flag),
//! 3 a gate file that parses but is not unitary.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use qslkit::certify::{
    canonical_two_op_set, common_commutant_dim, pauli_certifier_set, planarity_diagnostic,
    pq_certifier_set, CertifyingSet,
};
use qslkit::gates::{classify_gate, classify_unitary, reference_table, standard_gate};
use qslkit::geometry::{curve_to_csv, curve_to_json, tangent_curve, CurveMetadata, Schedule};
use qslkit::qsl::{eigenphases, minimal_spread, optimal_generator};
use qslkit::{
    commutator, hs_norm, pauli_basis, HermitianOperator, PauliString, QslError, UnitaryOperator,
};

const GENERATED_BY: &str = concat!("qslkit ", env!("CARGO_PKG_VERSION"));

#[derive(Parser)]
#[command(
    name = "qslkit",
    version,
    about = "Spectral-width quantum speed limits and space-curve gate geometry"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CertifierFamily {
    Pauli,
    Eigen,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NamedSet {
    Canonical,
    Pauli,
    Pq,
}

#[derive(Args)]
struct GateArgs {
    /// Built-in gate name (see `table`) or path to a JSON unitary
    /// {"dim": n, "re": [[..]], "im": [[..]]}
    #[arg(long)]
    gate: String,
    /// Spectral-width budget Omega_max
    #[arg(long = "omega-max", default_value_t = 1.0)]
    omega_max: f64,
}

#[derive(Args)]
struct OutArgs {
    /// Output path (standard output when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact speed limit T* = dphi*/Omega_max for a gate
    Qsl {
        #[command(flatten)]
        gate: GateArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Space curve of an observable under the gate's optimal generator
    Curve {
        #[command(flatten)]
        gate: GateArgs,
        /// Pauli word seeding the curve (e.g. ZZ)
        #[arg(long)]
        observable: String,
        /// Number of grid intervals over [0, T*]
        #[arg(long, default_value_t = 2048)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Speed limit plus space-curve geometry class of a gate
    Classify {
        #[command(flatten)]
        gate: GateArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Commutant rank test: does an operator set certify evolutions?
    Certify {
        /// JSON file with an array of operators ({"dim","re","im"},
        /// {"word","sign"}, or bare Pauli words)
        #[arg(long, conflicts_with = "set")]
        ops: Option<PathBuf>,
        /// Built-in certifying family
        #[arg(long, value_enum)]
        set: Option<NamedSet>,
        /// Hilbert-space dimension for --set canonical
        #[arg(long)]
        dim: Option<usize>,
        /// Qubit count for --set pauli
        #[arg(long)]
        qubits: Option<usize>,
        /// Gate (name or file) whose eigenbasis builds --set pq
        #[arg(long)]
        gate: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Per-observable lower bounds, bottleneck observables, and overhead
    Bottleneck {
        #[command(flatten)]
        gate: GateArgs,
        /// Certifier family: pauli strings or eigenbasis P/Q pairs
        #[arg(long, value_enum)]
        certifiers: CertifierFamily,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Recompute the reference gate table and verify it
    Table {
        /// Spectral-width budget Omega_max
        #[arg(long = "omega-max", default_value_t = 1.0)]
        omega_max: f64,
        #[command(flatten)]
        out: OutArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<QslError> for CliError {
    fn from(e: QslError) -> Self {
        let code = match e {
            QslError::NotUnitary { .. } => 3,
            _ => 2,
        };
        CliError::new(code, e.to_string())
    }
}

fn rank_tol() -> Result<f64, CliError> {
    match std::env::var("QSLKIT_TOL") {
        Ok(raw) => raw
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| t.is_finite() && *t > 0.0)
            .ok_or_else(|| CliError::new(2, format!("invalid QSLKIT_TOL value \"{raw}\""))),
        Err(_) => Ok(qslkit::DEFAULT_RANK_TOL),
    }
}

/// Resolves a gate argument: registry name first, then a JSON file.
/// Returns the unitary plus a display label and whether it was named.
fn resolve_gate(spec: &str) -> Result<(UnitaryOperator, String, bool), CliError> {
    if let Ok(gate) = standard_gate(spec) {
        return Ok((gate.unitary, gate.name, true));
    }
    let path = PathBuf::from(spec);
    if !path.exists() {
        return Err(CliError::new(
            2,
            format!("\"{spec}\" is neither a known gate name nor an existing file"),
        ));
    }
    let text = fs::read_to_string(&path)
        .map_err(|e| CliError::new(2, format!("cannot read {}: {e}", path.display())))?;
    let unitary: UnitaryOperator = serde_json::from_str(&text).map_err(|e| {
        let code = if e.to_string().contains("not unitary") { 3 } else { 2 };
        CliError::new(code, format!("cannot parse {}: {e}", path.display()))
    })?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| spec.to_string());
    Ok((unitary, label, false))
}

fn qubit_count(dim: usize, context: &str) -> Result<usize, CliError> {
    match dim {
        2 => Ok(1),
        4 => Ok(2),
        8 => Ok(3),
        16 => Ok(4),
        other => Err(CliError::new(
            2,
            format!("{context} needs a qubit register, got dimension {other}"),
        )),
    }
}

fn check_omega(omega_max: f64) -> Result<(), CliError> {
    if !omega_max.is_finite() || omega_max <= 0.0 {
        return Err(CliError::new(
            2,
            format!("--omega-max must be > 0, got {omega_max}"),
        ));
    }
    Ok(())
}

fn emit(out: &OutArgs, payload: &str) -> Result<(), CliError> {
    match &out.out {
        Some(path) => fs::write(path, payload)
            .map_err(|e| CliError::new(2, format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(payload.as_bytes())
                .map_err(|e| CliError::new(2, format!("cannot write to stdout: {e}")))
        }
    }
}

fn emit_json<T: Serialize>(out: &OutArgs, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::new(2, format!("serialization failed: {e}")))?;
    text.push('\n');
    emit(out, &text)
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Qsl { gate, out } => cmd_qsl(gate, out),
        Command::Curve {
            gate,
            observable,
            steps,
            format,
            out,
        } => cmd_curve(gate, observable, steps, format, out),
        Command::Classify { gate, out } => cmd_classify(gate, out),
        Command::Certify {
            ops,
            set,
            dim,
            qubits,
            gate,
            out,
        } => cmd_certify(ops, set, dim, qubits, gate, out),
        Command::Bottleneck {
            gate,
            certifiers,
            out,
        } => cmd_bottleneck(gate, certifiers, out),
        Command::Table { omega_max, out } => cmd_table(omega_max, out),
    }
}

fn cmd_qsl(gate: GateArgs, out: OutArgs) -> Result<u8, CliError> {
    check_omega(gate.omega_max)?;
    let (unitary, label, _) = resolve_gate(&gate.gate)?;
    let phases = eigenphases(&unitary)?;
    let result = minimal_spread(&phases, gate.omega_max)?;
    let record = json!({
        "gate": label,
        "delta_phi_star": result.delta_phi_star,
        "t_star": result.t_star,
        "omega_max": result.omega_max,
        "phases": phases.phases(),
        "shifts": result.shifts,
    });
    emit_json(&out, &record)?;
    Ok(0)
}

fn cmd_curve(
    gate: GateArgs,
    observable: String,
    steps: usize,
    format: Format,
    out: OutArgs,
) -> Result<u8, CliError> {
    check_omega(gate.omega_max)?;
    if steps < 16 {
        return Err(CliError::new(2, format!("--steps must be >= 16, got {steps}")));
    }
    let (unitary, label, _) = resolve_gate(&gate.gate)?;
    let qubits = qubit_count(unitary.dim(), "curve export")?;
    let word: PauliString = observable
        .parse()
        .map_err(|e: QslError| CliError::new(2, e.to_string()))?;
    if word.qubits() != qubits {
        return Err(CliError::new(
            2,
            format!(
                "observable {} acts on {} qubits but the gate has {}",
                observable,
                word.qubits(),
                qubits
            ),
        ));
    }
    if word.is_identity_word() {
        return Err(CliError::new(2, "the identity word seeds no curve"));
    }
    let o = word.to_operator();

    let generator = optimal_generator(&unitary, gate.omega_max)?;
    if hs_norm(&commutator(&generator.h_star, &o)?) <= 1e-12 {
        eprintln!(
            "warning: observable {observable} commutes with the optimal generator; \
             the curve is a straight line"
        );
    }
    let basis = pauli_basis(qubits)?;
    let schedule = Schedule::constant(generator.h_star.clone(), generator.t_star)?;
    let curve = tangent_curve(&schedule, &o, &basis, steps)?;

    match format {
        Format::Csv => emit(&out, &curve_to_csv(&curve))?,
        Format::Json => {
            let meta = CurveMetadata {
                gate: label,
                observable,
                omega_max: gate.omega_max,
                steps,
                generated_by: GENERATED_BY.to_string(),
            };
            emit_json(&out, &curve_to_json(&curve, &meta))?;
        }
    }
    Ok(0)
}

fn cmd_classify(gate: GateArgs, out: OutArgs) -> Result<u8, CliError> {
    check_omega(gate.omega_max)?;
    let tol = rank_tol()?;
    let (unitary, label, named) = resolve_gate(&gate.gate)?;
    let classification = if named {
        classify_gate(&label, gate.omega_max, tol)?
    } else {
        classify_unitary(&unitary, &label, gate.omega_max, tol)?
    };
    emit_json(&out, &classification)?;
    Ok(0)
}

#[derive(serde::Deserialize)]
#[serde(untagged)]
enum OperatorSpec {
    Word(String),
    Pauli { word: String, sign: i8 },
    Dense(HermitianOperator),
}

fn load_operator_list(path: &PathBuf) -> Result<CertifyingSet, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::new(2, format!("cannot read {}: {e}", path.display())))?;
    let specs: Vec<OperatorSpec> = serde_json::from_str(&text)
        .map_err(|e| CliError::new(2, format!("cannot parse {}: {e}", path.display())))?;
    if specs.is_empty() {
        return Err(CliError::new(2, "operator list is empty"));
    }
    let mut operators = Vec::with_capacity(specs.len());
    let mut labels = Vec::with_capacity(specs.len());
    for (i, spec) in specs.into_iter().enumerate() {
        let (op, label) = match spec {
            OperatorSpec::Word(word) => {
                let p: PauliString = word
                    .parse()
                    .map_err(|e: QslError| CliError::new(2, e.to_string()))?;
                (p.to_operator(), p.to_string())
            }
            OperatorSpec::Pauli { word, sign } => {
                let rendered = if sign < 0 { format!("-{word}") } else { word };
                let p: PauliString = rendered
                    .parse()
                    .map_err(|e: QslError| CliError::new(2, e.to_string()))?;
                (p.to_operator(), p.to_string())
            }
            OperatorSpec::Dense(op) => (op, format!("op{i}")),
        };
        operators.push(op);
        labels.push(label);
    }
    CertifyingSet::new(operators, labels, "user").map_err(|e| CliError::new(2, e.to_string()))
}

fn cmd_certify(
    ops: Option<PathBuf>,
    set: Option<NamedSet>,
    dim: Option<usize>,
    qubits: Option<usize>,
    gate: Option<String>,
    out: OutArgs,
) -> Result<u8, CliError> {
    let tol = rank_tol()?;
    let certifying = match (ops, set) {
        (Some(path), None) => load_operator_list(&path)?,
        (None, Some(NamedSet::Canonical)) => {
            let n = dim.ok_or_else(|| CliError::new(2, "--set canonical needs --dim"))?;
            canonical_two_op_set(n)?
        }
        (None, Some(NamedSet::Pauli)) => {
            let q = qubits.ok_or_else(|| CliError::new(2, "--set pauli needs --qubits"))?;
            pauli_certifier_set(q)?
        }
        (None, Some(NamedSet::Pq)) => {
            let spec = gate.ok_or_else(|| CliError::new(2, "--set pq needs --gate"))?;
            let (unitary, _, _) = resolve_gate(&spec)?;
            pq_certifier_set(&unitary)?
        }
        _ => return Err(CliError::new(2, "provide exactly one of --ops or --set")),
    };
    let report = common_commutant_dim(&certifying, tol)?;
    let record = json!({
        "set": certifying.label(),
        "operators": certifying.len(),
        "dimension": report.dimension,
        "certifies": report.certifies,
    });
    emit_json(&out, &record)?;
    Ok(u8::from(!report.certifies))
}

fn cmd_bottleneck(
    gate: GateArgs,
    certifiers: CertifierFamily,
    out: OutArgs,
) -> Result<u8, CliError> {
    check_omega(gate.omega_max)?;
    let tol = rank_tol()?;
    let (unitary, label, _) = resolve_gate(&gate.gate)?;
    let set = match certifiers {
        CertifierFamily::Pauli => {
            let q = qubit_count(unitary.dim(), "pauli certifiers")?;
            pauli_certifier_set(q)?
        }
        CertifierFamily::Eigen => pq_certifier_set(&unitary)?,
    };
    let diagnostic = planarity_diagnostic(&unitary, &set, gate.omega_max, &label, tol)?;
    emit_json(&out, &diagnostic)?;
    Ok(0)
}

fn cmd_table(omega_max: f64, out: OutArgs) -> Result<u8, CliError> {
    check_omega(omega_max)?;
    let tol = rank_tol()?;
    // negative-control hook for tests: corrupt one expectation on demand
    let corrupt = std::env::var("QSLKIT_CORRUPT_TABLE").is_ok();

    let mut lines = Vec::new();
    let mut failures = Vec::new();
    lines.push(format!(
        "{:<24} {:>16} {:>16}  {}",
        "Gate", "dphi*", "T*", "Geometry"
    ));
    for (row_idx, row) in reference_table(omega_max).iter().enumerate() {
        let mut expected_dphi = row.delta_phi_star;
        if corrupt && row_idx == 0 {
            expected_dphi += 0.1;
        }
        for name in &row.gates {
            let c = classify_gate(name, omega_max, tol)
                .map_err(|e| CliError::new(2, e.to_string()))?;
            let ok = (c.delta_phi_star - expected_dphi).abs() <= 1e-9
                && (c.t_star - expected_dphi / omega_max).abs() <= 1e-9
                && c.geometry == row.geometry;
            if !ok {
                failures.push(format!(
                    "{name}: computed (dphi*={:.12}, T*={:.12}, {:?}), expected (dphi*={:.12}, {:?})",
                    c.delta_phi_star, c.t_star, c.geometry, expected_dphi, row.geometry
                ));
            }
        }
        let geometry = match row.geometry {
            qslkit::gates::GeometryClass::Arc => "circular arc",
            qslkit::gates::GeometryClass::Helix3 => "3d helix",
            qslkit::gates::GeometryClass::Helix4 => "4d helix",
        };
        lines.push(format!(
            "{:<24} {:>16.12} {:>16.12}  {}",
            row.gates.join(", "),
            row.delta_phi_star,
            row.t_star,
            geometry
        ));
    }
    let mut text = lines.join("\n");
    text.push('\n');
    if failures.is_empty() {
        text.push_str("all rows verified\n");
        emit(&out, &text)?;
        Ok(0)
    } else {
        text.push_str("MISMATCHED ROWS:\n");
        for f in &failures {
            text.push_str(f);
            text.push('\n');
        }
        emit(&out, &text)?;
        Ok(1)
    }
}
