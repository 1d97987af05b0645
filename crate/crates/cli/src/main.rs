//! Command-line front end: parses JSON documents, dispatches the library
//! operations and emits machine-readable reports.
//!
//! Exit codes: 0 = success / verified, 1 = verified-false (invalid
//! structure, non-orientable matroid, refuted containment), 2 = input
//! error (unreadable file, schema violation).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use phasefan::bridge;
use phasefan::doc;
use phasefan::fan::FanMode;
use phasefan::fixtures;
use phasefan::phase::{self, PhaseViolation, RealPhaseStructure};

#[derive(Parser)]
#[command(
    name = "phasefan",
    version,
    about = "Matroid orientations and real phase structures on matroid fans"
)]
struct Cli {
    /// Output format; JSON is the only supported format.
    #[arg(long, global = true, default_value = "json")]
    output: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Affine,
    Projective,
}

impl From<ModeArg> for FanMode {
    fn from(m: ModeArg) -> FanMode {
        match m {
            ModeArg::Affine => FanMode::Affine,
            ModeArg::Projective => FanMode::Projective,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the phase-structure conditions on a phase document.
    VerifyPhase(FileArg),
    /// Check the covector axioms on an oriented-matroid document.
    VerifyOm(FileArg),
    /// Convert an oriented matroid to its induced phase structure.
    FromOriented {
        file: PathBuf,
        /// Fan to carry the structure.
        #[arg(long, value_enum, default_value = "affine")]
        mode: ModeArg,
    },
    /// Recover the signed circuits behind a verified phase structure.
    ToCircuits(FileArg),
    /// Recover the full oriented matroid behind a verified phase structure.
    ToOriented(FileArg),
    /// Deletion/contraction minor of a phase structure.
    Minor {
        file: PathBuf,
        /// Comma-separated labels to delete.
        #[arg(long, value_delimiter = ',')]
        delete: Vec<String>,
        /// Comma-separated labels to contract.
        #[arg(long, value_delimiter = ',')]
        contract: Vec<String>,
    },
    /// Exhaustively enumerate the phase structures on the fan of a matroid.
    SearchPhase {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "affine")]
        mode: ModeArg,
        /// Return one representative per reorientation class.
        #[arg(long)]
        up_to_reorientation: bool,
        /// Stop after this many structures (the report is flagged).
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Count the orientations of a matroid by exhaustive circuit signing.
    CountOrientations(FileArg),
    /// Decide whether the first phase structure is a real subfan of the second.
    SubfanCheck { first: PathBuf, second: PathBuf },
    /// Report the necklace ordering at every codimension-one face.
    NecklaceOrderings(FileArg),
    /// Emit a bundled fixture document, or list them all.
    Fixtures {
        /// Name of the fixture to emit.
        name: Option<String>,
        /// List the available fixtures.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Args)]
struct FileArg {
    file: PathBuf,
}

/// Verdict of a command: controls the exit code.
enum Outcome {
    Verified(Value),
    Refuted(Value),
    BadInput(Value),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let OutputFormat::Json = cli.output;
    let outcome = run(cli.command);
    let (code, report) = match outcome {
        Outcome::Verified(v) => (ExitCode::SUCCESS, v),
        Outcome::Refuted(v) => (ExitCode::from(1), v),
        Outcome::BadInput(v) => (ExitCode::from(2), v),
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("reports serialize")
    );
    code
}

fn run(command: Command) -> Outcome {
    match command {
        Command::VerifyPhase(arg) => with_phase(&arg.file, verify_phase),
        Command::VerifyOm(arg) => verify_om(&arg.file),
        Command::FromOriented { file, mode } => from_oriented(&file, mode.into()),
        Command::ToCircuits(arg) => with_phase(&arg.file, to_circuits),
        Command::ToOriented(arg) => with_phase(&arg.file, to_oriented),
        Command::Minor {
            file,
            delete,
            contract,
        } => with_phase(&file, |e| minor(e, &delete, &contract)),
        Command::SearchPhase {
            file,
            mode,
            up_to_reorientation,
            limit,
        } => search_phase(&file, mode.into(), up_to_reorientation, limit),
        Command::CountOrientations(arg) => count_orientations(&arg.file),
        Command::SubfanCheck { first, second } => subfan_check(&first, &second),
        Command::NecklaceOrderings(arg) => with_phase(&arg.file, necklace_orderings),
        Command::Fixtures { name, list } => fixtures_cmd(name, list),
    }
}

fn bad_input(message: impl std::fmt::Display) -> Outcome {
    Outcome::BadInput(json!({ "error": message.to_string() }))
}

fn read_json(path: &PathBuf) -> Result<Value, Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| bad_input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| bad_input(format!("invalid JSON: {e}")))
}

fn read_phase(path: &PathBuf) -> Result<RealPhaseStructure, Outcome> {
    let value = read_json(path)?;
    match doc::parse_phase(&value, "") {
        Err(e) => Err(Outcome::BadInput(
            json!({ "error": e.message, "pointer": e.pointer }),
        )),
        Ok(Err(e)) => Err(bad_input(e)),
        Ok(Ok(structure)) => Ok(structure),
    }
}

fn with_phase(path: &PathBuf, f: impl FnOnce(RealPhaseStructure) -> Outcome) -> Outcome {
    match read_phase(path) {
        Ok(e) => f(e),
        Err(outcome) => outcome,
    }
}

fn violation_to_value(e: &RealPhaseStructure, v: &PhaseViolation) -> Value {
    let m = e.matroid();
    match v {
        PhaseViolation::NotParallel { facet } => json!({
            "kind": "not_parallel",
            "facet": doc::chain_to_value(m, facet),
        }),
        PhaseViolation::OddCover { face, point } => json!({
            "kind": "odd_cover",
            "face": doc::chain_to_value(m, face),
            "point": point.to_string(),
        }),
        PhaseViolation::NoNecklace { face } => json!({
            "kind": "no_necklace",
            "face": doc::chain_to_value(m, face),
        }),
    }
}

fn verify_phase(e: RealPhaseStructure) -> Outcome {
    let even = match e.verify() {
        Ok(r) => r,
        Err(err) => return bad_input(err),
    };
    let necklace = match e.verify_necklace() {
        Ok(r) => r,
        Err(err) => return bad_input(err),
    };
    let m = e.matroid();
    let orderings: Vec<Value> = necklace
        .orderings
        .iter()
        .map(|(face, ordering)| {
            json!({
                "face": doc::chain_to_value(m, face),
                "ordering": doc::ordering_to_value(m, ordering),
            })
        })
        .collect();
    let violations: Vec<Value> = even
        .violations
        .iter()
        .chain(&necklace.violations)
        .map(|v| violation_to_value(&e, v))
        .collect();
    let report = json!({
        "command": "verify-phase",
        "ok": even.ok,
        "checkers_agree": even.ok == necklace.ok,
        "violations": violations,
        "necklace_orderings": orderings,
    });
    if even.ok {
        Outcome::Verified(report)
    } else {
        Outcome::Refuted(report)
    }
}

fn verify_om(path: &PathBuf) -> Outcome {
    let value = match read_json(path) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let input = match doc::parse_om(&value, "") {
        Ok(i) => i,
        Err(e) => return Outcome::BadInput(json!({ "error": e.message, "pointer": e.pointer })),
    };
    match input.build() {
        Ok(om) => Outcome::Verified(json!({
            "command": "verify-om",
            "ok": true,
            "covectors": om.covectors().len(),
            "topes": om.topes().len(),
            "underlying": doc::matroid_to_value(&om.underlying_matroid()),
        })),
        Err(e) => Outcome::Refuted(json!({
            "command": "verify-om",
            "ok": false,
            "reason": e.to_string(),
        })),
    }
}

fn from_oriented(path: &PathBuf, mode: FanMode) -> Outcome {
    let value = match read_json(path) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let input = match doc::parse_om(&value, "") {
        Ok(i) => i,
        Err(e) => return Outcome::BadInput(json!({ "error": e.message, "pointer": e.pointer })),
    };
    let om = match input.build() {
        Ok(om) => om,
        Err(e) => return Outcome::Refuted(json!({ "ok": false, "reason": e.to_string() })),
    };
    match bridge::to_phase(&om, mode) {
        Ok(e) => Outcome::Verified(doc::phase_to_value(&e)),
        Err(e) => Outcome::Refuted(json!({ "ok": false, "reason": e.to_string() })),
    }
}

fn to_circuits(e: RealPhaseStructure) -> Outcome {
    match bridge::signed_circuits_from_phase(&e) {
        Ok(set) => Outcome::Verified(doc::signed_circuits_to_value(e.matroid().labels(), &set)),
        Err(err) => Outcome::Refuted(json!({ "ok": false, "reason": err.to_string() })),
    }
}

fn to_oriented(e: RealPhaseStructure) -> Outcome {
    match bridge::phase_to_oriented(&e) {
        Ok(om) => Outcome::Verified(doc::om_to_value(&om)),
        Err(err) => Outcome::Refuted(json!({ "ok": false, "reason": err.to_string() })),
    }
}

fn minor(e: RealPhaseStructure, delete: &[String], contract: &[String]) -> Outcome {
    let to_mask = |names: &[String]| -> Result<u32, Outcome> {
        let mut mask = 0u32;
        for name in names {
            let idx = e.matroid().label_index(name).map_err(bad_input)?;
            mask |= 1 << idx;
        }
        Ok(mask)
    };
    let delete = match to_mask(delete) {
        Ok(m) => m,
        Err(o) => return o,
    };
    let contract = match to_mask(contract) {
        Ok(m) => m,
        Err(o) => return o,
    };
    match e.minor(delete, contract) {
        Ok(result) => Outcome::Verified(doc::phase_to_value(&result)),
        Err(phase::PhaseError::InvalidStructure(reason)) => {
            Outcome::Refuted(json!({ "ok": false, "reason": reason }))
        }
        Err(err) => bad_input(err),
    }
}

fn search_phase(
    path: &PathBuf,
    mode: FanMode,
    up_to_reorientation: bool,
    limit: Option<usize>,
) -> Outcome {
    let value = match read_json(path) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let input = match doc::parse_matroid(&value, "") {
        Ok(i) => i,
        Err(e) => return Outcome::BadInput(json!({ "error": e.message, "pointer": e.pointer })),
    };
    let matroid = match input.build() {
        Ok(m) => m,
        Err(e) => return bad_input(e),
    };
    let matroid = if matroid.is_loopfree() {
        matroid
    } else {
        // Loop convention: the fan of a matroid with loops is the fan of
        // its loopfree contraction.
        match matroid.contract(matroid.loops()) {
            Ok(m) => m,
            Err(e) => return bad_input(e),
        }
    };
    match phase::search_phase_structures(&matroid, mode, up_to_reorientation, limit) {
        Ok(outcome) => {
            let count = outcome.structures.len();
            let report = json!({
                "command": "search-phase",
                "count": count,
                "truncated": outcome.truncated,
                "up_to_reorientation": up_to_reorientation,
                "structures": outcome
                    .structures
                    .iter()
                    .map(doc::phase_to_value)
                    .collect::<Vec<_>>(),
            });
            if count > 0 {
                Outcome::Verified(report)
            } else {
                Outcome::Refuted(report)
            }
        }
        Err(e) => bad_input(e),
    }
}

fn count_orientations(path: &PathBuf) -> Outcome {
    let value = match read_json(path) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let input = match doc::parse_matroid(&value, "") {
        Ok(i) => i,
        Err(e) => return Outcome::BadInput(json!({ "error": e.message, "pointer": e.pointer })),
    };
    let matroid = match input.build() {
        Ok(m) => m,
        Err(e) => return bad_input(e),
    };
    match bridge::count_orientations(&matroid) {
        Ok(count) => {
            let report = json!({ "command": "count-orientations", "count": count });
            if count > 0 {
                Outcome::Verified(report)
            } else {
                Outcome::Refuted(report)
            }
        }
        Err(e) => bad_input(e),
    }
}

fn subfan_check(first: &PathBuf, second: &PathBuf) -> Outcome {
    let e1 = match read_phase(first) {
        Ok(e) => e,
        Err(o) => return o,
    };
    let e2 = match read_phase(second) {
        Ok(e) => e,
        Err(o) => return o,
    };
    match e1.is_real_subfan_of(&e2) {
        Ok(answer) => {
            let report = json!({ "command": "subfan-check", "subfan": answer });
            if answer {
                Outcome::Verified(report)
            } else {
                Outcome::Refuted(report)
            }
        }
        Err(e) => bad_input(e),
    }
}

fn necklace_orderings(e: RealPhaseStructure) -> Outcome {
    match e.verify_necklace() {
        Ok(report) => {
            let m = e.matroid();
            let faces: Vec<Value> = report
                .orderings
                .iter()
                .map(|(face, ordering)| {
                    json!({
                        "face": doc::chain_to_value(m, face),
                        "ordering": doc::ordering_to_value(m, ordering),
                    })
                })
                .collect();
            let violations: Vec<Value> = report
                .violations
                .iter()
                .map(|v| violation_to_value(&e, v))
                .collect();
            let out = json!({
                "command": "necklace-orderings",
                "ok": report.ok,
                "faces": faces,
                "violations": violations,
            });
            if report.ok {
                Outcome::Verified(out)
            } else {
                Outcome::Refuted(out)
            }
        }
        Err(err) => bad_input(err),
    }
}

fn fixtures_cmd(name: Option<String>, list: bool) -> Outcome {
    if list || name.is_none() {
        let entries: Vec<Value> = fixtures::all()
            .iter()
            .map(|f| json!({ "name": f.name, "kind": f.kind, "summary": f.summary }))
            .collect();
        return Outcome::Verified(json!({ "command": "fixtures", "fixtures": entries }));
    }
    let name = name.unwrap();
    match fixtures::by_name(&name) {
        Some(f) => Outcome::Verified(f.doc),
        None => bad_input(format!("unknown fixture {name:?}")),
    }
}
