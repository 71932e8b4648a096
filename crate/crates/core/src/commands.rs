//! The `affmon` commands, separated from argument parsing so they can be
//! driven directly.
//!
//! Every command writes one JSON object to standard output and a readable
//! summary to standard error. Exit codes: 0 success, 2 unreadable or
//! malformed document, 3 I/O failure, 4 violated precondition, 10 push-out
//! not quasi-integral, 11 verdict unknown.

use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::document::{to_i64_vec, Document, DocumentError, MonoidBody};
use crate::error::Error;
use crate::hilbert::hilbert_basis;
use crate::intlin::{cokernel_invariants, rational_rank, AbelianGroupInvariants, IntegerMatrix};
use crate::logpoint::{
    diagonal_rank_condition, is_strict_chart, kummer_strict_condition, self_pushout_ranks,
    ChartMorphism,
};
use crate::monoid::{fiber_product_saturated, AffineMonoid};
use crate::pushout::{
    bounded_pushout_oracle, nonqi_extension, pushout_group_invariants, quasi_integrality,
    validate_pushout, Verdict,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_PRECONDITION: i32 = 4;
pub const EXIT_NOT_QUASI_INTEGRAL: i32 = 10;
pub const EXIT_UNKNOWN: i32 = 11;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Analyze {
        path: PathBuf,
    },
    Saturate {
        path: PathBuf,
    },
    HilbertBasis {
        path: PathBuf,
    },
    PushoutCheck {
        path: PathBuf,
        oracle: Option<usize>,
    },
    Counterexample {
        path: PathBuf,
    },
    FiberProduct {
        path: PathBuf,
    },
    Strictness {
        path: PathBuf,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub exit: i32,
}

pub fn verdict_exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::QuasiIntegral => EXIT_OK,
        Verdict::NotQuasiIntegral => EXIT_NOT_QUASI_INTEGRAL,
        Verdict::Unknown => EXIT_UNKNOWN,
    }
}

struct Failure {
    exit: i32,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn precondition(e: Error) -> Self {
        Failure {
            exit: EXIT_PRECONDITION,
            kind: "precondition",
            message: e.to_string(),
        }
    }
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        Failure {
            exit: EXIT_PARSE,
            kind: "parse",
            message: e.to_string(),
        }
    }
}

struct Success {
    stdout: Value,
    stderr: String,
    exit: i32,
}

fn ok(stdout: Value, stderr: String) -> Result<Success, Failure> {
    Ok(Success {
        stdout,
        stderr,
        exit: EXIT_OK,
    })
}

/// Runs a command. With `json_only` the human summary is suppressed.
pub fn run(command: &Command, json_only: bool) -> Outcome {
    let result = match command {
        Command::Analyze { path } => read(path).and_then(analyze),
        Command::Saturate { path } => read(path).and_then(saturate),
        Command::HilbertBasis { path } => read(path).and_then(hilbert),
        Command::PushoutCheck { path, oracle } => {
            read(path).and_then(|d| pushout_check(d, *oracle))
        }
        Command::Counterexample { path } => read(path).and_then(counterexample),
        Command::FiberProduct { path } => read(path).and_then(fiber_product),
        Command::Strictness { path } => read(path).and_then(strictness),
    };
    let (stdout, stderr, exit) = match result {
        Ok(s) => (s.stdout, s.stderr, s.exit),
        Err(f) => (
            json!({"error": {"kind": f.kind, "message": f.message}}),
            format!("error: {}\n", f.message),
            f.exit,
        ),
    };
    Outcome {
        stdout: format!("{stdout}\n"),
        stderr: if json_only { String::new() } else { stderr },
        exit,
    }
}

/// `-` reads standard input.
fn read(path: &Path) -> Result<Document, Failure> {
    let mut text = String::new();
    let io = if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    io.map_err(|e| Failure {
        exit: EXIT_IO,
        kind: "io",
        message: format!("{}: {e}", path.display()),
    })?;
    Ok(Document::parse(&text)?)
}

fn vectors_json(vs: &[Vec<BigInt>]) -> Result<Value, Failure> {
    let rows: Vec<Vec<i64>> = vs.iter().map(|v| to_i64_vec(v)).collect::<Result<_, _>>()?;
    Ok(json!(rows))
}

fn vector_json(v: &[BigInt]) -> Result<Value, Failure> {
    Ok(json!(to_i64_vec(v)?))
}

fn invariants_json(inv: &AbelianGroupInvariants) -> Result<Value, Failure> {
    Ok(json!({
        "free_rank": inv.free_rank,
        "torsion": to_i64_vec(&inv.torsion)?,
    }))
}

fn fmt_vector(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn fmt_vectors(vs: &[Vec<BigInt>]) -> String {
    let parts: Vec<String> = vs.iter().map(|v| fmt_vector(v)).collect();
    format!("{{{}}}", parts.join(", "))
}

fn monoid_document(m: &AffineMonoid) -> Result<Value, Failure> {
    Ok(Document::Monoid(MonoidBody::from_monoid(m)?).to_json())
}

fn analyze(doc: Document) -> Result<Success, Failure> {
    let m = doc.into_monoid()?.to_monoid()?;
    let sat = m.saturation();
    let saturated = m.is_saturated();
    let sharp = m.is_sharp();
    let out = json!({
        "ambient_dim": m.ambient_dim(),
        "generator_count": m.generators().len(),
        "gp_rank": m.gp_rank(),
        "unit_rank": m.unit_generators().len(),
        "is_sharp": sharp,
        "is_saturated": saturated,
        "is_fine": true,
        "is_fs": saturated,
        "saturation_generators": vectors_json(sat.generators())?,
    });
    let mut text = String::new();
    writeln!(
        text,
        "monoid in Z^{} with {} generators",
        m.ambient_dim(),
        m.generators().len()
    )
    .unwrap();
    writeln!(
        text,
        "gp rank {}, unit rank {}",
        m.gp_rank(),
        m.unit_generators().len()
    )
    .unwrap();
    writeln!(text, "sharp: {sharp}, saturated: {saturated}").unwrap();
    writeln!(
        text,
        "saturation generated by {}",
        fmt_vectors(sat.generators())
    )
    .unwrap();
    ok(out, text)
}

fn saturate(doc: Document) -> Result<Success, Failure> {
    let m = doc.into_monoid()?.to_monoid()?;
    let sat = m.saturation();
    let text = format!(
        "saturation generated by {}\n",
        fmt_vectors(sat.generators())
    );
    ok(monoid_document(&sat)?, text)
}

fn hilbert(doc: Document) -> Result<Success, Failure> {
    let m = doc.into_monoid()?.to_monoid()?;
    let lattice = IntegerMatrix::identity(m.ambient_dim()).row_vectors();
    let hb = hilbert_basis(m.generators(), &lattice).map_err(Failure::precondition)?;
    let cone = AffineMonoid::new(m.ambient_dim(), hb).map_err(DocumentError::from)?;
    let text = format!(
        "Hilbert basis of cone ∩ Z^{}: {}\n",
        m.ambient_dim(),
        fmt_vectors(cone.generators())
    );
    ok(monoid_document(&cone)?, text)
}

fn pushout_check(doc: Document, oracle: Option<usize>) -> Result<Success, Failure> {
    let data = doc.into_pushout()?.to_data()?;
    let flags = validate_pushout(&data);
    let inv = pushout_group_invariants(&data);
    let report = quasi_integrality(&data);
    let witness = match &report.witness {
        Some(w) => vector_json(w)?,
        None => Value::Null,
    };
    let mut out = json!({
        "validation": {
            "m_sharp": flags.m_sharp,
            "n_sharp": flags.n_sharp,
            "l_sharp": flags.l_sharp,
            "f_local": flags.f_local,
            "g_local": flags.g_local,
        },
        "group_invariants": invariants_json(&inv)?,
        "verdict": report.verdict.as_str(),
        "witness": witness,
    });
    let mut text = String::new();
    writeln!(
        text,
        "sharp: M {} N {} L {}; local: f {} g {}",
        flags.m_sharp, flags.n_sharp, flags.l_sharp, flags.f_local, flags.g_local
    )
    .unwrap();
    writeln!(text, "push-out group: {inv}").unwrap();
    write!(text, "verdict: {}", report.verdict).unwrap();
    if let Some(w) = &report.witness {
        write!(text, ", witness n = {}", fmt_vector(w)).unwrap();
    }
    text.push('\n');
    if let Some(bound) = oracle {
        let approx = bounded_pushout_oracle(&data, bound);
        let absorption = approx.find_absorption();
        let absorption_json = match &absorption {
            Some(a) => json!({
                "a": [vector_json(&a.a.0)?, vector_json(&a.a.1)?],
                "b": [vector_json(&a.b.0)?, vector_json(&a.b.1)?],
            }),
            None => Value::Null,
        };
        let consistent = match report.verdict {
            Verdict::QuasiIntegral => absorption.is_none() || !flags.all_hold(),
            Verdict::NotQuasiIntegral => true,
            Verdict::Unknown => true,
        };
        out["oracle"] = json!({
            "bound": bound,
            "nodes": approx.node_count(),
            "classes": approx.class_count(),
            "exists_absorption": absorption.is_some(),
            "absorption": absorption_json,
            "consistent": consistent,
        });
        writeln!(
            text,
            "oracle at bound {bound}: {} pairs in {} classes, absorption {}",
            approx.node_count(),
            approx.class_count(),
            if absorption.is_some() {
                "found"
            } else {
                "not found"
            }
        )
        .unwrap();
        if !consistent {
            writeln!(text, "warning: the oracle contradicts the verdict").unwrap();
        }
    }
    Ok(Success {
        stdout: out,
        stderr: text,
        exit: verdict_exit_code(report.verdict),
    })
}

fn counterexample(doc: Document) -> Result<Success, Failure> {
    let data = doc.into_pushout()?.to_data()?;
    let ext = nonqi_extension(data.f(), data.g()).map_err(Failure::precondition)?;
    let n = data.n();
    let l = &ext.extension;
    let contains_n = n.generators().iter().all(|g| l.contains(g));
    let same_gp = l.gp_basis() == n.gp_basis();
    let mut verdicts = Vec::new();
    let mut text = String::new();
    writeln!(text, "n1 = {} in ker(i1) \\ N", fmt_vector(&ext.n1)).unwrap();
    writeln!(
        text,
        "n2 = {} in ker(i2) \\ <N, -n1>^sat",
        fmt_vector(&ext.n2)
    )
    .unwrap();
    writeln!(text, "L generated by {}", fmt_vectors(l.generators())).unwrap();
    writeln!(text, "N in L: {contains_n}, L^gp = N^gp: {same_gp}").unwrap();
    writeln!(
        text,
        "L sharp: {}, saturated: {}",
        l.is_sharp(),
        l.is_saturated()
    )
    .unwrap();
    for (name, r) in ["i1", "i2"].iter().zip(&ext.reports) {
        let w = r
            .witness
            .as_deref()
            .expect("negative verdicts carry witnesses");
        verdicts.push(json!({
            "map": name,
            "verdict": r.verdict.as_str(),
            "witness": vector_json(w)?,
        }));
        writeln!(
            text,
            "push-out along {name}: {}, witness {}",
            r.verdict,
            fmt_vector(w)
        )
        .unwrap();
    }
    let out = json!({
        "extension": monoid_document(l)?,
        "transcript": {
            "n1": vector_json(&ext.n1)?,
            "n2": vector_json(&ext.n2)?,
            "contains_n": contains_n,
            "same_groupification": same_gp,
            "sharp": l.is_sharp(),
            "saturated": l.is_saturated(),
            "verdicts": verdicts,
        },
    });
    ok(out, text)
}

fn fiber_product(doc: Document) -> Result<Success, Failure> {
    let (phi, psi) = doc.into_pushout()?.to_maps()?;
    if phi.target() != psi.target() {
        return Err(DocumentError::Invalid(Error::MismatchedTargets).into());
    }
    let w = fiber_product_saturated(&phi, &psi).map_err(Failure::precondition)?;
    let text = format!(
        "fiber product generated by {}\n",
        fmt_vectors(w.generators())
    );
    ok(monoid_document(&w)?, text)
}

fn strictness(doc: Document) -> Result<Success, Failure> {
    let map = doc.into_morphism()?.to_map()?;
    let phi = ChartMorphism::new(map.clone()).map_err(Failure::precondition)?;
    let coker = cokernel_invariants(&map.gp_coordinate_matrix());
    let strict = is_strict_chart(&phi);
    let rank_condition = diagonal_rank_condition(&phi);
    let kummer = kummer_strict_condition(&phi);
    let (self_rank, formula) = self_pushout_ranks(&map);
    let out = json!({
        "is_local": true,
        "is_injective": map.is_injective(),
        "is_strict": strict,
        "diagonal_rank_condition": rank_condition,
        "kummer_strict_condition": kummer,
        "cokernel": invariants_json(&coker)?,
        "gp_rank_of_image": rational_rank(&map.gp_matrix()),
        "self_pushout_rank": self_rank,
        "rank_formula": formula,
    });
    let mut text = String::new();
    writeln!(text, "strict: {strict}").unwrap();
    writeln!(text, "cokernel of the gp map: {coker}").unwrap();
    writeln!(
        text,
        "rationally surjective: {rank_condition}, surjective: {kummer}"
    )
    .unwrap();
    writeln!(
        text,
        "self-push-out rank {self_rank} = 2 rank(target) - rank(image) = {formula}"
    )
    .unwrap();
    ok(out, text)
}
