//! Command-line front end. Every subcommand reads JSON inputs, runs one
//! library operation and emits a JSON report echoing the seed and budget.
//!
//! Exit codes: 0 success, 2 soft failure (an exhausted randomized search),
//! 1 anything else, including rejected verifications.

use std::fs;
use std::path::{Path, PathBuf};

pub use clap::Parser;
use clap::{ArgAction, Subcommand};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::euler::{self, Certified, CertifiedJson};
use crate::matrix::{self, ElementaryOp, MatrixJson, OpJson, RootSchedule, SqMatrix};
use crate::path::{self, ElemPath, OpenSet, OpenSetJson, PathJson};
use crate::ring::{Elem, Ring, RingDescriptor};
use crate::umrow::{self, RowJson, UmRow};
use crate::wms;

pub const DEFAULT_BUDGET: u64 = 100_000;

#[derive(Parser, Debug, Clone)]
#[command(name = "unimodular-lab", version, about = "Exact computations with unimodular rows, elementary paths and Euler-class witnesses")]
pub struct Cli {
    /// Seed for every randomized search.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Attempt budget for randomized searches.
    #[arg(long, global = true, env = "UNIMODULAR_LAB_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print a one-line summary to stderr.
    #[arg(short, long, global = true, action = ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Reduce an SL matrix to the identity in (n+1)^2 - 1 elementary steps.
    Factorize {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Convert between a matrix and its birational parameters.
    Params {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long, conflicts_with = "t", required_unless_present = "t")]
        matrix: Option<PathBuf>,
        /// JSON list of parameter strings.
        #[arg(long)]
        t: Option<PathBuf>,
    },
    /// Find an elementary path between two matrices inside an open set.
    Connect {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
        /// Open set; defaults to the whole group.
        #[arg(long)]
        open: Option<PathBuf>,
    },
    /// Re-check a path (or a report containing one).
    VerifyPath {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        path: PathBuf,
        #[arg(long)]
        open: Option<PathBuf>,
    },
    IsGeneric {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        row: PathBuf,
    },
    MakeGeneric {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        row: PathBuf,
    },
    PrimeAvoid {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        row: PathBuf,
    },
    /// Exhaustive orbit partition of unimodular rows over a finite ring.
    Orbits {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long, default_value_t = 4)]
        m: usize,
    },
    /// Orbit multiplication table with the group-axiom checks.
    GroupTable {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long, default_value_t = 4)]
        m: usize,
    },
    NormalizePair {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    GroupLaw {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    Phi0 {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        row: PathBuf,
    },
    Phi {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        row: PathBuf,
    },
    LemmaWitness {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        row: PathBuf,
        /// JSON list of shifts for the swapped row; chosen by avoidance if absent.
        #[arg(long)]
        lambda: Option<PathBuf>,
        #[arg(long)]
        mu: Option<PathBuf>,
    },
    PhiStep {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        row: PathBuf,
        #[arg(long)]
        op: PathBuf,
    },
    HomCheck {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Replay a witness: `{"lhs", "rhs", "witness"}` or a report with a `certified` field.
    VerifyWitness {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        input: PathBuf,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Factorize { .. } => "factorize",
            Command::Params { .. } => "params",
            Command::Connect { .. } => "connect",
            Command::VerifyPath { .. } => "verify-path",
            Command::IsGeneric { .. } => "is-generic",
            Command::MakeGeneric { .. } => "make-generic",
            Command::PrimeAvoid { .. } => "prime-avoid",
            Command::Orbits { .. } => "orbits",
            Command::GroupTable { .. } => "group-table",
            Command::NormalizePair { .. } => "normalize-pair",
            Command::GroupLaw { .. } => "group-law",
            Command::Phi0 { .. } => "phi0",
            Command::Phi { .. } => "phi",
            Command::LemmaWitness { .. } => "lemma-witness",
            Command::PhiStep { .. } => "phi-step",
            Command::HomCheck { .. } => "hom-check",
            Command::VerifyWitness { .. } => "verify-witness",
        }
    }

    /// Input arguments as given, for the echoed configuration.
    pub fn inputs(&self) -> Value {
        let p = |x: &PathBuf| Value::String(x.display().to_string());
        let o = |x: &Option<PathBuf>| x.as_ref().map(p).unwrap_or(Value::Null);
        match self {
            Command::Factorize { ring, matrix } => json!({"ring": p(ring), "matrix": p(matrix)}),
            Command::Params { ring, matrix, t } => json!({"ring": p(ring), "matrix": o(matrix), "t": o(t)}),
            Command::Connect { ring, p: a, q, open } => {
                json!({"ring": p(ring), "p": p(a), "q": p(q), "open": o(open)})
            }
            Command::VerifyPath { ring, path, open } => json!({"ring": p(ring), "path": p(path), "open": o(open)}),
            Command::IsGeneric { ring, row }
            | Command::MakeGeneric { ring, row }
            | Command::PrimeAvoid { ring, row }
            | Command::Phi0 { ring, row }
            | Command::Phi { ring, row } => json!({"ring": p(ring), "row": p(row)}),
            Command::Orbits { ring, m } | Command::GroupTable { ring, m } => json!({"ring": p(ring), "m": m}),
            Command::NormalizePair { ring, a, b } | Command::GroupLaw { ring, a, b } | Command::HomCheck { ring, a, b } => {
                json!({"ring": p(ring), "a": p(a), "b": p(b)})
            }
            Command::LemmaWitness { ring, row, lambda, mu } => {
                json!({"ring": p(ring), "row": p(row), "lambda": o(lambda), "mu": o(mu)})
            }
            Command::PhiStep { ring, row, op } => json!({"ring": p(ring), "row": p(row), "op": p(op)}),
            Command::VerifyWitness { ring, input } => json!({"ring": p(ring), "input": p(input)}),
        }
    }
}

/// The result of one job: the report body and whether it counts as success.
pub struct Outcome {
    pub body: Value,
    pub accepted: bool,
    pub summary: String,
}

fn accepted(body: Value, summary: String) -> Outcome {
    Outcome {
        body,
        accepted: true,
        summary,
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn read_value(path: &Path) -> Result<Value> {
    read_json(path)
}

/// Use `key` from a report (top level or under `result`) if present,
/// otherwise the whole document.
fn unwrap_field<T: DeserializeOwned>(path: &Path, key: &str) -> Result<T> {
    let v = read_value(path)?;
    let found = [v.get(key), v.get("result").and_then(|r| r.get(key))]
        .into_iter()
        .flatten()
        .find(|x| !x.is_null())
        .cloned();
    let inner = found.unwrap_or(v);
    serde_json::from_value(inner).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn load_ring(path: &Path) -> Result<Ring> {
    let d: RingDescriptor = read_json(path)?;
    Ring::from_descriptor(&d)
}

fn load_row(ring: &Ring, path: &Path) -> Result<UmRow> {
    UmRow::from_json(ring, &read_json::<RowJson>(path)?)
}

fn load_matrix(ring: &Ring, path: &Path) -> Result<SqMatrix> {
    SqMatrix::from_json(ring, &read_json::<MatrixJson>(path)?)
}

fn load_elems(ring: &Ring, path: &Path) -> Result<Vec<Elem>> {
    ring.parse_all(&read_json::<Vec<String>>(path)?)
}

fn load_open(ring: &Ring, size: usize, path: &Option<PathBuf>) -> Result<OpenSet> {
    match path {
        Some(p) => OpenSet::from_json(ring, size, &read_json::<OpenSetJson>(p)?),
        None => OpenSet::all(ring, size),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn certified_value(ring: &Ring, c: &Certified) -> Value {
    let check = c.verify();
    json!({"certified": to_value(&c.to_json(ring)), "verified": check.ok, "steps": c.witness.len()})
}

/// Run one subcommand and return its report body.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let (seed, budget) = (cli.seed, cli.budget);
    match &cli.command {
        Command::Factorize { ring, matrix } => {
            let r = load_ring(ring)?;
            let g = load_matrix(&r, matrix)?;
            let ops = matrix::reduce_generic(&g)?;
            let restored = g.mul(&matrix::ops_product(&r, g.size(), &ops)?)?.is_identity();
            let body = json!({
                "ring": to_value(r.descriptor()),
                "size": g.size(),
                "op_count": ops.len(),
                "ops": ops.iter().map(|o| to_value(&o.to_json(&r))).collect::<Vec<_>>(),
                "restores_identity": restored,
            });
            Ok(Outcome {
                summary: format!("{} ops, restores identity: {restored}", ops.len()),
                body,
                accepted: restored,
            })
        }
        Command::Params { ring, matrix, t } => {
            let r = load_ring(ring)?;
            if let Some(m) = matrix {
                let g = load_matrix(&r, m)?;
                let params = matrix::matrix_to_params(&g)?;
                let schedule = RootSchedule::for_size(g.size());
                let body = json!({
                    "ring": to_value(r.descriptor()),
                    "size": g.size(),
                    "positions": schedule.positions(),
                    "t": r.format_all(&params),
                });
                return Ok(accepted(body, format!("{} parameters", params.len())));
            }
            let t = load_elems(&r, t.as_ref().expect("clap requires matrix or t"))?;
            let size = (1..=64)
                .find(|k| k * k - 1 == t.len())
                .ok_or_else(|| Error::SizeMismatch(format!("{} parameters is not (n+1)^2 - 1", t.len())))?;
            let g = matrix::params_to_matrix(&r, &RootSchedule::for_size(size), &t)?;
            let body = json!({
                "ring": to_value(r.descriptor()),
                "size": size,
                "matrix": to_value(&g.to_json(false)),
            });
            Ok(accepted(body, format!("{size}x{size} matrix")))
        }
        Command::Connect { ring, p, q, open } => {
            let r = load_ring(ring)?;
            let (pm, qm) = (load_matrix(&r, p)?, load_matrix(&r, q)?);
            let u = load_open(&r, pm.size(), open)?;
            if r.is_field() && !r.contains_infinite_field() {
                let found = path::exhaustive_path(&pm, &qm, &u)?;
                let body = json!({
                    "ring": to_value(r.descriptor()),
                    "method": "exhaustive",
                    "connected": found.is_some(),
                    "path": found.as_ref().map(|x| to_value(&x.to_json())),
                });
                return Ok(accepted(body, format!("exhaustive search, connected: {}", found.is_some())));
            }
            let found = path::connect(&pm, &qm, &u, budget, seed)?;
            let verified = found.verify(Some(&u));
            let body = json!({
                "ring": to_value(r.descriptor()),
                "method": "search",
                "connected": true,
                "steps": found.len(),
                "verified": verified,
                "path": to_value(&found.to_json()),
            });
            Ok(Outcome {
                summary: format!("path with {} steps, verified: {verified}", found.len()),
                body,
                accepted: verified,
            })
        }
        Command::VerifyPath { ring, path: file, open } => {
            let r = load_ring(ring)?;
            let pj: PathJson = unwrap_field(file, "path")?;
            let found = ElemPath::from_json(&r, &pj)?;
            let u = match open {
                Some(_) => Some(load_open(&r, found.start().size(), open)?),
                None => None,
            };
            let failure = found.first_failure(u.as_ref());
            let body = json!({
                "ring": to_value(r.descriptor()),
                "steps": found.len(),
                "valid": failure.is_none(),
                "first_failure": failure,
            });
            Ok(Outcome {
                summary: format!("valid: {}", failure.is_none()),
                body,
                accepted: failure.is_none(),
            })
        }
        Command::IsGeneric { ring, row } => {
            let r = load_ring(ring)?;
            let a = load_row(&r, row)?;
            let g = umrow::is_generic(&a)?;
            let n = a.n();
            let body = json!({
                "ring": to_value(r.descriptor()),
                "row": to_value(&a.to_json(false)),
                "product": r.format(&r.mul(a.at(n), a.at(n + 1))),
                "generic": g,
            });
            Ok(accepted(body, format!("generic: {g}")))
        }
        Command::MakeGeneric { ring, row } => {
            let r = load_ring(ring)?;
            let a = load_row(&r, row)?;
            let p = umrow::make_generic(&a, seed, budget)?;
            let body = json!({
                "ring": to_value(r.descriptor()),
                "steps": p.len(),
                "end": to_value(&p.end().to_json(false)),
                "path": to_value(&p.to_json()),
            });
            Ok(accepted(body, format!("generic after {} steps", p.len())))
        }
        Command::PrimeAvoid { ring, row } => {
            let r = load_ring(ring)?;
            let a = load_row(&r, row)?;
            let lambda = umrow::prime_avoidance_over(&r, &[], a.entries(), budget, seed)?;
            let height = umrow::shifted_height(&r, a.entries(), &lambda)?;
            let shifted: Vec<Elem> = lambda
                .iter()
                .zip(a.entries())
                .map(|(l, x)| r.add_mul(x, l, a.at(a.len())))
                .collect();
            let body = json!({
                "ring": to_value(r.descriptor()),
                "lambda": r.format_all(&lambda),
                "shifted": r.format_all(&shifted),
                "height": to_value(&height),
                "target": lambda.len(),
                "valid": height.at_least(lambda.len()),
            });
            Ok(accepted(body, format!("lambda = {:?}", r.format_all(&lambda))))
        }
        Command::Orbits { ring, m } => {
            let r = load_ring(ring)?;
            let part = wms::enumerate_orbits(&r, *m)?;
            let body = json!({
                "orbit_count": part.count(),
                "action_closed": part.is_action_closed(),
                "partition": to_value(&part.to_json()),
            });
            Ok(accepted(body, format!("{} orbits, sizes {:?}", part.count(), part.sizes())))
        }
        Command::GroupTable { ring, m } => {
            let r = load_ring(ring)?;
            let part = wms::enumerate_orbits(&r, *m)?;
            let report = wms::group_report(&part);
            let locus = if r.declared_minimal_primes().is_some() {
                Some(wms::generic_locus_report(&part)?)
            } else {
                None
            };
            let passed = report.passed() && locus.as_ref().is_none_or(|l| l.passed());
            let body = json!({
                "group": to_value(&report),
                "generic_locus": locus.as_ref().map(to_value),
                "passed": passed,
            });
            Ok(Outcome {
                summary: format!("{} classes, axioms hold: {passed}", report.orbit_count),
                body,
                accepted: passed,
            })
        }
        Command::NormalizePair { ring, a, b } | Command::GroupLaw { ring, a, b } => {
            let r = load_ring(ring)?;
            let (ra, rb) = (load_row(&r, a)?, load_row(&r, b)?);
            let norm = wms::normalize_pair(&ra, &rb, budget, seed)?;
            let mut body = json!({
                "ring": to_value(r.descriptor()),
                "a": to_value(&norm.pair.a().to_json(false)),
                "b": to_value(&norm.pair.b().to_json(false)),
                "path_a": to_value(&norm.path_a.to_json()),
                "path_b": to_value(&norm.path_b.to_json()),
            });
            let mut summary = "normalized pair found".to_string();
            if let Command::GroupLaw { .. } = cli.command {
                let c = wms::group_law(&norm.pair)?;
                summary = format!("product {:?}", c.format());
                body["product"] = to_value(&c.to_json(false));
                if r.elements().is_some() && ra.len() <= 6 {
                    let part = wms::enumerate_orbits(&r, ra.len())?;
                    body["product_class"] = to_value(&part.class_of(c.entries())?);
                }
            }
            Ok(accepted(body, summary))
        }
        Command::Phi0 { ring, row } => {
            let r = load_ring(ring)?;
            let a = load_row(&r, row)?;
            let v = euler::phi0(&a)?;
            let body = json!({
                "ring": to_value(r.descriptor()),
                "value": to_value(&v.to_json()),
                "zero": v.is_empty(),
            });
            Ok(accepted(body, format!("{} terms", v.terms.len())))
        }
        Command::Phi { ring, row } => {
            let r = load_ring(ring)?;
            let a = load_row(&r, row)?;
            let v = euler::phi(&a, seed, budget)?;
            let body = json!({
                "ring": to_value(r.descriptor()),
                "path": to_value(&v.path.to_json()),
                "generic_row": to_value(&v.generic.row.to_json(false)),
                "mu": r.format_all(&v.generic.mu),
                "value": to_value(&v.generic.value.to_json()),
            });
            Ok(accepted(body, format!("{} terms after {} steps", v.generic.value.terms.len(), v.path.len())))
        }
        Command::LemmaWitness { ring, row, lambda, mu } => {
            let r = load_ring(ring)?;
            let a = load_row(&r, row)?;
            let lambda = match lambda {
                Some(p) => load_elems(&r, p)?,
                None => euler::mu_for(&r, &euler::swap_last(a.entries()), seed)?,
            };
            let mu = match mu {
                Some(p) => load_elems(&r, p)?,
                None => euler::mu_for(&r, a.entries(), seed)?,
            };
            let c = euler::lemma_vanishing_witness(&a, &lambda, &mu)?;
            let mut body = certified_value(&r, &c);
            body["ring"] = to_value(r.descriptor());
            body["lambda"] = to_value(&r.format_all(&lambda));
            body["mu"] = to_value(&r.format_all(&mu));
            Ok(accepted(body, format!("witness with {} steps", c.witness.len())))
        }
        Command::PhiStep { ring, row, op } => {
            let r = load_ring(ring)?;
            let a = load_row(&r, row)?;
            let e = ElementaryOp::from_json(&r, &read_json::<OpJson>(op)?)?;
            let s = euler::check_phi_step(&a, &e, seed)?;
            let mut body = certified_value(&r, &s.certified);
            body["ring"] = to_value(r.descriptor());
            body["row_after"] = to_value(&s.after.row.to_json(false));
            body["mu_before"] = to_value(&r.format_all(&s.before.mu));
            body["mu_after"] = to_value(&r.format_all(&s.after.mu));
            Ok(accepted(body, format!("witness with {} steps", s.certified.witness.len())))
        }
        Command::HomCheck { ring, a, b } => {
            let r = load_ring(ring)?;
            let (ra, rb) = (load_row(&r, a)?, load_row(&r, b)?);
            let h = euler::hom_check(&ra, &rb, seed)?;
            let mut body = certified_value(&r, &h.certified);
            body["ring"] = to_value(r.descriptor());
            body["a"] = to_value(&h.a.to_json(false));
            body["b"] = to_value(&h.b.to_json(false));
            body["product"] = to_value(&h.product.to_json(false));
            Ok(accepted(body, format!("witness with {} steps", h.certified.witness.len())))
        }
        Command::VerifyWitness { ring, input } => {
            let r = load_ring(ring)?;
            let cj: CertifiedJson = unwrap_field(input, "certified")?;
            let c = Certified::from_json(&r, &cj)?;
            let check = c.verify();
            let body = json!({
                "ring": to_value(r.descriptor()),
                "ok": check.ok,
                "failed_step": check.failed_step,
                "reason": check.reason,
            });
            Ok(Outcome {
                summary: match &check.reason {
                    None => "witness verifies".into(),
                    Some(m) => format!("rejected at step {:?}: {m}", check.failed_step),
                },
                body,
                accepted: check.ok,
            })
        }
    }
}

/// Full report (body plus echoed configuration) and exit code.
pub fn report(cli: &Cli) -> (Value, i32, String) {
    let mut out = json!({
        "command": cli.command.name(),
        "seed": cli.seed,
        "budget": cli.budget,
        "inputs": cli.command.inputs(),
    });
    let (code, summary) = match execute(cli) {
        Ok(o) => {
            out["status"] = Value::from(if o.accepted { "ok" } else { "rejected" });
            out["result"] = o.body;
            (if o.accepted { 0 } else { 1 }, o.summary)
        }
        Err(e) => {
            let soft = e.is_soft();
            out["status"] = Value::from(if soft { "soft-failure" } else { "error" });
            out["error"] = json!({"kind": e.kind(), "message": e.to_string()});
            (if soft { 2 } else { 1 }, format!("{}: {e}", e.kind()))
        }
    };
    (out, code, summary)
}

/// Execute, write the report, and return the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let (value, mut code, summary) = report(cli);
    let text = serde_json::to_string_pretty(&value).expect("json values serialize") + "\n";
    match &cli.out {
        Some(p) => {
            if let Err(e) = fs::write(p, &text) {
                eprintln!("cannot write {}: {e}", p.display());
                code = 1;
            } else {
                println!("{}: {summary} (report in {})", cli.command.name(), p.display());
            }
        }
        None => print!("{text}"),
    }
    if code != 0 || cli.verbose > 0 {
        eprintln!("{}: {summary}", cli.command.name());
    }
    code
}

/// Parse arguments and run. Usage errors exit with 1 so that 2 stays
/// reserved for soft failures.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            code
        }
    }
}
