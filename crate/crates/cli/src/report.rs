//! Task execution and the JSON / text reports.

use serde::Serialize;
use serde_json::{json, Value as Json};

use injstab::bifunctor::{ext, hom_space, stable_hom, tor};
use injstab::calculus::{
    duality_check, rn_tensor, splice_sequence, tensor_stab, torsion_matches_definition,
    torsion_submodule,
};
use injstab::fp::{
    battery, defect_and_stability, eilenberg_watts, four_term_check, FpPresentation,
};
use injstab::random::rng;
use injstab::resolution::{resolve_injective, resolve_projective, transpose};
use injstab::zmod::{ext1_z, tensor_stab_z, torsion_z, transpose_z, ZFGModule};
use injstab::{Error, Module, QMatrix};

use crate::workspace::{Op, Task, Workspace};

pub const TOOL: &str = "injstab";
pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    /// a verdict that must hold came out false
    Failed,
    /// computational error, recorded and skipped
    Error,
    /// internal disagreement between independent computations; the run stops here
    Aborted,
}

#[derive(Clone, Debug, Serialize)]
pub struct TaskReport {
    pub index: usize,
    pub op: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Json>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub schema: u32,
    pub seed: u64,
    pub tasks: Vec<TaskReport>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// 0 when every task succeeded, 1 on a failed verdict, an abort, or (strict) an error.
    pub fn exit_code(&self, strict: bool) -> i32 {
        let bad = self.tasks.iter().any(|t| match t.status {
            Status::Ok => false,
            Status::Error => strict,
            Status::Failed | Status::Aborted => true,
        });
        i32::from(bad)
    }

    pub fn to_text(&self) -> String {
        let rows: Vec<[String; 4]> = self
            .tasks
            .iter()
            .map(|t| {
                let detail = match (&t.result, &t.error) {
                    (Some(r), _) => flatten(r),
                    (None, Some(e)) => e.clone(),
                    (None, None) => String::new(),
                };
                [
                    t.index.to_string(),
                    t.op.clone(),
                    serde_json::to_value(t.status)
                        .ok()
                        .and_then(|v| v.as_str().map(String::from))
                        .unwrap_or_default(),
                    detail,
                ]
            })
            .collect();
        let header = ["#".to_string(), "op".into(), "status".into(), "result".into()];
        let mut w = [0usize; 3];
        for r in std::iter::once(&header).chain(rows.iter()) {
            for k in 0..3 {
                w[k] = w[k].max(r[k].chars().count());
            }
        }
        let mut out = format!(
            "{TOOL} {} run  seed={} schema={}\n",
            self.version, self.seed, self.schema
        );
        for r in std::iter::once(&header).chain(rows.iter()) {
            out.push_str(&format!(
                "{:>w0$}  {:<w1$}  {:<w2$}  {}\n",
                r[0],
                r[1],
                r[2],
                r[3],
                w0 = w[0],
                w1 = w[1],
                w2 = w[2]
            ));
        }
        out
    }
}

/// `key=value` pairs in key order; nested values printed as compact JSON.
fn flatten(v: &Json) -> String {
    match v {
        Json::Object(o) => o
            .iter()
            .map(|(k, x)| match x {
                Json::String(s) => format!("{k}={s}"),
                other => format!("{k}={other}"),
            })
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    }
}

fn matrix_json(m: &QMatrix) -> Json {
    Json::Array(
        (0..m.rows())
            .map(|i| Json::Array(m.row(i).iter().map(|x| Json::String(x.to_string())).collect()))
            .collect(),
    )
}

/// Basis vectors (columns of `m`) as a list of coordinate lists.
fn basis_json(m: &QMatrix) -> Json {
    matrix_json(&m.transpose())
}

fn z_json(m: &ZFGModule) -> Json {
    json!({
        "module": m.to_string(),
        "rank": m.rank,
        "factors": m.factors.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
    })
}

enum Outcome {
    Ok(Json),
    Failed(Json),
}

fn verdict(ok: bool, v: Json) -> Outcome {
    if ok {
        Outcome::Ok(v)
    } else {
        Outcome::Failed(v)
    }
}

fn execute(op: &Op, seed: u64) -> injstab::Result<Outcome> {
    Ok(match op {
        Op::TensorStab { a, b, route, mode } => {
            let r = tensor_stab(a, b, *route, *mode)?;
            let routes: serde_json::Map<String, Json> =
                r.routes.iter().map(|(k, d)| (k.as_str().to_string(), json!(d))).collect();
            let mut v = json!({
                "dim": r.dim,
                "routes": routes,
                "agree": true,
                "mode": mode.as_str(),
            });
            if let Some(s) = &r.subspace {
                v["basis"] = basis_json(&s.basis_witness);
            }
            Outcome::Ok(v)
        }
        Op::TensorStabZ { a, b } => Outcome::Ok(z_json(&tensor_stab_z(a, b))),
        Op::Tor { a, b, n, mode } => Outcome::Ok(json!({ "n": n, "dim": tor(a, b, *n, *mode)?.dim() })),
        Op::Ext { m, x, n, mode } => Outcome::Ok(json!({ "n": n, "dim": ext(m, x, *n, *mode)?.dim() })),
        Op::Ext1Z { m, n } => Outcome::Ok(z_json(&ext1_z(m, n))),
        Op::Hom { m, x } => Outcome::Ok(json!({ "dim": hom_space(m, x)?.dim() })),
        Op::Transpose { a, mode } => {
            let t = transpose(a, *mode);
            Outcome::Ok(json!({
                "dim": t.tr.dim(),
                "a_star_dim": t.a_star.dim(),
                "p0_star_dim": t.p0_star.dim(),
                "p1_star_dim": t.p1_star.dim(),
            }))
        }
        Op::TransposeZ { a } => Outcome::Ok(z_json(&transpose_z(a))),
        Op::Torsion { a, mode } => {
            let (t, incl) = torsion_submodule(a)?;
            let agrees = torsion_matches_definition(a, *mode)?;
            verdict(
                agrees,
                json!({
                    "dim": t.dim(),
                    "basis": basis_json(&incl.matrix),
                    "matches_definition": agrees,
                }),
            )
        }
        Op::TorsionZ { a } => Outcome::Ok(z_json(&torsion_z(a).module)),
        Op::NormalFormZ { a } => Outcome::Ok(z_json(a)),
        Op::RnTensor { a, b, n, mode } => {
            let r = rn_tensor(a, b, *n, *mode)?;
            Outcome::Ok(json!({ "n": n, "dim": r.dim, "ext_dim": r.ext_dim }))
        }
        Op::PropertyA { f, c, mode } => {
            let holds = f.property_a(c, *mode)?;
            Outcome::Ok(json!({ "functor": format!("{f:?}"), "holds": holds }))
        }
        Op::Eval { f, x, g } => {
            let mut v = json!({ "functor": format!("{f:?}"), "dim": f.eval_obj(x)?.dimension });
            if let Some(g) = g {
                v["map_rank"] = json!(f.eval_map(g)?.rank());
            }
            Outcome::Ok(v)
        }
        Op::Splice {
            a,
            ses,
            tor_rows,
            sigma_rows,
            mode,
        } => {
            let s = splice_sequence(a, ses, *tor_rows, *sigma_rows, *mode)?;
            let terms: Vec<Json> = s
                .terms
                .iter()
                .map(|t| json!({ "term": t.label, "dim": t.dim }))
                .collect();
            verdict(
                s.all_exact(),
                json!({
                    "dims": s.dims(),
                    "terms": terms,
                    "complex": s.complex,
                    "exact": s.exact,
                    "all_exact": s.all_exact(),
                }),
            )
        }
        Op::Duality { a, b, mode } => {
            let d = duality_check(a, b, *mode)?;
            verdict(
                d.iso,
                json!({ "lhs_dim": d.lhs_dim, "rhs_dim": d.rhs_dim, "iso": d.iso }),
            )
        }
        Op::StableHom { b, c, stable, mode } => {
            let s = stable_hom(b, c, *stable, *mode)?;
            Outcome::Ok(json!({
                "dim": s.dim(),
                "hom_dim": s.hom.dim(),
                "ideal_dim": s.ideal.rank(),
            }))
        }
        Op::Resolve { m, n, injective, mode } => {
            let dims: Vec<usize> = if *injective {
                let r = resolve_injective(m, *n, *mode);
                (0..r.len()).map(|j| r.inj(j).module.dim()).collect()
            } else {
                let r = resolve_projective(m, *n, *mode);
                (0..r.len()).map(|i| r.p(i).dim()).collect()
            };
            Outcome::Ok(json!({
                "kind": if *injective { "injective" } else { "projective" },
                "dims": dims,
            }))
        }
        Op::FpDefect { f } => {
            let fp = FpPresentation::new(f);
            let d = defect_and_stability(&fp)?;
            verdict(
                d.stable == d.vanishes_on_injectives,
                json!({
                    "defect_dim": d.defect_dim,
                    "stable": d.stable,
                    "vanishes_on_injectives": d.vanishes_on_injectives,
                }),
            )
        }
        Op::FourTerm { f, x } => {
            let t = four_term_check(&FpPresentation::new(f), x)?;
            verdict(t.exact, json!({ "dims": t.dims, "exact": t.exact }))
        }
        Op::EilenbergWatts { f, modules, mode } => {
            let fp = FpPresentation::new(f);
            let mods = match modules {
                Some(m) => m.clone(),
                None => {
                    let (alg, side) = (f.dom.algebra(), f.dom.side());
                    let mut v = vec![Module::regular(alg, side).with_label("Λ")];
                    v.extend(battery(alg, side, &mut rng(seed), 4));
                    v
                }
            };
            let ew = eilenberg_watts(&fp, &mods, *mode)?;
            let rows: Vec<Json> = ew
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "module": r.label,
                        "f_dim": r.f_dim,
                        "source_dim": r.source_dim,
                        "f0_dim": r.f0_dim,
                        "f1_dim": r.f1_dim,
                        "proj_stab_dim": r.proj_stab_dim,
                        "iso": r.iso,
                    })
                })
                .collect();
            // the kernel of the counit is always the projective stabilization
            let consistent = ew.rows.iter().all(|r| r.f0_dim == r.proj_stab_dim);
            verdict(consistent, json!({ "f_lambda_dim": ew.f_lambda.dim(), "rows": rows }))
        }
    })
}

/// Runs the tasks in index order. A consistency failure stops the run; with
/// `strict`, so does any other error.
pub fn run_tasks(ws: &Workspace, seed: u64, strict: bool) -> Report {
    let mut tasks = Vec::with_capacity(ws.tasks.len());
    for Task { index, op_name, op } in &ws.tasks {
        let (status, result, error) = match execute(op, seed) {
            Ok(Outcome::Ok(v)) => (Status::Ok, Some(v), None),
            Ok(Outcome::Failed(v)) => (Status::Failed, Some(v), None),
            Err(e @ Error::Consistency(_)) => (Status::Aborted, None, Some(e.to_string())),
            Err(e) => (Status::Error, None, Some(e.to_string())),
        };
        let stop = status == Status::Aborted || (strict && status != Status::Ok);
        tasks.push(TaskReport {
            index: *index,
            op: op_name.clone(),
            status,
            result,
            error,
        });
        if stop {
            break;
        }
    }
    Report {
        tool: TOOL.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        schema: REPORT_SCHEMA,
        seed,
        tasks,
    }
}
