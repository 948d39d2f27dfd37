//! JSON workspace: algebras, modules, maps and tasks, validated up front.
//!
//! Rationals are JSON integers or `"p/q"` strings; floats are rejected. Matrices are
//! arrays of rows. Every diagnostic names the key path it comes from.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{Map, Value as Json};

use injstab::algebra::{presets as alg_presets, validate_algebra};
use injstab::bifunctor::{hom_space, StableMode};
use injstab::calculus::{Route, ShortExact};
use injstab::functor::{Direction, Functor};
use injstab::module::presets as mod_presets;
use injstab::zmod::{normal_form, ZFGModule};
use injstab::{Algebra, AlgebraData, Mode, Module, ModuleMap, QMatrix, Side, ZMatrix, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl std::error::Error for InputError {}

pub type Parsed<T> = std::result::Result<T, InputError>;

fn err<T>(path: &str, message: impl Into<String>) -> Parsed<T> {
    Err(InputError {
        path: path.to_string(),
        message: message.into(),
    })
}

/// One validated task, with every reference resolved.
#[derive(Clone)]
pub enum Op {
    TensorStab { a: Module, b: Module, route: Route, mode: Mode },
    TensorStabZ { a: ZFGModule, b: ZFGModule },
    Tor { a: Module, b: Module, n: usize, mode: Mode },
    Ext { m: Module, x: Module, n: usize, mode: Mode },
    Ext1Z { m: ZFGModule, n: ZFGModule },
    Hom { m: Module, x: Module },
    Transpose { a: Module, mode: Mode },
    TransposeZ { a: ZFGModule },
    Torsion { a: Module, mode: Mode },
    TorsionZ { a: ZFGModule },
    NormalFormZ { a: ZFGModule },
    RnTensor { a: Module, b: Module, n: usize, mode: Mode },
    PropertyA { f: Functor, c: Module, mode: Mode },
    Eval { f: Functor, x: Module, g: Option<ModuleMap> },
    Splice { a: Module, ses: ShortExact, tor_rows: usize, sigma_rows: usize, mode: Mode },
    Duality { a: Module, b: Module, mode: Mode },
    StableHom { b: Module, c: Module, stable: StableMode, mode: Mode },
    Resolve { m: Module, n: usize, injective: bool, mode: Mode },
    FpDefect { f: ModuleMap },
    FourTerm { f: ModuleMap, x: Module },
    EilenbergWatts { f: ModuleMap, modules: Option<Vec<Module>>, mode: Mode },
}

#[derive(Clone)]
pub struct Task {
    pub index: usize,
    pub op_name: String,
    pub op: Op,
}

#[derive(Clone, Default)]
pub struct Workspace {
    pub algebras: BTreeMap<String, Algebra>,
    pub modules: BTreeMap<String, Module>,
    pub maps: BTreeMap<String, ModuleMap>,
    pub tasks: Vec<Task>,
}

pub const OPS: &[&str] = &[
    "tensor_stab",
    "tor",
    "ext",
    "ext1",
    "hom",
    "transpose",
    "torsion",
    "normal_form",
    "rn_tensor",
    "property_a",
    "eval",
    "splice",
    "duality",
    "stable_hom",
    "resolve",
    "fp_defect",
    "four_term",
    "eilenberg_watts",
];

pub fn parse_workspace(path: &std::path::Path) -> Parsed<Workspace> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return err(&path.display().to_string(), format!("cannot read file: {e}")),
    };
    parse_workspace_str(&text)
}

pub fn parse_workspace_str(text: &str) -> Parsed<Workspace> {
    let root: Json = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => return err("$", format!("not valid JSON: {e}")),
    };
    let obj = as_object(&root, "$")?;
    for key in obj.keys() {
        if !["algebras", "modules", "maps", "tasks"].contains(&key.as_str()) {
            return err(&format!("$.{key}"), "unknown key");
        }
    }
    let mut ws = Workspace::default();
    for (i, a) in array_at(obj, "algebras", "$")?.iter().enumerate() {
        let path = format!("$.algebras[{i}]");
        let o = as_object(a, &path)?;
        let name = unique_name(&ws, o, &path)?;
        let alg = parse_algebra(o, &name, &path)?;
        ws.algebras.insert(name, alg);
    }
    for (i, m) in array_at(obj, "modules", "$")?.iter().enumerate() {
        let path = format!("$.modules[{i}]");
        let o = as_object(m, &path)?;
        let name = unique_name(&ws, o, &path)?;
        let module = parse_module(&ws, o, &name, &path)?;
        ws.modules.insert(name, module);
    }
    for (i, m) in array_at(obj, "maps", "$")?.iter().enumerate() {
        let path = format!("$.maps[{i}]");
        let o = as_object(m, &path)?;
        let name = unique_name(&ws, o, &path)?;
        let map = parse_map(&ws, o, &path)?;
        ws.maps.insert(name, map);
    }
    let tasks: Vec<Task> = array_at(obj, "tasks", "$")?
        .iter()
        .enumerate()
        .map(|(i, t)| parse_task(&ws, i, t))
        .collect::<Parsed<_>>()?;
    ws.tasks = tasks;
    Ok(ws)
}

fn as_object<'a>(v: &'a Json, path: &str) -> Parsed<&'a Map<String, Json>> {
    match v.as_object() {
        Some(o) => Ok(o),
        None => err(path, "expected an object"),
    }
}

fn array_at<'a>(o: &'a Map<String, Json>, key: &str, path: &str) -> Parsed<&'a [Json]> {
    match o.get(key) {
        None => Ok(&[]),
        Some(Json::Array(v)) => Ok(v),
        Some(_) => err(&format!("{path}.{key}"), "expected an array"),
    }
}

fn string_at(o: &Map<String, Json>, key: &str, path: &str) -> Parsed<String> {
    match o.get(key) {
        Some(Json::String(s)) => Ok(s.clone()),
        Some(_) => err(&format!("{path}.{key}"), "expected a string"),
        None => err(&format!("{path}.{key}"), "missing key"),
    }
}

fn opt_string(o: &Map<String, Json>, key: &str, path: &str) -> Parsed<Option<String>> {
    match o.get(key) {
        None => Ok(None),
        Some(_) => string_at(o, key, path).map(Some),
    }
}

fn usize_of(v: &Json, path: &str) -> Parsed<usize> {
    match v.as_u64() {
        Some(n) => Ok(n as usize),
        None => err(path, "expected a nonnegative integer"),
    }
}

fn usize_at(o: &Map<String, Json>, key: &str, path: &str, default: Option<usize>) -> Parsed<usize> {
    match (o.get(key), default) {
        (Some(v), _) => usize_of(v, &format!("{path}.{key}")),
        (None, Some(d)) => Ok(d),
        (None, None) => err(&format!("{path}.{key}"), "missing key"),
    }
}

fn unique_name(ws: &Workspace, o: &Map<String, Json>, path: &str) -> Parsed<String> {
    let name = string_at(o, "name", path)?;
    if ws.algebras.contains_key(&name) || ws.modules.contains_key(&name) || ws.maps.contains_key(&name) {
        return err(&format!("{path}.name"), format!("duplicate name {name:?}"));
    }
    Ok(name)
}

pub fn parse_q(v: &Json, path: &str) -> Parsed<Q> {
    match v {
        Json::Number(n) => match n.as_i64() {
            Some(i) => Ok(Q::from_int(i)),
            None => err(path, "floats are not accepted; write rationals as \"p/q\""),
        },
        Json::String(s) => match Q::parse(s) {
            Some(q) => Ok(q),
            None => err(path, format!("cannot parse {s:?} as a rational")),
        },
        _ => err(path, "expected a rational"),
    }
}

fn parse_q_vec(v: &Json, len: Option<usize>, path: &str) -> Parsed<Vec<Q>> {
    let Json::Array(items) = v else {
        return err(path, "expected an array of rationals");
    };
    if let Some(n) = len {
        if items.len() != n {
            return err(path, format!("expected {n} entries, found {}", items.len()));
        }
    }
    items
        .iter()
        .enumerate()
        .map(|(i, x)| parse_q(x, &format!("{path}[{i}]")))
        .collect()
}

/// A `rows × cols` matrix given as an array of rows.
pub fn parse_q_matrix(v: &Json, rows: usize, cols: usize, path: &str) -> Parsed<QMatrix> {
    let Json::Array(items) = v else {
        return err(path, "expected an array of rows");
    };
    if items.len() != rows {
        return err(path, format!("expected {rows} rows, found {}", items.len()));
    }
    let mut m = QMatrix::zeros(rows, cols);
    for (i, row) in items.iter().enumerate() {
        let r = parse_q_vec(row, Some(cols), &format!("{path}[{i}]"))?;
        for (j, x) in r.into_iter().enumerate() {
            m[(i, j)] = x;
        }
    }
    Ok(m)
}

/// An integer presentation: relations as rows, generators as columns.
pub fn parse_presentation(v: &Json, path: &str) -> Parsed<ZFGModule> {
    let Json::Array(items) = v else {
        return err(path, "expected an integer matrix (array of rows)");
    };
    let mut rows = Vec::with_capacity(items.len());
    for (i, row) in items.iter().enumerate() {
        let Json::Array(xs) = row else {
            return err(&format!("{path}[{i}]"), "expected an array of integers");
        };
        let r: Vec<i64> = xs
            .iter()
            .enumerate()
            .map(|(j, x)| match x.as_i64() {
                Some(n) => Ok(n),
                None => err(&format!("{path}[{i}][{j}]"), "expected an integer"),
            })
            .collect::<Parsed<_>>()?;
        rows.push(r);
    }
    let cols = rows.first().map_or(0, |r| r.len());
    if let Some(i) = rows.iter().position(|r| r.len() != cols) {
        return err(&format!("{path}[{i}]"), format!("expected {cols} entries"));
    }
    Ok(normal_form(&ZMatrix::from_i64_shaped(cols, &rows)))
}

fn parse_side(s: &str, path: &str) -> Parsed<Side> {
    match s {
        "right" => Ok(Side::Right),
        "left" => Ok(Side::Left),
        _ => err(path, format!("side must be \"left\" or \"right\", found {s:?}")),
    }
}

fn algebra_preset(v: &Json, path: &str) -> Parsed<Algebra> {
    let (kind, o) = match v {
        Json::String(s) => (s.clone(), None),
        Json::Object(o) => (string_at(o, "kind", path)?, Some(o)),
        _ => return err(path, "expected a preset name or object"),
    };
    match kind.as_str() {
        "truncated_polynomial" => {
            let Some(o) = o else {
                return err(path, "truncated_polynomial needs \"n\"");
            };
            let n = usize_at(o, "n", path, None)?;
            if n == 0 {
                return err(&format!("{path}.n"), "n must be positive");
            }
            Ok(alg_presets::truncated_polynomial(n))
        }
        "upper_triangular_2" => Ok(alg_presets::upper_triangular_2()),
        "ground_field" => Ok(alg_presets::ground_field()),
        "product" => {
            let Some(o) = o else {
                return err(path, "product needs \"factors\"");
            };
            let factors = array_at(o, "factors", path)?;
            if factors.len() < 2 {
                return err(&format!("{path}.factors"), "a product needs at least two factors");
            }
            let mut acc = algebra_preset(&factors[0], &format!("{path}.factors[0]"))?;
            for (i, f) in factors.iter().enumerate().skip(1) {
                let next = algebra_preset(f, &format!("{path}.factors[{i}]"))?;
                acc = alg_presets::product(&acc, &next);
            }
            Ok(acc)
        }
        other => err(&format!("{path}.kind"), format!("unknown algebra preset {other:?}")),
    }
}

fn parse_algebra(o: &Map<String, Json>, name: &str, path: &str) -> Parsed<Algebra> {
    if let Some(p) = o.get("preset") {
        return algebra_preset(p, &format!("{path}.preset"));
    }
    let Some(c) = o.get("structure_constants") else {
        return err(path, "expected \"preset\" or \"structure_constants\"");
    };
    let cpath = format!("{path}.structure_constants");
    let Json::Array(slabs) = c else {
        return err(&cpath, "expected a cube of rationals");
    };
    let d = slabs.len();
    let mut cube = Vec::with_capacity(d);
    for (i, slab) in slabs.iter().enumerate() {
        let Json::Array(rows) = slab else {
            return err(&format!("{cpath}[{i}]"), "expected an array");
        };
        if rows.len() != d {
            return err(&format!("{cpath}[{i}]"), format!("expected {d} rows"));
        }
        let rows: Vec<Vec<Q>> = rows
            .iter()
            .enumerate()
            .map(|(j, r)| parse_q_vec(r, Some(d), &format!("{cpath}[{i}][{j}]")))
            .collect::<Parsed<_>>()?;
        cube.push(rows);
    }
    let Some(u) = o.get("unit") else {
        return err(&format!("{path}.unit"), "missing key");
    };
    let unit = parse_q_vec(u, Some(d), &format!("{path}.unit"))?;
    let data = AlgebraData {
        name: name.to_string(),
        c: cube,
        unit,
    };
    validate_algebra(data).or_else(|e| err(path, e.to_string()))
}

fn lookup_algebra<'a>(ws: &'a Workspace, o: &Map<String, Json>, path: &str) -> Parsed<&'a Algebra> {
    let name = string_at(o, "algebra", path)?;
    match ws.algebras.get(&name) {
        Some(a) => Ok(a),
        None => err(&format!("{path}.algebra"), format!("unknown algebra {name:?}")),
    }
}

fn parse_module(ws: &Workspace, o: &Map<String, Json>, name: &str, path: &str) -> Parsed<Module> {
    let alg = lookup_algebra(ws, o, path)?;
    let side = parse_side(&string_at(o, "side", path)?, &format!("{path}.side"))?;
    if let Some(p) = o.get("preset") {
        let ppath = format!("{path}.preset");
        let (kind, j) = match p {
            Json::String(s) => (s.clone(), o.get("j")),
            Json::Object(po) => (string_at(po, "kind", &ppath)?, po.get("j")),
            _ => return err(&ppath, "expected a preset name or object"),
        };
        let m = match kind.as_str() {
            "regular" => mod_presets::regular(alg, side),
            "simple_top" => mod_presets::simple_top(alg, side),
            "dual_regular" => mod_presets::dual_regular(alg, side),
            "radical_layer" => {
                let Some(j) = j else {
                    return err(&ppath, "radical_layer needs \"j\"");
                };
                mod_presets::radical_layer(alg, side, usize_of(j, &format!("{ppath}.j"))?)
            }
            other => return err(&ppath, format!("unknown module preset {other:?}")),
        };
        return Ok(m.with_label(name));
    }
    let Some(Json::Array(acts)) = o.get("action") else {
        return err(&format!("{path}.action"), "expected \"preset\" or an array of action matrices");
    };
    let dim = match o.get("dim") {
        Some(v) => usize_of(v, &format!("{path}.dim"))?,
        None => match acts.first() {
            Some(Json::Array(rows)) => rows.len(),
            _ => return err(&format!("{path}.dim"), "cannot infer the dimension"),
        },
    };
    let action: Vec<QMatrix> = acts
        .iter()
        .enumerate()
        .map(|(i, a)| parse_q_matrix(a, dim, dim, &format!("{path}.action[{i}]")))
        .collect::<Parsed<_>>()?;
    Module::new(alg, side, dim, action, name).or_else(|e| err(path, e.to_string()))
}

fn parse_map(ws: &Workspace, o: &Map<String, Json>, path: &str) -> Parsed<ModuleMap> {
    let from = string_at(o, "from", path)?;
    let to = string_at(o, "to", path)?;
    let dom = resolve_module(ws, &from, None, &format!("{path}.from"))?;
    let cod = resolve_module(ws, &to, Some(dom.side()), &format!("{path}.to"))?;
    let Some(m) = o.get("matrix") else {
        return err(&format!("{path}.matrix"), "missing key");
    };
    let matrix = parse_q_matrix(m, cod.dim(), dom.dim(), &format!("{path}.matrix"))?;
    ModuleMap::new(&dom, &cod, matrix).or_else(|e| err(path, e.to_string()))
}

/// Same action matrices read on the other side; only sound over commutative algebras.
fn flip_side(m: &Module, side: Side) -> Option<Module> {
    if m.side() == side {
        return Some(m.clone());
    }
    if !m.algebra().is_commutative() {
        return None;
    }
    Module::new(m.algebra(), side, m.dim(), m.action().to_vec(), m.label()).ok()
}

/// A declared module, or an algebra name read as its regular module.
pub fn resolve_module(ws: &Workspace, name: &str, side: Option<Side>, path: &str) -> Parsed<Module> {
    let m = if let Some(m) = ws.modules.get(name) {
        m.clone()
    } else if let Some(a) = ws.algebras.get(name) {
        Module::regular(a, side.unwrap_or(Side::Right)).with_label(name)
    } else {
        return err(path, format!("unknown module {name:?}"));
    };
    match side {
        None => Ok(m),
        Some(s) => match flip_side(&m, s) {
            Some(m) => Ok(m),
            None => err(
                path,
                format!("{name:?} is a {} module, a {} module is required", m.side().as_str(), s.as_str()),
            ),
        },
    }
}

fn resolve_map(ws: &Workspace, name: &str, path: &str) -> Parsed<ModuleMap> {
    match ws.maps.get(name) {
        Some(f) => Ok(f.clone()),
        None => err(path, format!("unknown map {name:?}")),
    }
}

fn module_at(
    ws: &Workspace,
    o: &Map<String, Json>,
    key: &str,
    side: Option<Side>,
    path: &str,
) -> Parsed<Module> {
    let name = string_at(o, key, path)?;
    resolve_module(ws, &name, side, &format!("{path}.{key}"))
}

fn mode_at(o: &Map<String, Json>, path: &str) -> Parsed<Mode> {
    match opt_string(o, "mode", path)?.as_deref() {
        None | Some("minimal") => Ok(Mode::Minimal),
        Some("free") => Ok(Mode::Free),
        Some(other) => err(&format!("{path}.mode"), format!("mode must be \"minimal\" or \"free\", found {other:?}")),
    }
}

fn is_z(o: &Map<String, Json>, path: &str) -> Parsed<bool> {
    match opt_string(o, "backend", path)?.as_deref() {
        None | Some("Q") => Ok(false),
        Some("Z") => Ok(true),
        Some(other) => err(&format!("{path}.backend"), format!("backend must be \"Q\" or \"Z\", found {other:?}")),
    }
}

fn presentation_at(o: &Map<String, Json>, key: &str, path: &str) -> Parsed<ZFGModule> {
    match o.get(key) {
        Some(v) => parse_presentation(v, &format!("{path}.{key}")),
        None => err(&format!("{path}.{key}"), "missing key"),
    }
}

fn parse_functor(ws: &Workspace, v: &Json, mode: Mode, path: &str) -> Parsed<Functor> {
    let o = as_object(v, path)?;
    let dir = |o: &Map<String, Json>| -> Parsed<Direction> {
        match opt_string(o, "dir", path)?.as_deref() {
            None | Some("right") => Ok(Direction::Right),
            Some("left") => Ok(Direction::Left),
            Some(other) => err(&format!("{path}.dir"), format!("dir must be \"left\" or \"right\", found {other:?}")),
        }
    };
    let wrap = |r: injstab::Result<Functor>| r.or_else(|e| err(path, e.to_string()));
    if o.contains_key("tensor") {
        let a = module_at(ws, o, "tensor", None, path)?;
        Ok(Functor::tensor(&a, mode))
    } else if o.contains_key("hom") {
        let a = module_at(ws, o, "hom", None, path)?;
        Ok(Functor::hom(&a))
    } else if o.contains_key("fp") {
        let f = resolve_map(ws, &string_at(o, "fp", path)?, &format!("{path}.fp"))?;
        Ok(Functor::fp(&f))
    } else if o.contains_key("tor") {
        let a = module_at(ws, o, "tor", None, path)?;
        let n = usize_at(o, "n", path, Some(1))?;
        Ok(Functor::tor(&a, n, mode))
    } else if let Some(inner) = o.get("satellite") {
        let f = parse_functor(ws, inner, mode, &format!("{path}.satellite"))?;
        wrap(f.satellite(dir(o)?, mode))
    } else if let Some(inner) = o.get("cosatellite") {
        let f = parse_functor(ws, inner, mode, &format!("{path}.cosatellite"))?;
        wrap(f.cosatellite(dir(o)?, mode))
    } else if let Some(inner) = o.get("inj_stab") {
        let f = parse_functor(ws, inner, mode, &format!("{path}.inj_stab"))?;
        wrap(f.inj_stab(mode))
    } else if let Some(inner) = o.get("proj_stab") {
        let f = parse_functor(ws, inner, mode, &format!("{path}.proj_stab"))?;
        wrap(f.proj_stab(mode))
    } else {
        err(
            path,
            "expected one of tensor, hom, fp, tor, satellite, cosatellite, inj_stab, proj_stab",
        )
    }
}

/// Coefficient vectors tried when inferring maps: unit vectors first, then small
/// integer combinations in lexicographic order.
fn candidate_coefficients(n: usize, limit: usize) -> Vec<Vec<Q>> {
    let mut out: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect();
    const VALUES: [i64; 4] = [0, 1, -1, 2];
    let mut digits = vec![0usize; n];
    while out.len() < limit && n > 0 {
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < VALUES.len() {
                break;
            }
            digits[k] = 0;
        }
        if digits.iter().filter(|&&d| d != 0).count() > 1 {
            out.push(digits.iter().map(|&d| Q::from_int(VALUES[d])).collect());
        }
    }
    out
}

const SES_SEARCH_LIMIT: usize = 256;

/// Deterministic search for `0 → B' → B → B'' → 0` on the given terms.
pub fn infer_ses(left: &Module, middle: &Module, right: &Module) -> Option<ShortExact> {
    if left.dim() + right.dim() != middle.dim() {
        return None;
    }
    let ha = hom_space(left, middle).ok()?;
    let hb = hom_space(middle, right).ok()?;
    let betas: Vec<ModuleMap> = candidate_coefficients(hb.dim(), SES_SEARCH_LIMIT)
        .iter()
        .map(|c| hb.map(c))
        .filter(|b| b.is_epi())
        .collect();
    for c in candidate_coefficients(ha.dim(), SES_SEARCH_LIMIT) {
        let alpha = ha.map(&c);
        if !alpha.is_mono() {
            continue;
        }
        for beta in &betas {
            if beta.after(&alpha).is_zero() {
                if let Ok(s) = ShortExact::new(alpha.clone(), beta.clone()) {
                    return Some(s);
                }
            }
        }
    }
    if left.dim() == 0 || right.dim() == 0 {
        // one of the maps is forced to be zero and the other an isomorphism
        let alpha = ModuleMap::zero(left, middle);
        let beta = ModuleMap::zero(middle, right);
        if left.dim() == 0 {
            return hom_space(middle, right)
                .ok()
                .and_then(|h| candidate_coefficients(h.dim(), SES_SEARCH_LIMIT).iter().map(|c| h.map(c)).find(|b| b.is_epi() && b.is_mono()))
                .and_then(|b| ShortExact::new(alpha, b).ok());
        }
        return hom_space(left, middle)
            .ok()
            .and_then(|h| candidate_coefficients(h.dim(), SES_SEARCH_LIMIT).iter().map(|c| h.map(c)).find(|a| a.is_epi() && a.is_mono()))
            .and_then(|a| ShortExact::new(a, beta).ok());
    }
    None
}

fn parse_ses(ws: &Workspace, o: &Map<String, Json>, side: Side, path: &str) -> Parsed<ShortExact> {
    let spath = format!("{path}.ses");
    match o.get("ses") {
        Some(Json::Array(terms)) => {
            if terms.len() != 3 {
                return err(&spath, "expected three module names [B', B, B'']");
            }
            let mods: Vec<Module> = terms
                .iter()
                .enumerate()
                .map(|(i, t)| match t.as_str() {
                    Some(n) => resolve_module(ws, n, Some(side), &format!("{spath}[{i}]")),
                    None => err(&format!("{spath}[{i}]"), "expected a module name"),
                })
                .collect::<Parsed<_>>()?;
            match infer_ses(&mods[0], &mods[1], &mods[2]) {
                Some(s) => Ok(s),
                None => err(&spath, "no short exact sequence with these terms was found"),
            }
        }
        Some(Json::Object(so)) => {
            let alpha = resolve_map(ws, &string_at(so, "alpha", &spath)?, &format!("{spath}.alpha"))?;
            let beta = resolve_map(ws, &string_at(so, "beta", &spath)?, &format!("{spath}.beta"))?;
            if alpha.dom.side() != side {
                return err(&spath, format!("the sequence must consist of {} modules", side.as_str()));
            }
            ShortExact::new(alpha, beta).or_else(|e| err(&spath, e.to_string()))
        }
        _ => err(&spath, "expected [B', B, B''] or {\"alpha\": .., \"beta\": ..}"),
    }
}

fn parse_task(ws: &Workspace, index: usize, v: &Json) -> Parsed<Task> {
    let path = format!("$.tasks[{index}]");
    let o = as_object(v, &path)?;
    let op_name = string_at(o, "op", &path)?;
    let p = path.as_str();
    let mode = mode_at(o, p)?;
    let z = is_z(o, p)?;
    let z_only = |op: &str| err(p, format!("op {op:?} has no Z backend"));
    let op = match op_name.as_str() {
        "tensor_stab" if z => Op::TensorStabZ {
            a: presentation_at(o, "A", p)?,
            b: presentation_at(o, "B", p)?,
        },
        "tensor_stab" => {
            let a = module_at(ws, o, "A", Some(Side::Right), p).or_else(|_| module_at(ws, o, "A", None, p))?;
            let b = module_at(ws, o, "B", Some(a.side().opposite()), p)?;
            let route = match opt_string(o, "route", p)? {
                None => Route::All,
                Some(s) => match Route::parse(&s) {
                    Some(r) => r,
                    None => return err(&format!("{p}.route"), format!("unknown route {s:?}")),
                },
            };
            Op::TensorStab { a, b, route, mode }
        }
        "tor" | "rn_tensor" | "duality" if z => return z_only(&op_name),
        "tor" | "rn_tensor" | "duality" => {
            let a = module_at(ws, o, "A", Some(Side::Right), p).or_else(|_| module_at(ws, o, "A", None, p))?;
            let b = module_at(ws, o, "B", Some(a.side().opposite()), p)?;
            match op_name.as_str() {
                "tor" => Op::Tor { a, b, n: usize_at(o, "n", p, Some(1))?, mode },
                "rn_tensor" => Op::RnTensor { a, b, n: usize_at(o, "n", p, Some(1))?, mode },
                _ => Op::Duality { a, b, mode },
            }
        }
        "ext" | "ext1" if z => Op::Ext1Z {
            m: presentation_at(o, "M", p)?,
            n: presentation_at(o, "N", p)?,
        },
        "ext" | "ext1" | "hom" => {
            let m = module_at(ws, o, "M", None, p)?;
            let x = module_at(ws, o, "X", Some(m.side()), p)?;
            match op_name.as_str() {
                "hom" => Op::Hom { m, x },
                "ext1" => Op::Ext { m, x, n: 1, mode },
                _ => Op::Ext { m, x, n: usize_at(o, "n", p, Some(1))?, mode },
            }
        }
        "transpose" if z => Op::TransposeZ { a: presentation_at(o, "presentation", p)? },
        "transpose" => Op::Transpose { a: module_at(ws, o, "A", None, p)?, mode },
        "torsion" if z => Op::TorsionZ { a: presentation_at(o, "presentation", p)? },
        "torsion" => Op::Torsion { a: module_at(ws, o, "A", None, p)?, mode },
        "normal_form" => Op::NormalFormZ { a: presentation_at(o, "presentation", p)? },
        _ if z => return z_only(&op_name),
        "property_a" | "eval" => {
            let Some(fv) = o.get("functor") else {
                return err(&format!("{p}.functor"), "missing key");
            };
            let f = parse_functor(ws, fv, mode, &format!("{p}.functor"))?;
            if op_name == "property_a" {
                let c = module_at(ws, o, "C", Some(f.side()), p)?;
                Op::PropertyA { f, c, mode }
            } else {
                let x = module_at(ws, o, "X", Some(f.side()), p)?;
                let g = match opt_string(o, "map", p)? {
                    None => None,
                    Some(n) => {
                        let g = resolve_map(ws, &n, &format!("{p}.map"))?;
                        if g.dom.side() != f.side() {
                            return err(&format!("{p}.map"), "map lives on the wrong side for this functor");
                        }
                        Some(g)
                    }
                };
                Op::Eval { f, x, g }
            }
        }
        "splice" => {
            let a = module_at(ws, o, "A", Some(Side::Right), p).or_else(|_| module_at(ws, o, "A", None, p))?;
            let ses = parse_ses(ws, o, a.side().opposite(), p)?;
            Op::Splice {
                a,
                ses,
                tor_rows: usize_at(o, "tor_rows", p, Some(1))?,
                sigma_rows: usize_at(o, "sigma_rows", p, Some(1))?,
                mode,
            }
        }
        "stable_hom" => {
            let b = module_at(ws, o, "B", None, p)?;
            let c = module_at(ws, o, "C", Some(b.side()), p)?;
            let stable = match opt_string(o, "modulo", p)?.as_deref() {
                None | Some("injectives") => StableMode::ModInjectives,
                Some("projectives") => StableMode::ModProjectives,
                Some(other) => {
                    return err(&format!("{p}.modulo"), format!("expected \"injectives\" or \"projectives\", found {other:?}"))
                }
            };
            Op::StableHom { b, c, stable, mode }
        }
        "resolve" => {
            let injective = match opt_string(o, "kind", p)?.as_deref() {
                None | Some("projective") => false,
                Some("injective") => true,
                Some(other) => {
                    return err(&format!("{p}.kind"), format!("expected \"projective\" or \"injective\", found {other:?}"))
                }
            };
            Op::Resolve {
                m: module_at(ws, o, "M", None, p)?,
                n: usize_at(o, "n", p, Some(3))?,
                injective,
                mode,
            }
        }
        "fp_defect" | "four_term" | "eilenberg_watts" => {
            let f = resolve_map(ws, &string_at(o, "f", p)?, &format!("{p}.f"))?;
            let side = f.dom.side();
            match op_name.as_str() {
                "fp_defect" => Op::FpDefect { f },
                "four_term" => Op::FourTerm { x: module_at(ws, o, "X", Some(side), p)?, f },
                _ => {
                    let modules = match o.get("modules") {
                        None => None,
                        Some(_) => Some(
                            array_at(o, "modules", p)?
                                .iter()
                                .enumerate()
                                .map(|(i, n)| {
                                    let ip = format!("{p}.modules[{i}]");
                                    match n.as_str() {
                                        Some(n) => resolve_module(ws, n, Some(side), &ip),
                                        None => err(&ip, "expected a module name"),
                                    }
                                })
                                .collect::<Parsed<Vec<_>>>()?,
                        ),
                    };
                    Op::EilenbergWatts { f, modules, mode }
                }
            }
        }
        other => {
            return err(
                &format!("{p}.op"),
                format!("unknown op {other:?}; expected one of {}", OPS.join(", ")),
            )
        }
    };
    Ok(Task { index, op_name, op })
}
