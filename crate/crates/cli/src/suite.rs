//! Randomized property battery behind `injstab check`.

use serde::Serialize;

use injstab::algebra::presets::{ground_field, product, truncated_polynomial, upper_triangular_2};
use injstab::bifunctor::{hom_space, stable_hom, tor, StableMode};
use injstab::calculus::{
    duality_check, half_exact_at, inj_stab_tensor, rn_tensor, splice_sequence, tensor_stab,
    torsion_matches_definition, Route, ShortExact,
};
use injstab::fp::{
    battery, defect_and_stability, eilenberg_watts, four_term_check, indecomposable_injectives,
    indecomposable_projectives, nat_hom, r0_dim, simples, FpPresentation,
};
use injstab::functor::{Direction, Functor};
use injstab::random::{
    random_fp, random_int_matrix, random_module, random_right_exact_fp, random_ses, rng,
    SampleRng,
};
use injstab::resolution::{cosyzygy, transpose};
use injstab::zmod::{classical_torsion, normal_form, tensor_stab_z, torsion_z, ZFGModule};
use injstab::{Algebra, Mode, Module, Side};

pub const MAX_DIM_LIMIT: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub samples: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub samples: usize,
    pub max_dim: usize,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let w = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = format!(
            "injstab {} check  seed={} samples={} max_dim={}\n",
            self.version, self.seed, self.samples, self.max_dim
        );
        for c in &self.checks {
            out.push_str(&format!(
                "{:<w$}  {}  samples={} failures={}\n",
                c.name,
                if c.pass { "PASS" } else { "FAIL" },
                c.samples,
                c.failures
            ));
            if let Some(ce) = &c.counterexample {
                out.push_str(&format!("    counterexample: {ce}\n"));
            }
        }
        out
    }
}

/// Collects outcomes and keeps the smallest failing sample.
struct Tracker {
    name: String,
    samples: usize,
    failures: usize,
    smallest: Option<(usize, String)>,
}

impl Tracker {
    fn new(name: &str) -> Tracker {
        Tracker {
            name: name.into(),
            samples: 0,
            failures: 0,
            smallest: None,
        }
    }

    fn record(&mut self, ok: bool, size: usize, describe: impl FnOnce() -> String) {
        self.samples += 1;
        if !ok {
            self.failures += 1;
            if self.smallest.as_ref().is_none_or(|(s, _)| size < *s) {
                self.smallest = Some((size, describe()));
            }
        }
    }

    fn result<T>(&mut self, r: injstab::Result<T>, size: usize, what: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.record(false, size, || format!("{}: {e}", what()));
                None
            }
        }
    }

    fn finish(self) -> Check {
        Check {
            name: self.name,
            pass: self.failures == 0 && self.samples > 0,
            samples: self.samples,
            failures: self.failures,
            counterexample: self.smallest.map(|s| s.1),
        }
    }
}

pub fn describe(m: &Module) -> String {
    let acts: Vec<String> = m.action().iter().map(|a| format!("{a:?}")).collect();
    format!(
        "{} over {} ({} side, dim {}) action {}",
        m.label(),
        m.algebra().name(),
        m.side().as_str(),
        m.dim(),
        acts.join(" ")
    )
}

/// Preset algebras named in the acceptance criteria.
pub fn core_algebras() -> Vec<Algebra> {
    vec![
        truncated_polynomial(2),
        truncated_polynomial(3),
        truncated_polynomial(4),
        upper_triangular_2(),
    ]
}

/// Core algebras plus the ground field and a product.
pub fn all_algebras() -> Vec<Algebra> {
    let mut v = core_algebras();
    v.push(ground_field());
    v.push(product(&truncated_polynomial(2), &ground_field()));
    v
}

fn sub_seed(seed: u64, tag: u64) -> SampleRng {
    rng(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(tag))
}

/// A right module `A` and a left module `B` over the same algebra.
#[derive(Clone)]
pub struct Pair {
    pub a: Module,
    pub b: Module,
}

impl Pair {
    fn size(&self) -> usize {
        self.a.dim() + self.b.dim()
    }

    fn describe(&self) -> String {
        format!("A = {}; B = {}", describe(&self.a), describe(&self.b))
    }
}

fn named_modules(alg: &Algebra, side: Side) -> Vec<Module> {
    let mut v = simples(alg, side);
    v.extend(indecomposable_projectives(alg, side));
    v.extend(indecomposable_injectives(alg, side));
    v
}

/// Structured pairs over the core algebras plus `random` random pairs of dim ≤ `max_dim`.
pub fn sample_pairs(seed: u64, random: usize, max_dim: usize) -> Vec<Pair> {
    let mut out = Vec::new();
    for alg in core_algebras() {
        for a in named_modules(&alg, Side::Right) {
            for b in named_modules(&alg, Side::Left) {
                out.push(Pair { a: a.clone(), b });
            }
        }
    }
    let algs = all_algebras();
    let mut r = sub_seed(seed, 2);
    for i in 0..random {
        let alg = &algs[i % algs.len()];
        let a = random_module(&mut r, alg, Side::Right, max_dim);
        let b = random_module(&mut r, alg, Side::Left, max_dim);
        out.push(Pair { a, b });
    }
    out
}

pub fn criterion_1() -> Check {
    let mut t = Tracker::new("1 worked example over Q[x]/(x^2)");
    let alg = truncated_polynomial(2);
    let kr = injstab::module::presets::simple_top(&alg, Side::Right);
    let kl = injstab::module::presets::simple_top(&alg, Side::Left);
    let lam = Module::regular(&alg, Side::Left);
    let f = Functor::tensor(&kr, Mode::Minimal);
    let g = f.inj_stab(Mode::Minimal).expect("depth 1");
    let run = || -> injstab::Result<Vec<(bool, String)>> {
        let fk = g.eval_obj(&kl)?.dimension;
        let fl = g.eval_obj(&lam)?.dimension;
        let (inj, iota, _, _) = cosyzygy(&kl, Mode::Minimal);
        let vk = f.value(&kl)?;
        let vi = f.value(&inj.module)?;
        let one_iota = f.map_between(&iota, &vk, &vi)?;
        let (_, epi) = lam.quotient(alg.radical(), "k");
        let fe = g.eval_map(&epi)?;
        Ok(vec![
            (fk == 1, format!("dim F̄(k) = {fk}")),
            (fl == 0, format!("dim F̄(Λ) = {fl}")),
            (vk.dim() == 1 && one_iota.is_zero(), "1 ⊗ ι is not zero".into()),
            (fe.rank() < fk, "F̄ preserves the epi Λ → k".into()),
        ])
    };
    match run() {
        Ok(items) => {
            for (ok, msg) in items {
                t.record(ok, 0, || msg);
            }
        }
        Err(e) => t.record(false, 0, || e.to_string()),
    }
    t.finish()
}

pub fn criterion_2(pairs: &[Pair]) -> Check {
    let mut t = Tracker::new("2 three-route agreement");
    for p in pairs {
        let r = tensor_stab(&p.a, &p.b, Route::All, Mode::Minimal);
        if let Some(r) = t.result(r, p.size(), || p.describe()) {
            t.record(r.routes.len() == 3, p.size(), || p.describe());
        }
    }
    t.finish()
}

pub fn criterion_3(pairs: &[Pair]) -> Check {
    let mut t = Tracker::new("3 choice independence (minimal vs free)");
    for p in pairs {
        let min = tensor_stab(&p.a, &p.b, Route::All, Mode::Minimal);
        let free = tensor_stab(&p.a, &p.b, Route::All, Mode::Free);
        let (Some(min), Some(free)) = (
            t.result(min, p.size(), || p.describe()),
            t.result(free, p.size(), || p.describe()),
        ) else {
            continue;
        };
        let same_dims = min.routes == free.routes;
        let same_space = match (&min.subspace, &free.subspace) {
            (Some(x), Some(y)) => x.same_subspace(y),
            _ => false,
        };
        t.record(same_dims && same_space, p.size(), || p.describe());
    }
    t.finish()
}

pub fn criterion_4(seed: u64, per_algebra: usize, max_dim: usize) -> Check {
    let mut t = Tracker::new("4 splice exactness (2 Tor rows + 3 sigma rows)");
    let mut r = sub_seed(seed, 4);
    for alg in all_algebras() {
        for _ in 0..per_algebra {
            let a = random_module(&mut r, &alg, Side::Right, max_dim);
            let ses = random_ses(&mut r, &alg, Side::Left, max_dim);
            let size = a.dim() + ses.middle().dim();
            let desc = || {
                format!(
                    "A = {}; B' = {}; B = {}; B'' = {}",
                    describe(&a),
                    describe(ses.left()),
                    describe(ses.middle()),
                    describe(ses.right())
                )
            };
            let s = splice_sequence(&a, &ses, 2, 3, Mode::Minimal);
            if let Some(s) = t.result(s, size, desc) {
                t.record(s.all_exact(), size, || format!("{s:?}"));
            }
        }
    }
    t.finish()
}

pub fn criterion_5(seed: u64, per_algebra: usize, max_dim: usize) -> Check {
    let mut t = Tracker::new("5 defect laws for f.p. functors");
    let mut r = sub_seed(seed, 5);
    for alg in all_algebras() {
        let mods = battery(&alg, Side::Right, &mut r, max_dim.min(5));
        for _ in 0..per_algebra {
            let f = random_fp(&mut r, &alg, Side::Right, max_dim);
            let fp = FpPresentation::new(&f);
            let size = f.dom.dim() + f.cod.dim();
            let desc = || format!("f: {} -> {} matrix {:?}", describe(&f.dom), describe(&f.cod), f.matrix);
            if let Some(d) = t.result(defect_and_stability(&fp), size, desc) {
                t.record(d.stable == d.vanishes_on_injectives, size, desc);
            }
            let fbar = fp.functor().inj_stab(Mode::Minimal).expect("depth 1");
            for x in &mods {
                let ok = (|| -> injstab::Result<bool> {
                    let four = four_term_check(&fp, x)?;
                    let r0 = r0_dim(&fp, x, Mode::Minimal)?;
                    let hw = hom_space(&fp.defect, x)?.dim();
                    let f0 = four.dims[0] == fbar.eval_obj(x)?.dimension;
                    Ok(four.exact && r0 == hw && f0)
                })();
                let ok = t.result(ok, size + x.dim(), desc).unwrap_or(true);
                t.record(ok, size + x.dim(), || format!("{}; X = {}", desc(), describe(x)));
            }
        }
    }
    t.finish()
}

pub fn criterion_6(seed: u64, count: usize) -> Check {
    let mut t = Tracker::new("6 torsion over Z");
    let mut r = sub_seed(seed, 6);
    for _ in 0..count {
        let m = random_int_matrix(&mut r, 6, 6, 20);
        let a = normal_form(&m);
        let ts = tensor_stab_z(&a, &ZFGModule::free(1));
        let tz = torsion_z(&a).module;
        let cl = classical_torsion(&a);
        let ok = ts == tz && tz == cl && ts.torsion_summands() == a.factors.len();
        t.record(ok, m.rows() * m.cols(), || {
            format!("presentation {m:?}: tensor_stab {ts}, torsion {tz}, classical {cl}")
        });
    }
    t.finish()
}

pub fn criterion_7(pairs: &[Pair]) -> Check {
    let mut t = Tracker::new("7 duality formula");
    for p in pairs {
        let d = duality_check(&p.a, &p.b, Mode::Minimal);
        if let Some(d) = t.result(d, p.size(), || p.describe()) {
            t.record(d.iso && d.lhs_dim == d.rhs_dim, p.size(), || p.describe());
        }
    }
    t.finish()
}

pub fn criterion_8(pairs: &[Pair]) -> Check {
    let mut t = Tracker::new("8 derived identifications");
    for p in pairs {
        for n in 0..=3 {
            let r = rn_tensor(&p.a, &p.b, n, Mode::Minimal);
            if let Some(r) = t.result(r, p.size(), || format!("n = {n}; {}", p.describe())) {
                t.record(r.dim == r.ext_dim, p.size(), || p.describe());
            }
        }
        // underline-Hom(A, X) against Tor₁(Tr A, X) with X = D(B) on the side of A
        let x = p.b.dual();
        let ok = (|| -> injstab::Result<bool> {
            let st = stable_hom(&p.a, &x, StableMode::ModProjectives, Mode::Minimal)?;
            let tr = transpose(&p.a, Mode::Minimal);
            Ok(st.dim() == tor(&tr.tr, &x, 1, Mode::Minimal)?.dim())
        })();
        if let Some(ok) = t.result(ok, p.size(), || p.describe()) {
            t.record(ok, p.size(), || format!("stable Hom vs Tor_1(Tr A, -): {}", p.describe()));
        }
    }
    t.finish()
}

pub fn criterion_9(seed: u64, max_dim: usize) -> Check {
    let mut t = Tracker::new("9 vanishing laws");
    let mut r = sub_seed(seed, 9);
    for alg in all_algebras() {
        let rights = battery(&alg, Side::Right, &mut r, max_dim);
        let lefts = battery(&alg, Side::Left, &mut r, max_dim);
        let projs_r = indecomposable_projectives(&alg, Side::Right);
        let projs_l = indecomposable_projectives(&alg, Side::Left);
        let injs_l = indecomposable_injectives(&alg, Side::Left);
        let check = |t: &mut Tracker, r: injstab::Result<usize>, what: &dyn Fn() -> String| {
            if let Some(d) = t.result(r, 0, what) {
                t.record(d == 0, 0, what);
            }
        };
        for p in &projs_r {
            for b in &lefts {
                check(&mut t, inj_stab_tensor(p, b, Mode::Minimal).map(|s| s.dimension), &|| {
                    format!("projective A: {}; B = {}", describe(p), describe(b))
                });
            }
        }
        for a in &rights {
            for i in &injs_l {
                check(&mut t, inj_stab_tensor(a, i, Mode::Minimal).map(|s| s.dimension), &|| {
                    format!("injective B: A = {}; {}", describe(a), describe(i))
                });
            }
        }
        for a in &lefts {
            let h = Functor::hom(a).inj_stab(Mode::Minimal).expect("depth 1");
            for x in &lefts {
                check(&mut t, h.eval_obj(x).map(|s| s.dimension), &|| {
                    format!("Hom stabilization: A = {}; X = {}", describe(a), describe(x))
                });
            }
        }
        for a in &rights {
            let fs = [Functor::tensor(a, Mode::Minimal), Functor::tor(a, 1, Mode::Minimal)];
            for f in fs.iter().chain(std::iter::once(&Functor::hom(&a.dual()))) {
                let up = f.satellite(Direction::Right, Mode::Minimal).expect("depth 1");
                let down = f.satellite(Direction::Left, Mode::Minimal).expect("depth 1");
                for i in &injs_l {
                    check(&mut t, up.eval_obj(i).map(|s| s.dimension), &|| {
                        format!("S^1 {f:?} at injective {}", describe(i))
                    });
                }
                for p in &projs_l {
                    check(&mut t, down.eval_obj(p).map(|s| s.dimension), &|| {
                        format!("S_1 {f:?} at projective {}", describe(p))
                    });
                }
            }
        }
    }
    t.finish()
}

pub fn criterion_10(seed: u64, count: usize, max_dim: usize) -> Check {
    let mut t = Tracker::new("10 Eilenberg-Watts counit");
    let mut r = sub_seed(seed, 10);
    let algs = all_algebras();
    for i in 0..2 * count {
        let alg = &algs[i % algs.len()];
        let right_exact = i >= count;
        let f = if right_exact {
            random_right_exact_fp(&mut r, alg, Side::Right)
        } else {
            random_fp(&mut r, alg, Side::Right, max_dim)
        };
        let fp = FpPresentation::new(&f);
        let mut mods = vec![Module::regular(alg, Side::Right).with_label("Λ")];
        mods.extend(battery(alg, Side::Right, &mut r, max_dim.min(5)));
        let nproj = 1 + indecomposable_projectives(alg, Side::Right).len();
        let size = f.dom.dim() + f.cod.dim();
        let desc = || {
            format!(
                "{}f: {} -> {} matrix {:?}",
                if right_exact { "right exact " } else { "" },
                describe(&f.dom),
                describe(&f.cod),
                f.matrix
            )
        };
        if let Some(ew) = t.result(eilenberg_watts(&fp, &mods, Mode::Minimal), size, desc) {
            for (k, row) in ew.rows.iter().enumerate() {
                let need_iso = right_exact || k < nproj;
                let ok = row.f0_dim == row.proj_stab_dim && (!need_iso || row.iso);
                t.record(ok, size, || format!("{}; at {}: {row:?}", desc(), row.label));
            }
        }
    }
    t.finish()
}

/// Byte-level determinism of the report for a fixed seed.
pub fn criterion_11(seed: u64, samples: usize, max_dim: usize) -> Check {
    let mut t = Tracker::new("11 determinism of check reports");
    let a = run_checks(seed, samples, max_dim).to_json();
    let b = run_checks(seed, samples, max_dim).to_json();
    t.record(a == b, 0, || "reports differ between runs".into());
    t.finish()
}

pub fn property_checks(seed: u64, samples: usize, max_dim: usize) -> Vec<Check> {
    let mut half = Tracker::new("half-exactness of the stabilized tensor");
    let mut idem = Tracker::new("stabilization is idempotent");
    let mut sat = Tracker::new("S^1 S_1 F agrees with the stabilization");
    let mut tors = Tracker::new("torsion submodule equals the stabilized tensor at Λ");
    let mut nat = Tracker::new("no maps from stable f.p. functors to representables");
    let mut right = Tracker::new("right exactness criterion on samples");
    let mut func = Tracker::new("functoriality of evaluation");
    let mut r = sub_seed(seed, 12);
    for alg in all_algebras() {
        let lefts = battery(&alg, Side::Left, &mut r, max_dim);
        for _ in 0..samples.div_ceil(5) {
            let a = random_module(&mut r, &alg, Side::Right, max_dim);
            let f = Functor::tensor(&a, Mode::Minimal);
            let g = f.inj_stab(Mode::Minimal).expect("depth 1");
            let gg = g.inj_stab(Mode::Minimal).expect("depth 2");
            let s = f
                .satellite(Direction::Left, Mode::Minimal)
                .and_then(|x| x.satellite(Direction::Right, Mode::Minimal))
                .expect("depth 2");
            let mut seqs: Vec<ShortExact> =
                (0..3).map(|_| random_ses(&mut r, &alg, Side::Left, max_dim)).collect();
            let mut all_prop_a = true;
            for b in &lefts {
                let (_, iota, sigma, pi) = cosyzygy(b, Mode::Minimal);
                seqs.push(ShortExact::new(iota, pi).expect("cosyzygy sequence"));
                all_prop_a &= f.property_a(&sigma, Mode::Minimal).unwrap_or(false);
                let d1 = g.eval_obj(b).map(|x| x.dimension);
                let d2 = gg.eval_obj(b).map(|x| x.dimension);
                let d3 = s.eval_obj(b).map(|x| x.dimension);
                let desc = || format!("A = {}; B = {}", describe(&a), describe(b));
                if let (Some(d1), Some(d2), Some(d3)) = (
                    idem.result(d1.clone(), 0, desc),
                    idem.result(d2, 0, desc),
                    sat.result(d3, 0, desc),
                ) {
                    idem.record(d1 == d2, a.dim() + b.dim(), desc);
                    sat.record(d1 == d3, a.dim() + b.dim(), desc);
                }
                let id = injstab::ModuleMap::identity(b);
                let ok = g.eval_map(&id).map(|m| m == injstab::QMatrix::identity(m.rows()));
                if let Some(ok) = func.result(ok, 0, desc) {
                    func.record(ok, a.dim() + b.dim(), desc);
                }
            }
            let mut epis_preserved = true;
            for ses in &seqs {
                let desc = || format!("A = {}; ses middle {}", describe(&a), describe(ses.middle()));
                if let Some(ok) = half.result(half_exact_at(&a, ses, Mode::Minimal), 0, desc) {
                    half.record(ok, a.dim() + ses.middle().dim(), desc);
                }
                let vb = g.value(ses.middle());
                let vc = g.value(ses.right());
                if let (Ok(vb), Ok(vc)) = (vb, vc) {
                    let m = g.map_between(&ses.beta, &vb, &vc);
                    if let Ok(m) = m {
                        epis_preserved &= m.rank() == vc.dim();
                    }
                }
            }
            right.record(all_prop_a == epis_preserved, a.dim(), || {
                format!("A = {}: property A {all_prop_a}, epis preserved {epis_preserved}", describe(&a))
            });
            let ok = torsion_matches_definition(&a, Mode::Minimal);
            if let Some(ok) = tors.result(ok, a.dim(), || describe(&a)) {
                tors.record(ok, a.dim(), || describe(&a));
            }
        }
        for _ in 0..samples.div_ceil(5) {
            let f = random_fp(&mut r, &alg, Side::Left, max_dim);
            let f0 = FpPresentation::new(&f).f0();
            for c in lefts.iter().take(4) {
                let d = nat_hom(&f0, &Functor::hom(c)).map(|s| s.dimension);
                let desc = || format!("f: {} -> {}; C = {}", describe(&f.dom), describe(&f.cod), describe(c));
                if let Some(d) = nat.result(d, 0, desc) {
                    nat.record(d == 0, f.dom.dim() + c.dim(), desc);
                }
            }
        }
    }
    vec![
        half.finish(),
        idem.finish(),
        sat.finish(),
        tors.finish(),
        nat.finish(),
        right.finish(),
        func.finish(),
    ]
}

/// Every check except the determinism self-test.
pub fn run_checks(seed: u64, samples: usize, max_dim: usize) -> SuiteReport {
    let pairs = sample_pairs(seed, samples, max_dim);
    let per_alg = (samples * 2).div_ceil(5);
    let mut checks = vec![
        criterion_1(),
        criterion_2(&pairs),
        criterion_3(&pairs),
        criterion_4(seed, per_alg, max_dim),
        criterion_5(seed, samples, max_dim),
        criterion_6(seed, 2 * samples),
        criterion_7(&pairs),
        criterion_8(&pairs),
        criterion_9(seed, max_dim),
        criterion_10(seed, per_alg, max_dim),
    ];
    checks.extend(property_checks(seed, samples, max_dim));
    SuiteReport {
        tool: "injstab".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed,
        samples,
        max_dim,
        checks,
    }
}

pub fn check_suite(seed: u64, samples: usize, max_dim: usize) -> Result<SuiteReport, String> {
    if samples == 0 {
        return Err("--samples must be at least 1".into());
    }
    if max_dim == 0 || max_dim > MAX_DIM_LIMIT {
        return Err(format!("--max-dim must be between 1 and {MAX_DIM_LIMIT}"));
    }
    Ok(run_checks(seed, samples, max_dim))
}
