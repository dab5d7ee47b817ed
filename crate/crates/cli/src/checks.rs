//! Named verification suites. Every check is exact; a failure carries the first witness found.

use chiral_tduality::cdr::{topological_table, Cdr};
use chiral_tduality::coeffring::{BasePatch, CoefficientForm};
use chiral_tduality::exotic::{hm_differential, ExoticForm, ExoticPatch};
use chiral_tduality::sample::{Sampler, Shape};
use chiral_tduality::tduality::{DualityPair, TauConvention, TrivialHomotopy};
use chiral_tduality::twisted::{BundleScene, ConcreteModel, TwistedPatch};
use chiral_tduality::vertex::{GenId, LambdaPoly, Letter, Monomial, State, VertexAlgebra};
use chiral_tduality::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }

    pub fn verdict(&self) -> &'static str {
        if self.passed {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

/// Which algebra a command acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Which {
    #[default]
    Cdr,
    Twisted,
    Exotic,
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub scene: BundleScene,
    pub seed: u64,
    pub samples: usize,
    pub weight_cap: u32,
    pub conv: TauConvention,
    pub algebra: Which,
    /// Perturb one declared bracket of `algebra` before `check opes`.
    pub mutate: Option<usize>,
}

impl Settings {
    pub fn new(scene: BundleScene) -> Self {
        let weight_cap = scene.caps.weight;
        Settings { scene, seed: 7, samples: 200, weight_cap, conv: TauConvention::Phi, algebra: Which::Cdr, mutate: None }
    }

    pub fn shape(&self) -> Shape {
        Shape { max_len: 3, max_weight: self.weight_cap, max_phase: self.scene.caps.fourier.min(2) }
    }

    fn sampler(&self, salt: u64) -> Sampler {
        Sampler::new(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    fn mutation(&self, which: Which) -> Option<usize> {
        self.mutate.filter(|_| self.algebra == which)
    }
}

/// First failing item becomes the witness; otherwise report the count.
fn sweep<T>(name: &str, items: impl IntoIterator<Item = T>, mut test: impl FnMut(&T) -> Option<String>) -> Check {
    let mut n = 0;
    for item in items {
        n += 1;
        if let Some(w) = test(&item) {
            return Check::new(name, false, w);
        }
    }
    Check::new(name, true, format!("n={n}"))
}

fn lift(f: impl Fn(&State) -> State, p: &LambdaPoly) -> LambdaPoly {
    LambdaPoly::from_coeffs((0..=p.degree().unwrap_or(0)).map(|k| f(&p.coeff(k))).collect())
}

fn gens(a: &VertexAlgebra) -> Vec<State> {
    (0..a.generators().len() as GenId).map(State::gen).collect()
}

/// Copy of `alg` with a multiple of the vacuum added to the constant term of its `n`-th declared bracket.
pub fn mutated(alg: &VertexAlgebra, n: usize) -> VertexAlgebra {
    let mut out = alg.clone();
    let mut keys: Vec<(GenId, GenId)> = alg.table().map(|(k, _)| *k).collect();
    keys.sort();
    if keys.is_empty() {
        return out;
    }
    let (a, b) = keys[n % keys.len()];
    let mut p = alg.declared(a, b).cloned().unwrap_or_else(LambdaPoly::zero);
    // never cancel the entry: an absent entry falls back to its skew partner
    let c = p.coeff(0).coefficient(&Monomial::vacuum());
    let bump = if c == -Q::from_integer(1) { 2 } else { 1 };
    p.add_at(0, &State::vacuum(), Q::from_integer(bump));
    out.set_bracket(a, b, p);
    out
}

fn consistency(name: &str, a: &VertexAlgebra, phases: &[i32]) -> Check {
    let report = a.check_consistency(phases);
    match report.first_witness() {
        Some(w) => Check::new(name, false, w.to_string()),
        None => Check::new(name, true, format!("n={}", report.checked)),
    }
}

/// OPEs of `L, J, G, Q` on the plain patch of dimension `rank`.
pub fn topological(rank: usize) -> Check {
    let cdr = Cdr::new(BasePatch::standard(rank));
    topological_in(&format!("opes.topological.rank{rank}"), &cdr, cdr.algebra())
}

fn topological_in(name: &str, cdr: &Cdr, a: &VertexAlgebra) -> Check {
    let fields = cdr.named_fields();
    let get = |n: &str| fields.iter().find(|(k, _)| *k == n).map(|(_, s)| s.clone()).unwrap();
    sweep(name, topological_table(cdr), |e| {
        let got: Vec<(usize, State)> = a.ope(&get(e.left), &get(e.right)).into_iter().map(|(k, s)| (k + 1, s)).collect();
        let mut want = e.poles.clone();
        want.sort_by_key(|(k, _)| *k);
        (got != want).then(|| format!("{}(z){}(w): got {}", e.left, e.right, a.show_ope(&get(e.left), &get(e.right), &[])))
    })
}

pub fn opes(s: &Settings) -> Vec<Check> {
    let mut out = Vec::new();

    let cdr = Cdr::new(s.scene.patch().clone());
    let a = s.mutation(Which::Cdr).map(|n| mutated(cdr.algebra(), n)).unwrap_or_else(|| (**cdr.algebra()).clone());
    out.push(consistency("opes.cdr.consistency", &a, &[]));
    out.push(topological_in("opes.cdr.topological", &cdr, &a));

    let tw = TwistedPatch::new(&s.scene);
    let model = ConcreteModel::new(&s.scene);
    let hom = tw.realization(&model);
    let a = s.mutation(Which::Twisted).map(|n| mutated(tw.algebra(), n)).unwrap_or_else(|| (**tw.algebra()).clone());
    out.push(consistency("opes.twisted.consistency", &a, &[1, -2]));
    let conc = model.algebra();
    let mut fields = gens(&a);
    fields.extend([-1, 2].map(|k| a.phase_state(k)));
    let pairs: Vec<(State, State)> = fields.iter().flat_map(|x| fields.iter().map(move |y| (x.clone(), y.clone()))).collect();
    out.push(sweep("opes.twisted.free-fields", &pairs, |(x, y)| {
        let got = lift(|v| hom.apply(v), &a.bracket(x, y));
        (got != conc.bracket(&hom.apply(x), &hom.apply(y))).then(|| format!("[{} lambda {}]", a.show(x), a.show(y)))
    }));

    let pair = DualityPair::new(&s.scene);
    let ex = pair.exotic();
    let a = s.mutation(Which::Exotic).map(|n| mutated(ex.algebra(), n)).unwrap_or_else(|| (**ex.algebra()).clone());
    out.push(consistency("opes.exotic.consistency", &a, &[1, -2]));
    out.push(transport("opes.exotic.transport", &pair, &a));
    out.push(relations(s, ex, &a));
    out
}

/// Brackets in `a` of images under phi against images of twisted brackets.
fn transport(name: &str, pair: &DualityPair, a: &VertexAlgebra) -> Check {
    let tw = pair.twisted().algebra();
    let mut fields = gens(tw);
    fields.extend([-1, 2].map(|k| tw.phase_state(k)));
    let pairs: Vec<(&State, &State)> = fields.iter().flat_map(|x| fields.iter().map(move |y| (x, y))).collect();
    sweep(name, pairs, |(x, y)| {
        let want = lift(|v| pair.phi(v), &tw.bracket(x, y));
        (a.bracket(&pair.phi(x), &pair.phi(y)) != want).then(|| format!("[phi({}) lambda phi({})]", tw.show(x), tw.show(y)))
    })
}

/// Normally ordered relations among forms and vector fields on the exotic side.
fn relations(s: &Settings, ex: &ExoticPatch, a: &VertexAlgebra) -> Check {
    let ids = ex.ids().clone();
    let m = s.scene.dim();
    let mut sm = s.sampler(1);
    let poly = s.scene.caps.poly_degree.min(3);
    sweep("opes.exotic.relations", 0..20, |_| {
        let g = sm.form_of_degree(m, 0, poly);
        let h = sm.form_of_degree(m, 0, 2);
        let nu = sm.form_of_degree(m, 1, 2);
        let om = sm.form_of_degree(m, 1, 2);
        let i = sm.rng_index(m);
        let f = |w: &CoefficientForm| ex.form(w);
        if a.nprod(&f(&g), &f(&h)) != f(&g.wedge(&h)) || a.nprod(&f(&nu), &f(&om)) != f(&nu.wedge(&om)) {
            return Some(format!("forms: {}", g.display(s.scene.patch())));
        }
        let mut chain = State::zero();
        for j in 0..m {
            chain += &a.nprod(&f(&g.partial(j)), &State::letter(Letter::new(ids.x[j], 1)));
        }
        if a.translate(&f(&g)) != chain {
            return Some(format!("chain rule: {}", g.display(s.scene.patch())));
        }
        let lie_gx = a.nprod(&f(&g.d()), &State::gen(ids.iota[i])) + a.nprod(&f(&g), &State::gen(ids.lie[i]));
        let iota_gx = a.nprod(&f(&g), &State::gen(ids.iota[i]));
        let gx = |w: &CoefficientForm| g.wedge(&w.contract_coord(i));
        for w in [&h, &om] {
            let lie_w = gx(&w.d()) + gx(w).d();
            if a.product(0, &lie_gx, &f(w)) != f(&lie_w) || !a.product(1, &lie_gx, &f(w)).is_zero() || a.product(0, &iota_gx, &f(w)) != f(&gx(w)) {
                return Some(format!("vector fields: g = {}, w = {}", g.display(s.scene.patch()), w.display(s.scene.patch())));
            }
        }
        None
    })
}

pub fn d2(s: &Settings) -> Vec<Check> {
    let mut out = Vec::new();
    let shape = s.shape();

    let cdr = Cdr::new(s.scene.patch().clone());
    let a = cdr.algebra();
    let mut xs = gens(a);
    xs.extend(s.sampler(2).monomials(a, shape, s.samples));
    out.push(sweep("d2.cdr.square", &xs, |x| (!cdr.d(&cdr.d(x)).is_zero()).then(|| a.show(x))));
    out.push(sweep("d2.cdr.homotopy", &xs, |x| {
        (cdr.d(&cdr.g0(x)) + cdr.g0(&cdr.d(x)) != cdr.l0(x)).then(|| format!("[D, G0] != L0 on {}", a.show(x)))
    }));

    let tw = TwistedPatch::new(&s.scene);
    let a = tw.algebra();
    let mut xs = gens(a);
    xs.extend([-2, -1, 1, 2].map(|n| a.phase_state(n)));
    xs.extend(s.sampler(3).monomials(a, shape, s.samples));
    out.push(sweep("d2.twisted", &xs, |x| {
        (!tw.d(&tw.d(x)).is_zero() || !tw.d_h(&tw.d_h(x)).is_zero()).then(|| a.show(x))
    }));

    let ex = ExoticPatch::new(&s.scene);
    let a = ex.algebra();
    let square = |x: &State| (!ex.apply_full(&ex.apply_full(x)).is_zero()).then(|| format!("D^2({}) != 0", a.show(x)));
    let mut words = gens(a);
    words.extend([-2, -1, 1, 2].map(|n| a.phase_state(n)));
    out.push(sweep("d2.exotic.generators", &words, |x| square(x)));
    let g = gens(a);
    let mut pairs: Vec<State> = g.iter().flat_map(|x| g.iter().map(move |y| a.nprod(x, y))).collect();
    pairs.extend(g.iter().map(|x| a.nprod(x, &a.phase_state(1))));
    out.push(sweep("d2.exotic.words", &pairs, |x| square(x)));
    let samples = s.sampler(4).monomials(a, shape, s.samples);
    out.push(sweep("d2.exotic.samples", &samples, |x| square(x)));
    out.push(sweep("d2.exotic.filtration", &samples, |x| {
        let dx = ex.apply_full(x);
        if ex.weight_bound(&dx) > ex.weight_bound(x) {
            return Some(format!("weight grows on {}", a.show(x)));
        }
        match (a.parity(x), dx.is_zero()) {
            (Some(p), false) if a.parity(&dx) != Some(!p) => Some(format!("parity kept on {}", a.show(x))),
            _ => None,
        }
    }));
    out.push(identities(&ex));
    out
}

/// Intermediate identities of the square-zero argument.
fn identities(ex: &ExoticPatch) -> Check {
    let a = ex.algebra();
    let ids = ex.ids().clone();
    let hh2 = ex.form(&ex.scene().hhat2());
    let gamma = State::gen(ids.gamma);
    let (ahat, iahat) = (State::gen(ids.connection), State::gen(ids.contraction));
    let mut cases: Vec<(String, State, State)> = vec![
        ("(D_Der)^2 GammaA".into(), ex.apply_der(&ex.apply_der(&gamma)), -a.translate(&hh2)),
        (
            "(D_NDer D_H + D_H D_NDer) GammaA".into(),
            ex.apply_nder(&ex.apply_hhat(&gamma)) + ex.apply_hhat(&ex.apply_nder(&gamma)),
            a.translate(&hh2),
        ),
        (
            "quasi-associativity".into(),
            a.nprod(&a.nprod(&ahat, &hh2), &iahat) - a.nprod(&ahat, &a.nprod(&hh2, &iahat)),
            a.translate(&hh2),
        ),
    ];
    for n in [-2, -1, 1, 2] {
        let sn = a.phase_state(n);
        cases.push((format!("(D_Der)^2 s({n})"), ex.apply_der(&ex.apply_der(&sn)), a.nprod(&hh2, &sn).scale(Q::from_integer(n as i128))));
    }
    sweep("d2.exotic.identities", cases, |(what, got, want)| (got != want).then(|| format!("{what}: {}", a.show(got))))
}

pub fn untwist(s: &Settings) -> Vec<Check> {
    let tw = TwistedPatch::new(&s.scene);
    let flat = TwistedPatch::new(&s.scene.untwisted());
    let u = tw.untwist(&flat);
    let (a, b) = (flat.algebra(), tw.algebra());
    let g = gens(a);
    let pairs: Vec<(&State, &State)> = g.iter().flat_map(|x| g.iter().map(move |y| (x, y))).collect();
    let opes = sweep("untwist.opes", &pairs, |(x, y)| {
        (lift(|v| u.apply(v), &a.bracket(x, y)) != b.bracket(&u.apply(x), &u.apply(y))).then(|| format!("[{} lambda {}]", a.show(x), a.show(y)))
    });
    let mut xs = g.clone();
    xs.extend(s.sampler(5).monomials(a, s.shape(), s.samples.min(100)));
    let diff = sweep("untwist.differential", &xs, |x| (u.apply(&flat.d(x)) != tw.d(&u.apply(x))).then(|| a.show(x)));
    vec![opes, diff]
}

/// Contracting homotopies, run on the trivial bundle over the scene's patch.
pub fn homotopy(s: &Settings) -> Vec<Check> {
    let patch = s.scene.patch().clone();
    let m = patch.dim();
    let zero = || CoefficientForm::zero(m);
    let trivial = BundleScene::new(patch, zero(), zero(), zero()).expect("zero fluxes close").with_caps(s.scene.caps);
    let h = TrivialHomotopy::new(&trivial).expect("trivial scene");
    let (tw, ex) = (h.twisted().algebra(), h.exotic().algebra());
    let mut out = Vec::new();

    let mut xs = gens(ex);
    xs.extend(s.sampler(6).monomials(ex, s.shape(), s.samples));
    out.push(sweep("homotopy.exotic", &xs, |x| (h.commutator(x) != h.weight(x)).then(|| ex.show(x))));

    let mut ys = gens(tw);
    ys.extend(s.sampler(7).monomials(tw, s.shape(), s.samples));
    out.push(sweep("homotopy.twisted", &ys, |x| (h.twisted_commutator(x) != h.twisted_weight(x)).then(|| tw.show(x))));

    let mut sm = s.sampler(8);
    let mut closed = Vec::new();
    for _ in 0..10_000 {
        if closed.len() == 50 {
            break;
        }
        let b = sm.monomial(ex, s.shape());
        let a = h.exotic().apply_full(&b);
        if !a.is_zero() && h.exotic().weight_bound(&b) > 0 {
            closed.push(a);
        }
    }
    let found = closed.len();
    let mut exact = sweep("homotopy.exact", &closed, |a| match h.certify_exact(a) {
        Some(p) if h.exotic().apply_full(&p) == **a => None,
        _ => Some(format!("no primitive for {}", ex.show(a))),
    });
    if found < 50 {
        exact = Check::new("homotopy.exact", false, format!("only {found} closed states sampled"));
    }
    out.push(exact);

    let pair = DualityPair::new(&trivial);
    let mut sm = s.sampler(9);
    let mut triples = Vec::new();
    while triples.len() < 20 {
        let l1 = sm.form_of_degree(m, 1, 3);
        let n = sm.rng_range(-3, 3);
        if n != 0 && !l1.d().is_zero() {
            triples.push((l1.d().scale(Q::new(1, n as i128)), l1, n));
        }
    }
    out.push(sweep("homotopy.classical", &triples, |(l0, l1, n)| match pair.classical_exactness(l0, l1, *n, s.conv) {
        Ok(c) if pair.twisted().d_h(&c.primitive) == c.omega && pair.exotic().apply_full(&c.tau_image).is_zero() => None,
        Ok(c) => Some(format!("primitive {} fails", tw.show(&c.primitive))),
        Err(e) => Some(e.to_string()),
    }));
    out
}

/// `:w0 e^{n theta}: + :A w1 e^{n theta}:` on the twisted side.
pub fn twisted_form(tw: &TwistedPatch, w0: &CoefficientForm, w1: &CoefficientForm, n: i32) -> State {
    let a = tw.algebra();
    let e = a.phase_state(n);
    a.nprod(&tw.form(w0), &e) + a.nprod(&a.nprod(&State::gen(tw.ids().connection), &tw.form(w1)), &e)
}

pub fn roundtrip(s: &Settings) -> Vec<Check> {
    let mut out = Vec::new();
    let conv = s.conv;
    let pair = DualityPair::new(&s.scene);
    let (tw, ex) = (pair.twisted().algebra(), pair.exotic().algebra());
    let values = [(State::vacuum(), ex.s("Ahat")), (tw.s("A"), -State::vacuum())];
    out.push(sweep("roundtrip.values", values, |(x, want)| {
        let got = pair.tau(x, conv);
        (got != *want).then(|| format!("tau({}) = {}", tw.show(x), ex.show(&got)))
    }));
    let hat = DualityPair::new(&s.scene.swapped());
    for (prefix, p, salt) in [("roundtrip", &pair, 10), ("roundtrip.hat", &hat, 12)] {
        let (tw, ex) = (p.twisted().algebra(), p.exotic().algebra());
        let xs = s.sampler(salt).monomials(tw, s.shape(), s.samples);
        out.push(sweep(&format!("{prefix}.sigma-tau"), &xs, |x| (p.sigma_hat(&p.tau(x, conv), conv) != -(*x).clone()).then(|| tw.show(x))));
        let ys = s.sampler(salt + 1).monomials(ex, s.shape(), s.samples);
        out.push(sweep(&format!("{prefix}.tau-sigma"), &ys, |y| (p.tau(&p.sigma_hat(y, conv), conv) != -(*y).clone()).then(|| ex.show(y))));
    }
    out
}

pub fn phi(s: &Settings) -> Vec<Check> {
    let pair = DualityPair::new(&s.scene);
    let (tw, ex) = (pair.twisted(), pair.exotic());
    let xs = s.sampler(14).monomials(tw.algebra(), s.shape(), s.samples);
    let ys = s.sampler(15).monomials(ex.algebra(), s.shape(), s.samples);
    vec![
        transport("phi.opes", &pair, ex.algebra()),
        sweep("phi.chain-map", &xs, |x| (pair.phi(&tw.d(x)) != ex.apply_dz(&pair.phi(x))).then(|| tw.algebra().show(x))),
        sweep("phi.inverse", xs.iter().zip(&ys), |(x, y)| {
            if pair.psi_hat(&pair.phi(x)) != **x {
                Some(tw.algebra().show(x))
            } else {
                (pair.phi(&pair.psi_hat(y)) != **y).then(|| ex.algebra().show(y))
            }
        }),
    ]
}

pub fn weight0(s: &Settings) -> Vec<Check> {
    let conv = s.conv;
    let pair = DualityPair::new(&s.scene);
    let (tw, ex) = (pair.twisted(), pair.exotic());
    let m = s.scene.dim();
    let poly = s.scene.caps.poly_degree.min(2);
    let fourier = s.scene.caps.fourier.min(2) as i32;
    let mut out = Vec::new();

    let mut sm = s.sampler(16);
    let triples: Vec<ExoticForm> =
        (0..100).map(|_| {
            let n = sm.rng_range(-fourier, fourier);
            ExoticForm::new(sm.form(m, m as u32, poly), sm.form(m, m as u32, poly), n)
        }).collect();
    out.push(sweep("weight0.han-mathai", &triples, |f| {
        let x = f.to_state(ex);
        (ex.weight_zero_part(&ex.apply_full(&x)) != hm_differential(&s.scene, f).to_state(ex)).then(|| ex.algebra().show(&x))
    }));

    let intertwines = |x: &State| pair.tau(&tw.d_h(x), conv) == -ex.apply_full(&pair.tau(x, conv));
    let mut sm = s.sampler(17);
    let mut xs = vec![State::vacuum(), tw.algebra().s("A")];
    for _ in 0..100 {
        let n = sm.rng_range(-fourier, fourier);
        xs.push(twisted_form(tw, &sm.form(m, m as u32, poly), &sm.form(m, m as u32, poly), n));
    }
    out.push(sweep("weight0.intertwine", &xs, |x| (!intertwines(x)).then(|| tw.algebra().show(x))));

    // positive weight is outside the statement: a counterexample is documented, not a failure
    let a = tw.algebra();
    let mut probes: Vec<State> = gens(a).iter().map(|g| a.translate(g)).collect();
    probes.extend(s.sampler(18).monomials(a, s.shape(), s.samples));
    let witness = probes.iter().find(|x| a.max_weight(x).unwrap_or(0) > 0 && !intertwines(x));
    let detail = match witness {
        Some(x) => format!("counterexample {}", a.show(x)),
        None => "none found".to_string(),
    };
    out.push(Check::new("weight0.positive-counterexample", true, detail));
    out
}

/// tau on letter-by-letter words against tau on the normally ordered result.
pub fn factorization(s: &Settings) -> Check {
    let pair = DualityPair::new(&s.scene);
    let a = pair.twisted().algebra();
    let letters: Vec<Letter> = (0..a.generators().len() as GenId).map(|g| Letter::new(g, 0)).collect();
    let words: Vec<[Letter; 2]> = letters.iter().flat_map(|x| letters.iter().map(move |y| [*x, *y])).collect();
    sweep("factorization", &words, |w| {
        let canonical = a.nprod(&State::letter(w[0]), &State::letter(w[1]));
        (pair.tau(&canonical, s.conv) != pair.tau_word(&w[..], 0, s.conv))
            .then(|| format!("tau differs on :{} {}:", a.letter_text(w[0]), a.letter_text(w[1])))
    })
}

pub fn topological_ranks() -> Vec<Check> {
    (1..=3).map(topological).collect()
}

/// Every suite of `suite all`.
pub fn all(s: &Settings) -> Vec<Check> {
    let mut out = topological_ranks();
    for suite in [opes, d2, untwist, homotopy, roundtrip, phi, weight0] {
        out.extend(suite(s));
    }
    out
}

/// Suite by name, as accepted by `check`.
pub fn named(name: &str, s: &Settings) -> Option<Vec<Check>> {
    Some(match name {
        "opes" => opes(s),
        "d2" => d2(s),
        "untwist" => untwist(s),
        "homotopy" => homotopy(s),
        "roundtrip" => roundtrip(s),
        "phi" => phi(s),
        "weight0" => weight0(s),
        "topological" => topological_ranks(),
        "factorization" => vec![factorization(s)],
        _ => return None,
    })
}

pub const SUITES: &[&str] = &["d2", "factorization", "homotopy", "opes", "phi", "roundtrip", "topological", "untwist", "weight0"];
