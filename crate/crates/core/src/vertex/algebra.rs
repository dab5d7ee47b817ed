use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, RwLock};

use num_traits::One;

use super::state::{GenId, LambdaPoly, Letter, Monomial, State};
use crate::coeffring::CoefficientForm;
use crate::util::{binomial, factorial};
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub odd: bool,
    /// Conformal weight, or the filtration bound when the algebra is only filtered.
    pub weight: i32,
    /// Fermion-number / form degree.
    pub degree: i32,
}

impl Generator {
    pub fn new(name: impl Into<String>, odd: bool, weight: i32, degree: i32) -> Self {
        Generator { name: name.into(), odd, weight, degree }
    }
}

/// How generators see the phase fields `E_n`:
/// `[g_lambda E_n] = n :R_g(lambda) E_n:` and `d E_n = n :theta E_n:`.
#[derive(Debug, Clone, Default)]
pub struct PhaseRule {
    pub symbol: String,
    pub response: HashMap<GenId, LambdaPoly>,
    pub theta: State,
}

/// Generators playing the role of coordinate functions and their differentials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormLetters {
    pub x: Vec<GenId>,
    pub c: Vec<GenId>,
}

type Shared<K, V> = RwLock<HashMap<K, Arc<V>>>;

#[derive(Default)]
struct Cache {
    gen_bracket: Shared<(GenId, GenId), LambdaPoly>,
    nprod_letter: Shared<(Letter, Monomial), State>,
    nprod_mono: Shared<(Monomial, Monomial), State>,
    bracket_mono: Shared<(Monomial, Monomial), LambdaPoly>,
    translate: Shared<Monomial, State>,
}

impl Cache {
    fn clear(&self) {
        self.gen_bracket.write().unwrap().clear();
        self.nprod_letter.write().unwrap().clear();
        self.nprod_mono.write().unwrap().clear();
        self.bracket_mono.write().unwrap().clear();
        self.translate.write().unwrap().clear();
    }
}

fn cached<K: Eq + Hash + Clone, V>(map: &Shared<K, V>, key: &K, compute: impl FnOnce() -> V) -> Arc<V> {
    if let Some(v) = map.read().unwrap().get(key) {
        return Arc::clone(v);
    }
    let v = Arc::new(compute());
    map.write().unwrap().entry(key.clone()).or_insert(v).clone()
}

/// Vertex superalgebra presented by generators, singular parts of their
/// brackets, and an optional family of phase fields.
///
/// Every state handled here is kept in canonical right-nested form, so two
/// states are equal in the algebra exactly when they are equal as values.
pub struct VertexAlgebra {
    name: String,
    gens: Vec<Generator>,
    index: HashMap<String, GenId>,
    table: HashMap<(GenId, GenId), LambdaPoly>,
    phase: Option<PhaseRule>,
    forms: Option<FormLetters>,
    cache: Cache,
}

impl std::fmt::Debug for VertexAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("VertexAlgebra")
            .field("name", &self.name)
            .field("generators", &self.gens.len())
            .field("entries", &self.table.len())
            .finish()
    }
}

impl Clone for VertexAlgebra {
    fn clone(&self) -> Self {
        VertexAlgebra {
            name: self.name.clone(),
            gens: self.gens.clone(),
            index: self.index.clone(),
            table: self.table.clone(),
            phase: self.phase.clone(),
            forms: self.forms.clone(),
            cache: Cache::default(),
        }
    }
}

fn pair_sign(a: bool, b: bool) -> Q {
    if a && b {
        -Q::one()
    } else {
        Q::one()
    }
}

impl VertexAlgebra {
    /// Generators are ordered as given; that order is the normal order.
    pub fn new(name: impl Into<String>, gens: Vec<Generator>) -> Self {
        let index = gens.iter().enumerate().map(|(i, g)| (g.name.clone(), i as GenId)).collect();
        VertexAlgebra {
            name: name.into(),
            gens,
            index,
            table: HashMap::new(),
            phase: None,
            forms: None,
            cache: Cache::default(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator(&self, g: GenId) -> &Generator {
        &self.gens[g as usize]
    }

    pub fn gen_id(&self, name: &str) -> Option<GenId> {
        self.index.get(name).copied()
    }

    /// Generator id by name; panics if absent.
    pub fn g(&self, name: &str) -> GenId {
        self.gen_id(name).unwrap_or_else(|| panic!("{}: no generator `{name}`", self.name))
    }

    /// State of the named generator.
    pub fn s(&self, name: &str) -> State {
        State::gen(self.g(name))
    }

    pub fn phase_rule(&self) -> Option<&PhaseRule> {
        self.phase.as_ref()
    }

    pub fn has_phases(&self) -> bool {
        self.phase.is_some()
    }

    pub fn form_letters(&self) -> Option<&FormLetters> {
        self.forms.as_ref()
    }

    /// Declared entries of the bracket table.
    pub fn table(&self) -> impl Iterator<Item = (&(GenId, GenId), &LambdaPoly)> {
        self.table.iter()
    }

    pub fn declared(&self, a: GenId, b: GenId) -> Option<&LambdaPoly> {
        self.table.get(&(a, b))
    }

    pub fn set_bracket(&mut self, a: GenId, b: GenId, p: LambdaPoly) {
        if p.is_zero() {
            self.table.remove(&(a, b));
        } else {
            self.table.insert((a, b), p);
        }
        self.cache.clear();
    }

    pub fn set_phase_rule(&mut self, rule: PhaseRule) {
        self.phase = Some(rule);
        self.cache.clear();
    }

    pub fn set_phase_response(&mut self, g: GenId, p: LambdaPoly) {
        let rule = self.phase.as_mut().expect("phase rule not set");
        if p.is_zero() {
            rule.response.remove(&g);
        } else {
            rule.response.insert(g, p);
        }
        self.cache.clear();
    }

    pub fn set_form_letters(&mut self, forms: FormLetters) {
        let mut order: Vec<GenId> = forms.c.clone();
        order.extend(&forms.x);
        assert!(order.windows(2).all(|w| w[0] < w[1]), "form letters must come last, differentials first");
        self.forms = Some(forms);
    }

    pub fn phase_state(&self, n: i32) -> State {
        State::mono(Monomial::phase_only(n))
    }

    // ---- parity, weight, degree ----

    pub fn letter_odd(&self, l: Letter) -> bool {
        self.gens[l.gen as usize].odd
    }

    pub fn mono_odd(&self, m: &Monomial) -> bool {
        m.letters().iter().filter(|l| self.letter_odd(**l)).count() % 2 == 1
    }

    /// `Some(parity)` if homogeneous.
    pub fn parity(&self, s: &State) -> Option<bool> {
        let mut it = s.terms().map(|(m, _)| self.mono_odd(m));
        let first = it.next().unwrap_or(false);
        it.all(|p| p == first).then_some(first)
    }

    pub fn letter_weight(&self, l: Letter) -> i32 {
        self.gens[l.gen as usize].weight + l.deriv as i32
    }

    pub fn mono_weight(&self, m: &Monomial) -> i32 {
        m.letters().iter().map(|l| self.letter_weight(*l)).sum()
    }

    /// Largest monomial weight; `None` for the zero state.
    pub fn max_weight(&self, s: &State) -> Option<i32> {
        s.terms().map(|(m, _)| self.mono_weight(m)).max()
    }

    pub fn mono_degree(&self, m: &Monomial) -> i32 {
        m.letters().iter().map(|l| self.gens[l.gen as usize].degree).sum()
    }

    // ---- forms ----

    /// Embed a coefficient form as a state built from the coordinate letters.
    pub fn form(&self, f: &CoefficientForm) -> State {
        let forms = self.forms.as_ref().expect("algebra has no form letters");
        let mut out = State::zero();
        for (key, q) in f.terms() {
            let mut letters = Vec::new();
            let mut rest = key.dx;
            while rest != 0 {
                let j = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                letters.push(Letter::new(forms.c[j], 0));
            }
            for (i, &e) in key.exps.iter().enumerate() {
                letters.extend(std::iter::repeat(Letter::new(forms.x[i], 0)).take(e as usize));
            }
            if key.phase != 0 {
                assert!(self.phase.is_some(), "phase in a form for an algebra without phases");
            }
            out.add_term(Monomial::from_sorted(letters, key.phase), *q);
        }
        out
    }

    /// Inverse of [`Self::form`] on states built only from undifferentiated form letters.
    pub fn as_form(&self, s: &State) -> Option<CoefficientForm> {
        let forms = self.forms.as_ref()?;
        let dim = forms.x.len();
        let mut out = CoefficientForm::zero(dim);
        for (m, q) in s.terms() {
            let mut dx = 0u32;
            let mut exps = vec![0u16; dim];
            for l in m.letters() {
                if l.deriv != 0 {
                    return None;
                }
                if let Some(j) = forms.c.iter().position(|&g| g == l.gen) {
                    dx |= 1 << j;
                } else if let Some(i) = forms.x.iter().position(|&g| g == l.gen) {
                    exps[i] += 1;
                } else {
                    return None;
                }
            }
            out += &CoefficientForm::term(dim, *q, exps, dx, m.phase());
        }
        Some(out)
    }

    // ---- brackets of generators and letters ----

    /// `[a_lambda b]` for generators, using skew-symmetry when only `(b, a)` is declared.
    pub fn bracket_gen(&self, a: GenId, b: GenId) -> Arc<LambdaPoly> {
        cached(&self.cache.gen_bracket, &(a, b), || {
            if let Some(p) = self.table.get(&(a, b)) {
                p.clone()
            } else if let Some(p) = self.table.get(&(b, a)) {
                self.skew(p, self.gens[a as usize].odd && self.gens[b as usize].odd)
            } else {
                LambdaPoly::zero()
            }
        })
    }

    /// Given `P = [b_lambda a]`, return `[a_lambda b] = -p(a,b) P(-lambda-T)`.
    pub fn skew(&self, p: &LambdaPoly, both_odd: bool) -> LambdaPoly {
        let sign = if both_odd { Q::one() } else { -Q::one() };
        let mut out = LambdaPoly::zero();
        for (k, pk) in p.iter() {
            let parity = if k % 2 == 0 { Q::one() } else { -Q::one() };
            let mut tj = pk.clone();
            for j in 0..=k {
                if j > 0 {
                    tj = self.translate(&tj);
                }
                out.add_at(k - j, &tj, sign * parity * binomial(k, j));
            }
        }
        out
    }

    /// `[d^p a _lambda d^q b] = (-lambda)^p (lambda + T)^q [a_lambda b]`.
    pub fn bracket_letters(&self, a: Letter, b: Letter) -> LambdaPoly {
        let base = self.bracket_gen(a.gen, b.gen);
        if a.deriv == 0 && b.deriv == 0 {
            return (*base).clone();
        }
        let (p, q) = (a.deriv as usize, b.deriv as usize);
        let sign = if p % 2 == 0 { Q::one() } else { -Q::one() };
        let mut out = LambdaPoly::zero();
        for (k, bk) in base.iter() {
            let mut ti = bk.clone();
            for i in 0..=q {
                if i > 0 {
                    ti = self.translate(&ti);
                }
                out.add_at(k + q - i + p, &ti, sign * binomial(q, i));
            }
        }
        out
    }

    /// `[d^p g _lambda E_n] = (-lambda)^p n :R_g E_n:`.
    pub fn bracket_letter_phase(&self, a: Letter, n: i32) -> LambdaPoly {
        let Some(rule) = self.phase.as_ref() else { return LambdaPoly::zero() };
        let Some(resp) = rule.response.get(&a.gen) else { return LambdaPoly::zero() };
        if n == 0 {
            return LambdaPoly::zero();
        }
        let p = a.deriv as usize;
        let sign = if p % 2 == 0 { Q::one() } else { -Q::one() };
        let en = self.phase_state(n);
        let mut out = LambdaPoly::zero();
        for (k, rk) in resp.iter() {
            out.add_at(k + p, &self.nprod(rk, &en), sign * Q::from_integer(n as i128));
        }
        out
    }

    // ---- translation ----

    pub fn translate_mono(&self, m: &Monomial) -> Arc<State> {
        cached(&self.cache.translate, m, || {
            if m.is_vacuum() {
                return State::zero();
            }
            if m.is_pure_phase() {
                let rule = self.phase.as_ref().expect("phase without rule");
                return self.nprod(&rule.theta, &self.phase_state(m.phase())).scale(Q::from_integer(m.phase() as i128));
            }
            let l = m.letters()[0];
            let rest = m.tail();
            let mut out = (*self.nprod_letter(l.d(1), &rest)).clone();
            let drest = self.translate_mono(&rest);
            out += &self.nprod_letter_state(l, &drest);
            out
        })
    }

    pub fn translate(&self, s: &State) -> State {
        let mut out = State::zero();
        for (m, q) in s.terms() {
            out.add_scaled(&self.translate_mono(m), *q);
        }
        out
    }

    pub fn translate_n(&self, s: &State, n: usize) -> State {
        let mut out = s.clone();
        for _ in 0..n {
            out = self.translate(&out);
        }
        out
    }

    // ---- normally ordered products ----

    /// `sum_k (-1)^k T^{k+1} P_k / (k+1)`, i.e. the integral of `P` from `-T` to `0`.
    fn neg_integral(&self, p: &LambdaPoly) -> State {
        let mut out = State::zero();
        for (k, pk) in p.iter() {
            let sign = if k % 2 == 0 { Q::one() } else { -Q::one() };
            out.add_scaled(&self.translate_n(pk, k + 1), sign / Q::from_integer(k as i128 + 1));
        }
        out
    }

    pub fn nprod_letter(&self, l: Letter, y: &Monomial) -> Arc<State> {
        if y.is_empty() {
            return Arc::new(State::mono(Monomial::from_sorted(vec![l], y.phase())));
        }
        let m1 = y.letters()[0];
        if l < m1 || (l == m1 && !self.letter_odd(l)) {
            return Arc::new(State::mono(y.prepend(l)));
        }
        cached(&self.cache.nprod_letter, &(l, y.clone()), || {
            let rest = y.tail();
            if l == m1 {
                let corr = self.neg_integral(&self.bracket_letters(l, l));
                return self.nprod(&corr, &State::mono(rest)).scale(Q::new(1, 2));
            }
            let sign = pair_sign(self.letter_odd(l), self.letter_odd(m1));
            let inner = self.nprod_letter(l, &rest);
            let mut out = State::zero();
            for (mono, q) in inner.terms() {
                out.add_scaled(&self.nprod_letter(m1, mono), *q * sign);
            }
            let corr = self.neg_integral(&self.bracket_letters(l, m1));
            if !corr.is_zero() {
                out += &self.nprod(&corr, &State::mono(rest));
            }
            out
        })
    }

    pub fn nprod_letter_state(&self, l: Letter, y: &State) -> State {
        let mut out = State::zero();
        for (m, q) in y.terms() {
            out.add_scaled(&self.nprod_letter(l, m), *q);
        }
        out
    }

    fn nprod_phase(&self, n: i32, y: &Monomial) -> Arc<State> {
        if n == 0 {
            return Arc::new(State::mono(y.clone()));
        }
        if y.is_empty() {
            return Arc::new(State::mono(Monomial::phase_only(n + y.phase())));
        }
        cached(&self.cache.nprod_mono, &(Monomial::phase_only(n), y.clone()), || {
            let m1 = y.letters()[0];
            let rest = y.tail();
            let mut out = self.nprod_letter_state(m1, &self.nprod_phase(n, &rest));
            let br = self.skew(&self.bracket_letter_phase(m1, n), false);
            let corr = self.neg_integral(&br);
            if !corr.is_zero() {
                out += &self.nprod(&corr, &State::mono(rest));
            }
            out
        })
    }

    pub fn nprod_mono(&self, x: &Monomial, y: &Monomial) -> Arc<State> {
        if x.is_vacuum() {
            return Arc::new(State::mono(y.clone()));
        }
        if y.is_vacuum() {
            return Arc::new(State::mono(x.clone()));
        }
        if x.is_empty() {
            return self.nprod_phase(x.phase(), y);
        }
        if x.len() == 1 && x.phase() == 0 {
            return self.nprod_letter(x.letters()[0], y);
        }
        cached(&self.cache.nprod_mono, &(x.clone(), y.clone()), || {
            // ::l b: y: = :l :b y:: + :(int_0^T l)[b_lambda y]: + p(l,b):(int_0^T b)[l_lambda y]:
            let l = x.letters()[0];
            let b = x.tail();
            let bs = State::mono(b.clone());
            let mut out = self.nprod_letter_state(l, &self.nprod_mono(&b, y));
            let by = self.bracket_mono(&b, y);
            for (k, rk) in by.iter() {
                let t = self.nprod_letter_state(l.d(k + 1), rk);
                out.add_scaled(&t, Q::one() / Q::from_integer(k as i128 + 1));
            }
            let sign = pair_sign(self.letter_odd(l), self.mono_odd(&b));
            let ly = self.bracket_mono(&Monomial::letter(l), y);
            for (k, lk) in ly.iter() {
                let tb = self.translate_n(&bs, k + 1);
                out.add_scaled(&self.nprod(&tb, lk), sign / Q::from_integer(k as i128 + 1));
            }
            out
        })
    }

    /// Normally ordered product `:x y:`.
    pub fn nprod(&self, x: &State, y: &State) -> State {
        let mut out = State::zero();
        for (mx, qx) in x.terms() {
            for (my, qy) in y.terms() {
                out.add_scaled(&self.nprod_mono(mx, my), *qx * *qy);
            }
        }
        out
    }

    /// Right-nested product `:s1 :s2 ... sk::`.
    pub fn nprod_all(&self, factors: &[State]) -> State {
        let mut out = State::vacuum();
        for f in factors.iter().rev() {
            out = self.nprod(f, &out);
        }
        out
    }

    // ---- lambda-brackets of states ----

    pub fn bracket_mono(&self, x: &Monomial, y: &Monomial) -> Arc<LambdaPoly> {
        if x.is_vacuum() || y.is_vacuum() {
            return Arc::new(LambdaPoly::zero());
        }
        if x.is_empty() && y.is_empty() {
            return Arc::new(LambdaPoly::zero());
        }
        cached(&self.cache.bracket_mono, &(x.clone(), y.clone()), || {
            if x.is_empty() {
                return self.skew(&self.bracket_mono(y, x), false);
            }
            if x.len() == 1 && x.phase() == 0 {
                return self.bracket_letter_mono(x.letters()[0], y);
            }
            self.right_wick(x.letters()[0], &x.tail(), y)
        })
    }

    /// `[l_lambda y]` by the left Wick formula.
    fn bracket_letter_mono(&self, l: Letter, y: &Monomial) -> LambdaPoly {
        if y.is_empty() {
            return self.bracket_letter_phase(l, y.phase());
        }
        let m = y.letters()[0];
        let rest = y.tail();
        let rest_s = State::mono(rest.clone());
        let mut out = LambdaPoly::zero();
        let c = self.bracket_letters(l, m);
        for (k, ck) in c.iter() {
            out.add_at(k, &self.nprod(ck, &rest_s), Q::one());
        }
        let sign = pair_sign(self.letter_odd(l), self.letter_odd(m));
        let r = self.bracket_mono(&Monomial::letter(l), &rest);
        for (k, rk) in r.iter() {
            out.add_at(k, &self.nprod_letter_state(m, rk), sign);
        }
        for (k, ck) in c.iter() {
            let d = self.bracket(ck, &rest_s);
            for (j, dkj) in d.iter() {
                out.add_at(k + j + 1, dkj, Q::one() / Q::from_integer(j as i128 + 1));
            }
        }
        out
    }

    /// `[:a b:_lambda y]` by the right Wick formula, `a` a letter.
    fn right_wick(&self, a: Letter, b: &Monomial, y: &Monomial) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        let bs = State::mono(b.clone());
        let sign = pair_sign(self.letter_odd(a), self.mono_odd(b));
        let by = self.bracket_mono(b, y);
        for (k, bk) in by.iter() {
            for j in 0..=k {
                out.add_at(k - j, &self.nprod_letter_state(a.d(j), bk), binomial(k, j));
            }
        }
        let ay = self.bracket_mono(&Monomial::letter(a), y);
        for (k, ak) in ay.iter() {
            let mut tb = bs.clone();
            for j in 0..=k {
                if j > 0 {
                    tb = self.translate(&tb);
                }
                out.add_at(k - j, &self.nprod(&tb, ak), sign * binomial(k, j));
            }
        }
        for (n, an) in ay.iter() {
            let d = self.bracket(&bs, an);
            for (m, dnm) in d.iter() {
                let w = factorial(m) * factorial(n) / factorial(m + n + 1);
                out.add_at(m + n + 1, dnm, sign * w);
            }
        }
        out
    }

    /// `[x_lambda y]`.
    pub fn bracket(&self, x: &State, y: &State) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        for (mx, qx) in x.terms() {
            for (my, qy) in y.terms() {
                out.add_poly(&self.bracket_mono(mx, my), *qx * *qy);
            }
        }
        out
    }

    /// The `k`-th product `x_(k) y` for any integer `k`.
    pub fn product(&self, k: i64, x: &State, y: &State) -> State {
        if k >= 0 {
            let k = k as usize;
            self.bracket(x, y).coeff(k).scale(factorial(k))
        } else {
            let n = (-k - 1) as usize;
            let tx = self.translate_n(x, n).scale(Q::one() / factorial(n));
            self.nprod(&tx, y)
        }
    }

    /// Pole orders `(k, x_(k) y)` for `k >= 0` with nonzero coefficient.
    pub fn ope(&self, x: &State, y: &State) -> Vec<(usize, State)> {
        let b = self.bracket(x, y);
        b.iter().map(|(k, s)| (k, s.scale(factorial(k)))).collect()
    }

    /// Drop every cached product.
    pub fn clear_cache(&self) {
        self.cache.clear();
    }
}

impl VertexAlgebra {
    /// Convenience: `[a_lambda b]` by generator names.
    pub fn bracket_names(&self, a: &str, b: &str) -> LambdaPoly {
        (*self.bracket_gen(self.g(a), self.g(b))).clone()
    }
}

