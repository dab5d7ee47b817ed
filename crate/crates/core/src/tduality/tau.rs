use std::collections::HashMap;
use std::sync::RwLock;

use super::DualityPair;
use crate::util::{factorial, sign};
use crate::vertex::{GenId, Letter, Monomial, State, VertexAlgebra};

/// Which sector `tau(e^{-n theta})` lands in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TauConvention {
    /// `:s^n Ahat:`, consistent with `phi(e^{-n theta}) = s^n`.
    #[default]
    Phi,
    /// `:s^{-n} Ahat:`.
    Paper,
}

impl TauConvention {
    fn phase_factor(self) -> i32 {
        match self {
            TauConvention::Phi => -1,
            TauConvention::Paper => 1,
        }
    }
}

#[derive(Default)]
pub(super) struct TauCache {
    tau: RwLock<HashMap<(Monomial, TauConvention), State>>,
    sigma: RwLock<HashMap<(Monomial, TauConvention), State>>,
}

/// How one letter of a source monomial acts after transport.
struct Step {
    /// Homogeneous image field.
    image: State,
    /// Mode shift between the two weight conventions.
    shift: i64,
    /// `g - (homogeneous part)`, expanded separately.
    remainder: Option<State>,
}

impl DualityPair {
    fn tau_step(&self, g: GenId) -> Step {
        let (t, e) = (self.tw.ids(), self.ex.ids());
        let s = self.scene();
        let a = self.tw.algebra();
        let mut remainder = None;
        if let Some(i) = t.lie.iter().position(|&h| h == g) {
            let r = self.tw.form(&s.h3().contract_coord(i))
                - a.nprod(&State::gen(t.connection), &self.tw.form(&s.h2().contract_coord(i)));
            remainder = Some(r);
        } else if g == t.la {
            remainder = Some(self.tw.form(&s.h2()));
        }
        let whole = self.phi(&State::gen(g));
        let image = match &remainder {
            Some(r) => whole - self.phi(r),
            None => whole,
        };
        let shift = if g == t.connection {
            1
        } else if g == t.contraction {
            -1
        } else {
            0
        };
        debug_assert!(e.connection != e.contraction);
        Step { image, shift, remainder }
    }

    fn sigma_step(&self, g: GenId) -> Step {
        let e = self.ex.ids();
        let s = self.scene();
        let mut remainder = None;
        if let Some(i) = e.lie.iter().position(|&h| h == g) {
            remainder = Some(self.ex.form(&s.h3().contract_coord(i)));
        }
        let whole = self.psi_hat(&State::gen(g));
        let image = match &remainder {
            Some(r) => whole - self.psi_hat(r),
            None => whole,
        };
        let shift = if g == e.contraction {
            -1
        } else if g == e.connection {
            1
        } else {
            0
        };
        Step { image, shift, remainder }
    }

    /// `(-1)^{|g|} k! (image)_(-1-k+shift) y`, plus the remainder term.
    fn act(
        &self,
        source: &VertexAlgebra,
        target: &VertexAlgebra,
        step: &Step,
        l: Letter,
        rest: &Monomial,
        rest_img: &State,
        recurse: &dyn Fn(&State) -> State,
    ) -> State {
        let k = l.deriv as usize;
        let mode = -1 - k as i64 + step.shift;
        let q = sign(source.letter_odd(Letter::new(l.gen, 0))) * factorial(k);
        let mut out = target.product(mode, &step.image, rest_img).scale(q);
        if let Some(r) = &step.remainder {
            let expanded = source.nprod(&source.translate_n(r, k), &State::mono(rest.clone()));
            out += &recurse(&expanded);
        }
        out
    }

    /// `tau(1) = Ahat`, `tau(nu_k mu) = (-1)^{|nu|} phi(nu)_k tau(mu)` with
    /// weight-graded modes.
    pub fn tau(&self, x: &State, conv: TauConvention) -> State {
        let mut out = State::zero();
        for (m, q) in x.terms() {
            out.add_scaled(&self.tau_mono(m, conv), *q);
        }
        out
    }

    fn tau_mono(&self, m: &Monomial, conv: TauConvention) -> State {
        let key = (m.clone(), conv);
        if let Some(v) = self.cache.tau.read().unwrap().get(&key) {
            return v.clone();
        }
        let ex = self.ex.algebra();
        let ahat = State::gen(self.ex.ids().connection);
        let v = if m.is_empty() {
            ex.nprod(&ex.phase_state(conv.phase_factor() * m.phase()), &ahat)
        } else {
            let l = m.letters()[0];
            let rest = m.tail();
            let rest_img = self.tau_mono(&rest, conv);
            let step = self.tau_step(l.gen);
            self.act(self.tw.algebra(), ex, &step, l, &rest, &rest_img, &|s| self.tau(s, conv))
        };
        self.cache.tau.write().unwrap().insert(key, v.clone());
        v
    }

    /// `sigma_hat(1) = A`, `sigma_hat(nu_k mu) = (-1)^{|nu|} psi_hat(nu)_k sigma_hat(mu)`.
    pub fn sigma_hat(&self, x: &State, conv: TauConvention) -> State {
        let mut out = State::zero();
        for (m, q) in x.terms() {
            out.add_scaled(&self.sigma_mono(m, conv), *q);
        }
        out
    }

    fn sigma_mono(&self, m: &Monomial, conv: TauConvention) -> State {
        let key = (m.clone(), conv);
        if let Some(v) = self.cache.sigma.read().unwrap().get(&key) {
            return v.clone();
        }
        let tw = self.tw.algebra();
        let a = State::gen(self.tw.ids().connection);
        let v = if m.is_empty() {
            tw.nprod(&tw.phase_state(conv.phase_factor() * m.phase()), &a)
        } else {
            let l = m.letters()[0];
            let rest = m.tail();
            let rest_img = self.sigma_mono(&rest, conv);
            let step = self.sigma_step(l.gen);
            self.act(self.ex.algebra(), tw, &step, l, &rest, &rest_img, &|s| self.sigma_hat(s, conv))
        };
        self.cache.sigma.write().unwrap().insert(key, v.clone());
        v
    }

    /// `tau` evaluated on the word `l_1 (l_2 (... (E_n)))` letter by letter,
    /// without first bringing it to canonical order.
    pub fn tau_word(&self, letters: &[Letter], phase: i32, conv: TauConvention) -> State {
        let tw = self.tw.algebra();
        let mut suffix = tw.phase_state(phase);
        let mut img = self.tau(&suffix, conv);
        for &l in letters.iter().rev() {
            let step = self.tau_step(l.gen);
            let k = l.deriv as usize;
            let q = sign(tw.letter_odd(Letter::new(l.gen, 0))) * factorial(k);
            let mut next = self.ex.algebra().product(-1 - k as i64 + step.shift, &step.image, &img).scale(q);
            if let Some(r) = &step.remainder {
                next += &self.tau(&tw.nprod(&tw.translate_n(r, k), &suffix), conv);
            }
            suffix = tw.nprod_letter_state(l, &suffix);
            img = next;
        }
        img
    }
}
