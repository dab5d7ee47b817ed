use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_traits::One;

use super::algebra::VertexAlgebra;
use super::state::{GenId, Monomial, State};
use crate::util::sign;
use crate::Q;

/// Vertex algebra morphism determined by the images of the generators.
///
/// Phase fields are sent to phase fields: `E_n -> E_{phase_factor * n}`.
pub struct Homomorphism {
    target: Arc<VertexAlgebra>,
    images: Vec<State>,
    phase_factor: i32,
    cache: RwLock<HashMap<Monomial, Arc<State>>>,
}

impl Homomorphism {
    pub fn new(target: Arc<VertexAlgebra>, images: Vec<State>, phase_factor: i32) -> Self {
        Homomorphism { target, images, phase_factor, cache: RwLock::default() }
    }

    pub fn target(&self) -> &Arc<VertexAlgebra> {
        &self.target
    }

    pub fn image_of(&self, g: GenId) -> &State {
        &self.images[g as usize]
    }

    pub fn phase_factor(&self) -> i32 {
        self.phase_factor
    }

    pub fn apply_mono(&self, m: &Monomial) -> Arc<State> {
        if let Some(v) = self.cache.read().unwrap().get(m) {
            return Arc::clone(v);
        }
        let t = &self.target;
        let v = if m.is_empty() {
            t.phase_state(self.phase_factor * m.phase())
        } else {
            let l = m.letters()[0];
            let head = t.translate_n(&self.images[l.gen as usize], l.deriv as usize);
            let rest = self.apply_mono(&m.tail());
            t.nprod(&head, &rest)
        };
        let v = Arc::new(v);
        self.cache.write().unwrap().insert(m.clone(), Arc::clone(&v));
        v
    }

    pub fn apply(&self, s: &State) -> State {
        let mut out = State::zero();
        for (m, q) in s.terms() {
            out.add_scaled(&self.apply_mono(m), *q);
        }
        out
    }
}

/// Translation-invariant (super)derivation given on generators.
///
/// On phases it acts by `E_n -> n :R E_n:` for a fixed state `R`.
pub struct Derivation {
    alg: Arc<VertexAlgebra>,
    odd: bool,
    images: Vec<State>,
    phase_coefficient: State,
    cache: RwLock<HashMap<Monomial, Arc<State>>>,
}

impl Derivation {
    pub fn new(alg: Arc<VertexAlgebra>, odd: bool, images: Vec<State>, phase_coefficient: State) -> Self {
        assert_eq!(images.len(), alg.generators().len());
        Derivation { alg, odd, images, phase_coefficient, cache: RwLock::default() }
    }

    pub fn algebra(&self) -> &Arc<VertexAlgebra> {
        &self.alg
    }

    pub fn image_of(&self, g: GenId) -> &State {
        &self.images[g as usize]
    }

    pub fn phase_coefficient(&self) -> &State {
        &self.phase_coefficient
    }

    pub fn apply_mono(&self, m: &Monomial) -> Arc<State> {
        if let Some(v) = self.cache.read().unwrap().get(m) {
            return Arc::clone(v);
        }
        let a = &self.alg;
        let v = if m.is_vacuum() {
            State::zero()
        } else if m.is_empty() {
            let n = Q::from_integer(m.phase() as i128);
            a.nprod(&self.phase_coefficient, &a.phase_state(m.phase())).scale(n)
        } else {
            let l = m.letters()[0];
            let rest = m.tail();
            let head = a.translate_n(&self.images[l.gen as usize], l.deriv as usize);
            let mut out = a.nprod(&head, &State::mono(rest.clone()));
            let drest = self.apply_mono(&rest);
            let s = sign(self.odd && a.letter_odd(l));
            out.add_scaled(&a.nprod_letter_state(l, &drest), s);
            out
        };
        let v = Arc::new(v);
        self.cache.write().unwrap().insert(m.clone(), Arc::clone(&v));
        v
    }

    pub fn apply(&self, s: &State) -> State {
        let mut out = State::zero();
        for (m, q) in s.terms() {
            out.add_scaled(&self.apply_mono(m), *q);
        }
        out
    }
}

/// The operator `x -> field_(k) x`.
pub struct ModeOperator {
    alg: Arc<VertexAlgebra>,
    field: State,
    k: i64,
}

impl ModeOperator {
    pub fn new(alg: Arc<VertexAlgebra>, field: State, k: i64) -> Self {
        ModeOperator { alg, field, k }
    }

    pub fn field(&self) -> &State {
        &self.field
    }

    pub fn mode(&self) -> i64 {
        self.k
    }

    pub fn apply(&self, x: &State) -> State {
        self.alg.product(self.k, &self.field, x)
    }

    pub fn apply_scaled(&self, x: &State, q: Q) -> State {
        if q == Q::one() {
            self.apply(x)
        } else {
            self.apply(x).scale(q)
        }
    }
}
