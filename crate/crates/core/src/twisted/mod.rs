//! The flux-twisted chiral de Rham algebra of a circle-bundle patch
//! `V x S^1`, presented by generators and OPEs.

mod concrete;
mod layout;
mod scene;

use std::sync::Arc;

pub use concrete::ConcreteModel;
pub use layout::{contract2, lie_coord, CircleLayout};
pub use scene::{BundleScene, SceneCaps};

use crate::coeffring::{CoefficientForm, VectorField};
use crate::error::{Error, Result};
use crate::vertex::{Derivation, GenId, Homomorphism, LambdaPoly, Letter, Monomial, PhaseRule, State, VertexAlgebra};

/// Generators `Lie_i, iota_i, LA, iA, GammaA, A` and base forms, with phases
/// `ph(n) = e^{n theta}`.
pub struct TwistedPatch {
    scene: BundleScene,
    alg: Arc<VertexAlgebra>,
    ids: CircleLayout,
    xi: State,
    d: Derivation,
}

/// Copy a state built from base-form letters of the free-field model.
fn import_forms(model: &ConcreteModel, target: &CircleLayout, s: &State) -> State {
    let (_, _, c, gamma) = model.cdr().gen_ids();
    let map = |g: GenId| -> GenId {
        if let Some(i) = c.iter().position(|&h| h == g).filter(|&i| i < target.dx.len()) {
            target.dx[i]
        } else if let Some(i) = gamma.iter().position(|&h| h == g).filter(|&i| i < target.x.len()) {
            target.x[i]
        } else {
            panic!("state is not built from base forms")
        }
    };
    s.terms()
        .map(|(m, q)| {
            let letters: Vec<Letter> = m.letters().iter().map(|l| Letter::new(map(l.gen), l.deriv)).collect();
            assert!(letters.windows(2).all(|w| w[0] <= w[1]));
            (Monomial::from_sorted(letters, m.phase()), *q)
        })
        .collect()
}

impl TwistedPatch {
    pub fn new(scene: &BundleScene) -> Self {
        let patch = scene.patch();
        let m = scene.dim();
        let (gens, ids) = CircleLayout::generators(patch, "iA", "A");
        let mut alg = VertexAlgebra::new("twisted", gens);
        alg.set_form_letters(ids.form_letters());
        let xi = import_forms(&ConcreteModel::new(scene), &ids, &ConcreteModel::new(scene).xi());

        let f = |alg: &VertexAlgebra, w: &CoefficientForm| alg.form(w);
        let (h3, h2, hh2) = (scene.h3().clone(), scene.h2(), scene.hhat2());
        let a = State::gen(ids.connection);
        let ia = State::gen(ids.contraction);
        let la = State::gen(ids.la);
        let c = LambdaPoly::constant;
        let mut entries: Vec<(GenId, GenId, LambdaPoly)> = Vec::new();
        for i in 0..m {
            for j in 0..m {
                let lij = f(&alg, &contract2(&h3, i, j))
                    + alg.nprod(&a, &f(&alg, &contract2(&h2, i, j)))
                    + alg.nprod(&f(&alg, &contract2(&hh2, i, j)), &ia);
                entries.push((ids.lie[i], ids.iota[j], c(lij)));
                let li_j = |w: &CoefficientForm| lie_coord(&w.contract_coord(j), i);
                let i_lj = |w: &CoefficientForm| lie_coord(w, j).contract_coord(i);
                let llij = f(&alg, &(li_j(&h3) - i_lj(&h3)))
                    + f(&alg, &hh2.wedge(&contract2(&h2, i, j)))
                    - alg.nprod(&a, &f(&alg, &(li_j(&h2) - i_lj(&h2))))
                    + alg.nprod(&f(&alg, &(li_j(&hh2) - i_lj(&hh2))), &ia)
                    + alg.nprod(&la, &f(&alg, &contract2(&hh2, i, j)));
                entries.push((ids.lie[i], ids.lie[j], c(llij)));
            }
            entries.push((ids.lie[i], ids.connection, c(f(&alg, &hh2.contract_coord(i)))));
            entries.push((ids.lie[i], ids.contraction, c(f(&alg, &h2.contract_coord(i)))));
            entries.push((ids.la, ids.iota[i], c(-f(&alg, &h2.contract_coord(i)))));
            entries.push((ids.la, ids.lie[i], c(-f(&alg, &h2.contract_coord(i).d()))));
        }
        entries.push((ids.la, ids.gamma, LambdaPoly::monomial(1, State::vacuum())));
        entries.push((ids.contraction, ids.connection, c(State::vacuum())));
        ids.set_form_brackets(&mut alg);
        for (p, q, poly) in entries {
            alg.set_bracket(p, q, poly);
        }
        // [L_i Gamma] = -iota_i xi, read off once the contractions are in place.
        for i in 0..m {
            let ixi = alg.product(0, &State::gen(ids.iota[i]), &xi);
            alg.set_bracket(ids.lie[i], ids.gamma, c(-ixi));
        }
        let mut theta = State::gen(ids.gamma);
        for k in 0..m {
            let ak = f(&alg, &scene.a_component(k));
            theta -= &alg.nprod(&ak, &State::letter(Letter::new(ids.x[k], 1)));
        }
        let mut rule = PhaseRule { symbol: "ph".into(), theta, ..Default::default() };
        rule.response.insert(ids.la, c(State::vacuum()));
        for i in 0..m {
            let ai = f(&alg, &scene.a_component(i));
            if !ai.is_zero() {
                rule.response.insert(ids.lie[i], c(-ai));
            }
        }
        alg.set_phase_rule(rule);
        let alg = Arc::new(alg);
        let d = Self::derivation(scene, &alg, &ids, &xi);
        TwistedPatch { scene: scene.clone(), alg, ids, xi, d }
    }

    fn derivation(scene: &BundleScene, alg: &Arc<VertexAlgebra>, ids: &CircleLayout, xi: &State) -> Derivation {
        let f = |w: &CoefficientForm| alg.form(w);
        let (h3, h2, hh2) = (scene.h3(), scene.h2(), scene.hhat2());
        let a = State::gen(ids.connection);
        let mut images = vec![State::zero(); alg.generators().len()];
        for i in 0..scene.dim() {
            images[ids.x[i] as usize] = State::gen(ids.dx[i]);
            images[ids.iota[i] as usize] = State::gen(ids.lie[i]) - f(&h3.contract_coord(i))
                + alg.nprod(&a, &f(&h2.contract_coord(i)));
            images[ids.lie[i] as usize] = f(&lie_coord(h3, i))
                + f(&h2.wedge(&hh2.contract_coord(i)))
                + alg.nprod(&a, &f(&lie_coord(&h2, i)));
        }
        images[ids.contraction as usize] = State::gen(ids.la) - f(&h2);
        images[ids.connection as usize] = f(&hh2);
        images[ids.gamma as usize] = alg.translate(&a) - xi.clone();
        let r = &a - &f(scene.a_bas());
        Derivation::new(Arc::clone(alg), true, images, r)
    }

    pub fn scene(&self) -> &BundleScene {
        &self.scene
    }

    pub fn algebra(&self) -> &Arc<VertexAlgebra> {
        &self.alg
    }

    pub fn ids(&self) -> &CircleLayout {
        &self.ids
    }

    pub fn form(&self, w: &CoefficientForm) -> State {
        self.alg.form(w)
    }

    pub fn xi(&self) -> &State {
        &self.xi
    }

    /// `H = H3 + :A H2:`.
    pub fn flux(&self) -> State {
        self.form(self.scene.h3()) + self.alg.nprod(&State::gen(self.ids.connection), &self.form(&self.scene.h2()))
    }

    /// The chiral de Rham differential as a derivation.
    pub fn d(&self, x: &State) -> State {
        self.d.apply(x)
    }

    pub fn derivation_d(&self) -> &Derivation {
        &self.d
    }

    /// `D_H x = D x + :H x:`.
    pub fn d_h(&self, x: &State) -> State {
        self.d(x) + self.alg.nprod(&self.flux(), x)
    }

    /// `iota_X = sum :f_i iota_i: + :v iota_A:` for `X` with vertical part `v`.
    pub fn iota_field(&self, x: &VectorField) -> State {
        let mut out = self.alg.nprod(&self.form(x.vertical()), &State::gen(self.ids.contraction));
        for (i, fi) in x.components().iter().enumerate() {
            out += &self.alg.nprod(&self.form(fi), &State::gen(self.ids.iota[i]));
        }
        out
    }

    /// `L_X = D(iota_X) + iota_X H`.
    pub fn lie_field(&self, x: &VectorField) -> State {
        let s = &self.scene;
        let h = x.horizontal();
        let a = State::gen(self.ids.connection);
        self.d(&self.iota_field(x)) + self.form(&s.h3().contract(&h)) + self.form(&x.vertical().wedge(&s.h2()))
            - self.alg.nprod(&a, &self.form(&s.h2().contract(&h)))
    }

    /// Fourier component of phase `n`.
    pub fn fourier_project(&self, x: &State, n: i32) -> Result<State> {
        if n.unsigned_abs() > self.scene.caps.fourier {
            return Err(Error::CapExceeded(format!("phase {n} beyond Fourier cap {}", self.scene.caps.fourier)));
        }
        Ok(x.sector(n))
    }

    /// The map into the free-field model.
    pub fn realization(&self, model: &ConcreteModel) -> Homomorphism {
        let ids = &self.ids;
        let cdr = model.cdr();
        let mut images = vec![State::zero(); self.alg.generators().len()];
        for i in 0..self.scene.dim() {
            images[ids.x[i] as usize] = cdr.gamma(i);
            images[ids.dx[i] as usize] = cdr.c(i);
            images[ids.iota[i] as usize] = model.iota(i);
            images[ids.lie[i] as usize] = model.lie(i);
        }
        images[ids.connection as usize] = model.connection();
        images[ids.contraction as usize] = model.iota_a();
        images[ids.la as usize] = model.lie_a();
        images[ids.gamma as usize] = model.gamma_a();
        Homomorphism::new(Arc::clone(cdr.algebra()), images, 1)
    }

    /// `L_i -> L_i - iota_i H`, `L_A -> L_A - H2` from the flux-free algebra of
    /// the same bundle into this one.
    pub fn untwist(&self, untwisted: &TwistedPatch) -> Homomorphism {
        assert_eq!(untwisted.scene, self.scene.untwisted(), "untwist needs the flux-free scene");
        let ids = &self.ids;
        let s = &self.scene;
        let a = State::gen(ids.connection);
        let mut images: Vec<State> = (0..self.alg.generators().len() as GenId).map(State::gen).collect();
        for i in 0..s.dim() {
            images[ids.lie[i] as usize] = State::gen(ids.lie[i]) - self.form(&s.h3().contract_coord(i))
                + self.alg.nprod(&a, &self.form(&s.h2().contract_coord(i)));
        }
        images[ids.la as usize] = State::gen(ids.la) - self.form(&s.h2());
        Homomorphism::new(Arc::clone(&self.alg), images, 1)
    }

    /// `(L_A - H2)_(0)`: the zero mode of `D(iota_A)`, diagonal on Fourier sectors.
    pub fn momentum(&self, x: &State) -> State {
        let field = State::gen(self.ids.la) - self.form(&self.scene.h2());
        self.alg.product(0, &field, x)
    }
}
