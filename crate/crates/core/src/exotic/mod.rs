//! The exotic twisted chiral de Rham algebra of the dual patch: generators
//! `Lie_i, iota_i, LA, iAhat, GammaA, Ahat`, base forms, and the sectors `s(n)`,
//! together with the differential `D_Zhat + D0 + ... + D6`.

mod classical;

use std::sync::Arc;

pub use classical::{hm_differential, ExoticForm};

use crate::coeffring::CoefficientForm;
use crate::twisted::{contract2, lie_coord, BundleScene, CircleLayout, TwistedPatch};
use crate::vertex::{Derivation, GenId, LambdaPoly, Letter, ModeOperator, PhaseRule, State, VertexAlgebra};

/// One of the mode-operator corrections `D0 ... D6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Component {
    D0,
    D1,
    D2,
    D3,
    D4,
    D5,
    D6,
}

impl Component {
    pub const ALL: [Component; 7] =
        [Component::D0, Component::D1, Component::D2, Component::D3, Component::D4, Component::D5, Component::D6];

    pub fn index(self) -> usize {
        self as usize
    }
}

pub struct ExoticPatch {
    scene: BundleScene,
    alg: Arc<VertexAlgebra>,
    ids: CircleLayout,
    xi: State,
    dz: Derivation,
    components: Vec<ModeOperator>,
}

impl ExoticPatch {
    pub fn new(scene: &BundleScene) -> Self {
        // xi lives in the base-form subalgebra, whose generator ids agree.
        let xi = TwistedPatch::new(scene).xi().clone();
        Self::with_xi(scene, xi)
    }

    pub(crate) fn with_xi(scene: &BundleScene, xi: State) -> Self {
        let m = scene.dim();
        let (gens, ids) = CircleLayout::generators(scene.patch(), "iAhat", "Ahat");
        let mut alg = VertexAlgebra::new("exotic", gens);
        alg.set_form_letters(ids.form_letters());
        let f = |alg: &VertexAlgebra, w: &CoefficientForm| alg.form(w);
        let (h3, hh2) = (scene.h3().clone(), scene.hhat2());
        let ahat = State::gen(ids.connection);
        let la = State::gen(ids.la);
        let c = LambdaPoly::constant;
        let mut entries: Vec<(GenId, GenId, LambdaPoly)> = Vec::new();
        for i in 0..m {
            for j in 0..m {
                let lij = f(&alg, &contract2(&h3, i, j)) + alg.nprod(&ahat, &f(&alg, &contract2(&hh2, i, j)));
                entries.push((ids.lie[i], ids.iota[j], c(lij)));
                let li_j = |w: &CoefficientForm| lie_coord(&w.contract_coord(j), i);
                let i_lj = |w: &CoefficientForm| lie_coord(w, j).contract_coord(i);
                let llij = f(&alg, &(li_j(&h3) - i_lj(&h3)))
                    + alg.nprod(&f(&alg, &(li_j(&hh2) - i_lj(&hh2))), &ahat)
                    + alg.nprod(&la, &f(&alg, &contract2(&hh2, i, j)));
                entries.push((ids.lie[i], ids.lie[j], c(llij)));
            }
            entries.push((ids.lie[i], ids.contraction, c(f(&alg, &hh2.contract_coord(i)))));
        }
        entries.push((ids.la, ids.gamma, LambdaPoly::monomial(1, State::vacuum())));
        entries.push((ids.contraction, ids.connection, c(State::vacuum())));
        ids.set_form_brackets(&mut alg);
        for (p, q, poly) in entries {
            alg.set_bracket(p, q, poly);
        }
        for i in 0..m {
            let ixi = alg.product(0, &State::gen(ids.iota[i]), &xi);
            alg.set_bracket(ids.lie[i], ids.gamma, c(-ixi));
        }
        let mut theta = -State::gen(ids.gamma);
        for k in 0..m {
            let ak = f(&alg, &scene.a_component(k));
            theta += &alg.nprod(&ak, &State::letter(Letter::new(ids.x[k], 1)));
        }
        let mut rule = PhaseRule { symbol: "s".into(), theta, ..Default::default() };
        rule.response.insert(ids.la, c(-State::vacuum()));
        for i in 0..m {
            let ai = f(&alg, &scene.a_component(i));
            if !ai.is_zero() {
                rule.response.insert(ids.lie[i], c(ai));
            }
        }
        alg.set_phase_rule(rule);
        let alg = Arc::new(alg);
        let dz = Self::derivation(scene, &alg, &ids, &xi);
        let components = Self::components(scene, &alg, &ids);
        ExoticPatch { scene: scene.clone(), alg, ids, xi, dz, components }
    }

    fn derivation(scene: &BundleScene, alg: &Arc<VertexAlgebra>, ids: &CircleLayout, xi: &State) -> Derivation {
        let f = |w: &CoefficientForm| alg.form(w);
        let (h3, h2, hh2) = (scene.h3(), scene.h2(), scene.hhat2());
        let mut images = vec![State::zero(); alg.generators().len()];
        for i in 0..scene.dim() {
            images[ids.x[i] as usize] = State::gen(ids.dx[i]);
            images[ids.iota[i] as usize] = State::gen(ids.lie[i]) - f(&h3.contract_coord(i));
            images[ids.lie[i] as usize] = f(&lie_coord(h3, i))
                + f(&h2.wedge(&hh2.contract_coord(i)))
                + f(&hh2.wedge(&h2.contract_coord(i)));
        }
        images[ids.contraction as usize] = f(&hh2);
        images[ids.connection as usize] = State::gen(ids.la);
        images[ids.gamma as usize] = alg.translate(&State::gen(ids.contraction)) - xi.clone();
        let r = f(scene.a_bas()) - State::gen(ids.contraction);
        Derivation::new(Arc::clone(alg), true, images, r)
    }

    fn components(scene: &BundleScene, alg: &Arc<VertexAlgebra>, ids: &CircleLayout) -> Vec<ModeOperator> {
        let f = |w: &CoefficientForm| alg.form(w);
        let ahat = State::gen(ids.connection);
        let iahat = State::gen(ids.contraction);
        let la = State::gen(ids.la);
        let a_hh2 = alg.nprod(&ahat, &f(&scene.hhat2()));
        let h2_i = alg.nprod(&f(&scene.h2()), &iahat);
        let i_la = alg.nprod(&iahat, &la);
        let h3 = f(scene.h3());
        let op = |field: State, k| ModeOperator::new(Arc::clone(alg), field, k);
        vec![
            op(-a_hh2.clone(), 0),
            op(h2_i.clone(), 0),
            op(-i_la.clone(), 0),
            op(h3.clone(), 0),
            op(i_la, 1),
            op(h2_i, 1),
            op(h3 + a_hh2, -1),
        ]
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

    pub fn xi(&self) -> &State {
        &self.xi
    }

    pub fn form(&self, w: &CoefficientForm) -> State {
        self.alg.form(w)
    }

    /// The transported chiral de Rham differential `D_Zhat`.
    pub fn apply_dz(&self, x: &State) -> State {
        self.dz.apply(x)
    }

    pub fn derivation_dz(&self) -> &Derivation {
        &self.dz
    }

    pub fn component(&self, which: Component) -> &ModeOperator {
        &self.components[which.index()]
    }

    pub fn apply_component(&self, x: &State, which: Component) -> State {
        self.component(which).apply(x)
    }

    /// `D_Zhat + D0 + D1 + D2 + D3`, a derivation.
    pub fn apply_der(&self, x: &State) -> State {
        let mut out = self.apply_dz(x);
        for c in &Component::ALL[..4] {
            out += &self.apply_component(x, *c);
        }
        out
    }

    /// `D4 + D5`, first modes.
    pub fn apply_nder(&self, x: &State) -> State {
        self.apply_component(x, Component::D4) + self.apply_component(x, Component::D5)
    }

    /// `D6`, left multiplication by `Hhat = H3 + :Ahat Hhat2:`.
    pub fn apply_hhat(&self, x: &State) -> State {
        self.apply_component(x, Component::D6)
    }

    /// The full differential `D_{Zhat, Hhat}`.
    pub fn apply_full(&self, x: &State) -> State {
        self.apply_der(x) + self.apply_nder(x) + self.apply_hhat(x)
    }

    /// Filtration weight: generator bounds plus one per derivative.
    pub fn weight_bound(&self, x: &State) -> u32 {
        self.alg.max_weight(x).unwrap_or(0).max(0) as u32
    }

    pub fn weight_zero_part(&self, x: &State) -> State {
        x.filter(|m| self.alg.mono_weight(m) == 0)
    }
}
