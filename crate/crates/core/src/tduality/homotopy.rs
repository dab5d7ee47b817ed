//! Trivial bundles: the contracting homotopy of the exotic complex and the
//! classical exactness of positive-momentum forms.

use std::sync::Arc;

use super::{DualityPair, TauConvention};
use crate::coeffring::CoefficientForm;
use crate::error::{Error, Result};
use crate::exotic::ExoticPatch;
use crate::twisted::{BundleScene, TwistedPatch};
use crate::vertex::{GenId, Letter, ModeOperator, State, VertexAlgebra};
use crate::Q;

/// `G^M_0 = (sum :iota_i dx^i:)_(1)` on an algebra with the circle layout.
fn base_homotopy(alg: &Arc<VertexAlgebra>, iota: &[GenId], x: &[GenId]) -> ModeOperator {
    let mut g = State::zero();
    for (&i, &c) in iota.iter().zip(x) {
        g += &alg.nprod(&State::gen(i), &State::letter(Letter::new(c, 1)));
    }
    ModeOperator::new(Arc::clone(alg), g, 1)
}

fn weight_grading(alg: &VertexAlgebra, x: &State) -> State {
    x.terms().map(|(m, q)| (m.clone(), *q * Q::from_integer(alg.mono_weight(m) as i128))).collect()
}

/// Homotopies on both sides of a trivial scene.
///
/// Twisted: `G_0 = G^M_0 + (:iA GammaA:)_(1)`.
/// Exotic: `Ghat_0 = G^M_0 + (:Ahat GammaA:)_(0)`, the image of `G_0` with
/// the weight-lowering piece `(:Ahat GammaA:)_(1)` traded for the zero mode.
pub struct TrivialHomotopy {
    tw: TwistedPatch,
    ex: ExoticPatch,
    tw_base: ModeOperator,
    tw_fiber: ModeOperator,
    ex_base: ModeOperator,
    ex_fiber: ModeOperator,
}

impl TrivialHomotopy {
    pub fn new(scene: &BundleScene) -> Result<Self> {
        if !scene.is_trivial() {
            return Err(Error::SceneNotTrivial("connections must be flat and H3 zero".into()));
        }
        let tw = TwistedPatch::new(scene);
        let ex = ExoticPatch::new(scene);
        let fiber = |alg: &Arc<VertexAlgebra>, a: GenId, gamma: GenId, k| {
            ModeOperator::new(Arc::clone(alg), alg.nprod(&State::gen(a), &State::gen(gamma)), k)
        };
        let (t, e) = (tw.ids().clone(), ex.ids().clone());
        Ok(TrivialHomotopy {
            tw_base: base_homotopy(tw.algebra(), &t.iota, &t.x),
            tw_fiber: fiber(tw.algebra(), t.contraction, t.gamma, 1),
            ex_base: base_homotopy(ex.algebra(), &e.iota, &e.x),
            ex_fiber: fiber(ex.algebra(), e.connection, e.gamma, 0),
            tw,
            ex,
        })
    }

    pub fn twisted(&self) -> &TwistedPatch {
        &self.tw
    }

    pub fn exotic(&self) -> &ExoticPatch {
        &self.ex
    }

    /// `G^M_0` and `(:iA GammaA:)_(1)` separately.
    pub fn twisted_parts(&self, x: &State) -> (State, State) {
        (self.tw_base.apply(x), self.tw_fiber.apply(x))
    }

    pub fn twisted_g0(&self, x: &State) -> State {
        let (a, b) = self.twisted_parts(x);
        a + b
    }

    /// `Ghat_0`.
    pub fn apply(&self, x: &State) -> State {
        self.ex_base.apply(x) + self.ex_fiber.apply(x)
    }

    /// `[D, G_0]` on the twisted side.
    pub fn twisted_commutator(&self, x: &State) -> State {
        self.tw.d(&self.twisted_g0(x)) + self.twisted_g0(&self.tw.d(x))
    }

    /// `[D_{Zhat,0}, Ghat_0]`.
    pub fn commutator(&self, x: &State) -> State {
        self.ex.apply_full(&self.apply(x)) + self.apply(&self.ex.apply_full(x))
    }

    pub fn twisted_weight(&self, x: &State) -> State {
        weight_grading(self.tw.algebra(), x)
    }

    /// `L_0`, with `Ahat` of weight zero.
    pub fn weight(&self, x: &State) -> State {
        weight_grading(self.ex.algebra(), x)
    }

    /// For a closed state of one positive weight `w`, the primitive
    /// `Ghat_0 a / w`, checked.
    pub fn certify_exact(&self, a: &State) -> Option<State> {
        let alg = self.ex.algebra();
        let mut weights = a.terms().map(|(m, _)| alg.mono_weight(m));
        let w = weights.next()?;
        if w <= 0 || weights.any(|v| v != w) || !self.ex.apply_full(a).is_zero() {
            return None;
        }
        let b = self.apply(a).scale(Q::new(1, w as i128));
        (self.ex.apply_full(&b) == *a).then_some(b)
    }
}

/// Witness that `omega_{-n} = (l0 + l1 dtheta) e^{-n theta}` is exact.
#[derive(Debug, Clone)]
pub struct ExactnessCertificate {
    pub omega: State,
    /// `l1 e^{-n theta} / n`.
    pub primitive: State,
    /// `tau(omega)`, closed for the exotic differential.
    pub tau_image: State,
}

impl DualityPair {
    /// Requires a trivial scene, `l0` even, `l1` odd, `dl0 = 0`, `dl1 = n l0`.
    pub fn classical_exactness(
        &self,
        l0: &CoefficientForm,
        l1: &CoefficientForm,
        n: i32,
        conv: TauConvention,
    ) -> Result<ExactnessCertificate> {
        let scene = self.scene();
        if !scene.is_trivial() {
            return Err(Error::SceneNotTrivial("classical exactness needs a product bundle".into()));
        }
        if n == 0 {
            return Err(Error::Precondition("n must be nonzero".into()));
        }
        if l0.parity() != Some(false) || (!l1.is_zero() && l1.parity() != Some(true)) {
            return Err(Error::Precondition("omega must be even: l0 even, l1 odd".into()));
        }
        let nq = Q::from_integer(n as i128);
        if !l0.d().is_zero() || l1.d() != l0.scale(nq) {
            return Err(Error::Precondition("need d l0 = 0 and d l1 - n l0 = 0".into()));
        }
        let tw = self.tw.algebra();
        let e = tw.phase_state(-n);
        let dtheta = State::gen(self.tw.ids().connection) - self.tw.form(scene.a_bas());
        let omega = tw.nprod(&self.tw.form(l0), &e) + tw.nprod(&self.tw.form(l1), &tw.nprod(&dtheta, &e));
        let primitive = tw.nprod(&self.tw.form(l1), &e).scale(Q::new(1, n as i128));
        if self.tw.d_h(&primitive) != omega {
            return Err(Error::Precondition("primitive check failed".into()));
        }
        let tau_image = self.tau(&omega, conv);
        if !self.ex.apply_full(&tau_image).is_zero() {
            return Err(Error::Precondition("tau(omega) is not closed".into()));
        }
        Ok(ExactnessCertificate { omega, primitive, tau_image })
    }
}
