//! The isomorphism between the twisted and exotic algebras, and the
//! degree-shifting T-duality maps built from it.

mod homotopy;
mod tau;

use std::sync::Arc;

pub use homotopy::{ExactnessCertificate, TrivialHomotopy};
pub use tau::TauConvention;

use tau::TauCache;

use crate::exotic::ExoticPatch;
use crate::twisted::{BundleScene, TwistedPatch};
use crate::vertex::{GenId, Homomorphism, State};

/// Twisted algebra on one side, exotic algebra on the other, over one scene.
pub struct DualityPair {
    tw: TwistedPatch,
    ex: ExoticPatch,
    phi: Homomorphism,
    psi: Homomorphism,
    cache: TauCache,
}

impl DualityPair {
    pub fn new(scene: &BundleScene) -> Self {
        let tw = TwistedPatch::new(scene);
        let ex = ExoticPatch::with_xi(scene, tw.xi().clone());
        let phi = Self::build_phi(&tw, &ex);
        let psi = Self::build_psi(&tw, &ex);
        DualityPair { tw, ex, phi, psi, cache: TauCache::default() }
    }

    fn identity_images(n: usize) -> Vec<State> {
        (0..n as GenId).map(State::gen).collect()
    }

    /// `A -> iAhat`, `iA -> Ahat`, `LA -> LA + H2`, `Lie_i -> Lie_i - :iAhat (iota_i H2):`, `e^{-n theta} -> s^n`.
    fn build_phi(tw: &TwistedPatch, ex: &ExoticPatch) -> Homomorphism {
        let (t, e) = (tw.ids(), ex.ids());
        let a = ex.algebra();
        let h2 = tw.scene().h2();
        let mut images = Self::identity_images(a.generators().len());
        images[t.connection as usize] = State::gen(e.contraction);
        images[t.contraction as usize] = State::gen(e.connection);
        images[t.la as usize] = State::gen(e.la) + ex.form(&h2);
        for i in 0..tw.scene().dim() {
            images[t.lie[i] as usize] =
                State::gen(e.lie[i]) - a.nprod(&State::gen(e.contraction), &ex.form(&h2.contract_coord(i)));
        }
        Homomorphism::new(Arc::clone(a), images, -1)
    }

    /// The inverse of `phi`.
    fn build_psi(tw: &TwistedPatch, ex: &ExoticPatch) -> Homomorphism {
        let (t, e) = (tw.ids(), ex.ids());
        let a = tw.algebra();
        let h2 = tw.scene().h2();
        let mut images = Self::identity_images(a.generators().len());
        images[e.contraction as usize] = State::gen(t.connection);
        images[e.connection as usize] = State::gen(t.contraction);
        images[e.la as usize] = State::gen(t.la) - tw.form(&h2);
        for i in 0..tw.scene().dim() {
            images[e.lie[i] as usize] =
                State::gen(t.lie[i]) + a.nprod(&State::gen(t.connection), &tw.form(&h2.contract_coord(i)));
        }
        Homomorphism::new(Arc::clone(a), images, -1)
    }

    pub fn scene(&self) -> &BundleScene {
        self.tw.scene()
    }

    pub fn twisted(&self) -> &TwistedPatch {
        &self.tw
    }

    pub fn exotic(&self) -> &ExoticPatch {
        &self.ex
    }

    pub fn phi_map(&self) -> &Homomorphism {
        &self.phi
    }

    pub fn psi_map(&self) -> &Homomorphism {
        &self.psi
    }

    pub fn phi(&self, x: &State) -> State {
        self.phi.apply(x)
    }

    pub fn psi_hat(&self, x: &State) -> State {
        self.psi.apply(x)
    }
}
