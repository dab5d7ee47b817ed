//! Weight-zero exotic forms `(w0 + Ahat ^ w1) s^n` and their classical differential.

use super::ExoticPatch;
use crate::coeffring::CoefficientForm;
use crate::twisted::BundleScene;
use crate::vertex::State;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExoticForm {
    pub w0: CoefficientForm,
    pub w1: CoefficientForm,
    pub n: i32,
}

impl ExoticForm {
    pub fn new(w0: CoefficientForm, w1: CoefficientForm, n: i32) -> Self {
        ExoticForm { w0, w1, n }
    }

    /// `:w0 s^n: + :Ahat w1 s^n:`.
    pub fn to_state(&self, ex: &ExoticPatch) -> State {
        let a = ex.algebra();
        let sn = a.phase_state(self.n);
        let w1 = a.nprod(&State::gen(ex.ids().connection), &ex.form(&self.w1));
        a.nprod(&ex.form(&self.w0), &sn) + a.nprod(&w1, &sn)
    }

    /// Inverse of [`Self::to_state`] on one sector; `None` if the state has weight.
    pub fn from_state(ex: &ExoticPatch, x: &State, n: i32) -> Option<Self> {
        let a = ex.algebra();
        let ahat = ex.ids().connection;
        let sector = x.sector(n);
        let plain = sector.filter(|m| m.letters().first().map(|l| l.gen) != Some(ahat));
        let with_a = sector.filter(|m| m.letters().first().map(|l| l.gen) == Some(ahat));
        let strip = |s: &State| -> State { s.terms().map(|(m, q)| (m.with_phase(0), *q)).collect() };
        let w0 = a.as_form(&strip(&plain))?;
        let tails: State = with_a.terms().map(|(m, q)| (m.tail().with_phase(0), *q)).collect();
        let w1 = a.as_form(&tails)?;
        Some(ExoticForm { w0, w1, n })
    }
}

/// `(nabla^{L^n} - n iota_Ahat + Hhat)` on `(w0 + Ahat ^ w1) s^n`, where
/// `nabla g = dg + n A_bas ^ g`, `dAhat = H2` and `Hhat = H3 + Ahat ^ Hhat2`.
pub fn hm_differential(scene: &BundleScene, form: &ExoticForm) -> ExoticForm {
    let n = crate::Q::from_integer(form.n as i128);
    let (w0, w1) = (&form.w0, &form.w1);
    let na = scene.a_bas().scale(n);
    let h3 = scene.h3();
    let nabla = |g: &CoefficientForm| g.d() + na.wedge(g);
    let out0 = nabla(w0) + scene.h2().wedge(w1) - w1.scale(n) + h3.wedge(w0);
    let out1 = -nabla(w1) - h3.wedge(w1) + scene.hhat2().wedge(w0);
    ExoticForm { w0: out0, w1: out1, n: form.n }
}
