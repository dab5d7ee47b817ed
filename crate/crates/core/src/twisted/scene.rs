use crate::coeffring::{BasePatch, CoefficientForm};
use crate::error::{Error, Result};

/// Truncation limits carried by a scene.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SceneCaps {
    pub weight: u32,
    pub fourier: u32,
    pub poly_degree: u32,
}

impl Default for SceneCaps {
    fn default() -> Self {
        SceneCaps { weight: 3, fourier: 2, poly_degree: 8 }
    }
}

/// Local data of a pair of dual circle bundles over one patch: the basic parts
/// of both connections and the basic 3-form part of the flux.
///
/// `H = H3 + A ^ H2` with `H2 = d Ahat_bas`, and dually `Hhat2 = d A_bas`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleScene {
    patch: BasePatch,
    a_bas: CoefficientForm,
    ahat_bas: CoefficientForm,
    h3: CoefficientForm,
    pub caps: SceneCaps,
}

fn expect_degree(what: &str, f: &CoefficientForm, deg: u32) -> Result<()> {
    if f.is_zero() {
        return Ok(());
    }
    if f.homogeneous_degree() != Some(deg) || f.terms().any(|(k, _)| k.phase != 0) {
        return Err(Error::Precondition(format!("{what} must be a basic {deg}-form")));
    }
    Ok(())
}

impl BundleScene {
    /// Checks degrees and the closure condition `dH3 + Hhat2 ^ H2 = 0`.
    pub fn new(patch: BasePatch, a_bas: CoefficientForm, ahat_bas: CoefficientForm, h3: CoefficientForm) -> Result<Self> {
        let dim = patch.dim();
        for (what, f) in [("A_bas", &a_bas), ("Ahat_bas", &ahat_bas), ("H3", &h3)] {
            if f.dim() != dim {
                return Err(Error::Dimension { expected: dim, got: f.dim() });
            }
            expect_degree(what, f, if what == "H3" { 3 } else { 1 })?;
        }
        let scene = BundleScene { patch, a_bas, ahat_bas, h3, caps: SceneCaps::default() };
        let defect = scene.closure_defect();
        if !defect.is_zero() {
            return Err(Error::ClosureFails(format!("dH3 + Hhat2^H2 = {}", defect.display(&scene.patch))));
        }
        Ok(scene)
    }

    /// Base `x, y`, `A_bas = x dy`, `Ahat_bas = -y dx`, `H3 = 0`.
    pub fn std2d() -> Self {
        let x = CoefficientForm::coord(2, 0);
        let y = CoefficientForm::coord(2, 1);
        let a = x.wedge(&CoefficientForm::dx(2, 1));
        let ahat = -y.wedge(&CoefficientForm::dx(2, 0));
        Self::new(BasePatch::standard(2), a, ahat, CoefficientForm::zero(2)).expect("std2d is closed")
    }

    /// Flat connections and no flux.
    pub fn trivial(dim: usize) -> Self {
        let z = CoefficientForm::zero(dim);
        Self::new(BasePatch::standard(dim), z.clone(), z.clone(), z).expect("trivial scene is closed")
    }

    pub fn with_caps(mut self, caps: SceneCaps) -> Self {
        self.caps = caps;
        self
    }

    pub fn patch(&self) -> &BasePatch {
        &self.patch
    }

    pub fn dim(&self) -> usize {
        self.patch.dim()
    }

    pub fn a_bas(&self) -> &CoefficientForm {
        &self.a_bas
    }

    pub fn ahat_bas(&self) -> &CoefficientForm {
        &self.ahat_bas
    }

    pub fn h3(&self) -> &CoefficientForm {
        &self.h3
    }

    /// `H2 = d Ahat_bas`.
    pub fn h2(&self) -> CoefficientForm {
        self.ahat_bas.d()
    }

    /// `Hhat2 = d A_bas`.
    pub fn hhat2(&self) -> CoefficientForm {
        self.a_bas.d()
    }

    /// `i`-th component of `A_bas`.
    pub fn a_component(&self, i: usize) -> CoefficientForm {
        self.a_bas.contract_coord(i)
    }

    pub fn closure_defect(&self) -> CoefficientForm {
        self.h3.d() + self.hhat2().wedge(&self.h2())
    }

    pub fn is_trivial(&self) -> bool {
        self.a_bas.d().is_zero() && self.ahat_bas.d().is_zero() && self.h3.is_zero()
    }

    /// The dual scene: the two connections exchange roles.
    pub fn swapped(&self) -> Self {
        BundleScene {
            patch: self.patch.clone(),
            a_bas: self.ahat_bas.clone(),
            ahat_bas: self.a_bas.clone(),
            h3: self.h3.clone(),
            caps: self.caps,
        }
    }

    /// Same bundle, no flux.
    pub fn untwisted(&self) -> Self {
        BundleScene {
            patch: self.patch.clone(),
            a_bas: self.a_bas.clone(),
            ahat_bas: CoefficientForm::zero(self.dim()),
            h3: CoefficientForm::zero(self.dim()),
            caps: self.caps,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    #[test]
    fn std2d_fluxes() {
        let s = BundleScene::std2d();
        let area = CoefficientForm::dx(2, 0).wedge(&CoefficientForm::dx(2, 1));
        assert_eq!(s.h2(), area);
        assert_eq!(s.hhat2(), area);
        assert_eq!(s.swapped().swapped(), s);
    }

    #[test]
    fn closure_is_checked() {
        let p = BasePatch::standard(3);
        let x = CoefficientForm::coord(3, 0);
        let dxyz = CoefficientForm::dx(3, 0).wedge(&CoefficientForm::dx(3, 1)).wedge(&CoefficientForm::dx(3, 2));
        let z = CoefficientForm::zero(3);
        assert!(matches!(BundleScene::new(p.clone(), z.clone(), z.clone(), x.wedge(&dxyz)), Ok(_)));
        let p4 = BasePatch::standard(4);
        let a = CoefficientForm::coord(4, 0).wedge(&CoefficientForm::dx(4, 1));
        let ahat = CoefficientForm::coord(4, 2).wedge(&CoefficientForm::dx(4, 3)).scale(Q::from_integer(2));
        let z = CoefficientForm::zero(4);
        assert!(matches!(BundleScene::new(p4, a, ahat, z), Err(Error::ClosureFails(_))));
    }
}
