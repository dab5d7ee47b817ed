#![allow(dead_code)]

use chiral_tduality::coeffring::{BasePatch, CoefficientForm as F};
use chiral_tduality::twisted::BundleScene;

/// Dimension 3 with non-constant fluxes: `A_bas = z dx`, `Ahat_bas = xy dz`, `H3 = xy dx dy dz`.
pub fn curved3d() -> BundleScene {
    let (x, y, z) = (F::coord(3, 0), F::coord(3, 1), F::coord(3, 2));
    let (dx, dy, dz) = (F::dx(3, 0), F::dx(3, 1), F::dx(3, 2));
    let a = z.wedge(&dx);
    let ahat = x.wedge(&y).wedge(&dz);
    let h3 = x.wedge(&y).wedge(&dx).wedge(&dy).wedge(&dz);
    BundleScene::new(BasePatch::standard(3), a, ahat, h3).unwrap()
}
