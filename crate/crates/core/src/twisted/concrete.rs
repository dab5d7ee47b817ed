//! The free-field realization of the twisted algebra on `patch x S^1`.

use super::BundleScene;
use crate::cdr::Cdr;
use crate::coeffring::CoefficientForm;
use crate::vertex::{State, VertexAlgebra};

/// Twisted generators written in `b c beta gamma` letters, circle angle `t`.
pub struct ConcreteModel {
    cdr: Cdr,
    scene: BundleScene,
}

impl ConcreteModel {
    pub fn new(scene: &BundleScene) -> Self {
        ConcreteModel { cdr: Cdr::with_circle(scene.patch().clone(), "t"), scene: scene.clone() }
    }

    pub fn cdr(&self) -> &Cdr {
        &self.cdr
    }

    pub fn algebra(&self) -> &VertexAlgebra {
        self.cdr.algebra()
    }

    fn theta(&self) -> usize {
        self.scene.dim()
    }

    pub fn form(&self, f: &CoefficientForm) -> State {
        self.cdr.form(f)
    }

    /// `A = A_bas + dt`.
    pub fn connection(&self) -> State {
        self.form(self.scene.a_bas()) + self.cdr.c(self.theta())
    }

    pub fn iota_a(&self) -> State {
        self.cdr.b(self.theta())
    }

    /// Contraction with the horizontal lift of `d/dx^i`.
    pub fn iota(&self, i: usize) -> State {
        let a_i = self.form(&self.scene.a_component(i));
        self.cdr.b(i) - self.cdr.nprod(&a_i, &self.cdr.b(self.theta()))
    }

    /// `D(iota_i) + iota_i H`.
    pub fn lie(&self, i: usize) -> State {
        let s = &self.scene;
        let twist = self.form(&s.h3().contract_coord(i))
            - self.cdr.nprod(&self.connection(), &self.form(&s.h2().contract_coord(i)));
        self.cdr.d(&self.iota(i)) + twist
    }

    pub fn lie_a(&self) -> State {
        self.cdr.beta(self.theta()) + self.form(&self.scene.h2())
    }

    /// `Gamma = G_(0) A`.
    pub fn gamma_a(&self) -> State {
        self.algebra().product(0, &self.cdr.g_field(), &self.connection())
    }

    /// `xi = dA/dz - D(Gamma)`, expressed through base forms only.
    pub fn xi(&self) -> State {
        self.algebra().translate(&self.connection()) - self.cdr.d(&self.gamma_a())
    }

    /// `H = H3 + A ^ H2`.
    pub fn flux(&self) -> State {
        self.form(self.scene.h3()) + self.cdr.nprod(&self.connection(), &self.form(&self.scene.h2()))
    }
}
