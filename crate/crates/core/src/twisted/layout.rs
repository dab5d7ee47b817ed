use crate::coeffring::{BasePatch, CoefficientForm};
use crate::vertex::{FormLetters, GenId, Generator, LambdaPoly, State, VertexAlgebra};

/// Generator ids shared by the twisted and exotic presentations:
/// `Lie_i, iota_i, L_A, <odd weight 1>, Gamma, <odd weight 0>, dx.., x..`.
#[derive(Debug, Clone)]
pub struct CircleLayout {
    pub lie: Vec<GenId>,
    pub iota: Vec<GenId>,
    pub la: GenId,
    /// `iota_A` (twisted) or `iota_Ahat` (exotic).
    pub contraction: GenId,
    pub gamma: GenId,
    /// `A` (twisted) or `Ahat` (exotic).
    pub connection: GenId,
    pub dx: Vec<GenId>,
    pub x: Vec<GenId>,
}

impl CircleLayout {
    pub fn generators(patch: &BasePatch, contraction: &str, connection: &str) -> (Vec<Generator>, CircleLayout) {
        let m = patch.dim();
        let mut gens = Vec::new();
        let mut push = |g: Generator| {
            gens.push(g);
            (gens.len() - 1) as GenId
        };
        let lie = (0..m).map(|i| push(Generator::new(format!("Lie{}", i + 1), false, 1, 0))).collect();
        let iota = (0..m).map(|i| push(Generator::new(format!("iota{}", i + 1), true, 1, -1))).collect();
        let la = push(Generator::new("LA", false, 1, 0));
        let contraction = push(Generator::new(contraction, true, 1, -1));
        let gamma = push(Generator::new("GammaA", false, 1, 0));
        let connection = push(Generator::new(connection, true, 0, 1));
        let dx = patch.names().iter().map(|n| push(Generator::new(format!("d{n}"), true, 0, 1))).collect();
        let x = patch.names().iter().map(|n| push(Generator::new(n.clone(), false, 0, 0))).collect();
        (gens, CircleLayout { lie, iota, la, contraction, gamma, connection, dx, x })
    }

    pub fn form_letters(&self) -> FormLetters {
        FormLetters { x: self.x.clone(), c: self.dx.clone() }
    }

    /// `[L_i d x^k] = delta`, `[iota_i d dx^k] = delta`.
    pub fn set_form_brackets(&self, alg: &mut VertexAlgebra) {
        let one = LambdaPoly::constant(State::vacuum());
        for i in 0..self.lie.len() {
            alg.set_bracket(self.lie[i], self.x[i], one.clone());
            alg.set_bracket(self.iota[i], self.dx[i], one.clone());
        }
    }
}

/// `iota_i iota_j w`.
pub fn contract2(w: &CoefficientForm, i: usize, j: usize) -> CoefficientForm {
    w.contract_coord(j).contract_coord(i)
}

/// Lie derivative along `d/dx^i`.
pub fn lie_coord(w: &CoefficientForm, i: usize) -> CoefficientForm {
    w.contract_coord(i).d() + w.d().contract_coord(i)
}
