//! The chiral de Rham complex of a coordinate patch, realized by free
//! `b c beta gamma` fields, optionally with one periodic coordinate.

mod topological;

use std::sync::Arc;

use num_traits::One;

pub use topological::{topological_table, TopologicalEntry};

use crate::coeffring::{BasePatch, CoefficientForm, PolyMap, VectorField};
use crate::error::{Error, Result};
use crate::vertex::{FormLetters, GenId, Generator, Homomorphism, LambdaPoly, Letter, ModeOperator, PhaseRule, State, VertexAlgebra};
use crate::Q;

/// Free-field chiral de Rham complex of `patch`, or of `patch x S^1` when a
/// circle coordinate is present.
#[derive(Debug, Clone)]
pub struct Cdr {
    alg: Arc<VertexAlgebra>,
    patch: BasePatch,
    circle: Option<String>,
    beta: Vec<GenId>,
    b: Vec<GenId>,
    c: Vec<GenId>,
    gamma: Vec<GenId>,
}

impl Cdr {
    pub fn new(patch: BasePatch) -> Self {
        Self::build(patch, None)
    }

    /// Patch times a circle with angle `theta`; phases `e^{n theta}` are included.
    pub fn with_circle(patch: BasePatch, theta: &str) -> Self {
        Self::build(patch, Some(theta.to_string()))
    }

    fn build(patch: BasePatch, circle: Option<String>) -> Self {
        let mut names: Vec<String> = patch.names().to_vec();
        names.extend(circle.iter().cloned());
        let n = names.len();
        let mut gens = Vec::new();
        for i in 0..n {
            gens.push(Generator::new(format!("beta{}", i + 1), false, 1, 0));
        }
        for i in 0..n {
            gens.push(Generator::new(format!("b{}", i + 1), true, 1, -1));
        }
        for name in &names {
            gens.push(Generator::new(format!("d{name}"), true, 0, 1));
        }
        for name in &names {
            gens.push(Generator::new(name.clone(), false, 0, 0));
        }
        let ids = |k: usize| -> Vec<GenId> { (k * n..(k + 1) * n).map(|g| g as GenId).collect() };
        let (beta, b, c, gamma) = (ids(0), ids(1), ids(2), ids(3));
        let mut alg = VertexAlgebra::new(if circle.is_some() { "cdr-circle" } else { "cdr" }, gens);
        let one = LambdaPoly::constant(State::vacuum());
        for i in 0..n {
            alg.set_bracket(beta[i], gamma[i], one.clone());
            alg.set_bracket(gamma[i], beta[i], one.scale(-Q::one()));
            alg.set_bracket(b[i], c[i], one.clone());
            alg.set_bracket(c[i], b[i], one.clone());
        }
        let m = patch.dim();
        alg.set_form_letters(FormLetters { x: gamma[..m].to_vec(), c: c[..m].to_vec() });
        if circle.is_some() {
            let t = n - 1;
            let mut rule = PhaseRule {
                symbol: "ph".into(),
                theta: State::letter(Letter::new(gamma[t], 1)),
                ..Default::default()
            };
            rule.response.insert(beta[t], one);
            alg.set_phase_rule(rule);
        }
        Cdr { alg: Arc::new(alg), patch, circle, beta, b, c, gamma }
    }

    pub fn algebra(&self) -> &Arc<VertexAlgebra> {
        &self.alg
    }

    pub fn patch(&self) -> &BasePatch {
        &self.patch
    }

    pub fn base_dim(&self) -> usize {
        self.patch.dim()
    }

    /// Number of free-field coordinates, circle included.
    pub fn rank(&self) -> usize {
        self.beta.len()
    }

    pub fn has_circle(&self) -> bool {
        self.circle.is_some()
    }

    /// Index of the circle coordinate.
    pub fn circle_index(&self) -> Option<usize> {
        self.circle.as_ref().map(|_| self.rank() - 1)
    }

    pub fn beta(&self, i: usize) -> State {
        State::gen(self.beta[i])
    }

    pub fn b(&self, i: usize) -> State {
        State::gen(self.b[i])
    }

    pub fn c(&self, i: usize) -> State {
        State::gen(self.c[i])
    }

    /// Coordinate function; for the circle only its derivative is meaningful.
    pub fn gamma(&self, i: usize) -> State {
        State::gen(self.gamma[i])
    }

    pub fn dgamma(&self, i: usize) -> State {
        State::letter(Letter::new(self.gamma[i], 1))
    }

    pub fn gen_ids(&self) -> (&[GenId], &[GenId], &[GenId], &[GenId]) {
        (&self.beta, &self.b, &self.c, &self.gamma)
    }

    pub fn phase(&self, n: i32) -> State {
        self.alg.phase_state(n)
    }

    /// A form on the base patch.
    pub fn form(&self, f: &CoefficientForm) -> State {
        self.alg.form(f)
    }

    pub fn nprod(&self, a: &State, b: &State) -> State {
        self.alg.nprod(a, b)
    }

    fn sum(&self, f: impl Fn(usize) -> State) -> State {
        (0..self.rank()).fold(State::zero(), |acc, i| acc + f(i))
    }

    pub fn q_field(&self) -> State {
        self.sum(|i| self.nprod(&self.beta(i), &self.c(i)))
    }

    pub fn g_field(&self) -> State {
        self.sum(|i| self.nprod(&self.b(i), &self.dgamma(i)))
    }

    /// `J = sum_i :c^i b^i:`, so that `J_0` counts form degree.
    pub fn j_field(&self) -> State {
        self.sum(|i| self.nprod(&self.c(i), &self.b(i)))
    }

    pub fn l_field(&self) -> State {
        self.sum(|i| {
            let dc = self.alg.translate(&self.c(i));
            self.nprod(&self.beta(i), &self.dgamma(i)) - self.nprod(&self.b(i), &dc)
        })
    }

    /// Named fields, for display.
    pub fn named_fields(&self) -> Vec<(&'static str, State)> {
        vec![("Q", self.q_field()), ("G", self.g_field()), ("J", self.j_field()), ("L", self.l_field())]
    }

    /// `D = Q_(0)`.
    pub fn d_operator(&self) -> ModeOperator {
        ModeOperator::new(Arc::clone(&self.alg), self.q_field(), 0)
    }

    pub fn d(&self, x: &State) -> State {
        self.alg.product(0, &self.q_field(), x)
    }

    /// `G_0 = G_(1)`.
    pub fn g0(&self, x: &State) -> State {
        self.alg.product(1, &self.g_field(), x)
    }

    /// `L_0 = L_(1)`.
    pub fn l0(&self, x: &State) -> State {
        self.alg.product(1, &self.l_field(), x)
    }

    /// `J_0 = J_(0)`.
    pub fn j0(&self, x: &State) -> State {
        self.alg.product(0, &self.j_field(), x)
    }

    fn field_components(&self, x: &VectorField) -> Vec<CoefficientForm> {
        assert_eq!(x.dim(), self.base_dim(), "vector field lives on the base patch");
        let mut comps = x.components().to_vec();
        if self.has_circle() {
            comps.push(x.vertical().clone());
        } else {
            assert!(x.vertical().is_zero(), "vertical component without a circle");
        }
        comps
    }

    /// `iota_X = sum_i :f_i b^i:`.
    pub fn iota(&self, x: &VectorField) -> State {
        let comps = self.field_components(x);
        let mut out = State::zero();
        for (i, f) in comps.iter().enumerate() {
            out += &self.nprod(&self.form(f), &self.b(i));
        }
        out
    }

    /// `L_X = D(iota_X)`.
    pub fn lie(&self, x: &VectorField) -> State {
        self.d(&self.iota(x))
    }

    /// `sum_i :beta^i f_i: + sum_{ij} :(d_i f_j) c^i b^j:`.
    pub fn lie_explicit(&self, x: &VectorField) -> State {
        let comps = self.field_components(x);
        let mut out = State::zero();
        for (i, f) in comps.iter().enumerate() {
            out += &self.nprod(&self.beta(i), &self.form(f));
        }
        for (j, f) in comps.iter().enumerate() {
            for i in 0..self.base_dim() {
                let dfi = self.form(&f.partial(i));
                out += &self.alg.nprod_all(&[dfi, self.c(i), self.b(j)]);
            }
        }
        out
    }

    /// Change of coordinates: the morphism from the patch in the new
    /// coordinates `g(x)` back to this one; `f` must invert `g`.
    pub fn coordinate_change(&self, g: &PolyMap, f: &PolyMap) -> Result<Homomorphism> {
        if self.has_circle() {
            return Err(Error::Precondition("coordinate changes act on plain patches".into()));
        }
        let n = self.base_dim();
        if g.target_dim() != n || g.source_dim() != n {
            return Err(Error::Dimension { expected: n, got: g.target_dim() });
        }
        if !g.is_inverse_of(f) {
            return Err(Error::NotInvertible("the supplied inverse does not invert the map".into()));
        }
        let mut images = vec![State::zero(); self.alg.generators().len()];
        for i in 0..n {
            images[self.gamma[i] as usize] = self.form(&g.components()[i]);
            images[self.c[i] as usize] = self.form(&g.components()[i].d());
            let mut bt = State::zero();
            let mut bet = State::zero();
            for j in 0..n {
                let h = self.form(&g.pull(&f.jacobian(j, i)));
                bt += &self.nprod(&h, &self.b(j));
                bet += &self.nprod(&self.beta(j), &h);
            }
            for k in 0..n {
                for l in 0..n {
                    let second = g.pull(&f.jacobian(k, i).partial(l));
                    if second.is_zero() {
                        continue;
                    }
                    for r in 0..n {
                        let coeff = second.wedge(&g.jacobian(l, r));
                        bet += &self.alg.nprod_all(&[self.form(&coeff), self.c(r), self.b(k)]);
                    }
                }
            }
            images[self.b[i] as usize] = bt;
            images[self.beta[i] as usize] = bet;
        }
        Ok(Homomorphism::new(Arc::clone(&self.alg), images, 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane() -> Cdr {
        Cdr::new(BasePatch::standard(2))
    }

    #[test]
    fn free_field_products() {
        let cdr = plane();
        let a = cdr.algebra();
        let beta = cdr.beta(0);
        let x = cdr.gamma(0);
        assert_eq!(a.product(0, &beta, &x), State::vacuum());
        assert_eq!(a.product(-2, &beta, &x), a.nprod(&a.translate(&beta), &x));
        assert_eq!(a.nprod(&x, &beta), a.nprod(&beta, &x));
        let b = cdr.b(0);
        let c = cdr.c(0);
        assert_eq!(a.nprod(&c, &b), -a.nprod(&b, &c));
        assert!(a.nprod(&b, &b).is_zero());
    }

    #[test]
    fn lie_matches_explicit_formula() {
        let cdr = plane();
        let x = CoefficientForm::coord(2, 0);
        let y = CoefficientForm::coord(2, 1);
        let field = VectorField::new(vec![y.wedge(&y), x.clone()]);
        assert_eq!(cdr.lie(&field), cdr.lie_explicit(&field));
        let simple = VectorField::new(vec![CoefficientForm::zero(2), x]);
        let expected = cdr.nprod(&cdr.beta(1), &cdr.gamma(0)) + cdr.nprod(&cdr.c(0), &cdr.b(1));
        assert_eq!(cdr.lie(&simple), expected);
    }

    #[test]
    fn d_is_de_rham_on_forms() {
        let cdr = plane();
        let x = CoefficientForm::coord(2, 0);
        let y = CoefficientForm::coord(2, 1);
        let w = x.wedge(&x).wedge(&y).wedge(&CoefficientForm::dx(2, 1));
        assert_eq!(cdr.d(&cdr.form(&w)), cdr.form(&w.d()));
    }

    #[test]
    fn phase_derivative_on_circle() {
        let cdr = Cdr::with_circle(BasePatch::standard(1), "t");
        let a = cdr.algebra();
        let e2 = cdr.phase(2);
        assert_eq!(a.translate(&e2), a.nprod(&cdr.dgamma(1), &e2).scale(Q::from_integer(2)));
        assert_eq!(cdr.d(&e2), a.nprod(&cdr.c(1), &e2).scale(Q::from_integer(2)));
    }
}
