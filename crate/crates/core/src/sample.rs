//! Seeded random states and forms for identity sweeps.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeffring::CoefficientForm;
use crate::vertex::{GenId, Letter, State, VertexAlgebra};
use crate::Q;

/// Bounds on sampled monomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub max_len: usize,
    pub max_weight: u32,
    pub max_phase: u32,
}

impl Default for Shape {
    fn default() -> Self {
        Shape { max_len: 3, max_weight: 3, max_phase: 2 }
    }
}

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A normally ordered product of random letters, times a random phase.
    /// Never zero.
    pub fn monomial(&mut self, alg: &VertexAlgebra, shape: Shape) -> State {
        let gens: Vec<GenId> = (0..alg.generators().len() as GenId).collect();
        loop {
            let len = self.rng.gen_range(1..=shape.max_len);
            let mut budget = shape.max_weight as i32;
            let mut factors = Vec::new();
            for _ in 0..len {
                let g = *gens.choose(&mut self.rng).unwrap();
                let w = alg.generator(g).weight;
                if w > budget {
                    continue;
                }
                let deriv = self.rng.gen_range(0..=(budget - w).min(2)) as u8;
                budget -= w + deriv as i32;
                factors.push(State::letter(Letter::new(g, deriv)));
            }
            if alg.has_phases() && shape.max_phase > 0 {
                let p = shape.max_phase as i32;
                factors.push(alg.phase_state(self.rng.gen_range(-p..=p)));
            }
            if factors.is_empty() {
                continue;
            }
            let s = alg.nprod_all(&factors);
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// Uniform in `0..n`.
    pub fn rng_index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// Uniform in `lo..=hi`.
    pub fn rng_range(&mut self, lo: i32, hi: i32) -> i32 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn monomials(&mut self, alg: &VertexAlgebra, shape: Shape, count: usize) -> Vec<State> {
        (0..count).map(|_| self.monomial(alg, shape)).collect()
    }

    /// Random polynomial form on `dim` coordinates: up to three terms of
    /// degree at most `max_degree`, coefficients in `-3..=3`.
    pub fn form(&mut self, dim: usize, max_degree: u32, max_poly: u32) -> CoefficientForm {
        let mut out = CoefficientForm::zero(dim);
        for _ in 0..self.rng.gen_range(1..=3) {
            out += &self.form_term(dim, max_degree, max_poly);
        }
        out
    }

    /// Random form of exactly the given degree (possibly zero).
    pub fn form_of_degree(&mut self, dim: usize, degree: u32, max_poly: u32) -> CoefficientForm {
        let mut out = CoefficientForm::zero(dim);
        for _ in 0..self.rng.gen_range(1..=3) {
            let masks: Vec<u32> = (0..1u32 << dim).filter(|m| m.count_ones() == degree).collect();
            let Some(&dx) = masks.choose(&mut self.rng) else { return out };
            out += &self.term(dim, dx, max_poly);
        }
        out
    }

    fn form_term(&mut self, dim: usize, max_degree: u32, max_poly: u32) -> CoefficientForm {
        let masks: Vec<u32> = (0..1u32 << dim).filter(|m| m.count_ones() <= max_degree).collect();
        let dx = *masks.choose(&mut self.rng).unwrap();
        self.term(dim, dx, max_poly)
    }

    fn term(&mut self, dim: usize, dx: u32, max_poly: u32) -> CoefficientForm {
        let mut exps = vec![0u16; dim];
        for _ in 0..self.rng.gen_range(0..=max_poly) {
            exps[self.rng.gen_range(0..dim)] += 1;
        }
        let q = loop {
            let q = self.rng.gen_range(-3i128..=3);
            if q != 0 {
                break q;
            }
        };
        CoefficientForm::term(dim, Q::from_integer(q), exps, dx, 0)
    }
}
