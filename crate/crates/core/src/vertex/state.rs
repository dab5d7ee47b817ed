use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use crate::Q;

pub type GenId = u16;

/// A generator with a number of translations applied.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: GenId,
    pub deriv: u8,
}

impl Letter {
    pub const fn new(gen: GenId, deriv: u8) -> Self {
        Letter { gen, deriv }
    }

    pub fn d(self, k: usize) -> Letter {
        let deriv = self.deriv as usize + k;
        assert!(deriv < u8::MAX as usize, "derivative order overflow");
        Letter { gen: self.gen, deriv: deriv as u8 }
    }
}

/// Right-nested normally ordered word `:l1 :l2 ... :lk E_n:...::` with the
/// letters sorted and the phase `E_n` innermost (`E_0` is the vacuum).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    letters: Vec<Letter>,
    phase: i32,
}

impl Monomial {
    pub fn vacuum() -> Self {
        Monomial { letters: Vec::new(), phase: 0 }
    }

    pub fn phase_only(n: i32) -> Self {
        Monomial { letters: Vec::new(), phase: n }
    }

    pub fn letter(l: Letter) -> Self {
        Monomial { letters: vec![l], phase: 0 }
    }

    /// Caller guarantees the letters are already in canonical order.
    pub(crate) fn from_sorted(letters: Vec<Letter>, phase: i32) -> Self {
        debug_assert!(letters.windows(2).all(|w| w[0] <= w[1]));
        Monomial { letters, phase }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn phase(&self) -> i32 {
        self.phase
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_vacuum(&self) -> bool {
        self.letters.is_empty() && self.phase == 0
    }

    pub fn is_pure_phase(&self) -> bool {
        self.letters.is_empty() && self.phase != 0
    }

    /// Everything after the leading letter.
    pub fn tail(&self) -> Monomial {
        Monomial { letters: self.letters[1..].to_vec(), phase: self.phase }
    }

    pub(crate) fn prepend(&self, l: Letter) -> Monomial {
        let mut letters = Vec::with_capacity(self.letters.len() + 1);
        letters.push(l);
        letters.extend_from_slice(&self.letters);
        Monomial { letters, phase: self.phase }
    }

    pub fn with_phase(&self, n: i32) -> Monomial {
        Monomial { letters: self.letters.clone(), phase: n }
    }
}

/// Finite rational combination of canonical monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct State {
    terms: BTreeMap<Monomial, Q>,
}

impl State {
    pub fn zero() -> Self {
        State::default()
    }

    pub fn vacuum() -> Self {
        Self::mono(Monomial::vacuum())
    }

    pub fn scalar(q: Q) -> Self {
        Self::mono_q(Monomial::vacuum(), q)
    }

    pub fn mono(m: Monomial) -> Self {
        Self::mono_q(m, Q::one())
    }

    pub fn mono_q(m: Monomial, q: Q) -> Self {
        let mut s = State::zero();
        s.add_term(m, q);
        s
    }

    pub fn letter(l: Letter) -> Self {
        Self::mono(Monomial::letter(l))
    }

    pub fn gen(g: GenId) -> Self {
        Self::letter(Letter::new(g, 0))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).copied().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, m: Monomial, q: Q) {
        if q.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(q);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += q;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &State, q: Q) {
        if q.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), *c * q);
        }
    }

    pub fn scale(&self, q: Q) -> State {
        if q.is_zero() {
            return State::zero();
        }
        State { terms: self.terms.iter().map(|(m, c)| (m.clone(), *c * q)).collect() }
    }

    /// Keep only the terms whose monomial satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> State {
        State { terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), *c)).collect() }
    }

    /// Component in phase sector `n`.
    pub fn sector(&self, n: i32) -> State {
        self.filter(|m| m.phase == n)
    }

    pub fn phases(&self) -> Vec<i32> {
        let mut v: Vec<i32> = self.terms.keys().map(|m| m.phase).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// The vacuum coefficient when the state is a pure scalar.
    pub fn as_scalar(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Monomial::vacuum()).copied(),
            _ => None,
        }
    }
}

impl AddAssign<&State> for State {
    fn add_assign(&mut self, rhs: &State) {
        self.add_scaled(rhs, Q::one());
    }
}

impl SubAssign<&State> for State {
    fn sub_assign(&mut self, rhs: &State) {
        self.add_scaled(rhs, -Q::one());
    }
}

impl Add for State {
    type Output = State;
    fn add(mut self, rhs: State) -> State {
        self += &rhs;
        self
    }
}

impl Add<&State> for &State {
    type Output = State;
    fn add(self, rhs: &State) -> State {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for State {
    type Output = State;
    fn sub(mut self, rhs: State) -> State {
        self -= &rhs;
        self
    }
}

impl Sub<&State> for &State {
    type Output = State;
    fn sub(self, rhs: &State) -> State {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for State {
    type Output = State;
    fn neg(self) -> State {
        self.scale(-Q::one())
    }
}

impl Neg for &State {
    type Output = State;
    fn neg(self) -> State {
        self.scale(-Q::one())
    }
}

impl FromIterator<(Monomial, Q)> for State {
    fn from_iter<I: IntoIterator<Item = (Monomial, Q)>>(iter: I) -> Self {
        let mut s = State::zero();
        for (m, q) in iter {
            s.add_term(m, q);
        }
        s
    }
}

/// Polynomial in the formal variable lambda with state coefficients;
/// `coeffs[k]` multiplies `lambda^k`, so `a_(k) b = k! * coeffs[k]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LambdaPoly {
    coeffs: Vec<State>,
}

impl LambdaPoly {
    pub fn zero() -> Self {
        LambdaPoly::default()
    }

    pub fn constant(s: State) -> Self {
        let mut p = LambdaPoly::zero();
        p.add_at(0, &s, Q::one());
        p
    }

    pub fn monomial(k: usize, s: State) -> Self {
        let mut p = LambdaPoly::zero();
        p.add_at(k, &s, Q::one());
        p
    }

    pub fn from_coeffs(coeffs: Vec<State>) -> Self {
        let mut p = LambdaPoly { coeffs };
        p.trim();
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(State::is_zero)
    }

    /// Highest power with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|s| !s.is_zero())
    }

    pub fn coeff(&self, k: usize) -> State {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn coeff_ref(&self, k: usize) -> Option<&State> {
        self.coeffs.get(k)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &State)> {
        self.coeffs.iter().enumerate().filter(|(_, s)| !s.is_zero())
    }

    pub fn add_at(&mut self, k: usize, s: &State, q: Q) {
        if s.is_zero() || q.is_zero() {
            return;
        }
        if self.coeffs.len() <= k {
            self.coeffs.resize(k + 1, State::zero());
        }
        self.coeffs[k].add_scaled(s, q);
        self.trim();
    }

    pub fn add_poly(&mut self, other: &LambdaPoly, q: Q) {
        for (k, s) in other.iter() {
            self.add_at(k, s, q);
        }
    }

    pub fn scale(&self, q: Q) -> LambdaPoly {
        LambdaPoly::from_coeffs(self.coeffs.iter().map(|s| s.scale(q)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(State::is_zero) {
            self.coeffs.pop();
        }
    }
}

impl Add<&LambdaPoly> for &LambdaPoly {
    type Output = LambdaPoly;
    fn add(self, rhs: &LambdaPoly) -> LambdaPoly {
        let mut out = self.clone();
        out.add_poly(rhs, Q::one());
        out
    }
}

impl Sub<&LambdaPoly> for &LambdaPoly {
    type Output = LambdaPoly;
    fn sub(self, rhs: &LambdaPoly) -> LambdaPoly {
        let mut out = self.clone();
        out.add_poly(rhs, -Q::one());
        out
    }
}
