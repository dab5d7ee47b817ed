//! Polynomial differential forms on a coordinate patch, with a circle phase.
//!
//! A [`CoefficientForm`] is a finite sum of terms `q * x^a * dx^I * e^{n theta}`.
//! The phase is carried along untouched by the base operations, which only see
//! the horizontal directions.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Q;

/// Named coordinates of a base patch.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasePatch {
    names: Vec<String>,
}

impl BasePatch {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        BasePatch { names: names.into_iter().map(Into::into).collect() }
    }

    /// `x, y, z, w` for small dimensions, `x1, x2, ...` beyond that.
    pub fn standard(dim: usize) -> Self {
        const SHORT: [&str; 4] = ["x", "y", "z", "w"];
        if dim <= SHORT.len() {
            Self::new(SHORT[..dim].iter().copied())
        } else {
            Self::new((1..=dim).map(|i| format!("x{i}")))
        }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Limits on polynomial degree and Fourier mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub poly_degree: u32,
    pub fourier: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { poly_degree: 8, fourier: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormKey {
    pub phase: i32,
    pub dx: u32,
    pub exps: Vec<u16>,
}

impl FormKey {
    pub fn degree(&self) -> u32 {
        self.dx.count_ones()
    }

    pub fn poly_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }
}

/// Sign of `dx^a ^ dx^b` relative to the sorted word, or `None` if they overlap.
pub fn wedge_sign(a: u32, b: u32) -> Option<i32> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(if swaps % 2 == 0 { 1 } else { -1 })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoefficientForm {
    dim: usize,
    terms: BTreeMap<FormKey, Q>,
}

impl CoefficientForm {
    pub fn zero(dim: usize) -> Self {
        CoefficientForm { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, q: Q) -> Self {
        Self::term(dim, q, vec![0; dim], 0, 0)
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Q::one())
    }

    pub fn int(dim: usize, n: i64) -> Self {
        Self::constant(dim, Q::from_integer(n as i128))
    }

    pub fn coord(dim: usize, i: usize) -> Self {
        let mut exps = vec![0; dim];
        exps[i] = 1;
        Self::term(dim, Q::one(), exps, 0, 0)
    }

    pub fn dx(dim: usize, i: usize) -> Self {
        Self::term(dim, Q::one(), vec![0; dim], 1 << i, 0)
    }

    pub fn phase(dim: usize, n: i32) -> Self {
        Self::term(dim, Q::one(), vec![0; dim], 0, n)
    }

    pub fn term(dim: usize, q: Q, exps: Vec<u16>, dx: u32, phase: i32) -> Self {
        let mut f = Self::zero(dim);
        f.add_term(FormKey { phase, dx, exps }, q);
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FormKey, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: FormKey, q: Q) {
        if q.is_zero() {
            return;
        }
        debug_assert_eq!(key.exps.len(), self.dim);
        match self.terms.entry(key) {
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

    /// Degree-`k` component.
    pub fn part(&self, k: u32) -> Self {
        self.filter(|key| key.degree() == k)
    }

    /// Component in phase sector `n`.
    pub fn sector(&self, n: i32) -> Self {
        self.filter(|key| key.phase == n)
    }

    fn filter(&self, keep: impl Fn(&FormKey) -> bool) -> Self {
        CoefficientForm {
            dim: self.dim,
            terms: self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, v)| (k.clone(), *v)).collect(),
        }
    }

    /// `Some(k)` if every term has form degree `k`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(FormKey::degree);
        let first = it.next().unwrap_or(0);
        it.all(|d| d == first).then_some(first)
    }

    /// `Some(true)` if odd, `Some(false)` if even, `None` if mixed.
    pub fn parity(&self) -> Option<bool> {
        let mut it = self.terms.keys().map(|k| k.degree() % 2 == 1);
        let first = it.next().unwrap_or(false);
        it.all(|p| p == first).then_some(first)
    }

    pub fn max_poly_degree(&self) -> u32 {
        self.terms.keys().map(FormKey::poly_degree).max().unwrap_or(0)
    }

    pub fn max_fourier(&self) -> u32 {
        self.terms.keys().map(|k| k.phase.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn check_caps(&self, caps: &Caps) -> Result<()> {
        if self.max_poly_degree() > caps.poly_degree {
            return Err(Error::CapExceeded(format!(
                "polynomial degree {} exceeds cap {}",
                self.max_poly_degree(),
                caps.poly_degree
            )));
        }
        if self.max_fourier() > caps.fourier {
            return Err(Error::CapExceeded(format!(
                "Fourier mode {} exceeds cap {}",
                self.max_fourier(),
                caps.fourier
            )));
        }
        Ok(())
    }

    pub fn scale(&self, q: Q) -> Self {
        if q.is_zero() {
            return Self::zero(self.dim);
        }
        CoefficientForm {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), *v * q)).collect(),
        }
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in wedge");
        let mut out = Self::zero(self.dim);
        for (ka, qa) in &self.terms {
            for (kb, qb) in &other.terms {
                let Some(sign) = wedge_sign(ka.dx, kb.dx) else { continue };
                let exps = ka.exps.iter().zip(&kb.exps).map(|(a, b)| a + b).collect();
                let key = FormKey { phase: ka.phase + kb.phase, dx: ka.dx | kb.dx, exps };
                out.add_term(key, *qa * *qb * Q::from_integer(sign as i128));
            }
        }
        out
    }

    /// Partial derivative of the coefficients along coordinate `i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, q) in &self.terms {
            let e = k.exps[i];
            if e == 0 {
                continue;
            }
            let mut exps = k.exps.clone();
            exps[i] -= 1;
            out.add_term(FormKey { phase: k.phase, dx: k.dx, exps }, *q * Q::from_integer(e as i128));
        }
        out
    }

    /// Exterior derivative along the base; phases are constant there.
    pub fn d(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for i in 0..self.dim {
            let di = Self::dx(self.dim, i);
            out += &di.wedge(&self.partial(i));
        }
        out
    }

    /// Contraction with the horizontal part of `x`.
    pub fn contract(&self, x: &VectorField) -> Self {
        assert_eq!(self.dim, x.dim(), "dimension mismatch in contract");
        let mut out = Self::zero(self.dim);
        for (k, q) in &self.terms {
            let mut pos = 0;
            let mut rest = k.dx;
            while rest != 0 {
                let j = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let sign = if pos % 2 == 0 { Q::one() } else { -Q::one() };
                pos += 1;
                let coeff = &x.components()[j];
                if coeff.is_zero() {
                    continue;
                }
                let single = CoefficientForm::term(self.dim, *q * sign, k.exps.clone(), k.dx & !(1 << j), k.phase);
                out += &coeff.wedge(&single);
            }
        }
        out
    }

    /// Contraction with the coordinate field `d/dx^i`.
    pub fn contract_coord(&self, i: usize) -> Self {
        self.contract(&VectorField::coordinate(self.dim, i))
    }

    /// Lie derivative; the vertical part of `x` acts on the phase.
    pub fn lie(&self, x: &VectorField) -> Self {
        let mut out = self.contract(x).d() + self.d().contract(x);
        if !x.vertical().is_zero() {
            let mut weighted = Self::zero(self.dim);
            for (k, q) in &self.terms {
                weighted.add_term(k.clone(), *q * Q::from_integer(k.phase as i128));
            }
            out += &x.vertical().wedge(&weighted);
        }
        out
    }

    /// Pull back along a polynomial map given by the images of the coordinates.
    pub fn pullback(&self, images: &[CoefficientForm]) -> Self {
        assert_eq!(images.len(), self.dim);
        let target_dim = images.first().map(|f| f.dim).unwrap_or(self.dim);
        let diffs: Vec<_> = images.iter().map(|f| f.d()).collect();
        let mut out = Self::zero(target_dim);
        for (k, q) in &self.terms {
            let mut t = Self::term(target_dim, *q, vec![0; target_dim], 0, k.phase);
            for (i, &e) in k.exps.iter().enumerate() {
                for _ in 0..e {
                    t = t.wedge(&images[i]);
                }
            }
            let mut rest = k.dx;
            let mut word = Self::one(target_dim);
            while rest != 0 {
                let j = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                word = word.wedge(&diffs[j]);
            }
            out += &t.wedge(&word);
        }
        out
    }

    /// Value of the coefficient of a single key.
    pub fn coefficient(&self, key: &FormKey) -> Q {
        self.terms.get(key).copied().unwrap_or_else(Q::zero)
    }

    pub fn display<'a>(&'a self, patch: &'a BasePatch) -> FormDisplay<'a> {
        FormDisplay { form: self, patch }
    }
}

fn write_rational_prefix(out: &mut String, q: &Q, first: bool, has_factors: bool) {
    let neg = q.is_negative();
    let a = q.abs();
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if !a.is_one() || !has_factors {
        let _ = write!(out, "{a}");
        if has_factors {
            out.push('*');
        }
    }
}

pub(crate) fn write_signed_term(out: &mut String, q: &Q, first: bool, factors: &[String]) {
    write_rational_prefix(out, q, first, !factors.is_empty());
    out.push_str(&factors.join("*"));
}

pub struct FormDisplay<'a> {
    form: &'a CoefficientForm,
    patch: &'a BasePatch,
}

impl FormDisplay<'_> {
    pub(crate) fn factors(key: &FormKey, patch: &BasePatch) -> Vec<String> {
        let mut f = Vec::new();
        for (i, &e) in key.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => f.push(patch.name(i).to_string()),
                _ => f.push(format!("{}^{}", patch.name(i), e)),
            }
        }
        let mut rest = key.dx;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            f.push(format!("d{}", patch.name(j)));
        }
        if key.phase != 0 {
            f.push(format!("ph({})", key.phase));
        }
        f
    }
}

impl fmt::Display for FormDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.form.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, (k, q)) in self.form.terms.iter().enumerate() {
            write_signed_term(&mut out, q, i == 0, &Self::factors(k, self.patch));
        }
        f.write_str(&out)
    }
}

impl AddAssign<&CoefficientForm> for CoefficientForm {
    fn add_assign(&mut self, rhs: &CoefficientForm) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add");
        for (k, q) in &rhs.terms {
            self.add_term(k.clone(), *q);
        }
    }
}

impl SubAssign<&CoefficientForm> for CoefficientForm {
    fn sub_assign(&mut self, rhs: &CoefficientForm) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub");
        for (k, q) in &rhs.terms {
            self.add_term(k.clone(), -*q);
        }
    }
}

impl Add for CoefficientForm {
    type Output = CoefficientForm;
    fn add(mut self, rhs: CoefficientForm) -> CoefficientForm {
        self += &rhs;
        self
    }
}

impl Add<&CoefficientForm> for &CoefficientForm {
    type Output = CoefficientForm;
    fn add(self, rhs: &CoefficientForm) -> CoefficientForm {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for CoefficientForm {
    type Output = CoefficientForm;
    fn sub(mut self, rhs: CoefficientForm) -> CoefficientForm {
        self -= &rhs;
        self
    }
}

impl Sub<&CoefficientForm> for &CoefficientForm {
    type Output = CoefficientForm;
    fn sub(self, rhs: &CoefficientForm) -> CoefficientForm {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for CoefficientForm {
    type Output = CoefficientForm;
    fn neg(self) -> CoefficientForm {
        self.scale(-Q::one())
    }
}

impl Neg for &CoefficientForm {
    type Output = CoefficientForm;
    fn neg(self) -> CoefficientForm {
        self.scale(-Q::one())
    }
}

impl Mul<Q> for CoefficientForm {
    type Output = CoefficientForm;
    fn mul(self, q: Q) -> CoefficientForm {
        self.scale(q)
    }
}

impl Mul<&CoefficientForm> for &CoefficientForm {
    type Output = CoefficientForm;
    fn mul(self, rhs: &CoefficientForm) -> CoefficientForm {
        self.wedge(rhs)
    }
}

/// Polynomial vector field `sum_i X^i d/dx^i + v d/dtheta`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VectorField {
    components: Vec<CoefficientForm>,
    vertical: CoefficientForm,
}

impl VectorField {
    pub fn new(components: Vec<CoefficientForm>) -> Self {
        let dim = components.len();
        Self::with_vertical(components, CoefficientForm::zero(dim))
    }

    pub fn with_vertical(components: Vec<CoefficientForm>, vertical: CoefficientForm) -> Self {
        let dim = components.len();
        for c in components.iter().chain(std::iter::once(&vertical)) {
            assert_eq!(c.dim(), dim);
            assert!(c.terms().all(|(k, _)| k.dx == 0 && k.phase == 0), "vector field components must be functions");
        }
        VectorField { components, vertical }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(vec![CoefficientForm::zero(dim); dim])
    }

    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut c = vec![CoefficientForm::zero(dim); dim];
        c[i] = CoefficientForm::one(dim);
        Self::new(c)
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[CoefficientForm] {
        &self.components
    }

    pub fn vertical(&self) -> &CoefficientForm {
        &self.vertical
    }

    pub fn horizontal(&self) -> VectorField {
        VectorField::new(self.components.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(CoefficientForm::is_zero) && self.vertical.is_zero()
    }

    /// Derivative of a function along the horizontal part.
    pub fn apply(&self, f: &CoefficientForm) -> CoefficientForm {
        let mut out = CoefficientForm::zero(self.dim());
        for (i, c) in self.components.iter().enumerate() {
            out += &c.wedge(&f.partial(i));
        }
        out
    }

    pub fn bracket(&self, other: &VectorField) -> VectorField {
        let comps = (0..self.dim())
            .map(|i| self.apply(&other.components[i]) - other.apply(&self.components[i]))
            .collect();
        let vert = self.apply(&other.vertical) - other.apply(&self.vertical);
        VectorField::with_vertical(comps, vert)
    }

    pub fn scale_by(&self, f: &CoefficientForm) -> VectorField {
        VectorField::with_vertical(
            self.components.iter().map(|c| f.wedge(c)).collect(),
            f.wedge(&self.vertical),
        )
    }
}

impl Add<&VectorField> for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        VectorField::with_vertical(
            self.components.iter().zip(&rhs.components).map(|(a, b)| a + b).collect(),
            &self.vertical + &rhs.vertical,
        )
    }
}

/// Polynomial map given by the images of the source coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap {
    comps: Vec<CoefficientForm>,
}

impl PolyMap {
    pub fn new(comps: Vec<CoefficientForm>) -> Result<Self> {
        let dim = comps.first().map(CoefficientForm::dim).unwrap_or(0);
        for c in &comps {
            if c.dim() != dim {
                return Err(Error::Dimension { expected: dim, got: c.dim() });
            }
            if c.terms().any(|(k, _)| k.dx != 0 || k.phase != 0) {
                return Err(Error::Precondition("map components must be polynomials".into()));
            }
        }
        Ok(PolyMap { comps })
    }

    pub fn identity(dim: usize) -> Self {
        PolyMap { comps: (0..dim).map(|i| CoefficientForm::coord(dim, i)).collect() }
    }

    pub fn components(&self) -> &[CoefficientForm] {
        &self.comps
    }

    pub fn target_dim(&self) -> usize {
        self.comps.len()
    }

    pub fn source_dim(&self) -> usize {
        self.comps.first().map(CoefficientForm::dim).unwrap_or(0)
    }

    /// `self` after `inner`.
    pub fn compose(&self, inner: &PolyMap) -> PolyMap {
        PolyMap { comps: self.comps.iter().map(|c| c.pullback(&inner.comps)).collect() }
    }

    /// `f` composed with this map.
    pub fn pull(&self, f: &CoefficientForm) -> CoefficientForm {
        f.pullback(&self.comps)
    }

    /// `d comps_i / d x^j`.
    pub fn jacobian(&self, i: usize, j: usize) -> CoefficientForm {
        self.comps[i].partial(j)
    }

    pub fn is_inverse_of(&self, other: &PolyMap) -> bool {
        self.source_dim() == other.target_dim()
            && self.target_dim() == other.source_dim()
            && self.compose(other) == PolyMap::identity(other.source_dim())
            && other.compose(self) == PolyMap::identity(self.source_dim())
    }
}
