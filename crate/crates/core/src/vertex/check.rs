use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use super::algebra::VertexAlgebra;
use super::state::{GenId, LambdaPoly, State};
use crate::util::{binomial, sign};
use crate::Q;

/// A failed identity together with the data that exhibits the failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub identity: String,
    pub detail: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.identity, self.detail)
    }
}

#[derive(Debug, Clone, Default)]
pub struct ConsistencyReport {
    pub checked: usize,
    pub failures: Vec<Witness>,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_witness(&self) -> Option<&Witness> {
        self.failures.first()
    }

    fn record(&mut self, ok: Option<Witness>) {
        self.checked += 1;
        if let Some(w) = ok {
            self.failures.push(w);
        }
    }
}

/// Polynomial in two variables `(lambda, mu)` with state coefficients.
pub type Poly2 = BTreeMap<(usize, usize), State>;

fn add2(p: &mut Poly2, i: usize, j: usize, s: &State, q: Q) {
    let e = p.entry((i, j)).or_default();
    e.add_scaled(s, q);
    if e.is_zero() {
        p.remove(&(i, j));
    }
}

impl VertexAlgebra {
    /// `[a_l [b_m c]] - p(a,b) [b_m [a_l c]] - [[a_l b]_{l+m} c]`; empty when Jacobi holds.
    pub fn jacobi_defect(&self, a: &State, b: &State, c: &State) -> Poly2 {
        let pab = sign(self.parity(a).unwrap_or(false) && self.parity(b).unwrap_or(false));
        let mut out = Poly2::new();
        for (j, bj) in self.bracket(b, c).iter() {
            for (i, cij) in self.bracket(a, bj).iter() {
                add2(&mut out, i, j, cij, Q::one());
            }
        }
        for (i, ai) in self.bracket(a, c).iter() {
            for (j, dij) in self.bracket(b, ai).iter() {
                add2(&mut out, i, j, dij, -pab);
            }
        }
        for (k, kk) in self.bracket(a, b).iter() {
            for (l, dkl) in self.bracket(kk, c).iter() {
                for r in 0..=l {
                    add2(&mut out, k + r, l - r, dkl, -binomial(l, r));
                }
            }
        }
        out
    }

    /// `[b_l a] + p(a,b) [a_{-l-T} b]`; zero when skew-symmetry holds.
    pub fn skew_defect(&self, ab: &LambdaPoly, ba: &LambdaPoly, both_odd: bool) -> LambdaPoly {
        ba - &self.skew(ab, both_odd)
    }

    /// Skew-symmetry of declared entries, Jacobi on generator triples, and
    /// compatibility of the phase rule with translation and Jacobi.
    pub fn check_consistency(&self, phases: &[i32]) -> ConsistencyReport {
        let mut report = ConsistencyReport::default();
        let n = self.generators().len() as GenId;
        let name = |g: GenId| self.generator(g).name.clone();
        let mut declared: Vec<_> = self.table().map(|(k, v)| (*k, v.clone())).collect();
        declared.sort_by_key(|(k, _)| *k);
        for ((a, b), ab) in &declared {
            if a > b {
                continue;
            }
            let Some(ba) = self.declared(*b, *a) else { continue };
            let both_odd = self.generator(*a).odd && self.generator(*b).odd;
            let defect = self.skew_defect(ab, ba, both_odd);
            report.record((!defect.is_zero()).then(|| Witness {
                identity: "skew-symmetry".into(),
                detail: format!("({}, {}): {}", name(*a), name(*b), self.show_poly(&defect)),
            }));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let d = self.jacobi_defect(&State::gen(a), &State::gen(b), &State::gen(c));
                    report.record(self.poly2_witness("Jacobi", &[name(a), name(b), name(c)], &d));
                }
            }
        }
        if self.has_phases() {
            for &p in phases {
                let en = self.phase_state(p);
                let den = self.translate(&en);
                let sym = self.phase_rule().map(|r| r.symbol.clone()).unwrap_or_default();
                let en_name = format!("{sym}({p})");
                for a in 0..n {
                    let ga = State::gen(a);
                    let direct = self.bracket(&ga, &den);
                    let base = self.bracket(&ga, &en);
                    let mut cov = LambdaPoly::zero();
                    for (k, s) in base.iter() {
                        cov.add_at(k + 1, s, Q::one());
                        cov.add_at(k, &self.translate(s), Q::one());
                    }
                    let defect = &direct - &cov;
                    report.record((!defect.is_zero()).then(|| Witness {
                        identity: "translation covariance".into(),
                        detail: format!("[{}_l d{}]: {}", name(a), en_name, self.show_poly(&defect)),
                    }));
                    for b in 0..n {
                        let d = self.jacobi_defect(&ga, &State::gen(b), &en);
                        report.record(self.poly2_witness("Jacobi", &[name(a), name(b), en_name.clone()], &d));
                    }
                }
            }
        }
        report
    }

    fn poly2_witness(&self, what: &str, names: &[String], d: &Poly2) -> Option<Witness> {
        let ((i, j), s) = d.iter().next()?;
        Some(Witness {
            identity: what.into(),
            detail: format!("({}) at lambda^{i} mu^{j}: {}", names.join(", "), self.show(s)),
        })
    }

    /// Text of a lambda-polynomial.
    pub fn show_poly(&self, p: &LambdaPoly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        p.iter()
            .map(|(k, s)| match k {
                0 => format!("({})", self.show(s)),
                1 => format!("({})*l", self.show(s)),
                _ => format!("({})*l^{k}", self.show(s)),
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}
