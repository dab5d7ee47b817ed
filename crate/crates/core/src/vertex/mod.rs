//! Generic engine for vertex superalgebras given by generators and OPEs.
//!
//! States are sums of canonical right-nested monomials. Normally ordered
//! products, translations and lambda-brackets are computed with the Wick
//! formulas, quasi-commutativity and quasi-associativity, so every result is
//! again canonical.

mod algebra;
mod check;
mod maps;
mod state;

pub use algebra::{FormLetters, Generator, PhaseRule, VertexAlgebra};
pub use check::{ConsistencyReport, Witness};
pub use maps::{Derivation, Homomorphism, ModeOperator};
pub use state::{GenId, LambdaPoly, Letter, Monomial, State};

use crate::coeffring::write_signed_term;

impl VertexAlgebra {
    /// Text form of a letter, `d(..)` per translation.
    pub fn letter_text(&self, l: Letter) -> String {
        let mut s = self.generator(l.gen).name.clone();
        for _ in 0..l.deriv {
            s = format!("d({s})");
        }
        s
    }

    fn mono_factors(&self, m: &Monomial) -> Vec<String> {
        let mut out = Vec::new();
        let letters = m.letters();
        let mut i = 0;
        while i < letters.len() {
            let mut j = i + 1;
            while j < letters.len() && letters[j] == letters[i] {
                j += 1;
            }
            let t = self.letter_text(letters[i]);
            if j - i == 1 {
                out.push(t);
            } else if letters[i].deriv == 0 {
                out.push(format!("{t}^{}", j - i));
            } else {
                out.push(format!("({t})^{}", j - i));
            }
            i = j;
        }
        if m.phase() != 0 {
            let sym = self.phase_rule().map(|r| r.symbol.as_str()).unwrap_or("ph");
            out.push(format!("{sym}({})", m.phase()));
        }
        out
    }

    /// Canonical text of a state in the expression grammar.
    pub fn show(&self, s: &State) -> String {
        if s.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        let mut terms: Vec<_> = s.terms().collect();
        terms.sort_by(|(a, _), (b, _)| {
            (self.mono_weight(a), a.len(), *a).cmp(&(self.mono_weight(b), b.len(), *b))
        });
        for (i, (m, q)) in terms.into_iter().enumerate() {
            write_signed_term(&mut out, q, i == 0, &self.mono_factors(m));
        }
        out
    }

    /// `sum_k x_(k)y (z-w)^{-k-1}` rendered with `named` states substituted when they match.
    pub fn show_ope(&self, x: &State, y: &State, named: &[(&str, State)]) -> String {
        let poles = self.ope(x, y);
        if poles.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, s) in poles.into_iter().rev() {
            let named = named.iter().find(|(_, v)| *v == s).map(|(n, _)| n.to_string());
            let text = match (named, s.as_scalar()) {
                (Some(n), _) => format!("{n} "),
                (None, Some(q)) => format!("{q}"),
                (None, None) if s.len() == 1 => format!("{} ", self.show(&s)),
                (None, None) => format!("({}) ", self.show(&s)),
            };
            parts.push(format!("{text}(z-w)^-{}", k + 1));
        }
        parts.join(" + ")
    }
}
