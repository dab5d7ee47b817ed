use super::Cdr;
use crate::vertex::{State, Witness};
use crate::Q;

/// One pairwise OPE among `L, J, G, Q`: expected poles as `(order, state)`.
#[derive(Debug, Clone)]
pub struct TopologicalEntry {
    pub left: &'static str,
    pub right: &'static str,
    pub poles: Vec<(usize, State)>,
}

/// Expected OPEs of a topological vertex algebra of rank `cdr.rank()`.
pub fn topological_table(cdr: &Cdr) -> Vec<TopologicalEntry> {
    let a = cdr.algebra();
    let n = Q::from_integer(cdr.rank() as i128);
    let (l, j, g, q) = (cdr.l_field(), cdr.j_field(), cdr.g_field(), cdr.q_field());
    let d = |s: &State| a.translate(s);
    let two = Q::from_integer(2);
    let e = |left, right, poles| TopologicalEntry { left, right, poles };
    vec![
        e("L", "L", vec![(2, l.scale(two)), (1, d(&l))]),
        e("L", "J", vec![(3, State::scalar(-n)), (2, j.clone()), (1, d(&j))]),
        e("L", "G", vec![(2, g.scale(two)), (1, d(&g))]),
        e("L", "Q", vec![(2, q.clone()), (1, d(&q))]),
        e("J", "J", vec![(2, State::scalar(n))]),
        e("G", "G", vec![]),
        e("Q", "Q", vec![]),
        e("J", "G", vec![(1, -g.clone())]),
        e("J", "Q", vec![(1, q.clone())]),
        e("Q", "G", vec![(3, State::scalar(n)), (2, j), (1, l)]),
    ]
}

impl Cdr {
    /// Compare every entry of [`topological_table`] with the computed OPE.
    pub fn check_topological(&self) -> Vec<(String, Option<Witness>)> {
        let a = self.algebra();
        let fields = self.named_fields();
        let get = |name: &str| fields.iter().find(|(n, _)| *n == name).map(|(_, s)| s.clone()).unwrap();
        topological_table(self)
            .into_iter()
            .map(|entry| {
                let label = format!("{}{}", entry.left, entry.right);
                let computed: Vec<(usize, State)> =
                    a.ope(&get(entry.left), &get(entry.right)).into_iter().map(|(k, s)| (k + 1, s)).collect();
                let mut expected = entry.poles.clone();
                expected.sort_by_key(|(k, _)| *k);
                let witness = (computed != expected).then(|| Witness {
                    identity: format!("OPE {label}"),
                    detail: format!(
                        "computed {} expected {}",
                        render(a, &computed),
                        render(a, &expected)
                    ),
                });
                (label, witness)
            })
            .collect()
    }
}

fn render(a: &crate::vertex::VertexAlgebra, poles: &[(usize, State)]) -> String {
    if poles.is_empty() {
        return "0".into();
    }
    poles.iter().map(|(k, s)| format!("[{}](z-w)^-{k}", a.show(s))).collect::<Vec<_>>().join(" + ")
}
