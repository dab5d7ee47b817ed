mod common;

use chiral_tduality::coeffring::CoefficientForm as F;
use chiral_tduality::exotic::{hm_differential, Component, ExoticForm, ExoticPatch};
use chiral_tduality::sample::{Sampler, Shape};
use chiral_tduality::twisted::{lie_coord, BundleScene};
use chiral_tduality::vertex::{GenId, Letter, State};
use chiral_tduality::Q;

fn scenes() -> Vec<BundleScene> {
    vec![BundleScene::std2d(), common::curved3d(), common::curved3d().swapped()]
}

fn q(n: i128) -> Q {
    Q::from_integer(n)
}

/// Expected images of every generator class under each component.
#[test]
fn component_tables() {
    for scene in scenes() {
        let ex = ExoticPatch::new(&scene);
        let a = ex.algebra();
        let ids = ex.ids().clone();
        let f = |w: &F| ex.form(w);
        let (h3, h2, hh2) = (scene.h3().clone(), scene.h2(), scene.hhat2());
        let ahat = State::gen(ids.connection);
        let iahat = State::gen(ids.contraction);
        let la = State::gen(ids.la);
        let gamma = State::gen(ids.gamma);
        let hhat = f(&h3) + a.nprod(&ahat, &f(&hh2));
        let func = f(&F::coord(scene.dim(), 0).wedge(&F::coord(scene.dim(), 0)));
        let one_form = f(&F::coord(scene.dim(), 1).wedge(&F::dx(scene.dim(), 0)));
        let s2 = a.phase_state(2);
        let zero = State::zero;

        let mut cases: Vec<(Component, State, State)> = Vec::new();
        for i in 0..scene.dim() {
            let (iota, lie) = (State::gen(ids.iota[i]), State::gen(ids.lie[i]));
            cases.extend([
                (Component::D0, iota.clone(), a.nprod(&ahat, &f(&hh2.contract_coord(i)))),
                (Component::D0, lie.clone(), a.nprod(&ahat, &f(&lie_coord(&hh2, i)))),
                (Component::D1, iota.clone(), -a.nprod(&iahat, &f(&h2.contract_coord(i)))),
                (
                    Component::D1,
                    lie.clone(),
                    -a.nprod(&iahat, &f(&lie_coord(&h2, i))) - f(&h2.wedge(&hh2.contract_coord(i))),
                ),
                (Component::D2, iota.clone(), zero()),
                (Component::D2, lie.clone(), a.nprod(&la, &f(&hh2.contract_coord(i)))),
                (Component::D3, iota.clone(), f(&h3.contract_coord(i))),
                (Component::D3, lie.clone(), -f(&lie_coord(&h3, i))),
                (Component::D4, iota.clone(), zero()),
                (Component::D4, lie.clone(), zero()),
                (Component::D5, iota.clone(), zero()),
                (Component::D5, lie.clone(), zero()),
                (
                    Component::D6,
                    iota.clone(),
                    a.nprod(&f(&h3), &iota) + a.nprod(&ahat, &a.nprod(&f(&hh2), &iota))
                        - a.nprod(&a.translate(&ahat), &f(&hh2.contract_coord(i))),
                ),
                (
                    Component::D6,
                    lie.clone(),
                    a.nprod(&f(&h3), &lie) + a.nprod(&ahat, &a.nprod(&f(&hh2), &lie))
                        - a.nprod(&a.translate(&ahat), &f(&lie_coord(&hh2, i))),
                ),
            ]);
        }
        cases.extend([
            (Component::D0, iahat.clone(), -f(&hh2)),
            (Component::D0, ahat.clone(), zero()),
            (Component::D1, ahat.clone(), f(&h2)),
            (Component::D2, ahat.clone(), -la.clone()),
            (Component::D2, gamma.clone(), -a.translate(&iahat)),
            (Component::D2, s2.clone(), a.nprod(&iahat, &s2).scale(q(2))),
            (Component::D4, gamma.clone(), iahat.clone()),
            (Component::D5, gamma.clone(), zero()),
            (Component::D6, ahat.clone(), a.nprod(&f(&h3), &ahat)),
            (
                Component::D6,
                iahat.clone(),
                a.nprod(&f(&h3), &iahat) + a.nprod(&ahat, &a.nprod(&f(&hh2), &iahat)) + a.translate(&f(&hh2)),
            ),
        ]);
        for c in Component::ALL {
            let vanishing: &[State] = match c {
                Component::D6 => &[],
                Component::D2 => &[func.clone(), one_form.clone()],
                _ => &[func.clone(), one_form.clone(), s2.clone(), la.clone()],
            };
            for x in vanishing {
                cases.push((c, x.clone(), zero()));
            }
            if c == Component::D6 {
                for x in [&func, &one_form, &s2, &la, &gamma] {
                    cases.push((c, x.clone(), a.nprod(&hhat, x)));
                }
            }
        }
        for (c, x, want) in cases {
            let got = ex.apply_component(&x, c);
            assert_eq!(got, want, "{c:?}({}) = {}, expected {}", a.show(&x), a.show(&got), a.show(&want));
        }
    }
}

#[test]
fn transported_differential_on_generators() {
    for scene in scenes() {
        let ex = ExoticPatch::new(&scene);
        let a = ex.algebra();
        let ids = ex.ids().clone();
        let f = |w: &F| ex.form(w);
        let iahat = State::gen(ids.contraction);
        for n in [-2, 1, 3] {
            let sn = a.phase_state(n);
            let want = (a.nprod(&f(scene.a_bas()), &sn) - a.nprod(&iahat, &sn)).scale(q(n as i128));
            assert_eq!(ex.apply_dz(&sn), want);
        }
        let w = F::coord(scene.dim(), 0).wedge(&F::coord(scene.dim(), 1)).wedge(&F::dx(scene.dim(), 1));
        assert_eq!(ex.apply_dz(&f(&w)), f(&w.d()));
        assert_eq!(ex.apply_dz(&State::gen(ids.connection)), State::gen(ids.la));
        assert_eq!(ex.apply_dz(&iahat), f(&scene.hhat2()));
        assert!(ex.apply_dz(&State::gen(ids.la)).is_zero());
        assert_eq!(ex.apply_dz(&State::gen(ids.gamma)), a.translate(&iahat) - ex.xi().clone());
    }
}

#[test]
fn table_is_consistent() {
    for scene in scenes() {
        let ex = ExoticPatch::new(&scene);
        let report = ex.algebra().check_consistency(&[1, -2]);
        assert!(report.passed(), "{:?}", report.first_witness());
    }
}

#[test]
fn normally_ordered_relations() {
    for scene in scenes() {
        let ex = ExoticPatch::new(&scene);
        let a = ex.algebra();
        let ids = ex.ids().clone();
        let m = scene.dim();
        let mut sm = Sampler::new(11);
        for _ in 0..20 {
            let g = sm.form_of_degree(m, 0, 3);
            let h = sm.form_of_degree(m, 0, 2);
            let nu = sm.form_of_degree(m, 1, 2);
            let om = sm.form_of_degree(m, 1, 2);
            assert_eq!(a.nprod(&ex.form(&g), &ex.form(&h)), ex.form(&g.wedge(&h)));
            assert_eq!(a.nprod(&ex.form(&nu), &ex.form(&om)), ex.form(&nu.wedge(&om)));
            // chain rule
            let mut chain = State::zero();
            for i in 0..m {
                chain += &a.nprod(&ex.form(&g.partial(i)), &State::letter(Letter::new(ids.x[i], 1)));
            }
            assert_eq!(a.translate(&ex.form(&g)), chain);
            // L_{gX} = :dg iota_X: + :g L_X:, iota_{gX} = :g iota_X:
            let i = sm.rng_index(m);
            let lie_gx = a.nprod(&ex.form(&g.d()), &State::gen(ids.iota[i])) + a.nprod(&ex.form(&g), &State::gen(ids.lie[i]));
            let iota_gx = a.nprod(&ex.form(&g), &State::gen(ids.iota[i]));
            let gx = |w: &F| g.wedge(&w.contract_coord(i));
            let lie_w = |w: &F| gx(&w.d()) + gx(w).d();
            for w in [&h, &om] {
                assert_eq!(a.product(0, &lie_gx, &ex.form(w)), ex.form(&lie_w(w)));
                assert!(a.product(1, &lie_gx, &ex.form(w)).is_zero());
                assert_eq!(a.product(0, &iota_gx, &ex.form(w)), ex.form(&gx(w)));
            }
        }
    }
}

#[test]
fn square_zero_on_generators_and_words() {
    let ex = ExoticPatch::new(&BundleScene::std2d());
    let a = ex.algebra();
    let n = a.generators().len() as GenId;
    let mut words: Vec<State> = (0..n).map(State::gen).collect();
    words.extend([-2, -1, 1, 2].map(|p| a.phase_state(p)));
    for x in 0..n {
        for y in 0..n {
            words.push(a.nprod(&State::gen(x), &State::gen(y)));
        }
        words.push(a.nprod(&State::gen(x), &a.phase_state(1)));
    }
    for w in &words {
        let dd = ex.apply_full(&ex.apply_full(w));
        assert!(dd.is_zero(), "D^2({}) = {}", a.show(w), a.show(&dd));
    }
}

#[test]
fn square_zero_on_samples() {
    for scene in [BundleScene::std2d(), common::curved3d()] {
        let ex = ExoticPatch::new(&scene);
        let a = ex.algebra();
        let count = if scene.dim() == 2 { 500 } else { 60 };
        for m in Sampler::new(7).monomials(a, Shape::default(), count) {
            let dm = ex.apply_full(&m);
            assert!(ex.apply_full(&dm).is_zero(), "D^2({}) != 0", a.show(&m));
            assert!(ex.weight_bound(&dm) <= ex.weight_bound(&m), "weight grows on {}", a.show(&m));
            if let (Some(p), false) = (a.parity(&m), dm.is_zero()) {
                assert_eq!(a.parity(&dm), Some(!p));
            }
        }
    }
}

#[test]
fn proof_identities() {
    for scene in scenes() {
        let ex = ExoticPatch::new(&scene);
        let a = ex.algebra();
        let ids = ex.ids().clone();
        let hh2 = ex.form(&scene.hhat2());
        let gamma = State::gen(ids.gamma);
        let der2 = ex.apply_der(&ex.apply_der(&gamma));
        assert_eq!(der2, -a.translate(&hh2));
        let cross = ex.apply_nder(&ex.apply_hhat(&gamma)) + ex.apply_hhat(&ex.apply_nder(&gamma));
        assert_eq!(cross, a.translate(&hh2));
        for n in [-2, 1, 3] {
            let sn = a.phase_state(n);
            assert_eq!(ex.apply_der(&ex.apply_der(&sn)), a.nprod(&hh2, &sn).scale(q(n as i128)));
        }
        let (ahat, iahat) = (State::gen(ids.connection), State::gen(ids.contraction));
        let left = a.nprod(&a.nprod(&ahat, &hh2), &iahat);
        let right = a.nprod(&ahat, &a.nprod(&hh2, &iahat));
        assert_eq!(left - right, a.translate(&hh2));
    }
}

#[test]
fn derivation_part_is_a_derivation() {
    let ex = ExoticPatch::new(&common::curved3d());
    let a = ex.algebra();
    let mut sm = Sampler::new(3);
    let shape = Shape { max_len: 2, max_weight: 2, max_phase: 1 };
    let xs = sm.monomials(a, shape, 30);
    let ys = sm.monomials(a, shape, 30);
    let mut nder_fails = 0;
    for (x, y) in xs.iter().zip(&ys) {
        let sign = if a.parity(x) == Some(true) { q(-1) } else { q(1) };
        let leibniz = |op: &dyn Fn(&State) -> State| a.nprod(&op(x), y) + a.nprod(x, &op(y)).scale(sign);
        let der = |s: &State| ex.apply_der(s);
        assert_eq!(ex.apply_der(&a.nprod(x, y)), leibniz(&der));
        let nder = |s: &State| ex.apply_nder(s);
        if ex.apply_nder(&a.nprod(x, y)) != leibniz(&nder) {
            nder_fails += 1;
        }
    }
    assert!(nder_fails > 0);
}

#[test]
fn weight_zero_matches_classical_differential() {
    for scene in [BundleScene::std2d(), common::curved3d(), common::curved3d().swapped()] {
        let ex = ExoticPatch::new(&scene);
        let mut sm = Sampler::new(21);
        let m = scene.dim();
        for _ in 0..100 {
            let n = sm.rng_range(-2, 2);
            let form = ExoticForm::new(sm.form(m, m as u32, 2), sm.form(m, m as u32, 2), n);
            let x = form.to_state(&ex);
            assert_eq!(ex.weight_bound(&x), 0);
            let got = ex.weight_zero_part(&ex.apply_full(&x));
            let want = hm_differential(&scene, &form).to_state(&ex);
            assert_eq!(got, want);
            assert_eq!(ExoticForm::from_state(&ex, &x, n).map(|f| f.to_state(&ex)), Some(x));
        }
    }
}
