mod common;

use chiral_tduality::coeffring::CoefficientForm as F;
use chiral_tduality::error::Error;
use chiral_tduality::sample::{Sampler, Shape};
use chiral_tduality::tduality::{DualityPair, TauConvention, TrivialHomotopy};
use chiral_tduality::twisted::BundleScene;
use chiral_tduality::vertex::{GenId, LambdaPoly, Letter, State};
use chiral_tduality::Q;

const PHI: TauConvention = TauConvention::Phi;

fn scenes() -> Vec<BundleScene> {
    vec![BundleScene::std2d(), BundleScene::trivial(2), common::curved3d(), common::curved3d().swapped()]
}

fn lift(f: impl Fn(&State) -> State, p: &LambdaPoly) -> LambdaPoly {
    LambdaPoly::from_coeffs((0..=p.degree().unwrap_or(0)).map(|k| f(&p.coeff(k))).collect())
}

/// `:w0 e^{n theta}: + :A w1 e^{n theta}:`.
fn twisted_form(p: &DualityPair, w0: &F, w1: &F, n: i32) -> State {
    let tw = p.twisted();
    let a = tw.algebra();
    let e = a.phase_state(n);
    a.nprod(&tw.form(w0), &e) + a.nprod(&a.nprod(&State::gen(tw.ids().connection), &tw.form(w1)), &e)
}

#[test]
fn phi_preserves_opes() {
    for scene in scenes() {
        let p = DualityPair::new(&scene);
        let (tw, ex) = (p.twisted().algebra(), p.exotic().algebra());
        let n = tw.generators().len() as GenId;
        let mut fields: Vec<State> = (0..n).map(State::gen).collect();
        fields.extend([-1, 2].map(|k| tw.phase_state(k)));
        for x in &fields {
            for y in &fields {
                let want = lift(|s| p.phi(s), &tw.bracket(x, y));
                let got = ex.bracket(&p.phi(x), &p.phi(y));
                assert_eq!(got, want, "[{} {}]", tw.show(x), tw.show(y));
            }
            assert_eq!(p.phi(&tw.translate(x)), ex.translate(&p.phi(x)));
        }
    }
}

#[test]
fn phi_dictionary() {
    let scene = BundleScene::std2d();
    let p = DualityPair::new(&scene);
    let (tw, ex) = (p.twisted().algebra(), p.exotic().algebra());
    assert_eq!(p.phi(&tw.s("A")), ex.s("iAhat"));
    assert_eq!(p.phi(&tw.s("iA")), ex.s("Ahat"));
    assert_eq!(p.phi(&tw.s("LA")), ex.s("LA") + p.exotic().form(&scene.h2()));
    assert_eq!(p.phi(&tw.s("GammaA")), ex.s("GammaA"));
    let f = F::coord(2, 0).wedge(&F::dx(2, 1));
    assert_eq!(p.phi(&p.twisted().form(&f)), p.exotic().form(&f));
    for n in [-2, 1, 3] {
        assert_eq!(p.phi(&tw.phase_state(-n)), ex.phase_state(n));
    }
}

#[test]
fn phi_intertwines_and_inverts() {
    for scene in scenes() {
        let p = DualityPair::new(&scene);
        let (tw, ex) = (p.twisted().algebra(), p.exotic().algebra());
        let mut sm = Sampler::new(17);
        let count = if scene.dim() == 2 { 200 } else { 50 };
        let mut xs: Vec<State> = (0..tw.generators().len() as GenId).map(State::gen).collect();
        xs.extend(sm.monomials(tw, Shape::default(), count));
        for x in &xs {
            let y = p.phi(x);
            assert_eq!(y.phases().iter().map(|n| -n).collect::<Vec<_>>().len(), x.phases().len());
            assert_eq!(p.phi(&p.twisted().d(x)), p.exotic().apply_dz(&y), "on {}", tw.show(x));
            assert_eq!(&p.psi_hat(&y), x);
        }
        for y in sm.monomials(ex, Shape::default(), count / 2) {
            assert_eq!(p.phi(&p.psi_hat(&y)), y);
        }
    }
}

#[test]
fn momentum_becomes_winding() {
    let p = DualityPair::new(&BundleScene::std2d());
    let tw = p.twisted().algebra();
    for n in [-2, -1, 1, 2] {
        let x = tw.nprod(&tw.s("iota1"), &tw.phase_state(n));
        assert_eq!(p.twisted().momentum(&x), x.scale(Q::from_integer(n as i128)));
        assert_eq!(p.phi(&x).phases(), vec![-n]);
        assert_eq!(p.tau(&x, PHI).phases(), vec![-n]);
    }
}

#[test]
fn tau_and_sigma_on_small_states() {
    let p = DualityPair::new(&BundleScene::std2d());
    let (tw, ex) = (p.twisted().algebra(), p.exotic().algebra());
    for conv in [TauConvention::Phi, TauConvention::Paper] {
        assert_eq!(p.tau(&State::vacuum(), conv), ex.s("Ahat"));
        assert_eq!(p.tau(&tw.s("A"), conv), -State::vacuum());
        assert_eq!(p.sigma_hat(&State::vacuum(), conv), tw.s("A"));
        assert_eq!(p.sigma_hat(&ex.s("Ahat"), conv), -State::vacuum());
    }
    let e = tw.phase_state(-2);
    assert_eq!(p.tau(&e, TauConvention::Phi), ex.nprod(&ex.phase_state(2), &ex.s("Ahat")));
    assert_eq!(p.tau(&e, TauConvention::Paper), ex.nprod(&ex.phase_state(-2), &ex.s("Ahat")));
}

#[test]
fn round_trips_are_minus_identity() {
    for scene in [BundleScene::std2d(), BundleScene::std2d().swapped(), common::curved3d()] {
        // the swapped pair supplies tau-hat and sigma
        for pair in [DualityPair::new(&scene), DualityPair::new(&scene.swapped())] {
            let (tw, ex) = (pair.twisted().algebra(), pair.exotic().algebra());
            let mut sm = Sampler::new(5);
            let count = if scene.dim() == 2 { 200 } else { 40 };
            for conv in [TauConvention::Phi, TauConvention::Paper] {
                for x in sm.monomials(tw, Shape::default(), count) {
                    assert_eq!(pair.sigma_hat(&pair.tau(&x, conv), conv), -x.clone(), "on {}", tw.show(&x));
                }
                for y in sm.monomials(ex, Shape::default(), count) {
                    assert_eq!(pair.tau(&pair.sigma_hat(&y, conv), conv), -y.clone(), "on {}", ex.show(&y));
                }
            }
        }
    }
}

#[test]
fn tau_shifts_parity_and_keeps_filtration() {
    for scene in [BundleScene::std2d(), common::curved3d()] {
        let p = DualityPair::new(&scene);
        let (tw, ex) = (p.twisted().algebra(), p.exotic().algebra());
        for x in Sampler::new(8).monomials(tw, Shape::default(), 100) {
            let y = p.tau(&x, PHI);
            assert_eq!(ex.parity(&y), tw.parity(&x).map(|b| !b), "on {}", tw.show(&x));
            assert!(ex.max_weight(&y).unwrap_or(0) <= tw.max_weight(&x).unwrap_or(0), "on {}", tw.show(&x));
            let sectors: Vec<i32> = x.phases().iter().map(|n| -n).collect();
            assert_eq!(y.phases(), sectors);
        }
    }
}

/// Apply letters one at a time, in a random order, and compare with the canonical image.
fn word_defects(p: &DualityPair, seed: u64, count: usize) -> usize {
    let tw = p.twisted().algebra();
    let n = tw.generators().len();
    let mut sm = Sampler::new(seed);
    let mut bad = 0;
    for _ in 0..count {
        let len = 1 + sm.rng_index(3);
        let letters: Vec<Letter> =
            (0..len).map(|_| Letter::new(sm.rng_index(n) as GenId, sm.rng_index(2) as u8)).collect();
        let phase = sm.rng_range(-2, 2);
        let mut x = tw.phase_state(phase);
        for &l in letters.iter().rev() {
            x = tw.nprod_letter_state(l, &x);
        }
        if p.tau(&x, PHI) != p.tau_word(&letters, phase, PHI) {
            bad += 1;
        }
    }
    bad
}

#[test]
fn tau_is_factorization_independent_without_base_curvature() {
    for scene in [BundleScene::trivial(2), BundleScene::std2d().untwisted().swapped()] {
        assert!(scene.hhat2().is_zero());
        assert_eq!(word_defects(&DualityPair::new(&scene), 2, 100), 0);
    }
}

#[test]
fn tau_depends_on_factorization_under_base_curvature() {
    let scene = BundleScene::std2d();
    let p = DualityPair::new(&scene);
    let tw = p.twisted().algebra();
    let (iota1, lie2) = (Letter::new(tw.g("iota1"), 0), Letter::new(tw.g("Lie2"), 0));
    let word = [iota1, lie2];
    let canonical = tw.nprod(&tw.s("iota1"), &tw.s("Lie2"));
    assert_ne!(p.tau(&canonical, PHI), p.tau_word(&word, 0, PHI));
    assert!(word_defects(&p, 2, 100) > 0);
}

#[test]
fn weight_zero_intertwining() {
    for scene in scenes() {
        let p = DualityPair::new(&scene);
        let m = scene.dim();
        let mut sm = Sampler::new(31);
        let mut samples = vec![State::vacuum(), p.twisted().algebra().s("A")];
        for _ in 0..100 {
            let n = sm.rng_range(-2, 2);
            samples.push(twisted_form(&p, &sm.form(m, m as u32, 2), &sm.form(m, m as u32, 2), n));
        }
        for x in samples {
            let left = p.tau(&p.twisted().d_h(&x), PHI);
            let right = -p.exotic().apply_full(&p.tau(&x, PHI));
            assert_eq!(left, right, "on {}", p.twisted().algebra().show(&x));
        }
    }
}

#[test]
fn positive_weight_counterexample() {
    let p = DualityPair::new(&BundleScene::std2d());
    let tw = p.twisted().algebra();
    let x = tw.translate(&tw.s("iota2"));
    let left = p.tau(&p.twisted().d_h(&x), PHI);
    let right = -p.exotic().apply_full(&p.tau(&x, PHI));
    assert_ne!(left, right);
}

#[test]
fn weight_zero_tau_is_classical() {
    let scene = BundleScene::trivial(2);
    let p = DualityPair::new(&scene);
    let ex = p.exotic().algebra();
    let ahat = ex.s("Ahat");
    let mut sm = Sampler::new(4);
    for _ in 0..20 {
        let deg = 2 * sm.rng_index(2) as u32;
        let l0 = sm.form_of_degree(2, deg, 2);
        let l1 = sm.form_of_degree(2, 1, 2);
        let n = sm.rng_range(-2, 2);
        // (l0 + l1 dtheta) e^{-n theta}, and :A l1: = -l1 dtheta
        let x = twisted_form(&p, &l0, &-l1.clone(), -n);
        let sn = ex.phase_state(n);
        // global sign opposite to the closed form -l0 dthetahat - l1
        let want = ex.nprod(&ex.nprod(&p.exotic().form(&l0), &ahat), &sn) + ex.nprod(&p.exotic().form(&l1), &sn);
        assert_eq!(p.tau(&x, PHI), want);
    }
}

#[test]
fn trivial_homotopy_contracts() {
    let scene = BundleScene::trivial(2);
    let h = TrivialHomotopy::new(&scene).unwrap();
    let (tw, ex) = (h.twisted().algebra(), h.exotic().algebra());
    let mut sm = Sampler::new(12);
    let mut xs: Vec<State> = (0..ex.generators().len() as GenId).map(State::gen).collect();
    xs.extend(sm.monomials(ex, Shape::default(), 150));
    for x in &xs {
        assert_eq!(h.commutator(x), h.weight(x), "on {}", ex.show(x));
    }
    assert!(h.apply(&ex.s("x")).is_zero());
    let w2 = ex.nprod(&ex.s("LA"), &ex.s("iota1"));
    assert_eq!(h.commutator(&w2), w2.scale(Q::from_integer(2)));
    let mut ys: Vec<State> = (0..tw.generators().len() as GenId).map(State::gen).collect();
    ys.extend(sm.monomials(tw, Shape::default(), 100));
    for y in &ys {
        assert_eq!(h.twisted_commutator(y), h.twisted_weight(y));
        // the two pieces of G_0 anticommute as odd operators, i.e. commute in the graded sense
        let (base, fiber) = h.twisted_parts(y);
        assert!((h.twisted_parts(&fiber).0 + h.twisted_parts(&base).1).is_zero());
    }
}

#[test]
fn closed_states_are_exact() {
    let h = TrivialHomotopy::new(&BundleScene::trivial(2)).unwrap();
    let ex = h.exotic().algebra();
    let mut sm = Sampler::new(13);
    let mut certified = 0;
    while certified < 50 {
        let b = sm.monomial(ex, Shape::default());
        let a = h.exotic().apply_full(&b);
        if a.is_zero() || h.exotic().weight_bound(&b) == 0 {
            continue;
        }
        let prim = h.certify_exact(&a).expect("closed positive-weight state");
        assert_eq!(h.exotic().apply_full(&prim), a);
        certified += 1;
    }
}

#[test]
fn homotopy_needs_trivial_scene() {
    assert!(matches!(TrivialHomotopy::new(&BundleScene::std2d()), Err(Error::SceneNotTrivial(_))));
}

#[test]
fn classical_exactness_certificates() {
    let scene = BundleScene::trivial(2);
    let p = DualityPair::new(&scene);
    let mut sm = Sampler::new(40);
    let mut done = 0;
    while done < 20 {
        let l1 = sm.form_of_degree(2, 1, 3);
        let n = sm.rng_range(-3, 3);
        if n == 0 || l1.d().is_zero() {
            continue;
        }
        let l0 = l1.d().scale(Q::new(1, n as i128));
        let cert = p.classical_exactness(&l0, &l1, n, PHI).unwrap();
        assert_eq!(p.twisted().d_h(&cert.primitive), cert.omega);
        assert!(p.exotic().apply_full(&cert.tau_image).is_zero());
        done += 1;
    }
    // dx primitive for l1 = dx, l0 = 0, n = 1
    let dx = F::dx(2, 0);
    let cert = p.classical_exactness(&F::zero(2), &dx, 1, PHI).unwrap();
    let tw = p.twisted().algebra();
    assert_eq!(cert.primitive, tw.nprod(&p.twisted().form(&dx), &tw.phase_state(-1)));
    assert!(p.classical_exactness(&F::zero(2), &F::zero(2), 2, PHI).unwrap().omega.is_zero());
    let x = F::coord(2, 0);
    let bad = p.classical_exactness(&dx, &x.wedge(&dx).scale(Q::from_integer(2)), 2, PHI);
    assert!(matches!(bad, Err(Error::Precondition(_))));
    assert!(matches!(
        DualityPair::new(&BundleScene::std2d()).classical_exactness(&F::zero(2), &dx, 1, PHI),
        Err(Error::SceneNotTrivial(_))
    ));
}
