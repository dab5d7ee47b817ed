use chiral_tduality::cdr::Cdr;
use chiral_tduality::coeffring::{BasePatch, CoefficientForm, PolyMap, VectorField};
use chiral_tduality::vertex::State;
use chiral_tduality::{Error, Q};

fn plane() -> Cdr {
    Cdr::new(BasePatch::standard(2))
}

#[test]
fn topological_quadruple_in_low_rank() {
    for n in 1..=3 {
        let cdr = Cdr::new(BasePatch::standard(n));
        for (label, w) in cdr.check_topological() {
            assert!(w.is_none(), "rank {n} {label}: {}", w.unwrap());
        }
    }
}

#[test]
fn ope_qg_on_plane() {
    let cdr = plane();
    let a = cdr.algebra();
    let text = a.show_ope(&cdr.q_field(), &cdr.g_field(), &cdr.named_fields());
    assert_eq!(text, "2(z-w)^-3 + J (z-w)^-2 + L (z-w)^-1");
}

#[test]
fn d_squares_to_zero_on_generators() {
    let cdr = plane();
    for i in 0..2 {
        for s in [cdr.beta(i), cdr.b(i), cdr.c(i), cdr.gamma(i)] {
            assert!(cdr.d(&cdr.d(&s)).is_zero());
        }
    }
    assert_eq!(cdr.d(&cdr.b(0)), cdr.beta(0));
}

#[test]
fn j0_counts_form_degree() {
    let cdr = plane();
    let a = cdr.algebra();
    let s = a.nprod_all(&[cdr.beta(0), cdr.b(1), cdr.c(0), cdr.c(1)]);
    assert_eq!(cdr.j0(&s), s);
    assert_eq!(cdr.j0(&cdr.b(0)), -cdr.b(0));
}

#[test]
fn g0_is_a_homotopy() {
    let cdr = plane();
    let a = cdr.algebra();
    let samples = [
        cdr.beta(0),
        a.nprod(&cdr.b(1), &cdr.c(0)),
        a.nprod(&a.translate(&cdr.c(1)), &cdr.gamma(0)),
        a.nprod_all(&[cdr.beta(1), cdr.b(0), cdr.gamma(0)]),
    ];
    for s in samples {
        let lhs = cdr.d(&cdr.g0(&s)) + cdr.g0(&cdr.d(&s));
        assert_eq!(lhs, cdr.l0(&s), "{}", a.show(&s));
    }
}

fn shear() -> (PolyMap, PolyMap) {
    let x = CoefficientForm::coord(2, 0);
    let y = CoefficientForm::coord(2, 1);
    let x2 = x.wedge(&x);
    let g = PolyMap::new(vec![x.clone(), &y + &x2]).unwrap();
    let f = PolyMap::new(vec![x, &y - &x2]).unwrap();
    (g, f)
}

#[test]
fn nonlinear_coordinate_change_preserves_opes() {
    let cdr = plane();
    let a = cdr.algebra();
    let (g, f) = shear();
    let phi = cdr.coordinate_change(&g, &f).unwrap();
    let gens: Vec<State> = (0..a.generators().len()).map(|i| State::gen(i as u16)).collect();
    for x in &gens {
        for y in &gens {
            let lhs: Vec<_> = a.ope(x, y).into_iter().map(|(k, s)| (k, phi.apply(&s))).collect();
            let rhs = a.ope(&phi.apply(x), &phi.apply(y));
            assert_eq!(lhs, rhs, "{} {}", a.show(x), a.show(y));
        }
    }
    assert_eq!(phi.apply(&cdr.l_field()), cdr.l_field());
    assert_eq!(phi.apply(&cdr.g_field()), cdr.g_field());
    assert_eq!(phi.apply(&cdr.j_field()), cdr.j_field());
}

#[test]
fn coordinate_changes_compose_contravariantly() {
    let cdr = plane();
    let a = cdr.algebra();
    let (g, g_inv) = shear();
    let x = CoefficientForm::coord(2, 0);
    let y = CoefficientForm::coord(2, 1);
    let three = Q::from_integer(3);
    let h = PolyMap::new(vec![&x.scale(three) + &y, y.clone()]).unwrap();
    let h_inv = PolyMap::new(vec![(&x - &y).scale(Q::new(1, 3)), y]).unwrap();
    let hg = h.compose(&g);
    let hg_inv = g_inv.compose(&h_inv);
    let phi_hg = cdr.coordinate_change(&hg, &hg_inv).unwrap();
    let phi_g = cdr.coordinate_change(&g, &g_inv).unwrap();
    let phi_h = cdr.coordinate_change(&h, &h_inv).unwrap();
    for i in 0..a.generators().len() {
        let s = State::gen(i as u16);
        assert_eq!(phi_hg.apply(&s), phi_g.apply(&phi_h.apply(&s)), "{}", a.show(&s));
    }
}

#[test]
fn non_invertible_change_is_rejected() {
    let cdr = plane();
    let x = CoefficientForm::coord(2, 0);
    let y = CoefficientForm::coord(2, 1);
    let g = PolyMap::new(vec![x.wedge(&x), y.clone()]).unwrap();
    let f = PolyMap::new(vec![x, y]).unwrap();
    assert!(matches!(cdr.coordinate_change(&g, &f), Err(Error::NotInvertible(_))));
}

#[test]
fn coordinate_free_opes_hold() {
    let cdr = plane();
    let a = cdr.algebra();
    let x = CoefficientForm::coord(2, 0);
    let y = CoefficientForm::coord(2, 1);
    let xf = VectorField::new(vec![y.wedge(&y), x.clone()]);
    let yf = VectorField::new(vec![x.wedge(&y), CoefficientForm::one(2)]);
    let bracket = xf.bracket(&yf);
    let simple = |s: State| a.ope(&cdr.lie(&xf), &s);
    assert_eq!(simple(cdr.iota(&yf)), vec![(0, cdr.iota(&bracket))]);
    assert_eq!(simple(cdr.lie(&yf)), vec![(0, cdr.lie(&bracket))]);
    let omega = x.wedge(&CoefficientForm::dx(2, 1));
    assert_eq!(simple(cdr.form(&omega)), vec![(0, cdr.form(&omega.lie(&xf)))]);
    assert_eq!(a.ope(&cdr.iota(&xf), &cdr.form(&omega)), vec![(0, cdr.form(&omega.contract(&xf)))]);
    assert!(a.ope(&cdr.iota(&xf), &cdr.iota(&yf)).is_empty());
    let g = &x + &y.wedge(&y);
    let gx = xf.scale_by(&g);
    assert_eq!(cdr.iota(&gx), a.nprod(&cdr.form(&g), &cdr.iota(&xf)));
    let expected = a.nprod(&cdr.form(&g.d()), &cdr.iota(&xf)) + a.nprod(&cdr.form(&g), &cdr.lie(&xf));
    assert_eq!(cdr.lie(&gx), expected);
}
