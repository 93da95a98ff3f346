use num_bigint::BigInt;
use oscu_core::algebra::{
    identity, inverse, mat_vec, monomials_of_degree, rank, Field, FieldElement, Monomial, MultiPoly, SymForm,
};
use oscu_core::fixtures::{generic_form, random_form};
use oscu_core::frames::{AdaptedChart, FrameRule};
use oscu_core::geometry::{build_family, ideal_component, FormTuple};
use oscu_core::moduli::{descent_kernel, gl_orbit_span};
use oscu_core::parser_io::{parse_poly, HypersurfaceSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fe(v: i64) -> FieldElement {
    FieldElement::from_int(v)
}

fn cube_root_field() -> Field {
    Field::extension(vec![BigInt::from(-4), BigInt::from(0), BigInt::from(0), BigInt::from(1)]).unwrap()
}

fn ext_element(field: &Field, c: [i64; 3], den: i64) -> FieldElement {
    let t = field.generator().unwrap();
    let v = &(&fe(c[0]) + &(&fe(c[1]) * &t)) + &(&fe(c[2]) * &(&t * &t));
    &v / &fe(den)
}

fn small_elem() -> impl Strategy<Value = ([i64; 3], i64)> {
    (prop::array::uniform3(-20i64..=20), 1i64..=5)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn extension_field_axioms(a in small_elem(), b in small_elem(), c in small_elem()) {
        let k = cube_root_field();
        let (a, b, c) = (ext_element(&k, a.0, a.1), ext_element(&k, b.0, b.1), ext_element(&k, c.0, c.1));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            let inv = a.inv().unwrap();
            prop_assert!((&a * &inv).is_one());
            prop_assert_eq!(&(&b / &a) * &a, b.clone());
        } else {
            prop_assert!(a.inv().is_none());
        }
    }

    #[test]
    fn euler_identity(seed in any::<u64>(), n in 2usize..5, deg in 1u32..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_form(&mut rng, n, deg);
        // sum_a y^a (e_a -| P) = P, and sum_a y^a d_a P = deg P.
        let mut contracted = MultiPoly::zero(n);
        let mut euler = MultiPoly::zero(n);
        for a in 0..n {
            let y = Monomial::var(n, a);
            contracted = &contracted + &p.contract_basis(a).poly().mul_monomial(&y, &fe(1));
            euler = &euler + &p.poly().derivative(a).mul_monomial(&y, &fe(1));
        }
        prop_assert_eq!(&contracted, p.poly());
        prop_assert_eq!(euler, p.poly().scale(&fe(deg as i64)));
    }

    #[test]
    fn interior_products_commute(seed in any::<u64>(), n in 2usize..5, deg in 2u32..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_form(&mut rng, n, deg);
        let u: Vec<FieldElement> = (0..n).map(|_| fe(rng.gen_range(-4..=4))).collect();
        let v: Vec<FieldElement> = (0..n).map(|_| fe(rng.gen_range(-4..=4))).collect();
        let uv = p.interior_product(&v).unwrap().interior_product(&u).unwrap();
        let vu = p.interior_product(&u).unwrap().interior_product(&v).unwrap();
        prop_assert_eq!(uv, vu);
        // Full contraction with v recovers P(v).
        let mut full = p.clone();
        for _ in 0..deg {
            full = full.interior_product(&v).unwrap();
        }
        prop_assert_eq!(full.poly().coeff(&Monomial::one(n)), p.evaluate(&v).unwrap());
    }

    #[test]
    fn rank_invariant_under_row_operations(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (r, c) = (rng.gen_range(1..7), rng.gen_range(1..7));
        let mut m: Vec<Vec<FieldElement>> = (0..r)
            .map(|_| (0..c).map(|_| FieldElement::from_ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3))).collect())
            .collect();
        let base = rank(&m).unwrap();
        prop_assert!(base <= r.min(c));
        for i in (1..m.len()).rev() {
            m.swap(i, rng.gen_range(0..=i));
        }
        let s = fe(rng.gen_range(1..=5));
        m[0] = m[0].iter().map(|x| x * &s).collect();
        let extra: Vec<FieldElement> = m[0].iter().zip(&m[m.len() - 1]).map(|(a, b)| a - b).collect();
        m.push(extra);
        prop_assert_eq!(rank(&m).unwrap(), base);
    }

    #[test]
    fn parse_print_round_trip(seed in any::<u64>(), n in 1usize..5, deg in 0u32..5, extension in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = if extension { cube_root_field() } else { Field::Rational };
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let mut p = MultiPoly::zero(n);
        for d in 0..=deg {
            for m in monomials_of_degree(n, d) {
                if rng.gen_bool(0.4) {
                    let c = if extension {
                        ext_element(&field, [rng.gen_range(-5..=5), rng.gen_range(-5..=5), rng.gen_range(-5..=5)], rng.gen_range(1..=4))
                    } else {
                        FieldElement::from_ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4))
                    };
                    p.add_term(m, c);
                }
            }
        }
        let text = p.format_with(&names);
        let back = parse_poly(&text, &names, &field).unwrap();
        prop_assert_eq!(back, p, "{}", text);
    }

    /// `X.P` agrees with the `eps`-linear part of `P((1 - eps X) y)`.
    #[test]
    fn gl_action_matches_conjugation(seed in any::<u64>(), n in 2usize..4, deg in 1u32..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_form(&mut rng, n, deg);
        let x: Vec<Vec<FieldElement>> = (0..n).map(|_| (0..n).map(|_| fe(rng.gen_range(-3..=3))).collect()).collect();
        // Variables y_0..y_{n-1}, eps.
        let subs: Vec<MultiPoly> = (0..n)
            .map(|a| {
                let mut s = MultiPoly::var(n + 1, a);
                for b in 0..n {
                    let mut e = vec![0u16; n + 1];
                    e[b] = 1;
                    e[n] = 1;
                    s.add_term(Monomial::new(e), -x[a][b].clone());
                }
                s
            })
            .collect();
        let moved = p.poly().substitute(&subs);
        let linear = moved.derivative(n).specialize(n, &fe(0));
        // eps no longer appears; send it anywhere.
        let expected = linear.remap(n, &(0..=n).map(|i| i.min(n - 1)).collect::<Vec<_>>());
        let acted = p.gl_action(&x).unwrap();
        prop_assert_eq!(acted.poly(), &expected);
    }
}

/// A random cubic in 4 variables through `[1:0:0:0]`, smooth there.
fn cubic_through_origin(rng: &mut ChaCha8Rng) -> HypersurfaceSpec {
    loop {
        let mut f = random_form(rng, 4, 3).poly().clone();
        let lead = Monomial::new(vec![3, 0, 0, 0]);
        let c = f.coeff(&lead);
        f.add_term(lead, -c);
        let vars: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let point = vec![fe(1), fe(0), fe(0), fe(0)];
        if (0..4).all(|i| f.derivative(i).eval(&point).is_zero()) {
            continue;
        }
        if let Ok(spec) = HypersurfaceSpec::new(vars, f, Field::Rational, point, 3) {
            return spec;
        }
    }
}

/// Substituting the graph `(1, z, h(z))` through the frame into the ambient
/// polynomial leaves nothing below the jet order.
#[test]
fn resubstitution_on_random_cubics() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..15 {
        let spec = cubic_through_origin(&mut rng);
        for rule in [FrameRule::Orthogonal, FrameRule::Coordinate] {
            let chart = AdaptedChart::with_rule(&spec, rule).unwrap();
            let n = chart.dim();
            let order = 5;
            let jet = chart.graph_jet(order).unwrap();
            let mut chart_coords: Vec<MultiPoly> = vec![MultiPoly::constant(n, fe(1))];
            chart_coords.extend((0..n).map(|i| MultiPoly::var(n, i)));
            chart_coords.push(jet.jet().poly().clone());
            let ambient: Vec<MultiPoly> = chart
                .frame()
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&chart_coords)
                        .fold(MultiPoly::zero(n), |acc, (m, c)| &acc + &c.scale(m))
                })
                .collect();
            let back = spec.polynomial.substitute_truncated(&ambient, Some(order));
            assert!(back.is_zero(), "{rule:?}: {}", back.to_string_default());
        }
    }
}

/// The jet of order `k` is the truncation of the jet of order `k + 2`.
#[test]
fn jet_orders_are_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..10 {
        let spec = cubic_through_origin(&mut rng);
        let chart = AdaptedChart::new(&spec).unwrap();
        let high = chart.graph_jet(6).unwrap();
        for k in 2..=4 {
            let low = chart.graph_jet(k).unwrap();
            assert_eq!(low.jet().poly(), &high.jet().poly().truncate(k));
        }
        // Same at a nearby point.
        if let Some((z, s)) = chart.sample_graph_point(&mut rng) {
            let high = chart.graph_jet_at(&z, &s, 5).unwrap();
            let low = chart.graph_jet_at(&z, &s, 3).unwrap();
            assert_eq!(low.jet().poly(), &high.jet().poly().truncate(3));
            assert!(high.residual(&chart).is_zero());
        }
    }
}

/// Different first-order adapted frames give the same ideals `(F_2, .., F_k)`
/// after the tangent change of basis.
#[test]
fn frame_change_preserves_ideals() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..8 {
        let spec = cubic_through_origin(&mut rng);
        let orth = AdaptedChart::with_rule(&spec, FrameRule::Orthogonal).unwrap();
        let coord = AdaptedChart::with_rule(&spec, FrameRule::Coordinate).unwrap();
        let t_orth = orth.graph_jet(4).unwrap().fubini_forms(3).unwrap();
        let t_coord = coord.graph_jet(4).unwrap().fubini_forms(3).unwrap();
        let trans = orth.tangent_transition(&coord).unwrap();
        let n = trans.len();
        let transposed: Vec<Vec<FieldElement>> = (0..n).map(|i| (0..n).map(|j| trans[j][i].clone()).collect()).collect();
        for k in 2..=4 {
            let moved = FormTuple::new(
                t_coord.forms()[..k as usize - 1].iter().map(|f| f.substitute_linear(&transposed).unwrap()).collect(),
            )
            .unwrap();
            let own = FormTuple::new(t_orth.forms()[..k as usize - 1].to_vec()).unwrap();
            for delta in 2..=k + 1 {
                let a = ideal_component(&moved, delta).unwrap();
                let b = ideal_component(&own, delta).unwrap();
                assert!(a.same_span(&b).unwrap(), "k = {k}, delta = {delta}");
            }
        }
    }
}

#[test]
fn gl_orbit_inside_descent_kernel() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for n in 2..=4 {
        let p = FormTuple::new(vec![generic_form(&mut rng, n, 2), generic_form(&mut rng, n, 3)]).unwrap();
        let gl = gl_orbit_span(&p).unwrap();
        let k = descent_kernel(&p).unwrap();
        assert!(k.span.contains_subspace(&gl).unwrap());
        // The m-part has nothing in the degree-2 block.
        let q_len = oscu_core::algebra::sym_dim(n, 2);
        for v in &k.span.vectors()[k.gl_generators..] {
            assert!(v[..q_len].iter().all(FieldElement::is_zero));
        }
    }
}

/// On the graph of `p_2 + p_3 + p_4`, the second form at `z` has tensor
/// coefficients `r_ab(z) = sum_delta delta (delta - 1) p_{ab c..} z^c ..`,
/// i.e. the Hessian of the graph function.
#[test]
fn second_form_along_family_graph() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let n = 3;
    let ps: Vec<SymForm> = (2..=4).map(|d| generic_form(&mut rng, n, d)).collect();
    let spec = build_family(&ps, 4).unwrap();
    let chart = AdaptedChart::new(&spec).unwrap();
    assert_eq!(chart.frame(), identity(n + 2).as_slice());
    for _ in 0..5 {
        let z: Vec<FieldElement> =
            (0..n).map(|_| FieldElement::from_ratio(rng.gen_range(-5..=5), rng.gen_range(1..=3))).collect();
        let s = ps.iter().fold(fe(0), |acc, p| &acc + &p.evaluate(&z).unwrap());
        let f2 = chart.graph_jet_at(&z, &s, 3).unwrap().fubini_forms(2).unwrap().form(2).clone();
        for a in 0..n {
            for b in 0..n {
                let mut r = fe(0);
                for p in &ps {
                    let delta = p.degree();
                    let rest = delta as usize - 2;
                    let mut acc = fe(0);
                    for tuple in 0..n.pow(rest as u32) {
                        let mut idx = vec![a, b];
                        let mut w = fe(1);
                        let mut t = tuple;
                        for _ in 0..rest {
                            idx.push(t % n);
                            w = &w * &z[t % n];
                            t /= n;
                        }
                        acc = &acc + &(&p.tensor_coeff(&idx) * &w);
                    }
                    r = &r + &(&fe((delta * (delta - 1)) as i64) * &acc);
                }
                assert_eq!(f2.tensor_coeff(&[a, b]), r, "r_{a}{b}");
            }
        }
    }
}

#[test]
fn inverse_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for _ in 0..20 {
        let m: Vec<Vec<FieldElement>> = (0..4).map(|_| (0..4).map(|_| fe(rng.gen_range(-3..=3))).collect()).collect();
        let v: Vec<FieldElement> = (0..4).map(|_| fe(rng.gen_range(-3..=3))).collect();
        match inverse(&m) {
            Some(inv) => assert_eq!(mat_vec(&inv, &mat_vec(&m, &v)), v),
            None => assert!(rank(&m).unwrap() < 4),
        }
    }
}

/// `(e_i -| P)(y) = sum_{c} P_{i c_2 .. c_k} y^{c_2} .. y^{c_k}` by brute force.
fn contraction_at(p: &SymForm, i: usize, y: &[FieldElement]) -> FieldElement {
    let n = y.len();
    let rest = p.degree() as usize - 1;
    let mut acc = fe(0);
    for tuple in 0..n.pow(rest as u32) {
        let mut idx = vec![i];
        let mut w = fe(1);
        let mut t = tuple;
        for _ in 0..rest {
            idx.push(t % n);
            w = &w * &y[t % n];
            t /= n;
        }
        acc = &acc + &(&p.tensor_coeff(&idx) * &w);
    }
    acc
}

#[test]
fn xi_matches_tensor_contraction() {
    use oscu_core::geometry::xi_shift;
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    for n in 2..=4 {
        let q = generic_form(&mut rng, n, 2);
        let qinv = inverse(&q.symmetric_matrix()).unwrap();
        let p3 = generic_form(&mut rng, n, 3);
        let p4 = generic_form(&mut rng, n, 4);
        let tuple = FormTuple::new(vec![q, p3.clone(), p4.clone()]).unwrap();
        for (delta, pd) in [(3, &p3), (4, &p4)] {
            let xi = xi_shift(&tuple, delta).unwrap();
            assert_eq!(xi.degree(), delta + 1);
            for _ in 0..5 {
                let y: Vec<FieldElement> = (0..n).map(|_| fe(rng.gen_range(-4..=4))).collect();
                let mut brute = fe(0);
                for i in 0..n {
                    for j in 0..n {
                        let term = &(&qinv[i][j] * &contraction_at(pd, i, &y)) * &contraction_at(&p3, j, &y);
                        brute = &brute + &term;
                    }
                }
                assert_eq!(xi.evaluate(&y).unwrap(), brute, "n = {n}, delta = {delta}");
            }
        }
    }
}
