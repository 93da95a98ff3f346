//! First-order adapted charts, graph jets and Fubini forms.
//!
//! Given a smooth point `x` of `X = {F = 0}`, an [`AdaptedChart`] is a linear
//! change of coordinates `w = M z̄` whose columns are
//!
//! * `e_0 = x̂`,
//! * `n` tangent vectors spanning `ker dF(x) / x̂`,
//! * `e_N`, the unit vector of the coordinate where `|dF/dw_j(x)|` is largest
//!   (first such index on ties).
//!
//! In the affine chart `z_0 = 1` the hypersurface is the graph `z_N = f(z)`
//! near the origin, with `f(0) = 0` and `df(0) = 0`. The Fubini forms are
//! `F_k = (-1)^k sum f_{a_1..a_k} y^{a_1}..y^{a_k}` over ordered index tuples,
//! i.e. `(-1)^k k!` times the degree-`k` Taylor part of `f`.
//!
//! Two rules choose the tangent vectors, see [`FrameRule`].

use rand::Rng;

use crate::algebra::{inverse, rank, FieldElement, Jet, Monomial, MultiPoly, SymForm};
use crate::error::{Error, Result};
use crate::parser_io::HypersurfaceSpec;

/// How the tangent vectors of an adapted chart are chosen.
///
/// Both rules first fix the normal index `j*`. The remaining input
/// coordinates, except one pivot index `i0`, each contribute one tangent
/// vector `v_k = e_k + alpha e_{i0} + beta e_{j*}`, in declared order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum FrameRule {
    /// `v_k` is tangent and also orthogonal to `x̂` for the standard dot
    /// product. `i0` is the first index `!= j*` with
    /// `g_{i0} x_{j*} != g_{j*} x_{i0}`. Falls back to [`FrameRule::Coordinate`]
    /// when no such index exists (only possible if `x̂ . x̂ = 0`).
    #[default]
    Orthogonal,
    /// `v_k = e_k - (g_k / g_{j*}) e_{j*}` and `i0` is the first index
    /// `!= j*` with `x_{i0} != 0`.
    Coordinate,
}

#[derive(Clone, Debug)]
pub struct AdaptedChart {
    ambient: MultiPoly,
    point: Vec<FieldElement>,
    gradient: Vec<FieldElement>,
    /// `frame[i][k]`: input coordinate `i` of adapted basis vector `k`.
    frame: Vec<Vec<FieldElement>>,
    normal_index: usize,
    pivot_index: usize,
    tangent_indices: Vec<usize>,
    rule: FrameRule,
    homogeneous: MultiPoly,
    affine: MultiPoly,
}

impl AdaptedChart {
    pub fn new(spec: &HypersurfaceSpec) -> Result<Self> {
        Self::with_rule(spec, FrameRule::default())
    }

    pub fn with_rule(spec: &HypersurfaceSpec, rule: FrameRule) -> Result<Self> {
        Self::from_parts(&spec.polynomial, &spec.point, rule)
    }

    pub fn from_parts(f: &MultiPoly, point: &[FieldElement], rule: FrameRule) -> Result<Self> {
        let np2 = f.nvars();
        if point.len() != np2 {
            return Err(Error::Shape(format!("point has {} coordinates, expected {np2}", point.len())));
        }
        if np2 < 3 {
            return Err(Error::Precondition("need at least three homogeneous coordinates".into()));
        }
        let value = f.eval(point);
        if !value.is_zero() {
            return Err(Error::NotOnHypersurface(value.to_string()));
        }
        let gradient: Vec<FieldElement> = (0..np2).map(|i| f.derivative(i).eval(point)).collect();
        if gradient.iter().all(FieldElement::is_zero) {
            return Err(Error::SingularPoint);
        }
        let mut normal_index = 0;
        for (j, g) in gradient.iter().enumerate().skip(1) {
            if g.cmp_magnitude(&gradient[normal_index]) == std::cmp::Ordering::Greater {
                normal_index = j;
            }
        }

        let (frame, pivot_index, rule) = match rule {
            FrameRule::Orthogonal => match orthogonal_frame(point, &gradient, normal_index) {
                Some((m, i0)) => (m, i0, FrameRule::Orthogonal),
                None => {
                    let (m, i0) = coordinate_frame(point, &gradient, normal_index)?;
                    (m, i0, FrameRule::Coordinate)
                }
            },
            FrameRule::Coordinate => {
                let (m, i0) = coordinate_frame(point, &gradient, normal_index)?;
                (m, i0, FrameRule::Coordinate)
            }
        };
        let tangent_indices = (0..np2).filter(|&k| k != normal_index && k != pivot_index).collect();

        let subs: Vec<MultiPoly> = frame.iter().map(|row| MultiPoly::linear(row)).collect();
        let homogeneous = f.substitute(&subs);
        // G(1, z_1..z_n, s): drop z_0 and shift the remaining variables down.
        let n1 = np2 - 1;
        let mut affine = MultiPoly::zero(n1);
        for (m, c) in homogeneous.terms() {
            affine.add_term(Monomial::new(m.exps()[1..].to_vec()), c.clone());
        }

        let chart = Self {
            ambient: f.clone(),
            point: point.to_vec(),
            gradient,
            frame,
            normal_index,
            pivot_index,
            tangent_indices,
            rule,
            homogeneous,
            affine,
        };
        chart.validate()?;
        Ok(chart)
    }

    /// Checks `G(e_0) = 0`, `dG/dz_a(e_0) = 0` for tangent `a` and
    /// `dG/dz_N(e_0) != 0`.
    pub fn validate(&self) -> Result<()> {
        let np2 = self.homogeneous.nvars();
        let mut e0 = vec![FieldElement::zero(); np2];
        e0[0] = FieldElement::one();
        if !self.homogeneous.eval(&e0).is_zero() {
            return Err(Error::Precondition("adapted chart does not send x to [1:0:..:0]".into()));
        }
        for a in 1..np2 - 1 {
            if !self.homogeneous.derivative(a).eval(&e0).is_zero() {
                return Err(Error::Precondition(format!("adapted coordinate {a} is not tangent")));
            }
        }
        if self.homogeneous.derivative(np2 - 1).eval(&e0).is_zero() {
            return Err(Error::Precondition("adapted normal coordinate is tangent".into()));
        }
        Ok(())
    }

    /// Tangent dimension `n`.
    pub fn dim(&self) -> usize {
        self.ambient.nvars() - 2
    }

    pub fn rule(&self) -> FrameRule {
        self.rule
    }

    pub fn ambient(&self) -> &MultiPoly {
        &self.ambient
    }

    pub fn point(&self) -> &[FieldElement] {
        &self.point
    }

    pub fn gradient(&self) -> &[FieldElement] {
        &self.gradient
    }

    /// The matrix `M` with `w = M z̄`.
    pub fn frame(&self) -> &[Vec<FieldElement>] {
        &self.frame
    }

    pub fn normal_index(&self) -> usize {
        self.normal_index
    }

    pub fn pivot_index(&self) -> usize {
        self.pivot_index
    }

    /// Input coordinate index that owns each tangent vector, in order.
    pub fn tangent_indices(&self) -> &[usize] {
        &self.tangent_indices
    }

    /// Tangent vector `a` (0-based) in input coordinates.
    pub fn tangent_vector(&self, a: usize) -> Vec<FieldElement> {
        self.frame.iter().map(|row| row[a + 1].clone()).collect()
    }

    /// `G(z̄) = F(M z̄)`.
    pub fn homogeneous(&self) -> &MultiPoly {
        &self.homogeneous
    }

    /// `G(1, z, s)` in variables `z_1..z_n, s`.
    pub fn affine(&self) -> &MultiPoly {
        &self.affine
    }

    /// Input coordinates of the chart point `(1, z, s)`.
    pub fn ambient_point(&self, z: &[FieldElement], s: &FieldElement) -> Vec<FieldElement> {
        let mut zbar = Vec::with_capacity(z.len() + 2);
        zbar.push(FieldElement::one());
        zbar.extend(z.iter().cloned());
        zbar.push(s.clone());
        crate::algebra::mat_vec(&self.frame, &zbar)
    }

    /// Degree of `G(1, z, s)` in `s`.
    pub fn normal_degree(&self) -> u32 {
        let s = self.dim();
        self.affine.terms().map(|(m, _)| m.exps()[s] as u32).max().unwrap_or(0)
    }

    /// Jet of the graph function at the origin, exact through degree `order`.
    pub fn graph_jet(&self, order: u32) -> Result<GraphJet> {
        let zero = vec![FieldElement::zero(); self.dim()];
        self.graph_jet_at(&zero, &FieldElement::zero(), order)
    }

    /// Jet of the graph function at the chart point `(z, s)`, which must lie
    /// on `X` with `dG/ds(z, s) != 0`.
    pub fn graph_jet_at(&self, z: &[FieldElement], s: &FieldElement, order: u32) -> Result<GraphJet> {
        let n = self.dim();
        if z.len() != n {
            return Err(Error::Shape(format!("chart point has {} coordinates, expected {n}", z.len())));
        }
        let mut center = z.to_vec();
        center.push(s.clone());
        let value = self.affine.eval(&center);
        if !value.is_zero() {
            return Err(Error::NotOnHypersurface(value.to_string()));
        }
        let total = self.affine.degree().unwrap_or(0);
        let shifted = Jet::expand(&self.affine, &center, total).into_poly();
        let d_s = shifted.derivative(n);
        if d_s.coeff(&Monomial::one(n + 1)).is_zero() {
            return Err(Error::Precondition("the chart point is not a graph point (dG/ds = 0)".into()));
        }

        let vars: Vec<Jet> = (0..n).map(|i| Jet::variable(z, order, i)).collect();
        let mut h = Jet::new(z.to_vec(), order, MultiPoly::zero(n));
        let cap = 2 * (32 - order.leading_zeros()) + 4;
        for _ in 0..cap {
            let mut inner = vars.clone();
            inner.push(h.clone());
            let g = Jet::compose(&shifted, &inner);
            let gs = Jet::compose(&d_s, &inner);
            let step = g.mul(&gs.inverse().expect("constant term checked above"));
            let next = h.sub(&step);
            if next == h {
                break;
            }
            h = next;
        }
        Ok(GraphJet { jet: h, base_value: s.clone() })
    }

    /// Tries to find an exact chart point `(z, s) != 0` of `X` with
    /// `dG/ds(z, s) != 0`, drawing small integer data from `rng`.
    pub fn sample_graph_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<(Vec<FieldElement>, FieldElement)> {
        let n = self.dim();
        let small = |rng: &mut R| FieldElement::from_ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4));
        for _ in 0..200 {
            let candidate = if self.normal_degree() == 1 {
                // s enters linearly: solve for it.
                let z: Vec<FieldElement> = (0..n).map(|_| small(rng)).collect();
                let mut coeff0 = MultiPoly::zero(1);
                let mut coeff1 = MultiPoly::zero(1);
                for (m, c) in self.affine.terms() {
                    let mut term = c.clone();
                    for (i, &e) in m.exps()[..n].iter().enumerate() {
                        term = &term * &z[i].pow(e as u32);
                    }
                    let target = if m.exps()[n] == 0 { &mut coeff0 } else { &mut coeff1 };
                    target.add_term(Monomial::one(1), term);
                }
                let g1 = coeff1.coeff(&Monomial::one(1));
                if g1.is_zero() {
                    continue;
                }
                let s = -(&coeff0.coeff(&Monomial::one(1)) / &g1);
                Some((z, s))
            } else {
                // A line through the origin meeting X in exactly one more point.
                let mut dir: Vec<FieldElement> = (0..n).map(|_| small(rng)).collect();
                dir.push(if rng.gen_bool(0.5) { FieldElement::zero() } else { small(rng) });
                line_second_point(&self.affine, &dir).map(|lambda| {
                    let z = dir[..n].iter().map(|c| c * &lambda).collect();
                    (z, &dir[n] * &lambda)
                })
            };
            let Some((z, s)) = candidate else { continue };
            if z.iter().all(FieldElement::is_zero) {
                continue;
            }
            let mut p = z.clone();
            p.push(s.clone());
            if self.affine.eval(&p).is_zero() && !self.affine.derivative(n).eval(&p).is_zero() {
                return Some((z, s));
            }
        }
        None
    }

    /// Order of vanishing at `t = 0` of `F(x̂ + t w)` where `w` is the tangent
    /// vector with frame coordinates `v`; `None` if the line lies in `X`.
    pub fn line_order(&self, v: &[FieldElement]) -> Result<Option<u32>> {
        let n = self.dim();
        if v.len() != n {
            return Err(Error::Shape(format!("direction has length {}, expected {n}", v.len())));
        }
        let w: Vec<FieldElement> = (0..self.point.len())
            .map(|i| {
                v.iter()
                    .enumerate()
                    .fold(FieldElement::zero(), |acc, (a, va)| &acc + &(va * &self.frame[i][a + 1]))
            })
            .collect();
        let line: Vec<MultiPoly> = self
            .point
            .iter()
            .zip(&w)
            .map(|(xi, wi)| {
                let mut p = MultiPoly::constant(1, xi.clone());
                p.add_term(Monomial::var(1, 0), wi.clone());
                p
            })
            .collect();
        let restricted = self.ambient.substitute(&line);
        Ok(restricted.min_degree())
    }

    /// Expresses this chart's tangent vectors in the tangent basis of
    /// `other`, modulo `x̂`. Row `a` holds the coordinates of tangent vector
    /// `a`, so forms transform as `P_other(y) -> P_other(T^t y)`.
    pub fn tangent_transition(&self, other: &AdaptedChart) -> Result<Vec<Vec<FieldElement>>> {
        let inv = inverse(&other.frame).ok_or_else(|| Error::Precondition("singular frame".into()))?;
        let n = self.dim();
        if other.dim() != n {
            return Err(Error::Shape("charts of different dimension".into()));
        }
        Ok((0..n)
            .map(|a| {
                let coords = crate::algebra::mat_vec(&inv, &self.tangent_vector(a));
                coords[1..=n].to_vec()
            })
            .collect())
    }
}

/// `v_k = e_k + alpha e_{i0} + beta e_{j*}` with `g . v_k = 0 = x . v_k`.
fn orthogonal_frame(
    x: &[FieldElement],
    g: &[FieldElement],
    js: usize,
) -> Option<(Vec<Vec<FieldElement>>, usize)> {
    let np2 = x.len();
    let (i0, det) = (0..np2).filter(|&i| i != js).find_map(|i| {
        let det = &(&g[i] * &x[js]) - &(&g[js] * &x[i]);
        (!det.is_zero()).then_some((i, det))
    })?;
    let tangent = |k: usize| {
        // [g_i0 g_js; x_i0 x_js] (alpha, beta) = -(g_k, x_k)
        let alpha = &(&(&x[k] * &g[js]) - &(&g[k] * &x[js])) / &det;
        let beta = &(&(&g[k] * &x[i0]) - &(&x[k] * &g[i0])) / &det;
        let mut v = vec![FieldElement::zero(); np2];
        v[k] = FieldElement::one();
        v[i0] = alpha;
        v[js] = beta;
        v
    };
    let frame = assemble_frame(x, js, i0, tangent);
    inverse(&frame).map(|_| (frame, i0))
}

fn coordinate_frame(
    x: &[FieldElement],
    g: &[FieldElement],
    js: usize,
) -> Result<(Vec<Vec<FieldElement>>, usize)> {
    let np2 = x.len();
    let i0 = (0..np2)
        .find(|&i| i != js && !x[i].is_zero())
        .ok_or_else(|| Error::Precondition("point is a coordinate vertex on the normal axis".into()))?;
    let tangent = |k: usize| {
        let mut v = vec![FieldElement::zero(); np2];
        v[k] = FieldElement::one();
        v[js] = -(&g[k] / &g[js]);
        v
    };
    let frame = assemble_frame(x, js, i0, tangent);
    if inverse(&frame).is_none() {
        return Err(Error::Precondition("adapted frame is singular".into()));
    }
    Ok((frame, i0))
}

fn assemble_frame(
    x: &[FieldElement],
    js: usize,
    i0: usize,
    tangent: impl Fn(usize) -> Vec<FieldElement>,
) -> Vec<Vec<FieldElement>> {
    let np2 = x.len();
    let mut columns = vec![x.to_vec()];
    columns.extend((0..np2).filter(|&k| k != js && k != i0).map(tangent));
    let mut normal = vec![FieldElement::zero(); np2];
    normal[js] = FieldElement::one();
    columns.push(normal);
    (0..np2).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect()
}

/// If `p(lambda * dir)` is `lambda^k (a + b lambda)` with `a, b != 0`, returns `-a/b`.
fn line_second_point(p: &MultiPoly, dir: &[FieldElement]) -> Option<FieldElement> {
    let subs: Vec<MultiPoly> = dir.iter().map(|c| MultiPoly::monomial(Monomial::var(1, 0), c.clone())).collect();
    let uni = p.substitute(&subs);
    let lo = uni.min_degree()?;
    let hi = uni.degree()?;
    if hi != lo + 1 || lo == 0 {
        return None;
    }
    let a = uni.coeff(&Monomial::new(vec![lo as u16]));
    let b = uni.coeff(&Monomial::new(vec![hi as u16]));
    Some(-(&a / &b))
}

/// Jet of the graph function `z_N = f(z)` around a chart point.
#[derive(Clone, Debug)]
pub struct GraphJet {
    jet: Jet,
    base_value: FieldElement,
}

impl GraphJet {
    pub fn jet(&self) -> &Jet {
        &self.jet
    }

    pub fn order(&self) -> u32 {
        self.jet.order()
    }

    pub fn center(&self) -> &[FieldElement] {
        self.jet.center()
    }

    /// `f` at the center, i.e. the normal coordinate of the base point.
    pub fn base_value(&self) -> &FieldElement {
        &self.base_value
    }

    /// `G(1, z + u, s + h(u))` truncated at the jet order; zero for a correct jet.
    pub fn residual(&self, chart: &AdaptedChart) -> MultiPoly {
        let n = chart.dim();
        let order = self.order();
        let mut inner: Vec<Jet> = (0..n)
            .map(|i| {
                let mut p = MultiPoly::var(n, i);
                p.add_term(Monomial::one(n), self.center()[i].clone());
                Jet::new(self.center().to_vec(), order, p)
            })
            .collect();
        let mut normal = self.jet.poly().clone();
        normal.add_term(Monomial::one(n), self.base_value.clone());
        inner.push(Jet::new(self.center().to_vec(), order, normal));
        Jet::compose(chart.affine(), &inner).into_poly()
    }

    /// `F_k = (-1)^k k! (degree-k part of the jet)`.
    pub fn form(&self, k: u32) -> Result<SymForm> {
        if k > self.order() {
            return Err(Error::Precondition(format!(
                "form of degree {k} needs a jet of order {k}, have {}",
                self.order()
            )));
        }
        let mut c = FieldElement::from_bigint(crate::algebra::factorial(k).into());
        if k % 2 == 1 {
            c = -c;
        }
        Ok(SymForm::component(self.jet.poly(), k).scale(&c))
    }

    /// `F_2, .., F_{d+1}`.
    pub fn fubini_forms(&self, d: u32) -> Result<FubiniTuple> {
        if d < 2 {
            return Err(Error::Precondition("order must be at least 2".into()));
        }
        let forms = (2..=d + 1).map(|k| self.form(k)).collect::<Result<Vec<_>>>()?;
        Ok(FubiniTuple { order: d, center: self.center().to_vec(), forms })
    }

    /// The `z_b`-derivative of `F_delta(z)` at the center, from the Taylor
    /// coefficients of the jet: `(-1)^delta sum_alpha delta!/alpha! d_b d^alpha f y^alpha`.
    pub fn form_derivative(&self, delta: u32, b: usize) -> Result<SymForm> {
        if delta + 1 > self.order() {
            return Err(Error::Precondition("jet order too low for the derivative".into()));
        }
        let n = self.jet.nvars();
        let poly = self.jet.poly();
        let mut out = MultiPoly::zero(n);
        let dfact = crate::algebra::factorial(delta);
        for alpha in crate::algebra::monomials_of_degree(n, delta) {
            let value = poly.derivative_multi(&alpha).derivative(b).coeff(&Monomial::one(n));
            if value.is_zero() {
                continue;
            }
            let weight = FieldElement::from_bigint((dfact / alpha.factorial_product()).into());
            out.add_term(alpha, &value * &weight);
        }
        let mut form = SymForm::new(out, delta)?;
        if delta % 2 == 1 {
            form = form.neg();
        }
        Ok(form)
    }
}

/// The forms `F_2, .., F_{d+1}` at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct FubiniTuple {
    order: u32,
    center: Vec<FieldElement>,
    forms: Vec<SymForm>,
}

impl FubiniTuple {
    /// Wraps explicit forms `F_2..F_{d+1}`.
    pub fn from_forms(forms: Vec<SymForm>) -> Result<Self> {
        if forms.len() < 2 {
            return Err(Error::Shape("need at least F_2 and F_3".into()));
        }
        let n = forms[0].nvars();
        for (i, f) in forms.iter().enumerate() {
            if f.degree() != i as u32 + 2 || f.nvars() != n {
                return Err(Error::Shape(format!("form {i} has the wrong degree or variable count")));
            }
        }
        Ok(Self { order: forms.len() as u32, center: vec![FieldElement::zero(); n], forms })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.forms[0].nvars()
    }

    pub fn center(&self) -> &[FieldElement] {
        &self.center
    }

    /// `F_k` for `2 <= k <= d + 1`.
    pub fn form(&self, k: u32) -> &SymForm {
        &self.forms[(k - 2) as usize]
    }

    pub fn forms(&self) -> &[SymForm] {
        &self.forms
    }

    /// `(F_2, .., F_d)`.
    pub fn base_forms(&self) -> &[SymForm] {
        &self.forms[..self.forms.len() - 1]
    }

    /// `F_{d+1}`.
    pub fn top_form(&self) -> &SymForm {
        self.forms.last().expect("nonempty")
    }

    /// Applies `y -> A y` to every form.
    pub fn substitute_linear(&self, a: &[Vec<FieldElement>]) -> Result<Self> {
        Ok(Self {
            order: self.order,
            center: self.center.clone(),
            forms: self.forms.iter().map(|f| f.substitute_linear(a)).collect::<Result<_>>()?,
        })
    }

    /// Largest `k <= d` with `F_2(v) = .. = F_k(v) = 0`, or 1 if `F_2(v) != 0`.
    pub fn osculation_order(&self, v: &[FieldElement]) -> Result<u32> {
        let mut k = 1;
        for f in self.base_forms() {
            if !f.evaluate(v)?.is_zero() {
                break;
            }
            k += 1;
        }
        Ok(k)
    }
}

/// Rank of the quadric `F_2` and whether it is nondegenerate (rank `n`).
pub fn gauss_nondegenerate(f2: &SymForm) -> Result<(bool, usize)> {
    if f2.degree() != 2 {
        return Err(Error::Shape("Gauss nondegeneracy needs a quadric".into()));
    }
    let r = rank(&f2.symmetric_matrix())?;
    Ok((r == f2.nvars(), r))
}

/// Fubini forms `F_2..F_{d+1}` at the spec's base point, using the default
/// frame rule.
pub fn fubini_forms(spec: &HypersurfaceSpec) -> Result<(AdaptedChart, FubiniTuple)> {
    let chart = AdaptedChart::new(spec)?;
    let tuple = chart.graph_jet(spec.order + 1)?.fubini_forms(spec.order)?;
    Ok((chart, tuple))
}

/// Outcome of comparing line contact orders with the forms.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct LineOracle {
    pub directions: usize,
    /// `counts[k - 1]` directions have `F_2 = .. = F_k = 0` and `F_{k+1} != 0`
    /// (`k = 1..=d`, the last entry also counting directions where all vanish).
    pub form_order_counts: Vec<usize>,
    /// Directions whose line lies in `X`.
    pub contained_lines: usize,
    /// `(direction, form order, ambient order)` where the two sides disagree.
    pub mismatches: Vec<(Vec<String>, u32, Option<u32>)>,
}

fn small_direction<R: Rng + ?Sized>(rng: &mut R, n: usize, sparse: bool) -> Vec<FieldElement> {
    loop {
        let v: Vec<FieldElement> = (0..n)
            .map(|_| {
                if sparse && rng.gen_bool(0.6) {
                    FieldElement::zero()
                } else {
                    FieldElement::from_int(rng.gen_range(-3..=3))
                }
            })
            .collect();
        if v.iter().any(|c| !c.is_zero()) {
            return v;
        }
    }
}

/// Random tangent directions: dense, sparse, and, when a zero `u` of `F_2`
/// turns up among the sparse ones, further zeros `q(w) u - 2 B(u, w) w`.
pub fn oracle_directions<R: Rng + ?Sized>(t: &FubiniTuple, rng: &mut R, count: usize) -> Result<Vec<Vec<FieldElement>>> {
    let n = t.dim();
    let q = t.form(2);
    let mut zero = None;
    for _ in 0..2000 {
        let v = small_direction(rng, n, true);
        if q.evaluate(&v)?.is_zero() {
            zero = Some(v);
            break;
        }
    }
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v = match (out.len() % 3, &zero) {
            (0, _) => small_direction(rng, n, false),
            (2, Some(u)) => {
                let w = small_direction(rng, n, false);
                let sum: Vec<FieldElement> = u.iter().zip(&w).map(|(a, b)| a + b).collect();
                let qw = q.evaluate(&w)?;
                let two_b = &q.evaluate(&sum)? - &qw;
                u.iter().zip(&w).map(|(a, b)| &(&qw * a) - &(&two_b * b)).collect()
            }
            _ => small_direction(rng, n, true),
        };
        if v.iter().any(|c| !c.is_zero()) {
            out.push(v);
        }
    }
    Ok(out)
}

/// For each direction `v`, the line through `x` meets `X` to order `>= k + 1`
/// exactly when `F_2(v) = .. = F_k(v) = 0`, for `k = 2..=d`.
pub fn line_oracle(chart: &AdaptedChart, t: &FubiniTuple, directions: &[Vec<FieldElement>]) -> Result<LineOracle> {
    use rayon::prelude::*;
    let d = t.order();
    let pairs: Vec<(u32, Option<u32>)> = directions
        .par_iter()
        .map(|v| Ok((t.osculation_order(v)?, chart.line_order(v)?)))
        .collect::<Result<_>>()?;
    let mut out = LineOracle {
        directions: directions.len(),
        form_order_counts: vec![0; d as usize],
        ..LineOracle::default()
    };
    for (v, (osc, line)) in directions.iter().zip(pairs) {
        out.form_order_counts[osc as usize - 1] += 1;
        out.contained_lines += usize::from(line.is_none());
        let agrees = (2..=d).all(|k| line.is_none_or(|o| o > k) == (osc >= k));
        if !agrees {
            out.mismatches.push((v.iter().map(ToString::to_string).collect(), osc, line));
        }
    }
    Ok(out)
}

/// Checks `d_b F_delta(z) = -(e_b -| F_{delta+1}(z))` at the chart point
/// `(z, s)` for all `2 <= delta <= d` and all `b`. Returns the failures.
pub fn derivative_identity_failures(
    chart: &AdaptedChart,
    z: &[FieldElement],
    s: &FieldElement,
    d: u32,
) -> Result<Vec<(u32, usize)>> {
    let jet = chart.graph_jet_at(z, s, d + 2)?;
    let tuple = jet.fubini_forms(d + 1)?;
    let mut failures = Vec::new();
    for delta in 2..=d {
        for b in 0..chart.dim() {
            let lhs = jet.form_derivative(delta, b)?;
            let rhs = tuple.form(delta + 1).contract_basis(b).neg();
            if lhs != rhs {
                failures.push((delta, b));
            }
        }
    }
    Ok(failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;
    use crate::parser_io::parse_homogeneous;

    fn fe(v: i64) -> FieldElement {
        FieldElement::from_int(v)
    }

    fn spec(vars: &[&str], poly: &str, point: &[i64], order: u32) -> HypersurfaceSpec {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let f = parse_homogeneous(poly, &vars, &Field::Rational).unwrap();
        HypersurfaceSpec::new(vars, f, Field::Rational, point.iter().map(|&v| fe(v)).collect(), order).unwrap()
    }

    #[test]
    fn quadric_graph() {
        let s = spec(&["z0", "z1", "z2"], "z0*z2 - z1^2", &[1, 0, 0], 2);
        let chart = AdaptedChart::new(&s).unwrap();
        assert_eq!(chart.normal_index(), 2);
        let jet = chart.graph_jet(3).unwrap();
        assert_eq!(jet.jet().poly(), &MultiPoly::monomial(Monomial::new(vec![2]), fe(1)));
        assert!(jet.residual(&chart).is_zero());
        let t = jet.fubini_forms(2).unwrap();
        assert_eq!(t.form(2).poly(), &MultiPoly::monomial(Monomial::new(vec![2]), fe(2)));
        assert!(t.form(3).is_zero());
    }

    #[test]
    fn singular_point_rejected() {
        let vars: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let f = parse_homogeneous("a*b*c", &vars, &Field::Rational).unwrap();
        let err = AdaptedChart::from_parts(&f, &[fe(1), fe(0), fe(0)], FrameRule::Orthogonal).unwrap_err();
        assert!(matches!(err, Error::SingularPoint));
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn both_rules_give_valid_charts() {
        let s = spec(&["a", "b", "c", "d"], "a^3 + b^3 + c^3 + d^3 + a*b*c + 2*a*c^2 - 3*b*d^2 + a*c*d", &[1, -1, 0, 0], 3);
        for rule in [FrameRule::Orthogonal, FrameRule::Coordinate] {
            let chart = AdaptedChart::with_rule(&s, rule).unwrap();
            assert_eq!(chart.rule(), rule);
            let jet = chart.graph_jet(5).unwrap();
            assert!(jet.residual(&chart).is_zero());
        }
    }

    #[test]
    fn derivative_identity_on_cubic_surface() {
        use rand::SeedableRng;
        let s = spec(&["a", "b", "c", "d"], "a^3 + b^3 + c^3 + d^3 + a*b*c + 2*a*c^2 - 3*b*d^2 + a*c*d", &[1, -1, 0, 0], 3);
        let chart = AdaptedChart::new(&s).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let (z, sv) = chart.sample_graph_point(&mut rng).unwrap();
        assert!(derivative_identity_failures(&chart, &z, &sv, 3).unwrap().is_empty());
    }

    #[test]
    fn line_order_matches_forms() {
        let s = spec(&["z0", "z1", "z2"], "z0*z2 - z1^2", &[1, 0, 0], 2);
        let chart = AdaptedChart::new(&s).unwrap();
        assert_eq!(chart.line_order(&[fe(1)]).unwrap(), Some(2));
        let plane = spec(&["a", "b", "c", "d"], "a*b - c*d", &[1, 0, 0, 0], 2);
        let chart = AdaptedChart::new(&plane).unwrap();
        // tangent directions are c and d; both lines lie on the quadric
        assert_eq!(chart.line_order(&[fe(1), fe(0)]).unwrap(), None);
        assert_eq!(chart.line_order(&[fe(1), fe(1)]).unwrap(), Some(2));
    }
}
