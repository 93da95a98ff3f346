//! Osculating-line varieties, ideal components, Hilbert-function
//! diagnostics, the plane `E_S`, the shift `xi_delta` and the graph family.

use crate::algebra::{
    inverse, monomials_of_degree, rank, sym_dim, Field, FieldElement, Monomial, MonomialBasis,
    MultiPoly, Subspace, SymForm,
};
use crate::error::{Error, Result};
use crate::frames::FubiniTuple;
use crate::parser_io::HypersurfaceSpec;

/// A tuple `P = (P_2, .., P_d)` with `P_j` of degree `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormTuple {
    forms: Vec<SymForm>,
}

impl FormTuple {
    pub fn new(forms: Vec<SymForm>) -> Result<Self> {
        let first = forms.first().ok_or_else(|| Error::Shape("empty form tuple".into()))?;
        let n = first.nvars();
        for (i, f) in forms.iter().enumerate() {
            if f.degree() != i as u32 + 2 {
                return Err(Error::Shape(format!("slot {i} holds a form of degree {}", f.degree())));
            }
            if f.nvars() != n {
                return Err(Error::Shape("forms in different numbers of variables".into()));
            }
        }
        Ok(Self { forms })
    }

    /// `(F_2, .., F_d)` of a Fubini tuple.
    pub fn from_fubini(t: &FubiniTuple) -> Self {
        Self { forms: t.base_forms().to_vec() }
    }

    pub fn nvars(&self) -> usize {
        self.forms[0].nvars()
    }

    /// Top degree `d`.
    pub fn top_degree(&self) -> u32 {
        self.forms.len() as u32 + 1
    }

    pub fn forms(&self) -> &[SymForm] {
        &self.forms
    }

    /// `P_j` for `2 <= j <= d`.
    pub fn form(&self, j: u32) -> &SymForm {
        &self.forms[(j - 2) as usize]
    }

    pub fn substitute_linear(&self, a: &[Vec<FieldElement>]) -> Result<Self> {
        Ok(Self { forms: self.forms.iter().map(|f| f.substitute_linear(a)).collect::<Result<_>>()? })
    }
}

/// `C_{k,x}`: the common zeros of `F_2, .., F_k` in `P(T)`.
#[derive(Clone, Debug)]
pub struct ConeVariety {
    generators: Vec<SymForm>,
}

impl ConeVariety {
    pub fn new(tuple: &FubiniTuple, k: u32) -> Result<Self> {
        if k < 2 || k > tuple.order() + 1 {
            return Err(Error::Precondition(format!("no forms available for k = {k}")));
        }
        Ok(Self { generators: (2..=k).map(|j| tuple.form(j).clone()).collect() })
    }

    pub fn generators(&self) -> &[SymForm] {
        &self.generators
    }

    /// Dimension `n - 1` of the ambient projective space.
    pub fn ambient_dim(&self) -> usize {
        self.generators[0].nvars() - 1
    }

    pub fn contains(&self, v: &[FieldElement]) -> Result<bool> {
        for g in &self.generators {
            if !g.evaluate(v)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Coefficient vectors of `m * g` for every monomial `m` of degree
/// `delta - deg g`, in the basis of degree `delta`.
fn multiples(g: &SymForm, basis: &MonomialBasis) -> Vec<Vec<FieldElement>> {
    if g.is_zero() || g.degree() > basis.degree() {
        return Vec::new();
    }
    monomials_of_degree(g.nvars(), basis.degree() - g.degree())
        .iter()
        .map(|m| g.mul_monomial(m).coefficients(basis))
        .collect()
}

/// `I_delta` of the ideal generated by `forms`, as a subspace of `S^delta`.
pub fn ideal_component_of(forms: &[SymForm], n: usize, delta: u32) -> Result<Subspace> {
    let basis = MonomialBasis::new(n, delta);
    let vectors = forms.iter().flat_map(|g| multiples(g, &basis)).collect();
    Subspace::new(vec![(delta, basis.len())], vectors)
}

/// `I_delta(P)`.
pub fn ideal_component(p: &FormTuple, delta: u32) -> Result<Subspace> {
    if delta < 2 {
        return Err(Error::Precondition("ideal components start in degree 2".into()));
    }
    ideal_component_of(p.forms(), p.nvars(), delta)
}

/// Whether `alpha` lies in `I_{deg alpha}(P)`.
pub fn membership_test(p: &FormTuple, alpha: &SymForm) -> Result<bool> {
    if alpha.nvars() != p.nvars() {
        return Err(Error::Shape("form and tuple in different numbers of variables".into()));
    }
    if alpha.is_zero() {
        return Ok(true);
    }
    if alpha.degree() < 2 {
        return Ok(false);
    }
    let space = ideal_component(p, alpha.degree())?;
    space.contains(&alpha.coefficients(&MonomialBasis::new(p.nvars(), alpha.degree())))
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct HilbertData {
    pub nvars: usize,
    /// Degrees of the nonzero generators.
    pub generator_degrees: Vec<u32>,
    /// `dim I_delta` for `delta = 0..=D`.
    pub ideal_dims: Vec<usize>,
    /// `dim S^delta - dim I_delta`.
    pub quotient_dims: Vec<usize>,
    /// Complete-intersection prediction for the quotient.
    pub predicted_quotient: Vec<usize>,
    /// `quotient_dims - predicted_quotient`.
    pub defects: Vec<usize>,
}

impl HilbertData {
    /// Degrees where the quotient exceeds the prediction.
    pub fn flagged(&self) -> Vec<u32> {
        self.defects.iter().enumerate().filter(|(_, &d)| d > 0).map(|(i, _)| i as u32).collect()
    }

    pub fn has_syzygy_defect(&self) -> bool {
        self.defects.iter().any(|&d| d > 0)
    }
}

/// Coefficients of `prod_j (1 - t^{d_j}) / (1 - t)^n` through `t^max`,
/// truncated at the first non-positive coefficient.
pub fn complete_intersection_series(n: usize, degrees: &[u32], max: u32) -> Vec<usize> {
    let len = max as usize + 1;
    let mut num = vec![0i128; len];
    num[0] = 1;
    for &d in degrees {
        for i in (d as usize..len).rev() {
            num[i] -= num[i - d as usize];
        }
    }
    let mut out = Vec::with_capacity(len);
    let mut positive = true;
    for delta in 0..len {
        let c: i128 = (0..=delta).map(|i| num[i] * sym_dim(n, (delta - i) as u32) as i128).sum();
        if c <= 0 {
            positive = false;
        }
        out.push(if positive { c as usize } else { 0 });
    }
    out
}

/// Hilbert function of `S / (P)` in degrees `0..=max_degree`, compared with
/// the complete-intersection prediction.
pub fn hilbert_diagnostics(p: &FormTuple, max_degree: u32) -> Result<HilbertData> {
    let generators: Vec<SymForm> = p.forms().iter().filter(|f| !f.is_zero()).cloned().collect();
    hilbert_of(&generators, p.nvars(), max_degree, p.top_degree() + 3)
}

/// As [`hilbert_diagnostics`] for an arbitrary list of nonzero forms.
pub fn hilbert_of(generators: &[SymForm], n: usize, max_degree: u32, limit: u32) -> Result<HilbertData> {
    if max_degree > limit {
        return Err(Error::Precondition(format!("Hilbert degree {max_degree} exceeds the limit {limit}")));
    }
    let generator_degrees: Vec<u32> = generators.iter().map(SymForm::degree).collect();
    let mut ideal_dims = Vec::new();
    let mut quotient_dims = Vec::new();
    for delta in 0..=max_degree {
        let dim_i = if delta < 2 { 0 } else { ideal_component_of(generators, n, delta)?.rank() };
        ideal_dims.push(dim_i);
        quotient_dims.push(sym_dim(n, delta) - dim_i);
    }
    let predicted_quotient = complete_intersection_series(n, &generator_degrees, max_degree);
    let defects = quotient_dims
        .iter()
        .zip(&predicted_quotient)
        .map(|(&q, &pq)| {
            q.checked_sub(pq).ok_or_else(|| {
                Error::Precondition("quotient smaller than the complete-intersection bound".into())
            })
        })
        .collect::<Result<_>>()?;
    Ok(HilbertData { nvars: n, generator_degrees, ideal_dims, quotient_dims, predicted_quotient, defects })
}

/// Layout `(delta, dim S^delta)` for `delta = lo..=hi`.
pub fn graded_blocks(n: usize, lo: u32, hi: u32) -> Vec<(u32, usize)> {
    (lo..=hi).map(|d| (d, sym_dim(n, d))).collect()
}

/// `E_S = span{(v -| S_3, .., v -| S_{d+1})}` for `S = (S_3, .., S_{d+1})`,
/// and whether the zero locus of `S` is a cone (`dim E_S < n`).
pub fn cone_check(s: &[SymForm]) -> Result<(bool, Subspace)> {
    let first = s.first().ok_or_else(|| Error::Shape("empty tuple".into()))?;
    let n = first.nvars();
    for (i, f) in s.iter().enumerate() {
        if f.degree() != i as u32 + 3 || f.nvars() != n {
            return Err(Error::Shape(format!("slot {i} has the wrong degree or variable count")));
        }
    }
    let hi = s.len() as u32 + 1;
    let bases: Vec<MonomialBasis> = (2..=hi).map(|d| MonomialBasis::new(n, d)).collect();
    let vectors = (0..n)
        .map(|a| {
            s.iter()
                .zip(&bases)
                .flat_map(|(f, b)| f.contract_basis(a).coefficients(b))
                .collect()
        })
        .collect();
    let e = Subspace::new(graded_blocks(n, 2, hi), vectors)?;
    Ok((e.rank() < n, e))
}

/// `Q^{ij}`, the inverse of the matrix of a nondegenerate quadric.
pub fn dual_quadric(q: &SymForm) -> Result<Vec<Vec<FieldElement>>> {
    if q.degree() != 2 {
        return Err(Error::Shape("dual quadric of a non-quadratic form".into()));
    }
    let m = q.symmetric_matrix();
    inverse(&m).ok_or_else(|| Error::DegenerateQuadric {
        rank: rank(&m).unwrap_or(0),
        n: q.nvars(),
    })
}

/// `xi_delta(P) = sum_{ij} Q^{ij} (e_i -| P_delta)(e_j -| P_3)` with `Q = P_2`,
/// a form of degree `delta + 1`.
pub fn xi_shift(p: &FormTuple, delta: u32) -> Result<SymForm> {
    if delta < 3 || delta > p.top_degree() {
        return Err(Error::Precondition(format!("xi_{delta} needs 3 <= delta <= {}", p.top_degree())));
    }
    let qinv = dual_quadric(p.form(2))?;
    Ok(xi_with(&qinv, p.form(delta), p.form(3)))
}

/// `sum_{ij} qinv[i][j] (e_i -| a)(e_j -| b)`.
pub fn xi_with(qinv: &[Vec<FieldElement>], a: &SymForm, b: &SymForm) -> SymForm {
    let n = a.nvars();
    let degree = a.degree() + b.degree() - 2;
    let mut out = SymForm::zero(n, degree);
    if a.is_zero() || b.is_zero() {
        return out;
    }
    let ca: Vec<SymForm> = (0..n).map(|i| a.contract_basis(i)).collect();
    let cb: Vec<SymForm> = (0..n).map(|j| b.contract_basis(j)).collect();
    for i in 0..n {
        if ca[i].is_zero() {
            continue;
        }
        // sum_j qinv[i][j] (e_j -| b)
        let mut mixed = SymForm::zero(n, b.degree() - 1);
        for j in 0..n {
            if !qinv[i][j].is_zero() && !cb[j].is_zero() {
                mixed = mixed.add(&cb[j].scale(&qinv[i][j]));
            }
        }
        if !mixed.is_zero() {
            out = out.add(&ca[i].mul(&mixed));
        }
    }
    out
}

/// The hypersurface `F = -z_0^{d'-1} z_N + sum_j z_0^{d'-j} p_j(z)` at
/// `[1:0:..:0]`, whose graph function there is `p_2 + .. + p_d`.
/// `ps` lists `p_2, .., p_d`; the spec's order is `d`.
pub fn build_family(ps: &[SymForm], total_degree: u32) -> Result<HypersurfaceSpec> {
    let first = ps.first().ok_or_else(|| Error::Shape("need at least p_2".into()))?;
    let n = first.nvars();
    for (i, p) in ps.iter().enumerate() {
        if p.degree() != i as u32 + 2 || p.nvars() != n {
            return Err(Error::Shape(format!("p_{} has the wrong degree or variable count", i + 2)));
        }
    }
    let d = ps.len() as u32 + 1;
    if total_degree < d {
        return Err(Error::Precondition(format!("total degree {total_degree} is below d = {d}")));
    }
    let np2 = n + 2;
    let inner: Vec<usize> = (1..=n).collect();
    let mut f = MultiPoly::zero(np2);
    let mut lead = vec![0u16; np2];
    lead[0] = (total_degree - 1) as u16;
    lead[np2 - 1] = 1;
    f.add_term(Monomial::new(lead), FieldElement::from_int(-1));
    for p in ps {
        let lifted = p.poly().remap(np2, &inner);
        let mut z0 = vec![0u16; np2];
        z0[0] = (total_degree - p.degree()) as u16;
        f = &f + &lifted.mul_monomial(&Monomial::new(z0), &FieldElement::one());
    }
    let field = f
        .terms()
        .find_map(|(_, c)| c.extension().cloned())
        .map_or(Field::Rational, Field::Extension);
    let vars: Vec<String> = (0..np2).map(|i| format!("z{i}")).collect();
    let mut point = vec![FieldElement::zero(); np2];
    point[0] = FieldElement::one();
    HypersurfaceSpec::new(vars, f, field, point, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::AdaptedChart;
    use rand::SeedableRng;

    fn fe(v: i64) -> FieldElement {
        FieldElement::from_int(v)
    }

    fn form(n: usize, deg: u32, terms: &[(&[u16], i64)]) -> SymForm {
        let poly = MultiPoly::from_terms(n, terms.iter().map(|(e, c)| (Monomial::new(e.to_vec()), fe(*c))));
        SymForm::new(poly, deg).unwrap()
    }

    #[test]
    fn single_quadric_component() {
        let p = FormTuple::new(vec![form(2, 2, &[(&[1, 1], 1)])]).unwrap();
        assert_eq!(ideal_component(&p, 3).unwrap().rank(), 2);
    }

    #[test]
    fn koszul_series_values() {
        assert_eq!(complete_intersection_series(4, &[2, 3], 5), vec![1, 4, 9, 15, 21, 27]);
        // a single quadric in two variables: 1, 2, 2, 2, ...
        assert_eq!(complete_intersection_series(2, &[2], 4), vec![1, 2, 2, 2, 2]);
        // three quadrics in two variables: the series goes negative and is cut off
        assert_eq!(complete_intersection_series(2, &[2, 2, 2], 4), vec![1, 2, 0, 0, 0]);
    }

    #[test]
    fn planted_syzygy_is_flagged() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let p2 = crate::fixtures::generic_form(&mut rng, 4, 2);
        let p3 = p2.mul_monomial(&Monomial::var(4, 0));
        let t = FormTuple::new(vec![p2, p3]).unwrap();
        let h = hilbert_diagnostics(&t, 5).unwrap();
        assert_eq!(h.flagged().first(), Some(&3));
    }

    #[test]
    fn cone_examples() {
        let s3 = form(2, 3, &[(&[3, 0], 1)]);
        let (cone, e) = cone_check(&[s3]).unwrap();
        assert!(cone);
        assert_eq!(e.rank(), 1);
    }

    #[test]
    fn xi_of_cube() {
        let q = form(2, 2, &[(&[2, 0], 1), (&[0, 2], 1)]);
        let p3 = form(2, 3, &[(&[3, 0], 1)]);
        let t = FormTuple::new(vec![q, p3]).unwrap();
        assert_eq!(xi_shift(&t, 3).unwrap(), form(2, 4, &[(&[4, 0], 1)]));
        let degenerate = FormTuple::new(vec![form(2, 2, &[(&[2, 0], 1)]), form(2, 3, &[])]).unwrap();
        assert!(matches!(xi_shift(&degenerate, 3), Err(Error::DegenerateQuadric { rank: 1, n: 2 })));
    }

    #[test]
    fn family_graph_is_the_sum() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let p2 = crate::fixtures::generic_form(&mut rng, 3, 2);
        let p3 = crate::fixtures::generic_form(&mut rng, 3, 3);
        let spec = build_family(&[p2.clone(), p3.clone()], 4).unwrap();
        let chart = AdaptedChart::new(&spec).unwrap();
        let jet = chart.graph_jet(5).unwrap();
        assert_eq!(jet.jet().poly(), &(p2.poly() + p3.poly()));
        assert!(build_family(&[p2, p3], 2).is_err());
    }
}
