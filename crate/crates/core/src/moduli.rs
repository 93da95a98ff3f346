//! The differential of `P(x) = (F_2(x), .., F_d(x))`, the kernel of the
//! descent to moduli, and the resulting rank of the moduli map:
//!
//! `rank dphi = rank dP - dim(dP(T) & (gl(T) + m).P)`.
//!
//! Vectors of `S^2 + .. + S^d` are stored degree-blocked, each block in the
//! descending graded-lex monomial order of [`MonomialBasis`].

use serde::{Deserialize, Serialize};

use crate::algebra::{rank, FieldElement, MonomialBasis, Subspace, SymForm};
use crate::error::{Error, Result};
use crate::frames::{FubiniTuple, GraphJet};
use crate::geometry::{cone_check, dual_quadric, membership_test, xi_with, FormTuple};

/// Degree-blocked coordinates on `S^lo + .. + S^hi` in `n` variables.
#[derive(Clone, Debug)]
pub struct GradedLayout {
    n: usize,
    lo: u32,
    bases: Vec<MonomialBasis>,
}

impl GradedLayout {
    pub fn new(n: usize, lo: u32, hi: u32) -> Self {
        Self { n, lo, bases: (lo..=hi).map(|d| MonomialBasis::new(n, d)).collect() }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> Vec<(u32, usize)> {
        self.bases.iter().map(|b| (b.degree(), b.len())).collect()
    }

    pub fn dim(&self) -> usize {
        self.bases.iter().map(MonomialBasis::len).sum()
    }

    /// Concatenated coefficients of one form per block.
    pub fn encode(&self, slots: &[SymForm]) -> Vec<FieldElement> {
        assert_eq!(slots.len(), self.bases.len(), "slot count mismatch");
        slots.iter().zip(&self.bases).flat_map(|(f, b)| f.coefficients(b)).collect()
    }

    /// A vector that is `form` in the block of its degree and zero elsewhere.
    pub fn encode_single(&self, form: &SymForm) -> Vec<FieldElement> {
        let mut out = Vec::with_capacity(self.dim());
        for b in &self.bases {
            if b.degree() == form.degree() {
                out.extend(form.coefficients(b));
            } else {
                out.extend(std::iter::repeat_n(FieldElement::zero(), b.len()));
            }
        }
        out
    }

    /// Splits a vector back into forms.
    pub fn decode(&self, v: &[FieldElement]) -> Vec<SymForm> {
        let mut offset = 0;
        self.bases
            .iter()
            .map(|b| {
                let f = SymForm::from_coefficients(b, &v[offset..offset + b.len()]);
                offset += b.len();
                f
            })
            .collect()
    }

    pub fn subspace(&self, vectors: Vec<Vec<FieldElement>>) -> Result<Subspace> {
        Subspace::new(self.blocks(), vectors)
    }

    pub fn lowest_degree(&self) -> u32 {
        self.lo
    }
}

/// `dP(T) = span{-(e_a -| F_3, .., e_a -| F_{d+1})}`.
#[derive(Clone, Debug)]
pub struct DifferentialSpan {
    pub layout: GradedLayout,
    pub span: Subspace,
}

/// `(gl(T) + m).P`. The `m` part adds `m P_j` to slot `delta` for every
/// monomial `m` of degree `delta - j`, `2 <= j <= delta`, so it includes
/// rescaling a single slot (`j = delta`, `m = 1`).
#[derive(Clone, Debug)]
pub struct DescentKernel {
    pub layout: GradedLayout,
    pub span: Subspace,
    /// Number of `E_ab . P` generators (the first ones in `span`).
    pub gl_generators: usize,
    /// Number of `m P_j` generators.
    pub m_generators: usize,
}

fn differential_vectors(t: &FubiniTuple, layout: &GradedLayout) -> Vec<Vec<FieldElement>> {
    let d = t.order();
    (0..t.dim())
        .map(|a| {
            let slots: Vec<SymForm> = (3..=d + 1).map(|k| t.form(k).contract_basis(a).neg()).collect();
            layout.encode(&slots)
        })
        .collect()
}

fn kernel_vectors(p: &FormTuple, layout: &GradedLayout) -> (Vec<Vec<FieldElement>>, usize, usize) {
    let n = p.nvars();
    let d = p.top_degree();
    let mut vectors = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let slots: Vec<SymForm> = p.forms().iter().map(|f| f.gl_elementary(a, b)).collect();
            vectors.push(layout.encode(&slots));
        }
    }
    let gl = vectors.len();
    for j in 2..=d {
        let pj = p.form(j);
        if pj.is_zero() {
            continue;
        }
        // j = delta rescales a single slot; for slot 2 that direction is
        // already (identity).P minus the other rescalings.
        for delta in j.max(3)..=d {
            for m in crate::algebra::monomials_of_degree(n, delta - j) {
                vectors.push(layout.encode_single(&pj.mul_monomial(&m)));
            }
        }
    }
    let m_count = vectors.len() - gl;
    (vectors, gl, m_count)
}

pub fn differential_span(t: &FubiniTuple) -> Result<DifferentialSpan> {
    let layout = GradedLayout::new(t.dim(), 2, t.order());
    let span = layout.subspace(differential_vectors(t, &layout))?;
    Ok(DifferentialSpan { layout, span })
}

pub fn descent_kernel(p: &FormTuple) -> Result<DescentKernel> {
    let layout = GradedLayout::new(p.nvars(), 2, p.top_degree());
    let (vectors, gl_generators, m_generators) = kernel_vectors(p, &layout);
    let span = layout.subspace(vectors)?;
    Ok(DescentKernel { layout, span, gl_generators, m_generators })
}

/// Only the `gl(T).P` part of the kernel.
pub fn gl_orbit_span(p: &FormTuple) -> Result<Subspace> {
    let layout = GradedLayout::new(p.nvars(), 2, p.top_degree());
    let (mut vectors, gl, _) = kernel_vectors(p, &layout);
    vectors.truncate(gl);
    layout.subspace(vectors)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankData {
    pub rank_tilde: usize,
    pub rank_kernel: usize,
    pub rank_union: usize,
    pub intersection_dim: usize,
    pub rank_phi: usize,
}

/// Ranks of `dP`, of the descent kernel, of their sum, and the derived
/// `rank dphi`. The three exact ranks run in parallel.
pub fn rank_phi(t: &FubiniTuple) -> Result<RankData> {
    let p = FormTuple::from_fubini(t);
    let layout = GradedLayout::new(t.dim(), 2, t.order());
    let diff = differential_vectors(t, &layout);
    let (kern, _, _) = kernel_vectors(&p, &layout);
    let mut union = diff.clone();
    union.extend(kern.iter().cloned());
    let (rd, (rk, ru)) = rayon::join(|| rank(&diff), || rayon::join(|| rank(&kern), || rank(&union)));
    let (rank_tilde, rank_kernel, rank_union) = (rd?, rk?, ru?);
    let intersection_dim = rank_tilde + rank_kernel - rank_union;
    Ok(RankData {
        rank_tilde,
        rank_kernel,
        rank_union,
        intersection_dim,
        rank_phi: rank_tilde - intersection_dim,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussImage {
    /// `dP(T)` equals `E_{mu_P(F_{d+1})}`, and (when a jet was supplied) the
    /// jet derivatives of `F_delta` agree with the contraction formula.
    pub xi_consistent: bool,
    /// `F_{d+1}` lies in `I_{d+1}(P)`.
    pub phi_member: bool,
    pub verdict: Option<String>,
}

pub const DEGREE_VERDICT: &str =
    "consistent with deg(X) = d (under the smoothness and uniruledness hypotheses of degree detection)";

pub fn gauss_image_report(t: &FubiniTuple, jet: Option<&GraphJet>) -> Result<GaussImage> {
    let diff = differential_span(t)?;
    let s: Vec<SymForm> = (3..=t.order() + 1).map(|k| t.form(k).clone()).collect();
    let (_, e) = cone_check(&s)?;
    let mut xi_consistent = diff.span.same_span(&e)?;
    if let Some(jet) = jet {
        for b in 0..t.dim() {
            let slots: Vec<SymForm> =
                (2..=t.order()).map(|delta| jet.form_derivative(delta, b)).collect::<Result<_>>()?;
            if diff.layout.encode(&slots) != diff.span.vectors()[b] {
                xi_consistent = false;
            }
        }
    }
    let phi_member = membership_test(&FormTuple::from_fubini(t), t.top_form())?;
    let verdict = phi_member.then(|| DEGREE_VERDICT.to_string());
    Ok(GaussImage { xi_consistent, phi_member, verdict })
}

/// Span of `-(e_a -| (F_4 + xi_3), .., e_a -| (F_{d+1} + xi_d))` in
/// `S^3 + .. + S^d`, with `xi` built from `Q = F_2`.
pub fn shifted_differential_span(t: &FubiniTuple) -> Result<Subspace> {
    let d = t.order();
    let n = t.dim();
    let qinv = dual_quadric(t.form(2))?;
    if d < 3 {
        return Subspace::new(Vec::new(), vec![Vec::new(); n]);
    }
    let layout = GradedLayout::new(n, 3, d);
    let shifted: Vec<SymForm> =
        (3..=d).map(|delta| t.form(delta + 1).add(&xi_with(&qinv, t.form(delta), t.form(3)))).collect();
    let vectors = (0..n)
        .map(|a| {
            let slots: Vec<SymForm> = shifted.iter().map(|f| f.contract_basis(a).neg()).collect();
            layout.encode(&slots)
        })
        .collect();
    layout.subspace(vectors)
}

/// Applies `y -> A y` to a tuple; used for invariance checks.
pub fn substituted(t: &FubiniTuple, a: &[Vec<FieldElement>]) -> Result<FubiniTuple> {
    if a.len() != t.dim() {
        return Err(Error::Shape("substitution matrix has the wrong size".into()));
    }
    t.substitute_linear(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Monomial, MultiPoly};

    fn fe(v: i64) -> FieldElement {
        FieldElement::from_int(v)
    }

    fn sum_of_squares(n: usize) -> SymForm {
        let poly = MultiPoly::from_terms(n, (0..n).map(|i| (Monomial::new({
            let mut e = vec![0; n];
            e[i] = 2;
            e
        }), fe(1))));
        SymForm::new(poly, 2).unwrap()
    }

    #[test]
    fn orthogonal_stabilizer() {
        for n in 2..=4 {
            let p = FormTuple::new(vec![sum_of_squares(n)]).unwrap();
            assert_eq!(gl_orbit_span(&p).unwrap().rank(), n * n - n * (n - 1) / 2);
        }
    }

    #[test]
    fn m_generators_with_zero_cubic() {
        let n = 3;
        let p = FormTuple::new(vec![sum_of_squares(n), SymForm::zero(n, 3)]).unwrap();
        let k = descent_kernel(&p).unwrap();
        assert_eq!(k.m_generators, n);
        let m_only: Vec<_> = k.span.vectors()[k.gl_generators..].to_vec();
        assert_eq!(rank(&m_only).unwrap(), n);
    }

    #[test]
    fn quadric_has_zero_rank() {
        let t = FubiniTuple::from_forms(vec![sum_of_squares(2), SymForm::zero(2, 3)]).unwrap();
        let r = rank_phi(&t).unwrap();
        assert_eq!((r.rank_tilde, r.rank_phi), (0, 0));
        let g = gauss_image_report(&t, None).unwrap();
        assert!(g.xi_consistent && g.phi_member);
    }

    #[test]
    fn layout_round_trip() {
        let layout = GradedLayout::new(2, 2, 3);
        let forms = vec![sum_of_squares(2), SymForm::zero(2, 3)];
        assert_eq!(layout.decode(&layout.encode(&forms)), forms);
        assert_eq!(layout.dim(), 3 + 4);
    }
}
