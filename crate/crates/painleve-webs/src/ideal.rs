//! Parameter ideals of curvature numerators and a reduced Buchberger engine.
//!
//! A curvature numerator lives in ℚ[x1,x2,x3][parameters]; its coefficients
//! with respect to the surface-variable monomials generate an ideal in the
//! parameter ring. The vanishing set of that ideal is the flat locus. Ideals
//! here are tiny, so the engine is plain Buchberger with the coprime
//! leading-term criterion and full interreduction — auditability over speed.

use std::sync::Arc;

use num_traits::One;

use crate::context::VariableContext;
use crate::error::Result;
use crate::gcd::normalize_assoc;
use crate::poly::{MonomialOrder, Polynomial, Rat};
use crate::surface::{Chart, SurfaceSpec};

/// A polynomial in parameter variables only (no surface variable appears).
pub type ParamPolynomial = Polynomial;

#[derive(Clone, Debug)]
pub struct IdealGens {
    ctx: Arc<VariableContext>,
    gens: Vec<ParamPolynomial>,
}

impl IdealGens {
    /// Builds a generating set; zero generators are dropped, duplicates (up
    /// to a rational factor) collapse.
    pub fn new(ctx: &Arc<VariableContext>, gens: Vec<ParamPolynomial>) -> IdealGens {
        let mut out: Vec<Polynomial> = Vec::new();
        for g in gens {
            if g.is_zero() {
                continue;
            }
            assert!(
                ctx.surface_vars().all(|v| !g.involves(v)),
                "ideal generators must involve parameters only"
            );
            let g = normalize_assoc(&g);
            if !out.contains(&g) {
                out.push(g);
            }
        }
        IdealGens { ctx: Arc::clone(ctx), gens: out }
    }

    pub fn ctx(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn generators(&self) -> &[ParamPolynomial] {
        &self.gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }
}

/// How an ideal sits in the parameter ring; flat-locus entries 0, (1), and
/// (…) correspond to these three cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdealKind {
    Zero,
    Unit,
    Proper,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis {
    ctx: Arc<VariableContext>,
    basis: Vec<ParamPolynomial>,
    order: MonomialOrder,
}

impl GroebnerBasis {
    pub fn basis(&self) -> &[ParamPolynomial] {
        &self.basis
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn ctx(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn kind(&self) -> IdealKind {
        if self.basis.is_empty() {
            IdealKind::Zero
        } else if self.basis.len() == 1 && self.basis[0].is_one() {
            IdealKind::Unit
        } else {
            IdealKind::Proper
        }
    }

    pub fn contains(&self, p: &ParamPolynomial) -> bool {
        normal_form(p, self).is_zero()
    }

    /// Rendered generator list, e.g. `{a1, a2, a3, a4-4}` or `0`.
    pub fn describe(&self) -> String {
        match self.kind() {
            IdealKind::Zero => "0".to_string(),
            _ => {
                let parts: Vec<String> =
                    self.basis.iter().map(|g| g.to_string()).collect();
                format!("({})", parts.join(", "))
            }
        }
    }
}

/// Remainder of multivariate division of `p` by the basis (top reduction).
pub fn normal_form(p: &ParamPolynomial, g: &GroebnerBasis) -> ParamPolynomial {
    reduce_vs(p, &g.basis, g.order)
}

fn reduce_vs(p: &ParamPolynomial, basis: &[Polynomial], order: MonomialOrder) -> ParamPolynomial {
    let mut work = p.clone();
    let mut rem = Polynomial::zero(p.ctx());
    'outer: while let Some((wm, wc)) = work.lt_order(order) {
        let (wm, wc) = (wm.clone(), wc.clone());
        for b in basis {
            let (bm, bc) = b.lt_order(order).expect("basis elements are nonzero");
            if let Some(q) = wm.try_div(bm) {
                let scale = &wc / bc;
                work = work.sub(&b.mul_mono(&q).mul_rat(&scale));
                continue 'outer;
            }
        }
        let t = Polynomial::term(p.ctx(), wm.clone(), wc.clone());
        rem = rem.add(&t);
        work = work.sub(&t);
    }
    rem
}

pub(crate) fn s_polynomial(f: &Polynomial, g: &Polynomial, order: MonomialOrder) -> Polynomial {
    let (fm, fc) = f.lt_order(order).unwrap();
    let (gm, gc) = g.lt_order(order).unwrap();
    let l = fm.lcm(gm);
    let uf = l.try_div(fm).unwrap();
    let ug = l.try_div(gm).unwrap();
    f.mul_mono(&uf)
        .mul_rat(&(Rat::one() / fc.clone()))
        .sub(&g.mul_mono(&ug).mul_rat(&(Rat::one() / gc.clone())))
}

/// Reduced Gröbner basis: minimal, interreduced, monic, sorted by decreasing
/// leading monomial. Deterministic for a given order.
pub fn buchberger_reduced_gb(ideal: &IdealGens, order: MonomialOrder) -> GroebnerBasis {
    let ctx = ideal.ctx().clone();

    // Incremental prefilter: insert generators by increasing leading term,
    // keeping only nonzero normal forms against the set so far. Reduction to
    // zero is a membership certificate, so the generated ideal is unchanged;
    // large redundant bucket sets (curvature numerators yield hundreds of
    // coefficient generators) collapse to a handful before any pair forms.
    let mut seed = ideal.gens.clone();
    seed.sort_by(|a, b| {
        let (ma, _) = a.lt_order(order).unwrap();
        let (mb, _) = b.lt_order(order).unwrap();
        ma.cmp_order(mb, order)
    });
    let mut basis: Vec<Polynomial> = Vec::new();
    for g in seed {
        let r = reduce_vs(&g, &basis, order);
        if !r.is_zero() {
            basis.push(r);
        }
    }

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }
    while let Some((i, j)) = pairs.pop() {
        let (mi, _) = basis[i].lt_order(order).unwrap();
        let (mj, _) = basis[j].lt_order(order).unwrap();
        if mi.is_coprime_with(mj) {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j], order);
        let r = reduce_vs(&s, &basis, order);
        if !r.is_zero() {
            let k = basis.len();
            basis.push(r);
            for i in 0..k {
                pairs.push((i, k));
            }
        }
    }

    // Minimal: drop elements whose leading term another leading term divides.
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let (mi, _) = basis[i].lt_order(order).unwrap();
            let (mj, _) = basis[j].lt_order(order).unwrap();
            if mj.divides(mi) {
                keep[i] = false;
                break;
            }
        }
    }
    let minimal: Vec<Polynomial> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(b, k)| k.then_some(b))
        .collect();

    // Interreduce: replace each element by its normal form against the rest.
    let mut reduced: Vec<Polynomial> = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let rest: Vec<Polynomial> = minimal
            .iter()
            .enumerate()
            .filter_map(|(j, b)| (j != i).then(|| b.clone()))
            .collect();
        let r = if rest.is_empty() {
            minimal[i].clone()
        } else {
            normal_form(
                &minimal[i],
                &GroebnerBasis { ctx: ctx.clone(), basis: rest, order },
            )
        };
        debug_assert!(!r.is_zero(), "minimal basis element reduced to zero");
        let (_, c) = r.lt_order(order).unwrap();
        let inv = Rat::one() / c.clone();
        reduced.push(r.mul_rat(&inv));
    }
    reduced.sort_by(|a, b| {
        let (ma, _) = a.lt_order(order).unwrap();
        let (mb, _) = b.lt_order(order).unwrap();
        mb.cmp_order(ma, order)
    });
    let gb = GroebnerBasis { ctx, basis: reduced, order };
    debug_assert!(
        spolys_reduce_to_zero(&gb),
        "reduced basis fails Buchberger's criterion"
    );
    gb
}

pub fn ideal_equal(i: &IdealGens, j: &IdealGens) -> bool {
    buchberger_reduced_gb(i, MonomialOrder::Lex).basis
        == buchberger_reduced_gb(j, MonomialOrder::Lex).basis
}

/// Buchberger's criterion, applied as a post-hoc certificate: every
/// S-polynomial of the basis reduces to zero.
pub fn spolys_reduce_to_zero(g: &GroebnerBasis) -> bool {
    let b = g.basis();
    for i in 0..b.len() {
        for j in (i + 1)..b.len() {
            let s = s_polynomial(&b[i], &b[j], g.order());
            if !normal_form(&s, g).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Coefficients of the numerator over the surface-variable monomials.
pub fn extract_param_ideal(numerator: &Polynomial, spec: &SurfaceSpec) -> IdealGens {
    let ctx = spec.ctx();
    let svars: Vec<_> = ctx.surface_vars().collect();
    let buckets = numerator.collect(&svars);
    IdealGens::new(ctx, buckets.into_values().collect())
}

/// Which curvature a flat locus refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurvatureKind {
    Web,
    Hess(u8, u8),
}

impl std::fmt::Display for CurvatureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CurvatureKind::Web => write!(f, "web"),
            CurvatureKind::Hess(i, j) => write!(f, "hess({i},{j})"),
        }
    }
}

/// The parameter locus where the requested curvature vanishes identically,
/// as a reduced lex Gröbner basis.
pub fn flat_locus(spec: &SurfaceSpec, what: CurvatureKind) -> Result<GroebnerBasis> {
    flat_locus_ordered(spec, what, MonomialOrder::Lex)
}

pub fn flat_locus_ordered(
    spec: &SurfaceSpec,
    what: CurvatureKind,
    order: MonomialOrder,
) -> Result<GroebnerBasis> {
    let num = match what {
        CurvatureKind::Web => crate::web::surface_web_curvature(spec, Chart::web_default())?.0,
        CurvatureKind::Hess(i, j) => crate::hess::surface_hess_curvature(spec, (i, j))?.0,
    };
    let ideal = extract_param_ideal(&num, spec);
    Ok(buchberger_reduced_gb(&ideal, order))
}

/// True when the vanishing set of the basis lies inside `{nu = 0}`, probed
/// through radical membership `nu^k ∈ I` for small `k`.
pub fn locus_inside_hypersurface(g: &GroebnerBasis, nu: &ParamPolynomial, max_pow: u32) -> bool {
    let mut pw = nu.clone();
    for _ in 0..max_pow {
        if g.contains(&pw) {
            return true;
        }
        pw = pw.mul(nu);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expression;

    fn gens(ctx: &Arc<VariableContext>, ss: &[&str]) -> IdealGens {
        IdealGens::new(
            ctx,
            ss.iter().map(|s| parse_expression(s, ctx).unwrap()).collect(),
        )
    }

    fn gb(ctx: &Arc<VariableContext>, ss: &[&str]) -> GroebnerBasis {
        buchberger_reduced_gb(&gens(ctx, ss), MonomialOrder::Lex)
    }

    fn pvi_ctx() -> Arc<VariableContext> {
        VariableContext::standard(&["a1", "a2", "a3", "a4"])
    }

    #[test]
    fn already_reduced_basis_is_fixed() {
        let ctx = pvi_ctx();
        let g = gb(&ctx, &["a1", "a2", "a3", "a4-4"]);
        let want: Vec<Polynomial> = ["a1", "a2", "a3", "a4-4"]
            .iter()
            .map(|s| parse_expression(s, &ctx).unwrap())
            .collect();
        assert_eq!(g.basis(), &want[..]);
        assert_eq!(g.kind(), IdealKind::Proper);
    }

    #[test]
    fn piv_pair_is_its_own_basis() {
        let ctx = VariableContext::standard(&["s1", "s2"]);
        let g = gb(&ctx, &["s1*s2", "s2^2"]);
        let want: Vec<Polynomial> = ["s1*s2", "s2^2"]
            .iter()
            .map(|s| parse_expression(s, &ctx).unwrap())
            .collect();
        assert_eq!(g.basis(), &want[..]);
    }

    #[test]
    fn linear_elimination() {
        let ctx = pvi_ctx();
        let g = gb(&ctx, &["a1+a4-4", "a4-4", "a2", "a3"]);
        let h = gb(&ctx, &["a1", "a2", "a3", "a4-4"]);
        assert_eq!(g.basis(), h.basis());
    }

    #[test]
    fn normal_form_examples() {
        let ctx = pvi_ctx();
        let g = gb(&ctx, &["a1", "a2", "a3", "a4-4"]);
        let p = parse_expression("a1*a2", &ctx).unwrap();
        assert!(normal_form(&p, &g).is_zero());
        let g4 = gb(&ctx, &["a4-4"]);
        let a4 = parse_expression("a4", &ctx).unwrap();
        assert_eq!(normal_form(&a4, &g4), parse_expression("4", &ctx).unwrap());
        let ctx2 = VariableContext::standard(&["s1", "s2"]);
        let gp = gb(&ctx2, &["s1*s2", "s2^2"]);
        let s1 = parse_expression("s1", &ctx2).unwrap();
        assert_eq!(normal_form(&s1, &gp), s1);
    }

    #[test]
    fn normal_form_is_idempotent() {
        let ctx = pvi_ctx();
        let g = gb(&ctx, &["a1*a2-1", "a3^2-a4"]);
        let p = parse_expression("a1^2*a2^2+a3^4+a1", &ctx).unwrap();
        let n1 = normal_form(&p, &g);
        assert_eq!(normal_form(&n1, &g), n1);
    }

    #[test]
    fn ideal_equality_examples() {
        let ctx2 = VariableContext::standard(&["s1", "s2"]);
        // <s2>^2 as a product of generators vs <s2^2>.
        let sq = gens(&ctx2, &["s2*s2"]);
        let pow = gens(&ctx2, &["s2^2"]);
        assert!(ideal_equal(&sq, &pow));
        let ctx = pvi_ctx();
        let unit1 = gens(&ctx, &["1"]);
        let unit2 = gens(&ctx, &["a1", "1-a1"]);
        assert!(ideal_equal(&unit1, &unit2));
        let a3 = gens(&ctx, &["a3"]);
        let a3sq = gens(&ctx, &["a3^2"]);
        assert!(!ideal_equal(&a3, &a3sq));
    }

    #[test]
    fn equality_ignores_generator_presentation() {
        let ctx = pvi_ctx();
        let a = gens(&ctx, &["a1", "a2-a1"]);
        let b = gens(&ctx, &["a2", "a2", "a1+a2"]);
        assert!(ideal_equal(&a, &b));
        assert!(ideal_equal(&a, &a));
        assert!(ideal_equal(&b, &a));
    }

    #[test]
    fn unit_and_zero_kinds() {
        let ctx = pvi_ctx();
        assert_eq!(gb(&ctx, &[]).kind(), IdealKind::Zero);
        assert_eq!(gb(&ctx, &["3"]).kind(), IdealKind::Unit);
        assert_eq!(gb(&ctx, &["a1-1", "a1"]).kind(), IdealKind::Unit);
        assert_eq!(gb(&ctx, &[]).describe(), "0");
        assert_eq!(gb(&ctx, &["3"]).describe(), "(1)");
    }

    #[test]
    fn s_polynomials_of_basis_reduce_to_zero() {
        let ctx = pvi_ctx();
        let g = gb(&ctx, &["a1*a2-a3", "a2^2-1", "a1^2*a4-a2"]);
        let n = g.basis().len();
        for i in 0..n {
            for j in 0..i {
                let s = s_polynomial(&g.basis()[i], &g.basis()[j], g.order());
                assert!(normal_form(&s, &g).is_zero());
            }
        }
    }

    #[test]
    fn extraction_collects_param_coefficients() {
        let ctx = pvi_ctx();
        let num = parse_expression("a3*x1*x2+(a4-4)*x1", &ctx).unwrap();
        let spec = SurfaceSpec::lookup("pvi").unwrap();
        let gens = extract_param_ideal(&num, &spec);
        let mut found: Vec<String> =
            gens.generators().iter().map(|g| g.to_string()).collect();
        found.sort();
        assert_eq!(found, vec!["a3", "a4-4"]);
        let zero = Polynomial::zero(&ctx);
        assert!(extract_param_ideal(&zero, &spec).is_zero_ideal());
    }

    #[test]
    fn pvi_hess_flat_locus() {
        let spec = SurfaceSpec::lookup("pvi").unwrap();
        let g = flat_locus(&spec, CurvatureKind::Hess(1, 2)).unwrap();
        assert_eq!(g.describe(), "(a1, a2, a3, a4-4)");
    }

    #[test]
    fn piv_hess_23_flat_locus() {
        let spec = SurfaceSpec::lookup("piv").unwrap();
        let g = flat_locus(&spec, CurvatureKind::Hess(2, 3)).unwrap();
        assert_eq!(g.describe(), "(s1*s2, s2^2)");
    }

    #[test]
    fn pii_hess_13_flat_locus() {
        let spec = SurfaceSpec::lookup("pii").unwrap();
        let g = flat_locus(&spec, CurvatureKind::Hess(1, 3)).unwrap();
        assert_eq!(g.describe(), "(alpha)");
    }

    #[test]
    fn pi_loci_are_zero_or_unit() {
        let spec = SurfaceSpec::lookup("pi").unwrap();
        assert_eq!(
            flat_locus(&spec, CurvatureKind::Web).unwrap().kind(),
            IdealKind::Zero
        );
        assert_eq!(
            flat_locus(&spec, CurvatureKind::Hess(1, 2)).unwrap().kind(),
            IdealKind::Zero
        );
        assert_eq!(
            flat_locus(&spec, CurvatureKind::Hess(2, 3)).unwrap().kind(),
            IdealKind::Unit
        );
    }

    #[test]
    fn radical_probe() {
        let ctx = VariableContext::standard(&["s1", "s2"]);
        let g = gb(&ctx, &["s1*s2", "s2^2"]);
        let s2 = parse_expression("s2", &ctx).unwrap();
        let s1 = parse_expression("s1", &ctx).unwrap();
        assert!(locus_inside_hypersurface(&g, &s2, 4));
        assert!(!locus_inside_hypersurface(&g, &s1, 4));
    }
}
