//! Automorphisms of the PVI surface: the three coordinate involutions, their
//! compositions, the affine form of the fibred map `phi = sigma1 then sigma2`
//! on `{x3 = t}`, symplectic pullback signs, and periodicity on the
//! rational-angle fibres `t = 2cos(pi p/q)`.

use std::fmt;
use std::sync::Arc;
use std::time::Instant;


use crate::context::{same_context, VariableContext, N_SURFACE_VARS};
use crate::error::{EngineError, Result};
use crate::parse::parse_expression;
use crate::poly::{Polynomial, Rat};
use crate::ratfun::RationalFunction;
use crate::report::Report;
use crate::surface::{Chart, SurfaceAlgebra, SurfaceSpec};

/// A polynomial self-map of the ambient coordinates, recorded as the images of
/// `(x1, x2, x3)`. Parameters are never moved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap {
    ctx: Arc<VariableContext>,
    images: [Polynomial; 3],
}

impl PolyMap {
    pub fn new(ctx: &Arc<VariableContext>, images: [Polynomial; 3]) -> PolyMap {
        for img in &images {
            assert!(
                same_context(img.ctx(), ctx),
                "map image built over a foreign context"
            );
        }
        PolyMap {
            ctx: Arc::clone(ctx),
            images,
        }
    }

    pub fn identity(ctx: &Arc<VariableContext>) -> PolyMap {
        let images = [
            Polynomial::var(ctx, 0),
            Polynomial::var(ctx, 1),
            Polynomial::var(ctx, 2),
        ];
        PolyMap::new(ctx, images)
    }

    pub fn ctx(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn images(&self) -> &[Polynomial; 3] {
        &self.images
    }

    /// Substitutes the images for the surface coordinates of `p`; parameters
    /// stay fixed.
    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        assert!(
            same_context(p.ctx(), &self.ctx),
            "map applied across contexts"
        );
        let imgs: Vec<Polynomial> = (0..self.ctx.n_vars())
            .map(|v| {
                if v < N_SURFACE_VARS {
                    self.images[v].clone()
                } else {
                    Polynomial::var(&self.ctx, v)
                }
            })
            .collect();
        p.subst_all(&imgs)
    }

    pub fn is_identity(&self) -> bool {
        (0..N_SURFACE_VARS).all(|v| self.images[v] == Polynomial::var(&self.ctx, v))
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(x1, x2, x3) -> ({}, {}, {})",
            self.images[0], self.images[1], self.images[2]
        )
    }
}

/// The involution `sigma_i` of the PVI surface: it flips the two roots of the
/// defining cubic read as a quadratic in `x_i` and fixes the other two
/// coordinates.
pub fn involution_map(i: u8, surface: &SurfaceSpec) -> Result<PolyMap> {
    if surface.name != "pvi" {
        return Err(EngineError::Unsupported(format!(
            "involutions are defined for the pvi surface only, not `{}`",
            surface.name
        )));
    }
    let exprs: [&str; 3] = match i {
        1 => ["a1-x1-x2*x3", "x2", "x3"],
        2 => ["x1", "a2-x2-x1*x3", "x3"],
        3 => ["x1", "x2", "a3-x3-x1*x2"],
        _ => {
            return Err(EngineError::Unsupported(format!(
                "involution index must be 1, 2 or 3, got {i}"
            )))
        }
    };
    let ctx = surface.ctx();
    let images = [
        parse_expression(exprs[0], ctx)?,
        parse_expression(exprs[1], ctx)?,
        parse_expression(exprs[2], ctx)?,
    ];
    Ok(PolyMap::new(ctx, images))
}

/// The map "apply `f` first, then `g`": the images of `g` evaluated at the
/// images of `f`.
pub fn compose_maps(f: &PolyMap, g: &PolyMap) -> Result<PolyMap> {
    if !same_context(&f.ctx, &g.ctx) {
        return Err(EngineError::Unsupported(
            "composed maps live over different variable contexts".into(),
        ));
    }
    let images = [
        f.apply(&g.images[0]),
        f.apply(&g.images[1]),
        f.apply(&g.images[2]),
    ];
    Ok(PolyMap::new(&f.ctx, images))
}

/// An affine self-map `v -> M v + b` of the plane, entries rational functions
/// in the fibre value and the parameters. The matrix part always has
/// determinant 1.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinePlaneMap {
    matrix: [[RationalFunction; 2]; 2],
    translation: [RationalFunction; 2],
}

impl AffinePlaneMap {
    pub fn new(
        matrix: [[RationalFunction; 2]; 2],
        translation: [RationalFunction; 2],
    ) -> AffinePlaneMap {
        let m = AffinePlaneMap {
            matrix,
            translation,
        };
        assert!(m.det().is_one(), "matrix part must have determinant 1");
        m
    }

    pub fn identity(ctx: &Arc<VariableContext>) -> AffinePlaneMap {
        let one = RationalFunction::one(ctx);
        let zero = RationalFunction::zero(ctx);
        AffinePlaneMap::new(
            [[one.clone(), zero.clone()], [zero.clone(), one]],
            [zero.clone(), zero],
        )
    }

    pub fn matrix(&self) -> &[[RationalFunction; 2]; 2] {
        &self.matrix
    }

    pub fn translation(&self) -> &[RationalFunction; 2] {
        &self.translation
    }

    pub fn det(&self) -> RationalFunction {
        self.matrix[0][0]
            .mul(&self.matrix[1][1])
            .sub(&self.matrix[0][1].mul(&self.matrix[1][0]))
    }

    pub fn trace(&self) -> RationalFunction {
        self.matrix[0][0].add(&self.matrix[1][1])
    }

    /// Apply `self` first, then `o`.
    pub fn then(&self, o: &AffinePlaneMap) -> AffinePlaneMap {
        let mut matrix = std::array::from_fn(|_| {
            std::array::from_fn(|_| RationalFunction::zero(self.matrix[0][0].ctx()))
        });
        for r in 0..2 {
            for c in 0..2 {
                matrix[r][c] = o.matrix[r][0]
                    .mul(&self.matrix[0][c])
                    .add(&o.matrix[r][1].mul(&self.matrix[1][c]));
            }
        }
        let translation = std::array::from_fn(|r: usize| {
            o.matrix[r][0]
                .mul(&self.translation[0])
                .add(&o.matrix[r][1].mul(&self.translation[1]))
                .add(&o.translation[r])
        });
        AffinePlaneMap::new(matrix, translation)
    }

    pub fn pow(&self, n: u32) -> AffinePlaneMap {
        let mut acc = AffinePlaneMap::identity(self.matrix[0][0].ctx());
        for _ in 0..n {
            acc = acc.then(self);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.matrix[0][0].is_one()
            && self.matrix[0][1].is_zero()
            && self.matrix[1][0].is_zero()
            && self.matrix[1][1].is_one()
            && self.translation[0].is_zero()
            && self.translation[1].is_zero()
    }
}

impl fmt::Display for AffinePlaneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]] + ({}, {})",
            self.matrix[0][0],
            self.matrix[0][1],
            self.matrix[1][0],
            self.matrix[1][1],
            self.translation[0],
            self.translation[1]
        )
    }
}

/// Splits a polynomial that is affine in `(x1, x2)` into its row of matrix
/// coefficients and its constant part.
fn affine_parts(img: &Polynomial, x1: usize, x2: usize) -> ([RationalFunction; 2], RationalFunction) {
    let ctx = img.ctx();
    let mut row = [
        RationalFunction::zero(ctx),
        RationalFunction::zero(ctx),
    ];
    let mut constant = RationalFunction::zero(ctx);
    for (mono, coeff) in img.collect(&[x1, x2]) {
        let f = RationalFunction::from_poly(coeff);
        if mono.is_one() {
            constant = f;
        } else if mono.exps()[x1] == 1 && mono.total_degree() == 1 {
            row[0] = f;
        } else if mono.exps()[x2] == 1 && mono.total_degree() == 1 {
            row[1] = f;
        } else {
            panic!("composition is not affine in the fibre coordinates");
        }
    }
    (row, constant)
}

/// The affine form of `phi = sigma1 then sigma2` on the fibre `{x3 = t}`:
/// matrix `(-1, -t; t, t^2-1)`, translation `(a1, a2 - a1 t)`. `None` keeps
/// `t` symbolic (the variable `x3`). The displayed form is asserted against
/// the symbolic composition before being returned.
pub fn phi_affine_form(t: Option<&Rat>) -> AffinePlaneMap {
    let spec = SurfaceSpec::lookup("pvi").expect("pvi is in the catalog");
    let ctx = Arc::clone(spec.ctx());
    let s1 = involution_map(1, &spec).unwrap();
    let s2 = involution_map(2, &spec).unwrap();
    let phi = compose_maps(&s1, &s2).unwrap();

    let x1 = ctx.var("x1").unwrap();
    let x2 = ctx.var("x2").unwrap();
    let x3 = ctx.var("x3").unwrap();
    let restrict = |p: &Polynomial| match t {
        Some(tv) => p.subst_rats(&[(x3, tv.clone())]),
        None => p.clone(),
    };
    let (row1, b1) = affine_parts(&restrict(&phi.images()[0]), x1, x2);
    let (row2, b2) = affine_parts(&restrict(&phi.images()[1]), x1, x2);
    let derived = AffinePlaneMap::new([row1, row2], [b1, b2]);

    let tp = match t {
        Some(tv) => Polynomial::constant(&ctx, tv.clone()),
        None => Polynomial::var(&ctx, x3),
    };
    let a1 = Polynomial::named_var(&ctx, "a1");
    let a2 = Polynomial::named_var(&ctx, "a2");
    let rf = RationalFunction::from_poly;
    let displayed = AffinePlaneMap::new(
        [
            [rf(Polynomial::int(&ctx, -1)), rf(tp.neg())],
            [rf(tp.clone()), rf(tp.mul(&tp).sub(&Polynomial::one(&ctx)))],
        ],
        [rf(a1.clone()), rf(a2.sub(&a1.mul(&tp)))],
    );
    assert_eq!(
        derived, displayed,
        "fibred composition disagrees with the displayed affine form"
    );
    displayed
}

/// Sign `c` with `(pullback under `map` of the volume form of the (i,j)
/// chart) = c * (volume form)`, computed in the surface algebra; `None` when
/// the pullback is not a constant multiple.
fn volume_pullback_sign(map: &PolyMap, i: u8, j: u8, spec: &SurfaceSpec) -> Result<Option<i8>> {
    let chart = Chart::for_pair(i, j)?;
    let alg = SurfaceAlgebra::new(spec.clone(), chart)?;
    let pk = spec.defining_poly.derivative(chart.elim);
    let lhs_den = alg.reduce(&pk);
    let rhs_den = alg.reduce(&map.apply(&pk));
    let f = alg.reduce(&map.images()[chart.kept[0]]);
    let g = alg.reduce(&map.images()[chart.kept[1]]);
    let jac = f
        .derive(0)
        .mul(&g.derive(1))
        .sub(&f.derive(1).mul(&g.derive(0)));
    let lhs = jac.mul(&lhs_den);
    Ok(if lhs == rhs_den {
        Some(1)
    } else if lhs == rhs_den.neg() {
        Some(-1)
    } else {
        None
    })
}

fn sign_label(s: Option<i8>) -> String {
    match s {
        Some(1) => "+1".into(),
        Some(-1) => "-1".into(),
        _ => "not a constant multiple".into(),
    }
}

/// Checks, symbolically with free parameters: each `sigma_i` squares to the
/// identity and preserves `P` exactly; each reverses the volume form; and
/// `sigma1 then sigma2` preserves it.
pub fn verify_surface_symmetries(surface: &SurfaceSpec) -> Result<Report> {
    let started = Instant::now();
    let mut report = Report::new("verify-surface-symmetries");
    // Chart whose two retained coordinates are fixed by sigma_i.
    let fixed_pair: [(u8, u8); 3] = [(2, 3), (3, 1), (1, 2)];
    let mut sigmas = Vec::new();
    for i in 1..=3u8 {
        sigmas.push(involution_map(i, surface)?);
    }
    for (idx, s) in sigmas.iter().enumerate() {
        let i = idx + 1;
        let ss = compose_maps(s, s)?;
        report.check(
            format!("sigma{i} o sigma{i} = id"),
            ss.is_identity(),
            "identity map",
            format!("{ss}"),
        );
    }
    for (idx, s) in sigmas.iter().enumerate() {
        let i = idx + 1;
        let diff = s.apply(&surface.defining_poly).sub(&surface.defining_poly);
        report.check(
            format!("P o sigma{i} = P"),
            diff.is_zero(),
            "0",
            format!("{diff}"),
        );
    }
    for (idx, s) in sigmas.iter().enumerate() {
        let i = idx + 1;
        let (ci, cj) = fixed_pair[idx];
        let sign = volume_pullback_sign(s, ci, cj, surface)?;
        report.check(
            format!("sigma{i}* Omega = -Omega"),
            sign == Some(-1),
            "-1",
            sign_label(sign),
        );
    }
    let phi = compose_maps(&sigmas[0], &sigmas[1])?;
    let sign = volume_pullback_sign(&phi, 1, 2, surface)?;
    report.check(
        "(sigma1 then sigma2)* Omega = Omega",
        sign == Some(1),
        "+1",
        sign_label(sign),
    );
    report.set_elapsed_ms(started.elapsed().as_millis());
    Ok(report)
}

/// The rational-angle fibre values: `t = 2cos(pi p/q)` is rational exactly for
/// these five `(t, p, q)`.
const RATIONAL_ANGLES: [(i64, u32, u32); 5] = [(0, 1, 2), (1, 1, 3), (-1, 2, 3), (2, 0, 1), (-2, 1, 1)];

/// Iterates the affine map on `{x3 = t}` with free `a1, a2` and reports the
/// minimal `n <= 2q` with `phi_t^n = id`. For the elliptic values
/// `t = 0, ±1` the order must divide `2q`; `t = ±2` is parabolic and never
/// periodic.
pub fn periodicity_check(t: &Rat, p: u32, q: u32) -> Result<Report> {
    let started = Instant::now();
    let t_int = if t.is_integer() {
        Some(t.to_integer())
    } else {
        None
    };
    let row = RATIONAL_ANGLES
        .iter()
        .find(|(tv, _, _)| t_int.as_ref().map(|ti| ti == &(*tv).into()).unwrap_or(false));
    let Some(&(tv, ep, eq)) = row else {
        return Err(EngineError::Unsupported(format!(
            "t = {t} is not a rational-angle value (need t = 2cos(pi p/q) rational, i.e. t in {{0, ±1, ±2}})"
        )));
    };
    if (p, q) != (ep, eq) {
        return Err(EngineError::Unsupported(format!(
            "t = {t} corresponds to p/q = {ep}/{eq}, not {p}/{q}"
        )));
    }
    let mut report = Report::new(format!("periodicity t={t} p/q={p}/{q}"));
    let phi = phi_affine_form(Some(t));
    let two_q = 2 * q;
    let mut minimal = None;
    let mut acc = AffinePlaneMap::identity(phi.matrix()[0][0].ctx());
    for n in 1..=two_q {
        acc = acc.then(&phi);
        if acc.is_identity() {
            minimal = Some(n);
            break;
        }
    }
    if tv.abs() == 2 {
        report.info(
            format!("minimal period <= {two_q}"),
            match minimal {
                Some(n) => format!("phi^{n} = id (unexpected for a parabolic matrix)"),
                None => format!("none <= {two_q} (parabolic — not periodic)"),
            },
        );
    } else {
        report.check(
            format!("minimal n with phi^n = id"),
            minimal.map(|n| two_q % n == 0).unwrap_or(false),
            format!("a divisor of {two_q}"),
            match minimal {
                Some(n) => n.to_string(),
                None => format!("none <= {two_q}"),
            },
        );
        report.check(
            format!("phi^{two_q} = id"),
            phi.pow(two_q).is_identity(),
            "identity",
            if phi.pow(two_q).is_identity() {
                "identity".to_string()
            } else {
                format!("{}", phi.pow(two_q))
            },
        );
    }
    report.set_elapsed_ms(started.elapsed().as_millis());
    Ok(report)
}

/// Confirms `phi_t^n != id` for every `1 <= n <= max_n`; used for hyperbolic
/// fibre values such as `t = 3` where no rational angle exists.
pub fn non_periodicity_probe(t: &Rat, max_n: u32) -> Report {
    let started = Instant::now();
    let mut report = Report::new(format!("non-periodicity t={t} n<={max_n}"));
    let phi = phi_affine_form(Some(t));
    report.info("trace", format!("{}", phi.trace()));
    let mut acc = AffinePlaneMap::identity(phi.matrix()[0][0].ctx());
    let mut hit = None;
    for n in 1..=max_n {
        acc = acc.then(&phi);
        if acc.is_identity() {
            hit = Some(n);
            break;
        }
    }
    report.check(
        format!("phi^n != id for 1 <= n <= {max_n}"),
        hit.is_none(),
        "no identity power",
        match hit {
            Some(n) => format!("phi^{n} = id"),
            None => "none found".to_string(),
        },
    );
    report.set_elapsed_ms(started.elapsed().as_millis());
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat_int;

    fn pvi() -> SurfaceSpec {
        SurfaceSpec::lookup("pvi").unwrap()
    }

    #[test]
    fn involution_images_match_displayed_forms() {
        let s = pvi();
        let ctx = s.ctx();
        let expect = [
            ["a1-x1-x2*x3", "x2", "x3"],
            ["x1", "a2-x2-x1*x3", "x3"],
            ["x1", "x2", "a3-x3-x1*x2"],
        ];
        for i in 1..=3u8 {
            let m = involution_map(i, &s).unwrap();
            for k in 0..3 {
                assert_eq!(
                    m.images()[k],
                    parse_expression(expect[(i - 1) as usize][k], ctx).unwrap()
                );
            }
        }
    }

    #[test]
    fn involutions_square_to_identity() {
        let s = pvi();
        for i in 1..=3u8 {
            let m = involution_map(i, &s).unwrap();
            let mm = compose_maps(&m, &m).unwrap();
            assert!(mm.is_identity(), "sigma{i}^2 != id");
        }
    }

    #[test]
    fn involutions_pairwise_distinct() {
        let s = pvi();
        let m1 = involution_map(1, &s).unwrap();
        let m2 = involution_map(2, &s).unwrap();
        let m3 = involution_map(3, &s).unwrap();
        assert_ne!(m1, m2);
        assert_ne!(m2, m3);
        assert_ne!(m1, m3);
    }

    #[test]
    fn identity_is_neutral_for_composition() {
        let s = pvi();
        let id = PolyMap::identity(s.ctx());
        let m2 = involution_map(2, &s).unwrap();
        assert_eq!(compose_maps(&id, &m2).unwrap(), m2);
        assert_eq!(compose_maps(&m2, &id).unwrap(), m2);
    }

    #[test]
    fn involutions_preserve_defining_polynomial() {
        let s = pvi();
        for i in 1..=3u8 {
            let m = involution_map(i, &s).unwrap();
            assert_eq!(m.apply(&s.defining_poly), s.defining_poly);
        }
    }

    #[test]
    fn involutions_require_pvi() {
        let s = SurfaceSpec::lookup("pv").unwrap();
        assert!(matches!(
            involution_map(1, &s),
            Err(EngineError::Unsupported(_))
        ));
        assert!(matches!(
            involution_map(4, &pvi()),
            Err(EngineError::Unsupported(_))
        ));
    }

    #[test]
    fn composition_rejects_foreign_contexts() {
        let s = pvi();
        let other = SurfaceSpec::lookup("pi").unwrap();
        let id1 = PolyMap::identity(s.ctx());
        let id2 = PolyMap::identity(other.ctx());
        assert!(compose_maps(&id1, &id2).is_err());
    }

    #[test]
    fn symbolic_affine_form_matches_displayed_matrix() {
        let s = pvi();
        let ctx = s.ctx();
        let phi = phi_affine_form(None);
        let e = |t: &str| RationalFunction::from_poly(parse_expression(t, ctx).unwrap());
        assert_eq!(phi.matrix()[0][0], e("-1"));
        assert_eq!(phi.matrix()[0][1], e("-x3"));
        assert_eq!(phi.matrix()[1][0], e("x3"));
        assert_eq!(phi.matrix()[1][1], e("x3^2-1"));
        assert_eq!(phi.translation()[0], e("a1"));
        assert_eq!(phi.translation()[1], e("a2-a1*x3"));
        assert_eq!(phi.trace(), e("x3^2-2"));
        assert!(phi.det().is_one());
    }

    #[test]
    fn affine_form_at_t_zero() {
        let s = pvi();
        let ctx = s.ctx();
        let phi = phi_affine_form(Some(&rat_int(0)));
        let e = |t: &str| RationalFunction::from_poly(parse_expression(t, ctx).unwrap());
        assert_eq!(phi.matrix()[0][0], e("-1"));
        assert_eq!(phi.matrix()[0][1], e("0"));
        assert_eq!(phi.matrix()[1][1], e("-1"));
        assert_eq!(phi.translation()[0], e("a1"));
        assert_eq!(phi.translation()[1], e("a2"));
    }

    #[test]
    fn surface_symmetry_report_all_pass() {
        let report = verify_surface_symmetries(&pvi()).unwrap();
        assert!(report.all_pass(), "{}", report.render_text());
        assert_eq!(report.entries.len(), 10);
    }

    #[test]
    fn involutions_reverse_volume_form() {
        let s = pvi();
        let pairs = [(2u8, 3u8), (3, 1), (1, 2)];
        for i in 1..=3u8 {
            let m = involution_map(i, &s).unwrap();
            let (ci, cj) = pairs[(i - 1) as usize];
            assert_eq!(volume_pullback_sign(&m, ci, cj, &s).unwrap(), Some(-1));
        }
    }

    #[test]
    fn composed_involutions_preserve_volume_form() {
        let s = pvi();
        let m1 = involution_map(1, &s).unwrap();
        let m2 = involution_map(2, &s).unwrap();
        let phi = compose_maps(&m1, &m2).unwrap();
        assert_eq!(volume_pullback_sign(&phi, 1, 2, &s).unwrap(), Some(1));
    }

    #[test]
    fn periodicity_at_elliptic_values() {
        let r0 = periodicity_check(&rat_int(0), 1, 2).unwrap();
        assert!(r0.all_pass(), "{}", r0.render_text());
        assert!(r0.entries.iter().any(|e| e.actual.as_deref() == Some("2")));

        let r1 = periodicity_check(&rat_int(1), 1, 3).unwrap();
        assert!(r1.all_pass(), "{}", r1.render_text());
        assert!(r1.entries.iter().any(|e| e.actual.as_deref() == Some("3")));

        let rm1 = periodicity_check(&rat_int(-1), 2, 3).unwrap();
        assert!(rm1.all_pass(), "{}", rm1.render_text());
        assert!(rm1.entries.iter().any(|e| e.actual.as_deref() == Some("3")));
    }

    #[test]
    fn parabolic_values_are_flagged_not_periodic() {
        let r = periodicity_check(&rat_int(2), 0, 1).unwrap();
        assert!(r.all_pass());
        assert!(r
            .render_text()
            .contains("parabolic — not periodic"));
        let r = periodicity_check(&rat_int(-2), 1, 1).unwrap();
        assert!(r.render_text().contains("parabolic"));
    }

    #[test]
    fn periodicity_rejects_unsupported_values() {
        assert!(periodicity_check(&rat_int(3), 1, 5).is_err());
        assert!(periodicity_check(&crate::poly::rat_frac(1, 2), 1, 2).is_err());
        // Mismatched p/q for a supported t.
        assert!(periodicity_check(&rat_int(0), 1, 3).is_err());
    }

    #[test]
    fn hyperbolic_t3_has_no_small_period() {
        let r = non_periodicity_probe(&rat_int(3), 24);
        assert!(r.all_pass(), "{}", r.render_text());
        assert!(r.entries.iter().any(|e| e.actual.as_deref() == Some("7")));
    }
}
