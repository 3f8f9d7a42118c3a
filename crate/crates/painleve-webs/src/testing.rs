//! Seeded random generators and the randomized property suites. Everything
//! here is deterministic for a fixed seed, so suite runs are reproducible.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::context::{Var, VariableContext};
use crate::gcd::{normalize_assoc, poly_gcd};
use crate::hess::{hess_connection_matrix, hess_flatness_density};
use crate::poly::{rat_frac, Monomial, Polynomial, Rat};
use crate::ratfun::RationalFunction;
use crate::report::Report;
use crate::surface::{catalog_names, Chart, SurfaceAlgebra, SurfaceAlgebraElement, SurfaceSpec};
use crate::web::{
    blaschke_curvature, curvature_general, curvature_slope_form, ChartFunction, ChartOneForm,
    ThreeWeb,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rat(r: &mut ChaCha8Rng) -> Rat {
    rat_frac(r.gen_range(-9..=9), r.gen_range(1..=4))
}

pub fn random_nonzero_rat(r: &mut ChaCha8Rng) -> Rat {
    rat_frac(
        if r.gen_bool(0.5) { 1 } else { -1 } * r.gen_range(1..=9),
        r.gen_range(1..=4),
    )
}

/// Random polynomial supported on the listed variables only.
pub fn random_poly_in(
    r: &mut ChaCha8Rng,
    ctx: &Arc<VariableContext>,
    vars: &[Var],
    max_terms: usize,
    max_deg: u16,
) -> Polynomial {
    let n_terms = r.gen_range(0..=max_terms);
    let mut p = Polynomial::zero(ctx);
    for _ in 0..n_terms {
        let mut exps = vec![0u16; ctx.n_vars()];
        for &v in vars {
            exps[v] = r.gen_range(0..=max_deg);
        }
        p = p.add(&Polynomial::term(
            ctx,
            Monomial::from_exps(exps),
            random_rat(r),
        ));
    }
    p
}

pub fn random_nonzero_poly_in(
    r: &mut ChaCha8Rng,
    ctx: &Arc<VariableContext>,
    vars: &[Var],
    max_terms: usize,
    max_deg: u16,
) -> Polynomial {
    loop {
        let p = random_poly_in(r, ctx, vars, max_terms.max(1), max_deg);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn random_ratfun_in(
    r: &mut ChaCha8Rng,
    ctx: &Arc<VariableContext>,
    vars: &[Var],
    max_terms: usize,
    max_deg: u16,
) -> RationalFunction {
    let num = random_poly_in(r, ctx, vars, max_terms, max_deg);
    let den = random_nonzero_poly_in(r, ctx, vars, max_terms, max_deg);
    RationalFunction::new(num, den).expect("denominator is nonzero by construction")
}

pub fn random_nonzero_ratfun_in(
    r: &mut ChaCha8Rng,
    ctx: &Arc<VariableContext>,
    vars: &[Var],
    max_terms: usize,
    max_deg: u16,
) -> RationalFunction {
    let num = random_nonzero_poly_in(r, ctx, vars, max_terms, max_deg);
    let den = random_nonzero_poly_in(r, ctx, vars, max_terms, max_deg);
    RationalFunction::new(num, den).expect("denominator is nonzero by construction")
}

/// Random residue class with fraction coefficients in the chart field.
pub fn random_element(r: &mut ChaCha8Rng, alg: &Arc<SurfaceAlgebra>) -> SurfaceAlgebraElement {
    let chart = alg.chart();
    let ctx = alg.ctx();
    let mut field_vars: Vec<Var> = chart.kept.to_vec();
    field_vars.extend(ctx.param_vars());
    let coeffs = (0..alg.deg())
        .map(|_| random_ratfun_in(r, ctx, &field_vars, 2, 1))
        .collect();
    alg.from_coeffs(coeffs)
}

fn plane_ctx() -> Arc<VariableContext> {
    VariableContext::with_surface_vars(["x", "y", "z"], &[])
}

/// Ring axioms, Leibniz rules (polynomial and fraction), and GCD invariants
/// on random inputs.
pub fn algebra_property_suite(cases: usize, seed: u64) -> Report {
    let mut r = rng(seed);
    let ctx = VariableContext::with_surface_vars(["x", "y", "z"], &["c"]);
    let vars: Vec<Var> = (0..ctx.n_vars()).collect();
    let mut report = Report::new(format!("algebra-properties cases={cases} seed={seed}"));
    let (mut ring_fails, mut leibniz_fails, mut gcd_fails) = (0usize, 0usize, 0usize);
    for _ in 0..cases {
        let p = random_poly_in(&mut r, &ctx, &vars, 3, 2);
        let q = random_poly_in(&mut r, &ctx, &vars, 3, 2);
        let s = random_poly_in(&mut r, &ctx, &vars, 3, 2);

        if p.add(&q) != q.add(&p)
            || p.mul(&q) != q.mul(&p)
            || p.mul(&q.add(&s)) != p.mul(&q).add(&p.mul(&s))
            || p.mul(&q).mul(&s) != p.mul(&q.mul(&s))
            || !p.sub(&p).is_zero()
            || p.add(&Polynomial::zero(&ctx)) != p
            || p.mul(&Polynomial::one(&ctx)) != p
        {
            ring_fails += 1;
        }

        let v = r.gen_range(0..ctx.n_vars());
        if p.mul(&q).derivative(v) != p.derivative(v).mul(&q).add(&p.mul(&q.derivative(v))) {
            leibniz_fails += 1;
        }
        let f = random_ratfun_in(&mut r, &ctx, &vars, 2, 1);
        let g = random_ratfun_in(&mut r, &ctx, &vars, 2, 1);
        if f.mul(&g).derivative(v) != f.derivative(v).mul(&g).add(&f.mul(&g.derivative(v))) {
            leibniz_fails += 1;
        }

        let d = poly_gcd(&p, &q);
        if !d.is_zero() && (p.try_exact_div(&d).is_none() || q.try_exact_div(&d).is_none()) {
            gcd_fails += 1;
        }
        let h = random_nonzero_poly_in(&mut r, &ctx, &vars, 2, 1);
        if poly_gcd(&p.mul(&h), &q.mul(&h)) != normalize_assoc(&d.mul(&h)) {
            gcd_fails += 1;
        }
    }
    report.check(
        "ring axioms",
        ring_fails == 0,
        "0 failures",
        format!("{ring_fails} failures in {cases} cases"),
    );
    report.check(
        "Leibniz rule (polynomials and fractions)",
        leibniz_fails == 0,
        "0 failures",
        format!("{leibniz_fails} failures in {cases} cases"),
    );
    report.check(
        "gcd divides both arguments and scales multiplicatively",
        gcd_fails == 0,
        "0 failures",
        format!("{gcd_fails} failures in {cases} cases"),
    );
    report
}

/// The two chart derivations commute on random residue classes, across every
/// catalog surface.
pub fn commutation_property_suite(cases: usize, seed: u64) -> Report {
    let mut r = rng(seed);
    let mut report = Report::new(format!("chart-commutation cases={cases} seed={seed}"));
    let algebras: Vec<Arc<SurfaceAlgebra>> = catalog_names()
        .iter()
        .map(|n| {
            let spec = SurfaceSpec::lookup(n).unwrap();
            SurfaceAlgebra::new(spec, Chart::web_default()).unwrap()
        })
        .collect();
    let mut fails = 0usize;
    for k in 0..cases {
        let alg = &algebras[k % algebras.len()];
        let e = random_element(&mut r, alg);
        if e.derive(0).derive(1) != e.derive(1).derive(0) {
            fails += 1;
        }
    }
    report.check(
        "derivations commute on surface elements",
        fails == 0,
        "0 failures",
        format!("{fails} failures in {cases} cases"),
    );
    report
}

/// General-path curvature agrees with the slope-form formula, and curvature
/// is invariant under a common rescaling of the three forms.
pub fn web_property_suite(cases: usize, seed: u64) -> Report {
    let mut r = rng(seed);
    let ctx = plane_ctx();
    let axes: [Var; 2] = [0, 1];
    let mut report = Report::new(format!("web-properties cases={cases} seed={seed}"));
    let (mut path_fails, mut rescale_fails) = (0usize, 0usize);
    for _ in 0..cases {
        let a = ChartFunction::Plane(random_nonzero_ratfun_in(&mut r, &ctx, &axes, 2, 2));
        let b = ChartFunction::Plane(random_nonzero_ratfun_in(&mut r, &ctx, &axes, 2, 2));
        let one = a.one_like();
        let zero = a.zero_like();
        let web = ThreeWeb::new([
            ChartOneForm::new(one.clone(), zero.clone()),
            ChartOneForm::new(zero, one),
            ChartOneForm::new(a.clone(), b.clone()),
        ]);
        let general = curvature_general(&web).unwrap();
        let slope = curvature_slope_form(&a, &b).unwrap();
        if general != slope {
            path_fails += 1;
        }

        let g = ChartFunction::Plane(random_nonzero_ratfun_in(&mut r, &ctx, &axes, 2, 1));
        let scaled = ThreeWeb::new([
            web.forms[0].scale(&g),
            web.forms[1].scale(&g),
            web.forms[2].scale(&g),
        ]);
        if blaschke_curvature(&scaled).unwrap() != blaschke_curvature(&web).unwrap() {
            rescale_fails += 1;
        }
    }
    report.check(
        "general path agrees with slope formula",
        path_fails == 0,
        "0 failures",
        format!("{path_fails} failures in {cases} cases"),
    );
    report.check(
        "curvature invariant under common rescaling",
        rescale_fails == 0,
        "0 failures",
        format!("{rescale_fails} failures in {cases} cases"),
    );
    report
}

/// The connection parallelizes its density, and the curvature scalar equals
/// the cross-derivative of either connection entry (the 2-D cross-check).
pub fn density_property_suite(cases: usize, seed: u64) -> Report {
    let mut r = rng(seed);
    let ctx = plane_ctx();
    let axes: [Var; 2] = [0, 1];
    let mut report = Report::new(format!("density-properties cases={cases} seed={seed}"));
    let (mut parallel_fails, mut cross_fails) = (0usize, 0usize);
    for _ in 0..cases {
        let f = ChartFunction::Plane(random_nonzero_ratfun_in(&mut r, &ctx, &axes, 2, 2));
        let m = hess_connection_matrix(&f).unwrap();
        if m.xx.mul(&f) != f.derive(0) || m.yy.mul(&f) != f.derive(1) {
            parallel_fails += 1;
        }
        let k = hess_flatness_density(&f).unwrap();
        if k != m.xx.derive(1) || k != m.yy.derive(0) {
            cross_fails += 1;
        }
    }
    report.check(
        "connection parallelizes the density",
        parallel_fails == 0,
        "0 failures",
        format!("{parallel_fails} failures in {cases} cases"),
    );
    report.check(
        "curvature equals cross-derivative of the connection",
        cross_fails == 0,
        "0 failures",
        format!("{cross_fails} failures in {cases} cases"),
    );
    report
}
