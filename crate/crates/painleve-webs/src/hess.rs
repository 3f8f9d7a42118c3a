//! Hess connections of bi-Lagrangian 2-charts.
//!
//! A symplectic density `f` on a chart `(x, y)` — meaning `Ω = f dx∧dy` with
//! the two coordinate foliations as the Lagrangian pair — determines a unique
//! torsion-free connection parallelizing the pair. In a chart it is diagonal:
//! `∇_∂x ∂x = (f_x/f) ∂x`, `∇_∂y ∂y = (f_y/f) ∂y`, mixed derivatives zero.
//! Its curvature reduces to the single scalar `(f_xy f − f_x f_y)/f²`.
//!
//! On a catalog surface the pair `(x_i, x_j)` carries `f = 1/P_{x_k}` for the
//! omitted coordinate `x_k`; the shape of the cleared curvature fraction is
//! `C / P_{x_k}^6` with `C` polynomial.

use num_traits::One;

use crate::error::{EngineError, Result};
use crate::gcd::{normalize_assoc, poly_gcd};
use crate::poly::Polynomial;
use crate::surface::{Chart, SurfaceAlgebra, SurfaceAlgebraElement, SurfaceSpec};
use crate::web::ChartFunction;
use std::sync::Arc;

/// A surface chart together with its symplectic density `f = ±1/P_{x_k}`.
pub struct BiLagrangianChart {
    pair: (u8, u8),
    algebra: Arc<SurfaceAlgebra>,
    density: SurfaceAlgebraElement,
}

impl BiLagrangianChart {
    /// Chart for an ordered coordinate pair from `{1,2,3}`. The cyclic pairs
    /// `(1,2), (2,3), (3,1)` carry `f = +1/P_{x_k}`; `(1,3)` is carried by
    /// its cyclic representative `(3,1)`; the two remaining orders flip the
    /// sign of the density.
    pub fn new(spec: SurfaceSpec, pair: (u8, u8)) -> Result<BiLagrangianChart> {
        let chart = Chart::for_pair(pair.0, pair.1)?;
        let algebra = SurfaceAlgebra::new(spec, chart)?;
        let pk = algebra.spec().defining_poly.derivative(chart.elim);
        let mut density = algebra.reduce(&pk).invert()?;
        if matches!(pair, (2, 1) | (3, 2)) {
            density = density.neg();
        }
        Ok(BiLagrangianChart { pair, algebra, density })
    }

    pub fn pair(&self) -> (u8, u8) {
        self.pair
    }

    pub fn algebra(&self) -> &Arc<SurfaceAlgebra> {
        &self.algebra
    }

    pub fn density(&self) -> ChartFunction {
        ChartFunction::Algebra(self.density.clone())
    }
}

/// The diagonal of the Hess connection form: `diag(xx·dx, yy·dy)`. The
/// off-diagonal entries vanish identically and are not stored.
#[derive(Clone, PartialEq, Debug)]
pub struct HessConnectionMatrix {
    pub xx: ChartFunction,
    pub yy: ChartFunction,
}

/// `(f_x/f, f_y/f)` for a nonzero density.
pub fn hess_connection_matrix(f: &ChartFunction) -> Result<HessConnectionMatrix> {
    if f.is_zero() {
        return Err(EngineError::DivisionByZero);
    }
    Ok(HessConnectionMatrix {
        xx: f.derive(0).div(f)?,
        yy: f.derive(1).div(f)?,
    })
}

/// Curvature scalar `(f_xy f − f_x f_y)/f²`; the connection is flat iff this
/// vanishes identically.
pub fn hess_flatness_density(f: &ChartFunction) -> Result<ChartFunction> {
    if f.is_zero() {
        return Err(EngineError::DivisionByZero);
    }
    let defect = hess_defect(f);
    defect.div(&f.mul(f))
}

/// The bare defect `f_xy f − f_x f_y`.
pub fn hess_defect(f: &ChartFunction) -> ChartFunction {
    let fx = f.derive(0);
    let fy = f.derive(1);
    let fxy = fx.derive(1);
    fxy.mul(f).sub(&fx.mul(&fy))
}

/// Hess curvature of the pair `(x_i, x_j)` on a surface, cleared to a single
/// fraction: the canonically reduced numerator and the denominator split
/// into (base, exponent) factors.
pub fn surface_hess_curvature(
    spec: &SurfaceSpec,
    pair: (u8, u8),
) -> Result<(Polynomial, Vec<(Polynomial, u32)>)> {
    let chart = BiLagrangianChart::new(spec.clone(), pair)?;
    let defect = match hess_defect(&chart.density()) {
        ChartFunction::Algebra(e) => e,
        ChartFunction::Plane(_) => unreachable!("surface densities use algebra carriers"),
    };
    let (num, den) = defect.clear_denominators();
    Ok((num, split_power(&den)))
}

/// Writes `p` as `b^m` when `b` is detectable through `p / gcd(p, ∂p)`;
/// otherwise returns `(p, 1)`. Purely presentational.
fn split_power(p: &Polynomial) -> Vec<(Polynomial, u32)> {
    if p.is_constant() {
        return vec![(p.clone(), 1)];
    }
    let v = p.support_vars()[0];
    let g = poly_gcd(p, &p.derivative(v));
    if !g.is_constant() {
        let base = normalize_assoc(&p.div_exact(&g));
        let (db, dp) = (base.total_degree(), p.total_degree());
        if db > 0 && dp % db == 0 {
            let m = (dp / db) as u32;
            if m > 1 && base.pow(m) == normalize_assoc(p) {
                let (c, _) = p.rational_content();
                let mut out = Vec::new();
                if !c.is_one() {
                    out.push((Polynomial::constant(p.ctx(), c), 1));
                }
                out.push((base, m));
                return out;
            }
        }
    }
    vec![(p.clone(), 1)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::VariableContext;
    use crate::parse::parse_expression;
    use crate::poly::{rat_int, Rat};
    use crate::ratfun::RationalFunction;
    use num_traits::Zero;

    fn f_plane(s: &str) -> ChartFunction {
        let ctx = VariableContext::with_surface_vars(["x", "y", "z"], &[]);
        ChartFunction::Plane(RationalFunction::from_poly(
            parse_expression(s, &ctx).unwrap(),
        ))
    }

    fn f_plane_frac(n: &str, d: &str) -> ChartFunction {
        let ctx = VariableContext::with_surface_vars(["x", "y", "z"], &[]);
        ChartFunction::Plane(
            RationalFunction::new(
                parse_expression(n, &ctx).unwrap(),
                parse_expression(d, &ctx).unwrap(),
            )
            .unwrap(),
        )
    }

    #[test]
    fn trivial_connection() {
        let m = hess_connection_matrix(&f_plane("1")).unwrap();
        assert!(m.xx.is_zero() && m.yy.is_zero());
    }

    #[test]
    fn product_density_connection() {
        let m = hess_connection_matrix(&f_plane("x*y")).unwrap();
        assert_eq!(m.xx, f_plane_frac("1", "x"));
        assert_eq!(m.yy, f_plane_frac("1", "y"));
    }

    #[test]
    fn zero_density_rejected() {
        assert!(matches!(
            hess_connection_matrix(&f_plane("0")),
            Err(EngineError::DivisionByZero)
        ));
        assert!(hess_flatness_density(&f_plane("0")).is_err());
    }

    #[test]
    fn pvi_density_connection_entries() {
        let spec = SurfaceSpec::lookup("pvi").unwrap();
        let chart = BiLagrangianChart::new(spec, (1, 2)).unwrap();
        let alg = chart.algebra().clone();
        let g = alg.reduce(&parse_expression("2*x3+x1*x2-a3", alg.ctx()).unwrap());
        let m = hess_connection_matrix(&chart.density()).unwrap();
        // f = 1/g, so f_x/f = -g_x/g.
        let ginv = g.invert().unwrap();
        let want_xx = g.derive(0).neg().mul(&ginv);
        let want_yy = g.derive(1).neg().mul(&ginv);
        assert_eq!(m.xx, ChartFunction::Algebra(want_xx));
        assert_eq!(m.yy, ChartFunction::Algebra(want_yy));
    }

    #[test]
    fn separable_densities_are_flat() {
        for s in ["x^2*y", "x", "7", "x^3"] {
            assert!(
                hess_flatness_density(&f_plane(s)).unwrap().is_zero(),
                "density {s}"
            );
        }
        assert!(hess_flatness_density(&f_plane_frac("1", "x*y"))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn additive_density_curvature() {
        let k = hess_flatness_density(&f_plane("x+y")).unwrap();
        assert_eq!(k, f_plane_frac("-1", "(x+y)^2"));
    }

    #[test]
    fn parallelization_identity_instances() {
        // omega(∇_X Y, Z) + omega(Y, ∇_X Z) = X·omega(Y,Z) on coordinate
        // fields reduces to (f_x/f)·f = f_x and (f_y/f)·f = f_y.
        for s in ["x*y+1", "x^2+y+3", "x+2*y"] {
            let f = f_plane(s);
            let m = hess_connection_matrix(&f).unwrap();
            assert_eq!(m.xx.mul(&f), f.derive(0), "density {s}");
            assert_eq!(m.yy.mul(&f), f.derive(1), "density {s}");
        }
    }

    #[test]
    fn pvi_hess_12_displayed_numerator() {
        let spec = SurfaceSpec::lookup("pvi").unwrap();
        let (num, den) = surface_hess_curvature(&spec, (1, 2)).unwrap();
        let ctx = spec.ctx().clone();
        assert!(!num.is_zero());
        // Denominator presents as a perfect cube.
        let cube = den.iter().find(|(_, m)| *m == 3).expect("cubed factor");
        // Its base is P_{x3}^2 reduced mod P.
        let alg = SurfaceAlgebra::new(spec.clone(), Chart::web_default()).unwrap();
        let pz = parse_expression("2*x3+x1*x2-a3", &ctx).unwrap();
        assert_eq!(alg.reduce(&pz.pow(2)), alg.reduce(&cube.0));

        // The four displayed coefficient polynomials match up to one global
        // rational unit.
        let x1 = ctx.var("x1").unwrap();
        let x2 = ctx.var("x2").unwrap();
        let buckets = num.collect(&[x1, x2]);
        let coeff = |e1: u16, e2: u16| -> Polynomial {
            let mut exps = vec![0u16; ctx.n_vars()];
            exps[x1] = e1;
            exps[x2] = e2;
            buckets
                .get(&crate::poly::Monomial::from_exps(exps))
                .cloned()
                .unwrap_or_else(|| Polynomial::zero(&ctx))
        };
        let want = [
            (2u16, 2u16, "a3"),
            (2, 1, "-4*a1"),
            (1, 2, "-4*a2"),
            (1, 1, "32-2*a3^2-8*a4"),
        ];
        // Global unit from the first pair.
        let c22 = coeff(2, 2);
        let w22 = parse_expression("a3", &ctx).unwrap();
        let lt = c22.lt().expect("coefficient present").1.clone();
        let wlt = w22.lt().unwrap().1.clone();
        let unit = lt / wlt;
        assert!(!unit.is_zero());
        for (e1, e2, s) in want {
            let got = coeff(e1, e2);
            let expect = parse_expression(s, &ctx).unwrap().mul_rat(&unit);
            assert_eq!(got, expect, "coefficient of x1^{e1} x2^{e2}");
        }
    }

    #[test]
    fn pvi_special_point_hess_is_flat() {
        let spec = SurfaceSpec::lookup("pvi").unwrap();
        let spec = spec
            .substitute(&[
                ("a1".into(), rat_int(0)),
                ("a2".into(), rat_int(0)),
                ("a3".into(), rat_int(0)),
                ("a4".into(), rat_int(4)),
            ])
            .unwrap();
        let (num, _) = surface_hess_curvature(&spec, (1, 2)).unwrap();
        assert!(num.is_zero());
    }

    #[test]
    fn pi_hess_12_is_flat() {
        let spec = SurfaceSpec::lookup("pi").unwrap();
        let (num, _) = surface_hess_curvature(&spec, (1, 2)).unwrap();
        assert!(num.is_zero());
    }

    #[test]
    fn pair_swap_keeps_numerator_up_to_unit() {
        let spec = SurfaceSpec::lookup("pv-deg").unwrap();
        let (n12, _) = surface_hess_curvature(&spec, (1, 2)).unwrap();
        let (n21, _) = surface_hess_curvature(&spec, (2, 1)).unwrap();
        assert_eq!(normalize_assoc(&n12), normalize_assoc(&n21));
        let chart = BiLagrangianChart::new(spec.clone(), (1, 2)).unwrap();
        let swapped = BiLagrangianChart::new(spec, (2, 1)).unwrap();
        assert_eq!(
            chart.density(),
            swapped.density().neg(),
            "swapping the pair flips the density sign"
        );
    }

    #[test]
    fn pair_13_uses_cyclic_density() {
        let spec = SurfaceSpec::lookup("pvi").unwrap();
        let c13 = BiLagrangianChart::new(spec.clone(), (1, 3)).unwrap();
        let c31 = BiLagrangianChart::new(spec, (3, 1)).unwrap();
        assert_eq!(c13.density(), c31.density());
        // Density is 1/P_{x2} on the nose.
        let alg = c13.algebra().clone();
        let p2 = alg.spec().defining_poly.derivative(1);
        let inv = alg.reduce(&p2).invert().unwrap();
        assert_eq!(c13.density(), ChartFunction::Algebra(inv));
    }

    #[test]
    fn split_power_detects_cubes() {
        let ctx = VariableContext::standard(&[]);
        let b = parse_expression("x1^2+x2-3", &ctx).unwrap();
        let p = b.pow(3).mul_rat(&Rat::new(4.into(), 1.into()));
        let fac = split_power(&p);
        let main = fac.iter().find(|(_, m)| *m == 3).expect("cube found");
        assert_eq!(main.0, b);
        let sq = parse_expression("x1*x2+1", &ctx).unwrap();
        assert_eq!(split_power(&sq), vec![(sq.clone(), 1)]);
    }
}
