//! Blaschke curvature of planar 3-webs.
//!
//! A web is given by three 1-forms `ω_i = a_i dx + b_i dy` with pairwise
//! transverse kernels. After scaling the forms to sum to zero there is a
//! unique connection form `θ` with `dω_i = θ ∧ ω_i`; its exterior derivative
//! `κ = dθ` is the Blaschke curvature, a chart invariant of the web.
//!
//! Coefficients are either plain rational functions of the first two context
//! variables or surface-algebra elements with their chart derivations; the
//! [`ChartFunction`] carrier keeps the two cases behind one interface.

use std::fmt;

use crate::error::{EngineError, Result};
use crate::poly::Polynomial;
use crate::ratfun::RationalFunction;
use crate::surface::{Chart, SurfaceAlgebra, SurfaceAlgebraElement, SurfaceSpec};

/// A function on a 2-chart together with its pair of commuting derivations.
#[derive(Clone, PartialEq)]
pub enum ChartFunction {
    /// Rational function of the first two context variables; derivations are
    /// the plain partials in those variables.
    Plane(RationalFunction),
    /// Residue class on a surface chart; derivations are the chart
    /// derivations of the ambient algebra.
    Algebra(SurfaceAlgebraElement),
}

impl ChartFunction {
    pub fn zero_like(&self) -> ChartFunction {
        match self {
            ChartFunction::Plane(f) => {
                ChartFunction::Plane(RationalFunction::zero(f.ctx()))
            }
            ChartFunction::Algebra(e) => ChartFunction::Algebra(e.algebra().zero()),
        }
    }

    pub fn one_like(&self) -> ChartFunction {
        match self {
            ChartFunction::Plane(f) => ChartFunction::Plane(RationalFunction::one(f.ctx())),
            ChartFunction::Algebra(e) => ChartFunction::Algebra(e.algebra().one()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ChartFunction::Plane(f) => f.is_zero(),
            ChartFunction::Algebra(e) => e.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            ChartFunction::Plane(f) => f.is_one(),
            ChartFunction::Algebra(e) => e.is_one(),
        }
    }

    pub fn add(&self, o: &ChartFunction) -> ChartFunction {
        match (self, o) {
            (ChartFunction::Plane(a), ChartFunction::Plane(b)) => {
                ChartFunction::Plane(a.add(b))
            }
            (ChartFunction::Algebra(a), ChartFunction::Algebra(b)) => {
                ChartFunction::Algebra(a.add(b))
            }
            _ => panic!("mixed chart-function carriers"),
        }
    }

    pub fn sub(&self, o: &ChartFunction) -> ChartFunction {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> ChartFunction {
        match self {
            ChartFunction::Plane(a) => ChartFunction::Plane(a.neg()),
            ChartFunction::Algebra(a) => ChartFunction::Algebra(a.neg()),
        }
    }

    pub fn mul(&self, o: &ChartFunction) -> ChartFunction {
        match (self, o) {
            (ChartFunction::Plane(a), ChartFunction::Plane(b)) => {
                ChartFunction::Plane(a.mul(b))
            }
            (ChartFunction::Algebra(a), ChartFunction::Algebra(b)) => {
                ChartFunction::Algebra(a.mul(b))
            }
            _ => panic!("mixed chart-function carriers"),
        }
    }

    pub fn div(&self, o: &ChartFunction) -> Result<ChartFunction> {
        match (self, o) {
            (ChartFunction::Plane(a), ChartFunction::Plane(b)) => {
                Ok(ChartFunction::Plane(a.div(b)?))
            }
            (ChartFunction::Algebra(a), ChartFunction::Algebra(b)) => {
                Ok(ChartFunction::Algebra(a.mul(&b.invert()?)))
            }
            _ => panic!("mixed chart-function carriers"),
        }
    }

    /// Derivation along chart axis 0 or 1.
    pub fn derive(&self, axis: usize) -> ChartFunction {
        assert!(axis < 2);
        match self {
            ChartFunction::Plane(f) => ChartFunction::Plane(f.derivative(axis)),
            ChartFunction::Algebra(e) => ChartFunction::Algebra(e.derive(axis)),
        }
    }
}

impl fmt::Display for ChartFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChartFunction::Plane(x) => write!(f, "{x}"),
            ChartFunction::Algebra(x) => write!(f, "{x}"),
        }
    }
}

impl fmt::Debug for ChartFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChartFunction({self})")
    }
}

/// `a dx + b dy` on a 2-chart.
#[derive(Clone, PartialEq, Debug)]
pub struct ChartOneForm {
    pub a: ChartFunction,
    pub b: ChartFunction,
}

impl ChartOneForm {
    pub fn new(a: ChartFunction, b: ChartFunction) -> ChartOneForm {
        ChartOneForm { a, b }
    }

    pub fn scale(&self, g: &ChartFunction) -> ChartOneForm {
        ChartOneForm { a: self.a.mul(g), b: self.b.mul(g) }
    }

    pub fn add(&self, o: &ChartOneForm) -> ChartOneForm {
        ChartOneForm { a: self.a.add(&o.a), b: self.b.add(&o.b) }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl fmt::Display for ChartOneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) dx + ({}) dy", self.a, self.b)
    }
}

/// `c dx∧dy` on a 2-chart.
#[derive(Clone, PartialEq, Debug)]
pub struct ChartTwoForm {
    pub c: ChartFunction,
}

impl fmt::Display for ChartTwoForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) dx^dy", self.c)
    }
}

/// Three pairwise-transverse foliations on a chart.
#[derive(Clone, Debug)]
pub struct ThreeWeb {
    pub forms: [ChartOneForm; 3],
}

impl ThreeWeb {
    pub fn new(forms: [ChartOneForm; 3]) -> ThreeWeb {
        ThreeWeb { forms }
    }

    /// `δ_{i,j} = a_i b_j − a_j b_i` (0-based indices).
    fn delta(&self, i: usize, j: usize) -> ChartFunction {
        let wi = &self.forms[i];
        let wj = &self.forms[j];
        wi.a.mul(&wj.b).sub(&wj.a.mul(&wi.b))
    }

    fn check_transversal(&self) -> Result<()> {
        for (i, j) in [(0usize, 1usize), (1, 2), (2, 0)] {
            if self.delta(i, j).is_zero() {
                return Err(EngineError::DegenerateWeb(format!(
                    "foliations {} and {} are tangent (delta vanishes identically)",
                    i + 1,
                    j + 1
                )));
            }
        }
        Ok(())
    }
}

/// Scales the three forms so they sum to the zero form:
/// `(δ_{2,3} ω1, δ_{3,1} ω2, δ_{1,2} ω3)`.
pub fn normalize_web(w: &ThreeWeb) -> Result<ThreeWeb> {
    w.check_transversal()?;
    let d23 = w.delta(1, 2);
    let d31 = w.delta(2, 0);
    let d12 = w.delta(0, 1);
    let out = ThreeWeb::new([
        w.forms[0].scale(&d23),
        w.forms[1].scale(&d31),
        w.forms[2].scale(&d12),
    ]);
    let sum = out.forms[0].add(&out.forms[1]).add(&out.forms[2]);
    assert!(sum.is_zero(), "normalized web must sum to zero");
    Ok(out)
}

/// The unique connection form `θ = p dx + q dy` of a normalized web, from the
/// 2×2 system `p b_i − q a_i = ∂_x b_i − ∂_y a_i` (i = 1, 2). The third
/// relation holds automatically and is asserted.
pub fn web_theta(w: &ThreeWeb) -> Result<ChartOneForm> {
    let sum = w.forms[0].add(&w.forms[1]).add(&w.forms[2]);
    if !sum.is_zero() {
        return Err(EngineError::DegenerateWeb(
            "web_theta requires a normalized web (forms must sum to zero)".into(),
        ));
    }
    let c = |i: usize| -> ChartFunction {
        w.forms[i].b.derive(0).sub(&w.forms[i].a.derive(1))
    };
    let (a1, b1) = (&w.forms[0].a, &w.forms[0].b);
    let (a2, b2) = (&w.forms[1].a, &w.forms[1].b);
    let d12 = w.delta(0, 1);
    if d12.is_zero() {
        return Err(EngineError::DegenerateWeb(
            "foliations 1 and 2 are tangent (delta vanishes identically)".into(),
        ));
    }
    let c1 = c(0);
    let c2 = c(1);
    let p = a1.mul(&c2).sub(&a2.mul(&c1)).div(&d12)?;
    let q = b1.mul(&c2).sub(&b2.mul(&c1)).div(&d12)?;
    let third = p.mul(&w.forms[2].b).sub(&q.mul(&w.forms[2].a));
    assert!(
        third.sub(&c(2)).is_zero(),
        "third structure relation must hold on a normalized web"
    );
    Ok(ChartOneForm::new(p, q))
}

pub(crate) fn curvature_general(w: &ThreeWeb) -> Result<ChartTwoForm> {
    let theta = web_theta(&normalize_web(w)?)?;
    let c = theta.b.derive(0).sub(&theta.a.derive(1));
    Ok(ChartTwoForm { c })
}

/// `κ = ((a_xy a − a_x a_y)/a² − (b_xy b − b_x b_y)/b²) dx∧dy` for the web
/// `(dx, dy, a dx + b dy)`.
pub(crate) fn curvature_slope_form(a: &ChartFunction, b: &ChartFunction) -> Result<ChartTwoForm> {
    let term = |f: &ChartFunction| -> Result<ChartFunction> {
        let fx = f.derive(0);
        let fy = f.derive(1);
        let fxy = fx.derive(1);
        fxy.mul(f).sub(&fx.mul(&fy)).div(&f.mul(f))
    };
    let c = term(a)?.sub(&term(b)?);
    Ok(ChartTwoForm { c })
}

/// Blaschke curvature `κ = dθ`. Webs of the shape `(dx, dy, a dx + b dy)`
/// take the closed-form path; in debug builds the general path is run as well
/// and any disagreement is a hard failure.
pub fn blaschke_curvature(w: &ThreeWeb) -> Result<ChartTwoForm> {
    w.check_transversal()?;
    let slope_shape = w.forms[0].a.is_one()
        && w.forms[0].b.is_zero()
        && w.forms[1].a.is_zero()
        && w.forms[1].b.is_one();
    if slope_shape {
        let fast = curvature_slope_form(&w.forms[2].a, &w.forms[2].b)?;
        #[cfg(debug_assertions)]
        {
            let general = curvature_general(w)?;
            assert!(
                fast == general,
                "closed-form curvature disagrees with the connection-form path"
            );
        }
        return Ok(fast);
    }
    curvature_general(w)
}

/// The coordinate web `(dx, dy, P_x dx + P_y dy)` of a surface chart, with
/// its curvature cleared to a single fraction. The numerator comes back
/// canonically reduced (degree `< d` in the eliminated variable); the
/// denominator plays no role in the vanishing test but is reported.
pub fn surface_web_curvature(
    spec: &SurfaceSpec,
    chart: Chart,
) -> Result<(Polynomial, Polynomial)> {
    let alg = SurfaceAlgebra::new(spec.clone(), chart)?;
    let kappa = surface_web_curvature_element(&alg)?;
    Ok(kappa.clear_denominators())
}

/// Same computation, returned as an algebra element.
pub fn surface_web_curvature_element(
    alg: &std::sync::Arc<SurfaceAlgebra>,
) -> Result<SurfaceAlgebraElement> {
    let p = alg.spec().defining_poly.clone();
    let kept = alg.chart().kept;
    let a = alg.reduce(&p.derivative(kept[0]));
    let b = alg.reduce(&p.derivative(kept[1]));
    if a.is_zero() || b.is_zero() {
        return Err(EngineError::DegenerateWeb(
            "a coordinate differential vanishes identically on the surface".into(),
        ));
    }
    let one = ChartFunction::Algebra(alg.one());
    let zero = ChartFunction::Algebra(alg.zero());
    let web = ThreeWeb::new([
        ChartOneForm::new(one.clone(), zero.clone()),
        ChartOneForm::new(zero, one),
        ChartOneForm::new(ChartFunction::Algebra(a), ChartFunction::Algebra(b)),
    ]);
    let kappa = blaschke_curvature(&web)?;
    match kappa.c {
        ChartFunction::Algebra(e) => Ok(e),
        ChartFunction::Plane(_) => unreachable!("surface web uses algebra carriers"),
    }
}

/// Curvature function of the foliation `{f = const}` by leaf lines:
/// `γ = (−f_u² f_vv + 2 f_u f_v f_uv − f_v² f_uu) / f_v³`.
pub fn leaf_line_curvature(f: &ChartFunction) -> Result<ChartFunction> {
    let fu = f.derive(0);
    let fv = f.derive(1);
    if fv.is_zero() {
        return Err(EngineError::DegenerateWeb(
            "leaf-line curvature needs a nonzero v-derivative".into(),
        ));
    }
    let fuu = fu.derive(0);
    let fuv = fu.derive(1);
    let fvv = fv.derive(1);
    let two = fu.one_like().add(&fu.one_like());
    let num = fu
        .mul(&fu)
        .mul(&fvv)
        .neg()
        .add(&two.mul(&fu).mul(&fv).mul(&fuv))
        .sub(&fv.mul(&fv).mul(&fuu));
    num.div(&fv.mul(&fv).mul(&fv))
}
