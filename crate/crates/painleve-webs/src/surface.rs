//! Cubic surfaces `{P = 0}` and their chart function algebras.
//!
//! A chart keeps two of the surface coordinates and eliminates the third,
//! say `z`. Functions on the surface are represented canonically as
//! polynomials in `z` of degree `< d = deg_z(P)` with rational-function
//! coefficients in the kept variables and parameters. Division by the leading
//! coefficient of `P` happens in the fraction field, so non-monic surfaces
//! (every catalog entry of degree 1 in `x3` has leading coefficient `x1*x2`)
//! need no special casing.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::context::{Var, VariableContext, N_SURFACE_VARS};
use crate::error::{EngineError, Result};
use crate::parse::{parse_expression, scan_identifiers};
use crate::poly::{Polynomial, Rat};
use crate::ratfun::RationalFunction;

#[derive(Clone, Debug)]
pub struct SurfaceSpec {
    pub name: String,
    pub defining_poly: Polynomial,
    pub param_names: Vec<String>,
    /// Parameters the family declares nonzero (excluded locus `param = 0`).
    pub nonzero_params: Vec<String>,
    pub source: String,
}

struct CatalogRow {
    name: &'static str,
    poly: &'static str,
    params: &'static [&'static str],
    nonzero: &'static [&'static str],
    source: &'static str,
}

const CATALOG: &[CatalogRow] = &[
    CatalogRow {
        name: "pvi",
        poly: "x1^2+x2^2+x3^2+x1*x2*x3-a1*x1-a2*x2-a3*x3-a4",
        params: &["a1", "a2", "a3", "a4"],
        nonzero: &[],
        source: "Fricke cubic, PVI character variety",
    },
    CatalogRow {
        name: "pv",
        poly: "x1*x2*x3+x1^2+x2^2-(s1+s2*s3)*x1-(s2+s1*s3)*x2-s3*x3+(s3^2+s1*s2*s3+1)",
        params: &["s1", "s2", "s3"],
        nonzero: &["s3"],
        source: "van der Put-Saito list, PV",
    },
    CatalogRow {
        name: "pv-deg",
        poly: "x1*x2*x3+x1^2+x2^2+s1*x1+s2*x2+1",
        params: &["s1", "s2"],
        nonzero: &[],
        source: "van der Put-Saito list, degenerate PV",
    },
    CatalogRow {
        name: "piii-d6",
        poly: "x1*x2*x3+x1^2+x2^2+(1+alpha*beta)*x1+(alpha+beta)*x2+alpha*beta",
        params: &["alpha", "beta"],
        nonzero: &["alpha", "beta"],
        source: "van der Put-Saito list, PIII(D6)",
    },
    CatalogRow {
        name: "piii-d7",
        poly: "x1*x2*x3+x1^2+x2^2+alpha*x1+x2",
        params: &["alpha"],
        nonzero: &["alpha"],
        source: "van der Put-Saito list, PIII(D7)",
    },
    CatalogRow {
        name: "piii-d8",
        poly: "x1*x2*x3+x1^2-x2^2-x1",
        params: &[],
        nonzero: &[],
        source: "van der Put-Saito list, PIII(D8)",
    },
    CatalogRow {
        name: "piv",
        poly: "x1*x2*x3+x1^2-(s2^2+s1*s2)*x1-s2^2*x2-s2^2*x3+(s2^2+s1*s2^3)",
        params: &["s1", "s2"],
        nonzero: &["s2"],
        source: "van der Put-Saito list, PIV",
    },
    CatalogRow {
        name: "pii-fn",
        poly: "x1*x2*x3+x1-x2+x3+s",
        params: &["s"],
        nonzero: &[],
        source: "van der Put-Saito list, PII Flaschka-Newell",
    },
    CatalogRow {
        name: "pii",
        poly: "x1*x2*x3-x1-alpha*x2-x3+alpha+1",
        params: &["alpha"],
        nonzero: &["alpha"],
        source: "van der Put-Saito list, PII",
    },
    CatalogRow {
        name: "pi",
        poly: "x1*x2*x3+x1+x2+1",
        params: &[],
        nonzero: &[],
        source: "van der Put-Saito list, PI",
    },
];

pub fn catalog_names() -> Vec<&'static str> {
    CATALOG.iter().map(|r| r.name).collect()
}

impl SurfaceSpec {
    pub fn lookup(name: &str) -> Result<SurfaceSpec> {
        let row = CATALOG
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| EngineError::UnknownSurface(name.to_string()))?;
        let ctx = VariableContext::standard(row.params);
        let defining_poly = parse_expression(row.poly, &ctx)
            .expect("catalog polynomial must parse");
        Ok(SurfaceSpec {
            name: row.name.to_string(),
            defining_poly,
            param_names: row.params.iter().map(|s| s.to_string()).collect(),
            nonzero_params: row.nonzero.iter().map(|s| s.to_string()).collect(),
            source: row.source.to_string(),
        })
    }

    /// User-supplied surface; identifiers other than `x1,x2,x3` become
    /// parameters in order of first occurrence.
    pub fn custom(expr: &str) -> Result<SurfaceSpec> {
        let idents = scan_identifiers(expr)?;
        let params: Vec<&str> = idents
            .iter()
            .map(|s| s.as_str())
            .filter(|s| !matches!(*s, "x1" | "x2" | "x3"))
            .collect();
        let ctx = VariableContext::standard(&params);
        let defining_poly = parse_expression(expr, &ctx)?;
        if ctx.surface_vars().all(|v| !defining_poly.involves(v)) {
            return Err(EngineError::DegenerateChart(
                "custom polynomial involves no surface variable".into(),
            ));
        }
        Ok(SurfaceSpec {
            name: "custom".to_string(),
            defining_poly,
            param_names: params.iter().map(|s| s.to_string()).collect(),
            nonzero_params: Vec::new(),
            source: "user-supplied".to_string(),
        })
    }

    pub fn ctx(&self) -> &Arc<VariableContext> {
        self.defining_poly.ctx()
    }

    /// Substitutes rational values for named parameters.
    pub fn substitute(&self, values: &[(String, Rat)]) -> Result<SurfaceSpec> {
        let ctx = self.ctx();
        let mut subs = Vec::new();
        for (name, val) in values {
            if !self.param_names.iter().any(|p| p == name) {
                return Err(EngineError::BadSubstitution(format!(
                    "`{name}` is not a parameter of surface {}",
                    self.name
                )));
            }
            subs.push((ctx.var(name).unwrap(), val.clone()));
        }
        let mut spec = self.clone();
        spec.defining_poly = self.defining_poly.subst_rats(&subs);
        Ok(spec)
    }
}

/// A coordinate chart: two kept surface variables (in order) and the
/// eliminated one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Chart {
    pub kept: [Var; 2],
    pub elim: Var,
}

impl Chart {
    pub fn new(kept: [Var; 2], elim: Var) -> Chart {
        let mut seen = [false; N_SURFACE_VARS];
        for v in kept.iter().copied().chain([elim]) {
            assert!(v < N_SURFACE_VARS, "chart variables must be surface variables");
            assert!(!seen[v], "chart variables must be distinct");
            seen[v] = true;
        }
        Chart { kept, elim }
    }

    /// The web chart: keep `(x1, x2)`, eliminate `x3`.
    pub fn web_default() -> Chart {
        Chart::new([0, 1], 2)
    }

    /// Chart adapted to an ordered coordinate pair `(i, j)`, 1-based. The
    /// pair `(1,3)` is carried by its cyclic representative `(3,1)` so the
    /// symplectic density is `1/P_{x2}` on the nose; same for `(3,1)` input.
    pub fn for_pair(i: u8, j: u8) -> Result<Chart> {
        let chart = match (i, j) {
            (1, 2) => Chart::new([0, 1], 2),
            (2, 1) => Chart::new([1, 0], 2),
            (2, 3) => Chart::new([1, 2], 0),
            (3, 2) => Chart::new([2, 1], 0),
            (1, 3) | (3, 1) => Chart::new([2, 0], 1),
            _ => {
                return Err(EngineError::Unsupported(format!(
                    "invalid coordinate pair ({i},{j})"
                )))
            }
        };
        Ok(chart)
    }
}

/// The function algebra of a surface chart: `F[z]/(P)` with
/// `F = Q(kept variables, parameters)`.
pub struct SurfaceAlgebra {
    spec: SurfaceSpec,
    chart: Chart,
    d: usize,
    /// Coefficients of the monic minimal polynomial: `z^d + m[d-1] z^{d-1} + ... + m[0]`.
    min_poly: Vec<RationalFunction>,
    /// Chain-rule slopes `-red(P_{x_kept[i]}) * red(P_z)^{-1}` as coefficient
    /// vectors, one per kept variable.
    slopes: OnceLock<[Vec<RationalFunction>; 2]>,
}

impl SurfaceAlgebra {
    pub fn new(spec: SurfaceSpec, chart: Chart) -> Result<Arc<SurfaceAlgebra>> {
        let p = &spec.defining_poly;
        let d = p.degree_in(chart.elim) as usize;
        if d == 0 {
            return Err(EngineError::DegenerateChart(format!(
                "surface {} does not involve {}",
                spec.name,
                spec.ctx().name(chart.elim)
            )));
        }
        let coeffs = p.as_univariate(chart.elim);
        let lead = coeffs[d].clone();
        let mut min_poly = Vec::with_capacity(d);
        for c in coeffs.iter().take(d) {
            min_poly.push(RationalFunction::new(c.clone(), lead.clone())?);
        }
        let alg = Arc::new(SurfaceAlgebra { spec, chart, d, min_poly, slopes: OnceLock::new() });

        let pz = alg.spec.defining_poly.derivative(chart.elim);
        let pz_inv = alg.reduce(&pz).invert()?;
        let slope = |axis: usize| -> SurfaceAlgebraElement {
            let pk = alg.spec.defining_poly.derivative(chart.kept[axis]);
            alg.reduce(&pk).neg().mul(&pz_inv)
        };
        let s0 = slope(0).c;
        let s1 = slope(1).c;
        alg.slopes.set([s0, s1]).ok().expect("slopes set once");
        Ok(alg)
    }

    pub fn spec(&self) -> &SurfaceSpec {
        &self.spec
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn deg(&self) -> usize {
        self.d
    }

    pub fn ctx(&self) -> &Arc<VariableContext> {
        self.spec.ctx()
    }

    fn slopes(&self) -> &[Vec<RationalFunction>; 2] {
        self.slopes.get().expect("slopes initialized in new()")
    }

    pub fn zero(self: &Arc<Self>) -> SurfaceAlgebraElement {
        let c = vec![RationalFunction::zero(self.ctx()); self.d];
        SurfaceAlgebraElement { alg: Arc::clone(self), c }
    }

    pub fn one(self: &Arc<Self>) -> SurfaceAlgebraElement {
        self.from_ratfun(RationalFunction::one(self.ctx()))
    }

    pub fn from_ratfun(self: &Arc<Self>, f: RationalFunction) -> SurfaceAlgebraElement {
        debug_assert!(
            !f.num().involves(self.chart.elim) && !f.den().involves(self.chart.elim),
            "coefficient must not involve the eliminated variable"
        );
        let mut e = self.zero();
        e.c[0] = f;
        e
    }

    pub fn from_coeffs(self: &Arc<Self>, c: Vec<RationalFunction>) -> SurfaceAlgebraElement {
        assert_eq!(c.len(), self.d);
        debug_assert!(c
            .iter()
            .all(|f| !f.num().involves(self.chart.elim) && !f.den().involves(self.chart.elim)));
        SurfaceAlgebraElement { alg: Arc::clone(self), c }
    }

    /// Canonical reduction of a polynomial to its algebra representative.
    pub fn reduce(self: &Arc<Self>, p: &Polynomial) -> SurfaceAlgebraElement {
        let coeffs = p.as_univariate(self.chart.elim);
        let mut acc = self.zero();
        for c in coeffs.iter().rev() {
            acc = acc.mul_z();
            acc.c[0] = acc.c[0].add(&RationalFunction::from_poly(c.clone()));
        }
        acc
    }

    /// Reduces a coefficient vector of arbitrary length.
    fn reduce_vec(self: &Arc<Self>, mut v: Vec<RationalFunction>) -> SurfaceAlgebraElement {
        while v.len() > self.d {
            let top = v.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let base = v.len() - self.d;
            for (k, m) in self.min_poly.iter().enumerate() {
                v[base + k] = v[base + k].sub(&top.mul(m));
            }
        }
        while v.len() < self.d {
            v.push(RationalFunction::zero(self.ctx()));
        }
        SurfaceAlgebraElement { alg: self.arc(), c: v }
    }

    fn arc(self: &Arc<Self>) -> Arc<Self> {
        Arc::clone(self)
    }
}

#[derive(Clone)]
pub struct SurfaceAlgebraElement {
    alg: Arc<SurfaceAlgebra>,
    c: Vec<RationalFunction>,
}

impl PartialEq for SurfaceAlgebraElement {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c
    }
}

impl SurfaceAlgebraElement {
    pub fn algebra(&self) -> &Arc<SurfaceAlgebra> {
        &self.alg
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|f| f.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(|f| f.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        let c = self.c.iter().zip(&o.c).map(|(a, b)| a.add(b)).collect();
        SurfaceAlgebraElement { alg: Arc::clone(&self.alg), c }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let c = self.c.iter().zip(&o.c).map(|(a, b)| a.sub(b)).collect();
        SurfaceAlgebraElement { alg: Arc::clone(&self.alg), c }
    }

    pub fn neg(&self) -> Self {
        let c = self.c.iter().map(|a| a.neg()).collect();
        SurfaceAlgebraElement { alg: Arc::clone(&self.alg), c }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = self.alg.d;
        let ctx = self.alg.ctx();
        let mut v = vec![RationalFunction::zero(ctx); 2 * d - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        self.alg.reduce_vec(v)
    }

    pub fn mul_ratfun(&self, f: &RationalFunction) -> Self {
        let c = self.c.iter().map(|a| a.mul(f)).collect();
        SurfaceAlgebraElement { alg: Arc::clone(&self.alg), c }
    }

    /// Multiplication by the eliminated variable, reduced.
    fn mul_z(&self) -> Self {
        let ctx = self.alg.ctx();
        let mut v = vec![RationalFunction::zero(ctx)];
        v.extend(self.c.iter().cloned());
        self.alg.reduce_vec(v)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = self.alg.one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Inversion by the extended Euclidean algorithm against the minimal
    /// polynomial. Fails with the offending gcd when the element vanishes on
    /// a component of the surface over the chart.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(EngineError::NonInvertible { witness: "0".into() });
        }
        let ctx = self.alg.ctx();
        // P as a univariate coefficient vector (monic).
        let mut p: Vec<RationalFunction> = self.alg.min_poly.clone();
        p.push(RationalFunction::one(ctx));
        let e = self.c.clone();

        // Invariants: r0 = s0*e mod P, r1 = s1*e mod P  (the t-cofactors of P
        // are not tracked).
        let mut r0 = p;
        let mut r1 = trim(e);
        let mut s0 = vec![RationalFunction::zero(ctx)];
        let mut s1 = vec![RationalFunction::one(ctx)];
        while !r1.is_empty() && !(r1.len() == 1) {
            let (q, r) = uni_divmod(&r0, &r1, ctx);
            let s = uni_sub(&s0, &uni_mul(&q, &s1, ctx), ctx);
            r0 = r1;
            s0 = s1;
            r1 = r;
            s1 = s;
        }
        if r1.is_empty() {
            // gcd is r0, nonconstant.
            let witness = render_uni(&r0, self.alg.as_ref());
            return Err(EngineError::NonInvertible { witness });
        }
        let g = r1[0].clone();
        let ginv = g.inv().expect("unit gcd");
        let inv_coeffs: Vec<RationalFunction> = s1.iter().map(|c| c.mul(&ginv)).collect();
        Ok(self.alg.reduce_vec(inv_coeffs))
    }

    /// Total derivative along a kept chart coordinate: differentiate the
    /// coefficients, then add the implicit contribution `(de/dz) * slope`.
    pub fn derive(&self, axis: usize) -> Self {
        assert!(axis < 2);
        let var = self.alg.chart.kept[axis];
        let ctx = self.alg.ctx();
        let coeff_part: Vec<RationalFunction> =
            self.c.iter().map(|f| f.derivative(var)).collect();
        let mut dz = vec![RationalFunction::zero(ctx); self.alg.d.max(1)];
        for (k, f) in self.c.iter().enumerate().skip(1) {
            dz[k - 1] = f.mul_rat(&Rat::from_integer((k as i64).into()));
        }
        let dz_elem = SurfaceAlgebraElement { alg: Arc::clone(&self.alg), c: normalize_len(dz, self.alg.d, ctx) };
        let slope = SurfaceAlgebraElement {
            alg: Arc::clone(&self.alg),
            c: self.alg.slopes()[axis].clone(),
        };
        let implicit = dz_elem.mul(&slope);
        let explicit = SurfaceAlgebraElement { alg: Arc::clone(&self.alg), c: coeff_part };
        explicit.add(&implicit)
    }

    /// Clears denominators: returns `(N, D)` with `N` a polynomial of degree
    /// `< d` in the eliminated variable, `D` free of it, and `self = N/D`.
    /// Because every coefficient is individually reduced, the pair is the
    /// canonical fraction up to a rational unit.
    pub fn clear_denominators(&self) -> (Polynomial, Polynomial) {
        let ctx = self.alg.ctx();
        let mut lcm = Polynomial::one(ctx);
        for f in &self.c {
            lcm = crate::gcd::poly_lcm(&lcm, f.den());
        }
        let mut num = Polynomial::zero(ctx);
        let z = Polynomial::var(ctx, self.alg.chart.elim);
        for (k, f) in self.c.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let scale = lcm.div_exact(f.den());
            num = num.add(&f.num().mul(&scale).mul(&z.pow(k as u32)));
        }
        (num, lcm)
    }
}

fn trim(mut v: Vec<RationalFunction>) -> Vec<RationalFunction> {
    while v.last().map(|f| f.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn normalize_len(
    mut v: Vec<RationalFunction>,
    d: usize,
    ctx: &Arc<VariableContext>,
) -> Vec<RationalFunction> {
    while v.len() < d {
        v.push(RationalFunction::zero(ctx));
    }
    v.truncate(d);
    v
}

fn uni_divmod(
    a: &[RationalFunction],
    b: &[RationalFunction],
    ctx: &Arc<VariableContext>,
) -> (Vec<RationalFunction>, Vec<RationalFunction>) {
    let b = b.to_vec();
    let db = b.len() - 1;
    let lb_inv = b.last().unwrap().inv().expect("nonzero leading coefficient");
    let mut r = a.to_vec();
    let mut q = vec![RationalFunction::zero(ctx); a.len().saturating_sub(db)];
    loop {
        let r_t = trim(r);
        r = r_t;
        if r.len() <= db {
            return (q, r);
        }
        let dr = r.len() - 1;
        let c = r.last().unwrap().mul(&lb_inv);
        q[dr - db] = q[dr - db].add(&c);
        for (k, bc) in b.iter().enumerate() {
            let t = c.mul(bc);
            r[dr - db + k] = r[dr - db + k].sub(&t);
        }
    }
}

fn uni_mul(
    a: &[RationalFunction],
    b: &[RationalFunction],
    ctx: &Arc<VariableContext>,
) -> Vec<RationalFunction> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![RationalFunction::zero(ctx); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

fn uni_sub(
    a: &[RationalFunction],
    b: &[RationalFunction],
    ctx: &Arc<VariableContext>,
) -> Vec<RationalFunction> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let x = a.get(k).cloned().unwrap_or_else(|| RationalFunction::zero(ctx));
        let y = b.get(k).cloned().unwrap_or_else(|| RationalFunction::zero(ctx));
        out.push(x.sub(&y));
    }
    out
}

fn render_uni(v: &[RationalFunction], alg: &SurfaceAlgebra) -> String {
    let zname = alg.ctx().name(alg.chart.elim);
    let mut parts = Vec::new();
    for (k, f) in v.iter().enumerate().rev() {
        if f.is_zero() {
            continue;
        }
        let part = match k {
            0 => format!("{f}"),
            1 => format!("({f})*{zname}"),
            _ => format!("({f})*{zname}^{k}"),
        };
        parts.push(part);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

impl fmt::Display for SurfaceAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_uni(&self.c, self.alg.as_ref()))
    }
}

impl fmt::Debug for SurfaceAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SurfaceAlgebraElement({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat_int;

    fn pvi_algebra() -> Arc<SurfaceAlgebra> {
        let spec = SurfaceSpec::lookup("pvi").unwrap();
        SurfaceAlgebra::new(spec, Chart::web_default()).unwrap()
    }

    fn pe(alg: &Arc<SurfaceAlgebra>, s: &str) -> Polynomial {
        parse_expression(s, alg.ctx()).unwrap()
    }

    #[test]
    fn catalog_is_complete() {
        let names = catalog_names();
        assert_eq!(names.len(), 10);
        for n in names {
            let s = SurfaceSpec::lookup(n).unwrap();
            assert!(!s.defining_poly.is_zero());
            for p in &s.nonzero_params {
                assert!(s.param_names.contains(p));
            }
        }
        assert!(matches!(
            SurfaceSpec::lookup("nope"),
            Err(EngineError::UnknownSurface(_))
        ));
    }

    #[test]
    fn pvi_matches_displayed_form() {
        let s = SurfaceSpec::lookup("pvi").unwrap();
        assert_eq!(s.param_names, vec!["a1", "a2", "a3", "a4"]);
        assert_eq!(
            s.defining_poly.to_string(),
            "x1*x2*x3+x1^2+x2^2+x3^2-a1*x1-a2*x2-a3*x3-a4"
        );
    }

    #[test]
    fn pi_has_no_params() {
        let s = SurfaceSpec::lookup("pi").unwrap();
        assert!(s.param_names.is_empty());
        assert_eq!(s.defining_poly.to_string(), "x1*x2*x3+x1+x2+1");
    }

    #[test]
    fn piv_params_with_excluded_locus() {
        let s = SurfaceSpec::lookup("piv").unwrap();
        assert_eq!(s.param_names, vec!["s1", "s2"]);
        assert_eq!(s.nonzero_params, vec!["s2"]);
    }

    #[test]
    fn custom_surface_discovers_params() {
        let s = SurfaceSpec::custom("x1*x2*x3+t*x1-1").unwrap();
        assert_eq!(s.param_names, vec!["t"]);
        assert!(SurfaceSpec::custom("t+1").is_err());
        assert!(SurfaceSpec::custom("x1x2").is_err());
    }

    #[test]
    fn substitute_validates_names() {
        let s = SurfaceSpec::lookup("pvi").unwrap();
        let t = s
            .substitute(&[("a1".into(), rat_int(0)), ("a4".into(), rat_int(4))])
            .unwrap();
        assert!(!t.defining_poly.involves(t.ctx().var("a1").unwrap()));
        assert!(s.substitute(&[("s3".into(), rat_int(1))]).is_err());
    }

    #[test]
    fn reduce_x3_squared_on_pvi() {
        let alg = pvi_algebra();
        let e = alg.reduce(&pe(&alg, "x3^2"));
        let want = alg.from_coeffs(vec![
            RationalFunction::from_poly(pe(&alg, "a1*x1+a2*x2+a4-x1^2-x2^2")),
            RationalFunction::from_poly(pe(&alg, "a3-x1*x2")),
        ]);
        assert_eq!(e, want);
    }

    #[test]
    fn reduce_defining_poly_is_zero() {
        for name in catalog_names() {
            let spec = SurfaceSpec::lookup(name).unwrap();
            let p = spec.defining_poly.clone();
            let alg = SurfaceAlgebra::new(spec, Chart::web_default()).unwrap();
            assert!(alg.reduce(&p).is_zero(), "surface {name}");
        }
    }

    #[test]
    fn reduce_x3_on_pi() {
        let spec = SurfaceSpec::lookup("pi").unwrap();
        let alg = SurfaceAlgebra::new(spec, Chart::web_default()).unwrap();
        assert_eq!(alg.deg(), 1);
        let e = alg.reduce(&pe(&alg, "x3"));
        let want = alg.from_ratfun(
            RationalFunction::new(pe(&alg, "-x1-x2-1"), pe(&alg, "x1*x2")).unwrap(),
        );
        assert_eq!(e, want);
    }

    #[test]
    fn invert_x3_on_pvi() {
        let alg = pvi_algebra();
        let x3 = alg.reduce(&pe(&alg, "x3"));
        let inv = x3.invert().unwrap();
        assert!(x3.mul(&inv).is_one());
        let gamma = pe(&alg, "x1^2+x2^2-a1*x1-a2*x2-a4");
        let want = alg.from_coeffs(vec![
            RationalFunction::new(pe(&alg, "a3-x1*x2"), gamma.clone()).unwrap(),
            RationalFunction::new(pe(&alg, "-1"), gamma).unwrap(),
        ]);
        assert_eq!(inv, want);
    }

    #[test]
    fn invert_unit_and_zero() {
        let alg = pvi_algebra();
        assert!(alg.one().invert().unwrap().is_one());
        assert!(matches!(
            alg.zero().invert(),
            Err(EngineError::NonInvertible { .. })
        ));
    }

    #[test]
    fn noninvertible_carries_witness() {
        // On the pvi surface with all parameters zero, x3 divides P - (x1^2+x2^2+x3^2 ... );
        // easier: an element constructed as z times a unit is invertible, but z
        // on the surface x1*x2*x3+x1+x2+1 reduces to a unit, so use a custom
        // reducible situation: the element `x1*x2` on a chart where it is a
        // zero divisor does not arise for a field of fractions; instead check
        // a gcd witness from a non-unit gcd with the minimal polynomial.
        let spec = SurfaceSpec::custom("x3^2-x1^2").unwrap();
        let alg = SurfaceAlgebra::new(spec, Chart::web_default()).unwrap();
        let e = alg.reduce(&parse_expression("x3-x1", alg.ctx()).unwrap());
        match e.invert() {
            Err(EngineError::NonInvertible { witness }) => {
                assert!(witness.contains("x3"), "witness: {witness}");
            }
            other => panic!("expected NonInvertible, got {other:?}"),
        }
    }

    #[test]
    fn chart_derivative_of_coordinates() {
        let alg = pvi_algebra();
        let x1 = alg.reduce(&pe(&alg, "x1"));
        assert!(x1.derive(0).is_one());
        assert!(x1.derive(1).is_zero());
        let x2 = alg.reduce(&pe(&alg, "x2"));
        assert!(x2.derive(0).is_zero());
        assert!(x2.derive(1).is_one());
    }

    #[test]
    fn chart_derivative_of_x3_on_pvi() {
        let alg = pvi_algebra();
        let x3 = alg.reduce(&pe(&alg, "x3"));
        let d = x3.derive(0);
        let num = alg.reduce(&pe(&alg, "2*x1+x2*x3-a1"));
        let den_inv = alg.reduce(&pe(&alg, "2*x3+x1*x2-a3")).invert().unwrap();
        assert_eq!(d, num.neg().mul(&den_inv));
    }

    #[test]
    fn derivation_kills_constants_and_params() {
        let alg = pvi_algebra();
        let c = alg.from_ratfun(RationalFunction::from_poly(pe(&alg, "a1*a4-3")));
        assert!(c.derive(0).is_zero());
        assert!(c.derive(1).is_zero());
    }

    #[test]
    fn derivation_annihilates_p() {
        // reduce(P) = 0 and deriving it stays 0; also check the derivation on
        // an explicit lift: D(x3^2 + ...) equals -D applied consistently.
        let alg = pvi_algebra();
        let p = alg.spec().defining_poly.clone();
        let z = alg.reduce(&p);
        assert!(z.derive(0).is_zero());
        assert!(z.derive(1).is_zero());
    }

    #[test]
    fn derivations_commute_on_sample() {
        let alg = pvi_algebra();
        let e = alg.reduce(&pe(&alg, "x3^2+x1*x3-a2*x2"));
        let ab = e.derive(0).derive(1);
        let ba = e.derive(1).derive(0);
        assert_eq!(ab, ba);
    }

    #[test]
    fn leibniz_in_algebra() {
        let alg = pvi_algebra();
        let e = alg.reduce(&pe(&alg, "x3+x1"));
        let f = alg.reduce(&pe(&alg, "x2*x3-1"));
        let lhs = e.mul(&f).derive(0);
        let rhs = e.derive(0).mul(&f).add(&f.derive(0).mul(&e));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduce_is_ring_homomorphism_sample() {
        let alg = pvi_algebra();
        let p = pe(&alg, "x3^2+a1*x3");
        let q = pe(&alg, "x1*x3-x2");
        assert_eq!(alg.reduce(&p.mul(&q)), alg.reduce(&p).mul(&alg.reduce(&q)));
    }

    #[test]
    fn clear_denominators_round_trip() {
        let spec = SurfaceSpec::lookup("pi").unwrap();
        let alg = SurfaceAlgebra::new(spec, Chart::web_default()).unwrap();
        let e = alg.reduce(&pe(&alg, "x3"));
        let (num, den) = e.clear_denominators();
        assert_eq!(num, pe(&alg, "-x1-x2-1"));
        assert_eq!(den, pe(&alg, "x1*x2"));
    }

    #[test]
    fn pair_charts() {
        let c12 = Chart::for_pair(1, 2).unwrap();
        assert_eq!(c12, Chart::new([0, 1], 2));
        let c23 = Chart::for_pair(2, 3).unwrap();
        assert_eq!(c23, Chart::new([1, 2], 0));
        let c13 = Chart::for_pair(1, 3).unwrap();
        assert_eq!(c13, Chart::new([2, 0], 1));
        assert_eq!(Chart::for_pair(3, 1).unwrap(), c13);
        assert!(Chart::for_pair(1, 1).is_err());
    }

    #[test]
    fn degenerate_chart_rejected() {
        let spec = SurfaceSpec::custom("x1+x2").unwrap();
        assert!(matches!(
            SurfaceAlgebra::new(spec, Chart::web_default()),
            Err(EngineError::DegenerateChart(_))
        ));
    }
}
