//! Normalized rational functions: the coefficient field for chart work.
//!
//! Representation is unique: numerator and denominator share no polynomial
//! factor, and the denominator is integer-primitive with a positive grevlex
//! leading coefficient. Sums and products cancel cofactor-wise (Henrici), so
//! the gcds that actually run stay as small as the shared structure allows.

use std::fmt;
use std::sync::Arc;


use crate::context::{Var, VariableContext};
use crate::error::{EngineError, Result};
use crate::gcd::{gcd_cofactors, poly_gcd};
use crate::poly::{Polynomial, Rat};

#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Fully normalizing constructor.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(EngineError::DivisionByZero);
        }
        Ok(Self::make(num, den))
    }

    fn make(num: Polynomial, den: Polynomial) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            let one = Polynomial::one(num.ctx());
            return RationalFunction { num, den: one };
        }
        let (_, nc, dc) = gcd_cofactors(&num, &den);
        Self::scale_reduced(nc, dc)
    }

    /// Content/sign normalization for a pair already known to be reduced.
    fn scale_reduced(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            let one = Polynomial::one(num.ctx());
            return RationalFunction { num, den: one };
        }
        let (c, dprim) = den.rational_content();
        let num = num.mul_rat(&c.recip());
        RationalFunction { num, den: dprim }
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let one = Polynomial::one(p.ctx());
        RationalFunction { num: p, den: one }
    }

    pub fn zero(ctx: &Arc<VariableContext>) -> Self {
        Self::from_poly(Polynomial::zero(ctx))
    }

    pub fn one(ctx: &Arc<VariableContext>) -> Self {
        Self::from_poly(Polynomial::one(ctx))
    }

    pub fn constant(ctx: &Arc<VariableContext>, c: Rat) -> Self {
        Self::from_poly(Polynomial::constant(ctx, c))
    }

    pub fn var(ctx: &Arc<VariableContext>, v: Var) -> Self {
        Self::from_poly(Polynomial::var(ctx, v))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn ctx(&self) -> &Arc<VariableContext> {
        self.num.ctx()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if !self.den.is_constant() {
            return None;
        }
        if self.num.is_zero() {
            return Some(Rat::from_integer(0.into()));
        }
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::make(self.num.add(&o.num), self.den.clone());
        }
        let (g, d1c, d2c) = gcd_cofactors(&self.den, &o.den);
        if g.is_constant() {
            let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
            let den = self.den.mul(&o.den);
            return Self::scale_reduced(num, den);
        }
        let t = self.num.mul(&d2c).add(&o.num.mul(&d1c));
        if t.is_zero() {
            return Self::zero(self.ctx());
        }
        let (_, tc, gc) = gcd_cofactors(&t, &g);
        let den = gc.mul(&d1c).mul(&d2c);
        Self::scale_reduced(tc, den)
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.ctx());
        }
        let (_, n1, d2) = gcd_cofactors(&self.num, &o.den);
        let (_, n2, d1) = gcd_cofactors(&o.num, &self.den);
        Self::scale_reduced(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn mul_rat(&self, c: &Rat) -> Self {
        RationalFunction { num: self.num.mul_rat(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(EngineError::DivisionByZero);
        }
        Ok(Self::scale_reduced(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.ctx());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Quotient-rule derivative. When the denominator has a repeated factor
    /// the shared part of `(den, den')` is cancelled before the quotient is
    /// assembled, which keeps the final reduction small.
    pub fn derivative(&self, v: Var) -> Self {
        if self.den.is_one() {
            return Self::from_poly(self.num.derivative(v));
        }
        let dn = self.num.derivative(v);
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return Self::make(dn, self.den.clone());
        }
        // den = g*b with g = gcd(den, den'); derivative = (n'*b - n*(den'/g)) / (den*b)
        let g = poly_gcd(&self.den, &dd);
        let b = self.den.div_exact(&g);
        let dd_over_g = dd.div_exact(&g);
        let num = dn.mul(&b).sub(&self.num.mul(&dd_over_g));
        Self::make(num, self.den.mul(&b))
    }

    /// Substitutes rational values for variables (used for `--set`).
    pub fn subst_rats(&self, values: &[(Var, Rat)]) -> Result<Self> {
        let num = self.num.subst_rats(values);
        let den = self.den.subst_rats(values);
        Self::new(num, den)
    }

    /// Equality by cross-multiplication; on normalized values this coincides
    /// with structural equality (tested).
    pub fn eq_cross(&self, o: &Self) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl std::ops::Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, o: &RationalFunction) -> RationalFunction {
        RationalFunction::add(self, o)
    }
}

impl std::ops::Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, o: &RationalFunction) -> RationalFunction {
        RationalFunction::sub(self, o)
    }
}

impl std::ops::Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, o: &RationalFunction) -> RationalFunction {
        RationalFunction::mul(self, o)
    }
}

impl std::ops::Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expression;

    fn ctx() -> Arc<VariableContext> {
        VariableContext::standard(&[])
    }

    fn rf(c: &Arc<VariableContext>, num: &str, den: &str) -> RationalFunction {
        RationalFunction::new(
            parse_expression(num, c).unwrap(),
            parse_expression(den, c).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn common_denominator() {
        let c = ctx();
        let s = rf(&c, "1", "x1").add(&rf(&c, "1", "x2"));
        assert_eq!(s, rf(&c, "x1+x2", "x1*x2"));
    }

    #[test]
    fn division_cancels() {
        let c = ctx();
        let q = rf(&c, "x1^2-1", "1").div(&rf(&c, "x1-1", "1")).unwrap();
        assert_eq!(q, rf(&c, "x1+1", "1"));
        assert!(q.is_poly());
    }

    #[test]
    fn inverse_of_zero_fails() {
        let c = ctx();
        assert_eq!(RationalFunction::zero(&c).inv(), Err(EngineError::DivisionByZero));
        assert!(RationalFunction::new(Polynomial::one(&c), Polynomial::zero(&c)).is_err());
    }

    #[test]
    fn derivative_power_rule() {
        let c = ctx();
        let f = rf(&c, "1", "x1");
        assert_eq!(f.derivative(0), rf(&c, "-1", "x1^2"));
        let g = rf(&c, "x1", "x2");
        assert_eq!(g.derivative(1), rf(&c, "-x1", "x2^2"));
    }

    #[test]
    fn derivative_quotient_rule() {
        let c = ctx();
        let f = rf(&c, "x1+x2", "x1-x2");
        assert_eq!(f.derivative(0), rf(&c, "-2*x2", "(x1-x2)^2"));
    }

    #[test]
    fn normalization_is_canonical() {
        let c = ctx();
        let f = rf(&c, "2*x1", "-2*x2");
        assert_eq!(f.num(), &parse_expression("-x1", &c).unwrap());
        assert_eq!(f.den(), &parse_expression("x2", &c).unwrap());
        // Idempotent.
        let again = RationalFunction::new(f.num().clone(), f.den().clone()).unwrap();
        assert_eq!(f, again);
    }

    #[test]
    fn cross_equality_matches_structural() {
        let c = ctx();
        let a = rf(&c, "x1^2-x2^2", "x1+x2");
        let b = rf(&c, "x1-x2", "1");
        assert_eq!(a, b);
        assert!(a.eq_cross(&b));
    }

    #[test]
    fn repeated_factor_derivative_stays_small() {
        let c = ctx();
        let f = rf(&c, "1", "(x1+x2)^3");
        let d = f.derivative(0);
        assert_eq!(d, rf(&c, "-3", "(x1+x2)^4"));
    }

    #[test]
    fn display_forms() {
        let c = ctx();
        assert_eq!(rf(&c, "x1", "1").to_string(), "x1");
        assert_eq!(rf(&c, "-x1-1", "x2").to_string(), "(-x1-1)/(x2)");
        assert_eq!(RationalFunction::zero(&c).to_string(), "0");
    }

    #[test]
    fn mul_cross_cancellation() {
        let c = ctx();
        let a = rf(&c, "x1*x2", "x1+1");
        let b = rf(&c, "(x1+1)^2", "x2^2");
        assert_eq!(a.mul(&b), rf(&c, "x1*(x1+1)", "x2"));
    }
}
