//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms are kept in a map ordered by graded reverse lexicographic order, so
//! the canonical form is unique and the grevlex leading term is O(1).
//! Lexicographic leading terms (for Gröbner output) are found by scanning.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::context::{same_context, Var, VariableContext};

pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Exponent vector; length equals the number of context variables.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Box<[u16]>);

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MonomialOrder {
    GrevLex,
    Lex,
}

impl Monomial {
    pub fn one(n_vars: usize) -> Self {
        Monomial(vec![0; n_vars].into_boxed_slice())
    }

    pub fn var(n_vars: usize, v: Var, exp: u16) -> Self {
        let mut e = vec![0; n_vars];
        e[v] = exp;
        Monomial(e.into_boxed_slice())
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn from_exps(exps: Vec<u16>) -> Self {
        Monomial(exps.into_boxed_slice())
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn degree_of(&self, v: Var) -> u16 {
        self.0[v]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(o.0.iter())
                .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
                .collect(),
        )
    }

    /// Componentwise quotient; `None` when some exponent would go negative.
    pub fn try_div(&self, o: &Monomial) -> Option<Monomial> {
        let mut e = Vec::with_capacity(self.0.len());
        for (&a, &b) in self.0.iter().zip(o.0.iter()) {
            if a < b {
                return None;
            }
            e.push(a - b);
        }
        Some(Monomial(e.into_boxed_slice()))
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(&a, &b)| a <= b)
    }

    pub fn gcd(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(o.0.iter()).map(|(&a, &b)| a.min(b)).collect())
    }

    pub fn lcm(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(o.0.iter()).map(|(&a, &b)| a.max(b)).collect())
    }

    pub fn is_coprime_with(&self, o: &Monomial) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(&a, &b)| a == 0 || b == 0)
    }

    pub fn cmp_order(&self, o: &Monomial, order: MonomialOrder) -> std::cmp::Ordering {
        match order {
            MonomialOrder::GrevLex => cmp_grevlex(&self.0, &o.0),
            MonomialOrder::Lex => cmp_lex(&self.0, &o.0),
        }
    }
}

fn cmp_grevlex(a: &[u16], b: &[u16]) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        ord => return ord,
    }
    // Equal degree: the monomial with the smaller exponent at the last
    // differing position is the larger one.
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

fn cmp_lex(a: &[u16], b: &[u16]) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    for i in 0..a.len() {
        if a[i] != b[i] {
            return a[i].cmp(&b[i]);
        }
    }
    Ordering::Equal
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

/// The intrinsic order is grevlex, so map iteration is grevlex-ascending.
impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        cmp_grevlex(&self.0, &o.0)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    ctx: Arc<VariableContext>,
    terms: BTreeMap<Monomial, Rat>,
}

impl Polynomial {
    pub fn zero(ctx: &Arc<VariableContext>) -> Self {
        Polynomial { ctx: Arc::clone(ctx), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Arc<VariableContext>) -> Self {
        Self::constant(ctx, Rat::one())
    }

    pub fn constant(ctx: &Arc<VariableContext>, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(ctx.n_vars()), c);
        }
        Polynomial { ctx: Arc::clone(ctx), terms }
    }

    pub fn int(ctx: &Arc<VariableContext>, n: i64) -> Self {
        Self::constant(ctx, rat_int(n))
    }

    pub fn var(ctx: &Arc<VariableContext>, v: Var) -> Self {
        assert!(v < ctx.n_vars(), "variable out of range");
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(ctx.n_vars(), v, 1), Rat::one());
        Polynomial { ctx: Arc::clone(ctx), terms }
    }

    pub fn named_var(ctx: &Arc<VariableContext>, name: &str) -> Self {
        let v = ctx.var(name).unwrap_or_else(|| panic!("unknown variable `{name}`"));
        Self::var(ctx, v)
    }

    pub fn term(ctx: &Arc<VariableContext>, m: Monomial, c: Rat) -> Self {
        assert_eq!(m.exps().len(), ctx.n_vars());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { ctx: Arc::clone(ctx), terms }
    }

    pub fn from_terms(ctx: &Arc<VariableContext>, it: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Self::zero(ctx);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn ctx(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn as_constant(&self) -> Option<&Rat> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_one() {
                return Some(c);
            }
        }
        if self.terms.is_empty() {
            // The zero polynomial is constant too, but there is no stored
            // coefficient to reference; callers use is_zero first.
            return None;
        }
        None
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || self.as_constant().is_some()
    }

    /// Leading term under the intrinsic grevlex order.
    pub fn lt(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn lt_order(&self, order: MonomialOrder) -> Option<(&Monomial, &Rat)> {
        match order {
            MonomialOrder::GrevLex => self.lt(),
            MonomialOrder::Lex => self
                .terms
                .iter()
                .max_by(|(a, _), (b, _)| a.cmp_order(b, MonomialOrder::Lex)),
        }
    }

    /// Terms sorted descending under `order`.
    pub fn terms_desc(&self, order: MonomialOrder) -> Vec<(&Monomial, &Rat)> {
        match order {
            MonomialOrder::GrevLex => self.terms.iter().rev().collect(),
            MonomialOrder::Lex => {
                let mut v: Vec<_> = self.terms.iter().collect();
                v.sort_by(|(a, _), (b, _)| b.cmp_order(a, MonomialOrder::Lex));
                v
            }
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn assert_same_ctx(&self, o: &Polynomial) {
        assert!(same_context(&self.ctx, &o.ctx), "polynomial context mismatch");
    }

    pub fn add(&self, o: &Polynomial) -> Polynomial {
        self.assert_same_ctx(o);
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Polynomial) -> Polynomial {
        self.assert_same_ctx(o);
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c);
        }
        r
    }

    pub fn neg(&self) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Polynomial { ctx: Arc::clone(&self.ctx), terms }
    }

    pub fn mul(&self, o: &Polynomial) -> Polynomial {
        self.assert_same_ctx(o);
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.ctx);
        }
        // Multiply the smaller operand into the larger one.
        let (small, large) = if self.terms.len() <= o.terms.len() { (self, o) } else { (o, self) };
        let mut r = Self::zero(&self.ctx);
        for (m1, c1) in &small.terms {
            for (m2, c2) in &large.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn mul_rat(&self, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        let terms = self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect();
        Polynomial { ctx: Arc::clone(&self.ctx), terms }
    }

    pub fn mul_mono(&self, m: &Monomial) -> Polynomial {
        let terms = self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect();
        Polynomial { ctx: Arc::clone(&self.ctx), terms }
    }

    /// Divides every term by `m`; panics unless `m` divides the whole support.
    pub fn div_mono(&self, m: &Monomial) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| (k.try_div(m).expect("monomial does not divide"), c.clone()))
            .collect();
        Polynomial { ctx: Arc::clone(&self.ctx), terms }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, v: Var) -> Polynomial {
        assert!(v < self.ctx.n_vars(), "unknown variable");
        let mut r = Self::zero(&self.ctx);
        for (m, c) in &self.terms {
            let e = m.degree_of(v);
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[v] = e - 1;
            r.add_term(Monomial::from_exps(exps), c * rat_int(e as i64));
        }
        r
    }

    pub fn degree_in(&self, v: Var) -> u16 {
        self.terms.keys().map(|m| m.degree_of(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    pub fn support_vars(&self) -> Vec<Var> {
        let n = self.ctx.n_vars();
        let mut present = vec![false; n];
        for m in self.terms.keys() {
            for (v, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    present[v] = true;
                }
            }
        }
        (0..n).filter(|&v| present[v]).collect()
    }

    pub fn involves(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.degree_of(v) > 0)
    }

    /// Componentwise minimum of the support — the largest monomial dividing
    /// every term. Meaningless for the zero polynomial (panics).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let first = it.next().expect("monomial content of zero polynomial");
        let mut min = first.exps().to_vec();
        for m in it {
            for (a, &b) in min.iter_mut().zip(m.exps().iter()) {
                if b < *a {
                    *a = b;
                }
            }
        }
        Monomial::from_exps(min)
    }

    /// Splits into `content * primitive` where the primitive part has coprime
    /// integer coefficients and a positive grevlex leading coefficient.
    pub fn rational_content(&self) -> (Rat, Polynomial) {
        if self.is_zero() {
            return (Rat::zero(), self.clone());
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut content = Rat::new(num_gcd, den_lcm);
        if self.lt().unwrap().1.is_negative() {
            content = -content;
        }
        let inv = content.recip();
        (content.clone(), self.mul_rat(&inv))
    }

    /// Simultaneous substitution of every variable by `images[v]`.
    pub fn subst_all(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.ctx.n_vars());
        let tgt = images
            .first()
            .map(|p| Arc::clone(p.ctx()))
            .unwrap_or_else(|| Arc::clone(&self.ctx));
        let mut pow_cache: Vec<Vec<Polynomial>> = images.iter().map(|p| vec![Polynomial::one(p.ctx()), p.clone()]) .collect();
        let mut r = Polynomial::zero(&tgt);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&tgt, c.clone());
            for (v, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut pow_cache[v];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().mul(&images[v]);
                    cache.push(next);
                }
                t = t.mul(&cache[e as usize]);
            }
            r = r.add(&t);
        }
        r
    }

    pub fn subst_var(&self, v: Var, image: &Polynomial) -> Polynomial {
        let images: Vec<Polynomial> = (0..self.ctx.n_vars())
            .map(|u| if u == v { image.clone() } else { Polynomial::var(&self.ctx, u) })
            .collect();
        self.subst_all(&images)
    }

    /// Evaluates parameters at rational values, leaving the rest symbolic.
    pub fn subst_rats(&self, values: &[(Var, Rat)]) -> Polynomial {
        let mut r = Polynomial::zero(&self.ctx);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exps = m.exps().to_vec();
            for (v, val) in values {
                let e = exps[*v];
                if e > 0 {
                    let mut p = Rat::one();
                    for _ in 0..e {
                        p *= val;
                    }
                    coeff *= p;
                    exps[*v] = 0;
                }
            }
            r.add_term(Monomial::from_exps(exps), coeff);
        }
        r
    }

    /// Groups terms by their monomial part in `vars`; values are the
    /// polynomial coefficients in the complementary variables.
    pub fn collect(&self, vars: &[Var]) -> BTreeMap<Monomial, Polynomial> {
        let n = self.ctx.n_vars();
        let mut sel = vec![false; n];
        for &v in vars {
            sel[v] = true;
        }
        let mut out: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut key = vec![0u16; n];
            let mut rest = vec![0u16; n];
            for (v, &e) in m.exps().iter().enumerate() {
                if sel[v] {
                    key[v] = e;
                } else {
                    rest[v] = e;
                }
            }
            out.entry(Monomial::from_exps(key))
                .or_insert_with(|| Polynomial::zero(&self.ctx))
                .add_term(Monomial::from_exps(rest), c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Coefficient list with respect to `v`: index `k` holds the coefficient
    /// of `v^k`. Empty for the zero polynomial.
    pub fn as_univariate(&self, v: Var) -> Vec<Polynomial> {
        if self.is_zero() {
            return Vec::new();
        }
        let d = self.degree_in(v) as usize;
        let mut out = vec![Polynomial::zero(&self.ctx); d + 1];
        for (m, c) in &self.terms {
            let e = m.degree_of(v) as usize;
            let mut exps = m.exps().to_vec();
            exps[v] = 0;
            out[e].add_term(Monomial::from_exps(exps), c.clone());
        }
        out
    }

    pub fn from_univariate(ctx: &Arc<VariableContext>, v: Var, coeffs: &[Polynomial]) -> Polynomial {
        let mut r = Polynomial::zero(ctx);
        let zv = Polynomial::var(ctx, v);
        for (k, c) in coeffs.iter().enumerate() {
            r = r.add(&c.mul(&zv.pow(k as u32)));
        }
        r
    }

    /// Exact multivariate division; `None` when `d` does not divide `self`.
    pub fn try_exact_div(&self, d: &Polynomial) -> Option<Polynomial> {
        self.assert_same_ctx(d);
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero(&self.ctx));
        }
        if let Some(c) = d.as_constant() {
            return Some(self.mul_rat(&c.recip()));
        }
        let (dm, dc) = d.lt().unwrap();
        let dm = dm.clone();
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.ctx);
        while let Some((rm, rc)) = rem.lt() {
            let qm = rm.try_div(&dm)?;
            let qc = rc / &dc;
            let t = Polynomial::term(&self.ctx, qm, qc);
            quot = quot.add(&t);
            rem = rem.sub(&t.mul(d));
        }
        Some(quot)
    }

    pub fn div_exact(&self, d: &Polynomial) -> Polynomial {
        self.try_exact_div(d).expect("exact division failed")
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

fn write_mono(f: &mut fmt::Formatter<'_>, ctx: &VariableContext, m: &Monomial) -> fmt::Result {
    // Parameters render before surface variables (`a1*x1`, not `x1*a1`).
    let exps = m.exps();
    let order = ctx.param_vars().chain(ctx.surface_vars());
    let mut first = true;
    for v in order {
        let e = exps[v];
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{}", ctx.name(v))?;
        } else {
            write!(f, "{}^{}", ctx.name(v), e)?;
        }
    }
    Ok(())
}

/// Canonical rendering: terms in descending grevlex order, explicit `*` and
/// `^`, rationals as `p/q`. Parsing this back yields the same polynomial.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write_mono(f, &self.ctx, m)?;
            }
        }
        Ok(())
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        Polynomial::add(self, o)
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        Polynomial::sub(self, o)
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        Polynomial::mul(self, o)
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::neg(self)
    }
}
