//! Multivariate polynomial GCD over the rationals.
//!
//! Strategy: strip rational and monomial content, dispatch trivial cases,
//! then recurse with primitive polynomial remainder sequences on a chosen
//! main variable — contents of the coefficient vectors are taken at every
//! step, which keeps intermediate coefficient growth at bay.
//!
//! Results are primitive over the integers with a positive grevlex leading
//! coefficient, so they are canonical up to nothing at all.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::context::Var;
use crate::poly::{Monomial, Polynomial, Rat};

/// Normalizes to the canonical associate: integer-primitive, positive
/// grevlex leading coefficient. Zero stays zero.
pub fn normalize_assoc(p: &Polynomial) -> Polynomial {
    if p.is_zero() {
        return p.clone();
    }
    p.rational_content().1
}

pub fn poly_gcd(p: &Polynomial, q: &Polynomial) -> Polynomial {
    if p.is_zero() {
        return normalize_assoc(q);
    }
    if q.is_zero() {
        return normalize_assoc(p);
    }
    if p.is_constant() || q.is_constant() {
        return Polynomial::one(p.ctx());
    }
    let pp = normalize_assoc(p);
    let qq = normalize_assoc(q);

    // Monomial content comes off first; it is both cheap and common.
    let mp = pp.monomial_content();
    let mq = qq.monomial_content();
    let common = mp.gcd(&mq);
    let pp = pp.div_mono(&mp);
    let qq = qq.div_mono(&mq);

    let g = gcd_primitive(&pp, &qq);
    normalize_assoc(&g.mul_mono(&common))
}

/// gcd plus both cofactors: `(g, p/g, q/g)`.
pub fn gcd_cofactors(p: &Polynomial, q: &Polynomial) -> (Polynomial, Polynomial, Polynomial) {
    let g = poly_gcd(p, q);
    if g.is_one() {
        return (g, p.clone(), q.clone());
    }
    (g.clone(), p.div_exact(&g), q.div_exact(&g))
}

pub fn poly_lcm(p: &Polynomial, q: &Polynomial) -> Polynomial {
    if p.is_zero() || q.is_zero() {
        return Polynomial::zero(p.ctx());
    }
    let (_, _, qc) = gcd_cofactors(p, q);
    normalize_assoc(&p.mul(&qc))
}

/// Core routine on monomial-content-free, integer-primitive inputs.
fn gcd_primitive(p: &Polynomial, q: &Polynomial) -> Polynomial {
    if p.is_constant() || q.is_constant() {
        return Polynomial::one(p.ctx());
    }
    if p == q {
        return p.clone();
    }
    let sp = p.support_vars();
    let sq = q.support_vars();
    let shared: Vec<Var> = sp.iter().copied().filter(|v| sq.contains(v)).collect();
    if shared.is_empty() {
        return Polynomial::one(p.ctx());
    }

    // Divisibility short-circuits: very frequent in fraction normalization.
    if p.n_terms() <= q.n_terms() {
        if q.try_exact_div(p).is_some() {
            return p.clone();
        }
    } else if p.try_exact_div(q).is_some() {
        return q.clone();
    }

    // Evaluation-based heuristic first: substitute a large integer for one
    // variable, recurse, lift the image back xi-adically and certify by exact
    // division. Falls through to the remainder sequence only on repeated bad
    // evaluation points.
    if let Some(h) = heu_gcd(p, q) {
        return h;
    }

    // Main variable: smallest maximum degree keeps the remainder sequence
    // short.
    let v = *shared
        .iter()
        .min_by_key(|&&v| p.degree_in(v).max(q.degree_in(v)))
        .unwrap();

    prs_gcd(p, q, v)
}

const HEU_ATTEMPTS: usize = 6;

/// Heuristic gcd of integer-primitive polynomials; `None` asks the caller to
/// fall back. A returned value is certified by exact division, so it is a
/// greatest common divisor, not a guess.
fn heu_gcd(p: &Polynomial, q: &Polynomial) -> Option<Polynomial> {
    let sp = p.support_vars();
    let sq = q.support_vars();
    let v = *sp.iter().find(|v| sq.contains(v))?;
    let np = max_coeff_norm(p);
    let nq = max_coeff_norm(q);
    let mut xi: BigInt = BigInt::from(2u8) * np.min(nq) + 29;
    for _ in 0..HEU_ATTEMPTS {
        let pe = eval_var(p, v, &xi);
        let qe = eval_var(q, v, &xi);
        if let Some(img) = image_gcd(&pe, &qe) {
            if let Some(h) = lift(&img, v, &xi) {
                let h = normalize_assoc(&h);
                if !h.is_zero()
                    && p.try_exact_div(&h).is_some()
                    && q.try_exact_div(&h).is_some()
                {
                    return Some(h);
                }
            }
        }
        xi = xi * BigInt::from(73794u32) / BigInt::from(27011u32);
    }
    None
}

/// gcd of the two evaluated images: integer content times a recursive
/// primitive-part gcd.
fn image_gcd(pe: &Polynomial, qe: &Polynomial) -> Option<Polynomial> {
    if pe.is_zero() || qe.is_zero() {
        return None;
    }
    let (cp, pp) = pe.rational_content();
    let (cq, qp) = qe.rational_content();
    debug_assert!(cp.denom().is_one() && cq.denom().is_one());
    let cc = cp.numer().abs().gcd(&cq.numer().abs());
    let hp = if pp.is_constant() || qp.is_constant() {
        Polynomial::one(pe.ctx())
    } else {
        let sp = pp.support_vars();
        let sq = qp.support_vars();
        if sp.iter().any(|v| sq.contains(v)) {
            heu_gcd(&pp, &qp)?
        } else {
            Polynomial::one(pe.ctx())
        }
    };
    Some(hp.mul_rat(&Rat::from_integer(cc)))
}

/// Substitutes the integer `xi` for `v`, with a power cache.
fn eval_var(p: &Polynomial, v: Var, xi: &BigInt) -> Polynomial {
    let d = p.degree_in(v) as usize;
    let mut powers = Vec::with_capacity(d + 1);
    powers.push(BigInt::one());
    for k in 1..=d {
        let next = &powers[k - 1] * xi;
        powers.push(next);
    }
    Polynomial::from_terms(
        p.ctx(),
        p.terms().map(|(m, c)| {
            let e = m.degree_of(v) as usize;
            let mut exps = m.exps().to_vec();
            exps[v] = 0;
            (Monomial::from_exps(exps), c * &Rat::from_integer(powers[e].clone()))
        }),
    )
}

/// Reads the xi-adic digits of an evaluated gcd image back off into a
/// polynomial in `v`. Digits use symmetric residues so negative coefficients
/// survive the round trip.
fn lift(image: &Polynomial, v: Var, xi: &BigInt) -> Option<Polynomial> {
    let ctx = image.ctx();
    let n = ctx.n_vars();
    let mut rem = image.clone();
    let mut out = Polynomial::zero(ctx);
    let mut power: u16 = 0;
    while !rem.is_zero() {
        if power > 512 {
            return None;
        }
        let digit = smod_coeffs(&rem, xi);
        if !digit.is_zero() {
            out = out.add(&digit.mul_mono(&Monomial::var(n, v, power)));
        }
        rem = rem
            .sub(&digit)
            .mul_rat(&Rat::new(BigInt::one(), xi.clone()));
        power += 1;
    }
    Some(out)
}

fn smod_coeffs(p: &Polynomial, xi: &BigInt) -> Polynomial {
    let half = xi / BigInt::from(2u8);
    Polynomial::from_terms(
        p.ctx(),
        p.terms().map(|(m, c)| {
            debug_assert!(c.denom().is_one());
            let mut r = c.numer().mod_floor(xi);
            if r > half {
                r -= xi;
            }
            (m.clone(), Rat::from_integer(r))
        }),
    )
}

fn max_coeff_norm(p: &Polynomial) -> BigInt {
    p.terms()
        .map(|(_, c)| c.numer().abs())
        .max()
        .unwrap_or_else(BigInt::zero)
}

/// Content of `p` viewed as a univariate polynomial in `v`.
fn content_wrt(p: &Polynomial, v: Var) -> Polynomial {
    let coeffs = p.as_univariate(v);
    let mut g = Polynomial::zero(p.ctx());
    for c in &coeffs {
        if c.is_zero() {
            continue;
        }
        g = poly_gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// One pseudo-division pass in `v`: returns a polynomial proportional to the
/// pseudo-remainder of `a` by `b` (lc(b) powers are absorbed lazily, and the
/// caller takes primitive parts anyway).
fn pseudo_rem(a: &Polynomial, b: &Polynomial, v: Var) -> Polynomial {
    let db = b.degree_in(v);
    let bu = b.as_univariate(v);
    let lb = bu.last().unwrap().clone();
    let mut r = a.as_univariate(v);
    loop {
        while let Some(last) = r.last() {
            if last.is_zero() {
                r.pop();
            } else {
                break;
            }
        }
        let dr = match r.len() {
            0 => return Polynomial::zero(a.ctx()),
            n => (n - 1) as u16,
        };
        if dr < db {
            return Polynomial::from_univariate(a.ctx(), v, &r);
        }
        // r <- lb*r - lr*v^(dr-db)*b
        let lr = r.pop().unwrap();
        let shift = (dr - db) as usize;
        for c in r.iter_mut() {
            *c = c.mul(&lb);
        }
        for (k, bc) in bu.iter().take(db as usize).enumerate() {
            let t = lr.mul(bc);
            r[shift + k] = r[shift + k].sub(&t);
        }
    }
}

fn prs_gcd(p: &Polynomial, q: &Polynomial, v: Var) -> Polynomial {
    let cont_p = content_wrt(p, v);
    let cont_q = content_wrt(q, v);
    let cont = poly_gcd(&cont_p, &cont_q);
    let mut a = p.div_exact(&cont_p);
    let mut b = q.div_exact(&cont_q);
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        let r = pseudo_rem(&a, &b, v);
        if r.is_zero() {
            let g = b.div_exact(&content_wrt(&b, v));
            return normalize_assoc(&cont.mul(&g));
        }
        if r.degree_in(v) == 0 {
            return cont;
        }
        a = b;
        b = r.div_exact(&content_wrt(&r, v));
    }
}
