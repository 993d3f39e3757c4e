//! q-Appell families, their 2-iterated and mixed products, umbral
//! composition and the operator form.
//!
//! A family is pinned down by its number sequence `A_n = A_n(0)` (the
//! coefficients of the determining function `A(t)`); the polynomials follow
//! from
//!
//! ```text
//! A_n(x) = sum_k [n k]_q A_k x^(n-k)
//! ```
//!
//! The coefficients of `1/A(t)` are the `beta` sequence used by the
//! determinant construction in [`crate::determinant`].

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::QPoly;
use crate::qcore::{q_derive, q_exp_coeffs, QContext};
use crate::qseries::ESeq;
use crate::rat::{int, Rat};

/// Default truncation order for family construction.
pub const DEFAULT_ORDER: usize = 12;

/// Highest index for which the published closed-form Genocchi numbers exist.
pub const GENOCCHI_TABLE_MAX_ORDER: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Builtin {
    Bernoulli,
    Euler,
    /// Genocchi from its determinant `beta`: `beta_m = 1/(2[m+1]_q)`, `beta_0 = 1`.
    GenocchiDet,
    /// Genocchi from the published closed-form numbers `G_0..G_4`.
    GenocchiTable,
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [
        Builtin::Bernoulli,
        Builtin::Euler,
        Builtin::GenocchiDet,
        Builtin::GenocchiTable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Bernoulli => "bernoulli",
            Builtin::Euler => "euler",
            Builtin::GenocchiDet => "genocchi-det",
            Builtin::GenocchiTable => "genocchi-table",
        }
    }

    /// Largest order this family can be resolved at.
    pub fn max_order(self) -> Option<usize> {
        match self {
            Builtin::GenocchiTable => Some(GENOCCHI_TABLE_MAX_ORDER),
            _ => None,
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "bernoulli" | "b" => Ok(Builtin::Bernoulli),
            "euler" | "e" => Ok(Builtin::Euler),
            "genocchi-det" => Ok(Builtin::GenocchiDet),
            "genocchi-table" => Ok(Builtin::GenocchiTable),
            _ => Err(Error::UnknownFamily(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FamilySpec {
    Builtin(Builtin),
    /// The numbers `A_n` directly.
    CustomNumbers(ESeq),
    /// The reciprocal sequence `beta_n` directly.
    CustomBeta(ESeq),
}

impl From<Builtin> for FamilySpec {
    fn from(b: Builtin) -> Self {
        FamilySpec::Builtin(b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Builtin(Builtin),
    CustomNumbers,
    CustomBeta,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Builtin(b) => write!(f, "{b}"),
            Provenance::CustomNumbers => f.write_str("custom-numbers"),
            Provenance::CustomBeta => f.write_str("custom-beta"),
        }
    }
}

/// A resolved family: numbers and beta at a fixed truncation order.
#[derive(Clone, Debug)]
pub struct AppellFamily {
    numbers: ESeq,
    beta: ESeq,
    provenance: Provenance,
}

impl AppellFamily {
    pub fn ctx(&self) -> &QContext {
        self.numbers.ctx()
    }

    pub fn order(&self) -> usize {
        self.numbers.order()
    }

    pub fn numbers(&self) -> &ESeq {
        &self.numbers
    }

    pub fn beta(&self) -> &ESeq {
        &self.beta
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n > self.order() {
            return Err(Error::OrderOutOfRange {
                n,
                order: self.order(),
            });
        }
        Ok(())
    }

    /// `A_n(x) = sum_k [n k]_q A_k x^(n-k)`.
    pub fn poly(&self, n: usize) -> Result<QPoly> {
        self.check_index(n)?;
        Ok(appell_from_numbers(&self.numbers, n))
    }

    /// `A_0(x), ..., A_upto(x)`.
    pub fn polys(&self, upto: usize) -> Result<Vec<QPoly>> {
        (0..=upto).map(|n| self.poly(n)).collect()
    }

    /// `A_n(0)`, read back from the polynomial.
    pub fn eval_at_zero(&self, n: usize) -> Result<Rat> {
        Ok(self.poly(n)?.eval(&Rat::zero()))
    }
}

fn appell_from_numbers(numbers: &ESeq, n: usize) -> QPoly {
    let ctx = numbers.ctx();
    let mut coeffs = vec![Rat::zero(); n + 1];
    for (k, a) in numbers.coeffs()[..=n].iter().enumerate() {
        coeffs[n - k] = ctx.binom(n, k) * a;
    }
    QPoly::new(coeffs)
}

/// Builds a family at truncation order `order`.
pub fn resolve(spec: &FamilySpec, ctx: &QContext, order: usize) -> Result<AppellFamily> {
    match spec {
        FamilySpec::Builtin(b) => resolve_builtin(*b, ctx, order),
        FamilySpec::CustomNumbers(numbers) => {
            let numbers = conform(numbers, ctx, order)?;
            let beta = numbers.reciprocal_named("custom number sequence")?;
            Ok(AppellFamily {
                numbers,
                beta,
                provenance: Provenance::CustomNumbers,
            })
        }
        FamilySpec::CustomBeta(beta) => {
            let beta = conform(beta, ctx, order)?;
            let numbers = beta.reciprocal_named("custom beta sequence")?;
            Ok(AppellFamily {
                numbers,
                beta,
                provenance: Provenance::CustomBeta,
            })
        }
    }
}

fn conform(seq: &ESeq, ctx: &QContext, order: usize) -> Result<ESeq> {
    if !seq.ctx().same_q(ctx) {
        return Err(Error::ContextMismatch {
            left: seq.ctx().q().to_string(),
            right: ctx.q().to_string(),
        });
    }
    if seq.order() != order {
        return Err(Error::OrderMismatch {
            left: seq.order(),
            right: order,
        });
    }
    Ok(seq.clone())
}

fn resolve_builtin(b: Builtin, ctx: &QContext, order: usize) -> Result<AppellFamily> {
    let (numbers, beta) = match b {
        Builtin::Bernoulli | Builtin::Euler | Builtin::GenocchiDet => {
            let beta = builtin_beta(b, ctx, order);
            let numbers = beta.reciprocal_named(&format!("{b} beta"))?;
            (numbers, beta)
        }
        Builtin::GenocchiTable => {
            let numbers = genocchi_table_numbers(ctx, order)?;
            let beta = numbers.reciprocal_named("genocchi-table numbers")?;
            (numbers, beta)
        }
    };
    Ok(AppellFamily {
        numbers,
        beta,
        provenance: Provenance::Builtin(b),
    })
}

/// Closed-form `beta` sequences of the determinant-defined families.
///
/// Panics for [`Builtin::GenocchiTable`], which is defined by its numbers.
pub fn builtin_beta(b: Builtin, ctx: &QContext, order: usize) -> ESeq {
    let half = Rat::new(1.into(), 2.into());
    ESeq::from_fn(ctx, order, |m| match (b, m) {
        (_, 0) => Rat::one(),
        (Builtin::Bernoulli, m) => ctx.q_number(m + 1).recip(),
        (Builtin::Euler, _) => half.clone(),
        (Builtin::GenocchiDet, m) => (int(2) * ctx.q_number(m + 1)).recip(),
        (Builtin::GenocchiTable, _) => unreachable!("genocchi-table has no closed-form beta"),
    })
}

/// Bernoulli `beta` via `(e_q(t) - 1)/t`, independent of [`builtin_beta`].
pub fn bernoulli_beta_from_exp(ctx: &QContext, order: usize) -> ESeq {
    let e = q_exp_coeffs(ctx, order + 1);
    e.sub(&ESeq::unit(ctx, order + 1))
        .and_then(|s| s.shift_down())
        .expect("e_q - 1 has zero constant term")
}

/// Euler `beta` via `(e_q(t) + 1)/2`.
pub fn euler_beta_from_exp(ctx: &QContext, order: usize) -> ESeq {
    let e = q_exp_coeffs(ctx, order);
    e.add(&ESeq::unit(ctx, order))
        .expect("same context and order")
        .scale(&Rat::new(1.into(), 2.into()))
}

/// Numbers of `2t/(e_q(t) + 1)` taken literally: `t` times the Euler
/// determining function. The constant term is zero, so this sequence has no
/// reciprocal and cannot drive a determinant.
pub fn genocchi_generating_numbers(ctx: &QContext, order: usize) -> Result<ESeq> {
    let euler = resolve_builtin(Builtin::Euler, ctx, order)?;
    Ok(euler.numbers.shift_up())
}

/// Published closed forms `G_0..G_4` evaluated at `ctx.q`.
pub fn genocchi_table_numbers(ctx: &QContext, order: usize) -> Result<ESeq> {
    if order > GENOCCHI_TABLE_MAX_ORDER {
        return Err(Error::OrderOutOfRange {
            n: order,
            order: GENOCCHI_TABLE_MAX_ORDER,
        });
    }
    let q = ctx.q().clone();
    let one = Rat::one();
    let q2 = &q * &q;
    let q3 = &q2 * &q;
    let onep = &one + &q;
    let cubic = &q3 + int(3) * &q2 + int(4) * &q + int(3);
    let trinom = &one + &q + &q2;

    let g1 = &q / &onep;
    let g2 = -(&cubic / (&onep * &trinom));
    let g3 = (int(2) * &q3 + &q2) / (&onep * &onep);
    let g4 = (&g3 + &cubic / (&onep * &trinom)) / (&one + &q2)
        - &q / &onep
        - ctx.q_number(5).recip()
        - &one;
    let all = [one, g1, g2, g3, g4];
    ESeq::new(ctx, all[..=order].to_vec())
}

/// A 2-iterated (or mixed, when the families differ) q-Appell family.
///
/// `first` contributes its numbers `A^I_k` and `second` its polynomials
/// `A^II_(n-k)(x)`.
#[derive(Clone, Debug)]
pub struct Iterated {
    pub first: AppellFamily,
    pub second: AppellFamily,
}

impl Iterated {
    pub fn new(first: AppellFamily, second: AppellFamily) -> Result<Self> {
        if !first.ctx().same_q(second.ctx()) {
            return Err(Error::ContextMismatch {
                left: first.ctx().q().to_string(),
                right: second.ctx().q().to_string(),
            });
        }
        if first.order() != second.order() {
            return Err(Error::OrderMismatch {
                left: first.order(),
                right: second.order(),
            });
        }
        Ok(Iterated { first, second })
    }

    pub fn resolve(
        first: &FamilySpec,
        second: &FamilySpec,
        ctx: &QContext,
        order: usize,
    ) -> Result<Self> {
        Self::new(resolve(first, ctx, order)?, resolve(second, ctx, order)?)
    }

    pub fn order(&self) -> usize {
        self.first.order()
    }

    /// `sum_k [n k]_q A^I_k A^II_(n-k)(x)`.
    pub fn poly(&self, n: usize) -> Result<QPoly> {
        self.first.check_index(n)?;
        let ctx = self.first.ctx();
        let mut acc = QPoly::zero();
        for k in 0..=n {
            let weight = ctx.binom(n, k) * self.first.numbers.coeff(k);
            acc = &acc + &self.second.poly(n - k)?.scale(&weight);
        }
        Ok(acc)
    }

    pub fn polys(&self, upto: usize) -> Result<Vec<QPoly>> {
        (0..=upto).map(|n| self.poly(n)).collect()
    }

    /// `sum_k [n k]_q A^I_k A^II_(n-k)`.
    pub fn number(&self, n: usize) -> Result<Rat> {
        self.first.check_index(n)?;
        let ctx = self.first.ctx();
        Ok((0..=n).fold(Rat::zero(), |acc, k| {
            acc + ctx.binom(n, k) * self.first.numbers.coeff(k) * self.second.numbers.coeff(n - k)
        }))
    }

    /// The product family as an ordinary [`AppellFamily`].
    pub fn as_family(&self) -> Result<AppellFamily> {
        let numbers = self.first.numbers.convolve(&self.second.numbers)?;
        let beta = self.first.beta.convolve(&self.second.beta)?;
        Ok(AppellFamily {
            numbers,
            beta,
            provenance: self.first.provenance,
        })
    }
}

/// `A^[2]_n(x)` for the pair `(first, second)`.
pub fn iterate2(
    first: &FamilySpec,
    second: &FamilySpec,
    ctx: &QContext,
    order: usize,
    n: usize,
) -> Result<QPoly> {
    Iterated::resolve(first, second, ctx, order)?.poly(n)
}

/// `A^[2]_n`, the value of [`iterate2`] at zero.
pub fn iterate2_numbers(
    first: &FamilySpec,
    second: &FamilySpec,
    ctx: &QContext,
    order: usize,
    n: usize,
) -> Result<Rat> {
    Iterated::resolve(first, second, ctx, order)?.number(n)
}

/// Umbral composition: replaces `x^k` in `polys_a[n]` by `polys_b[k]`.
pub fn umbral_compose(polys_a: &[QPoly], polys_b: &[QPoly], n: usize) -> Result<QPoly> {
    let a = polys_a.get(n).ok_or(Error::OrderOutOfRange {
        n,
        order: polys_a.len().saturating_sub(1),
    })?;
    let mut acc = QPoly::zero();
    for (k, c) in a.coeffs().iter().enumerate() {
        let b = polys_b.get(k).ok_or(Error::OrderOutOfRange {
            n: k,
            order: polys_b.len().saturating_sub(1),
        })?;
        acc = &acc + &b.scale(c);
    }
    Ok(acc)
}

/// `sum_k (c_k / [k]_q!) D_q^k p`, terminating at `deg p`.
pub fn apply_operator(coeffs: &ESeq, p: &QPoly) -> QPoly {
    let ctx = coeffs.ctx();
    let mut acc = QPoly::zero();
    let mut derivative = p.clone();
    for k in 0..=coeffs.order() {
        if derivative.is_zero() {
            break;
        }
        let weight = coeffs.coeff(k) / ctx.q_factorial(k);
        acc = &acc + &derivative.scale(&weight);
        derivative = q_derive(&derivative, ctx);
    }
    acc
}

/// Residuals of the two inversion identities for `fam` iterated with itself:
///
/// ```text
/// x^n    - sum_k [n k]_q beta_(n-k) A_k(x)
/// A_n(x) - sum_k [n k]_q beta_(n-k) A^[2]_k(x)
/// ```
///
/// Both are identically zero. `n = 0` returns two zero polynomials.
pub fn identity_residuals(fam: &AppellFamily, n: usize) -> Result<(QPoly, QPoly)> {
    let pair = Iterated::new(fam.clone(), fam.clone())?;
    identity_residuals_pair(&pair, n)
}

/// As [`identity_residuals`] for a general pair: `beta` comes from the first
/// family, `A_n(x)` on the left of the second identity from the second.
pub fn identity_residuals_pair(pair: &Iterated, n: usize) -> Result<(QPoly, QPoly)> {
    pair.first.check_index(n)?;
    if n == 0 {
        return Ok((QPoly::zero(), QPoly::zero()));
    }
    let ctx = pair.first.ctx();
    let beta = pair.first.beta();
    let mut sum_plain = QPoly::zero();
    let mut sum_iter = QPoly::zero();
    for k in 0..=n {
        let w = ctx.binom(n, k) * beta.coeff(n - k);
        sum_plain = &sum_plain + &pair.first.poly(k)?.scale(&w);
        sum_iter = &sum_iter + &pair.poly(k)?.scale(&w);
    }
    Ok((
        &QPoly::monomial(n) - &sum_plain,
        &pair.second.poly(n)? - &sum_iter,
    ))
}

/// Checks `D_q P_n = [n]_q P_(n-1)` for `n = 1..polys.len()-1`; returns the
/// first failing index.
pub fn ladder_failure(polys: &[QPoly], ctx: &QContext) -> Option<usize> {
    (1..polys.len()).find(|&n| q_derive(&polys[n], ctx) != polys[n - 1].scale(&ctx.q_number(n)))
}
