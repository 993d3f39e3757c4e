//! Truncated series in the q-exponential convention.
//!
//! An [`ESeq`] of order `N` stores `c_0..=c_N` for
//! `f(t) = sum c_n t^n / [n]_q!`. In this convention the product of two
//! generating functions is the q-binomial convolution of their coefficient
//! lists, which is what every construction in this crate is built on.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qcore::QContext;
use crate::rat::Rat;

#[derive(Clone, Debug)]
pub struct ESeq {
    ctx: QContext,
    coeffs: Vec<Rat>,
}

impl PartialEq for ESeq {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_q(&other.ctx) && self.coeffs == other.coeffs
    }
}

impl ESeq {
    /// Order is `coeffs.len() - 1`; an empty list is a domain error.
    pub fn new(ctx: &QContext, coeffs: Vec<Rat>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain("a series needs at least c_0".into()));
        }
        Ok(ESeq {
            ctx: ctx.clone(),
            coeffs,
        })
    }

    pub fn from_fn(ctx: &QContext, order: usize, f: impl FnMut(usize) -> Rat) -> Self {
        ESeq {
            ctx: ctx.clone(),
            coeffs: (0..=order).map(f).collect(),
        }
    }

    /// `1, 0, 0, ...`: the multiplicative identity.
    pub fn unit(ctx: &QContext, order: usize) -> Self {
        Self::from_fn(
            ctx,
            order,
            |n| if n == 0 { Rat::one() } else { Rat::zero() },
        )
    }

    pub fn zero(ctx: &QContext, order: usize) -> Self {
        Self::from_fn(ctx, order, |_| Rat::zero())
    }

    pub fn ctx(&self) -> &QContext {
        &self.ctx
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &Rat {
        &self.coeffs[n]
    }

    pub fn into_coeffs(self) -> Vec<Rat> {
        self.coeffs
    }

    /// Ordinary power-series coefficients `c_n / [n]_q!`.
    pub fn ordinary_coeffs(&self) -> Vec<Rat> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c / self.ctx.q_factorial(n))
            .collect()
    }

    /// Keeps `c_0..=c_order`.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::OrderOutOfRange {
                n: order,
                order: self.order(),
            });
        }
        Ok(ESeq {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs[..=order].to_vec(),
        })
    }

    fn check_compatible(&self, other: &ESeq) -> Result<()> {
        if !self.ctx.same_q(&other.ctx) {
            return Err(Error::ContextMismatch {
                left: self.ctx.q().to_string(),
                right: other.ctx.q().to_string(),
            });
        }
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &ESeq) -> Result<ESeq> {
        self.check_compatible(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &ESeq) -> Result<ESeq> {
        self.check_compatible(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    pub fn scale(&self, c: &Rat) -> ESeq {
        ESeq {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    fn zip(&self, other: &ESeq, f: impl Fn(&Rat, &Rat) -> Rat) -> ESeq {
        ESeq {
            ctx: self.ctx.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// q-Cauchy product: `(ab)_n = sum_k [n k]_q a_k b_(n-k)`.
    pub fn convolve(&self, other: &ESeq) -> Result<ESeq> {
        self.check_compatible(other)?;
        let ctx = &self.ctx;
        let coeffs = (0..=self.order())
            .map(|n| {
                (0..=n).fold(Rat::zero(), |acc, k| {
                    acc + ctx.binom(n, k) * &self.coeffs[k] * &other.coeffs[n - k]
                })
            })
            .collect();
        Ok(ESeq {
            ctx: ctx.clone(),
            coeffs,
        })
    }

    /// The unique `b` with `convolve(self, b)` equal to the unit sequence:
    /// `b_0 = 1/a_0`, `b_n = -(1/a_0) sum_{k=1..n} [n k]_q a_k b_(n-k)`.
    pub fn reciprocal(&self) -> Result<ESeq> {
        self.reciprocal_named("series")
    }

    pub(crate) fn reciprocal_named(&self, what: &str) -> Result<ESeq> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::NonInvertible { what: what.into() });
        }
        let inv_a0 = a0.recip();
        let ctx = &self.ctx;
        let mut out: Vec<Rat> = Vec::with_capacity(self.coeffs.len());
        out.push(inv_a0.clone());
        for n in 1..=self.order() {
            let sum = (1..=n).fold(Rat::zero(), |acc, k| {
                acc + ctx.binom(n, k) * &self.coeffs[k] * &out[n - k]
            });
            out.push(-(&inv_a0 * sum));
        }
        Ok(ESeq {
            ctx: ctx.clone(),
            coeffs: out,
        })
    }

    /// Multiplies the function by `t`: `r_0 = 0`, `r_n = [n]_q a_(n-1)`.
    /// The top coefficient falls off the end.
    pub fn shift_up(&self) -> ESeq {
        let ctx = &self.ctx;
        let coeffs = (0..=self.order())
            .map(|n| {
                if n == 0 {
                    Rat::zero()
                } else {
                    ctx.q_number(n) * &self.coeffs[n - 1]
                }
            })
            .collect();
        ESeq {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    /// Divides the function by `t`: `r_n = a_(n+1) / [n+1]_q`. The top
    /// coefficient is unknown after division and is dropped, so the order
    /// decreases by one; `a_0` must be zero.
    pub fn shift_down(&self) -> Result<ESeq> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Pole(self.coeffs[0].to_string()));
        }
        if self.order() == 0 {
            return Err(Error::Domain("cannot divide an order-0 series by t".into()));
        }
        let ctx = &self.ctx;
        let coeffs = (0..self.order())
            .map(|n| &self.coeffs[n + 1] / ctx.q_number(n + 1))
            .collect();
        Ok(ESeq {
            ctx: ctx.clone(),
            coeffs,
        })
    }
}
