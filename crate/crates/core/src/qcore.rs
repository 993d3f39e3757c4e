//! q-numbers, q-factorials, Gauss q-binomials, q-shifted factorials and the
//! q-derivative on polynomials, all exact for a fixed rational `0 < q < 1`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::QPoly;
use crate::qseries::ESeq;
use crate::rat::{parse_rat, Rat};

/// A fixed rational `q` with `0 < q < 1`.
///
/// Cloning is cheap and clones share one memo table. The cache is purely an
/// optimisation: [`QContext::uncached`] gives bit-identical results.
#[derive(Clone)]
pub struct QContext {
    inner: Arc<Inner>,
}

struct Inner {
    q: Rat,
    memo: Option<Memo>,
}

#[derive(Default)]
struct Memo {
    numbers: RwLock<Vec<Rat>>,
    factorials: RwLock<Vec<Rat>>,
    binomials: RwLock<HashMap<(usize, usize), Rat>>,
}

impl QContext {
    pub fn new(q: Rat) -> Result<Self> {
        Self::build(q, true)
    }

    /// Same as [`QContext::new`] with memoisation disabled.
    pub fn uncached(q: Rat) -> Result<Self> {
        Self::build(q, false)
    }

    /// Parses `q` from a `"p/r"` string.
    pub fn parse(q: &str) -> Result<Self> {
        Self::new(parse_rat(q)?)
    }

    fn build(q: Rat, memo: bool) -> Result<Self> {
        if q <= Rat::zero() || q >= Rat::one() {
            return Err(Error::QOutOfRange(q.to_string()));
        }
        Ok(QContext {
            inner: Arc::new(Inner {
                q,
                memo: memo.then(Memo::default),
            }),
        })
    }

    pub fn q(&self) -> &Rat {
        &self.inner.q
    }

    /// Two contexts are interchangeable iff their `q` values agree.
    pub fn same_q(&self, other: &QContext) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.q == other.inner.q
    }

    fn q_pow(&self, a: usize) -> Rat {
        num_traits::pow(self.inner.q.clone(), a)
    }

    /// `[a]_q = (1 - q^a) / (1 - q)`; `[0]_q = 0`.
    pub fn q_number(&self, a: usize) -> Rat {
        let Some(memo) = &self.inner.memo else {
            return self.q_number_direct(a);
        };
        if let Some(v) = memo.numbers.read().unwrap().get(a) {
            return v.clone();
        }
        let mut table = memo.numbers.write().unwrap();
        while table.len() <= a {
            let next = self.q_number_direct(table.len());
            table.push(next);
        }
        table[a].clone()
    }

    fn q_number_direct(&self, a: usize) -> Rat {
        let one = Rat::one();
        (&one - self.q_pow(a)) / (&one - &self.inner.q)
    }

    /// `[n]_q! = [1]_q [2]_q ... [n]_q`; `[0]_q! = 1`.
    pub fn q_factorial(&self, n: usize) -> Rat {
        let Some(memo) = &self.inner.memo else {
            return (1..=n).fold(Rat::one(), |acc, m| acc * self.q_number_direct(m));
        };
        if let Some(v) = memo.factorials.read().unwrap().get(n) {
            return v.clone();
        }
        let mut table = memo.factorials.write().unwrap();
        if table.is_empty() {
            table.push(Rat::one());
        }
        while table.len() <= n {
            let m = table.len();
            let next = &table[m - 1] * self.q_number(m);
            table.push(next);
        }
        table[n].clone()
    }

    /// Gauss q-binomial `[n k]_q`. Errors unless `k <= n`.
    pub fn q_binomial(&self, n: usize, k: usize) -> Result<Rat> {
        if k > n {
            return Err(Error::Domain(format!(
                "q-binomial needs 0 <= k <= n, got n={n}, k={k}"
            )));
        }
        Ok(self.binom(n, k))
    }

    /// Unchecked q-binomial for internal loops where `k <= n` holds.
    pub(crate) fn binom(&self, n: usize, k: usize) -> Rat {
        debug_assert!(k <= n);
        if k == 0 || k == n {
            return Rat::one();
        }
        let compute = || self.q_factorial(n) / (self.q_factorial(k) * self.q_factorial(n - k));
        let Some(memo) = &self.inner.memo else {
            return compute();
        };
        if let Some(v) = memo.binomials.read().unwrap().get(&(n, k)) {
            return v.clone();
        }
        let v = compute();
        memo.binomials.write().unwrap().insert((n, k), v.clone());
        v
    }

    /// `(a; q)_n = prod_{m<n} (1 - q^m a)`.
    pub fn q_shifted_factorial(&self, a: &Rat, n: usize) -> Rat {
        let one = Rat::one();
        (0..n).fold(Rat::one(), |acc, m| acc * (&one - self.q_pow(m) * a))
    }
}

impl fmt::Debug for QContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QContext")
            .field("q", &self.inner.q.to_string())
            .field("memo", &self.inner.memo.is_some())
            .finish()
    }
}

/// Coefficients of `e_q(t)` up to `t^order`. In the `t^n/[n]_q!` convention
/// every coefficient is one.
pub fn q_exp_coeffs(ctx: &QContext, order: usize) -> ESeq {
    ESeq::from_fn(ctx, order, |_| Rat::one())
}

/// Ordinary power-series coefficient of `t^n` in `e_q(t)`, i.e. `1/[n]_q!`.
pub fn q_exp_ordinary_coeff(ctx: &QContext, n: usize) -> Rat {
    ctx.q_factorial(n).recip()
}

/// The q-derivative: `x^n -> [n]_q x^(n-1)`, extended linearly.
pub fn q_derive(p: &QPoly, ctx: &QContext) -> QPoly {
    let coeffs = p
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, c)| c * ctx.q_number(n))
        .collect();
    QPoly::new(coeffs)
}

/// `D_q^k p`.
pub fn q_derive_n(p: &QPoly, ctx: &QContext, k: usize) -> QPoly {
    (0..k).fold(p.clone(), |acc, _| q_derive(&acc, ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};
    use proptest::prelude::*;

    fn half() -> QContext {
        QContext::new(rat(1, 2)).unwrap()
    }

    #[test]
    fn rejects_q_outside_unit_interval() {
        assert!(QContext::new(int(0)).is_err());
        assert!(QContext::new(int(1)).is_err());
        assert!(QContext::new(rat(3, 2)).is_err());
        assert!(QContext::new(rat(-1, 2)).is_err());
        assert!(QContext::parse("0.5").is_err());
    }

    #[test]
    fn q_number_examples() {
        let ctx = half();
        assert_eq!(ctx.q_number(0), int(0));
        assert_eq!(ctx.q_number(2), rat(3, 2));
        assert_eq!(ctx.q_number(4), rat(15, 8));
    }

    #[test]
    fn q_factorial_examples() {
        let ctx = half();
        assert_eq!(ctx.q_factorial(0), int(1));
        assert_eq!(ctx.q_factorial(3), rat(21, 8));
        assert_eq!(ctx.q_factorial(4), rat(315, 64));
    }

    #[test]
    fn q_binomial_examples() {
        let ctx = half();
        for n in 0..6 {
            assert_eq!(ctx.q_binomial(n, 0).unwrap(), int(1));
        }
        assert_eq!(ctx.q_binomial(2, 1).unwrap(), rat(3, 2));
        assert_eq!(ctx.q_binomial(4, 2).unwrap(), rat(35, 16));
        assert!(matches!(ctx.q_binomial(2, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn q_shifted_factorial_examples() {
        let ctx = half();
        assert_eq!(ctx.q_shifted_factorial(&rat(7, 3), 0), int(1));
        assert_eq!(ctx.q_shifted_factorial(&int(1), 1), int(0));
        assert_eq!(ctx.q_shifted_factorial(&rat(1, 2), 2), rat(3, 8));
    }

    #[test]
    fn factorial_matches_shifted_factorial_form() {
        // [n]_q! = (q;q)_n / (1-q)^n
        let ctx = half();
        for n in 0..8 {
            let one_minus_q = int(1) - ctx.q();
            let rhs = ctx.q_shifted_factorial(ctx.q(), n) / num_traits::pow(one_minus_q, n);
            assert_eq!(ctx.q_factorial(n), rhs);
        }
    }

    #[test]
    fn q_exp_examples() {
        let ctx = half();
        assert_eq!(q_exp_coeffs(&ctx, 0).coeffs(), &[int(1)]);
        assert_eq!(
            q_exp_coeffs(&ctx, 3).coeffs(),
            &[int(1), int(1), int(1), int(1)]
        );
        assert_eq!(q_exp_ordinary_coeff(&ctx, 3), rat(8, 21));
    }

    #[test]
    fn q_derive_examples() {
        let ctx = half();
        assert!(q_derive(&QPoly::constant(int(5)), &ctx).is_zero());
        assert_eq!(
            q_derive(&QPoly::monomial(2), &ctx),
            QPoly::term(rat(3, 2), 1)
        );
        let p = &QPoly::monomial(3) - &QPoly::monomial(1);
        assert_eq!(
            q_derive(&p, &ctx),
            QPoly::new(vec![int(-1), int(0), rat(7, 4)])
        );
    }

    #[test]
    fn memo_is_transparent() {
        let cached = half();
        let plain = QContext::uncached(rat(1, 2)).unwrap();
        for n in (0..13).rev() {
            assert_eq!(cached.q_number(n), plain.q_number(n));
            assert_eq!(cached.q_factorial(n), plain.q_factorial(n));
            for k in 0..=n {
                assert_eq!(cached.binom(n, k), plain.binom(n, k));
            }
        }
        // second pass reads the populated cache
        for n in 0..13 {
            assert_eq!(cached.q_factorial(n), plain.q_factorial(n));
        }
    }

    #[test]
    fn shared_cache_across_threads() {
        let ctx = half();
        let handles: Vec<_> = (0..4)
            .map(|t| {
                let ctx = ctx.clone();
                std::thread::spawn(move || {
                    (0..12)
                        .filter(|n| !ctx.binom(12, (n + t) % 13).is_zero())
                        .count()
                })
            })
            .collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), 12);
        }
        let plain = QContext::uncached(rat(1, 2)).unwrap();
        for k in 0..=12 {
            assert_eq!(ctx.binom(12, k), plain.binom(12, k));
        }
    }

    fn arb_q() -> impl Strategy<Value = QContext> {
        (1i64..50, 2i64..51)
            .prop_filter("0<q<1", |(n, d)| n < d)
            .prop_map(|(n, d)| QContext::new(rat(n, d)).unwrap())
    }

    fn arb_poly() -> impl Strategy<Value = QPoly> {
        prop::collection::vec((-20i64..20, 1i64..9), 0..13)
            .prop_map(|c| QPoly::new(c.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn binomial_symmetry(ctx in arb_q(), n in 0usize..13, k in 0usize..13) {
            prop_assume!(k <= n);
            prop_assert_eq!(ctx.q_binomial(n, k).unwrap(), ctx.q_binomial(n, n - k).unwrap());
        }

        #[test]
        fn binomial_pascal_recurrence(ctx in arb_q(), n in 1usize..13, k in 1usize..13) {
            prop_assume!(k <= n);
            // [n k] = [n-1 k-1] + q^k [n-1 k], with [n-1 n] = 0
            let upper = if k < n { ctx.q_binomial(n - 1, k).unwrap() } else { int(0) };
            let rhs = ctx.q_binomial(n - 1, k - 1).unwrap()
                + num_traits::pow(ctx.q().clone(), k) * upper;
            prop_assert_eq!(ctx.q_binomial(n, k).unwrap(), rhs);
        }

        #[test]
        fn factorial_step(ctx in arb_q(), n in 1usize..13) {
            prop_assert_eq!(ctx.q_factorial(n), ctx.q_number(n) * ctx.q_factorial(n - 1));
        }

        #[test]
        fn derivative_is_difference_quotient(
            ctx in arb_q(),
            p in arb_poly(),
            (xn, xd) in (-30i64..30, 1i64..7),
        ) {
            prop_assume!(xn != 0);
            let x0 = rat(xn, xd);
            let qx = ctx.q() * &x0;
            let quotient = (p.eval(&qx) - p.eval(&x0)) / (&qx - &x0);
            prop_assert_eq!(q_derive(&p, &ctx).eval(&x0), quotient);
        }
    }
}
