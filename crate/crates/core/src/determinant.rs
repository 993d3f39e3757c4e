//! Determinant construction of (2-iterated) q-Appell polynomials.
//!
//! For a `beta` sequence with `beta_0 != 0` and a basis `b_0 = 1, b_1(x), ...`
//! the degree-`n` polynomial is
//!
//! ```text
//!              (-1)^n    | 1      b_1(x)  b_2(x)        ...  b_n(x)              |
//! P_n(x) = ------------- | beta_0 beta_1  beta_2        ...  beta_n              |
//!          beta_0^(n+1)  | 0      beta_0  [2 1]beta_1   ...  [n 1]beta_(n-1)     |
//!                        | ...                                                   |
//!                        | 0      ...     0             beta_0  [n n-1]beta_1    |
//! ```
//!
//! With the monomial basis this yields the family whose reciprocal sequence
//! is `beta`; with the polynomials of a second family it yields the
//! 2-iterated (or mixed) product. Only row 0 carries polynomials, so the
//! determinant is expanded along it and every scalar minor is evaluated by
//! fraction-free elimination over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::families::{resolve, FamilySpec};
use crate::poly::QPoly;
use crate::qcore::QContext;
use crate::qseries::ESeq;
use crate::rat::Rat;

#[derive(Clone, Debug)]
pub struct DetSpec {
    pub beta: ESeq,
    pub basis: Vec<QPoly>,
    pub n: usize,
}

/// The `(n+1) x (n+1)` matrix: polynomial row 0 and scalar rows `1..=n`.
#[derive(Clone, Debug, PartialEq)]
pub struct DetMatrix {
    top: Vec<QPoly>,
    body: Vec<Vec<Rat>>,
}

impl DetMatrix {
    pub fn size(&self) -> usize {
        self.top.len()
    }

    pub fn top(&self) -> &[QPoly] {
        &self.top
    }

    /// Scalar rows `1..=n`; `body()[i - 1]` is matrix row `i`.
    pub fn body(&self) -> &[Vec<Rat>] {
        &self.body
    }

    /// Matrix entry; row 0 entries are polynomials, so this covers `i >= 1`.
    pub fn entry(&self, i: usize, j: usize) -> &Rat {
        &self.body[i - 1][j]
    }

    /// Replaces row 0, e.g. to evaluate a different basis against the same
    /// scalar rows.
    pub fn with_top(&self, top: Vec<QPoly>) -> Result<Self> {
        if top.len() != self.size() {
            return Err(Error::Construction(format!(
                "row 0 needs {} entries, got {}",
                self.size(),
                top.len()
            )));
        }
        Ok(DetMatrix {
            top,
            body: self.body.clone(),
        })
    }
}

pub fn build_matrix(spec: &DetSpec) -> Result<DetMatrix> {
    let n = spec.n;
    let beta = &spec.beta;
    if beta.coeff(0).is_zero() {
        return Err(Error::Construction("beta_0 must be nonzero".into()));
    }
    if beta.order() < n {
        return Err(Error::Construction(format!(
            "beta has order {} but n = {n}",
            beta.order()
        )));
    }
    if spec.basis.len() < n + 1 {
        return Err(Error::Construction(format!(
            "basis has {} entries but n + 1 = {} are needed",
            spec.basis.len(),
            n + 1
        )));
    }
    if spec.basis[0] != QPoly::one() {
        return Err(Error::Construction(
            "basis[0] must be the constant 1".into(),
        ));
    }
    let ctx = beta.ctx();
    let body = (1..=n)
        .map(|i| {
            (0..=n)
                .map(|j| {
                    if j + 1 < i {
                        Rat::zero()
                    } else {
                        ctx.binom(j, i - 1) * beta.coeff(j + 1 - i)
                    }
                })
                .collect()
        })
        .collect();
    Ok(DetMatrix {
        top: spec.basis[..=n].to_vec(),
        body,
    })
}

/// `(-1)^n / beta_0^(n+1) * det(m)`, expanded along row 0.
pub fn det_eval(m: &DetMatrix, beta0: &Rat, n: usize) -> QPoly {
    let prefactor = {
        let p = num_traits::pow(beta0.clone(), n + 1).recip();
        if n % 2 == 1 {
            -p
        } else {
            p
        }
    };
    determinant(m).scale(&prefactor)
}

/// Plain determinant of the mixed polynomial/scalar matrix.
pub fn determinant(m: &DetMatrix) -> QPoly {
    let size = m.size();
    let mut acc = QPoly::zero();
    for (j, entry) in m.top.iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let mut cofactor = minor_without_column(&m.body, j, size);
        if j % 2 == 1 {
            cofactor = -cofactor;
        }
        acc = &acc + &entry.scale(&cofactor);
    }
    acc
}

fn minor_without_column(body: &[Vec<Rat>], skip: usize, size: usize) -> Rat {
    let rows: Vec<Vec<Rat>> = body
        .iter()
        .map(|row| {
            (0..size)
                .filter(|&c| c != skip)
                .map(|c| row[c].clone())
                .collect()
        })
        .collect();
    scalar_determinant(&rows)
}

/// Exact determinant of a square rational matrix.
///
/// Each row is scaled to integers by the lcm of its denominators, the integer
/// matrix is reduced with Bareiss' fraction-free elimination, and the scale
/// factors are divided back out.
pub fn scalar_determinant(rows: &[Vec<Rat>]) -> Rat {
    let size = rows.len();
    if size == 0 {
        return Rat::one();
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            debug_assert_eq!(row.len(), size);
            let lcm = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            scale *= &lcm;
            row.iter().map(|r| r.numer() * (&lcm / r.denom())).collect()
        })
        .collect();
    let det = bareiss(&mut a);
    Rat::new(det, scale)
}

fn bareiss(a: &mut [Vec<BigInt>]) -> BigInt {
    let size = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..size - 1 {
        if a[k][k].is_zero() {
            match (k + 1..size).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[size - 1][size - 1]
}

/// `P_n(x)` from a `beta` sequence and basis. `n = 0` gives `1/beta_0`.
pub fn det_poly(spec: &DetSpec) -> Result<QPoly> {
    let m = build_matrix(spec)?;
    Ok(det_eval(&m, spec.beta.coeff(0), spec.n))
}

/// Row-0 basis for [`det_family_poly`].
#[derive(Clone, Debug, PartialEq)]
pub enum Basis {
    Monomials,
    Family(FamilySpec),
}

/// Determinant route with `beta` taken from `beta_spec` and row 0 from
/// `basis`. Monomials give the family itself; a family basis gives the
/// 2-iterated or mixed polynomial whose first factor is `beta_spec`.
pub fn det_family_poly(
    beta_spec: &FamilySpec,
    basis: &Basis,
    ctx: &QContext,
    n: usize,
) -> Result<QPoly> {
    det_family_polys(beta_spec, basis, ctx, n).map(|mut v| v.pop().expect("n+1 entries"))
}

/// `P_0..=P_upto` by the determinant route, sharing one resolution.
pub fn det_family_polys(
    beta_spec: &FamilySpec,
    basis: &Basis,
    ctx: &QContext,
    upto: usize,
) -> Result<Vec<QPoly>> {
    let beta = resolve(beta_spec, ctx, upto)?.beta().clone();
    let basis = match basis {
        Basis::Monomials => (0..=upto).map(QPoly::monomial).collect(),
        Basis::Family(spec) => resolve(spec, ctx, upto)?.polys(upto)?,
    };
    (0..=upto)
        .map(|n| {
            det_poly(&DetSpec {
                beta: beta.clone(),
                basis: basis.clone(),
                n,
            })
        })
        .collect()
}
