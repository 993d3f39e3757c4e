//! Published reference values used by the audit in [`crate::verify`].
//!
//! Two kinds of data live here:
//!
//! * closed forms in `q` for the first five Bernoulli, Euler and Genocchi
//!   numbers and polynomials, transcribed term by term as printed (so they can
//!   be evaluated at any `q`);
//! * the printed `q = 1/2` tables of 2-iterated and mixed polynomials and their
//!   zeros, embedded verbatim as JSON, unreduced fractions included.
//!
//! Nothing in this module is derived from the engine; it is the comparison
//! side of the audit.

use std::sync::OnceLock;

use num_traits::One;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::families::Builtin;
use crate::poly::QPoly;
use crate::qcore::QContext;
use crate::rat::{int, parse_rat, Rat};

const TABLES_JSON: &str = include_str!("../data/published_tables.json");

/// Families with published closed forms, in table order.
pub const CLOSED_FORM_FAMILIES: [Builtin; 3] =
    [Builtin::Bernoulli, Builtin::Euler, Builtin::GenocchiTable];

/// Powers and q-numbers needed by the closed forms.
struct Q {
    q: Rat,
    ctx: QContext,
}

impl Q {
    fn new(ctx: &QContext) -> Self {
        Q {
            q: ctx.q().clone(),
            ctx: ctx.clone(),
        }
    }

    fn pow(&self, k: u32) -> Rat {
        num_traits::pow(self.q.clone(), k as usize)
    }

    fn num(&self, k: usize) -> Rat {
        self.ctx.q_number(k)
    }

    fn fact(&self, k: usize) -> Rat {
        self.ctx.q_factorial(k)
    }

    /// `q^3 + 3q^2 + 4q + 3`, recurring in the Genocchi column.
    fn cubic(&self) -> Rat {
        self.pow(3) + int(3) * self.pow(2) + int(4) * &self.q + int(3)
    }

    fn one_plus_q(&self) -> Rat {
        Rat::one() + &self.q
    }

    fn trinomial(&self) -> Rat {
        Rat::one() + &self.q + self.pow(2)
    }
}

/// Printed closed forms of `A_0..A_4`, evaluated at `ctx.q`.
///
/// Panics for [`Builtin::GenocchiDet`], which has no published table entry.
pub fn closed_form_numbers(family: Builtin, ctx: &QContext) -> Vec<Rat> {
    let q = Q::new(ctx);
    let one = Rat::one();
    match family {
        Builtin::Bernoulli => vec![
            one.clone(),
            -(q.one_plus_q().recip()),
            q.pow(2) / q.fact(3),
            (&one - &q.q) * q.pow(3) / (q.num(2) * q.num(4)),
            q.pow(4) * (&one - q.pow(2) - int(2) * q.pow(3) - q.pow(4) + q.pow(6))
                / (q.num(2) * q.num(2) * q.num(3) * q.num(5)),
        ],
        Builtin::Euler => vec![
            one.clone(),
            Rat::new((-1).into(), 2.into()),
            (int(-1) + &q.q) / int(4),
            (int(-1) + int(2) * &q.q + int(2) * q.pow(2) - q.pow(3)) / int(8),
            (&q.q - &one) * q.fact(3) * (q.pow(2) - int(4) * &q.q + &one) / int(16),
        ],
        Builtin::GenocchiTable => {
            let g3_part = (int(2) * q.pow(3) + q.pow(2)) / (q.one_plus_q() * q.one_plus_q());
            let g2_part = q.cubic() / (q.one_plus_q() * q.trinomial());
            vec![
                one.clone(),
                &q.q / q.one_plus_q(),
                -g2_part.clone(),
                g3_part.clone(),
                (g3_part + g2_part) / (&one + q.pow(2))
                    - &q.q / (&q.q + &one)
                    - q.num(5).recip()
                    - &one,
            ]
        }
        Builtin::GenocchiDet => panic!("genocchi-det has no published closed form"),
    }
}

/// Printed closed forms of `A_0(x)..`, evaluated at `ctx.q`, lowest power
/// first. Bernoulli and Euler cover `n = 0..4`; Genocchi covers `n = 0..3`
/// because its printed `n = 4` entry is not well formed.
pub fn closed_form_polys(family: Builtin, ctx: &QContext) -> Vec<QPoly> {
    let q = Q::new(ctx);
    let one = Rat::one();
    let half = Rat::new(1.into(), 2.into());
    let rows: Vec<Vec<Rat>> = match family {
        Builtin::Bernoulli => {
            let b3 = (&one - &q.q) * q.pow(3) / (q.num(2) * q.num(4));
            let b4 = closed_form_numbers(Builtin::Bernoulli, ctx)[4].clone();
            vec![
                vec![one.clone()],
                vec![-(q.one_plus_q().recip()), one.clone()],
                vec![
                    q.pow(2) / (q.num(3) * q.num(2)),
                    -(q.num(2) / q.one_plus_q()),
                    one.clone(),
                ],
                vec![
                    b3,
                    q.pow(2) / q.num(2),
                    -(q.num(3) / q.one_plus_q()),
                    one.clone(),
                ],
                vec![
                    b4,
                    (&one - &q.q) * q.pow(3) / q.num(2),
                    q.num(4) * q.pow(2) / (q.num(2) * q.num(2)),
                    -(q.num(4) / q.one_plus_q()),
                    one.clone(),
                ],
            ]
        }
        Builtin::Euler => {
            let e3_num = int(-1) + int(2) * &q.q + int(2) * q.pow(2) - q.pow(3);
            vec![
                vec![one.clone()],
                vec![-half.clone(), one.clone()],
                vec![(int(-1) + &q.q) / int(4), -(q.num(2) / int(2)), one.clone()],
                vec![
                    e3_num.clone() / int(8),
                    q.num(3) * (int(-1) + &q.q) / int(4),
                    -(q.num(3) / int(2)),
                    one.clone(),
                ],
                vec![
                    (&q.q - &one) * q.fact(3) * (q.pow(2) - int(4) * &q.q + &one) / int(16),
                    q.num(4) * e3_num / int(8),
                    q.num(4) * q.num(3) * (&q.q - &one) / (int(4) * q.num(2)),
                    -(q.num(4) / int(2)),
                    one.clone(),
                ],
            ]
        }
        Builtin::GenocchiTable => vec![
            vec![one.clone()],
            vec![&q.q / q.one_plus_q(), one.clone()],
            vec![
                -(q.cubic() / (q.one_plus_q() * q.trinomial())),
                q.q.clone(),
                one.clone(),
            ],
            vec![
                (int(2) * q.pow(3) + q.pow(2)) / q.one_plus_q(),
                -(q.cubic() / q.one_plus_q()),
                q.num(3) * &q.q / q.one_plus_q(),
                one.clone(),
            ],
        ],
        Builtin::GenocchiDet => panic!("genocchi-det has no published closed form"),
    };
    rows.into_iter().map(QPoly::new).collect()
}

/// A printed decimal together with the tolerance it implies: half a unit in
/// its last printed place.
#[derive(Clone, Debug, PartialEq)]
pub struct PrintedDecimal {
    pub text: String,
    pub value: f64,
    pub tol: f64,
}

impl PrintedDecimal {
    pub fn parse(text: &str) -> Result<Self> {
        let value: f64 = text
            .parse()
            .map_err(|_| Error::Construction(format!("bad printed decimal {text:?}")))?;
        let places = text.split_once('.').map_or(0, |(_, f)| f.len());
        Ok(PrintedDecimal {
            text: text.to_string(),
            value,
            tol: 0.5 * 10f64.powi(-(places as i32)),
        })
    }
}

/// A printed complex zero `re + im i`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrintedComplex {
    pub re: PrintedDecimal,
    pub im: PrintedDecimal,
}

impl PrintedComplex {
    pub fn text(&self) -> String {
        let im = self.im.text.strip_prefix('-');
        match im {
            Some(abs) => format!("{}-{}i", self.re.text, abs),
            None => format!("{}+{}i", self.re.text, self.im.text),
        }
    }
}

#[derive(Debug, Deserialize)]
struct RawTables {
    q: String,
    rows: Vec<RawRow>,
}

#[derive(Debug, Deserialize)]
struct RawRow {
    id: String,
    label: String,
    pair: [String; 2],
    polys: Vec<Vec<String>>,
    real_zeros: Vec<Vec<String>>,
    complex_zeros: Vec<Vec<[String; 2]>>,
}

/// One published row: a 2-iterated or mixed family at `q = 1/2`.
#[derive(Clone, Debug)]
pub struct PublishedRow {
    pub id: String,
    pub label: String,
    /// `(first, second)` as in [`crate::families::Iterated`].
    pub pair: (Builtin, Builtin),
    /// Printed polynomials for `n = 0..=4`.
    pub polys: Vec<QPoly>,
    /// Printed coefficients, highest power first, exactly as printed.
    pub poly_text: Vec<Vec<String>>,
    /// Printed real zeros for `n = 1..=4` (index `n - 1`).
    pub real_zeros: Vec<Vec<PrintedDecimal>>,
    /// Printed complex zeros for `n = 1..=4` (index `n - 1`).
    pub complex_zeros: Vec<Vec<PrintedComplex>>,
}

#[derive(Clone, Debug)]
pub struct PublishedTables {
    pub q: Rat,
    pub rows: Vec<PublishedRow>,
}

impl PublishedTables {
    pub fn row(&self, id: &str) -> Option<&PublishedRow> {
        self.rows.iter().find(|r| r.id == id)
    }
}

/// The embedded tables, parsed once.
pub fn tables() -> &'static PublishedTables {
    static TABLES: OnceLock<PublishedTables> = OnceLock::new();
    TABLES.get_or_init(|| parse_tables(TABLES_JSON).expect("embedded tables are well formed"))
}

fn parse_tables(json: &str) -> Result<PublishedTables> {
    let raw: RawTables =
        serde_json::from_str(json).map_err(|e| Error::Construction(e.to_string()))?;
    let rows = raw
        .rows
        .into_iter()
        .map(parse_row)
        .collect::<Result<Vec<_>>>()?;
    Ok(PublishedTables {
        q: parse_rat(&raw.q)?,
        rows,
    })
}

fn parse_row(raw: RawRow) -> Result<PublishedRow> {
    let pair = (raw.pair[0].parse()?, raw.pair[1].parse()?);
    let polys = raw
        .polys
        .iter()
        .map(|high_first| {
            let mut coeffs = high_first
                .iter()
                .map(|c| parse_rat(c))
                .collect::<Result<Vec<_>>>()?;
            coeffs.reverse();
            Ok(QPoly::new(coeffs))
        })
        .collect::<Result<Vec<_>>>()?;
    let real_zeros = raw
        .real_zeros
        .iter()
        .map(|cell| cell.iter().map(|z| PrintedDecimal::parse(z)).collect())
        .collect::<Result<Vec<_>>>()?;
    let complex_zeros = raw
        .complex_zeros
        .iter()
        .map(|cell| {
            cell.iter()
                .map(|[re, im]| {
                    Ok(PrintedComplex {
                        re: PrintedDecimal::parse(re)?,
                        im: PrintedDecimal::parse(im)?,
                    })
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PublishedRow {
        id: raw.id,
        label: raw.label,
        pair,
        polys,
        poly_text: raw.polys,
        real_zeros,
        complex_zeros,
    })
}
