//! The six-parameter cubic perturbation of `(x(3y - x), y(3x - y))`, its six
//! integrability conditions, samplers for each condition set, and the known
//! closed-form integrals.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::PlanarField;
use crate::poly::BiPoly;
use crate::rational::{format_rational, int, parse_rational, rat, Rational};

pub const PARAM_NAMES: [&str; 6] = ["a20", "a11", "a02", "b20", "b11", "b02"];

/// `x' = x(-x + 3y) + x(a20 x^2 + a11 x y + a02 y^2)`,
/// `y' = y(3x - y) + y(b20 x^2 + b11 x y + b02 y^2)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct AplicaParams {
    pub a20: Rational,
    pub a11: Rational,
    pub a02: Rational,
    pub b20: Rational,
    pub b11: Rational,
    pub b02: Rational,
}

impl AplicaParams {
    pub fn from_i64(a20: i64, a11: i64, a02: i64, b20: i64, b11: i64, b02: i64) -> Self {
        AplicaParams {
            a20: int(a20),
            a11: int(a11),
            a02: int(a02),
            b20: int(b20),
            b11: int(b11),
            b02: int(b02),
        }
    }

    /// Parameters of case 6: `b20 = b02`, `a02 = -b02`, `a11 = -b11`, `a20 = -b02`.
    pub fn case6(b02: &Rational, b11: &Rational) -> Self {
        AplicaParams {
            a20: -b02.clone(),
            a11: -b11.clone(),
            a02: -b02.clone(),
            b20: b02.clone(),
            b11: b11.clone(),
            b02: b02.clone(),
        }
    }

    pub fn get(&self, name: &str) -> Option<&Rational> {
        Some(match name {
            "a20" => &self.a20,
            "a11" => &self.a11,
            "a02" => &self.a02,
            "b20" => &self.b20,
            "b11" => &self.b11,
            "b02" => &self.b02,
            _ => return None,
        })
    }

    fn slot(&mut self, name: &str) -> Option<&mut Rational> {
        Some(match name {
            "a20" => &mut self.a20,
            "a11" => &mut self.a11,
            "a02" => &mut self.a02,
            "b20" => &mut self.b20,
            "b11" => &mut self.b11,
            "b02" => &mut self.b02,
            _ => return None,
        })
    }

    /// Parses `"k=v,k=v"`; unnamed parameters are zero.
    pub fn parse(text: &str) -> Result<Self> {
        let mut params = AplicaParams::default();
        let mut seen = Vec::new();
        let mut column = 1;
        for item in text.split(',') {
            let err = |message: String| Error::Parse {
                line: 1,
                column,
                message,
            };
            let trimmed = item.trim();
            if !trimmed.is_empty() {
                let (key, value) = trimmed
                    .split_once('=')
                    .ok_or_else(|| err(format!("expected key=value, found {trimmed:?}")))?;
                let key = key.trim();
                if seen.contains(&key) {
                    return Err(err(format!("parameter {key} given twice")));
                }
                let slot = params
                    .slot(key)
                    .ok_or_else(|| err(format!("unknown parameter {key:?}")))?;
                *slot = parse_rational(value).map_err(|e| match e {
                    Error::Parse { message, .. } => err(message),
                    other => other,
                })?;
                seen.push(key);
            }
            column += item.len() + 1;
        }
        Ok(params)
    }

    pub fn field(&self) -> PlanarField {
        let xx = BiPoly::parse("-x^2 + 3*x*y").expect("literal");
        let yy = BiPoly::parse("3*x*y - y^2").expect("literal");
        let pert_p = BiPoly::from_terms([
            ((3, 0).into(), self.a20.clone()),
            ((2, 1).into(), self.a11.clone()),
            ((1, 2).into(), self.a02.clone()),
        ]);
        let pert_q = BiPoly::from_terms([
            ((2, 1).into(), self.b20.clone()),
            ((1, 2).into(), self.b11.clone()),
            ((0, 3).into(), self.b02.clone()),
        ]);
        PlanarField::new(xx + pert_p, yy + pert_q).expect("vanishes at the origin")
    }

    /// Parameters of the field conjugated by `(x, y) -> (y, x)`.
    pub fn swap(&self) -> Self {
        AplicaParams {
            a20: self.b02.clone(),
            a11: self.b11.clone(),
            a02: self.b20.clone(),
            b20: self.a02.clone(),
            b11: self.a11.clone(),
            b02: self.a20.clone(),
        }
    }
}

impl fmt::Display for AplicaParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = PARAM_NAMES
            .iter()
            .map(|n| format!("{n}={}", format_rational(self.get(n).expect("known name"))))
            .collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for AplicaParams {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        AplicaParams::parse(s)
    }
}

/// Values of the defining polynomials of one case; the case holds when all vanish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseConditions {
    pub case_id: u8,
    pub residuals: Vec<Rational>,
}

impl CaseConditions {
    pub fn satisfied(&self) -> bool {
        self.residuals.iter().all(|r| r.is_zero())
    }
}

/// Each chain of equalities is read as every member being zero.
pub fn eval_case_conditions(p: &AplicaParams) -> Vec<CaseConditions> {
    let AplicaParams {
        a20,
        a11,
        a02,
        b20,
        b11,
        b02,
    } = p;
    let n = |k: i64| int(k);
    let residuals: [Vec<Rational>; 6] = [
        vec![
            b11 + n(5) * b02,
            b20 + n(2) * b02,
            a11 + n(3) * b02,
            a20 - b02,
            a02.clone(),
        ],
        vec![
            b11 + n(3) * b02,
            a02 + n(2) * b02,
            a11 + n(5) * b02,
            a20 - b02,
            b20.clone(),
        ],
        vec![
            n(2) * a11 + n(2) * a02 - n(3) * b20 - n(3) * b11 - n(5) * b02,
            a02 * b20 + a02 * b11 + n(3) * a02 * b02 + n(2) * b20 * b02,
            n(2) * a20 + b20 + b11 + n(3) * b02,
        ],
        vec![a02 + n(5) * b02, a11 + b11, n(5) * a20 + b20],
        vec![a11 + b11, a20 + b02, a02.clone(), b20.clone()],
        vec![b20 - b02, a02 + b02, a11 + b11, a20 + b02],
    ];
    residuals
        .into_iter()
        .enumerate()
        .map(|(i, residuals)| CaseConditions {
            case_id: i as u8 + 1,
            residuals,
        })
        .collect()
}

pub fn satisfied_cases(p: &AplicaParams) -> Vec<u8> {
    eval_case_conditions(p)
        .into_iter()
        .filter(CaseConditions::satisfied)
        .map(|c| c.case_id)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SampleMode {
    OnCase(u8),
    Generic,
}

impl fmt::Display for SampleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleMode::OnCase(k) => write!(f, "on-case-{k}"),
            SampleMode::Generic => f.write_str("generic"),
        }
    }
}

impl FromStr for SampleMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "generic" {
            return Ok(SampleMode::Generic);
        }
        match s.strip_prefix("on-case-").and_then(|k| k.parse::<u8>().ok()) {
            Some(k @ 1..=6) => Ok(SampleMode::OnCase(k)),
            _ => Err(Error::InvalidArgument(format!(
                "mode must be on-case-1 .. on-case-6 or generic, got {s:?}"
            ))),
        }
    }
}

/// Rational with numerator in `-6..=6` and denominator in `1..=3`.
pub fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    rat(rng.gen_range(-6..=6), rng.gen_range(1..=3))
}

fn nonzero_small_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    loop {
        let v = small_rational(rng);
        if !v.is_zero() {
            return v;
        }
    }
}

/// Draws a point exactly on the chosen variety, or off all six.
pub fn sample_params<R: Rng + ?Sized>(mode: SampleMode, rng: &mut R) -> AplicaParams {
    match mode {
        SampleMode::OnCase(1) => {
            let b02 = nonzero_small_rational(rng);
            AplicaParams {
                a20: b02.clone(),
                a11: -int(3) * &b02,
                a02: Rational::zero(),
                b20: -int(2) * &b02,
                b11: -int(5) * &b02,
                b02,
            }
        }
        SampleMode::OnCase(2) => sample_params(SampleMode::OnCase(1), rng).swap(),
        SampleMode::OnCase(3) => loop {
            let (b20, b11, b02) = (
                small_rational(rng),
                small_rational(rng),
                small_rational(rng),
            );
            let s = &b20 + &b11 + int(3) * &b02;
            if s.is_zero() {
                continue;
            }
            let a20 = -&s / int(2);
            let a02 = -int(2) * &b20 * &b02 / &s;
            let a11 = (int(3) * &b20 + int(3) * &b11 + int(5) * &b02 - int(2) * &a02) / int(2);
            break AplicaParams {
                a20,
                a11,
                a02,
                b20,
                b11,
                b02,
            };
        },
        SampleMode::OnCase(4) => {
            let (a20, b11, b02) = (
                small_rational(rng),
                small_rational(rng),
                small_rational(rng),
            );
            AplicaParams {
                a02: -int(5) * &b02,
                a11: -b11.clone(),
                b20: -int(5) * &a20,
                a20,
                b11,
                b02,
            }
        }
        SampleMode::OnCase(5) => {
            let (b11, b02) = (small_rational(rng), small_rational(rng));
            AplicaParams {
                a20: -b02.clone(),
                a11: -b11.clone(),
                a02: Rational::zero(),
                b20: Rational::zero(),
                b11,
                b02,
            }
        }
        SampleMode::OnCase(6) => {
            let (b02, b11) = (small_rational(rng), small_rational(rng));
            AplicaParams::case6(&b02, &b11)
        }
        SampleMode::OnCase(k) => panic!("there is no case {k}"),
        SampleMode::Generic => loop {
            let p = AplicaParams {
                a20: small_rational(rng),
                a11: small_rational(rng),
                a02: small_rational(rng),
                b20: small_rational(rng),
                b11: small_rational(rng),
                b02: small_rational(rng),
            };
            if satisfied_cases(&p).is_empty() {
                break p;
            }
        },
    }
}

/// A closed-form first integral `num / den^dpow`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalIntegral {
    pub numerator: BiPoly,
    pub denominator: BiPoly,
    pub dpow: u32,
}

fn poly(terms: &[(Rational, u32, u32)]) -> BiPoly {
    BiPoly::from_terms(terms.iter().map(|(c, i, j)| ((*i, *j).into(), c.clone())))
}

fn xy() -> BiPoly {
    BiPoly::parse("x*y").expect("literal")
}

/// Case 1: `xy(x - y - b02 x^2 + b02 xy / 3)^2 (1 - b02 x - b02 y)^-3`.
pub fn case1_integral(b02: &Rational) -> RationalIntegral {
    let inner = poly(&[
        (int(1), 1, 0),
        (int(-1), 0, 1),
        (-b02.clone(), 2, 0),
        (b02 / int(3), 1, 1),
    ]);
    RationalIntegral {
        numerator: xy() * inner.pow(2),
        denominator: poly(&[(int(1), 0, 0), (-b02.clone(), 1, 0), (-b02.clone(), 0, 1)]),
        dpow: 3,
    }
}

/// Case 4: `xy(3x - 3y - 3 a20 x^2 + b11 xy + 3 b02 y^2)^2`.
pub fn case4_integral(p: &AplicaParams) -> BiPoly {
    let inner = poly(&[
        (int(3), 1, 0),
        (int(-3), 0, 1),
        (-int(3) * &p.a20, 2, 0),
        (p.b11.clone(), 1, 1),
        (int(3) * &p.b02, 0, 2),
    ]);
    xy() * inner.pow(2)
}

/// Case 5: `xy(3x - 3y + (b02 + b11) xy)^2 (2 + 2 b02 x - 2 b02 y + (b02 b11 + b02^2) xy)^-3`.
pub fn case5_integral(b02: &Rational, b11: &Rational) -> RationalIntegral {
    let inner = poly(&[(int(3), 1, 0), (int(-3), 0, 1), (b02 + b11, 1, 1)]);
    RationalIntegral {
        numerator: xy() * inner.pow(2),
        denominator: poly(&[
            (int(2), 0, 0),
            (int(2) * b02, 1, 0),
            (-int(2) * b02, 0, 1),
            (b02 * b11 + b02 * b02, 1, 1),
        ]),
        dpow: 3,
    }
}

/// Case 3: `xy(x - y)(2 + (b20 + b11 + 3 b02) x - 2 b02 y)`.
pub fn case3_iif(p: &AplicaParams) -> BiPoly {
    let second = poly(&[
        (int(2), 0, 0),
        (&p.b20 + &p.b11 + int(3) * &p.b02, 1, 0),
        (-int(2) * &p.b02, 0, 1),
    ]);
    xy() * (BiPoly::x() - BiPoly::y()) * second
}

/// Case 6 with `b11 = -2 b02`: `xy(x - y)(1 + b02 x - b02 y)`.
pub fn case6_iif(b02: &Rational) -> BiPoly {
    let second = poly(&[(int(1), 0, 0), (b02.clone(), 1, 0), (-b02.clone(), 0, 1)]);
    xy() * (BiPoly::x() - BiPoly::y()) * second
}
