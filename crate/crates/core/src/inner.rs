//! Finite Blaschke products as zero multisets.
//!
//! An [`InnerFunction`] is stored as a sorted list of distinct zeros with
//! multiplicities and no unimodular prefactor, so divisibility, gcd, lcm and
//! quotients reduce to multiset arithmetic on the zero lists.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::C64;

/// Two zero points closer than this are the same point.
pub const MATCH_TOL: f64 = 1e-9;
/// Distinct zero points must be at least this far apart.
pub const MIN_SEPARATION: f64 = 1e-7;
/// Zeros must satisfy `|a| <= 1 - DISC_MARGIN`.
pub const DISC_MARGIN: f64 = 1e-9;
pub const MAX_DEGREE: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zero {
    pub point: C64,
    pub mult: u32,
}

/// A finite Blaschke product `prod ((z - a) / (1 - conj(a) z))^m`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(try_from = "InnerFunctionRepr", into = "InnerFunctionRepr")]
pub struct InnerFunction {
    zeros: Vec<Zero>,
}

fn lex(a: &C64, b: &C64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn same_point(a: C64, b: C64) -> bool {
    (a - b).norm() <= MATCH_TOL
}

impl InnerFunction {
    /// The constant function 1.
    pub fn one() -> Self {
        Self::default()
    }

    /// Builds a Blaschke product from `(point, multiplicity)` pairs.
    ///
    /// Repeated points (within [`MATCH_TOL`]) are merged. Points outside the
    /// admissible disc, zero multiplicities, distinct points closer than
    /// [`MIN_SEPARATION`] and degrees above [`MAX_DEGREE`] are rejected.
    pub fn new<I>(zeros: I) -> Result<Self>
    where
        I: IntoIterator<Item = (C64, u32)>,
    {
        let mut merged: Vec<Zero> = Vec::new();
        for (point, mult) in zeros {
            if mult == 0 {
                return Err(Error::ZeroMultiplicity);
            }
            if point.norm().is_nan() || point.norm() > 1.0 - DISC_MARGIN {
                return Err(Error::ZeroOutsideDisc { re: point.re, im: point.im });
            }
            match merged.iter_mut().find(|z| same_point(z.point, point)) {
                Some(z) => z.mult += mult,
                None => merged.push(Zero { point, mult }),
            }
        }
        for (i, a) in merged.iter().enumerate() {
            for b in &merged[i + 1..] {
                let distance = (a.point - b.point).norm();
                if distance < MIN_SEPARATION {
                    return Err(Error::ZerosTooClose { distance });
                }
            }
        }
        let out = Self::from_sorted(merged);
        if out.degree() > MAX_DEGREE {
            return Err(Error::DegreeCap { degree: out.degree(), cap: MAX_DEGREE });
        }
        Ok(out)
    }

    fn from_sorted(mut zeros: Vec<Zero>) -> Self {
        zeros.retain(|z| z.mult > 0);
        zeros.sort_by(|a, b| lex(&a.point, &b.point));
        Self { zeros }
    }

    /// `z^d`.
    pub fn z_pow(d: u32) -> Self {
        Self::factor_pow(C64::new(0.0, 0.0), d).expect("origin is admissible")
    }

    /// The single Blaschke factor `b_a`.
    pub fn blaschke(a: C64) -> Result<Self> {
        Self::factor_pow(a, 1)
    }

    /// `b_a^m`; `m = 0` gives the constant 1.
    pub fn factor_pow(a: C64, m: u32) -> Result<Self> {
        if m == 0 {
            return Ok(Self::one());
        }
        Self::new([(a, m)])
    }

    pub fn zeros(&self) -> &[Zero] {
        &self.zeros
    }

    pub fn degree(&self) -> u32 {
        self.zeros.iter().map(|z| z.mult).sum()
    }

    pub fn is_one(&self) -> bool {
        self.zeros.is_empty()
    }

    /// True when every zero sits at the origin, i.e. the function is `z^d`.
    pub fn is_monomial(&self) -> bool {
        self.zeros.iter().all(|z| z.point.norm() <= MATCH_TOL)
    }

    /// Multiplicity of the zero at `a` (0 if `a` is not a zero).
    pub fn multiplicity_at(&self, a: C64) -> u32 {
        self.zeros
            .iter()
            .find(|z| same_point(z.point, a))
            .map_or(0, |z| z.mult)
    }

    /// `self | v`: the zero multiset of `self` is contained in that of `v`.
    pub fn divides(&self, v: &InnerFunction) -> bool {
        self.zeros.iter().all(|z| z.mult <= v.multiplicity_at(z.point))
    }

    pub fn gcd(&self, v: &InnerFunction) -> InnerFunction {
        let zeros = self
            .zeros
            .iter()
            .map(|z| Zero { point: z.point, mult: z.mult.min(v.multiplicity_at(z.point)) })
            .collect();
        Self::from_sorted(zeros)
    }

    /// Least common multiple. The degree cap is only enforced when parsing or
    /// constructing from raw zeros.
    pub fn lcm(&self, v: &InnerFunction) -> InnerFunction {
        self.combine(v, u32::max)
    }

    /// Product `self * v` (multiset union).
    pub fn mul(&self, v: &InnerFunction) -> InnerFunction {
        self.combine(v, |a, b| a + b)
    }

    /// `self^k`.
    pub fn pow(&self, k: u32) -> InnerFunction {
        let zeros = self
            .zeros
            .iter()
            .map(|z| Zero { point: z.point, mult: z.mult * k })
            .collect();
        Self::from_sorted(zeros)
    }

    fn combine(&self, v: &InnerFunction, f: impl Fn(u32, u32) -> u32) -> InnerFunction {
        let mut zeros: Vec<Zero> = self
            .zeros
            .iter()
            .map(|z| Zero { point: z.point, mult: f(z.mult, v.multiplicity_at(z.point)) })
            .collect();
        for z in &v.zeros {
            if self.multiplicity_at(z.point) == 0 {
                zeros.push(Zero { point: z.point, mult: f(0, z.mult) });
            }
        }
        Self::from_sorted(zeros)
    }

    /// `self / u`, defined when `u | self`.
    pub fn quotient(&self, u: &InnerFunction) -> Result<InnerFunction> {
        if !u.divides(self) {
            return Err(Error::NotADivisor { divisor: u.to_string(), dividend: self.to_string() });
        }
        let zeros = self
            .zeros
            .iter()
            .map(|z| Zero { point: z.point, mult: z.mult - u.multiplicity_at(z.point) })
            .collect();
        Ok(Self::from_sorted(zeros))
    }

    /// Value at a point of the open unit disc.
    pub fn evaluate(&self, w: C64) -> Result<C64> {
        if w.norm() >= 1.0 {
            return Err(Error::OutsideDisc { modulus: w.norm() });
        }
        Ok(self.zeros.iter().fold(C64::new(1.0, 0.0), |acc, z| {
            let factor = (w - z.point) / (C64::new(1.0, 0.0) - z.point.conj() * w);
            acc * factor.powu(z.mult)
        }))
    }

    /// All inner divisors, one per sub-multiset of the zeros.
    pub fn divisors(&self) -> Vec<InnerFunction> {
        let mut out = vec![InnerFunction::one()];
        for z in &self.zeros {
            let mut next = Vec::with_capacity(out.len() * (z.mult as usize + 1));
            for d in &out {
                for k in 0..=z.mult {
                    let mut zeros = d.zeros.clone();
                    zeros.push(Zero { point: z.point, mult: k });
                    next.push(Self::from_sorted(zeros));
                }
            }
            out = next;
        }
        out
    }
}

/// Structural equality after normalization: same zero multiset.
impl PartialEq for InnerFunction {
    fn eq(&self, other: &Self) -> bool {
        self.degree() == other.degree() && self.divides(other)
    }
}

fn fmt_real(x: f64) -> String {
    format!("{}", x)
}

impl fmt::Display for InnerFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zeros.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .zeros
            .iter()
            .map(|z| {
                let base = if z.point.norm() <= MATCH_TOL {
                    "z".to_string()
                } else if z.point.im == 0.0 {
                    format!("b({})", fmt_real(z.point.re))
                } else {
                    let sign = if z.point.im < 0.0 { '-' } else { '+' };
                    format!("b({}{}{}i)", fmt_real(z.point.re), sign, fmt_real(z.point.im.abs()))
                };
                if z.mult == 1 {
                    base
                } else {
                    format!("{}^{}", base, z.mult)
                }
            })
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ZeroRepr {
    re: f64,
    im: f64,
    mult: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct InnerFunctionRepr {
    zeros: Vec<ZeroRepr>,
}

impl TryFrom<InnerFunctionRepr> for InnerFunction {
    type Error = Error;

    fn try_from(repr: InnerFunctionRepr) -> Result<Self> {
        InnerFunction::new(repr.zeros.into_iter().map(|z| (C64::new(z.re, z.im), z.mult)))
    }
}

impl From<InnerFunction> for InnerFunctionRepr {
    fn from(u: InnerFunction) -> Self {
        InnerFunctionRepr {
            zeros: u
                .zeros
                .iter()
                .map(|z| ZeroRepr { re: z.point.re, im: z.point.im, mult: z.mult })
                .collect(),
        }
    }
}
