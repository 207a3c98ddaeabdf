//! Positive definite binary quadratic forms and the class groups of imaginary
//! quadratic fields.
//!
//! A form `(a, b, c)` stands for `a x^2 + b xy + c y^2` with discriminant
//! `b^2 - 4ac < 0`. Reduced forms are in bijection with the ideal classes of
//! the quadratic order of that discriminant; Gauss composition realizes the
//! group law.

mod group;
mod snf;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{ext_gcd, gcd, gcd_i64, is_squarefree, SQUAREFREE_BOUND};
use crate::error::{Error, Result};

pub use group::{class_group, genus_two_rank, ClassGroupOracle, ClassGroupStructure, Enumeration, ENUMERATION_BOUND};
pub use snf::invariant_factors;

/// A negative quadratic discriminant `D = 0, 1 (mod 4)` with `|D| < 2^40`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct Discriminant {
    value: i64,
    fundamental: bool,
}

impl Discriminant {
    pub fn new(d: i64) -> Result<Self> {
        if d >= 0 {
            return Err(Error::InvalidInput(format!("discriminant must be negative, got {d}")));
        }
        if d.unsigned_abs() >= SQUAREFREE_BOUND {
            return Err(Error::InvalidInput(format!("|D| must be below 2^40, got {d}")));
        }
        if !matches!(d.rem_euclid(4), 0 | 1) {
            return Err(Error::InvalidInput(format!("{d} is not 0 or 1 mod 4")));
        }
        let fundamental = if d.rem_euclid(4) == 1 {
            is_squarefree(d)
        } else {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m)
        };
        Ok(Discriminant { value: d, fundamental })
    }

    /// Accepts only fundamental discriminants.
    pub fn fundamental(d: i64) -> Result<Self> {
        let disc = Discriminant::new(d)?;
        if !disc.fundamental {
            return Err(Error::NotFundamental(d));
        }
        Ok(disc)
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    pub fn is_fundamental(&self) -> bool {
        self.fundamental
    }
}

impl TryFrom<i64> for Discriminant {
    type Error = Error;

    fn try_from(d: i64) -> Result<Self> {
        Discriminant::new(d)
    }
}

impl From<Discriminant> for i64 {
    fn from(d: Discriminant) -> i64 {
        d.value
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Field discriminant of `Q(sqrt(m))` for a negative squarefree `m`.
pub fn discriminant_of(m: i64) -> Result<Discriminant> {
    if m >= 0 {
        return Err(Error::InvalidInput(format!("expected a negative integer, got {m}")));
    }
    if !is_squarefree(m) {
        return Err(Error::NotSquarefree(m));
    }
    let d = if m.rem_euclid(4) == 1 {
        m
    } else {
        m.checked_mul(4).ok_or_else(|| Error::InvalidInput(format!("4*{m} overflows")))?
    };
    Discriminant::fundamental(d)
}

/// An arbitrary (not necessarily reduced) integral binary quadratic form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Form {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Form {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Form { a, b, c }
    }

    pub fn discriminant(&self) -> i128 {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        b * b - 4 * a * c
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        a > 0 && b.abs() <= a && a <= c && !(b < 0 && (b.abs() == a || a == c))
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// A reduced positive definite form: the canonical representative of its class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormClass {
    a: i64,
    b: i64,
    c: i64,
}

impl FormClass {
    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn form(&self) -> Form {
        Form::new(self.a, self.b, self.c)
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// The identity class `(1, 0, -D/4)` or `(1, 1, (1-D)/4)`.
    pub fn principal(d: &Discriminant) -> FormClass {
        let d = d.value();
        if d.rem_euclid(4) == 0 {
            FormClass { a: 1, b: 0, c: -d / 4 }
        } else {
            FormClass { a: 1, b: 1, c: (1 - d) / 4 }
        }
    }

    pub fn is_principal(&self) -> bool {
        self.a == 1
    }

    pub fn inverse(&self) -> FormClass {
        reduce_wide(self.a as i128, -(self.b as i128), self.c as i128)
    }

    pub fn pow(&self, mut e: u64) -> FormClass {
        let mut acc = FormClass::principal(&Discriminant { value: self.discriminant(), fundamental: false });
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = compose_unchecked(&acc, &base);
            }
            base = compose_unchecked(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Order in the class group, by repeated composition.
    pub fn order(&self) -> u64 {
        let mut x = *self;
        let mut n = 1;
        while !x.is_principal() {
            x = compose_unchecked(&x, self);
            n += 1;
        }
        n
    }
}

impl fmt::Display for FormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Gauss reduction of a positive definite form.
pub fn reduce(f: Form) -> Result<FormClass> {
    if f.discriminant() >= 0 {
        return Err(Error::IndefiniteForm { a: f.a, b: f.b, c: f.c });
    }
    if f.a <= 0 {
        return Err(Error::InvalidInput(format!("form {f} has non-positive leading coefficient")));
    }
    Ok(reduce_wide(f.a as i128, f.b as i128, f.c as i128))
}

fn reduce_wide(mut a: i128, mut b: i128, mut c: i128) -> FormClass {
    debug_assert!(a > 0 && b * b - 4 * a * c < 0);
    loop {
        // bring b into (-a, a]
        if b <= -a || b > a {
            let two_a = 2 * a;
            let r = (a - b).div_euclid(two_a);
            c += r * (a * r + b);
            b += r * two_a;
        }
        if a > c {
            (a, b, c) = (c, -b, a);
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        return FormClass { a: a as i64, b: b as i64, c: c as i64 };
    }
}

/// Gauss composition of two classes of the same discriminant.
pub fn compose(f: &FormClass, g: &FormClass) -> Result<FormClass> {
    let (df, dg) = (f.discriminant(), g.discriminant());
    if df != dg {
        return Err(Error::MismatchedDiscriminant(df, dg));
    }
    Ok(compose_unchecked(f, g))
}

pub(crate) fn compose_unchecked(f: &FormClass, g: &FormClass) -> FormClass {
    let d = f.discriminant() as i128;
    let (a1, b1) = (f.a as i128, f.b as i128);
    let (a2, b2) = (g.a as i128, g.b as i128);
    let beta = (b1 + b2) / 2;
    let (g1, x1, y1) = ext_gcd(a1, a2);
    let (e, x2, y2) = ext_gcd(g1, beta);
    // mu*a1 + nu*a2 + omega*beta = e
    let (mu, nu, omega) = (x2 * x1, x2 * y1, y2);
    let a3 = a1 * a2 / (e * e);
    let b3 = (mu * a1 * b2 + nu * a2 * b1 + omega * (b1 * b2 + d) / 2) / e;
    let b3 = b3.rem_euclid(2 * a3);
    let num = b3 * b3 - d;
    debug_assert_eq!(num % (4 * a3), 0);
    reduce_wide(a3, b3, num / (4 * a3))
}

/// All reduced primitive forms of discriminant `D`, ordered by `(a, b)`.
pub fn reduced_forms(d: &Discriminant) -> Vec<FormClass> {
    let dv = d.value();
    let abs_d = dv.unsigned_abs();
    let mut out = Vec::new();
    let mut a: i64 = 1;
    while 3 * (a as u64) * (a as u64) <= abs_d {
        let four_a = 4 * a;
        // b has the parity of D
        let start = if dv.rem_euclid(2) == 0 { 0 } else { 1 };
        let mut b = start;
        while b <= a {
            let num = b * b - dv;
            if num % four_a == 0 {
                let c = num / four_a;
                if c >= a && gcd(gcd_i64(a, b), c as u64) == 1 {
                    out.push(FormClass { a, b, c });
                    if b != 0 && b != a && a != c {
                        out.push(FormClass { a, b: -b, c });
                    }
                }
            }
            b += 2;
        }
        a += 1;
    }
    out.sort_unstable();
    out
}
