use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{compose_unchecked, invariant_factors, reduced_forms, Discriminant, FormClass};
use crate::arith::factor;
use crate::error::{Error, Result};

/// Largest `|D|` for which [`class_group`] enumerates reduced forms.
pub const ENUMERATION_BOUND: u64 = 1 << 32;

/// Structure of `Cl(D)` as a chain of invariant factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassGroupStructure {
    pub discriminant: i64,
    pub h: u64,
    /// `d_1 | d_2 | ... | d_k`, each `> 1`. Empty for the trivial group.
    pub divisors: Vec<u64>,
    /// Largest power of two dividing `h`.
    pub h2: u64,
    pub two_rank: u32,
}

impl ClassGroupStructure {
    pub fn from_divisors(discriminant: i64, divisors: Vec<u64>) -> Self {
        let h: u64 = divisors.iter().product();
        ClassGroupStructure {
            discriminant,
            h,
            h2: 1 << h.trailing_zeros(),
            two_rank: divisors.iter().filter(|&&d| d % 2 == 0).count() as u32,
            divisors,
        }
    }

    /// `log2` of the 2-class number.
    pub fn log2_h2(&self) -> u32 {
        self.h2.trailing_zeros()
    }

    pub fn is_cyclic(&self) -> bool {
        self.divisors.len() <= 1
    }
}

/// Anything that can produce class group structures: direct enumeration, or a
/// cache in front of it.
pub trait ClassGroupOracle: Sync {
    fn class_group(&self, d: &Discriminant) -> Result<ClassGroupStructure>;
}

/// The enumeration engine with no caching.
#[derive(Debug, Clone, Copy, Default)]
pub struct Enumeration;

impl ClassGroupOracle for Enumeration {
    fn class_group(&self, d: &Discriminant) -> Result<ClassGroupStructure> {
        class_group(d)
    }
}

/// Computes `Cl(D)` for a fundamental `D` with `|D| <= 2^32`.
///
/// All reduced forms are enumerated; a generating set is then built greedily.
/// Each new generator `g` gets the least `m` with `g^m` in the subgroup spanned
/// so far, recorded as a relation, and the invariant factors come from the
/// Smith normal form of the relation matrix.
pub fn class_group(d: &Discriminant) -> Result<ClassGroupStructure> {
    if !d.is_fundamental() {
        return Err(Error::NotFundamental(d.value()));
    }
    let abs_d = d.value().unsigned_abs();
    if abs_d > ENUMERATION_BOUND {
        return Err(Error::EnumerationBoundExceeded { d: abs_d, bound: ENUMERATION_BOUND });
    }
    let forms = reduced_forms(d);

    // subgroup element -> exponent vector over the generators found so far
    let mut span: HashMap<FormClass, Vec<i64>> = HashMap::with_capacity(forms.len());
    span.insert(FormClass::principal(d), Vec::new());
    let mut relations: Vec<Vec<i64>> = Vec::new();

    for g in &forms {
        if span.len() == forms.len() {
            break;
        }
        if span.contains_key(g) {
            continue;
        }
        let mut power = *g;
        let mut m = 1i64;
        while !span.contains_key(&power) {
            power = compose_unchecked(&power, g);
            m += 1;
        }
        let mut row: Vec<i64> = span[&power].iter().map(|&e| -e).collect();
        row.push(m);
        relations.push(row);

        let base: Vec<(FormClass, Vec<i64>)> = span.drain().collect();
        let mut layer = base.clone();
        for j in 0..m {
            for (x, exps) in &layer {
                let mut e = exps.clone();
                e.push(j);
                span.insert(*x, e);
            }
            if j + 1 < m {
                for (x, _) in layer.iter_mut() {
                    *x = compose_unchecked(x, g);
                }
            }
        }
    }
    debug_assert_eq!(span.len(), forms.len());

    let k = relations.len();
    for row in relations.iter_mut() {
        row.resize(k, 0);
    }
    let divisors = invariant_factors(&relations);
    let structure = ClassGroupStructure::from_divisors(d.value(), divisors);
    assert_eq!(structure.h as usize, forms.len(), "invariant factors disagree with the form count for D = {d}");
    Ok(structure)
}

/// Genus-theory 2-rank of `Cl(D)`: the number of distinct primes dividing `D`, minus one.
pub fn genus_two_rank(d: &Discriminant) -> u32 {
    factor(d.value().unsigned_abs()).len() as u32 - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qforms::compose;

    fn cl(d: i64) -> ClassGroupStructure {
        class_group(&Discriminant::fundamental(d).unwrap()).unwrap()
    }

    #[test]
    fn class_group_examples() {
        let g = cl(-55);
        assert_eq!((g.h, g.divisors.clone(), g.h2), (4, vec![4], 4));
        assert_eq!(cl(-712).h2, 8);
        let g = cl(-407);
        assert_eq!((g.h, g.h2), (16, 16));
        let g = cl(-4);
        assert_eq!((g.h, g.divisors.len(), g.h2, g.two_rank), (1, 0, 1, 0));
        assert_eq!(cl(-84).divisors, vec![2, 2]);
        assert_eq!(cl(-420).divisors, vec![2, 2, 2]);
        assert_eq!(cl(-247).h2, 2);
        assert_eq!(cl(-95).h2, 8);
    }

    #[test]
    fn class_group_errors() {
        let d = Discriminant::new(-12).unwrap();
        assert_eq!(class_group(&d), Err(Error::NotFundamental(-12)));
        let big = Discriminant::fundamental(-(1i64 << 33) - 1)
            .unwrap_or_else(|_| Discriminant::fundamental(-8589934603).unwrap());
        assert!(matches!(class_group(&big), Err(Error::EnumerationBoundExceeded { .. })));
    }

    #[test]
    fn genus_two_rank_examples() {
        assert_eq!(genus_two_rank(&Discriminant::fundamental(-712).unwrap()), 1);
        assert_eq!(genus_two_rank(&Discriminant::fundamental(-1672).unwrap()), 2);
        assert_eq!(genus_two_rank(&Discriminant::fundamental(-3).unwrap()), 0);
    }

    /// Element orders of the abstract group Z/d_1 x ... x Z/d_k.
    fn abstract_orders(divisors: &[u64]) -> Vec<u64> {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        let mut orders = vec![1u64];
        for &d in divisors {
            let mut next = Vec::new();
            for &o in &orders {
                for x in 0..d {
                    let ox = d / gcd(x, d);
                    next.push(o / gcd(o, ox) * ox);
                }
            }
            orders = next;
        }
        orders.sort_unstable();
        orders
    }

    #[test]
    fn element_orders_match_divisor_chain() {
        for d in [-84i64, -420, -3315, -5460, -9867, -15, -4199, -11715, -13195] {
            let disc = Discriminant::fundamental(d).unwrap();
            let g = class_group(&disc).unwrap();
            let mut orders: Vec<u64> = reduced_forms(&disc).iter().map(FormClass::order).collect();
            orders.sort_unstable();
            assert_eq!(orders, abstract_orders(&g.divisors), "D = {d}");
            assert!(orders.iter().all(|o| g.h % o == 0));
        }
    }

    #[test]
    fn group_axioms_small() {
        let disc = Discriminant::fundamental(-3315).unwrap();
        let forms = reduced_forms(&disc);
        for x in &forms {
            for y in &forms {
                let xy = compose(x, y).unwrap();
                assert_eq!(xy, compose(y, x).unwrap());
                for z in forms.iter().step_by(3) {
                    assert_eq!(compose(&xy, z).unwrap(), compose(x, &compose(y, z).unwrap()).unwrap());
                }
            }
        }
    }
}
