//! Closed-form dimension counts.

use std::collections::BTreeMap;

use num_bigint::BigUint;

use crate::engine::{AdmissibilityClass, Family};

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The Catalan number `C(n) = binom(2n, n) / (n + 1)`.
pub fn catalan(n: u64) -> BigUint {
    binomial(2 * n, n) / (n + 1)
}

fn small(x: BigUint) -> usize {
    usize::try_from(x).expect("count fits in usize")
}

/// Expected number of basis diagrams in each class.
pub fn expected_class_counts(family: Family, rank: usize) -> BTreeMap<AdmissibilityClass, usize> {
    let n = rank as u64;
    let c = small(catalan(n));
    let central = small(binomial(2 * n, n));
    let mut out = BTreeMap::new();
    match family {
        Family::TL => {
            out.insert(AdmissibilityClass::TLPlain, c);
        }
        Family::Blob => {
            out.insert(AdmissibilityClass::BlobDiagram, central);
        }
        Family::TypeB => {
            out.insert(AdmissibilityClass::B1, c);
            out.insert(AdmissibilityClass::B1prime, c - 1);
            out.insert(AdmissibilityClass::B2, central - c);
        }
        Family::TypeD => {
            out.insert(AdmissibilityClass::D1, c - 1);
            out.insert(AdmissibilityClass::D2, central / 2);
        }
        Family::DQuotient => {
            out.insert(AdmissibilityClass::D2, central / 2);
        }
    }
    out
}

/// Expected dimension, written as the published totals rather than as the
/// sum of the class counts.
pub fn expected_dimension(family: Family, rank: usize) -> usize {
    let n = rank as u64;
    let c = small(catalan(n));
    let central = small(binomial(2 * n, n));
    match family {
        Family::TL => c,
        Family::Blob => central,
        Family::TypeB => (rank + 2) * c - 1,
        // ((n + 3) / 2) C(n) - 1, kept exact when n is even
        Family::TypeD => (rank + 3) * c / 2 - 1,
        Family::DQuotient => central / 2,
    }
}
