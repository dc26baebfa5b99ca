//! Maps between grafted and exotic forests: the forgetful map that erases
//! liana pairings, the expectation map that produces them by Gaussian
//! pairing, and the pairing count relating the two symmetry coefficients.

use crate::enumerate::perfect_pairings;
use crate::error::{ForestError, Result};
use crate::forest::{canonicalize_parts, sigma, Deco, Forest};
use crate::rational::q_one;
use crate::series::FormalSum;

/// Forgets the pairing: every liana end becomes a grafted vertex.
pub fn forget_lianas(f: &Forest) -> Forest {
    let parents: Vec<Option<u32>> = f.vertices().map(|v| f.parent(v).map(|p| p as u32)).collect();
    let decos: Vec<Deco> = f
        .vertices()
        .map(|v| match f.deco(v) {
            Deco::Liana(_) => Deco::Grafted,
            d => d,
        })
        .collect();
    canonicalize_parts(&parents, &decos).0
}

/// Expectation of a grafted forest: the sum over all perfect pairings of
/// its grafted vertices, each pairing contributing one exotic forest. Odd
/// grafted counts give zero. The coefficient of each exotic class is the
/// number of pairings landing in it.
pub fn expectation(f: &Forest) -> FormalSum {
    let grafted: Vec<usize> = f
        .vertices()
        .filter(|&v| f.deco(v) == Deco::Grafted)
        .collect();
    if grafted.len() % 2 != 0 {
        return FormalSum::zero();
    }
    let mut out = FormalSum::zero();
    for pairing in perfect_pairings(&grafted) {
        let parents: Vec<Option<u32>> =
            f.vertices().map(|v| f.parent(v).map(|p| p as u32)).collect();
        let mut decos: Vec<Deco> = f.vertices().map(|v| f.deco(v)).collect();
        for (label, (a, b)) in pairing.iter().enumerate() {
            decos[*a] = Deco::Liana(label as u32 + 1);
            decos[*b] = Deco::Liana(label as u32 + 1);
        }
        let (exotic, _) = canonicalize_parts(&parents, &decos);
        out.add_term(exotic, q_one());
    }
    out
}

/// Number of decorations refining `coarser` that are isomorphic to `finer`,
/// equal to `sigma(coarser) / sigma(finer)`.
///
/// The supported refinement is the liana pairing: `finer` may carry lianas
/// where `coarser` has grafted vertices, and must forget to `coarser`.
/// The value is computed both as the sigma ratio and by exhaustive pairing
/// enumeration; the two routes must agree.
pub fn pairing_count(finer: &Forest, coarser: &Forest) -> Result<u64> {
    let forgotten = forget_lianas(finer);
    if forgotten.key() != coarser.key() {
        return Err(ForestError::NotFiner);
    }
    let s_coarse = sigma(coarser);
    let s_fine = sigma(finer);
    if s_coarse % s_fine != 0 {
        return Err(ForestError::Precondition(format!(
            "sigma ratio {s_coarse}/{s_fine} is not an integer"
        )));
    }
    let ratio = s_coarse / s_fine;
    let by_enumeration = if finer.count_liana_ends() == 0 {
        // identical decorations: the only refinement is the decoration itself
        1
    } else {
        let coeff = expectation(coarser).coeff(finer.key());
        coeff
            .to_integer()
            .try_into()
            .map_err(|_| ForestError::Precondition("pairing count overflow".into()))?
    };
    if by_enumeration != ratio {
        return Err(ForestError::Precondition(format!(
            "pairing count mismatch for {}: ratio {ratio} vs enumeration {by_enumeration}",
            finer.key()
        )));
    }
    Ok(ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;
    use crate::text::parse;

    #[test]
    fn forget_examples() {
        let f = parse("b[1,1]").unwrap();
        assert_eq!(forget_lianas(&f).key(), "b[x,x]");
        let f = parse("b[1,2],b[2],1").unwrap();
        assert_eq!(forget_lianas(&f).key(), parse("b[x,x],b[x],x").unwrap().key());
        let f = parse("b[b,b]").unwrap();
        assert_eq!(forget_lianas(&f).key(), f.key());
    }

    #[test]
    fn expectation_of_displayed_tree() {
        let e = expectation(&parse("b[x,x,b[x,x]]").unwrap());
        assert_eq!(e.coeff(parse("b[1,1,b[2,2]]").unwrap().key()), qi(1));
        assert_eq!(e.coeff(parse("b[1,2,b[1,2]]").unwrap().key()), qi(2));
        assert_eq!(e.len(), 2);
    }

    #[test]
    fn expectation_of_odd_count_is_zero() {
        assert!(expectation(&parse("b[x]").unwrap()).is_zero());
    }

    #[test]
    fn expectation_of_two_isolated() {
        let e = expectation(&parse("b[x],b[x]").unwrap());
        assert_eq!(e.coeff(parse("b[1],b[1]").unwrap().key()), qi(1));
        assert_eq!(e.len(), 1);
    }

    #[test]
    fn pairing_count_worked_example() {
        let finer = parse("b[1,2,b[1,2]]").unwrap();
        let coarser = parse("b[x,x,b[x,x]]").unwrap();
        assert_eq!(pairing_count(&finer, &coarser).unwrap(), 2);
    }

    #[test]
    fn pairing_count_reflexive() {
        let f = parse("b[x,b]").unwrap();
        assert_eq!(pairing_count(&f, &f).unwrap(), 1);
    }

    #[test]
    fn pairing_count_rejects_unrelated() {
        let finer = parse("b[1,1]").unwrap();
        let coarser = parse("b[x,x,x,x]").unwrap();
        assert!(matches!(
            pairing_count(&finer, &coarser),
            Err(ForestError::NotFiner)
        ));
    }

    #[test]
    fn total_pairings_are_double_factorial() {
        // sum over exotic classes of the pairing count is (2n-1)!!
        for (key, expect) in [("b[x,x]", 1i64), ("b[x,x,x,x]", 3), ("b[x,x],x,x", 3)] {
            let g = parse(key).unwrap();
            let total: num::BigInt = expectation(&g).iter().map(|(_, c)| c.to_integer()).sum();
            assert_eq!(total, num::BigInt::from(expect), "total pairings of {key}");
        }
    }
}
