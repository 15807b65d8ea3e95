//! Ordered splits of `0..n` into labelled subsets of fixed sizes.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One split of `0..n`. Each subset lists parent indices in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledPartition {
    pub subsets: Vec<Vec<usize>>,
}

impl LabeledPartition {
    pub fn cardinalities(&self) -> Vec<usize> {
        self.subsets.iter().map(Vec::len).collect()
    }

    pub fn subset(&self, i: usize) -> &[usize] {
        &self.subsets[i]
    }

    /// Parity of the permutation taking the parent order to the
    /// concatenation of the subsets, as `+1` or `-1`.
    pub fn sign<S: Scalar>(&self) -> S {
        S::sign(self.inversions() % 2 == 0)
    }

    pub fn inversions(&self) -> usize {
        let flat: Vec<usize> = self.subsets.iter().flatten().copied().collect();
        let mut inv = 0;
        for j in 0..flat.len() {
            for k in j + 1..flat.len() {
                if flat[j] > flat[k] {
                    inv += 1;
                }
            }
        }
        inv
    }
}

/// Two-subset sign, the form used in block-determinant expansions.
pub fn partition_sign<S: Scalar>(p: &LabeledPartition) -> Result<S> {
    if p.subsets.len() != 2 {
        return Err(Error::Invalid(format!(
            "partition_sign needs two subsets, got {}",
            p.subsets.len()
        )));
    }
    Ok(p.sign())
}

pub const MAX_SUBSETS: usize = 4;

/// Iterator over all splits of `0..n` with the given subset sizes.
///
/// Emission is lexicographic in subset I, then subset II within the
/// remainder, and so on; the last subset takes whatever is left.
#[derive(Debug, Clone)]
pub struct Partitions {
    n: usize,
    cards: Vec<usize>,
    // combination positions into each level's pool, one level per subset but the last
    combs: Vec<Vec<usize>>,
    done: bool,
}

pub fn enumerate_partitions(n: usize, cards: &[usize]) -> Result<Partitions> {
    if cards.iter().sum::<usize>() != n {
        return Err(Error::Cardinality {
            n,
            cards: cards.to_vec(),
        });
    }
    if cards.is_empty() || cards.len() > MAX_SUBSETS {
        return Err(Error::Invalid(format!(
            "between 1 and {MAX_SUBSETS} subsets supported, got {}",
            cards.len()
        )));
    }
    let levels = cards.len() - 1;
    let combs = (0..levels).map(|l| (0..cards[l]).collect()).collect();
    Ok(Partitions {
        n,
        cards: cards.to_vec(),
        combs,
        done: false,
    })
}

/// Splits of `0..n` into two subsets of every possible size, subset I size
/// ascending.
pub fn all_bipartitions(n: usize) -> impl Iterator<Item = LabeledPartition> {
    (0..=n).flat_map(move |k| enumerate_partitions(n, &[k, n - k]).expect("sizes sum to n"))
}

/// Number of splits, n! / ∏ cards!.
pub fn multinomial(cards: &[usize]) -> u128 {
    let mut total = 0usize;
    let mut acc: u128 = 1;
    for &k in cards {
        for j in 1..=k {
            total += 1;
            acc = acc * total as u128 / j as u128;
        }
    }
    acc
}

impl Partitions {
    fn pool_sizes(&self) -> Vec<usize> {
        let mut left = self.n;
        self.cards
            .iter()
            .map(|&k| {
                let p = left;
                left -= k;
                p
            })
            .collect()
    }

    fn current(&self) -> LabeledPartition {
        let mut pool: Vec<usize> = (0..self.n).collect();
        let mut subsets = Vec::with_capacity(self.cards.len());
        for comb in &self.combs {
            let chosen: Vec<usize> = comb.iter().map(|&p| pool[p]).collect();
            let mut rest = Vec::with_capacity(pool.len() - comb.len());
            let mut ci = 0;
            for (p, &v) in pool.iter().enumerate() {
                if ci < comb.len() && comb[ci] == p {
                    ci += 1;
                } else {
                    rest.push(v);
                }
            }
            subsets.push(chosen);
            pool = rest;
        }
        subsets.push(pool);
        LabeledPartition { subsets }
    }

    /// Advances one k-combination of `0..m` in lexicographic order.
    fn bump(comb: &mut [usize], m: usize) -> bool {
        let k = comb.len();
        for i in (0..k).rev() {
            if comb[i] < m - k + i {
                comb[i] += 1;
                for j in i + 1..k {
                    comb[j] = comb[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }

    fn advance(&mut self) {
        let pools = self.pool_sizes();
        for level in (0..self.combs.len()).rev() {
            if Self::bump(&mut self.combs[level], pools[level]) {
                for deeper in level + 1..self.combs.len() {
                    self.combs[deeper] = (0..self.cards[deeper]).collect();
                }
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for Partitions {
    type Item = LabeledPartition;

    fn next(&mut self) -> Option<LabeledPartition> {
        if self.done {
            return None;
        }
        let p = self.current();
        self.advance();
        Some(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn counts() {
        assert_eq!(enumerate_partitions(3, &[1, 2]).unwrap().count(), 3);
        assert_eq!(enumerate_partitions(4, &[2, 2]).unwrap().count(), 6);
        assert_eq!(enumerate_partitions(0, &[0, 0]).unwrap().count(), 1);
        assert_eq!(enumerate_partitions(5, &[1, 2, 0, 2]).unwrap().count(), 30);
        assert_eq!(all_bipartitions(4).count(), 16);
    }

    #[test]
    fn bad_cardinalities() {
        assert!(matches!(
            enumerate_partitions(3, &[1, 1]),
            Err(Error::Cardinality { n: 3, .. })
        ));
    }

    #[test]
    fn lexicographic_order() {
        let firsts: Vec<Vec<usize>> = enumerate_partitions(4, &[2, 2])
            .unwrap()
            .map(|p| p.subsets[0].clone())
            .collect();
        assert_eq!(
            firsts,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
    }

    #[test]
    fn signs() {
        let id = LabeledPartition {
            subsets: vec![vec![0, 1], vec![2]],
        };
        assert_eq!(partition_sign::<Rational>(&id).unwrap(), Rational::from_i64(1));
        let swap = LabeledPartition {
            subsets: vec![vec![1], vec![0]],
        };
        assert_eq!(partition_sign::<Rational>(&swap).unwrap(), Rational::from_i64(-1));
    }
}
