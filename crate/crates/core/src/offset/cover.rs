//! Prime covers: sets of primes under which every non-wildcard pattern
//! index lands in a wildcard-free residue class.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::partition::ceil_log2;

pub const MAX_RESAMPLE_ROUNDS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeCover {
    pub primes: Vec<usize>,
    /// For each pattern index, a prime whose residue class of that index is
    /// wildcard-free; `None` at wildcards.
    pub witness: Vec<Option<usize>>,
    pub seed: u64,
    /// Sampling rounds consumed; zero when the cover was chosen directly.
    pub resample_rounds: usize,
}

impl PrimeCover {
    pub fn max_prime(&self) -> usize {
        self.primes.iter().copied().max().unwrap_or(0)
    }
}

/// Primes up to and including `n`.
pub fn primes_up_to(n: usize) -> Vec<usize> {
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Smallest prime `>= n`.
pub fn next_prime(n: usize) -> usize {
    (n.max(2)..).find(|&k| is_prime(k)).unwrap()
}

/// Witnesses for `primes`, or `None` if some non-wildcard index is uncovered.
pub fn verify_cover(m: usize, wildcards: &[usize], primes: &[usize]) -> Option<Vec<Option<usize>>> {
    let bad: Vec<Vec<bool>> = primes
        .iter()
        .map(|&q| {
            let mut bad = vec![false; q];
            for &w in wildcards {
                bad[w % q] = true;
            }
            bad
        })
        .collect();
    let mut is_wild = vec![false; m];
    for &w in wildcards {
        is_wild[w] = true;
    }
    (0..m)
        .map(|j| {
            if is_wild[j] {
                return Some(None);
            }
            primes
                .iter()
                .zip(&bad)
                .find(|(&q, bad)| !bad[j % q])
                .map(|(&q, _)| Some(q))
        })
        .collect()
}

/// Samples `2 ceil(log2 m)` primes below `2 d ceil(log2 m)^2` until they
/// cover the pattern, falling back to the smallest prime `>= m`.
pub fn build_prime_cover(m: usize, wildcards: &[usize], seed: u64) -> PrimeCover {
    assert!(m >= 1);
    let d = wildcards.len();
    let single = |q: usize, rounds: usize| PrimeCover {
        witness: verify_cover(m, wildcards, &[q]).expect("a single prime covers here"),
        primes: vec![q],
        seed,
        resample_rounds: rounds,
    };
    if d == 0 {
        return single(2, 0);
    }
    let log = ceil_log2(m);
    let sample_bound = 2 * d * log * log;
    let fallback = next_prime(m);
    let want = 2 * log;
    if sample_bound >= fallback || want == 0 {
        return single(fallback, 0);
    }
    let pool = primes_up_to(sample_bound);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for round in 1..=MAX_RESAMPLE_ROUNDS {
        let mut primes: Vec<usize> = pool
            .choose_multiple(&mut rng, want.min(pool.len()))
            .copied()
            .collect();
        primes.sort_unstable();
        if let Some(witness) = verify_cover(m, wildcards, &primes) {
            return PrimeCover {
                primes,
                witness,
                seed,
                resample_rounds: round,
            };
        }
    }
    single(fallback, MAX_RESAMPLE_ROUNDS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_and_next_prime() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert!(primes_up_to(1).is_empty());
        assert_eq!(next_prime(1), 2);
        assert_eq!(next_prime(12), 13);
        assert_eq!(next_prime(13), 13);
    }

    #[test]
    fn hand_checked_cover() {
        // residues of {2,8}: mod 5 -> {2,3}, mod 7 -> {2,1}
        let w = verify_cover(12, &[2, 8], &[5, 7]).unwrap();
        assert_eq!(w[3], Some(7));
        assert_eq!(w[0], Some(5));
        assert_eq!(w[2], None);
        assert!(verify_cover(12, &[2, 8], &[2]).is_none());
    }

    #[test]
    fn no_wildcards_single_prime() {
        let c = build_prime_cover(40, &[], 1);
        assert_eq!(c.primes, vec![2]);
        assert!(c.witness.iter().all(Option::is_some));
    }

    #[test]
    fn small_pattern_falls_back() {
        let c = build_prime_cover(3, &[1], 9);
        assert_eq!(c.primes, vec![3]);
        assert_eq!(c.witness, vec![Some(3), None, Some(3)]);
    }

    #[test]
    fn sampled_cover_is_verified() {
        let wild = [3, 100, 517, 900];
        let c = build_prime_cover(1000, &wild, 5);
        assert!(c.primes.len() <= 20);
        assert!(c.max_prime() <= 2 * 4 * 100);
        assert_eq!(verify_cover(1000, &wild, &c.primes).unwrap(), c.witness);
        assert_eq!(build_prime_cover(1000, &wild, 5), c);
    }
}
