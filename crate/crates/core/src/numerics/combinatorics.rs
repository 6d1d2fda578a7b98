use num_bigint::BigUint;
use num_traits::One;

/// Exact binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    // acc = C(n - k + i, i) after step i, always an integer.
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    acc
}

const SMALL_PRIMES: [u64; 5] = [2, 3, 5, 7, 11];

/// The first `count` primes, from a sieve of Eratosthenes.
///
/// The sieve limit comes from `p_n < n (ln n + ln ln n)` for `n >= 6`; below
/// that a fixed table is used.
pub fn first_primes(count: usize) -> Vec<u64> {
    if count <= SMALL_PRIMES.len() {
        return SMALL_PRIMES[..count].to_vec();
    }
    let n = count as f64;
    let mut limit = (n * (n.ln() + n.ln().ln())).ceil() as usize + 1;
    loop {
        let primes = sieve(limit);
        if primes.len() >= count {
            return primes[..count].to_vec();
        }
        // Only reachable if the float estimate rounded badly.
        limit *= 2;
    }
}

fn sieve(limit: usize) -> Vec<u64> {
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// `π_d`: the product of the first `d - 1` primes. `d = 1` gives the empty
/// product.
pub fn primorial(d: u32) -> BigUint {
    first_primes(d.saturating_sub(1) as usize)
        .into_iter()
        .fold(BigUint::one(), |acc, p| acc * p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal_row(n: usize) -> Vec<BigUint> {
        let mut row = vec![BigUint::one()];
        for _ in 0..n {
            let mut next = vec![BigUint::one(); row.len() + 1];
            for i in 1..row.len() {
                next[i] = &row[i - 1] + &row[i];
            }
            row = next;
        }
        row
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(4, 1), BigUint::from(4u32));
        assert_eq!(binomial(17, 0), BigUint::one());
        assert_eq!(binomial(3, 5), BigUint::ZERO);
        assert_eq!(binomial(0, 0), BigUint::one());
        // Pascal-rule oracle for C(105, 6).
        let row = pascal_row(105);
        assert_eq!(row[6], BigUint::from(1_609_344_100u64));
        assert_eq!(binomial(105, 6), row[6]);
    }

    #[test]
    fn pascal_rule_exhaustive() {
        for n in 1..=64u64 {
            for k in 1..=n {
                assert_eq!(
                    binomial(n, k),
                    binomial(n - 1, k - 1) + binomial(n - 1, k),
                    "C({n},{k})"
                );
            }
        }
    }

    fn trial_division_primes(count: usize) -> Vec<u64> {
        let mut out = Vec::new();
        let mut x = 2u64;
        while out.len() < count {
            if (2..x)
                .take_while(|p| p * p <= x)
                .all(|p| !x.is_multiple_of(p))
            {
                out.push(x);
            }
            x += 1;
        }
        out
    }

    #[test]
    fn sieve_matches_trial_division() {
        for count in 0..200 {
            assert_eq!(
                first_primes(count),
                trial_division_primes(count),
                "count {count}"
            );
        }
    }

    #[test]
    fn primorial_examples() {
        assert_eq!(primorial(2), BigUint::from(2u32));
        assert_eq!(primorial(4), BigUint::from(30u32));
        let oracle = trial_division_primes(53)
            .into_iter()
            .fold(BigUint::one(), |a, p| a * p);
        assert_eq!(primorial(54), oracle);
        assert_eq!(first_primes(53).last(), Some(&241));
    }

    #[test]
    fn primorial_steps_by_next_prime() {
        let primes = trial_division_primes(100);
        for d in 2..=100u32 {
            assert_eq!(
                primorial(d + 1),
                primorial(d) * primes[d as usize - 1],
                "d = {d}"
            );
        }
    }
}
