//! Partition enumeration and coefficient identities against independent
//! counting oracles.

use std::collections::HashSet;

use iid_moments::combinatorics::enumerate_partitions_with_cap;
use iid_moments::{coefficient, enumerate_partitions, falling_factorial, Partition};
use num_bigint::BigInt;

/// Partition numbers from Euler's pentagonal recurrence.
fn partition_numbers(max: usize) -> Vec<u64> {
    let mut p = vec![0i64; max + 1];
    p[0] = 1;
    for i in 1..=max as i64 {
        let mut k = 1i64;
        let mut acc = 0i64;
        loop {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > i {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc += sign * p[(i - g1) as usize];
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= i {
                acc += sign * p[(i - g2) as usize];
            }
            k += 1;
        }
        p[i as usize] = acc;
    }
    p.into_iter().map(|v| v as u64).collect()
}

#[test]
fn counts_match_pentagonal_recurrence() {
    let expected = partition_numbers(30);
    assert_eq!(expected[6], 11);
    for p in 1..=30u32 {
        assert_eq!(enumerate_partitions(p).unwrap().len() as u64, expected[p as usize], "p={p}");
    }
}

#[test]
fn every_partition_once_and_valid() {
    for p in 1..=20u32 {
        let all = enumerate_partitions(p).unwrap();
        let distinct: HashSet<_> = all.iter().cloned().collect();
        assert_eq!(distinct.len(), all.len());
        for part in &all {
            assert_eq!(part.order(), p);
            assert!(part.parts().windows(2).all(|w| w[0] >= w[1]));
            assert_eq!(Partition::new(part.parts().to_vec()).unwrap(), *part);
        }
    }
}

#[test]
fn configurable_cap() {
    assert!(enumerate_partitions_with_cap(12, 10).is_err());
    assert_eq!(enumerate_partitions_with_cap(12, 12).unwrap().len(), 77);
}

/// Setting every moment to 1 makes `S_n = n`, so the coefficients of order
/// `p` must add up to `n^p`.
#[test]
fn coefficients_sum_to_n_to_the_p() {
    for p in 1..=12u32 {
        let coeffs: Vec<_> = enumerate_partitions(p)
            .unwrap()
            .iter()
            .map(|part| coefficient(part).unwrap())
            .collect();
        for n in 1..=8u64 {
            let total: BigInt = coeffs.iter().map(|a| a.eval_u64(n)).sum();
            assert_eq!(total, BigInt::from(n).pow(p), "p={p} n={n}");
        }
    }
}

/// Direct count of the ordered tuples in `{1..n}^p` whose multiset of
/// per-index exponents equals `part`.
fn tuple_count(part: &Partition, n: u32) -> u64 {
    let p = part.order();
    let mut want = part.parts().to_vec();
    want.sort_unstable();
    let mut count = 0;
    let total = (n as u64).pow(p);
    for code in 0..total {
        let mut c = code;
        let mut hits = vec![0u32; n as usize];
        for _ in 0..p {
            hits[(c % n as u64) as usize] += 1;
            c /= n as u64;
        }
        let mut got: Vec<u32> = hits.into_iter().filter(|&h| h > 0).collect();
        got.sort_unstable();
        if got == want {
            count += 1;
        }
    }
    count
}

#[test]
fn coefficient_counts_index_tuples() {
    for p in 1..=6u32 {
        for part in enumerate_partitions(p).unwrap() {
            let a = coefficient(&part).unwrap();
            for n in 1..=5u32 {
                assert_eq!(a.eval_u64(n as u64), BigInt::from(tuple_count(&part, n)), "{part} n={n}");
            }
        }
    }
}

#[test]
fn falling_factorial_matches_product() {
    for m in 0..=10u32 {
        let f = falling_factorial(m);
        for n in 0..=12i64 {
            let direct: i64 = (0..m as i64).map(|i| n - i).product();
            assert_eq!(f.eval(&BigInt::from(n)), BigInt::from(direct));
        }
    }
}
