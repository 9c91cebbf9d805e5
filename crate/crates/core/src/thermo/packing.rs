//! Exact counts of disjoint `{i, i + y}` pair placements on `L` sites.

use std::collections::HashMap;

/// Number of ways to place `m` disjoint pairs `{i, i + y}` on sites `1..=L`.
pub fn count_packings(sites: usize, y: usize, m: usize) -> u128 {
    packing_counts(sites, y).get(m).copied().unwrap_or(0)
}

/// Counts for every `m`, indexed by `m` (trailing zeros trimmed).
///
/// Sites are scanned in order; the state remembers which of the previous
/// `y` sites opened a pair that still needs its upper partner.
pub fn packing_counts(sites: usize, y: usize) -> Vec<u128> {
    if y == 0 || y >= sites.max(1) {
        return vec![1];
    }
    // mask bit k: site (i - y + k) is an open lower end
    let mut table: HashMap<u64, Vec<u128>> = HashMap::from([(0, vec![1])]);
    for i in 1..=sites {
        let mut next: HashMap<u64, Vec<u128>> = HashMap::new();
        for (mask, counts) in table {
            let must_close = mask & 1 == 1;
            let shifted = mask >> 1;
            let mut push = |key: u64, bump: usize| {
                let slot = next.entry(key).or_default();
                if slot.len() < counts.len() + bump {
                    slot.resize(counts.len() + bump, 0);
                }
                for (m, c) in counts.iter().enumerate() {
                    slot[m + bump] += c;
                }
            };
            if must_close {
                push(shifted, 1);
            } else {
                push(shifted, 0);
                if i + y <= sites {
                    push(shifted | 1 << (y - 1), 0);
                }
            }
        }
        table = next;
    }
    let mut out = table.remove(&0).unwrap_or_else(|| vec![1]);
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    out
}

/// Largest admissible `m`.
pub fn max_packings(sites: usize, y: usize) -> usize {
    if y == 0 || y >= sites {
        return 0;
    }
    residue_class_sizes(sites, y).iter().map(|n| n / 2).sum()
}

/// Sizes of the residue classes of `1..=L` modulo `y`; each class is a path
/// whose edges are the admissible pairs.
pub fn residue_class_sizes(sites: usize, y: usize) -> Vec<usize> {
    (0..y).map(|r| (sites - r).div_ceil(y)).collect()
}

/// Counts from the path decomposition: a path on `n` vertices has
/// `C(n - k, k)` matchings of size `k`; classes are independent.
pub fn packing_counts_by_paths(sites: usize, y: usize) -> Vec<u128> {
    if y == 0 || y >= sites {
        return vec![1];
    }
    let mut total = vec![1u128];
    for n in residue_class_sizes(sites, y) {
        let path: Vec<u128> = (0..=n / 2).map(|k| binomial((n - k) as u128, k as u128)).collect();
        let mut conv = vec![0u128; total.len() + path.len() - 1];
        for (i, a) in total.iter().enumerate() {
            for (j, b) in path.iter().enumerate() {
                conv[i + j] += a * b;
            }
        }
        total = conv;
    }
    total
}

pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Left-aligned maximal placement: along each residue class, pair the first
/// two sites, then the next two, and so on. Returns `(hole, electron)` pairs
/// with the electron at the larger index.
pub fn left_aligned_packing(sites: usize, y: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    if y == 0 || y >= sites {
        return pairs;
    }
    for start in 1..=y {
        let class: Vec<usize> = (start..=sites).step_by(y).collect();
        for chunk in class.chunks_exact(2) {
            pairs.push((chunk[0], chunk[1]));
        }
    }
    pairs.sort_unstable();
    pairs
}
