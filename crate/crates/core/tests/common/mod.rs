#![allow(dead_code)]

use std::collections::BTreeSet;

/// Positive roots by unbroken α-strings, starting from the simple roots.
pub fn string_roots(cartan: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    let n = cartan.len();
    let mut roots: BTreeSet<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut layer: Vec<Vec<i64>> = roots.iter().cloned().collect();
    while !layer.is_empty() {
        let mut next = BTreeSet::new();
        for b in &layer {
            for i in 0..n {
                let pairing: i64 = (0..n).map(|j| b[j] * cartan[i][j]).sum();
                let mut p = 0;
                let mut down = b.clone();
                loop {
                    down[i] -= 1;
                    if !roots.contains(&down) {
                        break;
                    }
                    p += 1;
                }
                if p - pairing > 0 {
                    let mut up = b.clone();
                    up[i] += 1;
                    next.insert(up);
                }
            }
        }
        roots.extend(next.iter().cloned());
        layer = next.into_iter().collect();
    }
    roots
}

/// lcm of the coefficients of the highest root found by [`string_roots`].
pub fn saturation_factor(cartan: &[Vec<i64>]) -> i64 {
    use num_integer::Integer;
    let roots = string_roots(cartan);
    let highest = roots.iter().max_by_key(|r| r.iter().sum::<i64>()).expect("nonempty");
    highest.iter().fold(1i64, |a, &c| a.lcm(&c))
}
