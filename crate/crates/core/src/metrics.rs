//! Distances between finite point sets in the complex plane.

use alloc::vec::Vec;

use num_complex::Complex64;

/// Hausdorff distance; 0 for two empty sets, infinite if exactly one is empty.
pub fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    directed(a, b).max(directed(b, a))
}

fn directed(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .map(|x| b.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

/// Greedy one-to-one matching, closest pairs first: `(i, j, |a_i - b_j|)`
/// for every index of the shorter set.
pub fn nearest_matching(a: &[Complex64], b: &[Complex64]) -> Vec<(usize, usize, f64)> {
    let mut pairs: Vec<(f64, u32, u32)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            pairs.push(((x - y).norm(), i as u32, j as u32));
        }
    }
    pairs.sort_unstable_by(|p, q| p.0.total_cmp(&q.0));
    let mut used_a = alloc::vec![false; a.len()];
    let mut used_b = alloc::vec![false; b.len()];
    let mut left = a.len().min(b.len());
    let mut out = Vec::with_capacity(left);
    for (d, i, j) in pairs {
        if left == 0 {
            break;
        }
        let (i, j) = (i as usize, j as usize);
        if !used_a[i] && !used_b[j] {
            used_a[i] = true;
            used_b[j] = true;
            out.push((i, j, d));
            left -= 1;
        }
    }
    out
}

/// Largest pair distance of [`nearest_matching`]. Multiplicities count,
/// unlike [`hausdorff`]. Infinite when the sizes differ.
pub fn nearest_matching_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    nearest_matching(a, b).iter().fold(0.0, |m, p| m.max(p.2))
}

/// Matching distance between `values` and its image under `map`.
pub fn closure_defect(values: &[Complex64], map: impl Fn(Complex64) -> Complex64) -> f64 {
    let image: Vec<Complex64> = values.iter().map(|&z| map(z)).collect();
    nearest_matching_distance(values, &image)
}

/// Distance from `z` to the nearest point of `set`.
pub fn distance_to_set(z: Complex64, set: &[Complex64]) -> f64 {
    set.iter().map(|y| (z - y).norm()).fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hausdorff_basics() {
        let a = [c(0.0, 0.0), c(1.0, 0.0)];
        let b = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 3.0)];
        assert_eq!(hausdorff(&a, &a), 0.0);
        assert_eq!(hausdorff(&a, &b), 3.0);
        assert_eq!(hausdorff(&[], &[]), 0.0);
        assert!(hausdorff(&a, &[]).is_infinite());
    }

    #[test]
    fn matching_sees_multiplicity() {
        let a = [c(0.0, 0.0), c(0.0, 0.0)];
        let b = [c(0.0, 0.0), c(2.0, 0.0)];
        assert_eq!(hausdorff(&a, &b), 2.0);
        assert_eq!(nearest_matching_distance(&a, &b), 2.0);
        let p = [c(1.0, 1.0), c(-1.0, 1.0)];
        assert_eq!(closure_defect(&p, |z| -z.conj()), 0.0);
        assert!(closure_defect(&p, |z| z.conj()) > 1.9);
    }
}
