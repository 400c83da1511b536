//! Maximum-weight bipartite assignment (Kuhn-Munkres with potentials).

/// Pairs `(row, column)` of a maximum-weight one-to-one assignment over a
/// rectangular matrix of non-negative weights. Every row is matched when
/// there are at least as many columns, and vice versa.
pub fn max_weight_assignment(weights: &[Vec<f64>]) -> Vec<(usize, usize)> {
    let rows = weights.len();
    let cols = weights.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Vec::new();
    }
    assert!(weights.iter().all(|r| r.len() == cols), "ragged weight matrix");
    if rows > cols {
        let transposed: Vec<Vec<f64>> = (0..cols)
            .map(|c| (0..rows).map(|r| weights[r][c]).collect())
            .collect();
        return max_weight_assignment(&transposed)
            .into_iter()
            .map(|(c, r)| (r, c))
            .collect();
    }
    let cost = |r: usize, c: usize| -weights[r][c];
    let (n, m) = (rows, cols);
    // 1-based potentials; column 0 is a sentinel
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; m + 1];
    let mut owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=m {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut pairs: Vec<(usize, usize)> = (1..=m)
        .filter(|&j| owner[j] != 0)
        .map(|j| (owner[j] - 1, j - 1))
        .collect();
    pairs.sort_unstable();
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total(w: &[Vec<f64>], pairs: &[(usize, usize)]) -> f64 {
        pairs.iter().map(|&(r, c)| w[r][c]).sum()
    }

    #[test]
    fn square() {
        let w = vec![vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0], vec![3.0, 6.0, 9.0]];
        let p = max_weight_assignment(&w);
        assert_eq!(p.len(), 3);
        assert_eq!(total(&w, &p), 14.0);
    }

    #[test]
    fn wide_and_tall() {
        let w = vec![vec![0.8, 0.5]];
        assert_eq!(max_weight_assignment(&w), vec![(0, 0)]);
        let t = vec![vec![0.1], vec![0.7], vec![0.3]];
        assert_eq!(max_weight_assignment(&t), vec![(1, 0)]);
        assert!(max_weight_assignment(&[]).is_empty());
    }

    #[test]
    fn prefers_global_optimum_over_greedy() {
        // greedy takes 10 and is left with 1; the optimum is 9 + 9
        let w = vec![vec![10.0, 9.0], vec![9.0, 1.0]];
        assert_eq!(total(&w, &max_weight_assignment(&w)), 18.0);
    }
}
