//! Vertex enumeration for tiny bounded polytopes `{x ∈ R^N : A x ≤ b}`.

/// Feasibility slack accepted when testing a candidate vertex.
const FEAS_TOL: f64 = 1e-9;
/// Pivots smaller than this mark a singular active set.
const PIVOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Polytope<const N: usize> {
    rows: Vec<([f64; N], f64)>,
}

impl<const N: usize> Polytope<N> {
    pub fn new(rows: Vec<([f64; N], f64)>) -> Self {
        Polytope { rows }
    }

    pub fn rows(&self) -> &[([f64; N], f64)] {
        &self.rows
    }

    /// Smallest slack `b_i − a_i·x` over all rows.
    pub fn min_slack(&self, x: &[f64; N]) -> f64 {
        self.rows
            .iter()
            .map(|(a, b)| b - dot(a, x))
            .fold(f64::INFINITY, f64::min)
    }

    /// All basic feasible solutions: every N-subset of rows whose equality
    /// system is nonsingular and whose solution satisfies every row.
    /// Duplicates are kept; callers only take maxima over the list.
    pub fn vertices(&self) -> Vec<[f64; N]> {
        let m = self.rows.len();
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..N).collect();
        if m < N {
            return out;
        }
        loop {
            if let Some(x) = self.solve_active(&idx) {
                if self.min_slack(&x) >= -FEAS_TOL {
                    out.push(x);
                }
            }
            // next combination in lexicographic order
            let mut i = N;
            while i > 0 && idx[i - 1] == m - N + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..N {
                idx[j] = idx[j - 1] + 1;
            }
        }
        out
    }

    fn solve_active(&self, idx: &[usize]) -> Option<[f64; N]> {
        let mut a = [[0.0; N]; N];
        let mut b = [0.0; N];
        for (r, &i) in idx.iter().enumerate() {
            a[r] = self.rows[i].0;
            b[r] = self.rows[i].1;
        }
        solve(a, b)
    }
}

fn dot<const N: usize>(a: &[f64; N], x: &[f64; N]) -> f64 {
    a.iter().zip(x).map(|(p, q)| p * q).sum()
}

/// Gaussian elimination with partial pivoting.
fn solve<const N: usize>(mut a: [[f64; N]; N], mut b: [f64; N]) -> Option<[f64; N]> {
    for col in 0..N {
        let piv = (col..N).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < PIVOT_TOL {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..N {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for k in col..N {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = [0.0; N];
    for row in (0..N).rev() {
        let s: f64 = (row + 1..N).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square() {
        let p = Polytope::new(vec![
            ([1.0, 0.0], 1.0),
            ([0.0, 1.0], 1.0),
            ([-1.0, 0.0], 0.0),
            ([0.0, -1.0], 0.0),
        ]);
        let mut v = p.vertices();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(v, vec![[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]]);
    }

    #[test]
    fn simplex_with_cut() {
        // x + y <= 1 cuts the square; (1,1) is no longer feasible
        let p = Polytope::new(vec![
            ([1.0, 0.0], 1.0),
            ([0.0, 1.0], 1.0),
            ([-1.0, 0.0], 0.0),
            ([0.0, -1.0], 0.0),
            ([1.0, 1.0], 1.0),
        ]);
        assert!(p.vertices().iter().all(|x| x[0] + x[1] <= 1.0 + 1e-12));
        assert!(p.min_slack(&[0.5, 0.5]).abs() < 1e-15);
    }
}
