//! Classical Littlewood-Richardson coefficients by the tableau rule:
//! `c_{lambda,mu}^{nu}` counts semistandard skew tableaux of shape
//! `nu/lambda` and weight `mu` whose reverse reading word is a lattice word.
//!
//! This is an independent oracle for the `d = 0` specialization of the other
//! two pipelines; it shares no code with the determinantal sum or the hive
//! counter.

use crate::qlr::Partition;

/// Number of LR skew tableaux of shape `nu/lambda` and weight `mu`.
///
/// Returns 0 when `lambda` is not contained in `nu` or the weights do not
/// balance.
pub fn lr_coefficient(lambda: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    let rows = nu.parts.len().max(lambda.parts.len());
    let lam = |i: usize| *lambda.parts.get(i).unwrap_or(&0) as usize;
    let nu_r = |i: usize| *nu.parts.get(i).unwrap_or(&0) as usize;
    if lambda.weight() + mu.weight() != nu.weight() {
        return 0;
    }
    for i in 0..rows {
        if lam(i) > nu_r(i) {
            return 0;
        }
    }
    let values = mu.parts.iter().filter(|&&m| m > 0).count();
    if values == 0 {
        return 1; // empty filling of the empty skew shape
    }
    let width = nu_r(0);

    // Cells in reading order: rows top to bottom, right to left inside a row.
    // The constraints are then incremental: the right neighbour and the cell
    // above are already placed when a cell is visited.
    let mut cells: Vec<(usize, usize)> = Vec::new();
    for i in 0..rows {
        for j in (lam(i)..nu_r(i)).rev() {
            cells.push((i, j));
        }
    }

    // grid[i][j] = value placed (1-based), 0 = not placed / not in shape
    let mut grid = vec![vec![0usize; width]; rows];
    let mut counts = vec![0usize; values + 1];
    let target: Vec<usize> = (0..=values).map(|v| if v == 0 { 0 } else { mu.parts[v - 1] as usize }).collect();

    fn place(
        idx: usize,
        cells: &[(usize, usize)],
        grid: &mut Vec<Vec<usize>>,
        counts: &mut Vec<usize>,
        target: &[usize],
        lam: &dyn Fn(usize) -> usize,
        total: &mut u64,
    ) {
        if idx == cells.len() {
            *total += 1;
            return;
        }
        let (i, j) = cells[idx];
        let values = target.len() - 1;
        for v in 1..=values {
            // weight capacity
            if counts[v] + 1 > target[v] {
                continue;
            }
            // lattice: after placing, #v must not exceed #(v-1)
            if v > 1 && counts[v] + 1 > counts[v - 1] {
                continue;
            }
            // row weakly increasing left to right: right neighbour placed first
            if j + 1 < grid[i].len() {
                let right = grid[i][j + 1];
                if right != 0 && v > right {
                    continue;
                }
            }
            // column strictly increasing downward: the cell above, when it is
            // part of the skew shape, was placed in an earlier row
            if i > 0 && j >= lam(i - 1) {
                let above = grid[i - 1][j];
                debug_assert_ne!(above, 0, "cell above is placed before its column successor");
                if v <= above {
                    continue;
                }
            }
            grid[i][j] = v;
            counts[v] += 1;
            place(idx + 1, cells, grid, counts, target, lam, total);
            counts[v] -= 1;
            grid[i][j] = 0;
        }
    }

    let mut total = 0u64;
    place(0, &cells, &mut grid, &mut counts, &target, &lam, &mut total);
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn pieri_rule() {
        // s_(1) * s_(1,1) = s_(2,1) + s_(1,1,1)
        assert_eq!(lr_coefficient(&p(&[1]), &p(&[1, 1]), &p(&[2, 1])), 1);
        assert_eq!(lr_coefficient(&p(&[1]), &p(&[1, 1]), &p(&[1, 1, 1])), 1);
        assert_eq!(lr_coefficient(&p(&[1]), &p(&[1, 1]), &p(&[3])), 0);
    }

    #[test]
    fn multiplicity_two() {
        // c_{(2,1),(2,1)}^{(3,2,1)} = 2, the classic first multiplicity.
        assert_eq!(lr_coefficient(&p(&[2, 1]), &p(&[2, 1]), &p(&[3, 2, 1])), 2);
    }

    #[test]
    fn containment_and_weight_guards() {
        assert_eq!(lr_coefficient(&p(&[2]), &p(&[1]), &p(&[1, 1, 1])), 0); // lambda not inside nu
        assert_eq!(lr_coefficient(&p(&[1]), &p(&[1]), &p(&[3])), 0); // weights differ
    }

    #[test]
    fn trivial_cases() {
        assert_eq!(lr_coefficient(&p(&[0]), &p(&[0]), &p(&[0])), 1);
        assert_eq!(lr_coefficient(&p(&[2, 1]), &p(&[0]), &p(&[2, 1])), 1);
        // s_(1)^3 contains s_(2,1) twice
        assert_eq!(lr_coefficient(&p(&[1, 1]), &p(&[1]), &p(&[2, 1])), 1);
    }

    #[test]
    fn symmetric_in_lambda_mu() {
        let cases = [
            (&[2, 1, 0][..], &[2, 2, 1][..], &[4, 3, 1][..]),
            (&[3, 1, 0][..], &[2, 1, 0][..], &[4, 2, 1][..]),
        ];
        for (a, b, c) in cases {
            assert_eq!(
                lr_coefficient(&p(a), &p(b), &p(c)),
                lr_coefficient(&p(b), &p(a), &p(c)),
                "symmetry at {a:?} {b:?} {c:?}"
            );
        }
    }
}
