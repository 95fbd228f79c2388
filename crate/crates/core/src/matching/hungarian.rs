use crate::error::{Error, Result};

const INF: i128 = i128::MAX / 4;

/// Maximum-weight perfect matching on a square bipartite graph given as a
/// weight oracle (`None` = no edge), by the Hungarian method with potentials
/// on the negated weights. Exact over integers; rows and columns are scanned
/// in index order so the result is deterministic.
///
/// Returns `row -> column` and the total weight.
pub fn max_weight_assignment(size: usize, weight: impl Fn(usize, usize) -> Option<i128>) -> Result<(Vec<usize>, i128)> {
    let cost = |r: usize, c: usize| weight(r, c).map(|w| -w);
    // 1-based potentials and column owners; index 0 is the virtual root.
    let mut u = vec![0i128; size + 1];
    let mut v = vec![0i128; size + 1];
    let mut owner = vec![0usize; size + 1];
    let mut way = vec![0usize; size + 1];

    for row in 1..=size {
        owner[0] = row;
        let mut col0 = 0;
        let mut minv = vec![INF; size + 1];
        let mut used = vec![false; size + 1];
        loop {
            used[col0] = true;
            let r0 = owner[col0];
            let mut delta = INF;
            let mut col1 = 0;
            for col in 1..=size {
                if used[col] {
                    continue;
                }
                if let Some(c) = cost(r0 - 1, col - 1) {
                    let reduced = c - u[r0] - v[col];
                    if reduced < minv[col] {
                        minv[col] = reduced;
                        way[col] = col0;
                    }
                }
                if minv[col] < delta {
                    delta = minv[col];
                    col1 = col;
                }
            }
            if delta >= INF {
                return Err(Error::NoPerfectMatching);
            }
            for col in 0..=size {
                if used[col] {
                    u[owner[col]] += delta;
                    v[col] -= delta;
                } else if minv[col] < INF {
                    minv[col] -= delta;
                }
            }
            col0 = col1;
            if owner[col0] == 0 {
                break;
            }
        }
        loop {
            let col1 = way[col0];
            owner[col0] = owner[col1];
            col0 = col1;
            if col0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0; size];
    for col in 1..=size {
        assignment[owner[col] - 1] = col - 1;
    }
    let total = assignment
        .iter()
        .enumerate()
        .map(|(r, &c)| weight(r, c).expect("assignment uses only existing edges"))
        .sum();
    Ok((assignment, total))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(size: usize, weight: &dyn Fn(usize, usize) -> Option<i128>) -> Option<i128> {
        fn go(
            row: usize,
            size: usize,
            used: &mut Vec<bool>,
            acc: i128,
            weight: &dyn Fn(usize, usize) -> Option<i128>,
            best: &mut Option<i128>,
        ) {
            if row == size {
                *best = Some(best.map_or(acc, |b| b.max(acc)));
                return;
            }
            for c in 0..size {
                if !used[c] {
                    if let Some(w) = weight(row, c) {
                        used[c] = true;
                        go(row + 1, size, used, acc + w, weight, best);
                        used[c] = false;
                    }
                }
            }
        }
        let mut best = None;
        go(0, size, &mut vec![false; size], 0, weight, &mut best);
        best
    }

    #[test]
    fn empty() {
        assert_eq!(max_weight_assignment(0, |_, _| Some(1)).unwrap(), (vec![], 0));
    }

    #[test]
    fn classic_matrix() {
        let w = [[7, 5, 1], [2, 9, 3], [8, 4, 6]];
        let (assign, total) = max_weight_assignment(3, |r, c| Some(w[r][c] as i128)).unwrap();
        assert_eq!(total, 7 + 9 + 6);
        assert_eq!(assign, vec![0, 1, 2]);
    }

    #[test]
    fn missing_edges() {
        // Only the anti-diagonal is available on row 0.
        let w = |r: usize, c: usize| if r == 0 && c == 0 { None } else { Some((r * 3 + c) as i128) };
        let (assign, total) = max_weight_assignment(2, w).unwrap();
        assert_eq!(assign, vec![1, 0]);
        assert_eq!(total, 1 + 3);
    }

    #[test]
    fn no_perfect_matching() {
        let w = |_: usize, c: usize| if c == 0 { Some(1) } else { None };
        assert!(matches!(max_weight_assignment(2, w), Err(Error::NoPerfectMatching)));
    }

    #[test]
    fn agrees_with_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..300 {
            let size = rng.gen_range(1..=6);
            let table: Vec<Option<i128>> = (0..size * size)
                .map(|_| rng.gen_bool(0.7).then(|| rng.gen_range(-20..=20)))
                .collect();
            let w = |r: usize, c: usize| table[r * size + c];
            let expected = brute_force(size, &w);
            match max_weight_assignment(size, w) {
                Ok((_, total)) => assert_eq!(Some(total), expected),
                Err(Error::NoPerfectMatching) => assert_eq!(expected, None),
                Err(e) => panic!("{e}"),
            }
        }
    }
}
