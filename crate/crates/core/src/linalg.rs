//! Dense linear algebra over a prime field F_p.
//!
//! Matrices are row-major `Vec<Vec<u32>>` with entries already reduced mod `p`.

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) is the inverse.
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// Reduces `rows` to row echelon form in place and returns the pivot columns.
fn echelon(rows: &mut [Vec<u32>], ncols: usize, p: u32) -> Vec<usize> {
    let p64 = p as u64;
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(sel) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = inv_mod(rows[r][col], p) as u64;
        for x in rows[r].iter_mut() {
            *x = (*x as u64 * inv % p64) as u32;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let factor = rows[i][col] as u64;
                for j in 0..ncols {
                    let sub = factor * rows[r][j] as u64 % p64;
                    rows[i][j] = ((rows[i][j] as u64 + p64 - sub) % p64) as u32;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Rank of a matrix over F_p.
pub fn rank(matrix: &[Vec<u32>], p: u32) -> usize {
    let Some(ncols) = matrix.first().map(Vec::len) else {
        return 0;
    };
    let mut rows = matrix.to_vec();
    echelon(&mut rows, ncols, p).len()
}

/// Solves `A x = b` over F_p, returning one solution (free variables set to zero).
pub fn solve(a: &[Vec<u32>], b: &[u32], p: u32) -> Option<Vec<u32>> {
    let ncols = a.first().map_or(0, Vec::len);
    let mut rows: Vec<Vec<u32>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs % p);
            r
        })
        .collect();
    let pivots = echelon(&mut rows, ncols + 1, p);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![0u32; ncols];
    for (r, &col) in pivots.iter().enumerate() {
        x[col] = rows[r][ncols];
    }
    Some(x)
}
