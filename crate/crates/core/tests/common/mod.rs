//! Brute-force reference implementations used as test oracles. None of them
//! call into the library's elimination, homology or search code.

#![allow(dead_code)]

use std::collections::BTreeSet;

/// Every vector in the span of `vs`, closing {0} under adding each vector.
pub fn span(vs: &[u64]) -> BTreeSet<u64> {
    let mut out = BTreeSet::from([0u64]);
    for &v in vs {
        if !out.contains(&v) {
            let shifted: Vec<u64> = out.iter().map(|x| x ^ v).collect();
            out.extend(shifted);
        }
    }
    out
}

/// No nonempty subset sums to zero.
pub fn independent(vs: &[u64]) -> bool {
    (1u64..1 << vs.len()).all(|mask| {
        vs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).fold(0, |a, (_, v)| a ^ v) != 0
    })
}

pub fn rank(vs: &[u64]) -> usize {
    span(vs).len().trailing_zeros() as usize
}

/// Rows of the k×m matrix whose columns are `cols`.
pub fn rows_of(cols: &[u64], k: usize) -> Vec<u64> {
    (0..k)
        .map(|i| cols.iter().enumerate().fold(0u64, |acc, (j, c)| acc | (c >> i & 1) << j))
        .collect()
}

/// Columns of the matrix with the given rows.
pub fn cols_of(rows: &[u64], m: usize) -> Vec<u64> {
    (0..m)
        .map(|j| rows.iter().enumerate().fold(0u64, |acc, (i, r)| acc | (r >> j & 1) << i))
        .collect()
}

/// All x in 𝔽₂^m with Σ x_j col_j = 0.
pub fn kernel(cols: &[u64]) -> Vec<u64> {
    let m = cols.len();
    (0u64..1 << m)
        .filter(|x| cols.iter().enumerate().filter(|(j, _)| x >> j & 1 == 1).fold(0, |a, (_, c)| a ^ c) == 0)
        .collect()
}

/// Basis of {x : Σ x_j col_j = 0} from a separate reduced echelon pass over
/// the rows.
pub fn kernel_basis(cols: &[u64], k: usize) -> Vec<u64> {
    let m = cols.len();
    let mut rows = rows_of(cols, k);
    let mut pivots = Vec::new();
    let mut r = 0;
    for j in 0..m {
        let Some(p) = (r..rows.len()).find(|&i| rows[i] >> j & 1 == 1) else { continue };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i] >> j & 1 == 1 {
                rows[i] ^= rows[r];
            }
        }
        pivots.push(j);
        r += 1;
    }
    (0..m)
        .filter(|j| !pivots.contains(j))
        .map(|f| {
            let mut x = 1u64 << f;
            for (i, &p) in pivots.iter().enumerate() {
                if rows[i] >> f & 1 == 1 {
                    x |= 1 << p;
                }
            }
            x
        })
        .collect()
}

/// Facet permutations of the labelled cube: those preserving the pairs {0,1}, {2,3}, {4,5}.
pub fn cube_symmetries() -> Vec<[usize; 6]> {
    let mut out = Vec::new();
    permutations(6, &mut |p| {
        if (0..3).all(|i| p[2 * i] / 2 == p[2 * i + 1] / 2) {
            out.push([p[0], p[1], p[2], p[3], p[4], p[5]]);
        }
    });
    out
}

pub fn permutations(n: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(p: &mut Vec<usize>, used: &mut Vec<bool>, n: usize, f: &mut dyn FnMut(&[usize])) {
        if p.len() == n {
            f(p);
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                p.push(i);
                rec(p, used, n, f);
                p.pop();
                used[i] = false;
            }
        }
    }
    rec(&mut Vec::new(), &mut vec![false; n], n, f)
}

/// Proper colouring of the labelled cube: adjacent pairs and corner triples independent.
pub fn cube_proper(cols: &[u64]) -> bool {
    for a in 0..6 {
        for b in a + 1..6 {
            if a / 2 != b / 2 && !independent(&[cols[a], cols[b]]) {
                return false;
            }
        }
    }
    for a in 0..2 {
        for b in 2..4 {
            for c in 4..6 {
                if !independent(&[cols[a], cols[b], cols[c]]) {
                    return false;
                }
            }
        }
    }
    true
}

pub const T_SET: [u64; 3] = [0b11, 0b1100, 0b11_0000];

/// Every k-dimensional subspace of 𝔽₂^m given as the rows of its reduced
/// echelon basis, built directly from pivot sets and free entries.
pub fn subspaces(k: usize, m: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut pivots = Vec::new();
    fn choose(start: usize, k: usize, m: usize, pivots: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pivots.len() == k {
            out.push(pivots.clone());
            return;
        }
        for p in start..m {
            pivots.push(p);
            choose(p + 1, k, m, pivots, out);
            pivots.pop();
        }
    }
    let mut sets = Vec::new();
    choose(0, k, m, &mut pivots, &mut sets);
    for ps in sets {
        // free positions: right of the row's pivot and not another pivot column
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| (ps[i] + 1..m).filter(|j| !ps.contains(j)).map(move |j| (i, j)))
            .collect();
        for mask in 0u64..1 << free.len() {
            let mut rows: Vec<u64> = ps.iter().map(|&p| 1u64 << p).collect();
            for (b, &(i, j)) in free.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    rows[i] |= 1 << j;
                }
            }
            out.push(rows);
        }
    }
    out
}

/// Orbit representative of a subspace under column permutations: the smallest
/// sorted list of its vectors.
pub fn orbit_key(space: &BTreeSet<u64>, perms: &[[usize; 6]]) -> Vec<u64> {
    perms
        .iter()
        .map(|p| {
            let mut v: Vec<u64> = space
                .iter()
                .map(|&x| (0..6).fold(0u64, |acc, j| acc | (x >> p[j] & 1) << j))
                .collect();
            v.sort_unstable();
            v
        })
        .min()
        .expect("nonempty group")
}

/// Orientable DJ classes of the cube, by rank, as orbit keys with |Row ∩ T|.
pub fn cube_census_oracle(k: usize) -> BTreeSet<(Vec<u64>, usize)> {
    let perms = cube_symmetries();
    let mut out = BTreeSet::new();
    for rows in subspaces(k, 6) {
        let cols = cols_of(&rows, 6);
        if cols.contains(&0) || !cube_proper(&cols) {
            continue;
        }
        let space = span(&rows);
        if !space.contains(&0b11_1111) {
            continue;
        }
        let hits = T_SET.iter().filter(|t| space.contains(t)).count();
        out.insert((orbit_key(&space, &perms), hits));
    }
    out
}

/// Doubled-coordinate quaternion product (a + bi + cj + dk).
pub fn quat_mul(p: [i32; 4], q: [i32; 4]) -> [i32; 4] {
    let [a1, b1, c1, d1] = p;
    let [a2, b2, c2, d2] = q;
    [
        (a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2) / 2,
        (a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2) / 2,
        (a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2) / 2,
        (a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2) / 2,
    ]
}

/// 4×4 product over 𝔽₂ with rows as arrays of bits.
pub fn mat_mul(a: &[[u8; 4]; 4], b: &[[u8; 4]; 4]) -> [[u8; 4]; 4] {
    let mut c = [[0u8; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            c[i][j] = (0..4).fold(0, |acc, l| acc ^ (a[i][l] & b[l][j]));
        }
    }
    c
}

pub fn parse4(rows: &[&str; 4]) -> [[u8; 4]; 4] {
    let mut out = [[0u8; 4]; 4];
    for (i, r) in rows.iter().enumerate() {
        for (j, ch) in r.chars().enumerate() {
            out[i][j] = (ch == '1') as u8;
        }
    }
    out
}

/// Reduced Euler characteristic from face counts (the empty face counts −1).
pub fn reduced_euler(counts: &[usize]) -> i64 {
    -1 + counts.iter().enumerate().map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) }).sum::<i64>()
}
