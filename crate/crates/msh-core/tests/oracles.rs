//! Independent reference implementations cross-checking the optimized library
//! code. Everything in this file is deliberately naive and was written (and
//! frozen) before the library internals: Pascal's triangle instead of the
//! product formula, comparator sorting instead of ranking arithmetic, explicit
//! subset expansion instead of packed incidence matrices, and a schoolbook
//! elimination instead of the word-parallel one. The library must agree with
//! these on every tested input.

use msh_core::boundary::{build_phi, build_v, BoundaryMapSpec, OmegaVector, VkSpec};
use msh_core::gfmat::FpMatrix;
use msh_core::homology::homology_dim;
use msh_core::session::Session;
use msh_core::subsets::{
    binomial, fibonacci, identity_report, subset_rank, subset_unrank, subsets_colex, BigInt,
    IdentityKind, Subset,
};

/// Pascal's triangle with signed-integer entries, `table[n][k] = C(n, k)`.
fn pascal(n_max: usize) -> Vec<Vec<BigInt>> {
    let mut table = vec![vec![BigInt::from(1)]];
    for n in 1..=n_max {
        let prev = &table[n - 1];
        let mut row = vec![BigInt::from(1)];
        for k in 1..n {
            row.push(&prev[k - 1] + &prev[k]);
        }
        row.push(BigInt::from(1));
        table.push(row);
    }
    table
}

fn pascal_entry(table: &[Vec<BigInt>], n: usize, k: i64) -> BigInt {
    if k < 0 || k as usize > n {
        BigInt::from(0)
    } else {
        table[n][k as usize].clone()
    }
}

/// Tiny deterministic PRNG so the oracle fixtures never move.
struct XorShift(u64);

impl XorShift {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }
}

/// Schoolbook row elimination over GF(p) on byte matrices.
fn schoolbook_rank(mut m: Vec<Vec<u8>>, p: u8) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| m[r][col] % p != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        // Normalize the pivot row by brute-force inverse search.
        let inv = (1..p).find(|&x| (x as u16 * m[rank][col] as u16) % p as u16 == 1).unwrap();
        for v in m[rank].iter_mut() {
            *v = ((*v as u16 * inv as u16) % p as u16) as u8;
        }
        for r in 0..rows {
            if r != rank && m[r][col] % p != 0 {
                let f = m[r][col] as u16;
                for c in 0..cols {
                    let sub = (f * m[rank][c] as u16) % p as u16;
                    m[r][c] = ((m[r][c] as u16 + p as u16 - sub) % p as u16) as u8;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Colex comparison straight from the definition: S < T iff the largest
/// element on which they differ lies in T.
fn colex_less(s: &[u32], t: &[u32]) -> bool {
    let in_s: Vec<u32> = s.iter().copied().filter(|e| !t.contains(e)).collect();
    let in_t: Vec<u32> = t.iter().copied().filter(|e| !s.contains(e)).collect();
    match (in_s.iter().max(), in_t.iter().max()) {
        (None, None) => false,
        (None, Some(_)) => true,
        (Some(_), None) => false,
        (Some(a), Some(b)) => a < b,
    }
}

/// All k-element subsets of {1..n} as sorted element lists, no ordering assumed.
fn all_subsets(n: u32, k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: u32, n: u32, k: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() as u32 == k {
            out.push(cur.clone());
            return;
        }
        for e in start..=n {
            cur.push(e);
            rec(e + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(1, n, k, &mut cur, &mut out);
    out
}

#[test]
fn binomial_matches_pascal_triangle() {
    let table = pascal(20);
    for n in 0..=20usize {
        for k in -2..=(n as i64 + 2) {
            assert_eq!(
                binomial(n as u64, k),
                pascal_entry(&table, n, k),
                "C({n}, {k})"
            );
        }
    }
}

#[test]
fn colex_rank_matches_comparator_sort() {
    for n in 0..=9u32 {
        for k in 0..=n {
            let mut subsets = all_subsets(n, k);
            subsets.sort_by(|a, b| {
                if colex_less(a, b) {
                    std::cmp::Ordering::Less
                } else if colex_less(b, a) {
                    std::cmp::Ordering::Greater
                } else {
                    std::cmp::Ordering::Equal
                }
            });
            let enumerated: Vec<Subset> = subsets_colex(n, k).collect();
            assert_eq!(enumerated.len(), subsets.len());
            for (idx, elems) in subsets.iter().enumerate() {
                let s = Subset::from_elems(elems).unwrap();
                assert_eq!(subset_rank(n, k, s).unwrap(), idx as u64);
                assert_eq!(subset_unrank(n, k, idx as u64).unwrap(), s);
                assert_eq!(enumerated[idx], s);
            }
        }
    }
}

/// The boundary matrix rows must equal the direct expansion of the map on the
/// standard basis: the image of Y is the coefficient-1 sum of the subsets of Y
/// of size |Y| - t, and the dual image is the analogous sum of supersets.
#[test]
fn phi_rows_match_direct_expansion() {
    for n in 1..=8u32 {
        for t in 1..=3u32 {
            for k in 0..=(n as i64) {
                let spec = BoundaryMapSpec { n, k, t, p: 2, dual: false };
                let m = build_phi(&spec).unwrap();
                let sub_size = k - t as i64;
                if sub_size < 0 {
                    assert_eq!(m.cols(), 0);
                    continue;
                }
                for (row_idx, y) in subsets_colex(n, k as u32).enumerate() {
                    let elems = y.elems();
                    for (col_idx, x) in subsets_colex(n, sub_size as u32).enumerate() {
                        let expected = x.elems().iter().all(|e| elems.contains(e));
                        assert_eq!(
                            m.get(row_idx, col_idx) == 1,
                            expected,
                            "n={n} t={t} k={k} row={row_idx} col={col_idx}"
                        );
                    }
                }
                let dual = build_phi(&BoundaryMapSpec { n, k, t, p: 2, dual: true }).unwrap();
                assert_eq!(dual.rows(), m.cols());
                assert_eq!(dual.cols(), m.rows());
                for (row_idx, y) in subsets_colex(n, sub_size as u32).enumerate() {
                    let elems = y.elems();
                    for (col_idx, z) in subsets_colex(n, k as u32).enumerate() {
                        let expected = elems.iter().all(|e| z.elems().contains(e));
                        assert_eq!(dual.get(row_idx, col_idx) == 1, expected);
                    }
                }
            }
        }
    }
}

#[test]
fn packed_rank_matches_schoolbook_elimination() {
    let mut rng = XorShift(0x9e3779b97f4a7c15);
    for &p in &[2u8, 3, 5, 7] {
        for trial in 0..40 {
            let rows = 1 + (rng.next() % 24) as usize;
            let cols = 1 + (rng.next() % 24) as usize;
            let dense: Vec<Vec<u8>> = (0..rows)
                .map(|_| (0..cols).map(|_| (rng.next() % p as u64) as u8).collect())
                .collect();
            let m = FpMatrix::from_dense(p, cols, &dense).unwrap();
            assert_eq!(
                m.rank(),
                schoolbook_rank(dense.clone(), p),
                "p={p} trial={trial} rows={rows} cols={cols}"
            );
            assert_eq!(m.transpose().rank(), m.rank());
        }
    }
}

/// Independent expansion of the designated kernel vectors: the base subset is
/// {2, 4, ..., 2k} and each of the first k-t+1 even entries may be swapped to
/// its odd predecessor, every choice contributing one coefficient-1 term.
#[test]
fn vk_matches_direct_choice_expansion() {
    for n in 2..=12u32 {
        for k in 1..=(n / 2) {
            for t in 1..=k {
                let v = build_v(&VkSpec { n, k, t }, 2).unwrap();
                let ell = k - t + 1;
                let mut expected: Vec<Subset> = Vec::new();
                for pattern in 0u32..(1 << ell) {
                    let mut elems: Vec<u32> = (1..=k).map(|i| 2 * i).collect();
                    for i in 0..ell {
                        if pattern >> i & 1 == 1 {
                            elems[i as usize] = 2 * (i + 1) - 1;
                        }
                    }
                    expected.push(Subset::from_elems(&elems).unwrap());
                }
                expected.sort_by_key(|s| s.mask());
                expected.dedup();
                assert_eq!(expected.len(), 1 << ell, "images must be distinct");
                let mut got: Vec<Subset> =
                    v.terms().into_iter().map(|(s, c)| {
                        assert_eq!(c, 1);
                        s
                    }).collect();
                got.sort_by_key(|s| s.mask());
                assert_eq!(got, expected, "n={n} k={k} t={t}");
            }
        }
    }
}

/// Homology dimensions recomputed from scratch: dense byte matrices built by
/// direct expansion, schoolbook ranks, and the kernel/image dimension formula.
#[test]
fn homology_dim_matches_schoolbook_pipeline() {
    fn dense_phi(n: u32, k: i64, t: u32, p: u8) -> Vec<Vec<u8>> {
        let sub = k - t as i64;
        let rows: Vec<Subset> = if (0..=n as i64).contains(&k) {
            subsets_colex(n, k as u32).collect()
        } else {
            Vec::new()
        };
        let cols: Vec<Subset> = if (0..=n as i64).contains(&sub) {
            subsets_colex(n, sub as u32).collect()
        } else {
            Vec::new()
        };
        rows.iter()
            .map(|y| {
                cols.iter()
                    .map(|x| {
                        let inside = x.elems().iter().all(|e| y.elems().contains(e));
                        u8::from(inside) % p
                    })
                    .collect()
            })
            .collect()
    }

    let ses = Session::new();
    for &(n, p, s_in, t_out) in &[(6u32, 2u8, 2u32, 2u32), (7, 2, 2, 2), (8, 2, 1, 1), (6, 3, 2, 1), (6, 5, 4, 1)] {
        for k in 0..=(n as i64) {
            let space = binomial(n as u64, k);
            let out = dense_phi(n, k, t_out, p);
            let rank_out = if out.is_empty() || out[0].is_empty() {
                0
            } else {
                schoolbook_rank(out, p)
            };
            let inc = dense_phi(n, k + s_in as i64, s_in, p);
            let rank_in = if inc.is_empty() || inc[0].is_empty() {
                0
            } else {
                schoolbook_rank(inc, p)
            };
            let expected_ker = space - BigInt::from(rank_out);
            let expected_h = &expected_ker - BigInt::from(rank_in);
            let report = homology_dim(&ses, n, p, k, s_in, t_out).unwrap();
            assert_eq!(BigInt::from(report.dim_ker), expected_ker, "n={n} p={p} k={k}");
            assert_eq!(BigInt::from(report.dim_im), BigInt::from(rank_in));
            assert_eq!(BigInt::from(report.dim_h), expected_h, "n={n} p={p} k={k}");
        }
    }
}

/// Every identity's left side recomputed with Pascal sums; right sides
/// recomputed from first principles (powers of two, Fibonacci recurrence).
#[test]
fn identity_sides_match_pascal_sums() {
    let table = pascal(70);
    let fib = {
        let mut f = vec![BigInt::from(0), BigInt::from(1)];
        for i in 2..=70 {
            let next = &f[i - 1] + &f[i - 2];
            f.push(next);
        }
        f
    };
    let minus_one = |e: u64| -> BigInt {
        if e % 2 == 0 {
            BigInt::from(1)
        } else {
            BigInt::from(-1)
        }
    };

    for m in 0..=32u64 {
        let n = 2 * m as usize;
        let mut lhs = BigInt::from(0);
        for j in 0..=(m as i64) {
            lhs += minus_one(j as u64) * pascal_entry(&table, n, 2 * j);
        }
        let rhs = if m % 2 == 0 {
            minus_one(m / 2) * BigInt::from(2).pow(m as u32)
        } else {
            BigInt::from(0)
        };
        assert_eq!(lhs, rhs, "even alternating sum, m={m}");
        let report = identity_report(IdentityKind::Even2m, m);
        assert!(report.holds);
        assert_eq!(report.lhs, lhs.to_string());
        assert_eq!(report.rhs, rhs.to_string());
    }

    for m in 0..=32u64 {
        let n = 2 * m as usize + 1;
        let mut lhs = BigInt::from(0);
        for j in 0..=(n as i64 / 2) {
            lhs += minus_one(j as u64) * pascal_entry(&table, n, 2 * j);
        }
        let rhs = if m % 2 == 0 {
            minus_one(m / 2) * BigInt::from(2).pow(m as u32)
        } else {
            minus_one((m + 1) / 2) * BigInt::from(2).pow(m as u32)
        };
        assert_eq!(lhs, rhs, "odd alternating sum, m={m}");
        let report = identity_report(IdentityKind::Odd2m1, m);
        assert!(report.holds);
        assert_eq!(report.lhs, lhs.to_string());
    }

    for n in 0..=64u64 {
        let mut lhs = BigInt::from(0);
        let mut j = 0i64;
        while 3 * j <= n as i64 {
            lhs += pascal_entry(&table, n as usize, 3 * j);
            j += 1;
        }
        let mut j = 0i64;
        while 3 * j + 1 <= n as i64 {
            lhs -= pascal_entry(&table, n as usize, 3 * j + 1);
            j += 1;
        }
        let rhs = match n % 3 {
            0 => minus_one(n),
            1 => BigInt::from(0),
            _ => minus_one(n - 1),
        };
        assert_eq!(lhs, rhs, "mod-3 sum, n={n}");
        let report = identity_report(IdentityKind::Mod3, n);
        assert!(report.holds);
        assert_eq!(report.lhs, lhs.to_string());
    }

    let five_sum = |n: u64| -> BigInt {
        let mut acc = BigInt::from(0);
        let mut j = 0i64;
        while 5 * j <= n as i64 {
            acc += pascal_entry(&table, n as usize, 5 * j);
            j += 1;
        }
        let mut j = 0i64;
        while 5 * j + 1 <= n as i64 {
            acc -= pascal_entry(&table, n as usize, 5 * j + 1);
            j += 1;
        }
        acc
    };
    for m in 1..=12u64 {
        let lhs = five_sum(5 * m);
        let rhs = minus_one(m) * fib[(5 * m - 1) as usize].clone();
        assert_eq!(lhs, rhs, "five-sum at 5m, m={m}");
        let report = identity_report(IdentityKind::Fib5m, m);
        assert!(report.holds);
        assert_eq!(report.lhs, lhs.to_string());
    }
    for m in 0..=12u64 {
        let lhs = five_sum(5 * m + 2);
        let rhs = minus_one(m + 1) * fib[(5 * m + 1) as usize].clone();
        assert_eq!(lhs, rhs, "five-sum at 5m+2, m={m}");
        let report = identity_report(IdentityKind::Fib5m2, m);
        assert!(report.holds);
        assert_eq!(report.lhs, lhs.to_string());
    }

    for n in 1..=64u64 {
        let mut lhs = BigInt::from(0);
        for k in -((n as i64 + 2) / 5 + 1)..=((n as i64 - 1) / 5 + 1) {
            let idx = (n as i64 - 1 - 5 * k).div_euclid(2);
            let term = pascal_entry(&table, n as usize, idx);
            if k.rem_euclid(2) == 0 {
                lhs += term;
            } else {
                lhs -= term;
            }
        }
        assert_eq!(lhs, fib[n as usize], "alternating binomial Fibonacci form, n={n}");
        let report = identity_report(IdentityKind::Andrews, n);
        assert!(report.holds);
        assert_eq!(report.lhs, lhs.to_string());
        assert_eq!(report.rhs, fib[n as usize].to_string());
        assert_eq!(fibonacci(n), fib[n as usize]);
    }
}

/// Applying the boundary map through the vector interface must agree with
/// multiplying by the built matrix (two independent code paths).
#[test]
fn vector_apply_matches_matrix_multiplication() {
    let mut rng = XorShift(0xfeedface12345678);
    for n in 2..=8u32 {
        for k in 1..=n {
            for t in 1..=3u32.min(k) {
                let m = build_phi(&BoundaryMapSpec { n, k: k as i64, t, p: 2, dual: false }).unwrap();
                for _ in 0..5 {
                    let mut v = OmegaVector::zero(n, k, 2).unwrap();
                    for (idx, s) in subsets_colex(n, k).enumerate() {
                        if rng.next() % 2 == 1 {
                            v.add_term(s, 1).unwrap();
                        }
                        let _ = idx;
                    }
                    let via_vector = v.apply_phi(t).unwrap();
                    let via_matrix = m.vec_mul(v.row()).unwrap();
                    assert_eq!(via_vector.row(), &via_matrix, "n={n} k={k} t={t}");
                }
            }
        }
    }
}
