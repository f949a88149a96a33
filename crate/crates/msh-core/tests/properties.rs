//! Structural laws checked over parameter grids and randomized inputs: the
//! arithmetic of the combinatorial helpers, the linear-algebra invariants of
//! the field matrices, and the algebraic identities the boundary maps and
//! their derived complexes must satisfy at every desk-scale size.

use msh_core::boundary::{
    build_phi, build_v, perm_matrix, phi_matrix, BoundaryMapSpec, OmegaVector, Perm, VkSpec,
};
use msh_core::conjectures::{restricted_homology, RestrictedHomologySpec};
use msh_core::gfmat::{FpMatrix, RowVec, Subspace};
use msh_core::homology::{check_gamma_chain_identity, homology_dim, QuotientBasis};
use msh_core::session::Session;
use msh_core::subsets::{
    binomial, carry_free, choose, fibonacci, least_two_power, subset_rank, subset_unrank, BigInt,
    Subset,
};
use proptest::prelude::*;

fn primes() -> impl Strategy<Value = u8> {
    prop_oneof![Just(2u8), Just(3u8), Just(5u8)]
}

/// Random matrix with entries reduced mod p; dimensions stay small enough
/// that elimination is instantaneous.
fn arb_matrix() -> impl Strategy<Value = FpMatrix> {
    (primes(), 1usize..=18, 1usize..=18).prop_flat_map(|(p, rows, cols)| {
        proptest::collection::vec(proptest::collection::vec(0u8..25, cols), rows)
            .prop_map(move |entries| FpMatrix::from_dense(p, cols, &entries).unwrap())
    })
}

/// Two spans inside the same ambient space, plus one extra test vector.
fn arb_span_pair() -> impl Strategy<Value = (Subspace, Subspace, RowVec)> {
    (primes(), 1usize..=12).prop_flat_map(|(p, ambient)| {
        let rows = || {
            proptest::collection::vec(proptest::collection::vec(0u8..25, ambient), 0..=8)
        };
        (rows(), rows(), proptest::collection::vec(0u8..25, ambient)).prop_map(
            move |(ra, rb, v)| {
                (
                    FpMatrix::from_dense(p, ambient, &ra).unwrap().row_space(),
                    FpMatrix::from_dense(p, ambient, &rb).unwrap().row_space(),
                    RowVec::from_dense(p, &v).unwrap(),
                )
            },
        )
    })
}

/// Random permutation of {1..n} as a word in adjacent transpositions.
fn arb_perm(n: u32) -> impl Strategy<Value = Perm> {
    proptest::collection::vec(1..n, 0..=12).prop_map(move |swaps| {
        swaps.into_iter().fold(Perm::identity(n), |acc, a| {
            acc.compose(&Perm::transposition(n, a, a + 1).unwrap()).unwrap()
        })
    })
}

#[test]
fn pascal_recurrence_and_symmetry() {
    for n in 1u64..=20 {
        for k in 0..=(n as i64) {
            assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
            assert_eq!(binomial(n, k), binomial(n, n as i64 - k));
        }
    }
}

#[test]
fn cassini_alternation() {
    // F_{n+1} F_{n−1} − F_n² alternates between +1 and −1.
    for n in 1u64..=30 {
        let lhs = fibonacci(n + 1) * fibonacci(n - 1) - fibonacci(n).pow(2);
        let rhs = if n % 2 == 0 { BigInt::from(1) } else { BigInt::from(-1) };
        assert_eq!(lhs, rhs, "n = {n}");
    }
}

proptest! {
    #[test]
    fn base_two_carry_freedom_is_bit_disjointness(s in 0u64..=256, t in 0u64..=256) {
        prop_assert_eq!(carry_free(s, t, 2).unwrap(), s & t == 0);
    }

    #[test]
    fn least_two_power_factor_is_exact(t in 1u64..=1_000_000) {
        let w = least_two_power(t).unwrap();
        prop_assert_eq!(w & (w - 1), 0, "{} is a power of two", w);
        prop_assert_eq!(t % w, 0);
        prop_assert_eq!((t / w) % 2, 1);
    }

    #[test]
    fn colex_rank_roundtrip((n, k, r) in (1u32..=16)
        .prop_flat_map(|n| (Just(n), 0..=n))
        .prop_flat_map(|(n, k)| (Just(n), Just(k), 0..choose(n as u64, k as i64))))
    {
        let s = subset_unrank(n, k, r).unwrap();
        prop_assert_eq!(s.card(), k);
        prop_assert_eq!(subset_rank(n, k, s).unwrap(), r);
    }

    #[test]
    fn rank_is_invariant_under_transpose(m in arb_matrix()) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn rank_nullity_accounting(m in arb_matrix()) {
        prop_assert_eq!(m.rank() + m.left_kernel().dim(), m.rows());
    }

    #[test]
    fn kernel_rows_annihilate_matrix(m in arb_matrix()) {
        for row in m.left_kernel().basis() {
            prop_assert!(m.vec_mul(row).unwrap().is_zero());
        }
    }

    #[test]
    fn sum_and_intersection_dimensions_balance((a, b, _) in arb_span_pair()) {
        let meet = a.intersection(&b).unwrap();
        let join = a.sum(&b).unwrap();
        prop_assert_eq!(meet.dim() + join.dim(), a.dim() + b.dim());
        prop_assert!(meet.leq(&a).unwrap() && meet.leq(&b).unwrap());
        prop_assert!(a.leq(&join).unwrap() && b.leq(&join).unwrap());
    }

    #[test]
    fn quotient_coordinates_vanish_exactly_on_members((a, _, v) in arb_span_pair()) {
        let coords = a.quotient_coordinates(std::slice::from_ref(&v)).unwrap();
        prop_assert_eq!(coords.row(0).is_zero(), a.contains(&v).unwrap());
    }

    #[test]
    fn boundary_commutes_with_relabeling(
        (n, t, k, sigma) in (3u32..=8)
            .prop_flat_map(|n| (Just(n), 1..=3u32))
            .prop_flat_map(|(n, t)| (Just(n), Just(t), t.min(n)..=n))
            .prop_flat_map(|(n, t, k)| (Just(n), Just(t), Just(k), arb_perm(n))),
        p in prop_oneof![Just(2u8), Just(3u8)],
    ) {
        let m = phi_matrix(n, k as i64, t, p).unwrap();
        let p_up = perm_matrix(n, k, p, &sigma).unwrap();
        let p_down = perm_matrix(n, k - t, p, &sigma).unwrap();
        prop_assert_eq!(p_up.mul(&m).unwrap(), m.mul(&p_down).unwrap());
    }
}

#[test]
fn boundary_rows_have_uniform_support() {
    // Over GF(3) each row is the coefficient-1 indicator of the C(k,t)
    // subsets one step down; GF(2) would hide a wrong coefficient.
    for n in 2u32..=10 {
        for t in 1u32..=3 {
            for k in t..=n {
                let m = phi_matrix(n, k as i64, t, 3).unwrap();
                for i in 0..m.rows() {
                    let entries: Vec<(usize, u8)> = m.row(i).iter_nonzero().collect();
                    assert_eq!(entries.len() as u64, choose(k as u64, t as i64));
                    assert!(entries.iter().all(|&(_, c)| c == 1));
                }
            }
        }
    }
}

#[test]
fn dual_map_matrix_is_the_transpose() {
    for n in 2u32..=8 {
        for t in 1u32..=3 {
            for k in 0..=(n as i64 + 1) {
                for p in [2u8, 3] {
                    let down = build_phi(&BoundaryMapSpec { n, k, t, p, dual: false }).unwrap();
                    let up = build_phi(&BoundaryMapSpec { n, k, t, p, dual: true }).unwrap();
                    assert_eq!(up, down.transpose(), "n={n} t={t} k={k} p={p}");
                }
            }
        }
    }
}

#[test]
fn designated_elements_lie_in_their_kernels() {
    let mut checked = 0;
    for n in 2u32..=12 {
        for t in [1u32, 2, 4] {
            for k in t..=(n / 2) {
                let Ok(v) = build_v(&VkSpec { n, k, t }, 2) else { continue };
                assert!(v.apply_phi(t).unwrap().is_zero(), "n={n} k={k} t={t}");
                checked += 1;
            }
        }
    }
    assert!(checked > 50, "the grid actually exercised cases, got {checked}");
}

#[test]
fn two_step_element_image_is_the_pair_symmetrization() {
    // Applying the one-step map to the two-step designated element yields
    // the full symmetrization over the element pairs {2i−1, 2i}: one term
    // for every way of picking one element from each of the first k−1 pairs.
    for (n, k) in [(4u32, 2u32), (5, 2), (6, 3), (7, 3), (8, 4), (10, 5), (12, 6)] {
        let image = build_v(&VkSpec { n, k, t: 2 }, 2).unwrap().apply_phi(1).unwrap();
        let mut expected = OmegaVector::zero(n, k - 1, 2).unwrap();
        for choice in 0u32..(1 << (k - 1)) {
            let elems: Vec<u32> =
                (1..k).map(|i| 2 * i - 1 + ((choice >> (i - 1)) & 1)).collect();
            let s = Subset::from_elems(&elems).unwrap();
            expected.add(&OmegaVector::basis(n, 2, s).unwrap()).unwrap();
        }
        assert_eq!(image.terms(), expected.terms(), "n={n} k={k}");
    }
}

#[test]
fn homology_dims_symmetric_under_complement() {
    let ses = Session::new();
    for n in 2u32..=10 {
        for t in 1u32..=4 {
            for k in 0..=(n as i64) {
                let here = homology_dim(&ses, n, 2, k, t, t).unwrap().dim_h;
                let there = homology_dim(&ses, n, 2, n as i64 - k, t, t).unwrap().dim_h;
                assert_eq!(here, there, "n={n} t={t} k={k}");
            }
        }
    }
}

#[test]
fn short_side_surjectivity_matches_closed_form() {
    // When the target degree is below the step, surjectivity of the map
    // landing there is equivalent to the short-side disjunct of the
    // closed-form criterion: k below the least two-power of t and k+t not
    // past the midpoint.
    let ses = Session::new();
    for n in 2u32..=12 {
        for t in 1u32..=n {
            for k in 0..t.min(n - t + 1) {
                if k + t > n {
                    continue;
                }
                let spec =
                    BoundaryMapSpec { n, k: (k + t) as i64, t, p: 2, dual: false };
                let surjective = ses.phi_rank(&spec).unwrap() == choose(n as u64, k as i64);
                let predicted = (k as u64) < least_two_power(t as u64).unwrap()
                    && 2 * k + t <= n;
                assert_eq!(surjective, predicted, "n={n} t={t} k={k}");
            }
        }
    }
}

#[test]
fn triple_map_identity_matches_parity() {
    for n in 1u32..=10 {
        for k in 0..=(n as i64) {
            assert!(check_gamma_chain_identity(n, k).unwrap(), "n={n} k={k}");
        }
    }
}

#[test]
fn middle_endomorphism_commutes_with_relabeling() {
    // The composite of the one-step map with its transpose is equivariant,
    // so its induced action on middle homology commutes with every induced
    // relabeling.
    for n in [4u32, 6, 8] {
        let m = (n / 2) as i64;
        let gamma = phi_matrix(n, m, 1, 2).unwrap();
        let e_op = gamma.mul(&gamma.transpose()).unwrap();
        let kernel = phi_matrix(n, m, 2, 2).unwrap().left_kernel();
        let image = phi_matrix(n, m + 2, 2, 2).unwrap().row_space();
        let quotient = QuotientBasis::new(&kernel, &image).unwrap();
        let theta = quotient.induced(&e_op).unwrap();
        for a in 1..n {
            let sigma = Perm::transposition(n, a, a + 1).unwrap();
            let action = perm_matrix(n, m as u32, 2, &sigma).unwrap();
            let induced = quotient.induced(&action).unwrap();
            assert_eq!(
                theta.mul(&induced).unwrap(),
                induced.mul(&theta).unwrap(),
                "n={n} swap=({a},{})",
                a + 1
            );
        }
    }
}

#[test]
fn restricted_differential_lands_in_restricted_kernel() {
    // The t-step map sends s-step kernels to s-step kernels, which is what
    // makes the restricted complexes well-defined in the first place.
    let mut checked = 0;
    for n in 2u32..=10 {
        for p in [2u8, 3] {
            if p == 3 && n > 8 {
                continue;
            }
            for s in [1u32, 2, 4] {
                for t in [1u32, 2, 4] {
                    for k in 1..=(n as i64) {
                        let ker = build_phi(&BoundaryMapSpec { n, k, t: s, p, dual: false })
                            .unwrap()
                            .left_kernel();
                        if ker.dim() == 0 {
                            continue;
                        }
                        let step = phi_matrix(n, k, t, p).unwrap();
                        let moved = ker.basis_matrix().mul(&step).unwrap();
                        let lower =
                            phi_matrix(n, k - t as i64, s, p).unwrap();
                        assert!(
                            moved.mul(&lower).unwrap().is_zero(),
                            "n={n} p={p} s={s} t={t} k={k}"
                        );
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 300, "the grid actually exercised cases, got {checked}");
}

/// Homology at degree j of the complement-side family: kernels of the
/// upward s-step map, with the upward t-step map as differential.
fn dual_family_dim(n: u32, j: i64, s: u32, t: u32) -> u64 {
    let up = |deg: i64, step: u32| {
        build_phi(&BoundaryMapSpec { n, k: deg + step as i64, t: step, p: 2, dual: true })
            .unwrap()
    };
    let cycles = up(j, s)
        .left_kernel()
        .intersection(&up(j, t).left_kernel())
        .unwrap();
    let below = up(j - t as i64, s).left_kernel();
    let boundaries =
        below.basis_matrix().mul(&up(j - t as i64, t)).unwrap().row_space();
    assert!(boundaries.leq(&cycles).unwrap(), "complement family fails at n={n} j={j}");
    (cycles.dim() - boundaries.dim()) as u64
}

#[test]
fn restricted_family_agrees_with_complement_dual_family() {
    // Complementing subsets swaps each map with the transpose of its mirror,
    // so the restricted homology at degree k matches the dual-map family at
    // degree n−k.
    for n in 2u32..=8 {
        for (s, t) in [(1u32, 2u32), (2, 1)] {
            for k in 0..=(n as i64) {
                let here =
                    restricted_homology(&RestrictedHomologySpec { n, p: 2, k, s, t }).unwrap();
                assert_eq!(here, dual_family_dim(n, n as i64 - k, s, t), "n={n} s={s} t={t} k={k}");
            }
        }
    }

    // For the family of one-step kernels the pairing folds back into the
    // family itself one degree off: degrees 2 and 3 pair at n = 6, and the
    // same reflection holds across the grid.
    for n in 2u32..=8 {
        for k in 0..=(n as i64 - 1) {
            let spec = |k| RestrictedHomologySpec { n, p: 2, k, s: 1, t: 2 };
            assert_eq!(
                restricted_homology(&spec(k)).unwrap(),
                restricted_homology(&spec(n as i64 - 1 - k)).unwrap(),
                "n={n} k={k}"
            );
        }
    }
}
