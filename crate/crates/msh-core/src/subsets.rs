//! Ground-set combinatorics: subsets of {1..n} as bitmasks, colexicographic
//! ranking, exact binomial arithmetic, the carry-free predicate, and the
//! standalone integer identities the chain complexes categorify.

use std::fmt;
use std::ops::RangeInclusive;
use std::sync::OnceLock;

pub use num_bigint::BigInt;

use crate::report::IdentityReport;
use crate::{Error, Result};

/// Largest row index of the cached Pascal triangle. C(66,33) still fits in a
/// u64; one row higher it would not.
const PASCAL_MAX: usize = 66;

fn pascal_table() -> &'static Vec<Vec<u64>> {
    static TABLE: OnceLock<Vec<Vec<u64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table: Vec<Vec<u64>> = vec![vec![1]];
        for n in 1..=PASCAL_MAX {
            let prev = &table[n - 1];
            let mut row = vec![1u64];
            for k in 1..n {
                row.push(prev[k - 1] + prev[k]);
            }
            row.push(1);
            table.push(row);
        }
        table
    })
}

/// Binomial coefficient C(n, k) as an exact integer.
///
/// # Arguments
/// * `n` - number of items.
/// * `k` - selection size; values outside `0..=n` are allowed.
///
/// # Returns
/// C(n, k), or zero when `k < 0` or `k > n` (the convention under which the
/// spaces in out-of-range degrees are the zero space).
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::from(0);
    }
    if n as usize <= PASCAL_MAX {
        return BigInt::from(pascal_table()[n as usize][k as usize]);
    }
    // Multiplicative formula for the rare large inputs.
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// C(n, k) as a machine integer, for the dimension bookkeeping where the
/// result is known to be small.
///
/// # Panics
/// Panics if `n` exceeds the cached Pascal range (66).
pub fn choose(n: u64, k: i64) -> u64 {
    assert!(
        n as usize <= PASCAL_MAX,
        "choose({n}, {k}) outside the u64-exact range; use binomial()"
    );
    if k < 0 || k as u64 > n {
        0
    } else {
        pascal_table()[n as usize][k as usize]
    }
}

/// Deterministic trial-division primality check for the small moduli used
/// throughout the crate.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Whether the addition s + t is carry-free in base p, i.e. whether no digit
/// position overflows. By Lucas' theorem this is equivalent to
/// C(s+t, s) ≢ 0 mod p, and for p = 2 to the binary digits of s and t never
/// overlapping.
///
/// # Errors
/// Returns [`Error::BadPrime`] when `p` is not prime.
pub fn carry_free(s: u64, t: u64, p: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::BadPrime(p));
    }
    let (mut s, mut t) = (s, t);
    while s > 0 || t > 0 {
        if s % p + t % p >= p {
            return Ok(false);
        }
        s /= p;
        t /= p;
    }
    Ok(true)
}

/// The largest power of two dividing `t` (equivalently, the lowest set bit
/// of its binary form).
///
/// # Errors
/// Returns [`Error::ZeroStep`] when `t = 0`.
pub fn least_two_power(t: u64) -> Result<u64> {
    if t == 0 {
        return Err(Error::ZeroStep);
    }
    Ok(t & t.wrapping_neg())
}

/// Fibonacci number F(n) with F(0) = 0, F(1) = 1.
pub fn fibonacci(n: u64) -> BigInt {
    let (mut a, mut b) = (BigInt::from(0), BigInt::from(1));
    for _ in 0..n {
        let next = &a + &b;
        a = b;
        b = next;
    }
    a
}

/// A subset of {1..32} packed as a bitmask; bit e−1 set means element e is
/// present. Subsets are the standard basis labels of the ambient spaces.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(u32);

impl Subset {
    /// The empty set, the single basis element in degree zero.
    pub const EMPTY: Subset = Subset(0);

    /// Builds a subset from an element list.
    ///
    /// # Errors
    /// Rejects elements outside 1..=32 and duplicated elements.
    pub fn from_elems(elems: &[u32]) -> Result<Subset> {
        let mut mask = 0u32;
        for &e in elems {
            if e == 0 || e > 32 {
                return Err(Error::BadSubset(format!(
                    "element {e} outside the supported range 1..=32"
                )));
            }
            let bit = 1u32 << (e - 1);
            if mask & bit != 0 {
                return Err(Error::BadSubset(format!("duplicate element {e}")));
            }
            mask |= bit;
        }
        Ok(Subset(mask))
    }

    /// Reconstructs a subset from its raw mask.
    pub fn from_mask(mask: u32) -> Subset {
        Subset(mask)
    }

    /// The full set {1..m}.
    pub fn full(m: u32) -> Subset {
        assert!(m <= 32);
        if m == 0 {
            Subset(0)
        } else {
            Subset(u32::MAX >> (32 - m))
        }
    }

    /// Raw bitmask. Numeric order on masks coincides with colexicographic
    /// order on subsets.
    pub fn mask(self) -> u32 {
        self.0
    }

    /// Number of elements.
    pub fn card(self) -> u32 {
        self.0.count_ones()
    }

    /// Elements in increasing order.
    pub fn elems(self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.card() as usize);
        let mut m = self.0;
        while m != 0 {
            out.push(m.trailing_zeros() + 1);
            m &= m - 1;
        }
        out
    }

    /// Whether element `e` is present.
    pub fn contains(self, e: u32) -> bool {
        e >= 1 && e <= 32 && self.0 >> (e - 1) & 1 == 1
    }

    /// Whether every element of `self` lies in `other`.
    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    /// Whether the two subsets share no element.
    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    /// Set union.
    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    /// Set intersection.
    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    /// Set difference `self \ other`.
    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elems().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

/// Fixed coordinates for the space spanned by the k-subsets of {1..n}:
/// the bijection between those subsets and `0..C(n,k)` in colexicographic
/// order (S < T iff the largest element of their symmetric difference lies
/// in T).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisMap {
    n: u32,
    k: u32,
}

impl BasisMap {
    /// Coordinates for the k-subsets of {1..n}.
    ///
    /// # Errors
    /// Rejects `n > 32` (mask width). `k > n` is allowed and yields the
    /// empty basis of the zero space.
    pub fn new(n: u32, k: u32) -> Result<BasisMap> {
        if n > 32 {
            return Err(Error::GroundSetTooLarge(n, 32));
        }
        Ok(BasisMap { n, k })
    }

    /// Ground-set size.
    pub fn n(self) -> u32 {
        self.n
    }

    /// Subset size.
    pub fn k(self) -> u32 {
        self.k
    }

    /// Number of basis elements, C(n, k).
    pub fn size(self) -> u64 {
        choose(self.n as u64, self.k as i64)
    }

    /// Colexicographic rank of `s`: with elements s_1 < … < s_k, the rank is
    /// Σ_j C(s_j − 1, j).
    ///
    /// # Errors
    /// Rejects subsets whose size is not `k` or that are not contained in
    /// {1..n}.
    pub fn rank(self, s: Subset) -> Result<u64> {
        if s.card() != self.k {
            return Err(Error::BadSubset(format!(
                "{s} has {} elements, expected {}",
                s.card(),
                self.k
            )));
        }
        if !s.is_subset_of(Subset::full(self.n)) {
            return Err(Error::BadSubset(format!(
                "{s} is not contained in {{1..{}}}",
                self.n
            )));
        }
        let mut rank = 0u64;
        for (j, e) in s.elems().into_iter().enumerate() {
            rank += choose(e as u64 - 1, j as i64 + 1);
        }
        Ok(rank)
    }

    /// Inverse of [`BasisMap::rank`].
    ///
    /// # Errors
    /// Rejects `index ≥ C(n,k)`.
    pub fn unrank(self, index: u64) -> Result<Subset> {
        if index >= self.size() {
            return Err(Error::IndexOutOfRange {
                index,
                size: self.size(),
                space: format!("basis of {}-subsets of {{1..{}}}", self.k, self.n),
            });
        }
        let mut rem = index;
        let mut mask = 0u32;
        for j in (1..=self.k as u64).rev() {
            // Largest v with C(v−1, j) ≤ rem is the j-th smallest element.
            let mut v = self.n as u64;
            while choose(v - 1, j as i64) > rem {
                v -= 1;
            }
            rem -= choose(v - 1, j as i64);
            mask |= 1 << (v - 1);
        }
        Ok(Subset(mask))
    }

    /// All basis subsets in colexicographic order.
    pub fn iter(self) -> ColexIter {
        ColexIter {
            mask: if self.k == 0 { 0 } else { (1u64 << self.k) - 1 },
            remaining: self.size(),
        }
    }
}

/// Iterator over the k-subsets of {1..n} in colexicographic order, produced
/// by stepping to the numerically next mask of equal popcount.
pub struct ColexIter {
    mask: u64,
    remaining: u64,
}

impl Iterator for ColexIter {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        if self.remaining == 0 {
            return None;
        }
        let cur = self.mask;
        self.remaining -= 1;
        if self.remaining > 0 {
            let u = cur & cur.wrapping_neg();
            let v = cur + u;
            self.mask = v | (((cur ^ v) / u) >> 2);
        }
        Some(Subset(cur as u32))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining as usize, Some(self.remaining as usize))
    }
}

impl ExactSizeIterator for ColexIter {}

/// Colexicographic rank of `s` among the k-subsets of {1..n}.
pub fn subset_rank(n: u32, k: u32, s: Subset) -> Result<u64> {
    BasisMap::new(n, k)?.rank(s)
}

/// The k-subset of {1..n} with colexicographic rank `index`.
pub fn subset_unrank(n: u32, k: u32, index: u64) -> Result<Subset> {
    BasisMap::new(n, k)?.unrank(index)
}

/// All k-subsets of {1..n} in colexicographic order. Empty when `k > n`.
pub fn subsets_colex(n: u32, k: u32) -> ColexIter {
    BasisMap::new(n, k)
        .expect("n <= 32 required")
        .iter()
}

/// The integer identities whose two sides the chain complexes realize as
/// alternating sums of space dimensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IdentityKind {
    /// Σ_j (−1)^j C(2m, 2j), parameter m.
    Even2m,
    /// Σ_j (−1)^j C(2m+1, 2j), parameter m.
    Odd2m1,
    /// Σ_j C(n, 3j) − Σ_j C(n, 3j+1), parameter n.
    Mod3,
    /// Σ_j C(5m, 5j) − Σ_j C(5m, 5j+1), parameter m ≥ 1.
    Fib5m,
    /// Σ_j C(5m+2, 5j) − Σ_j C(5m+2, 5j+1), parameter m.
    Fib5m2,
    /// F_n = Σ_k (−1)^k C(n, ⌊(n−1−5k)/2⌋), parameter n.
    Andrews,
}

impl IdentityKind {
    /// Every identity, in the order they are reported.
    pub const ALL: [IdentityKind; 6] = [
        IdentityKind::Even2m,
        IdentityKind::Odd2m1,
        IdentityKind::Mod3,
        IdentityKind::Fib5m,
        IdentityKind::Fib5m2,
        IdentityKind::Andrews,
    ];

    /// Stable string tag used in reports and on the command line.
    pub fn tag(self) -> &'static str {
        match self {
            IdentityKind::Even2m => "even_2m",
            IdentityKind::Odd2m1 => "odd_2m1",
            IdentityKind::Mod3 => "mod3",
            IdentityKind::Fib5m => "fib_5m",
            IdentityKind::Fib5m2 => "fib_5m2",
            IdentityKind::Andrews => "andrews",
        }
    }

    /// Inverse of [`IdentityKind::tag`].
    pub fn from_tag(tag: &str) -> Option<IdentityKind> {
        IdentityKind::ALL.into_iter().find(|k| k.tag() == tag)
    }

    /// The parameter range each identity is verified over by default.
    pub fn default_range(self) -> RangeInclusive<u64> {
        match self {
            IdentityKind::Even2m | IdentityKind::Odd2m1 => 0..=32,
            IdentityKind::Mod3 => 0..=64,
            IdentityKind::Fib5m => 1..=12,
            IdentityKind::Fib5m2 => 0..=12,
            IdentityKind::Andrews => 0..=64,
        }
    }
}

fn neg_one_pow(e: i64) -> BigInt {
    if e.rem_euclid(2) == 0 {
        BigInt::from(1)
    } else {
        BigInt::from(-1)
    }
}

/// Σ_j C(n, qj + r0) − Σ_j C(n, qj + r1), both sums over all j ≥ 0 with the
/// selection index in range.
fn residue_difference(n: u64, q: u64, r0: u64, r1: u64) -> BigInt {
    let mut acc = BigInt::from(0);
    let mut idx = r0;
    while idx <= n {
        acc += binomial(n, idx as i64);
        idx += q;
    }
    let mut idx = r1;
    while idx <= n {
        acc -= binomial(n, idx as i64);
        idx += q;
    }
    acc
}

/// Both sides of one identity at one parameter, computed in exact integer
/// arithmetic.
pub fn identity_report(kind: IdentityKind, param: u64) -> IdentityReport {
    let (lhs, rhs) = match kind {
        IdentityKind::Even2m => {
            let m = param;
            let mut lhs = BigInt::from(0);
            for j in 0..=m {
                lhs += neg_one_pow(j as i64) * binomial(2 * m, 2 * j as i64);
            }
            let rhs = if m % 2 == 1 {
                BigInt::from(0)
            } else {
                neg_one_pow((m / 2) as i64) * BigInt::from(2).pow(m as u32)
            };
            (lhs, rhs)
        }
        IdentityKind::Odd2m1 => {
            let m = param;
            let mut lhs = BigInt::from(0);
            for j in 0..=m {
                lhs += neg_one_pow(j as i64) * binomial(2 * m + 1, 2 * j as i64);
            }
            let half = if m % 2 == 0 { m / 2 } else { (m + 1) / 2 };
            let rhs = neg_one_pow(half as i64) * BigInt::from(2).pow(m as u32);
            (lhs, rhs)
        }
        IdentityKind::Mod3 => {
            let n = param;
            let lhs = residue_difference(n, 3, 0, 1);
            let rhs = match n % 3 {
                0 => neg_one_pow(n as i64),
                1 => BigInt::from(0),
                _ => neg_one_pow(n as i64 - 1),
            };
            (lhs, rhs)
        }
        IdentityKind::Fib5m => {
            let m = param;
            let lhs = residue_difference(5 * m, 5, 0, 1);
            // F(5m−1); read F(−1) = 1 at m = 0 so the statement extends.
            let f = if m == 0 {
                BigInt::from(1)
            } else {
                fibonacci(5 * m - 1)
            };
            (lhs, neg_one_pow(m as i64) * f)
        }
        IdentityKind::Fib5m2 => {
            let m = param;
            let lhs = residue_difference(5 * m + 2, 5, 0, 1);
            let rhs = neg_one_pow(m as i64 + 1) * fibonacci(5 * m + 1);
            (lhs, rhs)
        }
        IdentityKind::Andrews => {
            let n = param as i64;
            let mut lhs = BigInt::from(0);
            let lo = -(n + 2).div_euclid(5);
            let hi = (n - 1).div_euclid(5);
            for k in lo..=hi {
                let idx = (n - 1 - 5 * k).div_euclid(2);
                lhs += neg_one_pow(k) * binomial(n as u64, idx);
            }
            (lhs, fibonacci(param))
        }
    };
    IdentityReport {
        identity_name: kind.tag().to_string(),
        parameter: param,
        holds: lhs == rhs,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

/// [`identity_report`] over a parameter range.
pub fn verify_identity(kind: IdentityKind, range: RangeInclusive<u64>) -> Vec<IdentityReport> {
    range.map(|param| identity_report(kind, param)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_fixed_values() {
        assert_eq!(binomial(6, 3), BigInt::from(20));
        assert_eq!(binomial(13, 4), BigInt::from(715));
        assert_eq!(binomial(5, -1), BigInt::from(0));
        assert_eq!(binomial(5, 6), BigInt::from(0));
        assert_eq!(binomial(0, 0), BigInt::from(1));
        // Beyond the u64 table: check against the symmetric entry.
        assert_eq!(binomial(70, 35), binomial(69, 34) + binomial(69, 35));
    }

    #[test]
    fn choose_agrees_with_binomial() {
        for n in 0..=16u64 {
            for k in -1..=(n as i64 + 1) {
                assert_eq!(BigInt::from(choose(n, k)), binomial(n, k));
            }
        }
    }

    #[test]
    fn carry_free_fixed_values() {
        assert!(!carry_free(2, 2, 2).unwrap());
        assert!(carry_free(1, 2, 2).unwrap());
        assert!(!carry_free(2, 1, 3).unwrap());
        assert!(carry_free(0, 7, 2).unwrap());
        assert!(matches!(carry_free(1, 1, 4), Err(Error::BadPrime(4))));
        assert!(matches!(carry_free(1, 1, 1), Err(Error::BadPrime(1))));
    }

    #[test]
    fn carry_free_matches_binomial_divisibility() {
        for p in [2u64, 3, 5, 7] {
            for s in 0..=20u64 {
                for t in 0..=20u64 {
                    let direct = binomial(s + t, s as i64) % BigInt::from(p) != BigInt::from(0);
                    assert_eq!(carry_free(s, t, p).unwrap(), direct, "s={s} t={t} p={p}");
                }
            }
        }
    }

    #[test]
    fn least_two_power_fixed_values() {
        assert_eq!(least_two_power(4).unwrap(), 4);
        assert_eq!(least_two_power(6).unwrap(), 2);
        assert_eq!(least_two_power(13).unwrap(), 1);
        assert!(matches!(least_two_power(0), Err(Error::ZeroStep)));
    }

    #[test]
    fn subset_construction_and_accessors() {
        let s = Subset::from_elems(&[2, 4, 1]).unwrap();
        assert_eq!(s.elems(), vec![1, 2, 4]);
        assert_eq!(s.card(), 3);
        assert!(s.contains(2));
        assert!(!s.contains(3));
        assert!(Subset::from_elems(&[0]).is_err());
        assert!(Subset::from_elems(&[33]).is_err());
        assert!(Subset::from_elems(&[5, 5]).is_err());
        assert_eq!(Subset::full(4).elems(), vec![1, 2, 3, 4]);
        assert_eq!(format!("{s}"), "{1,2,4}");
    }

    #[test]
    fn rank_fixed_values() {
        let s12 = Subset::from_elems(&[1, 2]).unwrap();
        let s34 = Subset::from_elems(&[3, 4]).unwrap();
        let s13 = Subset::from_elems(&[1, 3]).unwrap();
        assert_eq!(subset_rank(4, 2, s12).unwrap(), 0);
        assert_eq!(subset_rank(4, 2, s34).unwrap(), 5);
        assert_eq!(subset_unrank(4, 2, 1).unwrap(), s13);
        assert!(subset_rank(4, 3, s12).is_err());
        assert!(subset_rank(2, 2, s34).is_err());
        assert!(matches!(
            subset_unrank(4, 2, 6),
            Err(Error::IndexOutOfRange { index: 6, size: 6, .. })
        ));
    }

    #[test]
    fn rank_roundtrip_and_monotone() {
        for n in 0..=10u32 {
            for k in 0..=n {
                let basis = BasisMap::new(n, k).unwrap();
                let mut last_mask = None;
                for i in 0..basis.size() {
                    let s = basis.unrank(i).unwrap();
                    assert_eq!(basis.rank(s).unwrap(), i);
                    if let Some(prev) = last_mask {
                        assert!(s.mask() > prev, "colex order is numeric mask order");
                    }
                    last_mask = Some(s.mask());
                }
            }
        }
    }

    #[test]
    fn colex_iter_matches_unrank() {
        for n in 0..=10u32 {
            for k in 0..=(n + 1) {
                let basis = BasisMap::new(n, k).unwrap();
                let listed: Vec<Subset> = basis.iter().collect();
                assert_eq!(listed.len() as u64, basis.size());
                for (i, s) in listed.iter().enumerate() {
                    assert_eq!(basis.unrank(i as u64).unwrap(), *s);
                }
            }
        }
    }

    #[test]
    fn identity_fixed_values() {
        let r = identity_report(IdentityKind::Even2m, 2);
        assert!(r.holds);
        assert_eq!(r.lhs, "-4");
        assert_eq!(r.rhs, "-4");

        let r = identity_report(IdentityKind::Odd2m1, 1);
        assert!(r.holds);
        assert_eq!(r.lhs, "-2");

        let r = identity_report(IdentityKind::Fib5m, 1);
        assert!(r.holds);
        assert_eq!(r.lhs, "-3");

        assert_eq!(fibonacci(10), BigInt::from(55));
        assert_eq!(fibonacci(0), BigInt::from(0));
        assert_eq!(fibonacci(1), BigInt::from(1));
    }

    #[test]
    fn identities_hold_over_default_ranges() {
        for kind in IdentityKind::ALL {
            for report in verify_identity(kind, kind.default_range()) {
                assert!(
                    report.holds,
                    "{} at {}: {} vs {}",
                    report.identity_name, report.parameter, report.lhs, report.rhs
                );
            }
        }
    }

    #[test]
    fn identity_tags_roundtrip() {
        for kind in IdentityKind::ALL {
            assert_eq!(IdentityKind::from_tag(kind.tag()), Some(kind));
        }
        assert_eq!(IdentityKind::from_tag("nope"), None);
    }
}
