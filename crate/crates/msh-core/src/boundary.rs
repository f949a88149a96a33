//! The multistep boundary maps: matrices of the map sending a k-subset to
//! the sum of its (k−t)-subsets, the dual map sending a subset to the sum of
//! its supersets, symmetric-group actions on the subset bases, vectors in
//! the subset modules, the designated kernel elements, and the structural
//! checks (composition, the product splitting rule, and the suspension
//! reconstruction).

use serde::{Deserialize, Serialize};

use crate::gfmat::{FpMatrix, RowVec};
use crate::report::Verdict;
use crate::subsets::{carry_free, choose, is_prime, BasisMap, Subset};
use crate::{Error, Result, MAX_N};

/// Dimension of the degree-k module over an n-element ground set: C(n, k)
/// inside the valid range and 0 outside it.
pub fn omega_dim(n: u32, k: i64) -> u64 {
    if (0..=n as i64).contains(&k) {
        choose(n as u64, k)
    } else {
        0
    }
}

fn check_prime(p: u8) -> Result<()> {
    if is_prime(p as u64) {
        Ok(())
    } else {
        Err(Error::BadPrime(p as u64))
    }
}

fn check_ground_set(n: u32) -> Result<()> {
    if n > MAX_N {
        Err(Error::GroundSetTooLarge(n, MAX_N))
    } else {
        Ok(())
    }
}

/// Which boundary matrix to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundaryMapSpec {
    /// Ground set size.
    pub n: u32,
    /// Source degree. Out-of-range degrees give genuinely empty matrices.
    pub k: i64,
    /// Number of elements removed (or added, for the dual map).
    pub t: u32,
    /// Field characteristic.
    pub p: u8,
    /// False builds the downward map on degree k; true builds the upward
    /// dual map out of degree k−t, whose matrix is the transpose.
    pub dual: bool,
}

/// Builds the matrix of a boundary map in the basis ordered by colex rank.
///
/// Rows index the source basis and columns the target basis, so a module
/// element maps through right multiplication. The plain map takes each
/// k-subset to the coefficient-1 sum of its (k−t)-subsets; the dual map
/// takes each (k−t)-subset to the sum of its k-element supersets, and the
/// two matrices are transposes of each other (they are built independently
/// here so tests can confirm that).
///
/// # Arguments
/// * `spec` - dimensions, step size, characteristic, and direction.
///
/// # Returns
/// The boundary matrix; when either degree falls outside 0..=n the matrix
/// has zero rows or columns.
///
/// # Errors
/// [`Error::ZeroStep`] if `spec.t` is zero, [`Error::GroundSetTooLarge`] if
/// `spec.n` exceeds [`MAX_N`], and [`Error::BadPrime`] for a composite
/// characteristic.
pub fn build_phi(spec: &BoundaryMapSpec) -> Result<FpMatrix> {
    if spec.t == 0 {
        return Err(Error::ZeroStep);
    }
    check_ground_set(spec.n)?;
    check_prime(spec.p)?;
    let n = spec.n;
    let k = spec.k;
    let sub = k - spec.t as i64;
    let upper = omega_dim(n, k) as usize;
    let lower = omega_dim(n, sub) as usize;
    let (rows, cols) = if spec.dual { (lower, upper) } else { (upper, lower) };
    let mut m = FpMatrix::zero(rows, cols, spec.p)?;
    if upper == 0 || lower == 0 {
        return Ok(m);
    }
    let upper_map = BasisMap::new(n, k as u32)?;
    let lower_map = BasisMap::new(n, sub as u32)?;
    if spec.dual {
        // Row X of size k−t: add every t-element extension from the
        // complement of X.
        for (row, x) in lower_map.iter().enumerate() {
            let complement: Vec<u32> = (1..=n).filter(|&e| !x.contains(e)).collect();
            for added in BasisMap::new(complement.len() as u32, spec.t)?.iter() {
                let mut z = x;
                for pos in added.elems() {
                    z = z.union(Subset::from_elems(&[complement[pos as usize - 1]])?);
                }
                let col = upper_map.rank(z)? as usize;
                m.set(row, col, 1);
            }
        }
    } else {
        // Row Y of size k: keep every (k−t)-element selection of positions.
        for (row, y) in upper_map.iter().enumerate() {
            let elems = y.elems();
            for kept in BasisMap::new(k as u32, sub as u32)?.iter() {
                let mut x = Subset::EMPTY;
                for pos in kept.elems() {
                    x = x.union(Subset::from_elems(&[elems[pos as usize - 1]])?);
                }
                let col = lower_map.rank(x)? as usize;
                m.set(row, col, 1);
            }
        }
    }
    Ok(m)
}

/// Convenience wrapper for the plain (non-dual) boundary matrix.
///
/// # Errors
/// Same conditions as [`build_phi`].
pub fn phi_matrix(n: u32, k: i64, t: u32, p: u8) -> Result<FpMatrix> {
    build_phi(&BoundaryMapSpec { n, k, t, p, dual: false })
}

/// A permutation of {1..n}, stored as the image list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    /// The identity permutation on {1..n}.
    pub fn identity(n: u32) -> Perm {
        Perm { images: (1..=n).collect() }
    }

    /// The transposition (a, b) on {1..n}.
    ///
    /// # Errors
    /// [`Error::Precondition`] unless 1 ≤ a, b ≤ n and a ≠ b.
    pub fn transposition(n: u32, a: u32, b: u32) -> Result<Perm> {
        if a == 0 || b == 0 || a > n || b > n || a == b {
            return Err(Error::Precondition(format!(
                "transposition ({a}, {b}) is not valid on {{1..{n}}}"
            )));
        }
        let mut p = Perm::identity(n);
        p.images.swap(a as usize - 1, b as usize - 1);
        Ok(p)
    }

    /// Builds a permutation from its image list: `images[i]` is the image
    /// of i+1.
    ///
    /// # Errors
    /// [`Error::Precondition`] if the list is not a bijection of {1..n}.
    pub fn from_images(images: Vec<u32>) -> Result<Perm> {
        let n = images.len() as u32;
        let mut seen = vec![false; n as usize];
        for &im in &images {
            if im == 0 || im > n || seen[im as usize - 1] {
                return Err(Error::Precondition(format!(
                    "image list {images:?} is not a permutation of {{1..{n}}}"
                )));
            }
            seen[im as usize - 1] = true;
        }
        Ok(Perm { images })
    }

    /// Size of the permuted set.
    pub fn n(&self) -> u32 {
        self.images.len() as u32
    }

    /// Image of a single element.
    ///
    /// # Panics
    /// Panics if `e` is outside {1..n}.
    pub fn apply(&self, e: u32) -> u32 {
        self.images[e as usize - 1]
    }

    /// Elementwise image of a subset.
    pub fn apply_subset(&self, s: Subset) -> Subset {
        let elems: Vec<u32> = s.elems().iter().map(|&e| self.apply(e)).collect();
        Subset::from_elems(&elems).expect("a bijection maps distinct elements to distinct images")
    }

    /// The composite mapping e to `other(self(e))`.
    ///
    /// # Errors
    /// [`Error::Precondition`] if the two permutations act on different sets.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.n() != other.n() {
            return Err(Error::Precondition(
                "composed permutations must act on the same set".into(),
            ));
        }
        Ok(Perm {
            images: self.images.iter().map(|&e| other.apply(e)).collect(),
        })
    }

    /// The inverse permutation.
    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u32; self.images.len()];
        for (i, &im) in self.images.iter().enumerate() {
            images[im as usize - 1] = i as u32 + 1;
        }
        Perm { images }
    }
}

/// The permutation matrix of the action on the degree-k basis: entry
/// (rank(S), rank(Sσ)) is 1, so right multiplication moves a row vector the
/// same way σ moves subsets.
///
/// # Errors
/// Propagates basis construction failures; requires k ≤ n.
pub fn perm_matrix(n: u32, k: u32, p: u8, sigma: &Perm) -> Result<FpMatrix> {
    check_prime(p)?;
    if sigma.n() != n {
        return Err(Error::Precondition(format!(
            "permutation on {} points used with ground set of size {n}",
            sigma.n()
        )));
    }
    let map = BasisMap::new(n, k)?;
    let size = map.size() as usize;
    let mut m = FpMatrix::zero(size, size, p)?;
    for (row, s) in map.iter().enumerate() {
        let col = map.rank(sigma.apply_subset(s))? as usize;
        m.set(row, col, 1);
    }
    Ok(m)
}

/// Gather map for the basis action of σ on degree k: output position j holds
/// input position rank(σ⁻¹(T_j)), so `row.gather(&map)` equals
/// `perm_matrix(..).vec_mul(row)` without building the matrix.
///
/// # Errors
/// Same conditions as [`perm_matrix`].
pub fn basis_index_map(n: u32, k: u32, sigma: &Perm) -> Result<Vec<usize>> {
    if sigma.n() != n {
        return Err(Error::Precondition(format!(
            "permutation on {} points used with ground set of size {n}",
            sigma.n()
        )));
    }
    let map = BasisMap::new(n, k)?;
    let inv = sigma.inverse();
    let mut out = Vec::with_capacity(map.size() as usize);
    for t in map.iter() {
        out.push(map.rank(inv.apply_subset(t))? as usize);
    }
    Ok(out)
}

/// An element of the degree-k module over GF(p): a coefficient row in the
/// colex-ordered subset basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaVector {
    n: u32,
    k: u32,
    p: u8,
    row: RowVec,
}

impl OmegaVector {
    /// The zero element of the degree-k module. A degree above n is allowed
    /// and gives the zero module (an empty coefficient row).
    ///
    /// # Errors
    /// [`Error::GroundSetTooLarge`] or [`Error::BadPrime`].
    pub fn zero(n: u32, k: u32, p: u8) -> Result<OmegaVector> {
        check_ground_set(n)?;
        check_prime(p)?;
        let width = omega_dim(n, k as i64) as usize;
        Ok(OmegaVector { n, k, p, row: RowVec::zero(width, p)? })
    }

    /// The basis element for a single subset.
    ///
    /// # Errors
    /// [`Error::BadSubset`] if `s` does not fit inside {1..n}.
    pub fn basis(n: u32, p: u8, s: Subset) -> Result<OmegaVector> {
        let mut v = OmegaVector::zero(n, s.card(), p)?;
        v.add_term(s, 1)?;
        Ok(v)
    }

    /// Rebuilds a vector from a raw coefficient row.
    ///
    /// # Errors
    /// [`Error::DimensionMismatch`] if the row width or modulus does not
    /// match the degree-k module.
    pub fn from_row(n: u32, k: u32, p: u8, row: RowVec) -> Result<OmegaVector> {
        let probe = OmegaVector::zero(n, k, p)?;
        if row.cols() != probe.row.cols() || row.p() != p {
            return Err(Error::DimensionMismatch(format!(
                "row of width {} mod {} for the degree-{k} module over {{1..{n}}}",
                row.cols(),
                row.p()
            )));
        }
        Ok(OmegaVector { n, k, p, row })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    /// The coefficient row.
    pub fn row(&self) -> &RowVec {
        &self.row
    }

    /// Adds `c` times the basis element of `s`.
    ///
    /// # Errors
    /// [`Error::BadSubset`] if `s` has the wrong cardinality or does not fit
    /// inside {1..n}.
    pub fn add_term(&mut self, s: Subset, c: u8) -> Result<()> {
        if s.card() != self.k {
            return Err(Error::BadSubset(format!(
                "{s} has cardinality {}, expected {}",
                s.card(),
                self.k
            )));
        }
        let idx = BasisMap::new(self.n, self.k)?.rank(s)? as usize;
        let cur = self.row.get(idx);
        self.row.set(idx, ((cur as u16 + c as u16) % self.p as u16) as u8);
        Ok(())
    }

    /// The coefficient of a single subset.
    ///
    /// # Errors
    /// [`Error::BadSubset`] under the same conditions as [`Self::add_term`].
    pub fn coeff(&self, s: Subset) -> Result<u8> {
        if s.card() != self.k {
            return Err(Error::BadSubset(format!(
                "{s} has cardinality {}, expected {}",
                s.card(),
                self.k
            )));
        }
        let idx = BasisMap::new(self.n, self.k)?.rank(s)? as usize;
        Ok(self.row.get(idx))
    }

    /// The nonzero terms as (subset, coefficient) pairs in colex order.
    pub fn terms(&self) -> Vec<(Subset, u8)> {
        let map = BasisMap::new(self.n, self.k).expect("validated at construction");
        self.row
            .iter_nonzero()
            .map(|(idx, c)| {
                (
                    map.unrank(idx as u64).expect("row width matches the basis"),
                    c,
                )
            })
            .collect()
    }

    /// Whether this is the zero element.
    pub fn is_zero(&self) -> bool {
        self.row.is_zero()
    }

    /// Union of the subsets appearing with nonzero coefficient.
    pub fn support(&self) -> Subset {
        self.terms()
            .into_iter()
            .fold(Subset::EMPTY, |acc, (s, _)| acc.union(s))
    }

    /// `self += other`.
    ///
    /// # Errors
    /// [`Error::DimensionMismatch`] unless degrees, ground sets, and moduli
    /// agree.
    pub fn add(&mut self, other: &OmegaVector) -> Result<()> {
        self.add_scaled(other, 1)
    }

    /// `self += c · other`.
    ///
    /// # Errors
    /// Same conditions as [`Self::add`].
    pub fn add_scaled(&mut self, other: &OmegaVector, c: u8) -> Result<()> {
        if self.n != other.n || self.k != other.k || self.p != other.p {
            return Err(Error::DimensionMismatch(
                "vectors live in different subset modules".into(),
            ));
        }
        self.row.add_scaled(&other.row, c % self.p);
        Ok(())
    }

    /// `self *= c`.
    pub fn scale(&mut self, c: u8) {
        self.row.scale(c % self.p);
    }

    /// Applies the t-step boundary map, landing in degree k−t.
    ///
    /// # Errors
    /// [`Error::ZeroStep`] if t is zero and [`Error::Precondition`] if
    /// t exceeds the degree.
    pub fn apply_phi(&self, t: u32) -> Result<OmegaVector> {
        if t == 0 {
            return Err(Error::ZeroStep);
        }
        if t > self.k {
            return Err(Error::Precondition(format!(
                "cannot remove {t} elements from degree {}",
                self.k
            )));
        }
        Ok(self
            .apply_phi_or_zero(t)?
            .expect("t <= k keeps the target degree non-negative"))
    }

    /// Boundary application that tolerates the degenerate steps appearing in
    /// convolution sums: t = 0 is the identity and t > k lands in a negative
    /// degree, reported as None (the zero of a zero module).
    fn apply_phi_or_zero(&self, t: u32) -> Result<Option<OmegaVector>> {
        if t == 0 {
            return Ok(Some(self.clone()));
        }
        if t > self.k {
            return Ok(None);
        }
        let m = build_phi(&BoundaryMapSpec {
            n: self.n,
            k: self.k as i64,
            t,
            p: self.p,
            dual: false,
        })?;
        let row = m.vec_mul(&self.row)?;
        Ok(Some(OmegaVector { n: self.n, k: self.k - t, p: self.p, row }))
    }

    /// The product concentrated in degree k_v + k_w: basis subsets multiply
    /// to their union when disjoint and to zero otherwise.
    ///
    /// # Errors
    /// [`Error::DimensionMismatch`] unless ground sets and moduli agree.
    pub fn disjoint_product(&self, other: &OmegaVector) -> Result<OmegaVector> {
        if self.n != other.n || self.p != other.p {
            return Err(Error::DimensionMismatch(
                "product factors live over different ground sets".into(),
            ));
        }
        let mut out = OmegaVector::zero(self.n, self.k + other.k, self.p)?;
        if out.row.cols() == 0 {
            return Ok(out);
        }
        for (s, c) in self.terms() {
            for (t, d) in other.terms() {
                if s.is_disjoint(t) {
                    out.add_term(s.union(t), ((c as u16 * d as u16) % self.p as u16) as u8)?;
                }
            }
        }
        Ok(out)
    }
}

/// Which designated kernel element to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VkSpec {
    /// Ground set size; the construction needs 2k ≤ n.
    pub n: u32,
    /// Degree of the element.
    pub k: u32,
    /// Step size of the boundary map it is built to annihilate.
    pub t: u32,
}

/// Builds the designated degree-k kernel element for the t-step map: the
/// base subset {2, 4, …, 2k} symmetrized over independently swapping each of
/// the first k−t+1 even elements with its odd predecessor. All 2^(k−t+1)
/// terms are distinct and carry coefficient 1.
///
/// # Errors
/// [`Error::Precondition`] unless 1 ≤ t ≤ k and 2k ≤ n, plus the usual
/// ground-set and prime validation.
pub fn build_v(spec: &VkSpec, p: u8) -> Result<OmegaVector> {
    let VkSpec { n, k, t } = *spec;
    if t == 0 {
        return Err(Error::ZeroStep);
    }
    if t > k || 2 * k > n {
        return Err(Error::Precondition(format!(
            "designated kernel element needs 1 <= t <= k and 2k <= n, got n={n} k={k} t={t}"
        )));
    }
    let mut v = OmegaVector::zero(n, k, p)?;
    let ell = k - t + 1;
    for pattern in 0u32..(1 << ell) {
        let mut elems: Vec<u32> = (1..=k).map(|i| 2 * i).collect();
        for i in 0..ell {
            if pattern >> i & 1 == 1 {
                elems[i as usize] = 2 * i + 1;
            }
        }
        v.add_term(Subset::from_elems(&elems)?, 1)?;
    }
    Ok(v)
}

/// Checks the composition law on matrices: applying the s-step map and then
/// the t-step map equals C(s+t, s) times the (s+t)-step map.
///
/// # Arguments
/// * `n`, `k` - ground set and source degree.
/// * `s`, `t` - the two step sizes, applied in that order.
/// * `p` - field characteristic.
///
/// # Returns
/// Whether the identity holds on the full matrices.
///
/// # Errors
/// [`Error::ZeroStep`] if either step is zero, plus the usual validation.
pub fn check_composition(n: u32, s: u32, t: u32, k: i64, p: u8) -> Result<bool> {
    if s == 0 || t == 0 {
        return Err(Error::ZeroStep);
    }
    let first = build_phi(&BoundaryMapSpec { n, k, t: s, p, dual: false })?;
    let second = build_phi(&BoundaryMapSpec { n, k: k - s as i64, t, p, dual: false })?;
    let combined = build_phi(&BoundaryMapSpec { n, k, t: s + t, p, dual: false })?;
    let coefficient =
        (crate::subsets::binomial((s + t) as u64, s as i64) % num_bigint::BigInt::from(p))
            .try_into()
            .expect("residue fits in u8");
    Ok(first.mul(&second)? == combined.scale(coefficient))
}

/// Checks the product splitting rule: for vectors with disjoint supports,
/// the boundary of the product is the convolution of the boundaries,
/// Σ over s of (v after s steps)(w after t−s steps).
///
/// # Returns
/// Whether the two sides agree.
///
/// # Errors
/// [`Error::Precondition`] if the supports overlap (the rule's hypothesis),
/// or [`Error::DimensionMismatch`] for incompatible vectors.
pub fn check_splitting_rule(v: &OmegaVector, w: &OmegaVector, t: u32) -> Result<bool> {
    if !v.support().is_disjoint(w.support()) {
        return Err(Error::Precondition(format!(
            "supports {} and {} overlap",
            v.support(),
            w.support()
        )));
    }
    let product = v.disjoint_product(w)?;
    let lhs = product.apply_phi_or_zero(t)?;
    let degree = v.k as i64 + w.k as i64 - t as i64;
    if degree < 0 {
        let lhs_zero = lhs.map_or(true, |x| x.is_zero());
        return Ok(lhs_zero);
    }
    let mut rhs = OmegaVector::zero(v.n, degree as u32, v.p)?;
    for s in 0..=t {
        let (Some(vs), Some(wt)) = (v.apply_phi_or_zero(s)?, w.apply_phi_or_zero(t - s)?) else {
            continue;
        };
        rhs.add(&vs.disjoint_product(&wt)?)?;
    }
    let lhs = lhs.expect("degree >= 0 means the product degree admits t steps");
    Ok(lhs == rhs)
}

/// Checks the suspension reconstruction: under its hypotheses a vector is
/// recovered from the product with the partially collapsed disjoint subset,
/// v = (v · (X after ℓ steps)) after t steps.
///
/// The hypotheses are verified first; any failure yields
/// [`Verdict::Inapplicable`] rather than an error so sweeps can distinguish
/// "hypothesis missed" from "conclusion failed". They are: characteristic 2,
/// ℓ < t, |X| = ℓ + t, X disjoint from the support of v, v killed by every
/// s-step map with ℓ < s ≤ t, the addition of ℓ to t carry-free, and the
/// addition of ℓ to t−s not carry-free for 0 < s ≤ ℓ.
///
/// # Returns
/// [`Verdict::Holds`] or [`Verdict::Fails`] for the conclusion when the
/// hypotheses are met, [`Verdict::Inapplicable`] otherwise.
///
/// # Errors
/// Only infrastructure failures (dimension mismatches and the like);
/// hypothesis violations are verdicts, not errors.
pub fn check_suspension(v: &OmegaVector, x: Subset, ell: u32, t: u32) -> Result<Verdict> {
    if v.p != 2 || ell >= t {
        return Ok(Verdict::Inapplicable);
    }
    if x.card() != ell + t || !x.is_subset_of(Subset::full(v.n)) {
        return Ok(Verdict::Inapplicable);
    }
    if !x.is_disjoint(v.support()) {
        return Ok(Verdict::Inapplicable);
    }
    for s in (ell + 1)..=t {
        let killed = match v.apply_phi_or_zero(s)? {
            Some(image) => image.is_zero(),
            None => true,
        };
        if !killed {
            return Ok(Verdict::Inapplicable);
        }
    }
    if !carry_free(ell as u64, t as u64, 2)? {
        return Ok(Verdict::Inapplicable);
    }
    for s in 1..=ell {
        if carry_free(ell as u64, (t - s) as u64, 2)? {
            return Ok(Verdict::Inapplicable);
        }
    }
    let x_vec = OmegaVector::basis(v.n, v.p, x)?;
    let collapsed = x_vec
        .apply_phi_or_zero(ell)?
        .expect("ell <= ell + t = |X|");
    let lifted = v.disjoint_product(&collapsed)?;
    let reconstructed = lifted
        .apply_phi_or_zero(t)?
        .expect("t <= k + t, the degree of the lifted vector");
    Ok(if &reconstructed == v {
        Verdict::Holds
    } else {
        Verdict::Fails
    })
}

/// Moves a vector by the basis action of a permutation.
///
/// # Errors
/// [`Error::Precondition`] if the permutation does not act on the vector's
/// ground set.
pub fn apply_perm(v: &OmegaVector, sigma: &Perm) -> Result<OmegaVector> {
    let map = basis_index_map(v.n, v.k, sigma)?;
    Ok(OmegaVector {
        n: v.n,
        k: v.k,
        p: v.p,
        row: v.row.gather(&map),
    })
}
