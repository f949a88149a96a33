//! Chain complexes assembled from the boundary maps: homology dimensions by
//! exact elimination, the closed-form exactness and split-exactness
//! predicates with brute-force cross-checks, homotopy splitting witnesses,
//! the symmetric-difference expansions of φφ*, cyclic generation in the
//! quotient, and the induced endomorphism on middle homology.

use crate::boundary::{
    apply_perm, basis_index_map, build_phi, build_v, omega_dim, BoundaryMapSpec, OmegaVector,
    Perm, VkSpec,
};
use crate::gfmat::{FpMatrix, RowVec, Subspace};
use crate::report::{
    ConditionHit, ExactnessReport, GeneratorReport, HomologyReport, HomotopyReport,
    KernelWitnessReport, PhiPhiStarReport, SplitCondition, SplitExactReport, ThetaReport, Verdict,
};
use crate::session::Session;
use crate::subsets::{carry_free, least_two_power, Subset};
use crate::{Error, Result};

/// A chain complex with constant step: degrees a, a+t, …, a+ct with c
/// maximal such that a+ct ≤ n, every map removing t elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainComplexSpec {
    /// Ground set size.
    pub n: u32,
    /// Field characteristic.
    pub p: u8,
    /// Step size of every differential.
    pub t: u32,
    /// Base degree, 0 ≤ a < t.
    pub a: u32,
}

impl ChainComplexSpec {
    /// The degree list a, a+t, …, a+ct, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        (0..)
            .map(|c| (self.a + c * self.t) as i64)
            .take_while(|&k| k <= self.n as i64)
            .collect()
    }
}

fn binom_or_zero(a: i64, b: i64) -> u64 {
    if a < 0 || b < 0 || b > a {
        0
    } else {
        crate::subsets::choose(a as u64, b)
    }
}

/// Homology dimension at degree k of the two-map segment
/// FΩ_{k+s_in} → FΩ_k → FΩ_{k−t_out}.
///
/// # Arguments
/// * `ses` - rank cache.
/// * `n`, `p` - ground set size and characteristic.
/// * `k` - the degree where homology is measured.
/// * `s_in` - step of the incoming map.
/// * `t_out` - step of the outgoing map.
///
/// # Returns
/// Kernel, image, and homology dimensions; `exact` iff the homology is zero.
/// Degrees outside 0..=n denote zero modules and work out naturally.
///
/// # Errors
/// [`Error::ChainCondition`] if the two maps do not compose to zero,
/// [`Error::ZeroStep`] for zero steps, plus the usual validation.
pub fn homology_dim(
    ses: &Session,
    n: u32,
    p: u8,
    k: i64,
    s_in: u32,
    t_out: u32,
) -> Result<HomologyReport> {
    if s_in == 0 || t_out == 0 {
        return Err(Error::ZeroStep);
    }
    let out_spec = BoundaryMapSpec { n, k, t: t_out, p, dual: false };
    let in_spec = BoundaryMapSpec { n, k: k + s_in as i64, t: s_in, p, dual: false };
    let m_out = build_phi(&out_spec)?;
    let m_in = build_phi(&in_spec)?;
    if m_in.rows() > 0 && m_in.cols() > 0 && m_out.cols() > 0 && !m_in.mul(&m_out)?.is_zero() {
        return Err(Error::ChainCondition(format!(
            "maps of steps {s_in} then {t_out} do not compose to zero at n={n} p={p} k={k}"
        )));
    }
    let dim_space = omega_dim(n, k);
    let rank_out = ses.phi_rank(&out_spec)?;
    let rank_in = ses.phi_rank(&in_spec)?;
    let dim_ker = dim_space - rank_out;
    // The chain condition puts the image inside the kernel, so the
    // difference cannot underflow.
    let dim_h = dim_ker - rank_in;
    Ok(HomologyReport {
        n,
        p,
        k,
        s_in,
        t_out,
        dim_space,
        dim_ker,
        dim_im: rank_in,
        dim_h,
        exact: dim_h == 0,
        predicted_dim: None,
        label: None,
    })
}

/// The dimension table predicted for the step-2 complex over GF(2): zero
/// everywhere except 2^m in the middle (n = 2m, k = m) or the two middle
/// degrees (n = 2m+1, k ∈ {m, m+1}), each carrying the name of the module
/// of that dimension as its label.
fn two_step_prediction(n: u32, k: i64) -> (Option<u64>, Option<String>) {
    let m = (n / 2) as i64;
    if n % 2 == 0 {
        if k == m {
            (Some(1 << m), Some(format!("E^({},{})", m + 1, m - 1)))
        } else {
            (Some(0), None)
        }
    } else if k == m || k == m + 1 {
        (Some(1 << m), Some(format!("D^({},{})", m + 1, m)))
    } else {
        (Some(0), None)
    }
}

/// Homology of the full constant-step complex at every degree, ascending.
/// For step 2 over GF(2) each report also carries the predicted dimension
/// and, when nonzero, its module label.
///
/// # Errors
/// [`Error::Precondition`] unless a < t, plus the conditions of
/// [`homology_dim`].
pub fn complex_profile(ses: &Session, spec: &ChainComplexSpec) -> Result<Vec<HomologyReport>> {
    if spec.t == 0 {
        return Err(Error::ZeroStep);
    }
    if spec.a >= spec.t {
        return Err(Error::Precondition(format!(
            "complex base degree must satisfy a < t, got a={} t={}",
            spec.a, spec.t
        )));
    }
    let mut out = Vec::new();
    for k in spec.degrees() {
        let mut report = homology_dim(ses, spec.n, spec.p, k, spec.t, spec.t)?;
        if spec.t == 2 && spec.p == 2 {
            let (predicted, label) = two_step_prediction(spec.n, k);
            report.predicted_dim = predicted;
            report.label = label;
        }
        out.push(report);
    }
    Ok(out)
}

/// Evaluates the closed-form exactness criterion for the sequence
/// FΩ_{k+t} → FΩ_k → FΩ_{k−t} over GF(2): exact iff t = 1, or one side is
/// short (k < 2^τ with k+t ≤ n−k, or symmetrically for n−k), or t is a
/// two-power and k lies outside the open middle band (n ≥ 2k+t or
/// n ≤ 2k−t). 2^τ is the least two-power in the binary form of t.
///
/// # Errors
/// [`Error::ZeroStep`] if t = 0.
pub fn exactness_predicate(n: u32, t: u32, k: i64) -> Result<ExactnessReport> {
    if t == 0 {
        return Err(Error::ZeroStep);
    }
    let tau = least_two_power(t as u64)?;
    let n = n as i64;
    let ti = t as i64;
    let taui = tau as i64;
    let (predicate, condition_hit) = if t == 1 {
        (true, ConditionHit::TIs1)
    } else if k < taui && k + ti <= n - k {
        (true, ConditionHit::SmallKSide)
    } else if n - k < taui && (n - k) + ti <= k {
        (true, ConditionHit::SmallNkSide)
    } else if tau == t as u64 && (n >= 2 * k + ti || n <= 2 * k - ti) {
        (true, ConditionHit::TwoPowerRange)
    } else {
        (false, ConditionHit::None)
    };
    Ok(ExactnessReport {
        n: n as u32,
        t,
        k,
        tau_power: tau,
        predicate,
        condition_hit,
        brute_force: None,
    })
}

/// [`exactness_predicate`] with the brute-force side filled in: the actual
/// GF(2) homology dimension at k, computed by elimination.
///
/// # Errors
/// Same conditions as [`exactness_predicate`] and [`homology_dim`].
pub fn exactness_checked(ses: &Session, n: u32, t: u32, k: i64) -> Result<ExactnessReport> {
    let mut report = exactness_predicate(n, t, k)?;
    report.brute_force = Some(homology_dim(ses, n, 2, k, t, t)?.exact);
    Ok(report)
}

/// Evaluates the closed-form criterion for the constant-step complex with
/// base degree a to be (split) exact in every degree: (a) n = 2a + t with
/// a < 2^τ, or (b) t a two-power and n ≡ 2a + t mod 2t.
///
/// # Errors
/// [`Error::Precondition`] unless a < t, [`Error::ZeroStep`] if t = 0.
pub fn split_exact_predicate(n: u32, t: u32, a: u32) -> Result<SplitExactReport> {
    if t == 0 {
        return Err(Error::ZeroStep);
    }
    if a >= t {
        return Err(Error::Precondition(format!(
            "complex base degree must satisfy a < t, got a={a} t={t}"
        )));
    }
    let tau = least_two_power(t as u64)?;
    let (predicate, condition) = if n as u64 == 2 * a as u64 + t as u64 && (a as u64) < tau {
        (true, SplitCondition::A)
    } else if t as u64 == tau && n % (2 * t) == (2 * a + t) % (2 * t) {
        (true, SplitCondition::B)
    } else {
        (false, SplitCondition::None)
    };
    Ok(SplitExactReport { n, t, a, predicate, condition })
}

/// Witnesses the homotopy splitting at degree k over GF(2): when t is a
/// two-power and n ≡ 2k + t mod 2t, verifies the displayed identity
/// M₁M₁ᵀ + M₂ᵀM₂ = I (M₁ the outgoing map, M₂ the incoming one), the direct
/// sum FΩ_k = ker M₁ ⊕ row_space(M₁ᵀ), and ker M₁ = row_space(M₂). The
/// complement row_space(M₁ᵀ) is the image of the dual map, which commutes
/// with the group action, so this is an equivariant splitting.
///
/// # Returns
/// A report whose verdict is [`Verdict::Inapplicable`] when the hypothesis
/// fails, otherwise Holds/Fails with the four sub-checks filled in.
///
/// # Errors
/// [`Error::ZeroStep`] if t = 0, plus matrix validation.
pub fn homotopy_split_check(n: u32, t: u32, k: i64) -> Result<HomotopyReport> {
    if t == 0 {
        return Err(Error::ZeroStep);
    }
    let tau = least_two_power(t as u64)?;
    let hypothesis = tau == t as u64
        && (n as i64 - (2 * k + t as i64)).rem_euclid(2 * t as i64) == 0;
    if !hypothesis {
        return Ok(HomotopyReport {
            n,
            t,
            k,
            verdict: Verdict::Inapplicable,
            identity_holds: None,
            dims_add: None,
            intersection_zero: None,
            kernel_equals_image: None,
        });
    }
    let m1 = build_phi(&BoundaryMapSpec { n, k, t, p: 2, dual: false })?;
    let m2 = build_phi(&BoundaryMapSpec { n, k: k + t as i64, t, p: 2, dual: false })?;
    let m1t = m1.transpose();
    let sum = m1.mul(&m1t)?.add(&m2.transpose().mul(&m2)?)?;
    let dim = omega_dim(n, k) as usize;
    let identity_holds = sum == FpMatrix::identity(dim, 2)?;
    let kernel = m1.left_kernel();
    let complement = m1t.row_space();
    let dims_add = kernel.dim() + complement.dim() == dim;
    let intersection_zero = kernel.intersection(&complement)?.dim() == 0;
    let kernel_equals_image = kernel == m2.row_space();
    let all = identity_holds && dims_add && intersection_zero && kernel_equals_image;
    Ok(HomotopyReport {
        n,
        t,
        k,
        verdict: if all { Verdict::Holds } else { Verdict::Fails },
        identity_holds: Some(identity_holds),
        dims_add: Some(dims_add),
        intersection_zero: Some(intersection_zero),
        kernel_equals_image: Some(kernel_equals_image),
    })
}

/// Verifies the symmetric-difference expansions of the map composed with
/// its dual: with A_d the 0/1 matrix marking pairs at symmetric difference
/// 2d (so A_0 = I), downward-then-up expands as Σ_d C(k−d, t−d)·A_d and
/// upward-then-down as Σ_d C(n−k−d, t−d)·A_d, entrywise mod p. For t = 1
/// over GF(2) the two expansions sum to (n mod 2)·I, reported separately.
///
/// # Errors
/// Matrix validation only.
pub fn check_phiphistar_expansion(n: u32, t: u32, k: i64, p: u8) -> Result<PhiPhiStarReport> {
    if t == 0 {
        return Err(Error::ZeroStep);
    }
    let dim = omega_dim(n, k) as usize;
    // A_d stacks: a[d](i, j) = 1 iff the i-th and j-th subsets differ in
    // exactly 2d elements.
    let mut a: Vec<FpMatrix> = (0..=t)
        .map(|_| FpMatrix::zero(dim, dim, p))
        .collect::<Result<_>>()?;
    if dim > 0 {
        let basis: Vec<Subset> = crate::subsets::subsets_colex(n, k as u32).collect();
        for (i, y) in basis.iter().enumerate() {
            for (j, x) in basis.iter().enumerate() {
                let d = (y.mask() ^ x.mask()).count_ones() / 2;
                if d <= t {
                    a[d as usize].set(i, j, 1);
                }
            }
        }
    }
    let expansion = |coef: &dyn Fn(i64) -> u64| -> Result<FpMatrix> {
        let mut acc = FpMatrix::zero(dim, dim, p)?;
        for d in 0..=t as i64 {
            let c = (coef(d) % p as u64) as u8;
            acc = acc.add(&a[d as usize].scale(c))?;
        }
        Ok(acc)
    };
    let m1 = build_phi(&BoundaryMapSpec { n, k, t, p, dual: false })?;
    let m2 = build_phi(&BoundaryMapSpec { n, k: k + t as i64, t, p, dual: false })?;
    let down_up = m1.mul(&m1.transpose())?;
    let up_down = m2.transpose().mul(&m2)?;
    let ti = t as i64;
    let down_up_expansion = down_up == expansion(&|d| binom_or_zero(k - d, ti - d))?;
    let up_down_expansion =
        up_down == expansion(&|d| binom_or_zero(n as i64 - k - d, ti - d))?;
    let a0_is_identity = a[0] == FpMatrix::identity(dim, p)?;
    let one_step_identity = if t == 1 && p == 2 {
        let scaled_id = FpMatrix::identity(dim, 2)?.scale((n % 2) as u8);
        Some(down_up.add(&up_down)? == scaled_id)
    } else {
        None
    };
    Ok(PhiPhiStarReport {
        n,
        t,
        k,
        p,
        down_up_expansion,
        up_down_expansion,
        a0_is_identity,
        one_step_identity,
    })
}

/// Checks the one-step chain identity over GF(2): composing down, up, and
/// down again equals n times the one-step map, i.e. the map itself for odd
/// n and the zero matrix for even n.
///
/// # Errors
/// Matrix validation only.
pub fn check_gamma_chain_identity(n: u32, k: i64) -> Result<bool> {
    let g = build_phi(&BoundaryMapSpec { n, k, t: 1, p: 2, dual: false })?;
    let ggg = g.mul(&g.transpose())?.mul(&g)?;
    Ok(ggg == g.scale((n % 2) as u8))
}

/// Dimension of the smallest invariant subspace of the quotient containing
/// the image of `v`: the span of `modulo` and the orbit of `v` under the
/// symmetric group is closed under the adjacent transpositions and its
/// growth over `modulo` is returned.
///
/// # Errors
/// [`Error::DimensionMismatch`] if `modulo` does not live in the degree
/// module of `v`, and [`Error::Precondition`] if `modulo` itself is not
/// invariant (the quotient action would be ill-defined).
pub fn cyclic_span(v: &OmegaVector, modulo: &Subspace) -> Result<u64> {
    if modulo.ambient() != v.row().cols() || modulo.p() != v.p() {
        return Err(Error::DimensionMismatch(
            "quotient subspace does not live in the vector's module".into(),
        ));
    }
    let n = v.n();
    let mut gathers = Vec::new();
    for i in 1..n {
        let sigma = Perm::transposition(n, i, i + 1)?;
        gathers.push(basis_index_map(n, v.k(), &sigma)?);
    }
    for row in modulo.basis() {
        for g in &gathers {
            if !modulo.contains(&row.gather(g))? {
                return Err(Error::Precondition(
                    "quotient subspace is not invariant under the group action".into(),
                ));
            }
        }
    }
    let mut space = modulo.clone();
    let mut queue: Vec<RowVec> = Vec::new();
    if space.insert(v.row().clone())? {
        queue.push(v.row().clone());
    }
    while let Some(u) = queue.pop() {
        for g in &gathers {
            let w = u.gather(g);
            if space.insert(w.clone())? {
                queue.push(w);
            }
        }
    }
    Ok((space.dim() - modulo.dim()) as u64)
}

/// Checks that the designated kernel element generates the homology at
/// degree k over GF(2): it lies in the kernel of the outgoing t-step map,
/// and its orbit span modulo the incoming image has the full homology
/// dimension.
///
/// # Errors
/// Construction preconditions of the designated element (1 ≤ t ≤ k,
/// 2k ≤ n), plus those of [`homology_dim`].
pub fn generator_check(ses: &Session, n: u32, t: u32, k: u32) -> Result<GeneratorReport> {
    let v = build_v(&VkSpec { n, k, t }, 2)?;
    let in_kernel = v.apply_phi(t)?.is_zero();
    let h = homology_dim(ses, n, 2, k as i64, t, t)?;
    let image = build_phi(&BoundaryMapSpec {
        n,
        k: k as i64 + t as i64,
        t,
        p: 2,
        dual: false,
    })?
    .row_space();
    let cyclic_dim = cyclic_span(&v, &image)?;
    Ok(GeneratorReport {
        n,
        t,
        k: k as i64,
        in_kernel,
        homology_dim: h.dim_h,
        cyclic_dim,
        generates: in_kernel && cyclic_dim == h.dim_h,
    })
}

/// Coordinates on a homology space ker/im: representatives are the kernel
/// basis rows that grow the image span, fixed deterministically by the
/// echelon order, so induced matrices are reproducible.
pub struct QuotientBasis {
    ambient: usize,
    p: u8,
    image_dim: usize,
    reps: Vec<RowVec>,
    /// Echelonized rows (b_i ++ e_i) over the image basis followed by the
    /// representatives, so membership and coefficients fall out of one
    /// reduction.
    solver: Subspace,
}

impl QuotientBasis {
    /// Builds coordinates for kernel/image.
    ///
    /// # Errors
    /// [`Error::ChainCondition`] if the image is not inside the kernel.
    pub fn new(kernel: &Subspace, image: &Subspace) -> Result<QuotientBasis> {
        if !image.leq(kernel)? {
            return Err(Error::ChainCondition(
                "image does not lie inside the kernel".into(),
            ));
        }
        let ambient = kernel.ambient();
        let p = kernel.p();
        let mut span = image.clone();
        let mut reps = Vec::new();
        for row in kernel.basis() {
            if span.insert(row.clone())? {
                reps.push(row.clone());
            }
        }
        let total = image.dim() + reps.len();
        let mut solver = Subspace::new(ambient + total, p)?;
        for (i, row) in image.basis().iter().chain(reps.iter()).enumerate() {
            let mut unit = RowVec::zero(total, p)?;
            unit.set(i, 1);
            solver.insert(row.concat(&unit))?;
        }
        Ok(QuotientBasis { ambient, p, image_dim: image.dim(), reps, solver })
    }

    /// Homology dimension: the number of representatives.
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// The chosen kernel representatives.
    pub fn reps(&self) -> &[RowVec] {
        &self.reps
    }

    /// Homology coordinates of an ambient vector: the representative
    /// coefficients of any expression image-combination + Σ c_i rep_i, or
    /// None if the vector is not in the kernel span at all.
    ///
    /// # Errors
    /// [`Error::DimensionMismatch`] for a vector of the wrong shape.
    pub fn coordinates(&self, v: &RowVec) -> Result<Option<Vec<u8>>> {
        if v.cols() != self.ambient || v.p() != self.p {
            return Err(Error::DimensionMismatch(
                "vector does not live in the ambient module".into(),
            ));
        }
        let total = self.image_dim + self.reps.len();
        let mut w = v.concat(&RowVec::zero(total, self.p)?);
        self.solver.reduce(&mut w);
        if !w.slice(0, self.ambient).is_zero() {
            return Ok(None);
        }
        // The reduced row is (0, −coefficients).
        let mut c = w.slice(self.ambient + self.image_dim, self.ambient + total);
        c.scale(self.p - 1);
        Ok(Some(c.to_dense()))
    }

    /// The matrix of the operator induced on the quotient by an ambient
    /// operator that preserves the kernel (rows act on the right).
    ///
    /// # Errors
    /// [`Error::Precondition`] if some representative's image leaves the
    /// kernel span.
    pub fn induced(&self, op: &FpMatrix) -> Result<FpMatrix> {
        let mut rows = Vec::with_capacity(self.reps.len());
        for r in &self.reps {
            let moved = op.vec_mul(r)?;
            let Some(coords) = self.coordinates(&moved)? else {
                return Err(Error::Precondition(
                    "operator does not preserve the kernel span".into(),
                ));
            };
            rows.push(RowVec::from_dense(self.p, &coords)?);
        }
        FpMatrix::from_rows(self.reps.len(), self.p, rows)
    }
}

/// Realizes the induced endomorphism on the middle homology of the step-2
/// complex for an even ground set n = 2m: E is the one-step map composed
/// with its dual on FΩ_m; the report confirms E preserves both the kernel
/// and the image, gives the induced matrix θ on homology coordinates, and
/// verifies the two designated-element relations (v_m E = v_m + v_m swapped
/// by (2m−1, 2m); the symmetrized element is annihilated).
///
/// # Errors
/// [`Error::Precondition`] unless n is even with n ≥ 4.
pub fn theta_on_homology(n: u32) -> Result<ThetaReport> {
    if n % 2 != 0 || n < 4 {
        return Err(Error::Precondition(format!(
            "induced middle endomorphism needs an even ground set of size at least 4, got {n}"
        )));
    }
    let m = n / 2;
    let gamma = build_phi(&BoundaryMapSpec { n, k: m as i64, t: 1, p: 2, dual: false })?;
    let e_op = gamma.mul(&gamma.transpose())?;
    let out_map = build_phi(&BoundaryMapSpec { n, k: m as i64, t: 2, p: 2, dual: false })?;
    let in_map =
        build_phi(&BoundaryMapSpec { n, k: m as i64 + 2, t: 2, p: 2, dual: false })?;
    let kernel = out_map.left_kernel();
    let image = in_map.row_space();
    let invariant_under = |space: &Subspace| -> Result<bool> {
        for row in space.basis() {
            if !space.contains(&e_op.vec_mul(row)?)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let kernel_invariant = invariant_under(&kernel)?;
    let image_invariant = invariant_under(&image)?;
    let quotient = QuotientBasis::new(&kernel, &image)?;
    let theta = if kernel_invariant && image_invariant {
        quotient.induced(&e_op)?
    } else {
        FpMatrix::zero(quotient.dim(), quotient.dim(), 2)?
    };
    let nonzero = kernel_invariant && image_invariant && !theta.is_zero();
    let square_zero = theta.mul(&theta)?.is_zero();
    let v_m = build_v(&VkSpec { n, k: m, t: 2 }, 2)?;
    let swap = Perm::transposition(n, n - 1, n)?;
    let moved = apply_perm(&v_m, &swap)?;
    let mut symmetrized = v_m.row().clone();
    symmetrized.add_scaled(moved.row(), 1);
    let generator_relation = e_op.vec_mul(v_m.row())? == symmetrized;
    let symmetrized_annihilated = e_op.vec_mul(&symmetrized)?.is_zero();
    Ok(ThetaReport {
        n,
        m,
        homology_dim: quotient.dim() as u64,
        kernel_invariant,
        image_invariant,
        nonzero,
        square_zero,
        generator_relation,
        symmetrized_annihilated,
        theta_matrix: theta,
    })
}

/// Confirms the proper containment of one-step kernels inside longer-step
/// kernels over GF(2): under t > s with the binary digits of s inside those
/// of t (C(t,s) odd) and k ≥ s, checks ker φ_s ⊆ ker φ_t on degree k and
/// exhibits the explicit witness v = {1,…,k+2^β} φ_{2^β}, where 2^β is the
/// least two-power in t missing from s: v is killed by the t-step map but
/// not the s-step one.
///
/// # Errors
/// [`Error::Precondition`] when a hypothesis fails or the witness needs
/// k + 2^β ≤ n and it does not hold.
pub fn kernel_containment_witness(n: u32, s: u32, t: u32, k: i64) -> Result<KernelWitnessReport> {
    if s == 0 {
        return Err(Error::ZeroStep);
    }
    if t <= s {
        return Err(Error::Precondition(format!(
            "kernel containment needs t > s, got s={s} t={t}"
        )));
    }
    if !carry_free(s as u64, (t - s) as u64, 2)? {
        return Err(Error::Precondition(format!(
            "hypothesis needs C({t},{s}) odd (digits of {s} inside {t})"
        )));
    }
    if k < s as i64 {
        return Err(Error::Precondition(format!(
            "kernel containment needs k >= s, got k={k} s={s}"
        )));
    }
    let missing = t & !s;
    debug_assert!(missing != 0, "t > s with s's digits inside t leaves a spare digit");
    let beta_pow = (missing & missing.wrapping_neg()) as u64;
    if k + beta_pow as i64 > n as i64 {
        return Err(Error::Precondition(format!(
            "witness construction needs k + {beta_pow} <= n, got n={n} k={k}"
        )));
    }
    let ker_s = build_phi(&BoundaryMapSpec { n, k, t: s, p: 2, dual: false })?.left_kernel();
    let ker_t = build_phi(&BoundaryMapSpec { n, k, t, p: 2, dual: false })?.left_kernel();
    let containment = ker_s.leq(&ker_t)?;
    let base = OmegaVector::basis(n, 2, Subset::full((k + beta_pow as i64) as u32))?;
    let witness = base.apply_phi(beta_pow as u32)?;
    let witness_in_larger_kernel = if t as i64 > k {
        true
    } else {
        witness.apply_phi(t)?.is_zero()
    };
    let witness_outside_smaller_kernel = !witness.apply_phi(s)?.is_zero();
    Ok(KernelWitnessReport {
        n,
        s,
        t,
        k,
        witness_power: beta_pow,
        containment,
        witness_in_larger_kernel,
        witness_outside_smaller_kernel,
        proper: containment && witness_in_larger_kernel && witness_outside_smaller_kernel,
    })
}
