//! Exact linear algebra over GF(p) for small primes p: packed row vectors,
//! dense matrices, Gaussian elimination, echelonized subspaces, and quotient
//! coordinates. Characteristic 2 is bit-packed 64 entries to the word; odd
//! characteristics store one residue per byte.
//!
//! Everything here works with the row-vector convention: module elements are
//! rows and maps act on the right, so the image of a matrix is its row space
//! and its kernel is the left kernel.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::subsets::is_prime;
use crate::{Error, Result};

/// Largest matrix allocation [`FpMatrix::from_triplet_text`] will accept, in
/// bytes of entry storage. Keeps hostile headers from forcing huge
/// allocations while admitting every matrix this crate builds itself.
const MAX_PARSE_BYTES: u64 = 64 << 20;

fn check_prime(p: u8) -> Result<()> {
    if is_prime(p as u64) {
        Ok(())
    } else {
        Err(Error::BadPrime(p as u64))
    }
}

/// Multiplicative inverse mod p for 1 ≤ a < p, by exhaustive search — p is
/// at most 251 and inversions happen once per pivot.
fn inv_mod(a: u8, p: u8) -> u8 {
    debug_assert!(a > 0 && a < p);
    (1..p)
        .find(|&x| (x as u16 * a as u16) % p as u16 == 1)
        .expect("every nonzero residue mod a prime is invertible")
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Store {
    /// One bit per entry, 64 per word, low bit = lowest column. Bits past
    /// `cols` are kept zero so equality and zero tests are word tests.
    Bits(Vec<u64>),
    /// One residue per byte, each in [0, p).
    Bytes(Vec<u8>),
}

/// A length-`cols` vector of residues mod p.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RowVec {
    cols: usize,
    p: u8,
    store: Store,
}

impl RowVec {
    /// The zero vector of the given length.
    pub fn zero(cols: usize, p: u8) -> Result<RowVec> {
        check_prime(p)?;
        let store = if p == 2 {
            Store::Bits(vec![0; cols.div_ceil(64)])
        } else {
            Store::Bytes(vec![0; cols])
        };
        Ok(RowVec { cols, p, store })
    }

    /// Builds a vector from explicit entries, reducing each mod p.
    pub fn from_dense(p: u8, entries: &[u8]) -> Result<RowVec> {
        let mut v = RowVec::zero(entries.len(), p)?;
        for (j, &e) in entries.iter().enumerate() {
            v.set(j, e % p);
        }
        Ok(v)
    }

    /// Entries as plain bytes.
    pub fn to_dense(&self) -> Vec<u8> {
        (0..self.cols).map(|j| self.get(j)).collect()
    }

    /// Number of entries.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// The modulus.
    pub fn p(&self) -> u8 {
        self.p
    }

    /// Entry at column `j`.
    ///
    /// # Panics
    /// Panics if `j` is out of range.
    pub fn get(&self, j: usize) -> u8 {
        assert!(j < self.cols, "column {j} out of range ({})", self.cols);
        match &self.store {
            Store::Bits(words) => (words[j / 64] >> (j % 64) & 1) as u8,
            Store::Bytes(bytes) => bytes[j],
        }
    }

    /// Sets entry `j` to `v`, which must already be reduced mod p.
    ///
    /// # Panics
    /// Panics if `j` is out of range or `v ≥ p`.
    pub fn set(&mut self, j: usize, v: u8) {
        assert!(j < self.cols, "column {j} out of range ({})", self.cols);
        assert!(v < self.p, "entry {v} not reduced mod {}", self.p);
        match &mut self.store {
            Store::Bits(words) => {
                let mask = 1u64 << (j % 64);
                if v == 1 {
                    words[j / 64] |= mask;
                } else {
                    words[j / 64] &= !mask;
                }
            }
            Store::Bytes(bytes) => bytes[j] = v,
        }
    }

    /// Whether every entry is zero.
    pub fn is_zero(&self) -> bool {
        match &self.store {
            Store::Bits(words) => words.iter().all(|&w| w == 0),
            Store::Bytes(bytes) => bytes.iter().all(|&b| b == 0),
        }
    }

    /// Column of the first nonzero entry, if any.
    pub fn first_nonzero(&self) -> Option<usize> {
        match &self.store {
            Store::Bits(words) => words.iter().enumerate().find_map(|(i, &w)| {
                if w != 0 {
                    Some(i * 64 + w.trailing_zeros() as usize)
                } else {
                    None
                }
            }),
            Store::Bytes(bytes) => bytes.iter().position(|&b| b != 0),
        }
    }

    /// `self += c · other`, entrywise mod p.
    ///
    /// # Panics
    /// Panics on length or modulus mismatch.
    pub fn add_scaled(&mut self, other: &RowVec, c: u8) {
        assert_eq!(self.cols, other.cols, "length mismatch");
        assert_eq!(self.p, other.p, "modulus mismatch");
        assert!(c < self.p);
        if c == 0 {
            return;
        }
        match (&mut self.store, &other.store) {
            (Store::Bits(a), Store::Bits(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    *x ^= y;
                }
            }
            (Store::Bytes(a), Store::Bytes(b)) => {
                let p = self.p as u16;
                for (x, y) in a.iter_mut().zip(b) {
                    *x = ((*x as u16 + c as u16 * *y as u16) % p) as u8;
                }
            }
            _ => unreachable!("store kind is determined by p"),
        }
    }

    /// `self *= c`, entrywise mod p.
    pub fn scale(&mut self, c: u8) {
        assert!(c < self.p);
        match &mut self.store {
            Store::Bits(words) => {
                if c == 0 {
                    words.fill(0);
                }
            }
            Store::Bytes(bytes) => {
                let p = self.p as u16;
                for x in bytes.iter_mut() {
                    *x = ((*x as u16 * c as u16) % p) as u8;
                }
            }
        }
    }

    /// The nonzero entries as (column, value) pairs, in column order.
    pub fn iter_nonzero(&self) -> impl Iterator<Item = (usize, u8)> + '_ {
        let mut j = 0usize;
        std::iter::from_fn(move || {
            while j < self.cols {
                match &self.store {
                    Store::Bits(words) => {
                        // Skip whole zero words.
                        let w = words[j / 64] >> (j % 64);
                        if w == 0 {
                            j = (j / 64 + 1) * 64;
                            continue;
                        }
                        let col = j + w.trailing_zeros() as usize;
                        if col >= self.cols {
                            return None;
                        }
                        j = col + 1;
                        return Some((col, 1));
                    }
                    Store::Bytes(bytes) => {
                        let col = j;
                        j += 1;
                        if bytes[col] != 0 {
                            return Some((col, bytes[col]));
                        }
                    }
                }
            }
            None
        })
    }

    /// New vector with `out[j] = self[idx[j]]` — a coordinate gather, used to
    /// apply basis permutations.
    ///
    /// # Panics
    /// Panics if any index is out of range.
    pub fn gather(&self, idx: &[usize]) -> RowVec {
        let mut out = RowVec::zero(idx.len(), self.p).expect("p already validated");
        for (j, &src) in idx.iter().enumerate() {
            let v = self.get(src);
            if v != 0 {
                out.set(j, v);
            }
        }
        out
    }

    /// Concatenation `self ++ other`.
    pub fn concat(&self, other: &RowVec) -> RowVec {
        assert_eq!(self.p, other.p, "modulus mismatch");
        let mut out = RowVec::zero(self.cols + other.cols, self.p).expect("p already validated");
        for (j, v) in self.iter_nonzero() {
            out.set(j, v);
        }
        for (j, v) in other.iter_nonzero() {
            out.set(self.cols + j, v);
        }
        out
    }

    /// The slice of entries `[lo, hi)` as a new vector.
    pub fn slice(&self, lo: usize, hi: usize) -> RowVec {
        assert!(lo <= hi && hi <= self.cols);
        let mut out = RowVec::zero(hi - lo, self.p).expect("p already validated");
        for j in lo..hi {
            let v = self.get(j);
            if v != 0 {
                out.set(j - lo, v);
            }
        }
        out
    }
}

impl fmt::Debug for RowVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RowVec(p={}, {:?})", self.p, self.to_dense())
    }
}

/// A dense matrix over GF(p), stored by rows.
#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    p: u8,
    data: Vec<RowVec>,
}

impl FpMatrix {
    /// The zero matrix. Either dimension may be zero.
    pub fn zero(rows: usize, cols: usize, p: u8) -> Result<FpMatrix> {
        check_prime(p)?;
        let data = (0..rows)
            .map(|_| RowVec::zero(cols, p))
            .collect::<Result<_>>()?;
        Ok(FpMatrix { rows, cols, p, data })
    }

    /// The n×n identity.
    pub fn identity(n: usize, p: u8) -> Result<FpMatrix> {
        let mut m = FpMatrix::zero(n, n, p)?;
        for i in 0..n {
            m.data[i].set(i, 1);
        }
        Ok(m)
    }

    /// Builds a matrix from explicit entries, reducing mod p. `cols` is
    /// passed separately so zero-row matrices keep their width.
    pub fn from_dense(p: u8, cols: usize, entries: &[Vec<u8>]) -> Result<FpMatrix> {
        check_prime(p)?;
        let mut data = Vec::with_capacity(entries.len());
        for row in entries {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a {cols}-column matrix",
                    row.len()
                )));
            }
            data.push(RowVec::from_dense(p, row)?);
        }
        Ok(FpMatrix { rows: entries.len(), cols, p, data })
    }

    /// Assembles a matrix from owned rows.
    pub fn from_rows(cols: usize, p: u8, rows: Vec<RowVec>) -> Result<FpMatrix> {
        check_prime(p)?;
        for r in &rows {
            if r.cols() != cols || r.p() != p {
                return Err(Error::DimensionMismatch(
                    "row shape does not match the matrix".into(),
                ));
            }
        }
        Ok(FpMatrix { rows: rows.len(), cols, p, data: rows })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    /// Entry at (i, j).
    pub fn get(&self, i: usize, j: usize) -> u8 {
        assert!(i < self.rows, "row {i} out of range ({})", self.rows);
        self.data[i].get(j)
    }

    /// Sets entry (i, j) to `v` (already reduced mod p).
    pub fn set(&mut self, i: usize, j: usize, v: u8) {
        assert!(i < self.rows, "row {i} out of range ({})", self.rows);
        self.data[i].set(j, v);
    }

    /// Borrow of row `i`.
    pub fn row(&self, i: usize) -> &RowVec {
        &self.data[i]
    }

    /// Whether every entry is zero.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RowVec::is_zero)
    }

    /// The transpose.
    pub fn transpose(&self) -> FpMatrix {
        let mut out = FpMatrix::zero(self.cols, self.rows, self.p).expect("p already validated");
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row.iter_nonzero() {
                out.data[j].set(i, v);
            }
        }
        out
    }

    /// Matrix sum.
    pub fn add(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.rows != other.rows || self.cols != other.cols || self.p != other.p {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} mod {} + {}x{} mod {}",
                self.rows, self.cols, self.p, other.rows, other.cols, other.p
            )));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            a.add_scaled(b, 1);
        }
        Ok(out)
    }

    /// Scalar multiple.
    pub fn scale(&self, c: u8) -> FpMatrix {
        let mut out = self.clone();
        for row in out.data.iter_mut() {
            row.scale(c % self.p);
        }
        out
    }

    /// Matrix product `self · other`, accumulating scaled rows of `other`
    /// over the nonzero entries of each row of `self`.
    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != other.rows || self.p != other.p {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} mod {} times {}x{} mod {}",
                self.rows, self.cols, self.p, other.rows, other.cols, other.p
            )));
        }
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            let mut acc = RowVec::zero(other.cols, self.p)?;
            for (j, c) in row.iter_nonzero() {
                acc.add_scaled(&other.data[j], c);
            }
            data.push(acc);
        }
        Ok(FpMatrix { rows: self.rows, cols: other.cols, p: self.p, data })
    }

    /// Row vector times matrix: `v · self`, the right action on row vectors.
    pub fn vec_mul(&self, v: &RowVec) -> Result<RowVec> {
        if v.cols() != self.rows || v.p() != self.p {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} times {}x{} matrix",
                v.cols(),
                self.rows,
                self.cols
            )));
        }
        let mut acc = RowVec::zero(self.cols, self.p)?;
        for (i, c) in v.iter_nonzero() {
            acc.add_scaled(&self.data[i], c);
        }
        Ok(acc)
    }

    /// New matrix whose row `i` is row `order[i]` of `self`. Used for the
    /// row-order-randomized elimination cross-checks.
    pub fn permute_rows(&self, order: &[usize]) -> Result<FpMatrix> {
        if order.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "permutation of length {} on {} rows",
                order.len(),
                self.rows
            )));
        }
        let mut seen = vec![false; self.rows];
        for &i in order {
            if i >= self.rows || seen[i] {
                return Err(Error::Precondition(format!(
                    "row order is not a permutation (index {i})"
                )));
            }
            seen[i] = true;
        }
        let data = order.iter().map(|&i| self.data[i].clone()).collect();
        Ok(FpMatrix { rows: self.rows, cols: self.cols, p: self.p, data })
    }

    /// Rank over GF(p) by forward Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut pivot_rows: Vec<Option<RowVec>> = vec![None; self.cols];
        let mut rank = 0usize;
        for r in &self.data {
            let mut v = r.clone();
            while let Some(c) = v.first_nonzero() {
                match &pivot_rows[c] {
                    Some(pr) => {
                        let coef = v.get(c);
                        v.add_scaled(pr, self.p - coef);
                    }
                    None => {
                        let lead = v.get(c);
                        if lead != 1 {
                            v.scale(inv_mod(lead, self.p));
                        }
                        pivot_rows[c] = Some(v);
                        rank += 1;
                        break;
                    }
                }
            }
        }
        rank
    }

    /// The row space as an echelonized subspace of the column space.
    pub fn row_space(&self) -> Subspace {
        let mut space = Subspace::new(self.cols, self.p).expect("p already validated");
        for r in &self.data {
            space.insert(r.clone()).expect("shape matches by construction");
        }
        space
    }

    /// The left kernel {v : v·M = 0}, echelonized; its dimension is
    /// rows − rank.
    pub fn left_kernel(&self) -> Subspace {
        // Eliminate [M | I]; rows that become zero in the M block have their
        // kernel combination recorded in the I block.
        let width = self.cols + self.rows;
        let mut pivot_rows: Vec<Option<RowVec>> = vec![None; self.cols];
        let mut kernel = Subspace::new(self.rows, self.p).expect("p already validated");
        for (i, r) in self.data.iter().enumerate() {
            let mut v = RowVec::zero(width, self.p).expect("p already validated");
            for (j, c) in r.iter_nonzero() {
                v.set(j, c);
            }
            v.set(self.cols + i, 1);
            loop {
                match v.first_nonzero() {
                    Some(c) if c < self.cols => match &pivot_rows[c] {
                        Some(pr) => {
                            let coef = v.get(c);
                            v.add_scaled(pr, self.p - coef);
                        }
                        None => {
                            let lead = v.get(c);
                            if lead != 1 {
                                v.scale(inv_mod(lead, self.p));
                            }
                            pivot_rows[c] = Some(v);
                            break;
                        }
                    },
                    _ => {
                        // M block exhausted: the I block holds a kernel row.
                        kernel
                            .insert(v.slice(self.cols, width))
                            .expect("shape matches by construction");
                        break;
                    }
                }
            }
        }
        kernel
    }

    /// Serializes in the triplet interchange format: a `rows cols p` header,
    /// one 1-based `i j v` line per nonzero entry in row-major order, and a
    /// `0 0 0` terminator.
    pub fn to_triplet_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.rows, self.cols, self.p);
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row.iter_nonzero() {
                out.push_str(&format!("{} {} {}\n", i + 1, j + 1, v));
            }
        }
        out.push_str("0 0 0\n");
        out
    }

    /// Parses the triplet interchange format produced by
    /// [`FpMatrix::to_triplet_text`]. The decoder is strict: it rejects
    /// malformed headers, out-of-range indices or values, duplicate entries,
    /// oversized dimensions, missing terminators, and trailing content.
    pub fn from_triplet_text(text: &str) -> std::result::Result<FpMatrix, TripletParseError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(TripletParseError::MissingHeader)?;
        let fields = parse_three_numbers(header, 1)?;
        let (rows, cols, p64) = (fields[0], fields[1], fields[2]);
        let p = u8::try_from(p64).map_err(|_| TripletParseError::BadPrime(p64))?;
        if !is_prime(p as u64) {
            return Err(TripletParseError::BadPrime(p64));
        }
        let per_entry = if p == 2 { 1 } else { 8 }; // bits vs bytes
        if rows
            .checked_mul(cols)
            .and_then(|n| n.checked_mul(per_entry))
            .is_none_or(|bits| bits / 8 > MAX_PARSE_BYTES)
        {
            return Err(TripletParseError::DimsTooLarge { rows, cols });
        }
        let mut m = FpMatrix::zero(rows as usize, cols as usize, p)
            .expect("p validated above");
        let mut terminated = false;
        for (idx, line) in &mut lines {
            let lineno = idx + 1;
            let nums = parse_three_numbers(line, lineno)?;
            let (i, j, v) = (nums[0], nums[1], nums[2]);
            if (i, j, v) == (0, 0, 0) {
                terminated = true;
                break;
            }
            if i == 0 || i > rows || j == 0 || j > cols {
                return Err(TripletParseError::IndexOutOfRange { line: lineno });
            }
            if v == 0 || v >= p as u64 {
                return Err(TripletParseError::ValueOutOfRange { line: lineno });
            }
            let (ri, cj) = (i as usize - 1, j as usize - 1);
            if m.get(ri, cj) != 0 {
                return Err(TripletParseError::DuplicateEntry { line: lineno });
            }
            m.set(ri, cj, v as u8);
        }
        if !terminated {
            return Err(TripletParseError::MissingTerminator);
        }
        for (idx, line) in lines {
            if !line.trim().is_empty() {
                return Err(TripletParseError::TrailingContent { line: idx + 1 });
            }
        }
        Ok(m)
    }
}

fn parse_three_numbers(
    line: &str,
    lineno: usize,
) -> std::result::Result<[u64; 3], TripletParseError> {
    let mut out = [0u64; 3];
    let mut fields = line.split_whitespace();
    for slot in &mut out {
        let tok = fields
            .next()
            .ok_or(TripletParseError::MalformedLine { line: lineno })?;
        *slot = tok
            .parse()
            .map_err(|_| TripletParseError::MalformedLine { line: lineno })?;
    }
    if fields.next().is_some() {
        return Err(TripletParseError::MalformedLine { line: lineno });
    }
    Ok(out)
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMatrix({}x{} mod {})", self.rows, self.cols, self.p)
    }
}

impl Serialize for FpMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_triplet_text())
    }
}

impl<'de> Deserialize<'de> for FpMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        FpMatrix::from_triplet_text(&text).map_err(D::Error::custom)
    }
}

/// Decoding failures of the triplet text format.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TripletParseError {
    #[error("missing header line")]
    MissingHeader,
    #[error("line {line}: expected three whitespace-separated integers")]
    MalformedLine { line: usize },
    #[error("{0} is not a supported prime modulus")]
    BadPrime(u64),
    #[error("declared dimensions {rows}x{cols} exceed the supported size")]
    DimsTooLarge { rows: u64, cols: u64 },
    #[error("line {line}: entry indices out of range")]
    IndexOutOfRange { line: usize },
    #[error("line {line}: entry value out of range")]
    ValueOutOfRange { line: usize },
    #[error("line {line}: duplicate entry")]
    DuplicateEntry { line: usize },
    #[error("missing 0 0 0 terminator")]
    MissingTerminator,
    #[error("line {line}: content after terminator")]
    TrailingContent { line: usize },
}

/// A subspace of GF(p)^ambient kept as a reduced row-echelon basis: pivot
/// columns strictly increasing, pivot entries 1, and every pivot column zero
/// in all other basis rows. The representation is canonical — two subspaces
/// are equal iff their bases are equal.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    p: u8,
    basis: Vec<RowVec>,
    pivots: Vec<usize>,
}

impl Subspace {
    /// The zero subspace of GF(p)^ambient.
    pub fn new(ambient: usize, p: u8) -> Result<Subspace> {
        check_prime(p)?;
        Ok(Subspace { ambient, p, basis: Vec::new(), pivots: Vec::new() })
    }

    /// Builds the span of the given rows.
    pub fn from_rows<I: IntoIterator<Item = RowVec>>(
        ambient: usize,
        p: u8,
        rows: I,
    ) -> Result<Subspace> {
        let mut space = Subspace::new(ambient, p)?;
        for r in rows {
            space.insert(r)?;
        }
        Ok(space)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    /// Dimension of the subspace.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The echelon basis rows.
    pub fn basis(&self) -> &[RowVec] {
        &self.basis
    }

    /// The pivot column of each basis row, strictly increasing.
    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivots
    }

    /// The basis as a matrix.
    pub fn basis_matrix(&self) -> FpMatrix {
        FpMatrix::from_rows(self.ambient, self.p, self.basis.clone())
            .expect("basis rows share the subspace shape")
    }

    fn check_vector(&self, v: &RowVec) -> Result<()> {
        if v.cols() != self.ambient || v.p() != self.p {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} mod {} in subspace of GF({})^{}",
                v.cols(),
                v.p(),
                self.p,
                self.ambient
            )));
        }
        Ok(())
    }

    /// Fully reduces `v` against the echelon basis in place. Afterwards `v`
    /// is the canonical representative of `v + self` supported on non-pivot
    /// columns; it is zero iff the original vector lay in the subspace.
    pub fn reduce(&self, v: &mut RowVec) {
        for (row, &piv) in self.basis.iter().zip(&self.pivots) {
            let c = v.get(piv);
            if c != 0 {
                v.add_scaled(row, self.p - c);
            }
        }
    }

    /// Adds `v` to the span. Returns true if the dimension grew.
    pub fn insert(&mut self, mut v: RowVec) -> Result<bool> {
        self.check_vector(&v)?;
        self.reduce(&mut v);
        let Some(piv) = v.first_nonzero() else {
            return Ok(false);
        };
        let lead = v.get(piv);
        if lead != 1 {
            v.scale(inv_mod(lead, self.p));
        }
        // Back-reduce the existing basis so the pivot column stays clean.
        for row in self.basis.iter_mut() {
            let c = row.get(piv);
            if c != 0 {
                row.add_scaled(&v, self.p - c);
            }
        }
        let pos = self.pivots.partition_point(|&q| q < piv);
        self.pivots.insert(pos, piv);
        self.basis.insert(pos, v);
        Ok(true)
    }

    /// Whether `v` lies in the subspace.
    pub fn contains(&self, v: &RowVec) -> Result<bool> {
        self.check_vector(v)?;
        let mut w = v.clone();
        self.reduce(&mut w);
        Ok(w.is_zero())
    }

    /// Whether `self ⊆ other`.
    pub fn leq(&self, other: &Subspace) -> Result<bool> {
        if self.ambient != other.ambient || self.p != other.p {
            return Err(Error::DimensionMismatch(
                "subspaces live in different ambient spaces".into(),
            ));
        }
        for row in &self.basis {
            if !other.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The sum `self + other`.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient != other.ambient || self.p != other.p {
            return Err(Error::DimensionMismatch(
                "subspaces live in different ambient spaces".into(),
            ));
        }
        let mut out = self.clone();
        for row in &other.basis {
            out.insert(row.clone())?;
        }
        Ok(out)
    }

    /// The intersection `self ∩ other`, by the doubled-width elimination:
    /// echelonize rows (u, u) for u in self and (w, 0) for w in other; rows
    /// whose left half vanished have intersection vectors in the right half.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient != other.ambient || self.p != other.p {
            return Err(Error::DimensionMismatch(
                "subspaces live in different ambient spaces".into(),
            ));
        }
        let a = self.ambient;
        let mut doubled = Subspace::new(2 * a, self.p)?;
        for u in &self.basis {
            doubled.insert(u.concat(u))?;
        }
        for w in &other.basis {
            let zero = RowVec::zero(a, self.p)?;
            doubled.insert(w.concat(&zero))?;
        }
        let mut out = Subspace::new(a, self.p)?;
        for (row, &piv) in doubled.basis.iter().zip(&doubled.pivots) {
            if piv >= a {
                out.insert(row.slice(a, 2 * a))?;
            }
        }
        Ok(out)
    }

    /// The columns not used as pivots: the canonical complement coordinates
    /// for the quotient by this subspace.
    pub fn non_pivot_cols(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &piv in &self.pivots {
            is_pivot[piv] = true;
        }
        (0..self.ambient).filter(|&j| !is_pivot[j]).collect()
    }

    /// Coordinates of each vector in the quotient space, on the canonical
    /// complement basis (the non-pivot columns). A vector maps to the zero
    /// row iff it lies in the subspace.
    pub fn quotient_coordinates(&self, vectors: &[RowVec]) -> Result<FpMatrix> {
        let complement = self.non_pivot_cols();
        let mut rows = Vec::with_capacity(vectors.len());
        for v in vectors {
            self.check_vector(v)?;
            let mut w = v.clone();
            self.reduce(&mut w);
            rows.push(w.gather(&complement));
        }
        FpMatrix::from_rows(complement.len(), self.p, rows)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(dim {} of GF({})^{})",
            self.dim(),
            self.p,
            self.ambient
        )
    }
}

/// Coefficients `c` with `Σ c[i]·rows[i] = target`, if the target lies in
/// the span. Solved by echelonizing rows augmented with identity columns.
pub fn solve_row_combination(rows: &[RowVec], target: &RowVec) -> Result<Option<Vec<u8>>> {
    let m = rows.len();
    let a = target.cols();
    let p = target.p();
    let mut aug = Subspace::new(a + m, p)?;
    for (i, r) in rows.iter().enumerate() {
        if r.cols() != a || r.p() != p {
            return Err(Error::DimensionMismatch(
                "combination rows must match the target shape".into(),
            ));
        }
        let mut unit = RowVec::zero(m, p)?;
        unit.set(i, 1);
        aug.insert(r.concat(&unit))?;
    }
    let mut v = target.concat(&RowVec::zero(m, p)?);
    aug.reduce(&mut v);
    let left = v.slice(0, a);
    if !left.is_zero() {
        return Ok(None);
    }
    // (target, 0) − combination = (0, −c): negate the right half.
    let mut coeffs = v.slice(a, a + m);
    coeffs.scale(p - 1);
    Ok(Some(coeffs.to_dense()))
}

/// A deterministic Fisher–Yates shuffle of 0..len driven by an xorshift
/// stream. Used to re-run eliminations in an independent row order: the
/// result is a valid argument for [`FpMatrix::permute_rows`].
pub fn shuffled_indices(len: usize, seed: u64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..len).collect();
    let mut state = seed | 1;
    for i in (1..len).rev() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        idx.swap(i, (state % (i as u64 + 1)) as usize);
    }
    idx
}
