//! Linear algebra over the two-element field.
//!
//! Vectors are packed into a single machine word, so every vector and every
//! matrix row has at most [`MAX_BITS`] entries. Entry `i` of a vector lives in
//! bit `i` of the word.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use thiserror::Error;

/// Widest vector (and widest matrix row) that fits in one word.
pub const MAX_BITS: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum F2Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("width {0} exceeds the {MAX_BITS}-bit limit")]
    TooWide(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

#[inline]
fn mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// A fixed-length vector over 𝔽₂.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct F2Vector {
    bits: u64,
    len: u8,
}

impl F2Vector {
    /// Builds a vector from packed bits; bits beyond `len` are discarded.
    ///
    /// Panics if `len` is zero or wider than [`MAX_BITS`].
    pub fn new(bits: u64, len: usize) -> Self {
        assert!(len > 0 && len <= MAX_BITS, "vector length {len} out of range");
        F2Vector { bits: bits & mask(len), len: len as u8 }
    }

    pub fn zero(len: usize) -> Self {
        Self::new(0, len)
    }

    /// The standard basis vector with a single 1 at (0-based) position `i`.
    pub fn unit(i: usize, len: usize) -> Self {
        assert!(i < len);
        Self::new(1 << i, len)
    }

    /// The all-ones vector ε.
    pub fn ones(len: usize) -> Self {
        Self::new(u64::MAX, len)
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, i: usize) -> bool {
        (self.bits >> i) & 1 == 1
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// Standard bilinear form Σ xᵢyᵢ.
    pub fn dot(&self, other: &F2Vector) -> bool {
        (self.bits & other.bits).count_ones() % 2 == 1
    }

    /// Indices of the nonzero entries.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| self.get(i))
    }
}

impl Add for F2Vector {
    type Output = F2Vector;
    fn add(self, rhs: F2Vector) -> F2Vector {
        debug_assert_eq!(self.len, rhs.len);
        F2Vector { bits: self.bits ^ rhs.bits, len: self.len }
    }
}

impl AddAssign for F2Vector {
    fn add_assign(&mut self, rhs: F2Vector) {
        debug_assert_eq!(self.len, rhs.len);
        self.bits ^= rhs.bits;
    }
}

impl fmt::Display for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&bits_to_string(self.bits, self.len()))
    }
}

impl FromStr for F2Vector {
    type Err = F2Error;
    fn from_str(s: &str) -> Result<Self, F2Error> {
        let s = s.trim();
        let bits = parse_bits(s, 1)?;
        Ok(F2Vector::new(bits, s.len()))
    }
}

/// Renders `len` bits as a '0'/'1' string, entry 0 first.
pub fn bits_to_string(bits: u64, len: usize) -> String {
    (0..len).map(|i| if (bits >> i) & 1 == 1 { '1' } else { '0' }).collect()
}

fn parse_bits(s: &str, line: usize) -> Result<u64, F2Error> {
    if s.is_empty() {
        return Err(F2Error::Parse { line, msg: "empty row".into() });
    }
    if s.len() > MAX_BITS {
        return Err(F2Error::TooWide(s.len()));
    }
    let mut bits = 0u64;
    for (i, ch) in s.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => bits |= 1 << i,
            other => {
                return Err(F2Error::Parse {
                    line,
                    msg: format!("unexpected character {other:?} at column {}", i + 1),
                })
            }
        }
    }
    Ok(bits)
}

/// A dense k×m matrix over 𝔽₂, stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct F2Matrix {
    rows: Vec<u64>,
    ncols: usize,
}

impl F2Matrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        assert!(ncols <= MAX_BITS, "too many columns: {ncols}");
        F2Matrix { rows: vec![0; nrows], ncols }
    }

    pub fn identity(n: usize) -> Self {
        let mut a = Self::zeros(n, n);
        for (i, r) in a.rows.iter_mut().enumerate() {
            *r = 1 << i;
        }
        a
    }

    pub fn from_rows(rows: Vec<u64>, ncols: usize) -> Self {
        assert!(ncols <= MAX_BITS, "too many columns: {ncols}");
        let m = mask(ncols);
        F2Matrix { rows: rows.into_iter().map(|r| r & m).collect(), ncols }
    }

    /// Builds the k×m matrix whose j-th column is `columns[j]` (packed, entry i in bit i).
    pub fn from_columns(columns: &[u64], nrows: usize) -> Self {
        let mut a = Self::zeros(nrows, columns.len());
        for (j, &c) in columns.iter().enumerate() {
            for i in 0..nrows {
                if (c >> i) & 1 == 1 {
                    a.rows[i] |= 1 << j;
                }
            }
        }
        a
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> F2Vector {
        F2Vector::new(self.rows[i], self.ncols.max(1))
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.rows[i] >> j) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        if value {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    /// Column `j` packed with entry i in bit i.
    pub fn column(&self, j: usize) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (i, r)| acc | (((r >> j) & 1) << i))
    }

    pub fn columns(&self) -> Vec<u64> {
        (0..self.ncols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> F2Matrix {
        F2Matrix::from_columns(&self.rows, self.ncols)
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &F2Matrix) -> F2Matrix {
        assert_eq!(self.ncols, rhs.nrows(), "incompatible shapes");
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                let mut acc = 0u64;
                let mut bits = r;
                while bits != 0 {
                    let j = bits.trailing_zeros() as usize;
                    acc ^= rhs.rows[j];
                    bits &= bits - 1;
                }
                acc
            })
            .collect();
        F2Matrix { rows, ncols: rhs.ncols }
    }

    /// Product with a packed column vector.
    pub fn mul_vec(&self, v: u64) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &r)| acc | (((r & v).count_ones() as u64) & 1) << i)
    }

    /// Returns the matrix whose column j is column `perm[j]` of `self`.
    pub fn select_columns(&self, perm: &[usize]) -> F2Matrix {
        let cols = self.columns();
        let picked: Vec<u64> = perm.iter().map(|&j| cols[j]).collect();
        F2Matrix::from_columns(&picked, self.nrows())
    }

    /// Reduces in place; returns the pivot column of each nonzero row.
    fn eliminate(rows: &mut [u64], ncols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            if r == rows.len() {
                break;
            }
            let bit = 1u64 << c;
            let Some(p) = (r..rows.len()).find(|&i| rows[i] & bit != 0) else {
                continue;
            };
            rows.swap(r, p);
            let pivot_row = rows[r];
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && *row & bit != 0 {
                    *row ^= pivot_row;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        Self::eliminate(&mut rows, self.ncols).len()
    }

    /// Reduced row echelon form, zero rows last. Canonical for the left GL(k) orbit.
    pub fn rref(&self) -> F2Matrix {
        let mut rows = self.rows.clone();
        Self::eliminate(&mut rows, self.ncols);
        F2Matrix { rows, ncols: self.ncols }
    }

    pub fn row_space(&self) -> Subspace {
        let mut rows = self.rows.clone();
        let r = Self::eliminate(&mut rows, self.ncols).len();
        rows.truncate(r);
        Subspace { basis: rows, len: self.ncols }
    }

    /// Right kernel {x : A·x = 0}.
    pub fn kernel(&self) -> Subspace {
        let mut rows = self.rows.clone();
        let pivots = Self::eliminate(&mut rows, self.ncols);
        let mut basis = Vec::new();
        for free in (0..self.ncols).filter(|c| !pivots.contains(c)) {
            let mut v = 1u64 << free;
            for (r, &p) in pivots.iter().enumerate() {
                if rows[r] >> free & 1 == 1 {
                    v |= 1 << p;
                }
            }
            basis.push(v);
        }
        Subspace::from_vectors(&basis, self.ncols)
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.ncols
    }

    pub fn inverse(&self) -> Option<F2Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.ncols;
        if 2 * n > MAX_BITS {
            return None;
        }
        let mut aug: Vec<u64> = self.rows.iter().enumerate().map(|(i, &r)| r | (1 << (n + i))).collect();
        let pivots = Self::eliminate(&mut aug, n);
        if pivots.len() != n {
            return None;
        }
        Some(F2Matrix::from_rows(aug.iter().map(|r| r >> n).collect(), n))
    }

    /// Multiplicative order of an invertible square matrix.
    pub fn order(&self) -> Option<usize> {
        if !self.is_invertible() {
            return None;
        }
        let id = F2Matrix::identity(self.ncols);
        let mut x = self.clone();
        let mut n = 1;
        while x != id {
            x = x.mul(self);
            n += 1;
        }
        Some(n)
    }

    pub fn pow(&self, e: usize) -> F2Matrix {
        (0..e).fold(F2Matrix::identity(self.ncols), |acc, _| acc.mul(self))
    }

    /// Plain-text form: one '0'/'1' row per line.
    pub fn to_text(&self) -> String {
        self.rows.iter().map(|&r| bits_to_string(r, self.ncols) + "\n").collect()
    }

    pub fn parse_text(text: &str) -> Result<F2Matrix, F2Error> {
        let rows: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Self::parse_rows(rows)
    }

    /// Row strings, as in the JSON array-of-strings form.
    pub fn to_strings(&self) -> Vec<String> {
        self.rows.iter().map(|&r| bits_to_string(r, self.ncols)).collect()
    }

    pub fn from_strings<S: AsRef<str>>(rows: &[S]) -> Result<F2Matrix, F2Error> {
        Self::parse_rows(rows.iter().enumerate().map(|(i, s)| (i + 1, s.as_ref().trim())).collect())
    }

    fn parse_rows(rows: Vec<(usize, &str)>) -> Result<F2Matrix, F2Error> {
        let Some(&(_, first)) = rows.first() else {
            return Err(F2Error::Parse { line: 1, msg: "no rows".into() });
        };
        let ncols = first.len();
        let mut out = Vec::with_capacity(rows.len());
        for (line, s) in rows {
            if s.len() != ncols {
                return Err(F2Error::Parse {
                    line,
                    msg: format!("row has {} entries, expected {ncols}", s.len()),
                });
            }
            out.push(parse_bits(s, line)?);
        }
        Ok(F2Matrix { rows: out, ncols })
    }
}

/// Row-major, big-endian: row 0 first, and within a row column 0 is most significant.
impl Ord for F2Matrix {
    fn cmp(&self, other: &Self) -> Ordering {
        self.nrows()
            .cmp(&other.nrows())
            .then(self.ncols.cmp(&other.ncols))
            .then_with(|| {
                for (a, b) in self.rows.iter().zip(&other.rows) {
                    match a.reverse_bits().cmp(&b.reverse_bits()) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for F2Matrix {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.to_strings();
        write!(f, "[{}]", rows.join(" "))
    }
}

impl serde::Serialize for F2Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for F2Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<String>::deserialize(d)?;
        F2Matrix::from_strings(&rows).map_err(serde::de::Error::custom)
    }
}

/// A linear subspace of 𝔽₂^len, presented by a reduced echelon basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    basis: Vec<u64>,
    len: usize,
}

impl Subspace {
    /// Span of arbitrary (possibly dependent) vectors.
    pub fn from_vectors(vectors: &[u64], len: usize) -> Subspace {
        let mut rows: Vec<u64> = vectors.iter().map(|v| v & mask(len)).collect();
        let r = F2Matrix::eliminate(&mut rows, len).len();
        rows.truncate(r);
        Subspace { basis: rows, len }
    }

    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    pub fn ambient_len(&self) -> usize {
        self.len
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Reduces `v` against the echelon basis; zero iff `v` lies in the span.
    fn reduce(&self, mut v: u64) -> u64 {
        for &b in &self.basis {
            let pivot = b.trailing_zeros();
            if (v >> pivot) & 1 == 1 {
                v ^= b;
            }
        }
        v
    }

    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }

    /// Whether ε = (1,…,1) lies in the subspace.
    pub fn contains_all_ones(&self) -> bool {
        self.contains(mask(self.len))
    }

    /// All 2^dim members, in Gray-code order starting from zero.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let n = 1u64 << self.dim();
        let mut cur = 0u64;
        (0..n).map(move |i| {
            if i > 0 {
                cur ^= self.basis[i.trailing_zeros() as usize];
            }
            cur
        })
    }

    pub fn vectors(&self) -> impl Iterator<Item = F2Vector> + '_ {
        let len = self.len;
        self.iter().map(move |v| F2Vector::new(v, len))
    }
}

/// Echelon basis that remembers how each stored vector was built from the
/// inserted generators, so membership queries also return coordinates.
#[derive(Clone, Debug, Default)]
pub struct TrackedBasis {
    // (reduced vector, combination of generators as a bitmask)
    rows: Vec<(u64, u64)>,
    generators: usize,
}

impl TrackedBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.generators
    }

    fn reduce(&self, mut v: u64) -> (u64, u64) {
        let mut combo = 0;
        for &(r, c) in &self.rows {
            let pivot = r.trailing_zeros();
            if (v >> pivot) & 1 == 1 {
                v ^= r;
                combo ^= c;
            }
        }
        (v, combo)
    }

    /// Coordinates of `v` in terms of the generators (bit j = generator j), if `v` is in the span.
    pub fn coordinates(&self, v: u64) -> Option<u64> {
        match self.reduce(v) {
            (0, combo) => Some(combo),
            _ => None,
        }
    }

    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v).0 == 0
    }

    /// Adds `v` as a new generator if it is independent; returns whether it was added.
    pub fn insert(&mut self, v: u64) -> bool {
        let (r, combo) = self.reduce(v);
        if r == 0 {
            return false;
        }
        let combo = combo ^ (1 << self.generators);
        self.generators += 1;
        let pivot = r.trailing_zeros();
        for row in self.rows.iter_mut() {
            if (row.0 >> pivot) & 1 == 1 {
                row.0 ^= r;
                row.1 ^= combo;
            }
        }
        self.rows.push((r, combo));
        true
    }
}

/// Linear independence of packed vectors.
pub fn independent(vectors: &[u64]) -> bool {
    let mut b = TrackedBasis::new();
    vectors.iter().all(|&v| b.insert(v))
}

/// Dimension of the span of packed vectors.
pub fn span_dim(vectors: &[u64]) -> usize {
    let mut b = TrackedBasis::new();
    vectors.iter().filter(|&&v| b.insert(v)).count()
}
