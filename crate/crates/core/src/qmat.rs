use num::{BigRational, One, Zero};

pub type Q = BigRational;

pub fn q_from_str(text: &str) -> Option<Q> {
    let text = text.trim();
    match text.split_once('/') {
        Some((num, den)) => {
            let num: num::BigInt = num.trim().parse().ok()?;
            let den: num::BigInt = den.trim().parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(Q::new(num, den))
        }
        None => {
            let num: num::BigInt = text.parse().ok()?;
            Some(Q::from_integer(num))
        }
    }
}

pub fn q_to_string(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A dense matrix over exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Q::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Q) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        QMat { rows, cols, data }
    }

    /// Permutation matrix sending basis vector `j` to basis vector
    /// `image[j]`.
    pub fn permutation(image: &[usize]) -> Self {
        let n = image.len();
        let mut m = QMat::zeros(n, n);
        for (j, &i) in image.iter().enumerate() {
            *m.at_mut(i, j) = Q::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Q {
        &mut self.data[r * self.cols + c]
    }

    pub fn column(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows);
        let mut out = QMat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if !b.is_zero() {
                        *out.at_mut(r, c) += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .filter(|&c| !self.at(r, c).is_zero())
                    .map(|c| self.at(r, c) * &v[c])
                    .sum()
            })
            .collect()
    }

    pub fn kronecker(&self, other: &QMat) -> QMat {
        let mut out = QMat::zeros(self.rows * other.rows, self.cols * other.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.at(r1, c1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        let b = other.at(r2, c2);
                        if !b.is_zero() {
                            *out.at_mut(r1 * other.rows + r2, c1 * other.cols + c2) = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn block_diag(&self, other: &QMat) -> QMat {
        let mut out = QMat::zeros(self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *out.at_mut(r, c) = self.at(r, c).clone();
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                *out.at_mut(self.rows + r, self.cols + c) = other.at(r, c).clone();
            }
        }
        out
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).map(|i| self.at(i, i).clone()).sum()
    }

    /// In-place reduced row echelon form; returns pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pivot_row) = (row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            for c in 0..self.cols {
                self.data.swap(row * self.cols + c, pivot_row * self.cols + c);
            }
            let inv = self.at(row, col).clone();
            for c in col..self.cols {
                let v = self.at(row, c).clone() / &inv;
                *self.at_mut(row, c) = v;
            }
            for r in 0..self.rows {
                if r == row || self.at(r, col).is_zero() {
                    continue;
                }
                let factor = self.at(r, col).clone();
                for c in col..self.cols {
                    let v = self.at(r, c).clone() - &factor * self.at(row, c);
                    *self.at_mut(r, c) = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// A basis of the right nullspace `{x : Mx = 0}`.
    pub fn nullspace_basis(&self) -> Vec<Vec<Q>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Q::zero(); self.cols];
            v[free] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m.at(r, free).clone();
            }
            basis.push(v);
        }
        basis
    }
}

/// Incrementally built reduced echelon basis of a column span, with a
/// transcript expressing each basis vector as a combination of the
/// original columns.
pub struct SpanBuilder {
    dim: usize,
    /// (pivot index, reduced vector, combination over inserted columns)
    basis: Vec<(usize, Vec<Q>, Vec<(usize, Q)>)>,
}

fn combo_add(target: &mut Vec<(usize, Q)>, source: &[(usize, Q)], scale: &Q) {
    for (idx, coeff) in source {
        let add = coeff * scale;
        if let Some(entry) = target.iter_mut().find(|(i, _)| i == idx) {
            entry.1 += add;
        } else {
            target.push((*idx, add));
        }
    }
    target.retain(|(_, c)| !c.is_zero());
}

impl SpanBuilder {
    pub fn new(dim: usize) -> Self {
        SpanBuilder { dim, basis: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.dim
    }

    /// Reduces `v` against the basis; returns the remainder and the
    /// combination of original columns that was subtracted.
    fn reduce(&self, mut v: Vec<Q>) -> (Vec<Q>, Vec<(usize, Q)>) {
        let mut combo: Vec<(usize, Q)> = Vec::new();
        for (pivot, vec, vec_combo) in &self.basis {
            let coeff = v[*pivot].clone();
            if coeff.is_zero() {
                continue;
            }
            for (i, entry) in v.iter_mut().enumerate() {
                let delta = &coeff * &vec[i];
                if !delta.is_zero() {
                    *entry -= delta;
                }
            }
            combo_add(&mut combo, vec_combo, &coeff);
        }
        (v, combo)
    }

    /// Adds a column (tagged `col_id`); returns true if the rank grew.
    pub fn add(&mut self, col_id: usize, v: Vec<Q>) -> bool {
        let (mut rem, combo) = self.reduce(v);
        let Some(pivot) = rem.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let lead = rem[pivot].clone();
        for entry in rem.iter_mut() {
            if !entry.is_zero() {
                *entry /= &lead;
            }
        }
        // new column's own contribution: (v - combo)/lead
        let mut new_combo = vec![(col_id, Q::one() / &lead)];
        for (idx, coeff) in &combo {
            new_combo.push((*idx, -(coeff / &lead)));
        }
        new_combo.retain(|(_, c)| !c.is_zero());
        // back-reduce existing basis vectors to keep the echelon reduced
        for k in 0..self.basis.len() {
            let coeff = self.basis[k].1[pivot].clone();
            if coeff.is_zero() {
                continue;
            }
            for i in 0..self.dim {
                let delta = &coeff * &rem[i];
                if !delta.is_zero() {
                    self.basis[k].1[i] -= delta;
                }
            }
            let scaled: Vec<(usize, Q)> =
                new_combo.iter().map(|(i, c)| (*i, -(&coeff * c))).collect();
            let mut merged = std::mem::take(&mut self.basis[k].2);
            combo_add(&mut merged, &scaled, &Q::one());
            self.basis[k].2 = merged;
        }
        self.basis.push((pivot, rem, new_combo));
        self.basis.sort_by_key(|(p, _, _)| *p);
        true
    }

    /// Expresses `target` in the span, as a combination of original
    /// columns, if possible.
    pub fn express(&self, target: &[Q]) -> Option<Vec<(usize, Q)>> {
        let (rem, combo) = self.reduce(target.to_vec());
        if rem.iter().all(|x| x.is_zero()) {
            Some(combo)
        } else {
            None
        }
    }

    /// A nonzero functional vanishing on the span, when the span is
    /// proper. The returned vector has a 1 at some coordinate outside the
    /// span's pivot set.
    pub fn orthogonal_functional(&self) -> Option<Vec<Q>> {
        if self.is_full() {
            return None;
        }
        let pivots: std::collections::BTreeSet<usize> =
            self.basis.iter().map(|(p, _, _)| *p).collect();
        let free = (0..self.dim).find(|i| !pivots.contains(i))?;
        let mut phi = vec![Q::zero(); self.dim];
        phi[free] = Q::one();
        for (pivot, vec, _) in &self.basis {
            phi[*pivot] = -vec[free].clone();
        }
        Some(phi)
    }
}
