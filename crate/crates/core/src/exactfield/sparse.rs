use std::collections::BTreeMap;

use super::field::Scalar;

/// Sparse row as sorted (column, value) pairs without zeros.
pub type SparseRow<S> = Vec<(usize, S)>;

pub fn normalize_row<S: Scalar>(mut r: Vec<(usize, S)>) -> SparseRow<S> {
    r.sort_by_key(|x| x.0);
    let mut out: SparseRow<S> = Vec::with_capacity(r.len());
    for (c, v) in r {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 = last.1.add(&v),
            _ => out.push((c, v)),
        }
    }
    out.retain(|x| !x.1.is_zero());
    out
}

fn axpy<S: Scalar>(row: &SparseRow<S>, f: &S, piv: &SparseRow<S>) -> SparseRow<S> {
    // row - f * piv
    let mut out = Vec::with_capacity(row.len() + piv.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < piv.len() {
        let ci = row.get(i).map(|x| x.0).unwrap_or(usize::MAX);
        let cj = piv.get(j).map(|x| x.0).unwrap_or(usize::MAX);
        if ci < cj {
            out.push(row[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, piv[j].1.mul(f).neg()));
            j += 1;
        } else {
            let v = row[i].1.sub(&piv[j].1.mul(f));
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental sparse echelon form; rows are reduced against stored pivots on insertion.
pub struct SparseEchelon<S: Scalar> {
    pivots: BTreeMap<usize, SparseRow<S>>,
}

impl<S: Scalar> Default for SparseEchelon<S> {
    fn default() -> Self {
        SparseEchelon { pivots: BTreeMap::new() }
    }
}

impl<S: Scalar> SparseEchelon<S> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reduces the row to its remainder against the current pivots.
    pub fn reduce(&self, mut row: SparseRow<S>) -> SparseRow<S> {
        let mut start = 0;
        loop {
            let Some(pos) = row.iter().skip(start).position(|x| self.pivots.contains_key(&x.0)) else { return row };
            let idx = start + pos;
            let (c, v) = row[idx].clone();
            let piv = &self.pivots[&c];
            row = axpy(&row, &v, piv);
            start = idx;
        }
    }

    /// Inserts a row; returns true if it increased the rank.
    pub fn insert(&mut self, row: SparseRow<S>) -> bool {
        let r = self.reduce(row);
        if r.is_empty() {
            return false;
        }
        // pivot on the sparsest-looking choice: the leading column, normalized to 1
        let inv = r[0].1.inv().expect("nonzero");
        let r: SparseRow<S> = r.into_iter().map(|(c, v)| (c, v.mul(&inv))).collect();
        self.pivots.insert(r[0].0, r);
        true
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }
}

/// Rank of a sparse matrix given by rows. Rows are inserted shortest first.
pub fn sparse_rank<S: Scalar>(mut rows: Vec<SparseRow<S>>) -> usize {
    rows.sort_by_key(|r| r.len());
    let mut e = SparseEchelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}
