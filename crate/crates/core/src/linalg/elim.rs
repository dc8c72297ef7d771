//! Gaussian elimination with unit pivots over any scalar domain that can
//! recognise and invert units. Over a field this is ordinary reduced row
//! echelon form; over a finite local ring it yields the free part of a
//! module presentation.

/// Arithmetic needed for unit-pivot elimination.
pub trait Scalars {
    type E: Clone + PartialEq;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    /// Inverse of a unit, or None for non-units.
    fn unit_inverse(&self, a: &Self::E) -> Option<Self::E>;
}

/// Row echelon form: rows[..pivots.len()] have a 1 at their pivot column and
/// zeros in all other pivot columns. `residual` holds the remaining rows,
/// whose entries are all non-units.
#[derive(Clone, Debug)]
pub struct Rref<E> {
    pub ncols: usize,
    pub rows: Vec<Vec<E>>,
    pub pivots: Vec<usize>,
    pub residual: Vec<Vec<E>>,
}

impl<E> Rref<E> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn rref<S: Scalars>(s: &S, mut m: Vec<Vec<S::E>>, ncols: usize) -> Rref<S::E> {
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..ncols {
        let mut found = None;
        for (i, row) in m.iter().enumerate().skip(top) {
            if let Some(inv) = s.unit_inverse(&row[col]) {
                found = Some((i, inv));
                break;
            }
        }
        let Some((i, inv)) = found else { continue };
        m.swap(top, i);
        let prow: Vec<S::E> = m[top].iter().map(|x| s.mul(x, &inv)).collect();
        for (r, row) in m.iter_mut().enumerate() {
            if r == top || s.is_zero(&row[col]) {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                if !s.is_zero(y) {
                    *x = s.sub(x, &s.mul(&f, y));
                }
            }
        }
        m[top] = prow;
        pivots.push(col);
        top += 1;
    }
    let residual: Vec<Vec<S::E>> = m.split_off(top).into_iter().filter(|r| r.iter().any(|x| !s.is_zero(x))).collect();
    Rref { ncols, rows: m, pivots, residual }
}

/// Kernel of the matrix (rows x ncols, acting on column vectors) as a free
/// basis, or None when the kernel is not a free direct summand detectable by
/// unit pivots (over a local ring: when the residual block is nonzero).
pub fn kernel<S: Scalars>(s: &S, m: &[Vec<S::E>], ncols: usize) -> Option<Vec<Vec<S::E>>> {
    let r = rref(s, m.to_vec(), ncols);
    if !r.residual.is_empty() {
        return None;
    }
    Some(kernel_from(s, &r))
}

pub fn kernel_from<S: Scalars>(s: &S, r: &Rref<S::E>) -> Vec<Vec<S::E>> {
    let free: Vec<usize> = (0..r.ncols).filter(|c| !r.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![s.zero(); r.ncols];
            v[f] = s.one();
            for (k, &p) in r.pivots.iter().enumerate() {
                v[p] = s.neg(&r.rows[k][f]);
            }
            v
        })
        .collect()
}

/// Rank over a field.
pub fn rank<S: Scalars>(s: &S, m: Vec<Vec<S::E>>, ncols: usize) -> usize {
    rref(s, m, ncols).rank()
}

/// Reduce a row vector by an echelon form (subtract pivot-row multiples).
pub fn reduce_by<S: Scalars>(s: &S, r: &Rref<S::E>, v: &[S::E]) -> Vec<S::E> {
    let mut v = v.to_vec();
    for (k, &p) in r.pivots.iter().enumerate() {
        if s.is_zero(&v[p]) {
            continue;
        }
        let f = v[p].clone();
        for (x, y) in v.iter_mut().zip(&r.rows[k]) {
            if !s.is_zero(y) {
                *x = s.sub(x, &s.mul(&f, y));
            }
        }
    }
    v
}

/// Solve A x = b (A given by rows). Returns None when no solution is found
/// by unit-pivot elimination; decisive over fields and whenever A has unit
/// pivots in every row.
pub fn solve<S: Scalars>(s: &S, a: &[Vec<S::E>], b: &[S::E]) -> Option<Vec<S::E>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let aug: Vec<Vec<S::E>> = a.iter().zip(b).map(|(r, x)| {
        let mut r = r.clone();
        r.push(x.clone());
        r
    }).collect();
    let r = rref(s, aug, ncols);
    if r.residual.iter().any(|row| !s.is_zero(&row[ncols])) {
        return None;
    }
    let mut x = vec![s.zero(); ncols];
    for (k, &p) in r.pivots.iter().enumerate() {
        x[p] = r.rows[k][ncols].clone();
    }
    Some(x)
}

/// Inverse of a square matrix with unit determinant, else None.
pub fn inverse<S: Scalars>(s: &S, a: &[Vec<S::E>]) -> Option<Vec<Vec<S::E>>> {
    let n = a.len();
    let aug: Vec<Vec<S::E>> = a.iter().enumerate().map(|(i, r)| {
        let mut r = r.clone();
        for j in 0..n {
            r.push(if i == j { s.one() } else { s.zero() });
        }
        r
    }).collect();
    let r = rref(s, aug, n);
    if r.rank() < n {
        return None;
    }
    Some(r.rows.iter().map(|row| row[n..].to_vec()).collect())
}

/// Transpose of a rectangular matrix.
pub fn transpose<E: Clone>(m: &[Vec<E>]) -> Vec<Vec<E>> {
    if m.is_empty() {
        return vec![];
    }
    (0..m[0].len()).map(|c| m.iter().map(|r| r[c].clone()).collect()).collect()
}
