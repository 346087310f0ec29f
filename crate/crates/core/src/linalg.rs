//! Row reduction over GF(q²) for the small matrices of projective 3-space.

use crate::field::{FieldCtx, FieldElement};

pub type Vec4 = [FieldElement; 4];
pub type Mat4 = [[FieldElement; 4]; 4];

/// Reduces `rows` to reduced row-echelon form in place, dropping zero rows.
/// Returns the pivot columns.
pub fn rref<const N: usize>(f: &FieldCtx, rows: &mut Vec<[FieldElement; N]>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..N {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][col]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let c = row[col];
            for k in 0..N {
                row[k] = f.sub(row[k], f.mul(c, pivot_row[k]));
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank<const N: usize>(f: &FieldCtx, rows: &[[FieldElement; N]]) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m).len()
}

/// Basis of `{x : row·x = 0 for every row}`, one vector per free column, with
/// a 1 in that free column.
pub fn null_space<const N: usize>(f: &FieldCtx, rows: &[[FieldElement; N]]) -> Vec<[FieldElement; N]> {
    let mut m = rows.to_vec();
    let pivots = rref(f, &mut m);
    let mut out = Vec::new();
    for free in (0..N).filter(|c| !pivots.contains(c)) {
        let mut v = [FieldElement::ZERO; N];
        v[free] = FieldElement::ONE;
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = f.neg(row[free]);
        }
        out.push(v);
    }
    out
}

pub fn dot(f: &FieldCtx, a: &Vec4, b: &Vec4) -> FieldElement {
    let mut acc = FieldElement::ZERO;
    for i in 0..4 {
        acc = f.add(acc, f.mul(a[i], b[i]));
    }
    acc
}

pub fn mat_vec(f: &FieldCtx, m: &Mat4, v: &Vec4) -> Vec4 {
    let mut out = [FieldElement::ZERO; 4];
    for (i, row) in m.iter().enumerate() {
        out[i] = dot(f, row, v);
    }
    out
}

pub fn mat_mul(f: &FieldCtx, a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[FieldElement::ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = FieldElement::ZERO;
            for k in 0..4 {
                acc = f.add(acc, f.mul(a[i][k], b[k][j]));
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn transpose(m: &Mat4) -> Mat4 {
    let mut out = *m;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = m[j][i];
        }
    }
    out
}

pub fn conj_mat(f: &FieldCtx, m: &Mat4) -> Mat4 {
    m.map(|row| row.map(|x| f.conj(x)))
}

pub fn identity() -> Mat4 {
    let mut m = [[FieldElement::ZERO; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = FieldElement::ONE;
    }
    m
}

/// Gauss-Jordan inverse; `None` if singular.
pub fn inverse(f: &FieldCtx, m: &Mat4) -> Option<Mat4> {
    let mut aug: Vec<[FieldElement; 8]> = (0..4)
        .map(|i| {
            let mut r = [FieldElement::ZERO; 8];
            r[..4].copy_from_slice(&m[i]);
            r[4 + i] = FieldElement::ONE;
            r
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.len() < 4 || pivots[3] != 3 {
        return None;
    }
    let mut out = [[FieldElement::ZERO; 4]; 4];
    for i in 0..4 {
        out[i].copy_from_slice(&aug[i][4..]);
    }
    Some(out)
}
