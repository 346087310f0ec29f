//! Points, lines and planes of PG(3, s), s = q², with incidence and enumeration.
//!
//! Every object is stored in a canonical form so equality is structural:
//! points and plane duals have their first nonzero coordinate equal to 1, and
//! lines are the reduced row-echelon form of a 2×4 basis.
//!
//! Enumeration order groups objects by pivot position (pivot 0 first) and then
//! orders the free coordinates lexicographically by packed field value. The
//! first point is `[1:0:0:0]` and the first plane is `V(x0)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::linalg::{self, Mat4, Vec4};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint(Vec4);

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPlane(Vec4);

/// A line given by the RREF of a 2×4 basis.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjLine {
    rows: [Vec4; 2],
}

/// An invertible 4×4 matrix acting as `x = M y` (new coordinates `y`).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Projectivity {
    matrix: Mat4,
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<u32> = self.0.iter().map(|x| x.value()).collect();
        write!(f, "P{v:?}")
    }
}

impl fmt::Debug for ProjPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<u32> = self.0.iter().map(|x| x.value()).collect();
        write!(f, "V{v:?}")
    }
}

impl fmt::Debug for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<u32> = self.rows[0].iter().map(|x| x.value()).collect();
        let b: Vec<u32> = self.rows[1].iter().map(|x| x.value()).collect();
        write!(f, "L[{a:?},{b:?}]")
    }
}

impl ProjPoint {
    pub fn coords(&self) -> &Vec4 {
        &self.0
    }
}

impl ProjPlane {
    pub fn dual(&self) -> &Vec4 {
        &self.0
    }
}

impl ProjLine {
    pub fn rows(&self) -> &[Vec4; 2] {
        &self.rows
    }
}

impl Projectivity {
    pub fn matrix(&self) -> &Mat4 {
        &self.matrix
    }
}

const LINE_PIVOTS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn line_free_slots(i: usize, j: usize) -> Vec<(usize, usize)> {
    let mut slots: Vec<(usize, usize)> = ((i + 1)..4).filter(|&c| c != j).map(|c| (0, c)).collect();
    slots.extend(((j + 1)..4).map(|c| (1, c)));
    slots
}

fn normalize(f: &FieldCtx, v: &Vec4) -> Option<Vec4> {
    let lead = v.iter().position(|x| !x.is_zero())?;
    let inv = f.inv(v[lead]).ok()?;
    Some(v.map(|x| f.mul(x, inv)))
}

/// Projective 3-space over the field `GF(q²)` of a [`FieldCtx`].
#[derive(Clone, Debug)]
pub struct Pg3 {
    field: Arc<FieldCtx>,
}

impl Pg3 {
    pub fn new(field: Arc<FieldCtx>) -> Self {
        Pg3 { field }
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    fn s(&self) -> usize {
        self.field.order() as usize
    }

    /// s³ + s² + s + 1.
    pub fn num_points(&self) -> usize {
        let s = self.s();
        s * s * s + s * s + s + 1
    }

    pub fn num_planes(&self) -> usize {
        self.num_points()
    }

    /// (s² + 1)(s² + s + 1).
    pub fn num_lines(&self) -> usize {
        let s = self.s();
        (s * s + 1) * (s * s + s + 1)
    }

    pub fn point(&self, coords: Vec4) -> Result<ProjPoint> {
        for &c in &coords {
            self.field.check(c)?;
        }
        normalize(&self.field, &coords).map(ProjPoint).ok_or(Error::ZeroVector)
    }

    pub fn plane(&self, dual: Vec4) -> Result<ProjPlane> {
        for &c in &dual {
            self.field.check(c)?;
        }
        normalize(&self.field, &dual).map(ProjPlane).ok_or(Error::ZeroVector)
    }

    /// Line spanned by two rows; errors unless they have rank 2.
    pub fn line(&self, a: Vec4, b: Vec4) -> Result<ProjLine> {
        for &c in a.iter().chain(b.iter()) {
            self.field.check(c)?;
        }
        let mut rows = vec![a, b];
        let pivots = linalg::rref(&self.field, &mut rows);
        if pivots.len() != 2 {
            return Err(Error::NotALine(pivots.len()));
        }
        Ok(ProjLine { rows: [rows[0], rows[1]] })
    }

    fn vec_index(&self, v: &Vec4) -> usize {
        let s = self.s();
        let lead = v.iter().position(|x| !x.is_zero()).expect("canonical vector");
        let offset = match lead {
            0 => 0,
            1 => s * s * s,
            2 => s * s * s + s * s,
            _ => s * s * s + s * s + s,
        };
        offset + v[lead + 1..].iter().fold(0usize, |acc, x| acc * s + x.value() as usize)
    }

    fn vec_at(&self, mut idx: usize) -> Vec4 {
        let s = self.s();
        let blocks = [s * s * s, s * s, s, 1];
        let mut lead = 0;
        while idx >= blocks[lead] {
            idx -= blocks[lead];
            lead += 1;
        }
        let mut v = [FieldElement::ZERO; 4];
        v[lead] = FieldElement::ONE;
        for k in (lead + 1..4).rev() {
            v[k] = FieldElement::from_raw((idx % s) as u32);
            idx /= s;
        }
        v
    }

    /// Position of a point in enumeration order.
    pub fn point_index(&self, p: &ProjPoint) -> usize {
        self.vec_index(&p.0)
    }

    pub fn point_at(&self, idx: usize) -> ProjPoint {
        ProjPoint(self.vec_at(idx))
    }

    pub fn plane_index(&self, pl: &ProjPlane) -> usize {
        self.vec_index(&pl.0)
    }

    pub fn plane_at(&self, idx: usize) -> ProjPlane {
        ProjPlane(self.vec_at(idx))
    }

    pub fn points(&self) -> impl Iterator<Item = ProjPoint> + '_ {
        (0..self.num_points()).map(|i| self.point_at(i))
    }

    pub fn planes(&self) -> impl Iterator<Item = ProjPlane> + '_ {
        (0..self.num_planes()).map(|i| self.plane_at(i))
    }

    pub fn line_index(&self, l: &ProjLine) -> usize {
        let s = self.s();
        let mut offset = 0;
        for &(i, j) in &LINE_PIVOTS {
            let slots = line_free_slots(i, j);
            let block = s.pow(slots.len() as u32);
            if l.rows[0][i].is_one() && l.rows[1][j].is_one() && l.rows[0][..i].iter().all(|x| x.is_zero()) && l.rows[1][..j].iter().all(|x| x.is_zero()) {
                let within = slots.iter().fold(0usize, |acc, &(r, c)| acc * s + l.rows[r][c].value() as usize);
                return offset + within;
            }
            offset += block;
        }
        unreachable!("line rows are in RREF")
    }

    pub fn line_at(&self, mut idx: usize) -> ProjLine {
        let s = self.s();
        for &(i, j) in &LINE_PIVOTS {
            let slots = line_free_slots(i, j);
            let block = s.pow(slots.len() as u32);
            if idx < block {
                let mut rows = [[FieldElement::ZERO; 4]; 2];
                rows[0][i] = FieldElement::ONE;
                rows[1][j] = FieldElement::ONE;
                for &(r, c) in slots.iter().rev() {
                    rows[r][c] = FieldElement::from_raw((idx % s) as u32);
                    idx /= s;
                }
                return ProjLine { rows };
            }
            idx -= block;
        }
        panic!("line index out of range")
    }

    pub fn lines(&self) -> impl Iterator<Item = ProjLine> + '_ {
        (0..self.num_lines()).map(|i| self.line_at(i))
    }

    /// The s + 1 points of a line: `r0 + b r1` in field order, then `r1`.
    pub fn points_on_line(&self, l: &ProjLine) -> Vec<ProjPoint> {
        let f = &self.field;
        let [r0, r1] = l.rows;
        let mut out: Vec<ProjPoint> = f
            .elements()
            .map(|b| ProjPoint(std::array::from_fn(|k| f.add(r0[k], f.mul(b, r1[k])))))
            .collect();
        out.push(ProjPoint(r1));
        out
    }

    /// Three points spanning the plane: `e_j - dual_j e_k` for `j != k`, where
    /// `k` is the pivot of the dual vector. Used as the fixed parametrization
    /// for restrictions.
    pub fn plane_basis(&self, pl: &ProjPlane) -> [Vec4; 3] {
        let f = &self.field;
        let k = pl.0.iter().position(|x| !x.is_zero()).expect("canonical plane");
        let mut out = [[FieldElement::ZERO; 4]; 3];
        for (slot, j) in (0..4).filter(|&j| j != k).enumerate() {
            out[slot][j] = FieldElement::ONE;
            out[slot][k] = f.neg(pl.0[j]);
        }
        out
    }

    /// The s² + s + 1 points of a plane, in enumeration order.
    pub fn points_on_plane(&self, pl: &ProjPlane) -> Vec<ProjPoint> {
        let f = &self.field;
        let basis = self.plane_basis(pl);
        let s = self.s();
        let mut out = Vec::with_capacity(s * s + s + 1);
        let mut push = |c: [FieldElement; 3]| {
            let mut v = [FieldElement::ZERO; 4];
            for (b, &coef) in basis.iter().zip(&c) {
                for k in 0..4 {
                    v[k] = f.add(v[k], f.mul(coef, b[k]));
                }
            }
            out.push(ProjPoint(normalize(f, &v).expect("basis is independent")));
        };
        for a in f.elements() {
            for b in f.elements() {
                push([FieldElement::ONE, a, b]);
            }
        }
        for b in f.elements() {
            push([FieldElement::ZERO, FieldElement::ONE, b]);
        }
        push([FieldElement::ZERO, FieldElement::ZERO, FieldElement::ONE]);
        out.sort_by_key(|p| self.point_index(p));
        out
    }

    pub fn point_on_plane(&self, p: &ProjPoint, pl: &ProjPlane) -> bool {
        linalg::dot(&self.field, &p.0, &pl.0).is_zero()
    }

    pub fn point_on_line(&self, p: &ProjPoint, l: &ProjLine) -> bool {
        linalg::rank(&self.field, &[l.rows[0], l.rows[1], p.0]) == 2
    }

    pub fn line_in_plane(&self, l: &ProjLine, pl: &ProjPlane) -> bool {
        l.rows.iter().all(|r| linalg::dot(&self.field, r, &pl.0).is_zero())
    }

    /// Two planes whose intersection is the line.
    pub fn line_equations(&self, l: &ProjLine) -> [Vec4; 2] {
        let ns = linalg::null_space(&self.field, &l.rows);
        [ns[0], ns[1]]
    }

    pub fn line_through(&self, p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine> {
        if p == q {
            return Err(Error::EqualPoints);
        }
        self.line(p.0, q.0)
    }

    pub fn plane_through(&self, l: &ProjLine, p: &ProjPoint) -> Result<ProjPlane> {
        if self.point_on_line(p, l) {
            return Err(Error::PointOnLine);
        }
        let ns = linalg::null_space(&self.field, &[l.rows[0], l.rows[1], p.0]);
        self.plane(ns[0])
    }

    /// The plane spanned by two distinct lines that meet.
    pub fn plane_of_lines(&self, a: &ProjLine, b: &ProjLine) -> Result<ProjPlane> {
        let extra = b
            .rows
            .iter()
            .find(|r| !self.point_on_line(&ProjPoint(normalize(&self.field, r).unwrap()), a))
            .ok_or(Error::Construction("lines coincide".into()))?;
        if self.meet_lines(a, b).is_none() {
            return Err(Error::Construction("lines are skew".into()));
        }
        self.plane_through(a, &ProjPoint(normalize(&self.field, extra).unwrap()))
    }

    pub fn meet_planes(&self, a: &ProjPlane, b: &ProjPlane) -> Result<ProjLine> {
        if a == b {
            return Err(Error::EqualPlanes);
        }
        let ns = linalg::null_space(&self.field, &[a.0, b.0]);
        self.line(ns[0], ns[1])
    }

    /// Common point of two distinct lines, if they meet.
    pub fn meet_lines(&self, a: &ProjLine, b: &ProjLine) -> Option<ProjPoint> {
        let ea = self.line_equations(a);
        let eb = self.line_equations(b);
        let ns = linalg::null_space(&self.field, &[ea[0], ea[1], eb[0], eb[1]]);
        (ns.len() == 1).then(|| ProjPoint(normalize(&self.field, &ns[0]).unwrap()))
    }

    pub fn are_skew(&self, a: &ProjLine, b: &ProjLine) -> bool {
        linalg::rank(&self.field, &[a.rows[0], a.rows[1], b.rows[0], b.rows[1]]) == 4
    }

    /// The q² + 1 planes containing `l`, in enumeration order.
    pub fn book_of_planes(&self, l: &ProjLine) -> Vec<ProjPlane> {
        let f = &self.field;
        let [u, v] = self.line_equations(l);
        let mut out: Vec<ProjPlane> = f
            .elements()
            .map(|lam| ProjPlane(normalize(f, &std::array::from_fn(|k| f.add(u[k], f.mul(lam, v[k])))).unwrap()))
            .collect();
        out.push(ProjPlane(normalize(f, &v).unwrap()));
        out.sort_by_key(|p| self.plane_index(p));
        out
    }

    /// The s² + s + 1 lines through `p`, in enumeration order.
    pub fn lines_through_point(&self, p: &ProjPoint) -> Vec<ProjLine> {
        let k = p.0.iter().position(|x| !x.is_zero()).unwrap();
        let mut out: Vec<ProjLine> = self
            .points_on_plane(&self.coordinate_plane(k))
            .iter()
            .map(|x| self.line_through(p, x).expect("p is off the plane"))
            .collect();
        out.sort_by_key(|l| self.line_index(l));
        out
    }

    /// The s + 1 lines through `p` inside the plane `pl`, which must contain `p`.
    pub fn pencil(&self, p: &ProjPoint, pl: &ProjPlane) -> Vec<ProjLine> {
        debug_assert!(self.point_on_plane(p, pl));
        let k = p.0.iter().position(|x| !x.is_zero()).unwrap();
        let base = self.meet_planes(pl, &self.coordinate_plane(k)).expect("p separates the planes");
        let mut out: Vec<ProjLine> = self
            .points_on_line(&base)
            .iter()
            .map(|x| self.line_through(p, x).expect("p is off the base line"))
            .collect();
        out.sort_by_key(|l| self.line_index(l));
        out
    }

    pub fn projectivity(&self, matrix: Mat4) -> Result<Projectivity> {
        if linalg::rank(&self.field, &matrix) != 4 {
            return Err(Error::Singular);
        }
        Ok(Projectivity { matrix })
    }

    pub fn identity(&self) -> Projectivity {
        Projectivity { matrix: linalg::identity() }
    }

    pub fn inverse(&self, m: &Projectivity) -> Projectivity {
        Projectivity { matrix: linalg::inverse(&self.field, &m.matrix).expect("projectivity is invertible") }
    }

    pub fn compose(&self, a: &Projectivity, b: &Projectivity) -> Projectivity {
        Projectivity { matrix: linalg::mat_mul(&self.field, &a.matrix, &b.matrix) }
    }

    /// Image `M·p` of a point given in new coordinates.
    pub fn apply(&self, m: &Projectivity, p: &ProjPoint) -> ProjPoint {
        ProjPoint(normalize(&self.field, &linalg::mat_vec(&self.field, &m.matrix, &p.0)).unwrap())
    }

    pub fn apply_line(&self, m: &Projectivity, l: &ProjLine) -> ProjLine {
        let f = &self.field;
        self.line(linalg::mat_vec(f, &m.matrix, &l.rows[0]), linalg::mat_vec(f, &m.matrix, &l.rows[1]))
            .expect("projectivity preserves rank")
    }

    /// A projectivity `M` with `M(V(x2,x3)) = l` and, if given, `M(V(x0,x1)) = l2`.
    ///
    /// Pulling a form back along `M` puts `l` in the position `V(x2, x3)`.
    pub fn adapted_coords(&self, l: &ProjLine, l2: Option<&ProjLine>) -> Result<Projectivity> {
        let cols: [Vec4; 4] = match l2 {
            Some(l2) => {
                if !self.are_skew(l, l2) {
                    return Err(Error::NotSkew);
                }
                [l.rows[0], l.rows[1], l2.rows[0], l2.rows[1]]
            }
            None => {
                let mut rows = l.rows.to_vec();
                let pivots = linalg::rref(&self.field, &mut rows);
                let mut extra = (0..4).filter(|c| !pivots.contains(c)).map(|c| {
                    let mut e = [FieldElement::ZERO; 4];
                    e[c] = FieldElement::ONE;
                    e
                });
                [l.rows[0], l.rows[1], extra.next().unwrap(), extra.next().unwrap()]
            }
        };
        let mut m = [[FieldElement::ZERO; 4]; 4];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..4 {
                m[i][j] = col[i];
            }
        }
        self.projectivity(m)
    }

    /// `V(x_a, x_b)` for coordinate indices `a < b`.
    pub fn coordinate_line(&self, a: usize, b: usize) -> ProjLine {
        let mut rows = [[FieldElement::ZERO; 4]; 2];
        let mut free = (0..4).filter(|&c| c != a && c != b);
        rows[0][free.next().unwrap()] = FieldElement::ONE;
        rows[1][free.next().unwrap()] = FieldElement::ONE;
        ProjLine { rows }
    }

    /// `V(x_k)`.
    pub fn coordinate_plane(&self, k: usize) -> ProjPlane {
        let mut d = [FieldElement::ZERO; 4];
        d[k] = FieldElement::ONE;
        ProjPlane(d)
    }
}
