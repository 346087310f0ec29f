//! Hermitian matrices and the surfaces `V(xᵀ A x^(q))` they define.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::forms::EvalTable;
use crate::linalg::{self, Mat4, Vec4};
use crate::projspace::{Pg3, ProjLine, ProjPlane, ProjPoint, Projectivity};

/// A nonzero 4×4 matrix with `Aᵀ = A^(q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HermitianMatrix {
    entries: Mat4,
}

impl HermitianMatrix {
    pub fn new(f: &FieldCtx, entries: Mat4) -> Result<Self> {
        for row in &entries {
            for &x in row {
                f.check(x)?;
            }
        }
        for i in 0..4 {
            for j in i..4 {
                if entries[j][i] != f.conj(entries[i][j]) {
                    return Err(Error::NotHermitian(i, j));
                }
            }
        }
        if entries.iter().flatten().all(|x| x.is_zero()) {
            return Err(Error::ZeroMatrix);
        }
        Ok(HermitianMatrix { entries })
    }

    /// Diagonal matrix with `rank` leading ones.
    pub fn canonical(rank: usize) -> Result<Self> {
        if !(1..=4).contains(&rank) {
            return Err(Error::RankOutOfRange(rank));
        }
        let mut entries = [[FieldElement::ZERO; 4]; 4];
        for (i, row) in entries.iter_mut().enumerate().take(rank) {
            row[i] = FieldElement::ONE;
        }
        Ok(HermitianMatrix { entries })
    }

    pub fn entries(&self) -> &Mat4 {
        &self.entries
    }

    /// `Σ A_ij x_i x_j^q`.
    pub fn value(&self, f: &FieldCtx, x: &Vec4) -> FieldElement {
        let xc = x.map(|c| f.conj(c));
        let mut acc = FieldElement::ZERO;
        for i in 0..4 {
            if x[i].is_zero() {
                continue;
            }
            acc = f.add(acc, f.mul(x[i], linalg::dot(f, &self.entries[i], &xc)));
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LineClass {
    Tangent,
    Secant,
    Generator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PlaneClass {
    Tangent(ProjPoint),
    NonTangent,
}

impl PlaneClass {
    pub fn is_tangent(&self) -> bool {
        matches!(self, PlaneClass::Tangent(_))
    }
}

/// Tangent and non-tangent planes in the book of a line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BookProfile {
    pub tangent: usize,
    pub non_tangent: usize,
}

/// Classes of the lines through a surface point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TangentPointTally {
    /// Generators through the point (all inside the tangent plane).
    pub generators: usize,
    /// Tangent lines through the point inside the tangent plane.
    pub tangents: usize,
    /// Secants through the point, all outside the tangent plane.
    pub secants: usize,
}

const NOT_ON_SURFACE: u32 = u32::MAX;

/// A Hermitian surface with its point set materialized in enumeration order.
pub struct HermitianSurface {
    space: Pg3,
    matrix: HermitianMatrix,
    rank: usize,
    inverse: Option<Mat4>,
    points: Vec<ProjPoint>,
    /// `slot[point_index]` is the position in `points`, or `NOT_ON_SURFACE`.
    slot: Vec<u32>,
    generators: OnceLock<Vec<ProjLine>>,
    generator_slots: OnceLock<Vec<Vec<u32>>>,
    eval_tables: Mutex<BTreeMap<u32, Arc<EvalTable>>>,
}

impl std::fmt::Debug for HermitianSurface {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HermitianSurface")
            .field("q", &self.space.field().q())
            .field("rank", &self.rank)
            .field("points", &self.points.len())
            .finish()
    }
}

impl HermitianSurface {
    pub fn new(space: Pg3, matrix: HermitianMatrix) -> Self {
        let f = space.field().clone();
        let rank = linalg::rank(&f, matrix.entries());
        let inverse = if rank == 4 { linalg::inverse(&f, matrix.entries()) } else { None };
        let n = space.num_points();
        let mut slot = vec![NOT_ON_SURFACE; n];
        let mut points = Vec::new();
        let diagonal_identity = *matrix.entries() == linalg::identity();
        for idx in 0..n {
            let p = space.point_at(idx);
            let v = if diagonal_identity {
                p.coords().iter().fold(FieldElement::ZERO, |acc, &c| f.add(acc, f.norm(c)))
            } else {
                matrix.value(&f, p.coords())
            };
            if v.is_zero() {
                slot[idx] = points.len() as u32;
                points.push(p);
            }
        }
        HermitianSurface {
            space,
            matrix,
            rank,
            inverse,
            points,
            slot,
            generators: OnceLock::new(),
            generator_slots: OnceLock::new(),
            eval_tables: Mutex::new(BTreeMap::new()),
        }
    }

    /// The surface `x0^(q+1) + … + x_(r-1)^(q+1) = 0`.
    pub fn canonical(space: Pg3, rank: usize) -> Result<Self> {
        Ok(Self::new(space, HermitianMatrix::canonical(rank)?))
    }

    /// The non-degenerate canonical surface over `GF(q²)`.
    pub fn standard(q: u32) -> Result<Self> {
        let f = Arc::new(FieldCtx::new(q)?);
        Self::canonical(Pg3::new(f), 4)
    }

    pub fn space(&self) -> &Pg3 {
        &self.space
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        self.space.field()
    }

    pub fn q(&self) -> u32 {
        self.field().q()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_degenerate(&self) -> bool {
        self.rank < 4
    }

    /// Surface points, sorted in enumeration order.
    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    /// Position of `p` in [`points`](Self::points), if it lies on the surface.
    pub fn slot_of(&self, p: &ProjPoint) -> Option<usize> {
        let s = self.slot[self.space.point_index(p)];
        (s != NOT_ON_SURFACE).then_some(s as usize)
    }

    /// The surface in new coordinates `y` with `x = M y`: matrix `Mᵀ A M^(q)`.
    pub fn transform(&self, m: &Projectivity) -> HermitianSurface {
        let f = self.field();
        let a = linalg::mat_mul(f, &linalg::transpose(m.matrix()), self.matrix.entries());
        let a = linalg::mat_mul(f, &a, &linalg::conj_mat(f, m.matrix()));
        HermitianSurface::new(self.space.clone(), HermitianMatrix { entries: a })
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.slot[self.space.point_index(p)] != NOT_ON_SURFACE
    }

    fn require_nondegenerate(&self) -> Result<()> {
        if self.rank == 4 {
            Ok(())
        } else {
            Err(Error::Degenerate(self.rank))
        }
    }

    /// Number of surface points on `l`.
    pub fn line_count(&self, l: &ProjLine) -> usize {
        self.space.points_on_line(l).iter().filter(|p| self.contains(p)).count()
    }

    pub fn classify_line(&self, l: &ProjLine) -> Result<LineClass> {
        self.require_nondegenerate()?;
        let q = self.q() as usize;
        match self.line_count(l) {
            1 => Ok(LineClass::Tangent),
            c if c == q + 1 => Ok(LineClass::Secant),
            c if c == q * q + 1 => Ok(LineClass::Generator),
            c => Err(Error::Consistency(format!("line meets the surface in {c} points"))),
        }
    }

    /// The plane with dual vector `A·P^(q)`.
    pub fn polar_plane(&self, p: &ProjPoint) -> Result<ProjPlane> {
        self.require_nondegenerate()?;
        let f = self.field();
        let pc = p.coords().map(|c| f.conj(c));
        self.space.plane(linalg::mat_vec(f, self.matrix.entries(), &pc))
    }

    /// The point whose polar plane is `pl`: `(A⁻¹·dual)^(q)`.
    pub fn pole(&self, pl: &ProjPlane) -> Result<ProjPoint> {
        self.require_nondegenerate()?;
        let f = self.field();
        let inv = self.inverse.as_ref().ok_or(Error::Degenerate(self.rank))?;
        let v = linalg::mat_vec(f, inv, pl.dual());
        self.space.point(v.map(|c| f.conj(c)))
    }

    /// Number of surface points on `pl`.
    pub fn plane_count(&self, pl: &ProjPlane) -> usize {
        self.space.points_on_plane(pl).iter().filter(|p| self.contains(p)).count()
    }

    /// Pole test; debug builds also check the section size.
    pub fn classify_plane(&self, pl: &ProjPlane) -> Result<PlaneClass> {
        let pole = self.pole(pl)?;
        let class = if self.contains(&pole) { PlaneClass::Tangent(pole) } else { PlaneClass::NonTangent };
        if cfg!(debug_assertions) {
            let q = self.q() as usize;
            let expected = if class.is_tangent() { q * q * q + q * q + 1 } else { q * q * q + 1 };
            let got = self.plane_count(pl);
            if got != expected {
                return Err(Error::Consistency(format!(
                    "pole test says {class:?} but the section has {got} points"
                )));
            }
        }
        Ok(class)
    }

    pub fn is_tangent_plane(&self, pl: &ProjPlane) -> Result<bool> {
        let pole = self.pole(pl)?;
        Ok(self.contains(&pole))
    }

    pub fn book_profile(&self, l: &ProjLine) -> Result<BookProfile> {
        let class = self.classify_line(l)?;
        let mut tangent = 0;
        let mut non_tangent = 0;
        for pl in self.space.book_of_planes(l) {
            if self.classify_plane(&pl)?.is_tangent() {
                tangent += 1;
            } else {
                non_tangent += 1;
            }
        }
        let q = self.q() as usize;
        let expected = match class {
            LineClass::Generator => (q * q + 1, 0),
            LineClass::Tangent => (1, q * q),
            LineClass::Secant => (q + 1, q * q - q),
        };
        if (tangent, non_tangent) != expected {
            return Err(Error::Consistency(format!(
                "book of a {class:?} line has {tangent} tangent and {non_tangent} non-tangent planes"
            )));
        }
        Ok(BookProfile { tangent, non_tangent })
    }

    /// All lines contained in the surface, in enumeration order.
    ///
    /// Every generator through a point lies in its tangent plane, so only the
    /// pencils of tangent planes are searched.
    pub fn generators(&self) -> Result<&[ProjLine]> {
        self.require_nondegenerate()?;
        Ok(self.generators.get_or_init(|| {
            let mut found = BTreeSet::new();
            for p in &self.points {
                let pl = self.polar_plane(p).expect("non-degenerate");
                for l in self.space.pencil(p, &pl) {
                    let idx = self.space.line_index(&l);
                    if found.contains(&idx) {
                        continue;
                    }
                    if self.space.points_on_line(&l).iter().all(|x| self.contains(x)) {
                        found.insert(idx);
                    }
                }
            }
            found.into_iter().map(|i| self.space.line_at(i)).collect()
        }))
    }

    /// For each generator, the positions of its points in [`points`](Self::points).
    pub fn generator_slots(&self) -> Result<&[Vec<u32>]> {
        let gens = self.generators()?;
        Ok(self.generator_slots.get_or_init(|| {
            gens.iter()
                .map(|l| {
                    self.space
                        .points_on_line(l)
                        .iter()
                        .map(|p| self.slot_of(p).expect("generator lies on the surface") as u32)
                        .collect()
                })
                .collect()
        }))
    }

    /// Classifies every line through a surface point and checks the tallies
    /// `q+1` generators and `q²-q` tangents inside the tangent plane, secants
    /// everywhere else.
    pub fn tangent_point_line_tally(&self, p: &ProjPoint) -> Result<TangentPointTally> {
        self.require_nondegenerate()?;
        if !self.contains(p) {
            return Err(Error::PointNotOnSurface);
        }
        let tangent_plane = self.polar_plane(p)?;
        let mut tally = TangentPointTally { generators: 0, tangents: 0, secants: 0 };
        for l in self.space.lines_through_point(p) {
            let inside = self.space.line_in_plane(&l, &tangent_plane);
            match (self.classify_line(&l)?, inside) {
                (LineClass::Generator, true) => tally.generators += 1,
                (LineClass::Tangent, true) => tally.tangents += 1,
                (LineClass::Secant, false) => tally.secants += 1,
                (class, inside) => {
                    return Err(Error::Consistency(format!(
                        "{class:?} line through a surface point with inside-tangent-plane = {inside}"
                    )))
                }
            }
        }
        let q = self.q() as usize;
        if tally.generators != q + 1 || tally.tangents != q * q - q {
            return Err(Error::Consistency(format!("tangent point tally {tally:?}")));
        }
        Ok(tally)
    }

    /// Monomial values of the given degree at every surface point, built once.
    pub fn eval_table(&self, degree: u32) -> Arc<EvalTable> {
        let mut cache = self.eval_tables.lock().expect("eval cache poisoned");
        cache
            .entry(degree)
            .or_insert_with(|| Arc::new(EvalTable::new(self.field(), &self.points, degree)))
            .clone()
    }
}
