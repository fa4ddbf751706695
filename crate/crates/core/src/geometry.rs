//! Points, lines, flats and affine maps in F^d with exact canonical forms.
//!
//! Lines and flats are stored only in canonical form, so structural
//! equality (and hashing) is equality of point sets:
//!
//! * a line keeps its direction scaled so the first nonzero coordinate is 1,
//!   and its base point translated along the direction so that the
//!   coordinate at the direction's pivot is 0;
//! * a flat keeps the reduced row-echelon basis of its direction space and a
//!   base point reduced against that basis.

use std::fmt;

use thiserror::Error;

use crate::algebra::{dot, rank_of, AlgebraError, Field, Matrix, Scalar};

pub type Vector = Vec<Scalar>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("direction vector is zero")]
    ZeroDirection,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("spanning vectors are linearly dependent")]
    DependentBasis,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    coords: Vector,
}

impl Point {
    pub fn new(coords: Vector) -> Self {
        Point { coords }
    }

    pub fn origin(field: Field, dim: usize) -> Self {
        Point {
            coords: vec![field.zero(); dim],
        }
    }

    pub fn from_i64(field: Field, coords: &[i64]) -> Self {
        Point {
            coords: coords.iter().map(|&c| field.from_i64(c)).collect(),
        }
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn field(&self) -> Field {
        self.coords.first().map_or(Field::Rational, Scalar::field)
    }

    /// `self - other` as a vector.
    pub fn diff(&self, other: &Point) -> Vector {
        sub(&self.coords, &other.coords)
    }

    pub fn translate(&self, v: &[Scalar]) -> Point {
        Point {
            coords: add(&self.coords, v),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub fn add(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: &Scalar, v: &[Scalar]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn standard_basis(field: Field, dim: usize) -> Vec<Vector> {
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| if i == j { field.one() } else { field.zero() })
                .collect()
        })
        .collect()
}

/// Anything with exact point membership.
pub trait AffineSubspace {
    fn contains(&self, p: &Point) -> bool;
    fn ambient_dim(&self) -> usize;
}

/// Exact membership test.
pub fn point_on<S: AffineSubspace + ?Sized>(p: &Point, obj: &S) -> bool {
    p.dim() == obj.ambient_dim() && obj.contains(p)
}

/// An affine line, always held in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    base: Point,
    direction: Vector,
    pivot: usize,
}

impl Line {
    pub fn new(base: Point, direction: Vector) -> Result<Self, GeometryError> {
        if base.dim() != direction.len() {
            return Err(GeometryError::DimensionMismatch {
                expected: base.dim(),
                found: direction.len(),
            });
        }
        let pivot = direction
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(GeometryError::ZeroDirection)?;
        let inv = direction[pivot].inverse()?;
        let direction = scale(&inv, &direction);
        let shift = base.coords[pivot].clone();
        let base = Point::new(sub(&base.coords, &scale(&shift, &direction)));
        Ok(Line {
            base,
            direction,
            pivot,
        })
    }

    pub fn through(p: &Point, q: &Point) -> Result<Self, GeometryError> {
        Line::new(p.clone(), q.diff(p))
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn direction(&self) -> &[Scalar] {
        &self.direction
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn field(&self) -> Field {
        self.base.field()
    }

    pub fn point_at(&self, t: &Scalar) -> Point {
        self.base.translate(&scale(t, &self.direction))
    }

    /// The unique common point of two lines, if they meet in exactly one point.
    pub fn intersection(&self, other: &Line) -> Option<Point> {
        let field = self.field();
        let d = self.dim();
        let rhs = other.base.diff(&self.base);
        let rows: Vec<Vector> = (0..d)
            .map(|i| {
                vec![
                    self.direction[i].clone(),
                    -&other.direction[i],
                    rhs[i].clone(),
                ]
            })
            .collect();
        let ech = Matrix::from_rows(field, 3, rows).ok()?.rref();
        if ech.pivots != [0, 1] {
            return None;
        }
        Some(self.point_at(&ech.reduced[(0, 2)]))
    }
}

impl AffineSubspace for Line {
    fn contains(&self, p: &Point) -> bool {
        let diff = p.diff(&self.base);
        let t = diff[self.pivot].clone();
        diff.iter()
            .zip(&self.direction)
            .all(|(x, v)| (x - &(&t * v)).is_zero())
    }

    fn ambient_dim(&self) -> usize {
        self.dim()
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + t{}", self.base, Point::new(self.direction.clone()))
    }
}

/// An affine subspace of dimension `k`, in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flat {
    base: Point,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Flat {
    pub fn new(base: Point, spanning: Vec<Vector>) -> Result<Self, GeometryError> {
        let d = base.dim();
        let field = base.field();
        for v in &spanning {
            if v.len() != d {
                return Err(GeometryError::DimensionMismatch {
                    expected: d,
                    found: v.len(),
                });
            }
        }
        let k = spanning.len();
        let (basis, pivots) = if k == 0 {
            (Vec::new(), Vec::new())
        } else {
            let ech = Matrix::from_rows(field, d, spanning)?.rref();
            if ech.rank != k {
                return Err(GeometryError::DependentBasis);
            }
            (ech.reduced.row_vecs(), ech.pivots)
        };
        let base = Point::new(reduce_against(&base.coords, &basis, &pivots));
        Ok(Flat {
            base,
            basis,
            pivots,
        })
    }

    pub fn from_line(line: &Line) -> Flat {
        Flat::new(line.base.clone(), vec![line.direction.clone()]).expect("line direction is nonzero")
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    /// Reduced row-echelon basis of the direction space.
    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.base.dim()
    }

    pub fn field(&self) -> Field {
        self.base.field()
    }
}

fn reduce_against(v: &[Scalar], basis: &[Vector], pivots: &[usize]) -> Vector {
    let mut out = v.to_vec();
    for (row, &c) in basis.iter().zip(pivots) {
        let coef = out[c].clone();
        if coef.is_zero() {
            continue;
        }
        out = sub(&out, &scale(&coef, row));
    }
    out
}

impl AffineSubspace for Flat {
    fn contains(&self, p: &Point) -> bool {
        is_zero_vector(&reduce_against(
            &p.diff(&self.base),
            &self.basis,
            &self.pivots,
        ))
    }

    fn ambient_dim(&self) -> usize {
        self.ambient()
    }
}

/// Hyperplane `normal · x = offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    pub normal: Vector,
    pub offset: Scalar,
}

impl Hyperplane {
    pub fn contains(&self, p: &Point) -> bool {
        dot(&self.normal, p.coords()) == self.offset
    }
}

/// Solution set of a system of hyperplanes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Intersection {
    Empty,
    Point(Point),
    Flat(Flat),
}

impl Intersection {
    pub fn dim(&self) -> Option<usize> {
        match self {
            Intersection::Empty => None,
            Intersection::Point(_) => Some(0),
            Intersection::Flat(f) => Some(f.dim()),
        }
    }

    pub fn into_line(self) -> Option<Line> {
        match self {
            Intersection::Flat(f) if f.dim() == 1 => {
                Line::new(f.base.clone(), f.basis[0].clone()).ok()
            }
            _ => None,
        }
    }
}

/// Exact solution set of `normal_i · x = offset_i` for all `i`.
pub fn intersect_hyperplanes(
    field: Field,
    dim: usize,
    hyperplanes: &[Hyperplane],
) -> Result<Intersection, GeometryError> {
    let mut rows = Vec::with_capacity(hyperplanes.len());
    for h in hyperplanes {
        if h.normal.len() != dim {
            return Err(GeometryError::DimensionMismatch {
                expected: dim,
                found: h.normal.len(),
            });
        }
        let mut row = h.normal.clone();
        row.push(h.offset.clone());
        rows.push(row);
    }
    let aug = Matrix::from_rows(field, dim + 1, rows)?;
    let ech = aug.rref();
    if ech.pivots.last() == Some(&dim) {
        return Ok(Intersection::Empty);
    }
    let mut particular = vec![field.zero(); dim];
    for (r, &c) in ech.pivots.iter().enumerate() {
        particular[c] = ech.reduced[(r, dim)].clone();
    }
    let base = Point::new(particular);
    let coeffs = Matrix::from_rows(
        field,
        dim,
        ech.reduced
            .row_vecs()
            .into_iter()
            .map(|mut r| {
                r.truncate(dim);
                r
            })
            .collect(),
    )?;
    let kernel = if hyperplanes.is_empty() {
        standard_basis(field, dim)
    } else {
        coeffs.kernel_basis()
    };
    if kernel.is_empty() {
        Ok(Intersection::Point(base))
    } else {
        Ok(Intersection::Flat(Flat::new(base, kernel)?))
    }
}

/// True iff the vectors are linearly independent.
pub fn directions_independent(vectors: &[Vector]) -> bool {
    let Some(first) = vectors.first() else {
        return true;
    };
    let field = first.first().map_or(Field::Rational, Scalar::field);
    rank_of(field, first.len(), vectors) == vectors.len()
}

/// Invertible affine map `x ↦ A x + t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    linear: Matrix,
    translation: Vector,
}

impl AffineMap {
    pub fn new(linear: Matrix, translation: Vector) -> Result<Self, GeometryError> {
        if linear.rows() != linear.cols() || translation.len() != linear.rows() {
            return Err(GeometryError::DimensionMismatch {
                expected: linear.rows(),
                found: translation.len(),
            });
        }
        if linear.rank() != linear.rows() {
            return Err(AlgebraError::Singular.into());
        }
        Ok(AffineMap {
            linear,
            translation,
        })
    }

    pub fn identity(field: Field, dim: usize) -> Self {
        AffineMap {
            linear: Matrix::identity(field, dim),
            translation: vec![field.zero(); dim],
        }
    }

    pub fn linear(&self) -> &Matrix {
        &self.linear
    }

    pub fn translation(&self) -> &[Scalar] {
        &self.translation
    }

    pub fn apply(&self, p: &Point) -> Point {
        let lin = self
            .linear
            .mul_vec(p.coords())
            .expect("point dimension matches map");
        Point::new(add(&lin, &self.translation))
    }

    pub fn apply_linear(&self, v: &[Scalar]) -> Vector {
        self.linear.mul_vec(v).expect("vector dimension matches map")
    }

    pub fn inverse(&self) -> AffineMap {
        let inv = self.linear.inverse().expect("affine map is invertible");
        let t = inv.mul_vec(&self.translation).expect("square");
        AffineMap {
            translation: t.iter().map(|x| -x).collect(),
            linear: inv,
        }
    }
}

/// A frame adapted to a flat: `x = origin + Σ z_i columns[i]`, where the
/// first `m = d - dim(f)` columns complete the flat and the rest span it.
#[derive(Clone, Debug)]
pub struct FlatFrame {
    pub origin: Point,
    pub columns: Vec<Vector>,
}

/// Extends the flat's basis greedily with standard basis vectors and returns
/// the resulting frame (complement first, flat directions last).
pub fn flat_frame(f: &Flat) -> FlatFrame {
    let field = f.field();
    let d = f.ambient();
    let mut chosen: Vec<Vector> = f.basis().to_vec();
    let mut complement = Vec::new();
    for e in standard_basis(field, d) {
        if chosen.len() == d {
            break;
        }
        chosen.push(e.clone());
        if rank_of(field, d, &chosen) == chosen.len() {
            complement.push(e);
        } else {
            chosen.pop();
        }
    }
    let mut columns = complement;
    columns.extend(f.basis().iter().cloned());
    FlatFrame {
        origin: f.base().clone(),
        columns,
    }
}

/// An invertible affine `T` with `T(f) = {x_1 = … = x_m = 0}`, `m = d - dim f`.
pub fn flat_to_coordinates(f: &Flat) -> AffineMap {
    let frame = flat_frame(f);
    let field = f.field();
    let d = f.ambient();
    let mut m = Matrix::zeros(field, d, d);
    for (j, col) in frame.columns.iter().enumerate() {
        for i in 0..d {
            m[(i, j)] = col[i].clone();
        }
    }
    // frame map: z ↦ origin + M z; T is its inverse
    AffineMap::new(m, frame.origin.coords().to_vec())
        .expect("completed basis is invertible")
        .inverse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f7() -> Field {
        Field::prime(7).unwrap()
    }

    fn hp(field: Field, normal: &[i64], offset: i64) -> Hyperplane {
        Hyperplane {
            normal: normal.iter().map(|&v| field.from_i64(v)).collect(),
            offset: field.from_i64(offset),
        }
    }

    fn vecs(field: Field, rows: &[&[i64]]) -> Vec<Vector> {
        rows.iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect()
    }

    fn z_axis(field: Field) -> Line {
        Line::new(Point::origin(field, 3), vecs(field, &[&[0, 0, 1]]).remove(0)).unwrap()
    }

    #[test]
    fn two_coordinate_planes_meet_in_z_axis() {
        let f = f7();
        let res = intersect_hyperplanes(f, 3, &[hp(f, &[1, 0, 0], 0), hp(f, &[0, 1, 0], 0)]).unwrap();
        assert_eq!(res.dim(), Some(1));
        assert_eq!(res.into_line().unwrap(), z_axis(f));
    }

    #[test]
    fn three_coordinate_planes_meet_at_origin() {
        let f = f7();
        let res = intersect_hyperplanes(
            f,
            3,
            &[hp(f, &[1, 0, 0], 0), hp(f, &[0, 1, 0], 0), hp(f, &[0, 0, 1], 0)],
        )
        .unwrap();
        assert_eq!(res, Intersection::Point(Point::origin(f, 3)));
    }

    #[test]
    fn parallel_planes_are_empty() {
        let f = f7();
        let res = intersect_hyperplanes(f, 3, &[hp(f, &[1, 0, 0], 0), hp(f, &[1, 0, 0], 1)]).unwrap();
        assert_eq!(res, Intersection::Empty);
    }

    #[test]
    fn no_hyperplanes_is_whole_space() {
        let res = intersect_hyperplanes(Field::Rational, 2, &[]).unwrap();
        assert_eq!(res.dim(), Some(2));
    }

    #[test]
    fn independence() {
        let q = Field::Rational;
        assert!(directions_independent(&vecs(q, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])));
        assert!(!directions_independent(&vecs(q, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]])));
    }

    #[test]
    fn membership_on_axis() {
        let f = f7();
        assert!(point_on(&Point::origin(f, 3), &z_axis(f)));
        assert!(!point_on(&Point::from_i64(f, &[1, 0, 0]), &z_axis(f)));
        assert!(point_on(&Point::from_i64(f, &[0, 0, 5]), &z_axis(f)));
    }

    #[test]
    fn line_intersection() {
        let q = Field::Rational;
        let x = Line::new(Point::origin(q, 3), vecs(q, &[&[1, 0, 0]]).remove(0)).unwrap();
        let shifted = Line::new(Point::from_i64(q, &[2, 1, 0]), vecs(q, &[&[0, 1, 0]]).remove(0)).unwrap();
        assert_eq!(x.intersection(&shifted), Some(Point::from_i64(q, &[2, 0, 0])));
        assert_eq!(x.intersection(&x), None);
        let skew = Line::new(Point::from_i64(q, &[0, 0, 1]), vecs(q, &[&[0, 1, 0]]).remove(0)).unwrap();
        assert_eq!(x.intersection(&skew), None);
    }

    #[test]
    fn identity_sends_hyperplane_to_itself() {
        let q = Field::Rational;
        let f = match intersect_hyperplanes(q, 2, &[hp(q, &[1, 0], 0)]).unwrap() {
            Intersection::Flat(f) => f,
            other => panic!("{other:?}"),
        };
        assert_eq!(flat_to_coordinates(&f), AffineMap::identity(q, 2));
    }

    #[test]
    fn z_axis_maps_to_first_coordinates_zero() {
        let f = f7();
        let axis = Flat::from_line(&z_axis(f));
        let t = flat_to_coordinates(&axis);
        for pt in [Point::from_i64(f, &[0, 0, 3]), Point::from_i64(f, &[0, 0, 6])] {
            let img = t.apply(&pt);
            assert!(img.coords()[0].is_zero() && img.coords()[1].is_zero());
        }
        let off = t.apply(&Point::from_i64(f, &[1, 0, 0]));
        assert!(!(off.coords()[0].is_zero() && off.coords()[1].is_zero()));
    }

    #[test]
    fn plane_maps_into_first_coordinate_zero() {
        let f = f7();
        let plane = match intersect_hyperplanes(f, 3, &[hp(f, &[1, 1, 1], 0)]).unwrap() {
            Intersection::Flat(p) => p,
            other => panic!("{other:?}"),
        };
        let t = flat_to_coordinates(&plane);
        for x in 0..7 {
            for y in 0..7 {
                let pt = Point::from_i64(f, &[x, y, -x - y]);
                assert!(t.apply(&pt).coords()[0].is_zero());
            }
        }
    }

    fn small_vec() -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-4i64..5, 3)
    }

    proptest! {
        #[test]
        fn line_canonical_form_is_congruence(base in small_vec(), dir in small_vec(), s in -5i64..6, c in 1i64..7) {
            let q = Field::Rational;
            prop_assume!(dir.iter().any(|&x| x != 0));
            let b = Point::from_i64(q, &base);
            let d: Vector = dir.iter().map(|&v| q.from_i64(v)).collect();
            let l1 = Line::new(b.clone(), d.clone()).unwrap();
            let moved = b.translate(&scale(&q.from_i64(s), &d));
            let l2 = Line::new(moved, scale(&q.from_i64(-c), &d)).unwrap();
            prop_assert_eq!(l1, l2);
        }

        #[test]
        fn flat_canonical_form_is_congruence(base in small_vec(), u in small_vec(), v in small_vec(), a in -3i64..4, b in 1i64..4) {
            let q = Field::Rational;
            let uu: Vector = u.iter().map(|&x| q.from_i64(x)).collect();
            let vv: Vector = v.iter().map(|&x| q.from_i64(x)).collect();
            prop_assume!(directions_independent(&[uu.clone(), vv.clone()]));
            let p = Point::from_i64(q, &base);
            let f1 = Flat::new(p.clone(), vec![uu.clone(), vv.clone()]).unwrap();
            let w = add(&scale(&q.from_i64(a), &uu), &scale(&q.from_i64(b), &vv));
            let f2 = Flat::new(p.translate(&vv), vec![w, uu.clone()]).unwrap();
            prop_assert_eq!(f1, f2);
        }

        #[test]
        fn frame_map_inverts(base in small_vec(), u in small_vec(), x in small_vec()) {
            let f = Field::prime(11).unwrap();
            let uu: Vector = u.iter().map(|&v| f.from_i64(v)).collect();
            prop_assume!(!is_zero_vector(&uu));
            let flat = Flat::new(Point::from_i64(f, &base), vec![uu]).unwrap();
            let t = flat_to_coordinates(&flat);
            let pt = Point::from_i64(f, &x);
            prop_assert_eq!(t.inverse().apply(&t.apply(&pt)), pt);
            let on = flat.base().translate(&flat.basis()[0]);
            let img = t.apply(&on);
            prop_assert!(img.coords()[0].is_zero() && img.coords()[1].is_zero());
        }

        #[test]
        fn intersection_lies_in_every_hyperplane(normals in prop::collection::vec(small_vec(), 1..4), offsets in prop::collection::vec(-3i64..4, 3)) {
            let f = Field::prime(7).unwrap();
            let hs: Vec<Hyperplane> = normals.iter().zip(&offsets).map(|(n, &o)| hp(f, n, o)).collect();
            match intersect_hyperplanes(f, 3, &hs).unwrap() {
                Intersection::Empty => {}
                Intersection::Point(p) => prop_assert!(hs.iter().all(|h| h.contains(&p))),
                Intersection::Flat(fl) => {
                    prop_assert!(hs.iter().all(|h| h.contains(fl.base())));
                    for v in fl.basis() {
                        let q = fl.base().translate(v);
                        prop_assert!(hs.iter().all(|h| h.contains(&q)));
                    }
                }
            }
        }
    }
}
