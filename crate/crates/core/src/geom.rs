//! Exact rational points and the segment predicates the embeddings and the
//! linking engine rely on. No floating point anywhere in here.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Formats as `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).ok()?;
            let q = BigInt::from_str(q.trim()).ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => BigInt::from_str(s).ok().map(Rational::from_integer),
    }
}

/// A point in 3-space with exact rational coordinates.
///
/// Serialized as three `"p/q"` strings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[String; 3]", into = "[String; 3]")]
pub struct Point3 {
    pub x: Rational,
    pub y: Rational,
    pub z: Rational,
}

impl Point3 {
    pub fn new(x: Rational, y: Rational, z: Rational) -> Self {
        Point3 { x, y, z }
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Self {
        Point3::new(int(x), int(y), int(z))
    }

    pub fn sub(&self, o: &Point3) -> Vec3 {
        Vec3 {
            x: &self.x - &o.x,
            y: &self.y - &o.y,
            z: &self.z - &o.z,
        }
    }

    pub fn add(&self, v: &Vec3) -> Point3 {
        Point3::new(&self.x + &v.x, &self.y + &v.y, &self.z + &v.z)
    }

    /// `self + t (other - self)`
    pub fn lerp(&self, other: &Point3, t: &Rational) -> Point3 {
        self.add(&other.sub(self).scale(t))
    }
}

impl fmt::Display for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            format_rational(&self.x),
            format_rational(&self.y),
            format_rational(&self.z)
        )
    }
}

impl TryFrom<[String; 3]> for Point3 {
    type Error = String;
    fn try_from(c: [String; 3]) -> Result<Self, Self::Error> {
        let p = |s: &str| parse_rational(s).ok_or_else(|| format!("invalid rational {s:?}"));
        Ok(Point3::new(p(&c[0])?, p(&c[1])?, p(&c[2])?))
    }
}

impl From<Point3> for [String; 3] {
    fn from(p: Point3) -> Self {
        [format_rational(&p.x), format_rational(&p.y), format_rational(&p.z)]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vec3 {
    pub x: Rational,
    pub y: Rational,
    pub z: Rational,
}

impl Vec3 {
    pub fn dot(&self, o: &Vec3) -> Rational {
        &self.x * &o.x + &self.y * &o.y + &self.z * &o.z
    }

    pub fn cross(&self, o: &Vec3) -> Vec3 {
        Vec3 {
            x: &self.y * &o.z - &self.z * &o.y,
            y: &self.z * &o.x - &self.x * &o.z,
            z: &self.x * &o.y - &self.y * &o.x,
        }
    }

    pub fn scale(&self, t: &Rational) -> Vec3 {
        Vec3 {
            x: &self.x * t,
            y: &self.y * t,
            z: &self.z * t,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }
}

/// How two closed segments meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SegmentContact {
    Disjoint,
    /// A single common point.
    Point(Point3),
    /// Collinear with an overlap of positive length.
    Overlap,
}

/// Exact intersection of closed segments `[a0,a1]` and `[b0,b1]` in 3-space.
/// Both segments must have positive length.
pub fn segment_contact(a0: &Point3, a1: &Point3, b0: &Point3, b1: &Point3) -> SegmentContact {
    let d = a1.sub(a0);
    let e = b1.sub(b0);
    let w = b0.sub(a0);
    let n = d.cross(&e);
    if !n.is_zero() {
        if !w.dot(&n).is_zero() {
            return SegmentContact::Disjoint;
        }
        // a0 + t d = b0 + s e, solved by crossing with e and d.
        let nn = n.dot(&n);
        let t = w.cross(&e).dot(&n) / &nn;
        let s = w.cross(&d).dot(&n) / &nn;
        let unit = |r: &Rational| !r.is_negative() && *r <= Rational::one();
        if unit(&t) && unit(&s) {
            SegmentContact::Point(a0.lerp(a1, &t))
        } else {
            SegmentContact::Disjoint
        }
    } else {
        if !w.cross(&d).is_zero() {
            return SegmentContact::Disjoint;
        }
        // Collinear: parameters of b's endpoints along a.
        let dd = d.dot(&d);
        let tb0 = w.dot(&d) / &dd;
        let tb1 = b1.sub(a0).dot(&d) / &dd;
        let (lo, hi) = if tb0 <= tb1 { (tb0, tb1) } else { (tb1, tb0) };
        let lo = lo.max(Rational::zero());
        let hi = hi.min(Rational::one());
        match lo.cmp(&hi) {
            std::cmp::Ordering::Greater => SegmentContact::Disjoint,
            std::cmp::Ordering::Equal => SegmentContact::Point(a0.lerp(a1, &lo)),
            std::cmp::Ordering::Less => SegmentContact::Overlap,
        }
    }
}

/// Whether `p` lies on the closed segment `[a0, a1]`.
pub fn point_on_segment(p: &Point3, a0: &Point3, a1: &Point3) -> bool {
    let d = a1.sub(a0);
    let w = p.sub(a0);
    if !w.cross(&d).is_zero() {
        return false;
    }
    let t = w.dot(&d);
    !t.is_negative() && t <= d.dot(&d)
}

/// A point of the projection plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Point2 {
    pub x: Rational,
    pub y: Rational,
}

/// Twice the signed area of `(a, b, c)`: positive when counter-clockwise.
pub fn orient2d(a: &Point2, b: &Point2, c: &Point2) -> Rational {
    (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x)
}

/// `cross(b - a, d - c)` in the plane.
pub fn cross2(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> Rational {
    (&b.x - &a.x) * (&d.y - &c.y) - (&b.y - &a.y) * (&d.x - &c.x)
}
