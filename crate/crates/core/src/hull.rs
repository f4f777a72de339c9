//! Planar convex hulls and the distance from the origin to them.
//!
//! Generic over the real scalar so rational inputs are handled exactly.

use crate::scalar::RealScalar;

pub type Point<R> = (R, R);

fn cross<R: RealScalar>(o: &Point<R>, a: &Point<R>, b: &Point<R>) -> R {
    (a.0.clone() - o.0.clone()) * (b.1.clone() - o.1.clone())
        - (a.1.clone() - o.1.clone()) * (b.0.clone() - o.0.clone())
}

fn lex_cmp<R: RealScalar>(a: &Point<R>, b: &Point<R>) -> std::cmp::Ordering {
    a.0.partial_cmp(&b.0)
        .unwrap_or(std::cmp::Ordering::Equal)
        .then(a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
}

/// Extreme points of the convex hull, counter-clockwise, starting from the
/// lexicographically smallest point. Collinear points are dropped.
pub fn convex_hull<R: RealScalar>(points: &[Point<R>]) -> Vec<Point<R>> {
    let mut pts: Vec<Point<R>> = points.to_vec();
    pts.sort_by(lex_cmp);
    pts.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
    if pts.len() <= 2 {
        return pts;
    }
    let zero = R::zero();
    let mut lower: Vec<Point<R>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= zero {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point<R>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= zero {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Squared distance from the origin to the segment `[a, b]`.
pub fn segment_distance_sq<R: RealScalar>(a: &Point<R>, b: &Point<R>) -> R {
    let dx = b.0.clone() - a.0.clone();
    let dy = b.1.clone() - a.1.clone();
    let len2 = dx.clone() * dx.clone() + dy.clone() * dy.clone();
    let norm2 = |x: R, y: R| x.clone() * x + y.clone() * y;
    if len2.vanishes() {
        return norm2(a.0.clone(), a.1.clone());
    }
    // projection parameter of 0 onto the line a + t(b − a)
    let t = -(a.0.clone() * dx.clone() + a.1.clone() * dy.clone()) / len2;
    if t <= R::zero() {
        norm2(a.0.clone(), a.1.clone())
    } else if t >= R::one() {
        norm2(b.0.clone(), b.1.clone())
    } else {
        norm2(a.0.clone() + t.clone() * dx, a.1.clone() + t * dy)
    }
}

/// Squared distance from the origin to the polygon spanned by `hull`
/// (as returned by [`convex_hull`]); zero when the origin is inside.
pub fn hull_distance_sq<R: RealScalar>(hull: &[Point<R>]) -> R {
    let origin = (R::zero(), R::zero());
    match hull.len() {
        0 => R::zero(),
        1 => segment_distance_sq(&hull[0], &hull[0]),
        2 => segment_distance_sq(&hull[0], &hull[1]),
        k => {
            let inside = (0..k).all(|i| cross(&hull[i], &hull[(i + 1) % k], &origin) >= R::zero());
            if inside {
                return R::zero();
            }
            let mut best: Option<R> = None;
            for i in 0..k {
                let d = segment_distance_sq(&hull[i], &hull[(i + 1) % k]);
                best = match best {
                    Some(b) if b <= d => Some(b),
                    _ => Some(d),
                };
            }
            best.unwrap_or_else(R::zero)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn p(x: i64, y: i64) -> Point<BigRational> {
        (r(x, 1), r(y, 1))
    }

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let pts = vec![p(0, 0), p(2, 0), p(1, 0), p(2, 2), p(0, 2), p(1, 1)];
        let h = convex_hull(&pts);
        assert_eq!(h, vec![p(0, 0), p(2, 0), p(2, 2), p(0, 2)]);
    }

    #[test]
    fn real_segment() {
        let h = convex_hull(&[p(1, 0), p(2, 0)]);
        assert_eq!(hull_distance_sq(&h), r(1, 1));
    }

    #[test]
    fn origin_on_segment() {
        let h = convex_hull(&[p(1, 0), p(-1, 0)]);
        assert_eq!(hull_distance_sq(&h), r(0, 1));
    }

    #[test]
    fn segment_projection_interior() {
        // segment from (1,0) to (0,1): nearest point (1/2,1/2)
        let h = convex_hull(&[p(1, 0), p(0, 1)]);
        assert_eq!(hull_distance_sq(&h), r(1, 2));
        // segment [i, 1+i]: nearest point i
        let h = convex_hull(&[p(0, 1), p(1, 1)]);
        assert_eq!(hull_distance_sq(&h), r(1, 1));
    }

    #[test]
    fn origin_inside_triangle() {
        let h = convex_hull(&[p(1, 0), p(-1, 1), p(-1, -1)]);
        assert_eq!(hull_distance_sq(&h), r(0, 1));
        let h = convex_hull(&[p(1, 1), p(2, 1), p(1, 3)]);
        assert_eq!(hull_distance_sq(&h), r(2, 1));
    }

    #[test]
    fn float_matches_exact() {
        let h = convex_hull(&[(1.0, -1.0), (3.0, 2.0), (1.0, 1.0)]);
        assert!((hull_distance_sq(&h) - 1.0).abs() < 1e-15);
    }
}
