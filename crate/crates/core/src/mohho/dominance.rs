//! Pareto dominance for minimization.

use crate::{Error, Result, Scalar};

/// True when `a` is no worse than `b` in every objective and strictly better
/// in at least one.
pub fn dominates<T: Scalar>(a: &[T], b: &[T]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    Ok(dominates_unchecked(a, b))
}

pub(crate) fn dominates_unchecked<T: Scalar>(a: &[T], b: &[T]) -> bool {
    let mut strictly = false;
    for (&x, &y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

/// Indices (ascending) of the points no other point dominates.
///
/// Points are visited in lexicographic order; a dominator always precedes the
/// point it dominates, so each point only needs checking against the front
/// kept so far.
pub fn non_dominated_indices<T: Scalar, P: AsRef<[T]>>(points: &[P]) -> Result<Vec<usize>> {
    let Some(first) = points.first() else {
        return Ok(Vec::new());
    };
    let m = first.as_ref().len();
    if let Some(p) = points.iter().find(|p| p.as_ref().len() != m) {
        return Err(Error::DimensionMismatch { expected: m, found: p.as_ref().len() });
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (points[i].as_ref(), points[j].as_ref());
        a.iter()
            .zip(b)
            .map(|(x, y)| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut front: Vec<usize> = Vec::new();
    for i in order {
        let p = points[i].as_ref();
        if !front.iter().any(|&k| dominates_unchecked(points[k].as_ref(), p)) {
            front.push(i);
        }
    }
    front.sort_unstable();
    Ok(front)
}

/// The non-dominated subset, in input order.
pub fn non_dominated_filter<T: Scalar, P: AsRef<[T]>>(points: &[P]) -> Result<Vec<Vec<T>>> {
    Ok(non_dominated_indices(points)?.into_iter().map(|i| points[i].as_ref().to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dominance_cases() {
        assert!(dominates(&[1.0, 2.0], &[2.0, 3.0]).unwrap());
        assert!(!dominates(&[1.0, 3.0], &[2.0, 2.0]).unwrap());
        assert!(!dominates(&[1.0, 1.0], &[1.0, 1.0]).unwrap());
        assert!(dominates(&[1.0, 1.0], &[1.0, 2.0]).unwrap());
        assert_eq!(dominates(&[1.0], &[1.0, 2.0]), Err(Error::DimensionMismatch { expected: 1, found: 2 }));
    }

    #[test]
    fn filter_cases() {
        let pts = vec![vec![1.0, 4.0], vec![2.0, 2.0], vec![3.0, 3.0], vec![4.0, 1.0]];
        assert_eq!(non_dominated_indices(&pts).unwrap(), vec![0, 1, 3]);
        let empty: Vec<Vec<f64>> = vec![];
        assert!(non_dominated_filter(&empty).unwrap().is_empty());
        let twins = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        assert_eq!(non_dominated_filter(&twins).unwrap().len(), 2);
    }
}
