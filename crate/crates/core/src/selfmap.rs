//! Self-maps on point indices and their orbit structure.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("map is empty")]
    Empty,
    #[error("image t[{index}] = {image} is out of range for {n} points")]
    OutOfRange { index: usize, image: usize, n: usize },
    #[error("map has {map} entries but the space has {space} points")]
    SizeMismatch { map: usize, space: usize },
}

/// A total map `i -> t[i]` on the indices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct SelfMap {
    images: Vec<usize>,
}

impl SelfMap {
    pub fn new(images: Vec<usize>) -> Result<Self, MapError> {
        let n = images.len();
        if n == 0 {
            return Err(MapError::Empty);
        }
        if let Some((index, &image)) = images.iter().enumerate().find(|(_, &t)| t >= n) {
            return Err(MapError::OutOfRange { index, image, n });
        }
        Ok(SelfMap { images })
    }

    pub fn identity(n: usize) -> Self {
        SelfMap { images: (0..n).collect() }
    }

    pub fn constant(n: usize, c: usize) -> Self {
        assert!(c < n);
        SelfMap { images: vec![c; n] }
    }

    /// `i -> i + 1 mod n`.
    pub fn cyclic_shift(n: usize) -> Self {
        SelfMap { images: (0..n).map(|i| (i + 1) % n).collect() }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Fails unless the map is defined on exactly `n` points.
    pub fn check_len(&self, n: usize) -> Result<(), MapError> {
        if self.len() == n {
            Ok(())
        } else {
            Err(MapError::SizeMismatch { map: self.len(), space: n })
        }
    }

    /// Conjugate by the relabeling `i -> perm[i]`: the returned map sends
    /// `perm[i]` to `perm[t[i]]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.len(), "permutation length");
        let mut images = vec![0; self.len()];
        for (i, &t) in self.images.iter().enumerate() {
            images[perm[i]] = perm[t];
        }
        SelfMap { images }
    }

    #[inline]
    pub fn is_fixed(&self, i: usize) -> bool {
        self.images[i] == i
    }
}

/// Orbit of a start point: the pre-periodic tail and the eventual cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitSummary {
    pub start: usize,
    pub tail: Vec<usize>,
    pub cycle: Vec<usize>,
}

/// `{ i : t[i] = i }`, ascending.
pub fn fixed_points(f: &SelfMap) -> Vec<usize> {
    (0..f.len()).filter(|&i| f.is_fixed(i)).collect()
}

/// Least `k >= 1` with `T^k(i) = i`, or `None` when `i` lies on an orbit
/// tail.
pub fn prime_period(f: &SelfMap, i: usize) -> Option<usize> {
    let mut x = f.apply(i);
    for k in 1..=f.len() {
        if x == i {
            return Some(k);
        }
        x = f.apply(x);
    }
    None
}

/// Least `i` with `T(T(i)) = i` and `T(i) != i`, if any.
pub fn prime_period_two_witness(f: &SelfMap) -> Option<usize> {
    (0..f.len()).find(|&i| f.apply(f.apply(i)) == i && f.apply(i) != i)
}

pub fn has_prime_period_two(f: &SelfMap) -> bool {
    prime_period_two_witness(f).is_some()
}

/// Iterates from `start` until the first repeated index.
pub fn orbit(f: &SelfMap, start: usize) -> OrbitSummary {
    let mut seen_at = vec![usize::MAX; f.len()];
    let mut visited = Vec::new();
    let mut x = start;
    while seen_at[x] == usize::MAX {
        seen_at[x] = visited.len();
        visited.push(x);
        x = f.apply(x);
    }
    let cycle = visited.split_off(seen_at[x]);
    OrbitSummary { start, tail: visited, cycle }
}

/// On a finite space the consecutive-iterate distances tend to zero along
/// every orbit iff every orbit ends in a fixed point, so this checks that
/// all eventual cycles have length 1.
pub fn is_asymptotically_regular(f: &SelfMap) -> bool {
    (0..f.len()).all(|i| orbit(f, i).cycle.len() == 1)
}

/// Returns an iterator over all `n^n` maps on `n` points in lexicographic
/// order of image arrays.
pub fn all_maps(n: usize) -> impl Iterator<Item = SelfMap> {
    let total = (n as u64).pow(n as u32);
    (0..total).map(move |mut code| {
        let mut images = vec![0; n];
        for slot in images.iter_mut().rev() {
            *slot = (code % n as u64) as usize;
            code /= n as u64;
        }
        SelfMap { images }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(t: &[usize]) -> SelfMap {
        SelfMap::new(t.to_vec()).unwrap()
    }

    #[test]
    fn rejects_out_of_range() {
        assert_eq!(
            SelfMap::new(vec![0, 3, 1]).unwrap_err(),
            MapError::OutOfRange { index: 1, image: 3, n: 3 }
        );
        assert_eq!(SelfMap::new(vec![]).unwrap_err(), MapError::Empty);
    }

    #[test]
    fn fixed_point_examples() {
        assert_eq!(fixed_points(&m(&[0, 1, 1])), vec![0, 1]);
        assert_eq!(fixed_points(&SelfMap::identity(4)), vec![0, 1, 2, 3]);
        assert!(fixed_points(&SelfMap::cyclic_shift(3)).is_empty());
    }

    #[test]
    fn prime_period_examples() {
        for i in 0..4 {
            assert_eq!(prime_period(&SelfMap::identity(4), i), Some(1));
        }
        assert_eq!(prime_period(&m(&[1, 0, 2]), 0), Some(2));
        assert_eq!(prime_period(&m(&[1, 2, 0]), 1), Some(3));
        assert_eq!(prime_period(&m(&[0, 1, 1]), 2), None);
    }

    #[test]
    fn period_two_examples() {
        assert_eq!(prime_period_two_witness(&m(&[1, 0, 2])), Some(0));
        assert_eq!(prime_period_two_witness(&m(&[2, 1, 0])), Some(0));
        assert!(!has_prime_period_two(&m(&[0, 1, 1])));
        for c in 0..4 {
            assert!(!has_prime_period_two(&SelfMap::constant(4, c)));
        }
    }

    #[test]
    fn orbit_examples() {
        let o = orbit(&m(&[0, 1, 1]), 2);
        assert_eq!((o.tail, o.cycle), (vec![2], vec![1]));
        let o = orbit(&SelfMap::identity(3), 1);
        assert_eq!((o.tail, o.cycle), (vec![], vec![1]));
        let o = orbit(&m(&[1, 2, 0]), 0);
        assert_eq!((o.tail, o.cycle), (vec![], vec![0, 1, 2]));
        let o = orbit(&m(&[1, 2, 3, 2]), 0);
        assert_eq!((o.tail, o.cycle), (vec![0, 1], vec![2, 3]));
    }

    #[test]
    fn asymptotic_regularity_examples() {
        assert!(is_asymptotically_regular(&m(&[0, 1, 1])));
        assert!(!is_asymptotically_regular(&m(&[1, 0, 2])));
        assert!(is_asymptotically_regular(&SelfMap::constant(5, 3)));
    }

    #[test]
    fn map_enumeration_and_conjugation() {
        let maps: Vec<_> = all_maps(3).collect();
        assert_eq!(maps.len(), 27);
        assert_eq!(maps[0].images(), &[0, 0, 0]);
        assert_eq!(maps[5].images(), &[0, 1, 2]);
        assert_eq!(maps[26].images(), &[2, 2, 2]);
        // Swapping labels 1 and 2 of t = [0,1,1] gives [0,2,2].
        assert_eq!(m(&[0, 1, 1]).permuted(&[0, 2, 1]).images(), &[0, 2, 2]);
    }
}
