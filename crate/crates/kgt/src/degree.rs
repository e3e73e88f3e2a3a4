//! Degrees: elements of N^k with the componentwise partial order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{KgtError, Result};

/// An element of N^k. The rank k is the length of `coords`.
///
/// `Ord` is the lexicographic order and is used only for canonical sorting;
/// the mathematically meaningful order is the componentwise [`Degree::leq`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Degree {
    coords: Vec<u32>,
}

impl Degree {
    pub fn new(coords: Vec<u32>) -> Self {
        Degree { coords }
    }

    pub fn zero(rank: usize) -> Self {
        Degree {
            coords: vec![0; rank],
        }
    }

    /// The canonical generator e_i (1-based color i).
    pub fn unit(rank: usize, color: usize) -> Self {
        debug_assert!(1 <= color && color <= rank);
        let mut coords = vec![0; rank];
        coords[color - 1] = 1;
        Degree { coords }
    }

    /// (1, ..., 1).
    pub fn ones(rank: usize) -> Self {
        Degree {
            coords: vec![1; rank],
        }
    }

    /// (c, ..., c).
    pub fn diagonal(rank: usize, c: u32) -> Self {
        Degree {
            coords: vec![c; rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    /// Count for the 1-based color `color`.
    pub fn get(&self, color: usize) -> u32 {
        self.coords[color - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn total(&self) -> u32 {
        self.coords.iter().sum()
    }

    /// Componentwise m <= n.
    pub fn leq(&self, other: &Degree) -> bool {
        self.rank() == other.rank() && self.coords.iter().zip(&other.coords).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &Degree) -> Degree {
        debug_assert_eq!(self.rank(), other.rank());
        Degree {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Componentwise difference; fails unless `other` <= `self`.
    pub fn sub(&self, other: &Degree) -> Result<Degree> {
        if !other.leq(self) {
            return Err(KgtError::DegreeOutOfRange(
                other.to_string(),
                self.to_string(),
            ));
        }
        Ok(Degree {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Componentwise maximum (join).
    pub fn sup(&self, other: &Degree) -> Degree {
        debug_assert_eq!(self.rank(), other.rank());
        Degree {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| *a.max(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: u32) -> Degree {
        Degree {
            coords: self.coords.iter().map(|a| a * c).collect(),
        }
    }

    /// Append a zero coordinate, viewing N^k inside N^(k+1).
    pub fn embed(&self) -> Degree {
        self.extend(0)
    }

    /// Append an explicit last coordinate.
    pub fn extend(&self, last: u32) -> Degree {
        let mut coords = self.coords.clone();
        coords.push(last);
        Degree { coords }
    }

    /// All degrees n with 0 <= n <= `bound`, in lexicographic order.
    pub fn grid(bound: &Degree) -> Vec<Degree> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; bound.rank()];
        loop {
            out.push(Degree {
                coords: cur.clone(),
            });
            // odometer increment
            let mut i = bound.rank();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < bound.coords[i] {
                    cur[i] += 1;
                    for c in cur.iter_mut().skip(i + 1) {
                        *c = 0;
                    }
                    break;
                }
            }
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn componentwise_order() {
        let m = Degree::new(vec![1, 2]);
        let n = Degree::new(vec![2, 2]);
        assert!(m.leq(&n));
        assert!(!n.leq(&m));
        let incomparable = Degree::new(vec![0, 3]);
        assert!(!m.leq(&incomparable));
        assert!(!incomparable.leq(&m));
    }

    #[test]
    fn embed_appends_zero() {
        let n = Degree::new(vec![3, 1]);
        assert_eq!(n.embed(), Degree::new(vec![3, 1, 0]));
    }

    #[test]
    fn grid_enumerates_box() {
        let g = Degree::grid(&Degree::new(vec![2, 1]));
        assert_eq!(g.len(), 6);
        assert_eq!(g[0], Degree::zero(2));
        assert_eq!(g.last().unwrap(), &Degree::new(vec![2, 1]));
    }

    #[test]
    fn sub_rejects_incomparable() {
        let m = Degree::new(vec![1, 2]);
        let n = Degree::new(vec![2, 1]);
        assert!(m.sub(&n).is_err());
    }
}
