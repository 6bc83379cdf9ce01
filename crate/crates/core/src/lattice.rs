//! The multiplicity lattice `N^n`: order, covers, L1 distance, balls, cones
//! and saturated chains.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{Arrangement, HomogPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("{0} is not below {1}")]
    NotComparable(Multiplicity, Multiplicity),
    #[error("consecutive chain elements {0} and {1} are not a cover")]
    NotACover(Multiplicity, Multiplicity),
    #[error("cannot parse multiplicity {0:?}")]
    Parse(String),
}

/// A multiplicity: one natural number per line, in arrangement order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multiplicity(Vec<u32>);

impl Multiplicity {
    pub fn new(entries: Vec<u32>) -> Self {
        Multiplicity(entries)
    }

    pub fn zero(n: usize) -> Self {
        Multiplicity(vec![0; n])
    }

    /// Constant multiplicity `(m, ..., m)`.
    pub fn constant(n: usize, m: u32) -> Self {
        Multiplicity(vec![m; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Multiplicity(e)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// `|mu|`.
    pub fn size(&self) -> u64 {
        self.0.iter().map(|&m| m as u64).sum()
    }

    pub fn max_entry(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn with(&self, i: usize, value: u32) -> Self {
        let mut e = self.0.clone();
        e[i] = value;
        Multiplicity(e)
    }

    /// Raises coordinate `i` by one.
    pub fn up(&self, i: usize) -> Self {
        self.with(i, self.0[i] + 1)
    }

    /// Lowers coordinate `i` by one, if it is positive.
    pub fn down(&self, i: usize) -> Option<Self> {
        (self.0[i] > 0).then(|| self.with(i, self.0[i] - 1))
    }

    fn check_len(&self, other: &Multiplicity) -> Result<(), LatticeError> {
        if self.len() == other.len() {
            Ok(())
        } else {
            Err(LatticeError::LengthMismatch(self.len(), other.len()))
        }
    }

    /// Pointwise `self <= other`.
    pub fn is_below(&self, other: &Multiplicity) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// The coordinate raised by the cover `self < other`, if it is one.
    pub fn cover_index(&self, other: &Multiplicity) -> Option<usize> {
        if !self.is_below(other) || self.size() + 1 != other.size() {
            return None;
        }
        self.0.iter().zip(&other.0).position(|(a, b)| a != b)
    }

    pub fn distance(&self, other: &Multiplicity) -> Result<u64, LatticeError> {
        self.check_len(other)?;
        Ok(self.0.iter().zip(&other.0).map(|(&a, &b)| a.abs_diff(b) as u64).sum())
    }

    pub fn meet_join(&self, other: &Multiplicity) -> Result<(Multiplicity, Multiplicity), LatticeError> {
        self.check_len(other)?;
        let meet = self.0.iter().zip(&other.0).map(|(&a, &b)| a.min(b)).collect();
        let join = self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect();
        Ok((Multiplicity(meet), Multiplicity(join)))
    }

    pub fn classify(&self) -> PointClass {
        let size = self.size();
        // mu_H > |mu|/2 holds for at most one H
        match self.0.iter().position(|&m| 2 * m as u64 > size) {
            Some(h) => PointClass::Cone(h),
            None => PointClass::Balanced,
        }
    }

    /// All points of the box covering or covered by `self`.
    pub fn covering_neighbors(&self, bounds: &ScanBox) -> Vec<Neighbor> {
        let mut out = Vec::with_capacity(2 * self.len());
        for h in 0..self.len() {
            if let Some(lower) = self.down(h) {
                out.push(Neighbor {
                    point: lower,
                    hyperplane: h,
                    direction: Direction::Down,
                });
            }
            if self.0[h] < bounds.bound(h) {
                out.push(Neighbor {
                    point: self.up(h),
                    hyperplane: h,
                    direction: Direction::Up,
                });
            }
        }
        out
    }

    /// Points of the box at distance strictly less than `radius`.
    pub fn ball(&self, radius: u64, bounds: &ScanBox) -> Vec<Multiplicity> {
        if radius == 0 {
            return Vec::new();
        }
        let lo: Vec<u32> = self
            .0
            .iter()
            .map(|&m| m.saturating_sub((radius - 1).min(u32::MAX as u64) as u32))
            .collect();
        let hi: Vec<u32> = self
            .0
            .iter()
            .zip(bounds.bounds())
            .map(|(&m, &b)| (m as u64 + radius - 1).min(b as u64) as u32)
            .collect();
        let mut out = Vec::new();
        let mut cur = lo.clone();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return out;
        }
        loop {
            let p = Multiplicity(cur.clone());
            if self.distance(&p).expect("same length") < radius {
                out.push(p);
            }
            if !odometer_step(&mut cur, &lo, &hi) {
                break;
            }
        }
        out
    }
}

fn odometer_step(cur: &mut [u32], lo: &[u32], hi: &[u32]) -> bool {
    for i in (0..cur.len()).rev() {
        if cur[i] < hi[i] {
            cur[i] += 1;
            return true;
        }
        cur[i] = lo[i];
    }
    false
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for Multiplicity {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map(Multiplicity)
            .map_err(|_| LatticeError::Parse(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointClass {
    Balanced,
    /// `mu_H > |mu|/2` for the line with this index.
    Cone(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Up,
    Down,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neighbor {
    pub point: Multiplicity,
    pub hyperplane: usize,
    pub direction: Direction,
}

/// The finite window `[0, B_1] x ... x [0, B_n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ScanBox(Vec<u32>);

impl ScanBox {
    pub fn new(bounds: Vec<u32>) -> Self {
        ScanBox(bounds)
    }

    pub fn cube(n: usize, bound: u32) -> Self {
        ScanBox(vec![bound; n])
    }

    pub fn bounds(&self) -> &[u32] {
        &self.0
    }

    pub fn bound(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, mu: &Multiplicity) -> bool {
        mu.len() == self.0.len() && mu.entries().iter().zip(&self.0).all(|(m, b)| m <= b)
    }

    pub fn point_count(&self) -> u64 {
        self.0.iter().map(|&b| b as u64 + 1).product()
    }

    /// All points in lexicographic order, last coordinate fastest.
    pub fn points(&self) -> Vec<Multiplicity> {
        let lo = vec![0; self.0.len()];
        let mut cur = lo.clone();
        let mut out = Vec::with_capacity(self.point_count() as usize);
        loop {
            out.push(Multiplicity(cur.clone()));
            if !odometer_step(&mut cur, &lo, &self.0) {
                break;
            }
        }
        out
    }
}

impl fmt::Display for ScanBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Multiplicity(self.0.clone()))
    }
}

impl FromStr for ScanBox {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Multiplicity::from_str(s).map(|m| ScanBox(m.0))
    }
}

/// A saturated chain: each element covers the previous one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain(Vec<Multiplicity>);

impl Chain {
    pub fn new(points: Vec<Multiplicity>) -> Result<Self, LatticeError> {
        for w in points.windows(2) {
            if w[0].cover_index(&w[1]).is_none() {
                return Err(LatticeError::NotACover(w[0].clone(), w[1].clone()));
            }
        }
        Ok(Chain(points))
    }

    pub fn points(&self) -> &[Multiplicity] {
        &self.0
    }

    /// Index of the raised line at each step.
    pub fn steps(&self) -> Vec<usize> {
        self.0
            .windows(2)
            .map(|w| w[0].cover_index(&w[1]).expect("validated"))
            .collect()
    }

    /// Raises coordinates of `from` up to `to`, in the given order of line
    /// indices.
    fn raising(from: &Multiplicity, to: &Multiplicity, order: impl Iterator<Item = usize>) -> Result<Self, LatticeError> {
        from.check_len(to)?;
        if !from.is_below(to) {
            return Err(LatticeError::NotComparable(from.clone(), to.clone()));
        }
        let mut points = vec![from.clone()];
        let mut cur = from.clone();
        for h in order {
            while cur.get(h) < to.get(h) {
                cur = cur.up(h);
                points.push(cur.clone());
            }
        }
        Ok(Chain(points))
    }
}

/// The chain from `from` to `to` raising the lowest line index first.
pub fn saturated_chain(from: &Multiplicity, to: &Multiplicity) -> Result<Chain, LatticeError> {
    Chain::raising(from, to, 0..from.len())
}

/// The chain from `from` to `to` raising the highest line index first.
pub fn reverse_saturated_chain(from: &Multiplicity, to: &Multiplicity) -> Result<Chain, LatticeError> {
    Chain::raising(from, to, (0..from.len()).rev())
}

/// Product of the step forms over the steps where the aligned values
/// strictly decrease.
pub fn downalpha(arr: &Arrangement, chain: &Chain, deltas: &[u64]) -> Result<HomogPoly, LatticeError> {
    if deltas.len() != chain.points().len() {
        return Err(LatticeError::LengthMismatch(deltas.len(), chain.points().len()));
    }
    let mut product = HomogPoly::constant(arr.field().one());
    for (i, h) in chain.steps().into_iter().enumerate() {
        if deltas[i] > deltas[i + 1] {
            product = product.mul(&arr.forms()[h].to_poly());
        }
    }
    Ok(product)
}
