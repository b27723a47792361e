//! Neighborhood systems, their star metrics and the glued UMAP metric.
//!
//! A [`NeighborhoodSystem`] assigns to every point `x` an ordered list of
//! neighbors `N_x` and, once weighted, a positive weight `d_x(x, y)` per
//! neighbor. Each point then carries a star metric on `U_x = {x} ⊔ N_x`
//! (two spokes always meet at the center) and the UMAP metric is the
//! colimit of all star metrics.

use std::collections::HashSet;
use std::fmt;

use crate::dist::ExtDist;
use crate::epmetric::{shortest_paths, EpMetric};
use crate::error::{Error, Result};
use crate::injection::Injection;
use crate::scalar::Scalar;

/// How neighbor weights are derived from ambient distances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeightScheme {
    /// `d(x, y)`
    Ambient,
    /// `d(x, y) / r_x`
    Scaled,
    /// `(d(x, y) - η_x) / r_x`
    Shifted,
}

impl WeightScheme {
    pub const ALL: [WeightScheme; 3] = [WeightScheme::Ambient, WeightScheme::Scaled, WeightScheme::Shifted];

    pub fn name(self) -> &'static str {
        match self {
            WeightScheme::Ambient => "ambient",
            WeightScheme::Scaled => "scaled",
            WeightScheme::Shifted => "shifted",
        }
    }
}

/// Default lower clamp applied to computed weights.
pub const DEFAULT_FLOOR: &str = "1e-6";

#[derive(Clone, Debug, PartialEq)]
pub struct NeighborhoodSystem<S> {
    points: Vec<String>,
    neighbors: Vec<Vec<usize>>,
    weights: Option<Vec<Vec<S>>>,
    radius: Vec<Option<S>>,
    nearest: Vec<Option<S>>,
}

impl<S: Scalar> NeighborhoodSystem<S> {
    /// Unweighted system from explicit neighbor lists (indices into `points`).
    pub fn new(points: Vec<String>, neighbors: Vec<Vec<usize>>) -> Result<Self> {
        // Reuse the point-list checks of the metric constructor.
        EpMetric::<S>::discrete(points.clone())?;
        if neighbors.len() != points.len() {
            return Err(Error::Structural(format!(
                "{} neighbor lists for {} points",
                neighbors.len(),
                points.len()
            )));
        }
        for (x, list) in neighbors.iter().enumerate() {
            let mut seen = HashSet::new();
            for &y in list {
                if y >= points.len() {
                    return Err(Error::Structural(format!("neighbor index {y} out of range")));
                }
                if y == x {
                    return Err(Error::Structural(format!("`{}` lists itself as a neighbor", points[x])));
                }
                if !seen.insert(y) {
                    return Err(Error::Structural(format!(
                        "`{}` lists neighbor `{}` twice",
                        points[x], points[y]
                    )));
                }
            }
        }
        let n = points.len();
        Ok(Self { points, neighbors, weights: None, radius: vec![None; n], nearest: vec![None; n] })
    }

    /// Attaches explicit weights, parallel to the neighbor lists. All must be positive.
    pub fn with_weights(mut self, weights: Vec<Vec<S>>) -> Result<Self> {
        if weights.len() != self.neighbors.len() {
            return Err(Error::Structural("weight lists do not match the point set".into()));
        }
        for (x, (ws, ns)) in weights.iter().zip(&self.neighbors).enumerate() {
            if ws.len() != ns.len() {
                return Err(Error::Structural(format!(
                    "`{}` has {} neighbors but {} weights",
                    self.points[x],
                    ns.len(),
                    ws.len()
                )));
            }
            if let Some((y, w)) = ns.iter().zip(ws).find(|(_, w)| !S::zero().approx_lt(w)) {
                return Err(Error::Domain(format!(
                    "weight d_{x}({x},{y}) = {} is not positive",
                    w.render(),
                    x = self.points[x],
                    y = self.points[*y]
                )));
            }
        }
        self.weights = Some(weights);
        Ok(self)
    }

    /// k nearest neighbors of every point. Selection is an iterated argmin in
    /// which ties go to the earliest point in the total order, so equidistant
    /// neighbors are listed in ascending order.
    pub fn knn(ambient: &EpMetric<S>, k: usize) -> Result<Self> {
        let n = ambient.len();
        if k >= n {
            return Err(Error::Parameter(format!("k = {k} must be smaller than |X| = {n}")));
        }
        if !ambient.is_globally_connected() {
            return Err(Error::Domain("k-NN needs finite ambient distances".into()));
        }
        let mut neighbors = Vec::with_capacity(n);
        for x in 0..n {
            let mut chosen = vec![false; n];
            chosen[x] = true;
            let mut list = Vec::with_capacity(k);
            for _ in 0..k {
                let mut best: Option<(usize, &S)> = None;
                for (y, taken) in chosen.iter().enumerate() {
                    if *taken {
                        continue;
                    }
                    let d = ambient.get(x, y).finite().expect("finite");
                    match best {
                        Some((_, b)) if !d.approx_lt(b) => {}
                        _ => best = Some((y, d)),
                    }
                }
                let (y, _) = best.expect("k < |X|");
                chosen[y] = true;
                list.push(y);
            }
            neighbors.push(list);
        }
        Self::new(ambient.points().to_vec(), neighbors)
    }

    /// Weights from ambient distances, clamped below by `floor`.
    pub fn weighted(&self, ambient: &EpMetric<S>, scheme: WeightScheme, floor: &S) -> Result<Self> {
        if !S::zero().approx_lt(floor) {
            return Err(Error::Parameter(format!("floor {} must be positive", floor.render())));
        }
        if ambient.points() != self.points.as_slice() {
            return Err(Error::Structural("ambient metric is on a different point set".into()));
        }
        let n = self.points.len();
        let mut weights = Vec::with_capacity(n);
        let mut radius = vec![None; n];
        let mut nearest = vec![None; n];
        for x in 0..n {
            let dists = self.neighbors[x]
                .iter()
                .map(|&y| {
                    ambient.get(x, y).finite().cloned().ok_or_else(|| {
                        Error::Domain(format!(
                            "ambient distance from `{}` to neighbor `{}` is infinite",
                            self.points[x], self.points[y]
                        ))
                    })
                })
                .collect::<Result<Vec<S>>>()?;
            if dists.is_empty() {
                weights.push(Vec::new());
                continue;
            }
            let r = dists.iter().skip(1).fold(dists[0].clone(), |acc, d| acc.max_of(d));
            let eta = dists.iter().skip(1).fold(dists[0].clone(), |acc, d| acc.min_of(d));
            if scheme != WeightScheme::Ambient && dists.iter().any(Scalar::is_zero_value) {
                return Err(Error::Domain(format!(
                    "`{}` has a neighbor at ambient distance 0 (r_x = {}); the {} scheme needs distinct points",
                    self.points[x],
                    r.render(),
                    scheme.name()
                )));
            }
            let ws = dists
                .iter()
                .map(|d| {
                    let w = match scheme {
                        WeightScheme::Ambient => d.clone(),
                        WeightScheme::Scaled => d.div(&r),
                        WeightScheme::Shifted => d.sub(&eta).div(&r),
                    };
                    w.max_of(floor)
                })
                .collect();
            weights.push(ws);
            radius[x] = Some(r);
            nearest[x] = Some(eta);
        }
        Ok(Self {
            points: self.points.clone(),
            neighbors: self.neighbors.clone(),
            weights: Some(weights),
            radius,
            nearest,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.points.iter().position(|p| p == id)
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.neighbors[x]
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    pub fn weights(&self, x: usize) -> Option<&[S]> {
        self.weights.as_ref().map(|w| w[x].as_slice())
    }

    /// `d_x(x, y)` if `y ∈ N_x` and weights are set.
    pub fn weight(&self, x: usize, y: usize) -> Option<&S> {
        let pos = self.neighbors[x].iter().position(|&v| v == y)?;
        self.weights.as_ref().map(|w| &w[x][pos])
    }

    /// `r_x`, the largest ambient distance to a neighbor (set by [`Self::weighted`]).
    pub fn radius(&self, x: usize) -> Option<&S> {
        self.radius[x].as_ref()
    }

    /// `η_x`, the smallest ambient distance to a neighbor (set by [`Self::weighted`]).
    pub fn nearest(&self, x: usize) -> Option<&S> {
        self.nearest[x].as_ref()
    }

    /// `x ∈ N_y` or `y ∈ N_x`.
    pub fn is_neighbourhood_pair(&self, x: usize, y: usize) -> bool {
        self.neighbors[x].contains(&y) || self.neighbors[y].contains(&x)
    }

    fn require_weights(&self) -> Result<&Vec<Vec<S>>> {
        self.weights
            .as_ref()
            .ok_or_else(|| Error::Structural("neighborhood system has no weights".into()))
    }

    pub fn star_metric(&self, x: usize) -> Result<StarMetric<S>> {
        if x >= self.len() {
            return Err(Error::Structural(format!("unknown point index {x}")));
        }
        let weights = &self.require_weights()?[x];
        let mut members = Vec::with_capacity(self.neighbors[x].len() + 1);
        members.push(x);
        members.extend_from_slice(&self.neighbors[x]);
        let m = members.len();
        // Spoke length of every member; the center has spoke 0.
        let spokes: Vec<S> = std::iter::once(S::zero()).chain(weights.iter().cloned()).collect();
        let mut block = Vec::with_capacity(m * m);
        for a in 0..m {
            for b in 0..m {
                block.push(if a == b { S::zero() } else { spokes[a].add(&spokes[b]) });
            }
        }
        Ok(StarMetric { center: x, n: self.len(), members, block })
    }

    pub fn star_metrics(&self) -> Result<Vec<StarMetric<S>>> {
        (0..self.len()).map(|x| self.star_metric(x)).collect()
    }

    /// The colimit of all star metrics, computed without densifying the stars.
    pub fn umap_metric(&self) -> Result<EpMetric<S>> {
        let n = self.len();
        let mut dist = vec![ExtDist::Inf; n * n];
        for star in self.star_metrics()? {
            for (a, &u) in star.members.iter().enumerate() {
                for (b, &v) in star.members.iter().enumerate() {
                    let d = &star.block[a * star.members.len() + b];
                    let cur = &mut dist[u * n + v];
                    let better = match cur {
                        ExtDist::Inf => true,
                        ExtDist::Finite(c) => d.cmp_exact(c) == std::cmp::Ordering::Less,
                    };
                    if better {
                        *cur = ExtDist::Finite(d.clone());
                    }
                }
            }
        }
        shortest_paths(n, &mut dist);
        Ok(EpMetric::from_raw(self.points.clone(), dist))
    }

    /// Checks that `map` induces a morphism of neighborhood systems:
    /// `map(N_x) ⊆ N'_{map(x)}` and `d'_{map(x)}(map(x), map(z)) <= d_x(x, z)`.
    pub fn inclusion_compatible(&self, target: &NeighborhoodSystem<S>, map: &Injection) -> Result<Compatibility> {
        if map.source_len() != self.len() || map.target_len() != target.len() {
            return Err(Error::Structural("injection does not match the two point sets".into()));
        }
        let source_w = self.require_weights()?;
        target.require_weights()?;
        let mut violations = Vec::new();
        for x in 0..self.len() {
            let ix = map.apply(x);
            for (pos, &z) in self.neighbors[x].iter().enumerate() {
                let iz = map.apply(z);
                let x_id = self.points[x].clone();
                let z_id = self.points[z].clone();
                match target.weight(ix, iz) {
                    None => violations.push(CompatViolation::MissingNeighbor { x: x_id, z: z_id }),
                    Some(w) => {
                        let source = &source_w[x][pos];
                        if !w.approx_le(source) {
                            violations.push(CompatViolation::WeightIncrease {
                                x: x_id,
                                z: z_id,
                                source: source.render(),
                                target: w.render(),
                            });
                        }
                    }
                }
            }
        }
        Ok(Compatibility { violations })
    }
}

/// The star metric `D_x`: finite only on `U_x = {x} ⊔ N_x`.
#[derive(Clone, Debug, PartialEq)]
pub struct StarMetric<S> {
    center: usize,
    n: usize,
    /// `U_x`, center first, then `N_x` in list order.
    members: Vec<usize>,
    block: Vec<S>,
}

impl<S: Scalar> StarMetric<S> {
    pub fn center(&self) -> usize {
        self.center
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, u: usize) -> bool {
        self.members.contains(&u)
    }

    /// `D_x(member_a, member_b)` by position in [`Self::members`].
    pub fn local(&self, a: usize, b: usize) -> &S {
        &self.block[a * self.members.len() + b]
    }

    pub fn get(&self, u: usize, v: usize) -> ExtDist<S> {
        if u == v {
            return ExtDist::zero();
        }
        let a = self.members.iter().position(|&p| p == u);
        let b = self.members.iter().position(|&p| p == v);
        match (a, b) {
            (Some(a), Some(b)) => ExtDist::Finite(self.local(a, b).clone()),
            _ => ExtDist::Inf,
        }
    }

    /// Dense form on the whole point set.
    pub fn to_epmetric(&self, points: &[String]) -> Result<EpMetric<S>> {
        if points.len() != self.n {
            return Err(Error::Structural("point list does not match the star".into()));
        }
        EpMetric::from_fn(points.to_vec(), |u, v| self.get(u, v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompatViolation {
    MissingNeighbor { x: String, z: String },
    WeightIncrease { x: String, z: String, source: String, target: String },
}

impl fmt::Display for CompatViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompatViolation::MissingNeighbor { x, z } => {
                write!(f, "({x},{z}): image of {z} is not a neighbor of the image of {x}")
            }
            CompatViolation::WeightIncrease { x, z, source, target } => {
                write!(f, "({x},{z}): target weight {target} exceeds source weight {source}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Compatibility {
    pub violations: Vec<CompatViolation>,
}

impl Compatibility {
    pub fn is_compatible(&self) -> bool {
        self.violations.is_empty()
    }
}
