//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;
use umap_rips::{EpMetric, ExtDist, Injection, NeighborhoodSystem, Rational, Scalar};

pub type Q = Rational;

pub fn q(n: i64, d: i64) -> Q {
    Rational::new(n.into(), d.into())
}

pub fn ids(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// Manhattan distance on random integer coordinates, `inf` between groups.
pub fn grouped_manhattan<R: Rng>(rng: &mut R, n: usize, groups: usize) -> EpMetric<Q> {
    let coords: Vec<(i64, i64)> = (0..n).map(|_| (rng.gen_range(0..6), rng.gen_range(0..6))).collect();
    let group: Vec<usize> = (0..n).map(|_| rng.gen_range(0..groups.max(1))).collect();
    EpMetric::from_fn(ids(n), |i, j| {
        if group[i] != group[j] {
            ExtDist::Inf
        } else {
            ExtDist::Finite(q((coords[i].0 - coords[j].0).abs() + (coords[i].1 - coords[j].1).abs(), 1))
        }
    })
    .unwrap()
}

/// Distinct grid points, manhattan distance; every distance is a positive integer.
pub fn distinct_grid<R: Rng>(rng: &mut R, n: usize, side: i64) -> (Vec<(i64, i64)>, EpMetric<Q>) {
    let mut cells: Vec<(i64, i64)> = (0..side).flat_map(|a| (0..side).map(move |b| (a, b))).collect();
    cells.shuffle(rng);
    cells.truncate(n);
    let m = EpMetric::from_fn(ids(n), |i, j| {
        ExtDist::Finite(q((cells[i].0 - cells[j].0).abs() + (cells[i].1 - cells[j].1).abs(), 1))
    })
    .unwrap();
    (cells, m)
}

pub fn random_weight<R: Rng>(rng: &mut R) -> Q {
    q(rng.gen_range(1..=30), rng.gen_range(1..=5))
}

/// Arbitrary neighbor lists (not k-NN), each of length at most `max_k`, with random weights.
pub fn random_lists<R: Rng>(rng: &mut R, n: usize, max_k: usize) -> NeighborhoodSystem<Q> {
    let mut neighbors = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for x in 0..n {
        let mut others: Vec<usize> = (0..n).filter(|&y| y != x).collect();
        others.shuffle(rng);
        others.truncate(rng.gen_range(0..=max_k.min(n - 1)));
        weights.push(others.iter().map(|_| random_weight(rng)).collect());
        neighbors.push(others);
    }
    NeighborhoodSystem::new(ids(n), neighbors).unwrap().with_weights(weights).unwrap()
}

/// Minimum over all simple paths of the sum of per-step `min_i d_i`.
pub fn brute_colimit(metrics: &[EpMetric<Q>]) -> Vec<Vec<ExtDist<Q>>> {
    let n = metrics[0].len();
    let step = |a: usize, b: usize| metrics.iter().map(|m| m.get(a, b).clone()).min().unwrap();
    fn walk(
        at: usize,
        target: usize,
        acc: ExtDist<Q>,
        visited: &mut Vec<bool>,
        step: &dyn Fn(usize, usize) -> ExtDist<Q>,
        best: &mut ExtDist<Q>,
    ) {
        if at == target {
            if acc < *best {
                *best = acc;
            }
            return;
        }
        for next in 0..visited.len() {
            if visited[next] {
                continue;
            }
            let ExtDist::Finite(w) = step(at, next) else { continue };
            let ExtDist::Finite(a) = &acc else { unreachable!() };
            visited[next] = true;
            walk(next, target, ExtDist::Finite(a.add(&w)), visited, step, best);
            visited[next] = false;
        }
    }
    let mut out = vec![vec![ExtDist::Inf; n]; n];
    for (u, row) in out.iter_mut().enumerate() {
        for (v, cell) in row.iter_mut().enumerate() {
            let mut visited = vec![false; n];
            visited[u] = true;
            let mut best = ExtDist::Inf;
            walk(u, v, ExtDist::Finite(Q::zero()), &mut visited, &step, &mut best);
            *cell = best;
        }
    }
    out
}

/// Reachability by breadth-first search over pairs with `x ∈ N_y` or `y ∈ N_x`.
pub fn pair_reachability<S: Scalar>(ns: &NeighborhoodSystem<S>) -> Vec<Vec<bool>> {
    let n = ns.len();
    let mut adj = vec![Vec::new(); n];
    for x in 0..n {
        for &y in ns.neighbors(x) {
            adj[x].push(y);
            adj[y].push(x);
        }
    }
    (0..n)
        .map(|start| {
            let mut seen = vec![false; n];
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            seen
        })
        .collect()
}

/// A metric on a random subset of a grid, distances stretched by a second grid metric,
/// included into the full grid. Stretching keeps the morphism property.
pub fn stretched_inclusion<R: Rng>(rng: &mut R, max_target: usize) -> (EpMetric<Q>, EpMetric<Q>, Injection) {
    let ny = rng.gen_range(1..=max_target);
    let (_, target) = distinct_grid(rng, ny, 6);
    let mut positions: Vec<usize> = (0..ny).collect();
    positions.shuffle(rng);
    positions.truncate(rng.gen_range(1..=ny));
    let nx = positions.len();
    let extra: Vec<(i64, i64)> = (0..nx).map(|_| (rng.gen_range(0..3), rng.gen_range(0..3))).collect();
    let scale = q(rng.gen_range(0..=3), rng.gen_range(1..=2));
    let source = EpMetric::from_fn(ids(nx), |i, j| {
        let ExtDist::Finite(base) = target.get(positions[i], positions[j]).clone() else { unreachable!() };
        let bump = q((extra[i].0 - extra[j].0).abs() + (extra[i].1 - extra[j].1).abs(), 1);
        ExtDist::Finite(base.add(&scale.mul(&bump)))
    })
    .unwrap();
    let map = Injection::new(positions, ny).unwrap();
    (source, target, map)
}

/// A random weighted target system and a source on a subset satisfying, by construction,
/// both compatibility conditions: neighbors map to neighbors and weights never shrink
/// under the inclusion (target weight <= source weight).
pub fn compatible_pair<R: Rng>(
    rng: &mut R,
    max_target: usize,
    max_k: usize,
) -> (NeighborhoodSystem<Q>, NeighborhoodSystem<Q>, Injection) {
    let ny = rng.gen_range(2..=max_target);
    let target = random_lists(rng, ny, max_k);
    let mut positions: Vec<usize> = (0..ny).collect();
    positions.shuffle(rng);
    positions.truncate(rng.gen_range(1..=ny));
    let nx = positions.len();
    let mut neighbors = Vec::with_capacity(nx);
    let mut weights = Vec::with_capacity(nx);
    for &px in &positions {
        let mut list = Vec::new();
        let mut ws = Vec::new();
        for (z, &pz) in positions.iter().enumerate() {
            let Some(w) = target.weight(px, pz) else { continue };
            if rng.gen_bool(0.8) {
                list.push(z);
                ws.push(w.add(&q(rng.gen_range(0..=4), rng.gen_range(1..=3))));
            }
        }
        neighbors.push(list);
        weights.push(ws);
    }
    let names: Vec<String> = positions.iter().map(|&p| target.points()[p].clone()).collect();
    let source = NeighborhoodSystem::new(names, neighbors).unwrap().with_weights(weights).unwrap();
    let map = Injection::new(positions, ny).unwrap();
    (source, target, map)
}
