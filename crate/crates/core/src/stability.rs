//! Interleaving certificates for inclusions of finite metric spaces and of
//! UMAP neighborhood systems.
//!
//! For an inclusion `i: E → F` that does not stretch distances, with
//! compression factor `m` and covering radius `r`, a retraction
//! `θ: F → E` moves every point of `F` by at most `r`. The checks below
//! confirm, scale by scale, that
//!
//! * `θ` carries `P_s(F)` into `P_{m(s+2r)}(E)` (`transport_ok`),
//! * `θ ∘ i` is the shift map on `E` (`upper_ok`),
//! * `i ∘ θ` is joined to the shift map on `F` through `σ ∪ iθ(σ)` (`contiguity_ok`)
//!   and agrees with it on path components (`lower_ok`).
//!
//! The covering radius is used with a non-strict bound, `d(y, iθ(y)) <= r`.

use crate::dist::ExtDist;
use crate::epmetric::EpMetric;
use crate::error::{Error, Result};
use crate::injection::Injection;
use crate::neighborhood::NeighborhoodSystem;
use crate::partition::Partition;
use crate::rips::{components_at, critical_values, dedup_sorted, wedge_components_at};
use crate::scalar::Scalar;

pub const RADIUS_CONVENTION: &str = "r is the covering radius max_y min_x d(y, i(x)); displacement checked with <= r";

/// An injective, distance non-increasing map between two finite ep-metric spaces.
#[derive(Clone, Debug)]
pub struct MetricInclusion<S: Scalar> {
    source: EpMetric<S>,
    target: EpMetric<S>,
    map: Injection,
}

impl<S: Scalar> MetricInclusion<S> {
    /// Checks injectivity and `d_target(i x, i y) <= d_source(x, y)` for all pairs.
    pub fn new(source: EpMetric<S>, target: EpMetric<S>, map: Injection) -> Result<Self> {
        if map.source_len() != source.len() || map.target_len() != target.len() {
            return Err(Error::Structural("injection does not match the two spaces".into()));
        }
        let mut violations = Vec::new();
        for x in 0..source.len() {
            for y in x + 1..source.len() {
                if !target.get(map.apply(x), map.apply(y)).approx_le(source.get(x, y)) {
                    violations.push(format!(
                        "({},{}): {} > {}",
                        source.id(x),
                        source.id(y),
                        target.get(map.apply(x), map.apply(y)),
                        source.get(x, y)
                    ));
                }
            }
        }
        if !violations.is_empty() {
            return Err(Error::Domain(format!(
                "inclusion stretches distances: {}",
                violations.join("; ")
            )));
        }
        Ok(Self { source, target, map })
    }

    pub fn source(&self) -> &EpMetric<S> {
        &self.source
    }

    pub fn target(&self) -> &EpMetric<S> {
        &self.target
    }

    pub fn map(&self) -> &Injection {
        &self.map
    }

    /// `max_{x≠y} d_source(x,y) / d_target(i x, i y)`, or 1 with fewer than two points.
    pub fn compression_factor(&self) -> Result<S> {
        let mut best = S::one();
        let n = self.source.len();
        for x in 0..n {
            for y in x + 1..n {
                let num = self.source.get(x, y).finite().ok_or_else(|| {
                    Error::Domain(format!(
                        "source distance d({},{}) is infinite",
                        self.source.id(x),
                        self.source.id(y)
                    ))
                })?;
                let (ix, iy) = (self.map.apply(x), self.map.apply(y));
                let den = match self.target.get(ix, iy) {
                    ExtDist::Finite(v) if !v.is_zero_value() => v,
                    d => {
                        return Err(Error::Domain(format!(
                            "target distance d({},{}) = {d} is not a positive real",
                            self.target.id(ix),
                            self.target.id(iy)
                        )))
                    }
                };
                best = best.max_of(&num.div(den));
            }
        }
        Ok(best)
    }

    /// `max_y min_x d_target(y, i(x))`.
    pub fn covering_radius(&self) -> Result<S> {
        if self.target.is_empty() || self.source.is_empty() {
            return Err(Error::Domain("covering radius of an empty space".into()));
        }
        let mut radius = S::zero();
        for y in 0..self.target.len() {
            let nearest = (0..self.source.len())
                .map(|x| self.target.get(y, self.map.apply(x)).clone())
                .min()
                .expect("nonempty source");
            match nearest {
                ExtDist::Finite(v) => radius = radius.max_of(&v),
                ExtDist::Inf => {
                    return Err(Error::Domain(format!(
                        "`{}` is at infinite distance from the image",
                        self.target.id(y)
                    )))
                }
            }
        }
        Ok(radius)
    }

    /// Retraction `θ: target → source`: the preimage on the image of `i`,
    /// otherwise the nearest source point (earliest in the total order on ties).
    pub fn theta_map(&self, r: &S) -> Result<Vec<usize>> {
        let r_star = self.covering_radius()?;
        if !r_star.approx_le(r) {
            return Err(Error::Parameter(format!(
                "radius {} is below the covering radius {}",
                r.render(),
                r_star.render()
            )));
        }
        let theta = (0..self.target.len())
            .map(|y| {
                if let Some(x) = self.map.preimage(y) {
                    return x;
                }
                let mut best: Option<(usize, &ExtDist<S>)> = None;
                for x in 0..self.source.len() {
                    let d = self.target.get(y, self.map.apply(x));
                    let better = match best {
                        None => true,
                        Some((_, b)) => !b.approx_le(d),
                    };
                    if better {
                        best = Some((x, d));
                    }
                }
                best.expect("nonempty source").0
            })
            .collect();
        Ok(theta)
    }

    /// Scales at which π₀ verdicts can change: 0, critical values of both
    /// spaces, and their images under `s ↦ m(s + 2r)`.
    pub fn test_scales(&self, m: &S, r: &S) -> Vec<S> {
        let mut values = vec![S::zero()];
        values.extend(critical_values(&self.source));
        values.extend(critical_values(&self.target));
        let shifted: Vec<S> = values.iter().map(|s| shift(m, r, s)).collect();
        values.extend(shifted);
        dedup_sorted(values)
    }
}

/// `m · (s + 2r)`
pub fn shift<S: Scalar>(m: &S, r: &S, s: &S) -> S {
    m.mul(&s.add(&r.add(r)))
}

/// Path-component verdicts for one scale of an interleaving square.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pi0Verdicts {
    /// `θ_*: π₀(F)_s → π₀(E)_{shifted}` is well defined.
    pub diagonal_ok: bool,
    /// `θ_* ∘ i_* = σ` on `π₀(E)_s`, with `i_*` well defined.
    pub upper_ok: bool,
    /// `i_* ∘ θ_* = σ` on `π₀(F)_s`.
    pub lower_ok: bool,
}

impl Pi0Verdicts {
    pub fn all(&self) -> bool {
        self.diagonal_ok && self.upper_ok && self.lower_ok
    }
}

/// π₀ checks from the four partitions of the square (indices are positions in E and F).
pub fn pi0_verdicts(
    source_at_s: &Partition,
    source_shifted: &Partition,
    target_at_s: &Partition,
    target_shifted: &Partition,
    map: &Injection,
    theta: &[usize],
) -> Pi0Verdicts {
    let ne = source_at_s.num_points();
    let nf = target_at_s.num_points();
    let diagonal_ok = (0..nf).all(|y1| {
        (y1 + 1..nf)
            .filter(|&y2| target_at_s.same_block(y1, y2))
            .all(|y2| source_shifted.same_block(theta[y1], theta[y2]))
    });
    let inclusion_ok = (0..ne).all(|x1| {
        (x1 + 1..ne)
            .filter(|&x2| source_at_s.same_block(x1, x2))
            .all(|x2| target_at_s.same_block(map.apply(x1), map.apply(x2)))
    });
    let upper_ok = inclusion_ok
        && source_at_s.refines(source_shifted)
        && (0..ne).all(|x| source_shifted.same_block(x, theta[map.apply(x)]));
    let lower_ok = target_at_s.refines(target_shifted)
        && (0..nf).all(|y| target_shifted.same_block(y, map.apply(theta[y])));
    Pi0Verdicts { diagonal_ok, upper_ok, lower_ok }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScaleRecord<S> {
    pub scale: S,
    pub shifted: S,
    /// `θ(σ)` has diameter at most the shifted scale for every `σ ∈ P_s(F)`.
    pub transport_ok: bool,
    /// `σ ∪ iθ(σ)` has diameter at most the shifted scale for every `σ ∈ P_s(F)`.
    pub contiguity_ok: bool,
    /// π₀ verdicts computed from Rips complexes of the two metrics.
    pub colimit: Pi0Verdicts,
    /// π₀ verdicts computed from the glued star complexes, when available.
    pub wedge: Option<Pi0Verdicts>,
    /// Glued and colimit partitions coincide, and so do their verdicts.
    pub excision_ok: Option<bool>,
}

impl<S> ScaleRecord<S> {
    pub fn upper_ok(&self) -> bool {
        self.colimit.upper_ok && self.wedge.is_none_or(|w| w.upper_ok)
    }

    pub fn lower_ok(&self) -> bool {
        self.colimit.lower_ok && self.contiguity_ok && self.wedge.is_none_or(|w| w.lower_ok)
    }

    pub fn ok(&self) -> bool {
        self.transport_ok
            && self.contiguity_ok
            && self.colimit.all()
            && self.wedge.is_none_or(|w| w.all())
            && self.excision_ok.unwrap_or(true)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InterleavingCertificate<S> {
    pub m: S,
    pub r: S,
    /// Retraction, as positions in the source for every target position.
    pub theta: Vec<usize>,
    /// `θ ∘ i` is the identity.
    pub retraction_ok: bool,
    /// Every target point lies within `r` of the image of its `θ` value.
    pub radius_ok: bool,
    /// Pairs `(y1, y2)` breaking `d(θy1, θy2) <= m (d(y1, y2) + 2r)`.
    pub bound_violations: Vec<(usize, usize)>,
    pub scales: Vec<ScaleRecord<S>>,
    pub radius_convention: &'static str,
}

impl<S> InterleavingCertificate<S> {
    pub fn verdict(&self) -> bool {
        self.retraction_ok
            && self.radius_ok
            && self.bound_violations.is_empty()
            && self.scales.iter().all(ScaleRecord::ok)
    }
}

/// Runs every check for given `m`, `r` and `θ`. Nothing is recomputed or
/// corrected, so this also serves to test deliberately wrong inputs.
pub fn check_interleaving<S: Scalar>(
    inc: &MetricInclusion<S>,
    m: &S,
    r: &S,
    theta: &[usize],
    scales: &[S],
) -> InterleavingCertificate<S> {
    check_with_wedges(inc, m, r, theta, scales, None::<WedgeSides<S>>)
}

/// Wedge-side source and target partitions at a scale.
type WedgeSides<'a, S> = &'a dyn Fn(&S) -> (Partition, Partition);

fn check_with_wedges<S: Scalar>(
    inc: &MetricInclusion<S>,
    m: &S,
    r: &S,
    theta: &[usize],
    scales: &[S],
    wedges: Option<WedgeSides<S>>,
) -> InterleavingCertificate<S> {
    let e = &inc.source;
    let f = &inc.target;
    let map = &inc.map;
    let nf = f.len();
    let fin = |v: &S| ExtDist::Finite(v.clone());
    let iota = |y: usize| map.apply(theta[y]);

    if theta.len() != nf || theta.iter().any(|&x| x >= e.len()) {
        return InterleavingCertificate {
            m: m.clone(),
            r: r.clone(),
            theta: theta.to_vec(),
            retraction_ok: false,
            radius_ok: false,
            bound_violations: Vec::new(),
            scales: Vec::new(),
            radius_convention: RADIUS_CONVENTION,
        };
    }
    let retraction_ok = (0..e.len()).all(|x| theta[map.apply(x)] == x);
    let radius_ok = (0..nf).all(|y| f.get(y, iota(y)).approx_le(&fin(r)));

    let mut bound_violations = Vec::new();
    for y1 in 0..nf {
        for y2 in y1 + 1..nf {
            let bound = match f.get(y1, y2) {
                ExtDist::Finite(d) => ExtDist::Finite(shift(m, r, d)),
                ExtDist::Inf => ExtDist::Inf,
            };
            if !e.get(theta[y1], theta[y2]).approx_le(&bound) {
                bound_violations.push((y1, y2));
            }
        }
    }

    let records = scales
        .iter()
        .map(|s| {
            let t = shift(m, r, s);
            let (s_ext, t_ext) = (fin(s), fin(&t));
            let mut transport_ok = true;
            let mut contiguity_ok = true;
            for y1 in 0..nf {
                for y2 in y1..nf {
                    if !f.get(y1, y2).approx_le(&s_ext) {
                        continue;
                    }
                    transport_ok &= e.get(theta[y1], theta[y2]).approx_le(&t_ext);
                    let joined = [y1, y2, iota(y1), iota(y2)];
                    contiguity_ok &= joined
                        .iter()
                        .all(|&a| joined.iter().all(|&b| f.get(a, b).approx_le(&t_ext)));
                }
            }
            let es = components_at(e, &s_ext);
            let et = components_at(e, &t_ext);
            let fs = components_at(f, &s_ext);
            let ft = components_at(f, &t_ext);
            let colimit = pi0_verdicts(&es, &et, &fs, &ft, map, theta);
            let (wedge, excision_ok) = match wedges {
                Some(sides) => {
                    let (wes, wfs) = sides(s);
                    let (wet, wft) = sides(&t);
                    let w = pi0_verdicts(&wes, &wet, &wfs, &wft, map, theta);
                    let agree = wes == es && wet == et && wfs == fs && wft == ft && w == colimit;
                    (Some(w), Some(agree))
                }
                None => (None, None),
            };
            ScaleRecord { scale: s.clone(), shifted: t, transport_ok, contiguity_ok, colimit, wedge, excision_ok }
        })
        .collect();

    InterleavingCertificate {
        m: m.clone(),
        r: r.clone(),
        theta: theta.to_vec(),
        retraction_ok,
        radius_ok,
        bound_violations,
        scales: records,
        radius_convention: RADIUS_CONVENTION,
    }
}

/// Computes `m`, the covering radius and `θ`, then checks the interleaving
/// at `scales` (or at [`MetricInclusion::test_scales`] when `None`).
pub fn verify_poset_interleaving<S: Scalar>(
    inc: &MetricInclusion<S>,
    scales: Option<&[S]>,
) -> Result<InterleavingCertificate<S>> {
    let m = inc.compression_factor()?;
    let r = inc.covering_radius()?;
    let theta = inc.theta_map(&r)?;
    let scales = match scales {
        Some(s) => s.to_vec(),
        None => inc.test_scales(&m, &r),
    };
    Ok(check_interleaving(inc, &m, &r, &theta, &scales))
}

/// Certificate for one global component `E` of the source UMAP metric.
#[derive(Clone, Debug)]
pub struct UmapCertificate<S: Scalar> {
    /// Points of `E`, as indices into the source system.
    pub source_component: Vec<usize>,
    /// Points of `F`, as indices into the target system.
    pub target_component: Vec<usize>,
    pub inclusion: MetricInclusion<S>,
    pub certificate: InterleavingCertificate<S>,
}

/// Stability certificate for the global component of `source` containing
/// `component_of`, checked both on colimit metrics and on glued star complexes.
pub fn umap_stability_certificate<S: Scalar>(
    source: &NeighborhoodSystem<S>,
    target: &NeighborhoodSystem<S>,
    map: &Injection,
    component_of: usize,
) -> Result<UmapCertificate<S>> {
    let compat = source.inclusion_compatible(target, map)?;
    if !compat.is_compatible() {
        return Err(Error::Precondition {
            message: "neighborhood systems are not compatible with the inclusion".into(),
            violations: compat.violations.iter().map(ToString::to_string).collect(),
        });
    }
    if component_of >= source.len() {
        return Err(Error::Structural(format!("unknown point index {component_of}")));
    }
    let d_source = source.umap_metric()?;
    let d_target = target.umap_metric()?;
    let e_block = d_source.global_components().block_containing(component_of).to_vec();
    let f_block = d_target
        .global_components()
        .block_containing(map.apply(component_of))
        .to_vec();
    let positions = e_block
        .iter()
        .map(|&x| {
            f_block.binary_search(&map.apply(x)).map_err(|_| Error::Precondition {
                message: "the inclusion does not preserve global components".into(),
                violations: vec![source.points()[x].clone()],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let inclusion = MetricInclusion::new(
        d_source.subspace(&e_block)?,
        d_target.subspace(&f_block)?,
        Injection::new(positions, f_block.len())?,
    )?;

    let m = inclusion.compression_factor()?;
    let r = inclusion.covering_radius()?;
    let theta = inclusion.theta_map(&r)?;
    let scales = inclusion.test_scales(&m, &r);

    // Both systems carry weights (checked by the compatibility test above).
    let sides = |s: &S| -> (Partition, Partition) {
        let scale = ExtDist::Finite(s.clone());
        let ws = wedge_components_at(source, &scale).expect("weighted system");
        let wt = wedge_components_at(target, &scale).expect("weighted system");
        (ws.restrict(&e_block), wt.restrict(&f_block))
    };
    let certificate = check_with_wedges(&inclusion, &m, &r, &theta, &scales, Some(&sides));
    Ok(UmapCertificate { source_component: e_block, target_component: f_block, inclusion, certificate })
}

/// One certificate per global component of the source, in order of least point.
pub fn umap_stability_certificates<S: Scalar>(
    source: &NeighborhoodSystem<S>,
    target: &NeighborhoodSystem<S>,
    map: &Injection,
) -> Result<Vec<UmapCertificate<S>>> {
    let components = source.umap_metric()?.global_components();
    components
        .blocks()
        .iter()
        .map(|block| umap_stability_certificate(source, target, map, block[0]))
        .collect()
}
