//! Points of the realization `‖N(P)‖` and the explicit homotopies used to
//! compare filtered mapping spaces.
//!
//! A point is a chain together with strictly positive barycentric
//! coordinates; every operation returns its result in this canonical form.

use std::fmt::Debug;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use rand::Rng;

use crate::error::{Error, Result};
use crate::poset::{Chain, Poset};

/// Floating-point types with the tolerances used for canonical forms.
pub trait Scalar: Float + FromPrimitive + ToPrimitive + Debug {
    /// Coordinates at or below this are treated as zero.
    fn drop_tolerance() -> Self;
    /// Allowed deviation of the coordinate sum from one.
    fn sum_tolerance() -> Self;
}

impl Scalar for f64 {
    fn drop_tolerance() -> Self {
        1e-12
    }

    fn sum_tolerance() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    fn drop_tolerance() -> Self {
        1e-6
    }

    fn sum_tolerance() -> Self {
        1e-5
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealPoint<T> {
    carrier: Chain,
    coords: Vec<T>,
}

impl<T: Scalar> RealPoint<T> {
    pub fn carrier(&self) -> &Chain {
        &self.carrier
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    /// The vertex `p` as a point.
    pub fn vertex(p: usize) -> Self {
        RealPoint {
            carrier: Chain(vec![p]),
            coords: vec![T::one()],
        }
    }

    /// Coordinates along a chain containing the carrier, zero elsewhere.
    pub fn coords_on(&self, chain: &Chain) -> Option<Vec<T>> {
        let pos = self.carrier.positions_in(chain)?;
        let mut out = vec![T::zero(); chain.len()];
        for (i, &p) in pos.iter().enumerate() {
            out[p] = self.coords[i];
        }
        Some(out)
    }

    pub fn sum(&self) -> T {
        self.coords.iter().fold(T::zero(), |a, &b| a + b)
    }
}

fn to_f64<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Drops (near-)zero coordinates with their vertices and renormalizes when
/// the sum is off by more than rounding noise.
pub fn canonicalize<T: Scalar>(chain: &Chain, coords: &[T]) -> Result<RealPoint<T>> {
    if chain.len() != coords.len() {
        return Err(Error::InvalidInput(format!(
            "{} coordinates for a chain of {}",
            coords.len(),
            chain.len()
        )));
    }
    let drop = T::drop_tolerance();
    if let Some(&c) = coords.iter().find(|&&c| c < -drop || c.is_nan()) {
        return Err(Error::NegativeCoordinate(to_f64(c)));
    }
    let sum = coords.iter().fold(T::zero(), |a, &b| a + b);
    if (sum - T::one()).abs() > T::sum_tolerance() {
        return Err(Error::SumOutOfTolerance(to_f64(sum)));
    }
    let mut vs = Vec::with_capacity(coords.len());
    let mut cs = Vec::with_capacity(coords.len());
    for (&v, &c) in chain.vertices().iter().zip(coords) {
        if c > drop {
            vs.push(v);
            cs.push(c);
        }
    }
    let kept = cs.iter().fold(T::zero(), |a, &b| a + b);
    let noise = T::epsilon() * T::from_usize(4 * cs.len().max(1)).unwrap();
    if (kept - T::one()).abs() > noise {
        for c in &mut cs {
            *c = *c / kept;
        }
    }
    Ok(RealPoint {
        carrier: Chain(vs),
        coords: cs,
    })
}

/// `φ_P`: the last vertex of the carrier.
pub fn phi_p<T: Scalar>(pt: &RealPoint<T>) -> usize {
    pt.carrier.last()
}

/// Positions of `psi` whose element lies in `targets`.
pub fn index_set(psi: &Chain, targets: &Chain) -> Vec<usize> {
    psi.vertices()
        .iter()
        .enumerate()
        .filter(|(_, p)| targets.contains(**p))
        .map(|(i, _)| i)
        .collect()
}

/// `H^ψ(pt, s)`: mass off `targets` is scaled by `1 - s` and moved
/// proportionally onto the coordinates over `targets`.
pub fn lemma217_homotopy<T: Scalar>(psi: &Chain, targets: &Chain, pt: &RealPoint<T>, s: T) -> Result<RealPoint<T>> {
    if !(s >= T::zero() && s <= T::one()) {
        return Err(Error::PreconditionViolated(format!("s = {} outside [0, 1]", to_f64(s))));
    }
    if !targets.contains(phi_p(pt)) {
        return Err(Error::PreconditionViolated("phi_P of the point is not a target".into()));
    }
    let t = pt
        .coords_on(psi)
        .ok_or_else(|| Error::PreconditionViolated("carrier is not contained in psi".into()))?;
    let inside = index_set(psi, targets);
    let mut on = T::zero();
    let mut off = T::zero();
    for (i, &ti) in t.iter().enumerate() {
        if inside.contains(&i) {
            on = on + ti;
        } else {
            off = off + ti;
        }
    }
    assert!(on > T::zero(), "the last positive coordinate lies over a target");
    let grow = T::one() + s * off / on;
    let out: Vec<T> = t
        .iter()
        .enumerate()
        .map(|(i, &ti)| {
            if inside.contains(&i) {
                ti * grow
            } else {
                ti * (T::one() - s)
            }
        })
        .collect();
    canonicalize(psi, &out)
}

/// A uniformly random point with the given carrier.
pub fn random_interior<T: Scalar>(carrier: &Chain, rng: &mut impl Rng) -> RealPoint<T> {
    let w: Vec<f64> = (0..carrier.len()).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    let coords: Vec<T> = w.iter().map(|x| T::from_f64(x / total).unwrap()).collect();
    canonicalize(carrier, &coords).expect("normalized weights")
}

/// A random non-empty subchain of `chain`, optionally forced to end at `last`.
pub fn random_subchain(chain: &Chain, last: Option<usize>, rng: &mut impl Rng) -> Chain {
    let vs = chain.vertices();
    match last.and_then(|l| vs.iter().position(|&v| v == l)) {
        Some(end) => {
            let mut out: Vec<usize> = vs[..end].iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
            out.push(vs[end]);
            Chain(out)
        }
        None => {
            let out: Vec<usize> = vs.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
            if out.is_empty() {
                Chain(vec![vs[rng.gen_range(0..vs.len())]])
            } else {
                Chain(out)
            }
        }
    }
}

/// Largest deviation found between `H^μ` and `H^ψ` on points of `‖Δ^μ‖`.
#[derive(Clone, Debug, PartialEq)]
pub struct GlueReport {
    pub samples: usize,
    pub max_deviation: f64,
}

/// Compares `H^μ` and `H^ψ` on random points of `‖Δ^μ‖`, each with a random
/// target chain containing its `φ_P`.
pub fn lemma217_glue_check<T: Scalar>(
    base: &Poset,
    mu: &Chain,
    psi: &Chain,
    samples: usize,
    rng: &mut impl Rng,
) -> Result<GlueReport> {
    if !mu.is_subchain_of(psi) {
        return Err(Error::NotASubchain(base.chain_name(mu), base.chain_name(psi)));
    }
    let chains = base.chains();
    let mut max_deviation = 0.0f64;
    for k in 0..samples {
        let carrier = random_subchain(mu, None, rng);
        let x = random_interior::<T>(&carrier, rng);
        let through: Vec<&Chain> = chains.iter().filter(|c| c.contains(phi_p(&x))).collect();
        let targets = through[rng.gen_range(0..through.len())];
        let s = sample_s::<T>(k, rng);
        let a = lemma217_homotopy(mu, targets, &x, s)?
            .coords_on(psi)
            .expect("within mu");
        let b = lemma217_homotopy(psi, targets, &x, s)?
            .coords_on(psi)
            .expect("within psi");
        let dev = a
            .iter()
            .zip(&b)
            .map(|(u, v)| to_f64((*u - *v).abs()))
            .fold(0.0, f64::max);
        if dev > to_f64(T::sum_tolerance()) {
            return Err(Error::GlueMismatch {
                deviation: dev,
                sample: format!("{} {:?} s={}", base.chain_name(&carrier), x.coords, to_f64(s)),
            });
        }
        max_deviation = max_deviation.max(dev);
    }
    Ok(GlueReport { samples, max_deviation })
}

fn sample_s<T: Scalar>(k: usize, rng: &mut impl Rng) -> T {
    match k % 10 {
        0 => T::zero(),
        1 => T::one(),
        _ => T::from_f64(rng.gen::<f64>()).unwrap(),
    }
}

/// Aggregate of the pointwise checks on `H^ψ` over every pair `μ ⊆ ψ`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomotopySuite {
    pub pairs: usize,
    pub samples: usize,
    pub max_sum_error: f64,
    pub max_glue_deviation: f64,
    pub phi_preserved: bool,
    pub endpoints_hold: bool,
}

impl HomotopySuite {
    pub fn passed(&self) -> bool {
        self.phi_preserved && self.endpoints_hold && self.max_sum_error <= 1e-9 && self.max_glue_deviation <= 1e-9
    }
}

/// Runs `samples` points per chain pair: coordinate sums, preservation of
/// `φ_P`, the endpoints `s = 0, 1`, and agreement of `H^μ` with `H^ψ`.
pub fn lemma217_suite(base: &Poset, samples: usize, rng: &mut impl Rng) -> Result<HomotopySuite> {
    let chains = base.chains();
    let mut suite = HomotopySuite {
        pairs: 0,
        samples: 0,
        max_sum_error: 0.0,
        max_glue_deviation: 0.0,
        phi_preserved: true,
        endpoints_hold: true,
    };
    for (mu, psi) in base.chain_inclusions() {
        suite.pairs += 1;
        for k in 0..samples {
            let carrier = random_subchain(&mu, None, rng);
            let x = random_interior::<f64>(&carrier, rng);
            let through: Vec<&Chain> = chains.iter().filter(|c| c.contains(phi_p(&x))).collect();
            let targets = through[rng.gen_range(0..through.len())];
            let s = sample_s::<f64>(k, rng);
            let y = lemma217_homotopy(&psi, targets, &x, s)?;
            suite.samples += 1;
            suite.max_sum_error = suite.max_sum_error.max((y.sum() - 1.0).abs());
            suite.phi_preserved &= phi_p(&y) == phi_p(&x) && y.coords.iter().all(|&c| c > 0.0);
            if s == 0.0 {
                suite.endpoints_hold &= y == x;
            }
            if s == 1.0 {
                suite.endpoints_hold &= y
                    .carrier
                    .vertices()
                    .iter()
                    .all(|&p| psi.contains(p) && targets.contains(p));
            }
        }
        let g = lemma217_glue_check::<f64>(base, &mu, &psi, samples, rng)?;
        suite.max_glue_deviation = suite.max_glue_deviation.max(g.max_deviation);
    }
    Ok(suite)
}

/// A self-map of `‖Δ^φ‖` known on finitely many points.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledMap<T> {
    pub chain: Chain,
    pub samples: Vec<(RealPoint<T>, RealPoint<T>)>,
}

impl<T: Scalar> SampledMap<T> {
    /// Checks that every sample lies in `‖Δ^φ‖` and preserves `φ_P`.
    pub fn validate(&self) -> Result<()> {
        for (k, (x, y)) in self.samples.iter().enumerate() {
            if !x.carrier.is_subchain_of(&self.chain) || !y.carrier.is_subchain_of(&self.chain) || phi_p(x) != phi_p(y)
            {
                return Err(Error::NotFiltered(k));
            }
        }
        Ok(())
    }

    pub fn get(&self, x: &RealPoint<T>) -> Option<&RealPoint<T>> {
        self.samples.iter().find(|(a, _)| a == x).map(|(_, b)| b)
    }
}

/// `s f(t) + (1 - s) t`.
pub fn lemma218_contraction<T: Scalar>(f: &SampledMap<T>, pt: &RealPoint<T>, s: T) -> Result<RealPoint<T>> {
    f.validate()?;
    if !(s >= T::zero() && s <= T::one()) {
        return Err(Error::PreconditionViolated(format!("s = {} outside [0, 1]", to_f64(s))));
    }
    let fx = f
        .get(pt)
        .ok_or_else(|| Error::PreconditionViolated("point is not a sample of f".into()))?;
    if s == T::zero() {
        return Ok(pt.clone());
    }
    if s == T::one() {
        return Ok(fx.clone());
    }
    let a = pt
        .coords_on(&f.chain)
        .ok_or_else(|| Error::PreconditionViolated("point outside the simplex".into()))?;
    let b = fx.coords_on(&f.chain).expect("validated");
    let out: Vec<T> = a.iter().zip(&b).map(|(&x, &y)| s * y + (T::one() - s) * x).collect();
    canonicalize(&f.chain, &out)
}

/// A random filtered sampled self-map of `‖Δ^φ‖` with at most `count`
/// distinct sample points.
pub fn random_sampled_map<T: Scalar>(chain: &Chain, count: usize, rng: &mut impl Rng) -> SampledMap<T> {
    let mut samples: Vec<(RealPoint<T>, RealPoint<T>)> = Vec::with_capacity(count);
    for _ in 0..count {
        let x = random_interior::<T>(&random_subchain(chain, None, rng), rng);
        let y = random_interior::<T>(&random_subchain(chain, Some(phi_p(&x)), rng), rng);
        if samples.iter().all(|(a, _)| *a != x) {
            samples.push((x, y));
        }
    }
    SampledMap {
        chain: chain.clone(),
        samples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn canonical_forms() {
        let c = Chain(vec![0, 1]);
        let p = canonicalize(&c, &[1.0, 0.0]).unwrap();
        assert_eq!(p.carrier(), &Chain(vec![0]));
        assert_eq!(phi_p(&p), 0);
        let q = canonicalize(&c, &[0.3, 0.7]).unwrap();
        assert_eq!(q.coords(), &[0.3, 0.7]);
        assert_eq!(phi_p(&q), 1);
        let r = canonicalize(&c, &[0.5, 0.5 + 5e-10]).unwrap();
        assert!((r.sum() - 1.0).abs() < 1e-15);
        assert!(matches!(
            canonicalize(&c, &[-0.1, 1.1]),
            Err(Error::NegativeCoordinate(_))
        ));
        assert!(matches!(
            canonicalize(&c, &[0.5, 0.6]),
            Err(Error::SumOutOfTolerance(_))
        ));
    }

    #[test]
    fn homotopy_worked_example() {
        let psi = Chain(vec![0, 1]);
        let pt = canonicalize(&psi, &[0.5, 0.5]).unwrap();
        let y = lemma217_homotopy(&psi, &Chain(vec![1]), &pt, 1.0).unwrap();
        assert_eq!(y, RealPoint::vertex(1));
        let z = lemma217_homotopy(&psi, &Chain(vec![1]), &pt, 0.0).unwrap();
        assert_eq!(z, pt);
        let bad = lemma217_homotopy(&psi, &Chain(vec![0]), &pt, 0.5);
        assert!(matches!(bad, Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn f32_points() {
        let psi = Chain(vec![0, 1, 2]);
        let pt = canonicalize::<f32>(&psi, &[0.25, 0.25, 0.5]).unwrap();
        let y = lemma217_homotopy(&psi, &Chain(vec![0, 2]), &pt, 0.5f32).unwrap();
        assert!((y.sum() - 1.0).abs() <= f32::sum_tolerance());
        assert_eq!(phi_p(&y), 2);
    }

    #[test]
    fn contraction_endpoints() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let chain = Chain(vec![0, 1, 2]);
        let f = random_sampled_map::<f64>(&chain, 20, &mut rng);
        for (x, fx) in &f.samples {
            assert_eq!(&lemma218_contraction(&f, x, 0.0).unwrap(), x);
            assert_eq!(&lemma218_contraction(&f, x, 1.0).unwrap(), fx);
            let m = lemma218_contraction(&f, x, 0.5).unwrap();
            assert_eq!(phi_p(&m), phi_p(x));
        }
        let mut g = f.clone();
        g.samples[3].1 = RealPoint::vertex(if phi_p(&g.samples[3].0) == 0 { 1 } else { 0 });
        assert_eq!(
            lemma218_contraction(&g, &g.samples[0].0.clone(), 0.5),
            Err(Error::NotFiltered(3))
        );
    }

    #[test]
    fn glue_on_total_order() {
        let p = Poset::total_order(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let suite = lemma217_suite(&p, 50, &mut rng).unwrap();
        assert!(suite.passed(), "{suite:?}");
    }

    #[test]
    fn random_subchains_reach_every_subchain() {
        let chain = Chain(vec![0, 1, 2]);
        let mut r = crate::gen::rng(4);
        let seen: std::collections::HashSet<Chain> = (0..400).map(|_| random_subchain(&chain, None, &mut r)).collect();
        assert_eq!(seen.len(), 7);
        let ending: std::collections::HashSet<Chain> =
            (0..200).map(|_| random_subchain(&chain, Some(1), &mut r)).collect();
        assert_eq!(ending, [Chain(vec![1]), Chain(vec![0, 1])].into_iter().collect());
    }
}
