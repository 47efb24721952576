//! Grid sweeps of every formula over small posets, with one tally per
//! checked identity.

use std::sync::Arc;

use num_traits::{One, Zero};
use strat_core::poset::{all_strings, posets_up_to_iso, PString, Poset};
use strat_core::simplicial::{make_generator, Generator};
use strat_core::stratified::{StratMap, StratSSet};

use crate::mapping::{lift_check, mapping_path_factor, HornRetraction, Tally};
use crate::path::{path_contraction, PLPath};
use crate::point::{barycentric_grid, pi_realization, unit_grid};
use crate::retraction::{retraction_homotopy, Orientation};
use crate::{RationalPoint, RealizationError, Q};

/// Sample sizes for [`appendix_suite`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Posets with at most this many elements, one per isomorphism class.
    pub max_poset: usize,
    /// Largest denominator of barycentric sample points.
    pub density: usize,
    /// Largest denominator of the homotopy and path parameters `s`, `t`.
    pub time_density: usize,
    /// Largest denominator for the mapping path space and lift samples.
    pub mapping_density: usize,
    pub orientation: Orientation,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { max_poset: 4, density: 6, time_density: 3, mapping_density: 3, orientation: Orientation::Corrected }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub posets: usize,
    pub tallies: Vec<Tally>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.tallies.iter().all(|t| t.failed == 0 && t.checked > 0)
    }
}

fn points_on(carrier: &PString, density: usize) -> Vec<RationalPoint> {
    barycentric_grid(carrier.len() - 1, density)
        .into_iter()
        .map(|w| RationalPoint::new(carrier.clone(), w).expect("grid point"))
        .collect()
}

fn retraction_checks(p: &Poset, cfg: &SuiteConfig, times: &[Q], t: &mut [Tally; 5]) {
    let strings = all_strings(p);
    for sigma in &strings {
        for carrier in &strings {
            for x in points_on(carrier, cfg.density) {
                let pi = pi_realization(&x);
                if !sigma.contains(pi) {
                    continue;
                }
                let where_ = || format!("Σ={} x={}", sigma.display(p), x.display(p));
                let h = |s: &Q| retraction_homotopy(p, sigma, &x, s, cfg.orientation);
                let mut run = || -> Result<(), RealizationError> {
                    let h0 = h(&Q::zero())?;
                    t[0].record(h0 == x, where_);
                    let h1 = h(&Q::one())?;
                    t[1].record(h1.support().iter().all(|&i| sigma.contains(carrier.elems()[i])), where_);
                    for s in times {
                        let hs = h(s)?;
                        t[2].record(pi_realization(&hs) == pi, where_);
                        if x.support().len() < carrier.len() {
                            let face = x.to_support(p);
                            let small = retraction_homotopy(p, sigma, &face, s, cfg.orientation)?;
                            t[3].record(small.include(p, carrier)? == hs, where_);
                        }
                    }
                    Ok(())
                };
                if let Err(e) = run() {
                    t[4].record(false, || format!("{}: {e}", where_()));
                } else {
                    t[4].record(true, String::new);
                }
            }
        }
    }
}

fn path_checks(p: &Poset, cfg: &SuiteConfig, times: &[Q], t: &mut [Tally; 4]) {
    for carrier in all_strings(p) {
        let pts = points_on(&carrier, cfg.density);
        for x in &pts {
            for y in &pts {
                let (i, j) = (pi_realization(x), pi_realization(y));
                if carrier.position(i) > carrier.position(j) {
                    continue;
                }
                let where_ = || format!("x={} y={}", x.display(p), y.display(p));
                // bend through the midpoint of y and the vertex of its stratum
                let mut w = vec![Q::zero(); carrier.len()];
                w[carrier.position(j).expect("carrier")] = Q::one();
                let corner = RationalPoint::new(carrier.clone(), w).expect("vertex");
                let mid = y.lerp(&corner, &Q::new(1.into(), 2.into())).expect("same carrier");
                let half = Q::new(1.into(), 2.into());
                let gamma = PLPath::new(vec![(Q::zero(), x.clone()), (half, mid), (Q::one(), y.clone())]).expect("increasing");
                let straight = PLPath::segment(x, y).expect("distinct times");
                for s in times {
                    for u in times {
                        let Ok(h) = path_contraction(p, x, y, &gamma, s, u) else {
                            t[0].record(false, where_);
                            continue;
                        };
                        if u.is_zero() {
                            t[0].record(h == *x, where_);
                        } else if u.is_one() {
                            t[0].record(h == *y, where_);
                        } else {
                            t[1].record(pi_realization(&h) == j, where_);
                        }
                        if s.is_zero() {
                            t[2].record(h == gamma.eval(u).expect("unit time"), where_);
                        }
                        if s.is_one() {
                            t[3].record(h == straight.eval(u).expect("unit time"), where_);
                        }
                    }
                }
            }
        }
    }
}

/// Horn inclusions and identities of labelled simplices over the chain
/// `[2]`, `n ≤ 2`.
fn mapping_corpus() -> Vec<(String, StratMap)> {
    let base = Arc::new(Poset::chain(2));
    let mut out = Vec::new();
    for labels in [vec![0, 1], vec![0, 0], vec![0, 0, 1], vec![0, 1, 2], vec![0, 1, 1], vec![1, 1, 1]] {
        let n = labels.len() - 1;
        let x = StratSSet::simplex(base.clone(), &labels).expect("monotone");
        out.push((format!("id{labels:?}"), StratMap::identity(x.clone())));
        for k in 0..=n {
            let g = make_generator(Generator::Horn(n, k)).expect("valid horn");
            let hl = (0..g.sset.num_cells(0)).map(|v| x.label(g.inclusion.vertex_image(v))).collect();
            let horn = StratSSet::new(g.sset.clone(), base.clone(), hl).expect("restricted labels");
            out.push((format!("horn({n},{k}){labels:?}"), StratMap::new(horn, x.clone(), g.inclusion.clone()).expect("inclusion")));
        }
    }
    out
}

fn merge(into: &mut Tally, from: &Tally, prefix: &str) {
    into.checked += from.checked;
    into.failed += from.failed;
    if into.first_failure.is_none() {
        into.first_failure = from.first_failure.as_ref().map(|f| format!("{prefix}: {f}"));
    }
}

/// Runs every check on every poset with at most `max_poset` elements.
pub fn appendix_suite(cfg: &SuiteConfig) -> SuiteReport {
    let times = unit_grid(cfg.time_density);
    let mut r = [
        Tally::new("retraction: H(x,0) = x"),
        Tally::new("retraction: H(x,1) lies in |Σ|"),
        Tally::new("retraction: stratum constant in s"),
        Tally::new("retraction: compatible with face inclusions"),
        Tally::new("retraction: defined on the preimage"),
    ];
    let mut c = [
        Tally::new("contraction: endpoints fixed"),
        Tally::new("contraction: stratum of y for t > 0"),
        Tally::new("contraction: h(γ,0) = γ"),
        Tally::new("contraction: h(γ,1) is the straight path"),
    ];
    let mut posets = 0;
    for n in 1..=cfg.max_poset {
        for p in posets_up_to_iso(n) {
            posets += 1;
            retraction_checks(&p, cfg, &times, &mut r);
            path_checks(&p, cfg, &times, &mut c);
        }
    }
    let mut tallies: Vec<Tally> = r.into_iter().chain(c).collect();

    let mut factor: Vec<Tally> = Vec::new();
    for (name, f) in mapping_corpus() {
        let rep = mapping_path_factor(&f, cfg.mapping_density);
        if factor.is_empty() {
            factor = rep.tallies.iter().map(|t| Tally::new(&format!("mapping: {}", t.name))).collect();
        }
        for (into, from) in factor.iter_mut().zip(&rep.tallies) {
            merge(into, from, &name);
        }
    }
    tallies.extend(factor);

    let mut lift: Vec<Tally> = Vec::new();
    for m in 0..=1 {
        for n in 1..=2 {
            for k in 0..=n {
                let data = HornRetraction::new(n, k).expect("valid horn");
                let rep = lift_check(m, &data, cfg.mapping_density).expect("lift instance");
                if lift.is_empty() {
                    lift = rep.tallies.iter().map(|t| Tally::new(&format!("lift: {}", t.name))).collect();
                }
                for (into, from) in lift.iter_mut().zip(&rep.tallies) {
                    merge(into, from, &format!("m={m} horn({n},{k})"));
                }
            }
        }
    }
    tallies.extend(lift);
    SuiteReport { posets, tallies }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep_passes() {
        let cfg = SuiteConfig { max_poset: 2, density: 3, time_density: 2, mapping_density: 2, ..SuiteConfig::default() };
        let r = appendix_suite(&cfg);
        assert_eq!(r.posets, 3);
        assert!(r.ok(), "{:#?}", r.tallies.iter().filter(|t| t.failed > 0 || t.checked == 0).collect::<Vec<_>>());
    }

    #[test]
    fn printed_orientation_fails_the_sweep() {
        let cfg = SuiteConfig {
            max_poset: 2,
            density: 2,
            time_density: 2,
            mapping_density: 2,
            orientation: Orientation::Printed,
        };
        let r = appendix_suite(&cfg);
        assert!(!r.ok());
        assert!(r.tallies.iter().any(|t| t.name.starts_with("retraction") && t.failed > 0));
    }
}
