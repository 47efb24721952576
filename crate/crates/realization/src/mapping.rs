//! The relative mapping path space `M_B(f)`, its deformation retraction, and
//! the lift formula against horn inclusions, with `B = |P|`.

use std::sync::Arc;

use num_traits::{One, Zero};
use strat_core::poset::{PString, Poset};
use strat_core::simplicial::{standard_simplex, CellId, SimplicialMap, Simplex};
use strat_core::stratified::{StratMap, StratSSet};

use crate::geom::{product_point, GeomPoint};
use crate::point::{barycentric_grid, unit_grid};
use crate::{RationalPoint, RealizationError, Q};

/// A path `[0,1] → U`, known by evaluation.
pub type Path<U> = Arc<dyn Fn(&Q) -> U + Send + Sync>;

/// A point `(x, γ)` of `M_B(f)`.
#[derive(Clone)]
pub struct MPoint<T, U> {
    pub x: T,
    pub path: Path<U>,
}

type Func<A, B> = Arc<dyn Fn(&A) -> B + Send + Sync>;

/// `f : T → U` over `B` with the structure maps of both sides.
#[derive(Clone)]
pub struct MappingPathSpace<T, U> {
    pub f: Func<T, U>,
    pub s_t: Func<T, RationalPoint>,
    pub s_u: Func<U, RationalPoint>,
}

impl<T, U> MappingPathSpace<T, U>
where
    T: Clone + PartialEq + Send + Sync + 'static,
    U: Clone + PartialEq + Send + Sync + 'static,
{
    /// `x ↦ (x, [t ↦ f(x)])`.
    pub fn i_f(&self, x: &T) -> MPoint<T, U> {
        let y = (self.f)(x);
        MPoint { x: x.clone(), path: Arc::new(move |_| y.clone()) }
    }

    /// Endpoint evaluation.
    pub fn q_f(&self, m: &MPoint<T, U>) -> U {
        (m.path)(&Q::one())
    }

    pub fn pr1(&self, m: &MPoint<T, U>) -> T {
        m.x.clone()
    }

    /// `((x, γ), s) ↦ (x, [t ↦ γ(st)])`.
    pub fn retraction(&self, m: &MPoint<T, U>, s: &Q) -> MPoint<T, U> {
        let g = m.path.clone();
        let s = s.clone();
        MPoint { x: m.x.clone(), path: Arc::new(move |t| g(&(&s * t))) }
    }

    /// `γ(0) = f(x)` and `s_U(γ(t)) = s_T(x)` at the sample times.
    pub fn contains(&self, m: &MPoint<T, U>, times: &[Q]) -> Result<(), String> {
        if (m.path)(&Q::zero()) != (self.f)(&m.x) {
            return Err("γ(0) ≠ f(x)".into());
        }
        let base = (self.s_t)(&m.x);
        for t in times {
            if (self.s_u)(&(m.path)(t)) != base {
                return Err(format!("base track moves at t = {t}"));
            }
        }
        Ok(())
    }
}

/// Whether two paths agree at the sample times.
pub fn same_path<U: PartialEq>(a: &Path<U>, b: &Path<U>, times: &[Q]) -> bool {
    times.iter().all(|t| a(t) == b(t))
}

impl MappingPathSpace<GeomPoint, GeomPoint> {
    /// `|f| : |T| → |U|` over `|P|`.
    pub fn simplicial(f: &StratMap) -> Self {
        let map = f.map().clone();
        let (src, tgt) = (f.source().clone(), f.target().clone());
        MappingPathSpace {
            f: Arc::new(move |x: &GeomPoint| x.apply(&map)),
            s_t: Arc::new(move |x: &GeomPoint| x.structure(&src)),
            s_u: Arc::new(move |y: &GeomPoint| y.structure(&tgt)),
        }
    }
}

/// Number of sample checks of one identity and how many failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tally {
    pub name: String,
    pub checked: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
}

impl Tally {
    pub(crate) fn new(name: &str) -> Self {
        Tally { name: name.to_string(), checked: 0, failed: 0, first_failure: None }
    }

    pub(crate) fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct MappingReport {
    pub samples: usize,
    pub tallies: Vec<Tally>,
}

impl MappingReport {
    pub fn ok(&self) -> bool {
        self.tallies.iter().all(|t| t.failed == 0 && t.checked > 0)
    }
}

/// Interior points of every nondegenerate cell, at the given density.
fn cell_samples(x: &StratSSet, density: usize) -> Vec<GeomPoint> {
    let t = x.total();
    let mut out = Vec::new();
    for c in t.all_cells() {
        for w in barycentric_grid(c.dim(), density) {
            if w.iter().all(|a| !a.is_zero()) {
                out.push(GeomPoint::new(t, &Simplex::nondeg(c), w).expect("grid point"));
            }
        }
    }
    out
}

/// Evaluates `i_f`, `q_f`, `pr₁` and the deformation retraction of
/// `M_B(f)` at sample points. Besides `i_f(x)` each sample carries the
/// straight paths in the fiber of `|U| → |P|` that move mass between two
/// vertices of `f(x)`'s cell with the same label.
pub fn mapping_path_factor(f: &StratMap, density: usize) -> MappingReport {
    let m = MappingPathSpace::simplicial(f);
    let times = unit_grid(density.max(2));
    let u = f.target().clone();
    let mut factor = Tally::new("f = q_f ∘ i_f");
    let mut section = Tally::new("pr1 ∘ i_f = id");
    let mut member = Tally::new("samples lie in M_B(f)");
    let mut start = Tally::new("retraction at s=0 is i_f ∘ pr1");
    let mut end = Tally::new("retraction at s=1 is id");
    let mut over = Tally::new("retraction stays in M_B(f) over B");
    let samples = cell_samples(f.source(), density);
    for x in &samples {
        let y = (m.f)(x);
        let i = m.i_f(x);
        factor.record(m.q_f(&i) == y, || x.display(f.source().total()));
        section.record(m.pr1(&i) == *x, || x.display(f.source().total()));
        let mut points = vec![i];
        let labels = u.labels_of(&Simplex::nondeg(y.cell()));
        for a in 0..labels.len() {
            for b in 0..labels.len() {
                if a == b || labels[a] != labels[b] {
                    continue;
                }
                let mut w = y.coords().to_vec();
                let half = &w[a] / Q::from_integer(2.into());
                w[a] -= &half;
                w[b] += &half;
                let y2 = GeomPoint::new(u.total(), &Simplex::nondeg(y.cell()), w).expect("moved mass");
                let (y1, total) = (y.clone(), u.total().clone());
                points.push(MPoint { x: x.clone(), path: Arc::new(move |t| y1.lerp(&y2, t, &total).expect("same cell")) });
            }
        }
        for p in &points {
            member.record(m.contains(p, &times).is_ok(), || x.display(f.source().total()));
            let base = m.i_f(&m.pr1(p));
            for s in &times {
                let r = m.retraction(p, s);
                over.record(m.contains(&r, &times).is_ok() && r.x == p.x, || format!("s = {s}"));
                if s.is_zero() {
                    start.record(same_path(&r.path, &base.path, &times), || x.display(f.source().total()));
                }
                if s.is_one() {
                    end.record(same_path(&r.path, &p.path, &times), || x.display(f.source().total()));
                }
            }
        }
    }
    MappingReport { samples: samples.len(), tallies: vec![factor, section, member, start, end, over] }
}

/// A retraction `r' : |Δ^n| → |Λ^n_k|`, a homotopy `H'` from `j r'` to the
/// identity fixing the horn, and `d'` with `d'^{-1}(0) = |Λ^n_k|`, on
/// barycentric coordinates.
pub trait RetractionData {
    fn n(&self) -> usize;
    fn k(&self) -> usize;
    fn r(&self, a: &[Q]) -> Vec<Q>;
    fn h(&self, a: &[Q], u: &Q) -> Vec<Q>;
    fn d(&self, a: &[Q]) -> Q;

    /// Whether `a` lies on a face `d_i`, `i ≠ k`.
    fn in_horn(&self, a: &[Q]) -> bool {
        (0..a.len()).any(|i| i != self.k() && a[i].is_zero())
    }
}

/// Pushes mass from the faces `i ≠ k` toward vertex `k` until one of them
/// is reached: `λ = min_{i≠k} a_i`, `r'(a) = a - λ(1,…,1) + (n+1)λ e_k`,
/// `H'(a,u) = (1-u) r'(a) + u a`, `d' = λ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HornRetraction {
    pub n: usize,
    pub k: usize,
}

impl HornRetraction {
    pub fn new(n: usize, k: usize) -> Result<Self, RealizationError> {
        if n == 0 || k > n {
            return Err(RealizationError::Precondition(format!("no horn Λ^{n}_{k}")));
        }
        Ok(HornRetraction { n, k })
    }

    fn lambda(&self, a: &[Q]) -> Q {
        (0..a.len()).filter(|&i| i != self.k).map(|i| a[i].clone()).min().expect("n ≥ 1")
    }
}

impl RetractionData for HornRetraction {
    fn n(&self) -> usize {
        self.n
    }

    fn k(&self) -> usize {
        self.k
    }

    fn r(&self, a: &[Q]) -> Vec<Q> {
        let l = self.lambda(a);
        let nl = &l * Q::from_integer((self.n as i64).into());
        a.iter().enumerate().map(|(i, t)| if i == self.k { t + &nl } else { t - &l }).collect()
    }

    fn h(&self, a: &[Q], u: &Q) -> Vec<Q> {
        self.r(a).iter().zip(a).map(|(x, y)| (Q::one() - u) * x + u * y).collect()
    }

    fn d(&self, a: &[Q]) -> Q {
        self.lambda(a)
    }
}

#[derive(Clone, Debug)]
pub struct LiftReport {
    pub n: usize,
    pub k: usize,
    pub tallies: Vec<Tally>,
}

impl LiftReport {
    pub fn ok(&self) -> bool {
        self.tallies.iter().all(|t| t.failed == 0 && t.checked > 0)
    }
}

/// Checks the retraction data, then evaluates the lift
///
/// `h̃_T = g_T ∘ r`, `h̃_U(a)(t) = g_U(r(a))(t(1+d(a)))` for `t ≤ 1/(1+d(a))`
/// and `h(H(a, (1+d(a))/d(a) · (t - 1/(1+d(a)))))` after,
///
/// on the prism `U = Σ ⋊ Δ^n` over `Σ = [m]`, with `f = id`,
/// `g(σ, λ) = ((σ, λ), t ↦ (σ, (1-t)λ + tφ(λ)))`, `h(σ, a) = (σ, φ(a))` and
/// `φ(a) = (a + e_0)/2`. Both triangles are checked at sample points.
pub fn lift_check(m: usize, data: &dyn RetractionData, density: usize) -> Result<LiftReport, RealizationError> {
    let (n, k) = (data.n(), data.k());
    let base = Arc::new(Poset::chain(m));
    let sigma = PString::new(&base, &(0..=m).collect::<Vec<_>>())?;
    let (u, prod) = StratSSet::string(base.clone(), &sigma).tensor(&Arc::new(standard_simplex(n)));
    let space = MappingPathSpace::simplicial(&StratMap::identity(u.clone()));
    let d_n = prod.right.clone();
    let left = prod.left.clone();
    let top_n = Simplex::nondeg(CellId::new(n, 0));
    let top_m = Simplex::nondeg(CellId::new(m, 0));
    let point = |s: &GeomPoint, a: &[Q]| product_point(&prod, s, &GeomPoint::new(&d_n, &top_n, a.to_vec()).expect("barycentric"));
    let phi = |a: &[Q]| -> Vec<Q> {
        let two = Q::from_integer(2.into());
        a.iter().enumerate().map(|(i, t)| (t + if i == 0 { Q::one() } else { Q::zero() }) / &two).collect()
    };
    let lerp = |a: &[Q], b: &[Q], t: &Q| -> Vec<Q> { a.iter().zip(b).map(|(x, y)| (Q::one() - t) * x + t * y).collect() };
    let g_t = |s: &GeomPoint, l: &[Q]| point(s, l);
    let g_u = |s: &GeomPoint, l: &[Q], t: &Q| point(s, &lerp(l, &phi(l), t));
    let h = |s: &GeomPoint, a: &[Q]| point(s, &phi(a));

    let times = unit_grid(density.max(2));
    let sigmas: Vec<GeomPoint> =
        barycentric_grid(m, density).into_iter().map(|w| GeomPoint::new(&left, &top_m, w).expect("grid")).collect();
    let simplex_pts = barycentric_grid(n, density);

    let mut r_in = Tally::new("r' lands in the horn");
    let mut r_fix = Tally::new("r' fixes the horn");
    let mut h_ends = Tally::new("H' runs from j r' to id");
    let mut h_fix = Tally::new("H' fixes the horn");
    let mut d_zero = Tally::new("d'^{-1}(0) is the horn");
    for a in &simplex_pts {
        let ra = data.r(a);
        r_in.record(data.in_horn(&ra), || format!("{a:?}"));
        if data.in_horn(a) {
            r_fix.record(ra == *a, || format!("{a:?}"));
            h_fix.record(times.iter().all(|u| data.h(a, u) == *a), || format!("{a:?}"));
        }
        h_ends.record(data.h(a, &Q::zero()) == ra && data.h(a, &Q::one()) == *a, || format!("{a:?}"));
        let d = data.d(a);
        d_zero.record(d >= Q::zero() && d <= Q::one() && (d.is_zero() == data.in_horn(a)), || format!("{a:?}"));
    }

    let mut given = Tally::new("q_f g = h on the horn");
    let mut member = Tally::new("lift lies in M_B(f)");
    let mut lower = Tally::new("q_f h̃ = h");
    let mut upper = Tally::new("h̃ restricted to the horn is g");
    let mut junction = Tally::new("lift is continuous at t = 1/(1+d)");
    for s in &sigmas {
        for a in &simplex_pts {
            if data.in_horn(a) {
                let mp = MPoint { x: g_t(s, a), path: path_of(&times, |t: &Q| g_u(s, a, t)) };
                given.record(space.q_f(&mp) == h(s, a), || format!("{a:?}"));
            }
            let ra = data.r(a);
            let d = data.d(a);
            let one_d = Q::one() + &d;
            let cut = Q::one() / &one_d;
            let ht = g_t(s, &ra);
            let hu = |t: &Q| -> GeomPoint {
                if *t <= cut {
                    g_u(s, &ra, &(t * &one_d))
                } else {
                    h(s, &data.h(a, &(&one_d / &d * (t - &cut))))
                }
            };
            let lift = MPoint { x: ht.clone(), path: path_of(&times, hu) };
            member.record(space.contains(&lift, &times).is_ok(), || format!("{a:?}"));
            lower.record(space.q_f(&lift) == h(s, a), || format!("{a:?}"));
            if d.is_zero() {
                let ok = ht == g_t(s, a) && times.iter().all(|t| (lift.path)(t) == g_u(s, a, t));
                upper.record(ok, || format!("{a:?}"));
            } else {
                junction.record(g_u(s, &ra, &Q::one()) == h(s, &data.h(a, &Q::zero())), || format!("{a:?}"));
            }
        }
    }
    Ok(LiftReport { n, k, tallies: vec![r_in, r_fix, h_ends, h_fix, d_zero, given, member, lower, upper, junction] })
}

/// Tabulates `f` at the sample times, since `f` borrows local data.
fn path_of<F: Fn(&Q) -> GeomPoint>(times: &[Q], f: F) -> Path<GeomPoint> {
    let table: Vec<(Q, GeomPoint)> = times.iter().cloned().map(|t| (t.clone(), f(&t))).collect();
    Arc::new(move |t: &Q| table.iter().find(|(s, _)| s == t).map(|(_, p)| p.clone()).expect("sample time on the grid"))
}

/// `f` applied pointwise, for callers that hold a simplicial map rather
/// than a stratified one.
pub fn realize(f: &SimplicialMap, p: &GeomPoint) -> GeomPoint {
    p.apply(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::q;

    #[test]
    fn identity_factorization() {
        let p = Arc::new(Poset::chain(1));
        let x = StratSSet::simplex(p, &[0, 0, 1]).unwrap();
        let r = mapping_path_factor(&StratMap::identity(x), 2);
        assert!(r.ok(), "{:?}", r.tallies);
        assert!(r.samples > 0);
    }

    #[test]
    fn constant_path_reduction() {
        let p = Arc::new(Poset::chain(1));
        let x = StratSSet::simplex(p, &[0, 1]).unwrap();
        let m = MappingPathSpace::simplicial(&StratMap::identity(x.clone()));
        let pt = GeomPoint::new(x.total(), &Simplex::nondeg(CellId::new(1, 0)), vec![q(1, 3), q(2, 3)]).unwrap();
        let i = m.i_f(&pt);
        let r = m.retraction(&i, &q(0, 1));
        assert!(same_path(&r.path, &i.path, &unit_grid(4)));
        assert_eq!(m.q_f(&i), pt);
    }

    #[test]
    fn standard_horn_retractions() {
        for n in 1..=3 {
            for k in 0..=n {
                let data = HornRetraction::new(n, k).unwrap();
                let r = lift_check(1, &data, 3).unwrap();
                assert!(r.ok(), "Λ^{n}_{k}: {:?}", r.tallies);
            }
        }
    }

    #[test]
    fn broken_retraction_is_caught() {
        struct Bad(HornRetraction);
        impl RetractionData for Bad {
            fn n(&self) -> usize {
                self.0.n
            }
            fn k(&self) -> usize {
                self.0.k
            }
            fn r(&self, a: &[Q]) -> Vec<Q> {
                a.to_vec()
            }
            fn h(&self, a: &[Q], _: &Q) -> Vec<Q> {
                a.to_vec()
            }
            fn d(&self, a: &[Q]) -> Q {
                self.0.d(a)
            }
        }
        let r = lift_check(1, &Bad(HornRetraction::new(2, 1).unwrap()), 2).unwrap();
        assert!(!r.ok());
    }
}
