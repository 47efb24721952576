//! Integral homology of the normalized chain complex and path components.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::simplicial::{SimplicialSet, Simplex};

/// A finitely generated abelian group `ℤ^rank ⊕ ⊕ ℤ/t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    pub rank: usize,
    /// Invariant factors `> 1`, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn zero() -> Self {
        AbelianGroup { rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup { rank, torsion: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

/// Nonzero invariant factors of an integer matrix (Smith normal form).
pub fn invariant_factors(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && pivot.map_or(true, |(pi, pj)| a[i][j].abs() < a[pi][pj].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                clean = false;
                let q = &a[i][t] / &a[t][t];
                for j in t..cols {
                    let d = &q * &a[t][j];
                    a[i][j] -= d;
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                clean = false;
                let q = &a[t][j] / &a[t][t];
                for i in t..rows {
                    let d = &q * &a[i][t];
                    a[i][j] -= d;
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_multiple_of(&a[t][t]));
            match bad {
                Some((i, _)) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out
}

/// Boundary matrix `C_n → C_{n-1}` on nondegenerate simplices.
fn boundary_matrix(x: &SimplicialSet, n: usize) -> Vec<Vec<BigInt>> {
    let mut m = vec![vec![BigInt::zero(); x.num_cells(n)]; x.num_cells(n - 1)];
    for c in x.cells_of_dim(n) {
        let s = Simplex::nondeg(c);
        for i in 0..=n {
            let f = x.face(&s, i);
            if f.is_degenerate() {
                continue;
            }
            let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            m[f.cell.idx()][c.idx()] += sign;
        }
    }
    m
}

/// Highest degree whose homology is determined by the known data
/// (`usize::MAX` for complete sets, `None` if not even `H_0` is).
pub fn homology_limit(x: &SimplicialSet) -> Option<usize> {
    if x.is_complete() {
        Some(usize::MAX)
    } else {
        x.trunc_dim().checked_sub(1)
    }
}

/// `H_0 … H_k` for `k = max_deg`, or fewer if `x` is truncated below
/// `max_deg + 1`.
pub fn homology(x: &SimplicialSet, max_deg: usize) -> Vec<AbelianGroup> {
    let Some(limit) = homology_limit(x) else { return Vec::new() };
    let top = limit.min(max_deg);
    let mut factors: Vec<Vec<BigInt>> = Vec::new();
    for n in 0..=top + 1 {
        if n == 0 || x.num_cells(n) == 0 || x.num_cells(n - 1) == 0 {
            factors.push(Vec::new());
        } else {
            factors.push(invariant_factors(boundary_matrix(x, n)));
        }
    }
    (0..=top)
        .map(|k| {
            let rank = x.num_cells(k) - factors[k].len() - factors[k + 1].len();
            let torsion = factors[k + 1].iter().filter(|t| !t.is_one()).cloned().collect();
            AbelianGroup { rank, torsion }
        })
        .collect()
}

/// Component representative of every vertex (smallest vertex index in its
/// class).
pub fn components(x: &SimplicialSet) -> Vec<usize> {
    let n = x.num_cells(0);
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], v: usize) -> usize {
        let mut r = v;
        while p[r] != r {
            r = p[r];
        }
        let mut v = v;
        while p[v] != r {
            let next = p[v];
            p[v] = r;
            v = next;
        }
        r
    }
    if x.cell_counts().len() > 1 {
        for e in x.cells_of_dim(1) {
            let vs = x.vertices_of(&Simplex::nondeg(e));
            let (a, b) = (find(&mut parent, vs[0]), find(&mut parent, vs[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    (0..n).map(|v| find(&mut parent, v)).collect()
}

/// Number of path components.
pub fn pi0(x: &SimplicialSet) -> usize {
    components(x).iter().enumerate().filter(|(v, r)| v == *r).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{make_generator, standard_simplex, Generator};

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    #[test]
    fn smith_form_of_small_matrices() {
        assert_eq!(invariant_factors(big(&[&[2, 4], &[6, 8]])), vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(invariant_factors(big(&[&[2, 0], &[0, 3]])), vec![BigInt::from(1), BigInt::from(6)]);
        assert!(invariant_factors(big(&[&[0, 0]])).is_empty());
    }

    #[test]
    fn simplex_and_circle() {
        let d3 = standard_simplex(3);
        assert_eq!(homology(&d3, 3), vec![AbelianGroup::free(1), AbelianGroup::zero(), AbelianGroup::zero(), AbelianGroup::zero()]);
        let b2 = make_generator(Generator::Boundary(2)).unwrap().sset;
        assert_eq!(homology(&b2, 1), vec![AbelianGroup::free(1), AbelianGroup::free(1)]);
        assert_eq!(pi0(&b2), 1);
        let b1 = make_generator(Generator::Boundary(1)).unwrap().sset;
        assert_eq!(pi0(&b1), 2);
        assert_eq!(pi0(&SimplicialSet::empty()), 0);
    }

    #[test]
    fn display_groups() {
        let g = AbelianGroup { rank: 2, torsion: vec![BigInt::from(2)] };
        assert_eq!(g.to_string(), "Z^2+Z/2");
        assert_eq!(AbelianGroup::zero().to_string(), "0");
    }
}
