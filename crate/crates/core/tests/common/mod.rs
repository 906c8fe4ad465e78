//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use dynnet::{Edge, Topology};
use rand::Rng;

/// Dense Laplacian as nested vectors, built from scratch.
pub fn dense_laplacian(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<f64>> {
    let mut l = vec![vec![0.0; n]; n];
    for &(a, b) in edges {
        l[a][b] -= 1.0;
        l[b][a] -= 1.0;
        l[a][a] += 1.0;
        l[b][b] += 1.0;
    }
    l
}

/// Cyclic Jacobi rotations on a symmetric matrix; eigenvalues ascending.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum::<f64>().max(1.0);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigenratio from the Jacobi oracle; `None` when disconnected.
pub fn oracle_eigenratio(n: usize, edges: &[(usize, usize)]) -> Option<f64> {
    let ev = jacobi_eigenvalues(dense_laplacian(n, edges));
    (ev[1] > 1e-9).then(|| ev[n - 1] / ev[1])
}

/// Union-find connectivity, independent of the library's BFS.
pub fn oracle_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut parts = n;
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            parts -= 1;
        }
    }
    parts <= 1
}

/// All unordered pairs of `0..n` in a fixed order.
pub fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

/// Edges selected by the bits of `mask` over [`all_pairs`].
pub fn edges_from_mask(pairs: &[(usize, usize)], mask: u64) -> Vec<(usize, usize)> {
    pairs
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &p)| p)
        .collect()
}

pub fn topology(n: usize, edges: &[(usize, usize)]) -> Topology {
    Topology::from_edges(n, edges.iter().map(|&(a, b)| Edge::new(a, b))).unwrap()
}

/// Random connected graph: a random spanning tree plus each remaining pair
/// with probability `p`.
pub fn random_connected(n: usize, p: f64, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut edges: Vec<(usize, usize)> = (1..n)
        .map(|i| {
            let j = order[rng.random_range(0..i)];
            let a = order[i];
            (a.min(j), a.max(j))
        })
        .collect();
    for (a, b) in all_pairs(n) {
        if !edges.contains(&(a, b)) && rng.random::<f64>() < p {
            edges.push((a, b));
        }
    }
    edges
}

/// Relative difference with an absolute floor of 1.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}
