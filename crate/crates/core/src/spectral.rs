//! Dense symmetric eigensolver (cyclic Jacobi), normalized graph Laplacian,
//! spectral gap, exact Cheeger constants, and the perturbation chain that
//! controls the gap of a graph with a few edges deleted.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Graph, IncidenceGraph};

/// Eigenvalues below this count as zero when locating the spectral gap.
pub const ZERO_THRESHOLD: f64 = 1e-8;
/// Exhaustive Cheeger scan cap.
pub const CHEEGER_CAP: usize = 22;
const MAX_SWEEPS: usize = 64;

/// Symmetric matrix stored as the upper triangle, row major.
#[derive(Clone, Debug)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        SymmetricMatrix { n, data: vec![0.0; n * (n + 1) / 2] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.n - i * (i + 1) / 2 + j
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[self.idx(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = SymmetricMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }
}

/// Spectrum summary; `lambda0` is the smallest eigenvalue above the zero
/// threshold and `residual` the largest ||Av - lambda v||_2 over all pairs.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub n: usize,
    pub eigenvalues: Vec<f64>,
    pub zero_multiplicity: usize,
    pub lambda0: f64,
    pub residual: f64,
    pub threshold: f64,
}

/// Cyclic Jacobi: sweeps of plane rotations until every off-diagonal entry is
/// below `tol`. Returns eigenvalues ascending plus the eigenvector columns.
pub fn jacobi(m: &SymmetricMatrix, tol: f64) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = m.n();
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let mut a = m.to_dense();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let mut sweeps = 0;
    loop {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                off = off.max(a[i][j].abs());
            }
        }
        if off < tol {
            break;
        }
        if sweeps >= MAX_SWEEPS {
            return Err(Error::NoConvergence(sweeps));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq.abs() < tol * 1e-3 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let app = a[p][p];
                let aqq = a[q][q];
                a[p][p] = app - t * apq;
                a[q][q] = aqq + t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for r in 0..n {
                    if r != p && r != q {
                        let arp = a[r][p];
                        let arq = a[r][q];
                        a[r][p] = arp - s * (arq + tau * arp);
                        a[p][r] = a[r][p];
                        a[r][q] = arq + s * (arp - tau * arq);
                        a[q][r] = a[r][q];
                    }
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = vp - s * (vq + tau * vp);
                    row[q] = vq + s * (vp - tau * vq);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].partial_cmp(&a[j][j]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i][i]).collect();
    let vectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&col| (0..n).map(|row| v[row][col]).collect())
        .collect();
    Ok((eigenvalues, vectors))
}

/// Eigenvalues only; skips accumulating the rotation product.
pub fn jacobi_values(m: &SymmetricMatrix, tol: f64) -> Result<Vec<f64>> {
    let n = m.n();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a = m.to_dense();
    let mut sweeps = 0;
    loop {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                off = off.max(a[i][j].abs());
            }
        }
        if off < tol {
            break;
        }
        if sweeps >= MAX_SWEEPS {
            return Err(Error::NoConvergence(sweeps));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq.abs() < tol * 1e-3 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let app = a[p][p];
                let aqq = a[q][q];
                a[p][p] = app - t * apq;
                a[q][q] = aqq + t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for r in 0..n {
                    if r != p && r != q {
                        let arp = a[r][p];
                        let arq = a[r][q];
                        a[r][p] = arp - s * (arq + tau * arp);
                        a[p][r] = a[r][p];
                        a[r][q] = arq + s * (arp - tau * arq);
                        a[q][r] = a[r][q];
                    }
                }
            }
        }
    }
    let mut eigenvalues: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eigenvalues.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(eigenvalues)
}

/// Full spectrum with the residual check.
pub fn eig_sym(m: &SymmetricMatrix, tol: f64) -> Result<SpectralReport> {
    let (eigenvalues, vectors) = jacobi(m, tol)?;
    let n = m.n();
    let mut residual = 0.0f64;
    for (lam, vec) in eigenvalues.iter().zip(&vectors) {
        let mut norm2 = 0.0;
        for i in 0..n {
            let mut av = 0.0;
            for j in 0..n {
                av += m.get(i, j) * vec[j];
            }
            let r = av - lam * vec[i];
            norm2 += r * r;
        }
        residual = residual.max(norm2.sqrt());
    }
    let zero_multiplicity = eigenvalues.iter().take_while(|&&l| l < ZERO_THRESHOLD).count();
    let lambda0 = eigenvalues
        .iter()
        .copied()
        .find(|&l| l >= ZERO_THRESHOLD)
        .unwrap_or(f64::NAN);
    Ok(SpectralReport { n, eigenvalues, zero_multiplicity, lambda0, residual, threshold: ZERO_THRESHOLD })
}

/// Delta = I - D^{-1/2} A_0 D^{-1/2} with weighted degrees.
pub fn normalized_laplacian(g: &Graph) -> Result<SymmetricMatrix> {
    if let Some(v) = g.has_isolated_vertex() {
        return Err(Error::IsolatedVertex(v));
    }
    let n = g.vertex_count();
    let deg: Vec<f64> = (0..n).map(|v| g.degree(v) as f64).collect();
    let mut m = SymmetricMatrix::zeros(n);
    for i in 0..n {
        m.set(i, i, 1.0);
        for &(j, mult) in g.neighbors(i) {
            if i < j {
                m.set(i, j, -(mult as f64) / (deg[i] * deg[j]).sqrt());
            }
        }
    }
    Ok(m)
}

/// Smallest nonzero eigenvalue of the normalized Laplacian of a connected
/// graph. Disconnected inputs are an error: the gap is then ill-posed for the
/// local spectral criterion.
pub fn lambda0(g: &Graph) -> Result<f64> {
    let lap = normalized_laplacian(g)?;
    let eigs = jacobi_values(&lap, 1e-12)?;
    lambda0_from_eigs(&eigs)
}

fn lambda0_from_eigs(eigs: &[f64]) -> Result<f64> {
    let zero_mult = eigs.iter().take_while(|&&l| l < ZERO_THRESHOLD).count();
    if zero_mult != 1 {
        return Err(Error::Disconnected(zero_mult));
    }
    Ok(eigs[1])
}

/// Spectral report for a graph's normalized Laplacian.
pub fn graph_spectrum(g: &Graph) -> Result<SpectralReport> {
    eig_sym(&normalized_laplacian(g)?, 1e-12)
}

/// Gap of a bipartite incidence graph via the point-side Gram matrix of the
/// normalized adjacency block: the Laplacian spectrum is 1 -+ the singular
/// values, so only an N x N eigenproblem is needed. Must agree with
/// [`lambda0`] to solver accuracy.
pub fn lambda0_bipartite(g: &IncidenceGraph) -> Result<f64> {
    let left = g.left_count();
    let right = g.right_count();
    let deg = g.degrees();
    if let Some(v) = deg.iter().position(|&d| d == 0) {
        return Err(Error::IsolatedVertex(v));
    }
    // rows: points, cols: lines, normalized
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); left];
    for &(p, l) in g.edges() {
        let w = 1.0 / ((deg[p as usize] as f64) * (deg[left + l as usize] as f64)).sqrt();
        rows[p as usize].push((l as usize, w));
    }
    let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); right];
    for (p, row) in rows.iter().enumerate() {
        for &(l, w) in row {
            cols[l].push((p, w));
        }
    }
    // gram = A A^t on the point side
    let mut gram = SymmetricMatrix::zeros(left);
    for l in 0..right {
        for (ai, &(i, wi)) in cols[l].iter().enumerate() {
            for &(j, wj) in &cols[l][ai..] {
                let cur = gram.get(i, j);
                gram.set(i, j, cur + wi * wj);
            }
        }
    }
    let eigs = jacobi_values(&gram, 1e-13)?;
    // singular values of A, descending
    let mut sigmas: Vec<f64> = eigs.iter().rev().map(|&x| x.max(0.0).sqrt()).collect();
    // connectedness: sigma = 1 simple <=> zero eigenvalue of Delta simple
    let ones = sigmas.iter().take_while(|&&s| 1.0 - s < ZERO_THRESHOLD).count();
    if ones != 1 {
        return Err(Error::Disconnected(ones));
    }
    sigmas.remove(0);
    let gap_from_sigma = 1.0 - sigmas.first().copied().unwrap_or(0.0);
    // the lambda = 1 eigenvalues (kernel of A^t on the larger side) never beat
    // 1 - sigma_2 here since sigma_2 > 0 on our graphs
    Ok(gap_from_sigma)
}

/// Volume-normalized Cheeger ratio: boundary edges over the smaller
/// degree-volume. Exhaustive over all nonempty proper subsets.
pub fn cheeger_exact(g: &Graph) -> Result<(f64, Vec<usize>)> {
    let n = g.vertex_count();
    if n > CHEEGER_CAP {
        return Err(Error::CheegerCap(n, CHEEGER_CAP));
    }
    if n < 2 {
        return Err(Error::Disconnected(n));
    }
    let total_vol: u64 = (0..n).map(|v| g.degree(v)).sum();
    let edges = g.simple_edges();
    let mut best = f64::INFINITY;
    let mut witness = Vec::new();
    // vertex n-1 stays outside A: h(A) = h(complement)
    for mask in 1u64..(1 << (n - 1)) {
        let mut vol_a = 0u64;
        for v in 0..n - 1 {
            if mask >> v & 1 == 1 {
                vol_a += g.degree(v);
            }
        }
        let vol_b = total_vol - vol_a;
        let mut boundary = 0u64;
        for &(u, v, m) in &edges {
            let iu = u < n - 1 && mask >> u & 1 == 1;
            let iv = v < n - 1 && mask >> v & 1 == 1;
            if iu != iv {
                boundary += m as u64;
            }
        }
        let h = boundary as f64 / vol_a.min(vol_b) as f64;
        if h < best {
            best = h;
            witness = (0..n - 1).filter(|&v| mask >> v & 1 == 1).collect();
        }
    }
    Ok((best, witness))
}

#[derive(Clone, Debug, Serialize)]
pub struct Inequality {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Numerical check of the chain lambda0(G) <= 2 h(G') + delta/2 and
/// lambda0(G) <= 2 sqrt(2 lambda0(G')) + delta/2 for a subgraph G' missing at
/// most `n_removed` edges.
#[derive(Clone, Debug, Serialize)]
pub struct ChainCheckReport {
    pub applicable: bool,
    pub min_degree: u64,
    pub degree_requirement: f64,
    pub lambda0_g: f64,
    pub lambda0_gp: f64,
    /// exact Cheeger constant when the graph is small enough, otherwise the
    /// certified lower bound lambda0/2 (flagged by `h_exact`)
    pub h_gp: f64,
    pub h_exact: bool,
    pub cheeger_sum: Inequality,
    pub sqrt_chain: Inequality,
}

impl ChainCheckReport {
    pub fn passes(&self) -> bool {
        self.applicable && self.cheeger_sum.holds && self.sqrt_chain.holds
    }
}

pub fn cheeger_chain_check(
    g: &Graph,
    g_prime: &Graph,
    n_removed: u64,
    delta: f64,
) -> Result<ChainCheckReport> {
    let min_degree = (0..g.vertex_count()).map(|v| g.degree(v)).min().unwrap_or(0);
    let degree_requirement = 5.0 * n_removed as f64 / delta;
    let applicable = (min_degree as f64) >= degree_requirement;
    let lambda0_g = lambda0(g)?;
    let lambda0_gp = lambda0(g_prime)?;
    let (h_gp, h_exact) = if g_prime.vertex_count() <= CHEEGER_CAP {
        let (h, _) = cheeger_exact(g_prime)?;
        (h, true)
    } else {
        // easy Cheeger direction: h >= lambda0 / 2, so the first inequality
        // follows a fortiori when it holds for the bound
        (lambda0_gp / 2.0, false)
    };
    let cheeger_sum = Inequality {
        lhs: lambda0_g,
        rhs: 2.0 * h_gp + delta / 2.0,
        holds: lambda0_g <= 2.0 * h_gp + delta / 2.0,
    };
    let sqrt_chain = Inequality {
        lhs: lambda0_g,
        rhs: 2.0 * (2.0 * lambda0_gp).sqrt() + delta / 2.0,
        holds: lambda0_g <= 2.0 * (2.0 * lambda0_gp).sqrt() + delta / 2.0,
    };
    Ok(ChainCheckReport {
        applicable,
        min_degree,
        degree_requirement,
        lambda0_g,
        lambda0_gp,
        h_gp,
        h_exact,
        cheeger_sum,
        sqrt_chain,
    })
}
