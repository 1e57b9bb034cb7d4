//! Eigenvalue clusters, root subspaces and Jordan chain structure.
//!
//! Eigenvalues come from a complex Schur form `A = Z T Z^H`. Root subspaces
//! are read off after reordering `T` with adjacent Givens swaps so that a
//! cluster occupies the leading diagonal block; chain lengths follow from the
//! singular-value ranks of powers of that block.

use std::cmp::Ordering;

use num_complex::Complex64;

use crate::error::{KreinError, Result};
use crate::linalg::{self, CMatrix};
use crate::operator::{self, Operator};
use crate::space::KreinVector;
use crate::tolerance::Tolerances;

/// A group of numerically coincident eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueCluster {
    /// Arithmetic mean of the members, snapped to the real axis when real.
    pub value: Complex64,
    pub multiplicity: usize,
    pub is_real: bool,
    /// Index of the conjugate cluster for non-real clusters.
    pub partner_index: Option<usize>,
    /// Positions of the members on the diagonal of the Schur factor.
    pub(crate) members: Vec<usize>,
}

/// Partition of an eigenvalue's algebraic multiplicity into chain lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanStructure {
    pub eigenvalue: Complex64,
    /// Non-increasing.
    pub chain_lengths: Vec<usize>,
    /// Ranks of `(A - λ)^k` on the root subspace, `k = 0, 1, ...` until zero.
    pub rank_sequence: Vec<usize>,
}

impl JordanStructure {
    pub fn max_chain(&self) -> usize {
        self.chain_lengths.first().copied().unwrap_or(0)
    }
}

/// Schur form plus the clustering of its diagonal.
#[derive(Debug, Clone)]
pub struct Spectrum {
    z: CMatrix,
    t: CMatrix,
    clusters: Vec<EigenvalueCluster>,
    scale: f64,
    tolerances: Tolerances,
}

impl Spectrum {
    pub fn analyze(a: &Operator, tol: &Tolerances) -> Result<Self> {
        tol.validate()?;
        let residual = operator::hermiticity_residual(a);
        if residual > tol.hermitian {
            return Err(KreinError::contract(format!(
                "operator is not pseudo-hermitian: residual {residual:e} exceeds {:e}",
                tol.hermitian
            )));
        }
        let scale = a.frobenius().max(1.0);
        let (z, t) = linalg::schur(a.matrix());
        let diag: Vec<Complex64> = (0..t.nrows()).map(|i| t[(i, i)]).collect();
        let groups = cluster_indices(&diag, scale, tol);
        let mut clusters: Vec<EigenvalueCluster> = groups
            .into_iter()
            .map(|members| {
                let mean = members.iter().map(|&i| diag[i]).sum::<Complex64>() / linalg::real(members.len() as f64);
                let is_real = mean.im.abs() <= tol.real_axis * scale;
                let value = if is_real { Complex64::new(mean.re, 0.0) } else { mean };
                EigenvalueCluster { value, multiplicity: members.len(), is_real, partner_index: None, members }
            })
            .collect();
        clusters.sort_by(|a, b| cluster_order(a.value, b.value));
        pair_conjugates(&mut clusters)?;
        Ok(Spectrum { z, t, clusters, scale, tolerances: *tol })
    }

    pub fn clusters(&self) -> &[EigenvalueCluster] {
        &self.clusters
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tolerances
    }

    /// Orthonormal basis of the root subspace of cluster `idx` together with
    /// the leading Schur block (the operator restricted to that basis).
    pub fn root_subspace(&self, idx: usize) -> Result<(CMatrix, CMatrix)> {
        let cluster = self.clusters.get(idx).ok_or_else(|| KreinError::input(format!("no cluster {idx}")))?;
        let mut t = self.t.clone();
        let mut z = self.z.clone();
        let n = t.nrows();
        // label[pos] = original diagonal position now sitting at pos
        let mut label: Vec<usize> = (0..n).collect();
        for target in 0..cluster.multiplicity {
            let from = (target..n)
                .find(|&p| cluster.members.contains(&label[p]))
                .ok_or_else(|| KreinError::numerical("lost a cluster member during Schur reordering"))?;
            for p in (target..from).rev() {
                swap_schur(&mut t, &mut z, p);
                label.swap(p, p + 1);
            }
        }
        let m = cluster.multiplicity;
        let basis = z.columns(0, m).into_owned();
        let block = t.view((0, 0), (m, m)).into_owned();
        Ok((basis, block))
    }

    pub fn jordan_structure(&self, idx: usize) -> Result<JordanStructure> {
        let (_, block) = self.root_subspace(idx)?;
        let lam = self.clusters[idx].value;
        let m = block.nrows();
        let q = &block - CMatrix::identity(m, m) * lam;
        let mut ranks = vec![m];
        let mut power = CMatrix::identity(m, m);
        let mut k = 0;
        while *ranks.last().unwrap() > 0 {
            k += 1;
            if k > m {
                return Err(KreinError::numerical(format!(
                    "(A - {lam})^{m} does not vanish on its root subspace; rank sequence {ranks:?} \
                     suggests merged eigenvalues, try a smaller cluster tolerance"
                )));
            }
            power = &power * &q;
            ranks.push(linalg::rank(&power, self.tolerances.rank * self.scale.powi(k as i32)));
        }
        chains_from_ranks(lam, &ranks)
    }
}

fn chains_from_ranks(lam: Complex64, ranks: &[usize]) -> Result<JordanStructure> {
    // at_least[k-1] = number of chains of length >= k
    let mut at_least = Vec::new();
    for w in ranks.windows(2) {
        if w[1] > w[0] {
            return Err(KreinError::numerical(format!("rank sequence {ranks:?} increases")));
        }
        at_least.push(w[0] - w[1]);
    }
    if at_least.windows(2).any(|w| w[1] > w[0]) {
        return Err(KreinError::numerical(format!(
            "rank sequence {ranks:?} has increasing differences; Jordan structure is numerically inconsistent"
        )));
    }
    let mut chain_lengths = Vec::new();
    for k in (1..=at_least.len()).rev() {
        let exactly = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        chain_lengths.extend(std::iter::repeat_n(k, exactly));
    }
    Ok(JordanStructure { eigenvalue: lam, chain_lengths, rank_sequence: ranks.to_vec() })
}

/// Ordering: real part descending, then imaginary part descending.
pub(crate) fn cluster_order(a: Complex64, b: Complex64) -> Ordering {
    b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im))
}

/// Transitive closure of two linking rules: plain proximity within
/// `cluster * scale`, and, for every eigenvalue and group size `m >= 2`, its
/// `m` nearest neighbours when they fit in a disc of radius
/// `defect^(1/m) * scale` around their mean.
fn cluster_indices(z: &[Complex64], scale: f64, tol: &Tolerances) -> Vec<Vec<usize>> {
    let n = z.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut c = i;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    let union = |p: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(p, a), find(p, b));
        if ra != rb {
            p[ra.max(rb)] = ra.min(rb);
        }
    };
    for i in 0..n {
        for j in (i + 1)..n {
            if (z[i] - z[j]).norm() <= tol.cluster * scale {
                union(&mut parent, i, j);
            }
        }
    }
    for i in 0..n {
        let mut near: Vec<usize> = (0..n).collect();
        near.sort_by(|&a, &b| (z[a] - z[i]).norm().total_cmp(&(z[b] - z[i]).norm()).then(a.cmp(&b)));
        for m in 2..=n {
            let group = &near[..m];
            let mean = group.iter().map(|&k| z[k]).sum::<Complex64>() / linalg::real(m as f64);
            let radius = group.iter().map(|&k| (z[k] - mean).norm()).fold(0.0, f64::max);
            if radius <= tol.defect.powf(1.0 / m as f64) * scale && splits_consistently(z, group, radius, scale) {
                for &k in group {
                    union(&mut parent, i, k);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    groups
}

/// A group of `m` eigenvalues is only one defective eigenvalue if its two
/// single-linkage halves are not much tighter than the group: a half of size
/// `p` and radius `ρ` reveals a perturbation level `(ρ/scale)^p`, which would
/// spread an `m`-fold eigenvalue over about `(ρ/scale)^(p/m) * scale`.
fn splits_consistently(z: &[Complex64], group: &[usize], radius: f64, scale: f64) -> bool {
    let m = group.len();
    if m < 3 {
        return true;
    }
    // Prim's tree; dropping its longest edge gives the single-linkage split
    let mut in_tree = vec![false; m];
    let mut best = vec![(f64::INFINITY, 0usize); m];
    let mut edges = Vec::with_capacity(m - 1);
    let mut cur = 0;
    in_tree[0] = true;
    for _ in 1..m {
        for j in 0..m {
            let d = (z[group[cur]] - z[group[j]]).norm();
            if !in_tree[j] && d < best[j].0 {
                best[j] = (d, cur);
            }
        }
        let next = (0..m).filter(|&j| !in_tree[j]).min_by(|&a, &b| best[a].0.total_cmp(&best[b].0)).unwrap();
        in_tree[next] = true;
        edges.push((best[next].0, best[next].1, next));
        cur = next;
    }
    let cut = (0..edges.len()).max_by(|&a, &b| edges[a].0.total_cmp(&edges[b].0)).unwrap();
    let mut side = vec![usize::MAX; m];
    side[0] = 0;
    let mut changed = true;
    while changed {
        changed = false;
        for (e, &(_, a, b)) in edges.iter().enumerate() {
            if e == cut {
                continue;
            }
            for (x, y) in [(a, b), (b, a)] {
                if side[x] != usize::MAX && side[y] == usize::MAX {
                    side[y] = side[x];
                    changed = true;
                }
            }
        }
    }
    for half in [0, usize::MAX] {
        let pts: Vec<Complex64> = (0..m).filter(|&j| side[j] == half).map(|j| z[group[j]]).collect();
        if pts.len() < 2 {
            continue;
        }
        let mean = pts.iter().sum::<Complex64>() / linalg::real(pts.len() as f64);
        let rho = pts.iter().map(|p| (p - mean).norm()).fold(0.0, f64::max);
        let predicted = (rho / scale).powf(pts.len() as f64 / m as f64) * scale;
        if radius > SPLIT_MARGIN * predicted {
            return false;
        }
    }
    true
}

const SPLIT_MARGIN: f64 = 4.0;

fn pair_conjugates(clusters: &mut [EigenvalueCluster]) -> Result<()> {
    let n = clusters.len();
    for i in 0..n {
        if clusters[i].is_real || clusters[i].value.im < 0.0 {
            continue;
        }
        let target = clusters[i].value.conj();
        let best = (0..n)
            .filter(|&j| !clusters[j].is_real && clusters[j].value.im < 0.0)
            .min_by(|&a, &b| (clusters[a].value - target).norm().total_cmp(&(clusters[b].value - target).norm()));
        let Some(j) = best else {
            return Err(KreinError::numerical(format!(
                "eigenvalue cluster {} has no conjugate partner; increase the cluster tolerance",
                clusters[i].value
            )));
        };
        if clusters[j].partner_index.is_some() || clusters[j].multiplicity != clusters[i].multiplicity {
            return Err(KreinError::numerical(format!(
                "eigenvalue cluster {} (multiplicity {}) pairs inconsistently with {} (multiplicity {}); \
                 increase the cluster tolerance",
                clusters[i].value, clusters[i].multiplicity, clusters[j].value, clusters[j].multiplicity
            )));
        }
        clusters[i].partner_index = Some(j);
        clusters[j].partner_index = Some(i);
    }
    if let Some(c) = clusters.iter().find(|c| !c.is_real && c.partner_index.is_none()) {
        return Err(KreinError::numerical(format!(
            "eigenvalue cluster {} has no conjugate partner; increase the cluster tolerance",
            c.value
        )));
    }
    Ok(())
}

/// Exchange diagonal entries `k` and `k + 1` of the upper-triangular `t`
/// with a Givens rotation, updating the Schur vectors `z`.
fn swap_schur(t: &mut CMatrix, z: &mut CMatrix, k: usize) {
    let n = t.nrows();
    let t11 = t[(k, k)];
    let t22 = t[(k + 1, k + 1)];
    let (cs, sn) = givens(t[(k, k + 1)], t22 - t11);
    // rows k, k+1 for columns beyond the block
    for j in (k + 2)..n {
        let (x, y) = (t[(k, j)], t[(k + 1, j)]);
        t[(k, j)] = x * cs + sn * y;
        t[(k + 1, j)] = y * cs - sn.conj() * x;
    }
    // columns k, k+1 for rows above the block
    let snc = sn.conj();
    for i in 0..k {
        let (x, y) = (t[(i, k)], t[(i, k + 1)]);
        t[(i, k)] = x * cs + snc * y;
        t[(i, k + 1)] = y * cs - snc.conj() * x;
    }
    t[(k, k)] = t22;
    t[(k + 1, k + 1)] = t11;
    for i in 0..n {
        let (x, y) = (z[(i, k)], z[(i, k + 1)]);
        z[(i, k)] = x * cs + snc * y;
        z[(i, k + 1)] = y * cs - snc.conj() * x;
    }
}

/// `(c, s)` with real `c` such that `[c s; -conj(s) c] [f; g] = [r; 0]`.
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    if g.norm() == 0.0 {
        return (1.0, linalg::ZERO);
    }
    if f.norm() == 0.0 {
        return (0.0, g.conj() / g.norm());
    }
    let norm = f.norm().hypot(g.norm());
    let phase = f / f.norm();
    (f.norm() / norm, phase * g.conj() / norm)
}

pub fn eigen_clusters(a: &Operator, tol: &Tolerances) -> Result<Vec<EigenvalueCluster>> {
    Ok(Spectrum::analyze(a, tol)?.clusters)
}

/// Jordan chain lengths of the cluster whose representative is closest to `lam`.
pub fn jordan_chains(a: &Operator, lam: Complex64, tol: &Tolerances) -> Result<JordanStructure> {
    let spec = Spectrum::analyze(a, tol)?;
    let idx = spec.nearest_cluster(lam)?;
    spec.jordan_structure(idx)
}

pub fn root_subspace_basis(a: &Operator, lam: Complex64, tol: &Tolerances) -> Result<Vec<KreinVector>> {
    let spec = Spectrum::analyze(a, tol)?;
    let idx = spec.nearest_cluster(lam)?;
    let (basis, block) = spec.root_subspace(idx)?;
    let residual = (a.matrix() * &basis - &basis * &block).norm();
    if residual > 1e-8 * spec.scale {
        return Err(KreinError::numerical(format!("root subspace is not invariant: residual {residual:e}")));
    }
    Ok(linalg::columns(&basis).into_iter().map(KreinVector).collect())
}

impl Spectrum {
    /// The cluster whose representative matches `lam` within the clustering radius.
    pub fn nearest_cluster(&self, lam: Complex64) -> Result<usize> {
        let (idx, dist) = self
            .clusters
            .iter()
            .enumerate()
            .map(|(i, c)| (i, (c.value - lam).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or_else(|| KreinError::input("operator has no eigenvalues"))?;
        let radius = self.tolerances.defect.powf(1.0 / self.clusters[idx].multiplicity.max(2) as f64);
        if dist > radius.max(self.tolerances.cluster) * self.scale {
            return Err(KreinError::input(format!(
                "{lam} is not an eigenvalue cluster representative (nearest {} at distance {dist:e})",
                self.clusters[idx].value
            )));
        }
        Ok(idx)
    }
}
