//! Full-rank lattices over `F_q[x]`: reduced bases, volumes and exact
//! short-vector counts.

pub mod bounds;
pub mod linalg;
mod rlattice;

use rand::Rng;

use crate::algebra::{Degree, Fe, Poly, PolyRing};
use crate::error::{Error, Result};

pub use rlattice::{lambda_q_index_oracle, r_degree, RLattice};

/// Default enumeration cap for [`FqxLattice::count_short`].
pub const DEFAULT_BUDGET: u64 = 10_000_000;

pub type PolyVec = Vec<Poly>;

/// `max_i deg v_i`, `−∞` for the zero vector.
pub fn vector_degree(v: &[Poly]) -> Degree {
    v.iter().map(|c| c.degree()).max().unwrap_or(Degree::NegInfinity)
}

/// Which vectors [`FqxLattice::count_short`] counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    All,
    Nonzero,
    /// Primitive in the lattice: not `a·w` with `w ∈ Γ`, `deg a ≥ 1`.
    Primitive,
    /// `deg v_j ≤ bounds[j]` for every coordinate (negative bound: `v_j = 0`).
    PerCoordinate { bounds: Vec<i64>, primitive: bool },
}

#[derive(Clone, Debug)]
pub struct FqxLattice {
    ring: PolyRing,
    basis: Vec<PolyVec>,
    m: usize,
    reduced: bool,
    transform: Option<Vec<PolyVec>>,
}

fn lead(row: &[Poly]) -> Option<(usize, usize)> {
    let d = vector_degree(row).finite()?;
    let pos = (0..row.len()).rev().find(|&j| row[j].deg() == Some(d)).unwrap();
    Some((d, pos))
}

fn axpy(ring: &PolyRing, row: &mut [Poly], c: Fe, shift: usize, src: &[Poly]) {
    for (t, s) in row.iter_mut().zip(src) {
        if !s.is_zero() {
            *t = ring.sub(t, &ring.scale(c, &ring.shift(s, shift)));
        }
    }
}

/// Weak Popov form by leading-position cancellation; zero rows are dropped.
/// `track` receives the same row operations.
pub(crate) fn weak_popov(ring: &PolyRing, rows: &mut Vec<PolyVec>, mut track: Option<&mut Vec<PolyVec>>) {
    let f = ring.field().clone();
    loop {
        let leads: Vec<Option<(usize, usize)>> = rows.iter().map(|r| lead(r)).collect();
        let mut hit = None;
        'outer: for i in 0..rows.len() {
            let Some((di, pi)) = leads[i] else { continue };
            for j in i + 1..rows.len() {
                if let Some((dj, pj)) = leads[j] {
                    if pi == pj {
                        // reduce the higher-degree row; ties reduce the later row
                        hit = Some(if di > dj { (i, j, di - dj, pi) } else { (j, i, dj - di, pi) });
                        break 'outer;
                    }
                }
            }
        }
        let Some((t, s, shift, pos)) = hit else { break };
        let c = f.div(rows[t][pos].lc(), rows[s][pos].lc());
        let src = rows[s].clone();
        axpy(ring, &mut rows[t], c, shift, &src);
        if let Some(u) = track.as_deref_mut() {
            let src = u[s].clone();
            axpy(ring, &mut u[t], c, shift, &src);
        }
    }
    let keep: Vec<bool> = rows.iter().map(|r| lead(r).is_some()).collect();
    let mut k = keep.iter();
    rows.retain(|_| *k.next().unwrap());
    if let Some(u) = track {
        let mut k = keep.iter();
        u.retain(|_| *k.next().unwrap());
    }
}

fn poly_gcd_all(ring: &PolyRing, v: &[Poly]) -> Poly {
    v.iter().fold(Poly::zero(), |g, c| {
        if c.is_zero() {
            g
        } else if g.is_zero() {
            ring.monic(c)
        } else {
            ring.gcd(&g, c).unwrap()
        }
    })
}

impl FqxLattice {
    /// Lattice spanned by the rows of `basis`.
    pub fn new(ring: &PolyRing, basis: Vec<PolyVec>) -> Result<Self> {
        let n = basis.len();
        if n == 0 || basis.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter("basis must be a nonempty square matrix".into()));
        }
        let d = linalg::det(ring, &basis);
        let m = d.deg().ok_or(Error::Singular)?;
        Ok(FqxLattice {
            ring: ring.clone(),
            basis,
            m,
            reduced: false,
            transform: None,
        })
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
    pub fn basis(&self) -> &[PolyVec] {
        &self.basis
    }
    /// `m` with `vol = q^m`.
    pub fn volume_exponent(&self) -> usize {
        self.m
    }
    pub fn is_reduced(&self) -> bool {
        self.reduced
    }
    /// `U` with `reduced basis = U · original basis`, after [`Self::reduce_basis`].
    pub fn transform(&self) -> Option<&[PolyVec]> {
        self.transform.as_deref()
    }

    pub fn basis_degrees(&self) -> Vec<usize> {
        self.basis.iter().map(|b| vector_degree(b).finite().unwrap()).collect()
    }

    /// Reduced basis of the same lattice: `Σ deg b_i = m`.
    pub fn reduce_basis(&self) -> Result<FqxLattice> {
        if self.reduced {
            return Ok(self.clone());
        }
        let n = self.rank();
        let mut rows = self.basis.clone();
        let mut u: Vec<PolyVec> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Poly::one() } else { Poly::zero() }).collect())
            .collect();
        weak_popov(&self.ring, &mut rows, Some(&mut u));
        if rows.len() != n {
            return Err(Error::Singular);
        }
        let out = FqxLattice {
            ring: self.ring.clone(),
            basis: rows,
            m: self.m,
            reduced: true,
            transform: Some(u),
        };
        if out.basis_degrees().iter().sum::<usize>() != self.m {
            return Err(Error::Certification("reduced degrees do not sum to deg det".into()));
        }
        Ok(out)
    }

    /// `Σ c_i b_i`.
    pub fn combine(&self, c: &[Poly]) -> PolyVec {
        let r = &self.ring;
        let n = self.rank();
        let mut v = vec![Poly::zero(); n];
        for (ci, b) in c.iter().zip(&self.basis) {
            for j in 0..n {
                v[j] = r.add(&v[j], &r.mul(ci, &b[j]));
            }
        }
        v
    }

    /// Smallest degree of a nonzero vector (`μ`).
    pub fn first_minimum(&self) -> Result<usize> {
        Ok(*self.reduce_basis()?.basis_degrees().iter().min().unwrap())
    }

    /// Exact number of lattice vectors with `deg v ≤ s` under `constraint`.
    pub fn count_short(&self, s: i64, constraint: &Constraint, budget: u64) -> Result<u128> {
        if let Constraint::PerCoordinate { bounds, primitive } = constraint {
            return self.count_per_coordinate(bounds, *primitive, budget);
        }
        let red = self.reduce_basis()?;
        let q = self.ring.q() as u128;
        let exps: Vec<i64> = red.basis_degrees().iter().map(|&d| s - d as i64).collect();
        let total = exps
            .iter()
            .try_fold(1u128, |acc, &e| if e < 0 { Some(acc) } else { acc.checked_mul(q.checked_pow(e as u32 + 1)?) })
            .ok_or(Error::BudgetExceeded { limit: budget, needed: u128::MAX })?;
        match constraint {
            Constraint::All => Ok(total),
            Constraint::Nonzero => Ok(total - 1),
            Constraint::Primitive => {
                if total > budget as u128 {
                    return Err(Error::BudgetExceeded { limit: budget, needed: total });
                }
                Ok(red.enumerate_coeffs(&exps, |c| {
                    let g = poly_gcd_all(&self.ring, c);
                    !g.is_zero() && g.deg() == Some(0)
                }))
            }
            Constraint::PerCoordinate { .. } => unreachable!(),
        }
    }

    /// Counts coefficient tuples with `deg c_i ≤ exps[i]` satisfying `keep`.
    fn enumerate_coeffs(&self, exps: &[i64], mut keep: impl FnMut(&[Poly]) -> bool) -> u128 {
        let r = &self.ring;
        let sizes: Vec<u64> = exps
            .iter()
            .map(|&e| if e < 0 { 1 } else { r.q_pow(e as usize + 1).unwrap() })
            .collect();
        let total: u64 = sizes.iter().product();
        let mut count = 0u128;
        let mut c = vec![Poly::zero(); exps.len()];
        for idx in 0..total {
            let mut t = idx;
            for (i, &sz) in sizes.iter().enumerate() {
                c[i] = r.from_index(t % sz);
                t /= sz;
            }
            if keep(&c) {
                count += 1;
            }
        }
        count
    }

    /// Scales coordinate `j` by `x^{T − t_j}` so the box becomes a ball.
    fn count_per_coordinate(&self, bounds: &[i64], primitive: bool, budget: u64) -> Result<u128> {
        if bounds.len() != self.rank() {
            return Err(Error::InvalidParameter("one bound per coordinate".into()));
        }
        let t = *bounds.iter().max().unwrap();
        if t < 0 {
            return Ok(if primitive { 0 } else { 1 });
        }
        let r = &self.ring;
        let scaled: Vec<PolyVec> = self
            .basis
            .iter()
            .map(|b| {
                b.iter()
                    .zip(bounds)
                    .map(|(c, &tj)| r.shift(c, (t - tj) as usize))
                    .collect()
            })
            .collect();
        let lat = FqxLattice::new(r, scaled)?;
        let c = if primitive { Constraint::Primitive } else { Constraint::All };
        lat.count_short(t, &c, budget)
    }

    /// Brute-force count over all of `F_q[x]^n` in the box; test oracle.
    pub fn brute_force_count(&self, bounds: &[i64], primitive: bool) -> Result<u128> {
        let r = &self.ring;
        let n = self.rank();
        // membership: v = c·B with c polynomial ⇔ v·adj(B)/det integral
        let det = linalg::det(r, &self.basis);
        let adj = adjugate(r, &self.basis);
        let sizes: Vec<u64> = bounds
            .iter()
            .map(|&b| if b < 0 { 1 } else { r.q_pow(b as usize + 1).unwrap() })
            .collect();
        let total: u64 = sizes.iter().product();
        let mut count = 0u128;
        for idx in 0..total {
            let mut t = idx;
            let mut v = Vec::with_capacity(n);
            for &sz in &sizes {
                v.push(r.from_index(t % sz));
                t /= sz;
            }
            let mut coords = Vec::with_capacity(n);
            let mut member = true;
            for j in 0..n {
                let mut s = Poly::zero();
                for i in 0..n {
                    s = r.add(&s, &r.mul(&v[i], &adj[i][j]));
                }
                match r.div_exact(&s, &det) {
                    Some(c) => coords.push(c),
                    None => {
                        member = false;
                        break;
                    }
                }
            }
            if !member {
                continue;
            }
            if primitive {
                let g = poly_gcd_all(r, &coords);
                if g.is_zero() || g.deg() != Some(0) {
                    continue;
                }
            }
            count += 1;
        }
        Ok(count)
    }
}

/// `adj(B)` with `B · adj(B) = det(B) · I`.
pub fn adjugate(ring: &PolyRing, b: &[PolyVec]) -> Vec<PolyVec> {
    let n = b.len();
    let mut adj = vec![vec![Poly::zero(); n]; n];
    if n == 1 {
        adj[0][0] = Poly::one();
        return adj;
    }
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<PolyVec> = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| b[r][c].clone()).collect())
                .collect();
            let d = linalg::det(ring, &minor);
            adj[j][i] = if (i + j) % 2 == 0 { d } else { ring.neg(&d) };
        }
    }
    adj
}

/// `{(g, h) : h ≡ a g (mod Q)}` with basis `(1, a), (0, Q)`.
pub fn congruence_lattice(ring: &PolyRing, a: &Poly, q_mod: &Poly) -> Result<FqxLattice> {
    if q_mod.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !ring.gcd(a, q_mod)?.is_one() {
        return Err(Error::NotCoprime);
    }
    FqxLattice::new(ring, vec![vec![Poly::one(), a.clone()], vec![Poly::zero(), q_mod.clone()]])
}

/// Nonzero `(g, h)` with `deg g ≤ r`, `deg h ≤ s`, `h ≡ a g (mod Q)`; needs
/// `r + s ≥ deg Q − 1` so the linear map has a kernel.
pub fn small_solution(ring: &PolyRing, a: &Poly, q_mod: &Poly, r: usize, s: usize) -> Result<(Poly, Poly)> {
    let n = q_mod.deg().ok_or(Error::ZeroPolynomial)?;
    if r + s + 2 <= n {
        return Err(Error::InvalidParameter(format!(
            "need r + s ≥ deg Q − 1 (r = {r}, s = {s}, deg Q = {n})"
        )));
    }
    let f = ring.field();
    let ncols = r + s + 2;
    // column k < r+1: g = x^k ↦ −a x^k mod Q; column r+1+k: h = x^k ↦ x^k mod Q
    let mut rows = vec![vec![Fe::ZERO; ncols]; n];
    for k in 0..ncols {
        let img = if k <= r {
            ring.neg(&ring.rem(&ring.mul(a, &Poly::monomial(Fe::ONE, k)), q_mod))
        } else {
            ring.rem(&Poly::monomial(Fe::ONE, k - r - 1), q_mod)
        };
        for (i, row) in rows.iter_mut().enumerate() {
            row[k] = img.coeff(i);
        }
    }
    let ker = linalg::kernel(f, &rows, ncols);
    let v = ker.into_iter().next().ok_or(Error::Singular)?;
    let g = Poly::new(v[..=r].to_vec());
    let h = Poly::new(v[r + 1..].to_vec());
    Ok((g, h))
}

/// Uniform polynomial of degree `≤ maxdeg`.
pub fn random_poly(ring: &PolyRing, rng: &mut impl Rng, maxdeg: usize) -> Poly {
    let n = ring.q_pow(maxdeg + 1).expect("degree bound too large");
    ring.from_index(rng.gen_range(0..n))
}

/// Random full-rank lattice with entries of degree `≤ maxdeg` (singular draws are redrawn).
pub fn random_lattice(ring: &PolyRing, rng: &mut impl Rng, n: usize, maxdeg: usize) -> FqxLattice {
    loop {
        let b = (0..n)
            .map(|_| (0..n).map(|_| random_poly(ring, rng, maxdeg)).collect())
            .collect();
        if let Ok(l) = FqxLattice::new(ring, b) {
            return l;
        }
    }
}
