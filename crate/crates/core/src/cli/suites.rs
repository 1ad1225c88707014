//! The experiment bodies: each produces a [`Table`] of rows plus checks.

use std::collections::HashSet;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::Value;

use super::config::{ExperimentConfig, ExperimentKind, GSpec};
use super::record::Check;
use crate::algebra::{make_field, AdditiveChar, Fe, Poly, PolyRing, RationalFunction};
use crate::asfamilies::{
    character_of, check_factorization, l_function_as, squarefree_monics, twist_check, AsFunction,
    FamilyDescriptor, FamilyKind,
};
use crate::characters::CharGroup;
use crate::error::{Error, Result};
use crate::fqxlattice::{
    bounds, congruence_lattice, lambda_q_index_oracle, linalg, random_lattice, random_poly, vector_degree,
    Constraint, FqxLattice, RLattice, DEFAULT_BUDGET,
};
use crate::zerostats::{
    diagonal_chebotarev_count, mean_trace_formula, mean_trace_hg_formula, mean_trace_hg_twist_formula,
    mean_trace_product_formula, rmt_reference, trace_from_lambda, zeros, FamilyStats, RmtKind, DEFAULT_PSI_BUDGET,
};

/// Rows, per-row wall times and checks of one experiment.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub seconds: Vec<f64>,
    pub checks: Vec<Check>,
    /// Some row used a subsample.
    pub estimate: bool,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|s| s.to_string()).collect(), ..Default::default() }
    }
    fn push(&mut self, row: Vec<Value>, started: Instant) {
        self.rows.push(row);
        self.seconds.push(started.elapsed().as_secs_f64());
    }
}

fn cfg_poly_ring(cfg: &ExperimentConfig) -> Result<PolyRing> {
    Ok(PolyRing::new(make_field(cfg.p as u64, cfg.k as i64)?))
}

fn cfg_ring(cfg: &ExperimentConfig) -> Result<(PolyRing, AdditiveChar)> {
    Ok((cfg_poly_ring(cfg)?, AdditiveChar::new(cfg.p, cfg.psi)?))
}

/// The configured `g`, or the first monic squarefree polynomial of degree `deg`.
pub fn resolve_g(ring: &PolyRing, g: &GSpec, deg: usize) -> Result<Poly> {
    match g {
        GSpec::Auto => squarefree_monics(ring, deg)
            .into_iter()
            .next()
            .ok_or_else(|| Error::Config(format!("no squarefree g of degree {deg}"))),
        GSpec::Coeffs(c) => {
            if c.iter().any(|&x| x >= ring.q()) {
                return Err(Error::Config("g coefficients must be element indices below q".into()));
            }
            let g = Poly::new(c.iter().map(|&x| Fe(x)).collect());
            if !g.is_monic() || !ring.is_squarefree(&g) {
                return Err(Error::Config("g must be monic and squarefree".into()));
            }
            Ok(g)
        }
    }
}

/// The family parameters `d` visited by the experiment.
pub fn family_degrees(ring: &PolyRing, cfg: &ExperimentConfig) -> Result<Vec<usize>> {
    let mut ds = match (&cfg.g, cfg.family) {
        (GSpec::Coeffs(_), FamilyKind::OrdinaryHg) => vec![resolve_g(ring, &cfg.g, 0)?.degree().finite().unwrap()],
        (GSpec::Coeffs(_), FamilyKind::OrdinaryHgTwist) => {
            vec![resolve_g(ring, &cfg.g, 0)?.degree().finite().unwrap() + 1]
        }
        _ => cfg.d.clone(),
    };
    ds.sort_unstable();
    ds.dedup();
    Ok(ds)
}

pub fn descriptor(ring: &PolyRing, cfg: &ExperimentConfig, d: usize) -> Result<FamilyDescriptor> {
    let desc = match cfg.family {
        FamilyKind::PolynomialFd => FamilyDescriptor::polynomial_fd(d),
        FamilyKind::PolynomialAs0 => FamilyDescriptor::polynomial_as0(d),
        FamilyKind::OddPolynomial => FamilyDescriptor::odd(d),
        FamilyKind::OrdinaryFull => FamilyDescriptor::ordinary_full(d),
        FamilyKind::OrdinaryHg => FamilyDescriptor::hg(resolve_g(ring, &cfg.g, d)?),
        FamilyKind::OrdinaryHgTwist => {
            if d < 2 {
                return Err(Error::Config("ordinary-hg-twist needs d ≥ 2".into()));
            }
            FamilyDescriptor::hg_twist(resolve_g(ring, &cfg.g, d - 1)?, Fe(cfg.a))
        }
        FamilyKind::OrdinaryFixedG => FamilyDescriptor::fixed_g(d, resolve_g(ring, &cfg.g, d)?),
    };
    desc.validate(ring)?;
    Ok(desc)
}

fn random_fe(ring: &PolyRing, rng: &mut impl Rng, nonzero: bool) -> Fe {
    Fe(rng.gen_range(u32::from(nonzero)..ring.q()))
}

fn coprime(ring: &PolyRing, h: &Poly, g: &Poly) -> bool {
    !h.is_zero() && ring.gcd(h, g).is_ok_and(|c| c.is_one())
}

/// One uniform member of the family.
fn random_member(ring: &PolyRing, desc: &FamilyDescriptor, rng: &mut impl Rng) -> Result<AsFunction> {
    let p = ring.p() as usize;
    let d = desc.d;
    match desc.kind {
        FamilyKind::PolynomialFd | FamilyKind::PolynomialAs0 | FamilyKind::OddPolynomial => {
            let odd = desc.kind == FamilyKind::OddPolynomial;
            let mut c = vec![Fe::ZERO; d + 1];
            c[d] = random_fe(ring, rng, true);
            for (i, ci) in c.iter_mut().enumerate().take(d).skip(1) {
                if i % p != 0 && (!odd || i % 2 == 1) {
                    *ci = random_fe(ring, rng, false);
                }
            }
            if desc.kind == FamilyKind::PolynomialAs0 {
                c[0] = random_fe(ring, rng, false);
            }
            Ok(AsFunction::Poly(Poly::new(c)))
        }
        FamilyKind::OrdinaryHg | FamilyKind::OrdinaryHgTwist | FamilyKind::OrdinaryFixedG => {
            let g = desc.g.as_ref().unwrap();
            let dg = g.deg().unwrap();
            loop {
                let (h, ok) = match desc.kind {
                    FamilyKind::OrdinaryFixedG => {
                        let h = random_poly(ring, rng, d);
                        let ok = (dg == d || h.deg() == Some(d)) && coprime(ring, &h, g);
                        (h, ok)
                    }
                    _ => {
                        let h = if dg == 0 { Poly::zero() } else { random_poly(ring, rng, dg - 1) };
                        let ok = coprime(ring, &h, g) || (dg == 0);
                        (h, ok)
                    }
                };
                if !ok {
                    continue;
                }
                let num = match (desc.kind, desc.a) {
                    (FamilyKind::OrdinaryHgTwist, Some(a)) => ring.add(&h, &ring.scale(a, &ring.shift(g, 1))),
                    _ => h,
                };
                return Ok(AsFunction::Rational(RationalFunction { num, den: g.clone() }));
            }
        }
        FamilyKind::OrdinaryFull => Err(Error::Config("ordinary-full cannot be subsampled; raise `budget`".into())),
    }
}

/// Members in canonical order, or `budget` i.i.d. uniform draws (seeded) when
/// the family is larger and `allow_sample`. Returns `(members, full size, sampled)`.
pub fn family_members(
    ring: &PolyRing,
    desc: &FamilyDescriptor,
    budget: u64,
    seed: u64,
    allow_sample: bool,
) -> Result<(Vec<AsFunction>, u128, bool)> {
    let n = desc.count(ring)?;
    if n <= budget as u128 || !allow_sample {
        return Ok((desc.enumerate(ring, budget)?, n, false));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (desc.d as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let v = (0..budget).map(|_| random_member(ring, desc, &mut rng)).collect::<Result<_>>()?;
    Ok((v, n, true))
}

fn widest(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

#[allow(clippy::too_many_arguments)]
/// Exact identity checks over every member: factorization through the
/// character, the constant-shift twist, the explicit formula for
/// `1 ≤ r ≤ rmax`, RH, and (odd family) conjugation symmetry.
pub fn identity_rows(
    ring: &PolyRing,
    psi: AdditiveChar,
    desc: &FamilyDescriptor,
    budget: u64,
    rmax: usize,
    tol: f64,
    rh_tol: f64,
    table: &mut Table,
) -> Result<()> {
    let t0 = Instant::now();
    let fs = desc.enumerate(ring, budget)?;
    let q = ring.q();
    let per: Vec<(bool, usize, f64, f64, bool)> = fs
        .par_iter()
        .map(|f| -> Result<_> {
            let fact = check_factorization(ring, f, psi)?;
            let twist_bad = ring
                .field()
                .elements()
                .map(|b| twist_check(ring, f, b, psi))
                .collect::<Result<Vec<bool>>>()?
                .into_iter()
                .filter(|ok| !ok)
                .count();
            let l = l_function_as(ring, f, psi)?;
            let zs = zeros(&l, q)?;
            let ch = character_of(ring, f, psi)?;
            let mut err: f64 = 0.0;
            for r in 1..=rmax as i64 {
                let lam = trace_from_lambda(&ch, r, l.degree())?;
                err = err.max((zs.trace(r) - lam).norm());
            }
            let mut neg: Vec<Complex64> = zs.rho().iter().map(|z| -z).collect();
            let mut pos = zs.rho().to_vec();
            let key = |a: &Complex64, b: &Complex64| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im));
            neg.sort_by(key);
            pos.sort_by(key);
            let sym = l.is_conjugation_fixed() && neg.iter().zip(&pos).all(|(a, b)| (a - b).norm() < 1e-8);
            Ok((fact, twist_bad, err, zs.rh_residual(), sym))
        })
        .collect::<Result<_>>()?;
    let d = desc.d;
    let n = fs.len();
    let fact_bad = per.iter().filter(|x| !x.0).count();
    let twist_bad: usize = per.iter().map(|x| x.1).sum();
    let ef = widest(per.iter().map(|x| x.2));
    let rh = widest(per.iter().map(|x| x.3));
    let mut emit = |name: &str, err: f64, ok: bool, tol: f64, checks: &mut Vec<Check>| {
        table.push(vec![d.into(), name.into(), n.into(), err.into(), ok.into()], t0);
        checks.push(Check::at_most(format!("d={d} {name}"), err, tol));
    };
    let mut checks = Vec::new();
    emit("factorization", fact_bad as f64, fact_bad == 0, 0.0, &mut checks);
    emit("twist", twist_bad as f64, twist_bad == 0, 0.0, &mut checks);
    emit("explicit-formula", ef, ef <= tol, tol, &mut checks);
    emit("rh", rh, rh <= rh_tol, rh_tol, &mut checks);
    if desc.kind == FamilyKind::OddPolynomial {
        let bad = per.iter().filter(|x| !x.4).count();
        emit("symplectic-symmetry", bad as f64, bad == 0, 0.0, &mut checks);
    }
    table.checks.extend(checks);
    Ok(())
}

fn verify_identities(cfg: &ExperimentConfig) -> Result<Table> {
    let (ring, psi) = cfg_ring(cfg)?;
    let mut t = Table::new(&["d", "identity", "family_size", "max_error", "passed"]);
    for d in family_degrees(&ring, cfg)? {
        let desc = descriptor(&ring, cfg, d)?;
        identity_rows(&ring, psi, &desc, cfg.budget, 2 * d, cfg.tolerance, cfg.rh_tolerance, &mut t)?;
    }
    Ok(t)
}

/// The random-matrix comparison requested by the config, after checking the
/// support condition of the theorem being compared with.
pub fn rmt_target(cfg: &ExperimentConfig) -> Result<Option<RmtKind>> {
    if !cfg.compare_rmt {
        return Ok(None);
    }
    let fam = super::config::family_name(cfg.family);
    let p = cfg.p as f64;
    let (kind, bound, what) = match (cfg.kind, cfg.family) {
        (ExperimentKind::Density1Level, f) if f.is_ordinary() => (RmtKind::U1Level, 1.0, "1"),
        (ExperimentKind::Density1Level, FamilyKind::OddPolynomial) => (RmtKind::USp1Level, 1.0 - 1.0 / p, "1 − 1/p"),
        (ExperimentKind::Density2Level, FamilyKind::PolynomialFd | FamilyKind::PolynomialAs0) => {
            // Φ₂ = Φ ⊗ Φ has support |η| + |ξ| ≤ 2β
            (RmtKind::U2Level, 1.0 - 1.0 / p, "1 − 1/p (pair support 2 − 2/p)")
        }
        _ => {
            return Err(Error::Config(format!(
                "no random-matrix comparison is available for {} on {fam}; set compare_rmt = false",
                cfg.kind
            )))
        }
    };
    if cfg.beta >= bound {
        return Err(Error::Config(format!(
            "beta = {} violates the support bound β < {what} required for the {} comparison on {fam}",
            cfg.beta,
            match kind {
                RmtKind::U1Level => "U-1level",
                RmtKind::U2Level => "U-2level",
                RmtKind::USp1Level => "USp-1level",
            }
        )));
    }
    Ok(Some(kind))
}

fn density(cfg: &ExperimentConfig) -> Result<Table> {
    let two = cfg.kind == ExperimentKind::Density2Level;
    let target = rmt_target(cfg)?;
    let (ring, psi) = cfg_ring(cfg)?;
    let phi = cfg.test_function()?;
    let rmt = target.map(|k| rmt_reference(k, &phi)).transpose()?;
    let mut t = Table::new(&["d", "family_size", "mean_W", "rmt_ref", "abs_diff", "max_rh_residual"]);
    for d in family_degrees(&ring, cfg)? {
        let t0 = Instant::now();
        let desc = descriptor(&ring, cfg, d)?;
        let (fs, _, sampled) = family_members(&ring, &desc, cfg.budget, cfg.seed, true)?;
        t.estimate |= sampled;
        let n = l_function_as(&ring, &fs[0], psi)?.degree();
        let reach = (cfg.beta * n as f64).floor() as usize;
        let st = FamilyStats::from_functions(&ring, &fs, psi, if two { 2 * reach } else { reach })?;
        let (zero_side, fourier) = if two {
            (st.mean_w2(&phi)?, st.fourier_w2(&phi)?)
        } else {
            (st.mean_w1(&phi)?, st.fourier_w1(&phi)?)
        };
        let diff = rmt.map(|r| (zero_side - r).abs());
        t.push(
            vec![d.into(), fs.len().into(), zero_side.into(), rmt.into(), diff.into(), st.max_rh_residual().into()],
            t0,
        );
        t.checks.push(Check::at_most(format!("d={d} zero-vs-fourier"), (zero_side - fourier).abs(), cfg.tolerance));
        t.checks.push(Check::at_most(format!("d={d} rh"), st.max_rh_residual(), cfg.rh_tolerance));
    }
    Ok(t)
}

#[allow(clippy::too_many_arguments)]
fn trace_rows(
    t: &mut Table,
    d: usize,
    set: &str,
    st: &FamilyStats,
    rmax: usize,
    single: impl Fn(i64) -> Result<Complex64>,
    pair: Option<&(dyn Fn(i64, i64) -> Result<f64> + Sync)>,
    tol: f64,
    t0: Instant,
) -> Result<()> {
    let mut worst: f64 = 0.0;
    let mut imag: f64 = 0.0;
    let r = rmax as i64;
    let mut emit = |t: &mut Table, a: i64, s: i64, direct: Complex64, f: Complex64| {
        let diff = (direct - f).norm();
        worst = worst.max(diff);
        imag = imag.max((direct.im - f.im).abs().max(f.im.abs()));
        let row = vec![d.into(), set.into(), a.into(), s.into(), direct.re.into(), f.re.into(), diff.into(), direct.im.into()];
        t.push(row, t0);
    };
    for a in 1..=r {
        emit(t, a, 0, st.mean_trace(a)?, single(a)?);
        if let Some(pf) = pair {
            let ss: Vec<i64> = (-r..=r).filter(|&s| s != 0).collect();
            let vals: Vec<f64> = ss.par_iter().map(|&s| pf(a, s)).collect::<Result<_>>()?;
            for (&s, f) in ss.iter().zip(vals) {
                emit(t, a, s, st.mean_trace_product(a, s)?, Complex64::new(f, 0.0));
            }
        }
    }
    t.checks.push(Check::at_most(format!("d={d} {set} formula"), worst, tol));
    if pair.is_some() || set == "H_g" {
        // means over these sets are real
        t.checks.push(Check::at_most(format!("d={d} {set} imaginary"), imag, tol));
    }
    Ok(())
}

fn trace_means(cfg: &ExperimentConfig) -> Result<Table> {
    let (ring, psi) = cfg_ring(cfg)?;
    let mut t = Table::new(&["d", "set", "r", "s", "direct", "formula", "abs_diff", "imag"]);
    let b = DEFAULT_PSI_BUDGET;
    let rmax = cfg.rmax;
    for d in family_degrees(&ring, cfg)? {
        let t0 = Instant::now();
        let desc = descriptor(&ring, cfg, d)?;
        match cfg.family {
            FamilyKind::PolynomialFd | FamilyKind::OrdinaryHg => {
                let q_mod = match &desc.g {
                    None => Poly::monomial(Fe::ONE, d + 1),
                    Some(g) => ring.mul(g, g),
                };
                let h = CharGroup::all_order_p(&ring, &q_mod, psi)?;
                let st = FamilyStats::from_char_group(&h, rmax)?;
                let pair = |r, s| mean_trace_product_formula(&h, r, s, b);
                let single = |r| mean_trace_formula(&h, r, b).map(|v| Complex64::new(v, 0.0));
                trace_rows(&mut t, d, "characters", &st, rmax, single, Some(&pair), cfg.tolerance, t0)?;
                t.checks.push(Check::at_most(format!("d={d} characters rh"), st.max_rh_residual(), cfg.rh_tolerance));
                if let Some(g) = &desc.g {
                    let fs = desc.enumerate(&ring, cfg.budget)?;
                    let st = FamilyStats::from_functions(&ring, &fs, psi, rmax)?;
                    let single = |r| mean_trace_hg_formula(&ring, g, r, b).map(|v| Complex64::new(v, 0.0));
                    trace_rows(&mut t, d, "H_g", &st, rmax, single, None, cfg.tolerance, t0)?;
                    t.checks.push(Check::at_most(format!("d={d} H_g rh"), st.max_rh_residual(), cfg.rh_tolerance));
                }
            }
            FamilyKind::OrdinaryHgTwist => {
                let (g, a) = (desc.g.clone().unwrap(), desc.a.unwrap());
                let fs = desc.enumerate(&ring, cfg.budget)?;
                let st = FamilyStats::from_functions(&ring, &fs, psi, rmax)?;
                let single = |r| mean_trace_hg_twist_formula(&ring, &g, a, psi, r, b);
                trace_rows(&mut t, d, "H_g^a", &st, rmax, single, None, cfg.tolerance, t0)?;
                t.checks.push(Check::at_most(format!("d={d} H_g^a rh"), st.max_rh_residual(), cfg.rh_tolerance));
            }
            f => {
                return Err(Error::Config(format!(
                    "trace-means supports polynomial-fd, ordinary-hg and ordinary-hg-twist, not {}",
                    super::config::family_name(f)
                )))
            }
        }
    }
    Ok(t)
}

/// Outcome of one lattice check: cases examined and failures.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub cases: usize,
    pub failures: usize,
}

impl Tally {
    fn add(&mut self, ok: bool) {
        self.cases += 1;
        self.failures += usize::from(!ok);
    }
}

/// Named tallies of the lattice suite.
#[derive(Clone, Debug, Default)]
pub struct LatticeReport {
    pub reduced_degree_sum: Tally,
    pub predictable_degree: Tally,
    pub rank2_primitive_bound: Tally,
    pub rank2_box_bound: Tally,
    pub short_vector_bound: Tally,
    pub congruence_volume: Tally,
    pub lambda_q_volume: Tally,
    pub lambda_q_bound: Tally,
}

impl LatticeReport {
    pub fn entries(&self) -> [(&'static str, Tally); 8] {
        [
            ("reduced-degree-sum", self.reduced_degree_sum),
            ("predictable-degree", self.predictable_degree),
            ("rank2-primitive-bound", self.rank2_primitive_bound),
            ("rank2-box-bound", self.rank2_box_bound),
            ("short-vector-bound", self.short_vector_bound),
            ("congruence-volume", self.congruence_volume),
            ("lambda-q-volume", self.lambda_q_volume),
            ("lambda-q-bound", self.lambda_q_bound),
        ]
    }
}

/// Lattice checks over `F_q`:
///
/// * `lattices` random lattices (rank 2 and 3, entries of degree ≤ 4) reduce
///   to bases with degree sum equal to the volume exponent and unimodular
///   transforms; `combinations` random combinations obey the predictable
///   degree property.
/// * Exact short-vector counts respect the rank-2 primitive, box and
///   short-vector bounds on every congruence lattice `h ≡ a·g (mod Q)` with
///   `deg Q ≤ 3` (`≤ 1` for `q > 3`) and on random lattices of volume
///   exponent `≤ 6`, for degrees up to 4 (2 for `q > 3`).
/// * Congruence-lattice volumes equal `deg Q` by counting members of
///   `(F_q[x]/Q)²`; `Λ_Q` volumes (odd `p`, squarefree `deg Q ≤ 3`) agree
///   with an index computation, and its short-vector counts respect the
///   derivative-lattice bound.
pub fn lattice_suite(ring: &PolyRing, lattices: usize, combinations: usize, seed: u64) -> Result<LatticeReport> {
    let mut rep = LatticeReport::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = ring.q();
    let small = q <= 3;

    let mut pool = Vec::with_capacity(lattices);
    for i in 0..lattices {
        let l = random_lattice(ring, &mut rng, 2 + i % 2, 4);
        let red = l.reduce_basis()?;
        let sum: usize = red.basis_degrees().iter().sum();
        let unimodular = red.transform().is_some_and(|u| linalg::det(ring, u).deg() == Some(0));
        rep.reduced_degree_sum.add(sum == l.volume_exponent() && unimodular);
        pool.push(red);
    }
    for j in 0..if pool.is_empty() { 0 } else { combinations } {
        let red = &pool[j % pool.len()];
        let c: Vec<Poly> = (0..red.rank()).map(|_| random_poly(ring, &mut rng, 3)).collect();
        let want = c
            .iter()
            .zip(red.basis())
            .filter_map(|(ci, b)| Some(ci.deg()? + vector_degree(b).finite()?))
            .max();
        rep.predictable_degree.add(vector_degree(&red.combine(&c)).finite() == want);
    }

    let max_mod = if small { 3 } else { 1 };
    let top = if small { 4i64 } else { 2 };
    let mut rank2: Vec<FqxLattice> = Vec::new();
    for m in 1..=max_mod {
        for qm in ring.monics(m) {
            for a in ring.polys_below(m) {
                if !coprime(ring, &a, &qm) {
                    continue;
                }
                let l = congruence_lattice(ring, &a, &qm)?;
                // Γ ⊇ Q·F_q[x]², so the box deg ≤ m − 1 is a full set of
                // residues and holds q^{2m}/[F_q[x]² : Γ] members; count them
                // from the congruence and from the basis.
                let mut direct = 0u128;
                for g in ring.polys_below(m) {
                    let ag = ring.rem(&ring.mul(&a, &g), &qm);
                    direct += ring.polys_below(m).filter(|h| *h == ag).count() as u128;
                }
                let spanned = l.brute_force_count(&[m as i64 - 1, m as i64 - 1], false)?;
                let index = (q as u128).pow(2 * m as u32) / direct;
                rep.congruence_volume.add(
                    spanned == direct && index == (q as u128).pow(l.volume_exponent() as u32) && l.volume_exponent() == m,
                );
                rank2.push(l);
            }
        }
    }
    let mut extra = Vec::new();
    for i in 0..lattices / 4 {
        let l = random_lattice(ring, &mut rng, 2 + i % 2, 2);
        if l.volume_exponent() <= 6 {
            extra.push(l);
        }
    }
    let fails = |l: &FqxLattice| -> Result<(Tally, Tally, Tally)> {
        let (mut a, mut b, mut c) = (Tally::default(), Tally::default(), Tally::default());
        let m = l.volume_exponent() as i64;
        let mu = l.first_minimum()? as i64;
        let n = l.rank() as i64;
        for s in 0..=top {
            let all = l.count_short(s, &Constraint::All, DEFAULT_BUDGET)?;
            c.add(all <= bounds::short_vector_bound(q, n, s, m, mu));
            if n != 2 {
                continue;
            }
            let prim = l.count_short(s, &Constraint::Primitive, DEFAULT_BUDGET)?;
            a.add(prim <= bounds::rank2_primitive_bound(q, s, m));
            for t in 0..=top {
                let bx = Constraint::PerCoordinate { bounds: vec![s, t], primitive: true };
                b.add(l.count_short(0, &bx, DEFAULT_BUDGET)? <= bounds::rank2_box_primitive_bound(q, s, t, m));
            }
        }
        Ok((a, b, c))
    };
    let tallies: Vec<(Tally, Tally, Tally)> = rank2.par_iter().chain(extra.par_iter()).map(fails).collect::<Result<_>>()?;
    for (a, b, c) in tallies {
        for (dst, src) in [
            (&mut rep.rank2_primitive_bound, a),
            (&mut rep.rank2_box_bound, b),
            (&mut rep.short_vector_bound, c),
        ] {
            dst.cases += src.cases;
            dst.failures += src.failures;
        }
    }

    if ring.p() >= 3 {
        let mut seen = HashSet::new();
        for m in 1..=3usize {
            for qm in squarefree_monics(ring, m) {
                if !seen.insert(qm.clone()) {
                    continue;
                }
                let lam = RLattice::lambda_q(ring, &qm)?;
                let oracle = lambda_q_index_oracle(ring, &qm);
                rep.lambda_q_volume.add(lam.volume_exponent() == m && oracle == m);
                for r in (m as i64 + 1)..=(2 * m as i64 + 3) {
                    let count = lam.count_short(r, DEFAULT_BUDGET)?;
                    let e = bounds::derivative_lattice_exponent(ring.p(), r, m as i64).unwrap();
                    let ok = (count as f64) <= (q as f64).powf(e) * (1.0 + 1e-12)
                        && count == lam.count_short_by_dimension(r);
                    rep.lambda_q_bound.add(ok);
                }
            }
        }
    }
    Ok(rep)
}

fn lattice_table(cfg: &ExperimentConfig) -> Result<Table> {
    let ring = cfg_poly_ring(cfg)?;
    let mut t = Table::new(&["check", "cases", "failures"]);
    let t0 = Instant::now();
    let rep = lattice_suite(&ring, cfg.lattices, cfg.combinations, cfg.seed)?;
    for (name, tally) in rep.entries() {
        t.push(vec![name.into(), tally.cases.into(), tally.failures.into()], t0);
        t.checks.push(Check::exact(name, tally.failures));
    }
    Ok(t)
}

fn chebotarev(cfg: &ExperimentConfig) -> Result<Table> {
    let ring = cfg_poly_ring(cfg)?;
    let mut t = Table::new(&["r_half", "count", "irreducibles", "ratio"]);
    let mut rs = cfg.r_half.clone();
    rs.sort_unstable();
    rs.dedup();
    for r in rs {
        let t0 = Instant::now();
        let c = diagonal_chebotarev_count(&ring, r, cfg.budget)?;
        let n = ring.irreducibles(r)?.len();
        let c: u64 = c.try_into().map_err(|_| Error::Certification("count overflow".into()))?;
        t.push(vec![r.into(), c.into(), n.into(), (c as f64 / n as f64).into()], t0);
    }
    Ok(t)
}

pub fn execute(cfg: &ExperimentConfig) -> Result<Table> {
    match cfg.kind {
        ExperimentKind::VerifyIdentities => verify_identities(cfg),
        ExperimentKind::Density1Level | ExperimentKind::Density2Level => density(cfg),
        ExperimentKind::TraceMeans => trace_means(cfg),
        ExperimentKind::LatticeSuite => lattice_table(cfg),
        ExperimentKind::ChebotarevCount => chebotarev(cfg),
    }
}
