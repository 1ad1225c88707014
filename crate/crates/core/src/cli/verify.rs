//! Built-in self-verification battery (`aszl verify`).

use serde::{Deserialize, Serialize};

use super::record::Check;
use super::suites::{identity_rows, lattice_suite, Table};
use crate::algebra::{make_field, AdditiveChar, CyclotomicInt, Fe, Poly, PolyRing};
use crate::asfamilies::{l_function_as, AsFunction, FamilyDescriptor};
use crate::characters::CharGroup;
use crate::error::{Error, Result};
use crate::zerostats::{
    mean_trace_formula, mean_trace_hg_formula, mean_trace_product_formula, zeros, FamilyStats, DEFAULT_PSI_BUDGET,
};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Level {
    Fast,
    Full,
}

fn ring(q: u64) -> Result<PolyRing> {
    Ok(PolyRing::new(make_field(q, 1)?))
}

fn identities(level: Level, out: &mut Vec<Check>) -> Result<()> {
    let r = ring(3)?;
    let psi = AdditiveChar::new(3, 1)?;
    let mut descs = vec![FamilyDescriptor::polynomial_fd(2), FamilyDescriptor::polynomial_fd(4)];
    let g2 = r.from_ints(&[0, 1, 1]);
    descs.push(FamilyDescriptor::hg(g2.clone()));
    if level == Level::Full {
        let g3 = r.from_ints(&[0, 2, 0, 1]);
        descs.push(FamilyDescriptor::polynomial_fd(5));
        descs.push(FamilyDescriptor::hg(g3.clone()));
        descs.push(FamilyDescriptor::fixed_g(3, g3));
        descs.push(FamilyDescriptor::odd(5));
    }
    for desc in descs {
        let mut t = Table::default();
        let label = format!("{:?} d={}", desc.kind, desc.d);
        identity_rows(&r, psi, &desc, 1 << 20, 2 * desc.d, 1e-8, 1e-9, &mut t)?;
        out.extend(t.checks.into_iter().map(|mut c| {
            c.name = format!("identities {label}: {}", c.name);
            c
        }));
    }
    Ok(())
}

fn counting(level: Level, out: &mut Vec<Check>) -> Result<()> {
    let r = ring(3)?;
    let psi = AdditiveChar::new(3, 1)?;
    let ds: &[usize] = if level == Level::Full { &[2, 4, 5] } else { &[2, 4] };
    for &d in ds {
        let h = CharGroup::all_order_p(&r, &Poly::monomial(Fe::ONE, d + 1), psi)?;
        let prim = h.primitive_indices()?.len() as i128;
        let fd = FamilyDescriptor::polynomial_fd(d).count(&r)? as i128;
        out.push(Check::exact(format!("primitive characters mod x^{} = #F_{d}", d + 1), (prim - fd).unsigned_abs() as usize));
    }
    let mut gs = vec![r.from_ints(&[0, 1, 1])];
    if level == Level::Full {
        gs.push(r.from_ints(&[0, 2, 0, 1]));
    }
    for g in gs {
        let h = CharGroup::all_order_p(&r, &r.mul(&g, &g), psi)?;
        let prim = h.primitive_indices()?.len() as i128;
        let phi = i128::try_from(r.euler_phi(&g)?).unwrap_or(-1);
        out.push(Check::exact(format!("primitive characters mod g² = φ(g), g = {g:?}"), (prim - phi).unsigned_abs() as usize));
    }
    Ok(())
}

fn means(level: Level, out: &mut Vec<Check>) -> Result<()> {
    let r = ring(3)?;
    let psi = AdditiveChar::new(3, 1)?;
    let b = DEFAULT_PSI_BUDGET;
    let rmax: i64 = if level == Level::Full { 6 } else { 4 };
    let mut mods = vec![Poly::monomial(Fe::ONE, 5)];
    let g = r.from_ints(&[0, 2, 0, 1]);
    if level == Level::Full {
        mods.push(r.mul(&g, &g));
    }
    for m in mods {
        let h = CharGroup::all_order_p(&r, &m, psi)?;
        let st = FamilyStats::from_char_group(&h, rmax as usize)?;
        let (mut worst, mut imag): (f64, f64) = (0.0, 0.0);
        for a in 1..=rmax {
            let v = st.mean_trace(a)?;
            worst = worst.max((v.re - mean_trace_formula(&h, a, b)?).abs());
            imag = imag.max(v.im.abs());
            for s in (-rmax..=rmax).filter(|&s| s != 0) {
                let v = st.mean_trace_product(a, s)?;
                worst = worst.max((v.re - mean_trace_product_formula(&h, a, s, b)?).abs());
                imag = imag.max(v.im.abs());
            }
        }
        out.push(Check::at_most(format!("trace means mod {m:?}"), worst, 1e-10));
        out.push(Check::at_most(format!("trace means mod {m:?} imaginary"), imag, 1e-10));
    }
    if level == Level::Full {
        let fs = FamilyDescriptor::hg(g.clone()).enumerate(&r, 1 << 20)?;
        let st = FamilyStats::from_functions(&r, &fs, psi, 6)?;
        let mut worst: f64 = 0.0;
        for a in 1..=6 {
            worst = worst.max((st.mean_trace(a)?.re - mean_trace_hg_formula(&r, &g, a, b)?).abs());
        }
        out.push(Check::at_most("trace means over H_g", worst, 1e-10));
    }
    Ok(())
}

fn values(level: Level, out: &mut Vec<Check>) -> Result<()> {
    let r = ring(3)?;
    let psi = AdditiveChar::new(3, 1)?;
    let l = l_function_as(&r, &AsFunction::Poly(r.from_ints(&[0, 0, 1])), psi)?;
    let want = CyclotomicInt::from_coeffs(3, vec![1.into(), 2.into()])?;
    let ok = l.degree() == 1 && l.coeff(1) == want;
    out.push(Check::exact("L(u, x², ψ_1) = 1 + (1 + 2ζ)u", usize::from(!ok)));
    let z = zeros(&l, 3)?;
    out.push(Check::at_most("angle of L(u, x², ψ_1)", (z.theta()[0] + 0.25).abs(), 1e-10));
    let qs: &[u64] = if level == Level::Full { &[3, 5] } else { &[3] };
    for &q in qs {
        let rq = ring(q)?;
        let top = if level == Level::Full { 5 } else { 4 };
        for deg in 1..=top {
            let mut sum = 0u64;
            for c in rq.monics(deg) {
                sum += rq.von_mangoldt(&c)? as u64;
            }
            let want = q.pow(deg as u32);
            out.push(Check::exact(format!("Σ Λ over degree {deg}, q = {q}"), usize::from(sum != want)));
        }
    }
    Ok(())
}

fn lattices(level: Level, out: &mut Vec<Check>) -> Result<()> {
    let (qs, n, c): (&[u64], usize, usize) = match level {
        Level::Fast => (&[3], 20, 50),
        Level::Full => (&[2, 3, 5], 200, 500),
    };
    for &q in qs {
        let rep = lattice_suite(&ring(q)?, n, c, q)?;
        for (name, t) in rep.entries() {
            out.push(Check::exact(format!("lattice q = {q} {name} ({} cases)", t.cases), t.failures));
        }
    }
    Ok(())
}

/// Runs the battery; `full` uses the acceptance-scale parameters.
pub fn verify(level: Level) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    identities(level, &mut out)?;
    counting(level, &mut out)?;
    means(level, &mut out)?;
    values(level, &mut out)?;
    lattices(level, &mut out)?;
    Ok(out)
}

/// `Err(Certification)` naming the failures, if any.
pub fn require_all(checks: &[Check]) -> Result<()> {
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::Certification(format!("{} check(s) failed: {}", failed.len(), failed.join("; "))))
    }
}
