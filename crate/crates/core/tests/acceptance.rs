//! Acceptance battery: one PASS/FAIL line per criterion, non-zero exit if any
//! hard criterion fails. Runs as a plain binary (`harness = false`) so the
//! lines always appear in `cargo test` output.

use std::sync::Mutex;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use aszl::algebra::{make_field, AdditiveChar, CyclotomicInt, Fe, Poly, PolyRing};
use aszl::asfamilies::{
    character_of, check_factorization, l_function_as, twist_check, AsFunction, FamilyDescriptor,
};
use aszl::characters::{pth_power_residues, CharGroup, DirichletChar};
use aszl::cli::suites::lattice_suite;
use aszl::zerostats::{
    chebyshev_psi, mean_trace_formula, mean_trace_hg_formula, mean_trace_product_formula, rmt_reference,
    trace_from_lambda, usp_trace_moment, zeros, FamilyStats, RmtKind, TestFunction, DEFAULT_PSI_BUDGET,
};

/// Largest RH residual seen by any criterion.
static RH: Mutex<f64> = Mutex::new(0.0);

fn note_rh(x: f64) {
    let mut m = RH.lock().unwrap();
    *m = m.max(x);
}

fn ring(q: u64) -> PolyRing {
    PolyRing::new(make_field(q, 1).unwrap())
}

fn psi1() -> AdditiveChar {
    AdditiveChar::new(3, 1).unwrap()
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

/// Curve-side L-functions of the identity suites: `F_2, F_4, F_5`, `H_g` and
/// `AS_{3,g}^ord` with `g = x(x+1)(x+2)`.
fn identity_suites(r: &PolyRing) -> Vec<FamilyDescriptor> {
    let g = r.from_ints(&[0, 2, 0, 1]);
    vec![
        FamilyDescriptor::polynomial_fd(2),
        FamilyDescriptor::polynomial_fd(4),
        FamilyDescriptor::polynomial_fd(5),
        FamilyDescriptor::hg(g.clone()),
        FamilyDescriptor::fixed_g(3, g),
    ]
}

fn ac1() -> Outcome {
    let r = ring(3);
    let psi = psi1();
    let mut bad = 0;
    let mut total = 0;
    for desc in identity_suites(&r) {
        for f in desc.enumerate(&r, 1 << 20).unwrap() {
            total += 1;
            let ok = match &f {
                // polynomial f: compare with the Dirichlet character built directly
                AsFunction::Poly(p) => {
                    let lc = DirichletChar::chi_poly(&r, p, psi).unwrap().l_function_of_char().unwrap();
                    let lf = l_function_as(&r, &f, psi).unwrap().times_linear(0);
                    lc.coeffs() == lf.coeffs()
                }
                AsFunction::Rational(_) => check_factorization(&r, &f, psi).unwrap(),
            };
            bad += usize::from(!ok);
        }
    }
    outcome(bad == 0, format!("{total} L-functions, {bad} mismatches"))
}

fn ac2() -> Outcome {
    let r = ring(3);
    let psi = psi1();
    let mut parts = Vec::new();
    let mut ok = true;
    for d in [2usize, 4, 5] {
        let h = CharGroup::all_order_p(&r, &Poly::monomial(Fe::ONE, d + 1), psi).unwrap();
        let prim = h.primitive_indices().unwrap().len();
        let fd = FamilyDescriptor::polynomial_fd(d).enumerate(&r, 1 << 20).unwrap().len();
        ok &= prim == fd;
        parts.push(format!("x^{}: {prim} vs #F_{d} = {fd}", d + 1));
    }
    for g in [r.from_ints(&[0, 1, 1]), r.from_ints(&[0, 2, 0, 1])] {
        let h = CharGroup::all_order_p(&r, &r.mul(&g, &g), psi).unwrap();
        let prim = h.primitive_indices().unwrap().len();
        // φ(g) by counting units
        let phi = r.polys_below(g.deg().unwrap()).filter(|a| !a.is_zero() && r.gcd(a, &g).unwrap().is_one()).count();
        ok &= prim == phi;
        parts.push(format!("g² (deg g = {}): {prim} vs φ(g) = {phi}", g.deg().unwrap()));
    }
    outcome(ok, parts.join("; "))
}

fn ac3() -> Outcome {
    let r = ring(3);
    let psi = psi1();
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for desc in identity_suites(&r) {
        for f in desc.enumerate(&r, 1 << 20).unwrap() {
            let l = l_function_as(&r, &f, psi).unwrap();
            let z = zeros(&l, 3).unwrap();
            note_rh(z.rh_residual());
            let ch = character_of(&r, &f, psi).unwrap();
            for k in 1..=2 * desc.d as i64 {
                let lam = trace_from_lambda(&ch, k, l.degree()).unwrap();
                worst = worst.max((z.trace(k) - lam).norm());
            }
            n += 1;
        }
    }
    outcome(worst < 1e-8, format!("{n} characters, max |T_zero − T_Λ| = {worst:.2e} (tol 1e-8)"))
}

fn ac4() -> Outcome {
    let r = ring(3);
    let psi = psi1();
    let b = DEFAULT_PSI_BUDGET;
    let g = r.from_ints(&[0, 2, 0, 1]);
    let (mut worst, mut imag): (f64, f64) = (0.0, 0.0);
    let mut upd = |v: Complex64, f: f64| {
        worst = worst.max((v.re - f).abs());
        imag = imag.max(v.im.abs());
    };
    // mod x⁵: singles and pairs, r, |s| ≤ 6
    let h = CharGroup::all_order_p(&r, &Poly::monomial(Fe::ONE, 5), psi).unwrap();
    let st = FamilyStats::from_char_group(&h, 6).unwrap();
    note_rh(st.max_rh_residual());
    for a in 1..=6i64 {
        upd(st.mean_trace(a).unwrap(), mean_trace_formula(&h, a, b).unwrap());
        for s in (-6..=6i64).filter(|&s| s != 0) {
            upd(st.mean_trace_product(a, s).unwrap(), mean_trace_product_formula(&h, a, s, b).unwrap());
        }
    }
    // mod g², r ≤ 6
    let h = CharGroup::all_order_p(&r, &r.mul(&g, &g), psi).unwrap();
    let st = FamilyStats::from_char_group(&h, 6).unwrap();
    note_rh(st.max_rh_residual());
    for a in 1..=6i64 {
        upd(st.mean_trace(a).unwrap(), mean_trace_formula(&h, a, b).unwrap());
    }
    // H_g itself
    let fs = FamilyDescriptor::hg(g.clone()).enumerate(&r, 1 << 20).unwrap();
    let st = FamilyStats::from_functions(&r, &fs, psi, 6).unwrap();
    note_rh(st.max_rh_residual());
    for a in 1..=6i64 {
        upd(st.mean_trace(a).unwrap(), mean_trace_hg_formula(&r, &g, a, b).unwrap());
    }
    outcome(
        worst < 1e-10 && imag < 1e-10,
        format!("max |direct − formula| = {worst:.2e}, max |Im| = {imag:.2e} (tol 1e-10)"),
    )
}

fn ac5() -> Outcome {
    let r = ring(3);
    let psi = psi1();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut bad = 0;
    for _ in 0..50 {
        let d = [1usize, 2, 4, 5][rng.gen_range(0..4)];
        let mut c: Vec<Fe> = (0..=d).map(|_| Fe(rng.gen_range(0..3))).collect();
        c[d] = Fe(rng.gen_range(1..3));
        let f = AsFunction::Poly(Poly::new(c));
        let b = Fe(rng.gen_range(0..3));
        bad += usize::from(!twist_check(&r, &f, b, psi).unwrap());
    }
    // family-average relations between AS_4^0 and F_4
    let all = FamilyDescriptor::polynomial_as0(4).enumerate(&r, 1 << 20).unwrap();
    let fd = FamilyDescriptor::polynomial_fd(4).enumerate(&r, 1 << 20).unwrap();
    let sa = FamilyStats::from_functions(&r, &all, psi, 4).unwrap();
    let sf = FamilyStats::from_functions(&r, &fd, psi, 4).unwrap();
    note_rh(sa.max_rh_residual().max(sf.max_rh_residual()));
    let mut worst: f64 = 0.0;
    for a in -4..=4i64 {
        let want = if a % 3 == 0 { sf.mean_trace(a).unwrap() } else { Complex64::new(0.0, 0.0) };
        worst = worst.max((sa.mean_trace(a).unwrap() - want).norm());
        for s in -4..=4i64 {
            let want = if (a + s) % 3 == 0 { sf.mean_trace_product(a, s).unwrap() } else { Complex64::new(0.0, 0.0) };
            worst = worst.max((sa.mean_trace_product(a, s).unwrap() - want).norm());
        }
    }
    outcome(
        bad == 0 && worst < 1e-10,
        format!("50 random shifts: {bad} mismatches; AS_4^0 vs F_4 relations max deviation {worst:.2e} (tol 1e-10)"),
    )
}

fn ac7() -> Outcome {
    let r = ring(3);
    let psi = psi1();
    let fs = FamilyDescriptor::odd(5).enumerate(&r, 1 << 20).unwrap();
    let mut ok = fs.len() == 6;
    let mut sym: f64 = 0.0;
    for f in &fs {
        let l = l_function_as(&r, f, psi).unwrap();
        ok &= l.is_conjugation_fixed();
        let z = zeros(&l, 3).unwrap();
        note_rh(z.rh_residual());
        // angles are symmetric under θ ↦ −θ (zeros closed under conjugation)
        for a in z.rho() {
            let m = z.rho().iter().map(|b| (a.conj() - b).norm()).fold(f64::INFINITY, f64::min);
            sym = sym.max(m);
        }
    }
    ok &= sym < 1e-8;
    // Haar moments of USp(8) by the Weyl integration formula on a product
    // trapezoid grid (exact for these trigonometric polynomials)
    let n = 4usize;
    let m = 20usize;
    let nodes: Vec<f64> = (0..m).map(|i| std::f64::consts::PI * (i as f64 + 0.5) / m as f64).collect();
    let mut moments = [0.0f64; 5];
    let mut mass = 0.0;
    let mut idx = vec![0usize; n];
    loop {
        let th: Vec<f64> = idx.iter().map(|&i| nodes[i]).collect();
        let mut w = 1.0;
        for i in 0..n {
            w *= th[i].sin().powi(2);
            for j in i + 1..n {
                w *= (th[i].cos() - th[j].cos()).powi(2);
            }
        }
        mass += w;
        for (rr, mom) in moments.iter_mut().enumerate().skip(1) {
            *mom += w * th.iter().map(|t| 2.0 * (rr as f64 * t).cos()).sum::<f64>();
        }
        let mut k = 0;
        loop {
            if k == n {
                break;
            }
            idx[k] += 1;
            if idx[k] < m {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
    }
    let mut mdev: f64 = 0.0;
    for rr in 1..=4i64 {
        let quoted = usp_trace_moment(rr, n as i64).unwrap() as f64;
        let haar = moments[rr as usize] / mass;
        mdev = mdev.max((quoted - haar).abs());
        ok &= quoted == if rr % 2 == 0 { -1.0 } else { 0.0 };
    }
    ok &= mdev < 1e-9;
    outcome(
        ok,
        format!("6 members conjugation-fixed, θ ↦ −θ symmetric (max {sym:.1e}); USp(8) moments vs Weyl quadrature {mdev:.1e}"),
    )
}

fn ac8() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    let per_q = [(2u64, 67usize, 167usize), (3, 67, 167), (5, 66, 166)];
    for (q, n, c) in per_q {
        let rep = lattice_suite(&ring(q), n, c, 8 + q).unwrap();
        let failures: usize = rep.entries().iter().map(|e| e.1.failures).sum();
        let cases: usize = rep.entries().iter().map(|e| e.1.cases).sum();
        ok &= failures == 0 && rep.reduced_degree_sum.cases == n && rep.predictable_degree.cases == c;
        if q <= 3 {
            ok &= rep.rank2_box_bound.cases > 0 && rep.congruence_volume.cases > 0;
        }
        if q >= 3 {
            ok &= rep.lambda_q_volume.cases > 0;
        }
        parts.push(format!("q={q}: {cases} cases, {failures} failures"));
    }
    outcome(ok, format!("200 lattices / 500 combinations in total; {}", parts.join("; ")))
}

fn ac9() -> Outcome {
    let r = ring(3);
    let psi = psi1();
    let l = l_function_as(&r, &AsFunction::Poly(r.from_ints(&[0, 0, 1])), psi).unwrap();
    let want = CyclotomicInt::from_coeffs(3, vec![1.into(), 2.into()]).unwrap();
    let mut ok = l.degree() == 1 && l.coeff(0).is_one() && l.coeff(1) == want;
    let z = zeros(&l, 3).unwrap();
    note_rh(z.rh_residual());
    let th = z.theta()[0];
    ok &= (th + 0.25).abs() < 1e-10;
    // ψ(2; cubes mod x²): library vs direct enumeration
    let x2 = r.from_ints(&[0, 0, 1]);
    let cubes = pth_power_residues(&r, &x2).unwrap();
    let lib = chebyshev_psi(&r, 2, &cubes, DEFAULT_PSI_BUDGET).unwrap();
    let cube_set: Vec<Poly> = r
        .polys_below(2)
        .filter(|a| !r.rem(a, &Poly::x()).is_zero())
        .map(|a| r.rem(&r.mul(&a, &r.mul(&a, &a)), &x2))
        .collect();
    let direct: u32 = r
        .monics(2)
        .filter(|c| cube_set.contains(&r.rem(c, &x2)))
        .map(|c| r.von_mangoldt(&c).unwrap())
        .sum();
    ok &= lib == 2u32.into() && direct == 2;
    let mut pnt = true;
    for q in [3u64, 5] {
        let rq = ring(q);
        for deg in 1..=5usize {
            let s: u64 = rq.monics(deg).map(|c| rq.von_mangoldt(&c).unwrap() as u64).sum();
            pnt &= s == q.pow(deg as u32);
        }
    }
    ok &= pnt;
    outcome(
        ok,
        format!("L = 1 + (1+2ζ)u, θ = {th:.12}; ψ(2; cubes mod x²) = {lib} (direct {direct}); Σ Λ = q^r: {pnt}"),
    )
}

fn ac10() -> Outcome {
    let r = ring(3);
    let psi = psi1();
    let mut lines = Vec::new();
    let mut hard = true;
    let tri = TestFunction::triangle(0.75).unwrap();
    let u1 = rmt_reference(RmtKind::U1Level, &tri).unwrap();
    for dg in [3usize, 4, 5] {
        let g = aszl::asfamilies::squarefree_monics(&r, dg).into_iter().next().unwrap();
        let fs = FamilyDescriptor::hg(g).enumerate(&r, 1 << 22).unwrap();
        let n = 2 * dg - 2;
        let st = FamilyStats::from_functions(&r, &fs, psi, (0.75 * n as f64) as usize).unwrap();
        note_rh(st.max_rh_residual());
        let (w, wf) = (st.mean_w1(&tri).unwrap(), st.fourier_w1(&tri).unwrap());
        hard &= (w - wf).abs() < 1e-8;
        lines.push(format!("H_g deg g={dg}: ⟨W_1⟩={w:.6} |·−U|={:.4} (zero/Fourier {:.1e})", (w - u1).abs(), (w - wf).abs()));
    }
    let tri = TestFunction::triangle(0.6).unwrap();
    let u2 = rmt_reference(RmtKind::U2Level, &tri).unwrap();
    for d in [4usize, 5, 7] {
        let fs = FamilyDescriptor::polynomial_fd(d).enumerate(&r, 1 << 22).unwrap();
        let n = d - 1;
        let st = FamilyStats::from_functions(&r, &fs, psi, 2 * (0.6 * n as f64) as usize).unwrap();
        note_rh(st.max_rh_residual());
        let (w, wf) = (st.mean_w2(&tri).unwrap(), st.fourier_w2(&tri).unwrap());
        hard &= (w - wf).abs() < 1e-8;
        lines.push(format!("F_{d}: ⟨W_2⟩={w:.6} |·−U2|={:.4} (zero/Fourier {:.1e})", (w - u2).abs(), (w - wf).abs()));
    }
    for l in &lines {
        println!("      {l}");
    }
    outcome(hard, "soft convergence report above; hard check zero side = Fourier side to 1e-8".to_string())
}

fn main() {
    let start = Instant::now();
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("AC1", ac1),
        ("AC2", ac2),
        ("AC3", ac3),
        ("AC4", ac4),
        ("AC5", ac5),
        ("AC7", ac7),
        ("AC8", ac8),
        ("AC9", ac9),
        ("AC10", ac10),
    ];
    let mut results = Vec::new();
    for (name, f) in criteria {
        let t = Instant::now();
        let o = f();
        results.push((name, o, t.elapsed().as_secs_f64()));
    }
    // the RH criterion aggregates over every suite above
    let rh = *RH.lock().unwrap();
    results.insert(5, ("AC6", outcome(rh < 1e-9, format!("max ||ρ| − 1| over all suites = {rh:.2e} (tol 1e-9)")), 0.0));
    let mut failed = 0;
    for (name, o, secs) in &results {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("{name} {tag} [{secs:.1}s] {}", o.detail);
        failed += usize::from(!o.passed);
    }
    println!("acceptance: {} of {} criteria passed in {:.1}s", results.len() - failed, results.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
