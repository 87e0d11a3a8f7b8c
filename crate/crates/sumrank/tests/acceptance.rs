//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion and exits nonzero if any failed.

use std::collections::HashMap;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use sumrank::codes::{column_erasure_decode, row_erasure_decode, LinearCode};
use sumrank::counting::{
    binomial, gamma_q_upper, gaussian_binomial, num_matrices_of_rank, sphere_curve, sphere_size,
    SphereTable,
};
use sumrank::decoder::{run_experiment, DecodeConfig, GenericDecoder, KindChoice};
use sumrank::distribution::{ordered_decompositions, rho, scomp, scomp_deterministic, SupportDistribution};
use sumrank::ffalg::{fq_rank, make_field, Elem, Field, FieldContext};
use sumrank::reduction::{run_demo, DemoConfig};
use sumrank::sampling::{fork_rng, sample_uniform_subspace, seeded_rng, UniformErrorSampler};
use sumrank::srspace::{BlockVector, SumRankParams, SupportKind};
use sumrank::workfactor::{
    figure_params, optimal_distribution_lp, simplex, w_code, w_errors, w_errors_exact, WorkFactorParams,
};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn pow_q(q: u64, e: usize) -> BigRational {
    rat(BigInt::pow(&BigInt::from(q), e as u32))
}

/// q^e for a possibly negative exponent.
fn pow_q_signed(q: u64, e: i64) -> BigRational {
    if e >= 0 {
        pow_q(q, e as usize)
    } else {
        pow_q(q, (-e) as usize).recip()
    }
}

/// The first 64 factors of the product defining gamma_q, which lies below
/// the true value.
fn gamma_q_lower(q: u64) -> BigRational {
    let qb = BigInt::from(q);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 1..=64u32 {
        let qi = BigInt::pow(&qb, i);
        den *= &qi - 1;
        num *= qi;
    }
    BigRational::new(num, den)
}

/// `x` rounded up (or down) to a multiple of 2^-40. Keeps the direction of
/// the gamma_q bounds while making the rationals small.
fn dyadic(x: &BigRational, up: bool) -> BigRational {
    let scale = rat(BigInt::one() << 40);
    let y = x * &scale;
    let r = if up { y.ceil() } else { y.floor() };
    r / scale
}

fn prime_powers(limit: u64) -> Vec<u64> {
    (2..=limit)
        .filter(|&q| {
            let p = (2..=q).find(|p| q % p == 0).unwrap();
            let mut x = q;
            while x % p == 0 {
                x /= p;
            }
            x == 1
        })
        .collect()
}

/// Sum-rank weights of every vector of the space, by enumeration: each
/// block value gets its rank once, then every vector sums the ranks of its
/// blocks.
fn brute_force_spectrum(ctx: &FieldContext, eta: usize, ell: usize) -> Vec<u64> {
    let qm = ctx.ext.order();
    let block_count = qm.pow(eta as u32);
    let mut block = vec![0 as Elem; eta];
    let ranks: Vec<usize> = (0..block_count)
        .map(|mut v| {
            for b in block.iter_mut() {
                *b = v % qm;
                v /= qm;
            }
            fq_rank(&block, ctx)
        })
        .collect();
    let mu = eta.min(ctx.m);
    let mut hist = vec![0u64; ell * mu + 1];
    let total = block_count.pow(ell as u32);
    for mut v in 0..total {
        let mut w = 0;
        for _ in 0..ell {
            w += ranks[(v % block_count) as usize];
            v /= block_count;
        }
        hist[w] += 1;
    }
    hist
}

fn criterion_1() -> Check {
    let mut cases = 0;
    for q in prime_powers(32) {
        for m in 1..=20usize {
            for n in 1..=20usize {
                let Some(size) = (q as u128).checked_pow((m * n) as u32).filter(|&s| s <= 1 << 20) else {
                    continue;
                };
                let ctx = make_field(q, m).map_err(|e| e.to_string())?;
                for ell in (1..=n).filter(|l| n % l == 0) {
                    let eta = n / ell;
                    let hist = brute_force_spectrum(&ctx, eta, ell);
                    let table = SphereTable::new(q, eta, m, hist.len() - 1, ell);
                    let mut total = BigUint::zero();
                    for (t, &count) in hist.iter().enumerate() {
                        let n_t = table.get(t, ell);
                        ensure!(*n_t == BigUint::from(count), "q={q} m={m} eta={eta} ell={ell} t={t}: {n_t} vs {count}");
                        ensure!(*n_t == sphere_size(t, ell, q, eta, m), "table and sphere_size disagree");
                        total += n_t;
                    }
                    ensure!(total == BigUint::from(size), "q={q} m={m} n={n}: sizes do not sum to q^(mn)");
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} parameter sets, every weight matches enumeration"))
}

fn criterion_2() -> Check {
    let rows = sphere_curve(2, 40, 60, 10);
    ensure!(rows.len() == 12, "expected 12 divisors of 60, got {}", rows.len());
    for r in &rows {
        ensure!(r.log2_bound >= r.log2_exact, "ell={}: bound {} below exact {}", r.ell, r.log2_bound, r.log2_exact);
    }
    for w in rows.windows(2) {
        ensure!(w[1].log2_exact < w[0].log2_exact, "exact curve not decreasing at ell={}", w[1].ell);
    }
    let gaps: Vec<f64> = rows.iter().map(|r| r.log2_bound - r.log2_exact).collect();
    let widest = gaps.iter().cloned().fold(f64::MIN, f64::max);
    ensure!(gaps[11] == widest, "largest gap should be at ell = n");
    Ok(format!(
        "12 rows, bound >= exact; log2 gap {:.2} at ell=2, {:.2} at ell=60",
        gaps[1], gaps[11]
    ))
}

fn criterion_3() -> Check {
    let at = |fig: u8, ell: usize| -> Result<WorkFactorParams, String> {
        Ok(WorkFactorParams { ell, ..figure_params(fig).map_err(|e| e.to_string())? })
    };
    let err = |e: sumrank::Error| e.to_string();
    let f2 = at(2, 1)?;
    let f3 = at(3, 1)?;
    let f4 = at(4, 2)?;
    let checks = [
        ("fig2 w_code", w_code(&f2), 620.0, 1.0),
        ("fig2 w_errors(ell=1)", w_errors(&f2).map_err(err)?, 661.0, 1.0),
        ("fig3 w_code", w_code(&f3), 1823.0, 1.0),
        ("fig3 w_errors(ell=1)", w_errors(&f3).map_err(err)?, 1125.0, 1.0),
        ("fig4 w_errors(ell=2)", w_errors(&f4).map_err(err)?, 1225.0, 5.0),
    ];
    for (name, got, want, tol) in checks {
        ensure!((got - want).abs() <= tol, "{name} = {got:.3}, expected {want} +- {tol}");
    }
    for ell in sumrank::counting::divisors(60) {
        ensure!((w_code(&at(2, ell)?) - 620.0).abs() <= 1.0, "fig2 w_code varies with ell");
    }
    let bound = w_errors(&f4).map_err(err)?;
    let exact = w_errors_exact(&f4).map_err(err)?;
    Ok(format!(
        "captions matched; fig4 ell=2 error enumeration: bound {bound:.2}, exact count {exact:.2}, caption 1225"
    ))
}

/// Tuples (q, ell, mu, zeta, t, s) of the small grid.
fn small_grid() -> Vec<(u64, usize, usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for q in [2, 3] {
        for ell in 1..=4 {
            for zeta in 1..=4 {
                for mu in 1..=zeta.min(3) {
                    for t in 0..=(6.min(ell * mu)) {
                        for s in t..=(8.min(ell * zeta)) {
                            out.push((q, ell, mu, zeta, t, s));
                        }
                    }
                }
            }
        }
    }
    out
}

fn direct_q(q: u64, ell: usize, mu: usize, zeta: usize, t: usize, s: usize) -> Result<BigRational, String> {
    let mut sum = BigRational::zero();
    for tv in ordered_decompositions(t, ell, mu) {
        let sv = scomp_deterministic(&tv, s, zeta).map_err(|e| e.to_string())?;
        sum += rho(&sv, &tv, q, zeta).map_err(|e| e.to_string())?.recip();
    }
    Ok(sum)
}

fn criterion_4() -> Check {
    let grid = small_grid();
    for &(q, ell, mu, zeta, t, s) in &grid {
        let d = SupportDistribution::new(q, zeta, t, ell, mu, s).map_err(|e| e.to_string())?;
        let direct = direct_q(q, ell, mu, zeta, t, s)?;
        ensure!(*d.normalizer() == direct, "({q},{ell},{mu},{zeta},{t},{s}): {} vs {direct}", d.normalizer());
    }
    Ok(format!("{} tuples, exact equality", grid.len()))
}

fn criterion_5() -> Check {
    let mut pairs = 0;
    let mut rng = seeded_rng(5);
    for (q, ell, mu, zeta, t, s) in small_grid() {
        let candidates = ordered_decompositions(s, ell, zeta);
        for tv in ordered_decompositions(t, ell, mu) {
            let mut best = BigRational::zero();
            for sv in &candidates {
                let r = rho(sv, &tv, q, zeta).map_err(|e| e.to_string())?;
                if r > best {
                    best = r;
                }
            }
            let sv = scomp(&tv, s, zeta, &mut rng).map_err(|e| e.to_string())?;
            ensure!(sv.iter().sum::<usize>() == s && sv.iter().zip(&tv).all(|(a, b)| a >= b && *a <= zeta), "scomp output {sv:?} invalid");
            let got = rho(&sv, &tv, q, zeta).map_err(|e| e.to_string())?;
            ensure!(got == best, "q={q} zeta={zeta} t={tv:?} s={s}: scomp gives {got}, max is {best}");
            pairs += 1;
        }
    }
    Ok(format!("{pairs} (t, s) pairs, scomp attains the maximum"))
}

fn criterion_6() -> Check {
    let mut checks = 0;
    for q in [2u64, 3, 4, 5, 8, 9] {
        let g_hi = dyadic(&gamma_q_upper(q), true);
        for a in 0..=12 {
            for b in 0..=a {
                let gb = rat(gaussian_binomial(a, b, q));
                let base = pow_q(q, (a - b) * b);
                ensure!(base <= gb && gb <= &g_hi * &base, "subspace count bounds fail at q={q} a={a} b={b}");
                checks += 1;
            }
        }
        for a in 1..=8 {
            for b in 1..=8 {
                for i in 0..=a.min(b) {
                    let nm = rat(num_matrices_of_rank(a, b, i, q).map_err(|e| e.to_string())?);
                    ensure!(nm <= rat(4) * pow_q(q, i * (a + b) - i * i), "rank count bound fails at q={q} {a}x{b} i={i}");
                    checks += 1;
                }
            }
        }
    }
    for (q, ell, mu, zeta, t, s) in small_grid() {
        let g_hi = dyadic(&gamma_q_upper(q), true);
        let g_lo = dyadic(&gamma_q_lower(q), false);
        let g_hi_l = Pow::pow(&g_hi, ell as u32);
        let g_lo_l = Pow::pow(&g_lo, ell as u32);
        let tvs = ordered_decompositions(t, ell, mu);
        for tv in &tvs {
            for sv in ordered_decompositions(s, ell, zeta) {
                if sv.iter().zip(tv).any(|(a, b)| a < b) {
                    continue;
                }
                let r = rho(&sv, tv, q, zeta).map_err(|e| e.to_string())?;
                let e: i64 = tv.iter().zip(&sv).map(|(&ti, &si)| -((ti * (zeta - si)) as i64)).sum();
                let x = pow_q_signed(q, e);
                ensure!(&x / &g_lo_l <= r && r <= &g_hi_l * &x, "rho sandwich fails at t={tv:?} s={sv:?}");
                checks += 1;
            }
        }
        if s > ell * mu {
            continue;
        }
        // compare ell-th powers to keep q^(t (zeta - s/ell)) rational
        let rhs_l = Pow::pow(&g_hi_l, ell as u32) * pow_q(q, t * zeta * ell - t * s);
        let mut worst = BigRational::zero();
        for tv in &tvs {
            let sv = scomp_deterministic(tv, s, zeta).map_err(|e| e.to_string())?;
            let inv = rho(&sv, tv, q, zeta).map_err(|e| e.to_string())?.recip();
            if inv > worst {
                worst = inv;
            }
        }
        ensure!(Pow::pow(&worst, ell as u32) <= rhs_l, "max rho^-1 bound fails at ({q},{ell},{mu},{zeta},{t},{s})");
        let d = SupportDistribution::new(q, zeta, t, ell, mu, s).map_err(|e| e.to_string())?;
        let c = rat(binomial(ell + t - 1, ell - 1));
        ensure!(
            Pow::pow(d.normalizer(), ell as u32) <= Pow::pow(&c, ell as u32) * &rhs_l,
            "normaliser bound fails at ({q},{ell},{mu},{zeta},{t},{s})"
        );
        checks += 2;
    }
    Ok(format!("{checks} inequalities hold"))
}

fn random_code_with_distance(params: SumRankParams, k: usize, ctx: &FieldContext, min_d: usize, seed: u64) -> Result<(LinearCode, usize), String> {
    let root = seeded_rng(seed);
    for i in 0..1000 {
        let code = LinearCode::random(params, k, ctx, &mut fork_rng(&root, i)).map_err(|e| e.to_string())?;
        let d = code.min_distance_bruteforce().map_err(|e| e.to_string())?;
        if d >= min_d {
            return Ok((code, d));
        }
    }
    Err(format!("no code with distance >= {min_d} found"))
}

fn criterion_7() -> Check {
    let ctx = make_field(2, 4).map_err(|e| e.to_string())?;
    let params = SumRankParams::new(6, 3, 4).map_err(|e| e.to_string())?;
    let mut per_kind = HashMap::new();
    let mut distances = Vec::new();
    for c in 0..10u64 {
        let (code, d) = random_code_with_distance(params, 2, &ctx, 2, 700 + c)?;
        distances.push(d);
        let root = seeded_rng(7000 + c);
        for i in 0..100u64 {
            let mut rng = fork_rng(&root, i);
            let w = (i as usize) % d;
            let e = UniformErrorSampler::new(w, params, &ctx).map_err(|e| e.to_string())?.sample(&mut rng);
            let r = code.random_codeword(&mut rng).add(&e, &ctx);
            for kind in [SupportKind::Row, SupportKind::Column] {
                let f = e.support(kind, &ctx);
                let got = match kind {
                    SupportKind::Row => column_erasure_decode(&code, &r.entries, &f),
                    SupportKind::Column => row_erasure_decode(&code, &r.entries, &f),
                };
                let got = got.map_err(|err| format!("{kind:?} decode failed: {err:?}"))?;
                ensure!(got == e, "{kind:?}: recovered error differs from the planted one");
                ensure!(code.syndrome(&got.entries).unwrap() == code.syndrome(&r.entries).unwrap(), "syndrome mismatch");
                let inner = got.support(kind, &ctx);
                ensure!(f.contains(&inner, &ctx.base).unwrap(), "recovered error leaves the support");
                *per_kind.entry(format!("{kind:?}")).or_insert(0) += 1;
            }
        }
    }
    ensure!(per_kind.values().all(|&v| v == 1000), "instance counts {per_kind:?}");
    Ok(format!("1000 row + 1000 column instances recovered; code distances {distances:?}"))
}

fn criterion_8() -> Check {
    let ctx = make_field(2, 4).map_err(|e| e.to_string())?;
    let params = SumRankParams::new(4, 2, 4).map_err(|e| e.to_string())?;
    let cfg = DecodeConfig { s: Some(2), max_iterations: Some(100_000), kind: KindChoice::Auto };
    let mut trials = 0u64;
    let mut iterations = 0u64;
    let mut all_exact = true;
    let mut lo = 0.0;
    let mut hi = 0.0;
    let mut q_val = BigRational::zero();
    let mut sum_sq = 0.0;
    for c in 0..5u64 {
        let (code, _) = random_code_with_distance(params, 1, &ctx, 3, 800 + c)?;
        let dec = GenericDecoder::new(code, 1, &cfg).map_err(|e| e.to_string())?;
        let (l, h) = dec.success_probability_bounds();
        lo = l.to_f64().unwrap();
        hi = h.to_f64().unwrap();
        q_val = dec.distribution().normalizer().clone();
        let summary = run_experiment(&dec, 500, 8000 + c).map_err(|e| e.to_string())?;
        for r in &summary.records {
            all_exact &= r.success;
            iterations += r.iterations;
            sum_sq += (r.iterations as f64).powi(2);
        }
        trials += summary.records.len() as u64;
    }
    ensure!(all_exact, "some returned error differs from the planted one");
    let n = trials as f64;
    let mean = iterations as f64 / n;
    let var = (sum_sq / n - mean * mean) * n / (n - 1.0);
    let p = 1.0 / mean;
    let se = (var / n).sqrt() / (mean * mean);
    ensure!(p >= lo - 3.0 * se && p <= hi + 3.0 * se, "p = {p:.4} outside [{lo:.4}, {hi:.4}] +- 3 * {se:.4}");
    Ok(format!("{trials} trials, p = {p:.4} (se {se:.4}) within 3 se of [1/Q, |T|/Q] = [{lo:.4}, {hi:.4}], Q = {q_val}"))
}

fn mean_iterations(params: SumRankParams, k: usize, t: usize, s: usize, q: u64, trials: u64, seed: u64) -> Result<(f64, f64), String> {
    let ctx = make_field(q, params.m).map_err(|e| e.to_string())?;
    let (code, d) = random_code_with_distance(params, k, &ctx, 2 * t + 1, seed)?;
    ensure!(d > 2 * t, "distance {d} too small");
    let cfg = DecodeConfig { s: Some(s), max_iterations: Some(1_000_000), kind: KindChoice::Auto };
    let dec = GenericDecoder::new(code, t, &cfg).map_err(|e| e.to_string())?;
    let summary = run_experiment(&dec, trials, seed).map_err(|e| e.to_string())?;
    ensure!(summary.records.iter().all(|r| r.success), "a trial returned a wrong error");
    Ok((summary.mean_iterations, (summary.var_iterations / trials as f64).sqrt()))
}

fn criterion_9() -> Check {
    let mut report = Vec::new();
    // Hamming: ell = n, so every block is a single coordinate
    let hamming = [(10usize, 3usize, 1usize, 4usize), (14, 4, 2, 6)];
    for (n, k, t, s) in hamming {
        let params = SumRankParams::new(n, n, 4).map_err(|e| e.to_string())?;
        let want = (binomial(n, t).to_f64().unwrap()) / binomial(s, t).to_f64().unwrap();
        let (mean, se) = mean_iterations(params, k, t, s, 2, 3000, 900 + n as u64)?;
        ensure!((mean - want).abs() <= 3.0 * se, "Hamming n={n} t={t} s={s}: mean {mean:.3} vs {want:.3} (se {se:.3})");
        report.push(format!("H n={n}: {mean:.2}/{want:.2}"));
    }
    // rank: ell = 1, zeta = n = m
    for (n, t, s) in [(4usize, 1usize, 2usize), (6, 2, 3)] {
        let params = SumRankParams::new(n, 1, n).map_err(|e| e.to_string())?;
        let want = gaussian_binomial(n, t, 2).to_f64().unwrap() / gaussian_binomial(s, t, 2).to_f64().unwrap();
        let (mean, se) = mean_iterations(params, 1, t, s, 2, 2000, 950 + n as u64)?;
        ensure!((mean - want).abs() <= 3.0 * se, "rank n={n} t={t} s={s}: mean {mean:.3} vs {want:.3} (se {se:.3})");
        report.push(format!("R n={n}: {mean:.2}/{want:.2}"));
    }
    Ok(format!("observed/predicted mean iterations {}", report.join(", ")))
}

fn chi_square(observed: &HashMap<Vec<u64>, u64>, expected: &[(Vec<u64>, f64)], draws: u64) -> Result<(f64, f64), String> {
    let mut stat = 0.0;
    for (key, p) in expected {
        let e = p * draws as f64;
        let o = *observed.get(key).unwrap_or(&0) as f64;
        stat += (o - e).powi(2) / e;
    }
    ensure!(observed.len() <= expected.len(), "draws outside the expected support");
    let df = (expected.len() - 1) as f64;
    let crit = ChiSquared::new(df).map_err(|e| e.to_string())?.inverse_cdf(0.99);
    Ok((stat, crit))
}

fn criterion_10() -> Check {
    let draws = 100_000u64;
    let mut out = Vec::new();

    let ctx = make_field(2, 2).map_err(|e| e.to_string())?;
    let params = SumRankParams::new(4, 2, 2).map_err(|e| e.to_string())?;
    let sampler = UniformErrorSampler::new(2, params, &ctx).map_err(|e| e.to_string())?;
    let mut sphere = Vec::new();
    for v in 0..256u64 {
        let entries: Vec<u64> = (0..4).map(|i| (v >> (2 * i)) & 3).collect();
        let bv = BlockVector::new(params, entries.clone()).unwrap();
        if bv.sum_rank_weight(&ctx) == 2 {
            sphere.push(entries);
        }
    }
    ensure!(sphere.len() == 93, "sphere has {} vectors", sphere.len());
    let mut rng = seeded_rng(10);
    let mut seen = HashMap::new();
    for _ in 0..draws {
        *seen.entry(sampler.sample(&mut rng).entries).or_insert(0) += 1;
    }
    let expected: Vec<_> = sphere.into_iter().map(|v| (v, 1.0 / 93.0)).collect();
    let (stat, crit) = chi_square(&seen, &expected, draws)?;
    ensure!(stat < crit, "uniform errors: chi2 {stat:.1} >= {crit:.1}");
    out.push(format!("errors chi2 {stat:.1}<{crit:.1}"));

    let gf2 = make_field(2, 1).map_err(|e| e.to_string())?;
    let mut seen = HashMap::new();
    for _ in 0..draws {
        let basis = sample_uniform_subspace(2, 4, &gf2.base, &mut rng).map_err(|e| e.to_string())?;
        let key: Vec<u64> = (0..2).flat_map(|r| basis.row(r).to_vec()).collect();
        *seen.entry(key).or_insert(0) += 1;
    }
    ensure!(seen.len() == 35, "{} distinct planes drawn", seen.len());
    let expected: Vec<_> = seen.keys().map(|k| (k.clone(), 1.0 / 35.0)).collect();
    let (stat, crit) = chi_square(&seen, &expected, draws)?;
    ensure!(stat < crit, "planes: chi2 {stat:.1} >= {crit:.1}");
    out.push(format!("planes chi2 {stat:.1}<{crit:.1}"));

    let dist = SupportDistribution::new(2, 2, 3, 3, 2, 4).map_err(|e| e.to_string())?;
    let mut seen = HashMap::new();
    for _ in 0..draws {
        let t: Vec<u64> = dist.draw_decomposition(&mut rng).into_iter().map(|x| x as u64).collect();
        *seen.entry(t).or_insert(0) += 1;
    }
    let mut expected = Vec::new();
    let mut total = BigRational::zero();
    for tv in ordered_decompositions(3, 3, 2) {
        let p = dist.decomposition_probability(&tv).map_err(|e| e.to_string())?;
        total += &p;
        expected.push((tv.into_iter().map(|x| x as u64).collect(), p.to_f64().unwrap()));
    }
    ensure!(total.is_one(), "decomposition probabilities sum to {total}");
    let (stat, crit) = chi_square(&seen, &expected, draws)?;
    ensure!(stat < crit, "decompositions: chi2 {stat:.1} >= {crit:.1}");
    out.push(format!("decompositions chi2 {stat:.1}<{crit:.1}"));
    Ok(out.join(", "))
}

fn criterion_11() -> Check {
    let sol = optimal_distribution_lp(2, 1, 1, 2, 1, 1, 2000).map_err(|e| e.to_string())?;
    ensure!(sol.xi == BigRational::new(1.into(), 2.into()), "hand instance xi = {}", sol.xi);
    let mut solved = 0;
    let mut closest = f64::MAX;
    for (q, ell, mu, zeta, t, s) in small_grid() {
        let sol = optimal_distribution_lp(q, zeta, t, ell, mu, s, 2000).map_err(|e| format!("({q},{ell},{mu},{zeta},{t},{s}): {e}"))?;
        let inst = &sol.instance;
        ensure!(simplex::verify_certificate(&inst.c, &inst.a, &inst.b, &sol.optimum), "no optimality certificate");
        ensure!(sol.probability_total().is_one(), "probabilities do not sum to one");
        let q_val = SupportDistribution::new(q, zeta, t, ell, mu, s).map_err(|e| e.to_string())?.normalizer().clone();
        let inv = sol.xi.recip();
        ensure!(inv <= q_val, "({q},{ell},{mu},{zeta},{t},{s}): 1/xi = {inv} > Q = {q_val}");
        closest = closest.min((&q_val / &inv).to_f64().unwrap());
        solved += 1;
    }
    Ok(format!("xi = 1/2 on the hand instance; {solved} grid LPs with 1/xi <= Q (smallest Q*xi {closest:.4})"))
}

fn criterion_12() -> Check {
    let cfg = DemoConfig { q: 2, m: 8, n: 4, k: 1, ell: 2, t: 1, trials: 100, seed: 12, false_negative_rate: 0.0 };
    let r = run_demo(&cfg).map_err(|e| e.to_string())?;
    ensure!(r.rp_positive_rate >= 0.5, "positive instances accepted at rate {}", r.rp_positive_rate);
    ensure!(r.rp_unverified_true == 0, "{} unverified true answers", r.rp_unverified_true);
    ensure!(r.rp_negative_true_rate == 0.0, "a negative instance was accepted");
    Ok(format!(
        "RP accepts {:.2} of positives, 0 unverified; coRP rejects {:.2} of negatives; weight preserved in {:.2} of lifts",
        r.rp_positive_rate, r.corp_negative_false_rate, r.weight_preserved_rate
    ))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Check, Option<Duration>)> = vec![
        ("sphere counts equal enumeration", criterion_1, Some(Duration::from_secs(120))),
        ("sphere bound sweep q=2 m=40 n=60 t=10", criterion_2, Some(Duration::from_secs(60))),
        ("figure caption work factors", criterion_3, None),
        ("normaliser identity", criterion_4, Some(Duration::from_secs(60))),
        ("support completion optimality", criterion_5, None),
        ("bound suites", criterion_6, None),
        ("erasure decoder exactness", criterion_7, None),
        ("generic decoder success probability", criterion_8, Some(Duration::from_secs(120))),
        ("Hamming and rank specialisations", criterion_9, None),
        ("sampler uniformity", criterion_10, None),
        ("optimal distribution LP", criterion_11, None),
        ("reduction demo", criterion_12, Some(Duration::from_secs(120))),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let result = match (result, budget) {
            (Ok(_), Some(b)) if elapsed > b => Err(format!("took {elapsed:.1?}, budget {b:?}")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("PASS {:>2} {name} ({elapsed:.2?}): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({elapsed:.2?}): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
