//! Acceptance run: one line per criterion. Exits non-zero when a blocking
//! criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rewire::code::StabilizerCode;
use rewire::library::*;
use rewire::metrics::*;
use rewire::pauli::{Pauli, PauliOperator};
use rewire::planner::*;
use rewire::search::Parallelism;
use rewire::sim::*;

/// Amplitude tolerance for dense comparisons.
const AMPLITUDE_TOL: f64 = 1e-10;
/// Weight cap for distance searches.
const WEIGHT_CAP: usize = 4;
/// Fewest seeds sampled when a branch tree is too large to enumerate.
const MIN_SAMPLED_SEEDS: u64 = 1000;
/// Largest branch tree enumerated exhaustively.
const MAX_ENUMERATED_BRANCHES: usize = 1 << 14;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pauli(s: &str, n: usize) -> PauliOperator {
    PauliOperator::parse(s, Some(n)).unwrap()
}

fn measured(plan: &RewirePlan, code: &StabilizerCode) -> Result<BTreeSet<usize>, String> {
    plan.steps
        .iter()
        .map(|s| {
            code.generators()
                .iter()
                .position(|g| g == &s.measure)
                .ok_or_else(|| format!("measured {} is not a listed generator", s.measure.compact()))
        })
        .collect()
}

fn fmt_set(s: &BTreeSet<usize>) -> String {
    s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

fn c1() -> Check {
    let (s, t) = (padded_steane(), reed_muller());
    let d = decompose_blocks(&s, &t, &DecomposeOptions::default()).map_err(|e| e.to_string())?;
    let plan = plan_between(&s, &t, &PlanOptions::default()).map_err(|e| e.to_string())?;
    let got = measured(&plan, &t)?;
    ensure(got == BTreeSet::from([0, 1, 2, 3, 8, 9, 10]), || format!("measured g'{{{}}}", fmt_set(&got)))?;
    ensure(plan.len() == 7 && d.b() == 0 && d.c() == 7, || format!("N={} b={} c={}", plan.len(), d.b(), d.c()))?;
    Ok(format!("N=7 b=0 c=7, measured g'{{{}}}", fmt_set(&got)))
}

fn c2() -> Check {
    let (s, t) = (padded_steane(), reed_muller());
    let opts = PlanOptions { reduction: Reduction::Column, ..Default::default() };
    let plan = plan_between(&t, &s, &opts).map_err(|e| e.to_string())?;
    let got = measured(&plan, &s)?;
    ensure(got == BTreeSet::from([0, 1, 2, 6, 8, 9, 10]), || format!("measured g{{{}}}", fmt_set(&got)))?;
    Ok(format!("measured g{{{}}}", fmt_set(&got)))
}

fn c3() -> Check {
    let (s, t) = (padded_steane(), reed_muller());
    let there = plan_between(&s, &t, &PlanOptions::default()).map_err(|e| e.to_string())?;
    let back = plan_between(&t, &s, &PlanOptions { reduction: Reduction::Column, ..Default::default() })
        .map_err(|e| e.to_string())?;
    let plan = RewirePlan::chain(&[there, back]).map_err(|e| e.to_string())?;
    let logicals = s.compute_logicals().map_err(|e| e.to_string())?;
    let reference = s.clone().with_logicals(logicals.clone());
    let mut runs = 0usize;
    let mut mode = String::new();
    for (label, fix) in [("Z", &logicals[0].1), ("X", &logicals[0].0)] {
        let start = prepare_codespace(&s, &[fix.clone()], OutcomeSource::seeded(0)).map_err(|e| e.to_string())?;
        let run = execute_plan(&mut start.clone(), &plan, &logicals).map_err(|e| e.to_string())?;
        let action = extract_logical_action(&reference, &run.logicals).map_err(|e| e.to_string())?;
        ensure(action.is_identity(), || format!("action {:?} signs {:?}", action.symplectic.to_nested(), action.signs))?;
        let moved = if label == "Z" { &run.logicals[0].1 } else { &run.logicals[0].0 };
        let check_final = |st: &StabilizerState| -> Result<(), String> {
            ensure(s.generators().iter().all(|g| st.expectation(g) == Ok(Some(1))), || "left the codespace".into())?;
            ensure(st.expectation(moved) == Ok(Some(1)), || format!("logical {label} not preserved"))?;
            ensure(st.expectation(fix) == Ok(Some(1)), || format!("original {label} not restored"))
        };
        let random_steps = count_random_steps(&start, &plan)?;
        if 1usize << random_steps <= MAX_ENUMERATED_BRANCHES {
            let branches = execute_all_branches(&start, &plan, Parallelism::default()).map_err(|e| e.to_string())?;
            let canon = branches[0].state.canonical();
            for b in &branches {
                check_final(&b.state)?;
                ensure(b.state.canonical() == canon, || "branches disagree".into())?;
            }
            runs += branches.len();
            mode = format!("{} branches enumerated per preparation", branches.len());
        } else {
            for seed in 0..MIN_SAMPLED_SEEDS {
                let mut st = start.clone();
                st.set_outcomes(OutcomeSource::seeded(seed));
                execute_plan(&mut st, &plan, &logicals).map_err(|e| e.to_string())?;
                check_final(&st)?;
            }
            runs += MIN_SAMPLED_SEEDS as usize;
            mode = format!("{MIN_SAMPLED_SEEDS} seeds sampled per preparation");
        }
    }
    Ok(format!("identity action; {mode}; {runs} runs total"))
}

/// Random outcomes along one run; deterministic steps stay deterministic on
/// every branch because each branch differs by a stabilizer-preserving flip.
fn count_random_steps(start: &StabilizerState, plan: &RewirePlan) -> Result<usize, String> {
    let mut st = start.clone();
    let mut random = 0;
    for (i, step) in plan.steps.iter().enumerate() {
        if st.expectation(&step.measure).map_err(|e| e.to_string())?.is_none() {
            random += 1;
        }
        apply_rewire_step(&mut st, step, i, None).map_err(|e| e.to_string())?;
    }
    Ok(random)
}

fn c4() -> Check {
    let (s, t) = (padded_steane(), reed_muller());
    let mut mins = Vec::new();
    for plan in [
        plan_between(&s, &t, &PlanOptions::default()),
        plan_between(&t, &s, &PlanOptions { reduction: Reduction::Column, ..Default::default() }),
    ] {
        let plan = plan.map_err(|e| e.to_string())?;
        let prof = path_distance_profile(&plan, WEIGHT_CAP, Parallelism::default()).map_err(|e| e.to_string())?;
        let ds: Vec<usize> = prof.iter().map(DistanceReport::at_least).collect();
        ensure(ds.iter().all(|&d| d >= 3), || format!("profile {ds:?}"))?;
        mins.push(*ds.iter().min().unwrap());
    }
    Ok(format!("min distance {} (forward) and {} (backward) at weight cap {WEIGHT_CAP}", mins[0], mins[1]))
}

fn seq(plan: &RewirePlan) -> Vec<Vec<String>> {
    plan.intermediate_codes.iter().map(|c| c.generators().iter().map(PauliOperator::compact).collect()).collect()
}

fn c5() -> Check {
    let (a, b) = toy_3q();
    let m = connectivity_matrix(a.generators(), b.generators()).map_err(|e| e.to_string())?;
    ensure(m.to_nested() == vec![vec![0, 1], vec![0, 1]], || format!("M = {:?}", m.to_nested()))?;
    let plan = plan_between(&a, &b, &PlanOptions::default()).map_err(|e| e.to_string())?;
    let expect: Vec<Vec<String>> = [
        vec!["Z1Z2Z3", "Z1Z2"],
        vec!["X1X2X3", "Z1Z2"],
        vec!["Z1", "Z1Z2"],
        vec!["Z1", "X2X3"],
    ]
    .iter()
    .map(|v| v.iter().map(|s| s.to_string()).collect())
    .collect();
    ensure(seq(&plan) == expect, || format!("3-qubit sequence {:?}", seq(&plan)))?;
    let (a, b) = toy_2q();
    let plan = plan_between(&a, &b, &PlanOptions::default()).map_err(|e| e.to_string())?;
    let expect = vec![vec!["Z1".to_string()], vec!["X1X2".to_string()], vec!["Z2".to_string()]];
    ensure(seq(&plan) == expect, || format!("2-qubit sequence {:?}", seq(&plan)))?;
    Ok("M=[[0,1],[0,1]]; both generator sequences bit-exact".into())
}

fn c6() -> Check {
    let r = code_distance(&qubit_swap_mid(), WEIGHT_CAP, Parallelism::default()).map_err(|e| e.to_string())?;
    ensure(r.distance == Some(1) && r.witness == Some(pauli("Z7", 7)), || r.to_string())?;
    let (a, b) = qubit_swap_pair();
    let plan = plan_between(&a, &b, &PlanOptions::default()).map_err(|e| e.to_string())?;
    let prof: Vec<Option<usize>> = path_distance_profile(&plan, WEIGHT_CAP, Parallelism::default())
        .map_err(|e| e.to_string())?
        .iter()
        .map(|r| r.distance)
        .collect();
    ensure(prof == vec![Some(3), Some(1), Some(3)], || format!("profile {prof:?}"))?;
    Ok(format!("{r}; planner path profile [3,1,3]"))
}

fn c7() -> Check {
    let (s, t) = (padded_steane(), reed_muller());
    let m = connectivity_matrix(s.generators(), t.generators()).map_err(|e| e.to_string())?;
    // row g_i lists the primed columns holding a one
    let table: [&[usize]; 14] = [
        &[9],
        &[8],
        &[10],
        &[],
        &[],
        &[],
        &[3],
        &[0, 3],
        &[1, 3],
        &[0, 1, 3],
        &[2, 3],
        &[0, 2, 3],
        &[1, 2, 3],
        &[0, 1, 2, 3],
    ];
    for (i, ones) in table.iter().enumerate() {
        for j in 0..14 {
            ensure(m.get(i, j) == ones.contains(&j), || format!("entry ({i},{j}) differs"))?;
        }
    }
    let d = decompose_blocks(&s, &t, &DecomposeOptions::default()).map_err(|e| e.to_string())?;
    let g = |i: usize| s.generator(i).clone();
    let pairs = [
        (g(13).mul_unchecked(&g(12)), 0),
        (g(11).mul_unchecked(&g(13)), 1),
        (g(9).mul_unchecked(&g(13)), 2),
        (g(6), 3),
    ];
    for (src, j) in &pairs {
        ensure(
            d.block_c.iter().any(|c| c.target_index == *j && c.source.unsigned() == src.unsigned()),
            || format!("missing block-C pair for g{j}'"),
        )?;
    }
    Ok("14x14 table bit-exact; pairs {g13g12,g0'} {g11g13,g1'} {g9g13,g2'} {g6,g3'} present".into())
}

fn random_anticommuting(n: usize, rng: &mut ChaCha8Rng) -> (PauliOperator, PauliOperator) {
    loop {
        let g = common::random_pauli(n, rng);
        let h = common::random_pauli(n, rng);
        if g.anticommutes(&h) {
            return (g, h);
        }
    }
}

fn c8() -> Check {
    use common::*;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=3);
        let (g, h) = random_anticommuting(n, &mut rng);
        let d = 1 << n;
        // random state in the +1 eigenspace of g
        let raw: Vec<Complex64> = (0..d).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let psi = normalize(act(&plus_projector(&g), &raw));
        let target = act(&rewire_u(&g, &h), &psi);
        let plus = normalize(act(&plus_projector(&h), &psi));
        let minus = normalize(act(&pauli(&g), &act(&plus_projector(&h.negated()), &psi)));
        for out in [&plus, &minus] {
            ensure(same_ray(out, &target, AMPLITUDE_TOL), || format!("dense branch mismatch for g={g} g'={h}"))?;
            let overlap: Complex64 = out.iter().zip(&target).map(|(x, y)| x.conj() * y).sum();
            worst = worst.max((1.0 - overlap.norm()).abs());
        }
        // the tableau simulator on a random stabilizer state of the same space
        let code = StabilizerCode::new(n, vec![g.clone()], "g");
        let st = prepare_codespace(&code, &[], OutcomeSource::seeded(rng.gen())).map_err(|e| e.to_string())?;
        let phi = state(st.stabilizers());
        let want = act(&rewire_u(&g, &h), &phi);
        for minus in [false, true] {
            let mut t = st.clone();
            t.set_outcomes(OutcomeSource::forced([minus], 0));
            apply_rewire_step(&mut t, &MeasurementStep { measure: h.clone(), correction: g.clone() }, 0, None)
                .map_err(|e| e.to_string())?;
            ensure(same_ray(&state(t.stabilizers()), &want, AMPLITUDE_TOL), || format!("tableau branch mismatch for g={g} g'={h}"))?;
        }
    }
    Ok(format!("200 pairs, both branches, dense and tableau; worst |1-|<a,b>|| = {worst:.1e}"))
}

fn c9() -> Check {
    use common::*;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut dense_cases = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=8);
        let (g, h) = random_anticommuting(n, &mut rng);
        let report = verify_unitary_properties(&g, &h).map_err(|e| e.to_string())?;
        ensure(report.symplectic_ok && report.maps_g_to_g_new, || format!("symplectic check failed for {g} {h}"))?;
        let sigma = common::random_pauli(n, &mut rng);
        let img = transport(&sigma, &g, &h);
        ensure(img.is_hermitian(), || "image not Hermitian".into())?;
        if sigma.anticommutes(&g.mul_unchecked(&h)) {
            ensure(img == sigma.mul_unchecked(&g).mul_unchecked(&h), || "anticommuting rule".into())?;
        } else {
            ensure(img == sigma, || "commuting rule".into())?;
        }
        if n <= 3 {
            ensure(report.passes(AMPLITUDE_TOL), || format!("library dense check {report:?}"))?;
            let u = rewire_u(&g, &h);
            let d = 1 << n;
            ensure(close(&mul(&u, &dagger(&u)), &eye(d), AMPLITUDE_TOL), || "U not unitary".into())?;
            let lhs = mul(&mul(&u, &pauli(&sigma)), &dagger(&u));
            ensure(close(&lhs, &pauli(&img), AMPLITUDE_TOL), || format!("dense conjugation of {sigma}"))?;
            let g_img = mul(&mul(&u, &pauli(&g)), &dagger(&u));
            ensure(close(&g_img, &pauli(&h), AMPLITUDE_TOL), || "U g U^dag != g'".into())?;
            dense_cases += 1;
        }
    }
    Ok(format!("1000 fuzz cases exact in symplectic form; {dense_cases} also checked densely"))
}

fn c10() -> Check {
    let mut aligned = 0;
    let mut total_steps = 0;
    for seed in 0..500u64 {
        let (a, b) = random_pair(seed, 8);
        let decomp = match decompose_with(&a, &b, &PlanOptions::default()) {
            Ok(d) => (d, b.clone()),
            Err(PlanError::SignConflict(_)) => {
                let fixed = align_shared_signs(&a, &b).ok_or_else(|| format!("seed {seed}: signs cannot be aligned"))?;
                aligned += 1;
                (decompose_with(&a, &fixed, &PlanOptions::default()).map_err(|e| format!("seed {seed}: {e}"))?, fixed)
            }
            Err(e) => return Err(format!("seed {seed}: {e}")),
        };
        let (d, target) = decomp;
        let plan = build_plan(&d, a.label(), target.label());
        ensure(plan.len() == 2 * d.b() + d.c(), || format!("seed {seed}: N={} b={} c={}", plan.len(), d.b(), d.c()))?;
        for (i, step) in plan.steps.iter().enumerate() {
            let (before, after) = (&plan.intermediate_codes[i], &plan.intermediate_codes[i + 1]);
            let changed: Vec<usize> =
                (0..before.generators().len()).filter(|&j| before.generator(j) != after.generator(j)).collect();
            ensure(changed.len() == 1, || format!("seed {seed} step {i}: {} generators changed", changed.len()))?;
            let j = changed[0];
            ensure(before.generator(j).anticommutes(after.generator(j)), || format!("seed {seed} step {i}: commuting swap"))?;
            ensure(&step.measure == after.generator(j) && &step.correction == before.generator(j), || {
                format!("seed {seed} step {i}: step does not match codes")
            })?;
            ensure(after.validate().is_valid(), || format!("seed {seed} step {i}: invalid code"))?;
        }
        ensure(plan.intermediate_codes[0].same_group(&a, true), || format!("seed {seed}: wrong start"))?;
        ensure(plan.final_code().unwrap().same_group(&target, true), || format!("seed {seed}: wrong end"))?;
        total_steps += plan.len();
    }
    Ok(format!("500 pairs, {total_steps} steps; {aligned} pairs needed shared-sign alignment"))
}

fn c11() -> Check {
    let code = steane();
    let g0 = code.generator(0).clone();
    let rest = code.with_generators(code.generators()[1..].to_vec());
    let mut minus = 0;
    for seed in 0..100 {
        let fresh = prepare_codespace(&rest, &[], OutcomeSource::seeded(seed)).map_err(|e| e.to_string())?;
        let mut cat = fresh.clone();
        let out = cat_state_measure(&mut cat, &g0, None).map_err(|e| e.to_string())?;
        let mut direct = fresh.clone();
        direct.set_outcomes(OutcomeSource::forced([out.outcome == -1], 0));
        ensure(direct.measure(&g0) == Ok(out.outcome), || "direct outcome differs".into())?;
        ensure(direct.canonical() == cat.canonical(), || format!("trial {seed}: post-states differ"))?;
        minus += usize::from(out.outcome == -1);
    }
    let fresh = prepare_codespace(&code, &[pauli("Z1Z2Z3Z4Z5Z6Z7", 7)], OutcomeSource::seeded(0)).map_err(|e| e.to_string())?;
    let mut spread = 0;
    for j in 0..g0.weight() {
        let mut clean = fresh.clone();
        clean.set_outcomes(OutcomeSource::seeded(j as u64));
        let mut dirty = clean.clone();
        cat_state_measure(&mut clean, &g0, None).map_err(|e| e.to_string())?;
        cat_state_measure(&mut dirty, &g0, Some(j)).map_err(|e| e.to_string())?;
        let e = single_error_footprint(&clean, &dirty, 1).ok_or_else(|| format!("ancilla {j}: error spread beyond one qubit"))?;
        spread = spread.max(e.weight());
    }
    Ok(format!("100 paired trials identical ({minus} odd parity); single ancilla X error reaches {spread} data qubit"))
}

fn c12() -> Check {
    let (l, r) = defect_hop_pair();
    let plan = plan_between(&l, &r, &PlanOptions::default()).map_err(|e| e.to_string())?;
    let ms: Vec<PauliOperator> = plan.steps.iter().map(|s| s.measure.clone()).collect();
    ensure(ms == vec![pauli("X4", 25), pauli("Z4Z5Z6Z7", 25)], || format!("defect_hop plan {ms:?}"))?;
    let (l, r) = e_to_m_pair();
    let d = decompose_blocks(&l, &r, &DecomposeOptions::default()).map_err(|e| e.to_string())?;
    let prods = d.complement_products();
    ensure(prods.len() == 1, || format!("e_to_m b={}", prods.len()))?;
    let y = &prods[0];
    ensure(y.weight() > 0 && y.support().iter().all(|&q| y.get(q) == Pauli::Y), || format!("e_to_m product {y}"))?;
    let (l, r) = twist_pair();
    let plan = plan_between(&l, &r, &PlanOptions::default()).map_err(|e| e.to_string())?;
    let ms: Vec<String> = plan.steps.iter().map(|s| s.measure.compact()).collect();
    ensure(ms == vec!["X2X3X6X7".to_string()], || format!("twist plan {ms:?}"))?;
    Ok(format!("defect_hop [X4, Z4Z5Z6Z7]; e_to_m product {}; twist [X2X3X6X7]", y.compact()))
}

fn bound_check(a: &StabilizerCode, b: &StabilizerCode, cap: usize) -> Result<(usize, usize), String> {
    let par = Parallelism::default();
    let (b, opts) = match decompose_with(a, b, &PlanOptions::default()) {
        Err(PlanError::SignConflict(_)) => (align_shared_signs(a, b).ok_or("signs cannot be aligned")?, PlanOptions::default()),
        _ => (b.clone(), PlanOptions::default()),
    };
    let decomp = decompose_with(a, &b, &opts).map_err(|e| e.to_string())?;
    let plan = build_plan(&decomp, a.label(), b.label());
    let path_min = path_distance_profile(&plan, cap, par)
        .map_err(|e| e.to_string())?
        .iter()
        .map(DistanceReport::at_least)
        .min()
        .unwrap();
    let bound = enumerate_subsystem_codes(&decomp)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|sc| subsystem_distance(sc, cap, par).map(|r| r.at_least()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?
        .into_iter()
        .min()
        .unwrap();
    ensure(path_min >= bound, || format!("{} -> {}: path min {path_min} < bound {bound}", a.label(), b.label()))?;
    Ok((path_min, bound))
}

fn c13() -> Check {
    let mut pairs: Vec<(StabilizerCode, StabilizerCode, usize)> = vec![
        (padded_steane(), reed_muller(), WEIGHT_CAP),
        (reed_muller(), padded_steane(), WEIGHT_CAP),
    ];
    for (a, b) in [toy_2q(), toy_3q(), qubit_swap_pair(), defect_hop_pair(), e_to_m_pair(), twist_pair()] {
        pairs.push((a, b, WEIGHT_CAP));
    }
    let mut fixture_summary = Vec::new();
    for (a, b, cap) in &pairs {
        let (m, bound) = bound_check(a, b, *cap)?;
        fixture_summary.push(format!("{}:{m}>={bound}", a.label()));
    }
    let mut random = 0;
    let mut seed = 0u64;
    while random < 100 {
        let (a, b) = random_pair(10_000 + seed, 8);
        seed += 1;
        if a.k() == 0 {
            continue;
        }
        bound_check(&a, &b, a.n())?;
        random += 1;
    }
    Ok(format!("{} fixture paths ({}) and 100 random pairs", pairs.len(), fixture_summary.join(" ")))
}

fn c14() -> Check {
    braid::run()
}

mod braid {
    //! Moving an e-type defect around an m-type defect on a planar patch.

    use super::*;

    pub const ROWS: usize = 5;
    pub const COLS: usize = 6;
    /// Removed X plaquette.
    pub const M_DEFECT: (usize, usize) = (2, 3);
    /// Z plaquettes visited by the removed Z plaquette, closing the loop.
    pub const E_PATH: [(usize, usize); 5] = [(1, 3), (2, 4), (3, 3), (2, 2), (1, 3)];

    fn layout(e: (usize, usize)) -> SurfaceLayout {
        SurfaceLayout::new(ROWS, COLS).with_defect(e.0, e.1).with_defect(M_DEFECT.0, M_DEFECT.1)
    }

    pub fn run() -> Check {
        let codes: Vec<StabilizerCode> = E_PATH
            .iter()
            .enumerate()
            .map(|(i, &e)| build_surface_code(&layout(e), &format!("braid{i}")).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        let n = codes[0].n();
        let plans = codes
            .windows(2)
            .map(|w| plan_between(&w[0], &w[1], &PlanOptions::default()).map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        let plan = RewirePlan::chain(&plans).map_err(|e| e.to_string())?;
        let start = &codes[0];
        let lay = layout(E_PATH[0]);
        let z_e = lay.stabilizer(E_PATH[0].0, E_PATH[0].1);
        let x_m = lay.stabilizer(M_DEFECT.0, M_DEFECT.1);
        // conjugate partners of the two loop operators
        let mut cons: Vec<PauliOperator> = start.generators().to_vec();
        cons.push(z_e.clone());
        cons.push(x_m.clone());
        let syn = |ze: bool, xm: bool| {
            let mut v = rewire::bits::BitVec::zeros(cons.len());
            v.set(cons.len() - 2, ze);
            v.set(cons.len() - 1, xm);
            v
        };
        let par = Parallelism::default();
        let x_e = rewire::search::min_weight_with_syndrome(&cons, n, &syn(true, false), par).ok_or("no partner for the e loop")?;
        let z_m = rewire::search::min_weight_with_syndrome(&cons, n, &syn(false, true), par).ok_or("no partner for the m loop")?;
        let moved = |p: &PauliOperator| plan.steps.iter().fold(p.clone(), |acc, s| transport(&acc, &s.correction, &s.measure));
        let same = |a: &PauliOperator, b: &PauliOperator| start.contains(&a.mul_unchecked(b), false);
        let (xe1, ze1, xm1, zm1) = (moved(&x_e), moved(&z_e), moved(&x_m), moved(&z_m));
        ensure(same(&ze1, &z_e) && same(&xm1, &x_m), || "loop operators were not preserved".into())?;
        ensure(!same(&xe1, &x_e) || !same(&zm1, &z_m), || "the braid acted trivially".into())?;
        ensure(same(&xe1, &x_e.mul_unchecked(&x_m)), || format!("X_e -> {} is not X_e X_m", xe1.compact()))?;
        ensure(same(&zm1, &z_m.mul_unchecked(&z_e)), || format!("Z_m -> {} is not Z_m Z_e", zm1.compact()))?;
        // the simulator agrees: prepare X_e = +1, run, check X_e X_m
        let st = prepare_codespace(start, &[x_e.clone()], OutcomeSource::seeded(14)).map_err(|e| e.to_string())?;
        let mut s2 = st.clone();
        execute_plan(&mut s2, &plan, &[]).map_err(|e| e.to_string())?;
        ensure(s2.expectation(&xe1) == Ok(Some(1)), || "simulated state lost the transported operator".into())?;
        Ok(format!(
            "{}x{} patch, n={n}, k={}, {} measurements: X_e -> X_e X_m, Z_m -> Z_m Z_e (CNOT)",
            ROWS,
            COLS,
            start.k(),
            plan.len()
        ))
    }
}

struct Criterion {
    id: u8,
    name: &'static str,
    budget: Duration,
    blocking: bool,
    run: fn() -> Check,
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "steane -> reed-muller plan", budget: secs(1), blocking: true, run: c1 },
        Criterion { id: 2, name: "reed-muller -> steane plan", budget: secs(1), blocking: true, run: c2 },
        Criterion { id: 3, name: "round trip is the logical identity", budget: secs(30), blocking: true, run: c3 },
        Criterion { id: 4, name: "steane/reed-muller distance profile", budget: secs(30), blocking: true, run: c4 },
        Criterion { id: 5, name: "two- and three-qubit examples", budget: secs(1), blocking: true, run: c5 },
        Criterion { id: 6, name: "qubit-swap distance drop", budget: secs(5), blocking: true, run: c6 },
        Criterion { id: 7, name: "connectivity table and block-C pairs", budget: secs(1), blocking: true, run: c7 },
        Criterion { id: 8, name: "channel equals unitary", budget: secs(10), blocking: true, run: c8 },
        Criterion { id: 9, name: "rewiring unitary properties", budget: secs(10), blocking: true, run: c9 },
        Criterion { id: 10, name: "N = 2b + c and adjacency on random pairs", budget: secs(30), blocking: true, run: c10 },
        Criterion { id: 11, name: "cat-state measurement", budget: secs(10), blocking: true, run: c11 },
        Criterion { id: 12, name: "surface-code fixtures", budget: secs(5), blocking: true, run: c12 },
        Criterion { id: 13, name: "subsystem distance bound", budget: secs(60), blocking: true, run: c13 },
        Criterion { id: 14, name: "defect braid gives CNOT (stretch)", budget: secs(60), blocking: false, run: c14 },
    ];
    let mut failed = 0;
    for c in &criteria {
        let t0 = Instant::now();
        let result = (c.run)();
        let elapsed = t0.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= c.budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget")),
            Err(e) => (false, e),
        };
        let tag = match (ok, c.blocking) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "FAIL (non-blocking)",
        };
        println!(
            "criterion {:>2} {tag}: {} [{:.2}s of {}s] {detail}",
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
        if !ok && c.blocking {
            failed += 1;
        }
    }
    if failed > 0 {
        eprintln!("{failed} blocking criteria failed");
        std::process::exit(1);
    }
}
