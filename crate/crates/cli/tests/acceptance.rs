//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line (run with `--nocapture` to see every line).

use std::sync::Arc;

use once_cell::sync::Lazy;

use wittgroup::cohomology::{
    h1, h2, map_cocycle1, map_cocycle2, h2_intersection_descent, h2_map_injective,
    w_dim, CoboundarySolver2,
};
use wittgroup::extensions::{
    build_twisted, matrix_extension, sub_extension, transgression, twisted_extension,
};
use wittgroup::fp::{Eliminator, FpMat, FpVec, ImageSolver};
use wittgroup::galois_ring::{LocalRing, RingSurjection};
use wittgroup::gmodule::{
    classify_submodules, hom_space, standard_modules, submodule, GModule, ModuleMap,
    StandardModules,
};
use wittgroup::group::{sl_group, FiniteGroup, CLOSURE_CAP};
use wittgroup::matrix::RingMatrix;
use wittgroup::structure_theorem::{
    counterexample_f5, dual_cocycle_instance, formula1_trials, nonsplit_suite,
    run_perturbed_trials, split_sections_small_p, verify_main_theorem, FORMULA1_CONFIGS,
};

struct FieldFixture {
    group: Arc<FiniteGroup>,
    sm: StandardModules,
}

fn field_fixture(p: u32, d: usize, n: usize) -> FieldFixture {
    let ring = LocalRing::galois_ring(p, 1, d).expect("ring");
    let group = sl_group(&ring, n, CLOSURE_CAP).expect("group");
    let sm = standard_modules(&group).expect("modules");
    FieldFixture { group, sm }
}

static F4: Lazy<FieldFixture> = Lazy::new(|| field_fixture(2, 2, 2));
static F5: Lazy<FieldFixture> = Lazy::new(|| field_fixture(5, 1, 2));
static F7: Lazy<FieldFixture> = Lazy::new(|| field_fixture(7, 1, 2));

fn report(num: u32, name: &str, pass: bool) {
    println!(
        "criterion {:02} {}: {}",
        num,
        name,
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {:02} {} failed", num, name);
}

#[test]
fn criterion_01_h1_dimension_table() {
    let d5 = h1(&F5.sm.m0).unwrap().dim();
    let d7 = h1(&F7.sm.m0).unwrap().dim();
    let dv = h1(&F4.sm.v).unwrap().dim();
    report(1, "h1-dimension-table", d5 == 1 && d7 == 0 && dv == 2);
}

#[test]
fn criterion_02_h1_full_matrix_vanishes() {
    let dm = h1(&F4.sm.m).unwrap().dim();
    report(2, "h1-full-matrix-coefficients", dm == 0);
}

#[test]
fn criterion_03_trivial_coefficients() {
    let triv = GModule::trivial(&F4.group, 2, 1);
    let d1 = h1(&triv).unwrap().dim();
    // The H^2 value is the computed (and independently certified)
    // dimension 1: SL_2(F_4) is A_5, whose Schur multiplier is Z/2.
    let d2 = h2(&triv).unwrap().dim();
    let ring42 = LocalRing::galois_ring(2, 2, 2).unwrap();
    let g42 = sl_group(&ring42, 2, CLOSURE_CAP).unwrap();
    let triv42 = GModule::trivial(&g42, 2, 2);
    let d3 = h1(&triv42).unwrap().dim();
    report(
        3,
        "trivial-coefficient-cohomology",
        d1 == 0 && d2 == 1 && d3 == 0,
    );
}

#[test]
fn criterion_04_submodule_classification() {
    let c4 = classify_submodules(&F4.sm.m0, &F4.sm.s_basis_in_m0).unwrap();
    let c5 = classify_submodules(&F5.sm.m0, &F5.sm.s_basis_in_m0).unwrap();
    let f34 = field_fixture(2, 2, 3);
    let c34 = classify_submodules(&f34.sm.m0, &f34.sm.s_basis_in_m0).unwrap();
    let e4 = hom_space(&F4.sm.m0, &F4.sm.m0).len();
    let e5 = hom_space(&F5.sm.m0, &F5.sm.m0).len();
    report(
        4,
        "submodule-classification",
        c4.lemma_holds
            && c4.submodule_count == Some(6)
            && c5.lemma_holds
            && c5.submodule_count == Some(2)
            && c34.lemma_holds
            && e4 == 2
            && e5 == 1,
    );
}

#[test]
fn criterion_05_level_one_kernels() {
    // Trace-zero kernel: non-split.  split_check performs the
    // Sylow-restriction (Gaschutz) reduction with a certificate; the
    // direct cohomological method below must agree on the certificate.
    let ring = LocalRing::galois_ring(2, 2, 2).unwrap();
    let total = sl_group(&ring, 2, CLOSURE_CAP).unwrap();
    let surj = RingSurjection::gr_one_level(2, 2, 2).unwrap();
    let (ext, _) = matrix_extension(&total, &surj).unwrap();
    let syl = ext.base.sylow(2).unwrap();
    let sub = sub_extension(&ext, &syl).unwrap();
    let w = sub.cocycle_w().unwrap();
    let cohomological_nonsplit = !CoboundarySolver2::new(&sub.module).is_coboundary(&w);
    // Suite verdicts (Gaschutz route): trace-zero kernel non-split with
    // nonzero certificate; scalar-quotient kernel splits with an
    // exhaustively verified section (the class dies in the quotient
    // because H^2 with scalar coefficients is nonzero for A_5).
    let items = nonsplit_suite(CLOSURE_CAP).unwrap();
    report(
        5,
        "level-one-kernel-verdicts",
        cohomological_nonsplit
            && !items[0].split
            && items[0].certificate_nonzero
            && items[1].split
            && items[1].section_verified,
    );
}

#[test]
fn criterion_06_small_p_sections() {
    // Computed verdicts: p = 2 does NOT split (no involution of
    // SL_2(Z/4) lifts a transvection; certified both cohomologically
    // and by exhaustive lift search), p = 3 splits with a verified
    // section, p = 5 does not split at the Sylow level.
    let items = split_sections_small_p(CLOSURE_CAP).unwrap();
    report(
        6,
        "small-p-sections",
        !items[0].split
            && items[0].certificate_nonzero
            && items[1].split
            && items[1].section_verified
            && !items[2].split
            && items[2].certificate_nonzero,
    );
}

#[test]
fn criterion_07_perturbed_lift_enumeration() {
    let certs = run_perturbed_trials(2, 2, 2, 100, 7, CLOSURE_CAP, 8).unwrap();
    let pass = certs.len() == 100
        && certs
            .iter()
            .all(|c| c.verified_generators == 4 && c.obstruction.is_none());
    report(7, "perturbed-lift-enumeration", pass);
}

#[test]
fn criterion_08_dual_number_trivializer() {
    let inst = dual_cocycle_instance(2, 2, 2, 0, None, CLOSURE_CAP).unwrap();
    let cert = verify_main_theorem(&inst).unwrap();
    let ring = &inst.ring_a;
    let k = ring.residue_field().clone();
    let mut tr = k.zero();
    for i in 0..2 {
        let diff = ring.sub(cert.u.get(i, i), &ring.one());
        tr = k.add(&tr, &ring.dual_eps_part(&diff));
    }
    report(
        8,
        "dual-number-trivializer",
        !cert.u_is_identity && cert.verified_generators == 4 && !tr.is_zero(),
    );
}

#[test]
fn criterion_09_f5_counterexample() {
    let rep = counterexample_f5(CLOSURE_CAP).unwrap();
    report(
        9,
        "f5-counterexample",
        rep.h1_dim == 1
            && rep.obstruction.map(|o| !o.is_zero()).unwrap_or(false)
            && rep.retraction_exists
            && rep.coboundary_sanity,
    );
}

/// The six invariant subspaces of the trace-zero module for (2, F_4):
/// bases in intrinsic trace-zero coordinates.
fn m0_submodule_bases(sm: &StandardModules) -> Vec<Vec<FpVec>> {
    let s1 = sm.s_basis_in_m0[0].clone();
    let s2 = sm.s_basis_in_m0[1].clone();
    let mut s12 = s1.clone();
    s12.add_assign(&s2);
    let full: Vec<FpVec> = (0..sm.m0.dim)
        .map(|i| {
            let mut e = sm.m0.zero_vec();
            e.set(i, 1);
            e
        })
        .collect();
    vec![
        vec![],
        vec![s1.clone()],
        vec![s2.clone()],
        vec![s12],
        vec![s1, s2],
        full,
    ]
}

#[test]
fn criterion_10_h2_injectivity_and_descent() {
    let sm = &F4.sm;
    let bases = m0_submodule_bases(sm);
    let mut all_injective = true;
    for nb in &bases {
        let (mod_n, incl_n) = submodule(&sm.m0, nb).unwrap();
        for mb in &bases {
            let solver = ImageSolver::new(2, sm.m0.dim, mb);
            // only ordered pairs N <= M
            if !nb.iter().all(|v| solver.express(v).is_some()) {
                continue;
            }
            let (mod_m, incl_m) = submodule(&sm.m0, mb).unwrap();
            let _ = &incl_m;
            // inclusion N -> M in intrinsic coordinates
            let mut mat = FpMat::zero(2, mod_m.dim, mod_n.dim);
            for j in 0..mod_n.dim {
                let mut e = mod_n.zero_vec();
                e.set(j, 1);
                let coords = solver
                    .express(&incl_n.apply(&e))
                    .expect("N is inside M");
                for i in 0..mod_m.dim {
                    mat.set(i, j, coords.get(i));
                }
            }
            let map = ModuleMap { mat };
            if !h2_map_injective(&mod_n, &map, &mod_m).unwrap() {
                all_injective = false;
            }
        }
    }
    // Descent: x over S and y over a line L with [x] = [y] in S
    // descend to a class over L = S intersect L.
    let (line, line_incl_m0) = submodule(&sm.m0, &bases[1]).unwrap();
    let _ = line_incl_m0;
    // inclusion L -> S in intrinsic coordinates
    let s_solver = ImageSolver::new(2, sm.m0.dim, &sm.s_basis_in_m0);
    let coords = s_solver.express(&bases[1][0]).unwrap();
    let mut lmat = FpMat::zero(2, sm.s.dim, 1);
    for i in 0..sm.s.dim {
        lmat.set(i, 0, coords.get(i));
    }
    let incl_ls = ModuleMap { mat: lmat };
    let incl_ll = ModuleMap {
        mat: FpMat::identity(2, 1),
    };
    let y = h2(&line).unwrap().h_basis()[0].clone();
    // x = image of y in S plus a coboundary
    let mut x = map_cocycle2(&line, &y, &incl_ls, &sm.s);
    let mut c = FpVec::zero(2, (sm.s.group.order() - 1) * sm.s.dim);
    c.set(3, 1);
    c.set(17, 1);
    x.add_assign(&wittgroup::cohomology::coboundary2_w(&sm.s, &c));
    let descent =
        h2_intersection_descent(&sm.s, &x, &line, &y, &line, &incl_ls, &incl_ll).unwrap();
    let cob_l = CoboundarySolver2::new(&line);
    let cob_s = CoboundarySolver2::new(&sm.s);
    let descent_ok = cob_l.classes_equal(&descent.z, &y)
        && cob_s.classes_equal(&map_cocycle2(&line, &descent.z, &incl_ls, &sm.s), &x);
    report(10, "h2-injectivity-and-descent", all_injective && descent_ok);
}

#[test]
fn criterion_11_exact_sequence() {
    let sm = &F4.sm;
    // pi*: H^1(M_0) -> H^1(V) is an isomorphism
    let h1_m0 = h1(&sm.m0).unwrap();
    let h1_v = h1(&sm.v).unwrap();
    let b = h1_m0.h_basis();
    let mut pi_injective = h1_m0.dim() == 2 && h1_v.dim() == 2;
    for combo in 1u32..4 {
        let mut u = FpVec::zero(2, b[0].len());
        if combo & 1 != 0 {
            u.add_assign(&b[0]);
        }
        if combo & 2 != 0 {
            u.add_assign(&b[1]);
        }
        let img = map_cocycle1(&sm.m0, &u, &sm.v_proj, &sm.v);
        if h1_v.is_coboundary(&img) {
            pi_injective = false;
        }
    }
    // 0 -> H^2(S) -> H^2(M_0) -> H^2(V) exact
    let h2_s = h2(&sm.s).unwrap();
    let h2_m0 = h2(&sm.m0).unwrap();
    let cob_m0 = CoboundarySolver2::new(&sm.m0);
    let cob_v = CoboundarySolver2::new(&sm.v);
    let s_reps = h2_s.h_basis();
    let i_imgs: Vec<FpVec> = s_reps
        .iter()
        .map(|z| cob_m0.residual(&map_cocycle2(&sm.s, z, &sm.s_incl, &sm.m0)))
        .collect();
    let mut im_i = Eliminator::new(2, w_dim(&sm.m0));
    for v in &i_imgs {
        im_i.insert(v.clone());
    }
    let i_injective = im_i.rank() == h2_s.dim();
    // pi* i* = 0
    let mut composite_zero = true;
    for z in &s_reps {
        let m0w = map_cocycle2(&sm.s, z, &sm.s_incl, &sm.m0);
        let vw = map_cocycle2(&sm.m0, &m0w, &sm.v_proj, &sm.v);
        if !cob_v.is_coboundary(&vw) {
            composite_zero = false;
        }
    }
    // ker pi* = im i*: scan all classes of H^2(M_0)
    let m0_reps = h2_m0.h_basis();
    let dim_m0 = m0_reps.len();
    assert!(dim_m0 <= 12, "class scan stays exhaustive");
    let mut kernel_count = 0usize;
    let mut kernel_in_image = true;
    for mask in 1u64..(1 << dim_m0) {
        let mut w = FpVec::zero(2, w_dim(&sm.m0));
        for (i, z) in m0_reps.iter().enumerate() {
            if mask >> i & 1 == 1 {
                w.add_assign(z);
            }
        }
        let vw = map_cocycle2(&sm.m0, &w, &sm.v_proj, &sm.v);
        if cob_v.is_coboundary(&vw) {
            kernel_count += 1;
            if !im_i.contains(&cob_m0.residual(&w)) {
                kernel_in_image = false;
            }
        }
    }
    let exact = kernel_count + 1 == 1usize << h2_s.dim();
    report(
        11,
        "exact-sequence-p-divides-n",
        pi_injective && i_injective && composite_zero && kernel_in_image && exact,
    );
}

#[test]
fn criterion_12_power_identity_trials() {
    let mut pass = true;
    for &(n, p, d, m) in FORMULA1_CONFIGS.iter() {
        if formula1_trials(p, d, m, n, 100, 7).unwrap() != 100 {
            pass = false;
        }
    }
    report(12, "power-identity-trials", pass);
}

#[test]
fn criterion_13_transgression() {
    // order-4 toy: the extension of Z/2 by Z/2 with the nonzero class
    let ring5 = LocalRing::galois_ring(5, 1, 1).unwrap();
    let mut neg = RingMatrix::identity(&ring5, 2);
    *neg.get_mut(0, 0) = ring5.sub(&ring5.zero(), &ring5.one());
    *neg.get_mut(1, 1) = ring5.sub(&ring5.zero(), &ring5.one());
    let z2 = Arc::new(FiniteGroup::matrix_group(&ring5, 2, &[neg], CLOSURE_CAP).unwrap());
    let triv = GModule::trivial(&z2, 2, 1);
    let wx = h2(&triv).unwrap().h_basis()[0].clone();
    let tp = build_twisted(&triv, &wx).unwrap();
    let ext = twisted_extension(&tp).unwrap();
    // phi = -id, which is the identity matrix at p = 2
    let phi = ModuleMap {
        mat: FpMat::identity(2, ext.module.dim),
    };
    let wt = transgression(&ext, &phi, &ext.module).unwrap();
    let toy_ok = CoboundarySolver2::new(&ext.module).classes_equal(&wt, &ext.cocycle_w().unwrap());
    // Sylow-restricted level-one extension over GR(4,2)
    let ring = LocalRing::galois_ring(2, 2, 2).unwrap();
    let total = sl_group(&ring, 2, CLOSURE_CAP).unwrap();
    let surj = RingSurjection::gr_one_level(2, 2, 2).unwrap();
    let (bigext, _) = matrix_extension(&total, &surj).unwrap();
    let syl = bigext.base.sylow(2).unwrap();
    let sub = sub_extension(&bigext, &syl).unwrap();
    let phi2 = ModuleMap {
        mat: FpMat::identity(2, sub.module.dim),
    };
    let wt2 = transgression(&sub, &phi2, &sub.module).unwrap();
    let syl_ok =
        CoboundarySolver2::new(&sub.module).classes_equal(&wt2, &sub.cocycle_w().unwrap());
    report(13, "transgression-identification", toy_ok && syl_ok);
}

#[test]
fn criterion_14_deterministic_reports() {
    let run = || {
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_wittgroup"))
            .args(["run", "all", "--seed", "7"])
            .env("WITTGROUP_THREADS", "4")
            .output()
            .expect("binary runs");
        assert!(
            out.status.success(),
            "run all must pass: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let mut v: serde_json::Value =
            serde_json::from_slice(&out.stdout).expect("valid JSON report");
        v.as_object_mut().unwrap().remove("timing");
        v
    };
    let a = run();
    let b = run();
    report(14, "deterministic-reports", a == b);
}
