use std::collections::BTreeSet;
use std::sync::Arc;

use affine_fock::{InducedModule, PBWVector};
use delta_op::{apply_to_series, taylor_shift, DeltaOperator, DeltaSign};
use exact_kernel::par::{self, Exec};
use exact_kernel::{format_scalar, int, Coeff, CombineMode, CycScalar, LogSeries, Matrix, Scalar};
use lie_core::{inner_automorphism, jordan_chevalley, LieElt};
use num_traits::Zero;

use crate::report::{CheckReport, Status, Witness};
use crate::util::{basis, map_series, series_witness, Series};

/// Ranges for the `Δ` identities: vectors `v` to `v_depth`, `w` to
/// `w_depth`, and modes `Y_p(v)` from `p_min` up to the last nonzero one.
/// The inverse checks run on `w` to `inverse_depth`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeltaScope {
    pub v_depth: i64,
    pub w_depth: i64,
    pub p_min: i64,
    pub inverse_depth: i64,
    pub exec: Exec,
}

impl Default for DeltaScope {
    fn default() -> Self {
        DeltaScope {
            v_depth: 2,
            w_depth: 3,
            p_min: -2,
            inverse_depth: 4,
            exec: Exec::Parallel,
        }
    }
}

fn describe(d: &DeltaOperator) -> String {
    let sign = match d.sign() {
        DeltaSign::Corrected => "",
        DeltaSign::Flipped => " (flipped)",
    };
    format!("{}(-1)1{}", d.vacuum().algebra().render(d.element()), sign)
}

fn base_report(name: &str, d: &DeltaOperator) -> CheckReport {
    CheckReport::new(name).param("u", describe(d))
}

fn single(v: PBWVector<Scalar>, d: u64) -> Series {
    let mut s = LogSeries::zero(d);
    s.add_term::<Scalar>(int(0), 0, v).expect("integral exponent");
    s
}

fn record(r: &mut CheckReport, w: Option<Witness>) {
    r.cases += 1;
    if let Some(w) = w {
        r.fail(w);
    }
}

/// D1: `Δ(x)v` is a finite sum over finitely many exponent classes, all in
/// `Z/D`, drawn from `-spec(ad_a) + Z`.
pub fn check_d1(d: &DeltaOperator, ws: &[PBWVector<Scalar>]) -> CheckReport {
    let mut r = base_report("delta.D1", d);
    let alg = d.vacuum().algebra();
    let allowed: BTreeSet<Scalar> = match alg.ad(d.element()).rational_spectrum() {
        Ok(spec) => spec.iter().map(|(l, _)| class(&-l.clone())).collect(),
        Err(e) => return CheckReport::errored("delta.D1", e.to_string()),
    };
    let mut classes = BTreeSet::new();
    for w in ws {
        r.cases += 1;
        let s = match d.apply(w) {
            Ok(s) => s,
            Err(e) => return CheckReport::errored("delta.D1", e.to_string()),
        };
        for (e, k, _) in s.iter() {
            let c = class(e);
            if !allowed.contains(&c) {
                r.fail(Witness {
                    v: describe(d),
                    w: d.vacuum().render(w),
                    exponent: format_scalar(e),
                    log_power: k,
                    expected: "exponent class in -spec(ad_a) + Z".into(),
                    found: format_scalar(&c),
                });
            }
            classes.insert(c);
        }
    }
    r.notes.push(format!(
        "exponent classes: [{}]",
        classes.iter().map(format_scalar).collect::<Vec<_>>().join(", ")
    ));
    r.param("D", d.denom())
}

fn class(x: &Scalar) -> Scalar {
    x - x.floor()
}

/// D2: `Δ(x) Y(v, x_2) w = Y(Δ(x + x_2) v, x_2) Δ(x) w`, compared at each
/// power `x_2^{-p-1}`. On the right, `x_2^j` from the expansion of
/// `Δ(x + x_2)v` pairs with `Y_{p+j}`, so only finitely many `j` occur.
pub fn check_d2(
    d: &DeltaOperator,
    vs: &[PBWVector<Scalar>],
    ws: &[PBWVector<Scalar>],
    p_min: i64,
    exec: Exec,
) -> CheckReport {
    let name = match d.sign() {
        DeltaSign::Corrected => "delta.D2",
        DeltaSign::Flipped => "delta.D2.flipped",
    };
    let mut r = base_report(name, d).param("pMin", p_min);
    let parts = par::map(exec, vs, |v| d2_for(d, name, v, ws, p_min));
    for part in parts {
        if part.status == Status::Uncertifiable {
            return part;
        }
        r.absorb(part);
    }
    r
}

fn d2_for(d: &DeltaOperator, name: &str, v: &PBWVector<Scalar>, ws: &[PBWVector<Scalar>], p_min: i64) -> CheckReport {
    let mut r = CheckReport::new(name);
    let vac = d.vacuum();
    let den = d.denom();
    let Ok(dv) = d.apply(v) else {
        return CheckReport::errored(name, "Δ failed on v");
    };
    let dv_depth = dv.iter().filter_map(|(_, _, c)| c.max_depth()).max().unwrap_or(0);
    for w in ws {
        let Ok(dw) = d.apply(w) else {
            return CheckReport::errored(name, "Δ failed on w");
        };
        let dw_depth = dw.iter().filter_map(|(_, _, c)| c.max_depth()).max().unwrap_or(0);
        let Some(p_max) = vac.max_vertex_mode(v, w) else { continue };
        let mode_bound = dv_depth + dw_depth - 1;
        let j_max = (mode_bound - p_min).max(0) as u32;
        let shifts = taylor_shift(&dv, j_max);
        for p in p_min..=p_max.max(mode_bound) {
            let lhs = d.apply(&vac.vertex_mode(v, p, w)).expect("Δ on a vector");
            let mut rhs = LogSeries::zero(den);
            for (j, t) in shifts.iter().enumerate() {
                let k = p + j as i64;
                if k > mode_bound {
                    break;
                }
                for (e1, l1, c) in t.iter() {
                    for (e2, l2, dd) in dw.iter() {
                        let y = vac.vertex_mode(c, k, dd);
                        if !y.is_zero() {
                            rhs.add_term::<Scalar>(e1 + e2, l1 + l2, y).expect("exponent in Z/D");
                        }
                    }
                }
            }
            r.cases += 1;
            if let Some(mut wit) = series_witness(vac, vac, v, w, &lhs, &rhs) {
                wit.exponent = format!("x^{} x2^{}", wit.exponent, -p - 1);
                r.fail(wit);
            }
        }
    }
    r
}

/// D3: `[L(0), Δ(x)] = x d/dx Δ(x) + Y_0(u) Δ(x)`.
pub fn check_d3(d: &DeltaOperator, ws: &[PBWVector<Scalar>]) -> CheckReport {
    let mut r = base_report("delta.D3", d);
    let vac = d.vacuum();
    for w in ws {
        let dw = d.apply(w).expect("Δ on a vector");
        let lhs = map_series(&dw, |z| vac.sugawara(0, z))
            .combine::<Scalar>(&d.apply(&vac.sugawara(0, w)).expect("Δ"), CombineMode::Sub)
            .expect("same bound");
        let rhs = dw
            .derivative::<Scalar>()
            .shift(&int(1), 0)
            .expect("integral shift")
            .combine::<Scalar>(&map_series(&dw, |z| d.u_mode(0, z)), CombineMode::Add)
            .expect("same bound");
        record(&mut r, series_witness(vac, vac, &vac.omega(), w, &lhs, &rhs));
    }
    r
}

/// D4: `[L(-1), Δ(x)] = -d/dx Δ(x)`.
pub fn check_d4(d: &DeltaOperator, ws: &[PBWVector<Scalar>]) -> CheckReport {
    let mut r = base_report("delta.D4", d);
    let vac = d.vacuum();
    for w in ws {
        let dw = d.apply(w).expect("Δ on a vector");
        let lhs = map_series(&dw, |z| vac.sugawara(-1, z))
            .combine::<Scalar>(&d.apply(&vac.sugawara(-1, w)).expect("Δ"), CombineMode::Sub)
            .expect("same bound");
        let rhs = dw.derivative::<Scalar>().scale(&int(-1));
        record(&mut r, series_witness(vac, vac, &vac.omega(), w, &lhs, &rhs));
    }
    r
}

/// `Δ^{(0)} = 1`, and `Δ^{(-u)} Δ^{(u)} = 1 = Δ^{(u)} Δ^{(-u)}`.
pub fn check_inverse(d: &DeltaOperator, ws: &[PBWVector<Scalar>]) -> Vec<CheckReport> {
    let vac = d.vacuum();
    let mut zero = CheckReport::new("delta.zero");
    let d0 = DeltaOperator::new(vac.clone(), &PBWVector::zero()).expect("zero is admissible");
    let mut inv = base_report("delta.inverse", d);
    let dinv = DeltaOperator::for_element(vac.clone(), &d.element().neg()).expect("-u is admissible");
    for w in ws {
        record(&mut zero, series_witness(vac, vac, &PBWVector::zero(), w, &d0.apply(w).unwrap(), &single(w.clone(), 1)));
        for (first, second) in [(d, &dinv), (&dinv, d)] {
            let back = apply_to_series(second, &first.apply(w).unwrap()).unwrap();
            let expect = single(w.clone(), back.denom());
            record(&mut inv, series_witness(vac, vac, first.u(), w, &back, &expect));
        }
    }
    vec![zero, inv]
}

/// `Δ^{(s+n)} = Δ^{(s)} Δ^{(n)}` for the Jordan–Chevalley parts of `a`,
/// after confirming `[s, n] = 0` and `(s, n) = 0` directly.
pub fn check_additivity(vac: &Arc<InducedModule>, a: &LieElt, ws: &[PBWVector<Scalar>]) -> CheckReport {
    let alg = vac.algebra();
    let mut r = CheckReport::new("delta.additivity").param("a", alg.render(a));
    let Ok((s, n)) = jordan_chevalley(alg, a) else {
        return CheckReport::errored("delta.additivity", "no rational Jordan–Chevalley split");
    };
    r = r.param("s", alg.render(&s)).param("n", alg.render(&n));
    // The commuting hypothesis, brute force over the basis of g.
    let bracket = alg.bracket(&s, &n);
    let mut form = Scalar::zero();
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            form += s.coeff(i) * n.coeff(j) * alg.form_basis(i, j);
        }
    }
    r.cases += 1;
    if !bracket.is_zero() || !form.is_zero() {
        r.fail(Witness {
            v: alg.render(&s),
            w: alg.render(&n),
            exponent: "hypothesis".into(),
            log_power: 0,
            expected: "[s,n] = 0 and (s,n) = 0".into(),
            found: format!("[s,n] = {}, (s,n) = {}", alg.render(&bracket), format_scalar(&form)),
        });
        return r;
    }
    let ds = DeltaOperator::for_element(vac.clone(), &s).unwrap();
    let dn = DeltaOperator::for_element(vac.clone(), &n).unwrap();
    let da = DeltaOperator::for_element(vac.clone(), a).unwrap();
    for w in ws {
        let lhs = da.apply(w).unwrap();
        let rhs = apply_to_series(&ds, &dn.apply(w).unwrap()).unwrap();
        record(&mut r, series_witness(vac, vac, da.u(), w, &lhs, &rhs));
    }
    r
}

/// `[g, Δ^{(u)}] = 0` for automorphisms fixing `u`, over `Q(ζ_D)[T]`.
pub fn check_g_commute(d: &DeltaOperator, gs: &[Matrix<CycScalar>], ws: &[PBWVector<Scalar>]) -> CheckReport {
    let vac = d.vacuum();
    let mut r = base_report("delta.gCommute", d).param("automorphisms", gs.len());
    let a_cyc: Vec<CycScalar> = d.element().0.iter().map(CycScalar::from_scalar).collect();
    for g in gs {
        if g.apply(&a_cyc) != a_cyc {
            r.notes.push("skipped an automorphism that does not fix u".into());
            continue;
        }
        for w in ws {
            let wc = w.to_cyc();
            let lhs = d.apply_linear(&vac.lift_map(g, &wc)).unwrap();
            let rhs = map_series(&d.apply_linear(&wc).unwrap(), |z| vac.lift_map(g, z));
            record(&mut r, series_witness(vac, vac, &d.u().to_cyc(), &wc, &lhs, &rhs));
        }
    }
    r
}

/// Every `Δ` identity for `u = a(-1)1` over the declared ranges, plus the
/// regression that the flipped sign convention breaks D2.
pub fn check_delta_identities(
    vac: &Arc<InducedModule>,
    a: &LieElt,
    scope: DeltaScope,
    extra: &[Matrix<CycScalar>],
) -> Vec<CheckReport> {
    let d = match DeltaOperator::for_element(vac.clone(), a) {
        Ok(d) => d,
        Err(e) => return vec![CheckReport::errored("delta", e.to_string())],
    };
    let vs = basis(vac, scope.v_depth);
    let ws = basis(vac, scope.w_depth);
    let inv_ws = basis(vac, scope.inverse_depth);
    let mut gs = vec![inner_automorphism(vac.algebra(), a).expect("rational spectrum")];
    gs.extend(extra.iter().cloned());
    type Job<'a> = Box<dyn Fn() -> Vec<CheckReport> + Send + Sync + 'a>;
    let mut jobs: Vec<Job> = vec![
        Box::new(|| vec![check_d1(&d, &ws)]),
        Box::new(|| vec![check_d2(&d, &vs, &ws, scope.p_min, scope.exec)]),
        Box::new(|| vec![check_d3(&d, &ws), check_d4(&d, &ws)]),
        Box::new(|| vec![check_additivity(vac, a, &ws)]),
        Box::new(|| vec![check_g_commute(&d, &gs, &ws)]),
        Box::new(|| check_inverse(&d, &inv_ws)),
    ];
    if !a.is_zero() {
        jobs.push(Box::new(|| vec![check_sign_regression(vac, a, &vs, &ws, scope.p_min, scope.exec)]));
    }
    let mut out: Vec<CheckReport> = par::map(scope.exec, &jobs, |job| job()).into_iter().flatten().collect();
    for r in &mut out {
        r.params.insert("vDepth".into(), scope.v_depth.to_string());
        let w_depth = match r.name.as_str() {
            "delta.inverse" | "delta.zero" => scope.inverse_depth,
            _ => scope.w_depth,
        };
        r.params.insert("wDepth".into(), w_depth.to_string());
    }
    out
}

/// Passes when the flipped convention fails D2; its witness goes in the
/// notes.
pub fn check_sign_regression(
    vac: &Arc<InducedModule>,
    a: &LieElt,
    vs: &[PBWVector<Scalar>],
    ws: &[PBWVector<Scalar>],
    p_min: i64,
    exec: Exec,
) -> CheckReport {
    let u = vac.current_state(a);
    let flipped = DeltaOperator::with_sign(vac.clone(), &u, DeltaSign::Flipped).unwrap();
    let inner = check_d2(&flipped, vs, ws, p_min, exec);
    let mut r = base_report("delta.D2.signRegression", &flipped);
    r.cases = inner.cases;
    match inner.witness {
        Some(w) => r.notes.push(format!(
            "flipped sign fails D2 at v = {}, w = {}, {}: expected {}, found {}",
            w.v, w.w, w.exponent, w.expected, w.found
        )),
        None => r.fail(Witness {
            v: describe(&flipped),
            w: String::new(),
            exponent: String::new(),
            log_power: 0,
            expected: "D2 failure for the flipped sign".into(),
            found: "D2 holds".into(),
        }),
    }
    r
}
