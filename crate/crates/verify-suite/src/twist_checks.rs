use std::collections::BTreeSet;
use std::sync::Arc;

use affine_fock::PBWVector;
use exact_kernel::{format_scalar, int, rat, Scalar};
use lie_core::{jordan_chevalley, LieElt};
use num_traits::Zero;
use twist_construct::{
    class_mod_one, functor_on_map, intertwines, mode_table, GradingMode, Layer, ModeOp, ModuleMap, TwistError,
    TwistedModule,
};

use crate::report::{CheckReport, Witness};
use crate::util::{basis, flat_coords, series_witness, vector_witness, Echelon, Series};

fn same_series(a: &Series, b: &Series) -> bool {
    let d = num_integer::lcm(a.denom(), b.denom());
    a.with_denom(d).expect("lift").same_terms(&b.with_denom(d).expect("lift"))
}

fn lifted(a: &Series, d: u64) -> Series {
    a.with_denom(num_integer::lcm(a.denom(), d)).expect("lift")
}

/// The probes used for vertex operator comparisons: generator currents
/// and the conformal vector.
fn probes(tm: &TwistedModule) -> Vec<PBWVector<Scalar>> {
    let vac = tm.vacuum();
    let mut out: Vec<_> = (0..vac.algebra().dim()).map(|i| vac.generator_state(i)).collect();
    out.push(vac.omega());
    out
}

fn delta_layer(tm: &TwistedModule) -> Option<(&Arc<TwistedModule>, &delta_op::DeltaOperator)> {
    match tm.layer() {
        Layer::Delta { base, delta } => Some((base, delta)),
        _ => None,
    }
}

/// `L^{new}(0) = L^{base}(0) - Y^{base}_0(u) + κ/2` on basis `w` to `depth`.
pub fn check_l0_shift(tm: &TwistedModule, depth: i64) -> CheckReport {
    let Some((base, delta)) = delta_layer(tm) else {
        return CheckReport::errored("twist.L0shift", "the last construction step is not a Δ step");
    };
    let vac = tm.vacuum();
    let omega = vac.omega();
    let kappa = delta.kappa();
    let mut r = CheckReport::new("twist.L0shift")
        .param("module", tm.label())
        .param("depth", depth)
        .param("kappa", format_scalar(&kappa));
    for w in basis(tm.module(), depth) {
        let run = || -> Result<_, TwistError> {
            let lhs = tm.mode_coeff(&omega, &int(1), 0, &w)?;
            let mut rhs = base.mode_coeff(&omega, &int(1), 0, &w)?;
            rhs.axpy(&int(-1), &base.zero_mode(delta.u(), &w)?);
            rhs.axpy(&(&kappa * rat(1, 2)), &w);
            Ok((lhs, rhs))
        };
        let (lhs, rhs) = match run() {
            Ok(x) => x,
            Err(e) => return CheckReport::errored("twist.L0shift", e.to_string()),
        };
        r.cases += 1;
        if lhs != rhs {
            r.fail(vector_witness(vac, tm.module(), &omega, &w, "L(0)", &lhs, &rhs));
        }
    }
    r
}

/// Closed-form rows `b^{tw}(m, l)` against the coefficients of the twisted
/// series for every generator, including that rows absent from the table
/// vanish. The largest log power is compared with the nilpotency order of
/// the nilpotent parts of the chain.
pub fn check_mode_tables(tm: &TwistedModule, depth: i64, range: i64) -> CheckReport {
    let vac = tm.vacuum();
    let alg = vac.algebra();
    let mut r = CheckReport::new("twist.modeTable")
        .param("module", tm.label())
        .param("depth", depth)
        .param("modeRange", range);
    let mut max_log = 0;
    for i in 0..alg.dim() {
        let b = alg.basis(i);
        let table = match mode_table(tm, &b, alg.name(i), range) {
            Ok(t) => t,
            Err(e) => return CheckReport::errored("twist.modeTable", e.to_string()),
        };
        let state = vac.generator_state(i);
        let rows: BTreeSet<(Scalar, u32)> = table.rows.iter().map(|row| (row.m.clone(), row.l)).collect();
        for w in basis(tm.module(), depth) {
            let s = match tm.vertex_op(&state, &w, &int(range - 1)) {
                Ok(s) => s,
                Err(e) => return CheckReport::errored("twist.modeTable", e.to_string()),
            };
            let one = Scalar::from_integer(1.into());
            for row in &table.rows {
                max_log = max_log.max(row.l);
                let e = -&row.m - &one;
                let series = s.get(&e, row.l).cloned().unwrap_or_else(PBWVector::zero);
                let closed = row.op.apply(tm.module(), &w);
                r.cases += 1;
                if series != closed {
                    let label = format!("{}({}, {})", alg.name(i), format_scalar(&row.m), row.l);
                    r.fail(vector_witness(vac, tm.module(), &state, &w, &label, &series, &closed));
                }
            }
            for (e, l, c) in s.iter() {
                let m = -e - &one;
                if exact_kernel::abs(&m) <= int(range) && !rows.contains(&(m.clone(), l)) && !c.is_zero() {
                    let label = format!("{}({}, {})", alg.name(i), format_scalar(&m), l);
                    r.fail(vector_witness(vac, tm.module(), &state, &w, &label, c, &PBWVector::zero()));
                }
                r.cases += 1;
            }
        }
    }
    r.notes.push(format!("largest log power: {max_log}"));
    if let Some(order) = chain_nilpotency(tm) {
        r.notes.push(format!("nilpotency order of ad on the nilpotent parts: {order}"));
        if max_log as usize >= order.max(1) {
            r.fail(Witness {
                v: "log powers".into(),
                w: String::new(),
                exponent: String::new(),
                log_power: max_log,
                expected: format!("log powers below {order}"),
                found: max_log.to_string(),
            });
        }
    }
    r
}

/// Product over the chain of the nilpotency orders of `ad n`, a bound for
/// the log powers that can occur.
fn chain_nilpotency(tm: &TwistedModule) -> Option<usize> {
    match tm.layer() {
        Layer::Untwisted => Some(1),
        Layer::Delta { base, delta } => {
            let alg = tm.vacuum().algebra();
            let (_, n) = jordan_chevalley(alg, delta.element()).ok()?;
            let k = alg.ad(&n).nilpotency_index()?;
            Some(chain_nilpotency(base)? + k - 1)
        }
        Layer::Transport { base, .. } => chain_nilpotency(base),
        Layer::External(_) => None,
    }
}

/// Twisting by `u` then `-u` gives back the base vertex operator. Weights
/// agree; classes agree up to one global constant, the image of `κ`.
pub fn check_involution(tm: &Arc<TwistedModule>, depth: i64, ceiling: &Scalar) -> CheckReport {
    let Some((base, delta)) = delta_layer(tm) else {
        return CheckReport::errored("twist.involution", "the last construction step is not a Δ step");
    };
    let vac = tm.vacuum();
    let mut r = CheckReport::new("twist.involution")
        .param("module", tm.label())
        .param("depth", depth)
        .param("ceiling", format_scalar(ceiling));
    let minus = vac.current_state(&delta.element().neg());
    let back = match TwistedModule::make_twisted(tm, &minus) {
        Ok(b) => b,
        Err(e) => return CheckReport::errored("twist.involution", e.to_string()),
    };
    for v in probes(tm) {
        for w in basis(tm.module(), depth) {
            let lhs = back.vertex_op(&v, &w, ceiling).expect("vertex operator");
            let rhs = base.vertex_op(&v, &w, ceiling).expect("vertex operator");
            r.cases += 1;
            let d = num_integer::lcm(lhs.denom(), rhs.denom());
            if let Some(wit) = series_witness(vac, tm.module(), &v, &w, &lifted(&lhs, d), &lifted(&rhs, d)) {
                r.fail(wit);
            }
        }
    }
    let shift = delta.kappa();
    for (idx, (x, y)) in back.bigrading().entries.iter().zip(&base.bigrading().entries).enumerate() {
        r.cases += 1;
        if x.weight != y.weight || &x.class - &y.class != shift {
            let m = &tm.module().basis()[idx];
            r.fail(Witness {
                v: "bigrade".into(),
                w: tm.module().render_monomial(m),
                exponent: String::new(),
                log_power: 0,
                expected: format!("({}, {} + κ)", format_scalar(&y.weight), format_scalar(&y.class)),
                found: format!("({}, {})", format_scalar(&x.weight), format_scalar(&x.class)),
            });
        }
    }
    r.notes.push(format!("classes move by κ = {}", format_scalar(&shift)));
    r
}

/// One step by `a` agrees with a step by the nilpotent part followed by a
/// step by the semisimple part.
pub fn check_jc_additivity(base: &Arc<TwistedModule>, a: &LieElt, depth: i64, ceiling: &Scalar) -> CheckReport {
    let vac = base.vacuum();
    let alg = vac.algebra();
    let mut r = CheckReport::new("twist.jcAdditivity")
        .param("module", base.label())
        .param("a", alg.render(a))
        .param("depth", depth)
        .param("ceiling", format_scalar(ceiling));
    let build = || -> Result<(TwistedModule, TwistedModule), TwistError> {
        let (s, n) = jordan_chevalley(alg, a)?;
        let whole = TwistedModule::make_twisted(base, &vac.current_state(a))?;
        let first = Arc::new(TwistedModule::make_twisted(base, &vac.current_state(&n))?);
        let both = TwistedModule::make_twisted(&first, &vac.current_state(&s))?;
        Ok((whole, both))
    };
    let (whole, both) = match build() {
        Ok(x) => x,
        Err(e) => return CheckReport::errored("twist.jcAdditivity", e.to_string()),
    };
    for v in probes(base) {
        for w in basis(base.module(), depth) {
            let lhs = whole.vertex_op(&v, &w, ceiling).expect("vertex operator");
            let rhs = both.vertex_op(&v, &w, ceiling).expect("vertex operator");
            r.cases += 1;
            if !same_series(&lhs, &rhs) {
                let d = num_integer::lcm(lhs.denom(), rhs.denom());
                if let Some(wit) = series_witness(vac, base.module(), &v, &w, &lifted(&lhs, d), &lifted(&rhs, d)) {
                    r.fail(wit);
                }
            }
        }
    }
    for (idx, (x, y)) in whole.bigrading().entries.iter().zip(&both.bigrading().entries).enumerate() {
        r.cases += 1;
        if x != y {
            r.fail(Witness {
                v: "bigrade".into(),
                w: base.module().render_monomial(&base.module().basis()[idx]),
                exponent: String::new(),
                log_power: 0,
                expected: format!("({}, {})", format_scalar(&y.weight), format_scalar(&y.class)),
                found: format!("({}, {})", format_scalar(&x.weight), format_scalar(&x.class)),
            });
        }
    }
    r
}

/// The class of `b(-1)1` for `V`: the sum over the chain of the
/// eigenvalues of `ad s` on `b`, or `None` if `b` is not an eigenvector.
pub fn current_class(tm: &TwistedModule, b: &LieElt) -> Option<Scalar> {
    let alg = tm.vacuum().algebra();
    match tm.layer() {
        Layer::Untwisted => Some(Scalar::zero()),
        Layer::Delta { base, delta } => {
            let (s, _) = jordan_chevalley(alg, delta.element()).ok()?;
            let image = alg.bracket(&s, b);
            let i = (0..alg.dim()).find(|&i| !b.coeff(i).is_zero())?;
            let lam = image.coeff(i) / b.coeff(i);
            if image != b.scale(&lam) {
                return None;
            }
            Some(current_class(base, b)? + lam)
        }
        Layer::Transport { base, tau_inv, .. } => current_class(base, &tau_inv.apply(b)),
        Layer::External(_) => None,
    }
}

/// Components of `Y(v, x) w` lie in class `class(v) + class(w)`, exactly
/// or mod 1 according to the grading mode.
pub fn check_bigrading_compat(tm: &TwistedModule, depth: i64, ceiling: &Scalar) -> CheckReport {
    let vac = tm.vacuum();
    let alg = vac.algebra();
    let mode = tm.mode();
    let mut r = CheckReport::new("twist.bigradingCompat")
        .param("module", tm.label())
        .param("mode", mode.name())
        .param("depth", depth)
        .param("ceiling", format_scalar(ceiling));
    let key = |x: &Scalar| match mode {
        GradingMode::CmodZ => class_mod_one(x),
        _ => x.clone(),
    };
    let mut currents = vec![(vac.omega(), Some(Scalar::zero()))];
    for i in 0..alg.dim() {
        currents.push((vac.generator_state(i), current_class(tm, &alg.basis(i))));
    }
    for (v, class_v) in currents {
        let Some(class_v) = class_v else {
            r.notes.push(format!("skipped {}: not an eigenvector of the twist", vac.render(&v)));
            continue;
        };
        for w in basis(tm.module(), depth) {
            let (mw, _) = w.iter().next().expect("basis vector");
            let class_w = tm.bigrade_of(mw).expect("bigrade").class;
            let want = key(&(&class_v + &class_w));
            let s = tm.vertex_op(&v, &w, ceiling).expect("vertex operator");
            for (e, k, c) in s.iter() {
                for (m, _) in c.iter() {
                    r.cases += 1;
                    let got = key(&tm.bigrade_of(m).expect("bigrade").class);
                    if got != want {
                        r.fail(Witness {
                            v: vac.render(&v),
                            w: tm.module().render(&w),
                            exponent: format_scalar(e),
                            log_power: k,
                            expected: format!("class {}", format_scalar(&want)),
                            found: format!("{} in class {}", tm.module().render_monomial(m), format_scalar(&got)),
                        });
                    }
                }
            }
        }
    }
    r
}

/// All closed-form mode operators of the module with `|m| ≤ range`.
fn mode_ops(tm: &TwistedModule, range: i64) -> Result<Vec<ModeOp>, TwistError> {
    let alg = tm.vacuum().algebra();
    let mut out = Vec::new();
    for i in 0..alg.dim() {
        out.extend(mode_table(tm, &alg.basis(i), alg.name(i), range)?.rows.into_iter().map(|r| r.op));
    }
    Ok(out)
}

/// The closure of `{w}` under `π ∘ op`, with `π` the projection to depth
/// at most `depth`.
fn closure(tm: &TwistedModule, ops: &[ModeOp], w: &PBWVector<Scalar>, depth: i64) -> Echelon {
    let module = tm.module();
    let mut span = Echelon::default();
    span.insert(flat_coords(module, depth, w));
    let mut frontier = vec![w.clone()];
    while let Some(x) = frontier.pop() {
        for op in ops {
            let (y, _) = op.apply(module, &x).split_depth(depth);
            if !y.is_zero() && span.insert(flat_coords(module, depth, &y)) {
                frontier.push(y);
            }
        }
    }
    span
}

/// The submodule generated by each basis vector, truncated at `depth`, is
/// the same subspace for the twisted module and for its base.
pub fn check_stable_subspaces(tm: &TwistedModule, depth: i64) -> CheckReport {
    let base = match tm.layer() {
        Layer::Delta { base, .. } | Layer::Transport { base, .. } => base.clone(),
        _ => return CheckReport::errored("twist.stableSubspaces", "the module has no base layer"),
    };
    let mut r = CheckReport::new("twist.stableSubspaces")
        .param("module", tm.label())
        .param("depth", depth);
    // Modes outside |k| ≤ depth vanish after projection; the margin covers
    // the shift of twisted indices.
    let range = depth + 4;
    let (ops_tw, ops_base) = match (mode_ops(tm, range), mode_ops(&base, range)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return CheckReport::errored("twist.stableSubspaces", e.to_string()),
    };
    let mut dims = Vec::new();
    for w in basis(tm.module(), depth) {
        let a = closure(tm, &ops_tw, &w, depth);
        let b = closure(&base, &ops_base, &w, depth);
        r.cases += 1;
        if a.dim() != b.dim() || !b.basis().all(|v| a.contains(v)) {
            r.fail(Witness {
                v: "generated submodule".into(),
                w: tm.module().render(&w),
                exponent: format!("depth ≤ {depth}"),
                log_power: 0,
                expected: format!("the base submodule, dimension {}", b.dim()),
                found: format!("a different subspace of dimension {}", a.dim()),
            });
        }
        dims.push(a.dim());
    }
    dims.sort_unstable();
    dims.dedup();
    r.notes.push(format!(
        "generated dimensions: [{}]",
        dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ")
    ));
    r
}

/// The functor on module maps: identity, a scalar and zero intertwine
/// before and after the step, and twisting back returns maps that
/// intertwine with the base again.
pub fn check_functor(tm: &Arc<TwistedModule>, depth: i64, ceiling: &Scalar) -> CheckReport {
    let Some((base, delta)) = delta_layer(tm) else {
        return CheckReport::errored("functor", "the last construction step is not a Δ step");
    };
    let mut r = CheckReport::new("functor")
        .param("module", tm.label())
        .param("depth", depth)
        .param("ceiling", format_scalar(ceiling));
    let probes = probes(tm);
    let maps = [ModuleMap::identity(), ModuleMap::scalar(rat(-3, 2)), ModuleMap::zero()];
    let minus = tm.vacuum().current_state(&delta.element().neg());
    for f in &maps {
        let run = || -> Result<(), TwistError> {
            let (src, _, g) = functor_on_map(f, base, base, delta.u(), &probes, depth, ceiling)?;
            let back = TwistedModule::make_twisted(&Arc::new(src), &minus)?;
            intertwines(&g, &back, base, &probes, depth, ceiling)
        };
        r.cases += 1;
        if let Err(e) = run() {
            r.fail(Witness {
                v: f.label.clone(),
                w: String::new(),
                exponent: String::new(),
                log_power: 0,
                expected: "an intertwining map".into(),
                found: e.to_string(),
            });
        }
    }
    r
}
