use std::sync::Arc;

use affine_fock::{InducedModule, TopModule};
use exact_kernel::{parse_scalar, Coeff, CycScalar, Matrix, Scalar};
use lie_core::{
    build_simple_lie, diagram_automorphism, inner_automorphism, is_automorphism, jordan_chevalley, AlgMap,
    LieAlgebra, LieElt,
};
use twist_construct::{GradingMode, TwistedModule};

use crate::config::{ElementSpec, GradingSpec, RunConfig, StepSpec};
use crate::error::CliError;

/// One module of the chain and the step that produced it.
pub struct Stage {
    pub module: Arc<TwistedModule>,
    /// The element `a` with `u = a(-1)1`, for `Δ` steps.
    pub element: Option<LieElt>,
}

pub struct Chain {
    pub algebra: Arc<LieAlgebra>,
    pub vacuum: Arc<InducedModule>,
    pub stages: Vec<Stage>,
}

pub fn rational(field: &str, s: &str) -> Result<Scalar, CliError> {
    parse_scalar(s).map_err(|e| CliError::Config(format!("{field}: {e}")))
}

pub fn element(alg: &LieAlgebra, spec: &ElementSpec) -> Result<LieElt, CliError> {
    let mut x = LieElt::zero(alg.dim());
    for (name, c) in spec {
        let i = alg.index_of(name)?;
        x.0[i] += rational(name, c)?;
    }
    Ok(x)
}

fn transport_map(alg: &LieAlgebra, images: &std::collections::BTreeMap<String, ElementSpec>) -> Result<AlgMap, CliError> {
    let mut cols = Vec::with_capacity(alg.dim());
    for i in 0..alg.dim() {
        let image = images
            .get(alg.name(i))
            .ok_or_else(|| CliError::Config(format!("transportTau: no image for {}", alg.name(i))))?;
        cols.push(element(alg, image)?.0);
    }
    for name in images.keys() {
        alg.index_of(name)?;
    }
    Ok(AlgMap {
        matrix: Matrix::from_cols(cols),
    })
}

fn grading_mode(g: GradingSpec) -> GradingMode {
    match g {
        GradingSpec::CmodZ => GradingMode::CmodZ,
        GradingSpec::C => GradingMode::C,
        GradingSpec::StronglyC => GradingMode::StronglyC,
    }
}

fn fixes(g: &Matrix<CycScalar>, a: &LieElt) -> bool {
    let v: Vec<CycScalar> = a.0.iter().map(CycScalar::from_scalar).collect();
    g.apply(&v) == v
}

/// The parsed, validated chain before any module is built.
enum Planned {
    Delta(LieElt),
    Transport(AlgMap),
}

/// Check every step against the automorphism accumulated so far, in
/// order, without building modules.
fn preflight(alg: &LieAlgebra, steps: &[StepSpec]) -> Result<Vec<Planned>, CliError> {
    let mut g = Matrix::<CycScalar>::identity(alg.dim());
    let mut plan = Vec::new();
    let mut diagram = None;
    for (idx, step) in steps.iter().enumerate() {
        let n = idx + 1;
        match step {
            StepSpec::InnerSemisimple { element: e } | StepSpec::InnerNilpotent { element: e } => {
                let a = element(alg, e)?;
                if !fixes(&g, &a) {
                    return Err(CliError::NotFixed { step: n });
                }
                let (s, nil) = jordan_chevalley(alg, &a).map_err(|err| match err {
                    lie_core::LieError::NeedsFieldExtension => {
                        CliError::NeedsFieldExtension(format!("step {n}: ad of {}", alg.render(&a)))
                    }
                    other => other.into(),
                })?;
                let semisimple = matches!(step, StepSpec::InnerSemisimple { .. });
                if semisimple && !nil.is_zero() {
                    return Err(CliError::Config(format!("step {n}: {} is not semisimple", alg.render(&a))));
                }
                if !semisimple && !s.is_zero() {
                    return Err(CliError::Config(format!("step {n}: {} is not nilpotent", alg.render(&a))));
                }
                g = g.mul(&inner_automorphism(alg, &a)?);
                plan.push(Planned::Delta(a));
            }
            StepSpec::DiagramData { permutation, h } => {
                let mu = diagram_automorphism(alg, permutation)?;
                let h = element(alg, h)?;
                if !alg.is_cartan(&h) {
                    return Err(CliError::InvalidAutomorphism(format!("step {n}: h is not in the Cartan subalgebra")));
                }
                if mu.apply(&h) != h {
                    return Err(CliError::NotFixed { step: n });
                }
                if !fixes(&g, &h) {
                    return Err(CliError::NotFixed { step: n });
                }
                g = g.mul(&mu.to_cyc()).mul(&inner_automorphism(alg, &h)?);
                if mu.matrix != Matrix::identity(alg.dim()) {
                    diagram.get_or_insert(n);
                }
                // Keep one stage per step.
                plan.push(if h.is_zero() {
                    Planned::Transport(AlgMap::identity(alg))
                } else {
                    Planned::Delta(h)
                });
            }
            StepSpec::TransportTau { images } => {
                let tau = transport_map(alg, images)?;
                if !is_automorphism(alg, &tau.matrix) {
                    return Err(CliError::InvalidAutomorphism(format!("step {n}: τ is not an automorphism")));
                }
                let inv = tau.inverse()?;
                g = tau.to_cyc().mul(&g).mul(&inv.to_cyc());
                plan.push(Planned::Transport(tau));
            }
        }
    }
    if let Some(n) = diagram {
        return Err(CliError::Unsupported(format!(
            "step {n}: a nontrivial diagram automorphism needs a μ-twisted base module, which is accepted only as data through the library interface"
        )));
    }
    Ok(plan)
}

fn top_module(alg: &LieAlgebra, lambda: &[u32]) -> Result<TopModule, CliError> {
    if lambda.iter().all(|&x| x == 0) {
        return Ok(TopModule::trivial(alg));
    }
    if lambda.len() != alg.rank() {
        return Err(CliError::Config(format!("lambda needs {} Dynkin labels", alg.rank())));
    }
    if alg.label() == "A1" {
        return Ok(TopModule::sl2_irreducible(alg, lambda[0] as usize)?);
    }
    if lambda[0] == 1 && lambda[1..].iter().all(|&x| x == 0) {
        return Ok(TopModule::defining(alg)?);
    }
    Err(CliError::Unsupported(format!(
        "top space {lambda:?}: built-in tops are the trivial, sl2 irreducible and defining modules"
    )))
}

/// Build the algebra, the modules and every stage of the chain.
pub fn build(config: &RunConfig) -> Result<Chain, CliError> {
    if config.schema_version != crate::config::SCHEMA_VERSION {
        return Err(CliError::Config(format!(
            "schemaVersion {} is not supported (expected {})",
            config.schema_version,
            crate::config::SCHEMA_VERSION
        )));
    }
    let alg = Arc::new(build_simple_lie(&config.algebra.kind, config.algebra.rank)?);
    let level = rational("level", &config.level)?;
    let cutoff = rational("module.cutoff", &config.module.cutoff)?;
    let plan = preflight(&alg, &config.twist_chain)?;
    let vacuum = Arc::new(InducedModule::vacuum(alg.clone(), level.clone(), &cutoff)?);
    let module = if config.module.lambda.iter().all(|&x| x == 0) {
        vacuum.clone()
    } else {
        let top = top_module(&alg, &config.module.lambda)?;
        Arc::new(InducedModule::build(alg.clone(), level, top, &cutoff)?)
    };
    let mode = grading_mode(config.grading);
    let mut stages = vec![Stage {
        module: Arc::new(TwistedModule::untwisted(vacuum.clone(), module)?.with_mode(mode)),
        element: None,
    }];
    for (n, step) in plan.into_iter().enumerate() {
        let base = stages.last().expect("stage 0").module.clone();
        let stage = match step {
            Planned::Delta(a) => {
                let u = vacuum.current_state(&a);
                let tm = TwistedModule::make_twisted(&base, &u).map_err(|e| match CliError::from(e) {
                    CliError::NotFixed { .. } => CliError::NotFixed { step: n + 1 },
                    other => other,
                })?;
                Stage {
                    module: Arc::new(tm.with_mode(mode)),
                    element: Some(a),
                }
            }
            Planned::Transport(tau) => Stage {
                module: Arc::new(TwistedModule::transport_tau(&base, &tau)?.with_mode(mode)),
                element: None,
            },
        };
        stages.push(stage);
    }
    Ok(Chain {
        algebra: alg,
        vacuum,
        stages,
    })
}
