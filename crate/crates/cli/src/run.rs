use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use exact_kernel::par::{self, Exec};
use exact_kernel::{format_scalar, Scalar};
use serde::Serialize;
use twist_construct::{mode_table, TwistedModule};
use verify_suite::{
    check_axioms, check_bigrading_compat, check_commutator, check_delta_identities, check_equivariance,
    check_functor, check_grading_restriction, check_involution, check_jc_additivity, check_l0_shift,
    check_mode_tables, check_stable_subspaces, overall_status, CheckReport, DeltaScope, Status,
};

use crate::chain::{build, rational, Chain};
use crate::config::{CheckName, CheckSpec, RunConfig, TablesSpec, SCHEMA_VERSION};
use crate::error::CliError;

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StageInfo {
    pub stage: usize,
    pub label: String,
    pub denominator: u64,
    pub grading: &'static str,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DimEntry {
    pub weight: String,
    pub class: String,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WeightDim {
    pub weight: String,
    pub dim: usize,
}

/// Dimensions of the bigraded pieces spanned by basis monomials up to the
/// cutoff, with classes reduced according to the grading mode.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GradedTable {
    pub stage: usize,
    pub entries: Vec<DimEntry>,
    pub by_weight: Vec<WeightDim>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ModeRowOut {
    pub m: String,
    pub l: u32,
    pub op: String,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ModeTableOut {
    pub stage: usize,
    pub generator: String,
    pub rows: Vec<ModeRowOut>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Timing {
    pub build_ms: u128,
    pub tables_ms: u128,
    pub checks_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Tables {
    pub graded_dimensions: Vec<GradedTable>,
    pub mode_tables: Vec<ModeTableOut>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunReport {
    pub schema_version: u32,
    pub config: RunConfig,
    pub status: Status,
    pub exit_status: i32,
    pub chain: Vec<StageInfo>,
    #[serde(flatten)]
    pub tables: Tables,
    pub checks: Vec<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
    pub truncation: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TablesReport {
    pub schema_version: u32,
    pub config: RunConfig,
    pub chain: Vec<StageInfo>,
    #[serde(flatten)]
    pub tables: Tables,
    pub truncation: Vec<String>,
}

/// Exit status for a finished run: 0 all pass, 2 any failure, 3 when the
/// only non-passes are uncertifiable.
pub fn exit_status(status: Status) -> i32 {
    match status {
        Status::Pass => 0,
        Status::Fail => 2,
        Status::Uncertifiable => 3,
    }
}

fn chain_info(chain: &Chain) -> Vec<StageInfo> {
    chain
        .stages
        .iter()
        .enumerate()
        .map(|(i, s)| StageInfo {
            stage: i,
            label: s.module.label(),
            denominator: s.module.denom(),
            grading: s.module.mode().name(),
        })
        .collect()
}

fn truncation_notes(chain: &Chain) -> Vec<String> {
    vec![
        format!(
            "bases are enumerated to depth {} above the top space; graded dimensions count only those monomials",
            chain.vacuum.cutoff()
        ),
        "vertex operators are truncated above each check's exponent ceiling; checks compare every term kept".into(),
    ]
}

fn graded_table(stage: usize, tm: &TwistedModule) -> GradedTable {
    let mode = tm.mode();
    let mut counts: BTreeMap<(Scalar, Scalar), usize> = BTreeMap::new();
    for b in &tm.bigrading().entries {
        *counts.entry((b.weight.clone(), b.class_in(mode))).or_default() += 1;
    }
    let mut by_weight: BTreeMap<Scalar, usize> = BTreeMap::new();
    for ((w, _), d) in &counts {
        *by_weight.entry(w.clone()).or_default() += d;
    }
    GradedTable {
        stage,
        entries: counts
            .into_iter()
            .map(|((w, c), dim)| DimEntry {
                weight: format_scalar(&w),
                class: format_scalar(&c),
                dim,
            })
            .collect(),
        by_weight: by_weight
            .into_iter()
            .map(|(w, dim)| WeightDim {
                weight: format_scalar(&w),
                dim,
            })
            .collect(),
    }
}

fn stage_list(requested: &Option<Vec<usize>>, chain: &Chain, default: Vec<usize>) -> Result<Vec<usize>, CliError> {
    let stages = requested.clone().unwrap_or(default);
    for &s in &stages {
        if s >= chain.stages.len() {
            return Err(CliError::Config(format!(
                "stage {s} does not exist (the chain has {} stages)",
                chain.stages.len()
            )));
        }
    }
    Ok(stages)
}

fn make_tables(chain: &Chain, spec: &TablesSpec) -> Result<Tables, CliError> {
    let all: Vec<usize> = (0..chain.stages.len()).collect();
    let stages = stage_list(&spec.stages, chain, all)?;
    let alg = &chain.algebra;
    let gens: Vec<usize> = match &spec.generators {
        Some(names) => names.iter().map(|n| alg.index_of(n)).collect::<Result<_, _>>()?,
        None => (0..alg.dim()).collect(),
    };
    let mut graded_dimensions = Vec::new();
    let mut mode_tables = Vec::new();
    for &s in &stages {
        let tm = &chain.stages[s].module;
        graded_dimensions.push(graded_table(s, tm));
        for &i in &gens {
            let table = mode_table(tm, &alg.basis(i), alg.name(i), spec.mode_range)?;
            mode_tables.push(ModeTableOut {
                stage: s,
                generator: table.generator,
                rows: table
                    .rows
                    .iter()
                    .map(|r| ModeRowOut {
                        m: format_scalar(&r.m),
                        l: r.l,
                        op: r.op.render(alg.names()),
                    })
                    .collect(),
            });
        }
    }
    Ok(Tables {
        graded_dimensions,
        mode_tables,
    })
}

type Job<'a> = Box<dyn Fn() -> Result<Vec<CheckReport>, CliError> + Send + Sync + 'a>;

fn tagged(stage: usize, mut reports: Vec<CheckReport>) -> Vec<CheckReport> {
    for r in &mut reports {
        r.params.insert("stage".into(), stage.to_string());
    }
    reports
}

fn currents(chain: &Chain) -> Vec<affine_fock::PBWVector<Scalar>> {
    (0..chain.algebra.dim()).map(|i| chain.vacuum.generator_state(i)).collect()
}

/// Turn one check request into jobs, validating its stages and ranges.
fn jobs_for<'a>(chain: &'a Chain, spec: &CheckSpec, exec: Exec) -> Result<Vec<Job<'a>>, CliError> {
    let last = chain.stages.len() - 1;
    let delta_stages: Vec<usize> = (1..chain.stages.len()).filter(|&s| chain.stages[s].element.is_some()).collect();
    let needs_delta = matches!(
        spec.name,
        CheckName::Delta | CheckName::L0Shift | CheckName::Involution | CheckName::JcAdditivity | CheckName::Functor
    );
    let default = if spec.name == CheckName::Delta { delta_stages } else { vec![last] };
    let stages = stage_list(&spec.stages, chain, default)?;
    if needs_delta {
        if let Some(&s) = stages.iter().find(|&&s| chain.stages[s].element.is_none()) {
            return Err(CliError::Config(format!("{:?} needs a Δ step, and stage {s} is not one", spec.name)));
        }
    }
    let ceiling = match &spec.ceiling {
        Some(c) => rational("ceiling", c)?,
        None => Scalar::from_integer(if spec.name == CheckName::Equivariance || spec.name == CheckName::Axioms {
            2.into()
        } else {
            1.into()
        }),
    };
    let alg = &chain.algebra;
    let pairs: Vec<(usize, usize)> = match &spec.pairs {
        Some(ps) => ps
            .iter()
            .map(|(a, b)| Ok((alg.index_of(a)?, alg.index_of(b)?)))
            .collect::<Result<_, CliError>>()?,
        None => (0..alg.dim()).flat_map(|i| (i..alg.dim()).map(move |j| (i, j))).collect(),
    };
    let mut jobs: Vec<Job> = Vec::new();
    for s in stages {
        let tm: &'a Arc<TwistedModule> = &chain.stages[s].module;
        let element = chain.stages[s].element.clone();
        let c = ceiling.clone();
        let spec = spec.clone();
        let pairs = pairs.clone();
        let job: Job = match spec.name {
            CheckName::Delta => {
                let scope = DeltaScope {
                    v_depth: spec.v_depth.unwrap_or(2),
                    w_depth: spec.w_depth.unwrap_or(3),
                    p_min: spec.p_min.unwrap_or(-2),
                    inverse_depth: spec.inverse_depth.unwrap_or(4),
                    exec,
                };
                let base_g = chain.stages[s - 1].module.g_matrix().clone();
                Box::new(move || {
                    let a = element.as_ref().expect("Δ stage");
                    Ok(tagged(s, check_delta_identities(&chain.vacuum, a, scope, &[base_g.clone()])))
                })
            }
            CheckName::Equivariance => Box::new(move || {
                let r = check_equivariance(tm, &currents(chain), spec.depth.unwrap_or(2), &c, spec.p.unwrap_or(0));
                Ok(tagged(s, vec![r]))
            }),
            CheckName::Commutator => Box::new(move || {
                let r = check_commutator(tm, &pairs, spec.mode_range.unwrap_or(3), spec.depth.unwrap_or(3))?;
                Ok(tagged(s, vec![r]))
            }),
            CheckName::Axioms => Box::new(move || {
                Ok(tagged(s, check_axioms(tm, &currents(chain), spec.depth.unwrap_or(2), &c)))
            }),
            CheckName::GradingRestriction => Box::new(move || {
                Ok(tagged(s, vec![check_grading_restriction(tm, spec.family_length.unwrap_or(6))]))
            }),
            CheckName::L0Shift => Box::new(move || Ok(tagged(s, vec![check_l0_shift(tm, spec.depth.unwrap_or(3))]))),
            CheckName::ModeTable => Box::new(move || {
                Ok(tagged(
                    s,
                    vec![check_mode_tables(tm, spec.depth.unwrap_or(3), spec.mode_range.unwrap_or(3))],
                ))
            }),
            CheckName::Involution => {
                Box::new(move || Ok(tagged(s, vec![check_involution(tm, spec.depth.unwrap_or(3), &c)])))
            }
            CheckName::JcAdditivity => {
                let base = chain.stages[s - 1].module.clone();
                Box::new(move || {
                    let a = element.as_ref().expect("Δ stage");
                    Ok(tagged(s, vec![check_jc_additivity(&base, a, spec.depth.unwrap_or(3), &c)]))
                })
            }
            CheckName::BigradingCompat => {
                Box::new(move || Ok(tagged(s, vec![check_bigrading_compat(tm, spec.depth.unwrap_or(3), &c)])))
            }
            CheckName::StableSubspaces => {
                Box::new(move || Ok(tagged(s, vec![check_stable_subspaces(tm, spec.depth.unwrap_or(2))])))
            }
            CheckName::Functor => Box::new(move || Ok(tagged(s, vec![check_functor(tm, spec.depth.unwrap_or(3), &c)]))),
        };
        jobs.push(job);
    }
    Ok(jobs)
}

fn run_checks(chain: &Chain, specs: &[CheckSpec], exec: Exec) -> Result<Vec<CheckReport>, CliError> {
    let mut jobs = Vec::new();
    for spec in specs {
        jobs.extend(jobs_for(chain, spec, exec)?);
    }
    let mut out = Vec::new();
    for result in par::map(exec, &jobs, |job| job()) {
        out.extend(result?);
    }
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

fn exec_of(config: &RunConfig) -> Exec {
    if config.parallel {
        Exec::Parallel
    } else {
        Exec::Sequential
    }
}

/// Build the chain, run the requested checks and collect the report.
pub fn run(config: &RunConfig) -> Result<RunReport, CliError> {
    let t0 = Instant::now();
    let chain = build(config)?;
    let t1 = Instant::now();
    let tables = match &config.tables {
        Some(spec) => make_tables(&chain, spec)?,
        None => Tables {
            graded_dimensions: Vec::new(),
            mode_tables: Vec::new(),
        },
    };
    let t2 = Instant::now();
    let checks = run_checks(&chain, &config.checks, exec_of(config))?;
    let t3 = Instant::now();
    let status = overall_status(&checks);
    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        status,
        exit_status: exit_status(status),
        chain: chain_info(&chain),
        tables,
        checks,
        timing: config.timing.then(|| Timing {
            build_ms: (t1 - t0).as_millis(),
            tables_ms: (t2 - t1).as_millis(),
            checks_ms: (t3 - t2).as_millis(),
        }),
        truncation: truncation_notes(&chain),
    })
}

/// Build the chain and emit graded dimensions and mode tables only.
pub fn tables(config: &RunConfig) -> Result<TablesReport, CliError> {
    let chain = build(config)?;
    let spec = config.tables.clone().unwrap_or(TablesSpec {
        stages: None,
        mode_range: 2,
        generators: None,
    });
    Ok(TablesReport {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        chain: chain_info(&chain),
        tables: make_tables(&chain, &spec)?,
        truncation: truncation_notes(&chain),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(checks: &str) -> RunConfig {
        RunConfig::from_json(&format!(
            r#"{{
                "schemaVersion": 1,
                "algebra": {{ "type": "A", "rank": 1 }},
                "level": "1",
                "module": {{ "cutoff": "1" }},
                "twistChain": [{{ "kind": "innerSemisimple", "element": {{ "h": "1/2" }} }}],
                "checks": {checks}
            }}"#
        ))
        .unwrap()
    }

    #[test]
    fn statuses_map_to_exit_codes() {
        assert_eq!(exit_status(Status::Pass), 0);
        assert_eq!(exit_status(Status::Fail), 2);
        assert_eq!(exit_status(Status::Uncertifiable), 3);
    }

    #[test]
    fn stages_are_validated() {
        let e = run(&config(r#"[{ "name": "equivariance", "stages": [5] }]"#)).err().unwrap();
        assert_eq!(e.code(), "InvalidConfig");
        let e = run(&config(r#"[{ "name": "l0Shift", "stages": [0] }]"#)).err().unwrap();
        assert_eq!(e.code(), "InvalidConfig");
    }

    #[test]
    fn reports_are_tagged_and_sorted() {
        let r = run(&config(r#"[{ "name": "l0Shift" }, { "name": "equivariance", "depth": 1 }]"#)).unwrap();
        assert_eq!(r.status, Status::Pass);
        let names: Vec<_> = r.checks.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["equivariance", "twist.L0shift"]);
        assert!(r.checks.iter().all(|c| c.params["stage"] == "1"));
        assert!(r.timing.is_none());
    }

    #[test]
    fn tables_cover_every_stage() {
        let t = tables(&config("[]")).unwrap();
        assert_eq!(t.chain.len(), 2);
        assert_eq!(t.tables.graded_dimensions.len(), 2);
        assert!(t.tables.mode_tables.iter().any(|m| m.generator == "e" && m.stage == 1));
    }
}
