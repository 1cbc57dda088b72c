use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use blocksel::io::{self, render_json, PartitionDoc, Real, ReportDoc};
use blocksel::metrics::Objective;
use blocksel::oracle::{brute_best_partition, brute_best_subset};
use blocksel::synth::{even_sizes, random_partition};
use blocksel::{
    build_similarity, compare as compare_partitions, eval_fl, greedy, report, run_strategy,
    run_strategy_balanced, validate_inputs, ConstraintSet, EmbeddingMatrix, Error, Partition, Strategy,
    StrategyConfig,
};

use crate::{CompareArgs, InputArgs, OracleArgs, PartitionArgs, ScoreArgs};

#[derive(Debug)]
pub enum Failure {
    Io(String),
    Invalid(String),
    Mismatch(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Mismatch(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Io(m) | Failure::Invalid(m) | Failure::Mismatch(m) => f.write_str(m),
        }
    }
}

/// The command-line flag responsible for an error, when there is one.
fn flag_for(e: &Error) -> Option<&'static str> {
    match e {
        Error::ZeroBudget | Error::BudgetExceedsGroundSet { .. } => Some("--k"),
        Error::NoBlocks | Error::MoreBlocksThanBudget { .. } | Error::TooManyClusters { .. } => {
            Some("--blocks")
        }
        Error::MissingLabels
        | Error::UnknownLabel(_)
        | Error::QuotaBelowCapacity { .. }
        | Error::InfeasibleQuota { .. } => Some("--balance-labels"),
        Error::UnknownObjective(_) => Some("--objective"),
        Error::OracleTooLarge { .. } | Error::OracleGroundSetTooLarge { .. } => Some("--input"),
        Error::ZeroNorm(_) => Some("--normalize"),
        Error::UnknownFormat(_)
        | Error::BadMagic
        | Error::Truncated
        | Error::NonNumeric { .. }
        | Error::DimensionMismatch { .. }
        | Error::DuplicateId(_)
        | Error::NonFinite { .. }
        | Error::LabelCount { .. }
        | Error::EmptyGroundSet
        | Error::ZeroDimension => Some("--input"),
        _ => None,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_io() {
            return Failure::Io(e.to_string());
        }
        match flag_for(&e) {
            Some(flag) => Failure::Invalid(format!("{flag}: {e}")),
            None => Failure::Invalid(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn load(input: &InputArgs) -> Result<EmbeddingMatrix, Failure> {
    Ok(io::load_embeddings(&input.input, input.format)?)
}

fn print(text: &str) {
    print!("{text}");
}

pub fn partition(a: PartitionArgs) -> CmdResult {
    let emb = load(&a.input)?;
    let cons = ConstraintSet::new(a.k, a.blocks);
    let cfg = StrategyConfig {
        strategy: a.strategy,
        seed: a.seed,
        normalize: a.normalize,
    };
    let p = if a.balance_labels {
        run_strategy_balanced(&emb, &cons, &cfg)?
    } else {
        run_strategy(&emb, &cons, &cfg)?
    };
    let s = build_similarity(&emb, cfg.normalize)?;
    let rep = report(&s, &p)?;
    let doc = PartitionDoc::new(&emb, &p, &rep, &cfg, a.k)?;
    io::write_partition(&a.output, &doc)?;
    Ok(())
}

pub fn score(a: ScoreArgs) -> CmdResult {
    let emb = load(&a.input)?;
    let doc = io::read_partition(&a.partition)?;
    let actual = io::fingerprint(&emb);
    if actual != doc.fingerprint {
        let msg = format!(
            "--input: fingerprint {actual} does not match partition fingerprint {}",
            doc.fingerprint
        );
        if a.strict {
            return Err(Failure::Mismatch(msg));
        }
        eprintln!("warning: {msg}");
    }
    let p = doc.to_partition()?;
    p.validate(emb.len(), Some(doc.k))
        .map_err(|e| Failure::Invalid(format!("--partition: {e}")))?;
    let s = build_similarity(&emb, doc.normalize)?;
    let rep = report(&s, &p)?;
    print(&render_json(&ReportDoc::from(&rep)));
    Ok(())
}

#[derive(Serialize)]
struct CompareRow {
    strategy: String,
    blocks: Vec<Vec<usize>>,
    report: ReportDoc,
}

#[derive(Serialize)]
struct CompareDoc {
    k: usize,
    #[serde(rename = "B")]
    num_blocks: usize,
    seed: u64,
    normalize: bool,
    fingerprint: String,
    rows: Vec<CompareRow>,
    /// Strategy names per objective, best first.
    rankings: BTreeMap<String, Vec<String>>,
}

fn dedup_strategies(requested: &[Strategy]) -> Vec<Strategy> {
    if requested.is_empty() {
        return Strategy::ALL.to_vec();
    }
    let mut out: Vec<Strategy> = Vec::new();
    for &s in requested {
        if out.contains(&s) {
            eprintln!("warning: --strategy {s} given more than once; ignoring the repeat");
        } else {
            out.push(s);
        }
    }
    out
}

fn text_table(doc: &CompareDoc) -> String {
    let mut out = format!(
        "{:<22} {:>12} {:>12} {:>12} {:>12} {:>12} {:>10}\n",
        "strategy", "min_f", "max_f", "sum_f", "union_f", "cond_gain", "intra_sim"
    );
    for row in &doc.rows {
        let r = row.report.to_report();
        out.push_str(&format!(
            "{:<22} {:>12.4} {:>12.4} {:>12.4} {:>12.4} {:>12.4} {:>10.4}\n",
            row.strategy,
            r.min_f,
            r.max_f,
            r.sum_f,
            r.union_f,
            r.sum_conditional_gains(),
            r.mean_intra_block_sim()
        ));
    }
    out
}

/// JSON goes to stdout; the aligned table goes to stderr so stdout stays parseable.
pub fn compare(a: CompareArgs) -> CmdResult {
    let emb = load(&a.input)?;
    let cons = ConstraintSet::new(a.k, a.blocks);
    validate_inputs(&emb, &cons)?;
    let s = build_similarity(&emb, a.normalize)?;
    let mut partitions: Vec<Partition> = Vec::new();
    for st in dedup_strategies(&a.strategies) {
        let cfg = StrategyConfig {
            strategy: st,
            seed: a.seed,
            normalize: a.normalize,
        };
        partitions.push(run_strategy(&emb, &cons, &cfg)?);
    }
    partitions.push(random_partition(emb.len(), &even_sizes(a.k, a.blocks), a.seed));
    let cmp = compare_partitions(&s, &partitions)?;
    let names: Vec<String> = partitions.iter().map(|p| p.kind.to_string()).collect();
    let doc = CompareDoc {
        k: a.k,
        num_blocks: a.blocks,
        seed: a.seed,
        normalize: a.normalize,
        fingerprint: io::fingerprint(&emb),
        rows: partitions
            .iter()
            .zip(&cmp.reports)
            .map(|(p, r)| CompareRow {
                strategy: p.kind.to_string(),
                blocks: p.blocks.clone(),
                report: r.into(),
            })
            .collect(),
        rankings: cmp
            .rankings
            .iter()
            .map(|(o, order)| (o.to_string(), order.iter().map(|&i| names[i].clone()).collect()))
            .collect(),
    };
    print(&render_json(&doc));
    eprint!("{}", text_table(&doc));
    Ok(())
}

#[derive(Serialize)]
struct RatioRow {
    strategy: String,
    value: Real,
    ratio: Real,
}

#[derive(Serialize)]
struct OracleDoc {
    objective: String,
    k: usize,
    #[serde(rename = "B")]
    num_blocks: usize,
    optimum: Real,
    optimal_blocks: Vec<Vec<usize>>,
    ratios: Vec<RatioRow>,
}

/// Achieved fraction of the optimum, oriented so 1 is optimal and smaller is worse.
fn ratio(value: f64, optimum: f64, maximize: bool) -> f64 {
    let (num, den) = if maximize {
        (value, optimum)
    } else {
        (optimum, value)
    };
    if den == 0.0 {
        if num == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        num / den
    }
}

pub fn oracle(a: OracleArgs) -> CmdResult {
    let emb = load(&a.input)?;
    let cons = ConstraintSet::new(a.k, a.blocks);
    validate_inputs(&emb, &cons)?;
    let s = build_similarity(&emb, a.normalize)?;
    let run = |st: Strategy| -> Result<Partition, Failure> {
        let cfg = StrategyConfig {
            strategy: st,
            seed: a.seed,
            normalize: a.normalize,
        };
        Ok(run_strategy(&emb, &cons, &cfg)?)
    };

    let doc = if a.objective == "best-subset" {
        let (subset, optimum) = brute_best_subset(&s, a.k)?;
        let mut ratios = Vec::new();
        let g = eval_fl(&s, &greedy(&s, a.k)?)?;
        ratios.push(RatioRow {
            strategy: "greedy".into(),
            value: Real(g),
            ratio: Real(ratio(g, optimum, true)),
        });
        for st in Strategy::ALL {
            let v = eval_fl(&s, &run(st)?.union())?;
            ratios.push(RatioRow {
                strategy: st.to_string(),
                value: Real(v),
                ratio: Real(ratio(v, optimum, true)),
            });
        }
        OracleDoc {
            objective: a.objective.clone(),
            k: a.k,
            num_blocks: a.blocks,
            optimum: Real(optimum),
            optimal_blocks: vec![subset],
            ratios,
        }
    } else {
        let objective: Objective = a.objective.parse()?;
        let (best, optimum) = brute_best_partition(&s, &cons, objective)?;
        let mut ratios = Vec::new();
        for st in Strategy::ALL {
            let v = report(&s, &run(st)?)?.objective(objective);
            ratios.push(RatioRow {
                strategy: st.to_string(),
                value: Real(v),
                ratio: Real(ratio(v, optimum, objective.maximize())),
            });
        }
        OracleDoc {
            objective: a.objective.clone(),
            k: a.k,
            num_blocks: a.blocks,
            optimum: Real(optimum),
            optimal_blocks: best.blocks,
            ratios,
        }
    };
    print(&render_json(&doc));
    Ok(())
}
