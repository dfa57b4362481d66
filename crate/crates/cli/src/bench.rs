//! Grid of catalogue tree × bound × algorithm on one generated instance.
//!
//! CSV columns, in order:
//!
//! | column | meaning |
//! |---|---|
//! | `instance` | `tpch` or `telephony` |
//! | `tree_type` | catalogue type 1..=7 |
//! | `fanouts` | fan-outs from the root down, `x`-separated |
//! | `nodes` | nodes of the tree after cleaning |
//! | `num_cuts` | cuts of that tree |
//! | `bound` | monomial bound B |
//! | `algo` | `opt`, `greedy` or `brute` |
//! | `status` | `optimal`, `heuristic-adequate`, `infeasible` or `cap-exceeded` |
//! | `ml`, `vl` | monomials and variables lost (empty when capped) |
//! | `out_num_m`, `out_num_v` | sizes after compression |
//! | `node_visits`, `table_entries` | work counters |
//! | `elapsed_ms` | wall-clock time, `0` unless `--stats` |

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use provcut::abstraction::{abstract_set, clean_tree, AbstractionForest, Vvs};
use provcut::benchgen::{
    count_cuts, gen_telephony, gen_tpch_like, gen_tree, numbered, TelephonySpec, TreeSpec, CATALOGUE,
};
use provcut::optimizer::DEFAULT_CAP;
use provcut::polynomial::PolySet;
use provcut::Error;

use crate::commands::{run_algo, write};
use crate::{Algo, Failure};

pub const HEADER: &str = "instance,tree_type,fanouts,nodes,num_cuts,bound,algo,status,ml,vl,out_num_m,out_num_v,\
                          node_visits,table_entries,elapsed_ms";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Instance {
    Tpch,
    Telephony,
}

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value_t = Instance::Tpch)]
    instance: Instance,
    /// Line items (tpch) or customers (telephony)
    #[arg(long, default_value_t = 2000)]
    size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Catalogue types to include
    #[arg(long = "types", value_delimiter = ',', default_values_t = [1u8, 2, 3, 4, 5, 6, 7])]
    types: Vec<u8>,
    /// Keep only the catalogue row with these fan-outs
    #[arg(long, value_delimiter = ',')]
    fanouts: Option<Vec<usize>>,
    /// Bounds as positions between the coarsest cut's size (0) and the
    /// uncompressed size (1)
    #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.5, 0.75])]
    fractions: Vec<f64>,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Algo::Opt, Algo::Greedy, Algo::Brute])]
    algos: Vec<Algo>,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u128,
    /// Measure wall-clock time
    #[arg(long)]
    stats: bool,
    /// CSV destination; stdout when absent
    #[arg(long)]
    output: Option<PathBuf>,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Opt => "opt",
            Algo::Greedy => "greedy",
            Algo::Brute => "brute",
        }
    }
}

impl Instance {
    fn name(self) -> &'static str {
        match self {
            Instance::Tpch => "tpch",
            Instance::Telephony => "telephony",
        }
    }

    /// The polynomials plus the root and leaf labels of the dimension the
    /// catalogue trees range over.
    fn build(self, size: usize, seed: u64) -> Result<(PolySet, &'static str, Vec<String>), Error> {
        Ok(match self {
            Instance::Tpch => (gen_tpch_like(size, 128, seed)?.set, "Supp", numbered("s", 0, 128)),
            Instance::Telephony => (
                gen_telephony(&TelephonySpec::new(size, seed))?.0,
                "Plans",
                numbered("p", 1, 128),
            ),
        })
    }
}

fn bound_for(fraction: f64, coarsest: usize, num_m: usize) -> u64 {
    let b = coarsest as f64 + fraction * (num_m - coarsest) as f64;
    (b.round() as u64).clamp(1, num_m.max(1) as u64)
}

pub fn sweep(args: &BenchArgs) -> Result<String, Failure> {
    if let Some(f) = args.fractions.iter().find(|f| !(0.0..=1.0).contains(*f)) {
        return Err(Failure::invalid(format!("fraction {f} not in [0, 1]")));
    }
    let (set, root, leaves) = args.instance.build(args.size, args.seed)?;
    if set.num_m() == 0 {
        return Err(Failure::invalid("instance has no monomials; raise --size"));
    }
    let rows: Vec<_> = CATALOGUE
        .iter()
        .filter(|r| args.types.contains(&r.tree_type))
        .filter(|r| args.fanouts.as_ref().is_none_or(|f| f.as_slice() == r.fanouts))
        .collect();
    if rows.is_empty() {
        return Err(Failure::invalid("no catalogue row matches --types/--fanouts"));
    }
    let mut csv = String::from(HEADER);
    csv.push('\n');
    for row in rows {
        let spec = TreeSpec::new(row.tree_type, row.fanouts.to_vec(), root, leaves.clone())?;
        let tree = clean_tree(&gen_tree(&spec)?, &set)?;
        let cuts = count_cuts(&tree);
        let shape = row
            .fanouts
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("x");
        let forest = AbstractionForest::single(tree);
        let coarsest = abstract_set(&set, &forest, &Vvs::roots(&forest))?.num_m();
        for &fraction in &args.fractions {
            let bound = bound_for(fraction, coarsest, set.num_m());
            for &algo in &args.algos {
                let lead = format!(
                    "{},{},{},{},{},{},{}",
                    args.instance.name(),
                    row.tree_type,
                    shape,
                    forest.num_nodes(),
                    cuts,
                    bound,
                    algo.name()
                );
                let started = Instant::now();
                match run_algo(algo, &set, &forest, bound, args.cap) {
                    Ok(r) => {
                        let ms = if args.stats {
                            started.elapsed().as_secs_f64() * 1e3
                        } else {
                            0.0
                        };
                        let status = serde_json::to_value(r.status).expect("status serializes");
                        let _ = writeln!(
                            csv,
                            "{lead},{},{},{},{},{},{},{},{ms:.3}",
                            status.as_str().expect("status is a string"),
                            r.ml,
                            r.vl,
                            r.out_num_m,
                            r.out_num_v,
                            r.stats.node_visits,
                            r.stats.table_entries
                        );
                    }
                    Err(f) if f.code == 4 => {
                        let _ = writeln!(csv, "{lead},cap-exceeded,,,,,,,0.000");
                    }
                    Err(f) => return Err(f),
                }
            }
        }
    }
    Ok(csv)
}

pub fn run(args: BenchArgs) -> Result<u8, Failure> {
    let csv = sweep(&args)?;
    match &args.output {
        Some(path) => write(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(0)
}
