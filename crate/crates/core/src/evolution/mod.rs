//! Evolutionary quantum classifier (EQC).
//!
//! A single parent circuit is improved by elitist mutation: each generation
//! spawns `mu` one-step mutants, and the best of parent and children becomes
//! the next parent. Topology (gate count, kinds, placement) changes along
//! with the angles.
//!
//! Selection order among equal losses: a child with fewer gates, then the
//! incumbent parent, then the lower child index. Every child draws its
//! randomness from a stream keyed by `(seed, generation, child)`, so the
//! outcome does not depend on evaluation order or thread scheduling.

mod genome;
mod mutation;

pub use genome::CircuitGenome;
pub use mutation::{
    apply_action, mutate, random_gate, sample_action, MutationAction, MutationConfig,
};

use rayon::prelude::*;

use crate::dataset::{Dataset, SplitDataset};
use crate::encoding::{LabelEncoding, LossKind};
use crate::error::{Error, Result};
use crate::feature_map::FeatureMapSpec;
use crate::history::GenerationRecord;
use crate::model::{Classifier, Evaluation, PreparedData};
use crate::seed::{self, stream};

/// Training loss of `genome` applied after the feature map.
pub fn fitness(
    genome: &CircuitGenome,
    data: &Dataset,
    map: &FeatureMapSpec,
    enc: &LabelEncoding,
    loss: LossKind,
) -> Result<f64> {
    let clf = Classifier::new(map.clone(), enc.clone(), loss);
    let prepared = clf.prepare(data)?;
    genome_fitness(&clf, &prepared, genome, &[])
}

fn genome_fitness(
    clf: &Classifier,
    prepared: &PreparedData,
    genome: &CircuitGenome,
    key: &[u64],
) -> Result<f64> {
    Ok(clf.evaluate(prepared, &genome.gates, key)?.loss)
}

#[derive(Clone, Debug)]
pub struct EvolutionResult {
    pub best: CircuitGenome,
    pub best_loss: f64,
    pub history: Vec<GenerationRecord>,
    /// Circuit evaluations (fitness calls) spent per generation after the first.
    pub evaluations_per_generation: usize,
}

struct Incumbent {
    genome: CircuitGenome,
    eval: Evaluation,
    test_acc: f64,
}

/// Runs the elitist search on `data.train`; `data.test` is only used for the
/// test-accuracy column of the history.
pub fn evolve(data: &SplitDataset, clf: &Classifier, cfg: &MutationConfig) -> Result<EvolutionResult> {
    cfg.validate()?;
    if data.train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let n = clf.n_qubits();
    let train = clf.prepare(&data.train)?;
    let test = clf.prepare(&data.test)?;
    let test_accuracy = |g: &CircuitGenome| -> Result<f64> {
        if test.is_empty() {
            Ok(f64::NAN)
        } else {
            clf.accuracy(&test, &g.gates, &[u64::MAX])
        }
    };

    // generation 0: mu random depth-1 circuits plus the empty circuit
    let mut initial = vec![CircuitGenome::empty(n)];
    for i in 0..cfg.mu {
        let mut rng = seed::rng_for(cfg.seed, &[stream::INIT, i as u64]);
        initial.push(CircuitGenome {
            n_qubits: n,
            gates: vec![random_gate(n, &mut rng)],
        });
    }
    let evals = evaluate_all(clf, &train, &initial, 0, cfg.parallel)?;
    let (first, first_eval) = initial
        .into_iter()
        .zip(evals)
        .enumerate()
        .min_by(|(ia, (ga, ea)), (ib, (gb, eb))| {
            ea.loss
                .total_cmp(&eb.loss)
                .then(ga.depth().cmp(&gb.depth()))
                .then(ia.cmp(ib))
        })
        .map(|(_, pair)| pair)
        .expect("initial population is never empty");
    let mut parent = Incumbent {
        test_acc: test_accuracy(&first)?,
        genome: first,
        eval: first_eval,
    };

    let mut history = Vec::with_capacity(cfg.max_generations);
    let record = |generation: usize, p: &Incumbent| GenerationRecord {
        generation,
        best_loss: p.eval.loss,
        train_acc: p.eval.accuracy,
        test_acc: p.test_acc,
        depth: p.genome.depth(),
    };
    history.push(record(0, &parent));

    for generation in 1..cfg.max_generations {
        if parent.eval.loss < cfg.early_stop_loss {
            break;
        }
        let children: Vec<CircuitGenome> = (0..cfg.mu)
            .map(|c| {
                let mut rng = seed::rng_for(cfg.seed, &[stream::CHILD, generation as u64, c as u64]);
                mutate(&parent.genome, cfg, &mut rng)
            })
            .collect();
        let evals = evaluate_all(clf, &train, &children, generation, cfg.parallel)?;

        let mut winner: Option<(CircuitGenome, Evaluation)> = None;
        for (child, eval) in children.into_iter().zip(evals) {
            let (best_loss, best_depth) = match &winner {
                Some((g, e)) => (e.loss, g.depth()),
                None => (parent.eval.loss, parent.genome.depth()),
            };
            let better = eval.loss < best_loss || (eval.loss == best_loss && child.depth() < best_depth);
            if better {
                winner = Some((child, eval));
            }
        }
        if let Some((genome, eval)) = winner {
            parent = Incumbent {
                test_acc: test_accuracy(&genome)?,
                genome,
                eval,
            };
        }
        history.push(record(generation, &parent));
    }

    Ok(EvolutionResult {
        best_loss: parent.eval.loss,
        best: parent.genome,
        history,
        evaluations_per_generation: cfg.mu,
    })
}

fn evaluate_all(
    clf: &Classifier,
    train: &PreparedData,
    genomes: &[CircuitGenome],
    generation: usize,
    parallel: bool,
) -> Result<Vec<Evaluation>> {
    let eval = |(c, g): (usize, &CircuitGenome)| clf.evaluate(train, &g.gates, &[generation as u64, c as u64]);
    if parallel {
        genomes.par_iter().enumerate().map(eval).collect()
    } else {
        genomes.iter().enumerate().map(eval).collect()
    }
}
