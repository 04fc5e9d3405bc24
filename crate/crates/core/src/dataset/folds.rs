use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Dataset;
use crate::error::{Error, Result};

/// Assignment of every instance id to one cross-validation fold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoldAssignment {
    fold_of: BTreeMap<usize, usize>,
    n_folds: usize,
    seed: u64,
}

impl FoldAssignment {
    pub fn n_folds(&self) -> usize {
        self.n_folds
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn fold_of(&self, id: usize) -> Option<usize> {
        self.fold_of.get(&id).copied()
    }

    pub fn as_map(&self) -> &BTreeMap<usize, usize> {
        &self.fold_of
    }

    /// Ids in fold `fold`, ascending.
    pub fn test_ids(&self, fold: usize) -> Vec<usize> {
        self.fold_of
            .iter()
            .filter(|(_, &f)| f == fold)
            .map(|(&id, _)| id)
            .collect()
    }

    /// Ids outside fold `fold`, ascending.
    pub fn train_ids(&self, fold: usize) -> Vec<usize> {
        self.fold_of
            .iter()
            .filter(|(_, &f)| f != fold)
            .map(|(&id, _)| id)
            .collect()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_folds];
        for &f in self.fold_of.values() {
            sizes[f] += 1;
        }
        sizes
    }
}

/// Stratified, seeded fold assignment.
///
/// Each class's ids are shuffled with a ChaCha8 stream seeded by `seed`, the
/// shuffled classes are concatenated in label order, and position `p` of the
/// concatenation goes to fold `p % n_folds`. Dealing one continuous sequence
/// keeps both global fold sizes and per-class fold counts within one of each
/// other.
pub fn stratified_folds(ds: &Dataset, n_folds: usize, seed: u64) -> Result<FoldAssignment> {
    if n_folds < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 folds, got {n_folds}"
        )));
    }
    if n_folds > ds.len() {
        return Err(Error::TooManyFolds {
            folds: n_folds,
            size: ds.len(),
        });
    }
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); ds.label_names().len()];
    for inst in ds.instances() {
        by_class[inst.label.index()].push(inst.id);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold_of = BTreeMap::new();
    let mut position = 0usize;
    for ids in &mut by_class {
        ids.sort_unstable();
        ids.shuffle(&mut rng);
        for &id in ids.iter() {
            fold_of.insert(id, position % n_folds);
            position += 1;
        }
    }
    Ok(FoldAssignment {
        fold_of,
        n_folds,
        seed,
    })
}
