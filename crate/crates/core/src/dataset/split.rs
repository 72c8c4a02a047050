use rand::seq::SliceRandom;

use super::Dataset;
use crate::error::{Error, Result};
use crate::seed;

/// Disjoint train/test partition of a dataset. The index lists refer to rows
/// of the source dataset, in ascending order.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitDataset {
    pub train: Dataset,
    pub test: Dataset,
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
}

fn class_members(data: &Dataset) -> Result<Vec<(i32, Vec<usize>)>> {
    let members: Vec<(i32, Vec<usize>)> = data
        .classes()
        .into_iter()
        .map(|c| {
            let idx = (0..data.len()).filter(|&i| data.labels[i] == c).collect();
            (c, idx)
        })
        .collect();
    if let Some((c, m)) = members.iter().find(|(_, m)| m.len() < 2) {
        return Err(Error::InvalidArgument(format!(
            "class {c} has {} sample(s); stratified splitting needs at least 2",
            m.len()
        )));
    }
    Ok(members)
}

fn assemble(
    data: &Dataset,
    members: Vec<(i32, Vec<usize>)>,
    train_counts: &[usize],
    seed_value: u64,
) -> SplitDataset {
    let mut train_indices = Vec::new();
    let mut test_indices = Vec::new();
    for ((class, mut idx), &n_train) in members.into_iter().zip(train_counts) {
        let mut rng = seed::rng_for(seed_value, &[seed::stream::SPLIT, class as u64]);
        idx.shuffle(&mut rng);
        train_indices.extend_from_slice(&idx[..n_train]);
        test_indices.extend_from_slice(&idx[n_train..]);
    }
    train_indices.sort_unstable();
    test_indices.sort_unstable();
    SplitDataset {
        train: data.subset(&train_indices),
        test: data.subset(&test_indices),
        train_indices,
        test_indices,
    }
}

/// Stratified random split with `train_fraction` of every class in the
/// training part.
///
/// The overall training size is `round(train_fraction · N)`; classes first
/// get `⌊train_fraction · n_c⌋` samples and the rest go to the classes with
/// the largest fractional remainders (lowest label first on ties). Every
/// class keeps at least one sample on each side.
pub fn split(data: &Dataset, train_fraction: f64, seed_value: u64) -> Result<SplitDataset> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "train fraction {train_fraction} must lie strictly between 0 and 1"
        )));
    }
    let members = class_members(data)?;
    let exact: Vec<f64> = members
        .iter()
        .map(|(_, m)| train_fraction * m.len() as f64)
        .collect();
    let mut counts: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let target = (train_fraction * data.len() as f64).round() as usize;
    let mut order: Vec<usize> = (0..counts.len()).collect();
    order.sort_by(|&a, &b| {
        let (ra, rb) = (exact[a] - exact[a].floor(), exact[b] - exact[b].floor());
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let mut assigned: usize = counts.iter().sum();
    for &c in order.iter().cycle().take(order.len()) {
        if assigned >= target {
            break;
        }
        counts[c] += 1;
        assigned += 1;
    }
    for (c, (_, m)) in counts.iter_mut().zip(&members) {
        *c = (*c).clamp(1, m.len() - 1);
    }
    Ok(assemble(data, members, &counts, seed_value))
}

/// Stratified split with exactly `train_per_class` training samples per
/// class; the remainder of each class forms the test part.
pub fn split_per_class(
    data: &Dataset,
    train_per_class: usize,
    seed_value: u64,
) -> Result<SplitDataset> {
    let members = class_members(data)?;
    if train_per_class == 0 {
        return Err(Error::InvalidArgument("train_per_class must be at least 1".into()));
    }
    if let Some((c, m)) = members.iter().find(|(_, m)| m.len() <= train_per_class) {
        return Err(Error::InvalidArgument(format!(
            "class {c} has {} samples, too few for {train_per_class} training samples plus a test part",
            m.len()
        )));
    }
    let counts = vec![train_per_class; members.len()];
    Ok(assemble(data, members, &counts, seed_value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn balanced(per_class: usize, classes: usize) -> Dataset {
        let n = per_class * classes;
        Dataset::new(
            (0..n).map(|i| vec![i as f64]).collect(),
            (0..n).map(|i| (i / per_class) as i32).collect(),
            classes,
            "t",
        )
        .unwrap()
    }

    #[test]
    fn iris_shaped_split() {
        let d = balanced(50, 3);
        let s = split(&d, 0.65, 1).unwrap();
        assert!(s.train.len() == 97 || s.train.len() == 98, "{}", s.train.len());
        assert_eq!(s.train.len() + s.test.len(), 150);
        for c in 0..3 {
            let k = s.train.labels.iter().filter(|&&y| y == c).count();
            assert!(k == 32 || k == 33);
            assert!((k as f64 / 50.0 - 0.65).abs() <= 1.0 / 50.0);
        }
    }

    #[test]
    fn disjoint_and_complete() {
        let d = balanced(17, 2);
        let s = split(&d, 0.65, 9).unwrap();
        let mut all: Vec<usize> = s.train_indices.iter().chain(&s.test_indices).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..34).collect::<Vec<_>>());
        assert!(s.train_indices.iter().all(|i| !s.test_indices.contains(i)));
    }

    #[test]
    fn deterministic_per_seed() {
        let d = balanced(20, 3);
        assert_eq!(split(&d, 0.65, 4).unwrap(), split(&d, 0.65, 4).unwrap());
        assert_ne!(
            split(&d, 0.65, 4).unwrap().train_indices,
            split(&d, 0.65, 5).unwrap().train_indices
        );
    }

    #[test]
    fn rejects_bad_inputs() {
        let d = balanced(10, 2);
        assert!(split(&d, 1.0, 0).is_err());
        assert!(split(&d, 0.0, 0).is_err());
        let tiny = Dataset::new(vec![vec![0.0], vec![1.0], vec![2.0]], vec![0, 0, 1], 2, "t").unwrap();
        assert!(split(&tiny, 0.5, 0).is_err());
        assert!(split_per_class(&d, 10, 0).is_err());
    }

    #[test]
    fn exact_per_class_counts() {
        let d = balanced(30, 2);
        let s = split_per_class(&d, 20, 3).unwrap();
        assert_eq!(s.train.len(), 40);
        assert_eq!(s.test.len(), 20);
    }
}
