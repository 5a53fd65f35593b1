//! Built-in generators for the example families, the tilting-multiplicity
//! recursion on trees, the good-representative twist, and seeded random
//! trees for property tests.
//!
//! The family data is transcribed from the composition series of the
//! projective modules of each algebra; the series are quoted next to each
//! generator.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::engine::{self, EngineError};
use crate::exact::IntMat;
use crate::model::QhData;
use crate::poset::{Poset, PosetError, PosetSpec};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("invalid family parameters: {0}")]
    InvalidSpec(String),
    #[error("poset is not a tree: some down-set is not a chain")]
    NotATree,
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// Selects one of the built-in families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    /// Path algebra on four chain-ordered vertices whose third restricted
    /// simple has length two; the smallest class that is not good.
    ExampleA4,
    /// `n` simples with identity multiplicity data, on an antichain or a
    /// chain.
    Semisimple { n: usize, chain: bool },
    /// The tridiagonal family on a chain of `n`: every projective shares one
    /// composition factor with each neighbour.
    Erdmann { n: usize },
    /// Dual extension of the linearly oriented type-A quiver: uniserial
    /// standard modules with full support and one-dimensional Hom-spaces in
    /// every allowed direction.
    DualExtensionLinear { n: usize },
    /// Ringel dual of the dual extension of a tree's incidence algebra,
    /// assembled from the tilting multiplicities of the tree.
    RingelDualTree { tree: PosetSpec },
}

/// Tilting filtration multiplicities over a tree: `t[k][j]` counts the
/// `j`-th standard module in a filtration of the `k`-th indecomposable
/// tilting module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TiltingMultiplicities {
    pub t: IntMat,
}

fn chain_spec(n: usize) -> PosetSpec {
    let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let relations = (1..n)
        .map(|i| (i.to_string(), (i + 1).to_string()))
        .collect();
    PosetSpec { labels, relations }
}

fn require_positive(n: usize) -> Result<(), CatalogError> {
    if n == 0 {
        Err(CatalogError::InvalidSpec("size must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Generates the requested family as a full record. All families come with
/// simple dimensions one.
pub fn generate(spec: &FamilySpec) -> Result<QhData, CatalogError> {
    let data = match spec {
        FamilySpec::ExampleA4 => example_a4(),
        FamilySpec::Semisimple { n, chain } => semisimple(*n, *chain)?,
        FamilySpec::Erdmann { n } => erdmann(*n)?,
        FamilySpec::DualExtensionLinear { n } => dual_extension_linear(*n)?,
        FamilySpec::RingelDualTree { tree } => ringel_dual_tree(tree)?,
    };
    debug_assert!(data.validate().is_empty());
    Ok(data)
}

/// Projective towers over the chain 1 < 2 < 3 < 4:
///
/// ```text
///   P1 = [1]   P2 = [2]   P3 = [ 3 ]   P4 = [4]
///        [2]              [2] [4]
/// ```
///
/// Standard quotients: D1 = 1, D2 = 2, D3 = [3/2], D4 = 4. Injective socle
/// series give N1 = 1, N2 = [1/2], N3 = 3, N4 = [3/4], and the only map
/// between distinct standards embeds D2 onto the radical of D3.
fn example_a4() -> QhData {
    let poset = Poset::build(&chain_spec(4)).expect("chain is valid");
    let delta = IntMat::from_i64_rows(&[
        &[1, 0, 0, 0],
        &[0, 1, 0, 0],
        &[0, 1, 1, 0],
        &[0, 0, 0, 1],
    ]);
    let nabla = IntMat::from_i64_rows(&[
        &[1, 0, 0, 0],
        &[1, 1, 0, 0],
        &[0, 0, 1, 0],
        &[0, 0, 1, 1],
    ]);
    let mut hom = IntMat::identity(4);
    hom[(1, 2)] = BigInt::one();
    QhData::new(poset, delta, nabla, hom, vec![BigInt::one(); 4]).expect("shapes agree")
}

fn semisimple(n: usize, chain: bool) -> Result<QhData, CatalogError> {
    require_positive(n)?;
    let spec = if chain {
        chain_spec(n)
    } else {
        PosetSpec {
            labels: (1..=n).map(|i| i.to_string()).collect(),
            relations: Vec::new(),
        }
    };
    let poset = Poset::build(&spec)?;
    Ok(QhData::new(
        poset,
        IntMat::identity(n),
        IntMat::identity(n),
        IntMat::identity(n),
        vec![BigInt::one(); n],
    )
    .expect("shapes agree"))
}

/// Tridiagonal family on the chain 1 < … < n:
///
/// ```text
///   P1 = [1]   Pi = [  i  ]   Pn = [ n ]
///        [2]        [i-1][i+1]     [n-1]
///        [1]        [  i  ]
/// ```
///
/// Standard quotients: D1 = 1, Di = [i/i-1]; the costandard multiplicities
/// coincide, and the only map between distinct standards carries D(i-1)
/// onto the radical of Di.
fn erdmann(n: usize) -> Result<QhData, CatalogError> {
    require_positive(n)?;
    let poset = Poset::build(&chain_spec(n))?;
    let mut delta = IntMat::identity(n);
    let mut hom = IntMat::identity(n);
    for i in 1..n {
        delta[(i, i - 1)] = BigInt::one();
        hom[(i - 1, i)] = BigInt::one();
    }
    let nabla = delta.clone();
    Ok(QhData::new(poset, delta, nabla, hom, vec![BigInt::one(); n]).expect("shapes agree"))
}

/// Dual extension of the linearly oriented type-A quiver on 1 < … < n: the
/// standard modules are uniserial with composition series [i/i-1/…/1], the
/// costandard data coincides, and every Hom-space from a lower standard to a
/// higher one is one-dimensional.
fn dual_extension_linear(n: usize) -> Result<QhData, CatalogError> {
    require_positive(n)?;
    let poset = Poset::build(&chain_spec(n))?;
    let delta = IntMat::from_fn(n, n, |i, j| {
        if j <= i {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    });
    let nabla = delta.clone();
    let hom = delta.transpose();
    Ok(QhData::new(poset, delta, nabla, hom, vec![BigInt::one(); n]).expect("shapes agree"))
}

/// Ringel dual of the dual extension of a tree's incidence algebra. The
/// output lives on the opposite poset; with `t` the tilting multiplicities
/// of the tree, both decomposition matrices are `tᵀ`, and the Hom matrix has
/// a one from `a` to `b` exactly when `b` lies below `a` in the tree. The
/// result is basic, so all simple dimensions are one.
fn ringel_dual_tree(tree_spec: &PosetSpec) -> Result<QhData, CatalogError> {
    let tree = Poset::build(tree_spec)?;
    let tilt = tilting_delta_multiplicities(&tree)?;
    let n = tree.len();
    let delta = tilt.t.transpose();
    let nabla = delta.clone();
    let hom = IntMat::from_fn(n, n, |a, b| {
        if tree.leq(b, a) {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    });
    Ok(
        QhData::new(tree.opposite(), delta, nabla, hom, vec![BigInt::one(); n])
            .expect("shapes agree"),
    )
}

/// Tilting filtration multiplicities over a tree, from the recursion
/// `t[k][j] = δ_{jk} + Σ_{l ◁ k} t[l][j]` evaluated bottom-up. The same
/// matrix serves for both filtration directions because dual extensions
/// carry a simple-preserving duality.
pub fn tilting_delta_multiplicities(tree: &Poset) -> Result<TiltingMultiplicities, CatalogError> {
    if !tree.stats().is_tree {
        return Err(CatalogError::NotATree);
    }
    let n = tree.len();
    let mut t = IntMat::zeros(n, n);
    for &k in tree.linear_extension() {
        let mut row = vec![BigInt::zero(); n];
        row[k] = BigInt::one();
        for l in 0..n {
            if tree.lt(l, k) {
                for (j, target) in row.iter_mut().enumerate() {
                    *target += &t[(l, j)];
                }
            }
        }
        for (j, value) in row.into_iter().enumerate() {
            t[(k, j)] = value;
        }
    }
    Ok(TiltingMultiplicities { t })
}

/// Replaces the simple dimensions by `V·k`, the unique record in the same
/// class whose existence verdict is exactly `Good(k)`. Everything else is an
/// invariant of the class and stays untouched.
pub fn morita_twist(data: &QhData, k: &[BigInt]) -> Result<QhData, EngineError> {
    let dims = engine::representative_multiplicities(data, k)?;
    let out = QhData::new(
        data.poset.clone(),
        data.delta.clone(),
        data.nabla.clone(),
        data.hom.clone(),
        dims,
    )
    .expect("shapes unchanged");
    debug_assert!(out.validate().is_empty());
    Ok(out)
}

/// Uniform-attachment random tree: node `i` picks its parent uniformly among
/// the earlier nodes. Seeded, hence reproducible.
pub fn random_tree_spec(n: usize, seed: u64) -> PosetSpec {
    assert!(n >= 1, "a tree needs at least one node");
    let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut relations = Vec::with_capacity(n.saturating_sub(1));
    for i in 1..n {
        let parent = rng.gen_range(0..i);
        relations.push((labels[parent].clone(), labels[i].clone()));
    }
    PosetSpec { labels, relations }
}
