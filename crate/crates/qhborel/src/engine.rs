//! The invariant computations on a validated record: the restriction
//! multiplicity matrix `V`, its row-sum length sequence `l`, the
//! existence verdict for a regular exact Borel subalgebra, good
//! representatives, the derived Borel profile and the class-level flags.
//!
//! All recursions run along the poset's linear extension and report results
//! in input label order. Every function expects a record on which
//! [`QhData::validate`] returned no violations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{unitriangular_solve, IntMat, RatVec};
use crate::model::QhData;

#[derive(Debug, Error)]
pub enum EngineError {
    /// The recursion produced a negative multiplicity: no quasihereditary
    /// algebra realizes this record.
    #[error("not realizable: restriction multiplicity at row {row}, column {col} is {value}")]
    NegativeEntry {
        row: usize,
        col: usize,
        value: BigInt,
    },
    /// The recursion put weight on an immediate predecessor, which genuine
    /// data never does.
    #[error(
        "not realizable: restriction multiplicity {value} at row {row}, column {col}, \
         an immediate predecessor"
    )]
    PredecessorSupport {
        row: usize,
        col: usize,
        value: BigInt,
    },
    #[error("multiplicity vector entry {index} must be a positive integer")]
    NonPositiveK { index: usize },
    #[error("multiplicity vector has {got} entries, expected {expected}")]
    KLength { expected: usize, got: usize },
    /// `hom[j][i]` is not divisible by `k[j]`: no regular exact Borel
    /// subalgebra with these simple dimensions exists for this class.
    #[error("hom dimension from label index {j} to {i} is not divisible by k[{j}]")]
    Divisibility { i: usize, j: usize },
}

impl EngineError {
    /// True for the verdict-style failures that prove the request cannot be
    /// realized (as opposed to malformed arguments).
    pub fn is_unrealizable(&self) -> bool {
        matches!(
            self,
            EngineError::NegativeEntry { .. }
                | EngineError::PredecessorSupport { .. }
                | EngineError::Divisibility { .. }
        )
    }
}

/// The nonnegative unitriangular invariant matrix of the class, indexed like
/// the input labels. Row `i` lists the composition multiplicities of the
/// restricted `i`-th simple over a regular exact Borel subalgebra of any
/// good representative. Diagonal entries are 1 and entries at immediate
/// predecessors or outside the down-set vanish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VMatrix {
    pub mat: IntMat,
}

/// Row sums of [`VMatrix`]: the lengths of the restricted simples. Every
/// entry is a positive integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LSequence {
    pub l: Vec<BigInt>,
}

/// Outcome of the existence test for a regular exact Borel subalgebra.
#[derive(Debug, Clone, PartialEq)]
pub enum BorelVerdict {
    /// The solution of `V·x = simple_dims` is entrywise a positive integer:
    /// these are the simple dimensions of the Borel subalgebra.
    Good { k: Vec<BigInt> },
    /// The exact rational witness solution, with the indices failing
    /// positivity or integrality.
    NotGood { witness: RatVec, failing: Vec<usize> },
}

/// Numerical profile of a regular exact Borel subalgebra with simple
/// dimension vector `k`, for the good representative of the class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorelProfile {
    /// Cartan matrix of the opposite algebra: `cartan_bop = nabla · V`,
    /// entry `[i][j]` counting the `j`-th simple in the `i`-th injective.
    pub cartan_bop: IntMat,
    /// Cartan matrix proper, the transpose of `cartan_bop`.
    pub cartan_b: IntMat,
    /// Lengths of the injective indecomposables.
    pub len_q: Vec<BigInt>,
    /// Lengths of the projective indecomposables.
    pub len_p: Vec<BigInt>,
    /// Dimensions of the injective indecomposables: `cartan_bop · k`.
    pub dim_q: Vec<BigInt>,
    /// Dimensions of the projective indecomposables: `cartan_b · k`.
    pub dim_p: Vec<BigInt>,
    /// Dimension of the Borel subalgebra.
    pub dim_b: BigInt,
    /// `n_table[i][j] = hom[j][i] / k[j]` for `j ◁ i`, zero elsewhere: the
    /// bimodule multiplicities of the kernel of the counit.
    pub n_table: IntMat,
    /// Dimension of the coalgebra bimodule.
    pub dim_w: BigInt,
}

/// Class-level boolean invariants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassFlags {
    /// Every representative of the class is good (`l ≡ 1`).
    pub all_good: bool,
    /// `V` is the identity matrix; equivalent to `all_good`.
    pub v_is_identity: bool,
    /// This record is itself the minimal good representative
    /// (`simple_dims = l`).
    pub minimal_good_here: bool,
    /// Poset height is at most two, which forces `V` to be the identity.
    pub height_shortcut: bool,
}

/// One step of the vector recursion for row `i`:
///
/// ```text
/// v_i = e_i + Σ_{k ⊴ j ◁ i} nabla[j][k]·hom[j][i]·v_k − Σ_{j ◁ i} delta[i][j]·v_j
/// ```
///
/// With `skip_ipred` the sums exclude immediate predecessors of `i` — the
/// pruned route, on which those indices can carry no weight at all.
fn v_step(data: &QhData, prev: &[Option<Vec<BigInt>>], i: usize, skip_ipred: bool) -> Vec<BigInt> {
    let n = data.len();
    let poset = &data.poset;
    let mut is_ipred = vec![false; n];
    for &p in poset.immediate_predecessors(i) {
        is_ipred[p] = true;
    }
    let mut acc = vec![BigInt::zero(); n];
    acc[i] = BigInt::one();
    for j in 0..n {
        if !poset.lt(j, i) {
            continue;
        }
        let h = &data.hom[(j, i)];
        if !h.is_zero() {
            for k in 0..n {
                if !poset.leq(k, j) || (skip_ipred && is_ipred[k]) {
                    continue;
                }
                let c = &data.nabla[(j, k)];
                if c.is_zero() {
                    continue;
                }
                let coeff = c * h;
                let vk = prev[k].as_deref().expect("k precedes i in the extension");
                axpy(&mut acc, &coeff, vk);
            }
        }
        if !(skip_ipred && is_ipred[j]) {
            let d = &data.delta[(i, j)];
            if !d.is_zero() {
                let coeff = -d;
                let vj = prev[j].as_deref().expect("j precedes i in the extension");
                axpy(&mut acc, &coeff, vj);
            }
        }
    }
    acc
}

fn axpy(acc: &mut [BigInt], coeff: &BigInt, v: &[BigInt]) {
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += coeff * x;
        }
    }
}

/// Computes the invariant matrix via the pruned recursion, checking
/// realizability entry by entry: a negative multiplicity or weight on an
/// immediate predecessor proves the record corresponds to no quasihereditary
/// algebra.
pub fn compute_v(data: &QhData) -> Result<VMatrix, EngineError> {
    let n = data.len();
    let mut rows: Vec<Option<Vec<BigInt>>> = vec![None; n];
    for &i in data.poset.linear_extension() {
        let vi = v_step(data, &rows, i, true);
        for (j, value) in vi.iter().enumerate() {
            if data.poset.immediate_predecessors(i).contains(&j) && !value.is_zero() {
                return Err(EngineError::PredecessorSupport {
                    row: i,
                    col: j,
                    value: value.clone(),
                });
            }
            if value.is_negative() {
                return Err(EngineError::NegativeEntry {
                    row: i,
                    col: j,
                    value: value.clone(),
                });
            }
        }
        debug_assert!(vi[i].is_one());
        debug_assert!((0..n).all(|j| data.poset.leq(j, i) || vi[j].is_zero()));
        rows[i] = Some(vi);
    }
    let mat = IntMat::from_rows(rows.into_iter().map(Option::unwrap).collect())
        .expect("rows are square");
    Ok(VMatrix { mat })
}

/// Both algebraic routes to the invariant matrix — the full recursion and
/// the immediate-predecessor-pruned one — with no realizability checks.
/// On genuine data the two agree entrywise; a discrepancy is itself proof
/// that the record is not realizable.
pub fn v_recursions(data: &QhData) -> (IntMat, IntMat) {
    let n = data.len();
    let mut full: Vec<Option<Vec<BigInt>>> = vec![None; n];
    let mut pruned: Vec<Option<Vec<BigInt>>> = vec![None; n];
    for &i in data.poset.linear_extension() {
        full[i] = Some(v_step(data, &full, i, false));
        pruned[i] = Some(v_step(data, &pruned, i, true));
    }
    let collect = |rows: Vec<Option<Vec<BigInt>>>| {
        IntMat::from_rows(rows.into_iter().map(Option::unwrap).collect()).expect("square")
    };
    (collect(full), collect(pruned))
}

/// Computes the length sequence by the direct scalar recursion and checks it
/// against the row sums of [`compute_v`]; the two routes must agree exactly.
pub fn compute_l(data: &QhData) -> Result<LSequence, EngineError> {
    let v = compute_v(data)?;
    let n = data.len();
    let poset = &data.poset;
    let mut l: Vec<Option<BigInt>> = vec![None; n];
    for &i in poset.linear_extension() {
        let mut is_ipred = vec![false; n];
        for &p in poset.immediate_predecessors(i) {
            is_ipred[p] = true;
        }
        let mut acc = BigInt::one();
        for j in 0..n {
            if !poset.lt(j, i) {
                continue;
            }
            let h = &data.hom[(j, i)];
            if !h.is_zero() {
                for k in 0..n {
                    if !poset.leq(k, j) || is_ipred[k] {
                        continue;
                    }
                    let c = &data.nabla[(j, k)];
                    if !c.is_zero() {
                        acc += l[k].as_ref().expect("k precedes i") * c * h;
                    }
                }
            }
            if !is_ipred[j] {
                let d = &data.delta[(i, j)];
                if !d.is_zero() {
                    acc -= l[j].as_ref().expect("j precedes i") * d;
                }
            }
        }
        l[i] = Some(acc);
    }
    let l: Vec<BigInt> = l.into_iter().map(Option::unwrap).collect();
    let sums = v.mat.row_sums();
    assert_eq!(l, sums, "direct length recursion must equal the row sums");
    debug_assert!(l.iter().all(|x| x.is_positive()));
    Ok(LSequence { l })
}

/// Solves `V·x = simple_dims` exactly. The record admits a regular exact
/// Borel subalgebra precisely when every entry of the unique solution is a
/// positive integer; otherwise the rational witness is returned.
pub fn borel_existence(data: &QhData) -> Result<BorelVerdict, EngineError> {
    let v = compute_v(data)?;
    let x = unitriangular_solve(&v.mat, &data.simple_dims, data.poset.linear_extension())
        .expect("computed matrix is unitriangular along the extension");
    let one = BigRational::one();
    let failing: Vec<usize> = (0..x.len())
        .filter(|&i| !x[i].is_integer() || x[i] < one)
        .collect();
    if failing.is_empty() {
        Ok(BorelVerdict::Good {
            k: x.into_iter().map(|r| r.to_integer()).collect(),
        })
    } else {
        Ok(BorelVerdict::NotGood { witness: x, failing })
    }
}

fn check_multiplicities(n: usize, k: &[BigInt]) -> Result<(), EngineError> {
    if k.len() != n {
        return Err(EngineError::KLength {
            expected: n,
            got: k.len(),
        });
    }
    for (index, value) in k.iter().enumerate() {
        if *value < BigInt::one() {
            return Err(EngineError::NonPositiveK { index });
        }
    }
    Ok(())
}

/// Multiplicities `m = V·k` of the good representative with Borel simple
/// dimensions `k`: the equivalent algebra is the opposite endomorphism
/// algebra of `⊕ P_i^{m_i}`. With `k ≡ 1` this is the minimal good
/// representative.
pub fn representative_multiplicities(data: &QhData, k: &[BigInt]) -> Result<Vec<BigInt>, EngineError> {
    check_multiplicities(data.len(), k)?;
    let v = compute_v(data)?;
    Ok(v.mat.matvec(k).expect("shapes agree"))
}

/// Full numerical profile of the regular exact Borel subalgebra with simple
/// dimensions `k` inside the good representative of this class.
pub fn borel_profile(data: &QhData, k: &[BigInt]) -> Result<BorelProfile, EngineError> {
    let n = data.len();
    check_multiplicities(n, k)?;
    let v = compute_v(data)?;
    let l = compute_l(data)?;

    let cartan_bop = data.nabla.matmul(&v.mat).expect("square");
    let cartan_b = cartan_bop.transpose();
    let len_q = data.nabla.matvec(&l.l).expect("shapes agree");
    // Column sum k of nabla counts the standard subquotients of the k-th
    // projective, by reciprocity.
    let filtration_lengths = data.nabla.col_sums();
    let len_p = v.mat.transpose().matvec(&filtration_lengths).expect("shapes agree");
    let dim_q = cartan_bop.matvec(k).expect("shapes agree");
    let dim_p = cartan_b.matvec(k).expect("shapes agree");
    let dim_b: BigInt = dim_q.iter().zip(k).map(|(d, ki)| d * ki).sum();
    let dim_b_alt: BigInt = dim_p.iter().zip(k).map(|(d, ki)| d * ki).sum();
    assert_eq!(dim_b, dim_b_alt, "injective and projective routes must agree");

    let mut n_table = IntMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if !data.poset.lt(j, i) {
                continue;
            }
            let h = &data.hom[(j, i)];
            if h.is_zero() {
                continue;
            }
            let (q, r) = h.div_rem(&k[j]);
            if !r.is_zero() {
                return Err(EngineError::Divisibility { i, j });
            }
            n_table[(i, j)] = q;
        }
    }
    let mut dim_w = dim_b.clone();
    for i in 0..n {
        for j in 0..n {
            let c = &n_table[(i, j)];
            if !c.is_zero() {
                dim_w += c * &dim_p[i] * &dim_q[j];
            }
        }
    }

    Ok(BorelProfile {
        cartan_bop,
        cartan_b,
        len_q,
        len_p,
        dim_q,
        dim_p,
        dim_b,
        n_table,
        dim_w,
    })
}

/// The class-level flags; the paired equivalences are asserted.
pub fn class_flags(data: &QhData) -> Result<ClassFlags, EngineError> {
    let v = compute_v(data)?;
    let l = compute_l(data)?;
    let all_good = l.l.iter().all(|x| x.is_one());
    let v_is_identity = v.mat.is_identity();
    assert_eq!(
        all_good, v_is_identity,
        "all-ones lengths and identity matrix must coincide"
    );
    let minimal_good_here = data.simple_dims == l.l;
    let height_shortcut = data.poset.stats().height <= 2;
    if height_shortcut {
        assert!(v_is_identity, "height at most two must force the identity");
    }
    Ok(ClassFlags {
        all_good,
        v_is_identity,
        minimal_good_here,
        height_shortcut,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, FamilySpec};
    use crate::poset::{Poset, PosetSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn a4() -> QhData {
        catalog::generate(&FamilySpec::ExampleA4).unwrap()
    }

    fn erdmann(n: usize) -> QhData {
        catalog::generate(&FamilySpec::Erdmann { n }).unwrap()
    }

    fn dual_ext(n: usize) -> QhData {
        catalog::generate(&FamilySpec::DualExtensionLinear { n }).unwrap()
    }

    fn ones(n: usize) -> Vec<BigInt> {
        vec![BigInt::one(); n]
    }

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn a4_matrix_matches_frozen_fixture() {
        let v = compute_v(&a4()).unwrap();
        let expected = IntMat::from_i64_rows(&[
            &[1, 0, 0, 0],
            &[0, 1, 0, 0],
            &[1, 0, 1, 0],
            &[0, 0, 0, 1],
        ]);
        assert_eq!(v.mat, expected);
    }

    #[test]
    fn a4_lengths_and_verdict() {
        let data = a4();
        let l = compute_l(&data).unwrap();
        assert_eq!(l.l, vec![big(1), big(1), big(2), big(1)]);
        match borel_existence(&data).unwrap() {
            BorelVerdict::NotGood { witness, failing } => {
                let expected: Vec<BigRational> = [1, 1, 0, 1]
                    .iter()
                    .map(|&x| BigRational::from(big(x)))
                    .collect();
                assert_eq!(witness, expected);
                assert_eq!(failing, vec![2]);
            }
            other => panic!("expected NotGood, got {other:?}"),
        }
    }

    #[test]
    fn semisimple_matrix_is_identity() {
        for n in 1..=6 {
            let data = catalog::generate(&FamilySpec::Semisimple { n, chain: false }).unwrap();
            assert!(compute_v(&data).unwrap().mat.is_identity());
            match borel_existence(&data).unwrap() {
                BorelVerdict::Good { k } => assert_eq!(k, ones(n)),
                other => panic!("expected Good, got {other:?}"),
            }
        }
    }

    #[test]
    fn erdmann_closed_forms() {
        for n in 2..=8 {
            let data = erdmann(n);
            let v = compute_v(&data).unwrap();
            for i in 0..n {
                for j in 0..n {
                    let expected = i64::from(j <= i && (i - j) % 2 == 0);
                    assert_eq!(v.mat[(i, j)], big(expected), "n={n} i={i} j={j}");
                }
            }
            let l = compute_l(&data).unwrap();
            let expected: Vec<BigInt> = (1..=n).map(|i| big(i.div_ceil(2) as i64)).collect();
            assert_eq!(l.l, expected);
        }
    }

    #[test]
    fn dual_extension_closed_forms() {
        for n in 2..=8 {
            let data = dual_ext(n);
            let v = compute_v(&data).unwrap();
            for i in 0..n {
                for j in 0..n {
                    let expected = if i == j {
                        big(1)
                    } else if j + 2 <= i {
                        big(2).pow((i - j - 2) as u32)
                    } else {
                        big(0)
                    };
                    assert_eq!(v.mat[(i, j)], expected, "n={n} i={i} j={j}");
                }
            }
            let l = compute_l(&data).unwrap();
            for i in 0..n {
                let expected = if i == 0 { big(1) } else { big(2).pow((i - 1) as u32) };
                assert_eq!(l.l[i], expected);
            }
        }
    }

    #[test]
    fn height_two_data_has_unit_lengths() {
        // Two minimal elements under a common top.
        let poset = Poset::build(&PosetSpec {
            labels: vec!["a".into(), "b".into(), "t".into()],
            relations: vec![("a".into(), "t".into()), ("b".into(), "t".into())],
        })
        .unwrap();
        let delta = IntMat::from_i64_rows(&[&[1, 0, 0], &[0, 1, 0], &[2, 1, 1]]);
        let nabla = IntMat::from_i64_rows(&[&[1, 0, 0], &[0, 1, 0], &[1, 3, 1]]);
        let mut hom = IntMat::identity(3);
        hom[(0, 2)] = big(1);
        let data = QhData::new(poset, delta, nabla, hom, ones(3)).unwrap();
        assert!(data.validate().is_empty());
        assert!(compute_v(&data).unwrap().mat.is_identity());
        assert_eq!(compute_l(&data).unwrap().l, ones(3));
        let flags = class_flags(&data).unwrap();
        assert!(flags.height_shortcut && flags.all_good);
    }

    #[test]
    fn erdmann_minimal_representative_is_good() {
        // Simple dimensions equal to the length sequence (1, 1, 2, 2).
        let data = catalog::morita_twist(&erdmann(4), &ones(4)).unwrap();
        assert_eq!(
            data.simple_dims,
            vec![big(1), big(1), big(2), big(2)]
        );
        match borel_existence(&data).unwrap() {
            BorelVerdict::Good { k } => assert_eq!(k, ones(4)),
            other => panic!("expected Good, got {other:?}"),
        }
        let flags = class_flags(&data).unwrap();
        assert!(flags.minimal_good_here);
    }

    #[test]
    fn representative_multiplicity_fixtures() {
        let m = representative_multiplicities(&a4(), &ones(4)).unwrap();
        assert_eq!(m, vec![big(1), big(1), big(2), big(1)]);

        let semi = catalog::generate(&FamilySpec::Semisimple { n: 3, chain: true }).unwrap();
        let k = vec![big(2), big(5), big(1)];
        assert_eq!(representative_multiplicities(&semi, &k).unwrap(), k);

        let m = representative_multiplicities(&dual_ext(5), &ones(5)).unwrap();
        assert_eq!(m, vec![big(1), big(1), big(2), big(4), big(8)]);
    }

    #[test]
    fn representative_rejects_nonpositive_k() {
        let err = representative_multiplicities(&a4(), &[big(1), big(0), big(1), big(1)])
            .unwrap_err();
        assert!(matches!(err, EngineError::NonPositiveK { index: 1 }));
        let err = representative_multiplicities(&a4(), &ones(3)).unwrap_err();
        assert!(matches!(err, EngineError::KLength { .. }));
    }

    #[test]
    fn erdmann_profile_closed_forms() {
        for n in [2usize, 5, 8] {
            let data = erdmann(n);
            let p = borel_profile(&data, &ones(n)).unwrap();
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(p.cartan_bop[(i, j)], big(i64::from(j <= i)));
                }
                assert_eq!(p.len_q[i], big((i + 1) as i64));
                assert_eq!(p.len_p[i], big((n - i) as i64));
            }
            let n_i = n as i64;
            assert_eq!(p.dim_b, big(n_i * (n_i + 1) / 2));
            assert_eq!(p.dim_w, big(n_i * (n_i + 1) * (n_i + 2) / 6));
        }
    }

    #[test]
    fn dual_extension_profile_closed_forms() {
        for n in [3usize, 6] {
            let p = borel_profile(&dual_ext(n), &ones(n)).unwrap();
            for j in 0..n {
                for i in 0..n {
                    let expected = if i == j {
                        big(1)
                    } else if i > j {
                        big(2).pow((i - j - 1) as u32)
                    } else {
                        big(0)
                    };
                    assert_eq!(p.cartan_b[(j, i)], expected);
                }
                assert_eq!(p.dim_p[j], big(2).pow((n - j - 1) as u32));
            }
            assert_eq!(p.dim_b, big(2).pow(n as u32) - 1);
        }
    }

    #[test]
    fn dual_extension_three_dim_w_is_twelve() {
        let p = borel_profile(&dual_ext(3), &ones(3)).unwrap();
        assert_eq!(p.dim_w, big(12));
    }

    #[test]
    fn semisimple_dim_w_equals_dim_b() {
        let data = catalog::generate(&FamilySpec::Semisimple { n: 4, chain: false }).unwrap();
        let k = vec![big(3), big(1), big(4), big(2)];
        let p = borel_profile(&data, &k).unwrap();
        assert_eq!(p.dim_w, p.dim_b);
        let expected: BigInt = k.iter().map(|x| x * x).sum();
        assert_eq!(p.dim_b, expected);
    }

    #[test]
    fn profile_divisibility_error() {
        // hom from label 2 to label 3 is 1; k[1] = 2 does not divide it.
        let data = erdmann(3);
        let err = borel_profile(&data, &[big(1), big(2), big(1)]).unwrap_err();
        assert!(matches!(err, EngineError::Divisibility { i: 2, j: 1 }));
    }

    #[test]
    fn class_flags_fixtures() {
        let flags = class_flags(&a4()).unwrap();
        assert!(!flags.all_good && !flags.v_is_identity && !flags.minimal_good_here);
        assert!(!flags.height_shortcut);

        let semi = catalog::generate(&FamilySpec::Semisimple { n: 5, chain: false }).unwrap();
        let flags = class_flags(&semi).unwrap();
        assert!(flags.all_good && flags.minimal_good_here && flags.height_shortcut);
    }

    #[test]
    fn corrupt_data_is_detected_as_unrealizable() {
        // Raising a delta entry far above the balance of the recursion makes
        // a multiplicity negative; the record passes validation but cannot
        // come from a quasihereditary algebra.
        let mut data = dual_ext(4);
        data.delta[(3, 0)] = big(9);
        assert!(data.validate().is_empty());
        let err = compute_v(&data).unwrap_err();
        assert!(matches!(err, EngineError::NegativeEntry { .. }));
        assert!(err.is_unrealizable());
    }

    #[test]
    fn recursion_routes_agree_on_genuine_families() {
        let instances = vec![
            a4(),
            erdmann(7),
            dual_ext(7),
            catalog::generate(&FamilySpec::Semisimple { n: 5, chain: true }).unwrap(),
        ];
        for data in instances {
            let (full, pruned) = v_recursions(&data);
            assert_eq!(full, pruned);
            assert_eq!(full, compute_v(&data).unwrap().mat);
        }
    }

    #[test]
    fn solve_consistency_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let n = rng.gen_range(1..=6usize);
            let base = dual_ext(n);
            let k: Vec<BigInt> = (0..n).map(|_| big(rng.gen_range(1..=9))).collect();
            let twisted = catalog::morita_twist(&base, &k).unwrap();
            match borel_existence(&twisted).unwrap() {
                BorelVerdict::Good { k: found } => {
                    assert_eq!(found, k);
                    let m = representative_multiplicities(&twisted, &found).unwrap();
                    assert_eq!(m, twisted.simple_dims);
                }
                other => panic!("expected Good, got {other:?}"),
            }
        }
    }

    #[test]
    fn distinct_k_give_distinct_dimension_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let data = erdmann(6);
        let v = compute_v(&data).unwrap();
        for _ in 0..50 {
            let k1: Vec<BigInt> = (0..6).map(|_| big(rng.gen_range(1..=9))).collect();
            let mut k2: Vec<BigInt> = (0..6).map(|_| big(rng.gen_range(1..=9))).collect();
            if k1 == k2 {
                k2[0] += 1;
            }
            assert_ne!(v.mat.matvec(&k1).unwrap(), v.mat.matvec(&k2).unwrap());
        }
    }

    /// Re-expresses `data` with labels listed in the order `perm` (new index
    /// `a` holds old index `perm[a]`).
    fn permute_data(data: &QhData, perm: &[usize]) -> QhData {
        let n = data.len();
        let labels: Vec<String> = perm.iter().map(|&o| data.poset.label(o).to_string()).collect();
        let mut relations = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if data.poset.lt(perm[a], perm[b]) {
                    relations.push((labels[a].clone(), labels[b].clone()));
                }
            }
        }
        let poset = Poset::build(&PosetSpec { labels, relations }).unwrap();
        let pick = |m: &IntMat| IntMat::from_fn(n, n, |a, b| m[(perm[a], perm[b])].clone());
        let dims = perm.iter().map(|&o| data.simple_dims[o].clone()).collect();
        QhData::new(
            poset,
            pick(&data.delta),
            pick(&data.nabla),
            pick(&data.hom),
            dims,
        )
        .unwrap()
    }

    #[test]
    fn input_order_need_not_refine_the_poset() {
        // The same class presented with labels listed 3, 1, 4, 2: every
        // result comes back permuted accordingly.
        let base = a4();
        let perm = [2usize, 0, 3, 1];
        let shuffled = permute_data(&base, &perm);
        assert!(shuffled.validate().is_empty());

        let v = compute_v(&base).unwrap();
        let v_shuffled = compute_v(&shuffled).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(v_shuffled.mat[(a, b)], v.mat[(perm[a], perm[b])]);
            }
        }

        let l = compute_l(&base).unwrap();
        let l_shuffled = compute_l(&shuffled).unwrap();
        for a in 0..4 {
            assert_eq!(l_shuffled.l[a], l.l[perm[a]]);
        }

        match borel_existence(&shuffled).unwrap() {
            BorelVerdict::NotGood { witness, failing } => {
                // Label 3 sits at position 0 now.
                assert_eq!(failing, vec![0]);
                assert!(witness[0].is_zero());
            }
            other => panic!("expected NotGood, got {other:?}"),
        }
    }

    #[test]
    fn results_are_shareable_across_threads() {
        fn check<T: Send + Sync>() {}
        check::<QhData>();
        check::<VMatrix>();
        check::<LSequence>();
        check::<BorelVerdict>();
        check::<BorelProfile>();
        check::<ClassFlags>();
        check::<Poset>();
    }

    #[test]
    fn basic_dichotomy_for_unit_dimensions() {
        // simple_dims ≡ 1: good exactly when the lengths are all one.
        let semi = catalog::generate(&FamilySpec::Semisimple { n: 4, chain: false }).unwrap();
        assert!(matches!(
            borel_existence(&semi).unwrap(),
            BorelVerdict::Good { .. }
        ));
        for data in [a4(), erdmann(5), dual_ext(5)] {
            assert!(data.simple_dims.iter().all(|d| d.is_one()));
            let l = compute_l(&data).unwrap();
            let good = matches!(borel_existence(&data).unwrap(), BorelVerdict::Good { .. });
            assert_eq!(good, l.l.iter().all(|x| x.is_one()));
        }
    }
}
