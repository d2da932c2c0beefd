use cosymplectic::catalogue;
use cosymplectic::ce::{CeComplex, MetricComplex};
use cosymplectic::correspondence::{check_modification_map, modify, KahlerAlgebra};
use cosymplectic::deformation::{assemble_e, torus3_family, DeformedStructure};
use cosymplectic::exterior::KForm;
use cosymplectic::foliated::bigrade;
use cosymplectic::lie::LieAlgebra;
use cosymplectic::matrix::{gram_projection, hermitian};
use cosymplectic::poly::{char_poly, eval_matrix};
use cosymplectic::scalar::{cplx, int, rat};
use cosymplectic::structures::levi_civita;
use cosymplectic::{ComplexScalar, QMatrix, Scalar};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn small() -> impl Strategy<Value = i64> {
    -2i64..=2
}

fn qmatrix(rows: usize, cols: usize) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec(small(), rows * cols)
        .prop_map(move |xs| QMatrix::from_fn(rows, cols, |i, j| int(xs[i * cols + j])))
}

/// `ℝ ⋉_D ℝᵏ` with the extra generator placed last.
fn semidirect() -> impl Strategy<Value = LieAlgebra> {
    (1usize..=4).prop_flat_map(|k| qmatrix(k, k)).prop_map(|d| {
        let k = d.rows();
        LieAlgebra::abelian(k).semidirect_extend(&d, "T").unwrap()
    })
}

fn invertible(n: usize) -> impl Strategy<Value = QMatrix> {
    qmatrix(n, n).prop_filter("singular", |m| !m.det().is_zero())
}

fn positive_definite(n: usize) -> impl Strategy<Value = QMatrix> {
    qmatrix(n, n).prop_map(move |a| a.transpose().mul(&a).add(&QMatrix::identity(n)))
}

fn d_squared_is_zero(l: &LieAlgebra) -> bool {
    let ce = CeComplex::new(l);
    (1..l.dim()).all(|k| ce.d(k).mul(ce.d(k - 1)).is_zero())
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn semidirect_products_are_lie_algebras(l in semidirect()) {
        prop_assert!(l.validate().passed());
        prop_assert!(d_squared_is_zero(&l));
    }

    #[test]
    fn differential_squares_to_zero_after_basis_change(
        (l, p) in semidirect().prop_flat_map(|l| { let n = l.dim(); (Just(l), invertible(n)) })
    ) {
        let names: Vec<String> = (0..l.dim()).map(|i| format!("f{i}")).collect();
        let m = l.change_basis(&p, names).unwrap();
        prop_assert!(m.validate().passed());
        prop_assert!(d_squared_is_zero(&m));
        prop_assert_eq!(CeComplex::new(&m).betti(), CeComplex::new(&l).betti());
    }

    #[test]
    fn adjoint_maps_are_derivations(l in semidirect()) {
        for i in 0..l.dim() {
            prop_assert!(l.is_derivation(&l.ad_basis(i)).passed());
        }
    }

    #[test]
    fn kernel_vectors_are_annihilated(m in (1usize..=4, 1usize..=5).prop_flat_map(|(r, c)| qmatrix(r, c))) {
        let k = m.kernel();
        prop_assert_eq!(k.len() + m.rank(), m.cols());
        for v in &k {
            prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn solve_returns_a_solution(
        (m, b) in (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| (qmatrix(r, c), prop::collection::vec(small(), r)))
    ) {
        let b: Vec<Scalar> = b.into_iter().map(int).collect();
        if let Some(x) = m.solve(&b).unwrap() {
            prop_assert_eq!(m.mul_vec(&x), b);
        } else {
            let aug = QMatrix::from_fn(m.rows(), m.cols() + 1, |i, j| if j < m.cols() { m[(i, j)].clone() } else { b[i].clone() });
            prop_assert!(aug.rank() > m.rank());
        }
    }

    #[test]
    fn gram_projection_leaves_an_orthogonal_residual(
        (basis, g, v) in (2usize..=4).prop_flat_map(|n| (qmatrix(n, 2), positive_definite(n), prop::collection::vec(small(), n)))
    ) {
        let cols: Vec<Vec<Scalar>> = basis.column_space();
        let v: Vec<Scalar> = v.into_iter().map(int).collect();
        let p = gram_projection(&cols, &g, &v).unwrap();
        let residual: Vec<Scalar> = v.iter().zip(&p).map(|(a, b)| a - b).collect();
        for c in &cols {
            prop_assert!(hermitian(&g, c, &residual).is_zero());
        }
        let again = gram_projection(&cols, &g, &p).unwrap();
        prop_assert_eq!(again, p);
    }

    #[test]
    fn cayley_hamilton(m in (1usize..=4).prop_flat_map(|n| qmatrix(n, n))) {
        let p = char_poly(&m).unwrap();
        prop_assert!(eval_matrix(&p, &m).is_zero());
        prop_assert_eq!(p.eval(&int(0)), if m.rows() % 2 == 0 { m.det() } else { -m.det() });
    }

    #[test]
    fn levi_civita_is_torsion_free_and_metric(
        (l, g) in semidirect().prop_flat_map(|l| { let n = l.dim(); (Just(l), positive_definite(n)) })
    ) {
        let n = l.dim();
        let conn = levi_civita(&l, &g).unwrap();
        for i in 0..n {
            for j in 0..n {
                let torsion: Vec<Scalar> = conn.nabla(i).column(j).iter().zip(conn.nabla(j).column(i)).map(|(a, b)| a - b).collect();
                prop_assert_eq!(torsion, l.bracket_basis(i, j));
            }
            let m = conn.nabla(i);
            for a in 0..n {
                for b in 0..n {
                    let lhs: Scalar = (0..n).map(|c| &m[(c, a)] * &g[(c, b)] + &g[(a, c)] * &m[(c, b)]).sum();
                    prop_assert!(lhs.is_zero());
                }
            }
        }
    }

    #[test]
    fn hodge_decomposition_matches_betti_numbers(
        (l, g) in semidirect().prop_flat_map(|l| { let n = l.dim(); (Just(l), positive_definite(n)) })
    ) {
        let n = l.dim();
        let b = CeComplex::new(&l).betti();
        let mc = MetricComplex::from_lie(&l, &g).unwrap();
        for k in 0..=n {
            let h = mc.hodge(k);
            let [harm, exact, coexact] = h.dims();
            prop_assert_eq!(harm, b[k]);
            prop_assert_eq!(harm + exact + coexact, binomial(n, k));
            prop_assert!(h.pairwise_orthogonal(mc.gram(k)));
        }
    }

    #[test]
    fn bigraded_components_sum_back(
        (name, k, coeffs) in prop::sample::select(vec!["torus(3)", "marrero(1,1)", "hyperbolic_cosymplectic", "dorfmeister_cosym(1)"])
            .prop_flat_map(|name| {
                let n = catalogue::get(name).unwrap().lie.dim();
                (Just(name), 0..=n).prop_flat_map(move |(name, k)| {
                    (Just(name), Just(k), prop::collection::vec((small(), small()), binomial(n, k)))
                })
            })
    ) {
        let e = catalogue::get(name).unwrap();
        let n = e.lie.dim();
        let phi = KForm::<ComplexScalar> { n, degree: k, coeffs: coeffs.iter().map(|&(a, b)| cplx(int(a), int(b))).collect() };
        let parts = bigrade(&e.lie, e.structure.as_ref().unwrap(), &phi).unwrap();
        prop_assert_eq!(parts.sum(k, phi.coeffs.len(), n), phi);
        for t in parts.components.keys() {
            prop_assert_eq!(t.u + t.v(), k);
        }
    }

    #[test]
    fn modification_by_commuting_rotations_stays_kahler(
        (m, cs) in prop::sample::select(vec![2usize, 3]).prop_flat_map(|m| (Just(m), prop::collection::vec(small(), 2 * m - 2)))
    ) {
        let n = 2 * m;
        let h = KahlerAlgebra { lie: LieAlgebra::abelian(n), j: standard_j(n), g: QMatrix::identity(n) };
        let mut r = QMatrix::zeros(n, n);
        r[(1, 0)] = int(1);
        r[(0, 1)] = int(-1);
        let mut maps = vec![QMatrix::zeros(n, n), QMatrix::zeros(n, n)];
        maps.extend(cs.iter().map(|&c| r.scale(&int(c))));
        prop_assert!(check_modification_map(&h, &maps).passed());
        let out = modify(&h, &maps).unwrap();
        prop_assert!(out.lie.validate().passed());
        prop_assert!(out.verify().unwrap().passed());
    }

    #[test]
    fn deformation_operators_are_self_adjoint_with_matching_kernels(p in -6i64..=6, q in 1i64..=6) {
        let e = catalogue::torus(3).unwrap();
        let s = e.structure.unwrap();
        let t = rat(p, q);
        let ds = DeformedStructure::new(&e.lie, &s, t.clone(), torus3_family().at(&t)).unwrap();
        prop_assert!(ds.check().passed());
        let ops = assemble_e(&ds).unwrap();
        prop_assert!(ops.kernel_characterization().passed());
    }

    #[test]
    fn e_is_nonnegative_and_vanishes_exactly_on_its_kernel(
        (name, v, coeffs) in prop::sample::select(vec!["marrero(1,1)", "hyperbolic_cosymplectic", "dorfmeister_cosym(1)"])
            .prop_flat_map(|name| (Just(name), 0usize..=2, prop::collection::vec((small(), small()), 16)))
    ) {
        let e = catalogue::get(name).unwrap();
        let s = e.structure.unwrap();
        let ds = DeformedStructure::new(&e.lie, &s, int(0), s.j.clone()).unwrap();
        let ops = assemble_e(&ds).unwrap();
        let pos = ops.leaf_degree_positions(v);
        let total = ops.typed.types().len();
        let mut phi = vec![ComplexScalar::zero(); total];
        for (p, &(a, b)) in pos.iter().zip(coeffs.iter()) {
            phi[*p] = cplx(int(a), int(b));
        }
        let gram = ops.typed.gram();
        let value = hermitian(gram, &phi, &ops.e.mul_vec(&phi));
        prop_assert!(value.im.is_zero());
        prop_assert!(!value.re.is_negative());
        let in_kernel = ops.e.mul_vec(&phi).iter().all(Zero::is_zero);
        prop_assert_eq!(value.re.is_zero(), in_kernel);
        let conditions = ops.conditions_kernel_on(&pos);
        let combined: Vec<ComplexScalar> = conditions.iter().fold(vec![ComplexScalar::zero(); total], |acc, k| {
            acc.iter().zip(k).map(|(a, b)| a + b).collect()
        });
        prop_assert!(ops.e.mul_vec(&combined).iter().all(Zero::is_zero));
    }
}

fn standard_j(n: usize) -> QMatrix {
    let mut j = QMatrix::zeros(n, n);
    for i in (0..n).step_by(2) {
        j[(i + 1, i)] = int(1);
        j[(i, i + 1)] = int(-1);
    }
    j
}
