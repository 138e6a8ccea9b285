use proptest::prelude::*;

use qshape::decomp::indecomposables;
use qshape::diagram::DiagramCategory;
use qshape::diffmod::{bzh, loop_category, resolve_min_diff, rz_k, DifferentialModule};
use qshape::io::{self, Body, Document};
use qshape::module::direct_sum;
use qshape::random::{hereditary_algebras, random_differential_module, random_module, random_semiinjective, rng};
use qshape::shape::ShapeCategory;
use qshape::{Field, Module, PrimeField, Rationals};

fn sorted_dims<F: Field>(m: &Module<F>, seed: u64) -> Vec<Vec<usize>> {
    let mut v: Vec<_> = indecomposables(m, seed).unwrap().summands.iter().map(|s| s.module.dims().to_vec()).collect();
    v.sort();
    v
}

fn f3() -> PrimeField {
    PrimeField::new(3).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn module_documents_round_trip(seed in any::<u64>(), which in 0usize..3) {
        let (_, a) = hereditary_algebras(Rationals).swap_remove(which);
        let m = random_module(&a, 8, &mut rng(seed));
        let doc = Document { header: io::header(&a, None), body: Body::Module { module: io::module_doc(&m) } };
        let back = Document::parse(&doc.to_string_pretty()).unwrap();
        prop_assert_eq!(&back, &doc);
        let Body::Module { module } = &back.body else { unreachable!() };
        let again = io::parse_algebra(Rationals, &back.header.algebra, "algebra").unwrap();
        let m2 = io::parse_module(&again, module, "module").unwrap();
        prop_assert_eq!(m2.dims(), m.dims());
        prop_assert_eq!(m2.arrow_maps(), m.arrow_maps());
    }

    #[test]
    fn diagram_documents_round_trip(seed in any::<u64>()) {
        let a = hereditary_algebras(PrimeField::new(2).unwrap()).swap_remove(0).1;
        let cat = DiagramCategory::new(ShapeCategory::shape_cyclic(a.field(), 3, 2).unwrap(), a).unwrap();
        let x = random_semiinjective(&cat, 12, 3, &mut rng(seed)).unwrap();
        let doc = io::diagram_doc(&cat, &x);
        let y = io::parse_diagram(&cat, &doc, "diagram").unwrap();
        prop_assert_eq!(y.dims(), x.dims());
        prop_assert_eq!(y.arrow_maps(), x.arrow_maps());
        prop_assert_eq!(io::diagram_doc(&cat, &y), doc);
    }

    #[test]
    fn differential_modules_round_trip_through_diagrams(seed in any::<u64>(), which in 0usize..3) {
        let (_, a) = hereditary_algebras(f3()).swap_remove(which);
        let d = random_differential_module(&a, 10, &mut rng(seed));
        let cat = loop_category(&a);
        let back = DifferentialModule::from_diagram(&cat, &d.to_diagram(&cat).unwrap()).unwrap();
        prop_assert_eq!(back.underlying().dims(), d.underlying().dims());
        prop_assert_eq!(back.underlying().arrow_maps(), d.underlying().arrow_maps());
        prop_assert_eq!(back.differential().vertex_maps(), d.differential().vertex_maps());
    }

    #[test]
    fn homology_is_additive_and_basis_free(seed in any::<u64>(), which in 0usize..3) {
        let (_, a) = hereditary_algebras(f3()).swap_remove(which);
        let mut r = rng(seed);
        let d1 = random_differential_module(&a, 8, &mut r);
        let d2 = random_differential_module(&a, 8, &mut r);
        let cat = loop_category(&a);
        let parts = [d1.to_diagram(&cat).unwrap(), d2.to_diagram(&cat).unwrap()];
        let sum = DifferentialModule::from_diagram(&cat, &cat.direct_sum(&parts).module).unwrap();
        let (h1, h2, hs) = (bzh(&d1), bzh(&d2), bzh(&sum));
        let expect: Vec<_> = h1.homology().dims().iter().zip(h2.homology().dims()).map(|(x, y)| x + y).collect();
        prop_assert_eq!(hs.homology().dims(), &expect[..]);

        let moved = parts[0].random_base_change(&mut r).0;
        let d1b = DifferentialModule::from_diagram(&cat, &moved).unwrap();
        let hb = bzh(&d1b);
        prop_assert_eq!(hb.homology().dims(), h1.homology().dims());
    }

    #[test]
    fn decomposition_is_basis_independent(seed in any::<u64>(), which in 0usize..3) {
        let (_, a) = hereditary_algebras(f3()).swap_remove(which);
        let mut r = rng(seed);
        let m = random_module(&a, 9, &mut r);
        let (moved, _) = m.random_base_change(&mut r);
        prop_assert_eq!(sorted_dims(&m, seed), sorted_dims(&moved, seed.wrapping_add(1)));
    }

    #[test]
    fn krull_schmidt_doubles_under_self_sum(seed in any::<u64>(), which in 0usize..3) {
        let (_, a) = hereditary_algebras(f3()).swap_remove(which);
        let m = random_module(&a, 6, &mut rng(seed));
        let doubled = direct_sum(&a, &[m.clone(), m.clone()]).module;
        let once = sorted_dims(&m, seed);
        let mut twice: Vec<_> = once.iter().chain(&once).cloned().collect();
        twice.sort();
        prop_assert_eq!(sorted_dims(&doubled, seed), twice);
    }

    #[test]
    fn minimal_resolution_dims_ignore_the_basis(seed in any::<u64>(), which in 0usize..2) {
        let (_, a) = hereditary_algebras(f3()).swap_remove(which);
        let mut r = rng(seed);
        let d = random_differential_module(&a, 8, &mut r);
        let cat = loop_category(&a);
        let moved = DifferentialModule::from_diagram(&cat, &d.to_diagram(&cat).unwrap().random_base_change(&mut r).0).unwrap();
        let (x, y) = (resolve_min_diff(&d).unwrap(), resolve_min_diff(&moved).unwrap());
        prop_assert!(x.certificates.all() && y.certificates.all());
        prop_assert_eq!(x.target.underlying().dims(), y.target.underlying().dims());
    }

    #[test]
    fn rz_k_has_the_prescribed_homology(seed in any::<u64>(), which in 0usize..3) {
        let (_, a) = hereditary_algebras(f3()).swap_remove(which);
        let m = random_module(&a, 6, &mut rng(seed));
        let j = rz_k(&m).unwrap();
        prop_assert!(qshape::classic::is_injective(j.underlying()));
        let h = bzh(&j);
        prop_assert_eq!(h.homology().dims(), m.dims());
    }
}
