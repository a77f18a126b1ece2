use hilali_core::catalog::{self, CatalogError};
use hilali_core::cohomology;
use hilali_core::elliptic;
use hilali_core::fibration::{analyze_fibration, FibrationReport};
use hilali_core::rational::frac;

fn report(key: &str) -> FibrationReport {
    let f = catalog::fibration(key).unwrap();
    analyze_fibration(&f.model).unwrap()
}

#[test]
fn every_entry_matches_its_closed_form() {
    let entries = catalog::all_entries();
    assert!(entries.len() >= 15);
    for e in entries {
        let inv = elliptic::invariants(&e.model).unwrap();
        let known = e.known.as_ref().expect("closed form");
        assert!(
            known.mismatches(&inv).is_empty(),
            "{}: {:?}",
            e.key,
            known.mismatches(&inv)
        );
        if let Some(dec) = &e.decomposition {
            elliptic::validate_decomposition(&e.model, dec)
                .unwrap_or_else(|err| panic!("{}: {err}", e.key));
        }
        let table = cohomology::betti_table(&e.model, inv.formal_dimension);
        assert!(cohomology::poincare_check(&table), "{}", e.key);
        assert_eq!(table.get(inv.formal_dimension), 1, "{}", e.key);
    }
}

#[test]
fn spheres_have_the_expected_quotient() {
    for n in 2..=9 {
        let inv = elliptic::invariants(&catalog::sphere(n).unwrap().model).unwrap();
        assert_eq!(inv.h(), &catalog::sphere_h(n));
    }
    assert_eq!(catalog::sphere_h(5), frac(1, 2));
}

#[test]
fn every_catalog_fibration_satisfies_its_asserted_checks() {
    for f in catalog::all_fibrations() {
        let r = analyze_fibration(&f.model).unwrap();
        assert!(
            r.all_asserted_hold(),
            "{}: {:#?}",
            f.key,
            r.asserted_failures()
        );
        for id in [
            "homotopy_odd_total_ge_odd_base",
            "homotopy_odd_base_ge_even_base",
            "homotopy_odd_total_ge_even_total",
            "homotopy_even_total_ge_even_fiber",
            "homotopy_odd_total_ge_odd_fiber",
            "homotopy_summed",
            "quotient_triple_bound",
            "cohomology_product_bound",
            "formal_dimension_additivity",
            "chi_pi_additivity",
        ] {
            assert!(r.check(id).unwrap().holds, "{} {id}", f.key);
        }
        if f.formal {
            for id in [
                "conjecture_lower",
                "conjecture_upper_strict",
                "contraction_halving",
            ] {
                let c = r
                    .check(id)
                    .unwrap_or_else(|| panic!("{} lacks {id}", f.key));
                assert!(c.asserted && c.holds, "{} {id}: {c:?}", f.key);
            }
        }
        if r.fiber.is_f0() {
            assert!(r.check("quotient_double_bound").unwrap().holds, "{}", f.key);
        }
        assert!(r.transgression.odd_to_even_only);
        assert_eq!(r.transgression.surviving(), r.total.dim_pi);
        assert_eq!(
            r.total.dim_pi,
            r.fiber.dim_pi + r.base.dim_pi - 2 * r.transgression.rank
        );
    }
}

#[test]
fn sphere_bundle_over_cp2_is_pi_trivial_but_not_tnhz() {
    let r = report("s3-cp2");
    assert!(r.pi_trivial && !r.tnhz);
    assert_eq!(
        (r.total.dim_pi_even, r.total.dim_pi_odd, r.total.dim_h),
        (1, 2, 4)
    );
    assert_eq!(r.total.formal_dimension, 7);
    assert!(r.check("pi_trivial_implied").unwrap().holds);
}

#[test]
fn equality_cases_of_the_double_bound() {
    for key in ["twistor:s2-cp5-hp2", "s4-hp3-s8"] {
        let r = report(key);
        let c = r.check("quotient_double_bound").unwrap();
        assert!(c.holds && c.slack.0 == frac(0, 1), "{key}: {c:?}");
    }
}

#[test]
fn octonionic_hopf() {
    let r = report("hopf:s7-s15-s8");
    assert_eq!(r.total.dim_pi, 1);
    assert_eq!(r.check("homotopy_summed").unwrap().slack.0, frac(0, 1));
}

#[test]
fn bad_keys_are_rejected() {
    assert!(matches!(
        catalog::fibration("product:sphere:3"),
        Err(CatalogError::BadParameters { .. })
    ));
    assert!(catalog::entry("cpn:x").is_err());
}
