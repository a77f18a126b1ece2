use hilali_core::catalog::{self, RandomOptions, TwoStageParams};
use hilali_core::dsl::{parse_model, print_model};

#[test]
fn every_catalog_model_survives_print_and_parse() {
    for e in catalog::all_entries() {
        let text = print_model(&e.model);
        let back = parse_model(&text).unwrap_or_else(|err| panic!("{}: {err}\n{text}", e.key));
        assert_eq!(back, e.model, "{}", e.key);
        assert_eq!(back.name(), e.model.name());
        assert_eq!(print_model(&back), text);
    }
}

#[test]
fn fibration_totals_and_random_models_round_trip() {
    let totals = catalog::all_fibrations().into_iter().map(|f| f.model.total);
    let random = (0..20u64).map(|seed| {
        catalog::random_two_stage(
            seed,
            TwoStageParams { n: 2, m: 1, r: 2 },
            &RandomOptions::default(),
        )
        .unwrap()
        .model
    });
    let scaled = ["cpn:2", "star:2,3,5"]
        .into_iter()
        .map(|k| catalog::degree_scale(&catalog::entry(k).unwrap().model, 2).unwrap());
    for m in totals.chain(random).chain(scaled) {
        let back = parse_model(&print_model(&m)).unwrap();
        assert_eq!(back, m, "{}", m.name());
    }
}
