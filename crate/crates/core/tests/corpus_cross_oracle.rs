use momentforge_core::cox::{cox_weights, fan_chamber};
use momentforge_core::fan::{parse_fan, random_corpus, CorpusSpec, ParseOptions, ProjectivityLp};

fn fp_fan() -> momentforge_core::fan::Fan {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/fp_ex2.fan.json");
    parse_fan(&std::fs::read_to_string(path).unwrap(), ParseOptions::default()).unwrap()
}

#[test]
fn chamber_nonempty_iff_projective_on_corpus() {
    let spec = CorpusSpec {
        count: 40,
        seed: 2024,
        extra_seeds: vec![fp_fan()],
        ..Default::default()
    };
    let mut counts = [0usize; 2];
    for cf in random_corpus(&spec) {
        let f = &cf.fan;
        let projective = f.is_projective().unwrap().is_projective();
        let oracle = f
            .is_projective_with(ProjectivityLp::ConeFunctionals)
            .unwrap()
            .is_projective();
        assert_eq!(projective, oracle, "{:?}", cf.history);
        let cg = f.class_group().unwrap();
        assert_eq!(cg.free_rank, f.ray_count() - f.dim());
        if !cg.torsion.is_empty() {
            continue;
        }
        let w = cox_weights(f).unwrap();
        let chamber = fan_chamber(f, &w).unwrap();
        assert_eq!(!chamber.is_empty(), projective, "{:?}", cf.history);
        counts[usize::from(projective)] += 1;
    }
    println!("non-projective {} / projective {}", counts[0], counts[1]);
    assert!(counts[0] > 0 && counts[1] > 0);
}
