//! Every generated instance must survive the text formats unchanged.

use core_model::{BwcInstance, Objective, Rational};
use instance_gen::{builtin, gen_random, reduce_kth_subset, GenObjective, KthSubsetInstance};
use std::fs;
use textio::{
    load_instance, parse_game, parse_machine, serialize_game, serialize_instance,
    serialize_machine, InstanceFile, ObjectiveTag,
};

fn roundtrip(inst: &BwcInstance) {
    let game_text = serialize_game(&inst.game);
    let game2 = parse_game(&game_text, "game.bwcg").expect("game parses back");
    assert_eq!(serialize_game(&game2), game_text);
    let model_text = serialize_machine(&inst.model, &inst.game);
    let model2 = parse_machine(&model_text, "model.bwcm", &game2).expect("model parses back");
    assert_eq!(serialize_machine(&model2, &game2), model_text);

    // Full bundle through the filesystem loader.
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("game.bwcg"), &game_text).unwrap();
    fs::write(dir.path().join("model.bwcm"), &model_text).unwrap();
    let file = InstanceFile {
        game_path: "game.bwcg".to_string(),
        model_path: "model.bwcm".to_string(),
        mu: inst.mu.clone(),
        nu: inst.nu.clone(),
        objective: match inst.objective {
            Objective::MeanPayoff => ObjectiveTag::Mp,
            Objective::ShortestPath(_) => ObjectiveTag::Sp,
        },
    };
    fs::write(dir.path().join("inst.bwci"), serialize_instance(&file)).unwrap();
    let loaded = load_instance(&dir.path().join("inst.bwci")).expect("bundle loads");
    assert_eq!(loaded.mu, inst.mu);
    assert_eq!(loaded.nu, inst.nu);
    assert_eq!(loaded.objective, inst.objective);
    assert_eq!(serialize_game(&loaded.game), game_text);
}

#[test]
fn builtins_roundtrip() {
    for name in ["fig1", "fig2", "fig3", "fig5", "fig6(2)", "fig6(50)", "fig7(13)", "fig7(21)"] {
        roundtrip(&builtin(name).expect(name));
    }
}

#[test]
fn kth_reductions_roundtrip() {
    for (sizes, k, l) in
        [(vec![3u64], 1, 3), (vec![1, 2, 3], 2, 3), (vec![4, 4, 4, 4], 7, 8)]
    {
        let inst = KthSubsetInstance::new(sizes, k, l).unwrap();
        roundtrip(&reduce_kth_subset(&inst));
    }
}

#[test]
fn random_instances_roundtrip() {
    for seed in 0..10 {
        roundtrip(&gen_random(seed, 5, 3, Rational::new(1, 2), GenObjective::MeanPayoff));
        roundtrip(&gen_random(seed, 4, 3, Rational::new(2, 3), GenObjective::ShortestPath));
    }
}
