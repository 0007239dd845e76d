mod common;

use common::*;
use proptest::prelude::*;
use umlaut::{joint_from_channel, product_joint, umlaut_info, Alphabet, Channel, Dist, Error, JointDist};

#[test]
fn make_dist_rules() {
    let bits = Alphabet::new(["0", "1"]).unwrap();
    let d = Dist::new(bits.clone(), &[0.5, 0.5]).unwrap();
    assert_eq!(d, Dist::uniform(bits.clone()));
    let d = Dist::new(bits.clone(), &[0.3, 0.7000000001]).unwrap();
    assert!((d.weights()[0] - 0.3).abs() < 1e-12 && (d.weights()[1] - 0.7).abs() < 1e-12);
    let three = Alphabet::indexed(3).unwrap();
    assert!(matches!(Dist::new(three, &[0.5, -0.5, 1.0]), Err(Error::NegativeWeight { index: 1, .. })));
    assert!(matches!(Dist::new(bits.clone(), &[0.5, 0.6]), Err(Error::NotNormalized { .. })));
    assert!(matches!(Dist::new(bits, &[f64::NAN, 1.0]), Err(_)));
    assert_eq!(Alphabet::new(Vec::<String>::new()), Err(Error::EmptyAlphabet));
    assert!(matches!(Alphabet::new(["a", "a"]), Err(Error::DuplicateSymbol(_))));
}

#[test]
fn joint_from_channel_examples() {
    let w = Channel::bsc(0.1).unwrap();
    let j = joint_from_channel(&w, &Dist::uniform(w.x_alphabet().clone())).unwrap();
    let expected = [[0.45, 0.05], [0.05, 0.45]];
    for x in 0..2 {
        for y in 0..2 {
            assert!((j.mass(x, y) - expected[x][y]).abs() < 1e-16);
        }
    }
    let point = Dist::point(w.x_alphabet().clone(), 1).unwrap();
    let j = joint_from_channel(&w, &point).unwrap();
    assert_eq!(j.row(0), &[0.0, 0.0]);
    assert_eq!(j.row(1), w.row(1));

    let c = Channel::constant(&[0.2, 0.8], 2).unwrap();
    let p = Dist::new(c.x_alphabet().clone(), &[0.3, 0.7]).unwrap();
    assert!(joint_from_channel(&c, &p).unwrap().is_product(1e-15));

    let wrong = Dist::uniform(Alphabet::indexed(3).unwrap());
    assert!(matches!(joint_from_channel(&w, &wrong), Err(Error::AlphabetMismatch(_))));
}

#[test]
fn product_joint_examples() {
    let u = JointDist::from_matrix(&[vec![0.25, 0.25], vec![0.25, 0.25]]).unwrap();
    let uu = product_joint(&u, &u);
    assert_eq!((uu.nx(), uu.ny()), (4, 4));
    assert!(uu.mass_flat().iter().all(|&m| (m - 1.0 / 16.0).abs() < 1e-17));
    assert_eq!(uu.x_alphabet().labels()[1], "0⊗1");

    let point = JointDist::from_matrix(&[vec![1.0]]).unwrap();
    let embedded = product_joint(&u, &point);
    assert_eq!(embedded.mass_flat(), u.mass_flat());

    let pv = JointDist::from_matrix(&[vec![0.0, 1.0 / 3.0], vec![1.0 / 3.0, 1.0 / 3.0]]).unwrap();
    let pv2 = product_joint(&pv, &pv);
    // Frozen from a dense grid minimization over the 3-simplex.
    assert!((umlaut_info(&pv2).value.value() - 4.0 / 3.0 * std::f64::consts::LN_2).abs() < 1e-12);
}

#[test]
fn pv_marginals() {
    let pv = JointDist::from_matrix(&[vec![0.0, 1.0 / 3.0], vec![1.0 / 3.0, 1.0 / 3.0]]).unwrap();
    let (px, py) = pv.marginals();
    assert!((px.weights()[0] - 1.0 / 3.0).abs() < 1e-16 && (py.weights()[1] - 2.0 / 3.0).abs() < 1e-16);
    let point = JointDist::from_matrix(&[vec![0.0, 0.0], vec![0.0, 1.0]]).unwrap();
    assert_eq!(point.px(), &[0.0, 1.0]);
    assert_eq!(point.py(), &[0.0, 1.0]);
}

#[test]
fn json_schemas() {
    let w = Channel::bsc(0.25).unwrap();
    let text = serde_json::to_string(&w).unwrap();
    assert!(text.contains("\"inputs\"") && text.contains("\"matrix\""));
    assert_eq!(serde_json::from_str::<Channel>(&text).unwrap(), w);

    let d: Dist = serde_json::from_str(r#"{"alphabet":["a","b"],"weights":[0.1,0.9]}"#).unwrap();
    assert_eq!(serde_json::from_str::<Dist>(&serde_json::to_string(&d).unwrap()).unwrap(), d);

    let j: JointDist = serde_json::from_str(r#"{"inputs":["0","1"],"outputs":["a","b"],"mass":[[0.1,0.2],[0.3,0.4]]}"#).unwrap();
    assert_eq!(serde_json::from_str::<JointDist>(&serde_json::to_string(&j).unwrap()).unwrap(), j);

    assert!(serde_json::from_str::<Channel>(r#"{"inputs":["0"],"outputs":["a","b"],"matrix":[[0.5,0.6]]}"#).is_err());
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn channel_joint_recovers_input(w in sized_channel(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = Dist::new(w.x_alphabet().clone(), &random_weights(&mut r, w.nx())).unwrap();
        let j = joint_from_channel(&w, &p).unwrap();
        for (a, b) in j.px().iter().zip(p.weights()) {
            prop_assert!((a - b).abs() <= 1e-14);
        }
    }

    #[test]
    fn product_marginals_are_tensors(a in sized_joint(), b in sized_joint()) {
        let ab = product_joint(&a, &b);
        let px = a.x_marginal().product(&b.x_marginal());
        let py = a.y_marginal().product(&b.y_marginal());
        prop_assert!(ab.x_marginal().total_variation(&px) < 1e-14);
        prop_assert!(ab.y_marginal().total_variation(&py) < 1e-14);
    }

    #[test]
    fn dist_json_round_trip(w in weights(4)) {
        let d = Dist::from_weights(&w).unwrap();
        let back: Dist = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        prop_assert_eq!(back, d);
    }
}
