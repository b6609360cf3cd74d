use approx::assert_abs_diff_eq;
use hawkcast::elm::{decode_parameters, encode_parameters, train, Activation, ElmModel, SupervisedSet};
use hawkcast::linalg::{pseudoinverse, Matrix};
use hawkcast::rng::{seeded, standard_normal, uniform, SeededRng};
use proptest::prelude::*;

fn random_matrix(rows: usize, cols: usize, rng: &mut SeededRng) -> Matrix<f64> {
    Matrix::from_vec(rows, cols, (0..rows * cols).map(|_| standard_normal::<f64, _>(rng)).collect()).unwrap()
}

fn residual(h: &Matrix<f64>, beta: &Matrix<f64>, t: &Matrix<f64>) -> f64 {
    h.matmul(beta).unwrap().sub(t).unwrap().frobenius_norm()
}

#[test]
fn one_neuron_matches_normal_equation() {
    let model = ElmModel::new(Matrix::from_rows(&[[1.0]]).unwrap(), vec![0.0], Activation::Sigmoid).unwrap();
    let xs = [0.0, 1.0, -2.0];
    let ys = [1.0, 2.0, 0.5];
    let rows: Vec<[f64; 1]> = xs.iter().map(|&x| [x]).collect();
    let data = SupervisedSet::from_rows(&rows, &ys).unwrap();
    let (trained, _) = train(&model, &data).unwrap();
    let h: Vec<f64> = xs.iter().map(|x| 1.0 / (1.0 + (-x).exp())).collect();
    let slope = h.iter().zip(&ys).map(|(a, b)| a * b).sum::<f64>() / h.iter().map(|a| a * a).sum::<f64>();
    assert_abs_diff_eq!(trained.output_weights().unwrap()[(0, 0)], slope, epsilon = 1e-12);
    let pred = trained.predict_column(&Matrix::from_rows(&[[0.5]]).unwrap()).unwrap();
    assert_abs_diff_eq!(pred[0], slope / (1.0 + (-0.5f64).exp()), epsilon = 1e-12);
}

#[test]
fn square_system_interpolates() {
    let mut rng = seeded(3);
    for _ in 0..20 {
        let model = ElmModel::<f64>::random(6, 2, Activation::Sigmoid, &mut rng).unwrap();
        let x = random_matrix(6, 2, &mut rng);
        let t = random_matrix(6, 1, &mut rng);
        let data = SupervisedSet::new(x.clone(), t.clone()).unwrap();
        let (trained, res) = train(&model, &data).unwrap();
        assert!(res < 1e-8, "residual {res}");
        let p = trained.predict(&x).unwrap();
        assert!(p.sub(&t).unwrap().max_abs() < 1e-6);
    }
}

#[test]
fn zero_targets_give_zero_weights() {
    let mut rng = seeded(4);
    let model = ElmModel::<f64>::random(5, 3, Activation::Tanh, &mut rng).unwrap();
    let data = SupervisedSet::new(random_matrix(12, 3, &mut rng), Matrix::zeros(12, 1)).unwrap();
    let (trained, res) = train(&model, &data).unwrap();
    assert_eq!(res, 0.0);
    assert!(trained.output_weights().unwrap().as_slice().iter().all(|&b| b == 0.0));
    let out = trained.predict(&random_matrix(4, 3, &mut rng)).unwrap();
    assert!(out.as_slice().iter().all(|&v| v == 0.0));
}

#[test]
fn trained_weights_beat_perturbations() {
    let mut rng = seeded(10);
    for _ in 0..100 {
        let n_obs = 3 + (uniform::<f64, _>(&mut rng) * 18.0) as usize;
        let l = 1 + (uniform::<f64, _>(&mut rng) * 8.0) as usize;
        let model = ElmModel::<f64>::random(l, 2, Activation::Sigmoid, &mut rng).unwrap();
        let x = random_matrix(n_obs, 2, &mut rng);
        let t = random_matrix(n_obs, 1, &mut rng);
        let (trained, res) = train(&model, &SupervisedSet::new(x.clone(), t.clone()).unwrap()).unwrap();
        let h = trained.hidden_matrix(&x).unwrap();
        let beta = trained.output_weights().unwrap();
        assert_abs_diff_eq!(residual(&h, beta, &t), res, epsilon = 1e-12);
        for _ in 0..1000 {
            let scale = 10f64.powf(-3.0 * uniform::<f64, _>(&mut rng));
            let delta = random_matrix(l, 1, &mut rng);
            let perturbed = Matrix::from_vec(
                l,
                1,
                beta.as_slice().iter().zip(delta.as_slice()).map(|(b, d)| b + scale * d).collect(),
            )
            .unwrap();
            assert!(res <= residual(&h, &perturbed, &t) + 1e-9);
        }
    }
}

#[test]
fn pseudoinverse_identity_on_hidden_matrix() {
    let mut rng = seeded(12);
    let model = ElmModel::<f64>::random(7, 3, Activation::Sigmoid, &mut rng).unwrap();
    let h = model.hidden_matrix(&random_matrix(20, 3, &mut rng)).unwrap();
    let back = h.matmul(&pseudoinverse(&h)).unwrap().matmul(&h).unwrap();
    assert!(back.sub(&h).unwrap().max_abs() < 1e-8);
}

#[test]
fn prediction_is_linear_in_output_weights() {
    let mut rng = seeded(13);
    let model = ElmModel::<f64>::random(4, 2, Activation::Sigmoid, &mut rng).unwrap();
    let (b1, b2) = (random_matrix(4, 1, &mut rng), random_matrix(4, 1, &mut rng));
    let x = random_matrix(9, 2, &mut rng);
    let p1 = model.clone().with_output_weights(b1.clone()).unwrap().predict(&x).unwrap();
    let p2 = model.clone().with_output_weights(b2.clone()).unwrap().predict(&x).unwrap();
    let p12 = model.with_output_weights(b1.add(&b2).unwrap()).unwrap().predict(&x).unwrap();
    assert!(p12.sub(&p1.add(&p2).unwrap()).unwrap().max_abs() < 1e-12);
}

#[test]
fn text_round_trip_is_exact() {
    let mut rng = seeded(14);
    let model = ElmModel::<f64>::random(5, 3, Activation::Tanh, &mut rng).unwrap();
    let data = SupervisedSet::new(random_matrix(15, 3, &mut rng), random_matrix(15, 2, &mut rng)).unwrap();
    let (trained, _) = train(&model, &data).unwrap();
    let text = trained.to_text().unwrap();
    assert!(text.starts_with("ELM 5 3 2 tanh\n"));
    assert_eq!(ElmModel::<f64>::from_text(&text).unwrap(), trained);
    assert!(ElmModel::<f64>::from_text("ELM 5 3 2 tanh\n1 2 3\n").is_err());
}

#[test]
fn training_is_deterministic() {
    let mut rng = seeded(15);
    let model = ElmModel::<f64>::random(6, 2, Activation::Sigmoid, &mut rng).unwrap();
    let data = SupervisedSet::new(random_matrix(30, 2, &mut rng), random_matrix(30, 1, &mut rng)).unwrap();
    assert_eq!(train(&model, &data).unwrap(), train(&model, &data).unwrap());
}

proptest! {
    #[test]
    fn codec_round_trips(l in 1usize..6, n in 1usize..6, seed in 0u64..1000) {
        let mut rng = seeded(seed);
        let v: Vec<f64> = (0..l * n + l).map(|_| standard_normal::<f64, _>(&mut rng)).collect();
        let (w, b) = decode_parameters(&v, l, n).unwrap();
        prop_assert_eq!(encode_parameters(&w, &b), v.clone());
        let model = ElmModel::from_parameters(&v, l, n, Activation::Sigmoid).unwrap();
        prop_assert_eq!(model.encode_parameters(), v);
    }
}
