use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use storder_core::dist::{
    binomial, gamma, gamma_convolution_pdf, gamma_mixture, mixture_pmf_pdf, negbin, poisson, Distribution, Family,
    FiniteMixingMeasure, GammaConvolutionSpec, DEFAULT_TAIL_TOL,
};
use storder_core::oracle::{
    check, check_disp, default_quantile_levels, recheck, OracleConfig, OrderVerdict, Relation, DEFAULT_TOL,
};

const DRAWS: usize = 200;

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.random::<f64>() * (hi / lo).ln()).exp()
}

fn measure(rng: &mut ChaCha8Rng, draw: impl Fn(&mut ChaCha8Rng) -> f64) -> FiniteMixingMeasure {
    let n = rng.random_range(1..=4);
    let atoms = (0..n).map(|_| (draw(rng), rng.random_range(0.1..1.0))).collect();
    FiniteMixingMeasure::normalized(atoms).unwrap()
}

/// A random pair from one family: two members or a member and a mixture.
fn pair(rng: &mut ChaCha8Rng, family: usize) -> (Distribution, Distribution) {
    let mixture = rng.random_bool(0.5);
    match family {
        0 => {
            let x = poisson(log_uniform(rng, 0.2, 10.0), DEFAULT_TAIL_TOL).unwrap().into();
            let y = if mixture {
                let mu = measure(rng, |r| log_uniform(r, 0.2, 10.0));
                mixture_pmf_pdf(&Family::Poisson, &mu, DEFAULT_TAIL_TOL).unwrap()
            } else {
                poisson(log_uniform(rng, 0.2, 10.0), DEFAULT_TAIL_TOL).unwrap().into()
            };
            (x, y)
        }
        1 => {
            let n = rng.random_range(1..=15);
            let x = binomial(n, rng.random_range(0.05..0.95)).unwrap().into();
            let y = if mixture {
                let mu = measure(rng, |r| r.random_range(0.05..0.95));
                mixture_pmf_pdf(&Family::Binomial { n }, &mu, DEFAULT_TAIL_TOL).unwrap()
            } else {
                binomial(n + rng.random_range(0..3), rng.random_range(0.05..0.95)).unwrap().into()
            };
            (x, y)
        }
        2 => {
            let k = log_uniform(rng, 0.3, 5.0);
            let x = negbin(k, rng.random_range(0.2..0.9), DEFAULT_TAIL_TOL).unwrap().into();
            let y = if mixture {
                let mu = measure(rng, |r| r.random_range(0.2..0.9));
                mixture_pmf_pdf(&Family::NegBin { k }, &mu, DEFAULT_TAIL_TOL).unwrap()
            } else {
                negbin(log_uniform(rng, 0.3, 5.0), rng.random_range(0.2..0.9), DEFAULT_TAIL_TOL)
                    .unwrap()
                    .into()
            };
            (x, y)
        }
        _ => {
            let a = log_uniform(rng, 0.3, 5.0);
            let x = gamma(a, log_uniform(rng, 0.2, 5.0)).unwrap().into();
            let y = if mixture {
                let mu = measure(rng, |r| log_uniform(r, 0.2, 5.0));
                gamma_mixture(a, &mu).unwrap().into()
            } else {
                gamma(log_uniform(rng, 0.3, 5.0), log_uniform(rng, 0.2, 5.0)).unwrap().into()
            };
            (x, y)
        }
    }
}

fn verdicts(x: &Distribution, y: &Distribution) -> [OrderVerdict; 4] {
    let cfg = OracleConfig::default();
    [Relation::St, Relation::Hr, Relation::Rh, Relation::Lr].map(|r| check(r, x, y, &cfg).unwrap())
}

fn assert_witness(v: &OrderVerdict, x: &Distribution, y: &Distribution) {
    if let Some(w) = &v.witness {
        let e = recheck(v.relation, x, y, w).unwrap().expect("witness lies in the checked set");
        assert_eq!(e, w.excess);
        assert!(e > v.tolerance, "{}: {e}", v.relation);
    }
}

#[test]
fn implication_lattice_and_witnesses() {
    let names = ["poisson", "binomial", "negative binomial", "gamma"];
    for (family, name) in names.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + family as u64);
        let mut holds = [0usize; 4];
        for i in 0..DRAWS {
            let (x, y) = pair(&mut rng, family);
            // both directions of each pair
            for (a, b) in [(&x, &y), (&y, &x)] {
                let [st, hr, rh, lr] = verdicts(a, b);
                for v in [&st, &hr, &rh, &lr] {
                    assert_witness(v, a, b);
                }
                let ctx = || format!("{name} #{i}: {:?}\n{:?}\n{a:?}\n{b:?}", [&st, &hr, &rh, &lr].map(|v| v.holds), [&st, &hr, &rh, &lr].map(|v| (&v.witness, v.max_excess)));
                if lr.holds {
                    assert!(hr.holds && rh.holds, "{}", ctx());
                }
                if hr.holds || rh.holds {
                    assert!(st.holds, "{}", ctx());
                }
                for (n, v) in holds.iter_mut().zip([&st, &hr, &rh, &lr]) {
                    *n += v.holds as usize;
                }
            }
        }
        // the draws exercise both outcomes of every order
        assert!(holds.iter().all(|&n| n > 0 && n < 2 * DRAWS), "{name}: {holds:?}");
    }
}

#[test]
fn equivalences_under_relative_log_concavity() {
    let cfg = OracleConfig::default();
    for family in 0..4 {
        let mut rng = ChaCha8Rng::seed_from_u64(200 + family as u64);
        let mut seen = 0;
        for i in 0..DRAWS {
            let (x, y) = pair(&mut rng, family);
            // equivalences need a common lower support end and nested supports
            let Ok(lc) = check(Relation::Lc, &x, &y, &cfg) else { continue };
            if !lc.holds {
                continue;
            }
            seen += 1;
            let [st, hr, rh, lr] = verdicts(&x, &y);
            assert_eq!(st.holds, hr.holds, "family {family} #{i}: st vs hr {:?} {:?} {x:?} {y:?}", (&st.witness, st.max_excess), (&hr.witness, hr.max_excess));
            assert_eq!(lr.holds, rh.holds, "family {family} #{i}: lr vs rh");
        }
        assert!(seen >= 20, "family {family}: only {seen} lc pairs");
    }
}

#[test]
fn reflexive() {
    let mut rng = ChaCha8Rng::seed_from_u64(300);
    let cfg = OracleConfig::default();
    for family in 0..4 {
        for _ in 0..25 {
            let (x, y) = pair(&mut rng, family);
            for d in [&x, &y] {
                for rel in Relation::ALL {
                    if rel.continuous_only() && d.is_discrete() {
                        continue;
                    }
                    let v = check(rel, d, d, &cfg).unwrap();
                    assert!(v.holds, "{rel}: {v:?}");
                }
            }
        }
    }
}

/// Pairwise form of the dispersive order over every pair of levels.
fn disp_pairwise(x: &Distribution, y: &Distribution, levels: &[f64], tol: f64) -> bool {
    let (a, b) = (x.as_continuous().unwrap(), y.as_continuous().unwrap());
    let q = |d: &storder_core::dist::ContinuousDistribution, u: f64| {
        if u <= 0.5 {
            d.quantile(u).unwrap()
        } else {
            d.upper_quantile(1.0 - u).unwrap()
        }
    };
    let qx: Vec<f64> = levels.iter().map(|&u| q(a, u)).collect();
    let qy: Vec<f64> = levels.iter().map(|&u| q(b, u)).collect();
    // D = G⁻¹ − F⁻¹ nondecreasing, relative to the consecutive tolerance
    // accumulated along the way
    for i in 0..levels.len() {
        for j in i + 1..levels.len() {
            if (qx[j] - qx[i]) - (qy[j] - qy[i]) > tol * (j - i) as f64 {
                return false;
            }
        }
    }
    true
}

#[test]
fn dispersive_spacings_telescope() {
    // Consecutive spacings suffice: if every consecutive spacing of X is at
    // most that of Y, summing over the levels between any two gives the
    // same for that pair, and a failing consecutive pair is itself a pair.
    let mut rng = ChaCha8Rng::seed_from_u64(400);
    let levels = default_quantile_levels(80);
    let mut outcomes = [0usize; 2];
    for i in 0..60 {
        let (x, y) = if i % 2 == 0 {
            pair(&mut rng, 3)
        } else {
            let m = rng.random_range(1..=3);
            let spec = GammaConvolutionSpec::new(
                (0..m).map(|_| log_uniform(&mut rng, 0.5, 4.0)).collect(),
                (0..m).map(|_| log_uniform(&mut rng, 0.5, 2.0)).collect(),
            )
            .unwrap();
            let beta = log_uniform(&mut rng, 0.5, 2.0);
            (gamma(spec.total_shape(), beta).unwrap().into(), gamma_convolution_pdf(&spec).unwrap().into())
        };
        let v = check_disp(&x, &y, &levels, DEFAULT_TOL).unwrap();
        assert_eq!(v.holds, disp_pairwise(&x, &y, &levels, DEFAULT_TOL), "#{i}");
        outcomes[v.holds as usize] += 1;
    }
    assert!(outcomes[0] > 0 && outcomes[1] > 0, "{outcomes:?}");
}
