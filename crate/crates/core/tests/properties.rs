use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;

use regionbound::engine::Scientific;
use regionbound::oracle::{
    count_regions_1d, pattern_lower_bound, random_net, ConcreteNet, Domain, Layer,
};
use regionbound::transfer::{b_matrix, m_matrix};
use regionbound::{GammaProvider, GammaVariant, Histogram};

fn histogram(max_len: usize) -> impl Strategy<Value = Histogram> {
    prop::collection::vec(0u64..50, 0..max_len).prop_map(|c| Histogram::from_counts(&c))
}

/// `w` with `v ⪯ w`, built by adding mass and moving some of it upward.
fn dominated_pair(max_len: usize) -> impl Strategy<Value = (Histogram, Histogram)> {
    (histogram(max_len), histogram(max_len), any::<bool>()).prop_map(|(v, extra, lift)| {
        let w = &v + &extra;
        let w = if lift { w.down_move() } else { w };
        (v, w)
    })
}

proptest! {
    #[test]
    fn order_is_reflexive_and_transitive(a in histogram(8), b in histogram(8), c in histogram(8)) {
        prop_assert!(a.leq(&a));
        if a.leq(&b) && b.leq(&c) {
            prop_assert!(a.leq(&c));
        }
        if a.leq(&b) && b.leq(&a) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn max_is_least_upper_bound(a in histogram(8), b in histogram(8), c in histogram(8)) {
        let m = Histogram::max_of([&a, &b]).unwrap();
        prop_assert!(a.leq(&m) && b.leq(&m));
        let upper = &(&a + &b) + &c;
        prop_assert!(m.leq(&upper));
        prop_assert_eq!(Histogram::max_of([&a, &a]).unwrap(), a.clone());
        prop_assert_eq!(m, Histogram::max_of([&b, &a]).unwrap());
    }

    #[test]
    fn clip_and_down_move(v in histogram(10), i in 0usize..10) {
        prop_assert_eq!(v.clip(i).l1(), v.l1());
        prop_assert_eq!(v.down_move().l1(), v.l1());
        prop_assert!(v.clip(i).leq(&v));
        prop_assert!(v.leq(&v.down_move()));
        prop_assert!(v.clip(i).len() <= i + 1 || v.clip(i) == v);
    }

    #[test]
    fn operations_are_monotone((v, w) in dominated_pair(8), i in 0usize..8) {
        prop_assert!(v.leq(&w));
        prop_assert!(v.clip(i).leq(&w.clip(i)));
        prop_assert!(v.down_move().leq(&w.down_move()));
    }

    #[test]
    fn text_round_trip(v in histogram(12)) {
        prop_assert_eq!(v.to_string().parse::<Histogram>().unwrap(), v);
    }

    #[test]
    fn transfer_matrices_are_monotone((v, w) in dominated_pair(7), n in 1usize..12) {
        let d = v.len().max(w.len()).max(1) - 1;
        let m = m_matrix(d, n);
        let (mv, mw) = (m.apply(&v).unwrap(), m.apply(&w).unwrap());
        prop_assert!(mv.leq(&mw));
        for variant in GammaVariant::ALL {
            let b = b_matrix(&GammaProvider::new(variant.strategy()), n).unwrap();
            let (bv, bw) = (b.apply(&mv).unwrap(), b.apply(&mw).unwrap());
            prop_assert!(bv.leq(&bw), "{variant}: {bv} !<= {bw}");
        }
    }

    #[test]
    fn tight_gamma_below_loose(nprime in 1usize..40, n in 0usize..40) {
        let ours = GammaProvider::new(GammaVariant::Ours.strategy()).gamma(n, nprime).unwrap();
        let serra = GammaProvider::new(GammaVariant::Serra.strategy()).gamma(n, nprime).unwrap();
        prop_assert!(ours.leq(&serra));
        prop_assert_eq!(ours.l1(), serra.l1());
    }

    #[test]
    fn scientific_is_within_half_a_unit(x in 1u64.., digits in 1usize..8) {
        let s = Scientific::from_integer(&BigUint::from(x), digits);
        let (num, den) = s.value();
        // |value - x| <= 10^(e - digits + 1) / 2
        let ulp_exp = s.exponent - digits as i64 + 1;
        let (lhs, rhs) = if ulp_exp >= 0 {
            let diff = if num >= &den * x { &num - &den * x } else { &den * x - &num };
            (diff * 2u32, &den * BigUint::from(10u32).pow(ulp_exp as u32))
        } else {
            let scale = BigUint::from(10u32).pow((-ulp_exp) as u32);
            let diff = if num >= &den * x { &num - &den * x } else { &den * x - &num };
            (diff * 2u32 * &scale, den.clone())
        };
        prop_assert!(lhs <= rhs, "{x} -> {s}");
        prop_assert_eq!(s.digits.len(), digits);
    }

    #[test]
    fn sweep_invariant_under_rescaling(seed in any::<u64>(), depth in 1usize..3, num in 1i64..20, den in 1i64..20) {
        let hidden: Vec<usize> = (0..depth).map(|i| 2 + (seed as usize >> (4 * i)) % 5).collect();
        let net = random_net(seed, 1, &hidden);
        let c = BigRational::new(BigInt::from(num), BigInt::from(den));
        let base = count_regions_1d(&net, &Domain::Line).unwrap().count;
        // reparameterize the line
        let moved = count_regions_1d(&net.with_input_scaled(&c), &Domain::Line).unwrap().count;
        prop_assert_eq!(base, moved);
        // scale first-layer units and undo it in the next layer (relu(c z) = c relu(z))
        let mut layers = net.layers().to_vec();
        let (first, rest) = layers.split_at_mut(1);
        for (row, b) in first[0].weights.iter_mut().zip(first[0].biases.iter_mut()) {
            row[0] = &row[0] * &c;
            *b = &*b * &c;
        }
        for row in rest[0].weights.iter_mut() {
            for w in row.iter_mut() {
                *w = &*w / &c;
            }
        }
        let scaled = ConcreteNet::new(1, layers).unwrap();
        prop_assert_eq!(base, count_regions_1d(&scaled, &Domain::Line).unwrap().count);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sampled_patterns_stay_below_both_bounds(seed in any::<u64>(), n0 in 1usize..4, w1 in 1usize..6, w2 in 1usize..6) {
        let net = random_net(seed, n0, &[w1, w2]);
        let count = pattern_lower_bound(&net, 500, seed).count;
        let stages = regionbound::archspec::resolve(&net.architecture()).unwrap();
        for variant in GammaVariant::ALL {
            let p = GammaProvider::new(variant.strategy());
            let b = regionbound::engine::evaluate(&stages, &p, n0, Default::default()).unwrap().bound;
            prop_assert!(BigUint::from(count) <= b);
        }
    }
}

#[test]
fn zero_net_has_one_pattern() {
    let zero = |w: usize, n: usize| Layer {
        weights: vec![vec![BigRational::from_integer(0.into()); n]; w],
        biases: vec![BigRational::from_integer(0.into()); w],
    };
    let net = ConcreteNet::new(3, vec![zero(4, 3), zero(1, 4)]).unwrap();
    assert_eq!(pattern_lower_bound(&net, 100, 0).count, 1);
}
