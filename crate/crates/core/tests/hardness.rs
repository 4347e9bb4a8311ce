//! The two-block family on which density approximations say nothing about
//! contracts: `S1` has density 2, `S2` density 1, and only the blocks earn.

use dualmod::contracts::{best_response, best_response_bruteforce, positive_utility_sets};
use dualmod::fixtures::hardness;
use dualmod::mask;
use dualmod::rational::{int, ratio};
use dualmod::{density_decomposition, Rational};

fn gammas() -> Vec<Rational> {
    // strictly inside (1, 2), including values just above 1 and just below 2
    vec![
        ratio(101, 100),
        ratio(21, 20),
        ratio(11, 10),
        ratio(3, 2),
        ratio(19, 10),
        ratio(199, 100),
    ]
}

#[test]
fn densities_are_two_and_one() {
    for (n1, n2) in [(1, 1), (2, 1), (2, 3), (3, 2), (4, 4)] {
        let inst = hardness(n1, n2).unwrap();
        let dec = density_decomposition(&inst, 18).unwrap();
        assert_eq!(dec.parts, vec![mask::full(n1), mask::full(n1 + n2) & !mask::full(n1)]);
        assert_eq!(dec.densities, vec![int(2), int(1)]);
    }
}

#[test]
fn s1_is_the_unique_best_response_between_the_densities() {
    for (n1, n2) in [(1, 1), (2, 1), (2, 3), (3, 2), (4, 4)] {
        let inst = hardness(n1, n2).unwrap();
        let dec = density_decomposition(&inst, 18).unwrap();
        let s1 = mask::full(n1);
        for gamma in gammas() {
            let alpha = gamma.recip();
            assert_eq!(best_response(&dec, &alpha).unwrap(), s1);
            let bf = best_response_bruteforce(&inst, &alpha, 20).unwrap();
            assert_eq!((bf.set, bf.maximizers), (s1, 1));
            // f(S1) - γ g(S1) = (2 - γ) n1
            assert_eq!(bf.value * &gamma, (int(2) - &gamma) * int(n1 as i64));
        }
    }
}

/// Besides `S1`, the full set also earns a positive utility exactly when
/// `γ < (2 + 10 n2) / (1 + 10 n2)`; every other nonempty set is negative.
#[test]
fn positive_utility_sets_are_s1_and_possibly_v() {
    for (n1, n2) in [(1, 1), (2, 1), (2, 3), (3, 2), (4, 4)] {
        let inst = hardness(n1, n2).unwrap();
        let (s1, v) = (mask::full(n1), inst.full());
        let n2r = n2 as i64;
        let threshold = ratio(2 + 10 * n2r, 1 + 10 * n2r);
        for gamma in gammas().into_iter().chain([threshold.clone()]) {
            let pos = positive_utility_sets(&inst, &gamma);
            let expected = if gamma < threshold { vec![s1, v] } else { vec![s1] };
            assert_eq!(pos, expected, "n1 = {n1}, n2 = {n2}, gamma = {gamma}");
            for s in 1..=v {
                if s != s1 && s != v {
                    assert!(inst.f(s) - &gamma * inst.g(s) < int(0));
                }
            }
        }
    }
}
