use focal_green::coeffs::*;
use focal_green::combinatorics::{integer, ratio};
use focal_green::ratios::x_m;
use focal_green::{Order, Rational};

#[test]
fn closed_sums_match_convolution_oracle() {
    for m in 2..=12 {
        assert_eq!(CoeffTable::new(m).unwrap(), convolution_oracle(m).unwrap(), "m={m}");
    }
}

#[test]
fn ratios_strictly_increase() {
    let orders: Vec<u32> = (2..=40).collect();
    for r in verify_lemma3_range(&orders).unwrap() {
        assert!(r.holds, "m={}", r.order.m());
        assert!(r.min_margin().unwrap() > &integer(0));
        let ratios = CoeffTable::new(r.order.m()).unwrap().ratios();
        assert!(ratios.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn leading_coefficients() {
    for m in 2..=10u32 {
        let lead = ratio(1, (m * (m + 1)) as i64);
        assert_eq!(coeff_a(m, 0).unwrap(), lead);
        assert_eq!(coeff_b(m, 0).unwrap(), lead);
    }
    assert_eq!(coeff_a(2, 4).unwrap(), ratio(7, 120));
}

#[test]
fn table_evaluates_to_x_m() {
    for m in 2..=8 {
        let table = CoeffTable::new(m).unwrap();
        for x in [ratio(1, 3), integer(1), ratio(9, 2)] {
            assert_eq!(table.eval(&x), x_m(Order::new(m), &x).unwrap());
        }
    }
}

#[test]
fn coefficients_are_sums_of_weighted_products() {
    // A_k = Σ_j R_{m,k,j} f_j / (2m+k), B_k = Σ_j R_{m,k,j} g_j / (2m+k+1)
    for m in 2..=8u32 {
        let w = weights(m).unwrap();
        for k in 0..=2 * m {
            let mut a = integer(0);
            let mut b = integer(0);
            for j in 0..=k.min(m) {
                let r = r_coeff(m, k, j).unwrap();
                a += &r * &w[j as usize].f;
                b += &r * &w[j as usize].g;
            }
            assert_eq!(a / integer((2 * m + k) as i64), coeff_a(m, k).unwrap());
            assert_eq!(b / integer((2 * m + k + 1) as i64), coeff_b(m, k).unwrap());
        }
    }
}

#[test]
fn falling_factorial_basics() {
    assert_eq!(falling_factorial(5, 0), 1.into());
    assert_eq!(falling_factorial(5, 2), 20.into());
    assert_eq!(falling_factorial(3, 5), 0.into());
}

#[test]
fn cross_positivity_and_antisymmetry() {
    for m in 2..=10 {
        for i in 1..=m {
            for j in 0..i {
                let v = cross_positivity(m, i, j).unwrap();
                assert!(v > integer(0));
                assert_eq!(weight_cross_difference(m, j, i), -v.clone());
                assert_eq!(weight_cross_closed_form(m, i, j), v);
            }
        }
        assert!(cross_positivity(m, 0, 1).is_err());
        assert!(cross_positivity(m, 1, 1).is_err());
    }
}

#[test]
fn ratio_check_serializes_exact_values() {
    let r = verify_lemma3(3).unwrap();
    let json = serde_json::to_value(&r).unwrap();
    assert_eq!(json["holds"], true);
    assert_eq!(json["margins"].as_array().unwrap().len(), 6);
    let table = serde_json::to_value(CoeffTable::new(2).unwrap()).unwrap();
    let first = &table["A"][0];
    let back: Rational = ratio(first["num"].as_str().unwrap().parse().unwrap(), first["den"].as_str().unwrap().parse().unwrap());
    assert_eq!(back, ratio(1, 6));
}

#[test]
fn order_guards() {
    assert!(CoeffTable::new(1).is_err());
    assert!(verify_lemma3(0).is_err());
    assert!(convolution_oracle(1).is_err());
}
