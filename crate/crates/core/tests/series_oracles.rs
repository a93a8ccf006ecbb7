mod common;

use num_bigint::BigInt;
use qcircle::series::{
    g_series, inv_neg_pochhammer_series, inv_pochhammer_series, naive_product_oracle, Factor,
    FactorSign, QSeries,
};

#[test]
fn g_series_matches_product_oracle_to_2000() {
    let factors = [
        Factor::new(FactorSign::Plus, 1, 4),
        Factor::new(FactorSign::Minus, 3, 4),
    ];
    let oracle = naive_product_oracle(&factors, 2000).unwrap();
    assert_eq!(g_series(2000), oracle);
}

#[test]
fn single_factor_families_match_oracle() {
    for (a, m) in [(1, 1), (2, 5), (3, 4), (6, 8), (7, 7)] {
        let plus = naive_product_oracle(&[Factor::new(FactorSign::Plus, a, m)], 800).unwrap();
        assert_eq!(inv_pochhammer_series(a, m, 800).unwrap(), plus, "({a}, {m})");
        let minus = naive_product_oracle(&[Factor::new(FactorSign::Minus, a, m)], 800).unwrap();
        assert_eq!(inv_neg_pochhammer_series(a, m, 800).unwrap(), minus, "-({a}, {m})");
    }
}

#[test]
fn partition_numbers_obey_pentagonal_recurrence_to_5000() {
    let p = inv_pochhammer_series(1, 1, 5000).unwrap();
    let p = p.coeffs();
    for n in 1..=5000i64 {
        let mut acc = BigInt::from(0);
        for j in 1.. {
            let g1 = j * (3 * j - 1) / 2;
            if g1 > n {
                break;
            }
            let sign = if j % 2 == 1 { 1 } else { -1 };
            acc += &p[(n - g1) as usize] * sign;
            let g2 = j * (3 * j + 1) / 2;
            if g2 <= n {
                acc += &p[(n - g2) as usize] * sign;
            }
        }
        assert_eq!(acc, p[n as usize], "n = {n}");
    }
    assert_eq!(
        p[1000].to_string(),
        "24061467864032622473692149727991"
    );
}

#[test]
fn g_matches_signed_partition_enumeration() {
    let enumerated = common::enumerate_g(60);
    let g = g_series(60);
    for (n, v) in enumerated.iter().enumerate() {
        assert_eq!(g.coeffs()[n], BigInt::from(*v), "n = {n}");
    }
}

#[test]
fn first_ten_thousand_coefficients_are_nonnegative() {
    assert!(g_series(10_000).first_negative().is_none());
}

#[test]
fn csv_and_binary_round_trip_large_values() {
    let g = g_series(3000);
    let mut csv = Vec::new();
    g.write_csv(&mut csv).unwrap();
    assert_eq!(QSeries::read_csv(&csv[..]).unwrap(), g);
    let mut bin = Vec::new();
    g.write_binary(&mut bin).unwrap();
    assert_eq!(QSeries::read_binary(&bin[..]).unwrap(), g);
}
