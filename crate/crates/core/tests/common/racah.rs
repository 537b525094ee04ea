//! Exact 3-j and 6-j symbols from the Racah sums, evaluated with big
//! integers. Arguments are doubled angular momenta.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn fact(n: i32) -> BigInt {
    assert!(n >= 0);
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn triangle(a: i32, b: i32, c: i32) -> bool {
    c >= (a - b).abs() && c <= a + b && (a + b + c) % 2 == 0
}

/// Δ(abc)² as a rational.
fn delta(a: i32, b: i32, c: i32) -> BigRational {
    BigRational::new(
        fact((a + b - c) / 2) * fact((a - b + c) / 2) * fact((b + c - a) / 2),
        fact((a + b + c) / 2 + 1),
    )
}

/// `sign · sqrt(radicand) · sum` as f64.
fn combine(negative: bool, radicand: BigRational, sum: BigRational) -> f64 {
    if sum.is_zero() {
        return 0.0;
    }
    let r = radicand.to_f64().unwrap().sqrt();
    let v = r * sum.to_f64().unwrap();
    if negative {
        -v
    } else {
        v
    }
}

pub fn three_j(j1: i32, j2: i32, j3: i32, m1: i32, m2: i32, m3: i32) -> f64 {
    if m1 + m2 + m3 != 0 || !triangle(j1, j2, j3) {
        return 0.0;
    }
    for (j, m) in [(j1, m1), (j2, m2), (j3, m3)] {
        if m.abs() > j || (j + m) % 2 != 0 {
            return 0.0;
        }
    }
    let radicand = delta(j1, j2, j3)
        * BigRational::from_integer(
            fact((j1 + m1) / 2)
                * fact((j1 - m1) / 2)
                * fact((j2 + m2) / 2)
                * fact((j2 - m2) / 2)
                * fact((j3 + m3) / 2)
                * fact((j3 - m3) / 2),
        );
    // Racah: Σ_k (-1)^k / [k! (j3-j2+k+m1)! (j3-j1+k-m2)! (j1+j2-j3-k)! (j1-k-m1)! (j2-k+m2)!]
    let mut sum = BigRational::zero();
    for k2 in (0..=2 * (j1 + j2 + j3)).step_by(2) {
        let args = [
            k2,
            j3 - j2 + k2 + m1,
            j3 - j1 + k2 - m2,
            j1 + j2 - j3 - k2,
            j1 - k2 - m1,
            j2 - k2 + m2,
        ];
        if args.iter().any(|&a| a < 0) {
            continue;
        }
        let denom = args.iter().fold(BigInt::one(), |acc, &a| acc * fact(a / 2));
        let term = BigRational::new(BigInt::one(), denom);
        if (k2 / 2) % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let phase = (j1 - j2 - m3) / 2;
    combine(phase.rem_euclid(2) == 1, radicand, sum)
}

pub fn six_j(j1: i32, j2: i32, j3: i32, j4: i32, j5: i32, j6: i32) -> f64 {
    let triads = [(j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3)];
    if triads.iter().any(|&(a, b, c)| !triangle(a, b, c)) {
        return 0.0;
    }
    let radicand = triads
        .iter()
        .fold(BigRational::one(), |acc, &(a, b, c)| acc * delta(a, b, c));
    let sums: Vec<i32> = triads.iter().map(|&(a, b, c)| (a + b + c) / 2).collect();
    let quads = [(j1 + j2 + j4 + j5) / 2, (j2 + j3 + j5 + j6) / 2, (j3 + j1 + j6 + j4) / 2];
    let tmin = *sums.iter().max().unwrap();
    let tmax = *quads.iter().min().unwrap();
    let mut sum = BigRational::zero();
    for t in tmin..=tmax {
        let denom = sums.iter().map(|&s| fact(t - s)).product::<BigInt>()
            * quads.iter().map(|&q| fact(q - t)).product::<BigInt>();
        let term = BigRational::new(fact(t + 1), denom);
        if t % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let negative = sum.is_negative();
    combine(negative, radicand, sum.abs())
}

/// Largest deviation between the library and the exact symbols over every
/// 3-j symbol with all `j ≤ jmax` (doubled), and the number of symbols tested.
pub fn sweep_three_j(jmax2: i32) -> (f64, usize) {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for j1 in 0..=jmax2 {
        for j2 in 0..=jmax2 {
            for j3 in 0..=jmax2 {
                if (j1 + j2 + j3) % 2 != 0 {
                    continue;
                }
                for m1 in (-j1..=j1).step_by(2) {
                    for m2 in (-j2..=j2).step_by(2) {
                        let m3 = -m1 - m2;
                        let lib = hanle_core::angular::wigner3j_twice(j1, j2, j3, m1, m2, m3).unwrap();
                        worst = worst.max((lib - three_j(j1, j2, j3, m1, m2, m3)).abs());
                        count += 1;
                    }
                }
            }
        }
    }
    (worst, count)
}

/// As [`sweep_three_j`] for 6-j symbols.
pub fn sweep_six_j(jmax2: i32) -> (f64, usize) {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let r = 0..=jmax2;
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                if !triangle(a, b, c) {
                    continue;
                }
                for d in r.clone() {
                    for e in r.clone() {
                        for f in r.clone() {
                            let lib = hanle_core::angular::wigner6j_twice(a, b, c, d, e, f).unwrap();
                            worst = worst.max((lib - six_j(a, b, c, d, e, f)).abs());
                            count += 1;
                        }
                    }
                }
            }
        }
    }
    (worst, count)
}
