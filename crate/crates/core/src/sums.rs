//! Power sums over integer ranges, used to close strip and square masses of
//! pure-power atom families far beyond the materialized horizon.

const DIRECT_LIMIT: u64 = 2000;
const DIRECT_HEAD: u64 = 1000;

/// `sum_{k=a}^{b} k^s` for `1 <= a`. Empty ranges give 0.
pub fn power_sum(a: u64, b: u64, s: f64) -> f64 {
    if b < a {
        return 0.0;
    }
    let a = a.max(1);
    if b - a < DIRECT_LIMIT {
        return direct(a, b, s);
    }
    let head_end = a + DIRECT_HEAD - 1;
    direct(a, head_end, s) + euler_maclaurin(head_end + 1, b, s)
}

fn direct(a: u64, b: u64, s: f64) -> f64 {
    // sum small terms first when the sequence grows
    let mut total = 0.0;
    if s > 0.0 {
        for k in a..=b {
            total += (k as f64).powf(s);
        }
    } else {
        for k in (a..=b).rev() {
            total += (k as f64).powf(s);
        }
    }
    total
}

/// Euler-Maclaurin with the B2 and B4 corrections; `a` is large enough that
/// the remainder is far below double precision for moderate `s`.
fn euler_maclaurin(a: u64, b: u64, s: f64) -> f64 {
    let x = a as f64;
    let y = b as f64;
    let integral = if (s + 1.0).abs() < 1e-15 {
        (y / x).ln()
    } else {
        (y.powf(s + 1.0) - x.powf(s + 1.0)) / (s + 1.0)
    };
    let ends = 0.5 * (x.powf(s) + y.powf(s));
    let d1 = |t: f64| s * t.powf(s - 1.0);
    let d3 = |t: f64| s * (s - 1.0) * (s - 2.0) * t.powf(s - 3.0);
    integral + ends + (d1(y) - d1(x)) / 12.0 - (d3(y) - d3(x)) / 720.0
}

/// `sum_{k=a}^{inf} k^s` for `s < -1`.
pub fn power_sum_to_infinity(a: u64, s: f64) -> f64 {
    assert!(s < -1.0, "power sum diverges for s >= -1");
    let a = a.max(1);
    let head_end = a + DIRECT_HEAD - 1;
    let x = (head_end + 1) as f64;
    let tail = -x.powf(s + 1.0) / (s + 1.0) + 0.5 * x.powf(s) - s * x.powf(s - 1.0) / 12.0
        + s * (s - 1.0) * (s - 2.0) * x.powf(s - 3.0) / 720.0;
    direct(a, head_end, s) + tail
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn matches_direct_summation() {
        for &s in &[-2.5, -1.0, -0.3, 0.0, 1.0, 2.0, 3.5] {
            let fast = power_sum(3, 50_000, s);
            let slow = direct(3, 50_000, s);
            assert_relative_eq!(fast, slow, max_relative = 1e-12);
        }
    }

    #[test]
    fn squares_closed_form() {
        let n: u64 = 1_000_000;
        let exact = (n as f64) * (n as f64 + 1.0) * (2.0 * n as f64 + 1.0) / 6.0;
        assert_relative_eq!(power_sum(1, n, 2.0), exact, max_relative = 1e-13);
    }

    #[test]
    fn empty_range() {
        assert_eq!(power_sum(10, 9, 2.0), 0.0);
    }

    #[test]
    fn zeta_two() {
        let z = power_sum_to_infinity(1, -2.0);
        assert_relative_eq!(z, std::f64::consts::PI.powi(2) / 6.0, max_relative = 1e-13);
    }

    #[test]
    fn zeta_one_point_two() {
        // mpmath: zeta(1.2)
        assert_relative_eq!(
            power_sum_to_infinity(1, -1.2),
            5.591_582_441_177_752,
            max_relative = 1e-12
        );
    }
}
