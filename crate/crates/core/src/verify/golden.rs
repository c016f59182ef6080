use crate::constants::{
    concentration_lower_bound, conjectured_kolmogorov_constant, continuity_corrected_coefficient,
    interval_constant_floor, near_half_coefficient_max, quadratic_coefficient, symmetric_interval_constant,
    symmetric_kolmogorov_constant, BERNOULLI_CONVOLUTION_ESSEEN, BINOMIAL_KOLMOGOROV,
    HYPERGEOMETRIC_KOLMOGOROV,
};
use crate::normal::phi_quantile;
use serde::{Deserialize, Serialize};

/// A printed constant next to the value recomputed from its definition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenConstant {
    pub name: String,
    pub expression: String,
    pub value: f64,
    pub printed: String,
    /// `true` when the printed digits are a truncation (followed by an
    /// ellipsis), `false` when they are a rounding.
    pub truncated: bool,
    pub matches: bool,
}

fn entry(name: &str, expression: &str, value: f64, printed: &str, truncated: bool) -> GoldenConstant {
    let digits = printed.split_once('.').map_or(0, |(_, d)| d.len()) as i32;
    let quoted: f64 = printed.parse().expect("printed constant parses");
    let unit = 10f64.powi(-digits);
    // A hair of slack for the decimal representation of `quoted` itself.
    let slack = 1e-15 * quoted.abs().max(1.0);
    let matches = if truncated {
        value >= quoted - slack && value < quoted + unit + slack
    } else {
        (value - quoted).abs() <= 0.5 * unit + slack
    };
    GoldenConstant {
        name: name.to_string(),
        expression: expression.to_string(),
        value,
        printed: printed.to_string(),
        truncated,
        matches,
    }
}

/// Every printed constant, recomputed.
pub fn golden_constants() -> Vec<GoldenConstant> {
    let z95 = phi_quantile(0.95).expect("valid level");
    let quadratic_scale = quadratic_coefficient(0.5) / 0.5;
    let crossover = ((BINOMIAL_KOLMOGOROV / quadratic_scale - 0.5) / 2.0).sqrt();
    vec![
        entry("cc_coefficient", "Phi(-3/sqrt 2)", continuity_corrected_coefficient(), "0.01694", true),
        entry("cc_coefficient_per_n", "4 Phi(-3/sqrt 2)", 4.0 * continuity_corrected_coefficient(), "0.06778", true),
        entry("inv_sqrt_13", "13^(-1/2)", concentration_lower_bound(1.0), "0.277350", true),
        entry("lower_bound_large_sigma", "13^(-1/2)", concentration_lower_bound(1.0), "0.2773", true),
        entry("kolmogorov_lower_large_sigma", "13^(-1/2) / 2", 0.5 * concentration_lower_bound(1.0), "0.1386", true),
        entry("interval_constant_floor", "1/sqrt(2e)", interval_constant_floor(), "0.4288", true),
        entry("symmetric_interval_constant", "1/sqrt(2 pi)", symmetric_interval_constant(), "0.3989", true),
        entry("symmetric_kolmogorov_constant", "1/(2 sqrt(2 pi))", symmetric_kolmogorov_constant(), "0.1994", true),
        entry("near_half_worst", "5/(9 sqrt(2 pi))", near_half_coefficient_max(), "0.2216", true),
        entry("quadratic_crossover", "|p - 1/2| where the quadratic bound meets 0.3190", crossover, "0.3732", true),
        entry(
            "poisson_lower_constant",
            "1.00018989 * 2/(3 sqrt(2 pi))",
            1.000_189_89 * conjectured_kolmogorov_constant(),
            "0.2660",
            true,
        ),
        entry(
            "zero_success_upper_95",
            "z sqrt(1 + z^2/9) + 1 + z^2/3 at z = Phi^-1(0.95)",
            z95 * (1.0 + z95 * z95 / 9.0).sqrt() + 1.0 + z95 * z95 / 3.0,
            "3.777",
            true,
        ),
        entry("bernoulli_convolution_esseen", "0.3057 * 9/8", 0.3057 * 9.0 / 8.0, "0.3439125", false),
        entry(
            "binomial_esseen",
            "max_x 0.3031 (1 - 2x^2 + 0.646x)",
            0.3031 * (1.0 + 0.646 * 0.646 / 8.0),
            "0.31891105995",
            false,
        ),
        entry("binomial_esseen_argmax", "0.646 / 4", 0.646 / 4.0, "0.1615", false),
        entry(
            "hypergeometric_kolmogorov_rounding",
            "0.3440 - 0.3057 * 9/8 (nonnegative)",
            HYPERGEOMETRIC_KOLMOGOROV - BERNOULLI_CONVOLUTION_ESSEEN,
            "0.0000875",
            false,
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_constants_match() {
        for c in golden_constants() {
            assert!(c.matches, "{} = {} vs {}", c.name, c.value, c.printed);
        }
    }

    #[test]
    fn truncation_is_not_rounding() {
        // 0.01694 74... must not be accepted as 0.01695.
        assert!(!entry("x", "", 0.016_947_4, "0.01695", true).matches);
        assert!(entry("x", "", 0.016_947_4, "0.01695", false).matches);
    }
}
