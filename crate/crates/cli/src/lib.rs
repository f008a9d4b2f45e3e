//! Command-line driver for the exact homological algebra workbench:
//! presentation-file parsing, named verification scenarios, and
//! machine-readable output.

pub mod parse;
pub mod scenarios;
pub mod table;

pub use parse::{parse_presentation, ParseError};
pub use scenarios::{run_scenario, Params, ScenarioError, SCENARIOS};
pub use table::{Format, ResultTable, Row, CSV_HEADER, SCHEMA_VERSION};

/// The sign-convention table all computations follow; its hash is recorded
/// in every result table. `|a|` is homological degree, `P_i` the shifted
/// prefix degree `|a_0| + sum_{j<=i} (|a_j| + 1)` of a Hochschild tensor.
pub const SIGN_CONVENTIONS: &str = "\
hochschild-b-merge-slot-0:      +1
hochschild-b-diff-slot-i:       (-1)^(P_{i-1}+1)
hochschild-b-merge-slot-i:      (-1)^(P_i)
hochschild-b-cyclic:            -(-1)^((|a_k|+1) P_{k-1})
hochschild-b-curvature-insert:  (-1)^(P_i+1)
hochschild-B-rotation:          (-1)^(p q)
dual-complex-differential:      (-1)^(k+1) d^T out of degree k
de-rham-vs-algebra:             d(D g) = -D(d g)
bar-differential-inner:         (-1)^(S_{i-1}), S_i = sum_{j<=i} (|a_j|+1)
bar-differential-merge:         (-1)^(S_i)
cobar-differential:             d(y_c) = -y_{dc} - sum (-1)^{|l|} y_l y_r
convolution-koszul-sign:        (f g)(w) = sum (-1)^{|g| deg(w')} f(w') g(w'')
";

/// Exit codes: 0 all checks pass, 1 mathematical mismatch, 2 usage or
/// parse error, 3 resource-limit abort.
pub mod exit_codes {
    pub const PASS: i32 = 0;
    pub const MISMATCH: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const RESOURCE: i32 = 3;
}
