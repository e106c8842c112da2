//! One module per subcommand.

mod figures;
mod lowerbound;
mod oracle;
mod simulate;
mod theory;

pub use figures::{
    figure_data, figure_panels, run_figures, scaled_sizes, Figure, FigureOutput, Panel,
    PANEL_VARIANCES,
};
pub use lowerbound::{lowerbound_rows, parse_policy_list, run_lowerbound, LowerBoundRow};
pub use oracle::{oracle_battery, oracle_check, run_oracle_check, BatteryCase, OracleEntry};
pub use simulate::{curve_rows, run_simulate, simulate, CurveSet, Overrides, CURVE_HEADER};
pub use theory::{
    bernoulli_pair_half_gap, bound_respect_records, coupling_gamma_grid, kl_ratio, run_theory,
    theory_report, TailRow, TheoryOptions, TheoryRecord, TheoryReport, CLAIMED_KL_CONSTANT,
    COUPLING_HORIZONS,
};

/// Options shared by every subcommand.
#[derive(Debug, Clone, Default)]
pub struct Common {
    pub seed: Option<u64>,
    pub dense: bool,
}
