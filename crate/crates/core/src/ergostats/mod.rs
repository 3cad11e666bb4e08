//! Koopman operator, correlation sequences and finite-horizon ergodic statistics.

mod birkhoff;
mod correlation;
mod koopman;
mod product;
mod report;
mod sequences;

pub use birkhoff::{birkhoff_average, contraction_check, contraction_check_many, BirkhoffAverages};
pub use correlation::{
    correlation, correlation_series, koopman_table, CorrelationSeries, CorrelationValue, KoopmanTable,
};
pub use koopman::{
    koopman_apply, koopman_iterate, koopman_series, EvalMode, KoopmanConfig, KoopmanValue, DEFAULT_TREE_CAP,
    DEFAULT_WALKS,
};
pub use product::{
    product_correlation_factorization_check, product_correlation_series, product_koopman_series,
    PairObservable, Separable,
};
pub use report::{
    correlation_report, correlation_report_with, tail_statistics, Consistency, CorrelationReport,
    ReportOptions, TailStatistics, Verdicts, DEFAULT_HORIZON, SCOPE_NOTE,
};
pub use sequences::{
    cesaro, cesaro_abs_dev, density_zero_filter, density_zero_filter_with, DensityZeroOptions,
    DensityZeroResult, MIN_FILTER_LEN,
};
