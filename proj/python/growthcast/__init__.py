"""Bayesian hierarchical growth-curve fitting."""

from ._growthcast import (
    BoxStats,
    ConfigError,
    CovariateTable,
    CredibleSummary,
    ForecastBand,
    KernelError,
    ModelSpec,
    MseCell,
    MseReport,
    PanelDataset,
    PosteriorDraws,
    RankedCovariate,
    RichardsParams,
    SamplerConfig,
    ScalarDiagnostic,
    Trajectory,
    Variant,
    box_stats,
    cell_values,
    classify,
    classify_unit,
    compare_models,
    extrapolate,
    flat_time_point,
    flat_time_summary,
    gompertz,
    grand_average_curve,
    load_covariates,
    load_trajectories,
    make_panel,
    mse_horizon,
    percentile,
    rank_covariates,
    read_draws_csv,
    richards,
    run_chains,
    running_maximum,
    standardize,
    summarize,
    train_test_split,
    write_draws_csv,
)

__all__ = [name for name in dir() if not name.startswith("_")]
