"""Symmetric and position-dependent optimal hedge ratios."""

import json

from ._core import (
    OhrError,
    asymmetric_moment_ratios,
    moment_hedge_ratio,
    ols_hedge_ratio,
    simulate,
    split_components,
    wald_symmetry_test,
)
from ._core import run_components as _run_components
from ._core import run_pipeline as _run_pipeline

__all__ = [
    "OhrError",
    "asymmetric_moment_ratios",
    "estimate",
    "estimate_components",
    "moment_hedge_ratio",
    "ols_hedge_ratio",
    "simulate",
    "split_components",
    "wald_symmetry_test",
]


def estimate(path, **options):
    """Runs the pipeline on a price (or, with components=True, component) CSV; returns the report as a dict."""
    return json.loads(_run_pipeline(str(path), **options))


def estimate_components(ds_pos, ds_neg, df_pos, df_neg, **options):
    """Runs the pipeline on component series; returns the report as a dict."""
    return json.loads(_run_components(list(ds_pos), list(ds_neg), list(df_pos), list(df_neg), **options))
