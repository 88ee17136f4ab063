"""Symmetric equilibrium bids for kth-price sealed-bid auctions."""

import json as _json

from ._core import (
    AuctionSpec,
    Distribution,
    bid,
    bid_asymptotic,
    bid_curve,
    best_response_json,
    default_grid,
    estimate_revenue,
    full_report_json,
)

__all__ = [
    "AuctionSpec",
    "Distribution",
    "bid",
    "bid_asymptotic",
    "bid_curve",
    "best_response",
    "default_grid",
    "estimate_revenue",
    "full_report",
]


def full_report(spec, dist, grid_size=101):
    """Verification report as a dict (see the report schema in the README)."""
    return _json.loads(full_report_json(spec, dist, grid_size))


def best_response(spec, dist, x0, deviation_grid, num_auctions, seed):
    """Best-response scan report as a dict."""
    return _json.loads(
        best_response_json(spec, dist, x0, list(deviation_grid), num_auctions, seed)
    )
