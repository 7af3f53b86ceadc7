"""Entanglement characterization of rebit and qubit pairs.

Correlation matrices are 4x4 float arrays indexed (0, z, x, y) with Alice as
the row index. Counts datasets are dicts mapping setting names such as "zx"
to (n_pp, n_pm, n_mp, n_mm) tuples.
"""

import json

from ._core import (
    Error,
    InvalidArgument,
    NonConvergence,
    ParseError,
    SingularMarginal,
    analyze_counts,
    analyze_exact,
    apply_local_maps,
    bounds,
    cfr_state,
    correlation_from_density,
    decompose,
    density_from_correlation,
    estimate_correlations,
    evaluate_witness,
    hs_distance,
    is_physical,
    monte_carlo_propagate,
    numeric_separability_eigs,
    pstd,
    read_counts_file,
    real_projection,
    similarity,
    simulate_counts,
    simulate_state,
    state,
    to_standard_form,
    write_counts_file,
)


def load_report(text):
    """Parses a JSON report, mapping "inf"/"nan" strings back to floats."""

    def fix(value):
        if isinstance(value, str) and value in ("inf", "-inf", "nan"):
            return float(value)
        if isinstance(value, list):
            return [fix(v) for v in value]
        if isinstance(value, dict):
            return {k: fix(v) for k, v in value.items()}
        return value

    return fix(json.loads(text))


__all__ = [name for name in dir() if not name.startswith("_") and name != "json"]
