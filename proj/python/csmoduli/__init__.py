"""Finite-dimensional perturbative Chern-Simons engine."""

try:
    from ._core import (  # installed layout
        binary_tree_counts,
        c_leading,
        chart_invariant,
        effective_action,
        hodge_summary,
        horizontality,
        ihx_residual,
        mc_residual,
        theta_weight_su2,
        torsion_value,
        trivalent_graphs,
        validate_fixture,
        volume_form,
    )
except ImportError:  # in-tree build: extension on PYTHONPATH
    from _core import (
    binary_tree_counts,
    c_leading,
    chart_invariant,
    effective_action,
    hodge_summary,
    horizontality,
    ihx_residual,
    mc_residual,
    theta_weight_su2,
    torsion_value,
    trivalent_graphs,
    validate_fixture,
    volume_form,
)

__all__ = [
    "binary_tree_counts",
    "c_leading",
    "chart_invariant",
    "effective_action",
    "hodge_summary",
    "horizontality",
    "ihx_residual",
    "mc_residual",
    "theta_weight_su2",
    "torsion_value",
    "trivalent_graphs",
    "validate_fixture",
    "volume_form",
]
