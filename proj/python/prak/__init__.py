"""Pointwise algebra and Cauchy-Riemann-analogue verification for
pseudo-Riemannian metrics of signature (1, -1, -1, -1).

The heavy lifting lives in the compiled extension ``prak._core``; this
package adds dict-based wrappers around the JSON command interface.
"""

import json

from prak._core import (  # noqa: F401
    PrakError,
    ScalarField,
    __version__,
    catalog_names,
    decompose_metric,
    kappa,
    run_json,
    spherical_obstruction,
)


def run(command, config=None, solution_name=""):
    """Run a verification command; returns (report_dict, exit_code)."""
    report, code = run_json(command, json.dumps(config or {}), solution_name)
    return json.loads(report), code


def verify_solution(name, config=None):
    """Verify a catalog solution end to end; returns the report dict."""
    report, _ = run("verify-solution", config, solution_name=name)
    return report


def residuals(config):
    """Residual sweep for the configured metric/field/variant."""
    report, _ = run("residuals", config)
    return report


def curvature(config):
    """Riemann magnitudes over the configured grid."""
    report, _ = run("curvature", config)
    return report
