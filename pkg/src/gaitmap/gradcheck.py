"""Central finite-difference verification of analytic gradients.

The op under test is wrapped as a scalar loss over a flat parameter dict;
every entry of every parameter array is perturbed by +-h and the central
difference is compared against the analytic gradient.

A central difference is only a derivative estimate on a smooth
neighborhood. With ReLU nonlinearities and the relatively large h this
package pins (1e-3), some perturbation intervals inevitably straddle a
kink (a pre-activation changes sign between theta-h and theta+h), where
the quotient measures an average slope, not the derivative. The harness
therefore lets loss_fn return a fingerprint of all ReLU masks alongside
the loss and skips entries whose fingerprint differs between the two
evaluations, reporting how many were skipped. Smooth ops pass
fingerprint None and every entry is checked. An op with no parameters
passes vacuously.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

Params = dict[str, np.ndarray]


def bool_mask_fingerprint(tree) -> bytes:
    """Hash of every boolean ndarray in a nested tuple/list/dict structure.

    Used to detect ReLU activation-pattern changes between two forward
    passes; any flipped unit changes the digest.
    """
    digest = hashlib.sha256()

    def walk(node):
        if isinstance(node, np.ndarray):
            if node.dtype == np.bool_:
                digest.update(node.tobytes())
        elif isinstance(node, (tuple, list)):
            for item in node:
                walk(item)
        elif isinstance(node, dict):
            for key in sorted(node):
                walk(node[key])

    walk(tree)
    return digest.digest()


@dataclass
class GradCheckReport:
    """Worst relative error per parameter and overall pass/fail at tol."""

    tol: float
    max_rel_err: float = 0.0
    worst_param: str = ""
    per_param: dict[str, float] = field(default_factory=dict)
    checked: int = 0
    skipped_kinks: int = 0

    @property
    def passed(self) -> bool:
        return self.max_rel_err <= self.tol

    def __str__(self) -> str:
        verdict = "pass" if self.passed else "FAIL"
        return (
            f"grad check {verdict}: max rel err {self.max_rel_err:.3e} "
            f"(tol {self.tol:.1e}, worst {self.worst_param or 'n/a'}, "
            f"{self.checked} entries checked, {self.skipped_kinks} kink-crossing skipped)"
        )


def grad_check(
    loss_fn: Callable[[Params], tuple[float, bytes | None]],
    grad_fn: Callable[[Params], Params],
    params: Params,
    h: float = 1e-3,
    tol: float = 1e-3,
) -> GradCheckReport:
    """Compare grad_fn against central differences of loss_fn on every entry.

    loss_fn returns (loss, smoothness fingerprint or None); entries whose
    two evaluations disagree on the fingerprint are skipped (see module
    docstring). Parameter arrays are perturbed in place and restored;
    loss_fn must be a pure function of the dict contents.
    """
    report = GradCheckReport(tol=tol)
    analytic = grad_fn(params)
    for name, values in params.items():
        grad = analytic[name]
        if grad.shape != values.shape:
            raise ValueError(
                f"gradient shape {grad.shape} != parameter shape {values.shape} for {name!r}"
            )
        flat = values.reshape(-1)
        gflat = grad.reshape(-1)
        worst = 0.0
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + h
            above, fp_above = loss_fn(params)
            flat[i] = orig - h
            below, fp_below = loss_fn(params)
            flat[i] = orig
            if fp_above != fp_below:
                report.skipped_kinks += 1
                continue
            report.checked += 1
            numeric = (above - below) / (2.0 * h)
            scale = max(abs(numeric), abs(gflat[i]), 1e-6)
            worst = max(worst, abs(numeric - gflat[i]) / scale)
        report.per_param[name] = worst
        if worst > report.max_rel_err:
            report.max_rel_err = worst
            report.worst_param = name
    return report
