"""CSV tables behind the bound curves and the Onegin convergence plot."""

from __future__ import annotations

import csv
import io

import numpy as np

from .bounds import ck_upper_bound
from .chain import bias_onegin, onegin
from .distances import ck_truncated

FIGURE2_LABEL_COUNTS = tuple(range(2, 11))
FIGURE2_POINTS = 200
FIGURE3_BIASES = (1e-1, 1e-2, 1e-3, 1e-4)
FIGURE3_HORIZON = 15


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def bound_curve_rows() -> list:
    """Rows ``(m, delta, bound)`` for ``m = 2..10`` on 200 evenly spaced interior
    points of (0, 1)."""
    deltas = np.linspace(0.0, 1.0, FIGURE2_POINTS + 2)[1:-1]
    return [(m, float(d), ck_upper_bound(float(d), m)) for m in FIGURE2_LABEL_COUNTS for d in deltas]


def onegin_convergence_rows(horizon: int = FIGURE3_HORIZON) -> list:
    """Rows ``(epsilon, k, s_k, bound)``: truncated CK sums between the Onegin chain
    and its biased versions, with the bisimilarity upper bound alongside."""
    base = onegin()
    rows = []
    for eps in FIGURE3_BIASES:
        report = ck_truncated(base, bias_onegin(eps), horizon)
        bound = ck_upper_bound(eps, report.m)
        rows.extend((eps, t.i, t.partial_sum, bound) for t in report.per_horizon)
    return rows


FIGURES = {
    2: (("m", "delta", "bound"), bound_curve_rows),
    3: (("epsilon", "k", "s_k", "bound"), onegin_convergence_rows),
}


def figure_csv(figure: int) -> str:
    header, make_rows = FIGURES[figure]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    for row in make_rows():
        writer.writerow([_fmt(x) for x in row])
    return buf.getvalue()
