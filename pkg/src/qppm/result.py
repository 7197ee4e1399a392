from __future__ import annotations

import logging
from dataclasses import dataclass, field

log = logging.getLogger(__name__)

PROB_SLACK = 1e-9


@dataclass(frozen=True)
class DetectionResult:
    """Outcome of one detector evaluation.

    ``Pe`` is stored separately from ``Pc`` because closed forms can give the
    error probability far more accurately than ``1 - Pc``.
    """

    method: str
    Pc: float
    Pe: float
    diagnostics: dict = field(default_factory=dict)


def make_result(method: str, Pc: float, Pe: float | None = None, **diagnostics) -> DetectionResult:
    """Build a result, clamping probabilities that stray outside [0, 1] by roundoff."""
    if Pe is None:
        Pe = 1.0 - Pc
    raw = Pc
    if not -PROB_SLACK <= Pc <= 1 + PROB_SLACK:
        raise ValueError(f"{method}: correct-detection probability {Pc!r} outside [0, 1]")
    if Pc < 0 or Pc > 1 or Pe < 0 or Pe > 1:
        log.warning("%s: clamping Pc=%r Pe=%r into [0, 1]", method, Pc, Pe)
        Pc = min(max(Pc, 0.0), 1.0)
        Pe = min(max(Pe, 0.0), 1.0)
        diagnostics["raw_Pc"] = raw
    return DetectionResult(method=method, Pc=float(Pc), Pe=float(Pe), diagnostics=diagnostics)
