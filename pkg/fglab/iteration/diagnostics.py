from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from fglab.core.psi import PsiFunction
from fglab.iteration.models import IterationTrace, Scheme

RULE_PSI_STEP = "psi_step"
RULE_WEIGHTED_PSI_STEP = "weighted_psi_step"
RULE_STRICT_DECREASE = "strict_decrease"


@dataclass(frozen=True)
class DiagnosticReport:
    passed: bool
    rule: str
    first_violation: Optional[int] = None
    checked: int = 0

    def to_dict(self) -> dict:
        out: dict = {"passed": self.passed, "rule": self.rule, "checked": self.checked}
        if self.first_violation is not None:
            out["first_violation"] = self.first_violation
        return out


def _rule_for(trace: IterationTrace) -> str:
    if trace.scheme is Scheme.COINCIDENCE:
        return RULE_PSI_STEP
    if (
        trace.scheme in (Scheme.MANN, Scheme.MANN_PAIR)
        and trace.config.target is not None
        and trace.alphas
    ):
        return RULE_WEIGHTED_PSI_STEP
    return RULE_STRICT_DECREASE


def monotonicity_diagnostics(
    trace: IterationTrace, psi: PsiFunction, slack: float = 1e-10
) -> DiagnosticReport:
    """Check the residual recursion of a trace, index by index.

    Coincidence traces:   r_n <= r_{n-1} - psi(r_{n-1})
    Mann with a target:   e_n <= e_{n-1} - alpha_{n-1} psi(e_{n-1})
    anything else:        r_n < r_{n-1} while r_{n-1} > slack
    """
    rs = trace.residuals
    if len(rs) < 2:
        raise ValueError("monotonicity diagnostics need at least two residuals")
    rule = _rule_for(trace)
    checked = 0
    for n in range(1, len(rs)):
        prev, cur = rs[n - 1], rs[n]
        if rule == RULE_PSI_STEP:
            ok = cur <= prev - psi(prev) + slack
        elif rule == RULE_WEIGHTED_PSI_STEP:
            ok = cur <= prev - trace.alphas[n - 1] * psi(prev) + slack
        else:
            if prev <= slack:
                continue
            ok = cur < prev
        checked += 1
        if not ok:
            return DiagnosticReport(False, rule, first_violation=n, checked=checked)
    return DiagnosticReport(True, rule, checked=checked)
