"""Picard, coincidence, modified Mann and modified Ishikawa schemes.

The implicit schemes fix f(x_{n+1}) (or g(x_{n+1})) and recover x_{n+1} with
``invert_map`` anchored at x_n. A failed solve ends the trace with SOLVE_FAILED.
"""
from __future__ import annotations

from typing import Callable, Optional

from loguru import logger

from fglab.core.errors import DomainError, NoPreimage
from fglab.core.maps import PiecewiseMap, invert_map
from fglab.iteration.models import IterationTrace, RunConfig, Scheme, TraceStatus
from fglab.iteration.schedules import StepSchedule, product_divergent

EVEN = "even"
ODD = "odd"

ALPHA_WARNING = "alpha schedule is not known to satisfy sum alpha_n = infinity"
PRODUCT_WARNING = "schedules are not known to satisfy sum alpha_n * beta_n = infinity"


class _TraceBuilder:
    def __init__(self, scheme: Scheme, cfg: RunConfig, seed: float) -> None:
        self.scheme = scheme
        self.cfg = cfg
        self.prev = seed
        self.xs: list[float] = [cfg.x0]
        self.ys: list[float] = []
        self.zs: list[float] = []
        self.vs: list[float] = []
        self.residuals: list[float] = []
        self.parities: list[Optional[str]] = []
        self.alphas: list[float] = []
        self.betas: list[float] = []
        self.warnings: list[str] = []

    def record(
        self,
        x_next: float,
        y: float,
        *,
        z: Optional[float] = None,
        v: Optional[float] = None,
        parity: Optional[str] = None,
        alpha: Optional[float] = None,
        beta: Optional[float] = None,
    ) -> Optional[TraceStatus]:
        out = y if z is None else z
        if self.cfg.target is not None:
            residual = abs(out - self.cfg.target)
        else:
            residual = abs(out - self.prev)
        self.prev = out
        self.xs.append(x_next)
        self.ys.append(y)
        if z is not None:
            self.zs.append(z)
        if v is not None:
            self.vs.append(v)
        if alpha is not None:
            self.alphas.append(alpha)
        if beta is not None:
            self.betas.append(beta)
        self.parities.append(parity)
        self.residuals.append(residual)
        if residual <= self.cfg.conv_tol:
            return TraceStatus.converged(out, len(self.ys))
        return None

    def warn(self, message: str) -> None:
        logger.warning("{}: {}", self.scheme.value, message)
        self.warnings.append(message)

    def finish(self, status: TraceStatus) -> IterationTrace:
        ishikawa = self.scheme in (Scheme.ISHIKAWA, Scheme.ISHIKAWA_PAIR)
        logger.debug(
            "{} finished: {} after {} step(s)", self.scheme.value, status.kind.value, len(self.ys)
        )
        return IterationTrace(
            scheme=self.scheme,
            iterates_x=tuple(self.xs),
            outputs_y=tuple(self.ys),
            residuals=tuple(self.residuals),
            parities=tuple(self.parities),
            status=status,
            config=self.cfg,
            alphas=tuple(self.alphas),
            betas=tuple(self.betas),
            outputs_z=tuple(self.zs) if ishikawa else None,
            aux_v=tuple(self.vs) if ishikawa else None,
            warnings=tuple(self.warnings),
        )


def _require_start(m: PiecewiseMap, x0: float) -> None:
    if not m.domain.contains(x0):
        raise DomainError(f"x0 = {x0!r} is outside the domain {m.domain} of '{m.name}'")


def picard_iterate(t: PiecewiseMap, cfg: RunConfig) -> IterationTrace:
    """x_{n+1} = T(x_n); raises DomainError if an iterate leaves the domain."""
    _require_start(t, cfg.x0)
    tb = _TraceBuilder(Scheme.PICARD, cfg, seed=cfg.x0)
    x = cfg.x0
    for n in range(cfg.max_iter):
        x_next = t(x)
        if not t.domain.contains(x_next):
            raise DomainError(f"Picard iterate x_{n + 1} = {x_next!r} left the domain {t.domain}")
        status = tb.record(x_next, x_next)
        x = x_next
        if status:
            return tb.finish(status)
    return tb.finish(TraceStatus.max_iterations(cfg.max_iter))


def coincidence_iterate(
    t: PiecewiseMap, f: PiecewiseMap, g: PiecewiseMap, cfg: RunConfig
) -> IterationTrace:
    """y_n = T(x_n), then f(x_{n+1}) = y_n on even n and g(x_{n+1}) = y_n on odd n."""
    _require_start(t, cfg.x0)
    tb = _TraceBuilder(Scheme.COINCIDENCE, cfg, seed=g(cfg.x0))
    x = cfg.x0
    for n in range(cfg.max_iter):
        h, parity = (f, EVEN) if n % 2 == 0 else (g, ODD)
        y = t(x)
        try:
            x_next = invert_map(h, y, anchor=x, tol=cfg.solve_tol)
        except NoPreimage as err:
            return tb.finish(TraceStatus.solve_failed(n, "solve", str(err)))
        status = tb.record(x_next, y, parity=parity)
        x = x_next
        if status:
            return tb.finish(status)
    return tb.finish(TraceStatus.max_iterations(cfg.max_iter))


def _mann(
    scheme: Scheme,
    t: PiecewiseMap,
    pick: Callable[[int], tuple[PiecewiseMap, Optional[str]]],
    seed: float,
    alpha: StepSchedule,
    cfg: RunConfig,
) -> IterationTrace:
    _require_start(t, cfg.x0)
    tb = _TraceBuilder(scheme, cfg, seed=seed)
    if not alpha.divergent_sum:
        tb.warn(ALPHA_WARNING)
    x = cfg.x0
    for n in range(cfg.max_iter):
        h, parity = pick(n)
        a = alpha.at(n)
        r = (1.0 - a) * h(x) + a * t(x)
        try:
            x_next = invert_map(h, r, anchor=x, tol=cfg.solve_tol)
        except NoPreimage as err:
            return tb.finish(TraceStatus.solve_failed(n, "solve", str(err)))
        status = tb.record(x_next, r, parity=parity, alpha=a)
        x = x_next
        if status:
            return tb.finish(status)
    return tb.finish(TraceStatus.max_iterations(cfg.max_iter))


def mann_iterate(
    t: PiecewiseMap,
    f: PiecewiseMap,
    g: PiecewiseMap,
    alpha: StepSchedule,
    cfg: RunConfig,
) -> IterationTrace:
    """Modified Mann scheme for three maps: f on even steps, g on odd steps."""

    def pick(n: int):
        return (f, EVEN) if n % 2 == 0 else (g, ODD)

    return _mann(Scheme.MANN, t, pick, g(cfg.x0), alpha, cfg)


def mann_iterate_pair(
    t: PiecewiseMap, f: PiecewiseMap, alpha: StepSchedule, cfg: RunConfig
) -> IterationTrace:
    """Modified Mann scheme for two maps: f(x_{n+1}) = (1 - a_n) f(x_n) + a_n T(x_n)."""
    return _mann(Scheme.MANN_PAIR, t, lambda n: (f, None), f(cfg.x0), alpha, cfg)


def _ishikawa(
    scheme: Scheme,
    t: PiecewiseMap,
    pick: Callable[[int], tuple[PiecewiseMap, Optional[str]]],
    seed: float,
    alpha: StepSchedule,
    beta: StepSchedule,
    cfg: RunConfig,
) -> IterationTrace:
    _require_start(t, cfg.x0)
    tb = _TraceBuilder(scheme, cfg, seed=seed)
    if not product_divergent(alpha, beta):
        tb.warn(PRODUCT_WARNING)
    x = cfg.x0
    for n in range(cfg.max_iter):
        h, parity = pick(n)
        a, b = alpha.at(n), beta.at(n)
        hx = h(x)
        y = (1.0 - b) * hx + b * t(x)
        try:
            v = invert_map(h, y, anchor=x, tol=cfg.solve_tol)
        except NoPreimage as err:
            return tb.finish(TraceStatus.solve_failed(n, "inner", str(err)))
        z = (1.0 - a) * hx + a * t(v)
        try:
            x_next = invert_map(h, z, anchor=x, tol=cfg.solve_tol)
        except NoPreimage as err:
            return tb.finish(TraceStatus.solve_failed(n, "outer", str(err)))
        status = tb.record(x_next, y, z=z, v=v, parity=parity, alpha=a, beta=b)
        x = x_next
        if status:
            return tb.finish(status)
    return tb.finish(TraceStatus.max_iterations(cfg.max_iter))


def ishikawa_iterate(
    t: PiecewiseMap,
    f: PiecewiseMap,
    g: PiecewiseMap,
    alpha: StepSchedule,
    beta: StepSchedule,
    cfg: RunConfig,
) -> IterationTrace:
    """Modified Ishikawa scheme for three maps.

    Inner: h(v_n) = (1 - b_n) h(x_n) + b_n T(x_n); outer: h(x_{n+1}) = (1 - a_n) h(x_n)
    + a_n T(v_n), with h = f on even steps and h = g on odd steps.
    """

    def pick(n: int):
        return (f, EVEN) if n % 2 == 0 else (g, ODD)

    return _ishikawa(Scheme.ISHIKAWA, t, pick, g(cfg.x0), alpha, beta, cfg)


def ishikawa_iterate_pair(
    t: PiecewiseMap,
    f: PiecewiseMap,
    alpha: StepSchedule,
    beta: StepSchedule,
    cfg: RunConfig,
) -> IterationTrace:
    return _ishikawa(Scheme.ISHIKAWA_PAIR, t, lambda n: (f, None), f(cfg.x0), alpha, beta, cfg)
