"""Runtime scenario: validated config turned into maps, psi and grid."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

from fglab.core.errors import FglabError
from fglab.core.interval import Domain, GridSpec
from fglab.core.maps import PiecewiseMap
from fglab.core.psi import PsiFunction

from .config import (
    ApproxSpec,
    CheckSpec,
    ExpectationSpec,
    IterationSpec,
    LabSettings,
    ScenarioConfig,
)
from .manager import ConfigError


@dataclass
class Scenario:
    name: str
    description: str
    domain: Domain
    grid: GridSpec
    psi: PsiFunction
    maps: Dict[str, PiecewiseMap]
    settings: LabSettings
    checks: List[CheckSpec] = field(default_factory=list)
    iterations: List[IterationSpec] = field(default_factory=list)
    approximations: List[ApproxSpec] = field(default_factory=list)
    expectations: List[ExpectationSpec] = field(default_factory=list)
    source: Optional[Path] = None

    def map(self, name: str) -> PiecewiseMap:
        try:
            return self.maps[name]
        except KeyError:
            raise ConfigError(f"scenario '{self.name}' has no map '{name}'") from None

    def item_names(self) -> List[str]:
        return [i.name for i in (*self.checks, *self.iterations, *self.approximations)]

    @property
    def is_empty(self) -> bool:
        return not (self.checks or self.iterations or self.approximations)


def build_scenario(
    config: ScenarioConfig,
    settings: Optional[LabSettings] = None,
    source: Optional[Path] = None,
) -> Scenario:
    settings = settings or LabSettings()
    try:
        domain = Domain.of(*(iv.build() for iv in config.domain))
        maps: Dict[str, PiecewiseMap] = {}
        for spec in config.maps:
            m = spec.build(domain)
            if m.domain != domain:
                raise ConfigError(
                    f"map '{m.name}' is defined on {m.domain}, scenario domain is {domain}"
                )
            maps[m.name] = m
        psi = config.psi.build()
        grid = config.grid.build(grid_n=settings.grid_n, inset=settings.inset)
    except ConfigError:
        raise
    except (FglabError, ValueError) as err:
        raise ConfigError(f"scenario '{config.name}': {err}") from err
    return Scenario(
        name=config.name,
        description=config.description,
        domain=domain,
        grid=grid,
        psi=psi,
        maps=maps,
        settings=settings,
        checks=list(config.checks),
        iterations=list(config.iterations),
        approximations=list(config.approximations),
        expectations=list(config.expectations),
        source=source,
    )
