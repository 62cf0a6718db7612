"""
Registry for discovering initial-data builders
"""

from typing import Optional, Type

from gpsav.core.grid import Field, Grid
from gpsav.exceptions import ConfigError
from gpsav.initial.base import InitialCondition, InitialSpec


class InitialRegistry:
    """
    Registry of initial-data builders keyed by ``name``.

    Usage:
        registry = get_registry()
        psi0 = registry.build(InitialSpec(kind="gaussian"), grid)
    """

    def __init__(self):
        self._builders: dict[str, Type[InitialCondition]] = {}
        self._instances: dict[str, InitialCondition] = {}

    def register(self, builder_class: Type[InitialCondition]) -> None:
        self._builders[builder_class.name] = builder_class

    def unregister(self, name: str) -> None:
        self._builders.pop(name, None)
        self._instances.pop(name, None)

    def get(self, name: str) -> Optional[InitialCondition]:
        if name not in self._builders:
            return None
        if name not in self._instances:
            self._instances[name] = self._builders[name]()
        return self._instances[name]

    def build(self, spec: InitialSpec, grid: Grid) -> Field:
        """
        Build psi_0 with the builder named by ``spec.kind``.

        Raises:
            ConfigError: If no builder has that name
        """
        builder = self.get(spec.kind)
        if builder is None:
            raise ConfigError(
                f"unknown initial.kind {spec.kind!r}; available: {', '.join(self.names)}"
            )
        return builder.build(spec, grid)

    def list_builders(self) -> list[dict]:
        return [
            {"name": name, "description": cls.description}
            for name, cls in self._builders.items()
        ]

    @property
    def names(self) -> list[str]:
        return list(self._builders.keys())


_registry: Optional[InitialRegistry] = None


def get_registry() -> InitialRegistry:
    """Get the global registry, creating it if needed"""
    global _registry
    if _registry is None:
        _registry = InitialRegistry()
        _load_builtin_builders(_registry)
    return _registry


def _load_builtin_builders(registry: InitialRegistry) -> None:
    from gpsav.initial.from_file import FromFileInitial
    from gpsav.initial.gaussian import GaussianInitial
    from gpsav.initial.plane_wave import PlaneWaveInitial

    registry.register(GaussianInitial)
    registry.register(PlaneWaveInitial)
    registry.register(FromFileInitial)
