"""Run configuration: truncation level, enumeration guardrails, sampling seed."""

from dataclasses import dataclass, field

from .errors import InputError


@dataclass(frozen=True)
class Guardrails:
    """Size bounds that keep exhaustive constructions finite and fast.

    Enumeration of functors grows exponentially, so every operation that
    enumerates refuses inputs beyond these bounds with a clear error instead
    of hanging.
    """

    max_base_objects: int = 16
    max_fiber_morphisms: int = 8
    max_product_objects: int = 4096
    max_enum_morphisms: int = 64

    def check(self):
        if min(self.max_base_objects, self.max_fiber_morphisms,
               self.max_product_objects, self.max_enum_morphisms) <= 0:
            raise InputError("guardrail bounds must be positive")


DEFAULT_GUARDRAILS = Guardrails()

SCHEMA_VERSION = "clubcat/1"


@dataclass(frozen=True)
class RunConfig:
    trunc: int = 3
    guardrails: Guardrails = field(default_factory=Guardrails)
    seed: int = 0
    output: str | None = None
    schema: str = SCHEMA_VERSION

    def check(self):
        if self.trunc <= 0:
            raise InputError("trunc must be positive")
        self.guardrails.check()
        if self.schema != SCHEMA_VERSION:
            raise InputError(f"unsupported schema version {self.schema!r}")
