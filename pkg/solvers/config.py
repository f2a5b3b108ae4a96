"""
Swarm Configuration
===================

Typed solver settings, loaded from the `solver` section of pcd_config.yaml
and from the variant overrides in variants.yaml.
"""
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from errors import ConfigError, UnknownVariant
from settings import load_variants
from solvers.inertia import AdaptiveInertia, ConstrictionInertia, FixedInertia


class SwarmConfig(BaseModel):
    """Input for the PCD solver."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    num_particles: int = Field(200, ge=2, description="K, particles per agent")
    c1: float = Field(1.49, gt=0, description="Cognitive constant")
    c2: float = Field(1.49, gt=0, description="Social constant")
    inertia: Literal["fixed", "adaptive", "constriction"] = "adaptive"
    w: float = Field(0.72, description="Inertia weight for the fixed schedule")
    w_max: float = 1.4
    w_min: float = 0.4
    adaptive_form: Literal["decreasing", "increasing"] = "decreasing"
    max_sc: int = Field(15, ge=1, description="Threshold for success count")
    max_fc: int = Field(5, ge=1, description="Threshold for failure count")
    t_max: int = Field(200, ge=1, description="Number of cycles")
    crossover: bool = False
    seed: int = Field(0, ge=0, lt=2**64)
    clamp: Literal[True] = True

    @model_validator(mode="after")
    def _check_constriction(self):
        if self.inertia == "constriction" and not self.c1 + self.c2 > 4:
            raise ValueError(f"constriction needs c1 + c2 > 4, got {self.c1 + self.c2}")
        return self

    @classmethod
    def from_mapping(cls, values) -> "SwarmConfig":
        try:
            return cls(**dict(values or {}))
        except ValidationError as e:
            raise ConfigError(f"invalid solver config: {_describe(e)}") from e

    def with_overrides(self, **overrides) -> "SwarmConfig":
        """Copy with overrides applied and re-validated."""
        return SwarmConfig.from_mapping({**self.model_dump(), **overrides})

    def schedule(self):
        if self.inertia == "fixed":
            return FixedInertia(self.w)
        if self.inertia == "constriction":
            return ConstrictionInertia(self.c1 + self.c2)
        return AdaptiveInertia(self.w_max, self.w_min, self.adaptive_form)


def _describe(error: ValidationError) -> str:
    return "; ".join(
        f"{'.'.join(str(p) for p in item['loc']) or 'config'}: {item['msg']}"
        for item in error.errors()
    )


def variant_names():
    return list(load_variants())


def variant_config(base: SwarmConfig, variant: str) -> SwarmConfig:
    variants = load_variants()
    if variant not in variants:
        raise UnknownVariant(f"unknown variant {variant!r}; known: {sorted(variants)}")
    return base.with_overrides(**variants[variant].get("overrides", {}))
