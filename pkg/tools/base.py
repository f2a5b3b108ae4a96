"""
Base Tool
=========

Every tool declares a pydantic args schema; `run` validates keyword arguments
against it before handing them to `_run`.
"""
from typing import Any, ClassVar, Type

from pydantic import BaseModel, ValidationError

from errors import ConfigError


class SchemaTool:
    name: ClassVar[str] = "Tool"
    description: ClassVar[str] = ""
    args_schema: ClassVar[Type[BaseModel]]

    def run(self, **kwargs: Any) -> Any:
        try:
            args = self.args_schema(**kwargs)
        except ValidationError as e:
            raise ConfigError(f"{self.name}: {e}") from e
        return self._run(args)

    def _run(self, args: BaseModel) -> Any:
        raise NotImplementedError
