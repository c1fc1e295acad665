# src/core/utils/serialization.py

import json
import logging
from pathlib import Path
from typing import Any, Type, TypeVar, Union

from pydantic import BaseModel

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)


def to_json(data: Any) -> str:
    """Key-sorted JSON, newline-terminated, so equal documents are byte-identical."""
    if isinstance(data, BaseModel):
        data = data.model_dump(mode="json")
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def write_json(path: Union[str, Path], data: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_json(data), encoding="utf-8")
    logger.debug(f"Wrote {path}.")
    return path


def read_json(path: Union[str, Path]) -> Any:
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def load_model(path: Union[str, Path], model: Type[ModelT]) -> ModelT:
    return model.model_validate(read_json(path))
