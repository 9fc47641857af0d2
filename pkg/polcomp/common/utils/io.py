"""
Чтение и запись файлов: MDP и политики в JSON, отчеты в JSON, таблицы в CSV.

Формат MDP: {"num_states", "num_actions", "gamma", "mu", "P", "reward", "r_max"},
индексация P[s][a][s']. Формат политики: {"pi": [[...]]}.
"""

import json
from pathlib import Path
from typing import Any, Dict, Union

import pandas as pd
from loguru import logger
from pydantic import BaseModel

from polcomp.common.models import Cmp, TabularPolicy

PathLike = Union[str, Path]


def load_cmp(path: PathLike) -> Cmp:
    """Загрузка CMP из JSON файла"""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    logger.debug(f"Loaded MDP from {path}")
    return Cmp.model_validate(data)


def save_cmp(cmp: Cmp, path: PathLike) -> Path:
    data = cmp.model_dump(by_alias=True, exclude_none=True)
    return write_json(data, path)


def load_policy(path: PathLike) -> TabularPolicy:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return TabularPolicy.model_validate(data)


def save_policy(policy: TabularPolicy, path: PathLike) -> Path:
    return write_json(policy.model_dump(), path)


def write_json(payload: Union[BaseModel, Dict[str, Any]], path: PathLike) -> Path:
    """Детерминированная запись JSON (сортированные ключи)"""
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return target


def write_csv(frame: pd.DataFrame, path: PathLike) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(target, index=False, float_format="%.17g")
    return target
