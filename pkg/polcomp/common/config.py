from typing import Dict, Any, ClassVar
from pydantic_settings import BaseSettings


class Config(BaseSettings):
    """
    Единые настройки для всех модулей.

    Переменные окружения (префикс POLCOMP_):
    - POLCOMP_LOG_LEVEL: Уровень логирования
    - POLCOMP_OUTPUT_DIR: Каталог для CSV/JSON результатов
    - POLCOMP_DEFAULT_SEED: Сид по умолчанию для генераторов и экспериментов
    - POLCOMP_JOBS: Число параллельных процессов для репликаций
    """

    # Logging
    log_level: str = "INFO"
    log_format: str = "{time:YYYY-MM-DD HH:mm:ss} - {extra[component]} - {level} - {message}"

    # Outputs
    output_dir: str = "results"

    # Воспроизводимость
    default_seed: int = 20240601
    jobs: int = 1

    # Линейная система для занятости
    occupancy_config: ClassVar[Dict[str, Any]] = {
        "pivot_floor": 1e-14,
        "sum_tolerance": 1e-10,
        "oracle_tolerance": 1e-11,
        "stochastic_tolerance": 1e-12,
    }

    # Спектральный зазор
    spectral_config: ClassVar[Dict[str, Any]] = {
        "reversibility_tolerance": 1e-12,
        "top_eigenvalue_tolerance": 1e-8,
    }

    # Сэмплирование
    sampling_config: ClassVar[Dict[str, Any]] = {
        "burn_in_factor": 10.0,
    }

    # Оракул экстремумов TV на сфере Реньи
    oracle_config: ClassVar[Dict[str, Any]] = {
        "restarts": 16,
        "iterations": 300,
        "grid_resolution": 200,
        "grid_max_n": 4,
        "constraint_tolerance": 1e-6,
        "family_tolerance": 1e-10,
    }

    # Покрытие множества кандидатов
    compress_config: ClassVar[Dict[str, Any]] = {
        "enumerate_limit": 4096,
        "cover_tolerance": 1e-12,
    }

    # Эксперименты и CLI
    harness_config: ClassVar[Dict[str, Any]] = {
        "replicates": 200,
        "max_per_pair": 100_000,
        "num_states": 5,
        "num_actions": 3,
        "branching": 3,
        "gamma": 0.9,
        "record_timings": False,
    }

    model_config = {
        "env_prefix": "POLCOMP_",
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "extra": "ignore"
    }


# Глобальный экземпляр настроек
config = Config()
