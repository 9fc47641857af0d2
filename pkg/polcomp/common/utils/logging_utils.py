import sys
from typing import Optional

from loguru import logger

from ..config import config


def setup_logging(component: str, level: Optional[str] = None):
    """Настройка логирования loguru для компонента"""

    # Уровень из аргумента или из настроек
    log_level = (level or config.log_level).upper()

    # Удаляем существующие обработчики и задаем компонент по умолчанию
    logger.remove()
    logger.configure(extra={"component": "polcomp"})

    # Логи идут в stderr, stdout остается для результатов
    logger.add(sys.stderr, level=log_level, format=config.log_format)

    return logger.bind(component=component)


def log_service_event(component: str, event: str, message: str, level: str = "INFO"):
    """Логирование событий компонента"""
    logger.bind(component=component).log(level.upper(), f"[{event}] {message}")
