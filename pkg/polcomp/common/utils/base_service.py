"""
Базовый класс для команд CLI с общей логикой логирования, статистики и обработки ошибок
"""

import argparse
from typing import Optional, Dict, Any, List

from loguru import logger

from polcomp import __version__
from polcomp.common.errors import PolicyCompressionError
from polcomp.common.models import RunSummary, ErrorEntry

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_AUDIT_FAILURE = 2


class BaseService:
    """Базовый класс для команд"""

    def __init__(
        self,
        service_name: str,
        version: str = __version__,
        description: str = ""
    ):
        self.service_name = service_name
        self.version = version
        self.description = description
        self.logger = logger.bind(component=self.service_name)

        # Статистика
        self.stats: Dict[str, Any] = {
            "runs": 0,
            "failed_runs": 0,
        }

    def add_arguments(self, parser: argparse.ArgumentParser):
        """Метод для переопределения в дочерних классах"""
        pass

    def run(self, args: argparse.Namespace) -> int:
        """Метод для переопределения в дочерних классах"""
        raise NotImplementedError

    def execute(self, args: argparse.Namespace) -> int:
        """Запуск команды с общей обработкой ошибок"""
        self.stats["runs"] += 1
        self.logger.info(f"Starting {self.service_name}...")
        try:
            code = self.run(args)
        except (PolicyCompressionError, ValueError, FileNotFoundError) as e:
            self.stats["failed_runs"] += 1
            self.handle_error_response(e, context={"command": self.service_name})
            # Численные отказы (ArithmeticError/RuntimeError) - как проваленный аудит
            if isinstance(e, PolicyCompressionError) and isinstance(e, (ArithmeticError, RuntimeError)):
                return EXIT_AUDIT_FAILURE
            return EXIT_USAGE
        self.logger.info(f"{self.service_name} finished with exit code {code}")
        return code

    def create_summary(
        self,
        status: str,
        additional_stats: Optional[Dict[str, Any]] = None,
        flags: Optional[List[str]] = None
    ) -> RunSummary:
        """Создание стандартного итогового отчета"""
        return RunSummary(
            status=status,
            service=self.service_name,
            version=self.version,
            stats={**self.stats, **(additional_stats or {})},
            flags=list(flags or [])
        )

    def handle_error_response(
        self,
        error: Exception,
        context: Optional[Dict[str, Any]] = None
    ) -> ErrorEntry:
        """Стандартная обработка ошибок"""
        entry = ErrorEntry(
            service=self.service_name,
            error_type=type(error).__name__,
            error_message=str(error),
            context=context
        )
        self.logger.error(f"{entry.error_type}: {entry.error_message}")
        return entry
