"""
Configuração de logging da CLI e da suíte de testes.

Um arquivo diário em LOGS_DIR recebe tudo; o console escreve em stderr,
deixando stdout livre para os documentos json/csv.
"""

import logging
import os
import sys
from datetime import datetime
from typing import Optional

LOGGER_NAME = "LatticeSystem"
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'

# Silenciados fora do modo verbose
NOISY_LOGGERS = ("lattice_system.config", "sympy", "hypothesis")


def _log_file(log_dir: Optional[str]) -> str:
    directory = log_dir or os.environ.get("LOGS_DIR") or os.path.join(os.getcwd(), "logs")
    os.makedirs(directory, exist_ok=True)
    return os.path.join(directory, f"lattice_system_{datetime.now():%Y-%m-%d}.log")


def _force_utf8_console():
    if sys.platform != 'win32':
        return
    for stream in (sys.stdout, sys.stderr):
        reconfigure = getattr(stream, "reconfigure", None)
        if reconfigure is not None:
            reconfigure(encoding='utf-8')


def setup_logging(log_level=logging.INFO, verbose_init=False, log_dir: Optional[str] = None) -> logging.Logger:
    """
    Substitui os handlers do logger raiz por arquivo (UTF-8) e console.

    Args:
        log_level: Nível do logger raiz
        verbose_init: Se False, reduz para WARNING os loggers de NOISY_LOGGERS
        log_dir: Diretório dos arquivos de log (padrão: LOGS_DIR ou ./logs)

    Returns:
        O logger "LatticeSystem"
    """
    log_filename = _log_file(log_dir)
    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)
    _force_utf8_console()

    handlers = [
        logging.FileHandler(log_filename, encoding='utf-8'),
        logging.StreamHandler(stream=sys.stderr),
    ]

    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)
    for old in list(root_logger.handlers):
        root_logger.removeHandler(old)
    for handler in handlers:
        handler.setFormatter(formatter)
        root_logger.addHandler(handler)

    if not verbose_init:
        for name in NOISY_LOGGERS:
            logging.getLogger(name).setLevel(logging.WARNING)

    logger = logging.getLogger(LOGGER_NAME)
    logger.debug(f"📝 Logging configurado em {log_filename}")
    return logger


def get_logger() -> logging.Logger:
    """Atalho para setup_logging() com os padrões."""
    return setup_logging()
