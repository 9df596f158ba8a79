"""
Módulo de configuração para o sistema de verificação de reticulados.
"""

import hashlib
import logging
import os
from typing import Any, Optional

from dotenv import load_dotenv

logger = logging.getLogger("LatticeSystem")

DEFAULT_CATALOG_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "catalog", "data", "catalog.json")


class ConfigManager:
    """Gerencia configurações do sistema de verificação."""

    def __init__(self, env_path: str = ".env"):
        """
        Inicializa o gerenciador de configuração.

        Args:
            env_path: Caminho para o arquivo .env
        """
        # Carregar variáveis de ambiente
        self._load_env(env_path)

        # Diretório para cache
        self.cache_dir = self.get_env_var("CACHE_DIR", "cache")
        os.makedirs(self.cache_dir, exist_ok=True)

        # Diretório para logs
        self.logs_dir = self.get_env_var("LOGS_DIR", "logs")
        os.makedirs(self.logs_dir, exist_ok=True)

        # === Catálogo ===
        self.catalog_path = self.get_env_var("CHL_CATALOG_PATH", DEFAULT_CATALOG_PATH)

        # === Enumeração de palavras ===
        self.word_len = int(self.get_env_var("CHL_WORD_LEN", "4"))
        self.cusp_word_len = int(self.get_env_var("CHL_CUSP_WORD_LEN", "6"))

        # === Precisão numérica (oráculo e exibição) ===
        self.precision_bits = int(self.get_env_var("CHL_PRECISION_BITS", "128"))

        # === Paralelismo ===
        self.jobs = int(self.get_env_var("CHL_JOBS", "4"))

        # === Limites de grupos finitos ===
        self.max_order = int(self.get_env_var("CHL_MAX_ORDER", "10000"))
        self.finite_order_bound = int(self.get_env_var("CHL_FINITE_ORDER_BOUND", "2520"))

        # === Cache de veredictos ===
        self.cache_max_age_hours = int(self.get_env_var("CHL_CACHE_MAX_AGE_HOURS", "168"))

        self._validate()

    def _load_env(self, env_path: str):
        """
        Carrega variáveis de ambiente do arquivo .env.

        Args:
            env_path: Caminho para o arquivo .env
        """
        if os.path.exists(env_path):
            load_dotenv(env_path)
            logger.debug(f"Variáveis de ambiente carregadas de {env_path}")
        else:
            logger.warning(f"Arquivo .env não encontrado em {env_path}; usando valores padrão")

    def _validate(self):
        """Valida os valores numéricos lidos do ambiente."""
        if self.word_len < 1 or self.cusp_word_len < 1:
            raise ValueError("CHL_WORD_LEN e CHL_CUSP_WORD_LEN devem ser >= 1 (config)")
        if self.precision_bits < 32:
            raise ValueError("CHL_PRECISION_BITS deve ser >= 32 (config)")
        if self.jobs < 1:
            raise ValueError("CHL_JOBS deve ser >= 1 (config)")

    def get_env_var(self, var_name: str, default: Any = None, required: bool = False) -> Any:
        """
        Obtém variável de ambiente com valor padrão opcional.

        Args:
            var_name: Nome da variável
            default: Valor padrão se não encontrada
            required: Se a variável é obrigatória

        Returns:
            Valor da variável ou valor padrão
        """
        value = os.environ.get(var_name)
        if value is None or value == "":
            if required:
                logger.warning(f"Variável de ambiente obrigatória não encontrada: {var_name}")
            else:
                logger.debug(f"Variável {var_name} não definida; usando padrão {default!r}")
            return default
        return value

    def catalog_digest(self, catalog_path: Optional[str] = None) -> str:
        """SHA-256 do arquivo de catálogo, usado como parte da chave do cache."""
        path = catalog_path or self.catalog_path
        with open(path, "rb") as f:
            return hashlib.sha256(f.read()).hexdigest()
