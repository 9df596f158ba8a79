"""
Cache de veredictos - thread-safe, em JSON.

Cada linha da tabela de veredictos é guardada sob uma chave que inclui o SHA-256 do
catálogo, de modo que um catálogo editado nunca reaproveita veredictos antigos.
"""

import os
import json
import logging
import threading
import pandas as pd
from datetime import datetime
from typing import Any, Optional, Sequence

logger = logging.getLogger("LatticeSystem")


class SimpleCacheManager:
    """Gerenciador de cache thread-safe para veredictos calculados."""

    def __init__(self, base_cache_dir="cache"):
        """
        Inicializa o gerenciador de cache.

        Args:
            base_cache_dir: Diretório base para os arquivos de cache
        """
        self.base_cache_dir = base_cache_dir
        self._lock = threading.RLock()

        os.makedirs(base_cache_dir, exist_ok=True)
        self.verdicts_dir = os.path.join(base_cache_dir, "verdicts")
        os.makedirs(self.verdicts_dir, exist_ok=True)

        logger.debug(f"SimpleCacheManager inicializado em {base_cache_dir}")

    def _get_file_path(self, filename: str) -> str:
        return os.path.join(self.verdicts_dir, f"{filename}.json")

    @staticmethod
    def verdict_key(catalog_digest: str, family: str, params: Sequence[int], word_len: int) -> str:
        """Nome do arquivo de cache de uma linha de veredicto."""
        joined = "_".join(str(p) for p in params)
        return f"{catalog_digest[:16]}_{family}_{joined}_w{word_len}"

    # === MÉTODOS GENÉRICOS ===

    def save_data(self, filename: str, data: Any) -> bool:
        """
        Salva dados JSON no cache.

        Args:
            filename: Nome do arquivo (sem extensão)
            data: Dados serializáveis em JSON

        Returns:
            True se salvo com sucesso, False caso contrário
        """
        with self._lock:
            try:
                file_path = self._get_file_path(filename)
                with open(file_path, 'w', encoding='utf-8') as f:
                    json.dump(data, f, indent=2, ensure_ascii=False, sort_keys=True)
                logger.debug(f"Veredicto salvo em {file_path}")
                return True
            except (OSError, TypeError, ValueError) as e:
                logger.error(f"Erro ao salvar dados em {filename}: {e}")
                return False

    def load_data(self, filename: str) -> Optional[Any]:
        """
        Carrega dados do cache.

        Returns:
            Dados carregados ou None se não existir ou ocorrer erro
        """
        with self._lock:
            file_path = self._get_file_path(filename)
            if not os.path.exists(file_path):
                logger.debug(f"Cache não encontrado para {filename}")
                return None
            try:
                with open(file_path, 'r', encoding='utf-8') as f:
                    return json.load(f)
            except (OSError, json.JSONDecodeError) as e:
                logger.error(f"Erro ao carregar dados de {filename}: {e}")
                return None

    def is_cache_valid(self, filename: str, max_age_hours: int = 168) -> bool:
        """
        Verifica se o cache existe e não é mais antigo que max_age_hours.
        """
        with self._lock:
            file_path = self._get_file_path(filename)
            if not os.path.exists(file_path):
                return False
            file_age_hours = (datetime.now().timestamp() - os.path.getmtime(file_path)) / 3600
            return file_age_hours < max_age_hours

    # === MÉTODOS DE UTILIDADE ===

    def clear_cache(self) -> bool:
        """Remove todos os veredictos guardados."""
        with self._lock:
            try:
                for file in os.listdir(self.verdicts_dir):
                    if file.endswith('.json'):
                        os.remove(os.path.join(self.verdicts_dir, file))
                logger.info("🧹 Cache de veredictos limpo")
                return True
            except OSError as e:
                logger.error(f"Erro ao limpar cache: {e}")
                return False

    def get_cache_status(self) -> pd.DataFrame:
        """
        Status do cache.

        Returns:
            DataFrame com nome, data de modificação, idade e tamanho de cada arquivo
        """
        with self._lock:
            status_data = []
            for file in sorted(os.listdir(self.verdicts_dir)):
                file_path = os.path.join(self.verdicts_dir, file)
                if not (file.endswith('.json') and os.path.isfile(file_path)):
                    continue
                mtime = os.path.getmtime(file_path)
                status_data.append({
                    'file_name': file,
                    'last_modified': datetime.fromtimestamp(mtime),
                    'age_hours': (datetime.now().timestamp() - mtime) / 3600,
                    'size_kb': os.path.getsize(file_path) / 1024,
                })
            return pd.DataFrame(status_data, columns=['file_name', 'last_modified', 'age_hours', 'size_kb'])
