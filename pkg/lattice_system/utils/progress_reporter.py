"""
Relato de progresso por etapas, no log e (em terminal) com barras tqdm.
"""

import sys
import logging
from datetime import datetime
from typing import Iterable, List, Optional, TypeVar

from tqdm import tqdm

logger = logging.getLogger("LatticeSystem")

T = TypeVar("T")


class ProgressReporter:
    """
    Registra etapas nomeadas com o tempo decorrido.

    Args:
        title: Nome da execução (comando ou família)
        quiet_mode: Se True, nada é registrado além de DEBUG
        show_bars: Força (True) ou desliga (False) as barras; por padrão só em terminal
    """

    def __init__(self, title: str, quiet_mode: bool = False, show_bars: Optional[bool] = None):
        self.title = title
        self.quiet_mode = quiet_mode
        self.show_bars = sys.stderr.isatty() if show_bars is None else show_bars
        self.start_time: Optional[datetime] = None
        self.stages: List[str] = []

    def _elapsed(self) -> str:
        elapsed = datetime.now() - (self.start_time or datetime.now())
        minutes, seconds = divmod(elapsed.total_seconds(), 60)
        return f"{int(minutes)}:{int(seconds):02d}"

    def _log(self, message: str):
        if self.quiet_mode:
            logger.debug(message)
        else:
            logger.info(message)

    def start(self, initial_message: Optional[str] = None):
        self.start_time = datetime.now()
        self._log(initial_message or f"🚀 {self.title}: iniciando...")

    def update(self, stage: str, details: Optional[str] = None):
        """
        Registra uma etapa.

        Args:
            stage: Nome da etapa
            details: Detalhes adicionais (opcional)
        """
        if stage not in self.stages:
            self.stages.append(stage)
        message = f"⏳ {self.title}: {stage} ({self._elapsed()})"
        if details:
            message += f" - {details}"
        self._log(message)

    def track(self, items: Iterable[T], description: str, total: Optional[int] = None) -> Iterable[T]:
        """Envolve um iterável com tqdm quando as barras estão ativas."""
        if not self.show_bars or self.quiet_mode:
            return items
        return tqdm(items, desc=description, total=total, file=sys.stderr, leave=False)

    def complete(self, success: bool = True, final_message: Optional[str] = None):
        if not final_message:
            emoji = "✅" if success else "❌"
            outcome = "concluído" if success else "concluído com divergências"
            final_message = f"{emoji} {self.title}: {outcome} em {self._elapsed()}"
        self._log(final_message)
