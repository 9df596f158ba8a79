"""
Sistema centralizado de mensagens de erro da verificação de reticulados.

Este módulo fornece mensagens padronizadas para o usuário da linha de comando,
com versões técnicas (para logs) quando necessário, e o mapeamento de
categorias de erro para códigos de saída.
"""

from datetime import datetime
from enum import Enum
from typing import Any, Dict, Optional


class ErrorCategory(Enum):
    """Categorias de erro para classificação."""
    CATALOG = "catalog"              # Catálogo ausente, malformado ou família desconhecida
    ARITHMETIC = "arithmetic"        # Aritmética exata (divisão por zero, corpos incompatíveis)
    GEOMETRY = "geometry"            # Forma, reflexão ou cúspide com formato inválido
    USAGE = "usage"                  # Argumentos inválidos na linha de comando
    CONFIGURATION = "config"         # Configuração ausente ou inválida
    SYSTEM = "system"                # Erros internos do sistema


# Códigos de saída da linha de comando
EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3
EXIT_INTERRUPTED = 130


class ErrorMessages:
    """Gerador de mensagens de erro padronizadas."""

    CATEGORY_NAMES = {
        ErrorCategory.CATALOG: "Erro de Catálogo",
        ErrorCategory.ARITHMETIC: "Erro Aritmético",
        ErrorCategory.GEOMETRY: "Erro Geométrico",
        ErrorCategory.USAGE: "Uso Inválido",
        ErrorCategory.CONFIGURATION: "Configuração Inválida",
        ErrorCategory.SYSTEM: "Erro de Sistema",
    }

    @staticmethod
    def _format_timestamp() -> str:
        """Retorna timestamp formatado."""
        return datetime.now().strftime("%d/%m/%Y às %H:%M")

    @classmethod
    def get_user_message(
        cls,
        category: ErrorCategory,
        subject: str,
        details: Optional[str] = None,
    ) -> str:
        """
        Gera mensagem amigável para o usuário da CLI.

        Args:
            category: Categoria do erro
            subject: O que estava sendo verificado (família, comando...)
            details: Detalhes adicionais (opcional)

        Returns:
            Mensagem formatada
        """
        builders = {
            ErrorCategory.CATALOG: cls._catalog_error_user,
            ErrorCategory.ARITHMETIC: cls._arithmetic_error_user,
            ErrorCategory.GEOMETRY: cls._geometry_error_user,
            ErrorCategory.USAGE: cls._usage_error_user,
            ErrorCategory.CONFIGURATION: cls._config_error_user,
        }
        builder = builders.get(category, cls._system_error_user)
        return builder(subject, details)

    @classmethod
    def get_admin_message(
        cls,
        category: ErrorCategory,
        subject: str,
        error_details: Optional[str] = None,
        stack_trace: Optional[str] = None,
    ) -> str:
        """
        Gera mensagem técnica para o log.

        Args:
            category: Categoria do erro
            subject: O que estava sendo verificado
            error_details: Detalhes técnicos do erro
            stack_trace: Stack trace (opcional)

        Returns:
            Mensagem formatada
        """
        message = (
            f"🚨 ERRO NA VERIFICAÇÃO\n"
            f"📋 Objeto: {subject}\n"
            f"⏰ Horário: {cls._format_timestamp()}\n"
            f"🔴 Tipo: {cls.CATEGORY_NAMES.get(category, 'Desconhecido')}\n"
        )
        if error_details:
            details_truncated = error_details[:500] + "..." if len(error_details) > 500 else error_details
            message += f"📝 Detalhes: {details_truncated}\n"
        if stack_trace:
            trace_truncated = stack_trace[:300] + "..." if len(stack_trace) > 300 else stack_trace
            message += f"🔍 Trace: {trace_truncated}\n"
        message += f"📁 Logs: verificar logs/lattice_system_{datetime.now().strftime('%Y-%m-%d')}.log"
        return message

    # ==================== MENSAGENS PARA USUÁRIOS ====================

    @classmethod
    def _catalog_error_user(cls, subject: str, details: Optional[str]) -> str:
        message = f"❌ {subject}: o catálogo não permite esta operação."
        if details:
            message += f"\n📝 {details}"
        message += "\n💡 Confira --family/--p/--q ou o arquivo passado em --catalog."
        return message

    @classmethod
    def _arithmetic_error_user(cls, subject: str, details: Optional[str]) -> str:
        message = f"❌ {subject}: falha na aritmética exata."
        if details:
            message += f"\n📝 {details}"
        return message

    @classmethod
    def _geometry_error_user(cls, subject: str, details: Optional[str]) -> str:
        message = f"❌ {subject}: os dados geométricos não têm o formato esperado."
        if details:
            message += f"\n📝 {details}"
        return message

    @classmethod
    def _usage_error_user(cls, subject: str, details: Optional[str]) -> str:
        message = f"⚠️ {subject}: argumentos inválidos."
        if details:
            message += f"\n📝 {details}"
        message += "\n💡 Use --help para ver as opções."
        return message

    @classmethod
    def _config_error_user(cls, subject: str, details: Optional[str]) -> str:
        message = f"⚠️ {subject}: configuração inválida."
        if details:
            message += f"\n📝 {details}"
        message += "\n💡 Verifique as variáveis CHL_* no arquivo .env."
        return message

    @classmethod
    def _system_error_user(cls, subject: str, details: Optional[str]) -> str:
        message = f"❌ {subject}: erro interno inesperado."
        if details:
            message += f"\n📝 {details}"
        return message


def classify_error(exception: Exception, context: Optional[str] = None) -> ErrorCategory:
    """
    Classifica uma exceção em uma categoria de erro.

    Args:
        exception: A exceção a ser classificada
        context: Contexto adicional (opcional)

    Returns:
        Categoria do erro
    """
    category = getattr(exception, "category", None)
    if isinstance(category, ErrorCategory):
        return category

    error_str = str(exception).lower()
    error_type = type(exception).__name__.lower()
    context_str = (context or "").lower()

    if isinstance(exception, (FileNotFoundError, KeyError)) or "catalog" in error_str or "catalog" in context_str:
        return ErrorCategory.CATALOG
    if isinstance(exception, ZeroDivisionError) or any(k in error_type for k in ("arith", "division")):
        return ErrorCategory.ARITHMETIC
    if any(k in error_str for k in ("environment", ".env", "config")):
        return ErrorCategory.CONFIGURATION
    if isinstance(exception, (ValueError, TypeError)) and "argument" in error_str:
        return ErrorCategory.USAGE
    return ErrorCategory.SYSTEM


def exit_code_for(category: ErrorCategory) -> int:
    """Código de saída da CLI para uma categoria de erro."""
    if category == ErrorCategory.SYSTEM:
        return EXIT_INTERNAL
    return EXIT_USAGE


def get_error_response(exception: Exception, subject: str) -> Dict[str, Any]:
    """
    Gera a resposta completa para um erro: mensagem ao usuário, mensagem
    técnica e código de saída.

    Args:
        exception: A exceção ocorrida
        subject: O que estava sendo verificado

    Returns:
        Dict com 'category', 'user_message', 'admin_message' e 'exit_code'
    """
    category = classify_error(exception, subject)
    return {
        "category": category,
        "user_message": ErrorMessages.get_user_message(category, subject, str(exception)),
        "admin_message": ErrorMessages.get_admin_message(category, subject, f"{type(exception).__name__}: {exception}"),
        "exit_code": exit_code_for(category),
    }
