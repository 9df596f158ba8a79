"""
Sistema de verificação exata de reticulados CHL.

Aritmética ciclotômica exata, grupos gerados por reflexões complexas,
veredictos de aritmeticidade e perfis de cúspides.
"""

__version__ = "1.1.0"

__all__ = ["__version__"]
