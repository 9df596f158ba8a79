"""
Geradores de saída: serialização exata e relatórios em texto, JSON ou CSV.
"""

from .report_generator import ReportGenerator
from .serializers import dumps, format_elem, parse_elem

__all__ = ['ReportGenerator', 'dumps', 'format_elem', 'parse_elem']
