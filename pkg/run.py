import os
import sys
import logging
import argparse
from typing import List, Optional

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from lattice_system.generators.report_generator import OUTPUT_FORMATS, ReportGenerator
from lattice_system.utils.error_messages import (
    EXIT_INTERRUPTED, EXIT_MISMATCH, EXIT_OK, get_error_response,
)
from lattice_system.utils.logging_config import setup_logging
from lattice_system.utils.progress_reporter import ProgressReporter

logger = logging.getLogger("LatticeSystem")

COMMANDS = ("instantiate", "table3", "table2d", "cusp", "incommensurable")


def build_parser() -> argparse.ArgumentParser:
    """Parser com um subcomando por verificação; as opções comuns valem para todos."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--family', type=str, help='Família do catálogo (G28, ..., G37, B4_34_DM)')
    common.add_argument('--p', type=int, help='Ordem p das reflexões')
    common.add_argument('--q', type=int, help='Segunda ordem q (apenas G28)')
    common.add_argument('--word-len', type=int, help='Comprimento máximo das palavras (padrão: 4 no corpo de traços, 6 nas cúspides)')
    common.add_argument('--precision', type=int, help='Precisão em bits do oráculo numérico e da exibição (padrão: 128)')
    common.add_argument('--output', choices=OUTPUT_FORMATS, default='text', help='Formato de saída')
    common.add_argument('--catalog', type=str, help='Catálogo JSON alternativo')
    common.add_argument('--jobs', type=int, help='Número de threads')
    common.add_argument('--no-cache', action='store_true', help='Não ler nem gravar o cache de veredictos')
    common.add_argument('--clear-cache', action='store_true', help='Apaga o cache de veredictos antes de executar')
    common.add_argument('--verbose', action='store_true', help='Log em nível DEBUG')

    parser = argparse.ArgumentParser(description='Verificação exata de reticulados CHL')
    subparsers = parser.add_subparsers(dest='command', required=True)
    inst = subparsers.add_parser('instantiate', parents=[common], help='Instancia uma família e verifica sua apresentação')
    inst.add_argument('--word', action='append', default=[], help='Palavra a classificar (ex.: "2 3 4"); pode repetir')
    subparsers.add_parser('table3', parents=[common], help='Recalcula a tabela de veredictos')
    subparsers.add_parser('table2d', parents=[common], help='Lista as famílias bidimensionais (apenas metadados)')
    subparsers.add_parser('cusp', parents=[common], help='Perfil de uma cúspide catalogada')
    pair = subparsers.add_parser('incommensurable', parents=[common], help='Compara duas cúspides')
    pair.add_argument('--a', required=True, help='Primeira cúspide (ex.: B4_34_DM)')
    pair.add_argument('--b', required=True, help='Segunda cúspide (ex.: G29:3)')
    return parser


def _params(args) -> Optional[List[int]]:
    if args.p is None:
        return None
    return [args.p] if args.q is None else [args.p, args.q]


def _subject(args) -> str:
    if args.command == 'incommensurable':
        return f"{args.a} x {args.b}"
    if args.family:
        params = _params(args)
        return f"{args.family} {params}" if params else args.family
    return args.command


def run_command(args, system, reporter: ProgressReporter) -> int:
    report = ReportGenerator(args.output)

    if args.command == 'instantiate':
        if not args.family:
            raise ValueError("argument --family é obrigatório para instantiate")
        reporter.update("instanciando", args.family)
        data, ok = system.instance_summary(args.family, _params(args), args.word)
        print(report.render_document(data, f"Instância {args.family}"), end="")
        return EXIT_OK if ok else EXIT_MISMATCH

    if args.command == 'table3':
        reporter.update("veredictos", f"{len(system.catalog.table3)} linhas")
        rows = system.table3_rows(reporter)
        print(report.render_table3(rows), end="")
        mismatch = any(
            r["arithmetic"] != r["expected_arithmetic"] or r["trace_field"] != r["expected_trace_field"]
            for r in rows
        )
        return EXIT_MISMATCH if mismatch else EXIT_OK

    if args.command == 'table2d':
        print(report.render_table2d(system.table2d_rows()), end="")
        return EXIT_OK

    if args.command == 'cusp':
        if not args.family:
            raise ValueError("argument --family é obrigatório para cusp")
        key = system.cusp_key(args.family, _params(args))
        reporter.update("perfil da cúspide", key)
        data, ok = system.cusp_summary(key)
        print(report.render_document(data, f"Cúspide {key}"), end="")
        return EXIT_OK if ok else EXIT_MISMATCH

    reporter.update("comparando cúspides", f"{args.a} x {args.b}")
    data = system.incommensurable_summary(args.a, args.b)
    print(report.render_document(data, f"{args.a} x {args.b}"), end="")
    # NOT_DISTINGUISHED não afirma comensurabilidade
    return EXIT_OK if data["verdict"] == "INCOMMENSURABLE" else EXIT_MISMATCH


def main(argv: Optional[List[str]] = None) -> int:
    """Função principal da CLI; devolve o código de saída."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    setup_logging(logging.DEBUG if args.verbose else logging.INFO)
    reporter = ProgressReporter(args.command, quiet_mode=args.output != 'text')
    reporter.start()

    try:
        from lattice_system.main import LatticeVerificationSystem

        word_len = args.word_len
        system = LatticeVerificationSystem(
            catalog_path=args.catalog,
            use_cache=not args.no_cache,
            word_len=word_len if args.command != 'cusp' else None,
            cusp_word_len=word_len if args.command in ('cusp', 'incommensurable') else None,
            precision_bits=args.precision,
            jobs=args.jobs,
        )
        if args.clear_cache:
            system.clear_cache()
        code = run_command(args, system, reporter)
    except KeyboardInterrupt:
        logger.warning("⚠️ Execução interrompida pelo usuário")
        return EXIT_INTERRUPTED
    except Exception as e:
        response = get_error_response(e, _subject(args))
        logger.error(response["admin_message"])
        print(response["user_message"], file=sys.stderr)
        reporter.complete(False)
        return response["exit_code"]

    reporter.complete(code == EXIT_OK)
    return code


if __name__ == "__main__":
    sys.exit(main())
