"""
Punto de entrada de la CLI de acidfront.

Uso:
    python main.py simulate --config configs/desk.cfg --out runs
    python main.py estimate --config configs/desk.cfg --data runs/simulate-.../
    python main.py experiment --config configs/desk.cfg --workers 4 --seed 7

Códigos de salida: 0 éxito, 1 error de uso o de datos, 2 fallo numérico.
"""

from __future__ import annotations

import argparse
import logging
import sys
import traceback
from pathlib import Path
from typing import NoReturn, Optional

from dotenv import load_dotenv

from commands.run_config import RunConfig
from core.command_registry import COMMANDS, get_command, list_commands
from core.errors import ConfigError, DataError, NumericalError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2

logger = logging.getLogger("acidfront")


class CliParser(argparse.ArgumentParser):
    """argparse sale con 2 en errores de uso; aquí el contrato es 1."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _u64(raw: str) -> int:
    value = int(raw)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"la semilla debe estar en [0, 2^64): {raw}")
    return value


def _positive_int(raw: str) -> int:
    value = int(raw)
    if value < 1:
        raise argparse.ArgumentTypeError(f"se esperaba un entero >= 1: {raw}")
    return value


def build_parser() -> CliParser:
    parser = CliParser(
        prog="acidfront",
        description="Estimación de δ₁ en el modelo de invasión tumoral mediada por ácido.",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMANDO", parser_class=CliParser)
    sub.required = True

    for name in list_commands():
        cmd = sub.add_parser(name, help=COMMANDS[name].help, description=COMMANDS[name].help)
        cmd.add_argument("--config", type=Path, default=None, help="Fichero 'clave = valor' (ver docs/CONFIG.md).")
        cmd.add_argument("--out", type=Path, default=None, help="Raíz de los directorios de ejecución.")
        cmd.add_argument("--workers", type=_positive_int, default=None, help="Procesos (gana a ACIDFRONT_WORKERS).")
        cmd.add_argument("--seed", type=_u64, default=None, help="Semilla base (u64).")
        cmd.add_argument("--data", type=Path, default=None, help="Directorio con û₃ (estimate, sweep, gradcheck).")
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    base = RunConfig.from_file(args.config) if args.config is not None else RunConfig().validate()
    return base.with_overrides(dir_output=args.out, workers=args.workers, seed=args.seed, data=args.data)


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    load_dotenv()

    try:
        config = load_config(args)
        runner_cls = get_command(args.command)
        with runner_cls(config) as runner:
            run_dir = runner.run()
        print(run_dir)
        return EXIT_OK

    except (ConfigError, DataError) as e:
        print(f"ERROR: {e}", file=sys.stderr)
        logger.error(f"Error de uso o de datos: {e}")
        return EXIT_USAGE

    except NumericalError as e:
        print(f"ERROR numérico: {e}", file=sys.stderr)
        logger.error(f"Fallo numérico: {e}")
        logger.error(traceback.format_exc())
        return EXIT_NUMERICAL

    except KeyboardInterrupt:
        print("Interrumpido por el usuario", file=sys.stderr)
        return 130

    except Exception as e:
        print(f"ERROR inesperado: {e}", file=sys.stderr)
        logger.error(f"Error inesperado: {e}")
        logger.error(traceback.format_exc())
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
