import logging
import re
import sys
from argparse import ArgumentParser
from pathlib import Path
from typing import List, Optional, Tuple

from rich.console import Console
from rich.logging import RichHandler

from interplab import __version__
from interplab.cli.args_parsers import parse_grid
from interplab.cli.report_writer import emit_csv, emit_json
from interplab.config import LabConfig
from interplab.models.exceptions import InterpLabError
from interplab.models.grid import LogGrid
from interplab.models.report import ReportDocument
from interplab.presenters.presenters_registry import PresentersRegistry

logger = logging.getLogger(__name__)


def configure_logging(level: Optional[str] = None) -> None:
    """Send log records to stderr through a single RichHandler."""
    level = (level or LabConfig.get_log_level()).upper()
    root = logging.getLogger()
    for handler in list(root.handlers):
        if isinstance(handler, RichHandler):
            root.removeHandler(handler)
    root.addHandler(RichHandler(console=Console(stderr=True), show_path=False))
    root.setLevel(getattr(logging, level, logging.WARNING))


def _common_flags() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--grid", default=None, help="tmin,tmax,n (default 1e-6,1e6,4800)")
    common.add_argument("--seed", type=int, default=None, help="run seed (default INTERPLAB_SEED or 42)")
    common.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    common.add_argument("--csv", default=None, help="write curves to this CSV path")
    common.add_argument("--log-level", default=None, choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp field")
    return common


def build_parser(registry: PresentersRegistry) -> ArgumentParser:
    parser = ArgumentParser(prog="interplab", description="Numerics for generalized real interpolation spaces")
    parser.add_argument("--version", action="version", version=f"interplab {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    common = _common_flags()
    for name, presenter in registry.list_all().items():
        sub = subparsers.add_parser(name, parents=[common], help=presenter.description,
                                    description=presenter.description)
        presenter.configure(sub)
    return parser


def _curve_path(base: str, name: str, several: bool) -> str:
    if not several:
        return base
    path = Path(base)
    slug = re.sub(r"[^A-Za-z0-9]+", "_", name).strip("_") or "curve"
    return str(path.with_name(f"{path.stem}-{slug}{path.suffix or '.csv'}"))


def _write_curves(document: ReportDocument, base: str) -> None:
    if not document.curves:
        logger.warning("--csv given but the command produced no curves")
        return
    several = len(document.curves) > 1
    for name, points in document.curves.items():
        emit_csv(points, _curve_path(base, name, several))


def dispatch(argv: List[str], console: Optional[Console] = None) -> Tuple[int, Optional[ReportDocument]]:
    """
    Run one command.

    Returns:
        (exit code, report document); 0 on success, 1 for numerical or I/O
        errors (recorded in the document), 2 for usage errors
    """
    console = console or Console(stderr=True)
    registry = PresentersRegistry(console)
    parser = build_parser(registry)
    if not argv:
        console.print(parser.format_usage().rstrip(), markup=False, highlight=False)
        return 2, None
    try:
        args = parser.parse_args(argv)
    except SystemExit as error:
        return int(error.code or 0), None
    if args.command is None:
        console.print(parser.format_usage().rstrip(), markup=False, highlight=False)
        return 2, None

    configure_logging(args.log_level)
    saved_seed, saved_grid = LabConfig.get_seed(), LabConfig.get_grid_spec()
    document = ReportDocument(["interplab"] + list(argv), {}, __version__, saved_seed)
    code = 0
    try:
        if args.seed is not None:
            LabConfig.set_seed(args.seed)
        if args.grid is not None:
            LabConfig.set_grid_spec(*parse_grid(args.grid))
        document.seed = LabConfig.get_seed()
        grid = LogGrid(*LabConfig.get_grid_spec())
        document.config["grid"] = [grid.t_min, grid.t_max, grid.n]
        registry.get(args.command).execute(args, grid, document)
        if args.csv:
            _write_curves(document, args.csv)
    except (InterpLabError, ValueError, OSError) as error:
        document.add_error(error)
        console.print(f"[bold red]{type(error).__name__}:[/bold red] {error}", highlight=False)
        code = 1
    finally:
        LabConfig.set_seed(saved_seed)
        LabConfig.set_grid_spec(*saved_grid)

    try:
        emit_json(document, args.out, with_timestamp=not args.no_timestamp)
    except OSError as error:
        console.print(f"[bold red]Cannot write report:[/bold red] {error}", highlight=False)
        code = 1
    return code, document


def main():
    """Main entry point for the interplab command line."""
    code, _ = dispatch(sys.argv[1:])
    sys.exit(code)


if __name__ == "__main__":
    main()
