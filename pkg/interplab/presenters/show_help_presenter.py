from argparse import ArgumentParser, Namespace
from typing import Dict

from rich.console import Console
from rich.table import Table

from interplab.models.grid import LogGrid
from interplab.models.report import ReportDocument
from interplab.presenters.presenter import Presenter


class ShowHelpPresenter(Presenter):
    def __init__(self, commands: Dict[str, Presenter], console: Console = None):
        self.commands = commands
        self.console = console or Console(stderr=True)

    @property
    def name(self) -> str:
        return "help"

    @property
    def description(self) -> str:
        return "Shows available commands"

    def configure(self, parser: ArgumentParser) -> None:
        pass

    def execute(self, args: Namespace, grid: LogGrid, document: ReportDocument) -> None:
        table = Table(title="interplab commands")
        table.add_column("Command", style="bold cyan")
        table.add_column("Description")
        for name, presenter in self.commands.items():
            table.add_row(name, presenter.description)
        self.console.print(table)
        document.add_result("commands", {name: p.description for name, p in self.commands.items()})
