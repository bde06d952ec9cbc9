from abc import ABC, abstractmethod
from argparse import ArgumentParser, Namespace

from interplab.models.grid import LogGrid
from interplab.models.report import ReportDocument


class Presenter(ABC):
    @property
    @abstractmethod
    def name(self) -> str:
        pass

    @property
    @abstractmethod
    def description(self) -> str:
        pass

    @abstractmethod
    def configure(self, parser: ArgumentParser) -> None:
        """Add the subcommand's own flags."""
        pass

    @abstractmethod
    def execute(self, args: Namespace, grid: LogGrid, document: ReportDocument) -> None:
        """Run the subcommand and record its results in the document; library errors propagate."""
        pass
