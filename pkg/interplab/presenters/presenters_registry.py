from typing import Dict, Optional

from rich.console import Console

from interplab.presenters.presenter import Presenter
from interplab.presenters import (
    WeightsPresenter,
    HardyPresenter,
    KNormPresenter,
    CalculusPresenter,
    InterpReportPresenter,
    DorePresenter,
    MaxRegPresenter,
    BoydPresenter,
    ShowHelpPresenter,
)


class PresentersRegistry:
    def __init__(self, console: Optional[Console] = None):
        self.commands: Dict[str, Presenter] = {}

        self.commands['weights'] = WeightsPresenter()
        self.commands['hardy'] = HardyPresenter()
        self.commands['knorm'] = KNormPresenter()
        self.commands['calculus'] = CalculusPresenter()
        self.commands['interp-report'] = InterpReportPresenter()
        self.commands['dore'] = DorePresenter()
        self.commands['maxreg'] = MaxRegPresenter()
        self.commands['boyd'] = BoydPresenter()

        self.commands['help'] = ShowHelpPresenter(self.commands, console)

    def get(self, command_name: str) -> Optional[Presenter]:
        return self.commands.get(command_name)

    def list_all(self) -> Dict[str, Presenter]:
        return self.commands
