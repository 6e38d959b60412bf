from .eigen import cmd_eigen
from .fit_thermistor import cmd_fit_thermistor
from .simulate import cmd_simulate
from .sweep import cmd_sweep, parse_analyses
from .table import cmd_table

__all__ = ["cmd_eigen", "cmd_fit_thermistor", "cmd_simulate", "cmd_sweep", "cmd_table", "parse_analyses"]
