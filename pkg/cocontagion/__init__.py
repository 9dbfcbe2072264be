from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version('cocontagion')
except PackageNotFoundError:
    __version__ = '0.1.0'

from cocontagion.graphgen import GraphSpec, generate_layer
from cocontagion.multiplex import pair_layers
from cocontagion.dynamics import SimParams
from cocontagion.engine import run_trial
