from .algebra import build_dirac_set
from .exceptions import QLBError
from .lattice import Grid, SpinorField
from .version import version_info as VERSION
from .version import version_string as __version__

__all__ = ['build_dirac_set', 'Grid', 'QLBError', 'SpinorField', '__version__', 'VERSION']
