from supermoduli.core import main, run, run_exit
from supermoduli.exc import SupermoduliError
from supermoduli.grassmann import GrassmannNumber, SDim
from supermoduli.superconf import ProjectivePoint, SpGL21
from supermoduli.trees import LabeledTree, TreeHom
from supermoduli.modulispaces import NodalCurve, Reparam, StableMapSkeleton
from supermoduli.__version__ import __version__

version_list = [int(i) for i in __version__.split(".") if i.isdigit()]
__versioninfo__ = tuple(version_list)
__version__ = '.'.join(map(str, __versioninfo__))
__all__ = [
    'main', 'run', 'run_exit', 'SupermoduliError', 'GrassmannNumber',
    'SDim', 'ProjectivePoint', 'SpGL21', 'LabeledTree', 'TreeHom',
    'NodalCurve', 'Reparam', 'StableMapSkeleton'
]
