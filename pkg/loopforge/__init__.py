"""Loop graphs, rays and mapping class dynamics on marked surfaces.
"""
from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

__version__ = '0.1.0'


from . import io_utils
from . import surface_model
from . import equator
from . import curves
from . import graphs
from . import dynamics
from . import subsurface
from . import catalog
from . import cli
