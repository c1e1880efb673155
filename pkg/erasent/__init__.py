from .version import *
from .primitive import *
from .misc import *
from . import prettier
from .container import *
from . import os
from .errors import *
from .project import *
from . import concurrency
from .model import *
from .dynamics import *
from .erasure import *
from .thermal import *
from .entanglement import *
from .sweep import *
from . import cli
