from .prettier import *
from .prettier_debug import *
from .prettier_log import *
from .prettier_progress import *
