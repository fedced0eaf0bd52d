__version__ = '0.1.0'

from .utils import *
from .numerics import *
from .onepstate import *
from .harper import *
from .kicked import *
from .classical import *
from .rmt import *
