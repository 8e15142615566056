from .constants import *
from .base import *
from .lattice import *
from .report import *
from .settings import *
