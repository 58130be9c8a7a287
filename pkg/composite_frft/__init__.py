from .exceptions import *

from .engine import FrftInverter
from .inversion import InversionGrid, Scheme
