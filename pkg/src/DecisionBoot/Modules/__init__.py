# Computation packages behind the dtb commands.
from . import *
