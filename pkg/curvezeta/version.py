from ant31box.version import VERSION

from curvezeta import __version__

VERSION.set_version(__version__)
