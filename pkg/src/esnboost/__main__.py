"""Allow ``python -m esnboost`` as an alternative to the console script."""

from .cli import run

run()
