# This file marks the engine directory as a Python package
