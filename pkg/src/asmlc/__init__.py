"""asmlc: execute abstract state machines, compile them to lambda
terms with benign constants, and verify exact-cost lockstep simulation.
"""

__version__ = "0.1.0"
