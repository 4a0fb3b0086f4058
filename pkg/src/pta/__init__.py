"""Goal-net-driven teachable agent runtime.

The package wires a hierarchical goal-net interpreter, a fuzzy cognitive
map engine and an ELM-grounded persuasion model into an event-driven agent
that is taught by a learner through concept maps and pushes back with
persuasion cues when motivation or ability drops.
"""

__version__ = "0.1.0"
