"""
Instance generators, JSON documents, the suite runner and the CLI.
"""
from .generators import ScenarioInstance, generate, random_projection, random_rank
from .serialization import dumps, from_document, load, loads, save, to_document
from .suite import evaluate, instance_seed, run_suite

__all__ = [
    "ScenarioInstance",
    "dumps",
    "evaluate",
    "from_document",
    "generate",
    "instance_seed",
    "load",
    "loads",
    "random_projection",
    "random_rank",
    "run_suite",
    "save",
    "to_document",
]
