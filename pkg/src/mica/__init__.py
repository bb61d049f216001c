"""Mixed-initiative cooking assistant engine.

Grounds a cook's real-time questions and a periodic perception stream
against structured knowledge distilled from an instructional video:
a deterministic dialogue state machine, a proactive deviation monitor,
session memory with budgeted context assembly, sentence-level video
evidence, and accuracy metrics over annotated session traces.
"""

__version__ = "0.1.0"
