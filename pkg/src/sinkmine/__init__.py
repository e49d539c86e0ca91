"""sinkmine: taint-sink specification mining for JavaScript-like code.

The pipeline mines flow triples from per-project propagation graphs, infers
per-representation scores with a small linear program, instantiates sink
predictions on a test corpus, boosts them with code similarity against known
sinks, and serves the result to a human triage UI.
"""

__version__ = "0.1.0"
