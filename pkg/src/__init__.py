"""dartwin-tools - DarTwin DSL parser, flattener, transformer and renderer."""

__version__ = "0.1.0"
