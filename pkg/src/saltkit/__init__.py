"""Assembly-to-SALT abstraction, LLM decompilation pipeline, evaluation and dataset tooling."""

__version__ = "0.1.0"
