"""scenesmith: collaborative scene conjuring from natural-language prompts."""

__version__ = "0.1.0"
