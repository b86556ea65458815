"""Conversational browsing engine.

Crawls a website into a navigation graph, derives its main offerings with a
popularity-based menu heuristic, renders pages as non-visual segment trees,
and serves browsing intents (outline, orientation, navigation, lookup,
reading) through a stateful text dialog.
"""

__version__ = "0.1.0"
