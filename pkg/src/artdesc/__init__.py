"""Multi-topic painting description pipeline.

Generates topic-conditioned masked sentences from visual feature grids,
retrieves related knowledge articles with a bigram TF-IDF index, and fills
the masked slots with typed candidate entities. Every trainable component is
built and trained from scratch at desk scale.
"""

__version__ = "0.1.0"
