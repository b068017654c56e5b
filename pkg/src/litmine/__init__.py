"""litmine: from scientific articles to a searchable dataset catalog.

Pipeline stages: parse articles, gate urban relevance, extract data
cards through a completion provider, verify every card against its
evidence quotes, harmonize time/place/category labels, re-link dead
URLs, and index the result for keyword, faceted, and embedding search.
"""

__version__ = "0.1.0"
