"""Excess-vocabulary and semantic-trend analysis of abstract corpora."""
