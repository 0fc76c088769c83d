"""Test suite for cogfeed."""
