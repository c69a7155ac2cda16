"""Test suite for the pinching-bounds toolkit."""
