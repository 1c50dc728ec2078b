"""Tests for the ehdo package."""
