"""Tests for painleve-lab."""
