"""Unit tests for AI Firewall components."""
